//! Monodromy arithmetic for integral special Kähler structures on ℙ¹.
//!
//! * [`exact`]: exact 2×2 integer matrices, Hermite/Smith normal forms, `S`/`T` words.
//! * [`modgroup`]: finite-index subgroups of SL₂(ℤ) and PSL₂(ℤ).
//! * [`ng`]: counting integral conjugators `N(G)`.
//! * [`kodaira`]: Kodaira types of monodromy matrices and fiber configurations.
//! * [`analytic`]: numerical local singular models.
//! * [`fixtures`]: embedded reference data.

pub mod analytic;
pub mod exact;
pub mod fixtures;
pub mod kodaira;
pub mod modgroup;
pub mod ng;
