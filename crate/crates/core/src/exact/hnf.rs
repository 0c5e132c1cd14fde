//! Column Hermite normal form for the right action of SL₂(ℤ) on integer
//! matrices of positive determinant.
//!
//! The representative of the orbit `B·SL₂(ℤ)` is the upper-triangular
//! `[[α, β], [0, δ]]` with `α, δ > 0` and `0 ≤ β < α`. Right multiplication
//! acts by column operations, so the free entry is reduced modulo the pivot
//! of the column that can be added to it, which is `α`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ExactError, IntMat2};

/// Extended gcd returning `(g, x, y)` with `g = x·a + y·b`, `g ≥ 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Returns `(H, U)` with `B·U = H`, `det U = 1` and `H` in normal form.
pub fn column_hnf(b: &IntMat2) -> Result<(IntMat2, IntMat2), ExactError> {
    let det = b.det();
    if !det.is_positive() {
        return Err(ExactError::NonPositiveDeterminant(b.to_string()));
    }
    // Clear the lower-left entry: (c, d)·U₁ = (0, g).
    let (g, x, y) = ext_gcd(&b.c, &b.d);
    let u1 = IntMat2 { a: &b.d / &g, b: x, c: -(&b.c / &g), d: y };
    let h1 = b * &u1;
    debug_assert!(h1.c.is_zero());
    // α = det/g > 0; reduce β modulo α by subtracting multiples of column 1.
    let k = h1.b.div_floor(&h1.a);
    let u2 = IntMat2 { a: BigInt::one(), b: -k, c: BigInt::zero(), d: BigInt::one() };
    let h = &h1 * &u2;
    let u = &u1 * &u2;
    debug_assert!(h.a.is_positive() && h.d.is_positive());
    Ok((h, u))
}

/// True iff `h` is already in column normal form.
pub fn is_column_hnf(h: &IntMat2) -> bool {
    h.c.is_zero() && h.a.is_positive() && h.d.is_positive() && !h.b.is_negative() && h.b < h.a
}

/// All normal forms of determinant `m`, ordered lexicographically by `(α, β, δ)`.
pub fn hnf_of_det(m: u64) -> Vec<IntMat2> {
    let mut out = Vec::new();
    for alpha in 1..=m {
        if m % alpha != 0 {
            continue;
        }
        let delta = m / alpha;
        for beta in 0..alpha {
            out.push(IntMat2::new(alpha, beta, 0, delta));
        }
    }
    out
}

/// Normal forms of determinant `m` with content 1.
pub fn primitive_hnf_of_det(m: u64) -> Vec<IntMat2> {
    hnf_of_det(m).into_iter().filter(|h| h.content().is_one()).collect()
}
