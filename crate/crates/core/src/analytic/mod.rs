//! Numerical local singular models.
//!
//! Forms are evaluated as `dz/dζ`, `dw/dζ` with an explicit branch of
//! `log ζ`; monodromy uses the row-vector convention
//! `(dz, dw)_end = (dz, dw)_start·A`.

mod continuation;
mod metric;
mod model;
mod twist;

use thiserror::Error;

pub use continuation::{
    continue_monodromy, continue_pair, max_abs_diff, round_matrix, solve_monodromy, RealMat2, DEFAULT_STEPS, MIN_STEPS,
};
pub use metric::{circle_length, cone_angle, curvature_sample, density, ray_length};
pub use model::{e3, Frame, LocalModel, ModelKind, PairSample, ADMISSIBLE_BETAS, DEFAULT_RADIUS, IDENTITY_FRAME};
pub use twist::{angle_mod_pi_diff, recover_twist, twist, TwistRecovery, RESIDUAL_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("point {re}+{im}i is outside the punctured disk of radius {radius}")]
    OutsideDomain { re: f64, im: f64, radius: f64 },
    #[error("density at {re}+{im}i is {value}, not positive")]
    NonPositiveDensity { re: f64, im: f64, value: f64 },
    #[error("branch tracking failed at step {step}: argument jump {jump}")]
    BranchTrackingFailure { step: usize, jump: f64 },
    #[error("{steps} continuation steps requested, at least {min} needed")]
    TooFewSteps { steps: usize, min: usize },
    #[error("ill-conditioned: {0}")]
    IllConditioned(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("stencil of size {h} around {re}+{im}i leaves the domain")]
    StencilOutsideDomain { re: f64, im: f64, h: f64 },
    #[error("models are not related by a twist (residual {residual:e})")]
    NotRelated { residual: f64 },
    #[error("twist is not unique: the metric is flat")]
    NotUnique,
    #[error("degenerate samples: {0}")]
    DegenerateSamples(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}
