use std::f64::consts::PI;

use num_complex::Complex64;

use super::model::{LocalModel, PairSample};
use super::AnalyticError;

pub type RealMat2 = [[f64; 2]; 2];

pub const DEFAULT_STEPS: usize = 4096;
pub const MIN_STEPS: usize = 64;

/// Increment of `log ζ` from `z0` to `z1` by integrating `dζ/ζ`.
///
/// One midpoint step `2(z1 − z0)/(z1 + z0)` is off by `O(h³)`; combining it
/// with two half steps cancels that term.
fn log_increment(z0: Complex64, z1: Complex64) -> Complex64 {
    let mid = |a: Complex64, b: Complex64| 2.0 * (b - a) / (b + a);
    let zm = (z0 + z1) / 2.0;
    let zm = zm * (z0.norm() / zm.norm());
    let full = mid(z0, z1);
    let halves = mid(z0, zm) + mid(zm, z1);
    halves + (halves - full) / 3.0
}

/// Pair at the start and the end of the loop `ζ(s) = r·e^{2πis}`, with
/// `log ζ` carried along the path.
pub fn continue_pair(model: &LocalModel, radius: f64, steps: usize) -> Result<(PairSample, PairSample), AnalyticError> {
    if steps < MIN_STEPS {
        return Err(AnalyticError::TooFewSteps { steps, min: MIN_STEPS });
    }
    let start = Complex64::new(radius, 0.0);
    model.check_point(start)?;
    let mut log_z = Complex64::new(radius.ln(), 0.0);
    let first = model.pair_on_branch(log_z);
    let mut prev = start;
    for k in 1..=steps {
        let z = Complex64::from_polar(radius, 2.0 * PI * (k as f64) / (steps as f64));
        let inc = log_increment(prev, z);
        if inc.im.abs() > PI / 2.0 || !inc.is_finite() {
            return Err(AnalyticError::BranchTrackingFailure { step: k, jump: inc.im });
        }
        log_z += inc;
        prev = z;
    }
    Ok((first, model.pair_on_branch(log_z)))
}

/// Real `A` with `(dz, dw)_end = (dz, dw)_start·A`.
pub fn solve_monodromy(start: &PairSample, end: &PairSample) -> Result<RealMat2, AnalyticError> {
    // dz_end = a·dz + c·dw and dw_end = b·dz + d·dw, each split into real and imaginary parts.
    let (p, q) = (start.dz, start.dw);
    let det = p.re * q.im - q.re * p.im;
    if det.abs() < 1e-300 {
        return Err(AnalyticError::IllConditioned("start pair is real-linearly dependent".into()));
    }
    let solve = |r: Complex64| -> (f64, f64) {
        let x = (r.re * q.im - q.re * r.im) / det;
        let y = (p.re * r.im - r.re * p.im) / det;
        (x, y)
    };
    let (a, c) = solve(end.dz);
    let (b, d) = solve(end.dw);
    Ok([[a, b], [c, d]])
}

/// Monodromy of the special pair around the counterclockwise circle of the given radius.
pub fn continue_monodromy(model: &LocalModel, radius: f64, steps: usize) -> Result<RealMat2, AnalyticError> {
    let (s, e) = continue_pair(model, radius, steps)?;
    let a = solve_monodromy(&s, &e)?;
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (det - 1.0).abs() >= 1e-8 {
        return Err(AnalyticError::IllConditioned(format!("recovered monodromy has determinant {det}")));
    }
    Ok(a)
}

/// Entrywise rounding to an integer matrix literal `[a, b, c, d]`.
pub fn round_matrix(a: &RealMat2) -> [i64; 4] {
    [a[0][0].round() as i64, a[0][1].round() as i64, a[1][0].round() as i64, a[1][1].round() as i64]
}

pub fn max_abs_diff(a: &RealMat2, b: &RealMat2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}
