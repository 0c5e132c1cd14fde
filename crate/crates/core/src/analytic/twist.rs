use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::continuation::RealMat2;
use super::model::LocalModel;
use super::AnalyticError;

/// Multiplies both forms by `e^{iθ}`. The metric and the monodromy are unchanged.
pub fn twist(model: &LocalModel, theta: f64) -> LocalModel {
    let mut m = model.clone();
    m.theta += theta;
    m
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwistRecovery {
    /// θ in `[0, π)`.
    pub theta: f64,
    /// `P ∈ SL₂(ℝ)` with `(dz₂, dw₂) = e^{iθ}·(dz₁, dw₁)·P`.
    pub frame: RealMat2,
    /// Smallest singular value of the normalized sample system.
    pub residual: f64,
}

pub const RESIDUAL_TOL: f64 = 1e-8;

/// Sample points in the right half of the punctured disk, so the principal
/// branch is continuous across all of them.
fn sample_points(radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let t = (k as f64 + 0.5) / n as f64;
            let r = radius * (0.05 + 0.85 * t);
            let phi = (PI / 2.0) * 0.9 * (2.0 * ((k * 7919) % n) as f64 / n as f64 - 1.0);
            Complex64::from_polar(r, phi)
        })
        .collect()
}

/// Finds `(θ, P)` with `(dz₂, dw₂) = e^{iθ}·(dz₁, dw₁)·P` from sampled values.
///
/// Writing `u = e^{−iθ}`, each sample gives `u·dz₂ = p₁₁dz₁ + p₂₁dw₁` and
/// `u·dw₂ = p₁₂dz₁ + p₂₂dw₁`: four real equations, homogeneous in the six
/// unknowns `(Re u, Im u, p₁₁, p₁₂, p₂₁, p₂₂)`. The null vector comes from the SVD.
pub fn recover_twist(m1: &LocalModel, m2: &LocalModel, samples: usize) -> Result<TwistRecovery, AnalyticError> {
    if samples < 2 {
        return Err(AnalyticError::DegenerateSamples(format!("{samples} samples")));
    }
    let radius = m1.radius.min(m2.radius);
    let mut rows: Vec<[f64; 6]> = Vec::with_capacity(4 * samples);
    for z in sample_points(radius, samples) {
        let a = m1.pair(z)?;
        let b = m2.pair(z)?;
        let scale = 1.0 / (a.dz.norm() + a.dw.norm() + b.dz.norm() + b.dw.norm());
        let (dz1, dw1, dz2, dw2) = (a.dz * scale, a.dw * scale, b.dz * scale, b.dw * scale);
        // u·x − (p·y): real and imaginary parts, with u = ur + i·ui.
        for (x, col_z, col_w) in [(dz2, 2usize, 4usize), (dw2, 3, 5)] {
            let mut re = [0.0; 6];
            let mut im = [0.0; 6];
            re[0] = x.re;
            re[1] = -x.im;
            im[0] = x.im;
            im[1] = x.re;
            re[col_z] = -dz1.re;
            im[col_z] = -dz1.im;
            re[col_w] = -dw1.re;
            im[col_w] = -dw1.im;
            rows.push(re);
            rows.push(im);
        }
    }
    let mat = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or_else(|| AnalyticError::DegenerateSamples("SVD failed".into()))?;
    let mut order: Vec<usize> = (0..6).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let s_max = svd.singular_values[order[5]];
    if !(s_max > 0.0) {
        return Err(AnalyticError::DegenerateSamples("zero sample matrix".into()));
    }
    let s_min = svd.singular_values[order[0]] / s_max;
    let s_next = svd.singular_values[order[1]] / s_max;
    if s_min > RESIDUAL_TOL {
        return Err(AnalyticError::NotRelated { residual: s_min });
    }
    if s_next <= RESIDUAL_TOL {
        // More than one solution: τ is constant and θ is not determined.
        return Err(AnalyticError::NotUnique);
    }
    let v: Vec<f64> = (0..6).map(|j| v_t[(order[0], j)]).collect();
    let u = Complex64::new(v[0], v[1]);
    if u.norm() < 1e-12 {
        return Err(AnalyticError::NotRelated { residual: s_min });
    }
    // (u, P) and (−u, −P) describe the same relation; pick θ = −arg u in [0, π).
    let mut k = 1.0 / u.norm();
    let mut theta = -u.arg();
    if theta < 0.0 {
        theta += PI;
        k = -k;
    }
    if theta >= PI {
        theta -= PI;
        k = -k;
    }
    let frame = [[v[2] * k, v[3] * k], [v[4] * k, v[5] * k]];
    let det = frame[0][0] * frame[1][1] - frame[0][1] * frame[1][0];
    if (det - 1.0).abs() > 1e-6 {
        // A unit u with det P ≠ 1 rescales the metric: not a twist.
        return Err(AnalyticError::NotRelated { residual: (det - 1.0).abs() });
    }
    Ok(TwistRecovery { theta, frame, residual: s_min })
}

/// Distance between two angles modulo π.
pub fn angle_mod_pi_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}
