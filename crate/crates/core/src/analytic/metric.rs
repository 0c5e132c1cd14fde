use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use super::model::LocalModel;
use super::AnalyticError;

/// `Im(τ)·|dz/dζ|²/2`, the coefficient of `i dζ∧dζ̄` in the Kähler form.
pub fn density(model: &LocalModel, zeta: Complex64) -> Result<f64, AnalyticError> {
    let p = model.pair(zeta)?;
    let d = p.tau().im * p.dz.norm_sqr() / 2.0;
    if !(d > 0.0 && d.is_finite()) {
        return Err(AnalyticError::NonPositiveDensity { re: zeta.re, im: zeta.im, value: d });
    }
    Ok(d)
}

/// `√density` at radius `s` on the positive real ray (no domain check beyond `s > 0`).
fn ray_length_density(model: &LocalModel, s: f64) -> Result<f64, AnalyticError> {
    density(model, Complex64::new(s, 0.0)).map(f64::sqrt)
}

const CIRCLE_POINTS: usize = 4096;
const GL_DEGREE: usize = 20;
const DYADIC_PANELS: usize = 80;

/// Length of the circle `|ζ| = r` in the model metric (up to the common factor √2).
pub fn circle_length(model: &LocalModel, r: f64) -> Result<f64, AnalyticError> {
    // Periodic trapezoid rule: spectrally accurate for smooth periodic integrands.
    let mut sum = 0.0;
    for k in 0..CIRCLE_POINTS {
        let phi = 2.0 * PI * (k as f64) / (CIRCLE_POINTS as f64);
        sum += density(model, Complex64::from_polar(r, phi))?.sqrt();
    }
    Ok(sum * r * 2.0 * PI / CIRCLE_POINTS as f64)
}

/// Distance from the singular point to the circle `|ζ| = r` along the positive ray.
///
/// With `s = r·u^{1/p}`, where `√density ~ s^{p−1}`, the integrand becomes
/// bounded in `u`; the remaining logarithmic behaviour at `u = 0` is handled
/// by Gauss–Legendre on dyadic panels `[2^{-k-1}, 2^{-k}]`.
pub fn ray_length(model: &LocalModel, r: f64) -> Result<f64, AnalyticError> {
    let p = model.kind.radial_exponent();
    let rule = GaussLegendre::new(NonZeroUsize::new(GL_DEGREE).expect("nonzero degree"));
    let mut err = None;
    let mut integrand = |u: f64| -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        let s = r * u.powf(1.0 / p);
        let ds_du = r / p * u.powf(1.0 / p - 1.0);
        match ray_length_density(model, s) {
            Ok(v) => v * ds_du,
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        }
    };
    let mut total = 0.0;
    let mut hi = 1.0f64;
    for _ in 0..DYADIC_PANELS {
        let lo = hi / 2.0;
        total += rule.integrate(lo, hi, &mut integrand);
        hi = lo;
    }
    if let Some(e) = err {
        return Err(e);
    }
    if !total.is_finite() || total <= 0.0 {
        return Err(AnalyticError::QuadratureFailure(format!("ray integral evaluated to {total}")));
    }
    Ok(total)
}

/// `C(r)/L(r)`: circumference of the circle of coordinate radius `r` over its
/// distance from the singular point. Tends to the cone angle `2πβ` for cones.
pub fn cone_angle(model: &LocalModel, r: f64) -> Result<f64, AnalyticError> {
    model.check_point(Complex64::new(r, 0.0))?;
    let c = circle_length(model, r)?;
    let l = ray_length(model, r)?;
    let ratio = c / l;
    if !ratio.is_finite() {
        return Err(AnalyticError::QuadratureFailure(format!("C/L = {c}/{l}")));
    }
    Ok(ratio)
}

fn log_im_tau(model: &LocalModel, zeta: Complex64) -> Result<f64, AnalyticError> {
    let t = model.pair(zeta)?.tau().im;
    if !(t > 0.0) {
        return Err(AnalyticError::NonPositiveDensity { re: zeta.re, im: zeta.im, value: t });
    }
    Ok(t.ln())
}

/// `−Δ log Im τ / (4·density)`: the Weil–Petersson form over the Kähler form,
/// by a five-point stencil of spacing `h`.
pub fn curvature_sample(model: &LocalModel, zeta: Complex64, h: f64) -> Result<f64, AnalyticError> {
    // The stencil must stay well away from the singular point.
    if !(h > 0.0) || zeta.norm() <= 2.0 * h {
        return Err(AnalyticError::StencilOutsideDomain { re: zeta.re, im: zeta.im, h });
    }
    let stencil = [Complex64::new(h, 0.0), Complex64::new(-h, 0.0), Complex64::new(0.0, h), Complex64::new(0.0, -h)];
    for d in stencil {
        model.check_point(zeta + d).map_err(|_| AnalyticError::StencilOutsideDomain { re: zeta.re, im: zeta.im, h })?;
    }
    let c = log_im_tau(model, zeta)?;
    let mut lap = -4.0 * c;
    for d in stencil {
        lap += log_im_tau(model, zeta + d)?;
    }
    lap /= h * h;
    Ok(-lap / (4.0 * density(model, zeta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::model::ModelKind;
    use num_rational::Rational64;

    fn type3(p: i64, q: i64) -> LocalModel {
        LocalModel::new(ModelKind::Type3(Rational64::new(p, q)))
    }

    #[test]
    fn density_closed_form_type3() {
        // (1 − |f|²)|ζ|^{2β−2}/2 with f = 0, β = 1/2, |ζ| = 0.1.
        let d = density(&type3(1, 2), Complex64::new(0.1, 0.0)).unwrap();
        assert!((d - 5.0).abs() < 1e-12, "{d}");
        let f = Complex64::new(0.3, -0.2);
        let m = type3(1, 2).with_f(vec![f]);
        let z = Complex64::new(0.02, 0.07);
        let closed = (1.0 - f.norm_sqr()) * z.norm().powf(-1.0) / 2.0;
        assert!((density(&m, z).unwrap() - closed).abs() < 1e-12 * closed);
    }

    #[test]
    fn density_closed_form_in() {
        // I_n with f = 0: Im τ = −n·log|ζ|/(2π), |dz/dζ| = 1.
        for n in [1u64, 3] {
            let m = LocalModel::new(ModelKind::I(n));
            let z = Complex64::new(0.1, 0.0);
            let closed = -(n as f64) * z.norm().ln() / (4.0 * PI);
            assert!((density(&m, z).unwrap() - closed).abs() < 1e-12);
        }
        // Type (1) Kähler form: −(log|ζ| + Im f)/2.
        let f = Complex64::new(0.2, 0.1);
        let m = LocalModel::new(ModelKind::Type1).with_f(vec![f]);
        let z = Complex64::new(-0.03, 0.04);
        let closed = -(z.norm().ln() + f.im) / 2.0;
        assert!((density(&m, z).unwrap() - closed).abs() < 1e-12);
    }

    #[test]
    fn flat_cone_angles() {
        for (p, q) in [(1, 6), (1, 2), (5, 6)] {
            let a = cone_angle(&type3(p, q), 1e-3).unwrap();
            let want = 2.0 * PI * p as f64 / q as f64;
            assert!((a - want).abs() < 1e-9, "{p}/{q}: {a}");
        }
    }

    #[test]
    fn perturbed_cone_angle_converges() {
        let m = type3(3, 4).with_f(vec![Complex64::new(0.2, 0.1), Complex64::new(0.1, 0.0)]);
        let a1 = cone_angle(&m, 1e-3).unwrap();
        let a2 = cone_angle(&m, 5e-4).unwrap();
        assert!((a1 - 1.5 * PI).abs() < 1e-2, "{a1}");
        assert!((a2 - 1.5 * PI).abs() < (a1 - 1.5 * PI).abs() + 1e-12);
    }

    #[test]
    fn curvature_flat_models_vanish() {
        for m in [type3(1, 3), LocalModel::new(ModelKind::IStar0), LocalModel::new(ModelKind::III)] {
            let k = curvature_sample(&m, Complex64::new(0.1, 0.02), 1e-4).unwrap();
            assert!(k.abs() < 1e-6, "{k}");
        }
    }

    #[test]
    fn curvature_in_matches_closed_form() {
        // −Δ log(−log r) = 1/(r² log² r), density = −log r/(4π).
        let m = LocalModel::new(ModelKind::I(1));
        let r: f64 = 0.1;
        let l = -r.ln();
        let want = PI / (r * r * l * l * l);
        let k = curvature_sample(&m, Complex64::new(r, 0.0), 1e-4).unwrap();
        assert!(k > 1e-6);
        assert!((k - want).abs() < 1e-4 * want, "{k} vs {want}");
    }

    #[test]
    fn stencil_domain() {
        let m = LocalModel::new(ModelKind::I(1));
        assert!(curvature_sample(&m, Complex64::new(1e-5, 0.0), 1e-4).is_err());
        assert!(curvature_sample(&m, Complex64::new(0.4999, 0.0), 1e-3).is_err());
        // Im τ is single-valued, so the stencil may straddle the branch cut.
        let a = curvature_sample(&m, Complex64::new(-0.1, 0.0), 1e-4).unwrap();
        let b = curvature_sample(&m, Complex64::new(0.1, 0.0), 1e-4).unwrap();
        assert!((a - b).abs() < 1e-4 * b);
    }
}
