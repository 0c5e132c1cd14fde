use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AnalyticError;
use crate::exact::IntMat2;
use crate::kodaira::KodairaType;

/// Frame change `(dz, dw) ↦ (dz, dw)·P`, row-major.
pub type Frame = [[f64; 2]; 2];

pub const IDENTITY_FRAME: Frame = [[1.0, 0.0], [0.0, 1.0]];

pub const ADMISSIBLE_BETAS: [(i64, i64); 7] = [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 6), (5, 6)];

pub fn e3() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// Local singular model: a row of the integral table or a raw normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    I(u64),
    IStar(u64),
    IStar0,
    II,
    IIStar,
    III,
    IIIStar,
    IV,
    IVStar,
    /// `dz = dζ`, `dw = −(i log ζ + f) dζ`.
    Type1,
    /// Type1 times `ζ^{-1/2}`.
    Type2,
    /// `dz = (1 − f) ζ^{β−1} dζ`, `dw = i(1 + f) ζ^{β−1} dζ`.
    Type3(Rational64),
}

impl ModelKind {
    pub fn from_type(t: KodairaType) -> Option<ModelKind> {
        use KodairaType as K;
        Some(match t {
            K::Smooth => return None,
            K::I(n) => ModelKind::I(n),
            K::IStar(0) => ModelKind::IStar0,
            K::IStar(n) => ModelKind::IStar(n),
            K::II => ModelKind::II,
            K::IIStar => ModelKind::IIStar,
            K::III => ModelKind::III,
            K::IIIStar => ModelKind::IIIStar,
            K::IV => ModelKind::IV,
            K::IVStar => ModelKind::IVStar,
        })
    }

    pub fn kodaira_type(&self) -> Option<KodairaType> {
        use KodairaType as K;
        Some(match self {
            ModelKind::I(n) => K::I(*n),
            ModelKind::IStar(n) => K::IStar(*n),
            ModelKind::IStar0 => K::IStar(0),
            ModelKind::II => K::II,
            ModelKind::IIStar => K::IIStar,
            ModelKind::III => K::III,
            ModelKind::IIIStar => K::IIIStar,
            ModelKind::IV => K::IV,
            ModelKind::IVStar => K::IVStar,
            _ => return None,
        })
    }

    /// β of the flat cone, for the finite-order kinds.
    pub fn beta(&self) -> Option<Rational64> {
        match self {
            ModelKind::Type3(b) => Some(*b),
            other => other.kodaira_type().and_then(|t| t.beta()),
        }
    }

    /// Exponent `p` with `√density ~ |ζ|^{p−1}` up to logarithms; used to
    /// flatten the radial quadrature.
    pub fn radial_exponent(&self) -> f64 {
        match self {
            ModelKind::I(_) | ModelKind::Type1 => 1.0,
            ModelKind::IStar(_) | ModelKind::Type2 => 0.5,
            other => other.beta().and_then(|b| b.to_f64()).unwrap_or(1.0),
        }
    }

    /// Exponent `e` in `f = ζ^e·g` for the finite-order kinds: `e ≡ −2β (mod 1)`.
    pub fn f_exponent(&self) -> f64 {
        match (self, self.beta()) {
            (ModelKind::IStar0, _) => 0.0,
            (_, Some(b)) => {
                let e = -b * 2;
                (e - e.floor()).to_f64().unwrap_or(0.0)
            }
            (_, None) => 0.0,
        }
    }

    /// Monodromy of the unframed model, when integral.
    pub fn exact_monodromy(&self) -> Option<IntMat2> {
        self.kodaira_type().map(|t| t.standard_matrix())
    }

    /// `(dz, dw)` built from `ζ^{β−1}` with the `i` direction (III-like) or the `e₃` direction.
    fn uses_e3(&self) -> bool {
        matches!(self, ModelKind::II | ModelKind::IIStar | ModelKind::IV | ModelKind::IVStar)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Type1 => write!(f, "Type1"),
            ModelKind::Type2 => write!(f, "Type2"),
            ModelKind::Type3(b) => write!(f, "Type3({b})"),
            other => write!(f, "{}", other.kodaira_type().expect("table kind")),
        }
    }
}

impl FromStr for ModelKind {
    type Err = AnalyticError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "Type1" => return Ok(ModelKind::Type1),
            "Type2" => return Ok(ModelKind::Type2),
            _ => {}
        }
        if let Some(inner) = t.strip_prefix("Type3(").and_then(|r| r.strip_suffix(')')) {
            let b: Rational64 = inner.trim().parse().map_err(|_| AnalyticError::InvalidModel(format!("bad β in {s:?}")))?;
            return Ok(ModelKind::Type3(check_beta(b)?));
        }
        let k: KodairaType = t.parse().map_err(|_| AnalyticError::InvalidModel(format!("unknown model kind {s:?}")))?;
        ModelKind::from_type(k).ok_or_else(|| AnalyticError::InvalidModel("I0 is not a singular model".into()))
    }
}

fn check_beta(b: Rational64) -> Result<Rational64, AnalyticError> {
    if ADMISSIBLE_BETAS.iter().any(|&(p, q)| Rational64::new(p, q) == b) {
        Ok(b)
    } else {
        Err(AnalyticError::InvalidModel(format!("β = {b} is not admissible")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelJson", into = "ModelJson")]
pub struct LocalModel {
    pub kind: ModelKind,
    /// Analytic part `f`; for fractional kinds, the coefficients of `g` in `f = ζ^e·g`.
    pub f: Vec<Complex64>,
    /// `I₀*` only: `dz = g ζ^{-1/2} dζ`, `dw = h ζ^{-1/2} dζ`.
    pub g: Vec<Complex64>,
    pub h: Vec<Complex64>,
    /// Twist phase θ: both forms carry a factor `e^{iθ}`.
    pub theta: f64,
    pub frame: Frame,
    /// Radius of the punctured disk on which the model is evaluated.
    pub radius: f64,
}

pub const DEFAULT_RADIUS: f64 = 0.5;

impl LocalModel {
    pub fn new(kind: ModelKind) -> Self {
        let (g, h) = match kind {
            ModelKind::IStar0 => (vec![Complex64::one()], vec![Complex64::i()]),
            _ => (Vec::new(), Vec::new()),
        };
        LocalModel { kind, f: Vec::new(), g, h, theta: 0.0, frame: IDENTITY_FRAME, radius: DEFAULT_RADIUS }
    }

    pub fn of_type(t: KodairaType) -> Option<Self> {
        ModelKind::from_type(t).map(LocalModel::new)
    }

    pub fn with_f(mut self, f: Vec<Complex64>) -> Self {
        self.f = f;
        self
    }

    pub fn with_gh(mut self, g: Vec<Complex64>, h: Vec<Complex64>) -> Self {
        self.g = g;
        self.h = h;
        self
    }

    pub fn with_frame(mut self, p: Frame) -> Self {
        self.frame = p;
        self
    }

    pub fn with_radius(mut self, r: f64) -> Self {
        self.radius = r;
        self
    }

    /// True when τ is constant, i.e. the metric is flat.
    pub fn is_flat(&self) -> bool {
        match self.kind {
            ModelKind::IStar0 => {
                let g0 = self.g.first().copied().unwrap_or_default();
                let h0 = self.h.first().copied().unwrap_or_default();
                let prop = |k: usize| {
                    let gk = self.g.get(k).copied().unwrap_or_default();
                    let hk = self.h.get(k).copied().unwrap_or_default();
                    (gk * h0 - hk * g0).norm() < 1e-14
                };
                (1..self.g.len().max(self.h.len())).all(prop)
            }
            k if k.beta().is_some() => self.f.iter().all(|c| c.norm() == 0.0),
            _ => false,
        }
    }

    pub fn check_point(&self, zeta: Complex64) -> Result<(), AnalyticError> {
        let r = zeta.norm();
        if !(r > 0.0 && r < self.radius) {
            return Err(AnalyticError::OutsideDomain { re: zeta.re, im: zeta.im, radius: self.radius });
        }
        Ok(())
    }

    /// Special pair at `ζ = exp(log_zeta)`, with multivalued factors taken
    /// on the branch determined by `log_zeta`.
    pub fn pair_on_branch(&self, log_zeta: Complex64) -> PairSample {
        let zeta = log_zeta.exp();
        let (dz0, dw0) = self.raw_pair(zeta, log_zeta);
        let u = Complex64::from_polar(1.0, self.theta);
        let (dz0, dw0) = (u * dz0, u * dw0);
        let p = &self.frame;
        PairSample { zeta, log_zeta, dz: dz0 * p[0][0] + dw0 * p[1][0], dw: dz0 * p[0][1] + dw0 * p[1][1] }
    }

    /// Special pair on the principal branch.
    pub fn pair(&self, zeta: Complex64) -> Result<PairSample, AnalyticError> {
        self.check_point(zeta)?;
        Ok(self.pair_on_branch(zeta.ln()))
    }

    fn raw_pair(&self, zeta: Complex64, log_zeta: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let half = (-0.5 * log_zeta).exp();
        match self.kind {
            ModelKind::I(n) | ModelKind::IStar(n) => {
                let dw = (n as f64) / (2.0 * PI * i) * (log_zeta + poly(&self.f, zeta));
                let s = if matches!(self.kind, ModelKind::IStar(_)) { half } else { Complex64::one() };
                (s, dw * s)
            }
            ModelKind::Type1 | ModelKind::Type2 => {
                let dw = -(i * log_zeta + poly(&self.f, zeta));
                let s = if self.kind == ModelKind::Type2 { half } else { Complex64::one() };
                (s, dw * s)
            }
            ModelKind::IStar0 => (poly(&self.g, zeta) * half, poly(&self.h, zeta) * half),
            kind => {
                let beta = kind.beta().and_then(|b| b.to_f64()).expect("finite-order kind");
                let power = ((beta - 1.0) * log_zeta).exp();
                let f = (kind.f_exponent() * log_zeta).exp() * poly(&self.f, zeta);
                if kind.uses_e3() {
                    let e = e3();
                    ((1.0 - f) * power, e * (1.0 - e * f) * power)
                } else {
                    ((1.0 - f) * power, i * (1.0 + f) * power)
                }
            }
        }
    }
}

fn poly(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::zero(), |acc, &k| acc * z + k)
}

/// Values of `dz/dζ`, `dw/dζ` at a point, with the branch that produced them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSample {
    pub zeta: Complex64,
    pub log_zeta: Complex64,
    pub dz: Complex64,
    pub dw: Complex64,
}

impl PairSample {
    pub fn tau(&self) -> Complex64 {
        self.dw / self.dz
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ModelJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    f: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    g: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    h: Vec<[f64; 2]>,
    #[serde(default)]
    theta: f64,
    #[serde(default = "default_frame")]
    frame: Frame,
    #[serde(default = "default_radius")]
    radius: f64,
}

fn default_frame() -> Frame {
    IDENTITY_FRAME
}

fn default_radius() -> f64 {
    DEFAULT_RADIUS
}

fn to_c(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn from_c(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

impl TryFrom<ModelJson> for LocalModel {
    type Error = AnalyticError;

    fn try_from(j: ModelJson) -> Result<Self, Self::Error> {
        let kind = match (j.kind.as_str(), &j.beta) {
            ("Type3", Some(b)) => {
                let b: Rational64 = b.parse().map_err(|_| AnalyticError::InvalidModel(format!("bad β {b:?}")))?;
                ModelKind::Type3(check_beta(b)?)
            }
            ("Type3", None) => return Err(AnalyticError::InvalidModel("Type3 needs \"beta\"".into())),
            (k, _) => k.parse()?,
        };
        let det = j.frame[0][0] * j.frame[1][1] - j.frame[0][1] * j.frame[1][0];
        if (det - 1.0).abs() > 1e-9 {
            return Err(AnalyticError::InvalidModel(format!("frame determinant {det} ≠ 1")));
        }
        if !(j.radius > 0.0 && j.radius.is_finite()) {
            return Err(AnalyticError::InvalidModel(format!("radius {} must be positive", j.radius)));
        }
        let mut m = LocalModel::new(kind);
        m.f = to_c(&j.f);
        if kind == ModelKind::IStar0 {
            if !j.g.is_empty() {
                m.g = to_c(&j.g);
            }
            if !j.h.is_empty() {
                m.h = to_c(&j.h);
            }
        }
        m.theta = j.theta;
        m.frame = j.frame;
        m.radius = j.radius;
        Ok(m)
    }
}

impl From<LocalModel> for ModelJson {
    fn from(m: LocalModel) -> Self {
        let (kind, beta) = match m.kind {
            ModelKind::Type3(b) => ("Type3".to_string(), Some(b.to_string())),
            k => (k.to_string(), None),
        };
        ModelJson {
            kind,
            beta,
            f: from_c(&m.f),
            g: from_c(&m.g),
            h: from_c(&m.h),
            theta: m.theta,
            frame: m.frame,
            radius: m.radius,
        }
    }
}
