//! Kodaira types of SL₂(ℤ) monodromy matrices and fiber configurations.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exact::IntMat2;
use crate::modgroup::{GroupError, SubgroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KodairaError {
    #[error("matrix {0} is not in SL2(Z)")]
    NotUnimodular(String),
    #[error("matrix {0} is hyperbolic (|trace| > 2)")]
    HyperbolicMonodromy(String),
    #[error("matrix {0} is conjugate to ±I_(-k), which never occurs")]
    ForbiddenOrientation(String),
    #[error("classification needs the sign of the matrix; projective mode is not supported")]
    ProjectiveUnsupported,
    #[error("fiber {label}: {error}")]
    InFiber { label: String, error: Box<KodairaError> },
    #[error("rescaling fiber {label} by q={q} is not integral")]
    NonIntegralRescale { label: String, q: String },
    #[error("rescale factor must be positive, got {0}")]
    NonPositiveRescale(String),
    #[error("operation needs based loops, not a bare type list")]
    NeedsBasedLoops,
    #[error("unknown Kodaira type {0:?}")]
    UnknownType(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A Kodaira fiber type. `Smooth` is written `I0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    Smooth,
    I(u64),
    IStar(u64),
    II,
    IIStar,
    III,
    IIIStar,
    IV,
    IVStar,
}

impl KodairaType {
    /// Cone parameter β for finite-order monodromy.
    pub fn beta(&self) -> Option<Rational64> {
        use KodairaType::*;
        let (p, q) = match self {
            II => (5, 6),
            IIStar => (1, 6),
            III => (3, 4),
            IIIStar => (1, 4),
            IV => (2, 3),
            IVStar => (1, 3),
            IStar(0) => (1, 2),
            _ => return None,
        };
        Some(Rational64::new(p, q))
    }

    /// Twelve times the Euler-characteristic contribution i(x).
    pub fn index12(&self) -> u64 {
        use KodairaType::*;
        match self {
            Smooth => 0,
            I(n) => *n,
            IStar(n) => n + 6,
            II => 2,
            III => 3,
            IV => 4,
            IVStar => 8,
            IIIStar => 9,
            IIStar => 10,
        }
    }

    /// Finite-order monodromy: the flat, isotrivial local models.
    pub fn is_elliptic(&self) -> bool {
        self.beta().is_some()
    }

    pub fn is_singular(&self) -> bool {
        *self != KodairaType::Smooth
    }

    /// `A ↦ A⁻¹` on types.
    pub fn dual(&self) -> KodairaType {
        use KodairaType::*;
        match self {
            II => IIStar,
            IIStar => II,
            III => IIIStar,
            IIIStar => III,
            IV => IVStar,
            IVStar => IV,
            other => *other,
        }
    }

    /// Standard monodromy matrix of the type.
    pub fn standard_matrix(&self) -> IntMat2 {
        use KodairaType::*;
        match self {
            Smooth => IntMat2::identity(),
            I(n) => IntMat2::t_pow(BigInt::from(*n)),
            IStar(n) => -IntMat2::t_pow(BigInt::from(*n)),
            II => IntMat2::new(0, 1, -1, 1),
            IIStar => IntMat2::new(1, -1, 1, 0),
            III => IntMat2::new(0, 1, -1, 0),
            IIIStar => IntMat2::new(0, -1, 1, 0),
            IV => IntMat2::new(-1, 1, -1, 0),
            IVStar => IntMat2::new(0, -1, 1, -1),
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use KodairaType::*;
        match self {
            Smooth => write!(f, "I0"),
            I(n) => write!(f, "I{n}"),
            IStar(n) => write!(f, "I{n}*"),
            II => write!(f, "II"),
            IIStar => write!(f, "II*"),
            III => write!(f, "III"),
            IIIStar => write!(f, "III*"),
            IV => write!(f, "IV"),
            IVStar => write!(f, "IV*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = KodairaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use KodairaType::*;
        let t = s.trim();
        let fixed = match t {
            "II" => Some(II),
            "II*" => Some(IIStar),
            "III" => Some(III),
            "III*" => Some(IIIStar),
            "IV" => Some(IV),
            "IV*" => Some(IVStar),
            _ => None,
        };
        if let Some(k) = fixed {
            return Ok(k);
        }
        let bad = || KodairaError::UnknownType(s.to_string());
        let rest = t.strip_prefix('I').ok_or_else(bad)?;
        let (digits, star) = match rest.strip_suffix('*') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: u64 = digits.parse().map_err(|_| bad())?;
        Ok(match (n, star) {
            (0, false) => Smooth,
            (n, false) => I(n),
            (n, true) => IStar(n),
        })
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for KodairaType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Kodaira type of a monodromy matrix, read off from the trace and the sign of `c`.
pub fn classify(a: &IntMat2, projective: bool) -> Result<KodairaType, KodairaError> {
    if projective {
        return Err(KodairaError::ProjectiveUnsupported);
    }
    if !a.is_unimodular() {
        return Err(KodairaError::NotUnimodular(a.to_string()));
    }
    let tr = a.trace().to_i64();
    let c_neg = a.c.is_negative();
    use KodairaType::*;
    match tr {
        Some(2) => classify_parabolic(a),
        Some(-2) => match classify_parabolic(&-a) {
            Ok(Smooth) => Ok(IStar(0)),
            Ok(I(n)) => Ok(IStar(n)),
            Ok(_) => unreachable!("parabolic classification yields I(n)"),
            Err(KodairaError::ForbiddenOrientation(_)) => Err(KodairaError::ForbiddenOrientation(a.to_string())),
            Err(e) => Err(e),
        },
        Some(1) => Ok(if c_neg { II } else { IIStar }),
        Some(0) => Ok(if c_neg { III } else { IIIStar }),
        Some(-1) => Ok(if c_neg { IV } else { IVStar }),
        _ => Err(KodairaError::HyperbolicMonodromy(a.to_string())),
    }
}

fn classify_parabolic(a: &IntMat2) -> Result<KodairaType, KodairaError> {
    if a.is_identity() {
        return Ok(KodairaType::Smooth);
    }
    let k = a.sub(&IntMat2::identity()).content();
    let admissible = a.c.is_negative() || (a.c.is_zero() && a.b.is_positive());
    if !admissible {
        return Err(KodairaError::ForbiddenOrientation(a.to_string()));
    }
    let n = k.to_u64().ok_or_else(|| KodairaError::HyperbolicMonodromy(a.to_string()))?;
    Ok(KodairaType::I(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub label: String,
    pub matrix: IntMat2,
}

/// Singular fibers on ℙ¹: ordered based loops, or just the multiset of types.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "fibers")]
pub enum FiberConfig {
    #[serde(rename = "based")]
    BasedLoops(Vec<Fiber>),
    #[serde(rename = "types")]
    TypesOnly(Vec<KodairaType>),
}

impl FiberConfig {
    /// Fibers labelled `p1, p2, …` in the given order.
    pub fn from_matrices(mats: &[IntMat2]) -> Self {
        FiberConfig::BasedLoops(
            mats.iter().enumerate().map(|(i, m)| Fiber { label: format!("p{}", i + 1), matrix: m.clone() }).collect(),
        )
    }

    pub fn len(&self) -> usize {
        match self {
            FiberConfig::BasedLoops(f) => f.len(),
            FiberConfig::TypesOnly(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matrices(&self) -> Option<Vec<IntMat2>> {
        match self {
            FiberConfig::BasedLoops(f) => Some(f.iter().map(|x| x.matrix.clone()).collect()),
            FiberConfig::TypesOnly(_) => None,
        }
    }

    /// Per-fiber types; classification errors carry the fiber label.
    pub fn types(&self) -> Result<Vec<KodairaType>, KodairaError> {
        match self {
            FiberConfig::TypesOnly(t) => Ok(t.clone()),
            FiberConfig::BasedLoops(f) => f
                .iter()
                .map(|x| {
                    classify(&x.matrix, false).map_err(|e| KodairaError::InFiber { label: x.label.clone(), error: Box::new(e) })
                })
                .collect(),
        }
    }
}

/// Multiset of types written as e.g. `4I1+I4+I16`, in canonical type order.
pub fn type_summary(types: &[KodairaType]) -> String {
    let mut counts: BTreeMap<KodairaType, usize> = BTreeMap::new();
    for t in types {
        *counts.entry(*t).or_default() += 1;
    }
    counts.iter().map(|(t, &k)| if k == 1 { t.to_string() } else { format!("{k}{t}") }).collect::<Vec<_>>().join("+")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: &'static str,
    pub fiber_count: usize,
    pub types: Vec<KodairaType>,
    pub summary: String,
    /// Left-to-right product of the loop matrices (based mode only).
    pub product: Option<IntMat2>,
    pub product_is_identity: Option<bool>,
    pub index12_sum: u64,
    pub index_sum_ok: bool,
    pub count_ok: bool,
    pub all_singular: bool,
    pub flat: bool,
    pub valid: bool,
}

pub fn validate_config(cfg: &FiberConfig) -> Result<ValidationReport, KodairaError> {
    let types = cfg.types()?;
    let (mode, product) = match cfg {
        FiberConfig::BasedLoops(f) => ("based", Some(f.iter().fold(IntMat2::identity(), |acc, x| &acc * &x.matrix))),
        FiberConfig::TypesOnly(_) => ("types", None),
    };
    let product_is_identity = product.as_ref().map(IntMat2::is_identity);
    let index12_sum: u64 = types.iter().map(KodairaType::index12).sum();
    let index_sum_ok = index12_sum == 24;
    let count_ok = types.len() <= 24;
    let all_singular = types.iter().all(KodairaType::is_singular);
    let flat = !types.is_empty() && types.iter().all(KodairaType::is_elliptic);
    let valid = index_sum_ok && count_ok && all_singular && product_is_identity.unwrap_or(true);
    Ok(ValidationReport {
        mode,
        fiber_count: types.len(),
        summary: type_summary(&types),
        types,
        product,
        product_is_identity,
        index12_sum,
        index_sum_ok,
        count_ok,
        all_singular,
        flat,
        valid,
    })
}

/// `[[a,b],[c,d]] ↦ [[a, b/q],[q·c, d]]`, i.e. conjugation by diag(λ, 1/λ) with λ² = q.
pub fn rescale_matrix(a: &IntMat2, q: &BigRational) -> Option<IntMat2> {
    let b = BigRational::from_integer(a.b.clone()) / q;
    let c = BigRational::from_integer(a.c.clone()) * q;
    if !b.is_integer() || !c.is_integer() {
        return None;
    }
    Some(IntMat2 { a: a.a.clone(), b: b.to_integer(), c: c.to_integer(), d: a.d.clone() })
}

pub fn rescale_config(cfg: &FiberConfig, q: &BigRational) -> Result<FiberConfig, KodairaError> {
    if !q.is_positive() {
        return Err(KodairaError::NonPositiveRescale(q.to_string()));
    }
    let FiberConfig::BasedLoops(fibers) = cfg else {
        return Err(KodairaError::NeedsBasedLoops);
    };
    let mut out = Vec::with_capacity(fibers.len());
    for f in fibers {
        let m = rescale_matrix(&f.matrix, q)
            .ok_or_else(|| KodairaError::NonIntegralRescale { label: f.label.clone(), q: q.to_string() })?;
        out.push(Fiber { label: f.label.clone(), matrix: m });
    }
    Ok(FiberConfig::BasedLoops(out))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| format!("bad rational {s:?}"))?;
    let d: BigInt = den.parse().map_err(|_| format!("bad rational {s:?}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(n, d))
}

/// The subgroup generated by the loop matrices.
pub fn monodromy_group(cfg: &FiberConfig) -> Result<SubgroupSpec, KodairaError> {
    let mats = cfg.matrices().ok_or(KodairaError::NeedsBasedLoops)?;
    Ok(SubgroupSpec::generated(mats)?)
}

/// True iff every fiber stays integral under the rescale by `q`.
pub fn admissible_rescale(cfg: &FiberConfig, q: &BigRational) -> bool {
    match cfg {
        FiberConfig::BasedLoops(f) => f.iter().all(|x| rescale_matrix(&x.matrix, q).is_some()),
        FiberConfig::TypesOnly(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_traits::One;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IntMat2 {
        IntMat2::new(a, b, c, d)
    }

    #[test]
    fn reference_type_rows() {
        for row in fixtures::table2() {
            let t: KodairaType = row.type_name.parse().unwrap();
            assert_eq!(classify(&row.matrix, false).unwrap(), t, "{}", row.type_name);
            assert_eq!(t.standard_matrix(), row.matrix);
            let beta = row.beta.map(|b| b.parse::<Rational64>().unwrap());
            assert_eq!(t.beta(), beta);
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&m(1, 4, 0, 1), false).unwrap(), KodairaType::I(4));
        assert_eq!(classify(&m(0, 1, -1, 1), false).unwrap(), KodairaType::II);
        assert_eq!(classify(&m(-1, 0, 0, -1), false).unwrap(), KodairaType::IStar(0));
        assert_eq!(classify(&IntMat2::identity(), false).unwrap(), KodairaType::Smooth);
        assert!(matches!(classify(&m(1, -1, 0, 1), false), Err(KodairaError::ForbiddenOrientation(_))));
        assert!(matches!(classify(&m(-1, 1, 0, -1), false), Err(KodairaError::ForbiddenOrientation(_))));
        assert!(matches!(classify(&m(2, 1, 1, 1), false), Err(KodairaError::HyperbolicMonodromy(_))));
        assert!(matches!(classify(&m(2, 0, 0, 1), false), Err(KodairaError::NotUnimodular(_))));
        assert_eq!(classify(&m(1, 4, 0, 1), true), Err(KodairaError::ProjectiveUnsupported));
        // Conjugates of I_n: lower-left entry −n·r².
        assert_eq!(classify(&m(5, 4, -4, -3), false).unwrap(), KodairaType::I(4));
        assert_eq!(classify(&m(1, 0, -4, 1), false).unwrap(), KodairaType::I(4));
    }

    #[test]
    fn index12_matches_beta() {
        for t in [
            KodairaType::II,
            KodairaType::IIStar,
            KodairaType::III,
            KodairaType::IIIStar,
            KodairaType::IV,
            KodairaType::IVStar,
            KodairaType::IStar(0),
        ] {
            let b = t.beta().unwrap();
            assert_eq!(Rational64::from_integer(t.index12() as i64), (Rational64::one() - b) * 12);
        }
        assert_eq!(KodairaType::I(7).index12(), 7);
        assert_eq!(KodairaType::IStar(3).index12(), 9);
    }

    #[test]
    fn orientation_rule_by_brute_force() {
        // Every conjugate X⁻¹·T·X has c < 0 or (c = 0, b > 0); T⁻¹ never appears.
        let t = IntMat2::t();
        let t_inv = IntMat2::t_pow(-1);
        for p in -10i64..=10 {
            for q in -10i64..=10 {
                for r in -10i64..=10 {
                    for s in -10i64..=10 {
                        if p * s - q * r != 1 {
                            continue;
                        }
                        let x = m(p, q, r, s);
                        let y = &(&x.adjugate() * &t) * &x;
                        assert!(y.c < BigInt::zero() || (y.c.is_zero() && y.b > BigInt::zero()), "{y}");
                        assert_ne!(y, t_inv);
                    }
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for s in ["I0", "I1", "I16", "I0*", "I1*", "II", "II*", "III", "III*", "IV", "IV*"] {
            assert_eq!(s.parse::<KodairaType>().unwrap().to_string(), s);
        }
        for s in ["", "I", "I*", "V", "Ix", "I-1", "IIII"] {
            assert!(s.parse::<KodairaType>().is_err(), "{s}");
        }
    }

    fn types(v: &[(usize, KodairaType)]) -> FiberConfig {
        FiberConfig::TypesOnly(v.iter().flat_map(|&(k, t)| std::iter::repeat_n(t, k)).collect())
    }

    #[test]
    fn index_sum_validator() {
        let r = validate_config(&types(&[(24, KodairaType::I(1))])).unwrap();
        assert!(r.valid && !r.flat);
        let r = validate_config(&types(&[(4, KodairaType::IStar(0))])).unwrap();
        assert!(r.valid && r.flat);
        let r = validate_config(&types(&[(6, KodairaType::I(4))])).unwrap();
        assert!(r.valid);
        let r = validate_config(&types(&[(5, KodairaType::I(4))])).unwrap();
        assert!(!r.valid);
        assert_eq!(r.index12_sum, 20);
    }

    #[test]
    fn worked_example_config() {
        let cfg = FiberConfig::from_matrices(&fixtures::worked_example_matrices());
        let r = validate_config(&cfg).unwrap();
        assert_eq!(r.product_is_identity, Some(true));
        assert_eq!(r.summary, "6I4");
        assert_eq!(r.index12_sum, 24);
        assert!(r.valid);
        let q2 = rescale_config(&cfg, &BigRational::from_integer(2.into())).unwrap();
        assert_eq!(validate_config(&q2).unwrap().summary, "4I2+2I8");
        let q4 = rescale_config(&cfg, &BigRational::from_integer(4.into())).unwrap();
        let r4 = validate_config(&q4).unwrap();
        assert_eq!(r4.summary, "4I1+I4+I16");
        assert!(r4.valid);
        assert_eq!(rescale_config(&cfg, &BigRational::one()).unwrap(), cfg);
        assert!(matches!(
            rescale_config(&cfg, &BigRational::from_integer(3.into())),
            Err(KodairaError::NonIntegralRescale { .. })
        ));
    }

    #[test]
    fn failed_classification_names_fiber() {
        let cfg = FiberConfig::BasedLoops(vec![Fiber { label: "x".into(), matrix: m(2, 1, 1, 1) }]);
        match validate_config(&cfg) {
            Err(KodairaError::InFiber { label, .. }) => assert_eq!(label, "x"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn config_json() {
        let cfg: FiberConfig = serde_json::from_str(r#"{"mode":"based","fibers":[{"label":"p1","matrix":"1,4;0,1"}]}"#).unwrap();
        assert_eq!(cfg, FiberConfig::BasedLoops(vec![Fiber { label: "p1".into(), matrix: m(1, 4, 0, 1) }]));
        let cfg: FiberConfig = serde_json::from_str(r#"{"mode":"types","fibers":["I4","I0*","II*"]}"#).unwrap();
        assert_eq!(cfg, FiberConfig::TypesOnly(vec![KodairaType::I(4), KodairaType::IStar(0), KodairaType::IIStar]));
        let back = serde_json::to_string(&cfg).unwrap();
        assert_eq!(back, r#"{"mode":"types","fibers":["I4","I0*","II*"]}"#);
    }

    #[test]
    fn group_of_worked_example() {
        let cfg = FiberConfig::from_matrices(&fixtures::worked_example_matrices());
        let g = monodromy_group(&cfg).unwrap();
        assert!(crate::modgroup::subgroups_equal(&g, &SubgroupSpec::gamma(4)).unwrap());
        assert_eq!(monodromy_group(&types(&[(1, KodairaType::II)])).err(), Some(KodairaError::NeedsBasedLoops));
    }

    fn word_matrix(word: &[u8]) -> IntMat2 {
        word.iter().fold(IntMat2::identity(), |acc, &l| {
            let g = match l % 3 {
                0 => IntMat2::s(),
                1 => IntMat2::t(),
                _ => IntMat2::t_pow(-1),
            };
            &acc * &g
        })
    }

    fn sample_types() -> Vec<KodairaType> {
        use KodairaType::*;
        let mut v = vec![Smooth, II, IIStar, III, IIIStar, IV, IVStar, IStar(0)];
        for n in 1..6 {
            v.push(I(n));
            v.push(IStar(n));
        }
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn classify_is_conjugation_invariant(word in prop::collection::vec(0u8..3, 0..16), k in 0usize..18) {
            let t = sample_types()[k];
            let a = t.standard_matrix();
            let x = word_matrix(&word);
            let conj = &(&x.adjugate() * &a) * &x;
            prop_assert_eq!(classify(&conj, false).unwrap(), t);
            if t.is_elliptic() && t != KodairaType::IStar(0) {
                prop_assert_eq!(conj.c.is_negative(), a.c.is_negative());
            }
        }

        #[test]
        fn elliptic_duality(word in prop::collection::vec(0u8..3, 0..16), k in 0usize..8) {
            let t = sample_types()[k];
            let x = word_matrix(&word);
            let a = &(&x.adjugate() * &t.standard_matrix()) * &x;
            let inv = a.inverse_unimodular().unwrap();
            prop_assert_eq!(classify(&inv, false).unwrap(), t.dual());
        }

        #[test]
        fn rescale_round_trip(word in prop::collection::vec(0u8..3, 0..10), p in 1i64..5, r in 1i64..5) {
            let base = word_matrix(&word);
            let big = BigInt::from(p * p * r * r);
            let a = IntMat2 { a: base.a.clone(), b: &base.b * &big, c: &base.c * &big, d: base.d.clone() };
            let q = BigRational::new(p.into(), r.into());
            let cfg = FiberConfig::from_matrices(&[a]);
            let there = rescale_config(&cfg, &q).unwrap();
            let back = rescale_config(&there, &q.recip()).unwrap();
            prop_assert_eq!(back, cfg);
        }
    }
}
