//! Counting the cosets `P ∈ SL₂(ℝ)/SL₂(ℤ)` with `P⁻¹GP ⊆ SL₂(ℤ)`.
//!
//! Every such `P` is `B/√m` for a primitive integral `B` of determinant `m`
//! dividing the exponent `n` of the module `M(G)`, the ℤ-span of `G` inside
//! M₂. Two such pairs give the same coset iff they share `m` and the column
//! normal form of `B`, so the candidates are enumerated once each and
//! checked on a generating set of `G`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::{column_hnf, echelon_basis, primitive_hnf_of_det, smith_exponent, ExactError, IntMat2};
use crate::modgroup::{conjugate_subgroup, coset_enumerate, generating_set, subgroups_equal_opts, GroupError, SubgroupSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NgError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("module exponent {0} does not fit in u64")]
    ExponentTooLarge(String),
}

/// A coset representative `P = B/√m` with `B` primitive, in column normal
/// form, and `det B = m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conjugator {
    b: IntMat2,
    m: BigInt,
}

impl Conjugator {
    pub fn identity() -> Self {
        Conjugator { b: IntMat2::identity(), m: BigInt::one() }
    }

    /// Normalizes any integral `B` with `det B > 0` to the canonical
    /// representative of the coset of `B/√det B`.
    pub fn from_matrix(b: &IntMat2) -> Result<Self, ExactError> {
        if !b.det().is_positive() {
            return Err(ExactError::NonPositiveDeterminant(b.to_string()));
        }
        let g = b.content();
        let prim = b.div_exact(&g).expect("content divides entries");
        let (h, _) = column_hnf(&prim)?;
        let m = h.det();
        Ok(Conjugator { b: h, m })
    }

    pub fn b(&self) -> &IntMat2 {
        &self.b
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    /// `P⁻¹·A·P = adj(B)·A·B / m`, when integral.
    pub fn conjugate(&self, a: &IntMat2) -> Option<IntMat2> {
        (&(&self.b.adjugate() * a) * &self.b).div_exact(&self.m)
    }

    /// Sort key: determinant first, then the normal form entries `(α, β, δ)`.
    fn key(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        (self.m.clone(), self.b.a.clone(), self.b.b.clone(), self.b.d.clone())
    }
}

impl PartialOrd for Conjugator {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Conjugator {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl Serialize for Conjugator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Conjugator", 2)?;
        st.serialize_field("B", &self.b.to_string())?;
        st.serialize_field("m", &self.m.to_u64())?;
        st.end()
    }
}

/// The ℤ-span `M(G)` of a subgroup inside M₂ ≅ ℤ⁴.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanModule {
    /// Echelon basis of the flattened span.
    pub basis: Vec<IntMat2>,
    /// Least `n` with `n·M₂ ⊆ M(G)`.
    pub exponent: BigInt,
}

impl SpanModule {
    pub fn contains(&self, a: &IntMat2) -> bool {
        let mut vecs: Vec<Vec<BigInt>> = self.basis.iter().map(|b| b.flatten().to_vec()).collect();
        let before = echelon_basis(&vecs, 4);
        vecs.push(a.flatten().to_vec());
        echelon_basis(&vecs, 4) == before
    }
}

fn basis_of(mats: &[IntMat2]) -> Vec<Vec<BigInt>> {
    let vecs: Vec<Vec<BigInt>> = mats.iter().map(|m| m.flatten().to_vec()).collect();
    echelon_basis(&vecs, 4)
}

fn to_mats(basis: &[Vec<BigInt>]) -> Vec<IntMat2> {
    basis.iter().map(|v| IntMat2::from_flat(&[v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])).collect()
}

/// Span of `{I} ∪ gens`, closed under left and right multiplication by the
/// generators until the echelon basis is stable.
pub fn module_span_of(gens: &[IntMat2]) -> Result<SpanModule, NgError> {
    let mut seed = vec![IntMat2::identity()];
    seed.extend(gens.iter().cloned());
    let mut basis = basis_of(&seed);
    loop {
        let mats = to_mats(&basis);
        let mut next = mats.clone();
        for b in &mats {
            for g in gens {
                next.push(b * g);
                next.push(g * b);
            }
        }
        let new_basis = basis_of(&next);
        if new_basis == basis {
            break;
        }
        basis = new_basis;
    }
    let basis = to_mats(&basis);
    let exponent = smith_exponent(&basis)?;
    Ok(SpanModule { basis, exponent })
}

pub fn module_span(g: &SubgroupSpec) -> Result<SpanModule, NgError> {
    module_span_of(&generating_set(g)?)
}

/// All coset representatives with `m | n`, ordered by `m` then normal form.
pub fn candidate_conjugators(n: u64) -> Vec<Conjugator> {
    let mut out = Vec::new();
    for m in (1..=n).filter(|m| n % m == 0) {
        for b in primitive_hnf_of_det(m) {
            out.push(Conjugator { b, m: BigInt::from(m) });
        }
    }
    out
}

/// True iff `adj(B)·g·B ≡ 0 (mod m)` for every generator.
pub fn conjugation_integral(c: &Conjugator, gens: &[IntMat2]) -> bool {
    gens.iter().all(|g| c.conjugate(g).is_some())
}

#[derive(Clone, Debug, Serialize)]
pub struct NgReport {
    pub group: String,
    pub index: usize,
    pub exponent_n: u64,
    pub count: usize,
    pub witnesses: Vec<Conjugator>,
}

pub fn compute_ng(g: &SubgroupSpec) -> Result<NgReport, NgError> {
    let table = coset_enumerate(g)?;
    let gens = generating_set(g)?;
    let span = module_span_of(&gens)?;
    let n = span.exponent.to_u64().ok_or_else(|| NgError::ExponentTooLarge(span.exponent.to_string()))?;
    let witnesses: Vec<Conjugator> =
        candidate_conjugators(n).into_par_iter().filter(|c| conjugation_integral(c, &gens)).collect();
    debug_assert!(witnesses.first() == Some(&Conjugator::identity()));
    Ok(NgReport { group: g.to_string(), index: table.index(), exponent_n: n, count: witnesses.len(), witnesses })
}

/// A witness `P` with `P⁻¹·G1·P = G2`, searched among the integral conjugators of `G1`.
pub fn find_conjugating_witness(g1: &SubgroupSpec, g2: &SubgroupSpec) -> Result<Option<Conjugator>, NgError> {
    let report = compute_ng(g1)?;
    for c in report.witnesses {
        let conj = conjugate_subgroup(g1, &c)?;
        if subgroups_equal_opts(&conj, g2, true)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_of(g: &SubgroupSpec) -> usize {
        compute_ng(g).unwrap().count
    }

    #[test]
    fn exponents() {
        assert_eq!(module_span(&SubgroupSpec::full()).unwrap().exponent, BigInt::one());
        assert_eq!(module_span(&SubgroupSpec::gamma0(2)).unwrap().exponent, BigInt::from(2));
        // a ≡ d (mod 4) on Γ(2), so 2·E₁₁ ∉ M(Γ(2)) and the exponent is 4.
        let span = module_span(&SubgroupSpec::gamma(2)).unwrap();
        assert_eq!(span.exponent, BigInt::from(4));
        assert!(span.contains(&IntMat2::new(0, 2, 0, 0)));
        assert!(!span.contains(&IntMat2::new(2, 0, 0, 0)));
        assert!(!span.contains(&IntMat2::new(0, 1, 0, 0)));
    }

    #[test]
    fn span_contains_its_generators() {
        let g = SubgroupSpec::gamma1(5);
        let span = module_span(&g).unwrap();
        let n = span.exponent.clone();
        for h in generating_set(&g).unwrap() {
            assert!(span.contains(&h));
        }
        for k in 0..4 {
            assert!(span.contains(&IntMat2::elementary(k / 2, k % 2).scale(&n)));
        }
    }

    #[test]
    fn candidates() {
        assert_eq!(candidate_conjugators(1), vec![Conjugator::identity()]);
        let c2: Vec<IntMat2> = candidate_conjugators(2).iter().map(|c| c.b().clone()).collect();
        assert_eq!(c2, vec![IntMat2::identity(), IntMat2::new(1, 0, 0, 2), IntMat2::new(2, 0, 0, 1), IntMat2::new(2, 1, 0, 1)]);
        assert_eq!(candidate_conjugators(4).len(), 10);
        let c = candidate_conjugators(16);
        assert!(c.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn integrality_examples() {
        let gens = generating_set(&SubgroupSpec::gamma0(2)).unwrap();
        assert!(conjugation_integral(&Conjugator::identity(), &gens));
        let lower = Conjugator::from_matrix(&IntMat2::new(1, 0, 0, 2)).unwrap();
        assert!(conjugation_integral(&lower, &gens));
        let upper = Conjugator::from_matrix(&IntMat2::new(2, 0, 0, 1)).unwrap();
        assert!(!conjugation_integral(&upper, &gens));
    }

    #[test]
    fn small_table_rows() {
        assert_eq!(n_of(&SubgroupSpec::full()), 1);
        assert_eq!(n_of(&SubgroupSpec::gamma0(2)), 2);
        assert_eq!(n_of(&SubgroupSpec::gamma(2)), 4);
        assert_eq!(n_of(&SubgroupSpec::gamma(4)), 10);
    }

    #[test]
    fn witnesses_start_with_identity() {
        let r = compute_ng(&SubgroupSpec::gamma0(6)).unwrap();
        assert_eq!(r.witnesses[0], Conjugator::identity());
        assert_eq!(r.index, 12);
        assert_eq!(r.count, 4);
    }

    #[test]
    fn normalization_is_coset_invariant() {
        let b = IntMat2::new(4, 2, 2, 3);
        let x = IntMat2::new(2, 1, 1, 1);
        let c1 = Conjugator::from_matrix(&b).unwrap();
        let c2 = Conjugator::from_matrix(&(&b * &x)).unwrap();
        assert_eq!(c1, c2);
        // Content is divided out: 2·B'/√(4m') is the same coset as B'/√m'.
        let c3 = Conjugator::from_matrix(&b.scale(&BigInt::from(3))).unwrap();
        assert_eq!(c1, c3);
    }

    #[test]
    fn serializes_as_literal() {
        let c = Conjugator::from_matrix(&IntMat2::new(2, 0, 0, 1)).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"B":"2,0;0,1","m":2}"#);
    }
}
