use super::coset::{coset_enumerate, generating_set};
use super::spec::{SpecKind, SubgroupSpec};
use super::GroupError;
use crate::exact::IntMat2;
use crate::ng::Conjugator;

/// Index comparison plus generator containment of `g1` in `g2`.
pub fn subgroups_equal(g1: &SubgroupSpec, g2: &SubgroupSpec) -> Result<bool, GroupError> {
    subgroups_equal_opts(g1, g2, false)
}

/// As [`subgroups_equal`], optionally also checking containment of `g2` in `g1`.
pub fn subgroups_equal_opts(g1: &SubgroupSpec, g2: &SubgroupSpec, both_sides: bool) -> Result<bool, GroupError> {
    if coset_enumerate(g1)?.index() != coset_enumerate(g2)?.index() {
        return Ok(false);
    }
    if !contains_all(g2, &generating_set(g1)?)? {
        return Ok(false);
    }
    if both_sides && !contains_all(g1, &generating_set(g2)?)? {
        return Ok(false);
    }
    Ok(true)
}

fn contains_all(g: &SubgroupSpec, elems: &[IntMat2]) -> Result<bool, GroupError> {
    for e in elems {
        if !g.membership(e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `P⁻¹GP` for the conjugator `P = B/√m`.
pub fn conjugate_subgroup(g: &SubgroupSpec, by: &Conjugator) -> Result<SubgroupSpec, GroupError> {
    conjugate_by_matrix(g, by.b())
}

/// `P⁻¹GP` for `P = B/√det(B)` with an arbitrary integral `B` of positive determinant.
pub fn conjugate_by_matrix(g: &SubgroupSpec, b: &IntMat2) -> Result<SubgroupSpec, GroupError> {
    let m = b.det();
    if m <= 0.into() {
        return Err(GroupError::Exact(crate::exact::ExactError::NonPositiveDeterminant(b.to_string())));
    }
    let adj = b.adjugate();
    for h in generating_set(g)? {
        if (&(&adj * &h) * b).div_exact(&m).is_none() {
            return Err(GroupError::NotConjugateIntoIntegral { generator: h.to_string(), b: b.to_string() });
        }
    }
    Ok(SubgroupSpec { projective: g.projective, kind: SpecKind::Conjugated { base: Box::new(g.clone()), b: b.clone() } })
}
