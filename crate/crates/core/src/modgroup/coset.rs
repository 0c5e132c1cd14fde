use super::spec::{is_trivial, SubgroupSpec, DEFAULT_CAP};
use super::GroupError;
use crate::exact::IntMat2;

/// Right cosets `G·r_i` with the right action of `S`, `T`, `T⁻¹`.
#[derive(Clone, Debug)]
pub struct CosetTable {
    pub representatives: Vec<IntMat2>,
    /// `action[x][i] = j` iff `G·r_i·g_x = G·r_j` for `g = [S, T, T⁻¹]`.
    pub action: [Vec<usize>; 3],
    pub projective: bool,
}

fn generators() -> [IntMat2; 3] {
    [IntMat2::s(), IntMat2::t(), IntMat2::t_pow(-1)]
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.representatives.len()
    }
}

/// Breadth-first enumeration of right cosets, identifying `x` with an
/// existing representative `r` when `x·r⁻¹ ∈ G`.
pub fn coset_enumerate(g: &SubgroupSpec) -> Result<CosetTable, GroupError> {
    coset_enumerate_with_cap(g, DEFAULT_CAP)
}

pub fn coset_enumerate_with_cap(g: &SubgroupSpec, cap: usize) -> Result<CosetTable, GroupError> {
    let gens = generators();
    let mut reps = vec![IntMat2::identity()];
    let mut inverses = vec![IntMat2::identity()];
    let mut action: [Vec<usize>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut i = 0;
    while i < reps.len() {
        for (x, gen) in gens.iter().enumerate() {
            let y = &reps[i] * gen;
            let mut found = None;
            for (j, inv) in inverses.iter().enumerate() {
                if g.membership(&(&y * inv))? {
                    found = Some(j);
                    break;
                }
            }
            let j = match found {
                Some(j) => j,
                None => {
                    if reps.len() >= cap {
                        return Err(GroupError::IndexCapExceeded { cap });
                    }
                    inverses.push(y.adjugate());
                    reps.push(y);
                    reps.len() - 1
                }
            };
            action[x].push(j);
        }
        i += 1;
    }
    Ok(CosetTable { representatives: reps, action, projective: g.projective })
}

/// Schreier generators `r_i·g·r_j⁻¹` for `g ∈ {S, T}`, trivial ones dropped.
pub fn schreier_generators(g: &SubgroupSpec) -> Result<Vec<IntMat2>, GroupError> {
    let table = coset_enumerate(g)?;
    Ok(schreier_from_table(&table))
}

pub fn schreier_from_table(table: &CosetTable) -> Vec<IntMat2> {
    let gens = generators();
    let mut out: Vec<IntMat2> = Vec::new();
    for (i, r) in table.representatives.iter().enumerate() {
        for x in 0..2 {
            let j = table.action[x][i];
            let h = &(r * &gens[x]) * &table.representatives[j].adjugate();
            if is_trivial(&h, table.projective) {
                continue;
            }
            if !out.iter().any(|o| *o == h || (table.projective && *o == -&h)) {
                out.push(h);
            }
        }
    }
    out
}

/// Generators to use for a subgroup: the listed ones for generated specs,
/// Schreier generators otherwise.
pub fn generating_set(g: &SubgroupSpec) -> Result<Vec<IntMat2>, GroupError> {
    match g.listed_generators() {
        Some(gens) => Ok(gens.to_vec()),
        None => schreier_generators(g),
    }
}
