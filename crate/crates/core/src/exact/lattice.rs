//! Integer lattices inside ℤᵏ: echelon bases and Smith invariants.
//!
//! Used with k = 4 for submodules of M₂ ≅ ℤ⁴ (row-major flattening).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::ext_gcd;
use super::{ExactError, IntMat2};

/// Row-style Hermite normal form basis of the lattice spanned by `vectors`.
///
/// Returned rows are in echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`; zero rows are dropped. The result is
/// canonical for the lattice, so two spanning sets generate the same lattice
/// iff their bases are equal.
pub fn echelon_basis(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // Fold every row with a nonzero entry in `col` into a single pivot row.
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(rows.len());
        for r in rows.drain(..) {
            if r[col].is_zero() {
                rest.push(r);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(r),
                Some(p) => {
                    let (g, x, y) = ext_gcd(&p[col], &r[col]);
                    let pc = &p[col] / &g;
                    let rc = &r[col] / &g;
                    // [new_p; new_r] = [[x, y], [-rc, pc]]·[p; r] is unimodular.
                    let new_p: Vec<BigInt> = p.iter().zip(&r).map(|(a, b)| &x * a + &y * b).collect();
                    let new_r: Vec<BigInt> = p.iter().zip(&r).map(|(a, b)| -&rc * a + &pc * b).collect();
                    debug_assert!(new_r[col].is_zero());
                    if new_r.iter().any(|v| !v.is_zero()) {
                        rest.push(new_r);
                    }
                    pivot = Some(new_p);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = pivot {
            if p[col].is_negative() {
                p.iter_mut().for_each(|v| *v = -&*v);
            }
            basis.push(p);
        }
        col += 1;
    }
    reduce_above_pivots(&mut basis);
    basis
}

fn pivot_col(row: &[BigInt]) -> usize {
    row.iter().position(|x| !x.is_zero()).expect("nonzero row")
}

fn reduce_above_pivots(basis: &mut [Vec<BigInt>]) {
    for i in 0..basis.len() {
        let pc = pivot_col(&basis[i]);
        let pv = basis[i][pc].clone();
        for j in 0..i {
            let q = basis[j][pc].div_floor(&pv);
            if !q.is_zero() {
                let (head, tail) = basis.split_at_mut(i);
                for (x, y) in head[j].iter_mut().zip(&tail[0]) {
                    *x -= &q * y;
                }
            }
        }
    }
}

/// Invariant factors `d₁ | d₂ | …` of the integer matrix with the given rows.
pub fn smith_invariants(rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // Pick the smallest nonzero entry in the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t].clone();
            let mut dirty = false;
            for i in (t + 1)..nrows {
                let q = m[i][t].div_floor(&p);
                if !q.is_zero() {
                    let pivot_row = m[t].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..ncols {
                let q = m[t][j].div_floor(&p);
                if !q.is_zero() {
                    for row in m.iter_mut() {
                        let v = &q * &row[t];
                        row[j] -= v;
                    }
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Enforce divisibility of the remaining block by the pivot.
                let mut fix = None;
                'outer: for i in (t + 1)..nrows {
                    for j in (t + 1)..ncols {
                        if !m[i][j].is_multiple_of(&p) {
                            fix = Some(i);
                            break 'outer;
                        }
                    }
                }
                match fix {
                    Some(i) => {
                        let (head, tail) = m.split_at_mut(i);
                        for (x, y) in head[t].iter_mut().zip(&tail[0]) {
                            *x += y;
                        }
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero remainder in row/column t into the pivot.
            let mut best = (t, t);
            for i in t..nrows {
                if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..ncols {
                if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            m.swap(t, best.0);
            for row in m.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

/// Minimal `n` with `n·M₂ ⊆ span(mats)`: the largest invariant factor of the
/// inclusion of the span into ℤ⁴.
pub fn smith_exponent(mats: &[IntMat2]) -> Result<BigInt, ExactError> {
    let rows: Vec<Vec<BigInt>> = mats.iter().map(|m| m.flatten().to_vec()).collect();
    let inv = smith_invariants(&rows);
    if inv.len() < 4 {
        return Err(ExactError::RankDeficient(inv.len()));
    }
    Ok(inv.last().cloned().unwrap_or_else(BigInt::one))
}
