//! HLT coset enumeration over PSL₂(ℤ) = ⟨s, t | s², (st)³⟩.
//!
//! Columns are `s` (an involution), `t` and `t⁻¹`. Cosets are defined in a
//! fixed order, scanning `s` before `t`, so tables are reproducible.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::GroupError;
use crate::exact::{st_word, IntMat2, Letter, StWord};

const S: usize = 0;
const T: usize = 1;
const T_INV: usize = 2;
const INV: [usize; 3] = [S, T_INV, T];
const NONE: usize = usize::MAX;

const RELATORS: [&[usize]; 2] = [&[S, S], &[S, T, S, T, S, T]];

/// Completed coset table of a finite-index subgroup of PSL₂(ℤ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TcTable {
    /// `rows[i][x]` is the coset reached from coset `i` by generator column `x`.
    rows: Vec<[usize; 3]>,
}

impl TcTable {
    pub fn index(&self) -> usize {
        self.rows.len()
    }

    /// Permutation of cosets induced by `s`, `t` or `t⁻¹` (columns 0, 1, 2).
    pub fn column(&self, x: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[x]).collect()
    }

    /// Coset reached from coset 0 by the word.
    pub fn trace(&self, word: &StWord) -> Result<usize, GroupError> {
        let n = self.rows.len();
        let mut c = 0;
        for l in word.letters() {
            match l {
                Letter::S => c = self.rows[c][S],
                Letter::T(k) => {
                    let col = if k.is_positive() { T } else { T_INV };
                    // t acts as a permutation of n points, so t^k = t^(k mod order) on the orbit.
                    let steps = reduce_power(k, n);
                    for _ in 0..steps {
                        c = self.rows[c][col];
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn contains_word(&self, word: &StWord) -> Result<bool, GroupError> {
        Ok(self.trace(word)? == 0)
    }

    pub fn contains(&self, a: &IntMat2) -> Result<bool, GroupError> {
        self.contains_word(&st_word(a)?)
    }
}

/// Number of single steps equivalent to `t^{±|k|}` on a table with `n` cosets.
/// Every cycle of `t` has length ≤ n, so lcm(1..=n) is a common period.
fn reduce_power(k: &BigInt, n: usize) -> usize {
    let abs = k.abs();
    match abs.to_usize() {
        Some(v) if v <= 4 * n + 64 => v,
        _ => {
            let period = (1..=n).fold(BigInt::from(1), |acc, x| num_integer::lcm(acc, BigInt::from(x)));
            (abs % period).to_usize().expect("reduced exponent fits usize")
        }
    }
}

struct Enumerator {
    table: Vec<[usize; 3]>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    cap: usize,
}

impl Enumerator {
    fn new(cap: usize) -> Self {
        Enumerator { table: vec![[NONE; 3]], parent: vec![0], queue: Vec::new(), cap }
    }

    fn alive(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, a: usize, x: usize) -> Result<(), GroupError> {
        if self.table.len() >= self.cap {
            return Err(GroupError::CapExceeded { cap: self.cap });
        }
        let b = self.table.len();
        self.table.push([NONE; 3]);
        self.parent.push(b);
        self.table[a][x] = b;
        self.table[b][INV[x]] = a;
        Ok(())
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (p, q) = (self.rep(k), self.rep(l));
        if p != q {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            self.parent[hi] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut qi = 0;
        while qi < self.queue.len() {
            let g = self.queue[qi];
            qi += 1;
            for x in 0..3 {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                self.table[d][INV[x]] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][INV[x]] != NONE {
                    let t = self.table[nu][INV[x]];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][INV[x]] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, a: usize, w: &[usize]) -> Result<(), GroupError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (a, a);
        let mut i = 0usize;
        let mut j = w.len() - 1;
        loop {
            while i <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][INV[w[j]]] != NONE {
                b = self.table[b][INV[w[j]]];
                if j == 0 {
                    // The whole word was consumed backwards.
                    self.coincidence(f, b);
                    return Ok(());
                }
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            } else if i == j {
                self.table[f][w[i]] = b;
                self.table[b][INV[w[i]]] = f;
                return Ok(());
            } else {
                self.define(f, w[i])?;
            }
        }
    }

    fn run(mut self, subgroup_words: &[Vec<usize>]) -> Result<TcTable, GroupError> {
        for w in subgroup_words {
            self.scan_and_fill(0, w)?;
        }
        let mut a = 0;
        while a < self.table.len() {
            for r in RELATORS {
                if !self.alive(a) {
                    break;
                }
                self.scan_and_fill(a, r)?;
            }
            if self.alive(a) {
                for x in 0..3 {
                    if self.table[a][x] == NONE {
                        self.define(a, x)?;
                    }
                }
            }
            a += 1;
        }
        Ok(self.compact())
    }

    fn compact(mut self) -> TcTable {
        let n = self.table.len();
        let mut new_index = vec![NONE; n];
        let mut live = Vec::new();
        for c in 0..n {
            if self.alive(c) {
                new_index[c] = live.len();
                live.push(c);
            }
        }
        let mut rows = Vec::with_capacity(live.len());
        for &c in &live {
            let mut row = [NONE; 3];
            for (x, slot) in row.iter_mut().enumerate() {
                let target = self.rep(self.table[c][x]);
                *slot = new_index[target];
            }
            rows.push(row);
        }
        TcTable { rows }
    }
}

/// Expands a word into generator columns (`−I` is dropped: it is trivial in PSL₂(ℤ)).
fn expand(word: &StWord, cap: usize) -> Result<Vec<usize>, GroupError> {
    let mut out = Vec::new();
    for l in word.letters() {
        match l {
            Letter::S => out.push(S),
            Letter::T(k) => {
                let n = k.abs().to_usize().filter(|&n| n <= cap).ok_or(GroupError::CapExceeded { cap })?;
                let col = if k.is_positive() { T } else { T_INV };
                out.extend(std::iter::repeat_n(col, n));
            }
        }
    }
    Ok(out)
}

/// Coset table of the subgroup of PSL₂(ℤ) generated by unimodular matrices.
pub fn enumerate_matrices(gens: &[IntMat2], cap: usize) -> Result<TcTable, GroupError> {
    let mut words = Vec::with_capacity(gens.len());
    for g in gens {
        words.push(expand(&st_word(g)?, cap)?);
    }
    Enumerator::new(cap).run(&words)
}

/// Index in PSL₂(ℤ) of the subgroup generated by `gens`.
pub fn index_of_generated(gens: &[IntMat2], cap: usize) -> Result<usize, GroupError> {
    Ok(enumerate_matrices(gens, cap)?.index())
}
