//! Words in the generators `S` and `T` of SL₂(ℤ).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactError, IntMat2};

/// A single syllable of a word. `T(k)` stands for `T^k` with `k ≠ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Letter {
    S,
    T(BigInt),
}

/// A word `sign · w₁ w₂ … w_k` in `S` and powers of `T`.
///
/// Adjacent `T` powers are always merged and `S·S` is folded into the sign,
/// so no cancellable pair survives.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct StWord {
    letters: Vec<Letter>,
    negative: bool,
}

impl StWord {
    pub fn empty() -> Self {
        StWord::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i32 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Appends a letter on the right, keeping the word reduced.
    pub fn push(&mut self, letter: Letter) {
        match letter {
            Letter::T(k) if k.is_zero() => {}
            Letter::T(k) => match self.letters.last_mut() {
                Some(Letter::T(prev)) => {
                    *prev += k;
                    if prev.is_zero() {
                        self.letters.pop();
                    }
                }
                _ => self.letters.push(Letter::T(k)),
            },
            Letter::S => {
                if let Some(Letter::S) = self.letters.last() {
                    // S² = -I is central.
                    self.letters.pop();
                    self.negative = !self.negative;
                } else {
                    self.letters.push(Letter::S);
                }
            }
        }
    }

    pub fn evaluate(&self) -> IntMat2 {
        let mut m = IntMat2::identity();
        for l in &self.letters {
            m = match l {
                Letter::S => &m * &IntMat2::s(),
                Letter::T(k) => &m * &IntMat2::t_pow(k.clone()),
            };
        }
        if self.negative {
            -m
        } else {
            m
        }
    }

    /// Number of `S`, `T`, `T⁻¹` symbols when fully expanded.
    pub fn expanded_len(&self) -> BigInt {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::S => BigInt::one(),
                Letter::T(k) => k.abs(),
            })
            .sum()
    }

    /// Image under the abelianization PSL₂(ℤ) → ℤ/6 with `S ↦ 3`, `T ↦ 1`.
    pub fn abelianization(&self) -> u8 {
        let six = BigInt::from(6);
        let mut total = BigInt::zero();
        for l in &self.letters {
            match l {
                Letter::S => total += 3,
                Letter::T(k) => total += k,
            }
        }
        total.mod_floor(&six).to_u8().expect("residue mod 6")
    }
}

impl fmt::Display for StWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            match l {
                Letter::S => write!(f, "S")?,
                Letter::T(k) if k.is_one() => write!(f, "T")?,
                Letter::T(k) => write!(f, "T^{k}")?,
            }
        }
        Ok(())
    }
}

/// Decomposes a unimodular matrix into `S` and `T` powers.
///
/// The left column is reduced by Euclidean division with the top entry as
/// dividend: `A = T^q · S · A'` where `A' = S⁻¹ T^{-q} A` has a strictly
/// smaller lower-left entry in absolute value.
pub fn st_word(a: &IntMat2) -> Result<StWord, ExactError> {
    if !a.is_unimodular() {
        return Err(ExactError::NotUnimodular(a.to_string()));
    }
    let mut word = StWord::empty();
    let mut cur = a.clone();
    while !cur.c.is_zero() {
        let q = cur.a.div_floor(&cur.c);
        // cur ← T^{-q}·cur
        cur.a -= &q * &cur.c;
        cur.b -= &q * &cur.d;
        word.push(Letter::T(q));
        // cur ← S⁻¹·cur = [[c, d], [-a, -b]]
        cur = IntMat2 { a: cur.c.clone(), b: cur.d.clone(), c: -&cur.a, d: -&cur.b };
        word.push(Letter::S);
    }
    // cur = ±[[1, k], [0, 1]]
    if cur.a.is_one() {
        word.push(Letter::T(cur.b.clone()));
    } else {
        word.negative = !word.negative;
        word.push(Letter::T(-&cur.b));
    }
    debug_assert_eq!(&word.evaluate(), a);
    Ok(word)
}
