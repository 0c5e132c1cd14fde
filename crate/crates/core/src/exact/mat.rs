use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactError;

/// An exact 2×2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IntMat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl IntMat2 {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        IntMat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Self {
        IntMat2::new(1, 0, 0, 1)
    }

    pub fn zero() -> Self {
        IntMat2::new(0, 0, 0, 0)
    }

    /// The generator `S = [[0,-1],[1,0]]`.
    pub fn s() -> Self {
        IntMat2::new(0, -1, 1, 0)
    }

    /// The generator `T = [[1,1],[0,1]]`.
    pub fn t() -> Self {
        IntMat2::new(1, 1, 0, 1)
    }

    /// `T^k = [[1,k],[0,1]]`, also written `I_k`.
    pub fn t_pow(k: impl Into<BigInt>) -> Self {
        IntMat2::new(1, k, 0, 1)
    }

    /// Elementary matrix with a single 1 at (row, col).
    pub fn elementary(row: usize, col: usize) -> Self {
        let mut e = [0i64; 4];
        e[2 * row + col] = 1;
        IntMat2::new(e[0], e[1], e[2], e[3])
    }

    pub fn from_i64(e: [i64; 4]) -> Self {
        IntMat2::new(e[0], e[1], e[2], e[3])
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// Row-major flattening into ℤ⁴.
    pub fn flatten(&self) -> [BigInt; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn from_flat(v: &[BigInt; 4]) -> Self {
        IntMat2 { a: v[0].clone(), b: v[1].clone(), c: v[2].clone(), d: v[3].clone() }
    }

    pub fn to_i64(&self) -> Option<[i64; 4]> {
        use num_traits::ToPrimitive;
        Some([self.a.to_i64()?, self.b.to_i64()?, self.c.to_i64()?, self.d.to_i64()?])
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn adjugate(&self) -> IntMat2 {
        IntMat2 { a: self.d.clone(), b: -&self.b, c: -&self.c, d: self.a.clone() }
    }

    /// gcd of the absolute values of all entries; zero only for the zero matrix.
    pub fn content(&self) -> BigInt {
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_one()
    }

    pub fn scale(&self, k: &BigInt) -> IntMat2 {
        IntMat2 { a: &self.a * k, b: &self.b * k, c: &self.c * k, d: &self.d * k }
    }

    pub fn add(&self, other: &IntMat2) -> IntMat2 {
        IntMat2 { a: &self.a + &other.a, b: &self.b + &other.b, c: &self.c + &other.c, d: &self.d + &other.d }
    }

    pub fn sub(&self, other: &IntMat2) -> IntMat2 {
        IntMat2 { a: &self.a - &other.a, b: &self.b - &other.b, c: &self.c - &other.c, d: &self.d - &other.d }
    }

    /// Exact division of every entry by `k`, or `None` if some entry is not divisible.
    pub fn div_exact(&self, k: &BigInt) -> Option<IntMat2> {
        let div = |x: &BigInt| {
            let (q, r) = x.div_rem(k);
            r.is_zero().then_some(q)
        };
        Some(IntMat2 { a: div(&self.a)?, b: div(&self.b)?, c: div(&self.c)?, d: div(&self.d)? })
    }

    /// Matrix power with `k ≥ 0`.
    pub fn pow(&self, k: u64) -> IntMat2 {
        let mut result = IntMat2::identity();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        result
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMat2, ExactError> {
        if !self.is_unimodular() {
            return Err(ExactError::NotUnimodular(self.to_string()));
        }
        Ok(self.adjugate())
    }

    /// Entries reduced into `[0, m)`.
    pub fn residues(&self, m: &BigInt) -> [BigInt; 4] {
        [self.a.mod_floor(m), self.b.mod_floor(m), self.c.mod_floor(m), self.d.mod_floor(m)]
    }

    pub fn to_rat(&self) -> RatMat2 {
        RatMat2::from_int(self)
    }

    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        use num_traits::ToPrimitive;
        let f = |x: &BigInt| x.to_f64().unwrap_or(f64::NAN);
        [[f(&self.a), f(&self.b)], [f(&self.c), f(&self.d)]]
    }
}

impl Mul for &IntMat2 {
    type Output = IntMat2;

    fn mul(self, o: &IntMat2) -> IntMat2 {
        IntMat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for IntMat2 {
    type Output = IntMat2;

    fn mul(self, o: IntMat2) -> IntMat2 {
        &self * &o
    }
}

impl Neg for &IntMat2 {
    type Output = IntMat2;

    fn neg(self) -> IntMat2 {
        IntMat2 { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }
}

impl Neg for IntMat2 {
    type Output = IntMat2;

    fn neg(self) -> IntMat2 {
        -&self
    }
}

/// Literal syntax `a,b;c,d`.
impl fmt::Display for IntMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for IntMat2 {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ExactError::Parse(format!("expected matrix literal \"a,b;c,d\", got {s:?}"));
        let rows: Vec<&str> = s.trim().split(';').collect();
        if rows.len() != 2 {
            return Err(bad());
        }
        let mut e = Vec::with_capacity(4);
        for row in rows {
            let cols: Vec<&str> = row.split(',').collect();
            if cols.len() != 2 {
                return Err(bad());
            }
            for c in cols {
                e.push(c.trim().parse::<BigInt>().map_err(|_| bad())?);
            }
        }
        let mut it = e.into_iter();
        Ok(IntMat2 { a: it.next().unwrap(), b: it.next().unwrap(), c: it.next().unwrap(), d: it.next().unwrap() })
    }
}

impl Serialize for IntMat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for IntMat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact 2×2 rational matrix. Entries are kept in lowest terms by `BigRational`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat2 {
    pub e: [BigRational; 4],
}

impl RatMat2 {
    pub fn from_int(m: &IntMat2) -> Self {
        let r = |x: &BigInt| BigRational::from_integer(x.clone());
        RatMat2 { e: [r(&m.a), r(&m.b), r(&m.c), r(&m.d)] }
    }

    pub fn diag(x: BigRational, y: BigRational) -> Self {
        RatMat2 { e: [x, BigRational::zero(), BigRational::zero(), y] }
    }

    pub fn det(&self) -> BigRational {
        &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2]
    }

    pub fn adjugate(&self) -> RatMat2 {
        RatMat2 { e: [self.e[3].clone(), -&self.e[1], -&self.e[2], self.e[0].clone()] }
    }

    pub fn inverse(&self) -> Option<RatMat2> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let adj = self.adjugate();
        Some(RatMat2 { e: adj.e.map(|x| x / &det) })
    }

    /// `Some` iff every entry is an integer.
    pub fn to_int(&self) -> Option<IntMat2> {
        let mut out = Vec::with_capacity(4);
        for x in &self.e {
            if !x.is_integer() {
                return None;
            }
            out.push(x.to_integer());
        }
        let mut it = out.into_iter();
        Some(IntMat2 { a: it.next()?, b: it.next()?, c: it.next()?, d: it.next()? })
    }
}

impl Mul for &RatMat2 {
    type Output = RatMat2;

    fn mul(self, o: &RatMat2) -> RatMat2 {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        RatMat2 { e: [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s] }
    }
}
