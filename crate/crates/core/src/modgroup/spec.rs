use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::todd_coxeter::{self, TcTable};
use super::GroupError;
use crate::exact::{st_word, IntMat2};

/// Named congruence families. Conditions are stated for the SL₂(ℤ) group;
/// the projective flag on [`SubgroupSpec`] decides whether `±A` is tested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// The whole group.
    Full,
    /// `A ≡ I (mod m)`.
    Gamma(u64),
    /// `c ≡ 0 (mod m)`.
    Gamma0(u64),
    /// `A ≡ [[1,*],[0,1]] (mod m)`.
    Gamma1(u64),
    /// Subgroup generated by all `n`-th powers, `n ∈ {2, 3}`.
    Power(u32),
    /// `[[1+4a, 2b], [4c, 1+4d]]` with `a ≡ c (mod 2)`.
    Gamma1_8_4_1_2,
    /// `[[1+4a, b], [8c, 1+4d]]` with `a ≡ c (mod 2)`.
    Gamma1_16_16_2_2,
}

impl Family {
    pub fn level(&self) -> Option<u64> {
        match self {
            Family::Full => Some(1),
            Family::Gamma(m) | Family::Gamma0(m) | Family::Gamma1(m) => Some(*m),
            Family::Power(n) => Some(*n as u64),
            Family::Gamma1_8_4_1_2 => Some(8),
            Family::Gamma1_16_16_2_2 => Some(16),
        }
    }

    /// Membership of `a` in the SL₂(ℤ) version of the family.
    fn contains_exact(&self, a: &IntMat2) -> bool {
        let md = |x: &BigInt, m: i64| x.mod_floor(&BigInt::from(m)).to_i64().expect("small residue");
        match self {
            Family::Full => true,
            Family::Gamma(m) => {
                let m = *m as i64;
                md(&a.a, m) == 1 % m && md(&a.b, m) == 0 && md(&a.c, m) == 0 && md(&a.d, m) == 1 % m
            }
            Family::Gamma0(m) => md(&a.c, *m as i64) == 0,
            Family::Gamma1(m) => {
                let m = *m as i64;
                md(&a.a, m) == 1 % m && md(&a.c, m) == 0 && md(&a.d, m) == 1 % m
            }
            Family::Power(n) => {
                let phi = st_word(a).expect("unimodular").abelianization();
                phi % (*n as u8) == 0
            }
            Family::Gamma1_8_4_1_2 => {
                md(&a.a, 4) == 1 && md(&a.b, 2) == 0 && md(&a.c, 4) == 0 && md(&a.d, 4) == 1 && md(&(&a.a - 1 - &a.c), 8) == 0
            }
            Family::Gamma1_16_16_2_2 => {
                md(&a.a, 4) == 1 && md(&a.c, 8) == 0 && md(&a.d, 4) == 1 && md(&((&a.a - 1) * 2 - &a.c), 16) == 0
            }
        }
    }
}

pub type ResiduePredicate = dyn Fn(&[u64; 4]) -> bool + Send + Sync;

/// An explicit congruence condition: `A ∈ G` iff `pred(A mod level)`.
#[derive(Clone)]
pub struct CongruenceCondition {
    pub name: String,
    pub level: u64,
    pub pred: Arc<ResiduePredicate>,
}

impl fmt::Debug for CongruenceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CongruenceCondition({}, level {})", self.name, self.level)
    }
}

/// A subgroup given by generators; membership is decided from its
/// Todd–Coxeter coset table, computed once on first use.
#[derive(Debug)]
pub struct GeneratedGroup {
    pub gens: Vec<IntMat2>,
    cap: usize,
    table: OnceLock<Result<TcTable, GroupError>>,
}

impl GeneratedGroup {
    pub fn table(&self) -> Result<&TcTable, GroupError> {
        self.table.get_or_init(|| todd_coxeter::enumerate_matrices(&self.gens, self.cap)).as_ref().map_err(Clone::clone)
    }
}

#[derive(Clone, Debug)]
pub enum SpecKind {
    Named(Family),
    Congruence(CongruenceCondition),
    Generated(Arc<GeneratedGroup>),
    /// `P⁻¹ G P` for `P = B/√det(B)`.
    Conjugated {
        base: Box<SubgroupSpec>,
        b: IntMat2,
    },
    Intersect(Box<SubgroupSpec>, Box<SubgroupSpec>),
}

/// A finite-index subgroup of SL₂(ℤ), or of PSL₂(ℤ) when `projective`.
#[derive(Clone, Debug)]
pub struct SubgroupSpec {
    pub kind: SpecKind,
    pub projective: bool,
}

pub const DEFAULT_CAP: usize = 10_000;

impl SubgroupSpec {
    pub fn named(f: Family) -> Self {
        SubgroupSpec { kind: SpecKind::Named(f), projective: true }
    }

    pub fn full() -> Self {
        Self::named(Family::Full)
    }

    pub fn gamma(m: u64) -> Self {
        Self::named(Family::Gamma(m))
    }

    pub fn gamma0(m: u64) -> Self {
        Self::named(Family::Gamma0(m))
    }

    pub fn gamma1(m: u64) -> Self {
        Self::named(Family::Gamma1(m))
    }

    pub fn power(n: u32) -> Result<Self, GroupError> {
        if n != 2 && n != 3 {
            return Err(GroupError::UnsupportedPower(n));
        }
        Ok(Self::named(Family::Power(n)))
    }

    pub fn congruence(name: impl Into<String>, level: u64, pred: impl Fn(&[u64; 4]) -> bool + Send + Sync + 'static) -> Self {
        SubgroupSpec {
            kind: SpecKind::Congruence(CongruenceCondition { name: name.into(), level, pred: Arc::new(pred) }),
            projective: true,
        }
    }

    /// Subgroup of PSL₂(ℤ) generated by `gens`.
    pub fn generated(gens: Vec<IntMat2>) -> Result<Self, GroupError> {
        Self::generated_with_cap(gens, DEFAULT_CAP)
    }

    pub fn generated_with_cap(gens: Vec<IntMat2>, cap: usize) -> Result<Self, GroupError> {
        if let Some(g) = gens.iter().find(|g| !g.is_unimodular()) {
            return Err(GroupError::NotUnimodular(g.to_string()));
        }
        Ok(SubgroupSpec {
            kind: SpecKind::Generated(Arc::new(GeneratedGroup { gens, cap, table: OnceLock::new() })),
            projective: true,
        })
    }

    pub fn intersect(a: SubgroupSpec, b: SubgroupSpec) -> Self {
        let projective = a.projective && b.projective;
        SubgroupSpec { kind: SpecKind::Intersect(Box::new(a), Box::new(b)), projective }
    }

    /// The same subgroup read in SL₂(ℤ) (non-projective) mode.
    pub fn in_sl2(self) -> Self {
        let kind = match self.kind {
            SpecKind::Conjugated { base, b } => SpecKind::Conjugated { base: Box::new(base.in_sl2()), b },
            SpecKind::Intersect(x, y) => SpecKind::Intersect(Box::new(x.in_sl2()), Box::new(y.in_sl2())),
            k => k,
        };
        SubgroupSpec { kind, projective: false }
    }

    /// Congruence level when the subgroup is described by congruences.
    pub fn level(&self) -> Option<u64> {
        match &self.kind {
            SpecKind::Named(f) => f.level(),
            SpecKind::Congruence(c) => Some(c.level),
            SpecKind::Generated(_) | SpecKind::Conjugated { .. } => None,
            SpecKind::Intersect(a, b) => Some(a.level()?.lcm(&b.level()?)),
        }
    }

    /// Exact `A ∈ G` in SL₂(ℤ) sense, ignoring the projective flag.
    fn contains_exact(&self, a: &IntMat2) -> Result<bool, GroupError> {
        match &self.kind {
            SpecKind::Named(f) => Ok(f.contains_exact(a)),
            SpecKind::Congruence(c) => {
                let m = BigInt::from(c.level);
                let r = a.residues(&m).map(|x| x.to_u64().expect("residue fits u64"));
                Ok((c.pred)(&r))
            }
            SpecKind::Generated(g) => {
                let word = st_word(a)?;
                // The coset table lives in PSL₂(ℤ); the sign is invisible to it.
                g.table()?.contains_word(&word)
            }
            SpecKind::Conjugated { base, b } => match pullback(b, a) {
                Some(p) => base.membership(&p),
                None => Ok(false),
            },
            SpecKind::Intersect(x, y) => Ok(x.membership(a)? && y.membership(a)?),
        }
    }

    /// `A ∈ G`, or `±A ∈ G` in projective mode.
    pub fn membership(&self, a: &IntMat2) -> Result<bool, GroupError> {
        if !a.is_unimodular() {
            return Err(GroupError::NotUnimodular(a.to_string()));
        }
        if self.contains_exact(a)? {
            return Ok(true);
        }
        if self.projective || self.sign_blind() {
            return self.contains_exact(&-a);
        }
        Ok(false)
    }

    /// Kinds whose membership never distinguishes `A` from `-A`.
    fn sign_blind(&self) -> bool {
        matches!(self.kind, SpecKind::Named(Family::Power(_)) | SpecKind::Generated(_))
    }

    /// Generators recorded in the spec itself, if any.
    pub fn listed_generators(&self) -> Option<&[IntMat2]> {
        match &self.kind {
            SpecKind::Generated(g) => Some(&g.gens),
            _ => None,
        }
    }
}

/// `P·A·P⁻¹ = B·A·adj(B)/det(B)` if integral.
pub fn pullback(b: &IntMat2, a: &IntMat2) -> Option<IntMat2> {
    let m = b.det();
    (&(b * a) * &b.adjugate()).div_exact(&m)
}

/// Strict pullback used where a non-integral result is an error.
pub fn pullback_strict(b: &IntMat2, a: &IntMat2) -> Result<IntMat2, GroupError> {
    pullback(b, a).ok_or_else(|| GroupError::PullbackNotIntegral(a.to_string()))
}

impl fmt::Display for SubgroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpecKind::Named(fam) => match fam {
                Family::Full => write!(f, "SL2Z"),
                Family::Gamma(m) => write!(f, "Gamma({m})"),
                Family::Gamma0(m) => write!(f, "Gamma0({m})"),
                Family::Gamma1(m) => write!(f, "Gamma1({m})"),
                Family::Power(n) => write!(f, "GammaPow({n})"),
                Family::Gamma1_8_4_1_2 => write!(f, "Gamma1(8;4,1,2)"),
                Family::Gamma1_16_16_2_2 => write!(f, "Gamma1(16;16,2,2)"),
            },
            SpecKind::Congruence(c) => write!(f, "{}", c.name),
            SpecKind::Generated(g) => {
                write!(f, "Generated[")?;
                for (i, m) in g.gens.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    write!(f, "{m}")?;
                }
                write!(f, "]")
            }
            SpecKind::Conjugated { base, b } => write!(f, "Conj({base}; B={b}; m={})", b.det()),
            SpecKind::Intersect(a, b) => write!(f, "Intersect({a}, {b})"),
        }
    }
}

/// Parser for the group-spec grammar, e.g. `Conj(Gamma(2); B=2,0;0,1; m=2)`.
pub fn parse_spec(s: &str) -> Result<SubgroupSpec, GroupError> {
    let mut p = Parser { src: s, pos: 0 };
    let spec = p.spec()?;
    p.ws();
    if p.pos != s.len() {
        return Err(p.error("trailing input"));
    }
    Ok(spec)
}

impl std::str::FromStr for SubgroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_spec(s)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> GroupError {
        GroupError::Parse(format!("{what} at byte {} in {:?}", self.pos, self.src))
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), GroupError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {tok:?}")))
        }
    }

    fn int(&mut self) -> Result<BigInt, GroupError> {
        self.ws();
        let r = self.rest();
        let len = r.char_indices().take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))).count();
        let tok = &r[..len];
        let v = tok.parse::<BigInt>().map_err(|_| self.error("expected integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn positive(&mut self) -> Result<u64, GroupError> {
        let v = self.int()?;
        match v.to_u64() {
            Some(x) if x > 0 => Ok(x),
            _ => Err(self.error("expected positive integer")),
        }
    }

    fn matrix(&mut self) -> Result<IntMat2, GroupError> {
        let a = self.int()?;
        self.expect(",")?;
        let b = self.int()?;
        self.expect(";")?;
        let c = self.int()?;
        self.expect(",")?;
        let d = self.int()?;
        Ok(IntMat2 { a, b, c, d })
    }

    fn spec(&mut self) -> Result<SubgroupSpec, GroupError> {
        self.ws();
        if self.eat("SL2Z") || self.eat("PSL2Z") {
            return Ok(SubgroupSpec::full());
        }
        if self.eat("GammaPow(") {
            let n = self.positive()?;
            self.expect(")")?;
            return SubgroupSpec::power(n as u32);
        }
        if self.eat("Gamma0(") {
            let m = self.positive()?;
            self.expect(")")?;
            return Ok(SubgroupSpec::gamma0(m));
        }
        if self.eat("Gamma1(") {
            let m = self.positive()?;
            if self.eat(";") {
                let x = self.positive()?;
                self.expect(",")?;
                let y = self.positive()?;
                self.expect(",")?;
                let z = self.positive()?;
                self.expect(")")?;
                return match (m, x, y, z) {
                    (8, 4, 1, 2) => Ok(SubgroupSpec::named(Family::Gamma1_8_4_1_2)),
                    (16, 16, 2, 2) => Ok(SubgroupSpec::named(Family::Gamma1_16_16_2_2)),
                    _ => Err(self.error("unknown Gamma1(m;x,y,z) family")),
                };
            }
            self.expect(")")?;
            return Ok(SubgroupSpec::gamma1(m));
        }
        if self.eat("Gamma(") {
            let m = self.positive()?;
            self.expect(")")?;
            return Ok(SubgroupSpec::gamma(m));
        }
        if self.eat("Generated[") {
            let mut gens = vec![self.matrix()?];
            while self.eat("|") {
                gens.push(self.matrix()?);
            }
            self.expect("]")?;
            return SubgroupSpec::generated(gens);
        }
        if self.eat("Conj(") {
            let base = self.spec()?;
            self.expect(";")?;
            self.expect("B=")?;
            let b = self.matrix()?;
            self.expect(";")?;
            self.expect("m=")?;
            let m = self.int()?;
            self.expect(")")?;
            if b.det() != m || m <= BigInt::zero() {
                return Err(self.error("m must equal det(B) > 0"));
            }
            return Ok(SubgroupSpec { projective: base.projective, kind: SpecKind::Conjugated { base: Box::new(base), b } });
        }
        if self.eat("Intersect(") {
            let a = self.spec()?;
            self.expect(",")?;
            let b = self.spec()?;
            self.expect(")")?;
            return Ok(SubgroupSpec::intersect(a, b));
        }
        Err(self.error("unknown group spec"))
    }
}

/// True for `±I` in projective mode, `I` otherwise.
pub(crate) fn is_trivial(a: &IntMat2, projective: bool) -> bool {
    a.is_identity() || (projective && (-a).is_identity())
}
