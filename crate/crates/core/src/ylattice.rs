//! Y-monomials, A-monomials, Laurent coefficients in `t`, and (q,t)-characters.
//!
//! A monomial is a sparse map from lattice points `(i, j)` (Dynkin node `i`,
//! spectral parameter `j`) to non-zero integer exponents. All containers are
//! ordered maps, so iteration and serialization are deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice point `(i, j)`.
pub type Point = (i32, i32);

/// Laurent monomial in the variables `Y_{i,j}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(i32, i32, i32)>", from = "Vec<(i32, i32, i32)>")]
pub struct YMonomial {
    exps: BTreeMap<Point, i32>,
}

impl From<YMonomial> for Vec<(i32, i32, i32)> {
    fn from(m: YMonomial) -> Self {
        m.exps.into_iter().map(|((i, j), e)| (i, j, e)).collect()
    }
}

impl From<Vec<(i32, i32, i32)>> for YMonomial {
    fn from(v: Vec<(i32, i32, i32)>) -> Self {
        YMonomial::from_triples(v)
    }
}

impl YMonomial {
    /// The empty monomial `1`.
    pub fn one() -> Self {
        Self::default()
    }

    /// The single variable `Y_{i,j}`.
    pub fn y(i: i32, j: i32) -> Self {
        Self::y_pow(i, j, 1)
    }

    /// `Y_{i,j}^e`.
    pub fn y_pow(i: i32, j: i32, e: i32) -> Self {
        let mut m = Self::one();
        m.add_exp(i, j, e);
        m
    }

    /// Builds a monomial from `(i, j, exponent)` triples; repeated points add up.
    pub fn from_triples<I: IntoIterator<Item = (i32, i32, i32)>>(triples: I) -> Self {
        let mut m = Self::one();
        for (i, j, e) in triples {
            m.add_exp(i, j, e);
        }
        m
    }

    /// Multiplies in `Y_{i,j}^e`, keeping the map free of zero exponents.
    pub fn add_exp(&mut self, i: i32, j: i32, e: i32) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry((i, j)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&(i, j));
        }
    }

    /// Exponent of `Y_{i,j}`; zero outside the support.
    pub fn exp(&self, i: i32, j: i32) -> i32 {
        self.exps.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// True when every exponent is positive (the empty monomial qualifies).
    pub fn is_dominant(&self) -> bool {
        self.exps.values().all(|&e| e > 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, i32)> + '_ {
        self.exps.iter().map(|(&p, &e)| (p, e))
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// Smallest and largest spectral parameter in the support.
    pub fn spectral_range(&self) -> Option<(i32, i32)> {
        let lo = self.exps.keys().map(|p| p.1).min()?;
        let hi = self.exps.keys().map(|p| p.1).max()?;
        Some((lo, hi))
    }

    /// Largest node index in the support.
    pub fn max_node(&self) -> Option<i32> {
        self.exps.keys().map(|p| p.0).max()
    }

    pub fn inverse(&self) -> Self {
        Self {
            exps: self.exps.iter().map(|(&p, &e)| (p, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        Self {
            exps: self.exps.iter().map(|(&p, &e)| (p, e * n)).collect(),
        }
    }

    /// Image under `Y_{i,j} -> y_i`: exponents summed per node.
    pub fn collapse(&self) -> BTreeMap<i32, i32> {
        let mut out = BTreeMap::new();
        for (&(i, _), &e) in &self.exps {
            *out.entry(i).or_insert(0) += e;
        }
        out.retain(|_, e| *e != 0);
        out
    }
}

impl Mul for &YMonomial {
    type Output = YMonomial;
    fn mul(self, rhs: &YMonomial) -> YMonomial {
        monomial_mul(self, rhs)
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (&(i, j), &e) in &self.exps {
            if e == 1 {
                write!(f, "Y_{{{i},{j}}}")?;
            } else {
                write!(f, "Y_{{{i},{j}}}^{{{e}}}")?;
            }
        }
        Ok(())
    }
}

/// Commutative product of monomials.
pub fn monomial_mul(m1: &YMonomial, m2: &YMonomial) -> YMonomial {
    let mut out = m1.clone();
    for (&(i, j), &e) in &m2.exps {
        out.add_exp(i, j, e);
    }
    out
}

/// `A_{i,j} = Y_{i,j-1} Y_{i,j+1} Y_{i-1,j}^{-1} Y_{i+1,j}^{-1}`, dropping nodes outside `1..=r`.
pub fn a_monomial(i: i32, j: i32, r: u32) -> Result<YMonomial> {
    check_node(i, r)?;
    let mut m = YMonomial::one();
    m.add_exp(i, j - 1, 1);
    m.add_exp(i, j + 1, 1);
    if i > 1 {
        m.add_exp(i - 1, j, -1);
    }
    if i < r as i32 {
        m.add_exp(i + 1, j, -1);
    }
    Ok(m)
}

pub(crate) fn check_node(i: i32, r: u32) -> Result<()> {
    if i < 1 || i > r as i32 {
        Err(Error::NodeOutOfRange { node: i, rank: r })
    } else {
        Ok(())
    }
}

/// `u_{i,j}(m)`: the exponent map of `m`.
pub fn u_exponents(m: &YMonomial) -> BTreeMap<Point, i32> {
    m.exps.clone()
}

/// Non-negative exponents `v_{i,j}` of `A_{i,j}^{-1}` relating a monomial to its dominant.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VExponents {
    entries: BTreeMap<Point, i64>,
}

impl VExponents {
    pub fn get(&self, i: i32, j: i32) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, i64)> + '_ {
        self.entries.iter().map(|(&p, &v)| (p, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&mut self, i: i32, j: i32, v: i64) {
        if v == 0 {
            return;
        }
        let slot = self.entries.entry((i, j)).or_insert(0);
        *slot += v;
        if *slot == 0 {
            self.entries.remove(&(i, j));
        }
    }

    pub fn from_entries<I: IntoIterator<Item = (Point, i64)>>(it: I) -> Self {
        let mut out = Self::default();
        for ((i, j), v) in it {
            out.add(i, j, v);
        }
        out
    }

    /// `∏ A_{i,j}^{v_{i,j}}` as a monomial.
    pub fn a_product(&self, r: u32) -> Result<YMonomial> {
        let mut m = YMonomial::one();
        for (&(i, j), &v) in &self.entries {
            m = monomial_mul(&m, &a_monomial(i, j, r)?.pow(v as i32));
        }
        Ok(m)
    }
}

/// Solves `m = m_plus · ∏ A_{i,j}^{-v_{i,j}}` for a finite non-negative `v`.
///
/// The exponent of `Y_{i,j}` in `∏ A^{v}` is `v_{i,j-1} + v_{i,j+1} - v_{i-1,j} - v_{i+1,j}`,
/// so scanning `j` upward determines `v_{·,j+1}` from lower levels. The result is
/// checked by rebuilding `m`.
pub fn descendant_v(m: &YMonomial, m_plus: &YMonomial, r: u32) -> Result<VExponents> {
    let fail = |reason| Error::NotADescendant {
        m: m.to_string(),
        m_plus: m_plus.to_string(),
        reason,
    };
    if !m_plus.is_dominant() {
        return Err(Error::NotDominant(m_plus.to_string()));
    }
    let w = monomial_mul(m_plus, &m.inverse());
    let Some((lo, hi)) = w.spectral_range() else {
        return Ok(VExponents::default());
    };
    for &(i, _) in w.exps.keys() {
        check_node(i, r)?;
    }
    let rr = r as i32;
    let mut v: BTreeMap<Point, i64> = BTreeMap::new();
    let get = |v: &BTreeMap<Point, i64>, i: i32, j: i32| -> i64 {
        if i < 1 || i > rr {
            0
        } else {
            v.get(&(i, j)).copied().unwrap_or(0)
        }
    };
    for j in lo..=hi {
        for i in 1..=rr {
            let next =
                w.exp(i, j) as i64 - get(&v, i, j - 1) + get(&v, i - 1, j) + get(&v, i + 1, j);
            if next < 0 {
                return Err(fail("negative A-exponent"));
            }
            if next != 0 {
                v.insert((i, j + 1), next);
            }
        }
    }
    let out = VExponents { entries: v };
    if out.a_product(r)? != w {
        return Err(fail("reconstruction mismatch"));
    }
    Ok(out)
}

/// Laurent polynomial in `t` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<(i32, i64)>", from = "Vec<(i32, i64)>")]
pub struct TLaurent {
    coeffs: BTreeMap<i32, i64>,
}

impl From<TLaurent> for Vec<(i32, i64)> {
    fn from(t: TLaurent) -> Self {
        t.coeffs.into_iter().collect()
    }
}

impl From<Vec<(i32, i64)>> for TLaurent {
    fn from(v: Vec<(i32, i64)>) -> Self {
        let mut out = TLaurent::zero();
        for (e, c) in v {
            out.add_term(e, c);
        }
        out
    }
}

impl TLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::t_pow(0)
    }

    /// The monomial `t^e`.
    pub fn t_pow(e: i32) -> Self {
        let mut out = Self::zero();
        out.add_term(e, 1);
        out
    }

    pub fn add_term(&mut self, e: i32, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.coeffs.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i32) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&k, &c)| (k + e, c)).collect(),
        }
    }
}

impl Add for &TLaurent {
    type Output = TLaurent;
    fn add(self, rhs: &TLaurent) -> TLaurent {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c);
        }
        out
    }
}

impl Neg for &TLaurent {
    type Output = TLaurent;
    fn neg(self) -> TLaurent {
        TLaurent {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &TLaurent {
    type Output = TLaurent;
    fn mul(self, rhs: &TLaurent) -> TLaurent {
        let mut out = TLaurent::zero();
        for (e1, c1) in self.iter() {
            for (e2, c2) in rhs.iter() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for TLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.coeffs {
            if !first {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (e, a) {
                (0, _) => write!(f, "{a}")?,
                (_, 1) => write!(f, "t^{e}")?,
                _ => write!(f, "{a}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// A (q,t)-character: a finite sum of Y-monomials with `t`-Laurent coefficients,
/// together with its dominant monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QtCharacter {
    pub dominant: YMonomial,
    #[serde(with = "terms_as_pairs")]
    terms: BTreeMap<YMonomial, TLaurent>,
}

mod terms_as_pairs {
    use super::{TLaurent, YMonomial};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(
        terms: &BTreeMap<YMonomial, TLaurent>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(&YMonomial, &TLaurent)> = terms.iter().collect();
        pairs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<YMonomial, TLaurent>, D::Error> {
        let pairs: Vec<(YMonomial, TLaurent)> = Vec::deserialize(d)?;
        let mut out: BTreeMap<YMonomial, TLaurent> = BTreeMap::new();
        for (m, c) in pairs {
            let merged = &out.remove(&m).unwrap_or_default() + &c;
            if !merged.is_zero() {
                out.insert(m, merged);
            }
        }
        Ok(out)
    }
}

impl QtCharacter {
    /// The unit character `1`.
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(YMonomial::one(), TLaurent::one());
        Self {
            dominant: YMonomial::one(),
            terms,
        }
    }

    /// An empty sum carrying the given dominant monomial.
    pub fn zero_with_dominant(dominant: YMonomial) -> Self {
        Self {
            dominant,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `c · m`.
    pub fn add_term(&mut self, m: YMonomial, c: &TLaurent) {
        if c.is_zero() {
            return;
        }
        let merged = match self.terms.remove(&m) {
            Some(old) => &old + c,
            None => c.clone(),
        };
        if !merged.is_zero() {
            self.terms.insert(m, merged);
        }
    }

    pub fn coeff(&self, m: &YMonomial) -> TLaurent {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&YMonomial, &TLaurent)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &YMonomial> {
        self.terms.keys()
    }
}

/// Coefficientwise sum; the dominant of the left operand is kept.
pub fn character_add(a: &QtCharacter, b: &QtCharacter) -> QtCharacter {
    let mut out = a.clone();
    for (m, c) in b.terms() {
        out.add_term(m.clone(), c);
    }
    out
}

/// Multiplies every coefficient by `tau`.
pub fn character_scale(chi: &QtCharacter, tau: &TLaurent) -> QtCharacter {
    let mut out = QtCharacter::zero_with_dominant(chi.dominant.clone());
    for (m, c) in chi.terms() {
        out.add_term(m.clone(), &(c * tau));
    }
    out
}

impl fmt::Display for QtCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *c == TLaurent::one() {
                write!(f, "{m}")?;
            } else if m.is_one() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}){m}")?;
            }
        }
        Ok(())
    }
}
