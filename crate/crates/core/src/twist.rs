//! The twist exponents `ε`, `d`, `γ` and the twisted products `*`, `*_γ`.
//!
//! `ε` is computed two ways. [`epsilon`] solves the system
//! `u_{i,j} = ũ_{i,j-1} + ũ_{i,j+1} - ũ_{i-1,j} - ũ_{i+1,j}` upward in `j`.
//! [`epsilon_series`] works in `ℤ^r ⊗ ℤ((s))` with the operators
//! `K = s^{-1}(1 + A s + s^2)` and `D = K^{-1}`, where `A = C - 2I` and `C` is
//! the Cartan matrix of type `A_r`, and evaluates
//! `((s - s^{-1}) D u(m1)) · u(m2)`.
//!
//! Series are truncated: an inexact [`VecSeries`] knows its coefficients
//! strictly below `known_below`, and [`inner`] refuses to read past that.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tableaux::KrLabel;
use crate::ylattice::{descendant_v, monomial_mul, QtCharacter, TLaurent, VExponents, YMonomial};

/// Solution `ũ` of the K-system, valid for `j <= ceiling`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UTildeTable {
    r: u32,
    start: i32,
    ceiling: i32,
    values: BTreeMap<(i32, i32), i64>,
}

impl UTildeTable {
    /// `ũ_{i,j}`. Panics when `j` exceeds the ceiling the table was built for.
    pub fn get(&self, i: i32, j: i32) -> i64 {
        assert!(
            j <= self.ceiling,
            "ũ requested at j={j} above ceiling {}",
            self.ceiling
        );
        if i < 1 || i > self.r as i32 || j <= self.start {
            return 0;
        }
        self.values.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn ceiling(&self) -> i32 {
        self.ceiling
    }

    /// Non-zero entries.
    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), i64)> + '_ {
        self.values.iter().map(|(&p, &v)| (p, v))
    }
}

/// Solves for `ũ(m)` up to `j_ceiling`, with `ũ = 0` at and below the lowest spectral index of `m`.
pub fn tilde_u(m: &YMonomial, r: u32, j_ceiling: i32) -> UTildeTable {
    let Some((lo, _)) = m.spectral_range() else {
        return UTildeTable {
            r,
            start: j_ceiling,
            ceiling: j_ceiling,
            values: BTreeMap::new(),
        };
    };
    let rr = r as i32;
    let mut values: BTreeMap<(i32, i32), i64> = BTreeMap::new();
    let get = |v: &BTreeMap<(i32, i32), i64>, i: i32, j: i32| -> i64 {
        if i < 1 || i > rr || j <= lo {
            0
        } else {
            v.get(&(i, j)).copied().unwrap_or(0)
        }
    };
    for j in lo..j_ceiling {
        for i in 1..=rr {
            let next = m.exp(i, j) as i64 - get(&values, i, j - 1)
                + get(&values, i - 1, j)
                + get(&values, i + 1, j);
            if next != 0 {
                values.insert((i, j + 1), next);
            }
        }
    }
    UTildeTable {
        r,
        start: lo,
        ceiling: j_ceiling,
        values,
    }
}

fn require_dominant(m: &YMonomial) -> Result<()> {
    if m.is_dominant() {
        Ok(())
    } else {
        Err(Error::NotDominant(m.to_string()))
    }
}

/// `ε(m1, m2) = -Σ u_{i,j+1}(m1) ũ_{i,j}(m2) + Σ u_{i,j+1}(m2) ũ_{i,j}(m1)` on dominant monomials.
pub fn epsilon(m1: &YMonomial, m2: &YMonomial, r: u32) -> Result<i64> {
    require_dominant(m1)?;
    require_dominant(m2)?;
    let hi = [m1.spectral_range(), m2.spectral_range()]
        .into_iter()
        .flatten()
        .map(|(_, h)| h)
        .max();
    let Some(hi) = hi else { return Ok(0) };
    let ceiling = hi + 1;
    let t1 = tilde_u(m1, r, ceiling);
    let t2 = tilde_u(m2, r, ceiling);
    let first: i64 = m1
        .iter()
        .map(|((i, j), e)| e as i64 * t2.get(i, j - 1))
        .sum();
    let second: i64 = m2
        .iter()
        .map(|((i, j), e)| e as i64 * t1.get(i, j - 1))
        .sum();
    Ok(second - first)
}

/// Element of `ℤ^r ⊗ ℤ((s))`, stored degree by degree from `lo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecSeries {
    r: usize,
    lo: i32,
    coeffs: Vec<Vec<i64>>,
    /// `None` for an exact series; otherwise degrees `>= known_below` are unknown.
    known_below: Option<i32>,
}

impl VecSeries {
    pub fn zero(r: u32) -> Self {
        Self {
            r: r as usize,
            lo: 0,
            coeffs: vec![],
            known_below: None,
        }
    }

    /// Exact series from `(node, degree, coefficient)` entries.
    pub fn from_entries<I: IntoIterator<Item = (i32, i32, i64)>>(r: u32, entries: I) -> Self {
        let mut map: BTreeMap<i32, Vec<i64>> = BTreeMap::new();
        for (i, d, c) in entries {
            assert!(i >= 1 && i <= r as i32, "node {i} outside 1..={r}");
            map.entry(d).or_insert_with(|| vec![0; r as usize])[(i - 1) as usize] += c;
        }
        let mut out = Self::zero(r);
        if let (Some(&lo), Some(&hi)) = (map.keys().next(), map.keys().next_back()) {
            out.lo = lo;
            out.coeffs = (lo..=hi)
                .map(|d| map.remove(&d).unwrap_or_else(|| vec![0; r as usize]))
                .collect();
        }
        out.trim();
        out
    }

    /// `e_i ⊗ f` for a scalar series `f` (a rank-one series).
    pub fn basis(r: u32, i: i32, f: &VecSeries) -> Self {
        assert_eq!(f.r, 1);
        let mut out = Self::from_entries(
            r,
            (0..f.coeffs.len()).map(|n| (i, f.lo + n as i32, f.coeffs[n][0])),
        );
        out.known_below = f.known_below;
        out
    }

    pub fn rank(&self) -> u32 {
        self.r as u32
    }

    pub fn is_exact(&self) -> bool {
        self.known_below.is_none()
    }

    pub fn known_below(&self) -> Option<i32> {
        self.known_below
    }

    /// Coefficient vector at degree `d`, or `None` if the window does not cover it.
    pub fn coeff(&self, d: i32) -> Option<Vec<i64>> {
        if self.known_below.is_some_and(|k| d >= k) {
            return None;
        }
        let idx = d - self.lo;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            Some(vec![0; self.r])
        } else {
            Some(self.coeffs[idx as usize].clone())
        }
    }

    /// Range of degrees holding non-zero coefficients.
    pub fn support(&self) -> Option<(i32, i32)> {
        let nz: Vec<i32> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|&x| x != 0))
            .map(|(n, _)| self.lo + n as i32)
            .collect();
        Some((*nz.first()?, *nz.last()?))
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .is_some_and(|c| c.iter().all(|&x| x == 0))
        {
            self.coeffs.pop();
        }
        let lead = self
            .coeffs
            .iter()
            .take_while(|c| c.iter().all(|&x| x == 0))
            .count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lo = 0;
        } else {
            self.coeffs.drain(..lead);
            self.lo += lead as i32;
        }
    }

    /// Multiplication by `s^e`.
    pub fn shift(&self, e: i32) -> Self {
        Self {
            r: self.r,
            lo: self.lo + e,
            coeffs: self.coeffs.clone(),
            known_below: self.known_below.map(|k| k + e),
        }
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        assert_eq!(self.r, other.r);
        let known_below = match (self.known_below, other.known_below) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut map: BTreeMap<i32, Vec<i64>> = BTreeMap::new();
        for (s, f) in [(1, self), (sign, other)] {
            for (n, c) in f.coeffs.iter().enumerate() {
                let d = f.lo + n as i32;
                if known_below.is_some_and(|k| d >= k) {
                    continue;
                }
                let slot = map.entry(d).or_insert_with(|| vec![0; self.r]);
                for (x, y) in slot.iter_mut().zip(c) {
                    *x += s * y;
                }
            }
        }
        let mut out = Self::from_entries(
            self.r as u32,
            map.into_iter().flat_map(|(d, c)| {
                c.into_iter()
                    .enumerate()
                    .map(move |(i, x)| (i as i32 + 1, d, x))
            }),
        );
        out.known_below = known_below;
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }
}

/// `[k]_s = s^{k-1} + s^{k-3} + ... + s^{-k+1}`, with `[0]_s = 0`.
pub fn s_number(k: u32) -> VecSeries {
    let k = k as i32;
    VecSeries::from_entries(1, (0..k).map(|n| (1, k - 1 - 2 * n, 1)))
}

/// `u(m)(s) = Σ_{i,j} u_{i,j}(m) e_i ⊗ s^j`.
pub fn u_series(m: &YMonomial, r: u32) -> VecSeries {
    VecSeries::from_entries(r, m.iter().map(|((i, j), e)| (i, j, e as i64)))
}

/// `e_i ⊗ s^{-1+(i+k+1) mod 2} [k]_s`, the series of a fundamental-cluster dominant.
pub fn u_series_cluster(r: u32, i: i32, k: u32) -> VecSeries {
    let offset = -1 + (i + k as i32 + 1).rem_euclid(2);
    VecSeries::basis(r, i, &s_number(k).shift(offset))
}

/// `u_series` of the dominant monomial of a label.
pub fn u_series_label(label: &KrLabel) -> VecSeries {
    u_series(&label.dominant_monomial(), label.r)
}

/// Matrix-valued series `Σ_n M_n s^n`, truncated like [`VecSeries`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesOperator {
    r: usize,
    lo: i32,
    mats: Vec<Vec<Vec<i64>>>,
    known_below: Option<i32>,
}

fn identity(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|a| (0..r).map(|b| i64::from(a == b)).collect())
        .collect()
}

/// `A = C - 2I`: minus the adjacency matrix of the `A_r` Dynkin diagram.
fn shifted_cartan(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|a| {
            (0..r)
                .map(|b| if a.abs_diff(b) == 1 { -1 } else { 0 })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    (0..r)
        .map(|x| {
            (0..r)
                .map(|y| (0..r).map(|z| a[x][z] * b[z][y]).sum())
                .collect()
        })
        .collect()
}

fn mat_lin(a: &[Vec<i64>], ca: i64, b: &[Vec<i64>], cb: i64) -> Vec<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| ca * x + cb * y).collect())
        .collect()
}

impl SeriesOperator {
    /// Coefficient matrix at degree `d`, if known.
    pub fn coeff(&self, d: i32) -> Option<Vec<Vec<i64>>> {
        if self.known_below.is_some_and(|k| d >= k) {
            return None;
        }
        let idx = d - self.lo;
        if idx < 0 || idx as usize >= self.mats.len() {
            Some(vec![vec![0; self.r]; self.r])
        } else {
            Some(self.mats[idx as usize].clone())
        }
    }

    pub fn known_below(&self) -> Option<i32> {
        self.known_below
    }

    fn top(&self) -> i32 {
        self.lo + self.mats.len() as i32
    }

    /// Applies the operator to a series, tracking how far the result is known.
    pub fn apply(&self, f: &VecSeries) -> VecSeries {
        assert_eq!(self.r, f.r);
        let Some((flo, fhi)) = f.support() else {
            let mut z = VecSeries::zero(f.r as u32);
            z.known_below = f.known_below.map(|k| k + self.lo);
            return z;
        };
        let known_below = match (self.known_below, f.known_below) {
            (None, None) => None,
            (Some(p), None) => Some(p + flo),
            (None, Some(q)) => Some(q + self.lo),
            (Some(p), Some(q)) => Some((p + flo).min(q + self.lo)),
        };
        let mut entries = Vec::new();
        let top = known_below.unwrap_or(self.top() + fhi);
        for n in self.lo + flo..top {
            let mut acc = vec![0i64; self.r];
            for (a_idx, m) in self.mats.iter().enumerate() {
                let a = self.lo + a_idx as i32;
                let b = n - a;
                if b < flo || b > fhi {
                    continue;
                }
                let v = &f.coeffs[(b - f.lo) as usize];
                for x in 0..self.r {
                    for y in 0..self.r {
                        acc[x] += m[x][y] * v[y];
                    }
                }
            }
            for (x, c) in acc.into_iter().enumerate() {
                entries.push((x as i32 + 1, n, c));
            }
        }
        let mut out = VecSeries::from_entries(self.r as u32, entries);
        out.known_below = known_below;
        out
    }

    /// Operator product `self ∘ other`.
    pub fn compose(&self, other: &SeriesOperator) -> SeriesOperator {
        assert_eq!(self.r, other.r);
        let known_below = match (self.known_below, other.known_below) {
            (None, None) => None,
            (Some(p), None) => Some(p + other.lo),
            (None, Some(q)) => Some(q + self.lo),
            (Some(p), Some(q)) => Some((p + other.lo).min(q + self.lo)),
        };
        let lo = self.lo + other.lo;
        let top = known_below.unwrap_or(self.top() + other.top() - 1);
        let mats = (lo..top)
            .map(|n| {
                let mut acc = vec![vec![0i64; self.r]; self.r];
                for (a_idx, m) in self.mats.iter().enumerate() {
                    let b = n - (self.lo + a_idx as i32);
                    let b_idx = b - other.lo;
                    if b_idx < 0 || b_idx as usize >= other.mats.len() {
                        continue;
                    }
                    acc = mat_lin(&acc, 1, &mat_mul(m, &other.mats[b_idx as usize]), 1);
                }
                acc
            })
            .collect();
        SeriesOperator {
            r: self.r,
            lo,
            mats,
            known_below,
        }
    }
}

/// `K = s^{-1} + A + s`, exact.
pub fn operator_k(r: u32) -> SeriesOperator {
    let r = r as usize;
    SeriesOperator {
        r,
        lo: -1,
        mats: vec![identity(r), shifted_cartan(r), identity(r)],
        known_below: None,
    }
}

/// `D = (1 + A s + s^2)^{-1} s`, known through degree `depth`.
pub fn operator_d(r: u32, depth: u32) -> SeriesOperator {
    assert!(depth >= 1, "depth must be at least 1");
    let r = r as usize;
    let a = shifted_cartan(r);
    let zero = vec![vec![0i64; r]; r];
    // (1 + A s + s^2)^{-1} = Σ E_n s^n with E_0 = I, E_n = -A E_{n-1} - E_{n-2}.
    let mut e: Vec<Vec<Vec<i64>>> = vec![identity(r)];
    for n in 1..depth as usize {
        let prev2 = if n >= 2 {
            e[n - 2].clone()
        } else {
            zero.clone()
        };
        let next = mat_lin(&mat_mul(&a, &e[n - 1]), -1, &prev2, -1);
        e.push(next);
    }
    let mut mats = vec![zero];
    mats.extend(e);
    SeriesOperator {
        r,
        lo: 0,
        mats,
        known_below: Some(depth as i32 + 1),
    }
}

/// Constant-term pairing `Σ_d <f_d, g_d>`.
pub fn inner(f: &VecSeries, g: &VecSeries) -> Result<i64> {
    assert_eq!(f.r, g.r);
    let covered = |exact: &VecSeries, trunc: &VecSeries| match (exact.support(), trunc.known_below)
    {
        (None, _) => true,
        (Some((_, hi)), Some(k)) => hi < k,
        (Some(_), None) => true,
    };
    match (f.known_below, g.known_below) {
        (Some(_), Some(_)) => {
            if f.support().is_some() && g.support().is_some() {
                return Err(Error::InsufficientWindow);
            }
        }
        (Some(_), None) if !covered(g, f) => return Err(Error::InsufficientWindow),
        (None, Some(_)) if !covered(f, g) => return Err(Error::InsufficientWindow),
        _ => {}
    }
    let mut total = 0;
    for (n, c) in f.coeffs.iter().enumerate() {
        let d = f.lo + n as i32;
        if let Some(other) = g.coeff(d) {
            total += c.iter().zip(&other).map(|(x, y)| x * y).sum::<i64>();
        }
    }
    Ok(total)
}

const SERIES_DEPTH_CAP: u32 = 1 << 14;

/// `(s D u(m1)) · u(m2)`, widening the truncation of `D` until the pairing is determined.
fn shifted_d_pairing(u1: &VecSeries, u2: &VecSeries, r: u32, shift_by: i32) -> Result<i64> {
    let mut depth = 4;
    loop {
        let du = operator_d(r, depth).apply(u1);
        let f = if shift_by == 0 {
            du.shift(1).sub(&du.shift(-1))
        } else {
            du.shift(shift_by)
        };
        match inner(&f, u2) {
            Err(Error::InsufficientWindow) if depth < SERIES_DEPTH_CAP => depth *= 2,
            other => return other,
        }
    }
}

/// `ε(m1, m2) = (s D u(m1)) · u(m2) - (s D u(m2)) · u(m1)`, evaluated with the operator `D`
/// and the constant-term pairing only.
///
/// `D` is expanded at `s = 0`, and its adjoint under the pairing is the expansion of the
/// same rational function at `s = ∞`. The two-sided form used here therefore never moves
/// `D` across the pairing.
pub fn epsilon_series(m1: &YMonomial, m2: &YMonomial, r: u32) -> Result<i64> {
    require_dominant(m1)?;
    require_dominant(m2)?;
    let (u1, u2) = (u_series(m1, r), u_series(m2, r));
    Ok(shifted_d_pairing(&u1, &u2, r, 1)? - shifted_d_pairing(&u2, &u1, r, 1)?)
}

/// The one-sided expression `((s - s^{-1}) D u(m1)) · u(m2)`.
///
/// It agrees with [`epsilon`] only when the difference between the expansions of `D` at
/// `0` and at `∞` pairs to zero against the two supports; for instance it returns `-1`
/// on `(Y_{1,0}, Y_{1,0})`. Kept for comparison.
pub fn epsilon_series_one_sided(m1: &YMonomial, m2: &YMonomial, r: u32) -> Result<i64> {
    require_dominant(m1)?;
    require_dominant(m2)?;
    shifted_d_pairing(&u_series(m1, r), &u_series(m2, r), r, 0)
}

/// `d(m1, m1+; m2, m2+) = Σ v_{i,j+1}(m1) u_{i,j}(m2) + u_{i,j+1}(m1+) v_{i,j}(m2)`.
pub fn d_value(
    m1: &YMonomial,
    m1_plus: &YMonomial,
    m2: &YMonomial,
    m2_plus: &YMonomial,
    r: u32,
) -> Result<i64> {
    let v1 = descendant_v(m1, m1_plus, r)?;
    let v2 = descendant_v(m2, m2_plus, r)?;
    Ok(d_from_parts(&v1, m1_plus, m2, &v2))
}

fn d_from_parts(v1: &VExponents, m1_plus: &YMonomial, m2: &YMonomial, v2: &VExponents) -> i64 {
    let a: i64 = v1
        .iter()
        .map(|((i, j), v)| v * m2.exp(i, j - 1) as i64)
        .sum();
    let b: i64 = m1_plus
        .iter()
        .map(|((i, j), e)| e as i64 * v2.get(i, j - 1))
        .sum();
    a + b
}

/// `γ = d(m1, m1+; m2, m2+) - d(m2, m2+; m1, m1+)`.
pub fn gamma(
    m1: &YMonomial,
    m1_plus: &YMonomial,
    m2: &YMonomial,
    m2_plus: &YMonomial,
    r: u32,
) -> Result<i64> {
    let v1 = descendant_v(m1, m1_plus, r)?;
    let v2 = descendant_v(m2, m2_plus, r)?;
    Ok(gamma_from_parts(m1, &v1, m1_plus, m2, &v2, m2_plus))
}

/// `γ` from precomputed `v`-exponents.
pub fn gamma_from_parts(
    m1: &YMonomial,
    v1: &VExponents,
    m1_plus: &YMonomial,
    m2: &YMonomial,
    v2: &VExponents,
    m2_plus: &YMonomial,
) -> i64 {
    d_from_parts(v1, m1_plus, m2, v2) - d_from_parts(v2, m2_plus, m1, v1)
}

/// Which twisted product to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Twist {
    /// `m1 * m2 = t^{γ + ε(m1+, m2+)} m1 m2`.
    Star,
    /// `m1 *_γ m2 = t^{γ} m1 m2`.
    StarGamma,
}

struct Prepared<'a> {
    chi: &'a QtCharacter,
    terms: Vec<(&'a YMonomial, &'a TLaurent, VExponents)>,
}

fn prepare(chi: &QtCharacter, r: u32) -> Result<Prepared<'_>> {
    let terms = chi
        .terms()
        .map(|(m, c)| Ok((m, c, descendant_v(m, &chi.dominant, r)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared { chi, terms })
}

/// Bilinear twisted product of two characters.
pub fn twisted_mul(a: &QtCharacter, b: &QtCharacter, mode: Twist, r: u32) -> Result<QtCharacter> {
    let eps = match mode {
        Twist::Star => epsilon(&a.dominant, &b.dominant, r)?,
        Twist::StarGamma => 0,
    };
    let pa = prepare(a, r)?;
    let pb = prepare(b, r)?;
    let chunks: Vec<Vec<(YMonomial, TLaurent)>> = pa
        .terms
        .par_iter()
        .map(|(m1, c1, v1)| {
            pb.terms
                .iter()
                .map(|(m2, c2, v2)| {
                    let g = gamma_from_parts(m1, v1, &pa.chi.dominant, m2, v2, &pb.chi.dominant);
                    let coeff = (*c1 * *c2).shift((g + eps) as i32);
                    (monomial_mul(m1, m2), coeff)
                })
                .collect()
        })
        .collect();
    let mut out = QtCharacter::zero_with_dominant(monomial_mul(&a.dominant, &b.dominant));
    for (m, c) in chunks.into_iter().flatten() {
        out.add_term(m, &c);
    }
    Ok(out)
}

/// The exponent `α` with `a * b = t^α b * a`, if one exists.
pub fn t_commutation_exponent(a: &QtCharacter, b: &QtCharacter, r: u32) -> Result<Option<i32>> {
    let ab = twisted_mul(a, b, Twist::Star, r)?;
    let ba = twisted_mul(b, a, Twist::Star, r)?;
    Ok(commutation_exponent_of(&ab, &ba))
}

/// `α` with `p = t^α q` termwise, if one exists.
pub fn commutation_exponent_of(p: &QtCharacter, q: &QtCharacter) -> Option<i32> {
    if p.num_terms() != q.num_terms() {
        return None;
    }
    let mut alpha = None;
    for ((m1, c1), (m2, c2)) in p.terms().zip(q.terms()) {
        if m1 != m2 {
            return None;
        }
        let a = *alpha.get_or_insert(c1.min_exp()? - c2.min_exp()?);
        if c2.shift(a) != *c1 {
            return None;
        }
    }
    Some(alpha.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::{fundamental_cluster, q_character, KrLabel};
    use proptest::prelude::*;

    fn ys(pairs: &[(i32, i32)]) -> YMonomial {
        YMonomial::from_triples(pairs.iter().map(|&(i, j)| (i, j, 1)))
    }

    fn y1(js: &[i32]) -> YMonomial {
        YMonomial::from_triples(js.iter().map(|&j| (1, j, 1)))
    }

    fn series1(entries: &[(i32, i64)]) -> VecSeries {
        VecSeries::from_entries(1, entries.iter().map(|&(d, c)| (1, d, c)))
    }

    #[test]
    fn tilde_u_rank_one_examples() {
        let t = tilde_u(&y1(&[-2, 0]), 1, 20);
        let nz: Vec<_> = t.iter().collect();
        assert_eq!(nz, vec![((1, -1), 1)]);
        let t = tilde_u(&y1(&[-4, -2, 0, 2]), 1, 20);
        let nz: Vec<_> = t.iter().collect();
        assert_eq!(nz, vec![((1, -3), 1), ((1, 1), 1)]);
        assert_eq!(tilde_u(&YMonomial::one(), 2, 5).iter().count(), 0);
    }

    #[test]
    fn tilde_u_of_single_variable_alternates() {
        // ũ(Y_0) = s - s^3 + s^5 - ..., so the support is unbounded above.
        let t = tilde_u(&y1(&[0]), 1, 7);
        assert_eq!(t.get(1, -1), 0);
        assert_eq!(t.get(1, 1), 1);
        assert_eq!(t.get(1, 3), -1);
        assert_eq!(t.get(1, 5), 1);
        assert_eq!(t.get(1, 7), -1);
    }

    #[test]
    fn epsilon_golden_values() {
        let y10 = y1(&[0]);
        assert_eq!(epsilon(&y10, &y1(&[-2, 0]), 1).unwrap(), -1);
        assert_eq!(epsilon(&y10, &y1(&[-4, -2, 0, 2]), 1).unwrap(), 1);
        assert_eq!(epsilon(&y10, &y10, 1).unwrap(), 0);
        assert_eq!(epsilon_series(&y10, &y1(&[-2, 0]), 1).unwrap(), -1);
        assert_eq!(epsilon_series(&y10, &y1(&[-4, -2, 0, 2]), 1).unwrap(), 1);
        assert_eq!(epsilon_series(&y10, &y10, 1).unwrap(), 0);
    }

    #[test]
    fn one_sided_series_form() {
        let y10 = y1(&[0]);
        assert_eq!(
            epsilon_series_one_sided(&y10, &y1(&[-2, 0]), 1).unwrap(),
            -1
        );
        assert_eq!(
            epsilon_series_one_sided(&y10, &y1(&[-4, -2, 0, 2]), 1).unwrap(),
            1
        );
        assert_eq!(epsilon_series_one_sided(&y10, &y10, 1).unwrap(), -1);
    }

    #[test]
    fn epsilon_rejects_non_dominant() {
        let bad = YMonomial::y_pow(1, 0, -1);
        assert!(matches!(
            epsilon(&bad, &y1(&[0]), 1),
            Err(Error::NotDominant(_))
        ));
        assert!(matches!(
            epsilon_series(&y1(&[0]), &bad, 1),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn s_numbers() {
        assert_eq!(s_number(0), VecSeries::zero(1));
        assert_eq!(s_number(1), series1(&[(0, 1)]));
        assert_eq!(s_number(2), series1(&[(-1, 1), (1, 1)]));
        assert_eq!(s_number(3), series1(&[(-2, 1), (0, 1), (2, 1)]));
    }

    #[test]
    fn cluster_series() {
        assert_eq!(u_series_cluster(1, 1, 1), u_series(&y1(&[0]), 1));
        assert_eq!(u_series_cluster(1, 1, 2), series1(&[(-2, 1), (0, 1)]));
        assert_eq!(u_series_cluster(2, 1, 0), VecSeries::zero(2));
        for l in fundamental_cluster(3, 4) {
            assert_eq!(u_series_cluster(l.r, l.i, l.k), u_series_label(&l), "{l}");
        }
    }

    #[test]
    fn operator_d_coefficients() {
        let d = operator_d(1, 7);
        let c: Vec<i64> = (0..=7).map(|n| d.coeff(n).unwrap()[0][0]).collect();
        assert_eq!(c, vec![0, 1, 0, -1, 0, 1, 0, -1]);
        assert_eq!(d.coeff(8), None);
        let d = operator_d(3, 1);
        assert_eq!(d.coeff(1).unwrap(), identity(3));
        let d = operator_d(2, 3);
        assert_eq!(d.coeff(2).unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn k_inverts_d() {
        for r in 1..=3 {
            let kd = operator_k(r).compose(&operator_d(r, 12));
            let dk = operator_d(r, 12).compose(&operator_k(r));
            for op in [kd, dk] {
                let top = op.known_below().unwrap();
                for n in -2..top {
                    let expect = if n == 0 {
                        identity(r as usize)
                    } else {
                        vec![vec![0; r as usize]; r as usize]
                    };
                    assert_eq!(op.coeff(n).unwrap(), expect, "r={r} degree {n}");
                }
            }
        }
    }

    #[test]
    fn tilde_u_equals_d_applied_to_u() {
        for l in fundamental_cluster(3, 4) {
            let m = l.dominant_monomial();
            let du = operator_d(l.r, 24).apply(&u_series(&m, l.r));
            let top = du.known_below().unwrap();
            let t = tilde_u(&m, l.r, top - 1);
            for j in -12..top {
                let c = du.coeff(j).unwrap();
                for i in 1..=l.r as i32 {
                    assert_eq!(t.get(i, j), c[(i - 1) as usize], "{l} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn k_relation_reproduces_u() {
        for l in fundamental_cluster(3, 4) {
            let m = l.dominant_monomial();
            let ceiling = 14;
            let t = tilde_u(&m, l.r, ceiling);
            for i in 1..=l.r as i32 {
                for j in -12..ceiling {
                    let lhs = t.get(i, j - 1) + t.get(i, j + 1) - t.get(i - 1, j) - t.get(i + 1, j);
                    assert_eq!(lhs, m.exp(i, j) as i64, "{l} at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn epsilon_methods_agree_on_cluster() {
        for r in 1..=3 {
            let labels = fundamental_cluster(r, 4);
            for a in &labels {
                for b in &labels {
                    let (ma, mb) = (a.dominant_monomial(), b.dominant_monomial());
                    let e = epsilon(&ma, &mb, r).unwrap();
                    assert_eq!(e, epsilon_series(&ma, &mb, r).unwrap(), "{a} {b}");
                    assert_eq!(e, -epsilon(&mb, &ma, r).unwrap());
                }
            }
        }
    }

    #[test]
    fn inner_products() {
        let e1 = VecSeries::from_entries(2, [(1, 0, 1)]);
        let e2 = VecSeries::from_entries(2, [(2, 0, 1)]);
        assert_eq!(inner(&e1, &e2).unwrap(), 0);
        let s = series1(&[(1, 1)]);
        assert_eq!(inner(&s, &s).unwrap(), 1);
        assert_eq!(inner(&s_number(2), &s_number(2)).unwrap(), 2);
    }

    #[test]
    fn inner_refuses_short_windows() {
        let d = operator_d(1, 3).apply(&series1(&[(0, 1)]));
        assert_eq!(d.known_below(), Some(4));
        assert!(inner(&d, &series1(&[(3, 1)])).is_ok());
        assert_eq!(
            inner(&d, &series1(&[(4, 1)])),
            Err(Error::InsufficientWindow)
        );
        assert_eq!(inner(&d, &d), Err(Error::InsufficientWindow));
    }

    #[test]
    fn d_and_gamma_examples() {
        let r = 1;
        let (a, a_plus) = (YMonomial::y_pow(1, 2, -1), YMonomial::y(1, 0));
        let b = YMonomial::y(1, 2);
        assert_eq!(d_value(&a, &a_plus, &b, &b, r).unwrap(), 0);
        assert_eq!(d_value(&b, &b, &a, &a_plus, r).unwrap(), 1);
        assert_eq!(gamma(&a, &a_plus, &b, &b, r).unwrap(), -1);
        assert_eq!(gamma(&b, &b, &a, &a_plus, r).unwrap(), 1);
        let dom = ys(&[(1, 0), (2, 1)]);
        assert_eq!(d_value(&dom, &dom, &b, &b, 2).unwrap(), 0);
        assert_eq!(gamma(&dom, &dom, &b, &b, 2).unwrap(), 0);
    }

    fn chi(r: u32, i: i32, j: i32, k: u32) -> QtCharacter {
        q_character(&KrLabel::new(r, i, j, k).unwrap()).unwrap()
    }

    #[test]
    fn rank_one_forward_and_reverse_products() {
        let (a, b) = (chi(1, 1, 0, 1), chi(1, 1, 2, 1));
        let fwd = twisted_mul(&a, &b, Twist::StarGamma, 1).unwrap();
        let mut expect = QtCharacter::zero_with_dominant(y1(&[0, 2]));
        for m in [
            y1(&[0, 2]),
            YMonomial::from_triples([(1, 0, 1), (1, 4, -1)]),
            YMonomial::from_triples([(1, 2, -1), (1, 4, -1)]),
        ] {
            expect.add_term(m, &TLaurent::one());
        }
        expect.add_term(YMonomial::one(), &TLaurent::t_pow(-1));
        assert_eq!(fwd, expect);
        let rev = twisted_mul(&b, &a, Twist::StarGamma, 1).unwrap();
        assert_eq!(rev.coeff(&YMonomial::one()), TLaurent::t_pow(1));
        assert_eq!(rev.num_terms(), 4);
        assert_eq!(t_commutation_exponent(&a, &b, 1).unwrap(), None);
    }

    #[test]
    fn unit_is_neutral() {
        let a = chi(2, 1, 0, 2);
        let one = QtCharacter::one();
        assert_eq!(twisted_mul(&a, &one, Twist::Star, 2).unwrap(), a);
        assert_eq!(twisted_mul(&one, &a, Twist::StarGamma, 2).unwrap(), a);
    }

    #[test]
    fn commutation_exponents() {
        let a = chi(1, 1, 0, 1);
        assert_eq!(t_commutation_exponent(&a, &a, 1).unwrap(), Some(0));
        let b = chi(1, 1, -2, 2);
        assert_eq!(t_commutation_exponent(&a, &b, 1).unwrap(), Some(-2));
    }

    fn arb_series(r: u32) -> impl Strategy<Value = VecSeries> {
        proptest::collection::vec((1..=r as i32, -5..=5i32, -3..=3i64), 0..10)
            .prop_map(move |e| VecSeries::from_entries(r, e))
    }

    proptest! {
        #[test]
        fn k_is_self_adjoint(x in arb_series(3), y in arb_series(3)) {
            let k = operator_k(3);
            prop_assert_eq!(inner(&x, &k.apply(&y)).unwrap(), inner(&k.apply(&x), &y).unwrap());
        }

        #[test]
        fn shift_is_adjoint_to_inverse_shift(x in arb_series(2), y in arb_series(2)) {
            prop_assert_eq!(inner(&x, &y.shift(1)).unwrap(), inner(&x.shift(-1), &y).unwrap());
        }

        #[test]
        fn epsilon_is_antisymmetric(
            a in proptest::collection::vec((1..=2i32, -4..=4i32), 0..4),
            b in proptest::collection::vec((1..=2i32, -4..=4i32), 0..4),
        ) {
            let (ma, mb) = (ys(&a), ys(&b));
            let e = epsilon(&ma, &mb, 2).unwrap();
            prop_assert_eq!(e, -epsilon(&mb, &ma, 2).unwrap());
            prop_assert_eq!(e, epsilon_series(&ma, &mb, 2).unwrap());
        }
    }
}
