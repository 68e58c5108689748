//! L-strips, box exchanges between two KR-tableaux, and the partition `σ` of
//! `𝓑 × 𝓑'` used to cancel the contributions to `γ`.
//!
//! An L-strip of a column pair `(C_a, T_b)` starts at an L-block and runs over
//! the N-blocks that follow it, inside the common support of the two columns.
//! Exchanging a strip swaps the letters of `C_a` and `T_b` on its indices.
//! A set of strips that touch disjoint boxes is exchangeable when the swap
//! leaves two valid KR-tableaux.
//!
//! Exchangeable sets are found by brute force over subsets, so the number of
//! strips in a pair is bounded by a budget.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blocks::{classify_block, overlap, BlockLetter};
use crate::error::{Error, Result};
use crate::tableaux::{
    enumerate_kr_tableaux, tableau_monomial, ColumnTableau, GeneralTableau, KrLabel,
};
use crate::twist::gamma_from_parts;
use crate::ylattice::{descendant_v, monomial_mul, TLaurent, YMonomial};

/// Default bound on the number of L-strips in a pair for the subset search.
pub const DEFAULT_STRIP_BUDGET: usize = 16;

/// Sign of the L-block a strip starts with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StripSign {
    Plus,
    Minus,
}

/// Strip of the column pair `(C_a, T_b)`, `a = c_col` and `b = t_col`, over `p0..=p1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LStrip {
    pub c_col: usize,
    pub t_col: usize,
    pub p0: i32,
    pub p1: i32,
    pub sign: StripSign,
}

impl fmt::Display for LStrip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            StripSign::Plus => "L+",
            StripSign::Minus => "L-",
        };
        write!(
            f,
            "{s}[{},{}]@({},{})",
            self.p0, self.p1, self.c_col, self.t_col
        )
    }
}

/// L-strips of a single column pair, ordered by `p0`.
pub fn find_l_strips(c: &ColumnTableau, t: &ColumnTableau) -> Vec<LStrip> {
    strips_at(c, t, 0, 0)
}

fn strips_at(c: &ColumnTableau, t: &ColumnTableau, c_col: usize, t_col: usize) -> Vec<LStrip> {
    let (h, tail) = overlap(c, t);
    let mut out: Vec<LStrip> = Vec::new();
    let mut open: Option<LStrip> = None;
    for p in h..=tail {
        match classify_block(c, t, p) {
            b @ (BlockLetter::LPlus | BlockLetter::LMinus) => {
                out.extend(open.take());
                let sign = if b == BlockLetter::LPlus {
                    StripSign::Plus
                } else {
                    StripSign::Minus
                };
                open = Some(LStrip {
                    c_col,
                    t_col,
                    p0: p,
                    p1: p,
                    sign,
                });
            }
            BlockLetter::NPlus | BlockLetter::NMinus => {
                if let Some(s) = open.as_mut() {
                    s.p1 = p;
                }
            }
            BlockLetter::U => out.extend(open.take()),
        }
    }
    out.extend(open);
    out
}

/// Both columns with the strip's letters swapped.
fn swapped(c: &ColumnTableau, t: &ColumnTableau, strip: &LStrip) -> (ColumnTableau, ColumnTableau) {
    let (mut c2, mut t2) = (c.clone(), t.clone());
    for p in strip.p0..=strip.p1 {
        let (a, b) = (c.letter(p), t.letter(p));
        if let (Some(a), Some(b)) = (a, b) {
            c2.set_letter(p, b);
            t2.set_letter(p, a);
        }
    }
    (c2, t2)
}

/// Whether exchanging the strip keeps both columns strictly increasing.
pub fn column_compatible(c: &ColumnTableau, t: &ColumnTableau, strip: &LStrip) -> bool {
    let (c2, t2) = swapped(c, t, strip);
    c2.is_strictly_increasing() && t2.is_strictly_increasing()
}

/// A column pair `(C_a, T_b)` with its neighbours in the two general tableaux.
#[derive(Debug, Clone, Copy)]
pub struct PairContext<'a> {
    pub c: &'a ColumnTableau,
    pub t: &'a ColumnTableau,
    pub c_left: Option<&'a ColumnTableau>,
    pub t_left: Option<&'a ColumnTableau>,
    pub c_right: Option<&'a ColumnTableau>,
    pub t_right: Option<&'a ColumnTableau>,
}

impl<'a> PairContext<'a> {
    /// A pair with no neighbouring columns.
    pub fn single(c: &'a ColumnTableau, t: &'a ColumnTableau) -> Self {
        Self {
            c,
            t,
            c_left: None,
            t_left: None,
            c_right: None,
            t_right: None,
        }
    }

    /// The pair `(C_a, T_b)` of two general tableaux.
    pub fn at(c: &'a GeneralTableau, t: &'a GeneralTableau, a: usize, b: usize) -> Self {
        let left = |g: &'a GeneralTableau, l: usize| l.checked_sub(1).map(|m| &g.columns[m]);
        Self {
            c: &c.columns[a],
            t: &t.columns[b],
            c_left: left(c, a),
            t_left: left(t, b),
            c_right: c.columns.get(a + 1),
            t_right: t.columns.get(b + 1),
        }
    }
}

/// `left[p + 1] <= col[p]` on the strip.
fn diagonal_from_left(left: Option<&ColumnTableau>, col: &ColumnTableau, strip: &LStrip) -> bool {
    left.is_none_or(|left| (strip.p0..=strip.p1).all(|p| left.value(p + 1) <= col.value(p)))
}

/// `col[p] <= right[p - 1]` on the strip.
fn diagonal_to_right(col: &ColumnTableau, right: Option<&ColumnTableau>, strip: &LStrip) -> bool {
    right.is_none_or(|right| (strip.p0..=strip.p1).all(|p| col.value(p) <= right.value(p - 1)))
}

/// Conditions `(lC)` and `(lT)`: after the exchange, the diagonals coming from the left
/// neighbours stay weakly increasing.
pub fn left_compatible(ctx: &PairContext<'_>, strip: &LStrip) -> bool {
    let (c2, t2) = swapped(ctx.c, ctx.t, strip);
    diagonal_from_left(ctx.c_left, &c2, strip) && diagonal_from_left(ctx.t_left, &t2, strip)
}

/// Conditions `(rC)` and `(rT)`, mirrored on the right neighbours.
pub fn right_compatible(ctx: &PairContext<'_>, strip: &LStrip) -> bool {
    let (c2, t2) = swapped(ctx.c, ctx.t, strip);
    diagonal_to_right(&c2, ctx.c_right, strip) && diagonal_to_right(&t2, ctx.t_right, strip)
}

/// All L-strips of the column pairs `(C_a, T_b)`, ordered by `(a, b, p0)`.
pub fn all_l_strips(c: &GeneralTableau, t: &GeneralTableau) -> Vec<LStrip> {
    let mut out = Vec::new();
    for (a, ca) in c.columns.iter().enumerate() {
        for (b, tb) in t.columns.iter().enumerate() {
            out.extend(strips_at(ca, tb, a, b));
        }
    }
    out
}

/// Boxes `(side, column, index)` a strip moves; side `0` is `C`.
fn boxes(s: &LStrip) -> impl Iterator<Item = (u8, usize, i32)> + '_ {
    (s.p0..=s.p1).flat_map(move |p| [(0, s.c_col, p), (1, s.t_col, p)])
}

/// Whether no box is moved by two of the strips.
pub fn strips_disjoint(strips: &[LStrip]) -> bool {
    let mut seen = BTreeSet::new();
    strips.iter().flat_map(boxes).all(|b| seen.insert(b))
}

/// Swaps the boxes of every strip. For strips touching disjoint boxes, applying the same
/// strips twice is the identity.
pub fn apply_exchange(
    c: &GeneralTableau,
    t: &GeneralTableau,
    strips: &[LStrip],
) -> (GeneralTableau, GeneralTableau) {
    let (mut c2, mut t2) = (c.clone(), t.clone());
    for s in strips {
        let (a, b) = swapped(&c2.columns[s.c_col], &t2.columns[s.t_col], s);
        c2.columns[s.c_col] = a;
        t2.columns[s.t_col] = b;
    }
    (c2, t2)
}

/// Strict columns and weak diagonals; letters are only permuted by an exchange.
fn shape_valid(t: &GeneralTableau) -> bool {
    t.is_kr_valid(u32::MAX - 1)
}

/// A set of L-strips, listed in `(a, b, p0)` order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ExchangeSequence {
    pub strips: Vec<LStrip>,
    pub minimal: bool,
}

impl fmt::Display for ExchangeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.strips.iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))?;
        if self.minimal {
            write!(f, " minimal")?;
        }
        Ok(())
    }
}

/// Every exchangeable set of pairwise disjoint L-strips in canonical order, each flagged
/// minimal when no proper nonempty subset of it is exchangeable.
pub fn find_exchangeable_sequences(
    c: &GeneralTableau,
    t: &GeneralTableau,
    budget: usize,
) -> Result<Vec<ExchangeSequence>> {
    let strips = all_l_strips(c, t);
    if strips.len() > budget.min(63) {
        return Err(Error::SearchBudgetExceeded {
            found: strips.len(),
            budget,
        });
    }
    let pick = |mask: u64| -> Vec<LStrip> {
        (0..strips.len())
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| strips[b])
            .collect()
    };
    let good: BTreeSet<u64> = (1..1u64 << strips.len())
        .filter(|&mask| {
            let chosen = pick(mask);
            if !strips_disjoint(&chosen) {
                return false;
            }
            let (c2, t2) = apply_exchange(c, t, &chosen);
            shape_valid(&c2) && shape_valid(&t2)
        })
        .collect();
    let mut out: Vec<ExchangeSequence> = good
        .iter()
        .map(|&mask| {
            let mut sub = (mask - 1) & mask;
            let mut minimal = true;
            while sub != 0 {
                if good.contains(&sub) {
                    minimal = false;
                    break;
                }
                sub = (sub - 1) & mask;
            }
            ExchangeSequence {
                strips: pick(mask),
                minimal,
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Index of a pair `(C, T)` in `𝓑 × 𝓑'`, by enumeration order of each factor.
pub type PairIndex = (usize, usize);

/// A broken expectation found while building `σ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// A pair without exchangeable sequences has `γ ≠ 0`.
    GammaOnP0 { pair: PairIndex, gamma: i64 },
    /// An exchange changed `m_C m_T`.
    MonomialChanged { from: PairIndex, to: PairIndex },
    /// An exchange did not map `γ` to `-γ`.
    GammaNotNegated {
        from: PairIndex,
        to: PairIndex,
        before: i64,
        after: i64,
    },
}

/// The partition `P0 ⊔ P1 ⊔ P-1` of `𝓑 × 𝓑'` with the pairing `σ: P1 → P-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaPartition {
    pub left: KrLabel,
    pub right: KrLabel,
    pub left_tableaux: Vec<GeneralTableau>,
    pub right_tableaux: Vec<GeneralTableau>,
    /// Pairs without an exchangeable sequence.
    pub p0: Vec<PairIndex>,
    /// `(x, σ(x))` with `x ∈ P1`, `σ(x) ∈ P-1`, and the sequence exchanged.
    pub matched: Vec<(PairIndex, PairIndex, ExchangeSequence)>,
    /// Pairs whose minimal exchanges all lead to pairs already matched.
    pub pairing_failures: Vec<PairIndex>,
    pub violations: Vec<Violation>,
    /// `Σ t^{γ(C,T)} m_C m_T` equals the same sum with `γ` negated, which is `*_γ`
    /// commutativity of the two characters.
    pub gamma_symmetric: bool,
}

impl SigmaPartition {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.pairing_failures.is_empty() && self.gamma_symmetric
    }

    pub fn p0_gamma_vanishes(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::GammaOnP0 { .. }))
    }

    pub fn monomials_conserved(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::MonomialChanged { .. }))
    }

    pub fn gamma_negated(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::GammaNotNegated { .. }))
    }

    /// A violation with the tableaux written out.
    pub fn describe(&self, v: &Violation) -> String {
        let pair =
            |(x, y): PairIndex| format!("C={} T={}", self.left_tableaux[x], self.right_tableaux[y]);
        match v {
            Violation::GammaOnP0 { pair: p, gamma } => {
                format!("γ = {gamma} on P0 pair {}", pair(*p))
            }
            Violation::MonomialChanged { from, to } => {
                format!("exchange {} -> {} changes m_C m_T", pair(*from), pair(*to))
            }
            Violation::GammaNotNegated {
                from,
                to,
                before,
                after,
            } => format!(
                "exchange {} -> {} maps γ = {before} to {after}",
                pair(*from),
                pair(*to)
            ),
        }
    }
}

/// A pair, its `γ`, and its exchangeable sequences with their images.
type PairRow = (PairIndex, i64, Vec<(ExchangeSequence, PairIndex)>);

/// Everything `σ` needs about `𝓑 × 𝓑'`: for each pair its `γ` and the images under
/// its exchangeable sequences, with the minimal ones first.
struct PairData {
    left: Vec<GeneralTableau>,
    right: Vec<GeneralTableau>,
    gamma: BTreeMap<PairIndex, i64>,
    exchanges: BTreeMap<PairIndex, Vec<(ExchangeSequence, PairIndex)>>,
    r: u32,
}

impl PairData {
    fn new(label1: &KrLabel, label2: &KrLabel, budget: usize) -> Result<Self> {
        let r = label1.r;
        let left = enumerate_kr_tableaux(label1)?;
        let right = enumerate_kr_tableaux(label2)?;
        let index = |ts: &[GeneralTableau]| -> BTreeMap<GeneralTableau, usize> {
            ts.iter()
                .cloned()
                .enumerate()
                .map(|(n, t)| (t, n))
                .collect()
        };
        let (index1, index2) = (index(&left), index(&right));
        let (dom1, dom2) = (label1.dominant_monomial(), label2.dominant_monomial());
        let prepared = |ts: &[GeneralTableau], dom: &YMonomial| -> Result<Vec<_>> {
            ts.iter()
                .map(|t| {
                    let m = tableau_monomial(t, r);
                    let v = descendant_v(&m, dom, r)?;
                    Ok((m, v))
                })
                .collect()
        };
        let (prep1, prep2) = (prepared(&left, &dom1)?, prepared(&right, &dom2)?);
        let pairs: Vec<PairIndex> = (0..left.len())
            .flat_map(|x| (0..right.len()).map(move |y| (x, y)))
            .collect();
        let rows: Vec<PairRow> = pairs
            .par_iter()
            .map(|&(x, y)| {
                let ((m1, v1), (m2, v2)) = (&prep1[x], &prep2[y]);
                let g = gamma_from_parts(m1, v1, &dom1, m2, v2, &dom2);
                let mut seqs = find_exchangeable_sequences(&left[x], &right[y], budget)?;
                seqs.sort_by_key(|s| !s.minimal);
                let images = seqs
                    .into_iter()
                    .map(|s| {
                        let (c2, t2) = apply_exchange(&left[x], &right[y], &s.strips);
                        // Exchanges keep staircase shapes and KR validity, so both land in 𝓑.
                        let img = (index1[&c2], index2[&t2]);
                        (s, img)
                    })
                    .collect();
                Ok(((x, y), g, images))
            })
            .collect::<Result<_>>()?;
        let mut gamma = BTreeMap::new();
        let mut exchanges = BTreeMap::new();
        for (p, g, images) in rows {
            gamma.insert(p, g);
            exchanges.insert(p, images);
        }
        Ok(Self {
            left,
            right,
            gamma,
            exchanges,
            r,
        })
    }

    fn product_monomial(&self, (x, y): PairIndex) -> YMonomial {
        monomial_mul(
            &tableau_monomial(&self.left[x], self.r),
            &tableau_monomial(&self.right[y], self.r),
        )
    }
}

/// Builds `σ` for two labels of the same rank and checks the cancellation of `γ`.
///
/// Pairs are visited in index order. An unmatched pair is matched through the
/// canonically least minimal exchangeable sequence whose image is still unmatched.
pub fn sigma_partition(
    label1: &KrLabel,
    label2: &KrLabel,
    budget: usize,
) -> Result<SigmaPartition> {
    let data = PairData::new(label1, label2, budget)?;
    let mut violations = Vec::new();
    let mut p0 = Vec::new();
    let mut taken: BTreeSet<PairIndex> = BTreeSet::new();
    let mut matched = Vec::new();
    let mut pairing_failures = Vec::new();

    for (&pair, images) in &data.exchanges {
        let g = data.gamma[&pair];
        if images.is_empty() {
            p0.push(pair);
            if g != 0 {
                violations.push(Violation::GammaOnP0 { pair, gamma: g });
            }
            continue;
        }
        if taken.contains(&pair) {
            continue;
        }
        let choice = images
            .iter()
            .take_while(|(s, _)| s.minimal)
            .find(|(_, img)| *img != pair && !taken.contains(img));
        let Some((seq, img)) = choice else {
            pairing_failures.push(pair);
            continue;
        };
        taken.insert(pair);
        taken.insert(*img);
        if data.product_monomial(pair) != data.product_monomial(*img) {
            violations.push(Violation::MonomialChanged {
                from: pair,
                to: *img,
            });
        }
        let after = data.gamma[img];
        if after != -g {
            violations.push(Violation::GammaNotNegated {
                from: pair,
                to: *img,
                before: g,
                after,
            });
        }
        matched.push((pair, *img, seq.clone()));
    }

    let mut forward: BTreeMap<YMonomial, TLaurent> = BTreeMap::new();
    let mut backward: BTreeMap<YMonomial, TLaurent> = BTreeMap::new();
    for (&pair, &g) in &data.gamma {
        let m = data.product_monomial(pair);
        forward.entry(m.clone()).or_default().add_term(g as i32, 1);
        backward.entry(m).or_default().add_term(-g as i32, 1);
    }

    Ok(SigmaPartition {
        left: *label1,
        right: *label2,
        left_tableaux: data.left,
        right_tableaux: data.right,
        p0,
        matched,
        pairing_failures,
        violations,
        gamma_symmetric: forward == backward,
    })
}

/// Whether the pairs with exchangeable sequences admit a perfect matching in which every
/// matched pair is related by one exchange and has opposite `γ`. With `minimal_only`, only
/// minimal sequences count as edges.
///
/// The search is exhaustive backtracking and is meant for desk-scale labels.
pub fn negating_matching_exists(
    label1: &KrLabel,
    label2: &KrLabel,
    budget: usize,
    minimal_only: bool,
) -> Result<bool> {
    let data = PairData::new(label1, label2, budget)?;
    let mut adj: BTreeMap<PairIndex, Vec<PairIndex>> = BTreeMap::new();
    for (&pair, images) in &data.exchanges {
        let g = data.gamma[&pair];
        let edges = images
            .iter()
            .filter(|(s, img)| {
                (s.minimal || !minimal_only) && *img != pair && data.gamma[img] == -g
            })
            .map(|&(_, img)| img);
        adj.entry(pair).or_default().extend(edges);
    }
    let vertices: Vec<PairIndex> = data
        .exchanges
        .iter()
        .filter(|(_, images)| !images.is_empty())
        .map(|(&p, _)| p)
        .collect();

    fn extend(
        vertices: &[PairIndex],
        adj: &BTreeMap<PairIndex, Vec<PairIndex>>,
        used: &mut BTreeSet<PairIndex>,
    ) -> bool {
        let Some(&v) = vertices.iter().find(|v| !used.contains(*v)) else {
            return true;
        };
        used.insert(v);
        for &w in &adj[&v] {
            if used.insert(w) {
                if extend(vertices, adj, used) {
                    return true;
                }
                used.remove(&w);
            }
        }
        used.remove(&v);
        false
    }
    Ok(extend(&vertices, &adj, &mut BTreeSet::new()))
}
