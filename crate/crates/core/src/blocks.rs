//! Blocks of a pair of column tableaux and the closed-form `γ`.
//!
//! For columns `C`, `T` and an index `p`, the block at `p` compares
//! `C[p-1], C[p]` with `T[p-1], T[p]`:
//!
//! | letter | condition                 | `L_p` | `N_p` |
//! |--------|---------------------------|-------|-------|
//! | `L+`   | `C[p-1] < T[p] < C[p]`    | `+1`  | `0`   |
//! | `L-`   | `T[p-1] < C[p] < T[p]`    | `-1`  | `0`   |
//! | `N+`   | `C[p] <= T[p-1]`          | `0`   | `+1`  |
//! | `N-`   | `T[p] <= C[p-1]`          | `0`   | `-1`  |
//! | `U`    | `C[p] = T[p]`             | `0`   | `0`   |
//!
//! With `h` the larger head and `t` the smaller tail,
//! `γ(C, T) = Σ_{p=h}^{t} L_p + B_{t+1}` where the boundary term `B` is
//! `N_{t+1}` for (anti-)fundamental pairs and `L_{t+1}` otherwise.

use std::fmt;

use std::collections::BTreeSet;

use crate::error::Result;
use crate::tableaux::{
    enumerate_kr_tableaux, tableau_monomial, ColumnTableau, GeneralTableau, KrLabel,
};
use crate::twist::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockLetter {
    LPlus,
    LMinus,
    NPlus,
    NMinus,
    U,
}

impl BlockLetter {
    pub fn l_value(self) -> i64 {
        match self {
            BlockLetter::LPlus => 1,
            BlockLetter::LMinus => -1,
            _ => 0,
        }
    }

    pub fn n_value(self) -> i64 {
        match self {
            BlockLetter::NPlus => 1,
            BlockLetter::NMinus => -1,
            _ => 0,
        }
    }

    pub fn is_l(self) -> bool {
        matches!(self, BlockLetter::LPlus | BlockLetter::LMinus)
    }

    pub fn is_n(self) -> bool {
        matches!(self, BlockLetter::NPlus | BlockLetter::NMinus)
    }

    /// `+1`, `-1`, or `0` for `U`.
    pub fn sign(self) -> i64 {
        self.l_value() + self.n_value()
    }
}

impl fmt::Display for BlockLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BlockLetter::LPlus => "L+",
            BlockLetter::LMinus => "L-",
            BlockLetter::NPlus => "N+",
            BlockLetter::NMinus => "N-",
            BlockLetter::U => "U",
        };
        f.write_str(s)
    }
}

/// Truth values of the five block conditions at `p`, in the order `L+, L-, N+, N-, U`.
pub fn block_conditions(c: &ColumnTableau, t: &ColumnTableau, p: i32) -> [bool; 5] {
    let (c0, c1) = (c.value(p - 1), c.value(p));
    let (t0, t1) = (t.value(p - 1), t.value(p));
    [
        c0 < t1 && t1 < c1,
        t0 < c1 && c1 < t1,
        c1 <= t0,
        t1 <= c0,
        c1 == t1,
    ]
}

/// The block letter of `(C, T)` at index `p`.
pub fn classify_block(c: &ColumnTableau, t: &ColumnTableau, p: i32) -> BlockLetter {
    let (cp, tp) = (c.value(p), t.value(p));
    if cp == tp {
        BlockLetter::U
    } else if cp > tp {
        if tp <= c.value(p - 1) {
            BlockLetter::NMinus
        } else {
            BlockLetter::LPlus
        }
    } else if cp <= t.value(p - 1) {
        BlockLetter::NPlus
    } else {
        BlockLetter::LMinus
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairType {
    Fundamental,
    AntiFundamental,
    Regular,
    AntiRegular,
}

/// Pair type by comparing heads and tails; ties resolve to fundamental.
pub fn pair_type(c: &ColumnTableau, t: &ColumnTableau) -> PairType {
    let (hc, ht, tc, tt) = (c.head(), t.head(), c.tail(), t.tail());
    if hc >= ht && tc <= tt {
        PairType::Fundamental
    } else if hc <= ht && tc >= tt {
        PairType::AntiFundamental
    } else if hc > ht && tc > tt {
        PairType::Regular
    } else {
        PairType::AntiRegular
    }
}

/// `h = max(heads)` and `t = min(tails)`.
pub fn overlap(c: &ColumnTableau, t: &ColumnTableau) -> (i32, i32) {
    (c.head().max(t.head()), c.tail().min(t.tail()))
}

/// Letters of `(C, T)` on `h..=t+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTableau {
    pub h: i32,
    pub t: i32,
    pub letters: Vec<BlockLetter>,
}

impl BlockTableau {
    pub fn new(c: &ColumnTableau, t: &ColumnTableau) -> Self {
        let (h, tt) = overlap(c, t);
        let letters = (h..=tt + 1).map(|p| classify_block(c, t, p)).collect();
        Self { h, t: tt, letters }
    }

    /// Letter at index `p` inside `h..=t+1`.
    pub fn at(&self, p: i32) -> Option<BlockLetter> {
        let idx = p - self.h;
        (idx >= 0)
            .then(|| self.letters.get(idx as usize).copied())
            .flatten()
    }
}

impl fmt::Display for BlockTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, l) in self.letters.iter().enumerate() {
            writeln!(f, "{:>4} {}", self.h + n as i32, l)?;
        }
        Ok(())
    }
}

/// `γ(C, T)` from the block letters, for overlapping or adjacent supports.
///
/// Returns `None` when the supports are separated by a gap (`h > t + 1`).
pub fn gamma_block_formula(c: &ColumnTableau, t: &ColumnTableau) -> Option<i64> {
    let (h, tt) = overlap(c, t);
    if h > tt + 1 {
        return None;
    }
    let interior: i64 = (h..=tt).map(|p| classify_block(c, t, p).l_value()).sum();
    let last = classify_block(c, t, tt + 1);
    let boundary = match pair_type(c, t) {
        PairType::Fundamental | PairType::AntiFundamental => last.n_value(),
        PairType::Regular | PairType::AntiRegular => last.l_value(),
    };
    Some(interior + boundary)
}

/// Forbidden neighbouring letters: `L±` then `N±`, `N±` then `N∓`, `U` then `N`.
pub fn is_forbidden_transition(a: BlockLetter, b: BlockLetter) -> bool {
    use BlockLetter::*;
    matches!(
        (a, b),
        (LPlus, NPlus)
            | (LMinus, NMinus)
            | (NPlus, NMinus)
            | (NMinus, NPlus)
            | (U, NPlus)
            | (U, NMinus)
    )
}

/// Definitional `γ` of two columns, each read as a one-column tableau over its own
/// dominant filling.
pub fn gamma_of_columns(c: &ColumnTableau, t: &ColumnTableau, r: u32) -> Result<i64> {
    let mono = |x: &ColumnTableau| tableau_monomial(&GeneralTableau::new(vec![x.clone()]), r);
    gamma(
        &mono(c),
        &mono(&c.to_dominant()),
        &mono(t),
        &mono(&t.to_dominant()),
        r,
    )
}

/// Outcome of comparing [`gamma_block_formula`] with [`gamma_of_columns`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormulaCheck {
    /// Column pairs where the formula applies.
    pub compared: usize,
    /// `(C, T, formula, definitional)` for every disagreement.
    pub mismatches: Vec<(ColumnTableau, ColumnTableau, i64, i64)>,
}

/// Runs the comparison over all columns `C` of tableaux of `a` and `T` of tableaux of `b`.
pub fn check_block_formula(a: &KrLabel, b: &KrLabel) -> Result<FormulaCheck> {
    let columns = |l: &KrLabel| -> Result<BTreeSet<ColumnTableau>> {
        Ok(enumerate_kr_tableaux(l)?
            .into_iter()
            .flat_map(|t| t.columns)
            .collect())
    };
    let (ca, cb) = (columns(a)?, columns(b)?);
    let mut out = FormulaCheck::default();
    for c in &ca {
        for t in &cb {
            let Some(formula) = gamma_block_formula(c, t) else {
                continue;
            };
            let definitional = gamma_of_columns(c, t, a.r)?;
            out.compared += 1;
            if formula != definitional {
                out.mismatches
                    .push((c.clone(), t.clone(), formula, definitional));
            }
        }
    }
    Ok(out)
}
