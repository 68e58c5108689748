//! The exchange matrix `B` of the T-system quiver, the commutation matrix `Λ = 2ε`, and
//! verifiers for the quantum cluster structure on the fundamental cluster.
//!
//! Both matrices are infinite; [`MatrixWindow`] materializes the block `i <= r`,
//! `k <= k_max`, with rows and columns ordered by `(i, k)`.
//!
//! The `A_1` tables are usually printed with the entries of `ε` rather than `2ε`.
//! [`compatibility_check`] therefore checks both `ε B = Id` and `Λ B = 2 Id`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tableaux::{character_or_one, cluster_spectral, kr_dominant};
use crate::twist::{epsilon, inner, t_commutation_exponent, twisted_mul, u_series, Twist};
use crate::ylattice::{character_add, character_scale, QtCharacter, TLaurent, YMonomial};

/// Position `(i, k)` of a fundamental cluster variable `χ_{k, j(i,k)}^{(i)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ClusterIndex {
    pub i: i32,
    pub k: u32,
}

impl ClusterIndex {
    pub fn new(i: i32, k: u32) -> Self {
        Self { i, k }
    }

    /// `j(i, k) = -k + (i + k + 1) mod 2`.
    pub fn j(&self) -> i32 {
        cluster_spectral(self.i, self.k)
    }

    pub fn dominant(&self) -> YMonomial {
        kr_dominant(self.i, self.j(), self.k)
    }
}

impl fmt::Display for ClusterIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.k)
    }
}

fn in_grid(a: ClusterIndex, r: u32) -> bool {
    a.i >= 1 && a.i <= r as i32 && a.k >= 1
}

/// Entry `B_{a}^{b}` of the exchange matrix: row `a`, column `b = (i', k')`.
///
/// The non-zero entries are `B_{i'±1,k'}^{i',k'} = (-1)^{i'+k'}` and
/// `B_{i',k'±1}^{i',k'} = (-1)^{i'+k'+1}`.
pub fn b_entry(a: ClusterIndex, b: ClusterIndex, r: u32) -> i64 {
    if !in_grid(a, r) || !in_grid(b, r) {
        return 0;
    }
    let sign = if (b.i + b.k as i32).rem_euclid(2) == 0 {
        1
    } else {
        -1
    };
    let di = a.i - b.i;
    let dk = a.k as i64 - b.k as i64;
    match (di.abs(), dk.abs()) {
        (1, 0) => sign,
        (0, 1) => -sign,
        _ => 0,
    }
}

/// `ε` of the two cluster dominants.
pub fn epsilon_entry(a: ClusterIndex, b: ClusterIndex, r: u32) -> Result<i64> {
    epsilon(&a.dominant(), &b.dominant(), r)
}

/// `Λ_a^b = 2 ε(𝐘_a, 𝐘_b)`.
pub fn lambda_entry(a: ClusterIndex, b: ClusterIndex, r: u32) -> Result<i64> {
    Ok(2 * epsilon_entry(a, b, r)?)
}

/// Dense block of an infinite integer matrix indexed by [`ClusterIndex`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixWindow {
    pub index: Vec<ClusterIndex>,
    pub entries: Vec<Vec<i64>>,
}

impl MatrixWindow {
    /// The window `1 <= i <= r`, `1 <= k <= k_max`, filled from an entry function.
    pub fn build<F>(r: u32, k_max: u32, f: F) -> Result<Self>
    where
        F: Fn(ClusterIndex, ClusterIndex) -> Result<i64> + Sync,
    {
        let index: Vec<ClusterIndex> = (1..=r as i32)
            .flat_map(|i| (1..=k_max).map(move |k| ClusterIndex::new(i, k)))
            .collect();
        let entries = index
            .par_iter()
            .map(|&a| index.iter().map(|&b| f(a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { index, entries })
    }

    pub fn exchange(r: u32, k_max: u32) -> Self {
        Self::build(r, k_max, |a, b| Ok(b_entry(a, b, r))).expect("b_entry is infallible")
    }

    pub fn epsilon(r: u32, k_max: u32) -> Result<Self> {
        Self::build(r, k_max, |a, b| epsilon_entry(a, b, r))
    }

    pub fn lambda(r: u32, k_max: u32) -> Result<Self> {
        Self::build(r, k_max, |a, b| lambda_entry(a, b, r))
    }

    pub fn size(&self) -> usize {
        self.index.len()
    }

    pub fn get(&self, a: usize, b: usize) -> i64 {
        self.entries[a][b]
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| (0..n).all(|b| self.entries[a][b] == -self.entries[b][a]))
    }

    /// Matrix product on a shared index.
    pub fn product(&self, other: &MatrixWindow) -> MatrixWindow {
        assert_eq!(self.index, other.index, "windows must share an index");
        let n = self.size();
        let entries = (0..n)
            .map(|a| {
                (0..n)
                    .map(|c| {
                        (0..n)
                            .map(|b| self.entries[a][b] * other.entries[b][c])
                            .sum()
                    })
                    .collect()
            })
            .collect();
        MatrixWindow {
            index: self.index.clone(),
            entries,
        }
    }

    pub fn scaled(&self, factor: i64) -> MatrixWindow {
        MatrixWindow {
            index: self.index.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(|x| x * factor).collect())
                .collect(),
        }
    }

    /// CSV with a header row and a leading label column, both listing `(i,k)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("\"\"");
        for a in &self.index {
            out.push_str(&format!(",\"{a}\""));
        }
        out.push('\n');
        for (a, row) in self.index.iter().zip(&self.entries) {
            out.push_str(&format!("\"{a}\""));
            for x in row {
                out.push_str(&format!(",{x}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for MatrixWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>width$}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Outcome of one verification instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: BTreeMap<String, i64>,
    pub passed: bool,
    /// First violation, or the evidence for a passing negative check.
    pub witness: Option<String>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new(check: &str, params: &[(&str, i64)]) -> Self {
        Self {
            check: check.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            passed: true,
            witness: None,
            notes: Vec::new(),
        }
    }

    /// Records a violation; only the first one becomes the witness.
    pub fn fail(&mut self, what: impl Into<String>) {
        if self.passed {
            self.witness = Some(what.into());
        }
        self.passed = false;
    }

    pub fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(
            f,
            "[{}] {} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.check,
            params.join(" ")
        )?;
        if let Some(w) = &self.witness {
            write!(f, " :: {w}")?;
        }
        Ok(())
    }
}

/// Checks `ε B = Id` and `Λ B = 2 Id` on the columns `k' <= k_max - 1` of the window,
/// where every neighbour of the column lies inside the window.
pub fn compatibility_check(r: u32, k_max: u32) -> Result<CheckReport> {
    if k_max < 2 {
        return Err(Error::UsageWindow(k_max));
    }
    let mut report = CheckReport::new("compat", &[("rank", r as i64), ("kmax", k_max as i64)]);
    let b = MatrixWindow::exchange(r, k_max);
    let eps = MatrixWindow::epsilon(r, k_max)?;
    let lambda = eps.scaled(2);
    if !b.is_antisymmetric() {
        report.fail("B is not antisymmetric");
    }
    if !eps.is_antisymmetric() {
        report.fail("ε is not antisymmetric");
    }
    let eb = eps.product(&b);
    let lb = lambda.product(&b);
    let n = b.size();
    let mut diagonal = None;
    for c in (0..n).filter(|&c| b.index[c].k < k_max) {
        for a in 0..n {
            let want = i64::from(a == c);
            if eb.get(a, c) != want {
                report.fail(format!(
                    "(εB)[{}][{}] = {}, expected {want}",
                    b.index[a],
                    b.index[c],
                    eb.get(a, c)
                ));
            }
            if lb.get(a, c) != 2 * want {
                report.fail(format!(
                    "(ΛB)[{}][{}] = {}, expected {}",
                    b.index[a],
                    b.index[c],
                    lb.get(a, c),
                    2 * want
                ));
            }
            if a == c {
                diagonal.get_or_insert(lb.get(a, c));
            }
        }
    }
    if let Some(d) = diagonal {
        report.note(format!("ΛB diagonal {d}, εB diagonal {}", d / 2));
    }
    Ok(report)
}

/// `𝐘_{k,j}^{(i)}`, or `1` when `k = 0` or `i` is not a node.
fn dominant_or_one(r: u32, i: i32, k: u32, j: i32) -> YMonomial {
    if k == 0 || i < 1 || i > r as i32 {
        YMonomial::one()
    } else {
        kr_dominant(i, j, k)
    }
}

/// First term on which two characters differ, as text.
fn first_difference(lhs: &QtCharacter, rhs: &QtCharacter) -> Option<String> {
    let monomials: std::collections::BTreeSet<&YMonomial> =
        lhs.monomials().chain(rhs.monomials()).collect();
    monomials.into_iter().find_map(|m| {
        let (a, b) = (lhs.coeff(m), rhs.coeff(m));
        (a != b).then(|| format!("coefficient of {m}: lhs {a}, rhs {b}"))
    })
}

fn check_parity(r: u32, i: i32, k: u32, j: i32) -> Result<()> {
    crate::tableaux::KrLabel::new(r, i, j, k).map(|_| ())
}

/// `χ_{k,j}^{(i)} *_γ χ_{k,j+2}^{(i)}` against
/// `χ_{k+1,j}^{(i)} *_γ χ_{k-1,j+2}^{(i)} + t^{-1} χ_{k,j+1}^{(i-1)} *_γ χ_{k,j+1}^{(i+1)}`.
pub fn verify_t_system(r: u32, i: i32, k: u32, j: i32) -> Result<CheckReport> {
    check_parity(r, i, k, j)?;
    let mut report = CheckReport::new(
        "tsystem",
        &[
            ("rank", r as i64),
            ("i", i as i64),
            ("k", k as i64),
            ("j", j as i64),
        ],
    );
    let ch = |i, k, j| character_or_one(r, i, k, j);
    let lhs = twisted_mul(&ch(i, k, j)?, &ch(i, k, j + 2)?, Twist::StarGamma, r)?;
    let first = twisted_mul(
        &ch(i, k + 1, j)?,
        &ch(i, k - 1, j + 2)?,
        Twist::StarGamma,
        r,
    )?;
    let second = twisted_mul(
        &ch(i - 1, k, j + 1)?,
        &ch(i + 1, k, j + 1)?,
        Twist::StarGamma,
        r,
    )?;
    let rhs = character_add(&first, &character_scale(&second, &TLaurent::t_pow(-1)));
    if let Some(diff) = first_difference(&lhs, &rhs) {
        report.fail(diff);
    }
    report.note(format!("{} terms", lhs.num_terms()));
    Ok(report)
}

/// The t-exponents of the quantum mutation relation
/// `χ_{k,j} * χ_{k,j+2} = t^{e_first} χ_{k+1,j} * χ_{k-1,j+2} + t^{e_second} χ_{k,j+1}^{(i-1)} * χ_{k,j+1}^{(i+1)}`,
/// with the two reduction identities that link it to the deformed T-system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationExponents {
    /// `ε(𝐘_{k,j}, 𝐘_{k-1,j+2}) + ε(𝐘_{k,j}, 𝐘_{k+1,j}) - ε(𝐘_{k+1,j}, 𝐘_{k-1,j+2})`.
    pub e_first: i64,
    /// `ε(𝐘_{k,j}^{(i)}, 𝐘_{k,j+1}^{(i-1)}) + ε(𝐘_{k,j}^{(i)}, 𝐘_{k,j+1}^{(i+1)}) - ε(𝐘_{k,j+1}^{(i-1)}, 𝐘_{k,j+1}^{(i+1)})`.
    pub e_second: i64,
    /// `e_first` with the last pairing taken as `ε(𝐘_{k+1,j+2}, 𝐘_{k-1,j})`.
    pub e_first_swapped: i64,
    /// `ε(𝐘_{k,j}, 𝐘_{k-1,j+2}) + ε(𝐘_{k,j}, 𝐘_{k+1,j}) = ε(𝐘_{k,j}, 𝐘_{k,j+2})`.
    pub reduction_first: bool,
    /// `ε(𝐘_{k,j}^{(i)}, 𝐘_{k,j+1}^{(i-1)}) + ε(𝐘_{k,j}^{(i)}, 𝐘_{k,j+1}^{(i+1)}) = -1 + ε(𝐘_{k,j}, 𝐘_{k,j+2})`.
    pub reduction_second: bool,
    /// `((s - s^{-1}) u(𝐘_{k,j})) · u(𝐘_{k,j+1})`, which the second reduction needs to be `1`.
    pub pairing: i64,
}

pub fn mutation_exponents(r: u32, i: i32, k: u32, j: i32) -> Result<MutationExponents> {
    check_parity(r, i, k, j)?;
    let y = |i, k, j| dominant_or_one(r, i, k, j);
    let eps = |a: &YMonomial, b: &YMonomial| epsilon(a, b, r);
    let ykj = y(i, k, j);
    let ykj2 = y(i, k, j + 2);
    let up = y(i, k + 1, j);
    let down = y(i, k - 1, j + 2);
    let left = y(i - 1, k, j + 1);
    let right = y(i + 1, k, j + 1);
    let head = eps(&ykj, &down)? + eps(&ykj, &up)?;
    let e_first = head - eps(&up, &down)?;
    let e_first_swapped = head - eps(&y(i, k + 1, j + 2), &y(i, k - 1, j))?;
    let side = eps(&ykj, &left)? + eps(&ykj, &right)?;
    let e_second = side - eps(&left, &right)?;
    let diag = eps(&ykj, &ykj2)?;
    let u = u_series(&ykj, r);
    let stepped = u.shift(1).sub(&u.shift(-1));
    // On a node, this pairing is [(s^{-1} - s) s^{1-j-k}[k]_s s^{j+k}[k]_s]_0.
    let pairing = inner(&stepped, &u_series(&y(i, k, j + 1), r))?;
    Ok(MutationExponents {
        e_first,
        e_second,
        e_first_swapped,
        reduction_first: head == diag,
        reduction_second: side == diag - 1,
        pairing,
    })
}

/// Evaluates the quantum mutation relation with `*` products and the exponents of
/// [`mutation_exponents`].
pub fn verify_quantum_mutation(r: u32, i: i32, k: u32, j: i32) -> Result<CheckReport> {
    let ex = mutation_exponents(r, i, k, j)?;
    let mut report = CheckReport::new(
        "mutation",
        &[
            ("rank", r as i64),
            ("i", i as i64),
            ("k", k as i64),
            ("j", j as i64),
        ],
    );
    if !ex.reduction_first {
        report.fail("first reduction identity fails");
    }
    if !ex.reduction_second {
        report.fail("second reduction identity fails");
    }
    if ex.pairing != 1 {
        report.fail(format!(
            "pairing (s - s^-1)Y_(k,j) . Y_(k,j+1) = {}",
            ex.pairing
        ));
    }
    let ch = |i, k, j| character_or_one(r, i, k, j);
    let star = |a: &QtCharacter, b: &QtCharacter| twisted_mul(a, b, Twist::Star, r);
    let lhs = star(&ch(i, k, j)?, &ch(i, k, j + 2)?)?;
    let first = star(&ch(i, k + 1, j)?, &ch(i, k - 1, j + 2)?)?;
    let second = star(&ch(i - 1, k, j + 1)?, &ch(i + 1, k, j + 1)?)?;
    let rhs_with = |e1: i64| {
        character_add(
            &character_scale(&first, &TLaurent::t_pow(e1 as i32)),
            &character_scale(&second, &TLaurent::t_pow(ex.e_second as i32)),
        )
    };
    if let Some(diff) = first_difference(&lhs, &rhs_with(ex.e_first)) {
        report.fail(diff);
    }
    if ex.e_first_swapped != ex.e_first {
        let holds = first_difference(&lhs, &rhs_with(ex.e_first_swapped)).is_none();
        report.note(format!(
            "with ε(Y_(k+1,j+2), Y_(k-1,j)) the first exponent is {} and the relation {}",
            ex.e_first_swapped,
            if holds { "still holds" } else { "fails" }
        ));
    }
    report.note(format!("exponents {} and {}", ex.e_first, ex.e_second));
    Ok(report)
}

/// Evidence that `χ_{1,0}` and `χ_{1,2}` (rank one, width one) do not t-commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub forward: QtCharacter,
    pub reverse: QtCharacter,
    pub forward_constant: TLaurent,
    pub reverse_constant: TLaurent,
    /// `α` with `χ_{1,0} * χ_{1,2} = t^α χ_{1,2} * χ_{1,0}`, if any.
    pub alpha: Option<i32>,
}

impl Counterexample {
    pub fn report(&self) -> CheckReport {
        let mut report = CheckReport::new("counterexample", &[("rank", 1)]);
        let exps = |c: &TLaurent| c.iter().map(|(e, _)| e).collect::<Vec<_>>();
        let witness = format!(
            "constant term t-exponents {:?} (forward) vs {:?} (reverse), dominant coefficients {} and {}",
            exps(&self.forward_constant),
            exps(&self.reverse_constant),
            self.forward.coeff(&self.forward.dominant),
            self.reverse.coeff(&self.reverse.dominant),
        );
        report.witness = Some(witness.clone());
        if self.alpha.is_some() || self.forward_constant == self.reverse_constant {
            report.fail(witness);
        }
        report.note(format!("forward χ_(1,0) *_γ χ_(1,2) = {}", self.forward));
        report.note(format!("reverse χ_(1,2) *_γ χ_(1,0) = {}", self.reverse));
        report
    }
}

/// The k-direction pair `χ_{1,0}`, `χ_{1,2}` of `A_1`, which commute classically but not
/// under `*`.
pub fn k_direction_counterexample() -> Result<Counterexample> {
    let a = character_or_one(1, 1, 1, 0)?;
    let b = character_or_one(1, 1, 1, 2)?;
    let forward = twisted_mul(&a, &b, Twist::StarGamma, 1)?;
    let reverse = twisted_mul(&b, &a, Twist::StarGamma, 1)?;
    let one = YMonomial::one();
    Ok(Counterexample {
        forward_constant: forward.coeff(&one),
        reverse_constant: reverse.coeff(&one),
        alpha: t_commutation_exponent(&a, &b, 1)?,
        forward,
        reverse,
    })
}

/// Coefficients `c[a][b]` of `z1^a z2^b` for `0 <= a, b <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bivariate {
    n: usize,
    c: Vec<Vec<i64>>,
}

impl Bivariate {
    fn from_terms(n: usize, terms: &[(usize, usize, i64)]) -> Self {
        let mut c = vec![vec![0; n + 1]; n + 1];
        for &(a, b, x) in terms {
            if a <= n && b <= n {
                c[a][b] += x;
            }
        }
        Self { n, c }
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut c = vec![vec![0; n + 1]; n + 1];
        for a in 0..=n {
            for b in 0..=n {
                if self.c[a][b] == 0 {
                    continue;
                }
                for (a2, row) in other.c.iter().enumerate().take(n + 1 - a) {
                    for (b2, &x) in row.iter().enumerate().take(n + 1 - b) {
                        c[a + a2][b + b2] += self.c[a][b] * x;
                    }
                }
            }
        }
        Self { n, c }
    }

    /// `1 / (1 + z1^da z2^db)` truncated to the window.
    fn geometric(n: usize, da: usize, db: usize) -> Self {
        let terms: Vec<_> = (0..=n)
            .map(|m| (m * da, m * db, if m % 2 == 0 { 1 } else { -1 }))
            .take_while(|&(a, b, _)| a <= n && b <= n)
            .collect();
        Self::from_terms(n, &terms)
    }
}

/// `B(z1, z2) = z1 z2 (z2 - z1) / (1 + z1 z2)`, coefficients of `z1^a z2^b` for `1 <= a, b <= n`.
pub fn b_closed_form(n: usize) -> Vec<Vec<i64>> {
    let num = Bivariate::from_terms(n, &[(1, 2, 1), (2, 1, -1)]);
    let f = num.mul(&Bivariate::geometric(n, 1, 1));
    (1..=n).map(|a| f.c[a][1..=n].to_vec()).collect()
}

/// `Λ(z1, z2) = z1 z2 (z1 - z2) / ((1 + z1 z2)(1 + z1^2)(1 + z2^2))`, coefficients as in
/// [`b_closed_form`].
pub fn lambda_closed_form(n: usize) -> Vec<Vec<i64>> {
    let num = Bivariate::from_terms(n, &[(2, 1, 1), (1, 2, -1)]);
    let f = num
        .mul(&Bivariate::geometric(n, 1, 1))
        .mul(&Bivariate::geometric(n, 2, 0))
        .mul(&Bivariate::geometric(n, 0, 2));
    (1..=n).map(|a| f.c[a][1..=n].to_vec()).collect()
}

/// The `A_1` windows of `B` and `ε` with their generating-function comparisons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct A1Tables {
    pub b: MatrixWindow,
    pub epsilon: MatrixWindow,
    /// Window minus closed-form coefficients; all zero when they agree.
    pub b_diff: Vec<Vec<i64>>,
    pub epsilon_diff: Vec<Vec<i64>>,
}

impl A1Tables {
    pub fn matches_closed_forms(&self) -> bool {
        self.b_diff
            .iter()
            .chain(&self.epsilon_diff)
            .flatten()
            .all(|&x| x == 0)
    }
}

fn diff(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect()
}

pub fn a1_tables(n: u32) -> Result<A1Tables> {
    if n < 2 {
        return Err(Error::UsageWindow(n));
    }
    let b = MatrixWindow::exchange(1, n);
    let epsilon = MatrixWindow::epsilon(1, n)?;
    Ok(A1Tables {
        b_diff: diff(&b.entries, &b_closed_form(n as usize)),
        epsilon_diff: diff(&epsilon.entries, &lambda_closed_form(n as usize)),
        b,
        epsilon,
    })
}
