//! Parameter sweeps behind `krqt verify`.

use std::time::Instant;

use anyhow::Result;
use krqt::blocks::check_block_formula;
use krqt::cluster::{
    compatibility_check, k_direction_counterexample, verify_quantum_mutation, verify_t_system,
    CheckReport,
};
use krqt::exchange::{negating_matching_exists, sigma_partition};
use krqt::tableaux::{fundamental_cluster, q_character, KrLabel};
use krqt::twist::{epsilon, t_commutation_exponent, twisted_mul, Twist};
use rayon::prelude::*;
use serde::Serialize;

/// One emitted report line.
#[derive(Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub report: CheckReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct Ranges {
    pub rank: u32,
    pub kmax: u32,
    pub jwindow: i32,
    pub strip_budget: usize,
}

fn timed(f: impl FnOnce() -> Result<CheckReport>) -> Result<VerifyReport> {
    let start = Instant::now();
    let report = f()?;
    Ok(VerifyReport {
        report,
        wall_ms: Some(start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Runs the instances in parallel and returns them in input order.
fn run_all<P: Sync>(
    params: &[P],
    f: impl Fn(&P) -> Result<CheckReport> + Sync,
) -> Result<Vec<VerifyReport>> {
    params.par_iter().map(|p| timed(|| f(p))).collect()
}

fn label_params(prefix: &str, l: &KrLabel) -> [(String, i64); 3] {
    [
        (format!("{prefix}i"), l.i as i64),
        (format!("{prefix}k"), l.k as i64),
        (format!("{prefix}j"), l.j as i64),
    ]
}

fn pair_report(check: &str, r: u32, a: &KrLabel, b: &KrLabel) -> CheckReport {
    let mut report = CheckReport::new(check, &[("rank", r as i64)]);
    report.params.extend(
        label_params("a_", a)
            .into_iter()
            .chain(label_params("b_", b)),
    );
    report
}

/// t-commutation of two cluster characters with `α = 2ε`, and the block formula for `γ`
/// on every overlapping or adjacent column pair of the two characters.
pub fn commute_pair(a: &KrLabel, b: &KrLabel) -> Result<CheckReport> {
    let r = a.r;
    let mut report = pair_report("commute", r, a, b);
    let (chi_a, chi_b) = (q_character(a)?, q_character(b)?);
    let eps = epsilon(&chi_a.dominant, &chi_b.dominant, r)?;
    match t_commutation_exponent(&chi_a, &chi_b, r)? {
        Some(alpha) if alpha as i64 == 2 * eps => report.note(format!("α = {alpha} = 2ε")),
        Some(alpha) => report.fail(format!("α = {alpha} but 2ε = {}", 2 * eps)),
        None => report.fail("no t-commutation exponent"),
    }
    let ab = twisted_mul(&chi_a, &chi_b, Twist::StarGamma, r)?;
    let ba = twisted_mul(&chi_b, &chi_a, Twist::StarGamma, r)?;
    if ab != ba {
        report.fail("*_γ products differ");
    }
    let formula = check_block_formula(a, b)?;
    for (c, t, f, d) in &formula.mismatches {
        report.fail(format!(
            "block formula {f} vs definitional γ {d} on C={c} T={t}"
        ));
    }
    report.note(format!(
        "{} column pairs checked against the block formula",
        formula.compared
    ));
    Ok(report)
}

pub fn commute(ranges: Ranges) -> Result<Vec<VerifyReport>> {
    let labels = fundamental_cluster(ranges.rank, ranges.kmax);
    let pairs: Vec<(KrLabel, KrLabel)> = labels
        .iter()
        .enumerate()
        .flat_map(|(n, a)| labels[n..].iter().map(move |b| (*a, *b)))
        .collect();
    run_all(&pairs, |(a, b)| commute_pair(a, b))
}

/// `(i, k, j)` with `1 <= i <= r`, `1 <= k <= kmax`, `|j| <= jwindow` and `1 - i - j` even.
fn grid(ranges: Ranges) -> Vec<(i32, u32, i32)> {
    let mut out = Vec::new();
    for i in 1..=ranges.rank as i32 {
        for k in 1..=ranges.kmax {
            for j in -ranges.jwindow..=ranges.jwindow {
                if (1 - i - j).rem_euclid(2) == 0 {
                    out.push((i, k, j));
                }
            }
        }
    }
    out
}

pub fn tsystem(ranges: Ranges) -> Result<Vec<VerifyReport>> {
    let r = ranges.rank;
    run_all(&grid(ranges), |&(i, k, j)| Ok(verify_t_system(r, i, k, j)?))
}

pub fn mutation(ranges: Ranges) -> Result<Vec<VerifyReport>> {
    let r = ranges.rank;
    run_all(&grid(ranges), |&(i, k, j)| {
        Ok(verify_quantum_mutation(r, i, k, j)?)
    })
}

pub fn compat(ranges: Ranges) -> Result<Vec<VerifyReport>> {
    Ok(vec![timed(|| {
        Ok(compatibility_check(ranges.rank, ranges.kmax)?)
    })?])
}

pub fn thm31(ranges: Ranges) -> Result<Vec<VerifyReport>> {
    let labels = fundamental_cluster(ranges.rank, ranges.kmax);
    let pairs: Vec<(KrLabel, KrLabel)> = labels
        .iter()
        .flat_map(|a| labels.iter().map(move |b| (*a, *b)))
        .collect();
    let budget = ranges.strip_budget;
    run_all(&pairs, |(a, b)| {
        let part = sigma_partition(a, b, budget)?;
        let mut report = pair_report("thm31", a.r, a, b);
        for v in &part.violations {
            report.fail(part.describe(v));
        }
        for p in &part.pairing_failures {
            report.fail(format!("no free minimal exchange for pair {p:?}"));
        }
        if !part.gamma_symmetric {
            report.fail("Σ t^γ m_C m_T is not symmetric");
        }
        report.note(format!(
            "|P0| = {}, matched pairs = {}",
            part.p0.len(),
            part.matched.len()
        ));
        if !part.gamma_negated() {
            let minimal = negating_matching_exists(a, b, budget, true)?;
            let any = negating_matching_exists(a, b, budget, false)?;
            report.note(format!(
                "γ-negating perfect matching through minimal exchanges: {minimal}; through any exchanges: {any}"
            ));
        }
        Ok(report)
    })
}

pub fn counterexample() -> Result<Vec<VerifyReport>> {
    Ok(vec![timed(|| Ok(k_direction_counterexample()?.report()))?])
}
