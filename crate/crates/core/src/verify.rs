//! Per-`n` verification of the extended Dynkin walk-matrix claims, and
//! parallel scans over ranges of `n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::make_extended_dynkin;
use crate::linalg::{rank_fraction_free, walk_matrix, walk_matrix_square};
use crate::quotient::{canonical_partition, divisor_matrix, hat_walk_matrix};
use crate::snf::{build_w_prime, smith_normal_form};
use crate::spectra::{
    count_main_eigenvalues, divisor_eigenpairs, main_value_pattern, DEFAULT_GROUP_TOL,
    DEFAULT_PROJ_TOL,
};

/// Residual bound for the closed-form eigenpairs of `B^T`.
pub const EIGPAIR_RESIDUAL_TOL: f64 = 1e-10;
/// Bound on `|e^T v_k - pattern(n, k)|`.
pub const DOT_PATTERN_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Rank,
    Hat,
    SnfEquiv,
    Hagos,
    Conjecture,
    Eigpairs,
}

impl Check {
    pub const ALL: [Check; 6] = [
        Check::Rank,
        Check::Hat,
        Check::SnfEquiv,
        Check::Hagos,
        Check::Conjecture,
        Check::Eigpairs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Rank => "rank",
            Check::Hat => "hat",
            Check::SnfEquiv => "snf-equiv",
            Check::Hagos => "hagos",
            Check::Conjecture => "conjecture",
            Check::Eigpairs => "eigpairs",
        }
    }

    pub fn all() -> BTreeSet<Check> {
        Self::ALL.into_iter().collect()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown check `{s}`")))
    }
}

/// Parses a comma-separated check list such as `rank,hat,conjecture`.
pub fn parse_checks(list: &str) -> Result<BTreeSet<Check>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// Outcome of every selected check for one `n`. Fields of checks that were
/// not selected are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub rank_expected: usize,
    /// Rank of `W` from its Smith normal form.
    pub rank_exact: Option<usize>,
    pub rank_bareiss: Option<usize>,
    pub rank_hat: Option<usize>,
    pub rank_wb: Option<usize>,
    pub rank_wprime: Option<usize>,
    pub ap_equals_pb: Option<bool>,
    /// `A^k e = P B^k e` for `0 <= k <= n-2`.
    pub walks_lift: Option<bool>,
    pub hat_equals_wb: Option<bool>,
    #[serde(with = "crate::report::opt_bigint_vec")]
    pub snf_w: Option<Vec<BigInt>>,
    #[serde(with = "crate::report::opt_bigint_vec")]
    pub snf_wprime: Option<Vec<BigInt>>,
    pub integrally_equiv: Option<bool>,
    pub main_count: Option<usize>,
    pub eigpairs_max_residual: Option<f64>,
    pub eigpairs_max_dot_error: Option<f64>,
    pub eigpairs_ok: Option<bool>,
    #[serde(with = "crate::report::opt_bigint_vec")]
    pub conjectured: Option<Vec<BigInt>>,
    pub conjecture_holds: Option<bool>,
    /// Wall-clock milliseconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl VerifyReport {
    fn empty(n: usize) -> Self {
        VerifyReport {
            n,
            rank_expected: n / 2,
            rank_exact: None,
            rank_bareiss: None,
            rank_hat: None,
            rank_wb: None,
            rank_wprime: None,
            ap_equals_pb: None,
            walks_lift: None,
            hat_equals_wb: None,
            snf_w: None,
            snf_wprime: None,
            integrally_equiv: None,
            main_count: None,
            eigpairs_max_residual: None,
            eigpairs_max_dot_error: None,
            eigpairs_ok: None,
            conjectured: None,
            conjecture_holds: None,
            timings: BTreeMap::new(),
        }
    }

    /// Whether every theorem-backed check that ran succeeded. Conjecture
    /// verdicts are informational and never count.
    pub fn passed(&self) -> bool {
        let expected = Some(self.rank_expected);
        let ranks = [
            self.rank_exact,
            self.rank_bareiss,
            self.rank_hat,
            self.rank_wb,
            self.rank_wprime,
            self.main_count,
        ];
        let flags = [
            self.ap_equals_pb,
            self.walks_lift,
            self.hat_equals_wb,
            self.integrally_equiv,
            self.eigpairs_ok,
        ];
        let snf_len_ok = match (&self.snf_w, self.rank_exact) {
            (Some(f), Some(r)) => f.len() == r,
            _ => true,
        };
        ranks.iter().all(|r| r.is_none() || *r == expected)
            && flags.iter().all(|f| f.unwrap_or(true))
            && snf_len_ok
    }
}

/// Conjectured invariant factors of `W` for the extended Dynkin graph:
/// `r - 1` ones followed by `n - 1` (even `n`) or `(n - 1) / 2` (odd `n`), `r = floor(n/2)`.
pub fn conjectured_factors(n: usize) -> Vec<BigInt> {
    let r = n / 2;
    let last = if n % 2 == 0 { n - 1 } else { (n - 1) / 2 };
    let mut f = vec![BigInt::from(1); r - 1];
    f.push(BigInt::from(last));
    f
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureVerdict {
    pub n: usize,
    pub holds: bool,
    #[serde(with = "crate::report::bigint_vec")]
    pub observed: Vec<BigInt>,
    #[serde(with = "crate::report::bigint_vec")]
    pub conjectured: Vec<BigInt>,
}

/// Compares the observed Smith form of `W` against the conjectured pattern.
/// A mismatch is reported, not raised.
pub fn conjecture_check(n: usize) -> Result<ConjectureVerdict> {
    let g = make_extended_dynkin(n)?;
    let w = walk_matrix_square(&g.adjacency_matrix())?;
    let observed = smith_normal_form(&w).invariant_factors;
    let conjectured = conjectured_factors(n);
    Ok(ConjectureVerdict {
        n,
        holds: observed == conjectured,
        observed,
        conjectured,
    })
}

fn timed<T>(timings: &mut BTreeMap<String, f64>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *timings.entry(stage.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
    out
}

/// Runs every check for `n`.
pub fn verify(n: usize) -> Result<VerifyReport> {
    verify_with(n, &Check::all())
}

/// Runs the selected checks for `n`. Without `hagos` and `eigpairs` no
/// floating-point code is touched.
pub fn verify_with(n: usize, checks: &BTreeSet<Check>) -> Result<VerifyReport> {
    let mut rep = VerifyReport::empty(n);
    let mut t = BTreeMap::new();

    let (g, part) = timed(&mut t, "build", || -> Result<_> {
        Ok((make_extended_dynkin(n)?, canonical_partition(n)?))
    })?;
    let (a, w, b) = timed(&mut t, "build", || -> Result<_> {
        let a = g.adjacency_matrix();
        let w = walk_matrix_square(&a)?;
        let b = divisor_matrix(&g, &part)?;
        Ok((a, w, b))
    })?;
    let wants = |c: Check| checks.contains(&c);
    let need_hat = wants(Check::Rank) || wants(Check::Hat);
    let (hat, wb) = if need_hat {
        timed(&mut t, "build", || -> Result<_> {
            Ok((hat_walk_matrix(&w)?, walk_matrix(&b, n - 1)?))
        })?
    } else {
        (w.clone(), w.clone())
    };
    let w_prime = if wants(Check::Rank) || wants(Check::SnfEquiv) {
        Some(build_w_prime(&w)?)
    } else {
        None
    };

    let snf_w = if wants(Check::Rank) || wants(Check::SnfEquiv) || wants(Check::Conjecture) {
        Some(timed(&mut t, "snf", || smith_normal_form(&w)))
    } else {
        None
    };

    if wants(Check::Rank) {
        let wp = w_prime.as_ref().expect("built for rank");
        timed(&mut t, "rank", || {
            rep.rank_exact = snf_w.as_ref().map(|s| s.rank);
            rep.rank_bareiss = Some(rank_fraction_free(&w));
            rep.rank_hat = Some(rank_fraction_free(&hat));
            rep.rank_wb = Some(rank_fraction_free(&wb));
            rep.rank_wprime = Some(rank_fraction_free(wp));
        });
    }

    if wants(Check::Hat) {
        timed(&mut t, "hat", || -> Result<()> {
            let p = part.characteristic_matrix();
            rep.ap_equals_pb = Some(a.mul(&p)? == p.mul(&b)?);
            rep.walks_lift = Some(walk_matrix(&a, n - 1)? == p.mul(&wb)?);
            rep.hat_equals_wb = Some(hat == wb);
            Ok(())
        })?;
    }

    if let Some(s) = &snf_w {
        if wants(Check::Rank) || wants(Check::SnfEquiv) {
            rep.snf_w = Some(s.invariant_factors.clone());
        }
    }

    if wants(Check::SnfEquiv) {
        let wp = w_prime.as_ref().expect("built for snf-equiv");
        let s_prime = timed(&mut t, "snf", || smith_normal_form(wp));
        rep.integrally_equiv =
            Some(snf_w.as_ref().expect("computed").invariant_factors == s_prime.invariant_factors);
        rep.snf_wprime = Some(s_prime.invariant_factors);
    }

    if wants(Check::Conjecture) {
        let observed = &snf_w.as_ref().expect("computed").invariant_factors;
        let conjectured = conjectured_factors(n);
        rep.conjecture_holds = Some(*observed == conjectured);
        rep.conjectured = Some(conjectured);
        rep.snf_w = Some(observed.clone());
    }

    if wants(Check::Hagos) {
        let report = timed(&mut t, "hagos", || {
            count_main_eigenvalues(&g, DEFAULT_GROUP_TOL, DEFAULT_PROJ_TOL)
        })?;
        rep.main_count = Some(report.main_count);
    }

    if wants(Check::Eigpairs) {
        timed(&mut t, "eigpairs", || -> Result<()> {
            let pairs = divisor_eigenpairs(n)?;
            let max_residual = pairs.iter().map(|p| p.residual).fold(0.0, f64::max);
            let mut max_dot = 0.0f64;
            for p in &pairs {
                let dot: f64 = p.vector.iter().sum();
                let want = main_value_pattern(n, p.k)? as f64;
                max_dot = max_dot.max((dot - want).abs());
            }
            let mut lambdas: Vec<f64> = pairs.iter().map(|p| p.lambda).collect();
            lambdas.sort_by(f64::total_cmp);
            let min_gap = lambdas
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            let gap_bound = 2.0 * (1.0 - (std::f64::consts::PI / (n - 2) as f64).cos());
            let distinct = min_gap >= gap_bound * (1.0 - 1e-9);
            rep.eigpairs_max_residual = Some(max_residual);
            rep.eigpairs_max_dot_error = Some(max_dot);
            rep.eigpairs_ok = Some(
                max_residual < EIGPAIR_RESIDUAL_TOL && max_dot < DOT_PATTERN_TOL && distinct,
            );
            Ok(())
        })?;
    }

    rep.timings = t;
    Ok(rep)
}

/// Reports for every `n` in `from..=to`, sorted by `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanOutcome {
    pub reports: Vec<VerifyReport>,
    pub all_passed: bool,
}

/// Runs `verify_with` over `from..=to` on up to `jobs` worker threads
/// (`0` lets the pool pick). Row order does not depend on `jobs`.
pub fn scan(from: usize, to: usize, checks: &BTreeSet<Check>, jobs: usize) -> Result<ScanOutcome> {
    if from < 4 || from > to {
        return Err(Error::Usage(format!(
            "scan range must satisfy 4 <= from <= to, got {from}..{to}"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Usage(format!("cannot start {jobs} workers: {e}")))?;
    // largest n first so the slow items start early
    let reports = pool.install(|| {
        let mut reports = (from..=to)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|n| verify_with(n, checks))
            .collect::<Result<Vec<_>>>()?;
        reports.sort_by_key(|r| r.n);
        Ok::<_, Error>(reports)
    })?;
    let all_passed = reports.iter().all(VerifyReport::passed);
    Ok(ScanOutcome {
        reports,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn verify_example_size() {
        let r = verify(8).unwrap();
        assert_eq!(r.rank_exact, Some(4));
        assert_eq!(r.rank_expected, 4);
        assert_eq!(r.snf_w, Some(ints(&[1, 1, 1, 7])));
        assert_eq!(r.snf_wprime, Some(ints(&[1, 1, 1, 7])));
        assert_eq!(r.integrally_equiv, Some(true));
        assert_eq!(r.hat_equals_wb, Some(true));
        assert_eq!(r.main_count, Some(4));
        assert_eq!(r.conjecture_holds, Some(true));
        assert!(r.passed());
    }

    #[test]
    fn verify_small_and_odd() {
        let r = verify(4).unwrap();
        assert_eq!(r.rank_exact, Some(2));
        let r = verify(9).unwrap();
        assert_eq!((r.rank_exact, r.rank_expected), (Some(4), 4));
        assert!(r.passed());
        assert!(matches!(verify(3), Err(Error::InvalidOrder { .. })));
    }

    #[test]
    fn exact_checks_skip_float_stages() {
        let checks: BTreeSet<_> = [Check::Rank, Check::Hat, Check::SnfEquiv].into();
        let r = verify_with(10, &checks).unwrap();
        assert!(r.main_count.is_none() && r.eigpairs_ok.is_none());
        assert!(!r.timings.contains_key("hagos") && !r.timings.contains_key("eigpairs"));
        assert!(r.passed());
    }

    #[test]
    fn conjectured_pattern() {
        assert_eq!(conjectured_factors(8), ints(&[1, 1, 1, 7]));
        assert_eq!(conjectured_factors(9), ints(&[1, 1, 1, 4]));
        assert_eq!(conjectured_factors(4), ints(&[1, 3]));
    }

    #[test]
    fn conjecture_examples() {
        let v = conjecture_check(8).unwrap();
        assert!(v.holds);
        assert_eq!(v.observed, ints(&[1, 1, 1, 7]));
        // frozen from an independent computer-algebra Smith form
        assert_eq!(conjecture_check(9).unwrap().observed, ints(&[1, 1, 1, 4]));
        assert_eq!(conjecture_check(4).unwrap().observed, ints(&[1, 3]));
    }

    #[test]
    fn failing_flags_fail_the_report() {
        let mut r = verify_with(6, &[Check::Rank].into()).unwrap();
        assert!(r.passed());
        r.rank_hat = Some(2);
        assert!(!r.passed());
        let mut r = verify_with(6, &[Check::Conjecture].into()).unwrap();
        r.conjecture_holds = Some(false);
        assert!(r.passed());
    }

    #[test]
    fn check_parsing() {
        let set = parse_checks("rank, snf-equiv,conjecture").unwrap();
        assert_eq!(set, [Check::Rank, Check::SnfEquiv, Check::Conjecture].into());
        assert!(parse_checks("rank,bogus").is_err());
    }

    #[test]
    fn scan_is_ordered_and_job_independent() {
        let checks: BTreeSet<_> = [Check::Rank, Check::Hagos].into();
        let one = scan(4, 14, &checks, 1).unwrap();
        let four = scan(4, 14, &checks, 4).unwrap();
        assert!(one.all_passed);
        let strip = |o: &ScanOutcome| {
            o.reports
                .iter()
                .cloned()
                .map(|mut r| {
                    r.timings.clear();
                    r
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&one), strip(&four));
        assert_eq!(one.reports.iter().map(|r| r.n).collect::<Vec<_>>(), (4..=14).collect::<Vec<_>>());
        for r in &one.reports {
            assert_eq!(r.main_count, r.rank_exact);
        }
    }

    #[test]
    fn scan_rejects_bad_ranges() {
        assert!(matches!(scan(3, 8, &Check::all(), 1), Err(Error::Usage(_))));
        assert!(matches!(scan(9, 8, &Check::all(), 1), Err(Error::Usage(_))));
    }
}
