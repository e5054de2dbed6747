//! Identity and invariant checks over a `(g, d, N)` grid.
//!
//! Grid points are independent, so each `(g, d)` runs on the rayon pool; the
//! report is sorted by `(g, d, N, check)` so output does not depend on
//! scheduling.

use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::assembly::{
    contrib_ia, contrib_ia_ss, contrib_ia_ss_large_degree, contrib_ib, contrib_iiminus, contrib_iiplus,
    flip_difference, relative_stratum_poincare, thaddeus_closed_form, total_generic, total_generic_perturbed,
    total_nongeneric, window_tau, BettiTable, ContributionLedger, TermKind,
};
use crate::blocks::{bgauge_poincare, jacobian_poincare, SurfaceParams};
use crate::error::{Error, Result};
use crate::series::{assert_polynomial, binomial_power, geometric_factor, TruncSeries};
use crate::strata::{default_j_max, enumerate_delta, ModuliParams};

/// Every check name, in report order.
pub const CHECKS: &[&str] = &[
    "cancellation",
    "dual-path",
    "flip",
    "ia-ss-large-degree",
    "nongeneric-wall",
    "polynomial-invariants",
    "projective-bundle",
    "stratum-route",
    "tau-independence",
    "tri-identity",
];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub g: RangeInclusive<i64>,
    pub d: RangeInclusive<i64>,
    /// Run a single check by name.
    pub only: Option<String>,
    /// Truncation order is `2(d + 2g - 2) + buffer`.
    pub buffer: usize,
    /// Perturb one contribution of every ledger (mutation smoke test).
    pub perturb: Option<TermKind>,
}

impl VerifyConfig {
    pub fn new(g: RangeInclusive<i64>, d: RangeInclusive<i64>) -> Self {
        VerifyConfig { g, d, only: None, buffer: 8, perturb: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub g: i64,
    pub d: i64,
    pub n: i64,
    pub check: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.failures().next()
    }
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.g.is_empty() || cfg.d.is_empty() {
        return Err(Error::domain("empty g or d range"));
    }
    if cfg.buffer == 0 {
        return Err(Error::domain("truncation buffer must be positive"));
    }
    if let Some(name) = &cfg.only {
        if !CHECKS.contains(&name.as_str()) {
            return Err(Error::domain(format!("unknown check {name:?}; expected one of {}", CHECKS.join(", "))));
        }
    }
    let mut surfaces = Vec::new();
    for g in cfg.g.clone() {
        for d in cfg.d.clone() {
            surfaces.push(SurfaceParams::new(g, d)?);
        }
    }
    let mut results: Vec<CheckResult> = surfaces.par_iter().flat_map_iter(|&p| check_surface(p, cfg)).collect();
    results.sort_by(|a, b| (a.g, a.d, a.n, a.check).cmp(&(b.g, b.d, b.n, b.check)));
    Ok(VerifyReport { results })
}

type Outcome = std::result::Result<(), String>;

fn expect_eq(what: &str, left: &TruncSeries, right: &TruncSeries) -> Outcome {
    if left == right {
        Ok(())
    } else {
        Err(format!("{what}: {left} != {right}"))
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Surface<'a> {
    p: SurfaceParams,
    order: usize,
    cfg: &'a VerifyConfig,
    ledgers: Vec<(i64, Result<ContributionLedger>)>,
}

impl Surface<'_> {
    fn ledger(&self, n: i64) -> std::result::Result<&ContributionLedger, String> {
        let (_, l) = self.ledgers.iter().find(|(m, _)| *m == n).ok_or_else(|| format!("no ledger for N = {n}"))?;
        l.as_ref().map_err(|e| e.to_string())
    }

    fn run(&self, check: &'static str, n: i64) -> Option<Outcome> {
        let (p, order, d) = (self.p, self.order, self.p.d);
        let g = p.g;
        let out = match check {
            "projective-bundle" => {
                if n != d {
                    return None;
                }
                let want = &(&binomial_power(-1, 1, (2 * (d + g - 1)) as usize, order) * &geometric_factor(2, 1, order))
                    * &jacobian_poincare(g, order);
                self.ledger(n).and_then(|l| expect_eq("P(N=d)", &l.total, &want))
            }
            "polynomial-invariants" => self.ledger(n).and_then(|l| {
                let table = lift(BettiTable::from_total(p, n, &l.total))?;
                match table.checks.first_failure() {
                    None => Ok(()),
                    Some(name) => Err(format!("{name} fails on {}", table.poincare_string())),
                }
            }),
            "dual-path" => self.ledger(n).and_then(|l| {
                let closed = lift(thaddeus_closed_form(p, n, order))?;
                expect_eq("closed form", &l.total, &closed)
            }),
            "flip" => {
                if n > d - 1 {
                    return None;
                }
                (|| {
                    let diff = &self.ledger(n + 1)?.total - &self.ledger(n)?.total;
                    let free = lift(flip_difference(p, n, order, false))?;
                    expect_eq("P(N+1) - P(N)", &diff, &free)?;
                    let fixed = lift(flip_difference(p, n, order, true))?;
                    expect_eq("fixed determinant times J", &(&fixed * &jacobian_poincare(g, order)), &free)
                })()
            }
            "cancellation" => {
                if n > d - 1 {
                    return None;
                }
                (|| {
                    let ib = lift(contrib_ib(p, n, n, order))?;
                    let ia = lift(contrib_ia(p, n, n + 1, order))?;
                    let iip = lift(contrib_iiplus(p, n, n + 1, order))?;
                    expect_eq("I_b - I_a - II+", &(&(&ib - &ia) - &iip), &TruncSeries::zero(order))
                })()
            }
            "tri-identity" => {
                if n > d - 1 {
                    return None;
                }
                (|| {
                    let minus = lift(contrib_iiminus(p, d - n, n, order))?;
                    let plus = lift(contrib_iiplus(p, d - n, n + 1, order))?;
                    let flip = lift(flip_difference(p, n, order, false))?;
                    expect_eq("II- - II+", &(&minus - &plus), &flip)
                })()
            }
            "nongeneric-wall" => (|| {
                let wall = lift(total_nongeneric(p, n, order))?;
                let minus = lift(contrib_iiminus(p, d - n, n, order))?;
                expect_eq("wall - generic", &(&wall.total - &self.ledger(n)?.total), &minus)?;
                match assert_polynomial(&wall.total, p.top_degree()) {
                    Err(Error::NotPolynomial { .. }) => Ok(()),
                    Ok(_) => Err("wall series unexpectedly polynomial".into()),
                    Err(e) => Err(e.to_string()),
                }
            })(),
            "ia-ss-large-degree" => {
                let large = contrib_ia_ss_large_degree(p, order)?;
                self.ledger(n).and_then(|l| {
                    let entry = l.entry(TermKind::IaSs, None).ok_or("ledger has no Ia_SS entry")?;
                    expect_eq("I_a^(d/2)", &entry.series, &large)
                })
            }
            "tau-independence" => self.ledger(n).and_then(|l| {
                let entry = l.entry(TermKind::IaSs, None).ok_or("ledger has no Ia_SS entry")?;
                let shared = lift(contrib_ia_ss(p, order))?;
                expect_eq("Ia_SS entry", &entry.series, &shared)
            }),
            "stratum-route" => (|| {
                let mp = lift(ModuliParams::new(g, d, window_tau(n)))?;
                let index = lift(enumerate_delta(&mp, default_j_max(&mp, order)))?;
                let mut total = bgauge_poincare(g, order);
                for s in index.iter().skip(1) {
                    total = &total - &lift(relative_stratum_poincare(s, p, order))?;
                }
                expect_eq("stratum route", &self.ledger(n)?.total, &total)
            })(),
            other => Err(format!("unknown check {other}")),
        };
        Some(out)
    }
}

fn check_surface(p: SurfaceParams, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let order = p.top_degree() + cfg.buffer;
    let windows: Vec<i64> = (p.d / 2 + 1..=p.d).collect();
    let ledgers = windows
        .iter()
        .map(|&n| {
            let l = match cfg.perturb {
                Some(kind) => total_generic_perturbed(p, n, order, kind),
                None => total_generic(p, n, order),
            };
            (n, l)
        })
        .collect();
    let surface = Surface { p, order, cfg, ledgers };
    let mut out = Vec::new();
    for &n in &windows {
        for &check in CHECKS {
            if surface.cfg.only.as_deref().is_some_and(|o| o != check) {
                continue;
            }
            if let Some(outcome) = surface.run(check, n) {
                out.push(CheckResult { g: p.g, d: p.d, n, check, pass: outcome.is_ok(), detail: outcome.err() });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes() {
        let report = run(&VerifyConfig::new(2..=2, 3..=5)).unwrap();
        assert!(report.all_pass(), "{:?}", report.first_failure());
        // flip needs N <= d - 1
        assert!(report.results.iter().any(|r| r.check == "flip" && r.d == 5 && r.n == 3));
        assert!(!report.results.iter().any(|r| r.check == "flip" && r.n == r.d));
    }

    #[test]
    fn only_filters_and_rejects_unknown() {
        let mut cfg = VerifyConfig::new(2..=2, 5..=5);
        cfg.only = Some("dual-path".into());
        let report = run(&cfg).unwrap();
        assert_eq!(report.results.len(), 3);
        assert!(report.results.iter().all(|r| r.check == "dual-path" && r.pass));
        cfg.only = Some("nope".into());
        assert!(run(&cfg).is_err());
    }

    #[test]
    fn perturbation_is_detected() {
        let mut cfg = VerifyConfig::new(2..=2, 5..=5);
        cfg.perturb = Some(TermKind::IaSs);
        let report = run(&cfg).unwrap();
        let first = report.first_failure().expect("a perturbed ledger must fail");
        assert_eq!((first.n, first.check), (3, "dual-path"));
    }
}
