//! Assembles the equivariant Poincaré series of the tau-semistable pairs from
//! per-stratum contributions, plus the closed forms used to check it: the
//! wall-crossing (flip) difference and the coefficient-extraction formula.
//!
//! All cohomological outputs depend on `tau` only through the window `N` with
//! `tau` in `(max{d/2, N-1}, N)`, so `N` is what these functions take.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::blocks::{
    ab_sum_bound, bgauge_poincare, bu1_poincare, critical_set_poincare, jacobian_poincare, macdonald_kernel,
    semistable_stratum_poincare_reduced, sym_product_poincare, t_pow, type_i_split_poincare, type_ii_poincare,
    SurfaceParams,
};
use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::series::{assert_polynomial, divide_by_one_plus_t, BiTruncSeries, TruncSeries};
use crate::strata::{sigma_of, StratumClass, StratumDescriptor};

/// `(1+t)^{2g} / (1 - t^2)`: Jacobian times `BU(1)`.
fn jac_bu1(g: i64, order: usize) -> TruncSeries {
    &jacobian_poincare(g, order) * &bu1_poincare(order)
}

fn check_window(p: SurfaceParams, n: i64) -> Result<()> {
    if 2 * n <= p.d || n > p.d {
        return Err(Error::domain(format!("window N = {n} must satisfy d/2 < N <= d for d = {}", p.d)));
    }
    Ok(())
}

/// `I_a^{d/2}` by the general closed form valid for every `d`:
///
/// `P^{Gbar}(A_ss)/(1-t^2) - sum_{j=0}^{floor(d/2)} (t^{2j} - t^{2(d+g-1-2j)})/(1-t^2) P(S^j M) P(J)`
/// minus, for `d` even, `t^{2g-2}/(1-t^2) P(S^{d/2} M) P(J)`.
pub fn contrib_ia_ss_general(p: SurfaceParams, order: usize) -> TruncSeries {
    let (g, d) = (p.g, p.d);
    let jb = jac_bu1(g, order);
    let mut out = &semistable_stratum_poincare_reduced(p, order) * &bu1_poincare(order);
    for j in 0..=d / 2 {
        let diff = &t_pow(2 * j, order) - &t_pow(2 * (d + g - 1 - 2 * j), order);
        out = &out - &(&(&diff * &sym_product_poincare(g, j, order)) * &jb);
    }
    if d % 2 == 0 {
        out = &out - &(&(&t_pow(2 * g - 2, order) * &sym_product_poincare(g, d / 2, order)) * &jb);
    }
    out
}

/// `I_a^{d/2} = t^{2d+4-4g}/(1-t^2) P^{Gbar}(A_ss)`, available for `d > 4g - 4`
/// where the negative normal space over `A_ss` is a vector bundle.
pub fn contrib_ia_ss_large_degree(p: SurfaceParams, order: usize) -> Option<TruncSeries> {
    if p.d <= 4 * p.g - 4 {
        return None;
    }
    let shift = t_pow(2 * p.d + 4 - 4 * p.g, order);
    Some(&(&shift * &bu1_poincare(order)) * &semistable_stratum_poincare_reduced(p, order))
}

/// Contribution of the semistable stratum `A_ss`. Takes no `tau`: it is the
/// same in every window. For `d > 4g - 4` both closed forms are computed and
/// must agree.
pub fn contrib_ia_ss(p: SurfaceParams, order: usize) -> Result<TruncSeries> {
    let general = contrib_ia_ss_general(p, order);
    if let Some(large) = contrib_ia_ss_large_degree(p, order) {
        if large != general {
            return Err(Error::Identity(format!(
                "I_a^(d/2) closed forms disagree for g={}, d={}",
                p.g, p.d
            )));
        }
    }
    Ok(general)
}

fn ia_term(p: SurfaceParams, j: i64, order: usize) -> TruncSeries {
    let (g, d) = (p.g, p.d);
    let e = 2 * p.split_codim(j);
    let jb = jac_bu1(g, order);
    let first = &t_pow(e, order) * &type_i_split_poincare(g, order);
    let second = &(&t_pow(2 * j, order) * &sym_product_poincare(g, j, order)) * &jb;
    let third = &(&t_pow(e, order) * &sym_product_poincare(g, d - j, order)) * &jb;
    &(&first - &second) - &third
}

fn ib_term(p: SurfaceParams, j: i64, order: usize) -> TruncSeries {
    let e = 2 * p.split_codim(j);
    let first = &t_pow(e, order) * &type_i_split_poincare(p.g, order);
    // P(S^n M) = 0 for n < 0, so for j > d only the first term survives
    let second = &(&t_pow(e, order) * &sym_product_poincare(p.g, p.d - j, order)) * &jac_bu1(p.g, order);
    &first - &second
}

fn iiplus_term(p: SurfaceParams, j: i64, order: usize) -> TruncSeries {
    &(&t_pow(2 * j, order) * &sym_product_poincare(p.g, j, order)) * &jac_bu1(p.g, order)
}

/// `j` here is `deg L1 = d - j(delta)`.
fn iiminus_term(p: SurfaceParams, j: i64, order: usize) -> TruncSeries {
    let e = 2 * (p.d - 2 * j + p.g - 1);
    &(&t_pow(e, order) * &sym_product_poincare(p.g, j, order)) * &jac_bu1(p.g, order)
}

/// `I_a^j` for `d/2 < j <= N - 1`.
pub fn contrib_ia(p: SurfaceParams, j: i64, n: i64, order: usize) -> Result<TruncSeries> {
    check_window(p, n)?;
    if 2 * j <= p.d || j > n - 1 {
        return Err(Error::domain(format!("I_a^j needs d/2 < j <= N-1, got j = {j}, N = {n}")));
    }
    Ok(ia_term(p, j, order))
}

/// `I_b^j` for `j >= N`.
pub fn contrib_ib(p: SurfaceParams, j: i64, n: i64, order: usize) -> Result<TruncSeries> {
    check_window(p, n)?;
    if j < n {
        return Err(Error::domain(format!("I_b^j needs j >= N, got j = {j}, N = {n}")));
    }
    Ok(ib_term(p, j, order))
}

/// `II+_j` for `d - N + 1 <= j <= N - 1`.
pub fn contrib_iiplus(p: SurfaceParams, j: i64, n: i64, order: usize) -> Result<TruncSeries> {
    check_window(p, n)?;
    if j < p.d - n + 1 || j > n - 1 {
        return Err(Error::domain(format!("II+_j needs d-N+1 <= j <= N-1, got j = {j}, N = {n}")));
    }
    Ok(iiplus_term(p, j, order))
}

/// `II-_j` for `0 <= j <= d - N`, indexed by `j = d - j(delta)`.
pub fn contrib_iiminus(p: SurfaceParams, j: i64, n: i64, order: usize) -> Result<TruncSeries> {
    check_window(p, n)?;
    if j < 0 || j > p.d - n {
        return Err(Error::domain(format!("II-_j needs 0 <= j <= d-N, got j = {j}, N = {n}")));
    }
    Ok(iiminus_term(p, j, order))
}

/// Summand kinds of the generic total.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    IaSs,
    Ia,
    Ib,
    IIPlus,
    IIMinus,
}

impl TermKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TermKind::IaSs => "Ia_SS",
            TermKind::Ia => "Ia",
            TermKind::Ib => "Ib",
            TermKind::IIPlus => "IIplus",
            TermKind::IIMinus => "IIminus",
        }
    }
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerEntry {
    pub kind: TermKind,
    /// Summation index of the term (`None` for `I_a^{d/2}`); for `II-` this
    /// is `deg L1 = d - j(delta)`.
    pub j: Option<i64>,
    /// `delta` of the stratum at the ledger's representative `tau`.
    pub delta: ExactRational,
    pub series: TruncSeries,
}

/// `P_t(BG)` minus an ordered list of stratum contributions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContributionLedger {
    pub surface: SurfaceParams,
    pub window: i64,
    /// A generic `tau` inside the window (or `N` itself on the wall).
    pub tau: ExactRational,
    pub generic: bool,
    pub bgauge: TruncSeries,
    pub entries: Vec<LedgerEntry>,
    pub total: TruncSeries,
}

impl ContributionLedger {
    pub fn order(&self) -> usize {
        self.total.order()
    }

    /// `P_t(BG) - sum(entries)` from scratch.
    pub fn recompute_total(&self) -> TruncSeries {
        self.entries.iter().fold(self.bgauge.clone(), |acc, e| &acc - &e.series)
    }

    pub fn entry(&self, kind: TermKind, j: Option<i64>) -> Option<&LedgerEntry> {
        self.entries.iter().find(|e| e.kind == kind && e.j == j)
    }
}

/// Representative generic `tau = N - 1/8` of the window `N`.
pub fn window_tau(n: i64) -> ExactRational {
    ExactRational::new(8 * n - 1, 8).expect("nonzero denominator")
}

fn check_order(p: SurfaceParams, order: usize) -> Result<()> {
    if order <= p.top_degree() {
        return Err(Error::InsufficientBuffer { trunc_order: order, max_degree: p.top_degree() });
    }
    Ok(())
}

fn build_ledger(p: SurfaceParams, n: i64, order: usize, generic: bool) -> Result<ContributionLedger> {
    check_window(p, n)?;
    check_order(p, order)?;
    let (g, d) = (p.g, p.d);
    let tau = if generic { window_tau(n) } else { ExactRational::from_int(n) };
    let plus_delta = |j: i64| &(&tau + j) - d;
    let mut entries = vec![LedgerEntry {
        kind: TermKind::IaSs,
        j: None,
        delta: &tau - &ExactRational::half(d),
        series: contrib_ia_ss(p, order)?,
    }];
    for j in (d / 2 + 1)..n {
        entries.push(LedgerEntry { kind: TermKind::Ia, j: Some(j), delta: plus_delta(j), series: ia_term(p, j, order) });
    }
    for j in n..=ab_sum_bound(p, order).max(n) {
        if 2 * p.split_codim(j) > order as i64 {
            break;
        }
        entries.push(LedgerEntry { kind: TermKind::Ib, j: Some(j), delta: plus_delta(j), series: ib_term(p, j, order) });
    }
    // on the wall tau = N the split II- critical set with j = d - N is a vortex solution
    let last_minus = if generic { d - n } else { d - n - 1 };
    for j in 0..=last_minus {
        entries.push(LedgerEntry {
            kind: TermKind::IIMinus,
            j: Some(j),
            delta: &ExactRational::from_int(d - j) - &tau,
            series: iiminus_term(p, j, order),
        });
    }
    for j in (d - n + 1)..n {
        entries.push(LedgerEntry { kind: TermKind::IIPlus, j: Some(j), delta: plus_delta(j), series: iiplus_term(p, j, order) });
    }
    let bgauge = bgauge_poincare(g, order);
    let total = entries.iter().fold(bgauge.clone(), |acc, e| &acc - &e.series);
    Ok(ContributionLedger { surface: p, window: n, tau, generic, bgauge, entries, total })
}

/// `P_t(M_{tau,d})` for `tau` in `(max{d/2, N-1}, N)`:
///
/// `P(BG) - I_a^{d/2} - sum_{floor(d/2+1)}^{N-1} I_a^j - sum_{j>=N} I_b^j
///  - sum_{j=0}^{d-N} II-_j - sum_{j=d-N+1}^{N-1} II+_j`.
///
/// The total must be a polynomial of degree at most `2(d + 2g - 2)`.
pub fn total_generic(p: SurfaceParams, n: i64, order: usize) -> Result<ContributionLedger> {
    let ledger = build_ledger(p, n, order, true)?;
    assert_polynomial(&ledger.total, p.top_degree())?;
    Ok(ledger)
}

/// [`total_generic`] with `t^2` added to the first entry of `kind`. Only for
/// checking that the verification grid notices a wrong contribution.
#[doc(hidden)]
pub fn total_generic_perturbed(p: SurfaceParams, n: i64, order: usize, kind: TermKind) -> Result<ContributionLedger> {
    let mut ledger = build_ledger(p, n, order, true)?;
    if let Some(e) = ledger.entries.iter_mut().find(|e| e.kind == kind) {
        e.series = &e.series + &t_pow(2, order);
    }
    ledger.total = ledger.recompute_total();
    assert_polynomial(&ledger.total, p.top_degree())?;
    Ok(ledger)
}

/// `P_t^G(B^N_ss)` at the wall `tau = N`: the generic sum without `II-_{d-N}`.
/// This is a genuine power series, not a polynomial.
pub fn total_nongeneric(p: SurfaceParams, n: i64, order: usize) -> Result<ContributionLedger> {
    build_ledger(p, n, order, false)
}

/// Change `P_t(M_{tau+1,d}) - P_t(M_{tau,d})` across the wall at `N`:
///
/// `(t^{4N-2d+2g-2} - t^{2d-2N})/(1-t^2) P(S^{d-N} M)`, times `(1+t)^{2g}`
/// unless the determinant is fixed.
pub fn flip_difference(p: SurfaceParams, n: i64, order: usize, fixed_det: bool) -> Result<TruncSeries> {
    if 2 * n <= p.d || n > p.d - 1 {
        return Err(Error::domain(format!("flip needs d/2 < N <= d-1, got N = {n} for d = {}", p.d)));
    }
    let (g, d) = (p.g, p.d);
    let numer = &t_pow(4 * n - 2 * d + 2 * g - 2, order) - &t_pow(2 * d - 2 * n, order);
    let mut out = &(&numer * &bu1_poincare(order)) * &sym_product_poincare(g, d - n, order);
    if !fixed_det {
        out = &out * &jacobian_poincare(g, order);
    }
    Ok(out)
}

/// Poincaré polynomial by coefficient extraction from Macdonald's kernel
/// `K(x) = (1+xt)^{2g}/((1-x)(1-xt^2))`:
///
/// `(1+t)^{2g}/(1-t^2) Coeff_{x^i} [ (t^{2d+2g-2-4i}/(xt^4-1) - t^{2i+2}/(x-t^2)) K(x) ]`
///
/// with `i = d - N` and both rational factors expanded as power series in `x`.
/// Only `x^k`, `k <= i`, matters, so `t^{2i+2}/(x - t^2)` contributes
/// `-t^{2i-2k} x^k` with nonnegative exponents.
pub fn thaddeus_closed_form(p: SurfaceParams, n: i64, order: usize) -> Result<TruncSeries> {
    check_window(p, n)?;
    let (g, d) = (p.g, p.d);
    let i = d - n;
    let lead = 2 * d + 2 * g - 2 - 4 * i;
    if lead < 0 {
        return Err(Error::NegativeExponent(lead));
    }
    let prefactor = BiTruncSeries::from_fn(i as usize, order, |k| {
        let k = k as i64;
        // t^{lead}/(xt^4 - 1) = -sum t^{lead+4k} x^k
        // -t^{2i+2}/(x - t^2) = sum t^{2i-2k} x^k
        &t_pow(2 * i - 2 * k, order) - &t_pow(lead + 4 * k, order)
    });
    let kernel = macdonald_kernel(g, i as usize, order);
    let coeff = prefactor.mul(&kernel).coeff_x(i as usize)?;
    Ok(&coeff * &jac_bu1(g, order))
}

/// `H*_G(X_delta, X_delta1)` for one stratum of the index set, computed from
/// the critical-set data:
///
/// * constant-rank strata (`Ib` with `j > d`, `II+`, `II-`): Thom shift
///   `t^{2 sigma}` of the critical-set series;
/// * `Ib` with `tau < j <= d`: `t^{2 sigma}` times the type-I series minus the
///   relative piece `t^{2 sigma}/(1-t^2) P(S^{d-j} M x J)`;
/// * window `Ia`: the Atiyah–Bott piece minus the two-piece relative normal
///   cohomology (shifts `2j` and `2(2j-d+g-1)`), plus the `II+` component;
/// * `Ia_SS`: `I_a^{d/2}`, plus `II+_{d/2}` when `d` is even.
pub fn relative_stratum_poincare(s: &StratumDescriptor, p: SurfaceParams, order: usize) -> Result<TruncSeries> {
    let (g, d) = (p.g, p.d);
    let jb = jac_bu1(g, order);
    let thom = |sigma: i64| t_pow(2 * sigma, order);
    match s.class {
        StratumClass::Open => Err(Error::domain("the open stratum has no relative contribution")),
        StratumClass::IaSs => {
            let mut out = contrib_ia_ss(p, order)?;
            if d % 2 == 0 {
                out = &out + &iiplus_term(p, d / 2, order);
            }
            Ok(out)
        }
        StratumClass::Ia => {
            let j = s.j_value();
            let sigma_a = p.split_codim(j);
            let ab_piece = &thom(sigma_a) * &type_i_split_poincare(g, order);
            let nu_prime = &(&thom(j) * &sym_product_poincare(g, j, order))
                + &(&thom(sigma_a) * &sym_product_poincare(g, d - j, order));
            let nu_prime = &nu_prime * &jb;
            let b_component = &thom(j) * &type_ii_poincare(g, j, order);
            Ok(&(&ab_piece - &nu_prime) + &b_component)
        }
        StratumClass::Ib => {
            let j = s.j_value();
            let sigma = sigma_of(s, p)?;
            let mut out = &thom(sigma) * &critical_set_poincare(s, p, order)?;
            if j <= d {
                out = &out - &(&(&thom(sigma) * &sym_product_poincare(g, d - j, order)) * &jb);
            }
            Ok(out)
        }
        StratumClass::IIPlus | StratumClass::IIMinus => {
            let sigma = sigma_of(s, p)?;
            Ok(&thom(sigma) * &critical_set_poincare(s, p, order)?)
        }
    }
}

/// Outcome of the invariant checks on a Poincaré polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiChecks {
    /// Nonzero top coefficient in degree `2(d + 2g - 2)`.
    pub degree: bool,
    pub nonnegative: bool,
    /// `b_k = b_{top-k}`.
    pub duality: bool,
    /// Divisible by `(1+t)^{2g}`.
    pub divisibility: bool,
    /// `sum (-1)^k b_k = 0`.
    pub euler: bool,
    pub b0: bool,
    /// `b_1 = 2g`.
    pub b1: bool,
}

impl BettiChecks {
    pub fn named(&self) -> [(&'static str, bool); 7] {
        [
            ("b0", self.b0),
            ("b1", self.b1),
            ("degree", self.degree),
            ("divisibility", self.divisibility),
            ("duality", self.duality),
            ("euler", self.euler),
            ("nonnegative", self.nonnegative),
        ]
    }

    pub fn all_pass(&self) -> bool {
        self.named().iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        self.named().iter().find(|(_, ok)| !ok).map(|(name, _)| *name)
    }
}

/// Betti numbers `b_0..b_{2(d+2g-2)}` of a moduli space with their checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub surface: SurfaceParams,
    pub window: i64,
    pub betti: Vec<BigInt>,
    pub checks: BettiChecks,
}

impl BettiTable {
    pub fn from_total(p: SurfaceParams, n: i64, total: &TruncSeries) -> Result<Self> {
        let top = p.top_degree();
        let betti = assert_polynomial(total, top)?;
        let nonnegative = betti.iter().all(|b| *b >= BigInt::zero());
        let duality = (0..=top).all(|k| betti[k] == betti[top - k]);
        let mut quotient = Some(betti.clone());
        for _ in 0..2 * p.g {
            quotient = quotient.and_then(|q| divide_by_one_plus_t(&q));
        }
        let euler = betti
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (k, b)| if k % 2 == 0 { acc + b } else { acc - b })
            .is_zero();
        let checks = BettiChecks {
            degree: !betti[top].is_zero(),
            nonnegative,
            duality,
            divisibility: quotient.is_some(),
            euler,
            b0: betti[0].is_one(),
            b1: betti.get(1) == Some(&BigInt::from(2 * p.g)),
        };
        Ok(BettiTable { surface: p, window: n, betti, checks })
    }

    /// Convenience: assemble the generic total and tabulate it.
    pub fn compute(p: SurfaceParams, n: i64, order: usize) -> Result<Self> {
        let ledger = total_generic(p, n, order)?;
        Self::from_total(p, n, &ledger.total)
    }

    pub fn poincare_string(&self) -> String {
        TruncSeries::from_bigints(self.betti.clone(), self.betti.len() - 1).to_string()
    }
}
