//! The index set `Delta_{tau,d}` of the tau-Harder–Narasimhan stratification
//! of rank-2 pairs: enumeration, codimensions, and the maps between index sets
//! induced by moving `tau` (flips) and by twisting with `O(p)`.
//!
//! Strata are keyed by `(class, j)`, with `j` the degree of the destabilizing
//! line subbundle. `delta` is derived from `j` and `tau` and only used for
//! ordering and display.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::blocks::SurfaceParams;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratumClass {
    Open,
    /// The semistable stratum `A_ss` of connections, `delta = tau - d/2`.
    IaSs,
    /// `d/2 < j < tau`: the `A_j` component together with a `II+` component.
    Ia,
    Ib,
    IIPlus,
    IIMinus,
}

impl StratumClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StratumClass::Open => "OPEN",
            StratumClass::IaSs => "Ia_SS",
            StratumClass::Ia => "Ia",
            StratumClass::Ib => "Ib",
            StratumClass::IIPlus => "IIplus",
            StratumClass::IIMinus => "IIminus",
        }
    }

    /// Tie rule for equal `delta`: II- before II+ before Ia before Ib.
    fn tie_rank(self) -> u8 {
        match self {
            StratumClass::Open => 0,
            StratumClass::IIMinus => 1,
            StratumClass::IIPlus => 2,
            StratumClass::IaSs | StratumClass::Ia => 3,
            StratumClass::Ib => 4,
        }
    }
}

impl fmt::Display for StratumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which defining inequality of tau-stability fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeltaSign {
    /// `delta = tau - mu_-(E, Phi)`, `j = delta + d - tau`.
    Plus,
    /// `delta = mu_+(E) - tau`, `j = delta + tau`.
    Minus,
    /// The open stratum and `A_ss`.
    Special,
}

/// `(g, d, tau)` with `d/2 < tau < d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuliParams {
    pub surface: SurfaceParams,
    pub tau: ExactRational,
}

impl ModuliParams {
    pub fn new(g: i64, d: i64, tau: ExactRational) -> Result<Self> {
        let surface = SurfaceParams::new(g, d)?;
        if tau <= ExactRational::half(d) || tau >= ExactRational::from_int(d) {
            return Err(Error::domain(format!("tau = {tau} must lie in (d/2, d) = ({d}/2, {d})")));
        }
        Ok(ModuliParams { surface, tau })
    }

    pub fn g(&self) -> i64 {
        self.surface.g
    }

    pub fn d(&self) -> i64 {
        self.surface.d
    }

    /// The integer `N` with `tau` in `(max{d/2, N-1}, N]`.
    pub fn window(&self) -> i64 {
        let c = self.tau.ceil();
        c.to_i64().expect("tau fits in i64")
    }
}

/// True iff `tau` avoids the critical set `C_d`: `2 tau` not an integer for
/// `d` even, `4 tau` not an integer for `d` odd.
pub fn is_generic(p: &ModuliParams) -> bool {
    let scale = if p.d() % 2 == 0 { 2 } else { 4 };
    !(&p.tau * scale).is_integer()
}

pub fn require_generic(p: &ModuliParams) -> Result<()> {
    if is_generic(p) {
        Ok(())
    } else {
        let rule = if p.d() % 2 == 0 { "2 tau_c in Z if d even" } else { "4 tau_c in Z if d odd" };
        Err(Error::NonGeneric { tau: p.tau.to_string(), d: p.d(), rule })
    }
}

/// Elements of `C_d` in the half-open interval `(lo, hi]`.
pub fn critical_values_between(d: i64, lo: &ExactRational, hi: &ExactRational) -> Vec<ExactRational> {
    let scale: i64 = if d % 2 == 0 { 2 } else { 4 };
    let start: BigInt = (lo * scale).floor() + 1;
    let end = (hi * scale).floor();
    let mut out = Vec::new();
    let mut k = start;
    while k <= end {
        let c = ExactRational::new(k.clone(), scale).expect("nonzero denominator");
        if c > ExactRational::half(d) && c < ExactRational::from_int(d) {
            out.push(c);
        }
        k += BigInt::from(1);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StratumDescriptor {
    pub class: StratumClass,
    /// Absent for the open stratum and for `A_ss` (whose slope is `d/2`).
    pub j: Option<i64>,
    pub delta: ExactRational,
    pub sign: DeltaSign,
    /// Absent where the negative normal space has no constant dimension.
    pub sigma: Option<i64>,
    pub has_a_component: bool,
    pub has_b_component: bool,
}

impl StratumDescriptor {
    /// The integer slope; panics for `OPEN` and `Ia_SS`.
    pub fn j_value(&self) -> i64 {
        self.j.unwrap_or_else(|| panic!("{} stratum has no integer slope", self.class))
    }

    pub fn label(&self) -> StratumLabel {
        StratumLabel { class: self.class, j: self.j }
    }

    fn order_key(&self, other: &Self) -> Ordering {
        self.delta
            .cmp(&other.delta)
            .then(self.class.tie_rank().cmp(&other.class.tie_rank()))
            .then(self.j.cmp(&other.j))
    }

    /// Key that survives moving `tau`: `(sign, j)`; `A_ss` and the open
    /// stratum are their own keys.
    fn motion_key(&self) -> (u8, Option<i64>) {
        match (self.class, self.sign) {
            (StratumClass::Open, _) => (0, None),
            (StratumClass::IaSs, _) => (1, None),
            (_, DeltaSign::Minus) => (2, self.j),
            _ => (3, self.j),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumLabel {
    pub class: StratumClass,
    pub j: Option<i64>,
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.j {
            Some(j) => write!(f, "{}({j})", self.class),
            None => write!(f, "{}", self.class),
        }
    }
}

/// `Delta_{tau,d}` sorted by `delta`, with the infinite `Ib` family cut at `j_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaIndex {
    pub params: ModuliParams,
    pub j_max: i64,
    pub strata: Vec<StratumDescriptor>,
}

impl DeltaIndex {
    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &StratumDescriptor> {
        self.strata.iter()
    }

    pub fn find(&self, class: StratumClass, j: Option<i64>) -> Option<&StratumDescriptor> {
        self.strata.iter().find(|s| s.class == class && s.j == j)
    }

    fn sort(&mut self) {
        self.strata.sort_by(|a, b| a.order_key(b));
    }
}

/// `j_max` large enough that every `Ib` term of t-degree `<= order` is listed.
pub fn default_j_max(p: &ModuliParams, order: usize) -> i64 {
    p.d() + (order as i64 + 3) / 4 + p.g()
}

fn descriptor(p: &ModuliParams, class: StratumClass, j: Option<i64>) -> StratumDescriptor {
    let (g, d) = (p.g(), p.d());
    let tau = &p.tau;
    let (delta, sign) = match class {
        StratumClass::Open => (ExactRational::from_int(0), DeltaSign::Special),
        StratumClass::IaSs => (tau - &ExactRational::half(d), DeltaSign::Special),
        StratumClass::IIMinus => (&ExactRational::from_int(j.unwrap()) - tau, DeltaSign::Minus),
        _ => (&(tau + j.unwrap()) - d, DeltaSign::Plus),
    };
    let sigma = match class {
        StratumClass::Ib | StratumClass::IIMinus => Some(2 * j.unwrap() - d + g - 1),
        StratumClass::IIPlus => j,
        _ => None,
    };
    let (has_a_component, has_b_component) = match class {
        StratumClass::Open => (false, false),
        // for d even the strictly semistable II+ bundles share the label d/2
        StratumClass::IaSs => (true, d % 2 == 0),
        StratumClass::Ia => (true, true),
        _ => (false, true),
    };
    StratumDescriptor { class, j, delta, sign, sigma, has_a_component, has_b_component }
}

/// Lists `Delta_{tau,d}` for generic `tau`:
///
/// * `OPEN` (`delta = 0`) and `Ia_SS` (`delta = tau - d/2`);
/// * `Ia(j)` for `d/2 < j < tau`, merged with the `II+` component at the same delta;
/// * `Ib(j)` for `tau < j <= j_max`;
/// * `IIplus(j)` for `d - tau < j < d/2`;
/// * `IIminus(j)` for `tau < j <= d`, where `j = deg L2`.
pub fn enumerate_delta(p: &ModuliParams, j_max: i64) -> Result<DeltaIndex> {
    require_generic(p)?;
    let d = p.d();
    if j_max < d {
        return Err(Error::domain(format!("j_max = {j_max} must be at least d = {d}")));
    }
    let tau_floor = p.tau.floor().to_i64().expect("tau fits in i64");
    // tau is not an integer, so j < tau <=> j <= floor(tau)
    let mut strata = vec![descriptor(p, StratumClass::Open, None), descriptor(p, StratumClass::IaSs, None)];
    let low = d - tau_floor; // smallest j with j > d - tau
    for j in low..=tau_floor {
        if 2 * j < d {
            strata.push(descriptor(p, StratumClass::IIPlus, Some(j)));
        } else if 2 * j > d {
            strata.push(descriptor(p, StratumClass::Ia, Some(j)));
        }
    }
    for j in tau_floor + 1..=j_max {
        strata.push(descriptor(p, StratumClass::Ib, Some(j)));
    }
    for j in tau_floor + 1..=d {
        strata.push(descriptor(p, StratumClass::IIMinus, Some(j)));
    }
    let mut index = DeltaIndex { params: p.clone(), j_max, strata };
    index.sort();
    Ok(index)
}

/// Complex codimension of a stratum with constant-rank negative normal bundle.
pub fn sigma_of(s: &StratumDescriptor, p: SurfaceParams) -> Result<i64> {
    match s.class {
        StratumClass::Ib | StratumClass::IIMinus => Ok(p.split_codim(s.j_value())),
        StratumClass::IIPlus => Ok(s.j_value()),
        other => Err(Error::domain(format!("{other} strata have no constant-rank normal bundle"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipPair {
    pub source: StratumLabel,
    pub source_delta: ExactRational,
    /// `max{delta +- (tau2 - tau1), 0}`.
    pub mapped_delta: ExactRational,
    /// `None` when the stratum is sent to `delta = 0`.
    pub target: Option<StratumLabel>,
}

/// The correspondence `Delta_{tau1,d} -> Delta_{tau2,d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipCorrespondence {
    pub image: DeltaIndex,
    pub pairs: Vec<FlipPair>,
    /// Source strata sent to zero.
    pub annihilated: Vec<StratumLabel>,
    /// Target strata with no preimage.
    pub created: Vec<StratumLabel>,
    /// Matched strata whose class changed.
    pub retyped: Vec<(StratumLabel, StratumLabel)>,
    pub critical_values_crossed: Vec<ExactRational>,
    pub is_bijection: bool,
    pub order_preserving: bool,
}

/// Moves `tau` up to `to_tau`: `Delta+` elements slide right, `Delta-` elements
/// slide left and die when they reach zero.
pub fn flip_map(from: &DeltaIndex, to_tau: ExactRational) -> Result<FlipCorrespondence> {
    let p1 = &from.params;
    require_generic(p1)?;
    if to_tau < p1.tau {
        return Err(Error::domain(format!("flip target tau = {to_tau} is below the source tau = {}", p1.tau)));
    }
    let p2 = ModuliParams::new(p1.g(), p1.d(), to_tau)?;
    let image = enumerate_delta(&p2, from.j_max)?;
    let shift = &p2.tau - &p1.tau;
    let zero = ExactRational::from_int(0);

    let mut pairs = Vec::with_capacity(from.len());
    let mut annihilated = Vec::new();
    let mut retyped = Vec::new();
    let mut hit = vec![false; image.len()];
    let mut target_positions = Vec::new();
    for s in from.iter() {
        let moved = match s.sign {
            DeltaSign::Minus => &s.delta - &shift,
            _ if s.class == StratumClass::Open => zero.clone(),
            _ => &s.delta + &shift,
        };
        let mapped_delta = if moved < zero { zero.clone() } else { moved };
        let target_pos = if s.class != StratumClass::Open && mapped_delta == zero {
            None
        } else {
            image.strata.iter().position(|t| t.motion_key() == s.motion_key())
        };
        let target = target_pos.map(|i| {
            hit[i] = true;
            target_positions.push(i);
            let t = &image.strata[i];
            debug_assert_eq!(t.delta, mapped_delta);
            if t.class != s.class {
                retyped.push((s.label(), t.label()));
            }
            t.label()
        });
        if target.is_none() {
            annihilated.push(s.label());
        }
        pairs.push(FlipPair { source: s.label(), source_delta: s.delta.clone(), mapped_delta, target });
    }
    let created: Vec<StratumLabel> =
        image.strata.iter().zip(&hit).filter(|(_, &h)| !h).map(|(t, _)| t.label()).collect();
    let is_bijection = annihilated.is_empty() && created.is_empty();
    let order_preserving = target_positions.windows(2).all(|w| w[0] < w[1]);
    let critical_values_crossed = critical_values_between(p1.d(), &p1.tau, &p2.tau);
    Ok(FlipCorrespondence {
        image,
        pairs,
        annihilated,
        created,
        retyped,
        critical_values_crossed,
        is_bijection,
        order_preserving,
    })
}

/// Relabels `Delta_{tau,d}` as strata of `(d + 2k, tau + k)` via `E -> E(kp)`:
/// `(class, j) -> (class, j + k)` with `delta` unchanged.
///
/// The result is the image of the embedding of pair spaces; the target index
/// additionally contains `k` `II-` strata whose quotient line bundle has
/// degree below `k` (see [`twist_complement`]).
pub fn twist_map(from: &DeltaIndex, k: i64) -> Result<DeltaIndex> {
    if k < 1 {
        return Err(Error::domain("twist count must be positive"));
    }
    let p = &from.params;
    require_generic(p)?;
    let tp = ModuliParams::new(p.g(), p.d() + 2 * k, &p.tau + k)?;
    let strata = from
        .iter()
        .map(|s| {
            let mut t = descriptor(&tp, s.class, s.j.map(|j| j + k));
            debug_assert_eq!(t.delta, s.delta);
            t.delta = s.delta.clone();
            t
        })
        .collect();
    let mut index = DeltaIndex { params: tp, j_max: from.j_max + k, strata };
    index.sort();
    Ok(index)
}

/// Strata of the twisted index `(d + 2k, tau + k)` outside the image of
/// [`twist_map`]: `IIminus(j)` with `d + k < j <= d + 2k`.
pub fn twist_complement(from: &DeltaIndex, k: i64) -> Result<Vec<StratumDescriptor>> {
    let image = twist_map(from, k)?;
    let full = enumerate_delta(&image.params, image.j_max.max(image.params.d()))?;
    // Ib strata past the image's j_max are a truncation artifact, not part of the complement
    Ok(full
        .strata
        .into_iter()
        .filter(|s| !(s.class == StratumClass::Ib && s.j_value() > image.j_max))
        .filter(|s| !image.strata.contains(s))
        .collect())
}
