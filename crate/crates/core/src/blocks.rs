//! Poincaré series of the spaces that show up in critical sets: Jacobians,
//! symmetric products of the surface, `BU(1)`, the classifying space of the
//! rank-2 gauge group, and the semistable stratum of connections.
//!
//! Everything is rational cohomology.

use crate::error::{Error, Result};
use crate::series::{binomial_power, geometric_factor, BiTruncSeries, TruncSeries};
use crate::strata::{StratumClass, StratumDescriptor};

/// Genus and degree of the rank-2 bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceParams {
    pub g: i64,
    pub d: i64,
}

impl SurfaceParams {
    pub fn new(g: i64, d: i64) -> Result<Self> {
        if g < 2 {
            return Err(Error::domain(format!("genus must be at least 2, got {g}")));
        }
        if d < 1 {
            return Err(Error::domain(format!("degree must be at least 1, got {d}")));
        }
        Ok(SurfaceParams { g, d })
    }

    /// Complex dimension `d + 2g - 2` of the moduli space of pairs.
    pub fn moduli_dim(&self) -> i64 {
        self.d + 2 * self.g - 2
    }

    /// Top degree `2(d + 2g - 2)` of its Poincaré polynomial.
    pub fn top_degree(&self) -> usize {
        (2 * self.moduli_dim()) as usize
    }

    /// Default truncation order: top degree plus an 8-degree buffer.
    pub fn default_order(&self) -> usize {
        self.top_degree() + 8
    }

    /// Complex rank `2j - d + g - 1` of the negative normal bundle at a split
    /// critical point `L1 + L2` with `deg L1 = j`.
    pub fn split_codim(&self, j: i64) -> i64 {
        2 * j - self.d + self.g - 1
    }
}

/// `t^e` as a series; exponents above the order give zero.
pub(crate) fn t_pow(e: i64, order: usize) -> TruncSeries {
    assert!(e >= 0, "negative exponent {e}");
    TruncSeries::monomial(1, e as usize, order)
}

/// `(1+t)^{2g}` for any Jacobian `J_n(M)`.
pub fn jacobian_poincare(g: i64, order: usize) -> TruncSeries {
    binomial_power(1, (2 * g) as u32, 1, order)
}

/// Macdonald's kernel `(1+xt)^{2g} / ((1-x)(1-xt^2))`, expanded to `x^{x_order}`.
pub fn macdonald_kernel(g: i64, x_order: usize, order: usize) -> BiTruncSeries {
    let two_g = 2 * g as usize;
    let mut binom = vec![1u64; two_g + 1];
    for k in 1..=two_g {
        binom[k] = binom[k - 1] * (two_g - k + 1) as u64 / k as u64;
    }
    let numer = BiTruncSeries::from_fn(x_order, order, |k| {
        if k <= two_g {
            TruncSeries::monomial(binom[k], k, order)
        } else {
            TruncSeries::zero(order)
        }
    });
    let inv_one_minus_x = BiTruncSeries::from_fn(x_order, order, |_| TruncSeries::one(order));
    let inv_one_minus_xt2 = BiTruncSeries::from_fn(x_order, order, |k| TruncSeries::monomial(1, 2 * k, order));
    numer.mul(&inv_one_minus_x).mul(&inv_one_minus_xt2)
}

/// `P_t(S^n M)`; zero for `n < 0` (empty space).
pub fn sym_product_poincare(g: i64, n: i64, order: usize) -> TruncSeries {
    if n < 0 {
        return TruncSeries::zero(order);
    }
    let n = n as usize;
    macdonald_kernel(g, n, order).coeff_x(n).expect("kernel expanded to the requested order")
}

/// `1 / (1 - t^2)`.
pub fn bu1_poincare(order: usize) -> TruncSeries {
    geometric_factor(2, 1, order)
}

/// Rank-2 gauge group: `(1+t)^{2g}(1+t^3)^{2g} / ((1-t^2)^2 (1-t^4))`.
pub fn bgauge_poincare(g: i64, order: usize) -> TruncSeries {
    let two_g = (2 * g) as u32;
    let numer = &binomial_power(1, two_g, 1, order) * &binomial_power(1, two_g, 3, order);
    &(&numer * &geometric_factor(2, 2, order)) * &geometric_factor(4, 1, order)
}

/// Largest `j` whose Atiyah–Bott term `t^{2(2j-d+g-1)}` can reach `order`.
pub fn ab_sum_bound(p: SurfaceParams, order: usize) -> i64 {
    // 2(2j - d + g - 1) <= D  <=>  j <= (D/2 + d - g + 1) / 2
    let num = order as i64 / 2 + p.d - p.g + 1;
    num.div_euclid(2) + 1
}

/// `P_t^G(A_ss)`: the gauge-group series minus every unstable Atiyah–Bott
/// stratum `t^{2(2j-d+g-1)} (1+t)^{4g} / (1-t^2)^2`, `j > d/2`.
pub fn semistable_stratum_poincare(p: SurfaceParams, order: usize) -> TruncSeries {
    let split = type_i_split_poincare(p.g, order);
    let mut out = bgauge_poincare(p.g, order);
    for j in (p.d.div_euclid(2) + 1)..=ab_sum_bound(p, order) {
        let e = 2 * p.split_codim(j);
        if e as usize > order {
            break;
        }
        out = &out - &(&t_pow(e, order) * &split);
    }
    out
}

/// `P_t^{Gbar}(A_ss) = (1 - t^2) P_t^G(A_ss)` for the reduced gauge group.
pub fn semistable_stratum_poincare_reduced(p: SurfaceParams, order: usize) -> TruncSeries {
    &semistable_stratum_poincare(p, order) * &binomial_power(-1, 1, 2, order)
}

/// `J x J x BU(1) x BU(1)`: critical sets of type I away from `A_ss`.
pub fn type_i_split_poincare(g: i64, order: usize) -> TruncSeries {
    &binomial_power(1, (4 * g) as u32, 1, order) * &geometric_factor(2, 2, order)
}

/// `S^n M x J x BU(1)`: critical sets of type II.
pub fn type_ii_poincare(g: i64, n: i64, order: usize) -> TruncSeries {
    &(&sym_product_poincare(g, n, order) * &jacobian_poincare(g, order)) * &bu1_poincare(order)
}

/// Equivariant Poincaré series of the critical set attached to a stratum.
///
/// Window strata of class `Ia` carry both an `A_j` and a `II+` component; this
/// returns the type-I (`A_j`) one. Use [`type_ii_poincare`] with `n = j` for
/// the other.
pub fn critical_set_poincare(s: &StratumDescriptor, p: SurfaceParams, order: usize) -> Result<TruncSeries> {
    match s.class {
        StratumClass::Open => Err(Error::domain("the open stratum has no critical set")),
        StratumClass::IaSs => Ok(semistable_stratum_poincare(p, order)),
        StratumClass::Ia | StratumClass::Ib => Ok(type_i_split_poincare(p.g, order)),
        StratumClass::IIPlus => Ok(type_ii_poincare(p.g, s.j_value(), order)),
        StratumClass::IIMinus => Ok(type_ii_poincare(p.g, p.d - s.j_value(), order)),
    }
}
