use num_bigint::BigInt;
use pairpoly::assembly::{relative_stratum_poincare, total_generic};
use pairpoly::blocks::{bgauge_poincare, macdonald_kernel};
use pairpoly::series::{binomial_power, geometric_factor, BiTruncSeries, TruncSeries};
use pairpoly::strata::{
    default_j_max, enumerate_delta, flip_map, is_generic, twist_complement, twist_map, DeltaSign, ModuliParams, StratumClass,
};
use pairpoly::ExactRational;
use proptest::prelude::*;

const ORDER: usize = 16;

fn series() -> impl Strategy<Value = TruncSeries> {
    prop::collection::vec(-50i64..50, 0..=ORDER + 1).prop_map(|c| TruncSeries::from_coeffs(&c, ORDER))
}

/// Generic `tau` in `(d/2, d)` with denominator at most 64.
fn generic_tau(d: i64) -> impl Strategy<Value = ExactRational> {
    (2i64..=64)
        .prop_flat_map(move |q| (q * d / 2 + 1..q * d).prop_map(move |p| ExactRational::new(p, q).unwrap()))
        .prop_filter("generic", move |t| {
            *t > ExactRational::half(d) && is_generic(&ModuliParams::new(2, d, t.clone()).unwrap())
        })
}

proptest! {
    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        prop_assert_eq!(&a * &TruncSeries::one(ORDER), a);
    }

    #[test]
    fn unit_inverses(k in 1usize..5, power in 1u32..4) {
        let unit = {
            let base = binomial_power(-1, 1, k, ORDER);
            (1..power).fold(base.clone(), |acc, _| &acc * &base)
        };
        prop_assert_eq!(unit.inverse().unwrap(), geometric_factor(k, power, ORDER));
    }

    #[test]
    fn extraction_is_linear(a in -5i64..5, b in -5i64..5, g in 2i64..4, n in 0usize..6) {
        let k1 = macdonald_kernel(g, 6, ORDER);
        let shifted = BiTruncSeries::from_fn(6, ORDER, |m| if m == 0 { TruncSeries::zero(ORDER) } else { k1.coeff_x(m - 1).unwrap() });
        let combo = k1.scale_t(&TruncSeries::from_coeffs(&[a], ORDER)).add(&shifted.scale_t(&TruncSeries::from_coeffs(&[b], ORDER)));
        let want = &(&k1.coeff_x(n).unwrap() * &TruncSeries::from_coeffs(&[a], ORDER))
            + &(&shifted.coeff_x(n).unwrap() * &TruncSeries::from_coeffs(&[b], ORDER));
        prop_assert_eq!(combo.coeff_x(n).unwrap(), want);
    }

    #[test]
    fn one_over_one_minus_x_gives_partial_sums(g in 2i64..4, n in 0usize..6) {
        let k = macdonald_kernel(g, 6, ORDER);
        let geo = BiTruncSeries::from_fn(6, ORDER, |_| TruncSeries::one(ORDER));
        let partial: TruncSeries = (0..=n).map(|m| k.coeff_x(m).unwrap()).sum();
        prop_assert_eq!(k.mul(&geo).coeff_x(n).unwrap(), partial);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn strata_structure_d5(t in generic_tau(5)) { check_structure(5, t)?; }

    #[test]
    fn strata_structure_d6(t in generic_tau(6)) { check_structure(6, t)?; }

    #[test]
    fn strata_structure_d7(t in generic_tau(7)) { check_structure(7, t)?; }

    #[test]
    fn twist_is_a_delta_preserving_embedding(t in generic_tau(5), k in 1i64..4) {
        let p = ModuliParams::new(2, 5, t.clone()).unwrap();
        let idx = enumerate_delta(&p, 8).unwrap();
        let image = twist_map(&idx, k).unwrap();
        let full = enumerate_delta(&image.params, image.j_max).unwrap();
        for s in image.iter() {
            prop_assert!(full.strata.contains(s), "{:?} missing", s.label());
        }
        let extra = twist_complement(&idx, k).unwrap();
        prop_assert_eq!(extra.len() as i64, k);
        for s in &extra {
            prop_assert_eq!(s.class, StratumClass::IIMinus);
            prop_assert!(s.j_value() > 5 + k);
        }
    }

    #[test]
    fn flip_inside_a_chamber_is_trivial(t in generic_tau(7), eps in 1i64..1000) {
        let p = ModuliParams::new(2, 7, t.clone()).unwrap();
        // the next critical value above t is at least 1/(4 q) away; stay well below it
        let q = t.denom().clone();
        let step = ExactRational::new(BigInt::from(1), q * BigInt::from(4 * (1000 + eps))).unwrap();
        let to = &t + &step;
        prop_assume!(is_generic(&ModuliParams::new(2, 7, to.clone()).unwrap()));
        let corr = flip_map(&enumerate_delta(&p, 9).unwrap(), to).unwrap();
        if corr.critical_values_crossed.is_empty() {
            prop_assert!(corr.is_bijection);
            prop_assert!(corr.order_preserving);
            prop_assert!(corr.retyped.is_empty());
        }
    }

    #[test]
    fn stratum_route_depends_only_on_the_window(t in generic_tau(6)) {
        let p = ModuliParams::new(2, 6, t.clone()).unwrap();
        let s = p.surface;
        let order = s.default_order();
        let idx = enumerate_delta(&p, default_j_max(&p, order)).unwrap();
        let mut total = bgauge_poincare(2, order);
        for st in idx.iter().skip(1) {
            total = &total - &relative_stratum_poincare(st, s, order).unwrap();
        }
        prop_assert_eq!(total, total_generic(s, p.window(), order).unwrap().total);
    }
}

fn check_structure(d: i64, t: ExactRational) -> Result<(), TestCaseError> {
    let p = ModuliParams::new(2, d, t.clone()).unwrap();
    let idx = enumerate_delta(&p, d + 3).unwrap();
    let zero = ExactRational::from_int(0);
    let d_minus_tau = &ExactRational::from_int(d) - &t;
    let a_ss = &t - &ExactRational::half(d);
    let minus: Vec<_> = idx.iter().filter(|s| s.sign == DeltaSign::Minus).map(|s| s.delta.clone()).collect();
    let plus: Vec<_> = idx.iter().filter(|s| s.sign == DeltaSign::Plus).map(|s| s.delta.clone()).collect();
    for m in &minus {
        prop_assert!(*m > zero && *m <= d_minus_tau, "delta- {} outside (0, d - tau]", m);
        prop_assert!(!plus.contains(m), "delta {} is both + and -", m);
    }
    if d % 2 == 1 {
        let bound = &a_ss - &ExactRational::new(1, 2).unwrap();
        for x in plus.iter().filter(|x| **x < a_ss) {
            prop_assert!(*x <= bound, "gap bound violated by {}", x);
        }
    }
    // sorted and distinct
    for w in idx.strata.windows(2) {
        prop_assert!(w[0].delta < w[1].delta);
    }
    Ok(())
}
