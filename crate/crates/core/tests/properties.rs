use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

use salie_core::bessel::{bessel_bound_check, HalfOrder};
use salie_core::hsums::{h_brute, h_factor_check, h_fast, weil_check};
use salie_core::iwaniec::{endgame_exponent, p_ge_t_condition, p_ge_t_threshold, theorem_exponent_check};
use salie_core::modarith::{gauss_closed, gauss_sum, gcd};
use salie_core::tolerances::{FAST_SLACK, GAUSS_SLACK};
use salie_core::{HSumRequest, IndexData, Sign};

fn index() -> impl Strategy<Value = IndexData> {
    (1i64..=6, 0i64..=30, -10i64..=10)
        .prop_filter("D < 0", |&(m, n, r)| r * r < 4 * m * n)
        .prop_map(|(m, n, r)| IndexData::new(m, n, r).unwrap())
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_agrees_with_brute(ix in index(), c in 1u64..=400, s in sign()) {
        let req = HSumRequest::new(ix, c, s).unwrap();
        let (fast, brute) = (h_fast(&req), h_brute(&req));
        prop_assert!(fast.agrees_with(&brute, FAST_SLACK), "{:?} vs {:?}", fast, brute);
    }

    #[test]
    fn factorization_on_coprime_splits(ix in index(), c1 in 1u64..=40, c2 in 1u64..=40, s in sign()) {
        prop_assume!(c1.gcd(&c2) == 1);
        prop_assert!(h_factor_check(&ix, c1, c2, s).unwrap());
    }

    #[test]
    fn weil_bound_holds(ix in index(), c in 1u64..=600, s in sign()) {
        prop_assert!(weil_check(&HSumRequest::new(ix, c, s).unwrap()));
    }

    #[test]
    fn gauss_closed_form(a in -500i64..500, c in 0u64..400) {
        let c = 2 * c + 1;
        prop_assume!(gcd(a as i128, c as i128) == 1);
        let brute = gauss_sum(a, c).unwrap();
        let closed = gauss_closed(a, c).unwrap();
        prop_assert!((brute.value - closed.value).norm() <= brute.err + GAUSS_SLACK);
    }

    #[test]
    fn bessel_power_bound(half_k in 2i64..=12, e in -4.0f64..6.0) {
        let order = HalfOrder::from_weight(2 * half_k).unwrap();
        prop_assert!(bessel_bound_check(order, 10f64.powf(e)).unwrap());
    }

    #[test]
    fn endgame_case_exponent_is_the_worse_line(p in 0i64..=700) {
        let sigma = ratio(p, 2500);
        let rep = endgame_exponent(&sigma).unwrap();
        let worse = rep.low_exponent.clone().max(rep.high_exponent.clone());
        prop_assert_eq!(&rep.exponent, &worse);
        prop_assert!(rep.exponent <= ratio(0, 1));
        prop_assert!(theorem_exponent_check(&sigma).unwrap().holds);
    }

    // δ(σ) > 0 exactly for σ < 3/5
    #[test]
    fn p_ge_t_threshold_is_sharp(p in 0i64..600) {
        let sigma = ratio(p, 1000);
        prop_assert_eq!(p_ge_t_condition(&sigma), sigma <= p_ge_t_threshold());
    }
}
