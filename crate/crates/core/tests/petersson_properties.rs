use salie_core::petersson::{geometric_side, series_term, PeterssonJob};
use salie_core::IndexData;

fn side(k: i64, m: i64, n: i64, r: i64, level: u64, c_max: u64) -> salie_core::TruncatedSide {
    let ix = IndexData::new(m, n, r).unwrap();
    geometric_side(&PeterssonJob::new(k, ix, level, c_max).unwrap()).unwrap()
}

#[test]
fn invariant_under_sign_and_coset_shifts() {
    for (k, m, n, r) in [(4, 1, 1, 1), (6, 2, 3, 1), (8, 3, 2, 1), (10, 1, 4, 3), (4, 5, 2, 3)] {
        let base = side(k, m, n, r, 1, 3000);
        let neg = side(k, m, n, -r, 1, 3000);
        let shifted = side(k, m, n + r + m, r + 2 * m, 1, 3000);
        assert!(base.value.agrees_with(&neg.value, 1e-12), "{base:?} vs {neg:?}");
        assert!(base.value.agrees_with(&shifted.value, 1e-12), "{base:?} vs {shifted:?}");
    }
}

#[test]
fn imaginary_part_within_budget() {
    for (k, m, n, r) in [(4, 1, 2, 1), (6, 3, 1, 1), (12, 2, 5, 3), (4, 7, 3, 2)] {
        let s = side(k, m, n, r, 1, 5000);
        assert!(s.is_real_within_bounds(), "{s:?}");
    }
}

#[test]
fn level_two_is_the_even_sub_series() {
    let (k, ix) = (6, IndexData::new(2, 3, 1).unwrap());
    let c_max = 400;
    let lvl2 = side(k, 2, 3, 1, 2, c_max);
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for c in (2..=c_max).step_by(2) {
        acc += series_term(k, &ix, c).unwrap().value;
    }
    let pre = -std::f64::consts::PI / 2.0; // i^6 π/√(2m), m = 2
    let direct = 1.0 + pre * acc.re;
    assert!((lvl2.value.value.re - direct).abs() < 1e-12);
    assert_eq!(lvl2.terms, c_max / 2);
}

#[test]
fn doubling_moves_value_by_less_than_the_tail() {
    for (k, n, r) in [(4, 1, 1), (4, 2, 0), (6, 2, 1)] {
        let mut prev = side(k, 1, n, r, 1, 250);
        for c_max in [500, 1000, 2000, 4000] {
            let cur = side(k, 1, n, r, 1, c_max);
            assert!(cur.tail < prev.tail);
            let moved = (cur.value.value - prev.value.value).norm();
            assert!(
                moved <= prev.tail + cur.tail + cur.value.err + prev.value.err,
                "k={k} c={c_max}"
            );
            prev = cur;
        }
    }
}

#[test]
fn result_is_independent_of_thread_count() {
    let ix = IndexData::new(1, 2, 1).unwrap();
    let job = PeterssonJob::new(4, ix, 1, 9000).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| geometric_side(&job).unwrap())
    };
    let a = run(1);
    let b = run(3);
    assert_eq!(a.value.value.re.to_bits(), b.value.value.re.to_bits());
    assert_eq!(a.value.value.im.to_bits(), b.value.value.im.to_bits());
}
