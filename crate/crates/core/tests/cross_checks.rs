use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use salie_core::hsums::{h_brute, h_fast, h_fast_with, h_reduced, FastConfig};
use salie_core::iwaniec::{weighted_S, weighted_S_levelwise};
use salie_core::{HSumRequest, IndexData, Sign};

fn random_index(rng: &mut ChaCha8Rng) -> IndexData {
    loop {
        let m = rng.gen_range(1..=6);
        let n = rng.gen_range(1..=12);
        let r = rng.gen_range(-8..=8);
        if let Ok(ix) = IndexData::new(m, n, r) {
            return ix;
        }
    }
}

#[test]
fn fast_agrees_with_brute_on_random_moduli() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a11e);
    let mut cs: Vec<u64> = (0..40).map(|_| rng.gen_range(1..=3000)).collect();
    cs.extend((0..3).map(|_| rng.gen_range(3001..=10_000)));
    // moduli dominated by 2- and 3-power parts
    cs.extend([1024, 2048 * 3, 729 * 8, 4096]);
    for c in cs {
        let ix = random_index(&mut rng);
        for sign in Sign::BOTH {
            let req = HSumRequest::new(ix, c, sign).unwrap();
            let brute = h_brute(&req);
            let fast = h_fast(&req);
            assert!(fast.agrees_with(&brute, 1e-9), "{req:?}: {fast:?} vs {brute:?}");
            let all_reduced = h_fast_with(&req, &FastConfig { brute_t_max: 0 });
            assert!(all_reduced.agrees_with(&brute, 1e-9), "{req:?}");
        }
    }
}

#[test]
fn reduced_agrees_with_brute_on_d_minus_three_powers() {
    let ix = IndexData::new(1, 1, 1).unwrap();
    for c in [
        2u64, 4, 8, 16, 32, 64, 128, 256, 512, 3, 9, 27, 81, 243, 6, 12, 48, 96, 144, 432,
    ] {
        for sign in Sign::BOTH {
            let req = HSumRequest::new(ix, c, sign).unwrap();
            assert!(h_reduced(&req).agrees_with(&h_brute(&req), 1e-9), "c = {c}");
        }
    }
}

#[test]
fn weighted_sum_equals_levelwise_sum() {
    let cases = [
        ((1, 1, 1), 5, 3000),
        ((2, 7, 3), 11, 5000),
        ((3, 10, 5), 23, 4000),
        ((1, 40, 7), 50, 5000),
        ((5, 9, 4), 2, 1000),
    ];
    for ((m, n, r), p, c_max) in cases {
        let ix = IndexData::new(m, n, r).unwrap();
        assert!(ix.abs_d() <= 200);
        for k in [4, 8] {
            let direct = weighted_S(k, &ix, p, c_max).unwrap();
            let levelwise = weighted_S_levelwise(k, &ix, p, c_max).unwrap();
            assert!(
                direct.value.agrees_with(&levelwise, 1e-13),
                "{ix:?} P={p}: {direct:?} vs {levelwise:?}"
            );
        }
    }
}
