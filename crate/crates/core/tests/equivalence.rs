//! Cross-route checks: the decoupled recurrence and the spectral
//! reconstruction must reproduce the directly iterated walk.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qwalk::{
    CoinParameter, DecoupledHistory, ExactFields, LatticeScales, WalkState,
};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn spinors() -> Vec<(C64, C64)> {
    vec![
        (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)),
        (C64::new(1.0, 0.0), C64::ZERO),
        (C64::new(0.6, 0.0), C64::new(0.0, -0.8)),
    ]
}

#[test]
fn decoupled_route_matches_coupled_route() {
    for &rho in &[0.0, 0.25, 0.5, 0.75, 1.0] {
        let coin = CoinParameter::new(rho).unwrap();
        for (r0, l0) in spinors() {
            let state = WalkState::new(r0, l0).unwrap();
            let (mut hr, mut hl) = DecoupledHistory::bootstrap(&state, &coin);
            let mut coupled = state.step(&coin);
            let mut worst: f64 = 0.0;
            for _ in 1..200 {
                hr = hr.step(&coin);
                hl = hl.step(&coin);
                coupled = coupled.step(&coin);
                for m in coupled.site_range() {
                    worst = worst
                        .max((hr.amplitude(m) - coupled.r_amp(m)).norm())
                        .max((hl.amplitude(m) - coupled.l_amp(m)).norm());
                }
            }
            assert!(worst <= 1e-12, "rho={rho}, spinor ({r0}, {l0}): {worst}");
        }
    }
}

#[test]
fn spectral_route_matches_coupled_route() {
    let scales = LatticeScales::unit();
    for &rho in &[0.0, 0.25, 0.5, 0.75] {
        let coin = CoinParameter::new(rho).unwrap();
        for (r0, l0) in spinors() {
            let state = WalkState::new(r0, l0).unwrap();
            let fields = ExactFields::new(&state, coin, scales, 2048).unwrap();
            let mut worst: f64 = 0.0;
            for n in 0..=24usize {
                let iterated = state.evolve(&coin, n);
                let (r_row, l_row) = fields.step_amplitudes(n);
                for (i, m) in (-(n as i64)..=n as i64).enumerate() {
                    worst = worst
                        .max((r_row[i] - iterated.r_amp(m)).norm())
                        .max((l_row[i] - iterated.l_amp(m)).norm());
                }
            }
            assert!(worst <= 1e-8, "rho={rho}, spinor ({r0}, {l0}): {worst}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn walk_conserves_norm_and_parity(
        rho in 0.0..=1.0f64,
        re_r in -1.0..1.0f64,
        im_r in -1.0..1.0f64,
        re_l in -1.0..1.0f64,
        im_l in -1.0..1.0f64,
        steps in 1usize..50,
    ) {
        let r0 = C64::new(re_r, im_r);
        let l0 = C64::new(re_l, im_l);
        let norm = (r0.norm_sqr() + l0.norm_sqr()).sqrt();
        prop_assume!(norm > 1e-3);
        let state = WalkState::new(r0 / norm, l0 / norm).unwrap();
        let coin = CoinParameter::new(rho).unwrap();
        let evolved = state.evolve(&coin, steps);

        // unitarity
        prop_assert!((evolved.norm_sq() - 1.0).abs() <= 1e-12);

        // parity: sites with m + n odd never get written
        let n = steps as i64;
        for m in evolved.site_range() {
            if (m + n).rem_euclid(2) == 1 {
                prop_assert_eq!(evolved.r_amp(m), C64::ZERO);
                prop_assert_eq!(evolved.l_amp(m), C64::ZERO);
            }
        }

        // support bound: nothing beyond |m| = n
        prop_assert_eq!(evolved.r_amp(n + 1), C64::ZERO);
        prop_assert_eq!(evolved.l_amp(-n - 1), C64::ZERO);

        // probability split is exact by construction
        let dist = evolved.probability();
        for i in 0..dist.sites.len() {
            prop_assert_eq!(dist.p_total[i], dist.p_right[i] + dist.p_left[i]);
        }
    }

    #[test]
    fn nv_relabeling_round_trips(
        re_r in -1.0..1.0f64,
        im_r in -1.0..1.0f64,
        re_l in -1.0..1.0f64,
        im_l in -1.0..1.0f64,
        steps in 0usize..30,
    ) {
        let r0 = C64::new(re_r, im_r);
        let l0 = C64::new(re_l, im_l);
        let norm = (r0.norm_sqr() + l0.norm_sqr()).sqrt();
        prop_assume!(norm > 1e-3);
        let state = WalkState::new(r0 / norm, l0 / norm)
            .unwrap()
            .evolve(&CoinParameter::hadamard(), steps);
        let back = qwalk::nv::from_nv(&qwalk::nv::to_nv(&state));
        prop_assert_eq!(back, state);
    }
}
