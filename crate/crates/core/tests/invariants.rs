use mfnls_core::experiments::{preset, resolution_gate, run, white_field};
use mfnls_core::linear_flow::propagate;
use mfnls_core::solver::{classify_global, Dealias, GlobalBranch, Stepper};
use mfnls_core::{DispersionParams, Grid2D};
use proptest::prelude::*;

fn order() -> impl Strategy<Value = f64> {
    prop_oneof![0.2f64..0.95, 1.05f64..2.0]
}

fn params() -> impl Strategy<Value = DispersionParams> {
    (
        order(),
        order(),
        1.5f64..6.0,
        prop_oneof![Just(1.0), Just(-1.0)],
    )
        .prop_map(|(a, b, p, mu)| {
            let (a1, a2) = if a >= b { (a, b) } else { (b, a) };
            DispersionParams::new(a1, a2, p, mu).unwrap()
        })
}

fn grid() -> Grid2D {
    Grid2D::new(32, 32, 6.0, 6.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn free_flow_is_unitary_and_a_group(p in params(), seed in any::<u64>(), t in -2.0f64..2.0, s in -2.0f64..2.0) {
        let u = white_field(&grid(), seed, 0.5, None);
        let ut = propagate(&u, &p, t);
        prop_assert!((ut.spectral_l2() - u.spectral_l2()).abs() < 1e-12);
        let two = propagate(&ut, &p, s);
        let once = propagate(&u, &p, t + s);
        prop_assert!(two.sub(&once).spectral_l2() < 1e-10);
    }

    #[test]
    fn undealiased_step_conserves_mass(p in params(), seed in any::<u64>(), amp in 0.1f64..2.0) {
        let g = grid();
        let mut u = white_field(&g, seed, 0.4, None).scale(amp.into());
        let m0 = u.spectral_l2();
        let stepper = Stepper::new(&g, &p, 1e-2, Dealias::None);
        for _ in 0..5 {
            stepper.step(&mut u).unwrap();
        }
        prop_assert!((u.spectral_l2() / m0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branch_follows_the_mass_critical_exponent(p in params()) {
        let pc = 1.0 + 2.0 * p.alpha1() * p.alpha2() / (p.alpha1() + p.alpha2());
        let expected = if (p.p() - pc).abs() < 1e-9 {
            GlobalBranch::MassCriticalSmallData
        } else if p.p() < pc {
            GlobalBranch::SubcriticalGlobal
        } else {
            GlobalBranch::SupercriticalSmallEnergy
        };
        prop_assert_eq!(classify_global(&p), expected);
    }
}

#[test]
fn cheap_presets_pass_the_resolution_gate() {
    for name in ["gn-2", "embedding", "strichartz"] {
        let spec = preset(name).unwrap();
        let base = run(&spec).unwrap();
        let gate = resolution_gate(&spec, &base).unwrap();
        assert!(gate.passed, "{name}: {gate:?}");
    }
}
