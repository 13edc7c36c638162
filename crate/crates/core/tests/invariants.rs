use dicke_overlap::numerics::{symmetric_eigen, QuadratureSpec};
use dicke_overlap::thermal::{overlap_finite_t, thermal_jz, thermal_moments};
use dicke_overlap::zerotemp::{evaluate_point, Cutoffs};
use dicke_overlap::{ModelParams, OverlapFactor, SeparableState, ThermalPoint};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symmetric(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    (&m + m.transpose()) * 0.5
}

#[test]
fn eigen_residual_on_random_matrices() {
    for (n, seed) in [(10, 1), (100, 2), (200, 3), (500, 4)] {
        let m = random_symmetric(n, seed);
        let e = symmetric_eigen(&m).unwrap();
        let scale = m.norm();
        let v = &e.eigenvectors;
        let residual = (&m * v - v * DMatrix::from_diagonal(&e.eigenvalues.clone().into())).norm();
        assert!(residual < 1e-11 * scale * n as f64, "n={n}: residual {residual}");
        let orth = (v.transpose() * v - DMatrix::identity(n, n)).norm();
        assert!(orth < 1e-12 * n as f64, "n={n}: orthogonality {orth}");
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn binomial_weights_normalized(a in 0.0f64..=1.0, n in 1usize..400) {
        let s = SeparableState::new(a, n).unwrap();
        let total: f64 = s.weights().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        prop_assert!((s.jz_per_atom() - (a - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn thermal_overlap_is_a_probability(lambda in 0.0f64..1.5, t in 0.2f64..3.0, a in 0.0f64..=1.0, n in 1usize..120) {
        let p = ModelParams::resonant(lambda, n).unwrap();
        let point = ThermalPoint::from_temperature(p, t).unwrap();
        let d = overlap_finite_t(&point, a, &QuadratureSpec::default(), OverlapFactor::Corrected).unwrap();
        prop_assert!(d > 0.0 && d <= 1.0 + 1e-12, "{}", d);
    }

    #[test]
    fn thermal_moments_are_physical(lambda in 0.0f64..1.5, t in 0.2f64..3.0, n in 2usize..120) {
        let p = ModelParams::resonant(lambda, n).unwrap();
        let point = ThermalPoint::from_temperature(p, t).unwrap();
        let quad = QuadratureSpec::default();
        let m = thermal_moments(&point, &quad).unwrap();
        prop_assert!(m.first[1].abs() < 1e-12);
        let jz = thermal_jz(&point, &quad).unwrap();
        prop_assert!((-0.5..=0.0).contains(&jz));
        prop_assert!((m.first[2] - jz).abs() < 1e-9);
        prop_assert!(m.validate().is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn zero_t_overlap_is_a_probability(lambda in 0.0f64..1.5, n in 10usize..200) {
        prop_assume!((lambda - 0.5).abs() > 1e-6);
        let p = ModelParams::resonant(lambda, n).unwrap();
        let point = evaluate_point(&p, Cutoffs::TEST).unwrap();
        prop_assert!(point.delta > 0.0 && point.delta <= 1.0 + 1e-10);
        prop_assert!(point.purity > 0.0 && point.purity <= 1.0 + 1e-10);
        if let Some(m) = point.moments {
            prop_assert!(m.first[1].abs() < 1e-12);
        }
    }
}
