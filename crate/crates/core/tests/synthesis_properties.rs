use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use structlmi::matops::{eig_max_real, solve_lyapunov};
use structlmi::random::{gaussian, network_plant, posdef, with_abscissa};
use structlmi::{
    basis_from_mask, decentralized_mask, dilated_feasibility, synthesize_main, synthesize_prop1,
    verify_gain, verify_lyapunov, Mat, Plant, SolveStatus, SymMat, SynthesisError, SynthesisOptions,
    ZeroPatternMask,
};

// Solver-backed, so keep the cases few and the seed fixed.
fn config() -> ProptestConfig {
    ProptestConfig { cases: 16, rng_seed: RngSeed::Fixed(0x5eed), ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    // Positive scaling of the plant keeps the set of stabilizing gains.
    #[test]
    fn main_is_invariant_under_plant_scaling(seed in any::<u64>(), c in 0.1f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=5);
        let m = rng.random_range(1..=n);
        let (plant, part) = network_plant(&mut rng, n, m, 0.5).unwrap();
        let basis = basis_from_mask(&decentralized_mask(plant.b(), &part).unwrap()).unwrap();
        let scaled = Plant::new(plant.a() * c, plant.b() * c).unwrap();
        let opts = SynthesisOptions::default();
        let (orig, resc) = (synthesize_main(&plant, &basis, &opts), synthesize_main(&scaled, &basis, &opts));
        if let Ok(cert) = &orig {
            // the same gain stabilizes the scaled loop
            let g = verify_gain(&scaled, &cert.k_gain, &basis).unwrap();
            prop_assert!(g.passed());
            prop_assert!(resc.is_ok(), "scaled problem: {}", resc.unwrap_err());
        }
        if let Ok(cert) = &resc {
            prop_assert!(verify_gain(&plant, &cert.k_gain, &basis).unwrap().passed());
        }
    }

    // For fixed K and P, the dilated LMI is solvable iff He(A_cl P) ≺ 0.
    #[test]
    fn dilated_feasibility_matches_lyapunov(seed in any::<u64>(), stable in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=n);
        let shift = rng.random_range(0.1..1.5);
        let a_cl = with_abscissa(&mut rng, n, if stable { -shift } else { shift }).unwrap();
        let b = gaussian(&mut rng, n, m);
        let k = gaussian(&mut rng, m, n);
        let plant = Plant::new(&a_cl - &b * &k, b).unwrap();
        let p = if stable {
            SymMat::new(solve_lyapunov(&a_cl, &Mat::identity(n, n)).unwrap()).unwrap()
        } else {
            posdef(&mut rng, n, 0.5)
        };
        prop_assert_eq!(verify_lyapunov(&plant, &k, &p), stable);
        let status = match dilated_feasibility(&plant, &k, &p, &SynthesisOptions::default()) {
            Ok(r) => r.status,
            Err(SynthesisError::Infeasible(r)) => r.status,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let expected = if stable { SolveStatus::Feasible } else { SolveStatus::Infeasible };
        prop_assert_eq!(status, expected);
    }

    // A block-diagonal Lyapunov certificate is one admissible X in the hull.
    #[test]
    fn main_succeeds_whenever_block_diagonal_baseline_does(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(2..=6);
        let m = rng.random_range(1..=n.min(3));
        let (plant, part) = network_plant(&mut rng, n, m, 0.5).unwrap();
        let basis = basis_from_mask(&decentralized_mask(plant.b(), &part).unwrap()).unwrap();
        let p_mask = ZeroPatternMask::block_diagonal(part.state_dims()).unwrap();
        let opts = SynthesisOptions::default();
        if let Ok(base) = synthesize_prop1(&plant, &basis, &p_mask, &basis, &opts) {
            prop_assert!(eig_max_real(&plant.closed_loop(&base.k_gain).unwrap()).unwrap() < 0.0);
            let main = synthesize_main(&plant, &basis, &opts);
            prop_assert!(main.is_ok(), "{}", main.unwrap_err());
        }
    }
}
