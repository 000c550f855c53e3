use coherence_core::*;
use proptest::prelude::*;

fn is_incoherent(rho: &DensityMatrix, tol: f64) -> bool {
    rho.max_off_diagonal() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn io_channels_preserve_incoherence(s in any::<u64>(), d in 2usize..=6, n in 1usize..=6, strict in any::<bool>()) {
        let mut rng = SeedStream::new(s, 0).rng();
        let k = random_io_kraus(d, n, strict, &mut rng).unwrap();
        prop_assert!(k.completeness_error() <= 1e-12);
        let lambda = random_simplex_spectrum(d, d, &mut rng).unwrap();
        let rho = DensityMatrix::diagonal(lambda.values()).unwrap();
        let out = apply_channel(&k, &rho).unwrap();
        prop_assert!(is_incoherent(&out, 1e-10));
        prop_assert!((out.trace() - 1.0).abs() <= 1e-10);
        for o in selective_outcomes(&k, &rho, 0.0).unwrap() {
            prop_assert!(is_incoherent(&o.state, 1e-10));
        }
    }

    #[test]
    fn sio_duals_map_basis_states_to_basis_states(s in any::<u64>(), d in 2usize..=6, n in 1usize..=6) {
        let k = random_io_kraus(d, n, true, &mut SeedStream::new(s, 0).rng()).unwrap();
        for op in k.operators() {
            let dual = op.adjoint();
            for j in 0..d {
                let nonzero = (0..d).filter(|&i| dual[(i, j)].norm() > 1e-14).count();
                prop_assert!(nonzero <= 1);
            }
        }
    }

    #[test]
    fn probabilities_are_normalized(s in any::<u64>(), d in 2usize..=6, n in 1usize..=6) {
        let mut rng = SeedStream::new(s, 0).rng();
        let k = random_io_kraus(d, n, false, &mut rng).unwrap();
        let rho = random_density(d, d, RandomMethod::Ginibre, &mut rng).unwrap();
        let p = outcome_probabilities(&k, &rho).unwrap();
        prop_assert_eq!(p.len(), n);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-10);
        prop_assert!(p.iter().all(|&x| x >= -1e-15));
    }

    #[test]
    fn l1_and_relative_entropy_are_monotone(s in any::<u64>(), d in 2usize..=6, n in 1usize..=6, strict in any::<bool>()) {
        let cfg = EntropyConfig::default();
        let mut rng = SeedStream::new(s, 0).rng();
        let rank = 1 + (s as usize % d);
        let rho = random_density(d, rank, RandomMethod::SpectrumHaar, &mut rng).unwrap();
        let k = random_io_kraus(d, n, strict, &mut rng).unwrap();
        let out = apply_channel(&k, &rho).unwrap();
        prop_assert!(c_l1(&out) <= c_l1(&rho) + 1e-8);
        prop_assert!(c_rel_ent(&out, &cfg).unwrap() <= c_rel_ent(&rho, &cfg).unwrap() + 1e-8);
    }
}

#[test]
fn c2_can_grow_under_an_io_channel() {
    let s = 16468491195942990805u64;
    let d = 4;
    let mut rng = SeedStream::new(s, 0).rng();
    let rank = 1 + (s as usize % d);
    let rho = random_density(d, rank, RandomMethod::SpectrumHaar, &mut rng).unwrap();
    let k = random_io_kraus(d, 2, false, &mut rng).unwrap();
    assert!(k.completeness_error() <= 1e-12);
    let out = apply_channel(&k, &rho).unwrap();
    assert!(c2_measure(&out) > c2_measure(&rho) + 1e-8);
    assert!(c_l1(&out) <= c_l1(&rho) + 1e-8);
}

#[test]
fn walk_invariants_hold() {
    let cfg = EntropyConfig::default();
    for seed in 0..20u64 {
        let mut rng = SeedStream::new(seed, 0).rng();
        let d = 2 + (seed as usize % 5);
        let rho0 = random_density(d, d, RandomMethod::SpectrumHaar, &mut rng).unwrap().dephase();
        let traj = coherence_walk(&rho0, 50, 0.01, &cfg, &mut rng).unwrap();
        let diag0 = rho0.diagonal_entries();
        for s in &traj.states {
            let drift = s
                .diagonal_entries()
                .iter()
                .zip(&diag0)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(drift <= 1e-9);
            validate_density(&s.to_complex_matrix(), 1e-8).unwrap();
        }
    }
}

#[test]
fn axiom_report_is_worker_independent() {
    let mut cfg = AxiomSuiteConfig::new(MeasureId::L1, vec![2, 3, 4], 48, 99);
    cfg.strict = true;
    let run = |w| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .unwrap()
            .install(|| axiom_suite(&cfg).unwrap())
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(a.records, b.records);
}
