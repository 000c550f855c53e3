use coherence_core::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn state(seed: u64, d: usize, rank: usize, ginibre: bool) -> DensityMatrix {
    let method = if ginibre {
        RandomMethod::Ginibre
    } else {
        RandomMethod::SpectrumHaar
    };
    random_density(d, rank.clamp(1, d), method, &mut SeedStream::new(seed, 0).rng()).unwrap()
}

fn arb_state() -> impl Strategy<Value = DensityMatrix> {
    (any::<u64>(), 2usize..=8, 1usize..=8, any::<bool>()).prop_map(|(s, d, r, g)| state(s, d, r, g))
}

fn arb_full_rank() -> impl Strategy<Value = DensityMatrix> {
    (any::<u64>(), 2usize..=6, any::<bool>()).prop_map(|(s, d, g)| state(s, d, d, g))
}

/// Matrix logarithm (base 2) through nalgebra's own Hermitian eigensolver.
fn log2_matrix(m: &CMatrix) -> CMatrix {
    let e = m.clone().symmetric_eigen();
    let d = m.nrows();
    let logs = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            Complex64::new(e.eigenvalues[i].log2(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    &e.eigenvectors * logs * e.eigenvectors.adjoint()
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b).trace().re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn measures_are_nonnegative(rho in arb_state()) {
        let cfg = EntropyConfig::default();
        prop_assert!(c_rel_ent(&rho, &cfg).unwrap() >= -1e-9);
        prop_assert!(c_l1(&rho) >= -1e-9);
        prop_assert!(c2_measure(&rho) >= -1e-9);
    }

    #[test]
    fn measures_vanish_exactly_on_incoherent_states(rho in arb_state()) {
        let cfg = EntropyConfig::default();
        let inc = rho.dephase();
        prop_assert!(c_rel_ent(&inc, &cfg).unwrap() <= 1e-8);
        prop_assert!(c_l1(&inc) <= 1e-8);
        prop_assert!(c2_measure(&inc) <= 1e-8);
        if rho.max_off_diagonal() > 1e-9 {
            prop_assert!(c_l1(&rho) > 1e-8);
            prop_assert!(c2_measure(&rho) > 0.0);
        }
    }

    #[test]
    fn diagonal_trace_identity(rho in arb_full_rank()) {
        let cfg = EntropyConfig::default();
        let t = cross_terms(&rho, &cfg).unwrap();
        let s = von_neumann_entropy(&rho.dephase(), &cfg).unwrap();
        prop_assert!((t.b - s).abs() <= 1e-9);
    }

    #[test]
    fn cross_terms_match_matrix_log_oracle(rho in arb_full_rank()) {
        let cfg = EntropyConfig::default();
        let t = cross_terms(&rho, &cfg).unwrap();
        let delta = rho.dephase();
        let a = -trace_product(delta.matrix(), &log2_matrix(rho.matrix()));
        let b = -trace_product(rho.matrix(), &log2_matrix(delta.matrix()));
        prop_assert!((t.a - a).abs() <= 1e-8, "A {} vs {}", t.a, a);
        prop_assert!((t.b - b).abs() <= 1e-8, "B {} vs {}", t.b, b);
        prop_assert!(c_cross(&rho, &cfg).unwrap() >= -1e-9);
    }

    #[test]
    fn relative_entropy_matches_matrix_log_oracle(rho in arb_full_rank()) {
        let cfg = EntropyConfig::default();
        let delta = rho.dephase();
        let oracle = trace_product(rho.matrix(), &log2_matrix(rho.matrix()))
            - trace_product(rho.matrix(), &log2_matrix(delta.matrix()));
        prop_assert!((c_rel_ent(&rho, &cfg).unwrap() - oracle).abs() <= 1e-8);
    }

    #[test]
    fn partial_measures_reduce_at_full_k(rho in arb_full_rank()) {
        let cfg = EntropyConfig::default();
        let d = rho.dim();
        prop_assert!((c_rel_partial(&rho, d, &cfg).unwrap() - c_rel_ent(&rho, &cfg).unwrap()).abs() <= 1e-12);
        prop_assert!((c_cross_partial(&rho, d, &cfg).unwrap() - c_cross(&rho, &cfg).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn partial_cross_vanishes_on_diagonal_states(rho in arb_full_rank(), k in 1usize..=6) {
        let cfg = EntropyConfig::default();
        let inc = rho.dephase();
        let k = k.min(inc.dim());
        prop_assert!(c_cross_partial(&inc, k, &cfg).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn c2_is_purity_gap(rho in arb_state()) {
        let gap = rho.purity() - rho.dephase().purity();
        prop_assert!((c2_measure(&rho) - gap).abs() <= 1e-12);
    }

    #[test]
    fn nats_scale_bits(rho in arb_full_rank()) {
        let bits = c_rel_ent(&rho, &EntropyConfig::default()).unwrap();
        let nats = c_rel_ent(&rho, &EntropyConfig::nats()).unwrap();
        prop_assert!((nats - bits * std::f64::consts::LN_2).abs() <= 1e-10);
    }
}
