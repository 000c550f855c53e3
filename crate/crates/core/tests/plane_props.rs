use coherence_core::*;
use proptest::prelude::*;

fn state(seed: u64, d: usize, rank: usize, ginibre: bool) -> DensityMatrix {
    let method = if ginibre {
        RandomMethod::Ginibre
    } else {
        RandomMethod::SpectrumHaar
    };
    random_density(d, rank.clamp(1, d), method, &mut SeedStream::new(seed, 0).rng()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn entropy_dominates_one_minus_lambda_max(s in any::<u64>(), d in 2usize..=8, r in 1usize..=8, g in any::<bool>()) {
        let rho = state(s, d, r, g);
        for cfg in [EntropyConfig::default(), EntropyConfig::nats()] {
            prop_assert!(entropy_lambda_gap(&rho, &cfg).unwrap() >= -1e-9);
        }
    }

    #[test]
    fn refined_uncertainty_holds(s in any::<u64>(), d in 2usize..=6, r in 1usize..=6, g in any::<bool>()) {
        let rho = state(s, d, r, g);
        let mut rng = SeedStream::new(s, 9).rng();
        let bases = [MeasurementBasis::haar(d, &mut rng), MeasurementBasis::haar(d, &mut rng)];
        let rep = refined_eur_report(&rho, &bases, None, &EntropyConfig::default()).unwrap();
        prop_assert!(rep.holds, "lhs {} rhs {}", rep.lhs, rep.refined_rhs);
        prop_assert!(rep.lhs >= rep.mu_rhs.unwrap() - 1e-9);
    }

    #[test]
    fn computational_measurement_is_dephasing(s in any::<u64>(), d in 2usize..=8, r in 1usize..=8) {
        let cfg = EntropyConfig::default();
        let rho = state(s, d, r, true);
        let p = measurement_probs(&rho, &MeasurementBasis::computational(d)).unwrap();
        for (a, b) in p.iter().zip(rho.diagonal_entries()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
        let h = shannon_entropy(&p, &cfg).unwrap();
        prop_assert!((h - von_neumann_entropy(&rho.dephase(), &cfg).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn random_spectra_lie_inside_the_envelope(s in any::<u64>(), d in 3usize..=6) {
        let cfg = EntropyConfig::default();
        let env = PlaneEnvelope::new(d, 512, &cfg).unwrap();
        let lambda = random_simplex_spectrum(d, d, &mut SeedStream::new(s, 4).rng()).unwrap();
        let c = env.locate(plane_point(&lambda, &cfg));
        prop_assert!(c.holds(1e-6), "{c:?}");
    }

    #[test]
    fn family_points_stay_in_range(t in 0.0f64..=1.0, d in 2usize..=8) {
        let cfg = EntropyConfig::default();
        let max_s2 = 1.0 - 1.0 / d as f64;
        let max_svn = (d as f64).log2();
        for f in CurveFamily::all_for(d) {
            let p = plane_point(&family_spectrum(&f, t).unwrap(), &cfg);
            prop_assert!(p.s2 >= -1e-15 && p.s2 <= max_s2 + 1e-12);
            prop_assert!(p.svn >= -1e-15 && p.svn <= max_svn + 1e-12);
        }
    }
}

#[test]
fn eur_curve_is_increasing_and_convex() {
    let cfg = EntropyConfig::default();
    for d in 2..=8 {
        let lo = 1.0 / d as f64;
        let pts: Vec<(f64, f64)> = (0..1000)
            .map(|i| {
                let a = 1.0 - (1.0 - lo) * i as f64 / 999.0;
                eur_curve_point(d, a, &cfg).unwrap()
            })
            .collect();
        for w in pts.windows(2) {
            assert!(w[1].0 > w[0].0, "d={d}");
        }
        let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        for s in slopes.windows(2) {
            assert!(s[1] >= s[0] - 1e-9, "d={d}");
        }
    }
}

#[test]
fn eur_curve_agrees_with_plane_entropy() {
    let cfg = EntropyConfig::default();
    for d in 2..=8 {
        for i in 0..=10 {
            let lo = 1.0 / d as f64;
            let a = (lo + (1.0 - lo) * i as f64 / 10.0).min(1.0);
            let (x, y) = eur_curve_point(d, a, &cfg).unwrap();
            let mut v = vec![(1.0 - a) / (d as f64 - 1.0); d];
            v[0] = a;
            let p = plane_point(&Spectrum::new(v).unwrap(), &cfg);
            assert!((p.svn - x).abs() < 1e-12);
            assert!((y - (1.0 - a)).abs() < 1e-15);
        }
    }
}

#[test]
fn upper_and_qubit_endpoints() {
    let cfg = EntropyConfig::default();
    for d in 2..=8 {
        let up = CurveFamily::new(FamilyKind::UpperDegenerate, d).unwrap();
        let p0 = plane_point(&family_spectrum(&up, 0.0).unwrap(), &cfg);
        let p1 = plane_point(&family_spectrum(&up, 1.0).unwrap(), &cfg);
        assert!((p0.svn - (d as f64).log2()).abs() < 1e-12);
        assert!((p0.s2 - (1.0 - 1.0 / d as f64)).abs() < 1e-12);
        assert!(p1.svn.abs() < 1e-12 && p1.s2.abs() < 1e-12);
        let q = CurveFamily::new(FamilyKind::QubitLower, d).unwrap();
        let p = plane_point(&family_spectrum(&q, 0.0).unwrap(), &cfg);
        assert!((p.s2 - 0.5).abs() < 1e-12 && (p.svn - 1.0).abs() < 1e-12);
    }
}
