//! Randomized invariants.

use proptest::prelude::*;

use qcmi::bounds::{fidelity_lower_bound, thm1_bound, thm2_gap_bound, KrausChannel};
use qcmi::entropy::{cmi, fidelity};
use qcmi::harness::Corpus;
use qcmi::matfun::{eig_hermitian, mat_func, ComplexMatrix, SpectralFn};
use qcmi::recovery::{classify, petz_dual, recovery_M, recovery_Mprime, Label};
use qcmi::states::io::{state_from_json, state_to_json};
use qcmi::states::random::{random_density, random_hermitian, random_joint, seed_stream};
use qcmi::states::{classical_state, ClassicalJoint, Dims, Subsystems, TripartiteState};

fn small_dims() -> impl Strategy<Value = Dims> {
    (1usize..=3, 1usize..=3, 1usize..=3)
        .prop_filter("at most 18 levels", |(a, b, c)| a * b * c <= 18)
        .prop_map(|(a, b, c)| Dims::new(a, b, c).unwrap())
}

fn corpus() -> impl Strategy<Value = Corpus> {
    prop::sample::select(Corpus::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn eigendecomposition_residuals(seed in any::<u64>(), d in 1usize..=8, scale in 0.01f64..100.0) {
        let m = random_hermitian(d, &mut seed_stream(seed, 0)).scale(scale);
        let e = eig_hermitian(&m).unwrap();
        let recon = (&e.reconstruct() - &m).hs_norm();
        let q = &e.eigenvectors;
        let unit = (&(&q.adjoint() * q) - &ComplexMatrix::identity(d)).hs_norm();
        prop_assert!(recon <= 1e-10 * m.hs_norm().max(1.0), "{}", recon);
        prop_assert!(unit <= 1e-10, "{}", unit);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_chain_on_every_corpus(seed in any::<u64>(), dims in small_dims(), c in corpus()) {
        let s = c.sample(dims, seed, 0).unwrap();
        let r = thm1_bound(&s).unwrap();
        prop_assert!(r.cmi >= -1e-9);
        prop_assert!(r.sigma_star_trace <= 1.0 + 1e-9);
        prop_assert!(r.slack_thm1 >= -1e-8 && r.slack_corollary >= -1e-8);
        prop_assert!(r.thm1_bound >= r.corollary_bound - 1e-8);
        if let Some(lo) = r.log_overlap_bound.finite() {
            prop_assert!(r.cmi >= lo - 1e-8 && lo >= r.thm1_bound - 1e-8);
        }
    }

    #[test]
    fn recovery_maps_are_trace_preserving(seed in any::<u64>(), dims in small_dims(), c in corpus()) {
        let s = c.sample(dims, seed, 0).unwrap();
        for rec in [recovery_M(&s).unwrap(), recovery_Mprime(&s).unwrap()] {
            prop_assert!((rec.trace_re() - 1.0).abs() <= 1e-9);
            let e = eig_hermitian(&rec).unwrap();
            prop_assert!(e.min_eigenvalue() >= -1e-10);
        }
    }

    #[test]
    fn classification_matches_its_numbers(seed in any::<u64>(), dims in small_dims(), c in corpus()) {
        let s = c.sample(dims, seed, 0).unwrap();
        let l = classify(&s, 1e-8).unwrap();
        let expected = if l.commutator_norm > l.tol {
            Label::D3
        } else if l.reconstruction_gap <= l.tol {
            Label::D1
        } else {
            Label::D2
        };
        prop_assert_eq!(l.label, expected);
        if c == Corpus::Markov {
            prop_assert_eq!(l.label, Label::D1);
        }
    }

    #[test]
    fn nested_partial_traces_agree(seed in any::<u64>(), dims in small_dims()) {
        let s = Corpus::HsRandom.sample(dims, seed, 0).unwrap();
        let ab = s.partial_trace(Subsystems::AB).unwrap();
        let via_ab = TripartiteState::new(ab, Dims::new(dims.a, dims.b, 1).unwrap()).unwrap();
        let b1 = via_ab.partial_trace(Subsystems::B).unwrap();
        let b2 = s.partial_trace(Subsystems::B).unwrap();
        prop_assert!(b1.matrix().max_abs_diff(b2.matrix()) < 1e-14);
    }

    #[test]
    fn classical_states_with_zeros(seed in any::<u64>(), mask in prop::collection::vec(any::<bool>(), 8)) {
        let mut rng = seed_stream(seed, 0);
        let dims = Dims::new(2, 2, 2).unwrap();
        let base = random_joint(dims, &mut rng);
        let mut p: Vec<f64> = base.probabilities().iter().zip(&mask).map(|(x, keep)| if *keep { *x } else { 0.0 }).collect();
        let total: f64 = p.iter().sum();
        prop_assume!(total > 1e-3);
        p.iter_mut().for_each(|x| *x /= total);
        let residue = 1.0 - p.iter().sum::<f64>();
        let imax = (0..8).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
        p[imax] += residue;
        let s = classical_state(&ClassicalJoint::new(dims, p).unwrap()).unwrap();
        let r = thm1_bound(&s).unwrap();
        prop_assert!(r.cmi >= -1e-9);
        prop_assert!(r.sigma_star_trace <= 1.0 + 1e-9);
        prop_assert!(r.slack_thm1 >= -1e-8 && r.slack_corollary >= -1e-8);
    }

    #[test]
    fn state_files_round_trip(seed in any::<u64>(), dims in small_dims()) {
        let s = Corpus::HsRandom.sample(dims, seed, 0).unwrap();
        let back = state_from_json(&state_to_json(&s)).unwrap();
        prop_assert_eq!(back.dims(), dims);
        prop_assert!(back.rho().matrix().max_abs_diff(s.rho().matrix()) <= 1e-16);
        prop_assert!((cmi(&back).cmi - cmi(&s).cmi).abs() < 1e-12);
    }

    #[test]
    fn dims_display_parses_back(dims in small_dims()) {
        prop_assert_eq!(dims.to_string().parse::<Dims>().unwrap(), dims);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn spectral_functions_invert(seed in any::<u64>(), d in 1usize..=6) {
        let rho = random_density(d, &mut seed_stream(seed, 0));
        let back = mat_func(&rho.log(), SpectralFn::Exp).unwrap();
        prop_assert!(back.max_abs_diff(rho.matrix()) < 1e-10);
        let sq = rho.sqrt();
        prop_assert!((&sq * &sq).max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn channels_and_petz_maps(seed in any::<u64>(), d in 2usize..=4, k in 1usize..=4) {
        let mut rng = seed_stream(seed, 0);
        let phi = KrausChannel::random(d, d, k, &mut rng).unwrap();
        prop_assert!(phi.completeness().max_abs_diff(&ComplexMatrix::identity(d)) < 1e-9);
        let sigma = random_density(d, &mut rng);
        let rho = random_density(d, &mut rng);
        let petz = petz_dual(&phi, &sigma).unwrap();
        let composite = |x: &ComplexMatrix| petz.apply(&phi.apply(x).unwrap()).unwrap();
        prop_assert!((composite(rho.matrix()).trace_re() - 1.0).abs() < 1e-9);
        prop_assert!(composite(sigma.matrix()).max_abs_diff(sigma.matrix()) < 1e-9);
        let (lhs, rhs) = thm2_gap_bound(&rho, &sigma, &phi).unwrap();
        prop_assert!(lhs >= rhs - 1e-8 && lhs >= -1e-9);
    }

    #[test]
    fn fidelity_properties(seed in any::<u64>(), d in 2usize..=4) {
        let mut rng = seed_stream(seed, 0);
        let (rho, sigma) = (random_density(d, &mut rng), random_density(d, &mut rng));
        let f = fidelity(&rho, &sigma).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - fidelity(&sigma, &rho).unwrap()).abs() < 1e-10);
        prop_assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        let (f2, bound) = fidelity_lower_bound(&rho, &sigma).unwrap();
        prop_assert!(f2 >= bound - 1e-9);
    }
}
