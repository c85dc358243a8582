use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use realign::bipartite::{
    self, kron_decompose, partial_transpose_matrix, realign_matrix, swap_operator, swap_subsystems,
    BipartiteState, Subsystem,
};
use realign::criteria::{self, realignment_norm};
use realign::linalg::{hermitian_eigen, singular_values, trace_norm, ComplexMatrix, C64};
use realign::states::{self, StateRng};

const DIMS: [(usize, usize); 5] = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)];

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut StateRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

fn random_state(dims: usize, seed: u64) -> (BipartiteState, StateRng) {
    let (m, n) = DIMS[dims];
    let mut rng = states::rng_from_seed(seed);
    let rank = rng.gen_range(1..=m * n);
    (
        states::random_mixed_with(m, n, rank, &mut rng).unwrap(),
        rng,
    )
}

/// Entry-by-entry reading of the definition, independent of the block code.
fn realign_oracle(z: &ComplexMatrix, m: usize, n: usize) -> ComplexMatrix {
    let mut r = ComplexMatrix::zeros(m * m, n * n);
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    // row j*m+i holds vec of block (i, j); vec index l*n+k is entry (k, l)
                    r[(j * m + i, l * n + k)] = z[(i * n + k, j * n + l)];
                }
            }
        }
    }
    r
}

fn schmidt_norm(psi: &[C64], m: usize, n: usize) -> f64 {
    let coeffs = ComplexMatrix::from_fn(m, n, |i, k| psi[i * n + k]);
    let gram = if m <= n {
        &coeffs * &coeffs.adjoint()
    } else {
        &coeffs.adjoint() * &coeffs
    };
    let s: f64 = hermitian_eigen(&gram)
        .unwrap()
        .values
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    s * s
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn realignment_matches_oracle(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (m, n) = DIMS[dims];
        let mut rng = states::rng_from_seed(seed);
        let z = gaussian_matrix(m * n, m * n, &mut rng);
        prop_assert_eq!(realign_matrix(&z, m, n).unwrap(), realign_oracle(&z, m, n));
    }

    #[test]
    fn realignment_permutes_entries(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (m, n) = DIMS[dims];
        let z = gaussian_matrix(m * n, m * n, &mut states::rng_from_seed(seed));
        let r = realign_matrix(&z, m, n).unwrap();
        let key = |c: &C64| (c.re.to_bits(), c.im.to_bits());
        let mut a: Vec<_> = z.as_slice().iter().map(key).collect();
        let mut b: Vec<_> = r.as_slice().iter().map(key).collect();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        prop_assert!((z.frobenius_norm() - r.frobenius_norm()).abs() < 1e-12 * z.frobenius_norm());
    }

    #[test]
    fn vec_identity(seed in any::<u64>(), p in 1usize..5, q in 1usize..5, r in 1usize..5) {
        let mut rng = states::rng_from_seed(seed);
        let a = gaussian_matrix(p, q, &mut rng);
        let x = gaussian_matrix(q, r, &mut rng);
        let b = gaussian_matrix(r, p, &mut rng);
        let lhs = (&(&a * &x) * &b).vec();
        let rhs = &b.transpose().kron(&a) * &x.vec();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn trace_norm_unitarily_invariant(seed in any::<u64>(), d in 1usize..7) {
        let mut rng = states::rng_from_seed(seed);
        let a = gaussian_matrix(d, d + 1, &mut rng);
        let u = states::random_unitary(d, &mut rng);
        let v = states::random_unitary(d + 1, &mut rng);
        let t = trace_norm(&a).unwrap();
        prop_assert!((trace_norm(&(&(&u * &a) * &v)).unwrap() - t).abs() < 1e-10 * t.max(1.0));
    }

    #[test]
    fn trace_norm_triangle(seed in any::<u64>(), r in 1usize..6, c in 1usize..6) {
        let mut rng = states::rng_from_seed(seed);
        let a = gaussian_matrix(r, c, &mut rng);
        let b = gaussian_matrix(r, c, &mut rng);
        let lhs = trace_norm(&(&a + &b)).unwrap();
        prop_assert!(lhs <= trace_norm(&a).unwrap() + trace_norm(&b).unwrap() + 1e-10);
    }

    #[test]
    fn singular_values_match_gram_eigenvalues(seed in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let a = gaussian_matrix(r, c, &mut states::rng_from_seed(seed));
        let sv = singular_values(&a).unwrap();
        let gram = if r <= c { &a * &a.adjoint() } else { &a.adjoint() * &a };
        let ev = hermitian_eigen(&gram).unwrap().values;
        prop_assert_eq!(sv.len(), ev.len());
        for (s, l) in sv.iter().zip(&ev) {
            prop_assert!((s * s - l).abs() < 1e-9 * (1.0 + l.abs()));
        }
    }

    #[test]
    fn ppt_compatibility(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (s, _) = random_state(dims, seed);
        let (m, n) = s.dims();
        let a = singular_values(&realign_matrix(s.matrix(), m, n).unwrap()).unwrap();
        for sub in [Subsystem::A, Subsystem::B] {
            let pt = partial_transpose_matrix(s.matrix(), m, n, sub).unwrap();
            let b = singular_values(&realign_matrix(&pt, m, n).unwrap()).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn swap_duality(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (s, _) = random_state(dims, seed);
        let (m, n) = s.dims();
        let swapped = swap_subsystems(&s);
        prop_assert_eq!(swapped.dims(), (n, m));
        let n1 = realignment_norm(&s).unwrap();
        prop_assert!((realignment_norm(&swapped).unwrap() - n1).abs() < 1e-10);
        prop_assert!(swap_subsystems(&swapped).matrix().checked_sub(s.matrix()).unwrap().max_abs() < 1e-15);
        let sw = swap_operator(m, n);
        prop_assert!((&(&swap_operator(n, m) * &sw) - &ComplexMatrix::identity(m * n)).max_abs() == 0.0);
    }

    #[test]
    fn realignment_norm_convex(dims in 0..DIMS.len(), seed in any::<u64>(), t in 0.0f64..=1.0) {
        let (s1, mut rng) = random_state(dims, seed);
        let (m, n) = s1.dims();
        let s2 = states::random_mixed_with(m, n, 1, &mut rng).unwrap();
        let mix = &s1.matrix().scale_real(t) + &s2.matrix().scale_real(1.0 - t);
        let mixed = bipartite::validate(mix, m, n).unwrap();
        let lhs = realignment_norm(&mixed).unwrap();
        let rhs = t * realignment_norm(&s1).unwrap() + (1.0 - t) * realignment_norm(&s2).unwrap();
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn separable_states_never_detected(dims in 0..DIMS.len(), seed in any::<u64>(), terms in 1usize..=20) {
        let (m, n) = DIMS[dims];
        let (s, ens) = states::random_separable(m, n, terms, seed).unwrap();
        prop_assert!(!criteria::realignment_test(&s).unwrap().detected_entangled);
        prop_assert!(!criteria::ppt_test(&s, Subsystem::A).unwrap().detected_entangled);
        prop_assert!((&ens.matrix() - s.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn local_unitaries_preserve_n(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (s, mut rng) = random_state(dims, seed);
        let (m, n) = s.dims();
        let w = states::random_unitary(m, &mut rng).kron(&states::random_unitary(n, &mut rng));
        let t = bipartite::validate(&(&w * s.matrix()) * &w.adjoint(), m, n).unwrap();
        prop_assert!((realignment_norm(&s).unwrap() - realignment_norm(&t).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn pure_states_follow_schmidt_formula(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (m, n) = DIMS[dims];
        let psi = states::random_pure(m * n, &mut states::rng_from_seed(seed));
        let s = bipartite::validate(ComplexMatrix::outer(&psi), m, n).unwrap();
        let expected = schmidt_norm(&psi, m, n);
        prop_assert!((realignment_norm(&s).unwrap() - expected).abs() < 1e-9);
        // a generic random pure state is entangled, and both tests agree
        let pure = criteria::pure_product_test(&s).unwrap();
        prop_assert_eq!(pure.detected_entangled, criteria::realignment_test(&s).unwrap().detected_entangled);
    }

    #[test]
    fn product_pure_states_sit_on_the_boundary(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (m, n) = DIMS[dims];
        let mut rng = states::rng_from_seed(seed);
        let a = states::random_pure(m, &mut rng);
        let b = states::random_pure(n, &mut rng);
        let rho = ComplexMatrix::outer(&a).kron(&ComplexMatrix::outer(&b));
        let s = bipartite::validate(rho, m, n).unwrap();
        prop_assert!((realignment_norm(&s).unwrap() - 1.0).abs() < 1e-10);
        prop_assert!(!criteria::pure_product_test(&s).unwrap().detected_entangled);
    }

    #[test]
    fn kron_decomposition_round_trip(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (s, _) = random_state(dims, seed);
        let d = kron_decompose(&s).unwrap();
        prop_assert!((&d.reconstruct() - s.matrix()).max_abs() < 1e-10);
        let total: f64 = d.factors.iter().map(|f| f.sigma).sum();
        prop_assert!((total - realignment_norm(&s).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn partial_transpose_is_an_involution(dims in 0..DIMS.len(), seed in any::<u64>()) {
        let (s, _) = random_state(dims, seed);
        let (m, n) = s.dims();
        for sub in [Subsystem::A, Subsystem::B] {
            let once = partial_transpose_matrix(s.matrix(), m, n, sub).unwrap();
            let twice = partial_transpose_matrix(&once, m, n, sub).unwrap();
            prop_assert_eq!(&twice, s.matrix());
        }
        let ta = partial_transpose_matrix(s.matrix(), m, n, Subsystem::A).unwrap();
        let tb = partial_transpose_matrix(s.matrix(), m, n, Subsystem::B).unwrap();
        prop_assert_eq!(ta, tb.transpose());
    }
}
