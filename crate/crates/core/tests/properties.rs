use ctqw_core::analysis::{asymmetry, marginals, transition_probability};
use ctqw_core::netgen::{build_ring, laplacian, ws_rewire, RingSpec};
use ctqw_core::spectral::{
    bloch_spectrum, class_size_profile, degeneracy_classes, eigendecompose, SpectralData,
};
use ctqw_core::wigner::{
    limiting_wigner_circulant, limiting_wigner_general, wigner_circulant, wigner_general,
};
use proptest::prelude::*;

/// (N, m, j) with a valid ring.
fn ring_and_node(max_n: usize) -> impl Strategy<Value = (RingSpec, usize)> {
    (4..max_n)
        .prop_flat_map(|n| (Just(n), 1..=(n - 1) / 2, 0..n))
        .prop_map(|(n, m, j)| (RingSpec::new(n, m).unwrap(), j))
}

fn ordered_spectral(ring: RingSpec) -> SpectralData {
    eigendecompose(&laplacian(&build_ring(ring))).unwrap()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn circulant_and_general_routes_agree((ring, j) in ring_and_node(33), t in 0.0..50.0f64) {
        let s = ordered_spectral(ring);
        let a = wigner_circulant(ring, j, t).unwrap();
        let b = wigner_general(&s, j, t).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9, "diff {}", a.max_abs_diff(&b));
    }

    #[test]
    fn limiting_routes_agree((ring, j) in ring_and_node(33)) {
        let s = ordered_spectral(ring);
        let a = limiting_wigner_circulant(ring, j).unwrap();
        let b = limiting_wigner_general(&s, j).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-9, "diff {}", a.max_abs_diff(&b));
    }

    #[test]
    fn bloch_energies_match_numeric_spectrum((ring, _j) in ring_and_node(64)) {
        let bloch = sorted(bloch_spectrum(ring).energies);
        let numeric = ordered_spectral(ring);
        for (a, b) in bloch.iter().zip(numeric.eigenvalues()) {
            prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn rewired_fields_are_normalised_and_marginals_hold(
        (ring, j) in ring_and_node(24),
        p in 0.0..=1.0f64,
        seed in any::<u64>(),
        t in 0.0..30.0f64,
    ) {
        let graph = ws_rewire(ring, p, seed).unwrap().graph;
        let s = eigendecompose(&laplacian(&graph)).unwrap();
        let w = wigner_general(&s, j, t).unwrap();
        prop_assert!((w.total() - 1.0).abs() < 1e-9);
        let chi = marginals(&w).chi;
        let pi = transition_probability(&s, j, t).unwrap();
        for (c, q) in chi.iter().zip(&pi) {
            prop_assert!((c - q).abs() < 1e-10);
        }
        let limit = limiting_wigner_general(&s, j).unwrap();
        prop_assert!((limit.total() - 1.0).abs() < 1e-9);
        prop_assert!(marginals(&limit).chi.iter().all(|&c| c >= -1e-10));
    }

    #[test]
    fn ordered_fields_are_centrally_symmetric((ring, j) in ring_and_node(33), t in 0.0..40.0f64) {
        let n = ring.n();
        let w = wigner_circulant(ring, j, t).unwrap();
        for y in 0..n {
            for k in 0..n {
                let a = w.get((j + y) % n, k);
                let b = w.get((j + n - y) % n, (n - k) % n);
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ordered_fields_translate_with_initial_node(
        (ring, j) in ring_and_node(33),
        t in 0.0..40.0f64,
    ) {
        let n = ring.n();
        let base = wigner_circulant(ring, 0, t).unwrap();
        let moved = wigner_circulant(ring, j, t).unwrap();
        for x in 0..n {
            for k in 0..n {
                prop_assert!((moved.get((x + j) % n, k) - base.get(x, k)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn half_period_differences_are_antisymmetric(
        half in 2..16usize,
        m_frac in 0.0..1.0f64,
        t in 0.0..20.0f64,
    ) {
        let n = 2 * half;
        let m = 1 + (m_frac * ((n - 1) / 2 - 1) as f64) as usize;
        let ring = RingSpec::new(n, m).unwrap();
        let w = wigner_circulant(ring, half, t).unwrap();
        let map = asymmetry(&w).unwrap();
        for x in 0..half {
            for k in 0..n {
                let mirrored = w.get(x, k) - w.get(x + half, k);
                prop_assert!((map.dx.get(x, k) + mirrored).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn degeneracy_classes_ignore_input_order(
        values in prop::collection::vec(prop::sample::select(vec![0.0, 1.0, 1.0 + 1e-12, 2.5, 4.0, -3.0]), 1..20),
        shuffle_seed in any::<u64>(),
    ) {
        let tol = 1e-9;
        let classes = degeneracy_classes(&values, tol);
        let mut order: Vec<usize> = (0..values.len()).collect();
        let mut state = shuffle_seed | 1;
        for i in (1..order.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            order.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let permuted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        let other = degeneracy_classes(&permuted, tol);
        let mut back: Vec<Vec<usize>> = other
            .iter()
            .map(|c| {
                let mut c: Vec<usize> = c.iter().map(|&i| order[i]).collect();
                c.sort_unstable();
                c
            })
            .collect();
        back.sort();
        let mut expected = classes.clone();
        expected.sort();
        prop_assert_eq!(back, expected);
        prop_assert_eq!(class_size_profile(&classes), class_size_profile(&other));

        // Collapsing each class to its representative value is a fixed point.
        let reps: Vec<f64> = classes.iter().map(|c| values[c[0]]).collect();
        let again = degeneracy_classes(&reps, tol);
        prop_assert_eq!(again.len(), reps.len());
    }
}
