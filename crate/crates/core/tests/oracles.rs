use ctqw_core::analysis::{
    ensemble_average, realization, reduce_ensemble, transition_probability, EnsembleConfig,
};
use ctqw_core::netgen::{
    assemble_hamiltonian, build_ring, exponential_disorder, laplacian, RingSpec,
};
use ctqw_core::spectral::eigendecompose;
use ctqw_core::wigner::{limiting_wigner_circulant, wigner_general};
use num_complex::Complex64;

type Matrix = Vec<Vec<Complex64>>;

fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut c = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for l in 0..n {
            let ail = a[i][l];
            for j in 0..n {
                c[i][j] += ail * b[l][j];
            }
        }
    }
    c
}

/// exp(-i H t) by scaling and squaring with a Taylor kernel.
fn expm_neg_i(h: &[Vec<f64>], t: f64) -> Matrix {
    let n = h.len();
    let norm: f64 = h
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        * t.abs();
    let squarings = (norm.max(1.0).log2().ceil() as u32) + 4;
    let scale = t / f64::from(1u32 << squarings);
    let a: Matrix = h
        .iter()
        .map(|r| r.iter().map(|&v| Complex64::new(0.0, -v * scale)).collect())
        .collect();
    let mut result: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(f64::from(u8::from(i == j)), 0.0))
                .collect()
        })
        .collect();
    let mut term = result.clone();
    for order in 1..=30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= order as f64;
            }
        }
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

#[test]
fn four_cycle_evolution_matches_dense_exponential() {
    let ring = RingSpec::new(4, 1).unwrap();
    let h = laplacian(&build_ring(ring));
    let dense: Vec<Vec<f64>> = (0..4).map(|i| h.row(i).to_vec()).collect();
    let t = std::f64::consts::FRAC_PI_2;
    let u = expm_neg_i(&dense, t);
    let s = eigendecompose(&h).unwrap();
    let pi = transition_probability(&s, 0, t).unwrap();
    for x in 0..4 {
        assert!((pi[x] - u[x][0].norm_sqr()).abs() < 1e-10, "x={x}");
    }
    // At t = pi/2 the walker has moved entirely to the opposite node.
    assert!((pi[2] - 1.0).abs() < 1e-12);
}

#[test]
fn disordered_evolution_matches_dense_exponential() {
    let ring = RingSpec::new(12, 2).unwrap();
    let site = exponential_disorder(12, 0.3).unwrap();
    let h = assemble_hamiltonian(&build_ring(ring), Some(&site)).unwrap();
    let dense: Vec<Vec<f64>> = (0..12).map(|i| h.row(i).to_vec()).collect();
    let s = eigendecompose(&h).unwrap();
    for t in [0.3, 1.7, 4.0] {
        let u = expm_neg_i(&dense, t);
        let pi = transition_probability(&s, 5, t).unwrap();
        let w = wigner_general(&s, 5, t).unwrap();
        for x in 0..12 {
            let exact = u[x][5].norm_sqr();
            assert!((pi[x] - exact).abs() < 1e-10);
            let row: f64 = w.row(x).iter().sum();
            assert!((row - exact).abs() < 1e-10);
        }
    }
}

#[test]
fn disordered_hamiltonian_decomposes_accurately() {
    let ring = RingSpec::new(50, 2).unwrap();
    let site = exponential_disorder(50, 0.5).unwrap();
    let h = assemble_hamiltonian(&build_ring(ring), Some(&site)).unwrap();
    let s = eigendecompose(&h).unwrap();
    let scale = h.max_abs();
    assert!(s.reconstruction_residual(&h) < 1e-9 * scale.max(1.0));
    assert!(s.orthonormality_defect() < 1e-10);
    for (n, &e) in s.eigenvalues().iter().enumerate() {
        let q = s.eigenvector(n);
        let hq = h.apply(q);
        let residual = hq
            .iter()
            .zip(q)
            .map(|(a, b)| (a - e * b).abs())
            .fold(0.0, f64::max);
        assert!(residual < 1e-9, "eigenpair {n}: {residual:e}");
    }
}

fn config(n: usize, m: usize, p: f64, realizations: usize) -> EnsembleConfig {
    EnsembleConfig {
        ring: RingSpec::new(n, m).unwrap(),
        p,
        initial_node: n / 2,
        realizations,
        base_seed: 11,
        tolerance: None,
    }
}

#[test]
fn unrewired_ensemble_is_the_ordered_limit() {
    let cfg = config(24, 2, 0.0, 5);
    let result = ensemble_average(&cfg).unwrap();
    let ordered = limiting_wigner_circulant(cfg.ring, 12).unwrap();
    assert!(result.mean_field.max_abs_diff(&ordered) < 1e-12);
    assert!(result.connected.iter().all(|&c| c));
    assert!(result.skipped_rewirings.iter().all(|&s| s == 0));
}

#[test]
fn reduction_is_independent_of_arrival_order() {
    let cfg = config(14, 2, 0.4, 9);
    let members: Vec<_> = (0..9).map(|r| realization(&cfg, r).unwrap()).collect();
    let forward = reduce_ensemble(&cfg, members.clone()).unwrap();
    let mut shuffled = members;
    shuffled.reverse();
    shuffled.swap(1, 6);
    shuffled.swap(0, 4);
    let permuted = reduce_ensemble(&cfg, shuffled).unwrap();
    assert_eq!(forward, permuted);
    assert_eq!(forward, ensemble_average(&cfg).unwrap());
}
