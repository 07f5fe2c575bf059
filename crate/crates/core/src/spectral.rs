//! Spectra of walk Hamiltonians.
//!
//! Ordered rings are circulant, so their spectrum follows from the Bloch
//! ansatz without any linear algebra: `E_n = 2m − 2 Σ_{z=1..m} cos(z θ_n)`
//! with `θ_n = 2πn/N`. Everything else goes through a dense symmetric
//! eigensolver with real eigenvectors.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::linalg;
use crate::netgen::{Hamiltonian, RingSpec};
use crate::Result;

/// Relative scale of the default clustering tolerance.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-8;

/// `1e-8 · max(1, spectral range)`.
pub fn default_tolerance(eigenvalues: &[f64]) -> f64 {
    let (lo, hi) = eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    let range = if eigenvalues.is_empty() { 0.0 } else { hi - lo };
    DEFAULT_RELATIVE_TOLERANCE * range.max(1.0)
}

/// Analytic spectrum of an ordered ring, indexed by Bloch number.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSpectrum {
    pub ring: RingSpec,
    pub energies: Vec<f64>,
    pub phases: Vec<f64>,
}

impl BlochSpectrum {
    pub fn n(&self) -> usize {
        self.ring.n()
    }
}

pub fn bloch_spectrum(ring: RingSpec) -> BlochSpectrum {
    let (n, m) = (ring.n(), ring.m());
    let energies = (0..n)
        .map(|b| {
            let sum: f64 = (1..=m)
                .map(|z| {
                    // Fold the angle into [0, π] so that E_b and E_{N-b} are
                    // evaluated from the same argument.
                    let r = (z * b) % n;
                    let r = r.min(n - r);
                    (2.0 * PI * r as f64 / n as f64).cos()
                })
                .sum();
            2.0 * m as f64 - 2.0 * sum
        })
        .collect();
    let phases = (0..n).map(|b| 2.0 * PI * b as f64 / n as f64).collect();
    BlochSpectrum {
        ring,
        energies,
        phases,
    }
}

/// Single-linkage clustering of eigenvalues.
///
/// Sorted values whose consecutive gap is at most `tol` share a class.
/// Classes come out in ascending eigenvalue order, each holding its
/// indices in ascending order.
pub fn degeneracy_classes(eigenvalues: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]));
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for idx in order {
        let e = eigenvalues[idx];
        match classes.last_mut() {
            Some(last) if e - prev <= tol => last.push(idx),
            _ => classes.push(vec![idx]),
        }
        prev = e;
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes
}

/// Maps each index to the position of its class in `classes`.
pub fn class_ids(classes: &[Vec<usize>], len: usize) -> Vec<usize> {
    let mut ids = vec![usize::MAX; len];
    for (cid, class) in classes.iter().enumerate() {
        for &i in class {
            ids[i] = cid;
        }
    }
    ids
}

/// Sorted multiset of class sizes.
pub fn class_size_profile(classes: &[Vec<usize>]) -> Vec<usize> {
    let mut sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    sizes.sort_unstable();
    sizes
}

/// Numeric eigen-decomposition of a Hamiltonian with its degeneracy classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    n: usize,
    eigenvalues: Vec<f64>,
    // vector-major: q_b(x) = eigenvectors[b * n + x]
    eigenvectors: Vec<f64>,
    classes: Vec<Vec<usize>>,
    tolerance: f64,
}

impl SpectralData {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Real orthonormal eigenvector `b`.
    pub fn eigenvector(&self, b: usize) -> &[f64] {
        &self.eigenvectors[b * self.n..(b + 1) * self.n]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Re-clusters with a different tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.classes = degeneracy_classes(&self.eigenvalues, tol);
        self.tolerance = tol;
        self
    }

    /// `max |H − Σ E_b q_b q_bᵀ|` over all entries.
    pub fn reconstruction_residual(&self, h: &Hamiltonian) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                let s: f64 = (0..n)
                    .map(|b| self.eigenvalues[b] * self.eigenvector(b)[r] * self.eigenvector(b)[c])
                    .sum();
                worst = worst.max((h.get(r, c) - s).abs());
            }
        }
        worst
    }

    /// `max |⟨q_a|q_b⟩ − δ_ab|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.n {
            for b in 0..=a {
                let dot: f64 = self
                    .eigenvector(a)
                    .iter()
                    .zip(self.eigenvector(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let want = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

/// Full eigen-decomposition with the default clustering tolerance.
pub fn eigendecompose(h: &Hamiltonian) -> Result<SpectralData> {
    let n = h.n();
    let (eigenvalues, eigenvectors) = linalg::symmetric_eigen(n, h.as_row_major())?;
    let tolerance = default_tolerance(&eigenvalues);
    let classes = degeneracy_classes(&eigenvalues, tolerance);
    Ok(SpectralData {
        n,
        eigenvalues,
        eigenvectors,
        classes,
        tolerance,
    })
}
