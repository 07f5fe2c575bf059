//! Discrete Wigner functions of a walker started on node `j`.
//!
//! For a pure state `ρ(t) = |j,t⟩⟨j,t|` the field on the `N × N` grid is
//!
//! ```text
//! W_j(x, k, t) = (1/N) Σ_y e^{2πiky/N} ⟨x−y| ρ(t) |x+y⟩,   y ∈ [0, N)
//! ```
//!
//! with all position arithmetic taken mod `N`. Three routes are provided:
//!
//! - the circulant fast path, where the `y` sum collapses analytically and
//!   only the Bloch energies are needed;
//! - the general spectral path, valid for any real symmetric Hamiltonian;
//! - the closed forms of the long-time limit on the cycle graph (`m = 1`).
//!
//! The long-time limit keeps only the terms whose energy difference
//! vanishes, i.e. pairs of eigenvalues in the same degeneracy class.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::netgen::{NetworkSpec, RingSpec};
use crate::spectral::{self, bloch_spectrum, class_ids, degeneracy_classes, SpectralData};
use crate::{Error, Result};

/// Largest imaginary part tolerated before a field is declared real.
pub const REALNESS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeTag {
    At(f64),
    Limit,
}

/// Which evaluation route produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPath {
    Circulant,
    General,
    ClosedForm,
    EnsembleMean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Provenance {
    pub network: Option<NetworkSpec>,
    pub path: FieldPath,
    /// Degeneracy tolerance used for the long-time limit, if any.
    pub tolerance: Option<f64>,
}

/// Real `N × N` quasi-probability grid, indexed `(x, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField {
    n: usize,
    values: Vec<f64>,
    initial_node: usize,
    time: TimeTag,
    provenance: Provenance,
    imag_residue: f64,
}

impl WignerField {
    /// Wraps an `x`-major grid (`values[x * n + k]`).
    pub fn new(
        n: usize,
        values: Vec<f64>,
        initial_node: usize,
        time: TimeTag,
        provenance: Provenance,
    ) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: values.len(),
            });
        }
        if initial_node >= n {
            return Err(Error::NodeOutOfRange {
                node: initial_node,
                n,
            });
        }
        Ok(Self {
            n,
            values,
            initial_node,
            time,
            provenance,
            imag_residue: 0.0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, x: usize, k: usize) -> f64 {
        self.values[x * self.n + k]
    }

    /// Values at fixed `x`, ordered by `k`.
    pub fn row(&self, x: usize) -> &[f64] {
        &self.values[x * self.n..(x + 1) * self.n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn initial_node(&self) -> usize {
        self.initial_node
    }

    pub fn time(&self) -> TimeTag {
        self.time
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Largest imaginary part discarded when the field was formed.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    pub fn with_network(mut self, network: NetworkSpec) -> Self {
        self.provenance.network = Some(network);
        self
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Largest absolute cellwise difference to `other`.
    pub fn max_abs_diff(&self, other: &WignerField) -> f64 {
        assert_eq!(self.n, other.n);
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// `e^{2πir/N}` for `r ∈ [0, N)`.
struct Twiddles(Vec<Complex64>);

impl Twiddles {
    fn new(n: usize) -> Self {
        Self(
            (0..n)
                .map(|r| Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64))
                .collect(),
        )
    }

    #[inline]
    fn at(&self, r: usize) -> Complex64 {
        self.0[r % self.0.len()]
    }
}

fn check_node(n: usize, j: usize) -> Result<()> {
    if j >= n {
        Err(Error::NodeOutOfRange { node: j, n })
    } else {
        Ok(())
    }
}

fn realize(
    n: usize,
    cells: Vec<Complex64>,
    initial_node: usize,
    time: TimeTag,
    provenance: Provenance,
) -> Result<WignerField> {
    let imag_residue = cells.iter().fold(0.0f64, |acc, c| acc.max(c.im.abs()));
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(imag_residue < REALNESS_TOLERANCE) {
        return Err(Error::ImaginaryResidue(imag_residue));
    }
    Ok(WignerField {
        n,
        values: cells.into_iter().map(|c| c.re).collect(),
        initial_node,
        time,
        provenance,
        imag_residue,
    })
}

/// `(1/N²) Σ_n a(n, k) e^{2πi(2n−k)(x−j)/N}` over the whole grid, where
/// `a(n, k)` is the time factor for the Bloch pair `(n, k−n)`.
fn circulant_grid(
    n: usize,
    j: usize,
    pair_factor: impl Fn(usize, usize) -> Complex64,
) -> Vec<Complex64> {
    let tw = Twiddles::new(n);
    let norm = 1.0 / (n * n) as f64;
    let mut cells = vec![Complex64::new(0.0, 0.0); n * n];
    let mut factors = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        for (b, f) in factors.iter_mut().enumerate() {
            *f = pair_factor(b, k);
        }
        for x in 0..n {
            let d = (x + n - j) % n;
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, f) in factors.iter().enumerate() {
                if *f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let freq = (2 * b + n - k) % n;
                acc += f * tw.at(freq * d);
            }
            cells[x * n + k] = acc * norm;
        }
    }
    cells
}

/// Instantaneous field on an ordered ring via the Bloch spectrum.
pub fn wigner_circulant(ring: RingSpec, j: usize, t: f64) -> Result<WignerField> {
    let n = ring.n();
    check_node(n, j)?;
    let energies = bloch_spectrum(ring).energies;
    let cells = circulant_grid(n, j, |b, k| {
        let partner = (n + k - b) % n;
        Complex64::from_polar(1.0, -t * (energies[b] - energies[partner]))
    });
    realize(
        n,
        cells,
        j,
        TimeTag::At(t),
        Provenance {
            network: Some(NetworkSpec::ordered(ring)),
            path: FieldPath::Circulant,
            tolerance: None,
        },
    )
}

/// Long-time limit on an ordered ring with the default degeneracy tolerance.
pub fn limiting_wigner_circulant(ring: RingSpec, j: usize) -> Result<WignerField> {
    let energies = bloch_spectrum(ring).energies;
    let tol = spectral::default_tolerance(&energies);
    limiting_wigner_circulant_with_tolerance(ring, j, tol)
}

pub fn limiting_wigner_circulant_with_tolerance(
    ring: RingSpec,
    j: usize,
    tol: f64,
) -> Result<WignerField> {
    let n = ring.n();
    check_node(n, j)?;
    let energies = bloch_spectrum(ring).energies;
    let ids = class_ids(&degeneracy_classes(&energies, tol), n);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let cells = circulant_grid(n, j, |b, k| {
        if ids[b] == ids[(n + k - b) % n] {
            one
        } else {
            zero
        }
    });
    realize(
        n,
        cells,
        j,
        TimeTag::Limit,
        Provenance {
            network: Some(NetworkSpec::ordered(ring)),
            path: FieldPath::Circulant,
            tolerance: Some(tol),
        },
    )
}

/// `W(x, k) = (1/N) Σ_y e^{2πiky/N} ρ(x−y, x+y)` for a density given as a
/// callback over node pairs.
fn field_from_density(n: usize, rho: impl Fn(usize, usize) -> Complex64) -> Vec<Complex64> {
    let tw = Twiddles::new(n);
    let norm = 1.0 / n as f64;
    let mut cells = vec![Complex64::new(0.0, 0.0); n * n];
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    for x in 0..n {
        for (y, slot) in diag.iter_mut().enumerate() {
            *slot = rho((x + n - y) % n, (x + y) % n);
        }
        for k in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (y, r) in diag.iter().enumerate() {
                acc += tw.at(k * y) * r;
            }
            cells[x * n + k] = acc * norm;
        }
    }
    cells
}

/// Amplitudes `ψ_x(t) = ⟨x| e^{−iHt} |j⟩ = Σ_b e^{−iE_b t} q_b(x) q_b(j)`.
pub fn evolve_amplitudes(spectral: &SpectralData, j: usize, t: f64) -> Result<Vec<Complex64>> {
    let n = spectral.n();
    check_node(n, j)?;
    let mut psi = vec![Complex64::new(0.0, 0.0); n];
    for (b, &e) in spectral.eigenvalues().iter().enumerate() {
        let q = spectral.eigenvector(b);
        let weight = Complex64::from_polar(q[j], -e * t);
        for (p, &qx) in psi.iter_mut().zip(q) {
            *p += weight * qx;
        }
    }
    Ok(psi)
}

/// Instantaneous field for an arbitrary Hamiltonian.
pub fn wigner_general(spectral: &SpectralData, j: usize, t: f64) -> Result<WignerField> {
    let n = spectral.n();
    let psi = evolve_amplitudes(spectral, j, t)?;
    let cells = field_from_density(n, |a, b| psi[a] * psi[b].conj());
    realize(
        n,
        cells,
        j,
        TimeTag::At(t),
        Provenance {
            network: None,
            path: FieldPath::General,
            tolerance: None,
        },
    )
}

/// Time-averaged density `Σ_C P_C|j⟩⟨j|P_C`, with `P_C` the projector on
/// degeneracy class `C`. Row-major, real and symmetric.
pub fn limiting_density(spectral: &SpectralData, j: usize) -> Result<Vec<f64>> {
    let n = spectral.n();
    check_node(n, j)?;
    let mut rho = vec![0.0; n * n];
    let mut column = vec![0.0; n];
    for class in spectral.classes() {
        column.iter_mut().for_each(|c| *c = 0.0);
        for &b in class {
            let q = spectral.eigenvector(b);
            let qj = q[j];
            for (c, &qx) in column.iter_mut().zip(q) {
                *c += qx * qj;
            }
        }
        for a in 0..n {
            let ca = column[a];
            if ca == 0.0 {
                continue;
            }
            for (r, &cb) in rho[a * n..(a + 1) * n].iter_mut().zip(&column) {
                *r += ca * cb;
            }
        }
    }
    Ok(rho)
}

/// Long-time limit for an arbitrary Hamiltonian, grouping the eigenpairs by
/// the degeneracy classes carried in `spectral`.
pub fn limiting_wigner_general(spectral: &SpectralData, j: usize) -> Result<WignerField> {
    let n = spectral.n();
    let rho = limiting_density(spectral, j)?;
    let cells = field_from_density(n, |a, b| Complex64::new(rho[a * n + b], 0.0));
    realize(
        n,
        cells,
        j,
        TimeTag::Limit,
        Provenance {
            network: None,
            path: FieldPath::General,
            tolerance: Some(spectral.tolerance()),
        },
    )
}

/// Analytic long-time limit on the cycle graph (`m = 1`).
///
/// Even `N`: `1/N` at `k = 0, x ∈ {j, j+N/2}`, `2/N²` for even `k ≠ 0`,
/// zero elsewhere. Odd `N`: `1/N` at `k = 0, x = j`, `1/N²` for `k ≠ 0`,
/// zero elsewhere.
pub fn closed_form_limit_m1(n: usize, j: usize) -> Result<WignerField> {
    let ring = RingSpec::new(n, 1)?;
    check_node(n, j)?;
    let nf = n as f64;
    let mut values = vec![0.0; n * n];
    let even = n.is_multiple_of(2);
    for x in 0..n {
        for k in 0..n {
            let v = if k == 0 {
                let on_peak = x == j || (even && x == (j + n / 2) % n);
                if on_peak {
                    1.0 / nf
                } else {
                    0.0
                }
            } else if even {
                if k % 2 == 0 {
                    2.0 / (nf * nf)
                } else {
                    0.0
                }
            } else {
                1.0 / (nf * nf)
            };
            values[x * n + k] = v;
        }
    }
    Ok(WignerField {
        n,
        values,
        initial_node: j,
        time: TimeTag::Limit,
        provenance: Provenance {
            network: Some(NetworkSpec::ordered(ring)),
            path: FieldPath::ClosedForm,
            tolerance: None,
        },
        imag_residue: 0.0,
    })
}

/// Field for a network description, picking the circulant route whenever
/// the Hamiltonian is a bare ring Laplacian. `tolerance` overrides the
/// default degeneracy tolerance of the long-time limit.
pub fn field_for_network(
    spec: &NetworkSpec,
    j: usize,
    time: TimeTag,
    tolerance: Option<f64>,
) -> Result<WignerField> {
    if spec.is_circulant() {
        let field = match (time, tolerance) {
            (TimeTag::At(t), _) => wigner_circulant(spec.ring, j, t)?,
            (TimeTag::Limit, None) => limiting_wigner_circulant(spec.ring, j)?,
            (TimeTag::Limit, Some(tol)) => {
                limiting_wigner_circulant_with_tolerance(spec.ring, j, tol)?
            }
        };
        return Ok(field.with_network(*spec));
    }
    let network = spec.build()?;
    let mut spectral = spectral::eigendecompose(&network.hamiltonian)?;
    if let Some(tol) = tolerance {
        spectral = spectral.with_tolerance(tol);
    }
    let field = match time {
        TimeTag::At(t) => wigner_general(&spectral, j, t)?,
        TimeTag::Limit => limiting_wigner_general(&spectral, j)?,
    };
    Ok(field.with_network(*spec))
}
