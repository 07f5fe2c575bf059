//! Quantities derived from Wigner fields: marginals, half-period
//! asymmetry, transition probabilities and Watts–Strogatz ensembles.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::netgen::{laplacian, ws_rewire, DisorderSpec, NetworkSpec, RingSpec, PRNG_NAME};
use crate::spectral::{eigendecompose, SpectralData};
use crate::wigner::{
    evolve_amplitudes, limiting_wigner_general, FieldPath, Provenance, TimeTag, WignerField,
};
use crate::{Error, Result};

/// Line sums of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalReport {
    /// `χ_x = Σ_k W(x, k)`: the occupation probability of node `x`.
    pub chi: Vec<f64>,
    /// `Σ_x W(x, k)`.
    pub k_marginal: Vec<f64>,
    pub initial_node: usize,
}

pub fn marginals(field: &WignerField) -> MarginalReport {
    let n = field.n();
    let chi = (0..n).map(|x| field.row(x).iter().sum()).collect();
    let k_marginal = (0..n)
        .map(|k| (0..n).map(|x| field.get(x, k)).sum())
        .collect();
    MarginalReport {
        chi,
        k_marginal,
        initial_node: field.initial_node(),
    }
}

/// Dense row-major grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub rows: usize,
    pub cols: usize,
    pub values: Vec<f64>,
}

impl Grid {
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Differences between a field and its half-period shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymmetryMap {
    /// `W(x+N/2, k) − W(x, k)`, rows `x ∈ [0, N/2)`, columns `k ∈ [0, N)`.
    pub dx: Grid,
    /// `W(x, k+N/2) − W(x, k)`, rows `x ∈ [0, N)`, columns `k ∈ [0, N/2)`.
    pub dk: Grid,
    /// `χ_{x+N/2} − χ_x` for `x ∈ [0, N/2)`.
    pub chi_asym: Vec<f64>,
}

impl AsymmetryMap {
    pub fn max_abs_chi_asym(&self) -> f64 {
        self.chi_asym.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

pub fn asymmetry(field: &WignerField) -> Result<AsymmetryMap> {
    let n = field.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddSize(n));
    }
    let h = n / 2;
    let mut dx = Vec::with_capacity(h * n);
    for x in 0..h {
        dx.extend((0..n).map(|k| field.get(x + h, k) - field.get(x, k)));
    }
    let mut dk = Vec::with_capacity(n * h);
    for x in 0..n {
        dk.extend((0..h).map(|k| field.get(x, k + h) - field.get(x, k)));
    }
    let chi = marginals(field).chi;
    let chi_asym = (0..h).map(|x| chi[x + h] - chi[x]).collect();
    Ok(AsymmetryMap {
        dx: Grid {
            rows: h,
            cols: n,
            values: dx,
        },
        dk: Grid {
            rows: n,
            cols: h,
            values: dk,
        },
        chi_asym,
    })
}

/// `π_x(t) = |⟨x| e^{−iHt} |j⟩|²`.
pub fn transition_probability(spectral: &SpectralData, j: usize, t: f64) -> Result<Vec<f64>> {
    Ok(evolve_amplitudes(spectral, j, t)?
        .into_iter()
        .map(|a| a.norm_sqr())
        .collect())
}

fn median(sorted: &[f64]) -> f64 {
    let len = sorted.len();
    if len == 0 {
        return f64::NAN;
    }
    if len % 2 == 1 {
        sorted[len / 2]
    } else {
        0.5 * (sorted[len / 2 - 1] + sorted[len / 2])
    }
}

/// `median + 3 · MAD`: values above it count as peaks rather than noise.
pub fn noise_threshold(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let med = median(&sorted);
    let mut dev: Vec<f64> = values.iter().map(|v| (v - med).abs()).collect();
    dev.sort_by(f64::total_cmp);
    med + 3.0 * median(&dev)
}

/// Cyclic local maxima of `values` that clear [`noise_threshold`].
///
/// A plateau is reported once, at its first index.
pub fn peaks_above_noise(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let threshold = noise_threshold(values);
    (0..n)
        .filter(|&x| {
            let v = values[x];
            let left = values[(x + n - 1) % n];
            let right = values[(x + 1) % n];
            v > threshold && v > left && v >= right
        })
        .collect()
}

/// Parameters of a seeded Watts–Strogatz ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub ring: RingSpec,
    pub p: f64,
    pub initial_node: usize,
    pub realizations: usize,
    pub base_seed: u64,
    /// Overrides the default degeneracy tolerance of each realization.
    pub tolerance: Option<f64>,
}

impl EnsembleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::InvalidParameter(
                "ensemble needs at least one realization",
            ));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(
                "rewiring probability must lie in [0, 1]",
            ));
        }
        if self.initial_node >= self.ring.n() {
            return Err(Error::NodeOutOfRange {
                node: self.initial_node,
                n: self.ring.n(),
            });
        }
        Ok(())
    }

    /// Seed of realization `index`: `base_seed + index`, wrapping.
    pub fn seed_of(&self, index: usize) -> u64 {
        self.base_seed.wrapping_add(index as u64)
    }
}

/// One member of an ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub index: usize,
    pub seed: u64,
    pub field: WignerField,
    pub chi: Vec<f64>,
    pub connected: bool,
    pub skipped_rewirings: usize,
}

/// Builds, diagonalises and time-averages realization `index`.
pub fn realization(config: &EnsembleConfig, index: usize) -> Result<Realization> {
    let seed = config.seed_of(index);
    let wrap = |e: Error| Error::Realization {
        seed,
        reason: Box::new(e),
    };
    let rewired = ws_rewire(config.ring, config.p, seed).map_err(wrap)?;
    let mut spectral = eigendecompose(&laplacian(&rewired.graph)).map_err(wrap)?;
    if let Some(tol) = config.tolerance {
        spectral = spectral.with_tolerance(tol);
    }
    let field = limiting_wigner_general(&spectral, config.initial_node)
        .map_err(wrap)?
        .with_network(NetworkSpec {
            ring: config.ring,
            disorder: DisorderSpec::WattsStrogatz { p: config.p, seed },
        });
    let chi = marginals(&field).chi;
    Ok(Realization {
        index,
        seed,
        field,
        chi,
        connected: rewired.graph.is_connected(),
        skipped_rewirings: rewired.skipped,
    })
}

/// Ensemble-averaged long-time field and occupation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub mean_field: WignerField,
    pub mean_chi: Vec<f64>,
    pub n_realizations: usize,
    pub base_seed: u64,
    pub prng: &'static str,
    /// Indexed by realization.
    pub connected: Vec<bool>,
    pub skipped_rewirings: Vec<usize>,
}

/// Averages realizations in index order, whatever order they arrive in.
///
/// The set of indices must be exactly `0..config.realizations`.
pub fn reduce_ensemble<I>(config: &EnsembleConfig, members: I) -> Result<EnsembleResult>
where
    I: IntoIterator<Item = Realization>,
{
    config.validate()?;
    let mut members: Vec<Realization> = members.into_iter().collect();
    members.sort_by_key(|r| r.index);
    let complete = members.len() == config.realizations
        && members.iter().enumerate().all(|(i, r)| r.index == i);
    if !complete {
        return Err(Error::InvalidParameter(
            "ensemble members must cover realization indices 0..n exactly once",
        ));
    }

    let n = config.ring.n();
    let mut sum_field = vec![0.0; n * n];
    let mut sum_chi = vec![0.0; n];
    for r in &members {
        if r.field.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.field.n(),
            });
        }
        for (s, v) in sum_field.iter_mut().zip(r.field.values()) {
            *s += v;
        }
        for (s, v) in sum_chi.iter_mut().zip(&r.chi) {
            *s += v;
        }
    }
    let count = members.len() as f64;
    sum_field.iter_mut().for_each(|v| *v /= count);
    sum_chi.iter_mut().for_each(|v| *v /= count);

    let tolerance = members
        .iter()
        .filter_map(|r| r.field.provenance().tolerance)
        .fold(f64::NEG_INFINITY, f64::max);
    let mean_field = WignerField::new(
        n,
        sum_field,
        config.initial_node,
        TimeTag::Limit,
        Provenance {
            network: Some(NetworkSpec {
                ring: config.ring,
                disorder: DisorderSpec::WattsStrogatz {
                    p: config.p,
                    seed: config.base_seed,
                },
            }),
            path: FieldPath::EnsembleMean,
            tolerance: tolerance.is_finite().then_some(tolerance),
        },
    )?;

    Ok(EnsembleResult {
        mean_field,
        mean_chi: sum_chi,
        n_realizations: members.len(),
        base_seed: config.base_seed,
        prng: PRNG_NAME,
        connected: members.iter().map(|r| r.connected).collect(),
        skipped_rewirings: members.iter().map(|r| r.skipped_rewirings).collect(),
    })
}

/// Sequential ensemble average; see [`reduce_ensemble`] for the reduction order.
pub fn ensemble_average(config: &EnsembleConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let members = (0..config.realizations)
        .map(|r| realization(config, r))
        .collect::<Result<Vec<_>>>()?;
    reduce_ensemble(config, members)
}
