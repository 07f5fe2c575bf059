//! Network construction: ordered rings, Watts–Strogatz rewiring, site
//! disorder and the dense Hamiltonians built from them.
//!
//! The hopping rate is fixed to one, so `H = A + Δ` where `A` is the graph
//! Laplacian and `Δ` an optional diagonal perturbation.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Name of the generator behind every seeded construction.
pub const PRNG_NAME: &str = "ChaCha8";

/// Ordered ring of `n` nodes, each linked to its `m` nearest neighbours on
/// either side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingSpec {
    n: usize,
    m: usize,
}

impl RingSpec {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 3 || m < 1 || 2 * m > n - 1 {
            return Err(Error::InvalidRing { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Node used by default as the walker's starting point, `floor(N/2)`.
    pub fn default_initial_node(&self) -> usize {
        self.n / 2
    }
}

/// Simple undirected graph on nodes `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    // normalised to (lo, hi)
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from unordered pairs, rejecting self-loops,
    /// duplicates and out-of-range nodes.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if u == v {
                return Err(Error::InvalidParameter("self-loop in edge list"));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidParameter("duplicate edge in edge list"));
            }
        }
        Ok(Self { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges as `(lo, hi)` pairs in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// Kind of disorder applied on top of an ordered ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DisorderSpec {
    None,
    /// Site energies `exp(λ·2πj/N)`.
    Exponential {
        lambda: f64,
    },
    /// Watts–Strogatz rewiring with probability `p`, seeded.
    WattsStrogatz {
        p: f64,
        seed: u64,
    },
}

impl DisorderSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DisorderSpec::None => Ok(()),
            DisorderSpec::Exponential { lambda } => {
                if lambda.is_finite() && lambda >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("lambda must be finite and >= 0"))
                }
            }
            DisorderSpec::WattsStrogatz { p, .. } => {
                if (0.0..=1.0).contains(&p) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(
                        "rewiring probability must lie in [0, 1]",
                    ))
                }
            }
        }
    }
}

/// Dense real symmetric Hamiltonian, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n: usize,
    entries: Vec<f64>,
}

impl Hamiltonian {
    /// Wraps a row-major matrix. Fails unless it is square and exactly symmetric.
    pub fn from_row_major(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        let h = Self { n, entries };
        if !h.is_symmetric() {
            return Err(Error::InvalidParameter("Hamiltonian must be symmetric"));
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn as_row_major(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Diagonal perturbation `Δ` added to a Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteEnergies(pub Vec<f64>);

impl SiteEnergies {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Circulant ring: `i ~ j` iff `(i - j) mod N` lies in `1..=m` or `N-m..N`.
pub fn build_ring(spec: RingSpec) -> Graph {
    let (n, m) = (spec.n, spec.m);
    let edges = (0..n)
        .flat_map(|i| (1..=m).map(move |z| (i, (i + z) % n)))
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    Graph { n, edges }
}

pub fn laplacian(graph: &Graph) -> Hamiltonian {
    let n = graph.n;
    let mut entries = vec![0.0; n * n];
    for &(u, v) in &graph.edges {
        entries[u * n + v] = -1.0;
        entries[v * n + u] = -1.0;
        entries[u * n + u] += 1.0;
        entries[v * n + v] += 1.0;
    }
    Hamiltonian { n, entries }
}

/// Outcome of a Watts–Strogatz rewiring pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewiring {
    pub graph: Graph,
    /// Edges selected for rewiring whose source node had no free partner.
    pub skipped: usize,
}

/// Watts–Strogatz rewiring of an ordered ring.
///
/// Lanes `z = 1..=m` are visited in order and, within a lane, nodes
/// `i = 0..N`. With probability `p` the ring edge `(i, i+z)` is replaced by
/// `(i, w)`, `w` drawn uniformly from nodes that are neither `i` nor a
/// current neighbour of `i`. Saturated nodes keep their edge.
pub fn ws_rewire(spec: RingSpec, p: f64, seed: u64) -> Result<Rewiring> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(
            "rewiring probability must lie in [0, 1]",
        ));
    }
    let n = spec.n;
    let mut adj = vec![false; n * n];
    for (u, v) in build_ring(spec).edges() {
        adj[u * n + v] = true;
        adj[v * n + u] = true;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut skipped = 0;
    let mut candidates = Vec::with_capacity(n);
    for z in 1..=spec.m {
        for i in 0..n {
            let v = (i + z) % n;
            if !rng.gen_bool(p) {
                continue;
            }
            // Only this iteration ever removes (i, i+z).
            debug_assert!(adj[i * n + v]);
            candidates.clear();
            candidates.extend((0..n).filter(|&w| w != i && !adj[i * n + w]));
            if candidates.is_empty() {
                skipped += 1;
                continue;
            }
            let w = candidates[rng.gen_range(0..candidates.len())];
            adj[i * n + v] = false;
            adj[v * n + i] = false;
            adj[i * n + w] = true;
            adj[w * n + i] = true;
        }
    }

    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| adj[u * n + v])
        .collect();
    Ok(Rewiring {
        graph: Graph { n, edges },
        skipped,
    })
}

/// Site energies `Δ_jj = exp(λ·2πj/N)`.
pub fn exponential_disorder(n: usize, lambda: f64) -> Result<SiteEnergies> {
    if n == 0 {
        return Err(Error::InvalidParameter("node count must be positive"));
    }
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameter("lambda must be finite and >= 0"));
    }
    Ok(SiteEnergies(
        (0..n)
            .map(|j| (lambda * 2.0 * PI * j as f64 / n as f64).exp())
            .collect(),
    ))
}

/// `H = laplacian(graph) + Δ`.
pub fn assemble_hamiltonian(graph: &Graph, site: Option<&SiteEnergies>) -> Result<Hamiltonian> {
    let mut h = laplacian(graph);
    if let Some(delta) = site {
        if delta.len() != h.n {
            return Err(Error::DimensionMismatch {
                expected: h.n,
                found: delta.len(),
            });
        }
        for (i, d) in delta.0.iter().enumerate() {
            h.entries[i * h.n + i] += d;
        }
    }
    Ok(h)
}

/// Topology plus disorder: everything needed to rebuild a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSpec {
    pub ring: RingSpec,
    pub disorder: DisorderSpec,
}

/// A built network instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub spec: NetworkSpec,
    pub graph: Graph,
    pub hamiltonian: Hamiltonian,
    pub skipped_rewirings: usize,
}

impl Network {
    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }
}

impl NetworkSpec {
    pub fn ordered(ring: RingSpec) -> Self {
        Self {
            ring,
            disorder: DisorderSpec::None,
        }
    }

    /// True when the Hamiltonian is the bare circulant Laplacian.
    pub fn is_circulant(&self) -> bool {
        match self.disorder {
            DisorderSpec::None => true,
            DisorderSpec::WattsStrogatz { p, .. } => p == 0.0,
            DisorderSpec::Exponential { .. } => false,
        }
    }

    pub fn build(&self) -> Result<Network> {
        self.disorder.validate()?;
        let (graph, skipped, site) = match self.disorder {
            DisorderSpec::None => (build_ring(self.ring), 0, None),
            DisorderSpec::Exponential { lambda } => (
                build_ring(self.ring),
                0,
                Some(exponential_disorder(self.ring.n, lambda)?),
            ),
            DisorderSpec::WattsStrogatz { p, seed } => {
                let r = ws_rewire(self.ring, p, seed)?;
                (r.graph, r.skipped, None)
            }
        };
        let hamiltonian = assemble_hamiltonian(&graph, site.as_ref())?;
        Ok(Network {
            spec: *self,
            graph,
            hamiltonian,
            skipped_rewirings: skipped,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: usize, m: usize) -> RingSpec {
        RingSpec::new(n, m).unwrap()
    }

    #[test]
    fn ring_spec_bounds() {
        assert!(RingSpec::new(2, 1).is_err());
        assert!(RingSpec::new(5, 0).is_err());
        assert!(RingSpec::new(5, 3).is_err());
        assert!(RingSpec::new(6, 3).is_err());
        assert!(RingSpec::new(7, 3).is_ok());
    }

    #[test]
    fn four_cycle() {
        let g = build_ring(ring(4, 1));
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(0, 1), (0, 3), (1, 2), (2, 3)]);
    }

    #[test]
    fn k5_from_ring() {
        let g = build_ring(ring(5, 2));
        assert_eq!(g.edge_count(), 10);
        for u in 0..5 {
            for v in u + 1..5 {
                assert!(g.has_edge(u, v));
            }
        }
        let h = laplacian(&g);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(h.get(i, j), if i == j { 4.0 } else { -1.0 });
            }
        }
    }

    #[test]
    fn ring_50_3_counts() {
        let g = build_ring(ring(50, 3));
        assert_eq!(g.edge_count(), 150);
        assert!(g.degrees().iter().all(|&d| d == 6));
    }

    #[test]
    fn four_cycle_laplacian() {
        let h = laplacian(&build_ring(ring(4, 1)));
        let expected = [
            2.0, -1.0, 0.0, -1.0, //
            -1.0, 2.0, -1.0, 0.0, //
            0.0, -1.0, 2.0, -1.0, //
            -1.0, 0.0, -1.0, 2.0,
        ];
        assert_eq!(h.as_row_major(), &expected);
    }

    #[test]
    fn laplacian_action_on_basis_state() {
        let (n, m) = (50, 3);
        let h = laplacian(&build_ring(ring(n, m)));
        for j in [0, 1, 25, 48, 49] {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let got = h.apply(&e);
            let mut want = vec![0.0; n];
            want[j] = 2.0 * m as f64;
            for z in 1..=m {
                want[(j + z) % n] -= 1.0;
                want[(j + n - z) % n] -= 1.0;
            }
            assert_eq!(got, want);
        }
    }

    #[test]
    fn p_zero_is_identity() {
        for seed in 0..5 {
            let spec = ring(30, 2);
            let r = ws_rewire(spec, 0.0, seed).unwrap();
            assert_eq!(r.graph, build_ring(spec));
            assert_eq!(r.skipped, 0);
        }
    }

    #[test]
    fn full_rewiring_is_seed_deterministic() {
        let spec = ring(50, 1);
        let a = ws_rewire(spec, 1.0, 7).unwrap();
        let b = ws_rewire(spec, 1.0, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.graph.edge_count(), 50);
        let c = ws_rewire(spec, 1.0, 8).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn rewiring_sweep_keeps_simple_graph() {
        let spec = ring(50, 2);
        for seed in 0..200 {
            let g = ws_rewire(spec, 0.5, seed).unwrap().graph;
            assert_eq!(g.edge_count(), 100);
            assert!(g.edges().all(|(u, v)| u < v && v < 50));
        }
    }

    #[test]
    fn saturated_nodes_skip() {
        // K5: every node already touches all others.
        let r = ws_rewire(ring(5, 2), 1.0, 3).unwrap();
        assert_eq!(r.graph, build_ring(ring(5, 2)));
        assert_eq!(r.skipped, 10);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(ws_rewire(ring(10, 1), 1.5, 0).is_err());
        assert!(ws_rewire(ring(10, 1), -0.1, 0).is_err());
    }

    #[test]
    fn exponential_disorder_values() {
        let d = exponential_disorder(7, 0.0).unwrap();
        assert!(d.0.iter().all(|&v| v == 1.0));
        // 0.5 · 2π · 2/4 = π/2
        let d = exponential_disorder(4, 0.5).unwrap();
        assert!((d.0[2] - 4.810_477_380_965_351).abs() < 1e-12);
        let d = exponential_disorder(4, 1.0).unwrap();
        assert!((d.0[2] - 23.140_692_632_779_27).abs() < 1e-12);
        let d = exponential_disorder(50, 0.8).unwrap();
        let want = (0.8f64 * 2.0 * PI * 49.0 / 50.0).exp();
        assert!((d.0[49] - want).abs() < 1e-12 * want);
        assert!(exponential_disorder(4, -1.0).is_err());
    }

    #[test]
    fn assemble_adds_diagonal() {
        let spec = ring(50, 1);
        let g = build_ring(spec);
        assert_eq!(assemble_hamiltonian(&g, None).unwrap(), laplacian(&g));
        let d = exponential_disorder(50, 0.5).unwrap();
        let h = assemble_hamiltonian(&g, Some(&d)).unwrap();
        for j in 0..50 {
            let want = 2.0 + (0.5 * 2.0 * PI * j as f64 / 50.0).exp();
            assert_eq!(h.get(j, j), want);
        }
        assert!(h.is_symmetric());
        let short = exponential_disorder(10, 0.5).unwrap();
        assert!(matches!(
            assemble_hamiltonian(&g, Some(&short)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ws_diagonal_is_degree() {
        let g = ws_rewire(ring(40, 2), 0.4, 11).unwrap().graph;
        let h = assemble_hamiltonian(&g, None).unwrap();
        for (i, d) in g.degrees().into_iter().enumerate() {
            assert_eq!(h.get(i, i), d as f64);
        }
        assert!(h.row_sums().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(build_ring(ring(9, 1)).is_connected());
    }
}
