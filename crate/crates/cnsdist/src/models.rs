//! Analytic connection-probability providers Γ(i,j) and matching samplers.
//!
//! Six models share one two-parameter form: nodes on a ring connect with
//! probability `eta` inside label distance `m` and `alpha` outside it.
//! The regular ring lattice (RRL), modified ring lattice (MRL),
//! Erdős–Rényi (ER), Watts–Strogatz (WS), and Newman–Watts (NW) models are
//! specializations of this unified family; Barabási–Albert (BA) carries an
//! explicit probability matrix built from its growth process.

use crate::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("node count {n} too small for ring range m={m}; need n >= 4m+2")]
    RingTooSmall { n: u32, m: u32 },
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("mean degree {0} outside [0, n-1]")]
    MeanDegreeOutOfRange(f64),
    #[error("BA parameters need 1 <= m <= m0 < n, got m={m}, m0={m0}, n={n}")]
    BadBaParameters { n: u32, m: u32, m0: u32 },
    #[error("ring range m must be at least 1 for {0}")]
    ZeroRange(ModelKind),
    #[error("BA selection-count solve failed to converge at node {node}")]
    NoConvergence { node: u32 },
    #[error("unknown model kind `{0}`")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Rrl,
    Mrl,
    Er,
    Ws,
    Nw,
    Unified,
    Ba,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Rrl => "rrl",
            ModelKind::Mrl => "mrl",
            ModelKind::Er => "er",
            ModelKind::Ws => "ws",
            ModelKind::Nw => "nw",
            ModelKind::Unified => "unified",
            ModelKind::Ba => "ba",
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rrl" => Ok(ModelKind::Rrl),
            "mrl" => Ok(ModelKind::Mrl),
            "er" => Ok(ModelKind::Er),
            "ws" => Ok(ModelKind::Ws),
            "nw" => Ok(ModelKind::Nw),
            "unified" => Ok(ModelKind::Unified),
            "ba" => Ok(ModelKind::Ba),
            other => Err(ModelError::UnknownKind(other.to_string())),
        }
    }
}

/// Ring-based model: Γ(i,j) = `eta` when the circular label distance
/// min(|i−j|, n−|i−j|) is at most `m`, else `alpha`.
///
/// `p` keeps the native parameter of the specialization that built the
/// model (rewiring/removal/addition probability), which the WS sampler
/// and descriptor round-trips need.
#[derive(Debug, Clone, PartialEq)]
pub struct RingModel {
    kind: ModelKind,
    n: u32,
    m: u32,
    p: Option<f64>,
    eta: f64,
    alpha: f64,
}

impl RingModel {
    pub fn unified(n: u32, m: u32, eta: f64, alpha: f64) -> Result<Self, ModelError> {
        Self::build(ModelKind::Unified, n, m, None, eta, alpha)
    }

    /// Regular ring lattice: every node linked to its `m` nearest
    /// neighbors on each side.
    pub fn rrl(n: u32, m: u32) -> Result<Self, ModelError> {
        Self::require_range(ModelKind::Rrl, m)?;
        Self::build(ModelKind::Rrl, n, m, None, 1.0, 0.0)
    }

    /// Modified ring lattice: RRL links kept with probability `1 - p`.
    pub fn mrl(n: u32, m: u32, p: f64) -> Result<Self, ModelError> {
        Self::require_range(ModelKind::Mrl, m)?;
        check_prob(p)?;
        Self::build(ModelKind::Mrl, n, m, Some(p), 1.0 - p, 0.0)
    }

    /// Erdős–Rényi: every pair linked with probability `p`.
    pub fn er(n: u32, p: f64) -> Result<Self, ModelError> {
        check_prob(p)?;
        Self::build(ModelKind::Er, n, 0, Some(p), p, p)
    }

    /// Erdős–Rényi parameterized by mean degree ⟨k⟩ = p (n−1).
    pub fn er_from_mean_degree(n: u32, mean_degree: f64) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::RingTooSmall { n, m: 0 });
        }
        let p = mean_degree / f64::from(n - 1);
        if !(0.0..=1.0).contains(&p) {
            return Err(ModelError::MeanDegreeOutOfRange(mean_degree));
        }
        Self::build(ModelKind::Er, n, 0, Some(p), p, p)
    }

    /// Watts–Strogatz: each RRL link rewired with probability `p`. Near
    /// pairs keep probability 1−p; the rewired stubs spread uniformly over
    /// the n−1−2m far candidates, so expected link count is conserved.
    pub fn ws(n: u32, m: u32, p: f64) -> Result<Self, ModelError> {
        Self::require_range(ModelKind::Ws, m)?;
        check_prob(p)?;
        let far = far_prob(n, m, p)?;
        Self::build(ModelKind::Ws, n, m, Some(p), 1.0 - p, far)
    }

    /// Newman–Watts: RRL plus shortcuts added with probability `p` per
    /// original link; near links are never removed.
    pub fn nw(n: u32, m: u32, p: f64) -> Result<Self, ModelError> {
        Self::require_range(ModelKind::Nw, m)?;
        check_prob(p)?;
        let far = far_prob(n, m, p)?;
        Self::build(ModelKind::Nw, n, m, Some(p), 1.0, far)
    }

    fn require_range(kind: ModelKind, m: u32) -> Result<(), ModelError> {
        if m == 0 {
            Err(ModelError::ZeroRange(kind))
        } else {
            Ok(())
        }
    }

    fn build(
        kind: ModelKind,
        n: u32,
        m: u32,
        p: Option<f64>,
        eta: f64,
        alpha: f64,
    ) -> Result<Self, ModelError> {
        if n < 4 * m + 2 || n < 2 {
            return Err(ModelError::RingTooSmall { n, m });
        }
        check_prob(eta)?;
        check_prob(alpha)?;
        Ok(Self {
            kind,
            n,
            m,
            p,
            eta,
            alpha,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn native_p(&self) -> Option<f64> {
        self.p
    }

    /// Circular label distance min(|i−j|, n−|i−j|).
    pub fn ring_distance(&self, i: u32, j: u32) -> u32 {
        let direct = i.abs_diff(j);
        direct.min(self.n - direct)
    }

    pub fn gamma(&self, i: u32, j: u32) -> f64 {
        if i == j {
            return 0.0;
        }
        self.gamma_at_distance(self.ring_distance(i, j))
    }

    pub fn gamma_at_distance(&self, d: u32) -> f64 {
        if d == 0 {
            0.0
        } else if d <= self.m {
            self.eta
        } else {
            self.alpha
        }
    }

    /// Number of candidate nodes within distance `m` of **both** members
    /// of a pair at ring distance `d` (the pair nodes themselves never
    /// count). For d ≤ m the shared window contains both pair nodes, so
    /// two slots are lost; just past m it contains neither, which makes
    /// the count jump from m−1 back up to m.
    pub fn overlap_count(&self, d: u32) -> u32 {
        let m = self.m;
        if d == 0 || m == 0 {
            0
        } else if d <= m {
            2 * m - 1 - d
        } else if d <= 2 * m {
            2 * m + 1 - d
        } else {
            0
        }
    }

    /// Number of candidates within distance `m` of exactly one pair member.
    pub fn one_side_count(&self, d: u32) -> u32 {
        let m = self.m;
        if d == 0 || m == 0 {
            0
        } else if d <= m {
            2 * d
        } else if d <= 2 * m {
            2 * d - 2
        } else {
            4 * m
        }
    }

    /// Expected degree, identical for every node: 2mη + (n−1−2m)α.
    pub fn expected_degree(&self) -> f64 {
        let near = f64::from(2 * self.m);
        near * self.eta + (f64::from(self.n - 1) - near) * self.alpha
    }

    /// Distinct ring distances 1..=⌊n/2⌋ with the number of node pairs at
    /// each: n per distance, except n/2 at the antipode when n is even.
    pub fn distance_pair_counts(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        let n = self.n;
        let half = n / 2;
        (1..=half).map(move |d| {
            let pairs = if n.is_multiple_of(2) && d == half {
                u64::from(n) / 2
            } else {
                u64::from(n)
            };
            (d, pairs)
        })
    }
}

fn check_prob(p: f64) -> Result<(), ModelError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(ModelError::ProbabilityOutOfRange(p))
    }
}

fn far_prob(n: u32, m: u32, p: f64) -> Result<f64, ModelError> {
    if n < 4 * m + 2 {
        return Err(ModelError::RingTooSmall { n, m });
    }
    let far_candidates = f64::from(n - 1 - 2 * m);
    let alpha = 2.0 * f64::from(m) * p / far_candidates;
    check_prob(alpha)?;
    Ok(alpha)
}

/// Barabási–Albert connection probabilities from the growth process.
///
/// The first `m0` nodes form a clique. Each arriving node `i` implicitly
/// performs `t_i` preferential selections, where `t_i` solves
/// Σ_{j<i} [1 − (1 − p_j)^t] = m with p_j the degree share of node j.
/// Γ(i,j) is each candidate's resulting selection probability; fractional
/// degrees accumulate so later arrivals see the expected-degree sequence.
#[derive(Debug, Clone)]
pub struct BaModel {
    n: u32,
    m: u32,
    m0: u32,
    /// Lower triangle, row-major: entry (i, j) for j < i at i(i−1)/2 + j.
    tri: Vec<f64>,
    max_residual: f64,
}

const BA_TOL: f64 = 1e-10;
const BA_MAX_ITER: u32 = 200;

impl BaModel {
    pub fn new(n: u32, m: u32, m0: u32) -> Result<Self, ModelError> {
        if m < 1 || m > m0 || m0 >= n {
            return Err(ModelError::BadBaParameters { n, m, m0 });
        }
        let nn = n as usize;
        let mut tri = vec![0.0f64; nn * (nn - 1) / 2];
        let mut degree = vec![0.0f64; nn];
        for i in 0..m0 as usize {
            for j in 0..i {
                tri[i * (i - 1) / 2 + j] = 1.0;
            }
            degree[i] = f64::from(m0 - 1);
        }
        let mut total_degree = f64::from(m0) * f64::from(m0 - 1);
        let mut max_residual = 0.0f64;
        let target = f64::from(m);
        for i in m0 as usize..nn {
            let shares: Vec<f64> = degree[..i].iter().map(|k| k / total_degree).collect();
            let row = &mut tri[i * (i - 1) / 2..i * (i - 1) / 2 + i];
            let row_sum = match solve_selection_count(&shares, target, i as u32)? {
                Some(t) => {
                    let mut sum = 0.0;
                    for (slot, &p) in row.iter_mut().zip(&shares) {
                        *slot = 1.0 - (1.0 - p).powf(t);
                        sum += *slot;
                    }
                    sum
                }
                None => {
                    // Even infinitely many selections cannot reach m
                    // distinct links; cap every probability at 1.
                    for slot in row.iter_mut() {
                        *slot = 1.0;
                    }
                    i as f64
                }
            };
            max_residual = max_residual.max((row_sum - target).abs());
            for (j, &g) in row.iter().enumerate() {
                degree[j] += g;
            }
            degree[i] = row_sum;
            total_degree += 2.0 * row_sum;
        }
        Ok(Self {
            n,
            m,
            m0,
            tri,
            max_residual,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn m0(&self) -> u32 {
        self.m0
    }

    /// Largest deviation of any arriving node's ΣΓ from m.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    pub fn gamma(&self, i: u32, j: u32) -> f64 {
        if i == j {
            return 0.0;
        }
        let (hi, lo) = if i > j { (i as usize, j as usize) } else { (j as usize, i as usize) };
        self.tri[hi * (hi - 1) / 2 + lo]
    }

    pub fn row_sum_existing(&self, i: u32) -> f64 {
        let i = i as usize;
        self.tri[i * (i - 1) / 2..i * (i - 1) / 2 + i].iter().sum()
    }
}

/// Root of Σ_j [1 − (1 − p_j)^t] = m, strictly increasing in t.
/// Returns `None` when the supremum (number of positive shares) is at
/// most m, in which case the caller caps probabilities at 1.
fn solve_selection_count(
    shares: &[f64],
    target: f64,
    node: u32,
) -> Result<Option<f64>, ModelError> {
    let reachable = shares.iter().filter(|&&p| p > 0.0).count() as f64;
    if reachable <= target {
        return Ok(None);
    }
    let log_miss: Vec<f64> = shares
        .iter()
        .map(|&p| if p >= 1.0 { f64::NEG_INFINITY } else { (1.0 - p).ln() })
        .collect();
    let excess = |t: f64| -> f64 {
        let sum: f64 = log_miss
            .iter()
            .map(|&l| {
                if l == f64::NEG_INFINITY {
                    1.0
                } else {
                    1.0 - (t * l).exp()
                }
            })
            .sum();
        sum - target
    };
    // 1−(1−p)^t ≤ tp gives Σ ≤ t at t = m, so the root is never below m.
    let mut lo = target;
    if excess(lo) >= 0.0 {
        return Ok(Some(lo));
    }
    let mut hi = 64.0 * target;
    let mut guard = 0;
    while excess(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return Ok(None);
        }
    }
    for _ in 0..BA_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        let g = excess(mid);
        if g.abs() <= BA_TOL {
            return Ok(Some(mid));
        }
        if g < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            return Ok(Some(0.5 * (lo + hi)));
        }
    }
    Err(ModelError::NoConvergence { node })
}

/// A connection-probability provider for one of the supported models.
#[derive(Debug, Clone)]
pub enum ProbModel {
    Ring(RingModel),
    Ba(BaModel),
}

impl ProbModel {
    pub fn n(&self) -> u32 {
        match self {
            ProbModel::Ring(r) => r.n(),
            ProbModel::Ba(b) => b.n(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ProbModel::Ring(r) => r.kind(),
            ProbModel::Ba(_) => ModelKind::Ba,
        }
    }

    pub fn gamma(&self, i: u32, j: u32) -> f64 {
        match self {
            ProbModel::Ring(r) => r.gamma(i, j),
            ProbModel::Ba(b) => b.gamma(i, j),
        }
    }

    /// The ring view when Γ depends only on ring distance.
    pub fn as_ring(&self) -> Option<&RingModel> {
        match self {
            ProbModel::Ring(r) => Some(r),
            ProbModel::Ba(_) => None,
        }
    }

    /// Σ_{i<j} Γ(i,j): the expected number of links.
    pub fn expected_link_count(&self) -> f64 {
        match self {
            ProbModel::Ring(r) => f64::from(r.n()) * r.expected_degree() / 2.0,
            ProbModel::Ba(b) => b.tri.iter().sum(),
        }
    }

    pub fn expected_mean_degree(&self) -> f64 {
        2.0 * self.expected_link_count() / f64::from(self.n())
    }

    /// One random realization. RRL is deterministic; WS uses constructive
    /// rewiring of the lattice; every other kind draws independent
    /// Bernoulli(Γ(i,j)) links with a counter-based generator keyed by
    /// (seed, i, j), so results do not depend on traversal or thread
    /// scheduling.
    pub fn sample(&self, seed: u64) -> Graph {
        match self {
            ProbModel::Ring(r) if r.kind() == ModelKind::Rrl => sample_lattice(r.n(), r.m()),
            ProbModel::Ring(r) if r.kind() == ModelKind::Ws => {
                sample_ws_rewired(r.n(), r.m(), r.native_p().unwrap_or(0.0), seed)
            }
            _ => sample_bernoulli(self, seed),
        }
    }
}

impl From<RingModel> for ProbModel {
    fn from(r: RingModel) -> Self {
        ProbModel::Ring(r)
    }
}

impl From<BaModel> for ProbModel {
    fn from(b: BaModel) -> Self {
        ProbModel::Ba(b)
    }
}

fn sample_lattice(n: u32, m: u32) -> Graph {
    let mut edges = Vec::with_capacity(n as usize * m as usize);
    for i in 0..n {
        for d in 1..=m {
            edges.push((i, (i + d) % n));
        }
    }
    Graph::from_edges(n as usize, edges).expect("lattice edges are in range")
}

fn sample_bernoulli(model: &ProbModel, seed: u64) -> Graph {
    let n = model.n();
    let edges: Vec<(u32, u32)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            (i + 1..n).filter_map(move |j| {
                if pair_uniform(seed, i, j) < model.gamma(i, j) {
                    Some((i, j))
                } else {
                    None
                }
            })
        })
        .collect();
    Graph::from_edges(n as usize, edges).expect("sampled edges are in range")
}

/// Watts–Strogatz rewiring: walk the lattice links (i, i+d) in canonical
/// order; with probability `p` move the far endpoint to a uniformly
/// chosen node that is neither `i` nor already adjacent to it.
fn sample_ws_rewired(n: u32, m: u32, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adj: Vec<std::collections::BTreeSet<u32>> =
        vec![std::collections::BTreeSet::new(); n as usize];
    for i in 0..n {
        for d in 1..=m {
            let j = (i + d) % n;
            adj[i as usize].insert(j);
            adj[j as usize].insert(i);
        }
    }
    for i in 0..n {
        for d in 1..=m {
            let j = (i + d) % n;
            if !rng.random_bool(p) {
                continue;
            }
            if adj[i as usize].len() as u32 >= n - 1 {
                continue; // saturated hub: no eligible target
            }
            let t = loop {
                let candidate = rng.random_range(0..n);
                if candidate != i && !adj[i as usize].contains(&candidate) {
                    break candidate;
                }
            };
            adj[i as usize].remove(&j);
            adj[j as usize].remove(&i);
            adj[i as usize].insert(t);
            adj[t as usize].insert(i);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for &j in &adj[i as usize] {
            if j > i {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n as usize, edges).expect("rewired edges are in range")
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic uniform in [0, 1) for an unordered pair under a seed.
pub(crate) fn pair_uniform(seed: u64, i: u32, j: u32) -> f64 {
    let pair = (u64::from(i) << 32) | u64::from(j);
    let bits = splitmix64(seed ^ splitmix64(pair));
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Derives independent sub-seeds, e.g. one per repetition of an
/// experiment, so parallel runs stay reproducible.
pub(crate) fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0x0123_4567_89AB_CDEF)))
}

/// Maximum-likelihood power-law exponent for the tail `degrees >= k_min`,
/// using the standard discrete approximation
/// 1 + n / Σ ln(k / (k_min − 1/2)).
pub fn fit_power_law_exponent(degrees: &[usize], k_min: usize) -> Option<f64> {
    let shift = k_min as f64 - 0.5;
    let mut count = 0usize;
    let mut log_sum = 0.0;
    for &k in degrees {
        if k >= k_min {
            count += 1;
            log_sum += (k as f64 / shift).ln();
        }
    }
    if count == 0 || log_sum <= 0.0 {
        None
    } else {
        Some(1.0 + count as f64 / log_sum)
    }
}
