//! Similarity indices for link prediction: CN, RA, AA, LP, and Katz,
//! scored over every node pair of a graph and split by connection class.

use crate::graph::Graph;
use crate::pmf::Pmf;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default free parameter of the local-path index.
pub const DEFAULT_PHI_LP: f64 = 0.02;
/// Default attenuation of the Katz index.
pub const DEFAULT_PHI_KATZ: f64 = 0.01;

const KATZ_TOL: f64 = 1e-10;
const KATZ_MAX_ITER: usize = 20_000;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("phi must be nonnegative, got {0}")]
    NegativePhi(f64),
    #[error("Katz iteration diverged (phi at or beyond 1/spectral radius)")]
    KatzDiverged,
    #[error("Katz iteration failed to reach tolerance")]
    KatzStalled,
    #[error("unknown index `{0}`")]
    UnknownIndex(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Cn,
    Ra,
    Aa,
    Lp,
    Katz,
}

impl IndexKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IndexKind::Cn => "cn",
            IndexKind::Ra => "ra",
            IndexKind::Aa => "aa",
            IndexKind::Lp => "lp",
            IndexKind::Katz => "katz",
        }
    }

    pub fn all() -> [IndexKind; 5] {
        [
            IndexKind::Cn,
            IndexKind::Ra,
            IndexKind::Aa,
            IndexKind::Lp,
            IndexKind::Katz,
        ]
    }

    /// Indices parameterized by φ (the rest ignore it).
    pub fn uses_phi(&self) -> bool {
        matches!(self, IndexKind::Lp | IndexKind::Katz)
    }

    pub fn default_phi(&self) -> Option<f64> {
        match self {
            IndexKind::Lp => Some(DEFAULT_PHI_LP),
            IndexKind::Katz => Some(DEFAULT_PHI_KATZ),
            _ => None,
        }
    }
}

impl std::fmt::Display for IndexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for IndexKind {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cn" => Ok(IndexKind::Cn),
            "ra" => Ok(IndexKind::Ra),
            "aa" => Ok(IndexKind::Aa),
            "lp" => Ok(IndexKind::Lp),
            "katz" => Ok(IndexKind::Katz),
            other => Err(IndexError::UnknownIndex(other.to_string())),
        }
    }
}

/// Number of common neighbors of `u` and `v`.
pub fn score_cn(graph: &Graph, u: u32, v: u32) -> usize {
    graph.pair_cns(u, v)
}

/// Resource-allocation score: Σ_z 1/k_z over common neighbors z.
pub fn score_ra(graph: &Graph, u: u32, v: u32) -> f64 {
    common_neighbor_sum(graph, u, v, |k| 1.0 / k as f64)
}

/// Adamic–Adar score: Σ_z 1/ln k_z. A common neighbor always has degree
/// at least 2, so the logarithm never vanishes.
pub fn score_aa(graph: &Graph, u: u32, v: u32) -> f64 {
    common_neighbor_sum(graph, u, v, |k| 1.0 / (k as f64).ln())
}

fn common_neighbor_sum(graph: &Graph, u: u32, v: u32, weight: impl Fn(usize) -> f64) -> f64 {
    let (mut a, mut b) = (graph.neighbors(u), graph.neighbors(v));
    let mut sum = 0.0;
    while let (Some(&x), Some(&y)) = (a.first(), b.first()) {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => a = &a[1..],
            std::cmp::Ordering::Greater => b = &b[1..],
            std::cmp::Ordering::Equal => {
                sum += weight(graph.degree(x));
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairScore {
    pub u: u32,
    pub v: u32,
    pub score: f64,
}

/// Similarity scores of every unordered node pair, partitioned into
/// connected (linked) and unconnected pairs. Both lists are sorted by
/// (u, v) with u < v.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    pub index: IndexKind,
    pub phi: Option<f64>,
    connected: Vec<PairScore>,
    unconnected: Vec<PairScore>,
}

impl ScoreTable {
    /// Scores all pairs. `phi` overrides the index default; it must be
    /// nonnegative and, for Katz, below 1/ρ(A) or the solve reports
    /// divergence.
    pub fn compute(graph: &Graph, index: IndexKind, phi: Option<f64>) -> Result<Self, IndexError> {
        let phi = match (index.uses_phi(), phi) {
            (true, Some(p)) if p < 0.0 => return Err(IndexError::NegativePhi(p)),
            (true, Some(p)) => Some(p),
            (true, None) => index.default_phi(),
            (false, _) => None,
        };
        let n = graph.node_count() as u32;
        let rows: Result<Vec<Vec<PairScore>>, IndexError> = (0..n)
            .into_par_iter()
            .map(|i| {
                let row = score_row(graph, index, phi, i)?;
                Ok((i + 1..n)
                    .map(|j| PairScore {
                        u: i,
                        v: j,
                        score: row[j as usize],
                    })
                    .collect())
            })
            .collect();
        let mut connected = Vec::with_capacity(graph.edge_count());
        let mut unconnected = Vec::with_capacity(graph.pair_count() - graph.edge_count());
        for entry in rows?.into_iter().flatten() {
            if graph.has_edge(entry.u, entry.v) {
                connected.push(entry);
            } else {
                unconnected.push(entry);
            }
        }
        Ok(Self {
            index,
            phi,
            connected,
            unconnected,
        })
    }

    pub fn connected(&self) -> &[PairScore] {
        &self.connected
    }

    pub fn unconnected(&self) -> &[PairScore] {
        &self.unconnected
    }

    /// Score of one pair, found by binary search in either class list.
    pub fn score_of(&self, u: u32, v: u32) -> Option<f64> {
        let key = if u < v { (u, v) } else { (v, u) };
        for list in [&self.unconnected, &self.connected] {
            if let Ok(pos) = list.binary_search_by(|e| (e.u, e.v).cmp(&key)) {
                return Some(list[pos].score);
            }
        }
        None
    }
}

/// Scores from source `i` to every node, as one dense row.
fn score_row(
    graph: &Graph,
    index: IndexKind,
    phi: Option<f64>,
    i: u32,
) -> Result<Vec<f64>, IndexError> {
    match index {
        IndexKind::Cn => Ok(neighbor_weighted_row(graph, i, |_| 1.0)),
        IndexKind::Ra => Ok(neighbor_weighted_row(graph, i, |k| 1.0 / k as f64)),
        IndexKind::Aa => Ok(neighbor_weighted_row(graph, i, |k| 1.0 / (k as f64).ln())),
        IndexKind::Lp => Ok(lp_row(graph, phi.unwrap_or(DEFAULT_PHI_LP), i)),
        IndexKind::Katz => katz_row(graph, phi.unwrap_or(DEFAULT_PHI_KATZ), i),
    }
}

/// Row of Σ_{z ∈ N(i) ∩ N(j)} weight(k_z), by spreading each neighbor's
/// weight to its own neighborhood.
fn neighbor_weighted_row(graph: &Graph, i: u32, weight: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut row = vec![0.0; graph.node_count()];
    for &z in graph.neighbors(i) {
        let w = weight(graph.degree(z));
        for &j in graph.neighbors(z) {
            row[j as usize] += w;
        }
    }
    // z ∈ N(i) with j ∈ N(z) is exactly a common neighbor of i and j
    // (z = i or z = j would need a self-loop), so only the diagonal — hit
    // once per neighbor of i — needs clearing.
    row[i as usize] = 0.0;
    row
}

/// (A² + φ·A³) e_i via repeated sparse adjacency products.
fn lp_row(graph: &Graph, phi: f64, i: u32) -> Vec<f64> {
    let n = graph.node_count();
    let mut x1 = vec![0.0; n];
    for &z in graph.neighbors(i) {
        x1[z as usize] = 1.0;
    }
    let x2 = spmv(graph, &x1);
    let x3 = spmv(graph, &x2);
    let mut row: Vec<f64> = x2.iter().zip(&x3).map(|(&a, &b)| a + phi * b).collect();
    row[i as usize] = 0.0;
    row
}

fn spmv(graph: &Graph, x: &[f64]) -> Vec<f64> {
    let n = graph.node_count();
    let mut y = vec![0.0; n];
    for v in 0..n as u32 {
        let mut sum = 0.0;
        for &z in graph.neighbors(v) {
            sum += x[z as usize];
        }
        y[v as usize] = sum;
    }
    y
}

/// Katz row Σ_{l≥1} φ^l (A^l)_{i·}, solved as the fixed point
/// y = φ A (e_i + y). Converges iff φ ρ(A) < 1.
pub(crate) fn katz_row(graph: &Graph, phi: f64, i: u32) -> Result<Vec<f64>, IndexError> {
    let n = graph.node_count();
    let mut base = vec![0.0; n];
    base[i as usize] = 1.0;
    let mut y = vec![0.0; n];
    let mut prev_residual = f64::INFINITY;
    let mut growth_streak = 0u32;
    for _ in 0..KATZ_MAX_ITER {
        let mut input = base.clone();
        for (slot, &yi) in input.iter_mut().zip(&y) {
            *slot += yi;
        }
        let mut next = spmv(graph, &input);
        for slot in next.iter_mut() {
            *slot *= phi;
        }
        let residual = y
            .iter()
            .zip(&next)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        y = next;
        if residual <= KATZ_TOL {
            y[i as usize] = 0.0;
            return Ok(y);
        }
        if residual > prev_residual {
            growth_streak += 1;
            if growth_streak >= 12 || residual > 1e9 {
                return Err(IndexError::KatzDiverged);
            }
        } else {
            growth_streak = 0;
        }
        prev_residual = residual;
    }
    Err(IndexError::KatzStalled)
}

/// Removes the direct-link contribution from a connected-pair Katz score
/// distribution by shifting its support down by φ, for theoretical
/// evaluation against unconnected pairs (whose scores have no such term).
pub fn katz_connected_shift(p_c: &Pmf, phi: f64) -> Pmf {
    p_c.shift(-phi)
}
