//! CNS distributions: analytic (from a model's Γ via generating functions)
//! and empirical (by counting on a concrete graph), split into connected /
//! unconnected / all classes.
//!
//! For a node set V_q, each outside node t is a common neighbor with
//! probability p_t = Π_{v∈V_q} Γ(v,t), independently across t, so the CNS
//! count follows the Poisson binomial over those p_t. Class-conditional
//! distributions weight each set's distribution by the probability the set
//! is internally connected (for pairs, Γ_ij itself).

use crate::graph::{Graph, NodeSet};
use crate::models::{ProbModel, RingModel};
use crate::pmf::{poisson_binomial_trimmed, DistError, Pmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Per-candidate probabilities below this are dropped from the
/// generating-function product.
pub const FACTOR_DROP_EPS: f64 = 1e-12;
/// Relative tail threshold for trimming running coefficients.
const TAIL_EPS: f64 = 1e-18;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("node {0} outside model range")]
    NodeOutOfRange(u32),
    #[error("class split needs sets of size q >= 2, got {0}")]
    SetTooSmall(usize),
    #[error("set size {q} exceeds node count {n}")]
    SetTooLarge { q: usize, n: u32 },
    #[error("exact class distributions support q = 2 only (got q = {0}); use sampled mode")]
    ExactNeedsPairs(usize),
    #[error("sample count must be positive")]
    ZeroSamples,
    #[error("mean degree {0} outside [0, n-1]")]
    MeanDegreeOutOfRange(f64),
    #[error("q must be at least 1")]
    ZeroSetSize,
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// CNS distributions conditioned on the pair/set connection class.
///
/// `p_c` or `p_d` is `None` when its class has zero weight (e.g. no
/// unconnected pairs in a complete graph). The three distributions obey
/// the mixture identity p_a = χ_c p_c + (1−χ_c) p_d.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCondDistributions {
    pub chi_c: f64,
    pub p_c: Option<Pmf>,
    pub p_d: Option<Pmf>,
    pub p_a: Pmf,
}

impl ClassCondDistributions {
    /// max_w |p_a(w) − χ_c p_c(w) − (1−χ_c) p_d(w)| over the union support.
    pub fn mixture_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (w, pa) in self.p_a.iter() {
            let pc = self.p_c.as_ref().map_or(0.0, |p| p.prob_of(w));
            let pd = self.p_d.as_ref().map_or(0.0, |p| p.prob_of(w));
            let mix = self.chi_c * pc + (1.0 - self.chi_c) * pd;
            worst = worst.max((pa - mix).abs());
        }
        for side in [&self.p_c, &self.p_d].into_iter().flatten() {
            for (w, _) in side.iter() {
                if self.p_a.prob_of(w) == 0.0 {
                    let pc = self.p_c.as_ref().map_or(0.0, |p| p.prob_of(w));
                    let pd = self.p_d.as_ref().map_or(0.0, |p| p.prob_of(w));
                    worst = worst.max((self.chi_c * pc + (1.0 - self.chi_c) * pd).abs());
                }
            }
        }
        worst
    }
}

/// CNS distribution of one node set under a model: Poisson binomial over
/// p_t = Π_{v∈set} Γ(v,t) for t outside the set. Factors below
/// [`FACTOR_DROP_EPS`] are dropped.
pub fn set_cns_distribution(model: &ProbModel, set: &NodeSet) -> Result<Pmf, EngineError> {
    let n = model.n();
    for &v in set.members() {
        if v >= n {
            return Err(EngineError::NodeOutOfRange(v));
        }
    }
    let factors = candidate_probs(model, set.members());
    Ok(poisson_binomial_trimmed(&factors, TAIL_EPS)?)
}

fn candidate_probs(model: &ProbModel, members: &[u32]) -> Vec<f64> {
    let n = model.n();
    let mut factors = Vec::with_capacity(n as usize - members.len());
    for t in 0..n {
        if members.contains(&t) {
            continue;
        }
        let mut p = 1.0;
        for &v in members {
            p *= model.gamma(v, t);
            if p < FACTOR_DROP_EPS {
                break;
            }
        }
        if p >= FACTOR_DROP_EPS {
            factors.push(p);
        }
    }
    factors
}

/// Degree distribution of the model: the q=1 case of the CNS family,
/// averaged over nodes (all nodes are alike in ring models).
pub fn degree_distribution(model: &ProbModel) -> Result<Pmf, EngineError> {
    match model.as_ring() {
        Some(_) => {
            let set = NodeSet::new(vec![0]).expect("singleton set");
            set_cns_distribution(model, &set)
        }
        None => {
            let n = model.n();
            let per_node: Vec<Pmf> = (0..n)
                .into_par_iter()
                .map(|v| {
                    let set = NodeSet::new(vec![v]).expect("singleton set");
                    set_cns_distribution(model, &set).expect("validated node")
                })
                .collect();
            let mut acc = DenseAccum::new();
            for pmf in &per_node {
                acc.add(1.0, 0.0, pmf);
            }
            Ok(dense_pmf(&acc.a, f64::from(n))?)
        }
    }
}

/// How [`class_distributions_analytic`] traverses node sets.
#[derive(Debug, Clone, Copy)]
pub enum AnalyticMode {
    /// Enumerate every node pair (q = 2). Translation-invariant models
    /// collapse to one computation per distinct ring distance.
    Exact,
    /// Uniform Monte Carlo over node sets; required for q > 2.
    Sampled { sample_count: usize, seed: u64 },
}

/// Class-conditional CNS distributions of a model.
///
/// A set's connected-class weight is the probability its members are
/// fully interlinked: Γ_ij for pairs, Π_{u<v} Γ_uv for larger sets. The
/// set's own internal links never affect its CNS count, so the weighting
/// is exact, not approximate.
pub fn class_distributions_analytic(
    model: &ProbModel,
    q: usize,
    mode: AnalyticMode,
) -> Result<ClassCondDistributions, EngineError> {
    if q < 2 {
        return Err(EngineError::SetTooSmall(q));
    }
    if q as u64 > u64::from(model.n()) {
        return Err(EngineError::SetTooLarge { q, n: model.n() });
    }
    match mode {
        AnalyticMode::Exact => {
            if q != 2 {
                return Err(EngineError::ExactNeedsPairs(q));
            }
            match model.as_ring() {
                Some(ring) => ring_pair_classes(model, ring),
                None => generic_pair_classes(model),
            }
        }
        AnalyticMode::Sampled { sample_count, seed } => {
            sampled_classes(model, q, sample_count, seed)
        }
    }
}

/// Dense accumulators over integer CNS values, one slot per count.
struct DenseAccum {
    c: Vec<f64>,
    d: Vec<f64>,
    a: Vec<f64>,
    weight_c: f64,
    weight_total: f64,
}

impl DenseAccum {
    fn new() -> Self {
        Self {
            c: Vec::new(),
            d: Vec::new(),
            a: Vec::new(),
            weight_c: 0.0,
            weight_total: 0.0,
        }
    }

    /// Adds one set's distribution with connected-class weight `wc` and
    /// total multiplicity `count` (count − wc goes to the unconnected
    /// class).
    fn add(&mut self, count: f64, wc: f64, pmf: &Pmf) {
        for (w, p) in pmf.iter() {
            let idx = w as usize;
            grow(&mut self.c, idx);
            grow(&mut self.d, idx);
            grow(&mut self.a, idx);
            self.c[idx] += wc * p;
            self.d[idx] += (count - wc) * p;
            self.a[idx] += count * p;
        }
        self.weight_c += wc;
        self.weight_total += count;
    }

    fn merge(mut self, other: DenseAccum) -> DenseAccum {
        merge_into(&mut self.c, &other.c);
        merge_into(&mut self.d, &other.d);
        merge_into(&mut self.a, &other.a);
        self.weight_c += other.weight_c;
        self.weight_total += other.weight_total;
        self
    }

    fn finish(self) -> Result<ClassCondDistributions, EngineError> {
        let weight_d = self.weight_total - self.weight_c;
        let chi_c = self.weight_c / self.weight_total;
        let p_c = if self.weight_c > 0.0 {
            Some(dense_pmf(&self.c, self.weight_c)?)
        } else {
            None
        };
        let p_d = if weight_d > 0.0 {
            Some(dense_pmf(&self.d, weight_d)?)
        } else {
            None
        };
        let p_a = dense_pmf(&self.a, self.weight_total)?;
        Ok(ClassCondDistributions {
            chi_c,
            p_c,
            p_d,
            p_a,
        })
    }
}

fn grow(v: &mut Vec<f64>, idx: usize) {
    if v.len() <= idx {
        v.resize(idx + 1, 0.0);
    }
}

fn merge_into(dst: &mut Vec<f64>, src: &[f64]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0.0);
    }
    for (slot, &x) in dst.iter_mut().zip(src) {
        *slot += x;
    }
}

fn scale(weights: &[f64], denom: f64) -> Vec<f64> {
    weights.iter().map(|&w| w / denom).collect()
}

/// Pmf over 0..len from accumulated weights, dividing by `denom` once so
/// integer-valued accumulations stay exact rationals.
fn dense_pmf(weights: &[f64], denom: f64) -> Result<Pmf, DistError> {
    let support = (0..weights.len()).map(|w| w as f64).collect();
    Pmf::new(support, scale(weights, denom))
}

/// Balanced pairwise reduction in fixed order: bit-stable regardless of
/// how many workers produced the blocks.
fn tree_reduce(mut blocks: Vec<DenseAccum>) -> DenseAccum {
    if blocks.is_empty() {
        return DenseAccum::new();
    }
    while blocks.len() > 1 {
        let mut next = Vec::with_capacity(blocks.len().div_ceil(2));
        let mut it = blocks.into_iter();
        while let Some(first) = it.next() {
            match it.next() {
                Some(second) => next.push(first.merge(second)),
                None => next.push(first),
            }
        }
        blocks = next;
    }
    blocks.pop().expect("nonempty block list")
}

/// Ring models: Γ and the pair distribution depend only on ring distance,
/// and every distance beyond 2m has the same distribution, so at most
/// 2m + 1 distinct computations cover all n(n−1)/2 pairs.
fn ring_pair_classes(
    model: &ProbModel,
    ring: &RingModel,
) -> Result<ClassCondDistributions, EngineError> {
    let n = ring.n();
    let half = n / 2;
    let near_reps = half.min(2 * ring.m());
    let mut acc = DenseAccum::new();
    let mut far_count = 0.0f64;
    for (d, pairs) in ring.distance_pair_counts() {
        if d <= near_reps {
            let pmf = pair_distribution(model, 0, d)?;
            let count = pairs as f64;
            acc.add(count, count * ring.gamma_at_distance(d), &pmf);
        } else {
            far_count += pairs as f64;
        }
    }
    if far_count > 0.0 {
        let d = near_reps + 1;
        let pmf = pair_distribution(model, 0, d)?;
        acc.add(far_count, far_count * ring.gamma_at_distance(d), &pmf);
    }
    acc.finish()
}

fn generic_pair_classes(model: &ProbModel) -> Result<ClassCondDistributions, EngineError> {
    let n = model.n();
    let rows: Vec<DenseAccum> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = DenseAccum::new();
            for j in i + 1..n {
                let pmf = pair_distribution(model, i, j).expect("validated nodes");
                acc.add(1.0, model.gamma(i, j), &pmf);
            }
            acc
        })
        .collect();
    tree_reduce(rows).finish()
}

fn pair_distribution(model: &ProbModel, i: u32, j: u32) -> Result<Pmf, EngineError> {
    let set = NodeSet::pair(i, j).expect("distinct pair");
    set_cns_distribution(model, &set)
}

fn sampled_classes(
    model: &ProbModel,
    q: usize,
    sample_count: usize,
    seed: u64,
) -> Result<ClassCondDistributions, EngineError> {
    if sample_count == 0 {
        return Err(EngineError::ZeroSamples);
    }
    let n = model.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = DenseAccum::new();
    let mut members = Vec::with_capacity(q);
    for _ in 0..sample_count {
        members.clear();
        while members.len() < q {
            let v = rng.random_range(0..n);
            if !members.contains(&v) {
                members.push(v);
            }
        }
        let set = NodeSet::new(members.clone()).expect("distinct members");
        let pmf = set_cns_distribution(model, &set)?;
        let mut clique = 1.0;
        for (a, &u) in set.members().iter().enumerate() {
            for &v in &set.members()[a + 1..] {
                clique *= model.gamma(u, v);
            }
        }
        acc.add(1.0, clique, &pmf);
    }
    acc.finish()
}

/// Exact ER CNS distribution for set size `q`: Binomial(n−q, p^q) with
/// p = ⟨k⟩/(n−1).
pub fn er_closed_form(n: u32, mean_degree: f64, q: u32) -> Result<Pmf, EngineError> {
    if q == 0 {
        return Err(EngineError::ZeroSetSize);
    }
    if n <= q {
        return Err(EngineError::SetTooLarge {
            q: q as usize,
            n,
        });
    }
    let p = mean_degree / f64::from(n - 1);
    if !(0.0..=1.0).contains(&p) {
        return Err(EngineError::MeanDegreeOutOfRange(mean_degree));
    }
    let per_candidate = p.powi(q as i32);
    let factors = vec![per_candidate; (n - q) as usize];
    Ok(poisson_binomial_trimmed(&factors, TAIL_EPS)?)
}

/// Poisson(λ) with λ = ⟨k⟩^q · n^{1−q}: the large-n approximation of
/// [`er_closed_form`].
pub fn er_poisson_approx(n: u32, mean_degree: f64, q: u32) -> Result<Pmf, EngineError> {
    if q == 0 {
        return Err(EngineError::ZeroSetSize);
    }
    let lambda = mean_degree.powi(q as i32) * f64::from(n).powi(1 - q as i32);
    Ok(poisson_pmf(lambda)?)
}

/// Poisson(λ) truncated where the remaining tail is negligible.
pub fn poisson_pmf(lambda: f64) -> Result<Pmf, DistError> {
    if lambda <= 0.0 {
        return Ok(Pmf::point_mass(0.0));
    }
    let mut weights = vec![(-lambda).exp()];
    let mut w = 0usize;
    let mut cum = weights[0];
    loop {
        let next = weights[w] * lambda / (w + 1) as f64;
        weights.push(next);
        cum += next;
        w += 1;
        if (w as f64) > lambda && (1.0 - cum) < 1e-15 {
            break;
        }
        if w > 10_000_000 {
            break;
        }
    }
    Pmf::from_dense_weights(&weights)
}

/// Closed-form pair distribution for a ring model from the three node
/// types at ring distance `d`: s candidates adjacent-range to both ends
/// (probability η²), u to exactly one (ηα), and the rest to neither (α²).
pub fn ring_pair_closed_form(ring: &RingModel, d: u32) -> Result<Pmf, EngineError> {
    let s = ring.overlap_count(d);
    let u = ring.one_side_count(d);
    let r = ring.n() - 2 - s - u;
    let eta = ring.eta();
    let alpha = ring.alpha();
    let mut factors = Vec::with_capacity((ring.n() - 2) as usize);
    factors.extend(std::iter::repeat_n(eta * eta, s as usize));
    factors.extend(std::iter::repeat_n(eta * alpha, u as usize));
    factors.extend(std::iter::repeat_n(alpha * alpha, r as usize));
    factors.retain(|&p| p >= FACTOR_DROP_EPS);
    Ok(poisson_binomial_trimmed(&factors, TAIL_EPS)?)
}

/// Integer CNS histograms per class, kept as exact counts so the mixture
/// identity can be checked in integer arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalClassCounts {
    pub q: usize,
    pub connected: Vec<u64>,
    pub unconnected: Vec<u64>,
    pub all: Vec<u64>,
    pub connected_sets: u64,
    pub unconnected_sets: u64,
}

impl EmpiricalClassCounts {
    pub fn total_sets(&self) -> u64 {
        self.connected_sets + self.unconnected_sets
    }

    /// Integer mixture identity: per-count histograms of the two classes
    /// must sum to the all-sets histogram exactly.
    pub fn mixture_exact(&self) -> bool {
        let len = self.all.len().max(self.connected.len()).max(self.unconnected.len());
        (0..len).all(|w| {
            let c = self.connected.get(w).copied().unwrap_or(0);
            let d = self.unconnected.get(w).copied().unwrap_or(0);
            let a = self.all.get(w).copied().unwrap_or(0);
            c + d == a
        })
    }

    pub fn to_distributions(&self) -> Result<ClassCondDistributions, EngineError> {
        let chi_c = self.connected_sets as f64 / self.total_sets() as f64;
        let p_c = if self.connected_sets > 0 {
            Some(hist_pmf(&self.connected, self.connected_sets)?)
        } else {
            None
        };
        let p_d = if self.unconnected_sets > 0 {
            Some(hist_pmf(&self.unconnected, self.unconnected_sets)?)
        } else {
            None
        };
        let p_a = hist_pmf(&self.all, self.total_sets())?;
        Ok(ClassCondDistributions {
            chi_c,
            p_c,
            p_d,
            p_a,
        })
    }
}

fn hist_pmf(hist: &[u64], total: u64) -> Result<Pmf, DistError> {
    let probs: Vec<f64> = hist.iter().map(|&c| c as f64 / total as f64).collect();
    let support = (0..hist.len()).map(|w| w as f64).collect();
    // counts divide exactly; renormalizing would perturb the rationals
    Pmf::new(support, probs)
}

/// Counts common neighbors of every node pair of a graph, split by
/// whether the pair is linked. A pair's own link never counts toward its
/// CNS, so removing it does not change the pair's score.
pub fn empirical_class_counts(graph: &Graph) -> EmpiricalClassCounts {
    let n = graph.node_count() as u32;
    let rows: Vec<(Vec<u64>, Vec<u64>, u64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut c_hist = Vec::new();
            let mut d_hist = Vec::new();
            let mut c_sets = 0u64;
            for j in i + 1..n {
                let w = graph.pair_cns(i, j);
                if graph.has_edge(i, j) {
                    grow_u64(&mut c_hist, w);
                    c_hist[w] += 1;
                    c_sets += 1;
                } else {
                    grow_u64(&mut d_hist, w);
                    d_hist[w] += 1;
                }
            }
            (c_hist, d_hist, c_sets)
        })
        .collect();
    let mut connected = Vec::new();
    let mut unconnected = Vec::new();
    let mut connected_sets = 0u64;
    for (c, d, cs) in rows {
        merge_u64(&mut connected, &c);
        merge_u64(&mut unconnected, &d);
        connected_sets += cs;
    }
    let total = graph.pair_count() as u64;
    finish_counts(2, connected, unconnected, connected_sets, total)
}

/// Exact empirical counts for q-node sets; the connected class is sets
/// forming a clique. Enumerates all C(n, q) sets — intended for small
/// graphs or small q.
pub fn empirical_class_counts_q(graph: &Graph, q: usize) -> Result<EmpiricalClassCounts, EngineError> {
    if q < 2 {
        return Err(EngineError::SetTooSmall(q));
    }
    let n = graph.node_count();
    if q > n {
        return Err(EngineError::SetTooLarge {
            q,
            n: n as u32,
        });
    }
    if q == 2 {
        return Ok(empirical_class_counts(graph));
    }
    let mut connected = Vec::new();
    let mut unconnected = Vec::new();
    let mut connected_sets = 0u64;
    let mut total = 0u64;
    let mut members = vec![0u32; q];
    enumerate_sets(graph, q, 0, 0, &mut members, &mut |graph, members| {
        let set = NodeSet::new(members.to_vec()).expect("distinct ascending members");
        let w = graph.cns(&set).expect("members in range");
        let clique = members.iter().enumerate().all(|(a, &u)| {
            members[a + 1..].iter().all(|&v| graph.has_edge(u, v))
        });
        total += 1;
        if clique {
            grow_u64(&mut connected, w);
            connected[w] += 1;
            connected_sets += 1;
        } else {
            grow_u64(&mut unconnected, w);
            unconnected[w] += 1;
        }
    });
    Ok(finish_counts(q, connected, unconnected, connected_sets, total))
}

fn enumerate_sets(
    graph: &Graph,
    q: usize,
    depth: usize,
    start: u32,
    members: &mut Vec<u32>,
    visit: &mut impl FnMut(&Graph, &[u32]),
) {
    if depth == q {
        visit(graph, members);
        return;
    }
    let n = graph.node_count() as u32;
    let remaining = (q - depth) as u32;
    for v in start..=n - remaining {
        members[depth] = v;
        enumerate_sets(graph, q, depth + 1, v + 1, members, visit);
    }
}

fn finish_counts(
    q: usize,
    connected: Vec<u64>,
    unconnected: Vec<u64>,
    connected_sets: u64,
    total: u64,
) -> EmpiricalClassCounts {
    let mut all = vec![0u64; connected.len().max(unconnected.len())];
    for (w, slot) in all.iter_mut().enumerate() {
        *slot = connected.get(w).copied().unwrap_or(0) + unconnected.get(w).copied().unwrap_or(0);
    }
    EmpiricalClassCounts {
        q,
        connected,
        unconnected,
        all,
        connected_sets,
        unconnected_sets: total - connected_sets,
    }
}

fn grow_u64(v: &mut Vec<u64>, idx: usize) {
    if v.len() <= idx {
        v.resize(idx + 1, 0);
    }
}

fn merge_u64(dst: &mut Vec<u64>, src: &[u64]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (slot, &x) in dst.iter_mut().zip(src) {
        *slot += x;
    }
}

/// Empirical class distributions of a graph for pair sets (q = 2).
pub fn empirical_class_distributions(
    graph: &Graph,
) -> Result<ClassCondDistributions, EngineError> {
    empirical_class_counts(graph).to_distributions()
}
