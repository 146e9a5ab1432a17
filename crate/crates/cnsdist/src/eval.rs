//! Link-prediction evaluation, two ways.
//!
//! Experimental: remove a fraction ε of links as a test set, score the
//! training graph, and measure AUC by sampled comparisons and precision
//! by top-L ranking — repeated over many splits.
//!
//! Theoretical: take the class-conditional score distributions of the
//! *original* graph (removing a small test set barely changes them) and
//! compute the same quantities directly from P_c and P_d, with no
//! splitting or rescoring at all.

use crate::engine::ClassCondDistributions;
use crate::graph::Graph;
use crate::indices::{katz_connected_shift, IndexError, IndexKind, ScoreTable};
use crate::models::derive_seed;
use crate::pmf::{DistError, Pmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashSet;
use thiserror::Error;

/// Relative tolerance under which two scores count as tied.
const TIE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    BadEpsilon(f64),
    #[error("test set would be empty (epsilon {epsilon} of {edges} edges)")]
    EmptyTestSet { epsilon: f64, edges: usize },
    #[error("test set would consume every edge")]
    EmptyTrainingSet,
    #[error("graph has no links, nothing to predict")]
    NoEdges,
    #[error("graph has no unconnected pairs")]
    NoUnconnectedPairs,
    #[error("top-L of {l} exceeds the {available} candidate pairs")]
    LTooLarge { l: usize, available: usize },
    #[error("repetitions must be at least 1")]
    ZeroRepetitions,
    #[error("comparison count must be at least 1")]
    ZeroComparisons,
    #[error("no indices selected")]
    NoIndices,
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

/// Test/training split protocol.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SplitSpec {
    /// Fraction of links removed into the test set.
    pub epsilon: f64,
    pub seed: u64,
    pub repetitions: usize,
}

impl SplitSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            epsilon: 0.1,
            seed,
            repetitions: 100,
        }
    }

    fn validate(&self) -> Result<(), EvalError> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(EvalError::BadEpsilon(self.epsilon));
        }
        if self.repetitions == 0 {
            return Err(EvalError::ZeroRepetitions);
        }
        Ok(())
    }

    /// ⌈ε·E⌉ links go to the test set.
    pub fn test_size(&self, edge_count: usize) -> usize {
        (self.epsilon * edge_count as f64).ceil() as usize
    }
}

/// Uniformly removes ⌈ε·E⌉ links; returns the training graph and the test
/// links. Deterministic in (seed, repetition).
pub fn split(
    graph: &Graph,
    spec: &SplitSpec,
    repetition: usize,
) -> Result<(Graph, Vec<(u32, u32)>), EvalError> {
    spec.validate()?;
    let mut edges: Vec<(u32, u32)> = graph.edges().collect();
    if edges.is_empty() {
        return Err(EvalError::NoEdges);
    }
    let take = spec.test_size(edges.len());
    if take == 0 {
        return Err(EvalError::EmptyTestSet {
            epsilon: spec.epsilon,
            edges: edges.len(),
        });
    }
    if take >= edges.len() {
        return Err(EvalError::EmptyTrainingSet);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, repetition as u64));
    for k in 0..take {
        let swap_with = k + rng.random_range(0..(edges.len() - k) as u64) as usize;
        edges.swap(k, swap_with);
    }
    let test = edges[..take].to_vec();
    let training = Graph::from_edges(graph.node_count(), edges[take..].iter().copied())
        .expect("training edges are in range");
    Ok((training, test))
}

fn scores_tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_REL_TOL * a.abs().max(b.abs())
}

/// AUC by sampled comparisons: n times, draw one test link and one
/// never-connected pair (unlinked in the original graph) and compare
/// their training-graph scores; ties count half.
pub fn auc_experimental(
    table: &ScoreTable,
    original: &Graph,
    test: &[(u32, u32)],
    n_comparisons: usize,
    seed: u64,
) -> Result<f64, EvalError> {
    if n_comparisons == 0 {
        return Err(EvalError::ZeroComparisons);
    }
    if test.is_empty() {
        return Err(EvalError::NoEdges);
    }
    let n = original.node_count() as u32;
    if original.edge_count() == original.pair_count() {
        return Err(EvalError::NoUnconnectedPairs);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wins = 0u64;
    let mut ties = 0u64;
    for _ in 0..n_comparisons {
        let (tu, tv) = test[rng.random_range(0..test.len() as u64) as usize];
        let (du, dv) = loop {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v && !original.has_edge(u, v) {
                break (u.min(v), u.max(v));
            }
        };
        let s_test = table.score_of(tu, tv).expect("test pair is unlinked in training");
        let s_never = table.score_of(du, dv).expect("never-connected pair is unlinked");
        if scores_tied(s_test, s_never) {
            ties += 1;
        } else if s_test > s_never {
            wins += 1;
        }
    }
    Ok((wins as f64 + 0.5 * ties as f64) / n_comparisons as f64)
}

/// Precision: fraction of the top-L training-unconnected pairs that are
/// test links. Pairs tying at the L-th score are resolved in expectation
/// (the uniform-random tie-break averaged over its draws).
pub fn precision_experimental(
    table: &ScoreTable,
    test: &[(u32, u32)],
    l: usize,
) -> Result<f64, EvalError> {
    let candidates = table.unconnected();
    if l == 0 || l > candidates.len() {
        return Err(EvalError::LTooLarge {
            l,
            available: candidates.len(),
        });
    }
    let test_set: HashSet<(u32, u32)> = test.iter().copied().collect();
    let mut ranked: Vec<(f64, bool)> = candidates
        .iter()
        .map(|e| (e.score, test_set.contains(&(e.u, e.v))))
        .collect();
    // selection, not a sort: only the L-th score matters
    ranked.select_nth_unstable_by(l - 1, |a, b| b.0.total_cmp(&a.0));
    let threshold = ranked[l - 1].0;
    let mut above = 0usize;
    let mut hits_above = 0usize;
    let mut at = 0usize;
    let mut hits_at = 0usize;
    for &(score, is_test) in &ranked {
        if score > threshold {
            above += 1;
            hits_above += usize::from(is_test);
        } else if score == threshold {
            at += 1;
            hits_at += usize::from(is_test);
        }
    }
    let open_slots = (l - above) as f64;
    let expected_hits = hits_above as f64 + open_slots * hits_at as f64 / at as f64;
    Ok(expected_hits / l as f64)
}

/// Class-conditional score distributions of the full graph, over the
/// exact observed score values (no binning).
pub fn class_score_distributions(
    graph: &Graph,
    index: IndexKind,
    phi: Option<f64>,
) -> Result<ClassCondDistributions, EvalError> {
    let table = ScoreTable::compute(graph, index, phi)?;
    if table.connected().is_empty() {
        return Err(EvalError::NoEdges);
    }
    let p_c = Some(scores_to_pmf(table.connected().iter().map(|e| e.score))?);
    let p_d = if table.unconnected().is_empty() {
        None
    } else {
        Some(scores_to_pmf(table.unconnected().iter().map(|e| e.score))?)
    };
    let p_a = scores_to_pmf(
        table
            .connected()
            .iter()
            .chain(table.unconnected())
            .map(|e| e.score),
    )?;
    let chi_c = graph.edge_count() as f64 / graph.pair_count() as f64;
    Ok(ClassCondDistributions {
        chi_c,
        p_c,
        p_d,
        p_a,
    })
}

fn scores_to_pmf(scores: impl Iterator<Item = f64>) -> Result<Pmf, DistError> {
    let mut values: Vec<f64> = scores.collect();
    values.sort_unstable_by(f64::total_cmp);
    let total = values.len() as f64;
    let mut support = Vec::new();
    let mut probs = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i + 1;
        while j < values.len() && values[j] == values[i] {
            j += 1;
        }
        support.push(values[i]);
        probs.push((j - i) as f64 / total);
        i = j;
    }
    Pmf::new(support, probs)
}

/// Theoretical AUC from class distributions:
/// Σ_x P_c(x)·[P_d(<x) + ½P_d(=x)], evaluated in the antisymmetric form
/// ½ + ½(S_cd − S_dc) so identical inputs give exactly ½.
pub fn auc_theoretical(p_c: &Pmf, p_d: &Pmf) -> f64 {
    let mut s_cd = 0.0f64; // P(c-draw > d-draw)
    let mut s_dc = 0.0f64;
    let mut cum_c = 0.0f64;
    let mut cum_d = 0.0f64;
    let (mut i, mut j) = (0, 0);
    let (sc, sd) = (p_c.support(), p_d.support());
    while i < sc.len() || j < sd.len() {
        let x = match (sc.get(i), sd.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => break,
        };
        let mc = if sc.get(i) == Some(&x) {
            let m = p_c.probs()[i];
            i += 1;
            m
        } else {
            0.0
        };
        let md = if sd.get(j) == Some(&x) {
            let m = p_d.probs()[j];
            j += 1;
            m
        } else {
            0.0
        };
        s_cd += mc * cum_d;
        s_dc += md * cum_c;
        cum_c += mc;
        cum_d += md;
    }
    0.5 + 0.5 * (s_cd - s_dc)
}

/// Theoretical precision via the cumulative count functions: the expected
/// number of test links (Φ_c) and never-connected pairs (Φ_d) scoring at
/// least x.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrecisionTheory {
    /// Expected top-L precision with the threshold bin filled fractionally.
    pub exact: f64,
    /// The loose ratio Φ_c(x_L)/Φ(x_L).
    pub loose: f64,
    /// The score threshold x_L where the top-L cut falls.
    pub threshold: f64,
}

/// Computes theoretical precision for a top-`l` cut. `n` and
/// `mean_degree` describe the original graph; `epsilon` is the removed
/// fraction. The threshold x_L satisfies Φ(x_L) ≥ L with Φ above the next
/// larger support value below L.
pub fn precision_theoretical(
    p_c: &Pmf,
    p_d: &Pmf,
    n: usize,
    mean_degree: f64,
    epsilon: f64,
    l: usize,
) -> Result<PrecisionTheory, EvalError> {
    let nf = n as f64;
    let total_c = epsilon * nf * mean_degree / 2.0;
    let total_d = nf * (nf - 1.0 - mean_degree) / 2.0;
    let l = l as f64;
    if l <= 0.0 || l > total_c + total_d {
        return Err(EvalError::LTooLarge {
            l: l as usize,
            available: (total_c + total_d).floor() as usize,
        });
    }
    // walk the merged support descending, tracking mass strictly above x
    let (sc, sd) = (p_c.support(), p_d.support());
    let mut i = sc.len();
    let mut j = sd.len();
    let mut phi_c_above = 0.0f64;
    let mut phi_d_above = 0.0f64;
    while i > 0 || j > 0 {
        let x = match (i.checked_sub(1).map(|k| sc[k]), j.checked_sub(1).map(|k| sd[k])) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => break,
        };
        let bin_c = if i > 0 && sc[i - 1] == x {
            i -= 1;
            total_c * p_c.probs()[i]
        } else {
            0.0
        };
        let bin_d = if j > 0 && sd[j - 1] == x {
            j -= 1;
            total_d * p_d.probs()[j]
        } else {
            0.0
        };
        let phi_above = phi_c_above + phi_d_above;
        let phi_at = phi_above + bin_c + bin_d;
        if phi_at >= l {
            let boundary_share = (l - phi_above) * bin_c / (bin_c + bin_d);
            let exact = (phi_c_above + boundary_share) / l;
            let loose = (phi_c_above + bin_c) / phi_at;
            return Ok(PrecisionTheory {
                exact,
                loose,
                threshold: x,
            });
        }
        phi_c_above += bin_c;
        phi_d_above += bin_d;
    }
    // rounding left Φ(min) a hair under L: everything is selected
    Ok(PrecisionTheory {
        exact: phi_c_above / l,
        loose: phi_c_above / (phi_c_above + phi_d_above),
        threshold: f64::NEG_INFINITY,
    })
}

/// Medians of the two class distributions and their separation
/// ξ_c − ξ_d, a cheap proxy for how predictable links are.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MedianDistance {
    pub xi_c: f64,
    pub xi_d: f64,
    pub distance: f64,
}

pub fn median_distance(p_c: &Pmf, p_d: &Pmf) -> MedianDistance {
    let xi_c = p_c.median();
    let xi_d = p_d.median();
    MedianDistance {
        xi_c,
        xi_d,
        distance: xi_c - xi_d,
    }
}

/// One index to evaluate: the kind, an optional φ override, and — for
/// Katz — whether the theoretical side shifts P_c down by φ to drop the
/// direct-link term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexSpec {
    pub kind: IndexKind,
    pub phi: Option<f64>,
    pub shifted: bool,
}

impl IndexSpec {
    pub fn new(kind: IndexKind) -> Self {
        Self {
            kind,
            phi: None,
            shifted: false,
        }
    }

    pub fn katz_shifted() -> Self {
        Self {
            kind: IndexKind::Katz,
            phi: None,
            shifted: true,
        }
    }

    pub fn label(&self) -> String {
        if self.shifted {
            format!("{}-shifted", self.kind)
        } else {
            self.kind.to_string()
        }
    }

    fn effective_phi(&self) -> Option<f64> {
        self.phi.or_else(|| self.kind.default_phi())
    }
}

impl std::str::FromStr for IndexSpec {
    type Err = IndexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("katz-shifted") {
            return Ok(IndexSpec::katz_shifted());
        }
        Ok(IndexSpec::new(s.parse()?))
    }
}

/// Which halves of the evaluation to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalMode {
    Both,
    TheoryOnly,
    ExperimentOnly,
}

#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub indices: Vec<IndexSpec>,
    pub split: SplitSpec,
    pub n_comparisons: usize,
    /// Top-L cut; defaults to the test-set size.
    pub top_l: Option<usize>,
    pub mode: EvalMode,
}

impl EvalOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            indices: vec![
                IndexSpec::new(IndexKind::Cn),
                IndexSpec::new(IndexKind::Ra),
                IndexSpec::new(IndexKind::Aa),
            ],
            split: SplitSpec::new(seed),
            n_comparisons: 10_000,
            top_l: None,
            mode: EvalMode::Both,
        }
    }
}

/// Evaluation results for one index.
#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub label: String,
    pub index: IndexKind,
    pub phi: Option<f64>,
    pub shifted: bool,
    pub auc_experimental_mean: Option<f64>,
    pub auc_experimental_std: Option<f64>,
    pub precision_experimental_mean: Option<f64>,
    pub precision_experimental_std: Option<f64>,
    pub auc_theoretical: Option<f64>,
    pub precision_theoretical: Option<f64>,
    pub precision_theoretical_loose: Option<f64>,
    /// For Katz rows: the same theoretical numbers in the other mode
    /// (shifted if this row is raw, raw if shifted).
    pub auc_theoretical_alt: Option<f64>,
    pub precision_theoretical_alt: Option<f64>,
    pub median: Option<MedianDistance>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub epsilon: f64,
    pub repetitions: usize,
    pub n_comparisons: usize,
    pub seed: u64,
    pub top_l: usize,
    pub mode: EvalMode,
    pub indices: Vec<IndexReport>,
}

/// Runs the full protocol on one graph: theoretical numbers from the
/// original graph's score distributions, experimental numbers averaged
/// over `repetitions` random splits (parallelized, deterministic in the
/// seed regardless of thread count).
pub fn evaluate(graph: &Graph, opts: &EvalOptions) -> Result<EvalReport, EvalError> {
    opts.split.validate()?;
    if opts.indices.is_empty() {
        return Err(EvalError::NoIndices);
    }
    if opts.n_comparisons == 0 {
        return Err(EvalError::ZeroComparisons);
    }
    if graph.edge_count() == 0 {
        return Err(EvalError::NoEdges);
    }
    let test_size = opts.split.test_size(graph.edge_count());
    let top_l = opts.top_l.unwrap_or(test_size);
    let run_experiment = opts.mode != EvalMode::TheoryOnly;
    let run_theory = opts.mode != EvalMode::ExperimentOnly;

    // experimental work is identical for raw and shifted Katz rows, so
    // deduplicate by (kind, phi)
    let exp_keys: Vec<(IndexKind, Option<f64>)> = {
        let mut keys = Vec::new();
        for spec in &opts.indices {
            let key = (spec.kind, spec.phi);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys
    };

    let experimental: Option<Vec<(f64, f64, f64, f64)>> = if run_experiment {
        let reps = opts.split.repetitions;
        let per_rep: Result<Vec<Vec<(f64, f64)>>, EvalError> = (0..reps)
            .into_par_iter()
            .map(|rep| {
                let (training, test) = split(graph, &opts.split, rep)?;
                let rep_seed = derive_seed(opts.split.seed, rep as u64);
                exp_keys
                    .iter()
                    .enumerate()
                    .map(|(k, &(kind, phi))| {
                        let table = ScoreTable::compute(&training, kind, phi)?;
                        let auc = auc_experimental(
                            &table,
                            graph,
                            &test,
                            opts.n_comparisons,
                            derive_seed(rep_seed, 1 + k as u64),
                        )?;
                        let prec = precision_experimental(&table, &test, top_l)?;
                        Ok((auc, prec))
                    })
                    .collect()
            })
            .collect();
        let per_rep = per_rep?;
        Some(
            (0..exp_keys.len())
                .map(|k| {
                    let aucs: Vec<f64> = per_rep.iter().map(|r| r[k].0).collect();
                    let precs: Vec<f64> = per_rep.iter().map(|r| r[k].1).collect();
                    let (am, asd) = mean_std(&aucs);
                    let (pm, psd) = mean_std(&precs);
                    (am, asd, pm, psd)
                })
                .collect(),
        )
    } else {
        None
    };

    let mut rows = Vec::with_capacity(opts.indices.len());
    for spec in &opts.indices {
        let mut row = IndexReport {
            label: spec.label(),
            index: spec.kind,
            phi: spec.effective_phi(),
            shifted: spec.shifted,
            auc_experimental_mean: None,
            auc_experimental_std: None,
            precision_experimental_mean: None,
            precision_experimental_std: None,
            auc_theoretical: None,
            precision_theoretical: None,
            precision_theoretical_loose: None,
            auc_theoretical_alt: None,
            precision_theoretical_alt: None,
            median: None,
        };
        if let Some(exp) = &experimental {
            let k = exp_keys
                .iter()
                .position(|&key| key == (spec.kind, spec.phi))
                .expect("key registered above");
            let (am, asd, pm, psd) = exp[k];
            row.auc_experimental_mean = Some(am);
            row.auc_experimental_std = Some(asd);
            row.precision_experimental_mean = Some(pm);
            row.precision_experimental_std = Some(psd);
        }
        if run_theory {
            let dists = class_score_distributions(graph, spec.kind, spec.phi)?;
            let p_c_raw = dists.p_c.as_ref().expect("graph has edges");
            let p_d = dists.p_d.as_ref().ok_or(EvalError::NoUnconnectedPairs)?;
            let shift_phi = spec.effective_phi().unwrap_or(0.0);
            let p_c_shifted;
            let (main_pc, alt_pc): (&Pmf, Option<&Pmf>) = if spec.kind == IndexKind::Katz {
                p_c_shifted = katz_connected_shift(p_c_raw, shift_phi);
                if spec.shifted {
                    (&p_c_shifted, Some(p_c_raw))
                } else {
                    (p_c_raw, Some(&p_c_shifted))
                }
            } else {
                (p_c_raw, None)
            };
            row.auc_theoretical = Some(auc_theoretical(main_pc, p_d));
            let prec = precision_theoretical(
                main_pc,
                p_d,
                graph.node_count(),
                graph.mean_degree(),
                opts.split.epsilon,
                top_l,
            )?;
            row.precision_theoretical = Some(prec.exact);
            row.precision_theoretical_loose = Some(prec.loose);
            if let Some(alt) = alt_pc {
                row.auc_theoretical_alt = Some(auc_theoretical(alt, p_d));
                row.precision_theoretical_alt = Some(
                    precision_theoretical(
                        alt,
                        p_d,
                        graph.node_count(),
                        graph.mean_degree(),
                        opts.split.epsilon,
                        top_l,
                    )?
                    .exact,
                );
            }
            row.median = Some(median_distance(main_pc, p_d));
        }
        rows.push(row);
    }

    Ok(EvalReport {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        mean_degree: graph.mean_degree(),
        epsilon: opts.split.epsilon,
        repetitions: opts.split.repetitions,
        n_comparisons: opts.n_comparisons,
        seed: opts.split.seed,
        top_l,
        mode: opts.mode,
        indices: rows,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
