//! Release gate: one line per criterion, PASS / FAIL / SKIP. Runs as a
//! plain binary (no harness) so the lines always reach the test log.

use cnsdist::models::{fit_power_law_exponent, BaModel, ProbModel, RingModel};
use cnsdist::pmf::{poisson_binomial, Pmf};
use cnsdist::{
    auc_theoretical, class_distributions_analytic, convolve, empirical_class_counts,
    empirical_class_distributions, er_closed_form, er_poisson_approx, evaluate,
    set_cns_distribution, AnalyticMode, EvalOptions, Graph, IndexKind, IndexSpec, NodeSet,
    ScoreTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

fn main() {
    std::panic::set_hook(Box::new(|_| {})); // keep the log to one line per criterion
    let criteria: Vec<(&str, fn())> = vec![
        ("poisson-binomial matches exhaustive enumeration", c1),
        ("sparse ER closed form collapses onto Poisson", c2),
        ("ring lattice laws are exact, analytic == empirical", c3),
        ("mixture identity: analytic residual and exact counts", c4),
        ("n=7 models equal full 2^21 graph enumeration", c5),
        ("per-pair generating functions match direct expansion", c6),
        ("WS/NW factor into lattice ⊛ shortcut convolutions", c7),
        ("BA rows spend exactly m links; degrees power-law", c8),
        ("theory tracks split experiments for CN/RA/AA", c9),
        ("jazz network reproduction", c10),
        ("degenerate invariants: AUC and Katz closed form", c11),
    ];
    let mut failures = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  ({secs:>6.1}s)  {label}", i + 1),
            Err(payload) => {
                let msg = payload
                    .downcast_ref::<String>()
                    .map(String::as_str)
                    .or_else(|| payload.downcast_ref::<&str>().copied())
                    .unwrap_or("panic");
                if msg.starts_with("SKIP") {
                    println!("criterion {:>2}: SKIP  ({secs:>6.1}s)  {label} — {msg}", i + 1);
                } else {
                    failures += 1;
                    println!("criterion {:>2}: FAIL  ({secs:>6.1}s)  {label} — {msg}", i + 1);
                }
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}

fn c1() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..500 {
        let len = rng.random_range(1..=12usize);
        let probs: Vec<f64> = (0..len).map(|_| rng.random_range(0.0..=1.0)).collect();
        let pb = poisson_binomial(&probs).unwrap();
        let mut exact = vec![0.0f64; len + 1];
        for mask in 0u32..(1 << len) {
            let mut weight = 1.0;
            for (t, &p) in probs.iter().enumerate() {
                weight *= if mask >> t & 1 == 1 { p } else { 1.0 - p };
            }
            exact[mask.count_ones() as usize] += weight;
        }
        for (w, &e) in exact.iter().enumerate() {
            let got = pb.prob_of(w as f64);
            assert!(
                (got - e).abs() <= 1e-12,
                "len {len}, w {w}: {got} vs {e}"
            );
        }
    }
}

fn c2() {
    for (q, lambda) in [(2u32, 25.0f64), (3, 1.25)] {
        let exact = er_closed_form(10_000, 500.0, q).unwrap();
        assert!(
            (exact.mean() - lambda).abs() / lambda < 0.01,
            "q={q} mean {}",
            exact.mean()
        );
        assert!(
            (exact.variance() - lambda).abs() / lambda < 0.01,
            "q={q} var {}",
            exact.variance()
        );
        let tv = exact.total_variation(&er_poisson_approx(10_000, 500.0, q).unwrap());
        assert!(tv < 1e-2, "q={q} TV {tv}");
    }
}

fn c3() {
    let model = ProbModel::from(RingModel::rrl(1000, 50).unwrap());
    let analytic = class_distributions_analytic(&model, 2, AnalyticMode::Exact).unwrap();
    let p_c = analytic.p_c.as_ref().unwrap();
    assert_eq!(p_c.support(), (49..=98).map(f64::from).collect::<Vec<_>>());
    for (w, p) in p_c.iter() {
        assert_eq!(p, 0.02, "P_c({w})");
    }
    let p_d = analytic.p_d.as_ref().unwrap();
    assert_eq!(p_d.prob_of(0.0), 799.0 / 899.0);
    let empirical = empirical_class_distributions(&model.sample(0)).unwrap();
    assert_eq!(analytic.p_c, empirical.p_c);
    assert_eq!(analytic.p_d, empirical.p_d);
    assert_eq!(analytic.p_a, empirical.p_a);
    assert_eq!(analytic.chi_c, empirical.chi_c);
}

fn c4() {
    let models: Vec<(&str, ProbModel)> = vec![
        ("er", RingModel::er_from_mean_degree(1000, 10.0).unwrap().into()),
        ("ws", RingModel::ws(1000, 5, 0.3).unwrap().into()),
        ("nw", RingModel::nw(1000, 5, 0.3).unwrap().into()),
        ("mrl", RingModel::mrl(1000, 5, 0.3).unwrap().into()),
        ("unified", RingModel::unified(1000, 5, 0.8, 0.01).unwrap().into()),
        ("ba", BaModel::new(1000, 5, 5).unwrap().into()),
    ];
    for (name, model) in &models {
        let dists = class_distributions_analytic(model, 2, AnalyticMode::Exact).unwrap();
        let residual = dists.mixture_residual();
        assert!(residual <= 1e-9, "{name}: analytic residual {residual}");
    }
    for seed in 0..10u64 {
        let model = &models[(seed % models.len() as u64) as usize].1;
        let counts = empirical_class_counts(&model.sample(seed));
        assert!(counts.mixture_exact(), "seed {seed}: counts not exact");
    }
}

fn c5() {
    let n = 7u32;
    let models: Vec<(&str, ProbModel)> = vec![
        ("rrl", RingModel::rrl(n, 1).unwrap().into()),
        ("mrl", RingModel::mrl(n, 1, 0.3).unwrap().into()),
        ("er", RingModel::er(n, 0.35).unwrap().into()),
        ("ws", RingModel::ws(n, 1, 0.25).unwrap().into()),
        ("nw", RingModel::nw(n, 1, 0.25).unwrap().into()),
        ("unified", RingModel::unified(n, 1, 0.8, 0.15).unwrap().into()),
        ("ba", BaModel::new(n, 2, 2).unwrap().into()),
    ];
    for (name, model) in &models {
        let (enum_c, enum_d, enum_a, chi) = enumerate_all_graphs(model);
        let dists = class_distributions_analytic(model, 2, AnalyticMode::Exact).unwrap();
        assert!((dists.chi_c - chi).abs() <= 1e-9, "{name} chi_c");
        compare_dense(name, "p_a", &enum_a, &dists.p_a);
        match &dists.p_c {
            Some(p_c) => compare_dense(name, "p_c", &enum_c, p_c),
            None => assert!(enum_c.iter().all(|&x| x == 0.0), "{name} missing p_c"),
        }
        match &dists.p_d {
            Some(p_d) => compare_dense(name, "p_d", &enum_d, p_d),
            None => assert!(enum_d.iter().all(|&x| x == 0.0), "{name} missing p_d"),
        }
    }
}

/// Exact class-conditional CNS laws of a 7-node independent-link model,
/// by enumerating all 2^21 graphs with their probabilities.
fn enumerate_all_graphs(model: &ProbModel) -> (Vec<f64>, Vec<f64>, Vec<f64>, f64) {
    let n = 7u32;
    let pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    let gammas: Vec<f64> = pairs.iter().map(|&(i, j)| model.gamma(i, j)).collect();
    let npairs = pairs.len();
    let mut acc_c = vec![0.0f64; n as usize];
    let mut acc_d = vec![0.0f64; n as usize];
    let mut weight_c = 0.0f64;
    for mask in 0u32..(1 << npairs) {
        let mut weight = 1.0f64;
        for (t, &g) in gammas.iter().enumerate() {
            weight *= if mask >> t & 1 == 1 { g } else { 1.0 - g };
            if weight == 0.0 {
                break;
            }
        }
        if weight == 0.0 {
            continue;
        }
        let mut adj = [0u32; 7];
        for (t, &(i, j)) in pairs.iter().enumerate() {
            if mask >> t & 1 == 1 {
                adj[i as usize] |= 1 << j;
                adj[j as usize] |= 1 << i;
            }
        }
        for (t, &(i, j)) in pairs.iter().enumerate() {
            let others = adj[i as usize] & adj[j as usize] & !(1 << i) & !(1 << j);
            let w = others.count_ones() as usize;
            if mask >> t & 1 == 1 {
                acc_c[w] += weight;
                weight_c += weight;
            } else {
                acc_d[w] += weight;
            }
        }
    }
    let total = npairs as f64;
    let weight_d = total - weight_c;
    let acc_a: Vec<f64> = acc_c.iter().zip(&acc_d).map(|(c, d)| (c + d) / total).collect();
    let p_c: Vec<f64> = acc_c.iter().map(|c| c / weight_c.max(f64::MIN_POSITIVE)).collect();
    let p_d: Vec<f64> = acc_d.iter().map(|d| d / weight_d.max(f64::MIN_POSITIVE)).collect();
    (p_c, p_d, acc_a, weight_c / total)
}

fn compare_dense(model: &str, class: &str, dense: &[f64], pmf: &Pmf) {
    for (w, &expect) in dense.iter().enumerate() {
        let got = pmf.prob_of(w as f64);
        assert!(
            (got - expect).abs() <= 1e-9,
            "{model} {class}({w}): {got} vs {expect}"
        );
    }
}

fn c6() {
    let n = 300u32;
    let models: Vec<ProbModel> = vec![
        RingModel::rrl(n, 3).unwrap().into(),
        RingModel::mrl(n, 3, 0.25).unwrap().into(),
        RingModel::er(n, 0.05).unwrap().into(),
        RingModel::ws(n, 3, 0.2).unwrap().into(),
        RingModel::nw(n, 3, 0.2).unwrap().into(),
        RingModel::unified(n, 3, 0.9, 0.02).unwrap().into(),
        BaModel::new(n, 3, 3).unwrap().into(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for model in &models {
        for _ in 0..50 {
            let u = rng.random_range(0..n);
            let v = loop {
                let v = rng.random_range(0..n);
                if v != u {
                    break v;
                }
            };
            // schoolbook expansion of prod_t (1 - p_t + p_t x)
            let mut coeffs = vec![1.0f64];
            for t in 0..n {
                if t == u || t == v {
                    continue;
                }
                let p = model.gamma(u, t) * model.gamma(v, t);
                coeffs.push(0.0);
                for w in (0..coeffs.len()).rev() {
                    let keep = if w < coeffs.len() - 1 { coeffs[w] * (1.0 - p) } else { 0.0 };
                    let step = if w > 0 { coeffs[w - 1] * p } else { 0.0 };
                    coeffs[w] = keep + step;
                }
            }
            let pmf = set_cns_distribution(model, &NodeSet::pair(u, v).unwrap()).unwrap();
            for (w, &expect) in coeffs.iter().enumerate() {
                let got = pmf.prob_of(w as f64);
                assert!(
                    (got - expect).abs() <= 1e-12,
                    "{:?} pair ({u},{v}) w={w}: {got} vs {expect}",
                    model.kind()
                );
            }
        }
    }
}

fn c7() {
    let (n, m) = (1000u32, 25u32);
    let sweep = [0.1f64, 0.05, 0.025, 0.0125, 0.00625];
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for (step, &p) in sweep.iter().enumerate() {
        let tv_ws = lattice_shortcut_gap(
            RingModel::ws(n, m, p).unwrap(),
            RingModel::mrl(n, m, p).unwrap(),
        );
        let tv_nw = lattice_shortcut_gap(
            RingModel::nw(n, m, p).unwrap(),
            RingModel::rrl(n, m).unwrap(),
        );
        if step == 0 {
            assert!(tv_ws < 0.05, "ws gap {tv_ws} at p=0.1");
            assert!(tv_nw < 0.05, "nw gap {tv_nw} at p=0.1");
        }
        assert!(
            tv_ws <= prev.0 && tv_nw <= prev.1,
            "gap grew at p={p}: ws {tv_ws} (prev {}), nw {tv_nw} (prev {})",
            prev.0,
            prev.1
        );
        prev = (tv_ws, tv_nw);
    }
}

fn lattice_shortcut_gap(full: RingModel, lattice: RingModel) -> f64 {
    let pair = NodeSet::pair(0, 1).unwrap();
    let exact = set_cns_distribution(&ProbModel::from(full.clone()), &pair).unwrap();
    let lattice_part = set_cns_distribution(&ProbModel::from(lattice), &pair).unwrap();
    let far = full.n() - 2 - full.overlap_count(1) - full.one_side_count(1);
    let shortcut = poisson_binomial(&vec![full.alpha() * full.alpha(); far as usize]).unwrap();
    exact.total_variation(&convolve(&lattice_part, &shortcut).unwrap())
}

fn c8() {
    let (n, m) = (2000u32, 25u32);
    let ba = BaModel::new(n, m, m).unwrap();
    assert!(
        ba.max_residual() <= 1e-8,
        "row-sum residual {}",
        ba.max_residual()
    );
    let graph = ProbModel::from(ba).sample(42);
    let mean_degree = graph.mean_degree();
    let target = 2.0 * m as f64;
    assert!(
        (mean_degree - target).abs() / target < 0.02,
        "mean degree {mean_degree}"
    );
    let degrees: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let gamma = fit_power_law_exponent(&degrees, m as usize).unwrap();
    assert!((2.5..=3.5).contains(&gamma), "exponent {gamma}");
}

fn c9() {
    let graphs: Vec<(&str, Graph)> = vec![
        (
            "ws",
            ProbModel::from(RingModel::ws(1000, 25, 0.4).unwrap()).sample(7),
        ),
        ("ba", ProbModel::from(BaModel::new(1000, 25, 25).unwrap()).sample(7)),
    ];
    for (name, graph) in &graphs {
        let mut opts = EvalOptions::new(99);
        opts.indices = vec![
            IndexSpec::new(IndexKind::Cn),
            IndexSpec::new(IndexKind::Ra),
            IndexSpec::new(IndexKind::Aa),
        ];
        let report = evaluate(graph, &opts).unwrap();
        for row in &report.indices {
            let auc_gap =
                (row.auc_theoretical.unwrap() - row.auc_experimental_mean.unwrap()).abs();
            assert!(auc_gap <= 0.03, "{name}/{}: AUC gap {auc_gap}", row.label);
            let prec_gap = (row.precision_theoretical.unwrap()
                - row.precision_experimental_mean.unwrap())
            .abs();
            assert!(
                prec_gap <= 0.05,
                "{name}/{}: precision gap {prec_gap}",
                row.label
            );
        }
    }
}

fn c10() {
    let Some(graph) = load_jazz() else {
        panic!("SKIP: no jazz edge list found under data/");
    };
    assert_eq!(graph.node_count(), 198, "jazz node count");
    let mut opts = EvalOptions::new(5);
    opts.indices = vec![IndexSpec::new(IndexKind::Cn)];
    let report = evaluate(&graph, &opts).unwrap();
    let row = &report.indices[0];
    let auc_exp = row.auc_experimental_mean.unwrap();
    let auc_th = row.auc_theoretical.unwrap();
    let prec_th = row.precision_theoretical.unwrap();
    assert!(
        (auc_exp - 0.954).abs() <= 0.015,
        "experimental CN AUC {auc_exp}"
    );
    assert!((auc_th - 0.958).abs() <= 0.01, "theoretical CN AUC {auc_th}");
    assert!(
        (prec_th - 0.523).abs() <= 0.04,
        "theoretical CN precision {prec_th}"
    );
}

/// Reads the jazz collaboration network if a copy is present, accepting
/// either a bare edge list or the Pajek file (edges after an *Edges or
/// *Arcs section header).
fn load_jazz() -> Option<Graph> {
    let root = concat!(env!("CARGO_MANIFEST_DIR"), "/../..");
    let candidates = [
        "data/jazz.net",
        "data/jazz.txt",
        "data/jazz.edges",
        "data/out.arenas-jazz",
    ];
    for rel in candidates {
        let path = format!("{root}/{rel}");
        let Ok(text) = std::fs::read_to_string(&path) else {
            continue;
        };
        let mut in_edges = !text.to_lowercase().contains("*vertices");
        let mut cleaned = String::new();
        for line in text.lines() {
            let lower = line.trim().to_lowercase();
            if lower.starts_with("*edges") || lower.starts_with("*arcs") {
                in_edges = true;
                continue;
            }
            if lower.starts_with('*') {
                in_edges = false;
                continue;
            }
            if in_edges {
                // keep the endpoint columns, drop any weight column
                let mut it = line.split_whitespace();
                if let (Some(a), Some(b)) = (it.next(), it.next()) {
                    cleaned.push_str(a);
                    cleaned.push(' ');
                    cleaned.push_str(b);
                    cleaned.push('\n');
                }
            }
        }
        let loaded = cnsdist::graph::load_edge_list(
            cleaned.as_bytes(),
            &cnsdist::graph::ParseOptions::default(),
        )
        .ok()?;
        return Some(loaded.graph);
    }
    None
}

fn c11() {
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let random_pmf = |rng: &mut ChaCha8Rng| {
        let len = rng.random_range(1..=20usize);
        let mut support: Vec<f64> = Vec::with_capacity(len);
        let mut x = rng.random_range(-25i32..0) as f64 / 2.0;
        for _ in 0..len {
            x += rng.random_range(1..=6u32) as f64 / 2.0;
            support.push(x);
        }
        let weights: Vec<f64> = (0..len).map(|_| rng.random_range(0.01..1.0)).collect();
        Pmf::from_weights(support, weights).unwrap()
    };
    for _ in 0..100 {
        let p = random_pmf(&mut rng);
        assert_eq!(auc_theoretical(&p, &p), 0.5);
    }
    for _ in 0..100 {
        let p_c = random_pmf(&mut rng);
        let p_d = random_pmf(&mut rng);
        let monotone = |x: f64| x.powi(3) + 2.0 * x;
        let tc = Pmf::new(
            p_c.support().iter().map(|&x| monotone(x)).collect(),
            p_c.probs().to_vec(),
        )
        .unwrap();
        let td = Pmf::new(
            p_d.support().iter().map(|&x| monotone(x)).collect(),
            p_d.probs().to_vec(),
        )
        .unwrap();
        assert_eq!(
            auc_theoretical(&p_c, &p_d),
            auc_theoretical(&tc, &td),
            "rank transform moved the AUC"
        );
    }

    // Katz against its truncated power series on a sparse ER instance
    let graph = ProbModel::from(RingModel::er_from_mean_degree(50, 6.0).unwrap()).sample(3);
    let n = graph.node_count();
    let phi = 0.01f64;
    let table = ScoreTable::compute(&graph, IndexKind::Katz, Some(phi)).unwrap();
    let mut a = vec![vec![0.0f64; n]; n];
    for (u, v) in graph.edges() {
        a[u as usize][v as usize] = 1.0;
        a[v as usize][u as usize] = 1.0;
    }
    let mut term = a.clone();
    let mut series = vec![vec![0.0f64; n]; n];
    for l in 1..=30 {
        let scale = phi.powi(l);
        for i in 0..n {
            for j in 0..n {
                series[i][j] += scale * term[i][j];
            }
        }
        if l < 30 {
            term = mat_mul(&term, &a);
        }
    }
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            let got = table.score_of(i, j).unwrap();
            let expect = series[i as usize][j as usize];
            assert!(
                (got - expect).abs() <= 1e-10,
                "katz({i},{j}): {got} vs {expect}"
            );
        }
    }
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut out = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}
