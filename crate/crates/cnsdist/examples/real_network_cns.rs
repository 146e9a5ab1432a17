//! Class-conditional CNS distributions of a real network, read from an
//! edge-list file. Pass a path as the first argument; without one, a
//! small-world surrogate is generated so the example stays runnable.
//!
//!     cargo run --example real_network_cns -- data/jazz.net

use cnsdist::graph::{load_edge_list, Graph, ParseOptions};
use cnsdist::models::{ProbModel, RingModel};
use cnsdist::{empirical_class_counts, empirical_class_distributions};
use std::fs::File;
use std::io::BufReader;

fn main() {
    let (graph, source) = match std::env::args().nth(1) {
        Some(path) => {
            let file = File::open(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
            let loaded = load_edge_list(BufReader::new(file), &ParseOptions::default())
                .unwrap_or_else(|e| panic!("{path}: {e}"));
            (loaded.graph, path)
        }
        None => {
            let g = ProbModel::from(RingModel::ws(200, 5, 0.3).unwrap()).sample(7);
            (g, "generated WS(200, 5, 0.3) surrogate".to_string())
        }
    };
    summarize(&graph, &source);
}

fn summarize(graph: &Graph, source: &str) {
    println!(
        "{source}: n={}, E={}, <k>={:.2}",
        graph.node_count(),
        graph.edge_count(),
        graph.mean_degree()
    );

    let counts = empirical_class_counts(graph);
    assert!(
        counts.mixture_exact(),
        "per-bin counts must satisfy c + d = a exactly"
    );

    let dists = empirical_class_distributions(graph).unwrap();
    println!(
        "chi_c = {:.6} (fraction of pairs that are linked)",
        dists.chi_c
    );
    let p_c = dists.p_c.as_ref().expect("network has links");
    let p_d = dists.p_d.as_ref().expect("network has unlinked pairs");
    println!(
        "connected pairs:    mean CNS {:.3}, median {}, max {}",
        p_c.mean(),
        p_c.median(),
        p_c.support().last().unwrap()
    );
    println!(
        "disconnected pairs: mean CNS {:.3}, median {}, P(0) = {:.3}",
        p_d.mean(),
        p_d.median(),
        p_d.prob_of(0.0)
    );

    // the gap between the two laws is what link prediction lives on
    println!("median separation: {}", p_c.median() - p_d.median());
    let head = |pmf: &cnsdist::pmf::Pmf| {
        pmf.iter()
            .take(6)
            .map(|(w, p)| format!("P({w})={p:.3}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    println!("p_c head: {}", head(p_c));
    println!("p_d head: {}", head(p_d));
}
