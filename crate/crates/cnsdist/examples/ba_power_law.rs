//! The Barabási–Albert model enters the same machinery through one
//! sleight of hand: growth with preferential attachment is recast as a
//! static table of link probabilities Γ(i, j), chosen so that each
//! arriving node spends exactly m links in expectation. Degrees then
//! follow the familiar power law, and CNS inherits a heavy tail.

use cnsdist::empirical_class_distributions;
use cnsdist::models::{fit_power_law_exponent, BaModel, ProbModel};

fn main() {
    let (n, m) = (2000u32, 25u32);
    let ba = BaModel::new(n, m, m).unwrap();
    println!(
        "BA n={n} m={m}: worst |sum_j Gamma_ij - m| over arrivals = {:.2e}",
        ba.max_residual()
    );
    assert!(ba.max_residual() < 1e-8);

    // earliest nodes soak up most of the probability mass
    let early: f64 = ba.row_sum_existing(100);
    let late: f64 = ba.row_sum_existing(n - 1);
    println!("row sums: node 100 -> {early:.4}, node {} -> {late:.4}", n - 1);

    let graph = ProbModel::from(ba).sample(42);
    let mean_degree = graph.mean_degree();
    println!(
        "sampled graph: {} edges, mean degree {:.2} (2m = {})",
        graph.edge_count(),
        mean_degree,
        2 * m
    );
    assert!((mean_degree - 2.0 * m as f64).abs() / (2.0 * m as f64) < 0.02);

    let degrees: Vec<usize> = (0..n).map(|v| graph.degree(v)).collect();
    let gamma = fit_power_law_exponent(&degrees, m as usize).unwrap();
    println!("fitted degree exponent: {gamma:.2} (the BA limit is 3)");
    assert!((2.5..=3.5).contains(&gamma));

    // the CNS distribution of all pairs is heavy-tailed too: compare the
    // p99/p50 ratio against what the ER graph of equal density shows
    let dists = empirical_class_distributions(&graph).unwrap();
    let p_a = &dists.p_a;
    let quantile = |q: f64| {
        let mut acc = 0.0;
        for (x, p) in p_a.iter() {
            acc += p;
            if acc >= q {
                return x;
            }
        }
        *p_a.support().last().unwrap()
    };
    println!(
        "all-pair CNS quantiles: p50={} p99={} max={}",
        quantile(0.5),
        quantile(0.99),
        p_a.support().last().unwrap()
    );
    assert!(quantile(0.99) >= 8.0 * quantile(0.5).max(1.0));
}
