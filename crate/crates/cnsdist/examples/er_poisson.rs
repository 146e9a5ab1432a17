//! In a sparse Erdős–Rényi graph the number of common neighbors of q
//! nodes is binomial with tiny success probability (⟨k⟩/(n−1))^q, so it
//! collapses onto a Poisson law with λ = (n−q)(⟨k⟩/(n−1))^q.

use cnsdist::{er_closed_form, er_poisson_approx};

fn main() {
    let (n, k) = (10_000u32, 500.0f64);
    println!("ER graph, n={n}, <k>={k}");

    for q in [2u32, 3] {
        let exact = er_closed_form(n, k, q).unwrap();
        let poisson = er_poisson_approx(n, k, q).unwrap();
        let lambda = (n - q) as f64 * (k / (n as f64 - 1.0)).powi(q as i32);
        let tv = exact.total_variation(&poisson);
        println!(
            "q={q}: lambda={lambda:.4}  mean={:.4}  var={:.4}  TV(exact, Poisson)={tv:.2e}",
            exact.mean(),
            exact.variance(),
        );
        assert!((exact.mean() - lambda).abs() / lambda < 0.01);
        assert!((exact.variance() - lambda).abs() / lambda < 0.01);
        assert!(tv < 1e-2);
    }

    // the approximation degrades once the graph stops being sparse
    let dense_tv = er_closed_form(100, 50.0, 2)
        .unwrap()
        .total_variation(&er_poisson_approx(100, 50.0, 2).unwrap());
    println!("dense counterexample (n=100, <k>=50, q=2): TV = {dense_tv:.3}");
    assert!(dense_tv > 1e-2);
}
