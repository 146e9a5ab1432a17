//! One two-parameter model covers the whole ring family: every node
//! pair within lattice range m links with probability η, every farther
//! pair with probability α. Setting (η, α) recovers RRL, MRL, ER, WS
//! and NW — and factoring the per-pair generating function splits WS
//! and NW into "lattice part ⊛ shortcut part" convolutions.

use cnsdist::models::{ProbModel, RingModel};
use cnsdist::pmf::poisson_binomial;
use cnsdist::{convolve, set_cns_distribution, NodeSet};

fn main() {
    let (n, m, p) = (1000u32, 25u32, 0.1f64);

    // specializations: Γ agrees pointwise with the dedicated constructors
    let k = 2.0 * m as f64; // ER matched to the lattice's mean degree
    let cases: Vec<(&str, RingModel, RingModel)> = vec![
        (
            "rrl",
            RingModel::rrl(n, m).unwrap(),
            RingModel::unified(n, m, 1.0, 0.0).unwrap(),
        ),
        (
            "mrl",
            RingModel::mrl(n, m, p).unwrap(),
            RingModel::unified(n, m, 1.0 - p, 0.0).unwrap(),
        ),
        (
            "er",
            RingModel::er_from_mean_degree(n, k).unwrap(),
            RingModel::unified(n, m, k / (n as f64 - 1.0), k / (n as f64 - 1.0)).unwrap(),
        ),
        (
            "ws",
            RingModel::ws(n, m, p).unwrap(),
            RingModel::unified(
                n,
                m,
                1.0 - p,
                2.0 * m as f64 * p / (n as f64 - 1.0 - 2.0 * m as f64),
            )
            .unwrap(),
        ),
        (
            "nw",
            RingModel::nw(n, m, p).unwrap(),
            RingModel::unified(
                n,
                m,
                1.0,
                2.0 * m as f64 * p / (n as f64 - 1.0 - 2.0 * m as f64),
            )
            .unwrap(),
        ),
    ];
    for (name, special, unified) in &cases {
        for d in [1u32, m, m + 1, 2 * m, 2 * m + 1] {
            assert_eq!(
                special.gamma_at_distance(d),
                unified.gamma_at_distance(d),
                "{name} at distance {d}"
            );
        }
        println!(
            "{name:>3} == unified(eta={:.4}, alpha={:.6})",
            unified.eta(),
            unified.alpha()
        );
    }

    // convolution identities for a neighboring pair (ring distance 1):
    //   WS ≈ MRL ⊛ shortcut-part, NW = RRL ⊛ shortcut-part
    println!("\nnear-pair CNS as lattice ⊛ shortcuts (n={n}, m={m}):");
    println!("{:>8} {:>10} {:>10}", "p", "TV(ws)", "TV(nw)");
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for &p in &[0.1, 0.05, 0.025, 0.0125, 0.00625] {
        let tv_ws = lattice_shortcut_gap(RingModel::ws(n, m, p).unwrap(), RingModel::mrl(n, m, p).unwrap());
        let tv_nw = lattice_shortcut_gap(RingModel::nw(n, m, p).unwrap(), RingModel::rrl(n, m).unwrap());
        println!("{p:>8} {tv_ws:>10.2e} {tv_nw:>10.2e}");
        assert!(tv_ws < 0.05 && tv_nw < 0.05);
        assert!(tv_ws <= prev.0 && tv_nw <= prev.1, "gap must shrink as p -> 0");
        prev = (tv_ws, tv_nw);
    }
}

/// TV distance between the model's exact near-pair CNS law and the
/// convolution of its lattice part with an independent shortcut part.
fn lattice_shortcut_gap(full: RingModel, lattice: RingModel) -> f64 {
    let pair = NodeSet::pair(0, 1).unwrap();
    let exact = set_cns_distribution(&ProbModel::from(full.clone()), &pair).unwrap();
    let lattice_part = set_cns_distribution(&ProbModel::from(lattice), &pair).unwrap();
    // candidates outside both lattice windows connect to 0 and 1 with
    // probability alpha each
    let far = full.n() - 2 - full.overlap_count(1) - full.one_side_count(1);
    let shortcut_part =
        poisson_binomial(&vec![full.alpha() * full.alpha(); far as usize]).unwrap();
    let approx = convolve(&lattice_part, &shortcut_part).unwrap();
    exact.total_variation(&approx)
}
