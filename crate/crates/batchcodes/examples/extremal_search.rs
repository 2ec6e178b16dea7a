//! Exact extremal search on small hypergraphs.
//!
//! B(eta, r, kappa) is the maximum number of hyperedges of an r-graph on
//! eta vertices with Berge girth above kappa; F is the same maximum under
//! the kappa-sparsity condition (no kappa edges inside kappa(r-1)
//! vertices). The two quantities agree, and a sparsity-extremal witness
//! can be re-wired into a girth-extremal one without losing edges.
//!
//! ```bash
//! cargo run --release --example extremal_search
//! ```

use batchcodes::extremal::{max_edges_berge_girth, verify_extremal_equality, ExtremalLimits};
use batchcodes::formats::hypergraph_to_text;

fn main() {
    println!(
        "{:>4} {:>3} {:>6} | {:>3} {:>3} {:>6} {:>8} {:>7}",
        "eta", "r", "kappa", "B", "F", "equal", "rewired", "nodes"
    );
    let triples = [
        (4, 2, 3),
        (5, 2, 3),
        (6, 2, 3),
        (6, 3, 2),
        (7, 3, 2),
        (6, 3, 3),
        (7, 3, 3),
        (8, 2, 3),
    ];
    for (eta, r, kappa) in triples {
        let eq = verify_extremal_equality(eta, r, kappa, ExtremalLimits::default()).unwrap();
        println!(
            "{:>4} {:>3} {:>6} | {:>3} {:>3} {:>6} {:>8} {:>7}",
            eta,
            r,
            kappa,
            eq.girth_value,
            eq.sparsity_value,
            eq.equal,
            eq.rewire_ok.map(|b| b.to_string()).unwrap_or("n/a".into()),
            eq.nodes
        );
        if r == 2 && kappa == 3 {
            assert_eq!(eq.girth_value, eta * eta / 4, "Mantel value");
        }
    }

    // A maximum linear triple system on 7 points: 7 blocks, pairwise
    // sharing at most one point.
    let fano_sized = max_edges_berge_girth(7, 3, 2, ExtremalLimits::default()).unwrap();
    println!(
        "\nextremal witness for (eta, r, kappa) = (7, 3, 2), B = {}:",
        fano_sized.value
    );
    print!("{}", hypergraph_to_text(&fano_sized.witness));
}
