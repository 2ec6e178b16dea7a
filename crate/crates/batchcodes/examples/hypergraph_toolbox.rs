//! Hypergraph machinery: Berge girth through the incidence graph,
//! cycle-structure classification, the kappa-sparsity condition, and
//! re-wiring away short Berge cycles.
//!
//! ```bash
//! cargo run --example hypergraph_toolbox
//! ```

use batchcodes::formats::hypergraph_to_text;
use batchcodes::hypergraphs::Hypergraph;

fn main() {
    // A triple system on 7 points (the greedy packing builds the same one).
    let fano = Hypergraph::new(
        7,
        vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ],
    )
    .unwrap();
    println!("seven triples on seven points:");
    print!("{}", hypergraph_to_text(&fano));
    println!(
        "Berge girth {:?} (incidence girth {:?}), Berge-connected: {}",
        fano.berge_girth(),
        fano.incidence_graph().girth(),
        fano.is_berge_connected()
    );
    let c = fano.classify_cycles().unwrap();
    println!(
        "classification: {:?}, slack {} = cycle-space dimension {}",
        c.class, c.slack, c.cycle_space_dim
    );
    for kappa in [2usize, 3] {
        let check = fano.satisfies_sparsity(kappa, 1 << 22).unwrap();
        match check.violation {
            None => println!("sparsity condition at kappa = {kappa}: holds"),
            Some(edges) => {
                let union: std::collections::BTreeSet<usize> = edges
                    .iter()
                    .flat_map(|&i| fano.edges()[i].iter().map(|v| v + 1))
                    .collect();
                println!(
                    "sparsity condition at kappa = {kappa}: fails — edges {edges:?} span only \
                     {} vertices {union:?}",
                    union.len()
                );
            }
        }
    }

    // Two triples sharing a pair form a Berge 2-cycle; re-wiring moves one
    // of them onto a fresh vertex and restores girth >= 4.
    println!();
    let clashing = Hypergraph::new(7, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
    println!(
        "before re-wiring (Berge girth {:?}):",
        clashing.berge_girth()
    );
    print!("{}", hypergraph_to_text(&clashing));
    let rewired = clashing.rewire(3, 1 << 22).unwrap();
    println!("after re-wiring (Berge girth {:?}):", rewired.berge_girth());
    print!("{}", hypergraph_to_text(&rewired));
}
