//! Batch codes from grid lines with progression-free slopes.
//!
//! Lines of r points in an m x r grid, one per row, with slopes drawn from
//! a set free of 3-term arithmetic progressions: two lines share at most
//! one point, and a Berge triangle would force a progression among the
//! slopes, so the hypergraph has Berge girth at least 4. Its incidence
//! graph then has girth at least 8 and the derived code is an
//! asynchronous batch code at t = r + 1.
//!
//! ```bash
//! cargo run --example progression_free_lines
//! ```

use batchcodes::constructions::{grid_line_code, grid_slopes, progression_free_set};
use batchcodes::verify::{is_asynchronous_batch_code, AsyncMode, SearchLimits};

fn main() {
    println!("progression-free sets (exact maximum up to 30, sphere shells beyond):");
    for nmax in [10usize, 20, 30, 64, 100] {
        let set = progression_free_set(nmax);
        println!("    nmax = {nmax:>3}: |A| = {:>2}  {set:?}", set.len());
    }

    println!();
    for m in [6usize, 9] {
        let slopes = grid_slopes(m, 3);
        let (h, code, report) = grid_line_code(m, 3).unwrap();
        println!(
            "m = {m}, r = 3, slopes {slopes:?}: {} lines on {} grid points",
            h.edge_count(),
            h.v_size()
        );
        println!(
            "    Berge girth {:?}, incidence girth {:?}",
            h.berge_girth(),
            report.girth
        );
        let verdict = is_asynchronous_batch_code(
            &code,
            report.t,
            AsyncMode::Strict,
            &SearchLimits::default(),
        )
        .unwrap();
        println!(
            "    [{},{}] code with rho = {}: asynchronous at t = {} -> {}",
            report.n, report.k, report.rho, report.t, verdict.holds
        );
        for edge in h.edges() {
            let e: Vec<usize> = edge.iter().map(|v| v + 1).collect();
            println!("    line {e:?}");
        }
        println!();
    }
}
