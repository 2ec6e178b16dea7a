//! The two small codes that frame everything else in this crate.
//!
//! The [8,4] code below supports any 3 parallel requests AND stays
//! serviceable when one request finishes early and a new one arrives.
//! The [7,3] simplex code supports any 4 parallel requests, but a burst
//! of four x1's pins all seven servers, so a newly arriving x2 has to
//! wait — it is a batch code that is not an asynchronous batch code.
//!
//! ```bash
//! cargo run --example verify_golden_codes
//! ```

use batchcodes::constructions::{example1_code, simplex_code};
use batchcodes::verify::{
    enumerate_recovery_sets, is_asynchronous_batch_code, is_batch_code, is_pir_code, AsyncMode,
    SearchLimits,
};

fn main() {
    let limits = SearchLimits::default();

    let e1 = example1_code();
    println!("[8,4] grid code, generator matrix:");
    for row in e1.rows() {
        println!("    {row}");
    }
    println!("\nminimal recovery sets for x1 (1-based coordinates):");
    for set in enumerate_recovery_sets(&e1, 0, e1.n(), &limits).unwrap() {
        let coords: Vec<usize> = set.coords.iter().map(|c| c + 1).collect();
        println!("    {coords:?}");
    }
    for t in [2, 3] {
        let batch = is_batch_code(&e1, t, &limits).unwrap().holds;
        let pir = is_pir_code(&e1, t, &limits).unwrap().holds;
        let asynchronous = is_asynchronous_batch_code(&e1, t, AsyncMode::Strict, &limits)
            .unwrap()
            .holds;
        println!("t = {t}: batch = {batch}, pir = {pir}, asynchronous = {asynchronous}");
    }

    let sx = simplex_code();
    println!("\n[7,3] simplex code, generator matrix:");
    for row in sx.rows() {
        println!("    {row}");
    }
    let batch = is_batch_code(&sx, 4, &limits).unwrap().holds;
    let pir = is_pir_code(&sx, 4, &limits).unwrap().holds;
    println!("t = 4: batch = {batch}, pir = {pir}");

    let report = is_asynchronous_batch_code(&sx, 4, AsyncMode::Strict, &limits).unwrap();
    println!("t = 4: asynchronous = {}", report.holds);
    let w = report.witness.expect("failing verdicts carry a witness");
    let query: Vec<usize> = w.query.indices().iter().map(|i| i + 1).collect();
    println!("witness: query x{query:?} served as");
    for set in &w.assignment.sets {
        let coords: Vec<usize> = set.coords.iter().map(|c| c + 1).collect();
        println!("    x{} from y{coords:?}", set.target + 1);
    }
    println!(
        "after position {} completes, x{} cannot be recovered from the untouched servers",
        w.completed_pos + 1,
        w.newcomer + 1
    );
}
