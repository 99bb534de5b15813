//! Locate and classify every fixed point of the map with a seeded Newton search.

use triclock::analysis::{find_fixed_points, FIXED_POINT_RESIDUAL};
use triclock::io::{fixed_point_report, fixed_point_text_table};
use triclock::CouplingParams;

fn main() {
    for eps in [0.01, 0.05, 0.1] {
        let params = CouplingParams::new(eps);
        let report = fixed_point_report(&params, 50).expect("valid parameters");
        println!("eps = {eps}");
        print!("{}", fixed_point_text_table(&report));

        let search = find_fixed_points(50, FIXED_POINT_RESIDUAL, &params).unwrap();
        println!(
            "{} seeds, {} distinct roots, {} seeds failed to converge\n",
            search.seeds,
            search.roots.len(),
            search.non_convergent.len()
        );
    }
}
