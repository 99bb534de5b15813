//! Check that the ten invariant segments are mapped into themselves, and
//! locate the fixed points of the one-dimensional restriction maps.

use std::f64::consts::PI;

use triclock::analysis::{invariant_segments, verify_invariance, RestrictionMap};
use triclock::io::segment_text_table;
use triclock::CouplingParams;

fn main() {
    let params = CouplingParams::new(0.1);
    let checks: Vec<_> = invariant_segments()
        .iter()
        .map(|s| verify_invariance(s, &params, 1000))
        .collect();
    print!("{}", segment_text_table(&checks));

    for (name, map, b) in [
        ("g", RestrictionMap::G, 2.0 * PI),
        ("h1", RestrictionMap::H1, 2.0 * PI),
        ("h2", RestrictionMap::H2, 2.0 * PI / 3.0),
    ] {
        let roots = map.fixed_points(0.0, b, 2000);
        let shown: Vec<String> = roots.iter().map(|r| format!("{:.6}", r / PI)).collect();
        println!("{name}: fixed points at [{}]·π", shown.join(", "));
    }
}
