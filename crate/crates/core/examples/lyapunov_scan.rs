//! Evaluate the discrete orbital derivative of the quadratic Lyapunov
//! functions on a lattice over both triangles.

use triclock::analysis::{orbital_derivative_scan, Region};
use triclock::CouplingParams;

fn main() {
    for eps in [0.01, 0.05, 0.1] {
        for region in [Region::Upper, Region::Lower] {
            let r = orbital_derivative_scan(region, &CouplingParams::new(eps), 300).unwrap();
            println!(
                "eps {eps:<5} {region:?}: {} samples, max DF {:.2e} at ({:.3}, {:.3}), away from fixed points {:.3e}, {}",
                r.samples,
                r.max_df,
                r.argmax.x,
                r.argmax.y,
                r.max_df_far,
                if r.passed { "non-positive" } else { "FAILED" }
            );
        }
    }
}
