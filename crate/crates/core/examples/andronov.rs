//! The return map of a single dry-friction clock converges to its limit cycle.

use triclock::andronov::{andronov_fixed_point, andronov_orbit};
use triclock::CouplingParams;

fn main() {
    for (mu, h) in [(0.1, 1.0), (0.125, 1.0), (0.05, 0.5)] {
        let params = CouplingParams::default().with_clock(mu, h);
        let vf = andronov_fixed_point(&params).unwrap().v;
        for v0 in [4.0 * mu + 0.01, 10.0] {
            let orbit = andronov_orbit(v0, &params, 200).unwrap();
            let n = orbit.iter().position(|v| (v - vf).abs() < 1e-10);
            println!(
                "mu {mu:<6} h {h:<4} v0 {v0:<7.3} -> v_f = {vf:.12}, reached to 1e-10 after {}",
                n.map_or("more than 200 steps".into(), |n| format!("{n} steps"))
            );
        }
    }
}
