//! Trace every heteroclinic connection out of the saddles and repellers.

use triclock::analysis::{heteroclinic_census, HeteroclinicKind};
use triclock::basin::default_max_iter;
use triclock::CouplingParams;

fn main() {
    let eps = 0.05;
    let params = CouplingParams::new(eps);
    let census = heteroclinic_census(&params, 20 * default_max_iter(eps)).unwrap();
    for o in &census.orbits {
        let s = o.source.location;
        let t = o.target.location;
        println!(
            "{:<3} ({:.4}, {:.4}) -> ({:.4}, {:.4})  {:>5} iterations",
            o.kind.label(),
            s.x,
            s.y,
            t.x,
            t.y,
            o.iterations()
        );
    }
    println!(
        "saddle->attractor {}, repeller->saddle {}, repeller->attractor {}, {} seeds left the square",
        census.count(HeteroclinicKind::Sa),
        census.count(HeteroclinicKind::Rs),
        census.count(HeteroclinicKind::Ra),
        census.discarded.len()
    );
}
