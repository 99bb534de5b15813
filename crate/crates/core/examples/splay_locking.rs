//! Run the exact simulation from random starts and report how the clocks
//! lock. Pass the number of clocks as the first argument (default 3).

use triclock::event::{run_until_locked, ClockEnsemble};
use triclock::io::{random_starts, simulation_report, simulation_text_table};
use triclock::CouplingParams;

fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let params = CouplingParams::new(0.05);

    let one = ClockEnsemble::new(vec![0.0, 2.0, 4.0], params).unwrap();
    let r = run_until_locked(&one, 1e-9, 5000).unwrap();
    println!(
        "start (0, 2, 4): locked after {} cycles, kick order {:?}, gaps {:?}",
        r.cycles, r.kick_order, r.cyclic_gaps
    );
    println!(
        "  instantaneous differences {:?} (offset from the kick timing at first order in eps)\n",
        r.state_differences
    );

    let starts = random_starts(n, 200, 11);
    let max_cycles = if n == 3 { 2000 } else { 30000 };
    let report = simulation_report(&starts, &params, 1e-6, max_cycles).unwrap();
    print!("{}", simulation_text_table(&report));
}
