//! Compare one cycle of the exact kick simulation with one step of the
//! first-order map. The discrepancy should shrink fourfold when ε halves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triclock::event::exact_cycle_map;
use triclock::{three_clock_step, CouplingParams, PhasePoint, TWO_PI};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let starts: Vec<PhasePoint> = (0..100)
        .map(|_| {
            let a: f64 = rng.gen_range(0.01..TWO_PI - 0.01);
            let b: f64 = rng.gen_range(0.01..TWO_PI - 0.01);
            PhasePoint::new(a.min(b), a.max(b))
        })
        .collect();

    let mut prev: Option<f64> = None;
    for eps in [8e-3, 4e-3, 2e-3, 1e-3, 5e-4] {
        let params = CouplingParams::new(eps);
        let err = starts
            .iter()
            .map(|&s| {
                exact_cycle_map(s, &params)
                    .unwrap()
                    .dist_inf(three_clock_step(s, &params))
            })
            .fold(0.0, f64::max);
        match prev {
            Some(p) => println!(
                "eps {eps:<7} max error {err:.4e}  ratio {:.3}  C = {:.3}",
                p / err,
                err / (eps * eps)
            ),
            None => println!(
                "eps {eps:<7} max error {err:.4e}               C = {:.3}",
                err / (eps * eps)
            ),
        }
        prev = Some(err);
    }
}
