//! Iterate the three-clock phase-difference map and the two-clock Adler map.
//!
//! `cargo run --example map_orbit -- 0.05 1.0 2.5`

use triclock::{adler_step, jacobian, three_clock_step, CouplingParams, Phase, PhasePoint};

fn main() {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let eps = args.first().copied().unwrap_or(0.05);
    let mut p = PhasePoint::new(
        args.get(1).copied().unwrap_or(1.0),
        args.get(2).copied().unwrap_or(2.5),
    );
    let params = CouplingParams::new(eps);

    println!("three clocks, eps = {eps}");
    for n in 0..=200 {
        if n % 20 == 0 {
            println!("{n:>4}  x = {:.9}  y = {:.9}", p.x, p.y);
        }
        p = three_clock_step(p, &params);
    }
    let j = jacobian(p, &params);
    println!("Jacobian at the final point: {j:?}");

    println!("\ntwo clocks (Adler map), phase difference from 0.3");
    let mut phi = Phase::new(0.3);
    for n in 0..=400 {
        if n % 50 == 0 {
            println!("{n:>4}  phi = {:.9}", phi.value());
        }
        phi = adler_step(phi, &params);
    }
}
