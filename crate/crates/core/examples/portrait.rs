//! Assemble the full phase portrait: basins, invariant segments,
//! heteroclinics, sample orbits and fixed points. Writes `portrait.svg`.

use triclock::analysis::{classify, heteroclinic_census, invariant_segments, known_fixed_points};
use triclock::basin::{default_max_iter, orbit, rasterize, DEFAULT_TOL};
use triclock::io::{render_portrait, Layer, PortraitData, PortraitSpec};
use triclock::{CouplingParams, PhasePoint};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = 0.05;
    let params = CouplingParams::new(eps);
    let iters = default_max_iter(eps);
    let seeds = [
        (0.5, 5.5),
        (5.5, 0.5),
        (1.0, 1.2),
        (1.2, 1.0),
        (3.0, 6.0),
        (6.0, 3.0),
    ];
    let data = PortraitData {
        fixed_points: known_fixed_points()
            .into_iter()
            .map(|p| classify(p, &params))
            .collect::<Result<_, _>>()?,
        heteroclinics: heteroclinic_census(&params, 20 * iters)?.orbits,
        segments: invariant_segments(),
        basin: Some(rasterize(150, &params, DEFAULT_TOL, iters)?),
        orbits: seeds
            .iter()
            .map(|&(x, y)| orbit(PhasePoint::new(x, y), &params, iters))
            .collect(),
    };
    let spec = PortraitSpec {
        layers: Layer::ALL.to_vec(),
        ..Default::default()
    };
    let svg = render_portrait(&spec, &data)?;
    std::fs::write("portrait.svg", &svg)?;
    println!("wrote portrait.svg ({} bytes)", svg.len());
    Ok(())
}
