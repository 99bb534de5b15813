//! Rasterise the basins of the two attractors and draw them as SVG.
//!
//! Writes `basins.bin` and `basins.svg` to the current directory.

use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use triclock::analysis::{classify, known_fixed_points};
use triclock::basin::{default_max_iter, rasterize, BasinLabel, DEFAULT_TOL};
use triclock::io::{render_portrait, Layer, PortraitData, PortraitSpec};
use triclock::CouplingParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let eps = 0.05;
    let params = CouplingParams::new(eps);
    let t = Instant::now();
    let grid = rasterize(200, &params, DEFAULT_TOL, default_max_iter(eps))?;
    println!("200x200 raster in {:.2} s", t.elapsed().as_secs_f64());
    for l in [
        BasinLabel::Upper,
        BasinLabel::Lower,
        BasinLabel::Boundary,
        BasinLabel::Unresolved,
    ] {
        println!("{:<10} {}", l.name(), grid.count(l));
    }

    grid.write_binary(BufWriter::new(File::create("basins.bin")?))?;
    let data = PortraitData {
        fixed_points: known_fixed_points()
            .into_iter()
            .map(|p| classify(p, &params))
            .collect::<Result<_, _>>()?,
        basin: Some(grid),
        ..Default::default()
    };
    let spec = PortraitSpec {
        layers: vec![Layer::BasinBackground, Layer::FixedPoints],
        ..Default::default()
    };
    std::fs::write("basins.svg", render_portrait(&spec, &data)?)?;
    println!("wrote basins.bin and basins.svg");
    Ok(())
}
