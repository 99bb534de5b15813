use serde::{Deserialize, Serialize};

use super::fixed_points::{classify, known_fixed_points, FixedPointRecord, StabilityClass};
use super::segments::invariant_segments;
use super::AnalysisError;
use crate::map::three_clock_step;
use crate::params::CouplingParams;
use crate::phase::PhasePoint;

/// Offset of the first orbit point from the source, along the unit direction.
pub const HETEROCLINIC_STEP: f64 = 1e-6;
/// An orbit has arrived once it is this close (Euclidean) to a fixed point.
pub const HETEROCLINIC_ARRIVAL: f64 = 1e-6;

/// Endpoint classes of a connection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeteroclinicKind {
    /// saddle → attractor
    Sa,
    /// repeller → saddle
    Rs,
    /// repeller → attractor
    Ra,
}

impl HeteroclinicKind {
    fn from_classes(from: StabilityClass, to: StabilityClass) -> Result<Self, AnalysisError> {
        use StabilityClass::*;
        match (from, to) {
            (Saddle, Attractor) => Ok(Self::Sa),
            (Repeller, Saddle) => Ok(Self::Rs),
            (Repeller, Attractor) => Ok(Self::Ra),
            _ => Err(AnalysisError::UnexpectedConnection { from, to }),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Sa => "sa",
            Self::Rs => "rs",
            Self::Ra => "ra",
        }
    }
}

/// A traced forward orbit between two fixed points.
///
/// `samples[0]` is the seed `source + step·direction` and every later sample
/// is `F` of the previous one; the last sample lies within
/// [`HETEROCLINIC_ARRIVAL`] of `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeteroclinicOrbit {
    pub source: FixedPointRecord,
    pub target: FixedPointRecord,
    pub kind: HeteroclinicKind,
    /// Unit seeding direction.
    pub direction: [f64; 2],
    pub samples: Vec<PhasePoint>,
}

impl HeteroclinicOrbit {
    /// Number of map applications performed.
    pub fn iterations(&self) -> usize {
        self.samples.len() - 1
    }
}

fn unit(d: [f64; 2]) -> Option<[f64; 2]> {
    let n = d[0].hypot(d[1]);
    (n > 0.0 && n.is_finite()).then(|| [d[0] / n, d[1] / n])
}

/// Unit `d` is an unstable direction when it is an eigenvector of the source
/// Jacobian whose eigenvalue has modulus above 1.
fn is_unstable_direction(src: &FixedPointRecord, d: [f64; 2]) -> bool {
    let jd = src.jacobian.mul_vec(d);
    let lambda = jd[0] * d[0] + jd[1] * d[1];
    let off = (jd[0] - lambda * d[0]).hypot(jd[1] - lambda * d[1]);
    off < 1e-9 && lambda.abs() > 1.0
}

/// Seed at `source + step·direction` and iterate `F` until the orbit comes
/// within [`HETEROCLINIC_ARRIVAL`] of a fixed point other than the source.
pub fn trace_heteroclinic(
    source: &FixedPointRecord,
    direction: [f64; 2],
    params: &CouplingParams,
    step: f64,
    max_iter: usize,
) -> Result<HeteroclinicOrbit, AnalysisError> {
    params.validate_for_analysis()?;
    if !(step > 0.0) {
        return Err(AnalysisError::Tolerance(step));
    }
    if !matches!(
        source.class,
        StabilityClass::Saddle | StabilityClass::Repeller
    ) {
        return Err(AnalysisError::SourceNotUnstable(source.location));
    }
    let dir = unit(direction)
        .filter(|d| is_unstable_direction(source, *d))
        .ok_or(AnalysisError::NotUnstableDirection(
            direction[0],
            direction[1],
        ))?;

    let targets: Vec<FixedPointRecord> = known_fixed_points()
        .into_iter()
        .filter(|p| p.dist(source.location) > 10.0 * HETEROCLINIC_ARRIVAL)
        .map(|p| classify(p, params))
        .collect::<Result<_, _>>()?;

    let seed = PhasePoint::new(
        source.location.x + step * dir[0],
        source.location.y + step * dir[1],
    );
    if !seed.in_square(0.0) {
        return Err(AnalysisError::SeedOutsideSquare(seed));
    }
    let mut samples = vec![seed];
    let mut p = seed;
    for _ in 0..=max_iter {
        if let Some(t) = targets
            .iter()
            .find(|t| t.location.dist(p) < HETEROCLINIC_ARRIVAL)
        {
            let kind = HeteroclinicKind::from_classes(source.class, t.class)?;
            return Ok(HeteroclinicOrbit {
                source: source.clone(),
                target: t.clone(),
                kind,
                direction: dir,
                samples,
            });
        }
        if samples.len() > max_iter {
            break;
        }
        p = three_clock_step(p, params);
        // F maps S into itself, so this only fires on a numerical defect.
        if !p.in_square(0.0) {
            return Err(AnalysisError::LeftSquare(p));
        }
        samples.push(p);
    }
    Err(AnalysisError::NoConvergence {
        source_point: source.location,
        last: p,
        max_iter,
    })
}

/// All heteroclinics found by seeding from every unstable fixed point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeteroclinicCensus {
    pub orbits: Vec<HeteroclinicOrbit>,
    /// Seeds `(source, direction)` that fell outside `S` and were skipped.
    pub discarded: Vec<(PhasePoint, [f64; 2])>,
}

impl HeteroclinicCensus {
    pub fn count(&self, kind: HeteroclinicKind) -> usize {
        self.orbits.iter().filter(|o| o.kind == kind).count()
    }
}

/// Trace saddles along both signs of their unstable eigenvector, and
/// repellers along every straight invariant line through them.
///
/// The repellers are the corners, where the Jacobian is a multiple of the
/// identity, so their eigenvectors do not single out the connections; the
/// invariant lines do.
pub fn heteroclinic_census(
    params: &CouplingParams,
    max_iter: usize,
) -> Result<HeteroclinicCensus, AnalysisError> {
    params.validate_for_analysis()?;
    let records: Vec<FixedPointRecord> = known_fixed_points()
        .into_iter()
        .map(|p| classify(p, params))
        .collect::<Result<_, _>>()?;
    let lines: Vec<(PhasePoint, PhasePoint)> = invariant_segments()
        .iter()
        .map(|s| s.line_endpoints())
        .collect();

    let mut orbits = Vec::new();
    let mut discarded = Vec::new();
    for rec in &records {
        let directions: Vec<[f64; 2]> = match rec.class {
            StabilityClass::Saddle => rec
                .unstable_directions()
                .into_iter()
                .flat_map(|v| [v, [-v[0], -v[1]]])
                .collect(),
            StabilityClass::Repeller => lines
                .iter()
                .filter_map(|&(a, b)| {
                    let other = if a.dist(rec.location) < 1e-12 {
                        b
                    } else if b.dist(rec.location) < 1e-12 {
                        a
                    } else {
                        return None;
                    };
                    unit([other.x - rec.location.x, other.y - rec.location.y])
                })
                .collect(),
            _ => continue,
        };
        for d in directions {
            match trace_heteroclinic(rec, d, params, HETEROCLINIC_STEP, max_iter) {
                Ok(o) => orbits.push(o),
                Err(AnalysisError::SeedOutsideSquare(_)) => discarded.push((rec.location, d)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(HeteroclinicCensus { orbits, discarded })
}
