//! Basins of attraction of `F` over `S`, sampled at cell centres.

use std::io::{self, Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::map::three_clock_step;
use crate::params::{CouplingParams, ParamError};
use crate::phase::{PhasePoint, TWO_PI};

/// Points this close to the diagonal are treated as lying on it.
pub const DIAGONAL_BAND: f64 = 1e-13;
pub const DEFAULT_TOL: f64 = 1e-6;

/// `ceil(60/ε)`.
pub fn default_max_iter(eps: f64) -> usize {
    (60.0 / eps).ceil() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[repr(u8)]
pub enum BasinLabel {
    /// Converged to `(2π/3, 4π/3)`.
    Upper = 0,
    /// Converged to `(4π/3, 2π/3)`.
    Lower = 1,
    /// On `∂S` or the diagonal, which no attractor can reach.
    Boundary = 2,
    Unresolved = 3,
}

impl BasinLabel {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(Self::Upper),
            1 => Some(Self::Lower),
            2 => Some(Self::Boundary),
            3 => Some(Self::Unresolved),
            _ => None,
        }
    }

    /// The label of the swapped point.
    pub fn mirror(self) -> Self {
        match self {
            Self::Upper => Self::Lower,
            Self::Lower => Self::Upper,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Upper => "upper",
            Self::Lower => "lower",
            Self::Boundary => "boundary",
            Self::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Error)]
pub enum BasinError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("resolution must be at least 2, got {0}")]
    Resolution(usize),
    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),
    #[error("could not build worker pool: {0}")]
    Pool(String),
    #[error("malformed grid file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

const UPPER: PhasePoint = PhasePoint::new(TWO_PI / 3.0, 2.0 * TWO_PI / 3.0);
const LOWER: PhasePoint = PhasePoint::new(2.0 * TWO_PI / 3.0, TWO_PI / 3.0);

fn on_invariant_boundary(p: PhasePoint) -> bool {
    p.on_boundary() || (p.x - p.y).abs() < DIAGONAL_BAND
}

/// Iterate `F` from `p` until it is within `tol` (∞-norm) of an attractor.
///
/// Returns the label and the number of map applications performed. Points on
/// `∂S` or the diagonal are labelled [`BasinLabel::Boundary`] immediately,
/// with zero iterations.
pub fn classify_point(
    p: PhasePoint,
    params: &CouplingParams,
    tol: f64,
    max_iter: usize,
) -> (BasinLabel, u32) {
    if on_invariant_boundary(p) {
        return (BasinLabel::Boundary, 0);
    }
    let mut q = p;
    let mut n = 0usize;
    loop {
        if q.dist_inf(UPPER) < tol {
            return (BasinLabel::Upper, n as u32);
        }
        if q.dist_inf(LOWER) < tol {
            return (BasinLabel::Lower, n as u32);
        }
        if n >= max_iter {
            return (BasinLabel::Unresolved, n as u32);
        }
        q = three_clock_step(q, params);
        n += 1;
    }
}

/// `p, F(p), …, Fⁿ(p)`.
pub fn orbit(p: PhasePoint, params: &CouplingParams, n: usize) -> Vec<PhasePoint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(p);
    let mut q = p;
    for _ in 0..n {
        q = three_clock_step(q, params);
        out.push(q);
    }
    out
}

/// Labels and iteration counts for a `resolution × resolution` lattice of
/// cell centres, row-major with rows of increasing `y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinGrid {
    pub resolution: usize,
    pub labels: Vec<BasinLabel>,
    pub iterations: Vec<u32>,
    pub params: CouplingParams,
    pub tol: f64,
    pub max_iter: usize,
}

impl BasinGrid {
    pub fn cell_size(&self) -> f64 {
        TWO_PI / self.resolution as f64
    }

    /// Centre of cell `(col, row)`.
    pub fn cell_center(&self, col: usize, row: usize) -> PhasePoint {
        cell_center(self.resolution, col, row)
    }

    pub fn label(&self, col: usize, row: usize) -> BasinLabel {
        self.labels[row * self.resolution + col]
    }

    pub fn count(&self, label: BasinLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// One CSV row per lattice row (lowest `y` first), labels as codes,
    /// followed by the same layout for iteration counts.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), BasinError> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        let n = self.resolution;
        for row in 0..n {
            w.write_record(
                self.labels[row * n..(row + 1) * n]
                    .iter()
                    .map(|l| l.code().to_string()),
            )?;
        }
        for row in 0..n {
            w.write_record(
                self.iterations[row * n..(row + 1) * n]
                    .iter()
                    .map(|c| c.to_string()),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    /// Labels only: `resolution` rows of `resolution` codes.
    pub fn write_labels_csv<W: Write>(&self, out: W) -> Result<(), BasinError> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        let n = self.resolution;
        for row in 0..n {
            w.write_record(
                self.labels[row * n..(row + 1) * n]
                    .iter()
                    .map(|l| l.code().to_string()),
            )?;
        }
        w.flush()?;
        Ok(())
    }

    /// Header `u64 resolution, f64 ε, f64 tol` (little-endian), then one
    /// label byte per cell, then one `u32` LE iteration count per cell.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<(), BasinError> {
        out.write_all(&(self.resolution as u64).to_le_bytes())?;
        out.write_all(&self.params.epsilon.to_le_bytes())?;
        out.write_all(&self.tol.to_le_bytes())?;
        let codes: Vec<u8> = self.labels.iter().map(|l| l.code()).collect();
        out.write_all(&codes)?;
        for c in &self.iterations {
            out.write_all(&c.to_le_bytes())?;
        }
        out.flush()?;
        Ok(())
    }

    /// Inverse of [`BasinGrid::write_binary`]. The layout carries only `ε`,
    /// so the other coupling constants take their defaults and `max_iter` is
    /// reset to `ceil(60/ε)`.
    pub fn read_binary<R: Read>(mut input: R) -> Result<Self, BasinError> {
        let mut b8 = [0u8; 8];
        input.read_exact(&mut b8)?;
        let resolution = usize::try_from(u64::from_le_bytes(b8))
            .map_err(|_| BasinError::Format("resolution overflows".into()))?;
        input.read_exact(&mut b8)?;
        let epsilon = f64::from_le_bytes(b8);
        input.read_exact(&mut b8)?;
        let tol = f64::from_le_bytes(b8);
        let cells = resolution
            .checked_mul(resolution)
            .ok_or_else(|| BasinError::Format("resolution overflows".into()))?;
        let mut codes = vec![0u8; cells];
        input.read_exact(&mut codes)?;
        let labels = codes
            .into_iter()
            .map(|c| {
                BasinLabel::from_code(c)
                    .ok_or_else(|| BasinError::Format(format!("label code {c}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut iterations = Vec::with_capacity(cells);
        let mut b4 = [0u8; 4];
        for _ in 0..cells {
            input.read_exact(&mut b4)?;
            iterations.push(u32::from_le_bytes(b4));
        }
        let mut rest = Vec::new();
        input.read_to_end(&mut rest)?;
        if !rest.is_empty() {
            return Err(BasinError::Format(format!("{} trailing bytes", rest.len())));
        }
        Ok(BasinGrid {
            resolution,
            labels,
            iterations,
            params: CouplingParams::new(epsilon),
            tol,
            max_iter: default_max_iter(epsilon),
        })
    }
}

fn cell_center(resolution: usize, col: usize, row: usize) -> PhasePoint {
    let h = TWO_PI / resolution as f64;
    PhasePoint::new((col as f64 + 0.5) * h, (row as f64 + 0.5) * h)
}

fn check(resolution: usize, params: &CouplingParams, tol: f64) -> Result<(), BasinError> {
    params.validate()?;
    if resolution < 2 {
        return Err(BasinError::Resolution(resolution));
    }
    if !(tol > 0.0) {
        return Err(BasinError::Tolerance(tol));
    }
    Ok(())
}

fn assemble(
    resolution: usize,
    params: &CouplingParams,
    tol: f64,
    max_iter: usize,
    cells: Vec<(BasinLabel, u32)>,
) -> BasinGrid {
    let (labels, iterations) = cells.into_iter().unzip();
    BasinGrid {
        resolution,
        labels,
        iterations,
        params: *params,
        tol,
        max_iter,
    }
}

fn classify_cells(
    resolution: usize,
    params: &CouplingParams,
    tol: f64,
    max_iter: usize,
) -> Vec<(BasinLabel, u32)> {
    (0..resolution * resolution)
        .into_par_iter()
        .map(|k| {
            let p = cell_center(resolution, k % resolution, k / resolution);
            classify_point(p, params, tol, max_iter)
        })
        .collect()
}

/// Classify every cell centre on rayon's global pool.
///
/// Cells are independent and collected in index order, so the result does
/// not depend on the number of workers.
pub fn rasterize(
    resolution: usize,
    params: &CouplingParams,
    tol: f64,
    max_iter: usize,
) -> Result<BasinGrid, BasinError> {
    check(resolution, params, tol)?;
    let cells = classify_cells(resolution, params, tol, max_iter);
    Ok(assemble(resolution, params, tol, max_iter, cells))
}

/// [`rasterize`] on a dedicated pool of `workers` threads.
pub fn rasterize_with_workers(
    resolution: usize,
    params: &CouplingParams,
    tol: f64,
    max_iter: usize,
    workers: usize,
) -> Result<BasinGrid, BasinError> {
    check(resolution, params, tol)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| BasinError::Pool(e.to_string()))?;
    let cells = pool.install(|| classify_cells(resolution, params, tol, max_iter));
    Ok(assemble(resolution, params, tol, max_iter, cells))
}
