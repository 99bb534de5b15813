//! Closed-form 2×2 linear algebra.

use serde::{Deserialize, Serialize};

/// Row-major 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

/// Real spectrum of a 2×2 matrix, eigenvalues in descending order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealEigen {
    pub values: [f64; 2],
    /// Unit eigenvectors matching `values`.
    pub vectors: [[f64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 {
            m: [[a, b], [c, d]],
        }
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        let [[a, b], [c, d]] = self.m;
        let [[e, f], [g, h]] = other.m;
        Mat2::new(a + e, b + f, c + g, d + h)
    }

    pub fn mul_vec(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Solve `self · u = rhs`; `None` when the matrix is numerically singular.
    pub fn solve(&self, rhs: [f64; 2]) -> Option<[f64; 2]> {
        let det = self.det();
        let scale = self
            .m
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if scale == 0.0 || det.abs() <= 1e-14 * scale * scale {
            return None;
        }
        let [[a, b], [c, d]] = self.m;
        Some([
            (d * rhs[0] - b * rhs[1]) / det,
            (a * rhs[1] - c * rhs[0]) / det,
        ])
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut out = 0.0_f64;
        for i in 0..2 {
            for j in 0..2 {
                out = out.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        out
    }

    /// Eigen-decomposition when the spectrum is real.
    ///
    /// Uses `λ = (a+d)/2 ± sqrt(((a−d)/2)² + bc)`, which avoids the
    /// cancellation of the `tr²/4 − det` form for near-identity matrices.
    /// Returns `None` for a complex pair.
    pub fn real_eigen(&self) -> Option<RealEigen> {
        let [[a, b], [c, d]] = self.m;
        let half_diff = 0.5 * (a - d);
        let disc = half_diff * half_diff + b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs()).max(1.0);
        if disc < -1e-15 * scale * scale {
            return None;
        }
        let root = disc.max(0.0).sqrt();
        let mid = 0.5 * (a + d);
        let values = [mid + root, mid - root];
        let vectors = [
            self.eigenvector(values[0], 0),
            self.eigenvector(values[1], 1),
        ];
        Some(RealEigen { values, vectors })
    }

    fn eigenvector(&self, lambda: f64, slot: usize) -> [f64; 2] {
        let [[a, b], [c, d]] = self.m;
        // pick the better-conditioned row of (A − λI)
        let r1 = [b, lambda - a];
        let r2 = [lambda - d, c];
        let n1 = r1[0].hypot(r1[1]);
        let n2 = r2[0].hypot(r2[1]);
        let tiny = 1e-13 * a.abs().max(d.abs()).max(1.0);
        if n1 < tiny && n2 < tiny {
            // scalar multiple of the identity: any basis works
            return if slot == 0 { [1.0, 0.0] } else { [0.0, 1.0] };
        }
        let v = if n1 >= n2 { r1 } else { r2 };
        let n = v[0].hypot(v[1]);
        let mut u = [v[0] / n, v[1] / n];
        // deterministic sign: first non-zero component positive
        if u[0] < -1e-15 || (u[0].abs() <= 1e-15 && u[1] < 0.0) {
            u = [-u[0], -u[1]];
        }
        u
    }
}
