//! Dense complex matrices and vectors with LU-based solves.
//!
//! Everything downstream (scattering blocks, the global system, port
//! reduction) is built on these two carriers. Matrices are dense and
//! row-major; systems stay small (tens of ports), so no sparsity is
//! exploited and factorizations are recomputed per call.
//!
//! Solves and inversions go through partial-pivoting LU. A matrix whose
//! infinity-norm condition estimate exceeds [`SINGULARITY_THRESHOLD`] is
//! reported as [`MatrixError::Singular`] instead of producing a blown-up
//! result; lossless resonators driven at exact resonance hit this path.

#![allow(clippy::needless_range_loop)] // indexed loops read clearest in the kernels

use num_complex::Complex64;
use thiserror::Error;

/// Condition-estimate ceiling above which solves refuse to proceed.
pub const SINGULARITY_THRESHOLD: f64 = 1e12;

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular matrix (condition estimate {condition:.3e})")]
    Singular { condition: f64 },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, MatrixError>;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let v = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch {
                context: format!(
                    "expected {}x{}={} entries, got {}",
                    rows,
                    cols,
                    rows * cols,
                    data.len()
                ),
            });
        }
        for (i, v) in data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(MatrixError::NonFinite {
                    row: i / cols,
                    col: i % cols,
                });
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from nested row slices; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        if nrows == 0 {
            return Err(MatrixError::Empty("from_rows"));
        }
        let ncols = rows[0].len();
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            if r.len() != ncols {
                return Err(MatrixError::DimensionMismatch {
                    context: "ragged rows".into(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(nrows, ncols, data)
    }

    /// 2x2 constructor used heavily by the Jones-matrix layer.
    pub fn from_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: vec![a, b, c, d],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Sets one entry. Construction-time helper; values are not mutated
    /// once a matrix has been handed out.
    pub(crate) fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn multiply(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch {
                context: format!(
                    "multiply: {}x{} by {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(MatrixError::DimensionMismatch {
                context: format!("mul_vec: {}x{} by {}", self.rows, self.cols, v.dim()),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.data[i * self.cols + j] * v.entries()[j];
            }
            out[i] = acc;
        }
        Ok(ComplexVector { data: out })
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn conjugate_transpose(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch {
                context: "sub: shapes differ".into(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Infinity norm (max absolute row sum).
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.data[i * self.cols + j].norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Largest singular value, by power iteration on AᴴA.
    ///
    /// Deterministic start vector; plenty of iterations for the small
    /// matrices used here. Used for passivity checks where only the
    /// comparison against 1 + tolerance matters.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.cols;
        if n == 0 {
            return 0.0;
        }
        let aha = self
            .conjugate_transpose()
            .multiply(self)
            .expect("square product");
        // Start vector with unequal components so no eigenvector is missed.
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * (i as f64 + 1.0)))
            .collect();
        let mut lambda = 0.0;
        for _ in 0..200 {
            let mut w = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    acc += aha.data[i * n + j] * v[j];
                }
                w[i] = acc;
            }
            let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            lambda = norm;
            for x in &mut w {
                *x /= norm;
            }
            v = w;
        }
        lambda.sqrt()
    }

    /// Inverse via LU; errors on non-square or ill-conditioned input.
    pub fn invert(&self) -> Result<ComplexMatrix> {
        let lu = LuFactors::new(self)?;
        let inv = lu.solve_matrix(&ComplexMatrix::identity(self.rows))?;
        let condition = self.inf_norm() * inv.inf_norm();
        if condition > SINGULARITY_THRESHOLD {
            return Err(MatrixError::Singular { condition });
        }
        Ok(inv)
    }

    /// Solves `self · x = b` for matrix right-hand sides.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        if b.rows != self.rows {
            return Err(MatrixError::DimensionMismatch {
                context: format!("solve: a is {}x{}, b has {} rows", self.rows, self.cols, b.rows),
            });
        }
        let lu = LuFactors::new(self)?;
        let inv = lu.solve_matrix(&ComplexMatrix::identity(self.rows))?;
        let condition = self.inf_norm() * inv.inf_norm();
        if condition > SINGULARITY_THRESHOLD {
            return Err(MatrixError::Singular { condition });
        }
        lu.solve_matrix(b)
    }

    /// Solves `self · x = b` for a single vector right-hand side.
    pub fn solve_vec(&self, b: &ComplexVector) -> Result<ComplexVector> {
        let bm = ComplexMatrix::new(b.dim(), 1, b.entries().to_vec())?;
        let x = self.solve(&bm)?;
        Ok(ComplexVector { data: x.data })
    }

    /// Estimate of the infinity-norm condition number, ‖A‖·‖A⁻¹‖.
    ///
    /// Returns infinity when the factorization breaks down on an exactly
    /// singular matrix.
    pub fn condition_estimate(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let lu = match LuFactors::new(self) {
            Ok(lu) => lu,
            Err(MatrixError::Singular { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        };
        let inv = lu.solve_matrix(&ComplexMatrix::identity(self.rows))?;
        Ok(self.inf_norm() * inv.inf_norm())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

/// Dense complex vector of field amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        for (i, v) in data.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(MatrixError::NonFinite { row: i, col: 0 });
            }
        }
        Ok(Self { data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Zero vector with the given entries placed at their indices.
    pub fn with_entries(dim: usize, entries: &[(usize, Complex64)]) -> Result<Self> {
        let mut data = vec![Complex64::new(0.0, 0.0); dim];
        for &(i, v) in entries {
            if i >= dim {
                return Err(MatrixError::DimensionMismatch {
                    context: format!("entry index {i} outside vector of dim {dim}"),
                });
            }
            data[i] = v;
        }
        Self::new(data)
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn set(&mut self, i: usize, v: Complex64) {
        self.data[i] = v;
    }

    /// Sum of |entry|² — total intensity carried by the vector.
    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

/// Partial-pivoting LU factorization of a square matrix.
struct LuFactors {
    n: usize,
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
}

impl LuFactors {
    fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(MatrixError::NotSquare {
                rows: a.rows,
                cols: a.cols,
            });
        }
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            // Pick the remaining row with the largest pivot magnitude.
            let mut p = k;
            let mut max = lu[k * n + k].norm();
            for i in (k + 1)..n {
                let mag = lu[i * n + k].norm();
                if mag > max {
                    max = mag;
                    p = i;
                }
            }
            if max == 0.0 {
                return Err(MatrixError::Singular {
                    condition: f64::INFINITY,
                });
            }
            pivots[k] = p;
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
            }
            let pivot = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor != Complex64::new(0.0, 0.0) {
                    for j in (k + 1)..n {
                        let sub = factor * lu[k * n + j];
                        lu[i * n + j] -= sub;
                    }
                }
            }
        }
        Ok(Self { n, lu, pivots })
    }

    /// Solves A·X = B column by column.
    fn solve_matrix(&self, b: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        if b.rows != n {
            return Err(MatrixError::DimensionMismatch {
                context: "solve_matrix: rhs rows".into(),
            });
        }
        let mut x = b.clone();
        // Apply row permutations.
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                for j in 0..x.cols {
                    x.data.swap(k * x.cols + j, p * x.cols + j);
                }
            }
        }
        // Forward substitution (unit lower triangle).
        for k in 0..n {
            for i in (k + 1)..n {
                let factor = self.lu[i * n + k];
                if factor != Complex64::new(0.0, 0.0) {
                    for j in 0..x.cols {
                        let sub = factor * x.data[k * x.cols + j];
                        x.data[i * x.cols + j] -= sub;
                    }
                }
            }
        }
        // Back substitution.
        for k in (0..n).rev() {
            let pivot = self.lu[k * n + k];
            for j in 0..x.cols {
                x.data[k * x.cols + j] /= pivot;
            }
            for i in 0..k {
                let factor = self.lu[i * n + k];
                if factor != Complex64::new(0.0, 0.0) {
                    for j in 0..x.cols {
                        let sub = factor * x.data[k * x.cols + j];
                        x.data[i * x.cols + j] -= sub;
                    }
                }
            }
        }
        Ok(x)
    }
}
