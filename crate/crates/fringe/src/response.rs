//! Intensities, detector photocurrent and broadband-source responses.
//!
//! Transform conventions (fixed here, relied on by every test): the
//! impulse response of a sampled transfer function is
//!
//! ```text
//! h(τ) = a · Δω · Σ_n H(ω_n) e^{−i ω_n τ},   a = (2π)^{−1/2}
//! ```
//!
//! so a pure delay H(ω) = e^{iωT} peaks at τ = +T, and the inverse uses
//! the e^{+iωτ} kernel with weight a·Δτ where Δτ = 2π/(N·Δω). With that
//! pairing the round trip is the identity and Parseval holds exactly
//! (both are asserted by tests, not by prose).
//!
//! `broadband_response` realizes the source-spectrum convolution: the
//! source and the transfer function are taken to τ, multiplied there and
//! transformed back, normalized so that convolving with a constant Ĥ
//! yields (∫F dω)·Ĥ and so that a monochromatic (delta) source is the
//! exact identity. The product is recentered on the source carrier (the
//! power-weighted centroid of its grid) so the result lives on Ĥ's own
//! frequency grid.
//!
//! Grid sizing guidance (not enforced): span the grid over at least 8×
//! the source bandwidth and use a power-of-two point count ≥ 256; delays
//! beyond τ_max = π/Δω alias circularly.

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

use crate::matrix::{ComplexMatrix, ComplexVector, MatrixError};
use crate::reduction::{extract_jones, ReductionError};

/// Continuous Fourier normalization constant, (2π)^{−1/2}.
pub const FOURIER_NORM: f64 = 0.3989422804014327;

#[derive(Debug, Error)]
pub enum ResponseError {
    #[error("expected a {expected}-dimensional field vector, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid is not uniform: point {index} deviates by {deviation:.3e}")]
    NonUniformGrid { index: usize, deviation: f64 },
    #[error("grid needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("responsivity must be non-negative, got {0}")]
    NegativeResponsivity(f64),
    #[error("sampled spectrum is not normalized: sum |F|^2 dω = {0}")]
    NotNormalized(f64),
    #[error("a monochromatic source has no sampled time profile")]
    MonochromaticProfile,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

pub type Result<T> = std::result::Result<T, ResponseError>;

/// |Ex|² + |Ey|² of a two-component field vector.
pub fn intensity(e: &ComplexVector) -> Result<f64> {
    if e.dim() != 2 {
        return Err(ResponseError::WrongDimension {
            expected: 2,
            got: e.dim(),
        });
    }
    Ok(e.norm_sqr())
}

/// Intensity observed at output port k for a field launched at port j.
pub fn intensity_at_port(
    k_out: usize,
    j_in: usize,
    h: &ComplexMatrix,
    e_in: &ComplexVector,
) -> Result<f64> {
    if e_in.dim() != 2 {
        return Err(ResponseError::WrongDimension {
            expected: 2,
            got: e_in.dim(),
        });
    }
    let jones = extract_jones(k_out, j_in, h)?;
    let out = jones.mul_vec(e_in)?;
    intensity(&out)
}

/// Source amplitude spectrum F(ω): an exact spectral line or a sampled
/// profile normalized so Σ|F|²·Δω = 1.
#[derive(Clone, Debug)]
pub enum SourceSpectrum {
    Monochromatic {
        omega0: f64,
    },
    Sampled {
        omega_grid: Vec<f64>,
        amplitudes: Vec<Complex64>,
    },
}

impl SourceSpectrum {
    pub fn monochromatic(omega0: f64) -> Self {
        SourceSpectrum::Monochromatic { omega0 }
    }

    /// Validates grid uniformity and the power normalization.
    pub fn sampled(omega_grid: Vec<f64>, amplitudes: Vec<Complex64>) -> Result<Self> {
        if omega_grid.len() != amplitudes.len() {
            return Err(ResponseError::GridMismatch(format!(
                "{} grid points but {} amplitudes",
                omega_grid.len(),
                amplitudes.len()
            )));
        }
        let (_, step) = check_uniform(&omega_grid)?;
        let power: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * step;
        if (power - 1.0).abs() > 1e-9 {
            return Err(ResponseError::NotNormalized(power));
        }
        Ok(SourceSpectrum::Sampled {
            omega_grid,
            amplitudes,
        })
    }

    /// Gaussian line centered at `center` whose power spectrum |F|² has
    /// standard deviation `sigma`, normalized on the given grid.
    pub fn gaussian(omega_grid: Vec<f64>, center: f64, sigma: f64) -> Result<Self> {
        let (_, step) = check_uniform(&omega_grid)?;
        let mut amps: Vec<Complex64> = omega_grid
            .iter()
            .map(|&w| {
                let d = w - center;
                Complex64::new((-d * d / (4.0 * sigma * sigma)).exp(), 0.0)
            })
            .collect();
        let power: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * step;
        let scale = 1.0 / power.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        SourceSpectrum::sampled(omega_grid, amps)
    }
}

/// Photodetector responsivity R(ω) sampled on a grid.
#[derive(Clone, Debug)]
pub struct DetectorSpec {
    omega_grid: Vec<f64>,
    responsivity: Vec<f64>,
}

impl DetectorSpec {
    pub fn new(omega_grid: Vec<f64>, responsivity: Vec<f64>) -> Result<Self> {
        if omega_grid.len() != responsivity.len() {
            return Err(ResponseError::GridMismatch(format!(
                "{} grid points but {} responsivity samples",
                omega_grid.len(),
                responsivity.len()
            )));
        }
        for &r in &responsivity {
            if r < 0.0 || !r.is_finite() {
                return Err(ResponseError::NegativeResponsivity(r));
            }
        }
        Ok(Self {
            omega_grid,
            responsivity,
        })
    }

    /// Constant responsivity on a grid.
    pub fn flat(omega_grid: Vec<f64>, value: f64) -> Result<Self> {
        let n = omega_grid.len();
        Self::new(omega_grid, vec![value; n])
    }

    pub fn omega_grid(&self) -> &[f64] {
        &self.omega_grid
    }

    pub fn responsivity(&self) -> &[f64] {
        &self.responsivity
    }
}

/// Ideal photocurrent: trapezoid quadrature of R(ω)·I(ω) over the grid.
///
/// A single-point spectrum is the monochromatic (delta) case and returns
/// R·I directly.
pub fn photocurrent(detector: &DetectorSpec, omega_grid: &[f64], intensity: &[f64]) -> Result<f64> {
    if omega_grid.len() != intensity.len() {
        return Err(ResponseError::GridMismatch(format!(
            "{} grid points but {} intensity samples",
            omega_grid.len(),
            intensity.len()
        )));
    }
    if detector.omega_grid.len() != omega_grid.len() {
        return Err(ResponseError::GridMismatch(format!(
            "detector grid has {} points, spectrum has {}",
            detector.omega_grid.len(),
            omega_grid.len()
        )));
    }
    let scale = omega_grid
        .iter()
        .fold(0.0f64, |m, w| m.max(w.abs()))
        .max(1.0);
    for (i, (a, b)) in detector.omega_grid.iter().zip(omega_grid).enumerate() {
        if (a - b).abs() > 1e-9 * scale {
            return Err(ResponseError::GridMismatch(format!(
                "detector and spectrum grids differ at point {i}"
            )));
        }
    }
    if omega_grid.is_empty() {
        return Err(ResponseError::TooFewPoints { needed: 1, got: 0 });
    }
    if omega_grid.len() == 1 {
        return Ok(detector.responsivity[0] * intensity[0]);
    }
    let f: Vec<f64> = detector
        .responsivity
        .iter()
        .zip(intensity)
        .map(|(r, i)| r * i)
        .collect();
    let mut acc = 0.0;
    for i in 0..f.len() - 1 {
        acc += 0.5 * (f[i] + f[i + 1]) * (omega_grid[i + 1] - omega_grid[i]);
    }
    Ok(acc)
}

/// Matrix-valued transfer function samples Ĥ(ω) on a uniform grid.
#[derive(Clone, Debug)]
pub struct TransferSamples {
    omega_grid: Vec<f64>,
    samples: Vec<ComplexMatrix>,
}

impl TransferSamples {
    pub fn new(omega_grid: Vec<f64>, samples: Vec<ComplexMatrix>) -> Result<Self> {
        if omega_grid.len() != samples.len() {
            return Err(ResponseError::GridMismatch(format!(
                "{} grid points but {} samples",
                omega_grid.len(),
                samples.len()
            )));
        }
        check_uniform(&omega_grid)?;
        let (r, c) = (samples[0].rows(), samples[0].cols());
        for s in &samples {
            if s.rows() != r || s.cols() != c {
                return Err(ResponseError::GridMismatch(
                    "sample matrices have differing shapes".into(),
                ));
            }
        }
        Ok(Self { omega_grid, samples })
    }

    pub fn omega_grid(&self) -> &[f64] {
        &self.omega_grid
    }

    pub fn samples(&self) -> &[ComplexMatrix] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Matrix-valued impulse response ĥ(τ) on the τ grid dual to the ω grid.
#[derive(Clone, Debug)]
pub struct ImpulseResponse {
    tau_grid: Vec<f64>,
    samples: Vec<ComplexMatrix>,
    omega_start: f64,
    d_omega: f64,
}

impl ImpulseResponse {
    pub fn tau_grid(&self) -> &[f64] {
        &self.tau_grid
    }

    pub fn samples(&self) -> &[ComplexMatrix] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Verifies a uniform ascending grid (within 1 part in 1e9) and returns
/// (start, step).
fn check_uniform(grid: &[f64]) -> Result<(f64, f64)> {
    if grid.len() < 2 {
        return Err(ResponseError::TooFewPoints {
            needed: 2,
            got: grid.len(),
        });
    }
    let start = grid[0];
    let n = grid.len();
    let step = (grid[n - 1] - start) / (n - 1) as f64;
    if step <= 0.0 {
        return Err(ResponseError::GridMismatch("grid must ascend".into()));
    }
    let scale = start.abs().max(grid[n - 1].abs());
    for (i, &g) in grid.iter().enumerate() {
        let deviation = (g - (start + i as f64 * step)).abs();
        if deviation > 1e-9 * scale {
            return Err(ResponseError::NonUniformGrid { index: i, deviation });
        }
    }
    Ok((start, step))
}

/// Signed τ-bin index for position `pos` of an N-point grid, centered so
/// τ = 0 is always on the grid.
fn tau_index(pos: usize, n: usize) -> isize {
    pos as isize - (n / 2) as isize
}

fn wrap_index(k: isize, n: usize) -> usize {
    k.rem_euclid(n as isize) as usize
}

/// Scalar inverse transform onto the dual τ grid:
/// out(τ_k) = a·Δω·Σ_n values[n]·e^{−i ω_n τ_k}.
fn to_tau_domain(
    omega_start: f64,
    d_omega: f64,
    values: &[Complex64],
) -> (Vec<f64>, Vec<Complex64>) {
    let n = values.len();
    let d_tau = 2.0 * std::f64::consts::PI / (n as f64 * d_omega);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut buf = values.to_vec();
    fft.process(&mut buf);
    let mut tau = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    let weight = FOURIER_NORM * d_omega;
    for pos in 0..n {
        let k = tau_index(pos, n);
        let t = k as f64 * d_tau;
        tau.push(t);
        let phase = Complex64::from_polar(1.0, -omega_start * t);
        out.push(weight * phase * buf[wrap_index(k, n)]);
    }
    (tau, out)
}

/// Element-wise inverse Fourier transform of Ĥ(ω) onto the dual τ grid.
pub fn impulse_response(samples: &TransferSamples) -> Result<ImpulseResponse> {
    let (omega_start, d_omega) = check_uniform(&samples.omega_grid)?;
    let n = samples.len();
    let rows = samples.samples[0].rows();
    let cols = samples.samples[0].cols();
    let mut out: Vec<ComplexMatrix> = vec![ComplexMatrix::zeros(rows, cols); n];
    let mut tau_grid = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let entry: Vec<Complex64> = samples.samples.iter().map(|m| m[(r, c)]).collect();
            let (tau, h) = to_tau_domain(omega_start, d_omega, &entry);
            if tau_grid.is_empty() {
                tau_grid = tau;
            }
            for (k, v) in h.into_iter().enumerate() {
                out[k].set(r, c, v);
            }
        }
    }
    Ok(ImpulseResponse {
        tau_grid,
        samples: out,
        omega_start,
        d_omega,
    })
}

/// Exact inverse of [`impulse_response`]: back to Ĥ(ω) on the original grid.
pub fn spectrum_from_impulse(ir: &ImpulseResponse) -> Result<TransferSamples> {
    let n = ir.samples.len();
    if n < 2 {
        return Err(ResponseError::TooFewPoints { needed: 2, got: n });
    }
    let d_tau = 2.0 * std::f64::consts::PI / (n as f64 * ir.d_omega);
    let rows = ir.samples[0].rows();
    let cols = ir.samples[0].cols();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_inverse(n);
    let weight = FOURIER_NORM * d_tau;
    let mut out: Vec<ComplexMatrix> = vec![ComplexMatrix::zeros(rows, cols); n];
    for r in 0..rows {
        for c in 0..cols {
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for pos in 0..n {
                let k = tau_index(pos, n);
                let t = ir.tau_grid[pos];
                let phase = Complex64::from_polar(1.0, ir.omega_start * t);
                buf[wrap_index(k, n)] = ir.samples[pos][(r, c)] * phase;
            }
            fft.process(&mut buf);
            for (idx, v) in buf.into_iter().enumerate() {
                out[idx].set(r, c, weight * v);
            }
        }
    }
    let omega_grid: Vec<f64> = (0..n)
        .map(|i| ir.omega_start + i as f64 * ir.d_omega)
        .collect();
    TransferSamples::new(omega_grid, out)
}

/// Source field profile f(τ): the sampled spectrum taken to the τ domain
/// with the same kernel and normalization as [`impulse_response`].
pub fn source_time_profile(source: &SourceSpectrum) -> Result<(Vec<f64>, Vec<Complex64>)> {
    match source {
        SourceSpectrum::Monochromatic { .. } => Err(ResponseError::MonochromaticProfile),
        SourceSpectrum::Sampled {
            omega_grid,
            amplitudes,
        } => {
            let (start, step) = check_uniform(omega_grid)?;
            Ok(to_tau_domain(start, step, amplitudes))
        }
    }
}

/// Linear interpolation of the source onto a target grid. The source's
/// span must lie inside the target span; target points outside the source
/// span get zero amplitude.
fn resample_onto(
    f_grid: &[f64],
    f_amps: &[Complex64],
    target: &[f64],
) -> Result<Vec<Complex64>> {
    let scale = target
        .iter()
        .fold(0.0f64, |m, w| m.max(w.abs()))
        .max(1.0);
    let eps = 1e-9 * scale;
    if f_grid[0] < target[0] - eps || f_grid[f_grid.len() - 1] > target[target.len() - 1] + eps {
        return Err(ResponseError::GridMismatch(
            "source spectrum extends beyond the transfer-function grid".into(),
        ));
    }
    let mut out = Vec::with_capacity(target.len());
    for &w in target {
        if w < f_grid[0] - eps || w > f_grid[f_grid.len() - 1] + eps {
            out.push(Complex64::new(0.0, 0.0));
            continue;
        }
        let idx = match f_grid.binary_search_by(|g| g.partial_cmp(&w).unwrap()) {
            Ok(i) => {
                out.push(f_amps[i]);
                continue;
            }
            Err(i) => i,
        };
        if idx == 0 {
            out.push(f_amps[0]);
        } else if idx >= f_grid.len() {
            out.push(f_amps[f_grid.len() - 1]);
        } else {
            let (w0, w1) = (f_grid[idx - 1], f_grid[idx]);
            let t = (w - w0) / (w1 - w0);
            out.push(f_amps[idx - 1] * (1.0 - t) + f_amps[idx] * t);
        }
    }
    Ok(out)
}

/// Convolution of the source spectrum with Ĥ(ω), on Ĥ's grid.
///
/// Realized through the τ domain: both factors go to τ with the impulse
/// kernel, are multiplied pointwise, and come back — which is the circular
/// convolution Ĥ_F(ω_n) = Δω·Σ_m F_m·Ĥ(ω_n − ω_m + ω_c), with ω_c the
/// source carrier. A monochromatic source is the exact delta case: Ĥ_F = Ĥ.
pub fn broadband_response(
    source: &SourceSpectrum,
    samples: &TransferSamples,
) -> Result<TransferSamples> {
    let f_on_grid = match source {
        SourceSpectrum::Monochromatic { .. } => return Ok(samples.clone()),
        SourceSpectrum::Sampled {
            omega_grid,
            amplitudes,
        } => {
            check_uniform(omega_grid)?;
            resample_onto(omega_grid, amplitudes, &samples.omega_grid)?
        }
    };
    let (_, d_omega) = check_uniform(&samples.omega_grid)?;
    let n = samples.len();
    // Carrier = power-weighted centroid of the resampled source.
    let total_power: f64 = f_on_grid.iter().map(|a| a.norm_sqr()).sum();
    if total_power == 0.0 {
        return Err(ResponseError::GridMismatch(
            "source has no power on the transfer-function grid".into(),
        ));
    }
    let centroid: f64 = f_on_grid
        .iter()
        .enumerate()
        .map(|(i, a)| i as f64 * a.norm_sqr())
        .sum::<f64>()
        / total_power;
    let m_c = centroid.round() as usize;

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut f_hat = f_on_grid;
    fwd.process(&mut f_hat);

    let rows = samples.samples[0].rows();
    let cols = samples.samples[0].cols();
    let mut out: Vec<ComplexMatrix> = vec![ComplexMatrix::zeros(rows, cols); n];
    let scale = d_omega / n as f64;
    for r in 0..rows {
        for c in 0..cols {
            let mut buf: Vec<Complex64> = samples.samples.iter().map(|m| m[(r, c)]).collect();
            fwd.process(&mut buf);
            for (k, v) in buf.iter_mut().enumerate() {
                // Recenter the convolution on the carrier bin.
                let shift =
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (m_c * k) as f64 / n as f64);
                *v = *v * f_hat[k] * shift;
            }
            inv.process(&mut buf);
            for (idx, v) in buf.into_iter().enumerate() {
                out[idx].set(r, c, v * scale);
            }
        }
    }
    TransferSamples::new(samples.omega_grid.clone(), out)
}

/// Time-integrated output energy of a pulse with spectrum F sent through
/// a sampled 2×2 Jones transfer function, launched with polarization
/// `e_in`.
///
/// Works in the τ domain: the output field is the circular convolution of
/// the source profile f(τ) with the impulse response applied to the
/// launch, and the detected energy is Σ|e_out(τ)|²·Δτ. Equals the
/// frequency-domain quadrature of |F(ω)|²·|Ĵ(ω)·E|² by Parseval; the two
/// routes are compared in the acceptance suite.
pub fn pulse_output_energy(
    source: &SourceSpectrum,
    samples: &TransferSamples,
    e_in: &ComplexVector,
) -> Result<f64> {
    if e_in.dim() != 2 {
        return Err(ResponseError::WrongDimension {
            expected: 2,
            got: e_in.dim(),
        });
    }
    if samples.samples[0].rows() != 2 || samples.samples[0].cols() != 2 {
        return Err(ResponseError::GridMismatch(
            "pulse_output_energy expects 2x2 Jones samples".into(),
        ));
    }
    let SourceSpectrum::Sampled { omega_grid, .. } = source else {
        return Err(ResponseError::MonochromaticProfile);
    };
    if omega_grid.len() != samples.omega_grid.len() {
        return Err(ResponseError::GridMismatch(
            "source and transfer grids differ in length".into(),
        ));
    }
    let scale = samples.omega_grid[0]
        .abs()
        .max(samples.omega_grid[samples.len() - 1].abs());
    for (i, (a, b)) in omega_grid.iter().zip(&samples.omega_grid).enumerate() {
        if (a - b).abs() > 1e-9 * scale {
            return Err(ResponseError::GridMismatch(format!(
                "source and transfer grids differ at point {i}"
            )));
        }
    }

    let ir = impulse_response(samples)?;
    let (tau, f) = source_time_profile(source)?;
    let n = tau.len();
    let d_tau = tau[1] - tau[0];
    let omega_start = samples.omega_grid[0];

    // The τ profiles carry e^{−i ω_start τ} carrier phases which are not
    // periodic in the bin index unless ω_start/Δω is an integer; strip
    // them before the circular convolution (they cancel out of |e_out|).
    let dephase =
        |t: f64, v: Complex64| -> Complex64 { v * Complex64::from_polar(1.0, omega_start * t) };
    let f_tilde: Vec<Complex64> = tau.iter().zip(&f).map(|(&t, &v)| dephase(t, v)).collect();
    let mut vx = Vec::with_capacity(n);
    let mut vy = Vec::with_capacity(n);
    for (pos, m) in ir.samples.iter().enumerate() {
        let t = tau[pos];
        let ex = m[(0, 0)] * e_in[0] + m[(0, 1)] * e_in[1];
        let ey = m[(1, 0)] * e_in[0] + m[(1, 1)] * e_in[1];
        vx.push(dephase(t, ex));
        vy.push(dephase(t, ey));
    }

    // Circular convolution through the index domain (conv = ifft(fft·fft)/N),
    // then e_out = a·Δτ·(f ⊛ v).
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut f_hat = f_tilde;
    fwd.process(&mut f_hat);
    let conv = |series: Vec<Complex64>| -> Vec<Complex64> {
        let mut buf = series;
        fwd.process(&mut buf);
        for (b, fh) in buf.iter_mut().zip(&f_hat) {
            *b *= fh;
        }
        inv.process(&mut buf);
        let norm = FOURIER_NORM * d_tau / n as f64;
        buf.into_iter().map(|v| v * norm).collect()
    };
    let ex = conv(vx);
    let ey = conv(vy);
    let energy: f64 = ex
        .iter()
        .zip(&ey)
        .map(|(x, y)| x.norm_sqr() + y.norm_sqr())
        .sum::<f64>()
        * d_tau;
    Ok(energy)
}
