//! Frequency-sweep driver: evaluates a validated circuit over its grid
//! and serializes the spectra as CSV or JSON.
//!
//! The connection matrix depends on topology alone, so it is assembled
//! exactly once per run and shared across grid points (the build count is
//! carried in the result metadata). Each grid point rebuilds the
//! frequency-dependent blocks, assembles S, solves for H and evaluates
//! the detector outputs. Points where the system is singular are flagged
//! (NaN in CSV, null in JSON) instead of aborting the run.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::components::{ComponentError, ComponentSpec, SPEED_OF_LIGHT};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::netlist::{validate, CircuitDescription, NetlistError, SweepConfig};
use crate::network::{
    assemble_connection_matrix, assemble_global_scattering, port_coords, propagate,
    solve_transfer_with_condition, NetworkError,
};
use crate::response::{impulse_response, ResponseError, TransferSamples};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("circuit has no source")]
    NoSource,
    #[error("circuit has no detector")]
    NoDetector,
    #[error("circuit has no sweep directive")]
    NoSweep,
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("--impulse requires a frequency sweep (uniform omega grid)")]
    ImpulseNeedsFrequencySweep,
    #[error("every grid point was singular; nothing to report")]
    AllPointsSingular,
    #[error(transparent)]
    Component(#[from] ComponentError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T> = std::result::Result<T, SweepError>;

/// What the x column of the output means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GridUnit {
    #[serde(rename = "wavelength_m")]
    WavelengthMeters,
    #[serde(rename = "omega_rad_per_s")]
    OmegaRadPerSec,
}

impl GridUnit {
    pub fn column_name(self) -> &'static str {
        match self {
            GridUnit::WavelengthMeters => "wavelength_m",
            GridUnit::OmegaRadPerSec => "omega_rad_per_s",
        }
    }
}

/// Per-detector output series. Intensity is NaN at singular grid points.
#[derive(Clone, Debug, Serialize)]
pub struct DetectorSeries {
    pub label: String,
    pub intensity: Vec<f64>,
    /// [ex_re, ex_im, ey_re, ey_im] per grid point, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<Vec<[f64; 4]>>,
}

/// Impulse-response magnitudes per detector, emitted with `--impulse`.
#[derive(Clone, Debug, Serialize)]
pub struct ImpulseOutput {
    pub tau_s: Vec<f64>,
    pub labels: Vec<String>,
    /// magnitudes[d][k] = |h_d(tau_k)| for detector d.
    pub magnitudes: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepMetadata {
    pub total_ports_m: usize,
    pub component_count: usize,
    pub connection_count: usize,
    /// Largest condition estimate among the solved grid points.
    pub max_condition_estimate: f64,
    pub singular_points: usize,
    /// How many times the connection matrix was assembled this run.
    pub connection_matrix_builds: usize,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub schema_version: u32,
    pub grid_unit: GridUnit,
    pub grid: Vec<f64>,
    pub detectors: Vec<DetectorSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub impulse: Option<ImpulseOutput>,
    pub warnings: Vec<String>,
    pub metadata: SweepMetadata,
}

/// Driver knobs, mirroring the CLI flags.
#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub threads: usize,
    pub amplitudes: bool,
    pub impulse: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            threads: 1,
            amplitudes: false,
            impulse: false,
        }
    }
}

fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let step = (stop - start) / (points - 1) as f64;
    (0..points).map(|i| start + i as f64 * step).collect()
}

/// Display grid and the omega to solve at, per grid point.
fn build_grid(config: &SweepConfig) -> Result<(Vec<f64>, Vec<f64>, GridUnit)> {
    match config {
        SweepConfig::Wavelength { start, stop, points } => {
            if *start <= 0.0 || *stop <= 0.0 {
                return Err(SweepError::InvalidSweep(
                    "wavelengths must be positive".into(),
                ));
            }
            if start >= stop && *points > 1 {
                return Err(SweepError::InvalidSweep("start must be below stop".into()));
            }
            if *points == 0 {
                return Err(SweepError::InvalidSweep("points must be >= 1".into()));
            }
            let grid = linspace(*start, *stop, *points);
            let omegas = grid
                .iter()
                .map(|l| 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / l)
                .collect();
            Ok((grid, omegas, GridUnit::WavelengthMeters))
        }
        SweepConfig::Frequency { start, stop, points } => {
            if *start <= 0.0 || *stop <= 0.0 {
                return Err(SweepError::InvalidSweep(
                    "frequencies must be positive".into(),
                ));
            }
            if start >= stop && *points > 1 {
                return Err(SweepError::InvalidSweep("start must be below stop".into()));
            }
            if *points == 0 {
                return Err(SweepError::InvalidSweep("points must be >= 1".into()));
            }
            let grid = linspace(*start, *stop, *points);
            Ok((grid.clone(), grid, GridUnit::OmegaRadPerSec))
        }
        SweepConfig::Single { wavelength } => {
            if *wavelength <= 0.0 {
                return Err(SweepError::InvalidSweep(
                    "wavelength must be positive".into(),
                ));
            }
            let omega = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength;
            Ok((vec![*wavelength], vec![omega], GridUnit::WavelengthMeters))
        }
    }
}

struct PointData {
    intensities: Vec<f64>,
    amplitudes: Vec<[f64; 4]>,
    fields: Vec<[Complex64; 2]>,
    condition: f64,
    singular: bool,
}

/// Runs the sweep for a parsed circuit.
pub fn run_sweep(circuit: &CircuitDescription, options: &SweepOptions) -> Result<SweepResult> {
    let started = Instant::now();
    let validated = validate(circuit)?;
    if validated.sources.is_empty() {
        return Err(SweepError::NoSource);
    }
    if validated.detectors.is_empty() {
        return Err(SweepError::NoDetector);
    }
    let config = circuit.sweep.as_ref().ok_or(SweepError::NoSweep)?;
    if options.impulse && !matches!(config, SweepConfig::Frequency { .. }) {
        return Err(SweepError::ImpulseNeedsFrequencySweep);
    }
    let (grid, omegas, unit) = build_grid(config)?;

    let m = validated.port_map.total_ports();
    // Topology is frequency-independent: G is built once and shared.
    let g = assemble_connection_matrix(&validated.connections, m)?;
    let connection_matrix_builds = 1usize;

    let mut e_o = ComplexVector::zeros(2 * m);
    for (port, pol) in &validated.sources {
        let (x, y) = port_coords(*port);
        e_o.set(x, e_o[x] + Complex64::new(pol[0], pol[1]));
        e_o.set(y, e_o[y] + Complex64::new(pol[2], pol[3]));
    }

    let specs: Vec<ComponentSpec> = circuit.components.iter().map(|(_, s)| s.clone()).collect();
    let detector_ports = validated.detectors.clone();
    let port_map = &validated.port_map;
    let g_ref = &g;
    let e_o_ref = &e_o;
    let specs_ref = &specs;
    let detector_ports_ref = &detector_ports;

    let eval_point = move |omega: f64| -> Result<PointData> {
        let blocks = specs_ref
            .iter()
            .map(|s| s.scattering_block(omega))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let s = assemble_global_scattering(&blocks, port_map)?;
        match solve_transfer_with_condition(&s, g_ref) {
            Ok((h, condition)) => {
                let e_out = propagate(&h, e_o_ref)?;
                let mut intensities = Vec::with_capacity(detector_ports_ref.len());
                let mut amplitudes = Vec::with_capacity(detector_ports_ref.len());
                let mut fields = Vec::with_capacity(detector_ports_ref.len());
                for &port in detector_ports_ref {
                    let (x, y) = port_coords(port);
                    let (ex, ey) = (e_out[x], e_out[y]);
                    intensities.push(ex.norm_sqr() + ey.norm_sqr());
                    amplitudes.push([ex.re, ex.im, ey.re, ey.im]);
                    fields.push([ex, ey]);
                }
                Ok(PointData {
                    intensities,
                    amplitudes,
                    fields,
                    condition,
                    singular: false,
                })
            }
            Err(NetworkError::Singular { condition }) => Ok(PointData {
                intensities: vec![f64::NAN; detector_ports_ref.len()],
                amplitudes: vec![[f64::NAN; 4]; detector_ports_ref.len()],
                fields: vec![[Complex64::new(f64::NAN, f64::NAN); 2]; detector_ports_ref.len()],
                condition,
                singular: true,
            }),
            Err(other) => Err(SweepError::Network(other)),
        }
    };

    let points: Vec<Result<PointData>> = if options.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| SweepError::ThreadPool(e.to_string()))?;
        pool.install(|| omegas.par_iter().map(|&w| eval_point(w)).collect())
    } else {
        omegas.iter().map(|&w| eval_point(w)).collect()
    };
    let points: Vec<PointData> = points.into_iter().collect::<Result<Vec<_>>>()?;

    let singular_points = points.iter().filter(|p| p.singular).count();
    if singular_points == points.len() {
        return Err(SweepError::AllPointsSingular);
    }
    let max_condition = points
        .iter()
        .filter(|p| !p.singular)
        .map(|p| p.condition)
        .fold(0.0f64, f64::max);

    let mut warnings = validated.warnings.clone();
    if singular_points > 0 {
        let flagged: Vec<String> = points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.singular)
            .map(|(i, _)| i.to_string())
            .collect();
        warnings.push(format!(
            "{singular_points} grid point(s) singular (condition estimate past 1e12), \
             flagged as NaN: indices [{}]",
            flagged.join(", ")
        ));
    }

    let mut detectors = Vec::with_capacity(detector_ports.len());
    for (d, port_ref) in circuit.detectors.iter().enumerate() {
        let intensity: Vec<f64> = points.iter().map(|p| p.intensities[d]).collect();
        let amplitude = options
            .amplitudes
            .then(|| points.iter().map(|p| p.amplitudes[d]).collect());
        detectors.push(DetectorSeries {
            label: port_ref.to_string(),
            intensity,
            amplitude,
        });
    }

    let impulse = if options.impulse {
        if singular_points > 0 {
            warnings.push(
                "impulse response skipped: singular grid points leave gaps in H(omega)".into(),
            );
            None
        } else {
            let mut labels = Vec::new();
            let mut magnitudes = Vec::new();
            let mut tau_s = Vec::new();
            for (d, port_ref) in circuit.detectors.iter().enumerate() {
                let samples: Vec<ComplexMatrix> = points
                    .iter()
                    .map(|p| {
                        ComplexMatrix::new(2, 1, vec![p.fields[d][0], p.fields[d][1]])
                            .expect("finite fields")
                    })
                    .collect();
                let ts = TransferSamples::new(omegas.clone(), samples)?;
                let ir = impulse_response(&ts)?;
                if tau_s.is_empty() {
                    tau_s = ir.tau_grid().to_vec();
                }
                let mags: Vec<f64> = ir
                    .samples()
                    .iter()
                    .map(|m| (m[(0, 0)].norm_sqr() + m[(1, 0)].norm_sqr()).sqrt())
                    .collect();
                labels.push(port_ref.to_string());
                magnitudes.push(mags);
            }
            Some(ImpulseOutput {
                tau_s,
                labels,
                magnitudes,
            })
        }
    } else {
        None
    };

    Ok(SweepResult {
        schema_version: 1,
        grid_unit: unit,
        grid,
        detectors,
        impulse,
        warnings,
        metadata: SweepMetadata {
            total_ports_m: m,
            component_count: circuit.components.len(),
            connection_count: validated.connections.pairs().len(),
            max_condition_estimate: max_condition,
            singular_points,
            connection_matrix_builds,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// CSV: grid column, then detector intensities in declaration order, then
/// amplitude columns when present. Byte-deterministic for a fixed netlist
/// and flags.
pub fn write_csv<W: Write + ?Sized>(result: &SweepResult, out: &mut W) -> std::io::Result<()> {
    let mut header = vec![result.grid_unit.column_name().to_string()];
    for d in &result.detectors {
        header.push(format!("I_{}", d.label));
    }
    for d in &result.detectors {
        if d.amplitude.is_some() {
            for part in ["Ex_re", "Ex_im", "Ey_re", "Ey_im"] {
                header.push(format!("{part}_{}", d.label));
            }
        }
    }
    writeln!(out, "{}", header.join(","))?;
    for (i, x) in result.grid.iter().enumerate() {
        let mut row = vec![format!("{x}")];
        for d in &result.detectors {
            row.push(format!("{}", d.intensity[i]));
        }
        for d in &result.detectors {
            if let Some(amp) = &d.amplitude {
                for v in amp[i] {
                    row.push(format!("{v}"));
                }
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// CSV table for the impulse-response magnitudes.
pub fn write_impulse_csv<W: Write + ?Sized>(impulse: &ImpulseOutput, out: &mut W) -> std::io::Result<()> {
    let mut header = vec!["tau_s".to_string()];
    for label in &impulse.labels {
        header.push(format!("h_{label}"));
    }
    writeln!(out, "{}", header.join(","))?;
    for (k, tau) in impulse.tau_s.iter().enumerate() {
        let mut row = vec![format!("{tau}")];
        for series in &impulse.magnitudes {
            row.push(format!("{}", series[k]));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Pretty JSON document with a versioned schema; non-finite intensities
/// serialize as null.
pub fn write_json<W: Write + ?Sized>(result: &SweepResult, out: &mut W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, result)?;
    writeln!(out)
}
