//! Jones matrices and scattering blocks for the physical component catalog.
//!
//! Conventions used throughout the crate (and by every analytic oracle in
//! the tests):
//!
//! * forward propagation over index n and length z multiplies by
//!   exp(+i·ω·n·z/c), with loss exp(−α·z) and an extra static phase
//!   exp(−i·φ);
//! * the x polarization rides the fast axis, the slow axis carries the
//!   additional birefringent phase from Δn;
//! * couplers take the +i convention on the cross path, mirrors take +i on
//!   transmission;
//! * every 2-port block is reciprocal: the backward sub-block is the
//!   transpose of the forward one.
//!
//! A 2-port block is 4×4 over the basis [Ax, Ay, Bx, By]; the 4-port
//! coupler block is 8×8 with ports 1,2 on the left face and 3,4 on the
//! right. Blocks must be passive (no gain); construction rejects anything
//! whose largest singular value exceeds 1 + 1e-9.

use num_complex::Complex64;
use thiserror::Error;

use crate::matrix::ComplexMatrix;

/// Vacuum speed of light, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Tolerance on the passivity bound for assembled blocks.
pub const PASSIVITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ComponentError {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("negative length {0}")]
    NegativeLength(f64),
    #[error("non-positive optical frequency {0}")]
    NonPositiveFrequency(f64),
    #[error("block has gain: largest singular value {0:.9} exceeds 1")]
    PassivityViolation(f64),
    #[error("jones matrix must be 2x2, got {rows}x{cols}")]
    NotJones { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, ComponentError>;

/// One physical element of the catalog and its parameters.
///
/// Angles are radians, lengths are meters, and loss parameters are
/// amplitude quantities (not power). Every variant is a 2-port except the
/// 4-port `Coupler`.
#[derive(Clone, Debug, PartialEq)]
pub enum ComponentSpec {
    Waveguide {
        index_n: f64,
        length_z: f64,
        birefringence_dn: f64,
        axis_angle: f64,
        amplitude_loss_alpha: f64,
        extra_phase_phi: f64,
    },
    Coupler {
        power_coupling_kappa: f64,
        excess_amplitude_loss: f64,
    },
    Mirror {
        amplitude_reflectance_r: Complex64,
    },
    Rotator {
        angle_theta: f64,
    },
    Retarder {
        retardance_delta: f64,
        axis_angle: f64,
    },
    Polarizer {
        axis_angle: f64,
        extinction_amplitude: f64,
    },
    Splice {
        amplitude_transmission: f64,
        rotation_angle: f64,
        backreflection_amplitude: Complex64,
    },
}

impl ComponentSpec {
    /// Number of optical ports (2, or 4 for a coupler).
    pub fn port_count(&self) -> usize {
        match self {
            ComponentSpec::Coupler { .. } => 4,
            _ => 2,
        }
    }

    /// Checks the magnitude-constrained fields against their stated ranges.
    pub fn validate(&self) -> Result<()> {
        match self {
            ComponentSpec::Waveguide {
                length_z,
                amplitude_loss_alpha,
                ..
            } => {
                if *length_z < 0.0 {
                    return Err(ComponentError::NegativeLength(*length_z));
                }
                if *amplitude_loss_alpha < 0.0 {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "waveguide alpha must be >= 0, got {amplitude_loss_alpha}"
                    )));
                }
            }
            ComponentSpec::Coupler {
                power_coupling_kappa,
                excess_amplitude_loss,
            } => {
                if !(0.0..=1.0).contains(power_coupling_kappa) {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "coupler kappa must be in [0, 1], got {power_coupling_kappa}"
                    )));
                }
                if !(0.0..=1.0).contains(excess_amplitude_loss) {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "coupler excess loss must be in [0, 1], got {excess_amplitude_loss}"
                    )));
                }
            }
            ComponentSpec::Mirror {
                amplitude_reflectance_r,
            } => {
                if amplitude_reflectance_r.norm() > 1.0 + 1e-12 {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "mirror |r| must be <= 1, got {}",
                        amplitude_reflectance_r.norm()
                    )));
                }
            }
            ComponentSpec::Rotator { .. } => {}
            ComponentSpec::Retarder { .. } => {}
            ComponentSpec::Polarizer {
                extinction_amplitude,
                ..
            } => {
                if !(0.0..=1.0).contains(extinction_amplitude) {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "polarizer extinction must be in [0, 1], got {extinction_amplitude}"
                    )));
                }
            }
            ComponentSpec::Splice {
                amplitude_transmission,
                backreflection_amplitude,
                ..
            } => {
                if !(*amplitude_transmission > 0.0 && *amplitude_transmission <= 1.0) {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "splice transmission must be in (0, 1], got {amplitude_transmission}"
                    )));
                }
                if backreflection_amplitude.norm() >= 1.0 {
                    return Err(ComponentError::ParameterOutOfRange(format!(
                        "splice |backreflection| must be < 1, got {}",
                        backreflection_amplitude.norm()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds the scattering block at the given optical frequency.
    ///
    /// Only waveguide phases depend on ω; coupling ratios, reflectances and
    /// angles are frequency-flat.
    pub fn scattering_block(&self, omega: f64) -> Result<ScatteringBlock> {
        self.validate()?;
        match self {
            ComponentSpec::Waveguide { .. } => {
                let j = jones_waveguide(self, omega)?;
                // Reciprocal: J is symmetric (R·diag·Rᵀ), so Jᵀ = J.
                two_port_block(&j, &j.transpose(), &ComplexMatrix::zeros(2, 2), &ComplexMatrix::zeros(2, 2))
            }
            ComponentSpec::Coupler { .. } => coupler_block(self, omega),
            ComponentSpec::Mirror {
                amplitude_reflectance_r: r,
            } => {
                let refl = ComplexMatrix::identity(2).scale(*r);
                // Transmission phase is +i times the reflection phase; this
                // is the unitary completion of the symmetric beamsplitter
                // convention (for real r it reduces to i·sqrt(1-r²)).
                let t_mag = (1.0 - r.norm_sqr()).max(0.0).sqrt();
                let t = Complex64::new(0.0, 1.0) * Complex64::from_polar(t_mag, r.arg());
                let trans = ComplexMatrix::identity(2).scale(t);
                two_port_block(&trans, &trans.transpose(), &refl, &refl)
            }
            ComponentSpec::Rotator { angle_theta } => {
                let fwd = jones_rotator(*angle_theta);
                two_port_block(
                    &fwd,
                    &fwd.transpose(),
                    &ComplexMatrix::zeros(2, 2),
                    &ComplexMatrix::zeros(2, 2),
                )
            }
            ComponentSpec::Retarder {
                retardance_delta,
                axis_angle,
            } => {
                let j = jones_retarder(*retardance_delta, *axis_angle);
                two_port_block(
                    &j,
                    &j.transpose(),
                    &ComplexMatrix::zeros(2, 2),
                    &ComplexMatrix::zeros(2, 2),
                )
            }
            ComponentSpec::Polarizer {
                axis_angle,
                extinction_amplitude,
            } => {
                let j = jones_polarizer(*axis_angle, *extinction_amplitude);
                two_port_block(
                    &j,
                    &j.transpose(),
                    &ComplexMatrix::zeros(2, 2),
                    &ComplexMatrix::zeros(2, 2),
                )
            }
            ComponentSpec::Splice {
                amplitude_transmission,
                rotation_angle,
                backreflection_amplitude,
            } => {
                let fwd = jones_rotator(*rotation_angle)
                    .scale(Complex64::new(*amplitude_transmission, 0.0));
                let refl = ComplexMatrix::identity(2).scale(*backreflection_amplitude);
                two_port_block(&fwd, &fwd.transpose(), &refl, &refl)
            }
        }
    }
}

/// A component's scattering matrix: 4×4 for 2-port devices, 8×8 for the
/// 4-port coupler. Two polarization coordinates per port.
#[derive(Clone, Debug)]
pub struct ScatteringBlock {
    port_count: usize,
    matrix: ComplexMatrix,
}

impl ScatteringBlock {
    /// Wraps a matrix after checking dimension and passivity.
    pub fn new(port_count: usize, matrix: ComplexMatrix) -> Result<Self> {
        let dim = 2 * port_count;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(ComponentError::NotJones {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let sigma = matrix.spectral_norm();
        if sigma > 1.0 + PASSIVITY_TOLERANCE {
            return Err(ComponentError::PassivityViolation(sigma));
        }
        Ok(Self { port_count, matrix })
    }

    pub fn port_count(&self) -> usize {
        self.port_count
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

fn check_jones(m: &ComplexMatrix) -> Result<()> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(ComponentError::NotJones {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Rotation by θ: [[cosθ, −sinθ], [sinθ, cosθ]].
pub fn jones_rotator(theta: f64) -> ComplexMatrix {
    let (s, c) = theta.sin_cos();
    ComplexMatrix::from_2x2(
        Complex64::new(c, 0.0),
        Complex64::new(-s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(c, 0.0),
    )
}

/// Propagation Jones matrix of a waveguide section at frequency ω.
///
/// Diagonal in the guide's own axes with per-axis phases
/// ω·n·z/c and ω·(n+Δn)·z/c, common loss e^{−αz} and static phase e^{−iφ},
/// conjugated into the lab frame by the axis rotation.
pub fn jones_waveguide(spec: &ComponentSpec, omega: f64) -> Result<ComplexMatrix> {
    let ComponentSpec::Waveguide {
        index_n,
        length_z,
        birefringence_dn,
        axis_angle,
        amplitude_loss_alpha,
        extra_phase_phi,
    } = spec
    else {
        return Err(ComponentError::ParameterOutOfRange(
            "jones_waveguide expects a Waveguide spec".into(),
        ));
    };
    if omega <= 0.0 {
        return Err(ComponentError::NonPositiveFrequency(omega));
    }
    if *length_z < 0.0 {
        return Err(ComponentError::NegativeLength(*length_z));
    }
    let loss = (-amplitude_loss_alpha * length_z).exp();
    let fast = Complex64::from_polar(
        loss,
        omega * index_n * length_z / SPEED_OF_LIGHT - extra_phase_phi,
    );
    let slow = Complex64::from_polar(
        loss,
        omega * (index_n + birefringence_dn) * length_z / SPEED_OF_LIGHT - extra_phase_phi,
    );
    let diag = ComplexMatrix::from_2x2(
        fast,
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        slow,
    );
    if *axis_angle == 0.0 {
        return Ok(diag);
    }
    let r = jones_rotator(*axis_angle);
    Ok(r.multiply(&diag)
        .expect("2x2")
        .multiply(&jones_rotator(-*axis_angle))
        .expect("2x2"))
}

/// Wave plate: unit transmission on the fast axis, extra phase e^{iδ} on
/// the slow axis, rotated to `axis_angle`.
pub fn jones_retarder(delta: f64, axis_angle: f64) -> ComplexMatrix {
    let diag = ComplexMatrix::from_2x2(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::from_polar(1.0, delta),
    );
    if axis_angle == 0.0 {
        return diag;
    }
    let r = jones_rotator(axis_angle);
    r.multiply(&diag)
        .expect("2x2")
        .multiply(&jones_rotator(-axis_angle))
        .expect("2x2")
}

/// Linear polarizer with amplitude extinction ε on the blocked axis.
pub fn jones_polarizer(axis_angle: f64, extinction: f64) -> ComplexMatrix {
    let diag = ComplexMatrix::from_2x2(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(extinction, 0.0),
    );
    if axis_angle == 0.0 {
        return diag;
    }
    let r = jones_rotator(axis_angle);
    r.multiply(&diag)
        .expect("2x2")
        .multiply(&jones_rotator(-axis_angle))
        .expect("2x2")
}

/// Assembles a 2-port scattering block from its four 2×2 sub-blocks.
///
/// Basis order [Ax, Ay, Bx, By]; the block is
/// [[refl_at_a, backward], [forward, refl_at_b]], so output at B from
/// input at A goes through `forward`.
pub fn two_port_block(
    forward: &ComplexMatrix,
    backward: &ComplexMatrix,
    refl_at_a: &ComplexMatrix,
    refl_at_b: &ComplexMatrix,
) -> Result<ScatteringBlock> {
    check_jones(forward)?;
    check_jones(backward)?;
    check_jones(refl_at_a)?;
    check_jones(refl_at_b)?;
    let mut m = ComplexMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            m.set(i, j, refl_at_a[(i, j)]);
            m.set(i, 2 + j, backward[(i, j)]);
            m.set(2 + i, j, forward[(i, j)]);
            m.set(2 + i, 2 + j, refl_at_b[(i, j)]);
        }
    }
    ScatteringBlock::new(2, m)
}

/// 8×8 directional coupler block.
///
/// Ports 1,2 on the left face, 3,4 on the right. Per polarization the bar
/// amplitude t = γ·√(1−κ) connects 1↔3 and 2↔4, the cross amplitude i·γ·√κ
/// connects 1↔4 and 2↔3; there is no reflection and both polarizations see
/// the same coefficients.
pub fn coupler_block(spec: &ComponentSpec, _omega: f64) -> Result<ScatteringBlock> {
    let ComponentSpec::Coupler {
        power_coupling_kappa,
        excess_amplitude_loss,
    } = spec
    else {
        return Err(ComponentError::ParameterOutOfRange(
            "coupler_block expects a Coupler spec".into(),
        ));
    };
    spec.validate()?;
    let gamma = 1.0 - excess_amplitude_loss;
    let bar = Complex64::new(gamma * (1.0 - power_coupling_kappa).sqrt(), 0.0);
    let cross = Complex64::new(0.0, gamma * power_coupling_kappa.sqrt());
    let mut m = ComplexMatrix::zeros(8, 8);
    // (out_port, in_port, amplitude), 1-based ports.
    let paths = [
        (3, 1, bar),
        (4, 2, bar),
        (1, 3, bar),
        (2, 4, bar),
        (4, 1, cross),
        (3, 2, cross),
        (1, 4, cross),
        (2, 3, cross),
    ];
    for (out, inp, amp) in paths {
        for pol in 0..2 {
            m.set(2 * (out - 1) + pol, 2 * (inp - 1) + pol, amp);
        }
    }
    ScatteringBlock::new(4, m)
}
