//! Helpers shared by the integration and acceptance suites.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use fringe::components::{two_port_block, ComponentSpec, ScatteringBlock};
use fringe::matrix::{ComplexMatrix, ComplexVector};
use fringe::network::{
    assemble_connection_matrix, assemble_global_scattering, solve_transfer_with_condition,
    ConnectionMap, PortMap,
};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex_2x2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        (0..4)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .unwrap()
}

/// Random 2×2 with largest singular value scaled into (0.3, 0.95).
pub fn random_passive_jones(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let m = random_complex_2x2(rng);
    let sigma = m.spectral_norm();
    m.scale(c(rng.gen_range(0.3..0.95) / sigma, 0.0))
}

/// Random unitary 2×2 via Gram-Schmidt on a random complex matrix.
pub fn random_unitary_2x2(rng: &mut ChaCha8Rng) -> ComplexMatrix {
    loop {
        let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n1 = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n1 < 1e-3 {
            continue;
        }
        let (u1a, u1b) = (a / n1, b / n1);
        // Orthogonal complement of (u1a, u1b), up to phase.
        let (v_a, v_b) = (-u1b.conj(), u1a.conj());
        let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        return ComplexMatrix::from_2x2(u1a, phase * v_a, u1b, phase * v_b);
    }
}

/// 2-port block with given forward transmission, reciprocal backward
/// (transpose) and no reflection.
pub fn forward_block(fwd: &ComplexMatrix) -> ScatteringBlock {
    let z2 = ComplexMatrix::zeros(2, 2);
    two_port_block(fwd, &fwd.transpose(), &z2, &z2).unwrap()
}

/// Assembled linear chain of 2-port blocks: component i on global ports
/// (2i+1, 2i+2), consecutive components connected output-to-input.
pub struct Chain {
    pub s: ComplexMatrix,
    pub g: ComplexMatrix,
    pub m: usize,
}

pub fn build_chain(blocks: &[ScatteringBlock]) -> Chain {
    let k = blocks.len();
    let pm = PortMap::sequential(&vec![2; k]);
    let mut cm = ConnectionMap::new();
    for i in 0..k - 1 {
        cm.connect(2 * i + 2, 2 * i + 3).unwrap();
    }
    let s = assemble_global_scattering(blocks, &pm).unwrap();
    let g = assemble_connection_matrix(&cm, 2 * k).unwrap();
    Chain { s, g, m: 2 * k }
}

/// Solved Mach-Zehnder interferometer built from catalog parts.
///
/// Ports: source = 1 (coupler 1 input), cross output = 8 (coupler 2 port
/// 4, the cos² port), bar output = 7. Arm 1 carries `arm1`, arm 2 `arm2`.
pub struct MziPorts {
    pub source: usize,
    pub cross: usize,
    pub bar: usize,
}

pub const MZI_PORTS: MziPorts = MziPorts {
    source: 1,
    cross: 8,
    bar: 7,
};

pub fn mzi_system(arm1: &ComponentSpec, arm2: &ComponentSpec, omega: f64) -> (ComplexMatrix, f64) {
    let coupler = ComponentSpec::Coupler {
        power_coupling_kappa: 0.5,
        excess_amplitude_loss: 0.0,
    };
    let blocks: Vec<ScatteringBlock> = [&coupler, &coupler, arm1, arm2]
        .iter()
        .map(|s| s.scattering_block(omega).unwrap())
        .collect();
    // c1: 1-4, c2: 5-8, w1: 9-10, w2: 11-12.
    let pm = PortMap::sequential(&[4, 4, 2, 2]);
    let mut cm = ConnectionMap::new();
    cm.connect(3, 9).unwrap(); // c1 bar out -> arm 1
    cm.connect(10, 5).unwrap(); // arm 1 -> c2 in 1
    cm.connect(4, 11).unwrap(); // c1 cross out -> arm 2
    cm.connect(12, 6).unwrap(); // arm 2 -> c2 in 2
    let s = assemble_global_scattering(&blocks, &pm).unwrap();
    let g = assemble_connection_matrix(&cm, 12).unwrap();
    solve_transfer_with_condition(&s, &g).unwrap()
}

/// Phase-shifter arm: zero length, pure static phase exp(+i·phase).
pub fn phase_arm(phase: f64) -> ComponentSpec {
    ComponentSpec::Waveguide {
        index_n: 1.0,
        length_z: 0.0,
        birefringence_dn: 0.0,
        axis_angle: 0.0,
        amplitude_loss_alpha: 0.0,
        extra_phase_phi: -phase,
    }
}

/// Delay arm of physical length z.
pub fn delay_arm(index_n: f64, z: f64) -> ComponentSpec {
    ComponentSpec::Waveguide {
        index_n,
        length_z: z,
        birefringence_dn: 0.0,
        axis_angle: 0.0,
        amplitude_loss_alpha: 0.0,
        extra_phase_phi: 0.0,
    }
}

/// All-pass ring: coupler with its cross arm fed back through one
/// waveguide. Source on port 1, through port 3, loop on ports 5-6.
pub fn ring_system(
    kappa: f64,
    loop_guide: &ComponentSpec,
    omega: f64,
) -> Result<(ComplexMatrix, f64), fringe::network::NetworkError> {
    let coupler = ComponentSpec::Coupler {
        power_coupling_kappa: kappa,
        excess_amplitude_loss: 0.0,
    };
    let blocks = vec![
        coupler.scattering_block(omega).unwrap(),
        loop_guide.scattering_block(omega).unwrap(),
    ];
    let pm = PortMap::sequential(&[4, 2]);
    let mut cm = ConnectionMap::new();
    cm.connect(4, 5).unwrap();
    cm.connect(6, 2).unwrap();
    let s = assemble_global_scattering(&blocks, &pm).unwrap();
    let g = assemble_connection_matrix(&cm, 6).unwrap();
    solve_transfer_with_condition(&s, &g)
}

/// Fabry-Perot: mirror, gap waveguide, mirror. Source port 1,
/// transmission port 6, reflection back out of port 1.
pub fn fabry_perot_system(r: f64, gap: &ComponentSpec, omega: f64) -> (ComplexMatrix, f64) {
    let mirror = ComponentSpec::Mirror {
        amplitude_reflectance_r: c(r, 0.0),
    };
    let blocks = vec![
        mirror.scattering_block(omega).unwrap(),
        gap.scattering_block(omega).unwrap(),
        mirror.scattering_block(omega).unwrap(),
    ];
    let pm = PortMap::sequential(&[2, 2, 2]);
    let mut cm = ConnectionMap::new();
    cm.connect(2, 3).unwrap();
    cm.connect(4, 5).unwrap();
    let s = assemble_global_scattering(&blocks, &pm).unwrap();
    let g = assemble_connection_matrix(&cm, 6).unwrap();
    solve_transfer_with_condition(&s, &g).unwrap()
}

/// Unit x-polarized launch.
pub fn launch_x() -> ComplexVector {
    ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap()
}

pub fn max_entry_dev(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.max_abs_diff(b)
}
