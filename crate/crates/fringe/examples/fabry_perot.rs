//! Fabry-Perot etalon: two partial mirrors around a lossless gap. The
//! multiple-reflection sum emerges from the network solve; peak
//! transmission reaches unity and the finesse follows pi*sqrt(R)/(1-R).
//!
//! Run with: cargo run --example fabry_perot

use fringe::components::{ComponentSpec, SPEED_OF_LIGHT};
use fringe::matrix::ComplexVector;
use fringe::network::{
    assemble_connection_matrix, assemble_global_scattering, solve_transfer, ConnectionMap, PortMap,
};
use fringe::response::intensity_at_port;
use num_complex::Complex64;
use std::f64::consts::PI;

fn transmission(r: f64, gap_z: f64, omega: f64) -> f64 {
    let mirror = ComponentSpec::Mirror {
        amplitude_reflectance_r: Complex64::new(r, 0.0),
    };
    let gap = ComponentSpec::Waveguide {
        index_n: 1.0,
        length_z: gap_z,
        birefringence_dn: 0.0,
        axis_angle: 0.0,
        amplitude_loss_alpha: 0.0,
        extra_phase_phi: 0.0,
    };
    let blocks = vec![
        mirror.scattering_block(omega).unwrap(),
        gap.scattering_block(omega).unwrap(),
        mirror.scattering_block(omega).unwrap(),
    ];
    let port_map = PortMap::sequential(&[2, 2, 2]);
    let mut connections = ConnectionMap::new();
    connections.connect(2, 3).unwrap();
    connections.connect(4, 5).unwrap();
    let s = assemble_global_scattering(&blocks, &port_map).unwrap();
    let g = assemble_connection_matrix(&connections, 6).unwrap();
    let h = solve_transfer(&s, &g).expect("etalon with r < 1 stays regular");
    let launch = ComplexVector::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
        .expect("finite launch");
    intensity_at_port(6, 1, &h, &launch).unwrap()
}

fn main() {
    let r = 0.9;
    let z = 1.0e-5;
    // One free spectral range of the one-way phase phi = omega*z/c,
    // sampled finely around the resonance at phi = 40*pi.
    let samples = 2000;
    let mut half_crossings = Vec::new();
    let mut peak: f64 = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for j in -samples / 2..=samples / 2 {
        let phi = PI * 40.0 + j as f64 * (PI / samples as f64);
        let omega = phi * SPEED_OF_LIGHT / z;
        let t = transmission(r, z, omega);
        peak = peak.max(t);
        if let Some((phi0, t0)) = prev {
            if (t0 < 0.5) != (t < 0.5) {
                half_crossings.push(phi0 + (0.5 - t0) * (phi - phi0) / (t - t0));
            }
        }
        prev = Some((phi, t));
    }
    let fwhm = half_crossings[1] - half_crossings[0];
    let finesse = PI / fwhm;
    let formula = PI * (r * r).sqrt() / (1.0 - r * r);
    println!("mirror |r| = {r}, power reflectance R = {:.2}", r * r);
    println!("peak transmission     = {peak:.12}");
    println!("measured finesse      = {finesse:.3}");
    println!("pi*sqrt(R)/(1-R)      = {formula:.3}");
    assert!((peak - 1.0).abs() < 1e-9);
}
