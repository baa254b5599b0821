//! All-pass ring resonator: a coupler with its cross arm fed back through
//! a lossy waveguide. Prints the through-port dip around one resonance
//! and compares with the analytic response (t − a·e^{iθ})/(1 − t·a·e^{iθ}).
//!
//! Run with: cargo run --example ring_resonator

use fringe::components::{ComponentSpec, SPEED_OF_LIGHT};
use fringe::matrix::ComplexVector;
use fringe::network::{
    assemble_connection_matrix, assemble_global_scattering, solve_transfer, ConnectionMap, PortMap,
};
use fringe::response::intensity_at_port;
use num_complex::Complex64;
use std::f64::consts::TAU;

fn main() {
    let kappa: f64 = 0.19; // bar amplitude t = sqrt(1 - kappa) = 0.9
    let n = 1.5;
    let z = 1.0e-5;
    let round_trip_amplitude: f64 = 0.95;
    let alpha = -round_trip_amplitude.ln() / z;

    let coupler = ComponentSpec::Coupler {
        power_coupling_kappa: kappa,
        excess_amplitude_loss: 0.0,
    };
    let loop_guide = ComponentSpec::Waveguide {
        index_n: n,
        length_z: z,
        birefringence_dn: 0.0,
        axis_angle: 0.0,
        amplitude_loss_alpha: alpha,
        extra_phase_phi: 0.0,
    };
    let launch = ComplexVector::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
        .expect("finite launch");

    let t = (1.0 - kappa).sqrt();
    let a = round_trip_amplitude;
    let fsr = TAU * SPEED_OF_LIGHT / (n * z);
    println!("t = {t:.3}, round-trip a = {a:.3}, FSR = {fsr:.3e} rad/s");
    println!("{:>10} {:>12} {:>12}", "theta", "simulated", "analytic");

    let mut worst: f64 = 0.0;
    for j in -10..=10 {
        let theta_offset = j as f64 * 0.05;
        let omega = fsr * (10.0 + theta_offset / TAU);
        let blocks = vec![
            coupler.scattering_block(omega).unwrap(),
            loop_guide.scattering_block(omega).unwrap(),
        ];
        let port_map = PortMap::sequential(&[4, 2]);
        let mut connections = ConnectionMap::new();
        connections.connect(4, 5).unwrap(); // cross arm out -> loop
        connections.connect(6, 2).unwrap(); // loop -> cross arm back in
        let s = assemble_global_scattering(&blocks, &port_map).unwrap();
        let g = assemble_connection_matrix(&connections, 6).unwrap();
        let h = solve_transfer(&s, &g).expect("lossy ring stays regular");
        let through = intensity_at_port(3, 1, &h, &launch).unwrap();

        let theta = omega * n * z / SPEED_OF_LIGHT;
        let numer = Complex64::new(t, 0.0) - Complex64::from_polar(a, theta);
        let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(t * a, theta);
        let analytic = (numer / denom).norm_sqr();
        worst = worst.max((through - analytic).abs());
        println!("{theta_offset:>10.3} {through:>12.6} {analytic:>12.6}");
    }
    println!("\nmax deviation from the closed form: {worst:.2e}");
}
