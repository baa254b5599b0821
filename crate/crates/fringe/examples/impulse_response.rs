//! Impulse response of a ring resonator: the inverse transform of the
//! through-port transfer function shows the direct pass at tau = 0 and an
//! echo train at multiples of the round-trip time, decaying with the loop
//! amplitude.
//!
//! Run with: cargo run --example impulse_response

use fringe::components::{ComponentSpec, SPEED_OF_LIGHT};
use fringe::network::{
    assemble_connection_matrix, assemble_global_scattering, solve_transfer, ConnectionMap, PortMap,
};
use fringe::reduction::extract_jones;
use fringe::response::{impulse_response, TransferSamples};

fn main() {
    let kappa: f64 = 0.36;
    let n = 1.5;
    // Uniform omega grid wide enough to resolve a few echoes.
    let n_points = 1024;
    let d_omega = 2.0e9;
    let omega0 = 1.2e15;
    // Pick the loop length so the round trip sits exactly on a tau bin
    // (32 bins); off-bin delays smear into sinc sidelobes.
    let d_tau = std::f64::consts::TAU / (n_points as f64 * d_omega);
    let z = 32.0 * d_tau * SPEED_OF_LIGHT / n;
    let alpha = -(0.9f64).ln() / z;
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

    let round_trip = n * z / SPEED_OF_LIGHT;
    let grid: Vec<f64> = (0..n_points).map(|i| omega0 + i as f64 * d_omega).collect();
    let samples: Vec<_> = grid
        .iter()
        .map(|&omega| {
            let blocks = vec![
                coupler.scattering_block(omega).unwrap(),
                loop_guide.scattering_block(omega).unwrap(),
            ];
            let port_map = PortMap::sequential(&[4, 2]);
            let mut connections = ConnectionMap::new();
            connections.connect(4, 5).unwrap();
            connections.connect(6, 2).unwrap();
            let s = assemble_global_scattering(&blocks, &port_map).unwrap();
            let g = assemble_connection_matrix(&connections, 6).unwrap();
            let h = solve_transfer(&s, &g).unwrap();
            extract_jones(3, 1, &h).unwrap()
        })
        .collect();

    let ts = TransferSamples::new(grid, samples).unwrap();
    let ir = impulse_response(&ts).unwrap();
    let tau = ir.tau_grid();
    let d_tau = tau[1] - tau[0];

    println!("round-trip time: {:.3} ps", round_trip * 1e12);
    println!("tau resolution:  {:.3} ps\n", d_tau * 1e12);
    println!("{:>10} {:>12}", "tau_ps", "|h| (rel)");
    // Report the echo train: local maxima of |h|, relative to the direct
    // pass, over the causal half of the tau axis (later echoes alias).
    let mags: Vec<f64> = ir.samples().iter().map(|m| m.max_abs()).collect();
    let peak = mags.iter().cloned().fold(0.0, f64::max);
    let mut echoes = 0;
    for k in 1..mags.len() - 1 {
        let rel = mags[k] / peak;
        let causal = tau[k] >= 0.0 && tau[k] < 8.5 * round_trip;
        if causal && rel > 1e-3 && mags[k] >= mags[k - 1] && mags[k] >= mags[k + 1] {
            println!("{:>10.3} {:>12.6}", tau[k] * 1e12, rel);
            if tau[k] > 0.5 * round_trip {
                let ratio = tau[k] / round_trip;
                assert!(
                    (ratio - ratio.round()).abs() < 0.05,
                    "echo off the round-trip comb at {} ps",
                    tau[k] * 1e12
                );
                echoes += 1;
            }
        }
    }
    println!("\n{echoes} echoes on the round-trip comb");
}
