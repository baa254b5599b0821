//! Simulator for arbitrarily connected interferometric optical networks.
//!
//! A circuit is a set of catalog components (waveguides, couplers,
//! mirrors, rotators, retarders, polarizers, splices), each contributing a
//! scattering block over two polarization coordinates per port. The blocks
//! are placed on the diagonal of a global scattering matrix S; the
//! topology lives in a separate 0/1 connection matrix G; and the system
//! amplitude transfer function H — the map from externally launched fields to
//! every port output — comes from solving (I − S·G)·H = S. Reducing H with
//! rectangular port selectors yields effective Jones matrices, intensity
//! spectra, photocurrents and broadband (partially coherent) responses.
//!
//! Fixed conventions (every analytic check in the test suite uses the
//! same ones): forward propagation multiplies by exp(+i·ω·n·z/c);
//! couplers carry +i on the cross path; mirrors carry +i on transmission;
//! global port p owns coordinates 2p−1 and 2p (x before y, 1-based).
//!
//! Start with the runnable examples (`cargo run --example mzi_fringe`,
//! `ring_resonator`, `fabry_perot`, …) or the `fringe` command-line tool
//! (`fringe check`, `fringe simulate`) driven by plain-text netlists.

pub mod components;
pub mod matrix;
pub mod netlist;
pub mod network;
pub mod reduction;
pub mod response;
pub mod sweep;

pub use components::{ComponentSpec, ScatteringBlock, SPEED_OF_LIGHT};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use netlist::{parse_netlist, serialize, validate, CircuitDescription, SweepConfig};
pub use network::{
    assemble_connection_matrix, assemble_global_scattering, chain_product, propagate,
    solve_transfer, ConnectionMap, NetworkSystem, PortMap,
};
pub use reduction::{extract_jones, reduce_transfer, selector_for_ports, ReductionSelector};
pub use response::{
    broadband_response, impulse_response, intensity, intensity_at_port, photocurrent, pulse_output_energy,
    spectrum_from_impulse, DetectorSpec, ImpulseResponse, SourceSpectrum, TransferSamples,
};
pub use sweep::{run_sweep, SweepOptions, SweepResult};

/// Crate-wide error type aggregating the per-module failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] matrix::MatrixError),
    #[error(transparent)]
    Component(#[from] components::ComponentError),
    #[error(transparent)]
    Network(#[from] network::NetworkError),
    #[error(transparent)]
    Reduction(#[from] reduction::ReductionError),
    #[error(transparent)]
    Response(#[from] response::ResponseError),
    #[error(transparent)]
    Netlist(#[from] netlist::NetlistError),
    #[error(transparent)]
    Sweep(#[from] sweep::SweepError),
}
