//! The full netlist pipeline in one place: parse text, validate (port
//! tabulation plus warnings), run the sweep and print the CSV that the
//! `fringe` binary would produce.
//!
//! Run with: cargo run --example netlist_pipeline

use fringe::netlist::{parse_netlist, serialize, validate};
use fringe::sweep::{run_sweep, write_csv, SweepOptions};

const NETLIST: &str = "\
# unbalanced interferometer with a lossy arm
component c1 coupler kappa=0.5
component c2 coupler kappa=0.5
component short waveguide n=1.5 z=50um
component long  waveguide n=1.5 z=65um alpha=2000
connect c1.3 short.1
connect short.2 c2.1
connect c1.4 long.1
connect long.2 c2.2
source c1.1 pol=1,0,0,0
detect c2.4
detect c2.3
sweep wavelength 1.54um 1.56um 9
";

fn main() {
    let circuit = parse_netlist(NETLIST).expect("grammar");
    let validated = validate(&circuit).expect("rules");
    println!(
        "m = {}, {} components, {} connections",
        validated.port_map.total_ports(),
        circuit.components.len(),
        validated.connections.pairs().len()
    );
    for w in &validated.warnings {
        println!("warning: {w}");
    }

    println!("\ncanonical form:\n{}", serialize(&circuit));

    let result = run_sweep(
        &circuit,
        &SweepOptions {
            threads: 1,
            amplitudes: false,
            impulse: false,
        },
    )
    .expect("runnable circuit");
    println!(
        "max condition estimate over the grid: {:.2e}\n",
        result.metadata.max_condition_estimate
    );
    let mut csv = Vec::new();
    write_csv(&result, &mut csv).unwrap();
    print!("{}", String::from_utf8(csv).unwrap());
}
