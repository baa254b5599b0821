//! Command-line front end: `fringe check` and `fringe simulate`.
//!
//! Exit codes: 0 ok, 1 I/O, 2 parse, 3 validation, 4 numeric.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fringe::netlist::{parse_netlist, validate, NetlistError};
use fringe::sweep::{run_sweep, write_csv, write_impulse_csv, write_json, SweepError, SweepOptions};

const EXIT_IO: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATE: u8 = 3;
const EXIT_NUMERIC: u8 = 4;

#[derive(Parser)]
#[command(
    name = "fringe",
    about = "Scattering-matrix simulator for interferometric optical networks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a netlist, reporting ports and warnings.
    Check { netlist: PathBuf },
    /// Run the sweep defined in a netlist and emit spectra.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    netlist: PathBuf,
    /// Output format.
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,
    /// Add complex amplitude columns per detector.
    #[arg(long)]
    amplitudes: bool,
    /// Also emit the impulse response (needs a frequency sweep).
    #[arg(long)]
    impulse: bool,
    /// Worker threads for grid evaluation.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Write to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// Structural-grammar failures exit 2; semantic netlist rules exit 3.
fn netlist_exit_code(err: &NetlistError) -> u8 {
    match err {
        NetlistError::Syntax { .. }
        | NetlistError::UnknownType { .. }
        | NetlistError::UnknownKey { .. }
        | NetlistError::MalformedNumber { .. }
        | NetlistError::DuplicateName { .. } => EXIT_PARSE,
        _ => EXIT_VALIDATE,
    }
}

fn sweep_exit_code(err: &SweepError) -> u8 {
    match err {
        SweepError::Netlist(e) => netlist_exit_code(e),
        SweepError::NoSource
        | SweepError::NoDetector
        | SweepError::NoSweep
        | SweepError::InvalidSweep(_)
        | SweepError::ImpulseNeedsFrequencySweep => EXIT_VALIDATE,
        _ => EXIT_NUMERIC,
    }
}

fn read_netlist(path: &PathBuf) -> Result<String, ExitCode> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_IO)
    })
}

fn cmd_check(path: PathBuf) -> ExitCode {
    let text = match read_netlist(&path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let circuit = match parse_netlist(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(netlist_exit_code(&e));
        }
    };
    match validate(&circuit) {
        Ok(v) => {
            println!(
                "m={}, {} components, {} connections",
                v.port_map.total_ports(),
                circuit.components.len(),
                v.connections.pairs().len()
            );
            for w in &v.warnings {
                println!("warning: {w}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("validation error: {e}");
            ExitCode::from(netlist_exit_code(&e))
        }
    }
}

fn cmd_simulate(args: SimulateArgs) -> ExitCode {
    let text = match read_netlist(&args.netlist) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let circuit = match parse_netlist(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("parse error: {e}");
            return ExitCode::from(netlist_exit_code(&e));
        }
    };
    let options = SweepOptions {
        threads: args.threads.max(1),
        amplitudes: args.amplitudes,
        impulse: args.impulse,
    };
    let result = match run_sweep(&circuit, &options) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(sweep_exit_code(&e));
        }
    };
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    let write_all = |out: &mut dyn Write| -> std::io::Result<()> {
        match args.format.as_str() {
            "json" => write_json(&result, out),
            _ => write_csv(&result, out),
        }
    };

    let io_result = match &args.output {
        Some(path) => {
            let write_main = fs::File::create(path).and_then(|mut f| write_all(&mut f));
            // CSV keeps the impulse table in a sibling file; JSON embeds it.
            match (write_main, args.format.as_str(), &result.impulse) {
                (Err(e), _, _) => Err(e),
                (Ok(()), "csv", Some(impulse)) => {
                    let impulse_path = path.with_extension("impulse.csv");
                    fs::File::create(&impulse_path)
                        .and_then(|mut f| write_impulse_csv(impulse, &mut f))
                }
                (Ok(()), _, _) => Ok(()),
            }
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let main = write_all(&mut lock);
            match (main, args.format.as_str(), &result.impulse) {
                (Err(e), _, _) => Err(e),
                (Ok(()), "csv", Some(impulse)) => {
                    writeln!(lock, "# impulse response").and_then(|_| {
                        write_impulse_csv(impulse, &mut lock)
                    })
                }
                (Ok(()), _, _) => Ok(()),
            }
        }
    };
    if let Err(e) = io_result {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_IO);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { netlist } => cmd_check(netlist),
        Command::Simulate(args) => cmd_simulate(args),
    }
}
