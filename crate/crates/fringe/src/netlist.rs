//! Plain-text netlist format: parsing, validation and serialization.
//!
//! One directive per line, `#` starts a comment:
//!
//! ```text
//! component <name> <type> [key=value ...]
//! connect   <name>.<port#> <name>.<port#>
//! source    <name>.<port#> pol=<ex_re>,<ex_im>,<ey_re>,<ey_im>
//! detect    <name>.<port#>
//! sweep     wavelength <start> <stop> <points>
//! sweep     frequency  <start> <stop> <points>
//! sweep     single     <wavelength>
//! ```
//!
//! Types: `waveguide`, `coupler`, `mirror`, `rotator`, `retarder`,
//! `polarizer`, `splice`. Lengths accept the suffixes `m`, `um`, `nm`;
//! angles are radians; all other values plain reals.
//!
//! Parameter keys (all optional, with identity-like defaults):
//!
//! * waveguide: `n`, `z`, `dn`, `axis`, `alpha`, `phi`
//! * coupler:   `kappa`, `loss`
//! * mirror:    `r`, `r_phase`
//! * rotator:   `theta`
//! * retarder:  `delta`, `axis`
//! * polarizer: `axis`, `extinction`
//! * splice:    `t`, `rot`, `r`, `r_phase`
//!
//! Validation assigns global port numbers in declaration order and treats
//! unconnected ports as open, reflectionless exits (reported as warnings
//! unless a source or detector sits on them).

use num_complex::Complex64;
use thiserror::Error;

use crate::components::{ComponentError, ComponentSpec};
use crate::network::{ConnectionMap, NetworkError, PortMap};

#[derive(Debug, Error)]
pub enum NetlistError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown component type '{type_name}'")]
    UnknownType { line: usize, type_name: String },
    #[error("line {line}: unknown key '{key}' for component type '{type_name}'")]
    UnknownKey {
        line: usize,
        key: String,
        type_name: String,
    },
    #[error("line {line}: malformed number '{token}'")]
    MalformedNumber { line: usize, token: String },
    #[error("line {line}: duplicate component name '{name}'")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: port {port_ref} connected to itself")]
    SelfConnection { line: usize, port_ref: String },
    #[error("unknown instance '{0}'")]
    UnknownInstance(String),
    #[error("instance '{instance}' has no port {port} (ports 1..={count})")]
    PortOutOfRange {
        instance: String,
        port: usize,
        count: usize,
    },
    #[error("port {0} used in more than one connection")]
    DuplicatePortUse(String),
    #[error("source on connected port {0}")]
    SourceOnConnectedPort(String),
    #[error("component '{name}': {source}")]
    InvalidComponent {
        name: String,
        source: ComponentError,
    },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

pub type Result<T> = std::result::Result<T, NetlistError>;

/// Reference to one local port of a named instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PortRef {
    pub instance: String,
    pub port: usize,
}

impl std::fmt::Display for PortRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.instance, self.port)
    }
}

/// Evaluation grid requested by the netlist.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepConfig {
    /// Linear in wavelength (meters), both endpoints included.
    Wavelength { start: f64, stop: f64, points: usize },
    /// Linear in angular frequency (rad/s), both endpoints included.
    Frequency { start: f64, stop: f64, points: usize },
    /// One wavelength (meters).
    Single { wavelength: f64 },
}

/// Parsed netlist: instances in declaration order, connections, launches,
/// detector taps and the sweep request.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CircuitDescription {
    pub components: Vec<(String, ComponentSpec)>,
    pub connections: Vec<(PortRef, PortRef)>,
    pub sources: Vec<(PortRef, [f64; 4])>,
    pub detectors: Vec<PortRef>,
    pub sweep: Option<SweepConfig>,
}

impl CircuitDescription {
    pub fn component_index(&self, name: &str) -> Option<usize> {
        self.components.iter().position(|(n, _)| n == name)
    }
}

/// Number with optional length suffix (m/um/nm).
///
/// Suffixed values without their own exponent are scaled in decimal
/// ("1550nm" parses as the literal 1.55e-6) so unit normalization is
/// exact; values that already carry an exponent fall back to a float
/// multiply.
fn parse_quantity(token: &str, line: usize) -> Result<f64> {
    let bad = || NetlistError::MalformedNumber {
        line,
        token: token.to_string(),
    };
    let (mantissa, exponent, factor) = if let Some(stripped) = token.strip_suffix("um") {
        (stripped, "e-6", 1e-6)
    } else if let Some(stripped) = token.strip_suffix("nm") {
        (stripped, "e-9", 1e-9)
    } else if let Some(stripped) = token.strip_suffix('m') {
        (stripped, "", 1.0)
    } else {
        (token, "", 1.0)
    };
    if mantissa.is_empty() {
        return Err(bad());
    }
    if exponent.is_empty() || mantissa.contains(['e', 'E']) {
        return mantissa.parse::<f64>().map(|v| v * factor).map_err(|_| bad());
    }
    format!("{mantissa}{exponent}").parse::<f64>().map_err(|_| bad())
}

fn parse_port_ref(token: &str, line: usize) -> Result<PortRef> {
    let (name, port) = token.split_once('.').ok_or_else(|| NetlistError::Syntax {
        line,
        message: format!("expected <name>.<port#>, got '{token}'"),
    })?;
    if name.is_empty() {
        return Err(NetlistError::Syntax {
            line,
            message: "empty instance name".into(),
        });
    }
    let port: usize = port.parse().map_err(|_| NetlistError::Syntax {
        line,
        message: format!("bad port number in '{token}'"),
    })?;
    if port == 0 {
        return Err(NetlistError::Syntax {
            line,
            message: "ports are numbered from 1".into(),
        });
    }
    Ok(PortRef {
        instance: name.to_string(),
        port,
    })
}

/// Collects `key=value` pairs, rejecting unknown and repeated keys.
fn parse_params(
    tokens: &[&str],
    allowed: &[&str],
    type_name: &str,
    line: usize,
) -> Result<Vec<(String, f64)>> {
    let mut out: Vec<(String, f64)> = Vec::new();
    for token in tokens {
        let (key, value) = token.split_once('=').ok_or_else(|| NetlistError::Syntax {
            line,
            message: format!("expected key=value, got '{token}'"),
        })?;
        if !allowed.contains(&key) {
            return Err(NetlistError::UnknownKey {
                line,
                key: key.to_string(),
                type_name: type_name.to_string(),
            });
        }
        if out.iter().any(|(k, _)| k == key) {
            return Err(NetlistError::Syntax {
                line,
                message: format!("key '{key}' given twice"),
            });
        }
        out.push((key.to_string(), parse_quantity(value, line)?));
    }
    Ok(out)
}

fn get(params: &[(String, f64)], key: &str, default: f64) -> f64 {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .unwrap_or(default)
}

fn parse_component(tokens: &[&str], line: usize) -> Result<(String, ComponentSpec)> {
    if tokens.len() < 2 {
        return Err(NetlistError::Syntax {
            line,
            message: "component needs a name and a type".into(),
        });
    }
    let name = tokens[0];
    if name.contains('.') {
        return Err(NetlistError::Syntax {
            line,
            message: format!("component name '{name}' must not contain '.'"),
        });
    }
    let type_name = tokens[1];
    let rest = &tokens[2..];
    let spec = match type_name {
        "waveguide" => {
            let p = parse_params(rest, &["n", "z", "dn", "axis", "alpha", "phi"], type_name, line)?;
            ComponentSpec::Waveguide {
                index_n: get(&p, "n", 1.0),
                length_z: get(&p, "z", 0.0),
                birefringence_dn: get(&p, "dn", 0.0),
                axis_angle: get(&p, "axis", 0.0),
                amplitude_loss_alpha: get(&p, "alpha", 0.0),
                extra_phase_phi: get(&p, "phi", 0.0),
            }
        }
        "coupler" => {
            let p = parse_params(rest, &["kappa", "loss"], type_name, line)?;
            ComponentSpec::Coupler {
                power_coupling_kappa: get(&p, "kappa", 0.5),
                excess_amplitude_loss: get(&p, "loss", 0.0),
            }
        }
        "mirror" => {
            let p = parse_params(rest, &["r", "r_phase"], type_name, line)?;
            ComponentSpec::Mirror {
                amplitude_reflectance_r: Complex64::from_polar(
                    get(&p, "r", 1.0),
                    get(&p, "r_phase", 0.0),
                ),
            }
        }
        "rotator" => {
            let p = parse_params(rest, &["theta"], type_name, line)?;
            ComponentSpec::Rotator {
                angle_theta: get(&p, "theta", 0.0),
            }
        }
        "retarder" => {
            let p = parse_params(rest, &["delta", "axis"], type_name, line)?;
            ComponentSpec::Retarder {
                retardance_delta: get(&p, "delta", 0.0),
                axis_angle: get(&p, "axis", 0.0),
            }
        }
        "polarizer" => {
            let p = parse_params(rest, &["axis", "extinction"], type_name, line)?;
            ComponentSpec::Polarizer {
                axis_angle: get(&p, "axis", 0.0),
                extinction_amplitude: get(&p, "extinction", 0.0),
            }
        }
        "splice" => {
            let p = parse_params(rest, &["t", "rot", "r", "r_phase"], type_name, line)?;
            ComponentSpec::Splice {
                amplitude_transmission: get(&p, "t", 1.0),
                rotation_angle: get(&p, "rot", 0.0),
                backreflection_amplitude: Complex64::from_polar(
                    get(&p, "r", 0.0),
                    get(&p, "r_phase", 0.0),
                ),
            }
        }
        other => {
            return Err(NetlistError::UnknownType {
                line,
                type_name: other.to_string(),
            })
        }
    };
    Ok((name.to_string(), spec))
}

fn parse_sweep(tokens: &[&str], line: usize) -> Result<SweepConfig> {
    let bad = |message: String| NetlistError::Syntax { line, message };
    match tokens {
        ["wavelength", start, stop, points] => Ok(SweepConfig::Wavelength {
            start: parse_quantity(start, line)?,
            stop: parse_quantity(stop, line)?,
            points: points
                .parse()
                .map_err(|_| bad(format!("bad point count '{points}'")))?,
        }),
        ["frequency", start, stop, points] => Ok(SweepConfig::Frequency {
            start: parse_quantity(start, line)?,
            stop: parse_quantity(stop, line)?,
            points: points
                .parse()
                .map_err(|_| bad(format!("bad point count '{points}'")))?,
        }),
        ["single", wavelength] => Ok(SweepConfig::Single {
            wavelength: parse_quantity(wavelength, line)?,
        }),
        _ => Err(bad(
            "sweep must be 'wavelength <start> <stop> <points>', \
             'frequency <start> <stop> <points>' or 'single <wavelength>'"
                .into(),
        )),
    }
}

/// Parses netlist text into a [`CircuitDescription`].
///
/// Comments (`#`) and blank lines are ignored. Structural errors carry
/// the offending line number.
pub fn parse_netlist(text: &str) -> Result<CircuitDescription> {
    let mut circuit = CircuitDescription::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "component" => {
                let (name, spec) = parse_component(&tokens[1..], line)?;
                if circuit.component_index(&name).is_some() {
                    return Err(NetlistError::DuplicateName { line, name });
                }
                circuit.components.push((name, spec));
            }
            "connect" => {
                if tokens.len() != 3 {
                    return Err(NetlistError::Syntax {
                        line,
                        message: "connect takes exactly two ports".into(),
                    });
                }
                let a = parse_port_ref(tokens[1], line)?;
                let b = parse_port_ref(tokens[2], line)?;
                if a == b {
                    return Err(NetlistError::SelfConnection {
                        line,
                        port_ref: a.to_string(),
                    });
                }
                circuit.connections.push((a, b));
            }
            "source" => {
                if tokens.len() != 3 {
                    return Err(NetlistError::Syntax {
                        line,
                        message: "source takes a port and pol=re,im,re,im".into(),
                    });
                }
                let port = parse_port_ref(tokens[1], line)?;
                let pol_str = tokens[2].strip_prefix("pol=").ok_or_else(|| {
                    NetlistError::Syntax {
                        line,
                        message: "source polarization must be pol=<ex_re>,<ex_im>,<ey_re>,<ey_im>"
                            .into(),
                    }
                })?;
                let parts: Vec<&str> = pol_str.split(',').collect();
                if parts.len() != 4 {
                    return Err(NetlistError::Syntax {
                        line,
                        message: "polarization needs exactly four components".into(),
                    });
                }
                let mut pol = [0.0; 4];
                for (slot, token) in pol.iter_mut().zip(&parts) {
                    *slot = token.parse().map_err(|_| NetlistError::MalformedNumber {
                        line,
                        token: token.to_string(),
                    })?;
                }
                circuit.sources.push((port, pol));
            }
            "detect" => {
                if tokens.len() != 2 {
                    return Err(NetlistError::Syntax {
                        line,
                        message: "detect takes exactly one port".into(),
                    });
                }
                circuit.detectors.push(parse_port_ref(tokens[1], line)?);
            }
            "sweep" => {
                if circuit.sweep.is_some() {
                    return Err(NetlistError::Syntax {
                        line,
                        message: "sweep already defined".into(),
                    });
                }
                circuit.sweep = Some(parse_sweep(&tokens[1..], line)?);
            }
            other => {
                return Err(NetlistError::Syntax {
                    line,
                    message: format!("unknown directive '{other}'"),
                });
            }
        }
    }
    Ok(circuit)
}

/// Result of validating a circuit: the global port numbering, resolved
/// topology, launches and taps, plus non-fatal warnings.
#[derive(Clone, Debug)]
pub struct ValidatedCircuit {
    pub port_map: PortMap,
    pub connections: ConnectionMap,
    /// (global port, [ex_re, ex_im, ey_re, ey_im]) per source line.
    pub sources: Vec<(usize, [f64; 4])>,
    /// Global detector ports in declaration order.
    pub detectors: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Tabulates ports in declaration order and checks every rule that the
/// grammar alone cannot: instance/port existence, one connection per
/// port, sources only on unconnected ports, parameter ranges.
pub fn validate(circuit: &CircuitDescription) -> Result<ValidatedCircuit> {
    for (name, spec) in &circuit.components {
        spec.validate().map_err(|source| NetlistError::InvalidComponent {
            name: name.clone(),
            source,
        })?;
    }
    let counts: Vec<usize> = circuit
        .components
        .iter()
        .map(|(_, s)| s.port_count())
        .collect();
    let port_map = PortMap::sequential(&counts);

    let resolve = |r: &PortRef| -> Result<usize> {
        let idx = circuit
            .component_index(&r.instance)
            .ok_or_else(|| NetlistError::UnknownInstance(r.instance.clone()))?;
        let count = circuit.components[idx].1.port_count();
        if r.port > count {
            return Err(NetlistError::PortOutOfRange {
                instance: r.instance.clone(),
                port: r.port,
                count,
            });
        }
        Ok(port_map.global_port(idx, r.port).expect("resolved port"))
    };

    let mut connections = ConnectionMap::new();
    for (a, b) in &circuit.connections {
        let ga = resolve(a)?;
        let gb = resolve(b)?;
        if ga == gb {
            return Err(NetlistError::SelfConnection {
                line: 0,
                port_ref: a.to_string(),
            });
        }
        connections
            .connect(ga, gb)
            .map_err(|_| NetlistError::DuplicatePortUse(format!("{a} / {b}")))?;
    }

    let mut warnings = Vec::new();
    let mut sources = Vec::new();
    for (port_ref, pol) in &circuit.sources {
        let g = resolve(port_ref)?;
        if connections.contains_port(g) {
            return Err(NetlistError::SourceOnConnectedPort(port_ref.to_string()));
        }
        let power = pol.iter().map(|v| v * v).sum::<f64>();
        if (power - 1.0).abs() > 0.01 {
            warnings.push(format!(
                "source {port_ref}: |E|^2 = {power:.4} deviates from 1 by more than 1%"
            ));
        }
        sources.push((g, *pol));
    }

    let mut detectors = Vec::new();
    for port_ref in &circuit.detectors {
        let g = resolve(port_ref)?;
        if connections.contains_port(g) {
            warnings.push(format!(
                "detector {port_ref} sits on a connected port and observes the internal field"
            ));
        }
        detectors.push(g);
    }

    // Open ports that carry neither a source nor a detector behave as
    // perfectly matched, reflectionless exits; flag them.
    for (ci, (name, spec)) in circuit.components.iter().enumerate() {
        for local in 1..=spec.port_count() {
            let g = port_map.global_port(ci, local).expect("in range");
            let open = !connections.contains_port(g)
                && !sources.iter().any(|(p, _)| *p == g)
                && !detectors.contains(&g);
            if open {
                warnings.push(format!(
                    "port {name}.{local} is unterminated (open, reflectionless exit)"
                ));
            }
        }
    }

    Ok(ValidatedCircuit {
        port_map,
        connections,
        sources,
        detectors,
        warnings,
    })
}

/// Number formatting for canonical netlists: plain decimal for moderate
/// magnitudes, exponent notation outside them; both round-trip exactly.
fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.abs() < 1e-3 || v.abs() >= 1e4 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

/// Canonical text form; `parse_netlist(serialize(c))` is structurally
/// equal to `c`. Lengths are written in meters.
pub fn serialize(circuit: &CircuitDescription) -> String {
    let mut out = String::from("# fringe netlist\n");
    for (name, spec) in &circuit.components {
        let line = match spec {
            ComponentSpec::Waveguide {
                index_n,
                length_z,
                birefringence_dn,
                axis_angle,
                amplitude_loss_alpha,
                extra_phase_phi,
            } => format!(
                "component {name} waveguide n={} z={} dn={} axis={} alpha={} phi={}",
                fmt_num(*index_n),
                fmt_num(*length_z),
                fmt_num(*birefringence_dn),
                fmt_num(*axis_angle),
                fmt_num(*amplitude_loss_alpha),
                fmt_num(*extra_phase_phi)
            ),
            ComponentSpec::Coupler {
                power_coupling_kappa,
                excess_amplitude_loss,
            } => format!(
                "component {name} coupler kappa={} loss={}",
                fmt_num(*power_coupling_kappa),
                fmt_num(*excess_amplitude_loss)
            ),
            ComponentSpec::Mirror {
                amplitude_reflectance_r,
            } => format!(
                "component {name} mirror r={} r_phase={}",
                fmt_num(amplitude_reflectance_r.norm()),
                fmt_num(amplitude_reflectance_r.arg())
            ),
            ComponentSpec::Rotator { angle_theta } => {
                format!("component {name} rotator theta={}", fmt_num(*angle_theta))
            }
            ComponentSpec::Retarder {
                retardance_delta,
                axis_angle,
            } => format!(
                "component {name} retarder delta={} axis={}",
                fmt_num(*retardance_delta),
                fmt_num(*axis_angle)
            ),
            ComponentSpec::Polarizer {
                axis_angle,
                extinction_amplitude,
            } => format!(
                "component {name} polarizer axis={} extinction={}",
                fmt_num(*axis_angle),
                fmt_num(*extinction_amplitude)
            ),
            ComponentSpec::Splice {
                amplitude_transmission,
                rotation_angle,
                backreflection_amplitude,
            } => format!(
                "component {name} splice t={} rot={} r={} r_phase={}",
                fmt_num(*amplitude_transmission),
                fmt_num(*rotation_angle),
                fmt_num(backreflection_amplitude.norm()),
                fmt_num(backreflection_amplitude.arg())
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    for (a, b) in &circuit.connections {
        out.push_str(&format!("connect {a} {b}\n"));
    }
    for (port, pol) in &circuit.sources {
        out.push_str(&format!(
            "source {port} pol={},{},{},{}\n",
            fmt_num(pol[0]),
            fmt_num(pol[1]),
            fmt_num(pol[2]),
            fmt_num(pol[3])
        ));
    }
    for port in &circuit.detectors {
        out.push_str(&format!("detect {port}\n"));
    }
    match &circuit.sweep {
        Some(SweepConfig::Wavelength { start, stop, points }) => {
            out.push_str(&format!(
                "sweep wavelength {} {} {}\n",
                fmt_num(*start),
                fmt_num(*stop),
                points
            ));
        }
        Some(SweepConfig::Frequency { start, stop, points }) => {
            out.push_str(&format!(
                "sweep frequency {} {} {}\n",
                fmt_num(*start),
                fmt_num(*stop),
                points
            ));
        }
        Some(SweepConfig::Single { wavelength }) => {
            out.push_str(&format!("sweep single {}\n", fmt_num(*wavelength)));
        }
        None => {}
    }
    out
}
