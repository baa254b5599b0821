//! Global scattering matrix, connection topology and the transfer solve.
//!
//! Global port p (1-based) owns coordinate rows 2p−1 and 2p, x before y.
//! The global scattering matrix S is 2m×2m and block-diagonal in the
//! component blocks; the connection matrix G is a 0/1 routing matrix that
//! depends on topology only. The amplitude transfer function H maps the
//! externally launched vector E_o to all port outputs, E_out = H·E_o.
//!
//! H is obtained by solving (I − S·G)·H = S rather than inverting S first:
//! the two agree whenever S is invertible, and the solve form stays defined
//! for singular S (ideal polarizers, absorbers).

use num_complex::Complex64;
use thiserror::Error;

use crate::components::ScatteringBlock;
use crate::matrix::{ComplexMatrix, ComplexVector, MatrixError, SINGULARITY_THRESHOLD};

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("port map: {0}")]
    BadPortMap(String),
    #[error("connection: {0}")]
    BadConnection(String),
    #[error(
        "singular system (condition estimate {condition:.3e}); \
         a lossless loop at exact resonance has no steady state"
    )]
    Singular { condition: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

pub type Result<T> = std::result::Result<T, NetworkError>;

/// Assignment of every component's local ports to global port numbers.
///
/// Global numbers are 1-based and must form a bijection onto 1..=m.
#[derive(Clone, Debug)]
pub struct PortMap {
    /// assignments[c][l] = global port of component c's local port l+1.
    assignments: Vec<Vec<usize>>,
    total_ports: usize,
}

impl PortMap {
    /// Assigns global ports in declaration order: component 0 gets 1..,
    /// component 1 continues after it, and so on.
    pub fn sequential(port_counts: &[usize]) -> Self {
        let mut assignments = Vec::with_capacity(port_counts.len());
        let mut next = 1;
        for &n in port_counts {
            assignments.push((next..next + n).collect());
            next += n;
        }
        Self {
            assignments,
            total_ports: next - 1,
        }
    }

    /// Explicit assignment; validates that the globals are a bijection
    /// onto 1..=m.
    pub fn from_assignments(assignments: Vec<Vec<usize>>) -> Result<Self> {
        let m: usize = assignments.iter().map(|a| a.len()).sum();
        let mut seen = vec![false; m + 1];
        for a in assignments.iter().flatten() {
            if *a == 0 || *a > m {
                return Err(NetworkError::BadPortMap(format!(
                    "global port {a} outside 1..={m}"
                )));
            }
            if seen[*a] {
                return Err(NetworkError::BadPortMap(format!(
                    "global port {a} assigned twice"
                )));
            }
            seen[*a] = true;
        }
        Ok(Self {
            assignments,
            total_ports: m,
        })
    }

    pub fn total_ports(&self) -> usize {
        self.total_ports
    }

    pub fn component_count(&self) -> usize {
        self.assignments.len()
    }

    /// Global port of a component's local port (both 1-based).
    pub fn global_port(&self, component: usize, local_port: usize) -> Option<usize> {
        self.assignments
            .get(component)
            .and_then(|a| a.get(local_port - 1))
            .copied()
    }

    pub fn ports_of(&self, component: usize) -> &[usize] {
        &self.assignments[component]
    }
}

/// Coordinate rows of a global port: (2p−2, 2p−1) zero-based, x then y.
pub fn port_coords(port: usize) -> (usize, usize) {
    (2 * port - 2, 2 * port - 1)
}

/// Set of unordered port-to-port connections; each port appears at most
/// once and never pairs with itself.
#[derive(Clone, Debug, Default)]
pub struct ConnectionMap {
    pairs: Vec<(usize, usize)>,
}

impl ConnectionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn connect(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(NetworkError::BadConnection(format!(
                "port {a} connected to itself"
            )));
        }
        for &(x, y) in &self.pairs {
            for p in [a, b] {
                if p == x || p == y {
                    return Err(NetworkError::BadConnection(format!(
                        "port {p} used in more than one connection"
                    )));
                }
            }
        }
        self.pairs.push((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains_port(&self, p: usize) -> bool {
        self.pairs.iter().any(|&(a, b)| a == p || b == p)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Places every component block on the diagonal positions given by the
/// port map, producing the 2m×2m global scattering matrix.
pub fn assemble_global_scattering(
    blocks: &[ScatteringBlock],
    port_map: &PortMap,
) -> Result<ComplexMatrix> {
    if blocks.len() != port_map.component_count() {
        return Err(NetworkError::BadPortMap(format!(
            "{} blocks but port map covers {} components",
            blocks.len(),
            port_map.component_count()
        )));
    }
    let m = port_map.total_ports();
    let mut s = ComplexMatrix::zeros(2 * m, 2 * m);
    for (ci, block) in blocks.iter().enumerate() {
        let ports = port_map.ports_of(ci);
        if ports.len() != block.port_count() {
            return Err(NetworkError::BadPortMap(format!(
                "component {ci}: block has {} ports, map assigns {}",
                block.port_count(),
                ports.len()
            )));
        }
        let bm = block.matrix();
        for (lo, &po) in ports.iter().enumerate() {
            let (ro_x, ro_y) = port_coords(po);
            for (li, &pi) in ports.iter().enumerate() {
                let (ci_x, ci_y) = port_coords(pi);
                for (dr, gr) in [(0, ro_x), (1, ro_y)] {
                    for (dc, gc) in [(0, ci_x), (1, ci_y)] {
                        let v = bm[(2 * lo + dr, 2 * li + dc)];
                        if v != Complex64::new(0.0, 0.0) {
                            s.set(gr, gc, v);
                        }
                    }
                }
            }
        }
    }
    Ok(s)
}

/// Builds the 2m×2m connection matrix: a 2×2 identity at the coordinate
/// rows of each connected port against the columns of its partner, in both
/// directions, zeros elsewhere.
pub fn assemble_connection_matrix(connections: &ConnectionMap, m: usize) -> Result<ComplexMatrix> {
    let mut g = ComplexMatrix::zeros(2 * m, 2 * m);
    let one = Complex64::new(1.0, 0.0);
    for &(a, b) in connections.pairs() {
        if a > m || b > m {
            return Err(NetworkError::BadConnection(format!(
                "connection ({a}, {b}) references a port beyond m={m}"
            )));
        }
        let (ax, ay) = port_coords(a);
        let (bx, by) = port_coords(b);
        g.set(ax, bx, one);
        g.set(ay, by, one);
        g.set(bx, ax, one);
        g.set(by, ay, one);
    }
    Ok(g)
}

/// Solves for the amplitude transfer function H with E_out = H·E_o.
///
/// Returns H together with the condition estimate of the solved system
/// (I − S·G). Systems past the singularity threshold are rejected; a
/// lossless ring at exact resonance lands here.
pub fn solve_transfer_with_condition(
    s: &ComplexMatrix,
    g: &ComplexMatrix,
) -> Result<(ComplexMatrix, f64)> {
    if !s.is_square() || s.rows() != g.rows() || s.cols() != g.cols() {
        return Err(NetworkError::Matrix(MatrixError::DimensionMismatch {
            context: format!(
                "solve_transfer: S is {}x{}, G is {}x{}",
                s.rows(),
                s.cols(),
                g.rows(),
                g.cols()
            ),
        }));
    }
    let sg = s.multiply(g)?;
    let a = ComplexMatrix::identity(s.rows()).sub(&sg)?;
    let condition = a.condition_estimate()?;
    if !condition.is_finite() || condition > SINGULARITY_THRESHOLD {
        return Err(NetworkError::Singular { condition });
    }
    let h = a.solve(s)?;
    Ok((h, condition))
}

/// [`solve_transfer_with_condition`] without the condition estimate.
pub fn solve_transfer(s: &ComplexMatrix, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    solve_transfer_with_condition(s, g).map(|(h, _)| h)
}

/// Ordered product of a propagation chain: for the list [J1, J2, …, JN]
/// in the order light meets the elements, returns JN·…·J2·J1.
pub fn chain_product(jones_list: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if jones_list.is_empty() {
        return Err(NetworkError::Matrix(MatrixError::Empty("chain_product")));
    }
    let mut acc = jones_list[0].clone();
    for j in &jones_list[1..] {
        acc = j.multiply(&acc)?;
    }
    Ok(acc)
}

/// E_out = H·E_o.
pub fn propagate(h: &ComplexMatrix, e_o: &ComplexVector) -> Result<ComplexVector> {
    Ok(h.mul_vec(e_o)?)
}

/// Assembled network at one optical frequency: S, G, the port map and the
/// solved transfer function once computed. Immutable; solving returns a
/// new value.
#[derive(Clone, Debug)]
pub struct NetworkSystem {
    s: ComplexMatrix,
    g: ComplexMatrix,
    port_map: PortMap,
    h: Option<ComplexMatrix>,
    condition: Option<f64>,
}

impl NetworkSystem {
    pub fn assemble(
        blocks: &[ScatteringBlock],
        port_map: PortMap,
        connections: &ConnectionMap,
    ) -> Result<Self> {
        let s = assemble_global_scattering(blocks, &port_map)?;
        let g = assemble_connection_matrix(connections, port_map.total_ports())?;
        Ok(Self {
            s,
            g,
            port_map,
            h: None,
            condition: None,
        })
    }

    /// Returns a copy with the transfer function solved.
    pub fn with_transfer(mut self) -> Result<Self> {
        let (h, condition) = solve_transfer_with_condition(&self.s, &self.g)?;
        self.h = Some(h);
        self.condition = Some(condition);
        Ok(self)
    }

    pub fn scattering(&self) -> &ComplexMatrix {
        &self.s
    }

    pub fn connection(&self) -> &ComplexMatrix {
        &self.g
    }

    pub fn port_map(&self) -> &PortMap {
        &self.port_map
    }

    pub fn transfer(&self) -> Option<&ComplexMatrix> {
        self.h.as_ref()
    }

    pub fn condition(&self) -> Option<f64> {
        self.condition
    }
}
