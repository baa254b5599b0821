//! Rectangular selectors that compact the full transfer function down to
//! the ports of interest.
//!
//! A selector over k retained ports stands for the 2k×2m 0/1 matrix with
//! one 1 per row; reduction is implemented as pure index selection (no
//! arithmetic touches the entries), which coincides with the matrix
//! product form — a test asserts the two routes agree.

use thiserror::Error;

use crate::matrix::ComplexMatrix;
use crate::network::port_coords;

#[derive(Debug, Error)]
pub enum ReductionError {
    #[error("port {0} out of range 1..={1}")]
    PortOutOfRange(usize, usize),
    #[error("duplicate port {0}")]
    DuplicatePort(usize),
    #[error("selector for m={selector_m} applied to a {rows}x{cols} matrix")]
    DimensionMismatch {
        selector_m: usize,
        rows: usize,
        cols: usize,
    },
}

pub type Result<T> = std::result::Result<T, ReductionError>;

/// Ordered selection of global ports out of 1..=m.
#[derive(Clone, Debug)]
pub struct ReductionSelector {
    retained: Vec<usize>,
    m: usize,
}

/// Builds the selector for the given ports (distinct, each ≤ m).
pub fn selector_for_ports(ports: &[usize], m: usize) -> Result<ReductionSelector> {
    let mut seen = vec![false; m + 1];
    for &p in ports {
        if p == 0 || p > m {
            return Err(ReductionError::PortOutOfRange(p, m));
        }
        if seen[p] {
            return Err(ReductionError::DuplicatePort(p));
        }
        seen[p] = true;
    }
    Ok(ReductionSelector {
        retained: ports.to_vec(),
        m,
    })
}

impl ReductionSelector {
    pub fn retained_ports(&self) -> &[usize] {
        &self.retained
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The explicit 2k×2m selection matrix: row 2i−1 selects coordinate
    /// 2p−1 and row 2i selects 2p for the i-th retained port p.
    pub fn matrix(&self) -> ComplexMatrix {
        let k = self.retained.len();
        let mut a = ComplexMatrix::zeros(2 * k, 2 * self.m);
        for (i, &p) in self.retained.iter().enumerate() {
            let (x, y) = port_coords(p);
            a.set(2 * i, x, num_complex::Complex64::new(1.0, 0.0));
            a.set(2 * i + 1, y, num_complex::Complex64::new(1.0, 0.0));
        }
        a
    }
}

/// Reduced transfer function: the 2k×2k sub-matrix of H at the retained
/// coordinates, in selector order.
pub fn reduce_transfer(selector: &ReductionSelector, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = 2 * selector.m;
    if h.rows() != dim || h.cols() != dim {
        return Err(ReductionError::DimensionMismatch {
            selector_m: selector.m,
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let k = selector.retained.len();
    let mut out = ComplexMatrix::zeros(2 * k, 2 * k);
    for (i, &po) in selector.retained.iter().enumerate() {
        let (rx, ry) = port_coords(po);
        for (j, &pi) in selector.retained.iter().enumerate() {
            let (cx, cy) = port_coords(pi);
            out.set(2 * i, 2 * j, h[(rx, cx)]);
            out.set(2 * i, 2 * j + 1, h[(rx, cy)]);
            out.set(2 * i + 1, 2 * j, h[(ry, cx)]);
            out.set(2 * i + 1, 2 * j + 1, h[(ry, cy)]);
        }
    }
    Ok(out)
}

/// Effective 2×2 Jones matrix from input port j to output port k.
///
/// Applying it to a 2-vector launched at j gives the field exiting k.
pub fn extract_jones(k_out: usize, j_in: usize, h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let m = h.rows() / 2;
    for &p in &[k_out, j_in] {
        if p == 0 || p > m {
            return Err(ReductionError::PortOutOfRange(p, m));
        }
    }
    let (rx, ry) = port_coords(k_out);
    let (cx, cy) = port_coords(j_in);
    Ok(ComplexMatrix::from_2x2(
        h[(rx, cx)],
        h[(rx, cy)],
        h[(ry, cx)],
        h[(ry, cy)],
    ))
}
