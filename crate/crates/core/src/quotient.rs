//! Equitable partitions and their quotient (divisor) matrices.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::IntMatrix;

/// Ordered list of disjoint, nonempty cells covering `1..=order`.
///
/// Equitability is a property of a partition *with respect to a graph* and is
/// checked by [`is_equitable`], not assumed at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitablePartition {
    order: usize,
    cells: Vec<Vec<usize>>,
    // cell_of[v - 1] = index of the cell containing v
    cell_of: Vec<usize>,
}

impl EquitablePartition {
    pub fn new(order: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut cell_of = vec![usize::MAX; order];
        for (c, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::MalformedPartition(format!("cell {} is empty", c + 1)));
            }
            for &v in cell {
                if v == 0 || v > order {
                    return Err(Error::MalformedPartition(format!(
                        "vertex {v} outside 1..={order}"
                    )));
                }
                if cell_of[v - 1] != usize::MAX {
                    return Err(Error::MalformedPartition(format!(
                        "vertex {v} appears more than once"
                    )));
                }
                cell_of[v - 1] = c;
            }
        }
        if let Some(missing) = cell_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::MalformedPartition(format!(
                "vertex {} is not covered",
                missing + 1
            )));
        }
        Ok(EquitablePartition {
            order,
            cells,
            cell_of,
        })
    }

    /// One cell per vertex.
    pub fn discrete(order: usize) -> Self {
        Self::new(order, (1..=order).map(|v| vec![v]).collect()).expect("discrete partition is valid")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// 0-indexed cell of the 1-indexed vertex `v`.
    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v - 1]
    }

    /// `order x cells` 0/1 matrix with a 1 at `(v, c)` iff vertex `v` lies in cell `c`.
    pub fn characteristic_matrix(&self) -> IntMatrix {
        let mut p = IntMatrix::zeros(self.order, self.cells.len());
        for (c, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                p.set(v - 1, c, BigInt::one());
            }
        }
        p
    }

    /// Neighbour counts of `v` into every cell.
    fn profile(&self, g: &Graph, v: usize) -> Vec<usize> {
        let mut counts = vec![0; self.cells.len()];
        for &u in g.neighbors(v) {
            counts[self.cell_of(u)] += 1;
        }
        counts
    }
}

/// The partition `{1,2}, {3}, ..., {n-1}, {n,n+1}` of the extended Dynkin graph.
pub fn canonical_partition(n: usize) -> Result<EquitablePartition> {
    if n < 4 {
        return Err(Error::InvalidOrder {
            family: "canonical partition",
            got: n,
            min: 4,
        });
    }
    let mut cells = vec![vec![1, 2]];
    cells.extend((3..n).map(|v| vec![v]));
    cells.push(vec![n, n + 1]);
    EquitablePartition::new(n + 1, cells)
}

fn check_cover(g: &Graph, p: &EquitablePartition) -> Result<()> {
    if g.order() != p.order() {
        return Err(Error::MalformedPartition(format!(
            "partition covers {} vertices but the graph has {}",
            p.order(),
            g.order()
        )));
    }
    Ok(())
}

/// First cell pair `(from, to)` (0-indexed) whose vertices disagree on the
/// number of neighbours in `to`, or `None` if the partition is equitable.
pub fn equitability_witness(g: &Graph, p: &EquitablePartition) -> Result<Option<(usize, usize)>> {
    check_cover(g, p)?;
    for (i, cell) in p.cells().iter().enumerate() {
        let first = p.profile(g, cell[0]);
        for &v in &cell[1..] {
            let other = p.profile(g, v);
            if let Some(j) = (0..first.len()).find(|&j| first[j] != other[j]) {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_equitable(g: &Graph, p: &EquitablePartition) -> Result<bool> {
    Ok(equitability_witness(g, p)?.is_none())
}

/// Cell-by-cell neighbour counts; entry `(i, j)` is how many neighbours in cell
/// `j` any vertex of cell `i` has. Equitability is re-checked here.
pub fn divisor_matrix(g: &Graph, p: &EquitablePartition) -> Result<IntMatrix> {
    if let Some((from, to)) = equitability_witness(g, p)? {
        return Err(Error::NotEquitable { from, to });
    }
    let k = p.cell_count();
    let mut b = IntMatrix::zeros(k, k);
    for (i, cell) in p.cells().iter().enumerate() {
        for (j, count) in p.profile(g, cell[0]).into_iter().enumerate() {
            b.set(i, j, BigInt::from(count));
        }
    }
    Ok(b)
}

/// Drops the first and last rows and the last two columns of a square walk
/// matrix of size at least 5.
pub fn hat_walk_matrix(w: &IntMatrix) -> Result<IntMatrix> {
    if !w.is_square() || w.rows() < 5 {
        return Err(Error::Shape(format!(
            "hat extraction needs a square matrix of size >= 5, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    let size = w.rows();
    w.submatrix(1..size - 1, 0..size - 2)
}
