use super::{CellComplex, Provenance};
use crate::bitvec::BitVec;
use crate::error::Result;

/// A set of cells of a parent complex, one bit vector per dimension.
/// Constructors produce closed sets unless stated otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    cells: Vec<BitVec>,
}

impl Subcomplex {
    pub fn empty(c: &CellComplex) -> Self {
        Self { cells: (0..=c.dim()).map(|k| BitVec::zeros(c.count(k))).collect() }
    }

    pub fn full(c: &CellComplex) -> Self {
        Self { cells: (0..=c.dim()).map(|k| BitVec::ones(c.count(k))).collect() }
    }

    /// Wraps raw per-dimension masks without closing them.
    pub fn from_masks(cells: Vec<BitVec>) -> Self {
        Self { cells }
    }

    /// The closure of a set of `k`-cells.
    pub fn closure_of(c: &CellComplex, k: usize, top: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(c);
        for id in top {
            s.cells[k].set(id, true);
        }
        s.close_downward(c, k);
        s
    }

    fn close_downward(&mut self, c: &CellComplex, from: usize) {
        for k in (1..=from).rev() {
            let (lower, upper) = self.cells.split_at_mut(k);
            for id in upper[0].iter_ones() {
                for &f in c.faces(k, id) {
                    lower[k - 1].set(f, true);
                }
            }
        }
    }

    /// Closes an arbitrary cell set under taking faces.
    pub fn closed(mut self, c: &CellComplex) -> Self {
        self.close_downward(c, c.dim());
        self
    }

    pub fn contains(&self, k: usize, id: usize) -> bool {
        self.cells.get(k).is_some_and(|m| m.get(id))
    }

    pub fn mask(&self, k: usize) -> &BitVec {
        &self.cells[k]
    }

    pub fn masks(&self) -> &[BitVec] {
        &self.cells
    }

    pub fn count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, BitVec::count_ones)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(BitVec::count_ones).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(BitVec::is_zero)
    }

    /// Highest dimension holding a cell, or `None` when empty.
    pub fn top_dim(&self) -> Option<usize> {
        (0..self.cells.len()).rev().find(|&k| !self.cells[k].is_zero())
    }

    pub fn euler_char(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let n = m.count_ones() as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a.or(b)).collect() }
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a.and(b)).collect() }
    }

    /// Cells of `self` not in `other`; generally not closed.
    pub fn difference(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex { cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a.and_not(b)).collect() }
    }

    pub fn is_closed(&self, c: &CellComplex) -> bool {
        (1..self.cells.len())
            .all(|k| self.cells[k].iter_ones().all(|id| c.faces(k, id).iter().all(|&f| self.cells[k - 1].get(f))))
    }

    /// Re-indexes the subcomplex as a standalone complex. Returns the
    /// complex and, per dimension, the parent id of each new cell.
    pub fn to_complex(&self, c: &CellComplex) -> Result<(CellComplex, Vec<Vec<usize>>)> {
        let top = self.top_dim().unwrap_or(0);
        let parents: Vec<Vec<usize>> = (0..=top).map(|k| self.cells[k].ones_vec()).collect();
        let mut local: Vec<Vec<usize>> = (0..=top).map(|k| vec![usize::MAX; c.count(k)]).collect();
        for k in 0..=top {
            for (i, &p) in parents[k].iter().enumerate() {
                local[k][p] = i;
            }
        }
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::with_capacity(top + 1);
        faces.push(vec![Vec::new(); parents[0].len()]);
        for k in 1..=top {
            let mut level = Vec::with_capacity(parents[k].len());
            for &p in &parents[k] {
                let fs: Vec<usize> = c.faces(k, p).iter().map(|&f| local[k - 1][f]).collect();
                if fs.contains(&usize::MAX) {
                    return Err(crate::error::Error::Precondition("subcomplex is not closed".into()));
                }
                level.push(fs);
            }
            faces.push(level);
        }
        Ok((CellComplex::new(faces, Provenance::Subcomplex)?, parents))
    }
}
