//! Regular CW complexes stored as graded face posets.
//!
//! A complex of dimension `d` keeps, for every `k`-cell, the ids of its
//! `(k−1)`-dimensional faces. Ids are dense per dimension. Cofaces and the
//! transitive face relation are derived on construction.

mod builtin;
mod io;
mod subcomplex;
mod triangulation;
mod validate;
mod voronoi;

pub use builtin::{builtin_manifold, four_quadrant_plane, square_torus, ManifoldSpec};
pub use io::{read_complex, read_triangulation, write_complex, write_triangulation};
pub use subcomplex::Subcomplex;
pub use triangulation::{dual_of_triangulation, Triangulation};
pub use validate::{
    boundary_sphere, closed_subcomplex, is_homology_manifold, subset_boundary_manifold_check, validate_generic,
    ValidationReport, Violation,
};
pub use voronoi::{torus_voronoi, PointSet, VORONOI_SCALE};

use crate::bitvec::BitVec;
use crate::error::{Error, Result};
use crate::f2linalg::F2Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    DualOfTriangulation,
    Voronoi,
    Builtin,
    Subcomplex,
    Loaded,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::DualOfTriangulation => "dual-of-triangulation",
            Provenance::Voronoi => "voronoi",
            Provenance::Builtin => "builtin",
            Provenance::Subcomplex => "subcomplex",
            Provenance::Loaded => "loaded",
        }
    }
}

/// Optional embedding data: one anchor point per cell, in a flat torus of
/// side `period` when `period` is set.
#[derive(Clone, Debug, PartialEq)]
pub struct Geometry {
    pub period: Option<f64>,
    pub anchors: Vec<Vec<Vec<f64>>>,
}

impl Geometry {
    /// Displacement from `a` to `b` using the minimal periodic image.
    pub fn displacement(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| {
                let mut t = y - x;
                if let Some(p) = self.period {
                    t -= p * (t / p).round();
                }
                t
            })
            .collect()
    }
}

/// A `p`-chain over F₂: one bit per `p`-cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub dim: usize,
    pub bits: BitVec,
}

impl Chain {
    pub fn zero(c: &CellComplex, dim: usize) -> Self {
        Self { dim, bits: BitVec::zeros(c.count(dim)) }
    }

    pub fn from_cells(c: &CellComplex, dim: usize, cells: impl IntoIterator<Item = usize>) -> Self {
        Self { dim, bits: BitVec::from_indices(c.count(dim), cells) }
    }

    pub fn new(dim: usize, bits: BitVec) -> Self {
        Self { dim, bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn cells(&self) -> Vec<usize> {
        self.bits.ones_vec()
    }

    pub fn xor(&self, other: &Chain) -> Chain {
        assert_eq!(self.dim, other.dim, "chain dimension mismatch");
        Chain { dim: self.dim, bits: self.bits.xor(&other.bits) }
    }

    pub fn and(&self, other: &Chain) -> Chain {
        assert_eq!(self.dim, other.dim, "chain dimension mismatch");
        Chain { dim: self.dim, bits: self.bits.and(&other.bits) }
    }
}

#[derive(Clone, Debug)]
pub struct CellComplex {
    dim: usize,
    faces: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<Vec<usize>>>,
    provenance: Provenance,
    name: String,
    balloon_hypotheses: bool,
    geometry: Option<Geometry>,
}

impl PartialEq for CellComplex {
    /// Structural equality: dimension and face lists.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.faces == other.faces
    }
}

impl CellComplex {
    /// Builds a complex from per-dimension face lists. `faces[0]` must hold
    /// empty lists; `faces[k][i]` lists the `(k−1)`-faces of the `k`-cell `i`.
    pub fn new(faces: Vec<Vec<Vec<usize>>>, provenance: Provenance) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::Shape("complex needs at least a 0-skeleton".into()));
        }
        let dim = faces.len() - 1;
        if faces[0].iter().any(|f| !f.is_empty()) {
            return Err(Error::Shape("0-cells cannot have faces".into()));
        }
        for k in 1..=dim {
            let below = faces[k - 1].len();
            for (id, fs) in faces[k].iter().enumerate() {
                if let Some(&bad) = fs.iter().find(|&&f| f >= below) {
                    return Err(Error::Shape(format!(
                        "{k}-cell {id} lists face {bad}, but there are only {below} {}-cells",
                        k - 1
                    )));
                }
            }
        }
        let mut cofaces: Vec<Vec<Vec<usize>>> = faces.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for k in 1..=dim {
            for (id, fs) in faces[k].iter().enumerate() {
                for &f in fs {
                    cofaces[k - 1][f].push(id);
                }
            }
        }
        Ok(Self { dim, faces, cofaces, provenance, name: String::new(), balloon_hypotheses: false, geometry: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of `k`-cells; zero for `k` above the dimension.
    pub fn count(&self, k: usize) -> usize {
        self.faces.get(k).map_or(0, Vec::len)
    }

    pub fn counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn faces(&self, k: usize, id: usize) -> &[usize] {
        &self.faces[k][id]
    }

    pub fn cofaces(&self, k: usize, id: usize) -> &[usize] {
        &self.cofaces[k][id]
    }

    pub fn face_lists(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Whether the complex is marked as satisfying the topology hypotheses
    /// under which the even-dimensional balloon sign formula holds.
    pub fn balloon_hypotheses(&self) -> bool {
        self.balloon_hypotheses
    }

    pub fn with_balloon_hypotheses(mut self, flag: bool) -> Self {
        self.balloon_hypotheses = flag;
        self
    }

    pub fn geometry(&self) -> Option<&Geometry> {
        self.geometry.as_ref()
    }

    pub fn with_geometry(mut self, g: Geometry) -> Self {
        self.geometry = Some(g);
        self
    }

    pub fn euler_char(&self) -> i64 {
        self.faces.iter().enumerate().map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Boundary map `∂_k` as a matrix with one row per `(k−1)`-cell and one
    /// column per `k`-cell. Repeated faces cancel mod 2.
    pub fn boundary_matrix(&self, k: usize) -> F2Matrix {
        if k == 0 || k > self.dim {
            return F2Matrix::zeros(self.count(k.saturating_sub(1)), self.count(k));
        }
        let mut m = F2Matrix::zeros(self.count(k - 1), self.count(k));
        for (id, fs) in self.faces[k].iter().enumerate() {
            for &f in fs {
                let v = m.get(f, id);
                m.set(f, id, !v);
            }
        }
        m
    }

    /// The mod-2 boundary of a single `k`-cell, over `(k−1)`-cells.
    pub fn cell_boundary(&self, k: usize, id: usize) -> BitVec {
        let mut b = BitVec::zeros(self.count(k - 1));
        for &f in &self.faces[k][id] {
            b.flip(f);
        }
        b
    }

    /// The mod-2 boundary of a chain.
    pub fn chain_boundary(&self, chain: &Chain) -> Chain {
        let k = chain.dim;
        let mut b = BitVec::zeros(if k == 0 { 0 } else { self.count(k - 1) });
        if k > 0 {
            for id in chain.bits.iter_ones() {
                for &f in &self.faces[k][id] {
                    b.flip(f);
                }
            }
        }
        Chain::new(k.saturating_sub(1), b)
    }

    pub fn is_cycle(&self, chain: &Chain) -> bool {
        chain.dim == 0 || self.chain_boundary(chain).bits.is_zero()
    }

    /// The closed subcomplex generated by the given `k`-cells.
    pub fn closure(&self, k: usize, cells: impl IntoIterator<Item = usize>) -> Subcomplex {
        Subcomplex::closure_of(self, k, cells)
    }

    pub fn chain_closure(&self, chain: &Chain) -> Subcomplex {
        Subcomplex::closure_of(self, chain.dim, chain.bits.iter_ones())
    }

    /// All cells in the closure of the `k`-cell `id`, per dimension, the
    /// cell itself included.
    pub fn cell_closure(&self, k: usize, id: usize) -> Subcomplex {
        Subcomplex::closure_of(self, k, [id])
    }

    /// Connected components, joined through faces of every dimension.
    pub fn components(&self) -> Vec<Subcomplex> {
        let offsets = self.offsets();
        let total = self.total_cells();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        for k in 1..=self.dim {
            for (id, fs) in self.faces[k].iter().enumerate() {
                for &f in fs {
                    let a = find(&mut parent, offsets[k] + id);
                    let b = find(&mut parent, offsets[k - 1] + f);
                    parent[a] = b;
                }
            }
        }
        let mut index = vec![usize::MAX; total];
        let mut parts: Vec<Vec<BitVec>> = Vec::new();
        for k in 0..=self.dim {
            for id in 0..self.count(k) {
                let r = find(&mut parent, offsets[k] + id);
                if index[r] == usize::MAX {
                    index[r] = parts.len();
                    parts.push((0..=self.dim).map(|j| BitVec::zeros(self.count(j))).collect());
                }
                parts[index[r]][k].set(id, true);
            }
        }
        parts.into_iter().map(Subcomplex::from_masks).collect()
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Start index of each dimension in a flat enumeration of all cells.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim + 2);
        let mut acc = 0;
        for l in &self.faces {
            out.push(acc);
            acc += l.len();
        }
        out.push(acc);
        out
    }

    pub(crate) fn check_id(&self, k: usize, id: usize) -> Result<()> {
        if k > self.dim || id >= self.count(k) {
            return Err(Error::IdOutOfRange { kind: "cell", id, len: self.count(k) });
        }
        Ok(())
    }

    /// `(k−1)`-faces shared by two `k`-cells, counted once each.
    pub fn shared_faces(&self, k: usize, a: usize, b: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.faces[k][a].iter().copied().filter(|f| self.faces[k][b].contains(f)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> CellComplex {
        CellComplex::new(
            vec![vec![vec![]; 3], vec![vec![0, 1], vec![1, 2], vec![2, 0]], vec![vec![0, 1, 2]]],
            Provenance::Builtin,
        )
        .unwrap()
    }

    #[test]
    fn counts_and_euler() {
        let c = triangle();
        assert_eq!(c.counts(), vec![3, 3, 1]);
        assert_eq!(c.euler_char(), 1);
        assert_eq!(c.cofaces(0, 1), &[0, 1]);
    }

    #[test]
    fn boundary_of_boundary_vanishes() {
        let c = triangle();
        let d1 = c.boundary_matrix(1);
        let d2 = c.boundary_matrix(2);
        assert!(d1.mul(&d2).unwrap().is_zero());
    }

    #[test]
    fn bad_face_id_rejected() {
        let r = CellComplex::new(vec![vec![vec![]; 2], vec![vec![0, 5]]], Provenance::Builtin);
        assert!(r.is_err());
    }

    #[test]
    fn components_counted() {
        let c = CellComplex::new(vec![vec![vec![]; 4], vec![vec![0, 1], vec![2, 3]]], Provenance::Builtin).unwrap();
        assert_eq!(c.component_count(), 2);
        assert_eq!(triangle().component_count(), 1);
    }

    #[test]
    fn chain_boundary_of_edge_path() {
        let c = triangle();
        let path = Chain::from_cells(&c, 1, [0, 1]);
        assert_eq!(c.chain_boundary(&path).cells(), vec![0, 2]);
        let all = Chain::from_cells(&c, 1, [0, 1, 2]);
        assert!(c.is_cycle(&all));
    }
}
