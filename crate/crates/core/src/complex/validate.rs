use std::fmt;

use super::{CellComplex, Chain, Provenance, Subcomplex};
use crate::bitvec::BitVec;
use crate::error::Result;
use crate::homology::betti;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A cell of codimension 1 or 2 with the wrong number of cofaces
    /// (counted with multiplicity).
    CofaceCount { dim: usize, cell: usize, count: usize, expected: usize },
    /// A face list that repeats an entry, or a 1-cell without two endpoints.
    Irregular { dim: usize, cell: usize },
    /// `∂_{k−1} ∘ ∂_k ≠ 0`.
    BoundarySquare { k: usize },
    /// The boundary of a top cell fails the coface check one dimension down.
    Heritability { cell: usize, inner: Box<Violation> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CofaceCount { dim, cell, count, expected } => {
                write!(f, "{dim}-cell {cell} has {count} cofaces, expected {expected}")
            }
            Violation::Irregular { dim, cell } => write!(f, "{dim}-cell {cell} has an irregular face list"),
            Violation::BoundarySquare { k } => write!(f, "boundary maps fail to compose to zero at degree {k}"),
            Violation::Heritability { cell, inner } => write!(f, "boundary of top cell {cell}: {inner}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub dim: usize,
    pub violations: Vec<Violation>,
    pub cells_checked: usize,
}

impl ValidationReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// The `(d−2)`-cells whose coface count is wrong.
    pub fn offending_codim2(&self) -> Vec<usize> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::CofaceCount { dim, cell, .. } if *dim + 2 == self.dim => Some(*cell),
                _ => None,
            })
            .collect()
    }
}

fn local_checks(c: &CellComplex, out: &mut Vec<Violation>) {
    let d = c.dim();
    for k in 1..=d {
        for id in 0..c.count(k) {
            let fs = c.faces(k, id);
            let mut sorted = fs.to_vec();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != fs.len() || (k == 1 && fs.len() != 2) || fs.is_empty() {
                out.push(Violation::Irregular { dim: k, cell: id });
            }
        }
    }
    for (codim, expected) in [(1usize, 2usize), (2, 3)] {
        if d < codim {
            continue;
        }
        let k = d - codim;
        for id in 0..c.count(k) {
            let count = c.cofaces(k, id).len();
            if count != expected {
                out.push(Violation::CofaceCount { dim: k, cell: id, count, expected });
            }
        }
    }
}

/// Checks the closed-manifold coface counts, regularity of face lists,
/// `∂∘∂ = 0`, and the same local checks on the boundary of every top cell.
pub fn validate_generic(c: &CellComplex) -> ValidationReport {
    let d = c.dim();
    let mut violations = Vec::new();
    local_checks(c, &mut violations);
    for k in 2..=d {
        let prod = c.boundary_matrix(k - 1).mul(&c.boundary_matrix(k)).expect("graded shapes");
        if !prod.is_zero() {
            violations.push(Violation::BoundarySquare { k });
        }
    }
    let mut cells_checked = 0;
    if d >= 1 {
        for cell in 0..c.count(d) {
            cells_checked += 1;
            let sphere = boundary_sphere(c, cell).expect("id in range");
            let mut inner = Vec::new();
            local_checks(&sphere, &mut inner);
            violations.extend(inner.into_iter().map(|v| Violation::Heritability { cell, inner: Box::new(v) }));
        }
    }
    ValidationReport { dim: d, violations, cells_checked }
}

/// The induced cell structure on the boundary of a top-dimensional cell.
pub fn boundary_sphere(c: &CellComplex, cell: usize) -> Result<CellComplex> {
    let d = c.dim();
    c.check_id(d, cell)?;
    let mut s = c.cell_closure(d, cell);
    let mut masks = s.masks().to_vec();
    masks.truncate(d);
    s = Subcomplex::from_masks(masks);
    let (k, _) = s.to_complex(&truncate_dim(c, d - 1))?;
    Ok(k.with_provenance(Provenance::Subcomplex))
}

/// The `k`-skeleton of `c` as a complex of dimension `k`.
fn truncate_dim(c: &CellComplex, k: usize) -> CellComplex {
    let faces = c.face_lists()[..=k].to_vec();
    CellComplex::new(faces, Provenance::Subcomplex).expect("skeleton of a valid complex")
}

/// The complex of all faces of the cells in `top`.
pub fn closed_subcomplex(c: &CellComplex, top: &Chain) -> Result<CellComplex> {
    let s = c.chain_closure(top);
    if s.is_empty() {
        return CellComplex::new(vec![Vec::new()], Provenance::Subcomplex);
    }
    let top_dim = s.top_dim().unwrap_or(0);
    let (k, _) = s.to_complex(&truncate_dim(c, top_dim))?;
    Ok(k)
}

/// The link of the `k`-cell `id`: cells strictly above it, with dimension
/// lowered by `k + 1`.
fn link(c: &CellComplex, k: usize, id: usize) -> CellComplex {
    let d = c.dim();
    let mut up: Vec<BitVec> = (0..=d).map(|j| BitVec::zeros(c.count(j))).collect();
    for &t in c.cofaces(k, id) {
        up[k + 1].set(t, true);
    }
    for j in k + 1..d {
        let (lo, hi) = up.split_at_mut(j + 1);
        for t in lo[j].iter_ones() {
            for &u in c.cofaces(j, t) {
                hi[0].set(u, true);
            }
        }
    }
    let ids: Vec<Vec<usize>> = up.iter().map(|m| m.ones_vec()).collect();
    let mut local: Vec<Vec<usize>> = (0..=d).map(|j| vec![usize::MAX; c.count(j)]).collect();
    for j in k + 1..=d {
        for (i, &t) in ids[j].iter().enumerate() {
            local[j][t] = i;
        }
    }
    let top = (k + 1..=d).rev().find(|&j| !ids[j].is_empty()).unwrap_or(k + 1);
    let mut faces: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); ids.get(k + 1).map_or(0, Vec::len)]];
    for j in k + 2..=top {
        faces.push(
            ids[j]
                .iter()
                .map(|&t| c.faces(j, t).iter().filter(|&&f| up[j - 1].get(f)).map(|&f| local[j - 1][f]).collect())
                .collect(),
        );
    }
    CellComplex::new(faces, Provenance::Subcomplex).expect("link of a valid complex")
}

fn is_homology_sphere(c: &CellComplex, m: usize) -> bool {
    if c.dim() != m || c.count(m) == 0 {
        return false;
    }
    if m == 0 {
        return c.count(0) == 2;
    }
    let Ok(b) = betti(c) else { return false };
    let sphere_like = (0..=m).all(|i| b.get(i) == usize::from(i == 0 || i == m));
    sphere_like && is_homology_manifold(c, m)
}

/// True iff `c` is pure of dimension `m` and the link of every cell below
/// dimension `m` is an F₂-homology sphere of the complementary dimension.
pub fn is_homology_manifold(c: &CellComplex, m: usize) -> bool {
    if c.dim() != m {
        return false;
    }
    (0..m).all(|k| (0..c.count(k)).all(|id| is_homology_sphere(&link(c, k, id), m - k - 1)))
}

/// Whether the frontier of the union of the top cells in `t` is a closed
/// `(d−1)`-manifold. The frontier is the set of cells lying in the closure
/// of both `t` and its complement.
pub fn subset_boundary_manifold_check(c: &CellComplex, t: &BitVec) -> bool {
    let d = c.dim();
    assert_eq!(t.len(), c.count(d), "selection length must match the top cell count");
    if d == 0 {
        return true;
    }
    let inside = c.closure(d, t.iter_ones());
    let outside = c.closure(d, t.not().iter_ones());
    let mut frontier = inside.intersection(&outside);
    if frontier.is_empty() {
        return true;
    }
    let mut masks = frontier.masks().to_vec();
    masks.truncate(d);
    frontier = Subcomplex::from_masks(masks);
    if frontier.top_dim() != Some(d - 1) {
        return false;
    }
    let Ok((k, _)) = frontier.to_complex(&truncate_dim(c, d - 1)) else {
        return false;
    };
    is_homology_manifold(&k, d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{builtin_manifold, four_quadrant_plane, square_torus, ManifoldSpec};

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn builtins_validate() {
        for s in ["sphere:2", "sphere:3", "sphere:4", "tP:1", "tP:3", "genus:2", "torus:2", "torus:3"] {
            let r = validate_generic(&build(s));
            assert!(r.passes(), "{s}: {:?}", r.violations.first());
        }
    }

    #[test]
    fn square_lattice_fails_at_vertices() {
        let r = validate_generic(&square_torus(4).unwrap());
        assert!(!r.passes());
        let bad = r.offending_codim2();
        assert_eq!(bad.len(), 16);
    }

    #[test]
    fn boundary_spheres() {
        let s2 = build("sphere:2");
        let b = boundary_sphere(&s2, 0).unwrap();
        assert_eq!(b.euler_char(), 0);
        let s4 = build("sphere:4");
        let b = boundary_sphere(&s4, 3).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(b.euler_char(), 0);
        assert_eq!(betti(&b).unwrap().b, vec![1, 0, 0, 1]);
        assert!(boundary_sphere(&s4, 6).is_err());
    }

    #[test]
    fn closed_subcomplex_examples() {
        let c = build("sphere:2");
        let empty = closed_subcomplex(&c, &Chain::zero(&c, 1)).unwrap();
        assert_eq!(empty.euler_char(), 0);
        let edge = closed_subcomplex(&c, &Chain::from_cells(&c, 1, [0])).unwrap();
        assert_eq!(edge.counts(), vec![2, 1]);
        assert_eq!(edge.euler_char(), 1);
        let all = closed_subcomplex(&c, &Chain::from_cells(&c, 1, 0..c.count(1))).unwrap();
        assert_eq!(all.counts(), vec![4, 6]);
    }

    #[test]
    fn single_cells_have_manifold_boundary() {
        let c = build("torus:3");
        for cell in 0..c.count(3) {
            assert!(subset_boundary_manifold_check(&c, &BitVec::from_indices(c.count(3), [cell])));
        }
    }

    #[test]
    fn diagonal_quadrants_are_singular() {
        let c = four_quadrant_plane();
        assert!(!subset_boundary_manifold_check(&c, &BitVec::from_indices(4, [0, 2])));
        assert!(subset_boundary_manifold_check(&c, &BitVec::from_indices(4, [0])));
        assert!(subset_boundary_manifold_check(&c, &BitVec::from_indices(4, [0, 1])));
    }

    #[test]
    fn checkerboard_pair_on_square_torus_is_singular() {
        let c = square_torus(4).unwrap();
        // Faces 0 and 5 touch at a single vertex.
        assert!(!subset_boundary_manifold_check(&c, &BitVec::from_indices(16, [0, 5])));
    }
}
