use std::collections::{BTreeMap, HashMap};

use super::{CellComplex, Geometry, Provenance};
use crate::error::{Error, Result};

/// A pure simplicial complex given by its maximal simplices.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangulation {
    dim: usize,
    vertices: usize,
    simplices: Vec<Vec<usize>>,
    /// Optional vertex coordinates in a flat torus of the given period.
    coords: Option<(Vec<Vec<f64>>, Option<f64>)>,
}

impl Triangulation {
    /// Sorts each simplex and checks the closed pseudo-manifold conditions.
    pub fn new(dim: usize, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let simplices: Vec<Vec<usize>> = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        let vertices = simplices.iter().flatten().max().map_or(0, |&m| m + 1);
        let t = Self { dim, vertices, simplices, coords: None };
        t.check()?;
        Ok(t)
    }

    pub fn with_coords(mut self, coords: Vec<Vec<f64>>, period: Option<f64>) -> Self {
        assert_eq!(coords.len(), self.vertices);
        self.coords = Some((coords, period));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    fn check(&self) -> Result<()> {
        let d = self.dim;
        let mut seen = std::collections::HashSet::new();
        let mut used = vec![false; self.vertices];
        for s in &self.simplices {
            if s.len() != d + 1 {
                return Err(Error::NotPseudoManifold(format!("simplex {s:?} does not have {} vertices", d + 1)));
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::NotPseudoManifold(format!("simplex {s:?} repeats a vertex")));
            }
            if !seen.insert(s.clone()) {
                return Err(Error::NotPseudoManifold(format!("simplex {s:?} listed twice")));
            }
            for &v in s {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::NotPseudoManifold(format!("vertex {v} is unused")));
        }
        if d == 0 {
            return Ok(());
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for s in &self.simplices {
            for skip in 0..=d {
                let r: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                *ridge_count.entry(r).or_default() += 1;
            }
        }
        let mut bad: Vec<_> = ridge_count.iter().filter(|(_, &n)| n != 2).collect();
        bad.sort();
        if let Some((r, n)) = bad.first() {
            return Err(Error::NotPseudoManifold(format!("face {r:?} lies in {n} simplices, expected 2")));
        }
        // Vertex links must be connected through shared ridges.
        let mut star: Vec<Vec<usize>> = vec![Vec::new(); self.vertices];
        for (i, s) in self.simplices.iter().enumerate() {
            for &v in s {
                star[v].push(i);
            }
        }
        for (v, st) in star.iter().enumerate() {
            if st.len() <= 1 {
                continue;
            }
            let mut by_ridge: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            for (local, &si) in st.iter().enumerate() {
                let s = &self.simplices[si];
                for &w in s {
                    if w == v {
                        continue;
                    }
                    let r: Vec<usize> = s.iter().copied().filter(|&x| x != w).collect();
                    by_ridge.entry(r).or_default().push(local);
                }
            }
            let mut parent: Vec<usize> = (0..st.len()).collect();
            fn find(p: &mut [usize], x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for ends in by_ridge.values() {
                for w in ends.windows(2) {
                    let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                    parent[a] = b;
                }
            }
            let root = find(&mut parent, 0);
            if (0..st.len()).any(|x| find(&mut parent, x) != root) {
                return Err(Error::NotPseudoManifold(format!("link of vertex {v} is disconnected")));
            }
        }
        Ok(())
    }

    /// All faces of every size, each sorted, grouped by vertex count.
    fn all_faces(&self) -> Vec<Vec<Vec<usize>>> {
        let d = self.dim;
        let mut by_size: Vec<BTreeMap<Vec<usize>, ()>> = vec![BTreeMap::new(); d + 2];
        for s in &self.simplices {
            for mask in 1u32..(1 << (d + 1)) {
                let f: Vec<usize> = (0..=d).filter(|&i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                by_size[f.len()].insert(f, ());
            }
        }
        by_size.into_iter().map(|m| m.into_keys().collect()).collect()
    }
}

/// The dual cell complex: a `(d−k)`-cell for every `k`-simplex, with the
/// dual of `σ` a face of the dual of `τ` exactly when `τ ⊊ σ`.
pub fn dual_of_triangulation(t: &Triangulation) -> Result<CellComplex> {
    let d = t.dim;
    let faces_by_size = t.all_faces();
    // Simplex of size s (dimension s−1) ↦ dual cell of dimension d+1−s.
    let index: Vec<HashMap<&[usize], usize>> =
        faces_by_size.iter().map(|l| l.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect()).collect();
    let mut cofaces_of: Vec<Vec<Vec<usize>>> = faces_by_size.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    for size in 2..=d + 1 {
        for (gi, g) in faces_by_size[size].iter().enumerate() {
            for skip in 0..size {
                let f: Vec<usize> = g.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                cofaces_of[size - 1][index[size - 1][f.as_slice()]].push(gi);
            }
        }
    }
    let mut cells: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
    for size in 1..=d + 1 {
        let k = d + 1 - size;
        cells[k] = if k == 0 { vec![Vec::new(); faces_by_size[size].len()] } else { cofaces_of[size].clone() };
    }
    let mut c = CellComplex::new(cells, Provenance::DualOfTriangulation)?;
    if let Some((coords, period)) = &t.coords {
        let anchors = (0..=d)
            .map(|k| {
                faces_by_size[d + 1 - k]
                    .iter()
                    .map(|s| barycenter(s.iter().map(|&v| coords[v].as_slice()), *period))
                    .collect()
            })
            .collect();
        c = c.with_geometry(Geometry { period: *period, anchors });
    }
    Ok(c)
}

/// Barycenter with each point lifted to the periodic image nearest the first.
fn barycenter<'a>(points: impl Iterator<Item = &'a [f64]>, period: Option<f64>) -> Vec<f64> {
    let pts: Vec<&[f64]> = points.collect();
    let base = pts[0];
    let mut acc = vec![0.0; base.len()];
    for p in &pts {
        for ((a, &x), &b) in acc.iter_mut().zip(p.iter()).zip(base) {
            let mut t = x - b;
            if let Some(per) = period {
                t -= per * (t / per).round();
            }
            *a += b + t;
        }
    }
    acc.iter().map(|a| a / pts.len() as f64).collect()
}
