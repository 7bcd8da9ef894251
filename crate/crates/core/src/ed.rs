//! Exact diagonalization oracle for complexes with at most twenty qubits.
//!
//! Operators are stored as sparse columns with Gaussian-integer entries and
//! a common power-of-two denominator. The projected model's ground space is
//! found by exact sequential projection over `Q(i)`; the plain model is
//! diagonalized numerically block by block.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::complex::CellComplex;
use crate::error::{Error, Result};
use crate::model::Model;
use crate::phase::Phase;

pub const MAX_QUBITS: usize = 20;
pub const PLAIN_TOLERANCE: f64 = 1e-9;

type Gauss = Complex<i64>;
type Exact = Complex<BigRational>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Projected,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plain" => Ok(Variant::Plain),
            "projected" => Ok(Variant::Projected),
            _ => Err(Error::Parameter(format!("unknown variant {s:?}; expected plain or projected"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Projected => "projected",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    /// Vertex term on a `(d−2)`-cell.
    Vertex(usize),
    /// Plaquette term on a `d`-cell.
    Plaquette(usize),
    /// Plaquette term sandwiched between the vertex projectors of its faces.
    PlaquetteProjected(usize),
}

/// A linear operator on `2^n` basis states. Column `j` lists `H|j⟩` as
/// `(row, entry)` pairs; every entry is divided by `2^scale`.
#[derive(Clone, Debug)]
pub struct SparseOp {
    pub n_qubits: usize,
    pub scale: u32,
    pub cols: Vec<Vec<(u32, Gauss)>>,
}

impl SparseOp {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, scale: 0, cols: (0..1u32 << n_qubits).map(|j| vec![(j, Gauss::new(1, 0))]).collect() }
    }

    pub fn diagonal(n_qubits: usize, f: impl Fn(u32) -> i64 + Sync) -> Self {
        Self {
            n_qubits,
            scale: 0,
            cols: (0..1u32 << n_qubits)
                .into_par_iter()
                .map(|j| {
                    let v = f(j);
                    if v == 0 {
                        Vec::new()
                    } else {
                        vec![(j, Gauss::new(v, 0))]
                    }
                })
                .collect(),
        }
    }

    fn rescaled(&self, scale: u32) -> Vec<Vec<(u32, Gauss)>> {
        let k = 1i64 << (scale - self.scale);
        self.cols.iter().map(|c| c.iter().map(|&(r, v)| (r, v * k)).collect()).collect()
    }

    fn normalize(col: &mut Vec<(u32, Gauss)>) {
        col.sort_unstable_by_key(|&(r, _)| r);
        let mut out: Vec<(u32, Gauss)> = Vec::with_capacity(col.len());
        for &(r, v) in col.iter() {
            match out.last_mut() {
                Some((lr, lv)) if *lr == r => *lv += v,
                _ => out.push((r, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        *col = out;
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseOp) -> SparseOp {
        let cols = other
            .cols
            .par_iter()
            .map(|bcol| {
                let mut acc = Vec::new();
                for &(k, b) in bcol {
                    for &(i, a) in &self.cols[k as usize] {
                        acc.push((i, a * b));
                    }
                }
                Self::normalize(&mut acc);
                acc
            })
            .collect();
        SparseOp { n_qubits: self.n_qubits, scale: self.scale + other.scale, cols }
    }

    /// `a·self + b·other` for integer `a`, `b`.
    pub fn combine(&self, a: i64, other: &SparseOp, b: i64) -> SparseOp {
        let scale = self.scale.max(other.scale);
        let x = self.rescaled(scale);
        let y = other.rescaled(scale);
        let cols = x
            .into_par_iter()
            .zip(y)
            .map(|(cx, cy)| {
                let mut acc: Vec<(u32, Gauss)> = cx.into_iter().map(|(r, v)| (r, v * a)).collect();
                acc.extend(cy.into_iter().map(|(r, v)| (r, v * b)));
                Self::normalize(&mut acc);
                acc
            })
            .collect();
        SparseOp { n_qubits: self.n_qubits, scale, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|(_, v)| v.is_zero()))
    }

    pub fn approx_eq_exact(&self, other: &SparseOp) -> bool {
        self.combine(1, other, -1).is_zero()
    }

    pub fn is_hermitian(&self) -> bool {
        let mut entries: HashMap<(u32, u32), Gauss> = HashMap::new();
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, v) in col {
                entries.insert((i, j as u32), v);
            }
        }
        entries.iter().all(|(&(i, j), v)| entries.get(&(j, i)).copied().unwrap_or_default() == v.conj())
    }

    pub fn is_projector(&self) -> bool {
        self.mul(self).approx_eq_exact(self)
    }

    pub fn commutes_with(&self, other: &SparseOp) -> bool {
        self.mul(other).approx_eq_exact(&other.mul(self))
    }

    /// Entry `(i, j)` as a float.
    pub fn entry(&self, i: u32, j: u32) -> Complex<f64> {
        let s = (1u64 << self.scale) as f64;
        self.cols[j as usize]
            .iter()
            .find(|(r, _)| *r == i)
            .map_or(Complex::new(0.0, 0.0), |(_, v)| Complex::new(v.re as f64 / s, v.im as f64 / s))
    }
}

/// Qubit-level data shared by all terms of one complex.
struct Layout {
    n: usize,
    /// Per `(d−2)`-cell, the mask of qubits containing it.
    vertex_masks: Vec<u32>,
    /// Per `d`-cell, the mask of qubits its flip toggles.
    toggles: Vec<u32>,
    /// Per `d`-cell, its `(d−2)`-faces.
    near: Vec<Vec<usize>>,
}

impl Layout {
    fn new(c: &CellComplex) -> Result<Self> {
        let d = c.dim();
        if d < 2 {
            return Err(Error::Shape("exact diagonalization needs d ≥ 2".into()));
        }
        let n = c.count(d - 1);
        if n > MAX_QUBITS {
            return Err(Error::SizeGuard(n, MAX_QUBITS));
        }
        let vertex_masks =
            (0..c.count(d - 2)).map(|e| c.cofaces(d - 2, e).iter().fold(0u32, |m, &q| m | 1 << q)).collect();
        let toggles = (0..c.count(d)).map(|x| c.faces(d, x).iter().fold(0u32, |m, &q| m ^ 1 << q)).collect();
        let near = (0..c.count(d)).map(|x| c.cell_closure(d, x).mask(d - 2).ones_vec()).collect();
        Ok(Self { n, vertex_masks, toggles, near })
    }

    fn violated(&self, e: usize, state: u32) -> bool {
        (state & self.vertex_masks[e]).count_ones() % 2 == 1
    }
}

/// GDS sign of flipping `cell` at `state`: `−(−1)^χ` of the closure of the
/// ↑ faces of the cell, counted directly.
fn gds_sign(c: &CellComplex, cell: usize, state: u32) -> Phase {
    let d = c.dim();
    let mut level: Vec<usize> = c.faces(d, cell).iter().copied().filter(|&q| state >> q & 1 == 1).collect();
    level.sort_unstable();
    level.dedup();
    let mut chi = 0i64;
    for k in (0..d).rev() {
        chi += if k % 2 == 0 { level.len() as i64 } else { -(level.len() as i64) };
        if k == 0 {
            break;
        }
        let mut next: Vec<usize> = level.iter().flat_map(|&x| c.faces(k, x).iter().copied()).collect();
        next.sort_unstable();
        next.dedup();
        level = next;
    }
    -Phase::minus_one_pow(chi)
}

fn plaquette_op(c: &CellComplex, lay: &Layout, model: Model, cell: usize) -> SparseOp {
    let t = lay.toggles[cell];
    let cols = (0..1u32 << lay.n)
        .into_par_iter()
        .map(|j| {
            let phase = match model {
                Model::Gds => gds_sign(c, cell, j),
                Model::Gtc => Phase::ONE,
            };
            let mut col = vec![(j, Gauss::new(1, 0)), (j ^ t, -phase.to_complex())];
            SparseOp::normalize(&mut col);
            col
        })
        .collect();
    SparseOp { n_qubits: lay.n, scale: 1, cols }
}

fn build_with(c: &CellComplex, lay: &Layout, model: Model, term: Term) -> Result<SparseOp> {
    let d = c.dim();
    Ok(match term {
        Term::Vertex(e) => {
            c.check_id(d - 2, e)?;
            SparseOp::diagonal(lay.n, |j| lay.violated(e, j) as i64)
        }
        Term::Plaquette(x) => {
            c.check_id(d, x)?;
            plaquette_op(c, lay, model, x)
        }
        Term::PlaquetteProjected(x) => {
            c.check_id(d, x)?;
            let near = &lay.near[x];
            let p = SparseOp::diagonal(lay.n, |j| near.iter().all(|&e| !lay.violated(e, j)) as i64);
            p.mul(&plaquette_op(c, lay, model, x)).mul(&p)
        }
    })
}

pub fn build_term(c: &CellComplex, model: Model, term: Term) -> Result<SparseOp> {
    build_with(c, &Layout::new(c)?, model, term)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdResult {
    /// `None` when the projected joint kernel is empty.
    pub min_energy: Option<f64>,
    pub degeneracy: usize,
    /// Whether every plaquette term is Hermitian on the full space.
    pub hermitian: bool,
    pub variant: Variant,
}

/// Exact joint kernel of all vertex and projected plaquette terms, as RREF
/// rows over the zero-syndrome basis states (listed in `states`).
#[derive(Clone, Debug)]
pub struct JointKernel {
    pub states: Vec<u32>,
    pub basis: Vec<Vec<Exact>>,
}

impl JointKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether a vector on `states` lies in the kernel.
    pub fn contains(&self, v: &[Exact]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        rref(&mut rows) == self.basis.len()
    }
}

fn exact(v: Gauss, scale: u32) -> Exact {
    let den = BigRational::from_integer((1i64 << scale).into());
    Complex::new(BigRational::from_integer(v.re.into()) / den.clone(), BigRational::from_integer(v.im.into()) / den)
}

/// Row-reduces in place, dropping zero rows; returns the rank.
fn rref(rows: &mut Vec<Vec<Exact>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = Exact::one() / rows[rank][col].clone();
        for x in rows[rank].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rank
}

pub fn joint_kernel(c: &CellComplex, model: Model) -> Result<JointKernel> {
    let lay = Layout::new(c)?;
    let d = c.dim();
    // Diagonal vertex terms: keep the basis states they all annihilate.
    let vertex: Vec<SparseOp> =
        (0..c.count(d - 2)).map(|e| build_with(c, &lay, model, Term::Vertex(e))).collect::<Result<_>>()?;
    let states: Vec<u32> =
        (0..1u32 << lay.n).filter(|&j| vertex.iter().all(|op| op.cols[j as usize].is_empty())).collect();
    let index: HashMap<u32, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let m = states.len();
    let mut basis: Vec<Vec<Exact>> = (0..m)
        .map(|i| {
            let mut v = vec![Exact::zero(); m];
            v[i] = Exact::one();
            v
        })
        .collect();
    for x in 0..c.count(d) {
        let op = build_with(c, &lay, model, Term::PlaquetteProjected(x))?;
        let mut next: Vec<Vec<Exact>> = basis
            .par_iter()
            .map(|v| {
                let mut out = v.clone();
                for (i, a) in v.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for &(r, e) in &op.cols[states[i] as usize] {
                        let Some(&ri) = index.get(&r) else {
                            return Err(Error::Precondition("plaquette term leaves the vertex kernel".into()));
                        };
                        out[ri] = out[ri].clone() - a.clone() * exact(e, op.scale);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        rref(&mut next);
        basis = next;
        if basis.is_empty() {
            break;
        }
    }
    Ok(JointKernel { states, basis })
}

fn plain(c: &CellComplex, model: Model) -> Result<EdResult> {
    let lay = Layout::new(c)?;
    let d = c.dim();
    let terms: Vec<SparseOp> =
        (0..c.count(d)).map(|x| build_with(c, &lay, model, Term::Plaquette(x))).collect::<Result<_>>()?;
    let hermitian = terms.iter().all(SparseOp::is_hermitian);
    let nv = c.count(d - 2);
    let syndrome = |j: u32| -> Vec<u64> {
        let mut w = vec![0u64; nv.div_ceil(64)];
        for e in 0..nv {
            if lay.violated(e, j) {
                w[e / 64] |= 1 << (e % 64);
            }
        }
        w
    };
    let mut blocks: HashMap<Vec<u64>, Vec<u32>> = HashMap::new();
    for j in 0..1u32 << lay.n {
        blocks.entry(syndrome(j)).or_default().push(j);
    }
    let mut blocks: Vec<(Vec<u64>, Vec<u32>)> = blocks.into_iter().collect();
    blocks.sort();
    let spectra: Vec<Vec<f64>> = blocks
        .par_iter()
        .map(|(syn, states)| {
            let idx: HashMap<u32, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let n = states.len();
            let weight: u32 = syn.iter().map(|w| w.count_ones()).sum();
            let mut re = DMatrix::<f64>::from_diagonal_element(n, n, weight as f64);
            let mut im = DMatrix::<f64>::zeros(n, n);
            for op in &terms {
                let s = (1u64 << op.scale) as f64;
                for (j, &st) in states.iter().enumerate() {
                    for &(r, v) in &op.cols[st as usize] {
                        let i = idx[&r];
                        re[(i, j)] += v.re as f64 / s;
                        im[(i, j)] += v.im as f64 / s;
                    }
                }
            }
            // Hermitian n×n as real symmetric 2n×2n; each eigenvalue doubles.
            let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
            let sym_re = (&re + re.transpose()) * 0.5;
            let anti_im = (&im - im.transpose()) * 0.5;
            big.view_mut((0, 0), (n, n)).copy_from(&sym_re);
            big.view_mut((n, n), (n, n)).copy_from(&sym_re);
            big.view_mut((0, n), (n, n)).copy_from(&(-&anti_im));
            big.view_mut((n, 0), (n, n)).copy_from(&anti_im);
            let mut ev: Vec<f64> = SymmetricEigen::new(big).eigenvalues.iter().copied().collect();
            ev.sort_by(f64::total_cmp);
            ev.into_iter().step_by(2).collect()
        })
        .collect();
    let min = spectra.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    let degeneracy = spectra.iter().flatten().filter(|&&e| (e - min).abs() < PLAIN_TOLERANCE).count();
    Ok(EdResult { min_energy: Some(min), degeneracy, hermitian, variant: Variant::Plain })
}

/// Ground degeneracy by exact diagonalization. The plain variant uses the
/// Hermitian part of each plaquette term; `hermitian` reports whether that
/// changed anything.
pub fn ground_degeneracy_ed(c: &CellComplex, model: Model, variant: Variant) -> Result<EdResult> {
    match variant {
        Variant::Plain => plain(c, model),
        Variant::Projected => {
            let k = joint_kernel(c, model)?;
            Ok(EdResult { min_energy: (k.dim() > 0).then_some(0.0), degeneracy: k.dim(), hermitian: true, variant })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationReport {
    pub terms: usize,
    pub pairs: usize,
    pub noncommuting: Vec<(Term, Term)>,
    pub non_projectors: Vec<Term>,
    pub non_hermitian: Vec<Term>,
}

impl CommutationReport {
    pub fn holds(&self) -> bool {
        self.noncommuting.is_empty() && self.non_projectors.is_empty() && self.non_hermitian.is_empty()
    }
}

/// Full-space commutators, idempotence and Hermiticity of every term.
pub fn verify_full_commutation(c: &CellComplex, model: Model, variant: Variant) -> Result<CommutationReport> {
    let lay = Layout::new(c)?;
    let d = c.dim();
    let mut labels: Vec<Term> = (0..c.count(d - 2)).map(Term::Vertex).collect();
    labels.extend((0..c.count(d)).map(|x| match variant {
        Variant::Plain => Term::Plaquette(x),
        Variant::Projected => Term::PlaquetteProjected(x),
    }));
    let ops: Vec<SparseOp> = labels.iter().map(|&t| build_with(c, &lay, model, t)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..ops.len()).flat_map(|a| (a + 1..ops.len()).map(move |b| (a, b))).collect();
    let noncommuting =
        pairs.iter().filter(|&&(a, b)| !ops[a].commutes_with(&ops[b])).map(|&(a, b)| (labels[a], labels[b])).collect();
    let non_projectors = labels.iter().zip(&ops).filter(|(_, o)| !o.is_projector()).map(|(&t, _)| t).collect();
    let non_hermitian = labels.iter().zip(&ops).filter(|(_, o)| !o.is_hermitian()).map(|(&t, _)| t).collect();
    Ok(CommutationReport { terms: ops.len(), pairs: pairs.len(), noncommuting, non_projectors, non_hermitian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{builtin_manifold, ManifoldSpec, Provenance};

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn vertex_term_is_parity_projector() {
        let c = build("sphere:2");
        let op = build_term(&c, Model::Gds, Term::Vertex(0)).unwrap();
        assert_eq!(op.dim(), 1 << c.count(1));
        let mask = c.cofaces(0, 0).iter().fold(0u32, |m, &q| m | 1 << q);
        for j in 0..op.dim() as u32 {
            let want = (j & mask).count_ones() as i64 % 2;
            assert_eq!(op.entry(j, j).re, want as f64);
        }
        assert!(op.is_projector() && op.is_hermitian());
    }

    #[test]
    fn plaquette_on_empty_state() {
        let c = build("sphere:2");
        let op = build_term(&c, Model::Gds, Term::Plaquette(0)).unwrap();
        let t = c.faces(2, 0).iter().fold(0u32, |m, &q| m ^ 1 << q);
        // (1 − O)/2 with O|∅⟩ = −|∂c⟩.
        assert_eq!(op.entry(0, 0), Complex::new(0.5, 0.0));
        assert_eq!(op.entry(t, 0), Complex::new(0.5, 0.0));
        assert_eq!(op.cols[0].len(), 2);
        let gtc = build_term(&c, Model::Gtc, Term::Plaquette(0)).unwrap();
        assert_eq!(gtc.entry(t, 0), Complex::new(-0.5, 0.0));
    }

    #[test]
    fn projected_terms_are_projectors() {
        let c = build("sphere:2");
        for x in 0..c.count(2) {
            assert!(build_term(&c, Model::Gds, Term::PlaquetteProjected(x)).unwrap().is_projector());
        }
    }

    #[test]
    fn small_degeneracies() {
        let s2 = build("sphere:2");
        let r = ground_degeneracy_ed(&s2, Model::Gds, Variant::Projected).unwrap();
        assert_eq!((r.min_energy, r.degeneracy), (Some(0.0), 1));
        let rp2 = build("tP:1");
        assert_eq!(ground_degeneracy_ed(&rp2, Model::Gds, Variant::Projected).unwrap().degeneracy, 1);
        assert_eq!(ground_degeneracy_ed(&rp2, Model::Gtc, Variant::Projected).unwrap().degeneracy, 2);
        let p = ground_degeneracy_ed(&s2, Model::Gds, Variant::Plain).unwrap();
        assert!(p.min_energy.unwrap().abs() < 1e-9);
        assert_eq!(p.degeneracy, 1);
    }

    #[test]
    fn full_commutation_sphere2() {
        let c = build("sphere:2");
        assert!(verify_full_commutation(&c, Model::Gds, Variant::Projected).unwrap().holds());
    }

    #[test]
    fn size_guard() {
        let c = build("torus:3");
        assert!(matches!(build_term(&c, Model::Gds, Term::Vertex(0)), Err(Error::SizeGuard(n, 20)) if n > 20));
        let line = CellComplex::new(vec![vec![vec![]; 2], vec![vec![0, 1]]], Provenance::Builtin).unwrap();
        assert!(build_term(&line, Model::Gds, Term::Vertex(0)).is_err());
    }
}
