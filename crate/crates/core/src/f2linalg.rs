//! Linear algebra over the two-element field.
//!
//! Matrices are stored as bit-packed rows so that Gaussian elimination is a
//! sequence of word-level XORs. Subspaces are kept in reduced row-echelon
//! form, which makes equality of subspaces a bitwise comparison.

use crate::bitvec::BitVec;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct F2Matrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows: vec![BitVec::zeros(cols); rows], cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), cols, "row length mismatch");
        }
        Self { rows, cols }
    }

    /// Builds a matrix from 0/1 entries.
    pub fn from_u8(rows: &[&[u8]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols);
                BitVec::from_indices(cols, r.iter().enumerate().filter(|(_, &x)| x & 1 == 1).map(|(i, _)| i))
            })
            .collect();
        Self { rows, cols }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.rows[r].set(c, v)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn col(&self, c: usize) -> BitVec {
        BitVec::from_indices(self.nrows(), (0..self.nrows()).filter(|&r| self.get(r, c)))
    }

    pub fn push_row(&mut self, row: BitVec) {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        self.rows.push(row);
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        BitVec::from_indices(self.nrows(), (0..self.nrows()).filter(|&r| self.rows[r].dot(v)))
    }

    /// `vᵀ · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.nrows(), "vector length mismatch");
        let mut out = BitVec::zeros(self.cols);
        for r in v.iter_ones() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.nrows() {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.nrows(), self.cols, other.nrows(), other.cols)));
        }
        Ok(F2Matrix { rows: self.rows.iter().map(|r| other.vec_mul(r)).collect(), cols: other.cols })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    /// Bilinear form `(x, self·y)`.
    pub fn form(&self, x: &BitVec, y: &BitVec) -> bool {
        x.dot(&self.mul_vec(y))
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(F2Matrix { rows, cols: self.cols })
    }

    pub fn rank(&self) -> usize {
        rref(self.rows.clone()).1.len()
    }
}

/// Reduces `rows` to reduced row-echelon form, dropping zero rows.
/// Returns the reduced rows and their pivot columns (strictly increasing).
pub fn rref(mut rows: Vec<BitVec>) -> (Vec<BitVec>, Vec<usize>) {
    let Some(cols) = rows.first().map(BitVec::len) else {
        return (rows, Vec::new());
    };
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// A linear subspace of F₂ⁿ held as a canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: F2Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: F2Matrix::zeros(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::span(ambient_dim, F2Matrix::identity(ambient_dim).into_rows())
    }

    /// The span of arbitrary (possibly dependent) vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<BitVec>) -> Self {
        for v in &vectors {
            assert_eq!(v.len(), ambient_dim, "vector length mismatch");
        }
        let (rows, pivots) = rref(vectors);
        Self { ambient_dim, basis: F2Matrix::from_rows(ambient_dim, rows), pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &F2Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> &[BitVec] {
        self.basis.rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` modulo the subspace; the result is zero iff `v` is a member.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut out = v.clone();
        for (row, &p) in self.basis.rows().iter().zip(&self.pivots) {
            if out.get(p) {
                out.xor_assign(row);
            }
        }
        out
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of a member vector in the RREF basis.
    pub fn coordinates(&self, v: &BitVec) -> Option<BitVec> {
        let coords = BitVec::from_indices(self.dim(), (0..self.dim()).filter(|&i| v.get(self.pivots[i])));
        (self.basis.vec_mul(&coords) == *v).then_some(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        let mut rows = self.basis.rows().to_vec();
        rows.extend(other.basis.rows().iter().cloned());
        Ok(Subspace::span(self.ambient_dim, rows))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        check_ambient(self, other)?;
        // x·U = y·V  ⇔  (x, y) in the left kernel of [U; V].
        let stacked = self.basis.vstack(&other.basis)?;
        let (_, kernel) = rank_nullspace(&stacked.transpose());
        let du = self.dim();
        let vectors = kernel
            .vectors()
            .iter()
            .map(|k| {
                let x = BitVec::from_indices(du, k.iter_ones().filter(|&i| i < du));
                self.basis.vec_mul(&x)
            })
            .collect();
        Ok(Subspace::span(self.ambient_dim, vectors))
    }

    /// All members, in order of their RREF coordinates. Intended for small dims.
    pub fn elements(&self) -> Vec<BitVec> {
        assert!(self.dim() < 32, "subspace too large to enumerate");
        (0u64..1 << self.dim()).map(|m| self.basis.vec_mul(&BitVec::from_mask(self.dim(), m))).collect()
    }
}

fn check_ambient(u: &Subspace, v: &Subspace) -> Result<()> {
    if u.ambient_dim != v.ambient_dim {
        return Err(Error::AmbientMismatch(u.ambient_dim, v.ambient_dim));
    }
    Ok(())
}

/// Rank of `m` and a basis of its (right) nullspace `{v : m·v = 0}`.
pub fn rank_nullspace(m: &F2Matrix) -> (usize, Subspace) {
    let cols = m.ncols();
    let (rows, pivots) = if m.nrows() == 0 { (Vec::new(), Vec::new()) } else { rref(m.rows().to_vec()) };
    let rank = pivots.len();
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::with_capacity(cols - rank);
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = BitVec::zeros(cols);
        v.set(free, true);
        for (row, &p) in rows.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    (rank, Subspace::span(cols, basis))
}

/// A solution `x` of `m·x = rhs`, with free variables set to zero.
pub fn solve(m: &F2Matrix, rhs: &BitVec) -> Option<BitVec> {
    assert_eq!(rhs.len(), m.nrows(), "rhs length mismatch");
    let cols = m.ncols();
    let augmented: Vec<BitVec> = m
        .rows()
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut a = BitVec::zeros(cols + 1);
            for c in row.iter_ones() {
                a.set(c, true);
            }
            a.set(cols, rhs.get(r));
            a
        })
        .collect();
    if augmented.is_empty() {
        return Some(BitVec::zeros(cols));
    }
    let (rows, pivots) = rref(augmented);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = BitVec::zeros(cols);
    for (row, &p) in rows.iter().zip(&pivots) {
        if row.get(cols) {
            x.set(p, true);
        }
    }
    Some(x)
}

/// `dim(U ∩ V) = dim U + dim V − dim(U + V)`.
pub fn subspace_intersection_dim(u: &Subspace, v: &Subspace) -> Result<usize> {
    check_ambient(u, v)?;
    let stacked = u.basis.vstack(&v.basis)?;
    Ok(u.dim() + v.dim() - stacked.rank())
}

fn check_form(q: &F2Matrix, n: usize) -> Result<()> {
    if !q.is_square() || q.nrows() != n {
        return Err(Error::Shape(format!("form is {}x{}, subspace ambient {}", q.nrows(), q.ncols(), n)));
    }
    if !q.is_symmetric() {
        return Err(Error::Shape("form is not symmetric".into()));
    }
    Ok(())
}

/// True iff `(x, Q y) = 0` for all `x, y ∈ U`.
pub fn is_isotropic(q: &F2Matrix, u: &Subspace) -> Result<bool> {
    check_form(q, u.ambient_dim)?;
    Ok(isotropic_unchecked(q, u))
}

fn isotropic_unchecked(q: &F2Matrix, u: &Subspace) -> bool {
    let images: Vec<BitVec> = u.vectors().iter().map(|y| q.mul_vec(y)).collect();
    u.vectors().iter().all(|x| images.iter().all(|qy| !x.dot(qy)))
}

/// The hyperbolic form on F₂^{2j}: `j` diagonal blocks `[[0,1],[1,0]]`.
pub fn hyperbolic_form(j: usize) -> F2Matrix {
    let mut q = F2Matrix::zeros(2 * j, 2 * j);
    for b in 0..j {
        q.set(2 * b, 2 * b + 1, true);
        q.set(2 * b + 1, 2 * b, true);
    }
    q
}

fn is_hyperbolic(q: &F2Matrix) -> bool {
    q.nrows().is_multiple_of(2) && *q == hyperbolic_form(q.nrows() / 2)
}

/// Checks that `(a, Q b) = 0` for every zero-sum triple `a + b + c = 0`
/// with `a ∈ A`, `b ∈ B`, `c ∈ C`.
///
/// The triples form the kernel `K` of `(x, y, z) ↦ xA + yB + zC`. On `K` the
/// map `(x, y, z) ↦ (xA, Q·yB)` is a quadratic function, which vanishes
/// identically iff it vanishes on each basis element and its polarization
/// vanishes on each pair of basis elements.
pub fn no_twist_holds(q: &F2Matrix, a: &Subspace, b: &Subspace, c: &Subspace) -> Result<bool> {
    let n = a.ambient_dim;
    check_ambient(a, b)?;
    check_ambient(a, c)?;
    check_form(q, n)?;
    let (da, db) = (a.dim(), b.dim());
    let stacked = a.basis.vstack(&b.basis)?.vstack(&c.basis)?;
    let (_, kernel) = rank_nullspace(&stacked.transpose());
    let pairs: Vec<(BitVec, BitVec)> = kernel
        .vectors()
        .iter()
        .map(|k| {
            let x = BitVec::from_indices(da, k.iter_ones().filter(|&i| i < da));
            let y = BitVec::from_indices(db, k.iter_ones().filter(|&i| i >= da && i < da + db).map(|i| i - da));
            (a.basis.vec_mul(&x), q.mul_vec(&b.basis.vec_mul(&y)))
        })
        .collect();
    for (i, (ai, qbi)) in pairs.iter().enumerate() {
        if ai.dot(qbi) {
            return Ok(false);
        }
        for (aj, qbj) in &pairs[i + 1..] {
            if ai.dot(qbj) != aj.dot(qbi) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub sum_mod2: bool,
    pub j_mod2: bool,
    pub identity_holds: bool,
}

/// Evaluates `dim(A∩B) + dim(B∩C) + dim(C∩A) ≡ j (mod 2)`.
///
/// Returns `Error::Precondition` when the form is not hyperbolic, a subspace
/// is not maximal isotropic, or the no-twist condition fails.
pub fn lemma63_parity(q: &F2Matrix, a: &Subspace, b: &Subspace, c: &Subspace) -> Result<ParityReport> {
    check_ambient(a, b)?;
    check_ambient(a, c)?;
    check_form(q, a.ambient_dim)?;
    if !is_hyperbolic(q) {
        return Err(Error::Precondition("form is not a sum of hyperbolic blocks".into()));
    }
    let j = q.nrows() / 2;
    for (name, s) in [("A", a), ("B", b), ("C", c)] {
        if s.dim() != j || !isotropic_unchecked(q, s) {
            return Err(Error::Precondition(format!("{name} is not maximal isotropic")));
        }
    }
    if !no_twist_holds(q, a, b, c)? {
        return Err(Error::Precondition("no-twist condition fails".into()));
    }
    let sum = subspace_intersection_dim(a, b)? + subspace_intersection_dim(b, c)? + subspace_intersection_dim(c, a)?;
    let sum_mod2 = sum % 2 == 1;
    let j_mod2 = j % 2 == 1;
    Ok(ParityReport { sum_mod2, j_mod2, identity_holds: sum_mod2 == j_mod2 })
}

pub const MAX_ISOTROPIC_AMBIENT: usize = 8;

/// All `j`-dimensional subspaces of F₂^{2j} on which `q` vanishes.
///
/// Walks every RREF shape (pivot set plus free entries), so each subspace is
/// produced exactly once.
pub fn enumerate_max_isotropics(q: &F2Matrix, j: usize) -> Result<Vec<Subspace>> {
    let n = 2 * j;
    if n > MAX_ISOTROPIC_AMBIENT {
        return Err(Error::Guard(format!("ambient dimension {n} exceeds {MAX_ISOTROPIC_AMBIENT}")));
    }
    check_form(q, n)?;
    let mut out = Vec::new();
    for_each_subspace(n, j, |s| {
        if isotropic_unchecked(q, &s) {
            out.push(s);
        }
    });
    Ok(out)
}

/// Calls `f` on every `k`-dimensional subspace of F₂ⁿ.
pub fn for_each_subspace(n: usize, k: usize, mut f: impl FnMut(Subspace)) {
    assert!(k <= n && n <= 16);
    for pivot_mask in 0u32..1 << n {
        if pivot_mask.count_ones() as usize != k {
            continue;
        }
        let pivots: Vec<usize> = (0..n).filter(|&c| pivot_mask >> c & 1 == 1).collect();
        // Free positions: right of the row's pivot, in a non-pivot column.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| ((p + 1)..n).filter(move |&c| pivot_mask >> c & 1 == 0).map(move |c| (r, c)))
            .collect();
        assert!(free.len() < 64);
        for fill in 0u64..1 << free.len() {
            let mut rows: Vec<BitVec> = pivots.iter().map(|&p| BitVec::from_indices(n, [p])).collect();
            for (bit, &(r, c)) in free.iter().enumerate() {
                if fill >> bit & 1 == 1 {
                    rows[r].set(c, true);
                }
            }
            f(Subspace { ambient_dim: n, basis: F2Matrix::from_rows(n, rows), pivots: pivots.clone() });
        }
    }
}

/// Number of nonsingular symmetric zero-diagonal `n×n` matrices over F₂,
/// found by exhaustive search.
pub fn count_nonsingular_alternating(n: usize) -> Result<u64> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect();
    if slots.len() > 24 {
        return Err(Error::Guard(format!("size {n} too large for exhaustive search")));
    }
    let mut count = 0;
    for fill in 0u64..1 << slots.len() {
        let mut m = F2Matrix::zeros(n, n);
        for (bit, &(i, j)) in slots.iter().enumerate() {
            if fill >> bit & 1 == 1 {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
        if m.rank() == n {
            count += 1;
        }
    }
    Ok(count)
}
