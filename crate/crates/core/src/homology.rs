//! Cellular homology with F₂ coefficients.

use std::fmt;

use crate::bitvec::BitVec;
use crate::complex::{CellComplex, Chain, Subcomplex};
use crate::error::{Error, Result};
use crate::f2linalg::{rank_nullspace, solve, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiVector {
    pub b: Vec<usize>,
}

impl BettiVector {
    pub fn get(&self, k: usize) -> usize {
        self.b.get(k).copied().unwrap_or(0)
    }

    pub fn euler_char(&self) -> i64 {
        self.b.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `b_k = dim ker ∂_k − rank ∂_{k+1}`.
pub fn betti(c: &CellComplex) -> Result<BettiVector> {
    let d = c.dim();
    let ranks: Vec<usize> =
        (0..=d + 1).map(|k| if k == 0 || k > d { 0 } else { c.boundary_matrix(k).rank() }).collect();
    for k in 2..=d {
        if !c.boundary_matrix(k - 1).mul(&c.boundary_matrix(k))?.is_zero() {
            return Err(Error::Precondition(format!("boundary maps do not compose to zero at degree {k}")));
        }
    }
    let b = (0..=d).map(|k| c.count(k) - ranks[k] - ranks[k + 1]).collect();
    Ok(BettiVector { b })
}

/// Betti numbers of a closed subcomplex.
pub fn betti_of(c: &CellComplex, s: &Subcomplex) -> Result<BettiVector> {
    if s.is_empty() {
        return Ok(BettiVector { b: vec![0] });
    }
    let (k, _) = s.to_complex(c)?;
    betti(&k)
}

/// Alternating cell count of a subcomplex.
pub fn euler_char(s: &Subcomplex) -> i64 {
    s.euler_char()
}

/// `Σ_{i=start}^{k} b_i mod 2` for a subcomplex of dimension at most `2k+1`.
pub fn semicharacteristic(c: &CellComplex, s: &Subcomplex, k: usize, start: usize) -> Result<bool> {
    if let Some(top) = s.top_dim() {
        if top > 2 * k + 1 {
            return Err(Error::Shape(format!("subcomplex has dimension {top}, expected at most {}", 2 * k + 1)));
        }
    }
    if start > 1 {
        return Err(Error::Parameter(format!("semicharacteristic start must be 0 or 1, got {start}")));
    }
    let b = betti_of(c, s)?;
    Ok((start..=k).map(|i| b.get(i)).sum::<usize>() % 2 == 1)
}

/// Representatives of `H_p`, one per class.
#[derive(Clone, Debug)]
pub struct SectorSet {
    pub p: usize,
    /// `reps[m]` is the sum of the basis classes selected by the bits of `m`.
    pub reps: Vec<Chain>,
    boundaries: Subspace,
    classes: Subspace,
}

impl SectorSet {
    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn betti(&self) -> usize {
        self.classes.dim()
    }

    /// Index of the class of a cycle, or `None` for a non-cycle.
    pub fn class_of(&self, z: &Chain) -> Option<usize> {
        let r = self.boundaries.reduce(&z.bits);
        let coords = self.classes.coordinates(&r)?;
        Some(coords.iter_ones().map(|i| 1usize << i).sum())
    }
}

/// One cycle per class of `H_p`. Each representative is the lexicographically
/// least cycle of its coset when bit 0 is taken as most significant.
pub fn homology_sector_reps(c: &CellComplex, p: usize) -> Result<SectorSet> {
    if p > c.dim() {
        return Err(Error::Parameter(format!("p = {p} exceeds dimension {}", c.dim())));
    }
    let n = c.count(p);
    let cycles = if p == 0 { Subspace::full(n) } else { rank_nullspace(&c.boundary_matrix(p)).1 };
    let boundaries = if p < c.dim() {
        Subspace::span(n, c.boundary_matrix(p + 1).transpose().into_rows())
    } else {
        Subspace::zero(n)
    };
    let reduced: Vec<BitVec> = cycles.vectors().iter().map(|z| boundaries.reduce(z)).collect();
    let classes = Subspace::span(n, reduced);
    let b = classes.dim();
    if b >= 24 {
        return Err(Error::Guard(format!("2^{b} sector representatives")));
    }
    let reps = (0u64..1 << b).map(|m| Chain::new(p, classes.basis().vec_mul(&BitVec::from_mask(b, m)))).collect();
    Ok(SectorSet { p, reps, boundaries, classes })
}

/// A `(p+1)`-chain `y` with `∂y = a + b`, if one exists.
pub fn boundary_witness(c: &CellComplex, a: &Chain, b: &Chain) -> Option<Chain> {
    let p = a.dim;
    if p >= c.dim() {
        return (a.bits == b.bits).then(|| Chain::new(p + 1, BitVec::zeros(0)));
    }
    let rhs = a.bits.xor(&b.bits);
    solve(&c.boundary_matrix(p + 1), &rhs).map(|y| Chain::new(p + 1, y))
}

pub fn homologous(c: &CellComplex, a: &Chain, b: &Chain) -> bool {
    boundary_witness(c, a, b).is_some()
}

/// Side-propagation result for the components of a 1-cycle on a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidednessReport {
    /// Edges of each loop component in walking order, with its flag.
    pub components: Vec<(Vec<usize>, bool)>,
    /// Number of one-sided components mod 2.
    pub epsilon: bool,
    pub w1_eval: bool,
}

/// Splits an embedded 1-cycle on a graph into loops, each listed as edges in
/// walking order. Fails if a vertex meets the cycle in other than 0 or 2 edges.
pub fn loop_components(c: &CellComplex, e: &Chain) -> Result<Vec<Vec<usize>>> {
    if e.dim != 1 {
        return Err(Error::Shape("expected a 1-chain".into()));
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); c.count(0)];
    for edge in e.bits.iter_ones() {
        for &v in c.faces(1, edge) {
            incident[v].push(edge);
        }
    }
    if let Some(v) = incident.iter().position(|l| !l.is_empty() && l.len() != 2) {
        return Err(Error::Precondition(format!("vertex {v} meets the cycle in {} edges", incident[v].len())));
    }
    let mut seen = BitVec::zeros(c.count(1));
    let mut out = Vec::new();
    for start in e.bits.iter_ones() {
        if seen.get(start) {
            continue;
        }
        let mut walk = vec![start];
        seen.set(start, true);
        let mut v = c.faces(1, start)[1];
        let mut cur = start;
        loop {
            let next = if incident[v][0] == cur { incident[v][1] } else { incident[v][0] };
            if next == start {
                break;
            }
            seen.set(next, true);
            walk.push(next);
            let fs = c.faces(1, next);
            v = if fs[0] == v { fs[1] } else { fs[0] };
            cur = next;
        }
        out.push(walk);
    }
    Ok(out)
}

/// Walks each loop of a 1-cycle on a surface, carrying a choice of side
/// across every corner, and flags the loops where the side comes back
/// reversed.
pub fn two_sidedness_d2(c: &CellComplex, e: &Chain) -> Result<SidednessReport> {
    if c.dim() != 2 {
        return Err(Error::Parameter(format!("sidedness is defined here for surfaces, got d = {}", c.dim())));
    }
    if !c.is_cycle(e) {
        return Err(Error::NotCycle(c.chain_boundary(e).bits.count_ones()));
    }
    let mut components = Vec::new();
    for walk in loop_components(c, e)? {
        let sides = |edge: usize| -> Result<[usize; 2]> {
            match c.cofaces(1, edge) {
                [a, b] => Ok([*a, *b]),
                other => Err(Error::Precondition(format!("edge {edge} has {} cofaces", other.len()))),
            }
        };
        let first = sides(walk[0])?;
        let mut side = first[0];
        for i in 0..walk.len() {
            let (cur, next) = (walk[i], walk[(i + 1) % walk.len()]);
            let here = sides(cur)?;
            let there = sides(next)?;
            let common: Vec<usize> = here.iter().copied().filter(|f| there.contains(f)).collect();
            if common.len() != 1 {
                return Err(Error::Precondition(format!(
                    "edges {cur} and {next} share {} faces; side transport is ambiguous",
                    common.len()
                )));
            }
            let corner = common[0];
            side = if side == corner {
                corner
            } else if there[0] == corner {
                there[1]
            } else {
                there[0]
            };
        }
        components.push((walk, side != first[0]));
    }
    let odd = components.iter().filter(|(_, one_sided)| *one_sided).count() % 2 == 1;
    Ok(SidednessReport { components, epsilon: odd, w1_eval: odd })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{builtin_manifold, ManifoldSpec};

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn classical_betti_numbers() {
        assert_eq!(betti(&build("torus:2")).unwrap().b, vec![1, 2, 1]);
        assert_eq!(betti(&build("klein")).unwrap().b, vec![1, 2, 1]);
        assert_eq!(betti(&build("sphere:4")).unwrap().b, vec![1, 0, 0, 0, 1]);
        assert_eq!(betti(&build("tP:1")).unwrap().b, vec![1, 1, 1]);
        assert_eq!(betti(&build("torus:3")).unwrap().b, vec![1, 3, 3, 1]);
        assert_eq!(betti(&build("genus:2")).unwrap().b, vec![1, 4, 1]);
    }

    #[test]
    fn sector_counts() {
        assert_eq!(homology_sector_reps(&build("sphere:2"), 1).unwrap().class_count(), 1);
        assert_eq!(homology_sector_reps(&build("torus:2"), 1).unwrap().class_count(), 4);
        let s = homology_sector_reps(&build("tP:3"), 1).unwrap();
        assert_eq!(s.class_count(), 8);
        assert!(s.reps[0].is_empty());
    }

    #[test]
    fn class_lookup_matches_rep_index() {
        let c = build("torus:2");
        let s = homology_sector_reps(&c, 1).unwrap();
        for (m, r) in s.reps.iter().enumerate() {
            assert_eq!(s.class_of(r), Some(m));
            // Adding a boundary stays in class.
            let shifted = r.xor(&Chain::new(1, c.cell_boundary(2, 0)));
            assert_eq!(s.class_of(&shifted), Some(m));
        }
    }

    #[test]
    fn witness_solves_boundary_equation() {
        let c = build("sphere:3");
        let a = Chain::zero(&c, 2);
        let b = Chain::new(2, c.cell_boundary(3, 0).xor(&c.cell_boundary(3, 2)));
        let y = boundary_witness(&c, &a, &b).unwrap();
        assert_eq!(c.chain_boundary(&y), b);
    }

    #[test]
    fn semicharacteristic_examples() {
        let c = build("sphere:2");
        let circle = c.closure(1, c.faces(2, 0).to_vec());
        assert!(semicharacteristic(&c, &circle, 0, 0).unwrap());
        let s4 = build("sphere:4");
        let s3 = Subcomplex::full(&s4);
        assert!(semicharacteristic(&s4, &s3, 1, 0).is_err());
        let sphere3 = boundary_cell_closure(&s4, 0);
        assert!(semicharacteristic(&s4, &sphere3, 1, 0).unwrap());
        let t3 = build("torus:3");
        assert!(!semicharacteristic(&t3, &Subcomplex::full(&t3), 1, 0).unwrap());
    }

    fn boundary_cell_closure(c: &CellComplex, cell: usize) -> Subcomplex {
        c.closure(c.dim() - 1, c.faces(c.dim(), cell).to_vec())
    }

    #[test]
    fn sidedness_on_surfaces() {
        let rp2 = build("tP:1");
        let s = homology_sector_reps(&rp2, 1).unwrap();
        let r = two_sidedness_d2(&rp2, &s.reps[1]).unwrap();
        assert!(r.epsilon);
        let t2 = build("torus:2");
        let s = homology_sector_reps(&t2, 1).unwrap();
        for rep in &s.reps {
            assert!(!two_sidedness_d2(&t2, rep).unwrap().epsilon);
        }
        assert!(two_sidedness_d2(&build("sphere:3"), &Chain::zero(&build("sphere:3"), 1)).is_err());
    }

    #[test]
    fn klein_bottle_has_both_kinds_of_loop() {
        let k = build("klein");
        let s = homology_sector_reps(&k, 1).unwrap();
        let eps: Vec<bool> = s.reps.iter().map(|r| two_sidedness_d2(&k, r).unwrap().epsilon).collect();
        assert_eq!(eps.iter().filter(|&&e| e).count(), 2);
        assert!(!eps[0]);
    }
}
