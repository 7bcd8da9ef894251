//! Vertex terms and signed plaquette flips of the generalized toric code
//! (GTC) and generalized double semion (GDS) models.
//!
//! Qubits sit on the `(d−1)`-cells. A state is a `(d−1)`-chain whose set bits
//! are the ↑ cells. Flipping a `d`-cell `c` toggles `∂c`; in the GDS model the
//! flip carries the sign `−(−1)^{χ(↑_c)}`, where `↑_c` is the closure of the
//! ↑ cells of `∂c`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bitvec::BitVec;
use crate::complex::{CellComplex, Chain};
use crate::error::{Error, Result};
use crate::homology::{betti, homology_sector_reps};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Gds,
    Gtc,
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gds" => Ok(Model::Gds),
            "gtc" => Ok(Model::Gtc),
            _ => Err(Error::Parameter(format!("unknown model {s:?}; expected gds or gtc"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Gds => "gds",
            Model::Gtc => "gtc",
        })
    }
}

pub type SpinState = Chain;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedFlip {
    pub cell: usize,
    pub chi_up: i64,
    pub phase: Phase,
    pub model: Model,
}

impl SignedFlip {
    /// Parity of the number of Morse transitions realising the flip.
    pub fn morse_parity(&self) -> bool {
        (self.chi_up + 1).rem_euclid(2) == 1
    }
}

/// Closure data of the boundary of one top cell, in local indices.
#[derive(Clone, Debug)]
pub struct PlaquetteLocal {
    /// Distinct `(d−1)`-faces of the cell.
    pub faces: Vec<usize>,
    /// Faces appearing an odd number of times: the cells a flip toggles.
    pub boundary: BitVec,
    closures: Vec<BitVec>,
    dims: Vec<usize>,
    range: Vec<usize>,
}

impl PlaquetteLocal {
    pub fn new(c: &CellComplex, cell: usize) -> Self {
        let d = c.dim();
        let closure = c.cell_closure(d, cell);
        let mut range = vec![0];
        let mut local_of: Vec<Vec<usize>> = Vec::with_capacity(d);
        let mut dims = Vec::new();
        for k in 0..d {
            let mut map = vec![usize::MAX; c.count(k)];
            for id in closure.mask(k).iter_ones() {
                map[id] = dims.len();
                dims.push(k);
            }
            range.push(dims.len());
            local_of.push(map);
        }
        let n = dims.len();
        // Closure of each local cell, built bottom-up.
        let mut per_cell: Vec<Vec<BitVec>> = Vec::with_capacity(d);
        for k in 0..d {
            let ids = closure.mask(k).ones_vec();
            let mut level = Vec::with_capacity(ids.len());
            for &id in &ids {
                let mut m = BitVec::zeros(n);
                m.set(local_of[k][id], true);
                if k > 0 {
                    for &f in c.faces(k, id) {
                        let lf = local_of[k - 1][f] - range[k - 1];
                        m.or_assign(&per_cell[k - 1][lf]);
                    }
                }
                level.push(m);
            }
            per_cell.push(level);
        }
        let faces = closure.mask(d - 1).ones_vec();
        let closures = per_cell.pop().unwrap_or_default();
        Self { boundary: c.cell_boundary(d, cell), faces, closures, dims, range }
    }

    fn union_of(&self, s: &BitVec, up: bool) -> BitVec {
        let mut acc = BitVec::zeros(self.dims.len());
        for (i, &f) in self.faces.iter().enumerate() {
            if s.get(f) == up {
                acc.or_assign(&self.closures[i]);
            }
        }
        acc
    }

    fn chi(&self, m: &BitVec) -> i64 {
        let mut chi = 0i64;
        for k in 0..self.range.len() - 1 {
            let n = (self.range[k]..self.range[k + 1]).filter(|&i| m.get(i)).count() as i64;
            chi += if k % 2 == 0 { n } else { -n };
        }
        chi
    }

    pub fn chi_up(&self, s: &BitVec) -> i64 {
        self.chi(&self.union_of(s, true))
    }

    /// `(χ(↑_c), χ(↓_c), χ(↑_c ∩ ↓_c))`.
    pub fn up_down_chi(&self, s: &BitVec) -> (i64, i64, i64) {
        let up = self.union_of(s, true);
        let down = self.union_of(s, false);
        (self.chi(&up), self.chi(&down), self.chi(&up.and(&down)))
    }

    pub fn sign(&self, s: &BitVec, model: Model) -> (i64, Phase) {
        match model {
            Model::Gtc => (self.chi_up(s), Phase::ONE),
            Model::Gds => {
                let chi = self.chi_up(s);
                (chi, -Phase::minus_one_pow(chi))
            }
        }
    }
}

/// Cached plaquette data for every top cell.
#[derive(Clone, Debug)]
pub struct Plaquettes {
    pub locals: Vec<PlaquetteLocal>,
}

impl Plaquettes {
    pub fn new(c: &CellComplex) -> Self {
        Self { locals: (0..c.count(c.dim())).into_par_iter().map(|i| PlaquetteLocal::new(c, i)).collect() }
    }

    pub fn len(&self) -> usize {
        self.locals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locals.is_empty()
    }

    /// Applies the flip in place and returns its record.
    pub fn flip_in_place(&self, cell: usize, s: &mut BitVec, model: Model) -> SignedFlip {
        let local = &self.locals[cell];
        let (chi_up, phase) = local.sign(s, model);
        s.xor_assign(&local.boundary);
        SignedFlip { cell, chi_up, phase, model }
    }
}

/// The `(d−2)`-cells meeting an odd number of ↑ cells.
pub fn hplus_violations(c: &CellComplex, s: &SpinState) -> Vec<usize> {
    c.chain_boundary(s).cells()
}

pub fn chi_up(c: &CellComplex, cell: usize, s: &SpinState) -> Result<i64> {
    c.check_id(c.dim(), cell)?;
    Ok(PlaquetteLocal::new(c, cell).chi_up(&s.bits))
}

pub fn flip(c: &CellComplex, cell: usize, s: &SpinState, model: Model) -> Result<(SpinState, SignedFlip)> {
    c.check_id(c.dim(), cell)?;
    let local = PlaquetteLocal::new(c, cell);
    let (chi_up, phase) = local.sign(&s.bits, model);
    let out = Chain::new(s.dim, s.bits.xor(&local.boundary));
    Ok((out, SignedFlip { cell, chi_up, phase, model }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectorCheck {
    Holds,
    Fails,
    /// The state violates a vertex term on `∂c`, outside the verified scope.
    Indeterminate,
}

/// Whether two GDS flips of the same cell return the state with phase `+1`.
pub fn verify_projector(c: &CellComplex, cell: usize, s: &SpinState) -> Result<ProjectorCheck> {
    c.check_id(c.dim(), cell)?;
    let local = PlaquetteLocal::new(c, cell);
    Ok(projector_check(c, &local, cell, s))
}

pub(crate) fn projector_check(c: &CellComplex, local: &PlaquetteLocal, cell: usize, s: &SpinState) -> ProjectorCheck {
    let d = c.dim();
    if d >= 2 {
        let near = c.cell_closure(d, cell);
        let violated = c.chain_boundary(s);
        if violated.bits.intersects(near.mask(d - 2)) {
            return ProjectorCheck::Indeterminate;
        }
    }
    let (_, p1) = local.sign(&s.bits, Model::Gds);
    let after = s.bits.xor(&local.boundary);
    let (_, p2) = local.sign(&after, Model::Gds);
    if p1 * p2 == Phase::ONE {
        ProjectorCheck::Holds
    } else {
        ProjectorCheck::Fails
    }
}

fn require_cycle(c: &CellComplex, s: &SpinState) -> Result<()> {
    let v = hplus_violations(c, s);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::NotCycle(v.len()))
    }
}

/// Flips `c1` then `c2`, and `c2` then `c1`, comparing states and phases.
pub fn verify_commutation(c: &CellComplex, c1: usize, c2: usize, s: &SpinState) -> Result<bool> {
    require_cycle(c, s)?;
    let (a1, f1) = flip(c, c1, s, Model::Gds)?;
    let (a2, f2) = flip(c, c2, &a1, Model::Gds)?;
    let (b1, g1) = flip(c, c2, s, Model::Gds)?;
    let (b2, g2) = flip(c, c1, &b1, Model::Gds)?;
    Ok(a2 == b2 && f1.phase * f2.phase == g1.phase * g2.phase)
}

/// Flips every top cell once, in id order, starting from the cycle `e`,
/// and returns the accumulated GDS phase.
pub fn sweep_sign(c: &CellComplex, e: &SpinState) -> Result<Phase> {
    let order: Vec<usize> = (0..c.count(c.dim())).collect();
    sweep_sign_ordered(c, &Plaquettes::new(c), e, &order)
}

/// The sweep with an explicit cell order and cached plaquettes.
pub fn sweep_sign_ordered(c: &CellComplex, plaq: &Plaquettes, e: &SpinState, order: &[usize]) -> Result<Phase> {
    require_cycle(c, e)?;
    let parts = c.component_count();
    if parts != 1 {
        return Err(Error::Disconnected(parts));
    }
    let mut seen = vec![false; plaq.len()];
    for &i in order {
        if i >= plaq.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::Parameter("order must list every top cell exactly once".into()));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::Parameter("order must list every top cell exactly once".into()));
    }
    let mut s = e.bits.clone();
    let mut phase = Phase::ONE;
    for &cell in order {
        phase *= plaq.flip_in_place(cell, &mut s, Model::Gds).phase;
    }
    debug_assert_eq!(s, e.bits);
    Ok(phase)
}

/// A random ordering of the top cells.
pub fn random_order(c: &CellComplex, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.count(c.dim())).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorReport {
    pub sector: usize,
    pub rep: Chain,
    pub sweep_sign: Phase,
    pub survives: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundReport {
    pub gsd: u64,
    pub reports: Vec<SectorReport>,
}

/// Ground-state degeneracy from the sector sweep. GTC: every sector
/// survives; GDS: sectors whose sweep sign is `+1`. Disconnected complexes
/// multiply over components.
pub fn ground_degeneracy(c: &CellComplex, model: Model) -> Result<GroundReport> {
    let parts = c.components();
    if parts.len() > 1 {
        let mut gsd = 1;
        let mut reports = Vec::new();
        for part in parts {
            let (sub, _) = part.to_complex(c)?;
            let r = ground_degeneracy(&sub, model)?;
            gsd *= r.gsd;
            reports.extend(r.reports);
        }
        return Ok(GroundReport { gsd, reports });
    }
    let d = c.dim();
    if d == 0 {
        return Ok(GroundReport { gsd: 1, reports: Vec::new() });
    }
    let sectors = homology_sector_reps(c, d - 1)?;
    let plaq = Plaquettes::new(c);
    let order: Vec<usize> = (0..plaq.len()).collect();
    let reports: Vec<SectorReport> = sectors
        .reps
        .par_iter()
        .enumerate()
        .map(|(sector, rep)| {
            let sign = match model {
                Model::Gtc => Phase::ONE,
                Model::Gds => sweep_sign_ordered(c, &plaq, rep, &order)?,
            };
            Ok(SectorReport { sector, rep: rep.clone(), sweep_sign: sign, survives: sign == Phase::ONE })
        })
        .collect::<Result<_>>()?;
    let gsd = reports.iter().filter(|r| r.survives).count() as u64;
    if model == Model::Gtc {
        debug_assert_eq!(gsd, 1u64 << betti(c)?.get(d - 1));
    }
    Ok(GroundReport { gsd, reports })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{builtin_manifold, ManifoldSpec};

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn violations_examples() {
        let c = build("torus:2");
        assert!(hplus_violations(&c, &Chain::zero(&c, 1)).is_empty());
        let b = Chain::new(1, c.cell_boundary(2, 0));
        assert!(hplus_violations(&c, &b).is_empty());
        let e = Chain::from_cells(&c, 1, [0]);
        let mut ends = c.faces(1, 0).to_vec();
        ends.sort_unstable();
        assert_eq!(hplus_violations(&c, &e), ends);
    }

    #[test]
    fn chi_up_examples() {
        let c = build("sphere:3");
        assert_eq!(chi_up(&c, 0, &Chain::zero(&c, 2)).unwrap(), 0);
        let all = Chain::new(2, BitVec::ones(c.count(2)));
        assert_eq!(chi_up(&c, 0, &all).unwrap(), 2);
        let t2 = build("torus:2");
        let one = Chain::from_cells(&t2, 1, [t2.faces(2, 0)[0]]);
        assert_eq!(chi_up(&t2, 0, &one).unwrap(), 1);
    }

    #[test]
    fn flip_signs() {
        let c = build("torus:3");
        let empty = Chain::zero(&c, 2);
        let (s1, f1) = flip(&c, 4, &empty, Model::Gds).unwrap();
        assert_eq!(f1.phase, Phase::MINUS_ONE);
        assert!(f1.morse_parity());
        let (s2, f2) = flip(&c, 4, &s1, Model::Gds).unwrap();
        assert_eq!(f2.phase, Phase::MINUS_ONE);
        assert_eq!(s2, empty);
        assert_eq!(flip(&c, 4, &s1, Model::Gtc).unwrap().1.phase, Phase::ONE);
    }

    #[test]
    fn projector_on_extreme_states() {
        let c = build("sphere:3");
        let empty = Chain::zero(&c, 2);
        let shell = Chain::new(2, c.cell_boundary(3, 0));
        for cell in 0..c.count(3) {
            assert_eq!(verify_projector(&c, cell, &empty).unwrap(), ProjectorCheck::Holds);
            assert_eq!(verify_projector(&c, cell, &shell).unwrap(), ProjectorCheck::Holds);
        }
        let t2 = build("torus:2");
        let bad = Chain::from_cells(&t2, 1, [t2.faces(2, 0)[0]]);
        assert_eq!(verify_projector(&t2, 0, &bad).unwrap(), ProjectorCheck::Indeterminate);
    }

    #[test]
    fn sweep_examples() {
        let rp2 = build("tP:1");
        assert_eq!(sweep_sign(&rp2, &Chain::zero(&rp2, 1)).unwrap(), Phase::MINUS_ONE);
        let s2 = build("sphere:2");
        assert_eq!(sweep_sign(&s2, &Chain::zero(&s2, 1)).unwrap(), Phase::ONE);
        let t2 = build("torus:2");
        for r in ground_degeneracy(&t2, Model::Gds).unwrap().reports {
            assert_eq!(r.sweep_sign, Phase::ONE);
        }
        let bad = Chain::from_cells(&t2, 1, [0]);
        assert!(matches!(sweep_sign(&t2, &bad), Err(Error::NotCycle(_))));
    }

    #[test]
    fn degeneracies() {
        for t in 1..=4usize {
            let c = build(&format!("tP:{t}"));
            assert_eq!(ground_degeneracy(&c, Model::Gds).unwrap().gsd, 1 << (t - 1));
            assert_eq!(ground_degeneracy(&c, Model::Gtc).unwrap().gsd, 1 << t);
        }
        assert_eq!(ground_degeneracy(&build("torus:3"), Model::Gds).unwrap().gsd, 8);
        assert_eq!(ground_degeneracy(&build("sphere:4"), Model::Gds).unwrap().gsd, 1);
    }

    #[test]
    fn order_must_be_a_permutation() {
        let c = build("sphere:2");
        let plaq = Plaquettes::new(&c);
        let e = Chain::zero(&c, 1);
        assert!(sweep_sign_ordered(&c, &plaq, &e, &[0, 1, 2]).is_err());
        assert!(sweep_sign_ordered(&c, &plaq, &e, &[0, 1, 2, 2]).is_err());
        assert!(sweep_sign_ordered(&c, &plaq, &e, &random_order(&c, 1)).is_ok());
    }
}
