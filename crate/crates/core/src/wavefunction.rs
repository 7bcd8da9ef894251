//! Reference zero-energy wavefunctions as phase functions on cycles, the
//! flip-consistency check, the projective-plane degeneracy table and phase
//! transport along explicit flip paths.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{builtin_manifold, ManifoldSpec};
use crate::complex::{CellComplex, Chain};
use crate::error::{Error, Result};
use crate::homology::{betti, boundary_witness, homology_sector_reps, semicharacteristic};
use crate::model::{ground_degeneracy, hplus_violations, Model, Plaquettes};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseKind {
    /// `i^{χ(E)}`, odd `d`.
    OddChi,
    /// `(−1)^{s(E)}`, even `d` with `b_{d−1} = 0 = b_{d/2}`.
    EvenSemichar,
}

/// A phase function bound to a complex whose hypotheses have been checked.
#[derive(Clone, Debug)]
pub struct PhaseFn<'a> {
    kind: PhaseKind,
    complex: &'a CellComplex,
}

impl<'a> PhaseFn<'a> {
    pub fn new(kind: PhaseKind, c: &'a CellComplex) -> Result<Self> {
        let d = c.dim();
        match kind {
            PhaseKind::OddChi if d.is_multiple_of(2) => {
                return Err(Error::Parity(format!("i^chi needs odd dimension, got {d}")));
            }
            PhaseKind::EvenSemichar => {
                if d % 2 == 1 || d < 2 {
                    return Err(Error::Parity(format!("(-1)^s needs even dimension, got {d}")));
                }
                let b = betti(c)?;
                if b.get(d - 1) != 0 || b.get(d / 2) != 0 {
                    return Err(Error::Topology(format!(
                        "(-1)^s needs b_{} = 0 = b_{}, got {} and {}",
                        d - 1,
                        d / 2,
                        b.get(d - 1),
                        b.get(d / 2)
                    )));
                }
            }
            _ => {}
        }
        Ok(Self { kind, complex: c })
    }

    /// The natural kind for the complex's dimension.
    pub fn for_complex(c: &'a CellComplex) -> Result<Self> {
        let kind = if c.dim() % 2 == 1 { PhaseKind::OddChi } else { PhaseKind::EvenSemichar };
        Self::new(kind, c)
    }

    pub fn kind(&self) -> PhaseKind {
        self.kind
    }

    pub fn complex(&self) -> &CellComplex {
        self.complex
    }
}

pub fn reference_phase(f: &PhaseFn, e: &Chain) -> Result<Phase> {
    let c = f.complex;
    if e.dim + 1 != c.dim() {
        return Err(Error::Shape(format!("expected a {}-chain, got a {}-chain", c.dim() - 1, e.dim)));
    }
    let v = hplus_violations(c, e);
    if !v.is_empty() {
        return Err(Error::NotCycle(v.len()));
    }
    let closure = c.chain_closure(e);
    Ok(match f.kind {
        PhaseKind::OddChi => Phase::i_pow(closure.euler_char()),
        PhaseKind::EvenSemichar => {
            let k = (c.dim() - 2) / 2;
            Phase::sign(semicharacteristic(c, &closure, k, 0)?)
        }
    })
}

/// First step at which the reference phase disagrees with a flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipMismatch {
    pub step: usize,
    pub cell: usize,
    pub before: Phase,
    pub after: Phase,
    pub flip_phase: Phase,
}

const RESTART_EVERY: usize = 50;

/// Random walks of GDS flips from random cycles, checking
/// `ψ(E′) = phase · ψ(E)` at each of `trials` steps.
pub fn verify_flip_consistency(f: &PhaseFn, trials: usize, seed: u64) -> Result<std::result::Result<(), FlipMismatch>> {
    let c = f.complex;
    let d = c.dim();
    let plaq = Plaquettes::new(c);
    let sectors = homology_sector_reps(c, d - 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = Chain::zero(c, d - 1);
    let mut psi = Phase::ONE;
    for step in 0..trials {
        if step % RESTART_EVERY == 0 {
            state = sectors.reps[rng.random_range(0..sectors.reps.len())].clone();
            for cell in 0..plaq.len() {
                if rng.random_bool(0.5) {
                    state.bits.xor_assign(&plaq.locals[cell].boundary);
                }
            }
            psi = reference_phase(f, &state)?;
        }
        let cell = rng.random_range(0..plaq.len());
        let flip = plaq.flip_in_place(cell, &mut state.bits, Model::Gds);
        let after = reference_phase(f, &state)?;
        if after != flip.phase * psi {
            return Ok(Err(FlipMismatch { step, cell, before: psi, after, flip_phase: flip.phase }));
        }
        psi = after;
    }
    Ok(Ok(()))
}

/// A single random flip walk of `steps` steps from a given cycle.
pub fn check_flips_from(
    f: &PhaseFn,
    start: &Chain,
    steps: usize,
    seed: u64,
) -> Result<std::result::Result<(), FlipMismatch>> {
    let plaq = Plaquettes::new(f.complex);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = start.clone();
    let mut psi = reference_phase(f, &state)?;
    for step in 0..steps {
        let cell = rng.random_range(0..plaq.len());
        let flip = plaq.flip_in_place(cell, &mut state.bits, Model::Gds);
        let after = reference_phase(f, &state)?;
        if after != flip.phase * psi {
            return Ok(Err(FlipMismatch { step, cell, before: psi, after, flip_phase: flip.phase }));
        }
        psi = after;
    }
    Ok(Ok(()))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub t: usize,
    pub ds: u64,
    pub tc: u64,
    pub ratio: f64,
}

pub const MAX_TABLE_T: usize = 6;

/// Ground degeneracies of both models on connected sums of `t` projective planes.
pub fn theorem_a_table(t_max: usize) -> Result<Vec<TableRow>> {
    if t_max > MAX_TABLE_T {
        return Err(Error::Guard(format!("t_max {t_max} exceeds {MAX_TABLE_T}")));
    }
    (1..=t_max)
        .map(|t| {
            let c = builtin_manifold(&ManifoldSpec::ProjectivePlanes(t))?;
            let ds = ground_degeneracy(&c, Model::Gds)?.gsd;
            let tc = ground_degeneracy(&c, Model::Gtc)?.gsd;
            Ok(TableRow { t, ds, tc, ratio: ds as f64 / tc as f64 })
        })
        .collect()
}

pub fn table_text(rows: &[TableRow]) -> String {
    let mut out = format!("{:>3} {:>8} {:>8} {:>7}\n", "t", "dim_DS", "dim_TC", "ratio");
    for r in rows {
        let _ = writeln!(out, "{:>3} {:>8} {:>8} {:>7.3}", r.t, r.ds, r.tc, r.ratio);
    }
    out
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("t,dim_ds,dim_tc,ratio\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.t, r.ds, r.tc, r.ratio);
    }
    out
}

/// Accumulated GDS phase of flipping the cells of a witness `D` with
/// `∂D = from + to`, starting at `from`. Both ends must be cycles.
pub fn transport_phase(c: &CellComplex, from: &Chain, to: &Chain) -> Result<Phase> {
    for e in [from, to] {
        let v = hplus_violations(c, e);
        if !v.is_empty() {
            return Err(Error::NotCycle(v.len()));
        }
    }
    let witness = boundary_witness(c, from, to).ok_or_else(|| Error::Topology("chains are not homologous".into()))?;
    let plaq = Plaquettes::new(c);
    let mut s = from.bits.clone();
    let mut phase = Phase::ONE;
    for cell in witness.bits.iter_ones() {
        phase *= plaq.flip_in_place(cell, &mut s, Model::Gds).phase;
    }
    debug_assert_eq!(s, to.bits);
    Ok(phase)
}

/// A shortest embedded edge loop of the given winding on a periodic
/// surface with geometry.
pub fn simple_loop(c: &CellComplex, winding: (i64, i64)) -> Result<Chain> {
    if c.dim() != 2 {
        return Err(Error::Shape(format!("simple_loop needs a surface, got dimension {}", c.dim())));
    }
    let g = c.geometry().ok_or_else(|| Error::Precondition("complex has no geometry".into()))?;
    let period = g.period.ok_or_else(|| Error::Precondition("complex is not periodic".into()))?;
    let n0 = c.count(0);
    let mut adj: Adjacency = vec![Vec::new(); n0];
    for e in 0..c.count(1) {
        let f = c.faces(1, e);
        if f.len() != 2 || f[0] == f[1] {
            continue;
        }
        let (a, b) = (f[0], f[1]);
        let pa = &g.anchors[0][a];
        let pb = &g.anchors[0][b];
        let disp = g.displacement(pa, pb);
        let shift = |i: usize| ((pa[i] + disp[i] - pb[i]) / period).round() as i64;
        let s = [shift(0), shift(1)];
        adj[a].push((b, e, s));
        adj[b].push((a, e, [-s[0], -s[1]]));
    }
    let target = [winding.0, winding.1];
    let mut budget = LOOP_SEARCH_BUDGET;
    for max_len in 1..=c.count(1) {
        for start in 0..n0 {
            let mut on_path = vec![false; n0];
            let mut edges = Vec::new();
            if loop_dfs(&adj, start, start, [0, 0], target, max_len, &mut on_path, &mut edges, &mut budget) {
                let mut chain = Chain::zero(c, 1);
                for &e in &edges {
                    chain.bits.set(e, true);
                }
                return Ok(chain);
            }
            if budget == 0 {
                return Err(Error::Guard("loop search budget exhausted".into()));
            }
        }
    }
    Err(Error::Topology(format!("no embedded loop of winding {winding:?} found")))
}

const LOOP_SEARCH_BUDGET: usize = 50_000_000;

type Adjacency = Vec<Vec<(usize, usize, [i64; 2])>>;

#[allow(clippy::too_many_arguments)]
fn loop_dfs(
    adj: &Adjacency,
    start: usize,
    v: usize,
    offset: [i64; 2],
    target: [i64; 2],
    left: usize,
    on_path: &mut [bool],
    edges: &mut Vec<usize>,
    budget: &mut usize,
) -> bool {
    if left == 0 || *budget == 0 {
        return false;
    }
    *budget -= 1;
    for &(w, e, s) in &adj[v] {
        let o = [offset[0] + s[0], offset[1] + s[1]];
        if w == start {
            if o == target && !edges.contains(&e) {
                edges.push(e);
                return true;
            }
            continue;
        }
        if on_path[w] {
            continue;
        }
        on_path[w] = true;
        edges.push(e);
        if loop_dfs(adj, start, w, o, target, left - 1, on_path, edges, budget) {
            return true;
        }
        edges.pop();
        on_path[w] = false;
    }
    false
}

/// Phase carried from the `(1,1)` loop to the `(1,−1)` loop of a periodic
/// torus surface.
pub fn torus_diagonal_transport(c: &CellComplex) -> Result<Phase> {
    let a = simple_loop(c, (1, 1))?;
    let b = simple_loop(c, (1, -1))?;
    transport_phase(c, &a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitvec::BitVec;

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn reference_phase_examples() {
        let t3 = build("torus:3");
        let f = PhaseFn::new(PhaseKind::OddChi, &t3).unwrap();
        assert_eq!(reference_phase(&f, &Chain::zero(&t3, 2)).unwrap(), Phase::ONE);
        let shell = Chain::new(2, t3.cell_boundary(3, 0));
        assert_eq!(reference_phase(&f, &shell).unwrap(), Phase::MINUS_ONE);
        let s4 = build("sphere:4");
        let g = PhaseFn::new(PhaseKind::EvenSemichar, &s4).unwrap();
        let s3 = Chain::new(3, s4.cell_boundary(4, 0));
        assert_eq!(reference_phase(&g, &s3).unwrap(), Phase::MINUS_ONE);
        assert_eq!(reference_phase(&g, &Chain::zero(&s4, 3)).unwrap(), Phase::ONE);
    }

    #[test]
    fn hypotheses_are_guarded() {
        let rp2 = build("tP:1");
        assert!(matches!(PhaseFn::new(PhaseKind::OddChi, &rp2), Err(Error::Parity(_))));
        assert!(matches!(PhaseFn::new(PhaseKind::EvenSemichar, &rp2), Err(Error::Topology(_))));
        let t2 = build("torus:2");
        assert!(PhaseFn::new(PhaseKind::EvenSemichar, &t2).is_err());
        let s3 = build("sphere:3");
        assert!(PhaseFn::new(PhaseKind::EvenSemichar, &s3).is_err());
    }

    #[test]
    fn non_cycle_rejected() {
        let t3 = build("torus:3");
        let f = PhaseFn::for_complex(&t3).unwrap();
        let one = Chain::new(2, BitVec::from_indices(t3.count(2), [0]));
        assert!(matches!(reference_phase(&f, &one), Err(Error::NotCycle(_))));
    }

    #[test]
    fn flips_are_consistent() {
        for s in ["torus:3", "sphere:3", "sphere:4", "sphere:2"] {
            let c = build(s);
            let f = PhaseFn::for_complex(&c).unwrap();
            assert_eq!(verify_flip_consistency(&f, 200, 7).unwrap(), Ok(()), "{s}");
        }
    }

    #[test]
    fn table_small() {
        let rows = theorem_a_table(3).unwrap();
        let got: Vec<(u64, u64)> = rows.iter().map(|r| (r.ds, r.tc)).collect();
        assert_eq!(got, vec![(1, 2), (2, 4), (4, 8)]);
        assert!(table_text(&rows).lines().count() == 4);
        assert!(table_csv(&rows).starts_with("t,dim_ds"));
        assert!(theorem_a_table(7).is_err());
    }

    #[test]
    fn diagonal_loops_on_torus() {
        let t2 = build("torus:2:4");
        let a = simple_loop(&t2, (1, 1)).unwrap();
        let b = simple_loop(&t2, (1, -1)).unwrap();
        assert_ne!(a, b);
        assert!(crate::homology::homologous(&t2, &a, &b));
        assert_eq!(crate::homology::loop_components(&t2, &a).unwrap().len(), 1);
        assert_eq!(transport_phase(&t2, &a, &b).unwrap(), Phase::MINUS_ONE);
        assert_eq!(transport_phase(&t2, &a, &a).unwrap(), Phase::ONE);
    }
}
