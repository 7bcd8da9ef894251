//! Balloon operators (X on a codimension-one submanifold, with a sign),
//! the surface Wilson loop with its linking term, dual Z strings and the
//! semicharacteristic bookkeeping behind the even-dimensional sign.

use crate::bitvec::BitVec;
use crate::complex::{is_homology_manifold, CellComplex, Chain, Provenance, Subcomplex};
use crate::error::{Error, Result};
use crate::homology::{betti, loop_components, semicharacteristic};
use crate::model::hplus_violations;
use crate::phase::Phase;

/// A `(d−1)`-chain acted on by NOT, with its cycle status cached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Balloon {
    pub support: Chain,
    pub closed: bool,
}

impl Balloon {
    pub fn new(c: &CellComplex, support: Chain) -> Result<Self> {
        if support.dim + 1 != c.dim() || support.bits.len() != c.count(support.dim) {
            return Err(Error::Shape("balloon support must be a (d-1)-chain".into()));
        }
        let closed = hplus_violations(c, &support).is_empty();
        Ok(Self { support, closed })
    }
}

/// Closed subcomplexes entering the sign rules for a support `L` and a
/// basis state `α`.
#[derive(Clone, Debug)]
pub struct Overlap {
    /// `cl(L ∖ α)`.
    pub a: Subcomplex,
    /// `cl(L ∩ α)`.
    pub b: Subcomplex,
    /// `cl(α ∖ L)`.
    pub c: Subcomplex,
    /// Closure of the mod-2 boundary of `L ∩ α`.
    pub m: Subcomplex,
}

impl Overlap {
    pub fn new(cx: &CellComplex, l: &Chain, alpha: &Chain) -> Self {
        let common = l.and(alpha);
        let only_l = Chain::new(l.dim, l.bits.and_not(&alpha.bits));
        let only_a = Chain::new(l.dim, alpha.bits.and_not(&l.bits));
        let m = if l.dim == 0 { Subcomplex::empty(cx) } else { cx.chain_closure(&cx.chain_boundary(&common)) };
        Self { a: cx.chain_closure(&only_l), b: cx.chain_closure(&common), c: cx.chain_closure(&only_a), m }
    }

    /// `L` and `α` meet in general position: `M` is empty or a closed
    /// homology manifold of dimension `d − 2`.
    pub fn is_generic(&self, cx: &CellComplex) -> bool {
        if self.m.is_empty() {
            return true;
        }
        match self.m.to_complex(cx) {
            Ok((mc, _)) => cx.dim() >= 2 && is_homology_manifold(&mc, cx.dim() - 2),
            Err(_) => false,
        }
    }
}

fn generic_overlap(c: &CellComplex, l: &Chain, alpha: &Chain) -> Result<Overlap> {
    let ov = Overlap::new(c, l, alpha);
    if ov.is_generic(c) {
        Ok(ov)
    } else {
        Err(Error::Precondition("balloon and state are not in general position".into()))
    }
}

fn require_state(c: &CellComplex, alpha: &Chain) -> Result<()> {
    if alpha.dim + 1 != c.dim() || alpha.bits.len() != c.count(alpha.dim) {
        return Err(Error::Shape("state must be a (d-1)-chain".into()));
    }
    let v = hplus_violations(c, alpha);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::NotCycle(v.len()))
    }
}

fn even_k(c: &CellComplex) -> Result<usize> {
    let d = c.dim();
    if d == 2 {
        return Err(Error::Parity("d = 2 has its own sign rule; use ds2_wilson_sign".into()));
    }
    if !c.balloon_hypotheses() {
        return Err(Error::Topology(
            "even-dimensional balloon signs need a complex tagged with the homology-sphere hypotheses".into(),
        ));
    }
    Ok((d - 2) / 2)
}

pub fn balloon_sign(c: &CellComplex, l: &Balloon, alpha: &Chain) -> Result<Phase> {
    if !l.closed {
        return Err(Error::Precondition("balloon support is not closed".into()));
    }
    require_state(c, alpha)?;
    let ov = generic_overlap(c, &l.support, alpha)?;
    let full_l = c.chain_closure(&l.support);
    if c.dim() % 2 == 1 {
        return Ok(Phase::i_pow(full_l.euler_char()) * Phase::minus_one_pow(ov.b.euler_char()));
    }
    let k = even_k(c)?;
    Ok(Phase::sign(semicharacteristic(c, &full_l, k, 0)?) * Phase::i_pow(ov.m.euler_char()))
}

pub fn apply_balloon(c: &CellComplex, l: &Balloon, alpha: &Chain) -> Result<(Chain, Phase)> {
    let phase = balloon_sign(c, l, alpha)?;
    Ok((alpha.xor(&l.support), phase))
}

/// Result of an open balloon: new state, sign, violated vertex terms, and
/// whether conjugating `i` leaves the sign unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBalloonResult {
    pub state: Chain,
    pub phase: Phase,
    pub violations: Vec<usize>,
    pub conj_invariant: bool,
}

pub fn open_balloon_apply(c: &CellComplex, l: &Balloon, alpha: &Chain) -> Result<OpenBalloonResult> {
    let d = c.dim();
    if d % 2 == 1 || d < 4 {
        return Err(Error::Parity(format!("open balloons need d = 2k + 2 with k > 0, got d = {d}")));
    }
    if l.closed {
        return Err(Error::Precondition("open balloon support has empty boundary".into()));
    }
    require_state(c, alpha)?;
    let k = (d - 2) / 2;
    let ov = generic_overlap(c, &l.support, alpha)?;
    let s = semicharacteristic(c, &c.chain_closure(&l.support), k, 1)?;
    let chi_m = ov.m.euler_char();
    let phase = Phase::sign(s) * Phase::i_pow(chi_m);
    let conj = Phase::sign(s) * Phase::i_pow(chi_m).conj();
    let state = alpha.xor(&l.support);
    Ok(OpenBalloonResult { violations: hplus_violations(c, &state), state, phase, conj_invariant: phase == conj })
}

/// Both sides of the mod-2 semicharacteristic balance (even `d`) or the
/// Euler characteristic balance (odd `d`) for a balloon move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub chi_m: i64,
    pub holds: bool,
}

pub fn semichar_delta_check(c: &CellComplex, l: &Balloon, alpha: &Chain) -> Result<DeltaCheck> {
    if !l.closed {
        return Err(Error::Precondition("balloon support is not closed".into()));
    }
    require_state(c, alpha)?;
    let ov = generic_overlap(c, &l.support, alpha)?;
    let after = ov.a.union(&ov.c);
    let before = ov.b.union(&ov.c);
    let full_l = ov.a.union(&ov.b);
    let chi_m = ov.m.euler_char();
    let d = c.dim();
    if d % 2 == 1 {
        let lhs = after.euler_char() - before.euler_char();
        let rhs = full_l.euler_char() + chi_m - 2 * ov.b.euler_char();
        return Ok(DeltaCheck { lhs, rhs, chi_m, holds: lhs == rhs && chi_m == 0 });
    }
    if d < 4 {
        return Err(Error::Parity("the semicharacteristic balance needs d = 2k + 2 with k > 0".into()));
    }
    let k = (d - 2) / 2;
    let s = |x: &Subcomplex| -> Result<i64> { Ok(semicharacteristic(c, x, k, 0)? as i64) };
    let lhs = (s(&after)? + s(&before)?) % 2;
    let rhs = (s(&full_l)? + chi_m.div_euclid(2)).rem_euclid(2);
    Ok(DeltaCheck { lhs, rhs, chi_m, holds: chi_m % 2 == 0 && lhs == rhs })
}

/// Ingredients of the surface Wilson loop sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ds2Sign {
    pub phase: Phase,
    pub endpoints: usize,
    pub link: bool,
}

/// Side-of-loop labels: for each 2-cell, which complementary region of `l`
/// it lies in.
fn sides(c: &CellComplex, l: &Chain) -> Vec<usize> {
    let n = c.count(2);
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut stack = vec![s];
        while let Some(f) = stack.pop() {
            for &e in c.faces(2, f) {
                if l.bits.get(e) {
                    continue;
                }
                for &g in c.cofaces(1, e) {
                    if label[g] == usize::MAX {
                        label[g] = next;
                        stack.push(g);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

/// `(disk, other)` region labels; the disk is the region with fewer 2-cells.
fn disk_choice(side: &[usize]) -> (usize, usize) {
    let zeros = side.iter().filter(|&&s| s == 0).count();
    if zeros * 2 <= side.len() {
        (0, 1)
    } else {
        (1, 0)
    }
}

/// The surface Wilson loop sign `−i^{#∂(l∩α)}(−1)^{link}` on a 2-sphere.
pub fn ds2_wilson_sign(c: &CellComplex, l: &Chain, alpha: &Chain) -> Result<Ds2Sign> {
    let (disk, _) = ds2_prepare(c, l, alpha)?;
    ds2_sign_with_disk(c, l, alpha, disk)
}

fn ds2_prepare(c: &CellComplex, l: &Chain, alpha: &Chain) -> Result<(usize, usize)> {
    if c.dim() != 2 {
        return Err(Error::Shape(format!("surface Wilson loops need d = 2, got {}", c.dim())));
    }
    let b = betti(c)?;
    if b.b != vec![1, 0, 1] {
        return Err(Error::Topology(format!("ambient surface is not a 2-sphere: betti {b}")));
    }
    if l.dim != 1 || alpha.dim != 1 {
        return Err(Error::Shape("loop and state must be 1-chains".into()));
    }
    if loop_components(c, l)?.len() != 1 {
        return Err(Error::Precondition("l must be a single embedded loop".into()));
    }
    loop_components(c, alpha)?;
    loop_components(c, &alpha.xor(l))?;
    let side = sides(c, l);
    if side.iter().any(|&s| s > 1) {
        return Err(Error::Topology("loop does not separate the sphere into two disks".into()));
    }
    Ok(disk_choice(&side))
}

/// Same sign with an explicit choice of the disk region (0 or 1).
pub fn ds2_sign_with_disk(c: &CellComplex, l: &Chain, alpha: &Chain, disk: usize) -> Result<Ds2Sign> {
    let side = sides(c, l);
    let walk = &loop_components(c, l)?[0];
    let mut pos = vec![usize::MAX; c.count(0)];
    let mut v = {
        let f = c.faces(1, walk[0]);
        let g = c.faces(1, walk[walk.len().min(2) - 1]);
        if walk.len() > 1 && g.contains(&f[1]) {
            f[0]
        } else {
            f[1]
        }
    };
    for (i, &e) in walk.iter().enumerate() {
        pos[v] = i;
        let f = c.faces(1, e);
        v = if f[0] == v { f[1] } else { f[0] };
    }
    let common = l.and(alpha);
    let mut endpoint = BitVec::zeros(c.count(0));
    for e in common.bits.iter_ones() {
        for &u in c.faces(1, e) {
            endpoint.flip(u);
        }
    }
    let endpoints = endpoint.count_ones();
    // Arcs of α ∖ l, each from one loop vertex to another.
    let rest = alpha.bits.and_not(&l.bits);
    let mut used = BitVec::zeros(c.count(1));
    let mut inside: Vec<(usize, usize)> = Vec::new();
    let mut outside: Vec<(usize, usize)> = Vec::new();
    for start in 0..c.count(0) {
        if pos[start] == usize::MAX {
            continue;
        }
        for &e0 in c.cofaces(0, start) {
            if !rest.get(e0) || used.get(e0) {
                continue;
            }
            let region = side[c.cofaces(1, e0)[0]];
            let mut cur = e0;
            let mut u = start;
            loop {
                used.set(cur, true);
                let f = c.faces(1, cur);
                u = if f[0] == u { f[1] } else { f[0] };
                if pos[u] != usize::MAX {
                    break;
                }
                cur = match c.cofaces(0, u).iter().find(|&&x| rest.get(x) && !used.get(x)) {
                    Some(&x) => x,
                    None => return Err(Error::Precondition("state arc does not return to the loop".into())),
                };
            }
            let pair = (pos[start], pos[u]);
            if region == disk {
                inside.push(pair);
            } else {
                outside.push(pair);
            }
        }
    }
    let between = |x: usize, (a, b): (usize, usize)| {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        lo < x && x < hi
    };
    let mut link = false;
    for &p in &inside {
        for &q in &outside {
            if between(q.0, p) != between(q.1, p) {
                link = !link;
            }
        }
    }
    let phase = Phase::MINUS_ONE * Phase::i_pow(endpoints as i64) * Phase::sign(link);
    Ok(Ds2Sign { phase, endpoints, link })
}

/// A path of top cells through shared `(d−1)`-faces, with the face crossed
/// at each step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualLoop {
    pub cells: Vec<usize>,
    pub crossings: Vec<usize>,
    pub closed: bool,
}

impl DualLoop {
    /// Picks the lowest-id shared face at every step.
    pub fn new(c: &CellComplex, cells: Vec<usize>, closed: bool) -> Result<Self> {
        let d = c.dim();
        if cells.is_empty() {
            return Err(Error::Precondition("dual path needs at least one cell".into()));
        }
        for &x in &cells {
            c.check_id(d, x)?;
        }
        let mut steps: Vec<(usize, usize)> = cells.windows(2).map(|w| (w[0], w[1])).collect();
        if closed {
            steps.push((cells[cells.len() - 1], cells[0]));
        }
        let mut crossings = Vec::with_capacity(steps.len());
        for (a, b) in steps {
            let shared = c.shared_faces(d, a, b);
            match shared.first() {
                Some(&f) if a != b => crossings.push(f),
                _ => {
                    return Err(Error::Precondition(format!("cells {a} and {b} are not adjacent")));
                }
            }
        }
        Ok(Self { cells, crossings, closed })
    }

    /// The crossed `(d−1)`-cells, mod 2.
    pub fn crossing_chain(&self, c: &CellComplex) -> Chain {
        let mut bits = BitVec::zeros(c.count(c.dim() - 1));
        for &f in &self.crossings {
            bits.flip(f);
        }
        Chain::new(c.dim() - 1, bits)
    }
}

/// Action of a Z string on a basis state and its relation to the flip terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualDiagnostic {
    pub phase: Phase,
    /// Top cells whose flip term anticommutes with the string.
    pub anticommuting: Vec<usize>,
}

impl DualDiagnostic {
    pub fn commutes(&self) -> bool {
        self.anticommuting.is_empty()
    }
}

fn z_string(c: &CellComplex, crossing: &Chain, state: &Chain) -> DualDiagnostic {
    let phase = Phase::sign(crossing.bits.dot(&state.bits));
    let anticommuting = (0..c.count(c.dim())).filter(|&x| c.cell_boundary(c.dim(), x).dot(&crossing.bits)).collect();
    DualDiagnostic { phase, anticommuting }
}

pub fn dual_wilson_apply(c: &CellComplex, lp: &DualLoop, state: &Chain) -> Result<DualDiagnostic> {
    if !lp.closed {
        return Err(Error::Precondition("dual Wilson loop must be closed".into()));
    }
    Ok(z_string(c, &lp.crossing_chain(c), state))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcitationReport {
    pub violated: Vec<usize>,
    pub phase: Phase,
}

pub fn open_dual_arc_excite(c: &CellComplex, arc: &DualLoop, state: &Chain) -> Result<ExcitationReport> {
    if arc.closed {
        return Err(Error::Precondition("open dual arc expected, got a closed loop".into()));
    }
    let diag = z_string(c, &arc.crossing_chain(c), state);
    Ok(ExcitationReport { violated: diag.anticommuting, phase: diag.phase })
}

/// Whether a balloon and a Z string commute (`true`) or anticommute.
pub fn balloon_dual_commute(c: &CellComplex, l: &Balloon, lp: &DualLoop) -> bool {
    !l.support.bits.dot(&lp.crossing_chain(c).bits)
}

/// Two loops on a 2-sphere: a circle of eight edges with three chords inside
/// and one outside, and a state loop using two chords on opposite sides.
/// Returns the complex, the circle `l` and the state `α`.
pub fn interleaved_chords_sphere() -> Result<(CellComplex, Chain, Chain)> {
    let mut edges: Vec<Vec<usize>> = (0..8).map(|k| vec![k, (k + 1) % 8]).collect();
    // 8: v1v5, 9: v2v4, 10: v6v0 (inside); 11: v3v7 (outside).
    edges.extend([vec![1, 5], vec![2, 4], vec![6, 0], vec![3, 7]]);
    let faces = vec![
        vec![2, 3, 9],
        vec![1, 9, 4, 8],
        vec![5, 10, 0, 8],
        vec![6, 7, 10],
        vec![3, 4, 5, 6, 11],
        vec![7, 0, 1, 2, 11],
    ];
    let c =
        CellComplex::new(vec![vec![Vec::new(); 8], edges, faces], Provenance::Builtin)?.with_name("interleaved-chords");
    let l = Chain::from_cells(&c, 1, 0..8);
    let alpha = Chain::from_cells(&c, 1, [8, 5, 6, 11, 2, 1]);
    Ok((c, l, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{builtin_manifold, ManifoldSpec};
    use crate::model::{flip, Model};

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    fn nloops(c: &CellComplex, e: &Chain) -> usize {
        loop_components(c, e).unwrap().len()
    }

    #[test]
    fn odd_sign_on_cell_boundary() {
        let c = build("torus:3");
        let l = Balloon::new(&c, Chain::new(2, c.cell_boundary(3, 0))).unwrap();
        assert_eq!(balloon_sign(&c, &l, &l.support).unwrap(), Phase::MINUS_ONE);
        assert_eq!(balloon_sign(&c, &l, &Chain::zero(&c, 2)).unwrap(), Phase::MINUS_ONE);
        let (out, _) = apply_balloon(&c, &l, &l.support).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn cell_balloons_match_flips() {
        for name in ["torus:3", "sphere:3", "sphere:4"] {
            let c = build(name);
            let d = c.dim();
            let mut alpha = Chain::zero(&c, d - 1);
            for x in [0, 1, 3] {
                alpha.bits.xor_assign(&c.cell_boundary(d, x % c.count(d)));
            }
            let mut generic = 0;
            for x in 0..c.count(d) {
                let l = Balloon::new(&c, Chain::new(d - 1, c.cell_boundary(d, x))).unwrap();
                let (out, phase) = match apply_balloon(&c, &l, &alpha) {
                    Ok(r) => r,
                    Err(Error::Precondition(_)) => continue,
                    Err(e) => panic!("{e}"),
                };
                generic += 1;
                let (s, f) = flip(&c, x, &alpha, Model::Gds).unwrap();
                assert_eq!((out, phase), (s, f.phase), "{name} cell {x}");
            }
            assert!(generic > 0, "{name}");
        }
    }

    #[test]
    fn even_guards() {
        let s2 = build("sphere:2");
        let l = Balloon::new(&s2, Chain::new(1, s2.cell_boundary(2, 0))).unwrap();
        assert!(matches!(balloon_sign(&s2, &l, &Chain::zero(&s2, 1)), Err(Error::Parity(_))));
        let s4 = build("sphere:4").with_balloon_hypotheses(false);
        let l = Balloon::new(&s4, Chain::new(3, s4.cell_boundary(4, 0))).unwrap();
        assert!(matches!(balloon_sign(&s4, &l, &Chain::zero(&s4, 3)), Err(Error::Topology(_))));
    }

    #[test]
    fn interleaved_chords_give_plus_one() {
        let (c, l, alpha) = interleaved_chords_sphere().unwrap();
        let r = ds2_wilson_sign(&c, &l, &alpha).unwrap();
        assert_eq!((r.endpoints, r.link, r.phase), (4, true, Phase::ONE));
        assert_eq!(nloops(&c, &alpha), 1);
        assert_eq!(nloops(&c, &alpha.xor(&l)), 1);
        for disk in 0..2 {
            assert_eq!(ds2_sign_with_disk(&c, &l, &alpha, disk).unwrap().phase, Phase::ONE);
        }
    }

    #[test]
    fn trivial_surface_loops() {
        let (c, l, _) = interleaved_chords_sphere().unwrap();
        assert_eq!(ds2_wilson_sign(&c, &l, &Chain::zero(&c, 1)).unwrap().phase, Phase::MINUS_ONE);
        assert_eq!(ds2_wilson_sign(&c, &l, &l).unwrap().phase, Phase::MINUS_ONE);
        let two = Chain::new(1, c.cell_boundary(2, 0).xor(&c.cell_boundary(2, 3)));
        assert!(ds2_wilson_sign(&c, &two, &l).is_err());
    }

    #[test]
    fn surface_sign_matches_loop_count() {
        let (c, _, _) = interleaved_chords_sphere().unwrap();
        let faces = c.count(2);
        for lm in 1..(1u32 << faces) - 1 {
            let l = chain_of_faces(&c, lm);
            if loop_components(&c, &l).map(|v| v.len()) != Ok(1) {
                continue;
            }
            for am in 0..(1u32 << faces) {
                let a = chain_of_faces(&c, am);
                let (Ok(before), Ok(after)) = (loop_components(&c, &a), loop_components(&c, &a.xor(&l))) else {
                    continue;
                };
                let want = Phase::sign((after.len() + before.len()) % 2 == 1);
                assert_eq!(ds2_wilson_sign(&c, &l, &a).unwrap().phase, want, "l {lm:b} a {am:b}");
            }
        }
    }

    fn chain_of_faces(c: &CellComplex, mask: u32) -> Chain {
        let mut bits = BitVec::zeros(c.count(1));
        for f in 0..c.count(2) {
            if mask >> f & 1 == 1 {
                bits.xor_assign(&c.cell_boundary(2, f));
            }
        }
        Chain::new(1, bits)
    }

    #[test]
    fn delta_balance_on_small_spheres() {
        let c = build("sphere:4");
        let n = c.count(4);
        let (mut generic, mut skipped) = (0, 0);
        for lm in 1..(1u32 << n) - 1 {
            for am in 0..(1u32 << n) {
                let ch = |m: u32| {
                    let mut b = BitVec::zeros(c.count(3));
                    for x in 0..n {
                        if m >> x & 1 == 1 {
                            b.xor_assign(&c.cell_boundary(4, x));
                        }
                    }
                    Chain::new(3, b)
                };
                let l = Balloon::new(&c, ch(lm)).unwrap();
                match semichar_delta_check(&c, &l, &ch(am)) {
                    Ok(r) => {
                        generic += 1;
                        assert!(r.holds, "{lm} {am} {r:?}");
                    }
                    Err(Error::Precondition(_)) => skipped += 1,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert_eq!((generic, skipped), (2408, 1560));
    }

    #[test]
    fn dual_loops() {
        let c = build("torus:2");
        let f = c.faces(2, 0)[0];
        let pair = c.cofaces(1, f).to_vec();
        let lp = DualLoop::new(&c, pair.clone(), true).unwrap();
        let rep = crate::homology::homology_sector_reps(&c, 1).unwrap();
        for r in &rep.reps {
            let diag = dual_wilson_apply(&c, &lp, r).unwrap();
            assert!(diag.commutes());
        }
        assert!(DualLoop::new(&c, vec![0, 0], false).is_err());
        let arc = DualLoop::new(&c, pair, false).unwrap();
        let ex = open_dual_arc_excite(&c, &arc, &Chain::zero(&c, 1)).unwrap();
        assert_eq!(ex.violated.len(), 2);
        assert!(open_dual_arc_excite(&c, &lp, &Chain::zero(&c, 1)).is_err());
        let bad = Chain::from_cells(&c, 1, [f]);
        assert_eq!(z_string(&c, &arc.crossing_chain(&c), &bad).phase, Phase::MINUS_ONE);
    }

    #[test]
    fn open_balloon_guards() {
        let s4 = build("sphere:4");
        let faces = c_faces(&s4);
        let l = Balloon::new(&s4, Chain::from_cells(&s4, 3, [faces])).unwrap();
        let r = open_balloon_apply(&s4, &l, &Chain::zero(&s4, 3)).unwrap();
        assert!(r.conj_invariant);
        assert_eq!(r.violations, hplus_violations(&s4, &l.support));
        let closed = Balloon::new(&s4, Chain::new(3, s4.cell_boundary(4, 0))).unwrap();
        assert!(open_balloon_apply(&s4, &closed, &Chain::zero(&s4, 3)).is_err());
        let t3 = build("torus:3");
        let l3 = Balloon::new(&t3, Chain::from_cells(&t3, 2, [0])).unwrap();
        assert!(matches!(open_balloon_apply(&t3, &l3, &Chain::zero(&t3, 2)), Err(Error::Parity(_))));
    }

    fn c_faces(c: &CellComplex) -> usize {
        c.faces(4, 0)[0]
    }
}
