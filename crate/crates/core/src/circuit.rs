//! Diagonal phase circuit taking the odd-dimensional GDS to the GTC.
//!
//! Each cell of dimension `j < d` carries a gate that multiplies a basis
//! state by `+i` (j even) or `−i` (j odd) when the cell lies in the closure
//! of the state, so the product of all gates is `i^{χ(E)}`.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitvec::BitVec;
use crate::complex::{CellComplex, Chain};
use crate::error::{Error, Result};
use crate::homology::homology_sector_reps;
use crate::model::{Model, Plaquettes};
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseGate {
    pub j: usize,
    pub cell: usize,
    /// `(d−1)`-cells whose closure contains the cell.
    pub support: BitVec,
    pub phase: Phase,
}

impl PhaseGate {
    pub fn fires(&self, e: &Chain) -> bool {
        self.support.intersects(&e.bits)
    }
}

fn require_odd(c: &CellComplex) -> Result<()> {
    if c.dim().is_multiple_of(2) {
        return Err(Error::Parity(format!("the phase circuit needs odd d, got {}", c.dim())));
    }
    Ok(())
}

pub fn build_gates(c: &CellComplex) -> Result<Vec<PhaseGate>> {
    require_odd(c)?;
    let d = c.dim();
    let top = d - 1;
    let mut gates = Vec::new();
    for j in 0..d {
        for cell in 0..c.count(j) {
            let mut level = BitVec::from_indices(c.count(j), [cell]);
            for k in j..top {
                let mut up = BitVec::zeros(c.count(k + 1));
                for x in level.iter_ones() {
                    for &y in c.cofaces(k, x) {
                        up.set(y, true);
                    }
                }
                level = up;
            }
            gates.push(PhaseGate {
                j,
                cell,
                support: level,
                phase: if j % 2 == 0 { Phase::I } else { Phase::MINUS_I },
            });
        }
    }
    Ok(gates)
}

/// Accumulated phase of all gates on a basis state.
pub fn circuit_phase(gates: &[PhaseGate], e: &Chain) -> Phase {
    gates.iter().filter(|g| g.fires(e)).map(|g| g.phase).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub rounds: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.rounds.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for round in &self.rounds {
            let ids: Vec<String> = round.iter().map(|g| g.to_string()).collect();
            let _ = writeln!(out, "{}", ids.join(" "));
        }
        out
    }

    /// Every gate appears once and gates sharing a round have disjoint supports.
    pub fn is_valid(&self, gates: &[PhaseGate]) -> bool {
        let mut seen = vec![false; gates.len()];
        for round in &self.rounds {
            for (i, &a) in round.iter().enumerate() {
                if a >= gates.len() || std::mem::replace(&mut seen[a], true) {
                    return false;
                }
                if round[..i].iter().any(|&b| gates[a].support.intersects(&gates[b].support)) {
                    return false;
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Total order on anchors: fractional part first, then lattice parity, then position.
fn anchor_key(p: &[f64]) -> Vec<i64> {
    const Q: f64 = 1e6;
    let mut key: Vec<i64> = p.iter().map(|x| ((x - x.floor()) * Q).round() as i64).collect();
    key.extend(p.iter().map(|x| (x.floor() as i64).rem_euclid(2)));
    key.extend(p.iter().map(|x| (x * Q).round() as i64));
    key
}

/// Greedy colouring of the support-overlap graph.
pub fn schedule(gates: &[PhaseGate], c: &CellComplex) -> Schedule {
    let mut order: Vec<usize> = (0..gates.len()).collect();
    if let Some(g) = c.geometry() {
        let keys: Vec<(usize, Vec<i64>)> = gates
            .iter()
            .map(|gate| {
                (
                    gate.j,
                    g.anchors.get(gate.j).and_then(|a| a.get(gate.cell)).map(|p| anchor_key(p)).unwrap_or_default(),
                )
            })
            .collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
    }
    let n_top = gates.first().map_or(0, |g| g.support.len());
    let mut by_cell: Vec<Vec<usize>> = vec![Vec::new(); n_top];
    for (i, g) in gates.iter().enumerate() {
        for f in g.support.iter_ones() {
            by_cell[f].push(i);
        }
    }
    let mut round_of = vec![usize::MAX; gates.len()];
    let mut rounds: Vec<Vec<usize>> = Vec::new();
    let mut taken: Vec<bool> = Vec::new();
    for &i in &order {
        taken.clear();
        taken.resize(rounds.len() + 1, false);
        for f in gates[i].support.iter_ones() {
            for &other in &by_cell[f] {
                if round_of[other] != usize::MAX {
                    taken[round_of[other]] = true;
                }
            }
        }
        let r = taken.iter().position(|t| !t).unwrap_or(rounds.len());
        if r == rounds.len() {
            rounds.push(Vec::new());
        }
        rounds[r].push(i);
        round_of[i] = r;
    }
    for round in &mut rounds {
        round.sort_unstable();
    }
    Schedule { rounds }
}

/// Largest number of other gates any gate conflicts with.
pub fn max_conflict_degree(gates: &[PhaseGate]) -> usize {
    (0..gates.len())
        .map(|a| (0..gates.len()).filter(|&b| b != a && gates[a].support.intersects(&gates[b].support)).count())
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    pub checks: usize,
    pub failures: usize,
    pub chi_mismatches: usize,
}

impl ConjugationReport {
    pub fn holds(&self) -> bool {
        self.failures == 0 && self.chi_mismatches == 0
    }
}

/// For every top cell and `samples` random cycles `E`, checks
/// `u(E′)·(GDS sign)·conj(u(E)) = 1` and `u(E) = i^{χ(E)}`.
pub fn verify_conjugation(c: &CellComplex, samples: usize, seed: u64) -> Result<ConjugationReport> {
    require_odd(c)?;
    let d = c.dim();
    let gates = build_gates(c)?;
    let plaq = Plaquettes::new(c);
    let reps = homology_sector_reps(c, d - 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConjugationReport { checks: 0, failures: 0, chi_mismatches: 0 };
    for _ in 0..samples {
        let mut e = reps.reps[rng.random_range(0..reps.reps.len())].clone();
        for x in 0..plaq.len() {
            if rng.random_bool(0.5) {
                e.bits.xor_assign(&plaq.locals[x].boundary);
            }
        }
        let u = circuit_phase(&gates, &e);
        if u != Phase::i_pow(c.chain_closure(&e).euler_char()) {
            report.chi_mismatches += 1;
        }
        for x in 0..plaq.len() {
            let mut after = e.bits.clone();
            let f = plaq.flip_in_place(x, &mut after, Model::Gds);
            let u2 = circuit_phase(&gates, &Chain::new(d - 1, after));
            report.checks += 1;
            if u2 * f.phase * u.conj() != Phase::ONE {
                report.failures += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{builtin_manifold, ManifoldSpec};

    fn build(s: &str) -> CellComplex {
        builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn gate_counts_and_phases() {
        let c = build("torus:3");
        let gates = build_gates(&c).unwrap();
        assert_eq!(gates.len(), c.count(0) + c.count(1) + c.count(2));
        assert_eq!(circuit_phase(&gates, &Chain::zero(&c, 2)), Phase::ONE);
        let shell = Chain::new(2, c.cell_boundary(3, 0));
        assert_eq!(circuit_phase(&gates, &shell), Phase::MINUS_ONE);
        assert!(gates.iter().all(|g| (g.j % 2 == 0) == (g.phase == Phase::I)));
    }

    #[test]
    fn even_dimension_rejected() {
        assert!(build_gates(&build("tP:1")).is_err());
        assert!(verify_conjugation(&build("sphere:4"), 1, 0).is_err());
    }

    #[test]
    fn schedules_are_proper() {
        for s in ["torus:3", "sphere:3"] {
            let c = build(s);
            let gates = build_gates(&c).unwrap();
            let sch = schedule(&gates, &c);
            assert!(sch.is_valid(&gates));
            assert!(sch.depth() >= 1 && sch.depth() <= 1 + max_conflict_degree(&gates));
            assert_eq!(sch.to_text().lines().count(), sch.depth());
        }
    }

    #[test]
    fn conjugation_small() {
        assert!(verify_conjugation(&build("sphere:3"), 20, 3).unwrap().holds());
    }
}
