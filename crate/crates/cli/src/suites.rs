//! Named invariant suites for `verify`.

use gds_core::circuit::verify_conjugation;
use gds_core::complex::{subset_boundary_manifold_check, validate_generic};
use gds_core::ed::{ground_degeneracy_ed, verify_full_commutation, Variant, MAX_QUBITS};
use gds_core::f2linalg::{
    count_nonsingular_alternating, enumerate_max_isotropics, hyperbolic_form, lemma63_parity, no_twist_holds,
};
use gds_core::homology::{homology_sector_reps, two_sidedness_d2};
use gds_core::model::{ground_degeneracy, verify_commutation, verify_projector, Model, ProjectorCheck};
use gds_core::operators::{apply_balloon, semichar_delta_check, Balloon};
use gds_core::wavefunction::{reference_phase, verify_flip_consistency, PhaseFn};
use gds_core::{BitVec, CellComplex, Chain, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::table::Table;

pub const SUITES: [&str; 8] =
    ["commutation", "flips", "oracle", "genericity", "conjugation", "balloon", "survival", "isotropic"];

const DRAWS: usize = 1000;
const FLIP_STEPS: usize = 1000;
const FULL_COMMUTATION_QUBITS: usize = 18;
const SUBSETS: usize = 100;
const CONJUGATION_SAMPLES: usize = 50;
const BALLOON_TRIALS: usize = 100;
const LEMMA_SAMPLES: usize = 1000;

pub struct Outcome {
    pub table: Table,
    pub passed: bool,
}

struct Checks(Table, bool);

impl Checks {
    fn new() -> Self {
        Checks(Table::new(&["check", "result", "detail"]), true)
    }

    fn add(&mut self, name: &str, ok: bool, detail: String) {
        self.1 &= ok;
        self.0.push(vec![name.into(), if ok { "pass" } else { "fail" }.into(), detail]);
    }

    fn done(self) -> Outcome {
        Outcome { table: self.0, passed: self.1 }
    }
}

pub fn run(name: &str, c: Option<&CellComplex>, model: Model, seed: u64) -> Result<Outcome> {
    let need = || c.ok_or_else(|| Error::Parameter(format!("suite {name} needs --manifold")));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match name {
        "commutation" => commutation(need()?, &mut rng),
        "flips" => flips(need()?, seed),
        "oracle" => oracle(need()?),
        "genericity" => genericity(need()?, &mut rng),
        "conjugation" => conjugation(need()?, seed),
        "balloon" => balloon(need()?, &mut rng),
        "survival" => survival(need()?, model),
        "isotropic" => isotropic(&mut rng),
        _ => Err(Error::Parameter(format!("unknown suite {name:?}; known: {}", SUITES.join(", ")))),
    }
}

fn random_cycle(c: &CellComplex, rng: &mut ChaCha8Rng, p: f64) -> Result<Chain> {
    let d = c.dim();
    let reps = homology_sector_reps(c, d - 1)?;
    let mut s = reps.reps[rng.random_range(0..reps.reps.len())].clone();
    for x in 0..c.count(d) {
        if rng.random_bool(p) {
            s.bits.xor_assign(&c.cell_boundary(d, x));
        }
    }
    Ok(s)
}

fn commutation(c: &CellComplex, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let d = c.dim();
    let mut checks = Checks::new();
    let (mut bad_p, mut bad_c) = (0, 0);
    for _ in 0..DRAWS {
        let e = random_cycle(c, rng, 0.3)?;
        let x = rng.random_range(0..c.count(d));
        let y = rng.random_range(0..c.count(d));
        if verify_projector(c, x, &e)? != ProjectorCheck::Holds {
            bad_p += 1;
        }
        if !verify_commutation(c, x, y, &e)? {
            bad_c += 1;
        }
    }
    checks.add("projector", bad_p == 0, format!("{bad_p} of {DRAWS} draws fail"));
    checks.add("commutation", bad_c == 0, format!("{bad_c} of {DRAWS} draws fail"));
    let qubits = c.count(d - 1);
    if qubits <= FULL_COMMUTATION_QUBITS {
        for m in [Model::Gds, Model::Gtc] {
            let r = verify_full_commutation(c, m, Variant::Projected)?;
            checks.add(
                &format!("full commutation {m}"),
                r.holds(),
                format!("{} terms, {} pairs, {} noncommuting", r.terms, r.pairs, r.noncommuting.len()),
            );
        }
    }
    Ok(checks.done())
}

fn flips(c: &CellComplex, seed: u64) -> Result<Outcome> {
    let f = PhaseFn::for_complex(c)?;
    let mut checks = Checks::new();
    let detail = match verify_flip_consistency(&f, FLIP_STEPS, seed)? {
        Ok(()) => format!("{FLIP_STEPS} steps"),
        Err(m) => {
            format!("step {} cell {}: {} -> {} with flip phase {}", m.step, m.cell, m.before, m.after, m.flip_phase)
        }
    };
    checks.add("flip consistency", detail.ends_with("steps"), detail);
    Ok(checks.done())
}

fn oracle(c: &CellComplex) -> Result<Outcome> {
    let qubits = c.count(c.dim() - 1);
    if qubits > MAX_QUBITS {
        return Err(Error::SizeGuard(qubits, MAX_QUBITS));
    }
    let mut checks = Checks::new();
    for m in [Model::Gds, Model::Gtc] {
        let sweep = ground_degeneracy(c, m)?.gsd;
        let ed = ground_degeneracy_ed(c, m, Variant::Projected)?.degeneracy as u64;
        checks.add(&format!("ed vs sweep {m}"), sweep == ed, format!("sweep {sweep} ed {ed}"));
    }
    Ok(checks.done())
}

fn genericity(c: &CellComplex, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut checks = Checks::new();
    let r = validate_generic(c);
    let first = r.violations.first().map(|v| format!("; first: {v}")).unwrap_or_default();
    checks.add("generic cellulation", r.passes(), format!("{} violations{first}", r.violations.len()));
    let d = c.dim();
    let mut bad = 0;
    for _ in 0..SUBSETS {
        let bools: Vec<bool> = (0..c.count(d)).map(|_| rng.random_bool(0.5)).collect();
        if !subset_boundary_manifold_check(c, &BitVec::from_bools(&bools)) {
            bad += 1;
        }
    }
    checks.add("subset boundaries", bad == 0, format!("{bad} of {SUBSETS} subsets singular"));
    Ok(checks.done())
}

fn conjugation(c: &CellComplex, seed: u64) -> Result<Outcome> {
    let r = verify_conjugation(c, CONJUGATION_SAMPLES, seed)?;
    let mut checks = Checks::new();
    checks.add(
        "phase circuit conjugation",
        r.holds(),
        format!("{} checks, {} failures, {} chi mismatches", r.checks, r.failures, r.chi_mismatches),
    );
    Ok(checks.done())
}

fn balloon(c: &CellComplex, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let f = PhaseFn::for_complex(c)?;
    let mut checks = Checks::new();
    let (mut done, mut tried, mut delta_bad, mut phase_bad) = (0, 0, 0, 0);
    while done < BALLOON_TRIALS && tried < 200 * BALLOON_TRIALS {
        tried += 1;
        let p = rng.random_range(0.05..0.45);
        let l = Balloon::new(c, random_cycle(c, rng, p)?)?;
        let a = random_cycle(c, rng, p)?;
        let delta = match semichar_delta_check(c, &l, &a) {
            Ok(d) => d,
            Err(Error::Precondition(_)) => continue,
            Err(e) => return Err(e),
        };
        let (out, phase) = apply_balloon(c, &l, &a)?;
        if !delta.holds {
            delta_bad += 1;
        }
        if reference_phase(&f, &out)? != phase * reference_phase(&f, &a)? {
            phase_bad += 1;
        }
        done += 1;
    }
    checks.add("generic pairs found", done == BALLOON_TRIALS, format!("{done} of {tried} sampled"));
    checks.add("overlap identity", delta_bad == 0, format!("{delta_bad} failures"));
    checks.add("balloon preserves ground state", phase_bad == 0, format!("{phase_bad} failures"));
    Ok(checks.done())
}

fn survival(c: &CellComplex, model: Model) -> Result<Outcome> {
    if c.dim() != 2 {
        return Err(Error::Parity(format!("survival suite needs a surface, got dim {}", c.dim())));
    }
    let chi = c.euler_char();
    let mut checks = Checks::new();
    for r in ground_degeneracy(c, model)?.reports {
        let w1 = two_sidedness_d2(c, &r.rep)?.w1_eval;
        let predicted = model == Model::Gtc || (w1 as i64 + chi) % 2 == 0;
        checks.add(
            &format!("sector {}", r.sector),
            predicted == r.survives,
            format!("w1 {} chi {chi} sweep {} survives {}", w1 as u8, r.sweep_sign, r.survives),
        );
    }
    Ok(checks.done())
}

fn isotropic(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut checks = Checks::new();
    for j in 1..=4 {
        let q = hyperbolic_form(j);
        let iso = enumerate_max_isotropics(&q, j)?;
        let (mut n, mut bad) = (0, 0);
        let mut test = |a: usize, b: usize, c: usize| -> Result<()> {
            if no_twist_holds(&q, &iso[a], &iso[b], &iso[c])? {
                n += 1;
                if !lemma63_parity(&q, &iso[a], &iso[b], &iso[c])?.identity_holds {
                    bad += 1;
                }
            }
            Ok(())
        };
        if j <= 2 {
            for a in 0..iso.len() {
                for b in 0..iso.len() {
                    for c in 0..iso.len() {
                        test(a, b, c)?;
                    }
                }
            }
        } else {
            for _ in 0..LEMMA_SAMPLES {
                let k = iso.len();
                test(rng.random_range(0..k), rng.random_range(0..k), rng.random_range(0..k))?;
            }
        }
        let how = if j <= 2 { "exhaustive" } else { "sampled" };
        checks.add(
            &format!("parity identity dim {}", 2 * j),
            bad == 0,
            format!("{how}: {n} untwisted triples, {bad} violations"),
        );
    }
    for n in 1..=5 {
        let count = count_nonsingular_alternating(n)?;
        checks.add(&format!("evenness n={n}"), (count == 0) == (n % 2 == 1), format!("{count} nonsingular forms"));
    }
    Ok(checks.done())
}
