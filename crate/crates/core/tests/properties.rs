use std::sync::OnceLock;

use gds_core::circuit::{build_gates, circuit_phase};
use gds_core::complex::{
    boundary_sphere, builtin_manifold, dual_of_triangulation, torus_voronoi, validate_generic, ManifoldSpec, PointSet,
    Triangulation,
};
use gds_core::f2linalg::{rank_nullspace, subspace_intersection_dim};
use gds_core::homology::{betti, homology_sector_reps};
use gds_core::model::{flip, random_order, sweep_sign_ordered, Model, PlaquetteLocal, Plaquettes};
use gds_core::operators::{balloon_dual_commute, ds2_sign_with_disk, interleaved_chords_sphere, Balloon, DualLoop};
use gds_core::wavefunction::{reference_phase, PhaseFn};
use gds_core::{BitVec, CellComplex, Chain, F2Matrix, Phase, Subspace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn build(s: &str) -> CellComplex {
    builtin_manifold(&ManifoldSpec::parse(s).unwrap()).unwrap()
}

struct Fixtures {
    surfaces: Vec<CellComplex>,
    odd: Vec<CellComplex>,
    even: Vec<CellComplex>,
}

fn fixtures() -> &'static Fixtures {
    static F: OnceLock<Fixtures> = OnceLock::new();
    F.get_or_init(|| {
        let v2 = torus_voronoi(&PointSet::random(2, 25, 3).unwrap()).unwrap();
        let v3 = torus_voronoi(&PointSet::random(3, 20, 0).unwrap()).unwrap();
        Fixtures {
            surfaces: vec![build("torus:2"), build("tP:1"), build("tP:3"), build("genus:2"), build("klein"), v2],
            odd: vec![build("torus:3"), build("sphere:3"), v3],
            even: vec![build("sphere:2"), build("sphere:4"), build("tP:2"), build("torus:2")],
        }
    })
}

fn all() -> Vec<&'static CellComplex> {
    let f = fixtures();
    f.surfaces.iter().chain(&f.odd).chain(&f.even).collect()
}

fn random_cycle(c: &CellComplex, rng: &mut ChaCha8Rng) -> Chain {
    let d = c.dim();
    let reps = homology_sector_reps(c, d - 1).unwrap();
    let mut s = reps.reps[rng.random_range(0..reps.reps.len())].clone();
    for x in 0..c.count(d) {
        if rng.random_bool(0.3) {
            s.bits.xor_assign(&c.cell_boundary(d, x));
        }
    }
    s
}

fn bits(len: usize) -> impl Strategy<Value = BitVec> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| BitVec::from_bools(&b))
}

fn subspace(n: usize) -> impl Strategy<Value = Subspace> {
    proptest::collection::vec(bits(n), 0..=n).prop_map(move |v| Subspace::span(n, v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_dim_symmetric_and_bounded(u in subspace(7), v in subspace(7)) {
        let a = subspace_intersection_dim(&u, &v).unwrap();
        prop_assert_eq!(a, subspace_intersection_dim(&v, &u).unwrap());
        prop_assert!(a <= u.dim().min(v.dim()));
        prop_assert_eq!(a + u.sum(&v).unwrap().dim(), u.dim() + v.dim());
    }

    #[test]
    fn rank_nullity(rows in proptest::collection::vec(bits(9), 1..8)) {
        let m = F2Matrix::from_rows(9, rows);
        let (rank, null) = rank_nullspace(&m);
        prop_assert_eq!(rank + null.dim(), 9);
        for v in null.vectors() {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn boundary_of_boundary_vanishes(idx in 0usize..15) {
        let cs = all();
        let c = cs[idx % cs.len()];
        for k in 2..=c.dim() {
            prop_assert!(c.boundary_matrix(k - 1).mul(&c.boundary_matrix(k)).unwrap().is_zero());
        }
    }

    #[test]
    fn cycles_are_embedded(idx in 0usize..15, seed in any::<u64>()) {
        let cs = all();
        let c = cs[idx % cs.len()];
        let d = c.dim();
        let e = random_cycle(c, &mut ChaCha8Rng::seed_from_u64(seed));
        for v in 0..c.count(d - 2) {
            let n = c.cofaces(d - 2, v).iter().filter(|&&f| e.bits.get(f)).count();
            prop_assert!(n == 0 || n == 2);
        }
    }

    #[test]
    fn cell_boundaries_are_generic(idx in 0usize..15, cell in any::<usize>()) {
        let cs = all();
        let c = cs[idx % cs.len()];
        let d = c.dim();
        let b = boundary_sphere(c, cell % c.count(d)).unwrap();
        prop_assert!(validate_generic(&b).passes());
        prop_assert_eq!(b.euler_char(), if d % 2 == 1 { 2 } else { 0 });
    }

    #[test]
    fn bounding_overlaps_have_even_chi(idx in 0usize..15, seed in any::<u64>()) {
        let cs = all();
        let c = cs[idx % cs.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_cycle(c, &mut rng);
        let x = rng.random_range(0..c.count(c.dim()));
        let (_, _, both) = PlaquetteLocal::new(c, x).up_down_chi(&e.bits);
        prop_assert_eq!(both.rem_euclid(2), 0);
    }

    #[test]
    fn even_sign_identity(idx in 0usize..4, seed in any::<u64>()) {
        let c = &fixtures().even[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_cycle(c, &mut rng);
        let x = rng.random_range(0..c.count(c.dim()));
        let (up, _, both) = PlaquetteLocal::new(c, x).up_down_chi(&e.bits);
        prop_assert_eq!(Phase::minus_one_pow(up), Phase::i_pow(both));
    }

    #[test]
    fn odd_flips_change_chi_evenly(idx in 0usize..3, seed in any::<u64>()) {
        let c = &fixtures().odd[idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_cycle(c, &mut rng);
        let x = rng.random_range(0..c.count(c.dim()));
        let (after, f) = flip(c, x, &e, Model::Gds).unwrap();
        let delta = c.chain_closure(&after).euler_char() - c.chain_closure(&e).euler_char();
        prop_assert_eq!(delta.rem_euclid(2), 0);
        prop_assert_eq!(Phase::i_pow(delta), f.phase);
    }

    #[test]
    fn circuit_phase_is_i_chi(idx in 0usize..3, seed in any::<u64>()) {
        let c = &fixtures().odd[idx];
        let gates = build_gates(c).unwrap();
        let e = random_cycle(c, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(circuit_phase(&gates, &e), Phase::i_pow(c.chain_closure(&e).euler_char()));
    }

    #[test]
    fn odd_reference_phase_is_unit(idx in 0usize..3, seed in any::<u64>()) {
        let c = &fixtures().odd[idx];
        let f = PhaseFn::for_complex(c).unwrap();
        let e = random_cycle(c, &mut ChaCha8Rng::seed_from_u64(seed));
        let p = reference_phase(&f, &e).unwrap();
        let z = p.to_complex();
        prop_assert_eq!(z.norm_sqr(), 1);
    }

    #[test]
    fn balloon_dual_parity(idx in 0usize..15, seed in any::<u64>()) {
        let cs = all();
        let c = cs[idx % cs.len()];
        let d = c.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = Balloon::new(c, random_cycle(c, &mut rng)).unwrap();
        // A random walk through adjacent top cells, closed when it returns.
        let mut cells = vec![rng.random_range(0..c.count(d))];
        for _ in 0..rng.random_range(1..12) {
            let here = *cells.last().unwrap();
            let f = c.faces(d, here)[rng.random_range(0..c.faces(d, here).len())];
            let next = c.cofaces(d - 1, f).iter().copied().find(|&y| y != here);
            if let Some(y) = next { cells.push(y); }
        }
        prop_assume!(cells.len() > 1);
        let lp = DualLoop::new(c, cells, false).unwrap();
        // X on the support and Z on the crossings: compare both orders on a basis state.
        let state = random_cycle(c, &mut rng);
        let z = lp.crossing_chain(c);
        let zx = Phase::sign(z.bits.dot(&state.bits.xor(&l.support.bits)));
        let xz = Phase::sign(z.bits.dot(&state.bits));
        prop_assert_eq!(balloon_dual_commute(c, &l, &lp), zx == xz);
    }
}

#[test]
fn betti_additive_on_disjoint_union() {
    let a = build("torus:2");
    let b = build("tP:1");
    let mut faces = a.face_lists().to_vec();
    let off: Vec<usize> = a.counts();
    for (k, level) in b.face_lists().iter().enumerate() {
        let shift = if k == 0 { 0 } else { off[k - 1] };
        faces[k].extend(level.iter().map(|f| f.iter().map(|x| x + shift).collect::<Vec<_>>()));
    }
    let u = CellComplex::new(faces, gds_core::complex::Provenance::Builtin).unwrap();
    let (ba, bb, bu) = (betti(&a).unwrap(), betti(&b).unwrap(), betti(&u).unwrap());
    for k in 0..=2 {
        assert_eq!(bu.get(k), ba.get(k) + bb.get(k));
    }
    assert_eq!(u.component_count(), 2);
    let g = gds_core::model::ground_degeneracy(&u, Model::Gtc).unwrap().gsd;
    assert_eq!(g, 4 * 2);
}

#[test]
fn sweep_independent_of_order_and_representative() {
    let f = fixtures();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for c in f.surfaces.iter().chain(&f.odd).chain(&f.even) {
        let d = c.dim();
        let plaq = Plaquettes::new(c);
        let reps = homology_sector_reps(c, d - 1).unwrap();
        for rep in &reps.reps {
            let natural: Vec<usize> = (0..plaq.len()).collect();
            let want = sweep_sign_ordered(c, &plaq, rep, &natural).unwrap();
            for s in 0..20 {
                let order = random_order(c, s);
                assert_eq!(sweep_sign_ordered(c, &plaq, rep, &order).unwrap(), want);
            }
            for _ in 0..5 {
                let mut other = rep.clone();
                for x in 0..plaq.len() {
                    if rng.random_bool(0.5) {
                        other.bits.xor_assign(&plaq.locals[x].boundary);
                    }
                }
                assert_eq!(sweep_sign_ordered(c, &plaq, &other, &natural).unwrap(), want);
            }
        }
    }
}

#[test]
fn dual_preserves_euler_characteristic() {
    let t = Triangulation::new(2, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
    let c = dual_of_triangulation(&t).unwrap();
    assert_eq!(c.euler_char(), 4 - 6 + 4);
    let classical = [
        ("sphere:2", 2),
        ("sphere:3", 0),
        ("sphere:4", 2),
        ("torus:2", 0),
        ("torus:3", 0),
        ("tP:1", 1),
        ("tP:4", -2),
        ("genus:2", -2),
        ("klein", 0),
    ];
    for (s, chi) in classical {
        assert_eq!(build(s).euler_char(), chi, "{s}");
    }
}

#[test]
fn disk_choice_does_not_change_surface_sign() {
    let (c, l, _) = interleaved_chords_sphere().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let mut a = BitVec::zeros(c.count(1));
        for f in 0..c.count(2) {
            if rng.random_bool(0.5) {
                a.xor_assign(&c.cell_boundary(2, f));
            }
        }
        let a = Chain::new(1, a);
        let (Ok(x), Ok(y)) = (ds2_sign_with_disk(&c, &l, &a, 0), ds2_sign_with_disk(&c, &l, &a, 1)) else {
            continue;
        };
        assert_eq!(x.phase, y.phase);
    }
}
