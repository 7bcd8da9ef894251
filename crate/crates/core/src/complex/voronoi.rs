//! Voronoi cellulations of the flat torus `[0,1)^d`, built as the dual of
//! the periodic Delaunay triangulation.
//!
//! Points live on an integer grid of side [`VORONOI_SCALE`] so that the
//! orientation and in-sphere predicates are evaluated exactly in `i128`.
//! Floating point is only used to discard candidates far from a sphere.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CellComplex, Geometry, Provenance};
use crate::error::{Error, Result};

pub const VORONOI_SCALE: i64 = 1 << 18;

/// Points in the unit torus stored as integer multiples of `1/VORONOI_SCALE`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    pub seed: Option<u64>,
}

impl PointSet {
    pub fn random(dim: usize, n: usize, seed: u64) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::Parameter(format!("Voronoi generator supports d = 2 or 3, got {dim}")));
        }
        if n == 0 {
            return Err(Error::Parameter("need at least one point".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n).map(|_| (0..dim).map(|_| rng.random_range(0..VORONOI_SCALE)).collect()).collect();
        let ps = Self { dim, points, seed: Some(seed) };
        ps.check_distinct()?;
        Ok(ps)
    }

    /// Builds a point set from coordinates in `[0,1)`, rounded to the grid.
    pub fn from_unit(dim: usize, coords: &[Vec<f64>]) -> Result<Self> {
        let points = coords
            .iter()
            .map(|p| {
                assert_eq!(p.len(), dim);
                p.iter().map(|&x| ((x.rem_euclid(1.0)) * VORONOI_SCALE as f64).round() as i64 % VORONOI_SCALE).collect()
            })
            .collect();
        let ps = Self { dim, points, seed: None };
        ps.check_distinct()?;
        Ok(ps)
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (i, p) in self.points.iter().enumerate() {
            if let Some(j) = seen.insert(p.clone(), i) {
                return Err(Error::GeneralPosition { reason: "coincident points".into(), points: vec![j, i] });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A lifted point: index into the point set plus an integer translation.
type Lift = (usize, [i64; 3]);

fn lifted_coords(ps: &PointSet, l: &Lift) -> [i64; 3] {
    let mut out = [0i64; 3];
    for k in 0..ps.dim {
        out[k] = ps.points[l.0][k] + l.1[k] * VORONOI_SCALE;
    }
    out
}

fn det(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        n => {
            let mut acc = 0i128;
            for col in 0..n {
                if m[0][col] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &v)| v).collect())
                    .collect();
                let term = m[0][col] * det(&minor);
                acc += if col % 2 == 0 { term } else { -term };
            }
            acc
        }
    }
}

fn orientation(d: usize, pts: &[[i64; 3]]) -> i128 {
    let m: Vec<Vec<i128>> = pts[1..].iter().map(|p| (0..d).map(|k| (p[k] - pts[0][k]) as i128).collect()).collect();
    det(&m)
}

/// Raw lifted determinant; its sign times the orientation sign times
/// [`insphere_convention`] is positive iff `x` is strictly inside.
fn insphere_raw(d: usize, simplex: &[[i64; 3]], x: &[i64; 3]) -> i128 {
    let m: Vec<Vec<i128>> = simplex
        .iter()
        .map(|p| {
            let diff: Vec<i128> = (0..d).map(|k| (p[k] - x[k]) as i128).collect();
            let sq: i128 = diff.iter().map(|v| v * v).sum();
            diff.into_iter().chain(std::iter::once(sq)).collect()
        })
        .collect();
    det(&m)
}

fn insphere_convention(d: usize) -> i128 {
    let s = 1 << 10;
    let mut simplex = vec![[0i64; 3]];
    for k in 0..d {
        let mut p = [0i64; 3];
        p[k] = s;
        simplex.push(p);
    }
    let inside = [1i64, 1, 1];
    (insphere_raw(d, &simplex, &inside) * orientation(d, &simplex)).signum()
}

/// Sign of the in-sphere test: `1` inside, `0` on, `-1` outside.
fn insphere(d: usize, simplex: &[[i64; 3]], x: &[i64; 3], convention: i128) -> i128 {
    (insphere_raw(d, simplex, x) * orientation(d, simplex).signum() * convention).signum()
}

fn circumsphere(d: usize, pts: &[[i64; 3]]) -> Option<(Vec<f64>, f64)> {
    // Solve 2 (p_k − p_0) · c = |p_k|² − |p_0|² relative to p_0.
    let p0 = pts[0];
    let rows: Vec<Vec<f64>> = pts[1..]
        .iter()
        .map(|p| {
            let diff: Vec<f64> = (0..d).map(|k| (p[k] - p0[k]) as f64).collect();
            let rhs = diff.iter().map(|v| v * v).sum::<f64>() / 2.0;
            diff.into_iter().chain(std::iter::once(rhs)).collect()
        })
        .collect();
    let mut a = rows;
    for col in 0..d {
        let piv = (col..d).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..d {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=d {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let rel: Vec<f64> = (0..d).map(|k| a[k][d] / a[k][k]).collect();
    let r = rel.iter().map(|v| v * v).sum::<f64>().sqrt();
    let center = (0..d).map(|k| rel[k] + p0[k] as f64).collect();
    Some((center, r))
}

/// Delaunay simplices containing the unshifted copy of point `i`.
fn star(ps: &PointSet, i: usize, convention: i128) -> Result<Vec<Vec<Lift>>> {
    let d = ps.dim;
    let s = VORONOI_SCALE as f64;
    let n = ps.len() as f64;
    let mut radius = 2.5 * s * n.powf(-1.0 / d as f64);
    let origin: Lift = (i, [0; 3]);
    let xi = lifted_coords(ps, &origin);
    loop {
        if radius > 3.0 * s {
            return Err(Error::GeneralPosition {
                reason: format!("Delaunay star of point {i} did not close"),
                points: vec![i],
            });
        }
        let reach = (radius / s).ceil() as i64 + 1;
        let mut cands: Vec<(Lift, [i64; 3])> = Vec::new();
        let shifts: Vec<[i64; 3]> = shift_range(d, reach);
        for j in 0..ps.len() {
            for z in &shifts {
                let l: Lift = (j, *z);
                if l == origin {
                    continue;
                }
                let x = lifted_coords(ps, &l);
                let dist2: f64 = (0..d).map(|k| ((x[k] - xi[k]) as f64).powi(2)).sum();
                if dist2 <= radius * radius {
                    cands.push((l, x));
                }
            }
        }
        let mut simplices: Vec<Vec<Lift>> = Vec::new();
        let mut combo = vec![0usize; d];
        for_each_combination(cands.len(), d, &mut combo, &mut |idx: &[usize]| -> Result<()> {
            let mut pts = vec![xi];
            pts.extend(idx.iter().map(|&c| cands[c].1));
            if orientation(d, &pts) == 0 {
                return Ok(());
            }
            let Some((center, r)) = circumsphere(d, &pts) else {
                return Ok(());
            };
            if 2.0 * r * (1.0 + 1e-9) >= radius {
                return Ok(());
            }
            let mut on_sphere = Vec::new();
            for (c, (l, x)) in cands.iter().enumerate() {
                if idx.contains(&c) {
                    continue;
                }
                let dist2: f64 = (0..d).map(|k| (x[k] as f64 - center[k]).powi(2)).sum();
                let r2 = r * r;
                if dist2 > r2 * (1.0 + 1e-7) + 1.0 {
                    continue;
                }
                if dist2 < r2 * (1.0 - 1e-7) - 1.0 {
                    return Ok(());
                }
                match insphere(d, &pts, x, convention) {
                    1 => return Ok(()),
                    0 => on_sphere.push(l.0),
                    _ => {}
                }
            }
            if !on_sphere.is_empty() {
                let mut points: Vec<usize> =
                    std::iter::once(i).chain(idx.iter().map(|&c| cands[c].0 .0)).chain(on_sphere).collect();
                points.sort_unstable();
                points.dedup();
                return Err(Error::GeneralPosition {
                    reason: format!("{} or more points on a common empty sphere", d + 2),
                    points,
                });
            }
            let mut simplex: Vec<Lift> = std::iter::once(origin).chain(idx.iter().map(|&c| cands[c].0)).collect();
            simplex.sort_unstable();
            simplices.push(simplex);
            Ok(())
        })?;
        if star_is_closed(&simplices, &origin) {
            return Ok(simplices);
        }
        radius *= 1.5;
    }
}

fn shift_range(d: usize, reach: i64) -> Vec<[i64; 3]> {
    let mut out = vec![[0i64; 3]];
    for k in 0..d {
        out = out
            .into_iter()
            .flat_map(|z| {
                (-reach..=reach).map(move |t| {
                    let mut w = z;
                    w[k] = t;
                    w
                })
            })
            .collect();
    }
    out
}

fn for_each_combination(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    fn rec(
        start: usize,
        depth: usize,
        n: usize,
        k: usize,
        buf: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Result<()>,
    ) -> Result<()> {
        if depth == k {
            return f(&buf[..k]);
        }
        for i in start..n {
            buf[depth] = i;
            rec(i + 1, depth + 1, n, k, buf, f)?;
        }
        Ok(())
    }
    rec(0, 0, n, k, buf, f)
}

/// Every facet through `origin` must lie in exactly two star simplices.
fn star_is_closed(simplices: &[Vec<Lift>], origin: &Lift) -> bool {
    if simplices.is_empty() {
        return false;
    }
    let mut count: HashMap<Vec<Lift>, usize> = HashMap::new();
    for s in simplices {
        for skip in 0..s.len() {
            if s[skip] == *origin {
                continue;
            }
            let facet: Vec<Lift> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &l)| l).collect();
            *count.entry(facet).or_default() += 1;
        }
    }
    count.values().all(|&c| c == 2)
}

/// Canonical representative of a lifted simplex modulo translation, and the
/// translation that was removed.
fn canonical(simplex: &[Lift]) -> (Vec<Lift>, [i64; 3]) {
    let anchor = *simplex.iter().min().expect("nonempty simplex");
    let shift = anchor.1;
    let mut out: Vec<Lift> =
        simplex.iter().map(|&(j, z)| (j, [z[0] - shift[0], z[1] - shift[1], z[2] - shift[2]])).collect();
    out.sort_unstable();
    (out, shift)
}

fn translate(simplex: &[Lift], by: [i64; 3]) -> Vec<Lift> {
    let mut out: Vec<Lift> = simplex.iter().map(|&(j, z)| (j, [z[0] - by[0], z[1] - by[1], z[2] - by[2]])).collect();
    out.sort_unstable();
    out
}

/// The Voronoi cellulation of the flat torus defined by `points`.
///
/// Returns [`Error::GeneralPosition`] naming the offending points if an empty
/// sphere passes through more than `d+1` of them. No perturbation is applied.
pub fn torus_voronoi(points: &PointSet) -> Result<CellComplex> {
    let d = points.dim;
    if !(2..=3).contains(&d) {
        return Err(Error::Parameter(format!("Voronoi generator supports d = 2 or 3, got {d}")));
    }
    let convention = insphere_convention(d);
    let stars: Vec<Vec<Vec<Lift>>> =
        (0..points.len()).into_par_iter().map(|i| star(points, i, convention)).collect::<Result<_>>()?;
    let mut tops: BTreeSet<Vec<Lift>> = BTreeSet::new();
    for st in &stars {
        for s in st {
            tops.insert(canonical(s).0);
        }
    }
    // Classes of Delaunay faces by vertex count, and for each class the
    // lifted cofaces that contain its canonical representative.
    let mut classes: Vec<BTreeMap<Vec<Lift>, BTreeSet<Vec<Lift>>>> = vec![BTreeMap::new(); d + 2];
    for t in &tops {
        for mask in 1u32..(1 << (d + 1)) {
            let f: Vec<Lift> = (0..=d).filter(|&b| mask >> b & 1 == 1).map(|b| t[b]).collect();
            let (key, shift) = canonical(&f);
            let entry = classes[f.len()].entry(key).or_default();
            if f.len() <= d {
                for extra in (0..=d).filter(|&b| mask >> b & 1 == 0) {
                    let mut g = f.clone();
                    g.push(t[extra]);
                    entry.insert(translate(&g, shift));
                }
            }
        }
    }
    let ids: Vec<HashMap<Vec<Lift>, usize>> =
        classes.iter().map(|m| m.keys().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
    let mut cells: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
    let mut anchors: Vec<Vec<Vec<f64>>> = vec![Vec::new(); d + 1];
    let s = VORONOI_SCALE as f64;
    for size in 1..=d + 1 {
        let k = d + 1 - size;
        for (key, cofaces) in &classes[size] {
            let faces: Vec<usize> = cofaces.iter().map(|g| ids[size + 1][&canonical(g).0]).collect();
            cells[k].push(faces);
            let mut bary = vec![0.0; d];
            for l in key {
                let x = lifted_coords(points, l);
                for (b, &xk) in bary.iter_mut().zip(&x[..d]) {
                    *b += xk as f64 / s / size as f64;
                }
            }
            anchors[k].push(bary);
        }
    }
    for k in 1..=d {
        for f in cells[k].iter_mut() {
            f.sort_unstable();
        }
    }
    debug_assert_eq!(cells[d].len(), points.len());
    Ok(CellComplex::new(cells, Provenance::Voronoi)?.with_geometry(Geometry { period: Some(1.0), anchors }))
}
