use std::fmt;
use std::str::FromStr;

use super::{dual_of_triangulation, torus_voronoi, CellComplex, PointSet, Provenance, Triangulation};
use crate::error::{Error, Result};

/// Named test spaces. Parsed from `name:params` strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifoldSpec {
    Sphere(usize),
    Torus {
        dim: usize,
        resolution: usize,
    },
    /// Connected sum of `t` projective planes.
    ProjectivePlanes(usize),
    Genus(usize),
    KleinBottle,
    TorusVoronoi {
        dim: usize,
        points: usize,
        seed: u64,
    },
    /// Square-lattice torus; 4-valent, so not generic.
    SquareTorus(usize),
    /// One-point compactification of the plane cut into four quadrants.
    FourQuadrant,
}

pub const DEFAULT_TORUS_RESOLUTION: usize = 3;
pub const DEFAULT_VORONOI_POINTS: usize = 25;

impl ManifoldSpec {
    /// Parses specs such as `sphere:4`, `torus:3`, `torus:3:5`, `tP:3`,
    /// `genus:2`, `klein`, `torus-voronoi:2`, `square-torus:4`, `four-quadrant`.
    /// Voronoi point count and seed default to 25 and 0; the CLI overrides them.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let nums: Vec<usize> = parts
            .map(|p| p.parse::<usize>().map_err(|_| Error::UnknownManifold(s.to_string())))
            .collect::<Result<_>>()?;
        let arg = |i: usize| nums.get(i).copied();
        let need = |i: usize| arg(i).ok_or_else(|| Error::UnknownManifold(format!("{s}: missing parameter")));
        let spec = match name {
            "sphere" => ManifoldSpec::Sphere(need(0)?),
            "torus" => ManifoldSpec::Torus { dim: need(0)?, resolution: arg(1).unwrap_or(DEFAULT_TORUS_RESOLUTION) },
            "tP" | "tp" => ManifoldSpec::ProjectivePlanes(need(0)?),
            "genus" => ManifoldSpec::Genus(need(0)?),
            "klein" | "klein_bottle" | "klein-bottle" => ManifoldSpec::KleinBottle,
            "torus-voronoi" | "torus_voronoi" => ManifoldSpec::TorusVoronoi {
                dim: need(0)?,
                points: arg(1).unwrap_or(DEFAULT_VORONOI_POINTS),
                seed: arg(2).unwrap_or(0) as u64,
            },
            "square-torus" => ManifoldSpec::SquareTorus(need(0)?),
            "four-quadrant" => ManifoldSpec::FourQuadrant,
            _ => return Err(Error::UnknownManifold(s.to_string())),
        };
        Ok(spec)
    }
}

impl FromStr for ManifoldSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldSpec::Sphere(d) => write!(f, "sphere:{d}"),
            ManifoldSpec::Torus { dim, resolution } => write!(f, "torus:{dim}:{resolution}"),
            ManifoldSpec::ProjectivePlanes(t) => write!(f, "tP:{t}"),
            ManifoldSpec::Genus(g) => write!(f, "genus:{g}"),
            ManifoldSpec::KleinBottle => write!(f, "klein"),
            ManifoldSpec::TorusVoronoi { dim, points, seed } => write!(f, "torus-voronoi:{dim}:{points}:{seed}"),
            ManifoldSpec::SquareTorus(n) => write!(f, "square-torus:{n}"),
            ManifoldSpec::FourQuadrant => write!(f, "four-quadrant"),
        }
    }
}

pub fn builtin_manifold(spec: &ManifoldSpec) -> Result<CellComplex> {
    let name = spec.to_string();
    let c = match *spec {
        ManifoldSpec::Sphere(d) => {
            if d == 0 {
                return Err(Error::Parameter("sphere dimension must be at least 1".into()));
            }
            dual_of_triangulation(&simplex_boundary(d)?)?.with_balloon_hypotheses(true)
        }
        ManifoldSpec::Torus { dim, resolution } => {
            if dim == 0 {
                return Err(Error::Parameter("torus dimension must be at least 1".into()));
            }
            if resolution < 3 {
                return Err(Error::Parameter(format!(
                    "torus resolution {resolution} is below 3; simplices would repeat vertices"
                )));
            }
            if dim > 4 {
                return Err(Error::Parameter("torus dimension above 4 is not supported".into()));
            }
            dual_of_triangulation(&kuhn_torus(dim, resolution)?)?
        }
        ManifoldSpec::ProjectivePlanes(t) => {
            if t == 0 {
                return Err(Error::Parameter("tP needs t ≥ 1".into()));
            }
            dual_of_triangulation(&surface_sum(&rp2_facets(), 6, t)?)?
        }
        ManifoldSpec::Genus(g) => {
            if g == 0 {
                dual_of_triangulation(&simplex_boundary(2)?)?.with_balloon_hypotheses(true)
            } else {
                dual_of_triangulation(&surface_sum(&torus7_facets(), 7, g)?)?
            }
        }
        ManifoldSpec::KleinBottle => dual_of_triangulation(&surface_sum(&rp2_facets(), 6, 2)?)?,
        ManifoldSpec::TorusVoronoi { dim, points, seed } => torus_voronoi(&PointSet::random(dim, points, seed)?)?,
        ManifoldSpec::SquareTorus(n) => square_torus(n)?,
        ManifoldSpec::FourQuadrant => four_quadrant_plane(),
    };
    let provenance = match spec {
        ManifoldSpec::TorusVoronoi { .. } => Provenance::Voronoi,
        _ => Provenance::Builtin,
    };
    Ok(c.with_name(name).with_provenance(provenance))
}

/// Boundary of the `(d+1)`-simplex.
pub(crate) fn simplex_boundary(d: usize) -> Result<Triangulation> {
    let n = d + 2;
    Triangulation::new(d, (0..n).map(|skip| (0..n).filter(|&v| v != skip).collect()).collect())
}

/// The minimal 6-vertex triangulation of the projective plane.
fn rp2_facets() -> Vec<Vec<usize>> {
    [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]]
        .iter()
        .map(|f| f.iter().map(|v| v - 1).collect())
        .collect()
}

/// The 7-vertex torus.
fn torus7_facets() -> Vec<Vec<usize>> {
    (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect()
}

/// Connected sum of `copies` copies of a closed surface triangulation. Each
/// step deletes a triangle from the running sum and one from the new copy and
/// identifies their boundaries.
fn surface_sum(piece: &[Vec<usize>], piece_vertices: usize, copies: usize) -> Result<Triangulation> {
    let mut facets: Vec<Vec<usize>> = piece.to_vec();
    let mut n = piece_vertices;
    for _ in 1..copies {
        let hole = facets.pop().expect("surface has facets");
        let glue = &piece[0];
        let mut relabel = vec![usize::MAX; piece_vertices];
        for (a, &b) in glue.iter().zip(&hole) {
            relabel[*a] = b;
        }
        for r in relabel.iter_mut().filter(|r| **r == usize::MAX) {
            *r = n;
            n += 1;
        }
        facets.extend(piece[1..].iter().map(|f| f.iter().map(|&v| relabel[v]).collect()));
    }
    Triangulation::new(2, facets)
}

/// Kuhn (Freudenthal) triangulation of the `d`-torus with `r^d` vertices.
fn kuhn_torus(d: usize, r: usize) -> Result<Triangulation> {
    let vid = |x: &[usize]| x.iter().rev().fold(0, |acc, &c| acc * r + c % r);
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..d {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (0..=k).map(move |pos| {
                    let mut q = p.clone();
                    q.insert(pos, k);
                    q
                })
            })
            .collect();
    }
    let mut simplices = Vec::new();
    let cubes = r.pow(d as u32);
    for cube in 0..cubes {
        let q: Vec<usize> = (0..d).map(|k| cube / r.pow(k as u32) % r).collect();
        for p in &perms {
            let mut x = q.clone();
            let mut s = vec![vid(&x)];
            for &axis in p {
                x[axis] += 1;
                s.push(vid(&x));
            }
            simplices.push(s);
        }
    }
    let coords: Vec<Vec<f64>> =
        (0..cubes).map(|v| (0..d).map(|k| (v / r.pow(k as u32) % r) as f64).collect()).collect();
    Ok(Triangulation::new(d, simplices)?.with_coords(coords, Some(r as f64)))
}

/// The `n × n` square-lattice cellulation of the 2-torus.
pub fn square_torus(n: usize) -> Result<CellComplex> {
    if n < 3 {
        return Err(Error::Parameter("square torus needs n ≥ 3".into()));
    }
    let v = |i: usize, j: usize| (i % n) + n * (j % n);
    let h = |i: usize, j: usize| v(i, j);
    let vert = |i: usize, j: usize| n * n + v(i, j);
    let mut edges = vec![Vec::new(); 2 * n * n];
    let mut faces = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            edges[h(i, j)] = vec![v(i, j), v(i + 1, j)];
            edges[vert(i, j)] = vec![v(i, j), v(i, j + 1)];
        }
    }
    for j in 0..n {
        for i in 0..n {
            faces.push(vec![h(i, j), vert(i + 1, j), h(i, j + 1), vert(i, j)]);
        }
    }
    Ok(CellComplex::new(vec![vec![Vec::new(); n * n], edges, faces], Provenance::Builtin)?
        .with_name(format!("square-torus:{n}")))
}

/// The plane cut along both axes, compactified by a point at infinity:
/// 0-cells {origin, ∞}, four half-axes, four quadrants. At the origin four
/// 1-cells meet, which is the non-generic configuration produced by the
/// Voronoi cells of the points (±1, ±1).
pub fn four_quadrant_plane() -> CellComplex {
    let axes = vec![vec![0, 1]; 4];
    // Half-axes: 0 = +x, 1 = +y, 2 = −x, 3 = −y. Quadrant q lies between
    // half-axes q and q+1.
    let quadrants = (0..4).map(|q| vec![q, (q + 1) % 4]).collect();
    CellComplex::new(vec![vec![Vec::new(); 2], axes, quadrants], Provenance::Builtin)
        .expect("static complex")
        .with_name("four-quadrant")
}
