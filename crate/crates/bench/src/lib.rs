//! Shared fixtures for the benchmarks.

use gds_core::complex::{builtin_manifold, torus_voronoi, ManifoldSpec, PointSet};
use gds_core::CellComplex;

pub fn builtin(spec: &str) -> CellComplex {
    builtin_manifold(&ManifoldSpec::parse(spec).expect("valid spec")).expect("builtin builds")
}

pub fn voronoi(dim: usize, points: usize, seed: u64) -> CellComplex {
    torus_voronoi(&PointSet::random(dim, points, seed).expect("valid point set")).expect("voronoi builds")
}
