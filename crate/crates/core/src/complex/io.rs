//! Plain-text formats.
//!
//! Triangulation:
//! ```text
//! dim 2
//! s 0 1 2
//! ```
//! Complex (ids dense per dimension, grouped by ascending dimension):
//! ```text
//! dim 1
//! c 0 0 :
//! c 1 0 :
//! c 0 1 : 0 1
//! ```
//! Lines starting with `#` and blank lines are ignored.

use std::fmt::Write as _;

use super::{CellComplex, Provenance, Triangulation};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found {s:?}")))
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<usize> {
    let (n, l) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut parts = l.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some("dim"), Some(d), None) => parse_num(n, d),
        _ => Err(parse_err(n, "expected `dim <d>`")),
    }
}

pub fn read_triangulation(text: &str) -> Result<Triangulation> {
    let mut lines = content_lines(text);
    let d = parse_header(&mut lines)?;
    let mut simplices = Vec::new();
    for (n, l) in lines {
        let mut parts = l.split_whitespace();
        if parts.next() != Some("s") {
            return Err(parse_err(n, "expected `s <v0> ... <vd>`"));
        }
        let s: Vec<usize> = parts.map(|p| parse_num(n, p)).collect::<Result<_>>()?;
        if s.len() != d + 1 {
            return Err(parse_err(n, format!("simplex has {} vertices, expected {}", s.len(), d + 1)));
        }
        simplices.push(s);
    }
    Triangulation::new(d, simplices)
}

pub fn write_triangulation(t: &Triangulation) -> String {
    let mut out = format!("dim {}\n", t.dim());
    for s in t.simplices() {
        out.push('s');
        for v in s {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn read_complex(text: &str) -> Result<CellComplex> {
    let mut lines = content_lines(text);
    let d = parse_header(&mut lines)?;
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d + 1];
    let mut current = 0usize;
    for (n, l) in lines {
        let (head, tail) = l.split_once(':').ok_or_else(|| parse_err(n, "expected `c <id> <k> : <faces>`"))?;
        let mut parts = head.split_whitespace();
        if parts.next() != Some("c") {
            return Err(parse_err(n, "expected `c <id> <k> : <faces>`"));
        }
        let id = parse_num(n, parts.next().ok_or_else(|| parse_err(n, "missing id"))?)?;
        let k = parse_num(n, parts.next().ok_or_else(|| parse_err(n, "missing dimension"))?)?;
        if parts.next().is_some() {
            return Err(parse_err(n, "unexpected tokens before `:`"));
        }
        if k > d {
            return Err(parse_err(n, format!("cell dimension {k} exceeds {d}")));
        }
        if k < current {
            return Err(parse_err(n, "cells must be grouped by ascending dimension"));
        }
        current = k;
        if id != faces[k].len() {
            return Err(parse_err(n, format!("expected id {} for a {k}-cell, found {id}", faces[k].len())));
        }
        let fs: Vec<usize> = tail.split_whitespace().map(|p| parse_num(n, p)).collect::<Result<_>>()?;
        if k == 0 && !fs.is_empty() {
            return Err(parse_err(n, "0-cells have no faces"));
        }
        faces[k].push(fs);
    }
    CellComplex::new(faces, Provenance::Loaded)
}

pub fn write_complex(c: &CellComplex) -> String {
    let mut out = format!("dim {}\n", c.dim());
    for k in 0..=c.dim() {
        for id in 0..c.count(k) {
            let _ = write!(out, "c {id} {k} :");
            for f in c.faces(k, id) {
                let _ = write!(out, " {f}");
            }
            out.push('\n');
        }
    }
    out
}
