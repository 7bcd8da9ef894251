//! `gds-lab`: build cellulations, compute degeneracies and run invariant suites.

mod suites;
mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gds_core::circuit::{build_gates, max_conflict_degree, schedule};
use gds_core::complex::{builtin_manifold, read_complex, validate_generic, write_complex, ManifoldSpec};
use gds_core::ed::{ground_degeneracy_ed, Variant};
use gds_core::homology::betti;
use gds_core::model::{ground_degeneracy, Model};
use gds_core::operators::{ds2_wilson_sign, interleaved_chords_sphere};
use gds_core::wavefunction::{table_csv, table_text, theorem_a_table};
use gds_core::{CellComplex, Error};

use table::{Format, Table};

#[derive(Parser)]
#[command(name = "gds-lab", version, about = "Generalized double semion and toric code laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// `name:params` spec (sphere:4, torus:3:5, tP:3, genus:2, klein,
    /// torus-voronoi:2, square-torus:4, four-quadrant) or a complex file.
    #[arg(long)]
    manifold: Option<String>,
    /// Seed for randomized generators and samplers.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Voronoi point count.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value = "gds")]
    model: Model,
    #[arg(long, default_value = "projected")]
    variant: Variant,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complex and write it in the plain-text complex format.
    Gen(Common),
    /// Check the generic-cellulation conditions.
    Validate(Common),
    /// Mod-2 Betti numbers and Euler characteristic.
    Homology(Common),
    /// Ground-state degeneracy from the sector sweep.
    Gsd {
        #[command(flatten)]
        common: Common,
        /// List every sector instead of the total.
        #[arg(long)]
        sectors: bool,
    },
    /// Degeneracies of both models on connected sums of projective planes.
    TableThmA {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        tmax: usize,
    },
    /// Run a named invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        suite: String,
    },
    /// Phase-gate circuit statistics and schedule.
    Circuit {
        #[command(flatten)]
        common: Common,
        /// Print every round of the schedule.
        #[arg(long)]
        rounds: bool,
    },
    /// Exact diagonalization, compared against the sweep.
    Ed(Common),
    /// Surface Wilson-loop sign on the interleaved-chord fixture.
    Balloon(Common),
}

enum Failure {
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Run = Result<(String, bool), Failure>;

fn load(common: &Common) -> Result<CellComplex, Failure> {
    let spec = common.manifold.as_deref().ok_or_else(|| Failure::Input("--manifold is required".into()))?;
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Failure::Input(format!("{spec}: {e}")))?;
        return Ok(read_complex(&text)?);
    }
    let mut parsed = ManifoldSpec::parse(spec)?;
    if let ManifoldSpec::TorusVoronoi { points, seed, .. } = &mut parsed {
        let explicit = spec.split(':').count();
        if let Some(n) = common.points {
            *points = n;
        }
        if explicit < 4 {
            *seed = common.seed;
        }
    }
    Ok(builtin_manifold(&parsed)?)
}

fn gen(common: &Common) -> Run {
    Ok((write_complex(&load(common)?), true))
}

fn validate(common: &Common) -> Run {
    let c = load(common)?;
    let r = validate_generic(&c);
    let mut t = Table::new(&["violation"]);
    for v in &r.violations {
        t.push(vec![v.to_string()]);
    }
    let mut out = Table::pairs(vec![
        ("dim", c.dim().to_string()),
        ("cells", format!("{:?}", c.counts())),
        ("checked", r.cells_checked.to_string()),
        ("generic", r.passes().to_string()),
    ])
    .render(common.format);
    if !r.passes() {
        out.push_str(&t.render(common.format));
    }
    Ok((out, r.passes()))
}

fn homology(common: &Common) -> Run {
    let c = load(common)?;
    let b = betti(&c)?;
    let mut t = Table::new(&["k", "cells", "betti"]);
    for k in 0..=c.dim() {
        t.push(vec![k.to_string(), c.count(k).to_string(), b.get(k).to_string()]);
    }
    let mut out = t.render(common.format);
    if common.format == Format::Text {
        out.push_str(&format!("euler characteristic {}\ncomponents {}\n", c.euler_char(), c.component_count()));
    }
    Ok((out, true))
}

fn gsd(common: &Common, sectors: bool) -> Run {
    let c = load(common)?;
    let g = ground_degeneracy(&c, common.model)?;
    if !sectors {
        return Ok(match common.format {
            Format::Text => (format!("{}\n", g.gsd), true),
            Format::Csv => {
                let mut t = Table::new(&["model", "gsd"]);
                t.push(vec![common.model.to_string(), g.gsd.to_string()]);
                (t.render(Format::Csv), true)
            }
        });
    }
    let mut t = Table::new(&["sector", "cells", "sweep_sign", "survives"]);
    for r in &g.reports {
        t.push(vec![r.sector.to_string(), r.rep.len().to_string(), r.sweep_sign.to_string(), r.survives.to_string()]);
    }
    Ok((t.render(common.format), true))
}

fn table_a(common: &Common, tmax: usize) -> Run {
    let rows = theorem_a_table(tmax)?;
    let ok = rows.iter().all(|r| r.ds == 1 << (r.t - 1) && r.tc == 1 << r.t);
    let out = match common.format {
        Format::Text => table_text(&rows),
        Format::Csv => table_csv(&rows),
    };
    Ok((out, ok))
}

fn verify(common: &Common, suite: &str) -> Run {
    let c = if suite == "isotropic" { None } else { Some(load(common)?) };
    let o = suites::run(suite, c.as_ref(), common.model, common.seed)?;
    Ok((o.table.render(common.format), o.passed))
}

fn circuit(common: &Common, rounds: bool) -> Run {
    let c = load(common)?;
    let gates = build_gates(&c)?;
    let s = schedule(&gates, &c);
    let ok = s.is_valid(&gates);
    if rounds {
        return Ok((s.to_text(), ok));
    }
    let t = Table::pairs(vec![
        ("gates", gates.len().to_string()),
        ("max conflict degree", max_conflict_degree(&gates).to_string()),
        ("depth", s.depth().to_string()),
        ("schedule valid", ok.to_string()),
    ]);
    Ok((t.render(common.format), ok))
}

fn ed(common: &Common) -> Run {
    let c = load(common)?;
    let r = ground_degeneracy_ed(&c, common.model, common.variant)?;
    let sweep = ground_degeneracy(&c, common.model)?.gsd;
    let ok = r.degeneracy as u64 == sweep;
    let energy = r.min_energy.map(|e| format!("{e:.9}")).unwrap_or_else(|| "none".into());
    let t = Table::pairs(vec![
        ("qubits", c.count(c.dim() - 1).to_string()),
        ("model", common.model.to_string()),
        ("variant", r.variant.to_string()),
        ("min energy", energy),
        ("hermitian", r.hermitian.to_string()),
        ("ed degeneracy", r.degeneracy.to_string()),
        ("sweep degeneracy", sweep.to_string()),
    ]);
    Ok((t.render(common.format), ok))
}

fn balloon(common: &Common) -> Run {
    if common.manifold.is_some() {
        let c = load(common)?;
        let o = suites::run("balloon", Some(&c), common.model, common.seed)?;
        return Ok((o.table.render(common.format), o.passed));
    }
    let (c, l, alpha) = interleaved_chords_sphere()?;
    let s = ds2_wilson_sign(&c, &l, &alpha)?;
    let t = Table::pairs(vec![
        ("loop edges", l.len().to_string()),
        ("state edges", alpha.len().to_string()),
        ("endpoints on loop", s.endpoints.to_string()),
        ("linked", s.link.to_string()),
        ("sign", s.phase.to_string()),
    ]);
    Ok((t.render(common.format), true))
}

fn emit(out: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, out).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{out}");
            Ok(())
        }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("GDS_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().map_err(|_| Failure::Input(format!("GDS_LAB_THREADS={v:?} is not a count")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| {
        let (common, res) = match &cli.command {
            Command::Gen(c) => (c, gen(c)),
            Command::Validate(c) => (c, validate(c)),
            Command::Homology(c) => (c, homology(c)),
            Command::Gsd { common, sectors } => (common, gsd(common, *sectors)),
            Command::TableThmA { common, tmax } => (common, table_a(common, *tmax)),
            Command::Verify { common, suite } => (common, verify(common, suite)),
            Command::Circuit { common, rounds } => (common, circuit(common, *rounds)),
            Command::Ed(c) => (c, ed(c)),
            Command::Balloon(c) => (c, balloon(c)),
        };
        let (out, ok) = res?;
        emit(&out, common.out.as_deref())?;
        if ok {
            Ok(())
        } else {
            Err(Failure::Invariant("invariant check failed".into()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(m)) => {
            eprintln!("gds-lab: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("gds-lab: {m}");
            ExitCode::from(2)
        }
    }
}
