//! Command-line surface over the `mixmult` library.
//!
//! Every subcommand takes a fixture (a built-in name or a JSON path) and is
//! stateless. Exit codes: 0 success, 1 usage or input error, 2 mathematical
//! validation failure, 3 internal consistency failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use mixmult::atlas::cell_decomposition;
use mixmult::emit::{atlas_csv, atlas_svg, walk_csv};
use mixmult::engine::{
    maximal_jumping_divisor, minimal_jumping_divisor, mmi_divisor, mmi_divisor_left, wall_lines_through,
};
use mixmult::fixture::{builtin_names, load, Fixture};
use mixmult::jump::{checked_multiplicity, multiplicity, multiplicity_fractional, multiplicity_oracle};
use mixmult::lattice::{antinef_closure, colength};
use mixmult::nest::{bijection_report, lct_axis, newton_nest};
use mixmult::rational::{fmt_q, fmt_q_list, parse_q, parse_q_list, parse_z_list};
use mixmult::selftest::run_selftest;
use mixmult::series::{poincare, ray_walk};
use mixmult::{ErrorKind, IdealTuple, Point, Ray, ZDivisor};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] mixmult::Error),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0} self-test check(s) failed")]
    SelftestFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => match e.kind() {
                ErrorKind::Input => EXIT_INPUT,
                ErrorKind::Validation => EXIT_VALIDATION,
                ErrorKind::Internal => EXIT_INTERNAL,
            },
            CliError::Write { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::SelftestFailed(_) => EXIT_VALIDATION,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "mixmult", version, about = "Exact mixed multiplier ideals from a dual graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the dual graph and the ideals.
    Validate { fixture: String },
    /// Relative canonical divisor.
    Kpi { fixture: String },
    /// Fundamental cycle and its colength.
    Fcycle { fixture: String },
    /// Antinef closure of a divisor.
    Closure {
        fixture: String,
        /// Comma separated integer coefficients.
        #[arg(long, allow_hyphen_values = true)]
        divisor: String,
    },
    /// Ideal, jumping divisors and multiplicity at a point.
    Point {
        fixture: String,
        /// Comma separated rationals, one per ideal.
        #[arg(long)]
        c: String,
    },
    /// Jumping points along a ray.
    Ray {
        fixture: String,
        #[arg(long)]
        base: String,
        /// Comma separated nonnegative integers.
        #[arg(long)]
        dir: String,
        /// Largest ray parameter walked.
        #[arg(long)]
        until: String,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Closed-form generating series of multiplicities along a ray.
    Poincare {
        fixture: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        dir: String,
        #[arg(long)]
        horizon: String,
    },
    /// Cell decomposition of a box for two ideals.
    Walls {
        fixture: String,
        /// Box corner `x,y`.
        #[arg(long = "box")]
        bounds: String,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Log-canonical threshold of each ideal.
    Lct { fixture: String },
    /// Newton nest components.
    Nest { fixture: String },
    /// Facets of the log-canonical wall against the Newton nest.
    Bijection { fixture: String },
    /// Check the expected values stored in fixtures; all built-ins if none given.
    Selftest { fixture: Option<String> },
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn tuple_of(name: &str) -> CliResult<(Fixture, IdealTuple)> {
    let f = load(name)?;
    let t = f.tuple()?;
    Ok((f, t))
}

fn point_of(s: &str) -> CliResult<Point> {
    Ok(Point::new(parse_q_list(s)?)?)
}

fn ray_of(base: &str, dir: &str) -> CliResult<Ray> {
    Ok(Ray::new(point_of(base)?, parse_z_list(dir)?)?)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn components(js: &[usize]) -> String {
    if js.is_empty() {
        return "none".into();
    }
    js.iter().map(|j| format!("E{}", j + 1)).collect::<Vec<_>>().join(",")
}

macro_rules! emit {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|source| CliError::Write { path: PathBuf::from("<stdout>"), source })?
    };
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<()> {
    match cmd {
        Command::Validate { fixture } => {
            let (_, t) = tuple_of(&fixture)?;
            let g = t.graph();
            emit!(out, "valid: n = {}, r = {}", g.n(), t.r());
            emit!(out, "singularity = {}", g.singularity_class());
            let rupture: Vec<usize> = (0..g.n()).filter(|&j| t.is_rupture(j)).collect();
            let dicritical: Vec<usize> = (0..g.n()).filter(|&j| t.is_dicritical(j)).collect();
            emit!(out, "rupture = {}", components(&rupture));
            emit!(out, "dicritical = {}", components(&dicritical));
        }
        Command::Kpi { fixture } => {
            let (_, t) = tuple_of(&fixture)?;
            emit!(out, "K = {}", t.graph().canonical());
        }
        Command::Fcycle { fixture } => {
            let (_, t) = tuple_of(&fixture)?;
            let g = t.graph();
            let z = g.fundamental_cycle();
            emit!(out, "Z = {z}");
            emit!(out, "colength = {}", colength(g, z)?);
        }
        Command::Closure { fixture, divisor } => {
            let (_, t) = tuple_of(&fixture)?;
            let g = t.graph();
            let d = ZDivisor(parse_z_list(&divisor)?);
            if d.len() != g.n() {
                return Err(CliError::Usage(format!("divisor has {} coefficients, graph has {}", d.len(), g.n())));
            }
            let c = antinef_closure(g, &d);
            emit!(out, "closure = {c}");
            if c.is_effective() {
                emit!(out, "colength = {}", colength(g, &c)?);
            }
        }
        Command::Point { fixture, c } => {
            let (_, t) = tuple_of(&fixture)?;
            let p = point_of(&c)?;
            let m = checked_multiplicity(&t, &p)?;
            emit!(out, "c = {p}");
            emit!(out, "D = {}", mmi_divisor(&t, &p)?);
            emit!(out, "D_left = {}", mmi_divisor_left(&t, &p)?);
            emit!(out, "H = {}", maximal_jumping_divisor(&t, &p)?);
            if m > 0 {
                emit!(out, "G = {}", minimal_jumping_divisor(&t, &p)?);
            }
            emit!(out, "m = {m}");
            emit!(
                out,
                "routes: form {}, fractional {}, colength {}",
                multiplicity(&t, &p)?,
                multiplicity_fractional(&t, &p)?,
                multiplicity_oracle(&t, &p)?
            );
            let walls: Vec<String> =
                wall_lines_through(&t, &p)?.iter().map(|(j, l)| format!("E{}@{l}", j + 1)).collect();
            emit!(out, "wall lines = {}", if walls.is_empty() { "none".into() } else { walls.join(" ") });
        }
        Command::Ray { fixture, base, dir, until, csv } => {
            let (_, t) = tuple_of(&fixture)?;
            let ray = ray_of(&base, &dir)?;
            let steps = ray_walk(&t, &ray, &parse_q(&until)?)?;
            for s in &steps {
                let g = s.record.minimal.as_ref().map(ToString::to_string).unwrap_or_default();
                emit!(out, "mu = {}  c = {}  m = {}  G = {g}", fmt_q(&s.mu), s.record.point, s.record.multiplicity);
            }
            emit!(out, "{} jumping points", steps.len());
            if let Some(path) = csv {
                write_file(&path, &walk_csv(&steps))?;
            }
        }
        Command::Poincare { fixture, base, dir, horizon } => {
            let (_, t) = tuple_of(&fixture)?;
            let ray = ray_of(&base, &dir)?;
            let s = poincare(&t, &ray, &parse_q(&horizon)?)?;
            emit!(out, "{s}");
            for term in &s.terms {
                let kind = if term.periodic { "periodic" } else { "isolated" };
                emit!(out, "mu = {}  anchor = {}  m0 = {}  rho = {}  {kind}", fmt_q(&term.mu), term.anchor, term.m0, term.rho);
            }
        }
        Command::Walls { fixture, bounds, svg, csv } => {
            let (_, t) = tuple_of(&fixture)?;
            let b = parse_q_list(&bounds)?;
            let [x, y] = <[_; 2]>::try_from(b).map_err(|_| CliError::Usage("--box takes two rationals x,y".into()))?;
            let atlas = cell_decomposition(&t, (x, y))?;
            emit!(out, "lines = {}", atlas.lines.len());
            emit!(out, "cells = {}", atlas.faces.len());
            emit!(out, "regions = {}", atlas.region_count());
            emit!(out, "facets = {}", atlas.facets.len());
            emit!(out, "facet intersections = {}", atlas.facet_intersections().len());
            emit!(out, "log-canonical facets = {}", atlas.lc_facets().len());
            if let Some(path) = csv {
                write_file(&path, &atlas_csv(&atlas))?;
            }
            if let Some(path) = svg {
                let lct = (0..t.r()).map(|i| lct_axis(&t, i)).collect::<mixmult::Result<Vec<_>>>()?;
                write_file(&path, &atlas_svg(&atlas, &lct))?;
            }
        }
        Command::Lct { fixture } => {
            let (_, t) = tuple_of(&fixture)?;
            let lct = (0..t.r()).map(|i| lct_axis(&t, i)).collect::<mixmult::Result<Vec<_>>>()?;
            emit!(out, "lct = {}", fmt_q_list(&lct));
        }
        Command::Nest { fixture } => {
            let (_, t) = tuple_of(&fixture)?;
            emit!(out, "{}", components(&newton_nest(&t)?));
        }
        Command::Bijection { fixture } => {
            let (_, t) = tuple_of(&fixture)?;
            let rep = bijection_report(&t)?;
            emit!(out, "lct = {}", fmt_q_list(&rep.lct));
            emit!(out, "nest = {}", components(&rep.nest));
            emit!(out, "facets = {}", rep.lc_facets.len());
            for (i, f) in rep.lc_facets.iter().enumerate() {
                let terms: Vec<String> =
                    f.plane.normal.iter().enumerate().map(|(k, a)| format!("{a}*z{}", k + 1)).collect();
                emit!(
                    out,
                    "facet {}: {} = {}  components {}  m = {}  G = {}",
                    i + 1,
                    terms.join(" + "),
                    fmt_q(&f.plane.rhs),
                    components(&f.components),
                    f.multiplicity,
                    f.minimal
                );
            }
            for (p, m) in rep.high_multiplicity() {
                emit!(out, "multiplicity {m} at {p}");
            }
            for (fi, j) in &rep.pairing {
                emit!(out, "facet {} <-> E{}", fi + 1, j + 1);
            }
            emit!(out, "verdict = {}", rep.verdict);
        }
        Command::Selftest { fixture } => {
            let names: Vec<String> = match fixture {
                Some(f) => vec![f],
                None => builtin_names().iter().map(|s| s.to_string()).collect(),
            };
            let mut failed = 0;
            for name in names {
                let f = load(&name)?;
                for line in run_selftest(&f)? {
                    if !line.pass {
                        failed += 1;
                    }
                    emit!(out, "{} {line}", f.name);
                }
            }
            if failed > 0 {
                return Err(CliError::SelftestFailed(failed));
            }
        }
    }
    Ok(())
}
