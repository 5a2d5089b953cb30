//! Command-line front end.
//!
//! Exit codes: 0 when every executed check passes, 1 when any fails, 2 on
//! usage or configuration errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::algebra::{harmonic, shuffle, LinComb};
use crate::error::{Error, Result};
use crate::index::Index;
use crate::modp::{self, PrimeWindow};
use crate::numeric::{self, Evaluator, Method};
use crate::relations::{self, Bounds, Family, Params, RelationInstance};
use crate::report::{CheckResult, Report};

#[derive(Debug, Parser)]
#[command(
    name = "ohno",
    version,
    about = "Ohno-type relations for multiple zeta-star values"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dual index k† of an admissible index.
    Dual { index: String },
    /// Hoffman dual k^∨ of a nonempty index.
    Hdual { index: String },
    /// Shuffle or harmonic product of two indices.
    Product {
        #[arg(long = "type", value_enum)]
        kind: ProductKind,
        left: String,
        right: String,
    },
    /// Print both sides of one relation instance.
    Relation(RelationArgs),
    /// Verify real-valued families by series evaluation.
    VerifyReal(SweepArgs),
    /// Verify finite families prime by prime.
    VerifyModp(SweepArgs),
    /// B_n mod p.
    BernoulliModp {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
    },
    /// Compare ζ_A(1, k-1) with Z_A(k) prime by prime.
    DiagnoseRemark {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        pmin: u64,
        #[arg(long, default_value_t = 199)]
        pmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProductKind {
    Shuffle,
    Harmonic,
}

#[derive(Debug, Args)]
struct RelationArgs {
    #[arg(long)]
    family: String,
    /// Index, or the weight for sum formulas, or `k1,k2` for star_depth2.
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    i: Option<u32>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated family names; defaults to every family of the backend.
    #[arg(long)]
    families: Option<String>,
    #[arg(long)]
    max_total_weight: Option<u32>,
    #[arg(long)]
    max_m: Option<u32>,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Truncation bound (real sweeps).
    #[arg(long = "N")]
    truncation: Option<usize>,
    /// Absolute tolerance (real sweeps).
    #[arg(long)]
    tol: Option<f64>,
    /// Use plain truncation instead of tail extrapolation (real sweeps).
    #[arg(long)]
    plain: bool,
    #[arg(long)]
    pmin: Option<u64>,
    #[arg(long)]
    pmax: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// TOML file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    families: Option<Vec<String>>,
    max_total_weight: Option<u32>,
    max_m: Option<u32>,
    max_depth: Option<usize>,
    #[serde(rename = "N")]
    truncation: Option<usize>,
    tol: Option<f64>,
    plain: Option<bool>,
    pmin: Option<u64>,
    pmax: Option<u64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
}

struct Sweep {
    families: Vec<Family>,
    bounds: Bounds,
    truncation: usize,
    tol: f64,
    method: Method,
    window: PrimeWindow,
    jobs: usize,
    out: Option<PathBuf>,
}

const DEFAULT_MAX_WEIGHT: u32 = 6;
const DEFAULT_TOL: f64 = 1e-4;

impl Sweep {
    fn from_args(args: SweepArgs, real: bool) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
                toml::from_str::<SweepFile>(&text)
                    .map_err(|e| Error::config(format!("invalid config {}: {e}", path.display())))?
            }
            None => SweepFile::default(),
        };
        let names: Option<Vec<String>> = args
            .families
            .map(|s| s.split(',').map(str::to_string).collect())
            .or(file.families);
        let families = match names {
            Some(names) => names
                .iter()
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse::<Family>())
                .collect::<Result<Vec<_>>>()?,
            None if real => Family::real().collect(),
            None => Family::finite().collect(),
        };
        if families.is_empty() {
            return Err(Error::config("no families selected"));
        }
        if let Some(f) = families.iter().find(|f| f.value_space().is_real() != real) {
            let backend = if real { "verify-real" } else { "verify-modp" };
            return Err(Error::config(format!(
                "{backend} cannot check {f} ({})",
                f.value_space().name()
            )));
        }
        let bounds = Bounds {
            max_weight: args
                .max_total_weight
                .or(file.max_total_weight)
                .unwrap_or(DEFAULT_MAX_WEIGHT),
            max_m: args.max_m.or(file.max_m),
            max_depth: args.max_depth.or(file.max_depth),
        };
        let tol = args.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::config(format!(
                "tolerance must be a nonnegative number, got {tol}"
            )));
        }
        let defaults = PrimeWindow::default();
        let window = PrimeWindow::new(
            args.pmin.or(file.pmin).unwrap_or(defaults.p_min),
            args.pmax.or(file.pmax).unwrap_or(defaults.p_max),
        )?;
        let plain = args.plain || file.plain.unwrap_or(false);
        Ok(Sweep {
            families,
            bounds,
            truncation: args
                .truncation
                .or(file.truncation)
                .unwrap_or(numeric::DEFAULT_TRUNCATION),
            tol,
            method: if plain {
                Method::Plain
            } else {
                Method::Extrapolated
            },
            window,
            jobs: args.jobs.or(file.jobs).unwrap_or(0),
            out: args.out.or(file.out),
        })
    }

    fn instances(&self) -> Vec<RelationInstance> {
        self.families
            .iter()
            .flat_map(|&f| relations::enumerate_instances(f, &self.bounds))
            .collect()
    }

    fn family_names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }

    fn run_parallel<F>(&self, instances: &[RelationInstance], check: F) -> Result<Vec<CheckResult>>
    where
        F: Fn(&RelationInstance) -> Result<CheckResult> + Sync,
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| instances.par_iter().map(&check).collect())
    }
}

/// Runs the CLI on `argv`, printing to the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI on `argv` with explicit output streams; returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::config(format!("output error: {e}"))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)
        .map_err(|e| Error::config(format!("cannot write {}: {e}", path.display())))
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Dual { index } => {
            let k: Index = index.parse()?;
            writeln!(out, "{}", k.dagger()?).map_err(io_err)?;
        }
        Command::Hdual { index } => {
            let k: Index = index.parse()?;
            writeln!(out, "{}", k.hoffman_dual()?).map_err(io_err)?;
        }
        Command::Product { kind, left, right } => {
            let x = LinComb::index(left.parse()?);
            let y = LinComb::index(right.parse()?);
            let product = match kind {
                ProductKind::Shuffle => shuffle(&x, &y)?,
                ProductKind::Harmonic => harmonic(&x, &y)?,
            };
            writeln!(out, "{product}").map_err(io_err)?;
        }
        Command::Relation(args) => {
            let inst = build_from_args(args)?;
            writeln!(out, "id: {}", inst.id()).map_err(io_err)?;
            writeln!(out, "space: {}", inst.space.name()).map_err(io_err)?;
            writeln!(out, "lhs: {}", inst.lhs).map_err(io_err)?;
            writeln!(out, "rhs: {}", inst.rhs).map_err(io_err)?;
        }
        Command::VerifyReal(args) => {
            let sweep = Sweep::from_args(args, true)?;
            let evaluator = Evaluator::new(sweep.truncation, sweep.method)?;
            let instances = sweep.instances();
            let results = sweep.run_parallel(&instances, |inst| {
                numeric::check_real(inst, &evaluator, sweep.tol)
            })?;
            let config = json!({
                "command": "verify-real",
                "families": sweep.family_names(),
                "bounds": sweep.bounds,
                "N": sweep.truncation.to_string(),
                "tol": format!("{:e}", sweep.tol),
                "method": match sweep.method { Method::Plain => "plain", Method::Extrapolated => "extrapolated" },
            });
            return finish(Report::new(config, results)?, sweep.out.as_deref(), out);
        }
        Command::VerifyModp(args) => {
            let sweep = Sweep::from_args(args, false)?;
            let instances = sweep.instances();
            let results =
                sweep.run_parallel(&instances, |inst| modp::check_modp(inst, sweep.window))?;
            let config = json!({
                "command": "verify-modp",
                "families": sweep.family_names(),
                "bounds": sweep.bounds,
                "window": sweep.window.to_json(),
            });
            return finish(Report::new(config, results)?, sweep.out.as_deref(), out);
        }
        Command::BernoulliModp { n, p } => {
            writeln!(out, "{}", modp::bernoulli_mod_p(n, p)?).map_err(io_err)?;
        }
        Command::DiagnoseRemark {
            k,
            pmin,
            pmax,
            out: path,
        } => {
            let diag = modp::remark_diagnostic(k, PrimeWindow::new(pmin, pmax)?)?;
            writeln!(out, "p\tzeta_A(1,{})\tZ_A({k})\tratio", k - 1).map_err(io_err)?;
            for row in &diag.rows {
                let ratio = row.ratio.map_or("-".to_string(), |r| r.to_string());
                writeln!(out, "{}\t{}\t{}\t{}", row.p, row.zeta, row.z, ratio).map_err(io_err)?;
            }
            match diag.constant_ratio {
                Some(c) => writeln!(out, "constant ratio: {c}"),
                None => writeln!(out, "constant ratio: none"),
            }
            .map_err(io_err)?;
            if let Some(path) = path {
                let mut text = serde_json::to_string_pretty(&json!({
                    "version": crate::report::TOOL_VERSION,
                    "config": {"command": "diagnose-remark", "k": k, "pmin": pmin.to_string(), "pmax": pmax.to_string()},
                    "diagnostic": diag.to_json(),
                }))
                .expect("valid JSON");
                text.push('\n');
                write_file(&path, &text)?;
            }
        }
    }
    Ok(0)
}

fn finish(report: Report, path: Option<&Path>, out: &mut dyn Write) -> Result<i32> {
    for r in &report.results {
        writeln!(out, "{}", r.line()).map_err(io_err)?;
    }
    writeln!(
        out,
        "summary: {} checks, {} passed, {} failed",
        report.results.len(),
        report.passed(),
        report.failed()
    )
    .map_err(io_err)?;
    if let Some(path) = path {
        write_file(path, &report.render())?;
    }
    Ok(if report.all_passed() { 0 } else { 1 })
}

fn build_from_args(args: RelationArgs) -> Result<RelationInstance> {
    use Family as F;
    let family: Family = args.family.parse()?;
    let need_k = || {
        args.k
            .clone()
            .ok_or_else(|| Error::config(format!("{family} needs --k")))
    };
    let index_k = || -> Result<Index> { need_k()?.parse() };
    let weight_k = || -> Result<u32> {
        need_k()?
            .trim()
            .parse()
            .map_err(|_| Error::config(format!("{family} needs an integer weight for --k")))
    };
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| Error::config(format!("{family} needs --{name}")))
    };
    let params = match family {
        F::SumClassical | F::SumClassicalStar => Params::Weight {
            k: weight_k()?,
            r: need(args.r, "r")?,
        },
        F::SumFinite | F::SumFiniteStar => Params::WeightSlot {
            k: weight_k()?,
            r: need(args.r, "r")?,
            i: need(args.i, "i")?,
        },
        F::DualityClassical | F::DualityFinite => Params::Index { k: index_k()? },
        F::Ohno | F::OhnoStar | F::Oyama | F::OhnoStarFinite | F::Lemma24 | F::Lemma25 => {
            Params::IndexShift {
                k: index_k()?,
                m: args.m.unwrap_or(0),
            }
        }
        F::KawashimaLinear | F::HarmonicHom => Params::Pair {
            k: index_k()?,
            l: args
                .l
                .clone()
                .ok_or_else(|| Error::config(format!("{family} needs --l")))?
                .parse()?,
        },
        F::StarOnes => Params::Ones {
            i: need(args.i, "i")?,
        },
        F::StarDepth2 => {
            let k = index_k()?;
            match k.parts() {
                &[k1, k2] => Params::Depth2 { k1, k2 },
                _ => return Err(Error::config("star_depth2 needs --k k1,k2")),
            }
        }
    };
    relations::build(family, params)
}
