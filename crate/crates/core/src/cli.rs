//! The `torhom` command line. [`run`] does all the work so it can be driven
//! in-process; the binary only forwards arguments and the exit code.
//!
//! Exit codes: 0 success, 1 usage error, 2 fan validation error, 3 unreadable
//! or malformed input, 4 a failed self-check or theorem check.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis::{
    check_cyclic57, dim3_theorem_batch_with, transpose_mismatches, AnalysisError, BatchOptions,
};
use crate::constructions::{self as build, Profile};
use crate::fan::{Fan, FanError, FanOptions};
use crate::report::{render_flat, render_table, Report};
use crate::spectral::{PageKind, SpectralSummary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "torhom", version, about = "Mod-2 homology of real and complex toric varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PageArg {
    E1,
    E2,
    G0,
    G1,
}

impl From<PageArg> for PageKind {
    fn from(p: PageArg) -> Self {
        match p {
            PageArg::E1 => PageKind::E1,
            PageArg::E2 => PageKind::E2,
            PageArg::G0 => PageKind::G0,
            PageArg::G1 => PageKind::G1,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers, spectral pages and M-verdict for a fan file.
    Compute {
        path: PathBuf,
        #[arg(long, conflicts_with = "pretty")]
        json: bool,
        /// Grid tables (the default).
        #[arg(long)]
        pretty: bool,
        #[arg(long, value_delimiter = ',', default_value = "e1,e2,g0,g1")]
        pages: Vec<PageArg>,
        /// Skip the pairwise cone intersection check.
        #[arg(long)]
        no_validate: bool,
    },
    /// Recompute the E2 and G1 tables of the cyclic-polytope fan and compare them with the expected values.
    PaperTables {
        /// Also check G1[p,q] = E2[p+q,-p] at every position.
        #[arg(long)]
        transpose_check: bool,
    },
    /// Certify a seeded batch of random fans of rank at most 3.
    Search {
        /// Rank of the fans; cycles through 1..=3 when omitted.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=3))]
        dim: Option<u64>,
        #[arg(long, default_value_t = 300, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// complete, subfan or affine; all three when omitted.
        #[arg(long)]
        profile: Option<Profile>,
        #[arg(long)]
        json: bool,
    },
    /// Write the JSON file of a named fan.
    ///
    /// Names: pn N | hirzebruch A | product N... | weighted Q0 Q1 ... | torus N |
    /// cyclic57 | same-mod2 S | square-pyramid | same-mod2-3fold | random RANK SEED PROFILE
    Gen {
        name: String,
        params: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(err: &FanError) -> i32 {
    if err.is_parse_error() {
        EXIT_PARSE
    } else {
        EXIT_INVALID
    }
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute { path, json, pretty: _, pages, no_validate } => {
            compute(&path, json, &pages, no_validate, out, err)
        }
        Command::PaperTables { transpose_check } => paper_tables(transpose_check, out),
        Command::Search { dim, count, seed, profile, json } => {
            let options = BatchOptions { rank: dim.map(|d| d as usize), profile };
            search(count as usize, seed, options, json, out, err)
        }
        Command::Gen { name, params, out: path } => gen(&name, &params, path, out, err),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_USAGE
    })
}

fn compute(
    path: &PathBuf,
    json: bool,
    pages: &[PageArg],
    no_validate: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            writeln!(err, "error: cannot read {}: {e}", path.display())?;
            return Ok(EXIT_PARSE);
        }
    };
    let options = if no_validate { FanOptions::unchecked() } else { FanOptions::default() };
    let fan = match Fan::read_json_with(&text, options) {
        Ok(f) => f,
        Err(e) => {
            writeln!(err, "error: {}: {e}", path.display())?;
            return Ok(exit_code_for(&e));
        }
    };
    let summary = SpectralSummary::compute(&fan);
    let mut kinds: Vec<PageKind> = Vec::new();
    for &p in pages {
        if !kinds.contains(&p.into()) {
            kinds.push(p.into());
        }
    }
    let report = Report::new(&fan, &summary, &kinds);
    if json {
        write!(out, "{}", report.to_json())?;
    } else {
        write!(out, "{}", report.to_pretty())?;
    }
    Ok(EXIT_OK)
}

fn paper_tables(transpose_check: bool, out: &mut dyn Write) -> std::io::Result<i32> {
    let fan = match build::cyclic_polytope_normal_fan() {
        Ok(f) => f,
        Err(e) => {
            writeln!(out, "cannot build the cyclic-polytope fan: {e}")?;
            return Ok(EXIT_CHECK);
        }
    };
    let summary = SpectralSummary::compute(&fan);
    writeln!(out, "normal fan of the cyclic polytope C(7,5): {} rays, {} cones", fan.rays().len(), fan.cones().len())?;
    writeln!(out)?;
    write!(out, "{}", render_table(&summary.e2))?;
    writeln!(out)?;
    write!(out, "{}", render_table(&summary.g1))?;
    writeln!(out)?;
    write!(out, "{}", render_flat(&summary.e2))?;
    write!(out, "{}", render_flat(&summary.g1))?;
    writeln!(out)?;
    let check = check_cyclic57(&summary.e2, &summary.g1);
    for m in &check.mismatches {
        writeln!(out, "MISMATCH {}[{},{}]: expected {}, got {}", m.page, m.p, m.q, m.expected, m.got)?;
    }
    let ok_e2 = check.mismatches.iter().all(|m| m.page != "E2");
    let ok_g1 = check.mismatches.iter().all(|m| m.page != "G1");
    writeln!(out, "E2: {} listed entries {}", check.e2_checked, if ok_e2 { "match" } else { "DIFFER" })?;
    writeln!(out, "G1: {} listed entries {}", check.g1_checked, if ok_g1 { "match" } else { "DIFFER" })?;
    writeln!(out, "totals: {} = {}", check.total_e2, check.total_g1)?;
    let mut ok = check.passed() && check.total_e2 == check.total_g1;
    if transpose_check {
        let bad = transpose_mismatches(&summary.e2, &summary.g1);
        for m in &bad {
            writeln!(out, "MISMATCH G1[{},{}] = {} but E2[{},{}] = {}", m.p, m.q, m.got, m.p + m.q, -m.p, m.expected)?;
        }
        writeln!(
            out,
            "transpose check: G1[p,q] = E2[p+q,-p] {} at all {} positions",
            if bad.is_empty() { "holds" } else { "FAILS" },
            summary.g1.entries().count()
        )?;
        ok &= bad.is_empty();
    }
    Ok(if ok { EXIT_OK } else { EXIT_CHECK })
}

fn search(
    count: usize,
    seed: u64,
    options: BatchOptions,
    json: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    match dim3_theorem_batch_with(count, seed, options) {
        Ok(report) => {
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
            } else {
                writeln!(out, "{} fans, seed {}", report.count, report.seed)?;
                for (rank, t) in &report.per_rank {
                    let profiles: Vec<String> = t.by_profile.iter().map(|(k, v)| format!("{k} {v}")).collect();
                    writeln!(out, "rank {rank}: {}/{} CertifiedM ({})", t.certified, t.total, profiles.join(", "))?;
                }
                writeln!(out, "surfaces matched against the closed form: {}", report.oracle_checked)?;
                writeln!(out, "largest gap: {}", report.max_gap)?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ (AnalysisError::TheoremViolation { .. } | AnalysisError::OracleMismatch { .. })) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_CHECK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}

fn parse_params<T: std::str::FromStr>(params: &[String]) -> Result<Vec<T>, String> {
    params.iter().map(|p| p.parse().map_err(|_| format!("bad parameter {p:?}"))).collect()
}

fn one<T: std::str::FromStr + Copy>(params: &[String], default: Option<T>) -> Result<T, String> {
    match (parse_params::<T>(params)?.as_slice(), default) {
        ([x], _) => Ok(*x),
        ([], Some(d)) => Ok(d),
        _ => Err("expected exactly one parameter".into()),
    }
}

/// Builds the fan named on the command line.
pub fn named_fan(name: &str, params: &[String]) -> Result<Fan, String> {
    let none = |params: &[String]| if params.is_empty() { Ok(()) } else { Err(format!("{name} takes no parameters")) };
    let msg = |r: Result<Fan, build::ConstructionError>| r.map_err(|e| e.to_string());
    match name {
        "pn" => msg(build::projective_space_fan(one(params, None)?)),
        "hirzebruch" => msg(build::hirzebruch_fan(one(params, None)?)),
        "product" => {
            let dims: Vec<usize> = parse_params(params)?;
            if dims.len() < 2 {
                return Err("product needs at least two projective-space dimensions".into());
            }
            let mut fan = msg(build::projective_space_fan(dims[0]))?;
            for &d in &dims[1..] {
                let next = msg(build::projective_space_fan(d))?;
                fan = msg(build::product_fan(&fan, &next))?;
            }
            Ok(fan)
        }
        "weighted" => msg(build::weighted_projective_fan(&parse_params::<i64>(params)?)),
        "torus" => Ok(build::torus_fan(one(params, None)?)),
        "cyclic57" => none(params).and_then(|_| msg(build::cyclic_polytope_normal_fan())),
        "same-mod2" => msg(build::same_mod2_surface_fan(one(params, Some(4))?)),
        "square-pyramid" => none(params).map(|_| build::square_pyramid_fan()),
        "same-mod2-3fold" => none(params).map(|_| build::same_mod2_threefold_fan()),
        "random" => {
            let [rank, seed, profile] = params else {
                return Err("random needs RANK SEED PROFILE".into());
            };
            let rank = rank.parse().map_err(|_| format!("bad rank {rank:?}"))?;
            let seed = seed.parse().map_err(|_| format!("bad seed {seed:?}"))?;
            let profile: Profile = profile.parse()?;
            msg(build::random_fan(rank, seed, profile))
        }
        _ => Err(format!("unknown fan name {name:?}")),
    }
}

fn gen(
    name: &str,
    params: &[String],
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let fan = match named_fan(name, params) {
        Ok(f) => f,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let text = fan.write_json();
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}
