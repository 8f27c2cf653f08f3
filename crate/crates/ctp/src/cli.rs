//! Command-line interface: argument definitions and command runners.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ctp_core::cfrac::{branched_series, jfrac_series, FractionSpec};
use ctp_core::families::{
    complete_params, families, family_info, family_reversed_rows, family_scaled_by_factorial, family_triangle,
    verify_family, ParamKind, Params,
};
use ctp_core::production::{output_matrix_of, row_polys};
use ctp_core::tp::{hankel_matrix, log_convexity_order, max_hankel_size, toeplitz_matrix};
use ctp_core::{MultiPoly, PolyMatrix, Registry};

use crate::certificate::{Certificate, Request, Timing, Verdict};
use crate::sweep::{check_tp_order_parallel, default_workers, DEFAULT_MAX_MINORS};
use crate::text;
use crate::CliError;

/// Exit code for a run whose checks all passed.
pub const EXIT_PASS: i32 = 0;
/// Exit code for a run with at least one failing check.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for invalid input or a resource guard.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ctp",
    version,
    about = "Exact triangles, continued fractions and total-positivity certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the catalogued families and their parameters.
    ListFamilies,
    /// Print a family triangle, a production-matrix output or a continued-fraction series.
    Generate(GenerateArgs),
    /// Check total positivity of a Hankel or Toeplitz matrix and write a certificate.
    Certify(CertifyArgs),
    /// Run every catalogued identity of a family and write a certificate.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Family name, see `list-families`.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as NAME=POLYNOMIAL; may be repeated.
    #[arg(short = 'p', long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    /// Shorthand for `--param a=VALUE`.
    #[arg(long, value_name = "VALUE")]
    pub a: Option<String>,
    /// Shorthand for `--param r=VALUE`.
    #[arg(long, value_name = "VALUE")]
    pub r: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum View {
    /// The lower triangle, one row per line.
    Triangle,
    /// Entries multiplied by k!.
    Scaled,
    /// Column 0, one entry per line.
    Column0,
    /// Row-generating polynomials, one per line.
    RowPolys,
    /// Reversed row-generating polynomials, one per line.
    Reversed,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Last row to print.
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
    /// What to print for a family.
    #[arg(long, value_enum, default_value_t = View::Triangle)]
    pub view: View,
    /// Production matrix as a list of blocks, e.g. `lower(1,0,1); upper(0,1,0,1)`.
    #[arg(long, conflicts_with_all = ["production_file", "sfrac", "jfrac"])]
    pub production: Option<String>,
    /// File holding a production matrix, one block per line.
    #[arg(long, conflicts_with_all = ["sfrac", "jfrac"])]
    pub production_file: Option<PathBuf>,
    /// S-fraction weights: `all-ones`, a list, `periodic: ...` or `affine: base | step`.
    #[arg(long, conflicts_with = "jfrac")]
    pub sfrac: Option<String>,
    /// Branch order of the S-fraction.
    #[arg(long, default_value_t = 1)]
    pub branches: usize,
    /// J-fraction coefficients: `all-ones` or `g0, g1, ... / b0, b1, ...`.
    #[arg(long)]
    pub jfrac: Option<String>,
    /// Number of series coefficients to print.
    #[arg(long, default_value_t = 8)]
    pub order: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MatrixKind {
    Hankel,
    Toeplitz,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Explicit sequence, comma separated.
    #[arg(long, conflicts_with = "family")]
    pub seq: Option<String>,
    /// Inclusive row range `a..b` of the family; defaults to `0..NMAX`.
    #[arg(long)]
    pub rows: Option<String>,
    /// Last row when `--rows` is not given.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Use column 0 instead of the row-generating polynomials.
    #[arg(long, conflicts_with = "reversed")]
    pub column0: bool,
    /// Use the reversed row-generating polynomials.
    #[arg(long)]
    pub reversed: bool,
    /// Multiply entry (n, k) by k! before taking row polynomials.
    #[arg(long)]
    pub scaled: bool,
    /// Check the Hankel matrix (the default).
    #[arg(long, conflicts_with = "toeplitz")]
    pub hankel: bool,
    /// Check the lower-triangular Toeplitz matrix.
    #[arg(long)]
    pub toeplitz: bool,
    /// Largest minor size to check.
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Matrix size; defaults to the largest the sequence supports.
    #[arg(long)]
    pub size: Option<usize>,
    /// Iterated log-convexity level; defaults to ORDER - 1, capped by the sequence length.
    #[arg(long)]
    pub lc_level: Option<usize>,
    /// Refuse sweeps with more minors than this.
    #[arg(long, default_value_t = DEFAULT_MAX_MINORS)]
    pub max_minors: u64,
    /// Worker threads; defaults to $CTP_WORKERS or the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Last row to check.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_family_params(reg: &mut Registry, name: &str, args: &FamilyArgs) -> Result<Params, CliError> {
    let mut given = Params::new();
    for p in &args.params {
        let (k, v) = text::parse_assignment(reg, p)?;
        given.set(&k, v);
    }
    if let Some(a) = &args.a {
        given.set("a", reg.parse(a)?);
    }
    if let Some(r) = &args.r {
        given.set("r", reg.parse(r)?);
    }
    Ok(complete_params(reg, name, &given)?)
}

fn canonical_params(reg: &Registry, params: &Params) -> std::collections::BTreeMap<String, String> {
    params.iter().map(|(k, v)| (k.to_string(), reg.format(v))).collect()
}

fn row_variable(reg: &mut Registry, name: &str, params: &Params) -> Result<MultiPoly, CliError> {
    let info = family_info(name)?;
    Ok(match info.row_variable.and_then(|v| params.get(v)) {
        Some(p) => p.clone(),
        None => reg.var("q"),
    })
}

fn require_family(args: &FamilyArgs) -> Result<&str, CliError> {
    args.family
        .as_deref()
        .ok_or_else(|| CliError::Usage("--family is required".into()))
}

fn write_lines(out: &mut dyn Write, lines: &[String]) -> Result<(), CliError> {
    for l in lines {
        writeln!(out, "{l}")?;
    }
    Ok(())
}

fn list_families(out: &mut dyn Write) -> Result<i32, CliError> {
    for f in families() {
        writeln!(out, "{} ({})", f.name, f.generator.name())?;
        writeln!(out, "    {}", f.summary)?;
        for p in f.params {
            let kind = match p.kind {
                ParamKind::Symbol => "polynomial".to_string(),
                ParamKind::Integer { min, max } => format!("integer {min}..{max}"),
            };
            let doc = if p.doc.is_empty() {
                String::new()
            } else {
                format!(", {}", p.doc)
            };
            writeln!(out, "    --param {}=... ({kind}, default {}{doc})", p.name, p.default)?;
        }
    }
    Ok(EXIT_PASS)
}

fn series_line(reg: &Registry, coeffs: &[MultiPoly]) -> String {
    coeffs.iter().map(|c| reg.format(c)).collect::<Vec<_>>().join(" ")
}

fn generate(args: &GenerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut reg = Registry::new();
    if args.sfrac.is_some() || args.jfrac.is_some() {
        if args.order == 0 {
            return Err(CliError::Usage("--order must be positive".into()));
        }
        let n = args.order - 1;
        let series = if let Some(s) = &args.sfrac {
            let w = text::parse_alpha_weights(&mut reg, args.branches, s)?;
            branched_series(&FractionSpec::BranchedS(w), n)?
        } else {
            let j = args.jfrac.as_deref().unwrap_or_default();
            let (gamma, b) = text::parse_jfrac(&mut reg, j, args.order)?;
            jfrac_series(&gamma, &b, n)?
        };
        writeln!(out, "{}", series_line(&reg, &series.coeffs()[..=n]))?;
        return Ok(EXIT_PASS);
    }
    let production = match (&args.production, &args.production_file) {
        (Some(t), _) => Some(t.clone()),
        (None, Some(path)) => Some(std::fs::read_to_string(path)?),
        (None, None) => None,
    };
    if let Some(t) = production {
        let spec = text::parse_production(&mut reg, &t, args.nmax + 1)?;
        let m = output_matrix_of(&spec, args.nmax)?;
        write_lines(out, &m.format_rows(&reg, true))?;
        return Ok(EXIT_PASS);
    }
    let name = require_family(&args.family)?;
    let params = parse_family_params(&mut reg, name, &args.family)?;
    let tri = family_triangle(name, &params, args.nmax)?;
    let lines = match args.view {
        View::Triangle => tri.format_rows(&reg, true),
        View::Scaled => family_scaled_by_factorial(&tri)?.format_rows(&reg, true),
        View::Column0 => tri.col(0).iter().map(|p| reg.format(p)).collect(),
        View::RowPolys => {
            let v = row_variable(&mut reg, name, &params)?;
            row_polys(&tri, &v).iter().map(|p| reg.format(p)).collect()
        }
        View::Reversed => {
            let v = row_variable(&mut reg, name, &params)?;
            let id = ctp_core::families::as_variable(&v)
                .ok_or_else(|| CliError::Usage("the row variable must be a single symbol to reverse".into()))?;
            family_reversed_rows(name, &params, id, args.nmax)?
                .iter()
                .map(|p| reg.format(p))
                .collect()
        }
    };
    write_lines(out, &lines)?;
    Ok(EXIT_PASS)
}

/// The sequence a certify request selects, with a canonical description.
struct Selected {
    request: Request,
    seq: Vec<MultiPoly>,
}

fn select_sequence(reg: &mut Registry, args: &CertifyArgs) -> Result<Selected, CliError> {
    let mut request = Request {
        command: "certify".into(),
        ..Request::default()
    };
    if let Some(s) = &args.seq {
        let seq = text::parse_poly_list(reg, s)?;
        request.selector = Some("explicit".into());
        return Ok(Selected { request, seq });
    }
    let name = require_family(&args.family)?;
    let params = parse_family_params(reg, name, &args.family)?;
    let (lo, hi) = match &args.rows {
        Some(r) => text::parse_row_range(r)?,
        None => (0, args.nmax),
    };
    let tri = family_triangle(name, &params, hi)?;
    let tri = if args.scaled {
        family_scaled_by_factorial(&tri)?
    } else {
        tri
    };
    let (kind, all) = if args.column0 {
        ("column0", tri.col(0))
    } else if args.reversed {
        if args.scaled {
            return Err(CliError::Usage("--scaled cannot be combined with --reversed".into()));
        }
        let v = row_variable(reg, name, &params)?;
        let id = ctp_core::families::as_variable(&v)
            .ok_or_else(|| CliError::Usage("the row variable must be a single symbol to reverse".into()))?;
        ("reversed-row-polys", family_reversed_rows(name, &params, id, hi)?)
    } else {
        let v = row_variable(reg, name, &params)?;
        ("row-polys", row_polys(&tri, &v))
    };
    let scaled = if args.scaled { " scaled" } else { "" };
    request.family = Some(name.to_string());
    request.params = canonical_params(reg, &params);
    request.selector = Some(format!("{kind}{scaled} {lo}..{hi}"));
    Ok(Selected {
        request,
        seq: all[lo..=hi].to_vec(),
    })
}

fn certify(args: &CertifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let mut reg = Registry::new();
    let Selected { mut request, seq } = select_sequence(&mut reg, args)?;
    let kind = if args.toeplitz {
        MatrixKind::Toeplitz
    } else {
        MatrixKind::Hankel
    };
    let (label, max_size) = match kind {
        MatrixKind::Hankel => ("hankel", max_hankel_size(seq.len())),
        MatrixKind::Toeplitz => ("toeplitz", seq.len()),
    };
    let size = args.size.unwrap_or(max_size);
    let m: PolyMatrix = match kind {
        MatrixKind::Hankel => hankel_matrix(&seq, size)?,
        MatrixKind::Toeplitz => toeplitz_matrix(&seq, size)?,
    };
    let lc_level = args
        .lc_level
        .unwrap_or_else(|| args.order.saturating_sub(1).min(seq.len().saturating_sub(1) / 2));
    request.matrix = Some(label.into());
    request.size = Some(size);
    request.order = Some(args.order);
    request.log_convexity_level = Some(lc_level);
    request.max_minors = Some(args.max_minors);

    let workers = args.workers.unwrap_or_else(default_workers);
    let report = check_tp_order_parallel(&m, args.order, workers, args.max_minors)?;
    let mut verdicts = vec![Verdict::from_tp(
        &format!("{label}-tp-order-{}", args.order),
        &reg,
        &report,
    )];
    if lc_level > 0 {
        let lc = log_convexity_order(&seq, lc_level)?;
        verdicts.push(Verdict::from_log_convexity(
            &format!("log-convexity-level-{lc_level}"),
            &reg,
            &lc,
        ));
    }
    let input = seq.iter().map(|p| reg.format(p)).collect();
    let timing = Timing {
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        workers,
    };
    emit(
        Certificate::new(request, input, verdicts, timing),
        args.out.as_ref(),
        out,
    )
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let start = Instant::now();
    let mut reg = Registry::new();
    let name = require_family(&args.family)?;
    let params = parse_family_params(&mut reg, name, &args.family)?;
    let outcomes = verify_family(&mut reg, name, &params, args.nmax)?;
    let request = Request {
        command: "verify".into(),
        family: Some(name.to_string()),
        params: canonical_params(&reg, &params),
        nmax: Some(args.nmax),
        ..Request::default()
    };
    let verdicts = outcomes.iter().map(Verdict::from_outcome).collect();
    let timing = Timing {
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        workers: 1,
    };
    emit(
        Certificate::new(request, Vec::new(), verdicts, timing),
        args.out.as_ref(),
        out,
    )
}

fn emit(cert: Certificate, path: Option<&PathBuf>, out: &mut dyn Write) -> Result<i32, CliError> {
    let json = cert.to_json();
    match path {
        Some(p) => {
            std::fs::write(p, &json)?;
            let failed: Vec<&str> = cert
                .verdicts
                .iter()
                .filter(|v| !v.passed)
                .map(|v| v.name.as_str())
                .collect();
            let verdict = if cert.passed {
                "PASS".to_string()
            } else {
                format!("FAIL ({})", failed.join(", "))
            };
            writeln!(out, "{verdict} {}", p.display())?;
        }
        None => out.write_all(json.as_bytes())?,
    }
    Ok(if cert.passed { EXIT_PASS } else { EXIT_FAIL })
}

/// Runs a parsed command, writing its output to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::ListFamilies => list_families(out),
        Command::Generate(a) => generate(a, out),
        Command::Certify(a) => certify(a, out),
        Command::Verify(a) => verify(a, out),
    }
}
