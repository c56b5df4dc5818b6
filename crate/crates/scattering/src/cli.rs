//! Command-line surface: flag parsing, stable output documents, and exit
//! codes.
//!
//! Exit codes: 0 on success / all proved checks passing, 1 on a check
//! violation, 2 on usage errors. Output is fully rendered before anything
//! is printed, so a failure never leaves a partial document behind.
//! Identical invocations produce byte-identical output: every collection is
//! serialized in a fixed total order (directions by total degree, then by
//! first coordinate) and all rationals render as canonical `p/q` strings.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::cache::DiskCache;
use crate::diagram::{check_table_consistency, factorize, ComputeCache, WallExponentTable};
use crate::group::{g_factor, DiagramParams, Direction};
use crate::poly::MultiPolynomial;
use crate::ratio::{format_rat, rat};
use crate::tau::{tau_g_expansion, tau_numeric, TauContext};
use crate::verify::{
    self, CheckStatus, VerificationReport, VerifyConfig,
};
use crate::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "csd",
    about = "Exact rank-2 scattering diagram computations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor the initial-wall composition into a wall-exponent table.
    Factorize(FactorizeArgs),
    /// Evaluate a wall-function coefficient, numerically or symbolically.
    Tau(TauArgs),
    /// Run the structural checks and report proved claims vs observations.
    Verify(VerifyArgs),
    /// Check that the full loop around the diagram composes to the identity.
    Consistency(ConsistencyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args)]
struct FactorizeArgs {
    /// First exchange parameter (positive).
    #[arg(long)]
    b: u32,
    /// Second exchange parameter (positive).
    #[arg(long)]
    c: u32,
    /// Total-degree truncation (at least 2).
    #[arg(long = "max-deg")]
    max_deg: u32,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct TauArgs {
    /// Direction as "n1,n2".
    #[arg(long, value_parser = parse_direction)]
    n: Direction,
    /// Required in numeric mode.
    #[arg(long)]
    b: Option<u32>,
    /// Required in numeric mode.
    #[arg(long)]
    c: Option<u32>,
    /// Emit the closed-form polynomial in (g, b, c) and its g-expansion
    /// instead of one numeric value.
    #[arg(long)]
    symbolic: bool,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckSet {
    Props123,
    Props56,
    Prop11,
    Props1418,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckSet,
    /// Degree range for the direction sweeps.
    #[arg(long = "max-deg", default_value_t = 8)]
    max_deg: u32,
    /// Parameter grid bound: (b, c) ranges over [1, grid]^2.
    #[arg(long, default_value_t = 6)]
    grid: u32,
    /// Largest n in the closed-form coefficient checks.
    #[arg(long = "max-n", default_value_t = 6)]
    max_n: u32,
    /// Degree bound on the primitive directions swept by props1418.
    #[arg(long = "n0-deg", default_value_t = 4)]
    n0_deg: u32,
    /// Largest multiple k in the g-slice checks.
    #[arg(long, default_value_t = 4)]
    kmax: u32,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct ConsistencyArgs {
    #[arg(long)]
    b: u32,
    #[arg(long)]
    c: u32,
    #[arg(long = "max-deg")]
    max_deg: u32,
}

fn parse_direction(s: &str) -> std::result::Result<Direction, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"n1,n2\", got {s:?}"))?;
    let n1: u32 = a.trim().parse().map_err(|e| format!("bad n1: {e}"))?;
    let n2: u32 = b.trim().parse().map_err(|e| format!("bad n2: {e}"))?;
    Direction::try_new(n1, n2).map_err(|e| e.to_string())
}

/// Parses the process arguments, runs one command, and returns the exit
/// code for `main` to report.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Factorize(args) => cmd_factorize(&args),
        Command::Tau(args) => cmd_tau(&args),
        Command::Verify(args) => cmd_verify(&args),
        Command::Consistency(args) => cmd_consistency(&args),
    };
    match outcome {
        Ok(Outcome { stdout, code }) => {
            print!("{stdout}");
            code
        }
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Result<Self> {
        Ok(Outcome {
            stdout,
            code: EXIT_OK,
        })
    }
}

fn exit_code_for(err: &crate::Error) -> i32 {
    match err {
        crate::Error::NonPositiveParams
        | crate::Error::ZeroDirection
        | crate::Error::AxisDirection(..)
        | crate::Error::DegreeOutOfRange(..)
        | crate::Error::TruncationTooSmall { .. }
        | crate::Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_VIOLATION,
    }
}

/// Loads the table from the disk cache when one is configured, computing
/// and storing it on a miss. Cache failures fall back to recomputation.
fn table_with_cache(params: DiagramParams, l: u32) -> Result<WallExponentTable> {
    let cache = DiskCache::from_env();
    if let Some(cache) = &cache {
        if let Some(table) = cache.load(params, l) {
            return Ok(table);
        }
    }
    let table = factorize(params, l)?;
    if let Some(cache) = &cache {
        cache.store(&table)?;
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// factorize

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct FactorizeDoc {
    pub schema: u32,
    pub b: u32,
    pub c: u32,
    pub max_degree: u32,
    pub walls: Vec<WallDoc>,
    pub initial_walls: Vec<InitialWallDoc>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct WallDoc {
    pub n0: [u32; 2],
    pub g_factor: u64,
    pub exponents: Vec<ExponentDoc>,
    pub tau: Vec<TauDoc>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct ExponentDoc {
    pub k: u32,
    pub u_hat: String,
    #[serde(rename = "U")]
    pub big_u: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct TauDoc {
    pub k: u32,
    pub value: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct InitialWallDoc {
    pub normal: [u32; 2],
    pub rays: [[i64; 2]; 2],
    pub function: String,
}

pub fn factorize_document(params: DiagramParams, l: u32) -> Result<FactorizeDoc> {
    let table = table_with_cache(params, l)?;
    let mut walls = Vec::new();
    for n0 in table.primitive_directions() {
        let mut exponents = Vec::new();
        let mut tau = Vec::new();
        for k in 1..=l / n0.degree() {
            let n = n0.scaled(k);
            let u_hat = table.u_hat(n);
            let tau_k = tau_numeric(&table, n);
            // trailing multiples with neither an exponent nor a coefficient
            // carry no information; drop them for a compact document
            if u_hat == rat(0) && tau_k == rat(0) {
                continue;
            }
            exponents.push(ExponentDoc {
                k,
                u_hat: format_rat(&u_hat),
                big_u: format_rat(&table.big_u(n)),
            });
            tau.push(TauDoc {
                k,
                value: format_rat(&tau_k),
            });
        }
        walls.push(WallDoc {
            n0: [n0.n1(), n0.n2()],
            g_factor: g_factor(n0, params),
            exponents,
            tau,
        });
    }
    let initial_walls = vec![
        InitialWallDoc {
            normal: [1, 0],
            rays: [[0, 1], [0, -1]],
            function: "1 + y1".into(),
        },
        InitialWallDoc {
            normal: [0, 1],
            rays: [[1, 0], [-1, 0]],
            function: "1 + y2".into(),
        },
    ];
    Ok(FactorizeDoc {
        schema: crate::cache::SCHEMA_VERSION,
        b: params.b(),
        c: params.c(),
        max_degree: l,
        walls,
        initial_walls,
    })
}

pub fn render_factorize(doc: &FactorizeDoc, format: Format) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut out = String::from("n0_1,n0_2,g_factor,k,u_hat,U,tau\n");
            for w in &doc.walls {
                for (e, t) in w.exponents.iter().zip(&w.tau) {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        w.n0[0], w.n0[1], w.g_factor, e.k, e.u_hat, e.big_u, t.value
                    ));
                }
            }
            out
        }
        Format::Table => {
            let mut out = format!(
                "wall table at (b, c) = ({}, {}), truncated at total degree {}\n",
                doc.b, doc.c, doc.max_degree
            );
            for w in &doc.initial_walls {
                out.push_str(&format!(
                    "initial wall, normal ({}, {}): {}\n",
                    w.normal[0], w.normal[1], w.function
                ));
            }
            for w in &doc.walls {
                out.push_str(&format!(
                    "n0 = ({}, {})   g = {}\n",
                    w.n0[0], w.n0[1], w.g_factor
                ));
                for (e, t) in w.exponents.iter().zip(&w.tau) {
                    out.push_str(&format!(
                        "  k = {}: u_hat = {}   U = {}   tau = {}\n",
                        e.k, e.u_hat, e.big_u, t.value
                    ));
                }
            }
            out
        }
    }
}

fn cmd_factorize(args: &FactorizeArgs) -> Result<Outcome> {
    let params = DiagramParams::new(args.b, args.c)?;
    require_depth(args.max_deg)?;
    let doc = factorize_document(params, args.max_deg)?;
    Outcome::ok(render_factorize(&doc, args.format))
}

fn require_depth(l: u32) -> Result<()> {
    if l < 2 {
        return Err(crate::Error::TruncationTooSmall { min: 2, got: l });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// tau

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct TauNumericDoc {
    pub schema: u32,
    pub n: [u32; 2],
    pub b: u32,
    pub c: u32,
    pub tau: String,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct TauSymbolicDoc {
    pub schema: u32,
    pub n: [u32; 2],
    pub polynomial: String,
    pub g_free_part: String,
    pub g_expansion: Vec<GSliceDoc>,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
pub struct GSliceDoc {
    pub k: u32,
    pub value: String,
}

pub fn tau_numeric_document(n: Direction, b: u32, c: u32) -> Result<TauNumericDoc> {
    let params = DiagramParams::new(b, c)?;
    let table = table_with_cache(params, n.degree())?;
    Ok(TauNumericDoc {
        schema: crate::cache::SCHEMA_VERSION,
        n: [n.n1(), n.n2()],
        b,
        c,
        tau: format_rat(&tau_numeric(&table, n)),
    })
}

pub fn tau_symbolic_document(n: Direction) -> Result<TauSymbolicDoc> {
    let cache = ComputeCache::new();
    let ctx = TauContext::new(&cache);
    let tau = ctx.tau_symbolic(n)?;
    let expansion = tau_g_expansion(&tau);
    Ok(TauSymbolicDoc {
        schema: crate::cache::SCHEMA_VERSION,
        n: [n.n1(), n.n2()],
        polynomial: render_poly(&tau),
        g_free_part: render_poly(&expansion.g_free_part),
        g_expansion: expansion
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, p)| GSliceDoc {
                k: i as u32 + 1,
                value: render_poly(p),
            })
            .collect(),
    })
}

fn render_poly(p: &MultiPolynomial) -> String {
    format!("{p}")
}

fn cmd_tau(args: &TauArgs) -> Result<Outcome> {
    if args.symbolic {
        let doc = tau_symbolic_document(args.n)?;
        let rendered = match args.format {
            Format::Json => to_json(&doc),
            Format::Csv => {
                let mut out = String::from("k,value\n");
                for s in &doc.g_expansion {
                    out.push_str(&format!("{},{}\n", s.k, quote_csv(&s.value)));
                }
                out
            }
            Format::Table => {
                let mut out = format!(
                    "tau({}, {}) = {}\n",
                    doc.n[0], doc.n[1], doc.polynomial
                );
                for s in &doc.g_expansion {
                    out.push_str(&format!("  g^{} coefficient: {}\n", s.k, s.value));
                }
                out
            }
        };
        return Outcome::ok(rendered);
    }
    let (b, c) = match (args.b, args.c) {
        (Some(b), Some(c)) => (b, c),
        _ => {
            return Err(crate::Error::Parse(
                "numeric mode requires --b and --c (or pass --symbolic)".into(),
            ))
        }
    };
    let doc = tau_numeric_document(args.n, b, c)?;
    let rendered = match args.format {
        Format::Json => to_json(&doc),
        Format::Csv => format!("n1,n2,b,c,tau\n{},{},{},{},{}\n", doc.n[0], doc.n[1], b, c, doc.tau),
        Format::Table => format!("{}\n", doc.tau),
    };
    Outcome::ok(rendered)
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let cache = ComputeCache::new();
    let ctx = TauContext::new(&cache);
    let cfg = VerifyConfig {
        max_deg: args.max_deg,
        grid_max: args.grid,
        max_n: args.max_n,
        max_n0_deg: args.n0_deg,
        k_max: args.kmax,
    };
    let reports: Vec<VerificationReport> = match args.check {
        CheckSet::Props123 => vec![verify::verify_degree_structure(&ctx, cfg.max_deg)?],
        CheckSet::Props56 => vec![verify::verify_edge_closed_forms(&ctx, cfg.max_n, cfg.grid_max)?],
        CheckSet::Prop11 => vec![verify::verify_diagonal_expansion(&ctx, cfg.max_deg)?],
        CheckSet::Props1418 => {
            vec![verify::verify_g_slices_sweep(&ctx, cfg.max_n0_deg, cfg.k_max)?]
        }
        CheckSet::All => verify::run_all(&ctx, &cfg)?,
    };
    let all_hold = reports.iter().all(VerificationReport::proved_claims_hold);
    let rendered = match args.format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut out = String::from("check,row,status,cases,witnesses\n");
            for r in &reports {
                for row in &r.rows {
                    out.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.check,
                        quote_csv(&row.id),
                        status_name(row.status),
                        row.cases,
                        row.witnesses.len()
                    ));
                }
            }
            out
        }
        Format::Table => {
            let mut out = String::new();
            for r in &reports {
                out.push_str(&format!("check {} over {}\n", r.check, r.range));
                for row in &r.rows {
                    out.push_str(&format!(
                        "  [{}] {} ({} cases)\n",
                        status_name(row.status),
                        row.id,
                        row.cases
                    ));
                    for w in &row.witnesses {
                        let mut loc = String::new();
                        if let Some(n) = w.n {
                            loc.push_str(&format!(" n=({},{})", n.n1(), n.n2()));
                        }
                        if let (Some(b), Some(c)) = (w.b, w.c) {
                            loc.push_str(&format!(" (b,c)=({b},{c})"));
                        }
                        out.push_str(&format!("    witness{loc}: {}\n", w.detail));
                    }
                }
            }
            out.push_str(if all_hold {
                "all proved claims hold\n"
            } else {
                "PROVED CLAIM VIOLATED\n"
            });
            out
        }
    };
    Ok(Outcome {
        stdout: rendered,
        code: if all_hold { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn status_name(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::ProvedClaimHolds => "proved-claim-holds",
        CheckStatus::ProvedClaimViolated => "proved-claim-violated",
        CheckStatus::EmpiricalObservation => "empirical-observation",
    }
}

// ---------------------------------------------------------------------------
// consistency

fn cmd_consistency(args: &ConsistencyArgs) -> Result<Outcome> {
    let params = DiagramParams::new(args.b, args.c)?;
    require_depth(args.max_deg)?;
    let table = table_with_cache(params, args.max_deg)?;
    let report = check_table_consistency(&table)?;
    if report.consistent {
        return Outcome::ok(format!(
            "consistent: the full loop at (b, c) = ({}, {}) is the identity up to total degree {}\n",
            args.b, args.c, args.max_deg
        ));
    }
    let monomials: Vec<String> = report
        .failing_monomials
        .iter()
        .map(|m| format!("y1^{} y2^{}", m.n1, m.n2))
        .collect();
    Ok(Outcome {
        stdout: format!(
            "inconsistent: first failure at total degree {}; discrepancy monomials: {}\n",
            report.first_failure_degree.unwrap_or(0),
            monomials.join(", ")
        ),
        code: EXIT_VIOLATION,
    })
}

// ---------------------------------------------------------------------------

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("document serialization is infallible");
    out.push('\n');
    out
}

fn quote_csv(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
