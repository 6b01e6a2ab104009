//! `z2rep`: exact verifications and computations for the ℤ₂×ℤ₂-graded osp(1|2).

mod config;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use z2rep::algebra::{AlgebraElement, Generator, GradedDegree, StructureTable};
use z2rep::cartan::{build_h_module, classify, CartanError};
use z2rep::rational::{format_rational, frac, parse_rational, sign, Rational};
use z2rep::singular::{find_singular, sweep, ClosedFormMatch, SingularReportRecord};
use z2rep::submodule::{classify_module, quotient_dims, ClassifyOptions, LevelDims, DEFAULT_DETECTION_CAP};
use z2rep::verma::{sectors_for_level, VermaError, VermaKind};

use config::{OutputFormat, Overrides, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error(transparent)]
    Verma(#[from] VermaError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
    #[error("cannot encode output: {0}")]
    Encode(String),
}

#[derive(Parser)]
#[command(name = "z2rep", version, about = "Exact representation theory of the Z2xZ2-graded osp(1|2)")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for sampled checks
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Highest level visited by sweeps and infinite-dimensional tables
    #[arg(long, global = true)]
    level_cap: Option<u32>,
    /// Largest M considered when scanning for singular-vector constraints
    #[arg(long, global = true)]
    m_cap: Option<u32>,
    /// Number of sampled elements in spot checks
    #[arg(long, global = true)]
    samples: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check antisymmetry, degree additivity and the graded Jacobi identity
    VerifyAlgebra {
        /// Overwrite one bracket before checking, e.g. "[R,Lp]=Lp"
        #[arg(long)]
        mutate: Vec<String>,
    },
    /// Singular vectors of a Verma module
    Singular {
        #[command(flatten)]
        module: ModuleArgs,
        /// Level to search
        #[arg(long, conflicts_with = "sweep", required_unless_present = "sweep")]
        level: Option<u32>,
        /// Search every level up to --level-cap
        #[arg(long)]
        sweep: bool,
        /// Restrict to one degree sector, e.g. "(0,1)" or 01
        #[arg(long, value_parser = parse_degree)]
        sector: Option<GradedDegree>,
    },
    /// Which irreducible module the Verma module leads to
    Classify {
        #[command(flatten)]
        module: ModuleArgs,
    },
    /// Verma, submodule and quotient dimensions per level
    Dims {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// Decompose a chain module over the Cartan subalgebra
    Cartan {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
        r: Rational,
        /// Chain coefficients, comma separated
        #[arg(long, value_delimiter = ',', value_parser = parse_rational_arg, allow_hyphen_values = true)]
        c: Vec<Rational>,
    },
    /// The structure constants
    BracketTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Mr,
    Mrl,
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    r: Rational,
    #[arg(long, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    lambda: Option<Rational>,
}

impl ModuleArgs {
    fn to_kind(&self) -> Result<VermaKind, CliError> {
        match (self.kind, &self.lambda) {
            (KindArg::Mr, None) => Ok(VermaKind::mr(self.r.clone())),
            (KindArg::Mr, Some(_)) => Err(CliError::Usage("--lambda only applies to --kind mrl".into())),
            (KindArg::Mrl, Some(l)) => Ok(VermaKind::mr_lambda(self.r.clone(), l.clone())?),
            (KindArg::Mrl, None) => Err(CliError::Usage("--kind mrl needs --lambda".into())),
        }
    }
}

fn parse_rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_degree(s: &str) -> Result<GradedDegree, String> {
    s.parse().map_err(|e: z2rep::algebra::ParseDegreeError| e.to_string())
}

/// What a command produced: its records and whether every check passed.
struct Outcome {
    json: String,
    csv: String,
    passed: bool,
}

fn encode<T: Serialize, R: Serialize>(value: &T, rows: &[R], passed: bool) -> Result<Outcome, CliError> {
    let mut json = serde_json::to_string_pretty(value).map_err(|e| CliError::Encode(e.to_string()))?;
    json.push('\n');
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Encode(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Encode(e.to_string()))?;
    let csv = String::from_utf8(bytes).map_err(|e| CliError::Encode(e.to_string()))?;
    Ok(Outcome { json, csv, passed })
}

#[derive(Serialize)]
struct AlgebraRecord {
    passed: bool,
    pairs_checked: usize,
    triples_checked: usize,
    antisymmetry_failures: usize,
    degree_failures: usize,
    jacobi_failures: usize,
    first_antisymmetry_failure: Option<[String; 2]>,
    first_degree_failure: Option<[String; 2]>,
    first_jacobi_failure: Option<JacobiRecord>,
    spot_check: SpotCheckRecord,
}

#[derive(Serialize)]
struct JacobiRecord {
    triple: [String; 3],
    residual: String,
}

#[derive(Serialize)]
struct SpotCheckRecord {
    seed: u64,
    samples: u32,
    failures: u32,
}

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    evaluated: usize,
    failures: usize,
    first_counterexample: String,
}

fn random_homogeneous(rng: &mut ChaCha8Rng) -> AlgebraElement {
    let degree = GradedDegree::ALL[rng.gen_range(0..4)];
    let mut x = AlgebraElement::zero();
    for g in Generator::ALL.into_iter().filter(|g| g.degree() == degree) {
        x.add_term(g, frac(rng.gen_range(-9..=9), rng.gen_range(1..=9)));
    }
    x
}

/// Graded Jacobi on random homogeneous elements, through the bilinear bracket.
fn jacobi_spot_check(table: &StructureTable, seed: u64, samples: u32) -> u32 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    for _ in 0..samples {
        let xs: Vec<AlgebraElement> = (0..3).map(|_| random_homogeneous(&mut rng)).collect();
        let deg = |x: &AlgebraElement| x.homogeneous_degree().unwrap_or(GradedDegree::ZERO);
        let (a, b, c) = (deg(&xs[0]), deg(&xs[1]), deg(&xs[2]));
        let t1 = table.bracket(&xs[0], &table.bracket(&xs[1], &xs[2])).scale(&sign(a.dot(c) as i64));
        let t2 = table.bracket(&xs[1], &table.bracket(&xs[2], &xs[0])).scale(&sign(a.dot(b) as i64));
        let t3 = table.bracket(&xs[2], &table.bracket(&xs[0], &xs[1])).scale(&sign(b.dot(c) as i64));
        if !t1.add(&t2).add(&t3).is_zero() {
            failures += 1;
        }
    }
    failures
}

fn cmd_verify_algebra(cfg: &RunConfig, mutate: &[String]) -> Result<Outcome, CliError> {
    let mut table = StructureTable::standard();
    for m in mutate {
        table
            .apply_mutation(m)
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let report = table.verify_axioms();
    let spot_failures = jacobi_spot_check(&table, cfg.seed, cfg.samples);
    let pair = |p: (Generator, Generator)| [p.0.name().to_string(), p.1.name().to_string()];
    let record = AlgebraRecord {
        passed: report.passed() && spot_failures == 0,
        pairs_checked: report.pairs_checked,
        triples_checked: report.triples_checked,
        antisymmetry_failures: report.antisymmetry_failures,
        degree_failures: report.degree_failures,
        jacobi_failures: report.jacobi_failures,
        first_antisymmetry_failure: report.first_antisymmetry_failure.map(pair),
        first_degree_failure: report.first_degree_failure.map(pair),
        first_jacobi_failure: report.first_jacobi_failure.as_ref().map(|f| JacobiRecord {
            triple: [f.triple.0, f.triple.1, f.triple.2].map(|g| g.name().to_string()),
            residual: f.residual.to_string(),
        }),
        spot_check: SpotCheckRecord {
            seed: cfg.seed,
            samples: cfg.samples,
            failures: spot_failures,
        },
    };
    let show_pair = |p: &Option<[String; 2]>| p.as_ref().map(|[x, y]| format!("[{x},{y}]")).unwrap_or_default();
    let rows = [
        CheckRow {
            check: "antisymmetry",
            evaluated: report.pairs_checked,
            failures: report.antisymmetry_failures,
            first_counterexample: show_pair(&record.first_antisymmetry_failure),
        },
        CheckRow {
            check: "degree",
            evaluated: report.pairs_checked,
            failures: report.degree_failures,
            first_counterexample: show_pair(&record.first_degree_failure),
        },
        CheckRow {
            check: "jacobi",
            evaluated: report.triples_checked,
            failures: report.jacobi_failures,
            first_counterexample: record
                .first_jacobi_failure
                .as_ref()
                .map(|f| format!("({}) -> {}", f.triple.join(","), f.residual))
                .unwrap_or_default(),
        },
        CheckRow {
            check: "jacobi_spot_check",
            evaluated: cfg.samples as usize,
            failures: spot_failures as usize,
            first_counterexample: String::new(),
        },
    ];
    encode(&record, &rows, record.passed)
}

#[derive(Serialize)]
struct SingularRow {
    kind: String,
    r: String,
    lambda: String,
    level: u32,
    sector: String,
    nullity: usize,
    closed_form: String,
    #[serde(rename = "M")]
    m: String,
    closed_form_match: ClosedFormMatch,
    rtilde_computed: String,
    rtilde_stated: String,
}

fn cmd_singular(
    cfg: &RunConfig,
    module: &ModuleArgs,
    level: Option<u32>,
    do_sweep: bool,
    sector: Option<GradedDegree>,
) -> Result<Outcome, CliError> {
    let kind = module.to_kind()?;
    let reports = if do_sweep {
        sweep(&kind, cfg.level_cap)
            .into_iter()
            .filter(|r| sector.is_none_or(|s| r.sector == s))
            .collect()
    } else {
        let level = level.expect("clap requires --level without --sweep");
        if level == 0 {
            return Err(CliError::Usage("--level must be positive".into()));
        }
        let mut sectors = sectors_for_level(level).to_vec();
        sectors.sort();
        if let Some(s) = sector {
            if !sectors.contains(&s) {
                return Err(CliError::Usage(format!("sector {s} does not occur at level {level}")));
            }
            sectors = vec![s];
        }
        sectors
            .into_iter()
            .map(|s| find_singular(&kind, level, s).expect("sector checked above"))
            .collect::<Vec<_>>()
    };
    let records: Vec<SingularReportRecord> = reports.iter().map(|r| r.to_record()).collect();
    let passed = records
        .iter()
        .all(|r| r.closed_form_match != ClosedFormMatch::Mismatch);
    let rows: Vec<SingularRow> = records
        .iter()
        .map(|r| SingularRow {
            kind: r.kind.clone(),
            r: r.r.clone(),
            lambda: r.lambda.clone().unwrap_or_default(),
            level: r.level,
            sector: r.sector.clone(),
            nullity: r.nullspace.len(),
            closed_form: r.closed_form.map(|c| c.to_string()).unwrap_or_default(),
            m: r.m.map(|m| m.to_string()).unwrap_or_default(),
            closed_form_match: r.closed_form_match,
            rtilde_computed: r.rtilde.as_ref().and_then(|t| t.computed.clone()).unwrap_or_default(),
            rtilde_stated: r.rtilde.as_ref().map(|t| t.stated.clone()).unwrap_or_default(),
        })
        .collect();
    encode(&records, &rows, passed)
}

fn cmd_classify(cfg: &RunConfig, module: &ModuleArgs) -> Result<Outcome, CliError> {
    let kind = module.to_kind()?;
    let opts = ClassifyOptions {
        detection_cap: cfg.m_cap.unwrap_or(DEFAULT_DETECTION_CAP),
        level_cap: cfg.level_cap,
    };
    let verdict = classify_module(&kind, &opts);
    let record = verdict.to_record();
    let passed = verdict.singular_vectors_verified && verdict.quotient_singular_levels.is_empty();
    encode(&record, &record.per_level, passed)
}

#[derive(Serialize)]
struct DimsRecord {
    kind: String,
    r: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<String>,
    per_level: Vec<LevelDims>,
}

fn cmd_dims(cfg: &RunConfig, module: &ModuleArgs, max_level: Option<u32>) -> Result<Outcome, CliError> {
    let kind = module.to_kind()?;
    let per_level = quotient_dims(&kind, max_level.unwrap_or(cfg.level_cap));
    let record = DimsRecord {
        kind: kind.tag().to_string(),
        r: format_rational(kind.r()),
        lambda: kind.lambda().map(format_rational),
        per_level,
    };
    encode(&record, &record.per_level, true)
}

#[derive(Serialize)]
struct ConstituentRow {
    kind: String,
    r: String,
    lambda: String,
    dim: usize,
}

fn cmd_cartan(n: usize, r: &Rational, c: &[Rational]) -> Result<Outcome, CliError> {
    let module = build_h_module(n, r.clone(), c.to_vec())?;
    let report = classify(&module);
    let rows: Vec<ConstituentRow> = report
        .constituents
        .iter()
        .map(|k| ConstituentRow {
            kind: serde_json::to_value(k.kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default(),
            r: format_rational(&k.r),
            lambda: k.lambda.as_ref().map(format_rational).unwrap_or_default(),
            dim: k.dim,
        })
        .collect();
    encode(&report, &rows, true)
}

#[derive(Serialize)]
struct BracketRow {
    x: String,
    y: String,
    result: String,
}

fn cmd_bracket_table() -> Result<Outcome, CliError> {
    let table = StructureTable::standard();
    let records = table.to_records();
    let rows: Vec<BracketRow> = table
        .entries()
        .map(|((x, y), v)| BracketRow {
            x: x.name().to_string(),
            y: y.name().to_string(),
            result: v.to_string(),
        })
        .collect();
    encode(&records, &rows, true)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::resolve(
        std::env::var_os("Z2REP_CONFIG").map(PathBuf::from),
        Overrides {
            level_cap: cli.level_cap,
            m_cap: cli.m_cap,
            samples: cli.samples,
            seed: cli.seed,
            format: cli.format,
            out: cli.out,
        },
    )?;
    let outcome = match &cli.command {
        Command::VerifyAlgebra { mutate } => cmd_verify_algebra(&cfg, mutate)?,
        Command::Singular {
            module,
            level,
            sweep,
            sector,
        } => cmd_singular(&cfg, module, *level, *sweep, *sector)?,
        Command::Classify { module } => cmd_classify(&cfg, module)?,
        Command::Dims { module, max_level } => cmd_dims(&cfg, module, *max_level)?,
        Command::Cartan { n, r, c } => cmd_cartan(*n, r, c)?,
        Command::BracketTable => cmd_bracket_table()?,
    };
    let text = match cfg.output_format {
        OutputFormat::Json => outcome.json,
        OutputFormat::Csv => outcome.csv,
    };
    match &cfg.output_path {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
