mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use linterm_core::model::homogenize;
use linterm_core::oracle::{box_search, simulate, DEFAULT_POINT_STEP_CAP};
use linterm_core::spectral::spectrum_of;
use linterm_core::{decide_with, parse_loop, DecisionConfig, Error, LoopProgram, ParseError, Status};
use num_bigint::BigInt;
use serde::Serialize;

const EXIT_TERMINATING: u8 = 0;
const EXIT_NONTERMINATING: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_FAILURE: u8 = 3;
const EXIT_PARSE: u8 = 64;

#[derive(Parser)]
#[command(name = "linterm", version, about = "Termination analysis for single-path linear integer loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit a JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(flatten)]
    budgets: Budgets,
}

#[derive(Subcommand)]
enum Command {
    /// Decide termination over the integers.
    Analyze { file: PathBuf },
    /// Run the loop from one initial vector.
    Simulate {
        file: PathBuf,
        /// Comma-separated initial values.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
    },
    /// Eigenvalues of the homogenized update.
    Spectrum { file: PathBuf },
    /// Multiplicative relations among the normalized eigenvalues.
    Relations { file: PathBuf },
    /// Search a box of initial vectors for one that survives.
    Box {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        bound: u64,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Quick,
    Default,
    Thorough,
}

#[derive(Args)]
struct Budgets {
    /// Budget profile scaling every default.
    #[arg(long, global = true, value_enum, env = "LINTERM_PROFILE", default_value = "default")]
    profile: Profile,
    /// Largest power allowed by the non-degeneracy reduction.
    #[arg(long, global = true)]
    power_cap: Option<u64>,
    /// Candidate vectors examined by the relation search.
    #[arg(long, global = true)]
    relation_candidates: Option<u64>,
    /// Coordinate cap of the relation search.
    #[arg(long, global = true)]
    relation_coordinates: Option<u64>,
    /// Branch-and-bound nodes per infimum.
    #[arg(long, global = true)]
    phi_nodes: Option<u64>,
    /// Class tuples examined by the region search.
    #[arg(long, global = true)]
    max_regions: Option<u64>,
    /// LP solves per integer-feasibility query.
    #[arg(long, global = true)]
    lp_nodes: Option<u64>,
    /// Largest orbit index used by the orbit-hull search.
    #[arg(long, global = true)]
    hull_horizon: Option<u64>,
    /// Cap on the eventual-positivity threshold.
    #[arg(long, global = true)]
    threshold_cap: Option<u64>,
    /// Total simulation steps allowed for a box search.
    #[arg(long, global = true)]
    point_step_cap: Option<u64>,
    /// Fail instead of reporting UNKNOWN.
    #[arg(long, global = true)]
    strict: bool,
}

impl Budgets {
    fn config(&self) -> DecisionConfig {
        let mut cfg = DecisionConfig::default();
        let scale = |v: u64| match self.profile {
            Profile::Quick => (v / 10).max(1),
            Profile::Default => v,
            Profile::Thorough => v.saturating_mul(10),
        };
        cfg.relations.max_candidates = scale(cfg.relations.max_candidates);
        cfg.phi_nodes = scale(cfg.phi_nodes);
        cfg.max_regions = scale(cfg.max_regions);
        cfg.geometry.nodes = scale(cfg.geometry.nodes);
        cfg.geometry.subsets = scale(cfg.geometry.subsets);
        let set = |slot: &mut u64, v: Option<u64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.power_cap, self.power_cap);
        set(&mut cfg.relations.max_candidates, self.relation_candidates);
        set(&mut cfg.relations.coordinate_cap, self.relation_coordinates);
        set(&mut cfg.phi_nodes, self.phi_nodes);
        set(&mut cfg.max_regions, self.max_regions);
        set(&mut cfg.geometry.nodes, self.lp_nodes);
        set(&mut cfg.hull_horizon, self.hull_horizon);
        set(&mut cfg.threshold_cap, self.threshold_cap);
        cfg.strict = self.strict;
        cfg
    }
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Self {
        Failure::Core(e.into())
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Parse(_) | Error::InvalidProgram(_)) => EXIT_PARSE,
            Failure::Core(Error::Budget(_) | Error::PowerCap { .. }) => EXIT_UNKNOWN,
            _ => EXIT_FAILURE,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(s) => s.clone(),
        }
    }
}

fn load(file: &Path) -> Result<LoopProgram, Failure> {
    let src = std::fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    Ok(parse_loop(&src)?)
}

fn parse_init(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Usage(format!("--init {s}: {e}")))
}

fn emit<T: Serialize>(json: bool, report: &T, human: impl FnOnce() -> String) {
    let text = if json {
        serde_json::to_string_pretty(report).expect("report serializes")
    } else {
        human()
    };
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = cli.budgets.config();
    match &cli.command {
        Command::Analyze { file } => {
            let p = load(file)?;
            let start = Instant::now();
            let v = decide_with(&p, &cfg)?;
            let r = report::analysis_report(&file.display().to_string(), &p, &v, start.elapsed(), &cfg.relations);
            emit(cli.json, &r, || {
                let mut out = vec![r.verdict.to_string()];
                if let Some(w) = &r.witness {
                    out.push(format!("witness: ({}) [{}]", w.point.join(", "), w.kind));
                }
                out.push(format!("reduction power: {}, guards: {}", r.reduction.power, r.reduction.guard_count));
                out.extend(r.diagnostics.iter().map(|d| format!("note: {d}")));
                out.join("\n")
            });
            Ok(match v.status {
                Status::Terminating => EXIT_TERMINATING,
                Status::NonTerminating => EXIT_NONTERMINATING,
                Status::Unknown => EXIT_UNKNOWN,
            })
        }
        Command::Simulate { file, init, steps } => {
            let p = load(file)?;
            let x = parse_init(init)?;
            p.check_arity(&x)?;
            let res = simulate(&p, &x, *steps);
            let r = report::simulate_report(&file.display().to_string(), &res, *steps);
            emit(cli.json, &r, || match r.terminated_at {
                Some(n) => format!("terminated at {n}"),
                None => format!("survived {steps} steps"),
            });
            Ok(0)
        }
        Command::Spectrum { file } => {
            let p = load(file)?;
            let sp = spectrum_of(&homogenize(&p));
            let r = report::SpectrumCommandReport {
                command: "spectrum",
                file: file.display().to_string(),
                dimension: p.dimension,
                spectrum: report::spectrum_report(&sp),
            };
            emit(cli.json, &r, || {
                let mut out = vec![format!("characteristic polynomial: {}", r.spectrum.char_poly)];
                for e in &r.spectrum.eigenvalues {
                    let im = match e.im.value.strip_prefix('-') {
                        Some(m) => format!("- {m}"),
                        None => format!("+ {}", e.im.value),
                    };
                    out.push(format!(
                        "{}: root of {} (multiplicity {}) ≈ {} {im}i, |λ| ≈ {}",
                        e.index, e.min_poly, e.multiplicity, e.re.value, e.modulus.approx.value
                    ));
                }
                out.join("\n")
            });
            Ok(0)
        }
        Command::Relations { file } => {
            let p = load(file)?;
            let sp = spectrum_of(&homogenize(&p));
            let r = report::RelationsReport {
                command: "relations",
                file: file.display().to_string(),
                spectrum: report::spectrum_report(&sp),
                groups: report::relation_groups(&sp, &cfg.relations),
            };
            emit(cli.json, &r, || {
                if r.groups.is_empty() {
                    return "no non-real eigenvalues".to_string();
                }
                r.groups
                    .iter()
                    .map(|g| {
                        let basis: Vec<String> = g
                            .basis
                            .iter()
                            .map(|b| format!("({})", b.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")))
                            .collect();
                        format!("eigenvalues {:?}: basis [{}], complete {}", g.eigenvalues, basis.join(", "), g.complete)
                    })
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            if cfg.strict && r.groups.iter().any(|g| !g.complete) {
                return Err(Error::Budget("relation basis incomplete".into()).into());
            }
            Ok(0)
        }
        Command::Box { file, bound, steps } => {
            let p = load(file)?;
            let cap = cli.budgets.point_step_cap.unwrap_or(DEFAULT_POINT_STEP_CAP);
            let res = box_search(&p, *bound, *steps, cap)?;
            let r = report::box_report(&file.display().to_string(), &res, *bound, *steps);
            emit(cli.json, &r, || match &r.survivor {
                Some(x) => format!("survivor: ({})", x.join(", ")),
                None => format!("no survivor in [-{bound}, {bound}]^{} within {steps} steps", p.dimension),
            });
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE } else { 0 });
        }
    };
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .expect("thread pool is configured once");
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
