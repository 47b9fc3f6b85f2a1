//! Batch verification front end.
//!
//! `qpos verify` runs a check suite (the built-in battery by default),
//! `qpos gen` emits random q-positive set specs, `qpos eval` evaluates a
//! function spec ad hoc. Exit codes: 0 ok, 1 check mismatch, 2 config error,
//! 3 internal/solver error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qpos::error::Error;
use qpos::harness::{
    self, build_registry, canonical_json, default_config, gen_random_instances_with_warnings,
    run_suite, text_summary, SuiteConfig,
};

#[derive(Parser)]
#[command(
    name = "qpos",
    version,
    about = "q-positive sets: enlargements, representative functions, property checks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a suite of checks and report pass/fail per check.
    Verify {
        /// Suite config JSON; the built-in default battery when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Run only checks with this name.
        #[arg(long)]
        only: Option<String>,
        /// Replace every check's seed.
        #[arg(long)]
        seed_override: Option<u64>,
        /// Output format on stdout: text | json.
        #[arg(long, default_value = "text")]
        format: String,
        /// Write canonical JSON here (timing goes to <out>.timing.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate random q-positive set specs (deterministic per seed).
    Gen {
        /// finite | affine | subdiff.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        count: usize,
        /// Space dimension (sets live in product(dim/2); dim must be even).
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a function spec at a point, or trace it over a grid as CSV.
    Eval {
        /// Function spec JSON (inline, or @path to read a file).
        #[arg(long = "fn")]
        func: String,
        /// Comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Evaluate the Fenchel conjugate instead of the function.
        #[arg(long)]
        conjugate: bool,
        /// lo:hi:step window; emits CSV rows `coords...,value`.
        #[arg(long, allow_hyphen_values = true)]
        csv_grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Config(_)
                | Error::Input(_)
                | Error::Contract(_)
                | Error::DimMismatch { .. }
                | Error::Json(_) => 2,
                Error::Solver(_) | Error::Unsupported { .. } | Error::Io(_) => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Verify {
            config,
            only,
            seed_override,
            format,
            out,
        } => {
            let mut cfg: SuiteConfig = match config {
                Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
                None => default_config(),
            };
            if let Some(name) = only {
                cfg.checks.retain(|c| c.check == name);
            }
            if let Some(seed) = seed_override {
                for c in &mut cfg.checks {
                    c.seed = seed;
                }
            }
            let run = run_suite(&cfg)?;
            let json = canonical_json(&run.result)?;
            match format.as_str() {
                "json" => println!("{json}"),
                "text" => print!("{}", text_summary(&run.result)),
                other => return Err(Error::config(format!("unknown format `{other}`"))),
            }
            let out_path = out.or_else(|| {
                cfg.output
                    .as_ref()
                    .and_then(|o| o.path.as_ref())
                    .map(PathBuf::from)
            });
            if let Some(path) = out_path {
                std::fs::write(&path, &json)?;
                let sidecar = path.with_extension("timing.json");
                std::fs::write(sidecar, serde_json::to_string_pretty(&run.timing)?)?;
            }
            Ok(if run.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Gen {
            kind,
            count,
            dim,
            seed,
            out,
        } => {
            let (specs, warnings) = gen_random_instances_with_warnings(&kind, count, dim, seed)?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            let named: BTreeMap<String, &harness::SetSpec> = specs
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("{kind}_{seed}_{i}"), s))
                .collect();
            let rendered = serde_json::to_string_pretty(&named)?;
            match out {
                Some(path) => std::fs::write(path, rendered)?,
                None => println!("{rendered}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval {
            func,
            at,
            conjugate,
            csv_grid,
            out,
        } => {
            let payload = if let Some(path) = func.strip_prefix('@') {
                std::fs::read_to_string(path)?
            } else {
                func
            };
            let spec: harness::FnSpec = serde_json::from_str(&payload)?;
            let mut cfg = SuiteConfig {
                schema: harness::SCHEMA.into(),
                spaces: BTreeMap::new(),
                sets: BTreeMap::new(),
                functions: BTreeMap::new(),
                enlargements: BTreeMap::new(),
                checks: vec![],
                output: None,
            };
            cfg.functions.insert("f".into(), spec);
            let reg = build_registry(&cfg)?;
            let f = reg.functions.get("f").expect("just inserted");
            let mut lines = String::new();
            if let Some(at) = at {
                let point = parse_point(&at)?;
                let v = if conjugate {
                    f.conjugate(&point)?
                } else {
                    f.eval(&point)?
                };
                lines.push_str(&format!("{v}\n"));
            } else if let Some(grid) = csv_grid {
                let (lo, hi, step) = parse_grid(&grid)?;
                let dim = f.space().dim();
                if dim > 2 {
                    return Err(Error::config("csv traces support dim <= 2"));
                }
                let steps = ((hi - lo) / step).round() as usize + 1;
                let coords: Vec<f64> = (0..steps).map(|i| lo + i as f64 * step).collect();
                let points: Vec<Vec<f64>> = if dim == 1 {
                    coords.iter().map(|&x| vec![x]).collect()
                } else {
                    coords
                        .iter()
                        .flat_map(|&x| coords.iter().map(move |&y| vec![x, y]))
                        .collect()
                };
                for p in points {
                    let v = if conjugate {
                        f.conjugate(&p)?
                    } else {
                        f.eval(&p)?
                    };
                    let cs: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
                    lines.push_str(&format!("{},{v}\n", cs.join(",")));
                }
            } else {
                return Err(Error::config("eval needs --at or --csv-grid"));
            }
            match out {
                Some(path) => std::fs::write(path, lines)?,
                None => print!("{lines}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_point(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(format!("bad coordinate `{t}`")))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<(f64, f64, f64), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::config("grid must be lo:hi:step"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::config(format!("bad grid bound `{t}`")))
        })
        .collect::<Result<_, _>>()?;
    if nums[2] <= 0.0 || nums[1] <= nums[0] {
        return Err(Error::config("grid needs lo < hi and step > 0"));
    }
    Ok((nums[0], nums[1], nums[2]))
}
