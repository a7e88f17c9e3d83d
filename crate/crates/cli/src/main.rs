//! Command-line front end for the disk-entropy library.
//!
//! Every subcommand is a pure function of its flags and input files:
//! outputs embed the tool version and the exact metric configuration, all
//! randomness is seeded, and files are written atomically (temp file +
//! rename), so reruns produce byte-identical results.
//!
//! Exit codes: 0 success, 1 verification violation, 2 usage or validation
//! error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use disk_entropy::classes::koebe;
use disk_entropy::constructions::{
    lower_bound_curve, net_upper_point, packing_certificate_in, packing_members_in,
    quantize_to_net, upper_bound_curve, PackingFamily,
};
use disk_entropy::estimator::{estimate_report, exponent_fit, fit_box_dimension, SampleSpec};
use disk_entropy::metric::{metric_d, truncation_tail_bound};
use disk_entropy::verify::{run_suites, SuiteId};
use disk_entropy::{ClassId, MetricConfig, TailMode, TaylorPoly};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest member count the pack subcommand will materialize.
const ENUMERATE_LIMIT: u128 = 10_000;

#[derive(Parser, Debug)]
#[command(
    name = "disk-entropy",
    version,
    about = "Certified metric-entropy bounds for holomorphic function classes on the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Metric configuration flags shared by every subcommand. Precedence:
/// explicit flags, then the config file, then built-in defaults.
#[derive(Args, Debug)]
struct ConfigArgs {
    /// JSON metric configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Geometric term weight, in (0, 1).
    #[arg(long)]
    lambda: Option<f64>,
    /// Exhaustion radius exponent, > 0.
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of explicit metric terms J.
    #[arg(long = "metric-terms")]
    metric_terms: Option<u32>,
    /// Circle samples per term M.
    #[arg(long = "circle-samples")]
    circle_samples: Option<u32>,
}

impl ConfigArgs {
    fn resolve(&self) -> Result<MetricConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
                MetricConfig::from_json_str(&text)
                    .map_err(|e| format!("bad config {}: {e}", path.display()))?
            }
            None => MetricConfig::default(),
        };
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.metric_terms {
            cfg.terms = v;
        }
        if let Some(v) = self.circle_samples {
            cfg.samples = v;
        }
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified distance between two coefficient files.
    Metric {
        /// First coefficient file ({"coeffs": [[re, im], ...]}).
        f: PathBuf,
        /// Second coefficient file.
        g: PathBuf,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output path (stdout when omitted).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Separation certificate for the (n, K) packing family.
    Pack {
        /// Family degree (n >= 2).
        #[arg(long)]
        n: u32,
        /// Index range per coefficient (K >= 1).
        #[arg(long = "K")]
        k: u64,
        /// Family variant: A or convex.
        #[arg(long, default_value = "A")]
        class: String,
        /// Also list the members (allowed for counts up to 10^4).
        #[arg(long)]
        enumerate: bool,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output path (stdout when omitted).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Net certificate at degree n, or quantization of an input polynomial.
    Net {
        /// Truncation degree (n >= 1).
        #[arg(long)]
        n: u32,
        /// Grid parameter; required with --quantize, derived otherwise.
        #[arg(long = "K")]
        k: Option<u64>,
        /// Coefficient file to quantize instead of emitting a certificate.
        #[arg(long, value_name = "PATH")]
        quantize: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output path (stdout when omitted).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Lower/upper count-curve CSV over a degree range.
    Bounds {
        /// Smallest degree (>= 2).
        #[arg(long = "n-min", default_value_t = 2)]
        n_min: u32,
        /// Largest degree.
        #[arg(long = "n-max", default_value_t = 20)]
        n_max: u32,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// CSV output path.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Greedy packing/covering counts on a sampled class slice.
    Estimate {
        /// Class to sample: A or B.
        #[arg(long, default_value = "A")]
        class: String,
        /// Sample degree (>= 2).
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Number of samples.
        #[arg(long, default_value_t = 6000)]
        count: u32,
        /// RNG seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Ladder value; repeat for several (default 0.05 0.02 0.01).
        #[arg(long = "delta", value_name = "F")]
        deltas: Vec<f64>,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// CSV output path; a JSON summary lands next to it.
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Run a self-check suite; exits 1 on any violation.
    Verify {
        /// Suite: lemma-ca, lemma-cb, packing, net, sharpness,
        /// metric-axioms, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Randomized trials per check.
        #[arg(long, default_value_t = 100)]
        trials: u32,
        /// RNG seed.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Koebe coefficients, or the sharpness sandwich table.
    Koebe {
        /// Truncation degree for coefficient output.
        #[arg(long)]
        n: Option<u32>,
        /// Emit the sharpness/truncation table instead of coefficients.
        #[arg(long)]
        sharpness: bool,
        /// Smallest table degree.
        #[arg(long = "n-min", default_value_t = 25)]
        n_min: u32,
        /// Largest table degree (doubling steps from n-min).
        #[arg(long = "n-max", default_value_t = 400)]
        n_max: u32,
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Output path (stdout when omitted).
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Metric { f, g, cfg, out } => {
            let cfg = cfg.resolve()?;
            let pf = read_poly(&f)?;
            let pg = read_poly(&g)?;
            let d = metric_d(&pf, &pg, &cfg).map_err(|e| e.to_string())?;
            let doc = json!({
                "version": VERSION,
                "config": cfg,
                "lo": d.lo,
                "hi": d.hi,
            });
            emit(out.as_deref(), &pretty(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pack {
            n,
            k,
            class,
            enumerate,
            cfg,
            out,
        } => {
            let cfg = cfg.resolve()?;
            let family: PackingFamily = class
                .parse()
                .map_err(|e: disk_entropy::Error| e.to_string())?;
            let cert = packing_certificate_in(family, n, k, &cfg).map_err(|e| e.to_string())?;
            let mut doc = json!({
                "version": VERSION,
                "config": cfg,
                "certificate": cert,
            });
            if enumerate {
                if cert.count > ENUMERATE_LIMIT {
                    return Err(format!(
                        "refusing to enumerate {} members (limit {ENUMERATE_LIMIT})",
                        cert.count
                    ));
                }
                let members: Vec<Vec<[f64; 2]>> = packing_members_in(family, n, k)
                    .map_err(|e| e.to_string())?
                    .map(|m| m.coeffs().iter().map(|c| [c.re, c.im]).collect())
                    .collect();
                doc["members"] = json!(members);
            }
            emit(out.as_deref(), &pretty(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Net {
            n,
            k,
            quantize,
            cfg,
            out,
        } => {
            let cfg = cfg.resolve()?;
            let doc = match quantize {
                Some(path) => {
                    let grid = k.ok_or("--K is required with --quantize")?;
                    let p = read_poly(&path)?;
                    let (q, errors) = quantize_to_net(&p, n, grid).map_err(|e| e.to_string())?;
                    let coeffs: Vec<[f64; 2]> = q.coeffs().iter().map(|c| [c.re, c.im]).collect();
                    let max_error = errors.iter().cloned().fold(0.0f64, f64::max);
                    json!({
                        "version": VERSION,
                        "config": cfg,
                        "n": n,
                        "K": grid,
                        "coeffs": coeffs,
                        "errors": errors,
                        "max_error": max_error,
                    })
                }
                None => {
                    if k.is_some() {
                        return Err("--K only applies with --quantize; \
                                    certificate grids are derived"
                            .into());
                    }
                    let cert = net_upper_point(n, &cfg).map_err(|e| e.to_string())?;
                    json!({
                        "version": VERSION,
                        "config": cfg,
                        "certificate": cert,
                    })
                }
            };
            emit(out.as_deref(), &pretty(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds {
            n_min,
            n_max,
            cfg,
            out,
        } => {
            let cfg = cfg.resolve()?;
            let lower = lower_bound_curve(&cfg, n_min, n_max).map_err(|e| e.to_string())?;
            let upper = upper_bound_curve(&cfg, n_min, n_max).map_err(|e| e.to_string())?;
            let mut csv = csv_preamble(&cfg);
            csv.push_str("n,delta_lower,log_count_lower,delta_upper,log_count_upper\n");
            for (lo, up) in lower.iter().zip(&upper) {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    lo.n, lo.delta, lo.log_count, up.delta, up.log_count
                ));
            }
            write_atomic(&out, csv.as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Estimate {
            class,
            degree,
            count,
            seed,
            deltas,
            cfg,
            out,
        } => {
            let cfg = cfg.resolve()?;
            let class: ClassId = class
                .parse()
                .map_err(|e: disk_entropy::Error| e.to_string())?;
            let deltas = if deltas.is_empty() {
                disk_entropy::tolerances::DELTA_LADDER.to_vec()
            } else {
                deltas
            };
            let spec = SampleSpec {
                class,
                degree,
                count,
                seed,
            };
            let report = estimate_report(&spec, &deltas, &cfg).map_err(|e| e.to_string())?;
            let mut csv = csv_preamble(&cfg);
            csv.push_str("delta,pack_count,cover_count\n");
            for (i, d) in report.deltas.iter().enumerate() {
                csv.push_str(&format!(
                    "{},{},{}\n",
                    d, report.pack_counts[i], report.cover_counts[i]
                ));
            }
            write_atomic(&out, csv.as_bytes())?;
            let powers = exponent_fit(&report, cfg.alpha).ok();
            let box_dimension = fit_box_dimension(&report.deltas, &report.cover_counts).ok();
            let doc = json!({
                "version": VERSION,
                "config": cfg,
                "report": report,
                "powers": powers,
                "box_dimension": box_dimension,
            });
            write_atomic(&out.with_extension("json"), pretty(&doc).as_bytes())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            trials,
            seed,
            cfg,
        } => {
            let cfg = cfg.resolve()?;
            let id: SuiteId = suite
                .parse()
                .map_err(|e: disk_entropy::Error| e.to_string())?;
            let reports = run_suites(id, &cfg, trials, seed).map_err(|e| e.to_string())?;
            println!("# disk-entropy {VERSION} verify suite={suite} trials={trials} seed={seed}");
            let mut all_passed = true;
            for report in &reports {
                for check in &report.checks {
                    if check.passed {
                        println!("PASS {}/{}", report.suite, check.name);
                    } else {
                        all_passed = false;
                        println!("FAIL {}/{}: {}", report.suite, check.name, check.detail);
                    }
                }
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            println!("{passed}/{} suites passed", reports.len());
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Koebe {
            n,
            sharpness,
            n_min,
            n_max,
            cfg,
            out,
        } => {
            let cfg = cfg.resolve()?;
            if sharpness {
                let mut csv = csv_preamble(&cfg);
                csv.push_str("n,sharpness_lower,truncation_exact\n");
                let mut m = n_min;
                while m <= n_max {
                    let floor = disk_entropy::constructions::koebe_sharpness_lower(m, &cfg)
                        .map_err(|e| e.to_string())?;
                    let ceil = truncation_tail_bound(m, &cfg, TailMode::Exact)
                        .map_err(|e| e.to_string())?;
                    csv.push_str(&format!("{m},{floor},{ceil}\n"));
                    match m.checked_mul(2) {
                        Some(next) => m = next,
                        None => break,
                    }
                }
                match out {
                    Some(path) => write_atomic(&path, csv.as_bytes())?,
                    None => print!("{csv}"),
                }
                return Ok(ExitCode::SUCCESS);
            }
            let degree = n.ok_or("--n is required without --sharpness")?;
            let p = koebe(degree).map_err(|e| e.to_string())?;
            let coeffs: Vec<[f64; 2]> = p.coeffs().iter().map(|c| [c.re, c.im]).collect();
            let doc = json!({
                "version": VERSION,
                "coeffs": coeffs,
            });
            emit(out.as_deref(), &pretty(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_poly(path: &Path) -> Result<TaylorPoly, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    TaylorPoly::from_json_str(&text)
        .map_err(|e| format!("bad coefficients {}: {e}", path.display()))
}

fn pretty(doc: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("serializable value");
    text.push('\n');
    text
}

fn csv_preamble(cfg: &MetricConfig) -> String {
    format!(
        "# disk-entropy {VERSION}\n# config {}\n",
        serde_json::to_string(cfg).expect("config serializes")
    )
}

/// Writes through a temp file in the target directory and renames into
/// place, so readers never see a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), String> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| format!("cannot create temp file in {}: {e}", dir.display()))?;
    tmp.write_all(bytes)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    tmp.persist(path)
        .map_err(|e| format!("cannot persist {}: {e}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
