use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use qstar_core::algebra::random_star_algebra;
use qstar_core::cross::{cross_norm, CrossOptions, TensorElement};
use qstar_core::lp::make_lp_pair;
use qstar_core::{CrossNorm, NormSpec, QuasiPair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bundled;
use crate::error::{CliError, CliResult, Outcome};
use crate::instance::{parse_matrix, parse_vector, InstanceFile};
use crate::report::Report;
use crate::suites::{self, Catalog, Config, Suite};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "qstar", version, about = "Checks quasi *-algebra pairs, cross-norms and representability")]
pub struct Cli {
    /// Master seed; `QSTAR_SEED` takes precedence when set.
    #[arg(long, global = true, default_value_t = qstar_core::DEFAULT_SEED)]
    pub seed: u64,
    /// Relative tolerance for residual checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Restrict to one cross-norm (lambda, gamma, h).
    #[arg(long, global = true)]
    pub crossnorm: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Instance file or bundled label; repeatable.
    #[arg(long = "instance", global = true)]
    pub instances: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate cross-norms of a tensor element.
    Crossnorm {
        /// Right factor (file or bundled label); defaults to the first `--instance`.
        #[arg(long)]
        right: Option<String>,
        /// Coefficient matrix as JSON rows.
        #[arg(long, conflicts_with_all = ["x", "y"])]
        z: Option<String>,
        /// Left vector of an elementary tensor, as JSON.
        #[arg(long, requires = "y")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        y: Option<String>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Print an instance file.
    Generate {
        #[arg(value_enum)]
        kind: GenerateKind,
        /// Grid size for `lp-grid`.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Exponent for `lp-grid`.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Matrix size for `hilbert`.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Dimension cap for `random-star-algebra`.
        #[arg(long, default_value_t = 4)]
        max_dim: usize,
    },
    /// Representability and GNS construction for the functionals of each instance.
    Gns {
        /// Check this functional (JSON coefficients) instead of the listed ones.
        #[arg(long)]
        functional: Option<String>,
    },
    /// *-semisimplicity of each instance.
    Semisimple,
    /// Full representability of each instance.
    Fullrep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateKind {
    RandomStarAlgebra,
    LpGrid,
    Nilpotent,
    Hilbert,
}

pub fn seed_override(cli_seed: u64, env: Option<String>) -> CliResult<u64> {
    match env {
        Some(s) if !s.trim().is_empty() => {
            s.trim().parse().map_err(|_| CliError::Input(format!("QSTAR_SEED is not an unsigned integer: {s:?}")))
        }
        _ => Ok(cli_seed),
    }
}

fn config(cli: &Cli) -> CliResult<Config> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Input(format!("tolerance must be positive, got {}", cli.tol)));
    }
    let crossnorm = match &cli.crossnorm {
        None => None,
        Some(s) => Some(CrossNorm::parse(s).ok_or_else(|| CliError::Input(format!("unknown cross-norm {s:?}")))?),
    };
    let jobs = match cli.jobs {
        Some(0) => return Err(CliError::Input("--jobs must be at least 1".into())),
        Some(j) => j,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    Ok(Config { seed: seed_override(cli.seed, std::env::var("QSTAR_SEED").ok())?, tol: cli.tol, crossnorm, jobs })
}

/// Splits `--instance` values into loaded files and bundled labels.
fn resolve_instances(values: &[String]) -> CliResult<(Vec<InstanceFile>, Vec<String>)> {
    let mut files = Vec::new();
    let mut labels = Vec::new();
    for v in values {
        let path = Path::new(v);
        if path.is_file() {
            files.push(InstanceFile::load(path)?);
        } else if bundled::find(v).is_ok() {
            labels.push(v.clone());
        } else {
            return Err(CliError::Input(format!("{v:?} is neither a readable file nor a bundled instance")));
        }
    }
    Ok((files, labels))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render(report: &Report, format: Format) -> CliResult<String> {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Table => Ok(report.to_table()),
    }
}

pub fn run_from<I, T>(args: I) -> CliResult<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            let _ = e.print();
            std::process::exit(0);
        }
        CliError::Input(e.to_string())
    })?;
    run(&cli)
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let cfg = config(cli)?;
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Generate { kind, n, p, dim, max_dim } => {
            let file = generate(*kind, *n, *p, *dim, *max_dim, cfg.seed)?;
            let mut text = file.to_json()?;
            text.push('\n');
            emit(&text, out)?;
            Ok(Outcome::Pass)
        }
        Command::Crossnorm { right, z, x, y } => crossnorm_command(cli, &cfg, right.as_deref(), z.as_deref(), x.as_deref(), y.as_deref()),
        Command::Verify { suite } => {
            let (files, labels) = resolve_instances(&cli.instances)?;
            let cat = Catalog::new(files, labels)?;
            let entries = suites::run_suite(*suite, &cat, &cfg)?;
            finish(&format!("verify {}", suite.name()), entries, cli, &cfg)
        }
        Command::Gns { functional } => {
            let (files, labels) = resolve_instances(&cli.instances)?;
            let cat = Catalog::new(files, labels)?;
            let entries = match functional {
                Some(text) => {
                    let c = parse_vector(text)?;
                    let mut all = Vec::new();
                    for l in cat.selection() {
                        all.extend(suites::gns_report(&cat, &l, Some(&c), cfg.tol)?);
                    }
                    all
                }
                None => suites::run_tasks(&suites::gns_tasks(&cat, &cat.selection()), &cat, &cfg)?,
            };
            finish("gns", entries, cli, &cfg)
        }
        Command::Semisimple => {
            let (files, labels) = resolve_instances(&cli.instances)?;
            let cat = Catalog::new(files, labels)?;
            let entries = suites::run_tasks(&suites::semisimple_tasks(&cat.selection()), &cat, &cfg)?;
            finish("semisimple", entries, cli, &cfg)
        }
        Command::Fullrep => {
            let (files, labels) = resolve_instances(&cli.instances)?;
            let cat = Catalog::new(files, labels)?;
            let entries = suites::run_tasks(&suites::fullrep_tasks(&cat.selection()), &cat, &cfg)?;
            finish("fullrep", entries, cli, &cfg)
        }
    }
}

fn finish(command: &str, entries: Vec<crate::report::Entry>, cli: &Cli, cfg: &Config) -> CliResult<Outcome> {
    let report = Report::new(command, cfg.seed, cfg.tol, entries);
    emit(&render(&report, cli.format)?, cli.out.as_deref())?;
    Ok(report.outcome())
}

pub fn generate(kind: GenerateKind, n: usize, p: f64, dim: usize, max_dim: usize, seed: u64) -> CliResult<InstanceFile> {
    match kind {
        GenerateKind::RandomStarAlgebra => {
            if max_dim == 0 {
                return Err(CliError::Input("--max-dim must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alg = random_star_algebra(&mut rng, max_dim)?;
            let d = alg.dim();
            let pair = QuasiPair::new(alg, NormSpec::l2(d), format!("random-star-{d}-seed{seed}"))?.with_model("random-star-algebra");
            InstanceFile::from_pair(&pair)
        }
        GenerateKind::LpGrid => {
            let g = make_lp_pair(n, p).map_err(|e| CliError::Input(e.to_string()))?;
            InstanceFile::from_pair(&g.pair)
        }
        GenerateKind::Nilpotent => {
            let mut f = InstanceFile::from_pair(&bundled::nilpotent_pair()?)?;
            f.model = Some("nilpotent".into());
            Ok(f)
        }
        GenerateKind::Hilbert => {
            if dim == 0 {
                return Err(CliError::Input("--dim must be at least 1".into()));
            }
            InstanceFile::from_pair(&bundled::hilbert_pair(dim)?)
        }
    }
}

fn load_pair(v: &str) -> CliResult<QuasiPair> {
    let path = Path::new(v);
    let file = if path.is_file() { InstanceFile::load(path)? } else { bundled::find(v)? };
    file.to_pair()
}

fn crossnorm_command(
    cli: &Cli,
    cfg: &Config,
    right: Option<&str>,
    z: Option<&str>,
    x: Option<&str>,
    y: Option<&str>,
) -> CliResult<Outcome> {
    let left_name = cli.instances.first().ok_or_else(|| CliError::Input("crossnorm needs --instance for the left factor".into()))?;
    let p = load_pair(left_name)?;
    let q = match right {
        Some(r) => load_pair(r)?,
        None => p.clone(),
    };
    let element = match (z, x, y) {
        (Some(z), _, _) => {
            let m = parse_matrix(z)?;
            if m.nrows() != p.dim() || m.ncols() != q.dim() {
                return Err(CliError::Input(format!("--z must be {}x{}", p.dim(), q.dim())));
            }
            TensorElement::new(m, p.norm.clone(), q.norm.clone())?
        }
        (None, Some(x), Some(y)) => {
            let (x, y) = (parse_vector(x)?, parse_vector(y)?);
            if x.len() != p.dim() || y.len() != q.dim() {
                return Err(CliError::Input(format!("--x needs {} and --y {} entries", p.dim(), q.dim())));
            }
            TensorElement::elementary(&x, &y, p.norm.clone(), q.norm.clone())?
        }
        _ => return Err(CliError::Input("give --z or both --x and --y".into())),
    };
    let kinds: Vec<CrossNorm> = match cfg.crossnorm {
        Some(k) => vec![k],
        None => CrossNorm::ALL.to_vec(),
    };
    let opts = CrossOptions { seed: cfg.seed, ..CrossOptions::default() };
    let mut results = Vec::new();
    let mut outcome = Outcome::Pass;
    for k in kinds {
        let r = cross_norm(&element, k, &opts)?;
        if !r.converged {
            outcome = Outcome::Inconclusive;
        }
        results.push((k, r));
    }
    let text = match cli.format {
        Format::Json => {
            let list: Vec<_> = results
                .iter()
                .map(|(k, r)| {
                    json!({
                        "crossnorm": k.tag(),
                        "value": r.value,
                        "lower": r.lower,
                        "upper": r.upper,
                        "exact": r.exact,
                        "converged": r.converged,
                        "method": r.method,
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&json!({
                "schema": crate::report::SCHEMA,
                "left": p.label,
                "right": q.label,
                "seed": cfg.seed,
                "results": list,
            }))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["crossnorm", "value", "lower", "upper", "exact", "method"])?;
            for (k, r) in &results {
                w.write_record([
                    k.tag().to_string(),
                    format!("{:.12e}", r.value),
                    format!("{:.12e}", r.lower),
                    format!("{:.12e}", r.upper),
                    r.exact.to_string(),
                    r.method.to_string(),
                ])?;
            }
            let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
            String::from_utf8_lossy(&bytes).into_owned()
        }
        Format::Table => results
            .iter()
            .map(|(k, r)| format!("{:<7} {:.12}  [{:.12}, {:.12}]  {}\n", k.tag(), r.value, r.lower, r.upper, r.method))
            .collect(),
    };
    emit(&text, cli.out.as_deref())?;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_seed_wins_and_is_validated() {
        assert_eq!(seed_override(3, None).unwrap(), 3);
        assert_eq!(seed_override(3, Some("11".into())).unwrap(), 11);
        assert_eq!(seed_override(3, Some("".into())).unwrap(), 3);
        assert_eq!(seed_override(3, Some("x".into())).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn generate_is_deterministic() {
        let a = generate(GenerateKind::RandomStarAlgebra, 0, 0.0, 0, 4, 5).unwrap().to_json().unwrap();
        let b = generate(GenerateKind::RandomStarAlgebra, 0, 0.0, 0, 4, 5).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        assert!(generate(GenerateKind::LpGrid, 0, 2.0, 0, 0, 0).is_err());
    }

    #[test]
    fn bad_flags_are_input_errors() {
        let e = run_from(["qstar", "verify", "nonsense"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = run_from(["qstar", "--crossnorm", "mu", "verify", "lp"]).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
