//! Command-line front end: window-constant solvers, single intervals,
//! expansion sweeps, and the Monte Carlo coverage studies.
//!
//! Exit codes: 0 on success, 2 on configuration/usage errors, 1 on runtime
//! failures. Every run echoes its resolved spec (seed included) to stderr so
//! logs alone can reproduce any artifact. Parallelism is inherited from the
//! library's thread pool; set RAYON_NUM_THREADS to pin the worker count.

use clap::{Parser, Subcommand, ValueEnum};
use randpivot::edgeworth::{one_term_cdf, two_term_cdf, ExpansionInputs};
use randpivot::harness::{
    parse_config_file, result_row, run_bivariate, run_bootstrap_comparison,
    run_figure_diagnostics, run_table, run_univariate, sig, table_description, to_aligned, to_csv,
    ExperimentSpec, FigureKind, Method, ResultRow, ThetaSpec, DEFAULT_SEED,
};
use randpivot::intervals::{classical_t_interval, randomized_interval};
use randpivot::pivots::{DenominatorMode, UnivariateSample};
use randpivot::solver::{solve_method1, solve_method1_1, solve_method1_2, solve_method2, Side};
use randpivot::weights::WeightScheme;
use randpivot::{DataLaw, Error};
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "randpivot",
    version,
    about = "Randomized Student-t pivots: solvers, intervals, and coverage studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Print the skewness-reducing factor of a weight scheme at theta.
    Srf {
        /// Weight scheme, e.g. chisq(7), bernoulli(0.333), normal(0,1), multinomial-sym.
        #[arg(long)]
        weights: String,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        /// Sample size for the triangular scheme's finite-n moments; omit for the limit.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Solve for the window constant that drives the SRF to a target delta.
    SolveTheta {
        #[arg(long)]
        weights: String,
        /// Target SRF value; ignored for symmetric schemes solved at their mean.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta: f64,
        /// Sample size: picks the finite-n solver for the triangular scheme.
        #[arg(long)]
        n: Option<u64>,
        /// Search side for skewed i.i.d. schemes: above or below the weight mean.
        #[arg(long, default_value = "above")]
        side: SideArg,
    },
    /// Build one confidence interval from explicit data.
    Interval {
        /// Comma-separated observations, or @path to a whitespace/comma-separated file.
        #[arg(long, allow_hyphen_values = true)]
        data: String,
        /// Weight scheme for the randomized interval; omit for the classical t interval.
        #[arg(long)]
        weights: Option<String>,
        /// Window constant (required with --weights).
        #[arg(long, allow_negative_numbers = true)]
        theta: Option<f64>,
        /// Explicit weight draws; by default they are sampled using --seed.
        #[arg(long, allow_hyphen_values = true)]
        weight_values: Option<String>,
        #[arg(long, default_value = "expected")]
        mode: ModeArg,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the experiments declared in a spec file.
    Simulate {
        /// Spec document: [id] sections with law/weights/method/theta/n/... keys.
        #[arg(long)]
        config: PathBuf,
        /// Override every experiment's replication count.
        #[arg(long)]
        reps: Option<usize>,
        /// Override every experiment's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        /// Write results here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pair the triangular randomized interval against bootstrap-t on shared data.
    BootstrapCompare {
        #[arg(long)]
        law: String,
        #[arg(long)]
        n: usize,
        /// Window constant for the triangular arm.
        #[arg(long, default_value = "1.32215", allow_hyphen_values = true)]
        theta: String,
        #[arg(long, default_value_t = 1000)]
        resamples: usize,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a bivariate rectangle-coverage experiment.
    Bivariate {
        /// A paired law: xx2(normal|exponential) or ma1(normal|exponential).
        #[arg(long)]
        law: String,
        /// Weight scheme; omit for the classical rectangle.
        #[arg(long)]
        weights: Option<String>,
        /// Window constant: a number, `mean`, or solve(delta).
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the Edgeworth expansion approximations over a t grid.
    Edgeworth {
        /// Data skewness.
        #[arg(long, allow_negative_numbers = true)]
        gamma: f64,
        /// Data kurtosis (normal = 3).
        #[arg(long)]
        kappa: f64,
        /// Skewness-reducing factor multiplying the first-order term (1 = classical).
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        srf: f64,
        /// Weight kurtosis ratio E(w-theta)^4 / (E(w-theta)^2)^2 (1 = classical;
        /// standard normal weights at their mean give 3).
        #[arg(long, default_value_t = 1.0)]
        ratio: f64,
        #[arg(long)]
        n: u64,
        /// Evaluation points: a single value or lo:hi:step.
        #[arg(long, default_value = "-3:3:0.25", allow_hyphen_values = true)]
        t: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce a skewness diagnostic (histograms or Mardia measures).
    Figures {
        /// pearson-histogram or mardia.
        #[arg(long)]
        kind: String,
        /// Sample size; defaults to the study's (10^4 univariate, 2*10^4 bivariate).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the histogram CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate one of the twelve standard coverage tables.
    Table {
        /// Table id, 1..=12.
        #[arg(long)]
        id: u8,
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Above,
    Below,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Above => Side::AboveMean,
            SideArg::Below => Side::BelowMean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Expected,
    Empirical,
}

impl From<ModeArg> for DenominatorMode {
    fn from(m: ModeArg) -> DenominatorMode {
        match m {
            ModeArg::Expected => DenominatorMode::Expected,
            ModeArg::Empirical => DenominatorMode::Empirical,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

/// Configuration mistakes exit 2; runtime failures exit 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Parse(_)
        | Error::InvalidParameter(_)
        | Error::MissingSampleSize => 2,
        _ => 1,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Srf { weights, theta, n } => {
            let scheme = WeightScheme::from_str(&weights)?;
            let scheme_n = scheme.triangular().then_some(n).flatten();
            eprintln!("spec: srf weights={scheme} theta={theta} n={}", count_or_limit(scheme_n));
            let value = scheme.srf(theta, scheme_n)?;
            println!("{}", sig(value, 9));
            Ok(())
        }
        Command::SolveTheta { weights, delta, n, side } => {
            let scheme = WeightScheme::from_str(&weights)?;
            let solution = if scheme.triangular() {
                match n {
                    Some(n) => solve_method1_2(n, delta)?,
                    None => solve_method1_1(delta)?,
                }
            } else if scheme.symmetric() && delta == 0.0 {
                solve_method2(&scheme)?
            } else {
                solve_method1(&scheme, delta, side.into())?
            };
            eprintln!(
                "spec: solve-theta weights={scheme} delta={delta} n={} method={:?} achieved={} iterations={}",
                count_or_limit(n),
                solution.method,
                sig(solution.achieved_delta, 9),
                solution.iterations,
            );
            println!("{}", sig(solution.theta, 9));
            Ok(())
        }
        Command::Interval { data, weights, theta, weight_values, mode, alpha, seed } => {
            let values = parse_data(&data)?;
            let sample = UnivariateSample::new(&values, 0.0)?;
            let interval = match weights {
                None => {
                    eprintln!(
                        "spec: interval classical-t n={} alpha={alpha}",
                        values.len()
                    );
                    classical_t_interval(&sample, alpha)?
                }
                Some(desc) => {
                    let scheme = WeightScheme::from_str(&desc)?;
                    let theta = theta.ok_or_else(|| {
                        Error::Config("--theta is required with --weights".into())
                    })?;
                    let scheme_n = scheme.triangular().then_some(values.len() as u64);
                    let draws = match weight_values {
                        Some(text) => {
                            let w = parse_data(&text)?;
                            if w.len() != values.len() {
                                return Err(Error::Config(format!(
                                    "{} weight values for {} observations",
                                    w.len(),
                                    values.len()
                                )));
                            }
                            eprintln!(
                                "spec: interval weights={scheme} theta={theta} mode={} n={} alpha={alpha} weight-values=explicit",
                                DenominatorMode::from(mode),
                                values.len()
                            );
                            w
                        }
                        None => {
                            eprintln!(
                                "spec: interval weights={scheme} theta={theta} mode={} n={} alpha={alpha} seed={seed}",
                                DenominatorMode::from(mode),
                                values.len()
                            );
                            use rand::SeedableRng;
                            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                            scheme.sample(values.len(), &mut rng)?
                        }
                    };
                    let moments = scheme.centered_moments(theta, scheme_n)?;
                    randomized_interval(&sample, &draws, theta, &moments, mode.into(), alpha)?
                }
            };
            println!("lo = {}", sig(interval.lo, 9));
            println!("hi = {}", sig(interval.hi, 9));
            println!("length = {}", sig(interval.length(), 9));
            Ok(())
        }
        Command::Simulate { config, reps, seed, format, out } => {
            let mut specs = parse_config_file(&config)?;
            for spec in &mut specs {
                if let Some(r) = reps {
                    spec.replications = r;
                }
                if let Some(s) = seed {
                    spec.seed = s;
                }
            }
            let mut rows = Vec::new();
            for spec in &specs {
                echo_spec(spec);
                rows.extend(run_spec(spec)?);
            }
            emit(&rows, format, out.as_deref())
        }
        Command::BootstrapCompare { law, n, theta, resamples, reps, alpha, seed, format, out } => {
            let law: DataLaw = law.parse()?;
            let theta: ThetaSpec = theta.parse()?;
            let mut spec = ExperimentSpec::new(
                format!("bootstrap-compare-{law}-n{n}").replace(',', "-"),
                law,
                Method::MethodI1,
                n,
            )
            .with_weights(WeightScheme::multinomial_symmetric(), theta);
            spec.replications = reps;
            spec.resamples = resamples;
            spec.alpha = alpha;
            spec.seed = seed;
            echo_spec(&spec);
            let paired = run_bootstrap_comparison(&spec)?;
            let rows =
                vec![result_row(&spec, &paired.randomized), result_row(&spec, &paired.bootstrap)];
            emit(&rows, format, out.as_deref())
        }
        Command::Bivariate { law, weights, theta, n, reps, alpha, seed, format, out } => {
            let law: DataLaw = law.parse()?;
            let id = format!("bivariate-{law}-n{n}").replace(',', "-");
            let mut spec = match weights {
                None => ExperimentSpec::new(id, law, Method::ClassicalT, n),
                Some(desc) => {
                    let scheme = WeightScheme::from_str(&desc)?;
                    let theta: ThetaSpec = theta
                        .ok_or_else(|| Error::Config("--theta is required with --weights".into()))?
                        .parse()?;
                    let method = if scheme.triangular() { Method::MethodI1 } else { Method::MethodI };
                    ExperimentSpec::new(id, law, method, n).with_weights(scheme, theta)
                }
            };
            spec.replications = reps;
            spec.alpha = alpha;
            spec.seed = seed;
            echo_spec(&spec);
            let rows = vec![result_row(&spec, &run_bivariate(&spec)?)];
            emit(&rows, format, out.as_deref())
        }
        Command::Edgeworth { gamma, kappa, srf, ratio, n, t, out } => {
            let inputs = ExpansionInputs::new(gamma, kappa, srf, ratio, n)?;
            let grid = parse_grid(&t)?;
            eprintln!(
                "spec: edgeworth gamma={gamma} kappa={kappa} srf={srf} ratio={ratio} n={n} t={t}"
            );
            let mut text = String::from("t,one_term,two_term\n");
            for &point in &grid {
                text.push_str(&format!(
                    "{},{},{}\n",
                    sig(point, 9),
                    sig(one_term_cdf(point, &inputs), 9),
                    sig(two_term_cdf(point, &inputs), 9),
                ));
            }
            write_or_print(&text, out.as_deref())
        }
        Command::Figures { kind, n, seed, out } => {
            let kind: FigureKind = kind.parse()?;
            let n = n.unwrap_or(match kind {
                FigureKind::PearsonHistogram => 10_000,
                FigureKind::Mardia => 20_000,
            });
            eprintln!("spec: figures kind={kind} n={n} seed={seed}");
            let diag = run_figure_diagnostics(kind, n, seed)?;
            println!("kind = {kind}");
            println!("n = {n}");
            println!("seed = {seed}");
            println!("raw = {}", sig(diag.raw_measure, 9));
            for m in &diag.randomized {
                println!(
                    "{} = {} (ratio {})",
                    m.label,
                    sig(m.value, 9),
                    sig(m.ratio_to_raw, 9)
                );
            }
            if !diag.histograms.is_empty() {
                let mut text = String::from("label,bin,left,count\n");
                for h in &diag.histograms {
                    for (i, count) in h.counts.iter().enumerate() {
                        text.push_str(&format!(
                            "{},{},{},{}\n",
                            h.label,
                            i,
                            sig(h.min + i as f64 * h.width, 9),
                            count
                        ));
                    }
                }
                write_or_print(&text, out.as_deref())?;
            }
            Ok(())
        }
        Command::Table { id, reps, seed, format, out } => {
            eprintln!("spec: table id={id} reps={reps} seed={seed} ({})", table_description(id)?);
            let rows = run_table(id, reps, seed)?;
            emit(&rows, format, out.as_deref())
        }
    }
}

/// Dispatch one parsed experiment to the matching runner.
fn run_spec(spec: &ExperimentSpec) -> Result<Vec<ResultRow>, Error> {
    if spec.law.dimension() == 2 {
        return Ok(vec![result_row(spec, &run_bivariate(spec)?)]);
    }
    Ok(vec![result_row(spec, &run_univariate(spec)?)])
}

fn echo_spec(spec: &ExperimentSpec) {
    let weights = spec
        .weights
        .as_ref()
        .map_or_else(|| "none".to_string(), |s| s.to_string());
    let theta = match spec.resolved_theta() {
        Ok(Some(t)) => format!("{} (resolved {})", spec.theta, sig(t, 9)),
        _ => spec.theta.to_string(),
    };
    eprintln!(
        "spec: id={} law={} method={} weights={} theta={} mode={} n={} reps={} alpha={} resamples={} seed={}",
        spec.id,
        spec.law,
        spec.method,
        weights,
        theta,
        spec.mode,
        spec.n,
        spec.replications,
        spec.alpha,
        spec.resamples,
        spec.seed,
    );
}

fn count_or_limit(n: Option<u64>) -> String {
    n.map_or_else(|| "limit".to_string(), |v| v.to_string())
}

/// Parse inline comma-separated numbers or @path file contents.
fn parse_data(text: &str) -> Result<Vec<f64>, Error> {
    let owned;
    let body = match text.strip_prefix('@') {
        Some(path) => {
            owned = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{path}: {e}")))?;
            owned.as_str()
        }
        None => text,
    };
    let values: Result<Vec<f64>, Error> = body
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad observation `{s}`")))
        })
        .collect();
    let values = values?;
    if values.is_empty() {
        return Err(Error::Parse("no observations given".into()));
    }
    Ok(values)
}

/// Parse `lo:hi:step` (inclusive) or a single point.
fn parse_grid(text: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Parse(format!("bad t grid `{text}`; use a number or lo:hi:step"));
    match parts.as_slice() {
        [single] => Ok(vec![single.trim().parse().map_err(|_| bad())?]),
        [lo, hi, step] => {
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let step: f64 = step.trim().parse().map_err(|_| bad())?;
            if step.is_nan() || step <= 0.0 || hi < lo {
                return Err(bad());
            }
            let count = ((hi - lo) / step).round() as usize + 1;
            Ok((0..count).map(|i| lo + i as f64 * step).filter(|t| *t <= hi + 1e-12).collect())
        }
        _ => Err(bad()),
    }
}

fn emit(rows: &[ResultRow], format: OutputFormat, out: Option<&Path>) -> Result<(), Error> {
    let text = match format {
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Table => to_aligned(rows),
    };
    write_or_print(&text, out)
}

fn write_or_print(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
