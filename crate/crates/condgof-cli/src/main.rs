//! Conditional goodness-of-fit testing for discrete distributions.

mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use condgof::conditional::{
    sample_conditional_binomial, sample_conditional_geometric, sample_conditional_negbinomial,
    sample_conditional_poisson, sample_conditional_powerseries_mh, CompositionSpec,
    DEFAULT_BURN_IN, DEFAULT_THIN,
};
use condgof::dist::{
    fit_beta_geometric, fit_discrete_weibull, fit_geometric, CoefficientFn, DiscreteDist,
};
use condgof::engine::{
    conditional_p_values, study_p_values_with_progress, summarize_study, Alternative, StudySpec,
    DEFAULT_STUDY_REPLICATIONS, DEFAULT_TEST_REPLICATIONS,
};
use condgof::rng::stream_rng;
use condgof::stats::TestStatisticId;
use condgof::{datasets, Error, Sample};

use output::{sig6, Format, FrequencyTable};

const EXIT_PARSE_ERROR: u8 = 2;
const EXIT_ESTIMATION_FAILURE: u8 = 3;
const EXIT_DEGENERATE_STRICT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "condgof",
    about = "Exact conditional goodness-of-fit tests for discrete distributions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a dataset against the geometric null with conditional Monte
    /// Carlo p-values.
    Test(TestArgs),
    /// Fit a model family and report estimates with an expected-frequency
    /// table.
    Fit(FitArgs),
    /// Emit conditional samples (compositions with a fixed sum) as CSV.
    Sample(SampleArgs),
    /// Estimate test power against an alternative distribution.
    Power(PowerArgs),
    /// Estimate type I error under the geometric null.
    Type1(Type1Args),
    /// List the bundled datasets.
    Fixtures,
}

#[derive(Args)]
struct DatasetArgs {
    /// Input file: whitespace-separated integers, or CSV rows `value,count`
    /// with an optional header.
    #[arg(value_name = "PATH", conflicts_with = "fixture")]
    path: Option<PathBuf>,
    /// Use a bundled dataset instead of a file.
    #[arg(long, value_name = "NAME")]
    fixture: Option<String>,
}

impl DatasetArgs {
    fn load(&self) -> Result<(String, Sample), CliError> {
        if let Some(name) = &self.fixture {
            let sample = datasets::fixture(name).ok_or_else(|| {
                CliError::parse(format!(
                    "unknown fixture '{name}' (available: {})",
                    datasets::FIXTURE_NAMES.join(", ")
                ))
            })?;
            return Ok((name.clone(), sample));
        }
        let path = self
            .path
            .as_ref()
            .ok_or_else(|| CliError::parse("no input: give a file path or --fixture".into()))?;
        let sample = input::read_dataset(path).map_err(|e| CliError::parse(e.to_string()))?;
        Ok((path.display().to_string(), sample))
    }
}

#[derive(Args)]
struct RunArgs {
    /// Master seed; falls back to $CONDGOF_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output format.
    #[arg(long, default_value = "table")]
    format: Format,
}

impl RunArgs {
    fn seed(&self) -> Result<u64, CliError> {
        if let Some(seed) = self.seed {
            return Ok(seed);
        }
        match std::env::var("CONDGOF_SEED") {
            Ok(v) => v
                .parse()
                .map_err(|_| CliError::parse(format!("CONDGOF_SEED is not a valid seed: '{v}'"))),
            Err(_) => Ok(0),
        }
    }

    fn install_pool(&self) -> Result<(), CliError> {
        if let Some(workers) = self.workers {
            rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build_global()
                .map_err(|e| CliError::parse(format!("cannot configure {workers} workers: {e}")))?;
        }
        Ok(())
    }
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Comma-separated statistics (default: all ten).
    #[arg(long, value_delimiter = ',')]
    stats: Vec<TestStatisticId>,
    /// Conditional Monte Carlo replications K.
    #[arg(long, default_value_t = DEFAULT_TEST_REPLICATIONS)]
    iterations: u64,
    /// Treat degenerate data (t = 0) as an error.
    #[arg(long)]
    strict: bool,
    /// Also print the observed-versus-expected frequency table.
    #[arg(long)]
    expected: bool,
    /// Extra fitted families for the expected table
    /// (betageometric, dweibull).
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    /// Group values >= this bound into one table row.
    #[arg(long, value_name = "J")]
    lump: Option<u64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Model family: geometric, betageometric or dweibull.
    #[arg(long)]
    family: String,
    /// Group values >= this bound into one table row.
    #[arg(long, value_name = "J")]
    lump: Option<u64>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct SampleArgs {
    /// Null family: geometric, negbinomial, poisson, binomial or
    /// powerseries.
    #[arg(long)]
    family: String,
    /// Number of parts n (geometric and powerseries families).
    #[arg(long)]
    n: Option<usize>,
    /// The fixed sum t.
    #[arg(long)]
    t: u64,
    /// Number of compositions to draw.
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Per-observation negative binomial sizes r_1,...,r_n.
    #[arg(long, value_delimiter = ',')]
    r: Vec<u64>,
    /// Poisson weights a_1,...,a_n.
    #[arg(long, value_delimiter = ',')]
    weights: Vec<f64>,
    /// Binomial sizes m_1,...,m_n.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<u64>,
    /// Power-series coefficients: geometric, poisson or binomial:<m>.
    #[arg(long)]
    coeff: Option<String>,
    /// Metropolis-Hastings burn-in (powerseries family).
    #[arg(long, default_value_t = DEFAULT_BURN_IN)]
    burn_in: u64,
    /// Keep every thin-th state (powerseries family).
    #[arg(long, default_value_t = DEFAULT_THIN)]
    thin: u64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct StudyCommonArgs {
    /// Sample size n.
    #[arg(long)]
    n: usize,
    /// Significance level.
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Outer datasets M.
    #[arg(long = "M", default_value_t = DEFAULT_STUDY_REPLICATIONS)]
    outer: u64,
    /// Inner conditional draws K per p-value.
    #[arg(long = "K", default_value_t = DEFAULT_STUDY_REPLICATIONS)]
    inner: u64,
    /// Comma-separated statistics (default: the study suite).
    #[arg(long, value_delimiter = ',')]
    stats: Vec<TestStatisticId>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args)]
struct PowerArgs {
    /// Alternative distribution, e.g. pois:1, bin:5,0.3, nb:5,0.5, bg:2,5,
    /// dweibull:0.7,0.8 or geom:0.5.
    #[arg(long)]
    alt: String,
    #[command(flatten)]
    common: StudyCommonArgs,
}

#[derive(Args)]
struct Type1Args {
    /// Geometric parameter p of the null generator.
    #[arg(long)]
    p: f64,
    #[command(flatten)]
    common: StudyCommonArgs,
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn parse(message: String) -> Self {
        Self {
            message,
            code: EXIT_PARSE_ERROR,
        }
    }

    fn from_lib(error: Error) -> Self {
        let code = match &error {
            Error::EstimationFailure { .. } => EXIT_ESTIMATION_FAILURE,
            _ => EXIT_PARSE_ERROR,
        };
        Self {
            message: error.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `condgof ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Test(args) => cmd_test(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Power(args) => cmd_power(args),
        Command::Type1(args) => cmd_type1(args),
        Command::Fixtures => cmd_fixtures(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn cmd_test(args: TestArgs) -> Result<(), CliError> {
    args.run.install_pool()?;
    let seed = args.run.seed()?;
    let (label, sample) = args.dataset.load()?;
    let statistics = if args.stats.is_empty() {
        TestStatisticId::ALL.to_vec()
    } else {
        args.stats.clone()
    };
    if args.iterations == 0 {
        return Err(CliError::parse("--iterations must be at least 1".into()));
    }

    let degenerate = sample.t() == 0;
    if degenerate && args.strict {
        return Err(CliError {
            message: "degenerate dataset: t = 0 (every p-value is trivially 1)".into(),
            code: EXIT_DEGENERATE_STRICT,
        });
    }

    let results = conditional_p_values(&sample, &statistics, args.iterations, seed)
        .map_err(CliError::from_lib)?;
    let p_hat = fit_geometric(&sample).ok().map(|g| g.p());
    output::print_test_report(&label, &sample, p_hat, &results, args.run.format);

    if args.expected && args.run.format == Format::Table {
        println!();
        print_expected_table(&sample, &args.families, args.lump)?;
    }
    Ok(())
}

fn expected_counts_geometric(sample: &Sample, p: f64, len: usize) -> Vec<f64> {
    let n = sample.n() as f64;
    (0..len).map(|j| n * p * (1.0 - p).powi(j as i32)).collect()
}

fn print_expected_table(
    sample: &Sample,
    families: &[String],
    lump: Option<u64>,
) -> Result<(), CliError> {
    let len = sample.max() as usize + 1;
    let geometric = fit_geometric(sample).map_err(CliError::from_lib)?;
    let mut columns = vec![(
        "geometric".to_string(),
        expected_counts_geometric(sample, geometric.p(), len),
    )];
    for family in families {
        match family.as_str() {
            "betageometric" => {
                let fit = fit_beta_geometric(sample).map_err(CliError::from_lib)?;
                let n = sample.n() as f64;
                columns.push((
                    "betageometric".to_string(),
                    (0..len).map(|j| n * fit.params.pmf(j as u64)).collect(),
                ));
            }
            "dweibull" => {
                let fit = fit_discrete_weibull(sample).map_err(CliError::from_lib)?;
                let n = sample.n() as f64;
                columns.push((
                    "dweibull".to_string(),
                    (0..len).map(|j| n * fit.params.pmf(j as u64)).collect(),
                ));
            }
            other => {
                return Err(CliError::parse(format!(
                    "unknown family '{other}' (expected betageometric or dweibull)"
                )))
            }
        }
    }
    FrequencyTable {
        columns,
        observed: sample.counts(),
        lump,
    }
    .print();
    Ok(())
}

struct FitReport {
    estimates: Vec<(&'static str, f64)>,
    log_likelihood: f64,
    note: Option<&'static str>,
    expected: Vec<f64>,
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let (label, sample) = args.dataset.load()?;
    let len = sample.max() as usize + 1;
    let n = sample.n() as f64;

    let report = match args.family.as_str() {
        "geometric" => {
            let fit = fit_geometric(&sample).map_err(CliError::from_lib)?;
            FitReport {
                estimates: vec![("p_hat", fit.p())],
                log_likelihood: fit.log_likelihood(&sample),
                note: None,
                expected: expected_counts_geometric(&sample, fit.p(), len),
            }
        }
        "betageometric" => {
            let fit = fit_beta_geometric(&sample).map_err(CliError::from_lib)?;
            FitReport {
                estimates: vec![
                    ("pi_hat", fit.params.pi()),
                    ("theta_hat", fit.params.theta()),
                ],
                log_likelihood: fit.log_likelihood,
                note: fit
                    .on_boundary
                    .then_some("estimate on the theta = 0 boundary (geometric submodel)"),
                expected: (0..len).map(|j| n * fit.params.pmf(j as u64)).collect(),
            }
        }
        "dweibull" => {
            let fit = fit_discrete_weibull(&sample).map_err(CliError::from_lib)?;
            FitReport {
                estimates: vec![("q_hat", fit.params.q()), ("beta_hat", fit.params.beta())],
                log_likelihood: fit.log_likelihood,
                note: None,
                expected: (0..len).map(|j| n * fit.params.pmf(j as u64)).collect(),
            }
        }
        other => {
            return Err(CliError::parse(format!(
                "unknown family '{other}' (expected geometric, betageometric or dweibull)"
            )))
        }
    };
    let FitReport {
        estimates,
        log_likelihood,
        note,
        expected,
    } = report;

    let table = FrequencyTable {
        columns: vec![(args.family.clone(), expected)],
        observed: sample.counts(),
        lump: args.lump,
    };
    match args.run.format {
        Format::Table => {
            println!("dataset: {label} (n = {}, t = {})", sample.n(), sample.t());
            println!("family: {}", args.family);
            for (name, value) in &estimates {
                println!("{name} = {}", sig6(*value));
            }
            if let Some(note) = note {
                println!("{note}");
            }
            println!("log_likelihood = {}", sig6(log_likelihood));
            println!();
            table.print();
        }
        Format::Csv => {
            println!("value,observed,expected");
            for (value, observed, expected) in table.rows() {
                println!("{value},{observed},{expected:.1}", expected = expected[0]);
            }
        }
        Format::Json => {
            let estimates: serde_json::Map<String, serde_json::Value> = estimates
                .iter()
                .map(|(k, v)| (k.to_string(), (*v).into()))
                .collect();
            let rows: Vec<serde_json::Value> = table
                .rows()
                .into_iter()
                .map(|(value, observed, expected)| {
                    serde_json::json!({
                        "value": value,
                        "observed": observed,
                        "expected": (expected[0] * 10.0).round() / 10.0,
                    })
                })
                .collect();
            let body = serde_json::json!({
                "dataset": label,
                "n": sample.n(),
                "t": sample.t(),
                "family": args.family,
                "estimates": estimates,
                "log_likelihood": log_likelihood,
                "on_boundary": note.is_some(),
                "rows": rows,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&body).expect("serializable")
            );
        }
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let seed = args.run.seed()?;
    let mut rng = stream_rng(seed, 0);
    let compositions: Vec<Vec<u64>> = match args.family.as_str() {
        "geometric" => {
            let n = args
                .n
                .ok_or_else(|| CliError::parse("geometric sampling needs --n".into()))?;
            let spec = CompositionSpec::new(n, args.t).map_err(CliError::from_lib)?;
            (0..args.count)
                .map(|_| sample_conditional_geometric(spec, &mut rng).parts().to_vec())
                .collect()
        }
        "negbinomial" => {
            if args.r.is_empty() {
                return Err(CliError::parse("negbinomial sampling needs --r r1,r2,...".into()));
            }
            let mut out = Vec::with_capacity(args.count);
            for _ in 0..args.count {
                out.push(
                    sample_conditional_negbinomial(&args.r, args.t, &mut rng)
                        .map_err(CliError::from_lib)?
                        .parts()
                        .to_vec(),
                );
            }
            out
        }
        "poisson" => {
            if args.weights.is_empty() {
                return Err(CliError::parse("poisson sampling needs --weights a1,a2,...".into()));
            }
            let mut out = Vec::with_capacity(args.count);
            for _ in 0..args.count {
                out.push(
                    sample_conditional_poisson(&args.weights, args.t, &mut rng)
                        .map_err(CliError::from_lib)?
                        .parts()
                        .to_vec(),
                );
            }
            out
        }
        "binomial" => {
            if args.sizes.is_empty() {
                return Err(CliError::parse("binomial sampling needs --sizes m1,m2,...".into()));
            }
            let mut out = Vec::with_capacity(args.count);
            for _ in 0..args.count {
                out.push(
                    sample_conditional_binomial(&args.sizes, args.t, &mut rng)
                        .map_err(CliError::from_lib)?
                        .parts()
                        .to_vec(),
                );
            }
            out
        }
        "powerseries" => {
            let n = args
                .n
                .ok_or_else(|| CliError::parse("powerseries sampling needs --n".into()))?;
            let coeff: CoefficientFn = args
                .coeff
                .as_deref()
                .ok_or_else(|| CliError::parse("powerseries sampling needs --coeff".into()))?
                .parse()
                .map_err(CliError::from_lib)?;
            let spec = CompositionSpec::new(n, args.t).map_err(CliError::from_lib)?;
            sample_conditional_powerseries_mh(
                move |x| coeff.log_coefficient(x),
                spec,
                args.burn_in,
                args.thin,
                args.count,
                &mut rng,
            )
            .map_err(CliError::from_lib)?
            .into_iter()
            .map(|c| c.parts().to_vec())
            .collect()
        }
        other => {
            return Err(CliError::parse(format!(
                "unknown family '{other}' (expected geometric, negbinomial, poisson, binomial or powerseries)"
            )))
        }
    };

    for parts in &compositions {
        let row: Vec<String> = parts.iter().map(u64::to_string).collect();
        println!("{}", row.join(","));
    }
    Ok(())
}

fn run_study(spec: &StudySpec) -> Result<condgof::engine::StudyResult, CliError> {
    // Progress to stderr roughly every tenth of the run.
    let total = spec.outer_replications;
    let step = (total / 10).max(1);
    let p_values = study_p_values_with_progress(spec, |done| {
        if done % step == 0 || done == total {
            eprintln!("progress: {done}/{total} datasets");
        }
    })
    .map_err(CliError::from_lib)?;
    Ok(summarize_study(spec, &p_values))
}

fn cmd_power(args: PowerArgs) -> Result<(), CliError> {
    args.common.run.install_pool()?;
    let alternative: Alternative = args.alt.parse().map_err(CliError::from_lib)?;
    let spec = build_study_spec(alternative, &args.common)?;
    let result = run_study(&spec)?;
    output::print_study_report(
        &format!("power study: alternative {}", args.alt),
        &result,
        args.common.run.format,
    );
    Ok(())
}

fn cmd_type1(args: Type1Args) -> Result<(), CliError> {
    args.common.run.install_pool()?;
    let alternative: Alternative = format!("geom:{}", args.p)
        .parse()
        .map_err(CliError::from_lib)?;
    let spec = build_study_spec(alternative, &args.common)?;
    let result = run_study(&spec)?;
    output::print_study_report(
        &format!("type I error study: geom:{}", args.p),
        &result,
        args.common.run.format,
    );
    Ok(())
}

fn build_study_spec(
    alternative: Alternative,
    common: &StudyCommonArgs,
) -> Result<StudySpec, CliError> {
    let mut spec = StudySpec::new(alternative, common.n, common.alpha, common.run.seed()?)
        .map_err(CliError::from_lib)?;
    spec.outer_replications = common.outer;
    spec.inner_replications = common.inner;
    if !common.stats.is_empty() {
        spec.statistics = common.stats.clone();
    }
    Ok(spec)
}

fn cmd_fixtures() -> Result<(), CliError> {
    for name in datasets::FIXTURE_NAMES {
        let sample = datasets::fixture(name).expect("bundled");
        println!("{name}: n = {}, t = {}", sample.n(), sample.t());
    }
    Ok(())
}
