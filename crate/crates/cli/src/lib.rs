//! `fracreg` command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::thread;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fracreg_core::fracmodel::{
    alpha_grid, predict_frac, snap_order, BetaMode, FracModel, DEFAULT_GRID,
};
use fracreg_core::opalgebra::{
    build_group_mn, build_group_zn, build_group_zp, verify_group_axioms, OperatorGroup,
};
use fracreg_core::pipeline::report::{fmt6, sweep_csv_string};
use fracreg_core::pipeline::{
    analyze_series, emit_plots, emit_sweep_csv, group_monthly, ingest_csv, Aggregate, Analysis,
    AvocadoType, SeriesFile, SweepSettings, DEFAULT_TEST_FRACTION,
};
use fracreg_core::regress::{fit_poly, r_squared, split_ordered, Series};
use fracreg_core::{Error, ErrorClass};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fracreg",
    version,
    about = "Fractional polynomial regression sweeps"
)]
struct Cli {
    /// Reserved; every command is deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Aggregate a region's weekly prices into a monthly series file.
    Ingest {
        #[command(flatten)]
        csv: CsvArgs,
        /// Series JSON destination (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Fit the integer-order polynomial and evaluate one fractional order.
    Fit {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        model: ModelArgs,
        /// Fractional order to evaluate alongside α = 0.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
    },
    /// Sweep α and print the result table as CSV.
    Sweep {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// CSV destination (stdout when omitted).
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the full workflow and write CSV, series and SVG files per region.
    Report {
        #[command(flatten)]
        csv: CsvArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "report")]
        out_dir: PathBuf,
    },
    /// Build an operator group and check the group axioms.
    Group {
        #[command(flatten)]
        kind: GroupKind,
        /// Base fractional order α of the generator A.
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        alpha: f64,
    },
}

#[derive(Debug, Args)]
struct CsvArgs {
    #[arg(long)]
    csv: PathBuf,
    /// Region name; repeat or comma-separate for several (report only).
    #[arg(long, required = true, value_delimiter = ',')]
    region: Vec<String>,
    #[arg(long = "type", value_enum, default_value_t = TypeArg::Conventional)]
    avocado_type: TypeArg,
    #[arg(long, value_enum, default_value_t = AggArg::Median)]
    agg: AggArg,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Series JSON produced by `ingest`.
    #[arg(long, conflicts_with_all = ["csv", "region"])]
    series: Option<PathBuf>,
    #[arg(long, requires = "region")]
    csv: Option<PathBuf>,
    #[arg(long)]
    region: Option<String>,
    #[arg(long = "type", value_enum, default_value_t = TypeArg::Conventional)]
    avocado_type: TypeArg,
    #[arg(long, value_enum, default_value_t = AggArg::Median)]
    agg: AggArg,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u16).range(1..=12))]
    degree: u16,
    #[arg(long, default_value_t = DEFAULT_TEST_FRACTION)]
    test_fraction: f64,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = DEFAULT_GRID.0, allow_hyphen_values = true)]
    alpha_min: f64,
    #[arg(long, default_value_t = DEFAULT_GRID.1, allow_hyphen_values = true)]
    alpha_max: f64,
    #[arg(long, default_value_t = DEFAULT_GRID.2)]
    alpha_step: f64,
    #[arg(long, value_enum, default_value_t = BetaArg::Fixed)]
    beta_mode: BetaArg,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GroupKind {
    /// Additive group ℤₙ.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(i64).range(1..=100_000))]
    zn: Option<i64>,
    /// Unit group 𝕄ₙ.
    #[arg(long, value_name = "N", value_parser = clap::value_parser!(i64).range(2..=100_000))]
    mn: Option<i64>,
    /// Multiplicative group ℤₚ⁺ (p prime).
    #[arg(long, value_name = "P", value_parser = clap::value_parser!(i64).range(2..=100_000))]
    zp: Option<i64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TypeArg {
    Conventional,
    Organic,
}

impl From<TypeArg> for AvocadoType {
    fn from(t: TypeArg) -> Self {
        match t {
            TypeArg::Conventional => AvocadoType::Conventional,
            TypeArg::Organic => AvocadoType::Organic,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AggArg {
    Median,
    Mean,
}

impl From<AggArg> for Aggregate {
    fn from(a: AggArg) -> Self {
        match a {
            AggArg::Median => Aggregate::Median,
            AggArg::Mean => Aggregate::Mean,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BetaArg {
    Fixed,
    Refit,
}

impl From<BetaArg> for BetaMode {
    fn from(b: BetaArg) -> Self {
        match b {
            BetaArg::Fixed => BetaMode::Fixed,
            BetaArg::Refit => BetaMode::Refit,
        }
    }
}

/// Failure of a command: a library error or a usage problem found after
/// argument parsing.
#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Output(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Output(e)
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e.class() {
        ErrorClass::Usage => EXIT_USAGE,
        ErrorClass::Data => EXIT_DATA,
        ErrorClass::Numeric => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    if cli.seed.is_some() {
        log::debug!("--seed is reserved and has no effect");
    }
    let result = match cli.command {
        Command::Ingest { csv, output } => cmd_ingest(&csv, output.as_deref(), out),
        Command::Fit {
            source,
            model,
            alpha,
        } => cmd_fit(&source, &model, alpha, out),
        Command::Sweep {
            source,
            model,
            grid,
            output,
        } => cmd_sweep(&source, &model, &grid, output.as_deref(), out),
        Command::Report {
            csv,
            model,
            grid,
            out_dir,
        } => cmd_report(&csv, &model, &grid, &out_dir, out),
        Command::Group { kind, alpha } => cmd_group(&kind, alpha, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error[{}]: {e}", e.tag());
            exit_code(&e)
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error[usage]: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Output(e)) => {
            let _ = writeln!(err, "error[io]: {e}");
            EXIT_DATA
        }
    }
}

fn single_region(csv: &CsvArgs) -> std::result::Result<&str, Failure> {
    match csv.region.as_slice() {
        [one] => Ok(one),
        _ => Err(Failure::Usage(
            "this command takes exactly one --region".into(),
        )),
    }
}

fn csv_series(
    path: &Path,
    region: &str,
    t: AvocadoType,
    agg: Aggregate,
) -> Result<SeriesFile, Error> {
    let records = ingest_csv(path, region, t)?;
    let (series, _) = group_monthly(&records, agg)?;
    Ok(SeriesFile {
        series,
        region: region.to_string(),
        avocado_type: t,
        agg,
    })
}

fn load_source(source: &SourceArgs) -> std::result::Result<SeriesFile, Failure> {
    match (&source.series, &source.csv, &source.region) {
        (Some(path), _, _) => Ok(SeriesFile::read(path)?),
        (None, Some(csv), Some(region)) => Ok(csv_series(
            csv,
            region,
            source.avocado_type.into(),
            source.agg.into(),
        )?),
        _ => Err(Failure::Usage(
            "give either --series FILE or --csv FILE --region NAME".into(),
        )),
    }
}

fn settings(
    model: &ModelArgs,
    grid: Option<&GridArgs>,
) -> std::result::Result<SweepSettings, Failure> {
    let mut s = SweepSettings {
        degree: model.degree as usize,
        test_fraction: model.test_fraction,
        ..SweepSettings::default()
    };
    if let Some(g) = grid {
        s.grid = alpha_grid(g.alpha_min, g.alpha_max, g.alpha_step)
            .map_err(|e| Failure::Usage(e.to_string()))?;
        s.beta_mode = g.beta_mode.into();
    }
    Ok(s)
}

fn cmd_ingest(csv: &CsvArgs, output: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let region = single_region(csv)?;
    let file = csv_series(&csv.csv, region, csv.avocado_type.into(), csv.agg.into())?;
    match output {
        Some(path) => {
            file.write(path)?;
            writeln!(
                out,
                "wrote {} months to {}",
                file.series.len(),
                path.display()
            )?;
        }
        None => write!(out, "{}", file.to_json())?,
    }
    Ok(())
}

fn r2_pair(model: &FracModel, train: &Series, test: &Series) -> Result<(f64, f64), Error> {
    let pred = |s: &Series| -> Result<Vec<f64>, Error> {
        s.x().iter().map(|&x| predict_frac(model, x)).collect()
    };
    Ok((
        r_squared(train.y(), &pred(train)?)?,
        r_squared(test.y(), &pred(test)?)?,
    ))
}

fn cmd_fit(source: &SourceArgs, model: &ModelArgs, alpha: f64, out: &mut dyn Write) -> CmdResult {
    let file = load_source(source)?;
    let s = settings(model, None)?;
    let split = split_ordered(&file.series, s.test_fraction)?;
    let (base, diag) = fit_poly(&split.train, s.degree)?;
    writeln!(
        out,
        "series: {} {} ({}), {} months, train {} / test {}",
        file.region,
        file.avocado_type,
        file.agg,
        file.series.len(),
        split.train.len(),
        split.test.len()
    )?;
    writeln!(out, "degree: {}", s.degree)?;
    for (i, b) in base.coeffs().iter().enumerate() {
        writeln!(out, "beta[{i}]: {b:e}")?;
    }
    writeln!(
        out,
        "rank: {}  condition: {:e}{}",
        diag.rank,
        diag.condition,
        if diag.ill_conditioned {
            "  (ill-conditioned)"
        } else {
            ""
        }
    )?;
    let mut alphas = vec![0.0];
    if alpha != 0.0 {
        alphas.push(alpha);
    }
    writeln!(out, "{}", fracreg_core::pipeline::report::SWEEP_CSV_HEADER)?;
    for a in alphas {
        let m = FracModel::new(base.clone(), snap_order(s.degree, a))?;
        let (ri, re) = r2_pair(&m, &split.train, &split.test)?;
        writeln!(
            out,
            "{},{},{},{}",
            fmt6(m.effective_degree()),
            fmt6(a),
            fmt6(ri),
            fmt6(re)
        )?;
    }
    Ok(())
}

fn best_line(a: &Analysis) -> String {
    let b = &a.report.best;
    format!(
        "{} {}: best degree {} (alpha {}) r2_interp {} r2_extrap {}{}",
        a.report.region,
        a.report.avocado_type,
        fmt6(b.row.effective_degree),
        fmt6(b.row.alpha),
        fmt6(b.row.r2_interp),
        fmt6(b.row.r2_extrap),
        if b.fallback {
            " (no positive interpolation R²; unconstrained maximum)"
        } else {
            ""
        }
    )
}

fn cmd_sweep(
    source: &SourceArgs,
    model: &ModelArgs,
    grid: &GridArgs,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let file = load_source(source)?;
    let s = settings(model, Some(grid))?;
    let analysis = analyze_series(&file.series, &file.region, file.avocado_type, &s)?;
    match output {
        Some(path) => {
            emit_sweep_csv(&analysis.report, path)?;
            writeln!(out, "{}", best_line(&analysis))?;
        }
        None => write!(out, "{}", sweep_csv_string(&analysis.report))?,
    }
    Ok(())
}

/// Directory-safe name for a region.
fn slug(region: &str) -> String {
    region
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn report_region(
    csv: &CsvArgs,
    region: &str,
    s: &SweepSettings,
    out_dir: &Path,
) -> Result<(Analysis, Vec<PathBuf>), Error> {
    let t: AvocadoType = csv.avocado_type.into();
    let agg: Aggregate = csv.agg.into();
    let records = ingest_csv(&csv.csv, region, t)?;
    let (series, groups) = group_monthly(&records, agg)?;
    let analysis = analyze_series(&series, region, t, s)?;
    let dir = out_dir.join(slug(region));
    let mut files = emit_plots(
        &analysis.report,
        &groups,
        &analysis.split,
        &analysis.plot_models(),
        &dir,
    )?;
    let csv_path = dir.join("sweep.csv");
    emit_sweep_csv(&analysis.report, &csv_path)?;
    let series_path = dir.join("series.json");
    SeriesFile {
        series,
        region: region.to_string(),
        avocado_type: t,
        agg,
    }
    .write(&series_path)?;
    files.insert(0, csv_path);
    files.push(series_path);
    Ok((analysis, files))
}

fn cmd_report(
    csv: &CsvArgs,
    model: &ModelArgs,
    grid: &GridArgs,
    out_dir: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    let s = settings(model, Some(grid))?;
    // Regions share nothing mutable, so each runs on its own thread; results
    // are reported in the order the regions were given.
    let results: Vec<_> = thread::scope(|scope| {
        let handles: Vec<_> = csv
            .region
            .iter()
            .map(|region| scope.spawn(|| report_region(csv, region, &s, out_dir)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("region worker panicked"))
            .collect()
    });
    let mut first_error = None;
    for result in results {
        match result {
            Ok((analysis, files)) => {
                writeln!(out, "{}", best_line(&analysis))?;
                for f in files {
                    writeln!(out, "  {}", f.display())?;
                }
            }
            Err(e) if first_error.is_none() => first_error = Some(e),
            Err(e) => log::error!("{e}"),
        }
    }
    match first_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn cmd_group(kind: &GroupKind, alpha: f64, out: &mut dyn Write) -> CmdResult {
    let (name, group): (String, OperatorGroup) = match (kind.zn, kind.mn, kind.zp) {
        (Some(n), _, _) => (format!("Z_{n}"), build_group_zn(n, alpha)?),
        (_, Some(n), _) => (format!("M_{n}"), build_group_mn(n, alpha)?),
        (_, _, Some(p)) => (format!("Z_{p}^+"), build_group_zp(p, alpha)?),
        _ => return Err(Failure::Usage("choose one of --zn, --mn, --zp".into())),
    };
    writeln!(
        out,
        "{name}: {} elements, composition {:?} mod {}, alpha {}",
        group.len(),
        group.law(),
        group.modulus(),
        alpha
    )?;
    for e in group.elements() {
        writeln!(out, "{e}  order {}", e.order())?;
    }
    let report = verify_group_axioms(&group);
    writeln!(out, "axioms: {report}")?;
    writeln!(out, "group: {}", report.all())?;
    Ok(())
}
