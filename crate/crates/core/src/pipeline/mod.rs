//! End-to-end avocado price workflow: ingest → monthly aggregate → ordered
//! split → integer fit → α sweep → selection → CSV and SVG output.

pub mod ingest;
pub mod monthly;
pub mod plot;
pub mod report;
pub mod series_file;

use std::path::PathBuf;

pub use ingest::{ingest_csv, read_records, AvocadoType, RawRecord};
pub use monthly::{group_monthly, Aggregate, MonthlyGroup};
pub use plot::{emit_plots, PlotModels};
pub use report::{emit_sweep_csv, write_sweep_csv, SweepReport};
pub use series_file::SeriesFile;

use crate::error::Result;
use crate::fracmodel::{
    default_alpha_grid, refit_per_alpha, select_best, snap_order, sweep_alpha, sweep_alpha_refit,
    BetaMode, FracModel,
};
use crate::regress::{fit_poly, split_ordered, FitDiagnostics, Series, SplitSeries};

pub const DEFAULT_TEST_FRACTION: f64 = 0.2;
pub const DEFAULT_DEGREE: usize = 3;

/// Model and sweep settings, independent of where the series came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub degree: usize,
    pub grid: Vec<f64>,
    pub beta_mode: BetaMode,
    pub test_fraction: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        SweepSettings {
            degree: DEFAULT_DEGREE,
            grid: default_alpha_grid(),
            beta_mode: BetaMode::Fixed,
            test_fraction: DEFAULT_TEST_FRACTION,
        }
    }
}

/// Everything [`analyze_series`] produces.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: SweepReport,
    pub split: SplitSeries,
    /// Integer-order fit on the training part (α = 0).
    pub integer_model: FracModel,
    pub integer_diagnostics: FitDiagnostics,
    /// Model of the selected row.
    pub selected_model: FracModel,
    /// Best model with α ≠ 0: the selected one unless α = 0 won, in which
    /// case the runner-up by the same rule.
    pub fractional_model: FracModel,
}

impl Analysis {
    pub fn plot_models(&self) -> PlotModels {
        PlotModels {
            integer: self.integer_model.clone(),
            fractional: self.fractional_model.clone(),
        }
    }
}

fn model_at(
    settings: &SweepSettings,
    split: &SplitSeries,
    integer: &FracModel,
    alpha: f64,
) -> Result<FracModel> {
    match settings.beta_mode {
        BetaMode::Fixed => FracModel::new(integer.base().clone(), alpha),
        BetaMode::Refit => refit_per_alpha(&split.train, settings.degree, alpha),
    }
}

/// Splits, fits, sweeps and selects on an already aggregated series.
pub fn analyze_series(
    series: &Series,
    region: &str,
    avocado_type: AvocadoType,
    settings: &SweepSettings,
) -> Result<Analysis> {
    let split = split_ordered(series, settings.test_fraction)?;
    let (base, integer_diagnostics) = fit_poly(&split.train, settings.degree)?;
    let integer_model = FracModel::new(base.clone(), 0.0)?;
    let rows = match settings.beta_mode {
        BetaMode::Fixed => sweep_alpha(&base, &split, &settings.grid)?,
        BetaMode::Refit => sweep_alpha_refit(&split, settings.degree, &settings.grid)?,
    };
    let best = select_best(&rows)?;
    let nonzero: Vec<_> = rows.iter().filter(|r| r.alpha != 0.0).copied().collect();
    let fractional_alpha = if best.row.alpha != 0.0 || nonzero.is_empty() {
        best.row.alpha
    } else {
        select_best(&nonzero)?.row.alpha
    };
    let selected_model = model_at(settings, &split, &integer_model, best.row.alpha)?;
    let fractional_model = model_at(settings, &split, &integer_model, fractional_alpha)?;
    debug_assert_eq!(
        selected_model.alpha(),
        snap_order(settings.degree, selected_model.alpha())
    );
    let report = SweepReport::new(
        region,
        avocado_type,
        settings.degree,
        settings.beta_mode,
        rows,
        best,
    );
    Ok(Analysis {
        report,
        split,
        integer_model,
        integer_diagnostics,
        selected_model,
        fractional_model,
    })
}

/// Full workflow configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkflowConfig {
    pub csv_path: PathBuf,
    pub region: String,
    pub avocado_type: AvocadoType,
    pub agg: Aggregate,
    pub settings: SweepSettings,
}

impl WorkflowConfig {
    /// Monthly median, degree 3, default grid, fixed β, 20 % test split.
    pub fn new(csv_path: impl Into<PathBuf>, region: &str, avocado_type: AvocadoType) -> Self {
        WorkflowConfig {
            csv_path: csv_path.into(),
            region: region.to_string(),
            avocado_type,
            agg: Aggregate::Median,
            settings: SweepSettings::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WorkflowOutput {
    pub groups: Vec<MonthlyGroup>,
    pub series: Series,
    pub analysis: Analysis,
}

impl WorkflowOutput {
    pub fn report(&self) -> &SweepReport {
        &self.analysis.report
    }

    pub fn series_file(&self, config: &WorkflowConfig) -> SeriesFile {
        SeriesFile {
            series: self.series.clone(),
            region: config.region.clone(),
            avocado_type: config.avocado_type,
            agg: config.agg,
        }
    }
}

/// Loads the monthly series for a region from CSV.
pub fn load_series(config: &WorkflowConfig) -> Result<(Series, Vec<MonthlyGroup>)> {
    let records = ingest_csv(&config.csv_path, &config.region, config.avocado_type)?;
    group_monthly(&records, config.agg)
}

/// Runs the whole workflow for one region. Deterministic for a fixed
/// config and input file.
pub fn run_workflow(config: &WorkflowConfig) -> Result<WorkflowOutput> {
    let (series, groups) = load_series(config)?;
    let analysis = analyze_series(
        &series,
        &config.region,
        config.avocado_type,
        &config.settings,
    )?;
    Ok(WorkflowOutput {
        groups,
        series,
        analysis,
    })
}
