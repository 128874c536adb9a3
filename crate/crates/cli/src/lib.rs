//! Argument table and command dispatch for the `rankskew` binary.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use rankskew_core::analysis::{cross_section_stats, pca_spectrum, DEFAULT_PCA_STEP, DEFAULT_PCA_WINDOW};
use rankskew_core::io::{self, InputKind};
use rankskew_core::portfolio::{carry_pairs, decile_table, rank_buckets, Rebalance, DEFAULT_BUCKETS};
use rankskew_core::report::{curve_file_name, render_report, CurveData, InputRecord, RegressionSection, Report, SynthSection};
use rankskew_core::series::{aggregate_monthly, excess_returns, risk_manage, DEFAULT_RISK_SPAN};
use rankskew_core::skew::{ranked_pnl, skew_report, CurveVariant, DEFAULT_BOOTSTRAP};
use rankskew_core::synth::{fig10_sweep, gaussian_sample, AsymmetricStudentT, EdgeworthDensity};
use rankskew_core::{Error, Period, Result, ReturnSeries};

#[derive(Debug, Parser)]
#[command(name = "rankskew", version, about = "Ranked-amplitude skewness analysis of strategy returns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Skewness report with bootstrap errors, plus ranked-P&L plot data.
    Analyze(AnalyzeArgs),
    /// Ranked-P&L curve and its symmetrized counterpart as CSV.
    Rankplot(RankplotArgs),
    /// Draw a synthetic sample and record its exact functionals.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Exact zeta3 and zeta-star across right-tail exponents.
    Fig10(Fig10Args),
    /// Volatility, zeta-star and Sharpe ratio of signal-ranked bucket portfolios.
    Deciles(DecilesArgs),
    /// Bucket portfolios of FX pairs ranked by interest-rate differential.
    Carry(CarryArgs),
    /// Sharpe-versus-skewness regression, channel and classification.
    Regress(RegressArgs),
    /// Rolling eigen-spectrum of the strategy correlation matrix.
    Pca(PcaArgs),
    /// Combined report over several inputs.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Directory receiving all outputs; created if missing.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// Worker threads. Outputs do not depend on this value.
    #[arg(long, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Price,
    Return,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PeriodArg {
    Daily,
    Monthly,
}

impl From<PeriodArg> for Period {
    fn from(p: PeriodArg) -> Self {
        match p {
            PeriodArg::Daily => Period::Daily,
            PeriodArg::Monthly => Period::Monthly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RebalanceArg {
    Daily,
    Monthly,
}

impl From<RebalanceArg> for Rebalance {
    fn from(r: RebalanceArg) -> Self {
        match r {
            RebalanceArg::Daily => Rebalance::Daily,
            RebalanceArg::Monthly => Rebalance::Monthly,
        }
    }
}

/// How a `date,value` series file is read and prepared.
#[derive(Debug, Clone, Args)]
pub struct SeriesInput {
    /// Series CSV with columns `date,value`.
    #[arg(value_name = "FILE")]
    pub input: PathBuf,
    /// Interpretation of the `value` column.
    #[arg(long, value_enum, default_value = "return")]
    pub kind: KindArg,
    /// Sampling period of the input.
    #[arg(long, value_enum, default_value = "daily")]
    pub period: PeriodArg,
    /// Annualized funding-rate CSV (`date,value`); returns become excess returns.
    #[arg(long, value_name = "FILE")]
    pub rates: Option<PathBuf>,
    /// Rescale by a lagged exponential moving average of absolute returns.
    #[arg(long)]
    pub risk_manage: bool,
    /// Span of the risk-management moving average.
    #[arg(long, default_value_t = DEFAULT_RISK_SPAN)]
    pub span: usize,
    /// Sum daily returns into calendar months after risk management.
    #[arg(long)]
    pub monthly: bool,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    /// Benchmark series CSV for co-skewness, read like the input.
    #[arg(long, value_name = "FILE")]
    pub benchmark: Option<PathBuf>,
    /// Seed of the bootstrap and symmetrization streams.
    #[arg(long)]
    pub seed: u64,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
    pub bootstrap: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct RankplotArgs {
    #[command(flatten)]
    pub series: SeriesInput,
    /// Seed of the symmetrization signs.
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Sample size.
    #[arg(long, value_name = "N")]
    pub n: usize,
    /// Seed of the sampling stream.
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum SynthCommand {
    /// Asymmetric Student-t with tail exponents nu+ and nu-.
    Ast {
        /// Right-tail exponent.
        #[arg(long)]
        nu_plus: f64,
        /// Left-tail exponent.
        #[arg(long)]
        nu_minus: f64,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Edgeworth (Gram-Charlier) density.
    Edgeworth {
        /// Classical skewness.
        #[arg(long, allow_negative_numbers = true)]
        zeta3: f64,
        /// Excess kurtosis.
        #[arg(long)]
        kurtosis: f64,
        #[command(flatten)]
        sample: SampleArgs,
    },
    /// Standard normal.
    Gauss {
        #[command(flatten)]
        sample: SampleArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Fig10Args {
    /// Left-tail exponent held fixed.
    #[arg(long, default_value_t = 3.5)]
    pub nu_minus: f64,
    /// Right-tail exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3.2,3.5,4,5,7,10")]
    pub nu_plus: Vec<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DecilesArgs {
    /// Asset returns, long CSV `date,asset,value`.
    #[arg(long, value_name = "FILE")]
    pub returns: PathBuf,
    /// Ranking signal, long CSV `date,asset,value`.
    #[arg(long, value_name = "FILE")]
    pub signal: PathBuf,
    /// Number of buckets.
    #[arg(long, default_value_t = DEFAULT_BUCKETS)]
    pub buckets: usize,
    /// Rebalance frequency.
    #[arg(long, value_enum, default_value = "monthly")]
    pub rebalance: RebalanceArg,
    /// Sampling period of the returns.
    #[arg(long, value_enum, default_value = "daily")]
    pub period: PeriodArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct CarryArgs {
    /// Spot prices in a common base currency, long CSV `date,asset,value`.
    #[arg(long, value_name = "FILE")]
    pub spot: PathBuf,
    /// Annualized short rates per currency, long CSV `date,asset,value`.
    #[arg(long, value_name = "FILE")]
    pub rates: PathBuf,
    /// Number of buckets.
    #[arg(long, default_value_t = DEFAULT_BUCKETS)]
    pub buckets: usize,
    /// Rebalance frequency.
    #[arg(long, value_enum, default_value = "monthly")]
    pub rebalance: RebalanceArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct RegressArgs {
    /// Cross-section CSV `name,sharpe,vol,zeta_star,err_sharpe,err_zeta_star,fit`.
    #[arg(value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PcaArgs {
    /// Strategy returns, long CSV `date,asset,value`.
    #[arg(value_name = "FILE")]
    pub input: PathBuf,
    /// Window length in panel dates.
    #[arg(long, default_value_t = DEFAULT_PCA_WINDOW)]
    pub window: usize,
    /// Step between window starts.
    #[arg(long, default_value_t = DEFAULT_PCA_STEP)]
    pub step: usize,
    /// Sampling period of the panel.
    #[arg(long, value_enum, default_value = "daily")]
    pub period: PeriodArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Series CSV (`date,value`) to analyze; repeatable.
    #[arg(long = "series", value_name = "FILE")]
    pub series: Vec<PathBuf>,
    /// Interpretation of the series `value` column.
    #[arg(long, value_enum, default_value = "return")]
    pub kind: KindArg,
    /// Sampling period of the series and panel.
    #[arg(long, value_enum, default_value = "daily")]
    pub period: PeriodArg,
    /// Cross-section CSV for the regression section.
    #[arg(long, value_name = "FILE")]
    pub cross_section: Option<PathBuf>,
    /// Long-format strategy panel for the correlation spectrum.
    #[arg(long, value_name = "FILE")]
    pub panel: Option<PathBuf>,
    /// Window length of the correlation spectrum.
    #[arg(long, default_value_t = DEFAULT_PCA_WINDOW)]
    pub window: usize,
    /// Step of the correlation spectrum.
    #[arg(long, default_value_t = DEFAULT_PCA_STEP)]
    pub step: usize,
    /// Add the exact sweep at this left-tail exponent.
    #[arg(long, value_name = "NU")]
    pub fig10_nu_minus: Option<f64>,
    /// Seed of the bootstrap and symmetrization streams.
    #[arg(long)]
    pub seed: u64,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP)]
    pub bootstrap: usize,
    #[command(flatten)]
    pub output: Output,
}

/// Files written so far by one invocation.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|source| Error::IoWrite { path: dir.display().to_string(), source })?;
        Ok(Self { dir: dir.to_path_buf(), written: Vec::new() })
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        io::write_file(&path, text)?;
        self.written.push(path);
        Ok(())
    }

    fn report(&mut self, report: &Report) -> Result<()> {
        let files = render_report(report, &self.dir)?;
        self.written.extend(files);
        Ok(())
    }

    fn discard(&self) {
        for p in &self.written {
            let _ = fs::remove_file(p);
        }
    }
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Analyze(a) => &a.output,
            Command::Rankplot(a) => &a.output,
            Command::Synth(SynthCommand::Ast { sample, .. })
            | Command::Synth(SynthCommand::Edgeworth { sample, .. })
            | Command::Synth(SynthCommand::Gauss { sample }) => &sample.output,
            Command::Fig10(a) => &a.output,
            Command::Deciles(a) => &a.output,
            Command::Carry(a) => &a.output,
            Command::Regress(a) => &a.output,
            Command::Pca(a) => &a.output,
            Command::Report(a) => &a.output,
        }
    }
}

/// Runs one parsed command. On failure every file it wrote is removed.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>> {
    let output = cli.command.output();
    let threads = output
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidParams(format!("cannot start worker threads: {e}")))?;
    let mut out = Outputs::new(&output.out_dir)?;
    match pool.install(|| dispatch(&cli.command, &mut out)) {
        Ok(()) => Ok(out.written),
        Err(e) => {
            out.discard();
            Err(e)
        }
    }
}

fn record(role: &str, path: &Path, rows: usize) -> InputRecord {
    InputRecord { role: role.to_string(), path: path.display().to_string(), rows }
}

fn kind(k: KindArg) -> InputKind {
    match k {
        KindArg::Price => InputKind::Price,
        KindArg::Return => InputKind::Return,
    }
}

/// Reads and prepares a series; returns it with its input records.
fn load_series(a: &SeriesInput) -> Result<(ReturnSeries, Vec<InputRecord>)> {
    let mut s = io::read_series(&a.input, kind(a.kind), a.period.into())?;
    let mut inputs = vec![record("series", &a.input, s.len())];
    if let Some(path) = &a.rates {
        let rates = io::read_rates(path)?;
        inputs.push(record("rates", path, rates.dates().len()));
        s = excess_returns(&s, &rates)?;
    }
    if a.risk_manage {
        s = risk_manage(&s, a.span)?;
    }
    if a.monthly {
        s = aggregate_monthly(&s)?;
    }
    Ok((s, inputs))
}

fn curve(s: &ReturnSeries, seed: u64) -> Result<CurveData> {
    let raw = ranked_pnl(s.values(), CurveVariant::Raw)?;
    let sym = ranked_pnl(s.values(), CurveVariant::Symmetrized { seed })?;
    Ok(CurveData { name: s.label().to_string(), p: raw.p, f: raw.f, f_sym: sym.f })
}

fn series_settings(report: &mut Report, a: &SeriesInput) {
    if a.risk_manage {
        report.settings.insert("risk_span".into(), a.span as f64);
    }
}

fn dispatch(cmd: &Command, out: &mut Outputs) -> Result<()> {
    match cmd {
        Command::Analyze(a) => {
            let (s, mut inputs) = load_series(&a.series)?;
            let bench = match &a.benchmark {
                Some(p) => {
                    let b = io::read_series(p, kind(a.series.kind), a.series.period.into())?;
                    inputs.push(record("benchmark", p, b.len()));
                    Some(b)
                }
                None => None,
            };
            let mut report = Report::new("analyze");
            report.seed = Some(a.seed);
            report.inputs = inputs;
            series_settings(&mut report, &a.series);
            report.skew.push(skew_report(&s, bench.as_ref(), a.bootstrap, a.seed)?);
            report.curves.push(curve(&s, a.seed)?);
            out.report(&report)
        }
        Command::Rankplot(a) => {
            let (s, _) = load_series(&a.series)?;
            let c = curve(&s, a.seed)?;
            out.write(&curve_file_name(&c.name), &io::curve_csv(&c.p, &c.f, &c.f_sym))
        }
        Command::Synth(sc) => synth(sc, out),
        Command::Fig10(a) => {
            let mut report = Report::new("fig10");
            report.fig10 = fig10_sweep(a.nu_minus, &a.nu_plus)?;
            out.report(&report)
        }
        Command::Deciles(a) => {
            let returns = io::read_panel(&a.returns, a.period.into())?;
            let signal = io::read_panel(&a.signal, a.period.into())?;
            let run = rank_buckets(&returns, &signal, a.buckets, a.rebalance.into())?;
            let mut report = Report::new("deciles");
            report.inputs = vec![
                record("returns", &a.returns, returns.to_long().len()),
                record("signal", &a.signal, signal.to_long().len()),
            ];
            report.settings.insert("buckets".into(), a.buckets as f64);
            report.deciles = Some(decile_table(&run.series)?);
            out.report(&report)
        }
        Command::Carry(a) => {
            let spot = io::read_panel(&a.spot, Period::Daily)?;
            let rates = io::read_panel(&a.rates, Period::Daily)?;
            let pairs = carry_pairs(&spot, &rates)?;
            let run = rank_buckets(&pairs.returns, &pairs.signal, a.buckets, a.rebalance.into())?;
            let mut report = Report::new("carry");
            report.inputs = vec![
                record("spot", &a.spot, spot.to_long().len()),
                record("rates", &a.rates, rates.to_long().len()),
            ];
            report.settings.insert("buckets".into(), a.buckets as f64);
            report.settings.insert("pairs".into(), pairs.returns.assets().len() as f64);
            report.deciles = Some(decile_table(&run.series)?);
            out.report(&report)
        }
        Command::Regress(a) => {
            let cs = io::read_cross_section(&a.input)?;
            let mut report = Report::new("regress");
            report.inputs = vec![record("cross_section", &a.input, cs.rows().len())];
            let result = cross_section_stats(&cs)?;
            report.regression = Some(RegressionSection { rows: cs.rows().to_vec(), result });
            out.report(&report)
        }
        Command::Pca(a) => {
            let panel = io::read_panel(&a.input, a.period.into())?;
            let mut report = Report::new("pca");
            report.inputs = vec![record("panel", &a.input, panel.to_long().len())];
            report.settings.insert("window".into(), a.window as f64);
            report.settings.insert("step".into(), a.step as f64);
            report.pca = Some(pca_spectrum(&panel, a.window, a.step)?);
            out.report(&report)
        }
        Command::Report(a) => {
            let mut report = Report::new("report");
            report.seed = Some(a.seed);
            for path in &a.series {
                let s = io::read_series(path, kind(a.kind), a.period.into())?;
                report.inputs.push(record("series", path, s.len()));
                report.skew.push(skew_report(&s, None, a.bootstrap, a.seed)?);
                report.curves.push(curve(&s, a.seed)?);
            }
            if let Some(path) = &a.cross_section {
                let cs = io::read_cross_section(path)?;
                report.inputs.push(record("cross_section", path, cs.rows().len()));
                let result = cross_section_stats(&cs)?;
                report.regression = Some(RegressionSection { rows: cs.rows().to_vec(), result });
            }
            if let Some(path) = &a.panel {
                let panel = io::read_panel(path, a.period.into())?;
                report.inputs.push(record("panel", path, panel.to_long().len()));
                report.pca = Some(pca_spectrum(&panel, a.window, a.step)?);
            }
            if let Some(nu_minus) = a.fig10_nu_minus {
                report.fig10 = fig10_sweep(nu_minus, &[3.2, 3.5, 4.0, 5.0, 7.0, 10.0])?;
            }
            out.report(&report)
        }
    }
}

fn synth(sc: &SynthCommand, out: &mut Outputs) -> Result<()> {
    let mut params = BTreeMap::new();
    let (section, sample, values) = match sc {
        SynthCommand::Ast { nu_plus, nu_minus, sample } => {
            let d = AsymmetricStudentT::new(*nu_plus, *nu_minus)?;
            params.insert("nu_plus".to_string(), *nu_plus);
            params.insert("nu_minus".to_string(), *nu_minus);
            let exact = d.zeta_star_exact()?;
            let zeta3 = if nu_plus.min(*nu_minus) > 3.0 { Some(d.zeta3_exact()?) } else { None };
            let section = SynthSection {
                distribution: "ast".into(),
                params,
                n: sample.n,
                exact_zeta_star: Some(exact.value),
                exact_zeta3: zeta3,
                standardized: exact.standardized,
            };
            (section, sample, d.sample(sample.n, sample.seed)?)
        }
        SynthCommand::Edgeworth { zeta3, kurtosis, sample } => {
            let d = EdgeworthDensity::new(*zeta3, *kurtosis)?;
            params.insert("zeta3".to_string(), *zeta3);
            params.insert("kurtosis".to_string(), *kurtosis);
            let m = d.moments()?;
            let section = SynthSection {
                distribution: "edgeworth".into(),
                params,
                n: sample.n,
                exact_zeta_star: Some(d.zeta_star_exact()?),
                exact_zeta3: Some(m.zeta3),
                standardized: true,
            };
            (section, sample, d.sample(sample.n, sample.seed)?)
        }
        SynthCommand::Gauss { sample } => {
            let section = SynthSection {
                distribution: "gauss".into(),
                params,
                n: sample.n,
                exact_zeta_star: Some(0.0),
                exact_zeta3: Some(0.0),
                standardized: true,
            };
            (section, sample, gaussian_sample(sample.n, sample.seed)?)
        }
    };
    let mut report = Report::new("synth");
    report.seed = Some(sample.seed);
    report.synth = Some(section);
    out.write("sample.csv", &io::series_csv(&values))?;
    out.report(&report)
}
