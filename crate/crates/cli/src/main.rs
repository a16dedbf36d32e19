//! `jellium` command-line tool.

mod config;
mod svg;

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use jellium::limit::{bulk_limit_kernel, BergmanKernel, BergmanRegion};
use jellium::poly::RootSet;
use jellium::stats::{campaign_values, default_kernel_grid, kernel_sup_diff, replica_rng};
use jellium::verify::{self, DEFAULT_SEED, SCENARIOS};
use jellium::{
    CoefficientLaw, Extremal, Jellium, Kernel, Model, Orientation, PointConfiguration, PreparedModel, RadialMeasure,
    Report, Statistic, VerifyOptions,
};
use serde_json::json;

use config::{parse_measure, parse_reference, ExperimentConfig};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "jellium", version, about = "Radial jellium, random polynomial zeros and their extremal laws")]
struct Cli {
    /// TOML experiment file; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for campaigns.
    #[arg(long, global = true, env = "JELLIUM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one configuration, or a campaign of a statistic.
    Sample(SampleArgs),
    /// Tabulate a theoretical CDF over a t-grid.
    Cdf(CdfArgs),
    /// Run a named acceptance scenario; exit status 0 iff it passes.
    Verify(VerifyArgs),
    /// Sup-distance between a finite kernel and a limiting kernel.
    KernelDiff(KernelDiffArgs),
    /// Scatter plot of points or histogram of values, as SVG.
    Plot(PlotArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ModelKind {
    Jellium,
    PolyZeros,
    Weyl,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// `circle:1`, `pareto_tail:2,1`, `fubini_study` or JSON.
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// Coefficient law for polynomial models.
    #[arg(long)]
    law: Option<String>,
    /// Mandatory, here or in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of replicas; more than one requires a statistic.
    #[arg(long)]
    replicas: Option<usize>,
    /// `max_mod`, `min_mod` or `inverse_max`: write one value per replica.
    #[arg(long)]
    statistic: Option<String>,
    /// Output CSV; standard output if absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Metadata JSON; defaults to the output path with extension `json`.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum CdfKind {
    BergmanMaxOutside,
    BergmanMinDisk,
    BulkMax,
    BulkMin,
    ExactMax,
    ExactMin,
}

#[derive(Args)]
struct CdfArgs {
    #[arg(long, value_enum)]
    kind: CdfKind,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Measure for the exact finite-n laws.
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long, default_value_t = 3.0)]
    t_max: f64,
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario name, or `all`.
    scenario: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<usize>,
    /// JSON report; standard output if absent.
    #[arg(long)]
    report: Option<PathBuf>,
    /// SVG histogram; defaults to the report path with extension `svg`.
    #[arg(long)]
    plot: Option<PathBuf>,
    #[arg(long, default_value_t = 40)]
    bins: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum KernelRef {
    BergmanInside,
    BergmanOutside,
    BulkOrigin,
    BulkInfinity,
}

#[derive(Args)]
struct KernelDiffArgs {
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum)]
    reference: KernelRef,
    /// Dilation `s` of the configuration before comparing.
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Radius of the evaluation grid.
    #[arg(long, default_value_t = 0.9)]
    grid: f64,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// CSV of `re,im` points or a single column of values.
    input: PathBuf,
    /// Reference CDF drawn as a density over the histogram.
    #[arg(long)]
    reference: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().context("configuring thread pool")?;
    }
    let cfg = ExperimentConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Sample(a) => sample(a, &cfg).map(|_| ExitCode::SUCCESS),
        Command::Cdf(a) => cdf(a).map(|_| ExitCode::SUCCESS),
        Command::Verify(a) => verify_cmd(a, &cfg),
        Command::KernelDiff(a) => kernel_diff(a, &cfg).map(|_| ExitCode::SUCCESS),
        Command::Plot(a) => plot(a, &cfg).map(|_| ExitCode::SUCCESS),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn measure_from(flag: Option<&str>, cfg: &ExperimentConfig) -> Result<Option<RadialMeasure>> {
    match flag.map(str::to_owned).or(cfg.measure_text()?) {
        Some(t) => parse_measure(&t).map(Some),
        None => Ok(None),
    }
}

fn root_report(set: &RootSet) -> serde_json::Value {
    json!({
        "roots": set.roots.len(),
        "clusters": set.clusters.len(),
        "max_backward_error": set.max_backward_error,
        "sweeps": set.sweeps,
        "converged": set.converged,
    })
}

fn sample(a: SampleArgs, cfg: &ExperimentConfig) -> Result<()> {
    let Some(seed) = a.seed.or(cfg.seed) else { bail!("--seed is required for sampling") };
    let kind = match (a.model, &cfg.model) {
        (Some(k), _) => k,
        (None, Some(s)) => ModelKind::from_str(s, true).map_err(|e| anyhow::anyhow!("model '{s}': {e}"))?,
        (None, None) => ModelKind::Jellium,
    };
    let n = a.n.or(cfg.n).context("--n is required")?;
    if n == 0 {
        bail!("n must be at least 1");
    }
    let replicas = a.replicas.or(cfg.replicas).unwrap_or(1);
    if replicas == 0 {
        bail!("replicas must be at least 1");
    }
    let statistic: Option<Statistic> = a.statistic.as_ref().or(cfg.statistic.as_ref()).map(|s| s.parse()).transpose()?;
    if replicas > 1 && statistic.is_none() {
        bail!("--statistic is required with more than one replica");
    }
    let law_text = a.law.clone().or(cfg.law.clone()).unwrap_or_else(|| "complex_gaussian".into());
    let law = CoefficientLaw::parse(&law_text)?;
    let measure = measure_from(a.measure.as_deref(), cfg)?;
    let model = match kind {
        ModelKind::Jellium => Model::Jellium { measure: measure.clone().context("--measure is required")?, n },
        ModelKind::PolyZeros => {
            Model::PolyZeros { measure: measure.clone().context("--measure is required")?, n, law: law.clone() }
        }
        ModelKind::Weyl => Model::Weyl { n, law: law.clone() },
    };
    log::info!("preparing {kind:?} with n = {n}");
    let prepared = PreparedModel::new(&model)?;
    let out = a.out.clone().or(cfg.out.clone());

    let mut meta = json!({
        "schema_version": SCHEMA_VERSION,
        "toolkit_version": env!("CARGO_PKG_VERSION"),
        "command": "sample",
        "model": value_name(kind),
        "measure": measure.as_ref().map(|m| serde_json::to_value(m.spec())).transpose()?,
        "n": n,
        "seed": seed,
        "replicas": replicas,
        "statistic": statistic,
        "law": (!matches!(kind, ModelKind::Jellium)).then(|| law.clone()),
    });

    let mut w = sink(out.as_deref())?;
    if let Some(stat) = statistic {
        let values = campaign_values(&prepared, stat, replicas, seed)?;
        writeln!(w, "value")?;
        for v in &values {
            writeln!(w, "{v}")?;
        }
        meta["rows"] = json!(values.len());
    } else {
        let mut rng = replica_rng(seed, 0);
        let cfg_points = match prepared.sample_roots(&mut rng) {
            None => prepared.sample(&mut replica_rng(seed, 0))?,
            Some(set) => {
                meta["root_report"] = root_report(&set);
                if !set.converged {
                    bail!("root finder did not converge after {} sweeps", set.sweeps);
                }
                PointConfiguration::new(set.roots, jellium::Provenance::RootSet)
            }
        };
        cfg_points.write_csv(&mut w)?;
        meta["rows"] = json!(cfg_points.len());
    }
    w.flush()?;

    let meta_path = a.meta.or(cfg.meta.clone()).or_else(|| out.as_ref().map(|p| p.with_extension("json")));
    match meta_path {
        Some(p) => write_json(&p, &meta)?,
        None => eprintln!("{}", serde_json::to_string(&meta)?),
    }
    Ok(())
}

fn cdf(a: CdfArgs) -> Result<()> {
    if a.points < 2 || !(a.t_max > a.t_min) {
        bail!("need at least 2 points and t_max > t_min");
    }
    let f: Box<dyn Fn(f64) -> Result<f64>> = match a.kind {
        CdfKind::BergmanMaxOutside => {
            let c = jellium::ProductCdf::BergmanMaxOutside { radius: a.radius };
            Box::new(move |t| Ok(c.eval(t)?))
        }
        CdfKind::BergmanMinDisk => {
            let c = jellium::ProductCdf::BergmanMinDisk { radius: a.radius };
            Box::new(move |t| Ok(c.eval(t)?))
        }
        CdfKind::BulkMax => {
            let c = jellium::ProductCdf::BulkMax { alpha: a.alpha, lambda: a.lambda };
            Box::new(move |t| Ok(c.eval(t)?))
        }
        CdfKind::BulkMin => {
            let c = jellium::ProductCdf::BulkMin { alpha: a.alpha, lambda: a.lambda };
            Box::new(move |t| Ok(c.eval(t)?))
        }
        CdfKind::ExactMax | CdfKind::ExactMin => {
            let m = parse_measure(a.measure.as_deref().context("--measure is required for exact laws")?)?;
            let j = Jellium::new(&m, a.n.context("--n is required for exact laws")?)?;
            let which = if matches!(a.kind, CdfKind::ExactMax) { Extremal::Max } else { Extremal::Min };
            Box::new(move |t| Ok(j.extremal_cdf(t, which)))
        }
    };
    let mut w = sink(a.out.as_deref())?;
    writeln!(w, "t,F")?;
    for i in 0..a.points {
        let t = a.t_min + (a.t_max - a.t_min) * i as f64 / (a.points - 1) as f64;
        writeln!(w, "{t},{}", f(t)?)?;
    }
    w.flush()?;
    Ok(())
}

fn scenario_plot(report: &Report, bins: usize) -> Option<(String, svg::Binning)> {
    let p = report.plot.as_ref()?;
    Some(svg::histogram(&p.samples, bins, Some(&p.curve), &format!("{}: {}", report.scenario, p.label)))
}

fn verify_cmd(a: VerifyArgs, cfg: &ExperimentConfig) -> Result<ExitCode> {
    let opts = VerifyOptions {
        seed: a.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
        replicas: a.replicas.or(cfg.replicas),
    };
    let names: Vec<&str> = if a.scenario == "all" { SCENARIOS.to_vec() } else { vec![a.scenario.as_str()] };
    let mut values = Vec::new();
    let mut all_pass = true;
    for name in names {
        log::info!("running scenario {name}");
        let report = verify::run(name, &opts)?;
        all_pass &= report.pass;
        let mut value = serde_json::to_value(&report)?;
        let plot_path = match (&a.plot, &a.report) {
            (Some(p), _) if a.scenario != "all" => Some(p.clone()),
            (Some(p), _) => Some(with_suffix(p, name, "svg")),
            (None, Some(r)) if a.scenario != "all" => Some(r.with_extension("svg")),
            (None, Some(r)) => Some(with_suffix(r, name, "svg")),
            (None, None) => None,
        };
        if let Some((text, binning)) = scenario_plot(&report, a.bins) {
            value["binning"] = serde_json::to_value(binning)?;
            if let Some(p) = plot_path {
                std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
                value["plot"] = json!(p.display().to_string());
            }
        }
        eprintln!("{name}: {}", if report.pass { "PASS" } else { "FAIL" });
        values.push(value);
    }
    let doc = if values.len() == 1 { values.pop().expect("one report") } else { json!(values) };
    match &a.report {
        Some(p) => write_json(p, &doc)?,
        None => println!("{}", serde_json::to_string_pretty(&doc)?),
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_owned()).unwrap_or_default()
}

fn with_suffix(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}-{suffix}.{ext}"))
}

fn kernel_diff(a: KernelDiffArgs, cfg: &ExperimentConfig) -> Result<()> {
    let measure = measure_from(a.measure.as_deref(), cfg)?.context("--measure is required")?;
    let n = a.n.or(cfg.n).context("--n is required")?;
    let finite = Jellium::new(&measure, n)?.rescaled_kernel(a.scale);
    let reference: Box<dyn Kernel> = match a.reference {
        KernelRef::BergmanInside => Box::new(BergmanKernel::new(a.radius, BergmanRegion::Inside)?),
        KernelRef::BergmanOutside => Box::new(BergmanKernel::new(a.radius, BergmanRegion::Outside)?),
        KernelRef::BulkOrigin => Box::new(bulk_limit_kernel(a.alpha, a.lambda, Orientation::Origin)?),
        KernelRef::BulkInfinity => Box::new(bulk_limit_kernel(a.alpha, a.lambda, Orientation::Infinity)?),
    };
    let grid = default_kernel_grid(a.grid);
    let grid: Vec<_> = match a.reference {
        KernelRef::BergmanInside => grid.into_iter().filter(|(z, w)| z.norm() < a.radius && w.norm() < a.radius).collect(),
        KernelRef::BergmanOutside => grid
            .into_iter()
            .filter(|(z, w)| z.norm() > a.radius && w.norm() > a.radius)
            .collect(),
        _ => grid,
    };
    if grid.is_empty() {
        bail!("no grid points inside the reference kernel's domain");
    }
    let d = kernel_sup_diff(&finite, reference.as_ref(), &grid);
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "measure": measure.spec(),
        "n": n,
        "scale": a.scale,
        "reference": value_name(a.reference),
        "grid_points": grid.len(),
        "absolute": d.absolute,
        "relative": d.relative,
        "reference_max": d.reference_max,
    });
    let mut w = sink(a.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)?;
    w.flush()?;
    Ok(())
}

enum PlotInput {
    Points(PointConfiguration),
    Values(Vec<f64>),
}

fn read_plot_input(path: &Path) -> Result<PlotInput> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let lines: Vec<String> = BufReader::new(file).lines().collect::<io::Result<_>>()?;
    let first = lines.iter().find(|l| !l.trim().is_empty()).context("empty input file")?;
    if first.split(',').count() == 2 {
        let cfg = PointConfiguration::read_csv(lines.join("\n").as_bytes())
            .with_context(|| format!("reading points from {}", path.display()))?;
        return Ok(PlotInput::Points(cfg));
    }
    let mut values = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let field = line.trim().trim_matches('"');
        if field.is_empty() {
            continue;
        }
        if field.contains(',') {
            bail!("line {}: expected one column", i + 1);
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if values.is_empty() && i == 0 => {}
            Err(e) => bail!("line {}: '{field}': {e}", i + 1),
        }
    }
    Ok(PlotInput::Values(values))
}

fn plot(a: PlotArgs, cfg: &ExperimentConfig) -> Result<()> {
    let text = match read_plot_input(&a.input)? {
        PlotInput::Points(points) => svg::scatter(&points.points, &a.title),
        PlotInput::Values(values) => {
            let reference = a.reference.as_ref().or(cfg.reference.as_ref()).map(|r| parse_reference(r)).transpose()?;
            let bins = a.bins.or(cfg.bins).unwrap_or(40);
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let curve = match reference {
                Some(c) if lo < hi => {
                    c.eval(lo)?;
                    Some(verify::density_curve(|t| c.eval(t).unwrap_or(f64::NAN), lo, hi))
                }
                _ => None,
            };
            let (text, binning) = svg::histogram(&values, bins, curve.as_deref(), &a.title);
            log::info!("binning {binning:?}");
            text
        }
    };
    let mut w = sink(a.out.as_deref())?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}
