mod config;
mod output;
mod plot;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map};

use pjlab_core::identities::{p3, run, Reporter, ResidualReport, RunPlan, Status, SuiteConfig};
use pjlab_core::moments::{cross_check, moment_table};
use pjlab_core::pipeline::{Pipeline, PIPELINE_SHIFTS};
use pjlab_core::weight::WeightParams;
use pjlab_core::{LabError, PrecisionCtx, Real};

use config::{ConfigError, Format, RunConfig, Settings};
use output::{Cell, Table};

#[derive(Parser)]
#[command(name = "pjlab", version, about = "Moments, recurrence coefficients and identity checks for the weight e^(-t/x) x^alpha (1-x)^beta")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the moments with both routes and their agreement.
    Moments {
        #[command(flatten)]
        common: Common,
        /// Highest moment index (default 2*nmax+2).
        #[arg(long)]
        kmax: Option<String>,
    },
    /// Evaluate the identity suites and report residuals.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated suites to run (default: all).
        #[arg(long)]
        suites: Option<String>,
        /// Seed of the complex sample points.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Tabulate recurrence coefficients and auxiliary quantities over n and t.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Write an SVG plot of a quantity (alpha, beta, R, Rstar, r, rstar, H, S) against t.
        #[arg(long)]
        svg: Vec<String>,
    },
    /// Check the Painleve III limit beta -> infinity at fixed s = beta t.
    P3limit {
        #[command(flatten)]
        common: Common,
        /// The fixed product s = beta t.
        #[arg(long)]
        s: Option<String>,
        /// Comma-separated increasing beta values.
        #[arg(long = "beta-values")]
        beta_values: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// File of key=value lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Comma-separated t values.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<String>,
    #[arg(long)]
    nmax: Option<String>,
    /// Working precision in bits (default from nmax).
    #[arg(long)]
    bits: Option<String>,
    /// Tolerance override, class=value or identity=value; repeatable.
    #[arg(long)]
    tol: Vec<String>,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Common {
    fn settings(&self) -> Result<Settings, ConfigError> {
        let mut s = Settings::new(self.config.as_deref())?;
        s.flag("alpha", self.alpha.clone());
        s.flag("beta", self.beta.clone());
        s.flag("t", self.t.clone());
        s.flag("nmax", self.nmax.clone());
        s.flag("bits", self.bits.clone());
        if !self.tol.is_empty() {
            s.flag("tol", Some(self.tol.join(",")));
        }
        s.flag("out", self.out.as_ref().map(|p| p.display().to_string()));
        s.flag("format", self.format.clone());
        Ok(s)
    }
}

enum Failure {
    Config(String),
    Numeric(LabError),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(format!("I/O error: {e}"))
    }
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        Failure::Numeric(e)
    }
}

fn open(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn params(cfg: &RunConfig, t: &Real) -> Result<WeightParams, Failure> {
    WeightParams::new(cfg.alpha.clone(), cfg.beta.clone(), t.clone()).map_err(|e| Failure::Config(e.to_string()))
}

fn header(cfg: &RunConfig) -> Map<String, serde_json::Value> {
    let d = cfg.digits();
    let mut m = Map::new();
    m.insert(
        "config".into(),
        json!({
            "alpha": cfg.alpha.to_sci_string(d),
            "beta": cfg.beta.to_sci_string(d),
            "t": cfg.t_grid.iter().map(|t| t.to_sci_string(d)).collect::<Vec<_>>(),
            "nmax": cfg.n_max,
            "bits": cfg.bits,
        }),
    );
    m
}

fn cmd_moments(common: &Common, kmax: Option<String>) -> Result<bool, Failure> {
    let mut s = common.settings()?;
    s.flag("kmax", kmax);
    let cfg = RunConfig::from_settings(&s, Format::Csv)?;
    let k_max = s.uint("kmax", 2 * cfg.n_max + 2)? as i64;
    let ctx = PrecisionCtx::new(cfg.bits)?;
    let d = cfg.digits();
    let mut rows = Vec::new();
    for t in &cfg.t_grid {
        let p = params(&cfg, t)?;
        let tables = moment_table(&p, k_max, &PIPELINE_SHIFTS, &ctx)?;
        let routes = if t.is_positive() {
            cross_check(&tables[0], &ctx)?
        } else {
            Vec::new()
        };
        for tab in &tables {
            for k in tab.k_min..=tab.k_max() {
                let route = routes.iter().find(|r| r.k == k && tab.shift == PIPELINE_SHIFTS[0]);
                let agreement = route.map(|r| {
                    if r.difference.is_zero() {
                        r.difference.clone()
                    } else {
                        &r.difference / &r.combined_bound
                    }
                });
                rows.push(vec![
                    Cell::Int(k),
                    Cell::Text(tab.shift.to_string()),
                    Cell::num(t, d),
                    Cell::num(tab.at(k)?, d),
                    Cell::opt(tab.bound(k), 6),
                    Cell::opt(agreement.as_ref(), 6),
                ]);
            }
        }
    }
    let table = Table {
        kind: "moments",
        columns: vec!["k", "shift", "t", "mu", "bound", "route_agreement"],
        rows,
    };
    let mut out = open(cfg.out.as_deref())?;
    table.write(cfg.format, header(&cfg), &mut out)?;
    out.flush()?;
    Ok(true)
}

fn write_reports(cfg: &RunConfig, reports: &[ResidualReport]) -> Result<bool, Failure> {
    let mut extra = header(cfg);
    extra.extend(output::summary(reports));
    let mut out = open(cfg.out.as_deref())?;
    output::report_table(reports, cfg.digits()).write(cfg.format, extra, &mut out)?;
    out.flush()?;
    Ok(reports.iter().all(|r| r.status != Status::Fail))
}

fn cmd_verify(common: &Common, suites: Option<String>, seed: Option<String>) -> Result<bool, Failure> {
    let mut s = common.settings()?;
    s.flag("suites", suites);
    s.flag("seed", seed);
    let cfg = RunConfig::from_settings(&s, Format::Json)?;
    let ctx = PrecisionCtx::new(cfg.bits)?;
    let mut suite_cfg = SuiteConfig::all(cfg.bits);
    suite_cfg.suites = cfg.suites.clone();
    suite_cfg.tolerances = cfg.tolerances.clone();
    suite_cfg.seed = s.uint("seed", suite_cfg.seed as usize)? as u64;
    let plan = RunPlan {
        alpha: cfg.alpha.clone(),
        beta: cfg.beta.clone(),
        t_grid: cfg.t_grid.clone(),
        n_max: cfg.n_max,
    };
    let reports = run(&plan, &suite_cfg, &ctx)?;
    write_reports(&cfg, &reports)
}

/// Quantities tabulated by `sweep`, in column order.
const SWEEP_COLUMNS: [&str; 10] = ["n", "t", "alpha_n", "beta_n", "R_n", "Rstar_n", "r_n", "rstar_n", "H_n", "S_n"];

fn sweep_column(quantity: &str) -> Option<usize> {
    let name = format!("{quantity}_n");
    SWEEP_COLUMNS.iter().position(|c| *c == name)
}

fn cmd_sweep(common: &Common, svg: Vec<String>) -> Result<bool, Failure> {
    let mut s = common.settings()?;
    if !svg.is_empty() {
        s.flag("svg", Some(svg.join(",")));
    }
    let cfg = RunConfig::from_settings(&s, Format::Csv)?;
    let plots = s.strings("svg");
    for q in &plots {
        if sweep_column(q).is_none() {
            return Err(Failure::Config(format!("svg: unknown quantity {q:?}")));
        }
    }
    if !plots.is_empty() {
        if cfg.t_grid.len() < 2 {
            return Err(Failure::Config("svg plots need at least two t values".into()));
        }
        if cfg.out.is_none() {
            return Err(Failure::Config("svg plots are written next to --out, which is missing".into()));
        }
    }
    let ctx = PrecisionCtx::new(cfg.bits)?;
    let d = cfg.digits();
    let mut values: Vec<Vec<Real>> = Vec::new();
    let mut rows = Vec::new();
    for t in &cfg.t_grid {
        let p = Pipeline::build(&params(&cfg, t)?, cfg.n_max, &ctx)
            .map_err(|e| e.within(format!("sweep at t = {t}")))?;
        let (o, a) = (&p.ortho, &p.aux);
        for n in 0..=cfg.n_max {
            let beta_n = if n == 0 { ctx.zero() } else { o.beta_rec[n].clone() };
            let row = [
                o.alpha_rec[n].clone(),
                beta_n,
                a.big_r[n].clone(),
                a.big_r_star[n].clone(),
                a.r[n].clone(),
                a.r_star[n].clone(),
                a.big_h[n].clone(),
                a.s[n].clone(),
            ];
            let mut cells = vec![Cell::Int(n as i64), Cell::num(t, d)];
            cells.extend(row.iter().map(|v| Cell::num(v, d)));
            rows.push(cells);
            let mut v = vec![Real::from_i64(n as i64, 64), t.clone()];
            v.extend(row);
            values.push(v);
        }
    }
    let table = Table {
        kind: "sweep",
        columns: SWEEP_COLUMNS.to_vec(),
        rows,
    };
    let mut out = open(cfg.out.as_deref())?;
    table.write(cfg.format, header(&cfg), &mut out)?;
    out.flush()?;

    if let Some(base) = &cfg.out {
        for q in &plots {
            let col = sweep_column(q).expect("validated");
            let series: Vec<plot::Series> = (0..=cfg.n_max)
                .map(|n| {
                    let mut points: Vec<(f64, f64)> = values
                        .iter()
                        .filter(|v| v[0].to_f64() as usize == n)
                        .map(|v| (v[1].to_f64(), v[col].to_f64()))
                        .collect();
                    points.sort_by(|a, b| a.0.total_cmp(&b.0));
                    points.dedup_by(|a, b| a.0 == b.0);
                    plot::Series {
                        label: format!("n = {n}"),
                        points,
                    }
                })
                .collect();
            let path = svg_path(base, q);
            std::fs::write(&path, plot::svg(&format!("{} against t", SWEEP_COLUMNS[col]), &series))?;
        }
    }
    Ok(true)
}

fn svg_path(base: &Path, quantity: &str) -> PathBuf {
    let stem = base.file_stem().map_or_else(|| "sweep".into(), |s| s.to_string_lossy().into_owned());
    base.with_file_name(format!("{stem}.{quantity}.svg"))
}

fn cmd_p3limit(common: &Common, s_flag: Option<String>, betas: Option<String>) -> Result<bool, Failure> {
    let mut s = common.settings()?;
    s.flag("s", s_flag);
    s.flag("beta-values", betas);
    if s.get("nmax").is_none() {
        s.flag("nmax", Some("1".into()));
    }
    let cfg = RunConfig::from_settings(&s, Format::Json)?;
    let sv = s.real("s", "1", cfg.bits)?;
    let betas = s.reals("beta-values", &["1e3", "1e4", "1e5"], cfg.bits)?;
    if !sv.is_positive() {
        return Err(Failure::Config("s must be positive".into()));
    }
    if betas.len() < 2 || betas.windows(2).any(|w| !(w[0].is_positive() && w[1] > w[0])) {
        return Err(Failure::Config("beta-values must be at least two increasing positive numbers".into()));
    }
    let ctx = PrecisionCtx::new(cfg.bits)?;
    let mut rep = Reporter::new(&cfg.tolerances, ctx.residual_floor());
    p3::check(cfg.n_max, &cfg.alpha, &sv, &betas, &ctx, &mut rep)?;
    write_reports(&cfg, &rep.reports)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Moments { common, kmax } => cmd_moments(&common, kmax),
        Command::Verify { common, suites, seed } => cmd_verify(&common, suites, seed),
        Command::Sweep { common, svg } => cmd_sweep(&common, svg),
        Command::P3limit {
            common,
            s,
            beta_values,
        } => cmd_p3limit(&common, s, beta_values),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("pjlab: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("pjlab: numeric failure: {e}");
            ExitCode::from(3)
        }
    }
}
