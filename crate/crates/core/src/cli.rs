//! Command-line front end: configuration, dispatch and output files.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::amplitudes::{check_symbol_order, AmplitudeProfile};
use crate::catalog::{self, SingularityType};
use crate::error::{Error, Result};
use crate::fold;
use crate::scaling::{self, geometric_grid, ScanPlan, Verdict, XStrategy};
use crate::torus::{self, CapMode};
use crate::verify::{self, VerifyOptions};

/// Exit code for a run whose expectations all held.
pub const EXIT_OK: i32 = 0;
/// Some expectation failed or was inconclusive.
pub const EXIT_FAIL: i32 = 1;
/// The configuration was rejected.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeChoice {
    FixedBump,
    NarrowBump,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AmplitudeConfig {
    pub kind: AmplitudeChoice,
    pub delta: f64,
}

impl Default for AmplitudeConfig {
    fn default() -> Self {
        Self {
            kind: AmplitudeChoice::FixedBump,
            delta: 0.0,
        }
    }
}

impl AmplitudeConfig {
    pub fn build(&self, dim: usize) -> Result<AmplitudeProfile> {
        match self.kind {
            AmplitudeChoice::FixedBump => Ok(AmplitudeProfile::fixed(dim)),
            AmplitudeChoice::NarrowBump => AmplitudeProfile::narrow(self.delta, dim),
            AmplitudeChoice::Gaussian if dim == 1 => AmplitudeProfile::gaussian(self.delta),
            AmplitudeChoice::Gaussian => Err(Error::param(
                "amplitude.kind",
                "gaussian is only available for one phase variable",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TorusConfig {
    pub mode: CapMode,
    pub n: usize,
    pub delta: f64,
    pub cap_constant: f64,
    /// Unit direction; the built-in default for `n` when absent.
    pub omega: Option<Vec<f64>>,
    /// Ball mode.
    pub h_grid: Vec<f64>,
    /// Sphere mode: dyadic blocks from `j_start` up to `j_end`.
    pub j_start: Option<u64>,
    pub j_end: Option<u64>,
}

impl Default for TorusConfig {
    fn default() -> Self {
        Self {
            mode: CapMode::Sphere,
            n: 2,
            delta: 0.5,
            cap_constant: 1.0,
            omega: None,
            h_grid: geometric_grid(1e-2, 1e-5, 8),
            j_start: None,
            j_end: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaConfig {
    pub eps_grid: Vec<f64>,
    /// In units of ε.
    pub x_grid: Vec<f64>,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        Self {
            eps_grid: geometric_grid(1e-1, 1e-4, 7),
            x_grid: (-20..=20).map(|i| i as f64 * 0.5).collect(),
        }
    }
}

/// Everything a run needs. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub singularity: String,
    pub amplitude: AmplitudeConfig,
    /// Decreasing h values; the default grid for the phase when absent.
    pub h_grid: Option<Vec<f64>>,
    pub x_strategy: XStrategy,
    pub shell_count: usize,
    pub points_per_shell: usize,
    pub random_points: usize,
    pub refine_steps: Option<usize>,
    pub rel_tol: Option<f64>,
    /// Slope tolerance; 0.03 (k = 1) or 0.06 (k = 2) when absent.
    pub tolerance: Option<f64>,
    /// Regularities for `sweep` and `fold`.
    pub deltas: Vec<f64>,
    pub seed: u64,
    pub workers: Option<usize>,
    pub quick: bool,
    pub torus: TorusConfig,
    pub lemma: LemmaConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            singularity: "A2".into(),
            amplitude: AmplitudeConfig::default(),
            h_grid: None,
            x_strategy: XStrategy::OmegaShells,
            shell_count: 8,
            points_per_shell: 4,
            random_points: 0,
            refine_steps: None,
            rel_tol: None,
            tolerance: None,
            deltas: Vec::new(),
            seed: VerifyOptions::default().seed,
            workers: None,
            quick: false,
            torus: TorusConfig::default(),
            lemma: LemmaConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::param("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn singularity_type(&self) -> Result<SingularityType> {
        self.singularity.parse().map_err(|e: Error| match e {
            Error::InvalidSingularity(m) => Error::param("singularity", m),
            other => other,
        })
    }

    /// Scan plan for the configured singularity and amplitude.
    pub fn scan_plan(&self) -> Result<ScanPlan> {
        let t = self.singularity_type()?;
        let phase = catalog::build_phase(t);
        let amp = self.amplitude.build(phase.k())?;
        let mut plan = ScanPlan::new(phase, amp);
        if let Some(g) = &self.h_grid {
            plan.h_grid = g.clone();
        }
        plan.x_strategy = self.x_strategy;
        plan.shell_count = self.shell_count;
        plan.points_per_shell = self.points_per_shell;
        plan.random_points = self.random_points;
        plan.seed = self.seed;
        if let Some(r) = self.refine_steps {
            plan.refine_steps = r;
        }
        if let Some(r) = self.rel_tol {
            plan.rel_tol = r;
        }
        if self.quick {
            plan.shell_count = plan.shell_count.min(4);
            plan.points_per_shell = 1;
        }
        plan.validate()?;
        Ok(plan)
    }

    fn tolerance_for(&self, k: usize) -> f64 {
        self.tolerance.unwrap_or(if k == 1 {
            scaling::TOL_1D
        } else {
            scaling::TOL_2D
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == Some(0) {
            return Err(Error::param("workers", "must be at least 1"));
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::param("tolerance", "must lie in (0, 1)"));
            }
        }
        let unit = |d: f64| (0.0..=1.0).contains(&d);
        if !self.deltas.iter().all(|&d| unit(d)) {
            return Err(Error::param("deltas", "every δ must lie in [0, 1]"));
        }
        if !unit(self.amplitude.delta) {
            return Err(Error::param("amplitude.delta", "must lie in [0, 1]"));
        }
        if let Some(g) = &self.h_grid {
            if g.iter().any(|&h| !(h > 0.0 && h < 1.0)) || g.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::param("h_grid", "must be strictly decreasing in (0, 1)"));
            }
        }
        let tc = &self.torus;
        if !(1..=torus::MAX_DIM).contains(&tc.n) {
            return Err(Error::param("torus.n", format!("must lie in 1..={}", torus::MAX_DIM)));
        }
        if !unit(tc.delta) {
            return Err(Error::param("torus.delta", "must lie in [0, 1]"));
        }
        if !(tc.cap_constant > 0.0) {
            return Err(Error::param("torus.cap_constant", "must be positive"));
        }
        if tc.omega.as_ref().is_some_and(|w| w.len() != tc.n) {
            return Err(Error::param("torus.omega", format!("needs {} entries", tc.n)));
        }
        if tc.h_grid.iter().any(|&h| !(h > 0.0 && h < 1.0)) {
            return Err(Error::param("torus.h_grid", "every h must lie in (0, 1)"));
        }
        if self.lemma.eps_grid.iter().any(|&e| !(e > 0.0)) {
            return Err(Error::param("lemma.eps_grid", "every ε must be positive"));
        }
        self.singularity_type()?;
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "caustics", version, about = "Sup-norm scaling experiments at stable caustics")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Smaller scans; skips the 2D criteria under `verify`.
    #[arg(long, global = true)]
    pub quick: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of orders and thresholds.
    Catalog,
    /// Symbol-order check of an amplitude family.
    Symbols(AmpArgs),
    /// Sup-norm scan and exponent fit.
    Supnorm(ScanArgs),
    /// Threshold sweep over δ with narrow bumps.
    Sweep(ScanArgs),
    /// Lattice-point experiments on the torus.
    Torus(TorusArgs),
    /// Fold beyond its threshold.
    Fold(FoldArgs),
    /// The two exact integrals against their closed forms.
    Lemma62,
    /// Full acceptance matrix.
    Verify,
    /// Prints the effective configuration.
    Config,
}

#[derive(Debug, Args)]
pub struct AmpArgs {
    #[arg(long, value_enum)]
    pub amplitude: Option<AmpKindArg>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum AmpKindArg {
    Fixed,
    Narrow,
    Gaussian,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Singularity label such as A2, D4-, E6.
    #[arg(long = "type")]
    pub singularity: Option<String>,
    #[command(flatten)]
    pub amp: AmpArgs,
    /// Comma-separated regularities.
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long, value_enum)]
    pub mode: Option<CapModeArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum CapModeArg {
    Ball,
    Sphere,
}

#[derive(Debug, Args)]
pub struct FoldArgs {
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub deltas: Option<Vec<f64>>,
}

impl AmpArgs {
    fn apply(&self, c: &mut AmplitudeConfig) {
        if let Some(k) = self.amplitude {
            c.kind = match k {
                AmpKindArg::Fixed => AmplitudeChoice::FixedBump,
                AmpKindArg::Narrow => AmplitudeChoice::NarrowBump,
                AmpKindArg::Gaussian => AmplitudeChoice::Gaussian,
            };
        }
        if let Some(d) = self.delta {
            c.delta = d;
        }
    }
}

/// Merges the config file (if any) with command-line overrides.
pub fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.global.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(w) = cli.global.workers {
        c.workers = Some(w);
    }
    if let Some(s) = cli.global.seed {
        c.seed = s;
    }
    c.quick |= cli.global.quick;
    match &cli.command {
        Command::Symbols(a) => a.apply(&mut c.amplitude),
        Command::Supnorm(a) | Command::Sweep(a) => {
            if let Some(t) = &a.singularity {
                c.singularity = t.clone();
            }
            a.amp.apply(&mut c.amplitude);
            if let Some(d) = &a.deltas {
                c.deltas = d.clone();
            }
        }
        Command::Torus(a) => {
            if let Some(m) = a.mode {
                c.torus.mode = match m {
                    CapModeArg::Ball => CapMode::Ball,
                    CapModeArg::Sphere => CapMode::Sphere,
                };
            }
            if let Some(n) = a.n {
                c.torus.n = n;
            }
            if let Some(d) = a.delta {
                c.torus.delta = d;
            }
        }
        Command::Fold(a) => {
            if let Some(d) = a.delta {
                c.deltas = vec![d];
            }
            if let Some(d) = &a.deltas {
                c.deltas = d.clone();
            }
        }
        _ => {}
    }
    c.validate()?;
    Ok(c)
}

/// What a command produced: files to write, a JSON summary, and whether the
/// expectations held.
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub results: serde_json::Value,
    pub passed: bool,
    pub message: String,
}

fn fit_reference(fit: &scaling::ExponentFit) -> Option<String> {
    fit.reference.map(|r| r.to_string())
}

fn fit_passed(v: Verdict) -> bool {
    v == Verdict::Pass
}

fn run_supnorm(c: &RunConfig) -> Result<Outcome> {
    let t = c.singularity_type()?;
    let plan = c.scan_plan()?;
    let table = scaling::supnorm_scan(&plan)?;
    let fit = scaling::fit_exponent(&table, catalog::caustic_order(t), c.tolerance_for(plan.phase.k()));
    Ok(Outcome {
        message: format!(
            "{t}: slope {:.4} vs {} ({:?})",
            fit.slope,
            catalog::caustic_order(t),
            fit.verdict
        ),
        passed: fit_passed(fit.verdict),
        files: vec![("supnorm.csv".into(), table.to_csv())],
        results: json!({
            "type": t.to_string(),
            "delta": c.amplitude.delta,
            "slope": fit.slope,
            "r_squared": fit.r_squared,
            "reference": fit_reference(&fit),
            "verdict": fit.verdict,
            "fit": fit,
            "rows": table.rows,
        }),
    })
}

fn run_sweep(c: &RunConfig) -> Result<Outcome> {
    let t = c.singularity_type()?;
    let plan = c.scan_plan()?;
    let deltas = if c.deltas.is_empty() {
        vec![0.1, 0.2, 0.3, 1.0 / 3.0]
    } else {
        c.deltas.clone()
    };
    let sweep = scaling::threshold_sweep(t, &deltas, &plan, c.tolerance_for(plan.phase.k()))?;
    let mut csv = String::from("delta,h,lambda,y_index,abs_I,est_error,converged\n");
    let mut lines = Vec::new();
    for e in &sweep {
        for line in e.table.to_csv().lines().skip(1) {
            csv.push_str(&format!("{},{line}\n", e.delta));
        }
        lines.push(format!("δ={:.4}: {:.4} ({:?})", e.delta, e.fit.slope, e.fit.verdict));
    }
    let passed = sweep.iter().all(|e| e.exploratory || fit_passed(e.fit.verdict));
    let entries: Vec<_> = sweep
        .iter()
        .map(|e| json!({ "delta": e.delta, "exploratory": e.exploratory, "fold_exponent": e.fold_exponent, "fit": e.fit }))
        .collect();
    Ok(Outcome {
        message: format!("{t} sweep: {}", lines.join(", ")),
        passed,
        files: vec![("sweep.csv".into(), csv)],
        results: json!({ "singularity": t.to_string(), "entries": entries }),
    })
}

fn run_symbols(c: &RunConfig) -> Result<Outcome> {
    let amp = c.amplitude.build(1)?;
    let grid = c.h_grid.clone().unwrap_or_else(|| geometric_grid(1e-1, 1e-4, 8));
    let report = check_symbol_order(&amp, &grid, 3)?;
    let mut csv = String::from("alpha,fitted_order,expected_order,r_squared\n");
    for f in &report.fits {
        let alpha: Vec<String> = f.alpha.iter().map(|a| a.to_string()).collect();
        csv.push_str(&format!(
            "{},{},{},{}\n",
            alpha.join(" "),
            f.fitted_order,
            f.expected_order,
            f.r_squared
        ));
    }
    Ok(Outcome {
        message: format!("{} fitted orders written", report.fits.len()),
        passed: true,
        files: vec![("symbols.csv".into(), csv)],
        results: serde_json::to_value(&report).expect("report serializes"),
    })
}

fn run_torus(c: &RunConfig) -> Result<Outcome> {
    let tc = &c.torus;
    let n = tc.n;
    match tc.mode {
        CapMode::Ball => {
            let omega = tc.omega.clone().unwrap_or_else(|| torus::default_ball_omega(n));
            let rows = torus::ball_ratio_sweep(&omega, tc.delta, &tc.h_grid)?;
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h, r.ratio)).collect();
            let fit = torus::ratio_exponent(&pts)?;
            let mut csv = String::from("h,count,ratio\n");
            for r in &rows {
                csv.push_str(&format!("{},{},{}\n", r.h, r.count, r.ratio));
            }
            Ok(Outcome {
                message: format!("ball n={n}: ratio exponent {:.4}", fit.slope),
                passed: true,
                files: vec![("torus_ball.csv".into(), csv)],
                results: json!({ "mode": "ball", "slope": fit.slope, "r_squared": fit.r_squared, "rows": rows }),
            })
        }
        CapMode::Sphere => {
            let omega = tc.omega.clone().unwrap_or_else(|| torus::default_sphere_omega(n));
            let (a, b) = torus::default_j_range(n);
            let (a, b) = (tc.j_start.unwrap_or(a), tc.j_end.unwrap_or(b));
            let blocks =
                torus::dyadic_lower_bound_search(&omega, tc.delta, a, b, tc.cap_constant)?;
            let fit = torus::ratio_exponent(&torus::selected_ratios(&blocks))?;
            Ok(Outcome {
                message: format!("sphere n={n}: selected-j exponent {:.4}", fit.slope),
                passed: true,
                files: vec![("torus_blocks.csv".into(), torus::blocks_csv(&blocks))],
                results: json!({ "mode": "sphere", "slope": fit.slope, "r_squared": fit.r_squared, "blocks": blocks }),
            })
        }
    }
}

fn run_fold(c: &RunConfig) -> Result<Outcome> {
    let deltas = if c.deltas.is_empty() {
        verify::REGIME_DELTAS.to_vec()
    } else {
        c.deltas.clone()
    };
    let grid = c.h_grid.clone().unwrap_or_else(|| scaling::default_h_grid(1));
    let mut csv = String::from(fold::FOLD_CSV_HEADER);
    if deltas.len() >= 4 {
        let report = fold::regime_sweep(&deltas, &grid)?;
        for r in &report.reports {
            r.csv_rows(&mut csv);
        }
        let passed = report.max_deviation <= fold::FOLD_TOLERANCE;
        return Ok(Outcome {
            message: format!(
                "max deviation {:.4}, breakpoint {:.2}",
                report.max_deviation, report.breakpoint.breakpoint
            ),
            passed,
            files: vec![("fold.csv".into(), csv)],
            results: serde_json::to_value(&report).expect("report serializes"),
        });
    }
    let mut reports = Vec::new();
    for &d in &deltas {
        let mut e = fold::FoldExperiment::natural(d)?;
        e.h_grid = grid.clone();
        let r = fold::run_fold(&e)?;
        r.csv_rows(&mut csv);
        reports.push(r);
    }
    let passed = reports.iter().all(|r| fit_passed(r.fit.verdict));
    let msg: Vec<String> = reports
        .iter()
        .map(|r| format!("δ={:.4}: {:.4} vs {:.4}", r.delta, r.fit.slope, r.sharp_exponent))
        .collect();
    Ok(Outcome {
        message: msg.join(", "),
        passed,
        files: vec![("fold.csv".into(), csv)],
        results: serde_json::to_value(&reports).expect("reports serialize"),
    })
}

fn run_lemma(c: &RunConfig) -> Result<Outcome> {
    let r = fold::lemma_62_suite(&c.lemma.eps_grid, &c.lemma.x_grid)?;
    let mut csv = String::from("eps,x,first,first_oracle,second,second_oracle\n");
    for row in &r.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            row.eps, row.x, row.first, row.first_oracle, row.second, row.second_oracle
        ));
    }
    let passed = r.max_rel_err <= 1e-6
        && fit_passed(r.first_fit.verdict)
        && fit_passed(r.second_fit.verdict);
    Ok(Outcome {
        message: format!(
            "max relative error {:.2e}; exponents {:.4}, {:.4}",
            r.max_rel_err, r.first_fit.slope, r.second_fit.slope
        ),
        passed,
        files: vec![("lemma62.csv".into(), csv)],
        results: json!({ "max_rel_err": r.max_rel_err, "first_fit": r.first_fit, "second_fit": r.second_fit }),
    })
}

fn run_verify(c: &RunConfig) -> Result<Outcome> {
    let opts = VerifyOptions {
        quick: c.quick,
        seed: c.seed,
    };
    let results = verify::verify_all(&opts);
    let report = verify::render_report(&results);
    Ok(Outcome {
        message: report.trim_end().to_string(),
        passed: verify::all_passed(&results),
        files: vec![("verify.txt".into(), report)],
        results: serde_json::to_value(&results).expect("results serialize"),
    })
}

/// Runs one command with a resolved configuration.
pub fn execute(command: &Command, c: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Catalog => Ok(Outcome {
            message: catalog::catalog_csv(),
            passed: true,
            files: vec![("catalog.csv".into(), catalog::catalog_csv())],
            results: json!(null),
        }),
        Command::Symbols(_) => run_symbols(c),
        Command::Supnorm(_) => run_supnorm(c),
        Command::Sweep(_) => run_sweep(c),
        Command::Torus(_) => run_torus(c),
        Command::Fold(_) => run_fold(c),
        Command::Lemma62 => run_lemma(c),
        Command::Verify => run_verify(c),
        Command::Config => Ok(Outcome {
            message: c.to_json(),
            passed: true,
            files: Vec::new(),
            results: json!(null),
        }),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Catalog => "catalog",
        Command::Symbols(_) => "symbols",
        Command::Supnorm(_) => "supnorm",
        Command::Sweep(_) => "sweep",
        Command::Torus(_) => "torus",
        Command::Fold(_) => "fold",
        Command::Lemma62 => "lemma62",
        Command::Verify => "verify",
        Command::Config => "config",
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParameter { .. }
            | Error::InvalidSingularity(_)
            | Error::EnumerationLimit { .. }
            | Error::UnsupportedDimension(_)
            | Error::NotInDag(_)
    )
}

fn write_outputs(out: &Path, name: &str, c: &RunConfig, o: &Outcome, seconds: f64) -> Result<()> {
    std::fs::create_dir_all(out)?;
    for (file, body) in &o.files {
        std::fs::write(out.join(file), body)?;
    }
    let summary = json!({
        "command": name,
        "config": c,
        "passed": o.passed,
        "results": o.results,
    });
    std::fs::write(
        out.join("summary.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    )?;
    let timing = json!({ "command": name, "seconds": seconds });
    std::fs::write(
        out.join("timing.json"),
        serde_json::to_string_pretty(&timing).expect("timing serializes") + "\n",
    )?;
    Ok(())
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("invalid configuration: {e}");
            return EXIT_CONFIG;
        }
    };
    let go = || -> Result<(Outcome, f64)> {
        let start = Instant::now();
        let o = execute(&cli.command, &config)?;
        Ok((o, start.elapsed().as_secs_f64()))
    };
    let result = match config.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w).build() {
            Ok(pool) => pool.install(go),
            Err(e) => Err(Error::param("workers", e.to_string())),
        },
        None => go(),
    };
    let (outcome, seconds) = match result {
        Ok(v) => v,
        Err(e) if is_config_error(&e) => {
            eprintln!("invalid configuration: {e}");
            return EXIT_CONFIG;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    };
    println!("{}", outcome.message);
    if !matches!(cli.command, Command::Config) {
        let name = command_name(&cli.command);
        if let Err(e) = write_outputs(&cli.global.out, name, &config, &outcome, seconds) {
            eprintln!("error: {e}");
            return EXIT_FAIL;
        }
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}
