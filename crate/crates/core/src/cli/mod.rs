//! The `rulerlab` command line: one subcommand per construction plus `verify`.
//!
//! Exit status is 0 on success, 1 when a verification fails or output cannot be written, and
//! 2 for usage errors (unknown flags, out-of-range arguments, bad config files).

pub mod config;
pub mod report;
pub mod svg;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::automaton::{self, age_sequence, Interval, Placement};
use crate::cantor::cantor_level;
use crate::demography::{census, census_with_death};
use crate::dynamics::{
    delta_estimates, orbit_visibility, stationary_orbit, superstable_sequence, BisectionConfig,
    OrbitConfig,
};
use crate::error::Error;
use crate::polygon::{generation, vertex_index_sequence};
use crate::ruler::ruler_block;

use config::{env_cap, FileConfig, Format, RunConfig, MAX_N_ENV};
use report::{emit_csv, emit_json, Diagnostic, Report};

#[derive(Debug, Parser)]
#[command(
    name = "rulerlab",
    version,
    about = "Ruler sequence generators and cross-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// TOML file with default values for the flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The order-n block r_n, one term per row.
    Ruler {
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Point positions and ages of the interval duplication automaton.
    Automaton {
        #[arg(long)]
        steps: Option<u32>,
        /// Seed for the jittered placement.
        #[arg(long)]
        seed: Option<u64>,
        /// Place new points at random inside their gaps instead of at midpoints.
        #[arg(long)]
        jitter: bool,
        /// Initial point.
        #[arg(long, allow_hyphen_values = true)]
        origin: Option<f64>,
        /// Lower bound of the ambient interval (may be -inf).
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        /// Upper bound of the ambient interval (may be inf).
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Age census of the duplication population.
    Demography {
        #[arg(long)]
        n: Option<u32>,
        /// Individuals older than this die at the end of each step.
        #[arg(long)]
        lifespan: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Middle intervals of the Cantor construction after n steps.
    Cantor {
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Vertex indices of the nested 2^m-gons up to m = n.
    Polygon {
        #[arg(long)]
        n: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Superstable parameters of the logistic map and the visibility of their orbits.
    Cascade {
        #[arg(long)]
        max_n: Option<u32>,
        /// Period detection tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Iterations discarded before period detection.
        #[arg(long)]
        transient: Option<usize>,
        /// Emit the per-orbit visibility patterns instead of the parameter table.
        #[arg(long)]
        patterns: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run every cross-check up to order max-n.
    Verify {
        #[arg(long)]
        max_n: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

const DEFAULT_RULER_N: u32 = 8;
const DEFAULT_AUTOMATON_STEPS: u32 = 4;
const DEFAULT_DEMOGRAPHY_N: u32 = 6;
const DEFAULT_CANTOR_N: u32 = 4;
const DEFAULT_POLYGON_N: u32 = 4;
const DEFAULT_CASCADE_MAX_N: u32 = 6;
const DEFAULT_VERIFY_MAX_N: u32 = 12;
const CASCADE_SVG_ORDER: u32 = 3;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Failed(String),
}

impl Failure {
    fn status(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Failed(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Failed(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::Overflow { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

/// Output of one run: the bytes to write and whether every verdict passed.
struct Output {
    bytes: Vec<u8>,
    passed: bool,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
/// Results go to stdout or `--output`; messages to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if status == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return status;
        }
    };
    let result = resolve(cli.command).and_then(|(config, command)| {
        let output = execute(&config, &command)?;
        write_output(&config, &output.bytes, out)?;
        Ok(output.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(err, "rulerlab: verification failed");
            1
        }
        Err(f) => {
            let _ = writeln!(err, "rulerlab: {}", f.message());
            f.status()
        }
    }
}

fn write_output(config: &RunConfig, bytes: &[u8], out: &mut dyn Write) -> Result<(), Failure> {
    let result = match &config.output {
        Some(path) => {
            std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    result.map_err(Failure::Failed)
}

fn load_file(common: &Common) -> Result<FileConfig, Failure> {
    common
        .config
        .as_deref()
        .map(FileConfig::load)
        .transpose()
        .map(Option::unwrap_or_default)
        .map_err(Failure::Usage)
}

/// Merges flags, config file and defaults, then applies the environment cap.
fn resolve(command: Command) -> Result<(RunConfig, Command), Failure> {
    let common = match &command {
        Command::Ruler { common, .. }
        | Command::Automaton { common, .. }
        | Command::Demography { common, .. }
        | Command::Cantor { common, .. }
        | Command::Polygon { common, .. }
        | Command::Cascade { common, .. }
        | Command::Verify { common, .. } => common,
    };
    let file = load_file(common)?;
    let orbit_defaults = OrbitConfig::default();
    let mut config = RunConfig {
        command: String::new(),
        n: 0,
        lifespan: None,
        seed: 0,
        jitter: false,
        tolerance: file.tol.unwrap_or(orbit_defaults.tolerance),
        transient: file.transient.unwrap_or(orbit_defaults.transient),
        format: common.format.or(file.format).unwrap_or(Format::Csv),
        output: common.output.clone().or(file.output.clone()),
        origin: 0.5,
        lo: 0.0,
        hi: 1.0,
        patterns: false,
    };
    let order = |flag: Option<u32>, default| flag.or(file.n).unwrap_or(default);
    match &command {
        Command::Ruler { n, .. } => {
            config.command = "ruler".into();
            config.n = order(*n, DEFAULT_RULER_N);
        }
        Command::Automaton {
            steps,
            seed,
            jitter,
            origin,
            lo,
            hi,
            ..
        } => {
            config.command = "automaton".into();
            config.n = steps.or(file.steps).unwrap_or(DEFAULT_AUTOMATON_STEPS);
            config.seed = seed.or(file.seed).unwrap_or(0);
            config.jitter = *jitter;
            config.lo = lo.unwrap_or(0.0);
            config.hi = hi.unwrap_or(1.0);
            config.origin =
                origin.unwrap_or_else(|| match (config.lo.is_finite(), config.hi.is_finite()) {
                    (true, true) => 0.5 * (config.lo + config.hi),
                    (true, false) => config.lo + 1.0,
                    (false, true) => config.hi - 1.0,
                    (false, false) => 0.0,
                });
        }
        Command::Demography { n, lifespan, .. } => {
            config.command = "demography".into();
            config.n = order(*n, DEFAULT_DEMOGRAPHY_N);
            config.lifespan = lifespan.or(file.lifespan);
        }
        Command::Cantor { n, .. } => {
            config.command = "cantor".into();
            config.n = order(*n, DEFAULT_CANTOR_N);
        }
        Command::Polygon { n, .. } => {
            config.command = "polygon".into();
            config.n = order(*n, DEFAULT_POLYGON_N);
        }
        Command::Cascade {
            max_n,
            tol,
            transient,
            patterns,
            ..
        } => {
            config.command = "cascade".into();
            config.n = max_n.or(file.max_n).unwrap_or(DEFAULT_CASCADE_MAX_N);
            config.tolerance = tol.unwrap_or(config.tolerance);
            config.transient = transient.unwrap_or(config.transient);
            config.patterns = *patterns;
        }
        Command::Verify { max_n, seed, .. } => {
            config.command = "verify".into();
            config.n = max_n.or(file.max_n).unwrap_or(DEFAULT_VERIFY_MAX_N);
            config.seed = seed.or(file.seed).unwrap_or(0);
        }
    }
    if let Some(cap) = env_cap().map_err(Failure::Usage)? {
        if config.n > cap {
            return Err(Failure::Usage(format!(
                "{} {} exceeds {MAX_N_ENV}={cap}",
                config.command, config.n
            )));
        }
    }
    Ok((config, command))
}

fn execute(config: &RunConfig, command: &Command) -> Result<Output, Failure> {
    let echo = serde_json::to_value(config).expect("config serializes");
    let mut report = match command {
        Command::Ruler { .. } => ruler(config)?,
        Command::Automaton { .. } => automaton(config)?,
        Command::Demography { .. } => demography(config)?,
        Command::Cantor { .. } => cantor(config)?,
        Command::Polygon { .. } => polygon(config)?,
        Command::Cascade { .. } => cascade(config)?,
        Command::Verify { .. } => verify(config)?,
    };
    let (bytes, passed) = match report {
        Rendered::Svg(svg) => (svg.into_bytes(), true),
        Rendered::Table(ref mut r) => {
            r.config = echo;
            let bytes = match config.format {
                Format::Csv => emit_csv(r),
                Format::Json => emit_json(r),
                Format::Svg => unreachable!("svg handled by each command"),
            };
            (bytes, r.all_passed())
        }
    };
    Ok(Output { bytes, passed })
}

enum Rendered {
    Table(Report),
    Svg(String),
}

fn no_svg(config: &RunConfig) -> Result<(), Failure> {
    if config.format == Format::Svg {
        return Err(Failure::Usage(format!(
            "{} has no svg output; use csv or json",
            config.command
        )));
    }
    Ok(())
}

fn ruler(config: &RunConfig) -> Result<Rendered, Failure> {
    let block = ruler_block(config.n)?;
    if config.format == Format::Svg {
        return Ok(Rendered::Svg(svg::ruler_svg(&block)));
    }
    let mut r = Report::new("ruler", &["position", "term"]);
    for (i, &t) in block.iter().enumerate() {
        r.push_row(vec![(i + 1).into(), t.into()]);
    }
    Ok(Rendered::Table(r))
}

fn automaton(config: &RunConfig) -> Result<Rendered, Failure> {
    no_svg(config)?;
    if config.n > automaton::MAX_STEPS {
        return Err(Failure::Usage(format!(
            "automaton --steps {} outside 1..={}",
            config.n,
            automaton::MAX_STEPS
        )));
    }
    let ambient = Interval::new(config.lo, config.hi)?;
    let mut placement = if config.jitter {
        Placement::jitter(config.seed)
    } else {
        Placement::Midpoint
    };
    let p = automaton::run(ambient, config.origin, config.n, &mut placement)?;
    let mut r = Report::new("automaton", &["rank", "position", "birth", "age"]);
    for (i, pt) in p.points.iter().enumerate() {
        r.push_row(vec![
            (i + 1).into(),
            pt.position.into(),
            pt.birth_step.into(),
            pt.age.into(),
        ]);
    }
    r.diagnostics.push(Diagnostic {
        name: "age sequence".into(),
        detail: json!(age_sequence(&p)),
    });
    Ok(Rendered::Table(r))
}

fn demography(config: &RunConfig) -> Result<Rendered, Failure> {
    let n = config.n;
    let (census, title) = match config.lifespan {
        None => (census(n)?, format!("age pyramid, step {n}")),
        Some(l) => (
            census_with_death(n, l)?,
            format!("age pyramid, step {n}, lifespan {l}"),
        ),
    };
    // immortal model: count / 2^n, exactly 2^-k; mortal model: share of the living
    let share = |age: u32| match config.lifespan {
        None => census.relative_frequency(age),
        Some(_) => census.proportion(age),
    };
    if config.format == Format::Svg {
        let shares: Vec<(u32, f64)> = census.ages().map(|a| (a, share(a))).collect();
        return Ok(Rendered::Svg(svg::pyramid_svg(&shares, &title)));
    }
    let mut r = Report::new("demography", &["age", "count", "proportion"]);
    for age in census.ages() {
        r.push_row(vec![
            age.into(),
            census.count(age).into(),
            share(age).into(),
        ]);
    }
    r.diagnostics.push(Diagnostic {
        name: "population".into(),
        detail: json!(census.total),
    });
    Ok(Rendered::Table(r))
}

fn cantor(config: &RunConfig) -> Result<Rendered, Failure> {
    if config.format == Format::Svg {
        return Ok(Rendered::Svg(svg::cantor_svg(config.n)?));
    }
    let level = cantor_level(config.n)?;
    let mut r = Report::new("cantor", &["lo", "hi", "birth", "index"]);
    for iv in &level.intervals {
        r.push_row(vec![
            iv.lo.to_string().into(),
            iv.hi.to_string().into(),
            iv.birth_step.into(),
            iv.index.into(),
        ]);
    }
    r.diagnostics.push(Diagnostic {
        name: "removed length".into(),
        detail: json!(level.removed_length.to_string()),
    });
    Ok(Rendered::Table(r))
}

fn polygon(config: &RunConfig) -> Result<Rendered, Failure> {
    if config.format == Format::Svg {
        return Ok(Rendered::Svg(svg::polygon_svg(config.n)?));
    }
    let g = generation(config.n)?;
    let indices = vertex_index_sequence(&g)?;
    let mut r = Report::new("polygon", &["k", "fraction", "index"]);
    for (v, &index) in g.vertices.iter().zip(indices.iter()) {
        let fraction = v.turn_fraction().map(|f| f.to_string());
        r.push_row(vec![v.k.into(), fraction.into(), index.into()]);
    }
    Ok(Rendered::Table(r))
}

fn cascade(config: &RunConfig) -> Result<Rendered, Failure> {
    let max_n = config.n;
    let values = superstable_sequence(max_n, &BisectionConfig::default())?;
    let deltas = delta_estimates(&values);
    let orbit_config = OrbitConfig {
        transient: config.transient,
        tolerance: config.tolerance,
        ..OrbitConfig::default()
    };
    let orbit_for = |n: u32| -> Result<_, Failure> {
        let orbit = stationary_orbit(values[n as usize], 1 << (n + 1), &orbit_config)?;
        if orbit.period != 1 << n {
            return Err(Failure::Failed(format!(
                "orbit at R_{n} has period {}, expected {}",
                orbit.period,
                1u64 << n
            )));
        }
        Ok(orbit)
    };

    if config.format == Format::Svg {
        let n = CASCADE_SVG_ORDER.min(max_n).max(1);
        let values_len = values.len() as u32;
        if n >= values_len {
            return Err(Failure::Usage("cascade svg needs --max-n >= 1".into()));
        }
        let orbit = orbit_for(n)?;
        let pattern = orbit_visibility(&orbit, 4)?;
        let p = orbit.period;
        let title = format!(
            "forward visibility, period {p} at r = {}",
            report::format_real(orbit.r)
        );
        return Ok(Rendered::Svg(svg::visibility_svg(
            &orbit.series(3),
            p..2 * p,
            &pattern.degrees,
            &title,
        )));
    }

    let mut patterns = Report::new("cascade", &["n", "position", "value", "degree"]);
    let mut comparisons = Vec::new();
    for n in 1..=max_n {
        let orbit = orbit_for(n)?;
        let pattern = orbit_visibility(&orbit, 4)?;
        for (i, (&x, &d)) in orbit.points.iter().zip(&pattern.degrees).enumerate() {
            patterns.push_row(vec![n.into(), (i + 1).into(), x.into(), d.into()]);
        }
        comparisons.push(Diagnostic {
            name: format!("visibility pattern, period 2^{n}"),
            detail: json!(crate::dynamics::compare_with_ruler(
                n,
                orbit.r,
                &orbit_config
            )?),
        });
    }
    if config.patterns {
        patterns.diagnostics = comparisons;
        return Ok(Rendered::Table(patterns));
    }
    let mut r = Report::new("cascade", &["n", "period", "r", "delta"]);
    for (n, &rv) in values.iter().enumerate() {
        let delta = n.checked_sub(2).and_then(|i| deltas.get(i)).copied();
        r.push_row(vec![n.into(), (1u64 << n).into(), rv.into(), delta.into()]);
    }
    r.diagnostics = comparisons;
    Ok(Rendered::Table(r))
}

fn verify(config: &RunConfig) -> Result<Rendered, Failure> {
    no_svg(config)?;
    let (verdicts, diagnostics) = verify::verify(config.n, config.seed)?;
    let mut r = Report::new("verify", &["identity", "scope", "passed", "detail"]);
    for v in &verdicts {
        r.push_row(vec![
            v.identity.as_str().into(),
            v.scope.as_str().into(),
            v.passed.into(),
            v.detail.as_str().into(),
        ]);
    }
    r.verdicts = verdicts;
    r.diagnostics = diagnostics;
    Ok(Rendered::Table(r))
}
