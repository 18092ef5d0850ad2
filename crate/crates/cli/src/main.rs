//! `pasts`: figure data and verification reports for photon-added squeezed
//! thermal states.
//!
//! Every data command writes to `--output` or stdout. Exit codes: 0 success,
//! 1 computation or verification failure, 2 usage error.

mod range;
mod tables;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use pasts_core::channel::{
    negativity_threshold, ConvolutionQuadrature, EvolvedWigner, QuadSpec, ScanLattice,
    DEFAULT_QUAD_NODES,
};
use pasts_core::distributions::pnd_profile;
use pasts_core::moments::{mandel_q, q_threshold};
use pasts_core::verify::{verify, CutoffPolicy, Scope};
use pasts_core::wigner::WignerEvaluator;
use pasts_core::{Error, PhaseGrid, StateParams, Window};

use range::{PhotonNumbers, Values};
use tables::QRow;

#[derive(Parser)]
#[command(name = "pasts", version, about = "Photon-added squeezed thermal states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mandel Q over a range of squeezing for several photon numbers (CSV r,m,Q).
    Qparam(QparamArgs),
    /// Photon number distribution (CSV n,P).
    Pnd(PndArgs),
    /// Static Wigner function on a square grid.
    Wigner(WignerArgs),
    /// Wigner function after photon loss, one grid per kt.
    Evolve(EvolveArgs),
    /// Sub-Poissonian threshold in r, or loss time at which negativity vanishes (JSON).
    Threshold(ThresholdArgs),
    /// Closed forms against the truncated Fock-space oracle (JSON report).
    Verify(VerifyArgs),
    /// Reads an output file of this tool and writes it again.
    Reemit(ReemitArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Thermal occupation of the seed state.
    #[arg(long, allow_hyphen_values = true)]
    nbar: f64,
    /// Squeezing parameter.
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    /// Number of added photons.
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Position quadrature of the displacement.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    q: f64,
    /// Momentum quadrature of the displacement.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    p: f64,
}

impl StateArgs {
    fn params(&self) -> Result<StateParams, CliError> {
        let params = StateParams::new(self.nbar, self.r, self.m).with_displacement(self.q, self.p);
        params.validate()?;
        Ok(params)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct GridArgs {
    /// Half-width of the square window [-w, w]^2.
    #[arg(long, default_value_t = 4.0)]
    window: f64,
    /// Nodes per axis.
    #[arg(long, default_value_t = 201)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct QparamArgs {
    #[arg(long)]
    nbar: f64,
    /// Comma-separated photon numbers.
    #[arg(long)]
    m: PhotonNumbers,
    /// Squeezing values as `a:b:step`, a list or a single number.
    #[arg(long, allow_hyphen_values = true)]
    r: Values,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PndArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Largest photon number listed.
    #[arg(long, default_value_t = 40)]
    nmax: usize,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Dimensionless loss times.
    #[arg(long, default_value = "0.05,0.15,0.2,0.4")]
    kt: Values,
    /// Nodes per axis of the convolution quadrature used for displaced states.
    #[arg(long, default_value_t = DEFAULT_QUAD_NODES)]
    quad_nodes: usize,
    /// Writes `wigner_kt<kt>.<ext>` per loss time into this directory.
    #[arg(long, conflicts_with = "output")]
    output_dir: Option<PathBuf>,
    /// Single-kt CSV or any JSON output; JSON holds an array of grids.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(subcommand)]
    kind: ThresholdKind,
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ThresholdKind {
    /// Smallest r with Q >= 0.
    Q {
        #[arg(long)]
        nbar: f64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 3.0)]
        r_max: f64,
    },
    /// Smallest kt at which the grid minimum of the Wigner function is at least -eps.
    Kt {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 0.0)]
        kt_min: f64,
        #[arg(long, default_value_t = 1.0)]
        kt_max: f64,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, default_value_t = 4.0)]
        window: f64,
        #[arg(long, default_value_t = 101)]
        n: usize,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// norms, moments, pnd, wigner, evolved or all.
    #[arg(long, default_value = "all")]
    scope: String,
    /// Fock cutoff, or `auto` to grow it per state until leakage is negligible.
    #[arg(long, env = "PASTS_CUTOFF", default_value = "auto")]
    cutoff: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReemitArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Usage(_) | Error::Domain(_) => CliError::Usage(err.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Failed(format!("i/o error: {err}"))
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Qparam(args) => qparam(args),
        Command::Pnd(args) => pnd(args),
        Command::Wigner(args) => wigner(args),
        Command::Evolve(args) => evolve(args),
        Command::Threshold(args) => threshold(args),
        Command::Verify(args) => run_verify(args),
        Command::Reemit(args) => reemit(args),
    }
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> CliResult {
    match output {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    buf.push(b'\n');
    Ok(buf)
}

fn encode_grid(grid: &PhaseGrid, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            grid.write_csv(&mut buf)?;
            Ok(buf)
        }
        Format::Json => to_json(grid),
    }
}

fn qparam(args: QparamArgs) -> CliResult {
    if args.m.0.is_empty() {
        return Err(CliError::Usage("--m needs at least one photon number".into()));
    }
    let points: Vec<(u32, f64)> = args
        .m
        .0
        .iter()
        .flat_map(|&m| args.r.0.iter().map(move |&r| (m, r)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(m, r)| {
            let params = StateParams::new(args.nbar, r, m);
            params.validate()?;
            let q = match mandel_q(&params) {
                Ok(q) => Some(q),
                Err(Error::UndefinedMandelQ) => None,
                Err(e) => return Err(e),
            };
            Ok(QRow { r, m, q })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut buf = Vec::new();
    tables::write_q(&rows, &mut buf)?;
    emit(args.output.as_deref(), &buf)
}

fn pnd(args: PndArgs) -> CliResult {
    let params = args.state.params()?;
    let profile = pnd_profile(&params, args.nmax)?;
    let mut buf = Vec::new();
    tables::write_pnd(&profile.probs, &mut buf)?;
    emit(args.output.as_deref(), &buf)
}

fn grid_shape(grid: &GridArgs) -> CliResult<Window> {
    if !(grid.window.is_finite() && grid.window > 0.0) {
        return Err(CliError::Usage(format!("--window must be positive, got {}", grid.window)));
    }
    Ok(Window::square(grid.window))
}

fn wigner(args: WignerArgs) -> CliResult {
    let params = args.state.params()?;
    let window = grid_shape(&args.grid)?;
    let grid = WignerEvaluator::new(&params)?.grid(window, args.grid.n, args.grid.n)?;
    report_negativity(&grid);
    emit(args.output.as_deref(), &encode_grid(&grid, args.grid.format)?)
}

fn report_negativity(grid: &PhaseGrid) {
    let neg = grid.negativity();
    let kt = grid.kt.map_or_else(String::new, |kt| format!("kt = {kt}: "));
    eprintln!(
        "{kt}min W = {:.6e} at ({}, {}), negative volume = {:.6e}",
        neg.min_value, neg.min_location.0, neg.min_location.1, neg.negative_volume
    );
}

fn evolve(args: EvolveArgs) -> CliResult {
    let params = args.state.params()?;
    let window = grid_shape(&args.grid)?;
    let n = args.grid.n;
    let kts = &args.kt.0;
    if kts.is_empty() {
        return Err(CliError::Usage("--kt needs at least one value".into()));
    }
    let quadrature = if params.is_undisplaced() || kts.iter().all(|&kt| kt == 0.0) {
        None
    } else {
        let spec = QuadSpec {
            nodes: args.quad_nodes,
            window: None,
        };
        Some(ConvolutionQuadrature::new(&params, &spec)?)
    };
    let grids = kts
        .iter()
        .map(|&kt| match &quadrature {
            Some(quad) if kt > 0.0 => quad.grid(kt, window, n, n),
            _ => {
                let ev = EvolvedWigner::new(&params, kt)?;
                Ok(PhaseGrid::from_fn(window, n, n, |x, y| ev.point(x, y))?
                    .with_params(params)
                    .with_kt(kt))
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    grids.iter().for_each(report_negativity);

    let format = args.grid.format;
    if let Some(dir) = args.output_dir {
        fs::create_dir_all(&dir)?;
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        for grid in &grids {
            let kt = grid.kt.expect("evolved grids carry kt");
            let path = dir.join(format!("wigner_kt{kt}.{ext}"));
            fs::write(&path, encode_grid(grid, format)?)?;
            eprintln!("wrote {}", path.display());
        }
        return Ok(());
    }
    let bytes = match (format, grids.as_slice()) {
        (Format::Json, _) => to_json(&grids)?,
        (Format::Csv, [single]) => encode_grid(single, format)?,
        (Format::Csv, _) => {
            return Err(CliError::Usage(
                "CSV output of several kt values needs --output-dir".into(),
            ))
        }
    };
    emit(args.output.as_deref(), &bytes)
}

#[derive(Serialize)]
struct QThreshold {
    nbar: f64,
    m: u32,
    r_max: f64,
    /// `null` when Q stays negative up to `r_max`.
    r_threshold: Option<f64>,
}

fn threshold(args: ThresholdArgs) -> CliResult {
    let bytes = match args.kind {
        ThresholdKind::Q { nbar, m, r_max } => {
            StateParams::new(nbar, 0.0, m).validate()?;
            to_json(&QThreshold {
                nbar,
                m,
                r_max,
                r_threshold: q_threshold(nbar, m, r_max)?,
            })?
        }
        ThresholdKind::Kt {
            state,
            kt_min,
            kt_max,
            eps,
            window,
            n,
        } => {
            let params = state.params()?;
            let lattice = ScanLattice {
                window: grid_shape(&GridArgs {
                    window,
                    n,
                    format: Format::Json,
                })?,
                nodes: n,
            };
            to_json(&negativity_threshold(&params, kt_min, kt_max, eps, &lattice)?)?
        }
    };
    emit(args.output.as_deref(), &bytes)
}

fn parse_cutoff(s: &str) -> CliResult<CutoffPolicy> {
    if s == "auto" {
        return Ok(CutoffPolicy::Auto);
    }
    s.parse::<usize>()
        .map(CutoffPolicy::Fixed)
        .map_err(|_| CliError::Usage(format!("--cutoff must be 'auto' or a positive integer, got '{s}'")))
}

fn run_verify(args: VerifyArgs) -> CliResult {
    let scope: Scope = args.scope.parse()?;
    let policy = parse_cutoff(&args.cutoff)?;
    let report = verify(scope, policy)?;
    emit(args.output.as_deref(), &to_json(&report)?)?;
    if report.passed {
        return Ok(());
    }
    let failures: Vec<String> = report
        .suites
        .iter()
        .filter(|s| !s.passed)
        .map(|s| {
            let worst = s.worst.as_ref().map_or_else(String::new, |w| {
                format!(
                    "; worst {} at {:?}: closed form {} vs oracle {}",
                    w.quantity, w.params, w.closed_form, w.oracle
                )
            });
            format!(
                "suite {} max {} deviation {:.3e} exceeds {:.1e}{worst}",
                s.suite, s.metric, s.max_deviation, s.tolerance
            )
        })
        .collect();
    Err(CliError::Failed(failures.join("\n")))
}

fn reemit(args: ReemitArgs) -> CliResult {
    let bytes = fs::read(&args.input)?;
    let out = reencode(&bytes)?;
    emit(args.output.as_deref(), &out)
}

/// Parses any output of this tool and serializes it the same way.
fn reencode(bytes: &[u8]) -> CliResult<Vec<u8>> {
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace()).copied();
    match first {
        Some(b'{') => {
            let grid: PhaseGrid = serde_json::from_slice(bytes).map_err(parse_error)?;
            to_json(&grid)
        }
        Some(b'[') => {
            let grids: Vec<PhaseGrid> = serde_json::from_slice(bytes).map_err(parse_error)?;
            to_json(&grids)
        }
        Some(_) => {
            let header = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
            let header = String::from_utf8_lossy(header);
            let mut buf = Vec::new();
            match header.trim_end_matches('\r') {
                "r,m,Q" => tables::write_q(&tables::read_q(bytes)?, &mut buf)?,
                "n,P" => tables::write_pnd(&tables::read_pnd(bytes)?, &mut buf)?,
                "x,y,W" => PhaseGrid::read_csv(bytes)?.write_csv(&mut buf)?,
                other => return Err(CliError::Failed(format!("unrecognized CSV header '{other}'"))),
            }
            Ok(buf)
        }
        None => Err(CliError::Failed("empty input".into())),
    }
}

fn parse_error(err: serde_json::Error) -> CliError {
    CliError::Failed(format!("parse error: {err}"))
}
