//! Command-line front end for `thermoq`.
//!
//! Every flag may also be given in a plain-text `key = value` config file
//! (`--config`, or the file named by `THERMOQ_CONFIG`); keys are the long
//! flag names with `-` replaced by `_`. Flags win over the file.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or domain
//! error, 3 I/O error.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thermoq::analysis::{AlphaMode, FigureId, FigureParams, OverlapConvention, OverlapDomain, VerifyOptions};
use thermoq::numerics::linspace;
use thermoq::{Direction, QuadratureSettings, SystemKind, SystemSpec, UnitsConfig, DEFAULT_N_STATES, DEFAULT_THRESHOLD};

pub use commands::RunConfig;
use config::ConfigFile;
pub use error::{CliError, EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use output::{write_atomic, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "thermoq", version, about = "Weak-coupling thermal corrections of model quantum systems")]
pub struct Cli {
    /// key = value config file (default: $THERMOQ_CONFIG)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// E_p(T) over a temperature grid with validity flags
    Ep {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        temps: TempArgs,
        /// Smallness threshold on |E_p| [default: 0.1]
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// E_n(0), E_p and E_n(T) at one temperature
    Spectrum {
        #[command(flatten)]
        system: SystemArgs,
        /// Temperature
        #[arg(long = "T", allow_negative_numbers = true)]
        t: Option<f64>,
        /// Mode indices [default: every level]
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
        /// Wavenumbers (free particle)
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        k: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sampled wavefunction of one mode
    Wavefunction {
        #[command(flatten)]
        system: SystemArgs,
        /// Temperature; 0 selects the unperturbed mode
        #[arg(long = "T", allow_negative_numbers = true)]
        t: Option<f64>,
        /// Mode index (box, oscillator)
        #[arg(long)]
        n: Option<u32>,
        /// Wavenumber (free particle)
        #[arg(long, allow_negative_numbers = true)]
        k: Option<f64>,
        /// Propagation direction of the free wave [default: right]
        #[arg(long, value_enum)]
        direction: Option<DirectionArg>,
        /// Position range lo:hi [default: box [0, L], oscillator ±6x₀, free [0, 10]]
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        x_range: Option<(f64, f64)>,
        /// Number of samples [default: 400]
        #[arg(long)]
        samples: Option<usize>,
        /// Evaluate box modes outside [0, L]
        #[arg(long)]
        anywhere: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Validity intervals and zero crossings of E_p over a temperature range
    Validity {
        #[command(flatten)]
        system: SystemArgs,
        /// Temperature range lo:hi [default: 0.01:20 in units of the level spacing]
        #[arg(long, value_parser = parse_range)]
        t_range: Option<(f64, f64)>,
        /// Number of scan points [default: 400]
        #[arg(long)]
        samples: Option<usize>,
        /// Smallness threshold on |E_p| [default: 0.1]
        #[arg(long)]
        threshold: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Overlap integrals between corrected modes
    Overlap {
        #[command(flatten)]
        system: SystemArgs,
        /// Temperature
        #[arg(long = "T")]
        t: Option<f64>,
        /// Mode indices [default: every level]
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
        /// Whether both factors share the α of mode n [default: shared]
        #[arg(long, value_enum)]
        alpha_mode: Option<AlphaModeArg>,
        /// Integration domain [default: symmetric for the box, full-line for the oscillator]
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the invariant suite; exit 1 if any check fails
    Verify {
        /// Restrict to the named check (repeatable)
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Single α for the appendixD check
        #[arg(long)]
        alpha: Option<f64>,
        /// Tolerance for every quadrature-vs-closed-form comparison
        #[arg(long)]
        tolerance: Option<f64>,
        #[command(flatten)]
        quad: QuadArgs,
        /// Report format: text unless json is requested
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write the curves of one figure panel, one file per curve
    Figure {
        /// Panel: 2a, 2b, 3, 4, 5a, 5b, 6, 7
        id: String,
        /// Oscillator frequencies (6) or frequency (7, required)
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<f64>>,
        /// Temperatures
        #[arg(long = "T", value_delimiter = ',')]
        t: Option<Vec<f64>>,
        /// Box width (2a) or widths (2b)
        #[arg(long = "L", value_delimiter = ',')]
        l: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        modes: Option<Vec<u32>>,
        /// Wavenumbers (5a, 5b)
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<f64>>,
        /// Particle mass [default: 1]
        #[arg(long = "m")]
        mass: Option<f64>,
        /// Samples per curve [default: 400]
        #[arg(long)]
        samples: Option<usize>,
        /// Temperature axis lo:hi (2b, 4, 6)
        #[arg(long, value_parser = parse_range)]
        t_range: Option<(f64, f64)>,
        /// Position axis lo:hi (5; scaled by x₀ for 7)
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        x_range: Option<(f64, f64)>,
        /// α axis lo:hi (3)
        #[arg(long, value_parser = parse_range)]
        alpha_range: Option<(f64, f64)>,
        /// Output format [default: csv]
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output directory [default: figures]
        #[arg(long, value_name = "DIR")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SystemArg {
    Box,
    Free,
    Oscillator,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlphaModeArg {
    Shared,
    PerMode,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DomainArg {
    Symmetric,
    Physical,
    FullLine,
}

#[derive(Debug, Args)]
pub struct SystemArgs {
    /// System: box, free or oscillator
    #[arg(long, value_enum)]
    pub system: Option<SystemArg>,
    /// Box width [default: 3]
    #[arg(long = "L", allow_negative_numbers = true)]
    pub length: Option<f64>,
    /// Particle mass [default: 1]
    #[arg(long = "m", allow_negative_numbers = true)]
    pub mass: Option<f64>,
    /// Oscillator frequency [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Levels kept in the partition trace [default: 10]
    #[arg(long)]
    pub n_states: Option<u32>,
    /// Reduced Planck constant [default: 1]
    #[arg(long)]
    pub hbar: Option<f64>,
    /// Boltzmann constant [default: 1]
    #[arg(long)]
    pub kb: Option<f64>,
    /// Mass unit [default: 1]
    #[arg(long)]
    pub mass_unit: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TempArgs {
    /// Temperatures (comma-separated, strictly increasing)
    #[arg(long = "T", value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,
    /// Uniform temperature grid lo:hi, instead of --T
    #[arg(long, value_parser = parse_range)]
    pub t_range: Option<(f64, f64)>,
    /// Points of the --t-range grid [default: 400]
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file [default: stdout]
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Absolute quadrature tolerance [default: 1e-10]
    #[arg(long)]
    pub abs_tol: Option<f64>,
    /// Relative quadrature tolerance [default: 1e-10]
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Maximum bisection depth [default: 50]
    #[arg(long)]
    pub max_depth: Option<u32>,
    /// Truncation of infinite limits in length scales [default: 12]
    #[arg(long)]
    pub cutoff: Option<f64>,
}

const DEFAULT_SAMPLES: usize = 400;

/// Parses `lo:hi`.
pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got {s:?}"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("cannot parse {v:?} as a number"))
    };
    Ok((p(lo)?, p(hi)?))
}

fn file_range(cfg: &ConfigFile, flag: Option<(f64, f64)>, key: &str) -> Result<Option<(f64, f64)>, CliError> {
    match (flag, cfg.raw(key)) {
        (Some(r), _) => Ok(Some(r)),
        (None, Some(raw)) => parse_range(raw)
            .map(Some)
            .map_err(|e| CliError::Usage(format!("config key {key}: {e}"))),
        (None, None) => Ok(None),
    }
}

fn resolve_system(cfg: &ConfigFile, a: &SystemArgs) -> Result<SystemSpec, CliError> {
    let system = match a.system {
        Some(s) => s,
        None => match cfg.raw("system") {
            Some(raw) => SystemArg::from_str(raw, true)
                .map_err(|_| CliError::Usage(format!("config key system: unknown system {raw:?}")))?,
            None => return Err(CliError::Usage("--system is required (box, free or oscillator)".into())),
        },
    };
    let mass = cfg.pick(a.mass, "m")?.unwrap_or(1.0);
    let n_states = cfg.pick(a.n_states, "n_states")?.unwrap_or(DEFAULT_N_STATES);
    let defaults = UnitsConfig::default();
    let units = UnitsConfig::new(
        cfg.pick(a.hbar, "hbar")?.unwrap_or(defaults.hbar),
        cfg.pick(a.mass_unit, "mass_unit")?.unwrap_or(defaults.mass_unit),
        cfg.pick(a.kb, "kb")?.unwrap_or(defaults.kb),
    )?;
    let kind = match system {
        SystemArg::Box => SystemKind::Box {
            length: cfg.pick(a.length, "L")?.unwrap_or(3.0),
            mass,
            n_states,
        },
        SystemArg::Free => SystemKind::Free { mass },
        SystemArg::Oscillator => SystemKind::Oscillator {
            omega: cfg.pick(a.omega, "omega")?.unwrap_or(1.0),
            mass,
            n_states,
        },
    };
    Ok(SystemSpec::new(kind, units)?)
}

fn resolve_quadrature(cfg: &ConfigFile, q: &QuadArgs) -> Result<QuadratureSettings, CliError> {
    let d = QuadratureSettings::default();
    let s = QuadratureSettings {
        abs_tol: cfg.pick(q.abs_tol, "abs_tol")?.unwrap_or(d.abs_tol),
        rel_tol: cfg.pick(q.rel_tol, "rel_tol")?.unwrap_or(d.rel_tol),
        max_depth: cfg.pick(q.max_depth, "max_depth")?.unwrap_or(d.max_depth),
        infinite_cutoff: cfg.pick(q.cutoff, "cutoff")?.unwrap_or(d.infinite_cutoff),
    };
    s.validate()?;
    Ok(s)
}

fn resolve_format(cfg: &ConfigFile, f: Option<Format>) -> Result<Format, CliError> {
    Ok(cfg.pick(f, "format")?.unwrap_or(Format::Csv))
}

fn single_t(cfg: &ConfigFile, t: Option<f64>) -> Result<f64, CliError> {
    cfg.pick(t, "T")?
        .ok_or_else(|| CliError::Usage("--T is required".into()))
}

fn base_config(
    file: &ConfigFile,
    spec: SystemSpec,
    temperatures: Vec<f64>,
    out: &OutputArgs,
) -> Result<RunConfig, CliError> {
    let mut rc = RunConfig::new(spec, temperatures)?;
    rc.format = resolve_format(file, out.format)?;
    rc.output_path = file.pick(out.output.clone(), "output")?;
    Ok(rc)
}

/// Natural temperature scale of a system: its lowest level spacing.
fn temperature_scale(spec: &SystemSpec) -> f64 {
    match spec.kind() {
        SystemKind::Box { .. } => spec.box_energy_scale().unwrap_or(1.0),
        SystemKind::Oscillator { omega, .. } => spec.units().hbar * omega / spec.units().kb,
        SystemKind::Free { .. } => 1.0,
    }
}

fn emit(rc: &RunConfig, table: &Table) -> Result<(), CliError> {
    let text = table.render(rc.format)?;
    match &rc.output_path {
        Some(p) => write_atomic(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn figure_params(
    fig: FigureId,
    file: &ConfigFile,
    omega: Option<Vec<f64>>,
    t: Option<Vec<f64>>,
    l: Option<Vec<f64>>,
    modes: Option<Vec<u32>>,
    k: Option<Vec<f64>>,
    mass: Option<f64>,
    samples: Option<usize>,
    ranges: [Option<(f64, f64)>; 3],
) -> Result<FigureParams, CliError> {
    let single = |v: Option<Vec<f64>>, name: &str| -> Result<Option<f64>, CliError> {
        match v.as_deref() {
            None => Ok(None),
            Some([x]) => Ok(Some(*x)),
            Some(_) => Err(CliError::Usage(format!("figure {fig} takes a single --{name}"))),
        }
    };
    let omega = file.pick_list(omega, "omega")?;
    let l = file.pick_list(l, "L")?;
    let [t_range, x_range, alpha_range] = ranges;
    let mut p = FigureParams {
        samples: file.pick(samples, "samples")?,
        modes: file.pick_list(modes, "modes")?,
        temperatures: file.pick_list(t, "T")?,
        wavenumbers: file.pick_list(k, "k")?,
        mass: file.pick(mass, "m")?,
        t_range: file_range(file, t_range, "t_range")?,
        x_range: file_range(file, x_range, "x_range")?,
        alpha_range: file_range(file, alpha_range, "alpha_range")?,
        ..FigureParams::default()
    };
    match fig {
        FigureId::Fig2a => p.length = single(l, "L")?,
        _ => p.lengths = l,
    }
    match fig {
        FigureId::Fig7 => p.omega = single(omega, "omega")?,
        _ => p.omegas = omega,
    }
    Ok(p)
}

/// Runs one parsed invocation and returns its exit status.
pub fn execute(cli: Cli) -> Result<u8, CliError> {
    let file = ConfigFile::discover(cli.config.as_deref())?;
    match cli.command {
        Command::Ep {
            system,
            temps,
            threshold,
            out,
        } => {
            let spec = resolve_system(&file, &system)?;
            let grid = match (file.pick_list(temps.t, "T")?, file_range(&file, temps.t_range, "t_range")?) {
                (Some(list), _) => list,
                (None, Some((lo, hi))) => {
                    let n = file.pick(temps.samples, "samples")?.unwrap_or(DEFAULT_SAMPLES);
                    if n < 2 || !(lo < hi) {
                        return Err(CliError::Usage("--t-range needs lo < hi and at least 2 samples".into()));
                    }
                    linspace(lo, hi, n)
                }
                (None, None) => return Err(CliError::Usage("give --T or --t-range".into())),
            };
            let mut rc = base_config(&file, spec, grid, &out)?;
            rc.threshold = file.pick(threshold, "threshold")?.unwrap_or(DEFAULT_THRESHOLD);
            rc.validate()?;
            emit(&rc, &commands::cmd_ep(&rc)?)?;
        }
        Command::Spectrum {
            system,
            t,
            modes,
            k,
            out,
        } => {
            let spec = resolve_system(&file, &system)?;
            let mut rc = base_config(&file, spec, vec![single_t(&file, t)?], &out)?;
            rc.modes = file.pick_list(modes, "modes")?;
            let k = file.pick_list(k, "k")?.unwrap_or_default();
            emit(&rc, &commands::cmd_spectrum(&rc, &k)?)?;
        }
        Command::Wavefunction {
            system,
            t,
            n,
            k,
            direction,
            x_range,
            samples,
            anywhere,
            out,
        } => {
            let spec = resolve_system(&file, &system)?;
            let rc = base_config(&file, spec, vec![single_t(&file, t)?], &out)?;
            let direction = match direction {
                Some(d) => d,
                None => match file.raw("direction") {
                    Some(raw) => DirectionArg::from_str(raw, true)
                        .map_err(|_| CliError::Usage(format!("config key direction: {raw:?}")))?,
                    None => DirectionArg::Right,
                },
            };
            let req = commands::WaveRequest {
                n: file.pick(n, "n")?,
                k: file.pick(k, "k")?,
                direction: match direction {
                    DirectionArg::Right => Direction::Right,
                    DirectionArg::Left => Direction::Left,
                },
                x_range: file_range(&file, x_range, "x_range")?,
                samples: file.pick(samples, "samples")?.unwrap_or(DEFAULT_SAMPLES),
                anywhere,
            };
            emit(&rc, &commands::cmd_wavefunction(&rc, &req)?)?;
        }
        Command::Validity {
            system,
            t_range,
            samples,
            threshold,
            out,
        } => {
            let spec = resolve_system(&file, &system)?;
            let scale = temperature_scale(&spec);
            let (lo, hi) = file_range(&file, t_range, "t_range")?.unwrap_or((0.01 * scale, 20.0 * scale));
            let n = file.pick(samples, "samples")?.unwrap_or(DEFAULT_SAMPLES);
            if n < 2 || !(lo < hi) {
                return Err(CliError::Usage("--t-range needs lo < hi and at least 2 samples".into()));
            }
            let mut rc = base_config(&file, spec, linspace(lo, hi, n), &out)?;
            rc.threshold = file.pick(threshold, "threshold")?.unwrap_or(DEFAULT_THRESHOLD);
            rc.validate()?;
            emit(&rc, &commands::cmd_validity(&rc)?)?;
        }
        Command::Overlap {
            system,
            t,
            modes,
            alpha_mode,
            domain,
            quad,
            out,
        } => {
            let spec = resolve_system(&file, &system)?;
            let mut rc = base_config(&file, spec, vec![single_t(&file, t)?], &out)?;
            rc.modes = file.pick_list(modes, "modes")?;
            rc.quadrature = resolve_quadrature(&file, &quad)?;
            let default = OverlapConvention::default_for(&spec);
            rc.convention = OverlapConvention::new(
                match alpha_mode {
                    Some(AlphaModeArg::Shared) => AlphaMode::SharedAlpha,
                    Some(AlphaModeArg::PerMode) => AlphaMode::PerMode,
                    None => default.mode,
                },
                match domain {
                    Some(DomainArg::Symmetric) => OverlapDomain::Symmetric,
                    Some(DomainArg::Physical) => OverlapDomain::Physical,
                    Some(DomainArg::FullLine) => OverlapDomain::FullLine,
                    None => default.domain,
                },
            );
            rc.validate()?;
            emit(&rc, &commands::cmd_overlap(&rc)?)?;
        }
        Command::Verify {
            checks,
            alpha,
            tolerance,
            quad,
            format,
        } => {
            let opts = VerifyOptions {
                quadrature: resolve_quadrature(&file, &quad)?,
                comparison_tol: file.pick(tolerance, "tolerance")?,
                alpha: file.pick(alpha, "alpha")?,
                checks: (!checks.is_empty()).then_some(checks),
            };
            let outcomes = commands::cmd_verify(&opts)?;
            match format {
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&outcomes)?),
                _ => print!("{}", commands::verify_report(&outcomes)),
            }
            if outcomes.iter().any(|c| !c.passed) {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Figure {
            id,
            omega,
            t,
            l,
            modes,
            k,
            mass,
            samples,
            t_range,
            x_range,
            alpha_range,
            format,
            output,
        } => {
            let fig: FigureId = id.parse()?;
            let params = figure_params(
                fig,
                &file,
                omega,
                t,
                l,
                modes,
                k,
                mass,
                samples,
                [t_range, x_range, alpha_range],
            )?;
            let dir = output.unwrap_or_else(|| PathBuf::from("figures"));
            let format = resolve_format(&file, format)?;
            for p in commands::cmd_figure(fig, &params, &dir, format)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// reporting errors on stderr. Returns the process exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("thermoq: {e}");
            e.exit_code()
        }
    }
}
