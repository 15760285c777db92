//! Command-line front end: `simulate`, `verify` and `transform`.
//!
//! Exit codes: 0 success, 1 a check or run failed, 2 usage, config or IO
//! error. [`run`] takes the argument list and output streams so that tests can
//! drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::{run_audit, Tolerances};
use crate::config::{parse_config, RunConfig};
use crate::energy::{transform_pressure, Choice, EnergyParams, TransformFields};
use crate::error::{Error, Result};
use crate::fields::Grid;
use crate::mixture::make_constants;
use crate::snapshot::Snapshot;
use crate::solver::{Solver, State};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Header of the diagnostics CSV written by `simulate`.
pub const CSV_HEADER: &str = "t,E_free,E_kin,E_grav,E_total,mass,phase,div_residual,vform_residual";

#[derive(Debug, Parser)]
#[command(
    name = "nsch",
    version,
    about = "Quasi-incompressible NSCH solver and identity audit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Table,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation, writing diagnostics.csv, snapshots and the resolved config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides `output_dir` from the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity audit; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        nx: usize,
        #[arg(long, default_value_t = 2.0, requires = "rho2")]
        rho1: f64,
        #[arg(long, default_value_t = 1.0, requires = "rho1")]
        rho2: f64,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Rewrite the pressure of a snapshot in another modeling choice.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        pressure_from: Choice,
        #[arg(long)]
        pressure_to: Choice,
        /// Config supplying rho1, rho2, sigma, epsilon when the snapshot lacks them.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output path; the snapshot goes to stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure of a subcommand, mapped to an exit code.
enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::StepRejected { .. } | Error::LinearSolver { .. } | Error::OutOfRange { .. } => {
                Failure::Failed(e.to_string())
            }
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate { config, out: dir } => simulate(&config, dir.as_deref(), err),
        Command::Verify {
            seed,
            nx,
            rho1,
            rho2,
            format,
        } => verify(seed, nx, rho1, rho2, format, out),
        Command::Transform {
            input,
            pressure_from,
            pressure_to,
            config,
            out: dest,
        } => transform(
            &input,
            pressure_from,
            pressure_to,
            config.as_deref(),
            dest.as_deref(),
            out,
        ),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Failed(msg)) => {
            let _ = writeln!(err, "failed: {msg}");
            EXIT_FAILED
        }
    }
}

fn read_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn csv_row(state: &State, solver: &Solver, div_residual: f64, vform_residual: f64) -> String {
    let e = state.energy(solver.physics());
    format!(
        "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
        state.t,
        e.free,
        e.kinetic,
        e.gravitational,
        e.total,
        state.mass(),
        state.phase(),
        div_residual,
        vform_residual
    )
}

fn snapshot_path(dir: &Path, step: usize) -> PathBuf {
    dir.join(format!("snapshot_{step:06}.txt"))
}

fn simulate(
    config: &Path,
    dir: Option<&Path>,
    err: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let cfg = read_config(config)?;
    let dir = dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(&cfg.output_dir));
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    write_file(&dir.join("config.echo.txt"), &cfg.echo())?;

    let grid = cfg.grid()?;
    let physics = cfg.physics()?;
    let solver = Solver::new(grid, physics, cfg.numerics())?;
    let phi = cfg.scenario.phi(grid, physics.energy.epsilon);
    let mut state = solver.initial_state(phi, cfg.scenario.velocity(grid))?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let div0 = crate::fields::ops::div_face(&state.u_face)
        .sub(&state.gamma.scale(physics.k.beta))
        .max_abs();
    csv.push_str(&csv_row(&state, &solver, div0, 0.0));
    Snapshot::from_state(&state, &physics).write(&snapshot_path(&dir, 0))?;

    let steps = cfg.steps();
    let mut outcome = Ok(());
    for n in 1..=steps {
        let dt = cfg.dt.min(cfg.t_end - state.t).max(cfg.dt * 1e-9);
        match solver.step(&state, dt) {
            Ok((next, diag)) => {
                state = next;
                if n % cfg.diagnostics_every == 0 || n == steps {
                    csv.push_str(&csv_row(
                        &state,
                        &solver,
                        diag.div_residual,
                        diag.vform_residual,
                    ));
                }
                if (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0) || n == steps {
                    Snapshot::from_state(&state, &physics).write(&snapshot_path(&dir, n))?;
                }
            }
            Err(e) => {
                let _ = writeln!(err, "step {n} at t = {:e}: {e}", state.t);
                Snapshot::from_state(&state, &physics).write(&snapshot_path(&dir, n - 1))?;
                outcome = Err(e);
                break;
            }
        }
    }
    write_file(&dir.join("diagnostics.csv"), &csv)?;
    outcome?;
    Ok(EXIT_OK)
}

fn verify(
    seed: u64,
    nx: usize,
    rho1: f64,
    rho2: f64,
    format: Format,
    out: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let grid = Grid::unit_square(nx)?;
    let k = make_constants(rho1, rho2)?;
    let report = run_audit(seed, grid, k, Tolerances::default());
    let text = match format {
        Format::Tsv => report.to_tsv(),
        Format::Table => report.to_table(),
    };
    let _ = out.write_all(text.as_bytes());
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn meta_or(snap: &Snapshot, key: &str, fallback: Option<f64>) -> Result<f64> {
    snap.meta_f64(key)
        .or(fallback)
        .ok_or_else(|| Error::Snapshot {
            line: 0,
            msg: format!("missing `{key}`; pass --config to supply it"),
        })
}

fn transform(
    input: &Path,
    from: Choice,
    to: Choice,
    config: Option<&Path>,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> std::result::Result<i32, Failure> {
    let mut snap = Snapshot::read(input)?;
    let cfg = config.map(read_config).transpose()?;
    if let Some(stored) = snap.meta("pressure_choice") {
        if stored != from.name() {
            return Err(Failure::Usage(format!(
                "{}: snapshot pressure is {stored}, not {from}",
                input.display()
            )));
        }
    }
    let pick = |key: &str, f: fn(&RunConfig) -> f64| meta_or(&snap, key, cfg.as_ref().map(f));
    let k = make_constants(pick("rho1", |c| c.rho1)?, pick("rho2", |c| c.rho2)?)?;
    let mut energy =
        EnergyParams::new(pick("sigma", |c| c.sigma)?, pick("epsilon", |c| c.epsilon)?)?;
    if let Some(c) = &cfg {
        energy.well = c.well;
    }
    let field = |name: &str| {
        snap.field(name).cloned().ok_or_else(|| Error::Snapshot {
            line: 0,
            msg: format!("field `{name}` is required"),
        })
    };
    let (phi, mu, p) = (field("phi")?, field("mu")?, field("p")?);
    let level = snap.meta_f64("p_level").unwrap_or(0.0);
    let full = p.map(|x| x + level);
    let fields = TransformFields {
        phi: &phi,
        mu_hat: &mu,
    };
    let mut q = transform_pressure(from, to, &full, fields, &energy, &k)?;
    let new_level = q.mean();
    q.remove_mean();
    snap.set_field("p", q)?;
    snap.set_meta("p_level", new_level);
    snap.set_meta("pressure_choice", to.name());
    match dest {
        Some(path) => snap.write(path)?,
        None => {
            let _ = out.write_all(snap.to_text().as_bytes());
        }
    }
    Ok(EXIT_OK)
}
