//! `causalcell`: parameter sweeps of the switch-based battery protocols,
//! written as deterministic CSV.
//!
//! Exit codes: 0 success, 2 invalid arguments or configuration, 3 numerical
//! failure (e.g. no rescue found below the requested threshold).

mod config;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use causalcell::gibbs::{self, GibbsCharger, GibbsSpec, RaisingConvention};
use causalcell::qops::{basis, fidelity, pauli, Pauli};
use causalcell::stabilizer::{self, BranchDuration, StabilizerSpec};
use causalcell::unitary::{
    battery_energy, optimal_protocol, optimal_time, ChargerSpec, UnitaryProtocol,
};
use config::FileConfig;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<causalcell::Error> for CliError {
    fn from(e: causalcell::Error) -> Self {
        use causalcell::Error;
        match e {
            Error::NoRescueFound { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "causalcell", version, about = "Quantum-switch battery protocol sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Plain `key = value` configuration file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BranchDurationArg {
    Half,
    Full,
}

impl From<BranchDurationArg> for BranchDuration {
    fn from(b: BranchDurationArg) -> Self {
        match b {
            BranchDurationArg::Half => BranchDuration::Half,
            BranchDurationArg::Full => BranchDuration::Full,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a static charger pair: minus-branch observables vs. the
    /// per-charger duration t.
    Unitary {
        #[command(flatten)]
        common: CommonOpts,
        /// Battery gap coefficient (H_B = ω σᶻ).
        #[arg(long)]
        omega: Option<f64>,
        /// First charger σˣ amplitude.
        #[arg(long)]
        x1: Option<f64>,
        /// First charger σʸ amplitude.
        #[arg(long)]
        y1: Option<f64>,
        /// Second charger σˣ amplitude.
        #[arg(long)]
        x2: Option<f64>,
        /// Second charger σʸ amplitude.
        #[arg(long)]
        y2: Option<f64>,
        /// Largest per-charger duration.
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        /// Number of sweep rows.
        #[arg(long)]
        steps: Option<usize>,
    },
    /// The probability-optimal charger pair for a given k: one summary row.
    UnitaryOptimal {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        omega: Option<f64>,
        /// Order parameter k ≥ 1 in Ω₂ = (1+2k)ω.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Sweep the switched thermal charger: minus branch vs. total duration t.
    Gibbs {
        #[command(flatten)]
        common: CommonOpts,
        /// Shared gap of battery and mediator (H = (ω/2)σᶻ each).
        #[arg(long)]
        omega: Option<f64>,
        /// Pair-exchange coupling K.
        #[arg(long)]
        coupling: Option<f64>,
        /// Mediator excited population p ∈ [0, 1/2].
        #[arg(long)]
        p: Option<f64>,
        /// Inverse temperature; used to derive p when p is not given.
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Tabulate f, g, h and the weak-coupling approximation over p ∈ [0, 1/2].
    GibbsCompare {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        coupling: Option<f64>,
        /// Number of rows (p values, inclusive endpoints).
        #[arg(long = "p-steps", alias = "steps")]
        p_steps: Option<usize>,
    },
    /// Sweep the stabilizer plus branch: P, C, probability and fidelity vs. t.
    Stabilize {
        #[command(flatten)]
        common: CommonOpts,
        /// Auxiliary drive σˣ coefficient.
        #[arg(long = "ha-x")]
        ha_x: Option<f64>,
        /// Auxiliary drive σʸ coefficient.
        #[arg(long = "ha-y")]
        ha_y: Option<f64>,
        /// Auxiliary drive σᶻ coefficient.
        #[arg(long = "ha-z")]
        ha_z: Option<f64>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        /// How long each branch process runs for a cycle of duration t.
        #[arg(long = "branch-duration", value_enum)]
        branch_duration: Option<BranchDurationArg>,
    },
    /// Find the first fidelity revival of the stabilizer: one summary row.
    RescueTime {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long = "ha-x")]
        ha_x: Option<f64>,
        #[arg(long = "ha-y")]
        ha_y: Option<f64>,
        #[arg(long = "ha-z")]
        ha_z: Option<f64>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long = "branch-duration", value_enum)]
        branch_duration: Option<BranchDurationArg>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("io error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(common: &CommonOpts) -> Result<FileConfig, CliError> {
    match &common.config {
        Some(path) => FileConfig::load(path),
        None => Ok(FileConfig::default()),
    }
}

/// Threads requested through CAUSALCELL_THREADS; absent means single-threaded.
fn thread_cap() -> usize {
    std::env::var("CAUSALCELL_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or(1)
}

/// Computes sweep rows (in input order) with the configured parallelism.
fn compute_rows<T: Sync, F: Fn(&T) -> String + Sync>(inputs: &[T], f: F) -> Vec<String> {
    let threads = thread_cap();
    if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        use rayon::prelude::*;
        pool.install(|| inputs.par_iter().map(&f).collect())
    } else {
        inputs.iter().map(f).collect()
    }
}

fn write_csv(common: &CommonOpts, header: &str, rows: &[String]) -> Result<(), CliError> {
    let mut text = String::with_capacity(rows.len() * 64 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Shortest round-trip decimal representation; byte-stable across runs.
fn fmt(v: f64) -> String {
    format!("{v}")
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Unitary { common, omega, x1, y1, x2, y2, t_max, steps } => {
            let cfg = load_config(&common)?;
            let omega = cfg.resolve_f64(omega, "omega", 1.0)?;
            // default charger pair: the k = 1 optimum (free first charger)
            let x1 = cfg.resolve_f64(x1, "x1", 0.0)?;
            let y1 = cfg.resolve_f64(y1, "y1", 0.0)?;
            let x2 = cfg.resolve_f64(x2, "x2", omega * 8f64.sqrt())?;
            let y2 = cfg.resolve_f64(y2, "y2", 0.0)?;
            let t_max = cfg.resolve_f64(t_max, "t-max", std::f64::consts::PI / omega)?;
            let steps = cfg.resolve_usize(steps, "steps", 200)?;
            if steps == 0 || t_max <= 0.0 {
                return Err(CliError::Usage("steps and t-max must be positive".into()));
            }
            let proto =
                UnitaryProtocol::new(omega, ChargerSpec::new(x1, y1), ChargerSpec::new(x2, y2))?;
            let ts: Vec<f64> = (1..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
            let rows = compute_rows(&ts, |&t| unitary_row(&proto, t));
            write_csv(&common, "t,prob_minus,rho11,rho22,coherence_abs,energy", &rows)
        }
        Command::UnitaryOptimal { common, omega, k } => {
            let cfg = load_config(&common)?;
            let omega = cfg.resolve_f64(omega, "omega", 1.0)?;
            let k = cfg.resolve_u32(k, "k", 1)?;
            let proto = optimal_protocol(omega, k)?;
            let t_min = optimal_time(omega)?;
            let (_, minus) = proto.switch_branches(t_min)?;
            let state = minus.state.as_ref().ok_or_else(|| {
                CliError::Numeric("optimal protocol produced an empty minus branch".into())
            })?;
            let fid = fidelity(state, &basis::excited_state())?;
            let row = format!(
                "{},{},{},{},{}",
                fmt(omega),
                k,
                fmt(t_min),
                fmt(minus.probability),
                fmt(fid)
            );
            write_csv(&common, "omega,k,t_min,prob_minus,fidelity_excited", &[row])
        }
        Command::Gibbs { common, omega, coupling, p, beta, t_max, steps } => {
            let cfg = load_config(&common)?;
            let omega = cfg.resolve_f64(omega, "omega", 1.0)?;
            let coupling = cfg.resolve_f64(coupling, "coupling", 1.0)?;
            let p = cfg.resolve_opt_f64(p, "p")?;
            let beta = cfg.resolve_opt_f64(beta, "beta")?;
            let spec = match (p, beta) {
                (Some(p), _) => GibbsSpec::new(omega, coupling, p)?,
                (None, Some(beta)) => GibbsSpec::from_beta(omega, coupling, beta)?,
                (None, None) => GibbsSpec::new(omega, coupling, 0.25)?,
            };
            let t_max = cfg.resolve_f64(t_max, "t-max", 2.0 * gibbs::global_max_time(&spec))?;
            let steps = cfg.resolve_usize(steps, "steps", 400)?;
            if steps == 0 || t_max <= 0.0 {
                return Err(CliError::Usage("steps and t-max must be positive".into()));
            }
            let charger = GibbsCharger::new(&spec, RaisingConvention::Half);
            let rho0 = spec.gibbs_state();
            let ts: Vec<f64> = (1..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
            let rows = compute_rows(&ts, |&t| {
                let (_, minus) = charger.switch_branches(t, &rho0).expect("t ≥ 0");
                match minus.state.as_ref() {
                    Some(s) => format!(
                        "{},{},{},{}",
                        fmt(t),
                        fmt(minus.probability),
                        fmt(s.population(0)),
                        fmt(s.coherence_abs())
                    ),
                    None => format!("{},{},NaN,NaN", fmt(t), fmt(minus.probability)),
                }
            });
            write_csv(&common, "t,prob_minus,excited_pop,coherence_abs", &rows)
        }
        Command::GibbsCompare { common, omega, coupling, p_steps } => {
            let cfg = load_config(&common)?;
            let omega = cfg.resolve_f64(omega, "omega", 1.0)?;
            let coupling = cfg.resolve_f64(coupling, "coupling", 1.0)?;
            let p_steps = cfg.resolve_usize(p_steps, "p-steps", 501)?;
            if p_steps < 2 {
                return Err(CliError::Usage("p-steps must be at least 2".into()));
            }
            let ks: Vec<usize> = (0..p_steps).collect();
            let rows = compute_rows(&ks, |&k| {
                let p = 0.5 * k as f64 / (p_steps - 1) as f64;
                let spec = GibbsSpec::new(omega, coupling, p).expect("p in [0, 1/2]");
                format!(
                    "{},{},{},{},{}",
                    fmt(p),
                    fmt(gibbs::f_of_p(&spec)),
                    fmt(gibbs::g_of_p(&spec)),
                    fmt(gibbs::h_of_p(p)),
                    fmt(gibbs::weak_coupling_f(p).expect("p < 1"))
                )
            });
            write_csv(&common, "p,f,g,h,f_weak_approx", &rows)
        }
        Command::Stabilize { common, ha_x, ha_y, ha_z, t_max, steps, branch_duration } => {
            let cfg = load_config(&common)?;
            let spec = stabilizer_spec(&cfg, ha_x, ha_y, ha_z)?;
            let duration = resolve_duration(&cfg, branch_duration)?;
            let t_max = cfg.resolve_f64(t_max, "t-max", 0.4)?;
            let steps = cfg.resolve_usize(steps, "steps", 400)?;
            if steps == 0 || t_max <= 0.0 {
                return Err(CliError::Usage("steps and t-max must be positive".into()));
            }
            let grid: Vec<f64> = (0..=steps).map(|k| t_max * k as f64 / steps as f64).collect();
            let points = stabilizer::rescue_trajectory(&spec, &grid, duration)?;
            let rows: Vec<String> = points
                .iter()
                .map(|pt| {
                    format!(
                        "{},{},{},{},{}",
                        fmt(pt.t),
                        fmt(pt.population),
                        fmt(pt.coherence),
                        fmt(pt.prob_plus),
                        fmt(pt.fidelity)
                    )
                })
                .collect();
            write_csv(&common, "t,P,C,prob_plus,fidelity", &rows)
        }
        Command::RescueTime { common, ha_x, ha_y, ha_z, t_max, branch_duration } => {
            let cfg = load_config(&common)?;
            let spec = stabilizer_spec(&cfg, ha_x, ha_y, ha_z)?;
            let duration = resolve_duration(&cfg, branch_duration)?;
            let t_max = cfg.resolve_f64(t_max, "t-max", 1.0)?;
            let rescue = stabilizer::find_rescue_time(&spec, t_max, 0.999, duration)?;
            let row = format!(
                "{},{},{}",
                fmt(rescue.t_rescue),
                fmt(rescue.fidelity),
                fmt(rescue.prob_plus)
            );
            write_csv(&common, "t_rescue,fidelity,prob_plus", &[row])
        }
    }
}

fn unitary_row(proto: &UnitaryProtocol, t: f64) -> String {
    let (_, minus) = proto.switch_branches(t).expect("t ≥ 0");
    let mut row = String::new();
    let _ = write!(row, "{},{}", fmt(t), fmt(minus.probability));
    match minus.state.as_ref() {
        Some(s) => {
            let r11 = minus.probability * s.population(0);
            let r22 = minus.probability * s.population(1);
            let _ = write!(
                row,
                ",{},{},{},{}",
                fmt(r11),
                fmt(r22),
                fmt(s.coherence_abs()),
                fmt(battery_energy(s, proto.omega))
            );
        }
        None => row.push_str(",0,0,NaN,NaN"),
    }
    row
}

fn stabilizer_spec(
    cfg: &FileConfig,
    ha_x: Option<f64>,
    ha_y: Option<f64>,
    ha_z: Option<f64>,
) -> Result<StabilizerSpec, CliError> {
    let x = cfg.resolve_f64(ha_x, "ha-x", 12.0)?;
    let y = cfg.resolve_f64(ha_y, "ha-y", 5.0)?;
    let z = cfg.resolve_f64(ha_z, "ha-z", 0.0)?;
    let aux = &(&pauli(Pauli::X).scale(x.into()) + &pauli(Pauli::Y).scale(y.into()))
        + &pauli(Pauli::Z).scale(z.into());
    Ok(StabilizerSpec::with_aux(aux)?)
}

fn resolve_duration(
    cfg: &FileConfig,
    flag: Option<BranchDurationArg>,
) -> Result<BranchDuration, CliError> {
    if let Some(d) = flag {
        return Ok(d.into());
    }
    match cfg.get("branch-duration") {
        Some("half") | None => Ok(BranchDuration::Half),
        Some("full") => Ok(BranchDuration::Full),
        Some(other) => Err(CliError::Usage(format!(
            "branch-duration must be `half` or `full`, got `{other}`"
        ))),
    }
}
