//! Command-line front end: decoherence functions, state and gate fidelities,
//! schedule optimization and the reference reproduction report.

mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cluster_dephasing::fidelity::{closed_form_cluster, fidelity_curve};
use cluster_dephasing::mbqc::{run_gate, GateRunReport};
use cluster_dephasing::reference;
use cluster_dephasing::scheduler::{optimize_schedule, OptimizeOptions};
use cluster_dephasing::states::{
    oscillation_condition, post_first_measurement, InputQubit, NamedState, DEFAULT_AMP_TOL,
};
use cluster_dephasing::tensor::PureState;
use cluster_dephasing::Error as CoreError;

use config::{parse_complex, parse_list, parse_number, ComplexArg, Number, RunConfig};
use output::{csv, emit, float, json, Destination};

/// Bad flags, config or input files.
#[derive(Debug)]
pub struct Usage(String);

impl Usage {
    pub fn err(msg: impl Into<String>) -> anyhow::Error {
        anyhow::Error::new(Usage(msg.into()))
    }

    pub fn wrap(e: anyhow::Error) -> anyhow::Error {
        Self::err(format!("{e:#}"))
    }
}

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// A computed quantity came out non-finite.
#[derive(Debug)]
struct Numerical(String);

impl fmt::Display for Numerical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "numerical failure: {}", self.0)
    }
}

impl std::error::Error for Numerical {}

fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.is::<Usage>() {
            return 2;
        }
        if cause.is::<Numerical>() {
            return 4;
        }
        if let Some(core) = cause.downcast_ref::<CoreError>() {
            return match core {
                CoreError::BranchImpossible { .. } => 3,
                CoreError::Quadrature { .. } => 4,
                _ => 2,
            };
        }
    }
    1
}

#[derive(Parser)]
#[command(name = "cluster-dephasing", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Γ(t) and Θ(t) on a time grid (CSV: t,gamma,theta,regime).
    Decoherence {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Fidelity of the four-qubit post-measurement cluster
    /// (CSV: t,fidelity_engine,fidelity_closed_form).
    StateFidelity {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        input: InputArgs,
    },
    /// One gate run (JSON).
    Gate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gate: GateArgs,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        conventions: ConventionArgs,
        #[command(flatten)]
        schedule: ScheduleArgs,
    },
    /// Best measurement schedule inside a window (JSON).
    Optimize {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        gate: GateArgs,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        conventions: ConventionArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Oscillation condition for a state file (JSON).
    CheckOscillation {
        /// `{"n_qubits": n, "amplitudes": [[re, im], …]}`.
        state_file: PathBuf,
        /// Amplitudes at or below this modulus are ignored.
        #[arg(long, default_value_t = DEFAULT_AMP_TOL)]
        amp_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs every acceptance criterion and prints a pass/fail report.
    ReproducePaper {
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Exit with status 1 if any criterion fails.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// JSON file with any of the flag values; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path (`-` for stdout). Defaults to $CLUSTER_DEPHASING_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    omega_c: Option<f64>,
    /// Thermal time βħ; `inf` for zero temperature.
    #[arg(long, value_parser = parse_number)]
    beta_hbar: Option<Number>,
}

#[derive(Args)]
struct GridArgs {
    /// `start:end:n`.
    #[arg(long)]
    grid: Option<String>,
}

#[derive(Args)]
struct InputArgs {
    /// Named input: zero, one, plus, minus, plus_y, minus_y.
    #[arg(long)]
    input: Option<String>,
    /// Amplitude of |0⟩, `x` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Option<ComplexArg>,
    /// Amplitude of |1⟩, `x` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Option<ComplexArg>,
}

#[derive(Args)]
struct GateArgs {
    /// not, hadamard, phase or euler.
    #[arg(long)]
    gate: Option<String>,
    /// Euler angles `xi,eta,zeta`.
    #[arg(long, value_parser = parse_list::<3>, allow_hyphen_values = true)]
    euler: Option<[f64; 3]>,
}

#[derive(Args)]
struct ConventionArgs {
    /// divisible or fresh-bath.
    #[arg(long)]
    convention: Option<String>,
    /// remove or retain.
    #[arg(long)]
    measured: Option<String>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Measurement times `t1,t2,t3`.
    #[arg(long, value_parser = parse_list::<3>)]
    times: Option<[f64; 3]>,
    /// Single waiting time before back-to-back measurements.
    #[arg(long)]
    t_gap: Option<f64>,
    /// Outcomes of qubits 1–4, e.g. `uuuu` or `udud`.
    #[arg(long)]
    branch: Option<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// simultaneous or distinct.
    #[arg(long)]
    mode: Option<String>,
    /// `lo,hi`.
    #[arg(long, value_parser = parse_list::<2>)]
    window: Option<[f64; 2]>,
    /// Coarse grid step.
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    refine_tol: Option<f64>,
}

impl Common {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let file = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            eta: self.eta,
            omega_c: self.omega_c,
            beta_hbar: self.beta_hbar,
            ..Default::default()
        };
        Ok(file.overlay(&flags))
    }
}

impl GridArgs {
    fn apply(&self, c: &mut RunConfig) {
        if self.grid.is_some() {
            c.grid.clone_from(&self.grid);
        }
    }
}

impl InputArgs {
    fn apply(&self, c: &mut RunConfig) {
        // A named input on the command line replaces file amplitudes and
        // vice versa.
        if self.input.is_some() {
            c.input.clone_from(&self.input);
            if self.alpha.is_none() && self.beta.is_none() {
                c.alpha = None;
                c.beta = None;
            }
        }
        if self.alpha.is_some() || self.beta.is_some() {
            if self.input.is_none() {
                c.input = None;
            }
            c.alpha = self.alpha.or(c.alpha);
            c.beta = self.beta.or(c.beta);
        }
    }
}

impl GateArgs {
    fn apply(&self, c: &mut RunConfig) {
        if self.gate.is_some() {
            c.gate.clone_from(&self.gate);
            if self.euler.is_none() {
                c.euler = None;
            }
        }
        if self.euler.is_some() {
            c.euler = self.euler;
        }
    }
}

impl ConventionArgs {
    fn apply(&self, c: &mut RunConfig) {
        if self.convention.is_some() {
            c.convention.clone_from(&self.convention);
        }
        if self.measured.is_some() {
            c.measured.clone_from(&self.measured);
        }
    }
}

impl ScheduleArgs {
    fn apply(&self, c: &mut RunConfig) {
        // Either timing flag replaces both timing fields from the file.
        if self.times.is_some() || self.t_gap.is_some() {
            c.times = self.times;
            c.t_gap = self.t_gap;
        }
        if self.branch.is_some() {
            c.branch.clone_from(&self.branch);
        }
    }
}

impl SearchArgs {
    fn apply(&self, c: &mut RunConfig) {
        let flags = RunConfig {
            mode: self.mode.clone(),
            window: self.window,
            step: self.step,
            refine_tol: self.refine_tol,
            ..Default::default()
        };
        *c = std::mem::take(c).overlay(&flags);
    }
}

fn finite(label: &str, values: &[f64]) -> anyhow::Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(anyhow::Error::new(Numerical(format!(
            "{label} evaluated to {v}"
        ))));
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Decoherence { common, grid } => {
            let mut cfg = common.config()?;
            grid.apply(&mut cfg);
            let p = cfg.bath()?;
            let times = cfg.grid()?;
            let rows: Vec<(f64, f64, f64)> =
                times.iter().map(|&t| (t, p.gamma(t), p.theta(t))).collect();
            finite(
                "gamma/theta",
                &rows.iter().flat_map(|r| [r.1, r.2]).collect::<Vec<_>>(),
            )?;
            let body = csv(
                &["t", "gamma", "theta", "regime"],
                rows.iter().map(|&(t, g, th)| {
                    vec![
                        float(t),
                        float(g),
                        float(th),
                        p.classify_regime(t).to_string(),
                    ]
                }),
            );
            emit(
                &Destination::resolve(common.out.as_deref(), "decoherence.csv"),
                &body,
                "decoherence",
                &cfg,
            )
        }
        Command::StateFidelity {
            common,
            grid,
            input,
        } => {
            let mut cfg = common.config()?;
            grid.apply(&mut cfg);
            input.apply(&mut cfg);
            let p = cfg.bath()?;
            let times = cfg.grid()?;
            let q = cfg.input_or(InputQubit::from_named(NamedState::Zero))?;
            let engine = fidelity_curve(&post_first_measurement(&q), &times, &p)?;
            let closed: Vec<f64> = times
                .iter()
                .map(|&t| closed_form_cluster(&q, t, &p))
                .collect();
            finite("fidelity", &engine.values)?;
            finite("closed-form fidelity", &closed)?;
            let body = csv(
                &["t", "fidelity_engine", "fidelity_closed_form"],
                times
                    .iter()
                    .zip(&engine.values)
                    .zip(&closed)
                    .map(|((t, e), c)| vec![float(*t), float(*e), float(*c)]),
            );
            emit(
                &Destination::resolve(common.out.as_deref(), "state-fidelity.csv"),
                &body,
                "state-fidelity",
                &cfg,
            )
        }
        Command::Gate {
            common,
            gate,
            input,
            conventions,
            schedule,
        } => {
            let mut cfg = common.config()?;
            gate.apply(&mut cfg);
            input.apply(&mut cfg);
            conventions.apply(&mut cfg);
            schedule.apply(&mut cfg);
            let p = cfg.bath()?;
            let g = cfg.gate()?;
            let q = cfg.input_or(g.reference_input)?;
            let s = cfg.schedule()?;
            let r = run_gate(&g, &q, &s, &p)?;
            finite("gate fidelity", &[r.gate_fidelity, r.branch_probability])?;
            let body = json(&GateRunReport::new(&g, &q, &s, &r))?;
            emit(
                &Destination::resolve(common.out.as_deref(), "gate.json"),
                &body,
                "gate",
                &cfg,
            )
        }
        Command::Optimize {
            common,
            gate,
            input,
            conventions,
            search,
        } => {
            let mut cfg = common.config()?;
            gate.apply(&mut cfg);
            input.apply(&mut cfg);
            conventions.apply(&mut cfg);
            search.apply(&mut cfg);
            let p = cfg.bath()?;
            let g = cfg.gate()?;
            let q = cfg.input_or(g.reference_input)?;
            let defaults = OptimizeOptions::default();
            let opts = OptimizeOptions {
                step: cfg.step.unwrap_or(defaults.step),
                refine_tol: cfg.refine_tol.unwrap_or(defaults.refine_tol),
                conventions: cfg.conventions()?,
            };
            let r = optimize_schedule(&g, &q, cfg.mode()?, cfg.window()?, &p, &opts)?;
            finite("best fidelity", &[r.best_fidelity])?;
            emit(
                &Destination::resolve(common.out.as_deref(), "optimize.json"),
                &json(&r)?,
                "optimize",
                &cfg,
            )
        }
        Command::CheckOscillation {
            state_file,
            amp_tol,
            out,
        } => {
            let text = std::fs::read_to_string(&state_file)
                .map_err(|e| Usage::err(format!("reading {}: {e}", state_file.display())))?;
            let psi = PureState::from_json(&text)
                .map_err(|e| Usage::err(format!("{}: {e}", state_file.display())))?;
            let verdict = oscillation_condition(&psi, amp_tol);
            let meta = serde_json::json!({ "state_file": state_file, "amp_tol": amp_tol });
            emit(
                &Destination::resolve(out.as_deref(), "check-oscillation.json"),
                &json(&verdict)?,
                "check-oscillation",
                &meta,
            )
        }
        Command::ReproducePaper {
            json: as_json,
            strict,
            out,
        } => {
            let outcomes = reference::reproduce_all()?;
            let body = if as_json {
                json(&outcomes)?
            } else {
                let mut s: String = outcomes.iter().map(|c| c.to_string()).collect();
                let passed = outcomes.iter().filter(|c| c.passed()).count();
                s.push_str(&format!("{passed}/{} criteria passed\n", outcomes.len()));
                s
            };
            let meta = serde_json::json!({ "json": as_json });
            let name = if as_json {
                "reproduce-paper.json"
            } else {
                "reproduce-paper.txt"
            };
            emit(
                &Destination::resolve(out.as_deref(), name),
                &body,
                "reproduce-paper",
                &meta,
            )?;
            if strict && outcomes.iter().any(|c| !c.passed()) {
                anyhow::bail!("some criteria failed");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
