//! Published reference values and the reproduction report.
//!
//! Each `criterion_*` function evaluates one acceptance criterion against
//! the calibrated bath and returns a [`CriterionOutcome`] with a line per
//! compared quantity.

use std::fmt;

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use crate::bath::BathParams;
use crate::channel::{m_sum, propagate, CompositionConvention};
use crate::fidelity::{
    closed_form_cluster, closed_form_two_qubit, fidelity_curve, linear_grid, FidelityCurve,
};
use crate::mbqc::{
    branch_averaged_fidelity, gate_fidelity_curve, run_gate, Conventions, GateKind, GateSpec,
    MeasurementSchedule, SweepMode,
};
use crate::scheduler::{
    find_extrema, optimize_schedule, ExtremaReport, OptimizeOptions, ScheduleMode,
};
use crate::states::{oscillation_condition, post_first_measurement, InputQubit, DEFAULT_AMP_TOL};
use crate::tensor::{DensityMatrix, PureState};
use crate::{Result, C64};

/// Absolute tolerance on quoted gate-fidelity percentages.
pub const VALUE_TOL: f64 = 0.03;
/// Tolerance on extremum positions in the position-only comparison.
pub const POSITION_TOL: f64 = 0.3;
/// Offset used for the `(t − δ, t, t + δ)` sweep in the position comparison.
pub const DISTINCT_SWEEP_DELTA: f64 = 0.2;

/// The six distinct-time schedules.
pub const DISTINCT_SCHEDULES: [[f64; 3]; 6] = [
    [6.0, 8.0, 10.0],
    [14.0, 16.0, 18.0],
    [15.2, 15.7, 16.2],
    [15.5, 15.7, 15.9],
    [7.8, 23.4, 39.0],
    [15.7, 31.4, 47.1],
];

/// Quoted distinct-time fidelities, aligned with [`DISTINCT_SCHEDULES`].
pub fn distinct_values(kind: GateKind) -> [Option<f64>; 6] {
    match kind {
        GateKind::Not => [
            Some(0.354),
            Some(0.53),
            Some(0.84),
            Some(0.90),
            Some(0.50),
            Some(0.756),
        ],
        GateKind::Hadamard => [
            Some(0.39),
            Some(0.52),
            None,
            Some(0.85),
            Some(0.50),
            Some(0.71),
        ],
        GateKind::Phase => [
            Some(0.48),
            Some(0.65),
            None,
            Some(0.95),
            Some(0.46),
            Some(0.85),
        ],
        GateKind::Euler => [None; 6],
    }
}

/// Distinct-time peak and valley times.
pub const DISTINCT_PEAKS: [f64; 3] = [15.7, 31.4, 47.1];
pub const DISTINCT_VALLEYS: [f64; 3] = [7.8, 23.4, 39.0];

/// A quoted simultaneous-scenario value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quoted {
    About(f64),
    Above(f64),
    Below(f64),
}

impl Quoted {
    pub fn holds(self, v: f64) -> bool {
        match self {
            Quoted::About(x) => (v - x).abs() <= VALUE_TOL,
            Quoted::Above(x) => v > x,
            Quoted::Below(x) => v < x,
        }
    }

    fn describe(self) -> String {
        match self {
            Quoted::About(x) => format!("{x:.3} ± {VALUE_TOL}"),
            Quoted::Above(x) => format!("> {x}"),
            Quoted::Below(x) => format!("< {x}"),
        }
    }
}

/// Quoted `(t_gap, value)` pairs for the simultaneous scenario.
pub fn simultaneous_values(kind: GateKind) -> Vec<(f64, Quoted)> {
    use Quoted::*;
    match kind {
        GateKind::Not => vec![
            (0.8, About(0.93)),
            (15.7, About(0.93)),
            (31.4, Above(0.80)),
            (47.1, Above(0.80)),
            (5.8, About(0.70)),
        ],
        GateKind::Hadamard => vec![
            (15.7, Above(0.80)),
            (31.4, Above(0.80)),
            (47.1, Above(0.80)),
            (7.8, Below(0.40)),
            (23.5, Below(0.40)),
            (39.2, Below(0.40)),
        ],
        GateKind::Phase => vec![
            (15.9, About(0.96)),
            (31.6, About(0.95)),
            (47.3, About(0.93)),
            (8.4, About(0.22)),
            (24.8, About(0.34)),
            (40.4, About(0.44)),
        ],
        GateKind::Euler => Vec::new(),
    }
}

/// Quoted simultaneous-scenario peak and valley times.
pub fn simultaneous_positions(kind: GateKind) -> (Vec<f64>, Vec<f64>) {
    match kind {
        GateKind::Not => (vec![15.7], vec![5.8]),
        GateKind::Hadamard => (vec![15.7, 31.4, 47.1], vec![7.8, 23.5, 39.2]),
        GateKind::Phase => (vec![15.9, 31.6, 47.3], vec![8.4, 24.8, 40.4]),
        GateKind::Euler => (Vec::new(), Vec::new()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: String,
    pub status: Status,
    /// Set when the criterion was evaluated in its position-only form.
    pub flagged: bool,
    pub details: Vec<String>,
}

impl CriterionOutcome {
    fn new(id: u8, title: &str) -> Self {
        Self {
            id,
            title: title.to_string(),
            status: Status::Pass,
            flagged: false,
            details: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records one comparison; any failure fails the criterion.
    fn check(&mut self, ok: bool, line: String) {
        if !ok {
            self.status = Status::Fail;
        }
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }

    pub fn headline(&self) -> String {
        let status = match (&self.status, self.flagged) {
            (Status::Pass, false) => "PASS",
            (Status::Fail, false) => "FAIL",
            (Status::Pass, true) => "PASS (FLAGGED: position-only)",
            (Status::Fail, true) => "FAIL (FLAGGED: position-only)",
        };
        format!("criterion {:>2} {status}: {}", self.id, self.title)
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline())?;
        for line in &self.details {
            writeln!(f, "    {line}")?;
        }
        Ok(())
    }
}

fn catalog(kind: GateKind) -> GateSpec {
    GateSpec::catalog(kind).expect("catalog gate")
}

fn gate_value(kind: GateKind, s: &MeasurementSchedule, p: &BathParams) -> Result<f64> {
    let g = catalog(kind);
    Ok(run_gate(&g, &g.reference_input, s, p)?.gate_fidelity)
}

/// State-fidelity extrema of the cluster with `|ψ_in⟩ = |0⟩`.
pub fn criterion_1() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(1, "state-fidelity extrema");
    let p = BathParams::calibrated();
    let psi = post_first_measurement(&InputQubit::real(1.0, 0.0)?);
    let f = |t: f64| fidelity_curve(&psi, &[t], &p).map(|c| c.values[0]);
    for (t, target, tol) in [(15.7, 0.71, 0.02), (31.4, 0.60, 0.02), (23.5, 0.015, 0.01)] {
        let v = f(t)?;
        out.check(
            (v - target).abs() <= tol,
            format!("F({t}) = {v:.4}, expected {target} ± {tol}"),
        );
    }
    let v = f(7.8)?;
    out.check(v <= 0.01, format!("F(7.8) = {v:.5}, expected <= 0.01"));
    Ok(out)
}

/// Engine against both closed forms.
pub fn criterion_2() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(2, "engine vs closed forms");
    let p = BathParams::calibrated();
    let grid = linear_grid(0.0, 50.0, 1000);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    let phi = PureState::from_amplitudes(vec![z, z, C64::new(h, 0.0), C64::new(h, 0.0)])?;
    let curve = fidelity_curve(&phi, &grid, &p)?;
    let err = max_deviation(&curve, |t| closed_form_two_qubit(t, &p));
    out.check(
        err < 1e-10,
        format!("two-qubit: max |engine − closed form| = {err:.2e}"),
    );

    let mut rng = StdRng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let q = InputQubit::real(theta.cos(), theta.sin())?;
        let curve = fidelity_curve(&post_first_measurement(&q), &grid, &p)?;
        worst = worst.max(max_deviation(&curve, |t| closed_form_cluster(&q, t, &p)));
    }
    out.check(
        worst < 1e-10,
        format!("cluster, 20 random real inputs: max deviation = {worst:.2e}"),
    );
    Ok(out)
}

fn max_deviation(curve: &FidelityCurve, f: impl Fn(f64) -> f64) -> f64 {
    curve
        .times
        .iter()
        .zip(&curve.values)
        .map(|(t, v)| (v - f(*t)).abs())
        .fold(0.0, f64::max)
}

/// Closed-form `Γ`, `Θ` against quadrature on the oracle parameter grid.
pub fn criterion_3() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(3, "decoherence functions vs quadrature");
    let times: Vec<f64> = (0..=12)
        .map(|k| 10f64.powf(-4.0 + k as f64 / 2.0))
        .collect();
    for eta in [1e-3, 0.1] {
        for omega_c in [10.0, 100.0] {
            for beta_hbar in [1.0, f64::INFINITY] {
                let p = BathParams::new(eta, omega_c, beta_hbar)?;
                let (mut worst_g, mut worst_t): (f64, f64) = (0.0, 0.0);
                for &t in &times {
                    let rel = |a: f64, b: f64| (a - b).abs() / b.max(1e-30);
                    worst_g = worst_g.max(rel(p.gamma_quad(t)?, p.gamma(t)));
                    worst_t = worst_t.max(rel(p.theta_quad(t)?, p.theta(t)));
                }
                out.check(
                    worst_g < 1e-6 && worst_t < 1e-6,
                    format!(
                        "η={eta}, ω_c={omega_c}, βħ={beta_hbar}: max rel err Γ {worst_g:.1e}, Θ {worst_t:.1e}"
                    ),
                );
            }
        }
    }
    Ok(out)
}

/// Result of the convention comparison on the NOT distinct-time table.
#[derive(Clone, Debug)]
pub struct ConventionVerdict {
    pub outcome: CriterionOutcome,
    /// Convention that met all six values, if any.
    pub selected: Option<CompositionConvention>,
}

/// NOT distinct-time values under both conventions.
pub fn criterion_4() -> Result<ConventionVerdict> {
    let mut out = CriterionOutcome::new(4, "NOT gate, distinct times, convention discrimination");
    let p = BathParams::calibrated();
    let quoted = distinct_values(GateKind::Not);
    let mut selected = None;
    for conv in CompositionConvention::ALL {
        let mut all = true;
        for (times, target) in DISTINCT_SCHEDULES.iter().zip(quoted) {
            let target = target.expect("NOT quotes all six schedules");
            let s = MeasurementSchedule::distinct(times[0], times[1], times[2]).convention(conv);
            let v = gate_value(GateKind::Not, &s, &p)?;
            let ok = (v - target).abs() <= VALUE_TOL;
            all &= ok;
            out.note(format!(
                "{:<10} {:?}: {v:.3} vs {target:.3} (Δ = {:+.3}){}",
                conv.name(),
                times,
                v - target,
                if ok { "" } else { "  mismatch" }
            ));
        }
        if all && selected.is_none() {
            selected = Some(conv);
        }
    }
    match selected {
        Some(conv) => out.check(true, format!("selected convention: {}", conv.name())),
        None => {
            out.flagged = true;
            out.note(
                "no convention meets all six values; falling back to position-only comparison"
                    .into(),
            );
            averaged_note(&mut out, GateKind::Not, &p)?;
            position_check(&mut out, GateKind::Not, &p)?;
        }
    }
    Ok(ConventionVerdict {
        outcome: out,
        selected,
    })
}

/// HADAMARD (5) and PHASE (6) distinct-time values.
pub fn criterion_distinct(
    kind: GateKind,
    selected: Option<CompositionConvention>,
) -> Result<CriterionOutcome> {
    let (id, title) = match kind {
        GateKind::Hadamard => (5, "HADAMARD gate, distinct times"),
        _ => (6, "PHASE gate, distinct times"),
    };
    let mut out = CriterionOutcome::new(id, title);
    let p = BathParams::calibrated();
    let conv = selected.unwrap_or_default();
    for (times, target) in DISTINCT_SCHEDULES.iter().zip(distinct_values(kind)) {
        let Some(target) = target else { continue };
        let s = MeasurementSchedule::distinct(times[0], times[1], times[2]).convention(conv);
        let v = gate_value(kind, &s, &p)?;
        let line = format!(
            "{} {:?}: {v:.3} vs {target:.3} (Δ = {:+.3})",
            conv.name(),
            times,
            v - target
        );
        if selected.is_some() {
            out.check((v - target).abs() <= VALUE_TOL, line);
        } else {
            out.note(line);
        }
    }
    if selected.is_none() {
        out.flagged = true;
        averaged_note(&mut out, kind, &p)?;
        position_check(&mut out, kind, &p)?;
    }
    Ok(out)
}

/// Branch-averaged, byproduct-corrected values for the same schedules.
/// Reported for comparison only; they never decide the outcome.
fn averaged_note(out: &mut CriterionOutcome, kind: GateKind, p: &BathParams) -> Result<()> {
    let g = catalog(kind);
    for conv in CompositionConvention::ALL {
        let mut cells = Vec::new();
        for (times, target) in DISTINCT_SCHEDULES.iter().zip(distinct_values(kind)) {
            let Some(target) = target else { continue };
            let s = MeasurementSchedule::distinct(times[0], times[1], times[2]).convention(conv);
            let v = branch_averaged_fidelity(&g, &g.reference_input, &s, p)?;
            cells.push(format!("{v:.3}/{target:.3}"));
        }
        out.note(format!(
            "branch-averaged {:<10} (value/quoted): {}",
            conv.name(),
            cells.join("  ")
        ));
    }
    Ok(())
}

/// Extrema of the `(t − δ, t, t + δ)` sweep against the distinct-time
/// peak and valley times.
fn position_check(out: &mut CriterionOutcome, kind: GateKind, p: &BathParams) -> Result<()> {
    let mode = SweepMode::DistinctTimes {
        delta: DISTINCT_SWEEP_DELTA,
    };
    let ext = sweep_extrema(kind, mode, CompositionConvention::default(), p)?;
    out.note(format!(
        "position-only: extrema of the sweep (t − {DISTINCT_SWEEP_DELTA}, t, t + {DISTINCT_SWEEP_DELTA}), divisible"
    ));
    compare_positions(out, &ext, &DISTINCT_PEAKS, &DISTINCT_VALLEYS);
    Ok(())
}

/// Extrema of a gate-fidelity sweep over `[0, 50]`.
pub fn sweep_extrema(
    kind: GateKind,
    mode: SweepMode,
    conv: CompositionConvention,
    p: &BathParams,
) -> Result<ExtremaReport> {
    let g = catalog(kind);
    let conventions = Conventions {
        composition: conv,
        ..Default::default()
    };
    let grid = linear_grid(0.0, 50.0, 1001);
    let curve = gate_fidelity_curve(&g, &g.reference_input, mode, &grid, p, conventions)?;
    find_extrema(&curve, 1e-4, |t| {
        let s = conventions.schedule(mode.timing_at(t));
        Ok(run_gate(&g, &g.reference_input, &s, p)?.gate_fidelity)
    })
}

fn compare_positions(
    out: &mut CriterionOutcome,
    ext: &ExtremaReport,
    peaks: &[f64],
    valleys: &[f64],
) {
    for (targets, found, label) in [
        (peaks, &ext.peaks, "peak"),
        (valleys, &ext.valleys, "valley"),
    ] {
        for &target in targets {
            let nearest = found
                .iter()
                .copied()
                .min_by(|a, b| (a.0 - target).abs().total_cmp(&(b.0 - target).abs()));
            match nearest {
                Some((t, v)) => out.check(
                    (t - target).abs() <= POSITION_TOL,
                    format!(
                        "{label} near {target}: found at {t:.3} (Δ = {:+.3}), value {v:.3}",
                        t - target
                    ),
                ),
                None => out.check(false, format!("{label} near {target}: none found")),
            }
        }
    }
}

/// Simultaneous-scenario values for all three gates.
pub fn criterion_7(selected: Option<CompositionConvention>) -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(7, "simultaneous scenario");
    let p = BathParams::calibrated();
    let strict = selected.is_some();
    for kind in GateKind::CATALOG {
        for (t, quoted) in simultaneous_values(kind) {
            let v = gate_value(kind, &MeasurementSchedule::simultaneous(t), &p)?;
            let line = format!("{kind} t_gap={t}: {v:.3} vs {}", quoted.describe());
            if strict {
                out.check(quoted.holds(v), line);
            } else {
                let tag = if quoted.holds(v) { "" } else { "  mismatch" };
                out.note(format!("{line}{tag}"));
            }
        }
    }
    if !strict {
        out.flagged = true;
        for kind in GateKind::CATALOG {
            let ext = sweep_extrema(
                kind,
                SweepMode::Simultaneous,
                CompositionConvention::default(),
                &p,
            )?;
            out.note(format!("position-only: {kind} simultaneous sweep"));
            let (peaks, valleys) = simultaneous_positions(kind);
            compare_positions(&mut out, &ext, &peaks, &valleys);
        }
    }
    Ok(out)
}

/// Zero-time identities for the catalog.
pub fn criterion_8() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(8, "zero-time identities");
    let p = BathParams::calibrated();
    for kind in GateKind::CATALOG {
        let g = catalog(kind);
        let r = run_gate(
            &g,
            &g.reference_input,
            &MeasurementSchedule::distinct(0.0, 0.0, 0.0),
            &p,
        )?;
        let (df, dp) = (
            (r.gate_fidelity - 1.0).abs(),
            (r.branch_probability - 1.0 / 16.0).abs(),
        );
        out.check(
            df < 1e-12 && dp < 1e-12,
            format!("{kind}: |F − 1| = {df:.1e}, |p − 1/16| = {dp:.1e}"),
        );
    }
    Ok(out)
}

fn random_amplitude(rng: &mut StdRng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_density(rng: &mut StdRng, n: usize) -> Result<DensityMatrix> {
    let dim = 1usize << n;
    let rank = rng.gen_range(1..=3);
    let mut acc = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    for _ in 0..rank {
        let v = nalgebra::DVector::from_fn(dim, |_, _| random_amplitude(rng));
        acc += &v * v.adjoint() * C64::new(rng.gen_range(0.1..1.0), 0.0);
    }
    let tr = acc.trace();
    DensityMatrix::from_matrix(acc / tr)
}

/// Random state supported on basis states whose `|M|` lies in `allowed`.
fn random_supported_state(
    rng: &mut StdRng,
    n: usize,
    allowed: impl Fn(i32) -> bool,
) -> Result<PureState> {
    let amps: Vec<C64> = (0..1usize << n)
        .map(|r| {
            if allowed(m_sum(r, n)) && rng.gen_bool(0.7) {
                random_amplitude(rng)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    if amps.iter().all(|a| a.norm() == 0.0) {
        // Fall back to the first allowed basis state.
        let r = (0..1usize << n)
            .find(|&r| allowed(m_sum(r, n)))
            .unwrap_or(0);
        return PureState::basis(n, r);
    }
    PureState::from_amplitudes(amps)?.normalize()
}

fn non_increasing(curve: &FidelityCurve) -> bool {
    curve.values.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

/// Structural properties of the channel and the monotonicity statements.
pub fn criterion_9() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(9, "property suite");
    let p = BathParams::calibrated();
    let mut rng = StdRng::seed_from_u64(9);

    let (mut trace_err, mut herm_err, mut min_eig, mut comp_err): (f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0);
    for trial in 0..200 {
        let n = 1 + trial % 5;
        let rho = random_density(&mut rng, n)?;
        let t_a = rng.gen_range(0.0..30.0);
        let t_b = t_a + rng.gen_range(0.0..30.0);
        for conv in CompositionConvention::ALL {
            let out_rho = propagate(&rho, t_a, t_b, &p, conv)?;
            trace_err = trace_err.max((out_rho.trace() - rho.trace()).norm());
            herm_err = herm_err.max(out_rho.hermiticity_error());
            min_eig = min_eig.min(out_rho.min_eigenvalue());
        }
        let conv = CompositionConvention::Divisible;
        let direct = propagate(&rho, 0.0, t_b, &p, conv)?;
        let stepped = propagate(&propagate(&rho, 0.0, t_a, &p, conv)?, t_a, t_b, &p, conv)?;
        comp_err = comp_err.max((direct.elements() - stepped.elements()).camax());
    }
    out.check(
        trace_err < 1e-12,
        format!("trace preservation, 200 random states: {trace_err:.1e}"),
    );
    out.check(
        herm_err < 1e-12,
        format!("Hermiticity preservation: {herm_err:.1e}"),
    );
    out.check(
        min_eig >= -1e-10,
        format!("positivity, min eigenvalue: {min_eig:.1e}"),
    );
    out.check(
        comp_err < 1e-12,
        format!("divisible composition: {comp_err:.1e}"),
    );

    let grid = linear_grid(0.0, 50.0, 501);
    let mut equal_m_ok = 0;
    for k in 0..100 {
        let n = 2 + k % 4;
        let m = [0, 2, 4][rng.gen_range(0..=(n / 2).min(2))];
        let m = if (n as i32 - m) % 2 == 0 { m } else { m + 1 };
        let psi = random_supported_state(&mut rng, n, |x| x.abs() == m)?;
        if non_increasing(&fidelity_curve(&psi, &grid, &p)?) {
            equal_m_ok += 1;
        }
    }
    out.check(
        equal_m_ok == 100,
        format!("equal-|M| states non-increasing: {equal_m_ok}/100"),
    );

    let mut failing_ok = 0;
    let mut generated = 0;
    while generated < 100 {
        let n = 1 + rng.gen_range(0..5);
        let target = rng.gen_range(0..=n as i32);
        let psi = random_supported_state(&mut rng, n, |x| x.abs() == target)?;
        if oscillation_condition(&psi, DEFAULT_AMP_TOL).may_oscillate {
            continue;
        }
        generated += 1;
        if non_increasing(&fidelity_curve(&psi, &grid, &p)?) {
            failing_ok += 1;
        }
    }
    out.check(
        failing_ok == 100,
        format!("condition-failing states non-increasing: {failing_ok}/100"),
    );
    Ok(out)
}

/// Simultaneous optimum search on `[1, 20]`.
pub fn criterion_10() -> Result<CriterionOutcome> {
    let mut out = CriterionOutcome::new(10, "scheduler optimum recovery");
    let p = BathParams::calibrated();
    for (kind, t_target, f_target) in [(GateKind::Phase, 15.9, 0.96), (GateKind::Not, 15.7, 0.93)] {
        let g = catalog(kind);
        let r = optimize_schedule(
            &g,
            &g.reference_input,
            ScheduleMode::Simultaneous,
            [1.0, 20.0],
            &p,
            &OptimizeOptions::default(),
        )?;
        let t = r.best_schedule.timing.times()[0];
        let f = r.best_fidelity;
        out.check(
            (t - t_target).abs() <= 0.1 && (f - f_target).abs() <= VALUE_TOL,
            format!("{kind}: best t_gap {t:.4}, fidelity {f:.4}; expected ({t_target} ± 0.1, {f_target} ± {VALUE_TOL})"),
        );
    }
    Ok(out)
}

/// Every criterion in order.
pub fn reproduce_all() -> Result<Vec<CriterionOutcome>> {
    let verdict = criterion_4()?;
    let selected = verdict.selected;
    Ok(vec![
        criterion_1()?,
        criterion_2()?,
        criterion_3()?,
        verdict.outcome,
        criterion_distinct(GateKind::Hadamard, selected)?,
        criterion_distinct(GateKind::Phase, selected)?,
        criterion_7(selected)?,
        criterion_8()?,
        criterion_9()?,
        criterion_10()?,
    ])
}
