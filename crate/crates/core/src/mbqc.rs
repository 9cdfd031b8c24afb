//! One-way single-qubit gates on the five-qubit cluster under collective
//! dephasing.
//!
//! Qubit 1 is measured in `|±⟩` at `t = 0`. Qubits 2, 3 and 4 are then
//! measured according to a [`MeasurementSchedule`], the register dephasing
//! between measurements, and the gate output is read off qubit 5.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bath::BathParams;
use crate::channel::{propagate, CompositionConvention};
use crate::fidelity::{check_grid, FidelityCurve};
use crate::states::{build_chain, entangle, measured_cluster, InputQubit, NamedState};
use crate::tensor::{overlap, DensityMatrix, PureState, Qubit};
use crate::{Error, Result, C64};

/// `B(φ) = {(|0⟩ + e^{iφ}|1⟩)/√2, (|0⟩ − e^{iφ}|1⟩)/√2}`, "up" first.
pub fn measurement_basis(phi: f64) -> (Qubit, Qubit) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let e = C64::from_polar(h, phi);
    ([C64::new(h, 0.0), e], [C64::new(h, 0.0), -e])
}

/// The orthogonal partner of an equatorial "up" vector.
fn down_of(up: &Qubit) -> Qubit {
    [up[0], -up[1]]
}

pub type Unitary2 = [[C64; 2]; 2];

fn apply(u: &Unitary2, v: &Qubit) -> Qubit {
    [
        u[0][0] * v[0] + u[0][1] * v[1],
        u[1][0] * v[0] + u[1][1] * v[1],
    ]
}

fn matmul(a: &Unitary2, b: &Unitary2) -> Unitary2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// `exp(−iφσ_x/2)`.
pub fn rotation_x(phi: f64) -> Unitary2 {
    let (s, c) = (0.5 * phi).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

/// `exp(−iφσ_z/2)`.
pub fn rotation_z(phi: f64) -> Unitary2 {
    let zero = C64::new(0.0, 0.0);
    [
        [C64::from_polar(1.0, -0.5 * phi), zero],
        [zero, C64::from_polar(1.0, 0.5 * phi)],
    ]
}

/// Largest entry of `U†U − 𝟙`.
pub fn unitarity_error(u: &Unitary2) -> f64 {
    let adj = [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ];
    let p = matmul(&adj, u);
    let mut err: f64 = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            err = err.max((z - C64::new(id, 0.0)).norm());
        }
    }
    err
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Not,
    Hadamard,
    Phase,
    Euler,
}

impl GateKind {
    pub const CATALOG: [GateKind; 3] = [Self::Not, Self::Hadamard, Self::Phase];
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Not => "NOT",
            Self::Hadamard => "HADAMARD",
            Self::Phase => "PHASE",
            Self::Euler => "EULER",
        })
    }
}

impl FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "not" | "x" => Ok(Self::Not),
            "hadamard" | "h" => Ok(Self::Hadamard),
            "phase" | "s" => Ok(Self::Phase),
            "euler" => Ok(Self::Euler),
            _ => Err(Error::UnknownGate(s.to_string())),
        }
    }
}

/// A single-qubit gate as a set of measurement bases on qubits 2–4.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    pub kind: GateKind,
    /// `(φ₂, φ₃, φ₄)` of the bases `B_j(φ_j)`.
    pub basis_angles: [f64; 3],
    /// "Up" projector vectors for qubits 2, 3, 4.
    pub up: [Qubit; 3],
    pub ideal_unitary: Unitary2,
    pub reference_input: InputQubit,
}

impl GateSpec {
    /// Catalog gate with its explicit projectors.
    pub fn catalog(kind: GateKind) -> Result<Self> {
        use std::f64::consts::FRAC_PI_2 as HALF_PI;
        use NamedState::*;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let re = |x: f64| C64::new(x, 0.0);
        let (angles, up, unitary, input) = match kind {
            GateKind::Not => (
                [std::f64::consts::PI, 0.0, 0.0],
                [Minus, Plus, Plus],
                [[re(0.0), re(1.0)], [re(1.0), re(0.0)]],
                Zero,
            ),
            GateKind::Hadamard => (
                [-HALF_PI, HALF_PI, 0.0],
                [MinusY, PlusY, Plus],
                // These projectors realize H·S†, which agrees with H on |0⟩ and |1⟩.
                [[re(h), C64::new(0.0, -h)], [re(h), C64::new(0.0, h)]],
                Zero,
            ),
            GateKind::Phase => (
                [0.0, HALF_PI, 0.0],
                [Plus, PlusY, Plus],
                [[re(1.0), re(0.0)], [re(0.0), C64::new(0.0, 1.0)]],
                Plus,
            ),
            GateKind::Euler => {
                return Err(Error::UnknownGate(
                    "EULER needs angles; use GateSpec::euler".into(),
                ))
            }
        };
        Ok(Self {
            kind,
            basis_angles: angles,
            up: up.map(NamedState::vector),
            ideal_unitary: unitary,
            reference_input: InputQubit::from_named(input),
        })
    }

    /// `U(ξ, η, ζ) = U_x(ζ) U_z(η) U_x(ξ)`, measured in `B₂(−ξ)`, `B₃(η)`, `B₄(ζ)`.
    pub fn euler(xi: f64, eta: f64, zeta: f64) -> Self {
        let angles = [-xi, eta, zeta];
        Self {
            kind: GateKind::Euler,
            basis_angles: angles,
            up: angles.map(|phi| measurement_basis(phi).0),
            ideal_unitary: matmul(
                &rotation_x(zeta),
                &matmul(&rotation_z(eta), &rotation_x(xi)),
            ),
            reference_input: InputQubit::from_named(NamedState::Zero),
        }
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }
}

/// Looks up a catalog gate by name.
pub fn gate_catalog(name: &str) -> Result<GateSpec> {
    GateSpec::catalog(name.parse()?)
}

pub fn ideal_output(g: &GateSpec, q: &InputQubit) -> PureState {
    PureState::single(apply(&g.ideal_unitary, &q.ket()))
}

/// Outcome of one projective measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Up,
    Down,
}

/// Outcomes for qubits 1–4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutcomeBranch(pub [Outcome; 4]);

impl OutcomeBranch {
    pub const ALL_UP: Self = Self([Outcome::Up; 4]);

    pub fn all() -> impl Iterator<Item = Self> {
        (0..16u8).map(|bits| {
            Self(std::array::from_fn(|k| {
                if (bits >> (3 - k)) & 1 == 1 {
                    Outcome::Down
                } else {
                    Outcome::Up
                }
            }))
        })
    }
}

impl Default for OutcomeBranch {
    fn default() -> Self {
        Self::ALL_UP
    }
}

impl fmt::Display for OutcomeBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in self.0 {
            f.write_str(if o == Outcome::Up { "u" } else { "d" })?;
        }
        Ok(())
    }
}

impl FromStr for OutcomeBranch {
    type Err = Error;

    /// Four characters from `u`/`d` (or `0`/`1`), qubit 1 first.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 4 {
            return Err(Error::InvalidSchedule(format!(
                "branch `{s}` must have 4 outcomes"
            )));
        }
        let mut out = [Outcome::Up; 4];
        for (slot, c) in out.iter_mut().zip(chars) {
            *slot = match c.to_ascii_lowercase() {
                'u' | '0' | '+' => Outcome::Up,
                'd' | '1' | '-' => Outcome::Down,
                _ => {
                    return Err(Error::InvalidSchedule(format!(
                        "bad outcome `{c}` in `{s}`"
                    )))
                }
            };
        }
        Ok(Self(out))
    }
}

impl Serialize for OutcomeBranch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OutcomeBranch {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What happens to a qubit once it has been measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasuredQubits {
    /// Traced out of the register (it no longer dephases with the rest).
    #[default]
    Remove,
    /// Kept, projected, in the register so it still contributes to `M`.
    Retain,
}

impl FromStr for MeasuredQubits {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "remove" => Ok(Self::Remove),
            "retain" => Ok(Self::Retain),
            _ => Err(Error::Domain(format!(
                "unknown measured-qubit handling `{s}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Timing {
    /// `Π₂` at `t₁`, `Π₃` at `t₂`, `Π₄` at `t₃`.
    DistinctTimes { times: [f64; 3] },
    /// Wait `t_gap`, then measure qubits 2–4 back to back.
    Simultaneous { t_gap: f64 },
}

impl Timing {
    pub fn times(&self) -> [f64; 3] {
        match *self {
            Timing::DistinctTimes { times } => times,
            Timing::Simultaneous { t_gap } => [t_gap; 3],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSchedule {
    #[serde(flatten)]
    pub timing: Timing,
    #[serde(default)]
    pub outcome_branch: OutcomeBranch,
    #[serde(default)]
    pub convention: CompositionConvention,
    #[serde(default)]
    pub measured_qubits: MeasuredQubits,
}

impl MeasurementSchedule {
    pub fn distinct(t1: f64, t2: f64, t3: f64) -> Self {
        Self::with_timing(Timing::DistinctTimes {
            times: [t1, t2, t3],
        })
    }

    pub fn simultaneous(t_gap: f64) -> Self {
        Self::with_timing(Timing::Simultaneous { t_gap })
    }

    pub fn with_timing(timing: Timing) -> Self {
        Self {
            timing,
            outcome_branch: OutcomeBranch::ALL_UP,
            convention: CompositionConvention::default(),
            measured_qubits: MeasuredQubits::default(),
        }
    }

    pub fn convention(mut self, conv: CompositionConvention) -> Self {
        self.convention = conv;
        self
    }

    pub fn measured(mut self, m: MeasuredQubits) -> Self {
        self.measured_qubits = m;
        self
    }

    pub fn branch(mut self, b: OutcomeBranch) -> Self {
        self.outcome_branch = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.timing.times();
        if t.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidSchedule(format!(
                "times must be finite and >= 0: {t:?}"
            )));
        }
        if t[0] > t[1] || t[1] > t[2] {
            return Err(Error::InvalidSchedule(format!(
                "times must be ordered: {t:?}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateRunResult {
    /// Reduced state of qubit 5.
    pub output_qubit_state: DensityMatrix,
    /// Probability of the selected branch, including qubit 1.
    pub branch_probability: f64,
    pub gate_fidelity: f64,
}

/// Runs the measurement sequence and compares qubit 5 with the ideal output.
pub fn run_gate(
    g: &GateSpec,
    q: &InputQubit,
    s: &MeasurementSchedule,
    p: &BathParams,
) -> Result<GateRunResult> {
    s.validate()?;
    let axis = |k: usize, up: &Qubit| match s.outcome_branch.0[k] {
        Outcome::Up => *up,
        Outcome::Down => down_of(up),
    };
    let first = axis(0, &NamedState::Plus.vector());
    let times = s.timing.times();

    let (output, probability) = match s.measured_qubits {
        MeasuredQubits::Remove => {
            let (mut rho, mut prob) = measured_cluster(q, &first)?;
            let mut now = 0.0;
            for (k, &t) in times.iter().enumerate() {
                rho = propagate(&rho, now, t, p, s.convention)?;
                now = t;
                // The next unmeasured qubit is always first in the register.
                let (next, pk) = rho.project_and_renormalize(1, &axis(k + 1, &g.up[k]))?;
                rho = next;
                prob *= pk;
            }
            (rho, prob)
        }
        MeasuredQubits::Retain => {
            let cluster = DensityMatrix::outer(&entangle(&build_chain(q))?);
            let (mut rho, mut prob) = cluster.project_in_place(1, &first)?;
            let mut now = 0.0;
            for (k, &t) in times.iter().enumerate() {
                rho = propagate(&rho, now, t, p, s.convention)?;
                now = t;
                let (next, pk) = rho.project_in_place(k + 2, &axis(k + 1, &g.up[k]))?;
                rho = next;
                prob *= pk;
            }
            (rho.partial_trace(&[5])?, prob)
        }
    };
    let gate_fidelity = overlap(&output, &ideal_output(g, q))?;
    Ok(GateRunResult {
        output_qubit_state: output,
        branch_probability: probability,
        gate_fidelity,
    })
}

/// Pauli matrices `I, X, Y, Z`.
pub fn paulis() -> [Unitary2; 4] {
    let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    [
        [[l, o], [o, l]],
        [[o, l], [l, o]],
        [[o, -i], [i, o]],
        [[l, o], [o, -l]],
    ]
}

/// Index into [`paulis`] of the byproduct that turns the noiseless output of
/// `branch` into the ideal output, for every probe input. `None` when no
/// Pauli does, as for non-Clifford angles without feed-forward.
pub fn byproduct(g: &GateSpec, branch: OutcomeBranch) -> Result<Option<usize>> {
    let probes =
        [NamedState::Zero, NamedState::Plus, NamedState::PlusY].map(InputQubit::from_named);
    let s = MeasurementSchedule::simultaneous(0.0).branch(branch);
    let mut outputs = Vec::with_capacity(probes.len());
    for q in &probes {
        outputs.push(run_gate(g, q, &s, &BathParams::calibrated())?.output_qubit_state);
    }
    for (k, pauli) in paulis().iter().enumerate() {
        let mut fits = true;
        for (q, rho) in probes.iter().zip(&outputs) {
            let target = PureState::single(apply(pauli, &apply(&g.ideal_unitary, &q.ket())));
            fits &= overlap(rho, &target)? > 1.0 - 1e-9;
        }
        if fits {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Gate fidelity averaged over all sixteen outcome branches, each weighted
/// by its probability and corrected by its Pauli byproduct. `outcome_branch`
/// of `s` is ignored.
pub fn branch_averaged_fidelity(
    g: &GateSpec,
    q: &InputQubit,
    s: &MeasurementSchedule,
    p: &BathParams,
) -> Result<f64> {
    let ideal = apply(&g.ideal_unitary, &q.ket());
    let mut total = 0.0;
    for branch in OutcomeBranch::all() {
        let k = byproduct(g, branch)?.ok_or_else(|| {
            Error::Domain(format!(
                "{} has no Pauli byproduct for branch {branch}",
                g.name()
            ))
        })?;
        let r = match run_gate(g, q, &s.branch(branch), p) {
            Ok(r) => r,
            Err(Error::BranchImpossible { .. }) => continue,
            Err(e) => return Err(e),
        };
        let target = PureState::single(apply(&paulis()[k], &ideal));
        total += r.branch_probability * overlap(&r.output_qubit_state, &target)?;
    }
    Ok(total)
}

/// How a single sweep variable `t` maps onto a schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepMode {
    /// `t_gap = t`.
    Simultaneous,
    /// `(t − δ, t, t + δ)`, with the first time clamped at 0.
    DistinctTimes { delta: f64 },
}

impl SweepMode {
    pub fn timing_at(&self, t: f64) -> Timing {
        match *self {
            SweepMode::Simultaneous => Timing::Simultaneous { t_gap: t },
            SweepMode::DistinctTimes { delta } => Timing::DistinctTimes {
                times: [(t - delta).max(0.0), t, t + delta],
            },
        }
    }
}

/// Measurement conventions shared by every point of a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub composition: CompositionConvention,
    pub measured_qubits: MeasuredQubits,
}

impl Conventions {
    pub fn schedule(&self, timing: Timing) -> MeasurementSchedule {
        MeasurementSchedule::with_timing(timing)
            .convention(self.composition)
            .measured(self.measured_qubits)
    }
}

/// Gate fidelity as a function of the sweep variable.
pub fn gate_fidelity_curve(
    g: &GateSpec,
    q: &InputQubit,
    mode: SweepMode,
    t_grid: &[f64],
    p: &BathParams,
    conv: Conventions,
) -> Result<FidelityCurve> {
    check_grid(t_grid)?;
    FidelityCurve::sample(t_grid, |t| {
        Ok(run_gate(g, q, &conv.schedule(mode.timing_at(t)), p)?.gate_fidelity)
    })
}

/// JSON view of a gate run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateRunReport {
    pub gate: String,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    pub schedule: MeasurementSchedule,
    pub convention: CompositionConvention,
    pub branch_probability: f64,
    pub gate_fidelity: f64,
    /// Dominant eigenvector of the output density matrix, phase-fixed so the
    /// first nonzero amplitude is real and positive.
    pub output_state: [[f64; 2]; 2],
    /// Full output density matrix, row major.
    pub output_density_matrix: [[[f64; 2]; 2]; 2],
    pub output_purity: f64,
}

impl GateRunReport {
    pub fn new(g: &GateSpec, q: &InputQubit, s: &MeasurementSchedule, r: &GateRunResult) -> Self {
        let rho = r.output_qubit_state.elements();
        let pair = |z: C64| [z.re, z.im];
        let eig = (rho + rho.adjoint()).unscale(2.0).symmetric_eigen();
        let top = eig
            .eigenvalues
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let mut v = [eig.eigenvectors[(0, top)], eig.eigenvectors[(1, top)]];
        let pivot = if v[0].norm() > 1e-12 { v[0] } else { v[1] };
        let phase = pivot.conj() / pivot.norm();
        v = v.map(|z| z * phase);
        let purity = r
            .output_qubit_state
            .trace_product(&r.output_qubit_state)
            .map(|z| z.re)
            .unwrap_or(f64::NAN);
        Self {
            gate: g.name(),
            alpha: pair(q.alpha),
            beta: pair(q.beta),
            schedule: *s,
            convention: s.convention,
            branch_probability: r.branch_probability,
            gate_fidelity: r.gate_fidelity,
            output_state: v.map(pair),
            output_density_matrix: [
                [pair(rho[(0, 0)]), pair(rho[(0, 1)])],
                [pair(rho[(1, 0)]), pair(rho[(1, 1)])],
            ],
            output_purity: purity,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::PureState;
    use rand::{rngs::StdRng, Rng, SeedableRng};
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn same_ray(a: &PureState, b: &PureState) -> bool {
        (a.inner(b).unwrap().norm() - 1.0).abs() < TOL
    }

    #[test]
    fn catalog_gates_are_exact_for_every_named_input() {
        let p = BathParams::calibrated();
        let s = MeasurementSchedule::simultaneous(0.0);
        for kind in [GateKind::Not, GateKind::Hadamard, GateKind::Phase] {
            let g = GateSpec::catalog(kind).unwrap();
            for tag in NamedState::ALL {
                let f = run_gate(&g, &InputQubit::from_named(tag), &s, &p)
                    .unwrap()
                    .gate_fidelity;
                assert!((f - 1.0).abs() < 1e-12, "{kind} {tag:?}: {f}");
            }
        }
    }

    #[test]
    fn catalog_byproducts_are_paulis() {
        for kind in [GateKind::Not, GateKind::Hadamard, GateKind::Phase] {
            let g = GateSpec::catalog(kind).unwrap();
            assert_eq!(byproduct(&g, OutcomeBranch::ALL_UP).unwrap(), Some(0));
            for b in OutcomeBranch::all() {
                assert!(byproduct(&g, b).unwrap().is_some(), "{kind} {b}");
            }
        }
    }

    #[test]
    fn branch_average_is_one_at_zero_time_and_a_fidelity_later() {
        let p = BathParams::calibrated();
        for kind in [GateKind::Not, GateKind::Hadamard, GateKind::Phase] {
            let g = GateSpec::catalog(kind).unwrap();
            let q = g.reference_input;
            let zero =
                branch_averaged_fidelity(&g, &q, &MeasurementSchedule::simultaneous(0.0), &p)
                    .unwrap();
            assert!((zero - 1.0).abs() < 1e-10);
            let f = branch_averaged_fidelity(
                &g,
                &q,
                &MeasurementSchedule::distinct(6.0, 8.0, 10.0),
                &p,
            )
            .unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&f));
        }
    }

    #[test]
    fn branch_probabilities_sum_to_one() {
        let g = GateSpec::catalog(GateKind::Hadamard).unwrap();
        let p = BathParams::calibrated();
        let s = MeasurementSchedule::distinct(3.0, 9.0, 20.0);
        let total: f64 = OutcomeBranch::all()
            .map(|b| {
                run_gate(&g, &g.reference_input, &s.branch(b), &p)
                    .unwrap()
                    .branch_probability
            })
            .sum();
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn basis_examples() {
        let (up, down) = measurement_basis(0.0);
        assert_eq!(up, NamedState::Plus.vector());
        assert_eq!(down, NamedState::Minus.vector());
        let (up, down) = measurement_basis(PI / 2.0);
        for (a, b) in up.iter().zip(NamedState::PlusY.vector()) {
            assert!((a - b).norm() < TOL);
        }
        for (a, b) in down.iter().zip(NamedState::MinusY.vector()) {
            assert!((a - b).norm() < TOL);
        }
        let mut rng = StdRng::seed_from_u64(2);
        for _ in 0..100 {
            let (u, d) = measurement_basis(rng.gen_range(-10.0..10.0));
            let dot = u[0].conj() * d[0] + u[1].conj() * d[1];
            assert!(dot.norm() < TOL);
            assert!((u[0].norm_sqr() + u[1].norm_sqr() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn catalog_projectors_and_targets() {
        use NamedState::*;
        let cases = [
            (
                GateKind::Not,
                [Minus, Plus, Plus],
                Zero,
                PureState::single(One.vector()),
            ),
            (
                GateKind::Hadamard,
                [MinusY, PlusY, Plus],
                Zero,
                PureState::single(Plus.vector()),
            ),
            (
                GateKind::Phase,
                [Plus, PlusY, Plus],
                Plus,
                PureState::single(PlusY.vector()),
            ),
        ];
        for (kind, ups, input, target) in cases {
            let g = GateSpec::catalog(kind).unwrap();
            assert_eq!(g.up, ups.map(NamedState::vector));
            assert!(unitarity_error(&g.ideal_unitary) < TOL);
            assert_eq!(g.reference_input, InputQubit::from_named(input));
            assert!(same_ray(&ideal_output(&g, &g.reference_input), &target));
            // Basis angles reproduce the projectors.
            for (phi, up) in g.basis_angles.iter().zip(g.up) {
                let (b, _) = measurement_basis(*phi);
                assert!((b[0] - up[0]).norm() < TOL && (b[1] - up[1]).norm() < TOL);
            }
        }
        assert!(matches!(gate_catalog("cnot"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn zero_time_gates_are_perfect() {
        let p = BathParams::calibrated();
        for kind in GateKind::CATALOG {
            let g = GateSpec::catalog(kind).unwrap();
            for measured in [MeasuredQubits::Remove, MeasuredQubits::Retain] {
                let s = MeasurementSchedule::distinct(0.0, 0.0, 0.0).measured(measured);
                let r = run_gate(&g, &g.reference_input, &s, &p).unwrap();
                assert!((r.gate_fidelity - 1.0).abs() < TOL, "{kind} {measured:?}");
                assert!((r.branch_probability - 1.0 / 16.0).abs() < TOL);
            }
        }
    }

    #[test]
    fn every_branch_has_probability_one_sixteenth_at_zero_time() {
        let p = BathParams::calibrated();
        for kind in GateKind::CATALOG {
            let g = GateSpec::catalog(kind).unwrap();
            let mut total = 0.0;
            for b in OutcomeBranch::all() {
                let s = MeasurementSchedule::simultaneous(0.0).branch(b);
                let r = run_gate(&g, &g.reference_input, &s, &p).unwrap();
                assert!((r.branch_probability - 1.0 / 16.0).abs() < TOL);
                assert!((r.output_qubit_state.trace().re - 1.0).abs() < TOL);
                total += r.branch_probability;
            }
            assert!((total - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn euler_angles_implement_rotation() {
        let p = BathParams::calibrated();
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..20 {
            let g = GateSpec::euler(
                rng.gen_range(-PI..PI),
                rng.gen_range(-PI..PI),
                rng.gen_range(-PI..PI),
            );
            assert!(unitarity_error(&g.ideal_unitary) < TOL);
            let a = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let b = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let q = InputQubit::new(a / n, b / n).unwrap();
            let r = run_gate(&g, &q, &MeasurementSchedule::simultaneous(0.0), &p).unwrap();
            assert!((r.gate_fidelity - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn distinct_equal_times_match_simultaneous() {
        let p = BathParams::calibrated();
        for kind in GateKind::CATALOG {
            let g = GateSpec::catalog(kind).unwrap();
            for conv in CompositionConvention::ALL {
                for t in [0.8, 7.3, 15.7] {
                    let a = run_gate(
                        &g,
                        &g.reference_input,
                        &MeasurementSchedule::simultaneous(t).convention(conv),
                        &p,
                    )
                    .unwrap();
                    let b = run_gate(
                        &g,
                        &g.reference_input,
                        &MeasurementSchedule::distinct(t, t, t).convention(conv),
                        &p,
                    )
                    .unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn reference_values_reproduced() {
        let p = BathParams::calibrated();
        let not = GateSpec::catalog(GateKind::Not).unwrap();
        let r = run_gate(
            &not,
            &not.reference_input,
            &MeasurementSchedule::distinct(15.5, 15.7, 15.9),
            &p,
        )
        .unwrap();
        assert!((r.gate_fidelity - 0.90).abs() < 0.03, "{}", r.gate_fidelity);
        let phase = GateSpec::catalog(GateKind::Phase).unwrap();
        let r = run_gate(
            &phase,
            &phase.reference_input,
            &MeasurementSchedule::simultaneous(15.9),
            &p,
        )
        .unwrap();
        assert!((r.gate_fidelity - 0.96).abs() < 0.03, "{}", r.gate_fidelity);
        let r = run_gate(
            &phase,
            &phase.reference_input,
            &MeasurementSchedule::distinct(7.8, 23.4, 39.0),
            &p,
        )
        .unwrap();
        assert!((r.gate_fidelity - 0.46).abs() < 0.03, "{}", r.gate_fidelity);
    }

    #[test]
    fn schedule_validation() {
        let p = BathParams::calibrated();
        let g = GateSpec::catalog(GateKind::Not).unwrap();
        for s in [
            MeasurementSchedule::distinct(2.0, 1.0, 3.0),
            MeasurementSchedule::distinct(-1.0, 1.0, 3.0),
            MeasurementSchedule::simultaneous(f64::NAN),
        ] {
            assert!(matches!(
                run_gate(&g, &g.reference_input, &s, &p),
                Err(Error::InvalidSchedule(_))
            ));
        }
    }

    #[test]
    fn impossible_branch_is_reported() {
        // For input |+⟩ the register is the standard cluster, stabilized by
        // X₁Z₂. After finding qubit 1 in |+⟩, qubit 2 is certainly |0⟩.
        let p = BathParams::calibrated();
        let mut g = GateSpec::catalog(GateKind::Not).unwrap();
        g.up[0] = NamedState::One.vector();
        let input = InputQubit::from_named(NamedState::Plus);
        for measured in [MeasuredQubits::Remove, MeasuredQubits::Retain] {
            let s = MeasurementSchedule::distinct(0.0, 3.0, 5.0).measured(measured);
            let err = run_gate(&g, &input, &s, &p).unwrap_err();
            assert!(matches!(err, Error::BranchImpossible { .. }), "{err:?}");
        }
    }

    #[test]
    fn report_json_shape() {
        let p = BathParams::calibrated();
        let g = GateSpec::catalog(GateKind::Phase).unwrap();
        let s = MeasurementSchedule::simultaneous(15.9);
        let r = run_gate(&g, &g.reference_input, &s, &p).unwrap();
        let v = serde_json::to_value(GateRunReport::new(&g, &g.reference_input, &s, &r)).unwrap();
        for key in [
            "gate",
            "alpha",
            "beta",
            "schedule",
            "convention",
            "branch_probability",
            "gate_fidelity",
            "output_state",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["gate"], "PHASE");
        assert_eq!(v["convention"], "divisible");
        assert_eq!(v["schedule"]["mode"], "simultaneous");
        assert_eq!(v["schedule"]["outcome_branch"], "uuuu");
        assert_eq!(v["output_state"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn schedule_json_round_trip() {
        let s = MeasurementSchedule::distinct(1.0, 2.0, 3.0)
            .convention(CompositionConvention::FreshBath)
            .branch("udud".parse().unwrap());
        let back: MeasurementSchedule =
            serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn simultaneous_curve_is_continuous() {
        let p = BathParams::calibrated();
        let grid: Vec<f64> = (0..=5000).map(|k| k as f64 * 0.01).collect();
        for kind in GateKind::CATALOG {
            let g = GateSpec::catalog(kind).unwrap();
            let c = gate_fidelity_curve(
                &g,
                &g.reference_input,
                SweepMode::Simultaneous,
                &grid,
                &p,
                Conventions::default(),
            )
            .unwrap();
            assert!((c.values[0] - 1.0).abs() < TOL);
            for w in c.values.windows(2) {
                assert!((w[1] - w[0]).abs() < 0.02);
            }
            assert!(c.values.iter().all(|v| (-TOL..=1.0 + TOL).contains(v)));
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let p = BathParams::calibrated();
        let g = GateSpec::catalog(GateKind::Hadamard).unwrap();
        let s = MeasurementSchedule::distinct(3.0, 9.0, 21.5).measured(MeasuredQubits::Retain);
        let a = run_gate(&g, &g.reference_input, &s, &p).unwrap();
        let b = run_gate(&g, &g.reference_input, &s, &p).unwrap();
        assert_eq!(a.gate_fidelity.to_bits(), b.gate_fidelity.to_bits());
        assert_eq!(a, b);
    }
}
