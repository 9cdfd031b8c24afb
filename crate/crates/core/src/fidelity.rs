//! Fidelity dynamics `F(t) = Tr[ρ(0) ρ(t)]` for pure initial states.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bath::BathParams;
use crate::channel::{propagate, CompositionConvention};
use crate::states::InputQubit;
use crate::tensor::{DensityMatrix, PureState};
use crate::{Error, Result};

/// Sampled fidelity values on a nondecreasing time grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityCurve {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl FidelityCurve {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: times.len(),
                actual: values.len(),
            });
        }
        check_grid(&times)?;
        Ok(Self { times, values })
    }

    /// Evaluates `f` at every grid point.
    pub fn sample(times: &[f64], f: impl FnMut(f64) -> Result<f64>) -> Result<Self> {
        check_grid(times)?;
        let values = times.iter().copied().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            times: times.to_vec(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with header `t,fidelity`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,fidelity\n");
        for (t, f) in self.times.iter().zip(&self.values) {
            let _ = writeln!(out, "{t:.16e},{f:.16e}");
        }
        out
    }
}

pub(crate) fn check_grid(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Domain(
            "time grid must be finite and nonnegative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("time grid must be nondecreasing".into()));
    }
    Ok(())
}

/// `n` evenly spaced points covering `[start, end]` (both ends included
/// when `n ≥ 2`).
pub fn linear_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n).map(|k| start + step * k as f64).collect()
        }
    }
}

/// `F(t) = Tr[ρ₀ · propagate(ρ₀, 0, t)]`.
pub fn fidelity_at(psi0: &PureState, t: f64, p: &BathParams) -> Result<f64> {
    let rho0 = DensityMatrix::outer(psi0);
    fidelity_of_density(&rho0, t, p)
}

fn fidelity_of_density(rho0: &DensityMatrix, t: f64, p: &BathParams) -> Result<f64> {
    let rho_t = propagate(rho0, 0.0, t, p, CompositionConvention::Divisible)?;
    Ok(rho0.trace_product(&rho_t)?.re)
}

pub fn fidelity_curve(psi0: &PureState, t_grid: &[f64], p: &BathParams) -> Result<FidelityCurve> {
    let rho0 = DensityMatrix::outer(psi0);
    FidelityCurve::sample(t_grid, |t| fidelity_of_density(&rho0, t, p))
}

/// `½ + ½ e^{−4Γ} cos 4Θ`: fidelity of `|1⟩ ⊗ |+⟩`.
pub fn closed_form_two_qubit(t: f64, p: &BathParams) -> f64 {
    let f = p.factors(t);
    0.5 + 0.5 * (-4.0 * f.gamma).exp() * (4.0 * f.theta).cos()
}

/// Closed-form fidelity of the four-qubit post-measurement cluster state,
/// with `k = (α*β + αβ*)²`.
pub fn closed_form_cluster(q: &InputQubit, t: f64, p: &BathParams) -> f64 {
    let k = q.k_parameter();
    let f = p.factors(t);
    let e = |m: f64| (-m * f.gamma).exp();
    let c = |m: f64| (m * f.theta).cos();
    3.0 / 32.0 * e(16.0) * c(16.0)
        + 3.0 / 8.0 * e(4.0) * c(4.0)
        + (1.0 / 16.0 - k / 32.0) * e(36.0) * c(12.0)
        + (1.0 / 16.0 + k / 32.0) * e(4.0) * c(12.0)
        + (1.0 / 128.0 - k / 128.0) * e(64.0)
        + (1.0 / 8.0 - k / 32.0) * e(16.0)
        + 5.0 * k / 128.0
        + 35.0 / 128.0
}
