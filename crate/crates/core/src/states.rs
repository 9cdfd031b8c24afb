//! The five-qubit chain, its cluster state, and the state left after the
//! first measurement.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::m_sum;
use crate::tensor::{DensityMatrix, PureState, Qubit};
use crate::{Error, Result, ALGEBRA_TOL, C64};

pub const CHAIN_LEN: usize = 5;

/// Default threshold below which an amplitude counts as a structural zero.
pub const DEFAULT_AMP_TOL: f64 = 1e-12;

/// Input qubit `α|0⟩ + β|1⟩` fed into the chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputQubit {
    pub alpha: C64,
    pub beta: C64,
}

impl InputQubit {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - 1.0).abs() > ALGEBRA_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { alpha, beta })
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0))
    }

    pub fn from_named(tag: NamedState) -> Self {
        let [alpha, beta] = tag.vector();
        Self { alpha, beta }
    }

    pub fn ket(&self) -> Qubit {
        [self.alpha, self.beta]
    }

    /// `σ_z|ψ⟩ = α|0⟩ − β|1⟩`.
    pub fn z_flipped(&self) -> Qubit {
        [self.alpha, -self.beta]
    }

    /// `k = (α*β + αβ*)²`, the only input dependence of the cluster fidelity.
    pub fn k_parameter(&self) -> f64 {
        let s = (self.alpha.conj() * self.beta + self.alpha * self.beta.conj()).re;
        s * s
    }
}

/// Standard single-qubit states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedState {
    Zero,
    One,
    Plus,
    Minus,
    PlusY,
    MinusY,
}

impl NamedState {
    pub const ALL: [NamedState; 6] = [
        Self::Zero,
        Self::One,
        Self::Plus,
        Self::Minus,
        Self::PlusY,
        Self::MinusY,
    ];

    pub fn vector(self) -> Qubit {
        let h = FRAC_1_SQRT_2;
        let re = |x: f64| C64::new(x, 0.0);
        match self {
            Self::Zero => [re(1.0), re(0.0)],
            Self::One => [re(0.0), re(1.0)],
            Self::Plus => [re(h), re(h)],
            Self::Minus => [re(h), re(-h)],
            Self::PlusY => [re(h), C64::new(0.0, h)],
            Self::MinusY => [re(h), C64::new(0.0, -h)],
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Ok(match lower.as_str() {
            "zero" | "0" => Self::Zero,
            "one" | "1" => Self::One,
            "plus" | "+" => Self::Plus,
            "minus" | "-" => Self::Minus,
            "plus_y" | "plus-y" | "+y" => Self::PlusY,
            "minus_y" | "minus-y" | "-y" => Self::MinusY,
            _ => return Err(Error::UnknownTag(s.to_string())),
        })
    }
}

/// `|ψ_in⟩₁ ⊗ |+⟩₂ ⊗ |+⟩₃ ⊗ |+⟩₄ ⊗ |+⟩₅`.
pub fn build_chain(q: &InputQubit) -> PureState {
    let plus = NamedState::Plus.vector();
    PureState::product(&[q.ket(), plus, plus, plus, plus]).expect("non-empty product")
}

/// Entangles a five-qubit chain into the linear cluster state.
///
/// Realized as `Z₂Z₃Z₄Z₅ · CZ₁₂CZ₂₃CZ₃₄CZ₄₅`, which is diagonal in the
/// computational basis. On chain inputs it reproduces [`cluster_expansion`]
/// exactly (including the global phase).
pub fn entangle(chain: &PureState) -> Result<PureState> {
    if chain.n_qubits() != CHAIN_LEN {
        return Err(Error::DimensionMismatch {
            expected: 1 << CHAIN_LEN,
            actual: chain.dim(),
        });
    }
    let bit = |r: usize, q: usize| (r >> (CHAIN_LEN - q)) & 1;
    Ok(chain.map_amplitudes(|r, a| {
        let cz = (1..CHAIN_LEN)
            .filter(|&q| bit(r, q) & bit(r, q + 1) == 1)
            .count();
        let z = (2..=CHAIN_LEN).filter(|&q| bit(r, q) == 1).count();
        if (cz + z) % 2 == 1 {
            -a
        } else {
            a
        }
    }))
}

/// The cluster state written out term by term:
///
/// ```text
/// ½[ |ψ⟩|0⟩|−⟩|0⟩|−⟩ − |ψ⟩|0⟩|+⟩|1⟩|+⟩ − |ψ*⟩|1⟩|+⟩|0⟩|−⟩ + |ψ*⟩|1⟩|−⟩|1⟩|+⟩ ]
/// ```
///
/// with `|ψ*⟩ = σ_z|ψ⟩`.
pub fn cluster_expansion(q: &InputQubit) -> PureState {
    use NamedState::*;
    let (z, o, p, m) = (Zero.vector(), One.vector(), Plus.vector(), Minus.vector());
    let terms: [(f64, [Qubit; 5]); 4] = [
        (0.5, [q.ket(), z, m, z, m]),
        (-0.5, [q.ket(), z, p, o, p]),
        (-0.5, [q.z_flipped(), o, p, z, m]),
        (0.5, [q.z_flipped(), o, m, o, p]),
    ];
    sum_of_products(&terms)
}

/// The four-qubit state (qubits 2–5) after qubit 1 of the cluster is found
/// in `|+⟩`, renormalized:
///
/// ```text
/// (α+β)/2 |0⟩|−⟩|0⟩|−⟩ − (α+β)/2 |0⟩|+⟩|1⟩|+⟩ − (α−β)/2 |1⟩|+⟩|0⟩|−⟩ + (α−β)/2 |1⟩|−⟩|1⟩|+⟩
/// ```
pub fn post_first_measurement(q: &InputQubit) -> PureState {
    use NamedState::*;
    let (z, o, p, m) = (Zero.vector(), One.vector(), Plus.vector(), Minus.vector());
    let sum = (q.alpha + q.beta) * 0.5;
    let diff = (q.alpha - q.beta) * 0.5;
    let terms = [
        (sum, [z, m, z, m]),
        (-sum, [z, p, o, p]),
        (-diff, [o, p, z, m]),
        (diff, [o, m, o, p]),
    ];
    let dim = 1 << 4;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (coef, qubits) in terms {
        let term = PureState::product(&qubits).expect("non-empty");
        for (slot, a) in amps.iter_mut().zip(term.amplitudes()) {
            *slot += coef * a;
        }
    }
    PureState::from_amplitudes(amps).expect("16 amplitudes")
}

/// Post-measurement state built by actually measuring qubit 1 of the
/// entangled chain; agrees with [`post_first_measurement`] as a density matrix.
pub fn measured_cluster(q: &InputQubit, axis: &Qubit) -> Result<(DensityMatrix, f64)> {
    let cluster = entangle(&build_chain(q))?;
    DensityMatrix::outer(&cluster).project_and_renormalize(1, axis)
}

fn sum_of_products<const N: usize>(terms: &[(f64, [Qubit; N])]) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << N];
    for (coef, qubits) in terms {
        let term = PureState::product(qubits).expect("non-empty");
        for (slot, a) in amps.iter_mut().zip(term.amplitudes()) {
            *slot += a * *coef;
        }
    }
    PureState::from_amplitudes(amps).expect("power-of-two length")
}

/// The distinct `|M|` values in a state's support and whether they permit
/// non-monotonic fidelity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscillationVerdict {
    pub abs_m_values: BTreeSet<u32>,
    pub may_oscillate: bool,
}

/// Necessary condition for an oscillating fidelity: the support must span
/// at least two different `|M|`.
pub fn oscillation_condition(psi: &PureState, amp_tol: f64) -> OscillationVerdict {
    let n = psi.n_qubits();
    let abs_m_values: BTreeSet<u32> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > amp_tol)
        .map(|(r, _)| m_sum(r, n).unsigned_abs())
        .collect();
    OscillationVerdict {
        may_oscillate: abs_m_values.len() >= 2,
        abs_m_values,
    }
}
