//! The exact collective-dephasing map.
//!
//! With `M(r)` the total `σ_z` eigenvalue of basis state `r`, the reduced
//! density matrix evolves elementwise as
//!
//! ```text
//! ρ_rc(t) = exp{−Γ(t)·(M_r − M_c)²} · exp{iΘ(t)·(M_r² − M_c²)} · ρ_rc(0)
//! ```
//!
//! in the interaction picture. Populations never change.

use serde::{Deserialize, Serialize};

use crate::bath::{BathParams, DephasingFactors};
use crate::tensor::DensityMatrix;
use crate::{Error, Result, C64};

/// `M = n − 2·popcount(index)`.
pub fn m_sum(basis_index: usize, n_qubits: usize) -> i32 {
    n_qubits as i32 - 2 * basis_index.count_ones() as i32
}

/// `exp{−γ(m_r − m_c)²} · exp{iθ(m_r² − m_c²)}`.
pub fn channel_eigenfactor(m_r: i32, m_c: i32, f: DephasingFactors) -> C64 {
    if m_r == m_c {
        return C64::new(1.0, 0.0);
    }
    let d = f64::from(m_r - m_c);
    let s = f64::from(m_r * m_r - m_c * m_c);
    C64::from_polar((-f.gamma * d * d).exp(), f.theta * s)
}

/// How `(Γ, Θ)` are assigned to an interval `[t_a, t_b]` that does not start at 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompositionConvention {
    /// Increments `Γ(t_b) − Γ(t_a)`, `Θ(t_b) − Θ(t_a)`.
    #[default]
    Divisible,
    /// The bath restarts at `t_a`: `Γ(t_b − t_a)`, `Θ(t_b − t_a)`.
    FreshBath,
}

impl CompositionConvention {
    pub const ALL: [CompositionConvention; 2] = [Self::Divisible, Self::FreshBath];

    pub fn name(self) -> &'static str {
        match self {
            Self::Divisible => "divisible",
            Self::FreshBath => "fresh-bath",
        }
    }
}

impl std::str::FromStr for CompositionConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "divisible" => Ok(Self::Divisible),
            "fresh-bath" | "fresh" => Ok(Self::FreshBath),
            other => Err(Error::Domain(format!(
                "unknown composition convention `{other}`"
            ))),
        }
    }
}

/// Factors for the interval `[t_a, t_b]` under `conv`.
pub fn interval_factors(
    p: &BathParams,
    t_a: f64,
    t_b: f64,
    conv: CompositionConvention,
) -> Result<DephasingFactors> {
    if !(t_a >= 0.0 && t_b >= t_a && t_b.is_finite()) {
        return Err(Error::Domain(format!(
            "interval [{t_a}, {t_b}] must satisfy 0 <= t_a <= t_b"
        )));
    }
    if t_a == t_b {
        return Ok(DephasingFactors::default());
    }
    Ok(match conv {
        CompositionConvention::Divisible => {
            let (a, b) = (p.factors(t_a), p.factors(t_b));
            DephasingFactors {
                gamma: b.gamma - a.gamma,
                theta: b.theta - a.theta,
            }
        }
        CompositionConvention::FreshBath => p.factors(t_b - t_a),
    })
}

/// Multiplies every element by its channel factor.
pub fn apply_factors(rho: &DensityMatrix, f: DephasingFactors) -> DensityMatrix {
    let n = rho.n_qubits();
    // At most 2n + 1 distinct M values; cache the factor table.
    let offset = n as i32;
    let width = 2 * n + 1;
    let mut table = vec![C64::new(0.0, 0.0); width * width];
    for (i, slot) in table.iter_mut().enumerate() {
        let m_r = (i / width) as i32 - offset;
        let m_c = (i % width) as i32 - offset;
        *slot = channel_eigenfactor(m_r, m_c, f);
    }
    let ms: Vec<usize> = (0..rho.dim())
        .map(|r| (m_sum(r, n) + offset) as usize)
        .collect();
    rho.map_elements(|r, c, z| z * table[ms[r] * width + ms[c]])
}

/// Evolves `rho` from `t_a` to `t_b`.
pub fn propagate(
    rho: &DensityMatrix,
    t_a: f64,
    t_b: f64,
    p: &BathParams,
    conv: CompositionConvention,
) -> Result<DensityMatrix> {
    let f = interval_factors(p, t_a, t_b, conv)?;
    if f == DephasingFactors::default() {
        return Ok(rho.clone());
    }
    Ok(apply_factors(rho, f))
}
