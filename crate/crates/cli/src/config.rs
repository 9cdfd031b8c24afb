//! Run configuration: an optional JSON file overridden field by field by
//! command-line flags, then resolved into core types.

use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

use cluster_dephasing::bath::BathParams;
use cluster_dephasing::channel::CompositionConvention;
use cluster_dephasing::fidelity::linear_grid;
use cluster_dephasing::mbqc::{
    Conventions, GateKind, GateSpec, MeasuredQubits, MeasurementSchedule, OutcomeBranch,
};
use cluster_dephasing::scheduler::ScheduleMode;
use cluster_dephasing::states::{InputQubit, NamedState};
use cluster_dephasing::C64;

use crate::Usage;

/// A number that may also be written as a string such as `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Value(f64),
    Text(#[serde(with = "text_float")] f64),
}

impl Number {
    pub fn get(self) -> f64 {
        match self {
            Number::Value(x) | Number::Text(x) => x,
        }
    }
}

mod text_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(serde::de::Error::custom)
    }
}

/// `x` or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexArg {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexArg {
    pub fn get(self) -> C64 {
        match self {
            ComplexArg::Real(x) => C64::new(x, 0.0),
            ComplexArg::Pair([re, im]) => C64::new(re, im),
        }
    }
}

/// Every setting any subcommand understands. Field names match the long
/// flags with `-` replaced by `_`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_hbar: Option<Number>,
    /// `start:end:n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<ComplexArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<ComplexArg>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refine_tol: Option<f64>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(Usage::wrap)?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))
            .map_err(Usage::wrap)
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &RunConfig) -> Self {
        overlay!(self, top; eta, omega_c, beta_hbar, grid, input, alpha, beta, gate, euler,
            times, t_gap, convention, measured, branch, mode, window, step, refine_tol);
        self
    }

    pub fn bath(&self) -> anyhow::Result<BathParams> {
        let d = BathParams::calibrated();
        let p = BathParams::new(
            self.eta.unwrap_or(d.eta),
            self.omega_c.unwrap_or(d.omega_c),
            self.beta_hbar.map_or(d.beta_hbar, Number::get),
        )?;
        Ok(p)
    }

    pub fn grid(&self) -> anyhow::Result<Vec<f64>> {
        let Some(spec) = &self.grid else {
            return Err(Usage::err("--grid start:end:n is required"));
        };
        parse_grid(spec)
    }

    /// The input qubit, or `default` when none is configured.
    pub fn input_or(&self, default: InputQubit) -> anyhow::Result<InputQubit> {
        match (&self.input, self.alpha, self.beta) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => Err(Usage::err(
                "give either --input or --alpha/--beta, not both",
            )),
            (Some(tag), None, None) => Ok(InputQubit::from_named(tag.parse::<NamedState>()?)),
            (None, Some(a), Some(b)) => Ok(InputQubit::new(a.get(), b.get())?),
            (None, Some(_), None) | (None, None, Some(_)) => {
                Err(Usage::err("--alpha and --beta must be given together"))
            }
            (None, None, None) => Ok(default),
        }
    }

    pub fn gate(&self) -> anyhow::Result<GateSpec> {
        match (&self.gate, self.euler) {
            (_, Some([xi, eta, zeta])) => {
                if let Some(name) = &self.gate {
                    if name.parse::<GateKind>()? != GateKind::Euler {
                        return Err(Usage::err("--euler only applies to --gate euler"));
                    }
                }
                Ok(GateSpec::euler(xi, eta, zeta))
            }
            (Some(name), None) => {
                if name.parse::<GateKind>()? == GateKind::Euler {
                    return Err(Usage::err("--gate euler needs --euler xi,eta,zeta"));
                }
                Ok(cluster_dephasing::mbqc::gate_catalog(name)?)
            }
            (None, None) => Err(Usage::err("--gate is required")),
        }
    }

    pub fn conventions(&self) -> anyhow::Result<Conventions> {
        Ok(Conventions {
            composition: match &self.convention {
                Some(c) => c.parse::<CompositionConvention>()?,
                None => CompositionConvention::default(),
            },
            measured_qubits: match &self.measured {
                Some(m) => m.parse::<MeasuredQubits>()?,
                None => MeasuredQubits::default(),
            },
        })
    }

    pub fn schedule(&self) -> anyhow::Result<MeasurementSchedule> {
        let base = match (self.times, self.t_gap) {
            (Some(_), Some(_)) => {
                return Err(Usage::err("give either --times or --t-gap, not both"))
            }
            (Some([a, b, c]), None) => MeasurementSchedule::distinct(a, b, c),
            (None, Some(t)) => MeasurementSchedule::simultaneous(t),
            (None, None) => return Err(Usage::err("one of --times or --t-gap is required")),
        };
        let conv = self.conventions()?;
        let branch = match &self.branch {
            Some(b) => b.parse::<OutcomeBranch>()?,
            None => OutcomeBranch::ALL_UP,
        };
        let s = base
            .convention(conv.composition)
            .measured(conv.measured_qubits)
            .branch(branch);
        s.validate()?;
        Ok(s)
    }

    pub fn mode(&self) -> anyhow::Result<ScheduleMode> {
        match self.mode.as_deref().map(str::to_ascii_lowercase).as_deref() {
            None | Some("simultaneous") => Ok(ScheduleMode::Simultaneous),
            Some("distinct" | "distinct-times" | "distinct_times") => {
                Ok(ScheduleMode::DistinctTimes)
            }
            Some(other) => Err(Usage::err(format!("unknown mode `{other}`"))),
        }
    }

    pub fn window(&self) -> anyhow::Result<[f64; 2]> {
        self.window
            .ok_or_else(|| Usage::err("--window lo,hi is required"))
    }
}

/// Parses `start:end:n` into `n` evenly spaced points.
pub fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, n] = parts.as_slice() else {
        return Err(Usage::err(format!(
            "grid `{spec}` must look like start:end:n"
        )));
    };
    let bad = || Usage::err(format!("grid `{spec}` must look like start:end:n"));
    let start: f64 = a.trim().parse().map_err(|_| bad())?;
    let end: f64 = b.trim().parse().map_err(|_| bad())?;
    let n: usize = n.trim().parse().map_err(|_| bad())?;
    if n == 0 || !(start.is_finite() && end.is_finite()) || start < 0.0 || end < start {
        return Err(Usage::err(format!(
            "grid `{spec}` needs 0 <= start <= end and n >= 1"
        )));
    }
    Ok(linear_grid(start, end, n))
}

/// Parses a comma-separated list of exactly `N` numbers.
pub fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let values: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

/// `x` or `re,im`.
pub fn parse_complex(s: &str) -> Result<ComplexArg, String> {
    if s.contains(',') {
        parse_list::<2>(s).map(ComplexArg::Pair)
    } else {
        s.trim()
            .parse()
            .map(ComplexArg::Real)
            .map_err(|e| format!("`{s}`: {e}"))
    }
}

pub fn parse_number(s: &str) -> Result<Number, String> {
    s.trim()
        .parse()
        .map(Number::Value)
        .map_err(|e| format!("`{s}`: {e}"))
}
