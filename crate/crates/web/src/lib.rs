//! Browser bindings. Each export returns a JSON string; errors become JS
//! exceptions carrying the message.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use cluster_dephasing::bath::BathParams;
use cluster_dephasing::channel::CompositionConvention;
use cluster_dephasing::fidelity::{closed_form_cluster, fidelity_curve, linear_grid};
use cluster_dephasing::mbqc::{gate_fidelity_curve, Conventions, GateKind, GateSpec, SweepMode};
use cluster_dephasing::scheduler::{
    find_extrema, optimize_schedule, OptimizeOptions, ScheduleMode,
};
use cluster_dephasing::states::{post_first_measurement, InputQubit, NamedState};
use cluster_dephasing::C64;

const ETA: f64 = 1e-3;
const OMEGA_C: f64 = 100.0;
const MAX_POINTS: usize = 4001;

fn bath(beta_hbar: f64) -> Result<BathParams, String> {
    let p = if beta_hbar.is_infinite() {
        BathParams::zero_temperature(ETA, OMEGA_C)
    } else {
        BathParams::new(ETA, OMEGA_C, beta_hbar)
    };
    p.map_err(|e| e.to_string())
}

fn grid(t_max: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(format!(
            "t_max must be finite and non-negative, got {t_max}"
        ));
    }
    if n == 0 || n > MAX_POINTS {
        return Err(format!("points must be in 1..={MAX_POINTS}"));
    }
    Ok(linear_grid(0.0, t_max, n))
}

fn input(alpha_re: f64, alpha_im: f64, beta_re: f64, beta_im: f64) -> Result<InputQubit, String> {
    let norm = (alpha_re.powi(2) + alpha_im.powi(2) + beta_re.powi(2) + beta_im.powi(2)).sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err("input amplitudes must not all be zero".into());
    }
    // The demo normalizes for the user; the library itself refuses.
    InputQubit::new(
        C64::new(alpha_re, alpha_im) / norm,
        C64::new(beta_re, beta_im) / norm,
    )
    .map_err(|e| e.to_string())
}

fn conventions(convention: &str) -> Result<Conventions, String> {
    let composition: CompositionConvention = convention
        .parse()
        .map_err(|e: cluster_dephasing::Error| e.to_string())?;
    Ok(Conventions {
        composition,
        ..Default::default()
    })
}

fn gate(name: &str) -> Result<GateSpec, String> {
    let kind: GateKind = name
        .parse()
        .map_err(|e: cluster_dephasing::Error| e.to_string())?;
    GateSpec::catalog(kind).map_err(|e| e.to_string())
}

fn named(name: &str) -> Result<InputQubit, String> {
    let tag: NamedState = name
        .parse()
        .map_err(|e: cluster_dephasing::Error| e.to_string())?;
    Ok(InputQubit::from_named(tag))
}

#[derive(Serialize)]
struct Curve {
    t: Vec<f64>,
    series: Vec<Series>,
    peaks: Vec<f64>,
    valleys: Vec<f64>,
}

#[derive(Serialize)]
struct Series {
    label: String,
    values: Vec<f64>,
}

fn to_json(v: &impl Serialize) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Four-qubit cluster fidelity, engine and closed form, plus Γ for context.
pub fn state_fidelity_json(
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    t_max: f64,
    points: usize,
    beta_hbar: f64,
) -> Result<String, String> {
    let p = bath(beta_hbar)?;
    let q = input(alpha_re, alpha_im, beta_re, beta_im)?;
    let t = grid(t_max, points)?;
    let engine = fidelity_curve(&post_first_measurement(&q), &t, &p).map_err(|e| e.to_string())?;
    let closed = t.iter().map(|&x| closed_form_cluster(&q, x, &p)).collect();
    let ex = find_extrema(&engine, 1e-4, |x| Ok(closed_form_cluster(&q, x, &p)))
        .map_err(|e| e.to_string())?;
    to_json(&Curve {
        series: vec![
            Series {
                label: "fidelity".into(),
                values: engine.values,
            },
            Series {
                label: "closed form".into(),
                values: closed,
            },
            Series {
                label: "Γ(t)".into(),
                values: t.iter().map(|&x| p.gamma(x)).collect(),
            },
        ],
        t,
        peaks: ex.peaks.iter().map(|e| e.0).collect(),
        valleys: ex.valleys.iter().map(|e| e.0).collect(),
    })
}

/// Gate fidelity against the sweep time. `delta = 0` sweeps back-to-back
/// measurements after a single wait; otherwise times `(t − δ, t, t + δ)`.
pub fn gate_fidelity_json(
    gate_name: &str,
    input_name: &str,
    delta: f64,
    convention: &str,
    t_max: f64,
    points: usize,
    beta_hbar: f64,
) -> Result<String, String> {
    let p = bath(beta_hbar)?;
    let g = gate(gate_name)?;
    let q = named(input_name)?;
    let t = grid(t_max, points)?;
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(format!(
            "delta must be finite and non-negative, got {delta}"
        ));
    }
    let mode = if delta == 0.0 {
        SweepMode::Simultaneous
    } else {
        SweepMode::DistinctTimes { delta }
    };
    let conv = conventions(convention)?;
    let curve = gate_fidelity_curve(&g, &q, mode, &t, &p, conv).map_err(|e| e.to_string())?;
    let ex = find_extrema(&curve, 1e-4, |x| {
        Ok(
            cluster_dephasing::mbqc::run_gate(&g, &q, &conv.schedule(mode.timing_at(x)), &p)?
                .gate_fidelity,
        )
    })
    .map_err(|e| e.to_string())?;
    to_json(&Curve {
        series: vec![Series {
            label: format!("{} gate fidelity", g.name()),
            values: curve.values,
        }],
        t,
        peaks: ex.peaks.iter().map(|e| e.0).collect(),
        valleys: ex.valleys.iter().map(|e| e.0).collect(),
    })
}

/// Best schedule in `[lo, hi]`.
pub fn optimize_json(
    gate_name: &str,
    input_name: &str,
    distinct: bool,
    lo: f64,
    hi: f64,
    convention: &str,
    beta_hbar: f64,
) -> Result<String, String> {
    let p = bath(beta_hbar)?;
    let g = gate(gate_name)?;
    let q = named(input_name)?;
    let mode = if distinct {
        ScheduleMode::DistinctTimes
    } else {
        ScheduleMode::Simultaneous
    };
    let opts = OptimizeOptions {
        // Coarser grid for ordered triples keeps the page responsive.
        step: if distinct { 0.25 } else { 0.05 },
        conventions: conventions(convention)?,
        ..Default::default()
    };
    let r = optimize_schedule(&g, &q, mode, [lo, hi], &p, &opts).map_err(|e| e.to_string())?;
    to_json(&r)
}

#[wasm_bindgen]
pub fn state_fidelity(
    alpha_re: f64,
    alpha_im: f64,
    beta_re: f64,
    beta_im: f64,
    t_max: f64,
    points: usize,
    beta_hbar: f64,
) -> Result<String, JsError> {
    state_fidelity_json(
        alpha_re, alpha_im, beta_re, beta_im, t_max, points, beta_hbar,
    )
    .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn gate_fidelity(
    gate_name: &str,
    input_name: &str,
    delta: f64,
    convention: &str,
    t_max: f64,
    points: usize,
    beta_hbar: f64,
) -> Result<String, JsError> {
    gate_fidelity_json(
        gate_name, input_name, delta, convention, t_max, points, beta_hbar,
    )
    .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn optimize(
    gate_name: &str,
    input_name: &str,
    distinct: bool,
    lo: f64,
    hi: f64,
    convention: &str,
    beta_hbar: f64,
) -> Result<String, JsError> {
    optimize_json(
        gate_name, input_name, distinct, lo, hi, convention, beta_hbar,
    )
    .map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> serde_json::Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn state_curve_has_expected_peak() {
        let v = parse(&state_fidelity_json(1.0, 0.0, 0.0, 0.0, 50.0, 501, 1.0).unwrap());
        assert_eq!(v["t"].as_array().unwrap().len(), 501);
        assert_eq!(v["series"].as_array().unwrap().len(), 3);
        let peaks: Vec<f64> = v["peaks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect();
        assert!(peaks.iter().any(|p| (p - 15.7).abs() < 0.3), "{peaks:?}");
    }

    #[test]
    fn unnormalized_input_is_rescaled() {
        let a = state_fidelity_json(3.0, 0.0, 0.0, 4.0, 20.0, 21, 1.0).unwrap();
        let b = state_fidelity_json(0.6, 0.0, 0.0, 0.8, 20.0, 21, 1.0).unwrap();
        let (a, b) = (parse(&a), parse(&b));
        let fa = a["series"][0]["values"].as_array().unwrap();
        let fb = b["series"][0]["values"].as_array().unwrap();
        for (x, y) in fa.iter().zip(fb) {
            assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn gate_curve_starts_at_one() {
        let v = parse(
            &gate_fidelity_json("hadamard", "zero", 0.0, "divisible", 20.0, 41, 1.0).unwrap(),
        );
        assert!((v["series"][0]["values"][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
        assert!(
            gate_fidelity_json("not", "plus", 0.2, "fresh-bath", 20.0, 41, f64::INFINITY).is_ok()
        );
    }

    #[test]
    fn optimize_reports_schedule() {
        let v = parse(&optimize_json("not", "zero", false, 3.0, 10.0, "divisible", 1.0).unwrap());
        assert!(v["best_fidelity"].as_f64().unwrap() > 0.9);
    }

    #[test]
    fn bad_arguments_are_messages() {
        assert!(state_fidelity_json(0.0, 0.0, 0.0, 0.0, 10.0, 11, 1.0).is_err());
        assert!(state_fidelity_json(1.0, 0.0, 0.0, 0.0, -1.0, 11, 1.0).is_err());
        assert!(state_fidelity_json(1.0, 0.0, 0.0, 0.0, 1.0, 0, 1.0).is_err());
        assert!(gate_fidelity_json("swap", "zero", 0.0, "divisible", 10.0, 11, 1.0).is_err());
        assert!(gate_fidelity_json("not", "zero", -0.1, "divisible", 10.0, 11, 1.0).is_err());
        assert!(gate_fidelity_json("not", "zero", 0.0, "sometimes", 10.0, 11, 1.0).is_err());
        assert!(optimize_json("not", "zero", false, 5.0, 1.0, "divisible", 1.0).is_err());
    }
}
