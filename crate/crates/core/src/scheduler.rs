//! Extrema of fidelity curves and searches for good measurement times.

use serde::{Deserialize, Serialize};

use crate::bath::BathParams;
use crate::fidelity::FidelityCurve;
use crate::mbqc::{run_gate, Conventions, GateSpec, MeasurementSchedule, Timing};
use crate::states::InputQubit;
use crate::{Error, Result};

/// Finite differences smaller than this are treated as flat.
const FLAT_EPS: f64 = 1e-13;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExtremaReport {
    pub peaks: Vec<(f64, f64)>,
    pub valleys: Vec<(f64, f64)>,
}

impl ExtremaReport {
    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty() && self.valleys.is_empty()
    }

    /// Highest peak; earliest wins ties.
    pub fn best_peak(&self) -> Option<(f64, f64)> {
        self.peaks
            .iter()
            .copied()
            .fold(None, |best: Option<(f64, f64)>, p| match best {
                Some(b) if b.1 >= p.1 => Some(b),
                _ => Some(p),
            })
    }

    /// All extrema sorted by time, tagged `true` for peaks.
    pub fn merged(&self) -> Vec<(f64, f64, bool)> {
        let mut all: Vec<_> = self
            .peaks
            .iter()
            .map(|&(t, v)| (t, v, true))
            .chain(self.valleys.iter().map(|&(t, v)| (t, v, false)))
            .collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0));
        all
    }
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
///
/// Returns the best point seen, including the end points' interior probes.
pub fn golden_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    if b < a {
        std::mem::swap(&mut a, &mut b);
    }
    if b - a <= tol {
        let m = 0.5 * (a + b);
        return Ok((m, f(m)?));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// Locates interior extrema of `curve` and refines each with `evaluator`.
pub fn find_extrema(
    curve: &FidelityCurve,
    refine_tol: f64,
    mut evaluator: impl FnMut(f64) -> Result<f64>,
) -> Result<ExtremaReport> {
    if curve.len() < 3 {
        return Err(Error::Domain(
            "extrema search needs at least 3 samples".into(),
        ));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::Domain(format!(
            "refine_tol must be positive, got {refine_tol}"
        )));
    }
    let (t, v) = (&curve.times, &curve.values);
    // Indices of nonflat steps with their signs.
    let steps: Vec<(usize, bool)> = v
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]).abs() > FLAT_EPS)
        .map(|(i, w)| (i, w[1] > w[0]))
        .collect();

    let mut report = ExtremaReport::default();
    for pair in steps.windows(2) {
        let ((i, up_before), (j, up_after)) = (pair[0], pair[1]);
        if up_before == up_after {
            continue;
        }
        let (lo, hi) = (t[i], t[j + 1]);
        // Best sample inside the bracket, as a floor for the refinement.
        let is_peak = up_before;
        let sign = if is_peak { 1.0 } else { -1.0 };
        let (k_best, _) =
            (i + 1..=j)
                .map(|k| (k, sign * v[k]))
                .fold((i + 1, f64::NEG_INFINITY), |acc, x| {
                    if x.1 > acc.1 {
                        x
                    } else {
                        acc
                    }
                });
        let (x, fx) = golden_max(|x| Ok(sign * evaluator(x)?), lo, hi, refine_tol)?;
        let refined = if fx >= sign * v[k_best] {
            (x, sign * fx)
        } else {
            (t[k_best], v[k_best])
        };
        if is_peak {
            report.peaks.push(refined);
        } else {
            report.valleys.push(refined);
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    Simultaneous,
    DistinctTimes,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeOptions {
    /// Coarse grid step.
    pub step: f64,
    pub refine_tol: f64,
    pub conventions: Conventions,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            step: 0.05,
            refine_tol: 1e-4,
            conventions: Conventions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub mode: ScheduleMode,
    pub window: [f64; 2],
    pub best_schedule: MeasurementSchedule,
    pub best_fidelity: f64,
    pub evaluations: u64,
}

fn coarse_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step - 1e-9).ceil().max(0.0) as usize;
    let mut g: Vec<f64> = (0..n).map(|k| lo + step * k as f64).collect();
    g.push(hi);
    g
}

/// Searches `window` for the schedule maximizing the gate fidelity.
pub fn optimize_schedule(
    g: &GateSpec,
    q: &InputQubit,
    mode: ScheduleMode,
    window: [f64; 2],
    p: &BathParams,
    opts: &OptimizeOptions,
) -> Result<OptimizeReport> {
    let [lo, hi] = window;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(Error::Domain(format!("invalid window [{lo}, {hi}]")));
    }
    if !(opts.step > 0.0 && opts.refine_tol > 0.0) {
        return Err(Error::Domain("step and refine_tol must be positive".into()));
    }
    let mut evaluations = 0u64;
    let mut eval = |times: [f64; 3]| -> Result<f64> {
        evaluations += 1;
        let s = opts.conventions.schedule(Timing::DistinctTimes { times });
        Ok(run_gate(g, q, &s, p)?.gate_fidelity)
    };
    let grid = coarse_grid(lo, hi, opts.step);

    let (best, best_fidelity) = match mode {
        ScheduleMode::Simultaneous => {
            let mut best = (lo, f64::NEG_INFINITY);
            for &t in &grid {
                let f = eval([t; 3])?;
                if f > best.1 {
                    best = (t, f);
                }
            }
            let a = (best.0 - opts.step).max(lo);
            let b = (best.0 + opts.step).min(hi);
            let (x, fx) = golden_max(|t| eval([t; 3]), a, b, opts.refine_tol)?;
            if fx > best.1 {
                best = (x, fx);
            }
            ([best.0; 3], best.1)
        }
        ScheduleMode::DistinctTimes => {
            let mut best = ([lo; 3], f64::NEG_INFINITY);
            for (i, &t1) in grid.iter().enumerate() {
                for (j, &t2) in grid.iter().enumerate().skip(i) {
                    for &t3 in &grid[j..] {
                        let f = eval([t1, t2, t3])?;
                        if f > best.1 {
                            best = ([t1, t2, t3], f);
                        }
                    }
                }
            }
            let (mut x, mut fx) = best;
            for _ in 0..10 {
                let before = fx;
                for k in 0..3 {
                    let floor = if k == 0 { lo } else { x[k - 1] };
                    let ceil = if k == 2 { hi } else { x[k + 1] };
                    let a = (x[k] - opts.step).max(floor);
                    let b = (x[k] + opts.step).min(ceil);
                    let mut probe = x;
                    let (y, fy) = golden_max(
                        |v| {
                            probe[k] = v;
                            eval(probe)
                        },
                        a,
                        b,
                        opts.refine_tol,
                    )?;
                    if fy > fx {
                        x[k] = y;
                        fx = fy;
                    }
                }
                if fx - before <= 1e-12 {
                    break;
                }
            }
            (x, fx)
        }
    };

    let timing = match mode {
        ScheduleMode::Simultaneous => Timing::Simultaneous { t_gap: best[0] },
        ScheduleMode::DistinctTimes => Timing::DistinctTimes { times: best },
    };
    Ok(OptimizeReport {
        mode,
        window,
        best_schedule: opts.conventions.schedule(timing),
        best_fidelity,
        evaluations,
    })
}
