//! Adaptive Gauss–Kronrod (7/15) quadrature with optional splitting at
//! oscillation nodes.

#![allow(clippy::excessive_precision)]

use crate::{Error, Result};

// QUADPACK qk15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an integration: value and estimated absolute error.
#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// One 15-point Kronrod rule on `[a, b]`, with the embedded 7-point Gauss
/// rule as error estimate.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

const MAX_DEPTH: u32 = 40;

fn adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    whole: Estimate,
    depth: u32,
) -> Estimate {
    if whole.error <= tol || depth >= MAX_DEPTH || (b - a) <= f64::EPSILON * a.abs().max(1.0) {
        return whole;
    }
    let mid = 0.5 * (a + b);
    let left = gk15(f, a, mid);
    let right = gk15(f, mid, b);
    let l = adaptive(f, a, mid, 0.5 * tol, left, depth + 1);
    let r = adaptive(f, mid, b, 0.5 * tol, right, depth + 1);
    Estimate {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}

fn adaptive_relative(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel: f64,
    whole: Estimate,
    depth: u32,
) -> Estimate {
    if whole.error <= rel * whole.value.abs()
        || depth >= MAX_DEPTH
        || (b - a) <= f64::EPSILON * a.abs().max(1.0)
    {
        return whole;
    }
    let mid = 0.5 * (a + b);
    let l = adaptive_relative(f, a, mid, rel, gk15(f, a, mid), depth + 1);
    let r = adaptive_relative(f, mid, b, rel, gk15(f, mid, b), depth + 1);
    Estimate {
        value: l.value + r.value,
        error: l.error + r.error,
    }
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by recursive
/// bisection.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    let est = adaptive(&f, a, b, tol, gk15(&f, a, b), 0);
    check(est, tol)
}

/// Integrates over `[a, b]` after cutting the range into panels of width
/// `panel` (typically a half period of the oscillating factor). Each panel
/// gets an equal share of the tolerance and partial sums are compensated.
pub fn integrate_panels(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panel: f64,
    tol: f64,
) -> Result<Estimate> {
    if !(panel > 0.0) || panel >= b - a {
        return integrate(f, a, b, tol);
    }
    let count = ((b - a) / panel).ceil() as usize;
    let per_panel = tol / count as f64;
    let mut sum = Neumaier::default();
    let mut error = 0.0;
    for k in 0..count {
        let lo = a + k as f64 * panel;
        let hi = (a + (k + 1) as f64 * panel).min(b);
        let est = adaptive(&f, lo, hi, per_panel, gk15(&f, lo, hi), 0);
        sum.add(est.value);
        error += est.error;
    }
    check(
        Estimate {
            value: sum.total(),
            error,
        },
        tol,
    )
}

/// Integrates a nonnegative `f` over `[a, b]` to relative tolerance `rel`,
/// cutting the range into panels of width `panel` first (pass `f64::INFINITY`
/// for a single panel). Every subinterval must meet `rel` against its own
/// value, which bounds the total relative error because all contributions
/// share one sign.
pub fn integrate_nonnegative(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panel: f64,
    rel: f64,
) -> Result<Estimate> {
    let count = if panel > 0.0 && panel < b - a {
        ((b - a) / panel).ceil() as usize
    } else {
        1
    };
    let width = (b - a) / count as f64;
    let mut sum = Neumaier::default();
    let mut error = 0.0;
    for k in 0..count {
        let lo = a + k as f64 * width;
        let hi = if k + 1 == count {
            b
        } else {
            a + (k + 1) as f64 * width
        };
        let est = adaptive_relative(&f, lo, hi, rel, gk15(&f, lo, hi), 0);
        sum.add(est.value);
        error += est.error;
    }
    let value = sum.total();
    // Rounding floor for integrands that vanish identically.
    let requested = rel * value.abs() + f64::MIN_POSITIVE;
    if !value.is_finite() || error > requested * (1.0 + 1e-9) {
        return Err(Error::Quadrature {
            achieved: error,
            requested,
        });
    }
    Ok(Estimate { value, error })
}

fn check(est: Estimate, tol: f64) -> Result<Estimate> {
    if !est.value.is_finite() || est.error > tol {
        return Err(Error::Quadrature {
            achieved: est.error,
            requested: tol,
        });
    }
    Ok(est)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let est = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14).unwrap();
        assert!((est.value - (64.0 / 6.0 - 1.0 / 6.0 - 9.0)).abs() < 1e-13);
    }

    #[test]
    fn exponential_tail() {
        let est = integrate(|x| (-x).exp(), 0.0, 60.0, 1e-13).unwrap();
        assert!((est.value - (1.0 - (-60f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_panels() {
        // ∫₀^{20π} e^{-x/50} cos(x) dx = Re[(1 - e^{(i - 1/50)·20π}) / (1/50 - i)]
        let t = 20.0 * std::f64::consts::PI;
        let a = 1.0 / 50.0;
        let exact = {
            let den = a * a + 1.0;
            let decay = (-a * t).exp();
            (a - decay * (a * t.cos() - t.sin())) / den
        };
        let est = integrate_panels(
            |x| (-a * x).exp() * x.cos(),
            0.0,
            t,
            std::f64::consts::PI,
            1e-12,
        )
        .unwrap();
        assert!(
            (est.value - exact).abs() < 1e-11,
            "{} vs {}",
            est.value,
            exact
        );
    }

    #[test]
    fn non_convergence_is_reported() {
        // Non-integrable singularity: error estimate cannot shrink.
        let err = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-12).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
