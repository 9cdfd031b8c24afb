//! Decoherence functions of an ohmic bosonic bath coupled collectively
//! through `σ_z`.
//!
//! Units: `ħ = k_B = 1`. Times are in the caller's unit and frequencies in
//! its inverse. The thermal time `βħ` may be infinite (zero temperature).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::quadrature::integrate_nonnegative;
use crate::{Error, Result};

/// Relative accuracy requested from the quadrature oracles.
pub const QUAD_REL_TOL: f64 = 1e-10;

/// Above this `x = πt/βħ` the thermal log is evaluated asymptotically.
const SINH_ASYMPTOTIC: f64 = 30.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathParams {
    /// Dimensionless coupling `η ≥ 0`.
    pub eta: f64,
    /// Cutoff frequency `ω_c > 0`.
    pub omega_c: f64,
    /// Thermal time `βħ > 0`; `f64::INFINITY` means zero temperature.
    #[serde(with = "thermal_time")]
    pub beta_hbar: f64,
}

impl BathParams {
    pub fn new(eta: f64, omega_c: f64, beta_hbar: f64) -> Result<Self> {
        let p = Self {
            eta,
            omega_c,
            beta_hbar,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn zero_temperature(eta: f64, omega_c: f64) -> Result<Self> {
        Self::new(eta, omega_c, f64::INFINITY)
    }

    /// `η = 10⁻³`, `ω_c = 100`, `βħ = 1`: the quantum-regime parameters
    /// under which the reference fidelity figures are reproduced.
    pub fn calibrated() -> Self {
        Self {
            eta: 1e-3,
            omega_c: 100.0,
            beta_hbar: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::Domain(format!(
                "eta must be finite and >= 0, got {}",
                self.eta
            )));
        }
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(Error::Domain(format!(
                "omega_c must be > 0, got {}",
                self.omega_c
            )));
        }
        if !(self.beta_hbar > 0.0) {
            return Err(Error::Domain(format!(
                "beta_hbar must be > 0 or infinite, got {}",
                self.beta_hbar
            )));
        }
        Ok(())
    }

    pub fn is_zero_temperature(&self) -> bool {
        self.beta_hbar.is_infinite()
    }

    /// `ω_T = π / βħ` (zero at zero temperature).
    pub fn thermal_frequency(&self) -> f64 {
        PI / self.beta_hbar
    }

    /// Ohmic spectral density `J(ω) = η ω e^{−ω/ω_c}`.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        self.eta * omega * (-omega / self.omega_c).exp()
    }

    /// `Θ(t) = η ω_c t − η arctan(ω_c t)`.
    pub fn theta(&self, t: f64) -> f64 {
        let x = self.omega_c * t;
        if x < 1e-4 {
            // x − arctan x = x³/3 − x⁵/5 + …
            let x3 = x * x * x;
            return self.eta * (x3 / 3.0 - x3 * x * x / 5.0);
        }
        self.eta * (x - x.atan())
    }

    /// Vacuum part `η ln(1 + ω_c² t²)` of `Γ`.
    pub fn gamma_vacuum(&self, t: f64) -> f64 {
        let x = self.omega_c * t;
        self.eta * (x * x).ln_1p()
    }

    /// Thermal part `η ln(sinh(x)/x)`, `x = πt/βħ`, of `Γ`.
    pub fn gamma_thermal(&self, t: f64) -> f64 {
        if self.is_zero_temperature() {
            return 0.0;
        }
        self.eta * ln_sinhc(PI * t / self.beta_hbar)
    }

    /// `Γ(t, T) = η ln(1 + ω_c² t²) + η ln[(βħ/πt) sinh(πt/βħ)]`.
    pub fn gamma(&self, t: f64) -> f64 {
        self.gamma_vacuum(t) + self.gamma_thermal(t)
    }

    pub fn factors(&self, t: f64) -> DephasingFactors {
        DephasingFactors {
            gamma: self.gamma(t),
            theta: self.theta(t),
        }
    }

    /// Upper frequency limit for the quadrature oracles.
    pub fn quadrature_cutoff(&self, t: f64) -> f64 {
        self.omega_c * 50f64.max(20.0 + 10.0 * (self.omega_c * t).ln_1p())
    }

    /// `Γ(t)` by direct quadrature of the representation
    ///
    /// ```text
    /// Γ = η ∫ dω (1 − cos ωt)/ω · [2 e^{−ω/ω_c} + coth(βħω/2) − 1]
    /// ```
    ///
    /// whose exact value is [`gamma`](Self::gamma): the vacuum piece gives
    /// `η ln(1 + ω_c²t²)` and the thermal piece `η ln(sinh x / x)`.
    pub fn gamma_quad(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 || self.eta == 0.0 {
            return Ok(0.0);
        }
        let vacuum = |w: f64| {
            if w == 0.0 {
                return 0.0;
            }
            let s = (0.5 * w * t).sin();
            2.0 * (-w / self.omega_c).exp() * 2.0 * s * s / w
        };
        let mut total = self.integrate_oscillatory(vacuum, t, self.quadrature_cutoff(t))?;
        if !self.is_zero_temperature() {
            total += self.integrate_oscillatory(
                |w| self.thermal_integrand(w, t),
                t,
                self.thermal_cutoff(t),
            )?;
        }
        Ok(total)
    }

    /// The integral `η ∫ dω e^{−ω/ω_c} (1 − cos ωt)/ω · coth(βħω/2)` taken
    /// literally. Equals `η/2 ln(1 + ω_c²t²)` plus a thermal part that
    /// tends to `η ln(sinh x / x)` only as `ω_c β ħ → ∞`.
    pub fn gamma_literal_integral(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 || self.eta == 0.0 {
            return Ok(0.0);
        }
        let vacuum = |w: f64| {
            if w == 0.0 {
                return 0.0;
            }
            let s = (0.5 * w * t).sin();
            (-w / self.omega_c).exp() * 2.0 * s * s / w
        };
        let mut total = self.integrate_oscillatory(vacuum, t, self.quadrature_cutoff(t))?;
        if !self.is_zero_temperature() {
            let damped = |w: f64| (-w / self.omega_c).exp() * self.thermal_integrand(w, t);
            total += self.integrate_oscillatory(damped, t, self.thermal_cutoff(t))?;
        }
        Ok(total)
    }

    /// `(1 − cos ωt)/ω · (coth(βħω/2) − 1)`, finite limit `t²/βħ` at 0.
    fn thermal_integrand(&self, w: f64, t: f64) -> f64 {
        let beta = self.beta_hbar;
        if w * beta < 1e-8 {
            return t * t / beta;
        }
        let s = (0.5 * w * t).sin();
        2.0 * s * s / w * 2.0 / (beta * w).exp_m1()
    }

    fn thermal_cutoff(&self, t: f64) -> f64 {
        // e^{−βħω} < 1e−17 well before this point.
        (60.0 / self.beta_hbar).max(2.0 * PI / t)
    }

    /// `Θ(t)` by direct quadrature of `η ∫ dω e^{−ω/ω_c} (ωt − sin ωt)/ω`.
    pub fn theta_quad(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        if t == 0.0 || self.eta == 0.0 {
            return Ok(0.0);
        }
        let integrand = |w: f64| {
            let x = w * t;
            let core = if x < 1e-3 {
                let x3 = x * x * x;
                x3 / 6.0 - x3 * x * x / 120.0
            } else {
                x - x.sin()
            };
            if w == 0.0 {
                0.0
            } else {
                (-w / self.omega_c).exp() * core / w
            }
        };
        self.integrate_oscillatory(integrand, t, self.quadrature_cutoff(t))
    }

    fn integrate_oscillatory(
        &self,
        integrand: impl Fn(f64) -> f64,
        t: f64,
        upper: f64,
    ) -> Result<f64> {
        // Half-period panels keep every subinterval free of sign changes
        // in the oscillating factor.
        let est = integrate_nonnegative(integrand, 0.0, upper, PI / t, QUAD_REL_TOL)?;
        Ok(self.eta * est.value)
    }

    pub fn classify_regime(&self, t: f64) -> Regime {
        if t < 1.0 / self.omega_c {
            Regime::SubCutoff
        } else if t < 1.0 / self.thermal_frequency() {
            Regime::Quantum
        } else {
            Regime::Thermal
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    Ok(())
}

/// `ln(sinh(x)/x)` for `x ≥ 0`, stable at both ends.
fn ln_sinhc(x: f64) -> f64 {
    if x < 1e-3 {
        let x2 = x * x;
        x2 / 6.0 - x2 * x2 / 180.0 + x2 * x2 * x2 / 2835.0
    } else if x > SINH_ASYMPTOTIC {
        // sinh x = eˣ(1 − e^{−2x})/2; the correction is below 1e-26.
        x - (2.0 * x).ln()
    } else {
        (x.sinh() / x).ln()
    }
}

/// The pair `(Γ, Θ)` driving the dephasing map at a given time or interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DephasingFactors {
    pub gamma: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    SubCutoff,
    Quantum,
    Thermal,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::SubCutoff => "sub-cutoff",
            Regime::Quantum => "quantum",
            Regime::Thermal => "thermal",
        })
    }
}

/// JSON cannot carry infinity, so the zero-temperature thermal time is
/// written as the string `"inf"`.
mod thermal_time {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(v),
            Raw::Str(s) => match s.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                other => other.parse().map_err(de::Error::custom),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-30)
    }

    #[test]
    fn spectral_density_values() {
        let p = BathParams::new(1.0, 3.0, 1.0).unwrap();
        assert_eq!(p.spectral_density(0.0), 0.0);
        assert!((p.spectral_density(3.0) - 3.0 / std::f64::consts::E).abs() < 1e-15);
    }

    #[test]
    fn spectral_density_integral() {
        // ∫₀^∞ η ω e^{−ω/ω_c} dω = η ω_c²
        let p = BathParams::new(0.3, 7.0, 1.0).unwrap();
        let est = integrate_nonnegative(
            |w| p.spectral_density(w),
            0.0,
            60.0 * 7.0,
            f64::INFINITY,
            1e-13,
        )
        .unwrap();
        assert!(rel(est.value, 0.3 * 49.0) < 1e-10);
    }

    #[test]
    fn theta_values() {
        let p = BathParams::calibrated();
        assert_eq!(p.theta(0.0), 0.0);
        let v = p.theta(15.7);
        assert!((v - 1.5684).abs() < 5e-5, "{v}");
        let big = BathParams::zero_temperature(1.0, 1.0).unwrap();
        let t = 1e8;
        assert!((big.theta(t) - (t - PI / 2.0)).abs() < 1e-6 * t);
    }

    #[test]
    fn gamma_values() {
        let p = BathParams::calibrated();
        assert_eq!(p.gamma(0.0), 0.0);
        let g = p.gamma(15.7);
        assert!((g - 0.0594).abs() < 1e-4, "{g}");
        // Asymptotic branch continues the direct formula.
        let q = BathParams::new(1.0, 1.0, PI).unwrap();
        let below = q.gamma_thermal(SINH_ASYMPTOTIC - 1e-9);
        let above = q.gamma_thermal(SINH_ASYMPTOTIC + 1e-9);
        assert!((below - above).abs() < 1e-8);
    }

    #[test]
    fn zero_temperature_has_no_thermal_term() {
        let p = BathParams::zero_temperature(0.01, 100.0).unwrap();
        assert_eq!(p.gamma_thermal(12.0), 0.0);
        // Γ ≈ 2η ln(ω_c t) once ω_c t ≫ 1, i.e. algebraic decay (ω_c t)^{−2η}.
        let t = 1e4;
        assert!(rel(p.gamma(t), 2.0 * 0.01 * (100.0 * t).ln()) < 1e-8);
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let p = BathParams::calibrated();
        assert!(rel(p.gamma_quad(1.0).unwrap(), p.gamma(1.0)) < 1e-6);
        assert!(rel(p.theta_quad(15.7).unwrap(), p.theta(15.7)) < 1e-6);
        assert_eq!(p.gamma_quad(0.0).unwrap(), 0.0);
        assert_eq!(p.theta_quad(0.0).unwrap(), 0.0);
    }

    #[test]
    fn literal_integral_weights() {
        let cold = BathParams::zero_temperature(1e-3, 100.0).unwrap();
        assert!(
            rel(
                cold.gamma_literal_integral(1.0).unwrap(),
                0.5 * cold.gamma(1.0)
            ) < 1e-6
        );
        // Thermal part with the cutoff kept: η Σ_n ln(1 + t²/(1/ω_c + nβħ)²).
        let p = BathParams::calibrated();
        let t = 1.0;
        let n_max = 1_000_000;
        let series: f64 = (1..=n_max)
            .map(|n| (t * t / (1.0 / p.omega_c + n as f64 * p.beta_hbar).powi(2)).ln_1p())
            .sum::<f64>()
            + t * t / (p.beta_hbar * p.beta_hbar * n_max as f64);
        let expected = 0.5 * p.gamma_vacuum(t) + p.eta * series;
        assert!(rel(p.gamma_literal_integral(t).unwrap(), expected) < 1e-6);
        assert!(rel(p.gamma_literal_integral(t).unwrap(), p.gamma(t)) > 0.1);
    }

    #[test]
    fn vacuum_quadrature_is_ln_two() {
        // η = ω_c = t = 1 at zero temperature: Γ = ln(1 + 1) = ln 2.
        let p = BathParams::zero_temperature(1.0, 1.0).unwrap();
        assert!(rel(p.gamma_quad(1.0).unwrap(), 2f64.ln()) < 1e-6);
    }

    #[test]
    fn theta_quadrature_asymptote() {
        let p = BathParams::zero_temperature(1.0, 1.0).unwrap();
        let t = 1e4;
        assert!((p.theta_quad(t).unwrap() - (t - PI / 2.0)).abs() < 1e-3);
    }

    #[test]
    fn negative_time_is_rejected() {
        let p = BathParams::calibrated();
        assert!(matches!(p.gamma_quad(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn regimes() {
        // ω_T = 1 ⇔ βħ = π.
        let p = BathParams::new(1e-3, 100.0, PI).unwrap();
        assert_eq!(p.classify_regime(0.005), Regime::SubCutoff);
        assert_eq!(p.classify_regime(0.5), Regime::Quantum);
        assert_eq!(p.classify_regime(2.0), Regime::Thermal);
        let cold = BathParams::zero_temperature(1e-3, 100.0).unwrap();
        assert_eq!(cold.classify_regime(1e9), Regime::Quantum);
    }

    #[test]
    fn high_temperature_decay_is_linear() {
        // ħω_c = k_BT and ω_T t = 50: Γ ≈ η ω_T t.
        let p = BathParams::new(1e-3, 1.0, 1.0).unwrap();
        let t = 50.0 / p.thermal_frequency();
        let ratio = p.gamma(t) / (p.eta * p.thermal_frequency() * t);
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }

    #[test]
    fn closed_forms_are_monotone() {
        for p in [
            BathParams::calibrated(),
            BathParams::zero_temperature(0.1, 10.0).unwrap(),
        ] {
            let mut last = (0.0, 0.0);
            for k in 0..10_000 {
                let t = k as f64 * 0.01;
                let f = p.factors(t);
                assert!(f.gamma >= last.0 && f.theta >= last.1, "t = {t}");
                assert!(f.gamma >= p.gamma_vacuum(t));
                last = (f.gamma, f.theta);
            }
        }
    }

    #[test]
    fn params_validate() {
        assert!(BathParams::new(-1.0, 1.0, 1.0).is_err());
        assert!(BathParams::new(1.0, 0.0, 1.0).is_err());
        assert!(BathParams::new(1.0, 1.0, 0.0).is_err());
        assert!(BathParams::new(1.0, 1.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn params_json_handles_infinity() {
        let p = BathParams::zero_temperature(1e-3, 100.0).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"inf\""));
        let back: BathParams = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
