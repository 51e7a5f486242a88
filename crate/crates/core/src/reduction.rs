//! One-dimensional reduction of the stationary-state problem.
//!
//! Writing a stationary state as `z* = y*/θ`, both fixed-point equations
//! collapse onto a single scalar equation
//!
//! ```text
//! h(θ) = (θ − 1)·k₊ᵒⁿk₋ᵒⁿ + θ·k₋ᵒⁿ·k₊ᵒᶠᶠ(θ) − k₊ᵒⁿ·k₋ᵒᶠᶠ(θ) = 0
//! k₊ᵒᶠᶠ(θ) = k₀₊ᵒᶠᶠ·exp(1 / ((aνθ + b)F_d⁺))
//! k₋ᵒᶠᶠ(θ) = k₀₋ᵒᶠᶠ·exp(νθ / ((aνθ + b)F_d⁻))
//! ```
//!
//! with `(a, b)` taken from the plus-winning regime for `θ ≥ θ_c = F_s⁻/(νF_s⁺)`
//! and from the minus-winning regime below it. Every root `θ*` yields a
//! stationary state, and the sign of `h′(θ*)` equals the sign of the 2D
//! Jacobian determinant there, so it decides stability.
//!
//! `h` lives on `[0, ∞)`; [`Compactification`] maps it onto `[0, 2)` so a
//! bounded grid sees every root. Two maps are provided: `w` switches to the
//! reciprocal branch at `ϑ = 1`, `ŵ` at `ϑ = θ_c`, which puts the mapping
//! kink on top of the regime kink.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Regime, RegimeCoeffs, TugOfWarConfig};

/// Derivative of a piecewise-smooth curve at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Slope {
    Smooth(f64),
    /// One-sided derivatives at a point where the curve has a corner.
    Kink {
        left: f64,
        right: f64,
    },
}

impl Slope {
    /// Derivative used for sign decisions.
    ///
    /// At a corner the common sign of both one-sided derivatives stands
    /// (reported with the smaller magnitude); if they disagree in sign the
    /// derivative counts as zero.
    pub fn effective(&self) -> f64 {
        match *self {
            Slope::Smooth(d) => d,
            Slope::Kink { left, right } => {
                if left * right > 0.0 {
                    if left.abs() <= right.abs() {
                        left
                    } else {
                        right
                    }
                } else {
                    0.0
                }
            }
        }
    }

    pub fn is_kink(&self) -> bool {
        matches!(self, Slope::Kink { .. })
    }

    fn from_sides(left: f64, right: f64, distinct: bool) -> Slope {
        if distinct && left != right {
            Slope::Kink { left, right }
        } else {
            Slope::Smooth(right)
        }
    }
}

/// `h` and its derivative at one `θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaPoint {
    pub theta: f64,
    pub value: f64,
    pub derivative: Slope,
}

/// A compactified curve and its derivative at one `ϑ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarthetaPoint {
    pub vartheta: f64,
    pub value: f64,
    pub derivative: Slope,
}

/// Regime selected by `θ` alone. Ties go to the plus-winning side.
pub fn regime_of_theta(theta: f64, cfg: &TugOfWarConfig) -> Regime {
    if theta >= cfg.theta_threshold() {
        Regime::PlusWinning
    } else {
        Regime::MinusWinning
    }
}

/// Off-rates `(k₊ᵒᶠᶠ(θ), k₋ᵒᶠᶠ(θ))` with the given coefficients.
pub(crate) fn theta_off_rates(theta: f64, cfg: &TugOfWarConfig, c: &RegimeCoeffs) -> (f64, f64) {
    let denom = c.a * cfg.nu * theta + c.b;
    let plus = cfg.plus.k_off0 * (1.0 / (denom * cfg.plus.detach_force)).exp();
    let minus = cfg.minus.k_off0 * (cfg.nu * theta / (denom * cfg.minus.detach_force)).exp();
    (plus, minus)
}

/// Value and analytic derivative of `h` using one regime's coefficients.
fn h_branch(theta: f64, cfg: &TugOfWarConfig, regime: Regime) -> (f64, f64) {
    let c = cfg.regime_coeffs(regime);
    let (kp_on, km_on) = (cfg.plus.k_on, cfg.minus.k_on);
    let (kp_off, km_off) = theta_off_rates(theta, cfg, &c);
    let denom = c.a * cfg.nu * theta + c.b;
    let d2 = denom * denom;

    // θ·k₊ᵒᶠᶠ(θ) vanishes at θ = 0 even when the exponent overflows.
    let (plus_term, plus_slope) = if theta == 0.0 {
        (0.0, 0.0)
    } else {
        (
            theta * km_on * kp_off,
            theta * km_on * kp_off * c.a * cfg.nu / (d2 * cfg.plus.detach_force),
        )
    };
    let value = (theta - 1.0) * kp_on * km_on + plus_term - kp_on * km_off;
    let slope = km_on * (kp_on + kp_off)
        - plus_slope
        - kp_on * km_off * cfg.nu * c.b / (d2 * cfg.minus.detach_force);
    (value, slope)
}

fn check_theta(theta: f64) -> Result<()> {
    if theta >= 0.0 && theta.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "theta = {theta} must be finite and >= 0"
        )))
    }
}

/// `h(θ)` in 1/s².
pub fn h_eval(theta: f64, cfg: &TugOfWarConfig) -> Result<f64> {
    check_theta(theta)?;
    Ok(h_branch(theta, cfg, regime_of_theta(theta, cfg)).0)
}

/// `h′(θ)`; one-sided at the regime threshold. At `θ = 0` only the right
/// derivative exists and is returned as smooth.
pub fn h_prime_eval(theta: f64, cfg: &TugOfWarConfig) -> Result<Slope> {
    check_theta(theta)?;
    if theta > 0.0 && theta == cfg.theta_threshold() {
        let left = h_branch(theta, cfg, Regime::MinusWinning).1;
        let right = h_branch(theta, cfg, Regime::PlusWinning).1;
        return Ok(Slope::from_sides(left, right, true));
    }
    Ok(Slope::Smooth(
        h_branch(theta, cfg, regime_of_theta(theta, cfg)).1,
    ))
}

pub fn theta_point(theta: f64, cfg: &TugOfWarConfig) -> Result<ThetaPoint> {
    Ok(ThetaPoint {
        theta,
        value: h_eval(theta, cfg)?,
        derivative: h_prime_eval(theta, cfg)?,
    })
}

/// `lim_{θ→∞} h(θ)/θ = k₋ᵒⁿ(k₊ᵒⁿ + k₀₊ᵒᶠᶠ)`.
pub fn h_asymptotic_slope(cfg: &TugOfWarConfig) -> f64 {
    cfg.minus.k_on * (cfg.plus.k_on + cfg.plus.k_off0)
}

/// `h(0) = −k₊ᵒⁿ(k₋ᵒⁿ + k₀₋ᵒᶠᶠ)`.
pub fn h_at_zero(cfg: &TugOfWarConfig) -> f64 {
    -cfg.plus.k_on * (cfg.minus.k_on + cfg.minus.k_off0)
}

/// Which curve to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Curve {
    /// `h(θ)` itself.
    H,
    /// Compactification with the branch switch at `ϑ = 1`.
    W,
    /// Compactification with the branch switch at `ϑ = θ_c`.
    WHat,
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "h" => Ok(Curve::H),
            "w" => Ok(Curve::W),
            "what" | "w_hat" => Ok(Curve::WHat),
            other => Err(Error::Config(format!(
                "unknown curve `{other}` (expected w, what or h)"
            ))),
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Curve::H => "h",
            Curve::W => "w",
            Curve::WHat => "what",
        })
    }
}

/// Map of `θ ∈ [0, ∞)` onto `ϑ ∈ [0, 2)` with branch point `c ∈ (0, 2)`:
///
/// ```text
/// θ(ϑ) = ϑ                   for ϑ ≤ c
///        (2 − c)·c / (2 − ϑ) for c < ϑ < 2
/// curve(ϑ) = h(ϑ)                           for ϑ ≤ c
///            (2 − ϑ)/(2 − c) · h(θ(ϑ))       for c < ϑ < 2
/// ```
///
/// `c = 1` gives `w`, `c = θ_c` gives `ŵ`. The prefactor is positive, so
/// signs and zeros of the curve are those of `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Compactification {
    breakpoint: f64,
}

impl Compactification {
    pub fn w() -> Self {
        Self { breakpoint: 1.0 }
    }

    /// Whether `ŵ` is unavailable because `θ_c` does not lie in `(0, 2)`.
    pub fn hat_falls_back(cfg: &TugOfWarConfig) -> bool {
        cfg.theta_threshold() >= 2.0
    }

    /// `ŵ`, or `w` when [`Self::hat_falls_back`] holds.
    pub fn w_hat(cfg: &TugOfWarConfig) -> Self {
        if Self::hat_falls_back(cfg) {
            Self::w()
        } else {
            Self {
                breakpoint: cfg.theta_threshold(),
            }
        }
    }

    /// Compactification for `curve`; `None` for [`Curve::H`].
    pub fn for_curve(curve: Curve, cfg: &TugOfWarConfig) -> Option<Self> {
        match curve {
            Curve::H => None,
            Curve::W => Some(Self::w()),
            Curve::WHat => Some(Self::w_hat(cfg)),
        }
    }

    pub fn breakpoint(&self) -> f64 {
        self.breakpoint
    }

    pub fn to_theta(&self, vartheta: f64) -> f64 {
        let c = self.breakpoint;
        if vartheta <= c {
            vartheta
        } else {
            (2.0 - c) * c / (2.0 - vartheta)
        }
    }

    pub fn to_vartheta(&self, theta: f64) -> f64 {
        let c = self.breakpoint;
        if theta <= c {
            theta
        } else {
            2.0 - (2.0 - c) * c / theta
        }
    }

    /// Points of `[0, 2)` where the curve may have a corner: the branch
    /// point and the image of the regime threshold.
    pub fn corners(&self, cfg: &TugOfWarConfig) -> Vec<f64> {
        let mut pts = vec![self.breakpoint, self.to_vartheta(cfg.theta_threshold())];
        pts.retain(|p| (0.0..2.0).contains(p));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn check(&self, vartheta: f64) -> Result<()> {
        if (0.0..2.0).contains(&vartheta) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "vartheta = {vartheta} outside [0, 2)"
            )))
        }
    }

    fn scale(&self, vartheta: f64) -> f64 {
        if vartheta <= self.breakpoint {
            1.0
        } else {
            (2.0 - vartheta) / (2.0 - self.breakpoint)
        }
    }

    pub fn value(&self, vartheta: f64, cfg: &TugOfWarConfig) -> Result<f64> {
        self.check(vartheta)?;
        let theta = self.to_theta(vartheta);
        Ok(self.scale(vartheta) * h_branch(theta, cfg, regime_of_theta(theta, cfg)).0)
    }

    /// Derivative with respect to `ϑ`; one-sided at [`Self::corners`].
    pub fn slope(&self, vartheta: f64, cfg: &TugOfWarConfig) -> Result<Slope> {
        self.check(vartheta)?;
        let c = self.breakpoint;
        let theta = self.to_theta(vartheta);
        let threshold = cfg.theta_threshold();
        let on_threshold = theta == threshold || vartheta == self.to_vartheta(threshold);

        let branch = |identity: bool, regime: Regime| -> f64 {
            let (value, slope) = h_branch(theta, cfg, regime);
            if identity {
                slope
            } else {
                (theta * slope - value) / (2.0 - c)
            }
        };

        let right_identity = vartheta < c;
        let right_regime = if on_threshold || theta >= threshold {
            Regime::PlusWinning
        } else {
            Regime::MinusWinning
        };
        let right = branch(right_identity, right_regime);
        if vartheta == 0.0 {
            return Ok(Slope::Smooth(right));
        }
        let left_identity = vartheta <= c;
        let left_regime = if on_threshold || theta <= threshold {
            Regime::MinusWinning
        } else {
            Regime::PlusWinning
        };
        let distinct = left_identity != right_identity || left_regime != right_regime;
        let left = if distinct {
            branch(left_identity, left_regime)
        } else {
            right
        };
        Ok(Slope::from_sides(left, right, distinct))
    }

    pub fn point(&self, vartheta: f64, cfg: &TugOfWarConfig) -> Result<VarthetaPoint> {
        Ok(VarthetaPoint {
            vartheta,
            value: self.value(vartheta, cfg)?,
            derivative: self.slope(vartheta, cfg)?,
        })
    }
}

/// `w(ϑ)`.
pub fn w_eval(vartheta: f64, cfg: &TugOfWarConfig) -> Result<f64> {
    Compactification::w().value(vartheta, cfg)
}

/// `w′(ϑ)`, one-sided at `ϑ = 1` and at the image of `θ_c`.
pub fn w_prime_eval(vartheta: f64, cfg: &TugOfWarConfig) -> Result<Slope> {
    Compactification::w().slope(vartheta, cfg)
}

/// `ŵ(ϑ)`; equals `w` when `θ_c ≥ 2`.
pub fn w_hat_eval(vartheta: f64, cfg: &TugOfWarConfig) -> Result<f64> {
    Compactification::w_hat(cfg).value(vartheta, cfg)
}

pub fn w_hat_prime_eval(vartheta: f64, cfg: &TugOfWarConfig) -> Result<Slope> {
    Compactification::w_hat(cfg).slope(vartheta, cfg)
}

/// Root of `w` mapped back to `θ`.
pub fn map_root(vartheta_star: f64) -> f64 {
    Compactification::w().to_theta(vartheta_star)
}

/// Root of `ŵ` mapped back to `θ`.
pub fn map_root_hat(vartheta_star: f64, cfg: &TugOfWarConfig) -> f64 {
    Compactification::w_hat(cfg).to_theta(vartheta_star)
}
