//! Mean-field tug-of-war model.
//!
//! A cargo carries `N₊` plus-end (kinesin-like) and `N₋` minus-end
//! (dynein-like) motors. Bound fractions `y = n₊/N₊` and `z = n₋/N₋` evolve
//! by load-independent attachment and load-dependent detachment, where the
//! load felt by each bound motor follows from equal load sharing within a
//! team and velocity matching between the two teams.
//!
//! Units throughout: forces in pN, speeds in nm/s, rates in 1/s. The external
//! load on the cargo is fixed at zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// External load on the cargo (pN). Only the unloaded case is modelled.
pub const EXTERNAL_LOAD: f64 = 0.0;

/// Rate, force and speed constants of a single motor species.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorParams {
    /// Attachment rate of an unbound motor (1/s).
    pub k_on: f64,
    /// Detachment rate at zero load (1/s).
    pub k_off0: f64,
    /// Detachment force scale (pN).
    pub detach_force: f64,
    /// Stall force (pN).
    pub stall_force: f64,
    /// Zero-load forward speed (nm/s).
    pub forward_speed: f64,
    /// Speed amplitude beyond stall (nm/s).
    pub backward_speed: f64,
}

impl MotorParams {
    pub fn new(
        k_on: f64,
        k_off0: f64,
        detach_force: f64,
        stall_force: f64,
        forward_speed: f64,
        backward_speed: f64,
    ) -> Self {
        Self {
            k_on,
            k_off0,
            detach_force,
            stall_force,
            forward_speed,
            backward_speed,
        }
    }

    /// Checks that every constant is strictly positive and finite. `species`
    /// is used as a suffix in the error's field name.
    pub fn validate(&self, species: &str) -> Result<()> {
        let fields = [
            ("k_on", self.k_on),
            ("k_off0", self.k_off0),
            ("F_d", self.detach_force),
            ("F_s", self.stall_force),
            ("V_F", self.forward_speed),
            ("V_B", self.backward_speed),
        ];
        for (name, value) in fields {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(
                    format!("{name}_{species}"),
                    format!("must be positive and finite, got {value}"),
                ));
            }
        }
        Ok(())
    }

    /// Piecewise-linear force-velocity relation of one motor. `force` is the
    /// load opposing the motor's preferred direction.
    pub fn velocity(&self, force: f64) -> f64 {
        if force <= 0.0 {
            self.forward_speed
        } else if force <= self.stall_force {
            self.forward_speed * (1.0 - force / self.stall_force)
        } else {
            self.backward_speed * (1.0 - force / self.stall_force)
        }
    }
}

/// Which team's stall criterion dominates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `n₊F_s⁺ ≥ n₋F_s⁻`: plus motors pull the cargo forward.
    PlusWinning,
    /// `n₊F_s⁺ < n₋F_s⁻`.
    MinusWinning,
}

/// Load-distribution coefficients `(a, b)` of a regime (1/pN).
///
/// The cargo force is `n₊n₋ / (a·n₊ + b·n₋)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeCoeffs {
    pub a: f64,
    pub b: f64,
    pub regime: Regime,
}

/// Bound fractions of the two motor teams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotorFractions {
    pub y: f64,
    pub z: f64,
}

impl MotorFractions {
    /// Fractions admissible for flow evaluation: both in `(0, 1]`.
    pub fn new(y: f64, z: f64) -> Result<Self> {
        for (name, v) in [("y", y), ("z", z)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::Domain(format!("{name} = {v} outside (0, 1]")));
            }
        }
        Ok(Self { y, z })
    }
}

/// Full parameter set of the two-species model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TugOfWarConfig {
    pub plus: MotorParams,
    pub minus: MotorParams,
    /// Motor-count ratio `N₊/N₋`.
    pub nu: f64,
    pub n_plus_total: u32,
    pub n_minus_total: u32,
}

impl TugOfWarConfig {
    /// Builds a config with `nu = n_plus_total / n_minus_total`.
    pub fn new(
        plus: MotorParams,
        minus: MotorParams,
        n_plus_total: u32,
        n_minus_total: u32,
    ) -> Result<Self> {
        if n_minus_total == 0 {
            return Err(Error::invalid("N_minus", "must be a positive integer"));
        }
        let cfg = Self {
            plus,
            minus,
            nu: n_plus_total as f64 / n_minus_total as f64,
            n_plus_total,
            n_minus_total,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Overrides the mean-field ratio without touching the integer counts.
    ///
    /// Parameter sweeps over `nu` use this; the counts then only enter the
    /// cargo force scale and the stochastic simulator.
    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        self.nu = nu;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.plus.validate("plus")?;
        self.minus.validate("minus")?;
        if !(self.nu.is_finite() && self.nu > 0.0) {
            return Err(Error::invalid(
                "nu",
                format!("must be positive and finite, got {}", self.nu),
            ));
        }
        if self.n_plus_total == 0 {
            return Err(Error::invalid("N_plus", "must be a positive integer"));
        }
        if self.n_minus_total == 0 {
            return Err(Error::invalid("N_minus", "must be a positive integer"));
        }
        Ok(())
    }

    pub fn external_load(&self) -> f64 {
        EXTERNAL_LOAD
    }

    /// Slope of the switching line `z = y·ν·F_s⁺/F_s⁻` in the `(y, z)` plane.
    pub fn switching_slope(&self) -> f64 {
        self.nu * self.plus.stall_force / self.minus.stall_force
    }

    /// Threshold `θ_c = F_s⁻/(ν F_s⁺)` of `θ = y/z` at which the winning team
    /// changes. `θ ≥ θ_c` is plus-winning.
    pub fn theta_threshold(&self) -> f64 {
        self.minus.stall_force / (self.nu * self.plus.stall_force)
    }

    /// Winning regime at `(y, z)`. Points on the switching line count as
    /// plus-winning.
    pub fn regime_of(&self, y: f64, z: f64) -> Result<Regime> {
        check_fractions(y, z)?;
        if z <= y * self.switching_slope() {
            Ok(Regime::PlusWinning)
        } else {
            Ok(Regime::MinusWinning)
        }
    }

    pub fn regime_coeffs(&self, regime: Regime) -> RegimeCoeffs {
        let (p, m) = (&self.plus, &self.minus);
        let (a, b) = match regime {
            Regime::PlusWinning => {
                let sum = p.forward_speed + m.backward_speed;
                (
                    m.backward_speed / (m.stall_force * sum),
                    p.forward_speed / (p.stall_force * sum),
                )
            }
            Regime::MinusWinning => {
                let sum = p.backward_speed + m.forward_speed;
                (
                    m.forward_speed / (m.stall_force * sum),
                    p.backward_speed / (p.stall_force * sum),
                )
            }
        };
        RegimeCoeffs { a, b, regime }
    }

    /// Coefficients of the regime active at `(y, z)`.
    pub fn coeffs_at(&self, y: f64, z: f64) -> Result<RegimeCoeffs> {
        Ok(self.regime_coeffs(self.regime_of(y, z)?))
    }

    /// Per-motor detachment rates `(k₊ᵒᶠᶠ, k₋ᵒᶠᶠ)` at `(y, z)`.
    pub fn off_rates(&self, y: f64, z: f64) -> Result<(f64, f64)> {
        let c = self.coeffs_at(y, z)?;
        Ok(self.off_rates_with(y, z, &c))
    }

    /// Off-rates with explicitly chosen coefficients; used for one-sided
    /// evaluations at the switching line.
    pub(crate) fn off_rates_with(&self, y: f64, z: f64, c: &RegimeCoeffs) -> (f64, f64) {
        let denom = c.a * self.nu * y + c.b * z;
        let plus = self.plus.k_off0 * (z / (denom * self.plus.detach_force)).exp();
        let minus = self.minus.k_off0 * (self.nu * y / (denom * self.minus.detach_force)).exp();
        (plus, minus)
    }

    /// Right-hand side `(f, g) = (dy/dt, dz/dt)` of the mean-field flow.
    pub fn flow(&self, y: f64, z: f64) -> Result<(f64, f64)> {
        let (k_plus, k_minus) = self.off_rates(y, z)?;
        let f = self.plus.k_on - y * (self.plus.k_on + k_plus);
        let g = self.minus.k_on - z * (self.minus.k_on + k_minus);
        Ok((f, g))
    }

    /// Cargo velocity (nm/s) at `(y, z)`; positive towards the plus end.
    pub fn cargo_velocity(&self, y: f64, z: f64) -> Result<f64> {
        let regime = self.regime_of(y, z)?;
        let (p, m) = (&self.plus, &self.minus);
        let pull_plus = y * self.nu * p.stall_force;
        let pull_minus = z * m.stall_force;
        let denom = match regime {
            Regime::PlusWinning => pull_plus / p.forward_speed + pull_minus / m.backward_speed,
            Regime::MinusWinning => pull_plus / p.backward_speed + pull_minus / m.forward_speed,
        };
        Ok((pull_plus - pull_minus) / denom)
    }

    /// Cargo force (pN) at `(y, z)`, scaled by `N₊`.
    pub fn cargo_force(&self, y: f64, z: f64) -> Result<f64> {
        let c = self.coeffs_at(y, z)?;
        Ok(y * z * self.n_plus_total as f64 / (c.a * self.nu * y + c.b * z))
    }

    /// Cargo force (pN) for integer numbers of bound motors.
    ///
    /// Zero when the losing team has no bound motor.
    pub fn cargo_force_discrete(&self, n_plus: u32, n_minus: u32) -> Result<f64> {
        if n_plus == 0 && n_minus == 0 {
            return Err(Error::Domain("no motor bound: n+ = n- = 0".into()));
        }
        let (p, m) = (&self.plus, &self.minus);
        let hold_plus = n_plus as f64 * p.stall_force;
        let hold_minus = n_minus as f64 * m.stall_force;
        if hold_plus >= hold_minus {
            if n_minus == 0 {
                return Ok(0.0);
            }
            Ok((p.forward_speed + m.backward_speed)
                / (p.forward_speed / hold_plus + m.backward_speed / hold_minus))
        } else {
            if n_plus == 0 {
                return Ok(0.0);
            }
            Ok((p.backward_speed + m.forward_speed)
                / (p.backward_speed / hold_plus + m.forward_speed / hold_minus))
        }
    }
}

fn check_fractions(y: f64, z: f64) -> Result<()> {
    if !(y >= 0.0 && z >= 0.0) {
        return Err(Error::Domain(format!(
            "negative fraction: y = {y}, z = {z}"
        )));
    }
    if y == 0.0 && z == 0.0 {
        return Err(Error::Domain("y = z = 0 is outside the model".into()));
    }
    Ok(())
}
