//! Stationary states: root finding on the compactified curve, reconstruction
//! of `(y*, z*)`, stability by derivative sign and by the 2D Jacobian, and
//! parameter scans for bifurcations.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Regime, TugOfWarConfig};
use crate::reduction::{
    h_eval, h_prime_eval, regime_of_theta, theta_off_rates, Compactification, Curve,
};

pub const DEFAULT_GRID_POINTS: usize = 4096;
pub const DEFAULT_TOL: f64 = 1e-12;
/// `|h′|` at or below this is reported as [`Stability::Marginal`] (1/s²).
pub const MARGINAL_TOL: f64 = 1e-9;
/// Right edge of the root grid is `2 − RIGHT_MARGIN`.
pub const RIGHT_MARGIN: f64 = 1e-6;
/// Roots closer than this (relative to `max(1, θ)`) are merged.
pub const MERGE_DISTANCE: f64 = 1e-9;
pub const MAX_BISECTIONS: usize = 200;
/// Tangent-root candidates must have `|h|` and `|h′|` below this.
pub const TANGENT_CONFIRM: f64 = 1e-6;
/// `|f| + |g|` allowed at a point handed to [`jacobian_at`] (1/s).
pub const FIXED_POINT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    pub grid_points: usize,
    pub tol: f64,
    /// Curve scanned for sign changes; [`Curve::H`] is not accepted.
    pub curve: Curve,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            tol: DEFAULT_TOL,
            curve: Curve::WHat,
        }
    }
}

/// A sign-change bracket in `θ` that bisection did not shrink in time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootSet {
    /// Distinct roots `θ*`, ascending.
    pub roots: Vec<f64>,
    /// Roots accepted through the tangency test rather than a sign change.
    pub tangent: Vec<f64>,
    pub unconverged: Vec<Bracket>,
    pub warnings: Vec<String>,
}

/// Finds every root of `h` through sign changes of a compactified curve.
///
/// The curve is sampled on a uniform grid over `[0, 2 − δ]` plus its corner
/// points; if it is still negative at `2 − δ` the search continues in `θ`
/// beyond the grid. Each sign change is bisected in `θ` down to floating-point
/// resolution. At local minima of `|curve|` without a sign change a
/// golden-section search looks for the nearby extremum: if it crosses zero the
/// two enclosed roots are bisected, if it only touches zero (within `√tol`)
/// the point is kept as a tangent root when `|h|` and `|h′|` are both small.
pub fn find_roots(cfg: &TugOfWarConfig, opts: &RootOptions) -> Result<RootSet> {
    if opts.grid_points < 64 {
        return Err(Error::Domain(format!(
            "grid_points = {} (need at least 64)",
            opts.grid_points
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::Domain(format!(
            "tol = {} must be positive",
            opts.tol
        )));
    }
    let comp = Compactification::for_curve(opts.curve, cfg)
        .ok_or_else(|| Error::Domain("roots are searched on w or what, not h".into()))?;

    let mut set = RootSet::default();
    if opts.curve == Curve::WHat && Compactification::hat_falls_back(cfg) {
        set.warnings.push(format!(
            "theta threshold {} >= 2: what falls back to w",
            cfg.theta_threshold()
        ));
    }

    let n = opts.grid_points;
    let right = 2.0 - RIGHT_MARGIN;
    let mut grid: Vec<f64> = (0..n).map(|i| right * i as f64 / (n - 1) as f64).collect();
    grid.extend(comp.corners(cfg).into_iter().filter(|&c| c < right));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let values = grid
        .iter()
        .map(|&v| comp.value(v, cfg))
        .collect::<Result<Vec<_>>>()?;

    let mut found = Vec::new();
    let push_theta =
        |set: &mut RootSet, found: &mut Vec<f64>, lo: f64, hi: f64| match bisect_theta(lo, hi, cfg)
        {
            Ok(root) => found.push(root),
            Err(b) => set.unconverged.push(b),
        };
    let push_bracket = |set: &mut RootSet, found: &mut Vec<f64>, lo: f64, hi: f64| {
        push_theta(set, found, comp.to_theta(lo), comp.to_theta(hi))
    };

    for i in 0..grid.len() {
        if values[i] == 0.0 {
            found.push(comp.to_theta(grid[i]));
        }
        if i + 1 < grid.len() && values[i] * values[i + 1] < 0.0 {
            push_bracket(&mut set, &mut found, grid[i], grid[i + 1]);
        }
    }

    // Still negative at the grid edge: an off-rate saturates at a huge value
    // and the last root lies beyond θ(2 − δ). Out there the off-rates have
    // settled, so h/θ is monotone; step out geometrically until h > 0.
    if values.last().is_some_and(|&v| v < 0.0) {
        let mut lo = comp.to_theta(right);
        loop {
            let hi = 2.0 * lo;
            if !hi.is_finite() {
                set.warnings
                    .push(format!("h still negative at theta = {lo:e}"));
                break;
            }
            if h_eval(hi, cfg)? >= 0.0 {
                push_theta(&mut set, &mut found, lo, hi);
                break;
            }
            lo = hi;
        }
    }

    let touch = opts.tol.sqrt();
    for i in 1..grid.len() - 1 {
        let (l, m, r) = (values[i - 1], values[i], values[i + 1]);
        let same_sign = (l > 0.0 && m > 0.0 && r > 0.0) || (l < 0.0 && m < 0.0 && r < 0.0);
        if !same_sign || !(m.abs() < l.abs() && m.abs() <= r.abs()) {
            continue;
        }
        let sign = m.signum();
        let (lo, hi) = (grid[i - 1], grid[i + 1]);
        let (x, gx) = golden_min(|v| sign * comp.value(v, cfg).unwrap_or(f64::NAN), lo, hi);
        if gx < 0.0 {
            push_bracket(&mut set, &mut found, lo, x);
            push_bracket(&mut set, &mut found, x, hi);
        } else if gx == 0.0 {
            found.push(comp.to_theta(x));
        } else if gx <= touch {
            let theta = comp.to_theta(x);
            let h = h_eval(theta, cfg)?;
            let dh = h_prime_eval(theta, cfg)?.effective();
            if h.abs() <= TANGENT_CONFIRM && dh.abs() <= TANGENT_CONFIRM {
                found.push(theta);
                set.tangent.push(theta);
            }
        }
    }

    found.sort_by(f64::total_cmp);
    for theta in found {
        match set.roots.last() {
            Some(&last) if theta - last <= MERGE_DISTANCE * last.max(1.0) => {}
            _ => set.roots.push(theta),
        }
    }
    if set.roots.is_empty() {
        return Err(Error::NoRoots);
    }
    Ok(set)
}

/// Bisection on `h` over a sign-change bracket in `θ`, run to floating-point
/// resolution. Returns the bracket if it is still wider than `1e-12·max(1, θ)`
/// after [`MAX_BISECTIONS`] halvings.
fn bisect_theta(
    mut lo: f64,
    mut hi: f64,
    cfg: &TugOfWarConfig,
) -> std::result::Result<f64, Bracket> {
    let h = |t: f64| h_eval(t, cfg).unwrap_or(f64::NAN);
    let mut f_lo = h(lo);
    let mut f_hi = h(hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = h(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    if hi - lo > 1e-12 * hi.max(1.0) {
        return Err(Bracket {
            lower: lo,
            upper: hi,
        });
    }
    Ok(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

/// Golden-section minimum of `g` on `[a, b]`. Stops early at the first
/// negative value.
fn golden_min(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if gc < 0.0 {
            return (c, gc);
        }
        if gd < 0.0 {
            return (d, gd);
        }
        if b - a <= 1e-15 * b.abs().max(1.0) {
            break;
        }
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    if gc <= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

impl Stability {
    pub fn from_slope(h_prime: f64) -> Self {
        if h_prime > MARGINAL_TOL {
            Stability::Stable
        } else if h_prime < -MARGINAL_TOL {
            Stability::Unstable
        } else {
            Stability::Marginal
        }
    }
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A stationary state of the mean-field flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryState {
    pub theta: f64,
    pub y: f64,
    pub z: f64,
    /// Cargo velocity (nm/s).
    pub velocity: f64,
    /// Cargo force (pN).
    pub force: f64,
    /// `h′(θ*)` after the corner sign rule (1/s²).
    pub h_prime: f64,
    pub stability: Stability,
}

/// Cargo velocity at a stationary state with ratio `θ*`.
pub fn steady_velocity(theta: f64, cfg: &TugOfWarConfig) -> f64 {
    let (p, m) = (&cfg.plus, &cfg.minus);
    let pull_plus = theta * cfg.nu * p.stall_force;
    let denom = match regime_of_theta(theta, cfg) {
        Regime::PlusWinning => pull_plus / p.forward_speed + m.stall_force / m.backward_speed,
        Regime::MinusWinning => pull_plus / p.backward_speed + m.stall_force / m.forward_speed,
    };
    (pull_plus - m.stall_force) / denom
}

/// Rebuilds the stationary state belonging to a root `θ*` of `h`.
pub fn steady_from_theta(theta: f64, cfg: &TugOfWarConfig) -> Result<StationaryState> {
    let residual = h_eval(theta, cfg)?;
    if !(theta > 0.0) || !(residual.abs() <= TANGENT_CONFIRM * theta.max(1.0)) {
        return Err(Error::NotARoot {
            theta,
            residual: residual.abs(),
        });
    }
    let coeffs = cfg.regime_coeffs(regime_of_theta(theta, cfg));
    let (kp_off, km_off) = theta_off_rates(theta, cfg, &coeffs);
    let y = cfg.plus.k_on / (cfg.plus.k_on + kp_off);
    let z = cfg.minus.k_on / (cfg.minus.k_on + km_off);
    let h_prime = h_prime_eval(theta, cfg)?.effective();
    Ok(StationaryState {
        theta,
        y,
        z,
        velocity: steady_velocity(theta, cfg),
        force: cfg.cargo_force(y, z)?,
        h_prime,
        stability: Stability::from_slope(h_prime),
    })
}

/// Trace and determinant of the flow's Jacobian at a fixed point, from the
/// closed forms that use the fixed-point relations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JacobianSummary {
    pub trace: f64,
    pub determinant: f64,
    pub stable: bool,
}

pub fn jacobian_at(y: f64, z: f64, cfg: &TugOfWarConfig) -> Result<JacobianSummary> {
    let (f, g) = cfg.flow(y, z)?;
    let residual = f.abs() + g.abs();
    if !(residual <= FIXED_POINT_TOL) {
        return Err(Error::NotAFixedPoint { y, z, residual });
    }
    let c = cfg.coeffs_at(y, z)?;
    let (kp_on, km_on) = (cfg.plus.k_on, cfg.minus.k_on);
    let (fd_plus, fd_minus) = (cfg.plus.detach_force, cfg.minus.detach_force);
    let nu = cfg.nu;
    let d = c.a * nu * y + c.b * z;
    let d2 = d * d;

    let trace = (1.0 - y) * z * c.a * nu * kp_on / (d2 * fd_plus)
        + (1.0 - z) * y * c.b * nu * km_on / (d2 * fd_minus)
        - kp_on / y
        - km_on / z;
    let determinant = (1.0 / (y * z)
        - (1.0 - z) * c.b * nu / (d2 * fd_minus)
        - (1.0 - y) * c.a * nu / (d2 * fd_plus))
        * kp_on
        * km_on;
    Ok(JacobianSummary {
        trace,
        determinant,
        stable: determinant > 0.0,
    })
}

/// Stationary states with their Jacobians and the root-finding diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    pub states: Vec<StationaryState>,
    pub jacobians: Vec<JacobianSummary>,
    pub roots: RootSet,
}

impl Analysis {
    pub fn stable_count(&self) -> usize {
        count_stable(&self.states)
    }
}

pub fn count_stable(states: &[StationaryState]) -> usize {
    states
        .iter()
        .filter(|s| s.stability == Stability::Stable)
        .count()
}

/// Finds and classifies all stationary states, checking every label against
/// the sign of the Jacobian determinant.
pub fn analyze(cfg: &TugOfWarConfig, opts: &RootOptions) -> Result<Analysis> {
    let roots = find_roots(cfg, opts)?;
    let mut states = Vec::with_capacity(roots.roots.len());
    let mut jacobians = Vec::with_capacity(roots.roots.len());
    for &theta in &roots.roots {
        let mut state = steady_from_theta(theta, cfg)?;
        if roots.tangent.contains(&theta) {
            state.stability = Stability::Marginal;
        }
        let jac = jacobian_at(state.y, state.z, cfg)?;
        if state.stability != Stability::Marginal
            && (state.h_prime > 0.0) != (jac.determinant > 0.0)
        {
            return Err(Error::StabilityMismatch {
                theta,
                h_prime: state.h_prime,
                determinant: jac.determinant,
            });
        }
        states.push(state);
        jacobians.push(jac);
    }
    Ok(Analysis {
        states,
        jacobians,
        roots,
    })
}

/// [`analyze`] with default options, keeping only the states.
pub fn classify_all(cfg: &TugOfWarConfig) -> Result<Vec<StationaryState>> {
    analyze(cfg, &RootOptions::default()).map(|a| a.states)
}

/// A field of [`crate::model::MotorParams`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MotorField {
    KOn,
    KOff0,
    DetachForce,
    StallForce,
    ForwardSpeed,
    BackwardSpeed,
}

impl MotorField {
    const ALL: [(MotorField, &'static str); 6] = [
        (MotorField::KOn, "k_on"),
        (MotorField::KOff0, "k_off0"),
        (MotorField::DetachForce, "F_d"),
        (MotorField::StallForce, "F_s"),
        (MotorField::ForwardSpeed, "V_F"),
        (MotorField::BackwardSpeed, "V_B"),
    ];

    fn name(self) -> &'static str {
        Self::ALL.iter().find(|(f, _)| *f == self).unwrap().1
    }

    fn slot(self, m: &mut crate::model::MotorParams) -> &mut f64 {
        match self {
            MotorField::KOn => &mut m.k_on,
            MotorField::KOff0 => &mut m.k_off0,
            MotorField::DetachForce => &mut m.detach_force,
            MotorField::StallForce => &mut m.stall_force,
            MotorField::ForwardSpeed => &mut m.forward_speed,
            MotorField::BackwardSpeed => &mut m.backward_speed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Species {
    Plus,
    Minus,
    /// Both species set to the same value.
    Both,
}

/// Parameter varied by [`scan_parameter`]. Names follow the config keys:
/// `V_F_plus`, `k_on_minus`, `nu`; a bare field name such as `V_F` sets it
/// for both species at once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanParameter {
    Motor(MotorField, Species),
    Nu,
}

impl ScanParameter {
    pub fn apply(&self, cfg: &TugOfWarConfig, value: f64) -> Result<TugOfWarConfig> {
        let mut out = *cfg;
        match *self {
            ScanParameter::Nu => return out.with_nu(value),
            ScanParameter::Motor(field, species) => {
                if matches!(species, Species::Plus | Species::Both) {
                    *field.slot(&mut out.plus) = value;
                }
                if matches!(species, Species::Minus | Species::Both) {
                    *field.slot(&mut out.minus) = value;
                }
            }
        }
        out.validate()?;
        Ok(out)
    }
}

impl FromStr for ScanParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "nu" {
            return Ok(ScanParameter::Nu);
        }
        for (field, name) in MotorField::ALL {
            let species = match s.strip_prefix(name) {
                Some("") => Species::Both,
                Some("_plus") => Species::Plus,
                Some("_minus") => Species::Minus,
                _ => continue,
            };
            return Ok(ScanParameter::Motor(field, species));
        }
        Err(Error::Config(format!(
            "unknown parameter `{s}` (expected nu, a config key such as V_F_plus, \
             or a bare field k_on, k_off0, F_d, F_s, V_F, V_B)"
        )))
    }
}

impl fmt::Display for ScanParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanParameter::Nu => f.write_str("nu"),
            ScanParameter::Motor(field, Species::Both) => f.write_str(field.name()),
            ScanParameter::Motor(field, Species::Plus) => write!(f, "{}_plus", field.name()),
            ScanParameter::Motor(field, Species::Minus) => write!(f, "{}_minus", field.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub value: f64,
    pub states: Vec<StationaryState>,
    pub stable_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ScanPoint {
    fn has_marginal(&self) -> bool {
        self.states
            .iter()
            .any(|s| s.stability == Stability::Marginal)
    }
}

/// A parameter interval over which the number of stable states changes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bifurcation {
    /// Grid values enclosing the change.
    pub lower: f64,
    pub upper: f64,
    pub stable_below: usize,
    pub stable_above: usize,
    /// Parameter value after refinement.
    pub refined_value: f64,
    /// Root with the smallest `|h′|` at `refined_value`.
    pub theta: f64,
    pub h_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub parameter: String,
    pub values: Vec<f64>,
    pub points: Vec<ScanPoint>,
    pub bifurcations: Vec<Bifurcation>,
}

fn scan_point(
    cfg: &TugOfWarConfig,
    param: ScanParameter,
    value: f64,
    opts: &RootOptions,
) -> ScanPoint {
    let result = param
        .apply(cfg, value)
        .and_then(|c| analyze(&c, opts).map(|a| a.states));
    match result {
        Ok(states) => ScanPoint {
            value,
            stable_count: count_stable(&states),
            states,
            error: None,
        },
        Err(e) => ScanPoint {
            value,
            states: Vec::new(),
            stable_count: 0,
            error: Some(e.to_string()),
        },
    }
}

/// Classifies the stationary states at every grid value and locates the
/// parameter values where the number of stable states changes.
///
/// Each interval is refined by bisection on the stable count, first to a
/// width of `1e-8·scale` and then on to floating-point resolution so the
/// reported root sits at the tangency. Grid points are evaluated in
/// parallel; results keep grid order.
pub fn scan_parameter(
    cfg: &TugOfWarConfig,
    param: ScanParameter,
    values: &[f64],
    opts: &RootOptions,
) -> Result<ScanResult> {
    if values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Domain(
            "scan grid must be strictly increasing".into(),
        ));
    }
    let points: Vec<ScanPoint> = values
        .par_iter()
        .map(|&v| scan_point(cfg, param, v, opts))
        .collect();

    let mut bifurcations = Vec::new();
    for (i, pt) in points.iter().enumerate() {
        if pt.error.is_none() && pt.has_marginal() {
            let (theta, h_prime) = most_marginal(&pt.states);
            bifurcations.push(Bifurcation {
                lower: pt.value,
                upper: pt.value,
                stable_below: pt.stable_count,
                stable_above: pt.stable_count,
                refined_value: pt.value,
                theta,
                h_prime,
            });
        }
        let Some(next) = points.get(i + 1) else { break };
        if pt.error.is_some() || next.error.is_some() || pt.stable_count == next.stable_count {
            continue;
        }
        bifurcations.push(refine(cfg, param, pt, next, opts));
    }

    Ok(ScanResult {
        parameter: param.to_string(),
        values: values.to_vec(),
        points,
        bifurcations,
    })
}

fn most_marginal(states: &[StationaryState]) -> (f64, f64) {
    states
        .iter()
        .min_by(|a, b| a.h_prime.abs().total_cmp(&b.h_prime.abs()))
        .map(|s| (s.theta, s.h_prime))
        .unwrap_or((f64::NAN, f64::NAN))
}

fn refine(
    cfg: &TugOfWarConfig,
    param: ScanParameter,
    lower: &ScanPoint,
    upper: &ScanPoint,
    opts: &RootOptions,
) -> Bifurcation {
    let mut lo = lower.clone();
    let mut hi = upper.clone();
    for _ in 0..MAX_BISECTIONS {
        let mid = lo.value + 0.5 * (hi.value - lo.value);
        if mid <= lo.value || mid >= hi.value {
            break;
        }
        let pt = scan_point(cfg, param, mid, opts);
        if pt.error.is_some() {
            break;
        }
        if pt.stable_count == lo.stable_count {
            lo = pt;
        } else {
            hi = pt;
        }
    }
    let (a, b) = (most_marginal(&lo.states), most_marginal(&hi.states));
    let (value, (theta, h_prime)) = if a.1.abs() <= b.1.abs() {
        (lo.value, a)
    } else {
        (hi.value, b)
    };
    Bifurcation {
        lower: lower.value,
        upper: upper.value,
        stable_below: lower.stable_count,
        stable_above: upper.stable_count,
        refined_value: value,
        theta,
        h_prime,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::MotorParams;

    fn sym(vf: f64) -> TugOfWarConfig {
        let m = MotorParams::new(1.0, 1.0, 1.0, 1.0, vf, 10.0);
        TugOfWarConfig::new(m, m, 1, 1).unwrap()
    }

    #[test]
    fn single_symmetric_root() {
        let set = find_roots(&sym(10.0), &RootOptions::default()).unwrap();
        assert_eq!(set.roots, vec![1.0]);
        assert!(set.unconverged.is_empty() && set.warnings.is_empty());
    }

    #[test]
    fn options_validated() {
        let cfg = sym(10.0);
        let few = RootOptions {
            grid_points: 10,
            ..Default::default()
        };
        assert!(find_roots(&cfg, &few).is_err());
        let h = RootOptions {
            curve: Curve::H,
            ..Default::default()
        };
        assert!(find_roots(&cfg, &h).is_err());
    }

    #[test]
    fn steady_state_at_one() {
        let e = std::f64::consts::E;
        let s = steady_from_theta(1.0, &sym(10.0)).unwrap();
        assert!((s.y - 1.0 / (1.0 + e)).abs() < 1e-15);
        assert!((s.z - 1.0 / (1.0 + e)).abs() < 1e-15);
        assert_eq!(s.velocity, 0.0);
        assert!((s.h_prime - 1.0).abs() < 1e-12);
        assert_eq!(s.stability, Stability::Stable);
        assert!(matches!(
            steady_from_theta(0.5, &sym(10.0)),
            Err(Error::NotARoot { .. })
        ));
    }

    #[test]
    fn velocity_tends_to_forward_speed() {
        let cfg = sym(30.0);
        assert!((steady_velocity(1e9, &cfg) - 30.0).abs() < 1e-6);
        assert!((steady_velocity(1e-12, &cfg) + 30.0).abs() < 1e-6);
    }

    #[test]
    fn jacobian_at_symmetric_point() {
        let e = std::f64::consts::E;
        let s = 1.0 / (1.0 + e);
        let j = jacobian_at(s, s, &sym(10.0)).unwrap();
        assert!((j.determinant - (1.0 + e)).abs() < 1e-12);
        assert!((j.determinant * s - 1.0).abs() < 1e-12);
        assert!(j.trace < 0.0 && j.stable);
        assert!(matches!(
            jacobian_at(0.5, 0.5, &sym(10.0)),
            Err(Error::NotAFixedPoint { .. })
        ));
    }

    #[test]
    fn parameter_names() {
        for name in [
            "nu",
            "V_F",
            "V_F_plus",
            "k_off0_minus",
            "F_d",
            "F_s_plus",
            "V_B_minus",
        ] {
            let p: ScanParameter = name.parse().unwrap();
            assert_eq!(p.to_string(), name);
        }
        assert!("V_X".parse::<ScanParameter>().is_err());
        assert!("k_on_both".parse::<ScanParameter>().is_err());

        let cfg = sym(10.0);
        let joint = "V_F"
            .parse::<ScanParameter>()
            .unwrap()
            .apply(&cfg, 42.0)
            .unwrap();
        assert_eq!(joint.plus.forward_speed, 42.0);
        assert_eq!(joint.minus.forward_speed, 42.0);
        let one = "F_s_minus"
            .parse::<ScanParameter>()
            .unwrap()
            .apply(&cfg, 2.0)
            .unwrap();
        assert_eq!((one.plus.stall_force, one.minus.stall_force), (1.0, 2.0));
        assert!(ScanParameter::Nu.apply(&cfg, -1.0).is_err());
    }

    #[test]
    fn scan_without_topology_change() {
        let cfg = sym(10.0);
        let grid: Vec<f64> = (0..6).map(|i| 0.8 + 0.1 * i as f64).collect();
        let r = scan_parameter(
            &cfg,
            "k_on".parse().unwrap(),
            &grid,
            &RootOptions::default(),
        )
        .unwrap();
        assert!(r.bifurcations.is_empty(), "{:?}", r.bifurcations);
        assert!(r.points.iter().all(|p| p.error.is_none()));
    }

    #[test]
    fn scan_rejects_unsorted_grid() {
        let cfg = sym(10.0);
        assert!(scan_parameter(
            &cfg,
            ScanParameter::Nu,
            &[1.0, 0.5],
            &RootOptions::default()
        )
        .is_err());
    }
}
