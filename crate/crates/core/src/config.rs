//! JSON configuration files.
//!
//! ```json
//! {
//!   "k_on_plus": 1.0, "k_off0_plus": 1.0, "F_d_plus": 1.0,
//!   "F_s_plus": 1.0, "V_F_plus": 10.0, "V_B_plus": 10.0,
//!   "k_on_minus": 1.0, "k_off0_minus": 1.0, "F_d_minus": 1.0,
//!   "F_s_minus": 1.0, "V_F_minus": 10.0, "V_B_minus": 10.0,
//!   "N_plus": 100, "N_minus": 100
//! }
//! ```
//!
//! `nu` is optional and defaults to `N_plus / N_minus`; when present it must
//! agree with the counts. There is no key for the external load.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MotorParams, TugOfWarConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct ConfigFile {
    pub k_on_plus: f64,
    pub k_off0_plus: f64,
    pub F_d_plus: f64,
    pub F_s_plus: f64,
    pub V_F_plus: f64,
    pub V_B_plus: f64,
    pub k_on_minus: f64,
    pub k_off0_minus: f64,
    pub F_d_minus: f64,
    pub F_s_minus: f64,
    pub V_F_minus: f64,
    pub V_B_minus: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    pub N_plus: u32,
    pub N_minus: u32,
}

impl ConfigFile {
    pub fn into_config(self) -> Result<TugOfWarConfig> {
        let plus = MotorParams::new(
            self.k_on_plus,
            self.k_off0_plus,
            self.F_d_plus,
            self.F_s_plus,
            self.V_F_plus,
            self.V_B_plus,
        );
        let minus = MotorParams::new(
            self.k_on_minus,
            self.k_off0_minus,
            self.F_d_minus,
            self.F_s_minus,
            self.V_F_minus,
            self.V_B_minus,
        );
        let cfg = TugOfWarConfig::new(plus, minus, self.N_plus, self.N_minus)?;
        if let Some(nu) = self.nu {
            if !((nu - cfg.nu).abs() <= 1e-12 * cfg.nu) {
                return Err(Error::invalid(
                    "nu",
                    format!("{nu} disagrees with N_plus / N_minus = {}", cfg.nu),
                ));
            }
        }
        Ok(cfg)
    }
}

impl From<&TugOfWarConfig> for ConfigFile {
    fn from(cfg: &TugOfWarConfig) -> Self {
        let (p, m) = (&cfg.plus, &cfg.minus);
        ConfigFile {
            k_on_plus: p.k_on,
            k_off0_plus: p.k_off0,
            F_d_plus: p.detach_force,
            F_s_plus: p.stall_force,
            V_F_plus: p.forward_speed,
            V_B_plus: p.backward_speed,
            k_on_minus: m.k_on,
            k_off0_minus: m.k_off0,
            F_d_minus: m.detach_force,
            F_s_minus: m.stall_force,
            V_F_minus: m.forward_speed,
            V_B_minus: m.backward_speed,
            nu: Some(cfg.nu),
            N_plus: cfg.n_plus_total,
            N_minus: cfg.n_minus_total,
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<TugOfWarConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ConfigFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Error::Config(inner.to_string())
        } else {
            Error::Config(format!("key `{path}`: {inner}"))
        }
    })?;
    file.into_config()
}

pub fn load_config(path: &Path) -> Result<TugOfWarConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}
