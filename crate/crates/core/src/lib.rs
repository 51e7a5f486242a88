//! Mean-field tug-of-war model of bidirectional cargo transport.
//!
//! [`steady::classify_all`] lists every stationary state of a
//! [`model::TugOfWarConfig`] with its stability; [`steady::scan_parameter`]
//! tracks how that list changes along a parameter. [`dynamics`] and
//! [`stochastic`] integrate the mean-field flow and simulate finite motor
//! numbers for comparison.

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod reduction;
pub mod steady;
pub mod stochastic;
