//! Canonical lifts of Frobenius and tt* structures from the small phase
//! space to a truncated big phase space, with exact residual checks.

pub mod big;
pub mod matrix;
pub mod report;
pub mod residual;
pub mod scalar;
pub mod series;
pub mod small;
pub mod builtins;
pub mod catalogue;
pub mod config;
pub mod dump;
pub mod verify;
