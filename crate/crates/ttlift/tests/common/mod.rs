#![allow(dead_code)]

pub mod poly;

use ttlift::big::BigContext;
use ttlift::builtins;
use ttlift::config::{LoadedModel, Truncation};

pub fn load(name: &str, t: Option<Truncation>, seed: u64) -> LoadedModel {
    builtins::config(name, t, seed).expect("built-in").build().expect("valid built-in")
}

pub fn context(name: &str, t: Option<Truncation>, seed: u64) -> BigContext {
    let lm = load(name, t, seed);
    BigContext::build(lm.model, lm.k, lm.potential, lm.cv, lm.truncation.i_max).expect("context")
}

pub fn trunc(n_max: usize, d_max: u32, i_max: usize) -> Option<Truncation> {
    Some(Truncation { n_max, d_max, i_max })
}
