//! Residual magnitudes measured on a declared degree window.

use crate::matrix::Mat;
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measure {
    /// Max coefficient magnitude inside the window.
    pub max: f64,
    /// Degree window the comparison was made on.
    pub window: u32,
    /// Number of series compared.
    pub count: usize,
}

impl Measure {
    pub fn empty() -> Measure {
        Measure { max: 0.0, window: u32::MAX, count: 0 }
    }

    /// Series with no known coefficient contribute nothing.
    pub fn of(s: &Series) -> Measure {
        match s.valid_degree() {
            Some(w) => Measure { max: s.max_abs_within(w), window: w, count: 1 },
            None => Measure::empty(),
        }
    }

    pub fn of_all<'a>(it: impl IntoIterator<Item = &'a Series>) -> Measure {
        it.into_iter().fold(Measure::empty(), |m, s| m.join(Measure::of(s)))
    }

    pub fn of_mat(m: &Mat) -> Measure {
        Measure::of_all(&m.data)
    }

    pub fn diff(a: &Series, b: &Series) -> Measure {
        Measure::of(&(a - b))
    }

    pub fn join(self, o: Measure) -> Measure {
        Measure { max: self.max.max(o.max), window: self.window.min(o.window), count: self.count + o.count }
    }

    pub fn scalar(v: f64) -> Measure {
        Measure { max: v, window: u32::MAX, count: 1 }
    }

    pub fn is_zero(&self) -> bool {
        self.max == 0.0
    }

    pub fn window_or(&self, d: u32) -> u32 {
        self.window.min(d)
    }
}
