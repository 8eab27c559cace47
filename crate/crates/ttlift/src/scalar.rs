//! Complex coefficients, either exact rationals or binary floats.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Coefficients stored below this magnitude are dropped in float mode.
pub const FLOAT_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Rational,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact { re: BigRational, im: BigRational },
    Float { re: f64, im: f64 },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar {
    pub fn zero(mode: Mode) -> Scalar {
        Scalar::from_int(mode, 0)
    }

    pub fn one(mode: Mode) -> Scalar {
        Scalar::from_int(mode, 1)
    }

    pub fn from_int(mode: Mode, n: i64) -> Scalar {
        match mode {
            Mode::Rational => Scalar::Exact { re: rat(n), im: BigRational::zero() },
            Mode::Float => Scalar::Float { re: n as f64, im: 0.0 },
        }
    }

    pub fn ratio(mode: Mode, p: i64, q: i64) -> Scalar {
        Scalar::from_rational(mode, BigRational::new(BigInt::from(p), BigInt::from(q)), BigRational::zero())
    }

    pub fn from_rational(mode: Mode, re: BigRational, im: BigRational) -> Scalar {
        match mode {
            Mode::Rational => Scalar::Exact { re, im },
            Mode::Float => Scalar::Float { re: rat_to_f64(&re), im: rat_to_f64(&im) },
        }
    }

    pub fn i(mode: Mode) -> Scalar {
        Scalar::from_rational(mode, BigRational::zero(), BigRational::one())
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact { .. } => Mode::Rational,
            Scalar::Float { .. } => Mode::Float,
        }
    }

    pub fn to_mode(&self, mode: Mode) -> Scalar {
        match (self, mode) {
            (Scalar::Exact { re, im }, Mode::Float) => Scalar::Float { re: rat_to_f64(re), im: rat_to_f64(im) },
            (Scalar::Float { re, im }, Mode::Rational) => {
                let r = BigRational::from_float(*re).unwrap_or_else(BigRational::zero);
                let i = BigRational::from_float(*im).unwrap_or_else(BigRational::zero);
                Scalar::Exact { re: r, im: i }
            }
            _ => self.clone(),
        }
    }

    /// Exactly zero, or below the canonical-form epsilon in float mode.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact { re, im } => re.is_zero() && im.is_zero(),
            Scalar::Float { re, im } => re.abs() <= FLOAT_EPS && im.abs() <= FLOAT_EPS,
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            Scalar::Exact { im, .. } => im.is_zero(),
            Scalar::Float { im, .. } => im.abs() <= FLOAT_EPS,
        }
    }

    pub fn abs(&self) -> f64 {
        match self {
            Scalar::Exact { re, im } => {
                if im.is_zero() {
                    rat_to_f64(&re.abs())
                } else if re.is_zero() {
                    rat_to_f64(&im.abs())
                } else {
                    rat_to_f64(re).hypot(rat_to_f64(im))
                }
            }
            Scalar::Float { re, im } => re.hypot(*im),
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            Scalar::Exact { re, .. } => rat_to_f64(re),
            Scalar::Float { re, .. } => *re,
        }
    }

    pub fn im_f64(&self) -> f64 {
        match self {
            Scalar::Exact { im, .. } => rat_to_f64(im),
            Scalar::Float { im, .. } => *im,
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact { re: re.clone(), im: -im },
            Scalar::Float { re, im } => Scalar::Float { re: *re, im: -*im },
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact { re, im } => Scalar::Exact { re: -re, im: -im },
            Scalar::Float { re, im } => Scalar::Float { re: -*re, im: -*im },
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                Scalar::Exact { re: a + c, im: if b.is_zero() { d.clone() } else if d.is_zero() { b.clone() } else { b + d } }
            }
            _ => Scalar::Float { re: self.re_f64() + o.re_f64(), im: self.im_f64() + o.im_f64() },
        }
    }

    pub fn add_assign(&mut self, o: &Scalar) {
        match (&mut *self, o) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                *a += c;
                if !d.is_zero() {
                    *b += d;
                }
            }
            (Scalar::Float { re: a, im: b }, Scalar::Float { re: c, im: d }) => {
                *a += c;
                *b += d;
            }
            _ => *self = self.add(o),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Exact { re: a, im: b }, Scalar::Exact { re: c, im: d }) => {
                if b.is_zero() && d.is_zero() {
                    Scalar::Exact { re: a * c, im: BigRational::zero() }
                } else if b.is_zero() {
                    Scalar::Exact { re: a * c, im: a * d }
                } else if d.is_zero() {
                    Scalar::Exact { re: a * c, im: b * c }
                } else {
                    Scalar::Exact { re: a * c - b * d, im: a * d + b * c }
                }
            }
            _ => {
                let (a, b, c, d) = (self.re_f64(), self.im_f64(), o.re_f64(), o.im_f64());
                Scalar::Float { re: a * c - b * d, im: a * d + b * c }
            }
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact { re, im } => {
                let n = re * re + im * im;
                Scalar::Exact { re: re / &n, im: -(im / &n) }
            }
            Scalar::Float { re, im } => {
                let n = re * re + im * im;
                Scalar::Float { re: re / n, im: -im / n }
            }
        })
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|x| self.mul(&x))
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Exact { re, im } => re.is_one() && im.is_zero(),
            Scalar::Float { re, im } => (re - 1.0).abs() <= FLOAT_EPS && im.abs() <= FLOAT_EPS,
        }
    }

    pub fn re_string(&self) -> String {
        match self {
            Scalar::Exact { re, .. } => format_rational(re),
            Scalar::Float { re, .. } => format!("{:?}", re),
        }
    }

    pub fn im_string(&self) -> String {
        match self {
            Scalar::Exact { im, .. } => format_rational(im),
            Scalar::Float { im, .. } => format!("{:?}", im),
        }
    }

    /// Parse a pair of "p/q" (or decimal, in float mode) strings.
    pub fn parse(mode: Mode, re: &str, im: &str) -> Result<Scalar, String> {
        match mode {
            Mode::Rational => Ok(Scalar::Exact { re: parse_rational(re)?, im: parse_rational(im)? }),
            Mode::Float => {
                let f = |s: &str| -> Result<f64, String> {
                    match parse_rational(s) {
                        Ok(r) => Ok(rat_to_f64(&r)),
                        Err(_) => s.trim().parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}")),
                    }
                };
                Ok(Scalar::Float { re: f(re)?, im: f(im)? })
            }
        }
    }
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse "p", "-p" or "p/q" exactly.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p = BigInt::from_str(p).map_err(|_| format!("bad rational {s:?}"))?;
    let q = BigInt::from_str(q).map_err(|_| format!("bad rational {s:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(BigRational::new(p, q))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            write!(f, "{}", self.re_string())
        } else {
            write!(f, "({} + {}i)", self.re_string(), self.im_string())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        let s = Scalar::parse(Mode::Rational, "-2/6", "0").unwrap();
        assert_eq!(s.re_string(), "-1/3");
        assert_eq!(s.im_string(), "0");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn complex_field_ops() {
        let m = Mode::Rational;
        let i = Scalar::i(m);
        assert_eq!(i.mul(&i), Scalar::from_int(m, -1));
        let z = Scalar::parse(m, "3", "4").unwrap();
        assert_eq!(z.mul(&z.inv().unwrap()), Scalar::one(m));
        assert_eq!(z.abs(), 5.0);
        assert_eq!(z.conj().conj(), z);
    }
}
