//! Dense matrices of series. Entry (i, j) is row i, column j; an
//! endomorphism E acts on component columns, E(e_j) = Σ_i E[i][j] e_i.

use std::sync::Arc;

use crate::scalar::Scalar;
use crate::series::{Ring, Series, SeriesError, Var};

#[derive(Clone, Debug)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Series>,
}

impl Mat {
    pub fn zeros(ring: &Arc<Ring>, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Series::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<Ring>, n: usize) -> Mat {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, Series::one(ring));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Series) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_scalars(ring: &Arc<Ring>, rows: &[Vec<Scalar>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat::from_fn(r, c, |i, j| Series::constant(ring, rows[i][j].clone()))
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Series) {
        self.data[i * self.cols + j] = s;
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map(&self, f: impl Fn(&Series) -> Result<Series, SeriesError>) -> Result<Mat, SeriesError> {
        let data = self.data.iter().map(f).collect::<Result<Vec<_>, _>>()?;
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        self.map(|s| s.scale(c))
    }

    pub fn scale_series(&self, f: &Series) -> Mat {
        self.map(|s| s * f)
    }

    pub fn neg(&self) -> Mat {
        self.map(|s| -s)
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let ring = self.data.first().or(o.data.first()).expect("nonempty").ring().clone();
        Mat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = Series::zero(&ring);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                // truncated zeros still carry validity
                if !a.is_exact_zero() && !b.is_exact_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        })
    }

    pub fn apply(&self, v: &[Series]) -> Vec<Series> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Series::zero(v[0].ring());
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_exact_zero() && !x.is_exact_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn conj(&self) -> Mat {
        self.map(|s| s.conj())
    }

    pub fn commutator(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn deriv(&self, v: Var) -> Mat {
        self.map(|s| s.deriv(v))
    }

    /// Inverse for a matrix whose constant part is invertible.
    pub fn inverse(&self) -> Result<Mat, SeriesError> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ring = self.data[0].ring().clone();
        let c: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).constant_term()).collect()).collect();
        let ci = invert_scalar_matrix(&c).ok_or_else(|| SeriesError::Domain("matrix singular at the origin".into()))?;
        let c0 = Mat::from_scalars(&ring, &ci);
        // self = C (1 + X) with X = C^{-1} self - 1, inverse = Σ (-X)^k C^{-1}
        let x = c0.mul(self).sub(&Mat::identity(&ring, n));
        let mut out = Mat::identity(&ring, n);
        let mut p = Mat::identity(&ring, n);
        let mx = x.neg();
        for _ in 0..ring.d_max {
            p = p.mul(&mx);
            if p.data.iter().all(|s| s.is_zero()) {
                break;
            }
            out = out.add(&p);
        }
        let valid = self.min_valid();
        Ok(out.mul(&c0).map(|s| s.clone().with_window(valid)))
    }

    /// Smallest validity window over the entries; None if some entry has
    /// no known coefficient.
    pub fn min_valid(&self) -> Option<u32> {
        self.data.iter().map(|s| s.valid_degree()).try_fold(u32::MAX, |m, v| v.map(|v| m.min(v)))
    }

    pub fn max_abs(&self) -> f64 {
        match self.min_valid() {
            Some(w) => self.data.iter().map(|s| s.max_abs_within(w)).fold(0.0, f64::max),
            None => 0.0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| s.is_zero())
    }
}

/// Gauss-Jordan over the scalar field.
pub fn invert_scalar_matrix(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    if n == 0 {
        return Some(vec![]);
    }
    let mode = a[0][0].mode();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one(mode) } else { Scalar::zero(mode) }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].is_zero() {
            return None;
        }
        m.swap(col, piv);
        let inv = m[col][col].inv()?;
        for x in m[col].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let d = m[col][c].mul(&f);
                    m[r][c] = m[r][c].sub(&d);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    #[test]
    fn series_matrix_inverse() {
        let r = Ring::new(2, 0, 5, Mode::Rational).unwrap();
        let t1 = Series::var(&r, Var::hol(0, 0));
        let t2 = Series::var(&r, Var::hol(0, 1));
        let m = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => &t1 + &t2,
            (0, 1) => Series::one(&r),
            (1, 0) => &Series::one(&r) + &t1.conj(),
            _ => t2.pow(2),
        });
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        assert!(id.sub(&Mat::identity(&r, 2)).is_zero());
    }
}
