//! B-spline interpolation of sampled radial data (cubic or quintic).

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Interpolating B-spline with clamped, averaged interior knots.
#[derive(Debug, Clone)]
pub struct BSpline<T> {
    degree: usize,
    knots: Vec<T>,
    coeffs: Vec<T>,
    x_min: T,
    x_max: T,
}

/// Dense LU solve with partial pivoting; matrices here are small
/// collocation systems.
fn lu_solve<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() <= T::epsilon() {
            return Err(Error::Conditioning("singular collocation matrix".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - factor * v;
            }
            let bc = b[col];
            b[row] = b[row] - factor * bc;
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

impl<T: Real> BSpline<T> {
    /// Interpolate `values` at `grid` with a spline of odd order 3 or 5.
    pub fn interpolate(grid: &[T], values: &[T], order: usize) -> Result<Self> {
        if order != 3 && order != 5 {
            return Err(Error::Unsupported(format!(
                "spline order must be 3 or 5, got {order}"
            )));
        }
        let n = grid.len();
        if n != values.len() {
            return Err(Error::InvalidParameter(
                "grid and values lengths differ".into(),
            ));
        }
        if n < order + 1 || n > 4096 {
            return Err(Error::InvalidParameter(format!(
                "need between {} and 4096 samples, got {n}",
                order + 1
            )));
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(
                    "grid must be strictly increasing".into(),
                ));
            }
        }
        let d = order;
        // Clamped knots with de Boor's averaged interior knots, which satisfy
        // the Schoenberg–Whitney condition for the data sites.
        let mut knots = vec![grid[0]; d + 1];
        for j in 1..n - d {
            let mut acc = T::zero();
            for i in j..j + d {
                acc += grid[i];
            }
            knots.push(acc / T::of_usize(d));
        }
        knots.extend(std::iter::repeat(grid[n - 1]).take(d + 1));

        let shell = Self {
            degree: d,
            knots,
            coeffs: vec![T::zero(); n],
            x_min: grid[0],
            x_max: grid[n - 1],
        };
        let mut a = vec![vec![T::zero(); n]; n];
        for (row, &x) in grid.iter().enumerate() {
            let span = shell.find_span(x);
            let ders = shell.ders_basis(span, x, 0);
            for (offset, &v) in ders[0].iter().enumerate() {
                a[row][span - d + offset] = v;
            }
        }
        let coeffs = lu_solve(a, values.to_vec())?;
        Ok(Self { coeffs, ..shell })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn find_span(&self, x: T) -> usize {
        let n = self.coeffs.len().max(1);
        let d = self.degree;
        if x >= self.x_max {
            return n - 1;
        }
        let mut lo = d;
        let mut hi = n - 1;
        while lo < hi {
            let mid = (lo + hi + 1) / 2;
            if self.knots[mid] <= x {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        lo
    }

    /// Nonzero basis functions and derivatives up to `nders` at x
    /// (The NURBS Book, algorithm A2.3).
    fn ders_basis(&self, span: usize, x: T, nders: usize) -> Vec<Vec<T>> {
        let p = self.degree;
        let u = &self.knots;
        let mut ndu = vec![vec![T::zero(); p + 1]; p + 1];
        let mut left = vec![T::zero(); p + 1];
        let mut right = vec![T::zero(); p + 1];
        ndu[0][0] = T::one();
        for j in 1..=p {
            left[j] = x - u[span + 1 - j];
            right[j] = u[span + j] - x;
            let mut saved = T::zero();
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let mut ders = vec![vec![T::zero(); p + 1]; nders + 1];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        if nders == 0 {
            return ders;
        }
        let mut a = vec![vec![T::zero(); p + 1]; 2];
        for r in 0..=p {
            let mut s1 = 0usize;
            let mut s2 = 1usize;
            a[0][0] = T::one();
            a[1].iter_mut().for_each(|v| *v = T::zero());
            for k in 1..=nders.min(p) {
                let mut dval = T::zero();
                let rk = r as isize - k as isize;
                let pk = p - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                    dval = a[s2][0] * ndu[rk as usize][pk];
                }
                let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
                let j2 = if r as isize - 1 <= pk as isize {
                    k - 1
                } else {
                    p - r
                };
                for j in j1..=j2 {
                    a[s2][j] =
                        (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][(rk + j as isize) as usize];
                    dval += a[s2][j] * ndu[(rk + j as isize) as usize][pk];
                }
                if r <= pk {
                    a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                    dval += a[s2][k] * ndu[r][pk];
                }
                ders[k][r] = dval;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = T::of_usize(p);
        for k in 1..=nders.min(p) {
            for j in 0..=p {
                ders[k][j] *= factor;
            }
            factor = factor * T::of_usize(p - k);
        }
        ders
    }

    /// (s, s′, s″) at x; zero outside the sampled range.
    pub fn eval012(&self, x: T) -> (T, T, T) {
        if x < self.x_min || x > self.x_max {
            return (T::zero(), T::zero(), T::zero());
        }
        let span = self.find_span(x);
        let ders = self.ders_basis(span, x, 2);
        let mut out = [T::zero(); 3];
        for (k, row) in ders.iter().enumerate() {
            for (offset, &v) in row.iter().enumerate() {
                out[k] += v * self.coeffs[span - self.degree + offset];
            }
        }
        (out[0], out[1], out[2])
    }
}
