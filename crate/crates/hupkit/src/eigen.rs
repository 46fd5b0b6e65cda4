//! Dense symmetric generalized eigenproblem Av = λBv (smallest pair) via
//! Cholesky reduction and cyclic Jacobi diagonalization, with optional
//! linear-constraint deflation.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric matrix in full row-major storage; symmetry is enforced at
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Real> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![T::zero(); n * n] }
    }

    /// Build from an entry generator; (i,j) and (j,i) are averaged so the
    /// result is exactly symmetric.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    f(i, i)
                } else {
                    (f(i, j) + f(j, i)) * T::of(0.5)
                };
                if !v.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "non-finite matrix entry at ({i},{j})"
                    )));
                }
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let n = rows.len();
        let mut scale = T::zero();
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidParameter("matrix must be square".into()));
            }
            for &v in row {
                scale = scale.max(v.abs());
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if (rows[i][j] - rows[j][i]).abs() > T::of(1e-12) * scale.max(T::one()) {
                    return Err(Error::InvalidParameter(format!(
                        "matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Self::from_fn(n, |i, j| rows[i][j])
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[i * self.n + j] = v;
        self.a[j * self.n + i] = v;
    }

    pub fn trace(&self) -> T {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); self.n];
        for i in 0..self.n {
            let mut acc = T::zero();
            for j in 0..self.n {
                acc += self.a[i * self.n + j] * x[j];
            }
            y[i] = acc;
        }
        y
    }
}

/// Lower-triangular Cholesky factor; fails on non-positive pivots.
fn cholesky<T: Real>(b: &SymMatrix<T>) -> Option<Vec<T>> {
    let n = b.order();
    let mut l = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = b.get(i, j);
            for k in 0..j {
                sum = sum - l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= T::zero() || !sum.is_finite() {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

/// Solve L x = rhs (forward substitution).
fn solve_lower<T: Real>(l: &[T], n: usize, rhs: &[T]) -> Vec<T> {
    let mut x = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            let c = l[i * n + k];
            let xk = x[k];
            x[i] = x[i] - c * xk;
        }
        x[i] = x[i] / l[i * n + i];
    }
    x
}

/// Solve Lᵀ x = rhs (backward substitution).
fn solve_lower_t<T: Real>(l: &[T], n: usize, rhs: &[T]) -> Vec<T> {
    let mut x = rhs.to_vec();
    for i in (0..n).rev() {
        for k in i + 1..n {
            let c = l[k * n + i];
            let xk = x[k];
            x[i] = x[i] - c * xk;
        }
        x[i] = x[i] / l[i * n + i];
    }
    x
}

/// Solve Bx = rhs for symmetric positive-definite B via Cholesky.
pub(crate) fn solve_spd<T: Real>(b: &SymMatrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    let n = b.order();
    if rhs.len() != n {
        return Err(Error::InvalidParameter("rhs length mismatch".into()));
    }
    let l = cholesky(b).ok_or_else(|| {
        Error::Conditioning("matrix not positive definite in solve".into())
    })?;
    let y = solve_lower(&l, n, rhs);
    Ok(solve_lower_t(&l, n, &y))
}

const JACOBI_MAX_SWEEPS: usize = 50;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// (eigenvalues, eigenvectors as columns), unsorted.
pub(crate) fn jacobi_eigen<T: Real>(m: &SymMatrix<T>) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = m.order();
    let mut a = m.a.clone();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    if n == 1 {
        return Ok((vec![a[0]], vec![vec![T::one()]]));
    }
    for sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                off += a[i * n + j] * a[i * n + j];
            }
        }
        let scale: T = (0..n).map(|i| a[i * n + i].abs()).sum::<T>() / T::of_usize(n);
        if off.sqrt() <= T::epsilon() * scale.max(T::min_positive_value()) * T::of_usize(n) {
            let evals: Vec<T> = (0..n).map(|i| a[i * n + i]).collect();
            let evecs: Vec<Vec<T>> = (0..n)
                .map(|col| (0..n).map(|row| v[row * n + col]).collect())
                .collect();
            return Ok((evals, evecs));
        }
        let threshold = if sweep < 3 {
            T::of(0.2) * off / T::of_usize(n * n)
        } else {
            T::zero()
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq * apq <= threshold {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                if apq.abs() <= T::epsilon() * (app.abs() + aqq.abs()) * T::of(0.5) {
                    a[p * n + q] = T::zero();
                    a[q * n + p] = T::zero();
                    continue;
                }
                let theta = (aqq - app) / (T::of(2.0) * apq);
                let t = {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for i in 0..n {
                    if i != p && i != q {
                        let aip = a[i * n + p];
                        let aiq = a[i * n + q];
                        a[i * n + p] = aip - s * (aiq + tau * aip);
                        a[i * n + q] = aiq + s * (aip - tau * aiq);
                        a[p * n + i] = a[i * n + p];
                        a[q * n + i] = a[i * n + q];
                    }
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = vip - s * (viq + tau * vip);
                    v[i * n + q] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    Err(Error::Convergence(format!(
        "Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
    )))
}

/// Result of a generalized symmetric eigensolve.
#[derive(Debug, Clone)]
pub struct GeneralizedEigenResult<T> {
    pub lambda_min: T,
    /// B-normalized eigenvector coefficients (vᵀBv = 1).
    pub vector: Vec<T>,
    /// ‖Av − λBv‖ / ‖Bv‖.
    pub residual: T,
    /// Condition estimate of B (after any jitter).
    pub b_condition: T,
}

fn cholesky_with_jitter<T: Real>(b: &SymMatrix<T>) -> Result<(Vec<T>, SymMatrix<T>)> {
    if let Some(l) = cholesky(b) {
        return Ok((l, b.clone()));
    }
    let n = b.order();
    let mut jitter = T::of(1e-14) * b.trace().abs() / T::of_usize(n.max(1));
    if jitter == T::zero() {
        jitter = T::of(1e-300);
    }
    for _ in 0..3 {
        let mut bj = b.clone();
        for i in 0..n {
            bj.set(i, i, bj.get(i, i) + jitter);
        }
        if let Some(l) = cholesky(&bj) {
            return Ok((l, bj));
        }
        jitter = jitter * T::of(100.0);
    }
    Err(Error::Conditioning(
        "B not positive definite within jitter budget".into(),
    ))
}

fn b_condition_estimate<T: Real>(b: &SymMatrix<T>) -> T {
    match jacobi_eigen(b) {
        Ok((evals, _)) => {
            let mut lo = T::infinity();
            let mut hi = T::zero();
            for &e in &evals {
                lo = lo.min(e);
                hi = hi.max(e.abs());
            }
            if lo <= T::zero() {
                T::infinity()
            } else {
                hi / lo
            }
        }
        Err(_) => T::infinity(),
    }
}

/// Smallest eigenpair of Av = λBv for symmetric A and positive-definite B.
pub fn gen_eig_smallest<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
) -> Result<GeneralizedEigenResult<T>> {
    if a.order() != b.order() {
        return Err(Error::InvalidParameter("pencil orders differ".into()));
    }
    let n = a.order();
    if n == 0 {
        return Err(Error::EmptyProblem("zero-dimensional pencil".into()));
    }
    let (l, b_used) = cholesky_with_jitter(b)?;
    // C = L⁻¹ A L⁻ᵀ, column by column.
    let mut c = SymMatrix::zeros(n);
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        cols.push(solve_lower_t(&l, n, &e)); // L⁻ᵀ e_j
    }
    for j in 0..n {
        let ax = a.mul_vec(&cols[j]);
        let col = solve_lower(&l, n, &ax);
        for i in 0..n {
            if i <= j {
                c.set(i, j, col[i]);
            }
        }
    }
    // Symmetrize roundoff.
    let mut csym = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            csym.set(i, j, (c.get(i, j) + c.get(j, i)) * T::of(0.5));
        }
    }
    let (evals, evecs) = jacobi_eigen(&csym)?;
    let mut min_idx = 0;
    for (i, &e) in evals.iter().enumerate() {
        if e < evals[min_idx] {
            min_idx = i;
        }
    }
    let lambda = evals[min_idx];
    let y = &evecs[min_idx];
    let vector = solve_lower_t(&l, n, y);
    let av = a.mul_vec(&vector);
    let bv = b_used.mul_vec(&vector);
    let mut num = T::zero();
    let mut den = T::zero();
    for i in 0..n {
        let d = av[i] - lambda * bv[i];
        num += d * d;
        den += bv[i] * bv[i];
    }
    let residual = num.sqrt() / den.sqrt().max(T::min_positive_value());
    let b_condition = b_condition_estimate(&b_used);
    Ok(GeneralizedEigenResult { lambda_min: lambda, vector, residual, b_condition })
}

impl<T: Real> GeneralizedEigenResult<T> {
    /// Whether the solve meets the acceptance invariants: small relative
    /// residual and a B condition below the cutoff.
    pub fn trusted(&self, b_cond_cutoff: T) -> bool {
        self.residual <= T::of(1e-8) * (T::one() + self.lambda_min.abs())
            && self.b_condition <= b_cond_cutoff
    }
}

/// Smallest eigenpair after projecting out the B-eigendirections below
/// `drop_tol`·λmax(B) (canonical orthogonalization). Gram pencils over
/// near-dependent spans stay solvable this way: the surviving subspace is
/// B-well-conditioned, and the variational value remains an upper bound of
/// the full-space infimum.
pub fn gen_eig_filtered<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    drop_tol: T,
) -> Result<GeneralizedEigenResult<T>> {
    if a.order() != b.order() {
        return Err(Error::InvalidParameter("pencil orders differ".into()));
    }
    let n = a.order();
    if n == 0 {
        return Err(Error::EmptyProblem("zero-dimensional pencil".into()));
    }
    let (bevals, bevecs) = jacobi_eigen(b)?;
    let bmax = bevals.iter().fold(T::zero(), |acc, &e| acc.max(e));
    if bmax <= T::zero() {
        return Err(Error::Conditioning("B has no positive spectrum".into()));
    }
    let keep: Vec<usize> = (0..n).filter(|&i| bevals[i] > drop_tol * bmax).collect();
    if keep.is_empty() {
        return Err(Error::Conditioning("every B direction filtered out".into()));
    }
    let bmin = keep
        .iter()
        .map(|&i| bevals[i])
        .fold(T::infinity(), |acc, e| acc.min(e));
    // Whitened basis: z_i = v_i / √λ_i, so ZᵀBZ = I.
    let z: Vec<Vec<T>> = keep
        .iter()
        .map(|&i| {
            let s = bevals[i].sqrt();
            bevecs[i].iter().map(|&x| x / s).collect()
        })
        .collect();
    let m = keep.len();
    let az: Vec<Vec<T>> = z.iter().map(|zi| a.mul_vec(zi)).collect();
    let c = SymMatrix::from_fn(m, |i, j| {
        z[i].iter().zip(&az[j]).map(|(&x, &y)| x * y).sum()
    })?;
    let (evals, evecs) = jacobi_eigen(&c)?;
    let mut min_idx = 0;
    for (i, &e) in evals.iter().enumerate() {
        if e < evals[min_idx] {
            min_idx = i;
        }
    }
    let lambda = evals[min_idx];
    let y = &evecs[min_idx];
    let mut vector = vec![T::zero(); n];
    for (zi, &yi) in z.iter().zip(y) {
        for (vi, &zij) in vector.iter_mut().zip(zi) {
            *vi = *vi + yi * zij;
        }
    }
    let av = a.mul_vec(&vector);
    let bv = b.mul_vec(&vector);
    let mut num = T::zero();
    let mut den = T::zero();
    for i in 0..n {
        let d = av[i] - lambda * bv[i];
        num += d * d;
        den += bv[i] * bv[i];
    }
    Ok(GeneralizedEigenResult {
        lambda_min: lambda,
        vector,
        residual: num.sqrt() / den.sqrt().max(T::min_positive_value()),
        b_condition: bmax / bmin,
    })
}

/// Orthonormal (Euclidean) basis of {v : cᵀBv = 0 for every constraint}.
fn constraint_complement<T: Real>(
    b: &SymMatrix<T>,
    constraints: &[Vec<T>],
) -> Result<Vec<Vec<T>>> {
    let n = b.order();
    // Normal directions w = Bc, orthonormalized.
    let mut normals: Vec<Vec<T>> = Vec::new();
    for c in constraints {
        if c.len() != n {
            return Err(Error::InvalidParameter("constraint length mismatch".into()));
        }
        let mut w = b.mul_vec(c);
        for u in &normals {
            let dot: T = w.iter().zip(u).map(|(&x, &y)| x * y).sum();
            for (wi, &ui) in w.iter_mut().zip(u) {
                *wi = *wi - dot * ui;
            }
        }
        let norm: T = w.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm <= T::of(1e-12) {
            return Err(Error::InvalidParameter(
                "constraints not linearly independent".into(),
            ));
        }
        for wi in w.iter_mut() {
            *wi = *wi / norm;
        }
        normals.push(w);
    }
    // Complement basis from the standard vectors.
    let mut z: Vec<Vec<T>> = Vec::new();
    for j in 0..n {
        let mut x = vec![T::zero(); n];
        x[j] = T::one();
        for u in normals.iter().chain(z.iter()) {
            let dot: T = x.iter().zip(u).map(|(&a, &b)| a * b).sum();
            for (xi, &ui) in x.iter_mut().zip(u) {
                *xi = *xi - dot * ui;
            }
        }
        let norm: T = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        if norm > T::of(1e-8) {
            for xi in x.iter_mut() {
                *xi = *xi / norm;
            }
            z.push(x);
        }
    }
    if z.is_empty() {
        return Err(Error::EmptyProblem(
            "constraints span the whole space".into(),
        ));
    }
    Ok(z)
}

fn reduce_to<T: Real>(mat: &SymMatrix<T>, z: &[Vec<T>]) -> Result<SymMatrix<T>> {
    let cols: Vec<Vec<T>> = z.iter().map(|zi| mat.mul_vec(zi)).collect();
    SymMatrix::from_fn(z.len(), |i, j| {
        z[i].iter().zip(&cols[j]).map(|(&x, &y)| x * y).sum()
    })
}

fn lift_vector<T: Real>(z: &[Vec<T>], y: &[T], n: usize) -> Vec<T> {
    let mut vector = vec![T::zero(); n];
    for (zc, &yc) in z.iter().zip(y) {
        for (vi, &zi) in vector.iter_mut().zip(zc) {
            *vi = *vi + yc * zi;
        }
    }
    vector
}

/// Smallest eigenpair of the pencil restricted to {v : cᵀBv = 0 for each
/// constraint c}, via an orthonormal basis of the complement.
pub fn gen_eig_deflated<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    constraints: &[Vec<T>],
) -> Result<GeneralizedEigenResult<T>> {
    let n = a.order();
    if b.order() != n {
        return Err(Error::InvalidParameter("pencil orders differ".into()));
    }
    let z = constraint_complement(b, constraints)?;
    let red = gen_eig_smallest(&reduce_to(a, &z)?, &reduce_to(b, &z)?)?;
    let vector = lift_vector(&z, &red.vector, n);
    Ok(GeneralizedEigenResult { vector, ..red })
}

/// Deflation combined with B-spectrum filtering on the reduced pencil.
pub fn gen_eig_deflated_filtered<T: Real>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    constraints: &[Vec<T>],
    drop_tol: T,
) -> Result<GeneralizedEigenResult<T>> {
    let n = a.order();
    if b.order() != n {
        return Err(Error::InvalidParameter("pencil orders differ".into()));
    }
    let z = constraint_complement(b, constraints)?;
    let red = gen_eig_filtered(&reduce_to(a, &z)?, &reduce_to(b, &z)?, drop_tol)?;
    let vector = lift_vector(&z, &red.vector, n);
    Ok(GeneralizedEigenResult { vector, ..red })
}
