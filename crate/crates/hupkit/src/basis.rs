//! Spectral bases for Rayleigh-quotient minimization.
//!
//! [`Basis`] is the plain descriptor: monomials times an exponential or
//! Gaussian envelope, exactly as consumed by `rayleigh::assemble`.
//! [`SpectralBasis`] spans the same space through orthonormal-polynomial
//! combinations evaluated by their three-term recurrence; moment matrices of
//! raw monomials have exponentially growing condition numbers (their entries
//! overflow f64 near degree 85), so the eigensolves run on this
//! representation instead.

use crate::error::{Error, Result};
use crate::profile::{ProfileDecay, RadialProfile};
use crate::scalar::Real;
use crate::special::ln_gamma;

/// Basis family: functions r^j·envelope, j = 0..n−1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind<T> {
    /// r^j e^{−s·r}
    LaguerreExp { scale: T },
    /// r^j e^{−s·r²}
    HermiteGauss { scale: T },
}

/// Plain monomial-times-envelope basis descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis<T> {
    pub kind: BasisKind<T>,
    pub size: usize,
}

impl<T: Real> Basis<T> {
    pub fn new(kind: BasisKind<T>, size: usize) -> Result<Self> {
        let scale = match kind {
            BasisKind::LaguerreExp { scale } | BasisKind::HermiteGauss { scale } => scale,
        };
        if scale <= T::zero() {
            return Err(Error::InvalidParameter("basis scale must be positive".into()));
        }
        if size < 2 {
            return Err(Error::InvalidParameter("basis size must be at least 2".into()));
        }
        Ok(Self { kind, size })
    }

    pub fn laguerre_exp(scale: T, size: usize) -> Result<Self> {
        Self::new(BasisKind::LaguerreExp { scale }, size)
    }

    pub fn hermite_gauss(scale: T, size: usize) -> Result<Self> {
        Self::new(BasisKind::HermiteGauss { scale }, size)
    }

    /// The j-th basis function as a profile.
    pub fn function(&self, j: usize) -> RadialProfile<T> {
        assert!(j < self.size, "basis index out of range");
        let mut coeffs = vec![T::zero(); j + 1];
        coeffs[j] = T::one();
        match self.kind {
            BasisKind::LaguerreExp { scale } => RadialProfile::exp_poly(&coeffs, scale),
            BasisKind::HermiteGauss { scale } => RadialProfile::gauss_poly(&coeffs, scale),
        }
    }
}

/// Three-term recurrence of polynomials orthonormal against x^a e^{−x} dx,
/// evaluated in envelope-scaled form u_j(x) = p_j(x)·e^{−x/2} so that values
/// stay representable far outside the oscillatory region.
#[derive(Debug, Clone)]
struct Recurrence<T> {
    alpha: Vec<T>,
    sqrt_beta: Vec<T>,
    inv_sqrt_mu0: T,
}

impl<T: Real> Recurrence<T> {
    fn laguerre(a: T, m: usize) -> Self {
        let mut alpha = Vec::with_capacity(m);
        let mut sqrt_beta = vec![T::zero(); m];
        for j in 0..m {
            let jf = T::of_usize(j);
            alpha.push(T::of(2.0) * jf + T::one() + a);
            if j > 0 {
                sqrt_beta[j] = (jf * (jf + a)).sqrt();
            }
        }
        let inv_sqrt_mu0 = (-(ln_gamma(T::one() + a)) * T::of(0.5)).exp();
        Self { alpha, sqrt_beta, inv_sqrt_mu0 }
    }

    /// u_j, du_j/dx, d²u_j/dx² for j = 0..m−1 at x ≥ 0.
    fn eval(&self, m: usize, x: T, u: &mut [T], du: &mut [T], ddu: &mut [T]) {
        let env = (-x * T::of(0.5)).exp();
        u[0] = env * self.inv_sqrt_mu0;
        du[0] = -u[0] * T::of(0.5);
        ddu[0] = u[0] * T::of(0.25);
        if m == 1 {
            return;
        }
        for j in 0..m - 1 {
            let (um1, dum1, ddum1) = if j == 0 {
                (T::zero(), T::zero(), T::zero())
            } else {
                (u[j - 1], du[j - 1], ddu[j - 1])
            };
            let t = x - self.alpha[j];
            let sb = self.sqrt_beta[j];
            let inv = T::one() / self.sqrt_beta[j + 1];
            u[j + 1] = (t * u[j] - sb * um1) * inv;
            du[j + 1] = (u[j] + t * du[j] - sb * dum1) * inv;
            ddu[j + 1] = (T::of(2.0) * du[j] + t * ddu[j] - sb * ddum1) * inv;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SpectralKind {
    Exp,
    Gauss,
}

/// Orthonormal-combination basis over the same span as a [`Basis`].
#[derive(Debug, Clone)]
pub struct SpectralBasis<T> {
    kind: SpectralKind,
    scale: T,
    n: usize,
    primary: Recurrence<T>,
    odd: Option<Recurrence<T>>,
    /// Zero-slope combination coefficients (exp only): g_j = f_{j+1} − c_j f_0.
    slope_combo: Option<Vec<T>>,
}

impl<T: Real> SpectralBasis<T> {
    /// Exponential-envelope basis spanning {r^j e^{−sr}, j < n}; polynomials
    /// orthonormal against x^a e^{−x}, x = 2sr.
    pub fn exp(scale: T, n: usize, a: T) -> Result<Self> {
        if scale <= T::zero() || n < 2 {
            return Err(Error::InvalidParameter("bad spectral basis parameters".into()));
        }
        Ok(Self {
            kind: SpectralKind::Exp,
            scale,
            n,
            primary: Recurrence::laguerre(a, n + 1),
            odd: None,
            slope_combo: None,
        })
    }

    /// Like [`SpectralBasis::exp`], restricted to the codimension-one
    /// subspace of functions with vanishing slope at the origin. Needed for
    /// mode (N=2, k=0) where the forms carry an r^{−1}|v′|² term.
    pub fn exp_zero_slope(scale: T, n: usize, a: T) -> Result<Self> {
        let mut basis = Self::exp(scale, n, a)?;
        let m = n + 1;
        let mut u = vec![T::zero(); m];
        let mut du = vec![T::zero(); m];
        let mut ddu = vec![T::zero(); m];
        basis.primary.eval(m, T::zero(), &mut u, &mut du, &mut ddu);
        // slope of f_j at r=0 is 2s·du_j(0); du_0(0) = −u_0(0)/2 ≠ 0.
        let combo: Vec<T> = (0..n).map(|j| du[j + 1] / du[0]).collect();
        basis.slope_combo = Some(combo);
        Ok(basis)
    }

    /// Gaussian-envelope basis spanning {r^j e^{−sr²}, j < n}: even indices
    /// are polynomials in x = 2sr², odd indices carry one extra factor of r.
    pub fn gauss(scale: T, n: usize, a_even: T, a_odd: T) -> Result<Self> {
        if scale <= T::zero() || n < 2 {
            return Err(Error::InvalidParameter("bad spectral basis parameters".into()));
        }
        let m = n / 2 + 2;
        Ok(Self {
            kind: SpectralKind::Gauss,
            scale,
            n,
            primary: Recurrence::laguerre(a_even, m),
            odd: Some(Recurrence::laguerre(a_odd, m)),
            slope_combo: None,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub(crate) fn kind(&self) -> SpectralKind {
        self.kind
    }

    pub fn decay(&self) -> ProfileDecay<T> {
        match self.kind {
            SpectralKind::Exp => ProfileDecay::Exp(self.scale),
            SpectralKind::Gauss => ProfileDecay::Gauss(self.scale),
        }
    }

    /// Parity in r of the j-th basis function (0 = even, 1 = odd as a
    /// polynomial prefactor). Exponential-envelope functions report 0.
    pub(crate) fn parity(&self, j: usize) -> usize {
        match self.kind {
            SpectralKind::Exp => 0,
            SpectralKind::Gauss => j % 2,
        }
    }

    /// Values and first two r-derivatives of every basis function at r.
    pub fn eval_all(&self, r: T) -> (Vec<T>, Vec<T>, Vec<T>) {
        let n = self.n;
        let mut f = vec![T::zero(); n];
        let mut f1 = vec![T::zero(); n];
        let mut f2 = vec![T::zero(); n];
        match self.kind {
            SpectralKind::Exp => {
                let two_s = self.scale + self.scale;
                let x = two_s * r;
                let m = if self.slope_combo.is_some() { n + 1 } else { n };
                let mut u = vec![T::zero(); m];
                let mut du = vec![T::zero(); m];
                let mut ddu = vec![T::zero(); m];
                self.primary.eval(m, x, &mut u, &mut du, &mut ddu);
                match &self.slope_combo {
                    None => {
                        for j in 0..n {
                            f[j] = u[j];
                            f1[j] = two_s * du[j];
                            f2[j] = two_s * two_s * ddu[j];
                        }
                    }
                    Some(combo) => {
                        for j in 0..n {
                            let c = combo[j];
                            f[j] = u[j + 1] - c * u[0];
                            f1[j] = two_s * (du[j + 1] - c * du[0]);
                            f2[j] = two_s * two_s * (ddu[j + 1] - c * ddu[0]);
                        }
                    }
                }
            }
            SpectralKind::Gauss => {
                let two_s = self.scale + self.scale;
                let x = two_s * r * r;
                let xp = T::of(2.0) * two_s * r; // dx/dr
                let xpp = T::of(2.0) * two_s; // d²x/dr²
                let me = n / 2 + 1;
                let mut ue = vec![T::zero(); me];
                let mut due = vec![T::zero(); me];
                let mut ddue = vec![T::zero(); me];
                self.primary.eval(me, x, &mut ue, &mut due, &mut ddue);
                let odd = self.odd.as_ref().expect("gauss basis has odd family");
                let mut uo = vec![T::zero(); me];
                let mut duo = vec![T::zero(); me];
                let mut dduo = vec![T::zero(); me];
                odd.eval(me, x, &mut uo, &mut duo, &mut dduo);
                for j in 0..n {
                    if j % 2 == 0 {
                        let p = j / 2;
                        f[j] = ue[p];
                        f1[j] = due[p] * xp;
                        f2[j] = ddue[p] * xp * xp + due[p] * xpp;
                    } else {
                        let p = (j - 1) / 2;
                        let h = uo[p];
                        let h1 = duo[p] * xp;
                        let h2 = dduo[p] * xp * xp + duo[p] * xpp;
                        f[j] = r * h;
                        f1[j] = h + r * h1;
                        f2[j] = T::of(2.0) * h1 + r * h2;
                    }
                }
            }
        }
        (f, f1, f2)
    }

    /// (v, v′, v″) of Σ c_j φ_j at r.
    pub fn eval_combo(&self, coeffs: &[T], r: T) -> Result<(T, T, T)> {
        if coeffs.len() > self.n {
            return Err(Error::InvalidParameter(
                "more coefficients than basis functions".into(),
            ));
        }
        let (f, f1, f2) = self.eval_all(r);
        let mut out = (T::zero(), T::zero(), T::zero());
        for (j, &c) in coeffs.iter().enumerate() {
            out.0 += c * f[j];
            out.1 += c * f1[j];
            out.2 += c * f2[j];
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{gauss_nodes, GaussKind};

    #[test]
    fn literal_basis_functions_are_monomials() {
        let b = Basis::laguerre_exp(1.0f64, 4).unwrap();
        let f2 = b.function(2);
        let (v, _, _) = f2.eval012(1.5).unwrap();
        assert!((v - 1.5f64 * 1.5 * (-1.5f64).exp()).abs() < 1e-15);

        let g = Basis::hermite_gauss(0.5f64, 3).unwrap();
        let (v, _, _) = g.function(1).eval012(2.0).unwrap();
        assert!((v - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn spectral_exp_functions_are_orthonormal() {
        // Against the weight r^a e^{-2sr}·(2s)^{a+1} they were built for.
        let s = 0.75f64;
        let a = 2.0f64;
        let basis = SpectralBasis::exp(s, 6, a).unwrap();
        let (x, w) = gauss_nodes(GaussKind::Laguerre { alpha: a }, 40).unwrap();
        let mut gram = vec![vec![0.0f64; 6]; 6];
        for (&xt, &wt) in x.iter().zip(&w) {
            let r = xt / (2.0 * s);
            let (f, _, _) = basis.eval_all(r);
            // weight x^a e^{-x} dx absorbed: functions carry e^{-x/2} each
            for i in 0..6 {
                for j in 0..6 {
                    gram[i][j] += wt * (f[i] * xt.exp().sqrt()) * (f[j] * xt.exp().sqrt());
                }
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (gram[i][j] - want).abs() < 1e-12,
                    "gram[{i}][{j}] = {}",
                    gram[i][j]
                );
            }
        }
    }

    #[test]
    fn spectral_derivatives_match_finite_differences() {
        for basis in [
            SpectralBasis::exp(0.5f64, 8, 3.0).unwrap(),
            SpectralBasis::exp_zero_slope(1.0f64, 8, 0.0).unwrap(),
            SpectralBasis::gauss(0.5f64, 9, 1.0, 2.0).unwrap(),
        ] {
            let h = 1e-6;
            for &r in &[0.4, 1.1, 3.3] {
                let (f, f1, f2) = basis.eval_all(r);
                let (fp, fp1, _) = basis.eval_all(r + h);
                let (fm, fm1, _) = basis.eval_all(r - h);
                for j in 0..basis.len() {
                    let fd1 = (fp[j] - fm[j]) / (2.0 * h);
                    let fd2 = (fp1[j] - fm1[j]) / (2.0 * h);
                    assert!(
                        (f1[j] - fd1).abs() <= 1e-5 * (1.0 + f1[j].abs()),
                        "d1 j={j} r={r}: {} vs {}",
                        f1[j],
                        fd1
                    );
                    assert!(
                        (f2[j] - fd2).abs() <= 1e-5 * (1.0 + f2[j].abs()),
                        "d2 j={j} r={r}: {} vs {}",
                        f2[j],
                        fd2
                    );
                }
                let _ = f;
            }
        }
    }

    #[test]
    fn zero_slope_basis_has_flat_origin() {
        let basis = SpectralBasis::exp_zero_slope(1.0f64, 6, 0.0).unwrap();
        let (_, f1, _) = basis.eval_all(1e-9);
        for (j, &slope) in f1.iter().enumerate() {
            assert!(slope.abs() < 1e-6, "slope of g_{j} at origin: {slope}");
        }
    }

    #[test]
    fn far_tail_evaluation_is_finite() {
        let basis = SpectralBasis::gauss(0.25f64, 40, 1.0, 2.0).unwrap();
        let (f, f1, f2) = basis.eval_all(200.0);
        for j in 0..40 {
            assert!(f[j].is_finite() && f1[j].is_finite() && f2[j].is_finite());
            assert!(f[j].abs() < 1e-100);
        }
    }
}
