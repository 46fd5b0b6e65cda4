//! Radial profiles v(r) on (0,∞) with evaluable derivatives up to order 2
//! and decay metadata.
//!
//! Closed-form families (polynomial × e^{−βr}, polynomial × e^{−βr²}) carry
//! their derivative polynomials exactly; the Kummer family evaluates through
//! the confluent-hypergeometric kernel; basis combinations evaluate through
//! the stable three-term recurrence of their spectral basis. Sampled data is
//! interpolated by a B-spline of odd order.

use std::sync::Arc;

use crate::basis::SpectralBasis;
use crate::error::Result;
use crate::scalar::Real;
use crate::special::{psi_eval, KummerParams};
use crate::spline::BSpline;

/// Dominant decay of a profile as r → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileDecay<T> {
    /// ~ e^{−rate·r}
    Exp(T),
    /// ~ e^{−rate·r²}
    Gauss(T),
    /// ~ r^{−power}
    Algebraic(T),
    /// identically zero beyond the radius
    Compact(T),
}

impl<T: Real> ProfileDecay<T> {
    fn rank(&self) -> u8 {
        match self {
            ProfileDecay::Algebraic(_) => 0,
            ProfileDecay::Exp(_) => 1,
            ProfileDecay::Gauss(_) => 2,
            ProfileDecay::Compact(_) => 3,
        }
    }

    /// The slower (heavier-tailed) of two decays.
    pub fn slower(self, other: Self) -> Self {
        match self.rank().cmp(&other.rank()) {
            std::cmp::Ordering::Less => self,
            std::cmp::Ordering::Greater => other,
            std::cmp::Ordering::Equal => {
                let pick_self = match (self, other) {
                    (ProfileDecay::Algebraic(a), ProfileDecay::Algebraic(b)) => a <= b,
                    (ProfileDecay::Exp(a), ProfileDecay::Exp(b)) => a <= b,
                    (ProfileDecay::Gauss(a), ProfileDecay::Gauss(b)) => a <= b,
                    (ProfileDecay::Compact(a), ProfileDecay::Compact(b)) => a >= b,
                    _ => unreachable!(),
                };
                if pick_self {
                    self
                } else {
                    other
                }
            }
        }
    }

    fn dilate(self, lambda: T) -> Self {
        match self {
            ProfileDecay::Exp(b) => ProfileDecay::Exp(b * lambda),
            ProfileDecay::Gauss(c) => ProfileDecay::Gauss(c * lambda * lambda),
            ProfileDecay::Algebraic(p) => ProfileDecay::Algebraic(p),
            ProfileDecay::Compact(r) => ProfileDecay::Compact(r / lambda),
        }
    }
}

/// Dense polynomial in monomial coefficients (ascending powers).
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T>(pub Vec<T>);

impl<T: Real> Poly<T> {
    pub fn new(coeffs: &[T]) -> Self {
        let mut p = Poly(coeffs.to_vec());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.len() > 1 && *self.0.last().unwrap() == T::zero() {
            self.0.pop();
        }
    }

    pub fn eval(&self, r: T) -> T {
        let mut acc = T::zero();
        for &c in self.0.iter().rev() {
            acc = acc * r + c;
        }
        acc
    }

    pub fn deriv(&self) -> Self {
        if self.0.len() <= 1 {
            return Poly(vec![T::zero()]);
        }
        let mut out = Vec::with_capacity(self.0.len() - 1);
        for (k, &c) in self.0.iter().enumerate().skip(1) {
            out.push(c * T::of_usize(k));
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![T::zero(); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    pub fn add_scaled(&self, other: &Self, c: T) -> Self {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![T::zero(); n];
        for (i, &a) in self.0.iter().enumerate() {
            out[i] += a;
        }
        for (i, &b) in other.0.iter().enumerate() {
            out[i] += c * b;
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    pub fn scale(&self, c: T) -> Self {
        Poly(self.0.iter().map(|&a| a * c).collect())
    }

    /// Coefficients of p(λr).
    pub fn scale_arg(&self, lambda: T) -> Self {
        let mut factor = T::one();
        let mut out = Vec::with_capacity(self.0.len());
        for &c in &self.0 {
            out.push(c * factor);
            factor = factor * lambda;
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    /// Times r: shift coefficients up one power.
    pub fn mul_r(&self) -> Self {
        let mut out = vec![T::zero()];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == T::zero())
    }
}

/// One closed-form summand: polynomial × envelope, with exact derivative
/// polynomials. Used by the analytic bilinear fast path.
#[derive(Debug, Clone)]
pub struct SymbolicPart<T> {
    pub gauss: bool,
    pub rate: T,
    /// Polynomial factors of (v, v′, v″).
    pub polys: [Poly<T>; 3],
}

impl<T: Real> SymbolicPart<T> {
    fn build(gauss: bool, rate: T, p: Poly<T>) -> Self {
        // log-derivative of the envelope is −β (exp) or −2βr (gauss)
        let d = |q: &Poly<T>| -> Poly<T> {
            if gauss {
                q.deriv().add_scaled(&q.mul_r(), -(rate + rate))
            } else {
                q.deriv().add_scaled(q, -rate)
            }
        };
        let d1 = d(&p);
        let d2 = d(&d1);
        SymbolicPart { gauss, rate, polys: [p, d1, d2] }
    }

    fn eval012(&self, r: T) -> (T, T, T) {
        let env = if self.gauss {
            (-self.rate * r * r).exp()
        } else {
            (-self.rate * r).exp()
        };
        (
            self.polys[0].eval(r) * env,
            self.polys[1].eval(r) * env,
            self.polys[2].eval(r) * env,
        )
    }
}

#[derive(Debug, Clone)]
enum Family<T> {
    /// p(r)·e^{−βr}
    ExpPoly(SymbolicPart<T>),
    /// p(r)·e^{−βr²}
    GaussPoly(SymbolicPart<T>),
    /// Ψ(r) = M(β;α;−r²/2)
    Kummer(KummerParams<T>),
    /// Linear combination over a spectral basis, evaluated by recurrence.
    BasisCombo {
        basis: Arc<SpectralBasis<T>>,
        coeffs: Vec<T>,
    },
    /// B-spline interpolant of sampled data; zero outside the grid.
    Sampled(Arc<BSpline<T>>),
    /// amp · inner(λ·r) for families without a closed-form dilation.
    Scaled {
        inner: Arc<RadialProfile<T>>,
        lambda: T,
        amp: T,
    },
    Sum(Vec<RadialProfile<T>>),
}

/// A radial function with evaluable (v, v′, v″) and decay metadata.
#[derive(Debug, Clone)]
pub struct RadialProfile<T> {
    family: Family<T>,
    decay: ProfileDecay<T>,
}

impl<T: Real> RadialProfile<T> {
    /// p(r)·e^{−rate·r}, rate > 0.
    pub fn exp_poly(coeffs: &[T], rate: T) -> Self {
        assert!(rate > T::zero(), "exp_poly rate must be positive");
        RadialProfile {
            family: Family::ExpPoly(SymbolicPart::build(false, rate, Poly::new(coeffs))),
            decay: ProfileDecay::Exp(rate),
        }
    }

    /// amp·e^{−rate·r²}, rate > 0.
    pub fn gauss(amp: T, rate: T) -> Self {
        Self::gauss_poly(&[amp], rate)
    }

    /// p(r)·e^{−rate·r²}, rate > 0.
    pub fn gauss_poly(coeffs: &[T], rate: T) -> Self {
        assert!(rate > T::zero(), "gauss_poly rate must be positive");
        RadialProfile {
            family: Family::GaussPoly(SymbolicPart::build(true, rate, Poly::new(coeffs))),
            decay: ProfileDecay::Gauss(rate),
        }
    }

    /// Ψ(r) = M(β;α;−r²/2). Decay metadata records the algebraic exponent
    /// −2β, or Gaussian decay when β = α.
    pub fn psi(params: KummerParams<T>) -> Self {
        let decay = if params.beta_num == params.alpha_den {
            ProfileDecay::Gauss(T::of(0.5))
        } else {
            ProfileDecay::Algebraic(params.beta_num + params.beta_num)
        };
        RadialProfile { family: Family::Kummer(params), decay }
    }

    pub fn basis_combo(basis: Arc<SpectralBasis<T>>, coeffs: Vec<T>) -> Self {
        let decay = basis.decay();
        RadialProfile {
            family: Family::BasisCombo { basis, coeffs },
            decay,
        }
    }

    /// Interpolate sampled values by a B-spline of the given odd order
    /// (3 = cubic, 5 = quintic); zero outside the sampled range.
    pub fn sampled(grid: &[T], values: &[T], spline_order: usize) -> Result<Self> {
        let spline = BSpline::interpolate(grid, values, spline_order)?;
        let support = *grid.last().unwrap();
        Ok(RadialProfile {
            family: Family::Sampled(Arc::new(spline)),
            decay: ProfileDecay::Compact(support),
        })
    }

    pub fn sum(parts: Vec<RadialProfile<T>>) -> Self {
        assert!(!parts.is_empty(), "sum of zero profiles");
        let decay = parts
            .iter()
            .map(|p| p.decay)
            .reduce(|a, b| a.slower(b))
            .unwrap();
        RadialProfile { family: Family::Sum(parts), decay }
    }

    pub fn decay(&self) -> ProfileDecay<T> {
        self.decay
    }

    /// True if the spline order (when sampled) is too low to trust second
    /// derivatives; such profiles are barred from forms containing v″.
    pub fn second_derivative_trusted(&self) -> bool {
        match &self.family {
            Family::Sampled(s) => s.degree() >= 5,
            Family::Scaled { inner, .. } => inner.second_derivative_trusted(),
            Family::Sum(parts) => parts.iter().all(|p| p.second_derivative_trusted()),
            _ => true,
        }
    }

    /// (v, v′, v″) at r.
    pub fn eval012(&self, r: T) -> Result<(T, T, T)> {
        match &self.family {
            Family::ExpPoly(part) | Family::GaussPoly(part) => Ok(part.eval012(r)),
            Family::Kummer(p) => psi_eval(*p, r),
            Family::BasisCombo { basis, coeffs } => basis.eval_combo(coeffs, r),
            Family::Sampled(s) => Ok(s.eval012(r)),
            Family::Scaled { inner, lambda, amp } => {
                let (v, d1, d2) = inner.eval012(*lambda * r)?;
                Ok((
                    *amp * v,
                    *amp * *lambda * d1,
                    *amp * *lambda * *lambda * d2,
                ))
            }
            Family::Sum(parts) => {
                let mut acc = (T::zero(), T::zero(), T::zero());
                for p in parts {
                    let (v, d1, d2) = p.eval012(r)?;
                    acc.0 += v;
                    acc.1 += d1;
                    acc.2 += d2;
                }
                Ok(acc)
            }
        }
    }

    pub fn eval(&self, r: T) -> Result<T> {
        Ok(self.eval012(r)?.0)
    }

    /// The profile r ↦ v(λr).
    pub fn dilate(&self, lambda: T) -> Self {
        assert!(lambda > T::zero(), "dilation factor must be positive");
        let decay = self.decay.dilate(lambda);
        match &self.family {
            Family::ExpPoly(part) => RadialProfile {
                family: Family::ExpPoly(SymbolicPart::build(
                    false,
                    part.rate * lambda,
                    part.polys[0].scale_arg(lambda),
                )),
                decay,
            },
            Family::GaussPoly(part) => RadialProfile {
                family: Family::GaussPoly(SymbolicPart::build(
                    true,
                    part.rate * lambda * lambda,
                    part.polys[0].scale_arg(lambda),
                )),
                decay,
            },
            Family::Sum(parts) => RadialProfile {
                family: Family::Sum(parts.iter().map(|p| p.dilate(lambda)).collect()),
                decay,
            },
            Family::Scaled { inner, lambda: l0, amp } => RadialProfile {
                family: Family::Scaled {
                    inner: inner.clone(),
                    lambda: *l0 * lambda,
                    amp: *amp,
                },
                decay,
            },
            _ => RadialProfile {
                family: Family::Scaled {
                    inner: Arc::new(self.clone()),
                    lambda,
                    amp: T::one(),
                },
                decay,
            },
        }
    }

    /// The profile c·v.
    pub fn scale_amp(&self, c: T) -> Self {
        match &self.family {
            Family::ExpPoly(part) => RadialProfile {
                family: Family::ExpPoly(SymbolicPart::build(
                    false,
                    part.rate,
                    part.polys[0].scale(c),
                )),
                decay: self.decay,
            },
            Family::GaussPoly(part) => RadialProfile {
                family: Family::GaussPoly(SymbolicPart::build(
                    true,
                    part.rate,
                    part.polys[0].scale(c),
                )),
                decay: self.decay,
            },
            Family::Sum(parts) => RadialProfile {
                family: Family::Sum(parts.iter().map(|p| p.scale_amp(c)).collect()),
                decay: self.decay,
            },
            Family::Scaled { inner, lambda, amp } => RadialProfile {
                family: Family::Scaled {
                    inner: inner.clone(),
                    lambda: *lambda,
                    amp: *amp * c,
                },
                decay: self.decay,
            },
            _ => RadialProfile {
                family: Family::Scaled {
                    inner: Arc::new(self.clone()),
                    lambda: T::one(),
                    amp: c,
                },
                decay: self.decay,
            },
        }
    }

    /// Closed-form summands when the profile is a finite sum of
    /// polynomial-times-envelope parts; `None` otherwise.
    pub fn symbolic_parts(&self) -> Option<Vec<SymbolicPart<T>>> {
        match &self.family {
            Family::ExpPoly(part) | Family::GaussPoly(part) => Some(vec![part.clone()]),
            Family::Sum(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    out.extend(p.symbolic_parts()?);
                }
                Some(out)
            }
            Family::Scaled { inner, lambda, amp } => {
                let parts = inner.symbolic_parts()?;
                Some(
                    parts
                        .into_iter()
                        .map(|sp| {
                            let rate = if sp.gauss {
                                sp.rate * *lambda * *lambda
                            } else {
                                sp.rate * *lambda
                            };
                            SymbolicPart::build(
                                sp.gauss,
                                rate,
                                sp.polys[0].scale_arg(*lambda).scale(*amp),
                            )
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_poly_derivatives_are_exact() {
        // v = (1+r)e^{-r}: v' = -r e^{-r}, v'' = (r-1) e^{-r}
        let v = RadialProfile::exp_poly(&[1.0f64, 1.0], 1.0);
        for &r in &[0.0, 0.3, 1.7, 6.0] {
            let (a, b, c) = v.eval012(r).unwrap();
            let e = (-r as f64).exp();
            assert!((a - (1.0 + r) * e).abs() < 1e-15 * (1.0 + a.abs()));
            assert!((b + r * e).abs() < 1e-15 * (1.0 + b.abs()));
            assert!((c - (r - 1.0) * e).abs() < 1e-14 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn gauss_derivatives_are_exact() {
        // v = e^{-r²/2}: v' = -r v, v'' = (r²-1) v
        let v = RadialProfile::gauss(1.0f64, 0.5);
        for &r in &[0.1, 1.0, 2.5] {
            let (a, b, c) = v.eval012(r).unwrap();
            let e = (-r * r / 2.0f64).exp();
            assert!((a - e).abs() < 1e-15);
            assert!((b + r * e).abs() < 1e-15);
            assert!((c - (r * r - 1.0) * e).abs() < 1e-14);
        }
    }

    #[test]
    fn dilation_keeps_closed_form_and_decay() {
        let v = RadialProfile::exp_poly(&[1.0f64, 1.0], 1.0);
        let w = v.dilate(2.0);
        assert_eq!(w.decay(), ProfileDecay::Exp(2.0));
        let (a, _, _) = w.eval012(1.5).unwrap();
        let (b, _, _) = v.eval012(3.0).unwrap();
        assert!((a - b).abs() < 1e-15);
        assert!(w.symbolic_parts().is_some());

        let g = RadialProfile::gauss(2.0f64, 0.7).dilate(3.0);
        match g.decay() {
            ProfileDecay::Gauss(rate) => assert!((rate - 6.3).abs() < 1e-14),
            other => panic!("unexpected decay {other:?}"),
        }
    }

    #[test]
    fn psi_decay_metadata() {
        let p = KummerParams::new(1.5f64, 2.0).unwrap();
        assert_eq!(
            RadialProfile::psi(p).decay(),
            ProfileDecay::Algebraic(3.0)
        );
        let q = KummerParams::new(2.0f64, 2.0).unwrap();
        assert_eq!(RadialProfile::psi(q).decay(), ProfileDecay::Gauss(0.5));
    }

    #[test]
    fn sum_takes_slowest_decay() {
        let a = RadialProfile::gauss(1.0f64, 0.5);
        let b = RadialProfile::exp_poly(&[0.1f64], 2.0);
        assert_eq!(
            RadialProfile::sum(vec![a, b]).decay(),
            ProfileDecay::Exp(2.0)
        );
    }

    #[test]
    fn sampled_interpolates_smooth_data() {
        let n = 60;
        let grid: Vec<f64> = (0..n).map(|i| 0.05 + 0.15 * i as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&r| (-r).exp()).collect();
        let v = RadialProfile::sampled(&grid, &vals, 5).unwrap();
        for &r in &[0.5, 2.0, 5.0] {
            let (a, b, _) = v.eval012(r).unwrap();
            assert!((a - (-r as f64).exp()).abs() < 1e-6, "value at {r}: {a}");
            assert!((b + (-r as f64).exp()).abs() < 1e-4, "slope at {r}: {b}");
        }
        assert!(v.second_derivative_trusted());
        let cubic = RadialProfile::sampled(&grid, &vals, 3).unwrap();
        assert!(!cubic.second_derivative_trusted());
        // Zero outside the grid.
        assert_eq!(v.eval(20.0).unwrap(), 0.0);
    }
}
