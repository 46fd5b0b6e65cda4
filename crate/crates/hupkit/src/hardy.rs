//! Weighted Hardy inequalities on (0,∞): derive the weight W = −(Vf′)′/f
//! for the two supported (V, f) families, verify the exact deficit identity
//! ∫V v′² − ∫W v² = ∫V|v′ − (f′/f)v|², and check the fourth-order
//! inequality used for the two-dimensional mode bound.

use crate::error::{Error, Result};
use crate::profile::{ProfileDecay, RadialProfile};
use crate::quad::{integrate_weighted, Decay, QuadratureConfig, WeightSpec};
use crate::scalar::Real;

/// The multiplier function f in the Hardy pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HardyF<T> {
    /// f = r^p
    Power { p: T },
    /// f = e^{κr}
    Exp { kappa: T },
}

/// A (V, f) pair together with the derived weight term list.
#[derive(Debug, Clone)]
pub struct HardyPair<T> {
    pub v_weight: WeightSpec<T>,
    pub f: HardyF<T>,
    w_terms: Vec<(T, WeightSpec<T>)>,
}

impl<T: Real> HardyPair<T> {
    /// Power family: V = r^θ (θ > 1), f = r^{(1−θ)/2}, giving
    /// W = (θ−1)²/4 · r^{θ−2}.
    pub fn power(theta: T) -> Result<Self> {
        if theta <= T::one() {
            return Err(Error::Precondition(
                "power family requires theta > 1".into(),
            ));
        }
        let p = (T::one() - theta) * T::of(0.5);
        let c = (theta - T::one()) * (theta - T::one()) * T::of(0.25);
        Ok(Self {
            v_weight: WeightSpec::power(theta),
            f: HardyF::Power { p },
            w_terms: vec![(c, WeightSpec::power(theta - T::of(2.0)))],
        })
    }

    /// Exponential family: V = r^θ e^{−2r} (θ ≥ 1), f = e^{κr}, giving
    /// W = −[θκ r^{θ−1} + κ(κ−2) r^θ] e^{−2r}.
    pub fn exp(theta: T, kappa: T) -> Result<Self> {
        if theta < T::one() {
            return Err(Error::Precondition(
                "exponential family requires theta >= 1".into(),
            ));
        }
        let two = T::of(2.0);
        Ok(Self {
            v_weight: WeightSpec::exp(theta, two),
            f: HardyF::Exp { kappa },
            w_terms: vec![
                (-theta * kappa, WeightSpec::exp(theta - T::one(), two)),
                (-kappa * (kappa - two), WeightSpec::exp(theta, two)),
            ],
        })
    }

    /// The derived weight as a term list (coefficient, weight).
    pub fn derive_weight(&self) -> &[(T, WeightSpec<T>)] {
        &self.w_terms
    }

    /// f′/f at r.
    fn log_derivative(&self, r: T) -> T {
        match self.f {
            HardyF::Power { p } => p / r,
            HardyF::Exp { kappa } => kappa,
        }
    }

    /// Structural boundary-term checks from the profile's decay class:
    /// V·(f′/f)·v² must vanish at 0 and ∞ for the identity's integration
    /// by parts.
    fn check_boundary(&self, v: &RadialProfile<T>) -> Result<()> {
        match v.decay() {
            ProfileDecay::Exp(rate) | ProfileDecay::Gauss(rate) => {
                if rate <= T::zero() {
                    return Err(Error::Precondition("profile must decay".into()));
                }
                if let (HardyF::Power { .. }, Decay::None) = (self.f, self.v_weight.decay) {
                    // all good: polynomial weight against exponential decay
                }
            }
            ProfileDecay::Compact(_) => {}
            ProfileDecay::Algebraic(power) => {
                // need r^{θ−1} v² → 0 at infinity
                if self.v_weight.decay == Decay::None
                    && self.v_weight.theta - T::one() - power - power >= T::zero()
                {
                    return Err(Error::Precondition(
                        "algebraic profile decay too slow for this weight".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Evaluate a weight term list against v² by quadrature.
fn eval_weight_terms<T: Real>(
    terms: &[(T, WeightSpec<T>)],
    v: &RadialProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let mut acc = T::zero();
    for (c, w) in terms {
        let est = integrate_weighted(
            |r| {
                let val = v.eval(r)?;
                Ok(val * val)
            },
            w,
            cfg,
        )?;
        acc += *c * est.value;
    }
    Ok(acc)
}

/// lhs = ∫V v′², rhs = ∫W v², deficit = ∫V(v′ − (f′/f)v)²; the identity
/// lhs − rhs = deficit holds exactly.
pub fn deficit_identity_check<T: Real>(
    pair: &HardyPair<T>,
    v: &RadialProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T, T)> {
    pair.check_boundary(v)?;
    let lhs = integrate_weighted(
        |r| {
            let (_, d1, _) = v.eval012(r)?;
            Ok(d1 * d1)
        },
        &pair.v_weight,
        cfg,
    )?
    .value;
    let rhs = eval_weight_terms(&pair.w_terms, v, cfg)?;
    let deficit = integrate_weighted(
        |r| {
            let (val, d1, _) = v.eval012(r)?;
            let resid = d1 - pair.log_derivative(r) * val;
            Ok(resid * resid)
        },
        &pair.v_weight,
        cfg,
    )?
    .value;
    Ok((lhs, rhs, deficit))
}

/// Fourth-order inequality
/// ∫x^{μ+1}f″² + ∫x^{μ+1}f′² ≥ ε∫x^{μ−1}f² + (√(μ²−4ε)+1)∫x^μ f′²
/// for ε ≤ μ²/4. Returns (lhs, rhs, ok).
pub fn hamamoto_check<T: Real>(
    mu: T,
    eps: T,
    f: &RadialProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T, bool)> {
    if eps > mu * mu * T::of(0.25) {
        return Err(Error::Precondition(
            "epsilon must not exceed mu²/4".into(),
        ));
    }
    let int = |theta: T, deriv: usize| -> Result<T> {
        Ok(integrate_weighted(
            |r| {
                let (v, d1, d2) = f.eval012(r)?;
                let x = [v, d1, d2][deriv];
                Ok(x * x)
            },
            &WeightSpec::power(theta),
            cfg,
        )?
        .value)
    };
    let lhs = int(mu + T::one(), 2)? + int(mu + T::one(), 1)?;
    let coeff = (mu * mu - T::of(4.0) * eps).sqrt() + T::one();
    let rhs = eps * int(mu - T::one(), 0)? + coeff * int(mu, 1)?;
    Ok((lhs, rhs, lhs >= rhs - T::of(1e-9)))
}
