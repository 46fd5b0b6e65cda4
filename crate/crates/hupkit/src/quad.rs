//! Weighted integration on (0,∞): Gauss rules from the Golub–Welsch
//! eigen-decomposition of the Jacobi matrix, composite adaptive panels with
//! geometric refinement toward the origin, and geometric continuation of the
//! tail until it stops contributing. Closed-form Γ moments serve as oracles.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special::ln_gamma;

/// Decay factor attached to a power weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay<T> {
    None,
    /// e^{−b·r} with b > 0.
    Exp(T),
    /// e^{−c·r²} with c > 0.
    Gauss(T),
}

/// Weight r^θ · decay(r) on (0,∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec<T> {
    pub theta: T,
    pub decay: Decay<T>,
}

impl<T: Real> WeightSpec<T> {
    pub fn power(theta: T) -> Self {
        Self { theta, decay: Decay::None }
    }

    pub fn exp(theta: T, rate: T) -> Self {
        Self { theta, decay: Decay::Exp(rate) }
    }

    pub fn gauss(theta: T, rate: T) -> Self {
        Self { theta, decay: Decay::Gauss(rate) }
    }

    pub fn validate(&self) -> Result<()> {
        match self.decay {
            Decay::Exp(b) if b <= T::zero() => Err(Error::InvalidParameter(
                "exponential decay rate must be positive".into(),
            )),
            Decay::Gauss(c) if c <= T::zero() => Err(Error::InvalidParameter(
                "Gaussian decay rate must be positive".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, r: T) -> T {
        let p = r.powf(self.theta);
        match self.decay {
            Decay::None => p,
            Decay::Exp(b) => p * (-b * r).exp(),
            Decay::Gauss(c) => p * (-c * r * r).exp(),
        }
    }
}

/// Tolerances and panel layout for [`integrate_weighted`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub split_radius: T,
    pub panel_order: usize,
    pub max_panels: usize,
}

impl<T: Real> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(1e-10),
            abs_tol: T::of(1e-14),
            split_radius: T::of(40.0),
            panel_order: 32,
            max_panels: 4096,
        }
    }
}

impl<T: Real> QuadratureConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol <= T::zero() || self.abs_tol <= T::zero() {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.panel_order < 4 {
            return Err(Error::InvalidParameter("panel_order must be >= 4".into()));
        }
        Ok(())
    }
}

/// Family selector for [`gauss_nodes`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaussKind<T> {
    /// Weight 1 on [−1, 1].
    Legendre,
    /// Weight r^alpha e^{−r} on (0,∞), alpha > −1.
    Laguerre { alpha: T },
}

/// Implicit-QL eigensolve of a symmetric tridiagonal matrix, accumulating
/// only the first row of the eigenvector matrix (all Golub–Welsch needs).
fn tridiag_eig_first_row<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence(
                    "tridiagonal QL did not converge".into(),
                ));
            }
            let two = T::of(2.0);
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sr = if g >= T::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sr);
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zi = z[i];
                let zi1 = z[i + 1];
                z[i + 1] = s * zi + c * zi1;
                z[i] = c * zi - s * zi1;
                f = T::zero();
                let _ = f;
            }
            if r == T::zero() && m > l + 1 {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Nodes and weights of an n-point Gauss rule via Golub–Welsch.
pub fn gauss_nodes<T: Real>(kind: GaussKind<T>, n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 || n > 512 {
        return Err(Error::InvalidParameter(format!(
            "rule size must be in 1..=512, got {n}"
        )));
    }
    let (mut d, mut e, mu0) = match kind {
        GaussKind::Legendre => {
            let d = vec![T::zero(); n];
            let mut e = vec![T::zero(); n];
            for k in 1..n {
                let kf = T::of_usize(k);
                e[k - 1] = kf / (T::of(4.0) * kf * kf - T::one()).sqrt();
            }
            (d, e, T::of(2.0))
        }
        GaussKind::Laguerre { alpha } => {
            if alpha <= T::of(-1.0) {
                return Err(Error::InvalidParameter(
                    "Laguerre alpha must exceed -1".into(),
                ));
            }
            let mut d = vec![T::zero(); n];
            let mut e = vec![T::zero(); n];
            for k in 0..n {
                let kf = T::of_usize(k);
                d[k] = T::of(2.0) * kf + T::one() + alpha;
            }
            for k in 1..n {
                let kf = T::of_usize(k);
                e[k - 1] = (kf * (kf + alpha)).sqrt();
            }
            (d, e, ln_gamma(T::one() + alpha).exp())
        }
    };
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    tridiag_eig_first_row(&mut d, &mut e, &mut z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let nodes: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let weights: Vec<T> = order.iter().map(|&i| mu0 * z[i] * z[i]).collect();
    Ok((nodes, weights))
}

/// Gauss–Laguerre nodes with envelope-compensated weights ŵ_i = w_i·e^{x_i},
/// computed as μ0·(z_i·e^{x_i/2})² so that neither factor underflows. Used
/// for Gram assembly where the integrand itself carries the e^{−x} factor.
pub(crate) fn gauss_laguerre_scaled<T: Real>(alpha: T, n: usize) -> Result<(Vec<T>, Vec<T>)> {
    if n == 0 || n > 512 {
        return Err(Error::InvalidParameter(format!(
            "rule size must be in 1..=512, got {n}"
        )));
    }
    if alpha <= T::of(-1.0) {
        return Err(Error::InvalidParameter("Laguerre alpha must exceed -1".into()));
    }
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    for k in 0..n {
        let kf = T::of_usize(k);
        d[k] = T::of(2.0) * kf + T::one() + alpha;
    }
    for k in 1..n {
        let kf = T::of_usize(k);
        e[k - 1] = (kf * (kf + alpha)).sqrt();
    }
    let mu0 = ln_gamma(T::one() + alpha).exp();
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    tridiag_eig_first_row(&mut d, &mut e, &mut z)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let nodes: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let weights: Vec<T> = order
        .iter()
        .map(|&i| {
            let scaled = z[i] * (d[i] * T::of(0.5)).exp();
            mu0 * scaled * scaled
        })
        .collect();
    Ok((nodes, weights))
}

/// A value together with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate<T> {
    pub value: T,
    pub err_est: T,
}

struct PanelRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> PanelRule<T> {
    fn new(order: usize) -> Result<Self> {
        let (nodes, weights) = gauss_nodes(GaussKind::Legendre, order)?;
        Ok(Self { nodes, weights })
    }

    fn apply<F: FnMut(T) -> Result<T>>(&self, f: &mut F, a: T, b: T) -> Result<T> {
        let half = T::of(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + rad * x)?;
            if !v.is_finite() {
                return Err(Error::Accuracy {
                    message: format!("integrand non-finite near r = {}", (mid + rad * x)),
                    best: 0.0,
                    err_est: f64::INFINITY,
                });
            }
            acc += w * v;
        }
        Ok(acc * rad)
    }
}

/// Adaptive integration of one finite panel by bisection against the
/// two-half refinement. A panel is accepted when the refinement change is
/// below the absolute share, below rel_tol relative to the panel's own mass,
/// or at the rounding floor of the rule (two half-panels of a smooth
/// integrand cannot agree better than a few dozen ulps of their sum, so a
/// harder threshold would split forever). Returns (value, err_est); the
/// panel budget is shared across the whole integral.
fn integrate_panel<T: Real, F: FnMut(T) -> Result<T>>(
    rule: &PanelRule<T>,
    f: &mut F,
    a: T,
    b: T,
    abs_tol: T,
    rel_tol: T,
    panels_left: &mut usize,
) -> Result<(T, T)> {
    let mut stack = vec![(a, b)];
    let mut value = T::zero();
    let mut err = T::zero();
    while let Some((lo, hi)) = stack.pop() {
        if *panels_left == 0 {
            return Err(Error::Accuracy {
                message: "panel budget exhausted".into(),
                best: value.as_f64(),
                err_est: err.as_f64(),
            });
        }
        *panels_left -= 1;
        let coarse = rule.apply(f, lo, hi)?;
        let mid = (lo + hi) * T::of(0.5);
        let fine = rule.apply(f, lo, mid)? + rule.apply(f, mid, hi)?;
        let diff = (coarse - fine).abs();
        let floor = T::of(64.0) * T::epsilon() * fine.abs();
        let accept = diff <= abs_tol.max(rel_tol * fine.abs() * T::of(0.25)).max(floor)
            || (hi - lo) < T::of(1e-200);
        if accept {
            value += fine;
            err += diff;
        } else {
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    Ok((value, err))
}

/// Integrate g(r)·w(r) over (0,∞).
///
/// Composite Gauss panels cover (0, split_radius] with geometric refinement
/// toward the origin (ratio 1/4, reaching down as far as the weight power
/// requires); past split_radius the integral is continued over geometric
/// octaves until an octave stops contributing, and the leftover is folded
/// into `err_est` rather than the value.
pub fn integrate_weighted<T: Real, F: FnMut(T) -> Result<T>>(
    mut g: F,
    w: &WeightSpec<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralEstimate<T>> {
    w.validate()?;
    cfg.validate()?;
    let rule = PanelRule::new(cfg.panel_order)?;
    let mut f = |r: T| -> Result<T> { Ok(g(r)? * w.eval(r)) };

    // Deepest origin panel. For θ ∈ (−1, 0) the pure-weight mass below r0
    // must itself be negligible, which pushes r0 far below 1e-12.
    let mut r0 = T::of(1e-12);
    if w.theta < T::zero() && w.theta > T::of(-1.0) {
        let exponent = T::one() / (w.theta + T::one());
        let candidate = (cfg.abs_tol * T::of(1e-2)).powf(exponent);
        r0 = r0.min(candidate).max(T::of(1e-280));
    }

    let mut panels_left = cfg.max_panels;
    let mut value = T::zero();
    let mut err_est = T::zero();

    // Unresolved mass below r0, bounded by a local power-law envelope.
    let f0 = f(r0 * T::of(0.5))?;
    if w.theta > T::of(-1.0) {
        let g0 = f0 / (r0 * T::of(0.5)).powf(w.theta);
        err_est += (g0.abs() * r0.powf(w.theta + T::one()) / (w.theta + T::one())).abs();
    } else {
        err_est += f0.abs() * r0;
    }

    // Breakpoints: r0·4^k up to 1, then octaves up to split_radius.
    let mut breaks = vec![r0];
    let mut x = r0;
    while x < T::one() {
        x = (x * T::of(4.0)).min(T::one());
        breaks.push(x);
    }
    while x < cfg.split_radius {
        x = (x * T::of(2.0)).min(cfg.split_radius);
        breaks.push(x);
    }

    let n_base = breaks.len() - 1;
    let abs_share = cfg.abs_tol / T::of_usize(n_base.max(1));
    for win in breaks.windows(2) {
        let (v, e) =
            integrate_panel(&rule, &mut f, win[0], win[1], abs_share, cfg.rel_tol, &mut panels_left)?;
        value += v;
        err_est += e;
    }

    // Geometric tail continuation.
    let mut lo = cfg.split_radius;
    let mut quiet_octaves = 0usize;
    let mut last;
    loop {
        let hi = lo * T::of(2.0);
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs()) * T::of(0.25);
        let (v, e) = integrate_panel(&rule, &mut f, lo, hi, tol, cfg.rel_tol, &mut panels_left)?;
        value += v;
        err_est += e;
        last = v.abs();
        if last <= cfg.abs_tol.max(cfg.rel_tol * value.abs()) * T::of(0.25) {
            quiet_octaves += 1;
            if quiet_octaves >= 2 {
                break;
            }
        } else {
            quiet_octaves = 0;
        }
        lo = hi;
        if lo > T::of(1e15) {
            return Err(Error::Accuracy {
                message: "tail did not decay before r = 1e15".into(),
                best: value.as_f64(),
                err_est: err_est.as_f64(),
            });
        }
    }
    err_est += last;

    Ok(IntegralEstimate { value, err_est })
}

/// Closed-form moment ∫₀^∞ r^θ·decay(r) dr:
/// Γ(θ+1)/b^{θ+1} for e^{−br}, Γ((θ+1)/2)/(2c^{(θ+1)/2}) for e^{−cr²}.
pub fn exact_moment<T: Real>(w: &WeightSpec<T>) -> Result<T> {
    w.validate()?;
    if w.theta <= T::of(-1.0) {
        return Err(Error::InvalidParameter(
            "moment requires theta > -1".into(),
        ));
    }
    match w.decay {
        Decay::None => Err(Error::Unsupported(
            "undecayed power weight has no finite moment".into(),
        )),
        Decay::Exp(b) => {
            let a = w.theta + T::one();
            Ok((ln_gamma(a) - a * b.ln()).exp())
        }
        Decay::Gauss(c) => {
            let a = (w.theta + T::one()) * T::of(0.5);
            Ok(T::of(0.5) * (ln_gamma(a) - a * c.ln()).exp())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn legendre_low_orders_are_classical() {
        let (x, w) = gauss_nodes::<f64>(GaussKind::Legendre, 1).unwrap();
        assert!(x[0].abs() < 1e-15);
        assert!((w[0] - 2.0).abs() < 1e-15);

        let (x, w) = gauss_nodes::<f64>(GaussKind::Legendre, 2).unwrap();
        let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
        assert!((x[0] + inv_sqrt3).abs() < 1e-15 && (x[1] - inv_sqrt3).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 1.0).abs() < 1e-14);

        // 3-point rule: nodes 0, ±√(3/5); weights 8/9, 5/9.
        let (x, w) = gauss_nodes::<f64>(GaussKind::Legendre, 3).unwrap();
        assert!((x[1]).abs() < 1e-15);
        assert!((x[2] - (0.6f64).sqrt()).abs() < 1e-14);
        assert!((w[1] - 8.0 / 9.0).abs() < 1e-14);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn laguerre_rule_reproduces_gamma_moments() {
        let (x, w) = gauss_nodes::<f64>(GaussKind::Laguerre { alpha: 0.0 }, 20).unwrap();
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-13, "sum w = {total}");
        // ∫ r^k e^{-r} = k! exactly for k ≤ 2n-1.
        for k in 1..=8u32 {
            let m: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(k as i32)).sum();
            let fact: f64 = (1..=k).map(|i| i as f64).product();
            assert!((m - fact).abs() < 1e-10 * fact, "k={k}: {m} vs {fact}");
        }
        // Generalized rule, alpha = -1/2: μ0 = Γ(1/2) = √π.
        let (_, w) = gauss_nodes::<f64>(GaussKind::Laguerre { alpha: -0.5 }, 16).unwrap();
        let total: f64 = w.iter().sum();
        assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rule_size_bounds_enforced() {
        assert!(gauss_nodes::<f64>(GaussKind::Legendre, 0).is_err());
        assert!(gauss_nodes::<f64>(GaussKind::Legendre, 513).is_err());
        assert!(gauss_nodes::<f64>(GaussKind::Legendre, 512).is_ok());
    }

    #[test]
    fn moments_match_closed_forms() {
        // 3!/2^4 = 0.375, 2!/2^3 = 0.25, 0!/2 = 0.5, 4!/2^5 = 0.75
        let m: f64 = exact_moment(&WeightSpec::exp(3.0f64, 2.0)).unwrap();
        assert!((m - 0.375).abs() < 1e-14);
        assert!((exact_moment(&WeightSpec::exp(2.0f64, 2.0)).unwrap() - 0.25).abs() < 1e-14);
        assert!((exact_moment(&WeightSpec::exp(0.0f64, 2.0)).unwrap() - 0.5).abs() < 1e-14);
        assert!((exact_moment(&WeightSpec::exp(4.0f64, 2.0)).unwrap() - 0.75).abs() < 1e-14);
        // √π/4 for θ=2, gauss rate 1.
        let m = exact_moment(&WeightSpec::gauss(2.0, 1.0)).unwrap();
        assert!((m - std::f64::consts::PI.sqrt() / 4.0).abs() < 1e-14);
        assert!(exact_moment(&WeightSpec::power(2.0)).is_err());
    }

    #[test]
    fn integration_agrees_with_moments() {
        for theta in 0..=8 {
            for decay in [Decay::Exp(2.0), Decay::Exp(0.5), Decay::Gauss(1.0), Decay::Gauss(0.25)]
            {
                let w = WeightSpec { theta: theta as f64, decay };
                let want = exact_moment(&w).unwrap();
                let got = integrate_weighted(|_| Ok(1.0), &w, &cfg()).unwrap();
                assert!(
                    (got.value - want).abs() <= 1e-10 * want,
                    "theta={theta} {decay:?}: {} vs {want}",
                    got.value
                );
            }
        }
    }

    #[test]
    fn fractional_negative_power_near_origin() {
        // ∫ r^{-0.5} e^{-r} dr = Γ(1/2) = √π.
        let w = WeightSpec::exp(-0.5, 1.0);
        let got = integrate_weighted(|_| Ok(1.0), &w, &cfg()).unwrap();
        let want = std::f64::consts::PI.sqrt();
        assert!((got.value - want).abs() < 1e-9 * want, "{} vs {want}", got.value);
    }

    #[test]
    fn rational_integrand_matches_fine_oracle() {
        // Oracle: same integrand on a 10x finer fixed-budget configuration.
        let w = WeightSpec::exp(1.0, 2.0);
        let got = integrate_weighted(|r: f64| Ok(1.0 / (1.0 + r * r)), &w, &cfg()).unwrap();
        let fine = QuadratureConfig { rel_tol: 1e-13, abs_tol: 1e-16, panel_order: 64, ..cfg() };
        let want = integrate_weighted(|r: f64| Ok(1.0 / (1.0 + r * r)), &w, &fine).unwrap();
        assert!(
            (got.value - want.value).abs() < 1e-10,
            "{} vs {}",
            got.value,
            want.value
        );
    }

    #[test]
    fn algebraic_tail_is_continued_not_truncated() {
        // ∫₀^∞ r³/(1+r²)⁴ dr = 1/12; the integrand still carries ~1e-5 of its
        // mass beyond r = 40, so naive truncation would fail.
        let w = WeightSpec::power(3.0);
        let got = integrate_weighted(|r: f64| Ok((1.0 + r * r).powi(-4)), &w, &cfg()).unwrap();
        assert!(
            (got.value - 1.0 / 12.0).abs() < 1e-10,
            "value {}",
            got.value
        );
    }

    #[test]
    fn divergent_integrand_reports_accuracy_error() {
        let w = WeightSpec::power(0.0);
        let r = integrate_weighted(|_| Ok(1.0), &w, &cfg());
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn doubling_panel_order_stays_within_err_est() {
        let w = WeightSpec::exp(2.0, 1.0);
        let f = |r: f64| Ok((1.0 + r).sqrt());
        let base = integrate_weighted(f, &w, &cfg()).unwrap();
        let doubled = integrate_weighted(f, &w, &QuadratureConfig { panel_order: 64, ..cfg() })
            .unwrap();
        assert!(
            (base.value - doubled.value).abs() <= base.err_est.max(1e-12),
            "diff {} vs err_est {}",
            (base.value - doubled.value).abs(),
            base.err_est
        );
    }

    proptest! {
        #[test]
        fn linearity(a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let w = WeightSpec::exp(2.0, 2.0);
            let c = cfg();
            let g1 = |r: f64| Ok(r.sin());
            let g2 = |r: f64| Ok(1.0 / (1.0 + r));
            let lhs = integrate_weighted(|r| Ok(a * r.sin() + b / (1.0 + r)), &w, &c).unwrap();
            let v1 = integrate_weighted(g1, &w, &c).unwrap();
            let v2 = integrate_weighted(g2, &w, &c).unwrap();
            let rhs = a * v1.value + b * v2.value;
            prop_assert!((lhs.value - rhs).abs() <= 1e-9 * (1.0 + rhs.abs()));
        }
    }
}
