//! Radial quadratic forms: the mode functionals J_{N,k}, I_{N,k}, Q_k, R_k,
//! E₁, F₁, G_α and the hydrogen numerator/denominator, their evaluation and
//! polarization over radial profiles, full-space functionals of spherical
//! mode expansions, deficits, and the independent N-dimensional cross-check
//! of the mode-sum identities.

use crate::error::{Error, Result};
use crate::profile::RadialProfile;
use crate::quad::{integrate_weighted, Decay, QuadratureConfig, WeightSpec};
use crate::scalar::Real;

/// One weighted term coeff·∫ r^θ·decay·v^{(i)} v^{(j)} dr, stored with
/// deriv_i ≤ deriv_j.
#[derive(Debug, Clone, Copy)]
pub struct FormTerm<T> {
    pub deriv_i: u8,
    pub deriv_j: u8,
    pub weight: WeightSpec<T>,
    pub coeff: T,
}

/// A finite sum of weighted bilinear terms.
#[derive(Debug, Clone)]
pub struct QuadraticFormSpec<T> {
    pub label: String,
    pub terms: Vec<FormTerm<T>>,
}

/// Selector for the paper's named forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FormKind<T> {
    /// Deficit form J_{N,k} (hydrogen numerator − (N+1)·denominator).
    J { n: usize, k: usize },
    /// Stability numerator I_{N,k}.
    I { n: usize, k: usize },
    /// Gradient mode form Q_k = ∫ r^{N+2k−1}|v′|².
    Q { n: usize, k: usize },
    /// Plain mode mass R_k = ∫ r^{N+2k−1} v².
    R { n: usize, k: usize },
    /// Mode-1 hydrogen numerator E₁.
    E1 { n: usize },
    /// Mode-1 hydrogen denominator F₁.
    F1 { n: usize },
    /// G_α = E₁ − α F₁.
    G { n: usize, alpha: T },
    /// Mode-k form of ∫|∇u|²/|x|.
    HydrogenDen { n: usize, k: usize },
    /// Mode-k form of ‖Δu‖² + ‖∇u‖².
    HydrogenNum { n: usize, k: usize },
}

fn term<T: Real>(di: u8, dj: u8, theta: T, coeff: T) -> FormTerm<T> {
    let (deriv_i, deriv_j) = if di <= dj { (di, dj) } else { (dj, di) };
    FormTerm { deriv_i, deriv_j, weight: WeightSpec::power(theta), coeff }
}

/// Build the exact term list of a named form.
pub fn make_form<T: Real>(which: FormKind<T>) -> Result<QuadraticFormSpec<T>> {
    let check_nk = |n: usize, k: usize| -> Result<(T, T)> {
        if n < 1 {
            return Err(Error::InvalidParameter("dimension must be >= 1".into()));
        }
        let nf = T::of_usize(n);
        let a = nf + T::of_usize(2 * k) - T::one(); // A_k = N + 2k − 1
        Ok((nf, a))
    };
    let push_nonzero = |terms: &mut Vec<FormTerm<T>>, t: FormTerm<T>| -> Result<()> {
        if t.coeff == T::zero() {
            return Ok(());
        }
        // A v² term at or below r^{-1} is non-integrable for any profile
        // class we admit.
        if t.deriv_i == 0 && t.deriv_j == 0 && t.weight.theta <= T::of(-1.0) {
            return Err(Error::InvalidParameter(format!(
                "non-integrable v² term with weight power {}",
                t.weight.theta
            )));
        }
        terms.push(t);
        Ok(())
    };

    let (label, terms) = match which {
        FormKind::HydrogenNum { n, k } => {
            let (_, a) = check_nk(n, k)?;
            let mut terms = Vec::new();
            push_nonzero(&mut terms, term(2, 2, a, T::one()))?;
            push_nonzero(&mut terms, term(1, 1, a - T::of(2.0), a))?;
            push_nonzero(&mut terms, term(1, 1, a, T::one()))?;
            (format!("hydrogen_num(N={n},k={k})"), terms)
        }
        FormKind::HydrogenDen { n, k } => {
            let (_, a) = check_nk(n, k)?;
            let mut terms = Vec::new();
            push_nonzero(&mut terms, term(1, 1, a - T::one(), T::one()))?;
            push_nonzero(&mut terms, term(0, 0, a - T::of(3.0), T::of_usize(k)))?;
            (format!("hydrogen_den(N={n},k={k})"), terms)
        }
        FormKind::J { n, k } => {
            let (nf, a) = check_nk(n, k)?;
            let mut terms = Vec::new();
            push_nonzero(&mut terms, term(2, 2, a, T::one()))?;
            push_nonzero(&mut terms, term(1, 1, a - T::of(2.0), a))?;
            push_nonzero(&mut terms, term(1, 1, a, T::one()))?;
            push_nonzero(&mut terms, term(1, 1, a - T::one(), -(nf + T::one())))?;
            push_nonzero(
                &mut terms,
                term(0, 0, a - T::of(3.0), -(nf + T::one()) * T::of_usize(k)),
            )?;
            (format!("J(N={n},k={k})"), terms)
        }
        FormKind::I { n, k } => {
            let (nf, a) = check_nk(n, k)?;
            let mut terms = Vec::new();
            push_nonzero(&mut terms, term(2, 2, a, T::one()))?;
            push_nonzero(&mut terms, term(1, 1, a - T::of(2.0), a))?;
            push_nonzero(&mut terms, term(1, 1, a + T::of(2.0), T::one()))?;
            push_nonzero(&mut terms, term(0, 0, a, -T::of_usize(2 * k)))?;
            push_nonzero(&mut terms, term(1, 1, a, -(nf + T::of(2.0))))?;
            (format!("I(N={n},k={k})"), terms)
        }
        FormKind::Q { n, k } => {
            let (_, a) = check_nk(n, k)?;
            (format!("Q(N={n},k={k})"), vec![term(1, 1, a, T::one())])
        }
        FormKind::R { n, k } => {
            let (_, a) = check_nk(n, k)?;
            (format!("R(N={n},k={k})"), vec![term(0, 0, a, T::one())])
        }
        FormKind::E1 { n } => {
            let spec = make_form(FormKind::<T>::HydrogenNum { n, k: 1 })?;
            (format!("E1(N={n})"), spec.terms)
        }
        FormKind::F1 { n } => {
            let spec = make_form(FormKind::<T>::HydrogenDen { n, k: 1 })?;
            (format!("F1(N={n})"), spec.terms)
        }
        FormKind::G { n, alpha } => {
            let e1 = make_form(FormKind::<T>::E1 { n })?;
            let f1 = make_form(FormKind::<T>::F1 { n })?;
            let mut terms = e1.terms;
            for t in f1.terms {
                terms.push(FormTerm { coeff: -alpha * t.coeff, ..t });
            }
            (format!("G(N={n},alpha={alpha})"), terms)
        }
    };
    Ok(QuadraticFormSpec { label, terms })
}

/// Closed-form value of ∫ r^θ·envelope dr for a combined envelope.
fn envelope_moment<T: Real>(theta: T, gauss: bool, rate: T) -> Result<T> {
    let w = if gauss {
        WeightSpec::gauss(theta, rate)
    } else {
        WeightSpec::exp(theta, rate)
    };
    crate::quad::exact_moment(&w)
}

/// Analytic value of one bilinear term over symbolic profiles, when the
/// envelopes combine into a single exponential or Gaussian. Returns `None`
/// when no closed form applies (mixed envelopes, decaying weights of the
/// other kind).
fn analytic_term<T: Real>(
    t: &FormTerm<T>,
    u: &RadialProfile<T>,
    v: &RadialProfile<T>,
) -> Option<Result<T>> {
    let parts_u = u.symbolic_parts()?;
    let parts_v = v.symbolic_parts()?;
    let mut acc = T::zero();
    for pu in &parts_u {
        for pv in &parts_v {
            if pu.gauss != pv.gauss {
                return None;
            }
            let gauss = pu.gauss;
            let mut rate = pu.rate + pv.rate;
            match t.weight.decay {
                Decay::None => {}
                Decay::Exp(b) if !gauss => rate += b,
                Decay::Gauss(c) if gauss => rate += c,
                _ => return None,
            }
            let prod = pu.polys[t.deriv_i as usize].mul(&pv.polys[t.deriv_j as usize]);
            for (m, &cm) in prod.0.iter().enumerate() {
                if cm == T::zero() {
                    continue;
                }
                let theta = t.weight.theta + T::of_usize(m);
                if theta <= T::of(-1.0) {
                    return Some(Err(Error::InvalidParameter(format!(
                        "divergent term: weight power {theta} with non-vanishing product"
                    ))));
                }
                match envelope_moment(theta, gauss, rate) {
                    Ok(mom) => acc += cm * mom,
                    Err(e) => return Some(Err(e)),
                }
            }
        }
    }
    Some(Ok(acc))
}

fn check_second_derivative<T: Real>(
    spec: &QuadraticFormSpec<T>,
    profiles: &[&RadialProfile<T>],
) -> Result<()> {
    let needs_d2 = spec.terms.iter().any(|t| t.deriv_j == 2);
    if needs_d2 && profiles.iter().any(|p| !p.second_derivative_trusted()) {
        return Err(Error::Precondition(format!(
            "{}: sampled profile of low spline order barred from v'' forms",
            spec.label
        )));
    }
    Ok(())
}

/// Evaluate the quadratic form at one profile.
pub fn eval_form<T: Real>(
    spec: &QuadraticFormSpec<T>,
    v: &RadialProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    polarize(spec, v, v, cfg)
}

/// Bilinear extension B(u,v) with B(v,v) = eval_form(spec, v), symmetric
/// in (u, v).
pub fn polarize<T: Real>(
    spec: &QuadraticFormSpec<T>,
    u: &RadialProfile<T>,
    v: &RadialProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    check_second_derivative(spec, &[u, v])?;
    let mut acc = T::zero();
    for t in &spec.terms {
        let half = |a: &RadialProfile<T>, b: &RadialProfile<T>| -> Result<T> {
            if let Some(r) = analytic_term(t, a, b) {
                return r;
            }
            let (di, dj) = (t.deriv_i as usize, t.deriv_j as usize);
            let est = integrate_weighted(
                |r| {
                    let pa = a.eval012(r)?;
                    let pb = b.eval012(r)?;
                    let xa = [pa.0, pa.1, pa.2][di];
                    let xb = [pb.0, pb.1, pb.2][dj];
                    Ok(xa * xb)
                },
                &t.weight,
                cfg,
            )?;
            Ok(est.value)
        };
        // symmetric already when the derivative orders match or on the diagonal
        let value = if t.deriv_i == t.deriv_j || std::ptr::eq(u, v) {
            half(u, v)?
        } else {
            (half(u, v)? + half(v, u)?) * T::of(0.5)
        };
        acc += t.coeff * value;
    }
    Ok(acc)
}

/// Polarization computed in a single quadrature pass over the summed
/// integrand. Requires every weight power to be safely integrable against
/// the profile pair; used for Gram assembly against non-symbolic profiles.
pub(crate) fn polarize_fused<T: Real>(
    spec: &QuadraticFormSpec<T>,
    u: &RadialProfile<T>,
    v: &RadialProfile<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    check_second_derivative(spec, &[u, v])?;
    let min_theta = spec
        .terms
        .iter()
        .map(|t| t.weight.theta)
        .fold(T::infinity(), |a, b| a.min(b));
    let carrier = WeightSpec::power(min_theta.min(T::zero()).max(T::zero()));
    let est = integrate_weighted(
        |r| {
            let pu = u.eval012(r)?;
            let pv = v.eval012(r)?;
            let au = [pu.0, pu.1, pu.2];
            let av = [pv.0, pv.1, pv.2];
            let mut acc = T::zero();
            for t in &spec.terms {
                let w = t.weight.eval(r);
                let (i, j) = (t.deriv_i as usize, t.deriv_j as usize);
                let sym = if i == j {
                    au[i] * av[j]
                } else {
                    (au[i] * av[j] + au[j] * av[i]) * T::of(0.5)
                };
                acc += t.coeff * w * sym;
            }
            Ok(acc)
        },
        &carrier,
        cfg,
    )?;
    Ok(est.value)
}

/// Spherical-harmonic mode expansion u = Σ r^k v_k(r) φ_k(σ) with the
/// spherical factors normalized to ∫ φ_k² dσ = 1.
#[derive(Debug, Clone)]
pub struct ModeExpansion<T> {
    pub dim: usize,
    pub modes: Vec<(usize, RadialProfile<T>)>,
}

impl<T: Real> ModeExpansion<T> {
    pub fn new(dim: usize, modes: Vec<(usize, RadialProfile<T>)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter("dimension must be >= 2".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for (k, _) in &modes {
            if !seen.insert(*k) {
                return Err(Error::InvalidParameter(format!("duplicate mode index {k}")));
            }
        }
        Ok(Self { dim, modes })
    }

    pub fn single(dim: usize, k: usize, v: RadialProfile<T>) -> Result<Self> {
        Self::new(dim, vec![(k, v)])
    }

    /// u_λ(x) = u(λx): mode profiles become λ^k·v_k(λr).
    pub fn dilate(&self, lambda: T) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|(k, v)| {
                let amp = lambda.powi(*k as i32);
                (*k, v.dilate(lambda).scale_amp(amp))
            })
            .collect();
        Self { dim: self.dim, modes }
    }
}

/// Full-space quadratic functionals realized as mode sums (Lemma-style
/// identities with normalized spherical factors).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Functional {
    /// ∫|∇u|²
    GradSq,
    /// ∫|Δu|²
    LapSq,
    /// ∫|∇u|²/|x|
    GradOverR,
    /// ∫|x|²|∇u|²
    RGradSq,
}

/// The mode-k term list of a full-space functional.
pub fn mode_form<T: Real>(which: Functional, n: usize, k: usize) -> Result<QuadraticFormSpec<T>> {
    let a = T::of_usize(n) + T::of_usize(2 * k) - T::one();
    let spec = match which {
        Functional::GradSq => QuadraticFormSpec {
            label: format!("grad_sq(N={n},k={k})"),
            terms: vec![term(1, 1, a, T::one())],
        },
        Functional::GradOverR => make_form(FormKind::<T>::HydrogenDen { n, k })?,
        Functional::RGradSq => {
            let mut terms = vec![term(1, 1, a + T::of(2.0), T::one())];
            if k > 0 {
                terms.push(term(0, 0, a, -T::of_usize(2 * k)));
            }
            QuadraticFormSpec { label: format!("r_grad_sq(N={n},k={k})"), terms }
        }
        Functional::LapSq => QuadraticFormSpec {
            label: format!("lap_sq(N={n},k={k})"),
            terms: vec![term(2, 2, a, T::one()), term(1, 1, a - T::of(2.0), a)],
        },
    };
    Ok(spec)
}

/// Evaluate a full-space functional of a mode expansion by mode summation.
pub fn fullspace<T: Real>(
    u: &ModeExpansion<T>,
    which: Functional,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let mut acc = T::zero();
    for (k, v) in &u.modes {
        let spec = mode_form(which, u.dim, *k)?;
        acc += eval_form(&spec, v, cfg)?;
    }
    Ok(acc)
}

/// Deficit functionals of the two uncertainty principles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deficit {
    /// δ₁ = √(‖Δu‖²·‖r∇u‖²) − (N+2)/2·‖∇u‖²
    Delta1,
    /// δ₂ = ‖Δu‖² + ‖r∇u‖² − (N+2)‖∇u‖²
    Delta2,
    /// J_N = ‖Δu‖² + ‖∇u‖² − (N+1)∫|∇u|²/|x|
    JN,
}

pub fn deficits<T: Real>(
    u: &ModeExpansion<T>,
    which: Deficit,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let nf = T::of_usize(u.dim);
    match which {
        Deficit::Delta1 => {
            let lap = fullspace(u, Functional::LapSq, cfg)?;
            let rgrad = fullspace(u, Functional::RGradSq, cfg)?;
            let grad = fullspace(u, Functional::GradSq, cfg)?;
            Ok((lap * rgrad).sqrt() - (nf + T::of(2.0)) * T::of(0.5) * grad)
        }
        Deficit::Delta2 => {
            let lap = fullspace(u, Functional::LapSq, cfg)?;
            let rgrad = fullspace(u, Functional::RGradSq, cfg)?;
            let grad = fullspace(u, Functional::GradSq, cfg)?;
            Ok(lap + rgrad - (nf + T::of(2.0)) * grad)
        }
        Deficit::JN => {
            let lap = fullspace(u, Functional::LapSq, cfg)?;
            let grad = fullspace(u, Functional::GradSq, cfg)?;
            let hden = fullspace(u, Functional::GradOverR, cfg)?;
            Ok(lap + grad - (nf + T::one()) * hden)
        }
    }
}

/// Composite per-axis Gauss grid on [−R, R] with refinement toward the
/// origin; `points` is the total per-axis budget.
fn axis_grid<T: Real>(radius: T, points: usize) -> Result<(Vec<T>, Vec<T>)> {
    let breaks: [f64; 7] = [-1.0, -0.26, -0.065, 0.0, 0.065, 0.26, 1.0];
    let shares: [usize; 6] = [15, 17, 18, 18, 17, 15];
    let total: usize = shares.iter().sum();
    let mut nodes = Vec::with_capacity(points);
    let mut weights = Vec::with_capacity(points);
    for (i, share) in shares.iter().enumerate() {
        let m = (points * share + total / 2) / total;
        let a = radius * T::of(breaks[i]);
        let b = radius * T::of(breaks[i + 1]);
        let (xs, ws) = crate::quad::gauss_nodes(crate::quad::GaussKind::<T>::Legendre, m.max(2))?;
        let mid = (a + b) * T::of(0.5);
        let rad = (b - a) * T::of(0.5);
        for (&x, &w) in xs.iter().zip(&ws) {
            nodes.push(mid + rad * x);
            weights.push(w * rad);
        }
    }
    Ok((nodes, weights))
}

/// Radial-identity value versus direct tensor-grid integration over
/// [−R, R]^N for u = r^k v(r) φ_k(σ). Supported: N ∈ {2,3}, k ∈ {0,1}.
pub fn crosscheck_lemma21<T: Real>(
    n: usize,
    k: usize,
    v: &RadialProfile<T>,
    which: Functional,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T)> {
    if !(n == 2 || n == 3) || k > 1 {
        return Err(Error::Unsupported(
            "direct cross-check implemented for N in {2,3}, k in {0,1}".into(),
        ));
    }
    let radial = eval_form(&mode_form(which, n, k)?, v, cfg)?;

    let radius = T::of(30.0);
    let points = if n == 2 { 400 } else { 160 };
    let (nodes, weights) = axis_grid(radius, points)?;

    // Tail sanity: the mode integrand at the box radius must be negligible.
    {
        let (pv, pd1, pd2) = v.eval012(radius)?;
        let spec = mode_form::<T>(which, n, k)?;
        let vals = [pv, pd1, pd2];
        let mut tail = T::zero();
        for t in &spec.terms {
            tail += (t.coeff
                * t.weight.eval(radius)
                * vals[t.deriv_i as usize]
                * vals[t.deriv_j as usize])
                .abs();
        }
        if tail * radius > T::of(1e-9) * (T::one() + radial.abs()) {
            return Err(Error::Accuracy {
                message: "profile tail not negligible at the tensor-grid radius".into(),
                best: radial.as_f64(),
                err_est: (tail * radius).as_f64(),
            });
        }
    }

    let area = match n {
        2 => T::of(2.0) * T::PI(),
        _ => T::of(4.0) * T::PI(),
    };
    let phi0_sq = T::one() / area;
    let c1_sq = T::of_usize(n) / area;

    let nf = T::of_usize(n);
    let integrand = |x: &[T]| -> Result<T> {
        let r2: T = x.iter().map(|&c| c * c).sum();
        let r = r2.sqrt();
        if r < T::of(1e-14) {
            return Ok(T::zero());
        }
        let (pv, d1, d2) = v.eval012(r)?;
        let x1 = x[0];
        let value = if k == 0 {
            let grad_sq = phi0_sq * d1 * d1;
            match which {
                Functional::GradSq => grad_sq,
                Functional::RGradSq => r2 * grad_sq,
                Functional::GradOverR => grad_sq / r,
                Functional::LapSq => {
                    let lap = d2 + (nf - T::one()) * d1 / r;
                    phi0_sq * lap * lap
                }
            }
        } else {
            // u = c·x₁·v(r)
            match which {
                Functional::GradSq | Functional::RGradSq | Functional::GradOverR => {
                    let grad_sq = c1_sq
                        * (pv * pv
                            + T::of(2.0) * pv * d1 * x1 * x1 / r
                            + x1 * x1 * d1 * d1);
                    match which {
                        Functional::GradSq => grad_sq,
                        Functional::RGradSq => r2 * grad_sq,
                        _ => grad_sq / r,
                    }
                }
                Functional::LapSq => {
                    let lap = x1 * (d2 + (nf + T::one()) * d1 / r);
                    c1_sq * lap * lap
                }
            }
        };
        Ok(value)
    };

    let mut direct = T::zero();
    if n == 2 {
        for (i, &xi) in nodes.iter().enumerate() {
            let mut row = T::zero();
            for (j, &xj) in nodes.iter().enumerate() {
                row += weights[j] * integrand(&[xi, xj])?;
            }
            direct += weights[i] * row;
        }
    } else {
        for (i, &xi) in nodes.iter().enumerate() {
            let mut plane = T::zero();
            for (j, &xj) in nodes.iter().enumerate() {
                let mut row = T::zero();
                for (l, &xl) in nodes.iter().enumerate() {
                    row += weights[l] * integrand(&[xi, xj, xl])?;
                }
                plane += weights[j] * row;
            }
            direct += weights[i] * plane;
        }
    }
    Ok((radial, direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::RadialProfile;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    fn theta_of(t: &FormTerm<f64>) -> f64 {
        t.weight.theta
    }

    #[test]
    fn j40_term_list_matches_display() {
        // J(4,0) = {(2,2,r³,1), (1,1,r,3), (1,1,r³,1), (1,1,r²,−5)}
        let spec = make_form(FormKind::<f64>::J { n: 4, k: 0 }).unwrap();
        let got: Vec<(u8, u8, f64, f64)> = spec
            .terms
            .iter()
            .map(|t| (t.deriv_i, t.deriv_j, theta_of(t), t.coeff))
            .collect();
        assert_eq!(
            got,
            vec![
                (2, 2, 3.0, 1.0),
                (1, 1, 1.0, 3.0),
                (1, 1, 3.0, 1.0),
                (1, 1, 2.0, -5.0),
            ]
        );
    }

    #[test]
    fn i21_term_list_matches_display() {
        // I(2,1) = {(2,2,r³,1), (1,1,r,3), (1,1,r⁵,1), (0,0,r³,−2), (1,1,r³,−4)}
        let spec = make_form(FormKind::<f64>::I { n: 2, k: 1 }).unwrap();
        let got: Vec<(u8, u8, f64, f64)> = spec
            .terms
            .iter()
            .map(|t| (t.deriv_i, t.deriv_j, theta_of(t), t.coeff))
            .collect();
        assert_eq!(
            got,
            vec![
                (2, 2, 3.0, 1.0),
                (1, 1, 1.0, 3.0),
                (1, 1, 5.0, 1.0),
                (0, 0, 3.0, -2.0),
                (1, 1, 3.0, -4.0),
            ]
        );
    }

    #[test]
    fn q21_single_term() {
        let spec = make_form(FormKind::<f64>::Q { n: 2, k: 1 }).unwrap();
        assert_eq!(spec.terms.len(), 1);
        assert_eq!(theta_of(&spec.terms[0]), 3.0);
    }

    #[test]
    fn hydrogen_extremal_annihilates_j() {
        let v = RadialProfile::exp_poly(&[1.0f64, 1.0], 1.0);
        for n in [2usize, 4, 5, 7] {
            let spec = make_form(FormKind::<f64>::J { n, k: 0 }).unwrap();
            let val = eval_form(&spec, &v, &cfg()).unwrap();
            assert!(val.abs() < 1e-9, "J({n},0) at extremal: {val}");
        }
    }

    #[test]
    fn gamma_moment_examples() {
        let v = RadialProfile::exp_poly(&[1.0f64], 1.0);
        let q21 = make_form(FormKind::<f64>::Q { n: 2, k: 1 }).unwrap();
        assert!((eval_form(&q21, &v, &cfg()).unwrap() - 0.375).abs() < 1e-14);

        let e1 = make_form(FormKind::<f64>::E1 { n: 2 }).unwrap();
        let f1 = make_form(FormKind::<f64>::F1 { n: 2 }).unwrap();
        let ev = eval_form(&e1, &v, &cfg()).unwrap();
        let fv = eval_form(&f1, &v, &cfg()).unwrap();
        assert!((ev - 1.5).abs() < 1e-14, "E1 {ev}");
        assert!((fv - 0.75).abs() < 1e-14, "F1 {fv}");
        assert!((ev / fv - 2.0).abs() < 1e-13);
    }

    #[test]
    fn polarize_examples() {
        let q20 = make_form(FormKind::<f64>::Q { n: 2, k: 0 }).unwrap();
        let a = RadialProfile::exp_poly(&[1.0f64], 1.0);
        let b = RadialProfile::exp_poly(&[0.0f64, 1.0], 1.0);
        let cross = polarize(&q20, &a, &b, &cfg()).unwrap();
        assert!(cross.abs() < 1e-14, "cross term {cross}");
        let diag = polarize(&q20, &a, &a, &cfg()).unwrap();
        assert!((diag - 0.25).abs() < 1e-14);
        // diagonal case agrees with eval_form for an asymmetric-derivative form
        let j = make_form(FormKind::<f64>::J { n: 3, k: 1 }).unwrap();
        let w = RadialProfile::exp_poly(&[0.3f64, -0.2, 1.0], 0.8);
        let d1 = polarize(&j, &w, &w, &cfg()).unwrap();
        let d2 = eval_form(&j, &w, &cfg()).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn fused_polarization_matches_termwise() {
        let i31 = make_form(FormKind::<f64>::I { n: 3, k: 1 }).unwrap();
        let u = RadialProfile::gauss_poly(&[1.0f64, 0.0, -0.3], 0.6);
        let v = RadialProfile::gauss_poly(&[0.5f64, 0.2], 0.4);
        let a = polarize(&i31, &u, &v, &cfg()).unwrap();
        let b = polarize_fused(&i31, &u, &v, &cfg()).unwrap();
        assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()), "{a} vs {b}");
    }

    #[test]
    fn fullspace_examples() {
        // N=2, single mode (0, e^{-r}): grad_sq = ∫ r e^{-2r} = 1/4.
        let u = ModeExpansion::single(2, 0, RadialProfile::exp_poly(&[1.0f64], 1.0)).unwrap();
        let g = fullspace(&u, Functional::GradSq, &cfg()).unwrap();
        assert!((g - 0.25).abs() < 1e-14);

        // N=3, single mode (1, e^{-r}): grad_over_r = 0.375 + 0.25.
        let u = ModeExpansion::single(3, 1, RadialProfile::exp_poly(&[1.0f64], 1.0)).unwrap();
        let g = fullspace(&u, Functional::GradOverR, &cfg()).unwrap();
        assert!((g - 0.625).abs() < 1e-14);

        // Gaussian mode: lap_sq + r_grad_sq − (N+2)·grad_sq = 0.
        for n in [2usize, 3, 5, 8] {
            let u = ModeExpansion::single(n, 0, RadialProfile::gauss(1.0f64, 0.5)).unwrap();
            let lap = fullspace(&u, Functional::LapSq, &cfg()).unwrap();
            let rg = fullspace(&u, Functional::RGradSq, &cfg()).unwrap();
            let g = fullspace(&u, Functional::GradSq, &cfg()).unwrap();
            let deficit = lap + rg - (n as f64 + 2.0) * g;
            assert!(deficit.abs() < 1e-9 * g.max(1.0), "N={n}: {deficit}");
        }
    }

    #[test]
    fn deficit_examples() {
        // δ₂ at the Gaussian extremal vanishes.
        let u = ModeExpansion::single(4, 0, RadialProfile::gauss(1.0f64, 0.5)).unwrap();
        let d = deficits(&u, Deficit::Delta2, &cfg()).unwrap();
        assert!(d.abs() < 1e-9);

        // J_N at (1+r)e^{-r}, N=4.
        let u = ModeExpansion::single(4, 0, RadialProfile::exp_poly(&[1.0f64, 1.0], 1.0)).unwrap();
        let d = deficits(&u, Deficit::JN, &cfg()).unwrap();
        assert!(d.abs() < 1e-9, "J_4 deficit {d}");

        // δ₁ at a scaled Gaussian αe^{−βr²} vanishes for any α, β.
        let u = ModeExpansion::single(3, 0, RadialProfile::gauss(2.0f64, 0.7)).unwrap();
        let d = deficits(&u, Deficit::Delta1, &cfg()).unwrap();
        assert!(d.abs() < 1e-9, "delta1 at Gaussian: {d}");
    }

    #[test]
    fn mode_additivity_is_exact() {
        let v0 = RadialProfile::exp_poly(&[1.0f64, 0.5], 1.0);
        let v1 = RadialProfile::gauss_poly(&[0.4f64], 0.8);
        let both = ModeExpansion::new(3, vec![(0, v0.clone()), (1, v1.clone())]).unwrap();
        let only0 = ModeExpansion::single(3, 0, v0).unwrap();
        let only1 = ModeExpansion::single(3, 1, v1).unwrap();
        for which in [
            Functional::GradSq,
            Functional::LapSq,
            Functional::GradOverR,
            Functional::RGradSq,
        ] {
            let sum = fullspace(&both, which, &cfg()).unwrap();
            let parts =
                fullspace(&only0, which, &cfg()).unwrap() + fullspace(&only1, which, &cfg()).unwrap();
            assert_eq!(sum, parts, "{which:?}");
        }
    }

    #[test]
    fn j_positivity_on_random_profiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let n = 1 + (trial % 6) as usize; // N in 1..=6
            let rate = rng.gen_range(0.4..2.0);
            // zero-slope polynomial p'(0) = rate·p(0) keeps N ∈ {1,2} forms finite
            let c0 = rng.gen_range(-1.0..1.0f64);
            let c2 = rng.gen_range(-1.0..1.0f64);
            let c3 = rng.gen_range(-0.5..0.5f64);
            let v = RadialProfile::exp_poly(&[c0, rate * c0, c2, c3], rate);
            let spec = make_form(FormKind::<f64>::J { n, k: 0 }).unwrap();
            let val = eval_form(&spec, &v, &cfg()).unwrap();
            assert!(val >= -1e-9, "J({n},0) = {val}");
        }
        // J(N,k) ≥ 0 for k ≥ 2, N ≥ 2.
        for trial in 0..40 {
            let n = 2 + (trial % 4) as usize;
            let k = 2 + (trial % 3) as usize;
            let rate = rng.gen_range(0.4..2.0);
            let coeffs: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = RadialProfile::exp_poly(&coeffs, rate);
            let spec = make_form(FormKind::<f64>::J { n, k }).unwrap();
            let val = eval_form(&spec, &v, &cfg()).unwrap();
            assert!(val >= -1e-9, "J({n},{k}) = {val}");
        }
    }

    #[test]
    fn j_n0_deficit_identity() {
        // With v = e^{−r}ξ and ρ = ξ′−ξ:  J_{N,0}(v) = ∫ r^{N−3}e^{−2r}(rρ′−ρ)².
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..25 {
            let n = 3 + (trial % 5) as usize;
            let xi: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v = RadialProfile::exp_poly(&xi, 1.0);
            let spec = make_form(FormKind::<f64>::J { n, k: 0 }).unwrap();
            let lhs = eval_form(&spec, &v, &cfg()).unwrap();

            // rhs by direct quadrature on the residual square
            let xi_poly = crate::profile::Poly::new(&xi);
            let rho = xi_poly.deriv().add_scaled(&xi_poly, -1.0);
            let integrand = rho.deriv().mul_r().add_scaled(&rho, -1.0); // rρ′−ρ
            let w = WeightSpec::exp(n as f64 - 3.0, 2.0);
            let rhs = integrate_weighted(
                |r| {
                    let q = integrand.eval(r);
                    Ok(q * q)
                },
                &w,
                &cfg(),
            )
            .unwrap()
            .value;
            assert!(
                (lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()),
                "N={n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn dilation_covariance_of_fullspace() {
        // grad_sq(u_λ) = λ^{2−N}·grad_sq(u)
        let v = RadialProfile::exp_poly(&[1.0f64, -0.3], 1.0);
        let u = ModeExpansion::single(3, 1, v).unwrap();
        let lam = 1.7f64;
        let g = fullspace(&u, Functional::GradSq, &cfg()).unwrap();
        let gs = fullspace(&u.dilate(lam), Functional::GradSq, &cfg()).unwrap();
        assert!((gs - lam.powi(2 - 3) * g).abs() < 1e-12 * g);
    }

    #[test]
    fn sampled_profile_barred_from_second_derivative_forms() {
        let grid: Vec<f64> = (0..40).map(|i| 0.1 + 0.2 * i as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&r| (-r).exp()).collect();
        let v = RadialProfile::sampled(&grid, &vals, 3).unwrap();
        let lap = mode_form::<f64>(Functional::LapSq, 3, 0).unwrap();
        assert!(matches!(
            eval_form(&lap, &v, &cfg()),
            Err(Error::Precondition(_))
        ));
        let grad = mode_form::<f64>(Functional::GradSq, 3, 0).unwrap();
        assert!(eval_form(&grad, &v, &cfg()).is_ok());
    }
}
