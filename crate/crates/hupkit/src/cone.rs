//! Cone geometry: distance to finite unions of subspaces, distance to the
//! equal-norm slice, and the distance of a mode expansion to the Gaussian
//! cone in the gradient inner product.

use crate::error::{Error, Result};
use crate::forms::{eval_form, mode_form, polarize, Functional, ModeExpansion};
use crate::profile::RadialProfile;
use crate::quad::QuadratureConfig;
use crate::scalar::Real;

/// A finite union of linear subspaces of ℝ^d, each stored as an
/// orthonormal basis (possibly empty: the trivial subspace {0}).
#[derive(Debug, Clone)]
pub struct Cone<T> {
    dim: usize,
    components: Vec<Vec<Vec<T>>>,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

impl<T: Real> Cone<T> {
    /// Build from spanning sets; each component is orthonormalized and
    /// dependent vectors are dropped.
    pub fn new(dim: usize, components: Vec<Vec<Vec<T>>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("cone needs at least one component".into()));
        }
        let mut ortho_components = Vec::with_capacity(components.len());
        for spanning in components {
            let mut basis: Vec<Vec<T>> = Vec::new();
            for mut v in spanning {
                if v.len() != dim {
                    return Err(Error::InvalidParameter("vector dimension mismatch".into()));
                }
                for b in &basis {
                    let c = dot(&v, b);
                    for (vi, &bi) in v.iter_mut().zip(b) {
                        *vi = *vi - c * bi;
                    }
                }
                let n = norm(&v);
                if n > T::of(1e-10) {
                    for vi in v.iter_mut() {
                        *vi = *vi / n;
                    }
                    basis.push(v);
                }
            }
            ortho_components.push(basis);
        }
        Ok(Self { dim, components: ortho_components })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Vec<Vec<T>>] {
        &self.components
    }

    /// (‖u − Proj u‖, ‖Proj u‖) for one component, both taken from the
    /// decomposition vectors themselves so that neither suffers the
    /// cancellation of a norm² subtraction near the cone.
    fn component_geometry(&self, u: &[T], comp: usize) -> (T, T) {
        let mut resid = u.to_vec();
        let mut proj = vec![T::zero(); self.dim];
        for b in &self.components[comp] {
            let c = dot(&resid, b);
            for i in 0..self.dim {
                resid[i] = resid[i] - c * b[i];
                proj[i] = proj[i] + c * b[i];
            }
        }
        (norm(&resid), norm(&proj))
    }
}

/// min over components of ‖u − Proj(u)‖.
pub fn dist_to_cone<T: Real>(u: &[T], c: &Cone<T>) -> Result<T> {
    if u.len() != c.dim {
        return Err(Error::InvalidParameter("vector dimension mismatch".into()));
    }
    let mut best = T::infinity();
    for comp in 0..c.components.len() {
        let (d, _) = c.component_geometry(u, comp);
        best = best.min(d);
    }
    Ok(best)
}

/// min over components of the distance to {w in component : ‖w‖ = ‖u‖}:
/// √(2‖u‖(‖u‖ − ‖p‖)) for nonzero projection p, √2·‖u‖ otherwise
/// (the same expression with ‖u‖ − ‖p‖ written as d²/(‖u‖ + ‖p‖)).
pub fn dist_to_norm_sphere<T: Real>(u: &[T], c: &Cone<T>) -> Result<T> {
    if u.len() != c.dim {
        return Err(Error::InvalidParameter("vector dimension mismatch".into()));
    }
    let un = norm(u);
    if un == T::zero() {
        return Err(Error::Precondition(
            "norm sphere undefined for u = 0".into(),
        ));
    }
    let mut best = T::infinity();
    for comp in 0..c.components.len() {
        let (d, p) = c.component_geometry(u, comp);
        let s = d * (T::of(2.0) * un / (un + p)).sqrt();
        best = best.min(s);
    }
    Ok(best)
}

/// Check dist(u, S^u) ≤ √2·dist(u, Σ).
pub fn lemma14_check<T: Real>(u: &[T], c: &Cone<T>) -> Result<(T, T, bool)> {
    let lhs = dist_to_norm_sphere(u, c)?;
    let rhs = T::of(2.0).sqrt() * dist_to_cone(u, c)?;
    Ok((lhs, rhs, lhs <= rhs + T::of(1e-12)))
}

/// The pairing ⟨u,w⟩ = ∫∇u·∇w over mode expansions, realized by the
/// mode-sum identities (modes of distinct index are orthogonal).
#[derive(Debug, Clone, Copy)]
pub struct GradInnerProduct {
    pub dim: usize,
}

impl GradInnerProduct {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn pair<T: Real>(
        &self,
        u: &ModeExpansion<T>,
        w: &ModeExpansion<T>,
        cfg: &QuadratureConfig<T>,
    ) -> Result<T> {
        let mut acc = T::zero();
        for (ku, vu) in &u.modes {
            for (kw, vw) in &w.modes {
                if ku == kw {
                    let spec = mode_form(Functional::GradSq, self.dim, *ku)?;
                    acc += polarize(&spec, vu, vw, cfg)?;
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sq<T: Real>(
        &self,
        u: &ModeExpansion<T>,
        cfg: &QuadratureConfig<T>,
    ) -> Result<T> {
        crate::forms::fullspace(u, Functional::GradSq, cfg)
    }
}

/// Result of the Gaussian-cone projection.
#[derive(Debug, Clone, Copy)]
pub struct GaussianConeDistance<T> {
    pub d0: T,
    pub best_alpha: T,
    pub best_beta: T,
}

/// ⟨u₀, e^{−βr²}⟩_∇ and ‖∇e^{−βr²}‖² restricted to the k=0 mode.
fn gaussian_projection_parts<T: Real>(
    dim: usize,
    v0: &RadialProfile<T>,
    beta: T,
    cfg: &QuadratureConfig<T>,
) -> Result<(T, T)> {
    let g = RadialProfile::gauss(T::one(), beta);
    let spec = mode_form(Functional::GradSq, dim, 0)?;
    let cross = polarize(&spec, v0, &g, cfg)?;
    let gg = eval_form(&spec, &g, cfg)?;
    Ok((cross, gg))
}

/// Squared norm of the projection of the k=0 mode onto the line spanned by
/// e^{−βr²} in the gradient inner product.
fn projection_gain<T: Real>(
    dim: usize,
    v0: &RadialProfile<T>,
    beta: T,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let (cross, gg) = gaussian_projection_parts(dim, v0, beta, cfg)?;
    Ok(cross * cross / gg)
}

/// Distance of u to the Gaussian cone {αe^{−βr²}} in the gradient norm.
///
/// Only the k = 0 mode projects onto the cone; higher modes contribute their
/// full gradient norm. The inner α is solved in closed form; the outer β by
/// a 50-point coarse scan of log β ∈ [−6, 6] followed by golden-section
/// refinement to 1e−10.
pub fn gaussian_cone_distance<T: Real>(
    u: &ModeExpansion<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<GaussianConeDistance<T>> {
    let total = crate::forms::fullspace(u, Functional::GradSq, cfg)?;
    if total == T::zero() {
        return Ok(GaussianConeDistance {
            d0: T::zero(),
            best_alpha: T::zero(),
            best_beta: T::one(),
        });
    }
    let v0 = u.modes.iter().find(|(k, _)| *k == 0).map(|(_, v)| v);
    let (gain, alpha, beta) = match v0 {
        None => (T::zero(), T::zero(), T::one()),
        Some(v0) => {
            // coarse scan documents unimodality per run
            let lo = T::of(-6.0);
            let hi = T::of(6.0);
            let m = 50usize;
            let step = (hi - lo) / T::of_usize(m - 1);
            let mut best_i = 0usize;
            let mut best_val = -T::infinity();
            for i in 0..m {
                let beta = (lo + step * T::of_usize(i)).exp();
                let val = projection_gain(u.dim, v0, beta, cfg)?;
                if val > best_val {
                    best_val = val;
                    best_i = i;
                }
            }
            let mut a = lo + step * T::of_usize(best_i.saturating_sub(1));
            let mut b = (lo + step * T::of_usize((best_i + 1).min(m - 1))).min(hi);
            // golden-section maximization on log β
            let phi = (T::of(5.0).sqrt() - T::one()) * T::of(0.5);
            let mut c = b - phi * (b - a);
            let mut d = a + phi * (b - a);
            let mut fc = projection_gain(u.dim, v0, c.exp(), cfg)?;
            let mut fd = projection_gain(u.dim, v0, d.exp(), cfg)?;
            while (b - a).abs() > T::of(1e-10) {
                if fc > fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = projection_gain(u.dim, v0, c.exp(), cfg)?;
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = projection_gain(u.dim, v0, d.exp(), cfg)?;
                }
            }
            let beta = ((a + b) * T::of(0.5)).exp();
            let (cross, gg) = gaussian_projection_parts(u.dim, v0, beta, cfg)?;
            (cross * cross / gg, cross / gg, beta)
        }
    };
    let d0 = (total - gain).max(T::zero()).sqrt();
    Ok(GaussianConeDistance { d0, best_alpha: alpha, best_beta: beta })
}

/// Distance of u to the equal-gradient-norm slice of the Gaussian cone:
/// √(2‖u‖(‖u‖ − ‖p‖)) with p the best cone projection.
pub fn sphere_slice_distance<T: Real>(
    u: &ModeExpansion<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let total = crate::forms::fullspace(u, Functional::GradSq, cfg)?;
    if total == T::zero() {
        return Err(Error::Precondition(
            "norm sphere undefined for u = 0".into(),
        ));
    }
    let un = total.sqrt();
    let proj = {
        let d = gaussian_cone_distance(u, cfg)?;
        (total - d.d0 * d.d0).max(T::zero()).sqrt()
    };
    Ok((T::of(2.0) * un * (un - proj).max(T::zero())).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    fn axis_cone(dim: usize, axes: &[usize]) -> Cone<f64> {
        let comps = axes
            .iter()
            .map(|&a| {
                let mut v = vec![0.0; dim];
                v[a] = 1.0;
                vec![v]
            })
            .collect();
        Cone::new(dim, comps).unwrap()
    }

    #[test]
    fn axis_distances() {
        let c = axis_cone(2, &[0]);
        assert!((dist_to_cone(&[0.0, 1.0], &c).unwrap() - 1.0).abs() < 1e-15);
        assert!((dist_to_cone(&[1.0, 1.0], &c).unwrap() - 1.0).abs() < 1e-15);
        let c3 = axis_cone(3, &[0, 1]);
        let d = dist_to_cone(&[3.0, 4.0, 12.0], &c3).unwrap();
        assert!((d - 153.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norm_sphere_distances() {
        let c = axis_cone(2, &[0]);
        // u ⟂ Σ: distance √2·‖u‖
        let d = dist_to_norm_sphere(&[0.0, 1.0], &c).unwrap();
        assert!((d - 2.0f64.sqrt()).abs() < 1e-15);
        // u = (1,1): √(4 − 2√2)
        let d = dist_to_norm_sphere(&[1.0, 1.0], &c).unwrap();
        assert!((d - (4.0 - 2.0 * 2.0f64.sqrt()).sqrt()).abs() < 1e-14);
        // u in the cone
        let d = dist_to_norm_sphere(&[1.0, 0.0], &c).unwrap();
        assert!(d.abs() < 1e-12);
        assert!(dist_to_norm_sphere(&[0.0, 0.0], &c).is_err());
    }

    fn random_cone(rng: &mut ChaCha8Rng, dim: usize) -> Cone<f64> {
        let n_comp = rng.gen_range(1..=4);
        let comps = (0..n_comp)
            .map(|_| {
                let sub = rng.gen_range(1..=3usize.min(dim));
                (0..sub)
                    .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
                    .collect()
            })
            .collect();
        Cone::new(dim, comps).unwrap()
    }

    #[test]
    fn lemma_inequality_random_trials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let dim = rng.gen_range(2..=10);
            let cone = random_cone(&mut rng, dim);
            let u: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
            if u.iter().all(|&x| x.abs() < 1e-9) {
                continue;
            }
            let (lhs, rhs, ok) = lemma14_check(&u, &cone).unwrap();
            assert!(ok, "violated: lhs {lhs}, rhs {rhs}");
        }
    }

    #[test]
    fn lemma_equality_when_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let dim = rng.gen_range(3..=8);
            let cone = random_cone(&mut rng, dim);
            // project a random vector away from the span of the whole union:
            // orthonormalize all component bases jointly first, otherwise
            // removing one component can reintroduce another
            let mut joint: Vec<Vec<f64>> = Vec::new();
            for comp in cone.components() {
                for b in comp {
                    let mut v = b.clone();
                    for q in &joint {
                        let c: f64 = v.iter().zip(q).map(|(&x, &y)| x * y).sum();
                        for (vi, &qi) in v.iter_mut().zip(q) {
                            *vi -= c * qi;
                        }
                    }
                    let n: f64 = v.iter().map(|&x| x * x).sum::<f64>().sqrt();
                    if n > 1e-9 {
                        for vi in v.iter_mut() {
                            *vi /= n;
                        }
                        joint.push(v);
                    }
                }
            }
            let mut u: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            for q in &joint {
                let c: f64 = u.iter().zip(q).map(|(&x, &y)| x * y).sum();
                for (ui, &qi) in u.iter_mut().zip(q) {
                    *ui -= c * qi;
                }
            }
            let n: f64 = u.iter().map(|&x| x * x).sum::<f64>().sqrt();
            if n < 1e-6 {
                continue;
            }
            let (lhs, rhs, _) = lemma14_check(&u, &cone).unwrap();
            assert!((lhs - rhs).abs() < 1e-12 * (1.0 + rhs), "lhs {lhs} rhs {rhs}");
        }
    }

    #[test]
    fn brute_force_distance_oracle() {
        // Sample many cone points; the sampled minimum must approach the
        // projection formula from above.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cone = random_cone(&mut rng, 4);
        let u: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let d_cone = dist_to_cone(&u, &cone).unwrap();
        let d_sphere = dist_to_norm_sphere(&u, &cone).unwrap();
        let un: f64 = u.iter().map(|&x| x * x).sum::<f64>().sqrt();
        let mut best_cone = f64::INFINITY;
        let mut best_sphere = f64::INFINITY;
        for comp in cone.components() {
            if comp.is_empty() {
                let d: f64 = un;
                best_cone = best_cone.min(d);
                best_sphere = best_sphere.min((2.0f64).sqrt() * un);
                continue;
            }
            for _ in 0..100_000 {
                let coeffs: Vec<f64> =
                    (0..comp.len()).map(|_| rng.gen_range(-3.0..3.0)).collect();
                let mut w = vec![0.0; 4];
                for (c, b) in coeffs.iter().zip(comp) {
                    for (wi, &bi) in w.iter_mut().zip(b) {
                        *wi += c * bi;
                    }
                }
                let d: f64 = u
                    .iter()
                    .zip(&w)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                best_cone = best_cone.min(d);
                let wn: f64 = w.iter().map(|&x| x * x).sum::<f64>().sqrt();
                if wn > 1e-12 {
                    let ws: Vec<f64> = w.iter().map(|&x| x * un / wn).collect();
                    let ds: f64 = u
                        .iter()
                        .zip(&ws)
                        .map(|(&a, &b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt();
                    best_sphere = best_sphere.min(ds);
                }
            }
        }
        assert!((best_cone - d_cone).abs() < 1e-3, "{best_cone} vs {d_cone}");
        assert!(
            (best_sphere - d_sphere).abs() < 1e-3,
            "{best_sphere} vs {d_sphere}"
        );
    }

    #[test]
    fn scale_equivariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cone = random_cone(&mut rng, 5);
        let u: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lam = 3.1f64;
        let lu: Vec<f64> = u.iter().map(|&x| lam * x).collect();
        let d1 = dist_to_cone(&u, &cone).unwrap();
        let d2 = dist_to_cone(&lu, &cone).unwrap();
        assert!((d2 - lam * d1).abs() < 1e-12 * (1.0 + d2));
        let s1 = dist_to_norm_sphere(&u, &cone).unwrap();
        let s2 = dist_to_norm_sphere(&lu, &cone).unwrap();
        assert!((s2 - lam * s1).abs() < 1e-12 * (1.0 + s2));
    }

    #[test]
    fn gaussian_cone_member_has_zero_distance() {
        let u = ModeExpansion::single(3, 0, RadialProfile::gauss(3.0f64, 2.0)).unwrap();
        let d = gaussian_cone_distance(&u, &cfg()).unwrap();
        assert!(d.d0.abs() < 1e-6, "d0 = {}", d.d0);
        assert!((d.best_alpha - 3.0).abs() < 1e-5, "alpha {}", d.best_alpha);
        assert!((d.best_beta - 2.0).abs() < 1e-5, "beta {}", d.best_beta);
    }

    #[test]
    fn pure_higher_mode_is_orthogonal_to_cone() {
        let p = crate::special::KummerParams::new(2.2f64, 2.0).unwrap();
        let u = ModeExpansion::single(3, 1, RadialProfile::psi(p)).unwrap();
        let d = gaussian_cone_distance(&u, &cfg()).unwrap();
        let g = crate::forms::fullspace(&u, Functional::GradSq, &cfg()).unwrap();
        assert!((d.d0 * d.d0 - g).abs() < 1e-9 * g, "{} vs {g}", d.d0 * d.d0);
        // slice distance is √2·d0 in the orthogonal case
        let s = sphere_slice_distance(&u, &cfg()).unwrap();
        assert!((s - 2.0f64.sqrt() * d.d0).abs() < 1e-9 * s);
    }

    #[test]
    fn mixed_expansion_orthogonal_decomposition() {
        // u = e^{−r²/2} + ε·(mode-1 profile): d0² = ε²·Q₁(mode profile).
        let eps = 0.1f64;
        let v1 = RadialProfile::gauss_poly(&[eps], 0.5);
        let u = ModeExpansion::new(
            3,
            vec![
                (0, RadialProfile::gauss(1.0f64, 0.5)),
                (1, v1.clone()),
            ],
        )
        .unwrap();
        let d = gaussian_cone_distance(&u, &cfg()).unwrap();
        let q1 = eval_form(
            &mode_form(Functional::GradSq, 3, 1).unwrap(),
            &v1,
            &cfg(),
        )
        .unwrap();
        assert!(
            (d.d0 * d.d0 - q1).abs() < 1e-8 * (1.0 + q1),
            "{} vs {q1}",
            d.d0 * d.d0
        );
        // slice ≤ √2·cone distance
        let s = sphere_slice_distance(&u, &cfg()).unwrap();
        assert!(s <= 2.0f64.sqrt() * d.d0 + 1e-10);
    }
}
