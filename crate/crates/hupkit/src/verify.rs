//! Verification suites: each check measures a residual or bound and compares
//! it against the contract threshold. Shared by the CLI driver and the
//! acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cone::{lemma14_check, Cone};
use crate::error::Result;
use crate::forms::{
    crosscheck_lemma21, deficits, fullspace, Deficit, Functional, ModeExpansion,
};
use crate::hardy::{deficit_identity_check, hamamoto_check, HardyPair};
use crate::linearize::{equivalence_check, Problem};
use crate::profile::RadialProfile;
use crate::quad::{Decay, QuadratureConfig};
use crate::rayleigh::{extremal_check, sampled_radial_stability, ProblemKind};
use crate::scalar::Real;

/// Direction of a check's comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// pass iff value ≤ threshold
    UpperBound,
    /// pass iff value ≥ threshold
    LowerBound,
}

/// One verification row.
#[derive(Debug, Clone)]
pub struct CheckRow<T> {
    pub name: String,
    pub dim: Option<usize>,
    pub mode: Option<usize>,
    pub value: T,
    pub threshold: T,
    pub kind: CheckKind,
    pub pass: bool,
}

impl<T: Real> CheckRow<T> {
    fn upper(name: impl Into<String>, dim: Option<usize>, value: T, threshold: T) -> Self {
        Self {
            name: name.into(),
            dim,
            mode: None,
            value,
            threshold,
            kind: CheckKind::UpperBound,
            pass: value <= threshold,
        }
    }

    fn lower(name: impl Into<String>, dim: Option<usize>, value: T, threshold: T) -> Self {
        Self {
            name: name.into(),
            dim,
            mode: None,
            value,
            threshold,
            kind: CheckKind::LowerBound,
            pass: value >= threshold,
        }
    }
}

/// Hardy suite: derived-weight term lists against the three displayed
/// instances, the deficit identity over seeded profiles, and the
/// fourth-order inequality.
pub fn hardy_suite<T: Real>(
    profiles: usize,
    seed: u64,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<CheckRow<T>>> {
    let mut rows = Vec::new();

    // Displayed weight instances, compared exactly as term lists.
    let mut term_dev = T::zero();
    {
        let p = HardyPair::power(T::of(2.0))?;
        let terms = p.derive_weight();
        term_dev = term_dev
            .max((terms[0].0 - T::of(0.25)).abs())
            .max((terms[0].1.theta - T::zero()).abs());
        if terms.len() != 1 || terms[0].1.decay != Decay::None {
            term_dev = T::infinity();
        }

        let p = HardyPair::exp(T::of(4.0), T::one())?;
        let terms = p.derive_weight();
        // W = (r⁴ − 4r³)e^{−2r}
        term_dev = term_dev
            .max((terms[0].0 + T::of(4.0)).abs())
            .max((terms[0].1.theta - T::of(3.0)).abs())
            .max((terms[1].0 - T::one()).abs())
            .max((terms[1].1.theta - T::of(4.0)).abs());

        let p = HardyPair::exp(T::of(3.0), T::of(1.0 / 3.0))?;
        let terms = p.derive_weight();
        // W = ((5/9)r³ − r²)e^{−2r}
        term_dev = term_dev
            .max((terms[0].0 + T::one()).abs())
            .max((terms[0].1.theta - T::of(2.0)).abs())
            .max((terms[1].0 - T::of(5.0 / 9.0)).abs())
            .max((terms[1].1.theta - T::of(3.0)).abs());
    }
    rows.push(CheckRow::upper(
        "hardy/derived-weight-terms",
        None,
        term_dev,
        T::of(1e-14),
    ));

    let pairs: Vec<(String, HardyPair<T>)> = vec![
        ("power(theta=2)".into(), HardyPair::power(T::of(2.0))?),
        ("power(theta=3)".into(), HardyPair::power(T::of(3.0))?),
        ("power(theta=4)".into(), HardyPair::power(T::of(4.0))?),
        ("power(theta=5)".into(), HardyPair::power(T::of(5.0))?),
        (
            "exp(theta=1,kappa=1-alpha/3)".into(),
            HardyPair::exp(
                T::one(),
                T::one() - (T::of(3.0) + T::of(6.0) * T::of(2.0).sqrt()) / T::of(21.0),
            )?,
        ),
        ("exp(theta=2,kappa=2/5)".into(), HardyPair::exp(T::of(2.0), T::of(0.4))?),
        (
            "exp(theta=3,kappa=1/3)".into(),
            HardyPair::exp(T::of(3.0), T::of(1.0 / 3.0))?,
        ),
        ("exp(theta=4,kappa=1)".into(), HardyPair::exp(T::of(4.0), T::one())?),
        (
            "exp(theta=N-1,kappa=2/(N+2)),N=5".into(),
            HardyPair::exp(T::of(4.0), T::of(2.0 / 7.0))?,
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (name, pair) in &pairs {
        let mut worst = T::zero();
        for _ in 0..profiles {
            let rate = T::of(rng.gen_range(0.5..2.0f64));
            let c1 = T::of(rng.gen_range(-1.0..1.0f64));
            let c2 = T::of(rng.gen_range(-1.0..1.0f64));
            let c3 = T::of(rng.gen_range(-0.5..0.5f64));
            let v = RadialProfile::exp_poly(&[T::zero(), c1, c2, c3], rate);
            let (lhs, rhs, deficit) = deficit_identity_check(pair, &v, cfg)?;
            let resid = (lhs - rhs - deficit).abs() / (T::one() + lhs.abs());
            worst = worst.max(resid);
        }
        rows.push(CheckRow::upper(
            format!("hardy/deficit-identity/{name}"),
            None,
            worst,
            T::of(1e-9),
        ));
    }

    // Hamamoto inequality at the parameters the two-dimensional bound uses.
    let f = RadialProfile::exp_poly(&[T::one()], T::one());
    let (lhs, rhs, _) = hamamoto_check(T::of(2.0), T::one(), &f, cfg)?;
    rows.push(CheckRow::lower(
        "hardy/hamamoto(mu=2,eps=1)",
        None,
        lhs - rhs,
        -T::of(1e-9),
    ));
    Ok(rows)
}

/// Extremal residual suite.
pub fn extremal_suite<T: Real>(cfg: &QuadratureConfig<T>) -> Result<Vec<CheckRow<T>>> {
    let mut rows = Vec::new();
    let r = extremal_check::<T>(4, 0, ProblemKind::Hydrogen, cfg)?;
    rows.push(CheckRow::upper("extremal/hydrogen(1+r)e^-r", Some(4), r, T::of(1e-9)));
    for n in 2..=6 {
        let r = extremal_check::<T>(n, 1, ProblemKind::Stability, cfg)?;
        rows.push(CheckRow::upper(
            "extremal/stability-mode1",
            Some(n),
            r,
            T::of(1e-7),
        ));
    }
    for n in [3usize, 5] {
        let u = ModeExpansion::single(n, 0, RadialProfile::gauss(T::one(), T::of(0.5)))?;
        let d2 = deficits(&u, Deficit::Delta2, cfg)?;
        let scale = fullspace(&u, Functional::GradSq, cfg)? * T::of_usize(n + 2);
        rows.push(CheckRow::upper(
            "extremal/delta2-gaussian",
            Some(n),
            d2.abs() / scale,
            T::of(1e-9),
        ));
    }
    Ok(rows)
}

fn random_cone<T: Real>(rng: &mut ChaCha8Rng, dim: usize) -> Cone<T> {
    let n_comp = rng.gen_range(1..=4);
    let comps = (0..n_comp)
        .map(|_| {
            let sub = rng.gen_range(1..=3usize.min(dim));
            (0..sub)
                .map(|_| {
                    (0..dim)
                        .map(|_| T::of(rng.gen_range(-1.0..1.0f64)))
                        .collect()
                })
                .collect()
        })
        .collect();
    Cone::new(dim, comps).expect("random cone construction")
}

/// Lemma-1.4 suite: the √2 bound over seeded random (u, cone) pairs and the
/// equality case for orthogonal u.
pub fn lemma14_suite<T: Real>(trials: usize, seed: u64) -> Result<Vec<CheckRow<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_violation = -T::infinity();
    for _ in 0..trials {
        let dim = rng.gen_range(2..=10);
        let cone = random_cone::<T>(&mut rng, dim);
        let u: Vec<T> = (0..dim).map(|_| T::of(rng.gen_range(-2.0..2.0f64))).collect();
        let norm: T = u.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm < T::of(1e-9) {
            continue;
        }
        let (lhs, rhs, _) = lemma14_check(&u, &cone)?;
        worst_violation = worst_violation.max(lhs - rhs);
    }
    let mut rows = vec![CheckRow::upper(
        format!("lemma14/sqrt2-bound({trials} trials)"),
        None,
        worst_violation,
        T::of(1e-12),
    )];

    let mut worst_eq = T::zero();
    for _ in 0..(trials / 10).max(100) {
        let dim = rng.gen_range(3..=10);
        let cone = random_cone::<T>(&mut rng, dim);
        // orthonormalize the union's bases jointly before projecting away
        let mut joint: Vec<Vec<T>> = Vec::new();
        for comp in cone.components() {
            for b in comp {
                let mut v = b.clone();
                for q in &joint {
                    let c: T = v.iter().zip(q).map(|(&x, &y)| x * y).sum();
                    for (vi, &qi) in v.iter_mut().zip(q) {
                        *vi = *vi - c * qi;
                    }
                }
                let n: T = v.iter().map(|&x| x * x).sum::<T>().sqrt();
                if n > T::of(1e-9) {
                    for vi in v.iter_mut() {
                        *vi = *vi / n;
                    }
                    joint.push(v);
                }
            }
        }
        let mut u: Vec<T> = (0..dim).map(|_| T::of(rng.gen_range(-1.0..1.0f64))).collect();
        for q in &joint {
            let c: T = u.iter().zip(q).map(|(&x, &y)| x * y).sum();
            for (ui, &qi) in u.iter_mut().zip(q) {
                *ui = *ui - c * qi;
            }
        }
        let norm: T = u.iter().map(|&x| x * x).sum::<T>().sqrt();
        if norm < T::of(1e-6) {
            continue;
        }
        let (lhs, rhs, _) = lemma14_check(&u, &cone)?;
        worst_eq = worst_eq.max((lhs - rhs).abs() / (T::one() + rhs));
    }
    rows.push(CheckRow::upper(
        "lemma14/orthogonal-equality",
        None,
        worst_eq,
        T::of(1e-12),
    ));
    Ok(rows)
}

/// The six shipped radial-versus-direct integration cases.
pub fn lemma21_suite<T: Real>(cfg: &QuadratureConfig<T>) -> Result<Vec<CheckRow<T>>> {
    let exp_profile = || RadialProfile::exp_poly(&[T::one()], T::one());
    let gauss_profile = || RadialProfile::gauss(T::one(), T::of(0.5));
    let cases: Vec<(usize, usize, RadialProfile<T>, Functional, &str)> = vec![
        (2, 0, exp_profile(), Functional::GradSq, "grad_sq"),
        (2, 1, exp_profile(), Functional::GradSq, "grad_sq"),
        (3, 0, gauss_profile(), Functional::LapSq, "lap_sq"),
        (2, 1, gauss_profile(), Functional::RGradSq, "r_grad_sq"),
        (3, 1, gauss_profile(), Functional::GradSq, "grad_sq"),
        (2, 0, gauss_profile(), Functional::LapSq, "lap_sq"),
    ];
    let mut rows = Vec::new();
    for (n, k, v, which, label) in cases {
        let (radial, direct) = crosscheck_lemma21(n, k, &v, which, cfg)?;
        let rel = (radial - direct).abs() / (T::one() + radial.abs());
        rows.push(CheckRow {
            name: format!("lemma21/{label}(N={n},k={k})"),
            dim: Some(n),
            mode: Some(k),
            value: rel,
            threshold: T::of(1e-6),
            kind: CheckKind::UpperBound,
            pass: rel <= T::of(1e-6),
        });
    }
    Ok(rows)
}

/// Seeded additive-versus-product consistency checks for both problems.
pub fn linearize_suite<T: Real>(
    samples: usize,
    seed: u64,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<CheckRow<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [T::zero(), T::zero()];
    for _ in 0..samples {
        let dim = rng.gen_range(2..=6usize);
        let c0 = T::of(rng.gen_range(0.2..1.5f64));
        let c2 = T::of(rng.gen_range(-0.6..0.6f64));
        let rate0 = T::of(rng.gen_range(0.3..1.5f64));
        let v0 = RadialProfile::gauss_poly(&[c0, T::zero(), c2], rate0);
        let mut modes = vec![(0usize, v0)];
        if rng.gen_bool(0.5) {
            let c = T::of(rng.gen_range(-1.0..1.0f64));
            let rate = T::of(rng.gen_range(0.5..1.5f64));
            modes.push((1, RadialProfile::exp_poly(&[c, c * T::of(0.3)], rate)));
        }
        let u = ModeExpansion::new(dim, modes)?;
        for (slot, problem) in [(0usize, Problem::Hydrogen), (1, Problem::Hup0)] {
            let disc = equivalence_check(&u, problem, cfg)?;
            let scale = {
                let h = fullspace(&u, Functional::LapSq, cfg)?;
                let uu = match problem {
                    Problem::Hydrogen => fullspace(&u, Functional::GradSq, cfg)?,
                    Problem::Hup0 => fullspace(&u, Functional::RGradSq, cfg)?,
                };
                T::of(2.0) * (h * uu).sqrt()
            };
            worst[slot] = worst[slot].max(disc / (T::one() + scale));
        }
    }
    Ok(vec![
        CheckRow::upper(
            format!("linearize/hydrogen({samples} samples)"),
            None,
            worst[0],
            T::of(1e-8),
        ),
        CheckRow::upper(
            format!("linearize/hup0({samples} samples)"),
            None,
            worst[1],
            T::of(1e-8),
        ),
    ])
}

/// Sampled radial stability ratio: min δ₂/d₀² over the shipped family.
pub fn stability_sample_suite<T: Real>(
    trials: usize,
    seed: u64,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<CheckRow<T>>> {
    let mut rows = Vec::new();
    for n in [2usize, 3] {
        let min_ratio = sampled_radial_stability::<T>(n, trials, seed, cfg)?;
        rows.push(CheckRow::lower(
            format!("stability-sample/min-ratio({trials} trials)"),
            Some(n),
            min_ratio,
            T::of(2.0) - T::of(1e-6),
        ));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn hardy_suite_passes() {
        let rows = hardy_suite::<f64>(20, 11, &cfg()).unwrap();
        for row in rows {
            assert!(row.pass, "{}: value {} vs {}", row.name, row.value, row.threshold);
        }
    }

    #[test]
    fn lemma14_suite_passes() {
        let rows = lemma14_suite::<f64>(1000, 7).unwrap();
        for row in rows {
            assert!(row.pass, "{}: value {} vs {}", row.name, row.value, row.threshold);
        }
    }

    #[test]
    fn linearize_suite_passes() {
        let rows = linearize_suite::<f64>(10, 3, &cfg()).unwrap();
        for row in rows {
            assert!(row.pass, "{}: value {} vs {}", row.name, row.value, row.threshold);
        }
    }
}
