use num_complex::Complex;

use super::config::{QuadConfig, SpaceKind, SpaceSpec};
use super::extremal::ExtremalFunction;
use crate::error::Error;
use crate::function::{DiskFunction, Product};
use crate::quad::{gauss_jacobi, gauss_legendre, integrate_adaptive, AdaptiveSettings, Rule};
use crate::scalar::{unit, Real};

const MAX_CIRCLE_PANELS: usize = 4000;
/// Richardson order used when extrapolating circle means to the boundary.
const RICHARDSON_ORDER: usize = 4;
/// Relative disagreement allowed between the extrapolated limit and the boundary integral.
const BOUNDARY_SANITY: f64 = 1e-6;

#[inline]
fn abs_pow<T: Real>(v: Complex<T>, p: T) -> T {
    if p == T::lit(2.0) {
        v.norm_sqr()
    } else {
        v.norm().powf(p)
    }
}

/// `(1/2π) ∫ |f(r e^{iθ})|^p dθ`, adaptively.
pub fn circle_mean<T: Real, F: DiskFunction<T> + ?Sized>(f: &F, r: T, p: T, q: &QuadConfig<T>) -> Result<T, Error> {
    circle_mean_rel(f, r, p, q, T::inner_rel_tol())
}

fn circle_mean_rel<T: Real, F: DiskFunction<T> + ?Sized>(f: &F, r: T, p: T, q: &QuadConfig<T>, rel: T) -> Result<T, Error> {
    let settings = AdaptiveSettings {
        rel_tol: rel,
        abs_tol: T::zero(),
        initial_panels: (q.n_theta / 64).max(4),
        max_panels: MAX_CIRCLE_PANELS,
    };
    let res = integrate_adaptive(|theta| f.eval(unit(theta) * r).map(|v| abs_pow(v, p)), T::zero(), T::TAU(), settings)?;
    if !res.converged {
        return Err(Error::Quadrature(format!("circle mean at r = {r} did not converge")));
    }
    Ok(res.value / T::TAU())
}

/// Diagnostics of a Hardy-norm computation.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyNorm<T> {
    pub value: T,
    /// `(r_k, M_p(r_k))` over the configured radii followed by the extrapolation radii.
    pub circle_means: Vec<(T, T)>,
    /// Boundary mean `M_p(1)` when the function is known to be boundary-continuous.
    pub boundary_mean: Option<T>,
}

fn nondecreasing<T: Real>(prev: T, next: T) -> bool {
    next >= prev - T::lit(1e-9) * prev.abs() - T::min_positive_value()
}

/// `‖f‖_{H^p}` as the limit of circle means `M_p(r)` for `r → 1`.
///
/// Means over `q.hardy_radii` must be nondecreasing. Radii then approach 1
/// geometrically and the `p`-th powers of the means are Richardson
/// extrapolated to `r = 1`. For boundary-continuous `f` the limit is also
/// compared with the boundary integral.
pub fn hardy_norm_detailed<T: Real, F: DiskFunction<T> + ?Sized>(
    f: &F,
    p: T,
    q: &QuadConfig<T>,
) -> Result<HardyNorm<T>, Error> {
    hardy_norm_rel(f, p, q, T::inner_rel_tol())
}

fn hardy_norm_rel<T: Real, F: DiskFunction<T> + ?Sized>(
    f: &F,
    p: T,
    q: &QuadConfig<T>,
    rel: T,
) -> Result<HardyNorm<T>, Error> {
    SpaceSpec::hardy(p)?;
    q.validate()?;
    let mut circle_means = Vec::new();
    let mut last = T::zero();
    for &r in &q.hardy_radii {
        let m = circle_mean_rel(f, r, p, q, rel)?;
        if !nondecreasing(last, m) {
            return Err(Error::Quadrature(format!(
                "circle means decrease at r = {r} ({} < {last}); not a Hardy-class function",
                m.powf(p.recip())
            )));
        }
        circle_means.push((r, m));
        last = m;
    }

    let s0 = T::one() - *q.hardy_radii.last().expect("validated nonempty");
    let min_s = T::lit(1e-13).max(T::epsilon() * T::lit(1e3));
    let conv = (q.tol * T::lit(1e-2)).max(rel * T::lit(100.0));
    let mut prev_row = vec![last];
    let mut estimates: Vec<T> = vec![last];
    let mut limit = None;
    let mut s = s0;
    for j in 1usize.. {
        s = s * T::lit(0.5);
        if s < min_s {
            break;
        }
        let r = T::one() - s;
        let m = circle_mean_rel(f, r, p, q, rel)?;
        if !nondecreasing(last, m) {
            return Err(Error::Quadrature(format!("circle means decrease at r = {r}")));
        }
        circle_means.push((r, m));
        last = m;
        let order = j.min(RICHARDSON_ORDER);
        let mut row = Vec::with_capacity(order + 1);
        row.push(m);
        let mut factor = T::one();
        for k in 1..=order {
            factor = factor * T::lit(2.0);
            let cur = row[k - 1];
            row.push(cur + (cur - prev_row[k - 1]) / (factor - T::one()));
        }
        let est = row[order];
        prev_row = row;
        estimates.push(est);
        let n = estimates.len();
        if j >= 3 {
            let scale = est.abs().max(T::min_positive_value());
            let d1 = (estimates[n - 1] - estimates[n - 2]).abs();
            let d2 = (estimates[n - 2] - estimates[n - 3]).abs();
            if d1 <= conv * scale && d2 <= conv * scale {
                limit = Some(est);
                break;
            }
        }
    }
    let limit = limit.ok_or_else(|| {
        Error::Quadrature(format!("circle means did not converge as r -> 1 (last M_p^p = {last})"))
    })?;
    let limit = limit.max(T::zero());

    let boundary_mean = if f.is_boundary_continuous() {
        let b = circle_mean_rel(f, T::one(), p, q, rel)?;
        let scale = b.max(limit).max(T::min_positive_value());
        if (b - limit).abs() > T::lit(BOUNDARY_SANITY) * scale {
            return Err(Error::Quadrature(format!(
                "extrapolated H^p limit {limit} disagrees with boundary integral {b}"
            )));
        }
        Some(b)
    } else {
        None
    };

    Ok(HardyNorm { value: limit.powf(p.recip()), circle_means, boundary_mean })
}

pub fn hardy_norm<T: Real, F: DiskFunction<T> + ?Sized>(f: &F, p: T, q: &QuadConfig<T>) -> Result<T, Error> {
    hardy_norm_detailed(f, p, q).map(|h| h.value)
}

/// `‖f‖_{A^p_α} = (∫_𝔻 |f|^p (1+α)(1−|z|²)^α dA)^{1/p}`.
///
/// In `u = |z|²` the measure becomes `(1+α)(1−u)^α du dθ/2π`. The `u`
/// integral is split into `[0, ½]` (adaptive), dyadic panels toward 1
/// (Gauss–Legendre) and a tail `[1 − 2^{-K}, 1]` carrying the weight
/// exactly (Gauss–Jacobi); `K` grows until the total settles.
pub fn bergman_norm<T: Real, F: DiskFunction<T> + ?Sized>(
    f: &F,
    p: T,
    alpha: T,
    q: &QuadConfig<T>,
) -> Result<T, Error> {
    bergman_norm_rel(f, p, alpha, q, T::inner_rel_tol())
}

fn bergman_norm_rel<T: Real, F: DiskFunction<T> + ?Sized>(
    f: &F,
    p: T,
    alpha: T,
    q: &QuadConfig<T>,
    rel: T,
) -> Result<T, Error> {
    SpaceSpec::bergman(p, alpha)?;
    q.validate()?;
    let one = T::one();
    let c = one + alpha;
    let mean = |u: T| circle_mean_rel(f, u.max(T::zero()).sqrt(), p, q, rel);
    let weight = |u: T| c * (one - u).powf(alpha);

    let inner = integrate_adaptive(
        |u| Ok::<T, Error>(weight(u) * mean(u)?),
        T::zero(),
        T::lit(0.5),
        AdaptiveSettings {
            rel_tol: rel,
            abs_tol: T::zero(),
            initial_panels: 1,
            max_panels: 400,
        },
    )?;
    if !inner.converged {
        return Err(Error::Quadrature("Bergman inner disk integral did not converge".into()));
    }

    let legendre: Rule<T> = gauss_legendre(q.n_radial);
    let alpha64 = alpha.to_f64().expect("finite alpha");
    let jacobi: Rule<T> = gauss_jacobi(q.n_radial, alpha64);
    let jacobi_scale = T::lit(2.0).powf(-c);
    let tail = |h: T| -> Result<T, Error> {
        let mut acc = T::zero();
        for (x, w) in jacobi.iter() {
            let v = (x + one) * T::lit(0.5);
            acc = acc + w * jacobi_scale * mean(one - h + h * v)?;
        }
        Ok(c * h.powf(c) * acc)
    };

    let conv = (q.tol * T::lit(1e-2)).max(rel * T::lit(100.0));
    let mut panels_sum = T::zero();
    let mut h = T::lit(0.5);
    let mut totals = vec![inner.value + tail(h)?];
    let max_levels = if T::epsilon() < T::lit(1e-10) { 48 } else { 20 };
    for _ in 1..max_levels {
        let (a, b) = (one - h, one - h * T::lit(0.5));
        let panel = legendre.mapped(a, b);
        for (u, w) in panel.iter() {
            panels_sum = panels_sum + w * weight(u) * mean(u)?;
        }
        h = h * T::lit(0.5);
        let total = inner.value + panels_sum + tail(h)?;
        totals.push(total);
        let n = totals.len();
        if n >= 3 {
            let scale = total.abs().max(T::min_positive_value());
            let d1 = (totals[n - 1] - totals[n - 2]).abs();
            let d2 = (totals[n - 2] - totals[n - 3]).abs();
            if d1 <= conv * scale && d2 <= conv * scale {
                return Ok(total.max(T::zero()).powf(p.recip()));
            }
        }
    }
    Err(Error::Quadrature("Bergman radial integral did not settle near the boundary".into()))
}

/// Norm in the given space.
pub fn space_norm<T: Real, F: DiskFunction<T> + ?Sized>(f: &F, space: &SpaceSpec<T>, q: &QuadConfig<T>) -> Result<T, Error> {
    space_norm_rel(f, space, q, T::inner_rel_tol())
}

/// [`space_norm`] with circle means resolved to relative accuracy `rel`.
pub(crate) fn space_norm_rel<T: Real, F: DiskFunction<T> + ?Sized>(
    f: &F,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
    rel: T,
) -> Result<T, Error> {
    match space.kind {
        SpaceKind::Hardy => hardy_norm_rel(f, space.p, q, rel).map(|h| h.value),
        SpaceKind::Bergman => bergman_norm_rel(f, space.p, space.alpha, q, rel),
    }
}

/// `‖g · f_n^X‖_X` for the extremal function at `z_n`.
pub fn multiplied_extremal_norm<T: Real, G: DiskFunction<T>>(
    g: &G,
    z_n: Complex<T>,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
) -> Result<T, Error> {
    let fx = ExtremalFunction::new(z_n, space)?;
    space_norm(&Product(g, &fx), space, q)
}
