use num_complex::Complex;

use super::config::QuadConfig;
use crate::error::Error;
use crate::function::DiskFunction;
use crate::scalar::{unit, Real};

/// Local maxima within this fraction of the grid range below the grid maximum are refined.
const REFINE_BAND: f64 = 0.1;
/// Relative spread under which the boundary modulus counts as constant.
const PLATEAU_REL: f64 = 1e-10;

/// A refined local maximum of `|g|` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryMax<T> {
    pub theta: T,
    pub value: T,
    /// Width of the final bracket around `theta`, or of the arc for plateaus.
    pub residual: T,
    /// The maximum is attained on an arc rather than at an isolated point.
    pub plateau: bool,
}

/// Sampled and refined boundary modulus of a symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryScan<T> {
    pub grid_max: T,
    pub grid_min: T,
    /// Candidate maxima ordered by angle.
    pub maxima: Vec<BoundaryMax<T>>,
    /// `|g|` is constant on the circle up to rounding.
    pub full_plateau: bool,
}

impl<T: Real> BoundaryScan<T> {
    /// The largest refined maximum; the first one wins ties.
    pub fn best(&self) -> &BoundaryMax<T> {
        self.maxima
            .iter()
            .fold(None::<&BoundaryMax<T>>, |best, m| match best {
                Some(b) if b.value >= m.value => Some(b),
                _ => Some(m),
            })
            .expect("scan has at least one maximum")
    }
}

/// `‖g‖_∞` on the closed disk, attained on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNormResult<T> {
    pub value: T,
    pub maximizer: Complex<T>,
    pub theta: T,
    pub residual: T,
    /// The maximizer was picked from an arc (or the whole circle) of maxima.
    pub plateau: bool,
}

fn golden_max<T: Real, E>(
    mut f: impl FnMut(T) -> Result<T, E>,
    mut a: T,
    mut b: T,
    tol: T,
    iters: usize,
) -> Result<(T, T, T), E> {
    let invphi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut c = b - invphi * (b - a);
    let mut d = a + invphi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..iters {
        if b - a <= tol {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d)?;
        }
    }
    let (x, v) = if fc >= fd { (c, fc) } else { (d, fd) };
    Ok((polish(&mut f, x)?.unwrap_or(x), v, b - a))
}

/// Parabolic vertex through `x`, `x ± h` and through `x`, `x ± 2h`,
/// Richardson-combined to cancel the `O(h²)` bias, with `h ≈ ε^{1/5}`.
///
/// Golden section only pins the maximizer to `O(√ε)` and its last
/// comparisons are decided by rounding, so two evaluations of the same
/// modulus that differ in the last bits can end at different points. The
/// vertex depends smoothly on the samples instead.
fn polish<T: Real, E>(f: &mut impl FnMut(T) -> Result<T, E>, x: T) -> Result<Option<T>, E> {
    let h = T::epsilon().powf(T::lit(0.2));
    let mid = f(x)?;
    let mut vertex = |h: T| -> Result<Option<T>, E> {
        let (lo, hi) = (f(x - h)?, f(x + h)?);
        let curvature = hi - mid - mid + lo;
        Ok((curvature < T::zero()).then(|| x - h * (hi - lo) / (curvature + curvature)))
    };
    let (Some(v1), Some(v2)) = (vertex(h)?, vertex(h + h)?) else {
        return Ok(None);
    };
    let v = (T::lit(4.0) * v1 - v2) / T::lit(3.0);
    Ok(((v - x).abs() <= h * T::lit(0.25)).then_some(v))
}

fn wrap<T: Real>(theta: T) -> T {
    let t = theta % T::TAU();
    if t < T::zero() {
        t + T::TAU()
    } else {
        t
    }
}

/// Samples `|g|` at `q.n_theta` equispaced boundary points and refines every
/// local maximum close to the top by golden-section search.
pub fn boundary_scan<T: Real, G: DiskFunction<T> + ?Sized>(g: &G, q: &QuadConfig<T>) -> Result<BoundaryScan<T>, Error> {
    q.validate()?;
    let n = q.n_theta;
    let h = T::TAU() / T::from_count(n);
    let modulus = |theta: T| g.eval(unit(theta)).map(|v| v.norm());
    let values = (0..n).map(|i| modulus(h * T::from_count(i))).collect::<Result<Vec<T>, _>>()?;
    let grid_max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let grid_min = values.iter().copied().fold(T::infinity(), T::min);

    let ptol = (T::lit(PLATEAU_REL) * grid_max).max(T::min_positive_value());
    if grid_max - grid_min <= ptol {
        return Ok(BoundaryScan {
            grid_max,
            grid_min,
            maxima: vec![BoundaryMax { theta: T::zero(), value: grid_max, residual: T::TAU(), plateau: true }],
            full_plateau: true,
        });
    }

    // Arcs of grid points at the top level.
    let top = |i: usize| values[i] >= grid_max - ptol;
    let mut in_arc = vec![false; n];
    let mut maxima = Vec::new();
    let start = (0..n).find(|&i| !top(i)).expect("not a full plateau");
    let mut i = 0;
    while i < n {
        let k = (start + i) % n;
        if !top(k) {
            i += 1;
            continue;
        }
        let mut len = 0;
        while i + len < n && top((start + i + len) % n) {
            len += 1;
        }
        if len >= 3 {
            let first = (start + i) % n;
            for j in 0..len {
                in_arc[(first + j) % n] = true;
            }
            let value = (0..len).map(|j| values[(first + j) % n]).fold(T::neg_infinity(), T::max);
            let mid = h * (T::from_count(first) + T::from_count(len - 1) * T::lit(0.5));
            maxima.push(BoundaryMax { theta: wrap(mid), value, residual: h * T::from_count(len - 1), plateau: true });
        }
        i += len;
    }

    let band = grid_max - T::lit(REFINE_BAND) * (grid_max - grid_min);
    for k in 0..n {
        let prev = values[(k + n - 1) % n];
        let next = values[(k + 1) % n];
        if in_arc[k] || values[k] < band || !(values[k] >= prev && values[k] > next) {
            continue;
        }
        let t0 = h * T::from_count(k);
        let (x, v, width) = golden_max(modulus, t0 - h, t0 + h, q.tol, q.sup_refine_iters)?;
        let (theta, value) = if v >= values[k] { (wrap(x), v) } else { (t0, values[k]) };
        maxima.push(BoundaryMax { theta, value, residual: width, plateau: false });
    }
    maxima.sort_by(|a, b| a.theta.partial_cmp(&b.theta).expect("finite angles"));
    Ok(BoundaryScan { grid_max, grid_min, maxima, full_plateau: false })
}

/// `‖g‖_∞` over the closed disk, located on the circle by the maximum modulus principle.
pub fn sup_norm<T: Real, G: DiskFunction<T> + ?Sized>(g: &G, q: &QuadConfig<T>) -> Result<SupNormResult<T>, Error> {
    if !g.is_boundary_continuous() {
        return Err(Error::InvalidArgument("sup norm needs a symbol continuous up to the boundary".into()));
    }
    let scan = boundary_scan(g, q)?;
    let best = *scan.best();
    let value = best.value.max(scan.grid_max);
    Ok(SupNormResult {
        value,
        maximizer: unit(best.theta),
        theta: best.theta,
        residual: best.residual,
        plateau: best.plateau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::FnDisk;
    use crate::symbol::parse_symbol;
    use std::collections::BTreeMap;

    fn q() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn affine_symbol_peaks_at_one() {
        let (c, t0) = (0.3, 0.4);
        let g = FnDisk::new(move |z: Complex<f64>| z + (c + t0), true);
        let s = sup_norm(&g, &q()).unwrap();
        assert!((s.value - (c + t0 + 1.0)).abs() < 1e-10);
        assert!((s.maximizer - Complex::new(1.0, 0.0)).norm() < 1e-4);
        assert!(s.residual <= 1e-8 && !s.plateau);
    }

    #[test]
    fn off_grid_peak_is_refined() {
        let w = unit(0.123_456_f64);
        let g = FnDisk::new(move |z: Complex<f64>| z * w.conj() + 1.0, true);
        let s = sup_norm(&g, &q()).unwrap();
        assert!((s.value - 2.0).abs() < 1e-12);
        assert!((s.theta - 0.123_456).abs() < 1e-6);
    }

    #[test]
    fn inner_functions_are_flat() {
        let z3 = FnDisk::new(|z: Complex<f64>| z.powu(3), true);
        let s = sup_norm(&z3, &q()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12 && s.plateau);
        assert_eq!(s.maximizer, Complex::new(1.0, 0.0));
        let b = parse_symbol::<f64>("blaschke([0.5, -0.3i]; 1)", &BTreeMap::new()).unwrap();
        let s = sup_norm(&b.frozen(0.5), &q()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12 && s.plateau);
    }

    #[test]
    fn flat_arc_is_reported_as_plateau() {
        let g = FnDisk::new(|z: Complex<f64>| Complex::new(z.re.max(0.5), 0.0), true);
        let scan = boundary_scan(&g, &q()).unwrap();
        assert!(!scan.full_plateau);
        let best = scan.best();
        assert!((best.value - 1.0).abs() < 1e-12);
        let g = FnDisk::new(|z: Complex<f64>| Complex::new((z.re + 1.0).min(1.5), 0.0), true);
        let best = *boundary_scan(&g, &q()).unwrap().best();
        assert!(best.plateau && (best.value - 1.5).abs() < 1e-12, "{best:?}");
        assert!(best.theta.min(std::f64::consts::TAU - best.theta) < 1e-2);
    }

    #[test]
    fn two_peaks_are_both_found() {
        let g = FnDisk::new(|z: Complex<f64>| z * z + 1.0, true);
        let scan = boundary_scan(&g, &q()).unwrap();
        let thetas: Vec<f64> = scan.maxima.iter().map(|m| m.theta).collect();
        assert_eq!(thetas.len(), 2, "{thetas:?}");
        use crate::scalar::circular_distance;
        let pi = std::f64::consts::PI;
        assert!(thetas.iter().any(|&t| circular_distance(t, 0.0) < 1e-6));
        assert!(thetas.iter().any(|&t| circular_distance(t, pi) < 1e-6));
    }

    #[test]
    fn requires_boundary_continuity() {
        let g = FnDisk::new(|z: Complex<f64>| z, false);
        assert!(sup_norm(&g, &q()).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let g = FnDisk::new(|z: Complex<f32>| z + 0.5, true);
        let qq = QuadConfig::<f32> { tol: 1e-5, ..Default::default() };
        let s = sup_norm(&g, &qq).unwrap();
        assert!((s.value - 1.5).abs() < 1e-5);
    }
}
