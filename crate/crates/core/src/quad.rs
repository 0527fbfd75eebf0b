//! Quadrature rules: Gauss–Legendre, Gauss–Jacobi, a graded open rule on
//! `(0, 1)`, and globally adaptive Gauss–Kronrod (7, 15).
//!
//! Nodes and weights are computed in `f64` and converted to the scalar type.

use crate::scalar::Real;

/// A fixed quadrature rule: `∫ f ≈ Σ wᵢ f(xᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Rule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Affinely maps a rule on `[-1, 1]` onto `[a, b]`.
    pub fn mapped(&self, a: T, b: T) -> Rule<T> {
        let half = (b - a) * T::lit(0.5);
        let mid = (a + b) * T::lit(0.5);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }

    pub fn weight_sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |s, &w| s + w)
    }

    fn from_f64(nodes: &[f64], weights: &[f64]) -> Self {
        Rule {
            nodes: nodes.iter().map(|&x| T::lit(x)).collect(),
            weights: weights.iter().map(|&w| T::lit(w)).collect(),
        }
    }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre<T: Real>(n: usize) -> Rule<T> {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut x = vec![0.0_f64; n];
    let mut w = vec![0.0_f64; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi's initial guess for the i-th largest root.
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d.is_finite() {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    Rule::from_f64(&x, &w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// `n`-point Gauss–Jacobi rule on `[-1, 1]` for the weight `(1 - x)^alpha`,
/// `alpha > -1`. Weights are normalized to the exact moment `2^{α+1}/(α+1)`.
pub fn gauss_jacobi<T: Real>(n: usize, alpha: f64) -> Rule<T> {
    assert!(n >= 2, "Gauss–Jacobi rule needs at least two nodes");
    assert!(alpha > -1.0, "Gauss–Jacobi weight exponent must exceed -1");
    let (alf, bet) = (alpha, 0.0_f64);
    let nf = n as f64;
    let mut x = vec![0.0_f64; n];
    let mut w = vec![0.0_f64; n];
    let mut z = 0.0_f64;
    for i in 0..n {
        z = match i {
            0 => {
                let an = alf / nf;
                let bn = bet / nf;
                let r1 = (1.0 + alf) * (2.78 / (4.0 + nf * nf) + 0.768 * an / nf);
                let r2 = 1.0 + 1.48 * an + 0.96 * bn + 0.452 * an * an + 0.83 * an * bn;
                1.0 - r1 / r2
            }
            1 => {
                let r1 = (4.1 + alf) / ((1.0 + alf) * (1.0 + 0.156 * alf));
                let r2 = 1.0 + 0.06 * (nf - 8.0) * (1.0 + 0.12 * alf) / nf;
                let r3 = 1.0 + 0.012 * bet * (1.0 + 0.25 * alf.abs()) / nf;
                z - (1.0 - z) * r1 * r2 * r3
            }
            2 => {
                let r1 = (1.67 + 0.28 * alf) / (1.0 + 0.37 * alf);
                let r2 = 1.0 + 0.22 * (nf - 8.0) / nf;
                let r3 = 1.0 + 8.0 * bet / ((std::f64::consts::TAU + bet) * nf * nf);
                z - (x[0] - z) * r1 * r2 * r3
            }
            _ if i == n - 2 => {
                let r1 = (1.0 + 0.235 * bet) / (0.766 + 0.119 * bet);
                let r2 = 1.0 / (1.0 + 0.639 * (nf - 4.0) / (1.0 + 0.71 * (nf - 4.0)));
                let r3 = 1.0 / (1.0 + 20.0 * alf / ((7.5 + alf) * nf * nf));
                z + (z - x[n - 4]) * r1 * r2 * r3
            }
            _ if i == n - 1 => {
                let r1 = (1.0 + 0.37 * bet) / (1.67 + 0.28 * bet);
                let r2 = 1.0 / (1.0 + 0.22 * (nf - 8.0) / nf);
                let r3 = 1.0 / (1.0 + 8.0 * alf / ((std::f64::consts::TAU + alf) * nf * nf));
                z + (z - x[n - 3]) * r1 * r2 * r3
            }
            _ => 3.0 * x[i - 1] - 3.0 * x[i - 2] + x[i - 3],
        };
        let mut pp = 1.0;
        let mut p2 = 1.0;
        for _ in 0..200 {
            let (p1, q2, d) = jacobi_with_derivative(n, alf, bet, z);
            pp = d;
            p2 = q2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                let (_, q2, d) = jacobi_with_derivative(n, alf, bet, z);
                pp = d;
                p2 = q2;
                break;
            }
        }
        x[i] = z;
        // Up to an n-dependent constant; fixed by the moment normalization below.
        w[i] = 1.0 / (pp * p2);
    }
    let moment = 2.0_f64.powf(alf + 1.0) / (alf + 1.0);
    let total: f64 = w.iter().sum();
    for wi in &mut w {
        *wi *= moment / total;
    }
    x.reverse();
    w.reverse();
    Rule::from_f64(&x, &w)
}

/// Returns `(P_n, P_{n-1}, P_n')` for the Jacobi polynomials at `z`.
fn jacobi_with_derivative(n: usize, alf: f64, bet: f64, z: f64) -> (f64, f64, f64) {
    let alfbet = alf + bet;
    let mut temp = 2.0 + alfbet;
    let mut p1 = (alf - bet + temp * z) / 2.0;
    let mut p2 = 1.0;
    for j in 2..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        temp = 2.0 * jf + alfbet;
        let a = 2.0 * jf * (jf + alfbet) * (temp - 2.0);
        let b = (temp - 1.0) * (alf * alf - bet * bet + temp * (temp - 2.0) * z);
        let c = 2.0 * (jf - 1.0 + alf) * (jf - 1.0 + bet) * temp;
        p1 = (b * p2 - c * p3) / a;
    }
    let nf = n as f64;
    let pp = (nf * (alf - bet - temp * z) * p1 + 2.0 * (nf + alf) * (nf + bet) * p2)
        / (temp * (1.0 - z * z));
    (p1, p2, pp)
}

/// Gauss–Legendre rule on the open interval `(0, 1)`; weights sum to 1.
pub fn unit_interval_rule<T: Real>(n: usize) -> Rule<T> {
    gauss_legendre::<T>(n).mapped(T::zero(), T::one())
}

/// Open composite rule on `(0, 1)` graded geometrically toward both ends:
/// dyadic panels `[2^{-(k+1)}, 2^{-k}]` for `k = 1..=levels`, an innermost
/// panel `[0, 2^{-(levels+1)}]`, mirrored at 1, each with an
/// `order`-point Gauss–Legendre rule. No node sits on an endpoint.
pub fn graded_rule<T: Real>(levels: usize, order: usize) -> Rule<T> {
    let base = gauss_legendre::<f64>(order);
    let mut panels = Vec::with_capacity(2 * levels + 2);
    for k in 1..=levels {
        panels.push((0.5_f64.powi(k as i32 + 1), 0.5_f64.powi(k as i32)));
    }
    panels.push((0.0, 0.5_f64.powi(levels as i32 + 1)));
    let mirrored: Vec<_> = panels.iter().map(|&(a, b)| (1.0 - b, 1.0 - a)).collect();
    panels.extend(mirrored);
    panels.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut nodes = Vec::with_capacity(panels.len() * order);
    let mut weights = Vec::with_capacity(panels.len() * order);
    for (a, b) in panels {
        let r = base.mapped(a, b);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    Rule::from_f64(&nodes, &weights)
}

// Gauss–Kronrod (7, 15) abscissae and weights on [-1, 1].
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive<T> {
    pub value: T,
    /// Sum over panels of `|K15 − G7|`.
    pub error: T,
    pub converged: bool,
    pub panels: usize,
}

/// Settings for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSettings<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub initial_panels: usize,
    pub max_panels: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod_panel<T: Real, E>(
    f: &mut impl FnMut(T) -> Result<T, E>,
    a: T,
    b: T,
) -> Result<Panel<T>, E> {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid)?;
    let mut kron = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let s = f(mid - dx)? + f(mid + dx)?;
        kron = kron + s * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::lit(WG[j / 2]);
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    Ok(Panel { a, b, value, error })
}

/// Globally adaptive Gauss–Kronrod (7, 15) integration of `f` over `[a, b]`.
///
/// The panel with the largest error estimate is bisected until the total
/// error satisfies `max(abs_tol, rel_tol·|value|)`, `max_panels` is hit, or
/// the worst panel is narrower than `ε²·(b − a)`.
/// Subdivision order is deterministic.
pub fn integrate_adaptive<T: Real, E>(
    mut f: impl FnMut(T) -> Result<T, E>,
    a: T,
    b: T,
    settings: AdaptiveSettings<T>,
) -> Result<Adaptive<T>, E> {
    let n0 = settings.initial_panels.max(1);
    let min_width = (b - a) * T::epsilon() * T::epsilon();
    let width = (b - a) / T::from_count(n0);
    let mut panels = Vec::with_capacity(settings.max_panels.max(n0));
    for k in 0..n0 {
        let lo = a + width * T::from_count(k);
        let hi = if k + 1 == n0 { b } else { a + width * T::from_count(k + 1) };
        panels.push(kronrod_panel(&mut f, lo, hi)?);
    }
    loop {
        let (value, error) = panels
            .iter()
            .fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error));
        let target = settings.abs_tol.max(settings.rel_tol * value.abs());
        if error <= target || panels.len() >= settings.max_panels {
            return Ok(Adaptive {
                value,
                error,
                converged: error <= target,
                panels: panels.len(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels[worst];
        let mid = (p.a + p.b) * T::lit(0.5);
        if !(mid > p.a && mid < p.b) || p.b - p.a < min_width {
            // Panel too narrow to split usefully; integrable endpoint
            // singularities never get here, divergent ones do.
            return Ok(Adaptive {
                value,
                error,
                converged: false,
                panels: panels.len(),
            });
        }
        panels[worst] = kronrod_panel(&mut f, p.a, mid)?;
        panels.push(kronrod_panel(&mut f, mid, p.b)?);
    }
}
