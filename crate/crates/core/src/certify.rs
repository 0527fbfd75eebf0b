//! Numerical evidence for the integrability conditions of a symbol family
//! and for the equality case of the integrated-operator identity.

use std::fmt;

use num_complex::Complex;

use crate::error::Error;
use crate::function::Difference;
use crate::operator::{gap_report, GapReport};
use crate::quad::{graded_rule, Rule};
use crate::scalar::{circular_distance, unit, Real};
use crate::spaces::{boundary_scan, space_norm_rel, sup_norm, QuadConfig, SpaceSpec};
use crate::symbol::SymbolFamily;

/// Step sizes for the continuity check, largest first.
const CONT_DELTAS: [f64; 3] = [1e-2, 1e-3, 1e-4];
/// Relative accuracy of the distances; only their trend is judged.
const CONT_REL_TOL: f64 = 1e-9;
/// Compact intervals `[ε, 1 − ε]` for the local boundedness check.
const COMPACT_EPS: [f64; 2] = [0.1, 0.01];
const COMPACT_SAMPLES: usize = 33;
/// Gauss order of each panel of the graded rule.
const GRADED_ORDER: usize = 8;
const INTEGRAL_PASS: f64 = 1e-3;
const INTEGRAL_FAIL: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl ConditionStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionStatus::Pass => "Pass",
            ConditionStatus::Fail => "Fail",
            ConditionStatus::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WxVerdict {
    PassEvidence,
    FailWithWitness,
    Inconclusive,
}

impl fmt::Display for WxVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WxVerdict::PassEvidence => "PassEvidence",
            WxVerdict::FailWithWitness => "FailWithWitness",
            WxVerdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Continuity evidence at one probe: `‖g_{t₀±δ} − g_{t₀}‖_X` for shrinking `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityProbe<T> {
    pub t0: T,
    pub norm_at_t0: T,
    /// `(δ, max over admissible signs of the distance)`.
    pub distances: Vec<(T, T)>,
    pub max_distance: T,
    pub decreasing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactSup<T> {
    pub eps: T,
    pub sup: T,
}

/// `∫₀¹ ‖g_t‖_∞ dt` on graded rules with `levels` and `2·levels` levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralEstimate<T> {
    pub levels: usize,
    pub coarse: T,
    pub fine: T,
    /// `(fine − coarse) / coarse`.
    pub rel_delta: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WxReport<T> {
    pub cond1: Vec<ContinuityProbe<T>>,
    pub cond1_status: ConditionStatus,
    pub cond2: Vec<CompactSup<T>>,
    pub cond2_status: ConditionStatus,
    pub cond3: Option<IntegralEstimate<T>>,
    pub cond3_status: ConditionStatus,
    pub verdict: WxVerdict,
    /// Offending `t₀` or divergence diagnostic when the verdict is a failure.
    pub witness: Option<String>,
    pub diagnostics: Vec<String>,
}

/// The default probe grid `(k + ½)/n` with `n = q.t_probes`.
pub fn default_t_probes<T: Real>(q: &QuadConfig<T>) -> Vec<T> {
    let n = q.t_probes.max(8);
    (0..n).map(|k| (T::from_count(k) + T::lit(0.5)) / T::from_count(n)).collect()
}

fn probe_continuity<T: Real>(
    f: &SymbolFamily<T>,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
    t0: T,
) -> Result<ContinuityProbe<T>, Error> {
    let base = f.frozen(t0);
    let rel = T::lit(CONT_REL_TOL).max(T::inner_rel_tol());
    let norm_at_t0 = space_norm_rel(&base, space, q, rel)?;
    let mut distances = Vec::with_capacity(CONT_DELTAS.len());
    for d in CONT_DELTAS {
        let d = T::lit(d);
        let mut worst: Option<T> = None;
        for t in [t0 + d, t0 - d] {
            if t > T::zero() && t < T::one() {
                let v = space_norm_rel(&Difference(f.frozen(t), base), space, q, rel)?;
                worst = Some(worst.map_or(v, |w| w.max(v)));
            }
        }
        let w = worst.ok_or_else(|| Error::InvalidArgument(format!("no admissible step around t0 = {t0}")))?;
        distances.push((d, w));
    }
    let first = distances[0].1;
    let last = distances[distances.len() - 1].1;
    let floor = T::lit(1e-9) * (T::one() + norm_at_t0);
    let decreasing = last <= (T::lit(0.5) * first).max(floor);
    let max_distance = distances.iter().map(|d| d.1).fold(T::zero(), T::max);
    Ok(ContinuityProbe { t0, norm_at_t0, distances, max_distance, decreasing })
}

fn integral_on<T: Real>(f: &SymbolFamily<T>, rule: &Rule<T>, q: &QuadConfig<T>) -> Result<T, Error> {
    let mut acc = T::zero();
    for (t, w) in rule.iter() {
        acc = acc + w * sup_norm(&f.frozen(t), q)?.value;
    }
    Ok(acc)
}

/// Samples the three integrability conditions of a multiplication family:
/// continuity of `t ↦ g_t` in `X`, boundedness of `‖g_t‖_∞` on compacts,
/// and finiteness of `∫₀¹ ‖g_t‖_∞ dt`.
///
/// The report is evidence: trends and doubled-rule deltas, not proofs.
pub fn check_wx<T: Real>(
    f: &SymbolFamily<T>,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
    t_probe: &[T],
) -> Result<WxReport<T>, Error> {
    space.validate()?;
    q.validate()?;
    if t_probe.len() < 8 {
        return Err(Error::InvalidArgument(format!("need at least 8 t probes, got {}", t_probe.len())));
    }
    if let Some(t) = t_probe.iter().find(|&&t| !(t > T::zero() && t < T::one())) {
        return Err(Error::InvalidArgument(format!("t probe {t} is outside (0, 1)")));
    }
    let mut diagnostics = Vec::new();
    let mut witness = None;

    let mut cond1 = Vec::with_capacity(t_probe.len());
    let mut cond1_status = ConditionStatus::Pass;
    for &t0 in t_probe {
        match probe_continuity(f, space, q, t0) {
            Ok(p) => {
                if !p.decreasing && cond1_status != ConditionStatus::Fail {
                    cond1_status = ConditionStatus::Fail;
                    witness.get_or_insert_with(|| format!("cond1: distance does not shrink at t0 = {t0}"));
                }
                cond1.push(p);
            }
            Err(e) => {
                if cond1_status == ConditionStatus::Pass {
                    cond1_status = ConditionStatus::Inconclusive;
                }
                diagnostics.push(format!("cond1 at t0 = {t0}: {e}"));
            }
        }
    }

    let mut cond2 = Vec::with_capacity(COMPACT_EPS.len());
    let mut cond2_status = ConditionStatus::Pass;
    'compact: for eps in COMPACT_EPS {
        let eps = T::lit(eps);
        let step = (T::one() - eps - eps) / T::from_count(COMPACT_SAMPLES - 1);
        let mut sup = T::zero();
        for k in 0..COMPACT_SAMPLES {
            let t = eps + step * T::from_count(k);
            match sup_norm(&f.frozen(t), q) {
                Ok(s) => sup = sup.max(s.value),
                Err(e) => {
                    cond2_status = ConditionStatus::Inconclusive;
                    diagnostics.push(format!("cond2 at t = {t}: {e}"));
                    continue 'compact;
                }
            }
        }
        if !sup.is_finite() {
            cond2_status = ConditionStatus::Fail;
            witness.get_or_insert_with(|| format!("cond2: unbounded on [{eps}, {}]", T::one() - eps));
        }
        cond2.push(CompactSup { eps, sup });
    }

    let levels = q.wx_levels;
    let cond3_result = integral_on(f, &graded_rule(levels, GRADED_ORDER), q)
        .and_then(|coarse| Ok((coarse, integral_on(f, &graded_rule(2 * levels, GRADED_ORDER), q)?)));
    let (cond3, cond3_status) = match cond3_result {
        Ok((coarse, fine)) => {
            let scale = coarse.abs().max(T::min_positive_value());
            let rel_delta = (fine - coarse) / scale;
            let status = if !fine.is_finite() || rel_delta.abs() > T::lit(INTEGRAL_FAIL) {
                witness.get_or_insert_with(|| {
                    format!("cond3: doubling the graded rule moves the integral from {coarse} to {fine}")
                });
                ConditionStatus::Fail
            } else if rel_delta.abs() <= T::lit(INTEGRAL_PASS) {
                ConditionStatus::Pass
            } else {
                diagnostics.push(format!("cond3: doubled-rule relative change {rel_delta} is inconclusive"));
                ConditionStatus::Inconclusive
            };
            (Some(IntegralEstimate { levels, coarse, fine, rel_delta }), status)
        }
        Err(e) => {
            diagnostics.push(format!("cond3: {e}"));
            (None, ConditionStatus::Inconclusive)
        }
    };

    let statuses = [cond1_status, cond2_status, cond3_status];
    let verdict = if statuses.contains(&ConditionStatus::Fail) {
        WxVerdict::FailWithWitness
    } else if statuses.iter().all(|s| *s == ConditionStatus::Pass) {
        WxVerdict::PassEvidence
    } else {
        WxVerdict::Inconclusive
    };
    if verdict != WxVerdict::FailWithWitness {
        witness = None;
    }
    Ok(WxReport { cond1, cond1_status, cond2, cond2_status, cond3, cond3_status, verdict, witness, diagnostics })
}

/// A boundary point where `|g_t|` is maximal, or an arc of such points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgmaxPoint<T> {
    pub theta: T,
    pub xi: Complex<T>,
    pub value: T,
    /// Half the angular width of a plateau arc; zero for isolated maxima.
    pub half_width: T,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArgmaxSet<T> {
    /// Every boundary point is a maximizer (constant modulus or near-zero symbol).
    Whole,
    Points(Vec<ArgmaxPoint<T>>),
}

impl<T: Real> ArgmaxSet<T> {
    /// Whether `theta` lies within `radius` of the set.
    pub fn contains(&self, theta: T, radius: T) -> bool {
        match self {
            ArgmaxSet::Whole => true,
            ArgmaxSet::Points(ps) => ps.iter().any(|p| circular_distance(p.theta, theta) <= p.half_width + radius),
        }
    }
}

fn merge_radius<T: Real>(q: &QuadConfig<T>) -> T {
    T::TAU() / T::from_count(q.n_theta)
}

fn argmax_with_sup<T: Real>(f: &SymbolFamily<T>, t: T, q: &QuadConfig<T>, band: T) -> Result<(ArgmaxSet<T>, T), Error> {
    let g = f.frozen(t);
    let scan = boundary_scan(&g, q)?;
    let sup = scan.best().value.max(scan.grid_max);
    if scan.full_plateau || sup < q.tol {
        return Ok((ArgmaxSet::Whole, sup));
    }
    let radius = merge_radius(q);
    let mut points: Vec<ArgmaxPoint<T>> = Vec::new();
    for m in scan.maxima.iter().filter(|m| m.value >= sup - band) {
        let half_width = if m.plateau { m.residual * T::lit(0.5) } else { T::zero() };
        let p = ArgmaxPoint { theta: m.theta, xi: unit(m.theta), value: m.value, half_width };
        match points.iter_mut().find(|o| circular_distance(o.theta, p.theta) <= radius) {
            Some(o) if p.value > o.value => *o = p,
            Some(_) => {}
            None => points.push(p),
        }
    }
    Ok((ArgmaxSet::Points(points), sup))
}

/// Boundary maximizers of `|g_t|` within `band` of `‖g_t‖_∞`, merged within one grid cell.
pub fn argmax_set<T: Real>(f: &SymbolFamily<T>, t: T, q: &QuadConfig<T>, band: T) -> Result<ArgmaxSet<T>, Error> {
    q.validate()?;
    if !f.is_boundary_continuous() {
        return Err(Error::InvalidArgument("argmax set needs a boundary-continuous family".into()));
    }
    if !(band > T::zero()) {
        return Err(Error::InvalidArgument(format!("band must be positive, got {band}")));
    }
    argmax_with_sup(f, t, q, band).map(|(s, _)| s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertVerdict {
    EqualityCertified,
    StrictInequalityEvidence,
    Inconclusive,
}

impl fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertVerdict::EqualityCertified => "EqualityCertified",
            CertVerdict::StrictInequalityEvidence => "StrictInequalityEvidence",
            CertVerdict::Inconclusive => "Inconclusive",
        })
    }
}

/// A candidate pair `(ξ, θ)` with its residuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate<T> {
    pub xi: Complex<T>,
    pub theta: Complex<T>,
    /// `max_t (‖g_t‖_∞ − |g_t(ξ)|)` over the `t` grid.
    pub i2_residual: T,
    /// `∫|g_t(ξ)| dt − |∫ g_t(ξ) dt|` with the `t` rule.
    pub i1_residual: T,
    /// `max_t |θ·g_t(ξ) − |g_t(ξ)||` over the `t` grid.
    pub phase_residual: T,
}

impl<T: Real> Candidate<T> {
    pub fn passes(&self, tol: T) -> bool {
        self.i1_residual < tol && self.i2_residual < tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport<T> {
    pub candidates: Vec<Candidate<T>>,
    pub verdict: CertVerdict,
    pub gap_crosscheck: T,
    pub tol: T,
    pub band: T,
    pub merge_radius: T,
    /// Grid values of `t` whose argmax set was the whole circle.
    pub whole_circle_ts: usize,
    pub notes: Vec<String>,
    pub gap: Option<GapReport<T>>,
}

struct ResidualGrid<T> {
    ts: Vec<T>,
    sups: Vec<T>,
    rule: Rule<T>,
}

fn residuals_on<T: Real>(f: &SymbolFamily<T>, xi: Complex<T>, grid: &ResidualGrid<T>, tol: T) -> Result<Candidate<T>, Error> {
    let mut i2 = T::neg_infinity();
    let mut values = Vec::with_capacity(grid.ts.len());
    for (&t, &sup) in grid.ts.iter().zip(&grid.sups) {
        let v = f.eval(t, xi)?;
        i2 = i2.max(sup - v.norm());
        values.push(v);
    }
    let theta = values
        .iter()
        .find(|v| v.norm() > tol)
        .map(|v| v.conj() / v.norm())
        .unwrap_or_else(|| Complex::new(T::one(), T::zero()));
    let phase_residual = values.iter().map(|v| (theta * v - v.norm()).norm()).fold(T::zero(), T::max);
    let mut abs_sum = T::zero();
    let mut sum = Complex::new(T::zero(), T::zero());
    for (t, w) in grid.rule.iter() {
        let v = f.eval(t, xi)?;
        abs_sum = abs_sum + w * v.norm();
        sum = sum + v * w;
    }
    Ok(Candidate { xi, theta, i2_residual: i2, i1_residual: abs_sum - sum.norm(), phase_residual })
}

fn unit_point<T: Real>(xi: Complex<T>) -> Result<Complex<T>, Error> {
    let r = xi.norm();
    if !((r - T::one()).abs() <= T::lit(1e-12).max(T::epsilon() * T::lit(8.0))) {
        return Err(Error::InvalidArgument(format!("xi = {xi} is not on the unit circle")));
    }
    Ok(xi / r)
}

/// `(r1, r2)`: the triangle-inequality defect `∫|g_t(ξ)| − |∫g_t(ξ)|` and
/// `max_t (‖g_t‖_∞ − |g_t(ξ)|)` over the `t` grid.
pub fn i1_i2_residuals<T: Real>(
    f: &SymbolFamily<T>,
    space: &SpaceSpec<T>,
    xi: Complex<T>,
    q: &QuadConfig<T>,
) -> Result<(T, T), Error> {
    space.validate()?;
    q.validate()?;
    let xi = unit_point(xi)?;
    let ts = q.t_grid();
    let sups = ts.iter().map(|&t| sup_norm(&f.frozen(t), q).map(|s| s.value)).collect::<Result<Vec<_>, _>>()?;
    let c = residuals_on(f, xi, &ResidualGrid { ts, sups, rule: q.t_rule() }, q.tol)?;
    Ok((c.i1_residual, c.i2_residual))
}

fn intersect<T: Real>(acc: Option<Vec<ArgmaxPoint<T>>>, next: &ArgmaxSet<T>, radius: T) -> Option<Vec<ArgmaxPoint<T>>> {
    let ArgmaxSet::Points(ps) = next else { return acc };
    let Some(acc) = acc else { return Some(ps.clone()) };
    let out = acc
        .into_iter()
        .filter_map(|a| {
            let hit = ps
                .iter()
                .find(|p| circular_distance(a.theta, p.theta) <= a.half_width + p.half_width + radius)?;
            Some(if hit.half_width < a.half_width { *hit } else { a })
        })
        .collect();
    Some(out)
}

/// Searches for `ξ, θ ∈ ∂𝔻` with `θ·g_t(ξ) = ‖g_t‖_∞` for every `t` on the grid.
///
/// Candidates are the common boundary maximizers over the `t` grid. The
/// verdict couples the residuals with the gap from [`gap_report`].
pub fn certify_equality<T: Real>(
    f: &SymbolFamily<T>,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
) -> Result<CertificateReport<T>, Error> {
    space.require_reflexive()?;
    q.validate()?;
    let tol = q.tol;
    let band = T::lit(10.0) * tol;
    let radius = merge_radius(q);
    let mut report = CertificateReport {
        candidates: Vec::new(),
        verdict: CertVerdict::Inconclusive,
        gap_crosscheck: T::nan(),
        tol,
        band,
        merge_radius: radius,
        whole_circle_ts: 0,
        notes: Vec::new(),
        gap: None,
    };
    if !f.is_boundary_continuous() {
        report.notes.push("family is not boundary-continuous; the certified path does not apply".into());
        return Ok(report);
    }

    let ts = q.t_grid();
    let mut sups = Vec::with_capacity(ts.len());
    let mut common: Option<Vec<ArgmaxPoint<T>>> = None;
    for &t in &ts {
        let (set, sup) = argmax_with_sup(f, t, q, band)?;
        if set == ArgmaxSet::Whole {
            report.whole_circle_ts += 1;
        }
        common = intersect(common, &set, radius);
        sups.push(sup);
    }
    let xis: Vec<Complex<T>> = match common {
        Some(ps) => ps.iter().map(|p| p.xi).collect(),
        None => {
            report.notes.push("every g_t has constant boundary modulus; candidates taken from the integrated symbol".into());
            let g = crate::operator::integrated_symbol(f, q)?;
            let scan = boundary_scan(&g, q)?;
            if scan.full_plateau {
                vec![Complex::new(T::one(), T::zero())]
            } else {
                let top = scan.best().value.max(scan.grid_max);
                scan.maxima.iter().filter(|m| m.value >= top - band).map(|m| unit(m.theta)).collect()
            }
        }
    };
    let grid = ResidualGrid { ts, sups, rule: q.t_rule() };
    for xi in xis {
        report.candidates.push(residuals_on(f, xi, &grid, tol)?);
    }

    let gap = gap_report(f, space, q)?;
    report.gap_crosscheck = gap.gap;
    let gap_ok = !gap.has_failure();
    if !gap_ok {
        report.notes.push("t integral of the sup norms did not converge".into());
    }
    report.gap = Some(gap);
    let any_pass = report.candidates.iter().any(|c| c.passes(tol));
    report.verdict = if !gap_ok {
        CertVerdict::Inconclusive
    } else if any_pass && report.gap_crosscheck.abs() < T::lit(10.0) * tol {
        CertVerdict::EqualityCertified
    } else if !any_pass && report.gap_crosscheck > T::lit(100.0) * tol {
        CertVerdict::StrictInequalityEvidence
    } else {
        if report.candidates.is_empty() {
            report.notes.push("no common maximizer on the grid but the gap is small; grid may be too coarse".into());
        }
        CertVerdict::Inconclusive
    };
    Ok(report)
}
