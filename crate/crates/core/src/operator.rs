//! Multiplication operators `M_g f = g·f` and the two sides of the
//! integrated-operator identity `EN(∫ M_{g_t} dt) ≤ ∫ EN(M_{g_t}) dt`.

use num_complex::Complex;

use crate::error::{Error, EvalError};
use crate::function::DiskFunction;
use crate::quad::{integrate_adaptive, AdaptiveSettings, Rule};
use crate::scalar::Real;
use crate::spaces::{extremal_function, sup_norm, ExtremalFunction, QuadConfig, SpaceSpec, SupNormResult};
use crate::symbol::SymbolFamily;

/// `‖M_g‖` on `H^p` / `A^p_α`, which equals both `‖g‖_∞` and `EN(M_g)`.
pub fn mult_operator_norm<T: Real, G: DiskFunction<T> + ?Sized>(
    g: &G,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
) -> Result<T, Error> {
    mult_operator_norm_detailed(g, space, q).map(|s| s.value)
}

/// As [`mult_operator_norm`], keeping the boundary maximizer.
pub fn mult_operator_norm_detailed<T: Real, G: DiskFunction<T> + ?Sized>(
    g: &G,
    space: &SpaceSpec<T>,
    q: &QuadConfig<T>,
) -> Result<SupNormResult<T>, Error> {
    space.validate()?;
    sup_norm(g, q)
}

/// Points `z_k = (1 − 2^{−k}) ξ` approaching the boundary maximizer `ξ` of `|g|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxEvalMap<T> {
    pub xi: Complex<T>,
    pub points: Vec<Complex<T>>,
    /// `|g(z_k)|`.
    pub values: Vec<T>,
    /// `‖g‖_∞`.
    pub sup: T,
    pub space: SpaceSpec<T>,
    /// `|g(z_K)|` came within `10·tol` of `‖g‖_∞`.
    pub converged: bool,
}

impl<T: Real> ApproxEvalMap<T> {
    /// The unit-norm extremal functions `f_k` peaking at each `z_k`.
    pub fn extremals(&self) -> Result<Vec<ExtremalFunction<T>>, Error> {
        self.points.iter().map(|&z| extremal_function(z, &self.space)).collect()
    }

    pub fn best_value(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }
}

pub fn maximizing_sequence<T: Real, G: DiskFunction<T> + ?Sized>(
    g: &G,
    space: &SpaceSpec<T>,
    k: usize,
    q: &QuadConfig<T>,
) -> Result<ApproxEvalMap<T>, Error> {
    if k == 0 {
        return Err(Error::InvalidArgument("maximizing sequence needs K >= 1".into()));
    }
    let s = mult_operator_norm_detailed(g, space, q)?;
    let mut points = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for j in 1..=k {
        let r = T::one() - T::lit(2.0).powi(-(j as i32));
        let z = s.maximizer * r;
        values.push(g.eval(z)?.norm());
        points.push(z);
    }
    let last = *values.last().expect("k >= 1");
    Ok(ApproxEvalMap {
        xi: s.maximizer,
        points,
        values,
        sup: s.value,
        space: *space,
        converged: last >= s.value - T::lit(10.0) * q.tol,
    })
}

/// The symbol `z ↦ ∫₀¹ g_t(z) dt` of `∫ M_{g_t} dt`, computed with a fixed `t` rule.
#[derive(Debug, Clone)]
pub struct IntegratedSymbol<'a, T> {
    family: &'a SymbolFamily<T>,
    rule: Rule<T>,
}

impl<'a, T: Real> IntegratedSymbol<'a, T> {
    pub fn new(family: &'a SymbolFamily<T>, rule: Rule<T>) -> Result<Self, Error> {
        if rule.len() < 2 {
            return Err(Error::InvalidArgument("t-quadrature rule needs at least two nodes".into()));
        }
        Ok(IntegratedSymbol { family, rule })
    }

    pub fn rule(&self) -> &Rule<T> {
        &self.rule
    }
}

impl<T: Real> DiskFunction<T> for IntegratedSymbol<'_, T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        self.family.integrate_at(z, &self.rule)
    }

    fn is_boundary_continuous(&self) -> bool {
        self.family.is_boundary_continuous()
    }
}

/// The integrated symbol using `q.t_rule()`.
pub fn integrated_symbol<'a, T: Real>(f: &'a SymbolFamily<T>, q: &QuadConfig<T>) -> Result<IntegratedSymbol<'a, T>, Error> {
    q.validate()?;
    IntegratedSymbol::new(f, q.t_rule())
}

/// `‖g_t‖_∞` and its maximizer at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerT<T> {
    pub t: T,
    pub sup: T,
    pub maximizer: Complex<T>,
    pub plateau: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GapFlag<T> {
    /// `|g_t|` has a flat arc of maxima at this `t`.
    Plateau { t: T },
    /// The integrated symbol has a flat arc of maxima.
    IntegratedPlateau,
    /// The adaptive `t` integral of `‖g_t‖_∞` missed its tolerance.
    RhsNotConverged { error: T },
}

impl<T: Real> GapFlag<T> {
    /// Whether the flag invalidates the numbers rather than annotating them.
    pub fn is_failure(&self) -> bool {
        matches!(self, GapFlag::RhsNotConverged { .. })
    }
}

/// Both sides of `‖∫ g_t dt‖_∞ ≤ ∫ ‖g_t‖_∞ dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapReport<T> {
    pub space: SpaceSpec<T>,
    /// `EN(∫ M_{g_t} dt) = ‖∫ g_t dt‖_∞`.
    pub lhs: T,
    /// `∫₀¹ ‖g_t‖_∞ dt`.
    pub rhs: T,
    pub gap: T,
    /// Error estimate of the `t` integral behind `rhs`.
    pub rhs_error: T,
    pub per_t: Vec<PerT<T>>,
    pub integrated_maximizer: Complex<T>,
    pub flags: Vec<GapFlag<T>>,
}

impl<T: Real> GapReport<T> {
    pub fn has_failure(&self) -> bool {
        self.flags.iter().any(GapFlag::is_failure)
    }
}

fn frozen_sup<T: Real>(f: &SymbolFamily<T>, t: T, q: &QuadConfig<T>) -> Result<SupNormResult<T>, Error> {
    sup_norm(&f.frozen(t), q)
}

/// Computes both sides of the identity for a boundary-continuous family.
///
/// `lhs` integrates the symbol with `q.t_rule()`. `rhs` integrates
/// `t ↦ ‖g_t‖_∞` adaptively, since that integrand has kinks wherever the
/// maximizer jumps. `per_t` samples the integrand on the rule nodes.
pub fn gap_report<T: Real>(f: &SymbolFamily<T>, space: &SpaceSpec<T>, q: &QuadConfig<T>) -> Result<GapReport<T>, Error> {
    space.require_reflexive()?;
    q.validate()?;
    if !f.is_boundary_continuous() {
        return Err(Error::InvalidArgument("gap report needs a boundary-continuous family".into()));
    }
    let mut flags = Vec::new();
    let g = integrated_symbol(f, q)?;
    let lhs = sup_norm(&g, q)?;
    if lhs.plateau {
        flags.push(GapFlag::IntegratedPlateau);
    }

    let mut per_t = Vec::with_capacity(q.t_nodes);
    for &t in &g.rule().nodes {
        let s = frozen_sup(f, t, q)?;
        if s.plateau {
            flags.push(GapFlag::Plateau { t });
        }
        per_t.push(PerT { t, sup: s.value, maximizer: s.maximizer, plateau: s.plateau });
    }

    let (rhs, rhs_error) = if f.is_constant_in_t() {
        (per_t[0].sup, T::zero())
    } else {
        let settings = AdaptiveSettings {
            rel_tol: (q.tol * T::lit(1e-2)).max(T::inner_rel_tol()),
            abs_tol: q.tol * T::lit(1e-3),
            initial_panels: 4,
            max_panels: 2000,
        };
        let res = integrate_adaptive(|t| frozen_sup(f, t, q).map(|s| s.value), T::zero(), T::one(), settings)?;
        if !res.converged {
            flags.push(GapFlag::RhsNotConverged { error: res.error });
        }
        (res.value, res.error)
    };

    Ok(GapReport {
        space: *space,
        lhs: lhs.value,
        rhs,
        gap: rhs - lhs.value,
        rhs_error,
        per_t,
        integrated_maximizer: lhs.maximizer,
        flags,
    })
}
