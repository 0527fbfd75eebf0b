use std::fmt;

use crate::error::Error;
use crate::quad::{unit_interval_rule, Rule};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Hardy,
    Bergman,
}

/// `H^p` or `A^p_α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec<T> {
    pub kind: SpaceKind,
    pub p: T,
    /// Weight exponent; only meaningful for Bergman spaces.
    pub alpha: T,
}

impl<T: Real> SpaceSpec<T> {
    pub fn hardy(p: T) -> Result<Self, Error> {
        let s = SpaceSpec { kind: SpaceKind::Hardy, p, alpha: T::zero() };
        s.validate()?;
        Ok(s)
    }

    pub fn bergman(p: T, alpha: T) -> Result<Self, Error> {
        let s = SpaceSpec { kind: SpaceKind::Bergman, p, alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.p.is_finite() && self.p > T::zero()) {
            return Err(Error::InvalidSpace(format!("p must be a positive real, got {}", self.p)));
        }
        if self.kind == SpaceKind::Bergman && !(self.alpha.is_finite() && self.alpha > -T::one()) {
            return Err(Error::InvalidSpace(format!("alpha must exceed -1, got {}", self.alpha)));
        }
        Ok(())
    }

    /// Certification needs a reflexive space: `p > 1`.
    pub fn require_reflexive(&self) -> Result<(), Error> {
        self.validate()?;
        if self.p <= T::one() {
            return Err(Error::InvalidSpace(format!("p must exceed 1 for certification, got {}", self.p)));
        }
        Ok(())
    }

    /// Exponent `e` in `‖δ_z‖ = (1 − |z|²)^{−e}`: `1/p` (Hardy) or `(2+α)/p` (Bergman).
    pub fn eval_exponent(&self) -> T {
        match self.kind {
            SpaceKind::Hardy => T::one() / self.p,
            SpaceKind::Bergman => (T::lit(2.0) + self.alpha) / self.p,
        }
    }
}

impl<T: Real> fmt::Display for SpaceSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::Hardy => write!(f, "H^{}", self.p),
            SpaceKind::Bergman => write!(f, "A^{}_{}", self.p, self.alpha),
        }
    }
}

/// Discretization and tolerance settings shared by all numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadConfig<T> {
    /// Boundary sampling nodes for sup norms; also sets the argmax merge radius.
    pub n_theta: usize,
    /// Gauss nodes per radial panel in Bergman norms.
    pub n_radial: usize,
    /// Radii of the circle means checked for monotonicity before extrapolation.
    pub hardy_radii: Vec<T>,
    /// Gauss–Legendre nodes of the `t` rule on `(0, 1)`.
    pub t_nodes: usize,
    /// Uniform `t` probes added to the rule nodes when checking "almost every t".
    pub t_probes: usize,
    pub sup_refine_iters: usize,
    pub tol: T,
    /// Dyadic levels per end of the graded rule used for the integrability check.
    pub wx_levels: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        QuadConfig {
            n_theta: 1024,
            n_radial: 16,
            hardy_radii: [0.5, 0.75, 0.9, 0.95, 0.99].iter().map(|&r| T::lit(r)).collect(),
            t_nodes: 64,
            t_probes: 16,
            sup_refine_iters: 100,
            tol: T::lit(1e-8),
            wx_levels: 16,
        }
    }
}

impl<T: Real> QuadConfig<T> {
    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_theta < 16 {
            return bad(format!("n_theta must be at least 16, got {}", self.n_theta));
        }
        if self.n_radial < 8 {
            return bad(format!("n_radial must be at least 8, got {}", self.n_radial));
        }
        if self.hardy_radii.is_empty() {
            return bad("hardy_radii must be nonempty".into());
        }
        if !self.hardy_radii.iter().all(|&r| r > T::zero() && r < T::one()) {
            return bad("hardy_radii must lie in (0, 1)".into());
        }
        if !self.hardy_radii.windows(2).all(|w| w[0] < w[1]) {
            return bad("hardy_radii must be strictly increasing".into());
        }
        if self.t_nodes < 2 {
            return bad(format!("t_nodes must be at least 2, got {}", self.t_nodes));
        }
        if self.sup_refine_iters == 0 {
            return bad("sup_refine_iters must be positive".into());
        }
        if !(self.tol.is_finite() && self.tol > T::zero()) {
            return bad(format!("tol must be a positive real, got {}", self.tol));
        }
        if self.wx_levels < 2 {
            return bad(format!("wx_levels must be at least 2, got {}", self.wx_levels));
        }
        Ok(())
    }

    /// The Gauss–Legendre `t` rule on `(0, 1)`.
    pub fn t_rule(&self) -> Rule<T> {
        unit_interval_rule(self.t_nodes)
    }

    /// Rule nodes plus `(k + ½)/t_probes`, ascending.
    pub fn t_grid(&self) -> Vec<T> {
        let mut ts = self.t_rule().nodes;
        let n = self.t_probes;
        ts.extend((0..n).map(|k| (T::from_count(k) + T::lit(0.5)) / T::from_count(n)));
        ts.sort_by(|a, b| a.partial_cmp(b).expect("finite t nodes"));
        ts.dedup();
        ts
    }
}
