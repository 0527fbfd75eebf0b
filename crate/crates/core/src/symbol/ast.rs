use std::fmt;

use num_complex::Complex;

use crate::error::{Error, EvalError};
use crate::scalar::Real;

/// Finite Blaschke product `z^m ∏ (ā/|a|)(a − z)/(1 − ā z)`.
///
/// Every zero satisfies `0 < |a| < 1`; zeros at the origin go into `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Blaschke<T> {
    zeros: Vec<Complex<T>>,
    m: u32,
}

impl<T: Real> Blaschke<T> {
    pub fn new(zeros: Vec<Complex<T>>, m: u32) -> Result<Self, Error> {
        for a in &zeros {
            let r = a.norm();
            if !r.is_finite() || r >= T::one() {
                return Err(Error::InvalidArgument(format!("Blaschke zero {a} outside the open unit disk")));
            }
            if r == T::zero() {
                return Err(Error::InvalidArgument("Blaschke zero at the origin; use the exponent m".into()));
            }
        }
        Ok(Blaschke { zeros, m })
    }

    pub fn zeros(&self) -> &[Complex<T>] {
        &self.zeros
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        let mut acc = if self.m == 0 {
            Complex::new(T::one(), T::zero())
        } else {
            z.powu(self.m)
        };
        for &a in &self.zeros {
            let ac = a.conj();
            let den = Complex::new(T::one(), T::zero()) - ac * z;
            if den.norm_sqr() == T::zero() {
                return Err(EvalError::DivisionByZero);
            }
            acc = acc * (ac / a.norm()) * ((a - z) / den);
        }
        Ok(acc)
    }
}

/// Abstract syntax tree of an analytic symbol in `z` and the parameter `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolExpr<T> {
    Const(Complex<T>),
    VarZ,
    ParamT,
    Add(Box<SymbolExpr<T>>, Box<SymbolExpr<T>>),
    Sub(Box<SymbolExpr<T>>, Box<SymbolExpr<T>>),
    Mul(Box<SymbolExpr<T>>, Box<SymbolExpr<T>>),
    Div(Box<SymbolExpr<T>>, Box<SymbolExpr<T>>),
    Neg(Box<SymbolExpr<T>>),
    IntPow(Box<SymbolExpr<T>>, i32),
    Exp(Box<SymbolExpr<T>>),
    Blaschke(Blaschke<T>),
}

#[allow(clippy::should_implement_trait)]
impl<T: Real> SymbolExpr<T> {
    pub fn real(x: T) -> Self {
        SymbolExpr::Const(Complex::new(x, T::zero()))
    }

    pub fn add(l: Self, r: Self) -> Self {
        SymbolExpr::Add(Box::new(l), Box::new(r))
    }

    pub fn sub(l: Self, r: Self) -> Self {
        SymbolExpr::Sub(Box::new(l), Box::new(r))
    }

    pub fn mul(l: Self, r: Self) -> Self {
        SymbolExpr::Mul(Box::new(l), Box::new(r))
    }

    pub fn div(l: Self, r: Self) -> Self {
        SymbolExpr::Div(Box::new(l), Box::new(r))
    }

    pub fn neg(e: Self) -> Self {
        SymbolExpr::Neg(Box::new(e))
    }

    pub fn pow(e: Self, n: i32) -> Self {
        SymbolExpr::IntPow(Box::new(e), n)
    }

    pub fn exp(e: Self) -> Self {
        SymbolExpr::Exp(Box::new(e))
    }

    /// Evaluates the expression at `(t, z)` without domain checks.
    pub fn eval(&self, t: T, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        use SymbolExpr::*;
        Ok(match self {
            Const(c) => *c,
            VarZ => z,
            ParamT => Complex::new(t, T::zero()),
            Add(l, r) => l.eval(t, z)? + r.eval(t, z)?,
            Sub(l, r) => l.eval(t, z)? - r.eval(t, z)?,
            Mul(l, r) => l.eval(t, z)? * r.eval(t, z)?,
            Div(l, r) => {
                let den = r.eval(t, z)?;
                if den.norm_sqr() == T::zero() {
                    return Err(EvalError::DivisionByZero);
                }
                l.eval(t, z)? / den
            }
            Neg(e) => -e.eval(t, z)?,
            IntPow(e, n) => {
                let b = e.eval(t, z)?;
                if *n < 0 && b.norm_sqr() == T::zero() {
                    return Err(EvalError::DivisionByZero);
                }
                b.powi(*n)
            }
            Exp(e) => e.eval(t, z)?.exp(),
            Blaschke(b) => b.eval(z)?,
        })
    }

    pub fn uses_t(&self) -> bool {
        self.any(&|e| matches!(e, SymbolExpr::ParamT))
    }

    pub fn uses_z(&self) -> bool {
        self.any(&|e| matches!(e, SymbolExpr::VarZ | SymbolExpr::Blaschke(_)))
    }

    fn any(&self, pred: &dyn Fn(&SymbolExpr<T>) -> bool) -> bool {
        use SymbolExpr::*;
        if pred(self) {
            return true;
        }
        match self {
            Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) => l.any(pred) || r.any(pred),
            Neg(e) | IntPow(e, _) | Exp(e) => e.any(pred),
            Const(_) | VarZ | ParamT | Blaschke(_) => false,
        }
    }

    /// Subexpressions that appear as denominators: divisors and bases of
    /// negative integer powers.
    pub fn denominators(&self) -> Vec<&SymbolExpr<T>> {
        let mut out = Vec::new();
        self.collect_denominators(&mut out);
        out
    }

    fn collect_denominators<'a>(&'a self, out: &mut Vec<&'a SymbolExpr<T>>) {
        use SymbolExpr::*;
        match self {
            Div(l, r) => {
                out.push(r);
                l.collect_denominators(out);
                r.collect_denominators(out);
            }
            IntPow(e, n) => {
                if *n < 0 {
                    out.push(e);
                }
                e.collect_denominators(out);
            }
            Add(l, r) | Sub(l, r) | Mul(l, r) => {
                l.collect_denominators(out);
                r.collect_denominators(out);
            }
            Neg(e) | Exp(e) => e.collect_denominators(out),
            Const(_) | VarZ | ParamT | Blaschke(_) => {}
        }
    }
}

fn write_number<T: Real>(f: &mut fmt::Formatter<'_>, x: T) -> fmt::Result {
    if x.is_sign_negative() {
        write!(f, "(-{})", -x)
    } else {
        write!(f, "{x}")
    }
}

fn write_complex<T: Real>(f: &mut fmt::Formatter<'_>, c: Complex<T>) -> fmt::Result {
    if c.im == T::zero() {
        write_number(f, c.re)
    } else if c.re == T::zero() {
        if c.im < T::zero() {
            write!(f, "(-{}i)", -c.im)
        } else {
            write!(f, "{}i", c.im)
        }
    } else {
        let sign = if c.im < T::zero() { '-' } else { '+' };
        write!(f, "(")?;
        if c.re < T::zero() {
            write!(f, "-{}", -c.re)?;
        } else {
            write!(f, "{}", c.re)?;
        }
        write!(f, "{sign}{}i)", c.im.abs())
    }
}

/// Prints in the symbol grammar; parsing the output reproduces the AST.
impl<T: Real> fmt::Display for SymbolExpr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SymbolExpr::*;
        match self {
            Const(c) => write_complex(f, *c),
            VarZ => write!(f, "z"),
            ParamT => write!(f, "t"),
            Add(l, r) => write!(f, "({l} + {r})"),
            Sub(l, r) => write!(f, "({l} - {r})"),
            Mul(l, r) => write!(f, "({l} * {r})"),
            Div(l, r) => write!(f, "({l} / {r})"),
            Neg(e) => write!(f, "(-{e})"),
            IntPow(e, n) => {
                if *n < 0 {
                    write!(f, "{e}^({n})")
                } else {
                    write!(f, "{e}^{n}")
                }
            }
            Exp(e) => write!(f, "exp({e})"),
            Blaschke(b) => {
                write!(f, "blaschke([")?;
                for (k, a) in b.zeros.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write_complex(f, *a)?;
                }
                write!(f, "]; {})", b.m)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn blaschke_vanishes_at_its_zero() {
        let b = Blaschke::new(vec![c(0.5, 0.0)], 0).unwrap();
        assert!(b.eval(c(0.5, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn blaschke_is_unimodular_on_the_circle() {
        let b = Blaschke::new(vec![c(0.5, 0.0)], 0).unwrap();
        for theta in [0.0_f64, 1.0, 2.0] {
            let v = b.eval(c(theta.cos(), theta.sin())).unwrap();
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn blaschke_rejects_bad_zeros() {
        assert!(Blaschke::new(vec![c(1.2, 0.0)], 0).is_err());
        assert!(Blaschke::new(vec![c(0.0, 1.0)], 0).is_err());
        assert!(Blaschke::new(vec![c(0.0, 0.0)], 1).is_err());
    }

    #[test]
    fn blaschke_prefactor_power() {
        let b = Blaschke::<f64>::new(vec![], 3).unwrap();
        let z = c(0.3, 0.4);
        assert!((b.eval(z).unwrap() - z * z * z).norm() < 1e-15);
    }

    #[test]
    fn division_by_zero_is_reported() {
        let e = SymbolExpr::div(SymbolExpr::real(1.0), SymbolExpr::sub(SymbolExpr::real(1.0), SymbolExpr::VarZ));
        assert_eq!(e.eval(0.5, c(1.0, 0.0)), Err(EvalError::DivisionByZero));
        let p = SymbolExpr::pow(SymbolExpr::VarZ, -2);
        assert_eq!(p.eval(0.5, c(0.0, 0.0)), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn display_forms() {
        let e = SymbolExpr::mul(
            SymbolExpr::add(SymbolExpr::add(SymbolExpr::real(-0.5), SymbolExpr::ParamT), SymbolExpr::VarZ),
            SymbolExpr::Blaschke(Blaschke::new(vec![c(0.5, 0.0), c(0.0, -0.25)], 1).unwrap()),
        );
        assert_eq!(e.to_string(), "((((-0.5) + t) + z) * blaschke([0.5, (-0.25i)]; 1))");
        assert_eq!(SymbolExpr::pow(SymbolExpr::<f64>::VarZ, -1).to_string(), "z^(-1)");
        assert_eq!(SymbolExpr::<f64>::Const(c(-1.0, 2.0)).to_string(), "(-1+2i)");
    }

    #[test]
    fn denominators_found() {
        let e = SymbolExpr::add(
            SymbolExpr::div(SymbolExpr::<f64>::VarZ, SymbolExpr::ParamT),
            SymbolExpr::pow(SymbolExpr::VarZ, -3),
        );
        assert_eq!(e.denominators().len(), 2);
        assert!(e.uses_t() && e.uses_z());
    }
}
