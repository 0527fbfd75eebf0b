use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;

use super::ast::SymbolExpr;
use super::parse::parse_expr;
use crate::error::{Error, EvalError, ParseError};
use crate::function::DiskFunction;
use crate::quad::Rule;
use crate::scalar::{unit, Real};

/// A family `{g_t : t ∈ (0, 1)}` of analytic symbols.
///
/// Immutable after construction; evaluation is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFamily<T> {
    body: SymbolExpr<T>,
    bindings: BTreeMap<String, f64>,
    uses_t: bool,
    continuous: bool,
}

/// Smallest admissible `|den|` on the closed disk for a denominator to count as nonvanishing.
const DENOMINATOR_FLOOR: f64 = 1e-8;

impl<T: Real> SymbolFamily<T> {
    pub fn parse(text: &str, bindings: &BTreeMap<String, f64>) -> Result<Self, ParseError> {
        let body = parse_expr(text, bindings)?;
        let mut fam = Self::from_expr(body);
        fam.bindings = bindings.clone();
        Ok(fam)
    }

    pub fn from_expr(body: SymbolExpr<T>) -> Self {
        let uses_t = body.uses_t();
        let continuous = body.denominators().into_iter().all(|d| denominator_nonvanishing(d));
        SymbolFamily { body, bindings: BTreeMap::new(), uses_t, continuous }
    }

    pub fn body(&self) -> &SymbolExpr<T> {
        &self.body
    }

    pub fn bindings(&self) -> &BTreeMap<String, f64> {
        &self.bindings
    }

    pub fn is_constant_in_t(&self) -> bool {
        !self.uses_t
    }

    /// `g_t(z)`.
    pub fn eval(&self, t: T, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        if self.uses_t && !(t > T::zero() && t < T::one()) {
            return Err(EvalError::ParamOutsideDomain);
        }
        let slack = T::lit(1e-12).max(T::epsilon() * T::lit(4.0));
        if !(z.norm() <= T::one() + slack) {
            return Err(EvalError::OutsideDisk);
        }
        let v = self.body.eval(t, z)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    /// `∫₀¹ g_t(z) dt` by the given rule on `(0, 1)`.
    pub fn integrate_at(&self, z: Complex<T>, rule: &Rule<T>) -> Result<Complex<T>, EvalError> {
        if !self.uses_t {
            return self.eval(T::lit(0.5), z);
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for (t, w) in rule.iter() {
            acc = acc + self.eval(t, z)? * w;
        }
        Ok(acc)
    }

    /// Whether every `g_t` provably lies in the disk algebra: the AST only
    /// uses algebra-preserving nodes and every denominator stays away from
    /// zero on a boundary-plus-interior grid (and a `t` grid).
    pub fn is_boundary_continuous(&self) -> bool {
        self.continuous
    }

    pub fn frozen(&self, t: T) -> Frozen<'_, T> {
        Frozen { family: self, t }
    }

    /// The family `t ↦ factor · g_t`.
    pub fn times(&self, factor: SymbolExpr<T>) -> Self {
        let mut out = Self::from_expr(SymbolExpr::mul(self.body.clone(), factor));
        out.bindings = self.bindings.clone();
        out
    }

    /// The family `t ↦ c · g_t`.
    pub fn scaled(&self, c: Complex<T>) -> Self {
        self.times(SymbolExpr::Const(c))
    }
}

fn denominator_nonvanishing<T: Real>(d: &SymbolExpr<T>) -> bool {
    let floor = T::lit(DENOMINATOR_FLOOR);
    let ts: Vec<T> = if d.uses_t() {
        (1..=9).map(|k| T::lit(k as f64 / 10.0)).collect()
    } else {
        vec![T::lit(0.5)]
    };
    let points: Vec<Complex<T>> = if d.uses_z() {
        let n = 256;
        let mut pts = vec![Complex::new(T::zero(), T::zero())];
        for r in [0.25, 0.5, 0.75, 0.9, 0.99, 1.0] {
            for k in 0..n {
                pts.push(unit(T::TAU() * T::from_count(k) / T::from_count(n)) * T::lit(r));
            }
        }
        pts
    } else {
        vec![Complex::new(T::zero(), T::zero())]
    };
    ts.iter().all(|&t| {
        points.iter().all(|&z| match d.eval(t, z) {
            Ok(v) => v.norm() > floor,
            Err(_) => false,
        })
    })
}

impl<T: Real> fmt::Display for SymbolFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// The symbol `g_t` at a fixed `t`.
#[derive(Debug, Clone, Copy)]
pub struct Frozen<'a, T> {
    pub family: &'a SymbolFamily<T>,
    pub t: T,
}

impl<T: Real> DiskFunction<T> for Frozen<'_, T> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        self.family.eval(self.t, z)
    }

    fn is_boundary_continuous(&self) -> bool {
        self.family.is_boundary_continuous()
    }
}

pub fn parse_symbol<T: Real>(text: &str, bindings: &BTreeMap<String, f64>) -> Result<SymbolFamily<T>, ParseError> {
    SymbolFamily::parse(text, bindings)
}

pub fn eval_symbol<T: Real>(f: &SymbolFamily<T>, t: T, z: Complex<T>) -> Result<Complex<T>, EvalError> {
    f.eval(t, z)
}

pub fn integrate_family_at<T: Real>(f: &SymbolFamily<T>, z: Complex<T>, rule: &Rule<T>) -> Result<Complex<T>, Error> {
    if rule.len() < 2 {
        return Err(Error::InvalidArgument("t-quadrature rule needs at least two nodes".into()));
    }
    Ok(f.integrate_at(z, rule)?)
}

pub fn is_boundary_continuous<T: Real>(f: &SymbolFamily<T>) -> bool {
    f.is_boundary_continuous()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ParseErrorKind;
    use crate::quad::unit_interval_rule;

    fn parse(text: &str) -> SymbolFamily<f64> {
        SymbolFamily::parse(text, &BTreeMap::new()).unwrap()
    }

    fn with_c(text: &str, c: f64) -> SymbolFamily<f64> {
        let b = BTreeMap::from([("c".to_string(), c)]);
        SymbolFamily::parse(text, &b).unwrap()
    }

    fn cx(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn parses_the_example_family() {
        let f = with_c("(c + t + z) * blaschke([0.5, 0.9]; 0)", -0.5);
        let expected = SymbolExpr::mul(
            SymbolExpr::add(SymbolExpr::add(SymbolExpr::real(-0.5), SymbolExpr::ParamT), SymbolExpr::VarZ),
            SymbolExpr::Blaschke(super::super::Blaschke::new(vec![cx(0.5, 0.0), cx(0.9, 0.0)], 0).unwrap()),
        );
        assert_eq!(f.body(), &expected);
        assert_eq!(parse("z").body(), &SymbolExpr::VarZ);
    }

    #[test]
    fn rejects_zero_outside_disk() {
        let e = SymbolFamily::<f64>::parse("blaschke([1.2]; 0)", &BTreeMap::new()).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::ZeroOutsideDisk(_)));
        let e = SymbolFamily::<f64>::parse("blaschke([0]; 0)", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::ZeroAtOrigin);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = SymbolFamily::<f64>::parse("z + q", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnboundName("q".into()));
        assert_eq!(e.position, 4);
        let e = SymbolFamily::<f64>::parse("z^2.5", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent);
        let e = SymbolFamily::<f64>::parse("z^t", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonIntegerExponent);
        let e = SymbolFamily::<f64>::parse("(z + 1", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        let e = SymbolFamily::<f64>::parse("z $ 1", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::TrailingInput);
        let e = SymbolFamily::<f64>::parse("1/0 + z", &BTreeMap::new()).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonFiniteConstant);
        let b = BTreeMap::from([("pi".to_string(), 3.0)]);
        assert!(matches!(
            SymbolFamily::<f64>::parse("z", &b).unwrap_err().kind,
            ParseErrorKind::ReservedName(_)
        ));
    }

    #[test]
    fn literals_and_precedence() {
        assert_eq!(parse("0.3+0.4i").body(), &SymbolExpr::Const(cx(0.3, 0.4)));
        assert_eq!(parse("2*i*pi").body(), &SymbolExpr::Const(cx(0.0, 2.0 * std::f64::consts::PI)));
        // Unary minus binds looser than the power.
        let v = parse("-z^2").eval(0.5, cx(0.5, 0.0)).unwrap();
        assert!((v - cx(-0.25, 0.0)).norm() < 1e-15);
        let v = parse("1 - 2 - 3").eval(0.5, cx(0.0, 0.0)).unwrap();
        assert_eq!(v, cx(-4.0, 0.0));
        let v = parse("t^(-1) * z").eval(0.25, cx(1.0, 0.0)).unwrap();
        assert!((v - cx(4.0, 0.0)).norm() < 1e-15);
        let v = parse("2.5e-1 * z").eval(0.5, cx(1.0, 0.0)).unwrap();
        assert_eq!(v, cx(0.25, 0.0));
    }

    #[test]
    fn eval_examples() {
        let b = parse("blaschke([0.5]; 0)");
        assert!(b.eval(0.3, cx(0.5, 0.0)).unwrap().norm() < 1e-15);
        for theta in [0.0_f64, 1.0, 2.0] {
            assert!((b.eval(0.7, unit(theta)).unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let f = with_c("(c+t+z)", 0.0);
        assert_eq!(f.eval(0.25, cx(1.0, 0.0)).unwrap(), cx(1.25, 0.0));
    }

    #[test]
    fn eval_domain_checks() {
        let f = with_c("(c+t+z)", 0.0);
        assert_eq!(f.eval(0.0, cx(0.5, 0.0)), Err(EvalError::ParamOutsideDomain));
        assert_eq!(f.eval(1.5, cx(0.5, 0.0)), Err(EvalError::ParamOutsideDomain));
        assert_eq!(f.eval(0.5, cx(1.1, 0.0)), Err(EvalError::OutsideDisk));
        // A family without t accepts any t.
        assert!(parse("z").eval(3.0, cx(0.1, 0.0)).is_ok());
        assert_eq!(parse("1/(1-z)").eval(0.5, cx(1.0, 0.0)), Err(EvalError::DivisionByZero));
        assert_eq!(parse("exp(1000*z)").eval(0.5, cx(1.0, 0.0)), Err(EvalError::NonFinite));
    }

    #[test]
    fn integrate_examples() {
        let rule = unit_interval_rule::<f64>(32);
        let v = parse("exp(i*pi*t)").integrate_at(cx(0.2, 0.1), &rule).unwrap();
        assert!((v - cx(0.0, 2.0 / std::f64::consts::PI)).norm() < 1e-10);
        let v = with_c("(c+t+z)", 0.0).integrate_at(cx(1.0, 0.0), &rule).unwrap();
        assert!((v - cx(1.5, 0.0)).norm() < 1e-14);
        let z = cx(0.3, 0.4);
        assert_eq!(parse("z").integrate_at(z, &rule).unwrap(), z);
        let one_node = Rule { nodes: vec![0.5], weights: vec![1.0] };
        assert!(integrate_family_at(&parse("z"), z, &one_node).is_err());
    }

    #[test]
    fn boundary_continuity_examples() {
        assert!(with_c("(c+t+z)*blaschke([0.5,0.9];0)", 0.1).is_boundary_continuous());
        assert!(!parse("1/(1-z)").is_boundary_continuous());
        assert!(parse("exp(z)").is_boundary_continuous());
        assert!(parse("1/(2-z)").is_boundary_continuous());
        assert!(parse("t^(-1) * z").is_boundary_continuous());
        assert!(!parse("z^(-1)").is_boundary_continuous());
        assert!(!parse("1/(t - 0.5)").is_boundary_continuous());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "(c + t + z) * blaschke([0.5, 0.9]; 0)",
            "exp(i*pi*t) - z^3 / (2 + z)",
            "-(z - 0.25i)^(-2) * blaschke([0.3-0.4i, -0.5, 0.1i]; 2)",
            "t^(-1) * z + (0.1+0.2i)",
            "-z^2 - -t",
        ] {
            let f = with_c(text, -0.5);
            let printed = f.to_string();
            let again = with_c(&printed, 123.0);
            assert_eq!(f.body(), again.body(), "{text} -> {printed}");
        }
    }

    #[test]
    fn works_in_single_precision() {
        let f = SymbolFamily::<f32>::parse("(0.5 + t + z) * blaschke([0.5]; 1)", &BTreeMap::new()).unwrap();
        let v = f.eval(0.25, unit(1.0_f32)).unwrap();
        assert!((v.norm() - (0.75_f32 + unit(1.0_f32)).norm()).abs() < 1e-5);
    }
}
