//! Multiplication operators on Hardy and weighted Bergman spaces of the unit
//! disk, and numerical checks of when the essential-norm-type quantity of an
//! integrated family `∫ M_{g_t} dt` equals the integral of the parts.
//!
//! Everything is generic over the real scalar ([`scalar::Real`], implemented
//! for `f32` and `f64`); the aliases below fix it to `f64`.
//!
//! ```
//! use std::collections::BTreeMap;
//! use opnorm_core::{gap_report, QuadConfig64, SpaceSpec64, SymbolFamily64};
//!
//! let c = BTreeMap::from([("c".to_string(), -0.5)]);
//! let f = SymbolFamily64::parse("(c+t+z)", &c).unwrap();
//! let r = gap_report(&f, &SpaceSpec64::hardy(2.0).unwrap(), &QuadConfig64::default()).unwrap();
//! assert!((r.gap - 0.25).abs() < 1e-8);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod function;
pub mod operator;
pub mod quad;
pub mod scalar;
pub mod spaces;
pub mod symbol;

pub use certify::{
    argmax_set, certify_equality, check_wx, default_t_probes, i1_i2_residuals, ArgmaxSet, CertVerdict,
    CertificateReport, ConditionStatus, WxReport, WxVerdict,
};
pub use error::{Error, EvalError, ParseError, ParseErrorKind};
pub use function::DiskFunction;
pub use operator::{
    gap_report, integrated_symbol, maximizing_sequence, mult_operator_norm, ApproxEvalMap, GapFlag, GapReport,
};
pub use scalar::Real;
pub use spaces::{
    bergman_norm, eval_functional_norm, extremal_function, hardy_norm, multiplied_extremal_norm, space_norm,
    sup_norm, QuadConfig, SpaceKind, SpaceSpec, SupNormResult,
};
pub use symbol::{parse_symbol, SymbolExpr, SymbolFamily};

pub use num_complex::Complex;

pub type Complex64 = Complex<f64>;
pub type SymbolFamily64 = SymbolFamily<f64>;
pub type SymbolExpr64 = SymbolExpr<f64>;
pub type SpaceSpec64 = SpaceSpec<f64>;
pub type QuadConfig64 = QuadConfig<f64>;
pub type GapReport64 = GapReport<f64>;
pub type CertificateReport64 = CertificateReport<f64>;
pub type WxReport64 = WxReport<f64>;
pub type ApproxEvalMap64 = ApproxEvalMap<f64>;
pub type SupNormResult64 = SupNormResult<f64>;
