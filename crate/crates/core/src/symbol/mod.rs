//! The symbol language: `t`-parameterized analytic symbols on the closed disk.

mod ast;
mod family;
mod parse;

pub use ast::{Blaschke, SymbolExpr};
pub use family::{
    eval_symbol, integrate_family_at, is_boundary_continuous, parse_symbol, Frozen, SymbolFamily,
};
pub use parse::RESERVED;
