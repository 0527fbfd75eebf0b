//! Hardy and weighted Bergman spaces: norms, sup norms, evaluation
//! functionals and their extremal functions.

mod config;
mod extremal;
mod norms;
mod supnorm;

pub use config::{QuadConfig, SpaceKind, SpaceSpec};
pub use extremal::{eval_functional_norm, extremal_function, EvalFunctionalData, ExtremalFunction};
pub use norms::{
    bergman_norm, circle_mean, hardy_norm, hardy_norm_detailed, multiplied_extremal_norm, space_norm,
    HardyNorm,
};
pub(crate) use norms::space_norm_rel;
pub use supnorm::{boundary_scan, sup_norm, BoundaryMax, BoundaryScan, SupNormResult};
