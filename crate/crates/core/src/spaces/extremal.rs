use num_complex::Complex;

use super::config::SpaceSpec;
use crate::error::{Error, EvalError};
use crate::function::DiskFunction;
use crate::scalar::Real;

/// `‖δ_z‖ = (1 − |z|²)^{−1/p}` on `H^p` and `(1 − |z|²)^{−(2+α)/p}` on `A^p_α`.
pub fn eval_functional_norm<T: Real>(z: Complex<T>, space: &SpaceSpec<T>) -> Result<T, Error> {
    space.validate()?;
    let r2 = z.norm_sqr();
    if !(r2 < T::one()) {
        return Err(Error::NotInDisk(z.to_string()));
    }
    Ok((T::one() - r2).powf(-space.eval_exponent()))
}

/// The unit-norm function attaining `‖δ_{z_n}‖`:
/// `w ↦ (1 − |z_n|²)^e / (1 − z̄_n w)^{2e}` with `e` the evaluation exponent.
///
/// `Re(1 − z̄_n w) > 0` on the closed disk, so the principal power is smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalFunction<T> {
    pub z_n: Complex<T>,
    pub space: SpaceSpec<T>,
    scale: T,
    power: T,
}

impl<T: Real> ExtremalFunction<T> {
    pub fn new(z_n: Complex<T>, space: &SpaceSpec<T>) -> Result<Self, Error> {
        space.validate()?;
        let r2 = z_n.norm_sqr();
        if !(r2 < T::one()) {
            return Err(Error::NotInDisk(z_n.to_string()));
        }
        let e = space.eval_exponent();
        Ok(ExtremalFunction { z_n, space: *space, scale: (T::one() - r2).powf(e), power: T::lit(2.0) * e })
    }
}

impl<T: Real> DiskFunction<T> for ExtremalFunction<T> {
    fn eval(&self, w: Complex<T>) -> Result<Complex<T>, EvalError> {
        let base = Complex::new(T::one(), T::zero()) - self.z_n.conj() * w;
        if base.norm_sqr() == T::zero() {
            return Err(EvalError::DivisionByZero);
        }
        let v = (base.ln() * (-self.power)).exp() * self.scale;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn is_boundary_continuous(&self) -> bool {
        true
    }
}

pub fn extremal_function<T: Real>(z_n: Complex<T>, space: &SpaceSpec<T>) -> Result<ExtremalFunction<T>, Error> {
    ExtremalFunction::new(z_n, space)
}

/// An evaluation functional together with its closed-form norm and extremal function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalFunctionalData<T> {
    pub z_n: Complex<T>,
    pub space: SpaceSpec<T>,
    pub norm_value: T,
    pub extremal: ExtremalFunction<T>,
}

impl<T: Real> EvalFunctionalData<T> {
    pub fn new(z_n: Complex<T>, space: &SpaceSpec<T>) -> Result<Self, Error> {
        Ok(EvalFunctionalData {
            z_n,
            space: *space,
            norm_value: eval_functional_norm(z_n, space)?,
            extremal: ExtremalFunction::new(z_n, space)?,
        })
    }
}
