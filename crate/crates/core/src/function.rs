//! Functions on the closed unit disk and simple combinators over them.

use num_complex::Complex;

use crate::error::EvalError;
use crate::scalar::Real;

/// A function evaluable on the closed unit disk.
pub trait DiskFunction<T: Real>: Sync {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError>;

    /// Whether the function is known to extend continuously to the closed
    /// disk (a member of the disk algebra).
    fn is_boundary_continuous(&self) -> bool {
        false
    }
}

impl<T: Real, F: DiskFunction<T> + ?Sized> DiskFunction<T> for &F {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        (**self).eval(z)
    }

    fn is_boundary_continuous(&self) -> bool {
        (**self).is_boundary_continuous()
    }
}

impl<T: Real, F: DiskFunction<T> + ?Sized> DiskFunction<T> for Box<F> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        (**self).eval(z)
    }

    fn is_boundary_continuous(&self) -> bool {
        (**self).is_boundary_continuous()
    }
}

/// Wraps a closure, with the caller vouching for boundary continuity.
pub struct FnDisk<F> {
    f: F,
    continuous: bool,
}

impl<F> FnDisk<F> {
    pub fn new(f: F, continuous: bool) -> Self {
        FnDisk { f, continuous }
    }
}

impl<T: Real, F> DiskFunction<T> for FnDisk<F>
where
    F: Fn(Complex<T>) -> Complex<T> + Sync,
{
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        let v = (self.f)(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite)
        }
    }

    fn is_boundary_continuous(&self) -> bool {
        self.continuous
    }
}

/// Pointwise product `g · f`.
pub struct Product<A, B>(pub A, pub B);

impl<T: Real, A: DiskFunction<T>, B: DiskFunction<T>> DiskFunction<T> for Product<A, B> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        Ok(self.0.eval(z)? * self.1.eval(z)?)
    }

    fn is_boundary_continuous(&self) -> bool {
        self.0.is_boundary_continuous() && self.1.is_boundary_continuous()
    }
}

/// Pointwise difference `a − b`.
pub struct Difference<A, B>(pub A, pub B);

impl<T: Real, A: DiskFunction<T>, B: DiskFunction<T>> DiskFunction<T> for Difference<A, B> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        Ok(self.0.eval(z)? - self.1.eval(z)?)
    }

    fn is_boundary_continuous(&self) -> bool {
        self.0.is_boundary_continuous() && self.1.is_boundary_continuous()
    }
}

/// `c · f` for a complex constant `c`.
pub struct Scaled<T, A> {
    pub factor: Complex<T>,
    pub inner: A,
}

impl<T: Real, A: DiskFunction<T>> DiskFunction<T> for Scaled<T, A> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        Ok(self.factor * self.inner.eval(z)?)
    }

    fn is_boundary_continuous(&self) -> bool {
        self.inner.is_boundary_continuous()
    }
}

/// `z ↦ f(λ z)` for a unimodular `λ`.
pub struct Rotated<T, A> {
    pub lambda: Complex<T>,
    pub inner: A,
}

impl<T: Real, A: DiskFunction<T>> DiskFunction<T> for Rotated<T, A> {
    fn eval(&self, z: Complex<T>) -> Result<Complex<T>, EvalError> {
        let w = self.lambda * z;
        // Keep rotated boundary points on the closed disk despite rounding.
        let r = w.norm();
        let w = if r > T::one() { w / r } else { w };
        self.inner.eval(w)
    }

    fn is_boundary_continuous(&self) -> bool {
        self.inner.is_boundary_continuous()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinators_compose() {
        let z = Complex::new(0.3, -0.2);
        let f = FnDisk::new(|w: Complex<f64>| w * w, true);
        let g = FnDisk::new(|w: Complex<f64>| w + 1.0, true);
        assert_eq!(Product(&f, &g).eval(z).unwrap(), z * z * (z + 1.0));
        assert_eq!(Difference(&f, &g).eval(z).unwrap(), z * z - (z + 1.0));
        let s = Scaled { factor: Complex::new(0.0, 2.0), inner: &f };
        assert_eq!(s.eval(z).unwrap(), Complex::new(0.0, 2.0) * z * z);
        let r = Rotated { lambda: Complex::new(0.0, 1.0), inner: &g };
        assert!((r.eval(z).unwrap() - (Complex::new(0.0, 1.0) * z + 1.0)).norm() < 1e-15);
        assert!(Product(&f, &g).is_boundary_continuous());
    }

    #[test]
    fn non_finite_closure_values_are_errors() {
        let f = FnDisk::new(|_w: Complex<f64>| Complex::new(f64::NAN, 0.0), false);
        assert_eq!(f.eval(Complex::new(0.0, 0.0)), Err(EvalError::NonFinite));
    }
}
