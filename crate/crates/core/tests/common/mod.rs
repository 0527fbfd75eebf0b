#![allow(dead_code)]

use std::collections::BTreeMap;

use opnorm_core::{Complex64, QuadConfig64, SymbolFamily64};
use proptest::prelude::*;

pub fn no_bindings() -> BTreeMap<String, f64> {
    BTreeMap::new()
}

pub fn family(text: &str) -> SymbolFamily64 {
    SymbolFamily64::parse(text, &no_bindings()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn with_c(text: &str, c: f64) -> SymbolFamily64 {
    SymbolFamily64::parse(text, &BTreeMap::from([("c".to_string(), c)])).unwrap()
}

pub fn q() -> QuadConfig64 {
    QuadConfig64::default()
}

pub fn complex_lit(z: Complex64) -> String {
    format!("({:.6}+{:.6}i)", z.re, z.im)
}

pub fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn blaschke_zero() -> impl Strategy<Value = Complex64> {
    (0.1..0.6f64, 0.0..std::f64::consts::TAU).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

/// `blaschke([..]; m)` with one or two zeros of modulus at most 0.6.
pub fn blaschke_text() -> impl Strategy<Value = String> {
    (prop::collection::vec(blaschke_zero(), 1..=2), 0u32..=2).prop_map(|(zs, m)| {
        let zs: Vec<String> = zs.into_iter().map(complex_lit).collect();
        format!("blaschke([{}]; {m})", zs.join(", "))
    })
}

/// A fixed symbol `a + b z + d z^2`, optionally times a finite Blaschke product.
pub fn frozen_text() -> impl Strategy<Value = String> {
    (coeff(), coeff(), coeff(), prop::option::of(blaschke_text())).prop_map(|(a, b, d, bl)| {
        let poly = format!("({} + {}*z + {}*z^2)", complex_lit(a), complex_lit(b), complex_lit(d));
        match bl {
            Some(bl) => format!("{poly} * {bl}"),
            None => poly,
        }
    })
}

/// A smooth, boundary-continuous family
/// `(a₀ + a₁t + (b₀ + b₁t) z + d z²) · e^{iwt}`, optionally times a Blaschke product.
pub fn family_text() -> impl Strategy<Value = String> {
    (coeff(), coeff(), coeff(), coeff(), coeff(), -3.0..3.0f64, prop::option::of(blaschke_text())).prop_map(
        |(a0, a1, b0, b1, d, w, bl)| {
            let body = format!(
                "({} + {}*t + ({} + {}*t)*z + {}*z^2) * exp(i*{w:.6}*t)",
                complex_lit(a0),
                complex_lit(a1),
                complex_lit(b0),
                complex_lit(b1),
                complex_lit(d)
            );
            match bl {
                Some(bl) => format!("{body} * {bl}"),
                None => body,
            }
        },
    )
}
