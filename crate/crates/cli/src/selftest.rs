//! A bundled suite of quick invariant checks, run by the `selftest` command.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use opnorm_core::function::Rotated;
use opnorm_core::scalar::unit;
use opnorm_core::spaces::EvalFunctionalData;
use opnorm_core::{
    certify_equality, check_wx, default_t_probes, gap_report, maximizing_sequence, space_norm, sup_norm,
    CertVerdict, Complex64, QuadConfig64, SpaceSpec64, SymbolFamily64, WxVerdict,
};
use serde_json::{json, Value};

pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&QuadConfig64) -> Result<String, String>;

fn family(text: &str, c: f64) -> Result<SymbolFamily64, String> {
    SymbolFamily64::parse(text, &BTreeMap::from([("c".to_string(), c)])).map_err(|e| e.to_string())
}

fn ensure(ok: bool, detail: String) -> Result<String, String> {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn h2() -> SpaceSpec64 {
    SpaceSpec64::hardy(2.0).expect("valid space")
}

fn extremal_unit_norm(q: &QuadConfig64) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for s in [h2(), SpaceSpec64::bergman(2.0, 0.0).expect("valid space")] {
        for k in [2, 6, 10] {
            let z = Complex64::new(1.0 - 0.5_f64.powi(k), 0.0);
            let d = EvalFunctionalData::new(z, &s).map_err(|e| e.to_string())?;
            let n = space_norm(&d.extremal, &s, q).map_err(|e| e.to_string())?;
            worst = worst.max((n - 1.0).abs());
        }
    }
    ensure(worst < 1e-6, format!("max |norm - 1| = {worst:e}"))
}

fn sup_norm_example(q: &QuadConfig64) -> Result<String, String> {
    let f = family("(c+t+z)*blaschke([0.5, 0.9]; 1)", 0.3)?;
    let s = sup_norm(&f.frozen(0.4), q).map_err(|e| e.to_string())?;
    ensure((s.value - 1.7).abs() < 1e-10 && (s.maximizer - Complex64::new(1.0, 0.0)).norm() < 1e-6, format!("{}", s.value))
}

fn rotation_invariance(q: &QuadConfig64) -> Result<String, String> {
    let f = family("(0.3+0.2i) + z - 0.4*z^2", 0.0)?;
    let g = f.frozen(0.5);
    let r = Rotated { lambda: unit(1.234), inner: &g };
    let mut worst: f64 = 0.0;
    for s in [h2(), SpaceSpec64::bergman(3.0, 0.5).expect("valid space")] {
        let a = space_norm(&g, &s, q).map_err(|e| e.to_string())?;
        let b = space_norm(&r, &s, q).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs());
    }
    ensure(worst < 1e-9, format!("max difference {worst:e}"))
}

fn maximizing_sequence_reaches_norm(q: &QuadConfig64) -> Result<String, String> {
    let f = family("(z+2)/3", 0.0)?;
    let m = maximizing_sequence(&f.frozen(0.5), &h2(), 12, q).map_err(|e| e.to_string())?;
    ensure(m.best_value() >= 1.0 - 1e-3, format!("|g(z_K)| = {}", m.best_value()))
}

fn gap_profile(q: &QuadConfig64) -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for c in [-1.5, -0.75, -0.5, 0.0, 0.3] {
        let r = gap_report(&family("(c+t+z)", c)?, &h2(), q).map_err(|e| e.to_string())?;
        let expected = if c > -1.0 && c < 0.0 { (c * c).min((c + 1.0) * (c + 1.0)) } else { 0.0 };
        worst = worst.max((r.gap - expected).abs());
    }
    ensure(worst < 1e-6, format!("max gap error {worst:e}"))
}

fn blaschke_invariance(q: &QuadConfig64) -> Result<String, String> {
    let f = family("(c+t+z)", -0.25)?;
    let fb = family("(c+t+z)*blaschke([0.5, 0.9]; 0)", -0.25)?;
    let a = gap_report(&f, &h2(), q).map_err(|e| e.to_string())?;
    let b = gap_report(&fb, &h2(), q).map_err(|e| e.to_string())?;
    let d = (a.lhs - b.lhs).abs().max((a.rhs - b.rhs).abs());
    ensure(d < 1e-7, format!("max difference {d:e}"))
}

fn phase_invariance(q: &QuadConfig64) -> Result<String, String> {
    let f = family("exp(i*pi*t)*(c + z)", 0.4)?;
    let a = gap_report(&f, &h2(), q).map_err(|e| e.to_string())?;
    let b = gap_report(&f.scaled(unit(2.0)), &h2(), q).map_err(|e| e.to_string())?;
    let d = (a.lhs - b.lhs).abs().max((a.rhs - b.rhs).abs());
    ensure(d < 1e-10, format!("max difference {d:e}"))
}

fn certificates(q: &QuadConfig64) -> Result<String, String> {
    let mut seen = Vec::new();
    for (c, expected) in [(0.3, CertVerdict::EqualityCertified), (-0.5, CertVerdict::StrictInequalityEvidence)] {
        let r = certify_equality(&family("(c+t+z)", c)?, &h2(), q).map_err(|e| e.to_string())?;
        seen.push(format!("c={c}: {}", r.verdict));
        if r.verdict != expected {
            return Err(seen.join(", "));
        }
    }
    Ok(seen.join(", "))
}

fn phase_defect(q: &QuadConfig64) -> Result<String, String> {
    let r = certify_equality(&family("exp(i*pi*t)", 0.0)?, &h2(), q).map_err(|e| e.to_string())?;
    let c = r.candidates.first().ok_or("no candidate")?;
    let ok = r.verdict == CertVerdict::StrictInequalityEvidence
        && (c.i1_residual - (1.0 - 2.0 / PI)).abs() < 1e-8
        && c.i2_residual.abs() < 1e-10;
    ensure(ok, format!("{} r1 = {} r2 = {}", r.verdict, c.i1_residual, c.i2_residual))
}

fn integrability(q: &QuadConfig64) -> Result<String, String> {
    let probes = default_t_probes(q);
    let good = check_wx(&family("(c+t+z)", 0.3)?, &h2(), q, &probes).map_err(|e| e.to_string())?;
    let bad = check_wx(&family("(t^(-1))*z", 0.0)?, &h2(), q, &probes).map_err(|e| e.to_string())?;
    ensure(
        good.verdict == WxVerdict::PassEvidence && bad.verdict == WxVerdict::FailWithWitness,
        format!("{} / {}", good.verdict, bad.verdict),
    )
}

const CHECKS: [(&str, Check); 10] = [
    ("extremal_unit_norm", extremal_unit_norm),
    ("sup_norm_example", sup_norm_example),
    ("rotation_invariance", rotation_invariance),
    ("maximizing_sequence", maximizing_sequence_reaches_norm),
    ("gap_profile", gap_profile),
    ("blaschke_invariance", blaschke_invariance),
    ("phase_invariance", phase_invariance),
    ("certificates", certificates),
    ("phase_defect", phase_defect),
    ("integrability", integrability),
];

pub fn run(q: &QuadConfig64) -> Vec<CheckResult> {
    CHECKS
        .iter()
        .map(|&(name, check)| match check(q) {
            Ok(detail) => CheckResult { name, passed: true, detail },
            Err(detail) => CheckResult { name, passed: false, detail },
        })
        .collect()
}

pub fn body(results: &[CheckResult]) -> Value {
    json!({
        "passed": results.iter().all(|r| r.passed),
        "checks": results.iter().map(|r| json!({ "name": r.name, "passed": r.passed, "detail": r.detail })).collect::<Vec<_>>(),
        "count": results.len(),
    })
}
