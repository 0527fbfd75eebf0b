//! JSON emission with a fixed key order and 12 significant digits.

use opnorm_core::certify::{Candidate, ContinuityProbe};
use opnorm_core::operator::PerT;
use opnorm_core::{
    ApproxEvalMap64, CertificateReport64, Complex64, GapFlag, GapReport64, SpaceSpec64, SupNormResult64,
    WxReport64,
};
use serde_json::{json, Map, Value};

use crate::config::space_kind_name;

pub const SCHEMA: &str = "opnorm-lab/1";

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

/// A rounded real; non-finite values become `null`.
pub fn real(x: f64) -> Value {
    serde_json::Number::from_f64(round12(x)).map_or(Value::Null, Value::Number)
}

pub fn complex(z: Complex64) -> Value {
    json!({ "re": real(z.re), "im": real(z.im) })
}

pub fn space(s: &SpaceSpec64) -> Value {
    json!({ "kind": space_kind_name(s.kind), "p": real(s.p), "alpha": real(s.alpha) })
}

/// Prepends the schema tag and the report name to a body object.
pub fn document(report: &str, body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::String(SCHEMA.into()));
    out.insert("report".into(), Value::String(report.into()));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

/// Pretty-printed JSON text with a trailing newline.
pub fn emit_report(doc: &Value) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values serialize");
    s.push('\n');
    s
}

fn per_t(p: &PerT<f64>) -> Value {
    json!({ "t": real(p.t), "sup": real(p.sup), "maximizer": complex(p.maximizer), "plateau": p.plateau })
}

fn gap_flag(f: &GapFlag<f64>) -> Value {
    match f {
        GapFlag::Plateau { t } => json!({ "kind": "plateau", "t": real(*t) }),
        GapFlag::IntegratedPlateau => json!({ "kind": "integrated_plateau" }),
        GapFlag::RhsNotConverged { error } => json!({ "kind": "rhs_not_converged", "error": real(*error) }),
    }
}

pub fn gap_body(r: &GapReport64) -> Value {
    json!({
        "space": space(&r.space),
        "lhs": real(r.lhs),
        "rhs": real(r.rhs),
        "gap": real(r.gap),
        "per_t": r.per_t.iter().map(per_t).collect::<Vec<_>>(),
        "flags": r.flags.iter().map(gap_flag).collect::<Vec<_>>(),
        "rhs_error": real(r.rhs_error),
        "integrated_maximizer": complex(r.integrated_maximizer),
    })
}

fn candidate(c: &Candidate<f64>, tol: f64) -> Value {
    json!({
        "xi": complex(c.xi),
        "theta": complex(c.theta),
        "i1_residual": real(c.i1_residual),
        "i2_residual": real(c.i2_residual),
        "phase_residual": real(c.phase_residual),
        "passes": c.passes(tol),
    })
}

/// The certificate with its final verdict, which may differ from
/// `r.verdict` when the integrability check did not pass.
pub fn certificate_body(r: &CertificateReport64, verdict: &str, wx_verdict: Option<&str>) -> Value {
    json!({
        "candidates": r.candidates.iter().map(|c| candidate(c, r.tol)).collect::<Vec<_>>(),
        "verdict": verdict,
        "gap_crosscheck": real(r.gap_crosscheck),
        "tolerances": {
            "tol": real(r.tol),
            "band": real(r.band),
            "merge_radius": real(r.merge_radius),
            "equality_gap": real(10.0 * r.tol),
            "strict_gap": real(100.0 * r.tol),
        },
        "certificate_verdict": r.verdict.to_string(),
        "wx_verdict": wx_verdict,
        "whole_circle_ts": r.whole_circle_ts,
        "notes": r.notes,
    })
}

fn probe(p: &ContinuityProbe<f64>) -> Value {
    json!({
        "t0": real(p.t0),
        "norm_at_t0": real(p.norm_at_t0),
        "distances": p.distances.iter().map(|&(d, v)| json!({ "delta": real(d), "distance": real(v) })).collect::<Vec<_>>(),
        "max_distance": real(p.max_distance),
        "decreasing": p.decreasing,
    })
}

pub fn wx_body(r: &WxReport64) -> Value {
    json!({
        "cond1": r.cond1.iter().map(probe).collect::<Vec<_>>(),
        "cond2": r.cond2.iter().map(|c| json!({ "eps": real(c.eps), "sup": real(c.sup) })).collect::<Vec<_>>(),
        "cond3": r.cond3.map(|c| json!({
            "levels": c.levels,
            "coarse": real(c.coarse),
            "fine": real(c.fine),
            "rel_delta": real(c.rel_delta),
        })),
        "verdict": r.verdict.to_string(),
        "statuses": {
            "cond1": r.cond1_status.as_str(),
            "cond2": r.cond2_status.as_str(),
            "cond3": r.cond3_status.as_str(),
        },
        "witness": r.witness,
        "diagnostics": r.diagnostics,
    })
}

pub fn sup_body(s: &SupNormResult64) -> Value {
    json!({
        "value": real(s.value),
        "maximizer": complex(s.maximizer),
        "theta": real(s.theta),
        "residual": real(s.residual),
        "plateau": s.plateau,
    })
}

pub fn sequence_body(m: &ApproxEvalMap64) -> Value {
    json!({
        "xi": complex(m.xi),
        "points": m.points.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
        "values": m.values.iter().map(|&v| real(v)).collect::<Vec<_>>(),
        "converged": m.converged,
    })
}
