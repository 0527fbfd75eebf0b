//! Parameter sweeps over one binding of a symbol family.

use std::io::Write;

use opnorm_core::{
    certify_equality, check_wx, default_t_probes, CertVerdict, CertificateReport64, QuadConfig64, SpaceSpec64,
    WxReport64, WxVerdict,
};

use crate::config::{ConfigError, RunConfig};
use crate::report::round12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// A certificate verdict, or `"Error"` when the row failed.
    pub verdict: String,
    pub error: Option<String>,
}

/// The certificate verdict, downgraded to `Inconclusive` unless the
/// integrability check found evidence for all three conditions.
pub fn combined_verdict(cert: &CertificateReport64, wx: &WxReport64) -> CertVerdict {
    if wx.verdict == WxVerdict::PassEvidence {
        cert.verdict
    } else {
        CertVerdict::Inconclusive
    }
}

/// Certificate and integrability check for one family.
pub fn certify_with_wx(
    cfg: &RunConfig,
    family: &opnorm_core::SymbolFamily64,
    space: &SpaceSpec64,
    q: &QuadConfig64,
) -> Result<(CertificateReport64, WxReport64), opnorm_core::Error> {
    let probes = cfg.t_probe.clone().unwrap_or_else(|| default_t_probes(q));
    let wx = check_wx(family, space, q, &probes)?;
    let cert = certify_equality(family, space, q)?;
    Ok((cert, wx))
}

fn row(cfg: &RunConfig, name: &str, value: f64, space: &SpaceSpec64, q: &QuadConfig64) -> Result<SweepRow, String> {
    let mut bindings = cfg.bindings.clone();
    bindings.insert(name.to_string(), value);
    let family = cfg.family_with(&bindings).map_err(|e| e.to_string())?;
    let (cert, wx) = certify_with_wx(cfg, &family, space, q).map_err(|e| e.to_string())?;
    let gap = cert.gap.as_ref().ok_or_else(|| cert.notes.join("; "))?;
    Ok(SweepRow {
        value,
        lhs: gap.lhs,
        rhs: gap.rhs,
        gap: gap.gap,
        verdict: combined_verdict(&cert, &wx).to_string(),
        error: None,
    })
}

/// One row per value, in input order. Failures are recorded in their row
/// and do not stop the sweep.
pub fn sweep_gap(cfg: &RunConfig) -> Result<Vec<SweepRow>, ConfigError> {
    let sweep = cfg.sweep_fields()?;
    let space = cfg.space_spec()?;
    let q = cfg.quad_config()?;
    Ok(sweep
        .values
        .iter()
        .map(|&v| {
            row(cfg, &sweep.name, v, &space, &q).unwrap_or_else(|e| SweepRow {
                value: v,
                lhs: f64::NAN,
                rhs: f64::NAN,
                gap: f64::NAN,
                verdict: "Error".into(),
                error: Some(e),
            })
        })
        .collect())
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&round12(x)).expect("finite floats serialize")
    } else {
        String::new()
    }
}

/// CSV with header `<name>,lhs,rhs,gap,verdict` and LF line endings.
pub fn write_csv<W: Write>(name: &str, rows: &[SweepRow], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record([name, "lhs", "rhs", "gap", "verdict"])?;
    for r in rows {
        w.write_record([cell(r.value), cell(r.lhs), cell(r.rhs), cell(r.gap), r.verdict.clone()])?;
    }
    w.flush()
}
