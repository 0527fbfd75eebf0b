//! The JSON run configuration shared by every subcommand.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use opnorm_core::{Complex64, ParseErrorKind, QuadConfig64, SpaceKind, SpaceSpec64, SymbolFamily64};
use serde::Deserialize;

/// A load-time or validation failure, tagged with the offending field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { path: path.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config field `{}`: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindField {
    #[default]
    Hardy,
    Bergman,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFields {
    #[serde(default)]
    pub kind: KindField,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default)]
    pub alpha: f64,
}

fn two() -> f64 {
    2.0
}

impl Default for SpaceFields {
    fn default() -> Self {
        SpaceFields { kind: KindField::Hardy, p: 2.0, alpha: 0.0 }
    }
}

/// Overrides of [`QuadConfig64`] defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadFields {
    pub n_theta: Option<usize>,
    pub n_radial: Option<usize>,
    pub hardy_radii: Option<Vec<f64>>,
    pub t_nodes: Option<usize>,
    pub t_probes: Option<usize>,
    pub sup_refine_iters: Option<usize>,
    pub tol: Option<f64>,
    pub wx_levels: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFields {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Symbol family in the DSL, e.g. `"(c+t+z)"`.
    pub symbol: Option<String>,
    #[serde(default)]
    pub bindings: BTreeMap<String, f64>,
    #[serde(default)]
    pub space: SpaceFields,
    #[serde(default)]
    pub quad: QuadFields,
    /// Parameter at which single-symbol commands freeze the family.
    pub t: Option<f64>,
    /// Length of the maximizing sequence for `opnorm`.
    pub k: Option<usize>,
    /// Optional point `[re, im]` for the extremal-function part of `norm`.
    pub z: Option<[f64; 2]>,
    pub sweep: Option<SweepFields>,
    pub t_probe: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Parses a config document, reporting the path of the first bad field.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ConfigError::new(path, single_line(&inner.to_string()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Re-checks every space, quadrature and command field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.space_spec()?;
        self.quad_config()?;
        for (name, v) in &self.bindings {
            if !v.is_finite() {
                return Err(ConfigError::new(format!("bindings.{name}"), "must be a finite real"));
            }
        }
        if let Some(t) = self.t {
            if !(t > 0.0 && t < 1.0) {
                return Err(ConfigError::new("t", format!("must lie in (0, 1), got {t}")));
            }
        }
        if self.k == Some(0) {
            return Err(ConfigError::new("k", "must be at least 1"));
        }
        if let Some(z) = self.z {
            if z[0] * z[0] + z[1] * z[1] >= 1.0 {
                return Err(ConfigError::new("z", "must lie in the open unit disk"));
            }
        }
        if let Some(ts) = &self.t_probe {
            if ts.len() < 8 {
                return Err(ConfigError::new("t_probe", format!("needs at least 8 points, got {}", ts.len())));
            }
            if let Some(i) = ts.iter().position(|&t| !(t > 0.0 && t < 1.0)) {
                return Err(ConfigError::new(format!("t_probe[{i}]"), "must lie in (0, 1)"));
            }
        }
        if let Some(s) = &self.sweep {
            if s.name.is_empty() {
                return Err(ConfigError::new("sweep.name", "must be nonempty"));
            }
            if let Some(i) = s.values.iter().position(|v| !v.is_finite()) {
                return Err(ConfigError::new(format!("sweep.values[{i}]"), "must be finite"));
            }
        }
        Ok(())
    }

    pub fn space_spec(&self) -> Result<SpaceSpec64, ConfigError> {
        let s = &self.space;
        if !(s.p.is_finite() && s.p > 0.0) {
            return Err(ConfigError::new("space.p", format!("must be a positive real, got {}", s.p)));
        }
        match s.kind {
            KindField::Hardy => SpaceSpec64::hardy(s.p),
            KindField::Bergman => SpaceSpec64::bergman(s.p, s.alpha),
        }
        .map_err(|e| ConfigError::new("space.alpha", e.to_string()))
    }

    pub fn quad_config(&self) -> Result<QuadConfig64, ConfigError> {
        let o = &self.quad;
        let mut q = QuadConfig64::default();
        if let Some(v) = o.n_theta {
            q.n_theta = v;
        }
        if let Some(v) = o.n_radial {
            q.n_radial = v;
        }
        if let Some(v) = &o.hardy_radii {
            q.hardy_radii = v.clone();
        }
        if let Some(v) = o.t_nodes {
            q.t_nodes = v;
        }
        if let Some(v) = o.t_probes {
            q.t_probes = v;
        }
        if let Some(v) = o.sup_refine_iters {
            q.sup_refine_iters = v;
        }
        if let Some(v) = o.tol {
            q.tol = v;
        }
        if let Some(v) = o.wx_levels {
            q.wx_levels = v;
        }
        q.validate().map_err(|e| match e {
            opnorm_core::Error::InvalidConfig(m) => {
                let field = m.split_whitespace().next().unwrap_or("").to_string();
                ConfigError::new(format!("quad.{field}"), m)
            }
            other => ConfigError::new("quad", other.to_string()),
        })?;
        Ok(q)
    }

    pub fn symbol_text(&self) -> Result<&str, ConfigError> {
        self.symbol.as_deref().ok_or_else(|| ConfigError::new("symbol", "required by this command"))
    }

    pub fn family(&self) -> Result<SymbolFamily64, ConfigError> {
        self.family_with(&self.bindings)
    }

    pub fn family_with(&self, bindings: &BTreeMap<String, f64>) -> Result<SymbolFamily64, ConfigError> {
        SymbolFamily64::parse(self.symbol_text()?, bindings).map_err(|e| ConfigError::new("symbol", e.to_string()))
    }

    pub fn t_or_default(&self) -> f64 {
        self.t.unwrap_or(0.5)
    }

    pub fn z_point(&self) -> Option<Complex64> {
        self.z.map(|[re, im]| Complex64::new(re, im))
    }

    /// The sweep block, checked against the symbol: the swept name must be
    /// one the symbol actually refers to.
    pub fn sweep_fields(&self) -> Result<&SweepFields, ConfigError> {
        let s = self.sweep.as_ref().ok_or_else(|| ConfigError::new("sweep", "required by this command"))?;
        let mut without = self.bindings.clone();
        without.remove(&s.name);
        match SymbolFamily64::parse(self.symbol_text()?, &without) {
            Err(e) if e.kind == ParseErrorKind::UnboundName(s.name.clone()) => Ok(s),
            Err(e) => Err(ConfigError::new("symbol", e.to_string())),
            Ok(_) => Err(ConfigError::new("sweep.name", format!("`{}` does not occur in the symbol", s.name))),
        }
    }
}

pub fn space_kind_name(kind: SpaceKind) -> &'static str {
    match kind {
        SpaceKind::Hardy => "hardy",
        SpaceKind::Bergman => "bergman",
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}
