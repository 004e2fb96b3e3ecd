//! Model parameters from flags, environment and `key=value` config files,
//! plus the run configuration that is hashed into every output.

use std::collections::BTreeMap;
use std::path::Path;

use clap::{Args, ValueEnum};
use esqpt_core::{Model, ModelParams};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Failure;

/// Tag written at the top of every CSV.
pub const FORMAT_TAG: &str = "esqpt-lab v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Tc,
    Dicke,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Tc => Model::TavisCummings,
            ModelArg::Dicke => Model::Dicke,
        }
    }
}

/// Model parameters. Flags win over `ESQPT_*` variables, which win over the
/// config file; anything left unset falls back to the resonant defaults
/// `ω = ω0 = 1`, `2j = 80`, `γ = 2γc`, Dicke.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Plain-text `key=value` file (keys: omega, omega0, gamma, gamma_over_gc, j2, delta).
    #[arg(long, env = "ESQPT_CONFIG", global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Model variant; same as --delta 0 (tc) or 1 (dicke).
    #[arg(long, value_enum, env = "ESQPT_MODEL", global = true)]
    pub model: Option<ModelArg>,
    #[arg(long, env = "ESQPT_DELTA", global = true)]
    pub delta: Option<u8>,
    #[arg(long, env = "ESQPT_OMEGA", global = true)]
    pub omega: Option<f64>,
    #[arg(long, env = "ESQPT_OMEGA0", global = true)]
    pub omega0: Option<f64>,
    /// Coupling in energy units.
    #[arg(long, env = "ESQPT_GAMMA", global = true)]
    pub gamma: Option<f64>,
    /// Coupling relative to the critical coupling of the chosen model.
    #[arg(long, env = "ESQPT_GAMMA_OVER_GC", global = true)]
    pub gamma_over_gc: Option<f64>,
    /// Twice the pseudo-spin length, i.e. the number of atoms.
    #[arg(long, env = "ESQPT_J2", global = true)]
    pub j2: Option<u32>,
}

#[derive(Debug, Default)]
struct Layer {
    model: Option<Model>,
    omega: Option<f64>,
    omega0: Option<f64>,
    gamma: Option<f64>,
    gamma_over_gc: Option<f64>,
    j2: Option<u32>,
}

fn config_err(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str, origin: &str) -> Result<T, Failure> {
    raw.trim()
        .parse()
        .map_err(|_| config_err(format!("{origin}: cannot parse {key} = {raw:?}")))
}

fn model_from_delta(delta: u8) -> Result<Model, Failure> {
    Model::from_delta(delta).map_err(|e| config_err(e.to_string()))
}

/// Parses a `key=value` file. Blank lines and `#` comments are skipped.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text, &path.display().to_string())
}

pub fn parse_config_text(text: &str, origin: &str) -> Result<BTreeMap<String, String>, Failure> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("{origin}:{}: expected key=value", no + 1)))?;
        let key = k.trim().to_string();
        if !matches!(key.as_str(), "omega" | "omega0" | "gamma" | "gamma_over_gc" | "j2" | "delta") {
            return Err(config_err(format!("{origin}:{}: unknown key {key:?}", no + 1)));
        }
        if out.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(config_err(format!("{origin}:{}: duplicate key {key:?}", no + 1)));
        }
    }
    Ok(out)
}

fn file_layer(map: &BTreeMap<String, String>, origin: &str) -> Result<Layer, Failure> {
    let get = |k: &str| map.get(k).map(String::as_str);
    Ok(Layer {
        model: get("delta").map(|v| parse_value::<u8>("delta", v, origin)).transpose()?.map(model_from_delta).transpose()?,
        omega: get("omega").map(|v| parse_value("omega", v, origin)).transpose()?,
        omega0: get("omega0").map(|v| parse_value("omega0", v, origin)).transpose()?,
        gamma: get("gamma").map(|v| parse_value("gamma", v, origin)).transpose()?,
        gamma_over_gc: get("gamma_over_gc").map(|v| parse_value("gamma_over_gc", v, origin)).transpose()?,
        j2: get("j2").map(|v| parse_value("j2", v, origin)).transpose()?,
    })
}

impl ParamArgs {
    fn layer(&self) -> Result<Layer, Failure> {
        let from_delta = self.delta.map(model_from_delta).transpose()?;
        let model = match (self.model.map(Model::from), from_delta) {
            (Some(a), Some(b)) if a != b => return Err(config_err("--model and --delta disagree")),
            (a, b) => a.or(b),
        };
        Ok(Layer {
            model,
            omega: self.omega,
            omega0: self.omega0,
            gamma: self.gamma,
            gamma_over_gc: self.gamma_over_gc,
            j2: self.j2,
        })
    }

    pub fn resolve(&self) -> Result<ModelParams, Failure> {
        let top = self.layer()?;
        let file = match &self.config {
            Some(path) => file_layer(&read_config_file(path)?, &path.display().to_string())?,
            None => Layer::default(),
        };
        // A coupling given at a higher layer replaces both coupling keys below it.
        let (gamma, ratio) = if top.gamma.is_some() || top.gamma_over_gc.is_some() {
            (top.gamma, top.gamma_over_gc)
        } else {
            (file.gamma, file.gamma_over_gc)
        };
        let model = top.model.or(file.model).unwrap_or(Model::Dicke);
        let omega = top.omega.or(file.omega).unwrap_or(1.0);
        let omega0 = top.omega0.or(file.omega0).unwrap_or(1.0);
        let j2 = top.j2.or(file.j2).unwrap_or(80);
        let base = ModelParams::new(omega, omega0, 0.0, j2, model).map_err(|e| config_err(e.to_string()))?;
        let params = match (gamma, ratio) {
            (Some(_), Some(_)) => return Err(config_err("give either gamma or gamma_over_gc, not both")),
            (Some(g), None) => base.with_gamma(g),
            (None, Some(r)) => base.with_gamma_ratio(r),
            (None, None) => base.with_gamma_ratio(2.0),
        };
        params.map_err(|e| config_err(e.to_string()))
    }
}

pub fn params_json(p: &ModelParams) -> Value {
    json!({
        "omega": p.omega(),
        "omega0": p.omega0(),
        "gamma": p.gamma(),
        "gamma_over_gc": p.gamma_ratio(),
        "j2": p.j2(),
        "delta": p.model().delta_u8(),
    })
}

/// Everything that determines the content of an output file.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub params: Option<ModelParams>,
    pub options: Value,
}

impl RunConfig {
    pub fn to_json(&self) -> Value {
        json!({
            "format": FORMAT_TAG,
            "command": self.command,
            "params": self.params.as_ref().map(params_json),
            "options": self.options,
        })
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_json().to_string().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn header(&self) -> String {
        format!("# {FORMAT_TAG} config={}", self.hash())
    }
}

/// Parses `lo:hi:n`.
pub fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("grid {s:?} is not lo:hi:n"));
    };
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad grid start {lo:?}"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad grid end {hi:?}"))?;
    let n: usize = n.trim().parse().map_err(|_| format!("bad grid size {n:?}"))?;
    if !(lo < hi) || n < 2 {
        return Err(format!("grid {s:?} needs lo < hi and n >= 2"));
    }
    Ok((lo, hi, n))
}
