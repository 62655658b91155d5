//! Resolved per-command settings: defaults, then the config file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use lpcb_core::optimizer::default_max_iters;
use lpcb_core::simulator::{DecoderConfig, DecoderKind};
use lpcb_core::{DesignConfig, Overload};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Bad user input: reported with exit code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

/// Rician K-factor accepting `inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kappa(pub f64);

impl FromStr for Kappa {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let v = match s.trim() {
            "inf" | "infinity" | "Inf" => f64::INFINITY,
            t => t.parse::<f64>().map_err(|_| format!("invalid kappa '{s}', expected a number or inf"))?,
        };
        if !(v >= 0.0) {
            return Err(format!("kappa must be non-negative, got {s}"));
        }
        Ok(Kappa(v))
    }
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        lpcb_core::codebook::kappa_serde::plain::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        lpcb_core::codebook::kappa_serde::plain::deserialize(d).map(Kappa)
    }
}

/// Eb/N0 grid in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_grid(s).map(Grid)
    }
}

/// Eb/N0 grid written `a:b:step` (inclusive) or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid number '{t}' in grid '{s}'"));
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if !(step > 0.0) || b < a {
                return Err(format!("grid '{s}' needs a <= b and step > 0"));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * step).collect())
        }
        _ => Err(format!("invalid grid '{s}', expected a:b:step or a single value")),
    }
}

/// Read a JSON config file. If it holds an object under `section`, that
/// object is used; otherwise the whole file.
pub fn load_section<T: DeserializeOwned + Default>(path: Option<&Path>, section: &str) -> anyhow::Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| input_error(format!("config {} is not valid JSON: {e}", path.display())))?;
    let value = match value.get(section) {
        Some(v) if v.is_object() => v.clone(),
        _ => value,
    };
    serde_json::from_value(value).map_err(|e| input_error(format!("config {}: {e}", path.display())))
}

fn overload_from(percent: u32) -> anyhow::Result<Overload> {
    match percent {
        150 => Ok(Overload::P150),
        200 => Ok(Overload::P200),
        p => Err(input_error(format!("overload must be 150 or 200, got {p}"))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignSettings {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub overload: u32,
    pub kappa: Kappa,
    pub ebn0_db: f64,
    pub seed: u64,
    pub restarts: usize,
    pub max_iters: Option<usize>,
    #[serde(rename = "Q")]
    pub q: usize,
    pub t_max: usize,
    pub permutation_restarts: usize,
    pub permutation_sweeps: usize,
    pub label_iters: usize,
    pub label_restarts: usize,
}

impl Default for DesignSettings {
    fn default() -> Self {
        let d = DesignConfig::new(4, 2, Overload::P150);
        DesignSettings {
            m: d.m,
            t: d.t,
            overload: 150,
            kappa: Kappa(d.kappa),
            ebn0_db: d.ebn0_db,
            seed: d.seed,
            restarts: d.restarts,
            max_iters: None,
            q: d.q,
            t_max: d.t_max,
            permutation_restarts: d.permutation_restarts,
            permutation_sweeps: d.permutation_sweeps,
            label_iters: d.label_iters,
            label_restarts: d.label_restarts,
        }
    }
}

impl DesignSettings {
    /// Fill in the overload-dependent iteration cap so the recorded
    /// config is complete.
    pub fn finish(mut self) -> anyhow::Result<Self> {
        let overload = overload_from(self.overload)?;
        self.max_iters.get_or_insert(default_max_iters(overload));
        Ok(self)
    }

    pub fn design_config(&self) -> anyhow::Result<DesignConfig> {
        Ok(DesignConfig {
            m: self.m,
            t: self.t,
            overload: overload_from(self.overload)?,
            kappa: self.kappa.0,
            ebn0_db: self.ebn0_db,
            seed: self.seed,
            restarts: self.restarts,
            max_iters: self.max_iters,
            q: self.q,
            t_max: self.t_max,
            permutation_restarts: self.permutation_restarts,
            permutation_sweeps: self.permutation_sweeps,
            label_iters: self.label_iters,
            label_restarts: self.label_restarts,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelSettings {
    pub codebook: Option<PathBuf>,
    pub kappa: Kappa,
    pub ebn0_db: f64,
    pub seed: u64,
    pub label_iters: usize,
    pub label_restarts: usize,
}

impl Default for LabelSettings {
    fn default() -> Self {
        LabelSettings {
            codebook: None,
            kappa: Kappa(20.0),
            ebn0_db: 16.0,
            seed: 0,
            label_iters: 20,
            label_restarts: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    /// Exhaustive up to the cap, branch and bound above it.
    Auto,
    Exhaustive,
    Montecarlo,
    BranchAndBound,
}

impl FromStr for EvalMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "auto" => Ok(EvalMode::Auto),
            "exhaustive" => Ok(EvalMode::Exhaustive),
            "montecarlo" | "mc" => Ok(EvalMode::Montecarlo),
            "branch_and_bound" | "bb" => Ok(EvalMode::BranchAndBound),
            _ => Err(format!("unknown mode '{s}', expected auto, exhaustive, montecarlo or branch_and_bound")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSettings {
    pub codebook: Option<PathBuf>,
    pub kappa: Kappa,
    pub ebn0_db: f64,
    pub mode: EvalMode,
    pub cap: u64,
    #[serde(rename = "Q")]
    pub q: usize,
    pub t_max: usize,
    pub seed: u64,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            codebook: None,
            kappa: Kappa(20.0),
            ebn0_db: 16.0,
            mode: EvalMode::Auto,
            cap: lpcb_core::metrics::DEFAULT_EXACT_CAP as u64,
            q: 2_000,
            t_max: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateSettings {
    pub codebook: Option<PathBuf>,
    pub ebn0_db: Vec<f64>,
    pub kappa: Vec<Kappa>,
    pub frames: u64,
    pub decoder: DecoderKind,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SimulateSettings {
    fn default() -> Self {
        let d = DecoderConfig::default();
        SimulateSettings {
            codebook: None,
            ebn0_db: vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0],
            kappa: vec![Kappa(f64::INFINITY)],
            frames: 10_000,
            decoder: DecoderKind::LpMpa,
            max_iters: d.max_iters,
            tol: d.tol,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ComplexitySettings {
    /// Take `T`, `d_f`, `N` and `J` from this codebook when given.
    pub codebook: Option<PathBuf>,
    #[serde(rename = "T")]
    pub t: u64,
    pub d_f: u64,
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "J")]
    pub j: u64,
    pub i_t: u64,
    #[serde(rename = "baseline_T")]
    pub baseline_t: u64,
    pub baseline_i_t: u64,
}

impl Default for ComplexitySettings {
    fn default() -> Self {
        ComplexitySettings { codebook: None, t: 2, d_f: 3, n: 2, j: 6, i_t: 1, baseline_t: 4, baseline_i_t: 4 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:10:2").unwrap(), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        assert_eq!(parse_grid("3").unwrap(), vec![3.0]);
        assert_eq!(parse_grid("0:1:0.25").unwrap().len(), 5);
        assert!(parse_grid("4:0:1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn kappa_parsing() {
        assert_eq!("inf".parse::<Kappa>().unwrap().0, f64::INFINITY);
        assert_eq!("2.5".parse::<Kappa>().unwrap().0, 2.5);
        assert!("-1".parse::<Kappa>().is_err());
        let json = serde_json::to_string(&Kappa(f64::INFINITY)).unwrap();
        assert_eq!(json, "\"inf\"");
        assert_eq!(serde_json::from_str::<Kappa>(&json).unwrap().0, f64::INFINITY);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let v = serde_json::json!({"M": 8, "bogus": 1});
        assert!(serde_json::from_value::<DesignSettings>(v).is_err());
        let v = serde_json::json!({"M": 8, "T": 4});
        let s: DesignSettings = serde_json::from_value(v).unwrap();
        assert_eq!((s.m, s.t, s.overload), (8, 4, 150));
    }
}
