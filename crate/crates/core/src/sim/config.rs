//! Scenario configuration read from TOML.
//!
//! Every table rejects unknown keys. Semantic checks run in
//! [`ScenarioConfig::validate`] and report the offending key path.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::classical::PhaseGrid;
use crate::dynquant::{FpCoefficients, DEQUANTIZE_MAX_DIM};
use crate::error::{Error, Result};
use crate::sim::algebra::Profile;
use crate::sim::engine::Method;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    DampedOscillator,
    FokkerPlanck,
    AlgebraCheck,
    Custom,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::DampedOscillator => "damped-oscillator",
            ScenarioKind::FokkerPlanck => "fokker-planck",
            ScenarioKind::AlgebraCheck => "algebra-check",
            ScenarioKind::Custom => "custom",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialState {
    Coherent { alpha: [f64; 2] },
    Fock { k: usize },
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Coherent { alpha: [1.0, 0.0] }
    }
}

/// Constant term of the Fokker–Planck operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HChoice {
    Named(HName),
    Value(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HName {
    /// The trace-preserving value found by the scan.
    HStar,
    /// `−2(c_pp + c_qq)`
    Formula,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FpConfig {
    pub c_qq: f64,
    pub c_qp: f64,
    pub c_pq: f64,
    pub c_pp: f64,
    pub d_qq: f64,
    pub d_qp: f64,
    pub d_pp: f64,
    pub h: HChoice,
}

impl Default for FpConfig {
    fn default() -> Self {
        Self {
            c_qq: -0.05,
            c_qp: 1.0,
            c_pq: -1.0,
            c_pp: -0.05,
            d_qq: 0.025,
            d_qp: 0.0,
            d_pp: 0.025,
            h: HChoice::Named(HName::HStar),
        }
    }
}

impl FpConfig {
    pub fn coefficients(&self) -> FpCoefficients {
        FpCoefficients {
            c_qq: self.c_qq,
            c_qp: self.c_qp,
            c_pq: self.c_pq,
            c_pp: self.c_pp,
            d_qq: self.d_qq,
            d_qp: self.d_qp,
            d_pp: self.d_pp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Write `wigner_<k>.csv` for every snapshot.
    pub wigner: bool,
    /// Run the classical counterpart and write `classical.csv`.
    pub classical_twin: bool,
    /// Write the generator as `generator.json` for `dequantize`.
    pub dump_generator: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), wigner: false, classical_twin: false, dump_generator: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    #[default]
    Schrodinger,
    Heisenberg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomTerm {
    /// `[re, im]`
    pub coeff: [f64; 2],
    #[serde(default)]
    pub q: u32,
    #[serde(default)]
    pub p: u32,
    #[serde(default)]
    pub dq: u32,
    #[serde(default)]
    pub dp: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FormName {
    #[default]
    Qp,
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct CustomConfig {
    pub form: FormName,
    pub picture: Picture,
    pub terms: Vec<CustomTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct AlgebraConfig {
    pub profile: Profile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(rename = "N")]
    pub n: usize,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub gamma: f64,
    pub dt: f64,
    pub steps: usize,
    pub snapshot_stride: usize,
    pub method: Method,
    pub seed: u64,
    pub initial_state: InitialState,
    pub fp: FpConfig,
    pub grid: PhaseGrid,
    pub output: OutputConfig,
    pub custom: CustomConfig,
    pub algebra: AlgebraConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::DampedOscillator,
            n: 40,
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            gamma: 0.1,
            dt: 0.01,
            steps: 500,
            snapshot_stride: 0,
            method: Method::Expm,
            seed: 0,
            initial_state: InitialState::default(),
            fp: FpConfig::default(),
            grid: PhaseGrid { q_min: -7.0, q_max: 7.0, p_min: -7.0, p_max: 7.0, nq: 141, np: 141 },
            output: OutputConfig::default(),
            custom: CustomConfig::default(),
            algebra: AlgebraConfig::default(),
        }
    }
}

fn bad(path: &str, reason: impl Into<String>) -> Error {
    Error::config(path, reason)
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| {
            let path = e.span().map(|s| format!("bytes {}..{}", s.start, s.end)).unwrap_or_else(|| "<root>".into());
            bad(&path, e.message().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(bad("N", format!("must be at least 8, got {}", self.n)));
        }
        // TOML integers are signed 64-bit
        if i64::try_from(self.seed).is_err() {
            return Err(bad("seed", format!("must be at most {}, got {}", i64::MAX, self.seed)));
        }
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("omega", self.omega)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(name, format!("must be positive and finite, got {v}")));
            }
        }
        if !self.gamma.is_finite() {
            return Err(bad("gamma", "must be finite"));
        }
        if self.scenario == ScenarioKind::AlgebraCheck {
            return Ok(());
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(bad("dt", format!("must be positive, got {}", self.dt)));
        }
        if self.steps == 0 {
            return Err(bad("steps", "must be at least 1"));
        }
        match &self.initial_state {
            InitialState::Coherent { alpha } => {
                let norm_sqr = alpha[0] * alpha[0] + alpha[1] * alpha[1];
                if !(norm_sqr <= self.n as f64 / 4.0) {
                    return Err(bad(
                        "initial_state.alpha",
                        format!("|alpha|^2 = {norm_sqr} exceeds N/4 = {}", self.n as f64 / 4.0),
                    ));
                }
            }
            InitialState::Fock { k } => {
                if *k + 2 > self.n {
                    return Err(bad("initial_state.k", format!("level {k} is not interior for N = {}", self.n)));
                }
            }
        }
        if self.scenario == ScenarioKind::FokkerPlanck {
            let fp = &self.fp;
            let named = [
                ("fp.c_qq", fp.c_qq),
                ("fp.c_qp", fp.c_qp),
                ("fp.c_pq", fp.c_pq),
                ("fp.c_pp", fp.c_pp),
                ("fp.d_qq", fp.d_qq),
                ("fp.d_qp", fp.d_qp),
                ("fp.d_pp", fp.d_pp),
            ];
            if let Some((name, _)) = named.iter().find(|(_, v)| !v.is_finite()) {
                return Err(bad(name, "must be finite"));
            }
            if fp.c_pq == 0.0 {
                return Err(bad("fp.c_pq", "must be non-zero (m = -1/c_pq)"));
            }
            if let HChoice::Value(h) = fp.h {
                if !h.is_finite() {
                    return Err(bad("fp.h", "must be finite"));
                }
            }
        }
        if self.output.classical_twin || self.output.wigner {
            self.grid.validate().map_err(|e| bad("grid", e.to_string()))?;
        }
        if self.output.dump_generator && self.n > DEQUANTIZE_MAX_DIM {
            return Err(bad(
                "output.dump_generator",
                format!("generator dumps are limited to N <= {DEQUANTIZE_MAX_DIM}, got N = {}", self.n),
            ));
        }
        if self.scenario == ScenarioKind::Custom {
            if self.custom.terms.is_empty() {
                return Err(bad("custom.terms", "at least one term is required"));
            }
            for (k, t) in self.custom.terms.iter().enumerate() {
                if !(t.coeff[0].is_finite() && t.coeff[1].is_finite()) {
                    return Err(bad(&format!("custom.terms[{k}].coeff"), "must be finite"));
                }
            }
        }
        Ok(())
    }
}
