//! Run configuration: a flat TOML document, validated into a typed config.
//!
//! Format version 1. Defaults: `J = 1`, `epsilon = 0`, `d = 10`,
//! `defects = [1, 2]`. Grids are written as `"start:stop:step"` strings and
//! expand to inclusive, strictly increasing sample lists.

use std::fmt::Write as _;
use std::path::PathBuf;

use defectchain::basis::register_from_sites;
use defectchain::chain::ChainSpec;
use serde::{Deserialize, Serialize};

pub const CONFIG_VERSION: u32 = 1;

/// Errors carrying the offending key path where applicable.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConfigError(msg.into()))
}

/// On-disk shape; every field optional so defaults apply uniformly.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    version: Option<u32>,
    mode: String,
    #[serde(rename = "L")]
    length: usize,
    #[serde(skip_serializing_if = "Option::is_none", rename = "J")]
    hopping: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    defects: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_list: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_register: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tracked_registers: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    output_path: Option<PathBuf>,
}

/// Which driver a config requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    Evolve,
    Compare,
    Spectrum,
    Oracle,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Sweep => "sweep",
            Mode::Evolve => "evolve",
            Mode::Compare => "compare",
            Mode::Spectrum => "spectrum",
            Mode::Oracle => "oracle",
        }
    }

    fn parse(text: &str) -> Result<Self> {
        match text {
            "sweep" => Ok(Mode::Sweep),
            "evolve" => Ok(Mode::Evolve),
            "compare" => Ok(Mode::Compare),
            "spectrum" => Ok(Mode::Spectrum),
            "oracle" => Ok(Mode::Oracle),
            other => err(format!(
                "mode: expected one of sweep|evolve|compare|spectrum|oracle, got {other:?}"
            )),
        }
    }
}

/// Validated configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub chain: ChainSpec<f64>,
    pub mode: Mode,
    /// Expanded anisotropy grid (sweep).
    pub delta_grid: Vec<f64>,
    /// Excitation counts (sweep, spectrum).
    pub n_list: Vec<usize>,
    /// Anisotropy list (compare).
    pub delta_list: Vec<f64>,
    /// Initially occupied sites (evolve).
    pub initial_register: Vec<usize>,
    /// Expanded time grid (evolve).
    pub t_grid: Vec<f64>,
    /// Registers whose probability is recorded (evolve).
    pub tracked_registers: Vec<Vec<usize>>,
    pub output_path: Option<PathBuf>,
    raw: RawConfig,
}

/// Expand a `"start:stop:step"` grid to the inclusive sample list.
fn parse_grid(key: &str, text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return err(format!("{key}: expected \"start:stop:step\", got {text:?}"));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| ConfigError(format!("{key}: bad number {p:?}")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) {
        return err(format!("{key}: step must be positive, got {step}"));
    }
    if stop < start {
        return err(format!("{key}: stop {stop} below start {start}"));
    }
    let count = ((stop - start) / step).round() as usize;
    let mut grid = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let x = start + step * i as f64;
        if x <= stop + step * 1e-9 {
            grid.push(x);
        }
    }
    if grid.is_empty() {
        return err(format!("{key}: empty grid"));
    }
    Ok(grid)
}

fn validate_register(key: &str, length: usize, sites: &[usize]) -> Result<()> {
    register_from_sites(length, sites)
        .map(|_| ())
        .map_err(|e| ConfigError(format!("{key}: {e}")))
}

/// Parse and validate a TOML config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut raw: RawConfig =
        toml::from_str(text).map_err(|e| ConfigError(format!("{e}")))?;
    if let Some(v) = raw.version {
        if v != CONFIG_VERSION {
            return err(format!("version: unsupported config version {v}"));
        }
    }
    raw.version = Some(CONFIG_VERSION);
    let mode = Mode::parse(&raw.mode)?;
    raw.mode = mode.as_str().to_string();

    // defaults
    raw.hopping.get_or_insert(1.0);
    raw.epsilon.get_or_insert(0.0);
    raw.d.get_or_insert(10.0);
    raw.defects.get_or_insert([1, 2]);
    raw.delta.get_or_insert(0.0);

    let defects = raw.defects.unwrap();
    let chain = ChainSpec::new(
        raw.length,
        raw.hopping.unwrap(),
        raw.delta.unwrap(),
        raw.epsilon.unwrap(),
        raw.d.unwrap(),
        (defects[0], defects[1]),
    )
    .map_err(|e| ConfigError(format!("chain parameters: {e}")))?;

    let mut config = RunConfig {
        chain,
        mode,
        delta_grid: Vec::new(),
        n_list: Vec::new(),
        delta_list: Vec::new(),
        initial_register: Vec::new(),
        t_grid: Vec::new(),
        tracked_registers: Vec::new(),
        output_path: raw.output_path.clone(),
        raw: raw.clone(),
    };

    match mode {
        Mode::Sweep => {
            let grid_text = raw
                .delta_grid
                .as_deref()
                .ok_or_else(|| ConfigError("delta_grid: required for sweep".into()))?;
            config.delta_grid = parse_grid("delta_grid", grid_text)?;
            let n_list = raw
                .n_list
                .clone()
                .ok_or_else(|| ConfigError("n_list: required for sweep".into()))?;
            if n_list.is_empty() {
                return err("n_list: must be nonempty");
            }
            for &n in &n_list {
                if n > raw.length {
                    return err(format!("n_list: {n} exceeds L={}", raw.length));
                }
            }
            config.n_list = n_list;
        }
        Mode::Evolve => {
            let initial = raw
                .initial_register
                .clone()
                .ok_or_else(|| ConfigError("initial_register: required for evolve".into()))?;
            validate_register("initial_register", raw.length, &initial)?;
            let t_text = raw
                .t_grid
                .as_deref()
                .ok_or_else(|| ConfigError("t_grid: required for evolve".into()))?;
            config.t_grid = parse_grid("t_grid", t_text)?;
            let tracked = raw
                .tracked_registers
                .clone()
                .unwrap_or_else(|| vec![initial.clone()]);
            for (i, sites) in tracked.iter().enumerate() {
                let key = format!("tracked_registers[{i}]");
                validate_register(&key, raw.length, sites)?;
                if sites.len() != initial.len() {
                    return err(format!(
                        "{key}: {} excitations but the initial register has {}",
                        sites.len(),
                        initial.len()
                    ));
                }
            }
            config.initial_register = initial;
            config.tracked_registers = tracked;
        }
        Mode::Compare => {
            let list = raw
                .delta_list
                .clone()
                .ok_or_else(|| ConfigError("delta_list: required for compare".into()))?;
            if list.is_empty() {
                return err("delta_list: must be nonempty");
            }
            let resonance = raw.d.unwrap() / raw.hopping.unwrap();
            for &delta in &list {
                if delta < 0.0 {
                    return err(format!("delta_list: negative anisotropy {delta}"));
                }
                if delta >= resonance {
                    return err(format!(
                        "delta_list: {delta} not below d/J = {resonance}; the comparison branch needs Delta < d/J"
                    ));
                }
            }
            config.delta_list = list;
        }
        Mode::Spectrum => {
            let n_list = raw
                .n_list
                .clone()
                .unwrap_or_else(|| (0..=raw.length).collect());
            for &n in &n_list {
                if n > raw.length {
                    return err(format!("n_list: {n} exceeds L={}", raw.length));
                }
            }
            config.n_list = n_list;
        }
        Mode::Oracle => {
            if raw.length > 10 {
                return err(format!("L: oracle mode limited to L <= 10, got {}", raw.length));
            }
        }
    }
    config.raw = raw;
    Ok(config)
}

impl RunConfig {
    /// Normalized TOML rendering; `parse_config` of this text reproduces the
    /// same normal form (serialize-parse idempotence).
    pub fn to_toml(&self) -> String {
        let mut raw = self.raw.clone();
        raw.version = Some(CONFIG_VERSION);
        let mut out = String::new();
        let _ = write!(out, "{}", toml::to_string(&raw).expect("config serializes"));
        out
    }
}
