//! TOML run configuration.
//!
//! ```toml
//! [system]            # every key optional; defaults are the baseline system
//! n_donors = 16
//! rabi_ev = 0.16
//!
//! [baths]
//! gamma_phi_ev = 0.013
//! xi_ev = 0.01
//! omega_vd_ev = "auto"   # or a number; "auto" locks to ω_UP - ω_D
//! omega_va_ev = 0.13     # "auto" locks to ω_MP - ω_A
//!
//! [drive]
//! omega_p_ev = "auto_up"
//! amplitude_ev = 1e-4
//!
//! [sweep]
//! kind = "vibrational_map"   # rabi_scan | cavity_scan | size_scan | single_point
//! engine = "both"            # redfield | rate | both
//! grid_vd = { start = 0.03, stop = 0.6, points = 39 }
//! grid_va = [0.1, 0.13, 0.16]
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bath::BathSet;
use crate::dynamics::DriveParams;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::polariton::PolaritonDecomposition;

/// Default vibrational-map axis: 39 points, 0.015 eV apart.
pub const DEFAULT_MAP_GRID: GridSpec = GridSpec::Range {
    start: 0.03,
    stop: 0.60,
    points: 39,
};

pub const DEFAULT_REDFIELD_DIM_CAP: usize = 66;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Auto<T> {
    Value(T),
    Keyword(AutoKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoKeyword {
    Auto,
    AutoUp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathConfig {
    pub gamma_phi_ev: f64,
    pub xi_ev: f64,
    pub omega_vd_ev: Auto<f64>,
    pub omega_va_ev: Auto<f64>,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            gamma_phi_ev: 0.013,
            xi_ev: 0.01,
            omega_vd_ev: Auto::Keyword(AutoKeyword::Auto),
            omega_va_ev: Auto::Keyword(AutoKeyword::Auto),
        }
    }
}

impl BathConfig {
    fn validate(&self) -> Result<()> {
        for (name, v) in [("omega_vd_ev", self.omega_vd_ev), ("omega_va_ev", self.omega_va_ev)] {
            match v {
                Auto::Value(x) if !(x > 0.0 && x.is_finite()) => {
                    return Err(Error::invalid(name, "must be positive"))
                }
                Auto::Keyword(AutoKeyword::AutoUp) => {
                    return Err(Error::invalid(name, "expected a number or \"auto\""))
                }
                _ => {}
            }
        }
        // Probe with a placeholder centre frequency.
        BathSet::new(self.gamma_phi_ev, self.xi_ev, 1.0, 1.0).map(|_| ())
    }

    /// Resolves `"auto"` centre frequencies against the polariton gaps
    /// (`ω_UP - ω_D` for donors, `ω_MP - ω_A` for acceptors).
    pub fn resolve(&self, decomposition: &PolaritonDecomposition) -> Result<BathSet> {
        let gaps = decomposition.resonance_gaps();
        let pick = |v: Auto<f64>, auto: f64| match v {
            Auto::Value(x) => x,
            Auto::Keyword(_) => auto,
        };
        BathSet::new(
            self.gamma_phi_ev,
            self.xi_ev,
            pick(self.omega_vd_ev, gaps.up_to_donor_dark),
            pick(self.omega_va_ev, gaps.mp_to_acceptor_dark),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveConfig {
    pub omega_p_ev: Auto<f64>,
    pub amplitude_ev: f64,
}

impl Default for DriveConfig {
    fn default() -> Self {
        Self {
            omega_p_ev: Auto::Keyword(AutoKeyword::AutoUp),
            amplitude_ev: DriveParams::DEFAULT_AMPLITUDE,
        }
    }
}

impl DriveConfig {
    fn validate(&self) -> Result<()> {
        match self.omega_p_ev {
            Auto::Value(x) => DriveParams::new(self.amplitude_ev, x).map(|_| ()),
            Auto::Keyword(AutoKeyword::AutoUp) => DriveParams::new(self.amplitude_ev, 1.0).map(|_| ()),
            Auto::Keyword(AutoKeyword::Auto) => Err(Error::invalid("omega_p_ev", "expected a number or \"auto_up\"")),
        }
    }

    pub fn resolve(&self, decomposition: &PolaritonDecomposition) -> Result<DriveParams> {
        let frequency = match self.omega_p_ev {
            Auto::Value(x) => x,
            Auto::Keyword(_) => decomposition.energies[2],
        };
        DriveParams::new(self.amplitude_ev, frequency)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::List(v) => v.clone(),
            GridSpec::Range { start, stop, points } => match *points {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Redfield,
    Rate,
    Both,
}

impl Engine {
    pub fn uses_redfield(self) -> bool {
        matches!(self, Engine::Redfield | Engine::Both)
    }

    pub fn uses_rate(self) -> bool {
        matches!(self, Engine::Rate | Engine::Both)
    }
}

impl std::str::FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "redfield" => Ok(Engine::Redfield),
            "rate" => Ok(Engine::Rate),
            "both" => Ok(Engine::Both),
            other => Err(Error::Config(format!("unknown engine `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKindName {
    VibrationalMap,
    RabiScan,
    CavityScan,
    SizeScan,
    SinglePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSweep {
    kind: SweepKindName,
    engine: Engine,
    name: Option<String>,
    output_dir: Option<PathBuf>,
    workers: usize,
    grid: Option<GridSpec>,
    grid_vd: Option<GridSpec>,
    grid_va: Option<GridSpec>,
    redfield_dim_cap: usize,
}

impl Default for RawSweep {
    fn default() -> Self {
        Self {
            kind: SweepKindName::SinglePoint,
            engine: Engine::Both,
            name: None,
            output_dir: None,
            workers: 1,
            grid: None,
            grid_vd: None,
            grid_va: None,
            redfield_dim_cap: DEFAULT_REDFIELD_DIM_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepKind {
    VibrationalMap { omega_vd: Vec<f64>, omega_va: Vec<f64> },
    RabiScan { grid: Vec<f64> },
    CavityScan { grid: Vec<f64> },
    SizeScan { sizes: Vec<usize> },
    SinglePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    #[serde(flatten)]
    pub kind: SweepKind,
    pub engine: Engine,
    pub name: String,
    pub output_dir: PathBuf,
    pub worker_count: usize,
    pub redfield_dim_cap: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    system: SystemParams,
    baths: BathConfig,
    drive: DriveConfig,
    sweep: RawSweep,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub system: SystemParams,
    pub baths: BathConfig,
    pub drive: DriveConfig,
    pub sweep: SweepSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        // The raw defaults always validate.
        resolve(RawConfig::default()).expect("default configuration is valid")
    }
}

fn ascending(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(name, "grid must not be empty"));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(name, "grid values must be finite"));
    }
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid(name, "grid must be ascending"));
    }
    Ok(())
}

fn required(name: &str, grid: Option<GridSpec>) -> Result<Vec<f64>> {
    let values = grid
        .ok_or_else(|| Error::Config(format!("sweep requires `{name}`")))?
        .values();
    ascending(name, &values)?;
    Ok(values)
}

fn resolve(raw: RawConfig) -> Result<RunConfig> {
    raw.system.validate()?;
    raw.baths.validate()?;
    raw.drive.validate()?;
    let s = raw.sweep;
    if s.workers == 0 {
        return Err(Error::invalid("workers", "must be at least 1"));
    }
    let kind = match s.kind {
        SweepKindName::VibrationalMap => {
            let vd = s.grid_vd.unwrap_or(DEFAULT_MAP_GRID).values();
            let va = s.grid_va.unwrap_or(DEFAULT_MAP_GRID).values();
            ascending("grid_vd", &vd)?;
            ascending("grid_va", &va)?;
            if vd.iter().chain(&va).any(|x| *x <= 0.0) {
                return Err(Error::invalid("grid", "vibrational frequencies must be positive"));
            }
            SweepKind::VibrationalMap {
                omega_vd: vd,
                omega_va: va,
            }
        }
        SweepKindName::RabiScan => SweepKind::RabiScan {
            grid: required("grid", s.grid)?,
        },
        SweepKindName::CavityScan => SweepKind::CavityScan {
            grid: required("grid", s.grid)?,
        },
        SweepKindName::SizeScan => {
            let values = required("grid", s.grid)?;
            let sizes = values
                .iter()
                .map(|&x| {
                    if x >= 1.0 && x.fract() == 0.0 {
                        Ok(x as usize)
                    } else {
                        Err(Error::invalid("grid", format!("molecule counts must be positive integers, got {x}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if s.engine.uses_redfield() {
                if let Some(&n) = sizes.iter().find(|&&n| 2 * n + 2 > s.redfield_dim_cap) {
                    return Err(Error::Config(format!(
                        "Redfield engine limited to dimension {}; N = {n} needs {}",
                        s.redfield_dim_cap,
                        2 * n + 2
                    )));
                }
            }
            SweepKind::SizeScan { sizes }
        }
        SweepKindName::SinglePoint => SweepKind::SinglePoint,
    };
    Ok(RunConfig {
        system: raw.system,
        baths: raw.baths,
        drive: raw.drive,
        sweep: SweepSpec {
            kind,
            engine: s.engine,
            name: s.name.unwrap_or_else(|| "xfer".into()),
            output_dir: s.output_dir.unwrap_or_else(|| PathBuf::from(".")),
            worker_count: s.workers,
            redfield_dim_cap: s.redfield_dim_cap,
        },
    })
}

fn parse_table(text: &str) -> Result<toml::Table> {
    text.parse::<toml::Table>()
        .map_err(|e| Error::Config(e.message().trim().to_string()))
}

fn from_table(table: toml::Table) -> Result<RunConfig> {
    let raw: RawConfig = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| Error::Config(e.message().trim().to_string()))?;
    resolve(raw)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    from_table(parse_table(text)?)
}

/// Parses `text` after applying `section.key=value` overrides. Values are
/// TOML literals; bare words are taken as strings.
pub fn parse_config_with_overrides<S: AsRef<str>>(text: &str, overrides: &[S]) -> Result<RunConfig> {
    let mut table = parse_table(text)?;
    for o in overrides {
        let o = o.as_ref();
        let (path, value) = o
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{o}` is not of the form section.key=value")))?;
        let (section, key) = path
            .trim()
            .split_once('.')
            .ok_or_else(|| Error::Config(format!("override key `{path}` must be section.key")))?;
        let value = value.trim();
        let parsed = format!("v = {value}")
            .parse::<toml::Table>()
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(value.to_string()));
        let entry = table
            .entry(section.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        match entry {
            toml::Value::Table(t) => {
                t.insert(key.to_string(), parsed);
            }
            _ => return Err(Error::Config(format!("`{section}` is not a section"))),
        }
    }
    from_table(table)
}
