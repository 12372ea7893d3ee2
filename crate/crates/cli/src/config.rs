//! JSON run configurations. Unknown keys are rejected everywhere.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use xwave_core::medium::{MediumParams, UnitSystem};
use xwave_core::xwave::{FieldGrid, Interpolation, VelocityGrid, DEFAULT_ALPHA_NODES, DEFAULT_VELOCITY_FRACTION, DEFAULT_VELOCITY_POINTS};

use crate::error::{CliError, CliResult};

fn default_alpha_nodes() -> usize {
    DEFAULT_ALPHA_NODES
}

fn default_v_points() -> usize {
    DEFAULT_VELOCITY_POINTS
}

fn default_points() -> usize {
    21
}

fn default_alpha_points() -> usize {
    201
}

fn default_velocities() -> Vec<f64> {
    vec![0.0]
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSection {
    /// Reference length Δ; the propagate command derives it from the
    /// spectrum centroid when absent.
    #[serde(default)]
    pub delta: Option<f64>,
    pub p_max: usize,
    #[serde(default = "default_alpha_nodes")]
    pub alpha_nodes: usize,
    /// Defaults to `0.2·ω′`.
    #[serde(default)]
    pub v_max: Option<f64>,
    #[serde(default = "default_v_points")]
    pub v_points: usize,
}

impl BasisSection {
    pub fn velocity_grid(&self, medium: &MediumParams) -> CliResult<VelocityGrid> {
        let v_max = self.v_max.unwrap_or(DEFAULT_VELOCITY_FRACTION * medium.omega1);
        Ok(VelocityGrid::new(v_max, self.v_points)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisOutput {
    /// Spectra are sampled on `[0, alpha_max]`; defaults to `(4(p_max+1)+40)/Δ`.
    #[serde(default)]
    pub alpha_max: Option<f64>,
    #[serde(default = "default_alpha_points")]
    pub alpha_points: usize,
    #[serde(default = "default_true")]
    pub fields: bool,
    #[serde(default = "default_velocities")]
    pub velocities: Vec<f64>,
    /// Defaults to `5Δ/sqrt(ω″k/ω′)`.
    #[serde(default)]
    pub r_max: Option<f64>,
    #[serde(default = "default_points")]
    pub r_points: usize,
    /// Defaults to `5Δ`; the ζ′ window is symmetric.
    #[serde(default)]
    pub zeta_max: Option<f64>,
    #[serde(default = "default_points")]
    pub zeta_points: usize,
}

impl Default for BasisOutput {
    fn default() -> Self {
        Self {
            alpha_max: None,
            alpha_points: default_alpha_points(),
            fields: true,
            velocities: default_velocities(),
            r_max: None,
            r_points: default_points(),
            zeta_max: None,
            zeta_points: default_points(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisRun {
    #[serde(default)]
    pub units: Option<UnitSystem>,
    pub medium: MediumParams,
    pub basis: BasisSection,
    #[serde(default)]
    pub output: BasisOutput,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    #[default]
    Gauss,
    Uniform,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub r_max: f64,
    pub r_points: usize,
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub zeta_points: usize,
    #[serde(default)]
    pub kind: GridKind,
}

impl GridSection {
    pub fn build(&self) -> CliResult<FieldGrid> {
        if !(self.r_max > 0.0) || !(self.zeta_max > self.zeta_min) {
            return Err(CliError::Config("grid needs r_max > 0 and zeta_max > zeta_min".into()));
        }
        if self.r_points < 2 || self.zeta_points < 2 {
            return Err(CliError::Config("grid needs at least two points per axis".into()));
        }
        let grid = match self.kind {
            GridKind::Gauss => FieldGrid::gauss(self.r_max, self.r_points, self.zeta_min, self.zeta_max, self.zeta_points),
            GridKind::Uniform => {
                FieldGrid::uniform(self.r_max, self.r_points, self.zeta_min, self.zeta_max, self.zeta_points)
            }
        };
        Ok(grid?)
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationChoice {
    Bilinear,
    #[default]
    CubicSpline,
}

impl From<InterpolationChoice> for Interpolation {
    fn from(c: InterpolationChoice) -> Self {
        match c {
            InterpolationChoice::Bilinear => Interpolation::Bilinear,
            InterpolationChoice::CubicSpline => Interpolation::CubicSpline,
        }
    }
}

fn default_l2_tolerance() -> f64 {
    1e-6
}

fn default_energy_tolerance() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateSection {
    /// CSV with columns `kperp,kz,re,im`; relative paths resolve against the
    /// config file's directory.
    pub spectrum_file: PathBuf,
    #[serde(default)]
    pub interpolation: InterpolationChoice,
    pub times: Vec<f64>,
    pub grid: GridSection,
    #[serde(default = "default_l2_tolerance")]
    pub l2_tolerance: f64,
    #[serde(default = "default_energy_tolerance")]
    pub energy_tolerance: f64,
    #[serde(default = "default_l2_tolerance")]
    pub truncation_tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropagateRun {
    #[serde(default)]
    pub units: Option<UnitSystem>,
    pub medium: MediumParams,
    pub basis: BasisSection,
    pub propagate: PropagateSection,
}

fn default_uv_points() -> usize {
    129
}

fn default_chi() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UvGridSection {
    /// Defaults to the small-momenta band edge.
    #[serde(default)]
    pub v_max: Option<f64>,
    #[serde(default = "default_uv_points")]
    pub points: usize,
}

impl Default for UvGridSection {
    fn default() -> Self {
        Self {
            v_max: None,
            points: default_uv_points(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelChoice {
    #[default]
    Opa,
    /// Product amplitude `a(u)b(v)` for checking the entanglement pipeline.
    Separable,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpaRun {
    #[serde(default)]
    pub units: Option<UnitSystem>,
    pub field1: MediumParams,
    pub field2: MediumParams,
    #[serde(default = "default_chi")]
    pub chi: f64,
    pub delta: f64,
    #[serde(default)]
    pub p_max: usize,
    #[serde(default)]
    pub p: usize,
    #[serde(default)]
    pub q: usize,
    #[serde(default)]
    pub uv_grid: UvGridSection,
    #[serde(default)]
    pub small_momenta_fraction: Option<f64>,
    /// Time of the heat map and the Schmidt analysis.
    pub map_time: f64,
    /// Times of the locking-width sequence.
    #[serde(default)]
    pub width_times: Vec<f64>,
    #[serde(default)]
    pub kernel: KernelChoice,
    /// Schmidt decomposition over `(p, u) ⊗ (q, v)` for all `p, q ≤ p_max`.
    #[serde(default)]
    pub combined: bool,
}

/// Parsed configuration plus the hash identifying the run.
pub struct Loaded<T> {
    pub config: T,
    pub hash: String,
    pub units: UnitSystem,
    pub base_dir: PathBuf,
}

pub trait HasUnits {
    fn units(&self) -> Option<UnitSystem>;
}

impl HasUnits for BasisRun {
    fn units(&self) -> Option<UnitSystem> {
        self.units
    }
}

impl HasUnits for PropagateRun {
    fn units(&self) -> Option<UnitSystem> {
        self.units
    }
}

impl HasUnits for OpaRun {
    fn units(&self) -> Option<UnitSystem> {
        self.units
    }
}

/// Reads and validates the JSON schema. The hash covers the command, the
/// canonicalized document (sorted keys, no whitespace) and the unit system.
pub fn load<T>(command: &str, path: &Path, natural_units: bool) -> CliResult<Loaded<T>>
where
    T: DeserializeOwned + HasUnits,
{
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let canonical = serde_json::to_string(&value).expect("JSON values serialize");
    let config: T =
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let units = if natural_units {
        UnitSystem::Natural
    } else {
        config.units().unwrap_or(UnitSystem::Natural)
    };
    let mut hasher = Sha256::new();
    hasher.update(command.as_bytes());
    hasher.update(b"\n");
    hasher.update(canonical.as_bytes());
    hasher.update(b"\n");
    hasher.update(format!("{units:?}").as_bytes());
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(Loaded {
        config,
        hash: hex::encode(hasher.finalize()),
        units,
        base_dir,
    })
}

/// Mixes extra input bytes (e.g. a spectrum file) into a config hash.
pub fn extend_hash(hash: &str, extra: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(hash.as_bytes());
    hasher.update(extra);
    hex::encode(hasher.finalize())
}
