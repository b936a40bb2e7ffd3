use std::path::{Path, PathBuf};

use asv_gain::dataprep::{GeoReference, PrepConfig};
use asv_gain::model::ModelKind;
use asv_gain::synth::{DisturbanceMode, Excitation, GroundTruth, LogConfig};
use asv_gain::validate::{PartitionMethod, PartitionSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, ResultExt};

/// Everything a command needs besides its input files. Loaded from TOML;
/// every field has a default so an empty file is a valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Sampling period, s.
    pub h: f64,
    /// Root of all randomness: partitions, excitation and sensor noise.
    pub seed: u64,
    pub kind: ModelKind,
    pub paths: Paths,
    pub geo: GeoConfig,
    pub prep: PrepConfig,
    pub columns: ColumnMap,
    pub partition: PartitionConfig,
    pub simulate: SimulateConfig,
    pub report: ReportConfig,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            h: asv_gain::model::InertiaLayout::DEFAULT_H,
            seed: 0,
            kind: ModelKind::Static,
            paths: Paths::default(),
            geo: GeoConfig::default(),
            prep: PrepConfig::default(),
            columns: ColumnMap::default(),
            partition: PartitionConfig::default(),
            simulate: SimulateConfig::default(),
            report: ReportConfig::default(),
            base: PathBuf::from("."),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    /// Output directory of every command.
    pub out: PathBuf,
    /// Directory holding `gnss.csv`, `heading.csv` and `pwm.csv`;
    /// defaults to the output directory.
    pub logs: Option<PathBuf>,
    /// Prepared dataset; defaults to `prepared.csv` in the output directory.
    pub dataset: Option<PathBuf>,
    /// Model evaluated by `validate`. Without it `validate` identifies on
    /// the training side of the configured partition.
    pub model: Option<PathBuf>,
}

impl Default for Paths {
    fn default() -> Self {
        Self {
            out: PathBuf::from("out"),
            logs: None,
            dataset: None,
            model: None,
        }
    }
}

/// Local tangent-plane origin and antenna placement. Without an origin the
/// first GNSS fix is used.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeoConfig {
    pub lat0: Option<f64>,
    pub lon0: Option<f64>,
    /// Antenna position in the body frame, forward and starboard, m.
    pub antenna_offset: [f64; 2],
}

impl GeoConfig {
    pub fn reference(&self, first_fix: Option<(f64, f64)>) -> CliResult<GeoReference> {
        let (lat, lon) = match (self.lat0, self.lon0, first_fix) {
            (Some(lat), Some(lon), _) => (lat, lon),
            (None, None, Some(fix)) => fix,
            (None, None, None) => (0.0, 0.0),
            _ => return Err(CliError::io("geo: set both lat0 and lon0 or neither")),
        };
        Ok(GeoReference::new(lat, lon, self.antenna_offset)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AngleUnit {
    #[default]
    Rad,
    Deg,
}

/// Column names of the three raw logs, for logs written by other tools.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub gnss_t: String,
    pub lat: String,
    pub lon: String,
    pub heading_t: String,
    pub psi: String,
    pub heading_unit: AngleUnit,
    pub pwm_t: String,
    pub pwm_l: String,
    pub pwm_r: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            gnss_t: "t".into(),
            lat: "lat".into(),
            lon: "lon".into(),
            heading_t: "t".into(),
            psi: "psi".into(),
            heading_unit: AngleUnit::Rad,
            pwm_t: "t".into(),
            pwm_l: "pwm_l".into(),
            pwm_r: "pwm_r".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionConfig {
    pub method: PartitionMethod,
    pub train_fraction: f64,
    /// Fixed validation share; the rest of the data is then unused.
    pub validation_fraction: Option<f64>,
    /// Seeded repetitions of the split; 2 or more adds a sensitivity study.
    pub repetitions: usize,
    /// Training shares evaluated against one fixed validation share.
    pub sweep: Vec<f64>,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            method: PartitionMethod::ByPoints,
            train_fraction: 0.7,
            validation_fraction: None,
            repetitions: 1,
            sweep: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// RK4 integration of the full model, sampled by simulated sensors.
    #[default]
    Continuous,
    /// The lumped discrete model itself, written as a prepared dataset.
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub generator: Generator,
    pub duration_s: f64,
    pub truth: GroundTruth,
    /// Propeller lag used when the run asks for a dynamic model.
    pub propeller_alpha: f64,
    pub propeller_beta: f64,
    /// Defaults to slow sinusoids for the continuous generator and to the
    /// seeded PRBS for the discrete one.
    pub excitation: Option<Excitation>,
    pub substeps: usize,
    pub logs: LogConfig,
    pub segments: usize,
    pub noise_std: [f64; 3],
    pub disturbance: DisturbanceMode,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            generator: Generator::Continuous,
            duration_s: 600.0,
            truth: GroundTruth::default(),
            propeller_alpha: 0.9,
            propeller_beta: 0.1,
            excitation: None,
            substeps: 20,
            logs: LogConfig::default(),
            segments: 1,
            noise_std: [0.0; 3],
            disturbance: DisturbanceMode::FullFossen,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportConfig {
    /// Metrics files to render; defaults to those found in the output
    /// directory.
    pub inputs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).at(path)?;
        let mut cfg: RunConfig = toml::from_str(&text).at(path)?;
        cfg.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    /// Command-line flags take precedence over the file.
    pub fn apply_overrides(
        &mut self,
        kind: Option<ModelKind>,
        seed: Option<u64>,
        out: Option<PathBuf>,
    ) {
        if let Some(k) = kind {
            self.kind = k;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
        if let Some(o) = out {
            // Flags are relative to the working directory, not the file.
            self.paths.out = std::env::current_dir().map(|d| d.join(&o)).unwrap_or(o);
        }
        self.prep.h = self.h;
        self.simulate.truth.h = self.h;
        self.simulate.logs.seed = self.seed;
    }

    pub fn validate(&self) -> CliResult<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(CliError::io(format!(
                "config: h must be positive, got {}",
                self.h
            )));
        }
        self.prep
            .validate()
            .map_err(|e| CliError::io(format!("config: {e}")))?;
        self.partition_spec()?;
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.paths.out)
    }

    pub fn out_file(&self, name: &str) -> PathBuf {
        self.out_dir().join(name)
    }

    pub fn logs_dir(&self) -> PathBuf {
        self.paths
            .logs
            .as_ref()
            .map_or_else(|| self.out_dir(), |p| self.resolve(p))
    }

    pub fn dataset_path(&self) -> PathBuf {
        self.paths
            .dataset
            .as_ref()
            .map_or_else(|| self.out_file("prepared.csv"), |p| self.resolve(p))
    }

    pub fn partition_spec(&self) -> CliResult<PartitionSpec> {
        PartitionSpec::new(
            self.partition.method,
            self.partition.train_fraction,
            self.seed,
        )
        .map_err(|e| CliError::io(format!("config: partition: {e}")))
    }

    /// The effective configuration as canonical bytes, for hashing.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).unwrap_or_default()
    }

    pub fn default_excitation(&self) -> Excitation {
        match (&self.simulate.excitation, self.simulate.generator) {
            (Some(e), _) => e.clone(),
            (None, Generator::Continuous) => Excitation::smooth(),
            (None, Generator::Discrete) => Excitation::prbs(self.seed),
        }
    }
}
