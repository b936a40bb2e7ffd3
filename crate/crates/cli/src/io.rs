use std::io::Write;
use std::path::Path;

use asv_gain::dataprep::{
    GnssFix, HeadingSample, PreparedDataset, PreparedSample, PwmSample, RawLogBundle,
};
use asv_gain::model::{BodyVelocity, Pose, PwmFrame};
use sha2::{Digest, Sha256};

use crate::config::{AngleUnit, ColumnMap};
use crate::error::{file_error, CliError, CliResult, ResultExt};

/// Writes `bytes` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).at(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).at(dir)?;
    tmp.write_all(bytes).at(path)?;
    tmp.as_file().sync_all().at(path)?;
    tmp.persist(path).map_err(|e| file_error(path, e.error))?;
    Ok(())
}

pub fn read_bytes(path: &Path) -> CliResult<Vec<u8>> {
    if !path.exists() {
        return Err(CliError::io(format!("{}: file not found", path.display())));
    }
    std::fs::read(path).at(path)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// A CSV table held in memory, with columns looked up by header name.
pub struct Table {
    path: std::path::PathBuf,
    headers: Vec<String>,
    rows: Vec<csv::StringRecord>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Self> {
        let bytes = read_bytes(path)?;
        let mut rd = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(bytes.as_slice());
        let headers = rd.headers().at(path)?.iter().map(str::to_string).collect();
        let rows = rd.records().collect::<Result<Vec<_>, _>>().at(path)?;
        Ok(Self {
            path: path.to_path_buf(),
            headers,
            rows,
        })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> CliResult<usize> {
        self.headers.iter().position(|h| h == name).ok_or_else(|| {
            CliError::io(format!(
                "{}: missing column '{name}' (found: {})",
                self.path.display(),
                self.headers.join(", ")
            ))
        })
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.headers.iter().any(|h| h == name)
    }

    /// Values of one column, parsed.
    pub fn parse<T: std::str::FromStr>(&self, name: &str) -> CliResult<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let c = self.column(name)?;
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let field = r.get(c).unwrap_or("");
                field.parse::<T>().map_err(|e| {
                    CliError::io(format!(
                        "{}: row {}, column '{name}': '{field}': {e}",
                        self.path.display(),
                        i + 2
                    ))
                })
            })
            .collect()
    }
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)
        .map_err(|e| CliError::io(e.to_string()))?;
    for r in rows {
        w.write_record(&r)
            .map_err(|e| CliError::io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::io(e.to_string()))
}

/// Writes a CSV file atomically.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> CliResult<()> {
    write_atomic(path, &csv_bytes(header, rows)?)
}

/// Reads the three raw logs of a directory.
pub fn read_raw_logs(dir: &Path, cols: &ColumnMap) -> CliResult<RawLogBundle> {
    let g = Table::read(&dir.join("gnss.csv"))?;
    let hd = Table::read(&dir.join("heading.csv"))?;
    let p = Table::read(&dir.join("pwm.csv"))?;
    let (gt, lat, lon) = (
        g.parse::<f64>(&cols.gnss_t)?,
        g.parse::<f64>(&cols.lat)?,
        g.parse::<f64>(&cols.lon)?,
    );
    let scale = if cols.heading_unit == AngleUnit::Deg {
        std::f64::consts::PI / 180.0
    } else {
        1.0
    };
    let (ht, psi) = (
        hd.parse::<f64>(&cols.heading_t)?,
        hd.parse::<f64>(&cols.psi)?,
    );
    let (pt, pl, pr) = (
        p.parse::<f64>(&cols.pwm_t)?,
        p.parse::<f64>(&cols.pwm_l)?,
        p.parse::<f64>(&cols.pwm_r)?,
    );
    Ok(RawLogBundle {
        gnss: (0..g.len())
            .map(|i| GnssFix {
                t: gt[i],
                lat: lat[i],
                lon: lon[i],
            })
            .collect(),
        heading: (0..hd.len())
            .map(|i| HeadingSample {
                t: ht[i],
                psi: psi[i] * scale,
            })
            .collect(),
        pwm: (0..p.len())
            .map(|i| PwmSample {
                t: pt[i],
                pwm_l: pl[i],
                pwm_r: pr[i],
            })
            .collect(),
    })
}

/// Writes the three raw logs with the default column names.
pub fn write_raw_logs(dir: &Path, raw: &RawLogBundle) -> CliResult<()> {
    write_csv(
        &dir.join("gnss.csv"),
        &["t", "lat", "lon"],
        raw.gnss
            .iter()
            .map(|s| vec![s.t.to_string(), s.lat.to_string(), s.lon.to_string()]),
    )?;
    write_csv(
        &dir.join("heading.csv"),
        &["t", "psi"],
        raw.heading
            .iter()
            .map(|s| vec![s.t.to_string(), s.psi.to_string()]),
    )?;
    write_csv(
        &dir.join("pwm.csv"),
        &["t", "pwm_l", "pwm_r"],
        raw.pwm
            .iter()
            .map(|s| vec![s.t.to_string(), s.pwm_l.to_string(), s.pwm_r.to_string()]),
    )
}

const DATASET_HEADER: [&str; 14] = [
    "t",
    "segment",
    "k",
    "u",
    "v",
    "r",
    "delta_mean",
    "delta_diff",
    "region",
    "delta_l",
    "delta_r",
    "x",
    "y",
    "psi",
];

/// Prepared dataset as one row per sample. Floats are written in their
/// shortest round-trip form, so reading the file back is lossless.
pub fn write_dataset(path: &Path, ds: &PreparedDataset) -> CliResult<()> {
    let rows = ds.samples().map(|(s, _, p)| {
        vec![
            p.t.to_string(),
            s.to_string(),
            p.k.to_string(),
            p.nu.u.to_string(),
            p.nu.v.to_string(),
            p.nu.r.to_string(),
            p.frame.delta_mean().to_string(),
            p.frame.delta_diff().to_string(),
            p.region().to_string(),
            p.frame.delta_l().to_string(),
            p.frame.delta_r().to_string(),
            p.pose.x.to_string(),
            p.pose.y.to_string(),
            p.pose.psi.to_string(),
        ]
    });
    write_csv(path, &DATASET_HEADER, rows)
}

/// Reads a prepared dataset. The sampling period is the one configured;
/// `region` is recomputed from the PWM columns. The per-propeller and pose
/// columns are optional; without the former the frame is rebuilt from the
/// mean and difference.
pub fn read_dataset(path: &Path, h: f64) -> CliResult<PreparedDataset> {
    let tb = Table::read(path)?;
    if tb.is_empty() {
        return Err(CliError::io(format!("{}: no samples", path.display())));
    }
    let t = tb.parse::<f64>("t")?;
    let seg = tb.parse::<usize>("segment")?;
    let k = tb.parse::<i64>("k")?;
    let (u, v, r) = (
        tb.parse::<f64>("u")?,
        tb.parse::<f64>("v")?,
        tb.parse::<f64>("r")?,
    );
    let (dm, dd) = (
        tb.parse::<f64>("delta_mean")?,
        tb.parse::<f64>("delta_diff")?,
    );
    let lr: Option<[Vec<f64>; 2]> = if tb.has_column("delta_l") && tb.has_column("delta_r") {
        Some([tb.parse("delta_l")?, tb.parse("delta_r")?])
    } else {
        None
    };
    let pose_cols = ["x", "y", "psi"];
    let pose: Option<[Vec<f64>; 3]> = if pose_cols.iter().all(|c| tb.has_column(c)) {
        Some([tb.parse("x")?, tb.parse("y")?, tb.parse("psi")?])
    } else {
        None
    };
    let mut segments: Vec<Vec<PreparedSample>> = Vec::new();
    for i in 0..tb.len() {
        if seg[i] == segments.len() {
            segments.push(Vec::new());
        } else if seg[i] + 1 != segments.len() {
            return Err(CliError::io(format!(
                "{}: row {}, column 'segment': segments must be numbered 0, 1, 2, ... in order",
                path.display(),
                i + 2
            )));
        }
        let frame = match &lr {
            Some([l, r]) => PwmFrame::new(l[i], r[i]),
            None => PwmFrame::from_mean_diff(dm[i], dd[i]),
        }
        .map_err(|e| CliError::io(format!("{}: row {}: {e}", path.display(), i + 2)))?;
        let pose = pose.as_ref().map_or(Pose::default(), |p| Pose {
            x: p[0][i],
            y: p[1][i],
            psi: p[2][i],
        });
        segments[seg[i]].push(PreparedSample {
            t: t[i],
            k: k[i],
            nu: BodyVelocity {
                u: u[i],
                v: v[i],
                r: r[i],
            },
            frame,
            pose,
        });
    }
    PreparedDataset::new(segments, h).map_err(|e| file_error(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_round_trip_is_lossless() {
        let gt = asv_gain::synth::GroundTruth::default();
        let cfg = asv_gain::synth::DiscreteGenConfig {
            steps: 50,
            segments: 3,
            ..Default::default()
        };
        let ds = asv_gain::synth::generate_discrete(&gt, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        write_dataset(&p, &ds).unwrap();
        assert_eq!(read_dataset(&p, ds.h).unwrap(), ds);
    }

    #[test]
    fn missing_column_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pwm.csv");
        std::fs::write(&p, "t,left\n0,1500\n").unwrap();
        let e = Table::read(&p).unwrap().parse::<f64>("pwm_l").unwrap_err();
        assert!(e.message.contains("'pwm_l'"), "{e}");
    }
}
