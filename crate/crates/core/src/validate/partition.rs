use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::dataprep::PreparedDataset;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionMethod {
    /// Whole segments are assigned to one side.
    BySegments,
    /// Samples are assigned independently.
    ByPoints,
}

impl fmt::Display for PartitionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionMethod::BySegments => "by_segments",
            PartitionMethod::ByPoints => "by_points",
        })
    }
}

impl std::str::FromStr for PartitionMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "by_segments" | "segments" => Ok(PartitionMethod::BySegments),
            "by_points" | "points" => Ok(PartitionMethod::ByPoints),
            _ => Err(invalid(format!("unknown partition method '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionSpec {
    pub method: PartitionMethod,
    pub train_fraction: f64,
    pub seed: u64,
}

impl PartitionSpec {
    pub fn new(method: PartitionMethod, train_fraction: f64, seed: u64) -> Result<Self> {
        let s = Self {
            method,
            train_fraction,
            seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn by_points(train_fraction: f64, seed: u64) -> Result<Self> {
        Self::new(PartitionMethod::ByPoints, train_fraction, seed)
    }

    pub fn by_segments(train_fraction: f64, seed: u64) -> Result<Self> {
        Self::new(PartitionMethod::BySegments, train_fraction, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(invalid(format!(
                "training fraction {} outside (0, 1)",
                self.train_fraction
            )));
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

impl fmt::Display for PartitionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} train={} seed={}",
            self.method, self.train_fraction, self.seed
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Validation,
    Unused,
}

/// Label of every sample, indexed `[segment][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub labels: Vec<Vec<Split>>,
    pub description: String,
}

impl Partition {
    pub fn label(&self, segment: usize, i: usize) -> Split {
        self.labels[segment][i]
    }

    pub fn count(&self, split: Split) -> usize {
        self.labels
            .iter()
            .flatten()
            .filter(|s| **s == split)
            .count()
    }

    /// Share of all samples labelled `split`.
    pub fn fraction(&self, split: Split) -> f64 {
        let n: usize = self.labels.iter().map(Vec::len).sum();
        self.count(split) as f64 / n as f64
    }
}

/// Units of assignment: single samples or whole segments.
fn units(ds: &PreparedDataset, method: PartitionMethod) -> Vec<(usize, std::ops::Range<usize>)> {
    match method {
        PartitionMethod::ByPoints => ds
            .segments
            .iter()
            .enumerate()
            .flat_map(|(s, seg)| (0..seg.len()).map(move |i| (s, i..i + 1)))
            .collect(),
        PartitionMethod::BySegments => ds
            .segments
            .iter()
            .enumerate()
            .map(|(s, seg)| (s, 0..seg.len()))
            .collect(),
    }
}

/// Walks the shuffled units and assigns each to the first target it brings
/// closer to its size. Sample targets are rounded to whole samples; segment
/// targets stay fractional so the realized share is as close as one draw
/// allows.
fn assign(
    ds: &PreparedDataset,
    method: PartitionMethod,
    seed: u64,
    targets: &[(Split, f64)],
) -> Vec<Vec<Split>> {
    let mut labels: Vec<Vec<Split>> = ds
        .segments
        .iter()
        .map(|s| vec![Split::Unused; s.len()])
        .collect();
    let mut order = units(ds, method);
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = ds.len() as f64;
    let goals: Vec<f64> = targets
        .iter()
        .map(|(_, f)| match method {
            PartitionMethod::ByPoints => (f * n).round(),
            PartitionMethod::BySegments => f * n,
        })
        .collect();
    let mut filled = vec![0.0; targets.len()];
    for (s, range) in order {
        let size = range.len() as f64;
        for (t, &(split, _)) in targets.iter().enumerate() {
            if (filled[t] + size - goals[t]).abs() < (filled[t] - goals[t]).abs() {
                filled[t] += size;
                for l in &mut labels[s][range.clone()] {
                    *l = split;
                }
                break;
            }
        }
    }
    labels
}

fn check_sides(labels: &[Vec<Split>], what: &str) -> Result<()> {
    for side in [Split::Train, Split::Validation] {
        if !labels.iter().flatten().any(|l| *l == side) {
            return Err(Error::InsufficientData(format!(
                "{what}: the {side:?} side is empty"
            )));
        }
    }
    Ok(())
}

/// Seeded train/validation split covering every sample.
pub fn partition(ds: &PreparedDataset, spec: &PartitionSpec) -> Result<Partition> {
    spec.validate()?;
    let mut labels = assign(
        ds,
        spec.method,
        spec.seed,
        &[(Split::Train, spec.train_fraction)],
    );
    for l in labels.iter_mut().flatten() {
        if *l == Split::Unused {
            *l = Split::Validation;
        }
    }
    check_sides(&labels, &spec.to_string())?;
    Ok(Partition {
        labels,
        description: spec.to_string(),
    })
}

/// Split with a validation share fixed first and a training share drawn
/// from the remaining units; leftover samples are unused.
pub fn partition_with_validation(
    ds: &PreparedDataset,
    method: PartitionMethod,
    train_fraction: f64,
    validation_fraction: f64,
    seed: u64,
) -> Result<Partition> {
    if !(train_fraction > 0.0
        && validation_fraction > 0.0
        && train_fraction + validation_fraction <= 1.0 + 1e-12)
    {
        return Err(invalid(format!(
            "training {train_fraction} and validation {validation_fraction} shares are infeasible"
        )));
    }
    let labels = assign(
        ds,
        method,
        seed,
        &[
            (Split::Validation, validation_fraction),
            (Split::Train, train_fraction),
        ],
    );
    let description =
        format!("{method} train={train_fraction} validation={validation_fraction} seed={seed}");
    check_sides(&labels, &description)?;
    Ok(Partition {
        labels,
        description,
    })
}
