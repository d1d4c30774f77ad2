//! Evaluation report: a JSON document with fixed top-level keys
//! (`classification`, `segmentation`, `fusion`, `per_expert`, `fused`).
//! All numbers are doubles rounded to 10 significant digits at
//! construction, so identical runs serialize to identical bytes.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use uncertain_eval::{ConfusionAccumulator, RateReport, SegScores};

use crate::formats::FormatError;

/// Rounds to 10 significant decimal digits; keeps zeros and specials as-is.
pub fn sig10(value: f64) -> f64 {
    if value == 0.0 || !value.is_finite() {
        return value;
    }
    format!("{value:.9e}").parse().unwrap_or(value)
}

fn sig10_vec(values: &[f64]) -> Vec<f64> {
    values.iter().copied().map(sig10).collect()
}

fn sig10_matrix(matrix: &[Vec<f64>]) -> Vec<Vec<f64>> {
    matrix.iter().map(|row| sig10_vec(row)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalReport {
    /// Headline classification rates of the expert-merged evaluation.
    pub classification: Option<ClassificationSummary>,
    /// Headline segmentation scores of the expert-merged evaluation.
    pub segmentation: Option<SegmentationSummary>,
    /// Belief-fusion results (decisions and conflict statistics).
    pub fusion: Option<FusionReport>,
    /// Full per-expert breakdown.
    pub per_expert: Vec<ExpertReport>,
    /// Full expert-merged results.
    pub fused: FusedReport,
}

impl EvalReport {
    pub fn empty() -> Self {
        Self {
            classification: None,
            segmentation: None,
            fusion: None,
            per_expert: Vec::new(),
            fused: FusedReport {
                classification: None,
                segmentation: None,
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        fs::write(path, self.to_json()).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassificationSummary {
    pub mean_gcr: Option<f64>,
    pub gcr: Vec<f64>,
    pub ecr: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SegmentationSummary {
    pub wdc: f64,
    pub fd: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExpertReport {
    pub expert: usize,
    pub classification: Option<ClassificationReport>,
    pub segmentation: Option<SegmentationReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FusedReport {
    pub classification: Option<ClassificationReport>,
    pub segmentation: Option<SegmentationReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassificationReport {
    /// Units that contributed weight.
    pub units: u64,
    /// Units skipped because no pixel in them was labeled.
    pub empty_units: u64,
    /// Raw (merged, non-normalized) confusion matrix as doubles.
    pub raw: Vec<Vec<f64>>,
    pub row_totals: Vec<f64>,
    /// Row-normalized matrix; zero rows stay zero.
    pub normalized: Vec<Vec<f64>>,
    pub zero_rows: Vec<bool>,
    pub gcr: Vec<f64>,
    pub ecr: Vec<f64>,
    pub mean_gcr: Option<f64>,
    pub homogeneous: SplitReport,
    pub inhomogeneous: SplitReport,
}

/// Rates restricted to homogeneous or inhomogeneous tiles.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SplitReport {
    pub units: u64,
    pub normalized: Vec<Vec<f64>>,
    pub gcr: Vec<f64>,
    pub ecr: Vec<f64>,
    pub mean_gcr: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SegmentationReport {
    /// Pixel-count-weighted means over the per-image scores.
    pub wdc: f64,
    pub fd: f64,
    pub images: Vec<ImageSegReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ImageSegReport {
    pub name: String,
    pub wdc: f64,
    pub fd: f64,
    pub pixels: u64,
    pub found_pixels: u64,
    pub reference_pixels: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FusionReport {
    /// Bba model used by `fuse` (absent for expert-conflict runs).
    pub model: Option<String>,
    /// Mean conflict over the evaluated tiles.
    pub conflict: Option<f64>,
    /// Per-expert auto-conflict (combination of the same expert `auto_k`
    /// times), empty unless expert bbas were analyzed.
    pub auto_conflict: Vec<f64>,
    pub auto_k: Option<usize>,
    /// Tiles that contributed to the statistics.
    pub tiles: u64,
    /// Per-source likelihood normalization used by the probabilistic model.
    pub r: Vec<f64>,
    pub images: Vec<ImageFusionReport>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ImageFusionReport {
    pub name: String,
    pub mean_conflict: f64,
    /// Row-major decision grid; `null` marks undecidable tiles.
    pub decisions: Vec<Vec<Option<usize>>>,
}

impl ClassificationSummary {
    pub fn from_rates(rates: &RateReport) -> Self {
        Self {
            mean_gcr: rates.mean_gcr.map(sig10),
            gcr: sig10_vec(&rates.gcr),
            ecr: sig10_vec(&rates.ecr),
        }
    }
}

impl SplitReport {
    pub fn from_accumulator(acc: &ConfusionAccumulator) -> Self {
        let ncm = acc.normalize();
        let rates = ncm.rates();
        Self {
            units: acc.units(),
            normalized: sig10_matrix(&ncm.to_rows()),
            gcr: sig10_vec(&rates.gcr),
            ecr: sig10_vec(&rates.ecr),
            mean_gcr: rates.mean_gcr.map(sig10),
        }
    }
}

impl ClassificationReport {
    pub fn from_accumulators(
        full: &ConfusionAccumulator,
        homogeneous: &ConfusionAccumulator,
        inhomogeneous: &ConfusionAccumulator,
    ) -> Self {
        let ncm = full.normalize();
        let rates = ncm.rates();
        Self {
            units: full.units(),
            empty_units: full.empty_units(),
            raw: sig10_matrix(&full.to_f64_matrix()),
            row_totals: sig10_vec(ncm.row_totals()),
            normalized: sig10_matrix(&ncm.to_rows()),
            zero_rows: ncm.zero_rows().to_vec(),
            gcr: sig10_vec(&rates.gcr),
            ecr: sig10_vec(&rates.ecr),
            mean_gcr: rates.mean_gcr.map(sig10),
            homogeneous: SplitReport::from_accumulator(homogeneous),
            inhomogeneous: SplitReport::from_accumulator(inhomogeneous),
        }
    }

    pub fn summary(&self) -> ClassificationSummary {
        ClassificationSummary {
            mean_gcr: self.mean_gcr,
            gcr: self.gcr.clone(),
            ecr: self.ecr.clone(),
        }
    }
}

impl SegmentationReport {
    pub fn new(images: Vec<ImageSegReport>, aggregated: (f64, f64)) -> Self {
        Self {
            wdc: sig10(aggregated.0),
            fd: sig10(aggregated.1),
            images,
        }
    }

    pub fn summary(&self) -> SegmentationSummary {
        SegmentationSummary {
            wdc: self.wdc,
            fd: self.fd,
        }
    }
}

impl ImageSegReport {
    pub fn new(name: &str, scores: SegScores, found_pixels: u64, reference_pixels: u64) -> Self {
        Self {
            name: name.to_string(),
            wdc: sig10(scores.wdc),
            fd: sig10(scores.fd),
            pixels: scores.pixels,
            found_pixels,
            reference_pixels,
        }
    }
}
