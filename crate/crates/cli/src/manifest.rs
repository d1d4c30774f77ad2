//! Dataset manifest: one JSON file naming the class labels and, per image,
//! the per-expert label and boundary files, the prediction (or score)
//! files, the image dimensions and the tile size. Paths are relative to
//! the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use uncertain_eval::ClassSet;

use crate::formats::FormatError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetManifest {
    /// Class labels; positions are the class ids used everywhere else.
    pub classes: Vec<String>,
    pub images: Vec<ImageEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ImageEntry {
    pub name: String,
    pub width: u32,
    pub height: u32,
    pub tile_size: u32,
    /// One label map per expert.
    pub labels: Vec<PathBuf>,
    /// One boundary file per expert, aligned with `labels`.
    pub boundaries: Vec<PathBuf>,
    /// Hard or score predictions from a single classifier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predictions: Option<PathBuf>,
    /// Score files, one per source, for belief fusion.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scores: Vec<PathBuf>,
}

impl DatasetManifest {
    /// Loads and validates a manifest; returns it with its base directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf), FormatError> {
        let text = fs::read_to_string(path).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let manifest: DatasetManifest =
            serde_json::from_str(&text).map_err(|e| FormatError::Invalid {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?;
        let base = path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .to_path_buf();
        manifest.validate(&path.display().to_string(), &base)?;
        Ok((manifest, base))
    }

    /// The manifest's classes as a validated class set.
    pub fn class_set(&self) -> Result<ClassSet, FormatError> {
        ClassSet::new(self.classes.clone()).map_err(|e| FormatError::Invalid {
            path: "manifest".into(),
            msg: e.to_string(),
        })
    }

    fn validate(&self, path: &str, base: &Path) -> Result<(), FormatError> {
        let invalid = |msg: String| FormatError::Invalid {
            path: path.to_string(),
            msg,
        };
        ClassSet::new(self.classes.clone()).map_err(|e| invalid(e.to_string()))?;
        if self.images.is_empty() {
            return Err(invalid("manifest lists no images".into()));
        }
        let experts = self.images[0].labels.len();
        for image in &self.images {
            if image.labels.is_empty() {
                return Err(invalid(format!(
                    "image {:?} has no label files",
                    image.name
                )));
            }
            if image.labels.len() != experts {
                return Err(invalid(format!(
                    "image {:?} has {} experts but {:?} has {experts}",
                    image.name,
                    image.labels.len(),
                    self.images[0].name
                )));
            }
            if image.boundaries.len() != image.labels.len() {
                return Err(invalid(format!(
                    "image {:?} has {} label files but {} boundary files",
                    image.name,
                    image.labels.len(),
                    image.boundaries.len()
                )));
            }
            if image.width == 0 || image.height == 0 || image.tile_size == 0 {
                return Err(invalid(format!(
                    "image {:?} has degenerate dimensions or tile size",
                    image.name
                )));
            }
            for file in image
                .labels
                .iter()
                .chain(&image.boundaries)
                .chain(&image.predictions)
                .chain(&image.scores)
            {
                let resolved = base.join(file);
                if !resolved.is_file() {
                    return Err(invalid(format!(
                        "image {:?} references missing file {}",
                        image.name,
                        resolved.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_experts(&self) -> usize {
        self.images.first().map_or(0, |i| i.labels.len())
    }

    pub fn save(&self, path: &Path) -> Result<(), FormatError> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(path, text).map_err(|e| FormatError::Io {
            path: path.display().to_string(),
            source: e,
        })
    }
}
