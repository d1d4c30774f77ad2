//! Deterministic synthetic datasets: Voronoi-style class regions, the
//! region frontiers as reference boundaries, and tile-majority predictions
//! degraded by a configurable flip probability. Everything is driven by a
//! seeded ChaCha generator, so a seed fully determines the dataset.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uncertain_eval::{
    compose_tiles, BoundaryPixel, CellLabel, Error, PixelLabelMap, ReferenceBoundary, Result,
    TilePrediction, TileScores, TileSpec,
};

use crate::formats::{self, FormatError};
use crate::manifest::{DatasetManifest, ImageEntry};

#[derive(Debug, Clone, Copy)]
pub struct SynthParams {
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub n_classes: usize,
    pub n_grades: usize,
    pub tile: u32,
    /// Probability that a tile's predicted class is flipped to another one.
    pub noise: f64,
    /// Number of expert variants; expert 0 is the base truth, the others
    /// jitter the region sites and re-draw grades.
    pub experts: usize,
    /// Number of score files (classifier sources) to synthesize.
    pub sources: usize,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            seed: 0,
            width: 64,
            height: 64,
            n_classes: 3,
            n_grades: 3,
            tile: 8,
            noise: 0.1,
            experts: 1,
            sources: 0,
        }
    }
}

/// One synthesized image with per-expert truths and classifier outputs.
#[derive(Debug, Clone)]
pub struct SynthImage {
    pub labels: Vec<PixelLabelMap>,
    pub boundaries: Vec<ReferenceBoundary>,
    pub prediction: TilePrediction,
    pub scores: Vec<TileScores>,
}

#[derive(Debug, Clone, Copy)]
struct Site {
    x: f64,
    y: f64,
    class: usize,
    grade: usize,
}

fn validate(params: &SynthParams) -> Result<()> {
    if params.width == 0 || params.height == 0 {
        return Err(Error::DimensionMismatch(format!(
            "degenerate image dimensions {}x{}",
            params.width, params.height
        )));
    }
    if params.n_classes < 2 {
        return Err(Error::InvalidArgument("need at least 2 classes".into()));
    }
    if params.n_grades == 0 {
        return Err(Error::InvalidArgument("need at least 1 grade".into()));
    }
    if params.tile == 0 {
        return Err(Error::InvalidArgument("tile size must be positive".into()));
    }
    if !(0.0..=1.0).contains(&params.noise) {
        return Err(Error::InvalidArgument(format!(
            "noise must be in [0, 1], got {}",
            params.noise
        )));
    }
    if params.experts == 0 {
        return Err(Error::InvalidArgument("need at least 1 expert".into()));
    }
    Ok(())
}

fn label_map_from_sites(
    sites: &[Site],
    width: u32,
    height: u32,
    n_classes: usize,
    n_grades: usize,
) -> Result<PixelLabelMap> {
    let mut cells = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height {
        for x in 0..width {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (i, site) in sites.iter().enumerate() {
                let dx = site.x - x as f64;
                let dy = site.y - y as f64;
                let d = dx * dx + dy * dy;
                if d < best_d {
                    best_d = d;
                    best = i;
                }
            }
            cells.push(Some(CellLabel {
                class: sites[best].class,
                grade: sites[best].grade,
            }));
        }
    }
    PixelLabelMap::new(width, height, n_classes, n_grades, cells)
}

/// Frontier pixels: a pixel whose right or lower neighbor carries a
/// different class. The pixel keeps its own grade.
fn boundary_from_labels(map: &PixelLabelMap) -> Result<ReferenceBoundary> {
    let mut pixels = Vec::new();
    for y in 0..map.height() {
        for x in 0..map.width() {
            let Some(here) = map.get(x, y)? else { continue };
            let right = if x + 1 < map.width() {
                map.get(x + 1, y)?
            } else {
                None
            };
            let below = if y + 1 < map.height() {
                map.get(x, y + 1)?
            } else {
                None
            };
            let frontier = right.is_some_and(|c| c.class != here.class)
                || below.is_some_and(|c| c.class != here.class);
            if frontier {
                pixels.push(BoundaryPixel {
                    x,
                    y,
                    grade: here.grade,
                });
            }
        }
    }
    ReferenceBoundary::new(map.width(), map.height(), map.n_grades(), pixels)
}

/// Majority class per tile (ties to the smallest class id); empty tiles
/// stay unclassified.
pub fn majority_prediction(map: &PixelLabelMap, spec: &TileSpec) -> Result<TilePrediction> {
    let comps = compose_tiles(map, spec)?;
    let classes = comps
        .iter()
        .map(|comp| {
            let mut counts = vec![0u64; map.n_classes()];
            for entry in comp.entries() {
                counts[entry.class] += entry.count;
            }
            counts
                .iter()
                .enumerate()
                .filter(|(_, c)| **c > 0)
                .max_by_key(|(class, c)| (**c, std::cmp::Reverse(*class)))
                .map(|(class, _)| class)
        })
        .collect();
    TilePrediction::new(spec.tiles_x(), spec.tiles_y(), map.n_classes(), classes)
}

/// Generates one image. The same seed always produces the same output.
pub fn synth(params: &SynthParams) -> Result<SynthImage> {
    validate(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n_sites = params.n_classes * 2;
    let base_sites: Vec<Site> = (0..n_sites)
        .map(|i| Site {
            x: rng.random_range(0.0..params.width as f64),
            y: rng.random_range(0.0..params.height as f64),
            // Every class owns at least one site.
            class: if i < params.n_classes {
                i
            } else {
                rng.random_range(0..params.n_classes)
            },
            grade: rng.random_range(0..params.n_grades),
        })
        .collect();

    let mut labels = Vec::with_capacity(params.experts);
    let mut boundaries = Vec::with_capacity(params.experts);
    for expert in 0..params.experts {
        let sites: Vec<Site> = if expert == 0 {
            base_sites.clone()
        } else {
            base_sites
                .iter()
                .map(|site| Site {
                    x: (site.x + rng.random_range(-2.0..=2.0))
                        .clamp(0.0, params.width as f64 - 1.0),
                    y: (site.y + rng.random_range(-2.0..=2.0))
                        .clamp(0.0, params.height as f64 - 1.0),
                    class: site.class,
                    grade: rng.random_range(0..params.n_grades),
                })
                .collect()
        };
        let map = label_map_from_sites(
            &sites,
            params.width,
            params.height,
            params.n_classes,
            params.n_grades,
        )?;
        boundaries.push(boundary_from_labels(&map)?);
        labels.push(map);
    }

    let spec = TileSpec::new(params.tile, params.width, params.height)?;
    let truth = majority_prediction(&labels[0], &spec)?;
    let classes = truth
        .classes()
        .iter()
        .map(|tile| {
            tile.map(|class| {
                if params.noise > 0.0 && rng.random_range(0.0..1.0) < params.noise {
                    let offset = rng.random_range(1..params.n_classes);
                    (class + offset) % params.n_classes
                } else {
                    class
                }
            })
        })
        .collect();
    let prediction =
        TilePrediction::new(spec.tiles_x(), spec.tiles_y(), params.n_classes, classes)?;

    let mut scores = Vec::with_capacity(params.sources);
    for _ in 0..params.sources {
        let values = truth
            .classes()
            .iter()
            .map(|tile| {
                tile.map(|class| {
                    (0..params.n_classes)
                        .map(|i| {
                            let base = rng.random_range(0.02..0.25);
                            if i == class {
                                base + 0.75 * (1.0 - params.noise * rng.random_range(0.0..1.0))
                            } else {
                                base
                            }
                        })
                        .collect()
                })
            })
            .collect();
        scores.push(TileScores::new(
            spec.tiles_x(),
            spec.tiles_y(),
            params.n_classes,
            values,
        )?);
    }

    Ok(SynthImage {
        labels,
        boundaries,
        prediction,
        scores,
    })
}

/// Writes `n_images` synthesized images (seeds `seed..seed + n_images`)
/// plus a manifest into `dir`; returns the manifest path.
pub fn write_dataset(
    dir: &Path,
    params: &SynthParams,
    n_images: usize,
) -> std::result::Result<PathBuf, FormatError> {
    let as_format_err = |e: Error| FormatError::Invalid {
        path: dir.display().to_string(),
        msg: e.to_string(),
    };
    if n_images == 0 {
        return Err(FormatError::Invalid {
            path: dir.display().to_string(),
            msg: "need at least one image".into(),
        });
    }
    std::fs::create_dir_all(dir).map_err(|e| FormatError::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let mut images = Vec::with_capacity(n_images);
    for index in 0..n_images {
        let image_params = SynthParams {
            seed: params.seed + index as u64,
            ..*params
        };
        let image = synth(&image_params).map_err(as_format_err)?;
        let name = format!("img{index}");
        let mut labels = Vec::new();
        let mut boundaries = Vec::new();
        for (expert, (map, boundary)) in image.labels.iter().zip(&image.boundaries).enumerate() {
            let label_file = PathBuf::from(format!("{name}_e{expert}.lbl"));
            let boundary_file = PathBuf::from(format!("{name}_e{expert}.bnd"));
            formats::write_label_map(&dir.join(&label_file), map)?;
            formats::write_boundary(&dir.join(&boundary_file), boundary)?;
            labels.push(label_file);
            boundaries.push(boundary_file);
        }
        let prediction_file = PathBuf::from(format!("{name}.csv"));
        formats::write_hard_predictions(&dir.join(&prediction_file), &image.prediction)?;
        let mut score_files = Vec::new();
        for (source, scores) in image.scores.iter().enumerate() {
            let file = PathBuf::from(format!("{name}_src{source}.csv"));
            formats::write_scores(&dir.join(&file), scores)?;
            score_files.push(file);
        }
        images.push(ImageEntry {
            name,
            width: params.width,
            height: params.height,
            tile_size: params.tile,
            labels,
            boundaries,
            predictions: Some(prediction_file),
            scores: score_files,
        });
    }
    let manifest = DatasetManifest {
        classes: (0..params.n_classes).map(|c| format!("class{c}")).collect(),
        images,
    };
    let manifest_path = dir.join("manifest.json");
    manifest.save(&manifest_path)?;
    Ok(manifest_path)
}
