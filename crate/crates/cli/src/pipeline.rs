//! Dataset loading and the evaluation pipelines behind the CLI commands.
//!
//! Per-image work (accumulation, boundary scoring, per-tile fusion) runs in
//! parallel over the images; results are collected in manifest order and
//! merged sequentially, so the output is independent of the thread count.

use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use uncertain_eval::{
    accumulate_image, aggregate, appriou_bbas, auto_conflict, boundary_from_tiles, combine,
    compose_tiles, denoeux_bbas, evaluate_boundaries, expert_tile_bba, merge, split_accumulate,
    CertaintyScale, ConfusionAccumulator, Error, Frame, FusionConfig, MassFunction,
    ReferenceBoundary, SegScores, TileComposition, TilePrediction, TileScores, TileSpec,
};

use crate::formats::{self, PredictionData};
use crate::manifest::DatasetManifest;
use crate::report::{
    sig10, ClassificationReport, FusionReport, ImageFusionReport, ImageSegReport,
    SegmentationReport,
};

/// Knobs shared by the evaluation commands.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    pub scale: CertaintyScale,
    pub exponent: f64,
    pub use_certainty: bool,
}

/// One manifest image with every referenced file parsed and validated.
pub struct LoadedImage {
    pub name: String,
    pub spec: TileSpec,
    pub pixels: u64,
    /// Per-expert tile compositions, aligned with the manifest order.
    pub comps: Vec<Vec<TileComposition>>,
    pub boundaries: Vec<ReferenceBoundary>,
    pub prediction: Option<TilePrediction>,
    pub scores: Vec<TileScores>,
}

/// Parses every file the manifest references and checks dimensions, class
/// counts and grade counts against the manifest and the weight scale.
pub fn load_dataset(
    manifest: &DatasetManifest,
    base: &Path,
    n_grades: usize,
) -> Result<Vec<LoadedImage>> {
    let n_classes = manifest.classes.len();
    manifest
        .images
        .iter()
        .map(|entry| {
            let spec = TileSpec::new(entry.tile_size, entry.width, entry.height)
                .with_context(|| format!("image {:?}", entry.name))?;
            let mut comps = Vec::with_capacity(entry.labels.len());
            for file in &entry.labels {
                let map = formats::parse_label_map(&base.join(file))?;
                if map.width() != entry.width || map.height() != entry.height {
                    bail!(
                        "{}: label map is {}x{} but the manifest says {}x{}",
                        file.display(),
                        map.width(),
                        map.height(),
                        entry.width,
                        entry.height
                    );
                }
                if map.n_classes() != n_classes {
                    bail!(
                        "{}: label map declares {} classes but the manifest lists {n_classes}",
                        file.display(),
                        map.n_classes()
                    );
                }
                if map.n_grades() != n_grades {
                    bail!(
                        "{}: label map declares {} grades but {n_grades} weights were supplied",
                        file.display(),
                        map.n_grades()
                    );
                }
                comps.push(compose_tiles(&map, &spec)?);
            }
            let mut boundaries = Vec::with_capacity(entry.boundaries.len());
            for file in &entry.boundaries {
                let boundary = formats::parse_boundary(&base.join(file))?;
                if boundary.width() != entry.width || boundary.height() != entry.height {
                    bail!(
                        "{}: boundary is {}x{} but the manifest says {}x{}",
                        file.display(),
                        boundary.width(),
                        boundary.height(),
                        entry.width,
                        entry.height
                    );
                }
                if boundary.n_grades() != n_grades {
                    bail!(
                        "{}: boundary declares {} grades but {n_grades} weights were supplied",
                        file.display(),
                        boundary.n_grades()
                    );
                }
                boundaries.push(boundary);
            }
            let mut prediction = None;
            let mut scores = Vec::new();
            if let Some(file) = &entry.predictions {
                match formats::parse_predictions(
                    &base.join(file),
                    n_classes,
                    spec.tiles_x(),
                    spec.tiles_y(),
                )? {
                    PredictionData::Hard(pred) => prediction = Some(pred),
                    // A score file in the predictions slot acts as a
                    // single fusion source.
                    PredictionData::Scores(s) => scores.push(s),
                }
            }
            for file in &entry.scores {
                match formats::parse_predictions(
                    &base.join(file),
                    n_classes,
                    spec.tiles_x(),
                    spec.tiles_y(),
                )? {
                    PredictionData::Scores(s) => scores.push(s),
                    PredictionData::Hard(_) => bail!(
                        "{}: expected score vectors, found hard decisions",
                        file.display()
                    ),
                }
            }
            Ok(LoadedImage {
                name: entry.name.clone(),
                spec,
                pixels: entry.width as u64 * entry.height as u64,
                comps,
                boundaries,
                prediction,
                scores,
            })
        })
        .collect()
}

/// Hard per-tile decisions for every image, required by the evaluation
/// commands.
pub fn hard_predictions(images: &[LoadedImage]) -> Result<Vec<TilePrediction>> {
    images
        .iter()
        .map(|image| {
            image.prediction.clone().with_context(|| {
                format!(
                    "image {:?} has no hard prediction file (score files are for `fuse`)",
                    image.name
                )
            })
        })
        .collect()
}

fn n_experts(images: &[LoadedImage]) -> usize {
    images.first().map_or(0, |i| i.comps.len())
}

/// Per-expert and expert-merged classification reports. Raw matrices are
/// merged across images and experts first; normalization happens once on
/// each merged matrix.
pub fn classification_reports(
    images: &[LoadedImage],
    predictions: &[TilePrediction],
    opts: &EvalOptions,
) -> Result<(Vec<ClassificationReport>, ClassificationReport)> {
    let experts = n_experts(images);
    type Triple = (
        ConfusionAccumulator,
        ConfusionAccumulator,
        ConfusionAccumulator,
    );
    let per_image: Vec<Vec<Triple>> = images
        .par_iter()
        .zip(predictions)
        .map(|(image, pred)| {
            (0..experts)
                .map(|e| {
                    let full =
                        accumulate_image(&image.comps[e], pred, &opts.scale, opts.use_certainty)?;
                    let (hom, inhom) =
                        split_accumulate(&image.comps[e], pred, &opts.scale, opts.use_certainty)?;
                    Ok((full, hom, inhom))
                })
                .collect::<Result<Vec<Triple>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let mut expert_reports = Vec::with_capacity(experts);
    let mut expert_totals: Vec<Triple> = Vec::with_capacity(experts);
    for e in 0..experts {
        let full = merge(per_image.iter().map(|img| &img[e].0))?;
        let hom = merge(per_image.iter().map(|img| &img[e].1))?;
        let inhom = merge(per_image.iter().map(|img| &img[e].2))?;
        expert_reports.push(ClassificationReport::from_accumulators(&full, &hom, &inhom));
        expert_totals.push((full, hom, inhom));
    }
    let fused_full = merge(expert_totals.iter().map(|t| &t.0))?;
    let fused_hom = merge(expert_totals.iter().map(|t| &t.1))?;
    let fused_inhom = merge(expert_totals.iter().map(|t| &t.2))?;
    let fused = ClassificationReport::from_accumulators(&fused_full, &fused_hom, &fused_inhom);
    Ok((expert_reports, fused))
}

/// Per-expert and expert-merged segmentation reports. The found boundary is
/// extracted once per image; scores are aggregated weighted by image size,
/// the merged report weighting every (image, expert) pair.
pub fn segmentation_reports(
    images: &[LoadedImage],
    predictions: &[TilePrediction],
    opts: &EvalOptions,
) -> Result<(Vec<SegmentationReport>, SegmentationReport)> {
    let experts = n_experts(images);
    let per_image: Vec<(u64, Vec<SegScores>)> = images
        .par_iter()
        .zip(predictions)
        .map(|(image, pred)| {
            let found = boundary_from_tiles(pred, &image.spec)?;
            let scores = image
                .boundaries
                .iter()
                .map(|reference| evaluate_boundaries(&found, reference, &opts.scale, opts.exponent))
                .collect::<std::result::Result<Vec<_>, Error>>()?;
            Ok((found.len() as u64, scores))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut expert_reports = Vec::with_capacity(experts);
    for e in 0..experts {
        let images_section: Vec<ImageSegReport> = images
            .iter()
            .zip(&per_image)
            .map(|(image, (found_pixels, scores))| {
                ImageSegReport::new(
                    &image.name,
                    scores[e],
                    *found_pixels,
                    image.boundaries[e].len() as u64,
                )
            })
            .collect();
        let scores: Vec<SegScores> = per_image.iter().map(|(_, s)| s[e]).collect();
        expert_reports.push(SegmentationReport::new(images_section, aggregate(&scores)?));
    }
    // Per-image detail lives in the per-expert sections; the merged report
    // carries the aggregate over every (image, expert) pair.
    let all_scores: Vec<SegScores> = per_image
        .iter()
        .flat_map(|(_, s)| s.iter().copied())
        .collect();
    let fused = SegmentationReport::new(Vec::new(), aggregate(&all_scores)?);
    Ok((expert_reports, fused))
}

/// Bba model used to turn score vectors into mass functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FusionModel {
    /// Scores are likelihoods, normalized per source by the inverse of the
    /// largest observed value.
    Appriou,
    /// Scores are distances, attenuated by `exp(-nu * d^2)`.
    Denoeux,
}

impl FusionModel {
    pub fn name(self) -> &'static str {
        match self {
            FusionModel::Appriou => "appriou",
            FusionModel::Denoeux => "denoeux",
        }
    }
}

/// Per-tile fusion of all score sources: builds one bba per class per
/// source, combines them conjunctively and decides by maximal pignistic
/// probability. Tiles whose combination collapses onto the empty set stay
/// undecided. Returns the fusion report and the decided predictions.
pub fn fuse(
    images: &[LoadedImage],
    model: FusionModel,
    alpha: f64,
    nu: f64,
    n_classes: usize,
) -> Result<(FusionReport, Vec<TilePrediction>)> {
    let n_sources = images.first().map_or(0, |i| i.scores.len());
    if n_sources == 0 {
        bail!("fusion needs at least one score file per image");
    }
    for image in images {
        if image.scores.len() != n_sources {
            bail!(
                "image {:?} has {} score files but {:?} has {n_sources}",
                image.name,
                image.scores.len(),
                images[0].name
            );
        }
    }
    let mut config = FusionConfig::uniform(n_classes, n_sources)?;
    config.set_alpha_all(alpha)?;
    config.set_nu_all(nu)?;
    if model == FusionModel::Appriou {
        for source in 0..n_sources {
            let max_p = images
                .iter()
                .flat_map(|image| image.scores[source].values().iter().flatten())
                .flat_map(|v| v.iter().copied())
                .fold(0.0f64, f64::max);
            config
                .set_r_from_max_likelihood(source, max_p)
                .with_context(|| {
                    format!("source {source} has no positive likelihood to normalize by")
                })?;
        }
    }

    let per_image: Vec<(Vec<Option<usize>>, Vec<f64>)> = images
        .par_iter()
        .map(|image| {
            let tile_count = image.spec.tile_count();
            let mut decisions: Vec<Option<usize>> = vec![None; tile_count];
            let mut conflicts = Vec::new();
            for (tile, decision) in decisions.iter_mut().enumerate() {
                let mut bbas: Vec<MassFunction> = Vec::new();
                for source in 0..n_sources {
                    let Some(vector) = image.scores[source].get(tile) else {
                        continue;
                    };
                    let built = match model {
                        FusionModel::Appriou => appriou_bbas(&config, source, vector)?,
                        FusionModel::Denoeux => {
                            let prototypes: Vec<(usize, f64)> =
                                vector.iter().copied().enumerate().collect();
                            denoeux_bbas(&config, source, &prototypes)?
                        }
                    };
                    bbas.extend(built);
                }
                if bbas.is_empty() {
                    continue;
                }
                let combined = combine(&bbas)?;
                conflicts.push(combined.conflict());
                *decision = match combined.decide() {
                    Ok(class) => Some(class),
                    Err(Error::TotalConflict) => None,
                    Err(e) => return Err(e.into()),
                };
            }
            Ok((decisions, conflicts))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut image_reports = Vec::with_capacity(images.len());
    let mut predictions = Vec::with_capacity(images.len());
    let mut conflict_sum = 0.0;
    let mut tiles = 0u64;
    for (image, (decisions, conflicts)) in images.iter().zip(per_image) {
        let tiles_x = image.spec.tiles_x() as usize;
        let grid: Vec<Vec<Option<usize>>> =
            decisions.chunks(tiles_x).map(|row| row.to_vec()).collect();
        let mean = if conflicts.is_empty() {
            0.0
        } else {
            conflicts.iter().sum::<f64>() / conflicts.len() as f64
        };
        conflict_sum += conflicts.iter().sum::<f64>();
        tiles += conflicts.len() as u64;
        image_reports.push(ImageFusionReport {
            name: image.name.clone(),
            mean_conflict: sig10(mean),
            decisions: grid,
        });
        predictions.push(TilePrediction::new(
            image.spec.tiles_x(),
            image.spec.tiles_y(),
            n_classes,
            decisions,
        )?);
    }
    let report = FusionReport {
        model: Some(model.name().to_string()),
        conflict: (tiles > 0).then(|| sig10(conflict_sum / tiles as f64)),
        auto_conflict: Vec::new(),
        auto_k: None,
        tiles,
        r: (0..n_sources).map(|s| sig10(config.r(s))).collect(),
        images: image_reports,
    };
    Ok((report, predictions))
}

/// Conflict analysis between the experts' tile bbas: mean conflict of the
/// conjunctive combination over tiles every expert labeled, plus the mean
/// auto-conflict of each expert combined with itself `auto_k` times.
pub fn expert_conflict(
    images: &[LoadedImage],
    opts: &EvalOptions,
    n_classes: usize,
    auto_k: usize,
) -> Result<FusionReport> {
    let experts = n_experts(images);
    if experts == 0 {
        bail!("conflict analysis needs at least one expert");
    }
    if auto_k == 0 {
        bail!("auto-conflict repetition count must be at least 1");
    }
    let frame = Frame::new(n_classes)?;
    let scale = &opts.scale;

    struct ImageStats {
        conflicts: Vec<f64>,
        auto_sums: Vec<f64>,
        auto_counts: Vec<u64>,
    }
    let per_image: Vec<ImageStats> = images
        .par_iter()
        .map(|image| {
            let tile_count = image.spec.tile_count();
            let mut stats = ImageStats {
                conflicts: Vec::new(),
                auto_sums: vec![0.0; experts],
                auto_counts: vec![0; experts],
            };
            for tile in 0..tile_count {
                let mut bbas = Vec::with_capacity(experts);
                for (expert, comps) in image.comps.iter().enumerate() {
                    if comps[tile].is_empty() {
                        continue;
                    }
                    let bba = expert_tile_bba(&comps[tile], scale, frame)?;
                    stats.auto_sums[expert] += auto_conflict(&bba, auto_k)?;
                    stats.auto_counts[expert] += 1;
                    bbas.push(bba);
                }
                if bbas.len() == experts {
                    stats.conflicts.push(combine(&bbas)?.conflict());
                }
            }
            Ok(stats)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut conflict_sum = 0.0;
    let mut tiles = 0u64;
    let mut auto_sums = vec![0.0; experts];
    let mut auto_counts = vec![0u64; experts];
    let mut image_reports = Vec::with_capacity(images.len());
    for (image, stats) in images.iter().zip(per_image) {
        let mean = if stats.conflicts.is_empty() {
            0.0
        } else {
            stats.conflicts.iter().sum::<f64>() / stats.conflicts.len() as f64
        };
        image_reports.push(ImageFusionReport {
            name: image.name.clone(),
            mean_conflict: sig10(mean),
            decisions: Vec::new(),
        });
        conflict_sum += stats.conflicts.iter().sum::<f64>();
        tiles += stats.conflicts.len() as u64;
        for e in 0..experts {
            auto_sums[e] += stats.auto_sums[e];
            auto_counts[e] += stats.auto_counts[e];
        }
    }
    Ok(FusionReport {
        model: None,
        conflict: (tiles > 0).then(|| sig10(conflict_sum / tiles as f64)),
        auto_conflict: auto_sums
            .iter()
            .zip(&auto_counts)
            .map(|(sum, count)| {
                if *count == 0 {
                    0.0
                } else {
                    sig10(sum / *count as f64)
                }
            })
            .collect(),
        auto_k: Some(auto_k),
        tiles,
        r: Vec::new(),
        images: image_reports,
    })
}
