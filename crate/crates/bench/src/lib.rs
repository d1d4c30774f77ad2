//! Input builders shared by the benchmark targets.

use uncertain_eval::{
    appriou_bbas, boundary_from_tiles, compose_tiles, CertaintyScale, FoundBoundary, FusionConfig,
    MassFunction, ReferenceBoundary, TileComposition, TilePrediction, TileSpec,
};
use uncertain_eval_cli::cli::parse_rational;
use uncertain_eval_cli::synth::{synth, SynthParams};

pub fn sonar_scale() -> CertaintyScale {
    CertaintyScale::new(vec![
        ("sure", parse_rational("2/3").unwrap()),
        ("moderately_sure", parse_rational("1/2").unwrap()),
        ("not_sure", parse_rational("1/3").unwrap()),
    ])
    .unwrap()
}

/// A 256x256 synthetic image: found boundary from noisy predictions plus
/// the expert reference boundary.
pub fn boundary_instance() -> (FoundBoundary, ReferenceBoundary) {
    let params = SynthParams {
        seed: 9,
        width: 256,
        height: 256,
        n_classes: 5,
        n_grades: 3,
        tile: 16,
        noise: 0.15,
        experts: 1,
        sources: 0,
    };
    let image = synth(&params).unwrap();
    let spec = TileSpec::new(params.tile, params.width, params.height).unwrap();
    let found = boundary_from_tiles(&image.prediction, &spec).unwrap();
    (found, image.boundaries.into_iter().next().unwrap())
}

/// Tile compositions and predictions of a 256x256 image, for the
/// accumulate/normalize pipeline.
pub fn classification_instance() -> (Vec<TileComposition>, TilePrediction) {
    let params = SynthParams {
        seed: 10,
        width: 256,
        height: 256,
        n_classes: 5,
        n_grades: 3,
        tile: 16,
        noise: 0.2,
        experts: 1,
        sources: 0,
    };
    let image = synth(&params).unwrap();
    let spec = TileSpec::new(params.tile, params.width, params.height).unwrap();
    (
        compose_tiles(&image.labels[0], &spec).unwrap(),
        image.prediction,
    )
}

/// The per-class bbas of four sources over six classes, ready to fold.
pub fn fusion_instance() -> Vec<MassFunction> {
    let n_classes = 6;
    let n_sources = 4;
    let config = FusionConfig::uniform(n_classes, n_sources).unwrap();
    let mut bbas = Vec::new();
    for source in 0..n_sources {
        let p: Vec<f64> = (0..n_classes)
            .map(|i| 0.05 + 0.9 * ((source + i) % n_classes) as f64 / n_classes as f64)
            .collect();
        bbas.extend(appriou_bbas(&config, source, &p).unwrap());
    }
    bbas
}
