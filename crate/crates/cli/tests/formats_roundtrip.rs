//! Write-then-parse round trips for the three dataset formats.

use proptest::prelude::*;
use tempfile::tempdir;

use uncertain_eval::{
    BoundaryPixel, CellLabel, PixelLabelMap, ReferenceBoundary, TilePrediction, TileScores,
};
use uncertain_eval_cli::formats::{
    parse_boundary, parse_label_map, parse_predictions, write_boundary, write_hard_predictions,
    write_label_map, write_scores, PredictionData,
};

const N_CLASSES: usize = 4;
const N_GRADES: usize = 3;

fn label_map_strategy() -> impl Strategy<Value = PixelLabelMap> {
    (1u32..=12, 1u32..=12).prop_flat_map(|(w, h)| {
        proptest::collection::vec(
            proptest::option::of((0..N_CLASSES, 0..N_GRADES)),
            (w * h) as usize,
        )
        .prop_map(move |cells| {
            let cells = cells
                .into_iter()
                .map(|c| c.map(|(class, grade)| CellLabel { class, grade }))
                .collect();
            PixelLabelMap::new(w, h, N_CLASSES, N_GRADES, cells).unwrap()
        })
    })
}

fn boundary_strategy() -> impl Strategy<Value = ReferenceBoundary> {
    (1u32..=32, 1u32..=32).prop_flat_map(|(w, h)| {
        proptest::collection::btree_map((0..w, 0..h), 0..N_GRADES, 0..=40).prop_map(move |pixels| {
            ReferenceBoundary::new(
                w,
                h,
                N_GRADES,
                pixels
                    .into_iter()
                    .map(|((x, y), grade)| BoundaryPixel { x, y, grade })
                    .collect(),
            )
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn label_map_round_trips(map in label_map_strategy()) {
        let dir = tempdir().unwrap();
        let path = dir.path().join("map.lbl");
        write_label_map(&path, &map).unwrap();
        let parsed = parse_label_map(&path).unwrap();
        prop_assert_eq!(parsed, map);
    }

    #[test]
    fn boundary_round_trips(boundary in boundary_strategy()) {
        let dir = tempdir().unwrap();
        let path = dir.path().join("b.bnd");
        write_boundary(&path, &boundary).unwrap();
        let parsed = parse_boundary(&path).unwrap();
        prop_assert_eq!(parsed, boundary);
    }

    #[test]
    fn hard_predictions_round_trip(
        (tx, ty, classes) in (1u32..=8, 1u32..=8).prop_flat_map(|(tx, ty)| {
            (
                Just(tx),
                Just(ty),
                proptest::collection::vec(
                    proptest::option::of(0..N_CLASSES),
                    (tx * ty) as usize,
                ),
            )
        })
    ) {
        let pred = TilePrediction::new(tx, ty, N_CLASSES, classes).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("p.csv");
        write_hard_predictions(&path, &pred).unwrap();
        match parse_predictions(&path, N_CLASSES, tx, ty).unwrap() {
            PredictionData::Hard(parsed) => prop_assert_eq!(parsed, pred),
            PredictionData::Scores(_) => prop_assert!(false, "mode flipped to scores"),
        }
    }

    #[test]
    fn score_predictions_round_trip(
        (tx, ty, values) in (1u32..=6, 1u32..=6).prop_flat_map(|(tx, ty)| {
            (
                Just(tx),
                Just(ty),
                proptest::collection::vec(
                    proptest::option::of(proptest::collection::vec(0.0f64..10.0, N_CLASSES)),
                    (tx * ty) as usize,
                )
                // A grid with no score rows writes a header-only file,
                // which parses back in hard mode by definition.
                .prop_filter("at least one scored tile", |v| v.iter().any(Option::is_some)),
            )
        })
    ) {
        let scores = TileScores::new(tx, ty, N_CLASSES, values).unwrap();
        let dir = tempdir().unwrap();
        let path = dir.path().join("s.csv");
        write_scores(&path, &scores).unwrap();
        match parse_predictions(&path, N_CLASSES, tx, ty).unwrap() {
            PredictionData::Scores(parsed) => prop_assert_eq!(parsed, scores),
            PredictionData::Hard(_) => prop_assert!(false, "mode flipped to hard"),
        }
    }
}
