//! Evaluation of tiled image classification and of the segmentation it
//! induces, when the ground truth comes from multiple experts with per-pixel
//! certainty grades; plus belief-function fusion of classifier outputs.
//!
//! The crate has four parts:
//!
//! - [`model`]: class sets, certainty scales, pixel label maps, reference
//!   boundaries, tiling and per-tile compositions.
//! - [`classification`]: certainty-weighted confusion matrices, their
//!   row-normalized form and the good/error classification rate vectors,
//!   with exact-rational accumulation and an additive merge across images
//!   and experts.
//! - [`segmentation`]: boundary extraction from tiled predictions, nearest
//!   reference-pixel matching, and the well-detection / false-detection
//!   measures with pixel-count-weighted aggregation.
//! - [`fusion`]: basic belief assignments (probabilistic and distance
//!   models), the non-normalized conjunctive rule, conflict and
//!   auto-conflict, and the pignistic decision.
//!
//! A unit holding 50 pixels of one class and 206 of another contributes
//! those exact fractions to the raw confusion matrix:
//!
//! ```
//! use uncertain_eval::{
//!     BigRational, CertaintyScale, CompositionEntry, ConfusionAccumulator, TileComposition,
//! };
//!
//! let scale = CertaintyScale::unit(1)?;
//! let tile = TileComposition::new(
//!     vec![
//!         CompositionEntry { class: 0, grade: 0, count: 50 },
//!         CompositionEntry { class: 2, grade: 0, count: 206 },
//!     ],
//!     256,
//! )?;
//! let mut matrix = ConfusionAccumulator::new(3);
//! matrix.accumulate_unit(&tile, 0, &scale, false)?;
//! assert_eq!(matrix.get(0, 0), &BigRational::new(50.into(), 256.into()));
//! assert_eq!(matrix.get(2, 0), &BigRational::new(206.into(), 256.into()));
//! # Ok::<(), uncertain_eval::Error>(())
//! ```

pub mod classification;
pub mod error;
pub mod fusion;
pub mod model;
pub mod segmentation;

pub use error::{Error, Result};

pub use model::{
    compose_tiles, BoundaryPixel, CellLabel, CertaintyScale, ClassId, ClassSet, CompositionEntry,
    Grade, GradeId, Homogeneity, PixelLabelMap, ReferenceBoundary, TileComposition, TilePrediction,
    TileScores, TileSpec,
};

pub use classification::{
    accumulate_image, merge, split_accumulate, split_rates, ConfusionAccumulator,
    NormalizedConfusion, RateReport, UnitStatus,
};

pub use segmentation::{
    aggregate, boundary_from_tiles, detection_criterion, evaluate_boundaries, false_detection,
    match_boundaries, well_detection, BoundaryMatch, FoundBoundary, PixelMatch, SegScores,
    DEFAULT_EXPONENT,
};

pub use fusion::{
    appriou_bbas, auto_conflict, combine, denoeux_bbas, expert_tile_bba, Frame, FusionConfig,
    MassFunction,
};

// Exact rationals are part of the public accumulator API.
pub use num_bigint::BigInt;
pub use num_rational::BigRational;
