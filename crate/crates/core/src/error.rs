use thiserror::Error;

/// Errors produced by the evaluation and fusion primitives.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pixel ({x}, {y}) out of bounds for {width}x{height} image")]
    OutOfBounds {
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("class id {id} out of range for {n_classes} classes")]
    InvalidClass { id: usize, n_classes: usize },

    #[error("grade id {id} out of range for {n_grades} grades")]
    InvalidGrade { id: usize, n_grades: usize },

    #[error("duplicate boundary pixel at ({x}, {y})")]
    DuplicateBoundaryPixel { x: u32, y: u32 },

    #[error("reference boundary is empty")]
    EmptyReference,

    #[error("tile composition is empty")]
    EmptyComposition,

    #[error("frame mismatch: {0} vs {1} classes")]
    FrameMismatch(usize, usize),

    #[error("all mass on the empty set: pignistic probability is undefined")]
    TotalConflict,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
