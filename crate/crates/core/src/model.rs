//! Domain types shared by the evaluation and fusion modules: class frames,
//! certainty scales, pixel grids, tiling and tile composition.
//!
//! Everything here is immutable after construction; the operations are pure
//! functions, so distinct images can be evaluated concurrently.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Index into a [`ClassSet`], `0..N-1` in declaration order.
pub type ClassId = usize;
/// Index into a [`CertaintyScale`].
pub type GradeId = usize;

/// Ordered set of class labels. Class ids are positions in the list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    names: Vec<String>,
}

impl ClassSet {
    /// Requires at least two unique names.
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a class set needs at least 2 classes, got {}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate class name {name:?}"
                )));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, id: ClassId) -> Option<&str> {
        self.names.get(id).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// One certainty grade: a name and a weight in `(0, 1]`.
///
/// Weights are exact rationals so that confusion-matrix accumulation stays
/// exact (contributions are fractions like `206/256` scaled by `1/2`).
#[derive(Debug, Clone, PartialEq)]
pub struct Grade {
    name: String,
    weight: BigRational,
}

impl Grade {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self) -> &BigRational {
        &self.weight
    }
}

/// Ordered list of certainty grades an expert can attach to a label.
#[derive(Debug, Clone, PartialEq)]
pub struct CertaintyScale {
    grades: Vec<Grade>,
}

impl CertaintyScale {
    /// Weights must lie in `(0, 1]`; grade names must be unique.
    pub fn new<S: Into<String>>(grades: Vec<(S, BigRational)>) -> Result<Self> {
        if grades.is_empty() {
            return Err(Error::InvalidArgument(
                "a certainty scale needs at least one grade".into(),
            ));
        }
        let one = BigRational::one();
        let mut out = Vec::with_capacity(grades.len());
        for (name, weight) in grades {
            let name: String = name.into();
            if !weight.is_positive() || weight > one {
                return Err(Error::InvalidArgument(format!(
                    "grade {name:?} weight must be in (0, 1], got {weight}"
                )));
            }
            if out.iter().any(|g: &Grade| g.name == name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate grade name {name:?}"
                )));
            }
            out.push(Grade { name, weight });
        }
        Ok(Self { grades: out })
    }

    /// Scale where every grade has weight 1 (certainty ignored).
    pub fn unit(n_grades: usize) -> Result<Self> {
        Self::new(
            (0..n_grades)
                .map(|g| (format!("g{g}"), BigRational::one()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grades(&self) -> &[Grade] {
        &self.grades
    }

    pub fn weight(&self, grade: GradeId) -> Result<&BigRational> {
        self.grades
            .get(grade)
            .map(Grade::weight)
            .ok_or(Error::InvalidGrade {
                id: grade,
                n_grades: self.grades.len(),
            })
    }

    pub fn weight_f64(&self, grade: GradeId) -> Result<f64> {
        // Weights are in (0, 1], so the conversion cannot fail.
        Ok(self.weight(grade)?.to_f64().unwrap_or(0.0))
    }
}

/// Label attached by an expert to a single pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellLabel {
    pub class: ClassId,
    pub grade: GradeId,
}

/// Per-pixel expert labeling of one image: each cell is either unlabeled or
/// carries a class id plus a certainty grade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelLabelMap {
    width: u32,
    height: u32,
    n_classes: usize,
    n_grades: usize,
    cells: Vec<Option<CellLabel>>,
}

impl PixelLabelMap {
    /// `cells` is row-major with `width * height` entries.
    pub fn new(
        width: u32,
        height: u32,
        n_classes: usize,
        n_grades: usize,
        cells: Vec<Option<CellLabel>>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "label map dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize;
        if cells.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "label map has {} cells, expected {expected}",
                cells.len()
            )));
        }
        for cell in cells.iter().flatten() {
            if cell.class >= n_classes {
                return Err(Error::InvalidClass {
                    id: cell.class,
                    n_classes,
                });
            }
            if cell.grade >= n_grades {
                return Err(Error::InvalidGrade {
                    id: cell.grade,
                    n_grades,
                });
            }
        }
        Ok(Self {
            width,
            height,
            n_classes,
            n_grades,
            cells,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_grades(&self) -> usize {
        self.n_grades
    }

    pub fn get(&self, x: u32, y: u32) -> Result<Option<CellLabel>> {
        if x >= self.width || y >= self.height {
            return Err(Error::OutOfBounds {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        Ok(self.cells[y as usize * self.width as usize + x as usize])
    }

    pub fn cells(&self) -> &[Option<CellLabel>] {
        &self.cells
    }

    pub fn labeled_pixels(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }
}

/// One expert-provided boundary pixel with its certainty grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryPixel {
    pub x: u32,
    pub y: u32,
    pub grade: GradeId,
}

/// Set of boundary pixels provided by one expert, each carrying a certainty
/// grade. Coordinates are unique and in-bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceBoundary {
    width: u32,
    height: u32,
    n_grades: usize,
    pixels: Vec<BoundaryPixel>,
}

impl ReferenceBoundary {
    /// Pixels are sorted by `(y, x)`; a repeated coordinate is an error.
    pub fn new(
        width: u32,
        height: u32,
        n_grades: usize,
        pixels: Vec<BoundaryPixel>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "boundary dimensions must be positive, got {width}x{height}"
            )));
        }
        let mut pixels = pixels;
        for p in &pixels {
            if p.x >= width || p.y >= height {
                return Err(Error::OutOfBounds {
                    x: p.x,
                    y: p.y,
                    width,
                    height,
                });
            }
            if p.grade >= n_grades {
                return Err(Error::InvalidGrade {
                    id: p.grade,
                    n_grades,
                });
            }
        }
        pixels.sort_by_key(|p| (p.y, p.x));
        for pair in pixels.windows(2) {
            if pair[0].x == pair[1].x && pair[0].y == pair[1].y {
                return Err(Error::DuplicateBoundaryPixel {
                    x: pair[0].x,
                    y: pair[0].y,
                });
            }
        }
        Ok(Self {
            width,
            height,
            n_grades,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn n_grades(&self) -> usize {
        self.n_grades
    }

    pub fn pixels(&self) -> &[BoundaryPixel] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

/// Row-major tiling of an image into `n x n` units (edge tiles may be
/// smaller when the image size is not a multiple of `n`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileSpec {
    side: u32,
    width: u32,
    height: u32,
}

impl TileSpec {
    pub fn new(side: u32, width: u32, height: u32) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidArgument(
                "tile side must be at least 1".into(),
            ));
        }
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "image dimensions must be positive, got {width}x{height}"
            )));
        }
        Ok(Self {
            side,
            width,
            height,
        })
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn tiles_x(&self) -> u32 {
        self.width.div_ceil(self.side)
    }

    pub fn tiles_y(&self) -> u32 {
        self.height.div_ceil(self.side)
    }

    pub fn tile_count(&self) -> usize {
        self.tiles_x() as usize * self.tiles_y() as usize
    }

    /// Row-major index of the tile containing the pixel.
    pub fn tile_of(&self, x: u32, y: u32) -> Result<usize> {
        if x >= self.width || y >= self.height {
            return Err(Error::OutOfBounds {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        let col = x / self.side;
        let row = y / self.side;
        Ok(row as usize * self.tiles_x() as usize + col as usize)
    }

    pub fn tile_row_col(&self, index: usize) -> (u32, u32) {
        let tx = self.tiles_x() as usize;
        ((index / tx) as u32, (index % tx) as u32)
    }

    /// Pixel rectangle `(x0, y0, w, h)` of a tile; edge tiles are clipped to
    /// the image so `w` and `h` are the true pixel extents.
    pub fn tile_rect(&self, index: usize) -> (u32, u32, u32, u32) {
        let (row, col) = self.tile_row_col(index);
        let x0 = col * self.side;
        let y0 = row * self.side;
        let w = self.side.min(self.width - x0);
        let h = self.side.min(self.height - y0);
        (x0, y0, w, h)
    }

    /// True pixel area of a tile (smaller than `side^2` on image edges).
    pub fn tile_area(&self, index: usize) -> u64 {
        let (_, _, w, h) = self.tile_rect(index);
        w as u64 * h as u64
    }
}

/// Homogeneity of a classification unit with respect to the true classes it
/// contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    /// Exactly one distinct class (grades may differ).
    Homogeneous,
    /// More than one distinct class.
    Inhomogeneous,
    /// No labeled pixels.
    Empty,
}

/// Count of labeled pixels of one `(class, grade)` pair inside a tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositionEntry {
    pub class: ClassId,
    pub grade: GradeId,
    pub count: u64,
}

/// Per-tile census of labeled pixels grouped by `(class, grade)`, plus the
/// true pixel area of the tile. Unlabeled pixels are not counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileComposition {
    entries: Vec<CompositionEntry>,
    tile_area: u64,
}

impl TileComposition {
    /// Entries must have positive counts summing to at most `tile_area`;
    /// `(class, grade)` pairs must be unique.
    pub fn new(mut entries: Vec<CompositionEntry>, tile_area: u64) -> Result<Self> {
        if tile_area == 0 {
            return Err(Error::InvalidArgument("tile area must be positive".into()));
        }
        let mut total = 0u64;
        for e in &entries {
            if e.count == 0 {
                return Err(Error::InvalidArgument(format!(
                    "composition entry for class {} has zero count",
                    e.class
                )));
            }
            total += e.count;
        }
        if total > tile_area {
            return Err(Error::InvalidArgument(format!(
                "composition counts {total} exceed tile area {tile_area}"
            )));
        }
        entries.sort_by_key(|e| (e.class, e.grade));
        for pair in entries.windows(2) {
            if pair[0].class == pair[1].class && pair[0].grade == pair[1].grade {
                return Err(Error::InvalidArgument(format!(
                    "duplicate composition entry for class {} grade {}",
                    pair[0].class, pair[0].grade
                )));
            }
        }
        Ok(Self { entries, tile_area })
    }

    pub fn empty(tile_area: u64) -> Result<Self> {
        Self::new(Vec::new(), tile_area)
    }

    pub fn entries(&self) -> &[CompositionEntry] {
        &self.entries
    }

    pub fn tile_area(&self) -> u64 {
        self.tile_area
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labeled_pixels(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }

    /// Fraction of the tile covered by one entry, as an exact rational.
    pub fn fraction(&self, entry: &CompositionEntry) -> BigRational {
        BigRational::new(BigInt::from(entry.count), BigInt::from(self.tile_area))
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut classes = self.entries.iter().map(|e| e.class);
        match classes.next() {
            None => Homogeneity::Empty,
            Some(first) => {
                if classes.all(|c| c == first) {
                    Homogeneity::Homogeneous
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }
}

/// Splits a label map into per-tile compositions. Unlabeled pixels
/// contribute nothing; a fully unlabeled tile yields an empty composition.
pub fn compose_tiles(map: &PixelLabelMap, spec: &TileSpec) -> Result<Vec<TileComposition>> {
    if map.width() != spec.width() || map.height() != spec.height() {
        return Err(Error::DimensionMismatch(format!(
            "label map is {}x{} but tile spec covers {}x{}",
            map.width(),
            map.height(),
            spec.width(),
            spec.height()
        )));
    }
    let mut counts: Vec<BTreeMap<(ClassId, GradeId), u64>> =
        vec![BTreeMap::new(); spec.tile_count()];
    for y in 0..map.height() {
        for x in 0..map.width() {
            if let Some(cell) = map.get(x, y)? {
                let tile = spec.tile_of(x, y)?;
                *counts[tile].entry((cell.class, cell.grade)).or_insert(0) += 1;
            }
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(tile, groups)| {
            let entries = groups
                .into_iter()
                .map(|((class, grade), count)| CompositionEntry {
                    class,
                    grade,
                    count,
                })
                .collect();
            TileComposition::new(entries, spec.tile_area(tile))
        })
        .collect()
}

/// Hard classifier decision per tile; `None` marks tiles excluded from
/// evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilePrediction {
    tiles_x: u32,
    tiles_y: u32,
    n_classes: usize,
    classes: Vec<Option<ClassId>>,
}

impl TilePrediction {
    pub fn new(
        tiles_x: u32,
        tiles_y: u32,
        n_classes: usize,
        classes: Vec<Option<ClassId>>,
    ) -> Result<Self> {
        let expected = tiles_x as usize * tiles_y as usize;
        if classes.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "prediction grid has {} tiles, expected {expected}",
                classes.len()
            )));
        }
        for class in classes.iter().flatten() {
            if *class >= n_classes {
                return Err(Error::InvalidClass {
                    id: *class,
                    n_classes,
                });
            }
        }
        Ok(Self {
            tiles_x,
            tiles_y,
            n_classes,
            classes,
        })
    }

    pub fn tiles_x(&self) -> u32 {
        self.tiles_x
    }

    pub fn tiles_y(&self) -> u32 {
        self.tiles_y
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn tile_count(&self) -> usize {
        self.classes.len()
    }

    pub fn get(&self, index: usize) -> Option<ClassId> {
        self.classes.get(index).copied().flatten()
    }

    pub fn classes(&self) -> &[Option<ClassId>] {
        &self.classes
    }

    /// Checks the grid matches a tile spec.
    pub fn matches(&self, spec: &TileSpec) -> Result<()> {
        if self.tiles_x != spec.tiles_x() || self.tiles_y != spec.tiles_y() {
            return Err(Error::DimensionMismatch(format!(
                "prediction grid is {}x{} tiles but spec has {}x{}",
                self.tiles_x,
                self.tiles_y,
                spec.tiles_x(),
                spec.tiles_y()
            )));
        }
        Ok(())
    }
}

/// Per-tile score vectors from one classifier: `N` nonnegative finite values
/// per tile (likelihoods or distances depending on the fusion model).
#[derive(Debug, Clone, PartialEq)]
pub struct TileScores {
    tiles_x: u32,
    tiles_y: u32,
    n_classes: usize,
    values: Vec<Option<Vec<f64>>>,
}

impl TileScores {
    pub fn new(
        tiles_x: u32,
        tiles_y: u32,
        n_classes: usize,
        values: Vec<Option<Vec<f64>>>,
    ) -> Result<Self> {
        let expected = tiles_x as usize * tiles_y as usize;
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "score grid has {} tiles, expected {expected}",
                values.len()
            )));
        }
        for v in values.iter().flatten() {
            if v.len() != n_classes {
                return Err(Error::DimensionMismatch(format!(
                    "score vector has {} entries, expected {n_classes}",
                    v.len()
                )));
            }
            if v.iter().any(|s| !s.is_finite() || *s < 0.0) {
                return Err(Error::InvalidArgument(
                    "scores must be finite and nonnegative".into(),
                ));
            }
        }
        Ok(Self {
            tiles_x,
            tiles_y,
            n_classes,
            values,
        })
    }

    pub fn tiles_x(&self) -> u32 {
        self.tiles_x
    }

    pub fn tiles_y(&self) -> u32 {
        self.tiles_y
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn tile_count(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, index: usize) -> Option<&[f64]> {
        self.values.get(index).and_then(|v| v.as_deref())
    }

    pub fn values(&self) -> &[Option<Vec<f64>>] {
        &self.values
    }
}
