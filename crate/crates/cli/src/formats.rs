//! Text dataset formats.
//!
//! Label map (`LBL`): header `LBL <width> <height> <nclasses> <ngrades>`,
//! then `height` lines of `width` whitespace-separated tokens, each `c:g`
//! (class id, grade id) or `-` for an unlabeled pixel.
//!
//! Boundary (`BND`): header `BND <width> <height> <ngrades>`, then one
//! `x y g` line per boundary pixel. Identical lines are deduplicated; two
//! grades for the same coordinate are an error.
//!
//! Predictions (CSV, mandatory header): `tile_row,tile_col,class` for hard
//! decisions or `tile_row,tile_col,s_0,...,s_{N-1}` for score vectors. The
//! mode is inferred from the column count; tiles absent from the file stay
//! unclassified.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use uncertain_eval::{
    BoundaryPixel, CellLabel, PixelLabelMap, ReferenceBoundary, TilePrediction, TileScores,
};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl FormatError {
    fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Self::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }

    fn invalid(path: &str, msg: impl Into<String>) -> Self {
        Self::Invalid {
            path: path.to_string(),
            msg: msg.into(),
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| FormatError::io(path, e))
}

fn parse_field<T: std::str::FromStr>(
    path: &str,
    line: usize,
    token: &str,
    what: &str,
) -> Result<T> {
    token
        .parse()
        .map_err(|_| FormatError::parse(path, line, format!("invalid {what}: {token:?}")))
}

pub fn parse_label_map(path: &Path) -> Result<PixelLabelMap> {
    parse_label_map_str(&read_to_string(path)?, &path.display().to_string())
}

pub fn parse_label_map_str(input: &str, path: &str) -> Result<PixelLabelMap> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::invalid(path, "empty file, expected LBL header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "LBL" {
        return Err(FormatError::parse(
            path,
            1,
            "expected header `LBL <width> <height> <nclasses> <ngrades>`",
        ));
    }
    let width: u32 = parse_field(path, 1, fields[1], "width")?;
    let height: u32 = parse_field(path, 1, fields[2], "height")?;
    let n_classes: usize = parse_field(path, 1, fields[3], "class count")?;
    let n_grades: usize = parse_field(path, 1, fields[4], "grade count")?;

    let mut cells: Vec<Option<CellLabel>> = Vec::with_capacity(width as usize * height as usize);
    let mut rows = 0u32;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if rows == height {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("expected {height} rows"),
            ));
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != width as usize {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("row has {} tokens, expected {width}", tokens.len()),
            ));
        }
        for token in tokens {
            if token == "-" {
                cells.push(None);
                continue;
            }
            let (class_str, grade_str) = token.split_once(':').ok_or_else(|| {
                FormatError::parse(
                    path,
                    lineno,
                    format!("expected `c:g` or `-`, got {token:?}"),
                )
            })?;
            let class: usize = parse_field(path, lineno, class_str, "class id")?;
            let grade: usize = parse_field(path, lineno, grade_str, "grade id")?;
            if class >= n_classes {
                return Err(FormatError::parse(
                    path,
                    lineno,
                    format!("class id {class} out of range for {n_classes} classes"),
                ));
            }
            if grade >= n_grades {
                return Err(FormatError::parse(
                    path,
                    lineno,
                    format!("grade id {grade} out of range for {n_grades} grades"),
                ));
            }
            cells.push(Some(CellLabel { class, grade }));
        }
        rows += 1;
    }
    if rows != height {
        return Err(FormatError::invalid(
            path,
            format!("found {rows} rows, expected {height}"),
        ));
    }
    PixelLabelMap::new(width, height, n_classes, n_grades, cells)
        .map_err(|e| FormatError::invalid(path, e.to_string()))
}

pub fn write_label_map(path: &Path, map: &PixelLabelMap) -> Result<()> {
    let mut out = format!(
        "LBL {} {} {} {}\n",
        map.width(),
        map.height(),
        map.n_classes(),
        map.n_grades()
    );
    for y in 0..map.height() {
        for x in 0..map.width() {
            if x > 0 {
                out.push(' ');
            }
            match map.get(x, y).expect("in-bounds") {
                Some(cell) => {
                    let _ = write!(out, "{}:{}", cell.class, cell.grade);
                }
                None => out.push('-'),
            }
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| FormatError::io(path, e))
}

pub fn parse_boundary(path: &Path) -> Result<ReferenceBoundary> {
    parse_boundary_str(&read_to_string(path)?, &path.display().to_string())
}

pub fn parse_boundary_str(input: &str, path: &str) -> Result<ReferenceBoundary> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::invalid(path, "empty file, expected BND header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "BND" {
        return Err(FormatError::parse(
            path,
            1,
            "expected header `BND <width> <height> <ngrades>`",
        ));
    }
    let width: u32 = parse_field(path, 1, fields[1], "width")?;
    let height: u32 = parse_field(path, 1, fields[2], "height")?;
    let n_grades: usize = parse_field(path, 1, fields[3], "grade count")?;

    let mut seen: std::collections::BTreeMap<(u32, u32), (usize, usize)> =
        std::collections::BTreeMap::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("expected `x y g`, got {} fields", tokens.len()),
            ));
        }
        let x: u32 = parse_field(path, lineno, tokens[0], "x coordinate")?;
        let y: u32 = parse_field(path, lineno, tokens[1], "y coordinate")?;
        let grade: usize = parse_field(path, lineno, tokens[2], "grade id")?;
        if x >= width || y >= height {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("pixel ({x}, {y}) out of bounds for {width}x{height}"),
            ));
        }
        if grade >= n_grades {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("grade id {grade} out of range for {n_grades} grades"),
            ));
        }
        match seen.get(&(x, y)) {
            // Exact duplicates collapse to a single pixel.
            Some((g, _)) if *g == grade => {}
            Some((g, first)) => {
                return Err(FormatError::parse(
                    path,
                    lineno,
                    format!("pixel ({x}, {y}) already has grade {g} from line {first}"),
                ));
            }
            None => {
                seen.insert((x, y), (grade, lineno));
            }
        }
    }
    let pixels = seen
        .into_iter()
        .map(|((x, y), (grade, _))| BoundaryPixel { x, y, grade })
        .collect();
    ReferenceBoundary::new(width, height, n_grades, pixels)
        .map_err(|e| FormatError::invalid(path, e.to_string()))
}

pub fn write_boundary(path: &Path, boundary: &ReferenceBoundary) -> Result<()> {
    let mut out = format!(
        "BND {} {} {}\n",
        boundary.width(),
        boundary.height(),
        boundary.n_grades()
    );
    for p in boundary.pixels() {
        let _ = writeln!(out, "{} {} {}", p.x, p.y, p.grade);
    }
    fs::write(path, out).map_err(|e| FormatError::io(path, e))
}

/// Parsed prediction file: either hard per-tile decisions or per-tile
/// score vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum PredictionData {
    Hard(TilePrediction),
    Scores(TileScores),
}

pub fn parse_predictions(
    path: &Path,
    n_classes: usize,
    tiles_x: u32,
    tiles_y: u32,
) -> Result<PredictionData> {
    parse_predictions_str(
        &read_to_string(path)?,
        &path.display().to_string(),
        n_classes,
        tiles_x,
        tiles_y,
    )
}

pub fn parse_predictions_str(
    input: &str,
    path: &str,
    n_classes: usize,
    tiles_x: u32,
    tiles_y: u32,
) -> Result<PredictionData> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::invalid(path, "empty file, expected a CSV header row"))?;
    if header.split(',').next().map(str::trim) != Some("tile_row") {
        return Err(FormatError::parse(
            path,
            1,
            "missing header row (expected it to start with `tile_row`)",
        ));
    }

    let tile_count = tiles_x as usize * tiles_y as usize;
    let mut hard: Vec<Option<usize>> = vec![None; tile_count];
    let mut scores: Vec<Option<Vec<f64>>> = vec![None; tile_count];
    let mut filled = vec![false; tile_count];
    // None until the first data row fixes the column count (3 -> hard,
    // 2 + n_classes -> scores).
    let mut arity: Option<usize> = None;

    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match arity {
            None => {
                if fields.len() != 3 && fields.len() != 2 + n_classes {
                    return Err(FormatError::parse(
                        path,
                        lineno,
                        format!(
                            "row has {} columns, expected 3 (hard) or {} (scores for {n_classes} classes)",
                            fields.len(),
                            2 + n_classes
                        ),
                    ));
                }
                arity = Some(fields.len());
            }
            Some(expected) if fields.len() != expected => {
                return Err(FormatError::parse(
                    path,
                    lineno,
                    format!(
                        "row has {} columns, previous rows had {expected}",
                        fields.len()
                    ),
                ));
            }
            Some(_) => {}
        }
        let row: u32 = parse_field(path, lineno, fields[0], "tile row")?;
        let col: u32 = parse_field(path, lineno, fields[1], "tile column")?;
        if row >= tiles_y || col >= tiles_x {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("tile ({row}, {col}) out of range for a {tiles_y}x{tiles_x} grid"),
            ));
        }
        let tile = row as usize * tiles_x as usize + col as usize;
        if filled[tile] {
            return Err(FormatError::parse(
                path,
                lineno,
                format!("tile ({row}, {col}) appears more than once"),
            ));
        }
        filled[tile] = true;
        if arity == Some(3) {
            let class: usize = parse_field(path, lineno, fields[2], "class id")?;
            if class >= n_classes {
                return Err(FormatError::parse(
                    path,
                    lineno,
                    format!("class id {class} out of range for {n_classes} classes"),
                ));
            }
            hard[tile] = Some(class);
        } else {
            let mut vector = Vec::with_capacity(n_classes);
            for field in &fields[2..] {
                let value: f64 = parse_field(path, lineno, field, "score")?;
                if !value.is_finite() || value < 0.0 {
                    return Err(FormatError::parse(
                        path,
                        lineno,
                        format!("score {value} must be finite and nonnegative"),
                    ));
                }
                vector.push(value);
            }
            scores[tile] = Some(vector);
        }
    }

    match arity {
        // A file with only a header has no tiles: treat as hard with
        // everything unclassified.
        None | Some(3) => TilePrediction::new(tiles_x, tiles_y, n_classes, hard)
            .map(PredictionData::Hard)
            .map_err(|e| FormatError::invalid(path, e.to_string())),
        Some(_) => TileScores::new(tiles_x, tiles_y, n_classes, scores)
            .map(PredictionData::Scores)
            .map_err(|e| FormatError::invalid(path, e.to_string())),
    }
}

pub fn write_hard_predictions(path: &Path, pred: &TilePrediction) -> Result<()> {
    let mut out = String::from("tile_row,tile_col,class\n");
    for row in 0..pred.tiles_y() {
        for col in 0..pred.tiles_x() {
            let tile = row as usize * pred.tiles_x() as usize + col as usize;
            if let Some(class) = pred.get(tile) {
                let _ = writeln!(out, "{row},{col},{class}");
            }
        }
    }
    fs::write(path, out).map_err(|e| FormatError::io(path, e))
}

pub fn write_scores(path: &Path, scores: &TileScores) -> Result<()> {
    let mut out = String::from("tile_row,tile_col");
    for i in 0..scores.n_classes() {
        let _ = write!(out, ",s_{i}");
    }
    out.push('\n');
    for row in 0..scores.tiles_y() {
        for col in 0..scores.tiles_x() {
            let tile = row as usize * scores.tiles_x() as usize + col as usize;
            if let Some(vector) = scores.get(tile) {
                let _ = write!(out, "{row},{col}");
                for value in vector {
                    let _ = write!(out, ",{value}");
                }
                out.push('\n');
            }
        }
    }
    fs::write(path, out).map_err(|e| FormatError::io(path, e))
}
