//! Boundary detection quality measures against certainty-weighted reference
//! boundaries.
//!
//! The classifier's tiling induces an implicit segmentation: a boundary
//! appears wherever two adjacent tiles carry different classes. Each found
//! boundary pixel is matched to its nearest reference pixel (Euclidean,
//! exact squared distances); the well-detection score rewards found pixels
//! close to confident reference pixels while the false-detection score
//! penalizes the distant ones. Both are in `[0, 1]`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{CertaintyScale, ReferenceBoundary, TilePrediction, TileSpec};

/// Default exponent applied to the well-detection ratio.
pub const DEFAULT_EXPONENT: f64 = 1.0 / 6.0;

/// Boundary pixels extracted from a tiled prediction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoundBoundary {
    width: u32,
    height: u32,
    pixels: Vec<(u32, u32)>,
}

impl FoundBoundary {
    /// Pixels are `(x, y)`, deduplicated and stored in `(y, x)` order.
    pub fn new(width: u32, height: u32, mut pixels: Vec<(u32, u32)>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::DimensionMismatch(format!(
                "boundary dimensions must be positive, got {width}x{height}"
            )));
        }
        for &(x, y) in &pixels {
            if x >= width || y >= height {
                return Err(Error::OutOfBounds {
                    x,
                    y,
                    width,
                    height,
                });
            }
        }
        pixels.sort_by_key(|&(x, y)| (y, x));
        pixels.dedup();
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[(u32, u32)] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

/// Emits the shared edge between every pair of 4-adjacent tiles whose
/// predicted classes differ. Edge pixels are taken on the tile with the
/// greater row-major index; unclassified tiles produce no boundary.
pub fn boundary_from_tiles(pred: &TilePrediction, spec: &TileSpec) -> Result<FoundBoundary> {
    pred.matches(spec)?;
    let tiles_x = spec.tiles_x();
    let tiles_y = spec.tiles_y();
    let mut pixels = Vec::new();
    for row in 0..tiles_y {
        for col in 0..tiles_x {
            let here = row as usize * tiles_x as usize + col as usize;
            let Some(class) = pred.get(here) else {
                continue;
            };
            // Right neighbor: shared edge is the left column of that tile.
            if col + 1 < tiles_x {
                let right = here + 1;
                if pred.get(right).is_some_and(|c| c != class) {
                    let (x0, y0, _, h) = spec.tile_rect(right);
                    for y in y0..y0 + h {
                        pixels.push((x0, y));
                    }
                }
            }
            // Lower neighbor: shared edge is the top row of that tile.
            if row + 1 < tiles_y {
                let below = here + tiles_x as usize;
                if pred.get(below).is_some_and(|c| c != class) {
                    let (x0, y0, w, _) = spec.tile_rect(below);
                    for x in x0..x0 + w {
                        pixels.push((x, y0));
                    }
                }
            }
        }
    }
    FoundBoundary::new(spec.width(), spec.height(), pixels)
}

/// Nearest-reference assignment for one found boundary pixel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelMatch {
    /// Found pixel `(x, y)`.
    pub found: (u32, u32),
    /// Matched reference pixel `(x, y)`: nearest under Euclidean distance,
    /// ties broken by smallest `(y, x)`.
    pub reference: (u32, u32),
    /// Exact squared Euclidean distance between the two.
    pub dist_sq: u64,
    /// Certainty weight of the matched reference pixel.
    pub ref_weight: f64,
    /// How many found pixels share this reference pixel as their match.
    pub multiplicity: u32,
}

/// All per-pixel matches of one found boundary against one reference
/// boundary, plus the total reference weight the measures normalize by.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatch {
    matches: Vec<PixelMatch>,
    ref_weight_sum: f64,
    ref_pixels: usize,
}

impl BoundaryMatch {
    pub fn matches(&self) -> &[PixelMatch] {
        &self.matches
    }

    /// Sum of certainty weights over all reference pixels, matched or not.
    pub fn ref_weight_sum(&self) -> f64 {
        self.ref_weight_sum
    }

    pub fn ref_pixels(&self) -> usize {
        self.ref_pixels
    }
}

// Bucket side for the ring search; any positive value is correct, this one
// keeps buckets small on the image sizes the measures target.
const CELL: u32 = 16;

struct BucketGrid {
    cells_x: u32,
    cells_y: u32,
    buckets: Vec<Vec<(u32, u32, f64)>>,
}

impl BucketGrid {
    fn build(reference: &ReferenceBoundary, scale: &CertaintyScale) -> Result<Self> {
        let cells_x = reference.width().div_ceil(CELL);
        let cells_y = reference.height().div_ceil(CELL);
        let mut buckets = vec![Vec::new(); cells_x as usize * cells_y as usize];
        // Reference pixels are already in (y, x) order.
        for p in reference.pixels() {
            let weight = scale.weight_f64(p.grade)?;
            let idx = (p.y / CELL) as usize * cells_x as usize + (p.x / CELL) as usize;
            buckets[idx].push((p.x, p.y, weight));
        }
        Ok(Self {
            cells_x,
            cells_y,
            buckets,
        })
    }

    fn scan_cell(
        &self,
        cx: u32,
        cy: u32,
        fx: u32,
        fy: u32,
        best: &mut Option<(u64, u32, u32, f64)>,
    ) {
        let idx = cy as usize * self.cells_x as usize + cx as usize;
        for &(ex, ey, w) in &self.buckets[idx] {
            let dx = ex as i64 - fx as i64;
            let dy = ey as i64 - fy as i64;
            let d2 = (dx * dx + dy * dy) as u64;
            let better = match best {
                None => true,
                Some((bd2, bx, by, _)) => d2 < *bd2 || (d2 == *bd2 && (ey, ex) < (*by, *bx)),
            };
            if better {
                *best = Some((d2, ex, ey, w));
            }
        }
    }

    /// Expanding Chebyshev ring search. A cell at ring `k >= 1` is at least
    /// `(k-1)*CELL + 1` pixels away, so the search can stop once that bound
    /// exceeds the best distance found; rings at the bound are still scanned
    /// so equidistant candidates keep the lexicographic tie-break exact.
    fn nearest(&self, fx: u32, fy: u32) -> (u64, u32, u32, f64) {
        let cfx = fx / CELL;
        let cfy = fy / CELL;
        let max_ring = [cfx, self.cells_x - 1 - cfx, cfy, self.cells_y - 1 - cfy]
            .into_iter()
            .max()
            .unwrap_or(0);
        let mut best: Option<(u64, u32, u32, f64)> = None;
        for k in 0..=max_ring {
            if k >= 1 {
                if let Some((bd2, ..)) = best {
                    let sep = (k as u64 - 1) * CELL as u64 + 1;
                    if sep * sep > bd2 {
                        break;
                    }
                }
            }
            if k == 0 {
                self.scan_cell(cfx, cfy, fx, fy, &mut best);
                continue;
            }
            let lo_x = cfx.saturating_sub(k);
            let hi_x = (cfx + k).min(self.cells_x - 1);
            let lo_y = cfy.saturating_sub(k);
            let hi_y = (cfy + k).min(self.cells_y - 1);
            // Top and bottom rows of the ring.
            if cfy >= k {
                for cx in lo_x..=hi_x {
                    self.scan_cell(cx, cfy - k, fx, fy, &mut best);
                }
            }
            if cfy + k < self.cells_y {
                for cx in lo_x..=hi_x {
                    self.scan_cell(cx, cfy + k, fx, fy, &mut best);
                }
            }
            // Left and right columns, excluding the corners already scanned.
            let row_lo = (cfy.saturating_sub(k - 1)).max(lo_y);
            let row_hi = (cfy + k - 1).min(hi_y);
            if row_lo <= row_hi {
                if cfx >= k {
                    for cy in row_lo..=row_hi {
                        self.scan_cell(cfx - k, cy, fx, fy, &mut best);
                    }
                }
                if cfx + k < self.cells_x {
                    for cy in row_lo..=row_hi {
                        self.scan_cell(cfx + k, cy, fx, fy, &mut best);
                    }
                }
            }
        }
        // The reference is nonempty, so a match always exists.
        best.expect("nonempty reference boundary")
    }
}

/// Matches every found pixel to its nearest reference pixel and counts, per
/// reference pixel, how many found pixels chose it.
pub fn match_boundaries(
    found: &FoundBoundary,
    reference: &ReferenceBoundary,
    scale: &CertaintyScale,
) -> Result<BoundaryMatch> {
    if found.width() != reference.width() || found.height() != reference.height() {
        return Err(Error::DimensionMismatch(format!(
            "found boundary is {}x{} but reference is {}x{}",
            found.width(),
            found.height(),
            reference.width(),
            reference.height()
        )));
    }
    if reference.is_empty() {
        return Err(Error::EmptyReference);
    }
    let mut ref_weight_sum = 0.0;
    for p in reference.pixels() {
        ref_weight_sum += scale.weight_f64(p.grade)?;
    }
    let grid = BucketGrid::build(reference, scale)?;
    let mut matches: Vec<PixelMatch> = found
        .pixels()
        .iter()
        .map(|&(fx, fy)| {
            let (dist_sq, ex, ey, ref_weight) = grid.nearest(fx, fy);
            PixelMatch {
                found: (fx, fy),
                reference: (ex, ey),
                dist_sq,
                ref_weight,
                multiplicity: 0,
            }
        })
        .collect();
    let mut shared: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for m in &matches {
        *shared.entry(m.reference).or_insert(0) += 1;
    }
    for m in &mut matches {
        m.multiplicity = shared[&m.reference];
    }
    Ok(BoundaryMatch {
        matches,
        ref_weight_sum,
        ref_pixels: reference.len(),
    })
}

/// Distance criterion for one matched pixel: `exp(-(d * W)^2) * W`, strictly
/// decreasing in the distance and scaled by the reference pixel's weight.
pub fn detection_criterion(dist_sq: u64, weight: f64) -> f64 {
    (-(dist_sq as f64) * weight * weight).exp() * weight
}

/// Well-detection score in `[0, 1]`.
///
/// Sums `DC_f / n_ef` over found pixels, normalizes by the maximal term
/// times the total reference weight, clamps the ratio to `[0, 1]` and
/// raises it to `exponent` to accentuate small values. An empty found
/// boundary scores 0.
pub fn well_detection(m: &BoundaryMatch, exponent: f64) -> f64 {
    assert!(exponent > 0.0, "well-detection exponent must be positive");
    if m.matches.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut max_term = 0.0f64;
    for pm in &m.matches {
        let term = detection_criterion(pm.dist_sq, pm.ref_weight) / pm.multiplicity as f64;
        sum += term;
        max_term = max_term.max(term);
    }
    let ratio = (sum / (max_term * m.ref_weight_sum)).clamp(0.0, 1.0);
    ratio.powf(exponent)
}

/// False-detection score in `[0, 1]`.
///
/// Each match contributes `FDC_f = 1 - DC_f / W_e` (0 iff the distance is
/// 0), amplified by `n_ef`; the normalized sum feeds `1 - exp(-r)`. A found
/// boundary equal to the reference scores 0; an empty found boundary
/// scores 0.
pub fn false_detection(m: &BoundaryMatch) -> f64 {
    if m.matches.is_empty() {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut max_term = 0.0f64;
    for pm in &m.matches {
        let fdc = 1.0 - detection_criterion(pm.dist_sq, pm.ref_weight) / pm.ref_weight;
        let term = fdc * pm.multiplicity as f64;
        sum += term;
        max_term = max_term.max(term);
    }
    if max_term == 0.0 {
        return 0.0;
    }
    let ratio = sum / (max_term * m.ref_weight_sum);
    1.0 - (-ratio).exp()
}

/// Boundary scores for one image against one expert, with the image pixel
/// count used as the aggregation weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegScores {
    pub wdc: f64,
    pub fd: f64,
    pub pixels: u64,
}

impl SegScores {
    pub fn new(wdc: f64, fd: f64, pixels: u64) -> Self {
        Self {
            wdc: wdc.clamp(0.0, 1.0),
            fd: fd.clamp(0.0, 1.0),
            pixels,
        }
    }
}

/// Full per-image evaluation including the degenerate cases:
/// nothing found against a nonempty reference scores `(0, 0)`; anything
/// found against an empty reference scores `(0, 1)`; two empty boundaries
/// agree perfectly at `(1, 0)`.
pub fn evaluate_boundaries(
    found: &FoundBoundary,
    reference: &ReferenceBoundary,
    scale: &CertaintyScale,
    exponent: f64,
) -> Result<SegScores> {
    if found.width() != reference.width() || found.height() != reference.height() {
        return Err(Error::DimensionMismatch(format!(
            "found boundary is {}x{} but reference is {}x{}",
            found.width(),
            found.height(),
            reference.width(),
            reference.height()
        )));
    }
    let pixels = found.width() as u64 * found.height() as u64;
    if reference.is_empty() {
        return Ok(if found.is_empty() {
            SegScores::new(1.0, 0.0, pixels)
        } else {
            SegScores::new(0.0, 1.0, pixels)
        });
    }
    let m = match_boundaries(found, reference, scale)?;
    Ok(SegScores::new(
        well_detection(&m, exponent),
        false_detection(&m),
        pixels,
    ))
}

/// Pixel-count-weighted mean of the two scores across images and experts.
pub fn aggregate(scores: &[SegScores]) -> Result<(f64, f64)> {
    if scores.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot aggregate an empty score list".into(),
        ));
    }
    let total: u64 = scores.iter().map(|s| s.pixels).sum();
    if total == 0 {
        return Err(Error::InvalidArgument(
            "aggregation weights sum to zero".into(),
        ));
    }
    let mut wdc = 0.0;
    let mut fd = 0.0;
    for s in scores {
        let w = s.pixels as f64 / total as f64;
        wdc += w * s.wdc;
        fd += w * s.fd;
    }
    Ok((wdc, fd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BoundaryPixel;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn unit_scale() -> CertaintyScale {
        CertaintyScale::unit(1).unwrap()
    }

    fn reference(width: u32, height: u32, pts: &[(u32, u32)]) -> ReferenceBoundary {
        ReferenceBoundary::new(
            width,
            height,
            1,
            pts.iter()
                .map(|&(x, y)| BoundaryPixel { x, y, grade: 0 })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn uniform_predictions_have_no_boundary() {
        let spec = TileSpec::new(32, 64, 64).unwrap();
        let pred = TilePrediction::new(2, 2, 2, vec![Some(0); 4]).unwrap();
        let found = boundary_from_tiles(&pred, &spec).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn two_tile_split_emits_left_column_of_second_tile() {
        let spec = TileSpec::new(32, 64, 32).unwrap();
        let pred = TilePrediction::new(2, 1, 2, vec![Some(0), Some(1)]).unwrap();
        let found = boundary_from_tiles(&pred, &spec).unwrap();
        let expected: Vec<(u32, u32)> = (0..32).map(|y| (32, y)).collect();
        assert_eq!(found.pixels(), expected.as_slice());
    }

    #[test]
    fn checkerboard_emits_internal_edges_without_duplicates() {
        let spec = TileSpec::new(2, 4, 4).unwrap();
        let pred = TilePrediction::new(2, 2, 2, vec![Some(0), Some(1), Some(1), Some(0)]).unwrap();
        let found = boundary_from_tiles(&pred, &spec).unwrap();
        // Brute-force expectation: left column of tiles (0,1) and (1,1),
        // top row of tiles (1,0) and (1,1), deduplicated.
        let mut expected = vec![
            (2, 0),
            (2, 1), // edge into tile (0,1)
            (0, 2),
            (1, 2), // top of tile (1,0)
            (2, 2),
            (3, 2), // top of tile (1,1)
            (2, 3), // rest of left column of tile (1,1)
        ];
        expected.sort_by_key(|&(x, y)| (y, x));
        assert_eq!(found.pixels(), expected.as_slice());
    }

    #[test]
    fn unclassified_tiles_generate_no_boundary() {
        let spec = TileSpec::new(2, 4, 2).unwrap();
        let pred = TilePrediction::new(2, 1, 2, vec![Some(0), None]).unwrap();
        let found = boundary_from_tiles(&pred, &spec).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn coincident_pixel_matches_at_distance_zero() {
        let scale = unit_scale();
        let reference = reference(8, 8, &[(3, 3), (6, 2)]);
        let found = FoundBoundary::new(8, 8, vec![(3, 3)]).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        assert_eq!(m.matches()[0].dist_sq, 0);
        assert_eq!(m.matches()[0].reference, (3, 3));
        assert_eq!(m.matches()[0].multiplicity, 1);
    }

    #[test]
    fn parallel_lines_match_one_to_one() {
        let scale = unit_scale();
        let ref_pts: Vec<(u32, u32)> = (10..20).map(|x| (x, 5)).collect();
        let found_pts: Vec<(u32, u32)> = (10..20).map(|x| (x, 6)).collect();
        let reference = reference(32, 32, &ref_pts);
        let found = FoundBoundary::new(32, 32, found_pts).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        for pm in m.matches() {
            assert_eq!(pm.dist_sq, 1);
            assert_eq!(pm.multiplicity, 1);
        }
    }

    #[test]
    fn perpendicular_run_shares_one_reference_pixel() {
        // Three found pixels in a vertical run all nearest to the same
        // reference pixel of a horizontal line.
        let scale = unit_scale();
        let ref_pts: Vec<(u32, u32)> = (0..9).map(|x| (x, 0)).collect();
        let found = FoundBoundary::new(9, 8, vec![(4, 1), (4, 2), (4, 3)]).unwrap();
        let m = match_boundaries(&found, &reference(9, 8, &ref_pts), &scale).unwrap();
        for pm in m.matches() {
            assert_eq!(pm.reference, (4, 0));
            assert_eq!(pm.multiplicity, 3);
        }
    }

    #[test]
    fn equidistant_ties_pick_smallest_y_then_x() {
        let scale = unit_scale();
        // Found pixel at (5, 5); references at (4, 5), (6, 5), (5, 4), (5, 6)
        // are all at distance 1; (5, 4) has the smallest (y, x) key.
        let reference = reference(12, 12, &[(4, 5), (6, 5), (5, 4), (5, 6)]);
        let found = FoundBoundary::new(12, 12, vec![(5, 5)]).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        assert_eq!(m.matches()[0].reference, (5, 4));
    }

    #[test]
    fn empty_reference_is_an_error_for_matching() {
        let scale = unit_scale();
        let reference = ReferenceBoundary::new(8, 8, 1, Vec::new()).unwrap();
        let found = FoundBoundary::new(8, 8, vec![(1, 1)]).unwrap();
        assert!(matches!(
            match_boundaries(&found, &reference, &scale),
            Err(Error::EmptyReference)
        ));
    }

    #[test]
    fn exact_match_scores_perfectly() {
        let scale = unit_scale();
        let pts: Vec<(u32, u32)> = (2..12).map(|x| (x, 7)).collect();
        let reference = reference(16, 16, &pts);
        let found = FoundBoundary::new(16, 16, pts.clone()).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        assert_relative_eq!(well_detection(&m, DEFAULT_EXPONENT), 1.0);
        assert_relative_eq!(false_detection(&m), 0.0);
    }

    #[test]
    fn half_coverage_scores_half_to_the_sixth_root() {
        let scale = unit_scale();
        let pts: Vec<(u32, u32)> = (0..10).map(|x| (x, 3)).collect();
        let reference = reference(16, 16, &pts);
        let found = FoundBoundary::new(16, 16, pts[..5].to_vec()).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        let wdc = well_detection(&m, DEFAULT_EXPONENT);
        assert_relative_eq!(wdc, 0.5f64.powf(1.0 / 6.0), epsilon = 1e-9);
    }

    #[test]
    fn distance_one_line_false_detection() {
        let scale = unit_scale();
        let ref_pts: Vec<(u32, u32)> = (10..20).map(|x| (x, 5)).collect();
        let found_pts: Vec<(u32, u32)> = (10..20).map(|x| (x, 6)).collect();
        let reference = reference(32, 32, &ref_pts);
        let found = FoundBoundary::new(32, 32, found_pts).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        assert_relative_eq!(false_detection(&m), 1.0 - (-1.0f64).exp(), epsilon = 1e-9);
        // The same setup detects the line well: every DC term is equal.
        assert_relative_eq!(well_detection(&m, DEFAULT_EXPONENT), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn degenerate_cases_follow_the_stated_rules() {
        let scale = unit_scale();
        let empty_ref = ReferenceBoundary::new(8, 8, 1, Vec::new()).unwrap();
        let some_ref = reference(8, 8, &[(2, 2)]);
        let empty_found = FoundBoundary::new(8, 8, Vec::new()).unwrap();
        let some_found = FoundBoundary::new(8, 8, vec![(5, 5)]).unwrap();

        let s = evaluate_boundaries(&empty_found, &some_ref, &scale, DEFAULT_EXPONENT).unwrap();
        assert_eq!((s.wdc, s.fd), (0.0, 0.0));
        let s = evaluate_boundaries(&empty_found, &empty_ref, &scale, DEFAULT_EXPONENT).unwrap();
        assert_eq!((s.wdc, s.fd), (1.0, 0.0));
        let s = evaluate_boundaries(&some_found, &empty_ref, &scale, DEFAULT_EXPONENT).unwrap();
        assert_eq!((s.wdc, s.fd), (0.0, 1.0));
    }

    #[test]
    fn low_weight_reference_still_scores_in_range() {
        let scale = CertaintyScale::new(vec![(
            "not_sure",
            BigRational::new(BigInt::from(1), BigInt::from(3)),
        )])
        .unwrap();
        let pts: Vec<(u32, u32)> = (0..10).map(|x| (x, 3)).collect();
        let reference = reference(16, 16, &pts);
        let found = FoundBoundary::new(16, 16, pts.clone()).unwrap();
        let m = match_boundaries(&found, &reference, &scale).unwrap();
        // Without the clamp the ratio would be 1 / (sum of 1/3 weights / max)
        // = 3; the clamp pins the perfect match at 1.
        assert_relative_eq!(well_detection(&m, DEFAULT_EXPONENT), 1.0);
        assert_relative_eq!(false_detection(&m), 0.0);
    }

    #[test]
    fn aggregate_weights_by_pixel_count() {
        let scores = vec![SegScores::new(0.0, 0.0, 100), SegScores::new(0.4, 0.4, 300)];
        let (wdc, fd) = aggregate(&scores).unwrap();
        assert_relative_eq!(wdc, 0.3);
        assert_relative_eq!(fd, 0.3);
    }

    #[test]
    fn aggregate_single_score_is_identity() {
        let scores = vec![SegScores::new(0.25, 0.75, 64)];
        let (wdc, fd) = aggregate(&scores).unwrap();
        assert_relative_eq!(wdc, 0.25);
        assert_relative_eq!(fd, 0.75);
    }

    #[test]
    fn aggregate_equal_sizes_is_symmetric_mean() {
        let scores = vec![SegScores::new(0.2, 0.1, 128), SegScores::new(0.8, 0.5, 128)];
        let (wdc, fd) = aggregate(&scores).unwrap();
        assert_relative_eq!(wdc, 0.5);
        assert_relative_eq!(fd, 0.3);
    }

    #[test]
    fn aggregate_rejects_empty_input() {
        assert!(aggregate(&[]).is_err());
    }
}
