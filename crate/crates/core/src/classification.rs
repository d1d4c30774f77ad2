//! Certainty-weighted confusion matrices and the rate vectors derived from
//! them.
//!
//! A classification unit (tile) contributes fractionally to the raw matrix:
//! each `(class, grade)` group adds `(pixel count / tile area) * weight` to
//! the cell `(true class, predicted class)`. Raw matrices are exact
//! rationals; normalization converts to doubles. Multi-expert and
//! multi-image results are merged by entrywise addition of the raw matrices
//! and normalized only afterwards.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{CertaintyScale, ClassId, Homogeneity, TileComposition, TilePrediction};

/// Outcome of feeding one unit to the accumulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitStatus {
    Accumulated,
    /// The composition had no labeled pixels; nothing was added.
    Empty,
}

/// Raw (non-normalized, rational-valued) confusion matrix. Entry `(i, j)`
/// weighs units of true class `i` classified as `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionAccumulator {
    n: usize,
    cells: Vec<BigRational>,
    units: u64,
    empty_units: u64,
}

impl ConfusionAccumulator {
    /// Zero matrix over `n` classes; the identity of [`merge`].
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "confusion matrix needs at least 2 classes");
        Self {
            n,
            cells: vec![BigRational::zero(); n * n],
            units: 0,
            empty_units: 0,
        }
    }

    pub fn n_classes(&self) -> usize {
        self.n
    }

    /// Units accumulated (empty units excluded).
    pub fn units(&self) -> u64 {
        self.units
    }

    /// Units skipped because their composition was empty.
    pub fn empty_units(&self) -> u64 {
        self.empty_units
    }

    pub fn get(&self, true_class: ClassId, predicted: ClassId) -> &BigRational {
        &self.cells[true_class * self.n + predicted]
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(Zero::is_zero)
    }

    /// Adds one unit: for each `(class i, grade g, count)` group of the
    /// composition, `cm[i][predicted] += (count / area) * (W_g or 1)`.
    pub fn accumulate_unit(
        &mut self,
        comp: &TileComposition,
        predicted: ClassId,
        scale: &CertaintyScale,
        use_certainty: bool,
    ) -> Result<UnitStatus> {
        if predicted >= self.n {
            return Err(Error::InvalidClass {
                id: predicted,
                n_classes: self.n,
            });
        }
        if comp.is_empty() {
            self.empty_units += 1;
            return Ok(UnitStatus::Empty);
        }
        for entry in comp.entries() {
            if entry.class >= self.n {
                return Err(Error::InvalidClass {
                    id: entry.class,
                    n_classes: self.n,
                });
            }
            let weight = if use_certainty {
                scale.weight(entry.grade)?.clone()
            } else {
                scale.weight(entry.grade)?; // still validates the grade id
                BigRational::one()
            };
            let contribution = comp.fraction(entry) * weight;
            self.cells[entry.class * self.n + predicted] += contribution;
        }
        self.units += 1;
        Ok(UnitStatus::Accumulated)
    }

    /// Entrywise sum with another accumulator of the same size.
    pub fn merge_with(&mut self, other: &ConfusionAccumulator) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot merge confusion matrices over {} and {} classes",
                self.n, other.n
            )));
        }
        for (cell, theirs) in self.cells.iter_mut().zip(&other.cells) {
            *cell += theirs;
        }
        self.units += other.units;
        self.empty_units += other.empty_units;
        Ok(())
    }

    /// Row totals `N_i = sum_j cm_ij` as exact rationals.
    pub fn row_totals(&self) -> Vec<BigRational> {
        (0..self.n)
            .map(|i| self.cells[i * self.n..(i + 1) * self.n].iter().sum())
            .collect()
    }

    /// Column totals; with certainty weighting off and fully labeled tiles
    /// these are integers (one unit of weight per accumulated tile).
    pub fn column_sums(&self) -> Vec<BigRational> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Row-normalizes the matrix. Rows with a zero total stay zero and are
    /// flagged rather than treated as an error.
    pub fn normalize(&self) -> NormalizedConfusion {
        let totals = self.row_totals();
        let mut matrix = vec![0.0; self.n * self.n];
        let mut zero_rows = vec![false; self.n];
        for i in 0..self.n {
            if totals[i].is_zero() {
                zero_rows[i] = true;
                continue;
            }
            for j in 0..self.n {
                let cell = self.get(i, j) / &totals[i];
                matrix[i * self.n + j] = cell.to_f64().unwrap_or(0.0);
            }
        }
        let row_totals = totals.iter().map(|t| t.to_f64().unwrap_or(0.0)).collect();
        NormalizedConfusion {
            n: self.n,
            matrix,
            row_totals,
            zero_rows,
        }
    }

    pub fn to_f64_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).to_f64().unwrap_or(0.0))
                    .collect()
            })
            .collect()
    }
}

/// Entrywise sum of accumulators; commutative and associative, with
/// [`ConfusionAccumulator::new`] as identity.
pub fn merge<'a, I>(accs: I) -> Result<ConfusionAccumulator>
where
    I: IntoIterator<Item = &'a ConfusionAccumulator>,
{
    let mut iter = accs.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidArgument("cannot merge an empty list of matrices".into()))?;
    let mut out = first.clone();
    for acc in iter {
        out.merge_with(acc)?;
    }
    Ok(out)
}

/// Row-normalized confusion matrix with the row totals it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedConfusion {
    n: usize,
    matrix: Vec<f64>,
    row_totals: Vec<f64>,
    zero_rows: Vec<bool>,
}

impl NormalizedConfusion {
    pub fn n_classes(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: ClassId, j: ClassId) -> f64 {
        self.matrix[i * self.n + j]
    }

    pub fn row_totals(&self) -> &[f64] {
        &self.row_totals
    }

    /// True for classes with no accumulated weight (row left all-zero).
    pub fn zero_rows(&self) -> &[bool] {
        &self.zero_rows
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| self.matrix[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    /// Good- and error-classification rate vectors.
    ///
    /// `GCR_i` is the diagonal. `ECR_i` averages the off-diagonal row sum
    /// (units of class `i` sent elsewhere) with the off-diagonal column sum
    /// scaled by `1/(N-1)` (units of other classes sent to `i`), keeping
    /// both terms, and so the mean, inside `[0, 1]`.
    pub fn rates(&self) -> RateReport {
        let n = self.n;
        let mut gcr = vec![0.0; n];
        let mut ecr = vec![0.0; n];
        let mut represented = vec![false; n];
        for i in 0..n {
            represented[i] = !self.zero_rows[i];
            gcr[i] = self.get(i, i);
            let row_err: f64 = (0..n).filter(|j| *j != i).map(|j| self.get(i, j)).sum();
            let col_err: f64 = (0..n).filter(|k| *k != i).map(|k| self.get(k, i)).sum();
            ecr[i] = 0.5 * (row_err + col_err / (n as f64 - 1.0));
        }
        let data_rows = represented.iter().filter(|r| **r).count();
        let mean_gcr = if data_rows == 0 {
            None
        } else {
            let sum: f64 = (0..n).filter(|i| represented[*i]).map(|i| gcr[i]).sum();
            Some(sum / data_rows as f64)
        };
        RateReport {
            gcr,
            ecr,
            mean_gcr,
            represented,
        }
    }
}

/// GCR/ECR vectors plus the mean GCR over classes that had data.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub gcr: Vec<f64>,
    pub ecr: Vec<f64>,
    /// `None` when no class had any accumulated weight.
    pub mean_gcr: Option<f64>,
    pub represented: Vec<bool>,
}

impl RateReport {
    pub fn is_empty(&self) -> bool {
        !self.represented.iter().any(|r| *r)
    }
}

/// Accumulates every predicted tile of one image into a fresh matrix.
/// Tiles without a prediction are excluded entirely.
pub fn accumulate_image(
    comps: &[TileComposition],
    predictions: &TilePrediction,
    scale: &CertaintyScale,
    use_certainty: bool,
) -> Result<ConfusionAccumulator> {
    if comps.len() != predictions.tile_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} compositions but {} predicted tiles",
            comps.len(),
            predictions.tile_count()
        )));
    }
    let mut acc = ConfusionAccumulator::new(predictions.n_classes());
    for (tile, comp) in comps.iter().enumerate() {
        if let Some(predicted) = predictions.get(tile) {
            acc.accumulate_unit(comp, predicted, scale, use_certainty)?;
        }
    }
    Ok(acc)
}

/// Separate accumulators for homogeneous and inhomogeneous tiles; empty
/// tiles land in neither.
pub fn split_accumulate(
    comps: &[TileComposition],
    predictions: &TilePrediction,
    scale: &CertaintyScale,
    use_certainty: bool,
) -> Result<(ConfusionAccumulator, ConfusionAccumulator)> {
    if comps.len() != predictions.tile_count() {
        return Err(Error::DimensionMismatch(format!(
            "{} compositions but {} predicted tiles",
            comps.len(),
            predictions.tile_count()
        )));
    }
    let n = predictions.n_classes();
    let mut homogeneous = ConfusionAccumulator::new(n);
    let mut inhomogeneous = ConfusionAccumulator::new(n);
    for (tile, comp) in comps.iter().enumerate() {
        let Some(predicted) = predictions.get(tile) else {
            continue;
        };
        match comp.homogeneity() {
            Homogeneity::Homogeneous => {
                homogeneous.accumulate_unit(comp, predicted, scale, use_certainty)?;
            }
            Homogeneity::Inhomogeneous => {
                inhomogeneous.accumulate_unit(comp, predicted, scale, use_certainty)?;
            }
            Homogeneity::Empty => {}
        }
    }
    Ok((homogeneous, inhomogeneous))
}

/// Rate reports for homogeneous and inhomogeneous tiles, evaluated through
/// two independent accumulate/normalize/rates pipelines.
pub fn split_rates(
    comps: &[TileComposition],
    predictions: &TilePrediction,
    scale: &CertaintyScale,
    use_certainty: bool,
) -> Result<(RateReport, RateReport)> {
    let (hom, inhom) = split_accumulate(comps, predictions, scale, use_certainty)?;
    Ok((hom.normalize().rates(), inhom.normalize().rates()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CompositionEntry;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn three_grade_scale() -> CertaintyScale {
        CertaintyScale::new(vec![
            ("sure", ratio(2, 3)),
            ("moderately_sure", ratio(1, 2)),
            ("not_sure", ratio(1, 3)),
        ])
        .unwrap()
    }

    fn comp(entries: Vec<(ClassId, usize, u64)>, area: u64) -> TileComposition {
        TileComposition::new(
            entries
                .into_iter()
                .map(|(class, grade, count)| CompositionEntry {
                    class,
                    grade,
                    count,
                })
                .collect(),
            area,
        )
        .unwrap()
    }

    #[test]
    fn fractional_update_for_inhomogeneous_tile() {
        // 16x16 tile, 50 px of class 0 plus 206 px of class 2, predicted 0.
        let mut acc = ConfusionAccumulator::new(3);
        let c = comp(vec![(0, 0, 50), (2, 0, 206)], 256);
        acc.accumulate_unit(&c, 0, &three_grade_scale(), false)
            .unwrap();
        assert_eq!(acc.get(0, 0), &ratio(50, 256));
        assert_eq!(acc.get(2, 0), &ratio(206, 256));
        assert!(acc.get(1, 0).is_zero());
    }

    #[test]
    fn certainty_weight_scales_homogeneous_update() {
        let scale = three_grade_scale();
        let mut acc = ConfusionAccumulator::new(2);
        let c = comp(vec![(0, 1, 16)], 16); // moderately sure
        acc.accumulate_unit(&c, 0, &scale, true).unwrap();
        assert_eq!(acc.get(0, 0), &ratio(1, 2));

        let mut acc = ConfusionAccumulator::new(2);
        acc.accumulate_unit(&c, 1, &scale, true).unwrap();
        assert_eq!(acc.get(0, 1), &ratio(1, 2));
        assert!(acc.get(0, 0).is_zero());
    }

    #[test]
    fn empty_composition_is_a_flagged_noop() {
        let mut acc = ConfusionAccumulator::new(2);
        let c = TileComposition::empty(16).unwrap();
        let status = acc
            .accumulate_unit(&c, 0, &three_grade_scale(), true)
            .unwrap();
        assert_eq!(status, UnitStatus::Empty);
        assert!(acc.is_zero());
        assert_eq!(acc.empty_units(), 1);
        assert_eq!(acc.units(), 0);
    }

    #[test]
    fn invalid_grade_is_an_error() {
        let scale = CertaintyScale::unit(1).unwrap();
        let mut acc = ConfusionAccumulator::new(2);
        let c = comp(vec![(0, 5, 4)], 16);
        assert!(matches!(
            acc.accumulate_unit(&c, 0, &scale, true),
            Err(Error::InvalidGrade { id: 5, .. })
        ));
    }

    #[test]
    fn merge_with_zero_is_identity() {
        let scale = three_grade_scale();
        let mut a = ConfusionAccumulator::new(3);
        a.accumulate_unit(&comp(vec![(1, 0, 9)], 9), 2, &scale, true)
            .unwrap();
        let merged = merge([&a, &ConfusionAccumulator::new(3)]).unwrap();
        assert_eq!(merged.get(1, 2), a.get(1, 2));
        assert_eq!(merged.units(), a.units());
    }

    #[test]
    fn merge_is_commutative() {
        let scale = three_grade_scale();
        let mut a = ConfusionAccumulator::new(2);
        a.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 1, &scale, true)
            .unwrap();
        let mut b = ConfusionAccumulator::new(2);
        b.accumulate_unit(&comp(vec![(1, 2, 4)], 4), 1, &scale, true)
            .unwrap();
        assert_eq!(merge([&a, &b]).unwrap(), merge([&b, &a]).unwrap());
    }

    #[test]
    fn merge_rejects_size_mismatch() {
        let a = ConfusionAccumulator::new(2);
        let b = ConfusionAccumulator::new(3);
        assert!(merge([&a, &b]).is_err());
    }

    #[test]
    fn normalize_divides_rows() {
        let scale = CertaintyScale::unit(1).unwrap();
        let mut acc = ConfusionAccumulator::new(2);
        // cm = [[2, 0], [1, 1]]
        acc.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(1, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(1, 0, 4)], 4), 1, &scale, false)
            .unwrap();
        let ncm = acc.normalize();
        assert_relative_eq!(ncm.get(0, 0), 1.0);
        assert_relative_eq!(ncm.get(0, 1), 0.0);
        assert_relative_eq!(ncm.get(1, 0), 0.5);
        assert_relative_eq!(ncm.get(1, 1), 0.5);
    }

    #[test]
    fn normalize_flags_zero_rows() {
        let scale = CertaintyScale::unit(1).unwrap();
        let mut acc = ConfusionAccumulator::new(3);
        acc.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        let ncm = acc.normalize();
        assert_eq!(ncm.zero_rows(), &[false, true, true]);
        assert_eq!(ncm.get(1, 0), 0.0);
        assert_eq!(ncm.get(2, 2), 0.0);
    }

    #[test]
    fn rates_perfect_classifier() {
        let scale = CertaintyScale::unit(1).unwrap();
        let mut acc = ConfusionAccumulator::new(2);
        acc.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(1, 0, 4)], 4), 1, &scale, false)
            .unwrap();
        let rates = acc.normalize().rates();
        assert_eq!(rates.gcr, vec![1.0, 1.0]);
        assert_eq!(rates.ecr, vec![0.0, 0.0]);
        assert_eq!(rates.mean_gcr, Some(1.0));
    }

    #[test]
    fn rates_half_confused_row() {
        // Ncm = [[1, 0], [0.5, 0.5]] -> GCR = [1, 0.5], ECR = [0.25, 0.25].
        let scale = CertaintyScale::unit(1).unwrap();
        let mut acc = ConfusionAccumulator::new(2);
        acc.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(1, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(1, 0, 4)], 4), 1, &scale, false)
            .unwrap();
        let rates = acc.normalize().rates();
        assert_relative_eq!(rates.gcr[0], 1.0);
        assert_relative_eq!(rates.gcr[1], 0.5);
        assert_relative_eq!(rates.ecr[0], 0.25);
        assert_relative_eq!(rates.ecr[1], 0.25);
        assert_relative_eq!(rates.mean_gcr.unwrap(), 0.75);
    }

    #[test]
    fn rates_total_confusion() {
        let scale = CertaintyScale::unit(1).unwrap();
        let mut acc = ConfusionAccumulator::new(2);
        acc.accumulate_unit(&comp(vec![(0, 0, 4)], 4), 1, &scale, false)
            .unwrap();
        acc.accumulate_unit(&comp(vec![(1, 0, 4)], 4), 0, &scale, false)
            .unwrap();
        let rates = acc.normalize().rates();
        assert_eq!(rates.gcr, vec![0.0, 0.0]);
        assert_eq!(rates.ecr, vec![1.0, 1.0]);
        assert_eq!(rates.mean_gcr, Some(0.0));
    }

    #[test]
    fn split_rates_all_homogeneous_leaves_inhomogeneous_empty() {
        let scale = CertaintyScale::unit(1).unwrap();
        let comps = vec![comp(vec![(0, 0, 4)], 4), comp(vec![(1, 0, 4)], 4)];
        let preds = TilePrediction::new(2, 1, 2, vec![Some(0), Some(1)]).unwrap();
        let (hom, inhom) = split_rates(&comps, &preds, &scale, false).unwrap();
        assert!(!hom.is_empty());
        assert!(inhom.is_empty());
        assert_eq!(inhom.mean_gcr, None);
    }

    #[test]
    fn split_rates_all_inhomogeneous_leaves_homogeneous_empty() {
        let scale = CertaintyScale::unit(1).unwrap();
        let comps = vec![comp(vec![(0, 0, 2), (1, 0, 2)], 4)];
        let preds = TilePrediction::new(1, 1, 2, vec![Some(0)]).unwrap();
        let (hom, inhom) = split_rates(&comps, &preds, &scale, false).unwrap();
        assert!(hom.is_empty());
        assert!(!inhom.is_empty());
    }

    #[test]
    fn split_rates_mixed_matches_hand_computation() {
        // Four tiles of area 4 over two classes:
        //   t0 hom class 0 predicted 0, t1 hom class 0 predicted 1,
        //   t2 mixed (3 px class 0, 1 px class 1) predicted 1, t3 hom class 1 predicted 1.
        let scale = CertaintyScale::unit(1).unwrap();
        let comps = vec![
            comp(vec![(0, 0, 4)], 4),
            comp(vec![(0, 0, 4)], 4),
            comp(vec![(0, 0, 3), (1, 0, 1)], 4),
            comp(vec![(1, 0, 4)], 4),
        ];
        let preds = TilePrediction::new(4, 1, 2, vec![Some(0), Some(1), Some(1), Some(1)]).unwrap();
        let (hom, inhom) = split_rates(&comps, &preds, &scale, false).unwrap();
        // Homogeneous: cm = [[1, 1], [0, 1]] -> gcr = [0.5, 1].
        assert_relative_eq!(hom.gcr[0], 0.5);
        assert_relative_eq!(hom.gcr[1], 1.0);
        // Inhomogeneous: cm = [[0, 3/4], [0, 1/4]] -> gcr = [0, 1].
        assert_relative_eq!(inhom.gcr[0], 0.0);
        assert_relative_eq!(inhom.gcr[1], 1.0);
        assert_relative_eq!(inhom.ecr[0], 0.5 * (1.0 + 0.0));
        assert_relative_eq!(inhom.ecr[1], 0.5 * (0.0 + 1.0));
    }

    #[test]
    fn two_expert_merge_equals_hand_sum() {
        // One 4-tile image, 3 classes, same predictions for both experts but
        // different labelings; merged matrix must be the entrywise sum.
        let scale = three_grade_scale();
        let preds = TilePrediction::new(2, 2, 3, vec![Some(0), Some(1), Some(2), Some(0)]).unwrap();
        let expert_a = vec![
            comp(vec![(0, 0, 4)], 4),
            comp(vec![(1, 1, 4)], 4),
            comp(vec![(2, 2, 4)], 4),
            comp(vec![(1, 0, 2), (2, 0, 2)], 4),
        ];
        let expert_b = vec![
            comp(vec![(0, 2, 4)], 4),
            comp(vec![(1, 1, 3), (0, 1, 1)], 4),
            comp(vec![(2, 0, 4)], 4),
            comp(vec![(0, 0, 4)], 4),
        ];
        let a = accumulate_image(&expert_a, &preds, &scale, true).unwrap();
        let b = accumulate_image(&expert_b, &preds, &scale, true).unwrap();
        let fused = merge([&a, &b]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(fused.get(i, j), &(a.get(i, j) + b.get(i, j)));
            }
        }
        // Spot-check one cell by hand: cm[0][0] gets 2/3 from expert A tile 0,
        // 1/3 from B tile 0 (grade 2) and 2/3 from B tile 3 (grade 0).
        assert_eq!(fused.get(0, 0), &(ratio(2, 3) + ratio(1, 3) + ratio(2, 3)));
    }
}
