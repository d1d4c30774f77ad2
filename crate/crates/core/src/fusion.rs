//! Belief-function machinery: basic belief assignments built from classifier
//! outputs, non-normalized conjunctive combination, conflict measures and
//! the pignistic decision rule.
//!
//! Subsets of the class frame are encoded as bit-sets (`bit i` set means
//! class `i` is in the subset), so the empty set is `0` and the full frame
//! is the all-ones mask.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{CertaintyScale, ClassId, TileComposition};

/// Masses smaller than this are pruned after combination (the empty set is
/// kept regardless so conflict stays exact).
const PRUNE_EPS: f64 = 1e-15;

/// Frames up to this size use a dense array during combination.
const DENSE_LIMIT: usize = 12;

/// Frame of discernment: the exhaustive set of `n` classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    n: usize,
}

impl Frame {
    /// `n` must be in `2..=20`; subsets are enumerated over `2^n` elements.
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=20).contains(&n) {
            return Err(Error::InvalidArgument(format!(
                "frame size must be in 2..=20, got {n}"
            )));
        }
        Ok(Self { n })
    }

    pub fn n_classes(&self) -> usize {
        self.n
    }

    /// Bit-set of the full frame.
    pub fn theta(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub fn singleton(&self, class: ClassId) -> Result<u32> {
        if class >= self.n {
            return Err(Error::InvalidClass {
                id: class,
                n_classes: self.n,
            });
        }
        Ok(1 << class)
    }

    pub fn complement(&self, subset: u32) -> u32 {
        self.theta() & !subset
    }

    pub fn contains(&self, subset: u32) -> bool {
        subset & !self.theta() == 0
    }
}

/// Basic belief assignment: nonnegative masses over subsets of the frame
/// summing to 1. Mass on the empty set is allowed; the non-normalized
/// conjunctive rule produces it.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    masses: BTreeMap<u32, f64>,
}

impl MassFunction {
    /// Validates subsets against the frame, rejects negative masses and
    /// requires the total to be 1 within `1e-9`. Zero-mass entries are
    /// dropped.
    pub fn new<I>(frame: Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let mut masses: BTreeMap<u32, f64> = BTreeMap::new();
        for (subset, mass) in entries {
            if !frame.contains(subset) {
                return Err(Error::InvalidArgument(format!(
                    "subset {subset:#b} is outside the frame of {} classes",
                    frame.n_classes()
                )));
            }
            if !mass.is_finite() || mass < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "mass {mass} for subset {subset:#b} must be finite and nonnegative"
                )));
            }
            if mass > 0.0 {
                *masses.entry(subset).or_insert(0.0) += mass;
            }
        }
        let total: f64 = masses.values().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "masses must sum to 1, got {total}"
            )));
        }
        Ok(Self { frame, masses })
    }

    /// The vacuous belief: all mass on the full frame.
    pub fn vacuous(frame: Frame) -> Self {
        let mut masses = BTreeMap::new();
        masses.insert(frame.theta(), 1.0);
        Self { frame, masses }
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn mass(&self, subset: u32) -> f64 {
        self.masses.get(&subset).copied().unwrap_or(0.0)
    }

    /// Mass on the empty set, i.e. the conflict carried by this bba.
    pub fn conflict(&self) -> f64 {
        self.mass(0)
    }

    pub fn total(&self) -> f64 {
        self.masses.values().sum()
    }

    pub fn focal_elements(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.masses.iter().map(|(s, m)| (*s, *m))
    }

    pub fn focal_count(&self) -> usize {
        self.masses.len()
    }

    /// Conjunctive (non-normalized) combination with another bba on the
    /// same frame: products of masses land on the intersection of their
    /// focal elements, and conflict stays on the empty set.
    pub fn combine_with(&self, other: &MassFunction) -> Result<MassFunction> {
        if self.frame != other.frame {
            return Err(Error::FrameMismatch(self.frame.n, other.frame.n));
        }
        let n = self.frame.n_classes();
        let mut masses: BTreeMap<u32, f64> = BTreeMap::new();
        if n <= DENSE_LIMIT {
            let mut dense = vec![0.0f64; 1 << n];
            for (x, mx) in &self.masses {
                for (y, my) in &other.masses {
                    dense[(x & y) as usize] += mx * my;
                }
            }
            for (subset, mass) in dense.into_iter().enumerate() {
                if mass > 0.0 {
                    masses.insert(subset as u32, mass);
                }
            }
        } else {
            for (x, mx) in &self.masses {
                for (y, my) in &other.masses {
                    *masses.entry(x & y).or_insert(0.0) += mx * my;
                }
            }
        }
        // Prune dust and renormalize only when something was removed.
        let pruned: f64 = masses
            .iter()
            .filter(|(s, m)| **s != 0 && **m < PRUNE_EPS)
            .map(|(_, m)| *m)
            .sum();
        if pruned > 0.0 {
            masses.retain(|s, m| *s == 0 || *m >= PRUNE_EPS);
            let total: f64 = masses.values().sum();
            if total > 0.0 {
                for m in masses.values_mut() {
                    *m /= total;
                }
            }
        }
        Ok(MassFunction {
            frame: self.frame,
            masses,
        })
    }

    /// Pignistic probability: each focal element splits its mass equally
    /// among its singletons, normalized by `1 - m(empty)`.
    ///
    /// Errors when (numerically) all mass sits on the empty set.
    pub fn pignistic(&self) -> Result<Vec<f64>> {
        let open = 1.0 - self.conflict();
        if open <= 1e-12 {
            return Err(Error::TotalConflict);
        }
        let n = self.frame.n_classes();
        let mut bet = vec![0.0; n];
        for (subset, mass) in &self.masses {
            if *subset == 0 {
                continue;
            }
            let share = mass / subset.count_ones() as f64;
            for (class, slot) in bet.iter_mut().enumerate() {
                if subset & (1 << class) != 0 {
                    *slot += share;
                }
            }
        }
        for slot in &mut bet {
            *slot /= open;
        }
        Ok(bet)
    }

    /// Class with the maximal pignistic probability; ties go to the
    /// smallest class id.
    pub fn decide(&self) -> Result<ClassId> {
        let bet = self.pignistic()?;
        let mut best = 0;
        for (class, p) in bet.iter().enumerate().skip(1) {
            if *p > bet[best] {
                best = class;
            }
        }
        Ok(best)
    }
}

/// Left fold of the conjunctive rule over a nonempty list.
pub fn combine(ms: &[MassFunction]) -> Result<MassFunction> {
    let (first, rest) = ms
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("cannot combine an empty list of bbas".into()))?;
    let mut out = first.clone();
    for m in rest {
        out = out.combine_with(m)?;
    }
    Ok(out)
}

/// Conflict of combining `k` copies of the same bba; `k` must be at least 1.
pub fn auto_conflict(m: &MassFunction, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "auto-conflict needs at least one copy".into(),
        ));
    }
    let mut out = m.clone();
    for _ in 1..k {
        out = out.combine_with(m)?;
    }
    Ok(out.conflict())
}

/// Reliability and normalization parameters for the bba constructors:
/// `alpha[source][class]` discounts each source per class, `nu[class]`
/// shapes the distance attenuation and `r[source]` rescales likelihoods.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionConfig {
    n_classes: usize,
    n_sources: usize,
    alpha: Vec<f64>,
    nu: Vec<f64>,
    r: Vec<f64>,
}

impl FusionConfig {
    /// All reliabilities at 1, all `nu` and `r` at 1.
    pub fn uniform(n_classes: usize, n_sources: usize) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::InvalidArgument(
                "fusion needs at least 2 classes".into(),
            ));
        }
        if n_sources == 0 {
            return Err(Error::InvalidArgument(
                "fusion needs at least one source".into(),
            ));
        }
        Ok(Self {
            n_classes,
            n_sources,
            alpha: vec![1.0; n_classes * n_sources],
            nu: vec![1.0; n_classes],
            r: vec![1.0; n_sources],
        })
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    pub fn alpha(&self, source: usize, class: ClassId) -> f64 {
        self.alpha[source * self.n_classes + class]
    }

    pub fn set_alpha(&mut self, source: usize, class: ClassId, value: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be in [0, 1], got {value}"
            )));
        }
        self.check_source(source)?;
        if class >= self.n_classes {
            return Err(Error::InvalidClass {
                id: class,
                n_classes: self.n_classes,
            });
        }
        self.alpha[source * self.n_classes + class] = value;
        Ok(())
    }

    pub fn set_alpha_all(&mut self, value: f64) -> Result<()> {
        for source in 0..self.n_sources {
            for class in 0..self.n_classes {
                self.set_alpha(source, class, value)?;
            }
        }
        Ok(())
    }

    pub fn nu(&self, class: ClassId) -> f64 {
        self.nu[class]
    }

    pub fn set_nu(&mut self, class: ClassId, value: f64) -> Result<()> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "nu must be finite and nonnegative, got {value}"
            )));
        }
        if class >= self.n_classes {
            return Err(Error::InvalidClass {
                id: class,
                n_classes: self.n_classes,
            });
        }
        self.nu[class] = value;
        Ok(())
    }

    pub fn set_nu_all(&mut self, value: f64) -> Result<()> {
        for class in 0..self.n_classes {
            self.set_nu(class, value)?;
        }
        Ok(())
    }

    pub fn r(&self, source: usize) -> f64 {
        self.r[source]
    }

    pub fn set_r(&mut self, source: usize, value: f64) -> Result<()> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "source normalization must be positive, got {value}"
            )));
        }
        self.check_source(source)?;
        self.r[source] = value;
        Ok(())
    }

    /// Sets `r[source]` to the inverse of the largest likelihood the source
    /// produced over the data; that maximum must be positive.
    pub fn set_r_from_max_likelihood(&mut self, source: usize, max_p: f64) -> Result<()> {
        if !max_p.is_finite() || max_p <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "maximal likelihood must be positive to normalize, got {max_p}"
            )));
        }
        self.set_r(source, 1.0 / max_p)
    }

    fn check_source(&self, source: usize) -> Result<()> {
        if source >= self.n_sources {
            return Err(Error::InvalidArgument(format!(
                "source {source} out of range for {} sources",
                self.n_sources
            )));
        }
        Ok(())
    }
}

/// Probabilistic-model bbas: one per class, built from the source's
/// per-class likelihoods. With `rp = r * p(class)`:
///
/// `m({C_i}) = alpha * rp / (1 + rp)`, `m({C_i}^c) = alpha / (1 + rp)`,
/// `m(Theta) = 1 - alpha`. The three masses sum to 1 identically.
pub fn appriou_bbas(
    config: &FusionConfig,
    source: usize,
    likelihoods: &[f64],
) -> Result<Vec<MassFunction>> {
    config.check_source(source)?;
    if likelihoods.len() != config.n_classes() {
        return Err(Error::DimensionMismatch(format!(
            "{} likelihoods for {} classes",
            likelihoods.len(),
            config.n_classes()
        )));
    }
    if likelihoods.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidArgument(
            "likelihoods must be finite and nonnegative".into(),
        ));
    }
    let frame = Frame::new(config.n_classes())?;
    let r = config.r(source);
    let mut out = Vec::with_capacity(config.n_classes());
    for (class, p) in likelihoods.iter().enumerate() {
        let alpha = config.alpha(source, class);
        let rp = r * p;
        let denom = 1.0 + rp;
        let singleton = frame.singleton(class)?;
        out.push(MassFunction::new(
            frame,
            [
                (singleton, alpha * rp / denom),
                (frame.complement(singleton), alpha / denom),
                (frame.theta(), 1.0 - alpha),
            ],
        )?);
    }
    Ok(out)
}

/// Distance-model bbas: one per prototype `(class, distance)`. With
/// `phi = exp(-nu_class * d^2)`:
///
/// `m({C_i}) = alpha * phi`, `m(Theta) = 1 - alpha * phi`.
pub fn denoeux_bbas(
    config: &FusionConfig,
    source: usize,
    prototypes: &[(ClassId, f64)],
) -> Result<Vec<MassFunction>> {
    config.check_source(source)?;
    let frame = Frame::new(config.n_classes())?;
    let mut out = Vec::with_capacity(prototypes.len());
    for &(class, distance) in prototypes {
        if class >= config.n_classes() {
            return Err(Error::InvalidClass {
                id: class,
                n_classes: config.n_classes(),
            });
        }
        if !distance.is_finite() || distance < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "distance must be finite and nonnegative, got {distance}"
            )));
        }
        let alpha = config.alpha(source, class);
        let phi = (-config.nu(class) * distance * distance).exp();
        let support = alpha * phi;
        out.push(MassFunction::new(
            frame,
            [
                (frame.singleton(class)?, support),
                (frame.theta(), 1.0 - support),
            ],
        )?);
    }
    Ok(out)
}

/// Bba summarizing one expert's labeling of a tile: each class receives its
/// labeled pixel fraction scaled by the grade weight, the remainder goes to
/// the full frame. An empty composition carries no evidence and is an error.
pub fn expert_tile_bba(
    comp: &TileComposition,
    scale: &CertaintyScale,
    frame: Frame,
) -> Result<MassFunction> {
    if comp.is_empty() {
        return Err(Error::EmptyComposition);
    }
    let mut singleton_mass = vec![0.0f64; frame.n_classes()];
    let mut assigned = 0.0f64;
    for entry in comp.entries() {
        if entry.class >= frame.n_classes() {
            return Err(Error::InvalidClass {
                id: entry.class,
                n_classes: frame.n_classes(),
            });
        }
        let weight = scale.weight(entry.grade)?;
        // Exact rational product, converted to double once per entry.
        let mass = (comp.fraction(entry) * weight).to_f64().unwrap_or(0.0);
        singleton_mass[entry.class] += mass;
        assigned += mass;
    }
    let mut entries: Vec<(u32, f64)> = singleton_mass
        .into_iter()
        .enumerate()
        .filter(|(_, m)| *m > 0.0)
        .map(|(class, m)| (1u32 << class, m))
        .collect();
    entries.push((frame.theta(), (1.0 - assigned).max(0.0)));
    MassFunction::new(frame, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CompositionEntry;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn frame2() -> Frame {
        Frame::new(2).unwrap()
    }

    #[test]
    fn frame_rejects_out_of_range_sizes() {
        assert!(Frame::new(1).is_err());
        assert!(Frame::new(21).is_err());
        assert!(Frame::new(20).is_ok());
    }

    #[test]
    fn mass_function_requires_unit_total() {
        let frame = frame2();
        assert!(MassFunction::new(frame, [(0b01, 0.5)]).is_err());
        assert!(MassFunction::new(frame, [(0b01, 0.5), (0b11, 0.5)]).is_ok());
    }

    #[test]
    fn mass_function_rejects_foreign_subsets() {
        let frame = frame2();
        assert!(MassFunction::new(frame, [(0b100, 1.0)]).is_err());
    }

    #[test]
    fn combine_with_vacuous_is_identity() {
        let frame = frame2();
        let m = MassFunction::new(frame, [(0b01, 0.6), (0b11, 0.4)]).unwrap();
        let combined = combine(&[MassFunction::vacuous(frame), m.clone()]).unwrap();
        assert_eq!(combined, m);
    }

    #[test]
    fn combine_two_simple_bbas() {
        // m1({a}) = 0.6, m1(T) = 0.4; m2({b}) = 0.5, m2(T) = 0.5.
        let frame = frame2();
        let m1 = MassFunction::new(frame, [(0b01, 0.6), (0b11, 0.4)]).unwrap();
        let m2 = MassFunction::new(frame, [(0b10, 0.5), (0b11, 0.5)]).unwrap();
        let c = m1.combine_with(&m2).unwrap();
        assert_relative_eq!(c.mass(0b00), 0.3, epsilon = 1e-12);
        assert_relative_eq!(c.mass(0b01), 0.3, epsilon = 1e-12);
        assert_relative_eq!(c.mass(0b10), 0.2, epsilon = 1e-12);
        assert_relative_eq!(c.mass(0b11), 0.2, epsilon = 1e-12);
        assert_relative_eq!(c.conflict(), 0.3, epsilon = 1e-12);
    }

    #[test]
    fn combine_is_commutative() {
        let frame = frame2();
        let m1 = MassFunction::new(frame, [(0b01, 0.6), (0b11, 0.4)]).unwrap();
        let m2 = MassFunction::new(frame, [(0b10, 0.5), (0b11, 0.5)]).unwrap();
        let ab = m1.combine_with(&m2).unwrap();
        let ba = m2.combine_with(&m1).unwrap();
        for subset in 0..=frame.theta() {
            assert_relative_eq!(ab.mass(subset), ba.mass(subset), epsilon = 1e-12);
        }
    }

    #[test]
    fn combine_rejects_frame_mismatch() {
        let a = MassFunction::vacuous(frame2());
        let b = MassFunction::vacuous(Frame::new(3).unwrap());
        assert!(matches!(
            a.combine_with(&b),
            Err(Error::FrameMismatch(2, 3))
        ));
    }

    #[test]
    fn combine_rejects_empty_list() {
        assert!(combine(&[]).is_err());
    }

    #[test]
    fn auto_conflict_of_vacuous_is_zero() {
        let m = MassFunction::vacuous(frame2());
        for k in 1..=4 {
            assert_eq!(auto_conflict(&m, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn auto_conflict_of_opposed_singletons() {
        let m = MassFunction::new(frame2(), [(0b01, 0.5), (0b10, 0.5)]).unwrap();
        assert_relative_eq!(auto_conflict(&m, 2).unwrap(), 0.5, epsilon = 1e-12);
        assert_eq!(auto_conflict(&m, 1).unwrap(), 0.0);
        assert!(auto_conflict(&m, 0).is_err());
    }

    #[test]
    fn pignistic_of_vacuous_is_uniform() {
        let frame = Frame::new(3).unwrap();
        let bet = MassFunction::vacuous(frame).pignistic().unwrap();
        for p in bet {
            assert_relative_eq!(p, 1.0 / 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn pignistic_normalizes_by_open_world_mass() {
        let frame = frame2();
        let m =
            MassFunction::new(frame, [(0b00, 0.3), (0b01, 0.3), (0b10, 0.2), (0b11, 0.2)]).unwrap();
        let bet = m.pignistic().unwrap();
        assert_relative_eq!(bet[0], 0.4 / 0.7, epsilon = 1e-12);
        assert_relative_eq!(bet[1], 0.3 / 0.7, epsilon = 1e-12);
        assert_relative_eq!(bet[0] + bet[1], 1.0, epsilon = 1e-12);
        assert_eq!(m.decide().unwrap(), 0);
    }

    #[test]
    fn pignistic_rejects_total_conflict() {
        let frame = frame2();
        let m = MassFunction::new(frame, [(0b00, 1.0)]).unwrap();
        assert!(matches!(m.pignistic(), Err(Error::TotalConflict)));
    }

    #[test]
    fn decide_categorical_and_tie_break() {
        let frame = frame2();
        let m = MassFunction::new(frame, [(0b10, 1.0)]).unwrap();
        assert_eq!(m.decide().unwrap(), 1);
        // Vacuous is a tie; the smallest class id wins.
        assert_eq!(MassFunction::vacuous(frame).decide().unwrap(), 0);
    }

    #[test]
    fn appriou_at_maximal_likelihood_splits_evenly() {
        let mut config = FusionConfig::uniform(3, 1).unwrap();
        config.set_r_from_max_likelihood(0, 0.8).unwrap();
        let bbas = appriou_bbas(&config, 0, &[0.8, 0.2, 0.0]).unwrap();
        let frame = Frame::new(3).unwrap();
        // Class 0 saw the maximum: r * p = 1.
        assert_relative_eq!(bbas[0].mass(0b001), 0.5, epsilon = 1e-12);
        assert_relative_eq!(bbas[0].mass(frame.complement(0b001)), 0.5, epsilon = 1e-12);
        assert_eq!(bbas[0].mass(frame.theta()), 0.0);
    }

    #[test]
    fn appriou_with_zero_reliability_is_vacuous() {
        let mut config = FusionConfig::uniform(2, 1).unwrap();
        config.set_alpha_all(0.0).unwrap();
        let bbas = appriou_bbas(&config, 0, &[0.3, 0.7]).unwrap();
        for bba in bbas {
            assert_eq!(bba.mass(bba.frame().theta()), 1.0);
        }
    }

    #[test]
    fn appriou_with_zero_likelihood_commits_to_complement() {
        let config = FusionConfig::uniform(2, 1).unwrap();
        let bbas = appriou_bbas(&config, 0, &[0.0, 1.0]).unwrap();
        assert_eq!(bbas[0].mass(0b01), 0.0);
        assert_relative_eq!(bbas[0].mass(0b10), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn appriou_masses_sum_to_one() {
        let mut config = FusionConfig::uniform(4, 2).unwrap();
        config.set_alpha_all(0.7).unwrap();
        config.set_r(1, 2.5).unwrap();
        for bba in appriou_bbas(&config, 1, &[0.1, 0.25, 0.0, 0.4]).unwrap() {
            assert_relative_eq!(bba.total(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn denoeux_at_zero_distance_is_categorical() {
        let config = FusionConfig::uniform(2, 1).unwrap();
        let bbas = denoeux_bbas(&config, 0, &[(0, 0.0)]).unwrap();
        assert_relative_eq!(bbas[0].mass(0b01), 1.0, epsilon = 1e-12);
        assert_eq!(bbas[0].mass(0b11), 0.0);
    }

    #[test]
    fn denoeux_with_zero_nu_ignores_distance() {
        let mut config = FusionConfig::uniform(2, 1).unwrap();
        config.set_nu_all(0.0).unwrap();
        config.set_alpha_all(0.6).unwrap();
        let bbas = denoeux_bbas(&config, 0, &[(1, 42.0)]).unwrap();
        assert_relative_eq!(bbas[0].mass(0b10), 0.6, epsilon = 1e-12);
    }

    #[test]
    fn denoeux_worked_example() {
        let mut config = FusionConfig::uniform(2, 1).unwrap();
        config.set_alpha_all(0.8).unwrap();
        let bbas = denoeux_bbas(&config, 0, &[(0, 1.0)]).unwrap();
        assert_relative_eq!(bbas[0].mass(0b01), 0.8 * (-1.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(
            bbas[0].mass(0b11),
            1.0 - 0.8 * (-1.0f64).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn denoeux_rejects_negative_distance() {
        let config = FusionConfig::uniform(2, 1).unwrap();
        assert!(denoeux_bbas(&config, 0, &[(0, -1.0)]).is_err());
    }

    #[test]
    fn constructor_bbas_carry_no_conflict() {
        let config = FusionConfig::uniform(3, 1).unwrap();
        for bba in appriou_bbas(&config, 0, &[0.5, 0.1, 0.2]).unwrap() {
            assert_eq!(bba.conflict(), 0.0);
        }
        for bba in denoeux_bbas(&config, 0, &[(0, 0.5), (2, 1.5)]).unwrap() {
            assert_eq!(bba.conflict(), 0.0);
        }
    }

    #[test]
    fn expert_tile_bba_homogeneous() {
        let frame = Frame::new(3).unwrap();
        let scale = CertaintyScale::new(vec![(
            "sure",
            BigRational::new(BigInt::from(2), BigInt::from(3)),
        )])
        .unwrap();
        let comp = TileComposition::new(
            vec![CompositionEntry {
                class: 1,
                grade: 0,
                count: 16,
            }],
            16,
        )
        .unwrap();
        let bba = expert_tile_bba(&comp, &scale, frame).unwrap();
        assert_relative_eq!(bba.mass(0b010), 2.0 / 3.0, epsilon = 1e-12);
        assert_relative_eq!(bba.mass(frame.theta()), 1.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn expert_tile_bba_mixed_full_certainty() {
        let frame = Frame::new(3).unwrap();
        let scale = CertaintyScale::unit(1).unwrap();
        let comp = TileComposition::new(
            vec![
                CompositionEntry {
                    class: 0,
                    grade: 0,
                    count: 50,
                },
                CompositionEntry {
                    class: 2,
                    grade: 0,
                    count: 206,
                },
            ],
            256,
        )
        .unwrap();
        let bba = expert_tile_bba(&comp, &scale, frame).unwrap();
        assert_relative_eq!(bba.mass(0b001), 50.0 / 256.0, epsilon = 1e-12);
        assert_relative_eq!(bba.mass(0b100), 206.0 / 256.0, epsilon = 1e-12);
        assert_eq!(bba.mass(frame.theta()), 0.0);
    }

    #[test]
    fn expert_tile_bba_rejects_empty_composition() {
        let frame = frame2();
        let scale = CertaintyScale::unit(1).unwrap();
        let comp = TileComposition::empty(16).unwrap();
        assert!(matches!(
            expert_tile_bba(&comp, &scale, frame),
            Err(Error::EmptyComposition)
        ));
    }
}
