//! Expansion moduli of partial bijections between truncated spaces.
//!
//! The modulus table records, for each radius up to a budget, the smallest
//! target radius that contains the image of every source ball of that
//! radius. A bijection is an asymorphism at the budget when both its table
//! and its inverse's table are finite and free of truncation artifacts.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{FiniteSpace, Point, Radius};
use crate::error::{CoarseError, Result};

/// A finite injective map between the points of two spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialBijection {
    forward: BTreeMap<Point, Point>,
}

impl PartialBijection {
    pub fn new(pairs: impl IntoIterator<Item = (Point, Point)>) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut seen_images = BTreeSet::new();
        for (src, dst) in pairs {
            if !seen_images.insert(dst.clone()) {
                return Err(CoarseError::NotBijective(format!(
                    "image {dst} is hit twice"
                )));
            }
            if forward.insert(src.clone(), dst).is_some() {
                return Err(CoarseError::NotBijective(format!(
                    "source {src} is mapped twice"
                )));
            }
        }
        Ok(PartialBijection { forward })
    }

    pub fn identity_on(space: &FiniteSpace) -> Self {
        PartialBijection {
            forward: space
                .points()
                .iter()
                .map(|p| (p.clone(), p.clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn get(&self, src: &Point) -> Option<&Point> {
        self.forward.get(src)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Point, &Point)> {
        self.forward.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Point> {
        self.forward.keys()
    }

    pub fn inverse(&self) -> PartialBijection {
        PartialBijection {
            forward: self
                .forward
                .iter()
                .map(|(a, b)| (b.clone(), a.clone()))
                .collect(),
        }
    }

    /// Checks the map is a bijection from all of `src` onto all of `dst`.
    pub fn require_total(&self, src: &FiniteSpace, dst: &FiniteSpace) -> Result<()> {
        if src.len() != dst.len() {
            return Err(CoarseError::SizeMismatch {
                left: src.len(),
                right: dst.len(),
            });
        }
        if self.forward.len() != src.len() {
            return Err(CoarseError::NotBijective(format!(
                "map covers {} of {} source points",
                self.forward.len(),
                src.len()
            )));
        }
        for (a, b) in &self.forward {
            if !src.contains(a) {
                return Err(CoarseError::NotBijective(format!(
                    "{a} is not a source point"
                )));
            }
            if !dst.contains(b) {
                return Err(CoarseError::NotBijective(format!(
                    "{b} is not a target point"
                )));
            }
        }
        Ok(())
    }
}

/// One row of a modulus table: the smallest target radius bounding image
/// balls of this source radius, or `None` when no stored radius does, plus
/// whether the truncation could have clipped the answer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusEntry {
    pub radius: u64,
    pub value: Option<u64>,
    pub reliable: bool,
}

/// The expansion modulus of a map, evaluated up to a radius budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModulusTable {
    pub entries: Vec<ModulusEntry>,
    pub budget: u64,
}

impl ModulusTable {
    /// A table with no entries: expresses "no constraint".
    pub fn empty() -> Self {
        ModulusTable {
            entries: Vec::new(),
            budget: 0,
        }
    }

    /// A table bounding every radius up to the budget by the same value.
    pub fn constant(budget: u64, value: u64) -> Self {
        ModulusTable {
            entries: (0..=budget)
                .map(|radius| ModulusEntry {
                    radius,
                    value: Some(value),
                    reliable: true,
                })
                .collect(),
            budget,
        }
    }

    /// The identity bound `µ(r) = r`.
    pub fn identity(budget: u64) -> Self {
        ModulusTable {
            entries: (0..=budget)
                .map(|radius| ModulusEntry {
                    radius,
                    value: Some(radius),
                    reliable: true,
                })
                .collect(),
            budget,
        }
    }

    pub fn entry_for(&self, radius: u64) -> Option<&ModulusEntry> {
        self.entries.iter().find(|e| e.radius == radius)
    }

    /// The bound applying to a pair at source distance `d`: the value of the
    /// smallest tabulated radius `>= d`.
    pub fn bound_for_distance(&self, d: u64) -> Option<u64> {
        self.entries
            .iter()
            .filter(|e| e.radius >= d)
            .filter_map(|e| e.value)
            .min()
    }

    pub fn is_bounded(&self) -> bool {
        self.entries.iter().all(|e| e.value.is_some())
    }

    pub fn is_reliable(&self) -> bool {
        self.entries.iter().all(|e| e.reliable)
    }

    pub fn is_monotone(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| match (w[0].value, w[1].value) {
                (Some(a), Some(b)) => a <= b,
                _ => true,
            })
    }

    pub fn value_at(&self, radius: u64) -> Option<u64> {
        self.entry_for(radius).and_then(|e| e.value)
    }
}

fn source_radii(space: &FiniteSpace, budget: u64) -> Vec<(u64, Radius)> {
    if space.is_metric() {
        (0..=budget).map(|r| (r, Radius::Int(r))).collect()
    } else {
        let top = (space.named_radius_count() as u64).saturating_sub(1);
        (0..=budget.min(top))
            .map(|r| (r, Radius::Named(r as usize)))
            .collect()
    }
}

/// `µ(α)` = the largest target distance between images of points lying in a
/// common source ball of radius α, over the map's domain.
pub fn expansion_modulus(
    src: &FiniteSpace,
    dst: &FiniteSpace,
    f: &PartialBijection,
    budget: u64,
) -> Result<ModulusTable> {
    expansion_modulus_excluding(src, dst, f, budget, &BTreeSet::new())
}

/// Same as [`expansion_modulus`], skipping source points in `excluded`.
/// Used for assertions "outside the exceptional set".
pub fn expansion_modulus_excluding(
    src: &FiniteSpace,
    dst: &FiniteSpace,
    f: &PartialBijection,
    budget: u64,
    excluded: &BTreeSet<Point>,
) -> Result<ModulusTable> {
    if f.is_empty() {
        return Err(CoarseError::ParameterViolation(
            "modulus of an empty map".into(),
        ));
    }
    for (a, b) in f.pairs() {
        if !src.contains(a) {
            return Err(CoarseError::UnknownPoint(a.to_string()));
        }
        if !dst.contains(b) {
            return Err(CoarseError::UnknownPoint(b.to_string()));
        }
    }
    let mut entries = Vec::new();
    for (label, radius) in source_radii(src, budget) {
        let mut worst: Option<u64> = Some(0);
        let mut reliable = true;
        for (x, fx) in f.pairs() {
            if excluded.contains(x) {
                continue;
            }
            if !src.is_reliable(x, &radius) {
                reliable = false;
            }
            for y in src.ball(x, &radius)? {
                if excluded.contains(&y) {
                    continue;
                }
                let Some(fy) = f.get(&y) else { continue };
                match dst.pair_distance(fx, fy)? {
                    Some(d) => worst = worst.map(|w| w.max(d)),
                    None => worst = None,
                }
                if worst.is_none() {
                    break;
                }
            }
            if worst.is_none() {
                break;
            }
        }
        entries.push(ModulusEntry {
            radius: label,
            value: worst,
            reliable,
        });
    }
    Ok(ModulusTable { entries, budget })
}

/// Decision and evidence for the asymorphism check at a budget.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymorphismReport {
    pub bounded_at_budget: bool,
    pub forward: ModulusTable,
    pub inverse: ModulusTable,
}

/// Evaluates both modulus tables of a total bijection and decides whether it
/// is bounded (hence an asymorphism of the truncations) at the budget.
pub fn is_asymorphism_at_budget(
    src: &FiniteSpace,
    dst: &FiniteSpace,
    f: &PartialBijection,
    budget: u64,
) -> Result<AsymorphismReport> {
    f.require_total(src, dst)?;
    let forward = expansion_modulus(src, dst, f, budget)?;
    let inverse = expansion_modulus(dst, src, &f.inverse(), budget)?;
    let bounded_at_budget = forward.is_bounded()
        && inverse.is_bounded()
        && forward.is_reliable()
        && inverse.is_reliable();
    Ok(AsymorphismReport {
        bounded_at_budget,
        forward,
        inverse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map_fn(xs: &[u64], f: impl Fn(u64) -> u64) -> PartialBijection {
        PartialBijection::new(xs.iter().map(|&x| (Point::Nat(x), Point::Nat(f(x))))).unwrap()
    }

    #[test]
    fn identity_modulus_is_identity() {
        let space = FiniteSpace::nat_interval(50).unwrap();
        let f = PartialBijection::identity_on(&space);
        let table = expansion_modulus(&space, &space, &f, 6).unwrap();
        for e in &table.entries {
            assert_eq!(e.value, Some(e.radius));
            assert!(e.reliable);
        }
    }

    #[test]
    fn stretch_by_three() {
        let src = FiniteSpace::nat_points((0..10).collect()).unwrap();
        let dst = FiniteSpace::nat_points((0..10).map(|x| 3 * x).collect()).unwrap();
        let f = map_fn(&(0..10).collect::<Vec<_>>(), |x| 3 * x);
        let table = expansion_modulus(&src, &dst, &f, 2).unwrap();
        assert_eq!(table.value_at(1), Some(3));
        assert_eq!(table.value_at(2), Some(6));
        // inverse contracts: µ⁻¹(3) = 1
        let inv = expansion_modulus(&dst, &src, &f.inverse(), 3).unwrap();
        assert_eq!(inv.value_at(3), Some(1));
        let report = is_asymorphism_at_budget(&src, &dst, &f, 2).unwrap();
        assert!(report.bounded_at_budget);
    }

    #[test]
    fn squaring_modulus_at_one() {
        let src = FiniteSpace::nat_points((0..10).collect()).unwrap();
        let dst = FiniteSpace::nat_points((0..10).map(|x| x * x).collect()).unwrap();
        let f = map_fn(&(0..10).collect::<Vec<_>>(), |x| x * x);
        let table = expansion_modulus(&src, &dst, &f, 1).unwrap();
        // attained at 8·8 = 64 vs 9·9 = 81
        assert_eq!(table.value_at(1), Some(17));
    }

    #[test]
    fn shift_is_an_asymorphism() {
        let src = FiniteSpace::nat_points((0..10).collect()).unwrap();
        let dst = FiniteSpace::nat_points((5..15).collect()).unwrap();
        let f = map_fn(&(0..10).collect::<Vec<_>>(), |x| x + 5);
        let report = is_asymorphism_at_budget(&src, &dst, &f, 4).unwrap();
        assert!(report.bounded_at_budget);
        for e in &report.forward.entries {
            assert_eq!(e.value, Some(e.radius));
        }
        for e in &report.inverse.entries {
            assert_eq!(e.value, Some(e.radius));
        }
    }

    #[test]
    fn non_bijective_input_is_rejected() {
        let src = FiniteSpace::nat_points((0..4).collect()).unwrap();
        let dst = FiniteSpace::nat_points((0..4).collect()).unwrap();
        let partial = map_fn(&[0, 1], |x| x);
        assert!(is_asymorphism_at_budget(&src, &dst, &partial, 2).is_err());
        assert!(PartialBijection::new([
            (Point::Nat(0), Point::Nat(1)),
            (Point::Nat(2), Point::Nat(1)),
        ])
        .is_err());
    }

    #[test]
    fn tables_are_monotone() {
        let src = FiniteSpace::nat_points((0..12).collect()).unwrap();
        let dst = FiniteSpace::nat_points((0..12).map(|x| x * x + x).collect()).unwrap();
        let f = map_fn(&(0..12).collect::<Vec<_>>(), |x| x * x + x);
        let table = expansion_modulus(&src, &dst, &f, 8).unwrap();
        assert!(table.is_monotone());
        assert_eq!(table.value_at(0), Some(0));
    }

    #[test]
    fn group_modulus_uses_chain_indices() {
        use crate::locfin::{block_members, build_chain};
        let chain = build_chain(8).unwrap();
        let named: Vec<_> = (0..=2)
            .map(|level| chain.subgroup_elements(level, 64).unwrap())
            .collect();
        // two level-1 cosets, swapped onto each other
        let b0 = block_members(1, 0, &chain, 64).unwrap();
        let b1 = block_members(1, 1, &chain, 64).unwrap();
        let points: Vec<_> = b0.iter().chain(b1.iter()).cloned().collect();
        let space = FiniteSpace::group_space(points, named, Some(64)).unwrap();
        let f = PartialBijection::new(b0.iter().zip(b1.iter()).flat_map(|(x, y)| {
            [
                (Point::Group(x.clone()), Point::Group(y.clone())),
                (Point::Group(y.clone()), Point::Group(x.clone())),
            ]
        }))
        .unwrap();
        let table = expansion_modulus(&space, &space, &f, 2).unwrap();
        // a coset swap keeps same-block pairs in one block: every image
        // pair sits within the level-1 radius
        assert_eq!(table.value_at(0), Some(0));
        assert_eq!(table.value_at(1), Some(1));
        assert!(table.is_monotone());
    }

    #[test]
    fn truncated_source_flags_unreliable_entries() {
        // points cut from an infinite set at 20: radius-3 balls at the top
        // edge may be clipped
        let src = FiniteSpace::nat_points_truncated((0..=20).collect(), 20).unwrap();
        let dst = FiniteSpace::nat_points((0..=20).collect()).unwrap();
        let f = map_fn(&(0..=20).collect::<Vec<_>>(), |x| x);
        let table = expansion_modulus(&src, &dst, &f, 3).unwrap();
        assert!(table.entry_for(0).unwrap().reliable);
        assert!(!table.entry_for(3).unwrap().reliable);
    }
}
