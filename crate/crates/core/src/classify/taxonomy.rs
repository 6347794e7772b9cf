//! The subset taxonomy on a truncation: large / thick / thin, with
//! smallness decided negatively only, plus the two witness constructions
//! tied to the taxonomy — a bijection between equal-sized thin sets is
//! bounded outside the exceptional sets, and two large sets admit a
//! matched pair of large subsets with displacement-bounded moduli.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ballean::modulus::{expansion_modulus, PartialBijection};
use crate::ballean::{FiniteSpace, Point, Radius};
use crate::error::{CoarseError, Result};

/// Thickness witness at one radius: a point of the set whose whole ball
/// stays inside the set.
#[derive(Clone, Debug, Serialize)]
pub struct ThickAtRadius {
    pub radius: u64,
    pub witness: Option<Point>,
}

/// Exceptional points at one radius: members whose ball inside the set
/// holds more than themselves.
#[derive(Clone, Debug, Serialize)]
pub struct ThinAtRadius {
    pub radius: u64,
    pub exceptional: Vec<Point>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinReport {
    pub per_radius: Vec<ThinAtRadius>,
    /// Whether every exceptional set stays inside the lower half of the
    /// truncation — the finite-exception reading available at a cut.
    pub thin_at_budget: bool,
}

/// Smallness cannot be affirmed on a truncation (it quantifies over all
/// large sets); it can only be refuted by a witness.
#[derive(Clone, Debug, Serialize)]
pub enum SmallVerdict {
    RefutedBy {
        witness: String,
        /// No radius up to the budget makes the witness-minus-set large.
        budget: u64,
    },
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct TaxonomyReport {
    pub budget: u64,
    /// Least radius at which the set covers the truncation, if any.
    pub large_at: Option<u64>,
    pub thick: Vec<ThickAtRadius>,
    pub thin: ThinReport,
    pub small: SmallVerdict,
    pub excluded_margin: usize,
}

/// Evaluates the taxonomy of `a` inside the space at every radius up to the
/// budget. `large_candidates` are the large sets tried as smallness
/// refuters; the whole point set is always tried first.
pub fn classify_subset_taxonomy(
    space: &FiniteSpace,
    a: &BTreeSet<Point>,
    budget: u64,
    large_candidates: &[BTreeSet<Point>],
) -> Result<TaxonomyReport> {
    for p in a {
        if !space.contains(p) {
            return Err(CoarseError::NotASubset(p.to_string()));
        }
    }
    let radius_for = |r: u64| -> Radius {
        if space.is_metric() {
            Radius::Int(r)
        } else {
            Radius::Named(r as usize)
        }
    };
    if !space.is_metric() && budget as usize >= space.named_radius_count() {
        return Err(CoarseError::ParameterViolation(format!(
            "budget {budget} exceeds the named radius chain"
        )));
    }
    let budget_radius = radius_for(budget);
    let any_reliable = space
        .points()
        .iter()
        .any(|p| space.is_reliable(p, &budget_radius));
    if !any_reliable {
        return Err(CoarseError::ParameterViolation(format!(
            "budget {budget} leaves no boundary-reliable point in the truncation"
        )));
    }
    let mut excluded_margin = 0usize;

    // large: least covering radius within the budget
    let mut large_at = None;
    for r in 0..=budget {
        let rep = space.is_large_at(a, &radius_for(r))?;
        excluded_margin = excluded_margin.max(rep.excluded_points);
        if rep.is_large {
            large_at = Some(r);
            break;
        }
    }

    // thick: per radius, a member whose ball stays inside the set
    let mut thick = Vec::new();
    for r in 0..=budget {
        let radius = radius_for(r);
        let mut witness = None;
        for g in a {
            if !space.is_reliable(g, &radius) {
                continue;
            }
            if space.ball(g, &radius)?.iter().all(|y| a.contains(y)) {
                witness = Some(g.clone());
                break;
            }
        }
        thick.push(ThickAtRadius { radius: r, witness });
    }

    // thin: per radius, the members that see company inside the set
    let half = space.len() / 2;
    let mut per_radius = Vec::new();
    let mut thin_at_budget = true;
    for r in 0..=budget {
        let radius = radius_for(r);
        let mut exceptional = Vec::new();
        for g in a {
            if !space.is_reliable(g, &radius) {
                excluded_margin = excluded_margin.max(1);
                continue;
            }
            let inside = space
                .ball(g, &radius)?
                .into_iter()
                .filter(|y| a.contains(y))
                .count();
            if inside > 1 {
                exceptional.push(g.clone());
            }
        }
        for g in &exceptional {
            if space.index_of(g).is_none_or(|i| i >= half) {
                thin_at_budget = false;
            }
        }
        per_radius.push(ThinAtRadius {
            radius: r,
            exceptional,
        });
    }

    // small: refute with a large witness whose remainder is not large
    let whole: BTreeSet<Point> = space.points().iter().cloned().collect();
    let mut small = SmallVerdict::Inconclusive;
    let candidates = std::iter::once(&whole).chain(large_candidates.iter());
    'cands: for cand in candidates {
        let cand_large = (0..=budget).try_fold(false, |acc, r| -> Result<bool> {
            Ok(acc || space.is_large_at(cand, &radius_for(r))?.is_large)
        })?;
        if !cand_large {
            continue;
        }
        let remainder: BTreeSet<Point> = cand.difference(a).cloned().collect();
        for r in 0..=budget {
            if space.is_large_at(&remainder, &radius_for(r))?.is_large {
                continue 'cands;
            }
        }
        small = SmallVerdict::RefutedBy {
            witness: if *cand == whole {
                "the whole truncation".to_string()
            } else {
                format!("a supplied large set of {} points", cand.len())
            },
            budget,
        };
        break;
    }

    Ok(TaxonomyReport {
        budget,
        large_at,
        thick,
        thin: ThinReport {
            per_radius,
            thin_at_budget,
        },
        small,
        excluded_margin,
    })
}

/// Witness that two sets large at the same radius are coarsely equivalent:
/// matched large subsets and a bijection displacing points by at most `r`,
/// so both moduli obey `µ(α) <= α + 2r`.
#[derive(Clone, Debug)]
pub struct LargeEquivalenceWitness {
    pub selected_src: BTreeSet<Point>,
    pub selected_dst: BTreeSet<Point>,
    pub map: PartialBijection,
    pub displacement: u64,
    pub modulus_slack: u64,
}

/// Taxonomy of a lazily described subset: the description is materialized
/// against the space (naturals up to the space's top point, or the whole
/// block enumeration in the group case) and handed to
/// [`classify_subset_taxonomy`].
pub fn classify_subset_spec(
    space: &FiniteSpace,
    spec: &crate::subset::SubsetSpec,
    budget: u64,
    large_candidates: &[BTreeSet<Point>],
) -> Result<TaxonomyReport> {
    let members: BTreeSet<Point> = match spec {
        crate::subset::SubsetSpec::CosetBlocks(family) => family
            .enumerate(crate::locfin::DEFAULT_ENUM_CAP)?
            .into_iter()
            .map(Point::Group)
            .collect(),
        _ => {
            let top = space.points().last().and_then(Point::nat).ok_or_else(|| {
                CoarseError::ParameterViolation(
                    "this subset description needs a space over the naturals".into(),
                )
            })?;
            spec.materialize_nat(top)?
                .into_iter()
                .map(Point::Nat)
                .collect()
        }
    };
    classify_subset_taxonomy(space, &members, budget, large_candidates)
}

/// Nearest-point matching: send each point of `y1` to its nearest point of
/// `y2`, then keep one source per image. The selected subsets stay large
/// (at `3r` and `2r` respectively) and the map moves nothing farther
/// than `r`.
pub fn large_equivalence_witness(
    space: &FiniteSpace,
    y1: &BTreeSet<Point>,
    y2: &BTreeSet<Point>,
    r: u64,
) -> Result<LargeEquivalenceWitness> {
    for (name, y) in [("first", y1), ("second", y2)] {
        let rep = space.is_large_at(y, &Radius::Int(r))?;
        if !rep.is_large {
            return Err(CoarseError::LargenessFailed(format!(
                "{name} set is not large at radius {r}"
            )));
        }
    }
    let mut chosen: BTreeMap<Point, Point> = BTreeMap::new(); // image -> source
    let mut displacement = 0u64;
    for y in y1 {
        let mut best: Option<(u64, &Point)> = None;
        for cand in y2 {
            let d = space.pair_distance(y, cand)?.unwrap_or(u64::MAX);
            if best.is_none_or(|(bd, bp)| (d, cand) < (bd, bp)) {
                best = Some((d, cand));
            }
        }
        let (d, img) = best.ok_or_else(|| {
            CoarseError::ParameterViolation("matching against an empty set".into())
        })?;
        // keep the first (smallest) source for each image
        chosen.entry(img.clone()).or_insert_with(|| y.clone());
        let _ = d;
    }
    let mut pairs = Vec::new();
    for (img, src) in &chosen {
        let d = space.pair_distance(src, img)?.unwrap_or(u64::MAX);
        displacement = displacement.max(d);
        pairs.push((src.clone(), img.clone()));
    }
    let map = PartialBijection::new(pairs)?;
    let selected_src: BTreeSet<Point> = map.domain().cloned().collect();
    let selected_dst: BTreeSet<Point> = chosen.keys().cloned().collect();
    Ok(LargeEquivalenceWitness {
        selected_src,
        selected_dst,
        map,
        displacement,
        modulus_slack: 2 * r,
    })
}

impl LargeEquivalenceWitness {
    /// Verifies `µ(α) <= α + slack` in both directions up to the budget, on
    /// the selected subsets.
    pub fn verify_moduli(&self, space: &FiniteSpace, budget: u64) -> Result<bool> {
        let src = space.subspace(&self.selected_src)?;
        let dst = space.subspace(&self.selected_dst)?;
        let forward = expansion_modulus(&src, &dst, &self.map, budget)?;
        let inverse = expansion_modulus(&dst, &src, &self.map.inverse(), budget)?;
        for table in [&forward, &inverse] {
            for e in &table.entries {
                match e.value {
                    Some(v) if v <= e.radius + self.modulus_slack => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }
}
