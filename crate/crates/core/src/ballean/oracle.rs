//! Exhaustive bounded-distortion bijection search.
//!
//! The ground-truth oracle behind non-equivalence certificates: a
//! backtracking search over all bijections between two equal-sized spaces,
//! pruning as soon as a partial assignment violates the given modulus
//! bounds. An exhausted search is a proof that no bijection within the
//! bounds exists; hitting the size cap is not, and is reported as a
//! distinct error.

use super::modulus::{ModulusTable, PartialBijection};
use super::{FiniteSpace, Point};
use crate::error::{CoarseError, Result};

/// Default cap on instance size (the search is factorial in the worst case).
pub const DEFAULT_SEARCH_CAP: usize = 12;

/// Environment variable that overrides the search cap.
pub const SEARCH_CAP_ENV: &str = "COARSE_SEARCH_CAP";

/// Resolves the effective cap: explicit argument, else environment
/// override, else the default.
pub fn effective_search_cap(explicit: Option<usize>) -> usize {
    explicit
        .or_else(|| {
            std::env::var(SEARCH_CAP_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_SEARCH_CAP)
}

/// Result of an exhaustive search.
#[derive(Clone, Debug)]
pub enum SearchOutcome {
    /// A bijection satisfying both bounds.
    Found(PartialBijection),
    /// The whole space of bijections was pruned or visited: none exists.
    ExhaustedNone,
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&PartialBijection> {
        match self {
            SearchOutcome::Found(f) => Some(f),
            SearchOutcome::ExhaustedNone => None,
        }
    }

    pub fn is_exhausted_none(&self) -> bool {
        matches!(self, SearchOutcome::ExhaustedNone)
    }
}

struct SearchContext {
    n: usize,
    dx: Vec<Vec<Option<u64>>>,
    da: Vec<Vec<Option<u64>>>,
    forward: ModulusTable,
    inverse: ModulusTable,
    /// source indices in assignment order
    order: Vec<usize>,
    /// for each order position > 0, the position of the nearest earlier
    /// source point (used to sort candidate targets)
    anchor: Vec<Option<usize>>,
}

impl SearchContext {
    fn violates(&self, d_src: Option<u64>, d_dst: Option<u64>) -> bool {
        if let Some(ds) = d_src {
            if let Some(limit) = self.forward.bound_for_distance(ds) {
                match d_dst {
                    Some(dd) if dd <= limit => {}
                    // image pair unrelated by any radius, or too far
                    _ => return true,
                }
            }
        }
        if let Some(dd) = d_dst {
            if let Some(limit) = self.inverse.bound_for_distance(dd) {
                match d_src {
                    Some(ds) if ds <= limit => {}
                    _ => return true,
                }
            }
        }
        false
    }

    fn search(
        &self,
        pos: usize,
        assigned: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
    ) -> Option<Vec<usize>> {
        if pos == self.n {
            return Some(
                self.order
                    .iter()
                    .map(|&s| assigned[s].expect("complete assignment"))
                    .collect(),
            );
        }
        let s = self.order[pos];
        let mut candidates: Vec<usize> = (0..self.n).filter(|&t| !used[t]).collect();
        if let Some(anchor_pos) = self.anchor[pos] {
            let anchor_img = assigned[self.order[anchor_pos]].expect("anchor assigned");
            candidates.sort_by_key(|&t| (self.da[anchor_img][t].unwrap_or(u64::MAX), t));
        }
        'next: for t in candidates {
            for earlier in 0..pos {
                let s2 = self.order[earlier];
                let t2 = assigned[s2].expect("assigned");
                if self.violates(self.dx[s][s2], self.da[t][t2]) {
                    continue 'next;
                }
            }
            assigned[s] = Some(t);
            used[t] = true;
            if let Some(hit) = self.search(pos + 1, assigned, used) {
                return Some(hit);
            }
            assigned[s] = None;
            used[t] = false;
        }
        None
    }
}

fn distance_matrix(space: &FiniteSpace) -> Result<Vec<Vec<Option<u64>>>> {
    let n = space.len();
    let mut m = vec![vec![None; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = space.pair_distance(&space.points()[i], &space.points()[j])?;
        }
    }
    Ok(m)
}

/// Greedy source order: start anywhere, then always take the unvisited
/// point nearest to one already placed, remembering which one. Keeps
/// constraints dense early so pruning bites.
fn plan_order(dx: &[Vec<Option<u64>>]) -> (Vec<usize>, Vec<Option<usize>>) {
    let n = dx.len();
    let mut order = vec![0usize];
    let mut anchor: Vec<Option<usize>> = vec![None];
    let mut placed = vec![false; n];
    placed[0] = true;
    while order.len() < n {
        let mut best: Option<(u64, usize, usize)> = None; // (dist, cand, anchor_pos)
        for cand in 0..n {
            if placed[cand] {
                continue;
            }
            for (pos, &prev) in order.iter().enumerate() {
                let d = dx[cand][prev].unwrap_or(u64::MAX);
                if best.is_none_or(|(bd, bc, _)| (d, cand) < (bd, bc)) {
                    best = Some((d, cand, pos));
                }
            }
        }
        let (_, cand, pos) = best.expect("unplaced point exists");
        placed[cand] = true;
        order.push(cand);
        anchor.push(Some(pos));
    }
    (order, anchor)
}

/// Searches for a bijection from `x` onto `a` whose expansion modulus obeys
/// `bound` and whose inverse obeys `inverse_bound`.
///
/// Returns [`SearchOutcome::ExhaustedNone`] only after the full (pruned)
/// tree has been traversed — that outcome is a proof of non-existence over
/// the stored points. Instances above `cap` are rejected instead of being
/// half-searched.
pub fn search_bounded_bijection(
    x: &FiniteSpace,
    a: &FiniteSpace,
    bound: &ModulusTable,
    inverse_bound: &ModulusTable,
    cap: usize,
) -> Result<SearchOutcome> {
    if x.len() != a.len() {
        return Err(CoarseError::SizeMismatch {
            left: x.len(),
            right: a.len(),
        });
    }
    if x.len() > cap {
        return Err(CoarseError::CapExceeded { size: x.len(), cap });
    }
    let dx = distance_matrix(x)?;
    let da = distance_matrix(a)?;
    let (order, anchor) = plan_order(&dx);
    let ctx = SearchContext {
        n: x.len(),
        dx,
        da,
        forward: bound.clone(),
        inverse: inverse_bound.clone(),
        order,
        anchor,
    };
    let mut assigned = vec![None; ctx.n];
    let mut used = vec![false; ctx.n];
    match ctx.search(0, &mut assigned, &mut used) {
        Some(images) => {
            let pairs: Vec<(Point, Point)> = ctx
                .order
                .iter()
                .zip(images)
                .map(|(&s, t)| (x.points()[s].clone(), a.points()[t].clone()))
                .collect();
            Ok(SearchOutcome::Found(PartialBijection::new(pairs)?))
        }
        None => Ok(SearchOutcome::ExhaustedNone),
    }
}

/// The minimum over all bijections of the expansion modulus at radius
/// `alpha`, certified by exhaustive search: tightens a constant bound until
/// the first value admitting a bijection.
pub fn minimal_expansion_at(
    x: &FiniteSpace,
    a: &FiniteSpace,
    alpha: u64,
    cap: usize,
) -> Result<(u64, PartialBijection)> {
    let ceiling = a.radius_ceiling();
    for k in 0..=ceiling {
        let bound = ModulusTable::constant(alpha, k);
        match search_bounded_bijection(x, a, &bound, &ModulusTable::empty(), cap)? {
            SearchOutcome::Found(f) => return Ok((k, f)),
            SearchOutcome::ExhaustedNone => continue,
        }
    }
    Err(CoarseError::WitnessNotFound(format!(
        "no bijection within expansion {ceiling} at radius {alpha}"
    )))
}
