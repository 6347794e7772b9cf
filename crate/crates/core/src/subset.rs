//! Lazy subset descriptions: an interval union on the naturals, a coset
//! block union in the ambient group, or an explicit finite set. All three
//! answer membership queries up to a bound without materializing anything
//! they do not have to.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{CoarseError, Result};
use crate::fingen::IntervalUnionSet;
use crate::locfin::{BlockFamily, F2Element};

/// A subset of a host universe, described lazily.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubsetSpec {
    Explicit(BTreeSet<u64>),
    IntervalUnion(IntervalUnionSet),
    CosetBlocks(BlockFamily),
}

/// Exact summary of a subset inside a window `[lo, hi]` of the naturals:
/// the point count and the largest gap between consecutive points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowProfile {
    pub count: BigUint,
    pub first: Option<BigUint>,
    pub last: Option<BigUint>,
    pub max_gap: Option<BigUint>,
}

impl SubsetSpec {
    pub fn description(&self) -> String {
        match self {
            SubsetSpec::Explicit(s) => format!("explicit set of {}", s.len()),
            SubsetSpec::IntervalUnion(u) => format!("interval union of seed {}", u.seed()),
            SubsetSpec::CosetBlocks(f) => format!(
                "coset blocks of seed {} up to cantor index {}",
                f.seed(),
                f.cantor_max()
            ),
        }
    }

    /// Membership for subsets of the naturals.
    pub fn contains_nat(&self, x: &BigUint) -> Result<bool> {
        match self {
            SubsetSpec::Explicit(s) => Ok(x.to_u64().is_some_and(|v| s.contains(&v))),
            SubsetSpec::IntervalUnion(u) => u.contains(x),
            SubsetSpec::CosetBlocks(_) => Err(CoarseError::ParameterViolation(
                "coset blocks are not a subset of the naturals".into(),
            )),
        }
    }

    /// Counts the subset inside `[lo, hi]` and measures consecutive gaps,
    /// without enumerating when interval structure makes it unnecessary.
    pub fn window_profile(&self, lo: &BigUint, hi: &BigUint) -> Result<WindowProfile> {
        if lo > hi {
            return Err(CoarseError::ParameterViolation("window is reversed".into()));
        }
        let runs = self.window_runs(lo, hi)?;
        let mut count = BigUint::default();
        let mut max_gap: Option<BigUint> = None;
        let mut prev_end: Option<BigUint> = None;
        let first = runs.first().map(|(a, _)| a.clone());
        let last = runs.last().map(|(_, b)| b.clone());
        for (a, b) in runs {
            count += &b - &a + BigUint::one();
            if b > a {
                // inside a run consecutive points are adjacent
                max_gap = Some(max_gap.map_or(BigUint::one(), |g| g.max(BigUint::one())));
            }
            if let Some(pe) = prev_end {
                let gap = &a - &pe;
                max_gap = Some(max_gap.map_or(gap.clone(), |g| g.max(gap)));
            }
            prev_end = Some(b);
        }
        Ok(WindowProfile {
            count,
            first,
            last,
            max_gap,
        })
    }

    /// Maximal runs of consecutive members inside the window, ascending.
    fn window_runs(&self, lo: &BigUint, hi: &BigUint) -> Result<Vec<(BigUint, BigUint)>> {
        match self {
            SubsetSpec::IntervalUnion(u) => {
                let mut runs = Vec::new();
                for n in u.selected_indices() {
                    let (a, b) = u.sequence().entry(n)?;
                    if b < lo {
                        continue;
                    }
                    if a > hi {
                        break;
                    }
                    runs.push((a.max(lo).clone(), b.min(hi).clone()));
                }
                if !u.sequence().covers(hi) {
                    return Err(CoarseError::SequenceTooShort {
                        required: u.sequence().required_len_for(hi),
                    });
                }
                Ok(runs)
            }
            SubsetSpec::Explicit(s) => {
                let lo = lo.to_u64().unwrap_or(u64::MAX);
                let hi = hi.to_u64().unwrap_or(u64::MAX);
                let mut runs: Vec<(u64, u64)> = Vec::new();
                for &v in s.range(lo..=hi) {
                    match runs.last_mut() {
                        Some((_, end)) if *end + 1 == v => *end = v,
                        _ => runs.push((v, v)),
                    }
                }
                Ok(runs
                    .into_iter()
                    .map(|(a, b)| (BigUint::from(a), BigUint::from(b)))
                    .collect())
            }
            SubsetSpec::CosetBlocks(_) => Err(CoarseError::ParameterViolation(
                "coset blocks have no window profile on the naturals".into(),
            )),
        }
    }

    /// All members up to `x_max`, as explicit naturals.
    pub fn materialize_nat(&self, x_max: u64) -> Result<Vec<u64>> {
        match self {
            SubsetSpec::Explicit(s) => Ok(s.range(0..=x_max).copied().collect()),
            SubsetSpec::IntervalUnion(_) => {
                let runs = self.window_runs(&BigUint::default(), &BigUint::from(x_max))?;
                let mut out = Vec::new();
                for (a, b) in runs {
                    let a = a.to_u64().expect("window bounded by x_max");
                    let b = b.to_u64().expect("window bounded by x_max");
                    out.extend(a..=b);
                }
                Ok(out)
            }
            SubsetSpec::CosetBlocks(_) => Err(CoarseError::ParameterViolation(
                "coset blocks do not materialize to naturals".into(),
            )),
        }
    }

    /// All members of a group-flavored subset, within an enumeration cap.
    pub fn materialize_group(&self, cap: usize) -> Result<Vec<F2Element>> {
        match self {
            SubsetSpec::CosetBlocks(f) => f.enumerate(cap),
            _ => Err(CoarseError::ParameterViolation(
                "only coset blocks materialize to group elements".into(),
            )),
        }
    }
}
