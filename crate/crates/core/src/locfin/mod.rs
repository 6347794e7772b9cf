//! The locally finite construction: a concrete ambient group (the countable
//! direct sum of order-2 cyclic groups), a subgroup chain whose sizes grow
//! faster than squaring, translate allocation that keeps guard cosets
//! pairwise disjoint, the block families built from branch seeds, and the
//! four-condition non-equivalence criterion with its refuter.
//!
//! Elements of the ambient group are finite coordinate supports; addition is
//! symmetric difference, and every element is its own inverse. This makes
//! each check exact: subgroups of the chain are coordinate windows, cosets
//! are support translates, and disjointness reduces to comparing top
//! coordinates.

mod conditions;

pub use conditions::{
    block_trace_count, check_criterion_conditions, choose_marked_level, refute_locfin_pair,
    BlockCount, ConditionReport, CriterionParams, LocFinCertificate, ProbeReport, TraceCount,
    TruncationInfo, C7_DIRECTION,
};

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::adfamily::BinarySeed;
use crate::error::{CoarseError, Result};

/// Default cap on how many elements a single coset may be asked to list.
pub const DEFAULT_ENUM_CAP: usize = 1 << 16;

/// Largest chain level whose subgroup SIZE may be materialized as an exact
/// integer (the size of level n has `2^n - 1` bits).
pub const MAX_SIZE_LEVEL: usize = 24;

/// Levels up to this bound have the growth condition checked on the
/// materialized integers; above it the check compares exponents, which is
/// just as exact for powers of two and avoids squaring megabit numbers.
const EXACT_CHECK_LEVEL: usize = 16;

/// Largest chain level usable as a coordinate bound (`m_n` must fit in u64).
pub const MAX_COORD_LEVEL: usize = 63;

/// An element of the direct sum of countably many order-2 cyclic groups,
/// stored as its (sorted) set of nonzero coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct F2Element {
    support: Vec<u64>,
}

impl F2Element {
    pub fn identity() -> Self {
        F2Element::default()
    }

    pub fn unit(coord: u64) -> Self {
        F2Element {
            support: vec![coord],
        }
    }

    pub fn from_support(mut support: Vec<u64>) -> Result<Self> {
        support.sort_unstable();
        let before = support.len();
        support.dedup();
        if support.len() != before {
            return Err(CoarseError::ParameterViolation(
                "support coordinates must be distinct".into(),
            ));
        }
        Ok(F2Element { support })
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn is_identity(&self) -> bool {
        self.support.is_empty()
    }

    pub fn max_coord(&self) -> Option<u64> {
        self.support.last().copied()
    }

    /// Group operation: symmetric difference of supports (XOR).
    pub fn add(&self, other: &F2Element) -> F2Element {
        let mut out = Vec::with_capacity(self.support.len() + other.support.len());
        let (mut i, mut j) = (0, 0);
        while i < self.support.len() && j < other.support.len() {
            match self.support[i].cmp(&other.support[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.support[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.support[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.support[i..]);
        out.extend_from_slice(&other.support[j..]);
        F2Element { support: out }
    }
}

impl fmt::Display for F2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.support.iter().map(|c| format!("e{c}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for F2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2({self})")
    }
}

/// The subgroup chain: level n is the subgroup supported on coordinates
/// `[0, 2^n - 1)`, so its size is `2^(2^n - 1)` and consecutive sizes
/// satisfy the strict faster-than-squaring growth the construction needs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainSpec {
    n_max: usize,
}

impl ChainSpec {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `m_n = 2^n - 1`: the coordinate window bound of level n.
    pub fn coord_bound(&self, n: usize) -> Result<u64> {
        if n > MAX_COORD_LEVEL {
            return Err(CoarseError::ParameterViolation(format!(
                "chain level {n} exceeds the coordinate bound {MAX_COORD_LEVEL}"
            )));
        }
        Ok((1u64 << n) - 1)
    }

    /// `|F_n| = 2^(2^n - 1)`, exact.
    pub fn size(&self, n: usize) -> Result<BigUint> {
        if n > MAX_SIZE_LEVEL {
            return Err(CoarseError::ParameterViolation(format!(
                "size of chain level {n} is too large to materialize (cap {MAX_SIZE_LEVEL})"
            )));
        }
        let bits = self.coord_bound(n)? as usize;
        Ok(BigUint::one() << bits)
    }

    /// Lists the subgroup at level n; errors beyond the enumeration cap.
    pub fn subgroup_elements(&self, n: usize, cap: usize) -> Result<Vec<F2Element>> {
        let bound = self.coord_bound(n)?;
        if bound >= 63 || (1u64 << bound) > cap as u64 {
            return Err(CoarseError::EnumerationCap(format!(
                "subgroup at level {n} has 2^{bound} elements, cap is {cap}"
            )));
        }
        let count = 1u64 << bound;
        let mut out = Vec::with_capacity(count as usize);
        for mask in 0..count {
            let support: Vec<u64> = (0..bound).filter(|i| (mask >> i) & 1 == 1).collect();
            out.push(F2Element { support });
        }
        out.sort();
        Ok(out)
    }

    /// Whether a support fits inside the level-n window.
    pub fn level_contains(&self, n: usize, g: &F2Element) -> Result<bool> {
        let bound = self.coord_bound(n)?;
        Ok(g.max_coord().is_none_or(|c| c < bound))
    }

    /// Smallest level whose window contains the support, within `n_max`.
    pub fn min_level_containing(&self, g: &F2Element) -> Result<Option<usize>> {
        for n in 0..=self.n_max {
            if self.level_contains(n, g)? {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }
}

/// Builds the chain up to `n_max` and verifies the strict growth condition
/// `|F_(n+1)| > |F_n|^2` at every level: with materialized big integers up
/// to [`MAX_SIZE_LEVEL`], and by exact exponent comparison above it (the
/// sizes are powers of two, so `2^b > (2^a)^2` is exactly `b > 2a`).
pub fn build_chain(n_max: usize) -> Result<ChainSpec> {
    if n_max == 0 {
        return Err(CoarseError::ParameterViolation("n_max must be >= 1".into()));
    }
    if n_max > MAX_COORD_LEVEL {
        return Err(CoarseError::ParameterViolation(format!(
            "chain level {n_max} exceeds the coordinate bound {MAX_COORD_LEVEL}"
        )));
    }
    let chain = ChainSpec { n_max };
    for n in 0..n_max {
        if n < EXACT_CHECK_LEVEL {
            let cur = chain.size(n)?;
            let next = chain.size(n + 1)?;
            if next <= &cur * &cur {
                return Err(CoarseError::ConditionFailed(format!(
                    "chain growth fails at level {n}: {next} <= {cur}^2"
                )));
            }
        } else {
            let cur = chain.coord_bound(n)?;
            let next = chain.coord_bound(n + 1)?;
            if next <= 2 * cur {
                return Err(CoarseError::ConditionFailed(format!(
                    "chain growth fails at level {n}: exponent {next} <= 2*{cur}"
                )));
            }
        }
    }
    Ok(chain)
}

/// Cantor pairing `(n, m) -> (n+m)(n+m+1)/2 + m`.
pub fn cantor_index(n: u64, m: u64) -> u64 {
    let s = n + m;
    s * (s + 1) / 2 + m
}

/// Inverts [`cantor_index`].
pub fn cantor_invert(c: u64) -> (u64, u64) {
    let mut s = 0u64;
    while (s + 1) * (s + 2) / 2 <= c {
        s += 1;
    }
    let m = c - s * (s + 1) / 2;
    (s - m, m)
}

/// The translate chosen for block `(n, m)`: the unit element on coordinate
/// `m_(c+1)` where `c` is the cantor index of the pair. That coordinate
/// exceeds every coordinate of both level-n and level-m windows, so guard
/// cosets of distinct pairs have distinct top coordinates and cannot meet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockAllocation {
    pub n: u64,
    pub m: u64,
    pub cantor: u64,
    pub translate_coord: u64,
    pub translate: F2Element,
}

pub fn allocate_translate(n: u64, m: u64, chain: &ChainSpec) -> Result<BlockAllocation> {
    let c = cantor_index(n, m);
    let level = (c + 1) as usize;
    if level > chain.n_max() {
        return Err(CoarseError::ChainTooShort { required: level });
    }
    let coord = chain.coord_bound(level)?;
    Ok(BlockAllocation {
        n,
        m,
        cantor: c,
        translate_coord: coord,
        translate: F2Element::unit(coord),
    })
}

/// The coset `F_n · g_(n,m)`, listed explicitly. Blocks beyond the cap are
/// counted through [`ChainSpec::size`], never enumerated.
pub fn block_members(n: u64, m: u64, chain: &ChainSpec, cap: usize) -> Result<Vec<F2Element>> {
    let alloc = allocate_translate(n, m, chain)?;
    let subgroup = chain.subgroup_elements(n as usize, cap)?;
    let mut out: Vec<F2Element> = subgroup
        .into_iter()
        .map(|v| v.add(&alloc.translate))
        .collect();
    out.sort();
    Ok(out)
}

/// Outcome of checking guard-coset disjointness by explicit element sets.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DisjointnessReport {
    pub bound: u64,
    pub cosets_checked: usize,
    pub total_points: usize,
    pub disjoint: bool,
    pub colliding_pair: Option<((u64, u64), (u64, u64))>,
}

/// Checks that the guard cosets `F_max(n,m) · g_(n,m)` for all `n, m <=
/// bound` are pairwise disjoint, by materializing every element.
pub fn verify_translate_disjointness(bound: u64, cap: usize) -> Result<DisjointnessReport> {
    let max_level = (cantor_index(bound, bound) + 1) as usize;
    let chain = build_chain(max_level)?;
    verify_disjointness_with(|n, m| allocate_translate(n, m, &chain), &chain, bound, cap)
}

/// Same check against an arbitrary allocation rule; lets tests corrupt the
/// rule and watch the report name the colliding pair.
pub fn verify_disjointness_with(
    alloc: impl Fn(u64, u64) -> Result<BlockAllocation>,
    chain: &ChainSpec,
    bound: u64,
    cap: usize,
) -> Result<DisjointnessReport> {
    let mut seen: HashSet<F2Element> = HashSet::new();
    let mut owner: Vec<((u64, u64), Vec<F2Element>)> = Vec::new();
    for n in 0..=bound {
        for m in 0..=bound {
            let a = alloc(n, m)?;
            let guard_level = n.max(m) as usize;
            let subgroup = chain.subgroup_elements(guard_level, cap)?;
            let coset: Vec<F2Element> = subgroup.into_iter().map(|v| v.add(&a.translate)).collect();
            owner.push(((n, m), coset));
        }
    }
    let mut total = 0usize;
    for idx in 0..owner.len() {
        let (pair, ref coset) = owner[idx];
        for e in coset {
            total += 1;
            if !seen.insert(e.clone()) {
                let other = owner[..idx]
                    .iter()
                    .find(|(_, oc)| oc.contains(e))
                    .map(|(p, _)| *p)
                    .unwrap_or(pair);
                return Ok(DisjointnessReport {
                    bound,
                    cosets_checked: owner.len(),
                    total_points: total,
                    disjoint: false,
                    colliding_pair: Some((other, pair)),
                });
            }
        }
    }
    Ok(DisjointnessReport {
        bound,
        cosets_checked: owner.len(),
        total_points: total,
        disjoint: true,
        colliding_pair: None,
    })
}

/// The block union selected by a branch seed, truncated to cantor indices
/// `<= cantor_max`: `Y_n` is the union over m of the cosets `F_n g_(n,m)`,
/// and the family is the union of the `Y_n` with n ranging over the branch
/// codes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockFamily {
    seed: BinarySeed,
    chain: ChainSpec,
    cantor_max: u64,
}

impl BlockFamily {
    pub fn new(seed: BinarySeed, cantor_max: u64) -> Result<Self> {
        if cantor_max as usize + 1 > MAX_COORD_LEVEL {
            return Err(CoarseError::ParameterViolation(format!(
                "cantor_max {cantor_max} pushes translate coordinates beyond u64"
            )));
        }
        let chain = build_chain(cantor_max as usize + 1)?;
        Ok(BlockFamily {
            seed,
            chain,
            cantor_max,
        })
    }

    pub fn seed(&self) -> &BinarySeed {
        &self.seed
    }

    pub fn chain(&self) -> &ChainSpec {
        &self.chain
    }

    pub fn cantor_max(&self) -> u64 {
        self.cantor_max
    }

    /// Exclusive bound on the coordinates of the truncation: the deepest
    /// translate coordinate is `m_(cantor_max + 1)`, so everything stored
    /// lives strictly below that plus one.
    pub fn coord_bound(&self) -> u64 {
        self.chain
            .coord_bound(self.cantor_max as usize + 1)
            .expect("validated at construction")
            + 1
    }

    /// Block indices `(n, m)` present in the truncation, i.e. with n a
    /// branch code and cantor index within bound. Ascending by cantor index.
    pub fn blocks(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for c in 0..=self.cantor_max {
            let (n, m) = cantor_invert(c);
            if self.seed.contains_code(n) {
                out.push((n, m));
            }
        }
        out
    }

    /// Blocks of a single level n present in the truncation.
    pub fn blocks_of_level(&self, n: u64) -> Vec<(u64, u64)> {
        self.blocks()
            .into_iter()
            .filter(|&(bn, _)| bn == n)
            .collect()
    }

    /// Decides membership by decoding the element's top coordinate back to a
    /// block index. Errors when the element reaches beyond the truncation.
    pub fn family_membership(&self, g: &F2Element) -> Result<bool> {
        let Some(top) = g.max_coord() else {
            return Ok(false); // identity carries no translate coordinate
        };
        if top >= self.coord_bound() {
            return Err(CoarseError::ParameterViolation(format!(
                "coordinate {top} is beyond the truncation bound {}",
                self.coord_bound()
            )));
        }
        // top must be m_(c+1) = 2^(c+1) - 1 for some cantor index c
        if (top + 1) & top != 0 {
            return Ok(false); // not of the form 2^k - 1
        }
        let level = (top + 1).trailing_zeros() as u64;
        if level == 0 {
            return Ok(false);
        }
        let c = level - 1;
        if c > self.cantor_max {
            return Ok(false);
        }
        let (n, m) = cantor_invert(c);
        let _ = m;
        if !self.seed.contains_code(n) {
            return Ok(false);
        }
        let window = self.chain.coord_bound(n as usize)?;
        Ok(g.support()
            .iter()
            .all(|&coord| coord == top || coord < window))
    }

    /// Exact size of one level-n block.
    pub fn block_size(&self, n: u64) -> Result<BigUint> {
        self.chain.size(n as usize)
    }

    /// Total points of the truncated family, exact.
    pub fn total_points(&self) -> Result<BigUint> {
        let mut total = BigUint::default();
        for (n, _) in self.blocks() {
            total += self.block_size(n)?;
        }
        Ok(total)
    }

    /// Lists every element of the truncation; errors if any block exceeds
    /// the cap.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<F2Element>> {
        let mut out = Vec::new();
        for (n, m) in self.blocks() {
            out.extend(block_members(n, m, &self.chain, cap)?);
            if out.len() > cap {
                return Err(CoarseError::EnumerationCap(format!(
                    "truncation exceeds {cap} points"
                )));
            }
        }
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_addition_is_xor() {
        let a = F2Element::from_support(vec![0, 3]).unwrap();
        let b = F2Element::from_support(vec![3, 5]).unwrap();
        assert_eq!(a.add(&b), F2Element::from_support(vec![0, 5]).unwrap());
        assert!(a.add(&a).is_identity());
    }

    #[test]
    fn chain_sizes_match_and_grow() {
        let chain = build_chain(4).unwrap();
        let sizes: Vec<BigUint> = (0..=4).map(|n| chain.size(n).unwrap()).collect();
        let expected: Vec<BigUint> = [1u64, 2, 8, 128, 32768]
            .iter()
            .map(|&v| BigUint::from(v))
            .collect();
        assert_eq!(sizes, expected);
        for n in 0..4 {
            assert!(sizes[n + 1] > &sizes[n] * &sizes[n]);
        }
    }

    #[test]
    fn chain_level_ten_is_exact() {
        let chain = build_chain(10).unwrap();
        assert_eq!(chain.size(10).unwrap(), BigUint::one() << 1023usize);
    }

    #[test]
    fn level_zero_is_trivial() {
        let chain = build_chain(2).unwrap();
        assert_eq!(chain.size(0).unwrap(), BigUint::one());
        assert_eq!(
            chain.subgroup_elements(0, 16).unwrap(),
            vec![F2Element::identity()]
        );
    }

    #[test]
    fn cantor_pairing_round_trips() {
        for n in 0..20u64 {
            for m in 0..20u64 {
                assert_eq!(cantor_invert(cantor_index(n, m)), (n, m));
            }
        }
    }

    #[test]
    fn allocation_examples() {
        let chain = build_chain(8).unwrap();
        let a = allocate_translate(0, 0, &chain).unwrap();
        assert_eq!((a.cantor, a.translate_coord), (0, 1));
        let b = allocate_translate(1, 0, &chain).unwrap();
        assert_eq!((b.cantor, b.translate_coord), (1, 3));
        let c = allocate_translate(0, 1, &chain).unwrap();
        assert_eq!((c.cantor, c.translate_coord), (2, 7));
    }

    #[test]
    fn allocation_clears_both_windows() {
        let chain = build_chain(26).unwrap();
        for n in 0..4u64 {
            for m in 0..4u64 {
                let a = allocate_translate(n, m, &chain).unwrap();
                let guard = chain.coord_bound(n.max(m) as usize).unwrap();
                assert!(a.translate_coord >= guard);
                assert!(a.translate_coord > chain.coord_bound(n as usize).unwrap());
            }
        }
    }

    #[test]
    fn block_members_examples() {
        let chain = build_chain(8).unwrap();
        assert_eq!(
            block_members(0, 0, &chain, 64).unwrap(),
            vec![F2Element::unit(1)]
        );
        let b10 = block_members(1, 0, &chain, 64).unwrap();
        assert_eq!(
            b10,
            vec![
                F2Element::from_support(vec![0, 3]).unwrap(),
                F2Element::unit(3),
            ]
        );
        let b20 = block_members(2, 0, &chain, 64).unwrap();
        assert_eq!(b20.len(), 8);
        let tau = allocate_translate(2, 0, &chain).unwrap().translate_coord;
        assert!(b20.iter().all(|e| e.support().contains(&tau)));
    }

    #[test]
    fn disjointness_holds_up_to_three() {
        for bound in [2u64, 3] {
            let report = verify_translate_disjointness(bound, 1 << 12).unwrap();
            assert!(report.disjoint, "bound {bound}: {report:?}");
            // no double counting: total equals the sum of coset sizes
            let chain = build_chain((cantor_index(bound, bound) + 1) as usize).unwrap();
            let mut expect = 0usize;
            for n in 0..=bound {
                for m in 0..=bound {
                    expect += 1usize << chain.coord_bound(n.max(m) as usize).unwrap();
                }
            }
            assert_eq!(report.total_points, expect);
        }
    }

    #[test]
    fn sabotaged_allocation_is_caught() {
        let chain = build_chain(16).unwrap();
        let report = verify_disjointness_with(
            |n, m| {
                if (n, m) == (1, 0) {
                    // collide with block (0,0) by reusing its coordinate
                    Ok(BlockAllocation {
                        n,
                        m,
                        cantor: cantor_index(n, m),
                        translate_coord: 1,
                        translate: F2Element::unit(1),
                    })
                } else {
                    allocate_translate(n, m, &chain)
                }
            },
            &chain,
            1,
            1 << 12,
        )
        .unwrap();
        assert!(!report.disjoint);
        let (a, b) = report.colliding_pair.unwrap();
        assert!([a, b].contains(&(1, 0)));
        assert!([a, b].contains(&(0, 0)));
    }

    #[test]
    fn family_membership_decodes_blocks() {
        let with_one = BlockFamily::new(BinarySeed::new("", "0").unwrap(), 9).unwrap();
        // e3 sits in block (1,0); 1 is a code of the all-zeros branch
        assert!(with_one.family_membership(&F2Element::unit(3)).unwrap());
        let without_one = BlockFamily::new(BinarySeed::new("", "1").unwrap(), 9).unwrap();
        assert!(!without_one.family_membership(&F2Element::unit(3)).unwrap());
        // e0 has no valid translate-coordinate decode
        assert!(!with_one.family_membership(&F2Element::unit(0)).unwrap());
        // identity is in no block
        assert!(!with_one.family_membership(&F2Element::identity()).unwrap());
    }

    #[test]
    fn family_membership_agrees_with_enumeration() {
        let family = BlockFamily::new(BinarySeed::new("", "0").unwrap(), 6).unwrap();
        let listed = family.enumerate(1 << 12).unwrap();
        for e in &listed {
            assert!(
                family.family_membership(e).unwrap(),
                "{e} should be a member"
            );
        }
        let total = family.total_points().unwrap();
        assert_eq!(BigUint::from(listed.len() as u64), total);
        // a perturbed element outside every window is not a member
        let stray = F2Element::from_support(vec![2, 3]).unwrap(); // lower part reaches past m_1
        assert!(!family.family_membership(&stray).unwrap());
    }

    #[test]
    fn blocks_respect_seed_and_truncation() {
        let family = BlockFamily::new(BinarySeed::new("", "0").unwrap(), 9).unwrap();
        let blocks = family.blocks();
        // codes of the all-zeros branch are 1, 3, 7, ...; cantor index <= 9
        assert!(blocks.contains(&(1, 0)));
        assert!(blocks.contains(&(1, 1)));
        assert!(blocks.contains(&(1, 2)));
        assert!(blocks.contains(&(3, 0)));
        assert!(!blocks.iter().any(|&(n, _)| n == 2));
        assert!(blocks.iter().all(|&(n, m)| cantor_index(n, m) <= 9));
    }
}
