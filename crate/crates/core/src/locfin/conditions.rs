//! The four-condition non-equivalence criterion and its refuter.
//!
//! Both sides are block families truncated at a cantor index. With marked
//! level `s` on the first side and covering level `t` on the second, the
//! criterion splits the second side at level `s` and checks, block by
//! block:
//!
//! * `c6` — on the marked level, every point sees at least `k = |F_s|/|F_t|`
//!   family points within the level radius (a lower bound);
//! * `c7` — away from finitely many exceptional blocks, balls of any probe
//!   radius hold at most `l = |F_s|` points (an upper bound; recorded as
//!   such in the certificate);
//! * `c8` — on the deeper levels, balls at the per-block radius hold
//!   strictly more than `l` points (per-block radii, since no single finite
//!   radius witnesses unboundedly many scales);
//! * `c9` — on the shallower levels, away from exceptional blocks, balls of
//!   any probe radius hold strictly fewer than `k` points.
//!
//! A bijection bounded in both directions would have to send an infinite
//! piece of the marked level into one of the two halves, and either half
//! contradicts the counts above. Counts are computed structurally (a block
//! is a single coset, and a ball around a block point stays inside its
//! block whenever the block's translate coordinate clears the radius), so
//! blocks far too large to enumerate are still counted exactly.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{allocate_translate, BlockFamily, F2Element};
use crate::adfamily::BinarySeed;
use crate::error::{CoarseError, Result};
use crate::exact::ExactNat;

/// How `c7` is evaluated; stored in certificates so the reading is explicit.
pub const C7_DIRECTION: &str = "upper-bound-outside-exceptional-set";

/// Inputs of the condition check.
#[derive(Clone, Debug)]
pub struct CriterionParams {
    pub seed_w: BinarySeed,
    pub seed_w_prime: BinarySeed,
    pub s: u64,
    pub t: u64,
    /// Chain levels used as probe radii for the two exceptional-set
    /// conditions.
    pub probes: Vec<u64>,
    pub cantor_max: u64,
    /// Large subset of the first family; `None` means the family itself.
    pub z_w: Option<BTreeSet<F2Element>>,
    /// Large subset of the second family; `None` means the family itself.
    pub z_w_prime: Option<BTreeSet<F2Element>>,
}

/// One block's evaluated count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockCount {
    pub n: u64,
    pub m: u64,
    /// Chain level of the radius used at this block.
    pub radius_level: u64,
    pub count: ExactNat,
    pub satisfied: bool,
}

/// Outcome of one probe radius for an exceptional-set condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub level: u64,
    /// Blocks whose translate coordinate does not clear the probe radius;
    /// their union is the finite exceptional set for this probe.
    pub exceptional_blocks: Vec<(u64, u64)>,
    pub far_blocks: Vec<BlockCount>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionC6 {
    pub radius_level: u64,
    pub bound: ExactNat,
    pub blocks: Vec<BlockCount>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionC7 {
    pub direction: String,
    pub bound: ExactNat,
    pub probes: Vec<ProbeReport>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionC8 {
    pub bound: ExactNat,
    pub blocks: Vec<BlockCount>,
    pub vacuous: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionC9 {
    pub bound: ExactNat,
    pub probes: Vec<ProbeReport>,
    pub holds: bool,
}

/// The full evidence of one criterion evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub s: u64,
    pub t: u64,
    pub k: ExactNat,
    pub l: ExactNat,
    pub shared_code_max: Option<u64>,
    pub cantor_max: u64,
    pub c6: ConditionC6,
    pub c7: ConditionC7,
    pub c8: ConditionC8,
    pub c9: ConditionC9,
    pub holds_all: bool,
}

/// Membership of `g` in the single block `(n, m)` of a family.
fn in_block(family: &BlockFamily, n: u64, m: u64, g: &F2Element) -> Result<bool> {
    let alloc = allocate_translate(n, m, family.chain())?;
    let window = family.chain().coord_bound(n as usize)?;
    Ok(g.max_coord() == Some(alloc.translate_coord)
        && g.support()
            .iter()
            .all(|&c| c == alloc.translate_coord || c < window))
}

/// `|block(n, m) ∩ Z|`: the whole block size when Z is the family itself,
/// an explicit count otherwise.
fn trace_of_block(
    family: &BlockFamily,
    n: u64,
    m: u64,
    z: Option<&BTreeSet<F2Element>>,
) -> Result<BigUint> {
    match z {
        None => family.block_size(n),
        Some(z) => {
            let mut count = BigUint::default();
            for g in z {
                if in_block(family, n, m, g)? {
                    count += BigUint::one();
                }
            }
            Ok(count)
        }
    }
}

/// Exact count and bound check for one block trace: `|F_n g_(n,m) ∩ Z|`
/// must be at least `|F_n| / |F_t|` whenever `n > t`, given the covering
/// precondition (the family lies within `F_t` of Z).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceCount {
    pub n: u64,
    pub m: u64,
    pub count: ExactNat,
    pub required: Option<ExactNat>,
    pub satisfied: bool,
}

/// Verifies the covering precondition `X_W ⊆ F_t · Z` on the truncation and
/// counts one block trace against its bound.
pub fn block_trace_count(
    family: &BlockFamily,
    n: u64,
    m: u64,
    z: Option<&BTreeSet<F2Element>>,
    t: u64,
    enum_cap: usize,
) -> Result<TraceCount> {
    if let Some(z) = z {
        verify_covering(family, z, t, enum_cap)?;
    }
    let count = trace_of_block(family, n, m, z)?;
    let required = if n > t {
        let ms = family.chain().coord_bound(n as usize)?;
        let mt = family.chain().coord_bound(t as usize)?;
        Some(BigUint::one() << (ms - mt) as usize)
    } else {
        None
    };
    let satisfied = required.as_ref().is_none_or(|req| &count >= req);
    Ok(TraceCount {
        n,
        m,
        count: ExactNat(count),
        required: required.map(ExactNat),
        satisfied,
    })
}

/// Checks `Z ⊆ X_W` and that every truncation point lies within `F_t` of Z.
/// Needs the truncation enumerable; huge truncations only support the
/// default `Z = X_W`, whose covering is immediate.
fn verify_covering(
    family: &BlockFamily,
    z: &BTreeSet<F2Element>,
    t: u64,
    enum_cap: usize,
) -> Result<()> {
    for g in z {
        if !family.family_membership(g)? {
            return Err(CoarseError::CoveringFailed(format!(
                "{g} is not a member of the family"
            )));
        }
    }
    let all = family.enumerate(enum_cap).map_err(|_| {
        CoarseError::CoveringFailed(
            "truncation too large to verify an explicit covering witness".into(),
        )
    })?;
    let radius = family
        .chain()
        .subgroup_elements(t as usize, enum_cap)
        .map_err(|_| CoarseError::CoveringFailed("covering level too large to enumerate".into()))?;
    for x in &all {
        let covered = radius.iter().any(|w| z.contains(&w.add(x)));
        if !covered {
            return Err(CoarseError::CoveringFailed(format!(
                "{x} is not within the covering radius of Z"
            )));
        }
    }
    Ok(())
}

/// Evaluates the four conditions on the truncation and reports every count.
pub fn check_criterion_conditions(params: &CriterionParams) -> Result<ConditionReport> {
    let CriterionParams {
        seed_w,
        seed_w_prime,
        s,
        t,
        probes,
        cantor_max,
        z_w,
        z_w_prime,
    } = params;
    let (s, t, cantor_max) = (*s, *t, *cantor_max);
    if t == 0 {
        return Err(CoarseError::ParameterViolation(
            "t must be >= 1, otherwise k equals l".into(),
        ));
    }
    if s <= t {
        return Err(CoarseError::ParameterViolation(format!(
            "s = {s} must exceed t = {t}"
        )));
    }
    let shared = seed_w.shared_code_max(seed_w_prime)?;
    if !seed_w.contains_code(s) || seed_w_prime.contains_code(s) {
        return Err(CoarseError::ParameterViolation(format!(
            "marked level {s} is not in W \\ W'"
        )));
    }
    if shared.is_some_and(|sh| s <= sh) {
        return Err(CoarseError::ParameterViolation(format!(
            "marked level {s} does not exceed the shared codes"
        )));
    }

    let family_w = BlockFamily::new(seed_w.clone(), cantor_max)?;
    let family_w2 = BlockFamily::new(seed_w_prime.clone(), cantor_max)?;
    let chain = family_w.chain();

    let ms = chain.coord_bound(s as usize)?;
    let mt = chain.coord_bound(t as usize)?;
    let k: BigUint = BigUint::one() << (ms - mt) as usize;
    let l: BigUint = BigUint::one() << ms as usize;
    if k >= l {
        return Err(CoarseError::ParameterViolation(format!(
            "k = {k} must be strictly below l = {l}"
        )));
    }

    if let Some(z) = z_w {
        verify_covering(&family_w, z, t, super::DEFAULT_ENUM_CAP)?;
    }
    if let Some(z) = z_w_prime {
        verify_covering(&family_w2, z, t, super::DEFAULT_ENUM_CAP)?;
    }

    let marked_blocks = family_w.blocks_of_level(s);
    if marked_blocks.is_empty() {
        return Err(CoarseError::ParameterViolation(format!(
            "truncation at cantor index {cantor_max} holds no level-{s} blocks"
        )));
    }

    // c6: on the marked level, with the level radius, every point of a
    // block sees exactly the block's trace — which must reach k.
    let mut c6_blocks = Vec::new();
    let mut c6_holds = true;
    for &(n, m) in &marked_blocks {
        let count = trace_of_block(&family_w, n, m, z_w.as_ref())?;
        let satisfied = count >= k;
        c6_holds &= satisfied;
        c6_blocks.push(BlockCount {
            n,
            m,
            radius_level: s,
            count: ExactNat(count),
            satisfied,
        });
    }

    // c7: per probe, blocks whose translate coordinate clears the probe
    // radius keep their balls inside the block (at most l points); the
    // others form the finite exceptional set.
    let mut c7_probes = Vec::new();
    for &j in probes {
        let mj = chain.coord_bound(j as usize)?;
        let mut exceptional = Vec::new();
        let mut far = Vec::new();
        let mut holds = true;
        for &(n, m) in &marked_blocks {
            let alloc = allocate_translate(n, m, chain)?;
            if alloc.translate_coord < mj {
                exceptional.push((n, m));
                continue;
            }
            // ball stays inside the block: bounded by the trace
            let count = match z_w.as_ref() {
                None => chain.size(n.min(j) as usize)?,
                Some(z) => trace_of_block(&family_w, n, m, Some(z))?,
            };
            let satisfied = count <= l;
            holds &= satisfied;
            far.push(BlockCount {
                n,
                m,
                radius_level: j,
                count: ExactNat(count),
                satisfied,
            });
        }
        c7_probes.push(ProbeReport {
            level: j,
            exceptional_blocks: exceptional,
            far_blocks: far,
            holds,
        });
    }
    let c7_holds = c7_probes.iter().all(|p| p.holds);

    // c8: deeper blocks of the second family, each with its own level
    // radius; the ball there is the whole block trace and must exceed l.
    let deep_blocks: Vec<(u64, u64)> = family_w2
        .blocks()
        .into_iter()
        .filter(|&(n, _)| n > s)
        .collect();
    let mut c8_blocks = Vec::new();
    let mut c8_holds = true;
    for &(n, m) in &deep_blocks {
        let count = trace_of_block(&family_w2, n, m, z_w_prime.as_ref())?;
        let satisfied = count > l;
        c8_holds &= satisfied;
        c8_blocks.push(BlockCount {
            n,
            m,
            radius_level: n.max(t),
            count: ExactNat(count),
            satisfied,
        });
    }

    // c9: shallower blocks of the second family; outside the exceptional
    // blocks of each probe the ball count must stay strictly below k.
    let shallow_blocks: Vec<(u64, u64)> = family_w2
        .blocks()
        .into_iter()
        .filter(|&(n, _)| n < s)
        .collect();
    let mut c9_probes = Vec::new();
    for &j in probes {
        let mj = chain.coord_bound(j as usize)?;
        let mut exceptional = Vec::new();
        let mut far = Vec::new();
        let mut holds = true;
        for &(n, m) in &shallow_blocks {
            let alloc = allocate_translate(n, m, chain)?;
            if alloc.translate_coord < mj {
                exceptional.push((n, m));
                continue;
            }
            let count = match z_w_prime.as_ref() {
                None => chain.size(n.min(j) as usize)?,
                Some(z) => trace_of_block(&family_w2, n, m, Some(z))?,
            };
            let satisfied = count < k;
            holds &= satisfied;
            far.push(BlockCount {
                n,
                m,
                radius_level: j,
                count: ExactNat(count),
                satisfied,
            });
        }
        c9_probes.push(ProbeReport {
            level: j,
            exceptional_blocks: exceptional,
            far_blocks: far,
            holds,
        });
    }
    let c9_holds = c9_probes.iter().all(|p| p.holds);

    let c8_vacuous = deep_blocks.is_empty();
    let holds_all = c6_holds && c7_holds && c8_holds && c9_holds;
    Ok(ConditionReport {
        s,
        t,
        k: ExactNat(k.clone()),
        l: ExactNat(l.clone()),
        shared_code_max: shared,
        cantor_max,
        c6: ConditionC6 {
            radius_level: s.max(t),
            bound: ExactNat(k.clone()),
            blocks: c6_blocks,
            holds: c6_holds,
        },
        c7: ConditionC7 {
            direction: C7_DIRECTION.to_string(),
            bound: ExactNat(l.clone()),
            probes: c7_probes,
            holds: c7_holds,
        },
        c8: ConditionC8 {
            bound: ExactNat(l),
            blocks: c8_blocks,
            vacuous: c8_vacuous,
            holds: c8_holds,
        },
        c9: ConditionC9 {
            bound: ExactNat(k),
            probes: c9_probes,
            holds: c9_holds,
        },
        holds_all,
    })
}

/// A machine-checkable record that the two block families admit no
/// asymorphism of large subsets with covering level `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocFinCertificate {
    pub seeds: Vec<BinarySeed>,
    pub t: u64,
    pub s: u64,
    pub k: ExactNat,
    pub l: ExactNat,
    pub probes: Vec<u64>,
    pub conditions: ConditionReport,
    pub truncation: TruncationInfo,
    pub verdict: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationInfo {
    pub cantor_max: u64,
}

/// Picks the marked level for a seed pair: the least code of `W \ W'`
/// beyond both `t` and every shared code, whose blocks exist in the
/// truncation.
pub fn choose_marked_level(
    w: &BinarySeed,
    w_prime: &BinarySeed,
    t: u64,
    cantor_max: u64,
) -> Result<u64> {
    let shared = w.shared_code_max(w_prime)?;
    let codes = w.members(crate::adfamily::MAX_CODE_LEN as u32)?;
    for s in codes {
        if s <= t {
            continue;
        }
        if shared.is_some_and(|sh| s <= sh) {
            continue;
        }
        if w_prime.contains_code(s) {
            continue;
        }
        if super::cantor_index(s, 0) > cantor_max {
            break;
        }
        return Ok(s);
    }
    Err(CoarseError::WitnessNotFound(format!(
        "no admissible marked level for t = {t} within cantor index {cantor_max}"
    )))
}

/// Chooses the marked level, runs the condition checks with the families
/// themselves as the large subsets, and emits the certificate. A condition
/// failure is an error carrying the failing count, never a silent verdict.
pub fn refute_locfin_pair(
    w: &BinarySeed,
    w_prime: &BinarySeed,
    t: u64,
    cantor_max: u64,
    probes: Option<Vec<u64>>,
) -> Result<LocFinCertificate> {
    let s = choose_marked_level(w, w_prime, t, cantor_max)?;
    let probes = probes.unwrap_or_else(|| vec![t]);
    let params = CriterionParams {
        seed_w: w.clone(),
        seed_w_prime: w_prime.clone(),
        s,
        t,
        probes: probes.clone(),
        cantor_max,
        z_w: None,
        z_w_prime: None,
    };
    let conditions = check_criterion_conditions(&params)?;
    if !conditions.holds_all {
        return Err(CoarseError::ConditionFailed(format!(
            "criterion conditions fail at s = {s}, t = {t}: {conditions:?}"
        )));
    }
    Ok(LocFinCertificate {
        seeds: vec![w.clone(), w_prime.clone()],
        t,
        s,
        k: conditions.k.clone(),
        l: conditions.l.clone(),
        probes,
        conditions,
        truncation: TruncationInfo { cantor_max },
        verdict: "refuted".to_string(),
    })
}

impl LocFinCertificate {
    /// Recomputes the whole condition report from the raw parameters and
    /// compares it with the stored one.
    pub fn revalidate(&self) -> crate::fingen::CertificateValidation {
        let mut failures = Vec::new();
        if self.seeds.len() != 2 {
            failures.push("certificate must carry two seeds".into());
        } else {
            let (w, w2) = (&self.seeds[0], &self.seeds[1]);
            match choose_marked_level(w, w2, self.t, self.truncation.cantor_max) {
                Err(e) => failures.push(format!("marked level is not recomputable: {e}")),
                Ok(s) => {
                    if s != self.s {
                        failures.push(format!(
                            "stored marked level {} differs from recomputed {s}",
                            self.s
                        ));
                    }
                }
            }
            let params = CriterionParams {
                seed_w: w.clone(),
                seed_w_prime: w2.clone(),
                s: self.s,
                t: self.t,
                probes: self.probes.clone(),
                cantor_max: self.truncation.cantor_max,
                z_w: None,
                z_w_prime: None,
            };
            match check_criterion_conditions(&params) {
                Err(e) => failures.push(format!("conditions are not recomputable: {e}")),
                Ok(report) => {
                    if report != self.conditions {
                        failures.push("stored condition report differs from recomputation".into());
                    }
                    if report.k != self.k {
                        failures.push("stored k differs from recomputation".into());
                    }
                    if report.l != self.l {
                        failures.push("stored l differs from recomputation".into());
                    }
                    if !report.holds_all {
                        failures.push("recomputed conditions do not hold".into());
                    }
                }
            }
        }
        if self.verdict != "refuted" {
            failures.push("unexpected verdict".into());
        }
        crate::fingen::CertificateValidation {
            valid: failures.is_empty(),
            failures,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::locfin::build_chain;

    fn seed(s: &str) -> BinarySeed {
        BinarySeed::parse(s).unwrap()
    }

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn trace_counts_with_default_subset() {
        let family = BlockFamily::new(seed(":0"), 9).unwrap();
        // full trace at the block level
        let tc = block_trace_count(&family, 3, 0, None, 1, 1 << 12).unwrap();
        assert_eq!(tc.count, ExactNat(nat(128)));
        assert_eq!(tc.required, Some(ExactNat(nat(64))));
        assert!(tc.satisfied);
        // with t = 0 the requirement is the full block
        let tc = block_trace_count(&family, 3, 0, None, 0, 1 << 12).unwrap();
        assert_eq!(tc.required, Some(ExactNat(nat(128))));
        assert!(tc.satisfied);
    }

    #[test]
    fn trace_counts_with_explicit_subset() {
        let family = BlockFamily::new(seed(":1"), 7).unwrap();
        // Z = the family minus one point of the (2, 0) block
        let all = family.enumerate(1 << 12).unwrap();
        let block = super::super::block_members(2, 0, family.chain(), 64).unwrap();
        let dropped = block[0].clone();
        let z: BTreeSet<F2Element> = all.into_iter().filter(|e| *e != dropped).collect();
        let tc = block_trace_count(&family, 2, 0, Some(&z), 1, 1 << 12).unwrap();
        assert_eq!(tc.count, ExactNat(nat(7)));
        assert_eq!(tc.required, Some(ExactNat(nat(4))));
        assert!(tc.satisfied);
    }

    #[test]
    fn dropping_too_much_breaks_covering() {
        let family = BlockFamily::new(seed(":1"), 7).unwrap();
        let all = family.enumerate(1 << 12).unwrap();
        let block = super::super::block_members(2, 0, family.chain(), 64).unwrap();
        // removing a whole coset of the covering level empties a guard ball
        let gone: BTreeSet<F2Element> = block.iter().cloned().collect();
        let z: BTreeSet<F2Element> = all.into_iter().filter(|e| !gone.contains(e)).collect();
        assert!(matches!(
            block_trace_count(&family, 2, 0, Some(&z), 1, 1 << 12),
            Err(CoarseError::CoveringFailed(_))
        ));
    }

    #[test]
    fn criterion_example_holds() {
        // marked level 2 on the side of codes {2, 6, ...}; the other side
        // holds codes {1, 3, 7, ...}
        let params = CriterionParams {
            seed_w: seed(":1"),
            seed_w_prime: seed(":0"),
            s: 2,
            t: 1,
            probes: vec![1],
            cantor_max: 9,
            z_w: None,
            z_w_prime: None,
        };
        let report = check_criterion_conditions(&params).unwrap();
        assert!(report.holds_all, "{report:?}");
        assert_eq!(report.k, ExactNat(nat(4)));
        assert_eq!(report.l, ExactNat(nat(8)));
        // c6: marked blocks have count 8 >= 4
        assert!(report.c6.blocks.iter().all(|b| b.count == ExactNat(nat(8))));
        // c7: far blocks bounded by 8
        for p in &report.c7.probes {
            assert!(p.exceptional_blocks.is_empty());
            assert!(p.far_blocks.iter().all(|b| b.count.0 <= nat(8)));
        }
        // c8: the deep block (3, 0) counts 128 > 8
        assert_eq!(report.c8.blocks.len(), 1);
        assert_eq!(report.c8.blocks[0].n, 3);
        assert_eq!(report.c8.blocks[0].count, ExactNat(nat(128)));
        // c9: shallow blocks count 2 < 4
        for p in &report.c9.probes {
            assert!(p.far_blocks.iter().all(|b| b.count == ExactNat(nat(2))));
        }
    }

    #[test]
    fn criterion_accepts_an_explicit_large_subset() {
        let family = BlockFamily::new(seed(":1"), 7).unwrap();
        let all = family.enumerate(1 << 12).unwrap();
        let block = super::super::block_members(2, 0, family.chain(), 64).unwrap();
        let dropped = block[0].clone();
        let z: BTreeSet<F2Element> = all.into_iter().filter(|e| *e != dropped).collect();
        let params = CriterionParams {
            seed_w: seed(":1"),
            seed_w_prime: seed(":0"),
            s: 2,
            t: 1,
            probes: vec![1],
            cantor_max: 7,
            z_w: Some(z),
            z_w_prime: None,
        };
        let report = check_criterion_conditions(&params).unwrap();
        assert!(report.holds_all, "{report:?}");
        // the thinned block still clears the bound: 7 >= 4
        let thinned = report
            .c6
            .blocks
            .iter()
            .find(|b| (b.n, b.m) == (2, 0))
            .unwrap();
        assert_eq!(thinned.count, ExactNat(nat(7)));
    }

    #[test]
    fn zero_covering_level_is_rejected() {
        let params = CriterionParams {
            seed_w: seed(":1"),
            seed_w_prime: seed(":0"),
            s: 2,
            t: 0,
            probes: vec![1],
            cantor_max: 9,
            z_w: None,
            z_w_prime: None,
        };
        assert!(matches!(
            check_criterion_conditions(&params),
            Err(CoarseError::ParameterViolation(_))
        ));
    }

    #[test]
    fn big_probe_reports_exceptional_blocks() {
        // probe level 5 has window bound 31; the (2, 0) block's translate
        // coordinate is 15 < 31, so it cannot be bounded and is reported
        // exceptional rather than silently dropped
        let params = CriterionParams {
            seed_w: seed(":1"),
            seed_w_prime: seed(":0"),
            s: 2,
            t: 1,
            probes: vec![1, 5],
            cantor_max: 9,
            z_w: None,
            z_w_prime: None,
        };
        let report = check_criterion_conditions(&params).unwrap();
        let big = report.c7.probes.iter().find(|p| p.level == 5).unwrap();
        assert!(big.exceptional_blocks.contains(&(2, 0)));
        assert!(report.holds_all);
    }

    #[test]
    fn refuter_example() {
        let cert = refute_locfin_pair(&seed(":0"), &seed(":1"), 1, 21, None).unwrap();
        assert_eq!(cert.s, 3);
        assert_eq!(cert.k, ExactNat(nat(64)));
        assert_eq!(cert.l, ExactNat(nat(128)));
        assert!(cert.revalidate().valid);
    }

    #[test]
    fn refuter_rejects_identical_seeds() {
        assert!(matches!(
            refute_locfin_pair(&seed("0:1"), &seed("0:1"), 1, 9, None),
            Err(CoarseError::IdenticalSeeds)
        ));
    }

    #[test]
    fn marked_level_clears_shared_codes() {
        let w = seed(":0"); // codes 1, 3, 7, ...
        let w2 = seed("0:1"); // codes 1, 4, 10, ...
        let shared = w.shared_code_max(&w2).unwrap().unwrap();
        assert_eq!(shared, 1);
        let s = choose_marked_level(&w, &w2, 1, 21).unwrap();
        assert_eq!(s, 3);
        assert!(s > shared);
    }

    #[test]
    fn tampered_certificate_fails() {
        let cert = refute_locfin_pair(&seed(":0"), &seed(":1"), 1, 21, None).unwrap();
        let mut tampered = cert.clone();
        tampered.k = ExactNat(nat(2));
        assert!(!tampered.revalidate().valid);
        let mut tampered = cert;
        tampered.conditions.c8.blocks[0].count = ExactNat(nat(1));
        assert!(!tampered.revalidate().valid);
    }

    #[test]
    fn chain_is_shared_between_families() {
        let fam = BlockFamily::new(seed(":0"), 9).unwrap();
        let chain2 = build_chain(10).unwrap();
        assert_eq!(
            fam.chain().coord_bound(3).unwrap(),
            chain2.coord_bound(3).unwrap()
        );
    }
}
