//! The finitely generated construction on the natural line: the interval
//! sequence with super-linear widths, interval unions selected by branch
//! seeds, the geodesic-ray reduction from the lattice to the naturals, and
//! the counting refuter that certifies two selected unions coarsely
//! non-equivalent at given scale parameters.
//!
//! Interval endpoints grow faster than factorially, so everything runs on
//! exact big integers; certificates store the evaluated inequalities so a
//! validator can recheck them without trusting the verdict.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::adfamily::BinarySeed;
use crate::ballean::modulus::{is_asymorphism_at_budget, AsymorphismReport, PartialBijection};
use crate::ballean::{FiniteSpace, Point, Radius};
use crate::error::{CoarseError, Result};
use crate::exact::{ExactNat, ExactRat};
use crate::subset::SubsetSpec;

/// Hard cap on the witness interval index; endpoints beyond this are
/// astronomically large and signal nonsensical parameters.
pub const WITNESS_INDEX_CAP: u64 = 2048;

/// Cap on how many points a largeness check will materialize.
pub const LARGENESS_ENUM_CAP: usize = 2_000_000;

/// Identifier of the canonical endpoint rule baked into certificates.
pub const CANONICAL_RULE: &str = "canonical-v1";

/// A finite prefix of the interval sequence. Entry n is `[a_n, b_n]`; the
/// construction requires `b_n < a_(n+1)` and the width condition
/// `b_n - a_n > n * a_n` at every index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalSequence {
    entries: Vec<(ExactNat, ExactNat)>,
}

impl IntervalSequence {
    /// Validates an explicit entry list.
    pub fn from_entries(raw: Vec<(BigUint, BigUint)>) -> Result<Self> {
        for (n, (a, b)) in raw.iter().enumerate() {
            if b < a {
                return Err(CoarseError::ParameterViolation(format!(
                    "interval {n} is reversed"
                )));
            }
            if (b - a) <= a * BigUint::from(n) {
                return Err(CoarseError::ParameterViolation(format!(
                    "interval {n} is too narrow: width must exceed {n} * a_{n}"
                )));
            }
            if n + 1 < raw.len() && raw[n + 1].0 <= *b {
                return Err(CoarseError::ParameterViolation(format!(
                    "interval {} starts before interval {n} ends",
                    n + 1
                )));
            }
        }
        Ok(IntervalSequence {
            entries: raw
                .into_iter()
                .map(|(a, b)| (ExactNat(a), ExactNat(b)))
                .collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, n: usize) -> Result<(&BigUint, &BigUint)> {
        self.entries
            .get(n)
            .map(|(a, b)| (&a.0, &b.0))
            .ok_or(CoarseError::SequenceTooShort { required: n + 1 })
    }

    /// Index of the interval containing x, if any.
    pub fn find_interval(&self, x: &BigUint) -> Option<usize> {
        self.entries
            .iter()
            .position(|(a, b)| &a.0 <= x && x <= &b.0)
    }

    /// Whether the sequence decides membership for every value up to x.
    pub fn covers(&self, x: &BigUint) -> bool {
        self.entries.last().is_some_and(|(_, b)| &b.0 >= x)
    }

    /// How many entries are needed before the sequence covers x.
    pub fn required_len_for(&self, x: &BigUint) -> usize {
        for (n, (_, b)) in self.entries.iter().enumerate() {
            if &b.0 >= x {
                return n + 1;
            }
        }
        self.entries.len() + 1
    }
}

/// Endpoints of interval `m` under the canonical minimal-growth rule
/// `a_0 = 1, b_n = a_n (n + 1) + 1, a_(n+1) = b_n + 1`, computed by a
/// rolling pass.
pub fn canonical_endpoints(m: u64) -> Result<(BigUint, BigUint)> {
    if m > WITNESS_INDEX_CAP {
        return Err(CoarseError::ParameterViolation(format!(
            "interval index {m} exceeds the cap {WITNESS_INDEX_CAP}"
        )));
    }
    let mut a = BigUint::one();
    let mut n = 0u64;
    loop {
        let b = &a * BigUint::from(n + 1) + BigUint::one();
        if n == m {
            return Ok((a, b));
        }
        a = &b + BigUint::one();
        n += 1;
    }
}

/// The canonical sequence: every width is exactly `n * a_n + 1`, which makes
/// the width condition strict at every entry.
pub fn generate_intervals(count: usize) -> Result<IntervalSequence> {
    if count == 0 {
        return Err(CoarseError::ParameterViolation("count must be >= 1".into()));
    }
    if count as u64 > WITNESS_INDEX_CAP + 1 {
        return Err(CoarseError::ParameterViolation(format!(
            "count {count} exceeds the cap {}",
            WITNESS_INDEX_CAP + 1
        )));
    }
    let mut entries = Vec::with_capacity(count);
    let mut a = BigUint::one();
    for n in 0..count as u64 {
        let b = &a * BigUint::from(n + 1) + BigUint::one();
        entries.push((ExactNat(a.clone()), ExactNat(b.clone())));
        a = &b + BigUint::one();
    }
    Ok(IntervalSequence { entries })
}

/// The union of the intervals whose index is a branch code of the seed,
/// with lazy exact membership.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalUnionSet {
    seed: BinarySeed,
    sequence: IntervalSequence,
}

impl IntervalUnionSet {
    pub fn new(seed: BinarySeed, sequence: IntervalSequence) -> Self {
        IntervalUnionSet { seed, sequence }
    }

    pub fn seed(&self) -> &BinarySeed {
        &self.seed
    }

    pub fn sequence(&self) -> &IntervalSequence {
        &self.sequence
    }

    /// Membership is exact wherever the sequence covers the query.
    pub fn contains(&self, x: &BigUint) -> Result<bool> {
        if !self.sequence.covers(x) {
            return Err(CoarseError::SequenceTooShort {
                required: self.sequence.required_len_for(x),
            });
        }
        Ok(match self.sequence.find_interval(x) {
            Some(n) => u64::try_from(n).is_ok_and(|code| self.seed.contains_code(code)),
            None => false,
        })
    }

    /// Interval indices selected by the seed among the stored entries.
    pub fn selected_indices(&self) -> Vec<usize> {
        (0..self.sequence.len())
            .filter(|&n| u64::try_from(n).is_ok_and(|c| self.seed.contains_code(c)))
            .collect()
    }
}

/// An explicit truncation of an interval union, cut at `x_max`.
#[derive(Clone, Debug)]
pub struct IntervalUnionTruncation {
    pub set: IntervalUnionSet,
    pub x_max: u64,
    pub points: Vec<u64>,
}

impl IntervalUnionTruncation {
    /// The truncation as a metric subballean of the naturals, with the cut
    /// recorded so edge balls are flagged.
    pub fn space(&self) -> Result<FiniteSpace> {
        FiniteSpace::nat_points_truncated(self.points.clone(), self.x_max)
    }
}

/// Materializes `I_W ∩ [0, x_max]`. The sequence must cover `x_max` so that
/// membership beyond the listed points is decidable rather than guessed.
pub fn assemble_interval_union(
    seed: &BinarySeed,
    sequence: &IntervalSequence,
    x_max: u64,
) -> Result<IntervalUnionTruncation> {
    let bound = BigUint::from(x_max);
    if !sequence.covers(&bound) {
        return Err(CoarseError::SequenceTooShort {
            required: sequence.required_len_for(&bound),
        });
    }
    let set = IntervalUnionSet::new(seed.clone(), sequence.clone());
    let mut points = Vec::new();
    for n in set.selected_indices() {
        let (a, b) = sequence.entry(n)?;
        if a > &bound {
            break;
        }
        let lo = a
            .to_u64()
            .ok_or_else(|| CoarseError::EnumerationCap("interval endpoint exceeds u64".into()))?;
        let hi = b.min(&bound).to_u64().unwrap();
        points.extend(lo..=hi);
        if points.len() > LARGENESS_ENUM_CAP {
            return Err(CoarseError::EnumerationCap(format!(
                "truncation exceeds {LARGENESS_ENUM_CAP} points"
            )));
        }
    }
    Ok(IntervalUnionTruncation { set, x_max, points })
}

/// The lattice with unit generators, and the ray along the first axis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeodesicRaySpec {
    pub dimension: usize,
}

/// Outcome of the ray verification: breadth-first word distances between
/// ray points, whether they equal the index differences, and the modulus
/// evidence that indexing is an asymorphism onto the natural line.
#[derive(Debug)]
pub struct GeodesicReduction {
    pub dimension: usize,
    pub n_max: u64,
    pub ray_distances: Vec<Vec<u64>>,
    pub distances_match: bool,
    pub asymorphism: AsymorphismReport,
}

/// Breadth-first distances from one lattice point to the ray points.
fn bfs_ray_distances(
    dim: usize,
    start: &[i64],
    targets: &HashMap<Vec<i64>, usize>,
    depth_cap: u64,
    state_budget: usize,
) -> Result<Vec<Option<u64>>> {
    let mut dist: HashMap<Vec<i64>, u64> = HashMap::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    let mut found = vec![None; targets.len()];
    dist.insert(start.to_vec(), 0);
    queue.push_back(start.to_vec());
    if let Some(&i) = targets.get(start) {
        found[i] = Some(0);
    }
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        if d == depth_cap {
            continue;
        }
        for axis in 0..dim {
            for step in [-1i64, 1] {
                let mut next = cur.clone();
                next[axis] += step;
                if dist.contains_key(&next) {
                    continue;
                }
                if dist.len() >= state_budget {
                    return Err(CoarseError::BudgetExceeded(format!(
                        "breadth-first search exceeded {state_budget} states"
                    )));
                }
                dist.insert(next.clone(), d + 1);
                if let Some(&i) = targets.get(&next) {
                    found[i] = Some(d + 1);
                }
                queue.push_back(next);
            }
        }
    }
    Ok(found)
}

/// Verifies by breadth-first search that the ray `v_n = n * e_1` is geodesic
/// up to `n_max` (word distance between `v_n` and `v_m` is `|n - m|`) and
/// exhibits index assignment as an asymorphism onto `[0, n_max]` with
/// identity moduli both ways.
pub fn geodesic_reduction(
    spec: &GeodesicRaySpec,
    n_max: u64,
    state_budget: usize,
) -> Result<GeodesicReduction> {
    if spec.dimension == 0 {
        return Err(CoarseError::ParameterViolation(
            "dimension must be >= 1".into(),
        ));
    }
    let count = usize::try_from(n_max + 1)
        .map_err(|_| CoarseError::ParameterViolation("n_max too large".into()))?;
    let ray: Vec<Vec<i64>> = (0..=n_max as i64)
        .map(|n| {
            let mut v = vec![0i64; spec.dimension];
            v[0] = n;
            v
        })
        .collect();
    let targets: HashMap<Vec<i64>, usize> = ray.iter().cloned().zip(0..count).collect();
    let mut distances = vec![vec![0u64; count]; count];
    let mut all = true;
    for (i, start) in ray.iter().enumerate() {
        let found = bfs_ray_distances(spec.dimension, start, &targets, n_max, state_budget)?;
        for (j, d) in found.into_iter().enumerate() {
            let expected = (i as u64).abs_diff(j as u64);
            match d {
                Some(v) => {
                    distances[i][j] = v;
                    if v != expected {
                        all = false;
                    }
                }
                None => {
                    // deeper than the cap: cannot be a geodesic ray point
                    distances[i][j] = u64::MAX;
                    all = false;
                }
            }
        }
    }
    let ray_points: Vec<Point> = ray.iter().cloned().map(Point::Vector).collect();
    let ray_space = FiniteSpace::from_distance_table(ray_points.clone(), distances.clone())?;
    let line = FiniteSpace::nat_interval(n_max)?;
    let index_map = PartialBijection::new(
        ray_points
            .into_iter()
            .enumerate()
            .map(|(i, p)| (p, Point::Nat(i as u64))),
    )?;
    let asymorphism = is_asymorphism_at_budget(&ray_space, &line, &index_map, n_max)?;
    Ok(GeodesicReduction {
        dimension: spec.dimension,
        n_max,
        ray_distances: distances,
        distances_match: all,
        asymorphism,
    })
}

/// A witness interval index together with its canonical endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessInterval {
    pub m: u64,
    pub a_m: ExactNat,
    pub b_m: ExactNat,
}

/// The smallest index in `W \ W'` beyond every shared code whose canonical
/// interval is wide enough for the scale parameters: width strictly greater
/// than both `2r * a_m` and `2t`.
pub fn find_witness_interval(
    w: &BinarySeed,
    w_prime: &BinarySeed,
    r: u64,
    t: u64,
) -> Result<WitnessInterval> {
    if r == 0 {
        return Err(CoarseError::ParameterViolation("r must be >= 1".into()));
    }
    let shared = w.shared_code_max(w_prime)?; // errors on identical seeds
    let codes = w.members(crate::adfamily::MAX_CODE_LEN as u32)?;
    let two_r = BigUint::from(2 * r);
    let two_t = BigUint::from(2 * t);
    let mut a = BigUint::one();
    let mut n = 0u64;
    for code in codes {
        if code > WITNESS_INDEX_CAP {
            break;
        }
        if shared.is_some_and(|s| code <= s) {
            continue;
        }
        if w_prime.contains_code(code) {
            continue; // beyond the shared prefix this cannot happen
        }
        // roll the canonical recurrence forward to this index
        while n < code {
            let b = &a * BigUint::from(n + 1) + BigUint::one();
            a = &b + BigUint::one();
            n += 1;
        }
        let b = &a * BigUint::from(n + 1) + BigUint::one();
        let width = &b - &a;
        if width > &two_r * &a && width > two_t {
            return Ok(WitnessInterval {
                m: code,
                a_m: ExactNat(a),
                b_m: ExactNat(b),
            });
        }
    }
    Err(CoarseError::WitnessNotFound(format!(
        "no admissible witness index below {WITNESS_INDEX_CAP} for r={r}, t={t}"
    )))
}

/// The evaluated quantities of one counting refutation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinGenInequalities {
    /// `max(W ∩ W')`, i.e. the code of the longest shared prefix.
    pub shared_code_max: Option<u64>,
    /// Consecutive points of Z may be at most this far apart: `2r + 2`.
    pub gap_bound: u64,
    /// Largest observed consecutive gap in Z.
    pub observed_max_gap: Option<ExactNat>,
    /// `|Z|`, the points of X inside the witness interval.
    pub z_count: ExactNat,
    /// `b_m - a_m`.
    pub interval_width: ExactNat,
    /// `2r * a_m` — the width must exceed this (condition on the spread).
    pub spread_requirement: ExactNat,
    /// `2t` — the width must exceed this (condition on the modulus scale).
    pub modulus_requirement: ExactNat,
    /// Lower bound on `|Z| - 1`: `(b_m - a_m) / 2r - 1`.
    pub k_lb: ExactRat,
    /// Pigeonhole capacity of `[1, a_m - 1]`.
    pub capacity: ExactNat,
}

/// A machine-checkable record that the interval unions of two seeds admit
/// no asymorphism of large subsets at scale `(r, t)`: any such map would
/// squeeze more than `a_m - 1` points below the witness interval (or,
/// symmetrically via the inverse witness, below the inverse one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinGenCertificate {
    pub seeds: Vec<BinarySeed>,
    pub r: u64,
    pub t: u64,
    pub m: u64,
    pub a_m: ExactNat,
    pub b_m: ExactNat,
    /// Witness for repeating the argument with the inverse map.
    pub inverse_witness: WitnessInterval,
    pub sequence_rule: String,
    pub inequalities: FinGenInequalities,
    pub verdict: String,
}

fn rational(n: &BigUint) -> BigRational {
    BigRational::from_integer(n.clone().into())
}

/// Runs the counting check for a given witness index and emits the
/// certificate. `x` and `x_prime` are the large subsets (pass the interval
/// unions themselves for the default covering at any radius).
#[allow(clippy::too_many_arguments)]
pub fn verify_counting_argument(
    seed_w: &BinarySeed,
    seed_w_prime: &BinarySeed,
    x: &SubsetSpec,
    x_prime: &SubsetSpec,
    r: u64,
    t: u64,
    m: u64,
    sequence: &IntervalSequence,
) -> Result<FinGenCertificate> {
    if r == 0 {
        return Err(CoarseError::ParameterViolation("r must be >= 1".into()));
    }
    let shared = seed_w.shared_code_max(seed_w_prime)?;
    if !seed_w.contains_code(m) || seed_w_prime.contains_code(m) {
        return Err(CoarseError::ParameterViolation(format!(
            "witness index {m} is not in W \\ W'"
        )));
    }
    if shared.is_some_and(|s| m <= s) {
        return Err(CoarseError::ParameterViolation(format!(
            "witness index {m} does not exceed the shared codes"
        )));
    }
    let (a_m, b_m) = sequence
        .entry(m as usize)
        .map(|(a, b)| (a.clone(), b.clone()))?;
    let width = &b_m - &a_m;

    // width conditions at this index
    let spread_requirement = BigUint::from(2 * r) * &a_m;
    if width <= spread_requirement {
        return Err(CoarseError::ConditionFailed(format!(
            "witness interval too narrow for r={r}: {width} <= {spread_requirement}"
        )));
    }
    let modulus_requirement = BigUint::from(2 * t);
    if width <= modulus_requirement {
        return Err(CoarseError::ConditionFailed(format!(
            "witness interval too narrow for t={t}: {width} <= {modulus_requirement}"
        )));
    }

    // largeness preconditions for the supplied subsets
    check_largeness(seed_w, sequence, x, r, &b_m, "X in I_W")?;
    check_largeness(seed_w_prime, sequence, x_prime, r, &b_m, "X' in I_W'")?;

    // enumerate Z = X ∩ [a_m, b_m] and check the gap bound
    let profile = x.window_profile(&a_m, &b_m)?;
    let gap_bound = 2 * r + 2;
    if let Some(gap) = &profile.max_gap {
        if gap > &BigUint::from(gap_bound) {
            return Err(CoarseError::GapViolation(format!(
                "points of X inside the witness interval are {gap} apart; allowed {gap_bound}"
            )));
        }
    }
    if profile.count.is_zero() {
        return Err(CoarseError::GapViolation(
            "X has no points inside the witness interval".into(),
        ));
    }

    // the count bound: |Z| - 1 >= (b_m - a_m) / 2r - 1 > a_m - 1
    let k = rational(&(&profile.count - BigUint::one()));
    let k_lb = rational(&width) / rational(&BigUint::from(2 * r)) - BigRational::one();
    if k < k_lb {
        return Err(CoarseError::ConditionFailed(format!(
            "observed count {} is below the lower bound {}",
            profile.count,
            ExactRat(k_lb)
        )));
    }
    let capacity = &a_m - BigUint::one();
    if k_lb <= rational(&capacity) {
        return Err(CoarseError::ConditionFailed(format!(
            "count bound {} does not exceed the capacity {capacity}",
            ExactRat(k_lb)
        )));
    }

    // symmetric fallback: a witness for running the argument on the inverse
    let inverse_witness = find_witness_interval(seed_w_prime, seed_w, r, t)?;

    Ok(FinGenCertificate {
        seeds: vec![seed_w.clone(), seed_w_prime.clone()],
        r,
        t,
        m,
        a_m: ExactNat(a_m.clone()),
        b_m: ExactNat(b_m),
        inverse_witness,
        sequence_rule: CANONICAL_RULE.to_string(),
        inequalities: FinGenInequalities {
            shared_code_max: shared,
            gap_bound,
            observed_max_gap: profile.max_gap.map(ExactNat),
            z_count: ExactNat(profile.count),
            interval_width: ExactNat(width),
            spread_requirement: ExactNat(spread_requirement),
            modulus_requirement: ExactNat(modulus_requirement),
            k_lb: ExactRat(k_lb),
            capacity: ExactNat(capacity),
        },
        verdict: "refuted".to_string(),
    })
}

/// Largeness of `subset` inside the interval union of `seed`, checked on
/// the truncation `[0, horizon]`. The union is trivially large in itself,
/// so that case short-circuits; anything else is materialized and checked.
fn check_largeness(
    seed: &BinarySeed,
    sequence: &IntervalSequence,
    subset: &SubsetSpec,
    r: u64,
    horizon: &BigUint,
    what: &str,
) -> Result<()> {
    if let SubsetSpec::IntervalUnion(u) = subset {
        if u.seed() == seed && u.sequence() == sequence {
            return Ok(());
        }
    }
    let x_max = horizon.to_u64().ok_or_else(|| {
        CoarseError::EnumerationCap(
            "witness interval too large to materialize a largeness check".into(),
        )
    })?;
    let ambient = assemble_interval_union(seed, sequence, x_max)?;
    let space = ambient.space()?;
    let members = subset.materialize_nat(x_max)?;
    let y: BTreeSet<Point> = members.into_iter().map(Point::Nat).collect();
    for p in &y {
        if !space.contains(p) {
            return Err(CoarseError::LargenessFailed(format!(
                "{what}: point {p} is outside the ambient union"
            )));
        }
    }
    let report = space.is_large_at(&y, &Radius::Int(r))?;
    if !report.is_large {
        return Err(CoarseError::LargenessFailed(format!(
            "{what}: not large at radius {r}; uncovered point {:?}",
            report.uncovered
        )));
    }
    Ok(())
}

/// Finds the witness index for the pair and runs the counting check with
/// the interval unions themselves as the large subsets.
pub fn refute_fingen_pair(
    w: &BinarySeed,
    w_prime: &BinarySeed,
    r: u64,
    t: u64,
) -> Result<FinGenCertificate> {
    let witness = find_witness_interval(w, w_prime, r, t)?;
    let sequence = generate_intervals(witness.m as usize + 1)?;
    let x = SubsetSpec::IntervalUnion(IntervalUnionSet::new(w.clone(), sequence.clone()));
    let x_prime =
        SubsetSpec::IntervalUnion(IntervalUnionSet::new(w_prime.clone(), sequence.clone()));
    verify_counting_argument(w, w_prime, &x, &x_prime, r, t, witness.m, &sequence)
}

/// Recheck of a certificate from its raw parameters alone.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateValidation {
    pub valid: bool,
    pub failures: Vec<String>,
}

impl FinGenCertificate {
    /// Recomputes every inequality from the seeds and `(r, t, m)` without
    /// trusting any stored value, then compares against the stored fields.
    pub fn revalidate(&self) -> CertificateValidation {
        let mut failures = Vec::new();
        let mut check = |ok: bool, msg: &str| {
            if !ok {
                failures.push(msg.to_string());
            }
        };
        check(self.seeds.len() == 2, "certificate must carry two seeds");
        check(self.verdict == "refuted", "unexpected verdict");
        check(
            self.sequence_rule == CANONICAL_RULE,
            "unknown sequence rule",
        );
        if self.seeds.len() != 2 {
            return CertificateValidation {
                valid: false,
                failures,
            };
        }
        let (w, w2) = (&self.seeds[0], &self.seeds[1]);
        match w.shared_code_max(w2) {
            Err(_) => check(false, "seeds are identical"),
            Ok(shared) => {
                check(
                    shared == self.inequalities.shared_code_max,
                    "stored shared-code bound differs from recomputation",
                );
                check(
                    shared.is_none_or(|s| self.m > s),
                    "witness index does not exceed the shared codes",
                );
            }
        }
        check(w.contains_code(self.m), "witness index is not in W");
        check(!w2.contains_code(self.m), "witness index is in W'");
        check(self.r >= 1, "r must be >= 1");

        match canonical_endpoints(self.m) {
            Err(_) => check(false, "witness index beyond the endpoint cap"),
            Ok((a, b)) => {
                check(
                    a == self.a_m.0,
                    "stored a_m differs from the canonical rule",
                );
                check(
                    b == self.b_m.0,
                    "stored b_m differs from the canonical rule",
                );
                let width = &b - &a;
                check(
                    self.inequalities.interval_width.0 == width,
                    "stored width differs",
                );
                let spread = BigUint::from(2 * self.r) * &a;
                check(
                    self.inequalities.spread_requirement.0 == spread,
                    "stored spread requirement differs",
                );
                check(width > spread, "width condition fails at the spread bound");
                let modulus = BigUint::from(2 * self.t);
                check(
                    self.inequalities.modulus_requirement.0 == modulus,
                    "stored modulus requirement differs",
                );
                check(
                    width > modulus,
                    "width condition fails at the modulus bound",
                );
                let k_lb =
                    rational(&width) / rational(&BigUint::from(2 * self.r)) - BigRational::one();
                check(self.inequalities.k_lb.0 == k_lb, "stored k_lb differs");
                let capacity = &a - BigUint::one();
                check(
                    self.inequalities.capacity.0 == capacity,
                    "stored capacity differs",
                );
                check(
                    k_lb > rational(&capacity),
                    "count bound does not exceed the capacity",
                );
                check(
                    self.inequalities.gap_bound == 2 * self.r + 2,
                    "stored gap bound differs",
                );
                let k = rational(&self.inequalities.z_count.0) - BigRational::one();
                check(k >= k_lb, "stored count is below the bound");
            }
        }

        // the inverse witness must satisfy the same conditions with the
        // seeds swapped
        let iw = &self.inverse_witness;
        check(w2.contains_code(iw.m), "inverse witness is not in W'");
        check(!w.contains_code(iw.m), "inverse witness is in W");
        match canonical_endpoints(iw.m) {
            Err(_) => check(false, "inverse witness beyond the endpoint cap"),
            Ok((a, b)) => {
                check(a == iw.a_m.0, "stored inverse a differs");
                check(b == iw.b_m.0, "stored inverse b differs");
                let width = &b - &a;
                check(
                    width > BigUint::from(2 * self.r) * &a,
                    "inverse width condition fails at the spread bound",
                );
                check(
                    width > BigUint::from(2 * self.t),
                    "inverse width condition fails at the modulus bound",
                );
            }
        }

        CertificateValidation {
            valid: failures.is_empty(),
            failures,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(s: &str) -> BinarySeed {
        BinarySeed::parse(s).unwrap()
    }

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn canonical_recurrence_first_entries() {
        let seq = generate_intervals(2).unwrap();
        assert_eq!(seq.entry(0).unwrap(), (&nat(1), &nat(2)));
        assert_eq!(seq.entry(1).unwrap(), (&nat(3), &nat(7)));
        let seq4 = generate_intervals(4).unwrap();
        assert_eq!(seq4.entry(3).unwrap(), (&nat(26), &nat(105)));
        assert!(nat(105) - nat(26) > nat(3) * nat(26));
    }

    #[test]
    fn widths_exceed_requirement_by_one() {
        let seq = generate_intervals(60).unwrap();
        for n in 0..60usize {
            let (a, b) = seq.entry(n).unwrap();
            assert_eq!(b - a, a * nat(n as u64) + nat(1));
        }
    }

    #[test]
    fn rolling_endpoints_agree_with_materialized() {
        let seq = generate_intervals(30).unwrap();
        for m in [0u64, 1, 7, 29] {
            let (a, b) = canonical_endpoints(m).unwrap();
            let (ea, eb) = seq.entry(m as usize).unwrap();
            assert_eq!((&a, &b), (ea, eb));
        }
    }

    #[test]
    fn from_entries_validates_width_and_order() {
        assert!(IntervalSequence::from_entries(vec![(nat(1), nat(2)), (nat(3), nat(7))]).is_ok());
        // too narrow at n = 1: width must exceed a_1
        assert!(IntervalSequence::from_entries(vec![(nat(1), nat(2)), (nat(3), nat(6))]).is_err());
        // overlap
        assert!(IntervalSequence::from_entries(vec![(nat(1), nat(5)), (nat(4), nat(20))]).is_err());
    }

    #[test]
    fn assemble_union_examples() {
        let seq = generate_intervals(8).unwrap();
        let zeros = seed(":0"); // codes 1, 3, 7, ...
        let trunc = assemble_interval_union(&zeros, &seq, 110).unwrap();
        let expect: Vec<u64> = (3..=7).chain(26..=105).collect();
        assert_eq!(trunc.points, expect);

        let ones = seed(":1"); // codes 2, 6, 14, ...
        let trunc = assemble_interval_union(&ones, &seq, 30).unwrap();
        let expect: Vec<u64> = (8..=25).collect();
        assert_eq!(trunc.points, expect);

        // below the first selected interval the truncation is empty
        let trunc = assemble_interval_union(&ones, &seq, 7).unwrap();
        assert!(trunc.points.is_empty());

        // a sequence that does not cover the bound is refused with the
        // required length
        let short = generate_intervals(2).unwrap();
        match assemble_interval_union(&zeros, &short, 110) {
            Err(CoarseError::SequenceTooShort { required }) => assert_eq!(required, 3),
            other => panic!("expected SequenceTooShort, got {other:?}"),
        }
    }

    #[test]
    fn lazy_membership_matches_enumeration() {
        let seq = generate_intervals(8).unwrap();
        let s = seed("0:1");
        let union = IntervalUnionSet::new(s.clone(), seq.clone());
        let trunc = assemble_interval_union(&s, &seq, 600).unwrap();
        let listed: BTreeSet<u64> = trunc.points.iter().copied().collect();
        for x in 0..=600u64 {
            assert_eq!(
                union.contains(&nat(x)).unwrap(),
                listed.contains(&x),
                "mismatch at {x}"
            );
        }
    }

    #[test]
    fn geodesic_ray_on_the_line() {
        let red = geodesic_reduction(&GeodesicRaySpec { dimension: 1 }, 10, 100_000).unwrap();
        assert!(red.distances_match);
        assert!(red.asymorphism.bounded_at_budget);
    }

    #[test]
    fn geodesic_ray_in_the_plane() {
        let red = geodesic_reduction(&GeodesicRaySpec { dimension: 2 }, 10, 1_000_000).unwrap();
        assert!(red.distances_match);
        assert_eq!(red.ray_distances[3][7], 4);
        // identity moduli both ways
        for e in &red.asymorphism.forward.entries {
            assert_eq!(e.value, Some(e.radius));
        }
        for e in &red.asymorphism.inverse.entries {
            assert_eq!(e.value, Some(e.radius));
        }
    }

    #[test]
    fn bfs_budget_is_enforced() {
        let spec = GeodesicRaySpec { dimension: 2 };
        assert!(matches!(
            geodesic_reduction(&spec, 10, 20),
            Err(CoarseError::BudgetExceeded(_))
        ));
    }

    #[test]
    fn witness_examples() {
        let w = seed(":0");
        let w2 = seed(":1");
        let found = find_witness_interval(&w, &w2, 1, 3).unwrap();
        assert_eq!(found.m, 3);
        assert_eq!(
            (found.a_m.0.clone(), found.b_m.0.clone()),
            (nat(26), nat(105))
        );
        // r = 2 forces the next code: indices below 4 are too narrow
        let found = find_witness_interval(&w, &w2, 2, 3).unwrap();
        assert_eq!(found.m, 7);
        // identical seeds
        assert!(matches!(
            find_witness_interval(&w, &w, 1, 1),
            Err(CoarseError::IdenticalSeeds)
        ));
    }

    #[test]
    fn witness_respects_shared_prefix() {
        let a = seed("10110:0");
        let b = seed("10111:0");
        assert_eq!(a.lcp_bound(&b).unwrap(), 4);
        let shared_max = a.shared_code_max(&b).unwrap().unwrap();
        let found = find_witness_interval(&a, &b, 1, 1).unwrap();
        assert!(found.m > shared_max);
    }

    #[test]
    fn width_condition_matches_index_threshold() {
        // under the canonical rule, the spread condition holds iff m >= 2r
        for r in [1u64, 2, 3, 4] {
            for m in 1..=12u64 {
                let (a, b) = canonical_endpoints(m).unwrap();
                let holds = (&b - &a) > nat(2 * r) * &a;
                assert_eq!(holds, m >= 2 * r, "r={r}, m={m}");
            }
        }
    }

    #[test]
    fn counting_refutation_example() {
        let w = seed(":0");
        let w2 = seed(":1");
        let cert = refute_fingen_pair(&w, &w2, 1, 3).unwrap();
        assert_eq!(cert.m, 3);
        assert_eq!(cert.inequalities.z_count, ExactNat(nat(80)));
        assert_eq!(cert.inequalities.observed_max_gap, Some(ExactNat(nat(1))));
        assert_eq!(cert.inequalities.k_lb.to_string(), "77/2");
        assert_eq!(cert.inequalities.capacity, ExactNat(nat(25)));
        assert_eq!(cert.inverse_witness.m, 2);
        assert!(cert.revalidate().valid);
    }

    #[test]
    fn identical_seeds_are_rejected() {
        let s = seed("0:1");
        assert!(matches!(
            refute_fingen_pair(&s, &s, 1, 3),
            Err(CoarseError::IdenticalSeeds)
        ));
    }

    #[test]
    fn sparse_large_subset_passes_dense_one_fails() {
        let w = seed(":0");
        let w2 = seed(":1");
        let seq = generate_intervals(4).unwrap();
        // every other point of I_W is still large at radius 1 and passes
        // the gap bound 2r + 2 = 4
        let full = assemble_interval_union(&w, &seq, 105).unwrap();
        let sparse: BTreeSet<u64> = full.points.iter().copied().step_by(2).collect();
        let x = SubsetSpec::Explicit(sparse);
        let x2 = SubsetSpec::IntervalUnion(IntervalUnionSet::new(w2.clone(), seq.clone()));
        let cert = verify_counting_argument(&w, &w2, &x, &x2, 1, 3, 3, &seq).unwrap();
        assert_eq!(cert.inequalities.z_count, ExactNat(nat(40)));

        // removing a run of 2r + 1 consecutive points violates largeness
        let mut gappy: BTreeSet<u64> = full.points.iter().copied().collect();
        for v in 50..=52 {
            gappy.remove(&v);
        }
        let x = SubsetSpec::Explicit(gappy);
        assert!(matches!(
            verify_counting_argument(&w, &w2, &x, &x2, 1, 3, 3, &seq),
            Err(CoarseError::LargenessFailed(_))
        ));
    }

    #[test]
    fn oversized_t_is_refused() {
        let w = seed(":0");
        let w2 = seed(":1");
        let seq = generate_intervals(4).unwrap();
        let x = SubsetSpec::IntervalUnion(IntervalUnionSet::new(w.clone(), seq.clone()));
        let x2 = SubsetSpec::IntervalUnion(IntervalUnionSet::new(w2.clone(), seq.clone()));
        // width of interval 3 is 79; 2t = 80 exceeds it
        assert!(matches!(
            verify_counting_argument(&w, &w2, &x, &x2, 1, 40, 3, &seq),
            Err(CoarseError::ConditionFailed(_))
        ));
    }

    #[test]
    fn tampered_certificate_fails_revalidation() {
        let cert = refute_fingen_pair(&seed(":0"), &seed(":1"), 1, 3).unwrap();
        let mut tampered = cert.clone();
        tampered.inequalities.capacity = ExactNat(nat(1000));
        let outcome = tampered.revalidate();
        assert!(!outcome.valid);
        assert!(outcome.failures.iter().any(|f| f.contains("capacity")));
    }
}
