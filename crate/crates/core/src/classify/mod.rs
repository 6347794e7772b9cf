//! Decision procedures for the two classification results the library
//! leans on, plus the subset taxonomy.
//!
//! Locally finite side: a countable locally finite abelian group given as a
//! direct sum of cyclic groups is characterized, up to asymorphism, by
//! which finite subgroup orders it realizes. Orders realized by such a sum
//! are closed under divisors and least common multiples, so the whole
//! criterion collapses to comparing, prime by prime, how much of each prime
//! the summands can absorb — the capacity function computed here.
//!
//! Abelian side: two countable abelian groups are coarsely equivalent
//! exactly when their torsion-free ranks agree and they are both finitely
//! generated or both not. Ranks of presented groups come from the Smith
//! normal form of the relation matrix.

pub mod snf;
pub mod taxonomy;

pub use snf::{smith_normal_form, torsion_free_rank, IntMatrix, SnfResult};
pub use taxonomy::{
    classify_subset_spec, classify_subset_taxonomy, large_equivalence_witness,
    LargeEquivalenceWitness, SmallVerdict, TaxonomyReport,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoarseError, Result};

/// How often a cyclic summand repeats.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(u64),
    Omega,
}

impl Serialize for Multiplicity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => s.serialize_u64(*n),
            Multiplicity::Omega => s.serialize_str("omega"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) => Ok(Multiplicity::Finite(n)),
            Raw::Tag(t) if t == "omega" => Ok(Multiplicity::Omega),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!(
                "multiplicity must be a count or \"omega\", got {t:?}"
            ))),
        }
    }
}

/// One family of identical cyclic summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicSummand {
    pub order: u64,
    pub multiplicity: Multiplicity,
}

/// A direct sum of finite cyclic groups: the canonical shape of a countable
/// locally finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicSumSpec {
    pub summands: Vec<CyclicSummand>,
}

impl CyclicSumSpec {
    pub fn validate(&self) -> Result<()> {
        if self.summands.is_empty() {
            return Err(CoarseError::ParameterViolation(
                "a cyclic sum needs at least one summand".into(),
            ));
        }
        for s in &self.summands {
            if s.order < 2 {
                return Err(CoarseError::ParameterViolation(format!(
                    "cyclic order {} is below 2",
                    s.order
                )));
            }
            if s.multiplicity == Multiplicity::Finite(0) {
                return Err(CoarseError::ParameterViolation(
                    "zero multiplicity summand".into(),
                ));
            }
        }
        Ok(())
    }

    /// Convenience constructor for a finite sum given as a list of orders.
    pub fn from_orders(orders: &[u64]) -> Result<Self> {
        let spec = CyclicSumSpec {
            summands: orders
                .iter()
                .map(|&order| CyclicSummand {
                    order,
                    multiplicity: Multiplicity::Finite(1),
                })
                .collect(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.summands
            .iter()
            .all(|s| matches!(s.multiplicity, Multiplicity::Finite(_)))
    }
}

/// An extended natural: how much of one prime the group can absorb.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Capacity {
    Finite(u64),
    Infinite,
}

impl Capacity {
    fn add(self, other: Capacity) -> Capacity {
        match (self, other) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a + b),
            _ => Capacity::Infinite,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => write!(f, "{v}"),
            Capacity::Infinite => write!(f, "inf"),
        }
    }
}

/// Per-prime capacity: the supremum of `v_p` over realizable finite
/// subgroup orders. A finite subgroup of order n exists exactly when every
/// prime of n fits under its capacity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapacityFunction {
    per_prime: BTreeMap<u64, Capacity>,
}

impl CapacityFunction {
    pub fn capacity(&self, p: u64) -> Capacity {
        self.per_prime
            .get(&p)
            .copied()
            .unwrap_or(Capacity::Finite(0))
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.per_prime.keys().copied()
    }

    /// Whether a finite subgroup of this order is realizable.
    pub fn allows_order(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        factorize(n)
            .into_iter()
            .all(|(p, e)| Capacity::Finite(e) <= self.capacity(p))
    }

    /// Pointwise comparison: whether every capacity here fits under the
    /// other's. Equivalent to: every realizable order here divides a
    /// realizable order there.
    pub fn dominated_by(&self, other: &CapacityFunction) -> std::result::Result<(), u64> {
        for (&p, &c) in &self.per_prime {
            if c > other.capacity(p) {
                return Err(p);
            }
        }
        Ok(())
    }
}

fn factorize(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Sums the per-prime valuations over all summands, with repetition.
pub fn subgroup_capacity(spec: &CyclicSumSpec) -> Result<CapacityFunction> {
    spec.validate()?;
    let mut per_prime: BTreeMap<u64, Capacity> = BTreeMap::new();
    for s in &spec.summands {
        for (p, e) in factorize(s.order) {
            let gain = match s.multiplicity {
                Multiplicity::Finite(m) => Capacity::Finite(e * m),
                Multiplicity::Omega => Capacity::Infinite,
            };
            let cur = per_prime.entry(p).or_insert(Capacity::Finite(0));
            *cur = cur.add(gain);
        }
    }
    Ok(CapacityFunction { per_prime })
}

/// Decision with evidence for the locally finite classification.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocFinDecision {
    pub asymorphic: bool,
    /// Every realizable order of the first group divides one of the second.
    pub orders_embed_forward: bool,
    /// Every realizable order of the second group divides one of the first
    /// — the second condition read symmetrically to the first.
    pub orders_embed_backward: bool,
    pub failing_prime: Option<u64>,
    pub capacity_a: CapacityFunction,
    pub capacity_b: CapacityFunction,
    /// Reading applied to the second condition, recorded for transparency.
    pub backward_reading: String,
}

/// Decides whether the two sums are asymorphic: both divisibility
/// conditions, evaluated prime by prime through the capacities.
pub fn decide_locfin_asymorphic(a: &CyclicSumSpec, b: &CyclicSumSpec) -> Result<LocFinDecision> {
    let capacity_a = subgroup_capacity(a)?;
    let capacity_b = subgroup_capacity(b)?;
    let forward = capacity_a.dominated_by(&capacity_b);
    let backward = capacity_b.dominated_by(&capacity_a);
    Ok(LocFinDecision {
        asymorphic: forward.is_ok() && backward.is_ok(),
        orders_embed_forward: forward.is_ok(),
        orders_embed_backward: backward.is_ok(),
        failing_prime: forward.err().or(backward.err()),
        capacity_a,
        capacity_b,
        backward_reading:
            "every realizable order of the second group divides a realizable order of the first"
                .to_string(),
    })
}

/// A countable abelian group, in one of three shapes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AbelianSpec {
    /// Finitely presented: generator count and integer relation rows.
    Presentation {
        generators: usize,
        relations: Vec<Vec<i64>>,
    },
    /// A direct sum of finite cyclic groups (possibly infinitely many).
    CyclicSum(CyclicSumSpec),
    /// Known rank and generation mode, stated directly.
    Symbolic { rank: u64, finitely_generated: bool },
}

impl AbelianSpec {
    pub fn rank(&self) -> Result<u64> {
        match self {
            AbelianSpec::Presentation {
                generators,
                relations,
            } => {
                let matrix = IntMatrix::from_rows(relations.clone())?;
                Ok(torsion_free_rank(*generators, &matrix)? as u64)
            }
            AbelianSpec::CyclicSum(spec) => {
                spec.validate()?;
                Ok(0)
            }
            AbelianSpec::Symbolic { rank, .. } => Ok(*rank),
        }
    }

    pub fn finitely_generated(&self) -> Result<bool> {
        match self {
            AbelianSpec::Presentation { .. } => Ok(true),
            AbelianSpec::CyclicSum(spec) => {
                spec.validate()?;
                Ok(spec.is_finitely_generated())
            }
            AbelianSpec::Symbolic {
                finitely_generated, ..
            } => Ok(*finitely_generated),
        }
    }
}

/// Decision with evidence for coarse equivalence of countable abelian
/// groups: ranks coincide and generation modes match.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AbelianDecision {
    pub equivalent: bool,
    pub rank_a: u64,
    pub rank_b: u64,
    pub finitely_generated_a: bool,
    pub finitely_generated_b: bool,
}

pub fn decide_abelian_coarse_equiv(a: &AbelianSpec, b: &AbelianSpec) -> Result<AbelianDecision> {
    let rank_a = a.rank()?;
    let rank_b = b.rank()?;
    let fg_a = a.finitely_generated()?;
    let fg_b = b.finitely_generated()?;
    Ok(AbelianDecision {
        equivalent: rank_a == rank_b && fg_a == fg_b,
        rank_a,
        rank_b,
        finitely_generated_a: fg_a,
        finitely_generated_b: fg_b,
    })
}
