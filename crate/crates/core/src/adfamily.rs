//! Almost disjoint families of infinite subsets of the naturals, realized as
//! branches of the binary tree.
//!
//! An infinite binary word `w` names the set of codes of its nonempty finite
//! prefixes. Two distinct words agree on exactly their common prefix, so any
//! two branch sets intersect in exactly `lcp` many codes: the family is
//! almost disjoint, with intersection sizes that are exactly computable.
//!
//! Only eventually periodic words can be named by a finite configuration, so
//! a seed is a finite prefix plus a nonempty period, normalized so that
//! distinct seeds denote distinct words.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoarseError, Result};

/// Longest string the coder accepts; keeps codes inside `u64`.
pub const MAX_CODE_LEN: usize = 62;

/// `code(s) = 2^|s| + value(s) - 1`: a bijection from nonempty binary strings
/// onto the positive naturals. Length-n strings fill `[2^n - 1, 2^(n+1) - 2]`.
pub fn encode_string(s: &str) -> Result<u64> {
    let bits = parse_bits(s)?;
    if bits.is_empty() {
        return Err(CoarseError::InvalidSeed("empty string has no code".into()));
    }
    encode_bits(&bits)
}

fn encode_bits(bits: &[bool]) -> Result<u64> {
    if bits.len() > MAX_CODE_LEN {
        return Err(CoarseError::ParameterViolation(format!(
            "string length {} exceeds the coding bound {}",
            bits.len(),
            MAX_CODE_LEN
        )));
    }
    let mut value = 0u64;
    for &b in bits {
        value = (value << 1) | u64::from(b);
    }
    Ok((1u64 << bits.len()) + value - 1)
}

/// Inverts [`encode_string`]: the bits of the unique string with this code.
pub fn decode_code(code: u64) -> Result<Vec<bool>> {
    if code == 0 {
        return Err(CoarseError::ParameterViolation(
            "0 is not the code of any nonempty string".into(),
        ));
    }
    let n = 63 - (code + 1).leading_zeros() as usize;
    let value = code + 1 - (1u64 << n);
    Ok((0..n).rev().map(|i| (value >> i) & 1 == 1).collect())
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CoarseError::InvalidSeed(format!(
                "unexpected character {other:?}; seeds use only 0 and 1"
            ))),
        })
        .collect()
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A finite name for one branch of the binary tree: the infinite word is the
/// prefix followed by the period repeated forever. Normalized on
/// construction (minimal period, no prefix tail that the period absorbs), so
/// equality of seeds is equality of the named words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinarySeed {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl BinarySeed {
    pub fn new(prefix: &str, period: &str) -> Result<Self> {
        let prefix = parse_bits(prefix)?;
        let period = parse_bits(period)?;
        if period.is_empty() {
            return Err(CoarseError::InvalidSeed("period must be nonempty".into()));
        }
        Ok(Self::normalized(prefix, period))
    }

    /// Parses the CLI syntax `prefix:period`, e.g. `01:1` or `:0`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (prefix, period) = spec.split_once(':').ok_or_else(|| {
            CoarseError::InvalidSeed(format!("expected prefix:period, got {spec:?}"))
        })?;
        Self::new(prefix, period)
    }

    fn normalized(mut prefix: Vec<bool>, mut period: Vec<bool>) -> Self {
        // Minimal period: shrink q^k to q.
        let n = period.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (0..n).all(|i| period[i] == period[i % d]) {
                period.truncate(d);
                break;
            }
        }
        // Absorb a prefix tail that the rotated period reproduces.
        while let Some(&last) = prefix.last() {
            if last == *period.last().expect("period nonempty") {
                prefix.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        BinarySeed { prefix, period }
    }

    pub fn prefix_str(&self) -> String {
        bits_to_string(&self.prefix)
    }

    pub fn period_str(&self) -> String {
        bits_to_string(&self.period)
    }

    /// Bit `i` (0-based) of the named infinite word.
    pub fn word_bit(&self, i: usize) -> bool {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    /// Length of the longest common prefix of the two named words. For
    /// distinct seeds this equals the exact intersection size of the two
    /// branch sets at every truncation that covers it.
    pub fn lcp_bound(&self, other: &BinarySeed) -> Result<u64> {
        if self == other {
            return Err(CoarseError::IdenticalSeeds);
        }
        // Two eventually periodic words coincide iff they agree this far.
        let horizon = self.prefix.len().max(other.prefix.len())
            + lcm(self.period.len(), other.period.len())
            + 1;
        for i in 0..horizon {
            if self.word_bit(i) != other.word_bit(i) {
                return Ok(i as u64);
            }
        }
        Err(CoarseError::IdenticalSeeds)
    }

    /// Codes of the first `n_max` nonempty prefixes of the word, ascending.
    pub fn members(&self, n_max: u32) -> Result<Vec<u64>> {
        if n_max == 0 {
            return Err(CoarseError::ParameterViolation("n_max must be >= 1".into()));
        }
        if n_max as usize > MAX_CODE_LEN {
            return Err(CoarseError::ParameterViolation(format!(
                "n_max {n_max} exceeds the coding bound {MAX_CODE_LEN}"
            )));
        }
        let mut out = Vec::with_capacity(n_max as usize);
        let mut value = 0u64;
        for n in 1..=n_max as usize {
            value = (value << 1) | u64::from(self.word_bit(n - 1));
            out.push((1u64 << n) + value - 1);
        }
        Ok(out)
    }

    /// Whether `code` names a prefix of this seed's word.
    pub fn contains_code(&self, code: u64) -> bool {
        match decode_code(code) {
            Ok(bits) => bits.iter().enumerate().all(|(i, &b)| self.word_bit(i) == b),
            Err(_) => false,
        }
    }

    /// Codes of the named word's prefixes that are also shared with `other`,
    /// i.e. `max(W ∩ W')`; `None` when the words differ from the first bit.
    pub fn shared_code_max(&self, other: &BinarySeed) -> Result<Option<u64>> {
        let lcp = self.lcp_bound(other)?;
        if lcp == 0 {
            return Ok(None);
        }
        let shared: Vec<bool> = (0..lcp as usize).map(|i| self.word_bit(i)).collect();
        Ok(Some(encode_bits(&shared)?))
    }
}

impl fmt::Display for BinarySeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.prefix_str(), self.period_str())
    }
}

impl fmt::Debug for BinarySeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinarySeed({self})")
    }
}

impl Serialize for BinarySeed {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BinarySeed", 2)?;
        st.serialize_field("prefix", &self.prefix_str())?;
        st.serialize_field("period", &self.period_str())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for BinarySeed {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            prefix: String,
            period: String,
        }
        let raw = Raw::deserialize(d)?;
        BinarySeed::new(&raw.prefix, &raw.period).map_err(serde::de::Error::custom)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One member W of the family, with its finite truncations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedBranchSet {
    seed: BinarySeed,
}

impl CodedBranchSet {
    pub fn new(seed: BinarySeed) -> Self {
        CodedBranchSet { seed }
    }

    pub fn seed(&self) -> &BinarySeed {
        &self.seed
    }

    /// `{code(w↾n) : 1 <= n <= n_max}`, ascending.
    pub fn members(&self, n_max: u32) -> Result<Vec<u64>> {
        self.seed.members(n_max)
    }

    pub fn contains(&self, code: u64) -> bool {
        self.seed.contains_code(code)
    }
}

/// Computes the codes of the prefixes the two words share, then the exact
/// intersection guarantee: `|W1 ∩ W2| = lcp` for the full branch sets.
pub fn lcp_bound(a: &BinarySeed, b: &BinarySeed) -> Result<u64> {
    a.lcp_bound(b)
}

/// First nonempty prefixes of the word of the seed's branch as a set.
pub fn branch_members(seed: &BinarySeed, n_max: u32) -> Result<Vec<u64>> {
    seed.members(n_max)
}

/// A deterministic list of `count` pairwise distinct normalized seeds,
/// enumerated by prefix length, then prefix bits, then period bit.
pub fn canonical_family(count: usize) -> Vec<BinarySeed> {
    let mut out: Vec<BinarySeed> = Vec::new();
    let mut prefix_len = 0usize;
    while out.len() < count && prefix_len <= MAX_CODE_LEN {
        for prefix_bits in 0..(1u64 << prefix_len) {
            let prefix: Vec<bool> = (0..prefix_len)
                .rev()
                .map(|i| (prefix_bits >> i) & 1 == 1)
                .collect();
            for period in [false, true] {
                let seed = BinarySeed::normalized(prefix.clone(), vec![period]);
                if !out.contains(&seed) {
                    out.push(seed);
                    if out.len() == count {
                        return out;
                    }
                }
            }
        }
        prefix_len += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn encode_examples() {
        assert_eq!(encode_string("0").unwrap(), 1);
        assert_eq!(encode_string("1").unwrap(), 2);
        assert_eq!(encode_string("111").unwrap(), 14);
        assert!(encode_string("").is_err());
    }

    #[test]
    fn encode_fills_length_bands_injectively() {
        // Codes of length-n strings fill [2^n - 1, 2^(n+1) - 2]; all distinct.
        let mut seen = HashSet::new();
        for n in 1..=16usize {
            let lo = (1u64 << n) - 1;
            let hi = (1u64 << (n + 1)) - 2;
            for v in 0..(1u64 << n) {
                let bits: Vec<bool> = (0..n).rev().map(|i| (v >> i) & 1 == 1).collect();
                let code = encode_bits(&bits).unwrap();
                assert!((lo..=hi).contains(&code));
                assert!(seen.insert(code), "duplicate code {code}");
                assert_eq!(decode_code(code).unwrap(), bits);
            }
        }
    }

    #[test]
    fn branch_members_examples() {
        let zeros = BinarySeed::new("", "0").unwrap();
        assert_eq!(zeros.members(3).unwrap(), vec![1, 3, 7]);
        let ones = BinarySeed::new("", "1").unwrap();
        assert_eq!(ones.members(3).unwrap(), vec![2, 6, 14]);
        let any = BinarySeed::new("01", "10").unwrap();
        let first = any.members(1).unwrap();
        assert_eq!(first.len(), 1);
        assert!(first[0] == 1 || first[0] == 2);
    }

    #[test]
    fn normalization_absorbs_and_minimizes() {
        // 0(0)^ω is the all-zeros word.
        let a = BinarySeed::new("0", "0").unwrap();
        let b = BinarySeed::new("", "00").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), ":0");
        // 01(1)^ω = 0(1)^ω.
        let c = BinarySeed::new("01", "1").unwrap();
        let d = BinarySeed::new("0", "1").unwrap();
        assert_eq!(c, d);
        // 10(10)^ω = (10)^ω.
        let e = BinarySeed::new("10", "10").unwrap();
        let f = BinarySeed::new("", "10").unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn lcp_examples() {
        let zeros = BinarySeed::new("", "0").unwrap();
        let ones = BinarySeed::new("", "1").unwrap();
        assert_eq!(zeros.lcp_bound(&ones).unwrap(), 0);
        // 01^ω vs 00^ω agree on the first bit only.
        let a = BinarySeed::new("0", "1").unwrap();
        let b = BinarySeed::new("0", "0").unwrap();
        assert_eq!(a.lcp_bound(&b).unwrap(), 1);
        assert!(zeros.lcp_bound(&zeros).is_err());
    }

    #[test]
    fn intersections_match_lcp_exactly() {
        let a = BinarySeed::new("10110", "0").unwrap();
        let b = BinarySeed::new("10111", "0").unwrap();
        let lcp = a.lcp_bound(&b).unwrap();
        assert_eq!(lcp, 4);
        for n_max in [4u32, 5, 10, 20] {
            let ma: HashSet<u64> = a.members(n_max).unwrap().into_iter().collect();
            let mb: HashSet<u64> = b.members(n_max).unwrap().into_iter().collect();
            let inter = ma.intersection(&mb).count() as u64;
            assert_eq!(inter, lcp.min(n_max as u64));
        }
    }

    #[test]
    fn contains_code_matches_members() {
        let seed = BinarySeed::new("011", "10").unwrap();
        let members = seed.members(12).unwrap();
        for code in 1..=(1u64 << 13) {
            let expected = members.contains(&code) || {
                // codes longer than 12 bits are beyond the sampled members
                decode_code(code).is_ok_and(|bits| {
                    bits.len() > 12 && bits.iter().enumerate().all(|(i, &b)| seed.word_bit(i) == b)
                })
            };
            assert_eq!(seed.contains_code(code), expected);
        }
    }

    #[test]
    fn shared_code_max_is_code_of_shared_prefix() {
        let a = BinarySeed::new("0", "1").unwrap(); // 0111...
        let b = BinarySeed::new("0", "0").unwrap(); // 0000...
        assert_eq!(a.shared_code_max(&b).unwrap(), Some(1)); // code("0") = 1
        let zeros = BinarySeed::new("", "0").unwrap();
        let ones = BinarySeed::new("", "1").unwrap();
        assert_eq!(zeros.shared_code_max(&ones).unwrap(), None);
    }

    #[test]
    fn branch_set_view_matches_seed_queries() {
        let seed = BinarySeed::new("0", "1").unwrap();
        let branch = CodedBranchSet::new(seed.clone());
        assert_eq!(branch.members(4).unwrap(), seed.members(4).unwrap());
        for code in branch.members(6).unwrap() {
            assert!(branch.contains(code));
        }
        assert!(!branch.contains(3)); // "00" is not a prefix of 0111...
    }

    #[test]
    fn canonical_family_distinct_and_deterministic() {
        let fam = canonical_family(16);
        assert_eq!(fam.len(), 16);
        let set: HashSet<_> = fam.iter().collect();
        assert_eq!(set.len(), 16);
        // Determinism and pairwise distinct words.
        let again = canonical_family(16);
        assert_eq!(fam, again);
        for i in 0..fam.len() {
            for j in (i + 1)..fam.len() {
                assert!(fam[i].lcp_bound(&fam[j]).is_ok());
            }
        }
    }
}
