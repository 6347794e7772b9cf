//! Certificate documents: a versioned envelope over the two refuter
//! payloads, canonical JSON serialization, and re-validation that
//! recomputes every inequality from raw parameters instead of trusting
//! stored verdicts.
//!
//! Canonical form: object keys sorted, exact integers as decimal strings,
//! rationals as `"p/q"`, pretty-printed with a trailing newline. Identical
//! documents serialize to identical bytes.

use serde::{Deserialize, Serialize};

use crate::error::{CoarseError, Result};
use crate::fingen::{CertificateValidation, FinGenCertificate};
use crate::locfin::LocFinCertificate;

pub const SCHEMA_VERSION: u32 = 1;

/// The refuter payload, tagged by construction case.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum CertificatePayload {
    Fingen(FinGenCertificate),
    Locfin(LocFinCertificate),
}

/// A versioned certificate file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema: u32,
    #[serde(flatten)]
    pub payload: CertificatePayload,
}

impl CertificateDocument {
    pub fn fingen(cert: FinGenCertificate) -> Self {
        CertificateDocument {
            schema: SCHEMA_VERSION,
            payload: CertificatePayload::Fingen(cert),
        }
    }

    pub fn locfin(cert: LocFinCertificate) -> Self {
        CertificateDocument {
            schema: SCHEMA_VERSION,
            payload: CertificatePayload::Locfin(cert),
        }
    }

    /// Recomputes the payload's inequalities from its raw parameters.
    pub fn revalidate(&self) -> CertificateValidation {
        match &self.payload {
            CertificatePayload::Fingen(c) => c.revalidate(),
            CertificatePayload::Locfin(c) => c.revalidate(),
        }
    }
}

/// Serializes with sorted keys and a trailing newline; byte-deterministic.
pub fn serialize_certificate(doc: &CertificateDocument) -> Result<String> {
    // Going through Value sorts object keys (the map is ordered).
    let value = serde_json::to_value(doc)
        .map_err(|e| CoarseError::Schema(format!("serialization failed: {e}")))?;
    let mut text = serde_json::to_string_pretty(&value)
        .map_err(|e| CoarseError::Schema(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Parses and checks the schema version.
pub fn parse_certificate(text: &str) -> Result<CertificateDocument> {
    let doc: CertificateDocument = serde_json::from_str(text)
        .map_err(|e| CoarseError::Schema(format!("parse failed: {e}")))?;
    if doc.schema != SCHEMA_VERSION {
        return Err(CoarseError::Schema(format!(
            "unsupported schema version {} (expected {SCHEMA_VERSION})",
            doc.schema
        )));
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adfamily::BinarySeed;
    use crate::fingen::refute_fingen_pair;
    use crate::locfin::refute_locfin_pair;

    fn seed(s: &str) -> BinarySeed {
        BinarySeed::parse(s).unwrap()
    }

    #[test]
    fn fingen_round_trip_is_identity() {
        let cert = refute_fingen_pair(&seed(":0"), &seed(":1"), 1, 3).unwrap();
        let doc = CertificateDocument::fingen(cert);
        let text = serialize_certificate(&doc).unwrap();
        let back = parse_certificate(&text).unwrap();
        assert_eq!(doc, back);
        // determinism: serializing again gives identical bytes
        assert_eq!(text, serialize_certificate(&back).unwrap());
        assert!(back.revalidate().valid);
    }

    #[test]
    fn locfin_round_trip_preserves_big_integers() {
        let cert = refute_locfin_pair(&seed(":0"), &seed(":1"), 1, 21, None).unwrap();
        let doc = CertificateDocument::locfin(cert);
        let text = serialize_certificate(&doc).unwrap();
        // the deep block count 2^63 must survive exactly
        assert!(text.contains("9223372036854775808"));
        let back = parse_certificate(&text).unwrap();
        assert_eq!(doc, back);
        assert!(back.revalidate().valid);
    }

    #[test]
    fn huge_block_counts_survive_round_trip() {
        use num_bigint::BigUint;
        use num_traits::One;
        // the pair below puts a level-10 block on the deep side, whose
        // count is 2^1023
        let cert = refute_locfin_pair(&seed(":1"), &seed("0:1"), 1, 55, None).unwrap();
        let doc = CertificateDocument::locfin(cert);
        let text = serialize_certificate(&doc).unwrap();
        let big = (BigUint::one() << 1023usize).to_string();
        assert!(
            text.contains(&big),
            "2^1023 must appear as a decimal string"
        );
        let back = parse_certificate(&text).unwrap();
        assert_eq!(doc, back);
        assert!(back.revalidate().valid);
    }

    #[test]
    fn tampering_is_caught_after_round_trip() {
        let cert = refute_fingen_pair(&seed(":0"), &seed("0:1"), 1, 2).unwrap();
        let doc = CertificateDocument::fingen(cert);
        let text = serialize_certificate(&doc).unwrap();
        let tampered = text.replace("\"capacity\": \"25\"", "\"capacity\": \"9000\"");
        let back = parse_certificate(&tampered).unwrap();
        assert!(!back.revalidate().valid);
    }

    #[test]
    fn wrong_schema_version_is_rejected() {
        let cert = refute_fingen_pair(&seed(":0"), &seed(":1"), 1, 3).unwrap();
        let doc = CertificateDocument::fingen(cert);
        let text = serialize_certificate(&doc).unwrap();
        let bumped = text.replace("\"schema\": 1", "\"schema\": 99");
        assert!(parse_certificate(&bumped).is_err());
    }
}
