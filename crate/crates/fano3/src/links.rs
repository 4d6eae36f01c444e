//! Degree bookkeeping for Sarkisov links of Type II.
//!
//! A link extracts a divisor from each end Fano and meets in the middle:
//! the anticanonical degree drops by `a_E^3 * E^3` across each extraction
//! (the polarization is pulled back, so the mixed terms vanish), and the
//! flop connecting the two sides changes nothing in codimension 1. A
//! [`LinkRecord`] holds both ends, the midpoint, and optionally the
//! weighted-complete-intersection family realizing the midpoint;
//! [`verify_link`] replays every identity and reports each one separately
//! instead of failing.
//!
//! Extraction data comes from three sources: the `(1, a, r-a)` weighted
//! blowup of a quotient point `1/r(a, r-a, 1)` (discrepancy `1/r`,
//! exceptional cube `r^2 / a(r-a)`), the two weighted blowups of a cA2
//! point `xy + z^3 + t^3` (discrepancy 1, exceptional cube `3/2`, weights
//! `(2,1,1,1)` or `(1,2,1,1)`, and nothing else), or an opaque degree drop
//! solved from the ledger equation when no blowup data is on record.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::Family;
use crate::rat::{rint, Rat};
use crate::rr::{anticanonical_cube, FanoNumerics, QuotientSingularity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkError {
    #[error("no divisorial contraction of a cA2 point has weights {weights:?}; only (2,1,1,1) and (1,2,1,1) occur")]
    UnsupportedBlowupWeights { weights: Vec<u32> },
    #[error("extraction data must have positive discrepancy and exceptional cube (got a_E = {discrepancy}, E^3 = {exc_cube})")]
    InvalidExtraction { discrepancy: Rat, exc_cube: Rat },
    #[error("an inferred degree drop must be positive (got {drop})")]
    InvalidDrop { drop: Rat },
    #[error("canonical threshold is undefined: every multiplicity is zero")]
    ThresholdUndefined,
    #[error("mobile system data needs at least one (discrepancy, multiplicity) pair")]
    EmptyMobileSystem,
    #[error("discrepancies must be positive and multiplicities nonnegative (pair {index}: a = {a}, m = {m})")]
    BadPair { index: usize, a: Rat, m: Rat },
}

/// How an extraction's degree drop is known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DropData {
    /// Discrepancy and exceptional cube of an actual weighted blowup;
    /// the drop is `a_E^3 * E^3`.
    Extraction { discrepancy: Rat, exc_cube: Rat },
    /// An opaque `a_E^3 * E^3` value solved from the ledger equation.
    Inferred { drop: Rat },
}

/// A divisorial extraction as ledger data: a label for the center, the
/// drop data, and the blowup weights when known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionData {
    pub label: String,
    pub data: DropData,
    pub weights: Option<Vec<u32>>,
}

impl ExtractionData {
    pub fn new(
        label: impl Into<String>,
        discrepancy: Rat,
        exc_cube: Rat,
        weights: Option<Vec<u32>>,
    ) -> Result<Self, LinkError> {
        if !discrepancy.is_positive() || !exc_cube.is_positive() {
            return Err(LinkError::InvalidExtraction {
                discrepancy,
                exc_cube,
            });
        }
        Ok(ExtractionData {
            label: label.into(),
            data: DropData::Extraction {
                discrepancy,
                exc_cube,
            },
            weights,
        })
    }

    /// An extraction known only through its degree drop.
    pub fn inferred(label: impl Into<String>, drop: Rat) -> Result<Self, LinkError> {
        if !drop.is_positive() {
            return Err(LinkError::InvalidDrop { drop });
        }
        Ok(ExtractionData {
            label: label.into(),
            data: DropData::Inferred { drop },
            weights: None,
        })
    }

    /// The unique divisorial contraction centered at a terminal quotient
    /// point `1/r(a, r-a, 1)`: the weighted blowup with weights
    /// `(1, a, r-a)`, discrepancy `1/r` and `E^3 = r^2 / a(r-a)`.
    pub fn kawamata_blowup(q: &QuotientSingularity) -> Self {
        let r = i64::from(q.index());
        let a = i64::from(q.weight());
        ExtractionData {
            label: format!("(1,{},{}) blowup of {}", a, r - a, q),
            data: DropData::Extraction {
                discrepancy: Rat::new(1, r),
                exc_cube: Rat::new(r * r, a * (r - a)),
            },
            weights: Some(vec![1, q.weight(), q.index() - q.weight()]),
        }
    }

    /// One of the two divisorial contractions of the cA2 point
    /// `xy + z^3 + t^3 = 0`: the weighted blowup with the given weights,
    /// discrepancy 1 and `E^3 = 3/2`. Any other weight vector is rejected;
    /// no other extraction from this point exists.
    pub fn ca2_blowup(weights: [u32; 4]) -> Result<Self, LinkError> {
        match weights {
            [2, 1, 1, 1] | [1, 2, 1, 1] => Ok(ExtractionData {
                label: format!(
                    "({},{},{},{}) blowup of the cA2 point",
                    weights[0], weights[1], weights[2], weights[3]
                ),
                data: DropData::Extraction {
                    discrepancy: rint(1),
                    exc_cube: Rat::new(3, 2),
                },
                weights: Some(weights.to_vec()),
            }),
            _ => Err(LinkError::UnsupportedBlowupWeights {
                weights: weights.to_vec(),
            }),
        }
    }

    pub fn discrepancy(&self) -> Option<&Rat> {
        match &self.data {
            DropData::Extraction { discrepancy, .. } => Some(discrepancy),
            DropData::Inferred { .. } => None,
        }
    }

    pub fn exc_cube(&self) -> Option<&Rat> {
        match &self.data {
            DropData::Extraction { exc_cube, .. } => Some(exc_cube),
            DropData::Inferred { .. } => None,
        }
    }

    /// `a_E^3 * E^3`, the anticanonical degree lost across this extraction.
    pub fn degree_drop(&self) -> Rat {
        match &self.data {
            DropData::Extraction {
                discrepancy,
                exc_cube,
            } => discrepancy.cube() * exc_cube,
            DropData::Inferred { drop } => drop.clone(),
        }
    }

    pub fn is_inferred(&self) -> bool {
        matches!(self.data, DropData::Inferred { .. })
    }
}

impl fmt::Display for ExtractionData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.data {
            DropData::Extraction {
                discrepancy,
                exc_cube,
            } => write!(
                f,
                "{} (a_E = {}, E^3 = {})",
                self.label, discrepancy, exc_cube
            ),
            DropData::Inferred { drop } => {
                write!(f, "{} (inferred drop {})", self.label, drop)
            }
        }
    }
}

/// `B^3 = A^3 - a_E^3 * E^3`. A nonpositive result is meaningful: the
/// link cannot continue through this extraction.
pub fn anticanonical_after_extraction(a_cube: &Rat, e: &ExtractionData) -> Rat {
    a_cube - e.degree_drop()
}

/// One end of a link: the Fano and the extraction taken from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkEnd {
    pub numerics: FanoNumerics,
    pub extraction: ExtractionData,
}

/// A Type II link: two ends and the midpoint they share. The single
/// midpoint field is the flop-invariance statement: both sides must reach
/// the same anticanonical model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkRecord {
    pub label: String,
    pub left: LinkEnd,
    pub right: LinkEnd,
    pub midpoint: FanoNumerics,
    pub midpoint_family: Option<Family>,
}

/// Outcome of one consistency check inside [`verify_link`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The full report; failures are entries, never errors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinkReport {
    pub label: String,
    pub checks: Vec<LinkCheck>,
}

impl LinkReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(name: &str, passed: bool, detail: String) -> LinkCheck {
    LinkCheck {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Replays every ledger identity of a link record:
///
/// 1. left end cube minus left drop equals the midpoint cube;
/// 2. likewise on the right;
/// 3. the midpoint numerics satisfy the defining relation
///    `(-K)^3 = 2g - 2 + sum a(r-a)/r`;
/// 4. when a midpoint family is on record, its anticanonical cube and its
///    Hilbert series to depth 30 match the midpoint numerics;
/// 5. the two sides land on the same midpoint degree (flop invariance).
pub fn verify_link(record: &LinkRecord) -> LinkReport {
    let mut checks = Vec::new();

    let left_cube =
        anticanonical_after_extraction(record.left.numerics.kcube(), &record.left.extraction);
    checks.push(check(
        "left degree drop",
        &left_cube == record.midpoint.kcube(),
        format!(
            "{} - {} = {} (midpoint {})",
            record.left.numerics.kcube(),
            record.left.extraction.degree_drop(),
            left_cube,
            record.midpoint.kcube()
        ),
    ));

    let right_cube =
        anticanonical_after_extraction(record.right.numerics.kcube(), &record.right.extraction);
    checks.push(check(
        "right degree drop",
        &right_cube == record.midpoint.kcube(),
        format!(
            "{} - {} = {} (midpoint {})",
            record.right.numerics.kcube(),
            record.right.extraction.degree_drop(),
            right_cube,
            record.midpoint.kcube()
        ),
    ));

    let relation = anticanonical_cube(record.midpoint.genus(), record.midpoint.basket());
    checks.push(check(
        "midpoint defining relation",
        &relation == record.midpoint.kcube(),
        format!(
            "2g - 2 + basket sum = {} (stated {})",
            relation,
            record.midpoint.kcube()
        ),
    ));

    if let Some(family) = &record.midpoint_family {
        match family.anticanonical_cube() {
            Ok(cube) => checks.push(check(
                "midpoint family degree",
                &cube == record.midpoint.kcube(),
                format!("family {} has (-K)^3 = {}", family, cube),
            )),
            Err(e) => checks.push(check(
                "midpoint family degree",
                false,
                format!("family {family}: {e}"),
            )),
        }
        match family.hilbert_series(30) {
            Ok(series) => {
                let rr = record.midpoint.hilbert_sequence(30);
                checks.push(check(
                    "midpoint family series",
                    series.matches_rationals(&rr.values),
                    "family series vs Riemann-Roch sequence to depth 30".to_string(),
                ));
            }
            Err(e) => checks.push(check(
                "midpoint family series",
                false,
                format!("family {family}: {e}"),
            )),
        }
    }

    checks.push(check(
        "flop invariance",
        left_cube == right_cube,
        format!("left reaches {left_cube}, right reaches {right_cube}"),
    ));

    LinkReport {
        label: record.label.clone(),
        checks,
    }
}

/// The degree data of a mobile system `H = nA` together with the
/// (discrepancy, multiplicity) pairs of a resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobileSystemData {
    n: u64,
    pairs: Vec<(Rat, Rat)>,
}

impl MobileSystemData {
    pub fn new(n: u64, pairs: Vec<(Rat, Rat)>) -> Result<Self, LinkError> {
        if pairs.is_empty() {
            return Err(LinkError::EmptyMobileSystem);
        }
        for (index, (a, m)) in pairs.iter().enumerate() {
            if !a.is_positive() || m.is_negative() {
                return Err(LinkError::BadPair {
                    index,
                    a: a.clone(),
                    m: m.clone(),
                });
            }
        }
        Ok(MobileSystemData { n, pairs })
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn pairs(&self) -> &[(Rat, Rat)] {
        &self.pairs
    }

    /// `c = min over m_i > 0 of a_i / m_i`, the largest multiple of the
    /// system that can be added to the canonical class while staying
    /// canonical.
    pub fn canonical_threshold(&self) -> Result<Rat, LinkError> {
        self.pairs
            .iter()
            .filter(|(_, m)| m.is_positive())
            .map(|(a, m)| a / m)
            .min()
            .ok_or(LinkError::ThresholdUndefined)
    }

    /// Whether pair `i` is a weak maximal singularity: `m_i >= n a_i`.
    pub fn is_weak_maximal(&self, i: usize) -> bool {
        let (a, m) = &self.pairs[i];
        m >= &(Rat::from(num_bigint::BigInt::from(self.n)) * a)
    }
}
