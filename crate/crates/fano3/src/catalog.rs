//! The built-in regression corpus and the catalog file format.
//!
//! A [`Catalog`] is a list of identified entries: families, Fano numerics,
//! extractions, link records and exclusion cases, each tagged with its
//! provenance. The built-in catalog ([`builtin_catalog`]) holds every
//! fixture the toolkit is pinned against: the singular quartic and its two
//! links to `Y34` through `Z5`, the two exercise links `X7 -> Y67` and
//! `X15 -> Y1415`, the three involution midpoints `Z10`, `Z12`, `Z8`, both
//! cA2 blowups, and the complete set of curve and point exclusion cases on
//! `X4` and `Y34`.
//!
//! Catalogs round-trip through a JSON document with top-level keys
//! `schema_version` and `entries`; rationals are serialized as `p/q`
//! strings, weights and degrees as integer arrays. Loading validates
//! everything it can: entry ids are unique, non-derived provenance carries
//! a citation, numerics satisfy the defining relation, and links resolve
//! their references (a dangling reference is a load error naming the
//! entry).

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exclusion::{
    build_l2_expression, component_bound, curve_degree_bound, discriminant_infeasibility,
    fixed_curve_point_exclusion, max_fixed_multiplicity, mobile_point_exclusion,
    quotient_center_rule, CenterKind, EqualityLocus, FixedCurveDatum, Interval, MultiQuadratic,
    QuadraticForm, SurfaceCurveCase, TwoCurveGerm,
};
use crate::families::Family;
use crate::links::{verify_link, ExtractionData, LinkEnd, LinkRecord};
use crate::rat::{rat, rint, Rat};
use crate::rr::{Basket, FanoNumerics, QuotientSingularity};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("catalog is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown schema_version {found} (this build reads version {SCHEMA_VERSION})")]
    UnknownSchemaVersion { found: u32 },
    #[error("duplicate entry id {id:?}")]
    DuplicateId { id: String },
    #[error("entry {id:?} has provenance {kind:?} but no citation")]
    MissingCitation { id: String, kind: ProvenanceKind },
    #[error("entry {id:?} references {missing:?}, which is not in the catalog")]
    DanglingReference { id: String, missing: String },
    #[error("entry {id:?} references {referenced:?} expecting a {expected} entry")]
    WrongKind {
        id: String,
        referenced: String,
        expected: &'static str,
    },
    #[error("entry {id:?} is invalid: {reason}")]
    InvalidEntry { id: String, reason: String },
    #[error("no catalog entry with id {id:?}")]
    NotFound { id: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProvenanceKind {
    /// Stated in the source text; the citation quotes the anchor.
    Paper,
    /// Computed here from stated data; the citation says how.
    Derived,
    /// Solved from a consistency equation with no independent source.
    Inferred,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: ProvenanceKind,
    pub citation: String,
}

impl Provenance {
    pub fn paper(citation: &str) -> Self {
        Provenance {
            kind: ProvenanceKind::Paper,
            citation: citation.to_string(),
        }
    }

    pub fn derived(citation: &str) -> Self {
        Provenance {
            kind: ProvenanceKind::Derived,
            citation: citation.to_string(),
        }
    }

    pub fn inferred(citation: &str) -> Self {
        Provenance {
            kind: ProvenanceKind::Inferred,
            citation: citation.to_string(),
        }
    }
}

/// Stored numerics: the defining relation is revalidated on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericsFixture {
    pub genus: i64,
    pub kcube: Rat,
    pub basket: Vec<(u32, u32)>,
    /// Paired family fixture, when one realizes these numerics.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFixture {
    pub weights: Vec<u32>,
    pub degrees: Vec<u32>,
}

/// A link stored by reference; ends and midpoint name numerics entries,
/// extractions name extraction entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkFixture {
    pub left_numerics: String,
    pub left_extraction: String,
    pub right_numerics: String,
    pub right_extraction: String,
    pub midpoint_numerics: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub midpoint_family: Option<String>,
}

/// One exclusion case together with the values its replay must reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ExclusionFixture {
    /// Fixed-curve multiplicity bound on a test surface.
    FixedCurve {
        surface: SurfaceCurveCase,
        /// Pullback coefficients of the curve on the resolution, when the
        /// self-intersection was corrected through the singular point.
        #[serde(skip_serializing_if = "Option::is_none", default)]
        pullback_coefficients: Option<Vec<Rat>>,
        expected_quadratic: QuadraticForm,
        /// Exact bound when rational; irrational bounds are certified
        /// against 1 instead.
        #[serde(skip_serializing_if = "Option::is_none", default)]
        expected_gamma_max: Option<Rat>,
    },
    /// Pairing bound against a second component of the base curve.
    ComponentPairing {
        label: String,
        deg_o: Rat,
        pairing_lower: Rat,
        expected_bound: Rat,
    },
    /// Raw degree bound from two general members and a hyperplane section.
    CurveDegree {
        label: String,
        a_cube: Rat,
        step: Rat,
        expected_bound: Rat,
    },
    /// Point on no base curve: mobile restriction against the germ
    /// threshold.
    MobilePoint {
        label: String,
        value: Rat,
        germ: TwoCurveGerm,
        expected_excluded: bool,
    },
    /// Point on a fixed curve of the restriction.
    FixedCurvePoint {
        label: String,
        asq: Rat,
        a_dot_b: Rat,
        bsq: Rat,
        expected_certificate: QuadraticForm,
        expected_equality: Vec<Rat>,
    },
    /// Point on a half-degree curve: the two-parameter discriminant
    /// certificate.
    PointDiscriminant(Box<PointDiscriminantCase>),
    /// Categorical rule for curve centers through quotient points.
    QuotientCenter {
        label: String,
        kind: CenterKind,
        through_quotient_point: bool,
        expected_excluded: bool,
    },
}

/// Data and expectations of a two-parameter discriminant exclusion: the
/// intersection package of the double projection, the germ-threshold
/// polynomial, and the exact values the replay must reproduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDiscriminantCase {
    pub label: String,
    pub asq: Rat,
    pub curves: Vec<FixedCurveDatum>,
    pub pairings: Vec<Vec<Rat>>,
    pub threshold: MultiQuadratic,
    pub alpha_min: Rat,
    pub expected_l2: MultiQuadratic,
    pub expected_lead: Rat,
    pub expected_linear: QuadraticForm,
    pub expected_constant: QuadraticForm,
    pub expected_alpha_star: Rat,
    pub expected_max_quarter_disc: Rat,
}

impl ExclusionFixture {
    pub fn label(&self) -> &str {
        match self {
            ExclusionFixture::FixedCurve { surface, .. } => &surface.label,
            ExclusionFixture::PointDiscriminant(case) => &case.label,
            ExclusionFixture::ComponentPairing { label, .. }
            | ExclusionFixture::CurveDegree { label, .. }
            | ExclusionFixture::MobilePoint { label, .. }
            | ExclusionFixture::FixedCurvePoint { label, .. }
            | ExclusionFixture::QuotientCenter { label, .. } => label,
        }
    }

    /// Whether this is a curve-center or point-center case.
    pub fn center_kind(&self) -> CenterKind {
        match self {
            ExclusionFixture::MobilePoint { .. }
            | ExclusionFixture::FixedCurvePoint { .. }
            | ExclusionFixture::PointDiscriminant(_) => CenterKind::Point,
            ExclusionFixture::QuotientCenter { kind, .. } => *kind,
            _ => CenterKind::Curve,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)] // a catalog holds tens of entries
pub enum Payload {
    Family(FamilyFixture),
    Numerics(NumericsFixture),
    Extraction(ExtractionData),
    Link(LinkFixture),
    ExclusionCase(ExclusionFixture),
}

impl Payload {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Payload::Family(_) => "family",
            Payload::Numerics(_) => "numerics",
            Payload::Extraction(_) => "extraction",
            Payload::Link(_) => "link",
            Payload::ExclusionCase(_) => "exclusion_case",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub provenance: Provenance,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn new(entries: Vec<CatalogEntry>) -> Result<Self, CatalogError> {
        let catalog = Catalog {
            schema_version: SCHEMA_VERSION,
            entries,
        };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn lookup(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    fn get(&self, id: &str) -> Result<&CatalogEntry, CatalogError> {
        self.lookup(id)
            .ok_or_else(|| CatalogError::NotFound { id: id.to_string() })
    }

    pub fn ids_of_kind(&self, kind: &str) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| e.payload.kind_name() == kind)
            .map(|e| e.id.as_str())
            .collect()
    }

    /// The validated family behind a family entry.
    pub fn family(&self, id: &str) -> Result<Family, CatalogError> {
        match &self.get(id)?.payload {
            Payload::Family(f) => {
                Family::from_raw(&f.weights, &f.degrees).map_err(|e| CatalogError::InvalidEntry {
                    id: id.to_string(),
                    reason: e.to_string(),
                })
            }
            other => Err(CatalogError::WrongKind {
                id: id.to_string(),
                referenced: other.kind_name().to_string(),
                expected: "family",
            }),
        }
    }

    /// The validated numerics behind a numerics entry.
    pub fn numerics(&self, id: &str) -> Result<FanoNumerics, CatalogError> {
        match &self.get(id)?.payload {
            Payload::Numerics(n) => resolve_numerics(id, n),
            other => Err(CatalogError::WrongKind {
                id: id.to_string(),
                referenced: other.kind_name().to_string(),
                expected: "numerics",
            }),
        }
    }

    pub fn extraction(&self, id: &str) -> Result<ExtractionData, CatalogError> {
        match &self.get(id)?.payload {
            Payload::Extraction(e) => Ok(e.clone()),
            other => Err(CatalogError::WrongKind {
                id: id.to_string(),
                referenced: other.kind_name().to_string(),
                expected: "extraction",
            }),
        }
    }

    pub fn exclusion_case(&self, id: &str) -> Result<&ExclusionFixture, CatalogError> {
        match &self.get(id)?.payload {
            Payload::ExclusionCase(c) => Ok(c),
            other => Err(CatalogError::WrongKind {
                id: id.to_string(),
                referenced: other.kind_name().to_string(),
                expected: "exclusion_case",
            }),
        }
    }

    /// Builds the full link record behind a link entry, resolving every
    /// reference.
    pub fn resolve_link(&self, id: &str) -> Result<LinkRecord, CatalogError> {
        let fixture = match &self.get(id)?.payload {
            Payload::Link(l) => l.clone(),
            other => {
                return Err(CatalogError::WrongKind {
                    id: id.to_string(),
                    referenced: other.kind_name().to_string(),
                    expected: "link",
                })
            }
        };
        Ok(LinkRecord {
            label: id.to_string(),
            left: LinkEnd {
                numerics: self.numerics(&fixture.left_numerics)?,
                extraction: self.extraction(&fixture.left_extraction)?,
            },
            right: LinkEnd {
                numerics: self.numerics(&fixture.right_numerics)?,
                extraction: self.extraction(&fixture.right_extraction)?,
            },
            midpoint: self.numerics(&fixture.midpoint_numerics)?,
            midpoint_family: fixture
                .midpoint_family
                .as_deref()
                .map(|f| self.family(f))
                .transpose()?,
        })
    }

    /// Every (numerics, family) pair on record.
    pub fn paired_numerics(&self) -> Vec<(String, FanoNumerics, Family)> {
        let mut out = Vec::new();
        for entry in &self.entries {
            if let Payload::Numerics(n) = &entry.payload {
                if let Some(family_id) = &n.family {
                    if let (Ok(numerics), Ok(family)) =
                        (self.numerics(&entry.id), self.family(family_id))
                    {
                        out.push((entry.id.clone(), numerics, family));
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), CatalogError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CatalogError::UnknownSchemaVersion {
                found: self.schema_version,
            });
        }
        let mut seen = BTreeSet::new();
        for entry in &self.entries {
            if !seen.insert(entry.id.as_str()) {
                return Err(CatalogError::DuplicateId {
                    id: entry.id.clone(),
                });
            }
            if entry.provenance.kind != ProvenanceKind::Derived
                && entry.provenance.citation.trim().is_empty()
            {
                return Err(CatalogError::MissingCitation {
                    id: entry.id.clone(),
                    kind: entry.provenance.kind,
                });
            }
        }
        for entry in &self.entries {
            match &entry.payload {
                Payload::Family(f) => {
                    Family::from_raw(&f.weights, &f.degrees).map_err(|e| {
                        CatalogError::InvalidEntry {
                            id: entry.id.clone(),
                            reason: e.to_string(),
                        }
                    })?;
                }
                Payload::Numerics(n) => {
                    resolve_numerics(&entry.id, n)?;
                    if let Some(family_id) = &n.family {
                        self.check_ref(entry, family_id, "family")?;
                    }
                }
                Payload::Extraction(_) => {}
                Payload::Link(l) => {
                    self.check_ref(entry, &l.left_numerics, "numerics")?;
                    self.check_ref(entry, &l.right_numerics, "numerics")?;
                    self.check_ref(entry, &l.midpoint_numerics, "numerics")?;
                    self.check_ref(entry, &l.left_extraction, "extraction")?;
                    self.check_ref(entry, &l.right_extraction, "extraction")?;
                    if let Some(f) = &l.midpoint_family {
                        self.check_ref(entry, f, "family")?;
                    }
                }
                Payload::ExclusionCase(_) => {}
            }
        }
        Ok(())
    }

    fn check_ref(
        &self,
        entry: &CatalogEntry,
        target: &str,
        expected: &'static str,
    ) -> Result<(), CatalogError> {
        match self.lookup(target) {
            None => Err(CatalogError::DanglingReference {
                id: entry.id.clone(),
                missing: target.to_string(),
            }),
            Some(e) if e.payload.kind_name() != expected => Err(CatalogError::WrongKind {
                id: entry.id.clone(),
                referenced: target.to_string(),
                expected,
            }),
            Some(_) => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("catalog serialization cannot fail")
    }
}

fn resolve_numerics(id: &str, n: &NumericsFixture) -> Result<FanoNumerics, CatalogError> {
    let entries = n
        .basket
        .iter()
        .map(|&(r, a)| QuotientSingularity::new(r, a))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CatalogError::InvalidEntry {
            id: id.to_string(),
            reason: e.to_string(),
        })?;
    FanoNumerics::new(n.genus, n.kcube.clone(), Basket::new(entries)).map_err(|e| {
        CatalogError::InvalidEntry {
            id: id.to_string(),
            reason: e.to_string(),
        }
    })
}

pub fn save_catalog(catalog: &Catalog, path: impl AsRef<Path>) -> Result<(), CatalogError> {
    std::fs::write(path, catalog.to_json())?;
    Ok(())
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog, CatalogError> {
    let text = std::fs::read_to_string(path)?;
    load_catalog_str(&text)
}

pub fn load_catalog_str(text: &str) -> Result<Catalog, CatalogError> {
    let catalog: Catalog = serde_json::from_str(text)?;
    catalog.validate()?;
    Ok(catalog)
}

/// One line of a replay or check report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn line(name: impl Into<String>, passed: bool, detail: String) -> CheckLine {
    CheckLine {
        name: name.into(),
        passed,
        detail,
    }
}

/// Replay outcome for one exclusion case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub label: String,
    pub excluded: bool,
    pub lines: Vec<CheckLine>,
}

impl CaseReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {}",
            self.label,
            if self.excluded {
                "excluded"
            } else {
                "no exclusion"
            }
        )?;
        for l in &self.lines {
            writeln!(
                f,
                "  [{}] {}: {}",
                if l.passed { "ok" } else { "FAIL" },
                l.name,
                l.detail
            )?;
        }
        Ok(())
    }
}

/// Replays an exclusion case: runs the engine on the stored inputs and
/// compares every stored expectation.
pub fn replay_exclusion(fixture: &ExclusionFixture) -> CaseReport {
    let mut lines = Vec::new();
    let excluded;
    match fixture {
        ExclusionFixture::FixedCurve {
            surface,
            expected_quadratic,
            expected_gamma_max,
            ..
        } => match max_fixed_multiplicity(surface) {
            Ok(bound) => {
                lines.push(line(
                    "nef quadratic",
                    &bound.quadratic == expected_quadratic,
                    format!("{} (expected {})", bound.quadratic, expected_quadratic),
                ));
                if let Some(expected) = expected_gamma_max {
                    lines.push(line(
                        "gamma_max",
                        bound.gamma_max.as_rational() == Some(expected),
                        format!("{} (expected {})", bound.gamma_max, expected),
                    ));
                }
                let verdict = bound.holds_at_most_one();
                lines.push(line(
                    "gamma_max <= 1",
                    verdict,
                    format!("gamma_max = {}", bound.gamma_max),
                ));
                excluded = verdict && lines.iter().all(|l| l.passed);
            }
            Err(e) => {
                lines.push(line("nef quadratic", false, e.to_string()));
                excluded = false;
            }
        },
        ExclusionFixture::ComponentPairing {
            deg_o,
            pairing_lower,
            expected_bound,
            ..
        } => match (
            component_bound(deg_o, &Rat::zero(), pairing_lower),
            component_bound(deg_o, &Rat::one(), pairing_lower),
        ) {
            (Ok(at0), Ok(at1)) => {
                // the bound is linear in gamma1, so its sup on [0,1] is at an end
                let sup = at0.max(at1);
                lines.push(line(
                    "pairing bound",
                    &sup == expected_bound,
                    format!("sup over gamma1 of the bound = {sup} (expected {expected_bound})"),
                ));
                let verdict = sup <= Rat::one();
                lines.push(line("gamma <= 1", verdict, format!("bound {sup}")));
                excluded = verdict && lines.iter().all(|l| l.passed);
            }
            (Err(e), _) | (_, Err(e)) => {
                lines.push(line("pairing bound", false, e.to_string()));
                excluded = false;
            }
        },
        ExclusionFixture::CurveDegree {
            a_cube,
            step,
            expected_bound,
            ..
        } => {
            let bound = curve_degree_bound(a_cube, step);
            lines.push(line(
                "degree bound",
                &bound == expected_bound,
                format!(
                    "largest degree below {a_cube} in steps of {step} is {bound} (expected {expected_bound})"
                ),
            ));
            excluded = lines.iter().all(|l| l.passed);
        }
        ExclusionFixture::MobilePoint {
            value,
            germ,
            expected_excluded,
            ..
        } => {
            let got = mobile_point_exclusion(value, germ);
            lines.push(line(
                "mobile restriction vs germ threshold",
                got == *expected_excluded,
                format!(
                    "value {} against threshold {}: excluded = {}",
                    value,
                    crate::exclusion::two_dim_threshold(germ),
                    got
                ),
            ));
            excluded = got;
        }
        ExclusionFixture::FixedCurvePoint {
            asq,
            a_dot_b,
            bsq,
            expected_certificate,
            expected_equality,
            ..
        } => {
            let out = fixed_curve_point_exclusion(asq, a_dot_b, bsq);
            lines.push(line(
                "certificate polynomial",
                &out.certificate == expected_certificate,
                format!("{} (expected {})", out.certificate, expected_certificate),
            ));
            lines.push(line(
                "excluded",
                out.excluded,
                "certificate nonnegative on [0,1]".to_string(),
            ));
            let equality_ok = match &out.equality_locus {
                EqualityLocus::Points(pts) => pts == expected_equality,
                _ => false,
            };
            lines.push(line(
                "equality locus",
                equality_ok,
                format!(
                    "{:?} (expected points {:?})",
                    out.equality_locus, expected_equality
                ),
            ));
            excluded = out.excluded && lines.iter().all(|l| l.passed);
        }
        ExclusionFixture::PointDiscriminant(case) => {
            let PointDiscriminantCase {
                asq,
                curves,
                pairings,
                threshold,
                alpha_min,
                expected_l2,
                expected_lead,
                expected_linear,
                expected_constant,
                expected_alpha_star,
                expected_max_quarter_disc,
                ..
            } = case.as_ref();
            let gram: Vec<Vec<Option<Rat>>> = pairings
                .iter()
                .map(|row| row.iter().cloned().map(Some).collect())
                .collect();
            match build_l2_expression(asq, curves, &gram) {
                Ok(l2) => {
                    lines.push(line(
                        "mobile part self-intersection",
                        &l2 == expected_l2,
                        format!("{l2}"),
                    ));
                    match threshold.sub(&l2).collect_quadratic_in_first() {
                        Ok(pq) => {
                            let coeffs_ok = pq.lead() == expected_lead
                                && pq.linear() == expected_linear
                                && pq.constant() == expected_constant;
                            lines.push(line(
                                "strict inequality quadratic",
                                coeffs_ok,
                                format!(
                                    "lead {}, linear {}, constant {}",
                                    pq.lead(),
                                    pq.linear(),
                                    pq.constant()
                                ),
                            ));
                            let range = Interval::at_least(alpha_min.clone());
                            let report = discriminant_infeasibility(&pq, &range);
                            lines.push(line(
                                "discriminant maximizer",
                                report.alpha_star.as_ref() == Some(expected_alpha_star),
                                format!(
                                    "{:?} (expected {})",
                                    report.alpha_star, expected_alpha_star
                                ),
                            ));
                            lines.push(line(
                                "discriminant maximum",
                                report.max_quarter_discriminant.as_ref()
                                    == Some(expected_max_quarter_disc),
                                format!(
                                    "{:?} (expected {})",
                                    report.max_quarter_discriminant, expected_max_quarter_disc
                                ),
                            ));
                            lines.push(line(
                                "infeasible",
                                report.infeasible,
                                "strict inequality has no solution in range".to_string(),
                            ));
                            excluded = report.infeasible && lines.iter().all(|l| l.passed);
                        }
                        Err(e) => {
                            lines.push(line("strict inequality quadratic", false, e.to_string()));
                            excluded = false;
                        }
                    }
                }
                Err(e) => {
                    lines.push(line("mobile part self-intersection", false, e.to_string()));
                    excluded = false;
                }
            }
        }
        ExclusionFixture::QuotientCenter {
            kind,
            through_quotient_point,
            expected_excluded,
            ..
        } => {
            let verdict = quotient_center_rule(*kind, *through_quotient_point);
            lines.push(line(
                "quotient point rule",
                verdict.is_excluded() == *expected_excluded,
                format!("{verdict:?}"),
            ));
            excluded = verdict.is_excluded();
        }
    }
    CaseReport {
        label: fixture.label().to_string(),
        excluded,
        lines,
    }
}

/// Aggregate report of `catalog check`: oracle pairs, links, exclusion
/// replays.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogReport {
    pub oracle_pairs: Vec<CheckLine>,
    pub links: Vec<crate::links::LinkReport>,
    pub exclusion_cases: Vec<CaseReport>,
}

impl CatalogReport {
    pub fn all_passed(&self) -> bool {
        self.oracle_pairs.iter().all(|l| l.passed)
            && self.links.iter().all(|r| r.all_passed())
            && self
                .exclusion_cases
                .iter()
                .all(|c| c.all_passed() && c.excluded)
    }
}

/// Runs every validation the catalog carries data for: series oracle
/// equivalence to depth 30 on every (numerics, family) pair, link
/// verification on every link, and replay of every exclusion case.
pub fn check_catalog(catalog: &Catalog) -> CatalogReport {
    let mut oracle_pairs = Vec::new();
    for (id, numerics, family) in catalog.paired_numerics() {
        let cube_ok = family.anticanonical_cube().ok().as_ref() == Some(numerics.kcube());
        let series_ok = match family.hilbert_series(30) {
            Ok(series) => series.matches_rationals(&numerics.hilbert_sequence(30).values),
            Err(_) => false,
        };
        oracle_pairs.push(line(
            id,
            cube_ok && series_ok,
            format!(
                "family {} vs numerics ({}): degree {}, series to 30 {}",
                family,
                numerics,
                if cube_ok { "ok" } else { "MISMATCH" },
                if series_ok { "ok" } else { "MISMATCH" }
            ),
        ));
    }

    let links = catalog
        .entries
        .iter()
        .filter(|e| matches!(e.payload, Payload::Link(_)))
        .filter_map(|e| catalog.resolve_link(&e.id).ok())
        .map(|record| verify_link(&record))
        .collect();

    let exclusion_cases = catalog
        .entries
        .iter()
        .filter_map(|e| match &e.payload {
            Payload::ExclusionCase(c) => Some(replay_exclusion(c)),
            _ => None,
        })
        .collect();

    CatalogReport {
        oracle_pairs,
        links,
        exclusion_cases,
    }
}

fn entry(id: &str, provenance: Provenance, payload: Payload) -> CatalogEntry {
    CatalogEntry {
        id: id.to_string(),
        provenance,
        payload,
    }
}

fn family_fixture(weights: &[u32], degrees: &[u32]) -> Payload {
    Payload::Family(FamilyFixture {
        weights: weights.to_vec(),
        degrees: degrees.to_vec(),
    })
}

fn numerics_fixture(genus: i64, kcube: Rat, basket: &[(u32, u32)], family: &str) -> Payload {
    Payload::Numerics(NumericsFixture {
        genus,
        kcube,
        basket: basket.to_vec(),
        family: Some(family.to_string()),
    })
}

/// The full fixture set. Deterministic content; every value either quotes
/// the source computation or says how it was derived.
#[allow(clippy::vec_init_then_push)]
pub fn builtin_catalog() -> Catalog {
    let mut entries = Vec::new();

    // families
    entries.push(entry(
        "X4",
        Provenance::paper("the quartic x0^2 x1 x2 + x0 a3 + b4 = 0 in P^4 with one cA2 point"),
        family_fixture(&[1, 1, 1, 1, 1], &[4]),
    ));
    entries.push(entry(
        "Z5",
        Provenance::paper("Z5 in P(1,1,1,1,2) has the correct numerical invariants"),
        family_fixture(&[1, 1, 1, 1, 2], &[5]),
    ));
    entries.push(entry(
        "Y34",
        Provenance::paper("Y34 in P(1^4,2^2), complete intersection of a cubic and a quartic"),
        family_fixture(&[1, 1, 1, 1, 2, 2], &[3, 4]),
    ));
    entries.push(entry(
        "X7",
        Provenance::paper("X7 in P(1,1,1,2,3) with a singular point y^2 + z^2 + x1^6 + x2^6"),
        family_fixture(&[1, 1, 1, 2, 3], &[7]),
    ));
    entries.push(entry(
        "Z9",
        Provenance::paper("midpoint Z9 in P(1,1,2,3,3) of the X7 link"),
        family_fixture(&[1, 1, 2, 3, 3], &[9]),
    ));
    entries.push(entry(
        "Y67",
        Provenance::paper("Y67 in P(1,1,2,3,3,4), the other end of the X7 link"),
        family_fixture(&[1, 1, 2, 3, 3, 4], &[6, 7]),
    ));
    entries.push(entry(
        "X15",
        Provenance::paper("X15 in P(1,1,2,5,7) with a singular point u^2 + z^2 y + y^7 + x^14"),
        family_fixture(&[1, 1, 2, 5, 7], &[15]),
    ));
    entries.push(entry(
        "Z20",
        Provenance::paper("midpoint Z20 in P(1,2,5,6,7) of the X15 link"),
        family_fixture(&[1, 2, 5, 6, 7], &[20]),
    ));
    entries.push(entry(
        "Y1415",
        Provenance::paper("Y1415 in P(1,2,5,6,7,9), the other end of the X15 link"),
        family_fixture(&[1, 2, 5, 6, 7, 9], &[14, 15]),
    ));
    entries.push(entry(
        "Z10",
        Provenance::paper("Z10 in P(1,1,1,3,5), midpoint of the involution centered on a line"),
        family_fixture(&[1, 1, 1, 3, 5], &[10]),
    ));
    entries.push(entry(
        "Z12",
        Provenance::paper(
            "Z12 in P(1,1,1,4,6), midpoint of the involution from a line through one node",
        ),
        family_fixture(&[1, 1, 1, 4, 6], &[12]),
    ));
    entries.push(entry(
        "Z8",
        Provenance::paper(
            "Z8 in P(1,1,1,2,4), midpoint of the involution from a line through two nodes",
        ),
        family_fixture(&[1, 1, 1, 2, 4], &[8]),
    ));

    // numerics
    entries.push(entry(
        "X4-num",
        Provenance::paper(
            "A^3 = 4; h0(O(1)) = 5 so the genus is 3; the cA2 point carries no basket",
        ),
        numerics_fixture(3, rint(4), &[], "X4"),
    ));
    entries.push(entry(
        "Z5-num",
        Provenance::paper(
            "a Fano 3-fold with a singularity 1/2(1,1,1) and genus 2; B^3 = 4 - 3/2 = 5/2",
        ),
        numerics_fixture(2, rat(5, 2), &[(2, 1)], "Z5"),
    ));
    entries.push(entry(
        "Y34-num",
        Provenance::paper("genus 2 and singularities 2 x 1/2(1,1,1); A'^3 = 5/2 + 4/8 = 3"),
        numerics_fixture(2, rint(3), &[(2, 1), (2, 1)], "Y34"),
    ));
    entries.push(entry(
        "X7-num",
        Provenance::derived(
            "basket balanced against (-K)^3 = 7/6 and genus 1 = h0(O(1)) - 2; series checked to depth 30",
        ),
        numerics_fixture(1, rat(7, 6), &[(2, 1), (3, 1)], "X7"),
    ));
    entries.push(entry(
        "Z9-num",
        Provenance::derived(
            "basket balanced against (-K)^3 = 1/2 and genus 0; series checked to depth 30",
        ),
        numerics_fixture(0, rat(1, 2), &[(2, 1), (3, 1), (3, 1), (3, 1)], "Z9"),
    ));
    entries.push(entry(
        "Y67-num",
        Provenance::derived(
            "basket balanced against (-K)^3 = 7/12 and genus 0; series checked to depth 30",
        ),
        numerics_fixture(0, rat(7, 12), &[(2, 1), (3, 1), (3, 1), (4, 1)], "Y67"),
    ));
    entries.push(entry(
        "X15-num",
        Provenance::derived(
            "basket balanced against (-K)^3 = 3/14 and genus 0; the 1/7 point enters as (7,3); series checked to depth 30",
        ),
        numerics_fixture(0, rat(3, 14), &[(2, 1), (7, 3)], "X15"),
    ));
    entries.push(entry(
        "Z20-num",
        Provenance::derived(
            "basket balanced against (-K)^3 = 1/21 and genus -1 (h0(O(1)) = 1); series checked to depth 30",
        ),
        numerics_fixture(
            -1,
            rat(1, 21),
            &[(2, 1), (2, 1), (2, 1), (6, 1), (7, 3)],
            "Z20",
        ),
    ));
    entries.push(entry(
        "Y1415-num",
        Provenance::derived(
            "basket balanced against (-K)^3 = 1/18 and genus -1; series checked to depth 30",
        ),
        numerics_fixture(-1, rat(1, 18), &[(2, 1), (2, 1), (6, 1), (9, 4)], "Y1415"),
    ));

    // extractions
    entries.push(entry(
        "ca2-w2111",
        Provenance::paper(
            "weighted blowup of xy + z^3 + t^3 = 0 with weights (2,1,1,1): discrepancy 1, E^3 = 3/2",
        ),
        Payload::Extraction(ExtractionData::ca2_blowup([2, 1, 1, 1]).expect("fixed weights")),
    ));
    entries.push(entry(
        "ca2-w1211",
        Provenance::paper(
            "weighted blowup of xy + z^3 + t^3 = 0 with weights (1,2,1,1); there are really two links",
        ),
        Payload::Extraction(ExtractionData::ca2_blowup([1, 2, 1, 1]).expect("fixed weights")),
    ));
    entries.push(entry(
        "kaw-half",
        Provenance::derived(
            "(1,1,1) blowup of a 1/2(1,1,1) point: a_E = 1/2 and E^3 = 4, so the drop is 4/8",
        ),
        Payload::Extraction(ExtractionData::kawamata_blowup(
            &QuotientSingularity::new(2, 1).expect("valid"),
        )),
    ));
    entries.push(entry(
        "x7-drop",
        Provenance::inferred("degree drop 7/6 - 1/2 = 2/3 solved from the ledger equation"),
        Payload::Extraction(
            ExtractionData::inferred("extraction from the X7 singular point", rat(2, 3))
                .expect("positive"),
        ),
    ));
    entries.push(entry(
        "y67-drop",
        Provenance::inferred("degree drop 7/12 - 1/2 = 1/12 solved from the ledger equation"),
        Payload::Extraction(
            ExtractionData::inferred("extraction from a Y67 quotient point", rat(1, 12))
                .expect("positive"),
        ),
    ));
    entries.push(entry(
        "x15-drop",
        Provenance::inferred("degree drop 3/14 - 1/21 = 1/6 solved from the ledger equation"),
        Payload::Extraction(
            ExtractionData::inferred("extraction from the X15 singular point", rat(1, 6))
                .expect("positive"),
        ),
    ));
    entries.push(entry(
        "y1415-drop",
        Provenance::inferred("degree drop 1/18 - 1/21 = 1/126 solved from the ledger equation"),
        Payload::Extraction(
            ExtractionData::inferred("extraction from a Y1415 quotient point", rat(1, 126))
                .expect("positive"),
        ),
    ));

    // links
    let link = |left_n: &str, left_e: &str, right_n: &str, right_e: &str, mid: &str, fam: &str| {
        Payload::Link(LinkFixture {
            left_numerics: left_n.to_string(),
            left_extraction: left_e.to_string(),
            right_numerics: right_n.to_string(),
            right_extraction: right_e.to_string(),
            midpoint_numerics: mid.to_string(),
            midpoint_family: Some(fam.to_string()),
        })
    };
    entries.push(entry(
        "X4-Y34",
        Provenance::paper("B^3 = 4 - 3/2 = 5/2 on the left; A'^3 = 5/2 + 4/8 = 3 on the right"),
        link("X4-num", "ca2-w2111", "Y34-num", "kaw-half", "Z5-num", "Z5"),
    ));
    entries.push(entry(
        "X4-Y34-alt",
        Provenance::paper("the second link, through the (1,2,1,1) blowup, to the same Y34"),
        link("X4-num", "ca2-w1211", "Y34-num", "kaw-half", "Z5-num", "Z5"),
    ));
    entries.push(entry(
        "X7-Y67",
        Provenance::inferred("drops solved from the family degrees 7/6 -> 1/2 <- 7/12"),
        link("X7-num", "x7-drop", "Y67-num", "y67-drop", "Z9-num", "Z9"),
    ));
    entries.push(entry(
        "X15-Y1415",
        Provenance::inferred("drops solved from the family degrees 3/14 -> 1/21 <- 1/18"),
        link(
            "X15-num",
            "x15-drop",
            "Y1415-num",
            "y1415-drop",
            "Z20-num",
            "Z20",
        ),
    ));

    // exclusion cases on the quartic
    entries.push(entry(
        "x4-degree-bound",
        Provenance::paper("4n^2 = H1.H2.S > m^2 deg C with m > n forces deg C <= 3"),
        Payload::ExclusionCase(ExclusionFixture::CurveDegree {
            label: "X4: raw degree bound for curve centers".to_string(),
            a_cube: rint(4),
            step: rint(1),
            expected_bound: rint(3),
        }),
    ));
    entries.push(entry(
        "x4-twisted-cubic",
        Provenance::paper("0 <= L^2 = 8 - 6g - 5g^2 shows g <= 4/5 < 1"),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(8),
                rint(3),
                rint(-5),
                "X4: twisted cubic avoiding the singular point",
            ),
            pullback_coefficients: None,
            expected_quadratic: QuadraticForm::new(rint(-5), rint(-6), rint(8)),
            expected_gamma_max: Some(rat(4, 5)),
        }),
    ));
    entries.push(entry(
        "x4-twisted-cubic-a2",
        Provenance::paper(
            "through the singular point, A2 section: C^2 = -5 + 2/3 by the projection formula",
        ),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(8),
                rint(3),
                rat(-13, 3),
                "X4: twisted cubic through the singular point (A2 section)",
            ),
            pullback_coefficients: Some(vec![rat(2, 3), rat(1, 3), rint(0), rint(0), rint(0)]),
            expected_quadratic: QuadraticForm::new(rat(-13, 3), rint(-6), rint(8)),
            expected_gamma_max: None,
        }),
    ));
    entries.push(entry(
        "x4-twisted-cubic-a3",
        Provenance::paper(
            "through the singular point, A3 section: C^2 = -5 + 1, and 0 <= L^2 <= 8 - 6g - 4g^2",
        ),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(8),
                rint(3),
                rint(-4),
                "X4: twisted cubic through the singular point (A3 section)",
            ),
            pullback_coefficients: Some(vec![rat(1, 2), rat(1, 2), rint(1), rint(0), rint(0)]),
            expected_quadratic: QuadraticForm::new(rint(-4), rint(-6), rint(8)),
            expected_gamma_max: None,
        }),
    ));
    entries.push(entry(
        "x4-plane-line",
        Provenance::paper("0 <= L^2 = 4d - 2dg - d(d-1)g^2 - 2g^2 at d = 1"),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(4),
                rint(1),
                rint(-2),
                "X4: plane line avoiding the singular point",
            ),
            pullback_coefficients: None,
            expected_quadratic: QuadraticForm::new(rint(-2), rint(-2), rint(4)),
            expected_gamma_max: Some(rint(1)),
        }),
    ));
    entries.push(entry(
        "x4-plane-conic",
        Provenance::paper("0 <= L^2 = 4d - 2dg - d(d-1)g^2 - 2g^2 at d = 2"),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(8),
                rint(2),
                rint(-4),
                "X4: plane conic avoiding the singular point",
            ),
            pullback_coefficients: None,
            expected_quadratic: QuadraticForm::new(rint(-4), rint(-4), rint(8)),
            expected_gamma_max: Some(rint(1)),
        }),
    ));
    entries.push(entry(
        "x4-plane-cubic",
        Provenance::paper("0 <= L^2 = 12 - 6g - 6g^2 and again g <= 1"),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(12),
                rint(3),
                rint(-6),
                "X4: plane cubic avoiding the singular point",
            ),
            pullback_coefficients: None,
            expected_quadratic: QuadraticForm::new(rint(-6), rint(-6), rint(12)),
            expected_gamma_max: Some(rint(1)),
        }),
    ));
    entries.push(entry(
        "x4-cubic-plus-line",
        Provenance::paper("(1-g1) = (A - g1 S2).C1 >= (g - g1) C.C1 with C.C1 >= 1"),
        Payload::ExclusionCase(ExclusionFixture::ComponentPairing {
            label: "X4: plane section a cubic plus a line".to_string(),
            deg_o: rint(1),
            pairing_lower: rint(1),
            expected_bound: rint(1),
        }),
    ));
    entries.push(entry(
        "x4-conic-plus-lines",
        Provenance::paper("the line component pairs against the rest exactly as in the cubic case"),
        Payload::ExclusionCase(ExclusionFixture::ComponentPairing {
            label: "X4: plane section a conic plus two lines".to_string(),
            deg_o: rint(1),
            pairing_lower: rint(1),
            expected_bound: rint(1),
        }),
    ));
    entries.push(entry(
        "x4-two-conics",
        Provenance::paper(
            "2(1-g1) >= (g - g1) C.C1 and the conics meet in at least 2 nonsingular points",
        ),
        Payload::ExclusionCase(ExclusionFixture::ComponentPairing {
            label: "X4: plane section two conics".to_string(),
            deg_o: rint(2),
            pairing_lower: rint(2),
            expected_bound: rint(1),
        }),
    ));

    // exclusion cases on Y34
    entries.push(entry(
        "y34-degree-bound-half",
        Provenance::paper("3n^2 = H1.H2.S >= m^2 d over half-integer degrees"),
        Payload::ExclusionCase(ExclusionFixture::CurveDegree {
            label: "Y34: raw degree bound, half-integer quantum".to_string(),
            a_cube: rint(3),
            step: rat(1, 2),
            expected_bound: rat(5, 2),
        }),
    ));
    entries.push(entry(
        "y34-degree-bound",
        Provenance::paper("the integer reading of 3n^2 >= m^2 d: d <= 2"),
        Payload::ExclusionCase(ExclusionFixture::CurveDegree {
            label: "Y34: raw degree bound, integer quantum".to_string(),
            a_cube: rint(3),
            step: rint(1),
            expected_bound: rint(2),
        }),
    ));
    entries.push(entry(
        "y34-curve-d2",
        Provenance::paper("C^2 = -8 on a general quartic section and 0 <= L^2 = 12 - 4g - 8g^2"),
        Payload::ExclusionCase(ExclusionFixture::FixedCurve {
            surface: SurfaceCurveCase::new(
                rint(12),
                rint(2),
                rint(-8),
                "Y34: degree-2 curve in the nonsingular locus",
            ),
            pullback_coefficients: None,
            expected_quadratic: QuadraticForm::new(rint(-8), rint(-4), rint(12)),
            expected_gamma_max: Some(rint(1)),
        }),
    ));
    entries.push(entry(
        "y34-curve-d1",
        Provenance::paper(
            "M.C1 = (1-g1) deg O(1) >= (g-g1) C.C1 with C.C1 >= deg O(1), at the smallest degree 1/2",
        ),
        Payload::ExclusionCase(ExclusionFixture::ComponentPairing {
            label: "Y34: degree-1 curve paired against a half-degree component".to_string(),
            deg_o: rat(1, 2),
            pairing_lower: rat(1, 2),
            expected_bound: rint(1),
        }),
    ));
    entries.push(entry(
        "y34-curve-through-quotient",
        Provenance::paper(
            "a curve center on a 3-fold with quotient points lies in the nonsingular locus",
        ),
        Payload::ExclusionCase(ExclusionFixture::QuotientCenter {
            label: "Y34: curve through one of the two 1/2(1,1,1) points".to_string(),
            kind: CenterKind::Curve,
            through_quotient_point: true,
            expected_excluded: true,
        }),
    ));
    entries.push(entry(
        "y34-mobile-point",
        Provenance::paper("3 = H^2.S / n^2 < 4, enough to exclude a point with mobile restriction"),
        Payload::ExclusionCase(ExclusionFixture::MobilePoint {
            label: "Y34: nonsingular point, restriction mobile".to_string(),
            value: rint(3),
            germ: TwoCurveGerm::new(rint(1), rint(1), rint(1)),
            expected_excluded: true,
        }),
    ));
    entries.push(entry(
        "y34-point-on-unit-curve",
        Provenance::paper("L^2 = 3 - c^2 - 2c <= 4(1 - c): the difference is the square (1-c)^2"),
        Payload::ExclusionCase(ExclusionFixture::FixedCurvePoint {
            label: "Y34: point on a contracted curve of degree 1".to_string(),
            asq: rint(3),
            a_dot_b: rint(1),
            bsq: rint(-1),
            expected_certificate: QuadraticForm::new(rint(1), rint(-2), rint(1)),
            expected_equality: vec![rint(1)],
        }),
    ));
    entries.push(entry(
        "y34-point-on-half-curve",
        Provenance::paper(
            "(L/n)^2 = 6 - 2b^2 - (7/4)a^2 - a + 2ab against the bound 4(2-b)(2-a); \
             0 > 2b^2 - 2b(4-a) - 7a + (7/4)a^2 + 10 with Delta/4 = -(5/2)a^2 + 6a - 4 < 0",
        ),
        Payload::ExclusionCase(ExclusionFixture::PointDiscriminant(Box::new(
            PointDiscriminantCase {
                label: "Y34: point on a contracted curve of degree 1/2".to_string(),
                asq: rint(6),
                curves: vec![
                    FixedCurveDatum {
                        symbol: "b".to_string(),
                        a_pairing: rint(0),
                    },
                    FixedCurveDatum {
                        symbol: "a".to_string(),
                        a_pairing: rat(1, 2),
                    },
                ],
                pairings: vec![vec![rint(-2), rint(1)], vec![rint(1), rat(-7, 4)]],
                threshold: MultiQuadratic {
                    symbols: vec!["b".to_string(), "a".to_string()],
                    constant: rint(16),
                    linear: vec![rint(-8), rint(-8)],
                    gram: vec![vec![rint(0), rint(2)], vec![rint(2), rint(0)]],
                },
                alpha_min: rint(0),
                expected_l2: MultiQuadratic {
                    symbols: vec!["b".to_string(), "a".to_string()],
                    constant: rint(6),
                    linear: vec![rint(0), rint(-1)],
                    gram: vec![vec![rint(-2), rint(1)], vec![rint(1), rat(-7, 4)]],
                },
                expected_lead: rint(2),
                expected_linear: QuadraticForm::new(rint(0), rint(2), rint(-8)),
                expected_constant: QuadraticForm::new(rat(7, 4), rint(-7), rint(10)),
                expected_alpha_star: rat(6, 5),
                expected_max_quarter_disc: rat(-2, 5),
            },
        ))),
    ));

    Catalog::new(entries).expect("the built-in catalog is well formed")
}
