//! The inequality engine for excluding maximal centers.
//!
//! Every routine here turns one step of an exclusion argument into an
//! exact computation:
//!
//! - restricting a mobile system to a test surface and bounding the
//!   fixed-part multiplicity by nefness of the mobile part
//!   ([`max_fixed_multiplicity`]);
//! - adjunction on the test surface ([`self_intersection_adjunction`]);
//! - the raw degree bound from intersecting two general members with a
//!   hyperplane section ([`curve_degree_bound`]);
//! - the two-curve-germ thresholds that non-log-canonicity forces on a
//!   local intersection number ([`two_dim_threshold`] and the point
//!   exclusions built on it);
//! - pairing bounds against a second component of the base curve
//!   ([`component_bound`]);
//! - terminality and node multiplicity predicates
//!   ([`quotient_terminal_threshold`], [`node_multiplicity_bound`],
//!   [`quotient_center_rule`]);
//! - exact quadratic bookkeeping for the two-parameter fixed part of a
//!   double projection ([`build_l2_expression`],
//!   [`discriminant_infeasibility`]).
//!
//! Verdicts distinguish strict from non-strict outcomes. The germ
//! thresholds are strict inequalities, so a value exactly at a threshold
//! is reported as "not excluded by this test" rather than silently
//! passed. All root comparisons are exact ([`QuadRoot`]); nothing is ever
//! rounded.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{rint, QuadRoot, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExclusionError {
    #[error(
        "no bound from this test surface: the fixed curve has nonnegative self-intersection {csq}"
    )]
    NoBoundFromSurface { csq: Rat },
    #[error("the nef quadratic has no nonnegative root; no multiplicity is feasible")]
    NoFeasibleMultiplicity,
    #[error("no intersection certificate: pairing lower bound {pairing} is not positive")]
    NoIntersectionCertificate { pairing: Rat },
    #[error("missing pairing entry between fixed curves {i} and {j}")]
    MissingPairing { i: usize, j: usize },
    #[error("pairing data is not symmetric at ({i},{j})")]
    AsymmetricPairing { i: usize, j: usize },
    #[error("pairing matrix must be {expected}x{expected}, got row {row} of length {len}")]
    PairingShape {
        expected: usize,
        row: usize,
        len: usize,
    },
    #[error("collecting a quadratic needs exactly two symbols, found {found}")]
    NotBivariate { found: usize },
    #[error("leading coefficient must be a positive constant, got {lead}")]
    InvalidLeadingCoefficient { lead: Rat },
    #[error("coefficient of the linear term must have degree at most 1 in the parameter")]
    NonLinearCoefficient,
    #[error("empty or reversed interval")]
    InvalidInterval,
}

/// `q(x) = c2 x^2 + c1 x + c0` with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub c2: Rat,
    pub c1: Rat,
    pub c0: Rat,
}

impl QuadraticForm {
    pub fn new(c2: Rat, c1: Rat, c0: Rat) -> Self {
        QuadraticForm { c2, c1, c0 }
    }

    pub fn constant(c0: Rat) -> Self {
        QuadraticForm::new(Rat::zero(), Rat::zero(), c0)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        (&self.c2 * x + &self.c1) * x + &self.c0
    }

    pub fn is_zero(&self) -> bool {
        self.c2.is_zero() && self.c1.is_zero() && self.c0.is_zero()
    }

    /// `q(x) = scale (x - shift)^2 + rest` when the form is honestly
    /// quadratic.
    pub fn completed_square(&self) -> Option<(Rat, Rat, Rat)> {
        if self.c2.is_zero() {
            return None;
        }
        let shift = -&self.c1 / (rint(2) * &self.c2);
        let rest = &self.c0 - &self.c1 * &self.c1 / (rint(4) * &self.c2);
        Some((self.c2.clone(), shift, rest))
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x^2 + {}*x + {}", self.c2, self.c1, self.c0)
    }
}

/// Intersection data of a fixed curve on a polarized test surface:
/// `A^2`, `A.C` and `C^2`, with `C^2 < 0` required for a finite bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceCurveCase {
    pub asq: Rat,
    pub a_dot_c: Rat,
    pub csq: Rat,
    pub label: String,
}

impl SurfaceCurveCase {
    pub fn new(asq: Rat, a_dot_c: Rat, csq: Rat, label: impl Into<String>) -> Self {
        SurfaceCurveCase {
            asq,
            a_dot_c,
            csq,
            label: label.into(),
        }
    }

    /// `L^2 = (A - gamma C)^2 = A^2 - 2 gamma A.C + gamma^2 C^2` as a
    /// quadratic in `gamma`.
    pub fn restriction_quadratic(&self) -> QuadraticForm {
        QuadraticForm::new(self.csq.clone(), rint(-2) * &self.a_dot_c, self.asq.clone())
    }
}

/// The multiplicity bound extracted from one test surface: the largest
/// `gamma >= 0` keeping `(A - gamma C)^2 >= 0`, as an exact (possibly
/// irrational) root, together with its exact comparison against 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaBound {
    pub quadratic: QuadraticForm,
    pub gamma_max: QuadRoot,
    /// `gamma_max` compared with 1.
    pub vs_one: Ordering,
    /// Sign of the quadratic at `gamma = 1`; `Less` certifies
    /// `gamma_max < 1`, `Equal` is the boundary `gamma_max = 1`.
    pub sign_at_one: Ordering,
}

impl GammaBound {
    pub fn holds_at_most_one(&self) -> bool {
        self.vs_one != Ordering::Greater
    }
}

/// Largest `gamma >= 0` with `A^2 - 2 gamma A.C + gamma^2 C^2 >= 0`.
///
/// Requires `C^2 < 0` (otherwise the surface gives no bound). The root is
/// exact; when irrational the verdict against 1 is still an exact sign
/// computation, never a float.
pub fn max_fixed_multiplicity(case: &SurfaceCurveCase) -> Result<GammaBound, ExclusionError> {
    if !case.csq.is_negative() {
        return Err(ExclusionError::NoBoundFromSurface {
            csq: case.csq.clone(),
        });
    }
    let quadratic = case.restriction_quadratic();
    let root = QuadRoot::larger_root(&quadratic.c2, &quadratic.c1, &quadratic.c0)
        .ok_or(ExclusionError::NoFeasibleMultiplicity)?;
    if root.cmp_rat(&Rat::zero()) == Ordering::Less {
        return Err(ExclusionError::NoFeasibleMultiplicity);
    }
    let vs_one = root.cmp_rat(&Rat::one());
    let at_one = quadratic.eval(&Rat::one());
    let sign_at_one = at_one.cmp(&Rat::zero());
    Ok(GammaBound {
        quadratic,
        gamma_max: root,
        vs_one,
        sign_at_one,
    })
}

/// Adjunction on the test surface: `C^2 = (2 p_a - 2) - K_S.C`.
pub fn self_intersection_adjunction(pa: i64, ks_dot_c: &Rat) -> Rat {
    rint(2 * pa - 2) - ks_dot_c
}

/// The largest multiple of `step` strictly less than `a_cube`: the degree
/// bound forced by `A^3 n^2 = H1.H2.S > m^2 deg` with `m > n`.
///
/// `step` is the degree quantum of the polarization (1 on a quartic, 1/2
/// on a half-point family); passing `step = 1` gives the
/// integer-restricted reading.
pub fn curve_degree_bound(a_cube: &Rat, step: &Rat) -> Rat {
    debug_assert!(a_cube.is_positive() && step.is_positive());
    let t = a_cube / step;
    let k = match t.to_integer() {
        Some(int) => Rat::from(int) - Rat::one(),
        None => t.floor(),
    };
    k * step
}

/// A normal-crossing two-curve germ hypothesis: coefficients `a1, a2 >= 0`
/// and the multiplicity normalization `m > 0` of the mobile part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoCurveGerm {
    pub a1: Rat,
    pub a2: Rat,
    pub m: Rat,
}

impl TwoCurveGerm {
    pub fn new(a1: Rat, a2: Rat, m: Rat) -> Self {
        TwoCurveGerm { a1, a2, m }
    }
}

/// The local intersection threshold that non-log-canonicity forces:
/// `4 a1 a2 m^2` when `a1 <= 1` or `a2 <= 1`, and `4 (a1 + a2 - 1) m^2`
/// when both exceed 1. The two formulas agree on the case boundary.
pub fn two_dim_threshold(germ: &TwoCurveGerm) -> Rat {
    let msq = germ.m.square();
    let one = Rat::one();
    if germ.a1 <= one || germ.a2 <= one {
        rint(4) * &germ.a1 * &germ.a2 * msq
    } else {
        rint(4) * (&germ.a1 + &germ.a2 - one) * msq
    }
}

/// Excludes a point through a surface on which the restricted system is
/// mobile: the germ threshold must exceed the full intersection number
/// `H^2.S / n^2`, so the point is excluded exactly when the observed value
/// is strictly below the threshold. A value equal to the threshold is not
/// a contradiction and is reported as "not excluded".
pub fn mobile_point_exclusion(h2s_over_n2: &Rat, germ: &TwoCurveGerm) -> bool {
    h2s_over_n2 < &two_dim_threshold(germ)
}

/// Where the exclusion certificate degenerates to equality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum EqualityLocus {
    /// Isolated rational points in `[0, 1]`.
    Points(Vec<Rat>),
    /// The certificate polynomial vanishes identically.
    WholeInterval,
    /// Not excluded, so no certificate to degenerate.
    NotApplicable,
}

/// Outcome of [`fixed_curve_point_exclusion`]: the certificate polynomial
/// `4(1-c) - (A - cB)^2` and whether it is nonnegative on all of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointExclusion {
    pub excluded: bool,
    pub certificate: QuadraticForm,
    pub equality_locus: EqualityLocus,
}

/// Excludes a point lying on a fixed curve `B` of the restricted system:
/// writing `A = L + cB` with unknown `c in [0,1]`, checks exactly that
/// `L^2(c) = A^2 - 2c A.B + c^2 B^2 <= 4(1 - c)` for every `c` in `[0,1]`,
/// i.e. that the difference polynomial is nonnegative on the interval.
/// Equality points of the certificate are returned; any interior equality
/// point is a double root and therefore rational.
pub fn fixed_curve_point_exclusion(asq: &Rat, a_dot_b: &Rat, bsq: &Rat) -> PointExclusion {
    // 4(1-c) - (asq - 2c a.b + c^2 bsq)
    let certificate = QuadraticForm::new(-bsq, rint(2) * a_dot_b - rint(4), rint(4) - asq);
    let excluded = nonnegative_on_unit_interval(&certificate);
    let equality_locus = if !excluded {
        EqualityLocus::NotApplicable
    } else if certificate.is_zero() {
        EqualityLocus::WholeInterval
    } else {
        EqualityLocus::Points(rational_roots_in_unit_interval(&certificate))
    };
    PointExclusion {
        excluded,
        certificate,
        equality_locus,
    }
}

/// Exact nonnegativity of a quadratic on `[0, 1]`.
fn nonnegative_on_unit_interval(q: &QuadraticForm) -> bool {
    let zero = Rat::zero();
    let at0 = q.eval(&zero);
    let at1 = q.eval(&Rat::one());
    if at0.is_negative() || at1.is_negative() {
        return false;
    }
    if !q.c2.is_positive() {
        // concave or linear: minimum over an interval sits at an endpoint
        return true;
    }
    // convex: also check the vertex when it lies inside
    let vertex = -&q.c1 / (rint(2) * &q.c2);
    if vertex > zero && vertex < Rat::one() {
        let disc = q.c1.square() - rint(4) * &q.c2 * &q.c0;
        return !disc.is_positive();
    }
    true
}

/// Rational zeros of `q` inside `[0, 1]`. Irrational zeros cannot occur
/// inside the interval when `q >= 0` there (they would force a sign
/// change), so this is the full equality locus for certified cases.
fn rational_roots_in_unit_interval(q: &QuadraticForm) -> Vec<Rat> {
    let in_unit = |r: &Rat| !r.is_negative() && r <= &Rat::one();
    let mut roots = Vec::new();
    if q.c2.is_zero() {
        if !q.c1.is_zero() {
            let r = -&q.c0 / &q.c1;
            if in_unit(&r) {
                roots.push(r);
            }
        }
        return roots;
    }
    let disc = q.c1.square() - rint(4) * &q.c2 * &q.c0;
    if disc.is_negative() {
        return roots;
    }
    if let Some(s) = disc.sqrt_exact() {
        let two_c2 = rint(2) * &q.c2;
        for root in [(-&q.c1 - &s) / &two_c2, (-&q.c1 + &s) / &two_c2] {
            if in_unit(&root) && !roots.contains(&root) {
                roots.push(root);
            }
        }
        roots.sort();
    }
    roots
}

/// Bound on the top fixed-part coefficient from pairing with another
/// component: from `(1 - gamma1) degO >= (gamma - gamma1) * pairing`,
///
/// `gamma <= gamma1 + (1 - gamma1) degO / pairing`.
///
/// Requires a positive pairing lower bound; `gamma1` is the smaller
/// component coefficient, known to lie in `[0, 1]`.
pub fn component_bound(
    deg_o: &Rat,
    gamma1: &Rat,
    pairing_lower: &Rat,
) -> Result<Rat, ExclusionError> {
    if !pairing_lower.is_positive() {
        return Err(ExclusionError::NoIntersectionCertificate {
            pairing: pairing_lower.clone(),
        });
    }
    debug_assert!(!gamma1.is_negative() && gamma1 <= &Rat::one());
    Ok(gamma1 + (Rat::one() - gamma1) * deg_o / pairing_lower)
}

/// `K + (1/n)H` is terminal at a quotient point of index `r` exactly when
/// the blowup multiplicity satisfies `delta < n/r` (strict).
pub fn quotient_terminal_threshold(r: u32, n: &Rat, delta: &Rat) -> bool {
    debug_assert!(r >= 2 && n.is_positive());
    delta < &(n / rint(i64::from(r)))
}

/// The node form of the multiplicity bound: the blowup multiplicity of a
/// non-canonical system at an ordinary node exceeds the degree, `d > n`.
/// This is the consistency check for certificate chains invoking it.
pub fn node_multiplicity_bound(n: &Rat, d: &Rat) -> bool {
    d > n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterKind {
    Point,
    Curve,
}

/// Verdict of a categorical exclusion rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CenterVerdict {
    Excluded { rule: String },
    NoVerdict,
}

impl CenterVerdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self, CenterVerdict::Excluded { .. })
    }
}

/// On a 3-fold whose singularities are terminal quotient points, no curve
/// through such a point is the center of a divisorial extraction (the only
/// extraction there is the point blowup itself), so a curve center through
/// a quotient point is excluded outright. Points, and curves avoiding the
/// singular set, get no verdict from this rule.
pub fn quotient_center_rule(kind: CenterKind, through_quotient_point: bool) -> CenterVerdict {
    match (kind, through_quotient_point) {
        (CenterKind::Curve, true) => CenterVerdict::Excluded {
            rule: "a curve through a terminal quotient point cannot carry a divisorial extraction"
                .to_string(),
        },
        _ => CenterVerdict::NoVerdict,
    }
}

/// One fixed curve entering a mobile-part decomposition, with its pairing
/// against the polarization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCurveDatum {
    pub symbol: String,
    pub a_pairing: Rat,
}

/// A quadratic polynomial in several named coefficients: constant, linear
/// part, and the Gram matrix of the curve pairings. The value of
/// `(A - sum x_i C_i)^2` is `constant + sum l_i x_i + sum_{i,j} g_{ij} x_i x_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiQuadratic {
    pub symbols: Vec<String>,
    pub constant: Rat,
    pub linear: Vec<Rat>,
    pub gram: Vec<Vec<Rat>>,
}

impl MultiQuadratic {
    pub fn eval(&self, xs: &[Rat]) -> Rat {
        assert_eq!(xs.len(), self.symbols.len());
        let mut total = self.constant.clone();
        for (l, x) in self.linear.iter().zip(xs) {
            total += l * x;
        }
        for (i, xi) in xs.iter().enumerate() {
            for (j, xj) in xs.iter().enumerate() {
                total += &self.gram[i][j] * xi * xj;
            }
        }
        total
    }

    /// Coefficient of `x_i^2`.
    pub fn square_coeff(&self, i: usize) -> &Rat {
        &self.gram[i][i]
    }

    /// Coefficient of `x_i x_j` (`i != j`) in the expanded polynomial.
    pub fn cross_coeff(&self, i: usize, j: usize) -> Rat {
        rint(2) * &self.gram[i][j]
    }

    pub fn linear_coeff(&self, i: usize) -> &Rat {
        &self.linear[i]
    }

    /// Termwise difference; symbol lists must agree.
    pub fn sub(&self, other: &MultiQuadratic) -> MultiQuadratic {
        assert_eq!(self.symbols, other.symbols, "mismatched symbols");
        MultiQuadratic {
            symbols: self.symbols.clone(),
            constant: &self.constant - &other.constant,
            linear: self
                .linear
                .iter()
                .zip(&other.linear)
                .map(|(a, b)| a - b)
                .collect(),
            gram: self
                .gram
                .iter()
                .zip(&other.gram)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| a - b).collect())
                .collect(),
        }
    }

    /// Reads a bivariate quadratic `q(x0, x1)` as a quadratic in `x0` whose
    /// coefficients are polynomials in `x1`:
    ///
    /// `q = g00 x0^2 + (l0 + 2 g01 x1) x0 + (c + l1 x1 + g11 x1^2)`.
    pub fn collect_quadratic_in_first(&self) -> Result<ParamQuadratic, ExclusionError> {
        if self.symbols.len() != 2 {
            return Err(ExclusionError::NotBivariate {
                found: self.symbols.len(),
            });
        }
        ParamQuadratic::new(
            self.gram[0][0].clone(),
            QuadraticForm::new(
                Rat::zero(),
                rint(2) * &self.gram[0][1],
                self.linear[0].clone(),
            ),
            QuadraticForm::new(
                self.gram[1][1].clone(),
                self.linear[1].clone(),
                self.constant.clone(),
            ),
        )
    }
}

impl fmt::Display for MultiQuadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (i, s) in self.symbols.iter().enumerate() {
            if !self.linear[i].is_zero() {
                write!(f, " + ({})*{}", self.linear[i], s)?;
            }
        }
        for (i, si) in self.symbols.iter().enumerate() {
            for (j, sj) in self.symbols.iter().enumerate().skip(i) {
                let coeff = if i == j {
                    self.gram[i][i].clone()
                } else {
                    self.cross_coeff(i, j)
                };
                if coeff.is_zero() {
                    continue;
                }
                if i == j {
                    write!(f, " + ({coeff})*{si}^2")?;
                } else {
                    write!(f, " + ({coeff})*{si}*{sj}")?;
                }
            }
        }
        Ok(())
    }
}

/// Pairing matrix rows for [`build_l2_expression`]; `None` marks a missing
/// entry.
pub type PairingRow = Vec<Option<Rat>>;

/// Expands `(A - sum x_i C_i)^2` from `A^2`, the pairings `A.C_i` and the
/// full symmetric matrix `C_i.C_j`. Every pairing entry must be supplied;
/// a hole or an asymmetry is a domain error.
pub fn build_l2_expression(
    asq: &Rat,
    curves: &[FixedCurveDatum],
    pairings: &[PairingRow],
) -> Result<MultiQuadratic, ExclusionError> {
    let n = curves.len();
    if pairings.len() != n {
        return Err(ExclusionError::PairingShape {
            expected: n,
            row: pairings.len(),
            len: 0,
        });
    }
    let mut gram = vec![vec![Rat::zero(); n]; n];
    for (i, row) in pairings.iter().enumerate() {
        if row.len() != n {
            return Err(ExclusionError::PairingShape {
                expected: n,
                row: i,
                len: row.len(),
            });
        }
        for (j, entry) in row.iter().enumerate() {
            match entry {
                Some(v) => gram[i][j] = v.clone(),
                None => return Err(ExclusionError::MissingPairing { i, j }),
            }
        }
    }
    for (i, row) in gram.iter().enumerate() {
        for (j, value) in row.iter().enumerate().skip(i + 1) {
            if value != &gram[j][i] {
                return Err(ExclusionError::AsymmetricPairing { i, j });
            }
        }
    }
    Ok(MultiQuadratic {
        symbols: curves.iter().map(|c| c.symbol.clone()).collect(),
        constant: asq.clone(),
        linear: curves.iter().map(|c| rint(-2) * &c.a_pairing).collect(),
        gram,
    })
}

/// A quadratic in one variable whose coefficients depend on a parameter:
/// `lead * x^2 + linear(t) * x + constant(t)` with `lead` a positive
/// constant and `linear` of degree at most 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamQuadratic {
    lead: Rat,
    linear: QuadraticForm,
    constant: QuadraticForm,
}

impl ParamQuadratic {
    pub fn new(
        lead: Rat,
        linear: QuadraticForm,
        constant: QuadraticForm,
    ) -> Result<Self, ExclusionError> {
        if !lead.is_positive() {
            return Err(ExclusionError::InvalidLeadingCoefficient { lead });
        }
        if !linear.c2.is_zero() {
            return Err(ExclusionError::NonLinearCoefficient);
        }
        Ok(ParamQuadratic {
            lead,
            linear,
            constant,
        })
    }

    pub fn lead(&self) -> &Rat {
        &self.lead
    }

    pub fn linear(&self) -> &QuadraticForm {
        &self.linear
    }

    pub fn constant(&self) -> &QuadraticForm {
        &self.constant
    }

    /// The reduced discriminant `Delta/4 = (linear/2)^2 - lead * constant`
    /// as a quadratic in the parameter.
    pub fn quarter_discriminant(&self) -> QuadraticForm {
        let l0 = &self.linear.c0;
        let l1 = &self.linear.c1;
        let quarter = Rat::new(1, 4);
        QuadraticForm::new(
            &quarter * l1 * l1 - &self.lead * &self.constant.c2,
            Rat::new(1, 2) * l0 * l1 - &self.lead * &self.constant.c1,
            quarter * l0 * l0 - &self.lead * &self.constant.c0,
        )
    }
}

/// One end of an interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Inclusive(Rat),
    Exclusive(Rat),
    Unbounded,
}

impl Bound {
    fn value(&self) -> Option<&Rat> {
        match self {
            Bound::Inclusive(v) | Bound::Exclusive(v) => Some(v),
            Bound::Unbounded => None,
        }
    }

    fn is_inclusive(&self) -> bool {
        matches!(self, Bound::Inclusive(_))
    }
}

/// A nonempty interval of parameter values; closed, half-open and
/// unbounded shapes are all supported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    lo: Bound,
    hi: Bound,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound) -> Result<Self, ExclusionError> {
        if let (Some(a), Some(b)) = (lo.value(), hi.value()) {
            if a > b || (a == b && !(lo.is_inclusive() && hi.is_inclusive())) {
                return Err(ExclusionError::InvalidInterval);
            }
        }
        Ok(Interval { lo, hi })
    }

    pub fn closed(lo: Rat, hi: Rat) -> Result<Self, ExclusionError> {
        Interval::new(Bound::Inclusive(lo), Bound::Inclusive(hi))
    }

    /// `[lo, +infinity)`.
    pub fn at_least(lo: Rat) -> Self {
        Interval {
            lo: Bound::Inclusive(lo),
            hi: Bound::Unbounded,
        }
    }

    pub fn lo(&self) -> &Bound {
        &self.lo
    }

    pub fn hi(&self) -> &Bound {
        &self.hi
    }
}

/// The supremum of a quadratic over an interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Supremum {
    Finite {
        value: Rat,
        /// Location of the supremum; `None` when the function does not
        /// depend on the parameter.
        at: Option<Rat>,
        /// Whether the supremum is attained inside the interval (an
        /// excluded endpoint yields the limit value, unattained).
        attained: bool,
    },
    Infinite,
}

/// Exact maximization of `q` over `iv`, comparing any interior vertex
/// against finite endpoints exactly.
pub fn maximize_quadratic(q: &QuadraticForm, iv: &Interval) -> Supremum {
    let eval_end = |b: &Bound| b.value().map(|v| (q.eval(v), v.clone(), b.is_inclusive()));

    if q.c2.is_zero() && q.c1.is_zero() {
        return Supremum::Finite {
            value: q.c0.clone(),
            at: None,
            attained: true,
        };
    }

    if q.c2.is_zero() {
        // linear: the supremum sits at the end the slope points to
        let end = if q.c1.is_positive() { &iv.hi } else { &iv.lo };
        return match eval_end(end) {
            None => Supremum::Infinite,
            Some((value, at, attained)) => Supremum::Finite {
                value,
                at: Some(at),
                attained,
            },
        };
    }

    if q.c2.is_negative() {
        // concave: clamp the vertex into the interval
        let vertex = -&q.c1 / (rint(2) * &q.c2);
        if let Some(lo) = iv.lo.value() {
            if &vertex < lo {
                let (value, at, attained) = eval_end(&iv.lo).expect("finite lower bound");
                return Supremum::Finite {
                    value,
                    at: Some(at),
                    attained,
                };
            }
        }
        if let Some(hi) = iv.hi.value() {
            if &vertex > hi {
                let (value, at, attained) = eval_end(&iv.hi).expect("finite upper bound");
                return Supremum::Finite {
                    value,
                    at: Some(at),
                    attained,
                };
            }
        }
        let on_excluded_endpoint = (matches!(&iv.lo, Bound::Exclusive(v) if *v == vertex))
            || (matches!(&iv.hi, Bound::Exclusive(v) if *v == vertex));
        return Supremum::Finite {
            value: q.eval(&vertex),
            at: Some(vertex),
            attained: !on_excluded_endpoint,
        };
    }

    // convex: supremum at an end; unbounded sides blow up
    match (eval_end(&iv.lo), eval_end(&iv.hi)) {
        (None, _) | (_, None) => Supremum::Infinite,
        (Some((vl, al, il)), Some((vh, ah, ih))) => {
            let (value, at, attained) = if vl >= vh { (vl, al, il) } else { (vh, ah, ih) };
            Supremum::Finite {
                value,
                at: Some(at),
                attained,
            }
        }
    }
}

/// The full discriminant certificate for `0 > lead x^2 + linear(t) x +
/// constant(t)` over a parameter range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantReport {
    /// `Delta/4` as a quadratic in the parameter.
    pub quarter_discriminant: QuadraticForm,
    /// Maximizer of `Delta/4` over the range, when the discriminant
    /// actually depends on the parameter.
    pub alpha_star: Option<Rat>,
    /// The supremum of `Delta/4`; `None` means unbounded above.
    pub max_quarter_discriminant: Option<Rat>,
    pub attained: bool,
    /// `true` when the supremum is finite and negative: no parameter value
    /// in range admits a solution of the strict inequality.
    pub infeasible: bool,
}

/// Maximizes the reduced discriminant of `pq` exactly over `range`. The
/// strict inequality `0 > pq(x; t)` has a solution for some `t` in range
/// exactly when the discriminant is positive somewhere, so a negative
/// maximum is an infeasibility certificate. A maximum equal to zero only
/// certifies the non-strict form, so `infeasible` stays `false` there.
pub fn discriminant_infeasibility(pq: &ParamQuadratic, range: &Interval) -> DiscriminantReport {
    let quarter = pq.quarter_discriminant();
    match maximize_quadratic(&quarter, range) {
        Supremum::Infinite => DiscriminantReport {
            quarter_discriminant: quarter,
            alpha_star: None,
            max_quarter_discriminant: None,
            attained: false,
            infeasible: false,
        },
        Supremum::Finite {
            value,
            at,
            attained,
        } => DiscriminantReport {
            infeasible: value.is_negative(),
            quarter_discriminant: quarter,
            alpha_star: at,
            max_quarter_discriminant: Some(value),
            attained,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn adjunction_examples() {
        assert_eq!(self_intersection_adjunction(0, &rint(3)), rint(-5));
        assert_eq!(self_intersection_adjunction(0, &rint(2)), rint(-4));
        assert_eq!(self_intersection_adjunction(1, &rint(0)), rint(0));
        // plane cubic: p_a = 1, K_S.C = d(d-1) = 6
        assert_eq!(self_intersection_adjunction(1, &rint(6)), rint(-6));
    }

    fn case(asq: i64, adotc: i64, csq: (i64, i64)) -> SurfaceCurveCase {
        SurfaceCurveCase::new(rint(asq), rint(adotc), rat(csq.0, csq.1), "test")
    }

    #[test]
    fn twisted_cubic_bound_is_four_fifths() {
        let b = max_fixed_multiplicity(&case(8, 3, (-5, 1))).unwrap();
        assert_eq!(b.gamma_max.as_rational(), Some(&rat(4, 5)));
        assert_eq!(b.vs_one, Ordering::Less);
        assert_eq!(b.quadratic, QuadraticForm::new(rint(-5), rint(-6), rint(8)));
    }

    #[test]
    fn boundary_bounds_are_exactly_one() {
        for (asq, adotc, csq) in [(12, 3, -6), (12, 2, -8), (4, 1, -2), (8, 2, -4)] {
            let b = max_fixed_multiplicity(&case(asq, adotc, (csq, 1))).unwrap();
            assert_eq!(
                b.gamma_max.as_rational(),
                Some(&Rat::one()),
                "{asq},{adotc},{csq}"
            );
            assert_eq!(b.vs_one, Ordering::Equal);
            assert_eq!(b.sign_at_one, Ordering::Equal);
        }
    }

    #[test]
    fn irrational_bound_compares_exactly() {
        // 8 - 6g - 4g^2: root (sqrt(41) - 3)/4, strictly below 1
        let b = max_fixed_multiplicity(&case(8, 3, (-4, 1))).unwrap();
        assert_eq!(b.gamma_max.as_rational(), None);
        assert_eq!(b.vs_one, Ordering::Less);
        assert_eq!(b.sign_at_one, Ordering::Less);
        // the exact root satisfies the quadratic: check representation
        let q = &b.quadratic;
        let base = b.gamma_max.base();
        let coeff = b.gamma_max.coeff();
        let disc = b.gamma_max.disc();
        // q(base + coeff sqrt(disc)) = rational part + radical part * sqrt(disc)
        let rational_part = &q.c2 * (base.square() + coeff.square() * disc) + &q.c1 * base + &q.c0;
        let radical_part = rint(2) * &q.c2 * base * coeff + &q.c1 * coeff;
        assert!(rational_part.is_zero() && radical_part.is_zero());
        // subcase with csq = -13/3 also stays below 1
        let b = max_fixed_multiplicity(&case(8, 3, (-13, 3))).unwrap();
        assert_eq!(b.vs_one, Ordering::Less);
    }

    #[test]
    fn nonnegative_csq_gives_no_bound() {
        assert!(matches!(
            max_fixed_multiplicity(&case(8, 3, (0, 1))),
            Err(ExclusionError::NoBoundFromSurface { .. })
        ));
        assert!(matches!(
            max_fixed_multiplicity(&case(8, 3, (2, 1))),
            Err(ExclusionError::NoBoundFromSurface { .. })
        ));
    }

    #[test]
    fn gamma_bound_monotonicity() {
        // larger A^2 weakly increases the bound; shallower C^2 too
        let base = max_fixed_multiplicity(&case(8, 3, (-5, 1))).unwrap();
        let bigger_asq = max_fixed_multiplicity(&case(9, 3, (-5, 1))).unwrap();
        let shallower = max_fixed_multiplicity(&case(8, 3, (-4, 1))).unwrap();
        let r = base.gamma_max.as_rational().unwrap().clone();
        assert_ne!(bigger_asq.gamma_max.cmp_rat(&r), Ordering::Less);
        assert_ne!(shallower.gamma_max.cmp_rat(&r), Ordering::Less);
    }

    #[test]
    fn degree_bound_examples() {
        assert_eq!(curve_degree_bound(&rint(4), &rint(1)), rint(3));
        assert_eq!(curve_degree_bound(&rint(3), &rat(1, 2)), rat(5, 2));
        assert_eq!(curve_degree_bound(&rint(3), &rint(1)), rint(2));
        assert_eq!(curve_degree_bound(&rint(1), &rint(1)), rint(0));
    }

    #[test]
    fn threshold_examples() {
        let g = |a1: Rat, a2: Rat, m: Rat| TwoCurveGerm::new(a1, a2, m);
        assert_eq!(two_dim_threshold(&g(rint(1), rint(1), rint(3))), rint(36));
        assert_eq!(two_dim_threshold(&g(rat(1, 2), rint(1), rint(1))), rint(2));
        assert_eq!(two_dim_threshold(&g(rint(2), rint(2), rint(1))), rint(12));
    }

    #[test]
    fn threshold_case_boundary_continuity() {
        // at a2 = 1 both case formulas give 4 a1 m^2
        for a1_num in 0..=12i64 {
            for m_num in 1..=4i64 {
                let a1 = rat(a1_num, 4);
                let m = rat(m_num, 2);
                let case1 = rint(4) * &a1 * Rat::one() * m.square();
                let case2 = rint(4) * (&a1 + rint(1) - rint(1)) * m.square();
                assert_eq!(case1, case2);
                let germ = TwoCurveGerm::new(a1.clone(), rint(1), m.clone());
                assert_eq!(two_dim_threshold(&germ), case1);
            }
        }
    }

    #[test]
    fn mobile_point_examples() {
        let unit = TwoCurveGerm::new(rint(1), rint(1), rint(1));
        assert!(mobile_point_exclusion(&rint(3), &unit));
        assert!(!mobile_point_exclusion(&rint(4), &unit)); // boundary: not a contradiction
        assert!(!mobile_point_exclusion(&rint(5), &unit));
    }

    #[test]
    fn fixed_curve_point_certificate() {
        let out = fixed_curve_point_exclusion(&rint(3), &rint(1), &rint(-1));
        assert!(out.excluded);
        // the certificate is (1 - c)^2
        assert_eq!(
            out.certificate,
            QuadraticForm::new(rint(1), rint(-2), rint(1))
        );
        assert_eq!(out.equality_locus, EqualityLocus::Points(vec![rint(1)]));

        let out = fixed_curve_point_exclusion(&rint(4), &rint(1), &rint(-1));
        assert!(!out.excluded);
        assert_eq!(out.equality_locus, EqualityLocus::NotApplicable);

        let out = fixed_curve_point_exclusion(&rint(0), &rint(0), &rint(-1));
        assert!(out.excluded);
        assert_eq!(out.equality_locus, EqualityLocus::Points(vec![]));
    }

    #[test]
    fn fixed_curve_point_simple_endpoint_root() {
        // certificate (1-c)(2-c): nonnegative on [0,1], equality only at 1
        // built from asq = 2, a.b = 1/2, bsq = -1
        let out = fixed_curve_point_exclusion(&rint(2), &rat(1, 2), &rint(-1));
        assert_eq!(
            out.certificate,
            QuadraticForm::new(rint(1), rint(-3), rint(2))
        );
        assert!(out.excluded);
        assert_eq!(out.equality_locus, EqualityLocus::Points(vec![rint(1)]));
    }

    #[test]
    fn component_bound_examples() {
        for g1 in [rint(0), rat(1, 4), rat(1, 2), rat(3, 4), rint(1)] {
            assert_eq!(component_bound(&rint(1), &g1, &rint(1)).unwrap(), rint(1));
            assert_eq!(component_bound(&rint(2), &g1, &rint(2)).unwrap(), rint(1));
        }
        assert_eq!(
            component_bound(&rat(1, 2), &rint(0), &rat(1, 2)).unwrap(),
            rint(1)
        );
        assert!(matches!(
            component_bound(&rint(1), &rint(0), &rint(0)),
            Err(ExclusionError::NoIntersectionCertificate { .. })
        ));
    }

    #[test]
    fn terminal_threshold_examples() {
        assert!(quotient_terminal_threshold(2, &rint(3), &rint(1)));
        assert!(!quotient_terminal_threshold(2, &rint(2), &rint(1)));
        assert!(!quotient_terminal_threshold(3, &rint(3), &rint(1)));
    }

    #[test]
    fn node_bound_examples() {
        assert!(node_multiplicity_bound(&rint(1), &rint(2)));
        assert!(!node_multiplicity_bound(&rint(2), &rint(2)));
        assert!(node_multiplicity_bound(&rint(3), &rat(7, 2)));
    }

    #[test]
    fn quotient_center_rule_examples() {
        assert!(quotient_center_rule(CenterKind::Curve, true).is_excluded());
        assert!(!quotient_center_rule(CenterKind::Curve, false).is_excluded());
        assert!(!quotient_center_rule(CenterKind::Point, true).is_excluded());
    }

    fn double_projection_l2() -> MultiQuadratic {
        build_l2_expression(
            &rint(6),
            &[
                FixedCurveDatum {
                    symbol: "b".to_string(),
                    a_pairing: rint(0),
                },
                FixedCurveDatum {
                    symbol: "a".to_string(),
                    a_pairing: rat(1, 2),
                },
            ],
            &[
                vec![Some(rint(-2)), Some(rint(1))],
                vec![Some(rint(1)), Some(rat(-7, 4))],
            ],
        )
        .unwrap()
    }

    #[test]
    fn l2_expression_matches_expected_expansion() {
        // 6 - 2 b^2 - (7/4) a^2 - a + 2 a b
        let l2 = double_projection_l2();
        assert_eq!(l2.constant, rint(6));
        assert_eq!(l2.linear_coeff(0), &rint(0));
        assert_eq!(l2.linear_coeff(1), &rint(-1));
        assert_eq!(l2.square_coeff(0), &rint(-2));
        assert_eq!(l2.square_coeff(1), &rat(-7, 4));
        assert_eq!(l2.cross_coeff(0, 1), rint(2));
    }

    #[test]
    fn l2_expression_trivial_cases() {
        let constant = build_l2_expression(&rint(7), &[], &[]).unwrap();
        assert_eq!(constant.eval(&[]), rint(7));

        let single = build_l2_expression(
            &rint(9),
            &[FixedCurveDatum {
                symbol: "g".to_string(),
                a_pairing: rat(3, 2),
            }],
            &[vec![Some(rint(-5))]],
        )
        .unwrap();
        // 9 - 3g - 5g^2? no: 9 - 2*(3/2) g + (-5) g^2 = 9 - 3g - 5g^2
        assert_eq!(single.eval(&[rint(1)]), rint(1));
        assert_eq!(single.linear_coeff(0), &rint(-3));
        assert_eq!(single.square_coeff(0), &rint(-5));
    }

    #[test]
    fn l2_expression_missing_pairing_is_an_error() {
        let err = build_l2_expression(
            &rint(6),
            &[
                FixedCurveDatum {
                    symbol: "b".to_string(),
                    a_pairing: rint(0),
                },
                FixedCurveDatum {
                    symbol: "a".to_string(),
                    a_pairing: rat(1, 2),
                },
            ],
            &[
                vec![Some(rint(-2)), None],
                vec![Some(rint(1)), Some(rat(-7, 4))],
            ],
        )
        .unwrap_err();
        assert!(matches!(err, ExclusionError::MissingPairing { i: 0, j: 1 }));
    }

    /// The two-parameter chain: threshold minus L^2, collected in the
    /// first symbol, must reproduce 2b^2 - 2b(4 - a) + (7/4)a^2 - 7a + 10.
    fn paper_beta_quadratic() -> ParamQuadratic {
        let l2 = double_projection_l2();
        let threshold = MultiQuadratic {
            symbols: vec!["b".to_string(), "a".to_string()],
            constant: rint(16),
            linear: vec![rint(-8), rint(-8)],
            gram: vec![vec![rint(0), rint(2)], vec![rint(2), rint(0)]],
        };
        threshold.sub(&l2).collect_quadratic_in_first().unwrap()
    }

    #[test]
    fn beta_quadratic_coefficients() {
        let pq = paper_beta_quadratic();
        assert_eq!(pq.lead(), &rint(2));
        assert_eq!(pq.linear(), &QuadraticForm::new(rint(0), rint(2), rint(-8)));
        assert_eq!(
            pq.constant(),
            &QuadraticForm::new(rat(7, 4), rint(-7), rint(10))
        );
    }

    #[test]
    fn discriminant_certificate_exact_values() {
        let pq = paper_beta_quadratic();
        let report = discriminant_infeasibility(&pq, &Interval::at_least(rint(0)));
        // Delta/4 = -(5/2) a^2 + 6a - 4
        assert_eq!(
            report.quarter_discriminant,
            QuadraticForm::new(rat(-5, 2), rint(6), rint(-4))
        );
        assert_eq!(report.alpha_star, Some(rat(6, 5)));
        assert_eq!(report.max_quarter_discriminant, Some(rat(-2, 5)));
        assert!(report.attained);
        assert!(report.infeasible);
        // completed square: -(5/2)(a - 6/5)^2 - 2/5, checked by expansion
        let (scale, shift, rest) = report.quarter_discriminant.completed_square().unwrap();
        assert_eq!((scale, shift, rest), (rat(-5, 2), rat(6, 5), rat(-2, 5)));
    }

    #[test]
    fn discriminant_no_parameter_dependence() {
        // 2x^2 + 2: Delta/4 = -4, infeasible
        let pq = ParamQuadratic::new(
            rint(2),
            QuadraticForm::constant(rint(0)),
            QuadraticForm::constant(rint(2)),
        )
        .unwrap();
        let report = discriminant_infeasibility(&pq, &Interval::at_least(rint(0)));
        assert_eq!(report.alpha_star, None);
        assert_eq!(report.max_quarter_discriminant, Some(rint(-4)));
        assert!(report.infeasible);
    }

    #[test]
    fn discriminant_zero_is_not_strict_infeasibility() {
        // x^2 - 2x + 1: Delta/4 = 0; the non-strict form is feasible, so
        // no strict-infeasibility certificate is issued
        let pq = ParamQuadratic::new(
            rint(1),
            QuadraticForm::constant(rint(-2)),
            QuadraticForm::constant(rint(1)),
        )
        .unwrap();
        let report = discriminant_infeasibility(&pq, &Interval::at_least(rint(0)));
        assert_eq!(report.max_quarter_discriminant, Some(rint(0)));
        assert!(!report.infeasible);
    }

    proptest::proptest! {
        /// For any case with positive A^2 and negative C^2 the computed
        /// bound is a genuine root of the nef quadratic and the verdict
        /// against 1 agrees with the sign of the quadratic there.
        #[test]
        fn gamma_max_satisfies_its_quadratic(
            asq_n in 1i64..200, adotc_n in -100i64..100, csq_n in -200i64..-1,
            den in 1i64..6,
        ) {
            let case = SurfaceCurveCase::new(
                rat(asq_n, den),
                rat(adotc_n, den),
                rat(csq_n, den),
                "random",
            );
            let bound = max_fixed_multiplicity(&case).unwrap();
            let q = &bound.quadratic;
            let base = bound.gamma_max.base();
            let coeff = bound.gamma_max.coeff();
            let disc = bound.gamma_max.disc();
            // substitute base + coeff*sqrt(disc): both components vanish
            let rational_part =
                &q.c2 * (base.square() + coeff.square() * disc) + &q.c1 * base + &q.c0;
            let radical_part = rint(2) * &q.c2 * base * coeff + &q.c1 * coeff;
            proptest::prop_assert!(rational_part.is_zero());
            proptest::prop_assert!(radical_part.is_zero());
            // sign of q at 1 matches the exact comparison (concave case)
            let at_one = q.eval(&Rat::one());
            match bound.vs_one {
                Ordering::Less => proptest::prop_assert!(at_one.is_negative()),
                Ordering::Equal => proptest::prop_assert!(at_one.is_zero()),
                Ordering::Greater => proptest::prop_assert!(at_one.is_positive()),
            }
        }
    }

    #[test]
    fn maximize_handles_interval_shapes() {
        // concave with vertex at 2
        let q = QuadraticForm::new(rint(-1), rint(4), rint(0));
        match maximize_quadratic(&q, &Interval::closed(rint(0), rint(1)).unwrap()) {
            Supremum::Finite {
                value,
                at,
                attained,
            } => {
                assert_eq!((value, at, attained), (rint(3), Some(rint(1)), true));
            }
            other => panic!("{other:?}"),
        }
        match maximize_quadratic(&q, &Interval::at_least(rint(0))) {
            Supremum::Finite { value, at, .. } => {
                assert_eq!((value, at), (rint(4), Some(rint(2))));
            }
            other => panic!("{other:?}"),
        }
        // vertex on an excluded endpoint: supremum not attained
        let iv = Interval::new(Bound::Exclusive(rint(2)), Bound::Unbounded).unwrap();
        match maximize_quadratic(&q, &iv) {
            Supremum::Finite {
                value, attained, ..
            } => {
                assert_eq!(value, rint(4));
                assert!(!attained);
            }
            other => panic!("{other:?}"),
        }
        // convex on an unbounded range
        let convex = QuadraticForm::new(rint(1), rint(0), rint(-1));
        assert_eq!(
            maximize_quadratic(&convex, &Interval::at_least(rint(0))),
            Supremum::Infinite
        );
        // convex on a closed range: endpoint comparison
        match maximize_quadratic(&convex, &Interval::closed(rint(-1), rint(3)).unwrap()) {
            Supremum::Finite { value, at, .. } => {
                assert_eq!((value, at), (rint(8), Some(rint(3))));
            }
            other => panic!("{other:?}"),
        }
        assert!(Interval::closed(rint(2), rint(1)).is_err());
    }
}
