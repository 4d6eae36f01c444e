//! Weighted complete intersection families and their Hilbert series.
//!
//! A [`Family`] is an ambient weighted projective space together with one
//! equation degree (hypersurface, 5 weights) or two (codimension-2
//! complete intersection, 6 weights). Its Hilbert series is the expansion
//! of
//!
//! ```text
//! prod_j (1 - t^{d_j}) / prod_i (1 - t^{w_i})
//! ```
//!
//! For a family of Fano index 1 (`sum w - sum d = 1`) the anticanonical
//! cube is `prod d / prod w`, and the series enumerates anticanonical
//! sections; [`search_candidates`] inverts this, recovering all families
//! whose invariants match a given Riemann-Roch target.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::Rat;
use crate::rr::FanoNumerics;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("weight system must be nonempty with positive weights")]
    InvalidWeights,
    #[error("a family has 5 weights and 1 degree, or 6 weights and 2 degrees; got {weights} weights and {degrees} degrees")]
    BadShape { weights: usize, degrees: usize },
    #[error("equation degrees must be positive")]
    NonPositiveDegree,
    #[error("series coefficient at degree {degree} is negative ({value}); not a graded ring")]
    NegativeCoefficient { degree: u64, value: BigInt },
    #[error("operation requires Fano index 1, family has index {index}")]
    IndexNotOne { index: i64 },
}

/// Ambient weights, stored sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSystem {
    weights: Vec<u32>,
}

impl WeightSystem {
    pub fn new(weights: impl Into<Vec<u32>>) -> Result<Self, FamilyError> {
        let mut weights = weights.into();
        if weights.is_empty() || weights.contains(&0) {
            return Err(FamilyError::InvalidWeights);
        }
        weights.sort_unstable();
        Ok(WeightSystem { weights })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }

    pub fn product(&self) -> BigInt {
        self.weights
            .iter()
            .fold(BigInt::one(), |acc, &w| acc * BigInt::from(w))
    }

    /// Standard well-formedness: omitting any one weight, the rest are
    /// coprime. This rules out global quotients and fake weightings like
    /// `(2,2,2,2,4)`.
    pub fn is_well_formed(&self) -> bool {
        (0..self.weights.len()).all(|skip| {
            let g = self
                .weights
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .fold(0u32, |acc, (_, &w)| acc.gcd(&w));
            g == 1
        })
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "P({})", parts.join(","))
    }
}

/// A weighted hypersurface or codimension-2 weighted complete
/// intersection: ambient weights plus equation degrees (sorted, `d1 <= d2`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Family {
    ambient: WeightSystem,
    degrees: Vec<u32>,
}

impl Family {
    pub fn new(ambient: WeightSystem, degrees: impl Into<Vec<u32>>) -> Result<Self, FamilyError> {
        let mut degrees = degrees.into();
        if degrees.contains(&0) {
            return Err(FamilyError::NonPositiveDegree);
        }
        match (ambient.len(), degrees.len()) {
            (5, 1) | (6, 2) => {}
            (w, d) => {
                return Err(FamilyError::BadShape {
                    weights: w,
                    degrees: d,
                })
            }
        }
        degrees.sort_unstable();
        Ok(Family { ambient, degrees })
    }

    /// Convenience constructor from raw lists.
    pub fn from_raw(weights: &[u32], degrees: &[u32]) -> Result<Self, FamilyError> {
        Family::new(WeightSystem::new(weights.to_vec())?, degrees.to_vec())
    }

    pub fn ambient(&self) -> &WeightSystem {
        &self.ambient
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn codimension(&self) -> usize {
        self.degrees.len()
    }

    /// `sum of weights - sum of degrees`; index 1 means `-K = O(1)`.
    pub fn fano_index(&self) -> i64 {
        self.ambient.sum() as i64 - self.degrees.iter().map(|&d| i64::from(d)).sum::<i64>()
    }

    /// `(-K)^3 = prod d / prod w` for an index-1 family.
    pub fn anticanonical_cube(&self) -> Result<Rat, FamilyError> {
        let index = self.fano_index();
        if index != 1 {
            return Err(FamilyError::IndexNotOne { index });
        }
        Ok(self.degree_over_weight_ratio())
    }

    /// `prod d / prod w`, the cube of `O(1)` on the intersection.
    fn degree_over_weight_ratio(&self) -> Rat {
        let dprod = self
            .degrees
            .iter()
            .fold(BigInt::one(), |acc, &d| acc * BigInt::from(d));
        Rat::from_big(dprod, self.ambient.product())
    }

    /// Coefficients of `prod(1 - t^d) / prod(1 - t^w)` up to degree
    /// `n_max`. A negative coefficient (impossible for a genuine graded
    /// ring) is reported as an error naming the offending degree.
    pub fn hilbert_series(&self, n_max: u64) -> Result<HilbertSequence, FamilyError> {
        let n = n_max as usize;
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::one();
        // numerator: multiply by (1 - t^d)
        for &d in &self.degrees {
            let d = d as usize;
            if d > n {
                continue;
            }
            for i in (d..=n).rev() {
                let lower = c[i - d].clone();
                c[i] -= lower;
            }
        }
        // denominator: divide by (1 - t^w), i.e. running sums with stride w
        for &w in self.ambient.weights() {
            let w = w as usize;
            if w > n {
                continue;
            }
            for i in w..=n {
                let lower = c[i - w].clone();
                c[i] += lower;
            }
        }
        if let Some((degree, value)) = c.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(FamilyError::NegativeCoefficient {
                degree: degree as u64,
                value: value.clone(),
            });
        }
        Ok(HilbertSequence { values: c })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self
            .ambient
            .weights()
            .iter()
            .map(|x| x.to_string())
            .collect();
        let d: Vec<String> = self.degrees.iter().map(|x| x.to_string()).collect();
        write!(f, "({}; {})", w.join(","), d.join(","))
    }
}

/// Hilbert series coefficients, exact nonnegative integers with
/// `values[0] = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSequence {
    values: Vec<BigInt>,
}

impl HilbertSequence {
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Term-by-term comparison against exact rationals.
    pub fn matches_rationals(&self, other: &[Rat]) -> bool {
        self.values.len() == other.len()
            && self
                .values
                .iter()
                .zip(other)
                .all(|(v, r)| &Rat::from(v.clone()) == r)
    }
}

/// Which enumeration shape to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Codimension {
    One,
    Two,
}

impl Codimension {
    pub fn weight_count(self) -> usize {
        match self {
            Codimension::One => 5,
            Codimension::Two => 6,
        }
    }
}

/// Knobs for [`search_with`]. `depth = None` matches each candidate to
/// `max(10, 2 * sum of weights)` terms; the depth actually used is
/// recorded on each match.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub index: i64,
    pub depth: Option<u64>,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            index: 1,
            depth: None,
            jobs: 1,
        }
    }
}

/// A family matching the target, with the series depth that was checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchMatch {
    pub family: Family,
    pub depth: u64,
}

/// All well-formed families of the requested shape, with weights bounded
/// by `max_weight`, matching `target` exactly: same anticanonical cube and
/// the same Hilbert sequence to `n_match` terms. Output is sorted
/// lexicographically by (weights, degrees) and is deterministic.
pub fn search_candidates(
    target: &FanoNumerics,
    codim: Codimension,
    max_weight: u32,
    n_match: u64,
) -> Vec<Family> {
    let opts = SearchOptions {
        depth: Some(n_match),
        ..SearchOptions::default()
    };
    search_with(target, codim, max_weight, &opts)
        .into_iter()
        .map(|m| m.family)
        .collect()
}

/// The full search. Candidates may be evaluated in parallel (`jobs > 1`);
/// the result is sorted and identical for every thread count.
pub fn search_with(
    target: &FanoNumerics,
    codim: Codimension,
    max_weight: u32,
    opts: &SearchOptions,
) -> Vec<SearchMatch> {
    let weight_lists = ascending_tuples(codim.weight_count(), max_weight.max(1));
    let jobs = opts.jobs.max(1);

    let mut matches: Vec<SearchMatch> = if jobs == 1 {
        weight_lists
            .iter()
            .flat_map(|w| evaluate_weights(target, w, opts))
            .collect()
    } else {
        let chunk = weight_lists.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = weight_lists
                .chunks(chunk.max(1))
                .map(|slice| {
                    scope.spawn(move || {
                        slice
                            .iter()
                            .flat_map(|w| evaluate_weights(target, w, opts))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        })
    };

    matches.sort_by(|a, b| a.family.cmp(&b.family));
    matches.dedup_by(|a, b| a.family == b.family);
    matches
}

/// Every nondecreasing `len`-tuple with entries in `1..=max`.
fn ascending_tuples(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, len: usize, lo: u32, max: u32) {
        if current.len() == len {
            out.push(current.clone());
            return;
        }
        for w in lo..=max {
            current.push(w);
            rec(out, current, len, w, max);
            current.pop();
        }
    }
    rec(&mut out, &mut current, len, 1, max);
    out
}

/// All matches for one (sorted) weight list.
fn evaluate_weights(
    target: &FanoNumerics,
    weights: &[u32],
    opts: &SearchOptions,
) -> Vec<SearchMatch> {
    let Ok(ws) = WeightSystem::new(weights.to_vec()) else {
        return Vec::new();
    };
    if !ws.is_well_formed() {
        return Vec::new();
    }
    let total_degree = ws.sum() as i64 - opts.index;
    if total_degree < 1 {
        return Vec::new();
    }
    let splits: Vec<Vec<u32>> = match ws.len() {
        5 => vec![vec![total_degree as u32]],
        6 => (1..=(total_degree / 2))
            .map(|d1| vec![d1 as u32, (total_degree - d1) as u32])
            .collect(),
        _ => Vec::new(),
    };
    let mut found = Vec::new();
    for degrees in splits {
        // a degree equal to a weight is a linear cone; prune
        if degrees.iter().any(|d| ws.weights().contains(d)) {
            continue;
        }
        let Ok(family) = Family::new(ws.clone(), degrees) else {
            continue;
        };
        if let Some(m) = try_match(target, family, opts) {
            found.push(m);
        }
    }
    found
}

/// Cube filter, then term-by-term series comparison.
fn try_match(target: &FanoNumerics, family: Family, opts: &SearchOptions) -> Option<SearchMatch> {
    let index = opts.index;
    debug_assert_eq!(family.fano_index(), index);
    // (-K)^3 = index^3 * prod d / prod w when -K = O(index)
    let cube = Rat::from(index).cube() * family.degree_over_weight_ratio();
    if &cube != target.kcube() {
        return None;
    }
    let depth = opts
        .depth
        .unwrap_or_else(|| 10u64.max(2 * family.ambient().sum()));
    let series = family.hilbert_series(depth * index.unsigned_abs()).ok()?;
    let rr = target.hilbert_sequence(depth);
    let step = index as usize;
    let sampled: Vec<BigInt> = series
        .values()
        .iter()
        .step_by(step.max(1))
        .cloned()
        .collect();
    if sampled.len() != rr.values.len() {
        return None;
    }
    if !rr
        .values
        .iter()
        .zip(&sampled)
        .all(|(r, s)| r == &Rat::from(s.clone()))
    {
        return None;
    }
    Some(SearchMatch { family, depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};
    use crate::rr::Basket;

    fn fam(w: &[u32], d: &[u32]) -> Family {
        Family::from_raw(w, d).unwrap()
    }

    /// Test-only oracle: the number of exponent tuples of weighted degree
    /// `n`, by direct enumeration (no generating functions).
    fn count_monomials(weights: &[u32], n: i64) -> i64 {
        if n < 0 {
            return 0;
        }
        match weights.split_first() {
            None => i64::from(n == 0),
            Some((&w, rest)) => {
                let mut total = 0;
                let mut remaining = n;
                while remaining >= 0 {
                    total += count_monomials(rest, remaining);
                    remaining -= i64::from(w);
                }
                total
            }
        }
    }

    /// Oracle for the series coefficient by inclusion-exclusion over the
    /// equation degrees.
    fn series_oracle(family: &Family, n: u64) -> i64 {
        let w = family.ambient().weights();
        let n = n as i64;
        match family.degrees() {
            [d] => count_monomials(w, n) - count_monomials(w, n - i64::from(*d)),
            [d1, d2] => {
                count_monomials(w, n)
                    - count_monomials(w, n - i64::from(*d1))
                    - count_monomials(w, n - i64::from(*d2))
                    + count_monomials(w, n - i64::from(*d1) - i64::from(*d2))
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn well_formedness() {
        assert!(WeightSystem::new(vec![1, 1, 1, 1, 2])
            .unwrap()
            .is_well_formed());
        assert!(WeightSystem::new(vec![1, 1, 1, 1, 2, 2])
            .unwrap()
            .is_well_formed());
        assert!(!WeightSystem::new(vec![2, 2, 2, 2, 4])
            .unwrap()
            .is_well_formed());
        // no 4 of the 5 may share a factor
        assert!(!WeightSystem::new(vec![1, 2, 2, 2, 2])
            .unwrap()
            .is_well_formed());
    }

    #[test]
    fn family_shape_is_enforced() {
        assert!(Family::from_raw(&[1, 1, 1, 1, 1], &[4]).is_ok());
        assert!(Family::from_raw(&[1, 1, 1, 1, 2, 2], &[3, 4]).is_ok());
        assert!(matches!(
            Family::from_raw(&[1, 1, 1, 1, 1], &[2, 2]),
            Err(FamilyError::BadShape { .. })
        ));
        assert!(matches!(
            Family::from_raw(&[1, 1, 1, 1, 1, 1], &[5]),
            Err(FamilyError::BadShape { .. })
        ));
    }

    #[test]
    fn series_fixtures() {
        let z5 = fam(&[1, 1, 1, 1, 2], &[5]);
        let s = z5.hilbert_series(2).unwrap();
        assert_eq!(s.values(), &[1.into(), 4.into(), 11.into()]);

        let x4 = fam(&[1, 1, 1, 1, 1], &[4]);
        let s = x4.hilbert_series(1).unwrap();
        assert_eq!(s.values(), &[1.into(), 5.into()]);

        let y34 = fam(&[1, 1, 1, 1, 2, 2], &[3, 4]);
        let s = y34.hilbert_series(1).unwrap();
        assert_eq!(s.values(), &[1.into(), 4.into()]);
    }

    #[test]
    fn series_matches_enumeration_oracle() {
        let families = [
            fam(&[1, 1, 1, 1, 1], &[4]),
            fam(&[1, 1, 1, 1, 2], &[5]),
            fam(&[1, 1, 1, 1, 2, 2], &[3, 4]),
            fam(&[1, 1, 1, 2, 3], &[7]),
            fam(&[1, 1, 2, 3, 3], &[9]),
            fam(&[1, 1, 2, 3, 3, 4], &[6, 7]),
            fam(&[1, 1, 2, 5, 7], &[15]),
            fam(&[1, 2, 5, 6, 7], &[20]),
            fam(&[1, 2, 5, 6, 7, 9], &[14, 15]),
            fam(&[1, 1, 1, 3, 5], &[10]),
        ];
        for family in &families {
            let series = family.hilbert_series(12).unwrap();
            for n in 0..=12u64 {
                assert_eq!(
                    series.values()[n as usize],
                    BigInt::from(series_oracle(family, n)),
                    "{family} at degree {n}"
                );
            }
        }
    }

    #[test]
    fn first_coefficient_counts_linear_forms() {
        let families = [
            fam(&[1, 1, 1, 1, 2], &[5]),
            fam(&[1, 1, 2, 3, 3], &[9]),
            fam(&[1, 2, 5, 6, 7, 9], &[14, 15]),
        ];
        for family in &families {
            let ones = family
                .ambient()
                .weights()
                .iter()
                .filter(|&&w| w == 1)
                .count() as i64;
            let deg1 = family.degrees().iter().filter(|&&d| d == 1).count() as i64;
            let s = family.hilbert_series(1).unwrap();
            assert!(s.values()[1] >= BigInt::from(ones - deg1));
        }
    }

    #[test]
    fn negative_coefficient_is_flagged() {
        let garbage = fam(&[2, 2, 2, 2, 2], &[1]);
        match garbage.hilbert_series(4) {
            Err(FamilyError::NegativeCoefficient { degree: 1, value }) => {
                assert_eq!(value, BigInt::from(-1));
            }
            other => panic!("expected negative coefficient error, got {other:?}"),
        }
    }

    #[test]
    fn fano_index_examples() {
        assert_eq!(fam(&[1, 1, 1, 1, 2], &[5]).fano_index(), 1);
        assert_eq!(fam(&[1, 1, 1, 1, 2, 2], &[3, 4]).fano_index(), 1);
        assert_eq!(fam(&[1, 1, 1, 1, 1], &[5]).fano_index(), 0);
    }

    #[test]
    fn anticanonical_cube_examples() {
        assert_eq!(
            fam(&[1, 1, 1, 1, 2], &[5]).anticanonical_cube().unwrap(),
            rat(5, 2)
        );
        assert_eq!(
            fam(&[1, 1, 1, 1, 2, 2], &[3, 4])
                .anticanonical_cube()
                .unwrap(),
            rint(3)
        );
        assert_eq!(
            fam(&[1, 1, 1, 1, 1], &[4]).anticanonical_cube().unwrap(),
            rint(4)
        );
        assert!(matches!(
            fam(&[1, 1, 1, 1, 1], &[5]).anticanonical_cube(),
            Err(FamilyError::IndexNotOne { index: 0 })
        ));
    }

    fn target(genus: i64, pairs: &[(u32, u32)]) -> FanoNumerics {
        FanoNumerics::from_genus_basket(genus, Basket::from_pairs(pairs).unwrap()).unwrap()
    }

    #[test]
    fn search_recovers_z5() {
        let found = search_candidates(&target(2, &[(2, 1)]), Codimension::One, 6, 10);
        assert_eq!(found, vec![fam(&[1, 1, 1, 1, 2], &[5])]);
    }

    #[test]
    fn search_recovers_y34() {
        let found = search_candidates(&target(2, &[(2, 1), (2, 1)]), Codimension::Two, 6, 10);
        assert!(found.contains(&fam(&[1, 1, 1, 1, 2, 2], &[3, 4])));
    }

    #[test]
    fn search_recovers_the_quartic() {
        let found = search_candidates(&target(3, &[]), Codimension::One, 6, 10);
        assert!(found.contains(&fam(&[1, 1, 1, 1, 1], &[4])));
    }

    #[test]
    fn search_results_are_self_consistent() {
        let t = target(2, &[(2, 1)]);
        for family in search_candidates(&t, Codimension::One, 8, 12) {
            assert_eq!(&family.anticanonical_cube().unwrap(), t.kcube());
            let series = family.hilbert_series(12).unwrap();
            assert!(series.matches_rationals(&t.hilbert_sequence(12).values));
        }
    }

    #[test]
    fn search_is_deterministic_across_thread_counts() {
        let t = target(2, &[(2, 1), (2, 1)]);
        let run = |jobs| {
            search_with(
                &t,
                Codimension::Two,
                6,
                &SearchOptions {
                    jobs,
                    depth: Some(10),
                    ..SearchOptions::default()
                },
            )
        };
        let one = run(1);
        let eight = run(8);
        assert_eq!(one, eight);
        assert!(!one.is_empty());
    }

    #[test]
    fn auto_depth_is_recorded() {
        let t = target(2, &[(2, 1)]);
        let matches = search_with(&t, Codimension::One, 6, &SearchOptions::default());
        assert_eq!(matches.len(), 1);
        // sum of weights is 6, so the automatic depth is max(10, 12) = 12
        assert_eq!(matches[0].depth, 12);
    }

    proptest::proptest! {
        /// Random small families agree with the enumeration oracle and
        /// start at 1.
        #[test]
        fn series_oracle_agreement_random(
            mut weights in proptest::collection::vec(1u32..=5, 5),
            extra in 0u32..=4,
            two_equations in proptest::bool::ANY,
        ) {
            if two_equations {
                weights.push(1 + extra);
            }
            let degrees: Vec<u32> = if two_equations {
                vec![2 + extra % 3, 3 + extra]
            } else {
                vec![2 + extra]
            };
            let family = Family::from_raw(&weights, &degrees).unwrap();
            if let Ok(series) = family.hilbert_series(8) {
                proptest::prop_assert_eq!(series.values()[0].clone(), BigInt::from(1));
                for n in 0..=8u64 {
                    proptest::prop_assert_eq!(
                        series.values()[n as usize].clone(),
                        BigInt::from(series_oracle(&family, n))
                    );
                }
            }
        }
    }

    #[test]
    fn linear_cones_are_pruned() {
        // no returned family may have an equation degree equal to an
        // ambient weight (that shape is a cone over a smaller family)
        for codim in [Codimension::One, Codimension::Two] {
            for t in [
                target(2, &[(2, 1), (2, 1)]),
                target(3, &[]),
                target(2, &[(2, 1)]),
            ] {
                for f in search_candidates(&t, codim, 6, 10) {
                    assert!(f
                        .degrees()
                        .iter()
                        .all(|d| !f.ambient().weights().contains(d)));
                }
            }
        }
    }
}
