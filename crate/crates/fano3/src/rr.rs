//! Orbifold Riemann-Roch for Fano 3-folds with terminal quotient baskets.
//!
//! A basket entry `1/r(a, r-a, 1)` contributes `a(r-a)/r` to the
//! anticanonical cube and a periodic local term to every section count.
//! With `g` the genus and the sum running over the basket:
//!
//! ```text
//! (-K)^3   = 2g - 2 + sum a(r-a)/r
//! h0(-nK)  = (1/12) n(n+1)(2n+1) (-K)^3 + (2n+1) - sum l_Q(n+1)
//! l_Q(n)   = sum_{k=1}^{n-1} kb(r - kb)/(2r)      (kb = residue of k*a mod r)
//! h0(-K)   = g + 2
//! ```
//!
//! Everything is exact; `h0` values are returned as rationals together with
//! an integrality flag so that searches can use "integral for all n <= N"
//! as a pruning predicate instead of failing on inconsistent input.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{rint, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RrError {
    #[error("invalid quotient singularity 1/{r}({a}): {reason}")]
    InvalidSingularity {
        r: u32,
        a: u32,
        reason: &'static str,
    },
    #[error("not a Fano candidate: anticanonical cube {kcube} is not positive")]
    NotFanoCandidate { kcube: Rat },
    #[error("stated anticanonical cube {stated} does not match 2g-2 + basket sum = {computed}")]
    CubeMismatch { stated: Rat, computed: Rat },
    #[error("h0(-K) = {h0} does not bound a Fano anticanonical space (need h0 >= 2)")]
    GenusDomain { h0: i64 },
}

/// A terminal quotient point `1/r(a, r-a, 1)`.
///
/// The pairs `(r, a)` and `(r, r-a)` define equal local contributions for
/// every `n`, so entries are normalized to `a <= r/2` for equality and
/// storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuotientSingularity {
    r: u32,
    a: u32,
}

impl QuotientSingularity {
    pub fn new(r: u32, a: u32) -> Result<Self, RrError> {
        if r < 2 {
            return Err(RrError::InvalidSingularity {
                r,
                a,
                reason: "index must be at least 2",
            });
        }
        if a == 0 || a >= r {
            return Err(RrError::InvalidSingularity {
                r,
                a,
                reason: "weight must satisfy 1 <= a <= r-1",
            });
        }
        if a.gcd(&r) != 1 {
            return Err(RrError::InvalidSingularity {
                r,
                a,
                reason: "weight must be coprime to the index",
            });
        }
        Ok(QuotientSingularity { r, a })
    }

    pub fn index(&self) -> u32 {
        self.r
    }

    pub fn weight(&self) -> u32 {
        self.a
    }

    /// The representative with `a <= r/2`.
    pub fn normalized(&self) -> Self {
        if self.a * 2 > self.r {
            QuotientSingularity {
                r: self.r,
                a: self.r - self.a,
            }
        } else {
            *self
        }
    }

    /// Contribution `a(r-a)/r` to the anticanonical cube.
    pub fn cube_term(&self) -> Rat {
        let r = i64::from(self.r);
        let a = i64::from(self.a);
        Rat::new(a * (r - a), r)
    }

    /// The local Riemann-Roch correction
    /// `l_Q(n) = sum_{k=1}^{n-1} kb(r - kb)/(2r)` with `kb = k*a mod r`.
    ///
    /// The summand is periodic in `k` with period `r` and vanishes at
    /// multiples of `r`, so for `n > r` the sum folds to whole periods of
    /// `l_Q(r+1)` plus a remainder; both routes are exact.
    pub fn local_contribution(&self, n: u64) -> Rat {
        if n <= 1 {
            return Rat::zero();
        }
        let r = u64::from(self.r);
        let terms = n - 1;
        if terms >= r {
            let periods = terms / r;
            let rest = terms % r;
            let per_period = self.partial_sum(r);
            return rint(periods as i64) * per_period + self.partial_sum(rest);
        }
        self.partial_sum(terms)
    }

    /// `sum_{k=1}^{terms} kb(r - kb)/(2r)` by direct summation, `terms <= r`.
    fn partial_sum(&self, terms: u64) -> Rat {
        let r = u128::from(self.r);
        let a = u128::from(self.a);
        let mut numer: u128 = 0;
        for k in 1..=u128::from(terms) {
            let kb = (k * a) % r;
            numer += kb * (r - kb);
        }
        // sum of <= r terms, each < r^2/4: fits u128 for any u32 index
        Rat::from_big(numer.into(), (2 * r).into())
    }
}

impl fmt::Display for QuotientSingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}({},{},1)", self.r, self.a, self.r - self.a)
    }
}

/// A multiset of quotient singularities. Order-insensitive; the empty
/// basket is the Gorenstein case.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Basket {
    entries: Vec<QuotientSingularity>,
}

impl Basket {
    pub fn empty() -> Self {
        Basket::default()
    }

    /// Builds a basket, normalizing each entry to `a <= r/2` and sorting,
    /// so equality is multiset equality.
    pub fn new(entries: impl IntoIterator<Item = QuotientSingularity>) -> Self {
        let mut entries: Vec<_> = entries.into_iter().map(|q| q.normalized()).collect();
        entries.sort();
        Basket { entries }
    }

    /// Convenience constructor from `(r, a)` pairs.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self, RrError> {
        let entries = pairs
            .iter()
            .map(|&(r, a)| QuotientSingularity::new(r, a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Basket::new(entries))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &QuotientSingularity> {
        self.entries.iter()
    }

    /// `sum a(r-a)/r` over the basket.
    pub fn cube_sum(&self) -> Rat {
        self.entries.iter().map(|q| q.cube_term()).sum()
    }

    /// `sum l_Q(n)` over the basket.
    pub fn local_sum(&self, n: u64) -> Rat {
        self.entries.iter().map(|q| q.local_contribution(n)).sum()
    }
}

impl fmt::Display for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "empty");
        }
        let parts: Vec<String> = self.entries.iter().map(|q| q.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(-K)^3 = 2g - 2 + sum a(r-a)/r`, for any genus and basket.
///
/// A nonpositive result means "not a Fano candidate"; this function still
/// returns it so callers can report the defect instead of aborting.
pub fn anticanonical_cube(genus: i64, basket: &Basket) -> Rat {
    rint(2 * genus - 2) + basket.cube_sum()
}

/// `g = h0(-K) - 2`.
pub fn genus_from_h0(h0_of_minus_k: i64) -> Result<i64, RrError> {
    if h0_of_minus_k < 2 {
        return Err(RrError::GenusDomain { h0: h0_of_minus_k });
    }
    Ok(h0_of_minus_k - 2)
}

/// One value of the plurianticanonical section count, with its
/// integrality flag. For genuine Fano numerics the value is a nonnegative
/// integer; for inconsistent input the exact rational is still reported.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct H0Value {
    pub value: Rat,
    pub integral: bool,
}

/// Defects found while evaluating a Hilbert sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SequenceDefect {
    NonInteger { n: u64 },
    Negative { n: u64 },
}

/// The sequence `h0(-nK)` for `n = 0..=n_max`, as exact rationals, with any
/// non-integer or negative entries flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RrSequence {
    pub values: Vec<Rat>,
    pub defects: Vec<SequenceDefect>,
}

impl RrSequence {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }
}

/// The complete Riemann-Roch input for one Fano 3-fold: genus,
/// anticanonical cube and basket, tied together by
/// `(-K)^3 = 2g - 2 + sum a(r-a)/r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoNumerics {
    genus: i64,
    kcube: Rat,
    basket: Basket,
}

impl FanoNumerics {
    /// Computes the cube from the defining relation; errors when the
    /// result is not positive.
    pub fn from_genus_basket(genus: i64, basket: Basket) -> Result<Self, RrError> {
        let kcube = anticanonical_cube(genus, &basket);
        if !kcube.is_positive() {
            return Err(RrError::NotFanoCandidate { kcube });
        }
        Ok(FanoNumerics {
            genus,
            kcube,
            basket,
        })
    }

    /// Validates an explicitly stated cube against the defining relation.
    pub fn new(genus: i64, kcube: Rat, basket: Basket) -> Result<Self, RrError> {
        let computed = anticanonical_cube(genus, &basket);
        if kcube != computed {
            return Err(RrError::CubeMismatch {
                stated: kcube,
                computed,
            });
        }
        Self::from_genus_basket(genus, basket)
    }

    pub fn genus(&self) -> i64 {
        self.genus
    }

    pub fn kcube(&self) -> &Rat {
        &self.kcube
    }

    pub fn basket(&self) -> &Basket {
        &self.basket
    }

    /// `h0(-nK) = (1/12) n(n+1)(2n+1) (-K)^3 + (2n+1) - sum l_Q(n+1)`.
    pub fn h0_anticanonical(&self, n: u64) -> H0Value {
        let big = BigInt::from(n);
        let odd = BigInt::from(2) * &big + 1;
        let poly = Rat::from_big(&big * (&big + 1) * &odd, BigInt::from(12)) * &self.kcube;
        let value = poly + Rat::from(odd) - self.basket.local_sum(n + 1);
        let integral = value.is_nonnegative_integer();
        H0Value { value, integral }
    }

    /// `h0(-nK)` for `n = 0..=n_max`.
    pub fn hilbert_sequence(&self, n_max: u64) -> RrSequence {
        let mut values = Vec::with_capacity(n_max as usize + 1);
        let mut defects = Vec::new();
        for n in 0..=n_max {
            let h = self.h0_anticanonical(n);
            if !h.value.is_integer() {
                defects.push(SequenceDefect::NonInteger { n });
            } else if h.value.is_negative() {
                defects.push(SequenceDefect::Negative { n });
            }
            values.push(h.value);
        }
        RrSequence { values, defects }
    }
}

impl fmt::Display for FanoNumerics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "genus {}, (-K)^3 = {}, basket {}",
            self.genus, self.kcube, self.basket
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn q(r: u32, a: u32) -> QuotientSingularity {
        QuotientSingularity::new(r, a).unwrap()
    }

    /// Test-only reference: the local contribution summed term by term,
    /// never folding periods, with plain integer accumulation.
    fn local_contribution_naive(r: u64, a: u64, n: u64) -> Rat {
        let mut total = Rat::zero();
        for k in 1..n.max(1) {
            let kb = (k * a) % r;
            total += Rat::from_big((kb * (r - kb)).into(), (2 * r).into());
        }
        total
    }

    #[test]
    fn singularity_validation() {
        assert!(QuotientSingularity::new(1, 1).is_err());
        assert!(QuotientSingularity::new(4, 2).is_err());
        assert!(QuotientSingularity::new(4, 0).is_err());
        assert!(QuotientSingularity::new(4, 4).is_err());
        assert!(QuotientSingularity::new(4, 3).is_ok());
    }

    #[test]
    fn local_contribution_small_values() {
        assert_eq!(q(2, 1).local_contribution(0), Rat::zero());
        assert_eq!(q(2, 1).local_contribution(1), Rat::zero());
        assert_eq!(q(2, 1).local_contribution(2), rat(1, 4));
        assert_eq!(q(3, 1).local_contribution(3), rat(2, 3));
    }

    #[test]
    fn local_contribution_matches_naive_sum() {
        for r in 2..=12u32 {
            for a in 1..r {
                if a.gcd(&r) != 1 {
                    continue;
                }
                let sing = q(r, a);
                for n in 0..=60u64 {
                    assert_eq!(
                        sing.local_contribution(n),
                        local_contribution_naive(r.into(), a.into(), n),
                        "1/{r}({a}), n = {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn local_contribution_symmetry_and_periodicity() {
        for r in 2..=12u32 {
            for a in 1..r {
                if a.gcd(&r) != 1 {
                    continue;
                }
                let s = q(r, a);
                let mirror = q(r, r - a);
                let period = s.local_contribution(u64::from(r) + 1);
                for n in 0..=60u64 {
                    assert_eq!(s.local_contribution(n), mirror.local_contribution(n));
                    assert_eq!(
                        s.local_contribution(n + u64::from(r)),
                        s.local_contribution(n) + period.clone()
                    );
                }
            }
        }
    }

    #[test]
    fn anticanonical_cube_fixtures() {
        assert_eq!(anticanonical_cube(3, &Basket::empty()), rint(4));
        assert_eq!(
            anticanonical_cube(2, &Basket::from_pairs(&[(2, 1)]).unwrap()),
            rat(5, 2)
        );
        assert_eq!(
            anticanonical_cube(2, &Basket::from_pairs(&[(2, 1), (2, 1)]).unwrap()),
            rint(3)
        );
    }

    #[test]
    fn nonpositive_cube_is_flagged() {
        let err = FanoNumerics::from_genus_basket(0, Basket::empty()).unwrap_err();
        assert!(matches!(err, RrError::NotFanoCandidate { .. }));
    }

    #[test]
    fn stated_cube_must_match() {
        let basket = Basket::from_pairs(&[(2, 1)]).unwrap();
        assert!(FanoNumerics::new(2, rat(5, 2), basket.clone()).is_ok());
        let err = FanoNumerics::new(2, rint(3), basket).unwrap_err();
        assert!(matches!(err, RrError::CubeMismatch { .. }));
    }

    #[test]
    fn h0_fixtures() {
        let z5 =
            FanoNumerics::from_genus_basket(2, Basket::from_pairs(&[(2, 1)]).unwrap()).unwrap();
        assert_eq!(z5.kcube(), &rat(5, 2));
        assert_eq!(z5.h0_anticanonical(0).value, rint(1));
        assert_eq!(z5.h0_anticanonical(1).value, rint(4));
        assert_eq!(z5.h0_anticanonical(2).value, rint(11));
        assert!(z5.h0_anticanonical(2).integral);

        let x4 = FanoNumerics::from_genus_basket(3, Basket::empty()).unwrap();
        assert_eq!(x4.hilbert_sequence(1).values, vec![rint(1), rint(5)]);
        assert_eq!(z5.hilbert_sequence(1).values, vec![rint(1), rint(4)]);
        assert_eq!(x4.hilbert_sequence(0).values, vec![rint(1)]);
    }

    #[test]
    fn h0_of_minus_k_is_genus_plus_two() {
        let baskets: Vec<Basket> = vec![
            Basket::empty(),
            Basket::from_pairs(&[(2, 1)]).unwrap(),
            Basket::from_pairs(&[(2, 1), (3, 1), (7, 3)]).unwrap(),
            Basket::from_pairs(&[(5, 2), (9, 4)]).unwrap(),
        ];
        for basket in baskets {
            for g in -1..=5i64 {
                let Ok(numerics) = FanoNumerics::from_genus_basket(g, basket.clone()) else {
                    continue;
                };
                assert_eq!(numerics.h0_anticanonical(1).value, rint(g + 2));
            }
        }
    }

    #[test]
    fn genus_from_h0_examples() {
        assert_eq!(genus_from_h0(4).unwrap(), 2);
        assert_eq!(genus_from_h0(5).unwrap(), 3);
        assert_eq!(genus_from_h0(2).unwrap(), 0);
        assert!(genus_from_h0(1).is_err());
    }

    #[test]
    fn basket_equality_is_multiset_with_mirror_normalization() {
        let b1 = Basket::new(vec![q(7, 3), q(2, 1)]);
        let b2 = Basket::new(vec![q(2, 1), q(7, 4)]);
        assert_eq!(b1, b2);
        let b3 = Basket::new(vec![q(2, 1), q(2, 1)]);
        assert_ne!(b1, b3);
        assert_ne!(Basket::new(vec![q(2, 1)]), b3);
    }

    #[test]
    fn sequence_defects_negative_entries_are_flagged() {
        // genus -5 with 25 half-points: cube = -12 + 25/2 = 1/2 > 0, but
        // h0(-K) = g + 2 = -3 < 0.
        let basket = Basket::new(vec![q(2, 1); 25]);
        let numerics = FanoNumerics::from_genus_basket(-5, basket).unwrap();
        let seq = numerics.hilbert_sequence(3);
        assert_eq!(seq.values[1], rint(-3));
        assert!(seq
            .defects
            .iter()
            .any(|d| matches!(d, SequenceDefect::Negative { n: 1 })));
    }
}
