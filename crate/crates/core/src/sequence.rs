//! Weight sequences for OWA-based rules and divisor sequences for divisor
//! methods. Both are infinite; they are represented by closed-form families
//! or by an explicit prefix followed by a simple tail.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, one, ratio, zero, Rational};

/// An infinite sequence `w_1, w_2, ...` of non-negative rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WeightSequence {
    /// `1, 1/2, 1/3, ...`
    Pav,
    /// `1, 0, 0, ...`
    ChamberlinCourant,
    /// `1, 1, 1, ...`
    TopK,
    /// `1, 1/4, 1/9, ...`
    Penrose,
    /// `1, 1/3, 1/5, ...`
    HarmonicOdd,
    /// `0, 0, 0, 0, z, 1, 1/2, 1/3, ...`
    Affine { z: Rational },
    /// `base` with its first `t` entries replaced by zero.
    Truncated { base: Box<WeightSequence>, t: usize },
    /// `prefix` followed by `tail` repeated forever.
    Explicit { prefix: Vec<Rational>, tail: Rational },
}

impl WeightSequence {
    /// Validated explicit sequence; every entry must be non-negative.
    pub fn explicit(prefix: Vec<Rational>, tail: Rational) -> Result<Self> {
        if prefix.iter().chain(core::iter::once(&tail)).any(Signed::is_negative) {
            return Err(Error::InvalidSequence(
                "weights must be non-negative".into(),
            ));
        }
        Ok(WeightSequence::Explicit { prefix, tail })
    }

    pub fn affine(z: Rational) -> Result<Self> {
        if z.is_negative() {
            return Err(Error::InvalidSequence("Z must be non-negative".into()));
        }
        Ok(WeightSequence::Affine { z })
    }

    pub fn truncated(base: WeightSequence, t: usize) -> Self {
        WeightSequence::Truncated {
            base: Box::new(base),
            t,
        }
    }

    /// `t` ones followed by zeros.
    pub fn t_best(t: usize) -> Self {
        WeightSequence::Explicit {
            prefix: (0..t).map(|_| one()).collect(),
            tail: zero(),
        }
    }

    /// A single one at position `t` (1-based), zeros elsewhere.
    pub fn t_median(t: usize) -> Self {
        assert!(t >= 1, "t-median needs t >= 1");
        let mut prefix: Vec<Rational> = (0..t).map(|_| zero()).collect();
        prefix[t - 1] = one();
        WeightSequence::Explicit {
            prefix,
            tail: zero(),
        }
    }

    /// `w_j` for `j >= 1`.
    pub fn weight_at(&self, j: usize) -> Rational {
        assert!(j >= 1, "weight sequences are indexed from 1");
        match self {
            WeightSequence::Pav => ratio(1, j as i64),
            WeightSequence::ChamberlinCourant => {
                if j == 1 {
                    one()
                } else {
                    zero()
                }
            }
            WeightSequence::TopK => one(),
            WeightSequence::Penrose => ratio(1, (j * j) as i64),
            WeightSequence::HarmonicOdd => ratio(1, 2 * j as i64 - 1),
            WeightSequence::Affine { z } => match j {
                1..=4 => zero(),
                5 => z.clone(),
                _ => ratio(1, j as i64 - 5),
            },
            WeightSequence::Truncated { base, t } => {
                if j <= *t {
                    zero()
                } else {
                    base.weight_at(j)
                }
            }
            WeightSequence::Explicit { prefix, tail } => {
                prefix.get(j - 1).cloned().unwrap_or_else(|| tail.clone())
            }
        }
    }

    /// `[0, w_1, w_1 + w_2, ..., w_1 + ... + w_len]`.
    pub fn prefix_sums(&self, len: usize) -> Vec<Rational> {
        let mut sums = Vec::with_capacity(len + 1);
        let mut acc = zero();
        sums.push(acc.clone());
        for j in 1..=len {
            acc += self.weight_at(j);
            sums.push(acc.clone());
        }
        sums
    }

    /// Smallest `j0` such that `w_j = 0` for every `j >= j0`, if any.
    fn zero_from(&self) -> Option<usize> {
        match self {
            WeightSequence::ChamberlinCourant => Some(2),
            WeightSequence::Explicit { prefix, tail } => {
                if !tail.is_zero() {
                    return None;
                }
                let last_nonzero = prefix.iter().rposition(|w| !w.is_zero());
                Some(last_nonzero.map_or(1, |i| i + 2))
            }
            WeightSequence::Truncated { base, t } => base
                .zero_from()
                .map(|z| if z <= t + 1 { 1 } else { z }),
            _ => None,
        }
    }

    /// Whether `w_j >= w_{j+1}` holds for every `j`.
    pub fn is_non_increasing(&self) -> bool {
        match self {
            WeightSequence::Pav
            | WeightSequence::ChamberlinCourant
            | WeightSequence::TopK
            | WeightSequence::Penrose
            | WeightSequence::HarmonicOdd => true,
            WeightSequence::Affine { .. } => false,
            WeightSequence::Truncated { base, t } => {
                if *t == 0 {
                    base.is_non_increasing()
                } else {
                    self.zero_from() == Some(1)
                }
            }
            WeightSequence::Explicit { prefix, tail } => {
                prefix.windows(2).all(|w| w[0] >= w[1])
                    && prefix.last().is_none_or(|last| last >= tail)
            }
        }
    }

    /// Whether every `w_j` is strictly positive.
    pub fn is_positive(&self) -> bool {
        match self {
            WeightSequence::Pav
            | WeightSequence::TopK
            | WeightSequence::Penrose
            | WeightSequence::HarmonicOdd => true,
            WeightSequence::ChamberlinCourant | WeightSequence::Affine { .. } => false,
            WeightSequence::Truncated { base, t } => *t == 0 && base.is_positive(),
            WeightSequence::Explicit { prefix, tail } => {
                tail.is_positive() && prefix.iter().all(Signed::is_positive)
            }
        }
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSequence::Pav => f.write_str("pav"),
            WeightSequence::ChamberlinCourant => f.write_str("cc"),
            WeightSequence::TopK => f.write_str("topk"),
            WeightSequence::Penrose => f.write_str("penrose"),
            WeightSequence::HarmonicOdd => f.write_str("harmonic-odd"),
            WeightSequence::Affine { z } => write!(f, "affine({z})"),
            WeightSequence::Truncated { base, t } => write!(f, "{base}[{t}]"),
            WeightSequence::Explicit { prefix, tail } => {
                for (i, w) in prefix.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{w}")?;
                }
                write!(f, ";tail={tail}")
            }
        }
    }
}

/// Generator behind a [`DivisorSequence`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DivisorFamily {
    /// `1, 2, 3, ...`
    DHondt,
    /// `1, 3, 5, ...`
    SainteLague,
    /// `d(s) = 1 / w_{s+1}`.
    FromWeights(WeightSequence),
    /// `prefix`, then `slope * s + intercept` for `s >= prefix.len()`.
    Explicit {
        prefix: Vec<Rational>,
        slope: Rational,
        intercept: Rational,
    },
}

/// A divisor sequence `d(0), d(1), ...`. When `impervious` is set, `d(0)` is
/// zero and the family supplies `d(s)` for `s >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorSequence {
    pub family: DivisorFamily,
    pub impervious: bool,
}

impl DivisorSequence {
    pub fn dhondt() -> Self {
        DivisorSequence {
            family: DivisorFamily::DHondt,
            impervious: false,
        }
    }

    pub fn sainte_lague() -> Self {
        DivisorSequence {
            family: DivisorFamily::SainteLague,
            impervious: false,
        }
    }

    pub fn from_weights(weights: WeightSequence) -> Self {
        DivisorSequence {
            family: DivisorFamily::FromWeights(weights),
            impervious: false,
        }
    }

    pub fn explicit(prefix: Vec<Rational>, slope: Rational, intercept: Rational) -> Self {
        DivisorSequence {
            family: DivisorFamily::Explicit {
                prefix,
                slope,
                intercept,
            },
            impervious: false,
        }
    }

    /// Adams' method: `d(s) = s`, impervious.
    pub fn adams() -> Self {
        DivisorSequence {
            family: DivisorFamily::Explicit {
                prefix: Vec::new(),
                slope: one(),
                intercept: zero(),
            },
            impervious: true,
        }
    }

    pub fn with_impervious(mut self, impervious: bool) -> Self {
        self.impervious = impervious;
        self
    }

    /// `d(s)`.
    pub fn divisor_at(&self, s: usize) -> Result<Rational> {
        if self.impervious && s == 0 {
            return Ok(zero());
        }
        Ok(match &self.family {
            DivisorFamily::DHondt => int(s as u64 + 1),
            DivisorFamily::SainteLague => int(2 * s as u64 + 1),
            DivisorFamily::FromWeights(w) => {
                let weight = w.weight_at(s + 1);
                if weight.is_zero() {
                    return Err(Error::UndefinedDivisor { index: s });
                }
                weight.recip()
            }
            DivisorFamily::Explicit {
                prefix,
                slope,
                intercept,
            } => match prefix.get(s) {
                Some(d) => d.clone(),
                None => slope * int(s as u64) + intercept,
            },
        })
    }

    /// Checks `0 < d(j) <= d(j+1)` for `j` in `0..=upto` (from `j = 1` when
    /// impervious), plus that an explicit tail never decreases.
    pub fn validate(&self, upto: usize) -> Result<()> {
        if let DivisorFamily::Explicit { slope, .. } = &self.family {
            if slope.is_negative() {
                return Err(Error::InvalidSequence("divisor tail slope is negative".into()));
            }
        }
        let start = usize::from(self.impervious);
        let mut prev: Option<Rational> = None;
        for s in start..=upto + 1 {
            let d = self.divisor_at(s)?;
            if !d.is_positive() {
                return Err(Error::InvalidSequence(format!("d({s}) = {d} is not positive")));
            }
            if let Some(p) = &prev {
                if p.cmp(&d) == Ordering::Greater {
                    return Err(Error::InvalidSequence(format!(
                        "divisors decrease at s = {s}"
                    )));
                }
            }
            prev = Some(d);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn named_weights() {
        assert_eq!(WeightSequence::Pav.weight_at(3), ratio(1, 3));
        assert_eq!(WeightSequence::ChamberlinCourant.weight_at(2), zero());
        assert_eq!(WeightSequence::TopK.weight_at(7), one());
        assert_eq!(WeightSequence::Penrose.weight_at(3), ratio(1, 9));
        assert_eq!(WeightSequence::HarmonicOdd.weight_at(3), ratio(1, 5));
    }

    #[test]
    fn truncated_weights() {
        let w = WeightSequence::truncated(WeightSequence::Pav, 1);
        assert_eq!(w.weight_at(1), zero());
        assert_eq!(w.weight_at(2), ratio(1, 2));
        assert!(!w.is_non_increasing());
        let cc = WeightSequence::truncated(WeightSequence::ChamberlinCourant, 1);
        assert!(cc.is_non_increasing());
        let two_best = WeightSequence::truncated(WeightSequence::t_best(2), 1);
        assert!(!two_best.is_non_increasing());
    }

    #[test]
    fn affine_weights() {
        let w = WeightSequence::affine(int(11)).unwrap();
        let got: Vec<_> = (1..=8).map(|j| w.weight_at(j)).collect();
        let want = [zero(), zero(), zero(), zero(), int(11), one(), ratio(1, 2), ratio(1, 3)];
        assert_eq!(got, want);
        assert!(!w.is_non_increasing());
    }

    #[test]
    fn explicit_weights_use_tail() {
        let w = WeightSequence::explicit(vec![int(3), int(2)], ratio(1, 2)).unwrap();
        assert_eq!(w.weight_at(1), int(3));
        assert_eq!(w.weight_at(9), ratio(1, 2));
        assert!(w.is_non_increasing());
        assert!(w.is_positive());
        assert!(WeightSequence::explicit(vec![int(-1)], zero()).is_err());
    }

    #[test]
    fn t_best_and_t_median() {
        let best = WeightSequence::t_best(2);
        assert_eq!(best.prefix_sums(4), vec![zero(), one(), int(2), int(2), int(2)]);
        let median = WeightSequence::t_median(2);
        assert_eq!(median.weight_at(1), zero());
        assert_eq!(median.weight_at(2), one());
        assert_eq!(median.weight_at(3), zero());
        assert!(!median.is_non_increasing());
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(DivisorSequence::dhondt().divisor_at(0).unwrap(), one());
        assert_eq!(DivisorSequence::sainte_lague().divisor_at(2).unwrap(), int(5));
        let pav = DivisorSequence::from_weights(WeightSequence::Pav);
        assert_eq!(pav.divisor_at(2).unwrap(), int(3));
    }

    #[test]
    fn divisor_from_zero_weight_is_undefined() {
        let cc = DivisorSequence::from_weights(WeightSequence::ChamberlinCourant);
        assert_eq!(cc.divisor_at(0).unwrap(), one());
        assert_eq!(cc.divisor_at(1), Err(Error::UndefinedDivisor { index: 1 }));
    }

    #[test]
    fn impervious_and_validation() {
        let adams = DivisorSequence::adams();
        assert_eq!(adams.divisor_at(0).unwrap(), zero());
        assert_eq!(adams.divisor_at(3).unwrap(), int(3));
        adams.validate(10).unwrap();
        assert!(DivisorSequence::dhondt().with_impervious(false).validate(10).is_ok());

        let bad = DivisorSequence::explicit(vec![int(2), int(1)], one(), zero());
        assert!(bad.validate(5).is_err());
        let zero_start = DivisorSequence::explicit(vec![], one(), zero());
        assert!(zero_start.validate(5).is_err());
    }

    #[test]
    fn families_behave_on_first_hundred() {
        for w in [
            WeightSequence::Pav,
            WeightSequence::Penrose,
            WeightSequence::HarmonicOdd,
        ] {
            for j in 1..100 {
                assert!(w.weight_at(j) > w.weight_at(j + 1));
            }
        }
        for j in 1..=100 {
            assert_eq!(WeightSequence::TopK.weight_at(j), one());
            assert!(!WeightSequence::ChamberlinCourant.weight_at(j).is_negative());
        }
    }
}
