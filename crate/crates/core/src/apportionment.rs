//! Divisor methods and the largest remainder method, returning complete tie
//! sets.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinatorics::{
    combinations, count_bounded_compositions, for_each_bounded_composition,
};
use crate::error::{Error, Result};
use crate::model::{ApportionmentInstance, Limits, OutcomeSet, SeatDistribution};
use crate::rational::Rational;
use crate::sequence::DivisorSequence;

/// Orders the claims `v_a / d_a` and `v_b / d_b` exactly.
///
/// A zero divisor makes the claim infinite; two infinite claims compare by
/// their vote counts.
pub fn compare_claims(v_a: u64, d_a: &Rational, v_b: u64, d_b: &Rational) -> Ordering {
    match (d_a.is_zero(), d_b.is_zero()) {
        (true, true) => v_a.cmp(&v_b),
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (false, false) => {
            // v_a / d_a  vs  v_b / d_b   <=>   v_a * d_b  vs  v_b * d_a
            let lhs = d_b * BigInt::from(v_a);
            let rhs = d_a * BigInt::from(v_b);
            lhs.cmp(&rhs)
        }
    }
}

/// A party's claim `v / d` on one more seat.
#[derive(Clone, Debug)]
struct Claim {
    votes: u64,
    divisor: Rational,
}

impl PartialEq for Claim {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Claim {}

impl PartialOrd for Claim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Claim {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_claims(self.votes, &self.divisor, other.votes, &other.divisor)
    }
}

/// `x` with one seat moved from party `from` to party `to`.
pub fn move_seat(x: &SeatDistribution, from: usize, to: usize) -> Result<SeatDistribution> {
    if from == to {
        return Err(Error::Precondition("source and target party coincide".into()));
    }
    if from >= x.len() || to >= x.len() {
        return Err(Error::Precondition("party index out of range".into()));
    }
    if x[from] == 0 {
        return Err(Error::Precondition("source party holds no seat".into()));
    }
    let mut seats = x.0.clone();
    seats[from] -= 1;
    seats[to] += 1;
    Ok(SeatDistribution(seats))
}

/// All seat distributions the divisor method based on `divisors` can produce.
pub fn divisor_apportion(
    inst: &ApportionmentInstance,
    divisors: &DivisorSequence,
) -> Result<OutcomeSet<SeatDistribution>> {
    divisor_apportion_with(inst, divisors, &Limits::default())
}

pub fn divisor_apportion_with(
    inst: &ApportionmentInstance,
    divisors: &DivisorSequence,
    limits: &Limits,
) -> Result<OutcomeSet<SeatDistribution>> {
    let h = inst.seats();
    divisors.validate(h)?;
    let table: Vec<Rational> = (0..h)
        .map(|s| divisors.divisor_at(s))
        .collect::<Result<_>>()?;

    // Each party's claims are non-increasing in s, so the h largest claims
    // overall are a prefix of every party's column.
    let mut claims: Vec<Claim> = Vec::with_capacity(inst.parties() * h);
    for &v in inst.votes() {
        for d in &table {
            claims.push(Claim {
                votes: v,
                divisor: d.clone(),
            });
        }
    }
    claims.sort_unstable_by(|a, b| b.cmp(a));
    let cutoff = claims[h - 1].clone();

    let mut above = Vec::with_capacity(inst.parties());
    let mut tied = Vec::with_capacity(inst.parties());
    for &v in inst.votes() {
        let (mut a, mut t) = (0usize, 0usize);
        for d in &table {
            let c = Claim {
                votes: v,
                divisor: d.clone(),
            };
            match c.cmp(&cutoff) {
                Ordering::Greater => a += 1,
                Ordering::Equal => t += 1,
                Ordering::Less => break,
            }
        }
        above.push(a);
        tied.push(t);
    }
    let remaining = h - above.iter().sum::<usize>();
    complete_ties(&above, &tied, remaining, limits)
}

/// Every `base + t` with `t_i <= tied_i` and `sum t = remaining`.
fn complete_ties(
    base: &[usize],
    tied: &[usize],
    remaining: usize,
    limits: &Limits,
) -> Result<OutcomeSet<SeatDistribution>> {
    if count_bounded_compositions(tied, remaining) > limits.outcome_cap as u128 {
        return Err(Error::TieExplosion {
            cap: limits.outcome_cap,
        });
    }
    let mut out = BTreeSet::new();
    for_each_bounded_composition::<Error>(tied, remaining, |t| {
        out.insert(SeatDistribution(
            base.iter().zip(t).map(|(b, t)| b + t).collect(),
        ));
        Ok(())
    })?;
    Ok(OutcomeSet::new(out))
}

/// The largest remainder (Hamilton) method with all tie completions.
pub fn largest_remainder(inst: &ApportionmentInstance) -> Result<OutcomeSet<SeatDistribution>> {
    largest_remainder_with(inst, &Limits::default())
}

pub fn largest_remainder_with(
    inst: &ApportionmentInstance,
    limits: &Limits,
) -> Result<OutcomeSet<SeatDistribution>> {
    let h = inst.seats() as u128;
    let total = u128::from(inst.total_votes());
    // remainders share the denominator v_+, so compare numerators
    let mut floors = Vec::with_capacity(inst.parties());
    let mut remainders = Vec::with_capacity(inst.parties());
    for &v in inst.votes() {
        let q = u128::from(v) * h;
        floors.push((q / total) as usize);
        remainders.push(q % total);
    }
    let left = inst.seats() - floors.iter().sum::<usize>();
    if left == 0 {
        return Ok(OutcomeSet::new(BTreeSet::from([SeatDistribution(floors)])));
    }
    let mut sorted = remainders.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let cutoff = sorted[left - 1];

    let mut base = floors;
    let mut tied = Vec::new();
    for (i, &r) in remainders.iter().enumerate() {
        match r.cmp(&cutoff) {
            Ordering::Greater => base[i] += 1,
            Ordering::Equal => tied.push(i),
            Ordering::Less => {}
        }
    }
    let extra = inst.seats() - base.iter().sum::<usize>();
    if crate::combinatorics::binomial(tied.len(), extra) > limits.outcome_cap as u128 {
        return Err(Error::TieExplosion {
            cap: limits.outcome_cap,
        });
    }
    let out = combinations(&tied, extra)
        .into_iter()
        .map(|chosen| {
            let mut x = base.clone();
            for i in chosen {
                x[i] += 1;
            }
            SeatDistribution(x)
        })
        .collect();
    Ok(OutcomeSet::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, zero};
    use crate::sequence::WeightSequence;
    use alloc::vec;

    fn inst(votes: &[u64], seats: usize) -> ApportionmentInstance {
        ApportionmentInstance::new(votes.to_vec(), seats).unwrap()
    }

    fn set(items: &[&[usize]]) -> OutcomeSet<SeatDistribution> {
        items.iter().map(|x| SeatDistribution(x.to_vec())).collect()
    }

    #[test]
    fn claims() {
        assert_eq!(compare_claims(6, &int(1), 7, &int(1)), Ordering::Less);
        assert_eq!(compare_claims(5, &zero(), 3, &zero()), Ordering::Greater);
        assert_eq!(compare_claims(4, &int(2), 2, &int(1)), Ordering::Equal);
        assert_eq!(compare_claims(1, &zero(), 100, &int(1)), Ordering::Greater);
    }

    #[test]
    fn moving_seats() {
        let x = SeatDistribution(vec![0, 0, 4, 6]);
        assert_eq!(move_seat(&x, 3, 2).unwrap(), SeatDistribution(vec![0, 0, 5, 5]));
        let y = SeatDistribution(vec![1, 0]);
        assert_eq!(move_seat(&y, 0, 1).unwrap(), SeatDistribution(vec![0, 1]));
        let z = SeatDistribution(vec![2, 2, 2]);
        assert!(move_seat(&z, 1, 1).is_err());
        assert!(move_seat(&y, 1, 0).is_err());
    }

    #[test]
    fn dhondt_and_sainte_lague_on_four_parties() {
        let i = inst(&[6, 7, 39, 48], 10);
        assert_eq!(
            divisor_apportion(&i, &DivisorSequence::dhondt()).unwrap(),
            set(&[&[0, 0, 4, 6]])
        );
        assert_eq!(
            divisor_apportion(&i, &DivisorSequence::sainte_lague()).unwrap(),
            set(&[&[1, 1, 4, 4]])
        );
    }

    #[test]
    fn symmetric_tie() {
        let i = inst(&[1, 1], 1);
        assert_eq!(
            divisor_apportion(&i, &DivisorSequence::dhondt()).unwrap(),
            set(&[&[0, 1], &[1, 0]])
        );
    }

    #[test]
    fn ties_across_several_seats() {
        // claims 2,2,2 / 1,1,1 with two seats: any two of the first seats
        let i = inst(&[2, 2, 2], 2);
        assert_eq!(
            divisor_apportion(&i, &DivisorSequence::dhondt()).unwrap(),
            set(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
        );
        // 4 / 2 tie between the second claim of party 1 and the first of party 2
        let j = inst(&[4, 2], 2);
        assert_eq!(
            divisor_apportion(&j, &DivisorSequence::dhondt()).unwrap(),
            set(&[&[1, 1], &[2, 0]])
        );
    }

    #[test]
    fn impervious_method_seats_everyone_first() {
        let i = inst(&[100, 1, 1], 3);
        assert_eq!(
            divisor_apportion(&i, &DivisorSequence::adams()).unwrap(),
            set(&[&[1, 1, 1]])
        );
        // more parties than seats: infinite claims compare by votes
        let j = inst(&[5, 3, 4], 2);
        assert_eq!(
            divisor_apportion(&j, &DivisorSequence::adams()).unwrap(),
            set(&[&[1, 0, 1]])
        );
    }

    #[test]
    fn undefined_divisors_are_rejected() {
        let i = inst(&[3, 2], 3);
        let cc = DivisorSequence::from_weights(WeightSequence::ChamberlinCourant);
        assert!(divisor_apportion(&i, &cc).is_err());
    }

    #[test]
    fn tie_explosion_is_reported() {
        let i = inst(&[1; 20], 10);
        let limits = Limits {
            outcome_cap: 100,
            ..Limits::default()
        };
        assert_eq!(
            divisor_apportion_with(&i, &DivisorSequence::dhondt(), &limits),
            Err(Error::TieExplosion { cap: 100 })
        );
        assert_eq!(
            largest_remainder_with(&i, &limits),
            Err(Error::TieExplosion { cap: 100 })
        );
    }

    #[test]
    fn largest_remainder_examples() {
        assert_eq!(
            largest_remainder(&inst(&[6, 7, 39, 48], 10)).unwrap(),
            set(&[&[0, 1, 4, 5]])
        );
        assert_eq!(largest_remainder(&inst(&[50, 50], 2)).unwrap(), set(&[&[1, 1]]));
        assert_eq!(
            largest_remainder(&inst(&[1, 1, 1], 2)).unwrap(),
            set(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
        );
    }
}
