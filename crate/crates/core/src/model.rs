//! Data types shared by the apportionment and committee-election modules.

use alloc::collections::btree_set::{self, BTreeSet};
use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use crate::error::{Error, Result};

/// Enumeration bounds for tie sets and committee searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest outcome set returned before giving up with
    /// [`Error::TieExplosion`].
    pub outcome_cap: usize,
    /// Largest number of committees (or committee classes) scored by an
    /// exhaustive search.
    pub committee_cap: usize,
    /// Largest electorate the brute-force PJR check accepts.
    pub pjr_voter_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            outcome_cap: 10_000,
            committee_cap: 2_000_000,
            pjr_voter_cap: 16,
        }
    }
}

/// Votes per party and the house size.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ApportionmentInstance {
    votes: Vec<u64>,
    seats: usize,
    total: u64,
}

impl ApportionmentInstance {
    pub fn new(votes: Vec<u64>, seats: usize) -> Result<Self> {
        if votes.is_empty() {
            return Err(Error::InvalidInstance("at least one party is required".into()));
        }
        if let Some(i) = votes.iter().position(|&v| v == 0) {
            return Err(Error::InvalidInstance(format!(
                "party {} has no votes",
                i + 1
            )));
        }
        if seats == 0 {
            return Err(Error::InvalidInstance("house size must be positive".into()));
        }
        let total = votes
            .iter()
            .try_fold(0u64, |acc, &v| acc.checked_add(v))
            .ok_or(Error::Overflow("total votes"))?;
        Ok(ApportionmentInstance {
            votes,
            seats,
            total,
        })
    }

    pub fn votes(&self) -> &[u64] {
        &self.votes
    }

    pub fn seats(&self) -> usize {
        self.seats
    }

    pub fn parties(&self) -> usize {
        self.votes.len()
    }

    /// `v_+`.
    pub fn total_votes(&self) -> u64 {
        self.total
    }

    /// `(floor, ceil)` of the exact quota `v_i h / v_+`.
    pub fn quota_bounds(&self, party: usize) -> (usize, usize) {
        let num = u128::from(self.votes[party]) * self.seats as u128;
        let den = u128::from(self.total);
        ((num / den) as usize, num.div_ceil(den) as usize)
    }

    /// Whether `x` is a seat distribution for this instance.
    pub fn check_distribution(&self, x: &SeatDistribution) -> Result<()> {
        if x.len() != self.parties() {
            return Err(Error::Precondition(format!(
                "distribution has {} entries for {} parties",
                x.len(),
                self.parties()
            )));
        }
        if x.total() != self.seats {
            return Err(Error::Precondition(format!(
                "distribution assigns {} of {} seats",
                x.total(),
                self.seats
            )));
        }
        Ok(())
    }
}

/// Seats per party. Ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeatDistribution(pub Vec<usize>);

impl SeatDistribution {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for SeatDistribution {
    fn from(v: Vec<usize>) -> Self {
        SeatDistribution(v)
    }
}

impl Index<usize> for SeatDistribution {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl fmt::Display for SeatDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// The complete, lexicographically ordered set of tied outcomes of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutcomeSet<T: Ord>(BTreeSet<T>);

impl<T: Ord> OutcomeSet<T> {
    /// Panics on an empty set; rules always return at least one outcome.
    pub fn new(items: BTreeSet<T>) -> Self {
        assert!(!items.is_empty(), "outcome sets are non-empty");
        OutcomeSet(items)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: &T) -> bool {
        self.0.contains(item)
    }

    pub fn iter(&self) -> btree_set::Iter<'_, T> {
        self.0.iter()
    }

    pub fn as_set(&self) -> &BTreeSet<T> {
        &self.0
    }

    pub fn into_set(self) -> BTreeSet<T> {
        self.0
    }

    /// The only outcome, if the set is a singleton.
    pub fn unique(&self) -> Option<&T> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }
}

impl<'a, T: Ord> IntoIterator for &'a OutcomeSet<T> {
    type Item = &'a T;
    type IntoIter = btree_set::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<T: Ord> FromIterator<T> for OutcomeSet<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        OutcomeSet::new(iter.into_iter().collect())
    }
}

/// Approval ballots over candidates `0..num_candidates`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ApprovalProfile {
    num_candidates: usize,
    ballots: Vec<Vec<usize>>,
}

impl ApprovalProfile {
    /// Ballots are sorted on construction; duplicates and out-of-range ids are
    /// rejected. Empty ballots are allowed.
    pub fn new(num_candidates: usize, ballots: Vec<Vec<usize>>) -> Result<Self> {
        let mut normalized = Vec::with_capacity(ballots.len());
        for (i, mut ballot) in ballots.into_iter().enumerate() {
            ballot.sort_unstable();
            if let Some(&c) = ballot.iter().find(|&&c| c >= num_candidates) {
                return Err(Error::InvalidProfile(format!(
                    "voter {} approves unknown candidate {c}",
                    i + 1
                )));
            }
            if ballot.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidProfile(format!(
                    "voter {} lists a candidate twice",
                    i + 1
                )));
            }
            normalized.push(ballot);
        }
        Ok(ApprovalProfile {
            num_candidates,
            ballots: normalized,
        })
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn num_voters(&self) -> usize {
        self.ballots.len()
    }

    pub fn ballots(&self) -> &[Vec<usize>] {
        &self.ballots
    }

    pub fn ballot(&self, voter: usize) -> &[usize] {
        &self.ballots[voter]
    }

    pub fn approves(&self, voter: usize, candidate: usize) -> bool {
        self.ballots[voter].binary_search(&candidate).is_ok()
    }

    /// Number of voters approving each candidate.
    pub fn approval_counts(&self) -> Vec<usize> {
        let mut counts = alloc::vec![0; self.num_candidates];
        for ballot in &self.ballots {
            for &c in ballot {
                counts[c] += 1;
            }
        }
        counts
    }

    /// Checks that `committee` has `k` members, all of them valid candidates.
    pub fn check_committee(&self, committee: &Committee, k: usize) -> Result<()> {
        if committee.len() != k {
            return Err(Error::Precondition(format!(
                "committee has {} members, expected {k}",
                committee.len()
            )));
        }
        self.check_members(committee)
    }

    pub(crate) fn check_members(&self, committee: &Committee) -> Result<()> {
        match committee.members().last() {
            Some(&c) if c >= self.num_candidates => Err(Error::Precondition(format!(
                "candidate {c} is not in the profile"
            ))),
            _ => Ok(()),
        }
    }
}

/// A set of distinct candidates, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Committee(Vec<usize>);

impl Committee {
    /// Sorts and rejects duplicate members.
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("committee members must be distinct".into()));
        }
        Ok(Committee(members))
    }

    pub(crate) fn from_sorted(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Committee(members)
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.0.binary_search(&candidate).is_ok()
    }

    /// `|A ∩ S|` for a sorted ballot `A`.
    pub fn overlap(&self, ballot: &[usize]) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < ballot.len() {
            match self.0[i].cmp(&ballot[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "c{}", c + 1)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn instance_validation() {
        assert!(ApportionmentInstance::new(vec![], 3).is_err());
        assert!(ApportionmentInstance::new(vec![1, 0], 3).is_err());
        assert!(ApportionmentInstance::new(vec![1, 2], 0).is_err());
        let inst = ApportionmentInstance::new(vec![6, 7, 39, 48], 10).unwrap();
        assert_eq!(inst.total_votes(), 100);
        assert_eq!(inst.quota_bounds(2), (3, 4));
        assert_eq!(inst.quota_bounds(3), (4, 5));
    }

    #[test]
    fn profile_validation() {
        assert!(ApprovalProfile::new(3, vec![vec![0, 3]]).is_err());
        assert!(ApprovalProfile::new(3, vec![vec![1, 1]]).is_err());
        let p = ApprovalProfile::new(3, vec![vec![2, 0], vec![]]).unwrap();
        assert_eq!(p.ballot(0), &[0, 2]);
        assert!(p.approves(0, 2));
        assert!(!p.approves(1, 0));
        assert_eq!(p.approval_counts(), vec![1, 0, 1]);
    }

    #[test]
    fn committee_overlap() {
        let s = Committee::new(vec![5, 0, 2]).unwrap();
        assert_eq!(s.members(), &[0, 2, 5]);
        assert_eq!(s.overlap(&[0, 1, 5, 7]), 2);
        assert!(Committee::new(vec![1, 1]).is_err());
    }

    #[test]
    fn distributions_order_lexicographically() {
        let a = SeatDistribution(vec![0, 1]);
        let b = SeatDistribution(vec![1, 0]);
        let set: OutcomeSet<_> = [b.clone(), a.clone()].into_iter().collect();
        assert_eq!(set.iter().cloned().collect::<Vec<_>>(), vec![a, b]);
    }
}
