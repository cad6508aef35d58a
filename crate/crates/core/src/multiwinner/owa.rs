use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::reduced::{Goal, Options, Reduced};
use super::{CommitteeSet, Winners};
use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Committee};
use crate::rational::{zero, Rational};
use crate::sequence::WeightSequence;

/// Total satisfaction `sum_i (w_1 + ... + w_{|A_i ∩ S|})`.
pub fn owa_satisfaction(
    profile: &ApprovalProfile,
    committee: &Committee,
    weights: &WeightSequence,
) -> Result<Rational> {
    profile.check_members(committee)?;
    let sums = weights.prefix_sums(committee.len());
    Ok(profile
        .ballots()
        .iter()
        .map(|b| &sums[committee.overlap(b)])
        .sum())
}

pub(crate) fn pattern_satisfaction(red: &Reduced, pattern: &[usize], sums: &[Rational]) -> Rational {
    let mut total = zero();
    for g in &red.groups {
        let hits = red.hits(g, pattern);
        if hits > 0 {
            total += &sums[hits] * Rational::from_integer(g.size().into());
        }
    }
    total
}

/// All size-`k` committees maximizing OWA satisfaction.
pub fn owa_winners(
    profile: &ApprovalProfile,
    k: usize,
    weights: &WeightSequence,
) -> Result<Winners> {
    owa_winners_with(profile, k, weights, &Options::default())
}

pub fn owa_winners_with(
    profile: &ApprovalProfile,
    k: usize,
    weights: &WeightSequence,
    options: &Options,
) -> Result<Winners> {
    let red = Reduced::new(profile, options.grouping);
    let sums = weights.prefix_sums(k);
    let (score, patterns) = red.optimal_patterns(k, &options.limits, Goal::Maximize, |p| {
        Ok(Some(pattern_satisfaction(&red, p, &sums)))
    })?;
    Ok(Winners {
        committees: red.committee_set(patterns),
        score,
    })
}

/// Every committee the greedy sequential procedure can reach, following all
/// tied choices.
pub fn seq_owa_winners(
    profile: &ApprovalProfile,
    k: usize,
    weights: &WeightSequence,
) -> Result<CommitteeSet> {
    seq_owa_winners_with(profile, k, weights, &Options::default())
}

pub fn seq_owa_winners_with(
    profile: &ApprovalProfile,
    k: usize,
    weights: &WeightSequence,
    options: &Options,
) -> Result<CommitteeSet> {
    let m = profile.num_candidates();
    if k > m {
        return Err(Error::Precondition(alloc::format!(
            "committee size {k} exceeds the {m} candidates"
        )));
    }
    let red = Reduced::new(profile, options.grouping);
    let sizes = red.class_sizes();
    // weights[j] = w_{j+1}
    let step_weights: Vec<Rational> = (1..=k).map(|j| weights.weight_at(j)).collect();

    let mut states: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0; sizes.len()]]);
    for _ in 0..k {
        let mut next = BTreeSet::new();
        for state in &states {
            let hits: Vec<usize> = red.groups.iter().map(|g| red.hits(g, state)).collect();
            let mut best: Option<Rational> = None;
            let mut argmax = Vec::new();
            for class in 0..sizes.len() {
                if state[class] == sizes[class] {
                    continue;
                }
                let mut gain = zero();
                for &g in &red.supporters[class] {
                    gain += &step_weights[hits[g]]
                        * Rational::from_integer(red.groups[g].size().into());
                }
                match &best {
                    Some(b) if gain < *b => {}
                    Some(b) if gain == *b => argmax.push(class),
                    _ => {
                        best = Some(gain);
                        argmax.clear();
                        argmax.push(class);
                    }
                }
            }
            for class in argmax {
                let mut s = state.clone();
                s[class] += 1;
                next.insert(s);
            }
        }
        if next.len() > options.limits.committee_cap {
            return Err(Error::EnumerationCap {
                required: next.len() as u128,
                cap: options.limits.committee_cap,
            });
        }
        states = next;
    }
    Ok(red.committee_set(states))
}
