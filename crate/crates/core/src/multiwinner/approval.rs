//! Satisfaction approval voting and minimax approval voting.

use super::reduced::{Goal, Options, Reduced};
use super::Winners;
use crate::error::Result;
use crate::model::{ApprovalProfile, Committee};
use crate::rational::{int, zero, Rational};

/// `sum_i |A_i ∩ S| / |A_i|`; empty ballots contribute nothing.
pub fn sav_score(profile: &ApprovalProfile, committee: &Committee) -> Result<Rational> {
    profile.check_members(committee)?;
    Ok(profile
        .ballots()
        .iter()
        .filter(|b| !b.is_empty())
        .map(|b| Rational::new(committee.overlap(b).into(), b.len().into()))
        .sum())
}

/// `max_i |A_i Δ S|`, or zero without voters.
pub fn mav_score(profile: &ApprovalProfile, committee: &Committee) -> Result<usize> {
    profile.check_members(committee)?;
    Ok(profile
        .ballots()
        .iter()
        .map(|b| b.len() + committee.len() - 2 * committee.overlap(b))
        .max()
        .unwrap_or(0))
}

fn sav_pattern(red: &Reduced, pattern: &[usize]) -> Rational {
    let mut total = zero();
    for g in red.groups.iter().filter(|g| g.ballot_len > 0) {
        total += Rational::new(
            (red.hits(g, pattern) * g.size()).into(),
            g.ballot_len.into(),
        );
    }
    total
}

fn mav_pattern(red: &Reduced, pattern: &[usize], k: usize) -> usize {
    red.groups
        .iter()
        .map(|g| g.ballot_len + k - 2 * red.hits(g, pattern))
        .max()
        .unwrap_or(0)
}

pub fn sav_winners(profile: &ApprovalProfile, k: usize) -> Result<Winners> {
    sav_winners_with(profile, k, &Options::default())
}

pub fn sav_winners_with(profile: &ApprovalProfile, k: usize, options: &Options) -> Result<Winners> {
    let red = Reduced::new(profile, options.grouping);
    let (score, patterns) = red.optimal_patterns(k, &options.limits, Goal::Maximize, |p| {
        Ok(Some(sav_pattern(&red, p)))
    })?;
    Ok(Winners {
        committees: red.committee_set(patterns),
        score,
    })
}

pub fn mav_winners(profile: &ApprovalProfile, k: usize) -> Result<Winners> {
    mav_winners_with(profile, k, &Options::default())
}

pub fn mav_winners_with(profile: &ApprovalProfile, k: usize, options: &Options) -> Result<Winners> {
    let red = Reduced::new(profile, options.grouping);
    let (score, patterns) = red.optimal_patterns(k, &options.limits, Goal::Minimize, |p| {
        Ok(Some(int(mav_pattern(&red, p, k) as u64)))
    })?;
    Ok(Winners {
        committees: red.committee_set(patterns),
        score,
    })
}
