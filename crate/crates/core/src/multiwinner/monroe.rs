use super::flow::FlowNetwork;
use super::reduced::{Goal, Options, Reduced};
use super::Winners;
use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Committee};
use crate::rational::int;

fn representation_quota(num_voters: usize, k: usize) -> Result<usize> {
    if k == 0 || !num_voters.is_multiple_of(k) {
        return Err(Error::Divisibility {
            voters: num_voters,
            size: k,
        });
    }
    Ok(num_voters / k)
}

/// Voters matched to an approved member under the best balanced allocation.
///
/// Every member represents exactly `n / k` voters, so this is a maximum flow
/// from voter groups to committee classes with capacity `count * n / k` per
/// class; unmatched voters fill the remaining slots arbitrarily.
pub(crate) fn pattern_satisfaction(red: &Reduced, pattern: &[usize], quota: usize) -> u64 {
    let groups = red.groups.len();
    let classes = red.classes.len();
    let source = 0;
    let sink = groups + classes + 1;
    let mut net = FlowNetwork::new(groups + classes + 2);
    for (g, group) in red.groups.iter().enumerate() {
        let node = 1 + g;
        net.add_edge(source, node, group.size() as u64);
        for &k in &group.classes {
            if pattern[k] > 0 {
                net.add_edge(node, 1 + groups + k, u64::MAX);
            }
        }
    }
    for (k, &n) in pattern.iter().enumerate() {
        if n > 0 {
            net.add_edge(1 + groups + k, sink, (n * quota) as u64);
        }
    }
    net.max_flow(source, sink)
}

pub fn monroe_satisfaction(profile: &ApprovalProfile, committee: &Committee) -> Result<usize> {
    profile.check_members(committee)?;
    let quota = representation_quota(profile.num_voters(), committee.len())?;
    let red = Reduced::new(profile, Default::default());
    let pattern = red.pattern_of(committee);
    Ok(pattern_satisfaction(&red, &pattern, quota) as usize)
}

/// All size-`k` committees with the largest Monroe satisfaction.
pub fn monroe_winners(profile: &ApprovalProfile, k: usize) -> Result<Winners> {
    monroe_winners_with(profile, k, &Options::default())
}

pub fn monroe_winners_with(
    profile: &ApprovalProfile,
    k: usize,
    options: &Options,
) -> Result<Winners> {
    let quota = representation_quota(profile.num_voters(), k)?;
    let red = Reduced::new(profile, options.grouping);
    let (score, patterns) = red.optimal_patterns(k, &options.limits, Goal::Maximize, |p| {
        Ok(Some(int(pattern_satisfaction(&red, p, quota))))
    })?;
    Ok(Winners {
        committees: red.committee_set(patterns),
        score,
    })
}
