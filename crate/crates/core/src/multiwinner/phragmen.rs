//! Phragmén's load-balancing rules.
//!
//! Every elected candidate carries one unit of load, split among the voters
//! who approve it. For a fixed committee the smallest achievable maximal
//! voter load is the largest density `|B| / |N(B)|` over subsets `B` of the
//! committee, where `N(B)` are the voters approving something in `B`. The
//! load vector with the least sum of squares comes from peeling off the
//! densest subset, charging each of its supporters that density, and
//! repeating on what is left.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::flow::FlowNetwork;
use super::reduced::{Goal, Options, Reduced};
use super::Winners;
use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Committee, Limits};
use crate::rational::{common_denominator, int, zero, Rational};

/// An `n × m` matrix of loads `ℓ[i][c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadDistribution {
    pub loads: Vec<Vec<Rational>>,
}

impl LoadDistribution {
    pub fn zeros(voters: usize, candidates: usize) -> Self {
        LoadDistribution {
            loads: vec![vec![zero(); candidates]; voters],
        }
    }

    /// Per-voter totals.
    pub fn voter_loads(&self) -> VoterLoadVector {
        VoterLoadVector(self.loads.iter().map(|row| row.iter().sum()).collect())
    }

    /// Candidates whose column sums to one.
    pub fn committee(&self) -> Committee {
        let m = self.loads.first().map_or(0, Vec::len);
        let members = (0..m)
            .filter(|&c| {
                self.loads.iter().map(|row| &row[c]).sum::<Rational>() == int(1)
            })
            .collect();
        Committee::from_sorted(members)
    }
}

/// Total load per voter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterLoadVector(pub Vec<Rational>);

impl VoterLoadVector {
    pub fn sum_of_squares(&self) -> Rational {
        self.0.iter().map(|y| y * y).sum()
    }

    pub fn max(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(zero)
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }
}

/// Whether `loads` is a load distribution for `(profile, k)`: it has the
/// right shape, is non-negative, sums to `k`, every column sums to zero or
/// one, and only approved cells carry load.
pub fn validate_load(profile: &ApprovalProfile, k: usize, loads: &LoadDistribution) -> bool {
    let n = profile.num_voters();
    let m = profile.num_candidates();
    if loads.loads.len() != n || loads.loads.iter().any(|row| row.len() != m) {
        return false;
    }
    let mut total = zero();
    for c in 0..m {
        let mut column = zero();
        for i in 0..n {
            let l = &loads.loads[i][c];
            if l.is_negative() || (!l.is_zero() && !profile.approves(i, c)) {
                return false;
            }
            column += l;
        }
        if !column.is_zero() && column != int(1) {
            return false;
        }
        total += column;
    }
    total == int(k as u64)
}

/// Committee classes with at least one member, and the voter groups that
/// approve any of them as bitmasks over those classes.
struct Touched {
    classes: Vec<usize>,
    counts: Vec<usize>,
    group_masks: Vec<u64>,
}

const MAX_TOUCHED: usize = 24;

fn touched(red: &Reduced, pattern: &[usize], limits: &Limits) -> Result<Option<Touched>> {
    let classes: Vec<usize> = (0..pattern.len()).filter(|&k| pattern[k] > 0).collect();
    if classes.len() > MAX_TOUCHED {
        return Err(Error::EnumerationCap {
            required: 1u128 << classes.len(),
            cap: limits.committee_cap,
        });
    }
    if classes.iter().any(|&k| red.supporters[k].is_empty()) {
        return Ok(None);
    }
    let counts = classes.iter().map(|&k| pattern[k]).collect();
    let group_masks = red
        .groups
        .iter()
        .map(|g| {
            classes
                .iter()
                .enumerate()
                .filter(|(_, k)| g.classes.binary_search(k).is_ok())
                .fold(0u64, |m, (bit, _)| m | (1 << bit))
        })
        .collect();
    Ok(Some(Touched {
        classes,
        counts,
        group_masks,
    }))
}

impl Touched {
    fn members(&self, subset: u64) -> usize {
        (0..self.classes.len())
            .filter(|b| subset >> b & 1 == 1)
            .map(|b| self.counts[b])
            .sum()
    }

    fn supporters(&self, red: &Reduced, subset: u64, active: &[bool]) -> usize {
        self.group_masks
            .iter()
            .enumerate()
            .filter(|&(g, &m)| active[g] && m & subset != 0)
            .map(|(g, _)| red.groups[g].size())
            .sum()
    }
}

/// Densest nonempty subset of `remaining`, preferring the largest one on
/// ties. Returns the subset and its density.
fn densest(red: &Reduced, t: &Touched, remaining: u64, active: &[bool]) -> (u64, Rational) {
    let mut best: Option<(u64, Rational, usize)> = None;
    let mut sub = remaining;
    while sub != 0 {
        let members = t.members(sub);
        let support = t.supporters(red, sub, active);
        let density = Rational::new(members.into(), support.into());
        let replace = match &best {
            None => true,
            Some((_, d, size)) => density > *d || (density == *d && members > *size),
        };
        if replace {
            best = Some((sub, density, members));
        }
        sub = (sub - 1) & remaining;
    }
    let (subset, density, _) = best.expect("remaining is nonempty");
    (subset, density)
}

pub(crate) fn pattern_max_load(
    red: &Reduced,
    pattern: &[usize],
    limits: &Limits,
) -> Result<Option<Rational>> {
    let Some(t) = touched(red, pattern, limits)? else {
        return Ok(None);
    };
    if t.classes.is_empty() {
        return Ok(Some(zero()));
    }
    let all = (1u64 << t.classes.len()) - 1;
    let active = vec![true; red.groups.len()];
    Ok(Some(densest(red, &t, all, &active).1))
}

/// Load of every voter group under the least-squares load vector.
pub(crate) fn pattern_group_loads(
    red: &Reduced,
    pattern: &[usize],
    limits: &Limits,
) -> Result<Option<Vec<Rational>>> {
    let Some(t) = touched(red, pattern, limits)? else {
        return Ok(None);
    };
    let mut loads = vec![zero(); red.groups.len()];
    let mut active = vec![true; red.groups.len()];
    let mut remaining: u64 = if t.classes.is_empty() {
        0
    } else {
        (1u64 << t.classes.len()) - 1
    };
    while remaining != 0 {
        let (subset, density) = densest(red, &t, remaining, &active);
        for (g, &m) in t.group_masks.iter().enumerate() {
            if active[g] && m & subset != 0 {
                loads[g] = density.clone();
                active[g] = false;
            }
        }
        remaining &= !subset;
    }
    Ok(Some(loads))
}

fn sum_of_squares(red: &Reduced, group_loads: &[Rational]) -> Rational {
    red.groups
        .iter()
        .zip(group_loads)
        .map(|(g, y)| y * y * int(g.size() as u64))
        .sum()
}

fn infeasible(committee: &Committee) -> Error {
    Error::Infeasible(format!("some member of {committee} is approved by nobody"))
}

/// The smallest achievable maximal voter load for `committee`.
pub fn min_max_load(profile: &ApprovalProfile, committee: &Committee) -> Result<Rational> {
    profile.check_members(committee)?;
    let red = Reduced::new(profile, Default::default());
    pattern_max_load(&red, &red.pattern_of(committee), &Limits::default())?
        .ok_or_else(|| infeasible(committee))
}

/// The unique voter-load vector minimizing the sum of squared loads.
pub fn balanced_loads(profile: &ApprovalProfile, committee: &Committee) -> Result<VoterLoadVector> {
    profile.check_members(committee)?;
    let red = Reduced::new(profile, Default::default());
    let group_loads = pattern_group_loads(&red, &red.pattern_of(committee), &Limits::default())?
        .ok_or_else(|| infeasible(committee))?;
    let mut per_voter = vec![zero(); profile.num_voters()];
    for (g, y) in red.groups.iter().zip(group_loads) {
        for &i in &g.voters {
            per_voter[i] = y.clone();
        }
    }
    Ok(VoterLoadVector(per_voter))
}

/// A load distribution realizing [`balanced_loads`].
pub fn load_witness(profile: &ApprovalProfile, committee: &Committee) -> Result<LoadDistribution> {
    let target = balanced_loads(profile, committee)?;
    let scale = common_denominator(&target.0);
    let to_u64 = |r: &Rational| -> Result<u64> {
        let scaled: BigInt = (r * Rational::from_integer(scale.clone())).to_integer();
        scaled.to_u64().ok_or(Error::Overflow("load witness"))
    };
    let unit = to_u64(&int(1))?;

    let n = profile.num_voters();
    let members = committee.members();
    let source = 0;
    let sink = 1 + members.len() + n;
    let mut net = FlowNetwork::new(sink + 1);
    let mut handles = Vec::new();
    for (j, &c) in members.iter().enumerate() {
        net.add_edge(source, 1 + j, unit);
        for i in 0..n {
            if profile.approves(i, c) {
                handles.push((i, c, net.add_edge(1 + j, 1 + members.len() + i, unit)));
            }
        }
    }
    for (i, y) in target.0.iter().enumerate() {
        net.add_edge(1 + members.len() + i, sink, to_u64(y)?);
    }
    let flow = net.max_flow(source, sink);
    debug_assert_eq!(flow, unit * members.len() as u64);

    let mut loads = LoadDistribution::zeros(n, profile.num_candidates());
    let denom = Rational::from_integer(scale);
    for (i, c, h) in handles {
        loads.loads[i][c] = int(net.flow_on(h)) / &denom;
    }
    Ok(loads)
}

pub fn max_phragmen_winners(profile: &ApprovalProfile, k: usize) -> Result<Winners> {
    max_phragmen_winners_with(profile, k, &Options::default())
}

pub fn max_phragmen_winners_with(
    profile: &ApprovalProfile,
    k: usize,
    options: &Options,
) -> Result<Winners> {
    let red = Reduced::new(profile, options.grouping);
    let (score, patterns) = red.optimal_patterns(k, &options.limits, Goal::Minimize, |p| {
        pattern_max_load(&red, p, &options.limits)
    })?;
    Ok(Winners {
        committees: red.committee_set(patterns),
        score,
    })
}

pub fn var_phragmen_winners(profile: &ApprovalProfile, k: usize) -> Result<Winners> {
    var_phragmen_winners_with(profile, k, &Options::default())
}

pub fn var_phragmen_winners_with(
    profile: &ApprovalProfile,
    k: usize,
    options: &Options,
) -> Result<Winners> {
    let red = Reduced::new(profile, options.grouping);
    let (score, patterns) = red.optimal_patterns(k, &options.limits, Goal::Minimize, |p| {
        Ok(pattern_group_loads(&red, p, &options.limits)?.map(|y| sum_of_squares(&red, &y)))
    })?;
    Ok(Winners {
        committees: red.committee_set(patterns),
        score,
    })
}
