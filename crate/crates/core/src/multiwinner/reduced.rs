//! A profile viewed through interchangeable candidates and identical ballots.
//!
//! Candidates approved by exactly the same voters are clones: every rule in
//! this crate scores two committees that differ only by swapping clones
//! identically. Committees are therefore searched as *patterns*, one count per
//! clone class, and voters with identical ballots are scored once with a
//! multiplicity.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::combinatorics::{binomial, count_bounded_compositions, for_each_bounded_composition};
use crate::error::{Error, Result};
use crate::model::{ApprovalProfile, Committee, Limits};
use crate::rational::Rational;

/// How candidates and voters are grouped before a committee search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Grouping {
    /// Merge clone candidates and identical ballots.
    #[default]
    Clones,
    /// One class per candidate and one group per voter.
    Plain,
}

/// Search settings for committee rules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub limits: Limits,
    pub grouping: Grouping,
}

#[derive(Clone, Debug)]
pub(crate) struct VoterGroup {
    /// Clone classes on the shared ballot.
    pub classes: Vec<usize>,
    /// Length of the shared ballot.
    pub ballot_len: usize,
    pub voters: Vec<usize>,
}

impl VoterGroup {
    pub fn size(&self) -> usize {
        self.voters.len()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub groups: Vec<VoterGroup>,
    /// Voter groups approving each class.
    pub supporters: Vec<Vec<usize>>,
}

impl Reduced {
    pub fn new(profile: &ApprovalProfile, grouping: Grouping) -> Self {
        let m = profile.num_candidates();
        // (classes, (ballot over candidates, voters) per group)
        type Split = (Vec<Vec<usize>>, Vec<(Vec<usize>, Vec<usize>)>);
        let (classes, groups_raw): Split =
            match grouping {
                Grouping::Plain => (
                    (0..m).map(|c| vec![c]).collect(),
                    profile
                        .ballots()
                        .iter()
                        .enumerate()
                        .map(|(i, b)| (b.clone(), vec![i]))
                        .collect(),
                ),
                Grouping::Clones => {
                    let mut approvers: Vec<Vec<usize>> = vec![Vec::new(); m];
                    for (i, ballot) in profile.ballots().iter().enumerate() {
                        for &c in ballot {
                            approvers[c].push(i);
                        }
                    }
                    let mut by_approvers: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
                    for (c, a) in approvers.iter().enumerate() {
                        by_approvers.entry(a.as_slice()).or_default().push(c);
                    }
                    let mut classes: Vec<Vec<usize>> = by_approvers.into_values().collect();
                    classes.sort_unstable_by_key(|class| class[0]);

                    let mut by_ballot: BTreeMap<&[usize], Vec<usize>> = BTreeMap::new();
                    for (i, ballot) in profile.ballots().iter().enumerate() {
                        by_ballot.entry(ballot.as_slice()).or_default().push(i);
                    }
                    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = by_ballot
                        .into_iter()
                        .map(|(b, voters)| (b.to_vec(), voters))
                        .collect();
                    groups.sort_unstable_by_key(|(_, voters)| voters[0]);
                    (classes, groups)
                }
            };

        let mut class_of = vec![0; m];
        for (k, class) in classes.iter().enumerate() {
            for &c in class {
                class_of[c] = k;
            }
        }
        let mut supporters = vec![Vec::new(); classes.len()];
        let groups: Vec<VoterGroup> = groups_raw
            .into_iter()
            .enumerate()
            .map(|(g, (ballot, voters))| {
                let mut cls: Vec<usize> = ballot.iter().map(|&c| class_of[c]).collect();
                cls.sort_unstable();
                cls.dedup();
                for &k in &cls {
                    supporters[k].push(g);
                }
                VoterGroup {
                    classes: cls,
                    ballot_len: ballot.len(),
                    voters,
                }
            })
            .collect();
        Reduced {
            classes,
            class_of,
            groups,
            supporters,
        }
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn pattern_of(&self, committee: &Committee) -> Vec<usize> {
        let mut pattern = vec![0; self.classes.len()];
        for &c in committee.members() {
            pattern[self.class_of[c]] += 1;
        }
        pattern
    }

    /// `|A ∩ S|` for the ballot shared by `group`.
    pub fn hits(&self, group: &VoterGroup, pattern: &[usize]) -> usize {
        group.classes.iter().map(|&k| pattern[k]).sum()
    }

    fn check_size(&self, k: usize, limits: &Limits) -> Result<()> {
        let m = self.class_of.len();
        if k > m {
            return Err(Error::Precondition(alloc::format!(
                "committee size {k} exceeds the {m} candidates"
            )));
        }
        let required = count_bounded_compositions(&self.class_sizes(), k);
        if required > limits.committee_cap as u128 {
            return Err(Error::EnumerationCap {
                required,
                cap: limits.committee_cap,
            });
        }
        Ok(())
    }

    /// All patterns of size `k` with the best score; `None` marks an
    /// infeasible pattern.
    pub fn optimal_patterns(
        &self,
        k: usize,
        limits: &Limits,
        goal: Goal,
        mut score: impl FnMut(&[usize]) -> Result<Option<Rational>>,
    ) -> Result<(Rational, BTreeSet<Vec<usize>>)> {
        self.check_size(k, limits)?;
        let mut best: Option<Rational> = None;
        let mut winners = BTreeSet::new();
        for_each_bounded_composition(&self.class_sizes(), k, |pattern| {
            let Some(value) = score(pattern)? else {
                return Ok(());
            };
            let better = match &best {
                None => true,
                Some(b) => match goal {
                    Goal::Maximize => value > *b,
                    Goal::Minimize => value < *b,
                },
            };
            if better {
                best = Some(value);
                winners.clear();
                winners.insert(pattern.to_vec());
            } else if best.as_ref() == Some(&value) {
                winners.insert(pattern.to_vec());
            }
            Ok::<(), Error>(())
        })?;
        match best {
            Some(b) => Ok((b, winners)),
            None => Err(Error::Infeasible(alloc::format!(
                "no feasible committee of size {k}"
            ))),
        }
    }

    pub fn committee_set(&self, patterns: BTreeSet<Vec<usize>>) -> CommitteeSet {
        CommitteeSet {
            classes: self.classes.clone(),
            class_of: self.class_of.clone(),
            patterns,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    Maximize,
    Minimize,
}

fn representative(classes: &[Vec<usize>], pattern: &[usize]) -> Committee {
    let mut members: Vec<usize> = classes
        .iter()
        .zip(pattern)
        .flat_map(|(class, &n)| class[..n].iter().copied())
        .collect();
    members.sort_unstable();
    Committee::from_sorted(members)
}

/// A set of winning committees, stored compactly: committees are grouped by
/// how many members they take from each class of interchangeable candidates,
/// and every committee with a listed pattern belongs to the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommitteeSet {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    patterns: BTreeSet<Vec<usize>>,
}

impl CommitteeSet {
    /// Number of committees in the set (saturating).
    pub fn len(&self) -> u128 {
        self.patterns
            .iter()
            .map(|p| {
                self.classes
                    .iter()
                    .zip(p)
                    .fold(1u128, |acc, (class, &n)| acc.saturating_mul(binomial(class.len(), n)))
            })
            .fold(0u128, u128::saturating_add)
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    /// One committee per pattern; enough for any statistic that is invariant
    /// under swapping interchangeable candidates.
    pub fn representatives(&self) -> impl Iterator<Item = Committee> + '_ {
        self.patterns.iter().map(|p| representative(&self.classes, p))
    }

    pub fn contains(&self, committee: &Committee) -> bool {
        if committee.members().iter().any(|&c| c >= self.class_of.len()) {
            return false;
        }
        let mut pattern = vec![0; self.classes.len()];
        for &c in committee.members() {
            pattern[self.class_of[c]] += 1;
        }
        self.patterns.contains(&pattern)
    }

    /// The only committee, if the set has exactly one.
    pub fn unique(&self) -> Option<Committee> {
        if self.len() == 1 {
            self.representatives().next()
        } else {
            None
        }
    }

    /// Every committee, sorted. Fails with [`Error::TieExplosion`] above `cap`.
    pub fn to_committees(&self, cap: usize) -> Result<BTreeSet<Committee>> {
        if self.len() > cap as u128 {
            return Err(Error::TieExplosion { cap });
        }
        let mut out = BTreeSet::new();
        for pattern in &self.patterns {
            let mut partial: Vec<Vec<usize>> = vec![Vec::new()];
            for (class, &n) in self.classes.iter().zip(pattern) {
                if n == 0 {
                    continue;
                }
                let choices = crate::combinatorics::combinations(class, n);
                partial = partial
                    .iter()
                    .flat_map(|base| {
                        choices.iter().map(move |pick| {
                            let mut next = base.clone();
                            next.extend_from_slice(pick);
                            next
                        })
                    })
                    .collect();
            }
            for mut members in partial {
                members.sort_unstable();
                out.insert(Committee::from_sorted(members));
            }
        }
        Ok(out)
    }
}
