//! Apportionment methods induced by committee rules.
//!
//! An apportionment instance `(v, h)` becomes an approval election: party `i`
//! gets a block of `h` candidates and a block of `v_i` voters, each approving
//! exactly that candidate block, and the committee size is `h`. Running a
//! committee rule and counting the winners per block gives a seat
//! distribution.
//!
//! On these profiles every rule's objective depends only on the seat counts,
//! so [`Route::ClosedForm`] optimizes the induced objective over seat
//! distributions directly. [`Route::Committees`] runs the committee rule on
//! the embedded profile instead; the two agree.

mod separable;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use separable::{optimize, Aggregate, Goal};

use crate::error::{Error, Result};
use crate::model::{
    ApportionmentInstance, ApprovalProfile, Committee, Limits, OutcomeSet, SeatDistribution,
};
use crate::multiwinner::{elect, Grouping, Options, Rule};
use crate::rational::{int, Rational};
use crate::sequence::WeightSequence;

/// Block structure of an embedded party-list profile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyListEmbedding {
    candidate_blocks: Vec<Range<usize>>,
    voter_blocks: Vec<Range<usize>>,
    seats: usize,
}

impl PartyListEmbedding {
    pub fn parties(&self) -> usize {
        self.candidate_blocks.len()
    }

    /// Candidates standing for `party`.
    pub fn candidate_block(&self, party: usize) -> Range<usize> {
        self.candidate_blocks[party].clone()
    }

    /// Voters supporting `party`.
    pub fn voter_block(&self, party: usize) -> Range<usize> {
        self.voter_blocks[party].clone()
    }

    pub fn committee_size(&self) -> usize {
        self.seats
    }

    /// Seats won by each party.
    pub fn extract_seats(&self, committee: &Committee) -> Result<SeatDistribution> {
        if committee.len() != self.seats {
            return Err(Error::Precondition(format!(
                "committee has {} members, expected {}",
                committee.len(),
                self.seats
            )));
        }
        let m = self.parties() * self.seats;
        if let Some(&c) = committee.members().iter().find(|&&c| c >= m) {
            return Err(Error::Precondition(format!(
                "candidate {} is not in the embedding",
                c + 1
            )));
        }
        let mut x = vec![0; self.parties()];
        for &c in committee.members() {
            x[c / self.seats] += 1;
        }
        Ok(SeatDistribution(x))
    }
}

/// The party-list profile of `inst` and its committee size.
pub fn embed(inst: &ApportionmentInstance) -> Result<(ApprovalProfile, usize, PartyListEmbedding)> {
    let h = inst.seats();
    let n = usize::try_from(inst.total_votes()).map_err(|_| Error::Overflow("voter count"))?;
    let mut ballots = Vec::with_capacity(n);
    let mut candidate_blocks = Vec::with_capacity(inst.parties());
    let mut voter_blocks = Vec::with_capacity(inst.parties());
    for (i, &v) in inst.votes().iter().enumerate() {
        let block = i * h..(i + 1) * h;
        let start = ballots.len();
        for _ in 0..v {
            ballots.push(block.clone().collect());
        }
        voter_blocks.push(start..ballots.len());
        candidate_blocks.push(block);
    }
    let profile = ApprovalProfile::new(inst.parties() * h, ballots)?;
    Ok((
        profile,
        h,
        PartyListEmbedding {
            candidate_blocks,
            voter_blocks,
            seats: h,
        },
    ))
}

/// How [`induced_apportionment_with`] evaluates a rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Optimize the induced objective over seat distributions.
    #[default]
    ClosedForm,
    /// Elect committees on the embedded profile.
    Committees(Grouping),
}

/// Seat distributions of an induced method, with the optimal objective value
/// for optimizing rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedOutcome {
    pub outcomes: OutcomeSet<SeatDistribution>,
    pub score: Option<Rational>,
}

/// All seat distributions the induced method `A_rule` can output.
pub fn induced_apportionment(
    rule: &Rule,
    inst: &ApportionmentInstance,
) -> Result<OutcomeSet<SeatDistribution>> {
    induced_apportionment_with(rule, inst, Route::ClosedForm, &Limits::default())
}

pub fn induced_apportionment_with(
    rule: &Rule,
    inst: &ApportionmentInstance,
    route: Route,
    limits: &Limits,
) -> Result<OutcomeSet<SeatDistribution>> {
    induce(rule, inst, route, limits).map(|o| o.outcomes)
}

pub fn induce(
    rule: &Rule,
    inst: &ApportionmentInstance,
    route: Route,
    limits: &Limits,
) -> Result<InducedOutcome> {
    match route {
        Route::ClosedForm => closed_form(rule, inst, limits),
        Route::Committees(grouping) => via_committees(rule, inst, grouping, limits),
    }
}

fn via_committees(
    rule: &Rule,
    inst: &ApportionmentInstance,
    grouping: Grouping,
    limits: &Limits,
) -> Result<InducedOutcome> {
    let (profile, k, embedding) = embed(inst)?;
    let options = Options {
        limits: *limits,
        grouping,
    };
    let election = elect(&profile, k, rule, &options)?;
    let mut outcomes = BTreeSet::new();
    // Seat counts are constant on each class pattern when clones are merged;
    // otherwise every committee is visited.
    let committees: Vec<Committee> = match grouping {
        Grouping::Clones => election.committees.representatives().collect(),
        Grouping::Plain => election
            .committees
            .to_committees(limits.committee_cap)?
            .into_iter()
            .collect(),
    };
    for committee in &committees {
        outcomes.insert(embedding.extract_seats(committee)?);
    }
    if outcomes.len() > limits.outcome_cap {
        return Err(Error::TieExplosion {
            cap: limits.outcome_cap,
        });
    }
    Ok(InducedOutcome {
        outcomes: OutcomeSet::new(outcomes),
        score: election.score,
    })
}

fn monroe_size(inst: &ApportionmentInstance) -> Result<u64> {
    let h = inst.seats() as u64;
    let n = inst.total_votes();
    if !n.is_multiple_of(h) {
        return Err(Error::Divisibility {
            voters: n as usize,
            size: inst.seats(),
        });
    }
    Ok(n / h)
}

fn table(inst: &ApportionmentInstance, f: impl Fn(u64, usize) -> Rational) -> Vec<Vec<Rational>> {
    inst.votes()
        .iter()
        .map(|&v| (0..=inst.seats()).map(|x| f(v, x)).collect())
        .collect()
}

fn closed_form(rule: &Rule, inst: &ApportionmentInstance, limits: &Limits) -> Result<InducedOutcome> {
    let h = inst.seats();
    let (table, aggregate, goal) = match rule {
        Rule::SeqOwa(w) => return sequential(inst, w, limits),
        Rule::Owa(w) => {
            let sums = w.prefix_sums(h);
            (table(inst, |v, x| int(v) * &sums[x]), Aggregate::Sum, Goal::Maximize)
        }
        Rule::Monroe => {
            let size = monroe_size(inst)?;
            (
                table(inst, |v, x| int(v.min(x as u64 * size))),
                Aggregate::Sum,
                Goal::Maximize,
            )
        }
        Rule::MaxPhragmen => (
            table(inst, |v, x| Rational::new((x as u64).into(), v.into())),
            Aggregate::Bottleneck,
            Goal::Minimize,
        ),
        Rule::VarPhragmen => (
            table(inst, |v, x| Rational::new(((x * x) as u64).into(), v.into())),
            Aggregate::Sum,
            Goal::Minimize,
        ),
        Rule::Sav => (
            table(inst, |v, x| Rational::new((v * x as u64).into(), (h as u64).into())),
            Aggregate::Sum,
            Goal::Maximize,
        ),
        Rule::Mav => (
            table(inst, |_, x| int(2 * (h - x) as u64)),
            Aggregate::Bottleneck,
            Goal::Minimize,
        ),
    };
    let (score, outcomes) = optimize(&table, h, aggregate, goal, limits.outcome_cap)?;
    Ok(InducedOutcome {
        outcomes: OutcomeSet::new(outcomes),
        score: Some(score),
    })
}

/// The greedy procedure on seat counts: a seat for party `i` gains
/// `v_i * w_{x_i + 1}`, and every tied choice is followed.
fn sequential(inst: &ApportionmentInstance, w: &WeightSequence, limits: &Limits) -> Result<InducedOutcome> {
    let h = inst.seats();
    let weights: Vec<Rational> = (1..=h).map(|j| w.weight_at(j)).collect();
    let mut states: BTreeSet<Vec<usize>> = BTreeSet::from([vec![0; inst.parties()]]);
    for _ in 0..h {
        let mut next = BTreeSet::new();
        for state in &states {
            let mut best: Option<Rational> = None;
            let mut argmax = Vec::new();
            for (i, &v) in inst.votes().iter().enumerate() {
                if state[i] == h {
                    continue;
                }
                let gain = int(v) * &weights[state[i]];
                match &best {
                    Some(b) if gain < *b => {}
                    Some(b) if gain == *b => argmax.push(i),
                    _ => {
                        best = Some(gain);
                        argmax.clear();
                        argmax.push(i);
                    }
                }
            }
            for i in argmax {
                let mut s = state.clone();
                s[i] += 1;
                next.insert(s);
            }
        }
        if next.len() > limits.committee_cap {
            return Err(Error::EnumerationCap {
                required: next.len() as u128,
                cap: limits.committee_cap,
            });
        }
        states = next;
    }
    if states.len() > limits.outcome_cap {
        return Err(Error::TieExplosion {
            cap: limits.outcome_cap,
        });
    }
    Ok(InducedOutcome {
        outcomes: states.into_iter().map(SeatDistribution).collect(),
        score: None,
    })
}

/// OWA satisfaction of the embedded profile for the committee with seat
/// counts `x`: `sum_i v_i * (w_1 + ... + w_{x_i})`.
pub fn partylist_owa_value(
    inst: &ApportionmentInstance,
    weights: &WeightSequence,
    x: &SeatDistribution,
) -> Result<Rational> {
    inst.check_distribution(x)?;
    let sums = weights.prefix_sums(inst.seats());
    Ok(inst
        .votes()
        .iter()
        .zip(x.as_slice())
        .map(|(&v, &s)| int(v) * &sums[s])
        .sum())
}

/// Smallest maximal voter load: `max_i x_i / v_i`.
pub fn partylist_maxload(inst: &ApportionmentInstance, x: &SeatDistribution) -> Result<Rational> {
    inst.check_distribution(x)?;
    Ok(inst
        .votes()
        .iter()
        .zip(x.as_slice())
        .map(|(&v, &s)| Rational::new((s as u64).into(), v.into()))
        .max()
        .expect("at least one party"))
}

/// Least sum of squared voter loads: `sum_i x_i^2 / v_i`.
pub fn partylist_sumsquares(inst: &ApportionmentInstance, x: &SeatDistribution) -> Result<Rational> {
    inst.check_distribution(x)?;
    Ok(inst
        .votes()
        .iter()
        .zip(x.as_slice())
        .map(|(&v, &s)| Rational::new(((s * s) as u64).into(), v.into()))
        .sum())
}

/// Monroe satisfaction: `sum_i min(v_i, x_i * v_+ / h)`. Requires `h | v_+`.
pub fn partylist_monroe_value(inst: &ApportionmentInstance, x: &SeatDistribution) -> Result<Rational> {
    inst.check_distribution(x)?;
    let size = monroe_size(inst)?;
    Ok(inst
        .votes()
        .iter()
        .zip(x.as_slice())
        .map(|(&v, &s)| int(v.min(s as u64 * size)))
        .sum())
}
