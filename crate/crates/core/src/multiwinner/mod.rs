//! Approval-based committee rules: OWA-based rules and their sequential
//! variants, Monroe, max- and var-Phragmén, satisfaction approval voting and
//! minimax approval voting.
//!
//! Winner determination is exhaustive and exact. Clone candidates are
//! searched once per class (see [`Grouping`]), which keeps party-list
//! profiles small without changing any outcome.

mod approval;
mod flow;
mod monroe;
mod owa;
mod phragmen;
mod reduced;

use core::fmt;

pub use approval::{mav_score, mav_winners, mav_winners_with, sav_score, sav_winners, sav_winners_with};
pub use monroe::{monroe_satisfaction, monroe_winners, monroe_winners_with};
pub use owa::{owa_satisfaction, owa_winners, owa_winners_with, seq_owa_winners, seq_owa_winners_with};
pub use phragmen::{
    balanced_loads, load_witness, max_phragmen_winners, max_phragmen_winners_with,
    min_max_load, validate_load, var_phragmen_winners, var_phragmen_winners_with,
    LoadDistribution, VoterLoadVector,
};
pub use reduced::{CommitteeSet, Grouping, Options};

use crate::error::Result;
use crate::model::ApprovalProfile;
use crate::rational::Rational;
use crate::sequence::WeightSequence;

/// Winning committees of an optimizing rule together with the optimal score.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Winners {
    pub committees: CommitteeSet,
    pub score: Rational,
}

/// A committee rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Owa(WeightSequence),
    SeqOwa(WeightSequence),
    Monroe,
    MaxPhragmen,
    VarPhragmen,
    Sav,
    Mav,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Owa(w) => write!(f, "owa:{w}"),
            Rule::SeqOwa(w) => write!(f, "seq-owa:{w}"),
            Rule::Monroe => f.write_str("monroe"),
            Rule::MaxPhragmen => f.write_str("max-phragmen"),
            Rule::VarPhragmen => f.write_str("var-phragmen"),
            Rule::Sav => f.write_str("sav"),
            Rule::Mav => f.write_str("mav"),
        }
    }
}

/// Outcome of [`elect`]; sequential rules have no single optimal score.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    pub committees: CommitteeSet,
    pub score: Option<Rational>,
}

/// Runs `rule` on `(profile, k)`.
pub fn elect(profile: &ApprovalProfile, k: usize, rule: &Rule, options: &Options) -> Result<Election> {
    let optimal = |w: Result<Winners>| {
        w.map(|w| Election {
            committees: w.committees,
            score: Some(w.score),
        })
    };
    match rule {
        Rule::Owa(w) => optimal(owa_winners_with(profile, k, w, options)),
        Rule::SeqOwa(w) => Ok(Election {
            committees: seq_owa_winners_with(profile, k, w, options)?,
            score: None,
        }),
        Rule::Monroe => optimal(monroe_winners_with(profile, k, options)),
        Rule::MaxPhragmen => optimal(max_phragmen_winners_with(profile, k, options)),
        Rule::VarPhragmen => optimal(var_phragmen_winners_with(profile, k, options)),
        Rule::Sav => optimal(sav_winners_with(profile, k, options)),
        Rule::Mav => optimal(mav_winners_with(profile, k, options)),
    }
}
