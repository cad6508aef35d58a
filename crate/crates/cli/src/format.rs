//! JSON instance files and outcome documents.
//!
//! Candidate ids are 1-based in files. Rationals are written as `"num/den"`
//! strings (integers without a denominator) so no value is ever rounded.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use apportion_core::{
    ApportionmentInstance, ApprovalProfile, Committee, Error, Rational, SeatDistribution,
};
use serde::{Deserialize, Serialize};

/// Either an apportionment instance or an approval profile with a committee
/// size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceFile {
    Apportionment(ApportionmentFile),
    Profile(ProfileFile),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApportionmentFile {
    pub votes: Vec<u64>,
    pub seats: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    pub candidates: usize,
    pub ballots: Vec<Vec<usize>>,
    pub k: usize,
}

impl ApportionmentFile {
    pub fn to_instance(&self) -> Result<ApportionmentInstance, Error> {
        ApportionmentInstance::new(self.votes.clone(), self.seats)
    }

    pub fn from_instance(inst: &ApportionmentInstance) -> Self {
        ApportionmentFile {
            votes: inst.votes().to_vec(),
            seats: inst.seats(),
        }
    }
}

impl ProfileFile {
    pub fn to_profile(&self) -> Result<ApprovalProfile, Error> {
        let mut ballots = Vec::with_capacity(self.ballots.len());
        for (i, ballot) in self.ballots.iter().enumerate() {
            let mut zero_based = Vec::with_capacity(ballot.len());
            for &c in ballot {
                if c == 0 || c > self.candidates {
                    return Err(Error::InvalidProfile(format!(
                        "voter {} approves candidate {c}, expected 1..={}",
                        i + 1,
                        self.candidates
                    )));
                }
                zero_based.push(c - 1);
            }
            ballots.push(zero_based);
        }
        ApprovalProfile::new(self.candidates, ballots)
    }

    pub fn from_profile(profile: &ApprovalProfile, k: usize) -> Self {
        ProfileFile {
            candidates: profile.num_candidates(),
            ballots: profile
                .ballots()
                .iter()
                .map(|b| b.iter().map(|c| c + 1).collect())
                .collect(),
            k,
        }
    }
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

/// 1-based, sorted member ids.
pub fn committee_ids(c: &Committee) -> Vec<usize> {
    c.members().iter().map(|c| c + 1).collect()
}

/// The result of a rule or method run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeDocument {
    pub outcomes: Vec<Vec<usize>>,
    pub scores: BTreeMap<String, String>,
    pub rule: String,
    pub exact: bool,
}

impl OutcomeDocument {
    pub fn new(rule: impl Into<String>, mut outcomes: Vec<Vec<usize>>) -> Self {
        outcomes.sort();
        outcomes.dedup();
        OutcomeDocument {
            outcomes,
            scores: BTreeMap::new(),
            rule: rule.into(),
            exact: true,
        }
    }

    pub fn from_distributions<'a>(
        rule: impl Into<String>,
        xs: impl IntoIterator<Item = &'a SeatDistribution>,
    ) -> Self {
        Self::new(rule, xs.into_iter().map(|x| x.0.clone()).collect())
    }

    pub fn from_committees<'a>(
        rule: impl Into<String>,
        committees: impl IntoIterator<Item = &'a Committee>,
    ) -> Self {
        Self::new(rule, committees.into_iter().map(committee_ids).collect())
    }

    pub fn with_score(mut self, name: &str, value: &Rational) -> Self {
        self.scores.insert(name.to_string(), rational_string(value));
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_table(&self, kind: OutcomeKind) -> String {
        let mut out = String::new();
        writeln!(out, "rule: {}", self.rule).unwrap();
        writeln!(out, "outcomes: {}", self.outcomes.len()).unwrap();
        for o in &self.outcomes {
            let items: Vec<String> = o.iter().map(|v| v.to_string()).collect();
            match kind {
                OutcomeKind::Seats => writeln!(out, "  ({})", items.join(",")).unwrap(),
                OutcomeKind::Committee => {
                    let named: Vec<String> = o.iter().map(|c| format!("c{c}")).collect();
                    writeln!(out, "  {{{}}}", named.join(",")).unwrap()
                }
            }
        }
        for (name, value) in &self.scores {
            writeln!(out, "{name}: {value}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeKind {
    Seats,
    Committee,
}

#[cfg(test)]
mod tests {
    use super::*;
    use apportion_core::rational::ratio;

    #[test]
    fn instance_files_parse() {
        let a: InstanceFile = serde_json::from_str(r#"{"votes":[6,7],"seats":3}"#).unwrap();
        assert_eq!(
            a,
            InstanceFile::Apportionment(ApportionmentFile {
                votes: vec![6, 7],
                seats: 3
            })
        );
        let p: InstanceFile =
            serde_json::from_str(r#"{"candidates":3,"ballots":[[1,3],[]],"k":2}"#).unwrap();
        let InstanceFile::Profile(p) = p else { panic!() };
        let profile = p.to_profile().unwrap();
        assert_eq!(profile.ballots(), &[vec![0, 2], vec![]]);
        assert_eq!(ProfileFile::from_profile(&profile, 2), p);
        assert!(serde_json::from_str::<InstanceFile>(r#"{"votes":[1],"seats":1,"x":0}"#).is_err());
    }

    #[test]
    fn bad_candidate_ids() {
        let p = ProfileFile {
            candidates: 2,
            ballots: vec![vec![0]],
            k: 1,
        };
        assert!(p.to_profile().is_err());
        let p = ProfileFile {
            candidates: 2,
            ballots: vec![vec![3]],
            k: 1,
        };
        assert!(p.to_profile().is_err());
    }

    #[test]
    fn documents_are_sorted_and_exact() {
        let doc = OutcomeDocument::new("dhondt", vec![vec![1, 0], vec![0, 1]])
            .with_score("optimum", &ratio(27, 2));
        assert_eq!(doc.outcomes, vec![vec![0, 1], vec![1, 0]]);
        let json = doc.to_json();
        assert!(json.contains("\"27/2\""));
        assert!(json.contains("\"exact\": true"));
        let back: OutcomeDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }
}
