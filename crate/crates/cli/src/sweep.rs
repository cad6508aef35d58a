//! Verification sweeps: each claim is checked on every instance of an
//! exhaustive grid or on seeded random instances.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use apportion_core::combinatorics::for_each_bounded_composition;
use apportion_core::properties::{
    check_cambridge, check_lower_quota, check_penrose, check_pjr_with, check_quota, check_threshold,
};
use apportion_core::rational::{int, ratio};
use apportion_core::reduction::{embed, induce, Route};
use apportion_core::{
    divisor_apportion, largest_remainder, ApportionmentInstance, Committee, DivisorSequence,
    Error, Grouping, Limits, OutcomeSet, Rule, SeatDistribution, WeightSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The claims `verify_claim` knows how to check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    SeqEquiv,
    OwaDivisor,
    PavDhondt,
    MaxphragDhondt,
    MonroeLr,
    VarphragSl,
    HarmonicoddSl,
    CcLargest,
    TopkPlurality,
    SavTopk,
    DhondtLowerquota,
    LrQuota,
    Penrose,
    Cambridge,
    Threshold,
    PjrImpliesLowerquota,
}

impl Claim {
    pub const ALL: [Claim; 16] = [
        Claim::SeqEquiv,
        Claim::OwaDivisor,
        Claim::PavDhondt,
        Claim::MaxphragDhondt,
        Claim::MonroeLr,
        Claim::VarphragSl,
        Claim::HarmonicoddSl,
        Claim::CcLargest,
        Claim::TopkPlurality,
        Claim::SavTopk,
        Claim::DhondtLowerquota,
        Claim::LrQuota,
        Claim::Penrose,
        Claim::Cambridge,
        Claim::Threshold,
        Claim::PjrImpliesLowerquota,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::SeqEquiv => "seq-equiv",
            Claim::OwaDivisor => "owa-divisor",
            Claim::PavDhondt => "pav-dhondt",
            Claim::MaxphragDhondt => "maxphrag-dhondt",
            Claim::MonroeLr => "monroe-lr",
            Claim::VarphragSl => "varphrag-sl",
            Claim::HarmonicoddSl => "harmonicodd-sl",
            Claim::CcLargest => "cc-largest",
            Claim::TopkPlurality => "topk-plurality",
            Claim::SavTopk => "sav-topk",
            Claim::DhondtLowerquota => "dhondt-lowerquota",
            Claim::LrQuota => "lr-quota",
            Claim::Penrose => "penrose",
            Claim::Cambridge => "cambridge",
            Claim::Threshold => "threshold",
            Claim::PjrImpliesLowerquota => "pjr-implies-lowerquota",
        }
    }

    /// Instances the claim is stated for.
    fn applies_to(self, inst: &ApportionmentInstance) -> bool {
        match self {
            Claim::MonroeLr => inst.total_votes().is_multiple_of(inst.seats() as u64),
            Claim::CcLargest => inst.parties() > inst.seats(),
            Claim::Threshold => inst.seats() >= 2,
            _ => true,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown claim {0:?}")]
pub struct UnknownClaim(pub String);

impl FromStr for Claim {
    type Err = UnknownClaim;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Claim::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| UnknownClaim(s.to_string()))
    }
}

/// How instances are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every vote vector and house size within the bounds.
    Exhaustive,
    /// `trials` instances drawn uniformly from the bounds.
    Random { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub min_parties: usize,
    pub max_parties: usize,
    pub max_votes: u64,
    pub max_seats: usize,
    pub mode: Mode,
    /// Keep only instances with `h | v_+`.
    pub divisible_only: bool,
    /// Replaces the weight sequences a claim quantifies over.
    pub weights: Option<Vec<WeightSequence>>,
    /// Also run every rule through the committee route on the embedded
    /// profile and require the same outcome set.
    pub cross_check: bool,
    pub limits: Limits,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            min_parties: 2,
            max_parties: 3,
            max_votes: 10,
            max_seats: 5,
            mode: Mode::Exhaustive,
            divisible_only: false,
            weights: None,
            cross_check: true,
            limits: Limits::default(),
        }
    }
}

impl SweepConfig {
    pub fn exhaustive(max_parties: usize, max_votes: u64, max_seats: usize) -> Self {
        SweepConfig {
            max_parties,
            max_votes,
            max_seats,
            ..SweepConfig::default()
        }
    }

    pub fn random(trials: usize, seed: u64, max_parties: usize, max_votes: u64, max_seats: usize) -> Self {
        SweepConfig {
            max_parties,
            max_votes,
            max_seats,
            mode: Mode::Random { trials, seed },
            ..SweepConfig::default()
        }
    }

    fn validate(&self) -> Result<(), Error> {
        if self.min_parties == 0 || self.max_parties < self.min_parties {
            return Err(Error::Precondition(format!(
                "party range {}..={} is empty",
                self.min_parties, self.max_parties
            )));
        }
        if self.max_votes == 0 || self.max_seats == 0 {
            return Err(Error::Precondition("vote and seat bounds must be positive".into()));
        }
        Ok(())
    }

    /// Instances in canonical order.
    pub fn instances(&self) -> Result<Vec<ApportionmentInstance>, Error> {
        self.validate()?;
        let mut out = Vec::new();
        match self.mode {
            Mode::Exhaustive => {
                for p in self.min_parties..=self.max_parties {
                    let mut votes = vec![1u64; p];
                    loop {
                        for h in 1..=self.max_seats {
                            out.push(ApportionmentInstance::new(votes.clone(), h)?);
                        }
                        // odometer over [1, max_votes]^p
                        let Some(i) = votes.iter().rposition(|&v| v < self.max_votes) else {
                            break;
                        };
                        votes[i] += 1;
                        for v in &mut votes[i + 1..] {
                            *v = 1;
                        }
                    }
                }
            }
            Mode::Random { trials, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..trials {
                    out.push(random_instance(
                        &mut rng,
                        self.min_parties..=self.max_parties,
                        self.max_votes,
                        self.max_seats,
                    ));
                }
            }
        }
        if self.divisible_only {
            out.retain(|i| i.total_votes() % i.seats() as u64 == 0);
        }
        Ok(out)
    }
}

pub fn random_instance(
    rng: &mut impl Rng,
    parties: std::ops::RangeInclusive<usize>,
    max_votes: u64,
    max_seats: usize,
) -> ApportionmentInstance {
    let p = rng.gen_range(parties);
    let votes = (0..p).map(|_| rng.gen_range(1..=max_votes)).collect();
    ApportionmentInstance::new(votes, rng.gen_range(1..=max_seats)).expect("bounds are positive")
}

/// `count` non-increasing positive weight sequences with short random
/// prefixes and a positive constant tail.
pub fn random_weights(seed: u64, count: usize) -> Vec<WeightSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x005e_ed0f_0e1a);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=6);
            let mut current = ratio(rng.gen_range(1..=12), 1);
            let mut prefix = Vec::with_capacity(len);
            for _ in 0..len {
                prefix.push(current.clone());
                // multiply by a factor in (0, 1]
                let den = rng.gen_range(1..=6);
                let num = rng.gen_range(1..=den);
                current *= ratio(num, den);
            }
            WeightSequence::explicit(prefix, current).expect("positive weights")
        })
        .collect()
}

/// An instance on which a claim failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub votes: Vec<u64>,
    pub seats: usize,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v={:?} h={}: {}", self.votes, self.seats, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub claim: Claim,
    pub instances_tested: usize,
    pub skipped: usize,
    pub failures: Vec<Failure>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} instances, {} skipped, {} failures",
            self.claim,
            self.instances_tested,
            self.skipped,
            self.failures.len()
        )
    }
}

pub fn verify_claim(claim: Claim, cfg: &SweepConfig) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let mut report = VerificationReport {
        claim,
        instances_tested: 0,
        skipped: 0,
        failures: Vec::new(),
        elapsed: Duration::ZERO,
    };
    let weights = claim_weights(claim, cfg);
    for inst in cfg.instances()? {
        let inst = match claim {
            // the claim needs h >= 5p; shift the grid up by the reserved seats
            Claim::Cambridge => {
                ApportionmentInstance::new(inst.votes().to_vec(), inst.seats() + 5 * inst.parties())?
            }
            _ => inst,
        };
        if !claim.applies_to(&inst) {
            report.skipped += 1;
            continue;
        }
        report.instances_tested += 1;
        let checker = Checker { cfg, inst: &inst };
        if let Some(detail) = checker.check(claim, &weights)? {
            report.failures.push(Failure {
                votes: inst.votes().to_vec(),
                seats: inst.seats(),
                detail,
            });
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn claim_weights(claim: Claim, cfg: &SweepConfig) -> Vec<WeightSequence> {
    if let Some(w) = &cfg.weights {
        return w.clone();
    }
    match claim {
        Claim::SeqEquiv => vec![
            WeightSequence::Pav,
            WeightSequence::HarmonicOdd,
            WeightSequence::ChamberlinCourant,
            WeightSequence::TopK,
        ],
        Claim::OwaDivisor => {
            let seed = match cfg.mode {
                Mode::Random { seed, .. } => seed,
                Mode::Exhaustive => 0,
            };
            random_weights(seed, 3)
        }
        Claim::CcLargest => vec![WeightSequence::ChamberlinCourant],
        Claim::TopkPlurality | Claim::SavTopk => vec![WeightSequence::TopK],
        Claim::PavDhondt => vec![WeightSequence::Pav],
        Claim::HarmonicoddSl => vec![WeightSequence::HarmonicOdd],
        Claim::Penrose => vec![WeightSequence::Penrose],
        Claim::Threshold => vec![WeightSequence::Pav],
        _ => Vec::new(),
    }
}

fn show(set: &OutcomeSet<SeatDistribution>) -> String {
    let items: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

struct Checker<'a> {
    cfg: &'a SweepConfig,
    inst: &'a ApportionmentInstance,
}

impl Checker<'_> {
    /// Outcome set of an induced method, after checking that the committee
    /// route agrees when cross-checking is on.
    fn induced(&self, rule: &Rule) -> Result<Result<OutcomeSet<SeatDistribution>, String>, Error> {
        let fast = induce(rule, self.inst, Route::ClosedForm, &self.cfg.limits)?.outcomes;
        if self.cfg.cross_check {
            let slow =
                induce(rule, self.inst, Route::Committees(Grouping::Clones), &self.cfg.limits)?
                    .outcomes;
            if slow != fast {
                return Ok(Err(format!(
                    "{rule}: closed form {} but committees give {}",
                    show(&fast),
                    show(&slow)
                )));
            }
        }
        Ok(Ok(fast))
    }

    fn equal(&self, rule: &Rule, expected: &OutcomeSet<SeatDistribution>, what: &str) -> Result<Option<String>, Error> {
        Ok(match self.induced(rule)? {
            Err(detail) => Some(detail),
            Ok(got) if &got != expected => {
                Some(format!("{rule} gives {} but {what} gives {}", show(&got), show(expected)))
            }
            Ok(_) => None,
        })
    }

    fn all_satisfy(
        &self,
        rule: &Rule,
        what: &str,
        mut property: impl FnMut(&SeatDistribution) -> Result<bool, Error>,
    ) -> Result<Option<String>, Error> {
        let outcomes = match self.induced(rule)? {
            Err(detail) => return Ok(Some(detail)),
            Ok(o) => o,
        };
        for x in outcomes.iter() {
            if !property(x)? {
                return Ok(Some(format!("{rule} outcome {x} violates {what}")));
            }
        }
        Ok(None)
    }

    fn check(&self, claim: Claim, weights: &[WeightSequence]) -> Result<Option<String>, Error> {
        let inst = self.inst;
        let dhondt = || divisor_apportion(inst, &DivisorSequence::dhondt());
        let sainte_lague = || divisor_apportion(inst, &DivisorSequence::sainte_lague());
        match claim {
            Claim::SeqEquiv => {
                for w in weights {
                    let optimal = match self.induced(&Rule::Owa(w.clone()))? {
                        Err(d) => return Ok(Some(d)),
                        Ok(o) => o,
                    };
                    if let Some(d) = self.equal(&Rule::SeqOwa(w.clone()), &optimal, &format!("owa:{w}"))? {
                        return Ok(Some(d));
                    }
                }
                Ok(None)
            }
            Claim::OwaDivisor => {
                for w in weights {
                    let expected = divisor_apportion(inst, &DivisorSequence::from_weights(w.clone()))?;
                    if let Some(d) = self.equal(&Rule::Owa(w.clone()), &expected, "the divisor method")? {
                        return Ok(Some(d));
                    }
                }
                Ok(None)
            }
            Claim::PavDhondt | Claim::HarmonicoddSl => {
                let expected = if claim == Claim::PavDhondt { dhondt()? } else { sainte_lague()? };
                for w in weights {
                    let name = if claim == Claim::PavDhondt { "D'Hondt" } else { "Sainte-Lague" };
                    if let Some(d) = self.equal(&Rule::Owa(w.clone()), &expected, name)? {
                        return Ok(Some(d));
                    }
                }
                Ok(None)
            }
            Claim::MaxphragDhondt => self.equal(&Rule::MaxPhragmen, &dhondt()?, "D'Hondt"),
            Claim::VarphragSl => self.equal(&Rule::VarPhragmen, &sainte_lague()?, "Sainte-Lague"),
            Claim::MonroeLr => self.equal(&Rule::Monroe, &largest_remainder(inst)?, "largest remainder"),
            Claim::CcLargest => {
                let expected = one_seat_each_to_largest(inst);
                for w in weights {
                    if let Some(d) = self.equal(&Rule::Owa(w.clone()), &expected, "one seat per largest party")? {
                        return Ok(Some(d));
                    }
                }
                Ok(None)
            }
            Claim::TopkPlurality => {
                let expected = all_to_plurality(inst);
                for w in weights {
                    if let Some(d) = self.equal(&Rule::Owa(w.clone()), &expected, "all seats to the plurality party")? {
                        return Ok(Some(d));
                    }
                }
                Ok(None)
            }
            Claim::SavTopk => {
                let expected = match self.induced(&Rule::Owa(weights[0].clone()))? {
                    Err(d) => return Ok(Some(d)),
                    Ok(o) => o,
                };
                self.equal(&Rule::Sav, &expected, &format!("owa:{}", weights[0]))
            }
            Claim::DhondtLowerquota => {
                for x in dhondt()?.iter() {
                    if !check_lower_quota(inst, x)? {
                        return Ok(Some(format!("D'Hondt outcome {x} violates lower quota")));
                    }
                }
                Ok(None)
            }
            Claim::LrQuota => {
                for x in largest_remainder(inst)?.iter() {
                    if !check_quota(inst, x)? {
                        return Ok(Some(format!("largest remainder outcome {x} violates quota")));
                    }
                }
                Ok(None)
            }
            Claim::Penrose => {
                for w in weights {
                    if let Some(d) = self.all_satisfy(&Rule::Owa(w.clone()), "the Penrose condition", |x| check_penrose(inst, x))? {
                        return Ok(Some(d));
                    }
                }
                Ok(None)
            }
            Claim::Cambridge => {
                let z = int(5 * inst.total_votes() + 1);
                let rule = Rule::Owa(WeightSequence::affine(z)?);
                self.all_satisfy(&rule, "the Cambridge compromise", |x| check_cambridge(inst, x, 5))
            }
            Claim::Threshold => {
                for w in weights {
                    for t in [1, 2].into_iter().filter(|&t| t < inst.seats()) {
                        let rule = Rule::Owa(WeightSequence::truncated(w.clone(), t));
                        let what = format!("the threshold t={t}");
                        if let Some(d) = self.all_satisfy(&rule, &what, |x| check_threshold(inst, x, t))? {
                            return Ok(Some(d));
                        }
                    }
                }
                Ok(None)
            }
            Claim::PjrImpliesLowerquota => pjr_implies_lower_quota(inst, &self.cfg.limits),
        }
    }
}

/// One seat to each party of some set of `h` parties that no outside party
/// outvotes.
fn one_seat_each_to_largest(inst: &ApportionmentInstance) -> OutcomeSet<SeatDistribution> {
    let h = inst.seats();
    let p = inst.parties();
    let v = inst.votes();
    let mut out = BTreeSet::new();
    for_each_bounded_composition::<()>(&vec![1; p], h, |x| {
        let inside = (0..p).filter(|&i| x[i] == 1).map(|i| v[i]).min();
        let outside = (0..p).filter(|&i| x[i] == 0).map(|i| v[i]).max();
        if inside >= outside {
            out.insert(SeatDistribution(x.to_vec()));
        }
        Ok(())
    })
    .expect("visitor never fails");
    OutcomeSet::new(out)
}

/// Every distribution that gives all seats to parties with the most votes.
fn all_to_plurality(inst: &ApportionmentInstance) -> OutcomeSet<SeatDistribution> {
    let top = *inst.votes().iter().max().expect("at least one party");
    let caps: Vec<usize> = inst
        .votes()
        .iter()
        .map(|&v| if v == top { inst.seats() } else { 0 })
        .collect();
    let mut out = BTreeSet::new();
    for_each_bounded_composition::<()>(&caps, inst.seats(), |x| {
        out.insert(SeatDistribution(x.to_vec()));
        Ok(())
    })
    .expect("visitor never fails");
    OutcomeSet::new(out)
}

/// Every committee on the embedded profile that provides PJR extracts to a
/// distribution meeting lower quota. Committees are taken one per seat
/// distribution, since PJR depends only on the per-block counts.
fn pjr_implies_lower_quota(inst: &ApportionmentInstance, limits: &Limits) -> Result<Option<String>, Error> {
    let (profile, k, emb) = embed(inst)?;
    let caps = vec![k; inst.parties()];
    let mut failure = None;
    for_each_bounded_composition::<Error>(&caps, k, |x| {
        if failure.is_some() {
            return Ok(());
        }
        let members = (0..x.len()).flat_map(|i| emb.candidate_block(i).take(x[i])).collect();
        let committee = Committee::new(members)?;
        let x = SeatDistribution(x.to_vec());
        if check_pjr_with(&profile, k, &committee, limits)?
            && !check_lower_quota(inst, &x)?
        {
            failure = Some(format!("committee for {x} provides PJR but violates lower quota"));
        }
        Ok(())
    })?;
    Ok(failure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claim_ids_round_trip() {
        for c in Claim::ALL {
            assert_eq!(c.id().parse::<Claim>().unwrap(), c);
        }
        assert!("nope".parse::<Claim>().is_err());
    }

    #[test]
    fn exhaustive_grid_size() {
        let cfg = SweepConfig::exhaustive(3, 4, 2);
        // p = 2: 16 vote vectors, p = 3: 64, each with 2 house sizes
        assert_eq!(cfg.instances().unwrap().len(), 160);
        let cfg = SweepConfig {
            divisible_only: true,
            ..SweepConfig::exhaustive(2, 2, 2)
        };
        let kept = cfg.instances().unwrap();
        assert!(kept.iter().all(|i| i.total_votes() % i.seats() as u64 == 0));
    }

    #[test]
    fn random_mode_is_deterministic() {
        let cfg = SweepConfig::random(20, 7, 5, 60, 8);
        assert_eq!(cfg.instances().unwrap(), cfg.instances().unwrap());
        let other = SweepConfig::random(20, 8, 5, 60, 8);
        assert_ne!(cfg.instances().unwrap(), other.instances().unwrap());
    }

    #[test]
    fn random_weights_are_valid() {
        for w in random_weights(3, 10) {
            assert!(w.is_non_increasing() && w.is_positive(), "{w}");
        }
    }

    #[test]
    fn reference_sets() {
        let i = ApportionmentInstance::new(vec![5, 3, 3, 1], 2).unwrap();
        let cc = one_seat_each_to_largest(&i);
        let expected: BTreeSet<_> = [vec![1, 1, 0, 0], vec![1, 0, 1, 0]]
            .into_iter()
            .map(SeatDistribution)
            .collect();
        assert_eq!(cc.as_set(), &expected);
        let i = ApportionmentInstance::new(vec![4, 4, 1], 3).unwrap();
        // (3,0,0), (2,1,0), (1,2,0), (0,3,0)
        assert_eq!(all_to_plurality(&i).len(), 4);
    }

    #[test]
    fn small_sweeps_hold() {
        let cfg = SweepConfig::exhaustive(3, 4, 3);
        for claim in Claim::ALL.into_iter().filter(|&c| c != Claim::MaxphragDhondt) {
            let r = verify_claim(claim, &cfg).unwrap();
            assert!(r.holds(), "{r}: {:?}", r.failures.first());
        }
    }

    #[test]
    fn max_phragmen_ties_exceed_dhondt() {
        // every distribution below has maximal voter load 1, but D'Hondt
        // gives the first seat to the party with two votes
        let cfg = SweepConfig::exhaustive(3, 2, 2);
        let r = verify_claim(Claim::MaxphragDhondt, &cfg).unwrap();
        let witness = r.failures.iter().find(|f| f.votes == [1, 1, 2] && f.seats == 2).unwrap();
        assert!(witness.detail.contains("(1,1,0)"));
    }

    #[test]
    fn substituted_weights_fail() {
        let cfg = SweepConfig {
            weights: Some(vec![WeightSequence::ChamberlinCourant]),
            ..SweepConfig::exhaustive(3, 4, 3)
        };
        let r = verify_claim(Claim::TopkPlurality, &cfg).unwrap();
        assert!(!r.holds());
    }
}
