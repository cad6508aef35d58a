//! Representation properties of seat distributions and committees.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::{ApportionmentInstance, ApprovalProfile, Committee, Limits, SeatDistribution};
use crate::multiwinner::Rule;
use crate::reduction::induced_apportionment_with;
use crate::reduction::Route;
use crate::sequence::WeightSequence;

/// `⌊v_i h / v_+⌋` per party.
pub fn lower_quota_bounds(inst: &ApportionmentInstance) -> Vec<usize> {
    (0..inst.parties()).map(|i| inst.quota_bounds(i).0).collect()
}

pub fn check_lower_quota(inst: &ApportionmentInstance, x: &SeatDistribution) -> Result<bool> {
    inst.check_distribution(x)?;
    Ok(at_least(x, &lower_quota_bounds(inst)))
}

pub fn check_quota(inst: &ApportionmentInstance, x: &SeatDistribution) -> Result<bool> {
    inst.check_distribution(x)?;
    Ok((0..inst.parties()).all(|i| {
        let (lo, hi) = inst.quota_bounds(i);
        (lo..=hi).contains(&x[i])
    }))
}

fn at_least(x: &SeatDistribution, bounds: &[usize]) -> bool {
    x.as_slice().iter().zip(bounds).all(|(s, b)| s >= b)
}

/// `⌊h √v_i / Σ_l √v_l⌋` per party, computed exactly.
///
/// If every `v_l v_0` is a perfect square all roots are rational multiples of
/// one another and the ratio is rational. Otherwise the ratio is irrational
/// (square roots of distinct squarefree integers are linearly independent),
/// so narrowing an interval around it always settles the floor.
pub fn penrose_bounds(inst: &ApportionmentInstance) -> Vec<usize> {
    let v = inst.votes();
    let h = BigUint::from(inst.seats());
    let big = |n: u64| BigUint::from(n);

    let rooted: Option<Vec<BigUint>> = v
        .iter()
        .map(|&vl| {
            let prod = big(vl) * big(v[0]);
            let r = prod.sqrt();
            (&r * &r == prod).then_some(r)
        })
        .collect();
    if let Some(roots) = rooted {
        let total: BigUint = roots.iter().sum();
        return roots.iter().map(|r| to_usize(&(&h * r / &total))).collect();
    }

    (0..v.len())
        .map(|i| {
            let mut precision = 32u64;
            loop {
                let scaled: Vec<BigUint> =
                    v.iter().map(|&vl| (big(vl) << (2 * precision)).sqrt()).collect();
                let low_sum: BigUint = scaled.iter().sum();
                let high_sum = &low_sum + BigUint::from(v.len());
                let lower = &h * &scaled[i] / high_sum;
                let upper = &h * (&scaled[i] + 1u32) / &low_sum;
                if lower == upper {
                    break to_usize(&lower);
                }
                precision *= 2;
            }
        })
        .collect()
}

fn to_usize(n: &BigUint) -> usize {
    n.to_usize().expect("bounded by the house size")
}

pub fn check_penrose(inst: &ApportionmentInstance, x: &SeatDistribution) -> Result<bool> {
    inst.check_distribution(x)?;
    Ok(at_least(x, &penrose_bounds(inst)))
}

/// `base + ⌊v_i (h - base·p) / v_+⌋` per party. Requires `h >= base·p`.
pub fn cambridge_bounds(inst: &ApportionmentInstance, base: usize) -> Result<Vec<usize>> {
    let reserved = base
        .checked_mul(inst.parties())
        .ok_or(Error::Overflow("base seats"))?;
    if inst.seats() < reserved {
        return Err(Error::Precondition(format!(
            "{} seats cannot give {base} to each of {} parties",
            inst.seats(),
            inst.parties()
        )));
    }
    let free = (inst.seats() - reserved) as u128;
    let total = u128::from(inst.total_votes());
    Ok(inst
        .votes()
        .iter()
        .map(|&v| base + (u128::from(v) * free / total) as usize)
        .collect())
}

pub fn check_cambridge(inst: &ApportionmentInstance, x: &SeatDistribution, base: usize) -> Result<bool> {
    let bounds = cambridge_bounds(inst, base)?;
    inst.check_distribution(x)?;
    Ok(at_least(x, &bounds))
}

/// Whether every seated party holds more than `t/h` of the votes cast for
/// seated parties. Requires `1 <= t < h`.
pub fn check_threshold(inst: &ApportionmentInstance, x: &SeatDistribution, t: usize) -> Result<bool> {
    if t == 0 || t >= inst.seats() {
        return Err(Error::Precondition(format!(
            "threshold {t} must lie in 1..{}",
            inst.seats()
        )));
    }
    inst.check_distribution(x)?;
    let seated: u128 = (0..inst.parties())
        .filter(|&i| x[i] > 0)
        .map(|i| u128::from(inst.votes()[i]))
        .sum();
    let h = inst.seats() as u128;
    Ok((0..inst.parties())
        .filter(|&i| x[i] > 0)
        .all(|i| u128::from(inst.votes()[i]) * h > t as u128 * seated))
}

/// Proportional justified representation with the default voter cap.
pub fn check_pjr(profile: &ApprovalProfile, k: usize, committee: &Committee) -> Result<bool> {
    check_pjr_with(profile, k, committee, &Limits::default())
}

/// Whether no group `N*` with `|N*| >= ℓ n / k` and `ℓ` commonly approved
/// candidates has fewer than `ℓ` members of `committee` among its approvals.
///
/// Profiles whose ballots are pairwise equal or disjoint (party-list
/// profiles among them) are decided per ballot type; others by exhaustive
/// search over voter groups, up to `limits.pjr_voter_cap` voters.
pub fn check_pjr_with(
    profile: &ApprovalProfile,
    k: usize,
    committee: &Committee,
    limits: &Limits,
) -> Result<bool> {
    profile.check_committee(committee, k)?;
    let n = profile.num_voters();
    if n == 0 {
        return Ok(true);
    }
    if let Some(types) = disjoint_types(profile) {
        return Ok(types.iter().all(|&(ballot, count)| {
            let allowed = (profile.ballot(ballot).len()).min(count * k / n);
            committee.overlap(profile.ballot(ballot)) >= allowed
        }));
    }
    if n > limits.pjr_voter_cap {
        return Err(Error::TooManyVoters {
            voters: n,
            cap: limits.pjr_voter_cap,
        });
    }
    let words = profile.num_candidates().div_ceil(64).max(1);
    let bits = |items: &[usize]| {
        let mut b = vec![0u64; words];
        for &c in items {
            b[c / 64] |= 1 << (c % 64);
        }
        b
    };
    let ballots: Vec<Vec<u64>> = profile.ballots().iter().map(|b| bits(b)).collect();
    let chosen = bits(committee.members());
    let search = PjrSearch {
        ballots: &ballots,
        chosen: &chosen,
        n,
        k,
    };
    let mut union = vec![0u64; words];
    for (first, ballot) in ballots.iter().enumerate() {
        union.copy_from_slice(ballot);
        if search.violated(first + 1, 1, ballot, &mut union) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A representative voter and multiplicity per ballot type, when ballots
/// are pairwise equal or disjoint.
fn disjoint_types(profile: &ApprovalProfile) -> Option<Vec<(usize, usize)>> {
    let mut owner = vec![usize::MAX; profile.num_candidates()];
    let mut types: Vec<(usize, usize)> = Vec::new();
    for (i, ballot) in profile.ballots().iter().enumerate() {
        let Some(&first) = ballot.first() else {
            continue;
        };
        let t = owner[first];
        if t == usize::MAX {
            if ballot.iter().any(|&c| owner[c] != usize::MAX) {
                return None;
            }
            for &c in ballot {
                owner[c] = types.len();
            }
            types.push((i, 1));
        } else {
            if profile.ballot(types[t].0) != ballot.as_slice() {
                return None;
            }
            types[t].1 += 1;
        }
    }
    Some(types)
}

struct PjrSearch<'a> {
    ballots: &'a [Vec<u64>],
    chosen: &'a [u64],
    n: usize,
    k: usize,
}

impl PjrSearch<'_> {
    fn popcount(words: impl Iterator<Item = u64>) -> usize {
        words.map(|w| w.count_ones() as usize).sum()
    }

    /// Checks the group built so far, then every extension by voters `>= next`.
    fn violated(&self, next: usize, size: usize, common: &[u64], union: &mut [u64]) -> bool {
        let shared = Self::popcount(common.iter().copied());
        if shared == 0 {
            return false;
        }
        let represented =
            Self::popcount(union.iter().zip(self.chosen).map(|(u, c)| u & c));
        // the smallest ℓ the committee fails
        let ell = represented + 1;
        if ell <= shared && ell <= self.k && ell * self.n <= size * self.k {
            return true;
        }
        for i in next..self.n {
            let narrowed: Vec<u64> = common.iter().zip(&self.ballots[i]).map(|(a, b)| a & b).collect();
            let saved: Vec<u64> = union.to_vec();
            for (u, b) in union.iter_mut().zip(&self.ballots[i]) {
                *u |= b;
            }
            let found = self.violated(i + 1, size + 1, &narrowed, union);
            union.copy_from_slice(&saved);
            if found {
                return true;
            }
        }
        false
    }
}

/// An induced outcome below lower quota on one of the two instances from the
/// PAV uniqueness argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub instance: ApportionmentInstance,
    pub outcome: SeatDistribution,
}

/// Runs `owa(ws)` on `((Z, jZ-1, ..., jZ-1), jZ)` and
/// `((jZ, Z-1, ..., Z-1), Z+j-1)`, each with `Z+1` parties, and returns the
/// first outcome that violates lower quota.
pub fn thm5_witness(ws: &WeightSequence, j: usize, z: usize) -> Result<Option<Violation>> {
    thm5_witness_with(ws, j, z, &Limits::default())
}

pub fn thm5_witness_with(
    ws: &WeightSequence,
    j: usize,
    z: usize,
    limits: &Limits,
) -> Result<Option<Violation>> {
    if j == 0 || z < 2 {
        return Err(Error::Precondition(format!(
            "need j >= 1 and Z >= 2, got j = {j}, Z = {z}"
        )));
    }
    let (jz, z64) = ((j * z) as u64, z as u64);
    let mut first = vec![jz - 1; z + 1];
    first[0] = z64;
    let mut second = vec![z64 - 1; z + 1];
    second[0] = jz;
    let rule = Rule::Owa(ws.clone());
    for (votes, seats) in [(first, j * z), (second, z + j - 1)] {
        let inst = ApportionmentInstance::new(votes, seats)?;
        let outcomes = induced_apportionment_with(&rule, &inst, Route::ClosedForm, limits)?;
        for x in outcomes.iter() {
            if !check_lower_quota(&inst, x)? {
                return Ok(Some(Violation {
                    instance: inst.clone(),
                    outcome: x.clone(),
                }));
            }
        }
    }
    Ok(None)
}

/// Integer square root floor of `h √a / (√a + √b + ...)` where every root is
/// an integer; used by tests as an independent oracle.
#[doc(hidden)]
pub fn penrose_square_oracle(roots: &[u64], seats: usize) -> Vec<usize> {
    let total: u128 = roots.iter().map(|&r| u128::from(r)).sum();
    roots
        .iter()
        .map(|&r| (u128::from(r) * seats as u128 / total) as usize)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::embed;

    fn inst(v: &[u64], h: usize) -> ApportionmentInstance {
        ApportionmentInstance::new(v.to_vec(), h).unwrap()
    }

    fn d(x: &[usize]) -> SeatDistribution {
        SeatDistribution(x.to_vec())
    }

    #[test]
    fn lower_quota_and_quota() {
        let i = inst(&[6, 7, 39, 48], 10);
        assert_eq!(lower_quota_bounds(&i), vec![0, 0, 3, 4]);
        assert!(check_lower_quota(&i, &d(&[0, 0, 4, 6])).unwrap());
        assert!(!check_lower_quota(&i, &d(&[0, 0, 0, 10])).unwrap());
        assert!(check_quota(&i, &d(&[0, 1, 4, 5])).unwrap());
        assert!(!check_quota(&i, &d(&[0, 0, 4, 6])).unwrap());
        assert!(check_lower_quota(&inst(&[5], 3), &d(&[3])).unwrap());
        assert!(check_quota(&i, &d(&[0, 1, 4])).is_err());
    }

    #[test]
    fn exact_quota_passes_only_at_equality() {
        let i = inst(&[1, 3], 4);
        assert!(check_quota(&i, &d(&[1, 3])).unwrap());
        assert!(!check_quota(&i, &d(&[2, 2])).unwrap());
    }

    #[test]
    fn penrose_examples() {
        let i = inst(&[9, 4, 1], 6);
        assert_eq!(penrose_bounds(&i), vec![3, 2, 1]);
        assert!(check_penrose(&i, &d(&[3, 2, 1])).unwrap());
        assert!(!check_penrose(&i, &d(&[4, 1, 1])).unwrap());
        assert!(check_penrose(&inst(&[7], 4), &d(&[4])).unwrap());
    }

    #[test]
    fn penrose_rational_but_not_square() {
        // √8 = 2√2, √2: shares 2/3 and 1/3
        assert_eq!(penrose_bounds(&inst(&[8, 2], 3)), vec![2, 1]);
        assert_eq!(penrose_bounds(&inst(&[8, 2], 4)), vec![2, 1]);
    }

    #[test]
    fn penrose_irrational() {
        // 10·√2/(√2+√3) = 4.494...; 10·√3/(√2+√3) = 5.505...
        assert_eq!(penrose_bounds(&inst(&[2, 3], 10)), vec![4, 5]);
        // 5·1/(1+√2) = 2.071...; 5·√2/(1+√2) = 2.928...
        assert_eq!(penrose_bounds(&inst(&[1, 2], 5)), vec![2, 2]);
    }

    #[test]
    fn penrose_matches_square_oracle() {
        let roots = [1u64, 2, 3, 7];
        let squares: Vec<u64> = roots.iter().map(|r| r * r).collect();
        for h in 1..20 {
            assert_eq!(
                penrose_bounds(&inst(&squares, h)),
                penrose_square_oracle(&roots, h)
            );
        }
    }

    #[test]
    fn cambridge_examples() {
        assert!(check_cambridge(&inst(&[1, 1], 10), &d(&[5, 5]), 5).unwrap());
        let i = inst(&[3, 1], 12);
        assert_eq!(cambridge_bounds(&i, 5).unwrap(), vec![6, 5]);
        assert!(check_cambridge(&i, &d(&[6, 6]), 5).unwrap());
        assert!(!check_cambridge(&i, &d(&[5, 7]), 5).unwrap());
        assert!(!check_cambridge(&inst(&[1, 1], 10), &d(&[4, 6]), 5).unwrap());
        assert!(matches!(
            check_cambridge(&inst(&[1, 1], 9), &d(&[5, 4]), 5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn threshold_examples() {
        let i = inst(&[6, 7, 39, 48], 10);
        assert!(check_threshold(&i, &d(&[0, 0, 5, 5]), 1).unwrap());
        assert!(!check_threshold(&i, &d(&[1, 0, 4, 5]), 1).unwrap());
        assert!(check_threshold(&i, &d(&[0, 0, 0, 10]), 9).unwrap());
        assert!(check_threshold(&i, &d(&[0, 0, 0, 10]), 0).is_err());
        assert!(check_threshold(&i, &d(&[0, 0, 0, 10]), 10).is_err());
    }

    fn committee_for(inst: &ApportionmentInstance, x: &[usize]) -> Committee {
        let (_, _, e) = embed(inst).unwrap();
        let members = x
            .iter()
            .enumerate()
            .flat_map(|(i, &s)| e.candidate_block(i).take(s))
            .collect();
        Committee::new(members).unwrap()
    }

    #[test]
    fn pjr_on_party_lists() {
        let i = inst(&[6, 7, 39, 48], 10);
        let (profile, k, _) = embed(&i).unwrap();
        assert!(check_pjr(&profile, k, &committee_for(&i, &[0, 0, 4, 6])).unwrap());
        assert!(!check_pjr(&profile, k, &committee_for(&i, &[10, 0, 0, 0])).unwrap());
    }

    #[test]
    fn pjr_brute_force() {
        // voters 1,2 approve {c1,c2}, voter 3 approves {c2,c3}, voter 4 {c4}
        let profile =
            ApprovalProfile::new(4, vec![vec![0, 1], vec![0, 1], vec![1, 2], vec![3]]).unwrap();
        // n/k = 2: voters 1-3 share c2 and need one member
        assert!(!check_pjr(&profile, 2, &Committee::new(vec![2, 3]).unwrap()).unwrap());
        assert!(check_pjr(&profile, 2, &Committee::new(vec![1, 3]).unwrap()).unwrap());
        assert!(check_pjr(&profile, 2, &Committee::new(vec![0, 2]).unwrap()).unwrap());
        // k = 1 needs the one member somewhere among ballots of a group of all 4: none share
        assert!(check_pjr(&profile, 1, &Committee::new(vec![3]).unwrap()).unwrap());
    }

    #[test]
    fn pjr_voter_cap() {
        let profile = ApprovalProfile::new(2, vec![vec![0, 1]; 17].into_iter().chain([vec![0]]).collect()).unwrap();
        assert_eq!(
            check_pjr(&profile, 1, &Committee::new(vec![0]).unwrap()),
            Err(Error::TooManyVoters { voters: 18, cap: 16 })
        );
    }

    #[test]
    fn pav_uniqueness_witnesses() {
        assert_eq!(thm5_witness(&WeightSequence::Pav, 2, 3).unwrap(), None);
        let w = thm5_witness(&WeightSequence::ChamberlinCourant, 2, 3).unwrap().unwrap();
        assert!(!check_lower_quota(&w.instance, &w.outcome).unwrap());
        assert!(thm5_witness(&WeightSequence::TopK, 2, 3).unwrap().is_some());
        assert!(thm5_witness(&WeightSequence::Pav, 2, 1).is_err());
    }

    #[test]
    fn cc_witness_on_second_instance() {
        let w = thm5_witness(&WeightSequence::ChamberlinCourant, 2, 3).unwrap().unwrap();
        assert_eq!(w.instance.votes(), &[6, 2, 2, 2]);
        assert_eq!(w.outcome, d(&[1, 1, 1, 1]));
    }
}
