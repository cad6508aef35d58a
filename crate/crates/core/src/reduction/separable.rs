//! Exact optimization of separable objectives over seat distributions.
//!
//! The objective is either `sum_i f_i(x_i)` or the worst single term
//! `max_i f_i(x_i)` / `min_i f_i(x_i)`. A dynamic program over parties and
//! seats finds the optimum; a second pass enumerates every optimal
//! distribution.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::model::SeatDistribution;
use crate::rational::{zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Aggregate {
    Sum,
    Bottleneck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    Maximize,
    Minimize,
}

impl Goal {
    fn better(self, a: &Rational, b: &Rational) -> bool {
        match self {
            Goal::Maximize => a > b,
            Goal::Minimize => a < b,
        }
    }

    fn worst(self, a: Rational, b: Rational) -> Rational {
        match self {
            Goal::Maximize => a.min(b),
            Goal::Minimize => a.max(b),
        }
    }
}

/// `table[i][x]` is `f_i(x)` for `x` in `0..=seats`.
pub(crate) fn optimize(
    table: &[Vec<Rational>],
    seats: usize,
    aggregate: Aggregate,
    goal: Goal,
    outcome_cap: usize,
) -> Result<(Rational, BTreeSet<SeatDistribution>)> {
    assert!(!table.is_empty());
    match aggregate {
        Aggregate::Sum => optimize_sum(table, seats, goal, outcome_cap),
        Aggregate::Bottleneck => optimize_bottleneck(table, seats, goal, outcome_cap),
    }
}

fn optimize_sum(
    table: &[Vec<Rational>],
    seats: usize,
    goal: Goal,
    cap: usize,
) -> Result<(Rational, BTreeSet<SeatDistribution>)> {
    let p = table.len();
    // best[i][s]: optimum over the first i parties holding s seats
    let mut best: Vec<Vec<Option<Rational>>> = vec![vec![None; seats + 1]; p + 1];
    best[0][0] = Some(zero());
    for i in 1..=p {
        for s in 0..=seats {
            let mut cell: Option<Rational> = None;
            for x in 0..=s {
                if let Some(prev) = &best[i - 1][s - x] {
                    let v = prev + &table[i - 1][x];
                    if cell.as_ref().is_none_or(|c| goal.better(&v, c)) {
                        cell = Some(v);
                    }
                }
            }
            best[i][s] = cell;
        }
    }
    let optimum = best[p][seats].clone().expect("some distribution exists");
    let allowed = |i: usize, s: usize, x: usize| -> bool {
        match (&best[i - 1][s - x], &best[i][s]) {
            (Some(prev), Some(target)) => &(prev + &table[i - 1][x]) == target,
            _ => false,
        }
    };
    let outcomes = enumerate(p, seats, cap, allowed)?;
    Ok((optimum, outcomes))
}

fn optimize_bottleneck(
    table: &[Vec<Rational>],
    seats: usize,
    goal: Goal,
    cap: usize,
) -> Result<(Rational, BTreeSet<SeatDistribution>)> {
    let p = table.len();
    let mut best: Vec<Vec<Option<Rational>>> = vec![vec![None; seats + 1]; p + 1];
    for s in 0..=seats {
        best[1][s] = Some(table[0][s].clone());
    }
    for i in 2..=p {
        for s in 0..=seats {
            let mut cell: Option<Rational> = None;
            for x in 0..=s {
                if let Some(prev) = &best[i - 1][s - x] {
                    let v = goal.worst(prev.clone(), table[i - 1][x].clone());
                    if cell.as_ref().is_none_or(|c| goal.better(&v, c)) {
                        cell = Some(v);
                    }
                }
            }
            best[i][s] = cell;
        }
    }
    let optimum = best[p][seats].clone().expect("some distribution exists");
    // A distribution is optimal iff none of its terms is worse than the optimum.
    let ok = |i: usize, x: usize| !goal.better(&optimum, &table[i][x]);
    // fill[i][s]: the first i parties can hold s seats with acceptable terms
    let mut fill = vec![vec![false; seats + 1]; p + 1];
    fill[0][0] = true;
    for i in 1..=p {
        for s in 0..=seats {
            fill[i][s] = (0..=s).any(|x| fill[i - 1][s - x] && ok(i - 1, x));
        }
    }
    let allowed = |i: usize, s: usize, x: usize| fill[i - 1][s - x] && ok(i - 1, x);
    let outcomes = enumerate(p, seats, cap, allowed)?;
    Ok((optimum, outcomes))
}

/// All `x` built backwards from party `p` with `allowed(i, s, x_{i-1})`,
/// where `s` is the number of seats held by the first `i` parties.
fn enumerate(
    p: usize,
    seats: usize,
    cap: usize,
    allowed: impl Fn(usize, usize, usize) -> bool,
) -> Result<BTreeSet<SeatDistribution>> {
    // count[i][s]: number of allowed completions for the first i parties
    let mut count = vec![vec![0u128; seats + 1]; p + 1];
    count[0][0] = 1;
    for i in 1..=p {
        for s in 0..=seats {
            count[i][s] = (0..=s)
                .filter(|&x| allowed(i, s, x))
                .map(|x| count[i - 1][s - x])
                .fold(0u128, u128::saturating_add);
        }
    }
    if count[p][seats] > cap as u128 {
        return Err(Error::TieExplosion { cap });
    }
    let mut out = BTreeSet::new();
    let mut current = vec![0usize; p];
    walk(p, seats, &allowed, &count, &mut current, &mut out);
    Ok(out)
}

fn walk(
    i: usize,
    s: usize,
    allowed: &impl Fn(usize, usize, usize) -> bool,
    count: &[Vec<u128>],
    current: &mut Vec<usize>,
    out: &mut BTreeSet<SeatDistribution>,
) {
    if i == 0 {
        out.insert(SeatDistribution(current.clone()));
        return;
    }
    for x in 0..=s {
        if allowed(i, s, x) && count[i - 1][s - x] > 0 {
            current[i - 1] = x;
            walk(i - 1, s - x, allowed, count, current, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn table(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    fn dists(items: &[&[usize]]) -> BTreeSet<SeatDistribution> {
        items.iter().map(|x| SeatDistribution(x.to_vec())).collect()
    }

    #[test]
    fn sum_maximization_with_ties() {
        // f_0 = (0, 3, 4), f_1 = (0, 3, 5)
        let t = table(&[&[0, 3, 4], &[0, 3, 5]]);
        let (opt, xs) = optimize(&t, 2, Aggregate::Sum, Goal::Maximize, 100).unwrap();
        assert_eq!(opt, int(6));
        assert_eq!(xs, dists(&[&[1, 1]]));
        let (opt, xs) = optimize(&t, 2, Aggregate::Sum, Goal::Minimize, 100).unwrap();
        assert_eq!(opt, int(4));
        assert_eq!(xs, dists(&[&[2, 0]]));
    }

    #[test]
    fn bottleneck_minimization() {
        // max_i f_i(x_i) with f_i(x) = x: the balanced splits win
        let t = table(&[&[0, 1, 2, 3], &[0, 1, 2, 3], &[0, 1, 2, 3]]);
        let (opt, xs) = optimize(&t, 3, Aggregate::Bottleneck, Goal::Minimize, 100).unwrap();
        assert_eq!(opt, int(1));
        assert_eq!(xs, dists(&[&[1, 1, 1]]));
        let (opt, xs) = optimize(&t, 2, Aggregate::Bottleneck, Goal::Minimize, 100).unwrap();
        assert_eq!(opt, int(1));
        assert_eq!(xs, dists(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]));
    }

    #[test]
    fn bottleneck_maximization() {
        // maximize the smallest x_i
        let t = table(&[&[0, 1, 2], &[0, 1, 2]]);
        let (opt, xs) = optimize(&t, 2, Aggregate::Bottleneck, Goal::Maximize, 100).unwrap();
        assert_eq!(opt, int(1));
        assert_eq!(xs, dists(&[&[1, 1]]));
    }

    #[test]
    fn cap_is_enforced() {
        let t = table(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        assert_eq!(
            optimize(&t, 2, Aggregate::Sum, Goal::Maximize, 5),
            Err(Error::TieExplosion { cap: 5 })
        );
    }
}
