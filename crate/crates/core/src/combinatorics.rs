//! Counting and enumeration helpers for bounded compositions and subsets.

use alloc::vec;
use alloc::vec::Vec;

/// Number of vectors `t` with `0 <= t_i <= caps[i]` and `sum t = total`,
/// saturating at `u128::MAX`.
pub fn count_bounded_compositions(caps: &[usize], total: usize) -> u128 {
    let mut ways = vec![0u128; total + 1];
    ways[0] = 1;
    for &cap in caps {
        let mut next = vec![0u128; total + 1];
        for (s, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for t in 0..=cap.min(total - s) {
                next[s + t] = next[s + t].saturating_add(w);
            }
        }
        ways = next;
    }
    ways[total]
}

/// Calls `visit` on every vector `t` with `0 <= t_i <= caps[i]` and
/// `sum t = total`, in lexicographic order.
pub fn for_each_bounded_composition<E>(
    caps: &[usize],
    total: usize,
    mut visit: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    // suffix[i] = capacity available in caps[i..]
    let mut suffix = vec![0usize; caps.len() + 1];
    for i in (0..caps.len()).rev() {
        suffix[i] = suffix[i + 1].saturating_add(caps[i]);
    }
    if suffix[0] < total {
        return Ok(());
    }
    let mut current = vec![0usize; caps.len()];
    recurse(caps, &suffix, 0, total, &mut current, &mut visit)
}

fn recurse<E>(
    caps: &[usize],
    suffix: &[usize],
    i: usize,
    remaining: usize,
    current: &mut [usize],
    visit: &mut impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    if i == caps.len() {
        return if remaining == 0 { visit(current) } else { Ok(()) };
    }
    let lo = remaining.saturating_sub(suffix[i + 1]);
    let hi = caps[i].min(remaining);
    for t in lo..=hi {
        current[i] = t;
        recurse(caps, suffix, i + 1, remaining - t, current, visit)?;
    }
    current[i] = 0;
    Ok(())
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `k`-subsets of `items`, each in the order of `items`, listed
/// lexicographically by position.
pub fn combinations<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
