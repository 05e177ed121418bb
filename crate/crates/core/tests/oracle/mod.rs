//! Reference implementations used only by tests. They follow the textbook
//! recurrences over the full matrix and share no code with the library.

#![allow(dead_code)]

use std::collections::HashMap;

/// Memoized top-down DTW over the full matrix.
///
/// `in_band(i, j)` (1-based) restricts the admissible cells; cells outside
/// are infinite. `squared` selects (a-b)^2 over |a-b|. No final root.
pub fn dtw_memo(
    q: &[f64],
    c: &[f64],
    squared: bool,
    in_band: &dyn Fn(usize, usize) -> bool,
) -> f64 {
    fn go(
        i: usize,
        j: usize,
        q: &[f64],
        c: &[f64],
        squared: bool,
        in_band: &dyn Fn(usize, usize) -> bool,
        memo: &mut HashMap<(usize, usize), f64>,
    ) -> f64 {
        if i == 0 && j == 0 {
            return 0.0;
        }
        if i == 0 || j == 0 || !in_band(i, j) {
            return f64::INFINITY;
        }
        if let Some(&v) = memo.get(&(i, j)) {
            return v;
        }
        let diff = q[i - 1] - c[j - 1];
        let d = if squared { diff * diff } else { diff.abs() };
        let a = go(i - 1, j - 1, q, c, squared, in_band, memo);
        let b = go(i - 1, j, q, c, squared, in_band, memo);
        let l = go(i, j - 1, q, c, squared, in_band, memo);
        let v = d + a.min(b).min(l);
        memo.insert((i, j), v);
        v
    }
    let mut memo = HashMap::new();
    // Fill bottom-up order first to keep recursion depth small.
    for i in 1..=q.len() {
        for j in 1..=c.len() {
            go(i, j, q, c, squared, in_band, &mut memo);
        }
    }
    go(q.len(), c.len(), q, c, squared, in_band, &mut memo)
}

/// Minimum over every monotone path from (1,1) to (n,m), by exhaustive
/// enumeration. Only for tiny inputs.
pub fn dtw_enumerate(q: &[f64], c: &[f64], squared: bool) -> f64 {
    fn walk(i: usize, j: usize, acc: f64, q: &[f64], c: &[f64], squared: bool, best: &mut f64) {
        let diff = q[i] - c[j];
        let acc = acc + if squared { diff * diff } else { diff.abs() };
        if i == q.len() - 1 && j == c.len() - 1 {
            *best = best.min(acc);
            return;
        }
        if i + 1 < q.len() && j + 1 < c.len() {
            walk(i + 1, j + 1, acc, q, c, squared, best);
        }
        if i + 1 < q.len() {
            walk(i + 1, j, acc, q, c, squared, best);
        }
        if j + 1 < c.len() {
            walk(i, j + 1, acc, q, c, squared, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(0, 0, 0.0, q, c, squared, &mut best);
    best
}

/// Full-matrix LCS DP with an arbitrary match predicate and band.
pub fn lcs_full(
    q: &[f64],
    c: &[f64],
    matches: &dyn Fn(f64, f64) -> bool,
    in_band: &dyn Fn(usize, usize) -> bool,
) -> usize {
    let (n, m) = (q.len(), c.len());
    let mut l = vec![vec![0usize; m + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=m {
            if !in_band(i, j) {
                continue;
            }
            l[i][j] = if matches(q[i - 1], c[j - 1]) {
                1 + l[i - 1][j - 1]
            } else {
                l[i - 1][j].max(l[i][j - 1])
            };
        }
    }
    l[n][m]
}

/// Longest common subsequence by trying every index subset of `q`. Only for
/// tiny inputs.
pub fn lcs_enumerate(q: &[f64], c: &[f64], matches: &dyn Fn(f64, f64) -> bool) -> usize {
    let n = q.len();
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let picked: Vec<f64> = (0..n)
            .filter(|k| mask & (1 << k) != 0)
            .map(|k| q[k])
            .collect();
        // Greedy earliest embedding into c is optimal for a fixed subsequence.
        let mut pos = 0;
        let mut ok = true;
        for &x in &picked {
            match (pos..c.len()).find(|&j| matches(x, c[j])) {
                Some(j) => pos = j + 1,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            best = best.max(picked.len());
        }
    }
    best
}

pub fn everywhere(_: usize, _: usize) -> bool {
    true
}

/// Sakoe-Chiba predicate around the scaled diagonal, in real arithmetic.
pub fn sakoe_chiba(n: usize, m: usize, r: usize) -> impl Fn(usize, usize) -> bool {
    move |i, j| {
        let centre = i as f64 * m as f64 / n as f64;
        (j as f64 - centre).abs() <= r as f64 + 1e-9
    }
}
