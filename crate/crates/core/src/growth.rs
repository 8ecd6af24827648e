//! Growth of `φ_{m,k}^{±1}`: exact tables, closed forms, the
//! `B`-recurrence, the recursive upper bounds and degree estimates.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::{GmkError, Result};
use crate::family::{a_index, b_index, check_mk, Endomorphism};
use crate::words::Word;

/// Lengths `‖e^n(x)‖` for every generator `x` and `0 <= n <= n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthTable {
    pub n_max: usize,
    /// `lengths[x][n]`.
    pub lengths: Vec<Vec<u64>>,
    /// `gr[n] = max_x lengths[x][n]`.
    pub gr: Vec<u64>,
}

impl GrowthTable {
    pub fn is_monotone(&self) -> bool {
        self.lengths.iter().all(|row| row.windows(2).all(|w| w[0] <= w[1]))
    }
}

pub fn growth_table(e: &Endomorphism, n_max: usize) -> GrowthTable {
    let r = e.rank();
    let lengths: Vec<Vec<u64>> = (0..r)
        .into_par_iter()
        .map(|x| {
            let mut w = Word::generator(r, x);
            let mut row = Vec::with_capacity(n_max + 1);
            row.push(1);
            for _ in 0..n_max {
                w = e.apply_unchecked(&w);
                row.push(w.len() as u64);
            }
            row
        })
        .collect();
    let gr = (0..=n_max)
        .map(|n| lengths.iter().map(|row| row[n]).max().unwrap_or(0))
        .collect();
    GrowthTable {
        n_max,
        lengths,
        gr,
    }
}

/// Generators with a known closed-form length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    A(usize),
    B(usize),
}

/// Closed-form `‖φ^{±n}(x)‖` where one is known.
pub fn closed_form_length(x: Generator, m: usize, n: u64, inverse: bool) -> Result<u64> {
    let m64 = m as u64;
    match x {
        Generator::A(i) if (1..=m).contains(&i) => Ok(2 * (i as u64 - 1) * n + 1),
        Generator::B(1) => Ok(m64 * n + 1),
        Generator::B(2) if !inverse && m >= 2 => Ok(m64 * n * (n + 1) / 2 + 2 * n + 1),
        _ => Err(GmkError::Unsupported(format!(
            "no closed form for {x:?} (m={m}, inverse={inverse})"
        ))),
    }
}

/// `φ^n(A_1 ⋯ A_j) = A_1^{n+1} ⋯ A_{j-1}^{n+1} A_j Ā_{j-1}^n ⋯ Ā_1^n`, in rank `rank`.
pub fn a_prefix_image(rank: usize, j: usize, n: usize) -> Word {
    if j == 0 {
        return Word::identity(rank);
    }
    let n = n as i64;
    let mut powers: Vec<(usize, i64)> = (1..j).map(|l| (a_index(l), n + 1)).collect();
    powers.push((a_index(j), 1));
    powers.extend((1..j).rev().map(|l| (a_index(l), -n)));
    Word::from_powers(rank, &powers)
}

/// `φ^n(B_{k+1})` assembled from the recurrence
/// `φ^n(B_{k+1}) = φ^n(B_k) · φ^{n-1}(A_1⋯A_{k-1}) · φ^{n-1}(B_{k+1}) · φ^{n-1}(A_1⋯A_k)^{-1}`,
/// seeded by `φ^n(B_1) = A_1^n ⋯ A_m^n B_1` and `φ^0(B_j) = B_j`.
/// The word lives in the `A1..Am, B1..B_{k+1}` alphabet.
pub fn recurrence_iterate_b(m: usize, k: usize, n: usize) -> Result<Word> {
    if k < 1 || k + 1 > m || n < 1 {
        return Err(GmkError::InvalidParameters(format!(
            "need 2 <= k+1 <= m and n >= 1, got m={m}, k={k}, n={n}"
        )));
    }
    let top = k + 1;
    let rank = m + top;
    let b1 = |n: usize| {
        let mut p: Vec<(usize, i64)> = (1..=m).map(|l| (a_index(l), n as i64)).collect();
        p.push((b_index(m, 1), 1));
        Word::from_powers(rank, &p)
    };
    // table[j][t] = φ^t(B_j), filled level by level in t.
    let mut table: Vec<Vec<Word>> = vec![Vec::with_capacity(n + 1); top + 1];
    for (j, row) in table.iter_mut().enumerate().skip(1) {
        row.push(Word::generator(rank, b_index(m, j)));
    }
    for t in 1..=n {
        table[1].push(b1(t));
        for j in 2..=top {
            let kk = j - 1;
            let mut w = table[kk][t].clone();
            w.push_word(&a_prefix_image(rank, kk - 1, t - 1));
            w.push_word(&table[j][t - 1]);
            w.push_inverse(&a_prefix_image(rank, kk, t - 1));
            table[j].push(w);
        }
    }
    Ok(table[top][n].clone())
}

/// Recursive upper bound `g(k, n) >= ‖φ^n(B_k)‖`.
pub fn upper_bound_g(m: usize, k: usize, n: usize) -> Result<u64> {
    check_mk(m, k, 1)?;
    let m = m as u64;
    let mut row: Vec<u64> = (0..=n as u64)
        .map(|t| if k == 1 { m * t + 1 } else { m * t * (t + 1) / 2 + 2 * t + 1 })
        .collect();
    for j in 2..k as u64 {
        // g(j+1, t) = g(j, t) + g(j+1, t-1) + (4j-6)t - (2j-5)
        let mut next = vec![1u64; n + 1];
        for t in 1..=n {
            next[t] = row[t] + next[t - 1] + ((4 * j - 6) * t as u64 + 5) - 2 * j;
        }
        row = next;
    }
    Ok(row[n])
}

/// Recursive upper bound `g(k, i, n)`; `g(k, 0, n) >= ‖φ^{-n}(B_k)‖`.
pub fn upper_bound_g_inv(m: usize, k: usize, i: usize, n: usize) -> Result<u64> {
    if k < 1 || m < 1 {
        return Err(GmkError::InvalidParameters(format!(
            "need m >= 1 and k >= 1, got m={m}, k={k}"
        )));
    }
    let mut memo = HashMap::new();
    Ok(g_inv(m as u64, k, i, n, &mut memo))
}

fn g_inv(m: u64, k: usize, i: usize, n: usize, memo: &mut HashMap<(usize, usize, usize), u64>) -> u64 {
    if k == 1 {
        return m * n as u64 + 1;
    }
    if n == 0 {
        return (k as u64 - 1) * i as u64 + 1;
    }
    if let Some(&v) = memo.get(&(k, i, n)) {
        return v;
    }
    let v = g_inv(m, k - 1, 1, n - 1, memo) + g_inv(m, k, i + 1, n - 1, memo);
    memo.insert((k, i, n), v);
    v
}

/// `T_{1,i} = B_1`, `T_{k,i} = B_k A_{k-1}^i ⋯ A_1^i`.
pub fn t_word(m: usize, k: usize, i: usize, rank: usize) -> Word {
    let mut p = vec![(b_index(m, k), 1)];
    if k > 1 {
        p.extend((1..k).rev().map(|l| (a_index(l), i as i64)));
    }
    Word::from_powers(rank, &p)
}

/// `S_i = Ā_1^i ⋯ Ā_m^i`.
pub fn s_word(m: usize, i: usize, rank: usize) -> Word {
    let p: Vec<_> = (1..=m).map(|l| (a_index(l), -(i as i64))).collect();
    Word::from_powers(rank, &p)
}

/// A slope rounded to hundredths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Degree {
    pub hundredths: i64,
}

impl Degree {
    pub fn as_f64(self) -> f64 {
        self.hundredths as f64 / 100.0
    }

    pub fn within(self, target: f64, tol: f64) -> bool {
        (self.as_f64() - target).abs() <= tol + 1e-9
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.hundredths < 0 { "-" } else { "" };
        let a = self.hundredths.unsigned_abs();
        write!(f, "{sign}{}.{:02}", a / 100, a % 100)
    }
}

/// Least-squares slope of `log v` against `log n` over samples with
/// `n >= n_max / 2`. Needs at least 8 samples, all with `n >= 1` and `v >= 1`.
pub fn estimate_degree(samples: &[(u64, u64)]) -> Result<Degree> {
    if samples.len() < 8 {
        return Err(GmkError::InvalidParameters(format!(
            "need at least 8 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|&(n, v)| n == 0 || v == 0) {
        return Err(GmkError::InvalidParameters("samples must be positive".into()));
    }
    let n_max = samples.iter().map(|s| s.0).max().unwrap();
    let top: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| 2 * s.0 >= n_max)
        .map(|&(n, v)| ((n as f64).ln(), (v as f64).ln()))
        .collect();
    let len = top.len() as f64;
    let mx = top.iter().map(|p| p.0).sum::<f64>() / len;
    let my = top.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = top.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(GmkError::InvalidParameters("degenerate sample range".into()));
    }
    let sxy: f64 = top.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(Degree {
        hundredths: (sxy / sxx * 100.0).round() as i64,
    })
}

/// `(n, gr(n))` for `1 <= n <= n_max`.
pub fn gr_samples(table: &GrowthTable) -> Vec<(u64, u64)> {
    (1..=table.n_max).map(|n| (n as u64, table.gr[n])).collect()
}
