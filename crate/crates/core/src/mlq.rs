//! Multi-line queues.
//!
//! An `m`-queue is an `r x n` grid whose row `i` (1-based, top to bottom)
//! holds exactly `m_1 + ... + m_i` boxes. Rows are stored as bitmasks with
//! bit `j` standing for column `j` (0-based), so `n <= 64`.
//!
//! Labelling: row 1 boxes get label 1. Row `i` is labelled from row `i - 1`
//! by visiting the boxes of row `i - 1` in increasing label order; a box
//! labelled `l` in column `c` claims the first unclaimed box of row `i` in
//! columns `c, c + 1, ..., n - 1, 0, ..., c - 1` and passes `l` to it. The
//! boxes left over receive label `i`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::json;

use crate::binomial::binom;
use crate::error::{Error, Result};
use crate::words::{type_of, Letter, TypeVector, Word};

/// Default cap on the number of queues a single enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Widest supported queue.
pub const MAX_WIDTH: usize = 64;

/// Order in which boxes sharing a label are processed during labelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieOrder {
    LeftToRight,
    RightToLeft,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mlq {
    m: TypeVector,
    rows: Vec<u64>,
}

impl Mlq {
    /// Builds a queue of type `m` from row bitmasks, top row first.
    pub fn new(m: TypeVector, rows: Vec<u64>) -> Result<Self> {
        let n = m.n();
        if n == 0 || n > MAX_WIDTH {
            return Err(Error::MalformedMlq(format!("width {n} outside 1..=64")));
        }
        if rows.len() != m.r() {
            return Err(Error::MalformedMlq(format!(
                "{} rows for a type with {} classes",
                rows.len(),
                m.r()
            )));
        }
        for (i, (&row, want)) in rows.iter().zip(m.partial_sums()).enumerate() {
            if n < 64 && row >> n != 0 {
                return Err(Error::MalformedMlq(format!("row {} has a box past column {n}", i + 1)));
            }
            if row.count_ones() as usize != want {
                return Err(Error::MalformedMlq(format!(
                    "row {} has {} boxes, expected {want}",
                    i + 1,
                    row.count_ones()
                )));
            }
        }
        Ok(Mlq { m, rows })
    }

    /// Builds a queue from 1-based box columns per row.
    pub fn from_columns(m: TypeVector, columns: &[Vec<usize>]) -> Result<Self> {
        let rows = columns
            .iter()
            .map(|cols| {
                cols.iter().try_fold(0u64, |acc, &c| {
                    if c == 0 || c > MAX_WIDTH {
                        Err(Error::MalformedMlq(format!("column {c} out of range")))
                    } else {
                        Ok(acc | 1 << (c - 1))
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Mlq::new(m, rows)
    }

    pub fn type_vector(&self) -> &TypeVector {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn has_box(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    /// 1-based columns of the boxes in each row.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|&row| (0..self.n()).filter(|&c| row >> c & 1 == 1).map(|c| c + 1).collect())
            .collect()
    }
}

/// A queue together with the label of every box (`0` marks an empty cell).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledMlq {
    base: Mlq,
    labels: Vec<Vec<Letter>>,
}

impl LabelledMlq {
    pub fn base(&self) -> &Mlq {
        &self.base
    }

    pub fn labels(&self) -> &[Vec<Letter>] {
        &self.labels
    }

    pub fn bottom_word(&self) -> Word {
        Word::from_letters_unchecked(self.labels.last().expect("at least one row").clone())
    }

    /// One line per row: `[l]` for a box labelled `l`, `.` for an empty cell.
    pub fn to_ascii(&self) -> String {
        let width = self
            .labels
            .iter()
            .flatten()
            .map(|l| l.to_string().len())
            .max()
            .unwrap_or(1)
            + 2;
        let mut out = String::new();
        for row in &self.labels {
            let cells: Vec<String> = row
                .iter()
                .map(|&l| {
                    if l == 0 {
                        format!("{:^width$}", ".")
                    } else {
                        format!("{:^width$}", format!("[{l}]"))
                    }
                })
                .collect();
            let _ = writeln!(out, "|{}|", cells.join(" "));
        }
        out
    }

    /// `{"n", "r", "rows": [[1-based columns]], "labels": [[labels of those boxes]]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let labels: Vec<Vec<Letter>> = self
            .labels
            .iter()
            .map(|row| row.iter().copied().filter(|&l| l != 0).collect())
            .collect();
        json!({
            "n": self.base.n(),
            "r": self.base.r(),
            "rows": self.base.columns(),
            "labels": labels,
        })
    }
}

type RowLabels = [Letter; MAX_WIDTH];

/// Labels one row from the labelled row above it.
fn label_next_row(
    prev: &RowLabels,
    new_label: Letter,
    row: u64,
    n: usize,
    order: TieOrder,
    out: &mut RowLabels,
) {
    out[..n].fill(0);
    let mut unclaimed = row;
    for l in 1..new_label {
        let mut visit = |c: usize| {
            if prev[c] != l {
                return;
            }
            let ahead = unclaimed & (u64::MAX << c);
            let pick = if ahead != 0 { ahead } else { unclaimed };
            debug_assert!(pick != 0, "row below has fewer boxes than the row above");
            let target = pick.trailing_zeros() as usize;
            unclaimed &= !(1u64 << target);
            out[target] = l;
        };
        match order {
            TieOrder::LeftToRight => (0..n).for_each(&mut visit),
            TieOrder::RightToLeft => (0..n).rev().for_each(&mut visit),
        }
    }
    while unclaimed != 0 {
        let target = unclaimed.trailing_zeros() as usize;
        unclaimed &= unclaimed - 1;
        out[target] = new_label;
    }
}

fn first_row_labels(row: u64, n: usize) -> RowLabels {
    let mut out = [0; MAX_WIDTH];
    for (c, slot) in out.iter_mut().enumerate().take(n) {
        if row >> c & 1 == 1 {
            *slot = 1;
        }
    }
    out
}

/// Labels `q` processing equal labels in the given order.
pub fn label_with_order(q: &Mlq, order: TieOrder) -> LabelledMlq {
    let n = q.n();
    let mut current = first_row_labels(q.rows[0], n);
    let mut labels = vec![current[..n].to_vec()];
    for (i, &row) in q.rows.iter().enumerate().skip(1) {
        let mut next = [0; MAX_WIDTH];
        label_next_row(&current, (i + 1) as Letter, row, n, order, &mut next);
        labels.push(next[..n].to_vec());
        current = next;
    }
    LabelledMlq {
        base: q.clone(),
        labels,
    }
}

/// Labels `q` left to right among equal labels. Debug builds recompute the
/// labelling right to left and assert that both agree.
pub fn label(q: &Mlq) -> LabelledMlq {
    let out = label_with_order(q, TieOrder::LeftToRight);
    debug_assert_eq!(out, label_with_order(q, TieOrder::RightToLeft));
    out
}

/// The word spelled by the labels of the bottom row.
pub fn bottom_word(q: &Mlq) -> Word {
    label(q).bottom_word()
}

/// `Z_m = prod_i C(n, m_1 + ... + m_i)`.
pub fn partition_function(m: &TypeVector) -> BigUint {
    let n = m.n() as i64;
    m.partial_sums()
        .into_iter()
        .map(|k| binom(n, k as i64))
        .product()
}

fn queue_count(m: &TypeVector) -> u128 {
    let n = m.n() as i64;
    m.partial_sums()
        .into_iter()
        .try_fold(1u128, |acc, k| {
            acc.checked_mul(crate::binomial::binom_u128(n, k as i64)?)
        })
        .unwrap_or(u128::MAX)
}

fn check_budget(m: &TypeVector, budget: u128) -> Result<()> {
    let n = m.n();
    if n == 0 || n > MAX_WIDTH || m.r() > Letter::MAX as usize {
        return Err(Error::BadType(format!("{m} is outside the supported range")));
    }
    let count = queue_count(m);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(())
}

/// All `n`-bit masks with `k` bits set, in increasing numeric order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<u64> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![0];
    }
    let limit: u128 = 1u128 << n;
    let mut out = Vec::new();
    let mut x: u64 = (1u64 << (k - 1) << 1).wrapping_sub(1);
    loop {
        out.push(x);
        // Gosper's hack
        let c = x & x.wrapping_neg();
        let r = x as u128 + c as u128;
        if r >= limit {
            break;
        }
        let r = r as u64;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

fn row_choices(m: &TypeVector) -> Vec<Vec<u64>> {
    let n = m.n();
    m.partial_sums().into_iter().map(|k| k_subsets(n, k)).collect()
}

/// Every queue of type `m`, rows varying fastest at the bottom.
pub fn enumerate_mlqs(m: &TypeVector, budget: u128) -> Result<impl Iterator<Item = Mlq>> {
    check_budget(m, budget)?;
    let choices = row_choices(m);
    let m = m.clone();
    let mut idx = vec![0usize; choices.len()];
    let mut done = choices.iter().any(|c| c.is_empty());
    Ok(std::iter::from_fn(move || {
        if done {
            return None;
        }
        let rows = idx.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        // odometer step
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                done = true;
                break;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
        Some(Mlq {
            m: m.clone(),
            rows,
        })
    }))
}

/// Depth-first walk over every queue whose top row is `top`, labelling
/// incrementally and handing the rows and labels to `visit` at the bottom.
fn walk_from_top<F: FnMut(&[u64], &[RowLabels])>(
    choices: &[Vec<u64>],
    n: usize,
    top: u64,
    visit: &mut F,
) {
    let r = choices.len();
    let mut rows = vec![0u64; r];
    let mut labels = vec![[0 as Letter; MAX_WIDTH]; r];
    rows[0] = top;
    labels[0] = first_row_labels(top, n);

    fn rec<F: FnMut(&[u64], &[RowLabels])>(
        depth: usize,
        choices: &[Vec<u64>],
        n: usize,
        rows: &mut [u64],
        labels: &mut [RowLabels],
        visit: &mut F,
    ) {
        if depth == choices.len() {
            visit(rows, labels);
            return;
        }
        for &row in &choices[depth] {
            rows[depth] = row;
            let (above, below) = labels.split_at_mut(depth);
            let prev = &above[depth - 1];
            label_next_row(prev, (depth + 1) as Letter, row, n, TieOrder::LeftToRight, &mut below[0]);
            #[cfg(debug_assertions)]
            {
                let mut check = [0; MAX_WIDTH];
                label_next_row(prev, (depth + 1) as Letter, row, n, TieOrder::RightToLeft, &mut check);
                debug_assert_eq!(check[..n], below[0][..n]);
            }
            rec(depth + 1, choices, n, rows, labels, visit);
        }
    }

    rec(1, choices, n, &mut rows, &mut labels, visit);
}

/// Tally of bottom words over all queues of type `m`; words with no queue are
/// absent. The sum of the values is `Z_m`.
pub fn count_all(m: &TypeVector, budget: u128) -> Result<BTreeMap<Word, u64>> {
    check_budget(m, budget)?;
    let n = m.n();
    let choices = row_choices(m);
    let tally = choices[0]
        .par_iter()
        .fold(HashMap::<Vec<Letter>, u64>::new, |mut acc, &top| {
            walk_from_top(&choices, n, top, &mut |_, labels| {
                let bottom = &labels[labels.len() - 1][..n];
                match acc.get_mut(bottom) {
                    Some(c) => *c += 1,
                    None => {
                        acc.insert(bottom.to_vec(), 1);
                    }
                }
            });
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(tally
        .into_iter()
        .map(|(k, v)| (Word::from_letters_unchecked(k), v))
        .collect())
}

/// `[u]`: the number of queues of type `type_of(u)` whose bottom row spells `u`.
pub fn bracket(u: &Word, budget: u128) -> Result<u64> {
    let m = type_of(u)?;
    check_budget(&m, budget)?;
    let n = m.n();
    let choices = row_choices(&m);
    let target = u.letters();
    Ok(choices[0]
        .par_iter()
        .map(|&top| {
            let mut hits = 0u64;
            walk_from_top(&choices, n, top, &mut |_, labels| {
                if &labels[labels.len() - 1][..n] == target {
                    hits += 1;
                }
            });
            hits
        })
        .sum())
}

/// Every queue representing `u`, labelled, in enumeration order.
pub fn mlqs_representing(u: &Word, budget: u128) -> Result<Vec<LabelledMlq>> {
    let m = type_of(u)?;
    check_budget(&m, budget)?;
    let n = m.n();
    let choices = row_choices(&m);
    let target = u.letters();
    let mut out = Vec::new();
    for &top in &choices[0] {
        walk_from_top(&choices, n, top, &mut |rows, labels| {
            if &labels[labels.len() - 1][..n] == target {
                out.push(LabelledMlq {
                    base: Mlq {
                        m: m.clone(),
                        rows: rows.to_vec(),
                    },
                    labels: labels.iter().map(|l| l[..n].to_vec()).collect(),
                });
            }
        });
    }
    Ok(out)
}

/// The local move turning a queue representing `βαw` into one representing
/// `ααw`, where `α = r - 1` and `β = r`: the empty cell at row `r - 1`,
/// column 1 receives a box. The result has the relaxed type
/// `(..., m_{r-1} + 1, m_r - 1)`.
pub fn beta_alpha_forward(q: &Mlq) -> Result<Mlq> {
    let r = q.r();
    let m = q.type_vector();
    if m.is_relaxed() || r < 2 || q.n() < 2 {
        return Err(Error::MalformedMlq("expected a strict queue with r >= 2 and n >= 2".into()));
    }
    let word = bottom_word(q);
    let (alpha, beta) = ((r - 1) as Letter, r as Letter);
    if word.letters()[..2] != [beta, alpha] {
        return Err(Error::WrongPrefix(word.to_string()));
    }
    let alpha_row = r - 2;
    if q.has_box(alpha_row, 0) || !q.has_box(alpha_row, 1) || (r >= 3 && q.has_box(r - 3, 0)) {
        return Err(Error::Internal(format!(
            "queue for {word} does not have the expected local shape"
        )));
    }
    let mut counts = m.counts().to_vec();
    counts[r - 2] += 1;
    counts[r - 1] -= 1;
    let mut rows = q.rows.clone();
    rows[alpha_row] |= 1;
    Mlq::new(TypeVector::relaxed(counts)?, rows)
}

/// Inverse of [`beta_alpha_forward`]: removes the box at row `r - 1`,
/// column 1 of a queue representing `ααw`.
pub fn beta_alpha_backward(q: &Mlq) -> Result<Mlq> {
    let r = q.r();
    if r < 2 || q.n() < 2 {
        return Err(Error::MalformedMlq("expected r >= 2 and n >= 2".into()));
    }
    let word = label(q).bottom_word();
    let alpha = (r - 1) as Letter;
    if word.letters()[..2] != [alpha, alpha] {
        return Err(Error::WrongPrefix(word.to_string()));
    }
    let alpha_row = r - 2;
    if !q.has_box(alpha_row, 0) || !q.has_box(alpha_row, 1) || (r >= 3 && q.has_box(r - 3, 0)) {
        return Err(Error::MalformedMlq(format!(
            "queue for {word} does not have the expected local shape"
        )));
    }
    let mut counts = q.type_vector().counts().to_vec();
    counts[r - 2] -= 1;
    counts[r - 1] += 1;
    if counts[r - 2] == 0 {
        return Err(Error::MalformedMlq("no light letter left after removal".into()));
    }
    let mut rows = q.rows.clone();
    rows[alpha_row] &= !1;
    Mlq::new(TypeVector::new(counts)?, rows)
}
