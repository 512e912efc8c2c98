//! Exact linear solves over the rationals.
//!
//! Two routes: sparse elimination directly over `Q`, and dense elimination
//! modulo word-sized primes followed by Chinese remaindering, rational
//! reconstruction and an exact residual check over `Q`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A sparse row: `(column, coefficient)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, BigRational)>;

/// `target -= factor * source`, both sorted.
fn axpy(target: &SparseRow, factor: &BigRational, source: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ci = target.get(i).map_or(usize::MAX, |e| e.0);
        let cj = source.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(target[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, -(factor * &source[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - factor * &source[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn coeff(row: &SparseRow, col: usize) -> Option<&BigRational> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

/// Solves `A x = b` for `A` with `unknowns` columns and any number of rows,
/// requiring a unique solution. Redundant rows must reduce to `0 = 0`.
///
/// Pivots are chosen per column among the rows that still have a nonzero
/// entry there, preferring the sparsest such row to limit fill-in.
pub fn solve_unique(
    mut rows: Vec<SparseRow>,
    mut rhs: Vec<BigRational>,
    unknowns: usize,
) -> Result<Vec<BigRational>> {
    assert_eq!(rows.len(), rhs.len());
    let mut used = vec![false; rows.len()];
    let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); unknowns];
    for (i, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            if c >= unknowns {
                return Err(Error::Internal(format!("column {c} out of range")));
            }
            col_rows[c].push(i);
        }
    }
    let mut pivots = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let mut candidates: Vec<usize> = std::mem::take(&mut col_rows[col])
            .into_iter()
            .filter(|&i| !used[i] && coeff(&rows[i], col).is_some())
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        let Some(&pivot) = candidates.iter().min_by_key(|&&i| (rows[i].len(), i)) else {
            return Err(Error::Internal(format!(
                "singular system: no pivot for column {col}"
            )));
        };
        used[pivot] = true;
        let pivot_row = std::mem::take(&mut rows[pivot]);
        let pivot_val = coeff(&pivot_row, col).unwrap().clone();
        for &i in candidates.iter().filter(|&&i| i != pivot) {
            let factor = coeff(&rows[i], col).unwrap() / &pivot_val;
            let updated = axpy(&rows[i], &factor, &pivot_row);
            for &(c, _) in &updated {
                if c > col && coeff(&rows[i], c).is_none() {
                    col_rows[c].push(i);
                }
            }
            rows[i] = updated;
            rhs[i] = &rhs[i] - &factor * &rhs[pivot];
        }
        rows[pivot] = pivot_row;
        pivots.push((col, pivot));
    }
    for (i, row) in rows.iter().enumerate() {
        if !used[i] && (!row.is_empty() || !rhs[i].is_zero()) {
            return Err(Error::Internal("inconsistent linear system".into()));
        }
    }
    let mut x = vec![BigRational::zero(); unknowns];
    for &(col, p) in pivots.iter().rev() {
        let mut acc = rhs[p].clone();
        let mut diag = None;
        for (c, v) in &rows[p] {
            if *c == col {
                diag = Some(v);
            } else {
                debug_assert!(*c > col);
                acc -= v * &x[*c];
            }
        }
        x[col] = acc / diag.expect("pivot entry");
    }
    Ok(x)
}

/// Largest absolute residual `|A x - b|` over all rows; zero for an exact solution.
pub fn max_residual(rows: &[SparseRow], rhs: &[BigRational], x: &[BigRational]) -> BigRational {
    rows.iter()
        .zip(rhs)
        .map(|(row, b)| {
            let ax: BigRational = row.iter().map(|(c, v)| v * &x[*c]).sum();
            (ax - b).abs()
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Primes just below `2^31`, so products of two residues fit in a `u64`.
const PRIMES: [u64; 16] = [
    2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543,
    2147483497, 2147483489, 2147483477, 2147483423, 2147483399, 2147483353, 2147483323,
    2147483269, 2147483249,
];

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64()?;
    let den = q.denom().mod_floor(&pb).to_u64()?;
    (den != 0).then(|| num * inv_mod(den, p) % p)
}

/// Dense solve modulo `p`; `None` when the reduction is rank deficient or a
/// denominator vanishes modulo `p`.
fn solve_mod(rows: &[SparseRow], rhs: &[BigRational], unknowns: usize, p: u64) -> Option<Vec<u64>> {
    let width = unknowns + 1;
    let mut a = vec![0u64; rows.len() * width];
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        for (c, v) in row {
            a[i * width + c] = reduce(v, p)?;
        }
        a[i * width + unknowns] = reduce(b, p)?;
    }
    let height = rows.len();
    let mut order: Vec<usize> = (0..height).collect();
    for col in 0..unknowns {
        let k = (col..height).find(|&k| a[order[k] * width + col] != 0)?;
        order.swap(col, k);
        let piv = order[col];
        let inv = inv_mod(a[piv * width + col], p);
        for j in col..width {
            a[piv * width + j] = a[piv * width + j] * inv % p;
        }
        let pivot_row = a[piv * width..(piv + 1) * width].to_vec();
        for &i in order.iter().filter(|&&i| i != piv) {
            let f = a[i * width + col];
            if f == 0 {
                continue;
            }
            let neg = p - f;
            let target = &mut a[i * width..(i + 1) * width];
            for j in col..width {
                target[j] = (target[j] + neg * pivot_row[j]) % p;
            }
        }
    }
    // remaining rows must read 0 = 0
    if order[unknowns..].iter().any(|&i| a[i * width + unknowns] != 0) {
        return None;
    }
    Some((0..unknowns).map(|c| a[order[c] * width + unknowns]).collect())
}

/// The fraction `a/b` with `a = b * residue mod modulus` and
/// `|a|, b <= sqrt(modulus / 2)`, if one exists.
fn rational_reconstruction(residue: &BigInt, modulus: &BigInt) -> Option<BigRational> {
    let bound = (modulus / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), residue.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Solves `A x = b` for a unique `x` by modular elimination.
///
/// Full column rank modulo any prime implies full column rank over `Q`, and
/// every returned solution has been checked to satisfy the system exactly.
pub fn solve_unique_modular(
    rows: &[SparseRow],
    rhs: &[BigRational],
    unknowns: usize,
) -> Result<Vec<BigRational>> {
    assert_eq!(rows.len(), rhs.len());
    let mut modulus = BigInt::one();
    let mut residues: Vec<BigInt> = vec![BigInt::zero(); unknowns];
    let mut full_rank_seen = false;
    for &p in &PRIMES {
        let Some(sol) = solve_mod(rows, rhs, unknowns, p) else {
            continue;
        };
        full_rank_seen = true;
        // CRT: x = r + M * ((s - r) * M^{-1} mod p)
        let pb = BigInt::from(p);
        let m_inv = inv_mod(modulus.mod_floor(&pb).to_u64().unwrap(), p);
        for (r, s) in residues.iter_mut().zip(sol) {
            let r_mod = r.mod_floor(&pb).to_u64().unwrap();
            let k = (s + p - r_mod) % p * m_inv % p;
            *r += &modulus * BigInt::from(k);
        }
        modulus *= &pb;
        let candidate: Option<Vec<BigRational>> = residues
            .iter()
            .map(|r| rational_reconstruction(r, &modulus))
            .collect();
        if let Some(x) = candidate {
            if max_residual(rows, rhs, &x).is_zero() {
                return Ok(x);
            }
        }
    }
    Err(Error::Internal(if full_rank_seen {
        "modular solve did not converge to an exact solution".into()
    } else {
        "system is singular or inconsistent modulo every trial prime".into()
    }))
}
