//! Closed forms at sorted words and their ingredients.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::binomial::binom;
use crate::error::{Error, Result};
use crate::words::TypeVector;

/// `[1^{m_1} ... r^{m_r}] = prod_{i=2}^{r-1} C(n - m_i, m_1 + ... + m_{i-1})`.
pub fn sorted_bracket_formula(m: &TypeVector) -> BigUint {
    let n = m.n() as i64;
    let sums = m.partial_sums();
    (1..m.r().saturating_sub(1))
        .map(|i| binom(n - m.counts()[i] as i64, sums[i - 1] as i64))
        .product()
}

/// Both sides of `C(n, b) = sum_{k=0}^{b} C(n-s-k-1, b-k) C(s+k, s)`,
/// evaluated separately.
pub fn binomial_identity_sides(n: u64, b: u64, s: u64) -> (BigUint, BigUint) {
    let (n, b, s) = (n as i64, b as i64, s as i64);
    let left = binom(n, b);
    let right = (0..=b)
        .map(|k| binom(n - s - k - 1, b - k) * binom(s + k, s))
        .sum();
    (left, right)
}

/// `C(s + b, s) * base`, the predicted bracket of `u α^{L-b} β^b` from that
/// of `u α^L`, where `u` has length `s`.
pub fn scaled_bracket_prediction(base: &BigUint, s: u64, b: u64) -> BigUint {
    binom((s + b) as i64, s as i64) * base
}

/// The sorted-word bracket obtained by peeling off the top class `r - 2`
/// times with [`scaled_bracket_prediction`], starting from `[1^n] = 1`.
pub fn chained_scaling(m: &TypeVector) -> BigUint {
    let mut counts = m.counts().to_vec();
    let mut factors = Vec::new();
    while counts.len() > 2 {
        let top = counts.pop().unwrap();
        let below = counts.pop().unwrap();
        let s: usize = counts.iter().sum();
        factors.push((s as u64, top as u64));
        counts.push(below + top);
    }
    factors
        .into_iter()
        .rev()
        .fold(BigUint::one(), |base, (s, b)| scaled_bracket_prediction(&base, s, b))
}

/// A tuple of nonnegative integers with a fixed sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Composition {
    pub parts: Vec<usize>,
    pub total: usize,
}

/// Iterator over all compositions of `total` into `parts` nonnegative parts,
/// in decreasing lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<usize>>,
    total: usize,
}

impl Iterator for Compositions {
    type Item = Composition;

    fn next(&mut self) -> Option<Composition> {
        let out = self.current.take()?;
        let k = out.len();
        if k >= 2 {
            if let Some(j) = out[..k - 1].iter().rposition(|&x| x > 0) {
                let mut next = out.clone();
                let tail = next[k - 1];
                next[j] -= 1;
                next[k - 1] = 0;
                next[j + 1] = tail + 1;
                self.current = Some(next);
            }
        }
        Some(Composition {
            parts: out,
            total: self.total,
        })
    }
}

pub fn compositions(total: usize, parts: usize) -> Result<Compositions> {
    if parts == 0 && total > 0 {
        return Err(Error::BadType(format!("cannot split {total} into zero parts")));
    }
    let mut first = vec![0; parts];
    if let Some(head) = first.first_mut() {
        *head = total;
    }
    Ok(Compositions {
        current: Some(first),
        total,
    })
}

/// Evaluation point `(v_1, ..., v_r)`, all positive, with `v_i = 1/x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct InhomParams {
    v: Vec<BigRational>,
}

impl InhomParams {
    pub fn new(v: Vec<BigRational>) -> Result<Self> {
        if v.iter().any(|x| *x <= BigRational::zero()) {
            return Err(Error::BadRates("all v_i must be positive".into()));
        }
        Ok(InhomParams { v })
    }

    /// `v = (1/x_1, ..., 1/x_{r-1}, 1)`; the last entry never enters a term.
    pub fn from_rates(rates: &[BigRational]) -> Result<Self> {
        if rates.iter().any(|x| *x <= BigRational::zero()) {
            return Err(Error::BadRates("rates must be positive".into()));
        }
        let mut v: Vec<BigRational> = rates.iter().map(|x| x.recip()).collect();
        v.push(BigRational::one());
        InhomParams::new(v)
    }

    /// All ones, for `r` classes.
    pub fn ones(r: usize) -> Self {
        InhomParams {
            v: vec![BigRational::one(); r],
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.v
    }
}

fn product_of_sums(m: &TypeVector, p: &InhomParams, last_weight: impl Fn(usize, usize) -> BigUint) -> Result<BigRational> {
    let r = m.r();
    if p.v.len() != r {
        return Err(Error::BadRates(format!(
            "expected {r} values of v, got {}",
            p.v.len()
        )));
    }
    let n = m.n();
    let counts = m.counts();
    let sums = m.partial_sums();
    // powers[i][t] = v_i^t
    let powers: Vec<Vec<BigRational>> = p
        .v
        .iter()
        .map(|v| {
            std::iter::successors(Some(BigRational::one()), |acc| Some(acc * v))
                .take(n + 1)
                .collect()
        })
        .collect();
    let big = |u: BigUint| BigRational::from_integer(BigInt::from(u));
    let mut result = BigRational::one();
    for j in 1..=r {
        let mut factor = BigRational::zero();
        for comp in compositions(n - sums[j - 1], j)? {
            let t = &comp.parts;
            let mut term = BigRational::one();
            for i in 0..j - 1 {
                let mi = counts[i] as i64;
                term *= big(binom(mi + t[i] as i64 - 1, mi - 1)) * &powers[i][t[i]];
            }
            term *= big(last_weight(counts[j - 1], t[j - 1])) * &powers[j - 1][t[j - 1]];
            factor += term;
        }
        result *= factor;
    }
    Ok(result)
}

/// Weighted sorted-word value, up to a monomial shared with
/// [`inhom_partition_value`].
pub fn inhom_sorted_value(m: &TypeVector, p: &InhomParams) -> Result<BigRational> {
    product_of_sums(m, p, |_, _| BigUint::one())
}

/// Weighted count of all queues, same normalization as [`inhom_sorted_value`].
pub fn inhom_partition_value(m: &TypeVector, p: &InhomParams) -> Result<BigRational> {
    product_of_sums(m, p, |mj, tj| binom((mj + tj) as i64, mj as i64))
}

/// Stationary probability of the sorted word of the inhomogeneous chain:
/// the ratio of the two sums, where the unspecified monomial cancels.
pub fn inhom_sorted_probability(m: &TypeVector, p: &InhomParams) -> Result<BigRational> {
    Ok(inhom_sorted_value(m, p)? / inhom_partition_value(m, p)?)
}

/// Parses `"1/2,1,3"` into exact rationals.
pub fn parse_rational_list(s: &str) -> Result<Vec<BigRational>> {
    s.split(',')
        .map(|part| {
            let part = part.trim();
            let bad = || Error::BadRates(format!("cannot parse {part:?} as a rational"));
            let (num, den) = match part.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (part, "1"),
            };
            let num: BigInt = num.parse().map_err(|_| bad())?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        })
        .collect()
}
