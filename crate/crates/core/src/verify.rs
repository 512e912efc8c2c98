//! Exhaustive verification suites over all strict types up to a size bound.
//!
//! Each suite reports how many cases it checked and the first counterexample
//! it met, if any.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::binomial::{binom, binom_u128};
use crate::chain::{stationary_exact, ChainSpec, StationaryTable};
use crate::error::{Error, Result};
use crate::formulas::{
    binomial_identity_sides, chained_scaling, inhom_partition_value, inhom_sorted_value,
    scaled_bracket_prediction, sorted_bracket_formula, InhomParams,
};
use crate::mlq::{beta_alpha_backward, beta_alpha_forward, count_all, enumerate_mlqs, label, partition_function};
use crate::words::{
    collapse_nontrailing, cyclic_shifts, enumerate_suffixes, merge_top, reverse_complement,
    sorted_suffix, sorted_word, strict_types, strict_types_up_to, type_of, words_of_type, Letter,
    TypeVector, Word,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    FerrariMartin,
    Lemma1,
    Cyclic,
    Reversal,
    BaAa,
    EbSum,
    Scaling,
    Binomial,
    TheoremFinish,
    InhomReduce,
    OrderInvariance,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::FerrariMartin,
        Suite::Lemma1,
        Suite::Cyclic,
        Suite::Reversal,
        Suite::BaAa,
        Suite::EbSum,
        Suite::Scaling,
        Suite::Binomial,
        Suite::TheoremFinish,
        Suite::InhomReduce,
        Suite::OrderInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FerrariMartin => "ferrari-martin",
            Suite::Lemma1 => "lemma1",
            Suite::Cyclic => "cyclic",
            Suite::Reversal => "reversal",
            Suite::BaAa => "ba-aa",
            Suite::EbSum => "eb-sum",
            Suite::Scaling => "scaling",
            Suite::Binomial => "binomial",
            Suite::TheoremFinish => "theorem-finish",
            Suite::InhomReduce => "inhom-reduce",
            Suite::OrderInvariance => "order-invariance",
        }
    }

    /// The statement checked, written as a formula.
    pub fn statement(self) -> &'static str {
        match self {
            Suite::FerrariMartin => "pi(u) = [u] / Z_m, Z_m = prod_i C(n, m_1+...+m_i)",
            Suite::Lemma1 => "sum_{u : h(u) = v} pi_m(u) = pi_m'(v), h merges r into r-1",
            Suite::Cyclic => "[u'] = [u] and pi(u') = pi(u) for every rotation u' of u",
            Suite::Reversal => "pi(w) = pi(w') and [w] = [w'], w' = complement i -> r+1-i then reverse",
            Suite::BaAa => "[ba w] = [aa w] via a bijection of multi-line queues",
            Suite::EbSum => {
                "#{v in E_b : g(v) = k} = C(n-s-k-1, b-k); [uv] = [u f(v)]; sum_{v in E_b} [uv] = C(n,b) [u e^(0)]"
            }
            Suite::Scaling => "[u e^(b)] = C(s+b, s) [u e^(0)]",
            Suite::Binomial => "C(n,b) = sum_{k=0}^{b} C(n-s-k-1, b-k) C(s+k, s)",
            Suite::TheoremFinish => "[1^m1 ... r^mr] = prod_{i=2}^{r-1} C(n - m_i, m_1+...+m_{i-1})",
            Suite::InhomReduce => "inhomogeneous sorted value and partition value at v = 1 reduce to the homogeneous ones",
            Suite::OrderInvariance => "pi_m(sorted word) is invariant under permuting the entries of m",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::BadType(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub nmax: usize,
    pub cases: u64,
    pub failure: Option<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "suite": self.suite.name(),
            "statement": self.suite.statement(),
            "nmax": self.nmax,
            "cases": self.cases,
            "passed": self.passed(),
            "counterexample": self.failure,
        })
    }
}

/// Runs suites with memoized bracket tallies and stationary tables.
pub struct Verifier {
    budget: u128,
    cap: u128,
    brackets: HashMap<TypeVector, BTreeMap<Word, u64>>,
    stationary: HashMap<TypeVector, StationaryTable>,
}

struct Tally {
    cases: u64,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failure: None,
        }
    }

    /// Records one case; returns false once a failure has been seen.
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(describe());
        }
        self.failure.is_none()
    }
}

impl Verifier {
    pub fn new(budget: u128, cap: u128) -> Self {
        Verifier {
            budget,
            cap,
            brackets: HashMap::new(),
            stationary: HashMap::new(),
        }
    }

    fn tally(&mut self, m: &TypeVector) -> Result<&BTreeMap<Word, u64>> {
        if !self.brackets.contains_key(m) {
            let t = count_all(m, self.budget)?;
            self.brackets.insert(m.clone(), t);
        }
        Ok(&self.brackets[m])
    }

    /// `[u]`, zero for words no queue represents.
    pub fn bracket(&mut self, u: &Word) -> Result<u64> {
        let m = type_of(u)?;
        Ok(self.tally(&m)?.get(u).copied().unwrap_or(0))
    }

    pub fn pi(&mut self, m: &TypeVector) -> Result<&StationaryTable> {
        if !self.stationary.contains_key(m) {
            let spec = ChainSpec::homogeneous(m.clone())?;
            let table = stationary_exact(&spec, self.cap)?;
            self.stationary.insert(m.clone(), table);
        }
        Ok(&self.stationary[m])
    }

    pub fn run(&mut self, suite: Suite, nmax: usize) -> Result<SuiteReport> {
        let t = match suite {
            Suite::FerrariMartin => self.ferrari_martin(nmax)?,
            Suite::Lemma1 => self.lemma1(nmax)?,
            Suite::Cyclic => self.cyclic(nmax)?,
            Suite::Reversal => self.reversal(nmax)?,
            Suite::BaAa => self.ba_aa(nmax)?,
            Suite::EbSum => self.eb_sum(nmax)?,
            Suite::Scaling => self.scaling(nmax)?,
            Suite::Binomial => binomial(nmax),
            Suite::TheoremFinish => self.theorem_finish(nmax)?,
            Suite::InhomReduce => inhom_reduce(nmax)?,
            Suite::OrderInvariance => self.order_invariance(nmax)?,
        };
        Ok(SuiteReport {
            suite,
            nmax,
            cases: t.cases,
            failure: t.failure,
        })
    }

    fn ferrari_martin(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for m in strict_types_up_to(nmax) {
            let from_queues = StationaryTable::from_brackets(&m, self.tally(&m)?);
            let exact = self.pi(&m)?;
            for (u, p) in exact.entries() {
                let q = from_queues.get(u).cloned().unwrap_or_else(BigRational::zero);
                if !t.check(*p == q, || format!("type {m}, word {u}: pi = {p}, [u]/Z = {q}")) {
                    return Ok(t);
                }
            }
        }
        Ok(t)
    }

    fn lemma1(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for m in strict_types_up_to(nmax).into_iter().filter(|m| m.r() >= 2) {
            let merged = m.merged()?;
            let mut marginal: BTreeMap<Word, BigRational> = BTreeMap::new();
            for (u, p) in self.pi(&m)?.entries() {
                *marginal.entry(merge_top(u, false)?).or_insert_with(BigRational::zero) += p;
            }
            let coarse = self.pi(&merged)?.clone();
            for (v, p) in coarse.entries() {
                let s = marginal.get(v).cloned().unwrap_or_else(BigRational::zero);
                if !t.check(s == *p, || format!("type {m}, merged word {v}: marginal {s} vs {p}")) {
                    return Ok(t);
                }
            }
        }
        Ok(t)
    }

    fn cyclic(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for m in strict_types_up_to(nmax) {
            let pi = self.pi(&m)?.clone();
            for u in words_of_type(&m) {
                let b = self.bracket(&u)?;
                for s in cyclic_shifts(&u) {
                    let bs = self.bracket(&s)?;
                    let ok = bs == b && pi.get(&s) == pi.get(&u);
                    if !t.check(ok, || format!("word {u} vs rotation {s}: [{u}]={b}, [{s}]={bs}")) {
                        return Ok(t);
                    }
                }
            }
        }
        Ok(t)
    }

    fn reversal(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for m in strict_types_up_to(nmax) {
            let pi = self.pi(&m)?.clone();
            let pi_rev = self.pi(&m.reversed())?.clone();
            for u in words_of_type(&m) {
                let w = reverse_complement(&u, m.r())?;
                let (bu, bw) = (self.bracket(&u)?, self.bracket(&w)?);
                let ok = pi.get(&u) == pi_rev.get(&w) && bu == bw;
                if !t.check(ok, || format!("word {u} vs {w}: [{u}]={bu}, [{w}]={bw}")) {
                    return Ok(t);
                }
            }
        }
        Ok(t)
    }

    fn ba_aa(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for m in strict_types_up_to(nmax).into_iter().filter(|m| m.r() >= 2) {
            let r = m.r();
            let (alpha, beta) = ((r - 1) as Letter, r as Letter);
            let mut counts = m.counts().to_vec();
            counts[r - 2] += 1;
            counts[r - 1] -= 1;
            let target_type = TypeVector::relaxed(counts)?;
            let mut images = std::collections::HashSet::new();
            for q in enumerate_mlqs(&m, self.budget)? {
                let word = label(&q).bottom_word();
                if word.letters()[..2] != [beta, alpha] {
                    continue;
                }
                let image = match beta_alpha_forward(&q) {
                    Ok(image) => image,
                    Err(e) => {
                        t.check(false, || format!("type {m}, queue for {word}: {e}"));
                        return Ok(t);
                    }
                };
                let image_word = label(&image).bottom_word();
                let mut expected = word.letters().to_vec();
                expected[0] = alpha;
                let ok = image_word.letters() == &expected[..]
                    && beta_alpha_backward(&image).as_ref() == Ok(&q)
                    && images.insert(image);
                if !t.check(ok, || format!("type {m}: queue for {word} maps badly (image {image_word})")) {
                    return Ok(t);
                }
            }
            let target = enumerate_mlqs(&target_type, self.budget)?
                .filter(|q| label(q).bottom_word().letters()[..2] == [alpha, alpha])
                .count();
            let ok = target == images.len();
            if !t.check(ok, || {
                format!("type {m}: {} images but {target} target queues", images.len())
            }) {
                return Ok(t);
            }
        }
        Ok(t)
    }

    /// Every `(u, r, L)` with `u` of strict type over `1..=r-2`, `s + L = n`.
    fn prefixes(nmax: usize) -> Vec<(Word, usize, usize)> {
        let mut out = Vec::new();
        for n in 3..=nmax {
            for s in 1..n {
                for mu in strict_types(s) {
                    let r = mu.r() + 2;
                    for u in words_of_type(&mu) {
                        out.push((u, r, n - s));
                    }
                }
            }
        }
        out
    }

    fn eb_sum(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for (u, r, len) in Self::prefixes(nmax) {
            let s = u.len();
            let n = s + len;
            let base = self.bracket(&u.concat(&sorted_suffix(len, 0, r)?))?;
            for b in 0..len {
                let mut groups = vec![0u128; b + 1];
                let mut total = 0u64;
                for v in enumerate_suffixes(len, b, r)? {
                    let (fv, k) = collapse_nontrailing(&v, r)?;
                    groups[k] += 1;
                    let (uv, ufv) = (u.concat(&v), u.concat(&fv));
                    let (x, y) = (self.bracket(&uv)?, self.bracket(&ufv)?);
                    if !t.check(x == y, || format!("[{uv}] = {x} but [{ufv}] = {y}")) {
                        return Ok(t);
                    }
                    total += x;
                }
                for (k, &g) in groups.iter().enumerate() {
                    let want = binom_u128((len - k) as i64 - 1, (b - k) as i64).unwrap_or(0);
                    if !t.check(g == want, || {
                        format!("length {len}, b = {b}, k = {k}: {g} suffixes, expected {want}")
                    }) {
                        return Ok(t);
                    }
                }
                let want = binom(n as i64, b as i64) * BigUint::from(base);
                if !t.check(BigUint::from(total) == want, || {
                    format!("u = {u}, n = {n}, b = {b}: sum {total}, expected {want}")
                }) {
                    return Ok(t);
                }
            }
        }
        Ok(t)
    }

    fn scaling(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for (u, r, len) in Self::prefixes(nmax) {
            let s = u.len() as u64;
            let base = BigUint::from(self.bracket(&u.concat(&sorted_suffix(len, 0, r)?))?);
            for b in 0..len {
                let word = u.concat(&sorted_suffix(len, b, r)?);
                let got = BigUint::from(self.bracket(&word)?);
                let want = scaled_bracket_prediction(&base, s, b as u64);
                if !t.check(got == want, || format!("[{word}] = {got}, predicted {want}")) {
                    return Ok(t);
                }
            }
        }
        for m in strict_types_up_to(nmax) {
            let w = sorted_word(&m)?;
            let got = BigUint::from(self.bracket(&w)?);
            let chained = chained_scaling(&m);
            if !t.check(got == chained, || format!("[{w}] = {got}, chained scaling gives {chained}")) {
                return Ok(t);
            }
        }
        Ok(t)
    }

    fn theorem_finish(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        for m in strict_types_up_to(nmax) {
            let w = sorted_word(&m)?;
            let got = BigUint::from(self.bracket(&w)?);
            let want = sorted_bracket_formula(&m);
            if !t.check(got == want, || format!("[{w}] = {got}, formula gives {want}")) {
                return Ok(t);
            }
        }
        Ok(t)
    }

    fn order_invariance(&mut self, nmax: usize) -> Result<Tally> {
        let mut t = Tally::new();
        let mut by_multiset: BTreeMap<Vec<usize>, Vec<TypeVector>> = BTreeMap::new();
        for m in strict_types_up_to(nmax) {
            let mut key = m.counts().to_vec();
            key.sort_unstable();
            by_multiset.entry(key).or_default().push(m);
        }
        for types in by_multiset.values() {
            let mut reference: Option<(TypeVector, BigRational)> = None;
            for m in types {
                let w = sorted_word(m)?;
                let p = self.pi(m)?.get(&w).cloned().unwrap_or_else(BigRational::zero);
                match &reference {
                    None => {
                        t.cases += 1;
                        reference = Some((m.clone(), p));
                    }
                    Some((m0, p0)) => {
                        if !t.check(p == *p0, || format!("pi_({m0})(sorted) = {p0} but pi_({m})(sorted) = {p}")) {
                            return Ok(t);
                        }
                    }
                }
            }
        }
        Ok(t)
    }
}

fn binomial(nmax: usize) -> Tally {
    let mut t = Tally::new();
    for n in 0..=nmax as u64 {
        for s in 0..n {
            for b in 0..n - s {
                let (l, r) = binomial_identity_sides(n, b, s);
                if !t.check(l == r, || format!("n = {n}, b = {b}, s = {s}: {l} vs {r}")) {
                    return t;
                }
            }
        }
    }
    t
}

fn inhom_reduce(nmax: usize) -> Result<Tally> {
    let mut t = Tally::new();
    for m in strict_types_up_to(nmax) {
        let ones = InhomParams::ones(m.r());
        let sorted = inhom_sorted_value(&m, &ones)?;
        let z = inhom_partition_value(&m, &ones)?;
        let want_sorted = BigRational::from_integer(BigInt::from(sorted_bracket_formula(&m)));
        let want_z = BigRational::from_integer(BigInt::from(partition_function(&m)));
        let ok = sorted == want_sorted && z == want_z;
        if !t.check(ok, || format!("type {m}: ({sorted}, {z}) vs ({want_sorted}, {want_z})")) {
            return Ok(t);
        }
    }
    Ok(t)
}
