//! The `m`-TASEP on words of a fixed type.
//!
//! At each step a position `i` is chosen uniformly. If its letter is strictly
//! smaller than the letter cyclically to its left, the two letters swap;
//! otherwise the chain stays put. With rates `x_1, ..., x_{r-1}` a candidate
//! swap is accepted with probability `x_c / max(x)` (uniformization), where
//! the class `c` is picked by the [`Convention`].

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde_json::json;

use crate::binomial::multinomial;
use crate::error::{Error, Result};
use crate::linalg::{solve_unique, solve_unique_modular, SparseRow};
use crate::mlq::partition_function;
use crate::words::{type_of, words_of_type, Letter, TypeVector, Word};

/// Default cap on the number of states of an exact solve (all orderings of
/// seven distinct letters).
pub const DEFAULT_STATE_CAP: u128 = 5040;

/// Identifier of the simulation random stream, recorded in reports.
pub const RNG_ALGORITHM: &str =
    "chacha8 (key = seed as u64 little-endian, zero padded to 32 bytes; stream 0); \
     position = next_u64 mod n; accept iff next_u64 < floor(2^64 * x_c / x_max)";

/// Which letter of a swapping pair sets the rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// The smaller letter `b`, the one moving left: rate `x_b`.
    JumperClass,
    /// The larger letter `a`, the one being overtaken: rate `x_{a-1}`, so
    /// that the `r - 1` rates cover the blocker classes `2..=r`.
    BlockerClass,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::JumperClass => "jumper",
            Convention::BlockerClass => "blocker",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainSpec {
    m: TypeVector,
    rates: Option<Vec<BigRational>>,
    convention: Convention,
}

impl ChainSpec {
    /// The homogeneous chain: every swap has probability exactly `1/n`.
    pub fn homogeneous(m: TypeVector) -> Result<Self> {
        if m.is_relaxed() {
            return Err(Error::BadType(format!("chain type {m} must be strict")));
        }
        Ok(ChainSpec {
            m,
            rates: None,
            convention: Convention::JumperClass,
        })
    }

    /// The chain with rates `x_1, ..., x_{r-1}`.
    pub fn with_rates(m: TypeVector, rates: Vec<BigRational>, convention: Convention) -> Result<Self> {
        let mut spec = ChainSpec::homogeneous(m)?;
        let expected = spec.m.r().saturating_sub(1);
        if rates.len() != expected {
            return Err(Error::BadRates(format!(
                "expected {expected} rates for type {}, got {}",
                spec.m,
                rates.len()
            )));
        }
        if rates.iter().any(|x| *x <= BigRational::zero()) {
            return Err(Error::BadRates("rates must be strictly positive".into()));
        }
        spec.rates = Some(rates);
        spec.convention = convention;
        Ok(spec)
    }

    pub fn type_vector(&self) -> &TypeVector {
        &self.m
    }

    pub fn rates(&self) -> Option<&[BigRational]> {
        self.rates.as_deref()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn is_homogeneous(&self) -> bool {
        self.rates.is_none()
    }

    /// 0-based index into the rates for a swap of `left > right`.
    fn rate_index(&self, left: Letter, right: Letter) -> usize {
        match self.convention {
            Convention::JumperClass => right as usize - 1,
            Convention::BlockerClass => left as usize - 2,
        }
    }

    /// Probability that a chosen descent actually swaps.
    fn acceptance(&self, left: Letter, right: Letter) -> BigRational {
        match &self.rates {
            None => BigRational::one(),
            Some(rates) => {
                let max = rates.iter().max().expect("r >= 2 when a swap exists");
                &rates[self.rate_index(left, right)] / max
            }
        }
    }

    /// The moves out of `w`, one per cyclic descent, and the loop probability.
    pub fn transitions(&self, w: &Word) -> Transitions {
        let n = w.len();
        let step = BigRational::new(BigInt::one(), BigInt::from(n));
        let letters = w.letters();
        let mut moves = Vec::new();
        for i in 0..n {
            let left = (i + n - 1) % n;
            if letters[i] < letters[left] {
                let mut next = letters.to_vec();
                next.swap(i, left);
                let p = &step * self.acceptance(letters[left], letters[i]);
                moves.push((Word::from_letters_unchecked(next), p));
            }
        }
        let out: BigRational = moves.iter().map(|(_, p)| p).sum();
        Transitions {
            moves,
            stay: BigRational::one() - out,
        }
    }
}

/// Outgoing moves of a single word. Targets may repeat.
#[derive(Clone, Debug, PartialEq)]
pub struct Transitions {
    pub moves: Vec<(Word, BigRational)>,
    pub stay: BigRational,
}

/// Transitions of the homogeneous chain.
pub fn transitions(w: &Word) -> Transitions {
    let spec = ChainSpec {
        m: TypeVector::new(vec![w.len()]).unwrap(),
        rates: None,
        convention: Convention::JumperClass,
    };
    spec.transitions(w)
}

/// Row-stochastic matrix over all words of the chain's type, stored sparsely.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    states: Vec<Word>,
    index: HashMap<Word, usize>,
    rows: Vec<SparseRow>,
}

impl TransitionMatrix {
    pub fn states(&self) -> &[Word] {
        &self.states
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn entry(&self, from: usize, to: usize) -> BigRational {
        self.rows[from]
            .binary_search_by_key(&to, |e| e.0)
            .map(|k| self.rows[from][k].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    pub fn to_dense(&self) -> Vec<Vec<BigRational>> {
        (0..self.states.len())
            .map(|i| (0..self.states.len()).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

fn check_cap(m: &TypeVector, cap: u128) -> Result<()> {
    let states = multinomial(m.counts()).unwrap_or(u128::MAX);
    if states > cap {
        return Err(Error::CapExceeded { states, cap });
    }
    Ok(())
}

pub fn transition_matrix(spec: &ChainSpec, cap: u128) -> Result<TransitionMatrix> {
    check_cap(&spec.m, cap)?;
    let states = words_of_type(&spec.m);
    let index: HashMap<Word, usize> = states.iter().cloned().zip(0..).collect();
    let rows = states
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let t = spec.transitions(w);
            let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (target, p) in t.moves {
                *acc.entry(index[&target]).or_insert_with(BigRational::zero) += p;
            }
            *acc.entry(i).or_insert_with(BigRational::zero) += t.stay;
            acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
        })
        .collect();
    Ok(TransitionMatrix {
        states,
        index,
        rows,
    })
}

/// Exact stationary probabilities of the words of one type.
#[derive(Clone, Debug, PartialEq)]
pub struct StationaryTable {
    m: TypeVector,
    z: Option<BigUint>,
    entries: BTreeMap<Word, BigRational>,
}

impl StationaryTable {
    pub fn new(m: TypeVector, z: Option<BigUint>, entries: BTreeMap<Word, BigRational>) -> Self {
        StationaryTable { m, z, entries }
    }

    /// `π(u) = [u] / Z_m` from a bracket tally; words missing from the tally
    /// get probability zero.
    pub fn from_brackets(m: &TypeVector, brackets: &BTreeMap<Word, u64>) -> Self {
        let z = partition_function(m);
        let zi = BigInt::from(z.clone());
        let entries = words_of_type(m)
            .into_iter()
            .map(|u| {
                let k = brackets.get(&u).copied().unwrap_or(0);
                (u, BigRational::new(BigInt::from(k), zi.clone()))
            })
            .collect();
        StationaryTable {
            m: m.clone(),
            z: Some(z),
            entries,
        }
    }

    pub fn type_vector(&self) -> &TypeVector {
        &self.m
    }

    pub fn get(&self, w: &Word) -> Option<&BigRational> {
        self.entries.get(w)
    }

    pub fn entries(&self) -> &BTreeMap<Word, BigRational> {
        &self.entries
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().sum()
    }

    /// Denominator used for export: `Z` when every probability is a multiple
    /// of `1/Z`, otherwise the least common denominator.
    pub fn common_denominator(&self) -> BigInt {
        if let Some(z) = &self.z {
            let z = BigInt::from(z.clone());
            if self.entries.values().all(|p| (p * &z).is_integer()) {
                return z;
            }
        }
        self.entries
            .values()
            .fold(BigInt::one(), |acc, p| acc.lcm(p.denom()))
    }

    /// Numerator of each probability over [`Self::common_denominator`].
    pub fn scaled(&self) -> (BigInt, Vec<(&Word, BigInt)>) {
        let d = self.common_denominator();
        let rows = self
            .entries
            .iter()
            .map(|(w, p)| (w, (p * &d).to_integer()))
            .collect();
        (d, rows)
    }

    /// `{"type", "n", "Z", "entries": {word: "p/q"}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let (d, rows) = self.scaled();
        let entries: serde_json::Map<String, serde_json::Value> = rows
            .into_iter()
            .map(|(w, k)| (w.to_string(), json!(format!("{k}/{d}"))))
            .collect();
        json!({
            "type": self.m.to_string(),
            "n": self.m.n(),
            "Z": d.to_string(),
            "entries": entries,
        })
    }

    /// `word,probability_num,probability_den` with a header line.
    pub fn to_csv(&self) -> String {
        let (d, rows) = self.scaled();
        let mut out = String::from("word,probability_num,probability_den\n");
        for (w, k) in rows {
            let word = w.to_string();
            let word = if word.contains(',') { format!("\"{word}\"") } else { word };
            out.push_str(&format!("{word},{k},{d}\n"));
        }
        out
    }
}

/// Linear solver behind [`stationary_exact_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Dense elimination modulo primes, reconstructed and checked over `Q`.
    Modular,
    /// Sparse elimination carried out in `Q` throughout.
    Rational,
}

/// Solves `π P = π`, `Σ π = 1` exactly.
pub fn stationary_exact(spec: &ChainSpec, cap: u128) -> Result<StationaryTable> {
    stationary_exact_with(spec, cap, Solver::Modular)
}

/// [`stationary_exact`] with an explicit choice of solver.
pub fn stationary_exact_with(spec: &ChainSpec, cap: u128, solver: Solver) -> Result<StationaryTable> {
    let matrix = transition_matrix(spec, cap)?;
    let size = matrix.states.len();
    // Column j of (P - I) becomes equation j.
    let mut equations: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); size];
    for (i, row) in matrix.rows.iter().enumerate() {
        for (j, p) in row {
            *equations[*j].entry(i).or_insert_with(BigRational::zero) += p;
        }
    }
    let mut rows: Vec<SparseRow> = equations
        .into_iter()
        .enumerate()
        .map(|(j, mut eq)| {
            *eq.entry(j).or_insert_with(BigRational::zero) -= BigRational::one();
            eq.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    let mut rhs = vec![BigRational::zero(); size];
    rows.push((0..size).map(|j| (j, BigRational::one())).collect());
    rhs.push(BigRational::one());
    let pi = match solver {
        Solver::Modular => solve_unique_modular(&rows, &rhs, size)?,
        Solver::Rational => solve_unique(rows, rhs, size)?,
    };
    if pi.iter().any(|p| *p < BigRational::zero()) {
        return Err(Error::Internal("negative stationary probability".into()));
    }
    let z = spec.is_homogeneous().then(|| partition_function(&spec.m));
    Ok(StationaryTable {
        m: spec.m.clone(),
        z,
        entries: matrix.states.into_iter().zip(pi).collect(),
    })
}

/// Words whose balance `π(u) (1 - P(u,u)) = Σ_{v ≠ u} π(v) P(v,u)` fails.
/// For the homogeneous chain this is `k π(u) = Σ_{v→u} π(v)` scaled by `1/n`.
pub fn balance_violations(spec: &ChainSpec, table: &StationaryTable) -> Vec<Word> {
    let mut inflow: HashMap<Word, BigRational> = HashMap::new();
    let mut outflow: HashMap<Word, BigRational> = HashMap::new();
    for (v, pv) in &table.entries {
        for (u, p) in spec.transitions(v).moves {
            if u == *v {
                continue;
            }
            *outflow.entry(v.clone()).or_insert_with(BigRational::zero) += pv * &p;
            *inflow.entry(u).or_insert_with(BigRational::zero) += pv * p;
        }
    }
    let zero = BigRational::zero();
    table
        .entries
        .keys()
        .filter(|u| inflow.get(*u).unwrap_or(&zero) != outflow.get(*u).unwrap_or(&zero))
        .cloned()
        .collect()
}

/// Visit counts of one simulated trajectory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationResult {
    pub seed: u64,
    pub steps: u64,
    /// Number of visits to each word, the start state included; sums to `steps + 1`.
    pub counts: BTreeMap<Word, u64>,
}

impl SimulationResult {
    pub fn frequency(&self, w: &Word) -> f64 {
        self.counts.get(w).copied().unwrap_or(0) as f64 / (self.steps + 1) as f64
    }
}

fn stream(seed: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// `floor(2^64 * p)` for `p` in `(0, 1]`.
fn threshold(p: &BigRational) -> u128 {
    let scaled = (p * BigRational::from_integer(BigInt::one() << 64u32)).floor();
    scaled.to_integer().to_u128().unwrap_or(u128::MAX)
}

/// Runs the chain for `steps` steps from `start`; deterministic in `seed`.
pub fn simulate(spec: &ChainSpec, start: &Word, steps: u64, seed: u64) -> Result<SimulationResult> {
    if type_of(start).ok().as_ref() != Some(&spec.m) {
        return Err(Error::TypeMismatch);
    }
    let n = start.len();
    let r = spec.m.r();
    // acceptance thresholds indexed by (left, right) letters
    let mut accept = vec![u128::MAX; (r + 1) * (r + 1)];
    if spec.rates.is_some() {
        for left in 2..=r as Letter {
            for right in 1..left {
                accept[left as usize * (r + 1) + right as usize] =
                    threshold(&spec.acceptance(left, right));
            }
        }
    }
    let one = 1u128 << 64;
    let mut rng = stream(seed);
    let mut word = start.letters().to_vec();
    let mut counts: HashMap<Vec<Letter>, u64> = HashMap::new();
    counts.insert(word.clone(), 1);
    for _ in 0..steps {
        let i = (rng.next_u64() % n as u64) as usize;
        let left = (i + n - 1) % n;
        if word[i] < word[left] {
            let t = accept[word[left] as usize * (r + 1) + word[i] as usize];
            if t >= one || (rng.next_u64() as u128) < t {
                word.swap(i, left);
            }
        }
        match counts.get_mut(&word) {
            Some(c) => *c += 1,
            None => {
                counts.insert(word.clone(), 1);
            }
        }
    }
    Ok(SimulationResult {
        seed,
        steps,
        counts: counts
            .into_iter()
            .map(|(k, v)| (Word::from_letters_unchecked(k), v))
            .collect(),
    })
}

/// Independent replicas, one per seed, run in parallel.
pub fn simulate_replicas(
    spec: &ChainSpec,
    start: &Word,
    steps: u64,
    seeds: &[u64],
) -> Result<Vec<SimulationResult>> {
    seeds
        .par_iter()
        .map(|&seed| simulate(spec, start, steps, seed))
        .collect()
}

/// `½ Σ_u |p̂(u) - π(u)|` over the union of both supports.
pub fn total_variation(sim: &SimulationResult, table: &StationaryTable) -> f64 {
    let total = (sim.steps + 1) as f64;
    let mut tv = 0.0;
    for (w, p) in table.entries() {
        let exact = p.to_f64().unwrap_or(f64::NAN);
        tv += (sim.counts.get(w).copied().unwrap_or(0) as f64 / total - exact).abs();
    }
    for (w, &c) in &sim.counts {
        if table.get(w).is_none() {
            tv += c as f64 / total;
        }
    }
    tv / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::strict_types_up_to;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn t(s: &str) -> TypeVector {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn transitions_examples() {
        let t1 = transitions(&w("1234"));
        assert_eq!(t1.moves, vec![(w("4231"), q(1, 4))]);
        assert_eq!(t1.stay, q(3, 4));

        let t2 = transitions(&w("1423"));
        assert_eq!(t2.moves, vec![(w("3421"), q(1, 4)), (w("1243"), q(1, 4))]);
        assert_eq!(t2.stay, q(1, 2));

        let t3 = transitions(&w("11"));
        assert!(t3.moves.is_empty());
        assert_eq!(t3.stay, q(1, 1));
    }

    #[test]
    fn outgoing_probabilities_sum_to_one() {
        for m in strict_types_up_to(6) {
            for u in words_of_type(&m) {
                let tr = transitions(&u);
                let total: BigRational = tr.moves.iter().map(|(_, p)| p).sum::<BigRational>() + &tr.stay;
                assert_eq!(total, q(1, 1));
            }
        }
    }

    #[test]
    fn matrix_examples() {
        let spec = ChainSpec::homogeneous(t("1,1")).unwrap();
        let m = transition_matrix(&spec, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(m.states(), &[w("12"), w("21")]);
        assert_eq!(m.to_dense(), vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(1, 2)]]);

        let spec = ChainSpec::homogeneous(t("2")).unwrap();
        assert_eq!(transition_matrix(&spec, DEFAULT_STATE_CAP).unwrap().to_dense(), vec![vec![q(1, 1)]]);

        let spec = ChainSpec::homogeneous(t("1,1,1")).unwrap();
        let m = transition_matrix(&spec, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(m.states().len(), 6);
        for row in m.to_dense() {
            assert_eq!(row.into_iter().sum::<BigRational>(), q(1, 1));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let spec = ChainSpec::homogeneous(t("1,1,1,1")).unwrap();
        assert_eq!(
            transition_matrix(&spec, 23).unwrap_err(),
            Error::CapExceeded { states: 24, cap: 23 }
        );
        assert!(stationary_exact(&spec, 23).is_err());
    }

    #[test]
    fn stationary_examples() {
        let spec = ChainSpec::homogeneous(t("1,1")).unwrap();
        let pi = stationary_exact(&spec, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(pi.get(&w("12")), Some(&q(1, 2)));
        assert_eq!(pi.get(&w("21")), Some(&q(1, 2)));

        let spec = ChainSpec::homogeneous(t("1,1,1,1")).unwrap();
        let pi = stationary_exact(&spec, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(pi.get(&w("1234")), Some(&q(9, 96)));
        assert_eq!(pi.get(&w("1432")), Some(&q(1, 96)));
        assert_eq!(pi.total(), q(1, 1));
        assert_eq!(pi.entries().len(), 24);
    }

    #[test]
    fn solvers_agree() {
        for m in strict_types_up_to(5) {
            let spec = ChainSpec::homogeneous(m.clone()).unwrap();
            assert_eq!(
                stationary_exact_with(&spec, DEFAULT_STATE_CAP, Solver::Modular).unwrap(),
                stationary_exact_with(&spec, DEFAULT_STATE_CAP, Solver::Rational).unwrap(),
                "{m}"
            );
        }
        let spec = ChainSpec::with_rates(t("1,2,1"), vec![q(1, 2), q(3, 1)], Convention::JumperClass).unwrap();
        assert_eq!(
            stationary_exact_with(&spec, DEFAULT_STATE_CAP, Solver::Modular).unwrap(),
            stationary_exact_with(&spec, DEFAULT_STATE_CAP, Solver::Rational).unwrap()
        );
    }

    #[test]
    fn stationary_satisfies_balance() {
        for m in strict_types_up_to(6) {
            let spec = ChainSpec::homogeneous(m.clone()).unwrap();
            let pi = stationary_exact(&spec, DEFAULT_STATE_CAP).unwrap();
            assert!(balance_violations(&spec, &pi).is_empty(), "{m}");
            assert_eq!(pi.total(), q(1, 1));
        }
    }

    #[test]
    fn balance_check_detects_a_wrong_table() {
        let spec = ChainSpec::homogeneous(t("1,1,1")).unwrap();
        let uniform = words_of_type(&t("1,1,1")).into_iter().map(|u| (u, q(1, 6))).collect();
        let table = StationaryTable::new(t("1,1,1"), None, uniform);
        assert!(!balance_violations(&spec, &table).is_empty());
    }

    #[test]
    fn exports() {
        let spec = ChainSpec::homogeneous(t("1,1,1,1")).unwrap();
        let pi = stationary_exact(&spec, DEFAULT_STATE_CAP).unwrap();
        let js = pi.to_json();
        assert_eq!(js["type"], "1,1,1,1");
        assert_eq!(js["n"], 4);
        assert_eq!(js["Z"], "96");
        assert_eq!(js["entries"]["1234"], "9/96");
        assert_eq!(js["entries"]["1432"], "1/96");
        let csv = pi.to_csv();
        assert!(csv.starts_with("word,probability_num,probability_den\n1234,9,96\n"));
        assert_eq!(csv.lines().count(), 25);
    }

    #[test]
    fn rates_are_validated() {
        assert!(ChainSpec::with_rates(t("1,1,1"), vec![q(1, 1)], Convention::JumperClass).is_err());
        assert!(ChainSpec::with_rates(t("1,1,1"), vec![q(1, 1), q(0, 1)], Convention::JumperClass).is_err());
        assert!(ChainSpec::with_rates(t("1,1,1"), vec![q(1, 1), q(2, 1)], Convention::BlockerClass).is_ok());
    }

    #[test]
    fn equal_rates_give_the_homogeneous_chain() {
        let m = t("1,2,1");
        let flat = ChainSpec::with_rates(m.clone(), vec![q(3, 1), q(3, 1)], Convention::BlockerClass).unwrap();
        let plain = ChainSpec::homogeneous(m).unwrap();
        assert_eq!(
            stationary_exact(&flat, DEFAULT_STATE_CAP).unwrap().entries(),
            stationary_exact(&plain, DEFAULT_STATE_CAP).unwrap().entries()
        );
    }

    #[test]
    fn inhomogeneous_transitions_use_the_convention() {
        let rates = vec![q(1, 1), q(2, 1)];
        let jumper = ChainSpec::with_rates(t("1,1,1"), rates.clone(), Convention::JumperClass).unwrap();
        let blocker = ChainSpec::with_rates(t("1,1,1"), rates, Convention::BlockerClass).unwrap();
        // 132: 1 passes 2 (rate x_1 either way), 2 passes 3 (rate x_2 either way)
        let tj = jumper.transitions(&w("132"));
        assert_eq!(tj.moves, vec![(w("231"), q(1, 6)), (w("123"), q(1, 3))]);
        let tb = blocker.transitions(&w("132"));
        assert_eq!(tb.moves, vec![(w("231"), q(1, 6)), (w("123"), q(1, 3))]);
        // 312: the only descent puts 1 past 3
        let tj = jumper.transitions(&w("312"));
        assert_eq!(tj.moves, vec![(w("132"), q(1, 6))]);
        let tb = blocker.transitions(&w("312"));
        assert_eq!(tb.moves, vec![(w("132"), q(1, 3))]);
    }

    #[test]
    fn simulation_basics() {
        let spec = ChainSpec::homogeneous(t("1,1")).unwrap();
        let sim = simulate(&spec, &w("12"), 0, 7).unwrap();
        assert_eq!(sim.counts.into_iter().collect::<Vec<_>>(), vec![(w("12"), 1)]);

        let spec = ChainSpec::homogeneous(t("1,1,2")).unwrap();
        let a = simulate(&spec, &w("1233"), 5000, 3).unwrap();
        let b = simulate(&spec, &w("1233"), 5000, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 5001);
        assert_ne!(a, simulate(&spec, &w("1233"), 5000, 4).unwrap());
        assert_eq!(simulate(&spec, &w("123"), 5, 1), Err(Error::TypeMismatch));
    }

    #[test]
    fn replicas_match_single_runs() {
        let spec = ChainSpec::homogeneous(t("1,1,1")).unwrap();
        let reps = simulate_replicas(&spec, &w("123"), 1000, &[1, 2, 3]).unwrap();
        for rep in reps {
            assert_eq!(rep, simulate(&spec, &w("123"), 1000, rep.seed).unwrap());
        }
    }

    #[test]
    fn random_stream_is_pinned() {
        // first outputs of the documented stream for seed 1
        let mut rng = stream(1);
        let first: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        let mut again = stream(1);
        assert_eq!(first, (0..3).map(|_| again.next_u64()).collect::<Vec<_>>());
        assert_ne!(first, {
            let mut other = stream(2);
            (0..3).map(|_| other.next_u64()).collect::<Vec<_>>()
        });
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(&q(1, 1)), 1u128 << 64);
        assert_eq!(threshold(&q(1, 2)), 1u128 << 63);
        assert_eq!(threshold(&q(1, 3)), (1u128 << 64) / 3);
    }
}
