//! Acceptance checks; prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use tasep::binomial::{binom, binom_u128};
use tasep::chain::{
    simulate, stationary_exact, total_variation, ChainSpec, Convention, StationaryTable,
    DEFAULT_STATE_CAP,
};
use tasep::formulas::{
    binomial_identity_sides, inhom_partition_value, inhom_sorted_probability, inhom_sorted_value,
    sorted_bracket_formula, InhomParams,
};
use tasep::mlq::{
    beta_alpha_backward, beta_alpha_forward, count_all, enumerate_mlqs, label, partition_function,
    DEFAULT_BUDGET,
};
use tasep::words::{
    collapse_nontrailing, cyclic_shifts, enumerate_suffixes, merge_top, reverse_complement,
    sorted_suffix, sorted_word, strict_types, strict_types_up_to, type_of, words_of_type,
};
use tasep::{Letter, TypeVector, Word};

const SEED: u64 = 1;

type Check = Result<String, String>;
type Criterion = (&'static str, Duration, fn(&mut Cache) -> Check);

struct Cache {
    brackets: HashMap<TypeVector, BTreeMap<Word, u64>>,
    pi: HashMap<TypeVector, StationaryTable>,
}

impl Cache {
    fn tally(&mut self, m: &TypeVector) -> &BTreeMap<Word, u64> {
        self.brackets
            .entry(m.clone())
            .or_insert_with(|| count_all(m, DEFAULT_BUDGET).unwrap())
    }

    fn bracket(&mut self, w: &Word) -> u64 {
        let m = type_of(w).unwrap();
        self.tally(&m).get(w).copied().unwrap_or(0)
    }

    fn pi(&mut self, m: &TypeVector) -> &StationaryTable {
        self.pi.entry(m.clone()).or_insert_with(|| {
            stationary_exact(&ChainSpec::homogeneous(m.clone()).unwrap(), DEFAULT_STATE_CAP).unwrap()
        })
    }
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bracket_table(_: &mut Cache) -> Check {
    let m: TypeVector = "1,1,1,1".parse().unwrap();
    let t = count_all(&m, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    for (word, value) in [("1234", 9), ("1243", 3), ("1324", 3), ("1342", 3), ("1423", 5), ("1432", 1)] {
        for s in cyclic_shifts(&w(word)) {
            let got = t.get(&s).copied().unwrap_or(0);
            ensure(got == value, || format!("[{s}] = {got}, expected {value}"))?;
        }
    }
    let total: u64 = t.values().sum();
    ensure(t.len() == 24 && total == 96, || format!("{} words, total {total}", t.len()))?;
    Ok("24 words, total 96".into())
}

fn ferrari_martin(c: &mut Cache) -> Check {
    let mut words = 0;
    for m in strict_types_up_to(5) {
        let z = BigInt::from(partition_function(&m));
        let exact = c.pi(&m).clone();
        let t = c.tally(&m).clone();
        for u in words_of_type(&m) {
            let p = exact.get(&u).cloned().unwrap_or_else(BigRational::zero);
            let q = BigRational::new(BigInt::from(t.get(&u).copied().unwrap_or(0)), z.clone());
            ensure(p == q, || format!("type {m}, {u}: {p} vs {q}"))?;
            words += 1;
        }
    }
    Ok(format!("{words} words"))
}

fn theorem_finish(c: &mut Cache) -> Check {
    let types = strict_types_up_to(6);
    for m in &types {
        let s = sorted_word(m).unwrap();
        let got = BigUint::from(c.bracket(&s));
        let want = sorted_bracket_formula(m);
        ensure(got == want, || format!("[{s}] = {got}, formula {want}"))?;
    }
    for n in 2..=6usize {
        let ones = TypeVector::new(vec![1; n]).unwrap();
        let got = BigUint::from(c.bracket(&sorted_word(&ones).unwrap()));
        let want: BigUint = (1..=n as i64 - 2).map(|k| binom(n as i64 - 1, k)).product();
        ensure(got == want, || format!("n {n}: [12...n] = {got}, product of binomials {want}"))?;
    }
    Ok(format!("{} types, [123456] = 2500", types.len()))
}

fn lemma1(c: &mut Cache) -> Check {
    let mut checked = 0;
    for m in strict_types_up_to(5).into_iter().filter(|m| m.r() >= 2) {
        let mut marginal: BTreeMap<Word, BigRational> = BTreeMap::new();
        for (u, p) in c.pi(&m).clone().entries() {
            *marginal.entry(merge_top(u, false).unwrap()).or_insert_with(BigRational::zero) += p;
        }
        let coarse = c.pi(&m.merged().unwrap()).clone();
        ensure(marginal.len() == coarse.entries().len(), || format!("type {m}: support sizes differ"))?;
        for (v, p) in coarse.entries() {
            ensure(marginal.get(v) == Some(p), || format!("type {m}, {v}: {:?} vs {p}", marginal.get(v)))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} merged words"))
}

fn symmetries(c: &mut Cache) -> Check {
    let mut checked = 0;
    for m in strict_types_up_to(5) {
        let pi = c.pi(&m).clone();
        let pi_rev = c.pi(&m.reversed()).clone();
        for u in words_of_type(&m) {
            let b = c.bracket(&u);
            for s in cyclic_shifts(&u) {
                let bs = c.bracket(&s);
                ensure(bs == b, || format!("[{u}] = {b} but [{s}] = {bs}"))?;
            }
            let rc = reverse_complement(&u, m.r()).unwrap();
            ensure(pi.get(&u) == pi_rev.get(&rc), || format!("pi({u}) != pi({rc})"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} words"))
}

fn bijection(c: &mut Cache) -> Check {
    let mut maps = 0;
    for m in strict_types_up_to(5).into_iter().filter(|m| m.r() >= 2) {
        let r = m.r();
        let (alpha, beta) = ((r - 1) as Letter, r as Letter);
        let mut counts = m.counts().to_vec();
        counts[r - 2] += 1;
        counts[r - 1] -= 1;
        let target_type = TypeVector::relaxed(counts).unwrap();
        let mut images = HashSet::new();
        for q in enumerate_mlqs(&m, DEFAULT_BUDGET).unwrap() {
            let word = label(&q).bottom_word();
            if word.letters()[..2] != [beta, alpha] {
                continue;
            }
            let image = beta_alpha_forward(&q).map_err(|e| format!("type {m}, {word}: {e}"))?;
            let mut expected = word.letters().to_vec();
            expected[0] = alpha;
            ensure(label(&image).bottom_word().letters() == &expected[..], || {
                format!("type {m}: image of a queue for {word} has the wrong bottom word")
            })?;
            ensure(beta_alpha_backward(&image).as_ref() == Ok(&q), || format!("type {m}: inverse fails at {word}"))?;
            ensure(images.insert(image), || format!("type {m}: forward map not injective at {word}"))?;
            maps += 1;
        }
        let target: HashSet<_> = enumerate_mlqs(&target_type, DEFAULT_BUDGET)
            .unwrap()
            .filter(|q| label(q).bottom_word().letters()[..2] == [alpha, alpha])
            .collect();
        ensure(target == images, || format!("type {m}: image differs from the target set"))?;
        for u in words_of_type(&m).into_iter().filter(|u| u.letters()[..2] == [beta, alpha]) {
            let mut aa = u.letters().to_vec();
            aa[0] = alpha;
            let aa = Word::new(aa).unwrap();
            let (x, y) = (c.bracket(&u), c.bracket(&aa));
            ensure(x == y, || format!("[{u}] = {x} but [{aa}] = {y}"))?;
        }
    }
    Ok(format!("{maps} queues mapped"))
}

fn e_b(c: &mut Cache) -> Check {
    let mut cases = 0;
    for n in 3..=5usize {
        for s in 1..n {
            for mu in strict_types(s) {
                let r = mu.r() + 2;
                let len = n - s;
                for u in words_of_type(&mu) {
                    let base = c.bracket(&u.concat(&sorted_suffix(len, 0, r).unwrap()));
                    for b in 0..len {
                        let mut groups = vec![0u128; b + 1];
                        let mut total = 0u64;
                        for v in enumerate_suffixes(len, b, r).unwrap() {
                            let (_, k) = collapse_nontrailing(&v, r).unwrap();
                            groups[k] += 1;
                            total += c.bracket(&u.concat(&v));
                        }
                        for (k, &g) in groups.iter().enumerate() {
                            let want = binom_u128((n - s - k) as i64 - 1, (b - k) as i64).unwrap();
                            ensure(g == want, || format!("n {n}, s {s}, b {b}, k {k}: {g} vs {want}"))?;
                        }
                        let want = binom(n as i64, b as i64) * BigUint::from(base);
                        ensure(BigUint::from(total) == want, || format!("u {u}, b {b}: sum {total} vs {want}"))?;
                        let eb = c.bracket(&u.concat(&sorted_suffix(len, b, r).unwrap()));
                        let want = binom((s + b) as i64, s as i64) * BigUint::from(base);
                        ensure(BigUint::from(eb) == want, || format!("u {u}, b {b}: [u e^(b)] = {eb} vs {want}"))?;
                        cases += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{cases} (u, b) pairs"))
}

fn binomial_identity(_: &mut Cache) -> Check {
    let mut cases = 0;
    for n in 1..=14u64 {
        for s in 0..n {
            for b in 0..n - s {
                let (l, r) = binomial_identity_sides(n, b, s);
                ensure(l == r, || format!("n {n}, b {b}, s {s}: {l} vs {r}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} triples"))
}

fn inhom_reduction(_: &mut Cache) -> Check {
    let types = strict_types_up_to(6);
    for m in &types {
        let ones = InhomParams::ones(m.r());
        let a = inhom_sorted_value(m, &ones).unwrap();
        let b = inhom_partition_value(m, &ones).unwrap();
        let want_a = BigRational::from_integer(BigInt::from(sorted_bracket_formula(m)));
        let want_b = BigRational::from_integer(BigInt::from(partition_function(m)));
        ensure(a == want_a && b == want_b, || format!("type {m}: ({a}, {b}) vs ({want_a}, {want_b})"))?;
    }
    Ok(format!("{} types", types.len()))
}

fn order_invariance(c: &mut Cache) -> Check {
    let mut groups: BTreeMap<Vec<usize>, Vec<TypeVector>> = BTreeMap::new();
    for m in strict_types_up_to(6) {
        let mut key = m.counts().to_vec();
        key.sort_unstable();
        groups.entry(key).or_default().push(m);
    }
    for types in groups.values() {
        let values: Vec<BigRational> = types
            .iter()
            .map(|m| c.pi(m).get(&sorted_word(m).unwrap()).cloned().unwrap())
            .collect();
        ensure(values.iter().all(|v| *v == values[0]), || {
            format!("types {types:?}: sorted-word probabilities {values:?}")
        })?;
    }
    Ok(format!("{} multisets", groups.len()))
}

fn monte_carlo(c: &mut Cache) -> Check {
    let m: TypeVector = "1,1,1,1".parse().unwrap();
    let spec = ChainSpec::homogeneous(m.clone()).unwrap();
    let sim = simulate(&spec, &sorted_word(&m).unwrap(), 1_000_000, SEED).unwrap();
    let tv = total_variation(&sim, c.pi(&m));
    ensure(tv <= 0.02, || format!("homogeneous TV {tv:.4} > 0.02"))?;

    let m: TypeVector = "1,1,1".parse().unwrap();
    let rates = vec![BigRational::from_integer(1.into()), BigRational::from_integer(2.into())];
    let closed = inhom_sorted_probability(&m, &InhomParams::from_rates(&rates).unwrap()).unwrap();
    let closed_f = closed.to_f64().unwrap();
    let sorted = sorted_word(&m).unwrap();
    let mut matching = Vec::new();
    let mut notes = Vec::new();
    for conv in [Convention::JumperClass, Convention::BlockerClass] {
        let spec = ChainSpec::with_rates(m.clone(), rates.clone(), conv).unwrap();
        let sim = simulate(&spec, &sorted, 1_000_000, SEED).unwrap();
        let empirical = sim.frequency(&sorted);
        let exact = stationary_exact(&spec, DEFAULT_STATE_CAP).unwrap();
        let self_tv = total_variation(&sim, &exact);
        let gap = (empirical - closed_f).abs();
        notes.push(format!("{} {empirical:.4}", conv.name()));
        if gap <= 0.03 && self_tv <= 0.03 {
            matching.push(conv.name());
        }
    }
    ensure(!matching.is_empty(), || format!("no convention matches {closed}: {}", notes.join(", ")))?;
    Ok(format!(
        "TV {tv:.4}; rates (1,2), closed form {closed}, {}; matching convention: {}",
        notes.join(", "),
        matching.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("bracket table for m=(1,1,1,1)", Duration::from_secs(1), bracket_table),
        ("pi(u) = [u]/Z_m, n <= 5", Duration::from_secs(120), ferrari_martin),
        ("sorted-word product formula, n <= 6", Duration::from_secs(300), theorem_finish),
        ("merged-type marginals, n <= 5", Duration::from_secs(120), lemma1),
        ("rotation and reverse-complement symmetry, n <= 5", Duration::from_secs(120), symmetries),
        ("ba -> aa bijection, n <= 5", Duration::from_secs(120), bijection),
        ("E_b counts, sums and scaling, n <= 5", Duration::from_secs(120), e_b),
        ("binomial identity, n <= 14", Duration::from_secs(1), binomial_identity),
        ("inhomogeneous values at v = 1, n <= 6", Duration::from_secs(120), inhom_reduction),
        ("sorted-word probability order invariance, n <= 6", Duration::from_secs(300), order_invariance),
        ("Monte Carlo, seed 1, 10^6 steps", Duration::from_secs(10), monte_carlo),
    ];
    let mut cache = Cache {
        brackets: HashMap::new(),
        pi: HashMap::new(),
    };
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let result = check(&mut cache);
        let elapsed = started.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took {elapsed:.2?}, limit {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} {:>2} {name} [{elapsed:.2?}]: {detail}", i + 1);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
