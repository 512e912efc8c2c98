use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use tasep::chain::{simulate, transitions, ChainSpec};
use tasep::formulas::{binomial_identity_sides, chained_scaling, sorted_bracket_formula};
use tasep::mlq::{label, label_with_order, Mlq, TieOrder};
use tasep::words::{
    canonical_rotation, merge_top, reverse_complement, sorted_word, type_of, words_of_type,
};
use tasep::{TypeVector, Word};

fn type_vector(max_parts: usize, max_count: usize) -> impl Strategy<Value = TypeVector> {
    prop::collection::vec(1..=max_count, 1..=max_parts).prop_map(|c| TypeVector::new(c).unwrap())
}

/// A word of a random strict type, as a shuffled sorted word.
fn word(max_parts: usize, max_count: usize) -> impl Strategy<Value = Word> {
    type_vector(max_parts, max_count)
        .prop_flat_map(|m| Just(sorted_word(&m).unwrap().into_letters()).prop_shuffle())
        .prop_map(|letters| Word::new(letters).unwrap())
}

fn mlq(max_parts: usize, max_count: usize) -> impl Strategy<Value = Mlq> {
    type_vector(max_parts, max_count).prop_flat_map(|m| {
        let n = m.n();
        let rows: Vec<_> = m
            .partial_sums()
            .into_iter()
            .map(|k| prop::sample::subsequence((0..n).collect::<Vec<_>>(), k))
            .collect();
        rows.prop_map(move |rows| {
            let masks = rows.iter().map(|cols| cols.iter().fold(0u64, |a, &c| a | 1 << c)).collect();
            Mlq::new(m.clone(), masks).unwrap()
        })
    })
}

fn rotate_mask(mask: u64, k: usize, n: usize) -> u64 {
    (0..n).filter(|&j| mask >> ((j + k) % n) & 1 == 1).fold(0, |a, j| a | 1 << j)
}

proptest! {
    #[test]
    fn transition_probabilities_sum_to_one(u in word(4, 3)) {
        let t = transitions(&u);
        let total = t.moves.iter().fold(t.stay.clone(), |acc, (_, p)| acc + p);
        prop_assert_eq!(total, BigRational::one());
        let n = u.len();
        for (v, p) in &t.moves {
            prop_assert_eq!(p.clone(), BigRational::new(1.into(), (n as i64).into()));
            let diff: Vec<usize> = (0..n).filter(|&i| u.letters()[i] != v.letters()[i]).collect();
            prop_assert_eq!(diff.len(), 2);
            prop_assert_eq!(type_of(v).unwrap(), type_of(&u).unwrap());
        }
    }

    #[test]
    fn canonical_rotation_is_rotation_invariant(u in word(4, 3), k in 0usize..12) {
        let k = k % u.len();
        prop_assert_eq!(canonical_rotation(&u.rotate(k)), canonical_rotation(&u));
    }

    #[test]
    fn reverse_complement_is_an_involution(u in word(4, 3)) {
        let r = u.max_letter() as usize;
        let v = reverse_complement(&u, r).unwrap();
        prop_assert_eq!(type_of(&v).unwrap(), type_of(&u).unwrap().reversed());
        prop_assert_eq!(reverse_complement(&v, r).unwrap(), u);
    }

    #[test]
    fn merging_merges_the_type(u in word(4, 3)) {
        let m = type_of(&u).unwrap();
        prop_assume!(m.r() >= 2);
        let merged = merge_top(&u, false).unwrap();
        prop_assert_eq!(type_of(&merged).unwrap(), m.merged().unwrap());
    }

    #[test]
    fn labelling_ignores_tie_order(q in mlq(4, 3)) {
        let a = label_with_order(&q, TieOrder::LeftToRight);
        let b = label_with_order(&q, TieOrder::RightToLeft);
        prop_assert_eq!(a.labels(), b.labels());
        prop_assert_eq!(type_of(&a.bottom_word()).unwrap(), q.type_vector().clone());
    }

    #[test]
    fn labelling_commutes_with_rotation(q in mlq(4, 3), k in 0usize..12) {
        let n = q.n();
        let k = k % n;
        let rows = q.rows().iter().map(|&m| rotate_mask(m, k, n)).collect();
        let rotated = Mlq::new(q.type_vector().clone(), rows).unwrap();
        prop_assert_eq!(label(&rotated).bottom_word(), label(&q).bottom_word().rotate(k));
    }

    #[test]
    fn binomial_identity_holds((n, s, b) in (1u64..40).prop_flat_map(|n| (Just(n), 0..n))
        .prop_flat_map(|(n, s)| (Just(n), Just(s), 0..n - s)))
    {
        let (l, r) = binomial_identity_sides(n, b, s);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn chained_scaling_matches_product(m in type_vector(6, 4)) {
        prop_assert_eq!(chained_scaling(&m), sorted_bracket_formula(&m));
        prop_assert!(sorted_bracket_formula(&m) > BigUint::zero());
    }

    #[test]
    fn simulation_counts_visits(u in word(3, 3), steps in 0u64..500, seed in any::<u64>()) {
        let spec = ChainSpec::homogeneous(type_of(&u).unwrap()).unwrap();
        let sim = simulate(&spec, &u, steps, seed).unwrap();
        prop_assert_eq!(sim.counts.values().sum::<u64>(), steps + 1);
        let states = words_of_type(spec.type_vector());
        prop_assert!(sim.counts.keys().all(|w| states.contains(w)));
        prop_assert_eq!(simulate(&spec, &u, steps, seed).unwrap(), sim);
    }
}
