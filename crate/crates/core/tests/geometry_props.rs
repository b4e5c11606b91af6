use std::collections::BTreeSet;

use ceinv_core::geometry::{
    bifurcation_diagram, classify_diagram, example_quintuple, face_count_oracle, halfline_profiles, left_kernel_u,
    lemma1_interior_check, oracle_disagreements, qq_relation_check, random_lemma1_input, random_quintuple, rat,
    RationalVec,
};
use ceinv_core::seed::trial_seed;
use proptest::prelude::*;

#[test]
fn example_counts_match_oracle() {
    let q = example_quintuple();
    let basis = left_kernel_u(&q);
    for prof in halfline_profiles(&q).unwrap() {
        for half in [&prof.plus, &prof.minus] {
            let sample = basis.point(&half.direction);
            assert_eq!(face_count_oracle(&q, prof.line, &sample).unwrap(), half.p as usize);
            let scaled = sample.scale(&rat(5, 2));
            assert_eq!(face_count_oracle(&q, prof.line, &scaled).unwrap(), half.p as usize);
        }
    }
}

#[test]
fn census_of_a_few_hundred_quintuples() {
    let mut classes = BTreeSet::new();
    for i in 0..300 {
        let q = random_quintuple(trial_seed(11, i), 20).unwrap();
        let d = bifurcation_diagram(&q).unwrap();
        assert!(d.structural_violations().is_empty());
        assert!(qq_relation_check(&d).verdict);
        classes.insert(classify_diagram(&d));
    }
    assert!(classes.len() <= 4, "{classes:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn oracle_agrees_with_sign_counts(seed in any::<u64>()) {
        let q = random_quintuple(seed, 20).unwrap();
        prop_assert!(oracle_disagreements(&q).unwrap().is_empty());
    }

    #[test]
    fn lemma1_on_random_rationals(seed in any::<u64>(), bound in 1i64..50) {
        let (v, mu) = random_lemma1_input(seed, bound).unwrap();
        prop_assert_eq!(lemma1_interior_check(&v, &mu), Ok(true));
    }

    #[test]
    fn degree_tags_follow_central_degree(seed in any::<u64>(), m in -5i64..5) {
        let q = random_quintuple(seed, 20).unwrap().with_degree(m);
        let d = bifurcation_diagram(&q).unwrap();
        for c in &d.crossings {
            let lam = left_kernel_u(&q).point(&c.direction);
            let expected = if lam[c.line] > rat(0, 1) { m } else { m - 1 };
            prop_assert_eq!(c.degree, expected);
        }
        prop_assert!(qq_relation_check(&d).verdict);
    }
}

#[test]
fn antipodal_sample_gives_complement() {
    let q = random_quintuple(3, 10).unwrap();
    let basis = left_kernel_u(&q);
    for prof in halfline_profiles(&q).unwrap() {
        let s: RationalVec = basis.point(&prof.plus.direction);
        let a = face_count_oracle(&q, prof.line, &s).unwrap();
        let b = face_count_oracle(&q, prof.line, &s.neg()).unwrap();
        assert_eq!(a + b, 4);
    }
}
