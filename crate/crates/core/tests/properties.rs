use proptest::prelude::*;

use pcakit::arrayprog::{BooleanState, Program};
use pcakit::classauto::{bounded_string_language, DataLanguage, Pca};
use pcakit::compile::{max_scc_depth, pca_to_pma, simulate, step_budget, GeneratedMachine};
use pcakit::corpus;
use pcakit::counters::{explore, validate_priority, CounterMachine};
use pcakit::dataword::{canonicalize, enumerate_data_words, DataWord};
use pcakit::fsm::ClassDfa;
use pcakit::priority::{analyze, decide_zero_priority};

fn ab() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

fn word() -> impl Strategy<Value = DataWord> {
    proptest::collection::vec((prop_oneof![Just("a"), Just("b")], 1u64..6), 1..6)
        .prop_map(|pairs| DataWord::from_pairs(pairs).unwrap())
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn word_text_round_trips(w in word()) {
        prop_assert_eq!(DataWord::parse_line(&w.to_string(), 1).unwrap(), w);
    }

    #[test]
    fn canonical_form_is_idempotent_and_ignores_renaming(w in word(), shift in 1u64..100) {
        let c = canonicalize(&w);
        prop_assert_eq!(canonicalize(&c), c.clone());
        prop_assert_eq!(canonicalize(&w.map_data(|d| d * 7 + shift)), c);
    }

    #[test]
    fn pca_acceptance_ignores_data_renaming(seed in any::<u64>(), w in word()) {
        let mut rng = corpus::rng(seed);
        let p = corpus::pca(&mut rng, &ab(), 2, 2, 3);
        let renamed = w.map_data(|d| 1000 - d);
        prop_assert_eq!(p.accepts(&w).unwrap(), p.accepts(&renamed).unwrap());
        prop_assert_eq!(p.accepts(&w).unwrap(), p.accepts(&canonicalize(&w)).unwrap());
    }

    #[test]
    fn decision_agrees_with_every_ordering(seed in any::<u64>(), n in 1usize..6, k in 1usize..4) {
        let mut rng = corpus::rng(seed);
        let d = corpus::biased_class_dfa(&mut rng, n, &corpus::letters(k), 0.4);
        let a = analyze(&d);
        let v = decide_zero_priority(&d);
        let any = permutations(k).iter().any(|o| a.ordering_is_valid(o));
        prop_assert_eq!(v.is_zero_priority, any);
        if let Some(o) = &v.ordering {
            prop_assert!(a.ordering_is_valid(o));
        }
    }

    #[test]
    fn minimizing_keeps_zero_priority(seed in any::<u64>(), n in 1usize..6, k in 1usize..4) {
        let mut rng = corpus::rng(seed);
        let d = corpus::zero_priority_condition(&mut rng, n, &corpus::letters(k));
        let m = d.minimize();
        prop_assert!(m.num_states() <= d.num_states());
        prop_assert!(decide_zero_priority(&m).is_zero_priority);
        let again = ClassDfa::parse(&d.to_text()).unwrap();
        prop_assert_eq!(again.to_text(), d.to_text());
    }

    #[test]
    fn virtual_counters_stay_within_depth(seed in any::<u64>(), w in word()) {
        let mut rng = corpus::rng(seed);
        let p = corpus::pca(&mut rng, &ab(), 2, 2, 4);
        let r = simulate(&p, &w).unwrap();
        prop_assert_eq!(r.bound_violations, 0);
        prop_assert_eq!(r.abstraction_mismatches, 0);
        prop_assert!(r.max_virtual as usize <= max_scc_depth(&p));
        prop_assert_eq!(r.accepted, p.accepts(&w).unwrap());
    }

    #[test]
    fn compiled_machines_are_priority_and_round_trip(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let p = corpus::pca(&mut rng, &ab(), 2, 2, 3);
        let pma = pca_to_pma(&p).unwrap();
        prop_assert!(validate_priority(pma.machine()));
        let text = pma.machine().to_text();
        prop_assert_eq!(&CounterMachine::parse(&text).unwrap(), pma.machine());
        let again = Pca::parse(&p.to_text()).unwrap();
        for w in enumerate_data_words(&ab(), 3) {
            prop_assert_eq!(again.accepts(&w).unwrap(), p.accepts(&w).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn generated_machine_language_matches(seed in any::<u64>()) {
        let mut rng = corpus::rng(seed);
        let p = corpus::pca(&mut rng, &ab(), 2, 2, 3);
        let m = GeneratedMachine::for_pca(&p).unwrap();
        let lang = explore(&m, 3, (3 + max_scc_depth(&p) + 1) as u64, step_budget(3, pcakit::counters::CounterSystem::counters(&m))).unwrap();
        prop_assert!(lang.is_exact());
        prop_assert_eq!(lang.word_set(), bounded_string_language(&p, 3).unwrap());
    }

    #[test]
    fn programs_ignore_data_renaming(seed in any::<u64>(), w in word()) {
        let mut rng = corpus::rng(seed);
        let text = corpus::nd2_program(&mut rng, seed % 2 == 0);
        let p = Program::parse(&text).unwrap();
        let a = p.interpret(&w).unwrap().boolean_state();
        let b = p.interpret(&w.map_data(|d| 99 - d)).unwrap().boolean_state();
        prop_assert_eq!(a.clone(), b);
        let all: Vec<BooleanState> = p.completions(&BooleanState::new());
        prop_assert!(all.contains(&a));
        let printed = Program::parse(&p.to_text()).unwrap();
        prop_assert_eq!(printed.interpret(&w).unwrap().boolean_state(), a);
    }
}
