use super::*;
use crate::classauto::bounded_string_language;
use crate::corpus;
use crate::counters::explore;
use crate::classauto::DataLanguage;
use crate::dataword::enumerate_data_words;
use crate::samples::PROPERTY_PCA;

fn sigma() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

fn explored_words<M: CounterSystem>(m: &M, n: usize, depth: usize) -> std::collections::BTreeSet<Vec<String>> {
    let lang = explore(m, n, (n + depth + 1) as u64, step_budget(n, m.counters())).unwrap();
    assert!(!lang.hit_step_bound && !lang.hit_sum_bound);
    lang.word_set()
}

#[test]
fn property_layout() {
    let p = Pca::parse(PROPERTY_PCA).unwrap();
    let lay = layout(&p);
    let got: Vec<(usize, &str)> = lay.entries.iter().map(|e| (e.stratum, e.state.as_str())).collect();
    assert_eq!(got, vec![(2, "q1"), (3, "q0"), (3, "q2"), (3, "q3")]);
    assert!(lay.to_text().contains("counter 2: G1 stratum 2 q1"));
}

#[test]
fn property_machine_language() {
    let p = Pca::parse(PROPERTY_PCA).unwrap();
    let pma = pca_to_pma(&p).unwrap();
    let oracle = bounded_string_language(&p, 4).unwrap();
    let got = explored_words(pma.machine(), 4, max_scc_depth(&p));
    assert_eq!(got, oracle);
    let shadow = shadow_check(&p, 4, 6, 2000).unwrap();
    assert!(shadow.drain_tests > 0);
    assert_eq!(shadow.mismatches, 0);
}

#[test]
fn abstract_step_counts_values() {
    let p = Pca::parse(PROPERTY_PCA).unwrap();
    let b = &p.blocks()[0];
    let t = p.transducer();
    let map: Vec<Option<usize>> = (0..2).map(|g| b.condition_letter(g)).collect();
    let c = &b.condition;
    let q = |s: &str| c.state_index(s).unwrap();
    // a1 b2 a1: value 1 ends in q1 then q0 then q1, value 2 in q0
    let mut cfg = AbstractConfig::initial(t, c);
    cfg = abstract_step(t, &map, c, &cfg, 0, AbstractChoice::Fresh).remove(0);
    assert_eq!(cfg.counts[q("q1")], 1);
    cfg = abstract_step(t, &map, c, &cfg, 1, AbstractChoice::Fresh).remove(0);
    assert_eq!((cfg.counts[q("q0")], cfg.counts[q("q1")]), (2, 0));
    cfg = abstract_step(t, &map, c, &cfg, 0, AbstractChoice::Old(q("q0"))).remove(0);
    assert_eq!((cfg.counts[q("q0")], cfg.counts[q("q1")]), (1, 1));
    assert!(abstract_step(t, &map, c, &cfg, 0, AbstractChoice::Old(q("q3"))).is_empty());
}

#[test]
fn random_pcas_match_their_machines() {
    let mut rng = corpus::rng(404);
    let (mut deep, mut drained) = (0, 0);
    for _ in 0..25 {
        let p = corpus::pca(&mut rng, &sigma(), 2, 2, 3);
        let oracle = bounded_string_language(&p, 4).unwrap();
        let m = GeneratedMachine::for_pca(&p).unwrap();
        assert_eq!(explored_words(&m, 4, max_scc_depth(&p)), oracle, "{}", p.to_text());
        let shadow = shadow_check(&p, 4, 4 + max_scc_depth(&p) as u64 + 1, 4000).unwrap();
        assert_eq!(shadow.mismatches, 0, "{}", p.to_text());
        deep += usize::from(max_scc_depth(&p) > 0);
        drained += usize::from(shadow.drain_tests > 0);
    }
    assert!(deep > 0 && drained > 0);
}

#[test]
fn random_class_automata_match_their_machines() {
    let mut rng = corpus::rng(505);
    for _ in 0..25 {
        let ca = corpus::class_automaton(&mut rng, &sigma());
        let oracle = bounded_string_language(&ca, 4).unwrap();
        let m = GeneratedMachine::for_class_automaton(&ca).unwrap();
        assert_eq!(explored_words(&m, 4, 0), oracle);
    }
}

#[test]
fn one_block_pca_agrees_with_class_automaton_machine() {
    let mut rng = corpus::rng(606);
    for _ in 0..10 {
        let p = corpus::pca(&mut rng, &sigma(), 1, 2, 3);
        let b = &p.blocks()[0];
        let keep: Vec<usize> = b.letters.clone();
        if keep.len() != p.transducer().output().len() {
            continue;
        }
        let ca = ClassAutomaton::new(p.transducer().clone(), b.condition.clone()).unwrap();
        let m1 = GeneratedMachine::for_pca(&p).unwrap();
        let m2 = GeneratedMachine::for_class_automaton(&ca).unwrap();
        assert_eq!(explored_words(&m1, 3, max_scc_depth(&p)), explored_words(&m2, 3, 0));
    }
}

#[test]
fn simulation_respects_the_depth_bound() {
    let mut rng = corpus::rng(707);
    let words: Vec<DataWord> = enumerate_data_words(&sigma(), 4).collect();
    for _ in 0..15 {
        let p = corpus::pca(&mut rng, &sigma(), 2, 2, 4);
        for w in &words {
            let r = simulate(&p, w).unwrap();
            assert_eq!(r.bound_violations, 0);
            assert_eq!(r.abstraction_mismatches, 0);
            assert_eq!(r.accepted, p.accepts(w).unwrap());
        }
    }
}

#[test]
fn materialized_machines_round_trip() {
    let p = Pca::parse(PROPERTY_PCA).unwrap();
    let pma = pca_to_pma(&p).unwrap();
    let text = pma.machine().to_text();
    let again = CounterMachine::parse(&text).unwrap();
    assert_eq!(&again, pma.machine());
    let mut rng = corpus::rng(808);
    let ca = corpus::class_automaton(&mut rng, &sigma());
    let mca = ca_to_mca(&ca).unwrap();
    assert_eq!(CounterMachine::parse(&mca.to_text()).unwrap(), mca);
}

