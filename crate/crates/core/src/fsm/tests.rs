use super::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut w2: Vec<usize> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn random_dfa(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Dfa {
    let delta = (0..n).map(|_| (0..k).map(|_| rng.random_range(0..n)).collect()).collect();
    let accepting = (0..n).map(|_| rng.random_bool(0.4)).collect();
    Dfa::new(names("q", n), names("a", k), delta, 0, accepting).unwrap()
}

fn random_nfa(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Nfa {
    let mut edges = Vec::new();
    for p in 0..n {
        for a in 0..k {
            for q in 0..n {
                if rng.random_bool(0.3) {
                    edges.push((p, a, q));
                }
            }
        }
    }
    let accepting = (0..n).map(|_| rng.random_bool(0.4)).collect();
    Nfa::new(names("q", n), names("a", k), edges, vec![0], accepting).unwrap()
}

#[test]
fn dfa_run_empty_word_and_trap_state() {
    let d = Dfa::new(names("q", 1), names("a", 2), vec![vec![0, 0]], 0, vec![true]).unwrap();
    assert_eq!(d.run(&[]), 0);
    assert!(d.accepts(&[]));
    assert!(d.accepts(&[0, 1, 1, 0]));
}

#[test]
fn dfa_run_is_compositional() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let d = random_dfa(&mut rng, 4, 2);
        let u: Vec<usize> = (0..rng.random_range(0..6)).map(|_| rng.random_range(0..2)).collect();
        let v: Vec<usize> = (0..rng.random_range(0..6)).map(|_| rng.random_range(0..2)).collect();
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        let mid = d.run(&u);
        let end = v.iter().fold(mid, |q, &a| d.next(q, a));
        assert_eq!(d.run(&uv), end);
    }
}

#[test]
fn class_dfa_run_rejects_foreign_letters() {
    let c = ClassDfa::new(names("q", 1), vec!["a".into()], vec![vec![0]], vec![vec![0]], 0, vec![true]).unwrap();
    let good = MarkedWord { letters: vec![("a".into(), true)] };
    assert_eq!(c.run(&good).unwrap(), (0, true));
    let bad = MarkedWord { letters: vec![("z".into(), false)] };
    assert!(c.run(&bad).is_err());
}

#[test]
fn incomplete_class_condition_rejected_by_constructor() {
    assert!(ClassDfa::new(names("q", 1), vec!["a".into()], vec![vec![]], vec![vec![0]], 0, vec![true]).is_err());
}

#[test]
fn determinize_empty_nfa_rejects_everything() {
    let nfa = Nfa::new(names("q", 2), names("a", 2), vec![], vec![0], vec![false, true]).unwrap();
    let d = nfa.determinize_complete();
    for w in all_words(2, 3) {
        assert!(!d.accepts(&w));
    }
}

#[test]
fn determinize_deterministic_input_keeps_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = random_dfa(&mut rng, 4, 2);
    let again = Nfa::from(&d).determinize_complete();
    for w in all_words(2, 5) {
        assert_eq!(d.accepts(&w), again.accepts(&w));
    }
}

#[test]
fn determinize_matches_nfa_on_short_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..40 {
        let nfa = random_nfa(&mut rng, 4, 2);
        let d = nfa.determinize_complete();
        assert_eq!(d.delta.len(), d.num_states() * 2);
        for w in all_words(2, 4) {
            assert_eq!(nfa.accepts(&w), d.accepts(&w), "word {w:?}");
        }
    }
}

#[test]
fn minimize_merges_equivalent_states() {
    // q1 and q2 are both accepting sinks
    let d = Dfa::new(
        names("q", 3),
        names("a", 1),
        vec![vec![1], vec![2], vec![2]],
        0,
        vec![false, true, true],
    )
    .unwrap();
    let m = d.minimize();
    assert_eq!(m.num_states(), 2);
    assert_eq!(m.minimize().num_states(), 2);
}

#[test]
fn minimize_preserves_language_and_is_idempotent() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..60 {
        let d = random_dfa(&mut rng, 5, 2);
        let m = d.minimize();
        for w in all_words(2, 5) {
            assert_eq!(d.accepts(&w), m.accepts(&w));
        }
        assert!(m.num_states() <= d.num_states());
        assert_eq!(m.minimize().num_states(), m.num_states());
        // completeness
        for q in 0..m.num_states() {
            for a in 0..2 {
                assert!(m.next(q, a) < m.num_states());
            }
        }
    }
}

#[test]
fn transducer_steps() {
    let sigma = vec!["a".to_string(), "b".to_string()];
    let id = Transducer::identity(sigma.clone());
    assert_eq!(id.step(0, 1), &[(1, 0)]);

    let t = Transducer::new(
        names("p", 3),
        sigma,
        vec!["x".into(), "y".into()],
        vec![(0, 0, 0, 1), (0, 0, 1, 2)],
        0,
        vec![false, true, true],
    )
    .unwrap();
    assert_eq!(t.step(0, 0), &[(0, 1), (1, 2)]);
    assert!(t.step(0, 1).is_empty());
    for out in t.outputs(&[0]) {
        assert_eq!(out.len(), 1);
    }
    assert_eq!(t.outputs(&[0]).len(), 2);
}

#[test]
fn text_round_trips() {
    let text = "alphabet: a b\nstates: q0 q1\ninitial: q0\naccepting: q1\n\
                trans: q0 a 0 q0\ntrans: q0 a 1 q1\ntrans: q0 b 0 q0\ntrans: q0 b 1 q0\n\
                trans: q1 a 0 q1\ntrans: q1 a 1 q1\ntrans: q1 b 0 q0\ntrans: q1 b 1 q1\n";
    let c = ClassDfa::parse(text).unwrap();
    assert_eq!(c.num_states(), 2);
    assert_eq!(ClassDfa::parse(&c.to_text()).unwrap(), c);

    let t = Transducer::parse(
        "alphabet: a b\noutput: x\ninitial: p\naccepting: p\ntrans: p a -> x p\ntrans: p b -> x p\n",
    )
    .unwrap();
    assert_eq!(Transducer::parse(&t.to_text()).unwrap(), t);

    let n = Nfa::parse("alphabet: a\ninitial: s\naccepting: t\ntrans: s a t\ntrans: s a s\n").unwrap();
    assert_eq!(Nfa::parse(&n.to_text()).unwrap(), n);
}

#[test]
fn incomplete_text_condition_is_completed() {
    let c = ClassDfa::parse("alphabet: a\ninitial: q\naccepting: q\ntrans: q a 0 q\n").unwrap();
    assert_eq!(c.num_states(), 2);
    let word = MarkedWord { letters: vec![("a".into(), false)] };
    assert!(c.run(&word).unwrap().1);
    let word = MarkedWord { letters: vec![("a".into(), true)] };
    assert!(!c.run(&word).unwrap().1);
}

#[test]
fn text_errors_carry_positions() {
    match ClassDfa::parse("alphabet: a\ninitial: q\ntrans: q z 0 q\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 10)),
        other => panic!("unexpected {other:?}"),
    }
    match ClassDfa::parse("alphabet: a\ninitial: q\ntrans: q a 2 q\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 12)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(Nfa::parse("bogus line"), Err(Error::Parse { line: 1, .. })));
}
