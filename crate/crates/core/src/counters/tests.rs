use super::*;
use crate::corpus::{self, names};
use proptest::prelude::*;
use rand::Rng;

const ANBN: &str = "\
alphabet: a b
counters: 1
initial: q0
accepting: q2
trans: q0 a inc 1 q0
trans: q0 b dec 1 q1
trans: q1 b dec 1 q1
trans: q1 eps ifzp 1 q2
";

fn words_upto(alphabet: &[String], n: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    for len in 1..=n {
        out.extend(crate::dataword::tag_words(alphabet, len));
    }
    out
}

// Oracle: plain depth-first enumeration of runs on one word.
fn dfs_accepts(m: &CounterMachine, word: &[usize], cfg: &Configuration, read: usize, steps: usize, sum: u64) -> bool {
    if read == word.len() && m.accepting()[cfg.state] {
        return true;
    }
    if steps == 0 {
        return false;
    }
    for t in m.transitions_from(cfg.state) {
        let pos = match t.letter {
            None => read,
            Some(a) if read < word.len() && word[read] == a => read + 1,
            Some(_) => continue,
        };
        if let Some(c) = t.instruction.apply(&cfg.counters) {
            if c.iter().sum::<u64>() <= sum
                && dfs_accepts(m, word, &Configuration { state: t.target, counters: c }, pos, steps - 1, sum)
            {
                return true;
            }
        }
    }
    false
}

fn random_machine(rng: &mut corpus::CorpusRng) -> CounterMachine {
    let n = rng.random_range(1..=3);
    let k = rng.random_range(1..=2);
    let mut edges = Vec::new();
    for _ in 0..rng.random_range(2..=7) {
        let letter = if rng.random_bool(0.3) { None } else { Some(rng.random_range(0..2)) };
        let c = rng.random_range(0..k);
        let instr = match rng.random_range(0..4) {
            0 => Instruction::Inc(c),
            1 => Instruction::Dec(c),
            2 => Instruction::Ifz(c),
            _ => Instruction::IfzPrefix(c),
        };
        edges.push((rng.random_range(0..n), letter, instr, rng.random_range(0..n)));
    }
    let acc = (0..n).map(|_| rng.random_bool(0.5)).collect();
    CounterMachine::new(names("s", n), corpus::letters(2), k, edges, 0, acc).unwrap()
}

#[test]
fn instruction_semantics() {
    let m = CounterMachine::new(
        names("q", 2),
        vec![],
        3,
        vec![
            (0, None, Instruction::Inc(0), 1),
            (0, None, Instruction::Dec(0), 1),
            (0, None, Instruction::IfzPrefix(1), 1),
        ],
        0,
        vec![false, true],
    )
    .unwrap();
    let succ = step(&m, &Configuration { state: 0, counters: vec![0, 0, 5] }, None);
    assert!(succ.contains(&Configuration { state: 1, counters: vec![1, 0, 5] }));
    assert!(succ.contains(&Configuration { state: 1, counters: vec![0, 0, 5] }));
    assert_eq!(succ.len(), 2);
    let succ = step(&m, &Configuration { state: 0, counters: vec![0, 1, 0] }, None);
    assert_eq!(succ, vec![Configuration { state: 1, counters: vec![1, 1, 0] }]);
    assert_eq!(Instruction::Dec(0).apply(&[0, 3]), None);
}

#[test]
fn priority_validation() {
    let m = CounterMachine::parse(ANBN).unwrap();
    assert!(validate_priority(&m));
    let bad = CounterMachine::parse(&ANBN.replace("ifzp", "ifz")).unwrap();
    assert!(!validate_priority(&bad));
    assert!(Pma::try_from(bad).is_err());
}

#[test]
fn anbn_language() {
    let m = CounterMachine::parse(ANBN).unwrap();
    let lang = explore(&m, 4, 4, 64).unwrap();
    let words: Vec<String> = lang.words.iter().map(|(w, _)| w.concat()).collect();
    assert_eq!(words, vec!["ab", "aabb"]);
    assert!(lang.is_exact());
    for (w, trace) in &lang.words {
        assert!(run_check(&m, w, trace).unwrap());
        let replay = parse_trace(&trace_to_text(trace)).unwrap();
        assert_eq!(&replay, trace);
    }
}

#[test]
fn trivial_languages() {
    let none = CounterMachine::new(names("q", 1), corpus::letters(1), 0, vec![(0, Some(0), Instruction::IfzPrefix(0), 0)].into_iter().filter(|_| false), 0, vec![false]).unwrap();
    assert!(explore(&none, 4, 4, 64).unwrap().words.is_empty());

    let all = CounterMachine::parse("alphabet: a b\ncounters: 1\ninitial: q\naccepting: q\ntrans: q a ifzp 1 q\ntrans: q b ifzp 1 q\n").unwrap();
    let lang = explore(&all, 3, 0, 64).unwrap();
    assert_eq!(lang.words.len(), 1 + 2 + 4 + 8);
    assert!(run_check(&all, &Vec::<String>::new(), &[]).unwrap());
}

#[test]
fn bound_exhaustion_is_reported() {
    // an ε-loop that keeps incrementing
    let m = CounterMachine::parse("alphabet: a\ncounters: 1\ninitial: q\naccepting: q\ntrans: q eps inc 1 q\n").unwrap();
    let lang = explore(&m, 2, 3, 100).unwrap();
    assert!(lang.hit_sum_bound && !lang.is_exact());
    let lang = explore(&m, 2, 100, 3).unwrap();
    assert!(lang.hit_step_bound);
}

#[test]
fn explore_matches_run_enumeration() {
    let mut rng = corpus::rng(31);
    for _ in 0..60 {
        let m = random_machine(&mut rng);
        let (sum, steps) = (3, 9);
        let lang = explore(&m, 3, sum, steps).unwrap();
        let found = lang.word_set();
        for w in words_upto(m.alphabet(), 3) {
            let idx: Vec<usize> = w.iter().map(|a| m.letter_index(a).unwrap()).collect();
            let oracle = dfs_accepts(&m, &idx, &m.initial_configuration(), 0, steps, sum);
            assert_eq!(found.contains(&w), oracle, "{w:?}\n{}", m.to_text());
        }
        for (w, trace) in &lang.words {
            assert!(run_check(&m, w, trace).unwrap());
        }
    }
}

#[test]
fn text_round_trip_and_errors() {
    let m = CounterMachine::parse(ANBN).unwrap();
    assert_eq!(CounterMachine::parse(&m.to_text()).unwrap(), m);
    match CounterMachine::parse("alphabet: a\ncounters: 1\ninitial: q\ntrans: q a inc 2 q\n") {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 12)),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(
        CounterMachine::parse("alphabet: a\ncounters: 1\ninitial: q\ntrans: q z inc 1 q\n"),
        Err(Error::Parse { line: 4, column: 10, .. })
    ));
    let trace = parse_trace("a inc 1 q0\n").unwrap();
    assert!(matches!(run_check(&m, &["a"], &[TraceStep { target: "nowhere".into(), ..trace[0].clone() }]), Err(_)));
}

proptest! {
    #[test]
    fn dec_never_goes_negative(c in proptest::collection::vec(0u64..3, 1..4), i in 0usize..3) {
        let i = i % c.len();
        if let Some(next) = Instruction::Dec(i).apply(&c) {
            prop_assert_eq!(next[i] + 1, c[i]);
        } else {
            prop_assert_eq!(c[i], 0);
        }
    }

    #[test]
    fn prefix_tests_are_monotone(c in proptest::collection::vec(0u64..2, 1..5), i in 0usize..5) {
        let i = i % c.len();
        if Instruction::IfzPrefix(i).apply(&c).is_some() {
            for j in 0..=i {
                prop_assert!(Instruction::IfzPrefix(j).apply(&c).is_some());
            }
        }
    }
}
