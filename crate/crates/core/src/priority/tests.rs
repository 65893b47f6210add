use super::*;
use crate::samples::property_condition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn letters(k: usize) -> Vec<String> {
    ["a", "b", "c", "d"][..k].iter().map(|s| s.to_string()).collect()
}

fn random_condition(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ClassDfa {
    let zero = (0..n).map(|_| (0..k).map(|_| rng.random_range(0..n)).collect()).collect();
    let one = (0..n).map(|_| (0..k).map(|_| rng.random_range(0..n)).collect()).collect();
    let acc = (0..n).map(|_| rng.random_bool(0.5)).collect();
    ClassDfa::new(names("q", n), letters(k), zero, one, 0, acc).unwrap()
}

fn self_loops(n: usize, k: usize) -> ClassDfa {
    let zero = (0..n).map(|q| vec![q; k]).collect();
    let one = (0..n).map(|q| vec![(q + 1) % n; k]).collect();
    ClassDfa::new(names("q", n), letters(k), zero, one, 0, vec![true; n]).unwrap()
}

// Independent oracle: transitive closure of G0 and functional powers.
struct Brute {
    n: usize,
    k: usize,
    zero: Vec<Vec<usize>>,
    reach: Vec<Vec<bool>>,
}

impl Brute {
    fn new(dfa: &ClassDfa) -> Self {
        let n = dfa.num_states();
        let k = dfa.num_letters();
        let zero: Vec<Vec<usize>> = (0..k).map(|g| (0..n).map(|q| dfa.zero(q, g)).collect()).collect();
        let mut reach = vec![vec![false; n]; n];
        for q in 0..n {
            reach[q][q] = true;
        }
        for _ in 0..n {
            for p in 0..n {
                for q in 0..n {
                    if reach[p][q] {
                        for g in 0..k {
                            reach[p][zero[g][q]] = true;
                        }
                    }
                }
            }
        }
        Brute { n, k, zero, reach }
    }

    fn zero_cyclic(&self, q: usize) -> bool {
        (0..self.k).any(|g| self.reach[self.zero[g][q]][q])
    }

    fn gamma_cyclic(&self, g: usize, q: usize) -> bool {
        let mut p = q;
        for _ in 0..self.n {
            p = self.zero[g][p];
            if p == q {
                return true;
            }
        }
        false
    }

    fn patterns(&self, g1: usize, g2: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        for q1 in 0..self.n {
            for q2 in 0..self.n {
                for q3 in 0..self.n {
                    for q4 in 0..self.n {
                        if self.zero_cyclic(q1)
                            && self.zero[g1][q1] == q2
                            && self.reach[q2][q3]
                            && self.zero[g2][q3] == q4
                            && !self.gamma_cyclic(g2, q3)
                        {
                            out.push((q1, q2, q3, q4));
                        }
                    }
                }
            }
        }
        out
    }

    fn ordering_ok(&self, ordering: &[usize]) -> bool {
        (0..ordering.len()).all(|i| (0..=i).all(|j| self.patterns(ordering[i], ordering[j]).is_empty()))
    }

    fn any_ordering_ok(&self) -> bool {
        permutations(self.k).iter().any(|p| self.ordering_ok(p))
    }
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

#[test]
fn self_loop_condition_is_fully_cyclic() {
    let dfa = self_loops(3, 2);
    let a = analyze(&dfa);
    assert!((0..3).all(|q| a.is_zero_cyclic(q)));
    assert!((0..2).all(|g| (0..3).all(|q| a.is_gamma_cyclic(g, q))));
    assert_eq!(a.scc_depth(), 0);
    assert!(a.find_pattern(0, 1).is_none() && a.find_pattern(1, 1).is_none());
    let v = decide_with(&a);
    assert!(v.is_zero_priority);
    let acyc = acyc_sets(&a, v.ordering.as_ref().unwrap()).unwrap();
    assert_eq!(acyc.len(), 3);
    assert!(acyc[0].iter().chain(&acyc[1]).all(|&x| !x));
    assert!(acyc[2].iter().all(|&x| x));
    assert!(check_structural_props(&a, &v).all_passed());
}

#[test]
fn chain_into_self_loop() {
    let dfa = ClassDfa::new(
        names("q", 3),
        letters(1),
        vec![vec![1], vec![2], vec![2]],
        vec![vec![0], vec![0], vec![0]],
        0,
        vec![true; 3],
    )
    .unwrap();
    let a = analyze(&dfa);
    assert_eq!(a.zero_cyclic(), &[false, false, true]);
    assert_eq!(a.scc_depth(), 2);
}

#[test]
fn property_condition_classification() {
    let dfa = property_condition();
    let a = analyze(&dfa);
    let q = |s: &str| dfa.state_index(s).unwrap();
    let b = dfa.letter_index("b").unwrap();
    assert!(a.is_zero_cyclic(q("q1")));
    assert!(!a.is_gamma_cyclic(b, q("q1")));
    assert!(a.is_gamma_cyclic(b, q("q0")) && a.is_gamma_cyclic(b, q("q2")));

    let w = a.find_pattern(0, b).unwrap();
    assert_eq!((w.q1, w.q2, w.q3, w.q4), (q("q1"), q("q1"), q("q1"), q("q0")));

    let v = decide_with(&a);
    assert!(v.is_zero_priority);
    assert_eq!(v.ordering, Some(vec![0, 1]));
    assert!(!v.pairwise_discrepancy());

    let acyc = acyc_sets(&a, &[0, 1]).unwrap();
    assert!(acyc[0].iter().all(|&x| !x));
    assert_eq!(acyc[1], vec![false, true, false, false]);
    assert_eq!(acyc[2], vec![true, false, true, true]);
    assert!(check_structural_props(&a, &v).all_passed());
    assert!(acyc_sets(&a, &[1, 0]).is_err());
}

#[test]
fn self_pattern_rules_out_priority() {
    // q0 <-> q1 on (a,0); q2 is transient
    let dfa = ClassDfa::new(
        names("q", 3),
        letters(1),
        vec![vec![1], vec![0], vec![0]],
        vec![vec![0], vec![0], vec![0]],
        0,
        vec![true; 3],
    )
    .unwrap();
    assert!(decide_zero_priority(&dfa).is_zero_priority);

    let dfa = ClassDfa::new(
        names("q", 2),
        letters(2),
        // a: swap states, b: everything to q0
        vec![vec![1, 0], vec![0, 0]],
        vec![vec![0, 0], vec![0, 0]],
        0,
        vec![true; 2],
    )
    .unwrap();
    let v = decide_zero_priority(&dfa);
    // q1 is (b,0)-acyclic yet G0-reachable from f_b(q1) = q0
    assert!(!v.no_self_patterns);
    assert!(!v.is_zero_priority);
    assert!(v.ordering.is_none());
}

#[test]
fn pattern_search_matches_quadruple_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..150 {
        let n = rng.random_range(1..=5);
        let k = rng.random_range(1..=3);
        let dfa = random_condition(&mut rng, n, k);
        let a = analyze(&dfa);
        let brute = Brute::new(&dfa);
        for q in 0..n {
            assert_eq!(a.is_zero_cyclic(q), brute.zero_cyclic(q));
        }
        for g1 in 0..k {
            for g2 in 0..k {
                let all = brute.patterns(g1, g2);
                let found = a.find_pattern(g1, g2);
                assert_eq!(found.is_some(), !all.is_empty());
                if let Some(w) = found {
                    assert_eq!(Some(&(w.q1, w.q2, w.q3, w.q4)), all.iter().min());
                }
            }
        }
    }
}

#[test]
fn decision_matches_all_orderings() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for _ in 0..150 {
        let n = rng.random_range(1..=5);
        let k = rng.random_range(1..=4);
        let dfa = random_condition(&mut rng, n, k);
        let a = analyze(&dfa);
        let v = decide_with(&a);
        let brute = Brute::new(&dfa);
        assert_eq!(v.is_zero_priority, brute.any_ordering_ok());
        if let Some(o) = &v.ordering {
            assert!(brute.ordering_ok(o));
            assert!(check_structural_props(&a, &v).all_passed());
        }
        let closure = check_structural_props(&a, &v).checks[2].passed;
        if !closure {
            assert!(!v.is_zero_priority);
        }
    }
}

#[test]
fn report_renders() {
    let r = PriorityReport::build(&property_condition());
    let text = r.to_text();
    assert!(text.contains("verdict: 0-priority"));
    assert!(text.contains("ordering: a b"));
    assert!(text.contains("pattern ((a,0),(b,0)): (q1,q1,q1,q0)"));
    assert!(serde_json::to_string(&r).unwrap().contains("\"zero_priority\":true"));
}
