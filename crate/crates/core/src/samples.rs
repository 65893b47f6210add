//! Small worked inputs used by the tests, the CLI docs and the examples.

use crate::fsm::ClassDfa;

/// Class condition over `{a,b} × {0,1}` for the property "between two
/// occurrences of `a` with the same data value there is a `b` with a
/// different data value". `q3` is the rejecting sink.
pub const PROPERTY_CONDITION: &str = "\
alphabet: a b
states: q0 q1 q2 q3
initial: q0
accepting: q0 q1 q2
trans: q0 a 0 q0
trans: q0 b 0 q2
trans: q0 a 1 q1
trans: q0 b 1 q0
trans: q1 a 0 q1
trans: q1 b 0 q0
trans: q1 a 1 q3
trans: q1 b 1 q1
trans: q2 a 0 q2
trans: q2 b 0 q0
trans: q2 a 1 q1
trans: q2 b 1 q2
trans: q3 a 0 q3
trans: q3 b 0 q3
trans: q3 a 1 q3
trans: q3 b 1 q3
";

/// Identity transducer plus [`PROPERTY_CONDITION`] as a one-block PCA file.
pub const PROPERTY_PCA: &str = "\
[transducer]
alphabet: a b
output: a b
initial: p
accepting: p
trans: p a -> a p
trans: p b -> b p

[partition]
G1: a b

[condition G1]
ordering: a b
alphabet: a b
states: q0 q1 q2 q3
initial: q0
accepting: q0 q1 q2
trans: q0 a 0 q0
trans: q0 b 0 q2
trans: q0 a 1 q1
trans: q0 b 1 q0
trans: q1 a 0 q1
trans: q1 b 0 q0
trans: q1 a 1 q3
trans: q1 b 1 q1
trans: q2 a 0 q2
trans: q2 b 0 q0
trans: q2 a 1 q1
trans: q2 b 1 q2
trans: q3 a 0 q3
trans: q3 b 0 q3
trans: q3 a 1 q3
trans: q3 b 1 q3
";

/// Array program checking the same property; the array satisfies it iff
/// the run ends in `b1 ∧ ¬b2 ∧ ¬b3` or `¬b1 ∧ b2 ∧ ¬b3`.
pub const PROPERTY_PROGRAM: &str = "\
sigma: a b
for i:=1 to length(A) do
{
  if not b3 then
    b1: = true; b2:=false
  else
    skip
  for j:=1 to length(A) do
  { if A[i].d = A[j].d then
     { if A[j].s=a then
           if b1 and not b2 and not b3 then
              b1:=false; b2:=true
           else if not b1 and b2 and not b3 then
              b2:=false; b3:=true
           else skip
        else skip
     }
     else
     { if not b1 and b2 and not b3 then
           if A[j].s = b then
              b2:=false; b1:= true
           else skip
       else skip
     }
  }
}
";

/// Two-state condition with a ((b,0),(b,0))-pattern: `a` swaps the states
/// on old values, `b` and every one-transition go to `q0`.
pub const SELF_PATTERN_CONDITION: &str = "\
alphabet: a b
states: q0 q1
initial: q0
accepting: q0 q1
trans: q0 a 0 q1
trans: q1 a 0 q0
trans: q0 b 0 q0
trans: q1 b 0 q0
trans: q0 a 1 q0
trans: q1 a 1 q0
trans: q0 b 1 q0
trans: q1 b 1 q0
";

/// One-state condition where every transition is a self-loop.
pub const SELF_LOOP_CONDITION: &str = "\
alphabet: a b
states: q0
initial: q0
accepting: q0
trans: q0 a 0 q0
trans: q0 b 0 q0
trans: q0 a 1 q0
trans: q0 b 1 q0
";

/// `{ a^n b^n : n >= 1 }` with one counter.
pub const ANBN_MACHINE: &str = "\
alphabet: a b
counters: 1
initial: q0
accepting: q2
trans: q0 a inc 1 q0
trans: q0 b dec 1 q1
trans: q1 b dec 1 q1
trans: q1 eps ifzp 1 q2
";

/// PCA accepting every nonempty data word over `{a,b}`.
pub const UNIVERSAL_PCA: &str = "\
[transducer]
alphabet: a b
output: a b
initial: p
accepting: p
trans: p a -> a p
trans: p b -> b p

[partition]
G1: a b

[condition G1]
alphabet: a b
states: q0
initial: q0
accepting: q0
trans: q0 a 0 q0
trans: q0 b 0 q0
trans: q0 a 1 q0
trans: q0 b 1 q0
";

/// Data automaton whose classes must read `a b*`.
pub const DATA_AUTOMATON: &str = "\
[transducer]
alphabet: a b
output: a b
initial: p
accepting: p
trans: p a -> a p
trans: p b -> b p

[data-condition]
alphabet: a b
initial: s0
accepting: s1
trans: s0 a s1
trans: s1 b s1
";

pub fn property_condition() -> ClassDfa {
    ClassDfa::parse(PROPERTY_CONDITION).expect("built-in condition parses")
}

/// Direct evaluation of the property on a data word given as (tag, value) pairs.
pub fn property_holds(word: &[(&str, u64)]) -> bool {
    for (i, &(t1, d1)) in word.iter().enumerate() {
        if t1 != "a" {
            continue;
        }
        // next a with the same value
        if let Some(off) = word[i + 1..].iter().position(|&(t, d)| t == "a" && d == d1) {
            let between = &word[i + 1..i + 1 + off];
            if !between.iter().any(|&(t, d)| t == "b" && d != d1) {
                return false;
            }
        }
    }
    true
}
