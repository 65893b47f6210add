//! Data words and their classes.
//!
//! A data word pairs a tag sequence with a sequence of data values of the same
//! length. Positions are 1-based throughout this module, matching the way
//! classes are usually written down (`{1,3}` for the first and third letter).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-empty finite word over `tag × data`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DataWord {
    tags: Vec<String>,
    data: Vec<u64>,
}

impl DataWord {
    pub fn new(tags: Vec<String>, data: Vec<u64>) -> Result<Self> {
        if tags.len() != data.len() {
            return Err(Error::input(format!(
                "tag sequence has length {} but data sequence has length {}",
                tags.len(),
                data.len()
            )));
        }
        if tags.is_empty() {
            return Err(Error::input("data words must have at least one position"));
        }
        Ok(DataWord { tags, data })
    }

    /// Builds a word from `(tag, value)` pairs.
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, u64)>) -> Result<Self> {
        let (tags, data): (Vec<String>, Vec<u64>) =
            pairs.into_iter().map(|(t, d)| (t.into(), d)).unzip();
        DataWord::new(tags, data)
    }

    pub fn len(&self) -> usize {
        self.tags.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.tags.is_empty()
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn data(&self) -> &[u64] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> + '_ {
        self.tags.iter().map(String::as_str).zip(self.data.iter().copied())
    }

    /// Class of each position, numbered by first occurrence (0-based ids).
    pub fn class_ids(&self) -> Vec<usize> {
        let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
        self.data
            .iter()
            .map(|d| {
                let next = seen.len();
                *seen.entry(*d).or_insert(next)
            })
            .collect()
    }

    /// Applies a map to the data values, keeping the tags.
    pub fn map_data(&self, mut f: impl FnMut(u64) -> u64) -> DataWord {
        DataWord {
            tags: self.tags.clone(),
            data: self.data.iter().map(|&d| f(d)).collect(),
        }
    }

    /// Parses the one-line text form `a:1 b:2 c:1`.
    pub fn parse_line(line: &str, line_no: usize) -> Result<Self> {
        let mut pairs = Vec::new();
        for (column, token) in tokens_with_columns(line) {
            let Some((tag, value)) = token.split_once(':') else {
                return Err(Error::parse(line_no, column, format!("expected `tag:value`, found `{token}`")));
            };
            if tag.is_empty() {
                return Err(Error::parse(line_no, column, "empty tag"));
            }
            let value: u64 = value.parse().map_err(|_| {
                Error::parse(
                    line_no,
                    column + tag.len() + 1,
                    format!("data value `{value}` is not a natural number"),
                )
            })?;
            pairs.push((tag.to_string(), value));
        }
        if pairs.is_empty() {
            return Err(Error::parse(line_no, 1, "empty data word"));
        }
        DataWord::from_pairs(pairs)
    }

    /// Parses a file of words, one per line; blank lines and `#` comments are skipped.
    pub fn parse_many(text: &str) -> Result<Vec<DataWord>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|(i, l)| DataWord::parse_line(l, i + 1))
            .collect()
    }
}

impl fmt::Display for DataWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (t, d)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}:{d}")?;
        }
        Ok(())
    }
}

pub(crate) fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

/// One class: the data value and its positions in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassBlock {
    pub value: u64,
    pub positions: Vec<usize>,
}

/// The classes of a data word, ordered by first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPartition {
    pub blocks: Vec<ClassBlock>,
}

impl ClassPartition {
    pub fn block_of_value(&self, value: u64) -> Option<&ClassBlock> {
        self.blocks.iter().find(|b| b.value == value)
    }

    /// Position sets without the values, for comparing partitions of different words.
    pub fn position_sets(&self) -> Vec<BTreeSet<usize>> {
        self.blocks
            .iter()
            .map(|b| b.positions.iter().copied().collect())
            .collect()
    }
}

pub fn classes(dw: &DataWord) -> ClassPartition {
    let mut blocks: Vec<ClassBlock> = Vec::new();
    for (i, &d) in dw.data.iter().enumerate() {
        match blocks.iter_mut().find(|b| b.value == d) {
            Some(b) => b.positions.push(i + 1),
            None => blocks.push(ClassBlock {
                value: d,
                positions: vec![i + 1],
            }),
        }
    }
    ClassPartition { blocks }
}

/// A word over `Γ × {0,1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MarkedWord {
    pub letters: Vec<(String, bool)>,
}

impl fmt::Display for MarkedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, m) in &self.letters {
            write!(f, "({g},{})", u8::from(*m))?;
        }
        Ok(())
    }
}

fn check_positions(len: usize, positions: &BTreeSet<usize>) -> Result<()> {
    match positions.iter().find(|&&p| p == 0 || p > len) {
        Some(p) => Err(Error::input(format!(
            "position {p} is outside 1..={len}"
        ))),
        None => Ok(()),
    }
}

/// `w ⊗ X`: positions in `X` carry mark 1, all others mark 0.
pub fn mark<S: AsRef<str>>(word: &[S], positions: &BTreeSet<usize>) -> Result<MarkedWord> {
    check_positions(word.len(), positions)?;
    let letters = word
        .iter()
        .enumerate()
        .map(|(i, g)| (g.as_ref().to_string(), positions.contains(&(i + 1))))
        .collect();
    Ok(MarkedWord { letters })
}

/// `w|X`: the subword at the positions of `X`.
pub fn restrict<S: AsRef<str>>(word: &[S], positions: &BTreeSet<usize>) -> Result<Vec<String>> {
    check_positions(word.len(), positions)?;
    Ok(positions
        .iter()
        .map(|&p| word[p - 1].as_ref().to_string())
        .collect())
}

/// Letter-wise image of the tags; `None` images are erased.
pub fn project<F>(dw: &DataWord, prj: F) -> Vec<String>
where
    F: Fn(&str) -> Option<String>,
{
    dw.tags.iter().filter_map(|t| prj(t)).collect()
}

/// Restricted growth strings of length `n` in lexicographic order.
///
/// Entry `k` is the class index of position `k`; every entry is at most one
/// more than the maximum of the entries before it.
#[derive(Debug, Clone)]
pub struct RestrictedGrowth {
    current: Option<Vec<usize>>,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth {
            current: if n == 0 { None } else { Some(vec![0; n]) },
        }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let a = self.current.as_mut().unwrap();
        let n = a.len();
        // prefix maxima
        let mut maxes = vec![0usize; n];
        for k in 1..n {
            maxes[k] = maxes[k - 1].max(a[k - 1]);
        }
        let mut k = n;
        loop {
            if k <= 1 {
                self.current = None;
                break;
            }
            k -= 1;
            if a[k] <= maxes[k] {
                a[k] += 1;
                for x in a.iter_mut().skip(k + 1) {
                    *x = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All words of length `n` over `sigma`, lexicographic in the order of `sigma`.
pub fn tag_words(sigma: &[String], n: usize) -> impl Iterator<Item = Vec<String>> + '_ {
    let total = sigma.len().checked_pow(n as u32).unwrap_or(0);
    (0..total).map(move |mut code| {
        let mut word = vec![String::new(); n];
        for slot in word.iter_mut().rev() {
            *slot = sigma[code % sigma.len()].clone();
            code /= sigma.len();
        }
        word
    })
}

/// Canonical data words of length `1..=max_len`: one per (tag word, class
/// partition), with data value `k` naming the `k`-th class by first occurrence.
///
/// Order: by length, then tag word, then partition.
pub fn enumerate_data_words(
    sigma: &[String],
    max_len: usize,
) -> impl Iterator<Item = DataWord> + '_ {
    (1..=max_len).flat_map(move |n| {
        tag_words(sigma, n).flat_map(move |tags| {
            RestrictedGrowth::new(n).map(move |rgs| DataWord {
                tags: tags.clone(),
                data: rgs.iter().map(|&c| c as u64 + 1).collect(),
            })
        })
    })
}

/// Canonical form of a word: data renumbered by first occurrence starting at 1.
pub fn canonicalize(dw: &DataWord) -> DataWord {
    let ids = dw.class_ids();
    DataWord {
        tags: dw.tags.clone(),
        data: ids.into_iter().map(|c| c as u64 + 1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|x| x.to_string()).collect()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn classes_by_first_occurrence() {
        let dw = DataWord::from_pairs([("a", 0), ("b", 1), ("c", 0)]).unwrap();
        let p = classes(&dw);
        assert_eq!(p.block_of_value(0).unwrap().positions, vec![1, 3]);
        assert_eq!(p.blocks[0].value, 0);
        assert_eq!(p.blocks[1].positions, vec![2]);

        let single = DataWord::from_pairs([("a", 7)]).unwrap();
        assert_eq!(classes(&single).position_sets(), vec![set(&[1])]);

        let constant = DataWord::from_pairs([("a", 1), ("a", 1), ("a", 1)]).unwrap();
        assert_eq!(classes(&constant).position_sets(), vec![set(&[1, 2, 3])]);
    }

    #[test]
    fn empty_and_mismatched_words_rejected() {
        assert!(DataWord::new(vec![], vec![]).is_err());
        assert!(DataWord::new(s(&["a"]), vec![1, 2]).is_err());
    }

    #[test]
    fn mark_and_restrict() {
        let w = s(&["a", "b", "c"]);
        let m = mark(&w, &set(&[1, 3])).unwrap();
        assert_eq!(m.to_string(), "(a,1)(b,0)(c,1)");
        assert_eq!(mark(&w, &set(&[])).unwrap().to_string(), "(a,0)(b,0)(c,0)");
        assert_eq!(
            mark(&s(&["a", "b"]), &set(&[1, 2])).unwrap().to_string(),
            "(a,1)(b,1)"
        );
        assert!(mark(&w, &set(&[4])).is_err());
        assert!(mark(&w, &set(&[0])).is_err());

        assert_eq!(restrict(&w, &set(&[1, 3])).unwrap(), s(&["a", "c"]));
        assert_eq!(restrict(&w, &set(&[1, 2, 3])).unwrap(), w);
        assert!(restrict(&w, &set(&[])).unwrap().is_empty());
        assert!(restrict(&w, &set(&[5])).is_err());
    }

    #[test]
    fn projection() {
        let dw = DataWord::from_pairs([("a", 1), ("b", 2)]).unwrap();
        assert_eq!(project(&dw, |t| Some(t.to_string())), s(&["a", "b"]));
        assert_eq!(
            project(&dw, |t| (t == "b").then(|| "b".to_string())),
            s(&["b"])
        );
        let dw = DataWord::from_pairs([("a", 1), ("a", 3), ("b", 1)]).unwrap();
        assert_eq!(project(&dw, |_| Some("c".into())), s(&["c", "c", "c"]));
    }

    #[test]
    fn enumeration_small_cases() {
        let a = s(&["a"]);
        let words: Vec<String> = enumerate_data_words(&a, 1).map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["a:1"]);
        let words: Vec<String> = enumerate_data_words(&a, 2).map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["a:1", "a:1 a:1", "a:1 a:2"]);
        assert_eq!(enumerate_data_words(&s(&["a", "b"]), 2).count(), 10);
    }

    #[test]
    fn enumeration_counts_match_bell_numbers() {
        // independent count: sum over n of |Σ|^n · Bell(n), Bell via the triangle
        fn bell(n: usize) -> usize {
            let mut row = vec![1usize];
            for _ in 1..n {
                let mut next = vec![*row.last().unwrap()];
                for x in &row {
                    let v = next.last().unwrap() + x;
                    next.push(v);
                }
                row = next;
            }
            *row.last().unwrap()
        }
        let sigma = s(&["a", "b", "c"]);
        for max_len in 1..=5 {
            let expected: usize = (1..=max_len).map(|n| 3usize.pow(n as u32) * bell(n)).sum();
            assert_eq!(enumerate_data_words(&sigma, max_len).count(), expected);
        }
    }

    #[test]
    fn parse_data_word_lines() {
        let dw = DataWord::parse_line("a:1 b:2  c:1", 1).unwrap();
        assert_eq!(dw.to_string(), "a:1 b:2 c:1");
        match DataWord::parse_line("a:1 b2", 4) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 5)),
            other => panic!("unexpected {other:?}"),
        }
        match DataWord::parse_line("a:1 b:x", 2) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        let many = DataWord::parse_many("# words\na:1\n\nb:2 b:2\n").unwrap();
        assert_eq!(many.len(), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_word() -> impl Strategy<Value = DataWord> {
            prop::collection::vec((prop::sample::select(vec!["a", "b", "c"]), 0u64..5), 1..8)
                .prop_map(|v| DataWord::from_pairs(v).unwrap())
        }

        proptest! {
            #[test]
            fn classes_partition_positions(dw in arb_word()) {
                let p = classes(&dw);
                let mut all: Vec<usize> = p.blocks.iter().flat_map(|b| b.positions.clone()).collect();
                all.sort();
                prop_assert_eq!(all, (1..=dw.len()).collect::<Vec<_>>());
                let values: BTreeSet<u64> = p.blocks.iter().map(|b| b.value).collect();
                prop_assert_eq!(values.len(), p.blocks.len());
            }

            #[test]
            fn renaming_keeps_partition(dw in arb_word(), shift in 1u64..100) {
                let renamed = dw.map_data(|d| d * 7 + shift);
                prop_assert_eq!(classes(&dw).position_sets(), classes(&renamed).position_sets());
            }

            #[test]
            fn mark_projects_back(dw in arb_word(), pick in 0usize..8) {
                let p = classes(&dw);
                let block = &p.blocks[pick % p.blocks.len()];
                let x: BTreeSet<usize> = block.positions.iter().copied().collect();
                let m = mark(dw.tags(), &x).unwrap();
                let tags: Vec<String> = m.letters.iter().map(|(g, _)| g.clone()).collect();
                prop_assert_eq!(tags, dw.tags().to_vec());
                let ones: BTreeSet<usize> = m.letters.iter().enumerate()
                    .filter(|(_, (_, b))| *b).map(|(i, _)| i + 1).collect();
                prop_assert_eq!(ones, x);
            }
        }

        #[test]
        fn enumeration_has_no_duplicates() {
            let sigma = s(&["a", "b"]);
            let mut seen = BTreeSet::new();
            for w in enumerate_data_words(&sigma, 4) {
                let key = (w.tags().to_vec(), classes(&w).position_sets());
                assert!(seen.insert(key), "duplicate {w}");
                assert_eq!(canonicalize(&w), w);
            }
        }
    }
}
