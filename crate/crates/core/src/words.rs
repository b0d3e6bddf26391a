//! Words over signed letters, shuffles, and the index sets `J_{t,k}` and
//! `I_{t,k}` labelling basis elements.
//!
//! A positive letter `j` stands for the period symbol of `f_j`, a negative
//! letter `-j` for its conjugate.

use std::fmt;

use crate::error::{Error, Result};
use crate::profile::{BaseForm, GroupProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedLetter(i32);

impl SignedLetter {
    pub fn new(value: i32, genus: u32) -> Result<Self> {
        if value == 0 || value.unsigned_abs() > genus {
            return Err(Error::InvalidLetter {
                letter: value,
                genus,
            });
        }
        Ok(SignedLetter(value))
    }

    /// Skips the genus check; callers guarantee `value != 0`.
    pub(crate) fn raw(value: i32) -> Self {
        debug_assert!(value != 0);
        SignedLetter(value)
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn index(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl fmt::Display for SignedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<SignedLetter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(values: &[i32], genus: u32) -> Result<Self> {
        values
            .iter()
            .map(|&v| SignedLetter::new(v, genus))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn from_letters(letters: Vec<SignedLetter>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.0
    }

    pub fn values(&self) -> Vec<i32> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn all_negative(&self) -> bool {
        self.0.iter().all(|l| !l.is_positive())
    }

    pub fn last(&self) -> Option<SignedLetter> {
        self.0.last().copied()
    }

    /// 1-based position of the last positive letter.
    pub fn last_positive(&self) -> Option<usize> {
        self.0.iter().rposition(|l| l.is_positive()).map(|p| p + 1)
    }

    pub fn has_adjacent_minus_one_one(&self) -> bool {
        self.0.windows(2).any(|w| w[0].0 == -1 && w[1].0 == 1)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Word {
        Word(self.0[range].to_vec())
    }

    pub fn parse(s: &str, genus: u32) -> Result<Self> {
        let inner = s
            .trim()
            .trim_start_matches(['[', '('])
            .trim_end_matches([']', ')']);
        if inner.trim().is_empty() {
            return Ok(Word::empty());
        }
        let values = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad letter `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(&values, genus)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// A shuffle of type `(r, t)`: order-preserving maps `phi: {1..r}` and
/// `psi: {r+1..t-1}` into `{1..t-1}` with complementary images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shuffle {
    pub r: usize,
    pub t: usize,
    /// `phi[i-1] = phi(i)`, 1-based images.
    pub phi: Vec<usize>,
    /// `psi[i-r-1] = psi(i)`, 1-based images.
    pub psi: Vec<usize>,
}

impl Shuffle {
    pub fn is_identity(&self) -> bool {
        self.phi.iter().enumerate().all(|(i, &p)| p == i + 1)
            && self
                .psi
                .iter()
                .enumerate()
                .all(|(i, &p)| p == self.r + i + 1)
    }

    /// Interleaves a length-`r` prefix and a length-`t-1-r` tail into the
    /// slots `1..t-1`: slot `phi(i)` receives `prefix[i]`, slot `psi(i)`
    /// receives `tail[i]`.
    pub fn interleave<T: Clone>(&self, prefix: &[T], tail: &[T]) -> Vec<T> {
        assert_eq!(prefix.len(), self.r);
        assert_eq!(tail.len(), self.t - 1 - self.r);
        let mut out: Vec<Option<T>> = vec![None; self.t - 1];
        for (x, &p) in prefix.iter().zip(&self.phi) {
            out[p - 1] = Some(x.clone());
        }
        for (x, &p) in tail.iter().zip(&self.psi) {
            out[p - 1] = Some(x.clone());
        }
        out.into_iter().map(|x| x.expect("complementary images")).collect()
    }

    fn check(&self) -> bool {
        let n = self.t - 1;
        let mut seen = vec![false; n];
        let inc = |v: &[usize]| v.windows(2).all(|w| w[0] < w[1]);
        if !inc(&self.phi) || !inc(&self.psi) || self.phi.len() + self.psi.len() != n {
            return false;
        }
        for &p in self.phi.iter().chain(&self.psi) {
            if p == 0 || p > n || seen[p - 1] {
                return false;
            }
            seen[p - 1] = true;
        }
        true
    }
}

/// All shuffles of type `(r, t)`, lexicographic in the image of `phi`.
pub fn enumerate_shuffles(r: i64, t: i64) -> Result<Vec<Shuffle>> {
    if r < 0 || r >= t {
        return Err(Error::InvalidArguments(format!(
            "shuffle type needs 0 <= r < t, got r={r}, t={t}"
        )));
    }
    let (r, t) = (r as usize, t as usize);
    let n = t - 1;
    let mut out = Vec::new();
    let mut combo: Vec<usize> = (1..=r).collect();
    loop {
        let psi = (1..=n).filter(|x| !combo.contains(x)).collect();
        let s = Shuffle {
            r,
            t,
            phi: combo.clone(),
            psi,
        };
        debug_assert!(s.check());
        out.push(s);
        // next r-combination of 1..n in lexicographic order
        let mut i = r;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if combo[i] < n - (r - 1 - i) {
                combo[i] += 1;
                for j in i + 1..r {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `(i_1, ..., i_{t-1}; g)` with `g` in the basis of `M_k`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexEntry {
    pub word: Word,
    pub base: BaseForm,
    pub weight: u32,
}

impl IndexEntry {
    pub fn new(word: Word, base: BaseForm, weight: u32) -> Self {
        IndexEntry { word, base, weight }
    }

    /// The order `t = |word| + 1`.
    pub fn order(&self) -> usize {
        self.word.len() + 1
    }

    pub fn validate(&self, profile: &GroupProfile) -> Result<()> {
        for l in self.word.letters() {
            SignedLetter::new(l.value(), profile.genus)?;
        }
        if !profile.contains_base(self.weight, &self.base) {
            return Err(Error::NotInIndex(self.to_string()));
        }
        Ok(())
    }

    pub fn in_j(&self, profile: &GroupProfile) -> bool {
        self.validate(profile).is_ok()
    }

    pub fn in_i(&self, profile: &GroupProfile) -> bool {
        self.in_j(profile) && exclusion_reason(self, self.weight).is_none()
    }
}

impl fmt::Display for IndexEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.word, self.base)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExclusionReason {
    AdjacentPattern,
    F1Tail,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::AdjacentPattern => write!(f, "adjacent-pattern"),
            ExclusionReason::F1Tail => write!(f, "f1-tail"),
        }
    }
}

/// First rule removing `entry` from `I_{t,k}`, if any.
pub fn exclusion_reason(entry: &IndexEntry, k: u32) -> Option<ExclusionReason> {
    if entry.word.has_adjacent_minus_one_one() {
        return Some(ExclusionReason::AdjacentPattern);
    }
    if k == 2
        && entry.word.last().map(|l| l.value()) == Some(-1)
        && entry.base == BaseForm::f(1)
    {
        return Some(ExclusionReason::F1Tail);
    }
    None
}

fn all_words(len: usize, genus: u32) -> Vec<Word> {
    let alphabet: Vec<i32> = (1..=genus as i32)
        .flat_map(|j| [j, -j])
        .collect();
    let mut words = vec![Vec::new()];
    for _ in 0..len {
        words = words
            .into_iter()
            .flat_map(|w: Vec<SignedLetter>| {
                alphabet.iter().map(move |&a| {
                    let mut w = w.clone();
                    w.push(SignedLetter::raw(a));
                    w
                })
            })
            .collect();
    }
    let mut out: Vec<Word> = words.into_iter().map(Word).collect();
    out.sort();
    out
}

/// `J_{t,k}`, ordered by word then by basis position.
pub fn enumerate_j(t: usize, k: u32, profile: &GroupProfile) -> Result<Vec<IndexEntry>> {
    if t == 0 {
        return Err(Error::InvalidArguments("order t must be at least 1".into()));
    }
    let basis = profile.basis(k)?;
    Ok(all_words(t - 1, profile.genus)
        .into_iter()
        .flat_map(|w| {
            basis
                .iter()
                .map(move |b| IndexEntry::new(w.clone(), b.clone(), k))
        })
        .collect())
}

/// `I_{t,k}`: `J_{t,k}` minus the entries named by [`exclusion_reason`].
pub fn enumerate_i(t: usize, k: u32, profile: &GroupProfile) -> Result<Vec<IndexEntry>> {
    Ok(enumerate_j(t, k, profile)?
        .into_iter()
        .filter(|e| exclusion_reason(e, k).is_none())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, r: usize) -> usize {
        (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn shuffles_of_type_1_3() {
        let s = enumerate_shuffles(1, 3).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!((s[0].phi.clone(), s[0].psi.clone()), (vec![1], vec![2]));
        assert_eq!((s[1].phi.clone(), s[1].psi.clone()), (vec![2], vec![1]));
        assert!(s[0].is_identity());
        assert!(!s[1].is_identity());
    }

    #[test]
    fn shuffle_of_type_0_2_is_identity() {
        let s = enumerate_shuffles(0, 2).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].phi.is_empty());
        assert_eq!(s[0].psi, vec![1]);
        assert!(s[0].is_identity());
    }

    #[test]
    fn shuffle_counts_match_brute_force() {
        // brute force: every subset of slots of size r is a phi image
        for t in 1..=8i64 {
            for r in 0..t {
                let n = (t - 1) as usize;
                let brute = (0u32..(1 << n))
                    .filter(|m| m.count_ones() as i64 == r)
                    .count();
                let s = enumerate_shuffles(r, t).unwrap();
                assert_eq!(s.len(), brute);
                assert_eq!(s.len(), binomial(n, r as usize));
                assert_eq!(s.iter().filter(|x| x.is_identity()).count(), 1);
                assert!(s.iter().all(|x| x.check()));
                assert!(s.windows(2).all(|w| w[0].phi < w[1].phi));
            }
        }
        assert_eq!(enumerate_shuffles(2, 5).unwrap().len(), 6);
    }

    #[test]
    fn shuffle_rejects_bad_type() {
        assert!(enumerate_shuffles(3, 3).is_err());
        assert!(enumerate_shuffles(-1, 3).is_err());
    }

    #[test]
    fn j_and_i_counts() {
        let p = GroupProfile::synthetic(1, 2, &[2, 4]).unwrap();
        assert_eq!(enumerate_j(2, 2, &p).unwrap().len(), 4);
        assert_eq!(enumerate_j(3, 2, &p).unwrap().len(), 8);
        assert_eq!(enumerate_i(2, 2, &p).unwrap().len(), 3);
        let i3 = enumerate_i(3, 2, &p).unwrap();
        assert_eq!(i3.len(), 4);
        let removed: Vec<String> = enumerate_j(3, 2, &p)
            .unwrap()
            .into_iter()
            .filter(|e| !i3.contains(e))
            .map(|e| e.to_string())
            .collect();
        assert_eq!(
            removed,
            vec!["([-1,-1]; f1)", "([-1,1]; f1)", "([-1,1]; e2_inf)", "([1,-1]; f1)"]
        );
        let d = p.dim_m(4).unwrap();
        assert_eq!(enumerate_i(2, 4, &p).unwrap().len(), 2 * d);
        let t1 = enumerate_j(1, 4, &p).unwrap();
        assert_eq!(t1.len(), d);
        assert!(t1.iter().all(|e| e.word.is_empty()));
        assert!(matches!(enumerate_j(2, 6, &p), Err(Error::UnsupportedWeight(6))));
    }

    #[test]
    fn exclusion_reasons() {
        let fa = BaseForm::Eisenstein {
            weight: 2,
            cusp: "inf".into(),
        };
        let e = |w: &[i32], b: BaseForm| IndexEntry::new(Word::new(w, 1).unwrap(), b, 2);
        assert_eq!(
            exclusion_reason(&e(&[-1, 1], fa.clone()), 2),
            Some(ExclusionReason::AdjacentPattern)
        );
        assert_eq!(
            exclusion_reason(&e(&[-1], BaseForm::f(1)), 2),
            Some(ExclusionReason::F1Tail)
        );
        assert_eq!(exclusion_reason(&e(&[1], BaseForm::f(1)), 2), None);
        assert_eq!(exclusion_reason(&e(&[-1], BaseForm::f(1)), 4), None);
    }

    #[test]
    fn word_parsing_and_letters() {
        assert_eq!(Word::parse("[1,-1]", 1).unwrap().values(), vec![1, -1]);
        assert!(Word::parse("[]", 1).unwrap().is_empty());
        assert!(matches!(
            Word::parse("[2]", 1),
            Err(Error::InvalidLetter { letter: 2, genus: 1 })
        ));
        assert_eq!(Word::new(&[1, -1, -1], 1).unwrap().last_positive(), Some(1));
    }
}
