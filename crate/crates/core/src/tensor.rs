//! Exact formal modular-symbol tensors.
//!
//! A [`SymbolTensor`] with `r` slots is a finite sum of terms
//! `c * <m_1, gamma_1> ... <m_r, gamma_r> * base * kappa^n`, where each slot
//! monomial `m_i` is a multiset of signed letters. Conjugated symbols (negative
//! letters) are independent generators; nothing relates them to the
//! unconjugated ones.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::profile::{BaseForm, GroupProfile};
use crate::words::{enumerate_shuffles, exclusion_reason, IndexEntry, SignedLetter, Word};

pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(n.into())
}

/// Sorted multiset of letters attached to one slot. The empty monomial is
/// the unit (a slot the term does not depend on).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotMonomial(Vec<SignedLetter>);

impl SlotMonomial {
    pub fn letter(l: SignedLetter) -> Self {
        SlotMonomial(vec![l])
    }

    pub fn unit() -> Self {
        SlotMonomial(Vec::new())
    }

    pub fn from_letters(mut letters: Vec<SignedLetter>) -> Self {
        letters.sort();
        SlotMonomial(letters)
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn single(&self) -> Option<SignedLetter> {
        match self.0.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }
}

impl fmt::Display for SlotMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "()");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub slots: Vec<SlotMonomial>,
    pub base: BaseForm,
    pub kappa: u32,
}

impl TermKey {
    /// The word read off a term whose slots are all degree one.
    pub fn word(&self) -> Option<Word> {
        self.slots
            .iter()
            .map(SlotMonomial::single)
            .collect::<Option<Vec<_>>>()
            .map(Word::from_letters)
    }

    pub fn is_pure(&self) -> bool {
        self.slots.iter().all(|m| m.degree() == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTensor {
    slots: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

impl SymbolTensor {
    pub fn zero(slots: usize) -> Self {
        SymbolTensor {
            slots,
            terms: BTreeMap::new(),
        }
    }

    /// Single term `1 * base` with no slots.
    pub fn constant(base: BaseForm) -> Self {
        Self::monomial(Vec::new(), base, 0, scalar(1))
    }

    pub fn monomial(slots: Vec<SlotMonomial>, base: BaseForm, kappa: u32, c: Scalar) -> Self {
        let mut t = SymbolTensor::zero(slots.len());
        t.add_term(
            TermKey {
                slots,
                base,
                kappa,
            },
            c,
        );
        t
    }

    /// `<f_{i_1}, gamma_1> ... <f_{i_r}, gamma_r> base` with letters checked
    /// against the profile genus.
    pub fn pure(word: &Word, base: BaseForm, profile: &GroupProfile) -> Result<Self> {
        for l in word.letters() {
            SignedLetter::new(l.value(), profile.genus)?;
        }
        Ok(Self::pure_unchecked(word, base))
    }

    pub(crate) fn pure_unchecked(word: &Word, base: BaseForm) -> Self {
        let slots = word
            .letters()
            .iter()
            .map(|&l| SlotMonomial::letter(l))
            .collect();
        Self::monomial(slots, base, 0, scalar(1))
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, key: &TermKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, key: TermKey, c: Scalar) {
        debug_assert_eq!(key.slots.len(), self.slots);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &SymbolTensor) -> Result<()> {
        if self.slots != other.slots {
            return Err(Error::Shape(format!(
                "slot mismatch: {} vs {}",
                self.slots, other.slots
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
        Ok(())
    }

    pub fn scaled(&self, c: &Scalar) -> SymbolTensor {
        let mut out = SymbolTensor::zero(self.slots);
        out.add_scaled(c, self).expect("same shape");
        out
    }

    pub fn sub(&self, other: &SymbolTensor) -> Result<SymbolTensor> {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(), other)?;
        Ok(out)
    }

    /// Linear combination `sum c_i T_i`. An empty combination has no slot
    /// count to inherit and yields the zero tensor with zero slots.
    pub fn combine(scalars: &[Scalar], tensors: &[SymbolTensor]) -> Result<SymbolTensor> {
        if scalars.len() != tensors.len() {
            return Err(Error::Shape(format!(
                "{} scalars for {} tensors",
                scalars.len(),
                tensors.len()
            )));
        }
        let slots = tensors.first().map_or(0, |t| t.slots);
        let mut out = SymbolTensor::zero(slots);
        for (c, t) in scalars.iter().zip(tensors) {
            out.add_scaled(c, t)?;
        }
        Ok(out)
    }

    /// Maps every term through `f`, which may change the slot count uniformly.
    pub(crate) fn map_terms(
        &self,
        slots: usize,
        mut f: impl FnMut(&TermKey, &Scalar) -> Result<Option<(TermKey, Scalar)>>,
    ) -> Result<SymbolTensor> {
        let mut out = SymbolTensor::zero(slots);
        for (k, v) in &self.terms {
            if let Some((nk, nv)) = f(k, v)? {
                if nk.slots.len() != slots {
                    return Err(Error::Shape("term mapped to wrong slot count".into()));
                }
                out.add_term(nk, nv);
            }
        }
        Ok(out)
    }

    /// Sum over all shuffles of type `(a.slots, a.slots + b.slots + 1)` of the
    /// interleaved products: `a`'s slots routed through `phi`, `b`'s through
    /// `psi`. Coefficient forms multiply, with the constant 1 as identity.
    pub fn shuffle_product(a: &SymbolTensor, b: &SymbolTensor) -> Result<SymbolTensor> {
        let r = a.slots;
        let total = a.slots + b.slots;
        let shuffles = enumerate_shuffles(r as i64, total as i64 + 1)?;
        let mut out = SymbolTensor::zero(total);
        for s in &shuffles {
            for (ka, ca) in &a.terms {
                for (kb, cb) in &b.terms {
                    let base = multiply_bases(&ka.base, &kb.base)?;
                    let slots = s.interleave(&ka.slots, &kb.slots);
                    out.add_term(
                        TermKey {
                            slots,
                            base,
                            kappa: ka.kappa + kb.kappa,
                        },
                        ca * cb,
                    );
                }
            }
        }
        Ok(out)
    }

    /// True iff every term is a pure `(word; base)` of `J_{t,k} \ I_{t,k}`.
    pub fn in_a(&self, t: usize, k: u32, profile: &GroupProfile) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        if self.slots + 1 != t {
            return Err(Error::Shape(format!(
                "tensor has {} slots, order {t} needs {}",
                self.slots,
                t.saturating_sub(1)
            )));
        }
        for key in self.terms.keys() {
            if !key.is_pure() {
                return Err(Error::NotPure);
            }
        }
        Ok(self.terms.keys().all(|key| key_in_a(key, k, profile)))
    }

    /// Removes slot `slot` (1-based) after substituting a parabolic element
    /// there: every cuspidal period vanishes on parabolics, so only terms with
    /// a unit monomial in that slot survive.
    pub fn substitute_parabolic(&self, slot: usize, _cusp: &str) -> Result<SymbolTensor> {
        if slot == 0 || slot > self.slots {
            return Err(Error::Shape(format!(
                "slot {slot} out of range 1..={}",
                self.slots
            )));
        }
        self.map_terms(self.slots - 1, |k, v| {
            if k.slots[slot - 1].degree() > 0 {
                return Ok(None);
            }
            let mut slots = k.slots.clone();
            slots.remove(slot - 1);
            Ok(Some((
                TermKey {
                    slots,
                    base: k.base.clone(),
                    kappa: k.kappa,
                },
                v.clone(),
            )))
        })
    }

    /// One term per line, `coeff * [m1|m2|...] * base (* kappa^n)`, in key order.
    pub fn to_canonical_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.terms {
            let slots: Vec<String> = k.slots.iter().map(|m| m.to_string()).collect();
            s.push_str(&format!("{} * [{}] * {}", v, slots.join("|"), k.base));
            if k.kappa > 0 {
                s.push_str(&format!(" * kappa^{}", k.kappa));
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for SymbolTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (slots={})", self.slots);
        }
        write!(f, "{}", self.to_canonical_text().trim_end())
    }
}

pub(crate) fn multiply_bases(a: &BaseForm, b: &BaseForm) -> Result<BaseForm> {
    match (a, b) {
        (BaseForm::One, x) | (x, BaseForm::One) => Ok(x.clone()),
        _ => Err(Error::UnsupportedProduct(format!(
            "product of two non-constant forms {a} * {b}"
        ))),
    }
}

pub(crate) fn key_in_a(key: &TermKey, k: u32, profile: &GroupProfile) -> bool {
    if key.kappa != 0 {
        return false;
    }
    match key.word() {
        Some(word) => {
            let entry = IndexEntry::new(word, key.base.clone(), k);
            entry.in_j(profile) && exclusion_reason(&entry, k).is_some()
        }
        None => false,
    }
}

pub(crate) fn key_in_i(key: &TermKey, k: u32, profile: &GroupProfile) -> Option<IndexEntry> {
    if key.kappa != 0 {
        return None;
    }
    let entry = IndexEntry::new(key.word()?, key.base.clone(), k);
    entry.in_i(profile).then_some(entry)
}

/// Exact rank of the span of `tensors`, by sparse elimination over the
/// rationals on the common term-key basis.
pub fn tensor_rank(tensors: &[SymbolTensor]) -> Result<usize> {
    if let Some(first) = tensors.first() {
        if tensors.iter().any(|t| t.slots != first.slots) {
            return Err(Error::Shape("tensors with different slot counts".into()));
        }
    }
    let mut index: HashMap<TermKey, usize> = HashMap::new();
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
    for t in tensors {
        let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (k, c) in &t.terms {
            let n = index.len();
            let i = *index.entry(k.clone()).or_insert(n);
            v.insert(i, c.clone());
        }
        // reduce against existing pivots, lowest column first
        loop {
            let hit = v
                .iter()
                .find(|(col, _)| pivots.contains_key(col))
                .map(|(col, c)| (*col, c.clone()));
            let Some((col, c)) = hit else { break };
            let row = &pivots[&col];
            for (j, x) in row {
                let e = v.entry(*j).or_insert_with(Scalar::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(j);
                }
            }
        }
        if let Some((&lead, c)) = v.iter().next() {
            let inv = Scalar::one() / c.clone();
            let row = v.into_iter().map(|(j, x)| (j, x * &inv)).collect();
            pivots.insert(lead, row);
        }
    }
    Ok(pivots.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile() -> GroupProfile {
        GroupProfile::synthetic(1, 2, &[2, 4]).unwrap()
    }

    fn fa() -> BaseForm {
        BaseForm::Eisenstein {
            weight: 2,
            cusp: "inf".into(),
        }
    }

    fn w(v: &[i32]) -> Word {
        Word::new(v, 2).unwrap()
    }

    #[test]
    fn pure_tensor_shapes() {
        let p = profile();
        let t = SymbolTensor::pure(&w(&[1, -1]), fa(), &p).unwrap();
        assert_eq!(t.slots(), 2);
        assert_eq!(t.len(), 1);
        let s = SymbolTensor::pure(&Word::empty(), BaseForm::f(1), &p).unwrap();
        assert_eq!(s.slots(), 0);
        assert!(matches!(
            SymbolTensor::pure(&w(&[2]), BaseForm::f(1), &p),
            Err(Error::InvalidLetter { .. })
        ));
    }

    #[test]
    fn combine_cancels_and_accumulates() {
        let t = SymbolTensor::pure_unchecked(&w(&[1]), BaseForm::f(1));
        let z = SymbolTensor::combine(&[scalar(1), scalar(-1)], &[t.clone(), t.clone()]).unwrap();
        assert!(z.is_zero());
        let five = SymbolTensor::combine(&[scalar(2), scalar(3)], &[t.clone(), t.clone()]).unwrap();
        let key = five.terms().next().unwrap().0.clone();
        assert_eq!(five.coefficient(&key), scalar(5));
        let other = SymbolTensor::pure_unchecked(&w(&[1, 1]), BaseForm::f(1));
        assert!(matches!(
            SymbolTensor::combine(&[scalar(1), scalar(1)], &[t, other]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn membership_in_a() {
        let p = profile();
        let inside = SymbolTensor::pure_unchecked(&w(&[-1, 1]), fa());
        assert!(inside.in_a(3, 2, &p).unwrap());
        let outside = SymbolTensor::pure_unchecked(&w(&[1, -1]), fa());
        assert!(!outside.in_a(3, 2, &p).unwrap());
        assert!(SymbolTensor::zero(2).in_a(3, 2, &p).unwrap());
        let l = SignedLetter::raw(-1);
        let sq = SymbolTensor::monomial(
            vec![SlotMonomial::from_letters(vec![l, l])],
            BaseForm::f(1),
            0,
            scalar(1),
        );
        assert_eq!(sq.in_a(2, 2, &p), Err(Error::NotPure));
    }

    #[test]
    fn rank_examples() {
        let a = SymbolTensor::pure_unchecked(&w(&[1]), BaseForm::f(1));
        let b = SymbolTensor::pure_unchecked(&w(&[-1]), BaseForm::f(1));
        assert_eq!(tensor_rank(&[a.clone(), b.clone()]).unwrap(), 2);
        assert_eq!(tensor_rank(&[a.clone(), a.scaled(&scalar(2))]).unwrap(), 1);
        assert_eq!(tensor_rank(&[]).unwrap(), 0);
        let mut c = a.clone();
        c.add_scaled(&scalar(3), &b).unwrap();
        assert_eq!(tensor_rank(&[a, b, c]).unwrap(), 2);
    }

    #[test]
    fn parabolic_substitution() {
        let t = SymbolTensor::pure_unchecked(&w(&[1, -1]), fa());
        assert!(t.substitute_parabolic(1, "0").unwrap().is_zero());
        assert_eq!(t.substitute_parabolic(1, "0").unwrap().slots(), 1);
        assert!(SymbolTensor::zero(2)
            .substitute_parabolic(2, "inf")
            .unwrap()
            .is_zero());
        assert!(matches!(t.substitute_parabolic(3, "0"), Err(Error::Shape(_))));
    }

    #[test]
    fn canonical_text() {
        let mut t = SymbolTensor::pure_unchecked(&w(&[1, -1]), fa());
        t.add_term(
            TermKey {
                slots: vec![SlotMonomial::letter(SignedLetter::raw(-1)); 2],
                base: BaseForm::f(1),
                kappa: 1,
            },
            scalar(-3),
        );
        assert_eq!(
            t.to_canonical_text(),
            "-3 * [-1|-1] * f1 * kappa^1\n1 * [1|-1] * e2_inf\n"
        );
    }
}
