//! The iterative construction of the basis forms `Z` and `Z'`.
//!
//! For an entry `(i_1, ..., i_{t-1}; g)` with `i_r > 0` and
//! `i_{r+1}, ..., i_{t-1} < 0` the form is
//! `int_i^z Z_{i_1..i_{r-1}; f_{i_r}} * Z_{i_{r+1}..i_{t-1}; g}` minus one
//! correction per non-identity shuffle of type `(r, t)`. For `Z'` every
//! shuffle gets a correction; for `Z` only those whose interleaved word is in
//! `I_{t,k}`, the rest land in `A_{t,k}`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, RwLock};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formal::{ExceptionalReading, FormalForm};
use crate::profile::{BaseForm, GroupProfile};
use crate::tensor::{key_in_i, tensor_rank, Scalar, SymbolTensor};
use crate::words::{enumerate_j, enumerate_shuffles, IndexEntry, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "Z'")]
    ZPrime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualClass {
    Zero,
    InA,
    /// The residual has a term outside `A_{t,k}`: the construction failed.
    Outside,
}

#[derive(Clone, Debug)]
pub struct ConstructionRecord {
    pub kind: Kind,
    pub entry: IndexEntry,
    pub form: Arc<FormalForm>,
    /// `fe(form) - pure(entry)`.
    pub residual: SymbolTensor,
    pub residual_class: ResidualClass,
    /// One entry per correcting shuffle, in shuffle order.
    pub corrections_used: Vec<IndexEntry>,
    /// Further `I`-keyed terms removed after the shuffle corrections, with
    /// their coefficients.
    pub extra_corrections: Vec<(IndexEntry, Scalar)>,
    /// `(r, number of shuffles of type (r, t))` when built from a product.
    pub stage: Option<(usize, usize)>,
}

impl ConstructionRecord {
    pub fn target(&self) -> SymbolTensor {
        SymbolTensor::pure_unchecked(&self.entry.word, self.entry.base.clone())
    }
}

type MemoKey = (Kind, IndexEntry);

/// Builds and memoizes constructions for one profile.
pub struct Constructor {
    profile: GroupProfile,
    memo: RwLock<HashMap<MemoKey, Arc<ConstructionRecord>>>,
    fault: Option<MemoKey>,
    in_progress: Mutex<HashSet<(std::thread::ThreadId, MemoKey)>>,
}

impl Constructor {
    pub fn new(profile: GroupProfile) -> Self {
        Constructor {
            profile,
            memo: RwLock::new(HashMap::new()),
            fault: None,
            in_progress: Mutex::new(HashSet::new()),
        }
    }

    /// Drops the first shuffle correction when building `entry`, so the
    /// verifier has something to catch.
    pub fn with_fault(mut self, kind: Kind, entry: IndexEntry) -> Self {
        self.fault = Some((kind, entry));
        self
    }

    pub fn profile(&self) -> &GroupProfile {
        &self.profile
    }

    pub fn construct_z(&self, entry: &IndexEntry) -> Result<Arc<ConstructionRecord>> {
        if !entry.in_i(&self.profile) {
            return Err(Error::NotInIndex(entry.to_string()));
        }
        self.memoized(Kind::Z, entry)
    }

    pub fn construct_zprime(&self, entry: &IndexEntry) -> Result<Arc<ConstructionRecord>> {
        if !entry.in_j(&self.profile) {
            return Err(Error::NotInIndex(entry.to_string()));
        }
        self.memoized(Kind::ZPrime, entry)
    }

    fn construct(&self, kind: Kind, entry: &IndexEntry) -> Result<Arc<ConstructionRecord>> {
        match kind {
            Kind::Z => self.construct_z(entry),
            Kind::ZPrime => self.construct_zprime(entry),
        }
    }

    fn memoized(&self, kind: Kind, entry: &IndexEntry) -> Result<Arc<ConstructionRecord>> {
        let key = (kind, entry.clone());
        if let Some(rec) = self.memo.read().expect("memo lock").get(&key) {
            return Ok(rec.clone());
        }
        let marker = (std::thread::current().id(), key.clone());
        if !self.in_progress.lock().expect("lock").insert(marker.clone()) {
            return Err(Error::InternalConsistency(format!(
                "construction of {entry} depends on itself"
            )));
        }
        let built = self.build(kind, entry);
        self.in_progress.lock().expect("lock").remove(&marker);
        let rec = Arc::new(built?);
        let mut memo = self.memo.write().expect("memo lock");
        Ok(memo.entry(key).or_insert(rec).clone())
    }

    fn build(&self, kind: Kind, entry: &IndexEntry) -> Result<ConstructionRecord> {
        let k = entry.weight;
        let word = &entry.word;
        let t = entry.order();
        let base = entry.base.clone();
        let leaf = |form: FormalForm| self.finish(kind, entry, Arc::new(form), vec![], vec![], None);

        if t == 1 {
            return leaf(FormalForm::leaf_basis(base));
        }
        let Some(r) = word.last_positive() else {
            let form = match kind {
                Kind::Z if base.is_cuspidal() => FormalForm::leaf_z_with(
                    word.clone(),
                    base,
                    k,
                    ExceptionalReading::TailCorrected,
                )?,
                _ => FormalForm::leaf_zprime(word.clone(), base, k)?,
            };
            return leaf(form);
        };

        let letters = word.letters();
        let head = &letters[..r];
        let tail = &letters[r..];
        let inner_entry = IndexEntry::new(
            Word::from_letters(head[..r - 1].to_vec()),
            BaseForm::f(head[r - 1].index()),
            2,
        );
        let inner = self.construct(kind, &inner_entry)?;
        let tail_entry = IndexEntry::new(Word::from_letters(tail.to_vec()), base.clone(), k);
        let tail_rec = self.construct(kind, &tail_entry)?;
        let prim = Arc::new(FormalForm::primitive(inner.form.clone())?);
        let prod = Arc::new(FormalForm::product(prim, tail_rec.form.clone())?);

        let shuffles = enumerate_shuffles(r as i64, t as i64)?;
        let mut terms: Vec<(Scalar, Arc<FormalForm>)> = vec![(Scalar::one(), prod.clone())];
        let mut corrections = Vec::new();
        let faulty = self.fault.as_ref() == Some(&(kind, entry.clone()));
        let mut skip_fault = faulty;
        for s in shuffles.iter().filter(|s| !s.is_identity()) {
            let j = IndexEntry::new(
                Word::from_letters(s.interleave(head, tail)),
                base.clone(),
                k,
            );
            let wanted = match kind {
                Kind::Z => j.in_i(&self.profile),
                Kind::ZPrime => true,
            };
            if !wanted {
                continue;
            }
            if skip_fault {
                skip_fault = false;
                continue;
            }
            let rec = self.construct(kind, &j)?;
            terms.push((-Scalar::one(), rec.form.clone()));
            corrections.push(j);
        }

        let mut extra = Vec::new();
        if kind == Kind::Z && !faulty {
            // Exceptional leaves contribute A-terms that a shuffle can carry
            // back into I; remove those with the already built basis forms.
            let target = SymbolTensor::pure_unchecked(word, base.clone());
            let mut fe = lincomb_fe(&terms)?;
            for _ in 0..64 {
                let residual = fe.sub(&target)?;
                let hit = residual
                    .terms()
                    .find_map(|(key, c)| key_in_i(key, k, &self.profile).map(|e| (e, c.clone())));
                let Some((j, c)) = hit else { break };
                let rec = self.construct_z(&j)?;
                fe.add_scaled(&-c.clone(), rec.form.fe())?;
                terms.push((-c.clone(), rec.form.clone()));
                extra.push((j, c));
            }
        }

        let form = if terms.len() == 1 {
            prod
        } else {
            Arc::new(FormalForm::lincomb(terms)?)
        };
        self.finish(kind, entry, form, corrections, extra, Some((r, shuffles.len())))
    }

    fn finish(
        &self,
        kind: Kind,
        entry: &IndexEntry,
        form: Arc<FormalForm>,
        corrections_used: Vec<IndexEntry>,
        extra_corrections: Vec<(IndexEntry, Scalar)>,
        stage: Option<(usize, usize)>,
    ) -> Result<ConstructionRecord> {
        let target = SymbolTensor::pure_unchecked(&entry.word, entry.base.clone());
        let residual = form.fe().sub(&target)?;
        let residual_class = classify(&residual, entry, &self.profile);
        Ok(ConstructionRecord {
            kind,
            entry: entry.clone(),
            form,
            residual,
            residual_class,
            corrections_used,
            extra_corrections,
            stage,
        })
    }
}

fn lincomb_fe(terms: &[(Scalar, Arc<FormalForm>)]) -> Result<SymbolTensor> {
    let mut out = SymbolTensor::zero(terms[0].1.fe().slots());
    for (c, f) in terms {
        out.add_scaled(c, f.fe())?;
    }
    Ok(out)
}

fn classify(residual: &SymbolTensor, entry: &IndexEntry, profile: &GroupProfile) -> ResidualClass {
    if residual.is_zero() {
        return ResidualClass::Zero;
    }
    match residual.in_a(entry.order(), entry.weight, profile) {
        Ok(true) => ResidualClass::InA,
        _ => ResidualClass::Outside,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub kind: Kind,
    pub entry: String,
    pub residual_class: Option<ResidualClass>,
    pub corrections: usize,
    pub extra_corrections: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub t: usize,
    pub k: u32,
    pub genus: u32,
    pub cusps: u32,
    pub z_count: usize,
    pub zprime_count: usize,
    pub rank: usize,
    pub expected_rank: usize,
    pub entries: Vec<EntryReport>,
    pub pass: bool,
}

impl LevelReport {
    pub fn failures(&self) -> impl Iterator<Item = &EntryReport> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

fn entry_report(
    kind: Kind,
    entry: &IndexEntry,
    rec: Result<Arc<ConstructionRecord>>,
) -> (EntryReport, Option<SymbolTensor>) {
    let mut rep = EntryReport {
        kind,
        entry: entry.to_string(),
        residual_class: None,
        corrections: 0,
        extra_corrections: 0,
        pass: false,
        error: None,
    };
    let rec = match rec.and_then(|r| r.form.fe_chain().map(|fe| (r, fe))) {
        Ok(x) => x,
        Err(e) => {
            rep.error = Some(e.to_string());
            return (rep, None);
        }
    };
    let (rec, fe) = rec;
    rep.residual_class = Some(rec.residual_class);
    rep.corrections = rec.corrections_used.len();
    rep.extra_corrections = rec.extra_corrections.len();
    rep.pass = match kind {
        Kind::Z => rec.residual_class != ResidualClass::Outside,
        Kind::ZPrime => {
            rec.residual_class == ResidualClass::Zero
                && rec.stage.is_none_or(|(_, n)| rec.corrections_used.len() + 1 == n)
        }
    };
    (rep, Some(fe))
}

/// Builds `Z` for every entry of `I_{t,k}` and `Z'` for every entry of
/// `J_{t,k}`, checks each functional equation and the rank of the `Z` family.
pub fn verify_level(ctor: &Constructor, t: usize, k: u32) -> Result<LevelReport> {
    let profile = ctor.profile();
    let j_entries = enumerate_j(t, k, profile)?;
    let i_entries: Vec<IndexEntry> = j_entries
        .iter()
        .filter(|e| e.in_i(profile))
        .cloned()
        .collect();

    let z: Vec<(EntryReport, Option<SymbolTensor>)> = i_entries
        .par_iter()
        .map(|e| entry_report(Kind::Z, e, ctor.construct_z(e)))
        .collect();
    let zp: Vec<(EntryReport, Option<SymbolTensor>)> = j_entries
        .par_iter()
        .map(|e| entry_report(Kind::ZPrime, e, ctor.construct_zprime(e)))
        .collect();

    let fes: Vec<SymbolTensor> = z.iter().filter_map(|(_, fe)| fe.clone()).collect();
    let rank = tensor_rank(&fes)?;
    let entries: Vec<EntryReport> = z.into_iter().chain(zp).map(|(r, _)| r).collect();
    let pass = rank == i_entries.len() && entries.iter().all(|e| e.pass);
    Ok(LevelReport {
        t,
        k,
        genus: profile.genus,
        cusps: profile.cusp_count(),
        z_count: i_entries.len(),
        zprime_count: j_entries.len(),
        rank,
        expected_rank: i_entries.len(),
        entries,
        pass,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicEntry {
    pub entry: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicReport {
    pub t: usize,
    pub k: u32,
    pub entries: Vec<ParabolicEntry>,
    pub pass: bool,
}

/// The value `Z'|(pi_{a_m} - 1)(gamma_3 - 1)...(gamma_{t-1} - 1)` should
/// take: `kappa * <f_{i_3}>...<f_{i_{t-1}}> g` if the word starts `(-1, 1)`,
/// zero otherwise.
pub fn expected_parabolic(entry: &IndexEntry) -> SymbolTensor {
    let v = entry.word.values();
    let rest = entry.word.slice(2..entry.word.len());
    let mut out = SymbolTensor::zero(rest.len());
    if v[..2] == [-1, 1] {
        let pure = SymbolTensor::pure_unchecked(&rest, entry.base.clone());
        for (key, c) in pure.terms() {
            let mut key = key.clone();
            key.kappa = 1;
            out.add_term(key, c.clone());
        }
    }
    out
}

pub fn check_parabolic_lemma(ctor: &Constructor, t: usize, k: u32) -> Result<ParabolicReport> {
    if t < 3 {
        return Err(Error::InvalidArguments(format!(
            "parabolic lemma needs t >= 3, got {t}"
        )));
    }
    let entries: Vec<IndexEntry> = enumerate_j(t, k, ctor.profile())?
        .into_iter()
        .filter(|e| e.word.letters()[0].value() < 0)
        .collect();
    let rows: Vec<ParabolicEntry> = entries
        .par_iter()
        .map(|e| {
            let expected = expected_parabolic(e);
            let computed = ctor
                .construct_zprime(e)
                .and_then(|rec| rec.form.parabolic_chain());
            let (computed, pass) = match computed {
                Ok(c) => {
                    let pass = c == expected;
                    (c.to_string(), pass)
                }
                Err(err) => (format!("error: {err}"), false),
            };
            ParabolicEntry {
                entry: e.to_string(),
                expected: expected.to_string(),
                computed,
                pass,
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(ParabolicReport {
        t,
        k,
        entries: rows,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub t: usize,
    pub k: u32,
    pub dim_m: usize,
    /// Direct count of the spanning set: one basis form per entry of
    /// `J_{r,k}` for `r = 1..=t`.
    pub implemented: u128,
    /// `((2g)^t + ... + 2g + 1) dim M_k`.
    pub paper_formula: u128,
}

pub fn dimension_zm(t: usize, k: u32, profile: &GroupProfile) -> Result<DimensionReport> {
    if t == 0 {
        return Err(Error::InvalidArguments("t must be at least 1".into()));
    }
    let dim = profile.dim_m(k)?;
    let overflow = || Error::InvalidArguments(format!("dimension overflows at t={t}"));
    let geometric = |n: usize| -> Result<u128> {
        let base = 2 * profile.genus as u128;
        let mut sum = 0u128;
        let mut pow = 1u128;
        for _ in 0..=n {
            sum = sum.checked_add(pow).ok_or_else(overflow)?;
            pow = pow.checked_mul(base).ok_or_else(overflow)?;
        }
        Ok(sum)
    };
    let d = dim as u128;
    Ok(DimensionReport {
        t,
        k,
        dim_m: dim,
        implemented: geometric(t - 1)?.checked_mul(d).ok_or_else(overflow)?,
        paper_formula: geometric(t)?.checked_mul(d).ok_or_else(overflow)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(g: u32) -> GroupProfile {
        GroupProfile::synthetic(g, 2, &[2, 4]).unwrap()
    }

    fn entry(v: &[i32], b: &str, k: u32) -> IndexEntry {
        IndexEntry::new(Word::new(v, 2).unwrap(), BaseForm::parse(b).unwrap(), k)
    }

    #[test]
    fn base_cases() {
        let c = Constructor::new(profile(1));
        let r = c.construct_z(&entry(&[], "f1", 2)).unwrap();
        assert_eq!(r.form.to_text(), "(leaf f1)");
        assert_eq!(r.residual_class, ResidualClass::Zero);
        let r = c.construct_z(&entry(&[-1], "e2_inf", 2)).unwrap();
        assert_eq!(r.form.to_text(), "(zp [-1] e2_inf)");
        assert!(matches!(
            c.construct_z(&entry(&[-1], "f1", 2)),
            Err(Error::NotInIndex(_))
        ));
    }

    #[test]
    fn z_with_empty_b() {
        let c = Constructor::new(profile(1));
        let r = c.construct_z(&entry(&[1, -1], "e2_inf", 2)).unwrap();
        assert!(r.corrections_used.is_empty());
        assert_eq!(r.residual_class, ResidualClass::InA);
        assert_eq!(
            r.form.to_text(),
            "(prod (prim (leaf f1)) (zp [-1] e2_inf))"
        );
    }

    #[test]
    fn zprime_with_one_correction() {
        let c = Constructor::new(profile(1));
        let r = c.construct_zprime(&entry(&[1, -1], "e2_inf", 2)).unwrap();
        assert_eq!(r.corrections_used, vec![entry(&[-1, 1], "e2_inf", 2)]);
        assert_eq!(r.residual_class, ResidualClass::Zero);
    }

    #[test]
    fn fault_is_detected() {
        let e = entry(&[1, -1], "e2_inf", 2);
        let c = Constructor::new(profile(1)).with_fault(Kind::ZPrime, e.clone());
        let r = c.construct_zprime(&e).unwrap();
        assert_ne!(r.residual_class, ResidualClass::Zero);
    }

    #[test]
    fn dimensions() {
        let p = profile(1);
        let d = dimension_zm(2, 2, &p).unwrap();
        assert_eq!((d.implemented, d.paper_formula), (6, 14));
        assert_eq!(dimension_zm(1, 2, &p).unwrap().implemented, 2);
        let p2 = profile(2);
        let d = p2.dim_m(2).unwrap() as u128;
        assert_eq!(dimension_zm(3, 2, &p2).unwrap().implemented, 21 * d);
    }
}
