//! Expression trees for higher-order forms.
//!
//! Every [`FormalForm`] caches its full-chain functional equation
//! `F |_k (gamma_1 - 1) ... (gamma_{t-1} - 1)` as a [`SymbolTensor`]. Leaves
//! carry their equations as axioms; products and primitives derive theirs.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::profile::BaseForm;
use crate::tensor::{scalar, Scalar, SlotMonomial, SymbolTensor, TermKey};
use crate::words::{exclusion_reason, IndexEntry, SignedLetter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    ModuloA,
}

/// How the exceptional `Z` leaf (`k = 2`, base equal to the cusp form of the
/// last letter) states its equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExceptionalReading {
    /// The correction term copied as printed: it reuses the first slot's
    /// symbol, so slot 1 carries a degree-2 monomial and the last slot is
    /// empty.
    Literal,
    /// The correction term read with the last slot's symbol:
    /// `conj<f_{i_{t-1}}, g_{t-1}> f - conj<f_1, g_{t-1}> f_1`.
    TailCorrected,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Basis(BaseForm),
    ZPrime {
        word: Word,
        base: BaseForm,
    },
    Z {
        word: Word,
        base: BaseForm,
        /// `Some` only for the exceptional leaf.
        reading: Option<ExceptionalReading>,
    },
    Product(Arc<FormalForm>, Arc<FormalForm>),
    Primitive(Arc<FormalForm>),
    LinComb(Vec<(Scalar, Arc<FormalForm>)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalForm {
    order: usize,
    weight: u32,
    node: Node,
    fe: SymbolTensor,
    exactness: Exactness,
}

impl FormalForm {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn fe(&self) -> &SymbolTensor {
        &self.fe
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn leaf_basis(b: BaseForm) -> FormalForm {
        FormalForm {
            order: 1,
            weight: b.weight(),
            fe: SymbolTensor::constant(b.clone()),
            node: Node::Basis(b),
            exactness: Exactness::Exact,
        }
    }

    pub fn leaf_zprime(word: Word, base: BaseForm, k: u32) -> Result<FormalForm> {
        check_leaf(&word, &base, k)?;
        Ok(FormalForm {
            order: word.len() + 1,
            weight: k,
            fe: SymbolTensor::pure_unchecked(&word, base.clone()),
            node: Node::ZPrime { word, base },
            exactness: Exactness::Exact,
        })
    }

    /// `Z` leaf with the literal reading of the exceptional equation.
    pub fn leaf_z(word: Word, f: BaseForm, k: u32) -> Result<FormalForm> {
        Self::leaf_z_with(word, f, k, ExceptionalReading::Literal)
    }

    pub fn leaf_z_with(
        word: Word,
        f: BaseForm,
        k: u32,
        reading: ExceptionalReading,
    ) -> Result<FormalForm> {
        check_leaf(&word, &f, k)?;
        if !f.is_cuspidal() {
            return Err(Error::InvalidLeaf(format!("Z leaf needs a cusp form, got {f}")));
        }
        let last = word.last().map(|l| l.index());
        let exceptional = k == 2 && last.is_some() && f.weight_two_cusp_index() == last;
        if exceptional && last == Some(1) {
            return Err(Error::LeafNotConstructible(format!(
                "({word}; {f}) has f = f_{{i_(t-1)}} = f_1"
            )));
        }
        let order = word.len() + 1;
        let (fe, reading) = if exceptional {
            (exceptional_fe(&word, &f, reading), Some(reading))
        } else {
            (SymbolTensor::pure_unchecked(&word, f.clone()), None)
        };
        Ok(FormalForm {
            order,
            weight: k,
            fe,
            node: Node::Z {
                word,
                base: f,
                reading,
            },
            exactness: Exactness::Exact,
        })
    }

    /// `F * G`; the fe of `F` is routed through `phi`.
    pub fn product(f: Arc<FormalForm>, g: Arc<FormalForm>) -> Result<FormalForm> {
        let fe = SymbolTensor::shuffle_product(&f.fe, &g.fe)?;
        let reducible = fe.terms().any(|(k, _)| key_reducible(k, f.weight + g.weight));
        let exactness = if f.exactness == Exactness::ModuloA
            || g.exactness == Exactness::ModuloA
            || reducible
        {
            Exactness::ModuloA
        } else {
            Exactness::Exact
        };
        Ok(FormalForm {
            order: f.order + g.order - 1,
            weight: f.weight + g.weight,
            fe,
            node: Node::Product(f, g),
            exactness,
        })
    }

    /// `int_i^z F(w) dw`.
    pub fn primitive(f: Arc<FormalForm>) -> Result<FormalForm> {
        let fe = primitive_fe(&f.fe, f.weight)?;
        Ok(FormalForm {
            order: f.order + 1,
            weight: 0,
            fe,
            exactness: f.exactness,
            node: Node::Primitive(f),
        })
    }

    pub fn lincomb(terms: Vec<(Scalar, Arc<FormalForm>)>) -> Result<FormalForm> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidArguments("empty linear combination".into()))?;
        let (order, weight) = (first.1.order, first.1.weight);
        if terms.iter().any(|(_, f)| f.order != order || f.weight != weight) {
            return Err(Error::Shape(
                "linear combination of forms of different order or weight".into(),
            ));
        }
        let fe = lincomb_fe(&terms)?;
        let exactness = if terms.iter().any(|(_, f)| f.exactness == Exactness::ModuloA) {
            Exactness::ModuloA
        } else {
            Exactness::Exact
        };
        Ok(FormalForm {
            order,
            weight,
            fe,
            node: Node::LinComb(terms),
            exactness,
        })
    }

    /// Recomputes the fe from the tree and compares it with the cached one.
    pub fn fe_chain(&self) -> Result<SymbolTensor> {
        let fresh = self.recompute()?;
        if fresh != self.fe {
            return Err(Error::InternalConsistency(format!(
                "cached fe disagrees with tree {}",
                self.to_text()
            )));
        }
        Ok(fresh)
    }

    fn recompute(&self) -> Result<SymbolTensor> {
        Ok(match &self.node {
            Node::Basis(b) => SymbolTensor::constant(b.clone()),
            Node::ZPrime { word, base } => SymbolTensor::pure_unchecked(word, base.clone()),
            Node::Z {
                word,
                base,
                reading,
            } => match reading {
                Some(r) => exceptional_fe(word, base, *r),
                None => SymbolTensor::pure_unchecked(word, base.clone()),
            },
            Node::Product(f, g) => {
                SymbolTensor::shuffle_product(&f.recompute()?, &g.recompute()?)?
            }
            Node::Primitive(f) => primitive_fe(&f.recompute()?, f.weight)?,
            Node::LinComb(terms) => {
                let mut out = SymbolTensor::zero(self.order - 1);
                for (c, f) in terms {
                    out.add_scaled(c, &f.recompute()?)?;
                }
                out
            }
        })
    }

    /// `F |_k (pi_{a_m} - 1)(gamma_3 - 1) ... (gamma_{t-1} - 1)` for a form
    /// assembled by the `Z'` construction. The result has `t - 3` slots and
    /// carries `kappa = int_i^{pi i} Z'_{-1; f_1}`.
    pub fn parabolic_chain(&self) -> Result<SymbolTensor> {
        if self.order < 3 {
            return Err(Error::Shape(format!(
                "parabolic chain needs order >= 3, got {}",
                self.order
            )));
        }
        match &self.node {
            Node::ZPrime { .. } | Node::Z { .. } => Ok(SymbolTensor::zero(self.order - 3)),
            Node::LinComb(terms) => {
                let mut out = SymbolTensor::zero(self.order - 3);
                for (c, f) in terms {
                    out.add_scaled(c, &f.parabolic_chain()?)?;
                }
                Ok(out)
            }
            Node::Product(p, g) => {
                let Node::Primitive(q) = p.node() else {
                    return Err(Error::Unsupported(
                        "parabolic chain of a product without a leading primitive".into(),
                    ));
                };
                if !matches!(g.node(), Node::Basis(_) | Node::ZPrime { .. }) {
                    return Err(Error::Unsupported(
                        "parabolic chain needs a basis or Z' cofactor".into(),
                    ));
                }
                let head = primitive_parabolic(q)?;
                SymbolTensor::shuffle_product(&head, &g.fe)
            }
            Node::Basis(_) | Node::Primitive(_) => Err(Error::Unsupported(format!(
                "{} is not a Z' construction",
                self.to_text()
            ))),
        }
    }

    /// Canonical prefix form, e.g. `(prod (prim (zp [-1] f1)) (leaf f1))`.
    pub fn to_text(&self) -> String {
        match &self.node {
            Node::Basis(b) => format!("(leaf {b})"),
            Node::ZPrime { word, base } => format!("(zp {word} {base})"),
            Node::Z {
                word,
                base,
                reading,
            } => match reading {
                None => format!("(z {word} {base})"),
                Some(ExceptionalReading::Literal) => format!("(z {word} {base} :literal)"),
                Some(ExceptionalReading::TailCorrected) => format!("(z {word} {base} :tail)"),
            },
            Node::Product(f, g) => format!("(prod {} {})", f.to_text(), g.to_text()),
            Node::Primitive(f) => format!("(prim {})", f.to_text()),
            Node::LinComb(terms) => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|(c, f)| format!("({c} {})", f.to_text()))
                    .collect();
                format!("(lin {})", parts.join(" "))
            }
        }
    }
}

impl fmt::Display for FormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

fn check_leaf(word: &Word, base: &BaseForm, k: u32) -> Result<()> {
    if !word.all_negative() {
        return Err(Error::InvalidLeaf(format!("word {word} has a positive letter")));
    }
    if base.weight() != k || base.is_one() {
        return Err(Error::InvalidLeaf(format!("base {base} is not of weight {k}")));
    }
    Ok(())
}

fn exceptional_fe(word: &Word, f: &BaseForm, reading: ExceptionalReading) -> SymbolTensor {
    let mut fe = SymbolTensor::pure_unchecked(word, f.clone());
    let letters = word.letters();
    let n = letters.len();
    let mut slots: Vec<SlotMonomial> = letters[..n - 1]
        .iter()
        .map(|&l| SlotMonomial::letter(l))
        .collect();
    match reading {
        ExceptionalReading::Literal => {
            slots.push(SlotMonomial::unit());
            let mut first = slots[0].letters().to_vec();
            first.push(letters[0]);
            slots[0] = SlotMonomial::from_letters(first);
        }
        ExceptionalReading::TailCorrected => {
            slots.push(SlotMonomial::letter(SignedLetter::raw(-1)));
        }
    }
    fe.add_term(
        TermKey {
            slots,
            base: BaseForm::f(1),
            kappa: 0,
        },
        scalar(-1),
    );
    fe
}

fn primitive_fe(fe: &SymbolTensor, weight: u32) -> Result<SymbolTensor> {
    if weight != 2 {
        return Err(Error::NotIntegrable(format!("weight {weight} form")));
    }
    fe.map_terms(fe.slots() + 1, |k, c| {
        let j = k.base.weight_two_cusp_index().ok_or_else(|| {
            Error::NotIntegrable(format!("base {} has an unbounded primitive", k.base))
        })?;
        let mut slots = k.slots.clone();
        slots.push(SlotMonomial::letter(SignedLetter::raw(j as i32)));
        Ok(Some((
            TermKey {
                slots,
                base: BaseForm::One,
                kappa: k.kappa,
            },
            c.clone(),
        )))
    })
}

fn lincomb_fe(terms: &[(Scalar, Arc<FormalForm>)]) -> Result<SymbolTensor> {
    let mut out = SymbolTensor::zero(terms[0].1.fe.slots());
    for (c, f) in terms {
        out.add_scaled(c, &f.fe)?;
    }
    Ok(out)
}

fn key_reducible(key: &TermKey, k: u32) -> bool {
    match key.word() {
        Some(word) if key.kappa == 0 && !key.base.is_one() => {
            exclusion_reason(&IndexEntry::new(word, key.base.clone(), k), k).is_some()
        }
        _ => false,
    }
}

/// `(int_i^z Q) | (pi - 1)(gamma_3 - 1)...` where `Q` has order `r`: a tensor
/// with `r - 2` slots and constant base.
fn primitive_parabolic(q: &FormalForm) -> Result<SymbolTensor> {
    match q.order {
        1 => Err(Error::Unsupported(
            "parabolic chain with a positive first letter".into(),
        )),
        2 => {
            let hit = matches!(
                q.node(),
                Node::ZPrime { word, base } if word.values() == [-1] && *base == BaseForm::f(1)
            );
            match q.node() {
                Node::ZPrime { .. } | Node::Z { .. } => {}
                _ => {
                    return Err(Error::Unsupported(format!(
                        "order-2 integrand {} is not a leaf",
                        q.to_text()
                    )))
                }
            }
            let mut out = SymbolTensor::zero(0);
            if hit {
                out.add_term(
                    TermKey {
                        slots: Vec::new(),
                        base: BaseForm::One,
                        kappa: 1,
                    },
                    scalar(1),
                );
            }
            Ok(out)
        }
        _ => primitive_fe(&q.parabolic_chain()?, q.weight),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i32]) -> Word {
        Word::new(v, 2).unwrap()
    }

    fn fa() -> BaseForm {
        BaseForm::parse("e2_inf").unwrap()
    }

    #[test]
    fn leaves() {
        let l = FormalForm::leaf_basis(BaseForm::One);
        assert_eq!((l.order(), l.weight()), (1, 0));
        let z = FormalForm::leaf_zprime(w(&[-1]), BaseForm::f(1), 2).unwrap();
        assert_eq!(z.order(), 2);
        assert_eq!(z.fe().to_canonical_text(), "1 * [-1] * f1\n");
        assert!(matches!(
            FormalForm::leaf_zprime(w(&[1]), BaseForm::f(1), 2),
            Err(Error::InvalidLeaf(_))
        ));
        assert!(matches!(
            FormalForm::leaf_z(w(&[-1]), BaseForm::f(1), 2),
            Err(Error::LeafNotConstructible(_))
        ));
        let plain = FormalForm::leaf_z(w(&[-1]), BaseForm::f(2), 2).unwrap();
        assert_eq!(plain.fe().len(), 1);
    }

    #[test]
    fn exceptional_leaf_readings() {
        let lit = FormalForm::leaf_z(w(&[-1, -2]), BaseForm::f(2), 2).unwrap();
        assert_eq!(
            lit.fe().to_canonical_text(),
            "1 * [-1|-2] * f2\n-1 * [-1.-1|()] * f1\n"
        );
        let tail = FormalForm::leaf_z_with(
            w(&[-1, -2]),
            BaseForm::f(2),
            2,
            ExceptionalReading::TailCorrected,
        )
        .unwrap();
        assert_eq!(
            tail.fe().to_canonical_text(),
            "1 * [-1|-2] * f2\n-1 * [-1|-1] * f1\n"
        );
    }

    #[test]
    fn primitive_slot_extension() {
        let p = FormalForm::primitive(Arc::new(FormalForm::leaf_basis(BaseForm::f(1)))).unwrap();
        assert_eq!(p.fe().to_canonical_text(), "1 * [1] * 1\n");
        let z = Arc::new(FormalForm::leaf_zprime(w(&[-1]), BaseForm::f(1), 2).unwrap());
        let pz = FormalForm::primitive(z).unwrap();
        assert_eq!((pz.order(), pz.weight()), (3, 0));
        assert_eq!(pz.fe().to_canonical_text(), "1 * [-1|1] * 1\n");
        let e = Arc::new(FormalForm::leaf_basis(fa()));
        assert!(matches!(FormalForm::primitive(e), Err(Error::NotIntegrable(_))));
        let four = Arc::new(FormalForm::leaf_basis(BaseForm::parse("s4_1").unwrap()));
        assert!(matches!(FormalForm::primitive(four), Err(Error::NotIntegrable(_))));
    }

    #[test]
    fn product_two_by_two() {
        let p = Arc::new(
            FormalForm::primitive(Arc::new(FormalForm::leaf_basis(BaseForm::f(1)))).unwrap(),
        );
        let g = Arc::new(FormalForm::leaf_zprime(w(&[-1]), fa(), 2).unwrap());
        let prod = FormalForm::product(p, g).unwrap();
        assert_eq!(prod.order(), 3);
        assert_eq!(
            prod.fe().to_canonical_text(),
            "1 * [-1|1] * e2_inf\n1 * [1|-1] * e2_inf\n"
        );
        assert_eq!(prod.to_text(), "(prod (prim (leaf f1)) (zp [-1] e2_inf))");
        prod.fe_chain().unwrap();
        let two = FormalForm::product(
            Arc::new(FormalForm::leaf_basis(BaseForm::f(1))),
            Arc::new(FormalForm::leaf_basis(fa())),
        );
        assert!(matches!(two, Err(Error::UnsupportedProduct(_))));
    }

    #[test]
    fn product_with_one_is_identity() {
        let g = Arc::new(FormalForm::leaf_zprime(w(&[-1, -1]), fa(), 2).unwrap());
        let one = Arc::new(FormalForm::leaf_basis(BaseForm::One));
        let prod = FormalForm::product(one, g.clone()).unwrap();
        assert_eq!(prod.fe(), g.fe());
    }

    #[test]
    fn lincomb_is_linear() {
        let a = Arc::new(FormalForm::leaf_zprime(w(&[-1]), fa(), 2).unwrap());
        let b = Arc::new(FormalForm::leaf_zprime(w(&[-2]), fa(), 2).unwrap());
        let l = FormalForm::lincomb(vec![(scalar(2), a.clone()), (scalar(-1), b)]).unwrap();
        assert_eq!(
            l.fe().to_canonical_text(),
            "-1 * [-2] * e2_inf\n2 * [-1] * e2_inf\n"
        );
        assert_eq!(l.fe_chain().unwrap(), *l.fe());
        let c = Arc::new(FormalForm::leaf_basis(fa()));
        assert!(FormalForm::lincomb(vec![(scalar(1), a), (scalar(1), c)]).is_err());
    }
}
