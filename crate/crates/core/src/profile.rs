//! Group profiles: the combinatorial shadow of a concrete group (genus, cusps,
//! and the ordered bases of `M_k` for each available weight).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};

/// A basis element of some `M_k`, or the constant function 1.
///
/// Weight-2 cusp forms `f_1..f_g` are the forms whose periods the word
/// letters refer to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseForm {
    Cusp { weight: u32, index: u32 },
    Eisenstein { weight: u32, cusp: String },
    One,
}

impl BaseForm {
    /// The weight-2 cusp form `f_j`.
    pub fn f(j: u32) -> Self {
        BaseForm::Cusp { weight: 2, index: j }
    }

    pub fn weight(&self) -> u32 {
        match self {
            BaseForm::Cusp { weight, .. } | BaseForm::Eisenstein { weight, .. } => *weight,
            BaseForm::One => 0,
        }
    }

    pub fn is_cuspidal(&self) -> bool {
        matches!(self, BaseForm::Cusp { .. })
    }

    pub fn is_one(&self) -> bool {
        matches!(self, BaseForm::One)
    }

    /// Index `j` when this is the weight-2 cusp form `f_j`.
    pub fn weight_two_cusp_index(&self) -> Option<u32> {
        match self {
            BaseForm::Cusp { weight: 2, index } => Some(*index),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad base form `{s}`"));
        if s == "1" {
            return Ok(BaseForm::One);
        }
        if let Some(rest) = s.strip_prefix('f') {
            let index = rest.parse().map_err(|_| bad())?;
            return Ok(BaseForm::f(index));
        }
        if let Some(rest) = s.strip_prefix('s') {
            let (w, j) = rest.split_once('_').ok_or_else(bad)?;
            return Ok(BaseForm::Cusp {
                weight: w.parse().map_err(|_| bad())?,
                index: j.parse().map_err(|_| bad())?,
            });
        }
        if let Some(rest) = s.strip_prefix('e') {
            let (w, c) = rest.split_once('_').ok_or_else(bad)?;
            return Ok(BaseForm::Eisenstein {
                weight: w.parse().map_err(|_| bad())?,
                cusp: c.to_string(),
            });
        }
        Err(bad())
    }
}

impl fmt::Display for BaseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseForm::Cusp { weight: 2, index } => write!(f, "f{index}"),
            BaseForm::Cusp { weight, index } => write!(f, "s{weight}_{index}"),
            BaseForm::Eisenstein { weight, cusp } => write!(f, "e{weight}_{cusp}"),
            BaseForm::One => write!(f, "1"),
        }
    }
}

/// Genus, cusps and cusp-form dimensions of a group with `m >= 2` cusps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupProfile {
    pub genus: u32,
    /// Cusp labels; the last one plays the role of the distinguished cusp `a_m`.
    pub cusp_labels: Vec<String>,
    /// `dim S_k` for every available weight. Weight 2 always maps to `genus`.
    pub cusp_dims: BTreeMap<u32, u32>,
}

#[derive(Deserialize)]
struct ProfileFixture {
    genus: u32,
    cusps: Vec<CuspLabel>,
    cusp_form_dims: BTreeMap<String, u32>,
}

#[derive(Deserialize)]
struct CuspLabel {
    label: String,
}

impl GroupProfile {
    /// A synthetic profile for a group without elliptic points, using
    /// `dim S_k = (k-1)(g-1) + (k/2-1) m` for `k > 2`.
    pub fn synthetic(genus: u32, cusps: u32, weights: &[u32]) -> Result<Self> {
        if cusps < 2 {
            return Err(Error::InvalidArguments(format!(
                "need at least two cusps, got {cusps}"
            )));
        }
        if genus == 0 {
            return Err(Error::InvalidArguments("genus must be positive".into()));
        }
        let cusp_labels = if cusps == 2 {
            vec!["inf".to_string(), "0".to_string()]
        } else {
            (1..=cusps).map(|i| format!("c{i}")).collect()
        };
        let mut cusp_dims = BTreeMap::new();
        for &k in weights {
            if k < 2 || k % 2 != 0 {
                return Err(Error::UnsupportedWeight(k));
            }
            let dim = if k == 2 {
                genus
            } else {
                let d = (k as i64 - 1) * (genus as i64 - 1) + (k as i64 / 2 - 1) * cusps as i64;
                d.max(0) as u32
            };
            cusp_dims.insert(k, dim);
        }
        cusp_dims.insert(2, genus);
        Ok(GroupProfile {
            genus,
            cusp_labels,
            cusp_dims,
        })
    }

    /// Reads the profile fields of a group fixture (see `fixtures/`).
    pub fn from_fixture_str(s: &str) -> Result<Self> {
        let fx: ProfileFixture =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if fx.cusps.len() < 2 {
            return Err(Error::CorruptFixture("fewer than two cusps".into()));
        }
        let mut cusp_dims = BTreeMap::new();
        for (k, d) in fx.cusp_form_dims {
            let k: u32 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad weight key `{k}`")))?;
            cusp_dims.insert(k, d);
        }
        if cusp_dims.get(&2).copied().unwrap_or(fx.genus) != fx.genus {
            return Err(Error::CorruptFixture(
                "dim S_2 disagrees with the genus".into(),
            ));
        }
        cusp_dims.insert(2, fx.genus);
        Ok(GroupProfile {
            genus: fx.genus,
            cusp_labels: fx.cusps.into_iter().map(|c| c.label).collect(),
            cusp_dims,
        })
    }

    pub fn from_fixture(path: &Path) -> Result<Self> {
        Self::from_fixture_str(&std::fs::read_to_string(path)?)
    }

    pub fn cusp_count(&self) -> u32 {
        self.cusp_labels.len() as u32
    }

    pub fn weights_available(&self) -> Vec<u32> {
        self.cusp_dims.keys().copied().collect()
    }

    pub fn distinguished_cusp(&self) -> &str {
        self.cusp_labels.last().expect("m >= 2")
    }

    /// Ordered basis of `M_k`: cusp forms first, then Eisenstein series.
    ///
    /// For `k = 2` the Eisenstein part is indexed by every cusp except the
    /// distinguished one; for `k > 2` by all cusps.
    pub fn basis(&self, k: u32) -> Result<Vec<BaseForm>> {
        let dim = *self.cusp_dims.get(&k).ok_or(Error::UnsupportedWeight(k))?;
        let mut out: Vec<BaseForm> = (1..=dim)
            .map(|index| BaseForm::Cusp { weight: k, index })
            .collect();
        let eis = if k == 2 {
            &self.cusp_labels[..self.cusp_labels.len() - 1]
        } else {
            &self.cusp_labels[..]
        };
        out.extend(eis.iter().map(|c| BaseForm::Eisenstein {
            weight: k,
            cusp: c.clone(),
        }));
        Ok(out)
    }

    pub fn dim_m(&self, k: u32) -> Result<usize> {
        Ok(self.basis(k)?.len())
    }

    pub fn contains_base(&self, k: u32, base: &BaseForm) -> bool {
        match base {
            BaseForm::Cusp { weight, index } => {
                *weight == k && *index >= 1 && *index <= self.cusp_dims.get(&k).copied().unwrap_or(0)
            }
            BaseForm::Eisenstein { weight, cusp } => {
                if *weight != k || !self.cusp_dims.contains_key(&k) {
                    return false;
                }
                let pos = self.cusp_labels.iter().position(|c| c == cusp);
                match pos {
                    Some(p) if k == 2 => p + 1 < self.cusp_labels.len(),
                    Some(_) => true,
                    None => false,
                }
            }
            BaseForm::One => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_two_basis_drops_distinguished_cusp() {
        let p = GroupProfile::synthetic(1, 2, &[2, 4]).unwrap();
        let b2 = p.basis(2).unwrap();
        assert_eq!(b2.len(), 2);
        assert_eq!(b2[0], BaseForm::f(1));
        assert_eq!(b2[1].to_string(), "e2_inf");
        // level-11 shape: dim S_4 = 2 plus both cusps
        assert_eq!(p.dim_m(4).unwrap(), 4);
        assert!(p.contains_base(2, &BaseForm::parse("e2_inf").unwrap()));
        assert!(!p.contains_base(2, &BaseForm::parse("e2_0").unwrap()));
        assert!(p.contains_base(4, &BaseForm::parse("e4_0").unwrap()));
    }

    #[test]
    fn rejects_single_cusp() {
        assert!(GroupProfile::synthetic(1, 1, &[2]).is_err());
        assert_eq!(
            GroupProfile::synthetic(1, 2, &[3]),
            Err(Error::UnsupportedWeight(3))
        );
    }

    #[test]
    fn base_form_text_round_trips() {
        for s in ["f1", "s4_2", "e2_inf", "e4_0", "1"] {
            assert_eq!(BaseForm::parse(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn reads_fixture_profile() {
        let json = r#"{"genus": 1, "cusps": [{"label": "inf"}, {"label": "0"}],
                       "cusp_form_dims": {"2": 1, "4": 2}}"#;
        let p = GroupProfile::from_fixture_str(json).unwrap();
        assert_eq!(p, GroupProfile::synthetic(1, 2, &[2, 4]).unwrap());
    }
}
