//! Concrete group data for `Gamma_0(p)`: generators, cusps, scaling matrices
//! and parabolic generators, loaded from a fixture and checked on load.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use super::qseries::QSeries;
use crate::error::{Error, Result};
use crate::profile::GroupProfile;

/// Integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1, 0, 0, 1);
    pub const S: Mat2 = Mat2::new(0, -1, 1, 0);
    pub const T: Mat2 = Mat2::new(1, 1, 0, 1);

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_slice(v: &[i64]) -> Result<Self> {
        match v {
            [a, b, c, d] => Ok(Mat2::new(*a, *b, *c, *d)),
            _ => Err(Error::CorruptFixture(format!(
                "matrix needs 4 entries, got {}",
                v.len()
            ))),
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Equality in `PSL_2`.
    pub fn eq_projective(&self, o: &Mat2) -> bool {
        self == o || *self == o.neg()
    }

    pub fn act(&self, z: Complex64) -> Complex64 {
        (z * self.a as f64 + self.b as f64) / (z * self.c as f64 + self.d as f64)
    }

    /// `cz + d`.
    pub fn j(&self, z: Complex64) -> Complex64 {
        z * self.c as f64 + self.d as f64
    }

    pub fn in_gamma0(&self, level: i64) -> bool {
        self.det() == 1 && self.c % level == 0
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}; {}, {}]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cusp {
    pub label: String,
    pub representative: String,
    pub width: i64,
    /// `sigma = scaling * diag(sqrt(width), 1 / sqrt(width))`.
    pub scaling: Mat2,
    pub parabolic: Mat2,
    /// Signed 1-based generator indices whose product is `parabolic`.
    pub parabolic_word: Vec<i64>,
}

impl Cusp {
    pub fn sigma(&self) -> [f64; 4] {
        let w = (self.width as f64).sqrt();
        let s = self.scaling;
        [s.a as f64 * w, s.b as f64 / w, s.c as f64 * w, s.d as f64 / w]
    }
}

#[derive(Clone, Debug)]
pub struct Newform {
    pub label: String,
    /// Eigenvalue of `f(-1/(pz)) = eta p^{k/2} z^k f(z)`.
    pub atkin_lehner: i32,
    pub series: QSeries,
}

#[derive(Clone, Debug)]
pub struct GroupData {
    pub label: String,
    pub level: i64,
    pub genus: u32,
    pub cusps: Vec<Cusp>,
    pub generators: Vec<Mat2>,
    pub forms: Vec<Newform>,
    pub profile: GroupProfile,
}

#[derive(Deserialize)]
struct RawGroup {
    format: String,
    label: String,
    level: i64,
    genus: u32,
    cusps: Vec<RawCusp>,
    generators: Vec<Vec<i64>>,
    forms: Vec<RawForm>,
}

#[derive(Deserialize)]
struct RawCusp {
    label: String,
    representative: String,
    width: i64,
    scaling: Vec<i64>,
    parabolic: Vec<i64>,
    parabolic_word: Vec<i64>,
}

#[derive(Deserialize)]
struct RawForm {
    label: String,
    file: String,
    atkin_lehner: i32,
}

impl GroupData {
    /// Parses a group fixture; coefficient files are resolved against `dir`.
    pub fn parse(text: &str, dir: &Path) -> Result<GroupData> {
        let raw: RawGroup = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.format != "hoforms-group/1" {
            return Err(Error::Parse(format!("unknown group format `{}`", raw.format)));
        }
        let profile = GroupProfile::from_fixture_str(text)?;
        let generators = raw
            .generators
            .iter()
            .map(|g| Mat2::from_slice(g))
            .collect::<Result<Vec<_>>>()?;
        let cusps = raw
            .cusps
            .into_iter()
            .map(|c| {
                Ok(Cusp {
                    label: c.label,
                    representative: c.representative,
                    width: c.width,
                    scaling: Mat2::from_slice(&c.scaling)?,
                    parabolic: Mat2::from_slice(&c.parabolic)?,
                    parabolic_word: c.parabolic_word,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut forms = Vec::new();
        for f in raw.forms {
            let path: PathBuf = dir.join(&f.file);
            let (header, series) = QSeries::load(&path)?;
            if header.level != raw.level as u64 {
                return Err(Error::CorruptFixture(format!(
                    "{} has level {}, group has {}",
                    f.file, header.level, raw.level
                )));
            }
            if f.atkin_lehner.abs() != 1 {
                return Err(Error::CorruptFixture(format!(
                    "{}: Atkin-Lehner sign must be +-1",
                    f.label
                )));
            }
            forms.push(Newform {
                label: f.label,
                atkin_lehner: f.atkin_lehner,
                series,
            });
        }
        let g = GroupData {
            label: raw.label,
            level: raw.level,
            genus: raw.genus,
            cusps,
            generators,
            forms,
            profile,
        };
        g.verify()?;
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<GroupData> {
        let text = std::fs::read_to_string(path)?;
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, dir)
    }

    fn verify(&self) -> Result<()> {
        let bad = |m: String| Err(Error::CorruptFixture(m));
        if self.cusps.len() < 2 {
            return bad("fewer than two cusps".into());
        }
        if self.forms.len() != self.genus as usize {
            return bad(format!(
                "{} newforms for genus {}",
                self.forms.len(),
                self.genus
            ));
        }
        for g in &self.generators {
            if !g.in_gamma0(self.level) {
                return bad(format!("generator {g} is not in Gamma0({})", self.level));
            }
        }
        for c in &self.cusps {
            if c.scaling.det() != 1 || c.width <= 0 {
                return bad(format!("cusp {}: bad scaling data", c.label));
            }
            // sigma^{-1} pi sigma = T  <=>  A^{-1} pi A = [[1, w], [0, 1]]
            let conj = c.scaling.inv().mul(&c.parabolic).mul(&c.scaling);
            if !conj.eq_projective(&Mat2::new(1, c.width, 0, 1)) {
                return bad(format!(
                    "cusp {}: A^-1 pi A = {conj}, expected translation by {}",
                    c.label, c.width
                ));
            }
            let word = self.eval_word(&c.parabolic_word)?;
            if !word.eq_projective(&c.parabolic) {
                return bad(format!(
                    "cusp {}: parabolic word evaluates to {word}, not {}",
                    c.label, c.parabolic
                ));
            }
        }
        Ok(())
    }

    /// Product of generators for signed 1-based indices.
    pub fn eval_word(&self, word: &[i64]) -> Result<Mat2> {
        let mut m = Mat2::IDENTITY;
        for &w in word {
            let g = self
                .generators
                .get((w.unsigned_abs() as usize).wrapping_sub(1))
                .ok_or_else(|| Error::CorruptFixture(format!("generator index {w} out of range")))?;
            let h = if w > 0 { *g } else { g.inv() };
            m = m.mul(&h);
        }
        Ok(m)
    }

    pub fn cusp(&self, label: &str) -> Result<&Cusp> {
        self.cusps
            .iter()
            .find(|c| c.label == label)
            .ok_or_else(|| Error::InvalidArguments(format!("unknown cusp `{label}`")))
    }

    pub fn form(&self, j: usize) -> Result<&Newform> {
        self.forms
            .get(j.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArguments(format!("no form f{j}")))
    }

    pub fn check_member(&self, m: &Mat2) -> Result<()> {
        if m.in_gamma0(self.level) {
            Ok(())
        } else {
            Err(Error::NotInGroup(format!("{m} for level {}", self.level)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_algebra() {
        let g = Mat2::new(2, 1, -11, -5);
        assert_eq!(g.det(), 1);
        assert_eq!(g.mul(&g.inv()), Mat2::IDENTITY);
        assert!(g.in_gamma0(11));
        assert!(!Mat2::S.in_gamma0(11));
        let z = Complex64::new(0.2, 0.7);
        let w = g.act(g.inv().act(z));
        assert!((w - z).norm() < 1e-14);
        assert!(Mat2::S.mul(&Mat2::S).eq_projective(&Mat2::IDENTITY));
    }
}
