//! JSON schemas for algebras, automorphisms and 4-symmetric specs.
//!
//! * `algebra.json`: `{ "n", "basis": [[row-major]], "translation_flags": [bool] }`
//! * automorphism: `{ "matrix": [[...]], "order": 2 | 4 }`
//! * `spec.json`: an algebra plus `{ "tau", "J0_m", "family", "params" }` and an optional
//!   `"tau_group"` (`n x n` rows) when `tau = Int(t)`.

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourbundle::{Family, FourSymmetricSpec};
use crate::liecore::{make_algebra, LieAlgebraBasis, LinearAutomorphism};
use crate::scalar::{lit, to_f64, tol, Real};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub n: usize,
    pub basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub translation_flags: Option<Vec<bool>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomorphismJson {
    pub matrix: Vec<Vec<f64>>,
    pub order: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpecJson {
    #[serde(flatten)]
    pub algebra: AlgebraJson,
    pub tau: AutomorphismJson,
    #[serde(rename = "J0_m")]
    pub j0_m: Vec<Vec<f64>>,
    pub family: Family,
    #[serde(default)]
    pub params: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_group: Option<Vec<Vec<f64>>>,
}

pub fn rows<T: Real>(m: &DMatrix<T>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| to_f64(m[(r, c)])).collect()).collect()
}

pub fn from_rows<T: Real>(rows: &[Vec<f64>]) -> Result<DMatrix<T>> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    if nr == 0 || rows.iter().any(|r| r.len() != nc) {
        return Err(Error::Format("matrix rows must be non-empty and of equal length".into()));
    }
    Ok(DMatrix::from_fn(nr, nc, |r, c| lit(rows[r][c])))
}

impl AlgebraJson {
    pub fn from_algebra<T: Real>(alg: &LieAlgebraBasis<T>) -> Self {
        Self {
            n: alg.n,
            basis: alg.basis.iter().map(|b| b.transpose().as_slice().iter().map(|&x| to_f64(x)).collect()).collect(),
            translation_flags: if alg.translation.iter().any(|&t| t) { Some(alg.translation.clone()) } else { None },
        }
    }

    pub fn build<T: Real>(&self) -> Result<LieAlgebraBasis<T>> {
        let mut basis = Vec::with_capacity(self.basis.len());
        for (k, b) in self.basis.iter().enumerate() {
            if b.len() != self.n * self.n {
                return Err(Error::Format(format!("basis element {k} has {} entries, expected {}", b.len(), self.n * self.n)));
            }
            basis.push(DMatrix::from_row_slice(self.n, self.n, &b.iter().map(|&x| lit::<T>(x)).collect::<Vec<_>>()));
        }
        make_algebra(self.n, basis, self.translation_flags.clone(), tol::<T>(1e-9))
    }
}

impl AutomorphismJson {
    pub fn from_automorphism<T: Real>(t: &LinearAutomorphism<T>) -> Self {
        Self { matrix: rows(&t.matrix), order: t.order }
    }

    pub fn build<T: Real>(&self, alg: &LieAlgebraBasis<T>) -> Result<LinearAutomorphism<T>> {
        if self.order != 2 && self.order != 4 {
            return Err(Error::Format(format!("order must be 2 or 4, got {}", self.order)));
        }
        LinearAutomorphism::new(alg, from_rows(&self.matrix)?, self.order)
    }
}

impl SpecJson {
    pub fn from_spec<T: Real>(spec: &FourSymmetricSpec<T>) -> Self {
        Self {
            algebra: AlgebraJson::from_algebra(&spec.algebra),
            tau: AutomorphismJson::from_automorphism(&spec.grading.tau),
            j0_m: rows(&spec.j0_m),
            family: spec.family,
            params: spec.params.clone(),
            tau_group: spec.tau_group.as_ref().map(rows),
        }
    }

    /// Rebuilds the spec and checks that the recomputed `J0_m` matches the stored one.
    pub fn build<T: Real>(&self) -> Result<FourSymmetricSpec<T>> {
        let alg = self.algebra.build::<T>()?;
        let tau = self.tau.build(&alg)?;
        let tg = self.tau_group.as_ref().map(|r| from_rows::<T>(r)).transpose()?;
        let spec = FourSymmetricSpec::new(alg, tau, tg, self.family, self.params.clone())?;
        let stored = from_rows::<T>(&self.j0_m)?;
        if stored.shape() != spec.j0_m.shape() || to_f64((&stored - &spec.j0_m).amax()) > 1e-8 {
            return Err(Error::Format("J0_m does not match the complex structure induced by tau".into()));
        }
        Ok(spec)
    }
}

fn read_json<D: for<'de> Deserialize<'de>>(path: &Path) -> Result<D> {
    let s = std::fs::read_to_string(path)?;
    serde_json::from_str(&s).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

pub fn load_algebra<T: Real>(path: &Path) -> Result<LieAlgebraBasis<T>> {
    read_json::<AlgebraJson>(path)?.build()
}

pub fn load_automorphism<T: Real>(path: &Path, alg: &LieAlgebraBasis<T>) -> Result<LinearAutomorphism<T>> {
    read_json::<AutomorphismJson>(path)?.build(alg)
}

pub fn load_spec<T: Real>(path: &Path) -> Result<FourSymmetricSpec<T>> {
    read_json::<SpecJson>(path)?.build()
}

pub fn save_spec<T: Real>(path: &Path, spec: &FourSymmetricSpec<T>) -> Result<()> {
    let s = serde_json::to_string_pretty(&SpecJson::from_spec(spec)).map_err(|e| Error::Format(e.to_string()))?;
    std::fs::write(path, s)?;
    Ok(())
}
