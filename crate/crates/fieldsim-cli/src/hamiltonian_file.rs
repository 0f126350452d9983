use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use fieldsim::hamiltonian_core::{BosonLabel, BosonRegistry, Monomial, PolyHamiltonian};
use fieldsim::resource_estimator::Theory;

pub const SCHEMA: &str = "fieldsim.hamiltonian/1";

#[derive(Debug, Serialize, Deserialize)]
pub struct MonomialEntry {
    /// `(boson, power)` pairs sorted by boson.
    pub factors: Vec<(usize, u8)>,
    pub coef: f64,
}

/// On-disk form of a [`PolyHamiltonian`]. Monomials are in sorted order.
#[derive(Debug, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub schema: String,
    pub source: serde_json::Value,
    pub n_bosons: usize,
    pub bosons: Vec<BosonLabel>,
    pub kinetic_prefactor: f64,
    pub constant: f64,
    pub monomials: Vec<MonomialEntry>,
}

impl HamiltonianFile {
    pub fn new(theory: &Theory, h: &PolyHamiltonian) -> Self {
        Self {
            schema: SCHEMA.into(),
            source: serde_json::to_value(theory).expect("theory serializes"),
            n_bosons: h.n_bosons(),
            bosons: h.bosons.labels.clone(),
            kinetic_prefactor: h.kinetic_prefactor,
            constant: h.constant,
            monomials: h
                .potential()
                .map(|(m, c)| MonomialEntry { factors: m.factors().to_vec(), coef: c })
                .collect(),
        }
    }

    pub fn to_hamiltonian(&self) -> Result<PolyHamiltonian, String> {
        if self.schema != SCHEMA {
            return Err(format!("unsupported schema {:?}, expected {SCHEMA:?}", self.schema));
        }
        if self.bosons.len() != self.n_bosons {
            return Err(format!("n_bosons = {} but {} boson labels", self.n_bosons, self.bosons.len()));
        }
        if self.bosons.iter().collect::<BTreeSet<_>>().len() != self.bosons.len() {
            return Err("duplicate boson labels".into());
        }
        let mut h = PolyHamiltonian::new(BosonRegistry::new(self.bosons.clone()));
        h.kinetic_prefactor = self.kinetic_prefactor;
        h.constant = self.constant;
        for m in &self.monomials {
            if m.factors.iter().any(|&(_, k)| k == 0) {
                return Err("monomial factor with power 0".into());
            }
            h.add_monomial(Monomial::from_factors(&m.factors), m.coef).map_err(|e| e.to_string())?;
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fieldsim::hamiltonian_core::ScalarParams;

    #[test]
    fn roundtrip_preserves_hamiltonian() {
        let t = Theory::Scalar(ScalarParams { l: 3, d: 1, m2: 0.7, lambda: 0.3 });
        let h = t.build().unwrap();
        let f = HamiltonianFile::new(&t, &h);
        let text = serde_json::to_string(&f).unwrap();
        let back: HamiltonianFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_hamiltonian().unwrap(), h);
    }

    #[test]
    fn rejects_bad_files() {
        let t = Theory::Anharmonic;
        let mut f = HamiltonianFile::new(&t, &t.build().unwrap());
        f.monomials.push(MonomialEntry { factors: vec![(3, 2)], coef: 1.0 });
        assert!(f.to_hamiltonian().is_err());
        f.monomials.pop();
        f.schema = "other".into();
        assert!(f.to_hamiltonian().is_err());
    }
}
