//! Universal polynomial Hamiltonian `H = k Σ_a p_a² + V(x)` with quartic `V`,
//! builders for the supported theories, Gauss-law generators, and the
//! qubit encoding of the potential.

mod gauss;
mod matrix_model;
mod orbifold;
mod poly;
mod scalar;

pub use gauss::{
    gauss_generators_mm, gauss_generators_orbifold, ComponentKind, GaussLabel,
    QuadraticXPOperator, XPTerm,
};
pub use matrix_model::{build_matrix_model, MatrixModelParams};
pub use orbifold::{build_orbifold_ym, OrbifoldParams};
pub use poly::{ComplexPoly, Monomial, Poly, PolyMatrix, RealPoly};
pub use scalar::{build_scalar_qft, lattice_coords, lattice_index, ScalarParams};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boson_encoding::{
    momentum_eigenvalues, momentum_squared_pauli_linear, position_pauli, shift_operator_pauli,
    Boundary, DigitizationConfig, KineticRealization, MomentumConvention, PauliString, PauliSum,
};
use crate::error::{invalid, Error, Result};
use crate::DROP_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Re,
    Im,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BosonLabel {
    Oscillator,
    Site { site: Vec<usize> },
    Adjoint { matrix: usize, component: usize },
    Entry { matrix: usize, row: usize, col: usize, part: Part },
    Link { site: Vec<usize>, dir: usize, row: usize, col: usize, part: Part },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BosonRegistry {
    pub labels: Vec<BosonLabel>,
}

impl BosonRegistry {
    pub fn new(labels: Vec<BosonLabel>) -> Self {
        debug_assert_eq!(
            labels.iter().collect::<std::collections::BTreeSet<_>>().len(),
            labels.len()
        );
        Self { labels }
    }

    pub fn count(&self) -> usize {
        self.labels.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyHamiltonian {
    pub bosons: BosonRegistry,
    pub kinetic_prefactor: f64,
    potential: BTreeMap<Monomial, f64>,
    pub constant: f64,
}

impl PolyHamiltonian {
    pub fn new(bosons: BosonRegistry) -> Self {
        Self {
            bosons,
            kinetic_prefactor: 0.5,
            potential: BTreeMap::new(),
            constant: 0.0,
        }
    }

    pub fn n_bosons(&self) -> usize {
        self.bosons.count()
    }

    /// Adds `c · m` to the potential; the unit monomial goes to `constant`.
    pub fn add_monomial(&mut self, m: Monomial, c: f64) -> Result<()> {
        if m.degree() > 4 {
            return Err(Error::UnsupportedDegree(m.degree()));
        }
        if let Some(&(a, _)) = m.factors().last() {
            if a >= self.n_bosons() {
                return Err(invalid(format!("boson {a} out of range")));
            }
        }
        if m.is_one() {
            self.constant += c;
        } else {
            *self.potential.entry(m).or_insert(0.0) += c;
        }
        Ok(())
    }

    pub fn add_poly(&mut self, p: &RealPoly, scale: f64) -> Result<()> {
        for (m, &c) in &p.terms {
            self.add_monomial(m.clone(), c * scale)?;
        }
        Ok(())
    }

    /// Drops monomials whose merged coefficient is below the drop tolerance.
    pub fn prune(&mut self) {
        self.potential.retain(|_, c| c.abs() > DROP_TOL);
    }

    pub fn potential(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.potential.iter().map(|(m, &c)| (m, c))
    }

    pub fn monomial_count(&self) -> usize {
        self.potential.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> f64 {
        self.potential.get(m).copied().unwrap_or(0.0)
    }

    /// Number of distinct monomials of the given degree.
    pub fn count_degree(&self, degree: u32) -> usize {
        self.potential.keys().filter(|m| m.degree() == degree).count()
    }

    /// `V(x) + constant` at a classical configuration.
    pub fn evaluate_potential(&self, x: &[f64]) -> f64 {
        self.constant + self.potential().map(|(m, c)| c * m.evaluate(x)).sum::<f64>()
    }
}

/// `p²/2 + x⁴/4`.
pub fn build_anharmonic_oscillator() -> PolyHamiltonian {
    let mut h = PolyHamiltonian::new(BosonRegistry::new(vec![BosonLabel::Oscillator]));
    h.add_monomial(Monomial::pow(0, 4), 0.25)
        .expect("single boson quartic is valid");
    h
}

/// How the kinetic term of every boson is realized on qubits.
#[derive(Debug, Clone, PartialEq)]
pub enum KineticSpec {
    /// p̂² as ZZ terms (plus constant) on the momentum register of one boson.
    MomentumQft { p_squared: PauliSum },
    /// Sine-convention eigenvalues; simulator only, not compilable.
    SineDiagonal { eigenvalues: Vec<f64> },
    /// `p̂² = (2 − Ŝ − Ŝ†)/δ_x²` with the periodic shift as X/Y strings.
    CoordinateShift { shift: PauliSum, delta_x: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedHamiltonian {
    pub cfg: DigitizationConfig,
    pub n_bosons: usize,
    pub n_qubits: usize,
    pub kinetic_prefactor: f64,
    /// Z-only potential including the Hamiltonian constant.
    pub potential: PauliSum,
    pub kinetic: KineticSpec,
}

impl EncodedHamiltonian {
    /// Qubits of boson `b`, least significant first.
    pub fn boson_qubits(&self, b: usize) -> std::ops::Range<usize> {
        let q = self.cfg.qubits_per_boson;
        b * q..(b + 1) * q
    }
}

/// Local Z-string expansion of x^k on one boson: (local qubit subset, coefficient).
fn local_power_terms(x: &PauliSum, k: u8) -> Result<Vec<(Vec<usize>, f64)>> {
    let mut acc = PauliSum::constant(x.n_qubits, 1.0);
    for _ in 0..k {
        acc = acc.mul(x)?;
    }
    let mut out: Vec<(Vec<usize>, f64)> = Vec::with_capacity(acc.len() + 1);
    if acc.constant_offset != 0.0 {
        out.push((Vec::new(), acc.constant_offset));
    }
    out.extend(acc.terms().map(|(s, c)| (s.qubits(), c)));
    Ok(out)
}

pub fn pauli_encode(h: &PolyHamiltonian, cfg: &DigitizationConfig) -> Result<EncodedHamiltonian> {
    cfg.validate()?;
    let q = cfg.qubits_per_boson;
    let n_bosons = h.n_bosons();
    let n_qubits = n_bosons * q;
    let x = position_pauli(cfg)?;
    let powers: Vec<Vec<(Vec<usize>, f64)>> = (1..=4u8)
        .map(|k| local_power_terms(&x, k))
        .collect::<Result<_>>()?;

    let mut potential = PauliSum::constant(n_qubits, h.constant);
    for (m, c) in h.potential() {
        if m.degree() > 4 {
            return Err(Error::UnsupportedDegree(m.degree()));
        }
        // Bosons occupy disjoint ascending qubit blocks, so the tensor
        // product of local expansions is a concatenation of sorted subsets.
        let mut partial: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), c)];
        for &(a, k) in m.factors() {
            let local = &powers[k as usize - 1];
            let mut next = Vec::with_capacity(partial.len() * local.len());
            for (qs, pc) in &partial {
                for (lq, lc) in local {
                    let mut s = qs.clone();
                    s.extend(lq.iter().map(|&i| a * q + i));
                    next.push((s, pc * lc));
                }
            }
            partial = next;
        }
        for (qs, coef) in partial {
            potential.add_term(PauliString::z(&qs)?, coef)?;
        }
    }
    potential.prune();

    let kinetic = match cfg.kinetic {
        KineticRealization::MomentumQft => match cfg.momentum {
            MomentumConvention::LinearSymmetric => KineticSpec::MomentumQft {
                p_squared: momentum_squared_pauli_linear(cfg)?,
            },
            MomentumConvention::Sine => KineticSpec::SineDiagonal {
                eigenvalues: momentum_eigenvalues(cfg)?,
            },
        },
        KineticRealization::CoordinateShift => {
            if cfg.boundary != Boundary::Periodic {
                return Err(Error::UnsupportedConvention(
                    "coordinate kinetic term requires periodic boundary".into(),
                ));
            }
            KineticSpec::CoordinateShift {
                shift: shift_operator_pauli(q, Boundary::Periodic)?,
                delta_x: cfg.delta_x(),
            }
        }
    };

    Ok(EncodedHamiltonian {
        cfg: *cfg,
        n_bosons,
        n_qubits,
        kinetic_prefactor: h.kinetic_prefactor,
        potential,
        kinetic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_contains_full_z_string() {
        let h = build_anharmonic_oscillator();
        let enc = pauli_encode(&h, &DigitizationConfig::new(4, 3.0)).unwrap();
        let s = PauliString::z(&[0, 1, 2, 3]).unwrap();
        assert!(enc.potential.coefficient(&s).abs() > 0.0);
        assert!(enc.potential.is_z_only());
        assert!(enc.potential.terms().all(|(s, _)| s.weight() % 2 == 0));
    }

    #[test]
    fn bilinear_single_qubit() {
        let mut h = PolyHamiltonian::new(BosonRegistry::new(vec![
            BosonLabel::Site { site: vec![0] },
            BosonLabel::Site { site: vec![1] },
        ]));
        h.add_monomial(Monomial::from_factors(&[(0, 1), (1, 1)]), 1.0).unwrap();
        let cfg = DigitizationConfig::new(1, 1.5);
        let enc = pauli_encode(&h, &cfg).unwrap();
        assert_eq!(enc.potential.len(), 1);
        let c = enc.potential.coefficient(&PauliString::z(&[0, 1]).unwrap());
        assert!((c - cfg.delta_x().powi(2) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn degree_guard() {
        let mut h = build_anharmonic_oscillator();
        assert_eq!(
            h.add_monomial(Monomial::pow(0, 5), 1.0),
            Err(Error::UnsupportedDegree(5))
        );
    }

    #[test]
    fn constant_is_tracked() {
        let mut h = build_anharmonic_oscillator();
        h.add_monomial(Monomial::one(), 2.5).unwrap();
        let enc = pauli_encode(&h, &DigitizationConfig::new(2, 1.0)).unwrap();
        let grid = DigitizationConfig::new(2, 1.0).grid();
        let mean: f64 = grid.iter().map(|x| x.powi(4) / 4.0).sum::<f64>() / 4.0;
        assert!((enc.potential.constant_offset - 2.5 - mean).abs() < 1e-14);
    }
}
