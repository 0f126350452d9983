use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{pauli_sum_matrix, StateVector};
use crate::boson_encoding::{
    kinetic_coordinate_matrix, momentum_eigenvalues, Boundary, DigitizationConfig, KineticRealization,
    MomentumConvention,
};
use crate::error::{guard, Error, Result};
use crate::hamiltonian_core::{EncodedHamiltonian, KineticSpec, PolyHamiltonian};

pub const MAX_DENSE_QUBITS: usize = 14;

fn cz(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `F_{nm} = e^{2πi(m+½)(n+½)/Λ}/√Λ`.
pub fn modified_dft(q: usize) -> DMatrix<Complex64> {
    let l = 1usize << q;
    let s = 1.0 / (l as f64).sqrt();
    DMatrix::from_fn(l, l, |n, m| {
        Complex64::from_polar(s, 2.0 * PI * (m as f64 + 0.5) * (n as f64 + 0.5) / l as f64)
    })
}

fn plain_dft(l: usize) -> DMatrix<Complex64> {
    let s = 1.0 / (l as f64).sqrt();
    DMatrix::from_fn(l, l, |n, k| Complex64::from_polar(s, 2.0 * PI * (k * n) as f64 / l as f64))
}

/// `V diag(f(λ)) V†` for unitary V with columns as eigenvectors.
fn spectral(v: &DMatrix<Complex64>, vals: &[f64]) -> DMatrix<Complex64> {
    let d = DMatrix::from_diagonal(&DVector::from_iterator(vals.len(), vals.iter().map(|&x| cz(x))));
    v * d * v.adjoint()
}

fn uses_sine_spectrum(cfg: &DigitizationConfig) -> bool {
    cfg.kinetic == KineticRealization::CoordinateShift || cfg.momentum == MomentumConvention::Sine
}

/// Plane waves and momentum eigenvalues for the configured convention.
fn momentum_eigensystem(cfg: &DigitizationConfig) -> Result<(DMatrix<Complex64>, Vec<f64>)> {
    let l = cfg.lambda();
    if uses_sine_spectrum(cfg) {
        let c = cfg.with_momentum(MomentumConvention::Sine);
        Ok((plain_dft(l), momentum_eigenvalues(&c)?))
    } else {
        let p = momentum_eigenvalues(cfg)?;
        let x = cfg.grid();
        let s = 1.0 / (l as f64).sqrt();
        let v = DMatrix::from_fn(l, l, |n, k| Complex64::from_polar(s, p[k] * x[n]));
        Ok((v, p))
    }
}

/// Single-boson p̂ on the coordinate grid. The coordinate-shift realization
/// uses the sine spectrum, whose square is the periodic Laplacian.
pub fn momentum_matrix(cfg: &DigitizationConfig) -> Result<DMatrix<Complex64>> {
    cfg.validate()?;
    let (v, p) = momentum_eigensystem(cfg)?;
    Ok(spectral(&v, &p))
}

/// Single-boson p̂² on the coordinate grid.
pub fn p_squared_matrix(cfg: &DigitizationConfig) -> Result<DMatrix<Complex64>> {
    cfg.validate()?;
    if uses_sine_spectrum(cfg) {
        return Ok(kinetic_coordinate_matrix(cfg)?.map(cz));
    }
    let (v, p) = momentum_eigensystem(cfg)?;
    let p2: Vec<f64> = p.iter().map(|x| x * x).collect();
    Ok(spectral(&v, &p2))
}

/// `full += scale · (1 ⊗ local ⊗ 1)` with `local` on bits `offset..offset+q`.
fn add_local(full: &mut DMatrix<Complex64>, local: &DMatrix<Complex64>, offset: usize, q: usize, scale: f64) {
    let mask = ((1usize << q) - 1) << offset;
    for col in 0..full.ncols() {
        let lc = (col & mask) >> offset;
        let rest = col & !mask;
        for lr in 0..local.nrows() {
            let v = local[(lr, lc)];
            if v != Complex64::default() {
                full[(rest | (lr << offset), col)] += v * scale;
            }
        }
    }
}

fn check_width(n_qubits: usize) -> Result<usize> {
    guard("dense operator width", n_qubits, MAX_DENSE_QUBITS)?;
    Ok(1usize << n_qubits)
}

/// Direct tensor-product assembly of the digitized Hamiltonian: diagonal
/// `V(x_n)` on the grid plus `k·p̂²` per boson.
pub fn dense_hamiltonian(h: &PolyHamiltonian, cfg: &DigitizationConfig) -> Result<DMatrix<Complex64>> {
    cfg.validate()?;
    let q = cfg.qubits_per_boson;
    let n_bosons = h.n_bosons();
    let dim = check_width(n_bosons * q)?;
    if cfg.kinetic == KineticRealization::CoordinateShift && cfg.boundary != Boundary::Periodic {
        return Err(Error::UnsupportedConvention(
            "coordinate kinetic term requires periodic boundary".into(),
        ));
    }
    let grid = cfg.grid();
    let local_mask = (1usize << q) - 1;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    let mut x = vec![0.0; n_bosons];
    for i in 0..dim {
        for (a, xa) in x.iter_mut().enumerate() {
            *xa = grid[(i >> (a * q)) & local_mask];
        }
        m[(i, i)] = cz(h.evaluate_potential(&x));
    }
    let p2 = p_squared_matrix(cfg)?;
    for a in 0..n_bosons {
        add_local(&mut m, &p2, a * q, q, h.kinetic_prefactor);
    }
    Ok(m)
}

/// Dense matrix reconstructed from the Pauli encoding: the Z-only potential
/// plus the kinetic term mapped back from its register representation.
pub fn encoded_hamiltonian_matrix(enc: &EncodedHamiltonian) -> Result<DMatrix<Complex64>> {
    check_width(enc.n_qubits)?;
    let q = enc.cfg.qubits_per_boson;
    let l = 1usize << q;
    let mut m = pauli_sum_matrix(&enc.potential)?;
    let local = match &enc.kinetic {
        KineticSpec::MomentumQft { p_squared } => {
            let reg = pauli_sum_matrix(p_squared)?;
            let f = modified_dft(q);
            &f * reg * f.adjoint()
        }
        KineticSpec::SineDiagonal { eigenvalues } => {
            let p2: Vec<f64> = eigenvalues.iter().map(|x| x * x).collect();
            spectral(&plain_dft(l), &p2)
        }
        KineticSpec::CoordinateShift { shift, delta_x } => {
            let s = pauli_sum_matrix(shift)?;
            (DMatrix::identity(l, l) * cz(2.0) - s) / cz(delta_x * delta_x)
        }
    };
    for a in 0..enc.n_bosons {
        add_local(&mut m, &local, a * q, q, enc.kinetic_prefactor);
    }
    Ok(m)
}

/// Cached eigendecomposition of a Hermitian matrix for repeated `e^{−iHt}`.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    vectors: DMatrix<Complex64>,
    values: Vec<f64>,
}

impl ExactPropagator {
    pub fn new(h: &DMatrix<Complex64>) -> Result<Self> {
        if !h.is_square() {
            return Err(crate::error::invalid("Hamiltonian matrix must be square"));
        }
        check_width(h.nrows().next_power_of_two().trailing_zeros() as usize)?;
        let herm = (h + h.adjoint()) * cz(0.5);
        let eig = herm.symmetric_eigen();
        Ok(Self {
            vectors: eig.eigenvectors,
            values: eig.eigenvalues.iter().copied().collect(),
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let d = DMatrix::from_diagonal(&DVector::from_iterator(
            self.values.len(),
            self.values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
        ));
        &self.vectors * d * self.vectors.adjoint()
    }

    pub fn evolve(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        if psi.amplitudes().len() != self.values.len() {
            return Err(Error::WidthMismatch {
                expected: self.values.len(),
                got: psi.amplitudes().len(),
            });
        }
        let v = DVector::from_column_slice(psi.amplitudes());
        let mut c = self.vectors.adjoint() * v;
        for (ci, &e) in c.iter_mut().zip(&self.values) {
            *ci *= Complex64::from_polar(1.0, -e * t);
        }
        StateVector::from_amplitudes((&self.vectors * c).iter().copied().collect())
    }
}

/// `e^{−iHt}ψ` by eigendecomposition.
pub fn exact_evolution(h: &DMatrix<Complex64>, t: f64, psi: &StateVector) -> Result<StateVector> {
    ExactPropagator::new(h)?.evolve(t, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian_core::{build_anharmonic_oscillator, pauli_encode, BosonLabel, BosonRegistry, Monomial};

    fn rel_frobenius(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn harmonic() -> PolyHamiltonian {
        let mut h = PolyHamiltonian::new(BosonRegistry::new(vec![BosonLabel::Oscillator]));
        h.add_monomial(Monomial::pow(0, 2), 0.5).unwrap();
        h
    }

    #[test]
    fn modified_dft_is_unitary_and_symmetric() {
        for q in 1..=4 {
            let f = modified_dft(q);
            let l = 1 << q;
            assert!((f.adjoint() * &f - DMatrix::identity(l, l)).norm() < 1e-12);
            assert!((&f - f.transpose()).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_and_matches_encoding() {
        let h = build_anharmonic_oscillator();
        for kinetic in [KineticRealization::MomentumQft, KineticRealization::CoordinateShift] {
            let cfg = DigitizationConfig::new(3, 3.0).with_kinetic(kinetic);
            let d = dense_hamiltonian(&h, &cfg).unwrap();
            assert!((&d - d.adjoint()).norm() < 1e-12);
            let e = encoded_hamiltonian_matrix(&pauli_encode(&h, &cfg).unwrap()).unwrap();
            assert!(rel_frobenius(&e, &d) < 1e-10);
        }
    }

    #[test]
    fn free_spectrum_is_momentum_grid() {
        let cfg = DigitizationConfig::new(3, 2.0);
        let h = PolyHamiltonian::new(BosonRegistry::new(vec![BosonLabel::Oscillator]));
        let d = dense_hamiltonian(&h, &cfg).unwrap();
        let mut ev = ExactPropagator::new(&d).unwrap().eigenvalues().to_vec();
        ev.sort_by(f64::total_cmp);
        let mut want: Vec<f64> = momentum_eigenvalues(&cfg).unwrap().iter().map(|p| p * p / 2.0).collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn harmonic_ground_state_with_sine_kinetic() {
        let h = harmonic();
        let mut prev = f64::INFINITY;
        for q in [2, 4, 6] {
            // R chosen so that δ_x and δ_p shrink together
            let r = (PI * (1u64 << q) as f64 / 2.0).sqrt();
            let cfg = DigitizationConfig::new(q, r).with_momentum(MomentumConvention::Sine);
            let d = dense_hamiltonian(&h, &cfg).unwrap();
            let e0 = ExactPropagator::new(&d).unwrap().eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
            let err = (e0 - 0.5).abs();
            assert!(err < prev);
            prev = err;
        }
        // the three-point Laplacian error is O(δ_x²) = O(1/Λ) at this R
        assert!(prev < 5e-3);
    }

    #[test]
    fn evolution_properties() {
        let cfg = DigitizationConfig::new(3, 2.5);
        let d = dense_hamiltonian(&build_anharmonic_oscillator(), &cfg).unwrap();
        let prop = ExactPropagator::new(&d).unwrap();
        let psi = StateVector::random(3, 3).unwrap();
        assert!(prop.evolve(0.0, &psi).unwrap().distance(&psi) < 1e-12);
        let e0 = psi.expectation(&d).unwrap().re;
        for t in [0.1, 0.7, 2.3] {
            let out = prop.evolve(t, &psi).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-10);
            assert!((out.expectation(&d).unwrap().re - e0).abs() < 1e-9);
        }
        let two = prop.evolve(0.4, &prop.evolve(0.9, &psi).unwrap()).unwrap();
        assert!(two.distance(&prop.evolve(1.3, &psi).unwrap()) < 1e-9);
        let u = prop.unitary(0.8);
        assert!((u.adjoint() * &u - DMatrix::identity(8, 8)).norm() < 1e-10);
    }

    #[test]
    fn size_guard() {
        let h = crate::hamiltonian_core::build_scalar_qft(&crate::hamiltonian_core::ScalarParams {
            l: 4,
            d: 1,
            m2: 1.0,
            lambda: 0.0,
        })
        .unwrap();
        let cfg = DigitizationConfig::new(4, 1.0);
        assert!(matches!(dense_hamiltonian(&h, &cfg), Err(Error::SizeGuard { .. })));
    }
}
