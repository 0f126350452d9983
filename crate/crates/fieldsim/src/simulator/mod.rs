//! Statevector engine and dense reference operators.
//!
//! Amplitude index bit i is qubit i (qubit 0 least significant), matching the
//! boson encoding. Boson a occupies bits a·Q .. a·Q+Q−1.

mod dense;
mod structured;
mod verify;

pub use dense::{
    dense_hamiltonian, encoded_hamiltonian_matrix, exact_evolution, momentum_matrix, modified_dft,
    p_squared_matrix, ExactPropagator, MAX_DENSE_QUBITS,
};
pub use structured::{commutator_ratio, gauss_product_sum, hamiltonian_product_sum, ProductOperator, ProductSum};
pub use verify::{gauss_drift, trotter_error, DriftReport, GeneratorDrift, TrotterError};

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boson_encoding::{Pauli, PauliString, PauliSum};
use crate::circuit_ir::{Circuit, Gate};
use crate::error::{guard, invalid, Error, Result};

pub const MAX_STATE_QUBITS: usize = 24;

/// Applies one gate in place to a full amplitude array.
pub fn apply_gate_to_amplitudes(amps: &mut [Complex64], gate: Gate) {
    let phase_one = |amps: &mut [Complex64], q: usize, ph: Complex64| {
        let bit = 1usize << q;
        for (i, a) in amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= ph;
            }
        }
    };
    match gate {
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1usize << control, 1usize << target);
            for i in 0..amps.len() {
                if i & cb != 0 && i & tb == 0 {
                    amps.swap(i, i | tb);
                }
            }
        }
        Gate::Rz { qubit, angle } => {
            let bit = 1usize << qubit;
            let lo = Complex64::from_polar(1.0, -angle / 2.0);
            let hi = Complex64::from_polar(1.0, angle / 2.0);
            for (i, a) in amps.iter_mut().enumerate() {
                *a *= if i & bit == 0 { lo } else { hi };
            }
        }
        Gate::H(q) => {
            let bit = 1usize << q;
            for i in 0..amps.len() {
                if i & bit == 0 {
                    let (a, b) = (amps[i], amps[i | bit]);
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | bit] = (a - b) * FRAC_1_SQRT_2;
                }
            }
        }
        Gate::S(q) => phase_one(amps, q, Complex64::new(0.0, 1.0)),
        Gate::Sdg(q) => phase_one(amps, q, Complex64::new(0.0, -1.0)),
        Gate::T(q) => phase_one(amps, q, Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)),
        Gate::Tdg(q) => phase_one(amps, q, Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)),
        Gate::GlobalPhase(angle) => {
            let ph = Complex64::from_polar(1.0, angle);
            amps.iter_mut().for_each(|a| *a *= ph);
        }
    }
}

/// Dense matrix of a Pauli sum on `s.n_qubits` qubits.
pub fn pauli_sum_matrix(s: &PauliSum) -> Result<DMatrix<Complex64>> {
    guard("dense operator width", s.n_qubits, MAX_DENSE_QUBITS)?;
    let dim = 1usize << s.n_qubits;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] += Complex64::new(s.constant_offset, 0.0);
    }
    for (string, c) in s.terms() {
        add_pauli_string(&mut m, string, Complex64::new(c, 0.0));
    }
    Ok(m)
}

/// `m += c · P` for a Pauli string acting on the matrix width.
pub(crate) fn add_pauli_string(m: &mut DMatrix<Complex64>, s: &PauliString, c: Complex64) {
    let mut flip = 0usize;
    for &(q, p) in s.ops() {
        if p != Pauli::Z {
            flip |= 1 << q;
        }
    }
    for col in 0..m.ncols() {
        let mut ph = c;
        for &(q, p) in s.ops() {
            let b = (col >> q) & 1;
            ph *= match (p, b) {
                (Pauli::X, _) => Complex64::new(1.0, 0.0),
                (Pauli::Y, 0) => Complex64::new(0.0, 1.0),
                (Pauli::Y, _) => Complex64::new(0.0, -1.0),
                (Pauli::Z, 0) => Complex64::new(1.0, 0.0),
                (Pauli::Z, _) => Complex64::new(-1.0, 0.0),
            };
        }
        m[(col ^ flip, col)] += ph;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        guard("statevector width", n_qubits, MAX_STATE_QUBITS)?;
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::zero(n_qubits)?;
        if index >= s.amps.len() {
            return Err(invalid(format!("basis index {index} out of range")));
        }
        s.amps[0] = Complex64::default();
        s.amps[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Equal superposition of all basis states.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        guard("statevector width", n_qubits, MAX_STATE_QUBITS)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { n_qubits, amps: vec![a; dim] })
    }

    /// Normalized state with Gaussian-distributed amplitudes from a fixed seed.
    pub fn random(n_qubits: usize, seed: u64) -> Result<Self> {
        guard("statevector width", n_qubits, MAX_STATE_QUBITS)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n_qubits)
            .map(|_| {
                let (u1, u2): (f64, f64) = (rng.gen::<f64>().max(1e-300), rng.gen());
                let r = (-2.0 * u1.ln()).sqrt();
                let t = std::f64::consts::TAU * u2;
                Complex64::new(r * t.cos(), r * t.sin())
            })
            .collect();
        let mut s = Self { n_qubits, amps };
        s.normalize();
        Ok(s)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() {
            return Err(invalid(format!("amplitude length {dim} is not a power of two")));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        guard("statevector width", n_qubits, MAX_STATE_QUBITS)?;
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= n);
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `‖self − other‖₂`.
    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn apply_gate(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n_qubits)?;
        apply_gate_to_amplitudes(&mut self.amps, g);
        Ok(())
    }

    pub fn apply(&mut self, c: &Circuit) -> Result<()> {
        if c.n_qubits != self.n_qubits {
            return Err(Error::WidthMismatch {
                expected: self.n_qubits,
                got: c.n_qubits,
            });
        }
        for &g in c.gates() {
            apply_gate_to_amplitudes(&mut self.amps, g);
        }
        Ok(())
    }

    /// `⟨ψ|M|ψ⟩` for a dense operator of matching dimension.
    pub fn expectation(&self, m: &DMatrix<Complex64>) -> Result<Complex64> {
        if m.nrows() != self.amps.len() || m.ncols() != self.amps.len() {
            return Err(Error::WidthMismatch {
                expected: self.amps.len(),
                got: m.nrows(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        Ok(v.dotc(&(m * &v)))
    }
}

pub fn apply_circuit(psi: &StateVector, c: &Circuit) -> Result<StateVector> {
    let mut out = psi.clone();
    out.apply(c)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_on_basis_state() {
        // |10⟩ with the control (qubit 1) set
        let mut s = StateVector::basis(2, 0b10).unwrap();
        s.apply_gate(Gate::Cnot { control: 1, target: 0 }).unwrap();
        assert_eq!(s, StateVector::basis(2, 0b11).unwrap());
    }

    #[test]
    fn hadamard_twice_on_random_state() {
        let s0 = StateVector::random(5, 7).unwrap();
        let mut s = s0.clone();
        for q in 0..5 {
            s.apply_gate(Gate::H(q)).unwrap();
            s.apply_gate(Gate::H(q)).unwrap();
        }
        assert!(s.distance(&s0) < 1e-12);
    }

    #[test]
    fn width_checks() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(s.apply(&Circuit::new(3)), Err(Error::WidthMismatch { .. })));
        assert!(StateVector::zero(25).is_err());
        assert!(StateVector::from_amplitudes(vec![Complex64::default(); 3]).is_err());
    }

    #[test]
    fn pauli_matrices() {
        let y = PauliString::new(vec![(0, Pauli::Y)]).unwrap();
        let mut s = PauliSum::new(1);
        s.add_term(y, 1.0).unwrap();
        let m = pauli_sum_matrix(&s).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(m[(1, 0)], Complex64::new(0.0, 1.0));
        let mut z1 = PauliSum::new(2);
        z1.add_term(PauliString::z(&[1]).unwrap(), 1.0).unwrap();
        let m = pauli_sum_matrix(&z1).unwrap();
        let d: Vec<f64> = (0..4).map(|i| m[(i, i)].re).collect();
        assert_eq!(d, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn kernels_match_circuit_unitary() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::H(0),
                Gate::Cnot { control: 0, target: 2 },
                Gate::T(1),
                Gate::Rz { qubit: 2, angle: 0.37 },
                Gate::Sdg(0),
                Gate::GlobalPhase(0.2),
            ],
        )
        .unwrap();
        let u = crate::circuit_ir::unitary(&c).unwrap();
        let psi = StateVector::random(3, 1).unwrap();
        let out = apply_circuit(&psi, &c).unwrap();
        let want = &u * nalgebra::DVector::from_column_slice(psi.amplitudes());
        for (a, b) in out.amplitudes().iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
