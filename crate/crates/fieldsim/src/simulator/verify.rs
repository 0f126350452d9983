use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::{dense_hamiltonian, gauss_product_sum, ExactPropagator, StateVector};
use crate::boson_encoding::DigitizationConfig;
use crate::circuit_ir::unitary;
use crate::error::{invalid, Result};
use crate::hamiltonian_core::{pauli_encode, GaussLabel, PolyHamiltonian, QuadraticXPOperator};
use crate::trotter_compiler::trotter_step;

/// Widest register for which the spectral-norm operator error is computed.
pub const MAX_OPERATOR_ERROR_QUBITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrotterError {
    /// `‖U_step^n ψ₀ − e^{−iHt} ψ₀‖₂`.
    pub state_error: f64,
    /// `‖U_step^n − e^{−iHt}‖₂` (spectral norm).
    pub operator_error: Option<f64>,
}

fn check_steps(n_steps: usize) -> Result<()> {
    if n_steps == 0 {
        return Err(invalid("need at least one Trotter step"));
    }
    Ok(())
}

/// Error of `n_steps` first-order steps against exact evolution to time `t`.
/// `psi0` defaults to the uniform superposition.
pub fn trotter_error(
    h: &PolyHamiltonian,
    cfg: &DigitizationConfig,
    t: f64,
    n_steps: usize,
    psi0: Option<&StateVector>,
) -> Result<TrotterError> {
    check_steps(n_steps)?;
    let enc = pauli_encode(h, cfg)?;
    let prop = ExactPropagator::new(&dense_hamiltonian(h, cfg)?)?;
    let psi0 = match psi0 {
        Some(p) => p.clone(),
        None => StateVector::uniform(enc.n_qubits)?,
    };
    let step = trotter_step(&enc, t / n_steps as f64)?;
    let mut psi = psi0.clone();
    for _ in 0..n_steps {
        psi.apply(&step)?;
    }
    let state_error = psi.distance(&prop.evolve(t, &psi0)?);
    let operator_error = if enc.n_qubits <= MAX_OPERATOR_ERROR_QUBITS {
        let u = unitary(&step)?;
        let mut un = DMatrix::<Complex64>::identity(u.nrows(), u.ncols());
        for _ in 0..n_steps {
            un = &u * un;
        }
        let diff = un - prop.unitary(t);
        Some(diff.singular_values().iter().copied().fold(0.0, f64::max))
    } else {
        None
    };
    Ok(TrotterError { state_error, operator_error })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorDrift {
    pub label: GaussLabel,
    /// `⟨G⟩` in the initial state.
    pub initial: f64,
    /// `⟨G⟩` after the Trotterized evolution.
    pub trotter: f64,
    /// `⟨G⟩` after exact evolution of the digitized Hamiltonian, when dense
    /// evolution fits.
    pub exact: Option<f64>,
}

impl GeneratorDrift {
    /// `|⟨G⟩(t) − ⟨G⟩(0)|` under Trotterized evolution.
    pub fn drift(&self) -> f64 {
        (self.trotter - self.initial).abs()
    }

    /// Part of the drift caused by the product formula alone.
    pub fn trotter_excess(&self) -> Option<f64> {
        self.exact.map(|e| (self.trotter - e).abs())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub t: f64,
    pub n_steps: usize,
    pub generators: Vec<GeneratorDrift>,
}

impl DriftReport {
    pub fn max_drift(&self) -> f64 {
        self.generators.iter().map(GeneratorDrift::drift).fold(0.0, f64::max)
    }

    pub fn max_trotter_excess(&self) -> Option<f64> {
        self.generators
            .iter()
            .map(GeneratorDrift::trotter_excess)
            .try_fold(0.0, |m: f64, e| e.map(|e| m.max(e)))
    }
}

/// Widest register for which the exact reference in [`gauss_drift`] is computed.
pub const MAX_EXACT_DRIFT_QUBITS: usize = 10;

/// `⟨G⟩` before and after Trotterized evolution for each Hermitian generator
/// component. The uniform superposition is invariant under the
/// generators' x ↔ p exchange symmetry and gives `⟨G⟩ ≡ 0`, so callers should
/// pass an unsymmetric `psi0`; the default is a seeded random state.
pub fn gauss_drift(
    h: &PolyHamiltonian,
    generators: &[QuadraticXPOperator],
    cfg: &DigitizationConfig,
    t: f64,
    n_steps: usize,
    psi0: Option<&StateVector>,
) -> Result<DriftReport> {
    check_steps(n_steps)?;
    let enc = pauli_encode(h, cfg)?;
    let psi0 = match psi0 {
        Some(p) => p.clone(),
        None => StateVector::random(enc.n_qubits, 0x5eed)?,
    };
    let step = trotter_step(&enc, t / n_steps as f64)?;
    let mut psi = psi0.clone();
    for _ in 0..n_steps {
        psi.apply(&step)?;
    }
    let exact_state = if enc.n_qubits <= MAX_EXACT_DRIFT_QUBITS {
        let prop = ExactPropagator::new(&dense_hamiltonian(h, cfg)?)?;
        Some(prop.evolve(t, &psi0)?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(generators.len());
    for g in generators {
        let obs = gauss_product_sum(&g.hermitian_observable()?, cfg, enc.n_bosons)?;
        out.push(GeneratorDrift {
            label: g.label.clone(),
            initial: obs.expectation(&psi0)?.re,
            trotter: obs.expectation(&psi)?.re,
            exact: exact_state.as_ref().map(|s| obs.expectation(s).map(|z| z.re)).transpose()?,
        });
    }
    Ok(DriftReport { t, n_steps, generators: out })
}
