//! Coordinate-basis digitization of a single real boson onto Q qubits.
//!
//! Each boson gets Λ = 2^Q grid points. Qubit 0 is the least significant bit
//! of the grid label n, and Z_i = 1 − 2b_i. With this labeling
//! `x̂ = −δ_x Σ_i 2^i Z_i / 2`, i.e. `x_n = (n − (Λ−1)/2) δ_x`.
//!
//! The momentum register used by the QFT kinetic path stores the wrapped
//! label ñ = m for m < Λ/2 and ñ = m − Λ otherwise (two's complement), so
//! the linear momentum `p = (π/R)(ñ + ½)` is a weight-1 Z sum whose most
//! significant coefficient has the opposite sign.

mod pauli;

pub use pauli::{Pauli, PauliString, PauliSum};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{guard, invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentumConvention {
    /// `p(ñ) = (2/δ_x) sin(πñ/Λ)`; p² equals the periodic coordinate Laplacian.
    Sine,
    /// `p(ñ) = (π/R)(ñ + ½)`, ñ = −Λ/2 .. Λ/2−1.
    LinearSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticRealization {
    MomentumQft,
    CoordinateShift,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DigitizationConfig {
    pub qubits_per_boson: usize,
    pub half_width: f64,
    pub boundary: Boundary,
    pub momentum: MomentumConvention,
    pub kinetic: KineticRealization,
}

/// Largest Q for which the shift operator is expanded into Pauli strings.
pub const MAX_SHIFT_Q: usize = 8;

impl DigitizationConfig {
    /// Periodic, linear-symmetric momentum, QFT kinetic path.
    pub fn new(qubits_per_boson: usize, half_width: f64) -> Self {
        Self {
            qubits_per_boson,
            half_width,
            boundary: Boundary::Periodic,
            momentum: MomentumConvention::LinearSymmetric,
            kinetic: KineticRealization::MomentumQft,
        }
    }

    pub fn with_kinetic(mut self, kinetic: KineticRealization) -> Self {
        self.kinetic = kinetic;
        self
    }

    pub fn with_momentum(mut self, momentum: MomentumConvention) -> Self {
        self.momentum = momentum;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.qubits_per_boson == 0 || self.qubits_per_boson > 30 {
            return Err(invalid(format!(
                "qubits per boson must be in 1..=30, got {}",
                self.qubits_per_boson
            )));
        }
        if !(self.half_width.is_finite() && self.half_width > 0.0) {
            return Err(invalid(format!("half width must be positive, got {}", self.half_width)));
        }
        Ok(())
    }

    pub fn lambda(&self) -> usize {
        1 << self.qubits_per_boson
    }

    pub fn delta_x(&self) -> f64 {
        let l = self.lambda() as f64;
        match self.boundary {
            Boundary::Periodic => 2.0 * self.half_width / l,
            Boundary::Open => 2.0 * self.half_width / (l - 1.0),
        }
    }

    /// Momentum step `2π/(δ_x Λ) = π/R` (periodic).
    pub fn delta_p(&self) -> f64 {
        PI / self.half_width
    }

    /// Grid values `x_n`, n = 0..Λ−1.
    pub fn grid(&self) -> Vec<f64> {
        let l = self.lambda();
        let dx = self.delta_x();
        let shift = match self.boundary {
            Boundary::Periodic => 0.0,
            Boundary::Open => open_offset(self),
        };
        (0..l)
            .map(|n| (n as f64 - (l as f64 - 1.0) / 2.0) * dx + shift)
            .collect()
    }

    fn require_periodic(&self, what: &str) -> Result<()> {
        match self.boundary {
            Boundary::Periodic => Ok(()),
            Boundary::Open => Err(Error::UnsupportedConvention(format!(
                "{what} requires periodic boundary"
            ))),
        }
    }
}

fn open_offset(cfg: &DigitizationConfig) -> f64 {
    -cfg.half_width + cfg.delta_x() * (cfg.lambda() as f64 - 1.0) / 2.0
}

/// `x̂ = −δ_x Σ_i 2^i Z_i / 2` on qubits 0..Q−1.
pub fn position_pauli(cfg: &DigitizationConfig) -> Result<PauliSum> {
    cfg.validate()?;
    let q = cfg.qubits_per_boson;
    let dx = cfg.delta_x();
    let mut s = PauliSum::new(q);
    for i in 0..q {
        s.add_term(PauliString::z(&[i])?, -dx * (1u64 << i) as f64 / 2.0)?;
    }
    if cfg.boundary == Boundary::Open {
        s.constant_offset = open_offset(cfg);
    }
    Ok(s)
}

/// `n̂ = Σ_i −2^i Z_i / 2 + (Λ−1)/2`, diagonal 0..Λ−1.
pub fn number_operator_pauli(q: usize) -> Result<PauliSum> {
    if q == 0 {
        return Err(invalid("number operator needs Q >= 1"));
    }
    let mut s = PauliSum::new(q);
    for i in 0..q {
        s.add_term(PauliString::z(&[i])?, -((1u64 << i) as f64) / 2.0)?;
    }
    s.constant_offset = ((1u64 << q) as f64 - 1.0) / 2.0;
    Ok(s)
}

/// Momentum eigenvalues in the order of the label ñ listed in the
/// convention docs (sine: ñ = 0..Λ−1; linear: ñ = −Λ/2..Λ/2−1).
pub fn momentum_eigenvalues(cfg: &DigitizationConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    cfg.require_periodic("momentum eigenvalues")?;
    let l = cfg.lambda() as i64;
    Ok(match cfg.momentum {
        MomentumConvention::Sine => {
            let dx = cfg.delta_x();
            (0..l)
                .map(|k| 2.0 / dx * (PI * k as f64 / l as f64).sin())
                .collect()
        }
        MomentumConvention::LinearSymmetric => (-l / 2..l / 2)
            .map(|k| cfg.delta_p() * (k as f64 + 0.5))
            .collect(),
    })
}

/// Wrapped momentum label of register value m.
pub fn momentum_label(m: usize, q: usize) -> i64 {
    let l = 1i64 << q;
    let m = m as i64;
    if m < l / 2 {
        m
    } else {
        m - l
    }
}

/// Linear-symmetric p̂ as a weight-1 Z sum on the momentum register.
pub fn momentum_pauli_linear(cfg: &DigitizationConfig) -> Result<PauliSum> {
    cfg.validate()?;
    cfg.require_periodic("linear momentum")?;
    if cfg.momentum != MomentumConvention::LinearSymmetric {
        return Err(Error::UnsupportedConvention(
            "sine momentum is not a linear Z sum".into(),
        ));
    }
    let q = cfg.qubits_per_boson;
    let dp = cfg.delta_p();
    let mut s = PauliSum::new(q);
    for i in 0..q {
        let mag = dp * (1u64 << i) as f64 / 2.0;
        let coef = if i + 1 == q { mag } else { -mag };
        s.add_term(PauliString::z(&[i])?, coef)?;
    }
    Ok(s)
}

/// p̂² in the momentum register: ZZ terms plus a constant offset.
pub fn momentum_squared_pauli_linear(cfg: &DigitizationConfig) -> Result<PauliSum> {
    let p = momentum_pauli_linear(cfg)?;
    p.mul(&p)
}

/// `Ŝ + Ŝ†` as X/Y strings, where `Ŝ|n⟩ = |n+1⟩`.
///
/// Open boundary: nearest-neighbour hopping without wraparound, which has
/// exactly 2^{q−1} strings of length q (support on qubits 0..q−1) for each
/// q = 1..Q. Periodic boundary adds the `|0⟩⟨Λ−1| + h.c.` link.
pub fn shift_operator_pauli(q: usize, boundary: Boundary) -> Result<PauliSum> {
    if q == 0 {
        return Err(invalid("shift operator needs Q >= 1"));
    }
    guard("shift operator Q", q, MAX_SHIFT_Q)?;
    // |0⟩⟨1| = (X + iY)/2 lowers a bit, |1⟩⟨0| = (X − iY)/2 raises it.
    let lower = [(Pauli::X, Complex64::new(0.5, 0.0)), (Pauli::Y, Complex64::new(0.0, 0.5))];
    let raise = [(Pauli::X, Complex64::new(0.5, 0.0)), (Pauli::Y, Complex64::new(0.0, -0.5))];
    let mut out = PauliSum::new(q);
    let mut add_hermitian = |factors: &[[(Pauli, Complex64); 2]]| -> Result<()> {
        // T + T† keeps 2·Re of each expanded coefficient.
        let w = factors.len();
        for mask in 0..(1usize << w) {
            let mut coef = Complex64::new(1.0, 0.0);
            let mut ops = Vec::with_capacity(w);
            for (i, f) in factors.iter().enumerate() {
                let (p, c) = f[(mask >> i) & 1];
                coef *= c;
                ops.push((i, p));
            }
            let re = 2.0 * coef.re;
            if re.abs() > crate::DROP_TOL {
                out.add_term(PauliString::from_sorted(ops), re)?;
            }
        }
        Ok(())
    };
    for level in 1..=q {
        let mut factors = vec![lower; level - 1];
        factors.push(raise);
        add_hermitian(&factors)?;
    }
    if boundary == Boundary::Periodic {
        add_hermitian(&vec![lower; q])?;
    }
    out.prune();
    Ok(out)
}

/// `(2·1 − S − S⁻¹)/δ_x²` on the periodic grid.
pub fn kinetic_coordinate_matrix(cfg: &DigitizationConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    cfg.require_periodic("coordinate kinetic matrix")?;
    let l = cfg.lambda();
    let dx2 = cfg.delta_x().powi(2);
    let mut m = DMatrix::zeros(l, l);
    for n in 0..l {
        m[(n, n)] += 2.0 / dx2;
        m[((n + 1) % l, n)] -= 1.0 / dx2;
        m[(n, (n + 1) % l)] -= 1.0 / dx2;
    }
    Ok(m)
}
