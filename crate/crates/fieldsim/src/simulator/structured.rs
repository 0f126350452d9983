//! Sums of tensor-product operators over bosons. Frobenius norms use
//! `Tr(A†B)` factorized per boson, so commutator norms stay exact on
//! registers far beyond the dense-matrix guard.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::dense::{momentum_matrix, p_squared_matrix};
use super::StateVector;
use crate::boson_encoding::DigitizationConfig;
use crate::error::{invalid, Error, Result};
use crate::hamiltonian_core::{PolyHamiltonian, QuadraticXPOperator};

/// `coef · ⊗_a factor_a`, identity on bosons not listed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductOperator {
    pub coef: Complex64,
    /// Sorted by boson index.
    pub factors: Vec<(usize, DMatrix<Complex64>)>,
}

impl ProductOperator {
    pub fn scalar(coef: Complex64) -> Self {
        Self { coef, factors: Vec::new() }
    }

    pub fn local(coef: Complex64, boson: usize, m: DMatrix<Complex64>) -> Self {
        Self { coef, factors: vec![(boson, m)] }
    }

    fn adjoint(&self) -> Self {
        Self {
            coef: self.coef.conj(),
            factors: self.factors.iter().map(|(a, m)| (*a, m.adjoint())).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            let a = self.factors.get(i).map(|f| f.0).unwrap_or(usize::MAX);
            let b = other.factors.get(j).map(|f| f.0).unwrap_or(usize::MAX);
            if a == b {
                factors.push((a, &self.factors[i].1 * &other.factors[j].1));
                i += 1;
                j += 1;
            } else if a < b {
                factors.push(self.factors[i].clone());
                i += 1;
            } else {
                factors.push(other.factors[j].clone());
                j += 1;
            }
        }
        Self { coef: self.coef * other.coef, factors }
    }
}

fn trace_adj_product(a: Option<&DMatrix<Complex64>>, b: Option<&DMatrix<Complex64>>, dim: usize) -> Complex64 {
    match (a, b) {
        (None, None) => Complex64::new(dim as f64, 0.0),
        (Some(a), None) => a.trace().conj(),
        (None, Some(b)) => b.trace(),
        (Some(a), Some(b)) => a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductSum {
    pub n_bosons: usize,
    pub local_dim: usize,
    pub terms: Vec<ProductOperator>,
}

impl ProductSum {
    pub fn new(n_bosons: usize, local_dim: usize) -> Self {
        Self { n_bosons, local_dim, terms: Vec::new() }
    }

    pub fn push(&mut self, t: ProductOperator) -> Result<()> {
        for (a, m) in &t.factors {
            if *a >= self.n_bosons || m.nrows() != self.local_dim || m.ncols() != self.local_dim {
                return Err(invalid(format!("factor on boson {a} does not fit the register")));
            }
        }
        self.terms.push(t);
        Ok(())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n_bosons != other.n_bosons || self.local_dim != other.local_dim {
            return Err(invalid("product sums act on different registers"));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(ProductOperator::adjoint).collect(),
            ..self.clone()
        }
    }

    /// `(O + O†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let mut terms: Vec<ProductOperator> = self
            .terms
            .iter()
            .map(|t| ProductOperator { coef: t.coef * half, ..t.clone() })
            .collect();
        terms.extend(self.adjoint().terms.into_iter().map(|t| ProductOperator { coef: t.coef * half, ..t }));
        Self { terms, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        Ok(Self { terms, ..self.clone() })
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let mut ab = self.mul(other)?;
        let ba = other.mul(self)?;
        ab.terms.extend(ba.terms.into_iter().map(|t| ProductOperator { coef: -t.coef, ..t }));
        Ok(ab)
    }

    /// `Tr(self† other)` on the full register.
    pub fn trace_inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let mut total = Complex64::default();
        for a in &self.terms {
            for b in &other.terms {
                let mut v = a.coef.conj() * b.coef;
                let mut touched = 0usize;
                let (mut i, mut j) = (0, 0);
                while i < a.factors.len() || j < b.factors.len() {
                    let x = a.factors.get(i).map(|f| f.0).unwrap_or(usize::MAX);
                    let y = b.factors.get(j).map(|f| f.0).unwrap_or(usize::MAX);
                    let (fa, fb) = if x == y {
                        i += 1;
                        j += 1;
                        (Some(&a.factors[i - 1].1), Some(&b.factors[j - 1].1))
                    } else if x < y {
                        i += 1;
                        (Some(&a.factors[i - 1].1), None)
                    } else {
                        j += 1;
                        (None, Some(&b.factors[j - 1].1))
                    };
                    v *= trace_adj_product(fa, fb, self.local_dim);
                    touched += 1;
                }
                v *= (self.local_dim as f64).powi((self.n_bosons - touched) as i32);
                total += v;
            }
        }
        Ok(total)
    }

    pub fn frobenius_norm(&self) -> Result<f64> {
        Ok(self.trace_inner(self)?.re.max(0.0).sqrt())
    }

    fn apply_local(amps: &[Complex64], m: &DMatrix<Complex64>, offset: usize, q: usize) -> Vec<Complex64> {
        let mask = ((1usize << q) - 1) << offset;
        let mut out = vec![Complex64::default(); amps.len()];
        for (col, &a) in amps.iter().enumerate() {
            if a == Complex64::default() {
                continue;
            }
            let lc = (col & mask) >> offset;
            let rest = col & !mask;
            for lr in 0..m.nrows() {
                out[rest | (lr << offset)] += m[(lr, lc)] * a;
            }
        }
        out
    }

    /// `self · ψ`, unnormalized.
    pub fn apply(&self, psi: &StateVector) -> Result<Vec<Complex64>> {
        let q = self.local_dim.trailing_zeros() as usize;
        if psi.n_qubits() != self.n_bosons * q {
            return Err(Error::WidthMismatch {
                expected: self.n_bosons * q,
                got: psi.n_qubits(),
            });
        }
        let mut out = vec![Complex64::default(); psi.amplitudes().len()];
        for t in &self.terms {
            let mut v = psi.amplitudes().to_vec();
            for (a, m) in &t.factors {
                v = Self::apply_local(&v, m, a * q, q);
            }
            for (o, x) in out.iter_mut().zip(v) {
                *o += t.coef * x;
            }
        }
        Ok(out)
    }

    pub fn expectation(&self, psi: &StateVector) -> Result<Complex64> {
        let v = self.apply(psi)?;
        Ok(psi.amplitudes().iter().zip(v).map(|(a, b)| a.conj() * b).sum())
    }
}

fn position_matrix(cfg: &DigitizationConfig) -> DMatrix<Complex64> {
    let g = cfg.grid();
    DMatrix::from_fn(g.len(), g.len(), |i, j| {
        if i == j {
            Complex64::new(g[i], 0.0)
        } else {
            Complex64::default()
        }
    })
}

/// The digitized Hamiltonian as a product sum (same operator as
/// [`super::dense_hamiltonian`]).
pub fn hamiltonian_product_sum(h: &PolyHamiltonian, cfg: &DigitizationConfig) -> Result<ProductSum> {
    cfg.validate()?;
    let l = cfg.lambda();
    let mut out = ProductSum::new(h.n_bosons(), l);
    let p2 = p_squared_matrix(cfg)?;
    let x = position_matrix(cfg);
    let pref = Complex64::new(h.kinetic_prefactor, 0.0);
    for a in 0..h.n_bosons() {
        out.push(ProductOperator::local(pref, a, p2.clone()))?;
    }
    for (m, c) in h.potential() {
        let factors = m
            .factors()
            .iter()
            .map(|&(a, k)| (a, x.pow(k as u32)))
            .collect();
        out.push(ProductOperator { coef: Complex64::new(c, 0.0), factors })?;
    }
    if h.constant != 0.0 {
        out.push(ProductOperator::scalar(Complex64::new(h.constant, 0.0)))?;
    }
    Ok(out)
}

/// Digitized `Σ c x̂_a p̂_b + const`, symmetrized to its Hermitian part
/// (on the grid `[x̂, p̂] ≠ i`, so same-boson products are not exactly
/// Hermitian).
pub fn gauss_product_sum(op: &QuadraticXPOperator, cfg: &DigitizationConfig, n_bosons: usize) -> Result<ProductSum> {
    cfg.validate()?;
    let l = cfg.lambda();
    let x = position_matrix(cfg);
    let p = momentum_matrix(cfg)?;
    let mut out = ProductSum::new(n_bosons, l);
    for t in &op.terms {
        let term = match t.x.cmp(&t.p) {
            std::cmp::Ordering::Equal => ProductOperator::local(t.coef, t.x, &x * &p),
            std::cmp::Ordering::Less => ProductOperator { coef: t.coef, factors: vec![(t.x, x.clone()), (t.p, p.clone())] },
            std::cmp::Ordering::Greater => ProductOperator { coef: t.coef, factors: vec![(t.p, p.clone()), (t.x, x.clone())] },
        };
        out.push(term)?;
    }
    if op.constant != Complex64::default() {
        out.push(ProductOperator::scalar(op.constant))?;
    }
    Ok(out.hermitian_part())
}

/// `‖[H,G]‖_F / (‖H‖_F ‖G‖_F)`.
pub fn commutator_ratio(h: &ProductSum, g: &ProductSum) -> Result<f64> {
    let nh = h.frobenius_norm()?;
    let ng = g.frobenius_norm()?;
    if nh == 0.0 || ng == 0.0 {
        return Err(invalid("commutator ratio of a zero operator"));
    }
    Ok(h.commutator(g)?.frobenius_norm()? / (nh * ng))
}
