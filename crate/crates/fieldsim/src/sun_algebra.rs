//! SU(N) generators in the fundamental representation, structure constants
//! and the quartic coupling tensor of the matrix model.
//!
//! Generators are normalized as `Tr(τ_α τ_β) = δ_αβ`. The basis order is
//! fixed: all `S_ab/√2` (a<b, lexicographic), then all `A_ab/√2`, then
//! `D_n/√(n(n+1))` for n = 1..N−1. Adjoint indices are 0-based everywhere.
//!
//! `A_ab` carries `−i` at (a,b) and `+i` at (b,a), so that for N = 2 the
//! basis is (σ₁, σ₂, σ₃)/√2 and for N = 3 it reproduces the Gell-Mann
//! matrices λ/√2.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

type CMat = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorLabel {
    /// Symmetric off-diagonal generator on rows/columns (a, b), a < b.
    S(usize, usize),
    /// Antisymmetric off-diagonal generator on (a, b), a < b.
    A(usize, usize),
    /// Diagonal generator `diag(1,…,1,−n,0,…)/√(n(n+1))`.
    D(usize),
}

#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    pub n_colors: usize,
    pub generators: Vec<CMat>,
    pub labels: Vec<GeneratorLabel>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Checks Hermiticity, tracelessness and orthonormality within `tol`.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.n_colors;
        if self.generators.len() != n * n - 1 {
            return Err(Error::InvalidBasis(format!(
                "expected {} generators, found {}",
                n * n - 1,
                self.generators.len()
            )));
        }
        for (a, g) in self.generators.iter().enumerate() {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::InvalidBasis(format!("generator {a} is not {n}x{n}")));
            }
            let herm = (g - g.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
            if herm > tol {
                return Err(Error::InvalidBasis(format!("generator {a} is not Hermitian")));
            }
            if g.trace().norm() > tol {
                return Err(Error::InvalidBasis(format!("generator {a} is not traceless")));
            }
            for (b, h) in self.generators.iter().enumerate() {
                let t = (g * h).trace();
                let want = if a == b { 1.0 } else { 0.0 };
                if (t.re - want).abs() > tol || t.im.abs() > tol {
                    return Err(Error::InvalidBasis(format!(
                        "Tr(τ_{a} τ_{b}) = {t}, expected {want}"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn build_generators(n: usize) -> Result<GeneratorBasis> {
    if n < 2 {
        return Err(invalid(format!("SU(N) needs N >= 2, got {n}")));
    }
    let zero = Complex64::new(0.0, 0.0);
    let s = 1.0 / 2f64.sqrt();
    let mut generators = Vec::with_capacity(n * n - 1);
    let mut labels = Vec::with_capacity(n * n - 1);
    for a in 0..n {
        for b in a + 1..n {
            let mut m = CMat::from_element(n, n, zero);
            m[(a, b)] = Complex64::new(s, 0.0);
            m[(b, a)] = Complex64::new(s, 0.0);
            generators.push(m);
            labels.push(GeneratorLabel::S(a, b));
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let mut m = CMat::from_element(n, n, zero);
            m[(a, b)] = Complex64::new(0.0, -s);
            m[(b, a)] = Complex64::new(0.0, s);
            generators.push(m);
            labels.push(GeneratorLabel::A(a, b));
        }
    }
    for k in 1..n {
        let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
        let mut m = CMat::from_element(n, n, zero);
        for i in 0..k {
            m[(i, i)] = Complex64::new(norm, 0.0);
        }
        m[(k, k)] = Complex64::new(-(k as f64) * norm, 0.0);
        generators.push(m);
        labels.push(GeneratorLabel::D(k));
    }
    Ok(GeneratorBasis {
        n_colors: n,
        generators,
        labels,
    })
}

/// Sparse, totally antisymmetric `f_αβγ` with `[τ_α, τ_β] = i Σ_γ f_αβγ τ_γ`.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    pub n_colors: usize,
    dim: usize,
    /// Every nonzero entry with α < β, sorted by (α, β, γ).
    pub entries: Vec<(usize, usize, usize, f64)>,
    lookup: HashMap<(usize, usize, usize), f64>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `f_αβγ` for arbitrary index order. Indices must be `< dim`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
        sign * self.lookup.get(&(lo, hi, c)).copied().unwrap_or(0.0)
    }

    /// For each γ, all ordered pairs (α, β) with `f_αβγ ≠ 0`.
    pub fn pairs_by_gamma(&self) -> Vec<Vec<(usize, usize, f64)>> {
        let mut out = vec![Vec::new(); self.dim];
        for &(a, b, c, v) in &self.entries {
            out[c].push((a, b, v));
            out[c].push((b, a, -v));
        }
        for list in &mut out {
            list.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        }
        out
    }
}

const RESIDUE_TOL: f64 = 1e-12;

pub fn structure_constants(basis: &GeneratorBasis) -> Result<StructureConstants> {
    basis.validate(1e-12)?;
    let dim = basis.dim();
    let mut entries = Vec::new();
    let mut lookup = HashMap::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let ga = &basis.generators[a];
            let gb = &basis.generators[b];
            let comm = ga * gb - gb * ga;
            for c in 0..dim {
                let t = (&comm * &basis.generators[c]).trace() * Complex64::new(0.0, -1.0);
                if t.im.abs() > RESIDUE_TOL {
                    return Err(Error::InvalidBasis(format!(
                        "imaginary residue {} in f_{a}{b}{c}",
                        t.im
                    )));
                }
                if t.re.abs() > RESIDUE_TOL {
                    entries.push((a, b, c, t.re));
                    lookup.insert((a, b, c), t.re);
                }
            }
        }
    }
    Ok(StructureConstants {
        n_colors: basis.n_colors,
        dim,
        entries,
        lookup,
    })
}

/// Cached structure constants of SU(N) in the canonical basis.
pub fn su_structure_constants(n: usize) -> Result<Arc<StructureConstants>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<StructureConstants>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(f));
    }
    let f = Arc::new(structure_constants(&build_generators(n)?)?);
    cache
        .lock()
        .expect("cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&f));
    Ok(f)
}

/// `C^{αβα′β′} = −Σ_γ f_αβγ f_α′β′γ`, evaluated on demand.
pub fn coupling_tensor(f: &StructureConstants, a: usize, b: usize, a2: usize, b2: usize) -> Result<f64> {
    let dim = f.dim();
    for idx in [a, b, a2, b2] {
        if idx >= dim {
            return Err(invalid(format!("adjoint index {idx} out of range 0..{dim}")));
        }
    }
    Ok(-(0..dim).map(|c| f.get(a, b, c) * f.get(a2, b2, c)).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn su2_basis_is_scaled_pauli() {
        let b = build_generators(2).unwrap();
        let s = 1.0 / 2f64.sqrt();
        let sx = CMat::from_row_slice(2, 2, &[c(0., 0.), c(s, 0.), c(s, 0.), c(0., 0.)]);
        let sy = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -s), c(0., s), c(0., 0.)]);
        let sz = CMat::from_row_slice(2, 2, &[c(s, 0.), c(0., 0.), c(0., 0.), c(-s, 0.)]);
        for (g, want) in b.generators.iter().zip([sx, sy, sz]) {
            assert!((g - want).norm() < 1e-15);
        }
    }

    #[test]
    fn gell_mann_order() {
        // λ1=S01, λ2=A01, λ3=D1, λ4=S02, λ5=A02, λ6=S12, λ7=A12, λ8=D2
        let b = build_generators(3).unwrap();
        assert_eq!(b.labels[0], GeneratorLabel::S(0, 1));
        assert_eq!(b.labels[3], GeneratorLabel::A(0, 1));
        assert_eq!(b.labels[6], GeneratorLabel::D(1));
        let l8 = &b.generators[7] * c(6f64.sqrt(), 0.0);
        assert!((l8[(2, 2)] - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(build_generators(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn invalid_basis_detected() {
        let mut b = build_generators(2).unwrap();
        b.generators[0] *= c(2.0, 0.0);
        assert!(matches!(structure_constants(&b), Err(Error::InvalidBasis(_))));
    }

    #[test]
    fn su2_single_independent_constant() {
        let f = su_structure_constants(2).unwrap();
        // α<β entries: f_012, f_021, f_120 → three, all from one independent value
        assert_eq!(f.entries.len(), 3);
        assert!((f.get(0, 1, 2) - 2f64.sqrt()).abs() < 1e-14);
        assert!((f.get(1, 0, 2) + 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(f.get(1, 1, 0), 0.0);
    }

    #[test]
    fn coupling_examples() {
        let f = su_structure_constants(2).unwrap();
        assert!((coupling_tensor(&f, 0, 1, 0, 1).unwrap() + 2.0).abs() < 1e-14);
        assert_eq!(coupling_tensor(&f, 1, 1, 0, 2).unwrap(), 0.0);
        assert!(coupling_tensor(&f, 0, 1, 0, 3).is_err());
        // su(2): C = −2(δ_{aa′}δ_{bb′} − δ_{ab′}δ_{ba′})
        let mut nonzero = 0;
        for a in 0..3 {
            for b in 0..3 {
                for a2 in 0..3 {
                    for b2 in 0..3 {
                        let want = -2.0 * ((a == a2 && b == b2) as i32 - (a == b2 && b == a2) as i32) as f64;
                        let got = coupling_tensor(&f, a, b, a2, b2).unwrap();
                        assert!((got - want).abs() < 1e-14);
                        nonzero += (got.abs() > 1e-12) as usize;
                    }
                }
            }
        }
        assert_eq!(nonzero, 12);
    }

    #[test]
    fn pairs_by_gamma_are_antisymmetric() {
        let f = su_structure_constants(3).unwrap();
        for (c, list) in f.pairs_by_gamma().iter().enumerate() {
            for &(a, b, v) in list {
                assert_eq!(v, f.get(a, b, c));
                assert_eq!(-v, f.get(b, a, c));
            }
        }
    }
}
