use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::DROP_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Product `self · other` as (phase, result); `None` result means identity.
    pub fn mul(self, other: Pauli) -> (Complex64, Option<Pauli>) {
        use Pauli::*;
        let i = Complex64::new(0.0, 1.0);
        match (self, other) {
            (X, X) | (Y, Y) | (Z, Z) => (Complex64::new(1.0, 0.0), None),
            (X, Y) => (i, Some(Z)),
            (Y, X) => (-i, Some(Z)),
            (Y, Z) => (i, Some(X)),
            (Z, Y) => (-i, Some(X)),
            (Z, X) => (i, Some(Y)),
            (X, Z) => (-i, Some(Y)),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of non-identity Paulis, sorted by qubit index.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(Vec<(usize, Pauli)>);

impl PauliString {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    pub fn new(mut ops: Vec<(usize, Pauli)>) -> Result<Self> {
        ops.sort_by_key(|&(q, _)| q);
        if ops.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("Pauli string repeats a qubit"));
        }
        Ok(Self(ops))
    }

    /// Z string on the given qubits (any order, no repeats).
    pub fn z(qubits: &[usize]) -> Result<Self> {
        Self::new(qubits.iter().map(|&q| (q, Pauli::Z)).collect())
    }

    pub(crate) fn from_sorted(ops: Vec<(usize, Pauli)>) -> Self {
        debug_assert!(ops.windows(2).all(|w| w[0].0 < w[1].0));
        Self(ops)
    }

    pub fn ops(&self) -> &[(usize, Pauli)] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn qubits(&self) -> Vec<usize> {
        self.0.iter().map(|&(q, _)| q).collect()
    }

    pub fn is_z_only(&self) -> bool {
        self.0.iter().all(|&(_, p)| p == Pauli::Z)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.0.last().map(|&(q, _)| q)
    }

    pub fn shifted(&self, offset: usize) -> Self {
        Self(self.0.iter().map(|&(q, p)| (q + offset, p)).collect())
    }

    pub fn mul(&self, other: &PauliString) -> (Complex64, PauliString) {
        let mut phase = Complex64::new(1.0, 0.0);
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                let (ph, p) = a[i].1.mul(b[j].1);
                phase *= ph;
                if let Some(p) = p {
                    out.push((a[i].0, p));
                }
                i += 1;
                j += 1;
            }
        }
        (phase, PauliString(out))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "I");
        }
        for (k, &(q, p)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", p.symbol(), q)?;
        }
        Ok(())
    }
}

/// Real-weighted sum of Pauli strings with the identity part kept in
/// `constant_offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    pub n_qubits: usize,
    terms: BTreeMap<PauliString, f64>,
    pub constant_offset: f64,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: BTreeMap::new(),
            constant_offset: 0.0,
        }
    }

    pub fn constant(n_qubits: usize, c: f64) -> Self {
        let mut s = Self::new(n_qubits);
        s.constant_offset = c;
        s
    }

    /// Adds `coef · string`, merging with an existing term and dropping it
    /// if the merged coefficient falls below the drop tolerance.
    pub fn add_term(&mut self, string: PauliString, coef: f64) -> Result<()> {
        if let Some(q) = string.max_qubit() {
            if q >= self.n_qubits {
                return Err(invalid(format!(
                    "qubit {q} out of range for {} qubits",
                    self.n_qubits
                )));
            }
        }
        if string.is_identity() {
            self.constant_offset += coef;
            return Ok(());
        }
        let entry = self.terms.entry(string).or_insert(0.0);
        *entry += coef;
        Ok(())
    }

    /// Drops every term with |coefficient| ≤ the drop tolerance.
    pub fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() > DROP_TOL);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> {
        self.terms.iter().map(|(s, &c)| (s, c))
    }

    pub fn coefficient(&self, s: &PauliString) -> f64 {
        if s.is_identity() {
            self.constant_offset
        } else {
            self.terms.get(s).copied().unwrap_or(0.0)
        }
    }

    pub fn is_z_only(&self) -> bool {
        self.terms.keys().all(PauliString::is_z_only)
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut out = Self::constant(self.n_qubits, self.constant_offset * k);
        for (s, c) in self.terms() {
            out.terms.insert(s.clone(), c * k);
        }
        out.prune();
        out
    }

    pub fn add(&mut self, other: &PauliSum) -> Result<()> {
        for (s, c) in other.terms() {
            self.add_term(s.clone(), c)?;
        }
        self.constant_offset += other.constant_offset;
        self.prune();
        Ok(())
    }

    /// Relabels qubit q → q + offset into a register of `n_qubits`.
    pub fn embedded(&self, offset: usize, n_qubits: usize) -> Result<Self> {
        let mut out = Self::constant(n_qubits, self.constant_offset);
        for (s, c) in self.terms() {
            out.add_term(s.shifted(offset), c)?;
        }
        Ok(out)
    }

    /// Operator product. Fails if the product is not Hermitian, i.e. if an
    /// imaginary coefficient survives.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        let n = self.n_qubits.max(other.n_qubits);
        let id = PauliString::identity();
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        let lhs = self.terms().chain(std::iter::once((&id, self.constant_offset)));
        for (a, ca) in lhs {
            if ca == 0.0 {
                continue;
            }
            let rhs = other.terms().chain(std::iter::once((&id, other.constant_offset)));
            for (b, cb) in rhs {
                if cb == 0.0 {
                    continue;
                }
                let (ph, s) = a.mul(b);
                *acc.entry(s).or_insert(Complex64::new(0.0, 0.0)) += ph * ca * cb;
            }
        }
        let mut out = PauliSum::new(n);
        for (s, c) in acc {
            if c.im.abs() > DROP_TOL * (1.0 + c.re.abs()) {
                return Err(invalid(format!("non-Hermitian product: term {s} has coefficient {c}")));
            }
            out.add_term(s, c.re)?;
        }
        out.prune();
        Ok(out)
    }
}
