use std::collections::BTreeMap;
use std::fmt;
use std::ops::{AddAssign, Mul};

use num_complex::Complex64;

/// Product of boson coordinates, stored as sorted (boson, power) pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(usize, u8)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(a: usize) -> Self {
        Self(vec![(a, 1)])
    }

    pub fn pow(a: usize, k: u8) -> Self {
        if k == 0 {
            Self::one()
        } else {
            Self(vec![(a, k)])
        }
    }

    /// Builds from unsorted factors, merging repeated bosons.
    pub fn from_factors(factors: &[(usize, u8)]) -> Self {
        let mut m = Self::one();
        for &(a, k) in factors {
            m = &m * &Self::pow(a, k);
        }
        m
    }

    pub fn factors(&self) -> &[(usize, u8)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, k)| k as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.0.iter().map(|&(a, k)| x[a].powi(k as i32)).product()
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(a, p)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if p == 1 {
                write!(f, "x{a}")?;
            } else {
                write!(f, "x{a}^{p}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in commuting real variables with coefficients in `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    pub terms: BTreeMap<Monomial, T>,
}

pub type RealPoly = Poly<f64>;
pub type ComplexPoly = Poly<Complex64>;

impl<T> Default for Poly<T> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<T> Poly<T>
where
    T: Copy + AddAssign + Mul<Output = T> + Default,
{
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: T) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: T) {
        *self.terms.entry(m).or_default() += c;
    }

    pub fn add_scaled(&mut self, other: &Self, k: T) {
        for (m, &c) in &other.terms {
            self.add_term(m.clone(), c * k);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma * mb, ca * cb);
            }
        }
        out
    }
}

impl ComplexPoly {
    /// Complex conjugate of the coefficients (variables are real).
    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn real_part(&self) -> RealPoly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.re)).collect(),
        }
    }
}

/// Square matrix of complex polynomials.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    pub n: usize,
    pub entries: Vec<ComplexPoly>,
}

impl PolyMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![ComplexPoly::zero(); n * n],
        }
    }

    pub fn identity_scaled(n: usize, c: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i].add_term(Monomial::one(), Complex64::new(c, 0.0));
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexPoly {
        &self.entries[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut ComplexPoly {
        &mut self.entries[i * self.n + j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.terms.is_empty() {
                    continue;
                }
                for j in 0..n {
                    let prod = a.mul(other.get(k, j));
                    out.get_mut(i, j).add_scaled(&prod, Complex64::new(1.0, 0.0));
                }
            }
        }
        out
    }

    pub fn add_scaled(&mut self, other: &Self, k: f64) {
        let k = Complex64::new(k, 0.0);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_scaled(b, k);
        }
    }

    /// Matrix conjugate transpose (the bar operation on link matrices).
    pub fn bar(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                *out.get_mut(i, j) = self.get(j, i).conj();
            }
        }
        out
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> ComplexPoly {
        let mut out = ComplexPoly::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let p = self.get(i, j).mul(other.get(j, i));
                out.add_scaled(&p, Complex64::new(1.0, 0.0));
            }
        }
        out
    }

    pub fn trace(&self) -> ComplexPoly {
        let mut out = ComplexPoly::zero();
        for i in 0..self.n {
            out.add_scaled(self.get(i, i), Complex64::new(1.0, 0.0));
        }
        out
    }
}
