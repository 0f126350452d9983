use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use super::orbifold::OrbifoldParams;
use super::scalar::lattice_coords;
use super::Part;
use crate::error::{invalid, Result};
use crate::sun_algebra::su_structure_constants;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `coef · x̂_x p̂_p`, with the coordinate to the left.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XPTerm {
    #[serde(serialize_with = "ser_complex")]
    pub coef: Complex64,
    pub x: usize,
    pub p: usize,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    /// `Ĝ_pp`.
    Diagonal,
    /// `(Ĝ_pq + Ĝ_qp)/√2`.
    Symmetric,
    /// `i(Ĝ_pq − Ĝ_qp)/√2`.
    Antisymmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussLabel {
    Adjoint(usize),
    Site { site: Vec<usize>, row: usize, col: usize, kind: ComponentKind },
}

/// Bilinear `Σ c x̂_a p̂_b + constant`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticXPOperator {
    pub label: GaussLabel,
    pub terms: Vec<XPTerm>,
    #[serde(serialize_with = "ser_complex")]
    pub constant: Complex64,
}

type TermMap = BTreeMap<(usize, usize), Complex64>;

impl QuadraticXPOperator {
    fn from_map(label: GaussLabel, map: TermMap, constant: Complex64) -> Self {
        let terms = map
            .into_iter()
            .filter(|(_, c)| c.norm() > crate::DROP_TOL)
            .map(|((x, p), coef)| XPTerm { coef, x, p })
            .collect();
        Self { label, terms, constant }
    }

    fn to_map(&self) -> TermMap {
        let mut m = TermMap::new();
        for t in &self.terms {
            *m.entry((t.x, t.p)).or_default() += t.coef;
        }
        m
    }

    /// Operator adjoint, reordered with `p̂_a x̂_a = x̂_a p̂_a − i`.
    pub fn adjoint(&self) -> Self {
        let mut constant = self.constant.conj();
        let mut map = TermMap::new();
        for t in &self.terms {
            *map.entry((t.x, t.p)).or_default() += t.coef.conj();
            if t.x == t.p {
                constant += -I * t.coef.conj();
            }
        }
        Self::from_map(self.label.clone(), map, constant)
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        let map = self.to_map().into_iter().map(|(key, c)| (key, c * k)).collect();
        Self::from_map(self.label.clone(), map, self.constant * k)
    }

    fn distance(&self, other: &Self) -> f64 {
        let a = self.to_map();
        let b = other.to_map();
        let mut d = (self.constant - other.constant).norm();
        for key in a.keys().chain(b.keys()) {
            let x = a.get(key).copied().unwrap_or_default();
            let y = b.get(key).copied().unwrap_or_default();
            d = d.max((x - y).norm());
        }
        d
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.distance(&self.adjoint()) <= tol
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        self.distance(&self.adjoint().scaled(-ONE)) <= tol
    }

    /// `self` if Hermitian, `−i·self` if anti-Hermitian.
    pub fn hermitian_observable(&self) -> Result<Self> {
        if self.is_hermitian(1e-12) {
            Ok(self.clone())
        } else if self.is_anti_hermitian(1e-12) {
            Ok(self.scaled(-I))
        } else {
            Err(invalid(format!("generator {:?} has no Hermitian form", self.label)))
        }
    }
}

/// `Ĝ_α = i Σ_{I,β,γ} f_αβγ X̂_{I,β} P̂_{I,γ}` on the traceless basis.
///
/// As written this operator is anti-Hermitian; use
/// [`QuadraticXPOperator::hermitian_observable`] for expectation values.
pub fn gauss_generators_mm(n: usize, d: usize, traceless: bool) -> Result<Vec<QuadraticXPOperator>> {
    if !traceless {
        return Err(crate::Error::UnsupportedConvention(
            "Gauss generators are defined on the traceless adjoint basis".into(),
        ));
    }
    if d == 0 {
        return Err(invalid("matrix model needs d >= 1"));
    }
    let f = su_structure_constants(n)?;
    let dim = f.dim();
    let mut maps = vec![TermMap::new(); dim];
    for (alpha, map) in maps.iter_mut().enumerate() {
        for beta in 0..dim {
            for gamma in 0..dim {
                let v = f.get(alpha, beta, gamma);
                if v != 0.0 {
                    for m in 0..d {
                        map.insert((m * dim + beta, m * dim + gamma), I * v);
                    }
                }
            }
        }
    }
    Ok(maps
        .into_iter()
        .enumerate()
        .map(|(alpha, map)| QuadraticXPOperator::from_map(GaussLabel::Adjoint(alpha), map, Complex64::default()))
        .collect())
}

/// Linear combination of coordinates or momenta: (boson, coefficient).
type Lin = Vec<(usize, Complex64)>;

/// `x̂-side · p̂-side` product appended to `acc` with weight `w`.
fn add_xp(acc: &mut TermMap, xs: &Lin, ps: &Lin, w: Complex64) {
    for &(x, cx) in xs {
        for &(p, cp) in ps {
            *acc.entry((x, p)).or_default() += w * cx * cp;
        }
    }
}

/// `p̂-side · x̂-side` product, reordered to x-left form.
fn add_px(acc: &mut TermMap, constant: &mut Complex64, ps: &Lin, xs: &Lin, w: Complex64) {
    for &(p, cp) in ps {
        for &(x, cx) in xs {
            let c = w * cp * cx;
            *acc.entry((x, p)).or_default() += c;
            if x == p {
                *constant += -I * c;
            }
        }
    }
}

/// `Ĝ_{n,pq} = i Σ_j (−Z_j P̄_j + P_j Z̄_j − Z̄_{j,n−ĵ} P_{j,n−ĵ} + P̄_{j,n−ĵ} Z_{j,n−ĵ})_pq`,
/// exposed as the N² Hermitian components per site.
pub fn gauss_generators_orbifold(p: &OrbifoldParams) -> Result<Vec<QuadraticXPOperator>> {
    p.validate()?;
    let n = p.n;
    let s = 1.0 / 2f64.sqrt();
    // entry (r,c) of Z (bar = false) or Z̄ (bar = true) at a link
    let entry = |site: usize, dir: usize, r: usize, c: usize, bar: bool| -> Lin {
        if bar {
            vec![
                (p.boson(site, dir, c, r, Part::Re), Complex64::new(s, 0.0)),
                (p.boson(site, dir, c, r, Part::Im), Complex64::new(0.0, -s)),
            ]
        } else {
            vec![
                (p.boson(site, dir, r, c, Part::Re), Complex64::new(s, 0.0)),
                (p.boson(site, dir, r, c, Part::Im), Complex64::new(0.0, s)),
            ]
        }
    };
    let mut out = Vec::with_capacity(p.volume() * n * n);
    for site in 0..p.volume() {
        let coords = lattice_coords(site, p.l, p.d);
        let mut raw: Vec<Vec<(TermMap, Complex64)>> = vec![vec![(TermMap::new(), Complex64::default()); n]; n];
        for r in 0..n {
            for c in 0..n {
                let (acc, constant) = &mut raw[r][c];
                for j in 0..p.d {
                    let back = p.shifted_site(site, j, false);
                    for k in 0..n {
                        // −Z_j P̄_j
                        add_xp(acc, &entry(site, j, r, k, false), &entry(site, j, k, c, true), -I);
                        // +P_j Z̄_j
                        add_px(acc, constant, &entry(site, j, r, k, false), &entry(site, j, k, c, true), I);
                        // −Z̄_{j,n−ĵ} P_{j,n−ĵ}
                        add_xp(acc, &entry(back, j, r, k, true), &entry(back, j, k, c, false), -I);
                        // +P̄_{j,n−ĵ} Z_{j,n−ĵ}
                        add_px(acc, constant, &entry(back, j, r, k, true), &entry(back, j, k, c, false), I);
                    }
                }
            }
        }
        let label = |r: usize, c: usize, kind| GaussLabel::Site { site: coords.clone(), row: r, col: c, kind };
        for r in 0..n {
            let (m, k) = &raw[r][r];
            out.push(QuadraticXPOperator::from_map(label(r, r, ComponentKind::Diagonal), m.clone(), *k));
            for c in r + 1..n {
                let (m1, k1) = &raw[r][c];
                let (m2, k2) = &raw[c][r];
                let mut sym = TermMap::new();
                let mut anti = TermMap::new();
                for (key, v) in m1 {
                    *sym.entry(*key).or_default() += v * s;
                    *anti.entry(*key).or_default() += I * v * s;
                }
                for (key, v) in m2 {
                    *sym.entry(*key).or_default() += v * s;
                    *anti.entry(*key).or_default() += -I * v * s;
                }
                out.push(QuadraticXPOperator::from_map(
                    label(r, c, ComponentKind::Symmetric),
                    sym,
                    (k1 + k2) * s,
                ));
                out.push(QuadraticXPOperator::from_map(
                    label(r, c, ComponentKind::Antisymmetric),
                    anti,
                    I * (k1 - k2) * s,
                ));
            }
        }
    }
    Ok(out)
}
