use num_complex::Complex64;
use serde::Serialize;

use super::matrix_model::check_real;
use super::scalar::{lattice_coords, lattice_index, neighbor};
use super::{BosonLabel, BosonRegistry, ComplexPoly, Monomial, Part, PolyHamiltonian, PolyMatrix};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbifoldParams {
    pub n: usize,
    pub d: usize,
    pub l: usize,
    /// Coupling g²; for d = 2 pass the already rescaled value.
    pub g2: f64,
    /// Lattice spacing.
    pub a: f64,
    pub m2: f64,
    pub mu2: f64,
}

impl OrbifoldParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(invalid("orbifold lattice needs N >= 1"));
        }
        if !(2..=3).contains(&self.d) {
            return Err(invalid(format!("orbifold lattice needs d in {{2,3}}, got {}", self.d)));
        }
        if self.l < 2 {
            return Err(invalid(format!("orbifold lattice needs L >= 2, got {}", self.l)));
        }
        if !(self.g2 > 0.0 && self.a > 0.0 && self.g2.is_finite() && self.a.is_finite()) {
            return Err(invalid("orbifold lattice needs g2 > 0 and a > 0"));
        }
        if !(self.m2 >= 0.0 && self.mu2 >= 0.0) {
            return Err(invalid("orbifold masses must be non-negative"));
        }
        Ok(())
    }

    pub fn volume(&self) -> usize {
        self.l.pow(self.d as u32)
    }

    pub fn n_bosons(&self) -> usize {
        2 * self.d * self.n * self.n * self.volume()
    }

    /// Boson index of `Z^{part}_{dir, site; row col}`.
    pub fn boson(&self, site: usize, dir: usize, row: usize, col: usize, part: Part) -> usize {
        let p = match part {
            Part::Re => 0,
            Part::Im => 1,
        };
        (((site * self.d + dir) * self.n + row) * self.n + col) * 2 + p
    }

    pub(crate) fn labels(&self) -> Vec<BosonLabel> {
        let mut out = Vec::with_capacity(self.n_bosons());
        for site in 0..self.volume() {
            let coords = lattice_coords(site, self.l, self.d);
            for dir in 0..self.d {
                for row in 0..self.n {
                    for col in 0..self.n {
                        for part in [Part::Re, Part::Im] {
                            out.push(BosonLabel::Link { site: coords.clone(), dir, row, col, part });
                        }
                    }
                }
            }
        }
        out
    }

    /// Link matrix `Z_{dir,site}` with entries `(x^R + i x^I)/√2`.
    pub(crate) fn link(&self, site: usize, dir: usize) -> PolyMatrix {
        let s = 1.0 / 2f64.sqrt();
        let mut z = PolyMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                let e = z.get_mut(r, c);
                e.add_term(Monomial::var(self.boson(site, dir, r, c, Part::Re)), Complex64::new(s, 0.0));
                e.add_term(Monomial::var(self.boson(site, dir, r, c, Part::Im)), Complex64::new(0.0, s));
            }
        }
        z
    }

    pub(crate) fn shifted_site(&self, site: usize, dir: usize, forward: bool) -> usize {
        let coords = lattice_coords(site, self.l, self.d);
        lattice_index(&neighbor(&coords, dir, forward, self.l), self.l)
    }
}

/// `Σ_{ab} |P_ab|²` for a matrix of polynomials.
fn sum_abs_sq(p: &PolyMatrix) -> ComplexPoly {
    let mut out = ComplexPoly::zero();
    for e in &p.entries {
        out.add_scaled(&e.mul(&e.conj()), Complex64::new(1.0, 0.0));
    }
    out
}

/// Orbifold-lattice Yang–Mills on a periodic L^d lattice:
///
/// `V = Σ_n Tr[ g²/(2a³) |Σ_j (Z_j Z̄_j − Z̄_{j,n−ĵ} Z_{j,n−ĵ})|²
///            + 2g²/a³ Σ_{j<k} |Z_{j,n} Z_{k,n+ĵ} − Z_{k,n} Z_{j,n+k̂}|² ] + ΔV`
///
/// with `ΔV = m²g²/(2a) Σ Tr|Z Z̄ − a/(2g²)|² + Nμ²g²/(2a) Σ |Tr(Z Z̄)/N − a/(2g²)|²`.
/// The kinetic term `Σ Tr(P P̄)` is `½ Σ (p_R² + p_I²)`.
pub fn build_orbifold_ym(p: &OrbifoldParams) -> Result<PolyHamiltonian> {
    p.validate()?;
    let (n, d, a, g2) = (p.n, p.d, p.a, p.g2);
    let volume = p.volume();
    let mut h = PolyHamiltonian::new(BosonRegistry::new(p.labels()));
    let links: Vec<Vec<PolyMatrix>> = (0..volume)
        .map(|s| (0..d).map(|j| p.link(s, j)).collect())
        .collect();
    let bars: Vec<Vec<PolyMatrix>> = links
        .iter()
        .map(|row| row.iter().map(PolyMatrix::bar).collect())
        .collect();
    let zzbar: Vec<Vec<PolyMatrix>> = (0..volume)
        .map(|s| (0..d).map(|j| links[s][j].mul(&bars[s][j])).collect())
        .collect();
    let shift = a / (2.0 * g2);

    for site in 0..volume {
        // Gauss-type term
        let mut m = PolyMatrix::zeros(n);
        for j in 0..d {
            let back = p.shifted_site(site, j, false);
            m.add_scaled(&zzbar[site][j], 1.0);
            m.add_scaled(&bars[back][j].mul(&links[back][j]), -1.0);
        }
        let t = m.trace_of_product(&m);
        check_real(&t)?;
        h.add_poly(&t.real_part(), g2 / (2.0 * a.powi(3)))?;

        // plaquettes
        for j in 0..d {
            for k in j + 1..d {
                let sj = p.shifted_site(site, j, true);
                let sk = p.shifted_site(site, k, true);
                let mut plaq = links[site][j].mul(&links[sj][k]);
                plaq.add_scaled(&links[site][k].mul(&links[sk][j]), -1.0);
                let t = sum_abs_sq(&plaq);
                check_real(&t)?;
                h.add_poly(&t.real_part(), 2.0 * g2 / a.powi(3))?;
            }
        }

        // ΔH
        for j in 0..d {
            if p.m2 > 0.0 {
                let mut k = zzbar[site][j].clone();
                k.add_scaled(&PolyMatrix::identity_scaled(n, shift), -1.0);
                let t = k.trace_of_product(&k);
                check_real(&t)?;
                h.add_poly(&t.real_part(), p.m2 * g2 / (2.0 * a))?;
            }
            if p.mu2 > 0.0 {
                let mut s = zzbar[site][j].trace();
                s = {
                    let mut scaled = ComplexPoly::zero();
                    scaled.add_scaled(&s, Complex64::new(1.0 / n as f64, 0.0));
                    scaled.add_term(Monomial::one(), Complex64::new(-shift, 0.0));
                    scaled
                };
                let t = s.mul(&s);
                check_real(&t)?;
                h.add_poly(&t.real_part(), n as f64 * p.mu2 * g2 / (2.0 * a))?;
            }
        }
    }
    h.prune();
    Ok(h)
}
