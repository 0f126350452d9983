use serde::Serialize;

use super::{BosonLabel, BosonRegistry, Monomial, PolyHamiltonian};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalarParams {
    /// Sites per dimension.
    pub l: usize,
    /// Spatial dimension.
    pub d: usize,
    pub m2: f64,
    pub lambda: f64,
}

/// Linear index of lattice coordinates; the first coordinate varies fastest.
pub fn lattice_index(coords: &[usize], l: usize) -> usize {
    coords.iter().rev().fold(0, |acc, &c| acc * l + c)
}

pub fn lattice_coords(mut index: usize, l: usize, d: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(d);
    for _ in 0..d {
        out.push(index % l);
        index /= l;
    }
    out
}

/// Coordinates of `site + step·ĵ` with periodic wrap.
pub(crate) fn neighbor(coords: &[usize], dir: usize, forward: bool, l: usize) -> Vec<usize> {
    let mut c = coords.to_vec();
    c[dir] = if forward { (c[dir] + 1) % l } else { (c[dir] + l - 1) % l };
    c
}

/// Lattice φ⁴ theory on a periodic L^d lattice:
/// `V = Σ_n [Σ_j ½(φ_{n+ĵ} − φ_n)² + (m²/2)φ_n² + (λ/4)φ_n⁴]`.
///
/// Every (site, direction) link is kept, so for L = 2 each neighbouring pair
/// is coupled twice.
pub fn build_scalar_qft(p: &ScalarParams) -> Result<PolyHamiltonian> {
    let ScalarParams { l, d, m2, lambda } = *p;
    if l < 2 {
        return Err(invalid(format!("scalar lattice needs L >= 2, got {l}")));
    }
    if !(1..=3).contains(&d) {
        return Err(invalid(format!("scalar lattice needs d in 1..=3, got {d}")));
    }
    if !m2.is_finite() || !lambda.is_finite() || lambda < 0.0 {
        return Err(invalid("scalar couplings must be finite with lambda >= 0"));
    }
    let volume = l.pow(d as u32);
    let labels = (0..volume)
        .map(|i| BosonLabel::Site {
            site: lattice_coords(i, l, d),
        })
        .collect();
    let mut h = PolyHamiltonian::new(BosonRegistry::new(labels));
    for n in 0..volume {
        let coords = lattice_coords(n, l, d);
        for j in 0..d {
            let m = lattice_index(&neighbor(&coords, j, true, l), l);
            h.add_monomial(Monomial::pow(n, 2), 0.5)?;
            h.add_monomial(Monomial::pow(m, 2), 0.5)?;
            h.add_monomial(Monomial::from_factors(&[(n, 1), (m, 1)]), -1.0)?;
        }
        h.add_monomial(Monomial::pow(n, 2), m2 / 2.0)?;
        h.add_monomial(Monomial::pow(n, 4), lambda / 4.0)?;
    }
    h.prune();
    Ok(h)
}
