use num_complex::Complex64;
use serde::Serialize;

use super::{BosonLabel, BosonRegistry, Monomial, Part, PolyHamiltonian, PolyMatrix};
use crate::error::{invalid, Result};
use crate::sun_algebra::su_structure_constants;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixModelParams {
    pub n: usize,
    /// Number of matrices.
    pub d: usize,
    pub g2: f64,
    pub traceless: bool,
    /// Coefficient c of `c Σ_I (Tr X_I)²`; only for the non-traceless basis.
    pub trace_mass: Option<f64>,
}

impl MatrixModelParams {
    pub fn traceless(n: usize, d: usize, g2: f64) -> Self {
        Self {
            n,
            d,
            g2,
            traceless: true,
            trace_mass: None,
        }
    }
}

/// `V = −(g²/4) Σ_{I,J} Tr [X_I, X_J]²` with the sum over all ordered pairs.
///
/// Traceless basis: bosons `X_I^α` at index `I·(N²−1) + α`, with
/// `Tr [X_I,X_J]² = Σ C^{αβα′β′} X_I^α X_J^β X_I^α′ X_J^β′`.
///
/// Non-traceless basis: per matrix, the N diagonal entries followed by
/// (Re, Im) of each upper entry (i<j, lexicographic), with
/// `X_ij = (X^R + i X^I)/√2`; the commutator is expanded entrywise.
pub fn build_matrix_model(p: &MatrixModelParams) -> Result<PolyHamiltonian> {
    let MatrixModelParams { n, d, g2, traceless, trace_mass } = *p;
    if d == 0 {
        return Err(invalid("matrix model needs d >= 1"));
    }
    if !(g2.is_finite() && g2 >= 0.0) {
        return Err(invalid("matrix model coupling must satisfy g2 >= 0"));
    }
    if traceless {
        if n < 2 {
            return Err(invalid(format!("traceless matrix model needs N >= 2, got {n}")));
        }
        if trace_mass.is_some() {
            return Err(invalid("trace mass applies only to the non-traceless basis"));
        }
        build_traceless(n, d, g2)
    } else {
        if n < 1 {
            return Err(invalid("matrix model needs N >= 1"));
        }
        build_full(n, d, g2, trace_mass)
    }
}

fn build_traceless(n: usize, d: usize, g2: f64) -> Result<PolyHamiltonian> {
    let f = su_structure_constants(n)?;
    let dim = f.dim();
    let labels = (0..d)
        .flat_map(|i| (0..dim).map(move |a| BosonLabel::Adjoint { matrix: i, component: a }))
        .collect();
    let mut h = PolyHamiltonian::new(BosonRegistry::new(labels));
    let pairs = f.pairs_by_gamma();
    // Each unordered pair {I,J} appears twice in the ordered sum.
    for i in 0..d {
        for j in i + 1..d {
            for list in &pairs {
                for &(a, b, f1) in list {
                    for &(a2, b2, f2) in list {
                        // γ-summand of C^{αβα′β′} is −f_αβγ f_α′β′γ
                        let c_gamma = -f1 * f2;
                        let m = Monomial::from_factors(&[
                            (i * dim + a, 1),
                            (j * dim + b, 1),
                            (i * dim + a2, 1),
                            (j * dim + b2, 1),
                        ]);
                        h.add_monomial(m, -g2 / 2.0 * c_gamma)?;
                    }
                }
            }
        }
    }
    h.prune();
    Ok(h)
}

/// Boson offset of entry (row, col) inside one matrix of the full basis.
fn entry_bosons(n: usize) -> Vec<Vec<Option<(usize, usize)>>> {
    // (re index, im index) relative to the matrix block; diagonal has no im.
    let mut out = vec![vec![None; n]; n];
    let mut k = n;
    for i in 0..n {
        out[i][i] = Some((i, usize::MAX));
        for j in i + 1..n {
            out[i][j] = Some((k, k + 1));
            k += 2;
        }
    }
    out
}

fn full_labels(n: usize, d: usize) -> Vec<BosonLabel> {
    let mut labels = Vec::with_capacity(d * n * n);
    for m in 0..d {
        for i in 0..n {
            labels.push(BosonLabel::Entry { matrix: m, row: i, col: i, part: Part::Re });
        }
        for i in 0..n {
            for j in i + 1..n {
                labels.push(BosonLabel::Entry { matrix: m, row: i, col: j, part: Part::Re });
                labels.push(BosonLabel::Entry { matrix: m, row: i, col: j, part: Part::Im });
            }
        }
    }
    labels
}

/// Hermitian matrix of degree-1 polynomials for matrix `m` of the full basis.
pub(crate) fn hermitian_matrix_poly(n: usize, m: usize) -> PolyMatrix {
    let base = m * n * n;
    let s = 1.0 / 2f64.sqrt();
    let idx = entry_bosons(n);
    let mut x = PolyMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let (re, im) = idx[i][j].expect("upper triangle");
            if i == j {
                x.get_mut(i, i).add_term(Monomial::var(base + re), Complex64::new(1.0, 0.0));
            } else {
                x.get_mut(i, j).add_term(Monomial::var(base + re), Complex64::new(s, 0.0));
                x.get_mut(i, j).add_term(Monomial::var(base + im), Complex64::new(0.0, s));
                x.get_mut(j, i).add_term(Monomial::var(base + re), Complex64::new(s, 0.0));
                x.get_mut(j, i).add_term(Monomial::var(base + im), Complex64::new(0.0, -s));
            }
        }
    }
    x
}

fn build_full(n: usize, d: usize, g2: f64, trace_mass: Option<f64>) -> Result<PolyHamiltonian> {
    let mut h = PolyHamiltonian::new(BosonRegistry::new(full_labels(n, d)));
    let mats: Vec<PolyMatrix> = (0..d).map(|m| hermitian_matrix_poly(n, m)).collect();
    for i in 0..d {
        for j in i + 1..d {
            let mut comm = mats[i].mul(&mats[j]);
            comm.add_scaled(&mats[j].mul(&mats[i]), -1.0);
            let tr = comm.trace_of_product(&comm);
            check_real(&tr)?;
            h.add_poly(&tr.real_part(), -g2 / 2.0)?;
        }
    }
    if let Some(c) = trace_mass {
        if !c.is_finite() {
            return Err(invalid("trace mass must be finite"));
        }
        for x in &mats {
            let t = x.trace();
            h.add_poly(&t.mul(&t).real_part(), c)?;
        }
    }
    h.prune();
    Ok(h)
}

pub(crate) fn check_real(p: &super::ComplexPoly) -> Result<()> {
    let scale = p.terms.values().map(|c| c.norm()).fold(1.0, f64::max);
    if p.max_imag() > 1e-10 * scale {
        return Err(invalid(format!(
            "expanded trace has imaginary part {}",
            p.max_imag()
        )));
    }
    Ok(())
}
