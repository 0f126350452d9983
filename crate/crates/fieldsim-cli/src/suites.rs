use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use fieldsim::boson_encoding::{DigitizationConfig, KineticRealization, Pauli, PauliString, PauliSum};
use fieldsim::circuit_ir::{count, lower_cphase, unitary, Circuit};
use fieldsim::hamiltonian_core::{build_anharmonic_oscillator, build_matrix_model, MatrixModelParams};
use fieldsim::resource_estimator::scaling_fit;
use fieldsim::simulator::{modified_dft, pauli_sum_matrix, trotter_error, ExactPropagator};
use fieldsim::trotter_compiler::{bit_reverse, compile_potential_step, pauli_gadget, pauli_z_gadget, qft_circuit};

use crate::TheoryName;

const UNITARY_TOL: f64 = 1e-10;
const SLOPE_TOL: f64 = 0.15;

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {}: {} | {}", self.name, if self.pass { "PASS" } else { "FAIL" }, self.detail)
    }
}

fn within(name: &str, err: f64, tol: f64) -> Check {
    Check { name: name.into(), pass: err <= tol, detail: format!("max error {err:.3e} (tol {tol:.0e})") }
}

fn max_dist(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn gadget_error(s: &PauliString, theta: f64, n: usize, z_only: bool) -> f64 {
    let c = if z_only { pauli_z_gadget(s, theta, n) } else { pauli_gadget(s, theta, n) }.expect("valid gadget");
    let mut p = PauliSum::new(n);
    p.add_term(s.clone(), 1.0).expect("in range");
    let want = ExactPropagator::new(&pauli_sum_matrix(&p).expect("small")).expect("hermitian").unitary(theta);
    max_dist(&unitary(&c).expect("small"), &want)
}

pub fn gadgets() -> Vec<Check> {
    let thetas = [0.1, -0.1, 1.3, -1.3, 2.7];
    let mut z = 0.0f64;
    for w in 1..=5 {
        let s = PauliString::z(&(0..w).collect::<Vec<_>>()).expect("valid");
        for &t in &thetas {
            z = z.max(gadget_error(&s, t, 5, true));
        }
    }
    let mut xy = 0.0f64;
    for ops in [
        vec![(0, Pauli::X)],
        vec![(0, Pauli::Y)],
        vec![(0, Pauli::X), (1, Pauli::Y)],
        vec![(0, Pauli::Y), (1, Pauli::Z), (2, Pauli::X)],
    ] {
        let s = PauliString::new(ops).expect("valid");
        for &t in &thetas {
            xy = xy.max(gadget_error(&s, t, 3, false));
        }
    }
    let mut cp = 0.0f64;
    for k in 1..=6 {
        let c = Circuit::from_gates(2, lower_cphase(k, 0, 1)).expect("valid");
        let mut want = DMatrix::<Complex64>::identity(4, 4);
        want[(3, 3)] = Complex64::from_polar(1.0, 2.0 * PI / f64::powi(2.0, k as i32));
        cp = cp.max(max_dist(&unitary(&c).expect("small"), &want));
    }
    let w4 = count(&pauli_z_gadget(&PauliString::z(&[0, 1, 2, 3]).expect("valid"), 0.3, 4).expect("valid"));
    let mut group = Vec::new();
    for q in 2..=6 {
        let mut v = PauliSum::new(3 + q);
        for t in 0..q {
            v.add_term(PauliString::z(&[0, 1, 2, 3 + t]).expect("valid"), 0.1 * (t + 1) as f64).expect("in range");
        }
        group.push((q, count(&compile_potential_step(&v, 0.5).expect("valid")).cnot));
    }
    vec![
        within("z gadgets w<=5", z, UNITARY_TOL),
        within("x/y gadgets", xy, UNITARY_TOL),
        within("controlled phase k<=6", cp, UNITARY_TOL),
        Check {
            name: "weight-4 gadget counts".into(),
            pass: (w4.cnot, w4.rz) == (6, 1),
            detail: format!("{} CNOT + {} RZ", w4.cnot, w4.rz),
        },
        Check {
            name: "shared-prefix group 2Q+4".into(),
            pass: group.iter().all(|&(q, c)| c == 2 * q + 4),
            detail: group.iter().map(|(q, c)| format!("Q={q}: {c}")).collect::<Vec<_>>().join(", "),
        },
    ]
}

pub fn qft() -> Vec<Check> {
    let mut exact = 0.0f64;
    let mut counts = true;
    for q in 1..=5 {
        let c = qft_circuit(q, None).expect("valid");
        let f = modified_dft(q);
        let l = 1usize << q;
        let want = DMatrix::from_fn(l, l, |r, col| f[(bit_reverse(r, q), col)]);
        exact = exact.max(max_dist(&unitary(&c).expect("small"), &want));
        let k = count(&c);
        counts &= k.cnot == q * (q - 1) && k.h == q;
    }
    let q = 5;
    let full = unitary(&qft_circuit(q, None).expect("valid")).expect("small");
    let errs: Vec<f64> = (1..=q as u32)
        .map(|k| max_dist(&unitary(&qft_circuit(q, Some(k)).expect("valid")).expect("small"), &full))
        .collect();
    let monotone = errs.windows(2).all(|w| w[1] <= w[0] + 1e-12) && errs[q - 1] < UNITARY_TOL;
    vec![
        within("exact qft Q<=5", exact, UNITARY_TOL),
        Check { name: "qft counts".into(), pass: counts, detail: "CNOT = Q(Q-1), H = Q".into() },
        Check {
            name: "approximate qft convergence".into(),
            pass: monotone,
            detail: format!("Q=5 errors by threshold {}", errs.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>().join(", ")),
        },
    ]
}

pub fn trotter(theory: TheoryName) -> Result<Vec<Check>, String> {
    let (h, cfg) = match theory {
        TheoryName::Anharmonic => (build_anharmonic_oscillator(), DigitizationConfig::new(3, 3.0)),
        // p² is proportional to the identity at Q = 1 on the QFT path
        TheoryName::MatrixModel => (
            build_matrix_model(&MatrixModelParams::traceless(2, 2, 1.0)).map_err(|e| e.to_string())?,
            DigitizationConfig::new(1, 1.5).with_kinetic(KineticRealization::CoordinateShift),
        ),
        _ => return Err("trotter suite supports --theory anharmonic or matrix-model".into()),
    };
    let ns = [4usize, 8, 16, 32];
    let mut pts = Vec::new();
    for n in ns {
        let e = trotter_error(&h, &cfg, 1.0, n, None).map_err(|e| e.to_string())?;
        pts.push((n as f64, e.state_error));
    }
    let slope = scaling_fit(&pts).map_err(|e| e.to_string())?;
    Ok(vec![Check {
        name: "first-order trotter slope".into(),
        pass: (slope + 1.0).abs() <= SLOPE_TOL,
        detail: format!(
            "slope {slope:.3} (want -1 +- {SLOPE_TOL}); errors {}",
            pts.iter().map(|p| format!("n={}: {:.3e}", p.0, p.1)).collect::<Vec<_>>().join(", ")
        ),
    }])
}
