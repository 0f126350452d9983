//! First-order Trotter step synthesis.
//!
//! Diagonal terms become Z gadgets (CNOT ladder, one RZ, mirrored ladder).
//! Gadgets of weight ≥ 4 whose sorted qubits share the same first three
//! entries are emitted as a group that opens the three-qubit ladder once.
//! The kinetic term is diagonalized per boson with a swapless modified QFT;
//! its bit-reversed output is absorbed into the qubit labels of the ZZ gadgets.

use std::f64::consts::PI;

use crate::boson_encoding::{
    momentum_squared_pauli_linear, shift_operator_pauli, Boundary, DigitizationConfig, KineticRealization,
    MomentumConvention, Pauli, PauliString, PauliSum,
};
use crate::circuit_ir::{lower_cphase, Circuit, Gate, SegmentKind};
use crate::error::{guard, Error, Result};
use crate::hamiltonian_core::{EncodedHamiltonian, KineticSpec};

/// Largest Q accepted by the coordinate-shift kinetic path.
pub const MAX_SHIFT_KINETIC_Q: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    /// Drop controlled phases `P_k` with `k > approx_qft`.
    pub approx_qft: Option<u32>,
    pub share_ladders: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self { approx_qft: None, share_ladders: true }
    }
}

fn push_ladder(c: &mut Circuit, qs: &[usize]) -> Result<()> {
    for w in qs.windows(2) {
        c.push(Gate::Cnot { control: w[0], target: w[1] })?;
    }
    Ok(())
}

fn push_unladder(c: &mut Circuit, qs: &[usize]) -> Result<()> {
    for w in qs.windows(2).rev() {
        c.push(Gate::Cnot { control: w[0], target: w[1] })?;
    }
    Ok(())
}

/// Appends `exp(−iθ Z…Z)` on `qs` (sorted, nonempty).
fn push_z_gadget(c: &mut Circuit, qs: &[usize], theta: f64) -> Result<()> {
    push_ladder(c, qs)?;
    c.push(Gate::Rz { qubit: *qs.last().expect("nonempty"), angle: 2.0 * theta })?;
    push_unladder(c, qs)
}

/// `exp(−iθ s)` for a Z-only string on a register of `n_qubits`.
pub fn pauli_z_gadget(s: &PauliString, theta: f64, n_qubits: usize) -> Result<Circuit> {
    if !s.is_z_only() {
        return Err(Error::InvalidBasis(format!("Z gadget given non-Z string {s}")));
    }
    let mut c = Circuit::new(n_qubits);
    if theta == 0.0 {
        return Ok(c);
    }
    if s.is_identity() {
        c.push(Gate::GlobalPhase(-theta))?;
    } else {
        push_z_gadget(&mut c, &s.qubits(), theta)?;
    }
    Ok(c)
}

/// `exp(−iθ s)` for any Pauli string via H (X) and S†·H … H·S (Y) basis changes.
pub fn pauli_gadget(s: &PauliString, theta: f64, n_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits);
    if theta == 0.0 {
        return Ok(c);
    }
    if s.is_identity() {
        c.push(Gate::GlobalPhase(-theta))?;
        return Ok(c);
    }
    for &(q, p) in s.ops() {
        match p {
            Pauli::X => c.push(Gate::H(q))?,
            Pauli::Y => {
                c.push(Gate::Sdg(q))?;
                c.push(Gate::H(q))?;
            }
            Pauli::Z => {}
        }
    }
    push_z_gadget(&mut c, &s.qubits(), theta)?;
    for &(q, p) in s.ops() {
        match p {
            Pauli::X => c.push(Gate::H(q))?,
            Pauli::Y => {
                c.push(Gate::H(q))?;
                c.push(Gate::S(q))?;
            }
            Pauli::Z => {}
        }
    }
    Ok(c)
}

/// Nonzero Z strings of `v` with rotation angles `dt·c`, in canonical
/// (qubit tuple, coefficient) order.
fn sorted_gadgets(v: &PauliSum, dt: f64) -> Result<Vec<(Vec<usize>, f64)>> {
    if !v.is_z_only() {
        return Err(Error::InvalidBasis("potential step needs a Z-only sum".into()));
    }
    let mut out: Vec<(Vec<usize>, f64)> = v
        .terms()
        .map(|(s, c)| (s.qubits(), dt * c))
        .filter(|(_, a)| *a != 0.0)
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(out)
}

/// Consecutive runs sharing the first three qubits (weight ≥ 4 only).
pub(crate) fn prefix_groups(gadgets: &[(Vec<usize>, f64)]) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < gadgets.len() {
        let mut j = i + 1;
        if gadgets[i].0.len() >= 4 {
            while j < gadgets.len() && gadgets[j].0.len() >= 4 && gadgets[j].0[..3] == gadgets[i].0[..3] {
                j += 1;
            }
        }
        groups.push(i..j);
        i = j;
    }
    groups
}

/// `exp(−i dt V)` for a Z-only `V`; the constant becomes a global phase.
pub fn compile_potential_step(v: &PauliSum, dt: f64) -> Result<Circuit> {
    compile_potential_with(v, dt, true)
}

/// Same product of gadgets without ladder sharing.
pub fn compile_potential_step_unoptimized(v: &PauliSum, dt: f64) -> Result<Circuit> {
    compile_potential_with(v, dt, false)
}

fn compile_potential_with(v: &PauliSum, dt: f64, share: bool) -> Result<Circuit> {
    let gadgets = sorted_gadgets(v, dt)?;
    let mut c = Circuit::new(v.n_qubits);
    for g in prefix_groups(&gadgets) {
        let run = &gadgets[g];
        if share && run.len() > 1 {
            let head = &run[0].0[..3];
            push_ladder(&mut c, head)?;
            for (qs, theta) in run {
                push_z_gadget(&mut c, &qs[2..], *theta)?;
            }
            push_unladder(&mut c, head)?;
        } else {
            for (qs, theta) in run {
                push_z_gadget(&mut c, qs, *theta)?;
            }
        }
    }
    let phase = -dt * v.constant_offset;
    if phase != 0.0 {
        c.push(Gate::GlobalPhase(phase))?;
    }
    Ok(c)
}

/// Output bit position of qubit t after the swapless QFT.
pub fn bit_reverse(m: usize, q: usize) -> usize {
    (0..q).fold(0, |acc, i| acc | (((m >> i) & 1) << (q - 1 - i)))
}

/// Modified QFT `F_{nm} = e^{2πi(m+½)(n+½)/Λ}/√Λ` without the final swap
/// network: the circuit unitary is `R·F` with R the output bit reversal.
pub fn qft_circuit(q: usize, approx_threshold: Option<u32>) -> Result<Circuit> {
    if q == 0 {
        return Err(crate::error::invalid("QFT needs Q >= 1"));
    }
    let lambda = (1u64 << q) as f64;
    let mut c = Circuit::new(q);
    // diag(1, e^{iφ}) = e^{iφ/2} RZ(φ)
    let mut phase = PI / (2.0 * lambda);
    let mut half_shift = |c: &mut Circuit, qubit: usize, weight: u64| -> Result<()> {
        let phi = PI * weight as f64 / lambda;
        phase += phi / 2.0;
        c.push(Gate::Rz { qubit, angle: phi })
    };
    for i in 0..q {
        half_shift(&mut c, i, 1 << i)?;
    }
    for t in (0..q).rev() {
        c.push(Gate::H(t))?;
        for ctl in (0..t).rev() {
            let k = (t - ctl + 1) as u32;
            if approx_threshold.map_or(true, |kmax| k <= kmax) {
                for g in lower_cphase(k, ctl, t) {
                    c.push(g)?;
                }
            }
        }
    }
    for t in 0..q {
        half_shift(&mut c, t, 1 << (q - 1 - t))?;
    }
    c.push(Gate::GlobalPhase(phase))?;
    Ok(c)
}

/// ZZ gadgets of `pref·p̂²` on the bit-reversed momentum register.
fn momentum_block(p_squared: &PauliSum, q: usize, dt: f64, pref: f64) -> Result<Circuit> {
    let mut reversed = PauliSum::new(q);
    for (s, c) in p_squared.terms() {
        let qs: Vec<usize> = s.qubits().iter().map(|&i| q - 1 - i).collect();
        reversed.add_term(PauliString::z(&qs)?, pref * c)?;
    }
    reversed.constant_offset = pref * p_squared.constant_offset;
    compile_potential_step_unoptimized(&reversed, dt)
}

fn kinetic_qft(
    n_qubits: usize,
    n_bosons: usize,
    q: usize,
    p_squared: &PauliSum,
    pref: f64,
    dt: f64,
    opts: CompileOptions,
) -> Result<Circuit> {
    let mut out = Circuit::new(n_qubits);
    if dt == 0.0 {
        return Ok(out);
    }
    // F is symmetric, so conj(R·F) = R·F† maps coordinates to momenta.
    let forward = qft_circuit(q, opts.approx_qft)?.conjugate();
    let backward = forward.inverse();
    let block = momentum_block(p_squared, q, dt, pref)?;
    for b in 0..n_bosons {
        let map = |i: usize| b * q + i;
        let label = format!("boson {b}");
        out.append_segment(SegmentKind::Qft, label.clone(), &forward.remapped(n_qubits, map)?)?;
        out.append_segment(SegmentKind::Kinetic, label.clone(), &block.remapped(n_qubits, map)?)?;
        out.append_segment(SegmentKind::Qft, label, &backward.remapped(n_qubits, map)?)?;
    }
    Ok(out)
}

fn kinetic_shift(n_qubits: usize, n_bosons: usize, q: usize, shift: &PauliSum, delta_x: f64, pref: f64, dt: f64) -> Result<Circuit> {
    guard("coordinate-shift kinetic Q", q, MAX_SHIFT_KINETIC_Q)?;
    let mut out = Circuit::new(n_qubits);
    if dt == 0.0 {
        return Ok(out);
    }
    // pref·p̂² = pref·(2 − S − S†)/δ²
    let scale = pref / (delta_x * delta_x);
    let mut block = Circuit::new(q);
    for (s, c) in shift.terms() {
        block.append(&pauli_gadget(s, -dt * scale * c, q)?)?;
    }
    for b in 0..n_bosons {
        let mut seg = block.remapped(n_qubits, |i| b * q + i)?;
        seg.push(Gate::GlobalPhase(-dt * 2.0 * scale))?;
        out.append_segment(SegmentKind::Kinetic, format!("boson {b}"), &seg)?;
    }
    Ok(out)
}

/// `Π_b exp(−i dt p̂_b²/2)` for `n_bosons` bosons under `cfg`.
pub fn compile_kinetic_step(cfg: &DigitizationConfig, n_bosons: usize, dt: f64) -> Result<Circuit> {
    compile_kinetic_with(cfg, n_bosons, dt, 0.5, CompileOptions::default())
}

fn compile_kinetic_with(cfg: &DigitizationConfig, n_bosons: usize, dt: f64, pref: f64, opts: CompileOptions) -> Result<Circuit> {
    cfg.validate()?;
    let q = cfg.qubits_per_boson;
    let n_qubits = n_bosons * q;
    match cfg.kinetic {
        KineticRealization::MomentumQft => {
            if cfg.momentum != MomentumConvention::LinearSymmetric {
                return Err(Error::UnsupportedConvention(
                    "QFT kinetic path needs the linear-symmetric momentum convention".into(),
                ));
            }
            let p2 = momentum_squared_pauli_linear(cfg)?;
            kinetic_qft(n_qubits, n_bosons, q, &p2, pref, dt, opts)
        }
        KineticRealization::CoordinateShift => {
            if cfg.boundary != Boundary::Periodic {
                return Err(Error::UnsupportedConvention(
                    "coordinate kinetic term requires periodic boundary".into(),
                ));
            }
            guard("coordinate-shift kinetic Q", q, MAX_SHIFT_KINETIC_Q)?;
            let shift = shift_operator_pauli(q, Boundary::Periodic)?;
            kinetic_shift(n_qubits, n_bosons, q, &shift, cfg.delta_x(), pref, dt)
        }
    }
}

/// One first-order step `e^{−i dt K} e^{−i dt V}` (kinetic gates first).
pub fn trotter_step(enc: &EncodedHamiltonian, dt: f64) -> Result<Circuit> {
    trotter_step_with(enc, dt, CompileOptions::default())
}

pub fn trotter_step_with(enc: &EncodedHamiltonian, dt: f64, opts: CompileOptions) -> Result<Circuit> {
    let q = enc.cfg.qubits_per_boson;
    let n = enc.n_qubits;
    let kinetic = match &enc.kinetic {
        KineticSpec::MomentumQft { p_squared } => {
            kinetic_qft(n, enc.n_bosons, q, p_squared, enc.kinetic_prefactor, dt, opts)?
        }
        KineticSpec::CoordinateShift { shift, delta_x } => {
            kinetic_shift(n, enc.n_bosons, q, shift, *delta_x, enc.kinetic_prefactor, dt)?
        }
        KineticSpec::SineDiagonal { .. } => {
            return Err(Error::UnsupportedConvention(
                "sine momentum has no gate-level kinetic step".into(),
            ))
        }
    };
    let potential = compile_potential_with(&enc.potential, dt, opts.share_ladders)?;
    let mut out = Circuit::new(n);
    out.append(&kinetic)?;
    out.append_segment(SegmentKind::Potential, "potential", &potential)?;
    Ok(out)
}
