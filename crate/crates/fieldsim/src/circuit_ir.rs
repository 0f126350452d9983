//! Gate lists over {CNOT, RZ, H, S, S†, T, T†} with an explicit global-phase
//! marker, exact counting, dense unitaries for small widths, and a line-based
//! text format.
//!
//! `RZ(φ) = exp(−iφZ/2)` and `GlobalPhase(φ)` multiplies by `e^{iφ}`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{guard, invalid, Error, Result};
use crate::simulator::apply_gate_to_amplitudes;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, angle: f64 },
    H(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    GlobalPhase(f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot { control, target } => vec![control, target],
            Gate::Rz { qubit, .. } => vec![qubit],
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::T(q) | Gate::Tdg(q) => vec![q],
            Gate::GlobalPhase(_) => Vec::new(),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= n_qubits {
                return Err(invalid(format!("gate {self:?} touches qubit {q} >= {n_qubits}")));
            }
        }
        match *self {
            Gate::Cnot { control, target } if control == target => {
                Err(invalid(format!("CNOT control equals target ({control})")))
            }
            Gate::Rz { angle, .. } | Gate::GlobalPhase(angle) if !angle.is_finite() => {
                Err(invalid("non-finite angle"))
            }
            _ => Ok(()),
        }
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::GlobalPhase(a) => Gate::GlobalPhase(-a),
            g => g,
        }
    }

    /// Gate whose matrix is the entrywise complex conjugate.
    pub fn conjugate(&self) -> Gate {
        match *self {
            Gate::Rz { qubit, angle } => Gate::Rz { qubit, angle: -angle },
            Gate::S(q) => Gate::Sdg(q),
            Gate::Sdg(q) => Gate::S(q),
            Gate::T(q) => Gate::Tdg(q),
            Gate::Tdg(q) => Gate::T(q),
            Gate::GlobalPhase(a) => Gate::GlobalPhase(-a),
            g => g,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Qft,
    Kinetic,
    Potential,
    Other,
}

/// Provenance of a contiguous gate range `start..end`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub label: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub n_qubits: usize,
    gates: Vec<Gate>,
    segments: Vec<Segment>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            segments: Vec::new(),
        }
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate(self.n_qubits)?;
        self.gates.push(g);
        Ok(())
    }

    /// Appends `other`, shifting its segment ranges.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::WidthMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        let off = self.gates.len();
        self.gates.extend_from_slice(&other.gates);
        self.segments.extend(other.segments.iter().map(|s| Segment {
            start: s.start + off,
            end: s.end + off,
            ..s.clone()
        }));
        Ok(())
    }

    /// Appends `body` as one labelled segment (nested segments are dropped).
    pub fn append_segment(&mut self, kind: SegmentKind, label: impl Into<String>, body: &Circuit) -> Result<()> {
        if body.n_qubits > self.n_qubits {
            return Err(Error::WidthMismatch {
                expected: self.n_qubits,
                got: body.n_qubits,
            });
        }
        let start = self.gates.len();
        self.gates.extend_from_slice(&body.gates);
        self.segments.push(Segment {
            kind,
            label: label.into(),
            start,
            end: self.gates.len(),
        });
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            segments: Vec::new(),
        }
    }

    /// Circuit implementing the entrywise complex conjugate unitary.
    pub fn conjugate(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().map(Gate::conjugate).collect(),
            segments: Vec::new(),
        }
    }

    /// Relabels qubits through `map` into a register of `n_qubits`.
    pub fn remapped(&self, n_qubits: usize, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        let mut out = Circuit::new(n_qubits);
        for g in &self.gates {
            out.push(match *g {
                Gate::Cnot { control, target } => Gate::Cnot { control: map(control), target: map(target) },
                Gate::Rz { qubit, angle } => Gate::Rz { qubit: map(qubit), angle },
                Gate::H(q) => Gate::H(map(q)),
                Gate::S(q) => Gate::S(map(q)),
                Gate::Sdg(q) => Gate::Sdg(map(q)),
                Gate::T(q) => Gate::T(map(q)),
                Gate::Tdg(q) => Gate::Tdg(map(q)),
                Gate::GlobalPhase(a) => Gate::GlobalPhase(a),
            })?;
        }
        Ok(out)
    }
}

/// Controlled phase `diag(1,1,1,e^{iφ})`, φ = 2π/2^k, as 2 CNOT + 3 RZ and
/// a global phase `e^{iφ/4}`.
pub fn lower_cphase(k: u32, control: usize, target: usize) -> Vec<Gate> {
    let phi = 2.0 * PI / 2f64.powi(k as i32);
    lower_cphase_angle(phi, control, target)
}

pub(crate) fn lower_cphase_angle(phi: f64, control: usize, target: usize) -> Vec<Gate> {
    vec![
        Gate::GlobalPhase(phi / 4.0),
        Gate::Rz { qubit: control, angle: phi / 2.0 },
        Gate::Cnot { control, target },
        Gate::Rz { qubit: target, angle: -phi / 2.0 },
        Gate::Cnot { control, target },
        Gate::Rz { qubit: target, angle: phi / 2.0 },
    ]
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    pub cnot: usize,
    pub rz: usize,
    pub h: usize,
    pub s: usize,
    pub sdg: usize,
    pub t: usize,
    pub tdg: usize,
    pub global_phase: usize,
    pub depth: usize,
}

impl GateCounts {
    pub fn clifford_1q(&self) -> usize {
        self.h + self.s + self.sdg
    }

    /// Adds gate totals; depth of a concatenation is not additive and is summed
    /// as an upper bound.
    pub fn add(&mut self, o: &GateCounts) {
        self.cnot += o.cnot;
        self.rz += o.rz;
        self.h += o.h;
        self.s += o.s;
        self.sdg += o.sdg;
        self.t += o.t;
        self.tdg += o.tdg;
        self.global_phase += o.global_phase;
        self.depth += o.depth;
    }
}

pub fn count_gates(gates: &[Gate], n_qubits: usize) -> GateCounts {
    let mut c = GateCounts::default();
    let mut level = vec![0usize; n_qubits];
    for g in gates {
        match g {
            Gate::Cnot { .. } => c.cnot += 1,
            Gate::Rz { .. } => c.rz += 1,
            Gate::H(_) => c.h += 1,
            Gate::S(_) => c.s += 1,
            Gate::Sdg(_) => c.sdg += 1,
            Gate::T(_) => c.t += 1,
            Gate::Tdg(_) => c.tdg += 1,
            Gate::GlobalPhase(_) => c.global_phase += 1,
        }
        let qs = g.qubits();
        if qs.is_empty() {
            continue;
        }
        let layer = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qs {
            level[q] = layer;
        }
        c.depth = c.depth.max(layer);
    }
    c
}

/// Exact per-kind totals; depth is the greedy earliest-slot layering,
/// ignoring global-phase markers.
pub fn count(c: &Circuit) -> GateCounts {
    count_gates(&c.gates, c.n_qubits)
}

pub const MAX_UNITARY_QUBITS: usize = 12;

pub fn unitary(c: &Circuit) -> Result<DMatrix<Complex64>> {
    guard("unitary width", c.n_qubits, MAX_UNITARY_QUBITS)?;
    let dim = 1usize << c.n_qubits;
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    let mut col = vec![Complex64::default(); dim];
    for j in 0..dim {
        col.iter_mut().for_each(|z| *z = Complex64::default());
        col[j] = Complex64::new(1.0, 0.0);
        for g in &c.gates {
            apply_gate_to_amplitudes(&mut col, *g);
        }
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    Ok(u)
}

/// Serializes to the line format (`qubits <n>` header, one gate per line,
/// angles with 17 significant digits).
pub fn to_text(c: &Circuit) -> String {
    let mut s = String::new();
    writeln!(s, "qubits {}", c.n_qubits).expect("write to string");
    for g in &c.gates {
        match *g {
            Gate::Cnot { control, target } => writeln!(s, "cnot q{control} q{target}"),
            Gate::Rz { qubit, angle } => writeln!(s, "rz q{qubit} {angle:.16e}"),
            Gate::H(q) => writeln!(s, "h q{q}"),
            Gate::S(q) => writeln!(s, "s q{q}"),
            Gate::Sdg(q) => writeln!(s, "sdg q{q}"),
            Gate::T(q) => writeln!(s, "t q{q}"),
            Gate::Tdg(q) => writeln!(s, "tdg q{q}"),
            Gate::GlobalPhase(a) => writeln!(s, "gphase {a:.16e}"),
        }
        .expect("write to string");
    }
    s
}

pub fn parse_text(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let qubit = |f: &str| -> Result<usize> {
            f.strip_prefix('q')
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| err(&format!("bad qubit `{f}`")))
        };
        let angle = |f: &str| -> Result<f64> {
            f.parse::<f64>().map_err(|_| err(&format!("bad angle `{f}`")))
        };
        let Some(c) = circuit.as_mut() else {
            match fields.as_slice() {
                ["qubits", n] => {
                    let n = n.parse().map_err(|_| err("bad qubit count"))?;
                    circuit = Some(Circuit::new(n));
                    continue;
                }
                _ => return Err(err("expected `qubits <n>` header")),
            }
        };
        let gate = match fields.as_slice() {
            ["cnot", a, b] => Gate::Cnot { control: qubit(a)?, target: qubit(b)? },
            ["rz", q, a] => Gate::Rz { qubit: qubit(q)?, angle: angle(a)? },
            ["h", q] => Gate::H(qubit(q)?),
            ["s", q] => Gate::S(qubit(q)?),
            ["sdg", q] => Gate::Sdg(qubit(q)?),
            ["t", q] => Gate::T(qubit(q)?),
            ["tdg", q] => Gate::Tdg(qubit(q)?),
            ["gphase", a] => Gate::GlobalPhase(angle(a)?),
            _ => return Err(err(&format!("unknown gate line `{line}`"))),
        };
        c.push(gate).map_err(|e| err(&e.to_string()))?;
    }
    circuit.ok_or(Error::Parse { line: 0, msg: "missing header".into() })
}
