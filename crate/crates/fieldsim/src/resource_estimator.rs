//! Gate counts for compiled Trotter steps, the same counts in closed form
//! from the Pauli inventory, T-count models, and scaling fits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::boson_encoding::{shift_operator_pauli, Boundary, DigitizationConfig, KineticRealization, Pauli};
use crate::circuit_ir::{count_gates, Circuit, GateCounts, SegmentKind};
use crate::error::{invalid, Error, Result};
use crate::hamiltonian_core::{
    build_anharmonic_oscillator, build_matrix_model, build_orbifold_ym, build_scalar_qft, pauli_encode,
    MatrixModelParams, OrbifoldParams, PolyHamiltonian, ScalarParams,
};
use crate::trotter_compiler::{prefix_groups, CompileOptions, MAX_SHIFT_KINETIC_Q};

/// Number of T gates charged per RZ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TModel {
    PerRzFixed { t_typ: u32 },
    /// `⌈3 log₂(1/ε)⌉`.
    RossSelinger { epsilon: f64 },
}

impl TModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TModel::PerRzFixed { t_typ } if !(10..=50).contains(&t_typ) => {
                Err(invalid(format!("T_typ must lie in 10..=50, got {t_typ}")))
            }
            TModel::RossSelinger { epsilon } if !(epsilon > 0.0 && epsilon < 1.0) => {
                Err(invalid(format!("Ross-Selinger epsilon must lie in (0,1), got {epsilon}")))
            }
            _ => Ok(()),
        }
    }

    pub fn per_rz(&self) -> u64 {
        match *self {
            TModel::PerRzFixed { t_typ } => t_typ as u64,
            TModel::RossSelinger { epsilon } => (3.0 * (1.0 / epsilon).log2()).ceil() as u64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TModelReport {
    pub model: TModel,
    pub per_rz: u64,
    /// Logarithm base of the Ross–Selinger formula.
    pub log_base: Option<u32>,
}

impl From<TModel> for TModelReport {
    fn from(model: TModel) -> Self {
        Self {
            model,
            per_rz: model.per_rz(),
            log_base: matches!(model, TModel::RossSelinger { .. }).then_some(2),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SegmentCounts {
    pub cnot: usize,
    pub rz: usize,
    pub clifford_1q: usize,
    pub t_explicit: usize,
}

impl SegmentCounts {
    fn from_counts(k: &GateCounts) -> Self {
        Self {
            cnot: k.cnot,
            rz: k.rz,
            clifford_1q: k.clifford_1q(),
            t_explicit: k.t + k.tdg,
        }
    }

    fn add(&mut self, o: &SegmentCounts) {
        self.cnot += o.cnot;
        self.rz += o.rz;
        self.clifford_1q += o.clifford_1q;
        self.t_explicit += o.t_explicit;
    }

    fn scaled(&self, k: usize) -> Self {
        Self {
            cnot: self.cnot * k,
            rz: self.rz * k,
            clifford_1q: self.clifford_1q * k,
            t_explicit: self.t_explicit * k,
        }
    }
}

/// Table 1 scaling of one theory, as formula strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalingMeta {
    pub qubits: &'static str,
    pub t_potential: &'static str,
    pub t_kinetic: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub qubits: usize,
    pub cnot: usize,
    pub rz: usize,
    pub clifford_1q: usize,
    pub t_explicit: usize,
    pub t_estimate_model: TModelReport,
    /// `rz · per_rz + t_explicit`.
    pub t_count: u64,
    /// Greedy layered depth; absent for closed-form reports.
    pub depth: Option<usize>,
    /// Keyed by `qft`, `kinetic`, `potential`, `other`.
    pub breakdown: BTreeMap<String, SegmentCounts>,
    pub scaling: Option<ScalingMeta>,
}

fn segment_key(kind: SegmentKind) -> &'static str {
    match kind {
        SegmentKind::Qft => "qft",
        SegmentKind::Kinetic => "kinetic",
        SegmentKind::Potential => "potential",
        SegmentKind::Other => "other",
    }
}

impl ResourceReport {
    fn from_breakdown(
        qubits: usize,
        mut breakdown: BTreeMap<String, SegmentCounts>,
        model: TModel,
        depth: Option<usize>,
        scaling: Option<ScalingMeta>,
    ) -> Result<Self> {
        model.validate()?;
        breakdown.retain(|_, v| *v != SegmentCounts::default());
        let mut total = SegmentCounts::default();
        for v in breakdown.values() {
            total.add(v);
        }
        let per_rz = model.per_rz();
        Ok(Self {
            qubits,
            cnot: total.cnot,
            rz: total.rz,
            clifford_1q: total.clifford_1q,
            t_explicit: total.t_explicit,
            t_estimate_model: model.into(),
            t_count: total.rz as u64 * per_rz + total.t_explicit as u64,
            depth,
            breakdown,
            scaling,
        })
    }

    /// T count of one breakdown entry under the report's model.
    pub fn t_count_of(&self, key: &str) -> u64 {
        self.breakdown
            .get(key)
            .map(|s| s.rz as u64 * self.t_estimate_model.per_rz + s.t_explicit as u64)
            .unwrap_or(0)
    }
}

/// Exact counts of a compiled circuit.
pub fn estimate_circuit(c: &Circuit, model: TModel) -> Result<ResourceReport> {
    let mut breakdown: BTreeMap<String, SegmentCounts> = BTreeMap::new();
    let mut covered = vec![false; c.len()];
    for s in c.segments() {
        let k = count_gates(&c.gates()[s.start..s.end], c.n_qubits);
        breakdown
            .entry(segment_key(s.kind).to_string())
            .or_default()
            .add(&SegmentCounts::from_counts(&k));
        covered[s.start..s.end].iter_mut().for_each(|b| *b = true);
    }
    let rest: Vec<_> = c
        .gates()
        .iter()
        .zip(&covered)
        .filter(|(_, &cov)| !cov)
        .map(|(g, _)| *g)
        .collect();
    let k = count_gates(&rest, c.n_qubits);
    let other = SegmentCounts::from_counts(&k);
    if other != SegmentCounts::default() {
        breakdown.entry("other".into()).or_default().add(&other);
    }
    let depth = crate::circuit_ir::count(c).depth;
    ResourceReport::from_breakdown(c.n_qubits, breakdown, model, Some(depth), None)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "theory", rename_all = "snake_case")]
pub enum Theory {
    Anharmonic,
    Scalar(ScalarParams),
    MatrixModel(MatrixModelParams),
    Orbifold(OrbifoldParams),
}

impl Theory {
    pub fn name(&self) -> &'static str {
        match self {
            Theory::Anharmonic => "anharmonic",
            Theory::Scalar(_) => "scalar",
            Theory::MatrixModel(_) => "matrix_model",
            Theory::Orbifold(_) => "orbifold",
        }
    }

    pub fn build(&self) -> Result<PolyHamiltonian> {
        match self {
            Theory::Anharmonic => Ok(build_anharmonic_oscillator()),
            Theory::Scalar(p) => build_scalar_qft(p),
            Theory::MatrixModel(p) => build_matrix_model(p),
            Theory::Orbifold(p) => build_orbifold_ym(p),
        }
    }

    pub fn scaling(&self) -> Option<ScalingMeta> {
        match self {
            Theory::Anharmonic => None,
            Theory::Scalar(_) => Some(ScalingMeta {
                qubits: "V_lattice*Q",
                t_potential: "V_lattice*binom(Q,4)",
                t_kinetic: "V_lattice*Q*(Q-1)",
            }),
            Theory::MatrixModel(_) => Some(ScalingMeta {
                qubits: "d*N^2*Q",
                t_potential: "d*(d-1)*N^4*Q^4",
                t_kinetic: "d*N^2*Q*(Q-1)",
            }),
            Theory::Orbifold(_) => Some(ScalingMeta {
                qubits: "2*d*N^2*V_lattice*Q",
                t_potential: "d^2*V_lattice*N^4*Q^4",
                t_kinetic: "N^2*d*V_lattice*Q*(Q-1)",
            }),
        }
    }
}

/// Controlled phases kept in a Q-qubit QFT with threshold `k_max`.
pub fn qft_cphase_count(q: usize, approx: Option<u32>) -> usize {
    (1..q)
        .filter(|&dist| approx.map_or(true, |k| (dist as u32) < k))
        .map(|dist| q - dist)
        .sum()
}

fn qft_counts(q: usize, approx: Option<u32>) -> SegmentCounts {
    let cp = qft_cphase_count(q, approx);
    SegmentCounts {
        cnot: 2 * cp,
        rz: 3 * cp + 2 * q,
        clifford_1q: q,
        t_explicit: 0,
    }
}

/// Kinetic-block counts per boson: (qft, kinetic).
fn kinetic_counts_per_boson(cfg: &DigitizationConfig, approx: Option<u32>) -> Result<(SegmentCounts, SegmentCounts)> {
    let q = cfg.qubits_per_boson;
    match cfg.kinetic {
        KineticRealization::MomentumQft => {
            let zz = q * (q - 1) / 2;
            Ok((
                qft_counts(q, approx).scaled(2),
                SegmentCounts { cnot: 2 * zz, rz: zz, clifford_1q: 0, t_explicit: 0 },
            ))
        }
        KineticRealization::CoordinateShift => {
            crate::error::guard("coordinate-shift kinetic Q", q, MAX_SHIFT_KINETIC_Q)?;
            let mut k = SegmentCounts::default();
            for (s, _) in shift_operator_pauli(q, Boundary::Periodic)?.terms() {
                let ys = s.ops().iter().filter(|o| o.1 == Pauli::Y).count();
                let xs = s.ops().iter().filter(|o| o.1 == Pauli::X).count();
                k.add(&SegmentCounts {
                    cnot: 2 * (s.weight() - 1),
                    rz: 1,
                    clifford_1q: 2 * (xs + ys) + 2 * ys,
                    t_explicit: 0,
                });
            }
            Ok((SegmentCounts::default(), k))
        }
    }
}

/// Closed-form counts of one Trotter step (nonzero dt) without emitting
/// gates: kinetic blocks from per-boson formulas, the potential from the
/// Z-string inventory of the encoding and the ladder-sharing rule.
pub fn analytic_counts(theory: &Theory, cfg: &DigitizationConfig, model: TModel, opts: CompileOptions) -> Result<ResourceReport> {
    let h = theory.build()?;
    let enc = pauli_encode(&h, cfg)?;
    let (qft, kin) = kinetic_counts_per_boson(cfg, opts.approx_qft)?;
    let mut breakdown = BTreeMap::new();
    if qft != SegmentCounts::default() {
        breakdown.insert("qft".to_string(), qft.scaled(enc.n_bosons));
    }
    if kin != SegmentCounts::default() {
        breakdown.insert("kinetic".to_string(), kin.scaled(enc.n_bosons));
    }
    let mut gadgets: Vec<(Vec<usize>, f64)> = enc.potential.terms().map(|(s, c)| (s.qubits(), c)).collect();
    gadgets.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut pot = SegmentCounts::default();
    for g in prefix_groups(&gadgets) {
        let run = &gadgets[g];
        for (qs, _) in run {
            pot.cnot += 2 * (qs.len() - 1);
            pot.rz += 1;
        }
        if opts.share_ladders && run.len() > 1 {
            pot.cnot -= 4 * (run.len() - 1);
        }
    }
    breakdown.insert("potential".to_string(), pot);
    ResourceReport::from_breakdown(enc.n_qubits, breakdown, model, None, theory.scaling())
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Scalar φ⁴ step counts from parameters alone, valid for generic couplings
/// (no accidental cancellation of Z strings) on the QFT kinetic path.
pub fn scalar_closed_form(p: &ScalarParams, q: usize, approx: Option<u32>) -> SegmentCounts {
    let volume = p.l.pow(p.d as u32);
    let pairs = if p.l == 2 { volume * p.d / 2 } else { volume * p.d };
    let onsite2 = binom(q, 2);
    let onsite4 = if p.lambda != 0.0 { binom(q, 4) } else { 0 };
    // weight-4 groups share the prefix (a,b,c); tails run over c+1..q
    let saved: usize = if p.lambda != 0.0 {
        (2..q.saturating_sub(1))
            .map(|c| binom(c, 2) * 4 * (q - 1 - c).saturating_sub(1))
            .sum()
    } else {
        0
    };
    let pot = SegmentCounts {
        cnot: volume * (2 * onsite2 + 6 * onsite4 - saved) + pairs * q * q * 2,
        rz: volume * (onsite2 + onsite4) + pairs * q * q,
        clifford_1q: 0,
        t_explicit: 0,
    };
    let zz = q * (q - 1) / 2;
    let mut total = qft_counts(q, approx).scaled(2 * volume);
    total.add(&SegmentCounts { cnot: 2 * zz * volume, rz: zz * volume, clifford_1q: 0, t_explicit: 0 });
    total.add(&pot);
    total
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(invalid(format!("scaling fit needs at least 4 points, got {}", points.len())));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(invalid("scaling fit needs positive coordinates"));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-12 {
        return Err(Error::InvalidArgument("degenerate sweep: all x equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// One measured row of the Table 1 reproduction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub theory: String,
    pub params: String,
    pub report: ResourceReport,
}

/// Plain-text table with the Table 1 formulas next to measured counts.
pub fn render_table(rows: &[TableRow]) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:<13} {:<22} {:>7} {:>12} {:>12}  {:<22} {:<26} {}",
        "theory", "params", "qubits", "T(V)", "T(p^2)", "qubits formula", "T(V) scaling", "T(p^2) scaling"
    )
    .expect("write to string");
    for r in rows {
        let meta = r.report.scaling.clone().unwrap_or(ScalingMeta { qubits: "-", t_potential: "-", t_kinetic: "-" });
        let t_kin = r.report.t_count_of("kinetic") + r.report.t_count_of("qft");
        writeln!(
            s,
            "{:<13} {:<22} {:>7} {:>12} {:>12}  {:<22} {:<26} {}",
            r.theory,
            r.params,
            r.report.qubits,
            r.report.t_count_of("potential"),
            t_kin,
            meta.qubits,
            meta.t_potential,
            meta.t_kinetic
        )
        .expect("write to string");
    }
    s
}
