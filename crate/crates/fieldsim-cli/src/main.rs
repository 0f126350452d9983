mod hamiltonian_file;
mod suites;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fieldsim::boson_encoding::{DigitizationConfig, KineticRealization};
use fieldsim::circuit_ir::{to_text, Circuit};
use fieldsim::hamiltonian_core::{pauli_encode, MatrixModelParams, OrbifoldParams, PolyHamiltonian, ScalarParams};
use fieldsim::resource_estimator::{
    analytic_counts, estimate_circuit, render_table, scaling_fit, ResourceReport, TModel, TableRow, Theory,
};
use fieldsim::trotter_compiler::{trotter_step_with, CompileOptions};

use hamiltonian_file::HamiltonianFile;

/// Thread count for sweeps; defaults to the available parallelism.
const THREADS_ENV: &str = "FIELDSIM_THREADS";

#[derive(Parser)]
#[command(name = "fieldsim", version, about = "Encode bosonic lattice Hamiltonians, compile Trotter circuits and count resources")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a Hamiltonian and write it as canonical JSON.
    Build {
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compile one Trotter step of a Hamiltonian file to circuit text.
    Compile {
        hamiltonian: PathBuf,
        #[command(flatten)]
        dig: DigitizationArgs,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        #[arg(long, default_value = "t_typ=10", value_parser = parse_model)]
        model: TModel,
        /// Circuit text destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Provenance report destination.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Resource report for one Trotter step.
    Count {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        dig: DigitizationArgs,
        #[arg(long, default_value_t = 0.1)]
        dt: f64,
        #[arg(long, default_value = "t_typ=10", value_parser = parse_model)]
        model: TModel,
        /// Count from the Z-string inventory instead of compiling.
        #[arg(long)]
        analytic: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table 1 style sweep with fitted exponents.
    Table {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        dig: DigitizationArgs,
        /// `KEY=v1,v2,...` with KEY one of L, d, N, Q.
        #[arg(long, value_parser = parse_sweep)]
        sweep: Sweep,
        /// Repeat to bracket T estimates, e.g. `--model t_typ=10 --model t_typ=50`.
        #[arg(long, value_parser = parse_model)]
        model: Vec<TModel>,
        /// Compile every point instead of counting analytically.
        #[arg(long)]
        compiled: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a verification suite; exit code 1 on any tolerance violation.
    Verify {
        suite: Suite,
        #[arg(long, value_enum, default_value_t = TheoryName::Anharmonic)]
        theory: TheoryName,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoryName {
    Anharmonic,
    Scalar,
    MatrixModel,
    Orbifold,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Gadgets,
    Qft,
    Trotter,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kinetic {
    Qft,
    Shift,
}

#[derive(Args, Clone)]
struct TheoryArgs {
    #[arg(value_enum)]
    theory: TheoryName,
    /// Sites per dimension.
    #[arg(long = "L", default_value_t = 2)]
    l: usize,
    /// Spatial dimension (scalar, orbifold) or number of matrices (matrix model).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "N", default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    m2: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    g2: f64,
    /// Lattice spacing.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 0.0)]
    mu2: f64,
    /// Matrix model in the full N×N entry basis instead of traceless generators.
    #[arg(long)]
    full: bool,
    /// Coefficient of Σ (Tr X)² in the full basis.
    #[arg(long)]
    trace_mass: Option<f64>,
}

impl TheoryArgs {
    fn theory(&self) -> Theory {
        match self.theory {
            TheoryName::Anharmonic => Theory::Anharmonic,
            TheoryName::Scalar => Theory::Scalar(ScalarParams {
                l: self.l,
                d: self.d.unwrap_or(1),
                m2: self.m2,
                lambda: self.lambda,
            }),
            TheoryName::MatrixModel => Theory::MatrixModel(MatrixModelParams {
                n: self.n,
                d: self.d.unwrap_or(2),
                g2: self.g2,
                traceless: !self.full,
                trace_mass: self.trace_mass,
            }),
            TheoryName::Orbifold => Theory::Orbifold(OrbifoldParams {
                n: self.n,
                d: self.d.unwrap_or(2),
                l: self.l,
                g2: self.g2,
                a: self.a,
                m2: self.m2,
                mu2: self.mu2,
            }),
        }
    }
}

#[derive(Args, Clone)]
struct DigitizationArgs {
    /// Qubits per boson.
    #[arg(long = "Q", default_value_t = 2)]
    q: usize,
    /// Half-width of the field interval.
    #[arg(long = "R", default_value_t = 2.0)]
    r: f64,
    #[arg(long, value_enum, default_value_t = Kinetic::Qft)]
    kinetic: Kinetic,
    /// Drop controlled phases P_k with k above this threshold.
    #[arg(long)]
    approx_qft: Option<u32>,
    /// Emit every gadget with its own CNOT ladder.
    #[arg(long)]
    no_share: bool,
}

impl DigitizationArgs {
    fn config(&self) -> DigitizationConfig {
        DigitizationConfig::new(self.q, self.r).with_kinetic(match self.kinetic {
            Kinetic::Qft => KineticRealization::MomentumQft,
            Kinetic::Shift => KineticRealization::CoordinateShift,
        })
    }

    fn options(&self) -> CompileOptions {
        CompileOptions { approx_qft: self.approx_qft, share_ladders: !self.no_share }
    }

    fn options_json(&self) -> Value {
        json!({ "approx_qft": self.approx_qft, "share_ladders": !self.no_share })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum SweepKey {
    L,
    D,
    N,
    Q,
}

#[derive(Clone, Debug)]
struct Sweep {
    key: SweepKey,
    values: Vec<usize>,
}

fn parse_model(s: &str) -> Result<TModel, String> {
    let m = if let Some(v) = s.strip_prefix("t_typ=") {
        TModel::PerRzFixed { t_typ: v.parse().map_err(|e| format!("bad T_typ {v:?}: {e}"))? }
    } else if let Some(v) = s.strip_prefix("rs:") {
        TModel::RossSelinger { epsilon: v.parse().map_err(|e| format!("bad epsilon {v:?}: {e}"))? }
    } else {
        return Err(format!("expected t_typ=N or rs:EPS, got {s:?}"));
    };
    m.validate().map_err(|e| e.to_string())?;
    Ok(m)
}

fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let (k, vs) = s.split_once('=').ok_or_else(|| format!("expected KEY=v1,v2,..., got {s:?}"))?;
    let key = match k {
        "L" => SweepKey::L,
        "d" => SweepKey::D,
        "N" => SweepKey::N,
        "Q" => SweepKey::Q,
        _ => return Err(format!("unknown sweep key {k:?}; expected L, d, N or Q")),
    };
    let values = vs
        .split(',')
        .filter(|v| !v.trim().is_empty())
        .map(|v| v.trim().parse::<usize>().map_err(|e| format!("bad sweep value {v:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err("empty sweep".into());
    }
    Ok(Sweep { key, values })
}

/// Failure categories mapped onto exit codes.
enum Failure {
    Verification(String),
    Usage(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn canonical(v: &Value) -> String {
    // serde_json's default map is ordered, so keys come out sorted.
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn compile(h: &PolyHamiltonian, dig: &DigitizationArgs, dt: f64) -> Result<Circuit, Failure> {
    let enc = pauli_encode(h, &dig.config())?;
    Ok(trotter_step_with(&enc, dt, dig.options())?)
}

fn cmd_build(t: &TheoryArgs, out: Option<&Path>) -> CmdResult {
    let theory = t.theory();
    let h = theory.build()?;
    emit(out, &canonical(&serde_json::to_value(HamiltonianFile::new(&theory, &h))?))
}

fn cmd_compile(
    path: &Path,
    dig: &DigitizationArgs,
    dt: f64,
    model: TModel,
    out: Option<&Path>,
    report: Option<&Path>,
) -> CmdResult {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: HamiltonianFile = serde_json::from_str(&text)?;
    let h = file.to_hamiltonian().map_err(Failure::Usage)?;
    let c = compile(&h, dig, dt)?;
    emit(out, &to_text(&c))?;
    if let Some(r) = report {
        let v = json!({
            "generator": concat!("fieldsim ", env!("CARGO_PKG_VERSION")),
            "source": file.source,
            "config": dig.config(),
            "options": dig.options_json(),
            "dt": dt,
            "n_qubits": c.n_qubits,
            "n_gates": c.len(),
            "segments": c.segments(),
            "counts": estimate_circuit(&c, model)?,
        });
        emit(Some(r), &canonical(&v))?;
    }
    Ok(())
}

fn count_report(theory: &Theory, dig: &DigitizationArgs, dt: f64, model: TModel, analytic: bool) -> Result<ResourceReport, Failure> {
    if analytic {
        return Ok(analytic_counts(theory, &dig.config(), model, dig.options())?);
    }
    let c = compile(&theory.build()?, dig, dt)?;
    let mut r = estimate_circuit(&c, model)?;
    r.scaling = theory.scaling();
    Ok(r)
}

fn cmd_count(t: &TheoryArgs, dig: &DigitizationArgs, dt: f64, model: TModel, analytic: bool, out: Option<&Path>) -> CmdResult {
    let theory = t.theory();
    let r = count_report(&theory, dig, dt, model, analytic)?;
    let v = json!({
        "theory": theory,
        "config": dig.config(),
        "options": dig.options_json(),
        "method": if analytic { "analytic" } else { "compiled" },
        "report": r,
    });
    emit(out, &canonical(&v))
}

fn threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Order-preserving parallel map.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let chunk = items.len().div_ceil(threads().max(1)).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<_>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    })
}

struct Point {
    theory: TheoryArgs,
    dig: DigitizationArgs,
    x: f64,
    label: String,
}

fn sweep_points(t: &TheoryArgs, dig: &DigitizationArgs, sweep: &Sweep) -> Vec<Point> {
    sweep
        .values
        .iter()
        .map(|&v| {
            let (mut t, mut dig) = (t.clone(), dig.clone());
            match sweep.key {
                SweepKey::L => t.l = v,
                SweepKey::D => t.d = Some(v),
                SweepKey::N => t.n = v,
                SweepKey::Q => dig.q = v,
            }
            let theory = t.theory();
            // lattice sweeps are fitted against the site count
            let x = match (sweep.key, theory) {
                (SweepKey::L, Theory::Scalar(p)) => p.l.pow(p.d as u32) as f64,
                (SweepKey::L, Theory::Orbifold(p)) => p.volume() as f64,
                _ => v as f64,
            };
            let label = match theory {
                Theory::Anharmonic => format!("Q={}", dig.q),
                Theory::Scalar(p) => format!("L={} d={} Q={}", p.l, p.d, dig.q),
                Theory::MatrixModel(p) => format!("N={} d={} Q={}", p.n, p.d, dig.q),
                Theory::Orbifold(p) => format!("N={} d={} L={} Q={}", p.n, p.d, p.l, dig.q),
            };
            Point { theory: t, dig, x, label }
        })
        .collect()
}

fn fit(points: &[(f64, f64)]) -> Value {
    match scaling_fit(points) {
        Ok(s) => json!(s),
        Err(_) => Value::Null,
    }
}

fn cmd_table(t: &TheoryArgs, dig: &DigitizationArgs, sweep: &Sweep, models: &[TModel], compiled: bool, format: Format) -> CmdResult {
    let models = if models.is_empty() {
        vec![TModel::PerRzFixed { t_typ: 10 }, TModel::PerRzFixed { t_typ: 50 }]
    } else {
        models.to_vec()
    };
    let points = sweep_points(t, dig, sweep);
    let x_name = match (sweep.key, t.theory) {
        (SweepKey::L, TheoryName::Scalar | TheoryName::Orbifold) => "V_lattice".to_string(),
        (k, _) => format!("{k:?}"),
    };
    let mut text = String::new();
    let mut tables = Vec::new();
    for model in models {
        let reports = par_map(&points, |p| count_report(&p.theory.theory(), &p.dig, 0.1, model, !compiled));
        let mut rows = Vec::new();
        for (p, r) in points.iter().zip(reports) {
            rows.push(TableRow { theory: p.theory.theory().name().into(), params: p.label.clone(), report: r? });
        }
        let series = |f: &dyn Fn(&ResourceReport) -> f64| -> Vec<(f64, f64)> {
            points.iter().zip(&rows).map(|(p, r)| (p.x, f(&r.report))).collect()
        };
        let fits = json!({
            "qubits": fit(&series(&|r| r.qubits as f64)),
            "t_potential": fit(&series(&|r| r.t_count_of("potential") as f64)),
            "t_kinetic": fit(&series(&|r| (r.t_count_of("kinetic") + r.t_count_of("qft")) as f64)),
            "rz": fit(&series(&|r| r.rz as f64)),
        });
        let model_v = serde_json::to_value(model)?;
        text.push_str(&format!("# T model {}\n", serde_json::to_string(&model_v)?));
        text.push_str(&render_table(&rows));
        text.push_str(&format!("# exponents vs {}: {}\n", x_name, serde_json::to_string(&fits)?));
        tables.push(json!({ "model": model_v, "rows": rows, "exponents": fits }));
    }
    let out = match format {
        Format::Text => text,
        Format::Json => canonical(&json!({
            "method": if compiled { "compiled" } else { "analytic" },
            "sweep": { "key": format!("{:?}", sweep.key), "values": sweep.values, "fit_variable": x_name },
            "tables": tables,
        })),
    };
    emit(None, &out)
}

fn run(cli: Cli) -> CmdResult {
    match &cli.cmd {
        Cmd::Build { theory, out } => cmd_build(theory, out.as_deref()),
        Cmd::Compile { hamiltonian, dig, dt, model, out, report } => {
            cmd_compile(hamiltonian, dig, *dt, *model, out.as_deref(), report.as_deref())
        }
        Cmd::Count { theory, dig, dt, model, analytic, out } => cmd_count(theory, dig, *dt, *model, *analytic, out.as_deref()),
        Cmd::Table { theory, dig, sweep, model, compiled, format } => cmd_table(theory, dig, sweep, model, *compiled, *format),
        Cmd::Verify { suite, theory } => {
            let checks = match suite {
                Suite::Gadgets => suites::gadgets(),
                Suite::Qft => suites::qft(),
                Suite::Trotter => suites::trotter(*theory)?,
            };
            let failed = checks.iter().filter(|c| !c.pass).count();
            for c in &checks {
                println!("{c}");
            }
            println!("{} of {} checks passed", checks.len() - failed, checks.len());
            if failed > 0 {
                Err(Failure::Verification(format!("{failed} checks failed")))
            } else {
                Ok(())
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("fieldsim: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("fieldsim: {msg}");
            ExitCode::from(2)
        }
    }
}
