use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use mct_core::cost::{make_table, table_to_csv, table_to_text, CostReport, Scheme, MAKE_TABLE_N_MAX, TABLE_N_MIN};
use mct_core::decomp::{lower_circuit, ToffoliRule};
use mct_core::verify::{
    oracle_cnu, oracle_cnx, CircuitOracle, EquivalenceVerdict, Oracle, Simulator, DEFAULT_MAX_WIDTH,
};
use mct_core::{build_cycle_cnu, build_ladder_cnu, Circuit, GateBasis, GateKind, LocalUnitary};

use crate::error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};
use crate::format::{export, import, ExportFormat};

/// Circuits wider than this are written without verification.
pub const VERIFY_ON_WRITE_MAX_WIDTH: usize = 16;
pub const MAX_WIDTH_ENV: &str = "MCT_MAX_WIDTH";

#[derive(Debug, Parser)]
#[command(name = "mct", version, about = "Multi-controlled Toffoli synthesis, lowering and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FileFormat {
    Qasm,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleArg {
    Exact,
    Margolus,
    BarencoCv,
    Peres,
}

impl RuleArg {
    fn rule(self) -> ToffoliRule {
        match self {
            RuleArg::Exact => ToffoliRule::Exact6Cnot,
            RuleArg::Margolus => ToffoliRule::Margolus,
            RuleArg::BarencoCv => ToffoliRule::BarencoCv,
            RuleArg::Peres => ToffoliRule::Peres,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a circuit, print its cost report, optionally write it.
    Synth {
        /// ladder, cycle, barenco2, lanyon_toffoli or lanyon_c3x.
        #[arg(long)]
        scheme: String,
        /// Number of controls.
        #[arg(long)]
        n: usize,
        /// Cycle count for the cycle scheme; defaults to ⌊√(n−1)⌋.
        #[arg(long)]
        c: Option<usize>,
        /// toffoli, cnot or cv.
        #[arg(long, default_value = "toffoli")]
        basis: String,
        /// Build C^nU with this named unitary (ladder and cycle only).
        #[arg(long)]
        u: Option<String>,
        /// Write the circuit, lowered into --basis.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
        /// Print the cost report as JSON.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        no_verify: bool,
    },
    /// Check a circuit file against cnx:<n> or cnu:<n>:<name>.
    Verify {
        circuit: PathBuf,
        #[arg(long)]
        oracle: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the comparison table for n = 3..=n_max.
    Table {
        #[arg(long, default_value_t = 15)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
    /// Rewrite a circuit file into a gate basis.
    Lower {
        circuit: PathBuf,
        #[arg(long)]
        basis: Option<String>,
        /// Lower every Toffoli with this rule instead of pairing them.
        #[arg(long, value_enum)]
        rule: Option<RuleArg>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
        #[arg(long)]
        no_verify: bool,
    },
    /// Print gate and qubit-role tallies of a circuit file.
    Count {
        circuit: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Re-export a circuit file in another format.
    Convert {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FileFormat>,
        #[arg(long)]
        no_verify: bool,
    },
}

/// Parses `args` (program name first), runs the command, returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> CliResult<i32> {
    let sim = simulator()?;
    match cmd {
        Command::Synth {
            scheme,
            n,
            c,
            basis,
            u,
            out: path,
            format,
            json,
            no_verify,
        } => cmd_synth(&sim, &scheme, n, c, &basis, u.as_deref(), path.as_deref(), format, json, no_verify, out),
        Command::Verify { circuit, oracle, json } => cmd_verify(&sim, &circuit, &oracle, json, out),
        Command::Table { n_max, format } => cmd_table(n_max, format, out),
        Command::Lower {
            circuit,
            basis,
            rule,
            out: path,
            format,
            no_verify,
        } => cmd_lower(&sim, &circuit, basis.as_deref(), rule, &path, format, no_verify, out),
        Command::Count { circuit, json } => cmd_count(&circuit, json, out),
        Command::Convert {
            input,
            output,
            format,
            no_verify,
        } => cmd_convert(&sim, &input, &output, format, no_verify, out),
    }
}

fn simulator() -> CliResult<Simulator> {
    match std::env::var(MAX_WIDTH_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Simulator::new)
            .map_err(|_| CliError::Usage(format!("{MAX_WIDTH_ENV} must be a qubit count, got '{v}'"))),
        Err(_) => Ok(Simulator::new(DEFAULT_MAX_WIDTH)),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn parse_basis(s: &str) -> CliResult<GateBasis> {
    s.parse().map_err(|e: mct_core::Error| CliError::Usage(e.to_string()))
}

pub fn named_unitary(name: &str) -> CliResult<LocalUnitary> {
    Ok(match name {
        "x" => LocalUnitary::x(),
        "y" => LocalUnitary::y(),
        "z" => LocalUnitary::z(),
        "h" => LocalUnitary::h(),
        "s" => LocalUnitary::s(),
        "t" => LocalUnitary::t(),
        "tdg" => LocalUnitary::tdg(),
        "v" => LocalUnitary::v(),
        "vdg" => LocalUnitary::vdg(),
        other => {
            return Err(CliError::Usage(format!(
                "unknown unitary '{other}' (expected x, y, z, h, s, t, tdg, v or vdg)"
            )))
        }
    })
}

/// `cnx:<n>` or `cnu:<n>:<name>`.
pub fn parse_oracle(spec: &str) -> CliResult<Box<dyn Oracle>> {
    let bad = || CliError::Usage(format!("oracle '{spec}' is not cnx:<n> or cnu:<n>:<name>"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[..] {
        ["cnx", n] => Ok(Box::new(oracle_cnx(n.parse().map_err(|_| bad())?))),
        ["cnu", n, name] => Ok(Box::new(oracle_cnu(n.parse().map_err(|_| bad())?, named_unitary(name)?))),
        _ => Err(bad()),
    }
}

fn read_circuit(path: &Path) -> CliResult<Circuit> {
    let src = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    import(&src)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn resolve_format(path: &Path, format: Option<FileFormat>) -> ExportFormat {
    match format {
        Some(FileFormat::Qasm) => ExportFormat::QasmText,
        Some(FileFormat::Json) => ExportFormat::JsonCircuit,
        None => ExportFormat::from_path(path),
    }
}

/// Controls then target; every qubit when the file declares neither.
fn computational(circuit: &Circuit) -> Vec<usize> {
    let q = circuit.computational_qubits();
    if q.is_empty() {
        (0..circuit.width()).collect()
    } else {
        q
    }
}

fn require_exact(verdict: &EquivalenceVerdict) -> CliResult<()> {
    if verdict.is_exact() {
        Ok(())
    } else {
        Err(CliError::Verification(verdict.to_string()))
    }
}

/// Verifies before writing when the circuit is small enough.
fn checked_write(
    sim: &Simulator,
    circuit: &Circuit,
    oracle: &dyn Oracle,
    path: &Path,
    format: ExportFormat,
    no_verify: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    if !no_verify && circuit.width() <= VERIFY_ON_WRITE_MAX_WIDTH.min(sim.max_width()) {
        let v = sim.check_equivalence(circuit, oracle, &computational(circuit))?;
        require_exact(&v)?;
        emit(out, &format!("verified: {v}\n"))?;
    } else {
        emit(out, "verified: skipped\n")?;
    }
    write_file(path, &export(circuit, format))?;
    emit(out, &format!("wrote {}\n", path.display()))
}

fn summary(r: &CostReport) -> String {
    let mut s = format!("scheme: {}\nn: {}  c: {}  basis: {}\n", r.scheme, r.n, r.c, r.basis);
    s += &format!("toffolis: {} (closed form {})\n", r.toffoli_built, r.toffoli_count_eq2);
    s += &format!(
        "ancillas: {} (closed form {}, {} with a workspace ancilla)\n",
        r.ancilla_built, r.ancilla_eq3, r.ancilla_conclusion
    );
    s += &format!("ops: {} in {} basis\n", r.ops_built, r.basis);
    let cv_formula = r.ops_cv_eq6.map_or_else(|| "n/a".to_string(), |v| v.to_string());
    s += &format!("ops cv: {} (closed form {cv_formula})\n", r.ops_cv_built);
    s += &format!(
        "ops cnot+local: {} ({} with 11-op Margolus)\n",
        r.ops_cnot_local, r.ops_cnot_local_margolus_quoted
    );
    if let Some(reference) = r.reference_ops {
        s += &format!("reference ops: {reference}\n");
    }
    if let (Some(t), Some(d)) = (r.two_cycle_toffolis, r.two_cycle_dirty_toffolis) {
        s += &format!("two-cycle toffolis: 3(n-2) = {t}, uninitialised ancillas 8(n-5) = {d}\n");
    }
    let flags: Vec<&str> = r.discrepancy_flags.iter().map(|f| f.name()).collect();
    s += &format!("flags: {}\n", if flags.is_empty() { "none".into() } else { flags.join(",") });
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    sim: &Simulator,
    scheme: &str,
    n: usize,
    c: Option<usize>,
    basis: &str,
    u: Option<&str>,
    path: Option<&Path>,
    format: Option<FileFormat>,
    json: bool,
    no_verify: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let scheme: Scheme = scheme.parse().map_err(|e: mct_core::Error| CliError::Usage(e.to_string()))?;
    let basis = parse_basis(basis)?;
    let usage = |e: mct_core::Error| CliError::Usage(e.to_string());
    if c.is_some() && scheme != Scheme::Cycle {
        return Err(CliError::Usage(format!("--c applies only to the cycle scheme, not {scheme}")));
    }
    let (circuit, oracle): (Circuit, Box<dyn Oracle>) = match u {
        Some(name) => {
            let u = named_unitary(name)?;
            let circuit = match scheme {
                Scheme::Ladder => build_ladder_cnu(n, u),
                Scheme::Cycle => {
                    let c = match c {
                        Some(c) => c,
                        None => mct_core::cost::optimal_c(n).map_err(usage)?,
                    };
                    build_cycle_cnu(n, c, u)
                }
                other => return Err(CliError::Usage(format!("--u is not available for {other}"))),
            }
            .map_err(usage)?;
            (circuit, Box::new(oracle_cnu(n, u)))
        }
        None => {
            let circuit = scheme.build(n, c).map_err(usage)?;
            let k = circuit.count_gates().roles.controls;
            (circuit, Box::new(oracle_cnx(k)))
        }
    };
    let report = CostReport::for_circuit(&circuit, basis)?;
    if json {
        let text = serde_json::to_string_pretty(&report).expect("reports always serialise");
        emit(out, &format!("{text}\n"))?;
    } else {
        emit(out, &summary(&report))?;
    }
    if let Some(path) = path {
        let lowered = lower_circuit(&circuit, basis)?;
        checked_write(sim, &lowered, oracle.as_ref(), path, resolve_format(path, format), no_verify, out)?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(sim: &Simulator, path: &Path, oracle: &str, json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let oracle = parse_oracle(oracle)?;
    let circuit = read_circuit(path)?;
    let comp = computational(&circuit);
    if oracle.width() != comp.len() {
        return Err(CliError::Usage(format!(
            "oracle {} acts on {} qubits but the circuit has {} computational qubits",
            oracle.describe(),
            oracle.width(),
            comp.len()
        )));
    }
    let v = sim.check_equivalence(&circuit, oracle.as_ref(), &comp)?;
    if json {
        let text = serde_json::to_string_pretty(&v).expect("verdicts always serialise");
        emit(out, &format!("{text}\n"))?;
    } else {
        emit(out, &format!("{v}\n"))?;
    }
    require_exact(&v)?;
    Ok(EXIT_OK)
}

fn cmd_table(n_max: usize, format: TableFormat, out: &mut dyn Write) -> CliResult<i32> {
    if !(TABLE_N_MIN..=MAKE_TABLE_N_MAX).contains(&n_max) {
        return Err(CliError::Usage(format!(
            "--n-max must be in {TABLE_N_MIN}..={MAKE_TABLE_N_MAX}, got {n_max}"
        )));
    }
    let rows = make_table(TABLE_N_MIN..=n_max)?;
    let text = match format {
        TableFormat::Csv => table_to_csv(&rows),
        TableFormat::Text => table_to_text(&rows),
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn rule_basis(rule: ToffoliRule) -> GateBasis {
    match rule {
        ToffoliRule::Exact6Cnot | ToffoliRule::Margolus => GateBasis::CnotLocal,
        ToffoliRule::BarencoCv | ToffoliRule::Peres => GateBasis::CvBasis,
    }
}

/// Every Toffoli replaced by `rule`, other gates lowered as usual.
fn lower_with_rule(circuit: &Circuit, rule: ToffoliRule) -> CliResult<Circuit> {
    let mut gates = Vec::with_capacity(circuit.size() * rule.op_count());
    for g in circuit.gates() {
        if matches!(g.kind(), GateKind::Toffoli) {
            let q = g.qubits();
            gates.extend(rule.gates(q[0], q[1], q[2]));
        } else {
            gates.push(g.clone());
        }
    }
    let replaced = Circuit::new(circuit.roles())?
        .with_meta(circuit.meta().clone())
        .extend(gates)?;
    Ok(lower_circuit(&replaced, rule_basis(rule))?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_lower(
    sim: &Simulator,
    path: &Path,
    basis: Option<&str>,
    rule: Option<RuleArg>,
    out_path: &Path,
    format: Option<FileFormat>,
    no_verify: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let circuit = read_circuit(path)?;
    let lowered = match (basis, rule) {
        (_, Some(rule)) => {
            let rule = rule.rule();
            if let Some(b) = basis {
                let b = parse_basis(b)?;
                if b != rule_basis(rule) {
                    return Err(CliError::Usage(format!("rule {rule} produces the {} basis, not {b}", rule_basis(rule))));
                }
            }
            lower_with_rule(&circuit, rule)?
        }
        (Some(b), None) => lower_circuit(&circuit, parse_basis(b)?)?,
        (None, None) => return Err(CliError::Usage("lower needs --basis or --rule".into())),
    };
    let tally = lowered.count_gates();
    emit(out, &format!("ops: {}\n", tally.gates.total))?;
    let oracle = CircuitOracle::with_qubits(&circuit, computational(&circuit));
    checked_write(sim, &lowered, &oracle, out_path, resolve_format(out_path, format), no_verify, out)?;
    Ok(EXIT_OK)
}

fn cmd_count(path: &Path, json: bool, out: &mut dyn Write) -> CliResult<i32> {
    let circuit = read_circuit(path)?;
    let t = circuit.count_gates();
    if json {
        let text = serde_json::to_string_pretty(&t).expect("tallies always serialise");
        emit(out, &format!("{text}\n"))?;
        return Ok(EXIT_OK);
    }
    let g = t.gates;
    let r = t.roles;
    let text = format!(
        "width: {}\ndepth: {}\ngates: {} (x {}, cx {}, cv {}, cvdg {}, ccx {}, mcx {}, u {}, cu {})\n\
         qubits: controls {}, targets {}, cycle ancillas {}, process ancillas {}, workspace {}\n",
        circuit.width(),
        circuit.depth(),
        g.total,
        g.x,
        g.cnot,
        g.cv,
        g.cvdg,
        g.toffoli,
        g.mcx,
        g.local,
        g.cu,
        r.controls,
        r.targets,
        r.cycle_ancillas,
        r.process_ancillas,
        r.workspace
    );
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn cmd_convert(
    sim: &Simulator,
    input: &Path,
    output: &Path,
    format: Option<FileFormat>,
    no_verify: bool,
    out: &mut dyn Write,
) -> CliResult<i32> {
    let circuit = read_circuit(input)?;
    let oracle = CircuitOracle::with_qubits(&circuit, computational(&circuit));
    checked_write(sim, &circuit, &oracle, output, resolve_format(output, format), no_verify, out)?;
    Ok(EXIT_OK)
}
