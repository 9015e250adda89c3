//! Circuit files: a line-oriented text format and a JSON document.
//! The text grammar is specified in `docs/FORMAT.md`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use mct_core::{Circuit, CircuitMeta, Gate, GateBasis, GateKind, LocalUnitary, QubitRole};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TEXT_MAGIC: &str = "mctqasm";
pub const TEXT_VERSION: &str = "1.0";
pub const JSON_FORMAT_NAME: &str = "mct-circuit";
pub const JSON_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    QasmText,
    JsonCircuit,
}

impl ExportFormat {
    /// `.json` files are JSON, everything else text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => ExportFormat::JsonCircuit,
            _ => ExportFormat::QasmText,
        }
    }
}

impl FromStr for ExportFormat {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "qasm" | "text" => Ok(ExportFormat::QasmText),
            "json" => Ok(ExportFormat::JsonCircuit),
            other => Err(CliError::Usage(format!(
                "unknown format '{other}' (expected qasm or json)"
            ))),
        }
    }
}

pub fn export(circuit: &Circuit, format: ExportFormat) -> String {
    match format {
        ExportFormat::QasmText => to_text(circuit),
        ExportFormat::JsonCircuit => to_json(circuit),
    }
}

/// Parses either format; JSON is recognised by a leading `{`.
pub fn import(src: &str) -> CliResult<Circuit> {
    if src.trim_start().starts_with('{') {
        from_json(src)
    } else {
        from_text(src)
    }
}

fn write_matrix(out: &mut String, u: &LocalUnitary) {
    let m = u.matrix();
    let entries = [m[0][0], m[0][1], m[1][0], m[1][1]];
    out.push('(');
    for (i, z) in entries.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{} {}", z.re, z.im);
    }
    out.push(')');
}

pub fn to_text(circuit: &Circuit) -> String {
    let mut out = format!("{TEXT_MAGIC} {TEXT_VERSION} {}\n", circuit.width());
    out.push_str("roles");
    for r in circuit.roles() {
        out.push(' ');
        out.push_str(r.short_name());
    }
    out.push('\n');
    let meta = circuit.meta();
    if meta != &CircuitMeta::default() {
        let _ = write!(out, "meta scheme={}", meta.scheme);
        if let Some(n) = meta.n {
            let _ = write!(out, " n={n}");
        }
        if let Some(c) = meta.c {
            let _ = write!(out, " c={c}");
        }
        if let Some(b) = meta.basis {
            let _ = write!(out, " basis={b}");
        }
        out.push('\n');
    }
    for g in circuit.gates() {
        out.push_str(g.kind().mnemonic());
        if let GateKind::Local(u) | GateKind::Cu(u) = g.kind() {
            write_matrix(&mut out, u);
        }
        for q in g.qubits() {
            let _ = write!(out, " {q}");
        }
        out.push('\n');
    }
    out
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_usize(tok: &str, line: usize, what: &str) -> CliResult<usize> {
    tok.parse()
        .map_err(|_| CliError::parse(line, format!("expected {what}, found '{tok}'")))
}

fn parse_matrix(body: &str, line: usize) -> CliResult<LocalUnitary> {
    let entries: Vec<&str> = body.split(',').collect();
    if entries.len() != 4 {
        return Err(CliError::parse(
            line,
            format!("unitary needs 4 entries, found {}", entries.len()),
        ));
    }
    let mut z = [Complex64::new(0.0, 0.0); 4];
    for (slot, entry) in z.iter_mut().zip(&entries) {
        let parts: Vec<&str> = entry.split_whitespace().collect();
        let [re, im] = parts[..] else {
            return Err(CliError::parse(
                line,
                format!("unitary entry '{}' must be '<re> <im>'", entry.trim()),
            ));
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::parse(line, format!("bad number '{s}'")))
        };
        *slot = Complex64::new(num(re)?, num(im)?);
    }
    LocalUnitary::new([[z[0], z[1]], [z[2], z[3]]]).map_err(|e| CliError::parse(line, e.to_string()))
}

fn parse_gate(text: &str, line: usize) -> CliResult<Gate> {
    let (head, rest) = match text.find('(') {
        Some(open) => {
            let close = text
                .rfind(')')
                .ok_or_else(|| CliError::parse(line, "unclosed '('"))?;
            if close < open {
                return Err(CliError::parse(line, "unbalanced parentheses"));
            }
            let u = parse_matrix(&text[open + 1..close], line)?;
            ((&text[..open], Some(u)), &text[close + 1..])
        }
        None => {
            let mut it = text.splitn(2, char::is_whitespace);
            let head = it.next().unwrap_or("");
            ((head, None), it.next().unwrap_or(""))
        }
    };
    let (mnemonic, u) = head;
    let qubits = rest
        .split_whitespace()
        .map(|t| parse_usize(t, line, "qubit index"))
        .collect::<CliResult<Vec<usize>>>()?;
    let kind = match (mnemonic.trim(), u) {
        ("x", None) => GateKind::X,
        ("cx", None) => GateKind::Cnot,
        ("cv", None) => GateKind::Cv,
        ("cvdg", None) => GateKind::Cvdg,
        ("ccx", None) => GateKind::Toffoli,
        ("mcx", None) => GateKind::Mcx(qubits.len().saturating_sub(1)),
        ("u", Some(u)) => GateKind::Local(u),
        ("cu", Some(u)) => GateKind::Cu(u),
        ("u" | "cu", None) => {
            return Err(CliError::parse(line, format!("'{}' needs a matrix", mnemonic.trim())))
        }
        (m, _) => return Err(CliError::parse(line, format!("unknown gate '{m}'"))),
    };
    Gate::new(kind, qubits).map_err(|e| CliError::parse(line, e.to_string()))
}

fn parse_meta(fields: &str, line: usize) -> CliResult<CircuitMeta> {
    let mut meta = CircuitMeta::default();
    for field in fields.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| CliError::parse(line, format!("meta field '{field}' is not key=value")))?;
        match key {
            "scheme" => meta.scheme = value.to_string(),
            "n" => meta.n = Some(parse_usize(value, line, "n")?),
            "c" => meta.c = Some(parse_usize(value, line, "c")?),
            "basis" => {
                meta.basis = Some(
                    GateBasis::from_str(value).map_err(|e| CliError::parse(line, e.to_string()))?,
                )
            }
            other => return Err(CliError::parse(line, format!("unknown meta field '{other}'"))),
        }
    }
    Ok(meta)
}

pub fn from_text(src: &str) -> CliResult<Circuit> {
    let mut lines = src
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| CliError::parse(1, "empty file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let [magic, version, width] = h[..] else {
        return Err(CliError::parse(hline, "header must be 'mctqasm <version> <width>'"));
    };
    if magic != TEXT_MAGIC {
        return Err(CliError::parse(hline, format!("expected '{TEXT_MAGIC}', found '{magic}'")));
    }
    if version != TEXT_VERSION {
        return Err(CliError::parse(hline, format!("unsupported version '{version}'")));
    }
    let width = parse_usize(width, hline, "width")?;
    if width == 0 {
        return Err(CliError::parse(hline, "width must be positive"));
    }

    let mut roles = vec![QubitRole::Workspace; width];
    let mut meta = CircuitMeta::default();
    let mut gates = Vec::new();
    let mut seen_gate = false;
    for (line, text) in lines {
        let first = text.split_whitespace().next().unwrap_or("");
        match first {
            "roles" if !seen_gate => {
                let names: Vec<&str> = text.split_whitespace().skip(1).collect();
                if names.len() != width {
                    return Err(CliError::parse(
                        line,
                        format!("{} roles for width {width}", names.len()),
                    ));
                }
                for (slot, name) in roles.iter_mut().zip(names) {
                    *slot = QubitRole::from_short_name(name)
                        .ok_or_else(|| CliError::parse(line, format!("unknown role '{name}'")))?;
                }
            }
            "meta" if !seen_gate => meta = parse_meta(&text[4..], line)?,
            _ => {
                seen_gate = true;
                let g = parse_gate(text, line)?;
                if let Some(&q) = g.qubits().iter().find(|&&q| q >= width) {
                    return Err(CliError::parse(line, format!("qubit {q} out of range for width {width}")));
                }
                gates.push(g);
            }
        }
    }
    Ok(Circuit::new(&roles)?.with_meta(meta).extend(gates)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGate {
    op: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<LocalUnitary>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonCircuit {
    format: String,
    version: u32,
    width: usize,
    roles: Vec<QubitRole>,
    meta: CircuitMeta,
    gates: Vec<JsonGate>,
}

pub fn to_json(circuit: &Circuit) -> String {
    let doc = JsonCircuit {
        format: JSON_FORMAT_NAME.into(),
        version: JSON_VERSION,
        width: circuit.width(),
        roles: circuit.roles().to_vec(),
        meta: circuit.meta().clone(),
        gates: circuit
            .gates()
            .iter()
            .map(|g| JsonGate {
                op: g.kind().mnemonic().into(),
                qubits: g.qubits().to_vec(),
                matrix: match g.kind() {
                    GateKind::Local(u) | GateKind::Cu(u) => Some(*u),
                    _ => None,
                },
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("circuit documents always serialise");
    s.push('\n');
    s
}

pub fn from_json(src: &str) -> CliResult<Circuit> {
    let doc: JsonCircuit =
        serde_json::from_str(src).map_err(|e| CliError::parse(e.line(), e.to_string()))?;
    let bad = |m: String| CliError::parse(0, m);
    if doc.format != JSON_FORMAT_NAME || doc.version != JSON_VERSION {
        return Err(bad(format!("unsupported document {} v{}", doc.format, doc.version)));
    }
    if doc.roles.len() != doc.width {
        return Err(bad(format!("{} roles for width {}", doc.roles.len(), doc.width)));
    }
    let mut gates = Vec::with_capacity(doc.gates.len());
    for (i, g) in doc.gates.into_iter().enumerate() {
        let kind = match (g.op.as_str(), g.matrix) {
            ("x", None) => GateKind::X,
            ("cx", None) => GateKind::Cnot,
            ("cv", None) => GateKind::Cv,
            ("cvdg", None) => GateKind::Cvdg,
            ("ccx", None) => GateKind::Toffoli,
            ("mcx", None) => GateKind::Mcx(g.qubits.len().saturating_sub(1)),
            ("u", Some(u)) => GateKind::Local(u),
            ("cu", Some(u)) => GateKind::Cu(u),
            (op, _) => return Err(bad(format!("gate {i}: bad op '{op}' or matrix"))),
        };
        gates.push(Gate::new(kind, g.qubits)?);
    }
    Ok(Circuit::new(&doc.roles)?.with_meta(doc.meta).extend(gates)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mct_core::{build_ladder_cnu, build_ladder_cnx};

    #[test]
    fn text_round_trip_ladder() {
        let c = build_ladder_cnx(4).unwrap();
        assert_eq!(from_text(&to_text(&c)).unwrap(), c);
    }

    #[test]
    fn text_round_trip_keeps_matrices_bit_exact() {
        let c = build_ladder_cnu(3, LocalUnitary::ry(0.123456789) * LocalUnitary::t()).unwrap();
        let c = mct_core::lower_circuit(&c, GateBasis::CvBasis).unwrap();
        assert_eq!(from_text(&to_text(&c)).unwrap(), c);
        assert_eq!(from_json(&to_json(&c)).unwrap(), c);
    }

    #[test]
    fn header_and_comments() {
        let src = "# comment\n\nmctqasm 1.0 3 # trailing\nroles c c t\nccx 0 1 2\n";
        let c = from_text(src).unwrap();
        assert_eq!(c.gates(), &[Gate::toffoli(0, 1, 2)]);
    }

    #[test]
    fn errors_name_the_line() {
        let err = from_text("mctqasm 1.0 3\nroles c c t\nccx 0 1 2\nfoo 1\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 4, .. }), "{err}");
        let err = from_text("mctqasm 1.0 2\ncx 0 5\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err}");
        let err = from_text("qasm 2.0\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 1, .. }), "{err}");
        let err = from_text("mctqasm 1.0 1\nu(1 0, 0 0, 0 0, 2 0) 0\n").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn json_keeps_metadata() {
        let c = build_ladder_cnx(3).unwrap();
        let back = from_json(&to_json(&c)).unwrap();
        assert_eq!(back.meta(), c.meta());
        assert_eq!(back, c);
    }
}
