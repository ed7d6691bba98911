//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! name demo            # optional metadata
//! h 0
//! cnot 0 1
//! u3(0.1,pi/4,-pi/2) 2
//! layer                # force a slice boundary
//! block                # start a new parameterized block
//! measure 2
//! ```
//!
//! Angles accept decimal literals and products/quotients with `pi`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{Circuit, CircuitError, GateKind, GateOp};

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn at(line: usize, column: usize, err: CircuitError) -> CircuitError {
    CircuitError::AtLine {
        line,
        column,
        source: Box::new(err),
    }
}

/// Parses the circuit text format. Layers are inferred greedily.
pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = content.trim_end();
        let indent = trimmed.len() - trimmed.trim_start().len();
        let stmt = trimmed.trim_start();
        if stmt.is_empty() {
            continue;
        }
        let col = indent + 1;

        let Some(c) = circuit.as_mut() else {
            let mut parts = stmt.split_whitespace();
            if parts.next() != Some("qubits") {
                return Err(syntax(line_no, col, "expected `qubits <n>` header"));
            }
            let n = parts
                .next()
                .ok_or_else(|| syntax(line_no, col + 7, "missing qubit count"))?;
            let n: usize = n
                .parse()
                .map_err(|_| syntax(line_no, col + 7, format!("invalid qubit count `{n}`")))?;
            if parts.next().is_some() {
                return Err(syntax(line_no, col, "trailing tokens after qubit count"));
            }
            circuit = Some(Circuit::new(n).map_err(|e| at(line_no, col + 7, e))?);
            continue;
        };

        if stmt == "layer" {
            c.break_layer();
            continue;
        }
        if stmt == "block" {
            c.start_block();
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("name ") {
            c.set_name(Some(rest.trim().to_string()));
            continue;
        }
        if stmt.starts_with("qubits") {
            return Err(syntax(line_no, col, "duplicate `qubits` header"));
        }
        let gate = parse_gate(stmt, line_no, col)?;
        c.push(gate).map_err(|e| at(line_no, col, e))?;
    }
    circuit.ok_or_else(|| syntax(last_line.max(1), 1, "missing `qubits <n>` header"))
}

fn parse_gate(stmt: &str, line: usize, col: usize) -> Result<GateOp, CircuitError> {
    let name_end = stmt
        .find(|ch: char| ch == '(' || ch.is_whitespace())
        .unwrap_or(stmt.len());
    let name = &stmt[..name_end];
    let kind = GateKind::from_name(name)
        .ok_or_else(|| syntax(line, col, format!("unknown gate `{name}`")))?;

    let mut rest = &stmt[name_end..];
    let mut rest_col = col + name_end;
    let mut angles = Vec::new();
    if rest.starts_with('(') {
        let close = rest
            .find(')')
            .ok_or_else(|| syntax(line, rest_col, "unclosed `(`"))?;
        let inner = &rest[1..close];
        let mut offset = rest_col + 1;
        for piece in inner.split(',') {
            let value = parse_angle(piece.trim())
                .ok_or_else(|| syntax(line, offset, format!("invalid angle `{}`", piece.trim())))?;
            angles.push(value);
            offset += piece.len() + 1;
        }
        rest = &rest[close + 1..];
        rest_col += close + 1;
    }

    let mut qubits = Vec::new();
    let mut cursor = 0;
    for token in rest.split_whitespace() {
        let pos = rest[cursor..].find(token).unwrap_or(0) + cursor;
        cursor = pos + token.len();
        let q: usize = token.parse().map_err(|_| {
            syntax(line, rest_col + pos, format!("invalid qubit index `{token}`"))
        })?;
        qubits.push(q);
    }
    GateOp::new(kind, qubits, angles).map_err(|e| at(line, col, e))
}

/// Angle expression: `[+-] factor (('*'|'/') factor)*`, factor = number | `pi`.
fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let (sign, body) = match s.as_bytes()[0] {
        b'-' => (-1.0, &s[1..]),
        b'+' => (1.0, &s[1..]),
        _ => (1.0, &s[..]),
    };
    let mut value = None;
    let mut op = '*';
    let mut start = 0;
    let bytes = body.as_bytes();
    for i in 0..=bytes.len() {
        let at_end = i == bytes.len();
        // exponent signs inside a literal are not operators
        let is_op = !at_end && (bytes[i] == b'*' || bytes[i] == b'/');
        if at_end || is_op {
            let tok = &body[start..i];
            let v = if tok == "pi" {
                PI
            } else {
                tok.parse::<f64>().ok()?
            };
            value = Some(match (value, op) {
                (None, _) => v,
                (Some(acc), '*') => acc * v,
                (Some(acc), _) => acc / v,
            });
            if !at_end {
                op = bytes[i] as char;
                start = i + 1;
            }
        }
    }
    value.map(|v| sign * v).filter(|v| v.is_finite())
}

/// Renders a circuit so that parsing the output yields an identical value.
pub fn render_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.n_qubits());
    if let Some(name) = circuit.name() {
        let _ = writeln!(out, "name {name}");
    }
    let explicit_blocks = !circuit.blocks_are_slices();
    let mut prev: Option<&super::Layer> = None;
    for layer in circuit.layers() {
        let new_block = prev.map_or(true, |p| p.block != layer.block);
        if explicit_blocks && new_block {
            out.push_str("block\n");
        } else if let Some(p) = prev {
            let first = &layer.gates[0];
            if !p.touches(first) {
                out.push_str("layer\n");
            }
        }
        for g in &layer.gates {
            let _ = writeln!(out, "{g}");
        }
        prev = Some(layer);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn kinds(c: &Circuit) -> Vec<Vec<GateKind>> {
        c.layers()
            .iter()
            .map(|l| l.gates.iter().map(|g| g.kind()).collect())
            .collect()
    }

    #[test]
    fn two_gates_on_one_qubit_make_two_layers() {
        let c = parse_circuit("qubits 1\nh 0\nt 0").unwrap();
        assert_eq!(c.n_qubits(), 1);
        assert_eq!(kinds(&c), vec![vec![GateKind::H], vec![GateKind::T]]);
    }

    #[test]
    fn shared_qubit_forces_new_layer() {
        let c = parse_circuit("qubits 2\nh 0\ncnot 0 1").unwrap();
        assert_eq!(kinds(&c), vec![vec![GateKind::H], vec![GateKind::CNOT]]);
        assert_eq!(c.layers()[1].gates[0].qubits(), &[0, 1]);
    }

    #[test]
    fn disjoint_qubits_share_a_layer() {
        let c = parse_circuit("qubits 2\nh 0\nh 1").unwrap();
        assert_eq!(kinds(&c), vec![vec![GateKind::H, GateKind::H]]);
    }

    #[test]
    fn layer_directive_and_comments() {
        let c = parse_circuit("# header\nqubits 2\n\nh 0 # first\nlayer\nh 1\n").unwrap();
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn angle_expressions() {
        let c = parse_circuit("qubits 1\nu3(0.1, pi/4, -pi/2) 0\nrz(3*pi/4) 0\nu1(1e-3) 0").unwrap();
        let gates: Vec<_> = c.gates().collect();
        assert_eq!(gates[0].angles()[1], FRAC_PI_4);
        assert!((gates[0].angles()[2] - 1.5 * PI).abs() < 1e-15);
        assert!((gates[1].angles()[0] - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert_eq!(gates[2].angles()[0], 1e-3);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_circuit("qubits 2\nh 0\nfoo 1").unwrap_err();
        assert_eq!(
            err,
            CircuitError::Syntax {
                line: 3,
                column: 1,
                message: "unknown gate `foo`".into()
            }
        );
        let err = parse_circuit("qubits 2\n  cnot 0 x").unwrap_err();
        assert!(matches!(err, CircuitError::Syntax { line: 2, column: 10, .. }), "{err:?}");
        let err = parse_circuit("h 0").unwrap_err();
        assert!(matches!(err, CircuitError::Syntax { line: 1, .. }));
        assert!(parse_circuit("").is_err());
        assert!(parse_circuit("qubits two").is_err());
    }

    #[test]
    fn range_and_arity_errors() {
        let err = parse_circuit("qubits 2\ncnot 0 2").unwrap_err();
        match err {
            CircuitError::AtLine { line, source, .. } => {
                assert_eq!(line, 2);
                assert!(matches!(*source, CircuitError::QubitOutOfRange { qubit: 2, .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_circuit("qubits 1\nu2(0.1) 0").unwrap_err();
        assert!(matches!(err, CircuitError::AtLine { ref source, .. }
            if matches!(**source, CircuitError::AngleArity { .. })));
    }

    #[test]
    fn render_roundtrip_with_blocks_and_breaks() {
        let text = "qubits 3\nname demo\nblock\nry(0.5) 0\nry(0.25) 1\nrz(1) 0\nblock\ncnot 0 1\nlayer\nh 2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.name(), Some("demo"));
        assert_eq!(c.block_count(), 2);
        let rendered = render_circuit(&c);
        assert_eq!(parse_circuit(&rendered).unwrap(), c);

        let plain = parse_circuit("qubits 2\nh 0\nlayer\nh 1\ncnot 0 1\nmeasure 1").unwrap();
        assert_eq!(parse_circuit(&render_circuit(&plain)).unwrap(), plain);
    }
}
