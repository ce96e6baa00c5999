//! QDIMACS writer and reader.
//!
//! Export runs the Tseitin conversion on the matrix and appends the
//! auxiliary variables to the innermost existential block. The reader
//! accepts the forall-exists fragment and rebuilds a [`QbfFormula`] whose
//! matrix is the clause conjunction.

use crate::error::ParseError;

use super::circuit::Circuit;
use super::tseitin;
use super::QbfFormula;

pub fn export_qdimacs(f: &QbfFormula) -> String {
    let conv = tseitin::convert(&f.circuit, f.matrix);
    let mut out = String::new();
    out.push_str("c splv forall-exists conformance instance\n");
    out.push_str(&format!("p cnf {} {}\n", conv.cnf.num_vars, conv.cnf.clauses.len() + 1));
    if !f.universal.is_empty() {
        out.push('a');
        for &v in &f.universal {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push_str(" 0\n");
    }
    let existential: Vec<i32> = f
        .existential
        .iter()
        .map(|&v| v as i32 + 1)
        .chain(conv.aux_vars.iter().copied())
        .collect();
    if !existential.is_empty() {
        out.push('e');
        for v in &existential {
            out.push_str(&format!(" {v}"));
        }
        out.push_str(" 0\n");
    }
    for clause in &conv.cnf.clauses {
        for l in clause {
            out.push_str(&format!("{l} "));
        }
        out.push_str("0\n");
    }
    out.push_str(&format!("{} 0\n", conv.root));
    out
}

pub fn parse_qdimacs(text: &str) -> Result<QbfFormula, ParseError> {
    let mut num_vars: Option<usize> = None;
    let mut universal: Vec<u32> = Vec::new();
    let mut existential: Vec<u32> = Vec::new();
    let mut seen_exists = false;
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    let mut current: Vec<i32> = Vec::new();

    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            if num_vars.is_some() {
                return Err(ParseError::new(lineno, 1, "duplicate problem line"));
            }
            let mut it = rest.split_whitespace();
            if it.next() != Some("cnf") {
                return Err(ParseError::new(lineno, 1, "expected `p cnf <vars> <clauses>`"));
            }
            let nv = it
                .next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| ParseError::new(lineno, 1, "bad variable count"))?;
            it.next()
                .and_then(|s| s.parse::<usize>().ok())
                .ok_or_else(|| ParseError::new(lineno, 1, "bad clause count"))?;
            num_vars = Some(nv);
            continue;
        }
        let nv = num_vars
            .ok_or_else(|| ParseError::new(lineno, 1, "clause or prefix before problem line"))?;
        let (kind, body) = match line.chars().next() {
            Some('a') => ('a', &line[1..]),
            Some('e') => ('e', &line[1..]),
            _ => ('.', line),
        };
        if kind != '.' {
            if !clauses.is_empty() || !current.is_empty() {
                return Err(ParseError::new(lineno, 1, "quantifier line after clauses"));
            }
            if kind == 'a' && seen_exists {
                return Err(ParseError::new(
                    lineno,
                    1,
                    "only forall-exists prefixes are supported",
                ));
            }
            if kind == 'e' {
                seen_exists = true;
            }
            for tok in body.split_whitespace() {
                let v: i64 = tok
                    .parse()
                    .map_err(|_| ParseError::new(lineno, 1, format!("bad literal `{tok}`")))?;
                if v == 0 {
                    break;
                }
                if v < 0 || v as usize > nv {
                    return Err(ParseError::new(lineno, 1, format!("variable {v} out of range")));
                }
                let var = (v - 1) as u32;
                if kind == 'a' {
                    universal.push(var);
                } else {
                    existential.push(var);
                }
            }
            continue;
        }
        for tok in line.split_whitespace() {
            let l: i64 = tok
                .parse()
                .map_err(|_| ParseError::new(lineno, 1, format!("bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                if l.unsigned_abs() as usize > nv {
                    return Err(ParseError::new(lineno, 1, format!("variable {l} out of range")));
                }
                current.push(l as i32);
            }
        }
    }
    if !current.is_empty() {
        return Err(ParseError::new(text.lines().count(), 1, "unterminated clause"));
    }
    let nv = num_vars.ok_or_else(|| ParseError::new(1, 1, "missing problem line"))?;

    let bound: std::collections::HashSet<u32> =
        universal.iter().chain(existential.iter()).copied().collect();
    for clause in &clauses {
        for &l in clause {
            let var = l.unsigned_abs() - 1;
            if !bound.contains(&var) {
                return Err(ParseError::new(
                    1,
                    1,
                    format!("variable {} is not bound by the prefix", var + 1),
                ));
            }
        }
    }

    let mut circuit = Circuit::new();
    for _ in 0..nv {
        circuit.new_var();
    }
    let clause_nodes: Vec<_> = clauses
        .iter()
        .map(|clause| {
            let lits: Vec<_> = clause
                .iter()
                .map(|&l| {
                    let node = circuit.var_node(l.unsigned_abs() - 1);
                    if l > 0 {
                        node
                    } else {
                        circuit.not(node)
                    }
                })
                .collect();
            circuit.or(lits)
        })
        .collect();
    let consequent = circuit.and(clause_nodes);
    let antecedent = circuit.constant(true);
    let matrix = consequent;
    Ok(QbfFormula {
        circuit,
        antecedent,
        consequent,
        matrix,
        universal,
        existential,
        design_encoding: None,
        requirement_encoding: None,
    })
}
