//! QCIR-G14 writer.
//!
//! Inputs keep their 1-based numbers, gates are named `g<node-id>` and
//! negation is literal-level, so the circuit is emitted without auxiliary
//! variables. Constant roots become the empty `and()` / `or()` gates.

use super::circuit::{Gate, NodeId};
use super::QbfFormula;

pub fn export_qcir(f: &QbfFormula) -> String {
    let mut out = String::new();
    out.push_str("#QCIR-G14\n");
    if !f.universal.is_empty() {
        let vars: Vec<String> = f.universal.iter().map(|&v| (v + 1).to_string()).collect();
        out.push_str(&format!("forall({})\n", vars.join(", ")));
    }
    if !f.existential.is_empty() {
        let vars: Vec<String> = f.existential.iter().map(|&v| (v + 1).to_string()).collect();
        out.push_str(&format!("exists({})\n", vars.join(", ")));
    }

    let reachable = f.circuit.reachable(f.matrix);
    let mut lit_of: Vec<String> = vec![String::new(); f.matrix as usize + 1];
    let mut gates = Vec::new();
    for id in reachable {
        let lit = match f.circuit.gate(id) {
            Gate::Var(v) => (v + 1).to_string(),
            Gate::Const(b) => {
                let name = format!("g{id}");
                gates.push(format!("{name} = {}()", if *b { "and" } else { "or" }));
                name
            }
            Gate::Not(a) => negate(&lit_of[*a as usize]),
            Gate::And(xs) => gate_line(id, "and", xs, &lit_of, &mut gates),
            Gate::Or(xs) => gate_line(id, "or", xs, &lit_of, &mut gates),
        };
        lit_of[id as usize] = lit;
    }
    let root = &lit_of[f.matrix as usize];
    // the output must name a gate, so wrap bare or negated inputs
    let root = if root.starts_with('g') {
        root.clone()
    } else {
        gates.push(format!("gout = and({root})"));
        "gout".to_string()
    };
    out.push_str(&format!("output({root})\n"));
    for g in gates {
        out.push_str(&g);
        out.push('\n');
    }
    out
}

fn negate(lit: &str) -> String {
    match lit.strip_prefix('-') {
        Some(inner) => inner.to_string(),
        None => format!("-{lit}"),
    }
}

fn gate_line(
    id: NodeId,
    op: &str,
    xs: &[NodeId],
    lit_of: &[String],
    gates: &mut Vec<String>,
) -> String {
    let name = format!("g{id}");
    let args: Vec<&str> = xs.iter().map(|&x| lit_of[x as usize].as_str()).collect();
    gates.push(format!("{name} = {op}({})", args.join(", ")));
    name
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbf::circuit::Circuit;

    #[test]
    fn small_circuit_layout() {
        let mut c = Circuit::new();
        let x = c.new_var();
        let y = c.new_var();
        let (xn, yn) = (c.var_node(x), c.var_node(y));
        let ny = c.not(yn);
        let matrix = c.and2(xn, ny);
        let f = QbfFormula {
            circuit: c,
            antecedent: matrix,
            consequent: matrix,
            matrix,
            universal: vec![x],
            existential: vec![y],
            design_encoding: None,
            requirement_encoding: None,
        };
        let text = export_qcir(&f);
        let expected = "#QCIR-G14\nforall(1)\nexists(2)\noutput(g3)\ng3 = and(1, -2)\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn constant_root_becomes_empty_gate() {
        let mut c = Circuit::new();
        let t = c.constant(true);
        let f = QbfFormula {
            circuit: c,
            antecedent: t,
            consequent: t,
            matrix: t,
            universal: vec![],
            existential: vec![],
            design_encoding: None,
            requirement_encoding: None,
        };
        let text = export_qcir(&f);
        assert_eq!(text, "#QCIR-G14\noutput(g0)\ng0 = and()\n");
    }
}
