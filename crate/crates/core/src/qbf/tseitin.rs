//! Tseitin conversion of circuits to CNF.
//!
//! Input variable `v` maps to DIMACS variable `v + 1`; one auxiliary
//! variable is introduced per reachable And/Or gate, numbered after the
//! inputs in ascending node order. `Not` nodes become negated literals.

use super::circuit::{Circuit, Gate, NodeId};

/// Clause form with DIMACS-style signed, 1-based literals.
#[derive(Debug, Clone, Default)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

/// Result of converting one circuit root.
#[derive(Debug, Clone)]
pub struct Converted {
    pub cnf: Cnf,
    /// Literal equivalent to the root node (to be asserted or negated).
    pub root: i32,
    /// Auxiliary variables introduced (ascending).
    pub aux_vars: Vec<i32>,
}

/// Converts the cone of `root` to CNF, with variables numbered from
/// `first_aux` upward for the gates. `first_aux` must exceed every input
/// variable number.
pub fn convert_from(circuit: &Circuit, root: NodeId, first_aux: usize) -> Converted {
    let mut cnf = Cnf { num_vars: first_aux - 1, clauses: Vec::new() };
    let mut aux_vars = Vec::new();
    let reachable = circuit.reachable(root);
    let mut lit_of = vec![0i32; root as usize + 1];
    for id in reachable {
        let lit = match circuit.gate(id) {
            Gate::Var(v) => *v as i32 + 1,
            Gate::Const(b) => {
                // constants only occur as roots; encode with a fresh pinned var
                cnf.num_vars += 1;
                let t = cnf.num_vars as i32;
                aux_vars.push(t);
                cnf.clauses.push(vec![if *b { t } else { -t }]);
                t
            }
            Gate::Not(a) => -lit_of[*a as usize],
            Gate::And(xs) => {
                cnf.num_vars += 1;
                let t = cnf.num_vars as i32;
                aux_vars.push(t);
                let mut long = Vec::with_capacity(xs.len() + 1);
                long.push(t);
                for &x in xs {
                    let xl = lit_of[x as usize];
                    cnf.clauses.push(vec![-t, xl]);
                    long.push(-xl);
                }
                cnf.clauses.push(long);
                t
            }
            Gate::Or(xs) => {
                cnf.num_vars += 1;
                let t = cnf.num_vars as i32;
                aux_vars.push(t);
                let mut long = Vec::with_capacity(xs.len() + 1);
                long.push(-t);
                for &x in xs {
                    let xl = lit_of[x as usize];
                    cnf.clauses.push(vec![t, -xl]);
                    long.push(xl);
                }
                cnf.clauses.push(long);
                t
            }
        };
        lit_of[id as usize] = lit;
    }
    Converted { cnf, root: lit_of[root as usize], aux_vars }
}

/// Converts with auxiliaries right after the circuit's own inputs.
pub fn convert(circuit: &Circuit, root: NodeId) -> Converted {
    convert_from(circuit, root, circuit.num_vars() as usize + 1)
}
