//! Boolean circuits as immutable DAGs.
//!
//! Nodes are appended bottom-up, so every gate only references earlier
//! nodes; evaluation and substitution are single forward passes. The
//! builders fold constants, which keeps `Const` out of gate inputs: after
//! construction only a root can be constant.

/// Index of a node within a [`Circuit`].
pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    /// Input variable (0-based index).
    Var(u32),
    Const(bool),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
}

#[derive(Debug, Clone, Default)]
pub struct Circuit {
    gates: Vec<Gate>,
    num_vars: u32,
    var_nodes: Vec<NodeId>,
}

impl Circuit {
    pub fn new() -> Self {
        Circuit::default()
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, id: NodeId) -> &Gate {
        &self.gates[id as usize]
    }

    fn push(&mut self, gate: Gate) -> NodeId {
        let id = self.gates.len() as NodeId;
        self.gates.push(gate);
        id
    }

    /// Allocates a fresh input variable and returns its index.
    pub fn new_var(&mut self) -> u32 {
        let v = self.num_vars;
        self.num_vars += 1;
        let node = self.push(Gate::Var(v));
        self.var_nodes.push(node);
        v
    }

    /// The node reading input variable `v`.
    pub fn var_node(&self, v: u32) -> NodeId {
        self.var_nodes[v as usize]
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.push(Gate::Const(value))
    }

    pub fn is_const(&self, id: NodeId) -> Option<bool> {
        match self.gate(id) {
            Gate::Const(b) => Some(*b),
            _ => None,
        }
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        match self.gate(a) {
            Gate::Const(b) => {
                let b = !*b;
                self.constant(b)
            }
            Gate::Not(inner) => *inner,
            _ => self.push(Gate::Not(a)),
        }
    }

    pub fn and(&mut self, inputs: impl IntoIterator<Item = NodeId>) -> NodeId {
        let mut kept = Vec::new();
        for id in inputs {
            match self.gate(id) {
                Gate::Const(true) => {}
                Gate::Const(false) => return self.constant(false),
                _ => {
                    if !kept.contains(&id) {
                        kept.push(id);
                    }
                }
            }
        }
        match kept.len() {
            0 => self.constant(true),
            1 => kept[0],
            _ => self.push(Gate::And(kept)),
        }
    }

    pub fn or(&mut self, inputs: impl IntoIterator<Item = NodeId>) -> NodeId {
        let mut kept = Vec::new();
        for id in inputs {
            match self.gate(id) {
                Gate::Const(false) => {}
                Gate::Const(true) => return self.constant(true),
                _ => {
                    if !kept.contains(&id) {
                        kept.push(id);
                    }
                }
            }
        }
        match kept.len() {
            0 => self.constant(false),
            1 => kept[0],
            _ => self.push(Gate::Or(kept)),
        }
    }

    pub fn and2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.and([a, b])
    }

    pub fn or2(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.or([a, b])
    }

    pub fn implies(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let na = self.not(a);
        self.or2(na, b)
    }

    /// Equivalence of two nodes.
    pub fn iff(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let both = self.and2(a, b);
        let na = self.not(a);
        let nb = self.not(b);
        let neither = self.and2(na, nb);
        self.or2(both, neither)
    }

    /// Evaluates the node `root` under a total assignment of the inputs.
    pub fn eval(&self, root: NodeId, assignment: &[bool]) -> bool {
        let mut values = vec![false; root as usize + 1];
        for id in 0..=root as usize {
            values[id] = match &self.gates[id] {
                Gate::Var(v) => assignment[*v as usize],
                Gate::Const(b) => *b,
                Gate::Not(a) => !values[*a as usize],
                Gate::And(xs) => xs.iter().all(|&x| values[x as usize]),
                Gate::Or(xs) => xs.iter().any(|&x| values[x as usize]),
            };
        }
        values[root as usize]
    }

    /// Builds a new circuit with some inputs fixed; unfixed variables keep
    /// their indices. Constant folding in the builders simplifies the
    /// result as it is rebuilt.
    pub fn substitute(&self, root: NodeId, fixed: &[Option<bool>]) -> (Circuit, NodeId) {
        let mut out = Circuit::new();
        for _ in 0..self.num_vars {
            out.new_var();
        }
        let mut map = vec![0 as NodeId; root as usize + 1];
        for id in 0..=root as usize {
            map[id] = match &self.gates[id] {
                Gate::Var(v) => match fixed.get(*v as usize).copied().flatten() {
                    Some(b) => out.constant(b),
                    None => out.var_node(*v),
                },
                Gate::Const(b) => out.constant(*b),
                Gate::Not(a) => out.not(map[*a as usize]),
                Gate::And(xs) => {
                    let xs: Vec<_> = xs.iter().map(|&x| map[x as usize]).collect();
                    out.and(xs)
                }
                Gate::Or(xs) => {
                    let xs: Vec<_> = xs.iter().map(|&x| map[x as usize]).collect();
                    out.or(xs)
                }
            };
        }
        (out, map[root as usize])
    }

    /// Node ids reachable from `root`, ascending.
    pub fn reachable(&self, root: NodeId) -> Vec<NodeId> {
        let mut mark = vec![false; root as usize + 1];
        mark[root as usize] = true;
        for id in (0..=root as usize).rev() {
            if !mark[id] {
                continue;
            }
            match &self.gates[id] {
                Gate::Var(_) | Gate::Const(_) => {}
                Gate::Not(a) => mark[*a as usize] = true,
                Gate::And(xs) | Gate::Or(xs) => {
                    for &x in xs {
                        mark[x as usize] = true;
                    }
                }
            }
        }
        (0..=root).filter(|&id| mark[id as usize]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_fold_constants() {
        let mut c = Circuit::new();
        let x = c.new_var();
        let xn = c.var_node(x);
        let t = c.constant(true);
        let f = c.constant(false);
        let af = c.and([xn, f]);
        assert_eq!(c.is_const(af), Some(false));
        let a = c.and([xn, t]);
        assert_eq!(a, xn);
        let ot = c.or([xn, t]);
        assert_eq!(c.is_const(ot), Some(true));
        let nn = c.not(xn);
        assert_eq!(c.not(nn), xn);
    }

    #[test]
    fn eval_and_substitute_agree() {
        let mut c = Circuit::new();
        let x = c.new_var();
        let y = c.new_var();
        let z = c.new_var();
        let (xn, yn, zn) = (c.var_node(x), c.var_node(y), c.var_node(z));
        let nz = c.not(zn);
        let conj = c.and([xn, nz]);
        let root = c.or([conj, yn]);
        // (x && !z) || y
        assert!(c.eval(root, &[true, false, false]));
        assert!(!c.eval(root, &[true, false, true]));
        assert!(c.eval(root, &[false, true, true]));

        let (sub, sroot) = c.substitute(root, &[Some(true), Some(false), None]);
        // reduces to !z
        assert!(sub.eval(sroot, &[false, false, false]));
        assert!(!sub.eval(sroot, &[false, false, true]));
        let (sub2, sroot2) = c.substitute(root, &[None, Some(true), None]);
        assert_eq!(sub2.is_const(sroot2), Some(true));
    }
}
