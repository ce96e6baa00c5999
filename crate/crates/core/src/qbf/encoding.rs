//! Binary encoding of finite-domain variables into circuit inputs.
//!
//! Each variable gets `ceil(log2 |domain|)` bits (LSB first) holding the
//! index of its value in the declared domain order. Domains whose size is
//! not a power of two need a validity constraint excluding the unused bit
//! patterns; it is the caller's job to place that constraint where the
//! quantifier structure discharges it.

use std::collections::HashMap;

use crate::varlang::{Atom, Configuration, Predicate, VarScope};

use super::circuit::{Circuit, NodeId};

#[derive(Debug, Clone)]
pub struct VarBlock {
    /// Circuit input variable indices, least significant bit first.
    pub bits: Vec<u32>,
}

/// Bit blocks for every variable of a scope, in declaration order.
#[derive(Debug, Clone)]
pub struct BoolEncoding {
    scope: VarScope,
    blocks: Vec<VarBlock>,
    index: HashMap<String, usize>,
}

fn bits_needed(domain_size: usize) -> usize {
    usize::BITS as usize - (domain_size - 1).leading_zeros() as usize
}

impl BoolEncoding {
    /// Allocates fresh circuit inputs for every variable of `scope`.
    pub fn allocate(scope: &VarScope, circuit: &mut Circuit) -> Self {
        let mut blocks = Vec::new();
        let mut index = HashMap::new();
        for decl in scope.decls() {
            let n = bits_needed(decl.domain.len());
            let bits = (0..n).map(|_| circuit.new_var()).collect();
            index.insert(decl.name.clone(), blocks.len());
            blocks.push(VarBlock { bits });
        }
        BoolEncoding { scope: scope.clone(), blocks, index }
    }

    pub fn scope(&self) -> &VarScope {
        &self.scope
    }

    pub fn block(&self, var: &str) -> &VarBlock {
        &self.blocks[self.index[var]]
    }

    /// Every input bit of the encoding, in declaration order.
    pub fn all_bits(&self) -> Vec<u32> {
        self.blocks.iter().flat_map(|b| b.bits.iter().copied()).collect()
    }

    /// Bit pattern (LSB first) of a domain value.
    pub fn pattern(&self, var: &str, value: &str) -> Vec<bool> {
        let decl = self.scope.get(var).expect("encoded variable");
        let idx = decl.value_index(value).expect("value in domain");
        let block = self.block(var);
        (0..block.bits.len()).map(|i| idx >> i & 1 == 1).collect()
    }

    /// Circuit node true iff the block of `var` holds the encoding of
    /// `value`.
    pub fn value_eq(&self, var: &str, value: &str, c: &mut Circuit) -> NodeId {
        let pattern = self.pattern(var, value);
        let block = self.block(var);
        let lits: Vec<NodeId> = block
            .bits
            .iter()
            .zip(&pattern)
            .map(|(&bit, &on)| {
                let node = c.var_node(bit);
                if on {
                    node
                } else {
                    c.not(node)
                }
            })
            .collect();
        c.and(lits)
    }

    /// Circuit node true iff the configured variables all hold their
    /// assigned values. `cfg` may cover a subset of the encoded scope.
    pub fn config_eq(&self, cfg: &Configuration, c: &mut Circuit) -> NodeId {
        let nodes: Vec<NodeId> =
            cfg.iter().map(|(var, value)| self.value_eq(var, value, c)).collect();
        c.and(nodes)
    }

    /// Conjunction over all variables of "bit pattern is a domain index".
    pub fn validity(&self, c: &mut Circuit) -> NodeId {
        let mut parts = Vec::new();
        for decl in self.scope.decls() {
            let size = decl.domain.len();
            let block = self.block(&decl.name);
            if size == 1 << block.bits.len() {
                continue; // every pattern is used
            }
            // pattern <= size - 1, compared LSB upward
            let bound = size - 1;
            let mut leq = c.constant(true);
            for (i, &bit) in block.bits.iter().enumerate() {
                let b = c.var_node(bit);
                let c_i = bound >> i & 1 == 1;
                if c_i {
                    // b < c at this bit, or equal and lower bits decide
                    let nb = c.not(b);
                    leq = c.or2(nb, leq);
                } else {
                    let nb = c.not(b);
                    leq = c.and2(nb, leq);
                }
            }
            parts.push(leq);
        }
        c.and(parts)
    }

    /// Encodes a predicate over this scope; true under an encoded valid
    /// assignment iff the predicate evaluates true on the decoded one.
    pub fn encode_predicate(&self, p: &Predicate, c: &mut Circuit) -> NodeId {
        match p {
            Predicate::True => c.constant(true),
            Predicate::False => c.constant(false),
            Predicate::Atom(Atom::EqConst { var, value }) => self.value_eq(var, value, c),
            Predicate::Atom(Atom::NeqConst { var, value }) => {
                let eq = self.value_eq(var, value, c);
                c.not(eq)
            }
            Predicate::Atom(Atom::EqVar { left, right }) => self.vars_eq(left, right, c),
            Predicate::Atom(Atom::NeqVar { left, right }) => {
                let eq = self.vars_eq(left, right, c);
                c.not(eq)
            }
            Predicate::Not(a) => {
                let an = self.encode_predicate(a, c);
                c.not(an)
            }
            Predicate::And(a, b) => {
                let an = self.encode_predicate(a, c);
                let bn = self.encode_predicate(b, c);
                c.and2(an, bn)
            }
            Predicate::Or(a, b) => {
                let an = self.encode_predicate(a, c);
                let bn = self.encode_predicate(b, c);
                c.or2(an, bn)
            }
            Predicate::Implies(a, b) => {
                let an = self.encode_predicate(a, c);
                let bn = self.encode_predicate(b, c);
                c.implies(an, bn)
            }
        }
    }

    fn vars_eq(&self, left: &str, right: &str, c: &mut Circuit) -> NodeId {
        let (lb, rb) = (self.block(left), self.block(right));
        debug_assert_eq!(lb.bits.len(), rb.bits.len(), "identical domains required");
        let pairs: Vec<(u32, u32)> = lb.bits.iter().copied().zip(rb.bits.iter().copied()).collect();
        let bits: Vec<NodeId> = pairs
            .into_iter()
            .map(|(l, r)| {
                let ln = c.var_node(l);
                let rn = c.var_node(r);
                c.iff(ln, rn)
            })
            .collect();
        c.and(bits)
    }

    /// Reads a model back into a configuration. Returns `None` when a
    /// block holds a bit pattern outside its domain.
    pub fn decode(&self, model: &[bool]) -> Option<Configuration> {
        let mut pairs = Vec::new();
        for decl in self.scope.decls() {
            let block = self.block(&decl.name);
            let mut idx = 0usize;
            for (i, &bit) in block.bits.iter().enumerate() {
                if model[bit as usize] {
                    idx |= 1 << i;
                }
            }
            let value = decl.domain.get(idx)?;
            pairs.push((decl.name.clone(), value.clone()));
        }
        Some(Configuration::from_pairs(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::varlang::{VarDecl, eval};

    fn scope(pairs: &[(&str, &[&str])]) -> VarScope {
        VarScope::new(
            pairs
                .iter()
                .map(|(n, d)| {
                    VarDecl::new(*n, d.iter().map(|s| s.to_string()).collect()).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn block_sizes() {
        let sc = scope(&[("a", &["x"]), ("b", &["x", "y"]), ("c", &["x", "y", "z"])]);
        let mut circ = Circuit::new();
        let enc = BoolEncoding::allocate(&sc, &mut circ);
        assert_eq!(enc.block("a").bits.len(), 0);
        assert_eq!(enc.block("b").bits.len(), 1);
        assert_eq!(enc.block("c").bits.len(), 2);
    }

    #[test]
    fn two_valued_domain_needs_no_validity() {
        let sc = scope(&[("x", &["a", "b"])]);
        let mut circ = Circuit::new();
        let enc = BoolEncoding::allocate(&sc, &mut circ);
        let v = enc.validity(&mut circ);
        assert_eq!(circ.is_const(v), Some(true));
    }

    #[test]
    fn three_valued_domain_excludes_one_pattern() {
        let sc = scope(&[("x", &["a", "b", "c"])]);
        let mut circ = Circuit::new();
        let enc = BoolEncoding::allocate(&sc, &mut circ);
        let v = enc.validity(&mut circ);
        let ok: Vec<bool> = (0..4u32)
            .map(|bits| circ.eval(v, &[bits & 1 == 1, bits >> 1 & 1 == 1]))
            .collect();
        assert_eq!(ok.iter().filter(|&&b| b).count(), 3);
        assert!(!ok[3], "pattern 11 (index 3) is excluded");
    }

    #[test]
    fn encode_decode_round_trip() {
        let sc = scope(&[("x", &["a", "b", "c"]), ("y", &["u", "v"]), ("z", &["only"])]);
        let mut circ = Circuit::new();
        let enc = BoolEncoding::allocate(&sc, &mut circ);
        for cfg in sc.assignments() {
            let mut model = vec![false; circ.num_vars() as usize];
            for (var, value) in cfg.iter() {
                for (i, &bit) in enc.block(var).bits.iter().enumerate() {
                    model[bit as usize] = enc.pattern(var, value)[i];
                }
            }
            assert_eq!(enc.decode(&model), Some(cfg));
        }
    }

    #[test]
    fn predicate_circuit_matches_eval_exhaustively() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let sc = scope(&[("x", &["a", "b", "c"]), ("y", &["a", "b", "c"]), ("z", &["u", "v"])]);

        fn random_pred(rng: &mut impl Rng, depth: usize) -> Predicate {
            if depth == 0 {
                let var = ["x", "y", "z"][rng.random_range(0..3)];
                let value = if var == "z" {
                    ["u", "v"][rng.random_range(0..2)]
                } else {
                    ["a", "b", "c"][rng.random_range(0..3)]
                };
                return match rng.random_range(0..4) {
                    0 => Predicate::eq_const(var, value),
                    1 => Predicate::neq_const(var, value),
                    2 => Predicate::eq_var("x", "y"),
                    _ => Predicate::neq_var("x", "y"),
                };
            }
            let a = random_pred(rng, depth - 1);
            let b = random_pred(rng, depth - 1);
            match rng.random_range(0..4) {
                0 => Predicate::not(a),
                1 => Predicate::and(a, b),
                2 => Predicate::or(a, b),
                _ => Predicate::implies(a, b),
            }
        }

        for _ in 0..100 {
            let p = random_pred(&mut rng, 3);
            let mut circ = Circuit::new();
            let enc = BoolEncoding::allocate(&sc, &mut circ);
            let node = enc.encode_predicate(&p, &mut circ);
            for cfg in sc.assignments() {
                let mut model = vec![false; circ.num_vars() as usize];
                for (var, value) in cfg.iter() {
                    for (i, &bit) in enc.block(var).bits.iter().enumerate() {
                        model[bit as usize] = enc.pattern(var, value)[i];
                    }
                }
                assert_eq!(circ.eval(node, &model), eval(&p, &cfg).unwrap());
            }
        }
    }
}
