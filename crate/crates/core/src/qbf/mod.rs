//! Forall-exists conformance formulas and their decision procedure.
//!
//! The whole-SPL conformance condition is encoded as a two-block quantified
//! Boolean formula: universally quantified bits encode a composite design
//! configuration, existentially quantified bits a composite requirement
//! configuration, and the matrix says "valid design configurations have a
//! compatible requirement configuration through the per-feature conformance
//! mappings". The formula is decided by a counterexample-guided loop over
//! the CDCL core, and can be exported in the QDIMACS and QCIR formats.

pub mod circuit;
pub mod encoding;
pub mod qcir;
pub mod qdimacs;
pub mod sat;
pub mod tseitin;

use crate::containment::ConformanceMapping;
use crate::error::{CapacityError, Error, Result};
use crate::limits::Limits;
use crate::varlang::{Configuration, Predicate, VarScope};

use circuit::{Circuit, NodeId};
use encoding::BoolEncoding;
use sat::{Lit, SatResult, Solver};

/// A prenex forall-exists formula over a Boolean circuit matrix.
///
/// The matrix is `antecedent => consequent`; keeping the two sides separate
/// is what lets the refinement loop specialize them independently.
#[derive(Debug, Clone)]
pub struct QbfFormula {
    pub circuit: Circuit,
    /// The design-side constraint (over universal inputs only).
    pub antecedent: NodeId,
    /// Mapping conjunction plus requirement-side constraint.
    pub consequent: NodeId,
    pub matrix: NodeId,
    /// Universally quantified circuit inputs (design bits).
    pub universal: Vec<u32>,
    /// Existentially quantified circuit inputs (requirement bits).
    pub existential: Vec<u32>,
    /// Present when the formula was built from an SPL (enables witness
    /// decoding); absent for formulas parsed from QDIMACS.
    pub design_encoding: Option<BoolEncoding>,
    pub requirement_encoding: Option<BoolEncoding>,
}

/// Whole-SPL verdict with a decoded counterexample when non-conforming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplVerdict {
    pub conforms: bool,
    /// A valid composite design configuration with no compatible
    /// requirement configuration.
    pub witness: Option<Configuration>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Counterexample-guided refinements performed.
    pub refinements: u64,
    /// Clauses in the abstraction solver when the loop finished.
    pub clauses: usize,
}

/// Raw outcome of the forall-exists solver.
#[derive(Debug, Clone)]
pub struct QbfOutcome {
    pub valid: bool,
    /// Assignment of the universal block falsifying the formula, as a full
    /// input-width vector.
    pub counterexample: Option<Vec<bool>>,
    pub stats: SolveStats,
}

/// One feature's contribution to the conformance formula.
pub struct PsiFeature<'a> {
    pub mapping: &'a ConformanceMapping,
    pub design_global: &'a Predicate,
    pub requirement_global: &'a Predicate,
}

/// Satisfiability of a single circuit node; returns a model over the
/// circuit inputs.
pub fn sat_circuit(circuit: &Circuit, root: NodeId) -> Option<Vec<bool>> {
    match circuit.is_const(root) {
        Some(true) => return Some(vec![false; circuit.num_vars() as usize]),
        Some(false) => return None,
        None => {}
    }
    let conv = tseitin::convert(circuit, root);
    let mut solver = Solver::new();
    for _ in 0..conv.cnf.num_vars {
        solver.new_var();
    }
    for clause in &conv.cnf.clauses {
        let lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_dimacs(l)).collect();
        if !solver.add_clause(&lits) {
            return None;
        }
    }
    if !solver.add_clause(&[Lit::from_dimacs(conv.root)]) {
        return None;
    }
    match solver.solve() {
        SatResult::Sat(model) => Some(model[..circuit.num_vars() as usize].to_vec()),
        SatResult::Unsat => None,
    }
}

/// Circuit form of the mapping: for every design configuration, its block
/// pattern implies the disjunction of the image patterns. An empty image
/// yields an implication to false.
pub fn encode_mapping(
    mapping: &ConformanceMapping,
    enc_d: &BoolEncoding,
    enc_r: &BoolEncoding,
    c: &mut Circuit,
) -> NodeId {
    let mut parts = Vec::with_capacity(mapping.entries().len());
    for (key, image) in mapping.entries() {
        let ante = enc_d.config_eq(key, c);
        let options: Vec<NodeId> = image.iter().map(|r| enc_r.config_eq(r, c)).collect();
        let cons = c.or(options);
        parts.push(c.implies(ante, cons));
    }
    c.and(parts)
}

/// Builds the conformance formula from per-feature mappings, per-feature
/// global predicates and the cross-feature composition predicates.
pub fn build_psi(
    features: &[PsiFeature<'_>],
    des_constraints: &[Predicate],
    req_constraints: &[Predicate],
) -> Result<QbfFormula> {
    let mut design_scope = VarScope::empty();
    let mut requirement_scope = VarScope::empty();
    for f in features {
        design_scope = design_scope.union(&f.mapping.design_scope)?;
        requirement_scope = requirement_scope.union(&f.mapping.requirement_scope)?;
    }
    let mut circuit = Circuit::new();
    let enc_d = BoolEncoding::allocate(&design_scope, &mut circuit);
    let enc_r = BoolEncoding::allocate(&requirement_scope, &mut circuit);
    let universal = enc_d.all_bits();
    let existential = enc_r.all_bits();

    let mut phi_d = vec![enc_d.validity(&mut circuit)];
    for f in features {
        f.design_global.validate(&design_scope)?;
        phi_d.push(enc_d.encode_predicate(f.design_global, &mut circuit));
    }
    for p in des_constraints {
        p.validate(&design_scope)?;
        phi_d.push(enc_d.encode_predicate(p, &mut circuit));
    }
    let antecedent = circuit.and(phi_d);

    let mut parts = Vec::new();
    for f in features {
        parts.push(encode_mapping(f.mapping, &enc_d, &enc_r, &mut circuit));
    }
    parts.push(enc_r.validity(&mut circuit));
    for f in features {
        f.requirement_global.validate(&requirement_scope)?;
        parts.push(enc_r.encode_predicate(f.requirement_global, &mut circuit));
    }
    for p in req_constraints {
        p.validate(&requirement_scope)?;
        parts.push(enc_r.encode_predicate(p, &mut circuit));
    }
    let consequent = circuit.and(parts);
    let matrix = circuit.implies(antecedent, consequent);

    Ok(QbfFormula {
        circuit,
        antecedent,
        consequent,
        matrix,
        universal,
        existential,
        design_encoding: Some(enc_d),
        requirement_encoding: Some(enc_r),
    })
}

fn feed_clauses(solver: &mut Solver, cnf: &tseitin::Cnf) {
    while solver.num_vars() < cnf.num_vars {
        solver.new_var();
    }
    for clause in &cnf.clauses {
        let lits: Vec<Lit> = clause.iter().map(|&l| Lit::from_dimacs(l)).collect();
        solver.add_clause(&lits);
    }
}

/// Decides a prenex forall-exists formula by counterexample-guided
/// refinement.
///
/// The abstraction solver holds the antecedent plus, for every requirement
/// witness seen so far, the negation of the matrix body specialized at that
/// witness. A candidate universal assignment with no existential witness is
/// a counterexample; an unsatisfiable abstraction proves validity.
pub fn solve_forall_exists(f: &QbfFormula, limits: &Limits) -> Result<QbfOutcome> {
    let nvars = f.circuit.num_vars() as usize;
    let mut abstraction = Solver::new();
    for _ in 0..nvars {
        abstraction.new_var();
    }
    match f.circuit.is_const(f.antecedent) {
        Some(true) => {}
        Some(false) => {
            return Ok(QbfOutcome {
                valid: true,
                counterexample: None,
                stats: SolveStats { refinements: 0, clauses: 0 },
            })
        }
        None => {
            let conv = tseitin::convert_from(&f.circuit, f.antecedent, nvars + 1);
            feed_clauses(&mut abstraction, &conv.cnf);
            abstraction.add_clause(&[Lit::from_dimacs(conv.root)]);
        }
    }

    let mut stats = SolveStats::default();
    loop {
        let candidate = match abstraction.solve() {
            SatResult::Unsat => {
                stats.clauses = abstraction.num_clauses();
                return Ok(QbfOutcome { valid: true, counterexample: None, stats });
            }
            SatResult::Sat(model) => {
                let mut fixed = vec![None; nvars];
                for &x in &f.universal {
                    fixed[x as usize] = Some(model[x as usize]);
                }
                fixed
            }
        };

        // does some existential assignment satisfy the body at this candidate?
        let (spec, spec_root) = f.circuit.substitute(f.consequent, &candidate);
        let witness = match spec.is_const(spec_root) {
            Some(true) => Some(vec![false; nvars]),
            Some(false) => None,
            None => sat_circuit(&spec, spec_root),
        };

        match witness {
            None => {
                stats.clauses = abstraction.num_clauses();
                let cex = candidate.iter().map(|b| b.unwrap_or(false)).collect();
                return Ok(QbfOutcome { valid: false, counterexample: Some(cex), stats });
            }
            Some(model) => {
                if stats.refinements >= limits.refine_cap {
                    return Err(CapacityError::new(
                        "refining the forall-exists abstraction",
                        stats.refinements as u128 + 1,
                        limits.refine_cap as u128,
                    )
                    .into());
                }
                stats.refinements += 1;
                let mut fixed = vec![None; nvars];
                for &y in &f.existential {
                    fixed[y as usize] = Some(model[y as usize]);
                }
                let (refined, refined_root) = f.circuit.substitute(f.consequent, &fixed);
                match refined.is_const(refined_root) {
                    // body true for every x: no candidate can beat this witness
                    Some(true) => {
                        stats.clauses = abstraction.num_clauses();
                        return Ok(QbfOutcome { valid: true, counterexample: None, stats });
                    }
                    Some(false) => {
                        // witness satisfied the body at x*, yet the body is
                        // constant false: impossible
                        return Err(Error::Internal(
                            "refinement produced a contradictory specialization".into(),
                        ));
                    }
                    None => {
                        let conv = tseitin::convert_from(
                            &refined,
                            refined_root,
                            abstraction.num_vars() + 1,
                        );
                        feed_clauses(&mut abstraction, &conv.cnf);
                        abstraction.add_clause(&[Lit::from_dimacs(-conv.root)]);
                    }
                }
            }
        }
    }
}

impl QbfFormula {
    /// Decodes a raw outcome into an SPL verdict. Requires the design
    /// encoding (formulas built by [`build_psi`]).
    pub fn verdict(&self, outcome: &QbfOutcome) -> Result<SplVerdict> {
        if outcome.valid {
            return Ok(SplVerdict { conforms: true, witness: None });
        }
        let bits = outcome
            .counterexample
            .as_ref()
            .ok_or_else(|| Error::Internal("invalid outcome without counterexample".into()))?;
        let enc = self
            .design_encoding
            .as_ref()
            .ok_or_else(|| Error::Internal("formula carries no design encoding".into()))?;
        let witness = enc
            .decode(bits)
            .ok_or_else(|| Error::Internal("counterexample decodes outside the domain".into()))?;
        Ok(SplVerdict { conforms: false, witness: Some(witness) })
    }
}

/// Double-enumeration oracle: for every universal assignment, search all
/// existential assignments for one satisfying the matrix. Exponential; test
/// and cross-check use only.
pub fn brute_force_forall_exists(f: &QbfFormula) -> (bool, Option<Vec<bool>>) {
    let nvars = f.circuit.num_vars() as usize;
    let nx = f.universal.len();
    let ny = f.existential.len();
    assert!(nx <= 24 && ny <= 24, "oracle is for small formulas");
    let mut assignment = vec![false; nvars];
    for xbits in 0..1u64 << nx {
        for (i, &x) in f.universal.iter().enumerate() {
            assignment[x as usize] = xbits >> i & 1 == 1;
        }
        let mut found = false;
        for ybits in 0..1u64 << ny {
            for (j, &y) in f.existential.iter().enumerate() {
                assignment[y as usize] = ybits >> j & 1 == 1;
            }
            if f.circuit.eval(f.matrix, &assignment) {
                found = true;
                break;
            }
        }
        if !found {
            for (j, &y) in f.existential.iter().enumerate() {
                let _ = j;
                assignment[y as usize] = false;
            }
            return (false, Some(assignment));
        }
    }
    (true, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn limits() -> Limits {
        Limits::default()
    }

    /// forall x exists y (y = x) over one bit each.
    #[test]
    fn identity_formula_is_valid() {
        let mut c = Circuit::new();
        let x = c.new_var();
        let y = c.new_var();
        let (xn, yn) = (c.var_node(x), c.var_node(y));
        let body = c.iff(xn, yn);
        let t = c.constant(true);
        let matrix = body;
        let f = QbfFormula {
            circuit: c,
            antecedent: t,
            consequent: body,
            matrix,
            universal: vec![x],
            existential: vec![y],
            design_encoding: None,
            requirement_encoding: None,
        };
        let out = solve_forall_exists(&f, &limits()).unwrap();
        assert!(out.valid);
        assert!(out.stats.refinements <= 2);
    }

    /// forall x exists y (false) with satisfiable antecedent: invalid, and
    /// the counterexample satisfies the antecedent.
    #[test]
    fn false_body_yields_first_candidate() {
        let mut c = Circuit::new();
        let x = c.new_var();
        let _y = c.new_var();
        let xn = c.var_node(x);
        let fls = c.constant(false);
        let matrix = c.implies(xn, fls);
        let f = QbfFormula {
            circuit: c,
            antecedent: xn,
            consequent: fls,
            matrix,
            universal: vec![x],
            existential: vec![1],
            design_encoding: None,
            requirement_encoding: None,
        };
        let out = solve_forall_exists(&f, &limits()).unwrap();
        assert!(!out.valid);
        let cex = out.counterexample.unwrap();
        assert!(cex[0], "counterexample must satisfy the antecedent x");
    }

    #[test]
    fn identity_mapping_encodes_to_block_equality() {
        use crate::varlang::{VarDecl, VarScope};
        // a feature with one two-valued variable on each side and the
        // identity mapping: the circuit must match (y = x) on all inputs
        let dscope =
            VarScope::new(vec![VarDecl::new("d", vec!["a".into(), "b".into()]).unwrap()]).unwrap();
        let rscope =
            VarScope::new(vec![VarDecl::new("r", vec!["a".into(), "b".into()]).unwrap()]).unwrap();
        let entries = vec![
            (
                Configuration::from_pairs([("d", "a")]),
                vec![Configuration::from_pairs([("r", "a")])],
            ),
            (
                Configuration::from_pairs([("d", "b")]),
                vec![Configuration::from_pairs([("r", "b")])],
            ),
        ];
        let mapping =
            ConformanceMapping::new("id".into(), dscope.clone(), rscope.clone(), 2, entries);
        let mut circuit = Circuit::new();
        let enc_d = BoolEncoding::allocate(&dscope, &mut circuit);
        let enc_r = BoolEncoding::allocate(&rscope, &mut circuit);
        let node = encode_mapping(&mapping, &enc_d, &enc_r, &mut circuit);
        for x in [false, true] {
            for y in [false, true] {
                assert_eq!(circuit.eval(node, &[x, y]), x == y);
            }
        }

        // an empty image makes the formula falsifiable at that block value
        let entries = vec![(Configuration::from_pairs([("d", "a")]), vec![])];
        let empty = ConformanceMapping::new("none".into(), dscope.clone(), rscope, 1, entries);
        let mut circuit = Circuit::new();
        let enc_d = BoolEncoding::allocate(&dscope, &mut circuit);
        let node = encode_mapping(&empty, &enc_d, &enc_d, &mut circuit);
        assert!(!circuit.eval(node, &[false]), "x = a implies an empty disjunction");
        assert!(circuit.eval(node, &[true]), "other x values are unconstrained");
    }

    #[test]
    fn doorlock_formula_is_valid_by_brute_force() {
        use crate::containment::compute_conformance;
        let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models");
        let req = crate::spl::load_machine(&dir.join("doorlock/req_dl.fsmv")).unwrap();
        let des = crate::spl::load_machine(&dir.join("doorlock/des_dl.fsmv")).unwrap();
        let mapping = compute_conformance(&des, &req, &limits()).unwrap();
        let feature = PsiFeature {
            mapping: &mapping,
            design_global: &des.global,
            requirement_global: &req.global,
        };
        let psi = build_psi(&[feature], &[], &[]).unwrap();
        let solved = solve_forall_exists(&psi, &limits()).unwrap();
        let (expected, _) = brute_force_forall_exists(&psi);
        assert!(solved.valid);
        assert!(expected);
    }

    #[test]
    fn random_formulas_match_double_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for round in 0..150 {
            let nx = rng.random_range(1..=5);
            let ny = rng.random_range(1..=5);
            let mut c = Circuit::new();
            let xs: Vec<u32> = (0..nx).map(|_| c.new_var()).collect();
            let ys: Vec<u32> = (0..ny).map(|_| c.new_var()).collect();
            let mut pool: Vec<NodeId> =
                xs.iter().chain(ys.iter()).map(|&v| c.var_node(v)).collect();
            for _ in 0..rng.random_range(2..=16) {
                let a = pool[rng.random_range(0..pool.len())];
                let b = pool[rng.random_range(0..pool.len())];
                let n = match rng.random_range(0..4) {
                    0 => c.not(a),
                    1 => c.and2(a, b),
                    2 => c.or2(a, b),
                    _ => c.implies(a, b),
                };
                pool.push(n);
            }
            let consequent = *pool.last().unwrap();
            let antecedent = pool[rng.random_range(0..pool.len())];
            // antecedent must only mention universal inputs
            let ante_ok = c
                .reachable(antecedent)
                .iter()
                .all(|&id| match c.gate(id) {
                    circuit::Gate::Var(v) => xs.contains(v),
                    _ => true,
                });
            if !ante_ok {
                continue;
            }
            let matrix = c.implies(antecedent, consequent);
            let f = QbfFormula {
                circuit: c,
                antecedent,
                consequent,
                matrix,
                universal: xs,
                existential: ys,
                design_encoding: None,
                requirement_encoding: None,
            };
            let out = solve_forall_exists(&f, &limits()).unwrap();
            let (expected, _) = brute_force_forall_exists(&f);
            assert_eq!(out.valid, expected, "round {round}");
            if let Some(cex) = &out.counterexample {
                // a counterexample satisfies the antecedent and no witness exists
                assert!(f.circuit.eval(f.antecedent, cex));
            }
        }
    }
}
