//! Whole-SPL checking: manifest loading, per-feature conformance, and the
//! three SPL-level strategies (symbolic forall-exists, monolithic
//! composition, mapping enumeration).
//!
//! The monolithic and enumeration strategies exist as independent oracles
//! for the symbolic path; production use is the symbolic mode, which never
//! builds the composed state space.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use crate::composition::{add_mappings, compose};
use crate::containment::{compute_conformance, ConformanceMapping};
use crate::error::{Error, Result};
use crate::fsmv::FsmvMachine;
use crate::limits::Limits;
use crate::qbf::{self, PsiFeature, SolveStats, SplVerdict};
use crate::syntax;
use crate::varlang::{Configuration, Predicate, VarScope};

/// SPL-level checking strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplMode {
    Qbf,
    Monolithic,
    Enumerate,
}

impl SplMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SplMode::Qbf => "qbf",
            SplMode::Monolithic => "monolithic",
            SplMode::Enumerate => "enumerate",
        }
    }
}

impl std::str::FromStr for SplMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "qbf" => Ok(SplMode::Qbf),
            "monolithic" => Ok(SplMode::Monolithic),
            "enumerate" => Ok(SplMode::Enumerate),
            other => Err(format!("unknown mode `{other}` (expected qbf, monolithic, enumerate)")),
        }
    }
}

/// One feature of a product line: a requirement and a design machine, with
/// variables qualified by the feature name.
#[derive(Debug, Clone)]
pub struct SplFeature {
    pub name: String,
    pub req_path: String,
    pub des_path: String,
    pub requirement: FsmvMachine,
    pub design: FsmvMachine,
}

/// A loaded, resolved SPL manifest.
#[derive(Debug, Clone)]
pub struct SplManifest {
    pub name: String,
    pub features: Vec<SplFeature>,
    /// Constraints over the qualified requirement variables of all features.
    pub req_constraints: Vec<Predicate>,
    /// Constraints over the qualified design variables.
    pub des_constraints: Vec<Predicate>,
}

impl SplManifest {
    /// Union of the qualified design scopes, in feature order.
    pub fn design_scope(&self) -> Result<VarScope> {
        let mut scope = VarScope::empty();
        for f in &self.features {
            scope = scope.union(&f.design.vars)?;
        }
        Ok(scope)
    }

    pub fn requirement_scope(&self) -> Result<VarScope> {
        let mut scope = VarScope::empty();
        for f in &self.features {
            scope = scope.union(&f.requirement.vars)?;
        }
        Ok(scope)
    }

    /// Builds a manifest from in-memory machines: qualifies each feature's
    /// variables by the feature name and resolves the constraints.
    pub fn assemble(
        name: String,
        features: Vec<(String, FsmvMachine, FsmvMachine)>,
        req_constraints: Vec<Predicate>,
        des_constraints: Vec<Predicate>,
    ) -> Result<SplManifest> {
        let features: Vec<SplFeature> = features
            .into_iter()
            .map(|(fname, requirement, design)| {
                let requirement = requirement.qualify(&fname);
                let design = design.qualify(&fname);
                SplFeature { name: fname, req_path: String::new(), des_path: String::new(), requirement, design }
            })
            .collect();
        let manifest = SplManifest { name, features, req_constraints, des_constraints };
        let rscope = manifest.requirement_scope()?;
        let dscope = manifest.design_scope()?;
        for c in &manifest.req_constraints {
            c.validate(&rscope)?;
        }
        for c in &manifest.des_constraints {
            c.validate(&dscope)?;
        }
        Ok(manifest)
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(path.display().to_string(), e))
}

/// Loads and validates the single machine in a model file.
pub fn load_machine(path: &Path) -> Result<FsmvMachine> {
    let text = read_file(path)?;
    let machines = syntax::parse_models(&text)
        .map_err(|e| Error::parse_in(path.display().to_string(), e))?;
    match machines.len() {
        1 => {
            let m = machines.into_iter().next().unwrap();
            m.validate()?;
            Ok(m)
        }
        n => Err(Error::parse_in(
            path.display().to_string(),
            crate::error::ParseError::new(1, 1, format!("expected exactly one machine, found {n}")),
        )),
    }
}

/// Loads a manifest, its model files, qualifies variables and resolves the
/// cross-feature constraints.
pub fn load_manifest(path: &Path) -> Result<SplManifest> {
    let text = read_file(path)?;
    let raw = syntax::parse_manifest(&text)
        .map_err(|e| Error::parse_in(path.display().to_string(), e))?;
    let base: PathBuf = path.parent().map(|p| p.to_path_buf()).unwrap_or_default();
    let mut features = Vec::new();
    for f in &raw.features {
        let requirement = load_machine(&base.join(&f.req_path))?.qualify(&f.name);
        let design = load_machine(&base.join(&f.des_path))?.qualify(&f.name);
        features.push(SplFeature {
            name: f.name.clone(),
            req_path: f.req_path.clone(),
            des_path: f.des_path.clone(),
            requirement,
            design,
        });
    }
    let manifest_scope = |mk: fn(&SplFeature) -> &VarScope| -> Result<VarScope> {
        let mut scope = VarScope::empty();
        for f in &features {
            scope = scope.union(mk(f))?;
        }
        Ok(scope)
    };
    let rscope = manifest_scope(|f| &f.requirement.vars)?;
    let dscope = manifest_scope(|f| &f.design.vars)?;
    let req_constraints = raw
        .req_constraints
        .iter()
        .map(|c| c.resolve(&rscope))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::parse_in(path.display().to_string(), e))?;
    let des_constraints = raw
        .des_constraints
        .iter()
        .map(|c| c.resolve(&dscope))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Error::parse_in(path.display().to_string(), e))?;
    Ok(SplManifest { name: raw.name, features, req_constraints, des_constraints })
}

/// Per-feature conformance result.
#[derive(Debug, Clone)]
pub struct FeatureOutcome {
    pub name: String,
    pub mapping: ConformanceMapping,
    pub time_ms: u128,
}

/// SPL-level result of one strategy.
#[derive(Debug, Clone)]
pub struct SplLevelOutcome {
    pub verdict: SplVerdict,
    pub stats: SolveStats,
    pub time_ms: u128,
}

/// Complete outcome of a whole-SPL check.
#[derive(Debug, Clone)]
pub struct SplOutcome {
    pub manifest_name: String,
    pub mode: SplMode,
    pub features: Vec<FeatureOutcome>,
    /// Names of features whose design does not conform to their
    /// requirement.
    pub failing_features: Vec<String>,
    /// `None` when feature-level failures short-circuited the SPL step.
    pub spl: Option<SplLevelOutcome>,
    pub total_time_ms: u128,
}

impl SplOutcome {
    /// True only when every feature conforms and the SPL step (if run)
    /// holds.
    pub fn conforms(&self) -> bool {
        self.failing_features.is_empty()
            && self.spl.as_ref().map(|s| s.verdict.conforms).unwrap_or(false)
    }
}

/// Options for [`check_spl`].
#[derive(Debug, Clone, Copy, Default)]
pub struct CheckOptions {
    pub limits: Limits,
    /// Run the SPL-level step even when some feature already failed.
    pub keep_going: bool,
}

/// Runs the per-feature conformance checks (in parallel) and then the
/// chosen SPL-level strategy.
pub fn check_spl(manifest: &SplManifest, mode: SplMode, opts: &CheckOptions) -> Result<SplOutcome> {
    let start = Instant::now();
    let features: Vec<FeatureOutcome> = manifest
        .features
        .par_iter()
        .map(|f| {
            let t0 = Instant::now();
            let mapping = compute_conformance(&f.design, &f.requirement, &opts.limits)?;
            Ok(FeatureOutcome {
                name: f.name.clone(),
                mapping,
                time_ms: t0.elapsed().as_millis(),
            })
        })
        .collect::<Result<_>>()?;
    let failing_features: Vec<String> = features
        .iter()
        .filter(|f| !f.mapping.conforms())
        .map(|f| f.name.clone())
        .collect();

    let spl = if failing_features.is_empty() || opts.keep_going {
        let t0 = Instant::now();
        let (verdict, stats) = run_spl_level(manifest, &features, mode, &opts.limits)?;
        Some(SplLevelOutcome { verdict, stats, time_ms: t0.elapsed().as_millis() })
    } else {
        None
    };

    Ok(SplOutcome {
        manifest_name: manifest.name.clone(),
        mode,
        features,
        failing_features,
        spl,
        total_time_ms: start.elapsed().as_millis(),
    })
}

fn run_spl_level(
    manifest: &SplManifest,
    features: &[FeatureOutcome],
    mode: SplMode,
    limits: &Limits,
) -> Result<(SplVerdict, SolveStats)> {
    match mode {
        SplMode::Qbf => {
            let psi = build_manifest_psi(manifest, features)?;
            let outcome = qbf::solve_forall_exists(&psi, limits)?;
            let verdict = psi.verdict(&outcome)?;
            Ok((verdict, outcome.stats))
        }
        SplMode::Monolithic => {
            for side in [true, false] {
                let states: u128 = manifest
                    .features
                    .iter()
                    .map(|f| {
                        if side { f.design.states.len() } else { f.requirement.states.len() }
                            .max(1) as u128
                    })
                    .product();
                if states > limits.enum_budget as u128 {
                    return Err(crate::error::CapacityError::new(
                        "building the monolithic composite state space",
                        states,
                        limits.enum_budget as u128,
                    )
                    .into());
                }
            }
            let composed_design = compose_all(
                manifest.features.iter().map(|f| &f.design),
                &manifest.des_constraints,
            )?;
            let composed_req = compose_all(
                manifest.features.iter().map(|f| &f.requirement),
                &manifest.req_constraints,
            )?;
            let mapping = compute_conformance(&composed_design, &composed_req, limits)?;
            let witness = mapping.failing().first().map(|c| (*c).clone());
            Ok((
                SplVerdict { conforms: witness.is_none(), witness },
                SolveStats::default(),
            ))
        }
        SplMode::Enumerate => {
            let verdict = enumerate_verdict(manifest, features, limits)?;
            Ok((verdict, SolveStats::default()))
        }
    }
}

/// Builds the conformance formula for a manifest from already-computed
/// per-feature mappings.
pub fn build_manifest_psi(
    manifest: &SplManifest,
    features: &[FeatureOutcome],
) -> Result<qbf::QbfFormula> {
    let entries: Vec<PsiFeature<'_>> = manifest
        .features
        .iter()
        .zip(features)
        .map(|(f, outcome)| PsiFeature {
            mapping: &outcome.mapping,
            design_global: &f.design.global,
            requirement_global: &f.requirement.global,
        })
        .collect();
    qbf::build_psi(&entries, &manifest.des_constraints, &manifest.req_constraints)
}

/// Left-folds the parallel composition over all machines; the manifest's
/// n-ary predicates are conjoined onto the final global predicate.
pub fn compose_all<'a>(
    machines: impl IntoIterator<Item = &'a FsmvMachine>,
    constraints: &[Predicate],
) -> Result<FsmvMachine> {
    let mut it = machines.into_iter();
    let mut acc = match it.next() {
        Some(first) => first.clone(),
        None => FsmvMachine {
            name: "empty".into(),
            states: vec!["s0".into()],
            initial: "s0".into(),
            events: vec![],
            vars: VarScope::empty(),
            transitions: vec![],
            global: Predicate::True,
        },
    };
    for m in it {
        acc = compose(&acc, m, &Predicate::True)?;
    }
    if !constraints.is_empty() {
        acc.global = Predicate::conjoin(
            std::iter::once(acc.global.clone()).chain(constraints.iter().cloned()),
        );
        if !crate::varlang::is_consistent(&acc.global, &acc.vars)? {
            return Err(crate::error::ModelError::InconsistentPredicate(format!(
                "global predicate of `{}` with manifest constraints",
                acc.name
            ))
            .into());
        }
    }
    Ok(acc)
}

/// Left-folds mapping addition over all features, applying each constraint
/// at the first fold step whose scope covers it. Used as the enumeration
/// oracle against the symbolic path.
pub fn enumerate_mapping(
    manifest: &SplManifest,
    features: &[FeatureOutcome],
    limits: &Limits,
) -> Result<ConformanceMapping> {
    let unit = ConformanceMapping::new(
        String::new(),
        VarScope::empty(),
        VarScope::empty(),
        1,
        vec![(Configuration::empty(), vec![Configuration::empty()])],
    );
    let mut acc = unit;
    let mut acc_rho_d = Predicate::True;
    let mut acc_rho_r = Predicate::True;
    let mut des_used = vec![false; manifest.des_constraints.len()];
    let mut req_used = vec![false; manifest.req_constraints.len()];

    for (f, outcome) in manifest.features.iter().zip(features) {
        let dscope = acc.design_scope.union(&f.design.vars)?;
        let rscope = acc.requirement_scope.union(&f.requirement.vars)?;
        let mut rho_d = Predicate::and(acc_rho_d.clone(), f.design.global.clone());
        for (used, c) in des_used.iter_mut().zip(&manifest.des_constraints) {
            if !*used && c.vars().iter().all(|v| dscope.get(v).is_some()) {
                rho_d = Predicate::and(rho_d, c.clone());
                *used = true;
            }
        }
        let mut rho_r = Predicate::and(acc_rho_r.clone(), f.requirement.global.clone());
        for (used, c) in req_used.iter_mut().zip(&manifest.req_constraints) {
            if !*used && c.vars().iter().all(|v| rscope.get(v).is_some()) {
                rho_r = Predicate::and(rho_r, c.clone());
                *used = true;
            }
        }
        acc = add_mappings(&acc, &outcome.mapping, &rho_d, &rho_r, limits.pair_budget)?;
        acc_rho_d = rho_d;
        acc_rho_r = rho_r;
    }
    Ok(acc)
}

/// Evaluates predicates over a tuple of per-feature configurations without
/// merging them; variables are routed to their owning feature.
struct PartsEval {
    owner: std::collections::HashMap<String, usize>,
}

impl PartsEval {
    fn new<'a>(scopes: impl Iterator<Item = &'a VarScope>) -> PartsEval {
        let mut owner = std::collections::HashMap::new();
        for (i, scope) in scopes.enumerate() {
            for d in scope.decls() {
                owner.insert(d.name.clone(), i);
            }
        }
        PartsEval { owner }
    }

    fn lookup<'a>(&self, parts: &[&'a Configuration], var: &str) -> Option<&'a str> {
        self.owner.get(var).and_then(|&i| parts[i].get(var))
    }

    fn eval(&self, p: &Predicate, parts: &[&Configuration]) -> bool {
        use crate::varlang::Atom;
        match p {
            Predicate::True => true,
            Predicate::False => false,
            Predicate::Atom(Atom::EqConst { var, value }) => {
                self.lookup(parts, var) == Some(value.as_str())
            }
            Predicate::Atom(Atom::NeqConst { var, value }) => {
                self.lookup(parts, var) != Some(value.as_str())
            }
            Predicate::Atom(Atom::EqVar { left, right }) => {
                self.lookup(parts, left) == self.lookup(parts, right)
            }
            Predicate::Atom(Atom::NeqVar { left, right }) => {
                self.lookup(parts, left) != self.lookup(parts, right)
            }
            Predicate::Not(a) => !self.eval(a, parts),
            Predicate::And(a, b) => self.eval(a, parts) && self.eval(b, parts),
            Predicate::Or(a, b) => self.eval(a, parts) || self.eval(b, parts),
            Predicate::Implies(a, b) => !self.eval(a, parts) || self.eval(b, parts),
        }
    }

    /// Highest feature index a predicate mentions (for pruning order).
    fn last_feature(&self, p: &Predicate) -> usize {
        p.vars().iter().filter_map(|v| self.owner.get(*v)).copied().max().unwrap_or(0)
    }
}

/// Lazy n-ary evaluation of the added conformance mapping: walks composite
/// design keys in canonical order without materializing images, and for
/// each key searches the per-feature images for a requirement pick that
/// satisfies the cross-feature constraints. Agrees with the
/// [`add_mappings`] fold (checked by tests); this form just keeps large
/// products affordable.
pub fn enumerate_verdict(
    manifest: &SplManifest,
    features: &[FeatureOutcome],
    limits: &Limits,
) -> Result<SplVerdict> {
    let n = features.len();
    let entries: Vec<&[(Configuration, Vec<Configuration>)]> =
        features.iter().map(|f| f.mapping.entries()).collect();
    let total: u128 = entries.iter().map(|e| e.len().max(1) as u128).product();
    if total > limits.enum_budget as u128 {
        return Err(crate::error::CapacityError::new(
            "enumerating composite design configurations",
            total,
            limits.enum_budget as u128,
        )
        .into());
    }

    let d_eval = PartsEval::new(manifest.features.iter().map(|f| &f.design.vars));
    let r_eval = PartsEval::new(manifest.features.iter().map(|f| &f.requirement.vars));
    // evaluate each requirement constraint as soon as its last feature has
    // picked an image element
    let mut r_by_last: Vec<Vec<&Predicate>> = vec![Vec::new(); n.max(1)];
    for c in &manifest.req_constraints {
        r_by_last[r_eval.last_feature(c)].push(c);
    }

    fn pick<'a>(
        level: usize,
        images: &[&'a [Configuration]],
        picks: &mut Vec<&'a Configuration>,
        r_eval: &PartsEval,
        r_by_last: &[Vec<&Predicate>],
    ) -> bool {
        if level == images.len() {
            return true;
        }
        for candidate in images[level] {
            picks.push(candidate);
            let ok = r_by_last[level].iter().all(|c| r_eval.eval(c, picks)) && {
                // deeper constraints see only assigned prefixes; lookups on
                // unpicked features would fail, so they are deferred by
                // last_feature
                pick(level + 1, images, picks, r_eval, r_by_last)
            };
            picks.pop();
            if ok {
                return true;
            }
        }
        false
    }

    if n == 0 {
        return Ok(SplVerdict { conforms: true, witness: None });
    }
    let mut odometer = vec![0usize; n];
    loop {
        if entries.iter().enumerate().all(|(i, e)| odometer[i] < e.len()) {
            let parts: Vec<&Configuration> =
                (0..n).map(|i| &entries[i][odometer[i]].0).collect();
            if manifest.des_constraints.iter().all(|c| d_eval.eval(c, &parts)) {
                let images: Vec<&[Configuration]> =
                    (0..n).map(|i| entries[i][odometer[i]].1.as_slice()).collect();
                let mut picks = Vec::with_capacity(n);
                if !pick(0, &images, &mut picks, &r_eval, &r_by_last) {
                    let mut witness = Configuration::empty();
                    for part in parts {
                        witness = witness.merge(part)?;
                    }
                    return Ok(SplVerdict { conforms: false, witness: Some(witness) });
                }
            }
        } else {
            // a feature with zero valid design configurations has no keys;
            // then there are no composite keys either
            return Ok(SplVerdict { conforms: true, witness: None });
        }
        // advance, last feature fastest
        let mut done = true;
        for i in (0..n).rev() {
            odometer[i] += 1;
            if odometer[i] < entries[i].len() {
                done = false;
                break;
            }
            odometer[i] = 0;
        }
        if done {
            return Ok(SplVerdict { conforms: true, witness: None });
        }
    }
}

/// Runs several modes and checks that their verdicts agree; disagreement is
/// an internal error (it signals a bug, never a user error).
pub fn cross_check(
    manifest: &SplManifest,
    modes: &[SplMode],
    opts: &CheckOptions,
) -> Result<Vec<SplOutcome>> {
    let outcomes: Vec<SplOutcome> = modes
        .iter()
        .map(|&m| check_spl(manifest, m, opts))
        .collect::<Result<_>>()?;
    if let Some(first) = outcomes.first() {
        for other in &outcomes[1..] {
            if first.conforms() != other.conforms() {
                return Err(Error::Internal(format!(
                    "mode disagreement on `{}`: {} says {}, {} says {}",
                    manifest.name,
                    first.mode.as_str(),
                    first.conforms(),
                    other.mode.as_str(),
                    other.conforms(),
                )));
            }
        }
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fsmv::Transition;
    use crate::varlang::VarDecl;

    fn feature_machines(i: usize, conforming: bool) -> (String, FsmvMachine, FsmvMachine) {
        let rvars = VarScope::new(vec![
            VarDecl::new("m", vec!["on".into(), "off".into()]).unwrap(),
        ])
        .unwrap();
        let dvars = VarScope::new(vec![
            VarDecl::new("c", vec!["on".into(), "off".into()]).unwrap(),
        ])
        .unwrap();
        let ev = |s: &str| format!("f{i}_{s}");
        let req = FsmvMachine {
            name: format!("R{i}"),
            states: vec!["s0".into(), "s1".into()],
            initial: "s0".into(),
            events: vec![ev("a"), ev("b")],
            vars: rvars,
            transitions: vec![
                Transition {
                    src: "s0".into(),
                    guard: Predicate::eq_const("m", "on"),
                    event: ev("a"),
                    dst: "s1".into(),
                },
                Transition { src: "s1".into(), guard: Predicate::True, event: ev("b"), dst: "s0".into() },
            ],
            global: Predicate::True,
        };
        let mut des = FsmvMachine {
            name: format!("D{i}"),
            states: req.states.clone(),
            initial: "s0".into(),
            events: req.events.clone(),
            vars: dvars,
            transitions: vec![
                Transition {
                    src: "s0".into(),
                    guard: Predicate::eq_const("c", "on"),
                    event: ev("a"),
                    dst: "s1".into(),
                },
                Transition { src: "s1".into(), guard: Predicate::True, event: ev("b"), dst: "s0".into() },
            ],
            global: Predicate::True,
        };
        if !conforming {
            des.events.push(ev("rogue"));
            des.transitions.push(Transition {
                src: "s0".into(),
                guard: Predicate::True,
                event: ev("rogue"),
                dst: "s0".into(),
            });
        }
        (format!("F{i}"), req, des)
    }

    #[test]
    fn conforming_two_feature_spl_agrees_across_modes() {
        let manifest = SplManifest::assemble(
            "T".into(),
            vec![feature_machines(0, true), feature_machines(1, true)],
            vec![],
            vec![],
        )
        .unwrap();
        let opts = CheckOptions::default();
        let outcomes =
            cross_check(&manifest, &[SplMode::Qbf, SplMode::Monolithic, SplMode::Enumerate], &opts)
                .unwrap();
        assert!(outcomes.iter().all(|o| o.conforms()));
    }

    #[test]
    fn feature_failure_short_circuits() {
        let manifest = SplManifest::assemble(
            "T".into(),
            vec![feature_machines(0, false)],
            vec![],
            vec![],
        )
        .unwrap();
        let out = check_spl(&manifest, SplMode::Qbf, &CheckOptions::default()).unwrap();
        assert_eq!(out.failing_features, vec!["F0".to_string()]);
        assert!(out.spl.is_none());
        assert!(!out.conforms());

        // keep-going still runs the SPL step; empty images force a witness
        let out = check_spl(
            &manifest,
            SplMode::Qbf,
            &CheckOptions { keep_going: true, ..Default::default() },
        )
        .unwrap();
        let spl = out.spl.unwrap();
        assert!(!spl.verdict.conforms);
        assert!(spl.verdict.witness.is_some());
    }

    #[test]
    fn lazy_enumeration_agrees_with_the_mapping_fold() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let params = crate::generator::RandomSplParams::default();
        let opts = CheckOptions::default();
        for _ in 0..25 {
            let manifest = crate::generator::random_spl(&mut rng, &params);
            let features: Vec<FeatureOutcome> = manifest
                .features
                .iter()
                .map(|f| FeatureOutcome {
                    name: f.name.clone(),
                    mapping: compute_conformance(&f.design, &f.requirement, &opts.limits)
                        .unwrap(),
                    time_ms: 0,
                })
                .collect();
            let folded = enumerate_mapping(&manifest, &features, &opts.limits).unwrap();
            let lazy = enumerate_verdict(&manifest, &features, &opts.limits).unwrap();
            assert_eq!(folded.conforms(), lazy.conforms);
            if !lazy.conforms {
                let first_failing = folded.failing()[0].clone();
                assert_eq!(lazy.witness, Some(first_failing));
            }
        }
    }

    #[test]
    fn zero_feature_manifest_conforms() {
        let manifest = SplManifest::assemble("Empty".into(), vec![], vec![], vec![]).unwrap();
        for mode in [SplMode::Qbf, SplMode::Enumerate, SplMode::Monolithic] {
            let out = check_spl(&manifest, mode, &CheckOptions::default()).unwrap();
            assert!(out.conforms(), "mode {:?}", mode);
        }
    }

    #[test]
    fn incompatible_requirement_constraint_breaks_conformance() {
        // both features conform in isolation, but the requirement-side
        // constraint forbids the only compatible images for one design pick
        let (f0, r0, d0) = feature_machines(0, true);
        let (f1, r1, d1) = feature_machines(1, true);
        let manifest = SplManifest::assemble(
            "T".into(),
            vec![(f0, r0, d0), (f1, r1, d1)],
            vec![crate::syntax::parse_predicate(
                "F0.m = on => F1.m = off",
                &VarScope::new(vec![
                    VarDecl::new("F0.m", vec!["on".into(), "off".into()]).unwrap(),
                    VarDecl::new("F1.m", vec!["on".into(), "off".into()]).unwrap(),
                ])
                .unwrap(),
            )
            .unwrap()],
            vec![],
        )
        .unwrap();
        let opts = CheckOptions::default();
        let outcomes =
            cross_check(&manifest, &[SplMode::Qbf, SplMode::Monolithic, SplMode::Enumerate], &opts)
                .unwrap();
        // design (on, on) needs both requirement machines on, which the
        // constraint forbids
        assert!(outcomes.iter().all(|o| !o.conforms()));
    }
}
