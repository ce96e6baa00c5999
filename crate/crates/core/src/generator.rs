//! Random SPL generation.
//!
//! Two generators live here. [`generate`] is the CLI-facing one: it emits
//! model files plus a manifest, deterministic byte-for-byte in the seed,
//! with designs that conform by construction (unless bugs are injected).
//! [`random_spl`] builds small in-memory instances with mixed verdicts,
//! optional handshakes and cross-feature constraints; it feeds the
//! equivalence and property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fsmv::{FsmvMachine, Transition};
use crate::limits::Limits;
use crate::spl::SplManifest;
use crate::syntax;
use crate::varlang::{self, Predicate, VarDecl, VarScope};

// ------------------------------------------------- CLI-facing generation

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub features: usize,
    pub seed: u64,
    /// Per-feature probability of injecting a design bug.
    pub inject_bugs: f64,
}

/// Generated model files plus the manifest, as (relative path, content)
/// pairs. Identical configs produce identical bytes.
#[derive(Debug, Clone)]
pub struct GeneratedSpl {
    pub manifest_path: String,
    pub files: Vec<(String, String)>,
}

fn two_valued(name: &str) -> VarDecl {
    VarDecl::new(name, vec!["on".into(), "off".into()]).expect("static domain")
}

/// One requirement machine: a spine of states with extra random edges,
/// guards drawn from {true, v1=on, v2=on}. The configuration (on, on)
/// enables every transition, so each variant's language sits inside that
/// permissive variant's language.
fn gen_requirement(rng: &mut ChaCha8Rng, index: usize) -> FsmvMachine {
    let n_states = rng.random_range(3..=8);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let n_events = rng.random_range(2..=4);
    let events: Vec<String> = (0..n_events).map(|j| format!("f{index}_e{j}")).collect();
    let vars = VarScope::new(vec![two_valued("v1"), two_valued("v2")]).expect("disjoint");

    let pick_guard = |rng: &mut ChaCha8Rng| match rng.random_range(0..4) {
        0 => Predicate::eq_const("v1", "on"),
        1 => Predicate::eq_const("v2", "on"),
        _ => Predicate::True,
    };
    let mut transitions = Vec::new();
    for i in 0..n_states - 1 {
        transitions.push(Transition {
            src: states[i].clone(),
            guard: pick_guard(rng),
            event: events[rng.random_range(0..n_events)].clone(),
            dst: states[i + 1].clone(),
        });
    }
    for _ in 0..n_states / 2 {
        transitions.push(Transition {
            src: states[rng.random_range(0..n_states)].clone(),
            guard: pick_guard(rng),
            event: events[rng.random_range(0..n_events)].clone(),
            dst: states[rng.random_range(0..n_states)].clone(),
        });
    }
    FsmvMachine {
        name: format!("Req_F{index:04}"),
        states,
        initial: "s0".into(),
        events,
        vars,
        transitions,
        global: Predicate::True,
    }
}

/// The design twin: same structure over calibration variables c1/c2.
fn derive_design(req: &FsmvMachine, index: usize, bug: bool) -> FsmvMachine {
    let rename = |p: &Predicate| -> Predicate {
        match p {
            Predicate::Atom(crate::varlang::Atom::EqConst { var, value }) => {
                let var = if var == "v1" { "c1" } else { "c2" };
                Predicate::eq_const(var, value.clone())
            }
            _ => Predicate::True,
        }
    };
    let mut design = FsmvMachine {
        name: format!("Des_F{index:04}"),
        states: req.states.clone(),
        initial: req.initial.clone(),
        events: req.events.clone(),
        vars: VarScope::new(vec![two_valued("c1"), two_valued("c2")]).expect("disjoint"),
        transitions: req
            .transitions
            .iter()
            .map(|t| Transition {
                src: t.src.clone(),
                guard: rename(&t.guard),
                event: t.event.clone(),
                dst: t.dst.clone(),
            })
            .collect(),
        global: Predicate::True,
    };
    if bug {
        // an event the requirement cannot follow, enabled everywhere
        let rogue = format!("f{index}_bug");
        design.events.push(rogue.clone());
        design.transitions.push(Transition {
            src: design.initial.clone(),
            guard: Predicate::True,
            event: rogue,
            dst: design.initial.clone(),
        });
    }
    design
}

/// Generates `cfg.features` feature pairs plus a manifest referencing them.
pub fn generate(cfg: &GenConfig) -> GeneratedSpl {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut files = Vec::new();
    let mut manifest_features = Vec::new();
    for i in 0..cfg.features {
        let req = gen_requirement(&mut rng, i);
        let bug = cfg.inject_bugs > 0.0 && rng.random_bool(cfg.inject_bugs.clamp(0.0, 1.0));
        let des = derive_design(&req, i, bug);
        let req_path = format!("f{i:04}_req.fsmv");
        let des_path = format!("f{i:04}_des.fsmv");
        files.push((req_path.clone(), syntax::print_model(&req)));
        files.push((des_path.clone(), syntax::print_model(&des)));
        manifest_features.push((format!("F{i:04}"), req_path, des_path));
    }
    let manifest_name = format!("Gen{}x{}", cfg.seed, cfg.features);
    let manifest = syntax::print_manifest(&manifest_name, &manifest_features, &[], &[]);
    let manifest_path = "spl.manifest".to_string();
    files.push((manifest_path.clone(), manifest));
    GeneratedSpl { manifest_path, files }
}

/// Writes the generated files under `dir`.
pub fn write_to(dir: &std::path::Path, generated: &GeneratedSpl) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| crate::error::Error::Io(dir.display().to_string(), e))?;
    for (name, content) in &generated.files {
        let path = dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| crate::error::Error::Io(path.display().to_string(), e))?;
    }
    Ok(())
}

// ------------------------------------------- random in-memory instances

/// Shape of the random instances used by the equivalence suites.
#[derive(Debug, Clone, Copy)]
pub struct RandomSplParams {
    pub min_features: usize,
    pub max_features: usize,
    pub max_states: usize,
    pub max_vars: usize,
    pub max_values: usize,
    /// Probability of perturbing the derived design (may break
    /// conformance).
    pub mutate_prob: f64,
    /// Probability of adding a cross-feature constraint per side.
    pub constraint_prob: f64,
    /// Share events between adjacent features. The equivalence suite keeps
    /// this off: with handshakes the compositional verdict is
    /// intentionally conservative about behavior a partner blocks.
    pub handshakes: bool,
    /// Cap on |design configs| x |requirement configs| of the whole
    /// instance, so the monolithic oracle stays cheap. Oversized draws are
    /// resampled.
    pub oracle_pair_cap: u128,
}

impl Default for RandomSplParams {
    fn default() -> Self {
        RandomSplParams {
            min_features: 2,
            max_features: 4,
            max_states: 5,
            max_vars: 2,
            max_values: 3,
            mutate_prob: 0.4,
            constraint_prob: 0.5,
            handshakes: false,
            oracle_pair_cap: 20_000,
        }
    }
}

fn random_scope(rng: &mut ChaCha8Rng, prefix: &str, params: &RandomSplParams) -> VarScope {
    let nvars = rng.random_range(1..=params.max_vars);
    VarScope::new(
        (0..nvars)
            .map(|i| {
                let nvals = rng.random_range(2..=params.max_values);
                VarDecl::new(format!("{prefix}{i}"), (0..nvals).map(|v| format!("w{v}")).collect())
                    .expect("fresh names")
            })
            .collect(),
    )
    .expect("fresh names")
}

fn random_atom(rng: &mut ChaCha8Rng, scope: &VarScope) -> Predicate {
    let decls = scope.decls();
    let d = &decls[rng.random_range(0..decls.len())];
    let v = &d.domain[rng.random_range(0..d.domain.len())];
    if rng.random_bool(0.5) {
        Predicate::eq_const(&d.name, v)
    } else {
        Predicate::neq_const(&d.name, v)
    }
}

fn random_machine(
    rng: &mut ChaCha8Rng,
    name: String,
    events: &[String],
    scope: VarScope,
    params: &RandomSplParams,
) -> FsmvMachine {
    let n_states = rng.random_range(2..=params.max_states);
    let states: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let n_trans = rng.random_range(1..=2 * n_states);
    let transitions = (0..n_trans)
        .map(|_| Transition {
            src: states[rng.random_range(0..n_states)].clone(),
            guard: if rng.random_bool(0.5) { Predicate::True } else { random_atom(rng, &scope) },
            event: events[rng.random_range(0..events.len())].clone(),
            dst: states[rng.random_range(0..n_states)].clone(),
        })
        .collect();
    // a random implication as the global predicate, kept only if consistent
    let global = if rng.random_bool(0.3) && !scope.is_empty() {
        let cand = Predicate::implies(random_atom(rng, &scope), random_atom(rng, &scope));
        if varlang::is_consistent(&cand, &scope).unwrap_or(false) {
            cand
        } else {
            Predicate::True
        }
    } else {
        Predicate::True
    };
    FsmvMachine {
        name,
        states,
        initial: "s0".into(),
        events: events.to_vec(),
        vars: scope,
        transitions,
        global,
    }
}

/// Derives a design from a requirement: same structure over renamed
/// variables, optionally mutated (which may or may not preserve
/// conformance; the verdict is whatever the checkers decide).
fn derive_random_design(
    rng: &mut ChaCha8Rng,
    req: &FsmvMachine,
    name: String,
    params: &RandomSplParams,
) -> FsmvMachine {
    // design scope mirrors the requirement scope with d-prefixed names
    let decls: Vec<VarDecl> = req
        .vars
        .decls()
        .iter()
        .map(|d| VarDecl::new(format!("d{}", d.name), d.domain.clone()).expect("fresh"))
        .collect();
    let scope = VarScope::new(decls).expect("fresh");
    fn rename(p: &Predicate) -> Predicate {
        use crate::varlang::Atom;
        match p {
            Predicate::True => Predicate::True,
            Predicate::False => Predicate::False,
            Predicate::Atom(Atom::EqConst { var, value }) => {
                Predicate::eq_const(format!("d{var}"), value.clone())
            }
            Predicate::Atom(Atom::NeqConst { var, value }) => {
                Predicate::neq_const(format!("d{var}"), value.clone())
            }
            Predicate::Atom(Atom::EqVar { left, right }) => {
                Predicate::eq_var(format!("d{left}"), format!("d{right}"))
            }
            Predicate::Atom(Atom::NeqVar { left, right }) => {
                Predicate::neq_var(format!("d{left}"), format!("d{right}"))
            }
            Predicate::Not(a) => Predicate::not(rename(a)),
            Predicate::And(a, b) => Predicate::and(rename(a), rename(b)),
            Predicate::Or(a, b) => Predicate::or(rename(a), rename(b)),
            Predicate::Implies(a, b) => Predicate::implies(rename(a), rename(b)),
        }
    }
    let mut design = FsmvMachine {
        name,
        states: req.states.clone(),
        initial: req.initial.clone(),
        events: req.events.clone(),
        vars: scope,
        transitions: req
            .transitions
            .iter()
            .map(|t| Transition {
                src: t.src.clone(),
                guard: rename(&t.guard),
                event: t.event.clone(),
                dst: t.dst.clone(),
            })
            .collect(),
        global: rename(&req.global),
    };
    if rng.random_bool(params.mutate_prob) {
        match rng.random_range(0..3) {
            0 if !design.transitions.is_empty() => {
                let i = rng.random_range(0..design.transitions.len());
                design.transitions.remove(i);
            }
            1 => {
                let s = rng.random_range(0..design.states.len());
                let t = rng.random_range(0..design.states.len());
                design.transitions.push(Transition {
                    src: design.states[s].clone(),
                    guard: Predicate::True,
                    event: design.events[rng.random_range(0..design.events.len())].clone(),
                    dst: design.states[t].clone(),
                });
            }
            _ if !design.transitions.is_empty() => {
                let i = rng.random_range(0..design.transitions.len());
                design.transitions[i].guard = Predicate::True;
            }
            _ => {}
        }
    }
    design
}

/// A random SPL instance assembled into a manifest, sized so that all
/// three checking modes are feasible.
pub fn random_spl(rng: &mut ChaCha8Rng, params: &RandomSplParams) -> SplManifest {
    'resample: loop {
        let n = rng.random_range(params.min_features..=params.max_features);
        let mut features = Vec::new();
        for i in 0..n {
            let mut events: Vec<String> = (0..rng.random_range(1..=3))
                .map(|j| format!("f{i}e{j}"))
                .collect();
            if params.handshakes && i > 0 && rng.random_bool(0.5) {
                events.push(format!("h{}", i - 1)); // shared with the previous feature
            }
            if params.handshakes && rng.random_bool(0.5) {
                events.push(format!("h{i}"));
            }
            let rscope = random_scope(rng, "q", params);
            let req = random_machine(rng, format!("R{i}"), &events, rscope, params);
            let des = derive_random_design(rng, &req, format!("D{i}"), params);
            features.push((format!("F{i}"), req, des));
        }

        // cross-feature constraints over qualified names
        let manifest = match SplManifest::assemble("Random".into(), features, vec![], vec![]) {
            Ok(m) => m,
            Err(_) => continue 'resample,
        };
        let rscope = manifest.requirement_scope().expect("disjoint by qualification");
        let dscope = manifest.design_scope().expect("disjoint by qualification");
        let mut req_constraints = Vec::new();
        let mut des_constraints = Vec::new();
        if rng.random_bool(params.constraint_prob) {
            req_constraints.push(Predicate::implies(
                random_atom(rng, &rscope),
                random_atom(rng, &rscope),
            ));
        }
        if rng.random_bool(params.constraint_prob) {
            des_constraints.push(Predicate::implies(
                random_atom(rng, &dscope),
                random_atom(rng, &dscope),
            ));
        }

        // combined predicates must stay consistent on both sides (the
        // composition requires it)
        let rho_r = Predicate::conjoin(
            manifest.features.iter().map(|f| f.requirement.global.clone()).chain(req_constraints.clone()),
        );
        let rho_d = Predicate::conjoin(
            manifest.features.iter().map(|f| f.design.global.clone()).chain(des_constraints.clone()),
        );
        if !varlang::is_consistent(&rho_r, &rscope).unwrap_or(false)
            || !varlang::is_consistent(&rho_d, &dscope).unwrap_or(false)
        {
            continue 'resample;
        }

        // keep the monolithic oracle affordable
        let limits = Limits::default();
        let mut d_count: u128 = 1;
        let mut r_count: u128 = 1;
        for f in &manifest.features {
            let dc = match f.design.valid_configs(&limits) {
                Ok(c) => c.len() as u128,
                Err(_) => continue 'resample,
            };
            let rc = match f.requirement.valid_configs(&limits) {
                Ok(c) => c.len() as u128,
                Err(_) => continue 'resample,
            };
            if dc == 0 || rc == 0 {
                continue 'resample;
            }
            d_count *= dc;
            r_count *= rc;
        }
        if d_count * r_count > params.oracle_pair_cap {
            continue 'resample;
        }

        let mut manifest = manifest;
        manifest.req_constraints = req_constraints;
        manifest.des_constraints = des_constraints;
        return manifest;
    }
}
