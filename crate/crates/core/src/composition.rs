//! Parallel composition of machines, the configuration algebra, addition
//! of conformance mappings, and the shuffle / handshake-product oracles.
//!
//! Two machines synchronize on the events their alphabets share and
//! interleave on private events. A composition predicate over the disjoint
//! union of their variables restricts the valid composite configurations.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::containment::ConformanceMapping;
use crate::error::{CapacityError, ModelError, Result};
use crate::fsmv::{Fsm, FsmvMachine, Transition};
use crate::varlang::{self, Configuration, Predicate, VarScope};

/// Joins two component state names into a composite state name.
fn pair_state(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

/// Parallel composition with handshake set `Σ1 ∩ Σ2` and composition
/// predicate `rho12`. Variable scopes must be disjoint (qualify by feature
/// name first). The composed state space is restricted to the reachable
/// part, and a composed transition is kept only when its guard conjoined
/// with the combined global predicate is consistent.
pub fn compose(a1: &FsmvMachine, a2: &FsmvMachine, rho12: &Predicate) -> Result<FsmvMachine> {
    let vars = a1.vars.union(&a2.vars)?;
    rho12.validate(&vars)?;
    let rho = Predicate::conjoin([rho12.clone(), a1.global.clone(), a2.global.clone()]);
    if !varlang::is_consistent(&rho, &vars)? {
        return Err(ModelError::InconsistentPredicate(format!(
            "composition of `{}` and `{}`",
            a1.name, a2.name
        ))
        .into());
    }

    let handshake: BTreeSet<&str> = a1
        .events
        .iter()
        .map(|e| e.as_str())
        .filter(|e| a2.events.iter().any(|f| f == e))
        .collect();

    // candidate transitions out of a composite state
    let by_src_1: HashMap<&str, Vec<&Transition>> = group_by_src(&a1.transitions);
    let by_src_2: HashMap<&str, Vec<&Transition>> = group_by_src(&a2.transitions);
    let empty: Vec<&Transition> = Vec::new();

    let mut keep_cache: HashMap<Predicate, bool> = HashMap::new();
    let mut keep = |guard: &Predicate, vars: &VarScope| -> Result<bool> {
        if let Some(&k) = keep_cache.get(guard) {
            return Ok(k);
        }
        let conj = Predicate::and(guard.clone(), rho.clone());
        let k = varlang::is_consistent(&conj, vars)?;
        keep_cache.insert(guard.clone(), k);
        Ok(k)
    };

    let initial = pair_state(&a1.initial, &a2.initial);
    let mut states = vec![initial.clone()];
    let mut seen: BTreeSet<(String, String)> =
        BTreeSet::from([(a1.initial.clone(), a2.initial.clone())]);
    let mut queue = VecDeque::from([(a1.initial.clone(), a2.initial.clone())]);
    let mut transitions = Vec::new();
    while let Some((s1, s2)) = queue.pop_front() {
        let t1s = by_src_1.get(s1.as_str()).unwrap_or(&empty);
        let t2s = by_src_2.get(s2.as_str()).unwrap_or(&empty);
        let mut successors: Vec<(Predicate, String, (String, String))> = Vec::new();
        for t1 in t1s {
            if handshake.contains(t1.event.as_str()) {
                // rule (1): synchronize on shared events
                for t2 in t2s.iter().filter(|t2| t2.event == t1.event) {
                    let guard = Predicate::and(t1.guard.clone(), t2.guard.clone());
                    successors.push((guard, t1.event.clone(), (t1.dst.clone(), t2.dst.clone())));
                }
            } else {
                // rule (2): private move of the first machine
                successors.push((t1.guard.clone(), t1.event.clone(), (t1.dst.clone(), s2.clone())));
            }
        }
        for t2 in t2s {
            if !handshake.contains(t2.event.as_str()) {
                // rule (3): private move of the second machine
                successors.push((t2.guard.clone(), t2.event.clone(), (s1.clone(), t2.dst.clone())));
            }
        }
        for (guard, event, (d1, d2)) in successors {
            if !keep(&guard, &vars)? {
                continue;
            }
            transitions.push(Transition {
                src: pair_state(&s1, &s2),
                guard,
                event,
                dst: pair_state(&d1, &d2),
            });
            if seen.insert((d1.clone(), d2.clone())) {
                states.push(pair_state(&d1, &d2));
                queue.push_back((d1, d2));
            }
        }
    }

    let machine = FsmvMachine {
        name: format!("{}||{}", a1.name, a2.name),
        states,
        initial,
        events: crate::containment::union_alphabet(&a1.events, &a2.events),
        vars,
        transitions,
        global: rho,
    };
    Ok(machine)
}

fn group_by_src(transitions: &[Transition]) -> HashMap<&str, Vec<&Transition>> {
    let mut map: HashMap<&str, Vec<&Transition>> = HashMap::new();
    for t in transitions {
        map.entry(t.src.as_str()).or_default().push(t);
    }
    map
}

/// The union assignment when it satisfies `rho` (the combined global
/// predicate of the composition); absence is a value, not an error.
pub fn compose_configs(
    pi1: &Configuration,
    pi2: &Configuration,
    rho: &Predicate,
) -> Result<Option<Configuration>, ModelError> {
    let union = pi1.merge(pi2)?;
    Ok(if varlang::eval(rho, &union)? { Some(union) } else { None })
}

/// Restrictions of a composite configuration to the component scopes.
pub fn decompose_config(
    pi: &Configuration,
    scope1: &VarScope,
    scope2: &VarScope,
) -> (Configuration, Configuration) {
    (pi.restrict(scope1), pi.restrict(scope2))
}

/// Addition of two conformance mappings. `rho_d` and `rho_r` must be the
/// full composite-side predicates (composition predicate conjoined with
/// both global predicates); the keys of the result are exactly the valid
/// composite design configurations, in key-pair enumeration order. A
/// component configuration with an empty image propagates emptiness.
pub fn add_mappings(
    phi1: &ConformanceMapping,
    phi2: &ConformanceMapping,
    rho_d: &Predicate,
    rho_r: &Predicate,
    pair_budget: u64,
) -> Result<ConformanceMapping> {
    let design_scope = phi1.design_scope.union(&phi2.design_scope)?;
    let requirement_scope = phi1.requirement_scope.union(&phi2.requirement_scope)?;
    let key_pairs = phi1.entries().len() as u128 * phi2.entries().len() as u128;
    if key_pairs > pair_budget as u128 {
        return Err(CapacityError::new(
            "enumerating composite design configurations",
            key_pairs,
            pair_budget as u128,
        )
        .into());
    }

    let mut requirement_variants = 0usize;
    let mut req_seen: BTreeSet<Configuration> = BTreeSet::new();
    let mut entries = Vec::new();
    for (d1, img1) in phi1.entries() {
        for (d2, img2) in phi2.entries() {
            let Some(key) = compose_configs(d1, d2, rho_d)? else { continue };
            let mut image = Vec::new();
            for r1 in img1 {
                for r2 in img2 {
                    if let Some(r) = compose_configs(r1, r2, rho_r)? {
                        image.push(r);
                    }
                }
            }
            for r in &image {
                if req_seen.insert(r.clone()) {
                    requirement_variants += 1;
                }
            }
            entries.push((key, image));
        }
    }
    Ok(ConformanceMapping::new(
        format!("{}+{}", phi1.feature, phi2.feature),
        design_scope,
        requirement_scope,
        requirement_variants,
        entries,
    ))
}

/// Asynchronous shuffle of words: all interleavings whose projection onto
/// each alphabet reproduces the corresponding word. Shared letters
/// synchronize.
pub fn shuffle_words(words: &[Vec<String>], alphabets: &[BTreeSet<String>]) -> BTreeSet<Vec<String>> {
    assert_eq!(words.len(), alphabets.len());
    for (w, sigma) in words.iter().zip(alphabets) {
        assert!(w.iter().all(|e| sigma.contains(e)), "word must be over its alphabet");
    }
    let union: BTreeSet<&String> = alphabets.iter().flatten().collect();
    let mut out = BTreeSet::new();
    let mut positions = vec![0usize; words.len()];
    let mut word: Vec<String> = Vec::new();
    fn walk(
        union: &BTreeSet<&String>,
        words: &[Vec<String>],
        alphabets: &[BTreeSet<String>],
        positions: &mut Vec<usize>,
        word: &mut Vec<String>,
        out: &mut BTreeSet<Vec<String>>,
    ) {
        if positions.iter().zip(words).all(|(&p, w)| p == w.len()) {
            out.insert(word.clone());
        }
        for &event in union {
            // an event can fire iff every component whose alphabet has it
            // is currently expecting it
            let mut movers = Vec::new();
            let mut ok = true;
            for (i, sigma) in alphabets.iter().enumerate() {
                if sigma.contains(event) {
                    if positions[i] < words[i].len() && words[i][positions[i]] == *event {
                        movers.push(i);
                    } else {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || movers.is_empty() {
                continue;
            }
            for &i in &movers {
                positions[i] += 1;
            }
            word.push(event.clone());
            walk(union, words, alphabets, positions, word, out);
            word.pop();
            for &i in &movers {
                positions[i] -= 1;
            }
        }
    }
    walk(&union, words, alphabets, &mut positions, &mut word, &mut out);
    out
}

/// Shuffle lifted to languages: union of the shuffles of all word tuples.
pub fn shuffle_languages(
    l1: &BTreeSet<Vec<String>>,
    sigma1: &BTreeSet<String>,
    l2: &BTreeSet<Vec<String>>,
    sigma2: &BTreeSet<String>,
) -> BTreeSet<Vec<String>> {
    let mut out = BTreeSet::new();
    for w1 in l1 {
        for w2 in l2 {
            let words = [w1.clone(), w2.clone()];
            let alphabets = [sigma1.clone(), sigma2.clone()];
            out.extend(shuffle_words(&words, &alphabets));
        }
    }
    out
}

/// Product of plain FSMs: shared events move both machines in parallel,
/// private events interleave. Oracle counterpart of [`compose`] for
/// projected variants.
pub fn handshake_product(a: &Fsm, b: &Fsm) -> Fsm {
    let shared: BTreeSet<&str> = a
        .events
        .iter()
        .map(|e| e.as_str())
        .filter(|e| b.events.iter().any(|f| f == e))
        .collect();
    let mut by_src_a: HashMap<&str, Vec<(&str, &str)>> = HashMap::new();
    for (s, e, t) in &a.transitions {
        by_src_a.entry(s.as_str()).or_default().push((e.as_str(), t.as_str()));
    }
    let mut by_src_b: HashMap<&str, Vec<(&str, &str)>> = HashMap::new();
    for (s, e, t) in &b.transitions {
        by_src_b.entry(s.as_str()).or_default().push((e.as_str(), t.as_str()));
    }
    let empty: Vec<(&str, &str)> = Vec::new();

    let initial = pair_state(&a.initial, &b.initial);
    let mut states = vec![initial.clone()];
    let mut seen = BTreeSet::from([(a.initial.clone(), b.initial.clone())]);
    let mut queue = VecDeque::from([(a.initial.clone(), b.initial.clone())]);
    let mut transitions = Vec::new();
    while let Some((s1, s2)) = queue.pop_front() {
        let ta = by_src_a.get(s1.as_str()).unwrap_or(&empty);
        let tb = by_src_b.get(s2.as_str()).unwrap_or(&empty);
        let mut successors: Vec<(String, (String, String))> = Vec::new();
        for (e, t) in ta {
            if shared.contains(e) {
                for (_, t2) in tb.iter().filter(|(e2, _)| e2 == e) {
                    successors.push((e.to_string(), (t.to_string(), t2.to_string())));
                }
            } else {
                successors.push((e.to_string(), (t.to_string(), s2.clone())));
            }
        }
        for (e, t) in tb {
            if !shared.contains(e) {
                successors.push((e.to_string(), (s1.clone(), t.to_string())));
            }
        }
        for (event, (d1, d2)) in successors {
            transitions.push((pair_state(&s1, &s2), event, pair_state(&d1, &d2)));
            if seen.insert((d1.clone(), d2.clone())) {
                states.push(pair_state(&d1, &d2));
                queue.push_back((d1, d2));
            }
        }
    }
    Fsm {
        name: format!("{}||{}", a.name, b.name),
        states,
        initial,
        events: crate::containment::union_alphabet(&a.events, &b.events),
        transitions,
    }
}
