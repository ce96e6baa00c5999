//! Shared fixtures for the integration and acceptance suites.
#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use splv::fsmv::{Fsm, FsmvMachine, Transition};
use splv::varlang::{Predicate, VarDecl, VarScope};

/// Repository-level model corpus directory.
pub fn models_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

/// Path to the built `splv` binary.
pub fn splv_bin() -> &'static str {
    env!("CARGO_BIN_EXE_splv")
}

/// A random unguarded FSM with up to `max_states` states.
pub fn random_fsm(rng: &mut ChaCha8Rng, name: &str, max_states: usize, events: &[&str]) -> Fsm {
    let n = rng.random_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let n_trans = rng.random_range(0..=2 * n);
    let transitions = (0..n_trans)
        .map(|_| {
            (
                states[rng.random_range(0..n)].clone(),
                events[rng.random_range(0..events.len())].to_string(),
                states[rng.random_range(0..n)].clone(),
            )
        })
        .collect();
    Fsm {
        name: name.to_string(),
        states,
        initial: "s0".into(),
        events: events.iter().map(|e| e.to_string()).collect(),
        transitions,
    }
}

/// A random guarded machine over two two-valued variables named
/// `<var_prefix>0` and `<var_prefix>1`.
pub fn random_fsmv(
    rng: &mut ChaCha8Rng,
    name: &str,
    max_states: usize,
    events: &[String],
    var_prefix: &str,
) -> FsmvMachine {
    let scope = VarScope::new(vec![
        VarDecl::new(format!("{var_prefix}0"), vec!["a".into(), "b".into()]).unwrap(),
        VarDecl::new(format!("{var_prefix}1"), vec!["a".into(), "b".into()]).unwrap(),
    ])
    .unwrap();
    let n = rng.random_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let n_trans = rng.random_range(1..=2 * n);
    let transitions = (0..n_trans)
        .map(|_| {
            let guard = match rng.random_range(0..4) {
                0 => Predicate::eq_const(format!("{var_prefix}0"), "a"),
                1 => Predicate::eq_const(format!("{var_prefix}1"), "b"),
                2 => Predicate::neq_const(format!("{var_prefix}0"), "b"),
                _ => Predicate::True,
            };
            Transition {
                src: states[rng.random_range(0..n)].clone(),
                guard,
                event: events[rng.random_range(0..events.len())].clone(),
                dst: states[rng.random_range(0..n)].clone(),
            }
        })
        .collect();
    let global = if rng.random_bool(0.3) {
        Predicate::implies(
            Predicate::eq_const(format!("{var_prefix}0"), "a"),
            Predicate::eq_const(format!("{var_prefix}1"), "a"),
        )
    } else {
        Predicate::True
    };
    FsmvMachine {
        name: name.to_string(),
        states,
        initial: "s0".into(),
        events: events.to_vec(),
        vars: scope,
        transitions,
        global,
    }
}
