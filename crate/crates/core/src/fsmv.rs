//! Finite state machines with variability: guarded transitions over
//! finite-domain variables plus a global predicate restricting the valid
//! configurations. Projecting a machine at a valid configuration yields a
//! plain (unguarded, prefix-closed) finite state machine.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{ModelError, Result};
use crate::limits::Limits;
use crate::varlang::{self, Configuration, Predicate, VarScope};

/// A guarded transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub src: String,
    pub guard: Predicate,
    pub event: String,
    pub dst: String,
}

/// A finite state machine with variability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsmvMachine {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    pub events: Vec<String>,
    pub vars: VarScope,
    pub transitions: Vec<Transition>,
    pub global: Predicate,
}

/// An unguarded, possibly nondeterministic FSM. Every state accepts, so the
/// language is prefix-closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsm {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    pub events: Vec<String>,
    /// (src, event, dst) triples.
    pub transitions: Vec<(String, String, String)>,
}

impl FsmvMachine {
    /// Structural and semantic validation: endpoints and events declared,
    /// the global predicate and every guard well-scoped and consistent.
    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |message: String| ModelError::InvalidMachine {
            machine: self.name.clone(),
            message,
        };
        let states: HashSet<&str> = self.states.iter().map(|s| s.as_str()).collect();
        if states.len() != self.states.len() {
            return Err(fail("duplicate state name".into()));
        }
        let events: HashSet<&str> = self.events.iter().map(|s| s.as_str()).collect();
        if events.len() != self.events.len() {
            return Err(fail("duplicate event name".into()));
        }
        if !states.contains(self.initial.as_str()) {
            return Err(fail(format!("initial state `{}` is not declared", self.initial)));
        }
        self.global.validate(&self.vars)?;
        if !varlang::is_consistent(&self.global, &self.vars)? {
            return Err(fail("global predicate is inconsistent".into()));
        }
        for t in &self.transitions {
            if !states.contains(t.src.as_str()) {
                return Err(fail(format!("transition source `{}` is not declared", t.src)));
            }
            if !states.contains(t.dst.as_str()) {
                return Err(fail(format!("transition target `{}` is not declared", t.dst)));
            }
            if !events.contains(t.event.as_str()) {
                return Err(fail(format!("transition event `{}` is not declared", t.event)));
            }
            t.guard.validate(&self.vars)?;
            if !varlang::is_consistent(&t.guard, &self.vars)? {
                return Err(fail(format!(
                    "transition `{} -> {} on {}` has an inconsistent guard",
                    t.src, t.dst, t.event
                )));
            }
        }
        Ok(())
    }

    /// All configurations satisfying the global predicate, in canonical
    /// order.
    pub fn valid_configs(&self, limits: &Limits) -> Result<Vec<Configuration>> {
        varlang::satisfying_assignments(&self.global, &self.vars, limits)
    }

    /// True iff `pi` is total over the machine's variables and satisfies
    /// the global predicate.
    pub fn is_valid_config(&self, pi: &Configuration) -> Result<bool, ModelError> {
        pi.check_total(&self.vars)?;
        varlang::eval(&self.global, pi)
    }

    /// The variant at `pi`: keeps exactly the transitions whose guard holds
    /// under `pi`, strips guards, and prunes states unreachable from the
    /// initial state. The event alphabet is kept whole.
    pub fn project(&self, pi: &Configuration) -> Result<Fsm> {
        if !self.is_valid_config(pi)? {
            return Err(ModelError::InvalidConfiguration(self.name.clone()).into());
        }
        self.project_unchecked(pi, true)
    }

    /// Projection without the pruning pass; reference implementation for
    /// the language-preservation property.
    pub(crate) fn project_unchecked(&self, pi: &Configuration, prune: bool) -> Result<Fsm> {
        let mut kept = Vec::new();
        for t in &self.transitions {
            if varlang::eval(&t.guard, pi)? {
                kept.push((t.src.clone(), t.event.clone(), t.dst.clone()));
            }
        }
        let states: Vec<String> = if prune {
            let mut reach = BTreeSet::new();
            reach.insert(self.initial.clone());
            let mut queue = VecDeque::from([self.initial.clone()]);
            while let Some(s) = queue.pop_front() {
                for (src, _, dst) in &kept {
                    if *src == s && reach.insert(dst.clone()) {
                        queue.push_back(dst.clone());
                    }
                }
            }
            kept.retain(|(src, _, _)| reach.contains(src));
            self.states.iter().filter(|s| reach.contains(*s)).cloned().collect()
        } else {
            self.states.clone()
        };
        Ok(Fsm {
            name: self.name.clone(),
            states,
            initial: self.initial.clone(),
            events: self.events.clone(),
            transitions: kept,
        })
    }

    /// Renames variables (declarations, guards, global predicate) to
    /// `<prefix>.<name>`. Events and states are left alone: events are
    /// global names shared across machines.
    pub fn qualify(&self, prefix: &str) -> FsmvMachine {
        FsmvMachine {
            name: self.name.clone(),
            states: self.states.clone(),
            initial: self.initial.clone(),
            events: self.events.clone(),
            vars: self.vars.qualified(prefix),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    src: t.src.clone(),
                    guard: t.guard.qualify(prefix),
                    event: t.event.clone(),
                    dst: t.dst.clone(),
                })
                .collect(),
            global: self.global.qualify(prefix),
        }
    }
}

impl Fsm {
    /// All event sequences of length at most `k` labelling paths from the
    /// initial state. Prefix-closed by construction. Exponential in `k`;
    /// this is oracle machinery, not a decision procedure.
    pub fn bounded_language(&self, k: usize) -> BTreeSet<Vec<String>> {
        let mut words = BTreeSet::new();
        words.insert(Vec::new());
        // frontier of (state, word) pairs, deduplicated per level
        let mut frontier: Vec<(&str, Vec<String>)> = vec![(self.initial.as_str(), Vec::new())];
        for _ in 0..k {
            let mut next: Vec<(&str, Vec<String>)> = Vec::new();
            let mut seen: BTreeSet<(&str, Vec<String>)> = BTreeSet::new();
            for (state, word) in &frontier {
                for (src, event, dst) in &self.transitions {
                    if src == state {
                        let mut w = word.clone();
                        w.push(event.clone());
                        words.insert(w.clone());
                        if seen.insert((dst.as_str(), w.clone())) {
                            next.push((dst.as_str(), w));
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        words
    }

    /// Successor states of `state` on `event`.
    pub fn step<'a>(&'a self, state: &'a str, event: &'a str) -> impl Iterator<Item = &'a str> {
        self.transitions
            .iter()
            .filter(move |(src, ev, _)| src == state && ev == event)
            .map(|(_, _, dst)| dst.as_str())
    }
}
