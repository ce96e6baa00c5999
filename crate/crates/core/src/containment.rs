//! Prefix-closed language containment between projected variants, and the
//! per-feature conformance mapping built from it.
//!
//! The requirement side is determinized by subset construction and
//! completed with an absorbing sink; a word is outside the requirement
//! language exactly when it drives the subset automaton into the sink.
//! Containment is then a breadth-first search over the product with the
//! (possibly nondeterministic) design side, which also yields shortest
//! counterexamples.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{CapacityError, Result};
use crate::fsmv::{Fsm, FsmvMachine};
use crate::limits::Limits;
use crate::varlang::{Configuration, VarScope};

/// Outcome of one containment check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentVerdict {
    pub holds: bool,
    /// Shortest word in the design language but not the requirement
    /// language; present exactly when the check fails.
    pub counterexample: Option<Vec<String>>,
}

/// Deterministic, complete automaton with a designated absorbing sink.
#[derive(Debug, Clone)]
pub struct Dfa {
    pub alphabet: Vec<String>,
    /// `next[state][event_index]`, total over the alphabet.
    pub next: Vec<Vec<usize>>,
    pub initial: usize,
    pub sink: usize,
}

impl Dfa {
    /// The sink-free part as a plain FSM (language-equal to the input of
    /// the subset construction).
    pub fn to_fsm(&self, name: &str) -> Fsm {
        let state_name = |i: usize| format!("d{i}");
        let mut transitions = Vec::new();
        for (s, row) in self.next.iter().enumerate() {
            if s == self.sink {
                continue;
            }
            for (e, &t) in row.iter().enumerate() {
                if t != self.sink {
                    transitions.push((state_name(s), self.alphabet[e].clone(), state_name(t)));
                }
            }
        }
        Fsm {
            name: name.to_string(),
            states: (0..self.next.len()).filter(|&s| s != self.sink).map(state_name).collect(),
            initial: state_name(self.initial),
            events: self.alphabet.clone(),
            transitions,
        }
    }
}

/// Union of two event alphabets, first operand's order first.
pub fn union_alphabet(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for e in b {
        if !out.contains(e) {
            out.push(e.clone());
        }
    }
    out
}

/// Subset construction plus completion over `alphabet` (which must cover
/// the machine's events). The empty subset is the sink.
pub fn complete_and_determinize(r: &Fsm, alphabet: &[String]) -> Dfa {
    debug_assert!(r.events.iter().all(|e| alphabet.contains(e)));
    let state_idx: HashMap<&str, usize> =
        r.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    // transition lookup: (state, event) -> successor states
    let mut moves: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let event_idx: HashMap<&str, usize> =
        alphabet.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
    for (src, event, dst) in &r.transitions {
        let s = state_idx[src.as_str()];
        let e = event_idx[event.as_str()];
        let t = state_idx[dst.as_str()];
        moves.entry((s, e)).or_default().push(t);
    }

    struct Build {
        subset_ids: HashMap<Vec<usize>, usize>,
        subsets: Vec<Vec<usize>>,
        next: Vec<Vec<usize>>,
        queue: VecDeque<usize>,
    }
    impl Build {
        fn intern(&mut self, subset: Vec<usize>) -> usize {
            if let Some(&id) = self.subset_ids.get(&subset) {
                return id;
            }
            let id = self.subsets.len();
            self.subset_ids.insert(subset.clone(), id);
            self.subsets.push(subset);
            self.next.push(Vec::new());
            self.queue.push_back(id);
            id
        }
    }
    let mut b = Build {
        subset_ids: HashMap::new(),
        subsets: Vec::new(),
        next: Vec::new(),
        queue: VecDeque::new(),
    };
    let sink = b.intern(Vec::new());
    let initial = b.intern(vec![state_idx[r.initial.as_str()]]);
    while let Some(id) = b.queue.pop_front() {
        let mut row = Vec::with_capacity(alphabet.len());
        for e in 0..alphabet.len() {
            let mut successors = BTreeSet::new();
            for &s in &b.subsets[id] {
                if let Some(ts) = moves.get(&(s, e)) {
                    successors.extend(ts.iter().copied());
                }
            }
            let subset: Vec<usize> = successors.into_iter().collect();
            let target = b.intern(subset);
            row.push(target);
        }
        b.next[id] = row;
    }
    Dfa { alphabet: alphabet.to_vec(), next: b.next, initial, sink }
}

/// Search state for the design/requirement product walk.
struct ProductSearch<'a> {
    design: &'a Fsm,
    dfa: &'a Dfa,
    d_states: HashMap<&'a str, usize>,
    /// design moves indexed by (state, event-index in dfa alphabet)
    d_moves: HashMap<(usize, usize), Vec<usize>>,
}

impl<'a> ProductSearch<'a> {
    fn new(design: &'a Fsm, dfa: &'a Dfa) -> Self {
        let d_states: HashMap<&str, usize> =
            design.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let event_idx: HashMap<&str, usize> =
            dfa.alphabet.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let mut d_moves: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (src, event, dst) in &design.transitions {
            let s = d_states[src.as_str()];
            let e = event_idx[event.as_str()];
            let t = d_states[dst.as_str()];
            d_moves.entry((s, e)).or_default().push(t);
        }
        ProductSearch { design, dfa, d_states, d_moves }
    }

    /// Shortest word accepted by the design but rejected by the
    /// requirement, if any.
    fn counterexample(&self) -> Option<Vec<String>> {
        let start = (self.d_states[self.design.initial.as_str()], self.dfa.initial);
        let mut parent: HashMap<(usize, usize), ((usize, usize), usize)> = HashMap::new();
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some((ds, rs)) = queue.pop_front() {
            for e in 0..self.dfa.alphabet.len() {
                let Some(succs) = self.d_moves.get(&(ds, e)) else { continue };
                let rt = self.dfa.next[rs][e];
                for &dt in succs {
                    let node = (dt, rt);
                    if rt == self.dfa.sink {
                        // reconstruct the word ending with this event
                        let mut word = vec![self.dfa.alphabet[e].clone()];
                        let mut cur = (ds, rs);
                        while cur != start {
                            let (prev, pe) = parent[&cur];
                            word.push(self.dfa.alphabet[pe].clone());
                            cur = prev;
                        }
                        word.reverse();
                        return Some(word);
                    }
                    if seen.insert(node) {
                        parent.insert(node, ((ds, rs), e));
                        queue.push_back(node);
                    }
                }
            }
        }
        None
    }
}

/// Language containment `L(d) ⊆ L(r)` over the union alphabet.
pub fn contains(d: &Fsm, r: &Fsm) -> ContainmentVerdict {
    let alphabet = union_alphabet(&d.events, &r.events);
    let dfa = complete_and_determinize(r, &alphabet);
    let search = ProductSearch::new(d, &dfa);
    match search.counterexample() {
        Some(word) => ContainmentVerdict { holds: false, counterexample: Some(word) },
        None => ContainmentVerdict { holds: true, counterexample: None },
    }
}

/// The conformance mapping of one feature: every valid design
/// configuration mapped to the set of requirement configurations whose
/// variant contains the design variant's language. The mapping is maximal;
/// entries follow the canonical enumeration order on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceMapping {
    pub feature: String,
    pub design_scope: VarScope,
    pub requirement_scope: VarScope,
    pub requirement_variants: usize,
    entries: Vec<(Configuration, Vec<Configuration>)>,
    index: HashMap<Configuration, usize>,
}

impl ConformanceMapping {
    pub fn new(
        feature: String,
        design_scope: VarScope,
        requirement_scope: VarScope,
        requirement_variants: usize,
        entries: Vec<(Configuration, Vec<Configuration>)>,
    ) -> Self {
        let index = entries.iter().enumerate().map(|(i, (k, _))| (k.clone(), i)).collect();
        ConformanceMapping {
            feature,
            design_scope,
            requirement_scope,
            requirement_variants,
            entries,
            index,
        }
    }

    pub fn entries(&self) -> &[(Configuration, Vec<Configuration>)] {
        &self.entries
    }

    pub fn image(&self, design: &Configuration) -> Option<&[Configuration]> {
        self.index.get(design).map(|&i| self.entries[i].1.as_slice())
    }

    /// Design configurations with empty image, in enumeration order.
    pub fn failing(&self) -> Vec<&Configuration> {
        self.entries.iter().filter(|(_, img)| img.is_empty()).map(|(k, _)| k).collect()
    }

    pub fn conforms(&self) -> bool {
        self.entries.iter().all(|(_, img)| !img.is_empty())
    }

    pub fn design_variants(&self) -> usize {
        self.entries.len()
    }

    /// Total number of passing (design, requirement) pairs.
    pub fn pair_count(&self) -> usize {
        self.entries.iter().map(|(_, img)| img.len()).sum()
    }

    /// One line per design configuration: `<...> -> { <...>, ... }`.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# conformance mapping for feature {}\n", self.feature));
        out.push_str(&format!(
            "# design variables: {}\n",
            self.design_scope
                .decls()
                .iter()
                .map(|d| d.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!(
            "# requirement variables: {}\n",
            self.requirement_scope
                .decls()
                .iter()
                .map(|d| d.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        for (key, image) in &self.entries {
            let rendered: Vec<String> =
                image.iter().map(|c| format!("<{}>", c.render(&self.requirement_scope))).collect();
            out.push_str(&format!(
                "<{}> -> {{ {} }}\n",
                key.render(&self.design_scope),
                rendered.join(", ")
            ));
        }
        out
    }
}

/// Runs the containment check for every pair of valid configurations and
/// assembles the maximal conformance mapping. Pair checks run on the rayon
/// pool; assembly order is the canonical enumeration order regardless.
pub fn compute_conformance(
    des: &FsmvMachine,
    req: &FsmvMachine,
    limits: &Limits,
) -> Result<ConformanceMapping> {
    let design_configs = des.valid_configs(limits)?;
    let requirement_configs = req.valid_configs(limits)?;
    let pairs = design_configs.len() as u128 * requirement_configs.len() as u128;
    if pairs > limits.pair_budget as u128 {
        return Err(CapacityError::new(
            format!("checking configuration pairs of `{}` against `{}`", des.name, req.name),
            pairs,
            limits.pair_budget as u128,
        )
        .into());
    }

    let alphabet = union_alphabet(&des.events, &req.events);
    let req_variants: Vec<(Configuration, Dfa)> = requirement_configs
        .par_iter()
        .map(|pi| {
            let fsm = req.project(pi)?;
            Ok((pi.clone(), complete_and_determinize(&fsm, &alphabet)))
        })
        .collect::<Result<_>>()?;

    let entries: Vec<(Configuration, Vec<Configuration>)> = design_configs
        .par_iter()
        .map(|pi_d| {
            let variant = des.project(pi_d)?;
            let image: Vec<Configuration> = req_variants
                .iter()
                .filter(|(_, dfa)| ProductSearch::new(&variant, dfa).counterexample().is_none())
                .map(|(pi_r, _)| pi_r.clone())
                .collect();
            Ok((pi_d.clone(), image))
        })
        .collect::<Result<_>>()?;

    Ok(ConformanceMapping::new(
        format!("{}<={}", des.name, req.name),
        des.vars.clone(),
        req.vars.clone(),
        requirement_configs.len(),
        entries,
    ))
}
