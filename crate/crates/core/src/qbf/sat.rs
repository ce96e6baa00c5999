//! Conflict-driven clause-learning SAT solver.
//!
//! Two-watched-literal propagation, first-UIP learning, activity-based
//! decisions with phase saving and Luby restarts. Clauses may be added
//! between `solve` calls; the solver backtracks to the root level first.

/// A literal packed as `var << 1 | sign` (sign bit set = negated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | u32::from(!positive))
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_pos(self) -> bool {
        self.0 & 1 == 0
    }

    fn code(self) -> usize {
        self.0 as usize
    }

    /// From a DIMACS-style signed literal (1-based, nonzero).
    pub fn from_dimacs(x: i32) -> Lit {
        debug_assert!(x != 0);
        Lit::new(x.unsigned_abs() - 1, x > 0)
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// Total assignment indexed by variable.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

const NO_REASON: u32 = u32::MAX;

/// Indexed max-heap over variable activities.
#[derive(Default)]
struct VarOrder {
    heap: Vec<u32>,
    pos: Vec<u32>, // u32::MAX when absent
}

impl VarOrder {
    fn contains(&self, v: u32) -> bool {
        (v as usize) < self.pos.len() && self.pos[v as usize] != u32::MAX
    }

    fn push(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        while self.pos.len() <= v as usize {
            self.pos.push(u32::MAX);
        }
        self.pos[v as usize] = self.heap.len() as u32;
        self.heap.push(v);
        self.sift_up(self.heap.len() - 1, act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<u32> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top as usize] = u32::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: u32, act: &[f64]) {
        if self.contains(v) {
            let i = self.pos[v as usize] as usize;
            self.sift_up(i, act);
        }
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if act[self.heap[i] as usize] <= act[self.heap[parent] as usize] {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len() && act[self.heap[l] as usize] > act[self.heap[best] as usize] {
                best = l;
            }
            if r < self.heap.len() && act[self.heap[r] as usize] > act[self.heap[best] as usize] {
                best = r;
            }
            if best == i {
                break;
            }
            self.swap(i, best);
            i = best;
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a] as usize] = a as u32;
        self.pos[self.heap[b] as usize] = b as u32;
    }
}

pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<Watcher>>, // indexed by literal code
    assign: Vec<i8>,            // 0 unassigned, 1 true, -1 false
    level: Vec<u32>,
    reason: Vec<u32>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    order: VarOrder,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    conflicts: u64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new()
    }
}

impl Solver {
    pub fn new() -> Self {
        Solver {
            clauses: Vec::new(),
            watches: Vec::new(),
            assign: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: Vec::new(),
            var_inc: 1.0,
            order: VarOrder::default(),
            phase: Vec::new(),
            seen: Vec::new(),
            ok: true,
            conflicts: 0,
        }
    }

    pub fn new_var(&mut self) -> u32 {
        let v = self.assign.len() as u32;
        self.assign.push(0);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.order.push(v, &self.activity);
        v
    }

    pub fn num_vars(&self) -> usize {
        self.assign.len()
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    fn value(&self, lit: Lit) -> i8 {
        let v = self.assign[lit.var() as usize];
        if lit.is_pos() {
            v
        } else {
            -v
        }
    }

    /// Adds a clause, growing the variable range as needed. Returns false
    /// if the solver is already in an unsatisfiable state.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        if !self.ok {
            return false;
        }
        self.cancel_until(0);
        for l in lits {
            while (l.var() as usize) >= self.num_vars() {
                self.new_var();
            }
        }
        // sort, drop duplicates and false literals, detect tautologies
        let mut lits: Vec<Lit> = lits.to_vec();
        lits.sort_unstable();
        lits.dedup();
        let mut kept = Vec::with_capacity(lits.len());
        for (i, &l) in lits.iter().enumerate() {
            if i + 1 < lits.len() && lits[i + 1] == !l {
                return true; // tautology
            }
            match self.value(l) {
                1 => return true, // satisfied at root level
                -1 => {}
                _ => kept.push(l),
            }
        }
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(kept[0], NO_REASON);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                let ci = self.clauses.len() as u32;
                self.watches[kept[0].code()].push(Watcher { clause: ci, blocker: kept[1] });
                self.watches[kept[1].code()].push(Watcher { clause: ci, blocker: kept[0] });
                self.clauses.push(kept);
                true
            }
        }
    }

    fn enqueue(&mut self, lit: Lit, reason: u32) {
        debug_assert_eq!(self.value(lit), 0);
        let v = lit.var() as usize;
        self.assign[v] = if lit.is_pos() { 1 } else { -1 };
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            while i < ws.len() {
                let w = ws[i];
                if self.value(w.blocker) == 1 {
                    i += 1;
                    continue;
                }
                let ci = w.clause as usize;
                // make sure the false literal is in slot 1
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value(first) == 1 {
                    ws[i] = Watcher { clause: w.clause, blocker: first };
                    i += 1;
                    continue;
                }
                // look for a replacement watch
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    if self.value(self.clauses[ci][k]) != -1 {
                        self.clauses[ci].swap(1, k);
                        let new_watch = self.clauses[ci][1];
                        self.watches[new_watch.code()]
                            .push(Watcher { clause: w.clause, blocker: first });
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value(first) == -1 {
                    // conflict: keep the remaining watchers
                    self.watches[false_lit.code()].extend_from_slice(&ws[i..]);
                    ws.truncate(i);
                    self.watches[false_lit.code()].splice(0..0, ws);
                    self.qhead = self.trail.len();
                    return Some(w.clause);
                }
                self.enqueue(first, w.clause);
                i += 1;
            }
            let slot = &mut self.watches[false_lit.code()];
            if slot.is_empty() {
                *slot = ws;
            } else {
                slot.extend_from_slice(&ws);
            }
        }
        None
    }

    fn bump(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v, &self.activity);
    }

    /// First-UIP conflict analysis; returns the learnt clause (asserting
    /// literal first) and the backtrack level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![Lit(0)]; // slot for the asserting literal
        let mut counter = 0usize;
        let mut index = self.trail.len();
        let mut p: Option<Lit> = None;
        let decision_level = self.trail_lim.len() as u32;
        loop {
            let clause_len = self.clauses[confl as usize].len();
            let start = usize::from(p.is_some());
            for k in start..clause_len {
                let q = self.clauses[confl as usize][k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(q.var());
                    if self.level[v] >= decision_level {
                        counter += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            // pick the next marked literal on the trail
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let pl = self.trail[index];
            self.seen[pl.var() as usize] = false;
            counter -= 1;
            if counter == 0 {
                learnt[0] = !pl;
                break;
            }
            p = Some(pl);
            confl = self.reason[pl.var() as usize];
        }
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let bt = if learnt.len() == 1 {
            0
        } else {
            // move the highest-level remaining literal into slot 1
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var() as usize] > self.level[learnt[max_i].var() as usize]
                {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            self.level[learnt[1].var() as usize]
        };
        (learnt, bt)
    }

    fn cancel_until(&mut self, target: u32) {
        if (self.trail_lim.len() as u32) <= target {
            return;
        }
        let lim = self.trail_lim[target as usize];
        while self.trail.len() > lim {
            let lit = self.trail.pop().unwrap();
            let v = lit.var() as usize;
            self.phase[v] = lit.is_pos();
            self.assign[v] = 0;
            self.reason[v] = NO_REASON;
            self.order.push(lit.var(), &self.activity);
        }
        self.trail_lim.truncate(target as usize);
        self.qhead = self.trail.len();
    }

    fn record_learnt(&mut self, learnt: Vec<Lit>) {
        debug_assert!(!learnt.is_empty());
        if learnt.len() == 1 {
            self.enqueue(learnt[0], NO_REASON);
            return;
        }
        let ci = self.clauses.len() as u32;
        self.watches[learnt[0].code()].push(Watcher { clause: ci, blocker: learnt[1] });
        self.watches[learnt[1].code()].push(Watcher { clause: ci, blocker: learnt[0] });
        let assert_lit = learnt[0];
        self.clauses.push(learnt);
        self.enqueue(assert_lit, ci);
    }

    fn luby(x: u64) -> u64 {
        // the reluctant-doubling sequence 1 1 2 1 1 2 4 ...
        let mut size = 1u64;
        let mut seq = 0u32;
        while size < x + 1 {
            seq += 1;
            size = 2 * size + 1;
        }
        let mut x = x;
        while size - 1 != x {
            size = (size - 1) >> 1;
            seq -= 1;
            x %= size;
        }
        1u64 << seq
    }

    pub fn solve(&mut self) -> SatResult {
        if !self.ok {
            return SatResult::Unsat;
        }
        self.cancel_until(0);
        if self.propagate().is_some() {
            self.ok = false;
            return SatResult::Unsat;
        }
        let mut restart_idx = 0u64;
        let mut conflicts_until_restart = 100 * Self::luby(restart_idx);
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                if self.trail_lim.is_empty() {
                    self.ok = false;
                    return SatResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.cancel_until(bt);
                self.record_learnt(learnt);
                self.var_inc /= 0.95;
                conflicts_until_restart = conflicts_until_restart.saturating_sub(1);
            } else {
                if conflicts_until_restart == 0 {
                    restart_idx += 1;
                    conflicts_until_restart = 100 * Self::luby(restart_idx);
                    self.cancel_until(0);
                    continue;
                }
                // decide
                let mut next = None;
                while let Some(v) = self.order.pop(&self.activity) {
                    if self.assign[v as usize] == 0 {
                        next = Some(v);
                        break;
                    }
                }
                match next {
                    None => {
                        let model = self.assign.iter().map(|&a| a == 1).collect();
                        return SatResult::Sat(model);
                    }
                    Some(v) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(Lit::new(v, self.phase[v as usize]), NO_REASON);
                    }
                }
            }
        }
    }
}
