//! Promela export of a (design, requirement) conformance check.
//!
//! The emitted model has five parts: an environment emitting arbitrary
//! events, one process per machine flagging an error when it cannot follow
//! the current event, a randomized configuration initialization filtered by
//! the global predicates, and a never claim that is violated exactly when
//! the design keeps running while the requirement is stuck. A turn token
//! serializes environment, design and requirement into one atomic round per
//! event; this pins down the interleaving granularity explicitly.

use crate::fsmv::FsmvMachine;
use crate::varlang::{Atom, Predicate};

fn pred_expr(p: &Predicate, var_prefix: &str, macro_prefix: &str) -> String {
    match p {
        Predicate::True => "true".into(),
        Predicate::False => "false".into(),
        Predicate::Atom(a) => match a {
            Atom::EqConst { var, value } => {
                format!("{var_prefix}{var} == {macro_prefix}{var}_{value}")
            }
            Atom::NeqConst { var, value } => {
                format!("{var_prefix}{var} != {macro_prefix}{var}_{value}")
            }
            Atom::EqVar { left, right } => format!("{var_prefix}{left} == {var_prefix}{right}"),
            Atom::NeqVar { left, right } => format!("{var_prefix}{left} != {var_prefix}{right}"),
        },
        Predicate::Not(a) => format!("!({})", pred_expr(a, var_prefix, macro_prefix)),
        Predicate::And(a, b) => format!(
            "({}) && ({})",
            pred_expr(a, var_prefix, macro_prefix),
            pred_expr(b, var_prefix, macro_prefix)
        ),
        Predicate::Or(a, b) => format!(
            "({}) || ({})",
            pred_expr(a, var_prefix, macro_prefix),
            pred_expr(b, var_prefix, macro_prefix)
        ),
        Predicate::Implies(a, b) => format!(
            "!({}) || ({})",
            pred_expr(a, var_prefix, macro_prefix),
            pred_expr(b, var_prefix, macro_prefix)
        ),
    }
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c == '.' { '_' } else { c }).collect()
}

struct MachinePart<'a> {
    machine: &'a FsmvMachine,
    role: &'a str, // "des" | "req"
}

impl MachinePart<'_> {
    fn var_prefix(&self) -> String {
        format!("{}_", self.role)
    }

    fn macro_prefix(&self) -> String {
        format!("{}_", self.role.to_uppercase())
    }

    fn state_macro(&self, state: &str) -> String {
        format!("{}S_{}", self.macro_prefix(), sanitize(state))
    }

    fn declarations(&self, out: &mut String) {
        out.push_str(&format!(
            "/* {} machine: {} */\n",
            if self.role == "des" { "design" } else { "requirement" },
            self.machine.name
        ));
        for decl in self.machine.vars.decls() {
            let var = sanitize(&decl.name);
            for (i, value) in decl.domain.iter().enumerate() {
                out.push_str(&format!(
                    "#define {}{}_{} {}\n",
                    self.macro_prefix(),
                    var,
                    sanitize(value),
                    i
                ));
            }
            out.push_str(&format!("byte {}{};\n", self.var_prefix(), var));
        }
        for (i, state) in self.machine.states.iter().enumerate() {
            out.push_str(&format!("#define {} {}\n", self.state_macro(state), i));
        }
        out.push_str(&format!(
            "byte {}_state = {};\n",
            self.role,
            self.state_macro(&self.machine.initial)
        ));
        out.push_str(&format!("bool error_{} = false;\n\n", self.role));
    }

    fn process(&self, out: &mut String, my_turn: u8, next_turn: u8) {
        let role = self.role;
        out.push_str(&format!("active proctype {}() {{\n", if role == "des" { "Design" } else { "Requirement" }));
        out.push_str("  do\n");
        out.push_str(&format!("  :: atomic {{ turn == {my_turn} ->\n"));
        out.push_str("       if\n");
        for t in &self.machine.transitions {
            let guard = sanitized_guard(&t.guard, &self.var_prefix(), &self.macro_prefix());
            out.push_str(&format!(
                "       :: !error_{role} && {role}_state == {} && event == ev_{} && ({guard}) -> {role}_state = {}\n",
                self.state_macro(&t.src),
                sanitize(&t.event),
                self.state_macro(&t.dst),
            ));
        }
        out.push_str(&format!("       :: else -> error_{role} = true\n"));
        out.push_str("       fi;\n");
        out.push_str(&format!("       turn = {next_turn} }}\n"));
        out.push_str("  od\n}\n\n");
    }

    fn random_init(&self, out: &mut String) {
        for decl in self.machine.vars.decls() {
            let var = sanitize(&decl.name);
            out.push_str("    if\n");
            for value in &decl.domain {
                out.push_str(&format!(
                    "    :: {}{} = {}{}_{}\n",
                    self.var_prefix(),
                    var,
                    self.macro_prefix(),
                    var,
                    sanitize(value)
                ));
            }
            out.push_str("    fi;\n");
        }
    }
}

fn sanitized_guard(p: &Predicate, var_prefix: &str, macro_prefix: &str) -> String {
    // variable names inside predicates may carry qualification dots
    fn rewrite(p: &Predicate) -> Predicate {
        match p {
            Predicate::True => Predicate::True,
            Predicate::False => Predicate::False,
            Predicate::Atom(a) => Predicate::Atom(match a {
                Atom::EqConst { var, value } => Atom::EqConst {
                    var: sanitize(var),
                    value: sanitize(value),
                },
                Atom::NeqConst { var, value } => Atom::NeqConst {
                    var: sanitize(var),
                    value: sanitize(value),
                },
                Atom::EqVar { left, right } => {
                    Atom::EqVar { left: sanitize(left), right: sanitize(right) }
                }
                Atom::NeqVar { left, right } => {
                    Atom::NeqVar { left: sanitize(left), right: sanitize(right) }
                }
            }),
            Predicate::Not(a) => Predicate::not(rewrite(a)),
            Predicate::And(a, b) => Predicate::and(rewrite(a), rewrite(b)),
            Predicate::Or(a, b) => Predicate::or(rewrite(a), rewrite(b)),
            Predicate::Implies(a, b) => Predicate::implies(rewrite(a), rewrite(b)),
        }
    }
    pred_expr(&rewrite(p), var_prefix, macro_prefix)
}

/// Emits the full Promela model for one conformance check.
pub fn emit_promela(des: &FsmvMachine, req: &FsmvMachine) -> String {
    let alphabet = crate::containment::union_alphabet(&des.events, &req.events);
    let mut out = String::new();
    out.push_str(&format!(
        "/* Conformance check model: design {} against requirement {}.\n",
        des.name, req.name
    ));
    out.push_str(" * Parts: environment, design process, requirement process,\n");
    out.push_str(" * randomized configuration initialization, never claim.\n");
    out.push_str(" * Scheduling: one atomic round per event in the fixed order\n");
    out.push_str(" * environment -> design -> requirement, serialized by `turn`.\n");
    out.push_str(" */\n\n");

    if alphabet.is_empty() {
        out.push_str("/* no events: the environment choice set is empty */\n");
        out.push_str("byte event;\n");
    } else {
        let names: Vec<String> = alphabet.iter().map(|e| format!("ev_{}", sanitize(e))).collect();
        out.push_str(&format!("mtype = {{ {} }};\n", names.join(", ")));
        out.push_str("mtype event;\n");
    }
    out.push_str("byte turn = 255; /* parked until init configures the machines */\n\n");

    let des_part = MachinePart { machine: des, role: "des" };
    let req_part = MachinePart { machine: req, role: "req" };
    des_part.declarations(&mut out);
    req_part.declarations(&mut out);

    out.push_str("active proctype Environment() {\n");
    out.push_str("  do\n");
    out.push_str("  :: atomic { turn == 0 ->\n");
    if alphabet.is_empty() {
        out.push_str("       skip; /* nothing to emit */\n");
    } else {
        out.push_str("       if\n");
        for e in &alphabet {
            out.push_str(&format!("       :: event = ev_{}\n", sanitize(e)));
        }
        out.push_str("       fi;\n");
    }
    out.push_str("       turn = 1 }\n");
    out.push_str("  od\n}\n\n");

    des_part.process(&mut out, 1, 2);
    req_part.process(&mut out, 2, 0);

    out.push_str("init {\n");
    out.push_str("  atomic {\n");
    des_part.random_init(&mut out);
    req_part.random_init(&mut out);
    out.push_str("    /* keep only valid configurations: invalid picks block here */\n");
    out.push_str(&format!(
        "    ({});\n",
        sanitized_guard(&des.global, &des_part.var_prefix(), &des_part.macro_prefix())
    ));
    out.push_str(&format!(
        "    ({});\n",
        sanitized_guard(&req.global, &req_part.var_prefix(), &req_part.macro_prefix())
    ));
    out.push_str("    turn = 0\n");
    out.push_str("  }\n}\n\n");

    out.push_str("never { /* []<>(!error_des && error_req) */\n");
    out.push_str("T0_init:\n");
    out.push_str("  do\n");
    out.push_str("  :: true -> goto T0_init\n");
    out.push_str("  :: (!error_des && error_req) -> goto accept_live\n");
    out.push_str("  od;\n");
    out.push_str("accept_live:\n");
    out.push_str("  do\n");
    out.push_str("  :: (!error_des && error_req) -> goto accept_live\n");
    out.push_str("  :: else -> goto T0_init\n");
    out.push_str("  od\n");
    out.push_str("}\n");
    out
}
