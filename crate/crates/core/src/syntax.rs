//! Concrete syntax: the machine model format, the SPL manifest format and
//! the predicate expression language.
//!
//! Machine files hold one or more `fsmv` blocks:
//!
//! ```text
//! fsmv DoorLock {
//!   var Cp1 in {Auto, Moff};
//!   global Cp1 = Auto => Cp2 = Speed;
//!   events {DoorsClosed, Lock};
//!   states {Idle, Armed};
//!   initial Idle;
//!   trans Idle -> Armed on DoorsClosed when Cp1 = Auto;
//! }
//! ```
//!
//! Manifests list features and cross-feature constraints:
//!
//! ```text
//! spl Ecpl {
//!   feature DoorLock req "req_dl.fsmv" des "des_dl.fsmv";
//!   req_constraint DoorLock.Enable = Enable => DoorUnlock.Enable = Enable;
//! }
//! ```
//!
//! Predicates use atoms `x = v`, `x != v`, `x = y`, `x != y` plus `true`
//! and `false`, with connectives `!`, `&&`, `||`, `=>` (precedence in that
//! order, `=>` right-associative) and parentheses. `#` starts a comment.
//! Whether the right-hand side of an atom is a variable or a constant is
//! resolved against the ambient scope; a declared variable wins.

use crate::error::{ModelError, ParseError};
use crate::fsmv::{FsmvMachine, Transition};
use crate::varlang::{Predicate, VarDecl, VarScope};

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Arrow,
    Eq,
    Neq,
    Bang,
    AndAnd,
    OrOr,
    Implies,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    loop {
        let (tl, tc) = (line, col);
        let c = match chars.peek().copied() {
            None => break,
            Some(c) => c,
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' => {
                bump!();
                out.push(Token { tok: Tok::LBrace, line: tl, col: tc });
            }
            '}' => {
                bump!();
                out.push(Token { tok: Tok::RBrace, line: tl, col: tc });
            }
            '(' => {
                bump!();
                out.push(Token { tok: Tok::LParen, line: tl, col: tc });
            }
            ')' => {
                bump!();
                out.push(Token { tok: Tok::RParen, line: tl, col: tc });
            }
            ',' => {
                bump!();
                out.push(Token { tok: Tok::Comma, line: tl, col: tc });
            }
            ';' => {
                bump!();
                out.push(Token { tok: Tok::Semi, line: tl, col: tc });
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None | Some('\n') => {
                            return Err(ParseError::new(tl, tc, "unterminated string"))
                        }
                        Some('"') => break,
                        Some(c) => s.push(c),
                    }
                }
                out.push(Token { tok: Tok::Str(s), line: tl, col: tc });
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push(Token { tok: Tok::Arrow, line: tl, col: tc });
                } else {
                    return Err(ParseError::new(tl, tc, "expected `->`"));
                }
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    out.push(Token { tok: Tok::Implies, line: tl, col: tc });
                } else {
                    out.push(Token { tok: Tok::Eq, line: tl, col: tc });
                }
            }
            '!' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Token { tok: Tok::Neq, line: tl, col: tc });
                } else {
                    out.push(Token { tok: Tok::Bang, line: tl, col: tc });
                }
            }
            '&' => {
                bump!();
                if chars.peek() == Some(&'&') {
                    bump!();
                    out.push(Token { tok: Tok::AndAnd, line: tl, col: tc });
                } else {
                    return Err(ParseError::new(tl, tc, "expected `&&`"));
                }
            }
            '|' => {
                bump!();
                if chars.peek() == Some(&'|') {
                    bump!();
                    out.push(Token { tok: Tok::OrOr, line: tl, col: tc });
                } else {
                    return Err(ParseError::new(tl, tc, "expected `||`"));
                }
            }
            c if is_word_char(c) => {
                let mut w = String::new();
                while let Some(&c) = chars.peek() {
                    if is_word_char(c) {
                        w.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                // qualified name `Feature.var`
                if chars.peek() == Some(&'.') {
                    bump!();
                    let mut rest = String::new();
                    while let Some(&c) = chars.peek() {
                        if is_word_char(c) {
                            rest.push(c);
                            bump!();
                        } else {
                            break;
                        }
                    }
                    if rest.is_empty() {
                        return Err(ParseError::new(tl, tc, "dangling `.` in qualified name"));
                    }
                    w.push('.');
                    w.push_str(&rest);
                }
                out.push(Token { tok: Tok::Word(w), line: tl, col: tc });
            }
            other => {
                return Err(ParseError::new(tl, tc, format!("unexpected character `{other}`")))
            }
        }
    }
    Ok(out)
}

// --------------------------------------------------------------- parsing

/// Predicate with unresolved atoms; the variable/constant distinction on
/// right-hand sides needs the ambient scope.
#[derive(Debug, Clone, PartialEq)]
pub enum RawPred {
    True,
    False,
    Atom { left: String, eq: bool, right: String, line: usize, col: usize },
    Not(Box<RawPred>),
    And(Box<RawPred>, Box<RawPred>),
    Or(Box<RawPred>, Box<RawPred>),
    Implies(Box<RawPred>, Box<RawPred>),
}

impl RawPred {
    /// Resolves atoms against `scope`: a right-hand side naming a declared
    /// variable becomes a variable comparison, anything else a constant.
    pub fn resolve(&self, scope: &VarScope) -> Result<Predicate, ParseError> {
        Ok(match self {
            RawPred::True => Predicate::True,
            RawPred::False => Predicate::False,
            RawPred::Atom { left, eq, right, line, col } => {
                let decl = scope.get(left).ok_or_else(|| {
                    ParseError::new(*line, *col, format!("unknown variable `{left}`"))
                })?;
                if let Some(rdecl) = scope.get(right) {
                    if decl.domain != rdecl.domain {
                        return Err(ParseError::new(
                            *line,
                            *col,
                            format!("`{left}` and `{right}` have different domains"),
                        ));
                    }
                    if *eq {
                        Predicate::eq_var(left, right)
                    } else {
                        Predicate::neq_var(left, right)
                    }
                } else {
                    if decl.value_index(right).is_none() {
                        return Err(ParseError::new(
                            *line,
                            *col,
                            format!("`{right}` is not in the domain of `{left}`"),
                        ));
                    }
                    if *eq {
                        Predicate::eq_const(left, right)
                    } else {
                        Predicate::neq_const(left, right)
                    }
                }
            }
            RawPred::Not(a) => Predicate::not(a.resolve(scope)?),
            RawPred::And(a, b) => Predicate::and(a.resolve(scope)?, b.resolve(scope)?),
            RawPred::Or(a, b) => Predicate::or(a.resolve(scope)?, b.resolve(scope)?),
            RawPred::Implies(a, b) => Predicate::implies(a.resolve(scope)?, b.resolve(scope)?),
        })
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { tokens: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self
                .tokens
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError::new(line, col, message))
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(_)) => match self.next().unwrap().tok {
                Tok::Word(w) => Ok(w),
                _ => unreachable!(),
            },
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{kw}`")),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(w)) if w == kw)
    }

    fn string(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Str(_)) => match self.next().unwrap().tok {
                Tok::Str(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn word_list(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut out = Vec::new();
        if matches!(self.peek(), Some(Tok::RBrace)) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.word("a name")?);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                _ => return self.fail("expected `,` or `}`"),
            }
        }
        Ok(out)
    }

    // predicate grammar: implies := or (`=>` implies)?
    fn pred(&mut self) -> Result<RawPred, ParseError> {
        let lhs = self.pred_or()?;
        if matches!(self.peek(), Some(Tok::Implies)) {
            self.pos += 1;
            let rhs = self.pred()?;
            Ok(RawPred::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn pred_or(&mut self) -> Result<RawPred, ParseError> {
        let mut lhs = self.pred_and()?;
        while matches!(self.peek(), Some(Tok::OrOr)) {
            self.pos += 1;
            let rhs = self.pred_and()?;
            lhs = RawPred::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pred_and(&mut self) -> Result<RawPred, ParseError> {
        let mut lhs = self.pred_unary()?;
        while matches!(self.peek(), Some(Tok::AndAnd)) {
            self.pos += 1;
            let rhs = self.pred_unary()?;
            lhs = RawPred::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pred_unary(&mut self) -> Result<RawPred, ParseError> {
        match self.peek() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(RawPred::Not(Box::new(self.pred_unary()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.pred()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Word(w)) if w == "true" => {
                self.pos += 1;
                Ok(RawPred::True)
            }
            Some(Tok::Word(w)) if w == "false" => {
                self.pos += 1;
                Ok(RawPred::False)
            }
            Some(Tok::Word(_)) => {
                let (line, col) = self.here();
                let left = self.word("a variable")?;
                let eq = match self.peek() {
                    Some(Tok::Eq) => true,
                    Some(Tok::Neq) => false,
                    _ => return self.fail("expected `=` or `!=`"),
                };
                self.pos += 1;
                let right = self.word("a value or variable")?;
                Ok(RawPred::Atom { left, eq, right, line, col })
            }
            _ => self.fail("expected a predicate"),
        }
    }
}

// ---------------------------------------------------------- model format

struct RawMachine {
    name: String,
    vars: Vec<VarDecl>,
    global: Option<RawPred>,
    events: Option<Vec<String>>,
    states: Option<Vec<String>>,
    initial: Option<String>,
    transitions: Vec<(String, String, String, Option<RawPred>)>, // src, dst, event, guard
}

fn parse_machine(p: &mut Parser) -> Result<RawMachine, ParseError> {
    p.keyword("fsmv")?;
    let name = p.word("a machine name")?;
    p.expect(Tok::LBrace, "`{`")?;
    let mut m = RawMachine {
        name,
        vars: Vec::new(),
        global: None,
        events: None,
        states: None,
        initial: None,
        transitions: Vec::new(),
    };
    loop {
        if matches!(p.peek(), Some(Tok::RBrace)) {
            p.pos += 1;
            break;
        }
        if p.at_keyword("var") {
            p.pos += 1;
            let (line, col) = p.here();
            let vname = p.word("a variable name")?;
            if vname.contains('.') {
                return Err(ParseError::new(
                    line,
                    col,
                    "`.` in variable names is reserved for feature qualification",
                ));
            }
            p.keyword("in")?;
            let domain = p.word_list()?;
            p.expect(Tok::Semi, "`;`")?;
            let decl = VarDecl::new(vname, domain)
                .map_err(|e| ParseError::new(line, col, e.to_string()))?;
            m.vars.push(decl);
        } else if p.at_keyword("global") {
            let (line, col) = p.here();
            p.pos += 1;
            if m.global.is_some() {
                return Err(ParseError::new(line, col, "duplicate `global`"));
            }
            m.global = Some(p.pred()?);
            p.expect(Tok::Semi, "`;`")?;
        } else if p.at_keyword("events") {
            let (line, col) = p.here();
            p.pos += 1;
            if m.events.is_some() {
                return Err(ParseError::new(line, col, "duplicate `events`"));
            }
            m.events = Some(p.word_list()?);
            p.expect(Tok::Semi, "`;`")?;
        } else if p.at_keyword("states") {
            let (line, col) = p.here();
            p.pos += 1;
            if m.states.is_some() {
                return Err(ParseError::new(line, col, "duplicate `states`"));
            }
            m.states = Some(p.word_list()?);
            p.expect(Tok::Semi, "`;`")?;
        } else if p.at_keyword("initial") {
            let (line, col) = p.here();
            p.pos += 1;
            if m.initial.is_some() {
                return Err(ParseError::new(line, col, "duplicate `initial`"));
            }
            m.initial = Some(p.word("a state name")?);
            p.expect(Tok::Semi, "`;`")?;
        } else if p.at_keyword("trans") {
            p.pos += 1;
            let src = p.word("a source state")?;
            p.expect(Tok::Arrow, "`->`")?;
            let dst = p.word("a target state")?;
            p.keyword("on")?;
            let event = p.word("an event name")?;
            let guard = if p.at_keyword("when") {
                p.pos += 1;
                Some(p.pred()?)
            } else {
                None
            };
            p.expect(Tok::Semi, "`;`")?;
            m.transitions.push((src, dst, event, guard));
        } else {
            return p.fail("expected `var`, `global`, `events`, `states`, `initial` or `trans`");
        }
    }
    Ok(m)
}

fn build_machine(raw: RawMachine) -> Result<FsmvMachine, ParseError> {
    let scope = VarScope::new(raw.vars).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    let global = match &raw.global {
        Some(g) => g.resolve(&scope)?,
        None => Predicate::True,
    };
    let states = raw
        .states
        .ok_or_else(|| ParseError::new(1, 1, format!("machine `{}` has no states", raw.name)))?;
    let initial = raw.initial.ok_or_else(|| {
        ParseError::new(1, 1, format!("machine `{}` has no initial state", raw.name))
    })?;
    let events = raw
        .events
        .ok_or_else(|| ParseError::new(1, 1, format!("machine `{}` has no events", raw.name)))?;
    let transitions = raw
        .transitions
        .into_iter()
        .map(|(src, dst, event, guard)| {
            Ok(Transition {
                src,
                dst,
                event,
                guard: match &guard {
                    Some(g) => g.resolve(&scope)?,
                    None => Predicate::True,
                },
            })
        })
        .collect::<Result<Vec<_>, ParseError>>()?;
    Ok(FsmvMachine { name: raw.name, states, initial, events, vars: scope, transitions, global })
}

/// Parses every `fsmv` block in `text`. Machines are scope-resolved but not
/// yet semantically validated (consistency checks happen at load time).
pub fn parse_models(text: &str) -> Result<Vec<FsmvMachine>, ParseError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while p.peek().is_some() {
        let raw = parse_machine(&mut p)?;
        out.push(build_machine(raw)?);
    }
    Ok(out)
}

/// Parses a predicate expression against a known scope.
pub fn parse_predicate(text: &str, scope: &VarScope) -> Result<Predicate, ParseError> {
    let mut p = Parser::new(text)?;
    let raw = p.pred()?;
    if p.peek().is_some() {
        return p.fail("trailing input after predicate");
    }
    raw.resolve(scope)
}

// ------------------------------------------------------- manifest format

#[derive(Debug, Clone)]
pub struct RawManifestFeature {
    pub name: String,
    pub req_path: String,
    pub des_path: String,
    pub line: usize,
}

/// A parsed manifest, before machine loading and constraint resolution.
#[derive(Debug, Clone)]
pub struct RawManifest {
    pub name: String,
    pub features: Vec<RawManifestFeature>,
    pub req_constraints: Vec<RawPred>,
    pub des_constraints: Vec<RawPred>,
}

pub fn parse_manifest(text: &str) -> Result<RawManifest, ParseError> {
    let mut p = Parser::new(text)?;
    p.keyword("spl")?;
    let name = p.word("an SPL name")?;
    p.expect(Tok::LBrace, "`{`")?;
    let mut manifest = RawManifest {
        name,
        features: Vec::new(),
        req_constraints: Vec::new(),
        des_constraints: Vec::new(),
    };
    loop {
        if matches!(p.peek(), Some(Tok::RBrace)) {
            p.pos += 1;
            break;
        }
        if p.at_keyword("feature") {
            let (line, _) = p.here();
            p.pos += 1;
            let fname = p.word("a feature name")?;
            if manifest.features.iter().any(|f| f.name == fname) {
                return Err(ParseError::new(line, 1, format!("duplicate feature `{fname}`")));
            }
            p.keyword("req")?;
            let req_path = p.string("a requirement model path")?;
            p.keyword("des")?;
            let des_path = p.string("a design model path")?;
            p.expect(Tok::Semi, "`;`")?;
            manifest.features.push(RawManifestFeature {
                name: fname,
                req_path,
                des_path,
                line,
            });
        } else if p.at_keyword("req_constraint") {
            p.pos += 1;
            manifest.req_constraints.push(p.pred()?);
            p.expect(Tok::Semi, "`;`")?;
        } else if p.at_keyword("des_constraint") {
            p.pos += 1;
            manifest.des_constraints.push(p.pred()?);
            p.expect(Tok::Semi, "`;`")?;
        } else {
            return p.fail("expected `feature`, `req_constraint` or `des_constraint`");
        }
    }
    if p.peek().is_some() {
        return p.fail("trailing input after manifest");
    }
    Ok(manifest)
}

// -------------------------------------------------------------- printing

/// Canonical text rendering; `parse_models(print_model(m))` is structurally
/// equal to `m`.
pub fn print_model(m: &FsmvMachine) -> String {
    let mut out = String::new();
    out.push_str(&format!("fsmv {} {{\n", m.name));
    for d in m.vars.decls() {
        out.push_str(&format!("  var {} in {{{}}};\n", d.name, d.domain.join(", ")));
    }
    if m.global != Predicate::True {
        out.push_str(&format!("  global {};\n", m.global));
    }
    out.push_str(&format!("  events {{{}}};\n", m.events.join(", ")));
    out.push_str(&format!("  states {{{}}};\n", m.states.join(", ")));
    out.push_str(&format!("  initial {};\n", m.initial));
    for t in &m.transitions {
        if t.guard == Predicate::True {
            out.push_str(&format!("  trans {} -> {} on {};\n", t.src, t.dst, t.event));
        } else {
            out.push_str(&format!(
                "  trans {} -> {} on {} when {};\n",
                t.src, t.dst, t.event, t.guard
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Renders a manifest back to its concrete syntax.
pub fn print_manifest(
    name: &str,
    features: &[(String, String, String)],
    req_constraints: &[Predicate],
    des_constraints: &[Predicate],
) -> String {
    let mut out = String::new();
    out.push_str(&format!("spl {name} {{\n"));
    for (fname, req, des) in features {
        out.push_str(&format!("  feature {fname} req \"{req}\" des \"{des}\";\n"));
    }
    for c in req_constraints {
        out.push_str(&format!("  req_constraint {c};\n"));
    }
    for c in des_constraints {
        out.push_str(&format!("  des_constraint {c};\n"));
    }
    out.push_str("}\n");
    out
}

/// Positioned scope errors for predicates resolved outside the parser.
pub fn model_error_at(line: usize, col: usize, e: ModelError) -> ParseError {
    ParseError::new(line, col, e.to_string())
}
