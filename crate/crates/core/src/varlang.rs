//! Finite-domain variables, guard predicates and configurations.
//!
//! A variable ranges over a small ordered set of symbolic values. Predicates
//! are built from (in)equality atoms with `!`, `&&`, `||` and `=>` and are
//! used both as transition guards and as global predicates restricting the
//! valid configurations of a machine.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{CapacityError, ModelError, Result};
use crate::limits::Limits;

/// A variable declaration: a name plus its ordered domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub domain: Vec<String>,
}

impl VarDecl {
    pub fn new(name: impl Into<String>, domain: Vec<String>) -> Result<Self, ModelError> {
        let name = name.into();
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain(name));
        }
        for (i, v) in domain.iter().enumerate() {
            if domain[..i].contains(v) {
                return Err(ModelError::DuplicateDomainValue { var: name, value: v.clone() });
            }
        }
        Ok(VarDecl { name, domain })
    }

    pub fn value_index(&self, value: &str) -> Option<usize> {
        self.domain.iter().position(|v| v == value)
    }
}

/// An ordered set of variable declarations with unique names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VarScope {
    decls: Vec<VarDecl>,
    index: HashMap<String, usize>,
}

impl VarScope {
    pub fn new(decls: Vec<VarDecl>) -> Result<Self, ModelError> {
        let mut index = HashMap::new();
        for (i, d) in decls.iter().enumerate() {
            if index.insert(d.name.clone(), i).is_some() {
                return Err(ModelError::DuplicateVariable(d.name.clone()));
            }
        }
        Ok(VarScope { decls, index })
    }

    pub fn empty() -> Self {
        VarScope::default()
    }

    pub fn get(&self, name: &str) -> Option<&VarDecl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn decls(&self) -> &[VarDecl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    /// Disjoint union, preserving declaration order (self first).
    pub fn union(&self, other: &VarScope) -> Result<VarScope, ModelError> {
        for d in &other.decls {
            if self.index.contains_key(&d.name) {
                return Err(ModelError::VariableClash(d.name.clone()));
            }
        }
        let mut decls = self.decls.clone();
        decls.extend(other.decls.iter().cloned());
        VarScope::new(decls)
    }

    /// Renames every variable to `<prefix>.<name>`.
    pub fn qualified(&self, prefix: &str) -> VarScope {
        let decls = self
            .decls
            .iter()
            .map(|d| VarDecl { name: format!("{prefix}.{}", d.name), domain: d.domain.clone() })
            .collect();
        VarScope::new(decls).expect("qualification preserves uniqueness")
    }

    /// Product of all domain sizes (number of total assignments).
    pub fn config_count(&self) -> u128 {
        self.decls.iter().map(|d| d.domain.len() as u128).product()
    }

    /// All total assignments, lexicographic by declaration order then
    /// domain order. The caller is responsible for budgeting.
    pub fn assignments(&self) -> AssignmentIter<'_> {
        AssignmentIter { scope: self, odometer: vec![0; self.decls.len()], done: false }
    }
}

/// Iterator over all total assignments of a scope in canonical order.
pub struct AssignmentIter<'a> {
    scope: &'a VarScope,
    odometer: Vec<usize>,
    done: bool,
}

impl Iterator for AssignmentIter<'_> {
    type Item = Configuration;

    fn next(&mut self) -> Option<Configuration> {
        if self.done {
            return None;
        }
        let cfg = Configuration {
            values: self
                .scope
                .decls
                .iter()
                .zip(&self.odometer)
                .map(|(d, &i)| (d.name.clone(), d.domain[i].clone()))
                .collect(),
        };
        // advance, last variable fastest
        self.done = true;
        for (pos, slot) in self.odometer.iter_mut().enumerate().rev() {
            *slot += 1;
            if *slot < self.scope.decls[pos].domain.len() {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(cfg)
    }
}

/// Atomic formula over variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    EqConst { var: String, value: String },
    NeqConst { var: String, value: String },
    EqVar { left: String, right: String },
    NeqVar { left: String, right: String },
}

/// Guard / global-constraint formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Predicate {
    True,
    False,
    Atom(Atom),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Implies(Box<Predicate>, Box<Predicate>),
}

impl Predicate {
    pub fn eq_const(var: impl Into<String>, value: impl Into<String>) -> Predicate {
        Predicate::Atom(Atom::EqConst { var: var.into(), value: value.into() })
    }

    pub fn neq_const(var: impl Into<String>, value: impl Into<String>) -> Predicate {
        Predicate::Atom(Atom::NeqConst { var: var.into(), value: value.into() })
    }

    pub fn eq_var(left: impl Into<String>, right: impl Into<String>) -> Predicate {
        Predicate::Atom(Atom::EqVar { left: left.into(), right: right.into() })
    }

    pub fn neq_var(left: impl Into<String>, right: impl Into<String>) -> Predicate {
        Predicate::Atom(Atom::NeqVar { left: left.into(), right: right.into() })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(p: Predicate) -> Predicate {
        Predicate::Not(Box::new(p))
    }

    pub fn and(a: Predicate, b: Predicate) -> Predicate {
        Predicate::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Predicate, b: Predicate) -> Predicate {
        Predicate::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Predicate, b: Predicate) -> Predicate {
        Predicate::Implies(Box::new(a), Box::new(b))
    }

    /// Conjunction of a sequence; `true` when empty.
    pub fn conjoin(ps: impl IntoIterator<Item = Predicate>) -> Predicate {
        let mut it = ps.into_iter();
        match it.next() {
            None => Predicate::True,
            Some(first) => it.fold(first, Predicate::and),
        }
    }

    /// All variable names mentioned, in first-mention order.
    pub fn vars(&self) -> Vec<&str> {
        fn walk<'a>(p: &'a Predicate, out: &mut Vec<&'a str>) {
            let mut push = |v: &'a str| {
                if !out.contains(&v) {
                    out.push(v);
                }
            };
            match p {
                Predicate::True | Predicate::False => {}
                Predicate::Atom(Atom::EqConst { var, .. })
                | Predicate::Atom(Atom::NeqConst { var, .. }) => push(var),
                Predicate::Atom(Atom::EqVar { left, right })
                | Predicate::Atom(Atom::NeqVar { left, right }) => {
                    push(left);
                    push(right);
                }
                Predicate::Not(a) => walk(a, out),
                Predicate::And(a, b) | Predicate::Or(a, b) | Predicate::Implies(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Checks that every variable is declared, constants are in-domain and
    /// compared variables have identical domains.
    pub fn validate(&self, scope: &VarScope) -> Result<(), ModelError> {
        match self {
            Predicate::True | Predicate::False => Ok(()),
            Predicate::Atom(atom) => {
                let check_var = |name: &str| {
                    scope.get(name).ok_or_else(|| ModelError::UnboundVariable(name.to_string()))
                };
                match atom {
                    Atom::EqConst { var, value } | Atom::NeqConst { var, value } => {
                        let decl = check_var(var)?;
                        if decl.value_index(value).is_none() {
                            return Err(ModelError::ValueNotInDomain {
                                var: var.clone(),
                                value: value.clone(),
                            });
                        }
                        Ok(())
                    }
                    Atom::EqVar { left, right } | Atom::NeqVar { left, right } => {
                        let l = check_var(left)?;
                        let r = check_var(right)?;
                        if l.domain != r.domain {
                            return Err(ModelError::DomainMismatch(left.clone(), right.clone()));
                        }
                        Ok(())
                    }
                }
            }
            Predicate::Not(a) => a.validate(scope),
            Predicate::And(a, b) | Predicate::Or(a, b) | Predicate::Implies(a, b) => {
                a.validate(scope)?;
                b.validate(scope)
            }
        }
    }

    /// Renames every variable to `<prefix>.<name>`.
    pub fn qualify(&self, prefix: &str) -> Predicate {
        let q = |v: &str| format!("{prefix}.{v}");
        match self {
            Predicate::True => Predicate::True,
            Predicate::False => Predicate::False,
            Predicate::Atom(a) => Predicate::Atom(match a {
                Atom::EqConst { var, value } => {
                    Atom::EqConst { var: q(var), value: value.clone() }
                }
                Atom::NeqConst { var, value } => {
                    Atom::NeqConst { var: q(var), value: value.clone() }
                }
                Atom::EqVar { left, right } => Atom::EqVar { left: q(left), right: q(right) },
                Atom::NeqVar { left, right } => Atom::NeqVar { left: q(left), right: q(right) },
            }),
            Predicate::Not(a) => Predicate::not(a.qualify(prefix)),
            Predicate::And(a, b) => Predicate::and(a.qualify(prefix), b.qualify(prefix)),
            Predicate::Or(a, b) => Predicate::or(a.qualify(prefix), b.qualify(prefix)),
            Predicate::Implies(a, b) => Predicate::implies(a.qualify(prefix), b.qualify(prefix)),
        }
    }
}

/// A total assignment of values to the variables of some scope.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    values: BTreeMap<String, String>,
}

impl Configuration {
    pub fn empty() -> Self {
        Configuration::default()
    }

    /// Builds a configuration without scope validation.
    pub fn from_pairs<K, V>(pairs: impl IntoIterator<Item = (K, V)>) -> Self
    where
        K: Into<String>,
        V: Into<String>,
    {
        Configuration {
            values: pairs.into_iter().map(|(k, v)| (k.into(), v.into())).collect(),
        }
    }

    /// Builds a configuration and checks totality and domain membership
    /// against `scope`.
    pub fn checked<K, V>(
        scope: &VarScope,
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self, ModelError>
    where
        K: Into<String>,
        V: Into<String>,
    {
        let cfg = Configuration::from_pairs(pairs);
        cfg.check_total(scope)?;
        Ok(cfg)
    }

    /// Verifies that the configuration is total over `scope` with in-domain
    /// values.
    pub fn check_total(&self, scope: &VarScope) -> Result<(), ModelError> {
        for d in scope.decls() {
            match self.values.get(&d.name) {
                None => return Err(ModelError::PartialConfiguration(d.name.clone())),
                Some(v) if d.value_index(v).is_none() => {
                    return Err(ModelError::ValueNotInDomain {
                        var: d.name.clone(),
                        value: v.clone(),
                    })
                }
                _ => {}
            }
        }
        for name in self.values.keys() {
            if scope.get(name).is_none() {
                return Err(ModelError::UnboundVariable(name.clone()));
            }
        }
        Ok(())
    }

    pub fn get(&self, var: &str) -> Option<&str> {
        self.values.get(var).map(|s| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Restriction to the variables of `scope`.
    pub fn restrict(&self, scope: &VarScope) -> Configuration {
        Configuration {
            values: self
                .values
                .iter()
                .filter(|(k, _)| scope.get(k).is_some())
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Union of two configurations over disjoint scopes.
    pub fn merge(&self, other: &Configuration) -> Result<Configuration, ModelError> {
        let mut values = self.values.clone();
        for (k, v) in &other.values {
            if values.insert(k.clone(), v.clone()).is_some() {
                return Err(ModelError::VariableClash(k.clone()));
            }
        }
        Ok(Configuration { values })
    }

    /// `x=a,y=b` in declaration order of `scope`.
    pub fn render(&self, scope: &VarScope) -> String {
        scope
            .decls()
            .iter()
            .map(|d| format!("{}={}", d.name, self.get(&d.name).unwrap_or("?")))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Values in declaration order of `scope` (for compact display).
    pub fn values_in(&self, scope: &VarScope) -> Vec<String> {
        scope
            .decls()
            .iter()
            .map(|d| self.get(&d.name).unwrap_or("?").to_string())
            .collect()
    }
}

/// Standard Boolean semantics; `a => b` is `!a || b`.
pub fn eval(p: &Predicate, pi: &Configuration) -> Result<bool, ModelError> {
    let lookup = |name: &str| -> Result<&str, ModelError> {
        pi.get(name).ok_or_else(|| ModelError::UnboundVariable(name.to_string()))
    };
    Ok(match p {
        Predicate::True => true,
        Predicate::False => false,
        Predicate::Atom(Atom::EqConst { var, value }) => lookup(var)? == value,
        Predicate::Atom(Atom::NeqConst { var, value }) => lookup(var)? != value,
        Predicate::Atom(Atom::EqVar { left, right }) => lookup(left)? == lookup(right)?,
        Predicate::Atom(Atom::NeqVar { left, right }) => lookup(left)? != lookup(right)?,
        Predicate::Not(a) => !eval(a, pi)?,
        Predicate::And(a, b) => eval(a, pi)? && eval(b, pi)?,
        Predicate::Or(a, b) => eval(a, pi)? || eval(b, pi)?,
        Predicate::Implies(a, b) => !eval(a, pi)? || eval(b, pi)?,
    })
}

/// Scopes at most this many total assignments are decided by enumeration;
/// larger ones go through the propositional encoding and the SAT core.
const SAT_SWITCH: u128 = 4096;

/// True iff some total assignment over `scope` satisfies `p`.
pub fn is_consistent(p: &Predicate, scope: &VarScope) -> Result<bool, ModelError> {
    p.validate(scope)?;
    if scope.config_count() <= SAT_SWITCH {
        is_consistent_enum(p, scope)
    } else {
        Ok(is_consistent_sat(p, scope))
    }
}

/// Enumeration route; callers must keep the scope small.
pub(crate) fn is_consistent_enum(p: &Predicate, scope: &VarScope) -> Result<bool, ModelError> {
    for cfg in scope.assignments() {
        if eval(p, &cfg)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The SAT route of the consistency check, callable on any scope size;
/// public so tests can compare it against the enumeration route.
pub fn sat_route_consistency(p: &Predicate, scope: &VarScope) -> bool {
    p.validate(scope).is_ok() && is_consistent_sat(p, scope)
}

/// SAT route: encode the predicate plus domain-validity constraints and ask
/// the solver. Assumes `p` is already validated against `scope`.
pub(crate) fn is_consistent_sat(p: &Predicate, scope: &VarScope) -> bool {
    use crate::qbf::circuit::Circuit;
    use crate::qbf::encoding::BoolEncoding;

    let mut circuit = Circuit::new();
    let enc = BoolEncoding::allocate(scope, &mut circuit);
    let body = enc.encode_predicate(p, &mut circuit);
    let validity = enc.validity(&mut circuit);
    let root = circuit.and2(body, validity);
    crate::qbf::sat_circuit(&circuit, root).is_some()
}

/// Exactly `{pi | eval(p, pi)}` in canonical order, refusing scopes whose
/// assignment count exceeds `limits.enum_budget`.
pub fn satisfying_assignments(
    p: &Predicate,
    scope: &VarScope,
    limits: &Limits,
) -> Result<Vec<Configuration>> {
    p.validate(scope)?;
    let count = scope.config_count();
    if count > limits.enum_budget as u128 {
        return Err(CapacityError::new(
            "enumerating configurations",
            count,
            limits.enum_budget as u128,
        )
        .into());
    }
    let mut out = Vec::new();
    for cfg in scope.assignments() {
        if eval(p, &cfg)? {
            out.push(cfg);
        }
    }
    Ok(out)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::EqConst { var, value } => write!(f, "{var} = {value}"),
            Atom::NeqConst { var, value } => write!(f, "{var} != {value}"),
            Atom::EqVar { left, right } => write!(f, "{left} = {right}"),
            Atom::NeqVar { left, right } => write!(f, "{left} != {right}"),
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: ! > && > || > =>, `=>` right-associative; atoms are
        // parenthesized under `!` for readability
        fn prec(p: &Predicate) -> u8 {
            match p {
                Predicate::Implies(..) => 1,
                Predicate::Or(..) => 2,
                Predicate::And(..) => 3,
                Predicate::Atom(..) => 4,
                Predicate::Not(..) => 5,
                _ => 6,
            }
        }
        fn show(p: &Predicate, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let mine = prec(p);
            if mine < ctx {
                write!(f, "(")?;
            }
            match p {
                Predicate::True => write!(f, "true")?,
                Predicate::False => write!(f, "false")?,
                Predicate::Atom(a) => write!(f, "{a}")?,
                Predicate::Not(a) => {
                    write!(f, "!")?;
                    show(a, 5, f)?;
                }
                Predicate::And(a, b) => {
                    show(a, 3, f)?;
                    write!(f, " && ")?;
                    show(b, 4, f)?;
                }
                Predicate::Or(a, b) => {
                    show(a, 2, f)?;
                    write!(f, " || ")?;
                    show(b, 3, f)?;
                }
                Predicate::Implies(a, b) => {
                    show(a, 2, f)?;
                    write!(f, " => ")?;
                    show(b, 1, f)?;
                }
            }
            if mine < ctx {
                write!(f, ")")?;
            }
            Ok(())
        }
        show(self, 0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope(pairs: &[(&str, &[&str])]) -> VarScope {
        VarScope::new(
            pairs
                .iter()
                .map(|(n, d)| {
                    VarDecl::new(*n, d.iter().map(|s| s.to_string()).collect()).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    fn doorlock_scope() -> VarScope {
        scope(&[
            ("DL_Enable", &["Enable", "Disable"]),
            ("Transmission_dl", &["Auto", "Manual"]),
            ("DL_User_Pref", &["Speed", "Park"]),
        ])
    }

    fn doorlock_rho() -> Predicate {
        Predicate::implies(
            Predicate::eq_const("Transmission_dl", "Manual"),
            Predicate::eq_const("DL_User_Pref", "Speed"),
        )
    }

    #[test]
    fn implies_with_false_antecedent() {
        let p = Predicate::implies(
            Predicate::eq_const("Transmission", "Manual"),
            Predicate::eq_const("Pref", "Speed"),
        );
        let pi = Configuration::from_pairs([("Transmission", "Auto"), ("Pref", "Park")]);
        assert!(eval(&p, &pi).unwrap());
        let pi = Configuration::from_pairs([("Transmission", "Manual"), ("Pref", "Park")]);
        assert!(!eval(&p, &pi).unwrap());
    }

    #[test]
    fn eval_unbound_variable_is_an_error() {
        let p = Predicate::eq_const("x", "a");
        let err = eval(&p, &Configuration::empty()).unwrap_err();
        assert_eq!(err, ModelError::UnboundVariable("x".into()));
    }

    #[test]
    fn doorlock_global_predicate() {
        // brute-force check over all 8 assignments of the three variables
        let sc = doorlock_scope();
        let rho = doorlock_rho();
        let sat: Vec<_> = sc.assignments().filter(|c| eval(&rho, c).unwrap()).collect();
        assert_eq!(sat.len(), 6);
        let manual_speed = Configuration::from_pairs([
            ("DL_Enable", "Enable"),
            ("Transmission_dl", "Manual"),
            ("DL_User_Pref", "Speed"),
        ]);
        assert!(eval(&rho, &manual_speed).unwrap());
        assert!(sat.contains(&manual_speed));
        assert!(is_consistent(&rho, &sc).unwrap());
    }

    #[test]
    fn contradiction_is_inconsistent() {
        let sc = scope(&[("x", &["a", "b"])]);
        let p = Predicate::and(Predicate::eq_const("x", "a"), Predicate::neq_const("x", "a"));
        assert!(!is_consistent(&p, &sc).unwrap());
        assert!(is_consistent(&Predicate::True, &sc).unwrap());
    }

    #[test]
    fn satisfying_assignments_examples() {
        let limits = Limits::default();
        let sc = scope(&[("x", &["a", "b"])]);
        let p = Predicate::eq_const("x", "a");
        let sats = satisfying_assignments(&p, &sc, &limits).unwrap();
        assert_eq!(sats, vec![Configuration::from_pairs([("x", "a")])]);

        // empty scope: exactly one empty configuration
        let empty = VarScope::empty();
        let sats = satisfying_assignments(&Predicate::True, &empty, &limits).unwrap();
        assert_eq!(sats, vec![Configuration::empty()]);

        // the door-lock design scope has four configurations under true
        let des = scope(&[("Cp1", &["Auto", "Moff"]), ("Cp2", &["Speed", "Poff"])]);
        let sats = satisfying_assignments(&Predicate::True, &des, &limits).unwrap();
        assert_eq!(sats.len(), 4);
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let sc = scope(&[("x", &["a", "b"]), ("y", &["c", "d"])]);
        let all: Vec<_> = sc.assignments().map(|c| c.render(&sc)).collect();
        assert_eq!(all, vec!["x=a,y=c", "x=a,y=d", "x=b,y=c", "x=b,y=d"]);
    }

    #[test]
    fn budget_exceeded_is_a_capacity_error() {
        let sc = scope(&[("x", &["a", "b"]), ("y", &["c", "d"])]);
        let limits = Limits { enum_budget: 3, ..Limits::default() };
        let err = satisfying_assignments(&Predicate::True, &sc, &limits).unwrap_err();
        assert!(matches!(err, crate::error::Error::Capacity(_)));
    }

    #[test]
    fn var_eq_var_requires_identical_domains() {
        let sc = scope(&[("x", &["a", "b"]), ("y", &["a", "c"])]);
        let p = Predicate::eq_var("x", "y");
        assert!(matches!(p.validate(&sc), Err(ModelError::DomainMismatch(..))));
    }

    #[test]
    fn conjunction_intersects_satisfying_sets() {
        let limits = Limits::default();
        let sc = scope(&[("x", &["a", "b", "c"]), ("y", &["a", "b", "c"])]);
        let p = Predicate::neq_const("x", "a");
        let q = Predicate::eq_var("x", "y");
        let sp = satisfying_assignments(&p, &sc, &limits).unwrap();
        let sq = satisfying_assignments(&q, &sc, &limits).unwrap();
        let spq = satisfying_assignments(&Predicate::and(p, q), &sc, &limits).unwrap();
        let inter: Vec<_> = sp.iter().filter(|c| sq.contains(c)).cloned().collect();
        assert_eq!(spq, inter);
    }

    #[test]
    fn sat_route_agrees_with_enumeration_on_random_scopes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
        for _ in 0..200 {
            let nvars = rng.random_range(1..=4);
            let decls: Vec<VarDecl> = (0..nvars)
                .map(|i| {
                    let nvals = rng.random_range(1..=4);
                    VarDecl::new(format!("v{i}"), (0..nvals).map(|k| format!("c{k}")).collect())
                        .unwrap()
                })
                .collect();
            let sc = VarScope::new(decls).unwrap();
            let rand_atom = |rng: &mut rand_chacha::ChaCha8Rng| {
                let d = &sc.decls()[rng.random_range(0..sc.len())];
                let v = &d.domain[rng.random_range(0..d.domain.len())];
                if rng.random_bool(0.5) {
                    Predicate::eq_const(&d.name, v)
                } else {
                    Predicate::neq_const(&d.name, v)
                }
            };
            let mut p = rand_atom(&mut rng);
            for _ in 0..rng.random_range(0..4) {
                let q = rand_atom(&mut rng);
                p = match rng.random_range(0..4) {
                    0 => Predicate::and(p, q),
                    1 => Predicate::or(p, q),
                    2 => Predicate::implies(p, q),
                    _ => Predicate::not(p),
                };
            }
            let by_enum = is_consistent_enum(&p, &sc).unwrap();
            let by_sat = is_consistent_sat(&p, &sc);
            assert_eq!(by_enum, by_sat, "routes disagree on {p} over {} vars", sc.len());
        }
    }

    #[test]
    fn qualification_renames_scope_and_predicate() {
        let sc = doorlock_scope().qualified("DL");
        assert!(sc.get("DL.DL_Enable").is_some());
        let rho = doorlock_rho().qualify("DL");
        assert!(rho.validate(&sc).is_ok());
        assert_eq!(
            rho.to_string(),
            "DL.Transmission_dl = Manual => DL.DL_User_Pref = Speed"
        );
    }

    #[test]
    fn display_respects_precedence() {
        let p = Predicate::or(
            Predicate::and(Predicate::eq_const("x", "a"), Predicate::neq_const("y", "b")),
            Predicate::not(Predicate::eq_var("x", "y")),
        );
        assert_eq!(p.to_string(), "x = a && y != b || !(x = y)");
        // `=>` is right-associative, so the right-nested form needs no parens
        let q = Predicate::implies(
            Predicate::eq_const("x", "a"),
            Predicate::implies(Predicate::eq_const("y", "b"), Predicate::eq_const("x", "a")),
        );
        assert_eq!(q.to_string(), "x = a => y = b => x = a");
        let l = Predicate::implies(
            Predicate::implies(Predicate::eq_const("x", "a"), Predicate::eq_const("y", "b")),
            Predicate::eq_const("x", "a"),
        );
        assert_eq!(l.to_string(), "(x = a => y = b) => x = a");
    }
}
