//! Property-based checks of the language invariants.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splv::composition::{add_mappings, compose, handshake_product};
use splv::containment::{compute_conformance, contains};
use splv::limits::Limits;
use splv::varlang::{self, Configuration, Predicate, VarDecl, VarScope};

fn fixed_scope() -> VarScope {
    VarScope::new(vec![
        VarDecl::new("x", vec!["a".into(), "b".into(), "c".into()]).unwrap(),
        VarDecl::new("y", vec!["a".into(), "b".into(), "c".into()]).unwrap(),
        VarDecl::new("z", vec!["u".into(), "v".into()]).unwrap(),
    ])
    .unwrap()
}

fn atom_strategy() -> impl Strategy<Value = Predicate> {
    prop_oneof![
        (prop_oneof![Just("x"), Just("y")], prop_oneof![Just("a"), Just("b"), Just("c")])
            .prop_map(|(v, c)| Predicate::eq_const(v, c)),
        (prop_oneof![Just("x"), Just("y")], prop_oneof![Just("a"), Just("b"), Just("c")])
            .prop_map(|(v, c)| Predicate::neq_const(v, c)),
        prop_oneof![Just("u"), Just("v")].prop_map(|c| Predicate::eq_const("z", c)),
        Just(Predicate::eq_var("x", "y")),
        Just(Predicate::neq_var("x", "y")),
        Just(Predicate::True),
        Just(Predicate::False),
    ]
}

fn pred_strategy() -> impl Strategy<Value = Predicate> {
    atom_strategy().prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Predicate::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Predicate::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Predicate::implies(a, b)),
        ]
    })
}

proptest! {
    /// `a => b` evaluates exactly like `!a || b`.
    #[test]
    fn implication_is_or_of_negation(a in pred_strategy(), b in pred_strategy()) {
        let scope = fixed_scope();
        let imp = Predicate::implies(a.clone(), b.clone());
        let alt = Predicate::or(Predicate::not(a), b);
        for cfg in scope.assignments() {
            prop_assert_eq!(
                varlang::eval(&imp, &cfg).unwrap(),
                varlang::eval(&alt, &cfg).unwrap()
            );
        }
    }

    /// Consistency equals non-emptiness of the satisfying set, and the
    /// SAT-backed route agrees with enumeration.
    #[test]
    fn consistency_routes_agree(p in pred_strategy()) {
        let scope = fixed_scope();
        let sats = varlang::satisfying_assignments(&p, &scope, &Limits::default()).unwrap();
        let consistent = varlang::is_consistent(&p, &scope).unwrap();
        prop_assert_eq!(consistent, !sats.is_empty());
        prop_assert_eq!(splv::varlang::sat_route_consistency(&p, &scope), !sats.is_empty());
    }

    /// Conjunction intersects satisfying sets.
    #[test]
    fn conjunction_intersects(p in pred_strategy(), q in pred_strategy()) {
        let scope = fixed_scope();
        let limits = Limits::default();
        let sp = varlang::satisfying_assignments(&p, &scope, &limits).unwrap();
        let sq = varlang::satisfying_assignments(&q, &scope, &limits).unwrap();
        let spq = varlang::satisfying_assignments(
            &Predicate::and(p, q), &scope, &limits).unwrap();
        let inter: Vec<Configuration> =
            sp.into_iter().filter(|c| sq.contains(c)).collect();
        prop_assert_eq!(spq, inter);
    }

    /// Predicate rendering reparses to the same tree.
    #[test]
    fn predicate_display_round_trips(p in pred_strategy()) {
        let scope = fixed_scope();
        let text = p.to_string();
        let back = splv::syntax::parse_predicate(&text, &scope)
            .map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, p);
    }
}

/// Composition is commutative up to language equality of the variants.
#[test]
fn composition_commutes_up_to_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(271828);
    let limits = Limits::default();
    for _ in 0..40 {
        let e1: Vec<String> = vec!["h".into(), "x".into()];
        let e2: Vec<String> = vec!["h".into(), "y".into()];
        let a1 = common::random_fsmv(&mut rng, "A1", 3, &e1, "p");
        let a2 = common::random_fsmv(&mut rng, "A2", 3, &e2, "q");
        let rho12 = Predicate::True;
        let rho = Predicate::conjoin([a1.global.clone(), a2.global.clone()]);
        let union = a1.vars.union(&a2.vars).unwrap();
        if !varlang::is_consistent(&rho, &union).unwrap() {
            continue;
        }
        let ab = compose(&a1, &a2, &rho12).unwrap();
        let ba = compose(&a2, &a1, &rho12).unwrap();
        for pi in ab.valid_configs(&limits).unwrap() {
            let left = ab.project(&pi).unwrap().bounded_language(5);
            let right = ba.project(&pi).unwrap().bounded_language(5);
            assert_eq!(left, right);
        }
    }
}

/// If both features conform, then for every composite design
/// configuration and every requirement configuration in the added
/// mapping's image, the composed projections are bounded-contained.
#[test]
fn added_mappings_certify_bounded_containment() {
    let mut rng = ChaCha8Rng::seed_from_u64(1618);
    let limits = Limits::default();
    let mut images_checked = 0;
    for _ in 0..30 {
        let e1: Vec<String> = vec!["h".into(), "x".into()];
        let e2: Vec<String> = vec!["h".into(), "y".into()];
        let r1 = common::random_fsmv(&mut rng, "R1", 3, &e1, "m");
        let r2 = common::random_fsmv(&mut rng, "R2", 3, &e2, "n");
        // derived designs: same structure over renamed variables, so both
        // features conform by construction
        let rename = |m: &splv::fsmv::FsmvMachine, from: &str, to: &str| {
            // variables only ever appear as `<prefix>0` / `<prefix>1` tokens
            let mut text = splv::syntax::print_model(m);
            text = text.replace(&format!("{from}0"), &format!("{to}0"));
            text = text.replace(&format!("{from}1"), &format!("{to}1"));
            splv::syntax::parse_models(&text).unwrap().remove(0)
        };
        let d1 = rename(&r1, "m", "dm");
        let d2 = rename(&r2, "n", "dn");
        let phi1 = compute_conformance(&d1, &r1, &limits).unwrap();
        let phi2 = compute_conformance(&d2, &r2, &limits).unwrap();
        if !phi1.conforms() || !phi2.conforms() {
            continue; // a blocked handshake can starve a variant; skip
        }
        let rho_d = Predicate::conjoin([d1.global.clone(), d2.global.clone()]);
        let rho_r = Predicate::conjoin([r1.global.clone(), r2.global.clone()]);
        let added = add_mappings(&phi1, &phi2, &rho_d, &rho_r, limits.pair_budget).unwrap();
        let composed_d = compose(&d1, &d2, &Predicate::True).unwrap();
        let composed_r = compose(&r1, &r2, &Predicate::True).unwrap();
        for (key, image) in added.entries() {
            let d_variant = composed_d.project(key).unwrap();
            let d_lang = d_variant.bounded_language(6);
            for pi_r in image {
                let r_variant = composed_r.project(pi_r).unwrap();
                let r_lang = r_variant.bounded_language(6);
                assert!(
                    d_lang.is_subset(&r_lang),
                    "bounded containment must hold for mapped composites"
                );
                images_checked += 1;
            }
        }
    }
    assert!(images_checked > 50, "checked {images_checked} mapped pairs");
}

/// The conformance relation is insensitive to the order pairs are
/// examined: recomputing it from reversed configuration lists yields the
/// same entry set.
#[test]
fn conformance_mapping_is_enumeration_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(31415);
    let limits = Limits::default();
    for _ in 0..25 {
        let events: Vec<String> = vec!["a".into(), "b".into()];
        let des = common::random_fsmv(&mut rng, "D", 3, &events, "d");
        let req = common::random_fsmv(&mut rng, "R", 3, &events, "r");
        let mapping = compute_conformance(&des, &req, &limits).unwrap();
        // independent reconstruction, iterating both sides in reverse
        let mut pairs = BTreeSet::new();
        let mut d_configs = des.valid_configs(&limits).unwrap();
        let mut r_configs = req.valid_configs(&limits).unwrap();
        d_configs.reverse();
        r_configs.reverse();
        for pi_d in &d_configs {
            let dv = des.project(pi_d).unwrap();
            for pi_r in &r_configs {
                let rv = req.project(pi_r).unwrap();
                if contains(&dv, &rv).holds {
                    pairs.insert((pi_d.clone(), pi_r.clone()));
                }
            }
        }
        let mut from_mapping = BTreeSet::new();
        for (k, image) in mapping.entries() {
            for r in image {
                from_mapping.insert((k.clone(), r.clone()));
            }
        }
        assert_eq!(pairs, from_mapping);
    }
}

/// Lemma-style sanity for the handshake product: its bounded language is
/// exactly the bounded shuffle of the component languages.
#[test]
fn handshake_product_language_is_the_shuffle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5050);
    for _ in 0..40 {
        let a = common::random_fsm(&mut rng, "A", 3, &["h", "x"]);
        let b = common::random_fsm(&mut rng, "B", 3, &["h", "y"]);
        let product = handshake_product(&a, &b);
        let k = 5;
        let la = a.bounded_language(k);
        let lb = b.bounded_language(k);
        let sa: BTreeSet<String> = a.events.iter().cloned().collect();
        let sb: BTreeSet<String> = b.events.iter().cloned().collect();
        let mut expected: BTreeSet<Vec<String>> = BTreeSet::new();
        for w in splv::composition::shuffle_languages(&la, &sa, &lb, &sb) {
            if w.len() <= k {
                expected.insert(w);
            }
        }
        assert_eq!(product.bounded_language(k), expected);
    }
}
