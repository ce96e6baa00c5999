//! Corpus-wide checks: variant counts, conformance of the shipped models,
//! and print/parse round-trips over every model and manifest file.

mod common;

use splv::spl::{check_spl, load_machine, load_manifest, CheckOptions, SplMode};
use splv::syntax::{parse_manifest, parse_models, print_model};
use splv::Limits;

#[test]
fn ecpl_design_variant_counts() {
    let limits = Limits::default();
    let expected = [
        ("ecpl/des_pl.fsmv", 8),
        ("ecpl/des_ldcl.fsmv", 8),
        ("doorlock/des_dl.fsmv", 4),
        ("ecpl/des_du.fsmv", 7),
        ("ecpl/des_al.fsmv", 3),
        ("ecpl/des_pcu.fsmv", 3),
        ("ecpl/des_tsl.fsmv", 8),
    ];
    for (path, count) in expected {
        let m = load_machine(&common::models_dir().join(path)).unwrap();
        assert_eq!(m.valid_configs(&limits).unwrap().len(), count, "{path}");
    }
    // the requirement of the door-lock feature admits six configurations
    let req = load_machine(&common::models_dir().join("doorlock/req_dl.fsmv")).unwrap();
    assert_eq!(req.valid_configs(&limits).unwrap().len(), 6);
}

#[test]
fn bspl_design_variant_counts() {
    let limits = Limits::default();
    // the user-interface model admits four variants from its two
    // calibration bits (the model file documents the count)
    let expected: [(&str, usize); 25] = [
        ("ui", 4),
        ("cb", 3),
        ("wm", 8),
        ("dm", 2),
        ("ps", 3),
        ("lg", 1),
        ("al", 1),
        ("cap", 2),
        ("pb", 2),
        ("pbaw", 2),
        ("cmer", 2),
        ("me", 2),
        ("it", 2),
        ("ltob", 1),
        ("ls", 2),
        ("mtu", 2),
        ("cmlw", 1),
        ("ltsb", 3),
        ("ab", 1),
        ("rb", 1),
        ("cdd", 2),
        ("cc", 1),
        ("fw", 1),
        ("ccp", 2),
        ("ucd", 2),
    ];
    for (stem, count) in expected {
        let m = load_machine(&common::models_dir().join(format!("bspl/des_{stem}.fsmv"))).unwrap();
        assert_eq!(m.valid_configs(&limits).unwrap().len(), count, "des_{stem}");
    }
}

#[test]
fn corpus_models_round_trip_through_the_printer() {
    let mut checked = 0;
    for dir in ["doorlock", "ecpl", "bspl"] {
        for entry in std::fs::read_dir(common::models_dir().join(dir)).unwrap() {
            let path = entry.unwrap().path();
            let Some(ext) = path.extension() else { continue };
            let text = std::fs::read_to_string(&path).unwrap();
            if ext == "fsmv" {
                let machines = parse_models(&text).unwrap();
                for m in &machines {
                    let reparsed = parse_models(&print_model(m)).unwrap();
                    assert_eq!(&reparsed[0], m, "{}", path.display());
                    checked += 1;
                }
            } else if ext == "spl" {
                // manifests reparse to the same structure
                let raw = parse_manifest(&text).unwrap();
                let features: Vec<(String, String, String)> = raw
                    .features
                    .iter()
                    .map(|f| (f.name.clone(), f.req_path.clone(), f.des_path.clone()))
                    .collect();
                let manifest = load_manifest(&path).unwrap();
                let printed = splv::syntax::print_manifest(
                    &raw.name,
                    &features,
                    &manifest.req_constraints,
                    &manifest.des_constraints,
                );
                let again = parse_manifest(&printed).unwrap();
                assert_eq!(again.name, raw.name);
                assert_eq!(again.features.len(), raw.features.len());
                checked += 1;
            }
        }
    }
    assert!(checked >= 60, "the corpus should cover all models, checked {checked}");
}

#[test]
fn every_corpus_manifest_cross_checks_where_budgets_allow() {
    // monolithic and enumeration runs are capacity-guarded; modes that
    // complete must agree with the symbolic verdict
    let manifests = [
        ("ecpl/ecpl-dl-du.spl", false),
        ("ecpl/ecpl-dl-du-fixed.spl", true),
        ("ecpl/ecpl.spl", true),
        ("bspl/bspl.spl", true),
    ];
    for (path, expect_conform) in manifests {
        let manifest = load_manifest(&common::models_dir().join(path)).unwrap();
        let mut opts = CheckOptions::default();
        // BSPL has ~3.5M composite design configurations; raise the
        // enumeration budget so the oracle can sweep them
        opts.limits.enum_budget = 1 << 23;
        let qbf = check_spl(&manifest, SplMode::Qbf, &opts).unwrap();
        assert_eq!(qbf.conforms(), expect_conform, "{path} (qbf)");
        for mode in [SplMode::Monolithic, SplMode::Enumerate] {
            match check_spl(&manifest, mode, &opts) {
                Ok(out) => assert_eq!(out.conforms(), expect_conform, "{path} ({mode:?})"),
                Err(splv::Error::Capacity(_)) => {} // documented: out of budget
                Err(e) => panic!("{path} ({mode:?}): unexpected error {e}"),
            }
        }
    }
}

/// The feature-level conformance of every shipped pair (the defective
/// door-lock design is the deliberate exception tested elsewhere).
#[test]
fn corpus_feature_pairs_conform() {
    let limits = Limits::default();
    for manifest_path in ["ecpl/ecpl.spl", "bspl/bspl.spl"] {
        let manifest = load_manifest(&common::models_dir().join(manifest_path)).unwrap();
        for f in &manifest.features {
            let mapping =
                splv::containment::compute_conformance(&f.design, &f.requirement, &limits)
                    .unwrap();
            assert!(mapping.conforms(), "{manifest_path}: feature {}", f.name);
        }
    }
}
