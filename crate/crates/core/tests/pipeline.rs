use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subfactor_index5::catalog::{
    catalog_entries, reproduce_classification, reproduce_with, Fate, Report, ReportOptions,
};
use subfactor_index5::connections::SolveOptions;
use subfactor_index5::iso::random_relabeling;
use subfactor_index5::Execution;

fn seq() -> ReportOptions {
    ReportOptions {
        execution: Execution::Sequential,
        ..ReportOptions::default()
    }
}

fn invariant_labels(r: &Report) -> Vec<String> {
    r.invariants.iter().map(|i| i.to_string()).collect()
}

#[test]
fn seven_invariants_and_no_mismatches() {
    let r = reproduce_classification(ReportOptions::default()).unwrap();
    assert!(r.is_consistent(), "{:?}", r.mismatches);
    assert_eq!(r.invariants.len(), 7, "{:?}", invariant_labels(&r));
    assert_eq!(r.summary.external, 2);
}

#[test]
fn execution_modes_agree() {
    let a = reproduce_classification(seq()).unwrap();
    let b = reproduce_classification(ReportOptions::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
}

#[test]
fn dropping_a_candidate_does_not_change_the_count() {
    let entries: Vec<_> = catalog_entries().into_iter().filter(|e| e.name != "G_6").collect();
    let r = reproduce_with(&entries, seq()).unwrap();
    assert!(r.is_consistent());
    assert_eq!(r.invariants.len(), 7);
    assert!(r.records.iter().all(|rec| rec.name != "G_6"));
}

#[test]
fn forged_expectation_is_reported() {
    let mut entries = catalog_entries();
    let g1 = entries.iter_mut().find(|e| e.name == "G_1").unwrap();
    g1.expected_fate = Fate::RealizedUnique;
    let r = reproduce_with(&entries, seq()).unwrap();
    assert!(!r.is_consistent());
    assert_eq!(r.mismatches.len(), 1);
    assert_eq!(r.mismatches[0].name, "G_1");
    assert!(r.mismatches[0].to_string().contains("G_1"));
}

#[test]
fn survivors_survive_relabeling() {
    let base = reproduce_classification(seq()).unwrap();
    for seed in 0..2 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = catalog_entries();
        for e in entries.iter_mut() {
            e.pair = random_relabeling(&e.pair, &mut rng).apply(&e.pair);
        }
        let r = reproduce_with(&entries, seq()).unwrap();
        assert!(r.is_consistent(), "seed {seed}: {:?}", r.mismatches);
        assert_eq!(r.survivor_names(), base.survivor_names());
        assert_eq!(invariant_labels(&r), invariant_labels(&base));
    }
}

#[test]
fn report_serializations() {
    let r = reproduce_classification(seq()).unwrap();
    let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(json["index"], "5");
    let records = json["records"].as_array().unwrap();
    let g1 = records.iter().find(|x| x["name"] == "G_1").unwrap();
    let v = &g1["verdicts"][0];
    for key in ["check", "outcome", "witness", "paper_ref", "notes"] {
        assert!(v.get(key).is_some(), "verdict lacks {key}");
    }
    let names: BTreeSet<&str> = records.iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert!(names.contains("Gamma_5521"));
    let md = r.to_markdown();
    assert!(md.contains("G_13") && md.contains("S4<S5"));
}

#[test]
fn connection_evidence_is_optional_and_does_not_change_fates() {
    let plain = reproduce_classification(ReportOptions::default()).unwrap();
    assert!(plain.connections.is_empty());
    let opts = ReportOptions {
        connections: Some(SolveOptions {
            restarts: 4,
            ..SolveOptions::default()
        }),
        ..ReportOptions::default()
    };
    let with = reproduce_classification(opts).unwrap();
    assert_eq!(with.connections.len(), 5);
    let fates = |r: &Report| r.records.iter().map(|x| x.fate.clone()).collect::<Vec<_>>();
    assert_eq!(fates(&plain), fates(&with));
    let s4s5 = with.connections.iter().find(|c| c.canonical.name() == "S4<S5").unwrap();
    assert!(s4s5.converged > 0 && s4s5.orbit_count == 1);
    assert!(with.to_markdown().contains("numerical evidence"));
}
