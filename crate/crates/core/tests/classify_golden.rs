use std::path::PathBuf;

use crlab::classify::{
    check_admissible, compare_with_table, crosscheck_real_tables, expand_rows, load_table,
    standard_types,
};
use crlab::rootsys::{build_root_system, RootSystemType, SigmaSet};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden").join(name)
}

#[test]
fn table3_matches_enumeration_to_rank_eight() {
    let rows = load_table(&golden("table3.json")).unwrap();
    let report = compare_with_table(&standard_types(8), &rows).unwrap();
    assert!(report.missing_from_table.is_empty(), "{:?}", report.missing_from_table);
    assert!(report.missing_from_catalog.is_empty(), "{:?}", report.missing_from_catalog);
    assert_eq!(report.errata.len(), 1);
}

#[test]
fn every_table3_instance_is_admissible() {
    let rows = load_table(&golden("table3.json")).unwrap();
    for e in expand_rows(&rows, 8).unwrap() {
        let i = &e.instance;
        let rs = build_root_system(RootSystemType::new(i.family, i.rank).unwrap());
        let s1 = SigmaSet::new(i.sigma1.iter().copied(), i.rank).unwrap();
        let s2 = SigmaSet::new(i.sigma2.iter().copied(), i.rank).unwrap();
        assert!(check_admissible(&rs, &s1, &s2).unwrap().admissible, "{i}");
    }
}

#[test]
fn negative_controls_rejected() {
    let rows = load_table(&golden("table3_negative.json")).unwrap();
    let expanded = expand_rows(&rows, 8).unwrap();
    assert_eq!(expanded.len(), rows.len());
    for e in expanded {
        let i = &e.instance;
        let rs = build_root_system(RootSystemType::new(i.family, i.rank).unwrap());
        let s1 = SigmaSet::new(i.sigma1.iter().copied(), i.rank).unwrap();
        let s2 = SigmaSet::new(i.sigma2.iter().copied(), i.rank).unwrap();
        assert!(!check_admissible(&rs, &s1, &s2).unwrap().admissible, "{i}");
    }
}

#[test]
fn real_tables_land_in_catalog() {
    let rows = load_table(&golden("tables12.json")).unwrap();
    let report = crosscheck_real_tables(&rows, 8).unwrap();
    assert!(report.instances > 100);
    assert!(report.misses.is_empty(), "{:#?}", report.misses);
}

#[test]
fn corrupted_row_reported() {
    let text = r#"[{"real_form":"sp(4,R)","algebra":{"family":"C","rank":2},"sigma1":[1],"sigma2":[1]}]"#;
    let rows = crlab::classify::parse_table(text).unwrap();
    let report = crosscheck_real_tables(&rows, 8).unwrap();
    assert_eq!(report.misses.len(), 1);
}
