use plocal::battery::default_entries;
use plocal::characters::FieldSpec;
use plocal::groupfile::parse_group;
use plocal::local::PGroupKind;
use plocal::report::{analyze, render_text, AnalysisReport, MetacyclicCase, TorsionPart};
use plocal::rho::SplitFormCase;
use plocal::Error;

fn closed(p: u64) -> FieldSpec {
    FieldSpec::algebraically_closed(p).unwrap()
}

fn run(doc: &str, p: u64) -> AnalysisReport {
    analyze(&parse_group(doc).unwrap(), p, closed(p)).unwrap()
}

fn battery_report(label: &str, p: u64) -> AnalysisReport {
    let entries = default_entries().unwrap();
    let e = entries.iter().find(|e| e.label == label).unwrap();
    analyze(&e.group, p, closed(p)).unwrap()
}

#[test]
fn group_files() {
    assert_eq!(parse_group(r#"{"degree": 3, "generators": [[1,2,0],[1,0,2]]}"#).unwrap().order(), 6);
    let a4 = parse_group(r#"{"degree": 4, "generators": [[1,0,3,2],[2,3,0,1],[1,2,0,3]]}"#).unwrap();
    assert_eq!(a4.order(), 12);
    let trivial = parse_group(r#"{"degree": 3, "generators": []}"#).unwrap();
    assert!(matches!(analyze(&trivial, 2, closed(2)), Err(Error::PrimeNotDividing { .. })));
}

#[test]
fn a4_at_two() {
    let r = run(r#"{"degree": 4, "generators": [[1,0,3,2],[2,3,0,1],[1,2,0,3]], "name": "A4"}"#, 2);
    assert_eq!(r.t_structure.torsion_free_rank, 1);
    assert_eq!(r.t_structure.generator.as_deref(), Some("[Omega(k)]"));
    assert_eq!(r.k_group.invariants, vec![3]);
    assert_eq!(r.pi1.abelianization.as_deref(), Some(&[3][..]));
    assert!(r.pi1.central_closed_form.applicable);
    assert_eq!(r.pi1.central_closed_form.agrees, Some(true));
    assert_eq!(r.rho.j_equals_derived_times_r, Some(true));
    assert!(r.weak_homs.as_ref().is_some_and(|w| w.failures.is_empty() && w.injective));
    assert!(matches!(r.t_structure.torsion, TorsionPart::Kernel { ref invariants } if invariants == &[3]));
    assert!(!r.mismatch);
}

#[test]
fn s3_at_three_is_cyclic() {
    let r = run(r#"{"degree": 3, "generators": [[1,2,0],[1,0,2]]}"#, 3);
    assert_eq!(r.sylow.kind, PGroupKind::Cyclic);
    assert_eq!(r.sylow.metacyclic_case, Some(MetacyclicCase::Cyclic));
    assert_eq!(r.k_group.invariants, vec![2]);
    assert!(matches!(r.t_structure.torsion, TorsionPart::CyclicExtension { ref k_invariants, .. } if k_invariants == &[2]));
}

#[test]
fn m27_by_inversion() {
    let r = battery_report("M27:C2", 3);
    assert_eq!(r.group.order, 54);
    assert_eq!(r.sylow.metacyclic_case, Some(MetacyclicCase::Split));
    assert!(!r.sylow.e_central);
    let split = r.pi1.split_closed_form.as_ref().unwrap();
    assert_eq!(split.case, SplitFormCase::NoncentralE);
    assert!(split.case_matches_parameters && split.agrees);
    assert_eq!(r.pi1.quotient_order, 2);
    assert_eq!(r.k_group.invariants, vec![2]);
    assert!(r.pi1.oracle_agreement);
    assert!(!r.mismatch);
}

#[test]
fn nonsplit_sylow_gives_hom_of_group() {
    let r = battery_report("nonsplit-729", 3);
    assert_eq!(r.sylow.metacyclic_case, Some(MetacyclicCase::NonsplitNonabelian));
    assert!(r.sylow.p_nilpotent);
    assert!(matches!(r.t_structure.torsion, TorsionPart::HomOfGroup { ref invariants } if invariants.is_empty()));
}

#[test]
fn order_81_presentation_recognizes_as_split() {
    let r = battery_report("nonsplit-81xC2", 3);
    let pres = r.sylow.recognition.as_ref().and_then(|rec| rec.presentation()).unwrap();
    assert_eq!((pres.m, pres.n, pres.l, pres.q), (3, 1, 2, 3));
    assert_eq!(r.sylow.metacyclic_case, Some(MetacyclicCase::Split));
    assert!(r.sylow.p_nilpotent);
}

#[test]
fn proper_core_is_transported() {
    let r = battery_report("SL(2,3)", 3);
    assert!(r.core.proper);
    assert_eq!(r.core.g0_order, 6);
    assert!(r.core.rerun_on_g0);
    assert!(r.notes.iter().any(|n| n.contains("was rerun on G0")));
    assert!(r.core.g0.iter().all(|&i| i < r.elements.len()));
}

#[test]
fn reports_are_deterministic() {
    let a = battery_report("S4", 2);
    let b = battery_report("S4", 2);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(render_text(&a), render_text(&b));
    assert_eq!(a.poset.component_count, 2);
    assert!(!a.fusion.controls_fusion);
}
