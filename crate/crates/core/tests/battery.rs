use plocal::battery::run_battery;

#[test]
fn default_suite_passes() {
    let run = run_battery("default").unwrap();
    print!("{}", run.matrix());
    for item in &run.items {
        if let Some(r) = &item.report {
            assert!(r.mismatches.is_empty(), "{} p={}: {:?}", item.label, item.prime, r.mismatches);
        }
    }
    assert!(run.all_passed());
}
