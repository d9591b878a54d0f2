//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use plocal::battery::{default_entries, run_battery, BatteryEntry, BatteryRun};
use plocal::characters::{build_weak_hom, characters_vanishing_on, verify_weak_hom, FieldSpec, WeakHomTable};
use plocal::metacyclic::{
    construct, power_rule, pprime_automorphism_exists, structural_comparison, validation_grid,
    MetacyclicPresentation, Recognition, AUTOMORPHISM_SEARCH_CAP,
};
use plocal::numtheory::{factorize, p_part};
use plocal::report::AnalysisReport;
use plocal::rho::rho2_sylow;
use plocal::{FiniteGroup, PLocalContext, QuotientGroup, Subgroup};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BATTERY_BUDGET: Duration = Duration::from_secs(60);
const WEAK_HOM_BUDGET: Duration = Duration::from_secs(30);
const GRID_BUDGET: Duration = Duration::from_secs(120);
const POWER_RULE_SAMPLES: usize = 1000;
const STRUCTURAL_SAMPLES: usize = 240;
const SEED: u64 = 20_241_018;

type Outcome = (bool, String);

fn battery() -> &'static (BatteryRun, Duration) {
    static RUN: OnceLock<(BatteryRun, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let t = Instant::now();
        let run = run_battery("default").expect("default suite");
        (run, t.elapsed())
    })
}

fn entries() -> &'static [BatteryEntry] {
    static ENTRIES: OnceLock<Vec<BatteryEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| default_entries().expect("battery groups"))
}

fn reports() -> impl Iterator<Item = (&'static str, u64, &'static AnalysisReport)> {
    battery().0.items.iter().map(|i| {
        (i.label.as_str(), i.prime, i.report.as_ref().unwrap_or_else(|| panic!("{} failed: {:?}", i.label, i.error)))
    })
}

fn report(label: &str, p: u64) -> &'static AnalysisReport {
    reports().find(|(l, q, _)| *l == label && *q == p).map(|(_, _, r)| r).expect("battery item")
}

fn group(label: &str) -> &'static FiniteGroup {
    &entries().iter().find(|e| e.label == label).expect("battery group").group
}

fn sub(g: &FiniteGroup, ids: &[usize]) -> Subgroup {
    let s = g.generate(ids.iter().copied());
    assert_eq!(s.order(), ids.len(), "id list is not a subgroup");
    s
}

/// Multiset of prime-power cyclic factors away from `p`.
fn pprime_primary(invariants: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = invariants
        .iter()
        .flat_map(|&d| factorize(d))
        .filter(|&(r, _)| r != p)
        .map(|(r, e)| r.pow(e))
        .collect();
    out.sort_unstable();
    out
}

fn product_set(g: &FiniteGroup, a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().flat_map(|&x| b.iter().map(move |&y| g.mul(x, y))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------

fn closed_form_equivalence() -> Outcome {
    let (_, elapsed) = battery();
    let expected_r: BTreeMap<(&str, u64), usize> = [
        (("S3", 3), 3),
        (("C3xC3", 3), 9),
        (("A4", 2), 4),
        (("A5", 2), 4),
        (("SL(2,3)", 2), 8),
        (("SL(2,3)", 3), 3),
        (("C3xC3:inverter", 3), 9),
    ]
    .into();
    let mut checked = Vec::new();
    let mut bad = Vec::new();
    for (label, p, r) in reports() {
        let cf = &r.pi1.central_closed_form;
        if !cf.applicable {
            continue;
        }
        checked.push(format!("{label}/p{p}"));
        if cf.subgroup != r.pi1.r || expected_r.get(&(label, p)) != Some(&r.pi1.r.len()) {
            bad.push(format!("{label}/p{p}"));
        }
    }
    let required = expected_r.keys().all(|&(l, p)| checked.contains(&format!("{l}/p{p}")));
    let ok = bad.is_empty() && required && *elapsed < BATTERY_BUDGET;
    (ok, format!("{} groups with both flags, mismatches {bad:?}, battery {elapsed:.2?}", checked.len()))
}

fn split_form_equivalence() -> Outcome {
    let expected_quotient = [("M27:C2", 2), ("M81:C2", 2), ("M125:C4", 4)];
    let mut lines = Vec::new();
    let mut ok = true;
    for (label, q) in expected_quotient {
        let p = if label == "M125:C4" { 5 } else { 3 };
        let r = report(label, p);
        let Some(split) = &r.pi1.split_closed_form else {
            return (false, format!("{label}: split closed form not applied"));
        };
        let Some(Recognition::Metacyclic { presentation: pres, .. }) = &r.sylow.recognition else {
            return (false, format!("{label}: not recognized"));
        };
        let noncentral = pres.m == pres.n + pres.l;
        let tag_ok = noncentral == (format!("{:?}", split.case) == "NoncentralE");
        let same = split.subgroup == r.pi1.r;
        ok &= tag_ok && same && r.pi1.quotient_order == q;
        lines.push(format!("{label} |N/R|={} case {:?}", r.pi1.quotient_order, split.case));
    }
    (ok, lines.join(", "))
}

fn control_of_fusion() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for (label, p, r) in reports() {
        let metacyclic = matches!(
            r.sylow.recognition,
            Some(Recognition::Metacyclic { .. } | Recognition::Cyclic { .. })
        );
        if p % 2 == 1 && metacyclic {
            count += 1;
            if !r.fusion.controls_fusion {
                bad.push(label);
            }
        }
    }
    // negative control, with the witness re-checked by brute force
    let s4 = group("S4");
    let r = report("S4", 2);
    let witness = r.fusion.violation.as_ref().expect("S4 has a fusion witness");
    let s = sub(s4, &r.sylow.subgroup);
    let q = sub(s4, &witness.q);
    let x = witness.g;
    let into_s = q.iter().all(|e| s.contains(s4.conj(x, e)));
    let realized = r.fusion.normalizer.iter().any(|&n| {
        let c = s4.mul(s4.inv(n), x);
        q.iter().all(|e| s4.conj(c, e) == e)
    });
    let negative = !r.fusion.controls_fusion && into_s && !realized;
    (
        bad.is_empty() && count >= 10 && negative,
        format!("{count} odd metacyclic cases control fusion, failures {bad:?}; S4/p2 witness |Q|={} verified={negative}", q.order()),
    )
}

fn pprime_consistency() -> Outcome {
    let mut bad = Vec::new();
    for (label, p, r) in reports() {
        let g = group(label);
        let n = sub(g, &r.pi1.n);
        let rr = sub(g, &r.pi1.r);
        let rho = sub(g, &r.rho.rho_infinity);
        let top = g.join(&g.derived_subgroup(&n), &rr);
        let nr = QuotientGroup::new(g, &n, &top).and_then(|q| q.abelian_invariants()).unwrap();
        let nrho = QuotientGroup::new(g, &n, &rho).and_then(|q| q.abelian_invariants()).unwrap();
        if pprime_primary(&nr, p) != pprime_primary(&nrho, p) || !r.rho.pprime_consistent {
            bad.push(format!("{label}/p{p}"));
        }
    }
    (bad.is_empty(), format!("{} battery items, disagreements {bad:?}", battery().0.items.len()))
}

fn restricted_rho() -> Outcome {
    let bad: Vec<String> =
        reports().filter(|(_, _, r)| !r.rho.restricted_agrees).map(|(l, p, _)| format!("{l}/p{p}")).collect();
    (bad.is_empty(), format!("{} battery items, disagreements {bad:?}", battery().0.items.len()))
}

fn j_equals_derived_times_r() -> Outcome {
    let mut count = 0;
    let mut bad = Vec::new();
    for (label, p, r) in reports() {
        if !r.pi1.central_closed_form.applicable {
            continue;
        }
        count += 1;
        let g = group(label);
        let n = sub(g, &r.pi1.n);
        let derived = g.derived_subgroup(&n).to_vec();
        if product_set(g, &derived, &r.pi1.r) != r.k_group.j {
            bad.push(format!("{label}/p{p}"));
        }
    }
    (bad.is_empty() && count > 0, format!("{count} groups, differences {bad:?}"))
}

/// Both weak homomorphism axioms checked directly from conjugates of `S`.
fn brute_force_weak_hom(g: &FiniteGroup, s: &Subgroup, table: &WeakHomTable) -> bool {
    let conj: Vec<Subgroup> = (0..g.order()).map(|x| g.intersection(s, &g.conjugate(x, s))).collect();
    for x in 0..g.order() {
        if (s.contains(x) || conj[x].order() == 1) && table.values[x] != 0 {
            return false;
        }
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            let ab = g.mul(a, b);
            if g.intersection(&conj[a], &conj[ab]).order() > 1
                && (table.values[a] + table.values[b]) % table.modulus != table.values[ab]
            {
                return false;
            }
        }
    }
    true
}

fn weak_hom_certification() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (label, p, r) in reports() {
        if !r.pi1.central_closed_form.applicable {
            continue;
        }
        let g = group(label);
        let work = if r.core.proper { g.subgroup_as_group(&sub(g, &r.core.g0)).unwrap() } else { g.clone() };
        let t = Instant::now();
        let ctx = PLocalContext::new(&work, p).unwrap();
        let rho2 = rho2_sylow(&ctx).unwrap();
        let field = FieldSpec::algebraically_closed(p).unwrap();
        let chars = characters_vanishing_on(&work, ctx.n(), &rho2, field).unwrap();
        let mut tables = Vec::new();
        for chi in &chars {
            let theta = build_weak_hom(&ctx, chi).unwrap();
            ok &= verify_weak_hom(&ctx, &theta).is_none();
            ok &= brute_force_weak_hom(&work, ctx.sylow(), &theta);
            tables.push(theta);
        }
        let mut distinct: Vec<&Vec<u64>> = tables.iter().map(|t| &t.values).collect();
        distinct.sort();
        distinct.dedup();
        ok &= distinct.len() == tables.len();
        // negative control: a nonzero value on S must be rejected by both checks
        if let Some(theta) = tables.iter().find(|t| t.values.iter().any(|&v| v != 0)) {
            let mut bad = theta.clone();
            let s_elem = ctx.sylow().iter().find(|&x| x != work.identity()).unwrap();
            bad.values[s_elem] = 1 % bad.modulus.max(2);
            ok &= verify_weak_hom(&ctx, &bad).is_some() && !brute_force_weak_hom(&work, ctx.sylow(), &bad);
        }
        let elapsed = t.elapsed();
        ok &= elapsed < WEAK_HOM_BUDGET;
        lines.push(format!("{label}/p{p}: {} chars {elapsed:.1?}", chars.len()));
    }
    (ok, lines.join(", "))
}

fn structural_grid() -> Outcome {
    let t = Instant::now();
    let grid = validation_grid(&[3, 5], 6);
    let mut failing = Vec::new();
    for pres in &grid {
        let mg = construct(pres).unwrap();
        let cmp = structural_comparison(&mg).unwrap();
        let bad = cmp.mismatches();
        if !bad.is_empty() {
            failing.push(format!("({},{},{},{},{}) [{}]", pres.p, pres.m, pres.n, pres.l, pres.q, bad.join("; ")));
        }
    }
    let elapsed = t.elapsed();
    (
        failing.is_empty() && grid.len() == 58 && elapsed < GRID_BUDGET,
        format!("{} tuples in {elapsed:.1?}, failing: {}", grid.len(), if failing.is_empty() { "none".into() } else { failing.join(", ") }),
    )
}

fn power_rule_agreement() -> Outcome {
    let m27 = MetacyclicPresentation::split(3, 2, 1, 1).unwrap();
    let mg = construct(&m27).unwrap();
    let g = &mg.group;
    let mut exhaustive = 0;
    let mut ok = true;
    for a in 0..9 {
        for c in 0..3 {
            for alpha in 0..=27 {
                let rule = power_rule(a, c, alpha, &m27).unwrap();
                ok &= mg.element(rule) == g.pow(mg.element((a, c)), alpha);
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut sampled = 0;
    for (p, m, n, l) in [(3, 4, 2, 2), (5, 3, 3, 2)] {
        let pres = MetacyclicPresentation::split(p, m, n, l).unwrap();
        let mg = construct(&pres).unwrap();
        let g = &mg.group;
        for _ in 0..POWER_RULE_SAMPLES {
            let a = rng.gen_range(0..pres.x_order());
            let c = rng.gen_range(0..pres.y_period());
            let alpha = rng.gen_range(0..3 * pres.order());
            let rule = power_rule(a, c, alpha, &pres).unwrap();
            ok &= mg.element(rule) == g.pow(mg.element((a, c)), alpha);
            sampled += 1;
        }
    }
    (ok, format!("{exhaustive} exhaustive on M27, {sampled} sampled on (3,4,2,2) and (5,3,3,2)"))
}

fn random_subgroup(g: &FiniteGroup, within: &Subgroup, rng: &mut ChaCha8Rng, gens: usize) -> Subgroup {
    let elems = within.to_vec();
    g.generate((0..gens).map(|_| elems[rng.gen_range(0..elems.len())]))
}

fn structural_utilities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut configs = 0;
    let mut failures = Vec::new();
    let groups: Vec<(&BatteryEntry, u64)> =
        entries().iter().flat_map(|e| e.primes.iter().map(move |&p| (e, p))).collect();
    // axioms, Lagrange and quotient orders on every group
    for (e, _) in &groups {
        let g = &e.group;
        let n = g.order();
        let id = g.identity();
        let triples: Vec<(usize, usize, usize)> = if n <= 60 {
            (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c)))).collect()
        } else {
            (0..3000).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
        };
        let assoc = triples.iter().all(|&(a, b, c)| g.mul(g.mul(a, b), c) == g.mul(a, g.mul(b, c)));
        let ident = (0..n).all(|a| g.mul(a, id) == a && g.mul(id, a) == a && g.mul(a, g.inv(a)) == id);
        if !assoc || !ident {
            failures.push(format!("{} axioms", e.label));
        }
    }
    while configs < STRUCTURAL_SAMPLES {
        let (e, p) = groups[rng.gen_range(0..groups.len())];
        let g = &e.group;
        let whole = g.whole();
        // Dedekind: A ≤ C gives A(B ∩ C) = AB ∩ C
        let c = random_subgroup(g, &whole, &mut rng, 2);
        let a = random_subgroup(g, &c, &mut rng, 1);
        let b = random_subgroup(g, &whole, &mut rng, 2);
        let left = product_set(g, &a.to_vec(), &g.intersection(&b, &c).to_vec());
        let mut right = product_set(g, &a.to_vec(), &b.to_vec());
        right.retain(|&x| c.contains(x));
        if left != right {
            failures.push(format!("{} Dedekind", e.label));
        }
        for h in [&a, &b, &c] {
            if g.order() % h.order() != 0 {
                failures.push(format!("{} Lagrange", e.label));
            }
        }
        // Frattini argument: H ⊴ G, P ∈ Syl_r(H) gives G = H N_G(P)
        let h = g.normal_closure(&whole, [rng.gen_range(0..g.order())]);
        let q = QuotientGroup::new(g, &whole, &h).unwrap();
        if q.order() * h.order() != g.order() {
            failures.push(format!("{} quotient order", e.label));
        }
        for (r, _) in factorize(h.order() as u64) {
            let pr = g.sylow_in(&h, r).unwrap();
            if pr.order() as u64 != p_part(h.order() as u64, r) {
                failures.push(format!("{} Sylow order", e.label));
            }
            let np = g.normalizer(&pr);
            if product_set(g, &h.to_vec(), &np.to_vec()).len() != g.order() {
                failures.push(format!("{} Frattini argument", e.label));
            }
        }
        // Φ(S) ⊴ S with elementary abelian quotient
        let s = g.sylow_p(p).unwrap();
        let phi = g.frattini_subgroup(&s, p);
        let elementary = QuotientGroup::new(g, &s, &phi)
            .map(|q| q.is_abelian() && (0..q.order()).all(|x| p % q.element_order(x) == 0 || q.element_order(x) == 1))
            .unwrap_or(false);
        if !elementary {
            failures.push(format!("{} Frattini subgroup", e.label));
        }
        configs += 1;
    }
    failures.dedup();
    (failures.is_empty(), format!("{configs} sampled configurations over {} groups, failures {failures:?}", groups.len()))
}

fn strongly_embedded_detection() -> Outcome {
    let a5 = group("A5");
    let r = report("A5", 2);
    let h = sub(a5, &r.core.g0);
    // brute force: 2 ∤ |H ∩ gHg⁻¹| for g ∉ H
    let embedded = h.order().is_multiple_of(2)
        && (0..a5.order()).filter(|&x| !h.contains(x)).all(|x| a5.intersection(&h, &a5.conjugate(x, &h)).order() % 2 == 1);
    let transported = r.core.rerun_on_g0
        && r.pi1.r.iter().chain(&r.pi1.n).chain(&r.k_group.j).all(|x| h.contains(*x))
        && r.notes.iter().any(|n| n.contains("rerun on G0"));
    let a5_ok = r.core.proper && r.core.g0_order == 12 && r.core.strongly_embedded == Some(true) && embedded && transported;
    let a4 = report("A4", 2);
    let s3 = report("S3", 3);
    let full = !a4.core.proper && a4.core.g0_order == 12 && !s3.core.proper && s3.core.g0_order == 6;
    (a5_ok && full, format!("A5/p2 G0 order {} certified={embedded} transported={transported}; A4 and S3 have G0 = G: {full}", r.core.g0_order))
}

fn is_p_nilpotent_brute(g: &FiniteGroup, p: u64) -> bool {
    let pprime: Vec<usize> = (0..g.order()).filter(|&x| !g.element_order(x).is_multiple_of(p)).collect();
    let closed = pprime.iter().all(|&a| pprime.iter().all(|&b| !g.element_order(g.mul(a, b)).is_multiple_of(p)));
    closed && pprime.len() as u64 * p_part(g.order() as u64, p) == g.order() as u64
}

fn nonsplit_automorphisms() -> Outcome {
    let pres = MetacyclicPresentation::new(3, 2, 2, 1, 1).unwrap();
    let mg = construct(&pres).unwrap();
    let witness = pprime_automorphism_exists(&mg, AUTOMORPHISM_SEARCH_CAP).unwrap();
    let mut nilpotent = true;
    for label in ["nonsplit-81", "nonsplit-81xC2"] {
        nilpotent &= report(label, 3).sylow.p_nilpotent && is_p_nilpotent_brute(group(label), 3);
    }
    let detail = match &witness {
        None => "no p'-automorphism".to_string(),
        Some(w) => format!("p'-automorphism of order {} found: {:?}", w.order, w.action),
    };
    (witness.is_none() && nilpotent, format!("(3,2,2,1,1): {detail}; groups over it p-nilpotent: {nilpotent}"))
}

fn nonsplit_729_info() -> String {
    let pres = MetacyclicPresentation::new(3, 3, 3, 1, 2).unwrap();
    let mg = construct(&pres).unwrap();
    match pprime_automorphism_exists(&mg, 729).unwrap() {
        None => "(3,3,3,1,2) admits no p'-automorphism".into(),
        Some(w) => format!("(3,3,3,1,2) has a p'-automorphism of order {}", w.order),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("central closed form equals R", closed_form_equivalence),
        ("split closed form equals R", split_form_equivalence),
        ("normalizer controls fusion", control_of_fusion),
        ("p'-parts of N/R and N/rho", pprime_consistency),
        ("rho restricted to Omega1", restricted_rho),
        ("J = N'R", j_equals_derived_times_r),
        ("weak homomorphism certification", weak_hom_certification),
        ("metacyclic structure grid", structural_grid),
        ("power rule", power_rule_agreement),
        ("structural utilities", structural_utilities),
        ("strongly embedded detection", strongly_embedded_detection),
        ("nonsplit has no p'-automorphism", nonsplit_automorphisms),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| (false, format!("panicked: {:?}", e.downcast_ref::<String>().map(String::as_str).or(e.downcast_ref::<&str>().copied()))));
        if !ok {
            failed += 1;
        }
        println!("{} {:>2} {title}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("INFO {}", nonsplit_729_info());
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
