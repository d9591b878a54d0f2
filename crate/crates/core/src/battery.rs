//! Built-in suites of groups run through the full pipeline.

use rayon::prelude::*;
use serde::Serialize;

use crate::characters::FieldSpec;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::metacyclic::{
    construct, construct_extension, structural_comparison, validation_grid, AutActionData,
    MetacyclicPresentation,
};
use crate::perm::Permutation;
use crate::report::{analyze, AnalysisReport};

pub const SUITES: [&str; 2] = ["default", "metacyclic-grid"];

pub struct BatteryEntry {
    pub label: String,
    pub group: FiniteGroup,
    pub primes: Vec<u64>,
}

fn perm_group(name: &str, degree: usize, cycles: &[&[&[usize]]]) -> Result<FiniteGroup> {
    let gens = cycles
        .iter()
        .map(|c| Permutation::from_cycles(degree, c))
        .collect::<Result<Vec<_>>>()?;
    Ok(FiniteGroup::closure(degree, &gens)?.with_name(name))
}

/// `SL(2,3)` acting on the eight nonzero vectors of `F₃²`.
pub fn sl23() -> Result<FiniteGroup> {
    let vectors: Vec<(usize, usize)> =
        (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).filter(|&v| v != (0, 0)).collect();
    let act = |m: [[usize; 2]; 2]| {
        let images: Vec<usize> = vectors
            .iter()
            .map(|&(a, b)| {
                let w = ((m[0][0] * a + m[0][1] * b) % 3, (m[1][0] * a + m[1][1] * b) % 3);
                vectors.iter().position(|&v| v == w).expect("nonzero image")
            })
            .collect();
        Permutation::from_images(&images)
    };
    let gens = [act([[1, 1], [0, 1]])?, act([[0, 2], [1, 0]])?];
    Ok(FiniteGroup::closure(8, &gens)?.with_name("SL(2,3)"))
}

fn metacyclic(name: &str, pres: MetacyclicPresentation) -> Result<FiniteGroup> {
    Ok(construct(&pres)?.group.with_name(name))
}

fn extension(name: &str, pres: MetacyclicPresentation, phi: AutActionData, k: u64) -> Result<FiniteGroup> {
    Ok(construct_extension(&pres, phi, k)?.group.with_name(name))
}

/// The default battery in declaration order.
pub fn default_entries() -> Result<Vec<BatteryEntry>> {
    let inverse = |pres: &MetacyclicPresentation| AutActionData { a: pres.x_order() - 1, ..AutActionData::identity() };
    let m27 = MetacyclicPresentation::split(3, 2, 1, 1)?;
    let nonsplit81 = MetacyclicPresentation::new(3, 2, 2, 1, 1)?;
    let m81 = MetacyclicPresentation::new(3, 3, 1, 2, 3)?;
    let m125 = MetacyclicPresentation::new(5, 2, 1, 1, 2)?;
    let nonsplit729 = MetacyclicPresentation::new(3, 3, 3, 1, 2)?;
    let entry = |label: &str, group: FiniteGroup, primes: &[u64]| BatteryEntry {
        label: label.to_string(),
        group,
        primes: primes.to_vec(),
    };
    Ok(vec![
        entry("S3", perm_group("S3", 3, &[&[&[0, 1, 2]], &[&[0, 1]]])?, &[3]),
        entry("C3xC3", perm_group("C3xC3", 6, &[&[&[0, 1, 2]], &[&[3, 4, 5]]])?, &[3]),
        entry("A4", perm_group("A4", 4, &[&[&[0, 1], &[2, 3]], &[&[0, 1, 2]]])?, &[2]),
        entry("A5", perm_group("A5", 5, &[&[&[0, 1, 2, 3, 4]], &[&[0, 1, 2]]])?, &[2]),
        entry("S4", perm_group("S4", 4, &[&[&[0, 1, 2, 3]], &[&[0, 1]]])?, &[2]),
        entry("SL(2,3)", sl23()?, &[2, 3]),
        entry("M27", metacyclic("M27", m27)?, &[3]),
        entry("M27:C2", extension("M27:C2", m27, inverse(&m27), 2)?, &[3]),
        entry("nonsplit-81", metacyclic("nonsplit-81", nonsplit81)?, &[3]),
        entry(
            "nonsplit-81xC2",
            extension("nonsplit-81xC2", nonsplit81, AutActionData::identity(), 2)?,
            &[3],
        ),
        entry(
            "C3xC3:inverter",
            perm_group("C3xC3:inverter", 6, &[&[&[0, 1, 2]], &[&[3, 4, 5]], &[&[1, 2], &[4, 5]]])?,
            &[3],
        ),
        entry("M81:C2", extension("M81:C2", m81, inverse(&m81), 2)?, &[3]),
        entry(
            "M125:C4",
            extension("M125:C4", m125, AutActionData { a: 7, ..AutActionData::identity() }, 4)?,
            &[5],
        ),
        entry("nonsplit-729", metacyclic("nonsplit-729", nonsplit729)?, &[3]),
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryItem {
    pub label: String,
    pub prime: u64,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<AnalysisReport>,
}

impl BatteryItem {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.checks.iter().all(|c| c.passed)
    }

    pub fn mismatch(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.mismatch)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BatteryRun {
    pub suite: String,
    pub items: Vec<BatteryItem>,
}

impl BatteryRun {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(BatteryItem::passed)
    }

    pub fn any_mismatch(&self) -> bool {
        self.items.iter().any(BatteryItem::mismatch)
    }

    pub fn any_error(&self) -> bool {
        self.items.iter().any(|i| i.error.is_some())
    }

    /// One line per item listing each check as PASS or FAIL.
    pub fn matrix(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            let status = if item.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} p={}", item.label, item.prime));
            for c in &item.checks {
                out.push_str(&format!(" {}={}", c.name, if c.passed { "ok" } else { "FAIL" }));
            }
            if let Some(e) = &item.error {
                out.push_str(&format!(" error: {e}"));
            }
            out.push('\n');
        }
        out
    }
}

fn report_checks(r: &AnalysisReport) -> Vec<Check> {
    let mut checks = vec![
        Check::new("no-mismatch", !r.mismatch),
        Check::new("oracle-agreement", r.pi1.oracle_agreement),
        Check::new("witnesses", r.pi1.witnesses_verified),
        Check::new("rho-restricted", r.rho.restricted_agrees),
        Check::new("pprime-consistent", r.rho.pprime_consistent),
        Check::new("rank-equals-components", r.t_structure.torsion_free_rank == r.poset.component_count),
    ];
    if let Some(eq) = r.rho.j_equals_derived_times_r {
        checks.push(Check::new("j-equals-derived-r", eq));
    }
    if let Some(w) = &r.weak_homs {
        checks.push(Check::new("weak-homs", w.failures.is_empty() && w.injective));
    }
    if r.sylow.metacyclic_case.is_some() {
        checks.push(Check::new("n-controls-fusion", r.fusion.controls_fusion));
    }
    checks
}

fn analyze_item(label: &str, g: &FiniteGroup, p: u64) -> BatteryItem {
    let outcome = FieldSpec::algebraically_closed(p).and_then(|f| analyze(g, p, f));
    match outcome {
        Ok(report) => BatteryItem {
            label: label.to_string(),
            prime: p,
            checks: report_checks(&report),
            error: None,
            report: Some(report),
        },
        Err(e) => BatteryItem {
            label: label.to_string(),
            prime: p,
            checks: Vec::new(),
            error: Some(e.to_string()),
            report: None,
        },
    }
}

fn grid_item(pres: MetacyclicPresentation) -> BatteryItem {
    let label = format!("({}, {}, {}, {}, {})", pres.p, pres.m, pres.n, pres.l, pres.q);
    let outcome = construct(&pres).and_then(|mg| structural_comparison(&mg));
    match outcome {
        Ok(cmp) => BatteryItem {
            label,
            prime: pres.p,
            checks: vec![
                Check::new("center", cmp.center.agrees()),
                Check::new("omega1", cmp.e.agrees()),
                Check::new("centralizer-of-e", cmp.c_s_e.agrees()),
                Check::new("equivalences", cmp.equivalences_hold()),
            ],
            error: None,
            report: None,
        },
        Err(e) => BatteryItem { label, prime: pres.p, checks: Vec::new(), error: Some(e.to_string()), report: None },
    }
}

/// Runs a built-in suite; items run in parallel and keep declaration order.
pub fn run_battery(suite: &str) -> Result<BatteryRun> {
    let items = match suite {
        "default" => {
            let entries = default_entries()?;
            let jobs: Vec<(&BatteryEntry, u64)> =
                entries.iter().flat_map(|e| e.primes.iter().map(move |&p| (e, p))).collect();
            jobs.par_iter().map(|(e, p)| analyze_item(&e.label, &e.group, *p)).collect()
        }
        "metacyclic-grid" => {
            validation_grid(&[3, 5], 6).into_par_iter().map(grid_item).collect()
        }
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(BatteryRun { suite: suite.to_string(), items })
}
