//! The full analysis pipeline and its structured report.

use std::fmt::Write as _;

use serde::Serialize;

use crate::abelian::invariant_factors;
use crate::characters::{
    build_weak_hom, characters_vanishing_on, hom_to_units, k_group, verify_weak_hom, FieldSpec,
};
use crate::error::{Error, Result, StageExt};
use crate::fusion::{
    controls_fusion, is_strongly_p_embedded, orbit_poset_components, strongly_embedded_core,
    verify_violation,
};
use crate::group::{FiniteGroup, Subgroup};
use crate::local::{PGroupKind, PLocalContext};
use crate::metacyclic::{recognize, Recognition};
use crate::numtheory::p_prime_part;
use crate::quotient::QuotientGroup;
use crate::rho::{
    central_closed_form, chain_subgroup, j_subgroup, split_closed_form, rho2_sylow, rho_infinity,
    rho_infinity_restricted, sylow_index, SplitFormCase,
};

#[derive(Clone, Debug, Serialize)]
pub struct GroupMeta {
    pub name: Option<String>,
    pub order: usize,
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoreData {
    pub g0: Vec<usize>,
    pub g0_order: usize,
    pub proper: bool,
    /// Whether `G₀` passed the strongly p-embedded test; only evaluated when proper.
    pub strongly_embedded: Option<bool>,
    pub rerun_on_g0: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetacyclicCase {
    Cyclic,
    NonsplitNonabelian,
    Split,
}

#[derive(Clone, Debug, Serialize)]
pub struct SylowData {
    pub subgroup: Vec<usize>,
    pub order: usize,
    pub kind: PGroupKind,
    pub recognition: Option<Recognition>,
    pub metacyclic_case: Option<MetacyclicCase>,
    pub e_central: bool,
    /// Evaluated on the input group.
    pub p_nilpotent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationData {
    pub q: Vec<usize>,
    pub g: usize,
    pub verified: bool,
    pub explanation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionData {
    pub normalizer: Vec<usize>,
    pub controls_fusion: bool,
    pub violation: Option<ViolationData>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PosetData {
    pub orbit_count: usize,
    pub component_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessData {
    pub subgroups: Vec<Vec<usize>>,
    pub elements: Vec<usize>,
    pub product: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosedFormData {
    pub subgroup: Vec<usize>,
    pub omega1_central: bool,
    pub n_controls_fusion: bool,
    pub applicable: bool,
    pub agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitFormData {
    pub subgroup: Vec<usize>,
    pub case: SplitFormCase,
    pub case_matches_parameters: bool,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PiOneData {
    pub r: Vec<usize>,
    pub n: Vec<usize>,
    pub r_normal: bool,
    pub quotient_order: usize,
    pub abelianization: Option<Vec<u64>>,
    pub witnesses: Vec<WitnessData>,
    pub witnesses_verified: bool,
    pub central_closed_form: ClosedFormData,
    pub split_closed_form: Option<SplitFormData>,
    pub oracle_agreement: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RhoData {
    pub rho2: Vec<usize>,
    pub rho_infinity: Vec<usize>,
    pub stabilized_at: usize,
    pub restricted_agrees: bool,
    /// p'-parts of `(N/R)^{ab}` and `N/ρ^∞(S)` coincide.
    pub pprime_consistent: bool,
    /// `J = N'·R` as element sets; checked when both hypothesis flags hold.
    pub j_equals_derived_times_r: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KData {
    pub j: Vec<usize>,
    pub quotient_invariants: Vec<u64>,
    pub invariants: Vec<u64>,
    pub order: u64,
    /// `Hom(N/R, k^×)` for comparison.
    pub via_r: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum TorsionPart {
    /// `K(G) ≅ Hom(N/J, k^×)`.
    Kernel { invariants: Vec<u64> },
    /// `K(G) ≅ Hom(G, k^×)`.
    HomOfGroup { invariants: Vec<u64> },
    /// `0 → K(N_G(E)) → T(N_G(E)) → ⟨[Ω(k)]⟩ → 0` with the class left open.
    CyclicExtension { normalizer_of_e: Vec<usize>, k_invariants: Vec<u64>, note: String },
    Undetermined { kind: PGroupKind, note: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct TStructure {
    pub torsion_free_rank: usize,
    pub generator: Option<String>,
    pub torsion: TorsionPart,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakHomData {
    pub modulus: u64,
    pub characters: usize,
    pub certified: usize,
    pub injective: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub group: GroupMeta,
    pub prime: u64,
    pub field: FieldSpec,
    /// Images of every element; all other ids index this table.
    pub elements: Vec<Vec<usize>>,
    pub core: CoreData,
    pub sylow: SylowData,
    pub fusion: FusionData,
    pub poset: PosetData,
    pub pi1: PiOneData,
    pub rho: RhoData,
    pub k_group: KData,
    pub t_structure: TStructure,
    pub weak_homs: Option<WeakHomData>,
    pub notes: Vec<String>,
    pub mismatch: bool,
    pub mismatches: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn pprime_invariants(invariants: &[u64], p: u64) -> Vec<u64> {
    let parts: Vec<u64> = invariants.iter().map(|&d| p_prime_part(d, p)).collect();
    invariant_factors(&parts)
}

struct Transport<'a> {
    to_g: &'a [usize],
}

impl Transport<'_> {
    fn id(&self, x: usize) -> usize {
        self.to_g[x]
    }

    fn set(&self, h: &Subgroup) -> Vec<usize> {
        let mut out: Vec<usize> = h.iter().map(|x| self.to_g[x]).collect();
        out.sort_unstable();
        out
    }

    fn recognition(&self, r: Recognition) -> Recognition {
        match r {
            Recognition::Cyclic { order, generator } => {
                Recognition::Cyclic { order, generator: self.id(generator) }
            }
            Recognition::Metacyclic { presentation, x, y } => {
                Recognition::Metacyclic { presentation, x: self.id(x), y: self.id(y) }
            }
            Recognition::NotMetacyclic => Recognition::NotMetacyclic,
        }
    }
}

/// Runs the whole pipeline on `G` at the prime `p`.
///
/// When the strongly embedded core `G₀` is proper the local analysis is
/// carried out on `G₀` and every subgroup is reported in the ids of `G`.
pub fn analyze(g: &FiniteGroup, p: u64, field: FieldSpec) -> Result<AnalysisReport> {
    if field.p() != p {
        return Err(Error::BadFieldSpec(format!(
            "field characteristic {} differs from p = {p}",
            field.p()
        )));
    }
    if !crate::numtheory::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !(g.order() as u64).is_multiple_of(p) {
        return Err(Error::PrimeNotDividing { p, order: g.order() });
    }
    let mut notes = Vec::new();
    let mut mismatches = Vec::new();

    let ctx0 = PLocalContext::new(g, p).stage("sylow")?;
    let core = strongly_embedded_core(&ctx0).stage("strongly embedded core")?;
    let p_nilpotent = g.is_p_nilpotent(p).stage("sylow")?;
    let sub;
    let to_g: Vec<usize>;
    let work: &FiniteGroup = if core.proper {
        sub = g.subgroup_as_group(&core.core).stage("strongly embedded core")?;
        to_g = sub
            .elements()
            .iter()
            .map(|perm| g.require(perm))
            .collect::<Result<_>>()
            .stage("strongly embedded core")?;
        notes.push(format!(
            "G0 of order {} is proper; the analysis was rerun on G0 and its results transported to G",
            core.core.order()
        ));
        &sub
    } else {
        to_g = (0..g.order()).collect();
        g
    };
    let strongly_embedded = core.proper.then(|| is_strongly_p_embedded(g, &core.core, p));
    if strongly_embedded == Some(false) {
        mismatches.push("proper G0 failed the strongly p-embedded test".into());
    }
    let tr = Transport { to_g: &to_g };
    let owned_ctx;
    let ctx = if core.proper {
        owned_ctx = PLocalContext::new(work, p).stage("sylow")?;
        &owned_ctx
    } else {
        &ctx0
    };

    // Sylow data
    let s = ctx.sylow();
    let class = work.classify_p_group(s, p).stage("sylow")?;
    let recognition = if p == 2 {
        None
    } else {
        Some(recognize(work, s, p).stage("metacyclic recognition")?)
    };
    let metacyclic_case = recognition.as_ref().and_then(|r| match r {
        Recognition::Cyclic { .. } => Some(MetacyclicCase::Cyclic),
        Recognition::Metacyclic { presentation, .. } if presentation.is_split() => {
            Some(MetacyclicCase::Split)
        }
        Recognition::Metacyclic { presentation, .. } if !presentation.is_abelian() => {
            Some(MetacyclicCase::NonsplitNonabelian)
        }
        _ => None,
    });
    let e_central = ctx.omega1_is_central();

    // fusion
    let fusion = controls_fusion(ctx, ctx.n()).stage("fusion")?;
    let violation = fusion.violation.as_ref().map(|v| ViolationData {
        q: tr.set(&v.q),
        g: tr.id(v.g),
        verified: verify_violation(work, s, ctx.n(), v),
        explanation: v.explanation.clone(),
    });
    if violation.as_ref().is_some_and(|v| !v.verified) {
        mismatches.push("fusion violation witness does not verify".into());
    }
    if metacyclic_case.is_some() && !fusion.controls {
        mismatches.push("N_G(S) fails to control fusion for a metacyclic Sylow subgroup".into());
    }

    let poset = orbit_poset_components(ctx).stage("orbit poset")?;

    // π₁
    let pi = chain_subgroup(ctx).stage("chain subgroup R")?;
    if !pi.r_normal_in_n {
        mismatches.push("R is not normal in N_G(S)".into());
    }
    let witnesses_verified = pi.witnesses.iter().all(|w| w.verify(ctx));
    if !witnesses_verified {
        mismatches.push("a chain witness for R does not verify".into());
    }
    let closed = central_closed_form(ctx).stage("closed forms")?;
    let applicable = closed.hypotheses_hold();
    let central_agrees = applicable.then(|| closed.subgroup == pi.r);
    if central_agrees == Some(false) {
        mismatches.push("R differs from the central-E closed form".into());
    }
    let split_form = if metacyclic_case == Some(MetacyclicCase::Split) {
        let split = split_closed_form(ctx, true).stage("closed forms")?;
        let predicted = recognition
            .as_ref()
            .and_then(Recognition::presentation)
            .map(|pres| pres.e_central_predicted());
        let case_matches_parameters =
            predicted.is_none_or(|c| c == (split.case == SplitFormCase::CentralE));
        let agrees = split.r == pi.r;
        if !agrees {
            mismatches.push("R differs from the split metacyclic closed form".into());
        }
        if !case_matches_parameters {
            mismatches.push("split closed-form case disagrees with the presentation".into());
        }
        Some(SplitFormData { subgroup: tr.set(&split.r), case: split.case, case_matches_parameters, agrees })
    } else {
        None
    };
    let oracle_agreement =
        central_agrees != Some(false) && split_form.as_ref().is_none_or(|f| f.agrees);

    // ρ-series
    let rho2 = rho2_sylow(ctx).stage("rho series")?;
    let si = sylow_index(ctx).stage("rho series")?;
    let full = rho_infinity(ctx).stage("rho series")?;
    let restricted = rho_infinity_restricted(ctx).stage("rho series")?;
    let rho_inf = full.limit_of(si).cloned().ok_or_else(|| {
        Error::InvariantViolated("ρ-series has no level for S".into())
    })?;
    let restricted_agrees = restricted.limit_of(si) == Some(&rho_inf);
    if !restricted_agrees {
        mismatches.push("ρ^∞(S) over Ω1(S) differs from the full computation".into());
    }
    let n = ctx.n();
    let rho_quotient = QuotientGroup::new(work, n, &rho_inf)
        .and_then(|q| q.abelian_invariants())
        .stage("rho series")?;
    let pprime_consistent = pi
        .abelianization_invariants
        .as_ref()
        .is_some_and(|a| pprime_invariants(a, p) == pprime_invariants(&rho_quotient, p));
    if !pprime_consistent {
        mismatches.push("p'-parts of N/R and N/ρ^∞(S) differ".into());
    }
    let j = j_subgroup(ctx).stage("K(G)")?;
    let j_equals = applicable.then(|| {
        let derived = work.derived_subgroup(n);
        work.product_set(derived.iter(), pi.r.iter()) == *j.members()
    });
    if j_equals == Some(false) {
        mismatches.push("J differs from N'·R".into());
    }

    // K(G)
    let k = k_group(ctx, field).stage("K(G)")?;
    let via_r = match &pi.abelianization_invariants {
        Some(inv) => Some(hom_to_units(inv, field).stage("K(G)")?.invariants),
        None => None,
    };
    if applicable && via_r.as_ref() != Some(&k.hom.invariants) {
        mismatches.push("Hom(N/J, k^×) differs from Hom(N/R, k^×)".into());
    }
    if metacyclic_case == Some(MetacyclicCase::Split) {
        let c_s = work.centralizer_of(s);
        if c_s.is_subgroup_of(&pi.r) {
            let cyclic = k.hom.invariants.len() <= 1;
            if !cyclic || !(p - 1).is_multiple_of(k.hom.order) {
                mismatches.push("C_G(S) ≤ R but K(G) is not cyclic of order dividing p-1".into());
            }
        }
    }

    // T(G)
    let torsion = match metacyclic_case {
        Some(MetacyclicCase::Cyclic) => {
            let ne = work.normalizer(ctx.omega1());
            let inv = work.abelianization_invariants(&ne);
            TorsionPart::CyclicExtension {
                normalizer_of_e: tr.set(&ne),
                k_invariants: hom_to_units(&inv, field).stage("T(G)")?.invariants,
                note: "T(G) restricts isomorphically to T(N_G(E)), an extension of \
                       <[Omega(k)]> by K(N_G(E)); the extension class is not computed"
                    .into(),
            }
        }
        Some(MetacyclicCase::NonsplitNonabelian) => {
            if !p_nilpotent {
                mismatches.push("nonsplit nonabelian metacyclic Sylow but G is not p-nilpotent".into());
            }
            let inv = work.abelianization_invariants(&work.whole());
            let hom = hom_to_units(&inv, field).stage("T(G)")?.invariants;
            if hom != k.hom.invariants {
                mismatches.push("Hom(G, k^×) differs from Hom(N/J, k^×)".into());
            }
            TorsionPart::HomOfGroup { invariants: hom }
        }
        _ if class.kind == PGroupKind::Other => {
            TorsionPart::Kernel { invariants: k.hom.invariants.clone() }
        }
        _ => TorsionPart::Undetermined {
            kind: class.kind,
            note: "S has p-rank one; the torsion of T(S) may be nontrivial and is not computed".into(),
        },
    };
    let t_structure = TStructure {
        torsion_free_rank: poset.component_count,
        generator: (poset.component_count == 1).then(|| "[Omega(k)]".to_string()),
        torsion,
    };
    notes.push(
        "T(N_G(S)) is determined by the N_G(S)-stable endotrivial modules of S; not computed".into(),
    );

    // weak S-homomorphisms
    let weak_homs = if applicable {
        let chars = characters_vanishing_on(work, n, &rho2, field).stage("weak homomorphisms")?;
        let mut failures = Vec::new();
        let mut tables = Vec::new();
        for (i, chi) in chars.iter().enumerate() {
            match build_weak_hom(ctx, chi) {
                Ok(theta) => {
                    if let Some(v) = verify_weak_hom(ctx, &theta) {
                        failures.push(format!("character {i}: {v:?}"));
                    }
                    tables.push(theta.values);
                }
                Err(e) => failures.push(format!("character {i}: {e}")),
            }
        }
        let mut sorted = tables.clone();
        sorted.sort();
        sorted.dedup();
        let injective = sorted.len() == tables.len();
        if !failures.is_empty() || !injective {
            mismatches.push("weak homomorphism certification failed".into());
        }
        Some(WeakHomData {
            modulus: chars.first().map_or(1, |c| c.modulus),
            characters: chars.len(),
            certified: tables.len() - failures.len().min(tables.len()),
            injective,
            failures,
        })
    } else {
        None
    };

    Ok(AnalysisReport {
        group: GroupMeta { name: g.name().map(str::to_owned), order: g.order(), degree: g.degree() },
        prime: p,
        field,
        elements: g.elements().iter().map(|e| e.to_vec()).collect(),
        core: CoreData {
            g0: core.core.to_vec(),
            g0_order: core.core.order(),
            proper: core.proper,
            strongly_embedded,
            rerun_on_g0: core.proper,
        },
        sylow: SylowData {
            subgroup: tr.set(s),
            order: s.order(),
            kind: class.kind,
            recognition: recognition.map(|r| tr.recognition(r)),
            metacyclic_case,
            e_central,
            p_nilpotent,
        },
        fusion: FusionData { normalizer: tr.set(n), controls_fusion: fusion.controls, violation },
        poset: PosetData { orbit_count: poset.orbit_count, component_count: poset.component_count },
        pi1: PiOneData {
            r: tr.set(&pi.r),
            n: tr.set(&pi.n),
            r_normal: pi.r_normal_in_n,
            quotient_order: pi.quotient_order,
            abelianization: pi.abelianization_invariants.clone(),
            witnesses: pi
                .witnesses
                .iter()
                .map(|w| WitnessData {
                    subgroups: w.subgroups.iter().map(|q| tr.set(q)).collect(),
                    elements: w.elements.iter().map(|&x| tr.id(x)).collect(),
                    product: tr.id(w.product),
                })
                .collect(),
            witnesses_verified,
            central_closed_form: ClosedFormData {
                subgroup: tr.set(&closed.subgroup),
                omega1_central: closed.omega1_central,
                n_controls_fusion: closed.n_controls_fusion,
                applicable,
                agrees: central_agrees,
            },
            split_closed_form: split_form,
            oracle_agreement,
        },
        rho: RhoData {
            rho2: tr.set(&rho2),
            rho_infinity: tr.set(&rho_inf),
            stabilized_at: full.stabilized_at,
            restricted_agrees,
            pprime_consistent,
            j_equals_derived_times_r: j_equals,
        },
        k_group: KData {
            j: tr.set(&k.j),
            quotient_invariants: k.quotient_invariants,
            invariants: k.hom.invariants,
            order: k.hom.order,
            via_r,
        },
        t_structure,
        weak_homs,
        notes,
        mismatch: !mismatches.is_empty(),
        mismatches,
    })
}

fn set_summary(ids: &[usize]) -> String {
    format!("order {}", ids.len())
}

/// A human-readable rendering of the report.
pub fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let name = r.group.name.as_deref().unwrap_or("(unnamed)");
    let _ = writeln!(out, "group {name}: order {}, degree {}, p = {}, field {}", r.group.order, r.group.degree, r.prime, r.field);
    if r.mismatch {
        let _ = writeln!(out, "*** MISMATCH ***");
        for m in &r.mismatches {
            let _ = writeln!(out, "  - {m}");
        }
    }
    if r.core.proper {
        let _ = writeln!(
            out,
            "G0: order {} (proper, strongly embedded: {}); results transported from G0",
            r.core.g0_order,
            r.core.strongly_embedded.unwrap_or(false)
        );
    } else {
        let _ = writeln!(out, "G0 = G");
    }
    let _ = writeln!(out, "Sylow: order {}, kind {:?}, E central: {}, p-nilpotent: {}", r.sylow.order, r.sylow.kind, r.sylow.e_central, r.sylow.p_nilpotent);
    match &r.sylow.recognition {
        Some(Recognition::Cyclic { order, .. }) => {
            let _ = writeln!(out, "  cyclic of order {order}");
        }
        Some(Recognition::Metacyclic { presentation: m, .. }) => {
            let _ = writeln!(
                out,
                "  metacyclic (p, m, n, l, q) = ({}, {}, {}, {}, {}), {}",
                m.p, m.m, m.n, m.l, m.q,
                if m.is_split() { "split" } else { "nonsplit" }
            );
        }
        Some(Recognition::NotMetacyclic) => {
            let _ = writeln!(out, "  not metacyclic");
        }
        None => {}
    }
    let _ = writeln!(out, "N_G(S): {}, controls fusion: {}", set_summary(&r.fusion.normalizer), r.fusion.controls_fusion);
    if let Some(v) = &r.fusion.violation {
        let _ = writeln!(out, "  witness: {}", v.explanation);
    }
    let _ = writeln!(out, "orbit poset: {} orbits, {} components", r.poset.orbit_count, r.poset.component_count);
    let _ = writeln!(
        out,
        "R: {}, |N/R| = {}, abelianization {}, oracle agreement: {}",
        set_summary(&r.pi1.r),
        r.pi1.quotient_order,
        r.pi1.abelianization.as_ref().map_or("not computed".to_string(), |a| format!("{a:?}")),
        r.pi1.oracle_agreement
    );
    let _ = writeln!(out, "rho^inf(S): {}, restricted agrees: {}, p'-consistent: {}", set_summary(&r.rho.rho_infinity), r.rho.restricted_agrees, r.rho.pprime_consistent);
    if let Some(eq) = r.rho.j_equals_derived_times_r {
        let _ = writeln!(out, "J = N'R: {eq}");
    }
    let _ = writeln!(out, "K(G): invariants {:?} (order {})", r.k_group.invariants, r.k_group.order);
    let t = &r.t_structure;
    let _ = write!(out, "T(G): torsion-free rank {}", t.torsion_free_rank);
    if let Some(gen) = &t.generator {
        let _ = write!(out, " generated by {gen}");
    }
    let _ = writeln!(out);
    match &t.torsion {
        TorsionPart::Kernel { invariants } => {
            let _ = writeln!(out, "  torsion K(G) = {invariants:?}");
        }
        TorsionPart::HomOfGroup { invariants } => {
            let _ = writeln!(out, "  torsion Hom(G, k^x) = {invariants:?}");
        }
        TorsionPart::CyclicExtension { k_invariants, note, .. } => {
            let _ = writeln!(out, "  K(N_G(E)) = {k_invariants:?}; {note}");
        }
        TorsionPart::Undetermined { note, .. } => {
            let _ = writeln!(out, "  {note}");
        }
    }
    if let Some(w) = &r.weak_homs {
        let _ = writeln!(
            out,
            "weak homomorphisms: {} characters, {} certified, injective: {}",
            w.characters, w.certified, w.injective
        );
    }
    for note in &r.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}
