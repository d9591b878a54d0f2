//! The ρ-series, the chain subgroup `R ≤ N_G(S)`, and the closed forms that
//! describe `R` under extra hypotheses.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::fusion::{controls_fusion, strongly_embedded_core};
use crate::group::Subgroup;
use crate::local::PLocalContext;
use crate::quotient::QuotientGroup;

/// `ρ¹(P) = S_P · N_G(P)'` for the `i`-th subgroup of `S`.
pub fn rho1(ctx: &PLocalContext<'_>, i: usize) -> Subgroup {
    let g = ctx.group();
    let np = ctx.normalizer(i);
    let sp = g.sylow_in(np, ctx.p()).expect("prime checked by the context");
    let derived = g.derived_subgroup(np);
    // N_G(P)' is normal in N_G(P), so the product set is the join
    g.join(&sp, &derived)
}

/// `ρ¹(P)` for an arbitrary nontrivial subgroup `P ≤ S`.
pub fn rho1_of(ctx: &PLocalContext<'_>, p: &Subgroup) -> Result<Subgroup> {
    if p.is_trivial() {
        return Err(Error::TrivialSubgroup);
    }
    let i = ctx
        .subgroup_index(p)?
        .ok_or_else(|| Error::HypothesisFailed("P must be a subgroup of S".into()))?;
    Ok(rho1(ctx, i))
}

/// `ρ²(S) = ⟨N ∩ ρ¹(Q) : 1 < Q ≤ S⟩`.
pub fn rho2_sylow(ctx: &PLocalContext<'_>) -> Result<Subgroup> {
    let g = ctx.group();
    let mut bits = g.bits_from([g.identity()]);
    for i in 0..ctx.subgroups()?.len() {
        let mut part = rho1(ctx, i).members().clone();
        part.intersect_with(ctx.n().members());
        bits.union_with(&part);
    }
    Ok(g.generate(bits.ones()))
}

/// Levels `ρ¹(P) ≤ ρ²(P) ≤ …` for a set of target subgroups, computed with
/// simultaneous updates until a full pass changes nothing.
#[derive(Clone, Debug)]
pub struct RhoSeries {
    /// Indices into the context's subgroup list.
    pub targets: Vec<usize>,
    /// `levels[t][i]` is `ρ^{i+1}` of target `t`.
    pub levels: Vec<Vec<Subgroup>>,
    /// First `i` with `ρ^i = ρ^{i+1}` for every target.
    pub stabilized_at: usize,
}

impl RhoSeries {
    pub fn levels_of(&self, subgroup_index: usize) -> Option<&[Subgroup]> {
        let t = self.targets.iter().position(|&x| x == subgroup_index)?;
        Some(&self.levels[t])
    }

    /// The stable value for a target.
    pub fn limit_of(&self, subgroup_index: usize) -> Option<&Subgroup> {
        self.levels_of(subgroup_index).and_then(|l| l.last())
    }

    /// `ρ^k` of a target, holding the stable value past the last level.
    pub fn level(&self, subgroup_index: usize, k: usize) -> Option<&Subgroup> {
        let levels = self.levels_of(subgroup_index)?;
        levels.get(k - 1).or_else(|| levels.last())
    }
}

/// Runs the ρ recursion with `ρ^{i+1}(P) = ⟨N_G(P) ∩ ρ^i(Q) : Q ∈ sources⟩`.
///
/// `targets` must contain `sources`.
pub fn rho_series(
    ctx: &PLocalContext<'_>,
    targets: &[usize],
    sources: &[usize],
) -> Result<RhoSeries> {
    let g = ctx.group();
    let position: HashMap<usize, usize> =
        targets.iter().enumerate().map(|(t, &i)| (i, t)).collect();
    let source_pos: Vec<usize> = sources
        .iter()
        .map(|i| {
            position.get(i).copied().ok_or_else(|| {
                Error::InvariantViolated("every source must also be a target".into())
            })
        })
        .collect::<Result<_>>()?;
    let mut levels: Vec<Vec<Subgroup>> = targets.iter().map(|&i| vec![rho1(ctx, i)]).collect();
    let mut stabilized_at = 1;
    loop {
        let current: Vec<&Subgroup> = levels.iter().map(|l| l.last().unwrap()).collect();
        let next: Vec<Subgroup> = targets
            .iter()
            .map(|&i| {
                let np = ctx.normalizer(i);
                let mut bits = g.bits_from([g.identity()]);
                for &s in &source_pos {
                    let mut part = np.members().clone();
                    part.intersect_with(current[s].members());
                    bits.union_with(&part);
                }
                g.generate(bits.ones())
            })
            .collect();
        let changed = next.iter().zip(&current).any(|(a, b)| a != *b);
        if !changed {
            return Ok(RhoSeries { targets: targets.to_vec(), levels, stabilized_at });
        }
        for (l, s) in levels.iter_mut().zip(next) {
            l.push(s);
        }
        stabilized_at += 1;
    }
}

/// The series over every nontrivial subgroup of `S`.
pub fn rho_infinity(ctx: &PLocalContext<'_>) -> Result<RhoSeries> {
    let all: Vec<usize> = (0..ctx.subgroups()?.len()).collect();
    rho_series(ctx, &all, &all)
}

/// The series with sources restricted to nontrivial subgroups of `Ω₁(S)`;
/// targets are those subgroups together with `S`.
pub fn rho_infinity_restricted(ctx: &PLocalContext<'_>) -> Result<RhoSeries> {
    let sources = ctx.subgroups_within(ctx.omega1())?;
    let top = sylow_index(ctx)?;
    let mut targets = sources.clone();
    if !targets.contains(&top) {
        targets.push(top);
    }
    rho_series(ctx, &targets, &sources)
}

pub fn sylow_index(ctx: &PLocalContext<'_>) -> Result<usize> {
    ctx.subgroup_index(ctx.sylow())?
        .ok_or(Error::TrivialSubgroup)
}

/// `(Q₀, …, Qₙ; g₁, …, gₙ)` with `gᵢ ∈ O^{p'}(N_G(Qᵢ))`, `Q₀ ≤ Q₁` and
/// `Q₀^{g₁⋯gᵢ} ≤ Q_{i+1}` for right conjugation `Q^g = g⁻¹Qg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainWitness {
    pub subgroups: Vec<Subgroup>,
    pub elements: Vec<usize>,
    pub product: usize,
}

impl ChainWitness {
    /// Re-checks every link of the chain.
    pub fn verify(&self, ctx: &PLocalContext<'_>) -> bool {
        let g = ctx.group();
        let n = self.elements.len();
        if self.subgroups.len() != n + 1 {
            return false;
        }
        let q0 = &self.subgroups[0];
        let mut w = g.identity();
        for k in 0..n {
            let qk = &self.subgroups[k + 1];
            let moved = g.conjugate(g.inv(w), q0);
            if !moved.is_subgroup_of(qk) || !qk.is_subgroup_of(ctx.sylow()) {
                return false;
            }
            let residual = g.o_pprime_residual(&g.normalizer(qk), ctx.p());
            if !residual.contains(self.elements[k]) {
                return false;
            }
            w = g.mul(w, self.elements[k]);
        }
        w == self.product
    }
}

#[derive(Clone, Debug)]
pub struct PiOneResult {
    pub r: Subgroup,
    pub n: Subgroup,
    pub r_normal_in_n: bool,
    pub quotient_order: usize,
    /// Invariants of `(N/R)^{ab}`; absent when `R` fails to be normal.
    pub abelianization_invariants: Option<Vec<u64>>,
    /// One witness per retained generator of `R`.
    pub witnesses: Vec<ChainWitness>,
}

// (predecessor, step element, subgroup index used for the step)
type Back = (u32, u32, u32);

/// Computes `R` from chains of `O^{p'}`-normalizer elements.
///
/// For each nontrivial `Q₀ ≤ S` the set `M(Q₀)` of admissible products is the
/// set of `w` reachable from the identity by steps `w ↦ w·k`, where `k`
/// generates `O^{p'}(N_G(Q'))` for some `Q' ≤ S` containing `Q₀^w`.
pub fn chain_subgroup(ctx: &PLocalContext<'_>) -> Result<PiOneResult> {
    let g = ctx.group();
    let subs = ctx.subgroups()?;
    let n = ctx.n();
    let s = ctx.sylow();

    // steps[i]: (generator, via) for every Q' containing the i-th subgroup
    let steps: Vec<Vec<(usize, usize)>> = (0..subs.len())
        .map(|i| {
            let mut out = Vec::new();
            for (j, qj) in subs.iter().enumerate() {
                if subs[i].is_subgroup_of(qj) {
                    for k in ctx.residual_normalizer(j).generator_ids() {
                        out.push((k, j));
                    }
                }
            }
            out
        })
        .collect();

    let mut seeds: Vec<usize> = Vec::new();
    let mut back_of_seed: Vec<(usize, Vec<Option<Back>>)> = Vec::new();
    for q0 in 0..subs.len() {
        let mut back: Vec<Option<Back>> = vec![None; g.order()];
        let mut reached = g.bits_from([g.identity()]);
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(w) = queue.pop_front() {
            // Q₀^w = w⁻¹ Q₀ w
            let wi = g.inv(w);
            if !g.conjugates_into(wi, &subs[q0], s) {
                continue;
            }
            let moved = g.conjugate(wi, &subs[q0]);
            let idx = ctx
                .subgroup_index(&moved)?
                .ok_or_else(|| Error::InvariantViolated("conjugate left S".into()))?;
            for &(k, via) in &steps[idx] {
                let next = g.mul(w, k);
                if !reached.put(next) {
                    back[next] = Some((w as u32, k as u32, via as u32));
                    queue.push_back(next);
                }
            }
        }
        for x in reached.ones() {
            if n.contains(x) {
                seeds.push(x);
            }
        }
        back_of_seed.push((q0, back));
    }
    seeds.sort_unstable();
    seeds.dedup();
    let r = g.generate(seeds.iter().copied());

    let mut witnesses = Vec::new();
    for gen in r.generator_ids() {
        let found = back_of_seed.iter().find_map(|(q0, back)| {
            if gen == g.identity() || back[gen].is_some() {
                Some(reconstruct(ctx, *q0, back, gen))
            } else {
                None
            }
        });
        if let Some(w) = found {
            witnesses.push(w);
        }
    }

    let r_normal_in_n = g.is_normal_in(&r, n);
    let quotient_order = n.order() / r.order();
    let abelianization_invariants = if r_normal_in_n {
        let derived = g.derived_subgroup(n);
        let nr = g.join(&derived, &r);
        Some(QuotientGroup::new(g, n, &nr)?.abelian_invariants()?)
    } else {
        None
    };
    Ok(PiOneResult {
        r,
        n: n.clone(),
        r_normal_in_n,
        quotient_order,
        abelianization_invariants,
        witnesses,
    })
}

fn reconstruct(
    ctx: &PLocalContext<'_>,
    q0: usize,
    back: &[Option<Back>],
    target: usize,
) -> ChainWitness {
    let g = ctx.group();
    let subs = ctx.subgroups().expect("enumerated");
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut w = target;
    while let Some((prev, k, via)) = back[w] {
        path.push((k as usize, via as usize));
        w = prev as usize;
    }
    path.reverse();
    let mut subgroups = vec![subs[q0].clone()];
    let mut elements: Vec<usize> = Vec::new();
    let mut last_via = usize::MAX;
    for (k, via) in path {
        if via == last_via {
            let tail = elements.last_mut().expect("nonempty");
            *tail = g.mul(*tail, k);
        } else {
            subgroups.push(subs[via].clone());
            elements.push(k);
            last_via = via;
        }
    }
    ChainWitness { subgroups, elements, product: target }
}

/// `⟨N ∩ O^{p'}(N_G(Q)) : 1 < Q ≤ Ω₁(S)⟩` with the two hypothesis flags.
#[derive(Clone, Debug)]
pub struct ClosedFormResult {
    pub subgroup: Subgroup,
    pub omega1_central: bool,
    pub n_controls_fusion: bool,
}

impl ClosedFormResult {
    pub fn hypotheses_hold(&self) -> bool {
        self.omega1_central && self.n_controls_fusion
    }
}

fn join_of_intersections<'a>(
    ctx: &PLocalContext<'_>,
    parts: impl IntoIterator<Item = &'a fixedbitset::FixedBitSet>,
) -> Subgroup {
    let g = ctx.group();
    let mut bits = g.bits_from([g.identity()]);
    for part in parts {
        let mut x = part.clone();
        x.intersect_with(ctx.n().members());
        bits.union_with(&x);
    }
    g.generate(bits.ones())
}

pub fn central_closed_form(ctx: &PLocalContext<'_>) -> Result<ClosedFormResult> {
    let indices = ctx.subgroups_within(ctx.omega1())?;
    let residuals: Vec<&Subgroup> = indices.iter().map(|&i| ctx.residual_normalizer(i)).collect();
    let subgroup = join_of_intersections(ctx, residuals.iter().map(|r| r.members()));
    Ok(ClosedFormResult {
        subgroup,
        omega1_central: ctx.omega1_is_central(),
        n_controls_fusion: controls_fusion(ctx, ctx.n())?.controls,
    })
}

/// `J = ⟨N ∩ S·N_G(Q)' : 1 < Q ≤ Ω₁(S)⟩`, where `S·N_G(Q)'` is a product set.
pub fn j_subgroup(ctx: &PLocalContext<'_>) -> Result<Subgroup> {
    let g = ctx.group();
    let indices = ctx.subgroups_within(ctx.omega1())?;
    let products: Vec<_> = indices
        .iter()
        .map(|&i| {
            let derived = g.derived_subgroup(ctx.normalizer(i));
            g.product_set(ctx.sylow().iter(), derived.iter())
        })
        .collect();
    Ok(join_of_intersections(ctx, products.iter()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitFormCase {
    /// `E ≤ Z(S)`.
    CentralE,
    /// `E ⊄ Z(S)`.
    NoncentralE,
}

#[derive(Clone, Debug)]
pub struct SplitFormResult {
    pub r: Subgroup,
    pub case: SplitFormCase,
    /// The noncentral order-p subgroup used in the noncentral case.
    pub q: Option<Subgroup>,
}

/// The split metacyclic description of `R`.
///
/// The caller asserts that `S` is split metacyclic; `p` odd and `G₀ = G` are
/// checked here. In the noncentral case every noncentral order-p subgroup of
/// `E` is tried and the results are required to agree.
pub fn split_closed_form(ctx: &PLocalContext<'_>, split_metacyclic: bool) -> Result<SplitFormResult> {
    let g = ctx.group();
    if !split_metacyclic || ctx.p() == 2 {
        return Err(Error::NotSplitMetacyclic);
    }
    let core = strongly_embedded_core(ctx)?;
    if core.proper {
        return Err(Error::StronglyEmbeddedProper {
            g0_order: core.core.order(),
            order: g.order(),
        });
    }
    let e = ctx.omega1();
    let center = ctx.center();
    if e.is_subgroup_of(center) {
        let indices = ctx.subgroups_within(e)?;
        let residuals: Vec<&Subgroup> =
            indices.iter().map(|&i| ctx.residual_normalizer(i)).collect();
        let r = join_of_intersections(ctx, residuals.iter().map(|r| r.members()));
        return Ok(SplitFormResult { r, case: SplitFormCase::CentralE, q: None });
    }
    let z = g.intersection(e, center);
    let zi = ctx.subgroup_index(&z)?.ok_or(Error::TrivialSubgroup)?;
    let ei = ctx.subgroup_index(e)?.ok_or(Error::TrivialSubgroup)?;
    let from_z = {
        let mut bits = ctx.residual_normalizer(zi).members().clone();
        bits.intersect_with(ctx.n().members());
        bits
    };
    let residual_e = ctx.residual_normalizer(ei);
    let p = ctx.p() as usize;
    let noncentral: Vec<usize> = ctx
        .subgroups_within(e)?
        .into_iter()
        .filter(|&i| {
            let q = &ctx.subgroups().expect("enumerated")[i];
            q.order() == p && !q.is_subgroup_of(center)
        })
        .collect();
    let mut result: Option<(Subgroup, Subgroup)> = None;
    for qi in noncentral {
        let q = &ctx.subgroups()?[qi];
        let cq = ctx.centralizer(qi);
        let h = g.intersection(residual_e, cq);
        let h_prime = g.o_pprime_residual(cq, ctx.p());
        let hh = g.product_set(h.iter(), h_prime.iter());
        let mut hht = g.product_set(hh.ones(), ctx.sylow().iter());
        hht.intersect_with(ctx.n().members());
        hht.union_with(&from_z);
        let r = g.generate(hht.ones());
        match &result {
            None => result = Some((r, q.clone())),
            Some((first, _)) if *first != r => {
                return Err(Error::InvariantViolated(
                    "the noncentral-case subgroup depends on the choice of Q".into(),
                ));
            }
            Some(_) => {}
        }
    }
    let (r, q) = result.ok_or_else(|| {
        Error::InvariantViolated("E has no noncentral subgroup of order p".into())
    })?;
    Ok(SplitFormResult { r, case: SplitFormCase::NoncentralE, q: Some(q) })
}
