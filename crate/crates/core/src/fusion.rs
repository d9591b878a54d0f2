//! Control of fusion, the strongly embedded core `G₀`, and connectivity of
//! the orbit poset of noncyclic elementary abelian p-subgroups.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::local::PLocalContext;

/// A conjugation `Q → gQg⁻¹` inside `S` that `H · C_G(Q)` does not realize.
#[derive(Clone, Debug)]
pub struct FusionViolation {
    pub q: Subgroup,
    pub g: usize,
    pub explanation: String,
}

#[derive(Clone, Debug)]
pub struct FusionCheck {
    pub controls: bool,
    pub violation: Option<FusionViolation>,
}

/// Decides whether `H` controls p-fusion.
///
/// Subgroups are visited one per `S`-class, largest order first, then in
/// canonical order; for each the candidates `g` are scanned in element order
/// and tested for membership in the product set `H · C_G(Q)`.
pub fn controls_fusion(ctx: &PLocalContext<'_>, h: &Subgroup) -> Result<FusionCheck> {
    let g = ctx.group();
    let s = ctx.sylow();
    if !s.is_subgroup_of(h) {
        return Err(Error::SylowNotContained);
    }
    let subs = ctx.subgroups()?;
    let mut reps = ctx.s_class_representatives()?;
    reps.sort_by(|&a, &b| subs[b].order().cmp(&subs[a].order()).then(a.cmp(&b)));
    for i in reps {
        let q = &subs[i];
        let c = ctx.centralizer(i);
        let hc = g.product_set(h.iter(), c.iter());
        let bad = (0..g.order()).find(|&x| !hc.contains(x) && g.conjugates_into(x, q, s));
        if let Some(x) = bad {
            return Ok(FusionCheck {
                controls: false,
                violation: Some(FusionViolation {
                    q: q.clone(),
                    g: x,
                    explanation: format!(
                        "g maps Q (order {}) into S but g is not in H·C_G(Q) ({} of {} elements)",
                        q.order(),
                        hc.count_ones(..),
                        g.order()
                    ),
                }),
            });
        }
    }
    Ok(FusionCheck { controls: true, violation: None })
}

/// Checks a reported violation from scratch by exhausting `H · C_G(Q)`.
pub fn verify_violation(
    g: &FiniteGroup,
    s: &Subgroup,
    h: &Subgroup,
    violation: &FusionViolation,
) -> bool {
    let q = &violation.q;
    let x = violation.g;
    let c = g.centralizer_of(q);
    let into_s = q.iter().all(|e| s.contains(g.conj(x, e)));
    let unrealized = h.iter().all(|a| c.iter().all(|b| g.mul(a, b) != x));
    q.is_subgroup_of(s) && into_s && unrealized
}

#[derive(Clone, Debug)]
pub struct StronglyEmbeddedCore {
    pub core: Subgroup,
    pub proper: bool,
}

/// `G₀ = ⟨N_G(Q) : 1 < Q ≤ S⟩`, using one `Q` per `S`-class.
pub fn strongly_embedded_core(ctx: &PLocalContext<'_>) -> Result<StronglyEmbeddedCore> {
    let g = ctx.group();
    let reps = ctx.s_class_representatives()?;
    let core = g.join_all(reps.iter().map(|&i| ctx.normalizer(i)));
    let proper = core.order() != g.order();
    Ok(StronglyEmbeddedCore { core, proper })
}

/// `p | |H|` and `p ∤ |H ∩ gHg⁻¹|` for every `g ∉ H`.
pub fn is_strongly_p_embedded(g: &FiniteGroup, h: &Subgroup, p: u64) -> bool {
    if !(h.order() as u64).is_multiple_of(p) {
        return false;
    }
    let mut seen_cosets = g.bits_from(std::iter::empty());
    for x in 0..g.order() {
        if h.contains(x) || seen_cosets.contains(x) {
            continue;
        }
        for y in h.iter() {
            seen_cosets.insert(g.mul(x, y));
        }
        let conj = g.conjugate(x, h);
        if (h.members().intersection_count(conj.members()) as u64).is_multiple_of(p) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetOrbitComponents {
    pub orbit_count: usize,
    pub component_count: usize,
    pub representatives: Vec<Subgroup>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let parent = self.0[x];
        if parent == x {
            return x;
        }
        let root = self.find(parent);
        self.0[x] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Components of the G-orbit poset of noncyclic elementary abelian p-subgroups.
///
/// Every such subgroup is conjugate into `S`, and two orbits are comparable up
/// to conjugation exactly when members inside `S` are contained in one another,
/// so the whole computation runs on subgroups of `S`.
pub fn orbit_poset_components(ctx: &PLocalContext<'_>) -> Result<PosetOrbitComponents> {
    let g = ctx.group();
    let p = ctx.p();
    let elementary: Vec<&Subgroup> = ctx
        .subgroups()?
        .iter()
        .filter(|a| a.order() as u64 > p && g.is_elementary_abelian(a, p))
        .collect();
    let index: HashMap<&Subgroup, usize> =
        elementary.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let mut orbit = vec![usize::MAX; elementary.len()];
    let mut orbit_reps = Vec::new();
    for i in 0..elementary.len() {
        if orbit[i] != usize::MAX {
            continue;
        }
        let label = orbit_reps.len();
        orbit_reps.push(i);
        for x in 0..g.order() {
            if g.conjugates_into(x, elementary[i], ctx.sylow()) {
                let c = g.conjugate(x, elementary[i]);
                orbit[index[&c]] = label;
            }
        }
    }
    let mut uf = UnionFind::new(orbit_reps.len());
    for (i, a) in elementary.iter().enumerate() {
        for (j, b) in elementary.iter().enumerate() {
            if i != j && a.is_subgroup_of(b) {
                uf.union(orbit[i], orbit[j]);
            }
        }
    }
    let mut representatives = Vec::new();
    for (label, &i) in orbit_reps.iter().enumerate() {
        if uf.find(label) == label {
            representatives.push(elementary[i].clone());
        }
    }
    Ok(PosetOrbitComponents {
        orbit_count: orbit_reps.len(),
        component_count: representatives.len(),
        representatives,
    })
}
