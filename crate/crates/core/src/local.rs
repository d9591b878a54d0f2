//! Sylow subgroups, characteristic subgroups of p-groups, and the cached
//! p-local context that the fusion and ρ computations work in.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::numtheory::{is_power_of, is_prime, p_part};

/// Default bound on `|P|` for subgroup enumeration.
pub const SUBGROUP_ENUMERATION_CAP: usize = 729;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PGroupKind {
    Cyclic,
    GeneralizedQuaternion,
    Semidihedral,
    Other,
}

/// Classification of a p-group with the element data that decided it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PGroupClass {
    pub kind: PGroupKind,
    /// A generator for cyclic groups; the involutions for the 2-group kinds;
    /// empty otherwise.
    pub witness: Vec<usize>,
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

impl FiniteGroup {
    pub fn is_p_element(&self, g: usize, p: u64) -> bool {
        is_power_of(self.element_order(g), p)
    }

    pub fn is_p_subgroup(&self, h: &Subgroup, p: u64) -> bool {
        is_power_of(h.order() as u64, p)
    }

    fn require_p_group(&self, h: &Subgroup, p: u64) -> Result<()> {
        if self.is_p_subgroup(h, p) {
            Ok(())
        } else {
            Err(Error::NotPGroup { p, order: h.order() })
        }
    }

    /// A Sylow p-subgroup of `H`, grown greedily: from `P`, adjoin the
    /// smallest `g ∈ N_H(P) ∖ P` with `g^p ∈ P` until the p-part is reached.
    pub fn sylow_in(&self, h: &Subgroup, p: u64) -> Result<Subgroup> {
        check_prime(p)?;
        let target = p_part(h.order() as u64, p) as usize;
        let mut current = self.trivial();
        while current.order() < target {
            let norm = self.normalizer_in(h, &current);
            let next = norm
                .iter()
                .find(|&g| !current.contains(g) && current.contains(self.pow(g, p)))
                .ok_or_else(|| Error::InvariantViolated("Sylow growth stalled".into()))?;
            current = self.generate(current.generator_ids().chain([next]));
        }
        Ok(current)
    }

    pub fn sylow_p(&self, p: u64) -> Result<Subgroup> {
        check_prime(p)?;
        if !(self.order() as u64).is_multiple_of(p) {
            return Err(Error::PrimeNotDividing { p, order: self.order() });
        }
        self.sylow_in(&self.whole(), p)
    }

    /// `Ω₁(P)`, generated by the elements of order dividing `p`.
    pub fn omega1(&self, pgroup: &Subgroup, p: u64) -> Result<Subgroup> {
        self.require_p_group(pgroup, p)?;
        let id = self.identity();
        Ok(self.generate(pgroup.iter().filter(|&g| self.pow(g, p) == id)))
    }

    /// `Φ(P) = P'⟨g^p⟩`.
    pub fn frattini_subgroup(&self, pgroup: &Subgroup, p: u64) -> Subgroup {
        let derived = self.derived_subgroup(pgroup);
        let powers: Vec<usize> = pgroup.iter().map(|g| self.pow(g, p)).collect();
        self.generate(derived.generator_ids().chain(powers))
    }

    /// `O^{p'}(H)`, generated by the p-elements of `H`.
    pub fn o_pprime_residual(&self, h: &Subgroup, p: u64) -> Subgroup {
        self.generate(h.iter().filter(|&g| self.is_p_element(g, p)))
    }

    /// `O_{p'}(H)`: normal closures of p'-elements are accumulated while the
    /// result stays a p'-group.
    pub fn o_pprime_core(&self, h: &Subgroup, p: u64) -> Subgroup {
        let mut core = self.trivial();
        for x in h.iter() {
            if core.contains(x) || self.element_order(x).is_multiple_of(p) {
                continue;
            }
            let candidate = self.normal_closure(h, core.generator_ids().chain([x]));
            if !(candidate.order() as u64).is_multiple_of(p) {
                core = candidate;
            }
        }
        core
    }

    pub fn is_p_nilpotent(&self, p: u64) -> Result<bool> {
        let s = self.sylow_p(p)?;
        Ok(self.o_pprime_core(&self.whole(), p).order() * s.order() == self.order())
    }

    pub fn classify_p_group(&self, pgroup: &Subgroup, p: u64) -> Result<PGroupClass> {
        self.require_p_group(pgroup, p)?;
        let order = pgroup.order() as u64;
        if let Some(g) = pgroup.iter().find(|&g| self.element_order(g) == order) {
            return Ok(PGroupClass { kind: PGroupKind::Cyclic, witness: vec![g] });
        }
        if p == 2 && !self.is_abelian_subgroup(pgroup) {
            let involutions: Vec<usize> =
                pgroup.iter().filter(|&g| self.element_order(g) == 2).collect();
            if involutions.len() == 1 {
                return Ok(PGroupClass {
                    kind: PGroupKind::GeneralizedQuaternion,
                    witness: involutions,
                });
            }
            let has_maximal_cyclic = pgroup.iter().any(|g| self.element_order(g) == order / 2);
            if order >= 16 && has_maximal_cyclic && involutions.len() as u64 == order / 4 + 1 {
                return Ok(PGroupClass { kind: PGroupKind::Semidihedral, witness: involutions });
            }
        }
        Ok(PGroupClass { kind: PGroupKind::Other, witness: Vec::new() })
    }

    /// All cyclic subgroups of `h`, deduplicated, in canonical order.
    pub fn cyclic_subgroups(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for g in h.iter() {
            let c = self.generate([g]);
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        out.sort();
        out
    }

    /// Every nontrivial subgroup of `P` in canonical order, built as joins of
    /// cyclic subgroups.
    pub fn nontrivial_subgroups(&self, pgroup: &Subgroup, cap: usize) -> Result<Vec<Subgroup>> {
        if pgroup.order() > cap {
            return Err(Error::CapExceeded { what: "subgroup enumeration order", cap });
        }
        let cyclic: Vec<Subgroup> =
            self.cyclic_subgroups(pgroup).into_iter().filter(|c| !c.is_trivial()).collect();
        let mut seen: HashSet<Subgroup> = cyclic.iter().cloned().collect();
        let mut all: Vec<Subgroup> = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subgroup_of(h) {
                        continue;
                    }
                    let j = self.join(h, c);
                    if seen.insert(j.clone()) {
                        next.push(j.clone());
                        all.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.sort();
        Ok(all)
    }

    pub fn is_elementary_abelian(&self, h: &Subgroup, p: u64) -> bool {
        let id = self.identity();
        self.is_abelian_subgroup(h) && h.generator_ids().all(|g| self.pow(g, p) == id)
    }
}

/// Cached per-subgroup data for one nontrivial subgroup of `S`.
#[derive(Default)]
struct SubgroupCache {
    normalizer: OnceLock<Subgroup>,
    centralizer: OnceLock<Subgroup>,
    residual_normalizer: OnceLock<Subgroup>,
}

/// A group with a chosen prime, Sylow subgroup `S` and `N = N_G(S)`.
///
/// Subgroups of `S` are enumerated once on first use; their normalizers,
/// centralizers and `O^{p'}(N_G(Q))` are memoized by index.
pub struct PLocalContext<'g> {
    group: &'g FiniteGroup,
    p: u64,
    sylow: Subgroup,
    sylow_normalizer: Subgroup,
    subgroup_cap: usize,
    subgroups: OnceLock<std::result::Result<(Vec<Subgroup>, HashMap<Subgroup, usize>), Error>>,
    caches: OnceLock<Vec<SubgroupCache>>,
    omega1: OnceLock<Subgroup>,
    center: OnceLock<Subgroup>,
}

impl<'g> PLocalContext<'g> {
    pub fn new(group: &'g FiniteGroup, p: u64) -> Result<Self> {
        let sylow = group.sylow_p(p)?;
        Ok(Self::with_sylow(group, p, sylow))
    }

    pub fn with_sylow(group: &'g FiniteGroup, p: u64, sylow: Subgroup) -> Self {
        let sylow_normalizer = group.normalizer(&sylow);
        PLocalContext {
            group,
            p,
            sylow,
            sylow_normalizer,
            subgroup_cap: SUBGROUP_ENUMERATION_CAP,
            subgroups: OnceLock::new(),
            caches: OnceLock::new(),
            omega1: OnceLock::new(),
            center: OnceLock::new(),
        }
    }

    pub fn with_subgroup_cap(mut self, cap: usize) -> Self {
        self.subgroup_cap = cap;
        self
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn sylow(&self) -> &Subgroup {
        &self.sylow
    }

    /// `N = N_G(S)`.
    pub fn n(&self) -> &Subgroup {
        &self.sylow_normalizer
    }

    pub fn omega1(&self) -> &Subgroup {
        self.omega1
            .get_or_init(|| self.group.omega1(&self.sylow, self.p).expect("S is a p-group"))
    }

    pub fn center(&self) -> &Subgroup {
        self.center.get_or_init(|| self.group.center(&self.sylow))
    }

    fn enumeration(&self) -> Result<&(Vec<Subgroup>, HashMap<Subgroup, usize>)> {
        self.subgroups
            .get_or_init(|| {
                let subs = self.group.nontrivial_subgroups(&self.sylow, self.subgroup_cap)?;
                let index = subs.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
                Ok((subs, index))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Nontrivial subgroups of `S` in canonical order.
    pub fn subgroups(&self) -> Result<&[Subgroup]> {
        Ok(&self.enumeration()?.0)
    }

    pub fn subgroup_index(&self, h: &Subgroup) -> Result<Option<usize>> {
        Ok(self.enumeration()?.1.get(h).copied())
    }

    fn cache(&self, i: usize) -> &SubgroupCache {
        let caches = self.caches.get_or_init(|| {
            let n = self.subgroups().map(<[_]>::len).unwrap_or(0);
            (0..n).map(|_| SubgroupCache::default()).collect()
        });
        &caches[i]
    }

    fn nth(&self, i: usize) -> &Subgroup {
        &self.subgroups().expect("enumerated before indexing")[i]
    }

    /// `N_G(Q)` for the `i`-th subgroup of `S`.
    pub fn normalizer(&self, i: usize) -> &Subgroup {
        self.cache(i).normalizer.get_or_init(|| self.group.normalizer(self.nth(i)))
    }

    /// `C_G(Q)` for the `i`-th subgroup of `S`.
    pub fn centralizer(&self, i: usize) -> &Subgroup {
        self.cache(i).centralizer.get_or_init(|| self.group.centralizer_of(self.nth(i)))
    }

    /// `O^{p'}(N_G(Q))` for the `i`-th subgroup of `S`.
    pub fn residual_normalizer(&self, i: usize) -> &Subgroup {
        self.cache(i)
            .residual_normalizer
            .get_or_init(|| self.group.o_pprime_residual(self.normalizer(i), self.p))
    }

    /// Indices of the subgroups contained in `bound`.
    pub fn subgroups_within(&self, bound: &Subgroup) -> Result<Vec<usize>> {
        Ok(self
            .subgroups()?
            .iter()
            .enumerate()
            .filter(|(_, q)| q.is_subgroup_of(bound))
            .map(|(i, _)| i)
            .collect())
    }

    /// One index per `S`-conjugacy class, the canonically smallest member.
    pub fn s_class_representatives(&self) -> Result<Vec<usize>> {
        let subs = self.subgroups()?;
        let mut covered = vec![false; subs.len()];
        let mut reps = Vec::new();
        for i in 0..subs.len() {
            if covered[i] {
                continue;
            }
            reps.push(i);
            for s in self.sylow.iter() {
                let c = self.group.conjugate(s, &subs[i]);
                if let Some(j) = self.subgroup_index(&c)? {
                    covered[j] = true;
                }
            }
        }
        Ok(reps)
    }

    pub fn omega1_is_central(&self) -> bool {
        self.omega1().is_subgroup_of(self.center())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    fn group(degree: usize, gens: &[&[usize]]) -> FiniteGroup {
        let gens: Vec<Permutation> = gens.iter().map(|g| perm(g)).collect();
        FiniteGroup::closure(degree, &gens).unwrap()
    }

    fn a4() -> FiniteGroup {
        group(4, &[&[1, 0, 3, 2], &[2, 3, 0, 1], &[1, 2, 0, 3]])
    }

    fn s3() -> FiniteGroup {
        group(3, &[&[1, 2, 0], &[1, 0, 2]])
    }

    fn s4() -> FiniteGroup {
        group(4, &[&[1, 2, 3, 0], &[1, 0, 2, 3]])
    }

    fn quaternion() -> FiniteGroup {
        // regular representation of Q8 on {±1, ±i, ±j, ±k}
        group(8, &[&[2, 3, 1, 0, 6, 7, 5, 4], &[4, 5, 7, 6, 1, 0, 2, 3]])
    }

    #[test]
    fn sylow_examples() {
        let c6 = group(5, &[&[1, 2, 0, 4, 3]]);
        assert_eq!(c6.sylow_p(3).unwrap().order(), 3);
        let g = a4();
        assert_eq!(g.sylow_p(2).unwrap(), g.derived_subgroup(&g.whole()));
        assert_eq!(s4().sylow_p(2).unwrap().order(), 8);
        assert_eq!(g.sylow_p(5).unwrap_err(), Error::PrimeNotDividing { p: 5, order: 12 });
        assert_eq!(g.sylow_p(4).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn sylow_subgroups_are_conjugate() {
        let g = s4();
        let s = g.sylow_p(2).unwrap();
        let mut sylows = HashSet::new();
        for x in 0..g.order() {
            sylows.insert(g.conjugate(x, &s));
        }
        assert_eq!(sylows.len(), 3);
        assert!(sylows.iter().all(|t| t.order() == 8));
    }

    #[test]
    fn omega1_examples() {
        let v4 = group(4, &[&[1, 0, 3, 2], &[2, 3, 0, 1]]);
        assert_eq!(v4.omega1(&v4.whole(), 2).unwrap(), v4.whole());
        let c9 = group(9, &[&[1, 2, 3, 4, 5, 6, 7, 8, 0]]);
        assert_eq!(c9.omega1(&c9.whole(), 3).unwrap().order(), 3);
        let g = s3();
        assert_eq!(
            g.omega1(&g.whole(), 3).unwrap_err(),
            Error::NotPGroup { p: 3, order: 6 }
        );
    }

    #[test]
    fn center_and_frattini_examples() {
        let v4 = group(4, &[&[1, 0, 3, 2], &[2, 3, 0, 1]]);
        assert_eq!(v4.center(&v4.whole()), v4.whole());
        assert!(v4.frattini_subgroup(&v4.whole(), 2).is_trivial());
        let q8 = quaternion();
        assert_eq!(q8.frattini_subgroup(&q8.whole(), 2).order(), 2);
    }

    #[test]
    fn residual_examples() {
        let v4 = group(4, &[&[1, 0, 3, 2], &[2, 3, 0, 1]]);
        assert_eq!(v4.o_pprime_residual(&v4.whole(), 2), v4.whole());
        let g = s3();
        assert_eq!(g.o_pprime_residual(&g.whole(), 3).order(), 3);
        let g = a4();
        let r = g.o_pprime_residual(&g.whole(), 2);
        assert_eq!(r.order(), 4);
        assert!(g.is_normal_in(&r, &g.whole()));
    }

    #[test]
    fn core_examples() {
        let v4 = group(4, &[&[1, 0, 3, 2], &[2, 3, 0, 1]]);
        assert!(v4.o_pprime_core(&v4.whole(), 2).is_trivial());
        assert!(v4.is_p_nilpotent(2).unwrap());
        let g = s3();
        assert_eq!(g.o_pprime_core(&g.whole(), 2).order(), 3);
        assert!(g.is_p_nilpotent(2).unwrap());
        let g = a4();
        assert!(g.o_pprime_core(&g.whole(), 2).is_trivial());
        assert!(!g.is_p_nilpotent(2).unwrap());
    }

    #[test]
    fn classification_examples() {
        let c9 = group(9, &[&[1, 2, 3, 4, 5, 6, 7, 8, 0]]);
        assert_eq!(c9.classify_p_group(&c9.whole(), 3).unwrap().kind, PGroupKind::Cyclic);
        let q8 = quaternion();
        assert_eq!(q8.order(), 8);
        assert_eq!(
            q8.classify_p_group(&q8.whole(), 2).unwrap().kind,
            PGroupKind::GeneralizedQuaternion
        );
        let d8 = s4().sylow_p(2).unwrap();
        assert_eq!(s4().classify_p_group(&d8, 2).unwrap().kind, PGroupKind::Other);
    }

    #[test]
    fn semidihedral_of_order_16() {
        // SD16 = <a, b | a^8, b^2, bab = a^3>, left regular action on a^i b^e
        let idx = |i: usize, e: usize| 2 * (i % 8) + e;
        let mut a = vec![0; 16];
        let mut b = vec![0; 16];
        for i in 0..8 {
            for e in 0..2 {
                // left multiplication: a·a^i b^e = a^{i+1} b^e; b·a^i b^e = a^{3i} b^{e+1}
                a[idx(i, e)] = idx(i + 1, e);
                b[idx(i, e)] = idx(3 * i, (e + 1) % 2);
            }
        }
        let g = FiniteGroup::closure(16, &[perm(&a), perm(&b)]).unwrap();
        assert_eq!(g.order(), 16);
        assert_eq!(g.classify_p_group(&g.whole(), 2).unwrap().kind, PGroupKind::Semidihedral);
    }

    #[test]
    fn subgroup_enumeration_examples() {
        let c3 = group(3, &[&[1, 2, 0]]);
        assert_eq!(c3.nontrivial_subgroups(&c3.whole(), 729).unwrap().len(), 1);
        let e9 = group(6, &[&[1, 2, 0, 3, 4, 5], &[0, 1, 2, 4, 5, 3]]);
        assert_eq!(e9.nontrivial_subgroups(&e9.whole(), 729).unwrap().len(), 5);
        let d8 = s4().sylow_p(2).unwrap();
        // D8 has 9 nontrivial subgroups
        assert_eq!(s4().nontrivial_subgroups(&d8, 729).unwrap().len(), 9);
        assert!(matches!(
            e9.nontrivial_subgroups(&e9.whole(), 8),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn context_caches() {
        let g = a4();
        let ctx = PLocalContext::new(&g, 2).unwrap();
        assert_eq!(ctx.n().order(), 12);
        assert_eq!(ctx.subgroups().unwrap().len(), 4);
        let reps = ctx.s_class_representatives().unwrap();
        assert_eq!(reps.len(), 4);
        let top = ctx.subgroup_index(ctx.sylow()).unwrap().unwrap();
        assert_eq!(ctx.normalizer(top).order(), 12);
        assert_eq!(ctx.residual_normalizer(top).order(), 4);
        assert!(ctx.omega1_is_central());
    }
}
