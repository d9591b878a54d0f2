//! Fully enumerated permutation groups and their subgroups.
//!
//! A [`FiniteGroup`] stores every element explicitly, sorted lexicographically
//! by image sequence, so that an element is identified by its position in that
//! order. Subgroups are element sets over those positions.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::numtheory::factorize;
use crate::perm::Permutation;

/// Default bound on the number of enumerated elements.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000;

/// Groups up to this order get a full multiplication table on first use.
const TABLE_LIMIT: usize = 2048;

#[derive(Clone)]
pub struct FiniteGroup {
    name: Option<String>,
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    generator_ids: Vec<u32>,
    identity: usize,
    inverses: Vec<u32>,
    order_primes: Vec<u64>,
    table: OnceLock<Option<Vec<u32>>>,
    lookup: OnceLock<Option<BaseLookup>>,
}

/// Points whose images determine an element, with the element index keyed by
/// those images packed 16 bits each.
#[derive(Clone)]
struct BaseLookup {
    base: Vec<usize>,
    index: HashMap<u64, u32>,
}

const MAX_BASE: usize = 4;

fn base_key(base: &[usize], image: impl Fn(usize) -> usize) -> u64 {
    base.iter().fold(0u64, |k, &b| (k << 16) | image(b) as u64)
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("degree", &self.degree)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl FiniteGroup {
    /// Enumerates the group generated by `generators` with the default cap.
    pub fn closure(degree: usize, generators: &[Permutation]) -> Result<Self> {
        Self::closure_with_cap(degree, generators, DEFAULT_ELEMENT_CAP)
    }

    pub fn closure_with_cap(degree: usize, generators: &[Permutation], cap: usize) -> Result<Self> {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::MalformedPermutation(format!(
                    "generator {g} has degree {} but the group degree is {degree}",
                    g.degree()
                )));
            }
        }
        let identity = Permutation::identity(degree);
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        while let Some(current) = queue.pop_front() {
            for g in generators {
                let next = current.compose(g);
                if !seen.contains(&next) {
                    if seen.len() >= cap {
                        return Err(Error::CapExceeded { what: "group order", cap });
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort_unstable();
        Ok(Self::from_sorted_elements(degree, generators.to_vec(), elements))
    }

    fn from_sorted_elements(
        degree: usize,
        generators: Vec<Permutation>,
        elements: Vec<Permutation>,
    ) -> Self {
        let n = elements.len();
        let find = |p: &Permutation| elements.binary_search(p).expect("closed set") as u32;
        let identity = find(&Permutation::identity(degree)) as usize;
        let inverses = elements.iter().map(|e| find(&e.inverse())).collect();
        let generator_ids = generators.iter().map(find).collect();
        FiniteGroup {
            name: None,
            degree,
            generators,
            elements,
            generator_ids,
            identity,
            inverses,
            order_primes: factorize(n as u64).into_iter().map(|(r, _)| r).collect(),
            table: OnceLock::new(),
            lookup: OnceLock::new(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn generator_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.generator_ids.iter().map(|&g| g as usize)
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, id: usize) -> &Permutation {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, perm: &Permutation) -> Option<usize> {
        if let Some(lookup) = self.lookup() {
            let id = *lookup.index.get(&base_key(&lookup.base, |b| perm.apply(b)))? as usize;
            return (self.elements[id] == *perm).then_some(id);
        }
        self.elements.binary_search(perm).ok()
    }

    fn lookup(&self) -> Option<&BaseLookup> {
        self.lookup
            .get_or_init(|| (self.order() > TABLE_LIMIT).then(|| self.build_lookup()).flatten())
            .as_ref()
    }

    // Greedy base: add a point separating the first colliding pair until all
    // keys are distinct.
    fn build_lookup(&self) -> Option<BaseLookup> {
        let mut base = Vec::new();
        loop {
            let mut index = HashMap::with_capacity(self.order());
            let mut clash = None;
            for (i, e) in self.elements.iter().enumerate() {
                if let Some(j) = index.insert(base_key(&base, |b| e.apply(b)), i as u32) {
                    clash = Some((j as usize, i));
                    break;
                }
            }
            let Some((j, i)) = clash else {
                return Some(BaseLookup { base, index });
            };
            if base.len() == MAX_BASE {
                return None;
            }
            let (a, b) = (&self.elements[i], &self.elements[j]);
            base.push((0..self.degree).find(|&x| a.apply(x) != b.apply(x))?);
        }
    }

    pub fn require(&self, perm: &Permutation) -> Result<usize> {
        if perm.degree() != self.degree {
            return Err(Error::ForeignElement);
        }
        self.index_of(perm).ok_or(Error::ForeignElement)
    }

    fn table(&self) -> Option<&[u32]> {
        self.table
            .get_or_init(|| (self.order() <= TABLE_LIMIT).then(|| self.build_table()))
            .as_deref()
    }

    // Row a holds a∘b for every b. Rows are propagated from generators:
    // (g∘a)∘b = g∘(a∘b), so row(g∘a) = left(g) applied to row(a).
    fn build_table(&self) -> Vec<u32> {
        let n = self.order();
        let lookup = |p: &Permutation| self.index_of(p).expect("closed") as u32;
        let left: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|g| self.elements.iter().map(|b| lookup(&g.compose(b))).collect())
            .collect();
        let mut table = vec![u32::MAX; n * n];
        let mut done = vec![false; n];
        let id = self.identity;
        for b in 0..n {
            table[id * n + b] = b as u32;
        }
        done[id] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(a) = queue.pop_front() {
            for row_g in &left {
                let c = row_g[a] as usize;
                if done[c] {
                    continue;
                }
                done[c] = true;
                for b in 0..n {
                    table[c * n + b] = row_g[table[a * n + b] as usize];
                }
                queue.push_back(c);
            }
        }
        table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => {
                let (x, y) = (&self.elements[a], &self.elements[b]);
                match self.lookup() {
                    Some(lookup) => {
                        let key = base_key(&lookup.base, |pt| x.apply(y.apply(pt)));
                        lookup.index[&key] as usize
                    }
                    None => self.index_of(&x.compose(y)).expect("group is closed"),
                }
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    pub fn pow(&self, a: usize, mut k: u64) -> usize {
        let mut result = self.identity;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul(result, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(base, base);
            }
        }
        result
    }

    /// Signed exponent; negative powers use the inverse.
    pub fn zpow(&self, a: usize, k: i64) -> usize {
        if k >= 0 {
            self.pow(a, k as u64)
        } else {
            self.pow(self.inv(a), k.unsigned_abs())
        }
    }

    /// Divides `|G|` down prime by prime while `a` still powers to the identity.
    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = self.order() as u64;
        for &r in &self.order_primes {
            while k.is_multiple_of(r) && self.pow(a, k / r) == self.identity {
                k /= r;
            }
        }
        k
    }

    /// `g h g⁻¹`.
    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// `[a, b] = a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        let gens: Vec<usize> = self.generator_ids().collect();
        gens.iter().all(|&a| gens.iter().all(|&b| self.commute(a, b)))
    }

    // ---- subgroup construction -------------------------------------------

    fn empty_bits(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.order())
    }

    pub fn whole(&self) -> Subgroup {
        let mut members = self.empty_bits();
        members.insert_range(..);
        Subgroup {
            elements: (0..self.order() as u32).collect(),
            members,
            generators: self.generator_ids.clone(),
        }
    }

    pub fn trivial(&self) -> Subgroup {
        let mut members = self.empty_bits();
        members.insert(self.identity);
        Subgroup { elements: vec![self.identity as u32], members, generators: Vec::new() }
    }

    /// Smallest subgroup containing `seeds`. The retained generators are the
    /// seeds that were not already in the subgroup built from earlier ones.
    pub fn generate<I>(&self, seeds: I) -> Subgroup
    where
        I: IntoIterator<Item = usize>,
    {
        let mut members = self.empty_bits();
        members.insert(self.identity);
        let mut elements = vec![self.identity as u32];
        let mut generators: Vec<u32> = Vec::new();
        for seed in seeds {
            if members.contains(seed) {
                continue;
            }
            generators.push(seed as u32);
            // old elements are closed under old generators, so they only need the new one
            let existing = elements.len();
            let mut cursor = 0;
            while cursor < elements.len() {
                let e = elements[cursor] as usize;
                let gens: &[u32] =
                    if cursor < existing { &generators[generators.len() - 1..] } else { &generators };
                for &g in gens {
                    let h = self.mul(e, g as usize);
                    if !members.put(h) {
                        elements.push(h as u32);
                    }
                }
                cursor += 1;
            }
        }
        elements.sort_unstable();
        Subgroup { elements, members, generators }
    }

    /// Subgroup generated by explicit permutations of this group.
    pub fn subgroup_generated(&self, seed: &[Permutation]) -> Result<Subgroup> {
        let ids = seed.iter().map(|p| self.require(p)).collect::<Result<Vec<_>>>()?;
        Ok(self.generate(ids))
    }

    /// Wraps a set already known to be a subgroup; checks closure.
    pub fn subgroup_from_set(&self, members: FixedBitSet) -> Result<Subgroup> {
        let count = members.count_ones(..);
        let sub = self.generate(members.ones());
        if sub.order() != count {
            return Err(Error::NotASubgroup);
        }
        Ok(sub)
    }

    pub(crate) fn closed_set(&self, members: FixedBitSet) -> Subgroup {
        debug_assert!(members.contains(self.identity));
        let sub = self.generate(members.ones());
        debug_assert_eq!(sub.order(), members.count_ones(..), "set is not closed");
        sub
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut m = a.members.clone();
        m.intersect_with(&b.members);
        self.closed_set(m)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        self.generate(a.generator_ids().chain(b.generator_ids()))
    }

    pub fn join_all<'a, I>(&self, parts: I) -> Subgroup
    where
        I: IntoIterator<Item = &'a Subgroup>,
    {
        let mut gens = Vec::new();
        for part in parts {
            gens.extend(part.generator_ids());
        }
        self.generate(gens)
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: usize, h: &Subgroup) -> Subgroup {
        let gi = self.inv(g);
        let mut members = self.empty_bits();
        let mut elements: Vec<u32> = h
            .elements
            .iter()
            .map(|&x| {
                let c = self.mul(self.mul(g, x as usize), gi);
                members.insert(c);
                c as u32
            })
            .collect();
        elements.sort_unstable();
        let generators = h
            .generators
            .iter()
            .map(|&x| self.mul(self.mul(g, x as usize), gi) as u32)
            .collect();
        Subgroup { elements, members, generators }
    }

    /// Whether `g X g⁻¹ ⊆ target`, tested on generators of `x`.
    pub fn conjugates_into(&self, g: usize, x: &Subgroup, target: &Subgroup) -> bool {
        x.generator_ids().all(|h| target.contains(self.conj(g, h)))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        self.normalizer_in(&self.whole(), h)
    }

    /// `N_K(H) = {k ∈ K : k H k⁻¹ = H}`.
    pub fn normalizer_in(&self, k: &Subgroup, h: &Subgroup) -> Subgroup {
        let mut m = self.empty_bits();
        for g in k.iter() {
            if self.conjugates_into(g, h, h) {
                m.insert(g);
            }
        }
        self.closed_set(m)
    }

    pub fn centralizer<I>(&self, xs: I) -> Subgroup
    where
        I: IntoIterator<Item = usize>,
    {
        self.centralizer_in(&self.whole(), xs)
    }

    pub fn centralizer_in<I>(&self, k: &Subgroup, xs: I) -> Subgroup
    where
        I: IntoIterator<Item = usize>,
    {
        let xs: Vec<usize> = xs.into_iter().collect();
        let mut m = self.empty_bits();
        for g in k.iter() {
            if xs.iter().all(|&x| self.commute(g, x)) {
                m.insert(g);
            }
        }
        self.closed_set(m)
    }

    /// Centralizer of a subgroup, using its generators.
    pub fn centralizer_of(&self, h: &Subgroup) -> Subgroup {
        self.centralizer(h.generator_ids())
    }

    pub fn center(&self, h: &Subgroup) -> Subgroup {
        self.centralizer_in(h, h.generator_ids())
    }

    pub fn is_normal_in(&self, n: &Subgroup, h: &Subgroup) -> bool {
        h.generator_ids().all(|g| self.conjugates_into(g, n, n))
    }

    /// Smallest normal subgroup of `h` containing `seeds`.
    pub fn normal_closure<I>(&self, h: &Subgroup, seeds: I) -> Subgroup
    where
        I: IntoIterator<Item = usize>,
    {
        let mut d = self.generate(seeds);
        loop {
            let missing = h.generator_ids().find_map(|g| {
                d.generator_ids().map(|x| self.conj(g, x)).find(|&c| !d.contains(c))
            });
            match missing {
                Some(c) => d = self.generate(d.generator_ids().chain([c])),
                None => return d,
            }
        }
    }

    /// `H' = [H, H]`: normal closure of the commutators of generators.
    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        let gens: Vec<usize> = h.generator_ids().collect();
        let mut comms = Vec::new();
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i + 1..] {
                comms.push(self.commutator(a, b));
            }
        }
        self.normal_closure(h, comms)
    }

    /// `{ab : a ∈ A, b ∈ B}` as a membership set.
    pub fn product_set<A, B>(&self, a: A, b: B) -> FixedBitSet
    where
        A: IntoIterator<Item = usize>,
        B: IntoIterator<Item = usize>,
    {
        let mut m = self.empty_bits();
        let bs: Vec<usize> = b.into_iter().collect();
        for x in a {
            for &y in &bs {
                m.insert(self.mul(x, y));
            }
        }
        m
    }

    pub fn bits_from<I: IntoIterator<Item = usize>>(&self, ids: I) -> FixedBitSet {
        let mut m = self.empty_bits();
        for id in ids {
            m.insert(id);
        }
        m
    }

    pub fn is_abelian_subgroup(&self, h: &Subgroup) -> bool {
        let gens: Vec<usize> = h.generator_ids().collect();
        gens.iter().all(|&a| gens.iter().all(|&b| self.commute(a, b)))
    }

    /// Re-enumerates a subgroup as a group in its own right.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<FiniteGroup> {
        let gens: Vec<Permutation> =
            h.generator_ids().map(|g| self.elements[g].clone()).collect();
        let elements: Vec<Permutation> = h.iter().map(|g| self.elements[g].clone()).collect();
        Ok(Self::from_sorted_elements(self.degree, gens, elements))
    }
}

/// A subgroup of some [`FiniteGroup`], stored as a sorted set of element ids.
///
/// Equality, hashing and ordering only look at the element set, so two
/// subgroups with different generating sets compare equal.
#[derive(Clone)]
pub struct Subgroup {
    elements: Vec<u32>,
    members: FixedBitSet,
    generators: Vec<u32>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.contains(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.elements.iter().map(|&e| e as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn generator_ids(&self) -> impl Iterator<Item = usize> + Clone + '_ {
        self.generators.iter().map(|&g| g as usize)
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.members.is_subset(&other.members)
    }

    /// Position of `g` in the sorted element list.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.elements.binary_search(&(g as u32)).ok()
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical subgroup order: by order, then lexicographically by elements.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.elements.cmp(&other.elements))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.generators)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    fn s3() -> FiniteGroup {
        FiniteGroup::closure(3, &[perm(&[1, 2, 0]), perm(&[1, 0, 2])]).unwrap()
    }

    fn a4() -> FiniteGroup {
        FiniteGroup::closure(4, &[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1]), perm(&[1, 2, 0, 3])])
            .unwrap()
    }

    #[test]
    fn closure_examples() {
        let c3 = FiniteGroup::closure(3, &[perm(&[1, 2, 0])]).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(s3().order(), 6);
        let v4 = FiniteGroup::closure(4, &[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])]).unwrap();
        assert_eq!(v4.order(), 4);
        assert!((0..4).all(|g| v4.pow(g, 2) == v4.identity()));
    }

    #[test]
    fn closure_respects_cap() {
        let gens = [perm(&[1, 2, 3, 4, 0]), perm(&[1, 0, 2, 3, 4])];
        assert_eq!(
            FiniteGroup::closure_with_cap(5, &gens, 100).unwrap_err(),
            Error::CapExceeded { what: "group order", cap: 100 }
        );
    }

    #[test]
    fn degree_mismatch_is_malformed() {
        assert!(matches!(
            FiniteGroup::closure(4, &[perm(&[1, 2, 0])]),
            Err(Error::MalformedPermutation(_))
        ));
    }

    #[test]
    fn table_and_direct_products_agree() {
        let g = a4();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let direct = g.index_of(&g.element(a).compose(g.element(b))).unwrap();
                assert_eq!(g.mul(a, b), direct);
            }
        }
    }

    #[test]
    fn subgroup_generated_examples() {
        let g = s3();
        assert!(g.subgroup_generated(&[Permutation::identity(3)]).unwrap().is_trivial());
        let three_cycles = [perm(&[1, 2, 0]), perm(&[2, 0, 1])];
        assert_eq!(g.subgroup_generated(&three_cycles).unwrap().order(), 3);
        let a4 = a4();
        let v = a4.subgroup_generated(&[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])]).unwrap();
        assert_eq!(v.order(), 4);
        assert_eq!(
            g.subgroup_generated(&[perm(&[0, 1, 2, 3])]).unwrap_err(),
            Error::ForeignElement
        );
    }

    #[test]
    fn normalizer_and_centralizer_examples() {
        let g = s3();
        assert_eq!(g.centralizer([g.identity()]).order(), 6);
        let c3 = g.generate([g.index_of(&perm(&[1, 2, 0])).unwrap()]);
        assert_eq!(g.normalizer(&c3).order(), 6);
        let t = g.index_of(&perm(&[1, 0, 2])).unwrap();
        // scan oracle: count elements commuting with t
        let scan = (0..6).filter(|&x| g.commute(x, t)).count();
        assert_eq!(scan, 2);
        assert_eq!(g.centralizer([t]).order(), 2);
    }

    #[test]
    fn derived_subgroup_examples() {
        let v4 = FiniteGroup::closure(4, &[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])]).unwrap();
        assert!(v4.derived_subgroup(&v4.whole()).is_trivial());
        let g = s3();
        assert_eq!(g.derived_subgroup(&g.whole()).order(), 3);
        let a4 = a4();
        assert_eq!(a4.derived_subgroup(&a4.whole()).order(), 4);
    }

    #[test]
    fn product_set_examples() {
        let g = a4();
        let v = g.derived_subgroup(&g.whole());
        let c3 = g.generate([g.index_of(&perm(&[1, 2, 0, 3])).unwrap()]);
        assert_eq!(g.product_set(g.trivial().iter(), v.iter()), *v.members());
        assert_eq!(g.product_set(c3.iter(), c3.iter()), *c3.members());
        assert_eq!(g.product_set(v.iter(), c3.iter()).count_ones(..), 12);
    }

    #[test]
    fn intersection_join_conjugate() {
        let g = s3();
        let subs: Vec<Subgroup> = (0..6).map(|x| g.generate([x])).collect();
        let t1 = &subs[g.index_of(&perm(&[1, 0, 2])).unwrap()];
        let t2 = &subs[g.index_of(&perm(&[0, 2, 1])).unwrap()];
        assert!(g.intersection(t1, t2).is_trivial());
        assert_eq!(g.join(t1, t2).order(), 6);
        let c = g.index_of(&perm(&[1, 2, 0])).unwrap();
        let conj = g.conjugate(c, t1);
        assert_eq!(conj.order(), 2);
        assert_ne!(&conj, t1);
    }

    #[test]
    fn subgroup_from_set_rejects_non_subgroups() {
        let g = s3();
        let bits = g.bits_from([g.identity(), g.index_of(&perm(&[1, 2, 0])).unwrap()]);
        assert_eq!(g.subgroup_from_set(bits).unwrap_err(), Error::NotASubgroup);
    }
}
