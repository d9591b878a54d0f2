//! Characters with values in a cyclic group standing in for roots of unity in
//! `k^×`, the group `K(G) ≅ Hom(N/J, k^×)`, and weak S-homomorphisms.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{check_invariants, exponent, invariant_factors};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::local::PLocalContext;
use crate::numtheory::{gcd, is_power_of, is_prime, p_prime_part};
use crate::quotient::QuotientGroup;
use crate::rho::{central_closed_form, j_subgroup, rho2_sylow};

/// The coefficient field, described only by what its unit group looks like.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum FieldSpec {
    AlgebraicallyClosed { p: u64 },
    Finite { p: u64, q: u64 },
}

impl FieldSpec {
    pub fn algebraically_closed(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadFieldSpec(format!("characteristic {p} is not prime")));
        }
        Ok(FieldSpec::AlgebraicallyClosed { p })
    }

    pub fn finite(p: u64, q: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadFieldSpec(format!("characteristic {p} is not prime")));
        }
        if q < p || !is_power_of(q, p) {
            return Err(Error::BadFieldSpec(format!("{q} is not a power of {p}")));
        }
        Ok(FieldSpec::Finite { p, q })
    }

    /// Parses `closed` or a field size for characteristic `p`.
    pub fn parse(text: &str, p: u64) -> Result<Self> {
        match text.trim() {
            "closed" | "algebraically-closed" => Self::algebraically_closed(p),
            other => {
                let q = u64::from_str(other)
                    .map_err(|_| Error::BadFieldSpec(format!("expected `closed` or a field size, got `{other}`")))?;
                Self::finite(p, q)
            }
        }
    }

    pub fn p(&self) -> u64 {
        match *self {
            FieldSpec::AlgebraicallyClosed { p } | FieldSpec::Finite { p, .. } => p,
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::AlgebraicallyClosed { p } => Self::algebraically_closed(p).map(drop),
            FieldSpec::Finite { p, q } => Self::finite(p, q).map(drop),
        }
    }

    /// Largest cyclic subgroup of `k^×` usable for a group of exponent `d`.
    pub fn value_modulus(&self, d: u64) -> u64 {
        match *self {
            FieldSpec::AlgebraicallyClosed { p } => p_prime_part(d, p),
            FieldSpec::Finite { q, .. } => gcd(d, q - 1),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::AlgebraicallyClosed { p } => write!(f, "algebraically closed, char {p}"),
            FieldSpec::Finite { q, .. } => write!(f, "F_{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomGroupDescriptor {
    pub invariants: Vec<u64>,
    pub order: u64,
}

/// Invariant factors of `Hom(A, k^×)` for the abelian group `A` with the given
/// invariants.
pub fn hom_to_units(a_invariants: &[u64], field: FieldSpec) -> Result<HomGroupDescriptor> {
    field.validate()?;
    check_invariants(a_invariants)?;
    let reduced: Vec<u64> = a_invariants.iter().map(|&d| field.value_modulus(d)).collect();
    let invariants = invariant_factors(&reduced);
    let order = invariants.iter().product();
    Ok(HomGroupDescriptor { invariants, order })
}

/// A homomorphism from a subgroup into `Z/d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicCharacter {
    #[serde(skip)]
    domain: Subgroup,
    pub modulus: u64,
    /// Values at the domain's elements in canonical order.
    pub values: Vec<u64>,
}

impl CyclicCharacter {
    pub fn trivial(domain: &Subgroup, modulus: u64) -> Self {
        CyclicCharacter { domain: domain.clone(), modulus, values: vec![0; domain.order()] }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn value(&self, g: usize) -> Option<u64> {
        self.domain.position(g).map(|i| self.values[i])
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Order of the character in the character group.
    pub fn order(&self) -> u64 {
        self.values
            .iter()
            .map(|&v| self.modulus / gcd(v, self.modulus))
            .fold(1, num_integer::lcm)
    }

    pub fn kernel(&self, g: &FiniteGroup) -> Subgroup {
        g.generate(self.domain.iter().zip(&self.values).filter(|(_, &v)| v == 0).map(|(x, _)| x))
    }

    /// Exhaustive check of `χ(ab) = χ(a) + χ(b)`.
    pub fn is_homomorphism(&self, g: &FiniteGroup) -> bool {
        let elems = self.domain.to_vec();
        elems.iter().zip(&self.values).all(|(&a, &va)| {
            elems.iter().zip(&self.values).all(|(&b, &vb)| {
                self.value(g.mul(a, b)) == Some((va + vb) % self.modulus)
            })
        })
    }
}

/// Every homomorphism `domain → Z/modulus` whose kernel contains `kernel`,
/// in lexicographic order of generator values.
pub fn homs_killing(
    g: &FiniteGroup,
    domain: &Subgroup,
    kernel: &Subgroup,
    modulus: u64,
) -> Result<Vec<CyclicCharacter>> {
    if !kernel.is_subgroup_of(domain) || !g.is_normal_in(kernel, domain) {
        return Err(Error::NotNormal);
    }
    let top = g.join(kernel, &g.derived_subgroup(domain));
    let quotient = QuotientGroup::new(g, domain, &top)?;
    let k = quotient.order();

    // greedy generators of the abelian quotient, largest order first
    let mut gens: Vec<usize> = Vec::new();
    let mut span = FixedBitSet::with_capacity(k);
    span.insert(quotient.identity());
    while span.count_ones(..) < k {
        let pick = (0..k)
            .filter(|&c| !span.contains(c))
            .max_by_key(|&c| (quotient.element_order(c), std::cmp::Reverse(c)))
            .expect("span is proper");
        gens.push(pick);
        span = coset_span(&quotient, &gens);
    }

    let steps: Vec<u64> = gens
        .iter()
        .map(|&c| modulus / gcd(modulus, quotient.element_order(c)))
        .collect();
    let counts: Vec<u64> = steps.iter().map(|&s| modulus / s).collect();
    let mut out = Vec::new();
    let mut digits = vec![0u64; gens.len()];
    loop {
        let assignment: Vec<u64> = digits.iter().zip(&steps).map(|(d, s)| d * s).collect();
        if let Some(coset_values) = extend(&quotient, &gens, &assignment, modulus) {
            let values = domain
                .iter()
                .map(|x| coset_values[quotient.coset(x).expect("domain element")])
                .collect();
            out.push(CyclicCharacter { domain: domain.clone(), modulus, values });
        }
        // odometer, last digit fastest
        let mut i = digits.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < counts[i] {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn coset_span(quotient: &QuotientGroup, gens: &[usize]) -> FixedBitSet {
    let mut span = FixedBitSet::with_capacity(quotient.order());
    span.insert(quotient.identity());
    let mut queue = VecDeque::from([quotient.identity()]);
    while let Some(c) = queue.pop_front() {
        for &x in gens {
            let next = quotient.mul(c, x);
            if !span.put(next) {
                queue.push_back(next);
            }
        }
    }
    span
}

// Extends generator values along the Cayley graph; None on any inconsistency.
fn extend(quotient: &QuotientGroup, gens: &[usize], values: &[u64], modulus: u64) -> Option<Vec<u64>> {
    let mut out = vec![u64::MAX; quotient.order()];
    out[quotient.identity()] = 0;
    let mut queue = VecDeque::from([quotient.identity()]);
    while let Some(c) = queue.pop_front() {
        for (&x, &v) in gens.iter().zip(values) {
            let next = quotient.mul(c, x);
            let val = (out[c] + v) % modulus;
            if out[next] == u64::MAX {
                out[next] = val;
                queue.push_back(next);
            } else if out[next] != val {
                return None;
            }
        }
    }
    Some(out)
}

/// Value modulus for characters of `domain` killing `kernel`: the exponent of
/// the relevant part of the abelianized quotient.
pub fn character_modulus(
    g: &FiniteGroup,
    domain: &Subgroup,
    kernel: &Subgroup,
    field: FieldSpec,
) -> Result<u64> {
    if !kernel.is_subgroup_of(domain) || !g.is_normal_in(kernel, domain) {
        return Err(Error::NotNormal);
    }
    let top = g.join(kernel, &g.derived_subgroup(domain));
    let inv = QuotientGroup::new(g, domain, &top)?.abelian_invariants()?;
    Ok(field.value_modulus(exponent(&inv)))
}

/// All characters of `domain` into `k^×` that kill `kernel`.
pub fn characters_vanishing_on(
    g: &FiniteGroup,
    domain: &Subgroup,
    kernel: &Subgroup,
    field: FieldSpec,
) -> Result<Vec<CyclicCharacter>> {
    field.validate()?;
    let modulus = character_modulus(g, domain, kernel, field)?;
    homs_killing(g, domain, kernel, modulus)
}

#[derive(Clone, Debug)]
pub struct KGroup {
    pub j: Subgroup,
    pub quotient_order: usize,
    /// Invariants of the abelianization of `N/J`.
    pub quotient_invariants: Vec<u64>,
    pub hom: HomGroupDescriptor,
}

/// `Hom(N/J, k^×)`.
pub fn k_group(ctx: &PLocalContext<'_>, field: FieldSpec) -> Result<KGroup> {
    let g = ctx.group();
    let j = j_subgroup(ctx)?;
    let n = ctx.n();
    if !g.is_normal_in(&j, n) {
        return Err(Error::NotNormal);
    }
    let top = g.join(&j, &g.derived_subgroup(n));
    let quotient_invariants = QuotientGroup::new(g, n, &top)?.abelian_invariants()?;
    let hom = hom_to_units(&quotient_invariants, field)?;
    Ok(KGroup { quotient_order: n.order() / j.order(), j, quotient_invariants, hom })
}

/// A function `G → Z/d` given by its values in canonical element order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakHomTable {
    pub modulus: u64,
    pub values: Vec<u64>,
}

impl WeakHomTable {
    pub fn zero(g: &FiniteGroup, modulus: u64) -> Self {
        WeakHomTable { modulus, values: vec![0; g.order()] }
    }
}

/// Memo of `ψ_Q` per subgroup `Q`.
struct Extensions<'a, 'g> {
    ctx: &'a PLocalContext<'g>,
    chi: &'a CyclicCharacter,
    cache: HashMap<Subgroup, (Subgroup, CyclicCharacter)>,
}

impl Extensions<'_, '_> {
    /// `(C_G(Q), ψ_Q)`: the unique character of `C_G(Q)` killing `S·C_G(Q)'`
    /// that agrees with `χ` on `N ∩ C_G(Q)`.
    fn get(&mut self, q: &Subgroup) -> Result<&(Subgroup, CyclicCharacter)> {
        if !self.cache.contains_key(q) {
            let g = self.ctx.group();
            let cq = g.centralizer_of(q);
            let kernel = g.join(self.ctx.sylow(), &g.derived_subgroup(&cq));
            let candidates = homs_killing(g, &cq, &kernel, self.chi.modulus)?;
            let n = self.ctx.n();
            let matching: Vec<CyclicCharacter> = candidates
                .into_iter()
                .filter(|psi| {
                    cq.iter()
                        .filter(|&x| n.contains(x))
                        .all(|x| psi.value(x) == self.chi.value(x))
                })
                .collect();
            if matching.len() != 1 {
                return Err(Error::HypothesisFailed(format!(
                    "{} extensions of the character to C_G(Q) for |Q| = {}",
                    matching.len(),
                    q.order()
                )));
            }
            let psi = matching.into_iter().next().expect("one match");
            self.cache.insert(q.clone(), (cq, psi));
        }
        Ok(&self.cache[q])
    }
}

/// `S ∩ gSg⁻¹` as a subgroup.
fn sylow_intersection(g: &FiniteGroup, s: &Subgroup, x: usize) -> Subgroup {
    let mut bits = g.conjugate(x, s).members().clone();
    bits.intersect_with(s.members());
    g.closed_set(bits)
}

/// Builds the weak S-homomorphism attached to a character `χ` of `N` whose
/// kernel contains `ρ²(S)`.
pub fn build_weak_hom(ctx: &PLocalContext<'_>, chi: &CyclicCharacter) -> Result<WeakHomTable> {
    let g = ctx.group();
    let flags = central_closed_form(ctx)?;
    if !flags.omega1_central {
        return Err(Error::HypothesisFailed("Ω₁(S) is not central in S".into()));
    }
    if !flags.n_controls_fusion {
        return Err(Error::HypothesisFailed("N_G(S) does not control fusion".into()));
    }
    if chi.domain() != ctx.n() {
        return Err(Error::HypothesisFailed("the character must be defined on N_G(S)".into()));
    }
    let rho2 = rho2_sylow(ctx)?;
    if rho2.iter().any(|x| chi.value(x) != Some(0)) {
        return Err(Error::HypothesisFailed("ρ²(S) is not in the kernel".into()));
    }

    let s = ctx.sylow();
    let n = ctx.n();
    let p = ctx.p();
    let modulus = chi.modulus;
    let mut omegas: HashMap<Subgroup, Subgroup> = HashMap::new();
    let mut ext = Extensions { ctx, chi, cache: HashMap::new() };
    let mut values = vec![0u64; g.order()];
    for x in 0..g.order() {
        let inter = sylow_intersection(g, s, x);
        if inter.is_trivial() {
            continue;
        }
        let q = match omegas.get(&inter) {
            Some(q) => q.clone(),
            None => {
                let q = g.omega1(&inter, p)?;
                omegas.insert(inter, q.clone());
                q
            }
        };
        let (cq, psi) = ext.get(&q)?;
        let mut factorizations = cq
            .iter()
            .map(|c| (c, g.mul(g.inv(c), x)))
            .filter(|&(_, m)| n.contains(m))
            .map(|(c, m)| {
                (psi.value(c).expect("c in C_Q") + chi.value(m).expect("m in N")) % modulus
            });
        let theta = factorizations.next().ok_or(Error::NoFactorization(x))?;
        if let Some(other) = factorizations.next() {
            if other != theta {
                return Err(Error::InvariantViolated(format!(
                    "two factorizations of element {x} give different values"
                )));
            }
        }
        values[x] = theta;
    }
    Ok(WeakHomTable { modulus, values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum WeakHomViolation {
    /// Nonzero on `S` or on an element with `S ∩ gSg⁻¹ = 1`.
    Vanishing { g: usize },
    /// `θ(gh) ≠ θ(g) + θ(h)` although `S ∩ gSg⁻¹ ∩ ghS(gh)⁻¹ ≠ 1`.
    Multiplicative { g: usize, h: usize },
}

/// Checks both weak S-homomorphism axioms over all elements and pairs,
/// returning the first violation in canonical order.
pub fn verify_weak_hom(ctx: &PLocalContext<'_>, theta: &WeakHomTable) -> Option<WeakHomViolation> {
    let g = ctx.group();
    let s = ctx.sylow();
    let s_elems = s.to_vec();
    // nonidentity part of S ∩ xSx⁻¹, indexed by position in S
    let intersections: Vec<FixedBitSet> = (0..g.order())
        .into_par_iter()
        .map(|x| {
            let mut bits = FixedBitSet::with_capacity(s_elems.len());
            for (i, &y) in s_elems.iter().enumerate() {
                if y != g.identity() && s.contains(g.conj(g.inv(x), y)) {
                    bits.insert(i);
                }
            }
            bits
        })
        .collect();
    let vanishing = (0..g.order()).find(|&x| {
        (s.contains(x) || intersections[x].is_clear()) && theta.values[x] != 0
    });
    if let Some(x) = vanishing {
        return Some(WeakHomViolation::Vanishing { g: x });
    }
    let d = theta.modulus;
    (0..g.order()).into_par_iter().find_map_first(|a| {
        if intersections[a].is_clear() {
            return None;
        }
        (0..g.order()).find_map(|b| {
            let ab = g.mul(a, b);
            let linked = !intersections[a].is_disjoint(&intersections[ab]);
            let ok = (theta.values[a] + theta.values[b]) % d == theta.values[ab];
            (linked && !ok).then_some(WeakHomViolation::Multiplicative { g: a, h: b })
        })
    })
}
