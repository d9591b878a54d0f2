//! Metacyclic p-groups `⟨x, y | x^{p^m} = 1, y^{p^n} = x^{p^q}, y x y⁻¹ = x^{1+p^l}⟩`
//! for odd `p`: normal-form arithmetic, permutation realizations, recognition
//! inside a larger group, automorphism search, and the structural subgroups
//! `Z(S)`, `E = Ω₁(S)` and `C_S(E)`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::strongly_embedded_core;
use crate::group::{FiniteGroup, Subgroup};
use crate::local::PLocalContext;
use crate::numtheory::{is_prime, valuation};
use crate::perm::Permutation;

/// Groups up to this order are realized by their regular action.
pub const REGULAR_LIMIT: u64 = 4096;

/// Default bound on `|S|` for the automorphism search.
pub const AUTOMORPHISM_SEARCH_CAP: usize = 243;

/// Normal form `x^i y^j` with `0 ≤ i < p^m`, `0 ≤ j < p^n`.
pub type NormalForm = (u64, u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MetacyclicPresentation {
    pub p: u64,
    pub m: u32,
    pub n: u32,
    pub l: u32,
    pub q: u32,
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

impl MetacyclicPresentation {
    /// Validates `1 ≤ l, q ≤ m ≤ l + n` and both defining congruences.
    pub fn new(p: u64, m: u32, n: u32, l: u32, q: u32) -> Result<Self> {
        let bad = |msg: String| Err(Error::BadParameters(msg));
        if p == 2 || !is_prime(p) {
            return bad(format!("p = {p} must be an odd prime"));
        }
        if m == 0 || n == 0 || l == 0 || q == 0 {
            return bad("all exponents must be positive".into());
        }
        if l > m || q > m {
            return bad(format!("need l, q ≤ m (l = {l}, q = {q}, m = {m})"));
        }
        if m > l + n {
            return bad(format!("need m ≤ l + n (m = {m}, l + n = {})", l + n));
        }
        if (m + n) as f64 * (p as f64).log2() > 40.0 {
            return bad("order too large".into());
        }
        let pm = p.pow(m);
        if mod_pow(1 + p.pow(l), p.pow(n), pm) != 1 {
            return bad(format!("(1+p^{l})^(p^{n}) ≢ 1 mod p^{m}"));
        }
        if q + l < m {
            return bad(format!("p^(q+l) = p^{} ≢ 0 mod p^{m}", q + l));
        }
        Ok(MetacyclicPresentation { p, m, n, l, q })
    }

    pub fn split(p: u64, m: u32, n: u32, l: u32) -> Result<Self> {
        Self::new(p, m, n, l, m)
    }

    pub fn is_split(&self) -> bool {
        self.q == self.m
    }

    pub fn is_abelian(&self) -> bool {
        self.l == self.m
    }

    /// Split, or nonsplit with `q < m` and `l < q < n`.
    pub fn in_normal_form(&self) -> bool {
        self.is_split() || (self.q < self.m && self.l < self.q && self.q < self.n)
    }

    /// `E ≤ Z(S)` as predicted by `m ≠ n + l`.
    pub fn e_central_predicted(&self) -> bool {
        self.m != self.n + self.l
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.m + self.n)
    }

    pub fn x_order(&self) -> u64 {
        self.p.pow(self.m)
    }

    pub fn y_period(&self) -> u64 {
        self.p.pow(self.n)
    }

    /// `1 + p^l mod p^m`.
    pub fn r(&self) -> u64 {
        (1 + self.p.pow(self.l)) % self.x_order()
    }

    pub fn index(&self, (i, j): NormalForm) -> usize {
        (i * self.y_period() + j) as usize
    }

    pub fn form(&self, index: usize) -> NormalForm {
        let index = index as u64;
        (index / self.y_period(), index % self.y_period())
    }

    /// `x^i y^j · x^k y^l = x^{i + k r^j} y^{j + l}`, folding `y^{p^n} = x^{p^q}`.
    pub fn mul(&self, (i, j): NormalForm, (k, l): NormalForm) -> NormalForm {
        let pm = self.x_order();
        let pn = self.y_period();
        let mut a = (i + k * mod_pow(self.r(), j, pm)) % pm;
        let mut b = j + l;
        if b >= pn {
            b -= pn;
            a = (a + self.p.pow(self.q)) % pm;
        }
        (a, b)
    }

    pub fn pow(&self, g: NormalForm, mut k: u64) -> NormalForm {
        let mut acc = (0, 0);
        let mut base = g;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, g: NormalForm) -> u64 {
        let mut k = 1;
        let mut x = g;
        while x != (0, 0) {
            x = self.pow(x, self.p);
            k *= self.p;
        }
        k
    }

    pub fn inverse(&self, g: NormalForm) -> NormalForm {
        self.pow(g, self.order() - 1)
    }
}

/// `(x^a y^c)^α = x^A y^C` in a split presentation, returned as `(A, C)`.
pub fn power_rule(a: u64, c: u64, alpha: u64, pres: &MetacyclicPresentation) -> Result<NormalForm> {
    if !pres.is_split() {
        return Err(Error::NotSplit);
    }
    let pm = pres.x_order();
    let step = mod_pow(pres.r(), c, pm);
    let mut sum = 0;
    let mut term = 1;
    for _ in 0..alpha {
        sum = (sum + term) % pm;
        term = term * step % pm;
    }
    Ok((a % pm * sum % pm, alpha * c % pres.y_period()))
}

/// `φ(x) = x^a y^c`, `φ(y) = x^b y^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AutActionData {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
}

impl AutActionData {
    pub fn identity() -> Self {
        AutActionData { a: 1, b: 0, c: 0, d: 1 }
    }

    /// Whether the mod-p matrix `(a b; c d)` has the shape forced by the
    /// parameters; `None` when no shape is prescribed.
    pub fn shape_respected(&self, pres: &MetacyclicPresentation) -> Option<bool> {
        let p = pres.p;
        if pres.n > pres.l {
            Some(self.c.is_multiple_of(p) && self.d % p == 1)
        } else if pres.l < pres.m {
            Some(self.b.is_multiple_of(p) && self.d % p == 1)
        } else {
            None
        }
    }
}

/// A realized metacyclic group, possibly extended by one automorphism.
#[derive(Debug)]
pub struct MetacyclicGroup {
    pub presentation: MetacyclicPresentation,
    pub group: FiniteGroup,
    pub x: usize,
    pub y: usize,
    /// The adjoined automorphism, when the group is `S ⋊ ⟨w⟩`.
    pub w: Option<usize>,
    coordinates: OnceLock<Vec<Option<NormalForm>>>,
}

impl MetacyclicGroup {
    /// `⟨x, y⟩`.
    pub fn sylow(&self) -> Subgroup {
        self.group.generate([self.x, self.y])
    }

    pub fn element(&self, (i, j): NormalForm) -> usize {
        let g = &self.group;
        g.mul(g.pow(self.x, i), g.pow(self.y, j))
    }

    /// Normal form of each element of `⟨x, y⟩`.
    pub fn coordinates(&self) -> &[Option<NormalForm>] {
        self.coordinates.get_or_init(|| {
            let pres = &self.presentation;
            let mut out = vec![None; self.group.order()];
            for idx in 0..pres.order() as usize {
                let nf = pres.form(idx);
                out[self.element(nf)] = Some(nf);
            }
            out
        })
    }

    fn verify_relations(&self) -> Result<()> {
        let g = &self.group;
        let pres = &self.presentation;
        let ok = g.element_order(self.x) == pres.x_order()
            && g.pow(self.y, pres.y_period()) == g.pow(self.x, pres.p.pow(pres.q))
            && g.conj(self.y, self.x) == g.pow(self.x, pres.r())
            && self.sylow().order() as u64 == pres.order();
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolated(format!("relations fail in the realization of {pres:?}")))
        }
    }
}

fn left_action(points: &[Vec<usize>], degree: usize) -> Permutation {
    let mut images = vec![0u16; degree];
    let mut offset = 0;
    for block in points {
        for (c, &img) in block.iter().enumerate() {
            images[offset + c] = (offset + img) as u16;
        }
        offset += block.len();
    }
    Permutation::from_raw(images)
}

// Left action of `s` on the left cosets of `h`, as coset-index images.
fn coset_images(
    pres: &MetacyclicPresentation,
    h: &[NormalForm],
    gens: &[NormalForm],
) -> Vec<Vec<usize>> {
    let size = pres.order() as usize;
    let mut coset = vec![usize::MAX; size];
    let mut reps = Vec::new();
    for idx in 0..size {
        if coset[idx] != usize::MAX {
            continue;
        }
        let a = pres.form(idx);
        for &t in h {
            coset[pres.index(pres.mul(a, t))] = reps.len();
        }
        reps.push(a);
    }
    gens.iter()
        .map(|&s| reps.iter().map(|&a| coset[pres.index(pres.mul(s, a))]).collect())
        .collect()
}

fn cyclic_elements(pres: &MetacyclicPresentation, g: NormalForm) -> Vec<NormalForm> {
    let mut out = vec![(0, 0)];
    let mut x = g;
    while x != (0, 0) {
        out.push(x);
        x = pres.mul(x, g);
    }
    out
}

/// Subgroups whose coset actions together give a faithful realization.
fn realization_subgroups(pres: &MetacyclicPresentation) -> Vec<Vec<NormalForm>> {
    if pres.order() <= REGULAR_LIMIT {
        return vec![vec![(0, 0)]];
    }
    let size = pres.order() as usize;
    let z = (pres.p.pow(pres.m - 1), 0);
    let in_z = |g: NormalForm| g.1 == 0 && g.0.is_multiple_of(z.0);
    let (x, y) = ((1, 0), (0, 1));
    let center: Vec<NormalForm> = (0..size)
        .map(|i| pres.form(i))
        .filter(|&g| pres.mul(g, x) == pres.mul(x, g) && pres.mul(g, y) == pres.mul(y, g))
        .collect();
    let center_cyclic = center.iter().any(|&g| pres.element_order(g) == center.len() as u64);
    // largest cyclic subgroup avoiding z, smallest generator on ties
    let mut best: Option<(u64, NormalForm)> = None;
    for i in 0..size {
        let g = pres.form(i);
        let o = pres.element_order(g);
        if o > 1 && in_z(pres.pow(g, o / pres.p)) {
            continue;
        }
        if best.is_none_or(|(bo, _)| o > bo) {
            best = Some((o, g));
        }
    }
    let (_, h) = best.expect("identity qualifies");
    let mut out = vec![cyclic_elements(pres, h)];
    if !center_cyclic {
        out.push(cyclic_elements(pres, x));
    }
    out
}

/// Builds a faithful permutation realization of the presented group.
pub fn construct(pres: &MetacyclicPresentation) -> Result<MetacyclicGroup> {
    let subgroups = realization_subgroups(pres);
    let gens = [(1, 0), (0, 1)];
    let blocks: Vec<Vec<Vec<usize>>> =
        subgroups.iter().map(|h| coset_images(pres, h, &gens)).collect();
    let degree: usize = blocks.iter().map(|b| b[0].len()).sum();
    let perms: Vec<Permutation> = (0..gens.len())
        .map(|k| {
            let per_block: Vec<Vec<usize>> = blocks.iter().map(|b| b[k].clone()).collect();
            left_action(&per_block, degree)
        })
        .collect();
    let group = FiniteGroup::closure(degree, &perms)?;
    let x = group.require(&perms[0])?;
    let y = group.require(&perms[1])?;
    let mg = MetacyclicGroup {
        presentation: *pres,
        group,
        x,
        y,
        w: None,
        coordinates: OnceLock::new(),
    };
    if mg.group.order() as u64 != pres.order() {
        return Err(Error::InvariantViolated(format!(
            "realization of {pres:?} has order {}",
            mg.group.order()
        )));
    }
    mg.verify_relations()?;
    Ok(mg)
}

/// Checks that `φ` is an automorphism of order dividing `k` and returns it as
/// a table on normal-form indices.
fn automorphism_table(
    pres: &MetacyclicPresentation,
    phi: AutActionData,
    k: u64,
) -> Result<Vec<usize>> {
    let pm = pres.x_order();
    let pn = pres.y_period();
    let xi = (phi.a % pm, phi.c % pn);
    let yi = (phi.b % pm, phi.d % pn);
    let relations = pres.pow(xi, pm) == (0, 0)
        && pres.pow(yi, pn) == pres.pow(xi, pres.p.pow(pres.q))
        && pres.mul(pres.mul(yi, xi), pres.inverse(yi)) == pres.pow(xi, pres.r());
    if !relations {
        return Err(Error::BadParameters(format!("{phi:?} does not preserve the relations")));
    }
    let size = pres.order() as usize;
    let table: Vec<usize> = (0..size)
        .map(|idx| {
            let (i, j) = pres.form(idx);
            pres.index(pres.mul(pres.pow(xi, i), pres.pow(yi, j)))
        })
        .collect();
    let mut seen = vec![false; size];
    for &t in &table {
        if std::mem::replace(&mut seen[t], true) {
            return Err(Error::BadParameters(format!("{phi:?} is not bijective")));
        }
    }
    let mut power: Vec<usize> = (0..size).collect();
    for _ in 0..k {
        power = power.iter().map(|&t| table[t]).collect();
    }
    if power.iter().enumerate().any(|(i, &t)| i != t) {
        return Err(Error::BadParameters(format!("{phi:?} has order not dividing {k}")));
    }
    Ok(table)
}

/// `S ⋊ ⟨w⟩` with `w` of order `k` acting by `φ`, realized regularly on pairs
/// `(s, t)` with `(s₁,t₁)(s₂,t₂) = (s₁ φ^{t₁}(s₂), t₁ + t₂)`.
pub fn construct_extension(
    pres: &MetacyclicPresentation,
    phi: AutActionData,
    k: u64,
) -> Result<MetacyclicGroup> {
    if k == 0 {
        return Err(Error::BadParameters("the cyclic factor must be nontrivial".into()));
    }
    let table = automorphism_table(pres, phi, k)?;
    let size = pres.order() as usize;
    let k = k as usize;
    let mut powers: Vec<Vec<usize>> = vec![(0..size).collect()];
    for t in 1..k {
        powers.push(powers[t - 1].iter().map(|&s| table[s]).collect());
    }
    let degree = size * k;
    let encode = |s: usize, t: usize| t * size + s;
    let left = |s1: usize, t1: usize| -> Permutation {
        let mut images = vec![0u16; degree];
        for t2 in 0..k {
            for s2 in 0..size {
                let s = pres.index(pres.mul(pres.form(s1), pres.form(powers[t1][s2])));
                images[encode(s2, t2)] = encode(s, (t1 + t2) % k) as u16;
            }
        }
        Permutation::from_raw(images)
    };
    let px = left(pres.index((1, 0)), 0);
    let py = left(pres.index((0, 1)), 0);
    let pw = left(0, 1 % k);
    let group = FiniteGroup::closure(degree, &[px.clone(), py.clone(), pw.clone()])?;
    let mg = MetacyclicGroup {
        presentation: *pres,
        x: group.require(&px)?,
        y: group.require(&py)?,
        w: Some(group.require(&pw)?),
        group,
        coordinates: OnceLock::new(),
    };
    if mg.group.order() != degree {
        return Err(Error::InvariantViolated("extension has the wrong order".into()));
    }
    mg.verify_relations()?;
    Ok(mg)
}

/// Closed form against element scan for one subgroup.
#[derive(Clone, Debug)]
pub struct FormulaCheck {
    pub closed_form: Subgroup,
    pub scanned: Subgroup,
}

impl FormulaCheck {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.scanned
    }
}

#[derive(Clone, Debug)]
pub struct StructuralComparison {
    pub center: FormulaCheck,
    pub e: FormulaCheck,
    pub c_s_e: FormulaCheck,
    pub e_central_predicted: bool,
    pub e_central: bool,
    pub center_cyclic: bool,
}

impl StructuralComparison {
    /// `E` noncentral, `m = n + l` and `Z(S)` cyclic all agree.
    pub fn equivalences_hold(&self) -> bool {
        self.e_central == self.e_central_predicted && self.center_cyclic == !self.e_central
    }

    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, check) in [("Z(S)", &self.center), ("E", &self.e), ("C_S(E)", &self.c_s_e)] {
            if !check.agrees() {
                out.push(format!(
                    "{name}: closed form has order {}, scan has order {}",
                    check.closed_form.order(),
                    check.scanned.order()
                ));
            }
        }
        if !self.equivalences_hold() {
            out.push(format!(
                "E central = {}, m ≠ n + l = {}, Z(S) cyclic = {}",
                self.e_central, self.e_central_predicted, self.center_cyclic
            ));
        }
        out
    }
}

/// Computes `Z(S)`, `E` and `C_S(E)` from the closed forms in `x, y` and by
/// scanning elements, without judging the outcome.
pub fn structural_comparison(mg: &MetacyclicGroup) -> Result<StructuralComparison> {
    let g = &mg.group;
    let pres = &mg.presentation;
    let p = pres.p;
    let s = mg.sylow();
    let (x, y) = (mg.x, mg.y);
    let k = p.pow(pres.m - pres.l);
    let center_cf = g.generate([g.pow(x, k), g.pow(y, k)]);
    let e_cf = g.generate([
        g.pow(x, p.pow(pres.m - 1)),
        g.mul(g.inv(g.pow(x, p.pow(pres.q - 1))), g.pow(y, p.pow(pres.n - 1))),
    ]);
    let e_central_predicted = pres.e_central_predicted();
    let c_cf = if e_central_predicted { s.clone() } else { g.generate([g.pow(x, p), y]) };

    let center = g.center(&s);
    let e = g.omega1(&s, p)?;
    let c_s_e = g.centralizer_in(&s, e.generator_ids());
    let e_central = e.is_subgroup_of(&center);
    let center_cyclic = center.iter().any(|z| g.element_order(z) == center.order() as u64);
    Ok(StructuralComparison {
        center: FormulaCheck { closed_form: center_cf, scanned: center },
        e: FormulaCheck { closed_form: e_cf, scanned: e },
        c_s_e: FormulaCheck { closed_form: c_cf, scanned: c_s_e },
        e_central_predicted,
        e_central,
        center_cyclic,
    })
}

/// Like [`structural_comparison`], failing on any disagreement.
pub fn structural_data(mg: &MetacyclicGroup) -> Result<StructuralComparison> {
    let cmp = structural_comparison(mg)?;
    let bad = cmp.mismatches();
    if bad.is_empty() {
        Ok(cmp)
    } else {
        Err(Error::FormulaMismatch(bad.join("; ")))
    }
}

/// Valid presentations with `m + n ≤ max_exponent_sum` in normal form.
pub fn validation_grid(primes: &[u64], max_exponent_sum: u32) -> Vec<MetacyclicPresentation> {
    let mut out = Vec::new();
    for &p in primes {
        for m in 1..max_exponent_sum {
            for n in 1..=max_exponent_sum - m {
                for l in 1..=m {
                    for q in 1..=m {
                        if let Ok(pres) = MetacyclicPresentation::new(p, m, n, l, q) {
                            if pres.in_normal_form() {
                                out.push(pres);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recognition {
    Cyclic { order: usize, generator: usize },
    Metacyclic { presentation: MetacyclicPresentation, x: usize, y: usize },
    NotMetacyclic,
}

impl Recognition {
    pub fn presentation(&self) -> Option<&MetacyclicPresentation> {
        match self {
            Recognition::Metacyclic { presentation, .. } => Some(presentation),
            _ => None,
        }
    }

    pub fn is_split_metacyclic(&self) -> bool {
        self.presentation().is_some_and(|p| p.is_split())
    }
}

/// Finds a presentation of the p-group `S`, preferring split ones, then the
/// smallest `m`, then the smallest generators.
pub fn recognize(g: &FiniteGroup, s: &Subgroup, p: u64) -> Result<Recognition> {
    if !g.is_p_subgroup(s, p) {
        return Err(Error::NotPGroup { p, order: s.order() });
    }
    let order = s.order() as u64;
    if let Some(gen) = s.iter().find(|&x| g.element_order(x) == order) {
        return Ok(Recognition::Cyclic { order: s.order(), generator: gen });
    }
    if p == 2 {
        return Err(Error::BadParameters("presentations are for odd p".into()));
    }
    let mut best: Option<((bool, u32, usize, usize), MetacyclicPresentation)> = None;
    let mut normality: HashMap<Subgroup, bool> = HashMap::new();
    for x in s.iter() {
        let ox = g.element_order(x);
        let xs = g.generate([x]);
        let normal = *normality
            .entry(xs.clone())
            .or_insert_with(|| g.is_normal_in(&xs, s));
        if !normal || ox == 1 {
            continue;
        }
        let m = valuation(ox, p);
        let quotient = order / ox;
        let n = valuation(quotient, p);
        if best.as_ref().is_some_and(|((nonsplit, bm, _, _), _)| !nonsplit && *bm < m) {
            continue;
        }
        // discrete logarithm in ⟨x⟩
        let mut log = HashMap::new();
        let mut acc = g.identity();
        for i in 0..ox {
            log.insert(acc, i);
            acc = g.mul(acc, x);
        }
        for y in s.iter() {
            if xs.contains(g.pow(y, quotient / p)) {
                continue;
            }
            let r = log[&g.conj(y, x)];
            let l = if r == 1 { m } else { valuation(r - 1, p) };
            let target = (1 + p.pow(l)) % ox;
            let period = p.pow(m - l);
            let Some(k) = (1..=period.max(1) * p)
                .filter(|k| k % p != 0)
                .find(|&k| mod_pow(r, k, ox) == target % ox)
            else {
                continue;
            };
            let y2 = g.pow(y, k);
            let s_exp = log[&g.pow(y2, quotient)];
            let (x2, q) = if s_exp == 0 {
                (x, m)
            } else {
                let v = valuation(s_exp, p);
                (g.pow(x, s_exp / p.pow(v)), v)
            };
            let Ok(pres) = MetacyclicPresentation::new(p, m, n, l, q) else {
                continue;
            };
            let key = (!pres.is_split(), m, x2, y2);
            if best.as_ref().is_none_or(|(k0, _)| key < *k0) {
                best = Some((key, pres));
            }
        }
    }
    Ok(match best {
        Some(((_, _, x, y), presentation)) => Recognition::Metacyclic { presentation, x, y },
        None => Recognition::NotMetacyclic,
    })
}

/// An automorphism of `S` given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismWitness {
    pub x_image: usize,
    pub y_image: usize,
    pub order: u64,
    pub action: AutActionData,
    pub shape_respected: Option<bool>,
}

/// Searches generator-image pairs for an automorphism of order coprime to `p`
/// and greater than one.
pub fn pprime_automorphism_exists(
    mg: &MetacyclicGroup,
    cap: usize,
) -> Result<Option<AutomorphismWitness>> {
    let g = &mg.group;
    let pres = &mg.presentation;
    let p = pres.p;
    let s = mg.sylow();
    if s.order() > cap {
        return Err(Error::CapExceeded { what: "automorphism search order", cap });
    }
    let coords = mg.coordinates();
    let phi_set = g.frattini_subgroup(&s, p);
    let pm = pres.x_order();
    let x_candidates: Vec<usize> = s
        .iter()
        .filter(|&c| !phi_set.contains(c) && g.element_order(c) == pm)
        .collect();
    let qpow = p.pow(pres.q);
    for &xi in &x_candidates {
        let frame = g.product_set(g.generate([xi]).iter(), phi_set.iter());
        let target_y = g.pow(xi, qpow);
        let target_c = g.pow(xi, pres.r());
        for yi in s.iter() {
            if frame.contains(yi)
                || g.pow(yi, pres.y_period()) != target_y
                || g.conj(yi, xi) != target_c
            {
                continue;
            }
            // apply the map x ↦ xi, y ↦ yi to an element of S
            let apply = |e: usize| {
                let (i, j) = coords[e].expect("element of S");
                g.mul(g.pow(xi, i), g.pow(yi, j))
            };
            let mut images = (xi, yi);
            let mut order = 1u64;
            while images != (mg.x, mg.y) {
                images = (apply(images.0), apply(images.1));
                order += 1;
            }
            let p_part = p.pow(valuation(order, p));
            if order / p_part == 1 {
                continue;
            }
            let mut w = (mg.x, mg.y);
            for _ in 0..p_part {
                w = (apply(w.0), apply(w.1));
            }
            let (a, c) = coords[w.0].expect("element of S");
            let (b, d) = coords[w.1].expect("element of S");
            let action = AutActionData { a, b, c, d };
            return Ok(Some(AutomorphismWitness {
                x_image: w.0,
                y_image: w.1,
                order: order / p_part,
                action,
                shape_respected: action.shape_respected(pres),
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalTableChecks {
    /// `x Q_j x⁻¹ = Q_{j+1}` for every `j`.
    pub q_cycle: bool,
    /// `{Q_j} = {⟨u z^j⟩}` as sets.
    pub q_match_u_z: bool,
    /// `N_G(E) ⊇ C_G(S) S ⟨w⟩`.
    pub normalizer_e_contains: bool,
    /// `N_G(Z) = C_G(Z) ⟨w⟩`.
    pub normalizer_z: bool,
    /// `N_G(Q_j) = C_G(Q_j)` for every `j`.
    pub normalizer_q: bool,
    /// `w z w⁻¹ = z^a` with `a` read off `w x w⁻¹ = x^a y^c`.
    pub w_powers_z: bool,
    pub w_fixes_u: bool,
}

impl LocalTableChecks {
    pub fn all(&self) -> bool {
        self.q_cycle
            && self.q_match_u_z
            && self.normalizer_e_contains
            && self.normalizer_z
            && self.normalizer_q
            && self.w_powers_z
            && self.w_fixes_u
    }
}

#[derive(Clone, Debug)]
pub struct LocalSubgroupTable {
    pub e: Subgroup,
    pub z: Subgroup,
    pub c_s_e: Subgroup,
    pub q: Vec<Subgroup>,
    pub u: usize,
    pub z_generator: usize,
    /// Identity when `N_G(S) = S C_G(S)`.
    pub w: usize,
    pub w_action: AutActionData,
    pub normalizer_e: Subgroup,
    pub normalizer_z: Subgroup,
    pub centralizer_z: Subgroup,
    pub normalizer_q: Vec<Subgroup>,
    pub centralizer_q: Vec<Subgroup>,
    pub checks: LocalTableChecks,
}

/// Normalizer and centralizer data for split `S` with `E` noncentral.
///
/// `x, y` are generators of `S = ctx.sylow()` realizing `pres`; `w` defaults
/// to a p'-element generating `N_G(S)` modulo `S C_G(S)`.
pub fn local_table(
    ctx: &PLocalContext<'_>,
    pres: &MetacyclicPresentation,
    x: usize,
    y: usize,
    w: Option<usize>,
) -> Result<LocalSubgroupTable> {
    let g = ctx.group();
    let p = ctx.p();
    let s = ctx.sylow();
    if !pres.is_split() {
        return Err(Error::HypothesisFailed("S must be split metacyclic".into()));
    }
    if pres.e_central_predicted() {
        return Err(Error::HypothesisFailed("E must be noncentral (m = n + l)".into()));
    }
    if strongly_embedded_core(ctx)?.proper {
        return Err(Error::HypothesisFailed("G₀ must equal G".into()));
    }
    if g.generate([x, y]) != *s {
        return Err(Error::HypothesisFailed("x and y must generate S".into()));
    }
    let mut coords = HashMap::new();
    for idx in 0..pres.order() as usize {
        let (i, j) = pres.form(idx);
        coords.insert(g.mul(g.pow(x, i), g.pow(y, j)), (i, j));
    }
    let u = g.pow(y, p.pow(pres.n - 1));
    let z_generator = g.pow(x, p.pow(pres.m - 1));
    let e = ctx.omega1().clone();
    let z = g.intersection(&e, ctx.center());
    let c_s_e = g.centralizer_in(s, e.generator_ids());

    let mut q = vec![g.generate([u])];
    for j in 1..p as usize {
        q.push(g.conjugate(x, &q[j - 1]));
    }
    let q_cycle = (0..q.len()).all(|j| g.conjugate(x, &q[j]) == q[(j + 1) % q.len()]);
    let mut by_u_z: Vec<Subgroup> =
        (0..p).map(|j| g.generate([g.mul(u, g.pow(z_generator, j))])).collect();
    let mut sorted_q = q.clone();
    by_u_z.sort();
    sorted_q.sort();
    let q_match_u_z = by_u_z == sorted_q;

    let n = ctx.n();
    let c_s = g.centralizer_of(s);
    let base = g.join(s, &c_s);
    let w = match w {
        Some(w) => w,
        None if base == *n => g.identity(),
        None => {
            let candidates: Vec<usize> = n
                .iter()
                .filter(|&c| !g.element_order(c).is_multiple_of(p))
                .filter(|&c| g.join(&base, &g.generate([c])) == *n)
                .collect();
            *candidates
                .iter()
                .find(|&&c| g.conj(c, u) == u)
                .or(candidates.first())
                .ok_or_else(|| {
                    Error::HypothesisFailed("no p'-element generates N modulo S C_G(S)".into())
                })?
        }
    };
    let w_group = g.generate([w]);
    let (a, c) = coords[&g.conj(w, x)];
    let (b, d) = coords[&g.conj(w, y)];
    let w_action = AutActionData { a, b, c, d };

    let normalizer_e = g.normalizer(&e);
    let normalizer_z = g.normalizer(&z);
    let centralizer_z = g.centralizer_of(&z);
    let normalizer_q: Vec<Subgroup> = q.iter().map(|h| g.normalizer(h)).collect();
    let centralizer_q: Vec<Subgroup> = q.iter().map(|h| g.centralizer_of(h)).collect();
    let checks = LocalTableChecks {
        q_cycle,
        q_match_u_z,
        normalizer_e_contains: g.join(&base, &w_group).is_subgroup_of(&normalizer_e),
        normalizer_z: g.join(&centralizer_z, &w_group) == normalizer_z,
        normalizer_q: normalizer_q.iter().zip(&centralizer_q).all(|(a, b)| a == b),
        w_powers_z: g.conj(w, z_generator) == g.pow(z_generator, a),
        w_fixes_u: g.conj(w, u) == u,
    };
    Ok(LocalSubgroupTable {
        e,
        z,
        c_s_e,
        q,
        u,
        z_generator,
        w,
        w_action,
        normalizer_e,
        normalizer_z,
        centralizer_z,
        normalizer_q,
        centralizer_q,
        checks,
    })
}
