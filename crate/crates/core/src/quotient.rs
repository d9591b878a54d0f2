//! Quotients of subgroups by normal subgroups.

use crate::abelian::invariants_from_element_orders;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// `H / N` for `N ⊴ H ≤ G`, with cosets labelled by their smallest element.
#[derive(Clone, Debug)]
pub struct QuotientGroup {
    representatives: Vec<u32>,
    coset_of: Vec<u32>,
    table: Vec<u32>,
    normal_order: usize,
}

const UNASSIGNED: u32 = u32::MAX;

impl QuotientGroup {
    pub fn new(g: &FiniteGroup, domain: &Subgroup, normal: &Subgroup) -> Result<Self> {
        if !normal.is_subgroup_of(domain) || !g.is_normal_in(normal, domain) {
            return Err(Error::NotNormal);
        }
        let mut coset_of = vec![UNASSIGNED; g.order()];
        let mut representatives = Vec::new();
        for a in domain.iter() {
            if coset_of[a] != UNASSIGNED {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(a as u32);
            for n in normal.iter() {
                coset_of[g.mul(a, n)] = id;
            }
        }
        let k = representatives.len();
        let mut table = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                let prod = g.mul(representatives[i] as usize, representatives[j] as usize);
                table[i * k + j] = coset_of[prod];
            }
        }
        Ok(QuotientGroup { representatives, coset_of, table, normal_order: normal.order() })
    }

    pub fn order(&self) -> usize {
        self.representatives.len()
    }

    pub fn normal_order(&self) -> usize {
        self.normal_order
    }

    /// Coset containing the ambient element `g`, if `g` lies in the domain.
    pub fn coset(&self, g: usize) -> Option<usize> {
        match self.coset_of[g] {
            UNASSIGNED => None,
            c => Some(c as usize),
        }
    }

    pub fn representative(&self, coset: usize) -> usize {
        self.representatives[coset] as usize
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let k = self.order();
        (0..k).all(|a| (0..k).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        if !self.is_abelian() {
            return Err(Error::NotAbelian);
        }
        let orders: Vec<u64> = (0..self.order()).map(|a| self.element_order(a)).collect();
        Ok(invariants_from_element_orders(&orders))
    }
}

impl FiniteGroup {
    pub fn quotient(&self, domain: &Subgroup, normal: &Subgroup) -> Result<QuotientGroup> {
        QuotientGroup::new(self, domain, normal)
    }

    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        if !self.is_abelian() {
            return Err(Error::NotAbelian);
        }
        let orders: Vec<u64> = (0..self.order()).map(|a| self.element_order(a)).collect();
        Ok(invariants_from_element_orders(&orders))
    }

    /// Invariants of `H / H'`.
    pub fn abelianization_invariants(&self, h: &Subgroup) -> Vec<u64> {
        let derived = self.derived_subgroup(h);
        self.quotient(h, &derived)
            .and_then(|q| q.abelian_invariants())
            .expect("abelianization is an abelian quotient")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let s3 = FiniteGroup::closure(3, &[perm(&[1, 2, 0]), perm(&[1, 0, 2])]).unwrap();
        let whole = s3.whole();
        assert_eq!(s3.quotient(&whole, &whole).unwrap().order(), 1);
        let c3 = s3.derived_subgroup(&whole);
        let q = s3.quotient(&whole, &c3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.abelian_invariants().unwrap(), vec![2]);
        let t = s3.generate([s3.index_of(&perm(&[1, 0, 2])).unwrap()]);
        assert_eq!(s3.quotient(&whole, &t).unwrap_err(), Error::NotNormal);

        let a4 = FiniteGroup::closure(
            4,
            &[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1]), perm(&[1, 2, 0, 3])],
        )
        .unwrap();
        let v4 = a4.derived_subgroup(&a4.whole());
        let q = a4.quotient(&a4.whole(), &v4).unwrap();
        assert_eq!(q.order() * v4.order(), a4.order());
        assert_eq!(q.abelian_invariants().unwrap(), vec![3]);
    }

    #[test]
    fn abelian_invariants_examples() {
        let trivial = FiniteGroup::closure(2, &[]).unwrap();
        assert_eq!(trivial.abelian_invariants().unwrap(), Vec::<u64>::new());
        let v4 = FiniteGroup::closure(4, &[perm(&[1, 0, 3, 2]), perm(&[2, 3, 0, 1])]).unwrap();
        assert_eq!(v4.abelian_invariants().unwrap(), vec![2, 2]);
        let c6 = FiniteGroup::closure(5, &[perm(&[1, 2, 0, 4, 3])]).unwrap();
        assert_eq!(c6.abelian_invariants().unwrap(), vec![6]);
        let s3 = FiniteGroup::closure(3, &[perm(&[1, 2, 0]), perm(&[1, 0, 2])]).unwrap();
        assert_eq!(s3.abelian_invariants().unwrap_err(), Error::NotAbelian);
    }
}
