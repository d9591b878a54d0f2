//! Explicit permutations on `0..degree`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported degree; images are stored as `u16`.
pub const MAX_DEGREE: usize = u16::MAX as usize + 1;

/// A bijection of `{0, …, degree-1}` given by its image sequence.
///
/// Products follow function composition: `a.compose(&b)` maps `i` to
/// `a(b(i))`. The derived ordering is lexicographic on image sequences and is
/// the canonical element order used throughout the crate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= MAX_DEGREE, "degree {degree} too large");
        Permutation { images: (0..degree).map(|i| i as u16).collect() }
    }

    /// Validates that `images` is a bijection on `0..images.len()`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let degree = images.len();
        if degree > MAX_DEGREE {
            return Err(Error::MalformedPermutation(format!(
                "degree {degree} exceeds {MAX_DEGREE}"
            )));
        }
        let mut seen = vec![false; degree];
        for (i, &img) in images.iter().enumerate() {
            if img >= degree {
                return Err(Error::MalformedPermutation(format!(
                    "image {img} of point {i} is out of range for degree {degree}"
                )));
            }
            if std::mem::replace(&mut seen[img], true) {
                return Err(Error::MalformedPermutation(format!(
                    "image {img} appears more than once"
                )));
            }
        }
        Ok(Permutation { images: images.iter().map(|&i| i as u16).collect() })
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (k, &point) in cycle.iter().enumerate() {
                if point >= degree {
                    return Err(Error::MalformedPermutation(format!(
                        "cycle point {point} out of range for degree {degree}"
                    )));
                }
                images[point] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(&images)
    }

    /// Trusted constructor for images produced by group arithmetic.
    pub(crate) fn from_raw(images: Vec<u16>) -> Self {
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.images().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u16;
        }
        Permutation { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cycle notation, `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut wrote = false;
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            write!(f, "(")?;
            let mut point = start;
            let mut first = true;
            while !seen[point] {
                seen[point] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{point}")?;
                first = false;
                point = self.apply(point);
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicate_and_out_of_range_images() {
        assert!(matches!(
            Permutation::from_images(&[0, 0, 1]),
            Err(Error::MalformedPermutation(_))
        ));
        assert!(matches!(
            Permutation::from_images(&[0, 3, 1]),
            Err(Error::MalformedPermutation(_))
        ));
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let a = Permutation::from_images(&[1, 2, 0]).unwrap();
        let b = Permutation::from_images(&[1, 0, 2]).unwrap();
        // (a∘b)(0) = a(1) = 2
        assert_eq!(a.compose(&b).apply(0), 2);
        assert!(a.compose(&a.inverse()).is_identity());
    }

    #[test]
    fn cycle_notation() {
        let p = Permutation::from_cycles(5, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }
}
