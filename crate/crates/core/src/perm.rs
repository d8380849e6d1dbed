//! Permutations of `{0, .., degree-1}`, acting on the right.
//!
//! Externally (JSON, display) points are 1-based and permutations are written
//! as products of disjoint cycles.

use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, .., degree-1}`. `x^(ab) = (x^a)^b`.
///
/// Ordering is lexicographic on the image sequence, so the identity is the
/// smallest permutation of any degree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, rejecting non-bijections.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::input(format!(
                    "image sequence {:?} is not a bijection",
                    images
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles written with 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (i, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(Error::input(format!(
                        "point {} outside 1..={}",
                        pt, degree
                    )));
                }
                if used[pt - 1] {
                    return Err(Error::input(format!(
                        "point {} appears twice in cycles {:?}",
                        pt, cycles
                    )));
                }
                used[pt - 1] = true;
                let next = cycle[(i + 1) % cycle.len()];
                images[pt - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// Canonical cycle form: 1-based, fixed points omitted, each cycle starts
    /// at its smallest point, cycles sorted by first point.
    pub fn to_cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        // x^(g^-1 h g): send x^g to (x^h)^g.
        let mut images = vec![0u32; self.degree()];
        for (x, &hx) in self.images.iter().enumerate() {
            images[g.images[x] as usize] = g.images[hx as usize];
        }
        Permutation { images }
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    /// Order as the lcm of cycle lengths.
    pub fn order(&self) -> u64 {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            ord = ord / crate::arith::gcd(ord, len) * len;
        }
        ord
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.to_cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", parts.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &c).unwrap()
    }

    #[test]
    fn right_action_composition() {
        // (1 2) then (2 3): 1 -> 2 -> 3.
        let a = p(3, &[&[1, 2]]);
        let b = p(3, &[&[2, 3]]);
        assert_eq!(a.compose(&b), p(3, &[&[1, 3, 2]]));
        assert_eq!(p(4, &[&[1, 2, 3, 4]]).order(), 4);
        assert_eq!(p(5, &[&[1, 2], &[3, 4, 5]]).order(), 6);
    }

    #[test]
    fn overlapping_cycles_rejected() {
        assert!(Permutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn conjugation_matches_definition() {
        let h = p(4, &[&[1, 2]]);
        let g = p(4, &[&[1, 3], &[2, 4]]);
        let direct = g.inverse().compose(&h).compose(&g);
        assert_eq!(h.conjugate_by(&g), direct);
        assert_eq!(direct, p(4, &[&[3, 4]]));
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn cycles_round_trip(a in arb_perm(9)) {
            let back = Permutation::from_cycles(9, &a.to_cycles()).unwrap();
            prop_assert_eq!(back, a);
        }

        #[test]
        fn group_laws(a in arb_perm(7), b in arb_perm(7), c in arb_perm(7)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            prop_assert!(a.compose(&a.inverse()).is_identity());
            prop_assert!(a.pow(a.order()).is_identity());
            prop_assert_eq!(a.conjugate_by(&b), b.inverse().compose(&a).compose(&b));
        }
    }
}
