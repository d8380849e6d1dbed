//! Enumerated groups: elements indexed in lexicographic order, subgroups as
//! bitsets over those indices.
//!
//! The identity is always index 0. Groups of order up to
//! [`bounds::MULTIPLICATION_TABLE`] carry a full multiplication table; larger
//! ones multiply permutations and look the product up.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::arith::prime_power;
use crate::bounds;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// A set of element indices of a [`FiniteGroup`].
pub type ElemSet = FixedBitSet;

pub struct FiniteGroup {
    degree: usize,
    elems: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    table: Option<Vec<u32>>,
    inv: Vec<u32>,
    orders: Vec<u32>,
}

impl FiniteGroup {
    pub fn from_group(g: &PermGroup) -> Result<Self> {
        Ok(Self::from_sorted_elements(g.degree(), g.elements()?))
    }

    /// `elems` must be sorted and closed under multiplication.
    pub fn from_sorted_elements(degree: usize, elems: Vec<Permutation>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.first().is_some_and(|e| e.is_identity()));
        let n = elems.len();
        let index: HashMap<Permutation, u32> = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        let table = (n <= bounds::MULTIPLICATION_TABLE).then(|| {
            let mut t = vec![0u32; n * n];
            for (a, x) in elems.iter().enumerate() {
                for (b, y) in elems.iter().enumerate() {
                    t[a * n + b] = index[&x.compose(y)];
                }
            }
            t
        });
        let inv = elems.iter().map(|e| index[&e.inverse()]).collect();
        let orders = elems.iter().map(|e| e.order() as u32).collect();
        FiniteGroup {
            degree,
            elems,
            index,
            table,
            inv,
            orders,
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elems[i as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elems
    }

    pub fn index_of(&self, x: &Permutation) -> Option<u32> {
        self.index.get(x).copied()
    }

    /// The prime when the group is a nontrivial p-group.
    pub fn prime(&self) -> Option<u64> {
        prime_power(self.order() as u64).map(|(p, _)| p)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.index[&self.elems[a as usize].compose(&self.elems[b as usize])],
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn elem_order(&self, a: u32) -> u32 {
        self.orders[a as usize]
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        let mut acc = 0;
        let mut base = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 a g`.
    #[inline]
    pub fn conj(&self, a: u32, g: u32) -> u32 {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    #[inline]
    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn empty_set(&self) -> ElemSet {
        FixedBitSet::with_capacity(self.order())
    }

    pub fn trivial(&self) -> ElemSet {
        let mut s = self.empty_set();
        s.insert(0);
        s
    }

    pub fn full(&self) -> ElemSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn set_from(&self, items: impl IntoIterator<Item = u32>) -> ElemSet {
        let mut s = self.empty_set();
        for i in items {
            s.insert(i as usize);
        }
        s
    }

    /// Sorted index list of a set; this is the canonical key of a subgroup.
    pub fn key(set: &ElemSet) -> Vec<u32> {
        set.ones().map(|i| i as u32).collect()
    }

    pub fn members(set: &ElemSet) -> impl Iterator<Item = u32> + '_ {
        set.ones().map(|i| i as u32)
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[u32]) -> ElemSet {
        self.closure_from(self.trivial(), gens)
    }

    /// Subgroup generated by a subgroup `base` and extra elements `gens`.
    pub fn closure_from(&self, base: ElemSet, gens: &[u32]) -> ElemSet {
        let extra: Vec<u32> = gens.iter().copied().filter(|&g| !base.contains(g as usize)).collect();
        if extra.is_empty() {
            return base;
        }
        let mut all_gens = self.generators(&base);
        all_gens.extend(extra);
        let mut set = base;
        let mut queue: Vec<u32> = Self::members(&set).collect();
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &g in &all_gens {
                let y = self.mul(x, g);
                if !set.put(y as usize) {
                    queue.push(y);
                }
            }
            i += 1;
        }
        set
    }

    /// A generating sequence: greedily add the smallest index not yet covered.
    pub fn generators(&self, set: &ElemSet) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for x in Self::members(set) {
            if !span.contains(x as usize) {
                gens.push(x);
                span = self.closure_raw(&gens);
                if span.count_ones(..) == set.count_ones(..) {
                    break;
                }
            }
        }
        gens
    }

    fn closure_raw(&self, gens: &[u32]) -> ElemSet {
        let mut set = self.trivial();
        let mut queue = vec![0u32];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !set.put(y as usize) {
                    queue.push(y);
                }
            }
            i += 1;
        }
        set
    }

    pub fn is_subgroup(&self, set: &ElemSet) -> bool {
        set.contains(0)
            && Self::members(set).all(|a| Self::members(set).all(|b| set.contains(self.mul(a, b) as usize)))
    }

    pub fn size(set: &ElemSet) -> usize {
        set.count_ones(..)
    }

    /// Elements of `within` commuting with every element of `h`.
    pub fn centralizer(&self, within: &ElemSet, h: &ElemSet) -> ElemSet {
        let gens = self.generators(h);
        self.filter(within, |k| gens.iter().all(|&x| self.mul(x, k) == self.mul(k, x)))
    }

    /// Elements of `within` normalising `h`.
    pub fn normalizer(&self, within: &ElemSet, h: &ElemSet) -> ElemSet {
        let gens = self.generators(h);
        self.filter(within, |k| gens.iter().all(|&x| h.contains(self.conj(x, k) as usize)))
    }

    pub fn filter(&self, set: &ElemSet, mut f: impl FnMut(u32) -> bool) -> ElemSet {
        let mut out = self.empty_set();
        for x in Self::members(set) {
            if f(x) {
                out.insert(x as usize);
            }
        }
        out
    }

    pub fn center(&self, h: &ElemSet) -> ElemSet {
        self.centralizer(h, h)
    }

    /// `[H, K]`.
    pub fn commutator(&self, h: &ElemSet, k: &ElemSet) -> ElemSet {
        let kg = self.generators(k);
        let hg = self.generators(h);
        let mut comms = Vec::new();
        let mut seen = self.trivial();
        for &a in &hg {
            for &b in &kg {
                let c = self.comm(a, b);
                if seen.put(c as usize) {
                    continue;
                }
                comms.push(c);
            }
        }
        // normal closure in <H, K>
        let mut hk_gens = hg;
        hk_gens.extend(kg);
        let mut set = self.closure(&comms);
        loop {
            let gens = self.generators(&set);
            let extra: Vec<u32> = gens
                .iter()
                .flat_map(|&x| hk_gens.iter().map(move |&s| (x, s)))
                .map(|(x, s)| self.conj(x, s))
                .filter(|c| !set.contains(*c as usize))
                .collect();
            if extra.is_empty() {
                return set;
            }
            set = self.closure_from(set, &extra);
        }
    }

    pub fn derived(&self, h: &ElemSet) -> ElemSet {
        self.commutator(h, h)
    }

    /// `℧(H)`, generated by p-th powers.
    pub fn agemo(&self, h: &ElemSet, p: u64) -> ElemSet {
        let powers: Vec<u32> = Self::members(h).map(|x| self.pow(x, p)).collect();
        self.closure(&powers)
    }

    /// Frattini subgroup of a p-group: `H' ℧(H)`.
    pub fn frattini_p(&self, h: &ElemSet, p: u64) -> ElemSet {
        let d = self.derived(h);
        let a = self.agemo(h, p);
        self.join(&d, &a)
    }

    pub fn join(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let gens = self.generators(b);
        self.closure_from(a.clone(), &gens)
    }

    pub fn conjugate_set(&self, h: &ElemSet, g: u32) -> ElemSet {
        let mut out = self.empty_set();
        for x in Self::members(h) {
            out.insert(self.conj(x, g) as usize);
        }
        out
    }

    pub fn is_normal(&self, h: &ElemSet, within: &ElemSet) -> bool {
        let hg = self.generators(h);
        self.generators(within)
            .iter()
            .all(|&g| hg.iter().all(|&x| h.contains(self.conj(x, g) as usize)))
    }

    pub fn is_abelian(&self, h: &ElemSet) -> bool {
        let g = self.generators(h);
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self, h: &ElemSet) -> u64 {
        Self::members(h).fold(1u64, |acc, x| {
            let o = self.elem_order(x) as u64;
            acc / crate::arith::gcd(acc, o) * o
        })
    }

    pub fn is_elementary_abelian(&self, h: &ElemSet) -> bool {
        let n = Self::size(h) as u64;
        match prime_power(n) {
            None => n == 1,
            Some((p, _)) => self.is_abelian(h) && Self::members(h).all(|x| self.pow(x, p) == 0),
        }
    }

    pub fn is_cyclic(&self, h: &ElemSet) -> bool {
        let n = Self::size(h) as u32;
        Self::members(h).any(|x| self.elem_order(x) == n)
    }

    /// Upper central series `1 = Z_0 < Z_1 < ...` up to its terminal member.
    pub fn upper_central_series(&self, h: &ElemSet) -> Vec<ElemSet> {
        let gens = self.generators(h);
        let mut series = vec![self.trivial()];
        loop {
            let last = series.last().unwrap();
            let next = self.filter(h, |x| gens.iter().all(|&g| last.contains(self.comm(x, g) as usize)));
            if next == *last {
                return series;
            }
            series.push(next);
        }
    }

    /// Subgroup of all elements of `h` as a [`PermGroup`].
    pub fn to_perm_group(&self, h: &ElemSet) -> PermGroup {
        let gens = self
            .generators(h)
            .into_iter()
            .map(|i| self.elems[i as usize].clone())
            .collect();
        PermGroup::from_checked(self.degree, gens, &[])
    }

    /// Bitset of a permutation group whose elements all lie in this table.
    pub fn set_of(&self, g: &PermGroup) -> Result<ElemSet> {
        if g.degree() != self.degree {
            return Err(Error::input("degree mismatch between subgroup and group"));
        }
        let gens: Option<Vec<u32>> = g.generators().iter().map(|x| self.index_of(x)).collect();
        let gens = gens.ok_or_else(|| Error::input("subgroup is not contained in the group"))?;
        Ok(self.closure(&gens))
    }

    /// Table of the subgroup `h`, plus the embedding (sub index -> index here).
    pub fn sub_table(&self, h: &ElemSet) -> (FiniteGroup, Vec<u32>) {
        let embed: Vec<u32> = Self::members(h).collect();
        let elems = embed.iter().map(|&i| self.elems[i as usize].clone()).collect();
        (FiniteGroup::from_sorted_elements(self.degree, elems), embed)
    }

    /// `n / e` for `e` normal in `n`, as the regular permutation
    /// representation on cosets. Returns the quotient table and the
    /// projection (index here -> quotient index; `u32::MAX` outside `n`).
    pub fn quotient(&self, n: &ElemSet, e: &ElemSet) -> (FiniteGroup, Vec<u32>) {
        let mut coset = vec![u32::MAX; self.order()];
        let mut reps = Vec::new();
        for x in Self::members(n) {
            if coset[x as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for y in Self::members(e) {
                coset[self.mul(y, x) as usize] = id;
            }
        }
        let m = reps.len();
        let perm_of = |g: u32| {
            let images = reps.iter().map(|&r| coset[self.mul(r, g) as usize]).collect();
            Permutation::from_images_unchecked(images)
        };
        let gens: Vec<Permutation> = self.generators(n).into_iter().map(perm_of).collect();
        let q = PermGroup::from_checked(m, gens, &[]);
        let table = FiniteGroup::from_sorted_elements(m, q.elements().expect("quotient is small"));
        let mut proj = vec![u32::MAX; self.order()];
        for (i, r) in reps.iter().enumerate() {
            let idx = table.index_of(&perm_of(*r)).unwrap();
            for x in Self::members(n) {
                if coset[x as usize] == i as u32 {
                    proj[x as usize] = idx;
                }
            }
        }
        (table, proj)
    }

    /// Conjugacy class sizes, one per element.
    pub fn class_sizes(&self) -> Vec<u32> {
        let n = self.order();
        let gens = self.generators(&self.full());
        let mut size = vec![0u32; n];
        for x in 0..n as u32 {
            if size[x as usize] != 0 {
                continue;
            }
            let mut class = vec![x];
            let mut seen = self.empty_set();
            seen.insert(x as usize);
            let mut i = 0;
            while i < class.len() {
                for &g in &gens {
                    let y = self.conj(class[i], g);
                    if !seen.put(y as usize) {
                        class.push(y);
                    }
                }
                i += 1;
            }
            for &c in &class {
                size[c as usize] = class.len() as u32;
            }
        }
        size
    }
}
