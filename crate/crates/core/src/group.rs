//! Permutation groups backed by a stabiliser chain.

use std::fmt;
use std::sync::Arc;

use crate::arith::{is_prime, p_part};
use crate::bounds;
use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An immutable permutation group. Cloning is cheap.
///
/// Equality is equality of element sets, not of generating sequences.
#[derive(Clone)]
pub struct PermGroup {
    inner: Arc<Inner>,
}

struct Inner {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: u64,
}

/// A subgroup of some parent group. Subgroups are groups in their own right;
/// the canonical key (sorted element list) is available at desk scale.
pub type SubgroupHandle = PermGroup;

impl PermGroup {
    /// Builds `<generators>` on `degree` points.
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::input(format!(
                    "generator {} has degree {}, expected {}",
                    g,
                    g.degree(),
                    degree
                )));
            }
        }
        Ok(Self::from_checked(degree, generators, &[]))
    }

    /// Like [`PermGroup::new`] but with a prescribed base prefix.
    pub fn with_base(degree: usize, generators: Vec<Permutation>, base: &[usize]) -> Result<Self> {
        if base.iter().any(|&b| b >= degree) {
            return Err(Error::input("base point outside the permutation domain"));
        }
        let g = Self::new(degree, generators)?;
        Ok(Self::from_checked(degree, g.inner.generators.clone(), base))
    }

    pub(crate) fn from_checked(degree: usize, generators: Vec<Permutation>, base: &[usize]) -> Self {
        let generators: Vec<Permutation> =
            generators.into_iter().filter(|g| !g.is_identity()).collect();
        let chain = StabChain::new(degree, &generators, base);
        let order = chain.order();
        PermGroup {
            inner: Arc::new(Inner {
                degree,
                generators,
                chain,
                order,
            }),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::from_checked(degree, Vec::new(), &[])
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::from_cycles(n, &[vec![1, 2]]).unwrap());
        }
        if n >= 3 {
            gens.push(Permutation::from_cycles(n, &[(1..=n).collect()]).unwrap());
        }
        Self::from_checked(n, gens, &[])
    }

    pub fn alternating(n: usize) -> Self {
        let gens = (3..=n)
            .map(|k| Permutation::from_cycles(n, &[vec![1, 2, k]]).unwrap())
            .collect();
        Self::from_checked(n, gens, &[])
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.generators
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn chain(&self) -> &StabChain {
        &self.inner.chain
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree())
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Membership test; errors on a degree mismatch.
    pub fn membership(&self, x: &Permutation) -> Result<bool> {
        if x.degree() != self.degree() {
            return Err(Error::input(format!(
                "permutation of degree {} tested against group of degree {}",
                x.degree(),
                self.degree()
            )));
        }
        Ok(self.contains(x))
    }

    #[inline]
    pub fn contains(&self, x: &Permutation) -> bool {
        self.inner.chain.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree() == other.degree()
            && other.order().is_multiple_of(self.order())
            && self.generators().iter().all(|g| other.contains(g))
    }

    fn require_subgroup(&self, h: &PermGroup, what: &str) -> Result<()> {
        if !h.is_subgroup_of(self) {
            return Err(Error::input(format!(
                "{}: subgroup of order {} is not contained in the group",
                what,
                h.order()
            )));
        }
        Ok(())
    }

    /// Streams every element once; `f` returns `false` to stop.
    pub fn for_each_element(&self, f: impl FnMut(&Permutation) -> bool) -> Result<()> {
        if self.order() > bounds::ELEMENT_ITERATION {
            return Err(Error::resource(
                "element iteration",
                self.order(),
                bounds::ELEMENT_ITERATION,
            ));
        }
        self.inner.chain.for_each_element(f);
        Ok(())
    }

    /// All elements in lexicographic order of image sequences.
    pub fn elements(&self) -> Result<Vec<Permutation>> {
        if self.order() > bounds::ELEMENT_ENUMERATION {
            return Err(Error::resource(
                "element enumeration",
                self.order(),
                bounds::ELEMENT_ENUMERATION,
            ));
        }
        let mut out = Vec::with_capacity(self.order() as usize);
        self.inner.chain.for_each_element(|g| {
            out.push(g.clone());
            true
        });
        out.sort();
        Ok(out)
    }

    /// Canonical key: the sorted element list.
    pub fn canonical_key(&self) -> Result<Vec<Permutation>> {
        self.elements()
    }

    /// Subgroup generated by `self` and `extra`.
    pub fn join(&self, extra: &[Permutation]) -> PermGroup {
        let mut gens = self.generators().to_vec();
        gens.extend(extra.iter().cloned());
        Self::from_checked(self.degree(), gens, &[])
    }

    pub fn subgroup(&self, gens: Vec<Permutation>) -> Result<PermGroup> {
        for g in &gens {
            if !self.membership(g)? {
                return Err(Error::input(format!("{} is not an element of the group", g)));
            }
        }
        Ok(Self::from_checked(self.degree(), gens, &[]))
    }

    /// Subgroup of all elements satisfying `pred`, which must define a subgroup.
    /// Generators are added greedily in stream order.
    pub fn filter_subgroup(&self, mut pred: impl FnMut(&Permutation) -> bool) -> Result<PermGroup> {
        let mut current = PermGroup::trivial(self.degree());
        self.for_each_element(|g| {
            if pred(g) && !current.contains(g) {
                current = current.join(std::slice::from_ref(g));
            }
            true
        })?;
        Ok(current)
    }

    /// `C_G(H)`.
    pub fn centralizer(&self, h: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(h, "centralizer")?;
        let hg = h.generators().to_vec();
        self.filter_subgroup(|g| hg.iter().all(|x| x.compose(g) == g.compose(x)))
    }

    /// `N_G(H)`.
    pub fn normalizer(&self, h: &PermGroup) -> Result<PermGroup> {
        self.require_subgroup(h, "normalizer")?;
        let hg = h.generators().to_vec();
        self.filter_subgroup(|g| hg.iter().all(|x| h.contains(&x.conjugate_by(g))))
    }

    pub fn center(&self) -> Result<PermGroup> {
        self.centralizer(self)
    }

    pub fn conjugate(&self, g: &Permutation) -> PermGroup {
        let gens = self.generators().iter().map(|x| x.conjugate_by(g)).collect();
        Self::from_checked(self.degree(), gens, &[])
    }

    pub fn is_normal_in(&self, g: &PermGroup) -> bool {
        self.is_subgroup_of(g)
            && g.generators()
                .iter()
                .all(|s| self.generators().iter().all(|x| self.contains(&x.conjugate_by(s))))
    }

    /// Intersection; one side must be enumerable.
    pub fn intersection(&self, other: &PermGroup) -> Result<PermGroup> {
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        small.filter_subgroup(|g| big.contains(g))
    }

    /// Smallest subgroup containing `gens` and normalised by `self`.
    pub fn normal_closure(&self, gens: &[Permutation]) -> PermGroup {
        let mut n = Self::from_checked(self.degree(), gens.to_vec(), &[]);
        loop {
            let mut grew = false;
            'scan: for x in n.generators().to_vec() {
                for s in self.generators() {
                    let c = x.conjugate_by(s);
                    if !n.contains(&c) {
                        n = n.join(&[c]);
                        grew = true;
                        break 'scan;
                    }
                }
            }
            if !grew {
                return n;
            }
        }
    }

    /// `[H, K]`, the normal closure in `<H, K>` of commutators of generators.
    pub fn commutator_subgroup(h: &PermGroup, k: &PermGroup) -> PermGroup {
        let mut comms = Vec::new();
        for a in h.generators() {
            for b in k.generators() {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        let hk = h.join(k.generators());
        hk.normal_closure(&comms)
    }

    pub fn derived_subgroup(&self) -> PermGroup {
        Self::commutator_subgroup(self, self)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, a)| gens[i + 1..].iter().all(|b| a.compose(b) == b.compose(a)))
    }

    pub fn is_p_group(&self, p: u64) -> bool {
        p_part(self.order(), p) == self.order()
    }

    /// Sylow p-subgroup by normaliser ascent: starting from the trivial
    /// group, repeatedly adjoin the lexicographically smallest `g` in
    /// `N_G(P) \ P` with `g^p` in `P`.
    pub fn sylow_subgroup(&self, p: u64) -> Result<PermGroup> {
        if !is_prime(p) {
            return Err(Error::input(format!("{} is not prime", p)));
        }
        let target = p_part(self.order(), p);
        let mut sylow = PermGroup::trivial(self.degree());
        while sylow.order() < target {
            let pg = sylow.generators().to_vec();
            let mut best: Option<Permutation> = None;
            self.for_each_element(|g| {
                if best.as_ref().is_some_and(|b| g >= b) || sylow.contains(g) {
                    return true;
                }
                if !sylow.contains(&g.pow(p)) {
                    return true;
                }
                if pg.iter().all(|x| sylow.contains(&x.conjugate_by(g))) {
                    best = Some(g.clone());
                }
                true
            })?;
            let g = best.expect("a proper p-subgroup has a larger normaliser p-part");
            sylow = sylow.join(&[g]);
        }
        Ok(sylow)
    }

    /// `O_p(G)`: the core of a Sylow p-subgroup.
    pub fn p_core(&self, p: u64) -> Result<PermGroup> {
        let mut core = self.sylow_subgroup(p)?;
        loop {
            let mut next = core.clone();
            for s in self.generators() {
                let conj = next.conjugate(s);
                next = next.intersection(&conj)?;
            }
            if next.order() == core.order() {
                return Ok(core);
            }
            core = next;
        }
    }

    /// `O^p(G)`: generated by all p'-elements.
    pub fn p_residual(&self, p: u64) -> Result<PermGroup> {
        self.filter_subgroup(|g| g.order() % p != 0)
    }

    /// True when some element has order exactly `n`.
    pub fn has_element_of_order(&self, n: u64) -> Result<bool> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Ok(false);
        }
        let mut found = false;
        self.for_each_element(|g| {
            if g.order() == n {
                found = true;
            }
            !found
        })?;
        Ok(found)
    }

    /// Pointwise stabiliser of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        let with_base = Self::with_base(self.degree(), self.generators().to_vec(), points)?;
        let gens = with_base.chain().stabilizer_generators(points.len());
        Ok(Self::from_checked(self.degree(), gens, &[]))
    }

    /// Orbit of `point`, in discovery order.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree()];
        seen[point] = true;
        let mut orbit = vec![point];
        let mut i = 0;
        while i < orbit.len() {
            for g in self.generators() {
                let y = g.apply(orbit[i]);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }
}

impl Eq for PermGroup {}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(order {}, gens {:?})", self.order(), self.generators())
    }
}
