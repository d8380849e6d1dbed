//! Automorphism groups of enumerated groups.
//!
//! `Aut(E)` is found by backtracking over images of a fixed generating
//! sequence `g_0, .., g_{k-1}`. Working from the last generator back, the
//! orbit of `g_i` under the automorphisms fixing `g_0..g_{i-1}` is grown one
//! new image at a time: an image outside the current orbit is accepted only
//! when some completion of the remaining generator images extends to a
//! bijective homomorphism. `|Aut(E)|` is the product of the orbit lengths.
//!
//! `Aut(E)` is represented as a permutation group on the non-identity
//! elements of `E`: element index `i >= 1` is point `i - 1`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::gcd;
use crate::bounds;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::table::{ElemSet, FiniteGroup};

const UNSET: u32 = u32::MAX;

/// A homomorphism between enumerated groups, stored as the full element map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHomomorphism {
    pub generators: Vec<u32>,
    pub generator_images: Vec<u32>,
    map: Vec<u32>,
    pub injective: bool,
    pub verified: bool,
}

impl GroupHomomorphism {
    /// Extends generator images to a homomorphism, if one exists.
    /// `generators` must generate `source`.
    pub fn from_generator_images(
        source: &FiniteGroup,
        target: &FiniteGroup,
        generators: &[u32],
        images: &[u32],
    ) -> Option<Self> {
        let map = extend_partial(source, target, generators, images)?;
        if map.contains(&UNSET) {
            return None;
        }
        let mut seen = target.empty_set();
        let injective = map.iter().all(|&x| !seen.put(x as usize));
        let mut h = GroupHomomorphism {
            generators: generators.to_vec(),
            generator_images: images.to_vec(),
            map,
            injective,
            verified: false,
        };
        h.verified = h.audit(source, target);
        Some(h)
    }

    /// Builds from a full element map and audits it.
    pub fn from_map(source: &FiniteGroup, target: &FiniteGroup, map: Vec<u32>) -> Self {
        let generators = source.generators(&source.full());
        let generator_images = generators.iter().map(|&g| map[g as usize]).collect();
        let mut seen = target.empty_set();
        let injective = map.iter().all(|&x| !seen.put(x as usize));
        let mut h = GroupHomomorphism {
            generators,
            generator_images,
            map,
            injective,
            verified: false,
        };
        h.verified = h.audit(source, target);
        h
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn map(&self) -> &[u32] {
        &self.map
    }

    /// Full multiplication audit when the table is small, otherwise a check
    /// on every Cayley-graph edge (equivalent for a generating sequence).
    pub fn audit(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        let n = source.order() as u32;
        if self.map.len() != n as usize {
            return false;
        }
        if source.order() <= bounds::MULTIPLICATION_TABLE {
            (0..n).all(|a| {
                (0..n).all(|b| self.map[source.mul(a, b) as usize] == target.mul(self.map[a as usize], self.map[b as usize]))
            })
        } else {
            let span = source.closure(&self.generators);
            FiniteGroup::size(&span) == source.order()
                && (0..n).all(|a| {
                    self.generators.iter().all(|&g| {
                        self.map[source.mul(a, g) as usize] == target.mul(self.map[a as usize], self.map[g as usize])
                    })
                })
        }
    }

    pub fn is_automorphism(&self) -> bool {
        self.verified && self.injective
    }
}

/// Extends `gens -> images` along the Cayley graph of `<gens>`. Returns the
/// partial map (UNSET outside `<gens>`) when it is a well-defined injective
/// homomorphism on `<gens>`.
fn extend_partial(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[u32],
    images: &[u32],
) -> Option<Vec<u32>> {
    let mut map = vec![UNSET; source.order()];
    let mut used = target.empty_set();
    map[0] = 0;
    used.insert(0);
    let mut queue = vec![0u32];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x as usize];
        for (&g, &img) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let fy = target.mul(fx, img);
            match map[y as usize] {
                UNSET => {
                    if used.put(fy as usize) {
                        return None;
                    }
                    map[y as usize] = fy;
                    queue.push(y);
                }
                v if v != fy => return None,
                _ => {}
            }
        }
        i += 1;
    }
    Some(map)
}

/// A generating sequence for the search. For p-groups it lifts a basis of
/// `E/Φ(E)`; elements with fewer same-invariant candidates come first.
fn search_generators(t: &FiniteGroup, invariant: &[(u32, u32)], counts: &HashMap<(u32, u32), usize>) -> Vec<u32> {
    let full = t.full();
    let base = match t.prime() {
        Some(p) => t.frattini_p(&full, p),
        None => t.trivial(),
    };
    let mut order: Vec<u32> = (1..t.order() as u32).collect();
    order.sort_by_key(|&x| (counts[&invariant[x as usize]], std::cmp::Reverse(t.elem_order(x)), x));
    let mut gens = Vec::new();
    let mut span = base.clone();
    for x in order {
        if FiniteGroup::size(&span) == t.order() {
            break;
        }
        if !span.contains(x as usize) {
            gens.push(x);
            span = t.closure_from(span, &[x]);
        }
    }
    // without the Frattini shortcut the sequence must generate on its own
    debug_assert_eq!(FiniteGroup::size(&t.closure(&gens)), t.order());
    gens
}

struct Search<'a> {
    t: &'a FiniteGroup,
    gens: Vec<u32>,
    candidates: Vec<Vec<u32>>,
}

impl Search<'_> {
    /// Finds one automorphism with the given prefix of generator images.
    fn complete(&self, images: &mut Vec<u32>) -> Option<Vec<u32>> {
        let j = images.len();
        let partial = extend_partial(self.t, self.t, &self.gens[..j], images)?;
        if j == self.gens.len() {
            return Some(partial);
        }
        for &y in &self.candidates[j] {
            if partial.contains(&y) {
                continue;
            }
            images.push(y);
            let found = self.complete(images);
            images.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Generators of `Aut(E)` as element maps, the generating sequence used, and `|Aut(E)|`.
fn search_automorphisms(t: &FiniteGroup) -> (Vec<u32>, Vec<Vec<u32>>, u64) {
    if t.order() == 1 {
        return (Vec::new(), Vec::new(), 1);
    }
    let class = t.class_sizes();
    let invariant: Vec<(u32, u32)> = (0..t.order() as u32).map(|x| (t.elem_order(x), class[x as usize])).collect();
    let mut counts: HashMap<(u32, u32), usize> = HashMap::new();
    for inv in &invariant {
        *counts.entry(*inv).or_default() += 1;
    }
    let gens = search_generators(t, &invariant, &counts);
    let candidates = gens
        .iter()
        .map(|&g| (1..t.order() as u32).filter(|&y| invariant[y as usize] == invariant[g as usize]).collect())
        .collect();
    let search = Search { t, gens: gens.clone(), candidates };

    let mut found: Vec<Vec<u32>> = Vec::new();
    let mut order = 1u64;
    for level in (0..gens.len()).rev() {
        let target = gens[level];
        let mut in_orbit = t.empty_set();
        let mut orbit = vec![target];
        in_orbit.insert(target as usize);
        let grow = |orbit: &mut Vec<u32>, in_orbit: &mut ElemSet, found: &[Vec<u32>]| {
            let mut i = 0;
            while i < orbit.len() {
                for m in found {
                    let y = m[orbit[i] as usize];
                    if !in_orbit.put(y as usize) {
                        orbit.push(y);
                    }
                }
                i += 1;
            }
        };
        grow(&mut orbit, &mut in_orbit, &found);
        for &y in &search.candidates[level] {
            if in_orbit.contains(y as usize) {
                continue;
            }
            let mut prefix: Vec<u32> = gens[..level].to_vec();
            prefix.push(y);
            if let Some(map) = search.complete(&mut prefix) {
                found.push(map);
                grow(&mut orbit, &mut in_orbit, &found);
            }
        }
        order = order.checked_mul(orbit.len() as u64).expect("|Aut| overflows u64");
    }
    (gens, found, order)
}

/// `Aut(E)` as a faithful permutation group on the non-identity elements of `E`.
pub struct AutomorphismGroup {
    base: Arc<FiniteGroup>,
    generating_sequence: Vec<u32>,
    action: PermGroup,
    inner: PermGroup,
}

impl AutomorphismGroup {
    pub fn base(&self) -> &Arc<FiniteGroup> {
        &self.base
    }

    pub fn action(&self) -> &PermGroup {
        &self.action
    }

    pub fn inner(&self) -> &PermGroup {
        &self.inner
    }

    pub fn order(&self) -> u64 {
        self.action.order()
    }

    pub fn generating_sequence(&self) -> &[u32] {
        &self.generating_sequence
    }

    /// Element map of an action permutation.
    pub fn map_of(&self, perm: &Permutation) -> Vec<u32> {
        map_of_perm(perm)
    }

    pub fn perm_of(&self, map: &[u32]) -> Permutation {
        perm_of_map(map)
    }

    pub fn to_hom(&self, perm: &Permutation) -> GroupHomomorphism {
        GroupHomomorphism::from_map(&self.base, &self.base, self.map_of(perm))
    }

    /// Generator maps of `Aut(E)` (one per action generator).
    pub fn generator_maps(&self) -> Vec<Vec<u32>> {
        self.action.generators().iter().map(map_of_perm).collect()
    }
}

/// Element map (index 0 fixed) of a permutation on non-identity elements.
pub fn map_of_perm(perm: &Permutation) -> Vec<u32> {
    let mut m = vec![0u32];
    m.extend(perm.images().iter().map(|&x| x + 1));
    m
}

/// Permutation on non-identity elements of an element map fixing 0.
pub fn perm_of_map(map: &[u32]) -> Permutation {
    debug_assert_eq!(map[0], 0);
    Permutation::from_images_unchecked(map[1..].iter().map(|&x| x - 1).collect())
}

/// Permutations (on non-identity elements) of conjugation by each generator.
pub fn inner_perms(t: &FiniteGroup, gens: &[u32]) -> Vec<Permutation> {
    gens.iter()
        .map(|&g| perm_of_map(&(0..t.order() as u32).map(|x| t.conj(x, g)).collect::<Vec<_>>()))
        .collect()
}

/// Computes `Aut(E)` from scratch.
pub fn automorphism_group_of(t: Arc<FiniteGroup>) -> Result<AutomorphismGroup> {
    if t.order() as u64 > bounds::ELEMENT_ENUMERATION {
        return Err(Error::resource("automorphism group", t.order() as u64, bounds::ELEMENT_ENUMERATION));
    }
    let (gens, maps, order) = search_automorphisms(&t);
    for m in &maps {
        let h = GroupHomomorphism::from_map(&t, &t, m.clone());
        assert!(h.is_automorphism(), "automorphism search produced a non-automorphism");
    }
    assemble(t, gens, maps, Some(order))
}

/// Assembles the permutation model from generator maps. When `expected` is
/// given the order must match.
pub(crate) fn assemble(
    t: Arc<FiniteGroup>,
    generating_sequence: Vec<u32>,
    maps: Vec<Vec<u32>>,
    expected: Option<u64>,
) -> Result<AutomorphismGroup> {
    let degree = t.order() - 1;
    let perms = maps.iter().map(|m| perm_of_map(m)).collect();
    let action = PermGroup::from_checked(degree, perms, &[]);
    if let Some(e) = expected {
        if action.order() != e {
            return Err(Error::input(format!(
                "automorphism generators give order {}, expected {}",
                action.order(),
                e
            )));
        }
    }
    let egens = t.generators(&t.full());
    let inner = PermGroup::from_checked(degree, inner_perms(&t, &egens), &[]);
    Ok(AutomorphismGroup {
        base: t,
        generating_sequence,
        action,
        inner,
    })
}

/// `Aut(E)` for a permutation group `E`.
pub fn automorphism_group(e: &PermGroup) -> Result<AutomorphismGroup> {
    automorphism_group_of(Arc::new(FiniteGroup::from_group(e)?))
}

/// Regular action of `G/N` on the right cosets of a normal subgroup `N`.
pub struct CosetQuotient {
    pub group: PermGroup,
    coset_of: HashMap<Permutation, u32>,
    reps: Vec<Permutation>,
}

impl CosetQuotient {
    pub fn new(g: &PermGroup, n: &PermGroup) -> Result<Self> {
        if !n.is_normal_in(g) {
            return Err(Error::input("quotient by a non-normal subgroup"));
        }
        let elements = g.elements()?;
        let n_elems = n.elements()?;
        let mut coset_of: HashMap<Permutation, u32> = HashMap::with_capacity(elements.len());
        let mut reps = Vec::new();
        for x in &elements {
            if coset_of.contains_key(x) {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x.clone());
            for y in &n_elems {
                coset_of.insert(y.compose(x), id);
            }
        }
        let mut q = CosetQuotient {
            group: PermGroup::trivial(reps.len()),
            coset_of,
            reps,
        };
        let gens = g.generators().iter().map(|x| q.project(x)).collect();
        q.group = PermGroup::from_checked(q.reps.len(), gens, &[]);
        Ok(q)
    }

    /// Image of `x` in the quotient.
    pub fn project(&self, x: &Permutation) -> Permutation {
        let images = self.reps.iter().map(|r| self.coset_of[&r.compose(x)]).collect();
        Permutation::from_images_unchecked(images)
    }

    /// Image of a subgroup of `G`.
    pub fn project_group(&self, h: &PermGroup) -> PermGroup {
        let gens = h.generators().iter().map(|x| self.project(x)).collect();
        PermGroup::from_checked(self.reps.len(), gens, &[])
    }

    pub fn index(&self) -> usize {
        self.reps.len()
    }
}

/// `Out(E) = Aut(E)/Inn(E)`.
pub struct OuterQuotient {
    pub quotient: CosetQuotient,
}

impl OuterQuotient {
    pub fn order(&self) -> u64 {
        self.quotient.group.order()
    }

    pub fn project(&self, x: &Permutation) -> Permutation {
        self.quotient.project(x)
    }
}

pub fn outer_quotient(a: &AutomorphismGroup) -> Result<OuterQuotient> {
    Ok(OuterQuotient {
        quotient: CosetQuotient::new(a.action(), a.inner())?,
    })
}

/// Maps induced on `E/N` by a set of endomorphisms leaving `N` invariant.
pub struct InducedAction {
    pub quotient: FiniteGroup,
    /// Projection `E -> E/N` on element indices.
    pub projection: Vec<u32>,
    /// One element map of `E/N` per input map.
    pub maps: Vec<Vec<u32>>,
    /// Group generated by the induced maps, on non-identity elements of `E/N`.
    pub image: PermGroup,
    /// `|<maps>| / |image|`, when the maps are automorphisms.
    pub kernel_order: u64,
}

pub fn induced_quotient_action(t: &FiniteGroup, maps: &[Vec<u32>], n: &ElemSet) -> Result<InducedAction> {
    let full = t.full();
    if !t.is_subgroup(n) || !t.is_normal(n, &full) {
        return Err(Error::input("quotient subgroup is not normal"));
    }
    for (i, m) in maps.iter().enumerate() {
        if FiniteGroup::members(n).any(|x| !n.contains(m[x as usize] as usize)) {
            return Err(Error::input(format!("map {} does not leave the subgroup invariant", i)));
        }
    }
    let (q, proj) = t.quotient(&full, n);
    let mut rep = vec![UNSET; q.order()];
    for x in 0..t.order() as u32 {
        let c = proj[x as usize] as usize;
        if rep[c] == UNSET {
            rep[c] = x;
        }
    }
    let induced: Vec<Vec<u32>> = maps
        .iter()
        .map(|m| rep.iter().map(|&r| proj[m[r as usize] as usize]).collect())
        .collect();
    let image = PermGroup::from_checked(
        q.order() - 1,
        induced.iter().map(|m| perm_of_map(m)).collect(),
        &[],
    );
    let source = PermGroup::from_checked(t.order() - 1, maps.iter().map(|m| perm_of_map(m)).collect(), &[]);
    Ok(InducedAction {
        kernel_order: source.order() / image.order(),
        quotient: q,
        projection: proj,
        maps: induced,
        image,
    })
}

/// Elements of `Aut(E)` inducing the identity on `E/N`, as a subgroup of the action.
pub fn induced_kernel(a: &AutomorphismGroup, n: &ElemSet) -> Result<PermGroup> {
    let t = a.base();
    let maps = a.generator_maps();
    let induced = induced_quotient_action(t, &maps, n)?;
    let e_deg = t.order() - 1;
    let q_deg = induced.quotient.order() - 1;
    // act on E\{1} and E/N\{1} side by side, then fix the quotient points
    let combined: Vec<Permutation> = maps
        .iter()
        .zip(&induced.maps)
        .map(|(m, qm)| {
            let mut images: Vec<u32> = m[1..].iter().map(|&x| x - 1).collect();
            images.extend(qm[1..].iter().map(|&x| x - 1 + e_deg as u32));
            Permutation::from_images_unchecked(images)
        })
        .collect();
    let g = PermGroup::from_checked(e_deg + q_deg, combined, &[]);
    let qpoints: Vec<usize> = (e_deg..e_deg + q_deg).collect();
    let stab = g.pointwise_stabilizer(&qpoints)?;
    let gens = stab
        .generators()
        .iter()
        .map(|x| Permutation::from_images_unchecked(x.images()[..e_deg].to_vec()))
        .collect();
    Ok(PermGroup::from_checked(e_deg, gens, &[]))
}

/// Required order for the lifting check: `(q - 1) / gcd(2, q - 1)`.
pub fn lifting_order(q: u64) -> u64 {
    (q - 1) / gcd(2, q - 1)
}

pub fn has_element_of_order(g: &PermGroup, n: u64) -> Result<bool> {
    g.has_element_of_order(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &c).unwrap()
    }

    fn group(n: usize, gens: Vec<Permutation>) -> PermGroup {
        PermGroup::new(n, gens).unwrap()
    }

    fn d8() -> PermGroup {
        group(4, vec![p(4, &[&[1, 2, 3, 4]]), p(4, &[&[1, 3]])])
    }

    fn q8() -> PermGroup {
        group(
            8,
            vec![
                p(8, &[&[1, 2, 4, 7], &[3, 6, 8, 5]]),
                p(8, &[&[1, 3, 4, 8], &[2, 5, 7, 6]]),
            ],
        )
    }

    #[test]
    fn small_automorphism_orders() {
        let v4 = group(4, vec![p(4, &[&[1, 2], &[3, 4]]), p(4, &[&[1, 3], &[2, 4]])]);
        assert_eq!(automorphism_group(&v4).unwrap().order(), 6);
        let c4 = group(4, vec![p(4, &[&[1, 2, 3, 4]])]);
        assert_eq!(automorphism_group(&c4).unwrap().order(), 2);
        assert_eq!(q8().order(), 8);
        assert_eq!(automorphism_group(&q8()).unwrap().order(), 24);
        assert_eq!(automorphism_group(&d8()).unwrap().order(), 8);
    }

    #[test]
    fn outer_quotients() {
        let a = automorphism_group(&d8()).unwrap();
        assert_eq!(a.inner().order(), 4);
        let out = outer_quotient(&a).unwrap();
        assert_eq!(out.order(), 2);
        // projection is a homomorphism with kernel Inn
        for x in a.inner().generators() {
            assert!(out.project(x).is_identity());
        }
        let c3c3 = group(6, vec![p(6, &[&[1, 2, 3]]), p(6, &[&[4, 5, 6]])]);
        let a = automorphism_group(&c3c3).unwrap();
        assert!(a.inner().is_trivial());
        assert_eq!(outer_quotient(&a).unwrap().order(), a.order());
        assert_eq!(a.order(), 48);
    }

    #[test]
    fn induced_action_on_frattini_quotient() {
        let a = automorphism_group(&d8()).unwrap();
        let t = a.base().clone();
        let phi = t.frattini_p(&t.full(), 2);
        let ind = induced_quotient_action(&t, &a.generator_maps(), &phi).unwrap();
        assert_eq!(ind.image.order(), 2);
        assert_eq!(ind.kernel_order, 4);
        let k = induced_kernel(&a, &phi).unwrap();
        assert_eq!(k.order(), 4);
        // inner maps act trivially on E/[E,E]
        let d = t.derived(&t.full());
        let inner: Vec<Vec<u32>> = a.inner().generators().iter().map(map_of_perm).collect();
        let ind = induced_quotient_action(&t, &inner, &d).unwrap();
        assert!(ind.image.is_trivial());
        // identity map
        let id: Vec<u32> = (0..t.order() as u32).collect();
        let ind = induced_quotient_action(&t, &[id], &phi).unwrap();
        assert!(ind.image.is_trivial());
    }

    #[test]
    fn non_invariant_subgroup_rejected() {
        let a = automorphism_group(&d8()).unwrap();
        let t = a.base().clone();
        // a non-central subgroup of order 2 is normal in nothing useful; use a Klein four
        let v = t.closure(&[t.index_of(&p(4, &[&[1, 3]])).unwrap(), t.index_of(&p(4, &[&[2, 4]])).unwrap()]);
        let err = induced_quotient_action(&t, &a.generator_maps(), &v);
        assert!(err.is_err());
    }

    /// Counts bijective homomorphisms by trying every tuple of generator images.
    fn brute_aut_order(t: &FiniteGroup) -> u64 {
        let gens = t.generators(&t.full());
        let n = t.order() as u32;
        let mut count = 0u64;
        let mut images = vec![0u32; gens.len()];
        loop {
            if let Some(h) = GroupHomomorphism::from_generator_images(t, t, &gens, &images) {
                if h.is_automorphism() {
                    count += 1;
                }
            }
            let mut i = 0;
            loop {
                if i == images.len() {
                    return count;
                }
                images[i] += 1;
                if images[i] < n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn search_matches_brute_force() {
        let groups = vec![
            d8(),
            q8(),
            group(6, vec![p(6, &[&[1, 2, 3]]), p(6, &[&[4, 5, 6]])]),
            PermGroup::symmetric(4),
            group(8, vec![p(8, &[&[1, 2, 3, 4, 5, 6, 7, 8]]), p(8, &[&[2, 4], &[6, 8]])]),
            group(6, vec![p(6, &[&[1, 2], &[3, 4]]), p(6, &[&[1, 2], &[5, 6]]), p(6, &[&[3, 4], &[5, 6]])]),
        ];
        for g in groups {
            let a = automorphism_group(&g).unwrap();
            assert_eq!(a.order(), brute_aut_order(a.base()), "group of order {}", g.order());
            for m in a.generator_maps() {
                assert!(GroupHomomorphism::from_map(a.base(), a.base(), m).is_automorphism());
            }
        }
    }

    #[test]
    fn element_orders() {
        let c3c3 = group(6, vec![p(6, &[&[1, 2, 3]]), p(6, &[&[4, 5, 6]])]);
        let gl23 = automorphism_group(&c3c3).unwrap();
        assert!(has_element_of_order(gl23.action(), 8).unwrap());
        let c3 = group(3, vec![p(3, &[&[1, 2, 3]])]);
        assert!(!has_element_of_order(&c3, 2).unwrap());
        assert!(has_element_of_order(&d8(), 4).unwrap());
        assert_eq!(lifting_order(9), 4);
        assert_eq!(lifting_order(4), 3);
    }
}
