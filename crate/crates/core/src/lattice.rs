//! Subgroup enumeration and subgroup classes under a conjugacy action.
//!
//! Subgroups are grown layer by layer by adjoining elements and deduplicated
//! by their element set. For p-groups every subgroup of order `p^(k+1)` is
//! `<M, x>` for some subgroup `M` of order `p^k` and `x` in `N(M)` with
//! `x^p` in `M`, so each layer is built from the one below without a
//! general closure.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::arith::prime_power;
use crate::bounds;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::table::{ElemSet, FiniteGroup};

/// Sorts subgroups canonically: by order, then by element key.
pub fn sort_canonical(subgroups: &mut [ElemSet]) {
    subgroups.sort_by_cached_key(|s| (FiniteGroup::size(s), FiniteGroup::key(s)));
}

/// All subgroups of `within`, canonically sorted, including 1 and `within`.
pub fn all_subgroups(t: &FiniteGroup, within: &ElemSet) -> Result<Vec<ElemSet>> {
    let n = FiniteGroup::size(within) as u64;
    let bound = bounds::subgroup_bound(n);
    if n > bound {
        return Err(Error::resource("subgroup enumeration", n, bound));
    }
    let mut subs = match prime_power(n) {
        Some((p, _)) => p_group_subgroups(t, within, p),
        None if n == 1 => vec![t.trivial()],
        None => general_subgroups(t, within),
    };
    sort_canonical(&mut subs);
    Ok(subs)
}

fn p_group_subgroups(t: &FiniteGroup, within: &ElemSet, p: u64) -> Vec<ElemSet> {
    let mut all = vec![t.trivial()];
    let mut layer = vec![t.trivial()];
    while !layer.is_empty() {
        let next: Vec<Vec<ElemSet>> = layer
            .par_iter()
            .map(|m| index_p_overgroups(t, within, m, p))
            .collect();
        let mut seen: HashSet<ElemSet> = HashSet::new();
        let mut new_layer = Vec::new();
        for k in next.into_iter().flatten() {
            if seen.insert(k.clone()) {
                new_layer.push(k);
            }
        }
        sort_canonical(&mut new_layer);
        all.extend(new_layer.iter().cloned());
        layer = new_layer;
    }
    all
}

/// Subgroups `K` of `within` containing `m` as a normal subgroup of index p.
fn index_p_overgroups(t: &FiniteGroup, within: &ElemSet, m: &ElemSet, p: u64) -> Vec<ElemSet> {
    let norm = t.normalizer(within, m);
    let mut covered = m.clone();
    let mut out = Vec::new();
    for x in FiniteGroup::members(&norm) {
        if covered.contains(x as usize) || !m.contains(t.pow(x, p) as usize) {
            continue;
        }
        let mut k = m.clone();
        let mut xi = 0u32;
        for _ in 1..p {
            xi = t.mul(xi, x);
            for y in FiniteGroup::members(m) {
                k.insert(t.mul(y, xi) as usize);
            }
        }
        covered.union_with(&k);
        out.push(k);
    }
    out
}

fn general_subgroups(t: &FiniteGroup, within: &ElemSet) -> Vec<ElemSet> {
    // Cyclic subgroups of prime-power order generate every subgroup.
    let mut cyclic_gens: Vec<u32> = Vec::new();
    let mut cyclic_seen: HashSet<ElemSet> = HashSet::new();
    for x in FiniteGroup::members(within) {
        if x == 0 || prime_power(t.elem_order(x) as u64).is_none() {
            continue;
        }
        if cyclic_seen.insert(t.closure(&[x])) {
            cyclic_gens.push(x);
        }
    }
    let mut seen: HashSet<ElemSet> = HashSet::new();
    seen.insert(t.trivial());
    let mut queue = vec![t.trivial()];
    let mut i = 0;
    while i < queue.len() {
        let h = queue[i].clone();
        i += 1;
        for &x in &cyclic_gens {
            if h.contains(x as usize) {
                continue;
            }
            let k = t.closure_from(h.clone(), &[x]);
            if seen.insert(k.clone()) {
                queue.push(k);
            }
        }
    }
    queue
}

/// Elementary abelian subgroups of a p-group `within`, canonically sorted.
pub fn elementary_abelian_subgroups(t: &FiniteGroup, within: &ElemSet, p: u64) -> Vec<ElemSet> {
    let order_p: Vec<u32> = FiniteGroup::members(within)
        .filter(|&x| t.elem_order(x) as u64 == p)
        .collect();
    let mut all = vec![t.trivial()];
    let mut layer = vec![t.trivial()];
    while !layer.is_empty() {
        let mut seen: HashSet<ElemSet> = HashSet::new();
        let mut next = Vec::new();
        for a in &layer {
            let gens = t.generators(a);
            let mut covered = a.clone();
            for &x in &order_p {
                if covered.contains(x as usize)
                    || !gens.iter().all(|&g| t.mul(g, x) == t.mul(x, g))
                {
                    continue;
                }
                let k = t.closure_from(a.clone(), &[x]);
                covered.union_with(&k);
                if seen.insert(k.clone()) {
                    next.push(k);
                }
            }
        }
        sort_canonical(&mut next);
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// How subgroups are identified into classes.
#[derive(Clone, Debug)]
pub enum ConjugacyAction {
    /// Conjugation by elements of the group.
    Inner,
    /// A group of automorphisms, given by generators as maps on element indices.
    Automorphisms(Vec<Vec<u32>>),
}

/// One orbit of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Key-minimal member.
    pub representative: ElemSet,
    /// Indices into the subgroup list passed to [`subgroup_classes`].
    pub members: Vec<usize>,
}

impl SubgroupClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Partitions `subgroups` (closed under the action) into orbits.
/// Classes are ordered by their representative (order, then key).
pub fn subgroup_classes(
    t: &FiniteGroup,
    within: &ElemSet,
    subgroups: &[ElemSet],
    action: &ConjugacyAction,
) -> Result<Vec<SubgroupClass>> {
    let maps: Vec<Vec<u32>> = match action {
        ConjugacyAction::Inner => t
            .generators(within)
            .into_iter()
            .map(|g| (0..t.order() as u32).map(|x| t.conj(x, g)).collect())
            .collect(),
        ConjugacyAction::Automorphisms(maps) => {
            for m in maps {
                if m.len() != t.order() {
                    return Err(Error::input("automorphism map has the wrong length"));
                }
            }
            maps.clone()
        }
    };
    let position: HashMap<&ElemSet, usize> =
        subgroups.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes = Vec::new();
    for start in 0..subgroups.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        class_of[start] = cid;
        let mut orbit = vec![start];
        let mut i = 0;
        while i < orbit.len() {
            let s = &subgroups[orbit[i]];
            for m in &maps {
                let mut img = t.empty_set();
                for x in FiniteGroup::members(s) {
                    img.insert(m[x as usize] as usize);
                }
                let j = *position
                    .get(&img)
                    .ok_or_else(|| Error::input("subgroup list is not closed under the action"))?;
                if class_of[j] == usize::MAX {
                    class_of[j] = cid;
                    orbit.push(j);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        let rep = orbit
            .iter()
            .map(|&j| &subgroups[j])
            .min_by_key(|s| FiniteGroup::key(s))
            .unwrap()
            .clone();
        classes.push(SubgroupClass {
            representative: rep,
            members: orbit,
        });
    }
    classes.sort_by_cached_key(|c| {
        (
            FiniteGroup::size(&c.representative),
            FiniteGroup::key(&c.representative),
        )
    });
    Ok(classes)
}

/// All subgroups of a permutation group, as permutation groups.
pub fn all_subgroups_of(g: &PermGroup) -> Result<Vec<PermGroup>> {
    let bound = bounds::subgroup_bound(g.order());
    if g.order() > bound {
        return Err(Error::resource("subgroup enumeration", g.order(), bound));
    }
    let t = FiniteGroup::from_group(g)?;
    let subs = all_subgroups(&t, &t.full())?;
    Ok(subs.iter().map(|s| t.to_perm_group(s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &c).unwrap()
    }

    fn table(n: usize, gens: Vec<Permutation>) -> FiniteGroup {
        FiniteGroup::from_group(&PermGroup::new(n, gens).unwrap()).unwrap()
    }

    /// Oracle: every subset closed under products, found by exhaustive
    /// fixpoint of `<H, x>` over all elements `x`.
    fn oracle_count(t: &FiniteGroup) -> usize {
        let mut seen: HashSet<ElemSet> = HashSet::new();
        let mut queue = vec![t.trivial()];
        seen.insert(t.trivial());
        while let Some(h) = queue.pop() {
            for x in 0..t.order() as u32 {
                let mut gens: Vec<u32> = FiniteGroup::members(&h).collect();
                gens.push(x);
                let k = t.closure(&gens);
                if seen.insert(k.clone()) {
                    queue.push(k);
                }
            }
        }
        seen.len()
    }

    #[test]
    fn subgroup_counts() {
        let d8 = table(4, vec![p(4, &[&[1, 2, 3, 4]]), p(4, &[&[1, 3]])]);
        assert_eq!(all_subgroups(&d8, &d8.full()).unwrap().len(), 10);
        assert_eq!(oracle_count(&d8), 10);
        let c5 = table(5, vec![p(5, &[&[1, 2, 3, 4, 5]])]);
        assert_eq!(all_subgroups(&c5, &c5.full()).unwrap().len(), 2);
        let c3c3 = table(6, vec![p(6, &[&[1, 2, 3]]), p(6, &[&[4, 5, 6]])]);
        assert_eq!(all_subgroups(&c3c3, &c3c3.full()).unwrap().len(), 6);
        let s4 = FiniteGroup::from_group(&PermGroup::symmetric(4)).unwrap();
        assert_eq!(all_subgroups(&s4, &s4.full()).unwrap().len(), 30);
        assert_eq!(oracle_count(&s4), 30);
    }

    #[test]
    fn classes_of_d8() {
        let d8 = table(4, vec![p(4, &[&[1, 2, 3, 4]]), p(4, &[&[1, 3]])]);
        let subs = all_subgroups(&d8, &d8.full()).unwrap();
        let inner = subgroup_classes(&d8, &d8.full(), &subs, &ConjugacyAction::Inner).unwrap();
        let total: usize = inner.iter().map(|c| c.size()).sum();
        assert_eq!(total, 10);
        let fours: Vec<_> = inner
            .iter()
            .filter(|c| FiniteGroup::size(&c.representative) == 4 && !d8.is_cyclic(&c.representative))
            .collect();
        assert_eq!(fours.len(), 2);
    }

    #[test]
    fn abelian_inner_classes_are_singletons() {
        let c3c3 = table(6, vec![p(6, &[&[1, 2, 3]]), p(6, &[&[4, 5, 6]])]);
        let subs = all_subgroups(&c3c3, &c3c3.full()).unwrap();
        let cl = subgroup_classes(&c3c3, &c3c3.full(), &subs, &ConjugacyAction::Inner).unwrap();
        assert_eq!(cl.len(), subs.len());
    }

    #[test]
    fn elementary_abelian_of_d8() {
        let d8 = table(4, vec![p(4, &[&[1, 2, 3, 4]]), p(4, &[&[1, 3]])]);
        let ea = elementary_abelian_subgroups(&d8, &d8.full(), 2);
        // 1, five involutions, two Klein fours
        assert_eq!(ea.len(), 8);
    }
}
