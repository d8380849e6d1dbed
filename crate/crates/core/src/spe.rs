//! Strongly p-embedded subgroups.
//!
//! A proper subgroup `M < H` with `p | |M|` is strongly p-embedded when
//! `M ∩ M^x` is a p'-group for every `x ∈ H \ M`. Such an `M` always contains
//! a Sylow p-subgroup, so up to conjugacy the search runs over the overgroups
//! of one fixed Sylow `P`, largest first.

use std::collections::HashSet;

use crate::bounds;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::sort_canonical;
use crate::table::{ElemSet, FiniteGroup};

/// A strongly p-embedded subgroup of `h`, if one exists.
pub fn has_strongly_p_embedded(h: &PermGroup, p: u64) -> Result<Option<PermGroup>> {
    if !h.order().is_multiple_of(p) {
        return Ok(None);
    }
    if h.order() > bounds::ELEMENT_ENUMERATION {
        return Err(Error::resource("strongly p-embedded search", h.order(), bounds::ELEMENT_ENUMERATION));
    }
    if !h.p_core(p)?.is_trivial() {
        return Ok(None);
    }
    let t = FiniteGroup::from_group(h)?;
    let sylow = t.set_of(&h.sylow_subgroup(p)?)?;
    let mut candidates = overgroups(&t, &sylow);
    sort_canonical(&mut candidates);
    let full = t.full();
    candidates.sort_by_key(|m| std::cmp::Reverse(FiniteGroup::size(m)));
    let Some(m) = candidates
        .into_iter()
        .filter(|m| *m != full)
        .find(|m| is_strongly_p_embedded(&t, m, p))
    else {
        return Ok(None);
    };
    let rep = (0..t.order() as u32)
        .map(|g| t.conjugate_set(&m, g))
        .min_by_key(FiniteGroup::key)
        .expect("nonempty group");
    Ok(Some(t.to_perm_group(&rep)))
}

/// Every subgroup of `t` containing `base`.
pub fn overgroups(t: &FiniteGroup, base: &ElemSet) -> Vec<ElemSet> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    seen.insert(FiniteGroup::key(base));
    let mut found = vec![base.clone()];
    let mut i = 0;
    while i < found.len() {
        let k = found[i].clone();
        let mut covered = k.clone();
        for x in 0..t.order() as u32 {
            if covered.contains(x as usize) {
                continue;
            }
            // <K, kx> = <K, x>: one representative per right coset
            for y in FiniteGroup::members(&k) {
                covered.insert(t.mul(y, x) as usize);
            }
            let l = t.closure_from(k.clone(), &[x]);
            if seen.insert(FiniteGroup::key(&l)) {
                found.push(l);
            }
        }
        i += 1;
    }
    found
}

/// Exhaustive check over right cosets `Mx`, `x ∉ M`: no element of order p
/// in `M` is conjugated by `x` back into `M`.
pub fn is_strongly_p_embedded(t: &FiniteGroup, m: &ElemSet, p: u64) -> bool {
    let size = FiniteGroup::size(m);
    if size == t.order() || !(size as u64).is_multiple_of(p) {
        return false;
    }
    let order_p: Vec<u32> = FiniteGroup::members(m).filter(|&y| t.elem_order(y) as u64 == p).collect();
    let mut covered = m.clone();
    for x in 0..t.order() as u32 {
        if covered.contains(x as usize) {
            continue;
        }
        for y in FiniteGroup::members(m) {
            covered.insert(t.mul(y, x) as usize);
        }
        if order_p.iter().any(|&y| m.contains(t.conj(y, x) as usize)) {
            return false;
        }
    }
    true
}
