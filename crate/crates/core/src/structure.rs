//! Characteristic subgroups and shape predicates.

use crate::bounds;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::{all_subgroups, elementary_abelian_subgroups};
use crate::table::{ElemSet, FiniteGroup};

/// Characteristic subgroups of a group, as bitsets of its table.
#[derive(Clone, Debug)]
pub struct Characteristic {
    pub center: ElemSet,
    pub derived: ElemSet,
    pub frattini: ElemSet,
    /// `℧(P)`; p-groups only.
    pub agemo: Option<ElemSet>,
    /// `J(P)`; p-groups only.
    pub thompson: Option<ElemSet>,
    pub upper_central_series: Vec<ElemSet>,
    pub exponent: u64,
}

/// Thompson subgroup: generated by the elementary abelian subgroups of largest order.
pub fn thompson(t: &FiniteGroup, within: &ElemSet, p: u64) -> ElemSet {
    let ea = elementary_abelian_subgroups(t, within, p);
    let max = ea.iter().map(FiniteGroup::size).max().unwrap_or(1);
    let mut gens = Vec::new();
    for a in ea.iter().filter(|a| FiniteGroup::size(a) == max) {
        gens.extend(t.generators(a));
    }
    t.closure(&gens)
}

/// Frattini subgroup; `H' ℧(H)` for p-groups, otherwise the intersection of
/// the maximal subgroups.
pub fn frattini(t: &FiniteGroup, within: &ElemSet) -> Result<ElemSet> {
    let n = FiniteGroup::size(within) as u64;
    if let Some((p, _)) = crate::arith::prime_power(n) {
        return Ok(t.frattini_p(within, p));
    }
    if n == 1 {
        return Ok(within.clone());
    }
    maximal_intersection(t, within)
}

/// Intersection of the maximal subgroups, found by enumeration.
pub fn maximal_intersection(t: &FiniteGroup, within: &ElemSet) -> Result<ElemSet> {
    let subs = all_subgroups(t, within)?;
    let proper: Vec<&ElemSet> = subs.iter().filter(|s| *s != within).collect();
    let mut out = within.clone();
    for m in &proper {
        let maximal = !proper
            .iter()
            .any(|k| *k != *m && m.is_subset(k));
        if maximal {
            out.intersect_with(m);
        }
    }
    Ok(out)
}

pub fn characteristic(t: &FiniteGroup, within: &ElemSet) -> Result<Characteristic> {
    let n = FiniteGroup::size(within) as u64;
    let prime = crate::arith::prime_power(n).map(|(p, _)| p);
    Ok(Characteristic {
        center: t.center(within),
        derived: t.derived(within),
        frattini: frattini(t, within)?,
        agemo: prime.map(|p| t.agemo(within, p)),
        thompson: prime.map(|p| thompson(t, within, p)),
        upper_central_series: t.upper_central_series(within),
        exponent: t.exponent(within),
    })
}

/// [`Characteristic`] converted to permutation groups.
#[derive(Clone, Debug)]
pub struct CharacteristicReport {
    pub center: PermGroup,
    pub derived: PermGroup,
    pub frattini: PermGroup,
    pub agemo: Option<PermGroup>,
    pub thompson: Option<PermGroup>,
    pub upper_central_series: Vec<PermGroup>,
    pub exponent: u64,
}

pub fn characteristic_subgroups(g: &PermGroup) -> Result<CharacteristicReport> {
    let bound = bounds::subgroup_bound(g.order());
    if g.order() > bound {
        return Err(Error::resource("characteristic subgroups", g.order(), bound));
    }
    let t = FiniteGroup::from_group(g)?;
    let c = characteristic(&t, &t.full())?;
    Ok(CharacteristicReport {
        center: t.to_perm_group(&c.center),
        derived: t.to_perm_group(&c.derived),
        frattini: t.to_perm_group(&c.frattini),
        agemo: c.agemo.as_ref().map(|s| t.to_perm_group(s)),
        thompson: c.thompson.as_ref().map(|s| t.to_perm_group(s)),
        upper_central_series: c.upper_central_series.iter().map(|s| t.to_perm_group(s)).collect(),
        exponent: c.exponent,
    })
}

/// Shape flags of a group.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct StructureFlags {
    pub is_elementary_abelian: bool,
    /// `Z(P) = P' = Φ(P)` of order p.
    pub is_extraspecial: bool,
    /// Exponent of an extraspecial group (`p` or `p^2` for odd p).
    pub extraspecial_exponent: Option<u64>,
    /// Nonabelian with `Z(P) = P' = Φ(P)`.
    pub is_special: bool,
}

pub fn structure_flags(t: &FiniteGroup, within: &ElemSet) -> StructureFlags {
    let n = FiniteGroup::size(within) as u64;
    let Some((p, _)) = crate::arith::prime_power(n) else {
        return StructureFlags {
            is_elementary_abelian: n == 1,
            is_extraspecial: false,
            extraspecial_exponent: None,
            is_special: false,
        };
    };
    let z = t.center(within);
    let d = t.derived(within);
    let f = t.frattini_p(within, p);
    let special = !t.is_abelian(within) && z == d && d == f;
    let extraspecial = special && FiniteGroup::size(&z) as u64 == p;
    StructureFlags {
        is_elementary_abelian: t.is_elementary_abelian(within),
        is_extraspecial: extraspecial,
        extraspecial_exponent: extraspecial.then(|| t.exponent(within)),
        is_special: special,
    }
}

pub fn structure_predicates(g: &PermGroup) -> Result<StructureFlags> {
    let t = FiniteGroup::from_group(g)?;
    Ok(structure_flags(&t, &t.full()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn p(n: usize, cycles: &[&[usize]]) -> Permutation {
        let c: Vec<Vec<usize>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(n, &c).unwrap()
    }

    #[test]
    fn d8_report() {
        let g = PermGroup::new(4, vec![p(4, &[&[1, 2, 3, 4]]), p(4, &[&[1, 3]])]).unwrap();
        let r = characteristic_subgroups(&g).unwrap();
        assert_eq!(r.center.order(), 2);
        assert_eq!(r.derived.order(), 2);
        assert_eq!(r.frattini.order(), 2);
        assert_eq!(r.thompson.unwrap(), g);
        assert_eq!(r.exponent, 4);
        let f = structure_predicates(&g).unwrap();
        assert!(f.is_extraspecial && !f.is_elementary_abelian);
    }

    #[test]
    fn elementary_abelian_report() {
        let g = PermGroup::new(6, vec![p(6, &[&[1, 2, 3]]), p(6, &[&[4, 5, 6]])]).unwrap();
        let r = characteristic_subgroups(&g).unwrap();
        assert!(r.frattini.is_trivial());
        assert_eq!(r.thompson.unwrap(), g);
        let f = structure_predicates(&g).unwrap();
        assert!(f.is_elementary_abelian && !f.is_extraspecial);
    }

    #[test]
    fn cyclic_nine() {
        let g = PermGroup::new(9, vec![p(9, &[&[1, 2, 3, 4, 5, 6, 7, 8, 9]])]).unwrap();
        let f = structure_predicates(&g).unwrap();
        assert!(!f.is_extraspecial && !f.is_elementary_abelian);
    }

    #[test]
    fn frattini_of_s4_is_trivial() {
        let t = FiniteGroup::from_group(&PermGroup::symmetric(4)).unwrap();
        assert_eq!(FiniteGroup::size(&frattini(&t, &t.full()).unwrap()), 1);
    }
}
