//! Realised fusion systems `F_S(G)`.
//!
//! Every subgroup of `S` is enumerated once. A single pass over the ambient
//! group records, for each `g`, the conjugation map on `S ∩ S^{g^-1}` and
//! hence every morphism `c_g : A -> S` for `A` in that domain. Morphisms are
//! identified by their values on the generators of `A`; the witness kept is
//! the smallest `g` in the lexicographic order of image vectors.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, p_part};
use crate::automorphism::CosetQuotient;
use crate::bounds;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::all_subgroups;
use crate::perm::Permutation;
use crate::spe::has_strongly_p_embedded;
use crate::table::{ElemSet, FiniteGroup};

const UNSET: u32 = u32::MAX;

/// A conjugation map `c_g : A -> S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionMorphism {
    pub domain: usize,
    pub image: usize,
    /// Images of the domain's generators, as indices into the table of `S`.
    pub generator_images: Vec<u32>,
    pub witness: Permutation,
}

/// `Aut_S(A) ≤ Aut_F(A) ≤ Aut(A)`, acting on the non-identity elements of `A`.
pub struct Automizer {
    pub table: Arc<FiniteGroup>,
    /// Index in `A` -> index in `S`.
    pub embed: Vec<u32>,
    pub aut_f: PermGroup,
    pub aut_s: PermGroup,
    pub inner: PermGroup,
}

impl Automizer {
    /// Element map on `S` indices (`UNSET` off `A`) of an action permutation.
    pub fn s_map(&self, perm: &Permutation, s_order: usize) -> Vec<u32> {
        let mut m = vec![UNSET; s_order];
        m[self.embed[0] as usize] = self.embed[0];
        for i in 1..self.embed.len() {
            m[self.embed[i] as usize] = self.embed[perm.apply(i - 1) + 1];
        }
        m
    }

    pub fn out_f(&self) -> Result<CosetQuotient> {
        CosetQuotient::new(&self.aut_f, &self.inner)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationFlags {
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub fully_automized: bool,
    pub receptive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureFlags {
    pub weakly_closed: bool,
    pub strongly_closed: bool,
}

/// One F-class of essential subgroups.
#[derive(Clone, Debug)]
pub struct EssentialClass {
    /// Key-minimal fully normalised member.
    pub representative: usize,
    pub members: Vec<usize>,
    pub out_f_order: u64,
    /// Strongly p-embedded subgroup of `Out_F(A)`.
    pub witness: PermGroup,
    pub fully_normalized: bool,
    pub centric: bool,
    pub radical: bool,
}

pub struct RealizedFusionSystem {
    ambient: PermGroup,
    sylow: PermGroup,
    prime: u64,
    s: Arc<FiniteGroup>,
    subgroups: Vec<ElemSet>,
    gens: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    normalizer_orders: Vec<usize>,
    centralizer_orders: Vec<usize>,
    homs: Vec<Vec<FusionMorphism>>,
    automizers: Vec<OnceLock<Arc<Automizer>>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl RealizedFusionSystem {
    /// `F_S(G)` with `S` from [`PermGroup::sylow_subgroup`].
    pub fn new(ambient: &PermGroup, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{} is not prime", p)));
        }
        if ambient.order() > bounds::FUSION_AMBIENT {
            return Err(Error::resource("fusion ambient", ambient.order(), bounds::FUSION_AMBIENT));
        }
        let s = ambient.sylow_subgroup(p)?;
        Self::with_sylow(ambient, &s, p)
    }

    pub fn with_sylow(ambient: &PermGroup, sylow: &PermGroup, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::input(format!("{} is not prime", p)));
        }
        if ambient.order() > bounds::FUSION_AMBIENT {
            return Err(Error::resource("fusion ambient", ambient.order(), bounds::FUSION_AMBIENT));
        }
        if sylow.degree() != ambient.degree()
            || !sylow.is_subgroup_of(ambient)
            || sylow.order() != p_part(ambient.order(), p)
        {
            return Err(Error::input(format!("not a Sylow {}-subgroup of the ambient group", p)));
        }
        let bound = bounds::subgroup_bound(sylow.order());
        if sylow.order() > bound {
            return Err(Error::resource("fusion subgroup enumeration", sylow.order(), bound));
        }
        let s = Arc::new(FiniteGroup::from_group(sylow)?);
        let full = s.full();
        let subgroups = all_subgroups(&s, &full)?;
        let gens: Vec<Vec<u32>> = subgroups.iter().map(|a| s.generators(a)).collect();
        let index: HashMap<Vec<u32>, usize> =
            subgroups.iter().enumerate().map(|(i, a)| (FiniteGroup::key(a), i)).collect();
        let normalizer_orders = subgroups.iter().map(|a| FiniteGroup::size(&s.normalizer(&full, a))).collect();
        let centralizer_orders = subgroups.iter().map(|a| FiniteGroup::size(&s.centralizer(&full, a))).collect();

        let mut elements = Vec::with_capacity(ambient.order() as usize);
        ambient.for_each_element(|g| {
            elements.push(g.clone());
            true
        })?;
        elements.sort();
        let homs = morphisms(&s, &subgroups, &gens, &index, &elements);

        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut classes = Vec::new();
        for a in 0..subgroups.len() {
            if class_of[a] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = homs[a].iter().map(|m| m.image).collect();
            members.sort_unstable();
            members.dedup();
            for &b in &members {
                class_of[b] = classes.len();
            }
            classes.push(members);
        }
        Ok(RealizedFusionSystem {
            ambient: ambient.clone(),
            sylow: sylow.clone(),
            prime: p,
            automizers: (0..subgroups.len()).map(|_| OnceLock::new()).collect(),
            s,
            subgroups,
            gens,
            index,
            normalizer_orders,
            centralizer_orders,
            homs,
            class_of,
            classes,
        })
    }

    pub fn ambient(&self) -> &PermGroup {
        &self.ambient
    }

    pub fn sylow(&self) -> &PermGroup {
        &self.sylow
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn sylow_table(&self) -> &Arc<FiniteGroup> {
        &self.s
    }

    /// All subgroups of `S` in canonical order.
    pub fn subgroups(&self) -> &[ElemSet] {
        &self.subgroups
    }

    pub fn subgroup(&self, id: usize) -> PermGroup {
        self.s.to_perm_group(&self.subgroups[id])
    }

    pub fn subgroup_order(&self, id: usize) -> usize {
        FiniteGroup::size(&self.subgroups[id])
    }

    pub fn id_of_set(&self, set: &ElemSet) -> Option<usize> {
        self.index.get(&FiniteGroup::key(set)).copied()
    }

    /// Id of a subgroup of `S`; input error otherwise.
    pub fn id_of(&self, a: &PermGroup) -> Result<usize> {
        if a.degree() != self.sylow.degree() || !a.is_subgroup_of(&self.sylow) {
            return Err(Error::input("subgroup is not contained in the Sylow subgroup"));
        }
        let set = self.s.set_of(a)?;
        Ok(self.index[&FiniteGroup::key(&set)])
    }

    pub fn normalizer_order(&self, id: usize) -> usize {
        self.normalizer_orders[id]
    }

    pub fn centralizer_order(&self, id: usize) -> usize {
        self.centralizer_orders[id]
    }

    /// Every morphism out of `A`, sorted by image then generator images.
    pub fn morphisms_from(&self, a: usize) -> &[FusionMorphism] {
        &self.homs[a]
    }

    /// `Hom_F(A, B)`.
    pub fn hom_ids(&self, a: usize, b: usize) -> Vec<&FusionMorphism> {
        let target = &self.subgroups[b];
        self.homs[a]
            .iter()
            .filter(|m| self.subgroups[m.image].is_subset(target))
            .collect()
    }

    pub fn hom_f(&self, a: &PermGroup, b: &PermGroup) -> Result<Vec<&FusionMorphism>> {
        Ok(self.hom_ids(self.id_of(a)?, self.id_of(b)?))
    }

    /// The morphism as an element map on `S` (`UNSET` off the domain).
    pub fn element_map(&self, m: &FusionMorphism) -> Vec<u32> {
        let mut map = vec![UNSET; self.s.order()];
        for x in FiniteGroup::members(&self.subgroups[m.domain]) {
            let y = self.s.element(x).conjugate_by(&m.witness);
            map[x as usize] = self.s.index_of(&y).expect("image lies in S");
        }
        map
    }

    /// The F-class of `A`, as subgroup ids.
    pub fn class_ids(&self, a: usize) -> &[usize] {
        &self.classes[self.class_of[a]]
    }

    /// All F-classes, in order of their first member.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn f_class(&self, a: &PermGroup) -> Result<Vec<PermGroup>> {
        Ok(self.class_ids(self.id_of(a)?).iter().map(|&b| self.subgroup(b)).collect())
    }

    pub fn automizer(&self, a: usize) -> Arc<Automizer> {
        self.automizers[a].get_or_init(|| Arc::new(self.build_automizer(a))).clone()
    }

    fn build_automizer(&self, a: usize) -> Automizer {
        let s = &self.s;
        let (sub, embed) = s.sub_table(&self.subgroups[a]);
        let mut back = vec![UNSET; s.order()];
        for (i, &x) in embed.iter().enumerate() {
            back[x as usize] = i as u32;
        }
        let degree = embed.len() - 1;
        let perm_of_s_map = |m: &dyn Fn(u32) -> u32| {
            let images = embed[1..].iter().map(|&x| back[m(x) as usize] - 1).collect();
            Permutation::from_images_unchecked(images)
        };
        let greedy = |perms: Vec<Permutation>| {
            let mut g = PermGroup::trivial(degree);
            for x in perms {
                if !g.contains(&x) {
                    g = g.join(&[x]);
                }
            }
            g
        };
        let aut_f = greedy(
            self.homs[a]
                .iter()
                .filter(|m| m.image == a)
                .map(|m| {
                    let map = self.element_map(m);
                    perm_of_s_map(&|x| map[x as usize])
                })
                .collect(),
        );
        let n = s.normalizer(&s.full(), &self.subgroups[a]);
        let aut_s = greedy(s.generators(&n).into_iter().map(|g| perm_of_s_map(&|x| s.conj(x, g))).collect());
        let inner = greedy(self.gens[a].iter().map(|&g| perm_of_s_map(&|x| s.conj(x, g))).collect());
        Automizer {
            table: Arc::new(sub),
            embed,
            aut_f,
            aut_s,
            inner,
        }
    }

    /// `Out_F(A) = Aut_F(A)/Inn(A)`.
    pub fn out_f(&self, a: usize) -> Result<CosetQuotient> {
        self.automizer(a).out_f()
    }

    pub fn is_fully_normalized(&self, a: usize) -> bool {
        let n = self.normalizer_orders[a];
        self.class_ids(a).iter().all(|&b| self.normalizer_orders[b] <= n)
    }

    pub fn is_fully_centralized(&self, a: usize) -> bool {
        let c = self.centralizer_orders[a];
        self.class_ids(a).iter().all(|&b| self.centralizer_orders[b] <= c)
    }

    /// `Aut_S(A)` is a Sylow p-subgroup of `Aut_F(A)`.
    pub fn is_fully_automized(&self, a: usize) -> bool {
        let au = self.automizer(a);
        au.aut_s.order() == p_part(au.aut_f.order(), self.prime)
    }

    /// Every isomorphism `φ : B -> A` in F extends to `N_φ`.
    pub fn is_receptive(&self, a: usize) -> bool {
        let s = &self.s;
        let full = s.full();
        let ga = &self.gens[a];
        let n_a = s.normalizer(&full, &self.subgroups[a]);
        let aut_s: HashSet<Vec<u32>> = FiniteGroup::members(&n_a)
            .map(|g| ga.iter().map(|&y| s.conj(y, g)).collect())
            .collect();
        for &b in self.class_ids(a) {
            let n_b = s.normalizer(&full, &self.subgroups[b]);
            for phi in self.homs[b].iter().filter(|m| m.image == a) {
                let map = self.element_map(phi);
                let mut inv = vec![UNSET; s.order()];
                for x in FiniteGroup::members(&self.subgroups[b]) {
                    inv[map[x as usize] as usize] = x;
                }
                // N_φ = { g ∈ N_S(B) : φ^{-1} c_g φ ∈ Aut_S(A) }
                let n_phi = s.filter(&n_b, |g| {
                    let images: Vec<u32> = ga.iter().map(|&y| map[s.conj(inv[y as usize], g) as usize]).collect();
                    aut_s.contains(&images)
                });
                let id = self.id_of_set(&n_phi).expect("N_φ is a subgroup");
                let gb = &self.gens[b];
                let extends = self.homs[id].iter().any(|psi| {
                    gb.iter().all(|&x| {
                        let y = s.element(x).conjugate_by(&psi.witness);
                        s.index_of(&y) == Some(map[x as usize])
                    })
                });
                if !extends {
                    return false;
                }
            }
        }
        true
    }

    pub fn saturation_flags(&self, a: usize) -> SaturationFlags {
        SaturationFlags {
            fully_normalized: self.is_fully_normalized(a),
            fully_centralized: self.is_fully_centralized(a),
            fully_automized: self.is_fully_automized(a),
            receptive: self.is_receptive(a),
        }
    }

    /// Every F-class has a fully automised, receptive member.
    pub fn is_saturated(&self) -> bool {
        self.classes
            .par_iter()
            .all(|cls| cls.iter().any(|&a| self.is_fully_automized(a) && self.is_receptive(a)))
    }

    /// `C_S(B) ≤ B` for every `B` in the F-class.
    pub fn is_centric(&self, a: usize) -> bool {
        let full = self.s.full();
        self.class_ids(a).iter().all(|&b| {
            let sb = &self.subgroups[b];
            self.s.centralizer(&full, sb).is_subset(sb)
        })
    }

    /// `O_p(Out_F(A)) = 1`.
    pub fn is_radical(&self, a: usize) -> Result<bool> {
        Ok(self.out_f(a)?.group.p_core(self.prime)?.is_trivial())
    }

    /// A strongly p-embedded subgroup of `Out_F(A)`, if any.
    pub fn spe_witness(&self, a: usize) -> Result<Option<PermGroup>> {
        has_strongly_p_embedded(&self.out_f(a)?.group, self.prime)
    }

    pub fn is_essential(&self, a: usize) -> Result<bool> {
        Ok(self.is_fully_normalized(a) && self.is_centric(a) && self.spe_witness(a)?.is_some())
    }

    /// One entry per F-class of essential subgroups, in canonical order.
    pub fn essential_classes(&self) -> Result<Vec<EssentialClass>> {
        let found: Vec<Option<EssentialClass>> = self
            .classes
            .par_iter()
            .map(|cls| -> Result<Option<EssentialClass>> {
                let rep = *cls.iter().find(|&&a| self.is_fully_normalized(a)).expect("class has a maximum");
                if !self.is_centric(rep) {
                    return Ok(None);
                }
                let out = self.out_f(rep)?;
                let Some(witness) = has_strongly_p_embedded(&out.group, self.prime)? else {
                    return Ok(None);
                };
                Ok(Some(EssentialClass {
                    representative: rep,
                    members: cls.clone(),
                    out_f_order: out.group.order(),
                    witness,
                    fully_normalized: true,
                    centric: true,
                    radical: out.group.p_core(self.prime)?.is_trivial(),
                }))
            })
            .collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().collect())
    }

    /// Every essential subgroup (all fully normalised members of essential classes).
    pub fn essential_subgroups(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for c in self.essential_classes()? {
            out.extend(c.members.iter().copied().filter(|&a| self.is_fully_normalized(a)));
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn closure_flags(&self, a: usize) -> ClosureFlags {
        let sa = &self.subgroups[a];
        let weakly_closed = self.homs[a].iter().all(|m| m.image == a);
        let strongly_closed = (0..self.subgroups.len())
            .filter(|&b| self.subgroups[b].is_subset(sa))
            .all(|b| self.homs[b].iter().all(|m| self.subgroups[m.image].is_subset(sa)));
        ClosureFlags {
            weakly_closed,
            strongly_closed,
        }
    }

    /// `F_{N_S(A)}(N_G(A))`; `A` must be fully normalised.
    pub fn normalizer_system(&self, a: usize) -> Result<RealizedFusionSystem> {
        if !self.is_fully_normalized(a) {
            return Err(Error::input(
                "subgroup is not fully normalized; conjugate it to a fully normalized member of its class first",
            ));
        }
        let ap = self.subgroup(a);
        let n_g = self.ambient.normalizer(&ap)?;
        let n_s = self.s.to_perm_group(&self.s.normalizer(&self.s.full(), &self.subgroups[a]));
        RealizedFusionSystem::with_sylow(&n_g, &n_s, self.prime)
    }

    /// `foc(F)` and `hyp(F)` as subsets of the table of `S`.
    pub fn focal_and_hyperfocal_sets(&self) -> Result<(ElemSet, ElemSet)> {
        let s = &self.s;
        let mut foc = Vec::new();
        let mut hyp = Vec::new();
        for a in 0..self.subgroups.len() {
            let au = self.automizer(a);
            let residual = au.aut_f.p_residual(self.prime)?;
            let push = |out: &mut Vec<u32>, group: &PermGroup| {
                for h in group.generators() {
                    let m = au.s_map(h, s.order());
                    for x in FiniteGroup::members(&self.subgroups[a]) {
                        out.push(s.mul(s.inv(x), m[x as usize]));
                    }
                }
            };
            push(&mut foc, &au.aut_f);
            push(&mut hyp, &residual);
        }
        foc.sort_unstable();
        foc.dedup();
        hyp.sort_unstable();
        hyp.dedup();
        Ok((s.closure(&foc), s.closure(&hyp)))
    }

    pub fn focal_and_hyperfocal(&self) -> Result<(PermGroup, PermGroup)> {
        let (f, h) = self.focal_and_hyperfocal_sets()?;
        Ok((self.s.to_perm_group(&f), self.s.to_perm_group(&h)))
    }

    /// Closes `Aut_F(S)` and `Aut_F(E)` for every essential `E` under
    /// composition and restriction, and compares every Hom set with F's.
    pub fn alperin_generation_check(&self) -> Result<bool> {
        let s = &self.s;
        let top = self.subgroups.len() - 1;
        let mut sources = vec![top];
        sources.extend(self.essential_subgroups()?);
        let mut generators: Vec<(usize, Vec<u32>)> = Vec::new();
        for r in sources {
            let au = self.automizer(r);
            for h in au.aut_f.generators() {
                generators.push((r, au.s_map(h, s.order())));
            }
        }
        let ok = (0..self.subgroups.len()).into_par_iter().all(|p| {
            let mut reached: HashSet<Vec<u32>> = HashSet::new();
            reached.insert(self.gens[p].clone());
            let mut work = vec![self.gens[p].clone()];
            while let Some(images) = work.pop() {
                for (r, alpha) in &generators {
                    if images.iter().all(|&y| self.subgroups[*r].contains(y as usize)) {
                        let next: Vec<u32> = images.iter().map(|&y| alpha[y as usize]).collect();
                        if reached.insert(next.clone()) {
                            work.push(next);
                        }
                    }
                }
            }
            let expected: HashSet<Vec<u32>> = self.homs[p].iter().map(|m| m.generator_images.clone()).collect();
            reached == expected
        });
        Ok(ok)
    }
}

/// One pass over the ambient group collecting every morphism.
fn morphisms(
    s: &FiniteGroup,
    subgroups: &[ElemSet],
    gens: &[Vec<u32>],
    index: &HashMap<Vec<u32>, usize>,
    elements: &[Permutation],
) -> Vec<Vec<FusionMorphism>> {
    type Found = HashMap<(usize, Vec<u32>), (usize, usize)>;
    let found: Found = elements
        .par_iter()
        .enumerate()
        .fold(Found::new, |mut acc, (gi, g)| {
            let conj: Vec<u32> = s
                .elements()
                .iter()
                .map(|x| s.index_of(&x.conjugate_by(g)).unwrap_or(UNSET))
                .collect();
            let domain = s.set_from((0..s.order() as u32).filter(|&x| conj[x as usize] != UNSET));
            for (a, set) in subgroups.iter().enumerate() {
                if !set.is_subset(&domain) {
                    continue;
                }
                let images: Vec<u32> = gens[a].iter().map(|&x| conj[x as usize]).collect();
                match acc.entry((a, images)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        if gi < e.get().1 {
                            e.get_mut().1 = gi;
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        let mut key: Vec<u32> = FiniteGroup::members(set).map(|x| conj[x as usize]).collect();
                        key.sort_unstable();
                        e.insert((index[&key], gi));
                    }
                }
            }
            acc
        })
        .reduce(Found::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).and_modify(|w| w.1 = w.1.min(v.1)).or_insert(v);
            }
            a
        });
    let mut homs: Vec<Vec<FusionMorphism>> = vec![Vec::new(); subgroups.len()];
    for ((a, images), (image, gi)) in found {
        homs[a].push(FusionMorphism {
            domain: a,
            image,
            generator_images: images,
            witness: elements[gi].clone(),
        });
    }
    for h in &mut homs {
        h.sort_by(|x, y| (x.image, &x.generator_images).cmp(&(y.image, &y.generator_images)));
    }
    homs
}
