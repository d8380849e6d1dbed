//! Brute-force oracles shared by the integration tests. Everything here works
//! from raw element lists and plain `Vec<u32>` tables, not from the library's
//! tables, lattices or automorphism search.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use protofusion::{PermGroup, Permutation};

pub type Set = Vec<u32>;

/// A group given by its multiplication table; elements sorted by image vector.
pub struct Brute {
    pub elems: Vec<Permutation>,
    pub mul: Vec<u32>,
    pub inv: Vec<u32>,
    pub id: u32,
    index: HashMap<Vec<u32>, u32>,
}

impl Brute {
    /// Closes the generators by breadth-first multiplication.
    pub fn new(g: &PermGroup) -> Self {
        let degree = g.degree();
        let id = Permutation::identity(degree);
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
        seen.insert(id.images().to_vec());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in g.generators() {
                let y = x.compose(s);
                if seen.insert(y.images().to_vec()) {
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Permutation> =
            seen.into_iter().map(|v| Permutation::from_images(v).unwrap()).collect();
        Self::from_elements(elems)
    }

    pub fn from_elements(elems: Vec<Permutation>) -> Self {
        let n = elems.len();
        let index: HashMap<Vec<u32>, u32> =
            elems.iter().enumerate().map(|(i, x)| (x.images().to_vec(), i as u32)).collect();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[elems[i].compose(&elems[j]).images()];
            }
        }
        let id = (0..n).find(|&i| elems[i].is_identity()).unwrap() as u32;
        let inv = (0..n as u32)
            .map(|i| (0..n as u32).find(|&j| mul[i as usize * n + j as usize] == id).unwrap())
            .collect();
        Brute { elems, mul, inv, id, index }
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn m(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order() + b as usize]
    }

    pub fn index_of(&self, x: &Permutation) -> u32 {
        self.index[x.images()]
    }

    pub fn conj(&self, a: u32, g: u32) -> u32 {
        self.m(self.m(self.inv[g as usize], a), g)
    }

    pub fn comm(&self, a: u32, b: u32) -> u32 {
        self.m(self.m(self.inv[a as usize], self.inv[b as usize]), self.m(a, b))
    }

    pub fn elem_order(&self, a: u32) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.id {
            x = self.m(x, a);
            k += 1;
        }
        k
    }

    pub fn closure(&self, gens: &[u32]) -> Set {
        let mut seen = vec![false; self.order()];
        seen[self.id as usize] = true;
        let mut out = vec![self.id];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let y = self.m(out[i], g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn all(&self) -> Set {
        (0..self.order() as u32).collect()
    }

    /// Every subgroup, by repeatedly joining cyclic subgroups until nothing new appears.
    pub fn subgroups(&self) -> Vec<Set> {
        let cyclic: BTreeSet<Set> = (0..self.order() as u32).map(|x| self.closure(&[x])).collect();
        let mut found: BTreeSet<Set> = cyclic.clone();
        let mut frontier: Vec<Set> = cyclic.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| h.binary_search(x).is_ok()) {
                        continue;
                    }
                    let mut gens = h.clone();
                    gens.extend(c);
                    let j = self.closure(&gens);
                    if found.insert(j.clone()) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<Set> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        out
    }

    pub fn contains(h: &Set, x: u32) -> bool {
        h.binary_search(&x).is_ok()
    }

    pub fn subset(a: &Set, b: &Set) -> bool {
        a.iter().all(|&x| Self::contains(b, x))
    }

    pub fn conj_set(&self, h: &Set, g: u32) -> Set {
        let mut out: Set = h.iter().map(|&x| self.conj(x, g)).collect();
        out.sort_unstable();
        out
    }

    pub fn normalizer(&self, within: &Set, h: &Set) -> Set {
        within.iter().copied().filter(|&g| self.conj_set(h, g) == *h).collect()
    }

    pub fn centralizer(&self, within: &Set, h: &Set) -> Set {
        within
            .iter()
            .copied()
            .filter(|&g| h.iter().all(|&x| self.m(x, g) == self.m(g, x)))
            .collect()
    }

    pub fn commutator(&self, a: &Set, b: &Set) -> Set {
        let gens: Vec<u32> = a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.comm(x, y)).collect();
        self.closure(&gens)
    }

    pub fn join(&self, a: &Set, b: &Set) -> Set {
        let mut gens = a.clone();
        gens.extend(b);
        self.closure(&gens)
    }

    pub fn is_normal(&self, h: &Set, within: &Set) -> bool {
        within.iter().all(|&g| self.conj_set(h, g) == *h)
    }

    /// Intersection of the maximal subgroups of `h`, read off a subgroup list.
    pub fn frattini(&self, h: &Set, subgroups: &[Set]) -> Set {
        let proper: Vec<&Set> = subgroups.iter().filter(|k| k.len() < h.len() && Self::subset(k, h)).collect();
        let maximal: Vec<&Set> = proper
            .iter()
            .copied()
            .filter(|k| !proper.iter().any(|l| l.len() > k.len() && Self::subset(k, l)))
            .collect();
        if maximal.is_empty() {
            return h.clone();
        }
        h.iter().copied().filter(|&x| maximal.iter().all(|k| Self::contains(k, x))).collect()
    }

    /// The table of `h` on its own, with `h` listed in increasing order.
    pub fn restrict(&self, h: &Set) -> Brute {
        Brute::from_elements(h.iter().map(|&x| self.elems[x as usize].clone()).collect())
    }

    /// A small generating sequence chosen greedily.
    pub fn generating_sequence(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut cur = self.closure(&[]);
        while cur.len() < self.order() {
            let x = (0..self.order() as u32)
                .filter(|x| !Self::contains(&cur, *x))
                .max_by_key(|&x| (self.closure(&[&gens[..], &[x]].concat()).len(), std::cmp::Reverse(x)))
                .unwrap();
            gens.push(x);
            cur = self.closure(&gens);
        }
        gens
    }

    /// Every automorphism, as a map on element indices, by trying every tuple
    /// of generator images and extending along words.
    pub fn automorphisms(&self) -> Vec<Vec<u32>> {
        let gens = self.generating_sequence();
        let n = self.order();
        let mut out = Vec::new();
        let mut images = vec![0u32; gens.len()];
        loop {
            if let Some(map) = self.extend(&gens, &images) {
                out.push(map);
            }
            let mut k = 0;
            loop {
                if k == gens.len() {
                    out.sort();
                    return out;
                }
                images[k] += 1;
                if (images[k] as usize) < n {
                    break;
                }
                images[k] = 0;
                k += 1;
            }
        }
    }

    fn extend(&self, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
        let n = self.order();
        let mut map = vec![u32::MAX; n];
        map[self.id as usize] = self.id;
        let mut queue = VecDeque::from([self.id]);
        while let Some(x) = queue.pop_front() {
            for (g, &gi) in gens.iter().zip(images) {
                let y = self.m(x, *g);
                let my = self.m(map[x as usize], gi);
                if map[y as usize] == u32::MAX {
                    map[y as usize] = my;
                    queue.push_back(y);
                } else if map[y as usize] != my {
                    return None;
                }
            }
        }
        let distinct: BTreeSet<u32> = map.iter().copied().collect();
        if distinct.len() != n {
            return None;
        }
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                if map[self.m(a, b) as usize] != self.m(map[a as usize], map[b as usize]) {
                    return None;
                }
            }
        }
        Some(map)
    }
}

/// Composition of element maps, `x -> (x a) b`.
pub fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| b[x as usize]).collect()
}

/// A group of element maps closed under composition.
pub fn map_closure(gens: &[Vec<u32>], n: usize) -> BTreeSet<Vec<u32>> {
    let id: Vec<u32> = (0..n as u32).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

pub fn is_p_power(mut n: usize, p: usize) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Preimage in `aut` of `O_p(aut / inn)`: the maps whose normal closure is a
/// p-group modulo `inn`.
pub fn op_mod(aut: &[Vec<u32>], inn: &BTreeSet<Vec<u32>>, p: usize, n: usize) -> BTreeSet<Vec<u32>> {
    let inverse = |a: &Vec<u32>| {
        let mut r = vec![0u32; a.len()];
        for (i, &x) in a.iter().enumerate() {
            r[x as usize] = i as u32;
        }
        r
    };
    let mut out = BTreeSet::new();
    for a in aut {
        let mut gens: Vec<Vec<u32>> = aut.iter().map(|g| compose(&compose(&inverse(g), a), g)).collect();
        gens.extend(inn.iter().cloned());
        let closure = map_closure(&gens, n);
        if is_p_power(closure.len() / inn.len(), p) {
            out.insert(a.clone());
        }
    }
    out
}

/// Proto-essential subgroups of a p-group, straight from the five conditions.
/// Returns the surviving subgroups as element lists of `b`.
pub fn proto_essential_oracle(b: &Brute, p: usize) -> Vec<Set> {
    let subgroups = b.subgroups();
    let s = b.all();
    let mut out = Vec::new();
    for e in &subgroups {
        let c = b.centralizer(&s, e);
        if !Brute::subset(&c, e) {
            continue;
        }
        let n = b.normalizer(&s, e);
        if n.len() == e.len() {
            continue;
        }
        let phi = b.frattini(e, &subgroups);
        if Brute::subset(&b.commutator(&n, e), &phi) {
            continue;
        }
        let c_quot: Set = n
            .iter()
            .copied()
            .filter(|&g| e.iter().all(|&x| Brute::contains(&phi, b.comm(x, g))))
            .collect();
        if !Brute::subset(&c_quot, e) {
            continue;
        }
        // radical: Aut_S(E) meets the preimage of O_p(Out(E)) only in Inn(E)
        let eb = b.restrict(e);
        let local = |x: u32| eb.index_of(&b.elems[x as usize]);
        let conj_map = |g: u32| -> Vec<u32> {
            (0..eb.order() as u32).map(|i| local(b.conj(e[i as usize], g))).collect()
        };
        let aut = eb.automorphisms();
        let inn: BTreeSet<Vec<u32>> = e.iter().map(|&g| conj_map(g)).collect();
        let aut_s: BTreeSet<Vec<u32>> = n.iter().map(|&g| conj_map(g)).collect();
        let op = op_mod(&aut, &inn, p, eb.order());
        if aut_s.intersection(&op).count() != inn.len() {
            continue;
        }
        // lifting, for odd p
        let q = n.len() / e.len();
        let elementary = {
            let quotient_exp_p = n.iter().all(|&g| {
                let mut x = g;
                for _ in 1..p {
                    x = b.m(x, g);
                }
                Brute::contains(e, x)
            });
            let quotient_abelian = n.iter().all(|&g| n.iter().all(|&h| Brute::contains(e, b.comm(g, h))));
            quotient_exp_p && quotient_abelian
        };
        if p != 2 && elementary && q > p {
            let a0 = if (q - 1).is_multiple_of(2) { (q - 1) / 2 } else { q - 1 };
            let nb = b.restrict(&n);
            let aut_n = nb.automorphisms();
            let id: Vec<u32> = (0..nb.order() as u32).collect();
            let has = aut_n.iter().any(|a| {
                let mut x = a.clone();
                let mut k = 1;
                while x != id {
                    x = compose(&x, a);
                    k += 1;
                }
                k == a0
            });
            if !has {
                continue;
            }
        }
        out.push(e.clone());
    }
    out
}

/// Orbits of `sets` under element maps, each orbit sorted.
pub fn orbits(sets: &[Set], maps: &[Vec<u32>]) -> BTreeSet<BTreeSet<Set>> {
    let mut out = BTreeSet::new();
    let mut done: BTreeSet<Set> = BTreeSet::new();
    for s in sets {
        if done.contains(s) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        for m in maps {
            let mut img: Set = s.iter().map(|&x| m[x as usize]).collect();
            img.sort_unstable();
            orbit.insert(img);
        }
        done.extend(orbit.iter().cloned());
        out.insert(orbit);
    }
    out
}

/// Image vectors of a set, as a comparable key independent of any indexing.
pub fn images_of(b: &Brute, h: &Set) -> BTreeSet<Vec<u32>> {
    h.iter().map(|&x| b.elems[x as usize].images().to_vec()).collect()
}

/// Whether `h` has a strongly p-embedded subgroup, read off the graph on
/// Sylow p-subgroups joined when they meet nontrivially.
pub fn spe_by_graph(b: &Brute, p: usize) -> bool {
    let n = b.order();
    if !n.is_multiple_of(p) {
        return false;
    }
    let mut sylow_order = 1;
    while n.is_multiple_of(sylow_order * p) {
        sylow_order *= p;
    }
    let sylows: Vec<Set> = b.subgroups().into_iter().filter(|h| h.len() == sylow_order).collect();
    let mut comp: Vec<usize> = (0..sylows.len()).collect();
    fn find(c: &mut Vec<usize>, i: usize) -> usize {
        if c[i] != i {
            let r = find(c, c[i]);
            c[i] = r;
        }
        c[i]
    }
    for i in 0..sylows.len() {
        for j in i + 1..sylows.len() {
            if sylows[i].iter().filter(|x| Brute::contains(&sylows[j], **x)).count() > 1 {
                let (a, c) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = c;
            }
        }
    }
    let roots: BTreeSet<usize> = (0..sylows.len()).map(|i| find(&mut comp, i)).collect();
    roots.len() > 1
}
