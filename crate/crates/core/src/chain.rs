//! Deterministic Schreier–Sims.
//!
//! A chain stores, for each base point `b_i`, the orbit of `b_i` under the
//! pointwise stabiliser `G_(b_0..b_{i-1})` together with explicit transversal
//! elements `u_x` (`b_i^{u_x} = x`) and their inverses.

use crate::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    /// Orbit points in discovery order.
    orbit: Vec<usize>,
    /// `transversal[x] = Some((u_x, u_x^-1))` for orbit points.
    transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let id = Permutation::identity(degree);
        transversal[base] = Some((id.clone(), id));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            transversal,
        }
    }

    fn rebuild_orbit(&mut self) {
        let degree = self.transversal.len();
        let id = Permutation::identity(degree);
        self.transversal = vec![None; degree];
        self.transversal[self.base] = Some((id.clone(), id));
        self.orbit = vec![self.base];
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            let ux = self.transversal[x].as_ref().unwrap().0.clone();
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y].is_none() {
                    let uy = ux.compose(s);
                    let inv = uy.inverse();
                    self.transversal[y] = Some((uy, inv));
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }
}

/// Base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Builds a chain for `<gens>`. Points in `base_prefix` are used first,
    /// in order, so stabilisers of an initial segment of them can be read
    /// off the chain.
    pub fn new(degree: usize, gens: &[Permutation], base_prefix: &[usize]) -> Self {
        let mut chain = StabChain {
            degree,
            levels: base_prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        for g in gens {
            if g.is_identity() {
                continue;
            }
            chain.ensure_moved(g);
            let fixes = chain.fixing_depth(g);
            for level in &mut chain.levels[..=fixes] {
                level.gens.push(g.clone());
            }
        }
        for level in &mut chain.levels {
            level.rebuild_orbit();
        }
        chain.complete();
        chain
    }

    /// Number of leading base points fixed by `g`; assumes `g` moves some base point.
    fn fixing_depth(&self, g: &Permutation) -> usize {
        self.levels
            .iter()
            .position(|l| g.apply(l.base) != l.base)
            .expect("element must move a base point")
    }

    /// Extends the base so that `g` moves some base point.
    fn ensure_moved(&mut self, g: &Permutation) {
        if self.levels.iter().all(|l| g.apply(l.base) == l.base) {
            let pt = g.first_moved().expect("non-identity");
            self.levels.push(Level::new(pt, self.degree));
        }
    }

    /// Sifts `g` from level `start`. Returns the residue and the level where
    /// sifting stopped (`levels.len()` if it went through every level).
    fn strip_from(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let x = h.apply(level.base);
            match &level.transversal[x] {
                Some((_, inv)) => h = h.compose(inv),
                None => return (h, i),
            }
        }
        (h, self.levels.len())
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let li = i as usize;
            let orbit = self.levels[li].orbit.clone();
            let gens = self.levels[li].gens.clone();
            for &x in &orbit {
                let ux = self.levels[li].transversal[x].as_ref().unwrap().0.clone();
                for s in &gens {
                    let y = s.apply(x);
                    let uy_inv = &self.levels[li].transversal[y].as_ref().unwrap().1;
                    let schreier = ux.compose(s).compose(uy_inv);
                    if schreier.is_identity() {
                        continue;
                    }
                    let (residue, depth) = self.strip_from(&schreier, li + 1);
                    if residue.is_identity() {
                        continue;
                    }
                    if depth == self.levels.len() {
                        let pt = residue.first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(pt, self.degree));
                    }
                    let top = self.fixing_depth(&residue).min(self.levels.len() - 1);
                    for l in li + 1..=top {
                        self.levels[l].gens.push(residue.clone());
                        self.levels[l].rebuild_orbit();
                    }
                    i = top as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.levels
            .iter()
            .map(|l| l.orbit.len() as u64)
            .fold(1u64, |a, b| a.checked_mul(b).expect("group order overflows u64"))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && {
            let (residue, _) = self.strip_from(g, 0);
            residue.is_identity()
        }
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Strong generators fixing the first `depth` base points; they generate
    /// that pointwise stabiliser.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        match self.levels.get(depth) {
            Some(level) => level.gens.clone(),
            None => Vec::new(),
        }
    }

    /// Calls `f` on every element exactly once. Stops early when `f` returns `false`.
    pub fn for_each_element(&self, mut f: impl FnMut(&Permutation) -> bool) {
        let id = Permutation::identity(self.degree);
        let k = self.levels.len();
        if k == 0 {
            f(&id);
            return;
        }
        // element = u^{(k-1)} ... u^{(0)}: choose the deepest level first.
        fn rec(
            chain: &StabChain,
            level: usize,
            acc: &Permutation,
            f: &mut dyn FnMut(&Permutation) -> bool,
        ) -> bool {
            let l = &chain.levels[level];
            for &x in &l.orbit {
                let u = &l.transversal[x].as_ref().unwrap().0;
                let next = acc.compose(u);
                let keep_going = if level == 0 {
                    f(&next)
                } else {
                    rec(chain, level - 1, &next, f)
                };
                if !keep_going {
                    return false;
                }
            }
            true
        }
        rec(self, k - 1, &id, &mut f);
    }
}
