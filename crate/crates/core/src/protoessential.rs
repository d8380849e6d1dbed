//! The five-stage proto-essential filter.
//!
//! For a p-group `S`, every subgroup class (under `S`- or `Aut(S)`-conjugacy)
//! goes through the centric, rank, Frattini, radical and lifting tests in that
//! order. A candidate that fails any stage cannot be essential in a saturated
//! fusion system on `S`; survivors are proto-essential.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, prime_power};
use crate::automorphism::{lifting_order, perm_of_map};
use crate::bounds;
use crate::cache::AutCache;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::lattice::{all_subgroups, subgroup_classes, ConjugacyAction};
use crate::structure::structure_flags;
use crate::table::{ElemSet, FiniteGroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConjugacyMode {
    Inner,
    Automorphism,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankTestMode {
    Conservative,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Centric,
    Rank,
    Frattini,
    Radical,
    Lifting,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Centric, Stage::Rank, Stage::Frattini, Stage::Radical, Stage::Lifting];
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestOutcome {
    pub stage: Stage,
    pub passed: bool,
    pub detail: String,
    /// Passed without a decision because a bound was hit.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
}

impl TestOutcome {
    fn new(stage: Stage, passed: bool, detail: String) -> Self {
        TestOutcome {
            stage,
            passed,
            detail,
            vacuous: false,
        }
    }

    fn vacuous(stage: Stage, detail: String) -> Self {
        TestOutcome {
            stage,
            passed: true,
            detail,
            vacuous: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub mode: ConjugacyMode,
    pub rank_test: RankTestMode,
    /// Run every stage on every class instead of stopping at the first failure.
    pub diagnostic: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            mode: ConjugacyMode::Automorphism,
            rank_test: RankTestMode::Conservative,
            diagnostic: false,
        }
    }
}

/// Classes passing every stage up to and including each one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub total: usize,
    pub centric: usize,
    pub rank: usize,
    pub frattini: usize,
    pub radical: usize,
    pub lifting: usize,
}

impl StageCounts {
    pub fn as_array(&self) -> [usize; 6] {
        [self.total, self.centric, self.rank, self.frattini, self.radical, self.lifting]
    }
}

#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub representative: ElemSet,
    /// Indices into [`Scan::subgroups`].
    pub members: Vec<usize>,
    pub outcomes: Vec<TestOutcome>,
    pub survived: bool,
}

pub struct Scan {
    pub table: Arc<FiniteGroup>,
    pub prime: u64,
    pub config: ScanConfig,
    pub subgroups: Vec<ElemSet>,
    pub classes: Vec<ClassRecord>,
    pub stage_counts: StageCounts,
}

impl Scan {
    pub fn survivors(&self) -> impl Iterator<Item = &ClassRecord> {
        self.classes.iter().filter(|c| c.survived)
    }
}

/// Out_S(E) = N_S(E) / E C_S(E).
pub fn out_s(t: &FiniteGroup, e: &ElemSet) -> FiniteGroup {
    let full = t.full();
    let n = t.normalizer(&full, e);
    let ec = t.join(e, &t.centralizer(&full, e));
    t.quotient(&n, &ec).0
}

pub fn centric_test(t: &FiniteGroup, e: &ElemSet) -> TestOutcome {
    let c = t.centralizer(&t.full(), e);
    TestOutcome::new(
        Stage::Centric,
        c.is_subset(e),
        format!("|C_S(E)| = {}", FiniteGroup::size(&c)),
    )
}

/// Sylow shapes admitted by the strict rank test.
fn strict_shape(q: &FiniteGroup, p: u64) -> Option<&'static str> {
    let full = q.full();
    if q.is_cyclic(&full) {
        return Some("cyclic");
    }
    if q.is_elementary_abelian(&full) {
        return Some("elementary abelian");
    }
    let (_, m) = prime_power(q.order() as u64)?;
    let z = FiniteGroup::size(&q.center(&full)) as u64;
    let flags = structure_flags(q, &full);
    if m % 3 == 0 && z == p.pow(m / 3) && (flags.is_special || p == 3) {
        return Some(if flags.is_special { "unitary type" } else { "Ree type" });
    }
    if p == 2 {
        let involutions = (1..q.order() as u32).filter(|&x| q.elem_order(x) == 2).count();
        if q.order() >= 8 && involutions == 1 {
            return Some("generalised quaternion");
        }
        if m % 2 == 0 && z == 2u64.pow(m / 2) && flags.is_special {
            return Some("Suzuki type");
        }
    }
    None
}

pub fn rank_test(t: &FiniteGroup, e: &ElemSet, p: u64, mode: RankTestMode) -> TestOutcome {
    let q = out_s(t, e);
    if q.order() == 1 {
        return TestOutcome::new(Stage::Rank, false, "Out_S(E) trivial".into());
    }
    let size = format!("|Out_S(E)| = {}", q.order());
    match mode {
        RankTestMode::Conservative => TestOutcome::new(Stage::Rank, true, size),
        RankTestMode::Strict => match strict_shape(&q, p) {
            Some(shape) => TestOutcome::new(Stage::Rank, true, format!("{}, {}", size, shape)),
            None => TestOutcome::new(Stage::Rank, false, format!("{}, no admissible shape", size)),
        },
    }
}

pub fn frattini_test(t: &FiniteGroup, e: &ElemSet, p: u64) -> TestOutcome {
    let full = t.full();
    let n = t.normalizer(&full, e);
    let phi = t.frattini_p(e, p);
    let comm = t.commutator(&n, e);
    if comm.is_subset(&phi) {
        return TestOutcome::new(Stage::Frattini, false, "[N_S(E), E] <= Phi(E)".into());
    }
    let egens = t.generators(e);
    let c = t.filter(&n, |g| egens.iter().all(|&x| phi.contains(t.comm(x, g) as usize)));
    TestOutcome::new(
        Stage::Frattini,
        c.is_subset(e),
        format!("|C_N(E/Phi(E))| = {}", FiniteGroup::size(&c)),
    )
}

/// Aut(E) for a subgroup `e` of `t`, with the table of `e` and its embedding.
fn aut_of(
    t: &FiniteGroup,
    e: &ElemSet,
    cache: &AutCache,
) -> Result<(Arc<crate::automorphism::AutomorphismGroup>, Vec<u32>)> {
    let (sub, embed) = t.sub_table(e);
    Ok((cache.automorphism_group(Arc::new(sub))?, embed))
}

pub fn radical_test(t: &FiniteGroup, e: &ElemSet, p: u64, cache: &AutCache) -> TestOutcome {
    if t.is_elementary_abelian(e) {
        return TestOutcome::new(Stage::Radical, true, "E elementary abelian, O_p(Out(E)) = 1".into());
    }
    match radical_inner(t, e, p, cache) {
        Ok((passed, out, meet)) => TestOutcome::new(
            Stage::Radical,
            passed,
            format!("|Out(E)| = {}, |Out_S(E) ∩ O_p(Out(E))| = {}", out, meet),
        ),
        Err(err @ Error::Resource { .. }) => TestOutcome::vacuous(Stage::Radical, err.to_string()),
        Err(err) => panic!("radical test on a valid subgroup failed: {}", err),
    }
}

/// The preimage of `O_p(Out(E))` in `Aut(E)` is `O_p(Aut(E))`, so
/// `Out_S(E) ∩ O_p(Out(E)) = (Aut_S(E) ∩ O_p(Aut(E))) / Inn(E)`.
fn radical_inner(t: &FiniteGroup, e: &ElemSet, p: u64, cache: &AutCache) -> Result<(bool, u64, u64)> {
    let (a, embed) = aut_of(t, e, cache)?;
    let mut back = vec![u32::MAX; t.order()];
    for (i, &x) in embed.iter().enumerate() {
        back[x as usize] = i as u32;
    }
    let n = t.normalizer(&t.full(), e);
    let gens = t
        .generators(&n)
        .into_iter()
        .map(|g| perm_of_map(&embed.iter().map(|&x| back[t.conj(x, g) as usize]).collect::<Vec<_>>()))
        .collect();
    let aut_s = PermGroup::new(embed.len() - 1, gens)?;
    let op = a.action().p_core(p)?;
    let meet = aut_s.intersection(&op)?;
    let inn = a.inner().order();
    Ok((meet.order() == inn, a.order() / inn, meet.order() / inn))
}

fn alt_order(n: u64) -> Option<u64> {
    let f: Option<u128> = (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k));
    f.and_then(|f| u64::try_from(f / 2).ok())
}

pub fn lifting_test(t: &FiniteGroup, e: &ElemSet, p: u64, cache: &AutCache) -> TestOutcome {
    let q = out_s(t, e);
    let qn = q.order() as u64;
    if !(q.is_elementary_abelian(&q.full()) && qn > p) {
        return TestOutcome::new(Stage::Lifting, true, "Out_S(E) not elementary abelian of order > p".into());
    }
    if p == 2 {
        return TestOutcome::new(Stage::Lifting, true, "p = 2, test not applicable".into());
    }
    match lifting_inner(t, e, p, qn, cache) {
        Ok(outcome) => outcome,
        Err(err @ Error::Resource { .. }) => TestOutcome::vacuous(Stage::Lifting, err.to_string()),
        Err(err) => panic!("lifting test on a valid subgroup failed: {}", err),
    }
}

fn lifting_inner(t: &FiniteGroup, e: &ElemSet, p: u64, qn: u64, cache: &AutCache) -> Result<TestOutcome> {
    if p >= 5 {
        // a section Alt(2p) of Aut(E) is ruled out only when |Alt(2p)| does not divide |Aut(E)|
        let (a, _) = aut_of(t, e, cache)?;
        if alt_order(2 * p).is_some_and(|k| a.order() % k == 0) {
            return Ok(TestOutcome::vacuous(Stage::Lifting, "Alt(2p) section not excluded".into()));
        }
    }
    let a0 = lifting_order(qn);
    let n = t.normalizer(&t.full(), e);
    let (a, _) = aut_of(t, &n, cache)?;
    let found = a.action().has_element_of_order(a0)?;
    Ok(TestOutcome::new(
        Stage::Lifting,
        found,
        format!(
            "Aut(N_S(E)) {} an element of order {} (gcd factor {})",
            if found { "has" } else { "lacks" },
            a0,
            gcd(2, qn - 1)
        ),
    ))
}

fn run_stage(stage: Stage, t: &FiniteGroup, e: &ElemSet, p: u64, config: &ScanConfig, cache: &AutCache) -> TestOutcome {
    match stage {
        Stage::Centric => centric_test(t, e),
        Stage::Rank => rank_test(t, e, p, config.rank_test),
        Stage::Frattini => frattini_test(t, e, p),
        Stage::Radical => radical_test(t, e, p, cache),
        Stage::Lifting => lifting_test(t, e, p, cache),
    }
}

/// Runs the stages in order, stopping at the first failure unless diagnostic.
pub fn evaluate(t: &FiniteGroup, e: &ElemSet, p: u64, config: &ScanConfig, cache: &AutCache) -> Vec<TestOutcome> {
    let mut out = Vec::new();
    for stage in Stage::ALL {
        let o = run_stage(stage, t, e, p, config, cache);
        let failed = !o.passed;
        out.push(o);
        if failed && !config.diagnostic {
            break;
        }
    }
    out
}

pub fn proto_essential_scan(s: &PermGroup, p: u64, config: ScanConfig, cache: &AutCache) -> Result<Scan> {
    if !is_prime(p) {
        return Err(Error::input(format!("{} is not prime", p)));
    }
    if !s.is_p_group(p) {
        return Err(Error::input(format!("group of order {} is not a {}-group", s.order(), p)));
    }
    let bound = bounds::subgroup_bound(s.order());
    if s.order() > bound {
        return Err(Error::resource("subgroup enumeration", s.order(), bound));
    }
    scan_table(Arc::new(FiniteGroup::from_group(s)?), p, config, cache)
}

pub fn scan_table(t: Arc<FiniteGroup>, p: u64, config: ScanConfig, cache: &AutCache) -> Result<Scan> {
    let full = t.full();
    let subgroups = all_subgroups(&t, &full)?;
    let action = match config.mode {
        ConjugacyMode::Inner => ConjugacyAction::Inner,
        ConjugacyMode::Automorphism => {
            let a = cache.automorphism_group(t.clone())?;
            ConjugacyAction::Automorphisms(a.generator_maps())
        }
    };
    let classes = subgroup_classes(&t, &full, &subgroups, &action)?;
    let records: Vec<ClassRecord> = classes
        .into_par_iter()
        .map(|c| {
            let outcomes = evaluate(&t, &c.representative, p, &config, cache);
            let survived = outcomes.len() == Stage::ALL.len() && outcomes.iter().all(|o| o.passed);
            ClassRecord {
                representative: c.representative,
                members: c.members,
                outcomes,
                survived,
            }
        })
        .collect();
    let passing = |k: usize| {
        records
            .iter()
            .filter(|r| r.outcomes.len() > k && r.outcomes[..=k].iter().all(|o| o.passed))
            .count()
    };
    let stage_counts = StageCounts {
        total: records.len(),
        centric: passing(0),
        rank: passing(1),
        frattini: passing(2),
        radical: passing(3),
        lifting: passing(4),
    };
    Ok(Scan {
        table: t,
        prime: p,
        config,
        subgroups,
        classes: records,
        stage_counts,
    })
}
