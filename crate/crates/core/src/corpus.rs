//! Named permutation models of small groups.
//!
//! Every constructor checks the order of what it built (and the shape, for
//! extraspecial groups) before returning it.

use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;
use crate::structure::structure_predicates;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Constructor {
    /// Dihedral group of order `2n`.
    Dihedral { n: usize },
    /// Generalised quaternion group of the given order.
    Quaternion { order: usize },
    Semidihedral { order: usize },
    Cyclic { n: usize },
    ElementaryAbelian { p: usize, rank: usize },
    /// `p^{1+2n}`; exponent `p` (Heisenberg type, exponent 4 when p = 2) or,
    /// for `n = 1` and odd `p`, `p^2`.
    Extraspecial { p: usize, n: usize, exponent: usize },
    /// `C_p ≀ C_p`.
    WreathCyclic { p: usize },
    Symmetric { n: usize },
    Alternating { n: usize },
    Sl2 { p: usize },
    Gl2 { p: usize },
    Psl2 { p: usize },
    Psl3Of3,
    Mathieu11,
    /// `S_3 ≀ S_3` on 9 points.
    S3WrS3,
    /// `S_3 ≀ C_3` on 9 points.
    S3WrC3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub constructor: Constructor,
    pub expected_order: u64,
}

#[derive(Clone, Debug)]
pub struct NamedGroup {
    pub name: String,
    pub group: PermGroup,
}

fn perm(degree: usize, f: impl Fn(usize) -> usize) -> Permutation {
    Permutation::from_images((0..degree).map(|i| f(i) as u32).collect()).expect("constructor builds bijections")
}

fn cycles(degree: usize, cs: &[&[usize]]) -> Permutation {
    let c: Vec<Vec<usize>> = cs.iter().map(|c| c.to_vec()).collect();
    Permutation::from_cycles(degree, &c).expect("constructor builds valid cycles")
}

fn checked(n: usize, what: &str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::input(format!("unsupported parameter {} for {}", n, what)))
    }
}

fn pow(p: usize, k: usize) -> usize {
    p.pow(k as u32)
}

impl Constructor {
    pub fn expected_order(&self) -> u64 {
        let f = |n: usize| (1..=n as u64).product::<u64>();
        match *self {
            Constructor::Dihedral { n } => 2 * n as u64,
            Constructor::Quaternion { order } | Constructor::Semidihedral { order } => order as u64,
            Constructor::Cyclic { n } => n as u64,
            Constructor::ElementaryAbelian { p, rank } => pow(p, rank) as u64,
            Constructor::Extraspecial { p, n, .. } => pow(p, 2 * n + 1) as u64,
            Constructor::WreathCyclic { p } => pow(p, p + 1) as u64,
            Constructor::Symmetric { n } => f(n),
            Constructor::Alternating { n } => f(n) / 2,
            Constructor::Sl2 { p } => (p * (p * p - 1)) as u64,
            Constructor::Gl2 { p } => (p * (p * p - 1) * (p - 1)) as u64,
            Constructor::Psl2 { p } => (p * (p * p - 1) / if p == 2 { 1 } else { 2 }) as u64,
            Constructor::Psl3Of3 => 5616,
            Constructor::Mathieu11 => 7920,
            Constructor::S3WrS3 => 1296,
            Constructor::S3WrC3 => 648,
        }
    }

    fn generators(&self) -> Result<(usize, Vec<Permutation>)> {
        Ok(match *self {
            Constructor::Dihedral { n } => {
                checked(n, "dihedral", n >= 2)?;
                if n == 2 {
                    (4, vec![cycles(4, &[&[1, 2], &[3, 4]]), cycles(4, &[&[1, 3], &[2, 4]])])
                } else {
                    (n, vec![perm(n, |i| (i + 1) % n), perm(n, |i| (n - i) % n)])
                }
            }
            Constructor::Quaternion { order } => {
                checked(order, "quaternion", order >= 8 && order.is_power_of_two())?;
                // regular representation on a^i b^j, point i + 2m j
                let m = order / 4;
                let a = perm(order, |x| {
                    let (i, j) = (x % (2 * m), x / (2 * m));
                    let i = if j == 0 { (i + 1) % (2 * m) } else { (i + 2 * m - 1) % (2 * m) };
                    i + 2 * m * j
                });
                let b = perm(order, |x| {
                    let (i, j) = (x % (2 * m), x / (2 * m));
                    if j == 0 {
                        i + 2 * m
                    } else {
                        (i + m) % (2 * m)
                    }
                });
                (order, vec![a, b])
            }
            Constructor::Semidihedral { order } => {
                checked(order, "semidihedral", order >= 16 && order.is_power_of_two())?;
                // right cosets of <b>, with b a b = a^(N/2 - 1)
                let n = order / 2;
                let r = n / 2 - 1;
                (n, vec![perm(n, |i| (i + 1) % n), perm(n, |i| (i * r) % n)])
            }
            Constructor::Cyclic { n } => {
                checked(n, "cyclic", n >= 1)?;
                (n, vec![perm(n, |i| (i + 1) % n)])
            }
            Constructor::ElementaryAbelian { p, rank } => {
                checked(p, "elementary abelian", is_prime(p as u64) && rank >= 1)?;
                let d = p * rank;
                let gens = (0..rank)
                    .map(|k| perm(d, |i| if i / p == k { k * p + (i % p + 1) % p } else { i }))
                    .collect();
                (d, gens)
            }
            Constructor::Extraspecial { p, n, exponent } => {
                checked(p, "extraspecial", is_prime(p as u64) && n >= 1)?;
                if exponent == p || (p == 2 && exponent == 4) {
                    heisenberg(p, n)
                } else {
                    checked(exponent, "extraspecial exponent", exponent == p * p && n == 1 && p > 2)?;
                    let d = p * p;
                    (d, vec![perm(d, |i| (i + 1) % d), perm(d, |i| (i * (1 + p)) % d)])
                }
            }
            Constructor::WreathCyclic { p } => {
                checked(p, "wreath", is_prime(p as u64))?;
                let d = p * p;
                let base = perm(d, |i| if i < p { (i + 1) % p } else { i });
                let top = perm(d, |i| (i + p) % d);
                (d, vec![base, top])
            }
            Constructor::Symmetric { n } => {
                checked(n, "symmetric", n >= 1)?;
                (n, PermGroup::symmetric(n).generators().to_vec())
            }
            Constructor::Alternating { n } => {
                checked(n, "alternating", n >= 1)?;
                (n, PermGroup::alternating(n).generators().to_vec())
            }
            Constructor::Sl2 { p } | Constructor::Gl2 { p } => {
                checked(p, "linear group", is_prime(p as u64))?;
                let mut mats = vec![[[1, 1], [0, 1]], [[1, 0], [1, 1]]];
                if matches!(self, Constructor::Gl2 { .. }) {
                    mats.push([[primitive_root(p), 0], [0, 1]]);
                }
                linear_on_vectors(p, &mats)
            }
            Constructor::Psl2 { p } => {
                checked(p, "PSL2", is_prime(p as u64))?;
                // projective line 0..p-1 and infinity = p
                let inv = |z: usize| (1..p).find(|&w| z * w % p == 1).unwrap();
                let t = perm(p + 1, |z| if z == p { p } else { (z + 1) % p });
                let s = perm(p + 1, |z| match z {
                    0 => p,
                    z if z == p => 0,
                    z => (p - inv(z)) % p,
                });
                (p + 1, vec![t, s])
            }
            Constructor::Psl3Of3 => psl3_3(),
            Constructor::Mathieu11 => (
                11,
                vec![
                    cycles(11, &[&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]]),
                    cycles(11, &[&[3, 7, 11, 8], &[4, 10, 5, 6]]),
                ],
            ),
            Constructor::S3WrS3 | Constructor::S3WrC3 => {
                let mut gens = vec![cycles(9, &[&[1, 2, 3]]), cycles(9, &[&[1, 2]])];
                gens.push(cycles(9, &[&[1, 4, 7], &[2, 5, 8], &[3, 6, 9]]));
                if matches!(self, Constructor::S3WrS3) {
                    gens.push(cycles(9, &[&[1, 4], &[2, 5], &[3, 6]]));
                }
                (9, gens)
            }
        })
    }

    /// Builds the group and checks its order and shape.
    pub fn build(&self) -> Result<PermGroup> {
        let (degree, gens) = self.generators()?;
        let g = PermGroup::new(degree, gens)?;
        if g.order() != self.expected_order() {
            return Err(Error::input(format!(
                "constructor produced order {}, expected {}",
                g.order(),
                self.expected_order()
            )));
        }
        if let Constructor::Extraspecial { exponent, .. } = *self {
            let flags = structure_predicates(&g)?;
            if !flags.is_extraspecial || flags.extraspecial_exponent != Some(exponent as u64) {
                return Err(Error::input("constructed group is not extraspecial of the requested exponent"));
            }
        }
        Ok(g)
    }
}

/// `p^{1+2n}` of exponent p (exponent 4 central product of dihedral groups
/// for p = 2), acting on the right cosets of `{(a,0,0)}` under
/// `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a·b')`. A coset is `(b, c - a·b)`.
fn heisenberg(p: usize, n: usize) -> (usize, Vec<Permutation>) {
    let d = pow(p, n + 1);
    let decode = |x: usize| -> (Vec<usize>, usize) { ((0..n).map(|k| x / pow(p, k) % p).collect(), x / pow(p, n)) };
    let encode = |b: &[usize], c: usize| -> usize { b.iter().enumerate().map(|(k, v)| v * pow(p, k)).sum::<usize>() + c * pow(p, n) };
    let act = |a: Vec<usize>, bp: Vec<usize>, cp: usize| {
        perm(d, move |x| {
            let (b, c) = decode(x);
            let nb: Vec<usize> = b.iter().zip(&bp).map(|(u, v)| (u + v) % p).collect();
            let dot: usize = a.iter().zip(&nb).map(|(u, v)| u * v).sum::<usize>() % p;
            encode(&nb, (c + cp + p - dot) % p)
        })
    };
    let unit = |k: usize| (0..n).map(|i| usize::from(i == k)).collect::<Vec<_>>();
    let mut gens = Vec::new();
    for k in 0..n {
        gens.push(act(unit(k), vec![0; n], 0));
        gens.push(act(vec![0; n], unit(k), 0));
    }
    (d, gens)
}

fn primitive_root(p: usize) -> usize {
    if p == 2 {
        return 1;
    }
    (2..p)
        .find(|&g| (1..p - 1).all(|k| pow_mod(g, k, p) != 1))
        .expect("a prime has a primitive root")
}

fn pow_mod(b: usize, e: usize, m: usize) -> usize {
    (0..e).fold(1, |acc, _| acc * b % m)
}

/// Right action `v -> vM` of 2x2 matrices on the nonzero vectors of `F_p^2`.
fn linear_on_vectors(p: usize, mats: &[[[usize; 2]; 2]]) -> (usize, Vec<Permutation>) {
    let d = p * p - 1;
    let gens = mats
        .iter()
        .map(|m| {
            perm(d, |x| {
                let v = [(x + 1) % p, (x + 1) / p];
                let w = [(v[0] * m[0][0] + v[1] * m[1][0]) % p, (v[0] * m[0][1] + v[1] * m[1][1]) % p];
                w[0] + w[1] * p - 1
            })
        })
        .collect();
    (d, gens)
}

/// `PSL(3,3) = SL(3,3)` on the 13 points of the projective plane over `F_3`.
fn psl3_3() -> (usize, Vec<Permutation>) {
    let mut points: Vec<[usize; 3]> = Vec::new();
    for x in 0..27 {
        let v = [x % 3, x / 3 % 3, x / 9];
        if let Some(&lead) = v.iter().find(|&&c| c != 0) {
            if lead == 1 {
                points.push(v);
            }
        }
    }
    let normalise = |v: [usize; 3]| -> [usize; 3] {
        let lead = *v.iter().find(|&&c| c != 0).unwrap();
        let s = if lead == 1 { 1 } else { 2 };
        [v[0] * s % 3, v[1] * s % 3, v[2] * s % 3]
    };
    let transvection = |i: usize, j: usize| {
        perm(13, |x| {
            let mut v = points[x];
            v[j] = (v[j] + v[i]) % 3;
            let w = normalise(v);
            points.iter().position(|q| *q == w).unwrap()
        })
    };
    (13, vec![transvection(0, 1), transvection(1, 0), transvection(1, 2), transvection(2, 1)])
}

fn num(s: &str) -> Option<usize> {
    s.parse().ok()
}

/// Parses a corpus name such as `dihedral4`, `extraspecial-3-27` or `psl3-3`.
pub fn parse_name(name: &str) -> Result<Constructor> {
    let bad = || Error::input(format!("unknown corpus group {:?}", name));
    let prefixed = |prefix: &str| name.strip_prefix(prefix).and_then(num);
    if let Some(n) = prefixed("dihedral") {
        return Ok(Constructor::Dihedral { n });
    }
    if let Some(order) = prefixed("quaternion") {
        return Ok(Constructor::Quaternion { order });
    }
    if let Some(order) = prefixed("semidihedral") {
        return Ok(Constructor::Semidihedral { order });
    }
    if let Some(n) = prefixed("cyclic") {
        return Ok(Constructor::Cyclic { n });
    }
    if let Some(n) = prefixed("symmetric") {
        return Ok(Constructor::Symmetric { n });
    }
    if let Some(n) = prefixed("alternating") {
        return Ok(Constructor::Alternating { n });
    }
    if let Some(p) = prefixed("cpxcp-") {
        return Ok(Constructor::ElementaryAbelian { p, rank: 2 });
    }
    if let Some(p) = prefixed("wreath-") {
        return Ok(Constructor::WreathCyclic { p });
    }
    if let Some(p) = prefixed("sl2-") {
        return Ok(Constructor::Sl2 { p });
    }
    if let Some(p) = prefixed("gl2-") {
        return Ok(Constructor::Gl2 { p });
    }
    if let Some(p) = prefixed("psl2-") {
        return Ok(Constructor::Psl2 { p });
    }
    match name {
        "psl3-3" => return Ok(Constructor::Psl3Of3),
        "m11" => return Ok(Constructor::Mathieu11),
        "s3-wr-s3" => return Ok(Constructor::S3WrS3),
        "s3-wr-c3" => return Ok(Constructor::S3WrC3),
        _ => {}
    }
    let parts: Vec<&str> = name.split('-').collect();
    match parts.as_slice() {
        ["elementary", p, r] => Ok(Constructor::ElementaryAbelian {
            p: num(p).ok_or_else(bad)?,
            rank: num(r).ok_or_else(bad)?,
        }),
        ["extraspecial", p, order, rest @ ..] => {
            let p = num(p).ok_or_else(bad)?;
            let order = num(order).ok_or_else(bad)?;
            let n = (1..8).find(|&n| p >= 2 && pow(p, 2 * n + 1) == order).ok_or_else(bad)?;
            let exponent = match rest {
                [] if p == 2 => 4,
                [] => p,
                [e] => num(e.strip_prefix("exp").ok_or_else(bad)?).ok_or_else(bad)?,
                _ => return Err(bad()),
            };
            Ok(Constructor::Extraspecial { p, n, exponent })
        }
        _ => Err(bad()),
    }
}

pub fn entry(name: &str) -> Result<CorpusEntry> {
    let constructor = parse_name(name)?;
    Ok(CorpusEntry {
        name: name.to_string(),
        expected_order: constructor.expected_order(),
        constructor,
    })
}

pub fn build(name: &str) -> Result<NamedGroup> {
    Ok(NamedGroup {
        name: name.to_string(),
        group: parse_name(name)?.build()?,
    })
}

/// The bundled corpus, listed by `corpus list`.
pub const BUNDLED: &[&str] = &[
    "cyclic2",
    "cyclic4",
    "cyclic9",
    "cpxcp-2",
    "cpxcp-3",
    "cpxcp-5",
    "elementary-2-3",
    "dihedral3",
    "dihedral4",
    "dihedral8",
    "quaternion8",
    "quaternion16",
    "semidihedral16",
    "extraspecial-2-32",
    "extraspecial-3-27",
    "extraspecial-3-27-exp9",
    "extraspecial-5-125",
    "extraspecial-3-243",
    "wreath-2",
    "wreath-3",
    "symmetric3",
    "symmetric4",
    "symmetric5",
    "symmetric6",
    "alternating4",
    "alternating5",
    "alternating6",
    "alternating7",
    "sl2-3",
    "gl2-3",
    "sl2-5",
    "psl2-7",
    "psl2-11",
    "psl3-3",
    "m11",
    "s3-wr-c3",
    "s3-wr-s3",
];

pub fn bundled() -> Vec<CorpusEntry> {
    BUNDLED.iter().map(|n| entry(n).expect("bundled names parse")).collect()
}

/// Ambient groups and primes used for corpus-wide fusion checks.
pub const FUSION_PAIRS: &[(&str, u64)] = &[
    ("symmetric3", 2),
    ("symmetric3", 3),
    ("symmetric4", 2),
    ("symmetric4", 3),
    ("alternating4", 2),
    ("alternating4", 3),
    ("symmetric5", 2),
    ("alternating5", 2),
    ("alternating5", 3),
    ("alternating6", 2),
    ("alternating6", 3),
    ("symmetric6", 2),
    ("symmetric6", 3),
    ("alternating7", 2),
    ("alternating7", 3),
    ("sl2-3", 2),
    ("sl2-3", 3),
    ("gl2-3", 2),
    ("gl2-3", 3),
    ("sl2-5", 2),
    ("sl2-5", 5),
    ("psl2-7", 2),
    ("psl2-7", 7),
    ("psl2-11", 2),
    ("psl2-11", 3),
    ("psl3-3", 2),
    ("psl3-3", 3),
    ("m11", 2),
    ("m11", 3),
    ("s3-wr-c3", 3),
    ("s3-wr-s3", 2),
    ("s3-wr-s3", 3),
    ("dihedral4", 2),
    ("quaternion8", 2),
    ("extraspecial-3-27", 3),
    ("wreath-3", 3),
];
