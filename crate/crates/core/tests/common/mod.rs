//! Oracles and fixtures shared by the integration tests. Nothing here calls
//! the elimination code: cokernels and exactness are decided by enumerating
//! elements.

#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use towercoh::generators::{build, named, Built, GeneratorSpec};
use towercoh::{Modulus, ModuleInvariants, ModuleMap, Pair, ResidueMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn z(p: u64, s: u32) -> Modulus {
    Modulus::new(p, s).unwrap()
}

/// Entries are zero with probability `1 - density`; nonzero entries have a
/// random valuation so that every exponent shows up.
pub fn random_sparse(rng: &mut ChaCha8Rng, md: Modulus, rows: usize, cols: usize, density: f64) -> ResidueMatrix {
    let mut triplets = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.random_bool(density) {
                let e = rng.random_range(0..md.s());
                let unit = loop {
                    let u = rng.random_range(1..md.order());
                    if u % md.p() != 0 {
                        break u;
                    }
                };
                triplets.push((r, c, md.mul(unit, md.int_power(e))));
            }
        }
    }
    ResidueMatrix::from_triplets(rows, cols, md, triplets)
}

/// Invariant factors of `(Z/q)^rows / <columns>`, from the counts
/// `|Q[p^k]|` for `k = 1..=s`: `log_p |Q[p^k]| = Σ min(e_i, k)`.
pub fn brute_cokernel(md: Modulus, dense: &[Vec<u64>], cols: usize) -> ModuleInvariants {
    let q = md.order() as usize;
    let rows = dense.len();
    let size = q.pow(rows as u32);
    // Vectors are encoded base q, coordinate 0 least significant.
    let add = |a: usize, b: usize| {
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..rows {
            out += (a % q + b % q) % q * place;
            a /= q;
            b /= q;
            place *= q;
        }
        out
    };
    let scale = |a: usize, k: usize| {
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..rows {
            out += a % q * k % q * place;
            a /= q;
            place *= q;
        }
        out
    };
    let mut image = vec![false; size];
    image[0] = true;
    let mut members = vec![0usize];
    for c in 0..cols {
        let col = (0..rows).rev().fold(0usize, |acc, r| acc * q + dense[r][c] as usize);
        let known = members.len();
        for i in 0..known {
            let mut v = members[i];
            loop {
                v = add(v, col);
                if image[v] {
                    break;
                }
                image[v] = true;
                members.push(v);
            }
        }
    }
    let log = |n: usize| {
        let mut n = n as u64;
        let mut l = 0u32;
        while n > 1 {
            assert_eq!(n % md.p(), 0);
            n /= md.p();
            l += 1;
        }
        l
    };
    let im = log(members.len());
    let mut torsion_logs = vec![0u32];
    for k in 1..=md.s() {
        let pk = md.int_power(k) as usize;
        let count = (0..size).filter(|&y| image[scale(y, pk)]).count();
        torsion_logs.push(log(count) - im);
    }
    let mut exponents = Vec::new();
    for k in 1..=md.s() as usize {
        let at_least_k = torsion_logs[k] - torsion_logs[k - 1];
        let at_least_next = if k < md.s() as usize {
            torsion_logs[k + 1] - torsion_logs[k]
        } else {
            0
        };
        exponents.extend(std::iter::repeat_n(k as u32, (at_least_k - at_least_next) as usize));
    }
    ModuleInvariants::new(md, exponents)
}

/// Elements of `⊕ Z/p^{e_i}` in mixed radix.
pub struct Enumerated {
    radices: Vec<u64>,
    pub size: usize,
}

impl Enumerated {
    pub fn new(m: &ModuleInvariants) -> Option<Self> {
        let radices: Vec<u64> = m.exponents().iter().map(|&e| m.modulus().int_power(e)).collect();
        let size = radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r))?;
        Some(Enumerated {
            radices,
            size: usize::try_from(size).ok()?,
        })
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        v.iter()
            .zip(&self.radices)
            .rev()
            .fold(0usize, |acc, (&x, &r)| acc * r as usize + (x % r) as usize)
    }

    pub fn decode(&self, mut k: usize) -> Vec<u64> {
        self.radices
            .iter()
            .map(|&r| {
                let x = (k % r as usize) as u64;
                k /= r as usize;
                x
            })
            .collect()
    }
}

/// `f(x)` from coordinates, reducing row `i` modulo the `i`-th target order.
pub fn apply(f: &ModuleMap, x: &[u64]) -> Vec<u64> {
    let md = f.matrix().modulus();
    let mut y = vec![0u64; f.target().len()];
    for (i, j, v) in f.matrix().entries() {
        y[i] = md.add(y[i], md.mul(v, x[j]));
    }
    for (yi, &t) in y.iter_mut().zip(f.target().exponents()) {
        *yi %= md.int_power(t);
    }
    y
}

/// Whether `im g = ker f` at the middle module, by listing both subgroups;
/// `None` when the middle module has more than `limit` elements.
pub fn brute_exact(g: &ModuleMap, f: &ModuleMap, limit: usize) -> Option<bool> {
    let mid = Enumerated::new(g.target())?;
    if mid.size > limit {
        return None;
    }
    let mut image = vec![false; mid.size];
    image[0] = true;
    let mut members = vec![0usize];
    let source_gens = g.source().len();
    for j in 0..source_gens {
        let mut e = vec![0u64; source_gens];
        e[j] = 1;
        let gen = apply(g, &e);
        let mut next = Vec::new();
        for &m in &members {
            let mut v = mid.decode(m);
            loop {
                for (x, &d) in v.iter_mut().zip(&gen) {
                    *x += d;
                }
                let k = mid.encode(&v);
                v = mid.decode(k);
                if image[k] {
                    break;
                }
                image[k] = true;
                next.push(k);
            }
        }
        members.extend(next);
    }
    let kernel: Vec<bool> = (0..mid.size)
        .map(|k| apply(f, &mid.decode(k)).iter().all(|&y| y == 0))
        .collect();
    Some(image == kernel)
}

/// Complexes and pairs from the generator family, each with several sizes.
pub fn pair_suite() -> Vec<(String, Built)> {
    let mut names: Vec<GeneratorSpec> = [
        "point",
        "cycle3",
        "cycle4",
        "cycle6",
        "interval1",
        "interval2",
        "interval4",
        "disk3",
        "disk5",
        "cylinder3x1",
        "cylinder4x2",
        "interval-pair",
        "disk-pair",
        "circle-point",
        "cylinder-pair",
    ]
    .iter()
    .map(|n| named(n, 2, 0).unwrap())
    .collect();
    names.extend([
        GeneratorSpec::IntervalPair { k: 3 },
        GeneratorSpec::DiskPair { k: 3 },
        GeneratorSpec::CirclePoint { k: 5 },
        GeneratorSpec::CylinderPair { k: 4, h: 2 },
    ]);
    names
        .into_iter()
        .map(|spec| (format!("{spec:?}"), build(&spec).unwrap()))
        .collect()
}

pub fn pair_of(b: &Built) -> Pair {
    b.object.as_pair().expect("complex or pair")
}

pub const TOWER_NAMES: [&str; 6] = [
    "solenoid",
    "trivial-point",
    "trivial-circle",
    "trivial-interval-pair",
    "voltage",
    "cylinder-pair-tower",
];

pub fn tower(name: &str, p: u64, r_max: usize) -> Built {
    build(&named(name, p, r_max).unwrap()).unwrap()
}
