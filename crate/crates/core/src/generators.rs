//! Built-in complexes, pairs and towers with closed-form answers.
//!
//! Vertex numbering is fixed per generator:
//! - `cycle(k)`: `0..k`, edges `{i, i+1 mod k}`.
//! - `interval(k)`: `0..=k`, edges `{i, i+1}`.
//! - `disk(k)`: the cone on `cycle(k)` with apex `k`.
//! - `cylinder(k, h)`: vertex `(i, j)`, `i < k`, `j <= h`, is `j*k + i`;
//!   triangles `{(i,j), (i+1,j), (i,j+1)}` and `{(i+1,j), (i+1,j+1), (i,j+1)}`.
//! - Towers of cyclic covers use the same numbering at circumference
//!   `base_k * p^r`; `(i, j)` projects to `(i mod base_k * p^(r-1), j)`.
//! - Trivial towers number copy `c` of vertex `v` as `c * (max + 1) + v`.
//! - Voltage towers number `(v, g)` as `g * |V| + v`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ModuleInvariants;
use crate::residue::{is_prime, Modulus};
use crate::simplicial::{Pair, SimplicialComplex, SimplicialMap, Vertex};
use crate::tower::{Classification, GrowthProfile, LimitInference, Ratio, Tower};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    /// A single vertex `0`.
    Point,
    Cycle { k: u32 },
    Interval { k: u32 },
    Disk { k: u32 },
    Cylinder { k: u32, h: u32 },
    /// `(I, ∂I)`.
    IntervalPair { k: u32 },
    /// `(D, ∂D)`.
    DiskPair { k: u32 },
    /// `(S¹, pt)`.
    CirclePoint { k: u32 },
    /// The cylinder relative to both boundary circles.
    CylinderPair { k: u32, h: u32 },
    /// Cycles of length `base_k * p^r` wrapping onto each other.
    SolenoidTower { p: u64, r_max: usize, base_k: u32 },
    /// `p^r` disjoint copies of a base complex or pair.
    TrivialTower { base: Box<GeneratorSpec>, p: u64, r_max: usize },
    /// Derived graphs of a `Z/p^r`-voltage graph.
    VoltageTower {
        graph: BaseGraph,
        voltages: Vec<u64>,
        p: u64,
        r_max: usize,
    },
    /// Cyclic covers of `cylinder-pair`.
    CylinderPairTower { p: u64, r_max: usize, base_k: u32, h: u32 },
}

/// Base graph of a voltage tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum BaseGraph {
    /// Two triangles `0-1-2` and `0-3-4` sharing vertex `0`. One voltage per
    /// loop, carried by the closing edge `2 -> 0` resp. `4 -> 0`.
    FigureEight,
    /// Directed edges `u -> v`, one voltage each.
    Explicit { vertices: u32, edges: Vec<[u32; 2]> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "value", rename_all = "kebab-case")]
pub enum Generated {
    Complex(SimplicialComplex),
    Pair(Pair),
    Tower(Tower),
}

impl Generated {
    /// Pairs and complexes as a pair; `None` for towers.
    pub fn as_pair(&self) -> Option<Pair> {
        match self {
            Generated::Complex(c) => Some(Pair::absolute(c.clone())),
            Generated::Pair(p) => Some(p.clone()),
            Generated::Tower(_) => None,
        }
    }

    pub fn as_tower(&self) -> Option<&Tower> {
        match self {
            Generated::Tower(t) => Some(t),
            _ => None,
        }
    }
}

/// How the pullbacks act on `H^n` along a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transition {
    Isomorphisms,
    /// Multiplication by `p` on a free module of constant rank.
    TimesP,
    /// Injective with strictly growing rank.
    Growing,
    Unknown,
}

/// Closed-form answers for a generated object. All generators have
/// torsion-free integral cohomology, so `H^n(Y_r, Z_r; Z/p^s)` is free of
/// rank `betti[r][n]` for every `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Oracle {
    pub betti: Vec<Vec<usize>>,
    /// Per degree; empty for complexes and pairs.
    pub transitions: Vec<Transition>,
}

impl Oracle {
    fn single(betti: Vec<usize>) -> Self {
        Oracle {
            betti: vec![betti],
            transitions: Vec::new(),
        }
    }

    pub fn betti(&self, r: usize, n: usize) -> usize {
        self.betti[r].get(n).copied().unwrap_or(0)
    }

    pub fn invariants(&self, r: usize, n: usize, md: Modulus) -> ModuleInvariants {
        ModuleInvariants::free(md, self.betti(r, n))
    }

    fn transition(&self, n: usize) -> Transition {
        self.transitions.get(n).copied().unwrap_or(if self.transitions.is_empty() {
            Transition::Unknown
        } else {
            Transition::Isomorphisms
        })
    }

    fn r_max(&self) -> usize {
        self.betti.len() - 1
    }

    pub fn classification(&self, n: usize, md: Modulus) -> Option<Classification> {
        let r_max = self.r_max();
        let s = md.s() as usize;
        match self.transition(n) {
            Transition::Isomorphisms => Some(Classification::Stabilizes {
                from: 0,
                invariants: self.invariants(0, n, md),
            }),
            Transition::TimesP if s <= r_max => Some(Classification::Vanishes { window: s }),
            Transition::TimesP => Some(Classification::Inconclusive { horizon: r_max }),
            Transition::Growing => {
                let log_orders: Vec<u64> = (0..=r_max).map(|r| (self.betti(r, n) * s) as u64).collect();
                let ratios = (0..r_max)
                    .map(|r| (self.betti(r, n) > 0).then(|| Ratio::new(self.betti(r + 1, n) as u64, self.betti(r, n) as u64)))
                    .collect();
                Some(Classification::Growing { log_orders, ratios })
            }
            Transition::Unknown => None,
        }
    }

    pub fn limit(&self, n: usize, p: u64, s_max: u32) -> Option<LimitInference> {
        match self.transition(n) {
            Transition::Isomorphisms => Some(LimitInference::Module {
                p,
                free_rank: self.betti(0, n),
                torsion: Vec::new(),
            }),
            Transition::TimesP if s_max as usize <= self.r_max() => Some(LimitInference::Module {
                p,
                free_rank: 0,
                torsion: Vec::new(),
            }),
            Transition::Growing => {
                let profiles = (1..=s_max)
                    .map(|s| {
                        let md = Modulus::new(p, s).expect("valid modulus");
                        match self.classification(n, md) {
                            Some(Classification::Growing { log_orders, ratios }) => GrowthProfile { s, log_orders, ratios },
                            _ => unreachable!("growing transition"),
                        }
                    })
                    .collect();
                Some(LimitInference::Growing { profiles })
            }
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Built {
    pub spec: GeneratorSpec,
    pub object: Generated,
    pub oracle: Oracle,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidGenerator(msg.into())
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn sheets(p: u64, r: usize) -> Result<u64> {
    u32::try_from(r)
        .ok()
        .and_then(|r| p.checked_pow(r))
        .filter(|&n| n <= u32::MAX as u64)
        .ok_or_else(|| invalid(format!("{p}^{r} sheets is too many")))
}

pub fn cycle(k: u32) -> Result<SimplicialComplex> {
    if k < 3 {
        return Err(invalid(format!("cycle length {k} < 3")));
    }
    SimplicialComplex::from_maximal((0..k).map(|i| vec![i, (i + 1) % k]))
}

pub fn interval(k: u32) -> Result<SimplicialComplex> {
    if k < 1 {
        return Err(invalid("interval needs at least one edge"));
    }
    SimplicialComplex::from_maximal((0..k).map(|i| vec![i, i + 1]))
}

pub fn disk(k: u32) -> Result<SimplicialComplex> {
    cycle(k)?.cone(k)
}

pub fn cylinder(k: u32, h: u32) -> Result<SimplicialComplex> {
    if k < 3 || h < 1 {
        return Err(invalid(format!("cylinder({k}, {h}) needs k >= 3, h >= 1")));
    }
    let id = |i: u32, j: u32| j * k + i % k;
    let mut tris = Vec::new();
    for j in 0..h {
        for i in 0..k {
            tris.push(vec![id(i, j), id(i + 1, j), id(i, j + 1)]);
            tris.push(vec![id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    SimplicialComplex::from_maximal(tris)
}

fn cylinder_boundary(k: u32, h: u32) -> Vec<Vec<Vertex>> {
    (0..k)
        .flat_map(|i| [vec![i, (i + 1) % k], vec![h * k + i, h * k + (i + 1) % k]])
        .collect()
}

pub fn build(spec: &GeneratorSpec) -> Result<Built> {
    let (object, oracle) = match spec {
        GeneratorSpec::Point => (
            Generated::Complex(SimplicialComplex::from_maximal([vec![0]])?),
            Oracle::single(vec![1]),
        ),
        GeneratorSpec::Cycle { k } => (Generated::Complex(cycle(*k)?), Oracle::single(vec![1, 1])),
        GeneratorSpec::Interval { k } => (Generated::Complex(interval(*k)?), Oracle::single(vec![1])),
        GeneratorSpec::Disk { k } => (Generated::Complex(disk(*k)?), Oracle::single(vec![1])),
        GeneratorSpec::Cylinder { k, h } => (Generated::Complex(cylinder(*k, *h)?), Oracle::single(vec![1, 1])),
        GeneratorSpec::IntervalPair { k } => (
            Generated::Pair(Pair::with_sub(interval(*k)?, [vec![0], vec![*k]])?),
            Oracle::single(vec![0, 1]),
        ),
        GeneratorSpec::DiskPair { k } => (
            Generated::Pair(Pair::new(disk(*k)?, cycle(*k)?)?),
            Oracle::single(vec![0, 0, 1]),
        ),
        GeneratorSpec::CirclePoint { k } => (
            Generated::Pair(Pair::with_sub(cycle(*k)?, [vec![0]])?),
            Oracle::single(vec![0, 1]),
        ),
        GeneratorSpec::CylinderPair { k, h } => (
            Generated::Pair(Pair::with_sub(cylinder(*k, *h)?, cylinder_boundary(*k, *h))?),
            Oracle::single(vec![0, 1, 1]),
        ),
        GeneratorSpec::SolenoidTower { p, r_max, base_k } => {
            let tower = cyclic_tower(*p, *r_max, *base_k, None)?;
            let oracle = Oracle {
                betti: vec![vec![1, 1]; r_max + 1],
                transitions: vec![Transition::Isomorphisms, Transition::TimesP],
            };
            (Generated::Tower(tower), oracle)
        }
        GeneratorSpec::CylinderPairTower { p, r_max, base_k, h } => {
            let tower = cyclic_tower(*p, *r_max, *base_k, Some(*h))?;
            // H^n(C, ∂C) = H^{n-1}(S¹) ⊗ H^1(I, ∂I): the cover is the
            // identity on H^0(S¹) and multiplication by p on H^1(S¹).
            let oracle = Oracle {
                betti: vec![vec![0, 1, 1]; r_max + 1],
                transitions: vec![Transition::Isomorphisms, Transition::Isomorphisms, Transition::TimesP],
            };
            (Generated::Tower(tower), oracle)
        }
        GeneratorSpec::TrivialTower { base, p, r_max } => {
            let inner = build(base)?;
            let pair = inner
                .object
                .as_pair()
                .ok_or_else(|| invalid("trivial tower over a tower"))?;
            let tower = trivial_tower(&pair, *p, *r_max)?;
            let b = &inner.oracle.betti[0];
            let betti = (0..=*r_max)
                .map(|r| b.iter().map(|&x| x * p.pow(r as u32) as usize).collect())
                .collect();
            let transitions = b
                .iter()
                .map(|&x| if x == 0 { Transition::Isomorphisms } else { Transition::Growing })
                .collect();
            (Generated::Tower(tower), Oracle { betti, transitions })
        }
        GeneratorSpec::VoltageTower {
            graph,
            voltages,
            p,
            r_max,
        } => {
            let (vertices, edges) = voltage_edges(graph, voltages)?;
            let tower = voltage_tower(vertices, &edges, *p, *r_max)?;
            let betti: Vec<Vec<usize>> = (0..=*r_max)
                .map(|r| {
                    let n = sheets(*p, r).expect("checked") as u64;
                    let b0 = derived_components(vertices, &edges, n);
                    let (v, e) = (vertices as usize * n as usize, edges.len() * n as usize);
                    vec![b0, e + b0 - v]
                })
                .collect();
            let b0: Vec<usize> = betti.iter().map(|b| b[0]).collect();
            let t0 = if b0.windows(2).all(|w| w[0] == w[1]) {
                Transition::Isomorphisms
            } else if b0.windows(2).all(|w| w[0] < w[1]) {
                Transition::Growing
            } else {
                Transition::Unknown
            };
            (Generated::Tower(tower), Oracle { betti, transitions: vec![t0, Transition::Unknown] })
        }
    };
    Ok(Built {
        spec: spec.clone(),
        object,
        oracle,
    })
}

/// Level `r` is `cycle(L_r)` or `cylinder(L_r, h)` with `L_r = base_k p^r`;
/// for cylinders `Z_r` is both boundary circles.
fn cyclic_tower(p: u64, r_max: usize, base_k: u32, h: Option<u32>) -> Result<Tower> {
    check_prime(p)?;
    if base_k < 3 {
        return Err(invalid(format!("base length {base_k} < 3")));
    }
    let mut levels = Vec::new();
    let mut projections = Vec::new();
    let mut orders = Vec::new();
    let mut actions = Vec::new();
    for r in 0..=r_max {
        let n = sheets(p, r)? as u32;
        let len = base_k
            .checked_mul(n)
            .ok_or_else(|| invalid("circumference overflows"))?;
        let (pair, height) = match h {
            None => (Pair::absolute(cycle(len)?), 0),
            Some(h) => (Pair::with_sub(cylinder(len, h)?, cylinder_boundary(len, h))?, h),
        };
        let rotate = |shift: u32| -> BTreeMap<Vertex, Vertex> {
            (0..=height)
                .flat_map(|j| (0..len).map(move |i| (j * len + i, j * len + (i + shift) % len)))
                .collect()
        };
        actions.push(
            (0..n)
                .map(|g| SimplicialMap::new(rotate(base_k * g), pair.total(), pair.total()))
                .collect::<Result<Vec<_>>>()?,
        );
        if r > 0 {
            let lower = len / p as u32;
            let map = (0..=height)
                .flat_map(|j| (0..len).map(move |i| (j * len + i, j * lower + i % lower)))
                .collect();
            projections.push(SimplicialMap::new(map, pair.total(), levels.last().map(Pair::total).expect("lower"))?);
        }
        orders.push(n as u64);
        levels.push(pair);
    }
    Tower::new(levels, projections, orders, Some(actions))
}

fn trivial_tower(base: &Pair, p: u64, r_max: usize) -> Result<Tower> {
    check_prime(p)?;
    let stride = base.total().max_vertex().map_or(0, |m| m + 1);
    let verts = base.total().vertex_ids();
    let mut levels = Vec::new();
    let mut projections = Vec::new();
    let mut orders = Vec::new();
    let mut actions = Vec::new();
    for r in 0..=r_max {
        let n = sheets(p, r)? as u32;
        let pair = base.product_with_finite_set(n)?;
        let shift = |h: u32| -> BTreeMap<Vertex, Vertex> {
            (0..n)
                .flat_map(|c| verts.iter().map(move |&v| (c * stride + v, ((c + h) % n) * stride + v)))
                .collect()
        };
        actions.push(
            (0..n)
                .map(|h| SimplicialMap::new(shift(h), pair.total(), pair.total()))
                .collect::<Result<Vec<_>>>()?,
        );
        if r > 0 {
            let lower = n / p as u32;
            let map = (0..n)
                .flat_map(|c| verts.iter().map(move |&v| (c * stride + v, (c % lower) * stride + v)))
                .collect();
            projections.push(SimplicialMap::new(map, pair.total(), levels.last().map(Pair::total).expect("lower"))?);
        }
        orders.push(n as u64);
        levels.push(pair);
    }
    Tower::new(levels, projections, orders, Some(actions))
}

type VoltageEdge = (u32, u32, u64);

fn voltage_edges(graph: &BaseGraph, voltages: &[u64]) -> Result<(u32, Vec<VoltageEdge>)> {
    match graph {
        BaseGraph::FigureEight => {
            if voltages.len() != 2 {
                return Err(invalid("figure-eight takes one voltage per loop"));
            }
            let edges = vec![
                (0, 1, 0),
                (1, 2, 0),
                (2, 0, voltages[0]),
                (0, 3, 0),
                (3, 4, 0),
                (4, 0, voltages[1]),
            ];
            Ok((5, edges))
        }
        BaseGraph::Explicit { vertices, edges } => {
            if voltages.len() != edges.len() {
                return Err(invalid(format!("{} voltages for {} edges", voltages.len(), edges.len())));
            }
            let mut seen = std::collections::BTreeSet::new();
            for &[u, v] in edges {
                if u == v || u >= *vertices || v >= *vertices {
                    return Err(invalid(format!("edge {u} -> {v} is not a simplicial edge")));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(invalid(format!("repeated edge {u} - {v}")));
                }
            }
            Ok((*vertices, edges.iter().zip(voltages).map(|(&[u, v], &a)| (u, v, a)).collect()))
        }
    }
}

/// Level `r`: vertices `(v, g)`, `g ∈ Z/p^r`, and edges
/// `(u, g) - (v, g + a)` for each base edge `u -> v` of voltage `a`.
fn voltage_tower(vertices: u32, edges: &[VoltageEdge], p: u64, r_max: usize) -> Result<Tower> {
    check_prime(p)?;
    let mut levels = Vec::new();
    let mut projections = Vec::new();
    let mut orders = Vec::new();
    let mut actions = Vec::new();
    for r in 0..=r_max {
        let n = sheets(p, r)? as u32;
        let id = |v: u32, g: u32| g * vertices + v;
        let mut simplices: Vec<Vec<Vertex>> = Vec::new();
        for g in 0..n {
            for v in 0..vertices {
                simplices.push(vec![id(v, g)]);
            }
            for &(u, v, a) in edges {
                simplices.push(vec![id(u, g), id(v, ((g as u64 + a) % n as u64) as u32)]);
            }
        }
        let y = SimplicialComplex::from_maximal(simplices)?;
        let shift = |h: u32| -> BTreeMap<Vertex, Vertex> {
            (0..n)
                .flat_map(|g| (0..vertices).map(move |v| (id(v, g), id(v, (g + h) % n))))
                .collect()
        };
        actions.push((0..n).map(|h| SimplicialMap::new(shift(h), &y, &y)).collect::<Result<Vec<_>>>()?);
        if r > 0 {
            let lower = n / p as u32;
            let map = (0..n)
                .flat_map(|g| (0..vertices).map(move |v| (id(v, g), id(v, g % lower))))
                .collect();
            projections.push(SimplicialMap::new(map, &y, levels.last().map(Pair::total).expect("lower"))?);
        }
        orders.push(n as u64);
        levels.push(Pair::absolute(y));
    }
    Tower::new(levels, projections, orders, Some(actions))
}

/// Components of the derived graph with `n` sheets, by union-find.
fn derived_components(vertices: u32, edges: &[VoltageEdge], n: u64) -> usize {
    let total = (vertices as u64 * n) as usize;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for g in 0..n {
        for &(u, v, a) in edges {
            let x = (g * vertices as u64 + u as u64) as usize;
            let y = (((g + a) % n) * vertices as u64 + v as u64) as usize;
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            parent[rx] = ry;
        }
    }
    (0..total).filter(|&x| find(&mut parent, x) == x).count()
}

/// Short names used on the command line: `point`, `cycle<k>`, `interval<k>`,
/// `disk<k>`, `cylinder<k>x<h>`, `interval-pair`, `disk-pair`,
/// `circle-point`, `cylinder-pair`, `solenoid`, `trivial-point`,
/// `trivial-circle`, `trivial-interval-pair`, `voltage`,
/// `cylinder-pair-tower`.
pub fn named(name: &str, p: u64, r_max: usize) -> Result<GeneratorSpec> {
    let num = |rest: &str| -> Result<u32> {
        rest.parse()
            .map_err(|_| invalid(format!("unknown generator `{name}`")))
    };
    let spec = match name {
        "point" => GeneratorSpec::Point,
        "interval-pair" => GeneratorSpec::IntervalPair { k: 2 },
        "disk-pair" => GeneratorSpec::DiskPair { k: 4 },
        "circle-point" => GeneratorSpec::CirclePoint { k: 3 },
        "cylinder-pair" => GeneratorSpec::CylinderPair { k: 3, h: 1 },
        "solenoid" => GeneratorSpec::SolenoidTower { p, r_max, base_k: 3 },
        "trivial-point" => trivial(GeneratorSpec::Point, p, r_max),
        "trivial-circle" => trivial(GeneratorSpec::Cycle { k: 3 }, p, r_max),
        "trivial-interval-pair" => trivial(GeneratorSpec::IntervalPair { k: 2 }, p, r_max),
        "voltage" => GeneratorSpec::VoltageTower {
            graph: BaseGraph::FigureEight,
            voltages: vec![1, 0],
            p,
            r_max,
        },
        "cylinder-pair-tower" => GeneratorSpec::CylinderPairTower {
            p,
            r_max,
            base_k: 3,
            h: 1,
        },
        _ => {
            if let Some(rest) = name.strip_prefix("cylinder") {
                let (k, h) = rest
                    .split_once('x')
                    .ok_or_else(|| invalid(format!("unknown generator `{name}`")))?;
                GeneratorSpec::Cylinder { k: num(k)?, h: num(h)? }
            } else if let Some(rest) = name.strip_prefix("cycle") {
                GeneratorSpec::Cycle { k: num(rest)? }
            } else if let Some(rest) = name.strip_prefix("interval") {
                GeneratorSpec::Interval { k: num(rest)? }
            } else if let Some(rest) = name.strip_prefix("disk") {
                GeneratorSpec::Disk { k: num(rest)? }
            } else {
                return Err(invalid(format!("unknown generator `{name}`")));
            }
        }
    };
    Ok(spec)
}

fn trivial(base: GeneratorSpec, p: u64, r_max: usize) -> GeneratorSpec {
    GeneratorSpec::TrivialTower {
        base: Box::new(base),
        p,
        r_max,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial;
    use crate::tower::{validate_tower, ValidationLevel};

    fn all_towers(p: u64, r_max: usize) -> Vec<GeneratorSpec> {
        [
            "solenoid",
            "trivial-point",
            "trivial-circle",
            "trivial-interval-pair",
            "voltage",
            "cylinder-pair-tower",
        ]
        .iter()
        .map(|n| named(n, p, r_max).unwrap())
        .collect()
    }

    #[test]
    fn towers_validate_with_deck_actions() {
        for p in [2, 3] {
            for spec in all_towers(p, 2) {
                let built = build(&spec).unwrap();
                let report = validate_tower(built.object.as_tower().unwrap());
                assert!(report.is_valid(), "{spec:?}: {:?}", report.issues);
                assert_eq!(report.level, ValidationLevel::WithDeckActions);
                assert!(report.full_preimage.iter().all(|&b| b));
            }
        }
    }

    #[test]
    fn voltage_sizes() {
        let built = build(&named("voltage", 3, 2).unwrap()).unwrap();
        let t = built.object.as_tower().unwrap();
        for r in 0..=2 {
            let y = t.level(r).total();
            assert_eq!(y.count(0), 5 * 3usize.pow(r as u32));
            assert_eq!(y.count(1), 6 * 3usize.pow(r as u32));
        }
        // One loop of voltage 1 keeps the derived graphs connected.
        assert_eq!(built.oracle.betti[2], vec![1, 10]);
    }

    #[test]
    fn zero_voltages_disconnect() {
        let spec = GeneratorSpec::VoltageTower {
            graph: BaseGraph::FigureEight,
            voltages: vec![0, 0],
            p: 2,
            r_max: 2,
        };
        let built = build(&spec).unwrap();
        assert_eq!(built.oracle.betti[2], vec![4, 8]);
        assert_eq!(built.oracle.transitions[0], Transition::Growing);
    }

    #[test]
    fn complex_oracles_match_euler_characteristic() {
        for name in ["cycle3", "interval4", "disk5", "cylinder4x2", "interval-pair", "disk-pair", "circle-point", "cylinder-pair"] {
            let built = build(&named(name, 2, 0).unwrap()).unwrap();
            let pair = built.object.as_pair().unwrap();
            let chi: i64 = built.oracle.betti[0]
                .iter()
                .enumerate()
                .map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(chi, pair.euler_characteristic(), "{name}");
            let md = Modulus::new(3, 2).unwrap();
            for n in 0..=3 {
                assert_eq!(
                    simplicial::cohomology(&pair, n, md).invariants(),
                    &built.oracle.invariants(0, n, md),
                    "{name} H^{n}"
                );
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build(&GeneratorSpec::Cycle { k: 2 }).is_err());
        assert!(build(&GeneratorSpec::Cylinder { k: 3, h: 0 }).is_err());
        assert!(matches!(
            build(&GeneratorSpec::SolenoidTower { p: 4, r_max: 1, base_k: 3 }),
            Err(Error::NotPrime(4))
        ));
        let loops = GeneratorSpec::VoltageTower {
            graph: BaseGraph::Explicit {
                vertices: 2,
                edges: vec![[0, 1], [1, 0]],
            },
            voltages: vec![0, 1],
            p: 2,
            r_max: 1,
        };
        assert!(build(&loops).is_err());
        assert!(named("torus", 2, 1).is_err());
        assert!(named("cyclex", 2, 1).is_err());
    }

    #[test]
    fn names() {
        assert_eq!(named("cycle3", 2, 1).unwrap(), GeneratorSpec::Cycle { k: 3 });
        assert_eq!(named("cylinder5x2", 2, 1).unwrap(), GeneratorSpec::Cylinder { k: 5, h: 2 });
    }
}
