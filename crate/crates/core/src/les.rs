//! The long exact sequence of `0 -> F^Z -> F -> F_Z -> 0` in Čech
//! cohomology, its exactness certificate, and the finite-level check of the
//! completed sequence `H̃_c -> H̃ -> H̃_∂ -> H̃_c[1]` along a tower.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cech::{presheaf_les_on, ConstantSheaf, PresheafLes, StarCover, TupleIndex, TupleKind};
use crate::cochain::{induced_on_cohomology, CohomologyPresentation};
use crate::error::{Error, Result};
use crate::linalg::{ImageSolver, ModuleInvariants, ModuleMap, ResidueMatrix};
use crate::residue::Modulus;
use crate::simplicial::{self, Pair};
use crate::tower::{cech_pullback_matrix, colimit_classification, pullback_cover, validate_tower, Classification, DirectedSystem, Tower};

/// The three terms in each degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Term {
    /// `Ȟ^n(F^Z) = H^n(X, Z)`.
    Relative,
    /// `Ȟ^n(F) = H^n(X)`.
    Absolute,
    /// `Ȟ^n(F_Z) = H^n(Z)`.
    Boundary,
}

impl Term {
    const ALL: [Term; 3] = [Term::Relative, Term::Absolute, Term::Boundary];

    pub fn label(self, n: usize) -> String {
        match self {
            Term::Relative => format!("H^{n}(X, Z)"),
            Term::Absolute => format!("H^{n}(X)"),
            Term::Boundary => format!("H^{n}(Z)"),
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// Which particular solution the snake construction picks when lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftStrategy {
    FirstFound,
    LastFound,
}

/// A presheaf sequence with cohomology presentations of all three terms in
/// degrees `0..top`.
#[derive(Clone, Debug)]
pub struct LesData {
    les: PresheafLes,
    /// `presentations[n][term]`.
    presentations: Vec<[CohomologyPresentation; 3]>,
}

impl LesData {
    /// Fails if the sequence is not exact in each degree.
    pub fn new(les: PresheafLes) -> Result<Self> {
        les.check_levelwise_exact()?;
        let presentations = (0..les.top())
            .map(|n| {
                Ok([
                    les.vanishing().cohomology(n)?,
                    les.full().cohomology(n)?,
                    les.supported().cohomology(n)?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LesData { les, presentations })
    }

    pub fn sequence(&self) -> &PresheafLes {
        &self.les
    }

    /// Highest degree with all three terms.
    pub fn n_top(&self) -> usize {
        self.presentations.len() - 1
    }

    pub fn presentation(&self, term: Term, n: usize) -> &CohomologyPresentation {
        &self.presentations[n][term.index()]
    }

    pub fn modulus(&self) -> Modulus {
        self.les.modulus()
    }

    /// `Ȟ^n(F^Z) -> Ȟ^n(F)`.
    pub fn inclusion_map(&self, n: usize) -> Result<ModuleMap> {
        induced_on_cohomology(
            self.les.inclusion(n),
            self.presentation(Term::Relative, n),
            self.presentation(Term::Absolute, n),
        )
    }

    /// `Ȟ^n(F) -> Ȟ^n(F_Z)`.
    pub fn restriction_map(&self, n: usize) -> Result<ModuleMap> {
        induced_on_cohomology(
            self.les.projection(n),
            self.presentation(Term::Absolute, n),
            self.presentation(Term::Boundary, n),
        )
    }
}

/// `δ: Ȟ^n(F_Z) -> Ȟ^{n+1}(F^Z)`: lift a cocycle to `Č^n(F)`, apply `d`,
/// and read the result back in `Č^{n+1}(F^Z)`.
pub fn connecting_map(data: &LesData, n: usize, strategy: LiftStrategy) -> Result<ModuleMap> {
    if n + 1 > data.n_top() {
        return Err(Error::Contract(format!("connecting map out of degree {n} needs degree {}", n + 1)));
    }
    let les = &data.les;
    let solver = |m: &ResidueMatrix| match strategy {
        LiftStrategy::FirstFound => ImageSolver::new(m),
        LiftStrategy::LastFound => ImageSolver::new_reversed(m),
    };
    let lift = solver(les.projection(n));
    let back = solver(les.inclusion(n + 1));
    let source = data.presentation(Term::Boundary, n);
    let target = data.presentation(Term::Relative, n + 1);
    let d = les.full().cochains().differential(n);
    let lost = |what: &str| Error::Contract(format!("degree {n}: {what}; the presheaf sequence is not exact"));
    let mut columns = Vec::with_capacity(source.cocycle_reps().len());
    for z in source.cocycle_reps() {
        let x = lift.solve(z)?.ok_or_else(|| lost("a cocycle does not lift"))?;
        let dx = d.mul_vec(&x);
        let y = back.solve(&dx)?.ok_or_else(|| lost("d of the lift is not in the image"))?;
        columns.push(target.coordinates(&y)?);
    }
    let md = data.modulus();
    ModuleMap::new(
        source.invariants().clone(),
        target.invariants().clone(),
        ResidueMatrix::from_columns(target.invariants().len(), &columns, md),
    )
}

/// A term with the maps into and out of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactSequenceNode {
    pub label: String,
    pub term: Term,
    pub degree: usize,
    pub module: ModuleInvariants,
    pub incoming: ModuleMap,
    /// `None` at the truncation point.
    pub outgoing: Option<ModuleMap>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongExactSequence {
    pub modulus: Modulus,
    pub nodes: Vec<ExactSequenceNode>,
    /// Per connecting map, whether both lift strategies agree.
    pub lift_independent: Vec<bool>,
}

impl LongExactSequence {
    /// The map out of node `i`.
    pub fn map(&self, i: usize) -> Option<&ModuleMap> {
        self.nodes[i].outgoing.as_ref()
    }

    /// Replaces the map out of node `i`, keeping the next node consistent.
    pub fn set_map(&mut self, i: usize, f: ModuleMap) {
        if i + 1 < self.nodes.len() {
            self.nodes[i + 1].incoming = f.clone();
        }
        self.nodes[i].outgoing = Some(f);
    }
}

impl fmt::Display for LongExactSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|n| format!("{} = {}", n.label, n.module)).collect();
        write!(f, "0 -> {} -> ...", parts.join(" -> "))
    }
}

/// `Ȟ^0(F^Z) -> Ȟ^0(F) -> Ȟ^0(F_Z) -> Ȟ^1(F^Z) -> ... -> Ȟ^top(F_Z)`.
pub fn assemble_les(data: &LesData) -> Result<LongExactSequence> {
    let md = data.modulus();
    let top = data.n_top();
    let mut nodes: Vec<ExactSequenceNode> = Vec::new();
    let mut lift_independent = Vec::new();
    let mut incoming = ModuleMap::zero(ModuleInvariants::zero(md), data.presentation(Term::Relative, 0).invariants().clone());
    'terms: for n in 0..=top {
        for term in Term::ALL {
            let outgoing = match term {
                Term::Relative => Some(data.inclusion_map(n)?),
                Term::Absolute => Some(data.restriction_map(n)?),
                Term::Boundary if n < top => {
                    let a = connecting_map(data, n, LiftStrategy::FirstFound)?;
                    let b = connecting_map(data, n, LiftStrategy::LastFound)?;
                    lift_independent.push(a == b);
                    Some(a)
                }
                Term::Boundary => None,
            };
            let next = outgoing.clone();
            nodes.push(ExactSequenceNode {
                label: term.label(n),
                term,
                degree: n,
                module: data.presentation(term, n).invariants().clone(),
                incoming,
                outgoing,
            });
            incoming = match next {
                Some(f) => f,
                None => break 'terms,
            };
        }
    }
    Ok(LongExactSequence {
        modulus: md,
        nodes,
        lift_independent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodeCheck {
    pub index: usize,
    pub label: String,
    pub composite_zero: bool,
    /// `log_p |im incoming|`.
    pub image: u64,
    /// `log_p |ker outgoing|`.
    pub kernel: u64,
}

impl NodeCheck {
    pub fn exact(&self) -> bool {
        self.composite_zero && self.image == self.kernel
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub checks: Vec<NodeCheck>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(NodeCheck::exact)
    }

    pub fn first_failure(&self) -> Option<&NodeCheck> {
        self.checks.iter().find(|c| !c.exact())
    }
}

/// At each node with both maps: `outgoing ∘ incoming = 0` and
/// `|im incoming| = |ker outgoing|`, which together give `im = ker`.
pub fn certify_exact(nodes: &[ExactSequenceNode]) -> ExactnessReport {
    let checks = nodes
        .iter()
        .enumerate()
        .filter_map(|(index, node)| {
            let out = node.outgoing.as_ref()?;
            let composite_zero = out.compose(&node.incoming).map(|c| c.is_zero()).unwrap_or(false);
            Some(NodeCheck {
                index,
                label: node.label.clone(),
                composite_zero,
                image: node.incoming.image_log_order(),
                kernel: out.kernel_log_order(),
            })
        })
        .collect();
    ExactnessReport { checks }
}

/// The sequence of `(X, Z)` on the star cover with constant `Z/p^s`, up to
/// `Ȟ^{n_max+1}(F_Z)`.
pub fn pair_les(pair: &Pair, modulus: Modulus, n_max: usize) -> Result<LesData> {
    let cover = StarCover::new(pair.total().clone());
    let tuples = Arc::new(TupleIndex::new(cover.nerve(), TupleKind::Full, n_max + 2));
    LesData::new(presheaf_les_on(tuples, &ConstantSheaf::new(modulus), &cover.meeting(pair)))
}

/// One `(r, s)` level of [`completed_les_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelLes {
    pub r: usize,
    pub s: u32,
    pub terms: Vec<String>,
    pub exactness: ExactnessReport,
    pub lift_independent: bool,
    /// The three Čech terms equal `H^n(Y_r, Z_r)`, `H^n(Y_r)`, `H^n(Z_r)`.
    pub terms_match_simplicial: bool,
    /// All `H^n(Y_r, Z_r) -> H^n(Y_r)` are isomorphisms, as when `Z_r = ∅`.
    pub inclusions_are_isomorphisms: bool,
}

impl LevelLes {
    pub fn passed(&self) -> bool {
        self.exactness.passed() && self.lift_independent && self.terms_match_simplicial
    }
}

/// `pullback ∘ map = map ∘ pullback` for the LES map out of `(term, n)`
/// between levels `r` and `r + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaturalitySquare {
    pub r: usize,
    pub s: u32,
    pub n: usize,
    pub from: Term,
    pub commutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermClassification {
    pub term: Term,
    pub n: usize,
    pub s: u32,
    pub classification: Classification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompletedLesReport {
    pub p: u64,
    pub r_max: usize,
    pub n_max: usize,
    pub s_max: u32,
    pub levels: Vec<LevelLes>,
    pub naturality: Vec<NaturalitySquare>,
    pub classifications: Vec<TermClassification>,
}

impl CompletedLesReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(LevelLes::passed) && self.naturality.iter().all(|q| q.commutes)
    }

    pub fn first_failure(&self) -> Option<String> {
        for l in &self.levels {
            if let Some(c) = l.exactness.first_failure() {
                return Some(format!("(r, s) = ({}, {}): not exact at {}", l.r, l.s, c.label));
            }
            if !l.lift_independent {
                return Some(format!("(r, s) = ({}, {}): connecting map depends on the lift", l.r, l.s));
            }
            if !l.terms_match_simplicial {
                return Some(format!("(r, s) = ({}, {}): Čech terms differ from simplicial cohomology", l.r, l.s));
            }
        }
        self.naturality.iter().find(|q| !q.commutes).map(|q| {
            format!(
                "(r, s) = ({}, {}): naturality fails for the map out of {}",
                q.r,
                q.s,
                q.from.label(q.n)
            )
        })
    }

    pub fn classification(&self, term: Term, n: usize, s: u32) -> Option<&Classification> {
        self.classifications
            .iter()
            .find(|c| c.term == term && c.n == n && c.s == s)
            .map(|c| &c.classification)
    }
}

/// For every `(r, s)`, the LES of `(Y_r, Z_r)` on the pullback cover,
/// certified exact, plus naturality of all three kinds of map under the
/// tower pullbacks, for degrees `n <= n_max`.
pub fn completed_les_check(tower: &Tower, p: u64, n_max: usize, s_max: u32) -> Result<CompletedLesReport> {
    let validation = validate_tower(tower);
    if let Some(issue) = validation.issues.first() {
        return Err(Error::InvalidTower(format!(
            "level {}: {}: {}",
            issue.level, issue.condition, issue.detail
        )));
    }
    if s_max == 0 {
        return Err(Error::ZeroExponent);
    }
    let tuples = Arc::new(TupleIndex::new(tower.base(), TupleKind::Full, n_max + 2));
    let mut levels = Vec::new();
    let mut naturality = Vec::new();
    let mut classifications = Vec::new();
    for s in 1..=s_max {
        let md = Modulus::new(p, s)?;
        let mut covers = Vec::new();
        let mut data = Vec::new();
        for r in 0..=tower.r_max() {
            let cover = pullback_cover(tower, r, md)?;
            let d = LesData::new(presheaf_les_on(tuples.clone(), cover.sheaf(), cover.meets()))?;
            let seq = assemble_les(&d)?;
            let pair = tower.level(r);
            let terms_match_simplicial = (0..=d.n_top()).all(|n| {
                d.presentation(Term::Relative, n).invariants() == simplicial::cohomology(pair, n, md).invariants()
                    && d.presentation(Term::Absolute, n).invariants()
                        == simplicial::cohomology(&Pair::absolute(pair.total().clone()), n, md).invariants()
                    && d.presentation(Term::Boundary, n).invariants()
                        == simplicial::cohomology(&pair.sub_pair(), n, md).invariants()
            });
            let inclusions_are_isomorphisms = seq
                .nodes
                .iter()
                .filter(|node| node.term == Term::Relative)
                .all(|node| node.outgoing.as_ref().is_some_and(ModuleMap::is_isomorphism));
            levels.push(LevelLes {
                r,
                s,
                terms: seq.nodes.iter().map(|n| format!("{} = {}", n.label, n.module)).collect(),
                exactness: certify_exact(&seq.nodes),
                lift_independent: seq.lift_independent.iter().all(|&b| b),
                terms_match_simplicial,
                inclusions_are_isomorphisms,
            });
            covers.push(cover);
            data.push(d);
        }
        // pullback[r][n][term]: H^n at level r -> level r + 1.
        let mut pullbacks: Vec<Vec<[ModuleMap; 3]>> = Vec::new();
        for r in 0..tower.r_max() {
            let (lo, hi) = (&data[r], &data[r + 1]);
            let per_degree = (0..=n_max + 1)
                .map(|n| {
                    let complexes = |d: &LesData| {
                        let les = d.sequence();
                        [les.vanishing().clone(), les.full().clone(), les.supported().clone()]
                    };
                    let (cl, ch) = (complexes(lo), complexes(hi));
                    let mut out = Vec::with_capacity(3);
                    for term in Term::ALL {
                        let k = term.index();
                        let chain = cech_pullback_matrix(tower, &covers[r], &cl[k], &covers[r + 1], &ch[k], n)?;
                        out.push(induced_on_cohomology(&chain, lo.presentation(term, n), hi.presentation(term, n))?);
                    }
                    Ok(<[ModuleMap; 3]>::try_from(out).expect("three terms"))
                })
                .collect::<Result<Vec<_>>>()?;
            for n in 0..=n_max {
                let f = &per_degree[n];
                let checks = [
                    (Term::Relative, f[1].compose(&lo.inclusion_map(n)?)? == hi.inclusion_map(n)?.compose(&f[0])?),
                    (Term::Absolute, f[2].compose(&lo.restriction_map(n)?)? == hi.restriction_map(n)?.compose(&f[1])?),
                    (
                        Term::Boundary,
                        per_degree[n + 1][0].compose(&connecting_map(lo, n, LiftStrategy::FirstFound)?)?
                            == connecting_map(hi, n, LiftStrategy::FirstFound)?.compose(&f[2])?,
                    ),
                ];
                for (from, commutes) in checks {
                    naturality.push(NaturalitySquare { r, s, n, from, commutes });
                }
            }
            pullbacks.push(per_degree);
        }
        for n in 0..=n_max {
            for term in Term::ALL {
                let modules = data.iter().map(|d| d.presentation(term, n).invariants().clone()).collect();
                let maps = pullbacks.iter().map(|p| p[n][term.index()].clone()).collect();
                let system = DirectedSystem::new(n, modules, maps)?;
                classifications.push(TermClassification {
                    term,
                    n,
                    s,
                    classification: colimit_classification(&system),
                });
            }
        }
    }
    Ok(CompletedLesReport {
        p,
        r_max: tower.r_max(),
        n_max,
        s_max,
        levels,
        naturality,
        classifications,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{build, named, GeneratorSpec};

    fn z(p: u64, s: u32) -> Modulus {
        Modulus::new(p, s).unwrap()
    }

    fn pair(spec: GeneratorSpec) -> Pair {
        build(&spec).unwrap().object.as_pair().unwrap()
    }

    #[test]
    fn interval_connecting_map_is_the_difference() {
        let md = z(2, 2);
        let data = pair_les(&pair(GeneratorSpec::IntervalPair { k: 1 }), md, 0).unwrap();
        let delta = connecting_map(&data, 0, LiftStrategy::FirstFound).unwrap();
        assert_eq!(delta.source().exponents(), &[2, 2]);
        assert_eq!(delta.target().exponents(), &[2]);
        assert!(delta.is_surjective());
        assert_eq!(delta.kernel_log_order(), 2);
        // The kernel is the diagonal: the constant function on both ends, which
        // is the coordinate image of the restriction from the interval.
        let restrict = data.restriction_map(0).unwrap();
        assert!(delta.compose(&restrict).unwrap().is_zero());
        assert_eq!(restrict.image_log_order(), 2);
        let seq = assemble_les(&data).unwrap();
        assert!(certify_exact(&seq.nodes).passed());
        assert!(seq.lift_independent.iter().all(|&b| b));
    }

    #[test]
    fn circle_point_connecting_map_vanishes() {
        let md = z(3, 2);
        let data = pair_les(&pair(GeneratorSpec::CirclePoint { k: 4 }), md, 1).unwrap();
        let delta = connecting_map(&data, 0, LiftStrategy::LastFound).unwrap();
        assert!(delta.is_zero());
        assert_eq!(data.restriction_map(0).unwrap().image_log_order(), 2);
        let seq = assemble_les(&data).unwrap();
        assert!(certify_exact(&seq.nodes).passed(), "{seq}");
    }

    #[test]
    fn empty_sub_gives_zero_connecting_maps() {
        let data = pair_les(&Pair::absolute(crate::generators::cycle(3).unwrap()), z(2, 1), 1).unwrap();
        for n in 0..2 {
            let delta = connecting_map(&data, n, LiftStrategy::FirstFound).unwrap();
            assert!(delta.source().is_zero() && delta.is_zero());
            assert!(data.inclusion_map(n).unwrap().is_isomorphism());
        }
    }

    #[test]
    fn zero_sequence_is_exact() {
        let md = z(5, 1);
        let zero = ModuleInvariants::zero(md);
        let node = ExactSequenceNode {
            label: "0".into(),
            term: Term::Absolute,
            degree: 0,
            module: zero.clone(),
            incoming: ModuleMap::zero(zero.clone(), zero.clone()),
            outgoing: Some(ModuleMap::zero(zero.clone(), zero)),
        };
        assert!(certify_exact(&[node.clone(), node]).passed());
    }

    #[test]
    fn perturbed_entry_is_located() {
        let md = z(2, 2);
        let data = pair_les(&pair(GeneratorSpec::CylinderPair { k: 3, h: 1 }), md, 1).unwrap();
        let seq = assemble_les(&data).unwrap();
        assert!(certify_exact(&seq.nodes).passed());
        let i = seq.nodes.iter().position(|n| n.label == "H^0(Z)").unwrap();
        let f = seq.map(i).unwrap();
        let mut m = f.matrix().clone();
        m.set(0, 0, md.add(m.get(0, 0), 1));
        let mut bad = seq.clone();
        bad.set_map(i, ModuleMap::new(f.source().clone(), f.target().clone(), m).unwrap());
        let report = certify_exact(&bad.nodes);
        let failure = report.first_failure().unwrap();
        assert!(failure.index == i || failure.index == i + 1, "{failure:?}");
    }

    #[test]
    fn cylinder_pair_tower_sequence() {
        let t = build(&named("cylinder-pair-tower", 2, 2).unwrap()).unwrap();
        let report = completed_les_check(t.object.as_tower().unwrap(), 2, 1, 2).unwrap();
        assert!(report.passed(), "{:?}", report.first_failure());
        assert!(matches!(
            report.classification(Term::Boundary, 0, 1),
            Some(Classification::Stabilizes { .. })
        ));
    }
}
