use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cech::{CechComplex, TupleIndex, TupleKind};
use crate::cochain::{induced_on_cohomology, CochainComplex, CohomologyPresentation};
use crate::error::{Error, Result};
use crate::linalg::{ModuleInvariants, ModuleMap, ResidueMatrix};
use crate::residue::Modulus;
use crate::simplicial::{self, Pair};
use crate::tower::{cech_pullback_matrix, comparison_map, pullback_cover, validate_tower, PullbackCover, Tower, ValidationLevel};

/// Checks at one `(r, s, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremCell {
    pub r: usize,
    pub s: u32,
    pub n: usize,
    pub cech: ModuleInvariants,
    pub simplicial: ModuleInvariants,
    /// The cochain comparison `C^n(Y_r, Z_r) -> Č^n(𝔘^{(r)})` induces an
    /// isomorphism.
    pub comparison_is_isomorphism: bool,
    /// Base tuples whose support does not meet `Z_r`.
    pub base_tuples: usize,
    pub expected_rank: usize,
    pub found_rank: usize,
    /// Toward level `r + 1`: the Čech pullback matches the simplicial one
    /// through the comparison maps, on cochains and on cohomology.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cochain_square_commutes: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology_square_commutes: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pullback_injective: Option<bool>,
}

impl TheoremCell {
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.cech != self.simplicial {
            out.push("Čech and simplicial invariants differ");
        }
        if !self.comparison_is_isomorphism {
            out.push("comparison map is not an isomorphism");
        }
        if self.expected_rank != self.found_rank {
            out.push("Čech cochain rank differs from N times the deck order");
        }
        if self.cochain_square_commutes == Some(false) {
            out.push("pullback square does not commute on cochains");
        }
        if self.cohomology_square_commutes == Some(false) {
            out.push("pullback square does not commute on cohomology");
        }
        if self.pullback_injective == Some(false) {
            out.push("Čech pullback is not injective on cochains");
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// `Č^•` at `Z/p^s` reduced mod `p^{s-1}` against `Č^•` at `Z/p^{s-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub r: usize,
    pub s: u32,
    pub reduces_to_lower: bool,
    pub surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub p: u64,
    pub r_max: usize,
    pub n_max: usize,
    pub s_max: u32,
    pub validation: ValidationLevel,
    pub cells: Vec<TheoremCell>,
    pub reductions: Vec<ReductionCheck>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(TheoremCell::passed)
            && self.reductions.iter().all(|c| c.reduces_to_lower && c.surjective)
    }

    /// The first failure, located by `(r, s, n)`.
    pub fn first_failure(&self) -> Option<String> {
        for c in &self.cells {
            if let Some(why) = c.failures().first() {
                return Some(format!("(r, s, n) = ({}, {}, {}): {why}", c.r, c.s, c.n));
            }
        }
        self.reductions
            .iter()
            .find(|c| !(c.reduces_to_lower && c.surjective))
            .map(|c| format!("(r, s) = ({}, {}): mod p^{} reduction fails", c.r, c.s, c.s - 1))
    }

    /// `Err` carrying [`TheoremReport::first_failure`].
    pub fn ensure(&self) -> Result<()> {
        match self.first_failure() {
            None => Ok(()),
            Some(msg) => Err(Error::Contract(msg)),
        }
    }
}

impl fmt::Display for TheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cells {
            let status = if c.passed() { "ok" } else { "FAIL" };
            write!(
                f,
                "r={} s={} n={}: Čech {} | simplicial {} | rank {} = {}·{} | {status}",
                c.r,
                c.s,
                c.n,
                c.cech,
                c.simplicial,
                c.found_rank,
                c.base_tuples,
                if c.base_tuples == 0 { 0 } else { c.expected_rank / c.base_tuples }
            )?;
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Level {
    pair: Pair,
    cover: PullbackCover,
    cech: CechComplex,
    simp: CochainComplex,
}

fn build_levels(tower: &Tower, md: Modulus, tuples: &Arc<TupleIndex>) -> Result<Vec<Level>> {
    (0..=tower.r_max())
        .map(|r| {
            let cover = pullback_cover(tower, r, md)?;
            let cech = cover.cech_complex(tuples.clone());
            let pair = tower.level(r).clone();
            let simp = simplicial::cochain_complex(&pair, md, tuples.top());
            Ok(Level { pair, cover, cech, simp })
        })
        .collect()
}

fn free_map(m: &ResidueMatrix) -> Result<ModuleMap> {
    let md = m.modulus();
    ModuleMap::new(ModuleInvariants::free(md, m.cols()), ModuleInvariants::free(md, m.rows()), m.clone())
}

fn require_valid(tower: &Tower) -> Result<ValidationLevel> {
    let report = validate_tower(tower);
    if let Some(issue) = report.issues.first() {
        return Err(Error::InvalidTower(format!(
            "level {}: {}: {}",
            issue.level, issue.condition, issue.detail
        )));
    }
    Ok(report.level)
}

/// Compares, for `r <= r_max`, `s <= s_max`, `n <= n_max`, the Čech
/// cohomology of the pullback cover with `(Z/p^s)^{Z_r}` coefficients
/// against `H^n(Y_r, Z_r; Z/p^s)`, checks the rank bookkeeping
/// `rank Č^n = N · |G_0/G_r|`, and checks that the Čech and simplicial
/// pullbacks agree through the comparison maps.
pub fn main_theorem_check(tower: &Tower, p: u64, n_max: usize, s_max: u32) -> Result<TheoremReport> {
    let validation = require_valid(tower)?;
    if s_max == 0 {
        return Err(Error::ZeroExponent);
    }
    let tuples = Arc::new(TupleIndex::new(tower.base(), TupleKind::Full, n_max + 1));
    let mut cells = Vec::new();
    let mut reductions = Vec::new();
    let mut previous: Option<Vec<Level>> = None;
    for s in 1..=s_max {
        let md = Modulus::new(p, s)?;
        let levels = build_levels(tower, md, &tuples)?;
        for n in 0..=n_max {
            let mut pres: Vec<(CohomologyPresentation, CohomologyPresentation, ModuleMap)> = Vec::new();
            let mut phis = Vec::new();
            for lv in &levels {
                let h_cech = lv.cech.cohomology(n)?;
                let h_simp = lv.simp.cohomology(n)?;
                let phi = comparison_map(&lv.pair, &lv.cover, &lv.cech, n);
                let phi_h = induced_on_cohomology(&phi, &h_simp, &h_cech)?;
                pres.push((h_cech, h_simp, phi_h));
                phis.push(phi);
            }
            for (r, lv) in levels.iter().enumerate() {
                let base_tuples = tuples
                    .tuples(n)
                    .iter()
                    .filter(|t| !lv.cover.meets().contains(&t.support))
                    .count();
                let expected_rank = base_tuples * tower.deck_orders()[r] as usize;
                let (h_cech, h_simp, phi_h) = &pres[r];
                let mut cell = TheoremCell {
                    r,
                    s,
                    n,
                    cech: h_cech.invariants().clone(),
                    simplicial: h_simp.invariants().clone(),
                    comparison_is_isomorphism: phi_h.is_isomorphism(),
                    base_tuples,
                    expected_rank,
                    found_rank: lv.cech.dim(n),
                    cochain_square_commutes: None,
                    cohomology_square_commutes: None,
                    pullback_injective: None,
                };
                if r < tower.r_max() {
                    let up = &levels[r + 1];
                    let t_cech = cech_pullback_matrix(tower, &lv.cover, &lv.cech, &up.cover, &up.cech, n)?;
                    let t_simp = simplicial::pullback_matrix(tower.projection(r), &up.pair, &lv.pair, n, md)?;
                    let left = t_cech.checked_mul(&phis[r])?;
                    let right = phis[r + 1].checked_mul(&t_simp)?;
                    cell.cochain_square_commutes = Some(left == right);
                    cell.pullback_injective = Some(free_map(&t_cech)?.is_injective());
                    let (up_cech, up_simp, up_phi) = &pres[r + 1];
                    let t_cech_h = induced_on_cohomology(&t_cech, h_cech, up_cech)?;
                    let t_simp_h = induced_on_cohomology(&t_simp, h_simp, up_simp)?;
                    cell.cohomology_square_commutes = Some(t_cech_h.compose(phi_h)? == up_phi.compose(&t_simp_h)?);
                }
                cells.push(cell);
            }
        }
        if let Some(lower) = &previous {
            for (r, (hi, lo)) in levels.iter().zip(lower).enumerate() {
                let reduced = hi.cech.cochains().reduce(s - 1)?;
                let surjective = (0..=tuples.top()).all(|n| {
                    let dim = hi.cech.dim(n);
                    dim == lo.cech.dim(n)
                        && free_map(&ResidueMatrix::identity(dim, lo.cech.cochains().modulus()))
                            .map(|m| m.is_surjective())
                            .unwrap_or(false)
                });
                reductions.push(ReductionCheck {
                    r,
                    s,
                    reduces_to_lower: &reduced == lo.cech.cochains(),
                    surjective,
                });
            }
        }
        previous = Some(levels);
    }
    Ok(TheoremReport {
        p,
        r_max: tower.r_max(),
        n_max,
        s_max,
        validation,
        cells,
        reductions,
    })
}

/// Relative pipeline against a direct absolute computation at one
/// `(r, s, n)` of a tower with every `Z_r` empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbsoluteCell {
    pub r: usize,
    pub s: u32,
    pub n: usize,
    pub relative: ModuleInvariants,
    pub absolute: ModuleInvariants,
    /// The relativized and plain Čech complexes coincide.
    pub same_complex: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryOneReport {
    pub theorem: TheoremReport,
    pub cells: Vec<AbsoluteCell>,
}

impl CorollaryOneReport {
    pub fn passed(&self) -> bool {
        self.theorem.passed()
            && self
                .cells
                .iter()
                .all(|c| c.same_complex && c.relative == c.absolute)
    }
}

/// With every `Z_r` replaced by `∅`, runs [`main_theorem_check`] and compares
/// the relative Čech pipeline against the plain locally constant sheaf and
/// absolute simplicial cohomology.
pub fn corollary_one_check(tower: &Tower, p: u64, n_max: usize, s_max: u32) -> Result<CorollaryOneReport> {
    let absolute = tower.absolute();
    let theorem = main_theorem_check(&absolute, p, n_max, s_max)?;
    let tuples = Arc::new(TupleIndex::new(absolute.base(), TupleKind::Full, n_max + 1));
    let mut cells = Vec::new();
    for s in 1..=s_max {
        let md = Modulus::new(p, s)?;
        for r in 0..=absolute.r_max() {
            let cover = pullback_cover(&absolute, r, md)?;
            let relative = cover.cech_complex(tuples.clone());
            let plain = CechComplex::with_tuples(tuples.clone(), cover.sheaf());
            let same_complex = relative.cochains() == plain.cochains();
            let y = absolute.level(r).total();
            for n in 0..=n_max {
                cells.push(AbsoluteCell {
                    r,
                    s,
                    n,
                    relative: relative.cohomology(n)?.invariants().clone(),
                    absolute: simplicial::cohomology(&Pair::absolute(y.clone()), n, md).invariants().clone(),
                    same_complex,
                });
            }
        }
    }
    Ok(CorollaryOneReport { theorem, cells })
}
