use std::fmt;

use serde::Serialize;

use crate::cochain::{induced_on_cohomology, CohomologyPresentation};
use crate::error::{Error, Result};
use crate::linalg::{ModuleInvariants, ModuleMap, ResidueMatrix};
use crate::residue::Modulus;
use crate::simplicial::{self, induced_map};
use crate::tower::{validate_tower, Tower};

/// `M_0 -> M_1 -> ...` with `maps[r]: M_r -> M_{r+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectedSystem {
    pub degree: usize,
    pub modules: Vec<ModuleInvariants>,
    pub maps: Vec<ModuleMap>,
}

impl DirectedSystem {
    pub fn new(degree: usize, modules: Vec<ModuleInvariants>, maps: Vec<ModuleMap>) -> Result<Self> {
        if maps.len() + 1 != modules.len() {
            return Err(Error::Contract(format!("{} maps for {} modules", maps.len(), modules.len())));
        }
        for (r, f) in maps.iter().enumerate() {
            if f.source() != &modules[r] || f.target() != &modules[r + 1] {
                return Err(Error::Contract(format!("map {r} does not join levels {r} and {}", r + 1)));
            }
        }
        Ok(DirectedSystem { degree, modules, maps })
    }

    /// Highest level index.
    pub fn horizon(&self) -> usize {
        self.modules.len() - 1
    }

    /// `M_from -> M_to`.
    pub fn composite(&self, from: usize, to: usize) -> ModuleMap {
        let mut f = ModuleMap::identity(self.modules[from].clone());
        for g in &self.maps[from..to] {
            f = g.compose(&f).expect("adjacent maps compose");
        }
        f
    }
}

pub(crate) fn level_presentations(tower: &Tower, n: usize, modulus: Modulus) -> Vec<CohomologyPresentation> {
    tower
        .levels()
        .iter()
        .map(|pair| simplicial::cohomology(pair, n, modulus))
        .collect()
}

pub(crate) fn level_transitions(tower: &Tower, pres: &[CohomologyPresentation]) -> Result<Vec<ModuleMap>> {
    (0..tower.r_max())
        .map(|r| {
            induced_map(
                tower.projection(r),
                tower.level(r + 1),
                tower.level(r),
                &pres[r],
                &pres[r + 1],
            )
        })
        .collect()
}

fn require_valid(tower: &Tower) -> Result<()> {
    let report = validate_tower(tower);
    match report.issues.first() {
        None => Ok(()),
        Some(issue) => Err(Error::InvalidTower(format!(
            "level {}: {}: {}",
            issue.level, issue.condition, issue.detail
        ))),
    }
}

/// `H^n(Y_r, Z_r; Z/p^s)` for all `r` with the pullbacks along the
/// projections.
pub fn cohomology_system(tower: &Tower, n: usize, modulus: Modulus) -> Result<DirectedSystem> {
    require_valid(tower)?;
    let pres = level_presentations(tower, n, modulus);
    let maps = level_transitions(tower, &pres)?;
    DirectedSystem::new(n, pres.iter().map(|h| h.invariants().clone()).collect(), maps)
}

/// An exact ratio `num / den` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_integer(&self, k: u64) -> bool {
        self.den == 1 && self.num == k
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// What the finite horizon says about `lim_r M_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    /// Every map from level `from` to the horizon is an isomorphism.
    Stabilizes { from: usize, invariants: ModuleInvariants },
    /// Every composite across `window` consecutive maps is zero.
    Vanishes { window: usize },
    /// `log_p |M_r|` strictly increases; `ratios[r]` is
    /// `log_p |M_{r+1}| / log_p |M_r|` when `M_r ≠ 0`.
    Growing { log_orders: Vec<u64>, ratios: Vec<Option<Ratio>> },
    Inconclusive { horizon: usize },
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Stabilizes { .. } => "STABILIZES",
            Classification::Vanishes { .. } => "VANISHES",
            Classification::Growing { .. } => "GROWING",
            Classification::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }

    /// The colimit when the horizon determines it.
    pub fn colimit(&self, modulus: Modulus) -> Option<ModuleInvariants> {
        match self {
            Classification::Stabilizes { invariants, .. } => Some(invariants.clone()),
            Classification::Vanishes { .. } => Some(ModuleInvariants::zero(modulus)),
            _ => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Stabilizes { from, invariants } => write!(f, "STABILIZES({invariants}) from r = {from}"),
            Classification::Vanishes { window: 1 } => write!(f, "VANISHES (every map is zero)"),
            Classification::Vanishes { window } => write!(f, "VANISHES (composites of {window} maps are zero)"),
            Classification::Growing { ratios, .. } => {
                let shown: Vec<String> = ratios
                    .iter()
                    .map(|r| r.map_or("-".to_string(), |r| r.to_string()))
                    .collect();
                write!(f, "GROWING (ratios {})", shown.join(", "))
            }
            Classification::Inconclusive { horizon } => write!(f, "INCONCLUSIVE within r <= {horizon}"),
        }
    }
}

/// Classifies the colimit of `d` within its horizon, trying in order:
/// stabilization, vanishing, strict growth.
pub fn colimit_classification(d: &DirectedSystem) -> Classification {
    let last = d.horizon();
    if last == 0 {
        return Classification::Inconclusive { horizon: 0 };
    }
    let iso: Vec<bool> = d.maps.iter().map(ModuleMap::is_isomorphism).collect();
    if let Some(from) = (0..last).find(|&r0| iso[r0..].iter().all(|&b| b)) {
        return Classification::Stabilizes {
            from,
            invariants: d.modules[from].clone(),
        };
    }
    for window in 1..=last {
        if (0..=last - window).all(|r| d.composite(r, r + window).is_zero()) {
            return Classification::Vanishes { window };
        }
    }
    let log_orders: Vec<u64> = d.modules.iter().map(ModuleInvariants::log_order).collect();
    if log_orders.windows(2).all(|w| w[0] < w[1]) {
        let ratios = log_orders
            .windows(2)
            .map(|w| (w[0] > 0).then(|| Ratio::new(w[1], w[0])))
            .collect();
        return Classification::Growing { log_orders, ratios };
    }
    Classification::Inconclusive { horizon: last }
}

/// The inverse limit over `s`, as far as the colimit pattern allows; always
/// an inference from finitely many `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LimitInference {
    /// `Z_p^free_rank ⊕ ⊕ Z/p^e`.
    Module { p: u64, free_rank: usize, torsion: Vec<u32> },
    /// Some `s` grows; no closed form.
    Growing { profiles: Vec<GrowthProfile> },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthProfile {
    pub s: u32,
    pub log_orders: Vec<u64>,
    pub ratios: Vec<Option<Ratio>>,
}

impl fmt::Display for LimitInference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitInference::Module { p, free_rank, torsion } => {
                let mut parts = Vec::new();
                match free_rank {
                    0 => {}
                    1 => parts.push(format!("Z_{p}")),
                    k => parts.push(format!("Z_{p}^{k}")),
                }
                for &e in torsion {
                    parts.push(if e == 1 { format!("Z/{p}") } else { format!("Z/{p}^{e}") });
                }
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
            LimitInference::Growing { profiles } => {
                let shown: Vec<String> = profiles
                    .iter()
                    .map(|g| {
                        let r: Vec<String> = g
                            .ratios
                            .iter()
                            .map(|x| x.map_or("-".to_string(), |x| x.to_string()))
                            .collect();
                        format!("s={}: {}", g.s, r.join(", "))
                    })
                    .collect();
                write!(f, "no closed form (growing; ratios {})", shown.join("; "))
            }
            LimitInference::Inconclusive { reason } => write!(f, "inconclusive ({reason})"),
        }
    }
}

/// Reads the limit off per-`s` colimits: an exponent equal to `s` at every
/// `s` is a free `Z_p` summand, and an exponent `e` stable once `s > e` is a
/// `Z/p^e` summand.
pub fn infer_limit(p: u64, classes: &[(Modulus, Classification)]) -> LimitInference {
    let growing: Vec<GrowthProfile> = classes
        .iter()
        .filter_map(|(m, c)| match c {
            Classification::Growing { log_orders, ratios } => Some(GrowthProfile {
                s: m.s(),
                log_orders: log_orders.clone(),
                ratios: ratios.clone(),
            }),
            _ => None,
        })
        .collect();
    if !growing.is_empty() {
        return LimitInference::Growing { profiles: growing };
    }
    let mut colimits = Vec::with_capacity(classes.len());
    for (m, c) in classes {
        match c.colimit(*m) {
            Some(inv) => colimits.push((m.s(), inv)),
            None => {
                return LimitInference::Inconclusive {
                    reason: format!("colimit undetermined at s = {}", m.s()),
                }
            }
        }
    }
    let Some((s_top, top)) = colimits.iter().max_by_key(|(s, _)| *s) else {
        return LimitInference::Inconclusive {
            reason: "no levels".into(),
        };
    };
    let free_rank = top.free_rank();
    let torsion: Vec<u32> = top.exponents().iter().copied().filter(|&e| e < *s_top).collect();
    for (s, inv) in &colimits {
        let mut expected: Vec<u32> = torsion.iter().map(|&e| e.min(*s)).collect();
        expected.extend(std::iter::repeat_n(*s, free_rank));
        expected.sort_unstable();
        if inv.exponents() != expected.as_slice() {
            return LimitInference::Inconclusive {
                reason: format!("exponent pattern at s = {s} is {inv}, not a reduction of the top level"),
            };
        }
    }
    LimitInference::Module { p, free_rank, torsion }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportCell {
    pub r: usize,
    pub s: u32,
    pub invariants: ModuleInvariants,
}

/// `reduce ∘ pullback = pullback ∘ reduce` between `(r, s)` and `(r+1, s-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCheck {
    pub r: usize,
    pub s: u32,
    pub commutes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiIndexedReport {
    pub degree: usize,
    pub p: u64,
    pub r_max: usize,
    pub s_max: u32,
    pub table: Vec<ReportCell>,
    /// `horizontal[s-1][r]: H^n(Y_r) -> H^n(Y_{r+1})` over `Z/p^s`.
    pub horizontal: Vec<Vec<ModuleMap>>,
    /// `vertical[s-2][r]`: reduction `Z/p^s -> Z/p^{s-1}` at level `r`.
    pub vertical: Vec<Vec<ModuleMap>>,
    pub squares: Vec<SquareCheck>,
    /// Mod `p^{s-1}` reduction of cochains is onto and commutes with `d`.
    pub reduction_surjective: bool,
    pub classifications: Vec<Classification>,
    pub inferred: LimitInference,
}

impl BiIndexedReport {
    pub fn squares_commute(&self) -> bool {
        self.squares.iter().all(|q| q.commutes)
    }

    pub fn invariants(&self, r: usize, s: u32) -> Option<&ModuleInvariants> {
        self.table.iter().find(|c| c.r == r && c.s == s).map(|c| &c.invariants)
    }
}

/// The `(r, s)` table of `H^n(Y_r, Z_r; Z/p^s)` with pullbacks in `r`,
/// reductions in `s`, per-`s` colimit classification and the inferred
/// `lim_s lim_r`.
pub fn completed_report(tower: &Tower, n: usize, p: u64, s_max: u32) -> Result<BiIndexedReport> {
    require_valid(tower)?;
    if s_max == 0 {
        return Err(Error::ZeroExponent);
    }
    let mut table = Vec::new();
    let mut horizontal: Vec<Vec<ModuleMap>> = Vec::new();
    let mut vertical = Vec::new();
    let mut squares = Vec::new();
    let mut classes = Vec::new();
    let mut reduction_surjective = true;
    let mut prev: Option<(Modulus, Vec<CohomologyPresentation>)> = None;
    for s in 1..=s_max {
        let md = Modulus::new(p, s)?;
        let pres = level_presentations(tower, n, md);
        let maps = level_transitions(tower, &pres)?;
        for (r, h) in pres.iter().enumerate() {
            table.push(ReportCell {
                r,
                s,
                invariants: h.invariants().clone(),
            });
        }
        if let Some((lower_md, lower)) = &prev {
            let mut down = Vec::with_capacity(pres.len());
            for (r, (hs, hl)) in pres.iter().zip(lower).enumerate() {
                let pair = tower.level(r);
                let cochains = simplicial::cochain_complex(pair, md, n + 1);
                let reduced = simplicial::cochain_complex(pair, *lower_md, n + 1);
                let dim = pair.cell_count(n);
                let reduction = ModuleMap::new(
                    ModuleInvariants::free(md, dim),
                    ModuleInvariants::free(*lower_md, dim),
                    ResidueMatrix::identity(dim, *lower_md),
                )?;
                reduction_surjective &= reduction.is_surjective() && cochains.reduce(s - 1)? == reduced;
                down.push(induced_on_cohomology(&ResidueMatrix::identity(dim, *lower_md), hs, hl)?);
            }
            let lower_maps: &Vec<ModuleMap> = horizontal.last().expect("previous s");
            for r in 0..tower.r_max() {
                let a = down[r + 1].compose(&maps[r])?;
                let b = ModuleMap::compose(&lower_maps[r], &down[r])?;
                squares.push(SquareCheck { r, s, commutes: a == b });
            }
            vertical.push(down);
        }
        let system = DirectedSystem::new(n, pres.iter().map(|h| h.invariants().clone()).collect(), maps.clone())?;
        classes.push((md, colimit_classification(&system)));
        horizontal.push(maps);
        prev = Some((md, pres));
    }
    let inferred = infer_limit(p, &classes);
    Ok(BiIndexedReport {
        degree: n,
        p,
        r_max: tower.r_max(),
        s_max,
        table,
        horizontal,
        vertical,
        squares,
        reduction_surjective,
        classifications: classes.into_iter().map(|(_, c)| c).collect(),
        inferred,
    })
}
