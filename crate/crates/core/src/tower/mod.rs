//! Towers of Galois covering pairs `(Y_r, Z_r) -> ... -> (Y_0, Z_0)`,
//! their validation, pullback covers, the `(r, s)` cohomology system and
//! the finite-level identities behind completed cohomology.

mod cover;
mod system;
mod theorem;
mod validate;

pub use cover::{cech_pullback_matrix, comparison_map, pullback_cover, PullbackCover};
pub use system::{
    cohomology_system, colimit_classification, completed_report, infer_limit, BiIndexedReport, Classification,
    DirectedSystem, GrowthProfile, LimitInference, Ratio, ReportCell, SquareCheck,
};
pub use theorem::{
    corollary_one_check, main_theorem_check, AbsoluteCell, CorollaryOneReport, ReductionCheck, TheoremCell,
    TheoremReport,
};
pub use validate::{validate_tower, TowerIssue, ValidationLevel, ValidationReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{Pair, SimplicialComplex, SimplicialMap};

/// Levels `(Y_r, Z_r)` for `r = 0..=r_max` with projections
/// `Y_{r+1} -> Y_r` and the orders `|G_0 / G_r|`.
///
/// `deck_actions[r]`, when given, lists the elements of `G_0 / G_r` as
/// vertex permutations of `Y_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTower", into = "RawTower")]
pub struct Tower {
    levels: Vec<Pair>,
    projections: Vec<SimplicialMap>,
    deck_orders: Vec<u64>,
    deck_actions: Option<Vec<Vec<SimplicialMap>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTower {
    levels: Vec<Pair>,
    projections: Vec<SimplicialMap>,
    deck_orders: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    deck_actions: Option<Vec<Vec<SimplicialMap>>>,
}

impl TryFrom<RawTower> for Tower {
    type Error = Error;
    fn try_from(raw: RawTower) -> Result<Self> {
        Tower::new(raw.levels, raw.projections, raw.deck_orders, raw.deck_actions)
    }
}

impl From<Tower> for RawTower {
    fn from(t: Tower) -> Self {
        RawTower {
            levels: t.levels,
            projections: t.projections,
            deck_orders: t.deck_orders,
            deck_actions: t.deck_actions,
        }
    }
}

impl Tower {
    /// Checks only the shape of the data; see [`validate_tower`] for the
    /// covering conditions.
    pub fn new(
        levels: Vec<Pair>,
        projections: Vec<SimplicialMap>,
        deck_orders: Vec<u64>,
        deck_actions: Option<Vec<Vec<SimplicialMap>>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidTower("no levels".into()));
        }
        if projections.len() + 1 != levels.len() {
            return Err(Error::InvalidTower(format!(
                "{} projections for {} levels",
                projections.len(),
                levels.len()
            )));
        }
        if deck_orders.len() != levels.len() {
            return Err(Error::InvalidTower(format!(
                "{} deck orders for {} levels",
                deck_orders.len(),
                levels.len()
            )));
        }
        if deck_orders[0] != 1 {
            return Err(Error::InvalidTower("deck order of the base must be 1".into()));
        }
        if let Some(actions) = &deck_actions {
            if actions.len() != levels.len() {
                return Err(Error::InvalidTower(format!(
                    "deck actions for {} of {} levels",
                    actions.len(),
                    levels.len()
                )));
            }
        }
        Ok(Tower {
            levels,
            projections,
            deck_orders,
            deck_actions,
        })
    }

    pub fn r_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn levels(&self) -> &[Pair] {
        &self.levels
    }

    pub fn level(&self, r: usize) -> &Pair {
        &self.levels[r]
    }

    pub fn base(&self) -> &SimplicialComplex {
        self.levels[0].total()
    }

    /// `Y_{r+1} -> Y_r`.
    pub fn projection(&self, r: usize) -> &SimplicialMap {
        &self.projections[r]
    }

    pub fn projections(&self) -> &[SimplicialMap] {
        &self.projections
    }

    pub fn deck_orders(&self) -> &[u64] {
        &self.deck_orders
    }

    pub fn deck_actions(&self) -> Option<&[Vec<SimplicialMap>]> {
        self.deck_actions.as_deref()
    }

    /// `Y_r -> Y_0`.
    pub fn to_base(&self, r: usize) -> SimplicialMap {
        let mut f = SimplicialMap::identity(self.levels[r].total());
        for k in (0..r).rev() {
            f = self.projections[k].compose(&f);
        }
        f
    }

    /// Levels `0..=r_max` only.
    pub fn truncate(&self, r_max: usize) -> Tower {
        let keep = r_max.min(self.r_max());
        Tower {
            levels: self.levels[..=keep].to_vec(),
            projections: self.projections[..keep].to_vec(),
            deck_orders: self.deck_orders[..=keep].to_vec(),
            deck_actions: self.deck_actions.as_ref().map(|a| a[..=keep].to_vec()),
        }
    }

    /// The same tower with every `Z_r` empty.
    pub fn absolute(&self) -> Tower {
        Tower {
            levels: self.levels.iter().map(|p| Pair::absolute(p.total().clone())).collect(),
            ..self.clone()
        }
    }

    /// The boundary tower `(Z_r, ∅)` with restricted projections and deck
    /// actions.
    pub fn boundary(&self) -> Result<Tower> {
        let levels: Vec<Pair> = self.levels.iter().map(Pair::sub_pair).collect();
        let projections = self
            .projections
            .iter()
            .zip(&levels[1..])
            .map(|(f, level)| f.restrict(level.total()))
            .collect();
        let deck_actions = self.deck_actions.as_ref().map(|actions| {
            actions
                .iter()
                .zip(&levels)
                .map(|(group, level)| group.iter().map(|g| g.restrict(level.total())).collect())
                .collect()
        });
        Tower::new(levels, projections, self.deck_orders.clone(), deck_actions)
    }
}
