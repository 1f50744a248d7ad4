use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::simplicial::{check_pair_map, Simplex, SimplicialComplex, SimplicialMap, Vertex};
use crate::tower::Tower;

/// How much of the tower data could be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationLevel {
    /// Covering conditions on the projections only.
    CoveringOnly,
    /// Covering conditions plus the deck-group structure and equivariance.
    WithDeckActions,
}

/// One violated condition, located at a level and, where possible, a simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerIssue {
    pub level: usize,
    pub condition: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplex: Option<Vec<Vertex>>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub level: ValidationLevel,
    pub issues: Vec<TowerIssue>,
    /// Informational: whether `Z_{r+1}` is the full preimage of `Z_r`, per
    /// projection.
    pub full_preimage: Vec<bool>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

struct Issues(Vec<TowerIssue>);

impl Issues {
    fn push(&mut self, level: usize, condition: &'static str, simplex: Option<&Simplex>, detail: String) {
        self.0.push(TowerIssue {
            level,
            condition,
            simplex: simplex.map(|s| s.vertices().to_vec()),
            detail,
        });
    }
}

/// Checks that each projection is a simplicial covering map of pairs with
/// constant fibre size `deck_orders[r+1] / deck_orders[r]`, and, when deck
/// actions are given, that they form groups of the stated orders acting
/// simply transitively on fibres over the base, compatibly with the
/// projections.
pub fn validate_tower(tower: &Tower) -> ValidationReport {
    let mut issues = Issues(Vec::new());
    let mut full_preimage = Vec::new();
    let orders = tower.deck_orders();
    let mut maps_ok = true;
    for r in 0..tower.r_max() {
        let (upper, lower) = (tower.level(r + 1), tower.level(r));
        let f = tower.projection(r);
        if let Err(e) = check_pair_map(f, upper, lower) {
            issues.push(r + 1, "simplicial map of pairs", None, e.to_string());
            maps_ok = false;
            full_preimage.push(false);
            continue;
        }
        if orders[r] == 0 || orders[r + 1] % orders[r] != 0 {
            issues.push(
                r + 1,
                "deck orders",
                None,
                format!("{} does not divide {}", orders[r], orders[r + 1]),
            );
            full_preimage.push(false);
            continue;
        }
        let ratio = (orders[r + 1] / orders[r]) as usize;
        check_covering(&mut issues, r + 1, upper.total(), lower.total(), f, ratio);
        full_preimage.push(upper.total().iter().all(|t| {
            !lower.sub().contains(&f.image(t)) || upper.sub().contains(t)
        }));
    }
    let level = match tower.deck_actions() {
        Some(actions) if maps_ok => {
            check_deck_actions(&mut issues, tower, actions);
            ValidationLevel::WithDeckActions
        }
        Some(_) => {
            issues.push(0, "deck actions", None, "skipped: projections are not simplicial".into());
            ValidationLevel::WithDeckActions
        }
        None => ValidationLevel::CoveringOnly,
    };
    ValidationReport {
        level,
        issues: issues.0,
        full_preimage,
    }
}

fn check_covering(
    issues: &mut Issues,
    level: usize,
    upper: &SimplicialComplex,
    lower: &SimplicialComplex,
    f: &SimplicialMap,
    ratio: usize,
) {
    let mut fibre: HashMap<Simplex, usize> = HashMap::new();
    let mut seen: HashSet<(Vertex, Simplex)> = HashSet::new();
    for tau in upper.iter() {
        let Some((img, _)) = f.oriented_image(tau) else {
            issues.push(level, "star-injective", Some(tau), "projection collapses this simplex".into());
            continue;
        };
        for &w in tau.vertices() {
            if !seen.insert((w, img.clone())) {
                issues.push(
                    level,
                    "star-injective",
                    Some(tau),
                    format!("two simplices in the star of {w} map to {img:?}"),
                );
            }
        }
        *fibre.entry(img).or_default() += 1;
    }
    for sigma in lower.iter() {
        let k = fibre.get(sigma).copied().unwrap_or(0);
        if k != ratio {
            let condition = if k == 0 { "surjective" } else { "fibre cardinality" };
            issues.push(level, condition, Some(sigma), format!("{k} lifts, expected {ratio}"));
        }
    }
}

fn is_automorphism(g: &SimplicialMap, x: &SimplicialComplex) -> bool {
    if g.check(x, x).is_err() {
        return false;
    }
    let images: HashSet<Vertex> = x.vertex_ids().into_iter().map(|v| g.apply(v)).collect();
    images.len() == x.count(0)
}

fn check_deck_actions(issues: &mut Issues, tower: &Tower, actions: &[Vec<SimplicialMap>]) {
    let orders = tower.deck_orders();
    for (r, group) in actions.iter().enumerate() {
        let pair = tower.level(r);
        let y = pair.total();
        if group.len() as u64 != orders[r] {
            issues.push(r, "deck group order", None, format!("{} elements, expected {}", group.len(), orders[r]));
            continue;
        }
        if y.is_empty() {
            continue;
        }
        let mut broken = false;
        for (i, g) in group.iter().enumerate() {
            if !is_automorphism(g, y) {
                issues.push(r, "deck automorphism", None, format!("element {i} is not an automorphism of Y_{r}"));
                broken = true;
            } else if !is_automorphism(&g.restrict(pair.sub()), pair.sub()) {
                issues.push(r, "deck automorphism", None, format!("element {i} does not preserve Z_{r}"));
                broken = true;
            }
        }
        if broken {
            continue;
        }
        let index: HashMap<&SimplicialMap, usize> = group.iter().enumerate().map(|(i, g)| (g, i)).collect();
        if index.len() != group.len() {
            issues.push(r, "deck group", None, "repeated elements".into());
            continue;
        }
        if !index.contains_key(&SimplicialMap::identity(y)) {
            issues.push(r, "deck group", None, "identity missing".into());
        }
        'closure: for g in group {
            for h in group {
                if !index.contains_key(&g.compose(h)) {
                    issues.push(r, "deck group", None, "not closed under composition".into());
                    break 'closure;
                }
            }
        }
        let to_base = tower.to_base(r);
        for (i, g) in group.iter().enumerate() {
            if to_base.compose(g) != to_base {
                issues.push(r, "deck transformation", None, format!("element {i} does not commute with Y_{r} -> Y_0"));
            }
        }
        for (base_v, fibre) in to_base.fibres() {
            let x = fibre[0];
            let orbit: HashSet<Vertex> = group.iter().map(|g| g.apply(x)).collect();
            let fibre_set: HashSet<Vertex> = fibre.iter().copied().collect();
            if fibre.len() != group.len() || orbit != fibre_set {
                issues.push(
                    r,
                    "simply transitive",
                    Some(&Simplex::vertex(base_v)),
                    format!("fibre of size {} under a group of order {}", fibre.len(), group.len()),
                );
            }
        }
        if r == 0 {
            continue;
        }
        // Equivariance: each g on Y_r descends to some h on Y_{r-1}; the
        // descent is onto with kernel the deck group of Y_r -> Y_{r-1}.
        let lower = &actions[r - 1];
        if lower.len() as u64 != orders[r - 1] {
            continue;
        }
        let f = tower.projection(r - 1);
        let mut hit = vec![false; lower.len()];
        let mut kernel = 0u64;
        let lower_id = SimplicialMap::identity(tower.level(r - 1).total());
        for (i, g) in group.iter().enumerate() {
            let fg = f.compose(g);
            match lower.iter().position(|h| h.compose(f) == fg) {
                Some(j) => {
                    hit[j] = true;
                    if lower[j] == lower_id {
                        kernel += 1;
                    }
                }
                None => issues.push(r, "equivariance", None, format!("element {i} does not descend to Y_{}", r - 1)),
            }
        }
        if hit.iter().any(|&h| !h) {
            issues.push(r, "equivariance", None, "descent to the lower deck group is not onto".into());
        }
        if kernel != orders[r] / orders[r - 1] {
            issues.push(
                r,
                "equivariance",
                None,
                format!("{kernel} elements act trivially downstairs, expected {}", orders[r] / orders[r - 1]),
            );
        }
    }
}
