use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cech::{sorting_sign, CechComplex, LocallyConstantSheaf, Presheaf, RelativeMode, Relativized, TupleIndex, TupleKind};
use crate::error::{Error, Result};
use crate::linalg::ResidueMatrix;
use crate::residue::Modulus;
use crate::simplicial::{Pair, Simplex, SimplicialComplex};
use crate::tower::Tower;

/// The preimage in `Y_r` of the star cover of `Y_0`.
///
/// Indexed by base vertices; `U^{(r)}_σ` is the disjoint union of the open
/// stars of the lifts of `σ`.
#[derive(Clone, Debug)]
pub struct PullbackCover {
    level: usize,
    base: SimplicialComplex,
    sheaf: LocallyConstantSheaf,
    meets: BTreeSet<Simplex>,
}

/// Builds `𝔘^{(r)}` and checks that every base intersection has exactly
/// `deck_orders[r]` components, each mapped isomorphically onto the base
/// intersection.
pub fn pullback_cover(tower: &Tower, r: usize, modulus: Modulus) -> Result<PullbackCover> {
    if r > tower.r_max() {
        return Err(Error::InvalidTower(format!("level {r} above r_max {}", tower.r_max())));
    }
    let pair = tower.level(r);
    let y = pair.total();
    let base = tower.base().clone();
    let pi = tower.to_base(r);
    pi.check(y, &base).map_err(|e| Error::InvalidTower(e.to_string()))?;
    let sheaf = LocallyConstantSheaf::pullback(y, pi.clone(), modulus);
    let expected = tower.deck_orders()[r] as usize;
    for sigma in base.iter() {
        let lifts = sheaf.lifts(sigma);
        if lifts.len() != expected {
            return Err(Error::InvalidTower(format!(
                "level {r}: {sigma:?} has {} lifts, expected {expected}",
                lifts.len()
            )));
        }
        let base_star: BTreeSet<&Simplex> = base.star(sigma).into_iter().collect();
        for tau in lifts {
            let star = y.star(tau);
            let images: BTreeSet<Simplex> = star.iter().map(|t| pi.image(t)).collect();
            if star.len() != base_star.len() || images.iter().collect::<BTreeSet<_>>() != base_star {
                return Err(Error::InvalidTower(format!(
                    "level {r}: the star of {tau:?} does not map isomorphically onto the star of {sigma:?}"
                )));
            }
        }
    }
    let meets = base
        .iter()
        .filter(|s| sheaf.lifts(s).iter().any(|t| pair.sub().contains(t)))
        .cloned()
        .collect();
    Ok(PullbackCover {
        level: r,
        base,
        sheaf,
        meets,
    })
}

impl PullbackCover {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn nerve(&self) -> &SimplicialComplex {
        &self.base
    }

    /// Locally constant `Z/p^s`-valued functions on the cover.
    pub fn sheaf(&self) -> &LocallyConstantSheaf {
        &self.sheaf
    }

    /// Base simplices `σ` with `U^{(r)}_σ ∩ Z_r ≠ ∅`.
    pub fn meets(&self) -> &BTreeSet<Simplex> {
        &self.meets
    }

    /// `(Z/p^s)^{Z_r}` on this cover.
    pub fn vanishing_sheaf(&self) -> Relativized<&LocallyConstantSheaf> {
        Relativized::new(&self.sheaf, self.meets.clone(), RelativeMode::Vanishing)
    }

    pub fn cech_complex(&self, tuples: Arc<TupleIndex>) -> CechComplex {
        CechComplex::with_tuples(tuples, &self.vanishing_sheaf())
    }

    pub fn tuples(&self, top: usize) -> Arc<TupleIndex> {
        Arc::new(TupleIndex::new(&self.base, TupleKind::Full, top))
    }
}

/// Pullback of Čech cochains `Č^n(𝔘^{(r)}) -> Č^n(𝔘^{(r+1)})`: a function on
/// the lifts of `σ` at level `r` is composed with the projection.
pub fn cech_pullback_matrix(
    tower: &Tower,
    lower: &PullbackCover,
    lower_cech: &CechComplex,
    upper: &PullbackCover,
    upper_cech: &CechComplex,
    n: usize,
) -> Result<ResidueMatrix> {
    let f = tower.projection(lower.level);
    let md = upper.sheaf.modulus();
    lower_cech.chain_map_to(upper_cech, n, |sigma| {
        let src = lower.sheaf.lifts(sigma);
        let dst = upper.sheaf.lifts(sigma);
        let triplets: Vec<_> = dst
            .iter()
            .enumerate()
            .filter_map(|(a, tau)| src.binary_search(&f.image(tau)).ok().map(|b| (a, b, 1)))
            .collect();
        ResidueMatrix::from_triplets(dst.len(), src.len(), md, triplets)
    })
}

/// `C^n(Y_r, Z_r) -> Č^n(𝔘^{(r)}, (Z/p^s)^{Z_r})`: on a tuple `t` with
/// distinct entries and a lift `τ` of its support, the value is
/// `sign · c(τ)`, where the sign sorts the vertices of `τ` lying over
/// `t_0, ..., t_n`.
pub fn comparison_map(pair: &Pair, cover: &PullbackCover, cech: &CechComplex, n: usize) -> ResidueMatrix {
    let md = cover.sheaf.modulus();
    let minus_one = md.neg(1);
    let pi = cover.sheaf.projection();
    let mut triplets = Vec::new();
    for (i, t) in cech.tuples().tuples(n).iter().enumerate() {
        if cech.rank(n, i) == 0 || sorting_sign(&t.indices).is_none() {
            continue;
        }
        for (a, tau) in cover.sheaf.lifts(&t.support).iter().enumerate() {
            let Some(c) = pair.cell_index(tau) else { continue };
            let over: Vec<u32> = t
                .indices
                .iter()
                .map(|&b| *tau.vertices().iter().find(|&&v| pi.apply(v) == b).expect("lift"))
                .collect();
            let odd = sorting_sign(&over).expect("distinct");
            triplets.push((cech.offset(n, i) + a, c, if odd { minus_one } else { 1 }));
        }
    }
    ResidueMatrix::from_triplets(cech.dim(n), pair.cell_count(n), md, triplets)
}
