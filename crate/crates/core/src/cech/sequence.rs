use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cech::{CechComplex, Presheaf, RelativeMode, Relativized, TupleIndex, TupleKind};
use crate::error::{Error, Result};
use crate::linalg::{ModuleInvariants, ModuleMap, ResidueMatrix};
use crate::residue::Modulus;
use crate::simplicial::{Simplex, SimplicialComplex};

/// `0 -> Č^•(F^Z) -> Č^•(F) -> Č^•(F_Z) -> 0` on one cover, in degrees
/// `0..=top`.
#[derive(Clone, Debug)]
pub struct PresheafLes {
    modulus: Modulus,
    vanishing: CechComplex,
    full: CechComplex,
    supported: CechComplex,
    inclusion: Vec<ResidueMatrix>,
    projection: Vec<ResidueMatrix>,
}

/// Builds the three complexes up to degree `n_max + 2`, enough for the long
/// exact sequence through `Ȟ^{n_max + 1}(F^Z)`.
pub fn presheaf_les<P: Presheaf>(nerve: &SimplicialComplex, f: &P, meets: &BTreeSet<Simplex>, n_max: usize) -> PresheafLes {
    let tuples = Arc::new(TupleIndex::new(nerve, TupleKind::Full, n_max + 2));
    presheaf_les_on(tuples, f, meets)
}

/// As [`presheaf_les`], on a prebuilt tuple index.
pub fn presheaf_les_on<P: Presheaf>(tuples: Arc<TupleIndex>, f: &P, meets: &BTreeSet<Simplex>) -> PresheafLes {
    let top = tuples.top();
    let fv = Relativized::new(f, meets.clone(), RelativeMode::Vanishing);
    let fs = Relativized::new(f, meets.clone(), RelativeMode::Supported);
    let vanishing = CechComplex::with_tuples(tuples.clone(), &fv);
    let full = CechComplex::with_tuples(tuples.clone(), f);
    let supported = CechComplex::with_tuples(tuples, &fs);
    let md = f.modulus();
    let identity_block = |s: &Simplex| ResidueMatrix::identity(f.rank(s), md);
    let inclusion = (0..=top)
        .map(|n| vanishing.chain_map_to(&full, n, identity_block).expect("same tuples"))
        .collect();
    let projection = (0..=top)
        .map(|n| full.chain_map_to(&supported, n, identity_block).expect("same tuples"))
        .collect();
    PresheafLes {
        modulus: md,
        vanishing,
        full,
        supported,
        inclusion,
        projection,
    }
}

impl PresheafLes {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn top(&self) -> usize {
        self.full.cochains().top()
    }

    /// `Č^•(F^Z)`.
    pub fn vanishing(&self) -> &CechComplex {
        &self.vanishing
    }

    /// `Č^•(F)`.
    pub fn full(&self) -> &CechComplex {
        &self.full
    }

    /// `Č^•(F_Z)`.
    pub fn supported(&self) -> &CechComplex {
        &self.supported
    }

    /// `Č^n(F^Z) -> Č^n(F)`.
    pub fn inclusion(&self, n: usize) -> &ResidueMatrix {
        &self.inclusion[n]
    }

    /// `Č^n(F) -> Č^n(F_Z)`.
    pub fn projection(&self, n: usize) -> &ResidueMatrix {
        &self.projection[n]
    }

    /// Checks degreewise exactness: `q ∘ i = 0`, `i` injective, `q`
    /// surjective, and `|Č^n(F)| = |Č^n(F^Z)| · |Č^n(F_Z)|`.
    pub fn check_levelwise_exact(&self) -> Result<()> {
        let md = self.modulus;
        for n in 0..=self.top() {
            let (a, b, c) = (self.vanishing.dim(n), self.full.dim(n), self.supported.dim(n));
            let fail = |what: &str| Error::Contract(format!("degree {n}: {what}"));
            if a + b + c == 0 {
                continue;
            }
            if b != a + c {
                return Err(fail("cardinalities do not multiply"));
            }
            if !self.projection[n].checked_mul(&self.inclusion[n])?.is_zero() {
                return Err(fail("projection after inclusion is nonzero"));
            }
            if coordinate_split(&self.inclusion[n], &self.projection[n]) {
                continue;
            }
            let i = ModuleMap::new(ModuleInvariants::free(md, a), ModuleInvariants::free(md, b), self.inclusion[n].clone())?;
            let q = ModuleMap::new(ModuleInvariants::free(md, b), ModuleInvariants::free(md, c), self.projection[n].clone())?;
            if !i.is_injective() {
                return Err(fail("inclusion is not injective"));
            }
            if !q.is_surjective() {
                return Err(fail("projection is not surjective"));
            }
            if q.kernel_log_order() != i.image_log_order() {
                return Err(fail("kernel of projection differs from image of inclusion"));
            }
        }
        // Both maps must be cochain maps.
        for n in 0..self.top() {
            let lhs = self.full.cochains().differential(n).checked_mul(&self.inclusion[n])?;
            let rhs = self.inclusion[n + 1].checked_mul(self.vanishing.cochains().differential(n))?;
            let lq = self.supported.cochains().differential(n).checked_mul(&self.projection[n])?;
            let rq = self.projection[n + 1].checked_mul(self.full.cochains().differential(n))?;
            if lhs != rhs || lq != rq {
                return Err(Error::Contract(format!("degree {n}: maps do not commute with d")));
            }
        }
        Ok(())
    }
}

/// Whether `i` sends basis vectors to distinct basis vectors, `q` sends
/// distinct basis vectors onto the target basis, and the two sets of basis
/// vectors partition the middle term. Then `0 -> A -> B -> C -> 0` is split
/// exact without any elimination.
fn coordinate_split(i: &ResidueMatrix, q: &ResidueMatrix) -> bool {
    let b = i.rows();
    let mut owner = vec![0u8; b];
    let mut seen_cols = vec![false; i.cols()];
    for (r, c, v) in i.entries() {
        if v != 1 || seen_cols[c] || owner[r] != 0 {
            return false;
        }
        seen_cols[c] = true;
        owner[r] = 1;
    }
    let mut seen_rows = vec![false; q.rows()];
    for (r, c, v) in q.entries() {
        if v != 1 || seen_rows[r] || owner[c] != 0 {
            return false;
        }
        seen_rows[r] = true;
        owner[c] = 2;
    }
    seen_cols.iter().all(|&x| x) && seen_rows.iter().all(|&x| x) && owner.iter().all(|&o| o != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::ConstantSheaf;

    fn z(p: u64, s: u32) -> Modulus {
        Modulus::new(p, s).unwrap()
    }

    #[test]
    fn degenerate_cases() {
        let m = z(2, 2);
        let x = SimplicialComplex::from_maximal([vec![0, 1], vec![1, 2]]).unwrap();
        let f = ConstantSheaf::new(m);
        let none = presheaf_les(&x, &f, &BTreeSet::new(), 1);
        none.check_levelwise_exact().unwrap();
        for n in 0..none.top() {
            assert_eq!(none.vanishing().cochains().differential(n), none.full().cochains().differential(n));
            assert_eq!(none.supported().dim(n), 0);
        }
        let all: BTreeSet<Simplex> = x.iter().cloned().collect();
        let every = presheaf_les(&x, &f, &all, 1);
        every.check_levelwise_exact().unwrap();
        for n in 0..=every.top() {
            assert_eq!(every.vanishing().dim(n), 0);
            assert_eq!(every.supported().dim(n), every.full().dim(n));
        }
    }

    #[test]
    fn interval_endpoints() {
        let m = z(2, 2);
        let i = SimplicialComplex::from_maximal([vec![0, 1]]).unwrap();
        let ends: BTreeSet<Simplex> = [Simplex::vertex(0), Simplex::vertex(1)].into();
        let les = presheaf_les(&i, &ConstantSheaf::new(m), &ends, 1);
        les.check_levelwise_exact().unwrap();
        assert_eq!(les.supported().cohomology(0).unwrap().invariants().exponents(), &[2, 2]);
        assert_eq!(les.vanishing().cohomology(1).unwrap().invariants().exponents(), &[2]);
    }

    #[test]
    fn coordinate_split_shape() {
        let m = z(3, 1);
        let i = ResidueMatrix::from_i64_rows(&[&[0], &[1], &[0]], m);
        let q = ResidueMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 0, 1]], m);
        assert!(coordinate_split(&i, &q));
        // Overlapping supports, a non-unit entry, a column missed by both.
        let q2 = ResidueMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 0, 1]], m);
        assert!(!coordinate_split(&i, &q2));
        let i2 = ResidueMatrix::from_i64_rows(&[&[0], &[2], &[0]], m);
        assert!(!coordinate_split(&i2, &q));
        let q3 = ResidueMatrix::from_i64_rows(&[&[1, 0, 0]], m);
        assert!(!coordinate_split(&i, &q3));
    }
}
