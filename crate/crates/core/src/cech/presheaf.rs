use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::ResidueMatrix;
use crate::residue::Modulus;
use crate::simplicial::{Simplex, SimplicialComplex, SimplicialMap};

/// A presheaf of free `Z/p^s`-modules on the intersections of a cover.
///
/// Intersections are named by their nerve simplex `σ` (the deduplicated
/// index set); `U_σ ⊆ U_ρ` whenever `ρ ⊆ σ`.
pub trait Presheaf {
    fn modulus(&self) -> Modulus;

    /// Rank of `F(U_σ)`.
    fn rank(&self, sigma: &Simplex) -> usize;

    /// `F(U_face) -> F(U_σ)` as a `rank(σ) × rank(face)` matrix.
    fn restriction(&self, face: &Simplex, sigma: &Simplex) -> ResidueMatrix;
}

/// Locally constant functions on a cover whose intersections are all
/// connected, such as the open-star cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantSheaf {
    modulus: Modulus,
}

impl ConstantSheaf {
    pub fn new(modulus: Modulus) -> Self {
        ConstantSheaf { modulus }
    }
}

impl Presheaf for ConstantSheaf {
    fn modulus(&self) -> Modulus {
        self.modulus
    }

    fn rank(&self, _: &Simplex) -> usize {
        1
    }

    fn restriction(&self, _: &Simplex, _: &Simplex) -> ResidueMatrix {
        ResidueMatrix::identity(1, self.modulus)
    }
}

/// Locally constant functions on the preimage of a star cover under a
/// covering map `π: Y -> X`.
///
/// The preimage of `st(σ)` is the disjoint union of the open stars of the
/// lifts of `σ`, so `F(U_σ)` is free on those lifts. Restriction sends a
/// lift of `σ` to the face lying over the smaller simplex.
#[derive(Clone, Debug)]
pub struct LocallyConstantSheaf {
    modulus: Modulus,
    projection: SimplicialMap,
    lifts: HashMap<Simplex, Vec<Simplex>>,
}

impl LocallyConstantSheaf {
    /// `projection` maps `total` onto the nerve complex.
    pub fn pullback(total: &SimplicialComplex, projection: SimplicialMap, modulus: Modulus) -> Self {
        let mut lifts: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
        for tau in total.iter() {
            if let Some((img, _)) = projection.oriented_image(tau) {
                lifts.entry(img).or_default().push(tau.clone());
            }
        }
        for l in lifts.values_mut() {
            l.sort();
        }
        LocallyConstantSheaf {
            modulus,
            projection,
            lifts,
        }
    }

    /// Lifts of `σ`, sorted; these index the basis of `F(U_σ)`.
    pub fn lifts(&self, sigma: &Simplex) -> &[Simplex] {
        self.lifts.get(sigma).map_or(&[], |v| v.as_slice())
    }

    pub fn projection(&self) -> &SimplicialMap {
        &self.projection
    }

    /// The face of the lift `tau` lying over `face`.
    pub fn face_over(&self, tau: &Simplex, face: &Simplex) -> Simplex {
        let v: Vec<u32> = tau
            .vertices()
            .iter()
            .copied()
            .filter(|&v| face.contains_vertex(self.projection.apply(v)))
            .collect();
        Simplex::new(v).expect("face is nonempty")
    }
}

impl Presheaf for LocallyConstantSheaf {
    fn modulus(&self) -> Modulus {
        self.modulus
    }

    fn rank(&self, sigma: &Simplex) -> usize {
        self.lifts(sigma).len()
    }

    fn restriction(&self, face: &Simplex, sigma: &Simplex) -> ResidueMatrix {
        let source = self.lifts(face);
        let target = self.lifts(sigma);
        let triplets = target.iter().enumerate().filter_map(|(r, tau)| {
            let f = self.face_over(tau, face);
            source.binary_search(&f).ok().map(|c| (r, c, 1))
        });
        ResidueMatrix::from_triplets(target.len(), source.len(), self.modulus, triplets.collect::<Vec<_>>())
    }
}

/// Which of the two modifications along a subspace `Z` to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelativeMode {
    /// `F^Z`: zero on intersections meeting `Z`.
    Vanishing,
    /// `F_Z`: zero on intersections missing `Z`.
    Supported,
}

/// `F^Z` or `F_Z` for a presheaf `F`.
///
/// `meets` lists the nerve simplices `σ` with `U_σ ∩ Z ≠ ∅`. For the star
/// cover of `(X, Z)` that is exactly the simplices of `Z`.
#[derive(Clone, Debug)]
pub struct Relativized<P> {
    base: P,
    meets: BTreeSet<Simplex>,
    mode: RelativeMode,
}

impl<P: Presheaf> Relativized<P> {
    pub fn new(base: P, meets: BTreeSet<Simplex>, mode: RelativeMode) -> Self {
        Relativized { base, meets, mode }
    }

    pub fn base(&self) -> &P {
        &self.base
    }

    pub fn mode(&self) -> RelativeMode {
        self.mode
    }

    pub fn meets(&self, sigma: &Simplex) -> bool {
        self.meets.contains(sigma)
    }

    /// Whether `F(U_σ)` survives the modification.
    pub fn keeps(&self, sigma: &Simplex) -> bool {
        match self.mode {
            RelativeMode::Vanishing => !self.meets(sigma),
            RelativeMode::Supported => self.meets(sigma),
        }
    }
}

impl<P: Presheaf> Presheaf for Relativized<P> {
    fn modulus(&self) -> Modulus {
        self.base.modulus()
    }

    fn rank(&self, sigma: &Simplex) -> usize {
        if self.keeps(sigma) {
            self.base.rank(sigma)
        } else {
            0
        }
    }

    fn restriction(&self, face: &Simplex, sigma: &Simplex) -> ResidueMatrix {
        if self.keeps(face) && self.keeps(sigma) {
            self.base.restriction(face, sigma)
        } else {
            ResidueMatrix::zeros(self.rank(sigma), self.rank(face), self.modulus())
        }
    }
}

impl<P: Presheaf + ?Sized> Presheaf for &P {
    fn modulus(&self) -> Modulus {
        (**self).modulus()
    }
    fn rank(&self, sigma: &Simplex) -> usize {
        (**self).rank(sigma)
    }
    fn restriction(&self, face: &Simplex, sigma: &Simplex) -> ResidueMatrix {
        (**self).restriction(face, sigma)
    }
}

/// Identity and composition of restrictions over every chain `ρ ⊆ σ ⊆ τ`
/// of nerve simplices.
pub fn check_presheaf_axioms<P: Presheaf + ?Sized>(nerve: &SimplicialComplex, f: &P) -> Result<()> {
    for tau in nerve.iter() {
        let id = f.restriction(tau, tau);
        if id != ResidueMatrix::identity(f.rank(tau), f.modulus()) {
            return Err(Error::Contract(format!("restriction {tau:?} -> {tau:?} is not the identity")));
        }
        let faces: Vec<Simplex> = tau.all_faces().collect();
        for sigma in &faces {
            let outer = f.restriction(sigma, tau);
            if outer.rows() != f.rank(tau) || outer.cols() != f.rank(sigma) {
                return Err(Error::Contract(format!("restriction {sigma:?} -> {tau:?} has the wrong shape")));
            }
            for rho in faces.iter().filter(|r| r.is_face_of(sigma)) {
                let two_step = outer.checked_mul(&f.restriction(rho, sigma))?;
                if two_step != f.restriction(rho, tau) {
                    return Err(Error::Contract(format!(
                        "restrictions {rho:?} -> {sigma:?} -> {tau:?} do not compose"
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u64, s: u32) -> Modulus {
        Modulus::new(p, s).unwrap()
    }

    fn cycle(k: u32) -> SimplicialComplex {
        SimplicialComplex::from_maximal((0..k).map(|i| vec![i, (i + 1) % k])).unwrap()
    }

    #[test]
    fn constant_and_relativized_axioms() {
        let m = z(3, 2);
        let x = SimplicialComplex::from_maximal([vec![0, 1, 2], vec![2, 3]]).unwrap();
        check_presheaf_axioms(&x, &ConstantSheaf::new(m)).unwrap();
        let z_sub: BTreeSet<Simplex> = SimplicialComplex::from_maximal([vec![2, 3]]).unwrap().iter().cloned().collect();
        for mode in [RelativeMode::Vanishing, RelativeMode::Supported] {
            let f = Relativized::new(ConstantSheaf::new(m), z_sub.clone(), mode);
            check_presheaf_axioms(&x, &f).unwrap();
        }
    }

    #[test]
    fn pullback_along_double_cover() {
        let m = z(2, 2);
        let base = cycle(3);
        let cover = cycle(6);
        let pi = SimplicialMap::from_fn(&cover, &base, |v| v % 3).unwrap();
        let f = LocallyConstantSheaf::pullback(&cover, pi, m);
        for s in base.iter() {
            assert_eq!(f.rank(s), 2);
        }
        check_presheaf_axioms(&base, &f).unwrap();
        let e = Simplex::new(vec![0, 1]).unwrap();
        let r = f.restriction(&Simplex::vertex(0), &e);
        assert_eq!(r.to_dense(), vec![vec![1, 0], vec![0, 1]]);
    }

    struct Broken(Modulus);
    impl Presheaf for Broken {
        fn modulus(&self) -> Modulus {
            self.0
        }
        fn rank(&self, _: &Simplex) -> usize {
            1
        }
        fn restriction(&self, face: &Simplex, sigma: &Simplex) -> ResidueMatrix {
            let v = if face == sigma { 1 } else { 2 };
            ResidueMatrix::from_i64_rows(&[&[v]], self.0)
        }
    }

    #[test]
    fn axiom_violation_is_reported() {
        let x = SimplicialComplex::from_maximal([vec![0, 1, 2]]).unwrap();
        assert!(check_presheaf_axioms(&x, &Broken(z(5, 1))).is_err());
    }
}
