//! Finite simplicial complexes and pairs, relative cochains over `Z/p^s`,
//! cohomology with representatives, and induced maps.

mod complex;
mod map;

pub use complex::{Pair, Simplex, SimplicialComplex, Vertex};
pub use map::SimplicialMap;

use crate::cochain::{induced_on_cohomology, CochainComplex, CohomologyPresentation};
use crate::error::{Error, Result};
use crate::linalg::{ModuleMap, ResidueMatrix};
use crate::residue::Modulus;

/// `d^n: C^n(X, Z) -> C^{n+1}(X, Z)` with signs `(-1)^i` for the face
/// omitting the `i`-th vertex.
pub fn coboundary_matrix(pair: &Pair, n: usize, modulus: Modulus) -> ResidueMatrix {
    let rows = pair.cells(n + 1);
    let minus_one = modulus.neg(1);
    let mut triplets = Vec::with_capacity(rows.len() * (n + 2));
    for (r, tau) in rows.iter().enumerate() {
        for i in 0..=n + 1 {
            let face = tau.face(i).expect("positive dimension");
            if let Some(c) = pair.cell_index(&face) {
                triplets.push((r, c, if i % 2 == 0 { 1 } else { minus_one }));
            }
        }
    }
    ResidueMatrix::from_triplets(rows.len(), pair.cell_count(n), modulus, triplets)
}

/// `C^0(X, Z) -> ... -> C^top(X, Z)`.
pub fn cochain_complex(pair: &Pair, modulus: Modulus, top: usize) -> CochainComplex {
    let dims = (0..=top).map(|n| pair.cell_count(n)).collect();
    let differentials = (0..top).map(|n| coboundary_matrix(pair, n, modulus)).collect();
    CochainComplex::new(modulus, dims, differentials).expect("consistent shapes")
}

/// `H^n(X, Z; Z/p^s)`; with `Z` empty, absolute cohomology.
pub fn cohomology(pair: &Pair, n: usize, modulus: Modulus) -> CohomologyPresentation {
    let outgoing = coboundary_matrix(pair, n, modulus);
    let incoming = if n == 0 {
        ResidueMatrix::zeros(pair.cell_count(0), 0, modulus)
    } else {
        coboundary_matrix(pair, n - 1, modulus)
    };
    CohomologyPresentation::from_differentials(n, &incoming, &outgoing).expect("d^n d^{n-1} = 0")
}

/// `f^#: C^n(codomain) -> C^n(domain)`.
///
/// Degenerate images pull back to zero; otherwise the entry is the sign of
/// the vertex-sorting permutation. Requires `f(Z_domain) ⊆ Z_codomain`.
pub fn pullback_matrix(
    f: &SimplicialMap,
    domain: &Pair,
    codomain: &Pair,
    n: usize,
    modulus: Modulus,
) -> Result<ResidueMatrix> {
    check_pair_map(f, domain, codomain)?;
    let minus_one = modulus.neg(1);
    let mut triplets = Vec::new();
    for (r, sigma) in domain.cells(n).iter().enumerate() {
        if let Some((img, negative)) = f.oriented_image(sigma) {
            if let Some(c) = codomain.cell_index(&img) {
                triplets.push((r, c, if negative { minus_one } else { 1 }));
            }
        }
    }
    Ok(ResidueMatrix::from_triplets(
        domain.cell_count(n),
        codomain.cell_count(n),
        modulus,
        triplets,
    ))
}

pub fn check_pair_map(f: &SimplicialMap, domain: &Pair, codomain: &Pair) -> Result<()> {
    f.check(domain.total(), codomain.total())?;
    if let Some(s) = domain.sub().iter().find(|s| !codomain.sub().contains(&f.image(s))) {
        return Err(Error::InvalidMap(format!(
            "subcomplex simplex {s:?} maps outside the target subcomplex"
        )));
    }
    Ok(())
}

/// `f^*: H^n(codomain) -> H^n(domain)` in generator coordinates.
pub fn induced_map(
    f: &SimplicialMap,
    domain: &Pair,
    codomain: &Pair,
    codomain_h: &CohomologyPresentation,
    domain_h: &CohomologyPresentation,
) -> Result<ModuleMap> {
    if codomain_h.degree() != domain_h.degree() {
        return Err(Error::Contract("presentations in different degrees".into()));
    }
    let chain = pullback_matrix(f, domain, codomain, codomain_h.degree(), codomain_h.modulus())?;
    induced_on_cohomology(&chain, codomain_h, domain_h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(p: u64, s: u32) -> Modulus {
        Modulus::new(p, s).unwrap()
    }

    fn cycle(k: u32) -> SimplicialComplex {
        SimplicialComplex::from_maximal((0..k).map(|i| vec![i, (i + 1) % k])).unwrap()
    }

    fn exps(pair: &Pair, n: usize, m: Modulus) -> Vec<u32> {
        cohomology(pair, n, m).invariants().exponents().to_vec()
    }

    #[test]
    fn hollow_triangle() {
        let m = z(3, 2);
        let t = Pair::absolute(cycle(3));
        let d0 = coboundary_matrix(&t, 0, m);
        assert_eq!((d0.rows(), d0.cols()), (3, 3));
        assert_eq!(crate::linalg::smith_normal_form(&d0).rank(), 2);
        assert_eq!(exps(&t, 0, m), vec![2]);
        assert_eq!(exps(&t, 1, m), vec![2]);
        assert!(coboundary_matrix(&t, 4, m).rows() == 0);
    }

    #[test]
    fn interval_relative_to_endpoints() {
        let m = z(2, 3);
        let i = SimplicialComplex::from_maximal([vec![0, 1]]).unwrap();
        let p = Pair::with_sub(i, [vec![0], vec![1]]).unwrap();
        let d0 = coboundary_matrix(&p, 0, m);
        assert_eq!((d0.rows(), d0.cols()), (1, 0));
        assert_eq!(exps(&p, 1, m), vec![3]);
        assert!(exps(&p, 0, m).is_empty());
    }

    #[test]
    fn point_has_only_h0() {
        let m = z(5, 2);
        let p = Pair::absolute(SimplicialComplex::from_maximal([vec![7]]).unwrap());
        assert_eq!(exps(&p, 0, m), vec![2]);
        for n in 1..4 {
            assert!(exps(&p, n, m).is_empty());
        }
    }

    #[test]
    fn two_circles() {
        let m = z(2, 2);
        let two = Pair::absolute(cycle(3).product_with_finite_set(2).unwrap());
        assert_eq!(exps(&two, 0, m), vec![2, 2]);
        assert_eq!(exps(&two, 1, m), vec![2, 2]);
    }

    #[test]
    fn degree_p_covering_acts_by_p_on_h1() {
        for p in [2u32, 3] {
            let m = z(p as u64, 3);
            let base = Pair::absolute(cycle(3));
            let cover = Pair::absolute(cycle(3 * p));
            let f = SimplicialMap::from_fn(cover.total(), base.total(), |v| v % 3).unwrap();
            let hb = cohomology(&base, 1, m);
            let hc = cohomology(&cover, 1, m);
            let map = induced_map(&f, &cover, &base, &hb, &hc).unwrap();
            assert_eq!(map.matrix().to_dense(), vec![vec![p as u64 % m.order()]], "p = {p}");
            // On H^0 the pullback is the identity.
            let h0 = induced_map(&f, &cover, &base, &cohomology(&base, 0, m), &cohomology(&cover, 0, m)).unwrap();
            assert!(h0.is_isomorphism());
        }
    }

    #[test]
    fn identity_and_constant_maps() {
        let m = z(3, 2);
        let c = Pair::absolute(cycle(4));
        let h = cohomology(&c, 1, m);
        let id = induced_map(&SimplicialMap::identity(c.total()), &c, &c, &h, &h).unwrap();
        assert_eq!(id, ModuleMap::identity(h.invariants().clone()));
        let k = SimplicialMap::from_fn(c.total(), c.total(), |_| 0).unwrap();
        assert!(induced_map(&k, &c, &c, &h, &h).unwrap().is_zero());
    }

    #[test]
    fn reflection_acts_by_minus_one() {
        let m = z(5, 1);
        let c = Pair::absolute(cycle(5));
        let h = cohomology(&c, 1, m);
        let refl = SimplicialMap::from_fn(c.total(), c.total(), |v| (5 - v) % 5).unwrap();
        let map = induced_map(&refl, &c, &c, &h, &h).unwrap();
        assert_eq!(map.matrix().get(0, 0), 4);
    }

    #[test]
    fn functoriality_along_a_tower_of_cycles() {
        let m = z(2, 3);
        let y: Vec<Pair> = [3, 6, 12].iter().map(|&k| Pair::absolute(cycle(k))).collect();
        let f1 = SimplicialMap::from_fn(y[1].total(), y[0].total(), |v| v % 3).unwrap();
        let f2 = SimplicialMap::from_fn(y[2].total(), y[1].total(), |v| v % 6).unwrap();
        let h: Vec<_> = y.iter().map(|p| cohomology(p, 1, m)).collect();
        let a = induced_map(&f1, &y[1], &y[0], &h[0], &h[1]).unwrap();
        let b = induced_map(&f2, &y[2], &y[1], &h[1], &h[2]).unwrap();
        let gf = induced_map(&f1.compose(&f2), &y[2], &y[0], &h[0], &h[2]).unwrap();
        assert_eq!(b.compose(&a).unwrap(), gf);
    }

    #[test]
    fn maps_must_respect_subcomplexes() {
        let m = z(2, 1);
        let i = SimplicialComplex::from_maximal([vec![0, 1]]).unwrap();
        let pi = Pair::with_sub(i.clone(), [vec![0]]).unwrap();
        let swap = SimplicialMap::from_fn(&i, &i, |v| 1 - v).unwrap();
        assert!(pullback_matrix(&swap, &pi, &pi, 0, m).is_err());
        assert!(pullback_matrix(&SimplicialMap::identity(&i), &pi, &pi, 0, m).is_ok());
    }

    #[test]
    fn filled_simplex_is_acyclic() {
        for (p, s) in [(2, 1), (2, 4), (3, 2), (5, 3)] {
            let m = z(p, s);
            let simplex = Pair::absolute(SimplicialComplex::from_maximal([vec![0, 1, 2, 3]]).unwrap());
            assert_eq!(exps(&simplex, 0, m), vec![s]);
            for n in 1..4 {
                assert!(exps(&simplex, n, m).is_empty());
            }
        }
    }

    #[test]
    fn sphere_euler_characteristic() {
        let m = z(3, 2);
        let boundary = SimplicialComplex::from_maximal([vec![0, 1, 2, 3]])
            .unwrap()
            .iter()
            .filter(|s| s.dim() == 2)
            .map(|s| s.vertices().to_vec())
            .collect::<Vec<_>>();
        let s2 = Pair::absolute(SimplicialComplex::from_maximal(boundary).unwrap());
        let h: Vec<_> = (0..3).map(|n| exps(&s2, n, m)).collect();
        assert_eq!(h, vec![vec![2], vec![], vec![2]]);
        let chi: i64 = h
            .iter()
            .enumerate()
            .map(|(n, e)| {
                let r = e.iter().sum::<u32>() as i64 / 2;
                if n % 2 == 0 { r } else { -r }
            })
            .sum();
        assert_eq!(chi, s2.euler_characteristic());
    }

    fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
        prop::collection::vec(prop::collection::btree_set(0u32..7, 1..=4), 1..8).prop_map(|sets| {
            SimplicialComplex::from_maximal(sets.into_iter().map(|s| s.into_iter().collect::<Vec<_>>())).unwrap()
        })
    }

    proptest! {
        #[test]
        fn coboundary_squares_to_zero(x in arb_complex(), sub_size in 0usize..3) {
            let m = z(3, 2);
            let sub: Vec<Vec<u32>> = x.maximal_simplices().into_iter().take(sub_size).map(|s| s.vertices().to_vec()).collect();
            let pair = Pair::with_sub(x, sub).unwrap();
            let c = cochain_complex(&pair, m, 4);
            prop_assert!(c.squares_to_zero());
        }

        #[test]
        fn relative_with_empty_sub_is_absolute(x in arb_complex()) {
            let m = z(2, 2);
            let a = Pair::absolute(x.clone());
            let r = Pair::new(x, SimplicialComplex::empty()).unwrap();
            for n in 0..3 {
                prop_assert_eq!(coboundary_matrix(&a, n, m), coboundary_matrix(&r, n, m));
            }
        }

        #[test]
        fn cones_are_acyclic(x in arb_complex(), p in prop::sample::select(vec![2u64, 3, 5]), s in 1u32..=4) {
            let m = z(p, s);
            let cone = Pair::absolute(x.cone(100).unwrap());
            prop_assert_eq!(exps(&cone, 0, m), vec![s]);
            for n in 1..4 {
                prop_assert!(exps(&cone, n, m).is_empty());
            }
        }
    }
}
