use std::collections::BTreeSet;

use serde::Serialize;

use crate::cech::{star_vanishing_sheaf, CechComplex, TupleKind};
use crate::cochain::induced_on_cohomology;
use crate::linalg::{ModuleInvariants, ResidueMatrix};
use crate::residue::Modulus;
use crate::simplicial::{self, Pair, Simplex};

/// Sign of the permutation sorting `seq`; `None` if an entry repeats.
pub(crate) fn sorting_sign(seq: &[u32]) -> Option<bool> {
    let mut odd = false;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return None;
            }
            if seq[i] > seq[j] {
                odd = !odd;
            }
        }
    }
    Some(odd)
}

/// The inclusion of alternating cochains `C^n(X, Z) -> Č^n(st, (A)^Z)`:
/// a simplicial cochain `c` goes to `t ↦ sign(t) · c(sorted t)`, and to zero
/// on tuples with a repeated index.
///
/// `cech` must be built from [`star_vanishing_sheaf`] of the same pair.
pub fn alternating_comparison_map(pair: &Pair, cech: &CechComplex, n: usize, modulus: Modulus) -> ResidueMatrix {
    let minus_one = modulus.neg(1);
    let mut triplets = Vec::new();
    for (i, t) in cech.tuples().tuples(n).iter().enumerate() {
        if cech.rank(n, i) == 0 {
            continue;
        }
        if let Some(odd) = sorting_sign(&t.indices) {
            let c = pair.cell_index(&t.support).expect("kept tuples are relative cells");
            triplets.push((cech.offset(n, i), c, if odd { minus_one } else { 1 }));
        }
    }
    ResidueMatrix::from_triplets(cech.dim(n), pair.cell_count(n), modulus, triplets)
}

/// Combinatorial form of the hypotheses that make the star cover a Leray
/// cover for `(A)^Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AcyclicityCertificate {
    /// `st(v_0) ∩ ... ∩ st(v_n) = st(σ)` for every simplex `σ`.
    pub intersections_are_stars: bool,
    /// `st(σ) ∩ st(w) = ∅` whenever `σ ∪ {w}` is not a simplex.
    pub empty_off_nerve: bool,
    /// `st(σ) ∩ |Z|` is the star of `σ` in `Z` when `σ ∈ Z`, and empty
    /// otherwise.
    pub sub_part_is_star: bool,
    pub failures: Vec<String>,
}

impl AcyclicityCertificate {
    pub fn holds(&self) -> bool {
        self.intersections_are_stars && self.empty_off_nerve && self.sub_part_is_star
    }

    pub fn compute(pair: &Pair) -> Self {
        let x = pair.total();
        let star = |s: &Simplex| -> BTreeSet<Simplex> { x.star(s).into_iter().cloned().collect() };
        let vertex_stars: Vec<(u32, BTreeSet<Simplex>)> =
            x.vertex_ids().into_iter().map(|v| (v, star(&Simplex::vertex(v)))).collect();
        let lookup = |v: u32| &vertex_stars.iter().find(|(w, _)| *w == v).expect("vertex").1;
        let mut failures = Vec::new();
        let (mut stars_ok, mut empty_ok, mut sub_ok) = (true, true, true);
        for sigma in x.iter() {
            let st = star(sigma);
            let mut inter = lookup(sigma.vertices()[0]).clone();
            for &v in &sigma.vertices()[1..] {
                inter = inter.intersection(lookup(v)).cloned().collect();
            }
            if inter != st || !st.contains(sigma) {
                stars_ok = false;
                failures.push(format!("intersection over {sigma:?} is not its star"));
            }
            for (w, sw) in &vertex_stars {
                if sigma.contains_vertex(*w) {
                    continue;
                }
                let mut joined = sigma.vertices().to_vec();
                joined.push(*w);
                if !x.contains_vertices(&joined) && st.intersection(sw).next().is_some() {
                    empty_ok = false;
                    failures.push(format!("st({sigma:?}) meets st({w}) off the nerve"));
                }
            }
            let in_sub: BTreeSet<&Simplex> = st.iter().filter(|t| pair.sub().contains(t)).collect();
            let expected: BTreeSet<&Simplex> = if pair.sub().contains(sigma) {
                pair.sub().star(sigma).into_iter().collect()
            } else {
                BTreeSet::new()
            };
            if in_sub != expected {
                sub_ok = false;
                failures.push(format!("st({sigma:?}) ∩ Z is not the star of {sigma:?} in Z"));
            }
        }
        AcyclicityCertificate {
            intersections_are_stars: stars_ok,
            empty_off_nerve: empty_ok,
            sub_part_is_star: sub_ok,
            failures,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeComparison {
    pub degree: usize,
    pub cech: ModuleInvariants,
    pub simplicial: ModuleInvariants,
    /// The alternating inclusion induces an isomorphism on `H^n`.
    pub comparison_is_isomorphism: bool,
}

impl DegreeComparison {
    pub fn equal(&self) -> bool {
        self.cech == self.simplicial && self.comparison_is_isomorphism
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LerayReport {
    pub modulus: Modulus,
    pub degrees: Vec<DegreeComparison>,
    pub certificate: AcyclicityCertificate,
}

impl LerayReport {
    pub fn passed(&self) -> bool {
        self.certificate.holds() && self.degrees.iter().all(DegreeComparison::equal)
    }
}

/// `Ȟ^n(star cover, (A)^Z)` from the full-tuple complex against
/// `H^n(X, Z; Z/p^s)`, for `n <= n_max`.
pub fn leray_comparison(pair: &Pair, modulus: Modulus, n_max: usize) -> LerayReport {
    let f = star_vanishing_sheaf(pair, modulus);
    let cech = CechComplex::build(pair.total(), &f, TupleKind::Full, n_max + 1);
    let simp = simplicial::cochain_complex(pair, modulus, n_max + 1);
    let degrees = (0..=n_max)
        .map(|n| {
            let hc = cech.cohomology(n).expect("below top");
            let hs = simp.cohomology(n).expect("below top");
            let phi = alternating_comparison_map(pair, &cech, n, modulus);
            let iso = induced_on_cohomology(&phi, &hs, &hc)
                .map(|m| m.is_isomorphism())
                .unwrap_or(false);
            DegreeComparison {
                degree: n,
                cech: hc.invariants().clone(),
                simplicial: hs.invariants().clone(),
                comparison_is_isomorphism: iso,
            }
        })
        .collect();
    LerayReport {
        modulus,
        degrees,
        certificate: AcyclicityCertificate::compute(pair),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::SimplicialComplex;

    fn z(p: u64, s: u32) -> Modulus {
        Modulus::new(p, s).unwrap()
    }

    #[test]
    fn signs() {
        assert_eq!(sorting_sign(&[0, 1, 2]), Some(false));
        assert_eq!(sorting_sign(&[1, 0, 2]), Some(true));
        assert_eq!(sorting_sign(&[2, 0, 1]), Some(false));
        assert_eq!(sorting_sign(&[1, 1]), None);
    }

    #[test]
    fn hollow_triangle_and_point() {
        let tri = Pair::absolute(SimplicialComplex::from_maximal([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap());
        let r = leray_comparison(&tri, z(3, 2), 2);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.degrees[1].cech.exponents(), &[2]);
        let pt = Pair::absolute(SimplicialComplex::from_maximal([vec![0]]).unwrap());
        let r = leray_comparison(&pt, z(2, 3), 2);
        assert!(r.passed());
        assert_eq!(r.degrees[0].cech.exponents(), &[3]);
        assert!(r.degrees[1].cech.is_zero() && r.degrees[2].cech.is_zero());
    }

    #[test]
    fn disk_relative_to_boundary() {
        let k = 5u32;
        let disk = SimplicialComplex::from_maximal((0..k).map(|i| vec![i, (i + 1) % k, k])).unwrap();
        let pair = Pair::with_sub(disk, (0..k).map(|i| vec![i, (i + 1) % k])).unwrap();
        let r = leray_comparison(&pair, z(2, 3), 2);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.degrees[2].cech.exponents(), &[3]);
        assert!(r.degrees[0].cech.is_zero() && r.degrees[1].cech.is_zero());
    }
}
