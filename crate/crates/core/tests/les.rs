mod common;

use common::{brute_exact, z};
use proptest::prelude::*;
use towercoh::cech::leray_comparison;
use towercoh::les::{assemble_les, certify_exact, connecting_map, pair_les, LiftStrategy, Term};
use towercoh::{simplicial, Pair, SimplicialComplex};

/// A complex on up to six vertices from random maximal simplices, and a
/// subcomplex spanned by faces of some of them.
fn pairs() -> impl Strategy<Value = Pair> {
    let simplex = proptest::collection::btree_set(0u32..6, 1..=3);
    proptest::collection::vec((simplex, any::<bool>(), 0usize..3), 1..6).prop_map(|parts| {
        let total = SimplicialComplex::from_maximal(parts.iter().map(|(s, _, _)| s.iter().copied().collect::<Vec<_>>())).unwrap();
        let sub: Vec<Vec<u32>> = parts
            .iter()
            .filter(|(_, keep, _)| *keep)
            .map(|(s, _, drop)| {
                let v: Vec<u32> = s.iter().copied().collect();
                if v.len() > 1 {
                    let mut face = v.clone();
                    face.remove(drop % v.len());
                    face
                } else {
                    v
                }
            })
            .collect();
        Pair::with_sub(total, sub).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequences_are_exact_and_agree_with_enumeration(
        pair in pairs(),
        md in prop_oneof![Just(z(2, 1)), Just(z(2, 2)), Just(z(3, 1)), Just(z(3, 2))],
    ) {
        let data = pair_les(&pair, md, 1).unwrap();
        let seq = assemble_les(&data).unwrap();
        let report = certify_exact(&seq.nodes);
        prop_assert!(report.passed(), "{:?}", report.first_failure());
        prop_assert!(seq.lift_independent.iter().all(|&b| b));
        for node in &seq.nodes {
            let Some(out) = &node.outgoing else { continue };
            if let Some(exact) = brute_exact(&node.incoming, out, 4096) {
                prop_assert!(exact, "{} not exact by enumeration", node.label);
            }
        }
        for n in 0..=1 {
            let a = connecting_map(&data, n, LiftStrategy::FirstFound).unwrap();
            let b = connecting_map(&data, n, LiftStrategy::LastFound).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn cech_terms_are_simplicial_cohomology(pair in pairs(), md in prop_oneof![Just(z(2, 2)), Just(z(3, 1))]) {
        let rep = leray_comparison(&pair, md, 2);
        prop_assert!(rep.passed());
        let data = pair_les(&pair, md, 1).unwrap();
        let seq = assemble_les(&data).unwrap();
        for node in &seq.nodes {
            let expected = match node.term {
                Term::Relative => simplicial::cohomology(&pair, node.degree, md),
                Term::Absolute => simplicial::cohomology(&Pair::absolute(pair.total().clone()), node.degree, md),
                Term::Boundary => simplicial::cohomology(&pair.sub_pair(), node.degree, md),
            };
            prop_assert_eq!(&node.module, expected.invariants(), "{}", node.label);
        }
    }
}
