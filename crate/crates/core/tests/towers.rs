mod common;

use std::collections::BTreeMap;

use common::{tower, z, TOWER_NAMES};
use proptest::prelude::*;
use towercoh::generators::{build, BaseGraph, GeneratorSpec};
use towercoh::simplicial::Simplex;
use towercoh::tower::{cohomology_system, completed_report, main_theorem_check, validate_tower, Classification};
use towercoh::{Error, Modulus, SimplicialMap, Tower};

/// Preimages of every simplex of the lower level, counted directly.
fn fibre_sizes(t: &Tower, r: usize) -> BTreeMap<Simplex, usize> {
    let f = t.projection(r);
    let mut sizes: BTreeMap<Simplex, usize> = t.level(r).total().iter().map(|s| (s.clone(), 0)).collect();
    for tau in t.level(r + 1).total().iter() {
        let image = f.image(tau);
        if image.dim() == tau.dim() {
            *sizes.get_mut(&image).expect("image is a simplex") += 1;
        }
    }
    sizes
}

#[test]
fn fibres_have_the_deck_order_ratio() {
    for name in TOWER_NAMES {
        for p in [2, 3] {
            let t = tower(name, p, 3);
            let t = t.object.as_tower().unwrap();
            for r in 0..t.r_max() {
                let ratio = (t.deck_orders()[r + 1] / t.deck_orders()[r]) as usize;
                assert_eq!(ratio as u64, p, "{name}");
                for (sigma, n) in fibre_sizes(t, r) {
                    assert_eq!(n, ratio, "{name} p={p} r={r}: fibre over {sigma:?}");
                }
            }
        }
    }
}

#[test]
fn solenoid_h1_composites_vanish_after_s_steps() {
    for p in [2, 3] {
        let built = tower("solenoid", p, 4);
        let t = built.object.as_tower().unwrap();
        for s in 1..=4u32 {
            let d = cohomology_system(t, 1, z(p, s)).unwrap();
            for from in 0..=(4 - s as usize) {
                assert!(d.composite(from, from + s as usize).is_zero(), "p={p} s={s} from {from}");
                if s > 1 {
                    assert!(!d.composite(from, from + s as usize - 1).is_zero(), "p={p} s={s} from {from}");
                }
            }
        }
    }
}

#[test]
fn reports_match_generator_oracles() {
    for name in TOWER_NAMES {
        for p in [2, 3] {
            let built = tower(name, p, 3);
            let t = built.object.as_tower().unwrap();
            for n in 0..=1 {
                let rep = completed_report(t, n, p, 3).unwrap();
                assert!(rep.squares_commute(), "{name} p={p} n={n}");
                assert!(rep.reduction_surjective, "{name} p={p} n={n}");
                for c in &rep.table {
                    assert_eq!(c.invariants, built.oracle.invariants(c.r, n, z(p, c.s)), "{name} p={p} n={n} r={} s={}", c.r, c.s);
                }
                for (s, c) in (1..).zip(&rep.classifications) {
                    if let Some(expected) = built.oracle.classification(n, z(p, s)) {
                        assert_eq!(*c, expected, "{name} p={p} n={n} s={s}");
                    }
                }
                if let Some(expected) = built.oracle.limit(n, p, 3) {
                    assert_eq!(rep.inferred, expected, "{name} p={p} n={n}");
                }
            }
        }
    }
}

#[test]
fn voltage_h1_grows_in_rank() {
    let built = tower("voltage", 2, 3);
    let t = built.object.as_tower().unwrap();
    let rep = completed_report(t, 1, 2, 2).unwrap();
    for s in 1..=2 {
        let ranks: Vec<usize> = (0..=3).map(|r| rep.invariants(r, s).unwrap().len()).collect();
        assert_eq!(ranks, [2, 3, 5, 9]);
    }
    assert!(matches!(rep.classifications[0], Classification::Growing { .. }));
}

#[test]
fn theorem_holds_on_cylinder_pair_tower() {
    for p in [2, 3] {
        let built = tower("cylinder-pair-tower", p, 3);
        let rep = main_theorem_check(built.object.as_tower().unwrap(), p, 2, 3).unwrap();
        rep.ensure().unwrap();
    }
}

#[test]
fn theorem_check_rejects_invalid_towers() {
    let built = tower("solenoid", 2, 2);
    let t = built.object.as_tower().unwrap();
    // Collapse the top projection onto one vertex of level 1.
    let lower = t.level(1).total();
    let target = lower.vertex_ids()[0];
    let collapsed = SimplicialMap::from_fn(t.level(2).total(), lower, |_| target).unwrap();
    let bad = Tower::new(
        t.levels().to_vec(),
        vec![t.projection(0).clone(), collapsed],
        t.deck_orders().to_vec(),
        None,
    )
    .unwrap();
    assert!(!validate_tower(&bad).is_valid());
    assert!(matches!(main_theorem_check(&bad, 2, 1, 1), Err(Error::InvalidTower(_))));
}

fn explicit_voltage(edges: Vec<[u32; 2]>, voltages: Vec<u64>, p: u64) -> GeneratorSpec {
    let vertices = edges.iter().flatten().max().map_or(1, |&v| v + 1);
    GeneratorSpec::VoltageTower {
        graph: BaseGraph::Explicit { vertices, edges },
        voltages,
        p,
        r_max: 2,
    }
}

/// Simple graphs on up to five vertices.
fn graphs() -> impl Strategy<Value = Vec<[u32; 2]>> {
    proptest::collection::btree_set((0u32..5, 0u32..5), 1..7).prop_map(|set| {
        let mut seen = std::collections::BTreeSet::new();
        set.into_iter()
            .filter(|&(u, v)| u != v && seen.insert((u.min(v), u.max(v))))
            .map(|(u, v)| [u, v])
            .collect::<Vec<_>>()
    })
    .prop_filter("at least one edge", |e| !e.is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_voltage_towers_satisfy_the_theorem(
        edges in graphs(),
        seed in any::<u64>(),
        p in prop_oneof![Just(2u64), Just(3u64)],
    ) {
        let voltages: Vec<u64> = edges.iter().enumerate().map(|(i, _)| (seed >> (2 * i)) % 9).collect();
        let built = build(&explicit_voltage(edges, voltages, p)).unwrap();
        let t = built.object.as_tower().unwrap();
        prop_assert!(validate_tower(t).is_valid());
        let rep = main_theorem_check(t, p, 1, 2).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.first_failure());
        for c in &rep.cells {
            prop_assert_eq!(&c.simplicial, &built.oracle.invariants(c.r, c.n, Modulus::new(p, c.s).unwrap()));
        }
    }
}
