mod common;

use common::{brute_cokernel, z};
use proptest::prelude::*;
use towercoh::linalg::{cokernel_invariants, image_log_order, kernel_basis, smith_normal_form, snf_exponents, solve_in_image};
use towercoh::{Modulus, ModuleInvariants, ModuleMap, ResidueMatrix};

fn modulus() -> impl Strategy<Value = Modulus> {
    (prop_oneof![Just(2u64), Just(3), Just(5)], 1u32..=4).prop_map(|(p, s)| z(p, s))
}

/// A matrix whose entries are zero about half the time.
fn matrix(max: usize) -> impl Strategy<Value = ResidueMatrix> {
    (modulus(), 1..=max, 1..=max).prop_flat_map(|(md, rows, cols)| {
        let entry = prop_oneof![Just(0u64), 0..md.order()];
        proptest::collection::vec(proptest::collection::vec(entry, cols), rows)
            .prop_map(move |dense| ResidueMatrix::from_dense(&dense, cols, md))
    })
}

/// Small enough for the enumeration oracle.
fn tiny_matrix() -> impl Strategy<Value = (Modulus, Vec<Vec<u64>>, usize)> {
    prop_oneof![Just(z(2, 3)), Just(z(3, 2)), Just(z(3, 3)), Just(z(5, 2))]
        .prop_flat_map(|md| {
            let max_rows: usize = if md.order() > 9 { 2 } else { 3 };
            (Just(md), 1..=max_rows, 1usize..=3)
        })
        .prop_flat_map(|(md, rows, cols)| {
            (
                Just(md),
                proptest::collection::vec(proptest::collection::vec(0..md.order(), cols), rows),
                Just(cols),
            )
        })
}

fn permute(m: &ResidueMatrix, rows: &[usize], cols: &[usize]) -> ResidueMatrix {
    m.select_rows(rows).select_columns(cols)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_transforms_diagonalize(m in matrix(12)) {
        let snf = smith_normal_form(&m);
        let md = m.modulus();
        prop_assert_eq!(snf.u.checked_mul(&m).unwrap().checked_mul(&snf.v).unwrap(), snf.d.clone());
        prop_assert_eq!(snf.u.checked_mul(&snf.u_inv).unwrap(), ResidueMatrix::identity(m.rows(), md));
        prop_assert_eq!(snf.v_inv.checked_mul(&snf.v).unwrap(), ResidueMatrix::identity(m.cols(), md));
        prop_assert!(snf.d.is_diagonal());
        prop_assert!(snf.exponents.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn exponents_ignore_row_and_column_order(m in matrix(10), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut g = common::rng(seed);
        let mut rows: Vec<usize> = (0..m.rows()).collect();
        let mut cols: Vec<usize> = (0..m.cols()).collect();
        rows.shuffle(&mut g);
        cols.shuffle(&mut g);
        prop_assert_eq!(snf_exponents(&permute(&m, &rows, &cols)), snf_exponents(&m));
    }

    #[test]
    fn kernel_and_image_orders_multiply(m in matrix(10)) {
        let md = m.modulus();
        let f = ModuleMap::new(ModuleInvariants::free(md, m.cols()), ModuleInvariants::free(md, m.rows()), m.clone()).unwrap();
        prop_assert_eq!(f.image_log_order(), image_log_order(&m));
        prop_assert_eq!(f.kernel_log_order() + f.image_log_order(), md.s() as u64 * m.cols() as u64);
        for k in kernel_basis(&m) {
            prop_assert!(m.mul_vec(&k).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn cokernel_matches_enumeration((md, dense, cols) in tiny_matrix()) {
        let m = ResidueMatrix::from_dense(&dense, cols, md);
        let oracle = brute_cokernel(md, &dense, cols);
        prop_assert_eq!(cokernel_invariants(&m), oracle.clone());
        prop_assert_eq!(image_log_order(&m), md.s() as u64 * dense.len() as u64 - oracle.log_order());
    }

    #[test]
    fn solver_finds_preimages(m in matrix(8), seed in any::<u64>()) {
        use rand::RngExt;
        let md = m.modulus();
        let mut g = common::rng(seed);
        let x: Vec<u64> = (0..m.cols()).map(|_| g.random_range(0..md.order())).collect();
        let b = m.mul_vec(&x);
        let y = solve_in_image(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }
}

#[test]
fn solver_rejects_vectors_outside_the_image() {
    let md = z(3, 2);
    let m = ResidueMatrix::from_i64_rows(&[&[3, 0], &[0, 0]], md);
    assert_eq!(solve_in_image(&m, &[1, 0]).unwrap(), None);
    assert_eq!(solve_in_image(&m, &[0, 1]).unwrap(), None);
    assert!(solve_in_image(&m, &[6, 0]).unwrap().is_some());
}

/// Every 3x3 matrix over Z/9. Hours at one core; run with `--ignored`.
#[test]
#[ignore]
fn all_three_by_three_over_z9() {
    let md = z(3, 2);
    for k in 0..9u64.pow(9) {
        let mut k = k;
        let dense: Vec<Vec<u64>> = (0..3)
            .map(|_| {
                (0..3)
                    .map(|_| {
                        let x = k % 9;
                        k /= 9;
                        x
                    })
                    .collect()
            })
            .collect();
        let ours = cokernel_invariants(&ResidueMatrix::from_dense(&dense, 3, md));
        assert_eq!(ours, brute_cokernel(md, &dense, 3), "{dense:?}");
    }
}
