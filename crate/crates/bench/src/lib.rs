//! Fixtures shared by the benchmarks.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use towercoh::generators::{build, named};
use towercoh::{Modulus, ResidueMatrix, Tower};

/// Seeded sparse matrix; nonzero entries are `unit * p^e` with random `e < s`.
pub fn sparse_matrix(seed: u64, md: Modulus, rows: usize, cols: usize, density: f64) -> ResidueMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triplets = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.random_bool(density) {
                let e = rng.random_range(0..md.s());
                let unit = loop {
                    let u = rng.random_range(1..md.order());
                    if u % md.p() != 0 {
                        break u;
                    }
                };
                triplets.push((r, c, md.mul(unit, md.int_power(e))));
            }
        }
    }
    ResidueMatrix::from_triplets(rows, cols, md, triplets)
}

/// A named generator tower, e.g. `solenoid` or `voltage`.
pub fn tower(name: &str, p: u64, r_max: usize) -> Tower {
    let built = build(&named(name, p, r_max).expect("known generator")).expect("valid parameters");
    built.object.as_tower().expect("a tower").clone()
}
