//! Smith normal form over `Z/p^s`.
//!
//! `Z/p^s` is a local principal ideal ring, so elimination only ever needs
//! pivots of minimal valuation: after scaling by a unit the pivot is exactly
//! `p^e` and divides every remaining entry. Elimination is sparse; among the
//! minimal-valuation candidates the pivot with the smallest Markowitz cost is
//! taken, ties broken by the lowest `(row, col)`.

use crate::error::{Error, Result};
use crate::linalg::matrix::{axpy, ResidueMatrix, SparseRow};
use crate::linalg::module::ModuleInvariants;
use crate::residue::Modulus;

/// Which transforms to accumulate during elimination.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Track {
    pub left: bool,
    pub left_inv: bool,
    pub right: bool,
    pub right_inv: bool,
}

impl Track {
    pub const NONE: Track = Track {
        left: false,
        left_inv: false,
        right: false,
        right_inv: false,
    };
    pub const ALL: Track = Track {
        left: true,
        left_inv: true,
        right: true,
        right_inv: true,
    };
}

/// Outcome of an elimination, with the transforms that were requested.
///
/// Row `k < rank` of `U·M·V` carries the pivot `p^{exponents[k]}` at column
/// `k`; everything else is zero.
#[derive(Clone, Debug)]
pub(crate) struct Reduction {
    pub rows: usize,
    pub cols: usize,
    pub modulus: Modulus,
    pub exponents: Vec<u32>,
    pub u: Option<ResidueMatrix>,
    pub u_inv: Option<ResidueMatrix>,
    pub v: Option<ResidueMatrix>,
    pub v_inv: Option<ResidueMatrix>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    pub fn compute(m: &ResidueMatrix, track: Track) -> Reduction {
        Eliminator::new(m, track).run()
    }
}

fn identity_rows(n: usize, one: u64) -> Vec<SparseRow> {
    (0..n).map(|i| vec![(i, one)]).collect()
}

fn scale_row(row: &mut SparseRow, w: u64, m: Modulus) {
    for entry in row.iter_mut() {
        entry.1 = m.mul(entry.1, w);
    }
    row.retain(|&(_, v)| v != 0);
}

struct Eliminator {
    modulus: Modulus,
    rows: usize,
    cols: usize,
    track: Track,
    a: Vec<SparseRow>,
    active: Vec<usize>,
    u: Vec<SparseRow>,
    u_inv_t: Vec<SparseRow>,
    v_t: Vec<SparseRow>,
    v_inv: Vec<SparseRow>,
    col_count: Vec<usize>,
}

impl Eliminator {
    fn new(m: &ResidueMatrix, track: Track) -> Self {
        let md = m.modulus();
        let one = md.reduce_u64(1);
        let (rows, cols) = (m.rows(), m.cols());
        let a = m.clone().into_rows();
        let active = (0..rows).filter(|&r| !a[r].is_empty()).collect();
        let pick = |on: bool, n: usize| if on { identity_rows(n, one) } else { Vec::new() };
        Eliminator {
            modulus: md,
            rows,
            cols,
            track,
            a,
            active,
            u: pick(track.left, rows),
            u_inv_t: pick(track.left_inv, rows),
            v_t: pick(track.right, cols),
            v_inv: pick(track.right_inv, cols),
            col_count: vec![0; cols],
        }
    }

    /// Minimal-valuation entry with the lowest Markowitz cost.
    fn choose_pivot(&mut self) -> Option<(usize, usize, u32)> {
        let md = self.modulus;
        let mut best_val = u32::MAX;
        for &r in &self.active {
            for &(c, v) in &self.a[r] {
                self.col_count[c] += 1;
                let val = md.valuation_raw(v).expect("stored entries are nonzero");
                best_val = best_val.min(val);
            }
        }
        if best_val == u32::MAX {
            return None;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for &r in &self.active {
            let row_len = self.a[r].len();
            for &(c, v) in &self.a[r] {
                if md.valuation_raw(v) != Some(best_val) {
                    continue;
                }
                let cost = (row_len - 1) * (self.col_count[c] - 1);
                let better = match best {
                    None => true,
                    Some((bc, br, bcol)) => (cost, r, c) < (bc, br, bcol),
                };
                if better {
                    best = Some((cost, r, c));
                }
            }
        }
        for &r in &self.active {
            for &(c, _) in &self.a[r] {
                self.col_count[c] = 0;
            }
        }
        best.map(|(_, r, c)| (r, c, best_val))
    }

    fn run(mut self) -> Reduction {
        let md = self.modulus;
        let mut pivots: Vec<(usize, usize, u32)> = Vec::new();
        while let Some((pr, pc, e)) = self.choose_pivot() {
            let pe = md.int_power(e);
            let value = self.a[pr]
                .iter()
                .find(|&&(c, _)| c == pc)
                .map(|&(_, v)| v)
                .expect("pivot entry present");
            let unit = value / pe;
            let w = md.inverse_raw(unit).expect("cofactor of a minimal-valuation pivot is a unit");
            if w != 1 {
                scale_row(&mut self.a[pr], w, md);
                if self.track.left {
                    scale_row(&mut self.u[pr], w, md);
                }
                if self.track.left_inv {
                    scale_row(&mut self.u_inv_t[pr], unit % md.order(), md);
                }
            }

            // Clear the pivot column with row operations.
            let pivot_row = std::mem::take(&mut self.a[pr]);
            let targets: Vec<(usize, u64)> = self
                .active
                .iter()
                .filter(|&&r| r != pr)
                .filter_map(|&r| {
                    let row = &self.a[r];
                    row.binary_search_by_key(&pc, |&(c, _)| c)
                        .ok()
                        .map(|i| (r, row[i].1 / pe))
                })
                .collect();
            for &(r, q) in &targets {
                let neg_q = md.neg(q);
                self.a[r] = axpy(&self.a[r], neg_q, &pivot_row, md);
                if self.track.left {
                    let src = std::mem::take(&mut self.u[pr]);
                    self.u[r] = axpy(&self.u[r], neg_q, &src, md);
                    self.u[pr] = src;
                }
                if self.track.left_inv {
                    let src = std::mem::take(&mut self.u_inv_t[r]);
                    self.u_inv_t[pr] = axpy(&self.u_inv_t[pr], q, &src, md);
                    self.u_inv_t[r] = src;
                }
            }

            // Clear the pivot row with column operations; only the transforms
            // change because the pivot column is now zero elsewhere.
            for &(c, b) in &pivot_row {
                if c == pc {
                    continue;
                }
                let q = b / pe;
                if self.track.right {
                    let src = std::mem::take(&mut self.v_t[pc]);
                    self.v_t[c] = axpy(&self.v_t[c], md.neg(q), &src, md);
                    self.v_t[pc] = src;
                }
                if self.track.right_inv {
                    let src = std::mem::take(&mut self.v_inv[c]);
                    self.v_inv[pc] = axpy(&self.v_inv[pc], q, &src, md);
                    self.v_inv[c] = src;
                }
            }
            self.a[pr] = vec![(pc, pe % md.order())];
            self.active.retain(|&r| r != pr && !self.a[r].is_empty());
            pivots.push((pr, pc, e));
        }
        self.finish(pivots)
    }

    fn finish(mut self, pivots: Vec<(usize, usize, u32)>) -> Reduction {
        let md = self.modulus;
        let order = |n: usize, chosen: &mut dyn Iterator<Item = usize>| {
            let mut used = vec![false; n];
            let mut out: Vec<usize> = Vec::with_capacity(n);
            for i in chosen {
                used[i] = true;
                out.push(i);
            }
            out.extend((0..n).filter(|&i| !used[i]));
            out
        };
        let row_order = order(self.rows, &mut pivots.iter().map(|p| p.0));
        let col_order = order(self.cols, &mut pivots.iter().map(|p| p.1));
        let permute = |src: &mut Vec<SparseRow>, ord: &[usize]| -> Vec<SparseRow> {
            ord.iter().map(|&i| std::mem::take(&mut src[i])).collect()
        };
        let (rows, cols) = (self.rows, self.cols);
        let u = self
            .track
            .left
            .then(|| ResidueMatrix::from_sparse_rows(rows, md, permute(&mut self.u, &row_order)));
        let u_inv = self.track.left_inv.then(|| {
            ResidueMatrix::from_sparse_rows(rows, md, permute(&mut self.u_inv_t, &row_order)).transpose()
        });
        let v = self.track.right.then(|| {
            ResidueMatrix::from_sparse_rows(cols, md, permute(&mut self.v_t, &col_order)).transpose()
        });
        let v_inv = self
            .track
            .right_inv
            .then(|| ResidueMatrix::from_sparse_rows(cols, md, permute(&mut self.v_inv, &col_order)));
        Reduction {
            rows,
            cols,
            modulus: md,
            exponents: pivots.iter().map(|p| p.2).collect(),
            u,
            u_inv,
            v,
            v_inv,
        }
    }
}

/// `U·M·V = D` with `U`, `V` invertible and `D` diagonal in p-power form.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: ResidueMatrix,
    pub d: ResidueMatrix,
    pub v: ResidueMatrix,
    pub u_inv: ResidueMatrix,
    pub v_inv: ResidueMatrix,
    /// Exponents of the nonzero diagonal entries, nondecreasing, each in `[0, s)`.
    pub exponents: Vec<u32>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

pub fn smith_normal_form(m: &ResidueMatrix) -> SnfResult {
    let red = Reduction::compute(m, Track::ALL);
    let md = m.modulus();
    let diag: Vec<u64> = red.exponents.iter().map(|&e| md.power(e)).collect();
    SnfResult {
        d: ResidueMatrix::diagonal(m.rows(), m.cols(), &diag, md),
        exponents: red.exponents,
        u: red.u.expect("tracked"),
        u_inv: red.u_inv.expect("tracked"),
        v: red.v.expect("tracked"),
        v_inv: red.v_inv.expect("tracked"),
    }
}

/// Exponents of the SNF diagonal without accumulating transforms.
pub fn snf_exponents(m: &ResidueMatrix) -> Vec<u32> {
    Reduction::compute(m, Track::NONE).exponents
}

/// Invariants of `coker(M: (Z/p^s)^cols -> (Z/p^s)^rows)`.
///
/// A diagonal entry `p^e` contributes `Z/p^e` (nothing when `e = 0`); each
/// row without a pivot contributes a full `Z/p^s`.
pub fn cokernel_invariants(m: &ResidueMatrix) -> ModuleInvariants {
    let md = m.modulus();
    let exps = snf_exponents(m);
    let free = m.rows() - exps.len();
    ModuleInvariants::new(
        md,
        exps.into_iter()
            .filter(|&e| e >= 1)
            .chain(std::iter::repeat_n(md.s(), free))
            .collect(),
    )
}

/// Log base `p` of `|im M|`, i.e. `s * rows - log_p |coker M|`.
pub fn image_log_order(m: &ResidueMatrix) -> u64 {
    let md = m.modulus();
    snf_exponents(m).iter().map(|&e| (md.s() - e) as u64).sum()
}

/// Generators of `ker M`, as a generating set of column vectors.
pub fn kernel_basis(m: &ResidueMatrix) -> Vec<Vec<u64>> {
    let red = Reduction::compute(
        m,
        Track {
            right: true,
            ..Track::NONE
        },
    );
    let md = m.modulus();
    let v = red.v.as_ref().expect("tracked");
    let mut out = Vec::new();
    for (k, &e) in red.exponents.iter().enumerate() {
        if e >= 1 {
            let scale = md.int_power(md.s() - e);
            out.push(v.column(k).into_iter().map(|x| md.mul(x, scale)).collect());
        }
    }
    for k in red.rank()..m.cols() {
        out.push(v.column(k));
    }
    out
}

/// Reusable solver for `M·x = b`.
#[derive(Clone, Debug)]
pub struct ImageSolver {
    red: Reduction,
    reversed: bool,
}

impl ImageSolver {
    pub fn new(m: &ResidueMatrix) -> Self {
        ImageSolver {
            red: Reduction::compute(
                m,
                Track {
                    left: true,
                    right: true,
                    ..Track::NONE
                },
            ),
            reversed: false,
        }
    }

    /// Eliminates with the columns in reverse order, which generally yields a
    /// different particular solution. Used to cross-check lift independence.
    pub fn new_reversed(m: &ResidueMatrix) -> Self {
        let order: Vec<usize> = (0..m.cols()).rev().collect();
        let mut solver = ImageSolver::new(&m.select_columns(&order));
        solver.reversed = true;
        solver
    }

    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        let red = &self.red;
        if b.len() != red.rows {
            return Err(Error::DimensionMismatch {
                expected: red.rows,
                found: b.len(),
            });
        }
        let md = red.modulus;
        let c = red.u.as_ref().expect("tracked").mul_vec(b);
        let mut y = vec![0u64; red.cols];
        for (k, &ck) in c.iter().enumerate() {
            if k < red.rank() {
                let pe = md.int_power(red.exponents[k]);
                if ck % pe != 0 {
                    return Ok(None);
                }
                y[k] = ck / pe;
            } else if ck != 0 {
                return Ok(None);
            }
        }
        let mut x = red.v.as_ref().expect("tracked").mul_vec(&y);
        if self.reversed {
            x.reverse();
        }
        Ok(Some(x))
    }
}

/// `Some(x)` with `M·x = b` when `b ∈ im M`, otherwise `None`.
pub fn solve_in_image(m: &ResidueMatrix, b: &[u64]) -> Result<Option<Vec<u64>>> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    ImageSolver::new(m).solve(b)
}
