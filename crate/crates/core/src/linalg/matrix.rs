use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::residue::{Modulus, ResidueElement};

/// A sparse row of `(column, value)` pairs, sorted by column, with no zeros.
pub(crate) type SparseRow = Vec<(usize, u64)>;

/// Sparse matrix over `Z/p^s`.
///
/// Rows are stored as sorted `(column, value)` lists and zero entries are
/// never stored, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueMatrix {
    rows: usize,
    cols: usize,
    modulus: Modulus,
    data: Vec<SparseRow>,
}

impl ResidueMatrix {
    pub fn zeros(rows: usize, cols: usize, modulus: Modulus) -> Self {
        ResidueMatrix {
            rows,
            cols,
            modulus,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        let one = modulus.reduce_u64(1);
        ResidueMatrix {
            rows: n,
            cols: n,
            modulus,
            data: (0..n).map(|i| vec![(i, one)]).collect(),
        }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[u64], modulus: Modulus) -> Self {
        let mut m = Self::zeros(rows, cols, modulus);
        for (i, &d) in diag.iter().enumerate() {
            let d = modulus.reduce_u64(d);
            if d != 0 {
                m.data[i].push((i, d));
            }
        }
        m
    }

    /// Builds a matrix from triplets; duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        modulus: Modulus,
        triplets: impl IntoIterator<Item = (usize, usize, u64)>,
    ) -> Self {
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside {rows}x{cols}");
            data[r].push((c, modulus.reduce_u64(v)));
        }
        for row in &mut data {
            normalize_row(row, modulus);
        }
        ResidueMatrix {
            rows,
            cols,
            modulus,
            data,
        }
    }

    pub fn from_dense(dense: &[Vec<u64>], cols: usize, modulus: Modulus) -> Self {
        let triplets = dense.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols);
            row.iter().enumerate().map(move |(c, &v)| (r, c, v))
        });
        Self::from_triplets(dense.len(), cols, modulus, triplets)
    }

    pub fn from_i64_rows(rows: &[&[i64]], modulus: Modulus) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), cols);
            row.iter()
                .enumerate()
                .map(move |(c, &v)| (r, c, modulus.reduce_i64(v)))
        });
        Self::from_triplets(rows.len(), cols, modulus, triplets)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<u64>], modulus: Modulus) -> Self {
        let triplets = columns.iter().enumerate().flat_map(|(c, col)| {
            assert_eq!(col.len(), rows);
            col.iter().enumerate().map(move |(r, &v)| (r, c, v))
        });
        Self::from_triplets(rows, columns.len(), modulus, triplets)
    }

    pub(crate) fn from_sparse_rows(cols: usize, modulus: Modulus, data: Vec<SparseRow>) -> Self {
        debug_assert!(data
            .iter()
            .all(|r| r.windows(2).all(|w| w[0].0 < w[1].0) && r.iter().all(|&(c, v)| c < cols && v != 0)));
        ResidueMatrix {
            rows: data.len(),
            cols,
            modulus,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub(crate) fn into_rows(self) -> Vec<SparseRow> {
        self.data
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        let row = &self.data[r];
        match row.binary_search_by_key(&c, |&(col, _)| col) {
            Ok(i) => row[i].1,
            Err(_) => 0,
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> ResidueElement {
        self.modulus.element(self.get(r, c))
    }

    pub fn set(&mut self, r: usize, c: usize, value: u64) {
        assert!(r < self.rows && c < self.cols);
        let value = self.modulus.reduce_u64(value);
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |&(col, _)| col) {
            Ok(i) if value == 0 => {
                row.remove(i);
            }
            Ok(i) => row[i].1 = value,
            Err(i) if value != 0 => row.insert(i, (c, value)),
            Err(_) => {}
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v;
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<u64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (r, c, v) in self.entries() {
            data[c].push((r, v));
        }
        ResidueMatrix {
            rows: self.cols,
            cols: self.rows,
            modulus: self.modulus,
            data,
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(self.modulus, rhs.modulus));
        }
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let m = self.modulus;
        let mut acc = vec![0u64; rhs.cols];
        let mut seen = vec![false; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for &(k, a) in row {
                for &(c, b) in &rhs.data[k] {
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    acc[c] = m.add(acc[c], m.mul(a, b));
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &c in &touched {
                if acc[c] != 0 {
                    out.push((c, acc[c]));
                }
                acc[c] = 0;
                seen[c] = false;
            }
            touched.clear();
            data.push(out);
        }
        Ok(ResidueMatrix {
            rows: self.rows,
            cols: rhs.cols,
            modulus: m,
            data,
        })
    }

    pub fn mul_vec(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        let m = self.modulus;
        self.data
            .iter()
            .map(|row| row.iter().fold(0, |acc, &(c, v)| m.add(acc, m.mul(v, x[c]))))
            .collect()
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, false)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, true)
    }

    fn combine(&self, rhs: &Self, subtract: bool) -> Result<Self> {
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(self.modulus, rhs.modulus));
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: rhs.rows * rhs.cols,
            });
        }
        let m = self.modulus;
        let q = if subtract { m.neg(1 % m.order()) } else { 1 % m.order() };
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| axpy(a, q, b, m))
            .collect();
        Ok(ResidueMatrix { data, ..self.clone() })
    }

    pub fn scale(&self, k: u64) -> Self {
        let m = self.modulus;
        let k = m.reduce_u64(k);
        let data = self
            .data
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|&(c, v)| {
                        let w = m.mul(v, k);
                        (w != 0).then_some((c, w))
                    })
                    .collect()
            })
            .collect();
        ResidueMatrix { data, ..self.clone() }
    }

    /// Entrywise image under `Z/p^s -> Z/p^t`.
    pub fn reduce_modulus(&self, t: u32) -> Result<Self> {
        if t == 0 || t > self.modulus.s() {
            return Err(Error::ReductionOutOfRange {
                from: self.modulus.s(),
                to: t,
            });
        }
        let target = self.modulus.with_exponent(t)?;
        Ok(Self::from_triplets(
            self.rows,
            self.cols,
            target,
            self.entries().map(|(r, c, v)| (r, c, v)),
        ))
    }

    /// Reduces row `i` modulo `p^{exps[i]}` (entries kept as `Z/p^s` values).
    pub fn reduce_rows(&self, exps: &[u32]) -> Self {
        assert_eq!(exps.len(), self.rows);
        let m = self.modulus;
        let data = self
            .data
            .iter()
            .zip(exps)
            .map(|(row, &e)| {
                let q = m.int_power(e.min(m.s()));
                row.iter()
                    .filter_map(|&(c, v)| {
                        let w = v % q;
                        (w != 0).then_some((c, w))
                    })
                    .collect()
            })
            .collect();
        ResidueMatrix { data, ..self.clone() }
    }

    /// Columns listed in `order`; `order[k]` is the source column of column `k`.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        let mut inverse = vec![usize::MAX; self.cols];
        for (k, &c) in order.iter().enumerate() {
            inverse[c] = k;
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut out: SparseRow = row
                    .iter()
                    .filter(|&&(c, _)| inverse[c] != usize::MAX)
                    .map(|&(c, v)| (inverse[c], v))
                    .collect();
                out.sort_unstable_by_key(|&(c, _)| c);
                out
            })
            .collect();
        ResidueMatrix {
            rows: self.rows,
            cols: order.len(),
            modulus: self.modulus,
            data,
        }
    }

    pub fn select_rows(&self, order: &[usize]) -> Self {
        ResidueMatrix {
            rows: order.len(),
            cols: self.cols,
            modulus: self.modulus,
            data: order.iter().map(|&r| self.data[r].clone()).collect(),
        }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        if self.modulus != rhs.modulus {
            return Err(Error::ModulusMismatch(self.modulus, rhs.modulus));
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|&(c, v)| (c + self.cols, v)));
                row
            })
            .collect();
        Ok(ResidueMatrix {
            rows: self.rows,
            cols: self.cols + rhs.cols,
            modulus: self.modulus,
            data,
        })
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }
}

/// `a + q * b` on sparse rows.
pub(crate) fn axpy(a: &[(usize, u64)], q: u64, b: &[(usize, u64)], m: Modulus) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            let v = m.mul(q, b[j].1);
            if v != 0 {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = m.add(a[i].1, m.mul(q, b[j].1));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize_row(row: &mut SparseRow, m: Modulus) {
    row.sort_unstable_by_key(|&(c, _)| c);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for &(c, v) in row.iter() {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = m.add(last.1, v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    *row = out;
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.modulus)?;
        if self.rows * self.cols <= 400 {
            for row in self.to_dense() {
                writeln!(f, "  {row:?}")?;
            }
        } else {
            writeln!(f, "  ({} nonzero entries)", self.nnz())?;
        }
        Ok(())
    }
}

/// Dense serialized form used in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseMatrix {
    pub modulus: Modulus,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<u64>>,
}

impl From<&ResidueMatrix> for DenseMatrix {
    fn from(m: &ResidueMatrix) -> Self {
        DenseMatrix {
            modulus: m.modulus,
            rows: m.rows,
            cols: m.cols,
            entries: m.to_dense(),
        }
    }
}
