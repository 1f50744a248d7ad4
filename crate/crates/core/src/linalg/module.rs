use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{DenseMatrix, ResidueMatrix};
use crate::linalg::snf::snf_exponents;
use crate::residue::Modulus;

/// Isomorphism class of a finite `Z/p^s`-module `⊕ Z/p^{e_i}`, `1 <= e_i <= s`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleInvariants {
    modulus: Modulus,
    exponents: Vec<u32>,
}

impl ModuleInvariants {
    /// Sorts the exponents; zero exponents (trivial summands) are dropped.
    pub fn new(modulus: Modulus, mut exponents: Vec<u32>) -> Self {
        assert!(
            exponents.iter().all(|&e| e <= modulus.s()),
            "exponent above s in {exponents:?} over {modulus}"
        );
        exponents.retain(|&e| e > 0);
        exponents.sort_unstable();
        ModuleInvariants { modulus, exponents }
    }

    pub fn zero(modulus: Modulus) -> Self {
        ModuleInvariants {
            modulus,
            exponents: Vec::new(),
        }
    }

    /// `(Z/p^s)^rank`.
    pub fn free(modulus: Modulus, rank: usize) -> Self {
        ModuleInvariants {
            modulus,
            exponents: vec![modulus.s(); rank],
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of cyclic summands.
    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `log_p |M|`.
    pub fn log_order(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    /// Number of full `Z/p^s` summands.
    pub fn free_rank(&self) -> usize {
        self.exponents.iter().filter(|&&e| e == self.modulus.s()).count()
    }

    pub fn is_free(&self) -> bool {
        self.free_rank() == self.exponents.len()
    }
}

impl fmt::Debug for ModuleInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ModuleInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let p = self.modulus.p();
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| if e == 1 { format!("Z/{p}") } else { format!("Z/{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism between presented modules, in generator coordinates.
///
/// Column `j` holds the image of the `j`-th source generator with row `i`
/// reduced modulo `p^{t_i}`, where `t_i` is the `i`-th target exponent. The
/// matrix lives over the target's coefficient ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    source: ModuleInvariants,
    target: ModuleInvariants,
    matrix: ResidueMatrix,
}

impl ModuleMap {
    pub fn new(source: ModuleInvariants, target: ModuleInvariants, matrix: ResidueMatrix) -> Result<Self> {
        if matrix.rows() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.len() {
            return Err(Error::DimensionMismatch {
                expected: source.len(),
                found: matrix.cols(),
            });
        }
        if matrix.modulus() != target.modulus() {
            return Err(Error::ModulusMismatch(matrix.modulus(), target.modulus()));
        }
        let matrix = matrix.reduce_rows(target.exponents());
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn zero(source: ModuleInvariants, target: ModuleInvariants) -> Self {
        let matrix = ResidueMatrix::zeros(target.len(), source.len(), target.modulus());
        ModuleMap { source, target, matrix }
    }

    pub fn identity(module: ModuleInvariants) -> Self {
        let matrix = ResidueMatrix::identity(module.len(), module.modulus()).reduce_rows(module.exponents());
        ModuleMap {
            source: module.clone(),
            target: module,
            matrix,
        }
    }

    pub fn source(&self) -> &ModuleInvariants {
        &self.source
    }

    pub fn target(&self) -> &ModuleInvariants {
        &self.target
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.matrix
    }

    pub fn dense(&self) -> DenseMatrix {
        DenseMatrix::from(&self.matrix)
    }

    /// Whether each column respects the order of its source generator, i.e.
    /// `p^{e_j} * image_j = 0` in the target.
    pub fn is_well_defined(&self) -> bool {
        let md = self.matrix.modulus();
        self.matrix.entries().all(|(i, j, v)| {
            let t = self.target.exponents()[i];
            let e = self.source.exponents()[j];
            let scaled = if e >= md.s() { 0 } else { md.mul(v, md.int_power(e)) };
            scaled % md.int_power(t) == 0
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.target != self.source {
            return Err(Error::Contract(format!(
                "cannot compose: {} vs {}",
                first.target, self.source
            )));
        }
        // Lift coordinates into the target ring before multiplying.
        let lifted = lift_matrix(&first.matrix, self.matrix.modulus());
        let matrix = self.matrix.checked_mul(&lifted)?;
        ModuleMap::new(first.source.clone(), self.target.clone(), matrix)
    }

    /// `log_p |im f|`.
    pub fn image_log_order(&self) -> u64 {
        // |im| = |target| / |coker [A | relations]|.
        let md = self.matrix.modulus();
        let relations = ResidueMatrix::diagonal(
            self.target.len(),
            self.target.len(),
            &self
                .target
                .exponents()
                .iter()
                .map(|&t| md.power(t))
                .collect::<Vec<_>>(),
            md,
        );
        let stacked = self.matrix.hstack(&relations).expect("same row count");
        let exps = snf_exponents(&stacked);
        let coker: u64 = exps.iter().map(|&e| e as u64).sum::<u64>()
            + (self.target.len() - exps.len()) as u64 * md.s() as u64;
        self.target.log_order() - coker
    }

    /// `log_p |ker f|`.
    pub fn kernel_log_order(&self) -> u64 {
        self.source.log_order() - self.image_log_order()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_log_order() == 0
    }

    pub fn is_surjective(&self) -> bool {
        self.image_log_order() == self.target.log_order()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

impl Serialize for ModuleMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shown<'a> {
            source: &'a ModuleInvariants,
            target: &'a ModuleInvariants,
            matrix: Vec<Vec<u64>>,
        }
        Shown {
            source: &self.source,
            target: &self.target,
            matrix: self.matrix.to_dense(),
        }
        .serialize(serializer)
    }
}

/// Reinterprets canonical representatives in another modulus of the same prime.
pub(crate) fn lift_matrix(m: &ResidueMatrix, target: Modulus) -> ResidueMatrix {
    if m.modulus() == target {
        return m.clone();
    }
    ResidueMatrix::from_triplets(m.rows(), m.cols(), target, m.entries())
}
