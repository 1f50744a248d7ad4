//! Cochain complexes of free `Z/p^s`-modules and their cohomology, presented
//! with explicit cocycle representatives so that chain maps can be expressed
//! in cohomology coordinates.

use crate::error::{Error, Result};
use crate::linalg::{lift_matrix, ModuleInvariants, ModuleMap, Reduction, ResidueMatrix, Track};
use crate::residue::Modulus;

/// `C^0 -> C^1 -> ... -> C^top`, each `C^n` free of rank `dims[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    modulus: Modulus,
    dims: Vec<usize>,
    /// `differentials[n]` is `d^n: C^n -> C^{n+1}`.
    differentials: Vec<ResidueMatrix>,
}

impl CochainComplex {
    pub fn new(modulus: Modulus, dims: Vec<usize>, differentials: Vec<ResidueMatrix>) -> Result<Self> {
        if dims.is_empty() || differentials.len() + 1 != dims.len() {
            return Err(Error::Contract(format!(
                "{} differentials for {} modules",
                differentials.len(),
                dims.len()
            )));
        }
        for (n, d) in differentials.iter().enumerate() {
            if d.cols() != dims[n] || d.rows() != dims[n + 1] {
                return Err(Error::DimensionMismatch {
                    expected: dims[n + 1] * dims[n],
                    found: d.rows() * d.cols(),
                });
            }
            if d.modulus() != modulus {
                return Err(Error::ModulusMismatch(d.modulus(), modulus));
            }
        }
        Ok(CochainComplex {
            modulus,
            dims,
            differentials,
        })
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    /// Highest degree with a stored module.
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, n: usize) -> &ResidueMatrix {
        &self.differentials[n]
    }

    /// `d^{n+1} ∘ d^n = 0` for every stored pair.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials
            .windows(2)
            .all(|w| w[1].checked_mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false))
    }

    /// `d^{n-1}` with `d^{-1}` the zero map from the zero module.
    fn incoming(&self, n: usize) -> ResidueMatrix {
        if n == 0 {
            ResidueMatrix::zeros(self.dims[0], 0, self.modulus)
        } else {
            self.differentials[n - 1].clone()
        }
    }

    /// Cohomology in degree `n`; requires `n < top` so that `d^n` is known.
    pub fn cohomology(&self, n: usize) -> Result<CohomologyPresentation> {
        if n >= self.top() {
            return Err(Error::Contract(format!(
                "degree {n} needs d^{n}, complex stops at degree {}",
                self.top()
            )));
        }
        CohomologyPresentation::from_differentials(n, &self.incoming(n), &self.differentials[n])
    }

    /// The same complex with coefficients reduced to `Z/p^t`.
    pub fn reduce(&self, t: u32) -> Result<Self> {
        let differentials = self
            .differentials
            .iter()
            .map(|d| d.reduce_modulus(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(CochainComplex {
            modulus: self.modulus.with_exponent(t)?,
            dims: self.dims.clone(),
            differentials,
        })
    }
}

/// `H^n = ker d^n / im d^{n-1}` together with cocycle representatives, one
/// per cyclic summand, and the data to express any cocycle in those
/// generator coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyPresentation {
    degree: usize,
    invariants: ModuleInvariants,
    cocycle_reps: Vec<Vec<u64>>,
    coordinates: CoordinateMap,
}

/// Cocycle `z` ↦ generator coordinates: `w = quotient · divide(kernel · z)`.
#[derive(Clone, Debug)]
struct CoordinateMap {
    differential: ResidueMatrix,
    /// Rows of `V^{-1}` selecting the kernel generators.
    kernel: ResidueMatrix,
    /// Per kernel generator, the power of `p` its coordinate is divisible by.
    divisors: Vec<u32>,
    /// Rows of the quotient's left transform for the summands.
    quotient: ResidueMatrix,
}

impl CohomologyPresentation {
    /// Cohomology at the middle of `C^{n-1} --incoming--> C^n --outgoing--> C^{n+1}`.
    pub fn from_differentials(
        degree: usize,
        incoming: &ResidueMatrix,
        outgoing: &ResidueMatrix,
    ) -> Result<Self> {
        let md = outgoing.modulus();
        let dim = outgoing.cols();
        if incoming.rows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: incoming.rows(),
            });
        }
        let s = md.s();

        // Kernel of d^n: V·p^{s-e_k}·e_k for pivots with e_k >= 1, V·e_j for free columns.
        let red = Reduction::compute(
            outgoing,
            Track {
                right: true,
                right_inv: true,
                ..Track::NONE
            },
        );
        let v = red.v.expect("tracked");
        let v_inv = red.v_inv.expect("tracked");
        let mut gen_cols: Vec<usize> = Vec::new();
        let mut divisors: Vec<u32> = Vec::new();
        let mut relation_exps: Vec<u32> = Vec::new();
        for (k, &e) in red.exponents.iter().enumerate() {
            if e >= 1 {
                gen_cols.push(k);
                divisors.push(s - e);
                relation_exps.push(e);
            }
        }
        for k in red.exponents.len()..dim {
            gen_cols.push(k);
            divisors.push(0);
            relation_exps.push(s);
        }
        let k_gens = gen_cols.len();
        let kernel = v_inv.select_rows(&gen_cols);
        let generators = v
            .select_columns(&gen_cols)
            .checked_mul(&ResidueMatrix::diagonal(
                k_gens,
                k_gens,
                &divisors.iter().map(|&d| md.power(d)).collect::<Vec<_>>(),
                md,
            ))?;

        // Coordinates of im d^{n-1} in the kernel generators, plus the
        // generators' own order relations.
        let image_coords = divide_rows(&kernel.checked_mul(incoming)?, &divisors)?;
        let torsion: Vec<(usize, u64)> = relation_exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e < s)
            .map(|(j, &e)| (j, md.power(e)))
            .collect();
        let relations = ResidueMatrix::from_triplets(
            k_gens,
            torsion.len(),
            md,
            torsion.iter().enumerate().map(|(c, &(j, v))| (j, c, v)),
        );
        let presentation = image_coords.hstack(&relations)?;
        let qred = Reduction::compute(
            &presentation,
            Track {
                left: true,
                left_inv: true,
                ..Track::NONE
            },
        );
        let mut summands: Vec<usize> = Vec::new();
        let mut exps: Vec<u32> = Vec::new();
        for i in 0..k_gens {
            let e = qred.exponents.get(i).copied().unwrap_or(s);
            if e >= 1 {
                summands.push(i);
                exps.push(e);
            }
        }
        let u = qred.u.expect("tracked");
        let u_inv = qred.u_inv.expect("tracked");
        let quotient = u.select_rows(&summands);
        let reps_matrix = generators.checked_mul(&u_inv.select_columns(&summands))?;
        let cocycle_reps = (0..summands.len()).map(|i| reps_matrix.column(i)).collect();

        Ok(CohomologyPresentation {
            degree,
            invariants: ModuleInvariants::new(md, exps),
            cocycle_reps,
            coordinates: CoordinateMap {
                differential: outgoing.clone(),
                kernel,
                divisors,
                quotient,
            },
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn invariants(&self) -> &ModuleInvariants {
        &self.invariants
    }

    pub fn modulus(&self) -> Modulus {
        self.invariants.modulus()
    }

    /// One cocycle per cyclic summand, in the order of `invariants()`.
    pub fn cocycle_reps(&self) -> &[Vec<u64>] {
        &self.cocycle_reps
    }

    pub fn cochain_dim(&self) -> usize {
        self.coordinates.differential.cols()
    }

    /// Coordinates of the class of `z`; entry `i` is reduced mod `p^{e_i}`.
    pub fn coordinates(&self, z: &[u64]) -> Result<Vec<u64>> {
        let c = &self.coordinates;
        if z.len() != c.differential.cols() {
            return Err(Error::DimensionMismatch {
                expected: c.differential.cols(),
                found: z.len(),
            });
        }
        if c.differential.mul_vec(z).iter().any(|&x| x != 0) {
            return Err(Error::NotACocycle);
        }
        let md = self.modulus();
        let y = c.kernel.mul_vec(z);
        let mut coeffs = Vec::with_capacity(y.len());
        for (&yk, &d) in y.iter().zip(&c.divisors) {
            let pd = md.int_power(d);
            if yk % pd != 0 {
                return Err(Error::Contract("kernel coordinate not divisible".into()));
            }
            coeffs.push(yk / pd);
        }
        let w = c.quotient.mul_vec(&coeffs);
        Ok(w
            .into_iter()
            .zip(self.invariants.exponents())
            .map(|(x, &e)| x % md.int_power(e))
            .collect())
    }

    /// `Σ coords_i · rep_i`.
    pub fn assemble(&self, coords: &[u64]) -> Vec<u64> {
        let md = self.modulus();
        let mut out = vec![0u64; self.cochain_dim()];
        for (rep, &c) in self.cocycle_reps.iter().zip(coords) {
            for (o, &r) in out.iter_mut().zip(rep) {
                *o = md.add(*o, md.mul(c, r));
            }
        }
        out
    }
}

fn divide_rows(m: &ResidueMatrix, divisors: &[u32]) -> Result<ResidueMatrix> {
    let md = m.modulus();
    let mut triplets = Vec::with_capacity(m.nnz());
    for (r, c, v) in m.entries() {
        let pd = md.int_power(divisors[r]);
        if v % pd != 0 {
            return Err(Error::Contract("image not contained in kernel".into()));
        }
        triplets.push((r, c, v / pd));
    }
    Ok(ResidueMatrix::from_triplets(m.rows(), m.cols(), md, triplets))
}

/// Expresses a cochain-level map in cohomology coordinates.
///
/// `chain` maps the cochains of `source` to those of `target`; its modulus
/// may be a reduction of the source modulus (for `mod p^t` reduction maps).
pub fn induced_on_cohomology(
    chain: &ResidueMatrix,
    source: &CohomologyPresentation,
    target: &CohomologyPresentation,
) -> Result<ModuleMap> {
    if chain.cols() != source.cochain_dim() || chain.rows() != target.cochain_dim() {
        return Err(Error::DimensionMismatch {
            expected: target.cochain_dim() * source.cochain_dim(),
            found: chain.rows() * chain.cols(),
        });
    }
    let tm = target.modulus();
    let chain = lift_matrix(chain, tm);
    let mut columns = Vec::with_capacity(source.cocycle_reps.len());
    for rep in &source.cocycle_reps {
        let lifted: Vec<u64> = rep.iter().map(|&x| tm.reduce_u64(x)).collect();
        let image = chain.mul_vec(&lifted);
        columns.push(target.coordinates(&image).map_err(|e| match e {
            Error::NotACocycle => Error::Contract("chain map sends a cocycle to a non-cocycle".into()),
            other => other,
        })?);
    }
    let matrix = ResidueMatrix::from_columns(target.invariants.len(), &columns, tm);
    ModuleMap::new(source.invariants.clone(), target.invariants.clone(), matrix)
}
