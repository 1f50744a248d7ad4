//! Čech complexes of presheaves on covers with a finite nerve, the open-star
//! cover, comparison with simplicial cohomology, and the presheaf short
//! exact sequence `0 -> F^Z -> F -> F_Z -> 0`.

mod leray;
mod presheaf;
mod sequence;

pub use leray::{alternating_comparison_map, leray_comparison, AcyclicityCertificate, DegreeComparison, LerayReport};
pub use presheaf::{check_presheaf_axioms, ConstantSheaf, LocallyConstantSheaf, Presheaf, RelativeMode, Relativized};
pub use sequence::{presheaf_les, presheaf_les_on, PresheafLes};
pub(crate) use leray::sorting_sign;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::cochain::{CochainComplex, CohomologyPresentation};
use crate::error::{Error, Result};
use crate::linalg::ResidueMatrix;
use crate::simplicial::{Pair, Simplex, SimplicialComplex, Vertex};

/// The cover of a complex by the open stars of its vertices.
///
/// `st(i_0) ∩ ... ∩ st(i_n)` is nonempty iff `{i_0, ..., i_n}` is a simplex,
/// and then it is the open star of that simplex; so the nerve is the complex
/// itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarCover {
    complex: SimplicialComplex,
}

impl StarCover {
    pub fn new(complex: SimplicialComplex) -> Self {
        StarCover { complex }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn nerve(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Nerve simplices whose intersection meets `|Z|`: the star of `σ`
    /// meets `|Z|` iff `σ ∈ Z`.
    pub fn meeting(&self, pair: &Pair) -> BTreeSet<Simplex> {
        pair.sub().iter().cloned().collect()
    }
}

/// Which index tuples span the cochains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TupleKind {
    /// All ordered tuples in `I^{n+1}` with nonempty intersection.
    Full,
    /// Strictly increasing tuples only.
    Alternating,
}

/// An index tuple `(i_0, ..., i_n)` and its support `{i_0, ..., i_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CechTuple {
    pub indices: Vec<Vertex>,
    pub support: Simplex,
}

/// The tuples of each degree, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleIndex {
    kind: TupleKind,
    degrees: Vec<Vec<CechTuple>>,
    lookup: Vec<HashMap<Vec<Vertex>, usize>>,
}

impl TupleIndex {
    pub fn new(nerve: &SimplicialComplex, kind: TupleKind, top: usize) -> Self {
        let mut degrees = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let mut out = Vec::new();
            match kind {
                TupleKind::Alternating => {
                    for s in nerve.simplices(n) {
                        out.push(CechTuple {
                            indices: s.vertices().to_vec(),
                            support: s.clone(),
                        });
                    }
                }
                TupleKind::Full => {
                    let mut prefix = Vec::with_capacity(n + 1);
                    extend_tuples(nerve, n + 1, &mut prefix, &mut out);
                }
            }
            degrees.push(out);
        }
        let lookup = degrees
            .iter()
            .map(|d| d.iter().enumerate().map(|(i, t)| (t.indices.clone(), i)).collect())
            .collect();
        TupleIndex { kind, degrees, lookup }
    }

    pub fn kind(&self) -> TupleKind {
        self.kind
    }

    pub fn top(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn tuples(&self, n: usize) -> &[CechTuple] {
        &self.degrees[n]
    }

    pub fn position(&self, n: usize, indices: &[Vertex]) -> Option<usize> {
        self.lookup[n].get(indices).copied()
    }
}

/// Depth-first extension in lexicographic order: the next index is any
/// vertex keeping the support a simplex.
fn extend_tuples(nerve: &SimplicialComplex, len: usize, prefix: &mut Vec<Vertex>, out: &mut Vec<CechTuple>) {
    if prefix.len() == len {
        let support = Simplex::new(prefix.clone()).expect("nonempty");
        out.push(CechTuple {
            indices: prefix.clone(),
            support,
        });
        return;
    }
    for v in nerve.vertex_ids() {
        prefix.push(v);
        if nerve.contains_vertices(prefix) {
            extend_tuples(nerve, len, prefix, out);
        }
        prefix.pop();
    }
}

/// `Č^•(𝔘, F)` for a cover with the given nerve.
///
/// The basis of `Č^n` is the concatenation over tuples `t` of a basis of
/// `F(U_t)`; `offset(n, i)` locates the block of the `i`-th tuple.
#[derive(Clone, Debug)]
pub struct CechComplex {
    tuples: Arc<TupleIndex>,
    ranks: Vec<Vec<usize>>,
    offsets: Vec<Vec<usize>>,
    complex: CochainComplex,
}

impl CechComplex {
    pub fn build<P: Presheaf + ?Sized>(nerve: &SimplicialComplex, f: &P, kind: TupleKind, top: usize) -> Self {
        Self::with_tuples(Arc::new(TupleIndex::new(nerve, kind, top)), f)
    }

    pub fn with_tuples<P: Presheaf + ?Sized>(tuples: Arc<TupleIndex>, f: &P) -> Self {
        let md = f.modulus();
        let top = tuples.top();
        let mut ranks = Vec::with_capacity(top + 1);
        let mut offsets = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let r: Vec<usize> = tuples.tuples(n).iter().map(|t| f.rank(&t.support)).collect();
            let mut o = Vec::with_capacity(r.len() + 1);
            let mut acc = 0;
            for &x in &r {
                o.push(acc);
                acc += x;
            }
            o.push(acc);
            ranks.push(r);
            offsets.push(o);
        }
        let mut cache: HashMap<(Simplex, Simplex), ResidueMatrix> = HashMap::new();
        let minus_one = md.neg(1);
        let mut differentials = Vec::with_capacity(top);
        for n in 0..top {
            let mut triplets = Vec::new();
            for (ri, t) in tuples.tuples(n + 1).iter().enumerate() {
                if ranks[n + 1][ri] == 0 {
                    continue;
                }
                for j in 0..t.indices.len() {
                    let mut face = t.indices.clone();
                    face.remove(j);
                    let ci = tuples.position(n, &face).expect("faces of tuples are tuples");
                    if ranks[n][ci] == 0 {
                        continue;
                    }
                    let fs = &tuples.tuples(n)[ci].support;
                    let rho = cache
                        .entry((fs.clone(), t.support.clone()))
                        .or_insert_with(|| f.restriction(fs, &t.support));
                    let sign = if j % 2 == 0 { 1 } else { minus_one };
                    for (a, b, v) in rho.entries() {
                        triplets.push((offsets[n + 1][ri] + a, offsets[n][ci] + b, md.mul(sign, v)));
                    }
                }
            }
            differentials.push(ResidueMatrix::from_triplets(
                offsets[n + 1][ranks[n + 1].len()],
                offsets[n][ranks[n].len()],
                md,
                triplets,
            ));
        }
        let dims = (0..=top).map(|n| offsets[n][ranks[n].len()]).collect();
        let complex = CochainComplex::new(md, dims, differentials).expect("consistent shapes");
        CechComplex {
            tuples,
            ranks,
            offsets,
            complex,
        }
    }

    pub fn tuples(&self) -> &Arc<TupleIndex> {
        &self.tuples
    }

    pub fn cochains(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn dim(&self, n: usize) -> usize {
        self.complex.dim(n)
    }

    pub fn rank(&self, n: usize, tuple: usize) -> usize {
        self.ranks[n][tuple]
    }

    pub fn offset(&self, n: usize, tuple: usize) -> usize {
        self.offsets[n][tuple]
    }

    /// Number of degree-`n` tuples carrying a nonzero module.
    pub fn supported_tuples(&self, n: usize) -> usize {
        self.ranks[n].iter().filter(|&&r| r > 0).count()
    }

    pub fn cohomology(&self, n: usize) -> Result<CohomologyPresentation> {
        self.complex.cohomology(n)
    }

    /// Cochain map `Č^n(self) -> Č^n(target)` given per tuple by a block
    /// `rank_target(σ) × rank_self(σ)` depending only on the support.
    pub fn chain_map_to(
        &self,
        target: &CechComplex,
        n: usize,
        mut block: impl FnMut(&Simplex) -> ResidueMatrix,
    ) -> Result<ResidueMatrix> {
        if !Arc::ptr_eq(&self.tuples, &target.tuples) && *self.tuples != *target.tuples {
            return Err(Error::Contract("chain map between complexes on different tuple sets".into()));
        }
        let md = target.complex.modulus();
        let mut cache: HashMap<Simplex, ResidueMatrix> = HashMap::new();
        let mut triplets = Vec::new();
        for (i, t) in self.tuples.tuples(n).iter().enumerate() {
            let (rs, rt) = (self.ranks[n][i], target.ranks[n][i]);
            if rs == 0 || rt == 0 {
                continue;
            }
            let b = cache.entry(t.support.clone()).or_insert_with(|| block(&t.support));
            if b.rows() != rt || b.cols() != rs {
                return Err(Error::DimensionMismatch {
                    expected: rt * rs,
                    found: b.rows() * b.cols(),
                });
            }
            for (a, c, v) in b.entries() {
                triplets.push((target.offsets[n][i] + a, self.offsets[n][i] + c, v));
            }
        }
        Ok(ResidueMatrix::from_triplets(target.dim(n), self.dim(n), md, triplets))
    }
}

/// `Č^•(𝔘, F)` in degrees `0..=top`, over all ordered tuples.
pub fn cech_complex<P: Presheaf + ?Sized>(nerve: &SimplicialComplex, f: &P, top: usize) -> CechComplex {
    CechComplex::build(nerve, f, TupleKind::Full, top)
}

/// `Ȟ^n(𝔘, F)` from the full-tuple complex.
pub fn cech_cohomology<P: Presheaf + ?Sized>(nerve: &SimplicialComplex, f: &P, n: usize) -> CohomologyPresentation {
    cech_complex(nerve, f, n + 1).cohomology(n).expect("degree below top")
}

/// `(A)^Z` on the star cover of `(X, Z)`.
pub fn star_vanishing_sheaf(pair: &Pair, modulus: crate::residue::Modulus) -> Relativized<ConstantSheaf> {
    let cover = StarCover::new(pair.total().clone());
    Relativized::new(ConstantSheaf::new(modulus), cover.meeting(pair), RelativeMode::Vanishing)
}
