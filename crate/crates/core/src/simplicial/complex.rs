use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex ids; their numeric order orients every simplex.
pub type Vertex = u32;

/// A nonempty simplex stored as its strictly increasing vertex list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts and deduplicates; fails on an empty list.
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidComplex("empty simplex".into()));
        }
        vertices.sort_unstable();
        vertices.dedup();
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub(crate) fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(!vertices.is_empty() && vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// The face opposite the `i`-th vertex; `None` for a vertex.
    pub fn face(&self, i: usize) -> Option<Simplex> {
        if self.0.len() == 1 {
            return None;
        }
        let mut v = self.0.clone();
        v.remove(i);
        Some(Simplex(v))
    }

    /// Every nonempty face, including the simplex itself.
    pub fn all_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        assert!(n < 32, "simplex too large to enumerate faces");
        (1u32..(1 << n)).map(move |mask| {
            Simplex(
                (0..n)
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;
    fn try_from(v: Vec<Vertex>) -> Result<Self> {
        Simplex::new(v)
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite abstract simplicial complex, closed under nonempty faces.
///
/// Simplices of each dimension are kept in lexicographic order; that order
/// fixes the cochain bases.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawComplex", into = "RawComplex")]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    vertices: Vec<Vertex>,
    simplices: Vec<Vec<Vertex>>,
}

impl TryFrom<RawComplex> for SimplicialComplex {
    type Error = Error;
    fn try_from(raw: RawComplex) -> Result<Self> {
        let mut listed: BTreeSet<Vertex> = BTreeSet::new();
        for &v in &raw.vertices {
            if !listed.insert(v) {
                return Err(Error::InvalidComplex(format!("vertex {v} listed twice")));
            }
        }
        for s in &raw.simplices {
            if let Some(v) = s.iter().find(|v| !listed.contains(v)) {
                return Err(Error::InvalidComplex(format!(
                    "simplex {s:?} uses unlisted vertex {v}"
                )));
            }
        }
        let mut generators = raw.simplices;
        generators.extend(raw.vertices.iter().map(|&v| vec![v]));
        SimplicialComplex::from_maximal(generators)
    }
}

impl From<SimplicialComplex> for RawComplex {
    fn from(c: SimplicialComplex) -> Self {
        RawComplex {
            vertices: c.vertex_ids(),
            simplices: c.maximal_simplices().into_iter().map(Vec::from).collect(),
        }
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex {
            by_dim: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// The face closure of the given simplices.
    pub fn from_maximal<I, S>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<Vec<Vertex>>,
    {
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            let s = Simplex::new(s.into())?;
            if all.contains(&s) {
                continue;
            }
            all.extend(s.all_faces());
        }
        Ok(Self::from_closed_set(all))
    }

    /// `set` must already be face-closed.
    pub(crate) fn from_closed_set(set: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in set {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].push(s);
        }
        let index = by_dim
            .iter()
            .flat_map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        SimplicialComplex { by_dim, index }
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    /// `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn simplices(&self, n: usize) -> &[Simplex] {
        self.by_dim.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplices(n).len()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn vertex_ids(&self) -> Vec<Vertex> {
        self.simplices(0).iter().map(|s| s.0[0]).collect()
    }

    pub fn max_vertex(&self) -> Option<Vertex> {
        self.simplices(0).last().map(|s| s.0[0])
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn contains_vertices(&self, vertices: &[Vertex]) -> bool {
        match Simplex::new(vertices.to_vec()) {
            Ok(s) => self.contains(&s),
            Err(_) => false,
        }
    }

    /// Position of `s` in the lexicographic list of its dimension.
    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        for layer in &self.by_dim {
            for s in layer {
                if s.dim() > 0 {
                    for i in 0..=s.dim() {
                        covered.insert(self.face_ref(s, i));
                    }
                }
            }
        }
        self.iter().filter(|s| !covered.contains(s)).cloned().collect()
    }

    fn face_ref(&self, s: &Simplex, i: usize) -> &Simplex {
        let f = s.face(i).expect("positive dimension");
        let d = f.dim();
        &self.by_dim[d][self.index[&f]]
    }

    /// Simplices having `s` as a face (the closed-up open star of `s`).
    pub fn star(&self, s: &Simplex) -> Vec<&Simplex> {
        self.by_dim
            .iter()
            .skip(s.dim())
            .flatten()
            .filter(|t| s.is_face_of(t))
            .collect()
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Relabels vertices through an injective map.
    pub fn relabel(&self, f: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let img: Result<BTreeSet<Simplex>> = self
            .iter()
            .map(|s| Simplex::new(s.0.iter().map(|&v| f(v)).collect()))
            .collect();
        let out = Self::from_closed_set(img?);
        if (0..=self.dim().unwrap_or(0)).any(|d| out.count(d) != self.count(d)) {
            return Err(Error::InvalidComplex("relabelling is not injective".into()));
        }
        Ok(out)
    }

    /// `self ⊔ other`, with `other`'s vertices shifted past `self`'s.
    ///
    /// Returns the union and the shift applied to `other`.
    pub fn disjoint_union(&self, other: &SimplicialComplex) -> (SimplicialComplex, Vertex) {
        let shift = self.max_vertex().map_or(0, |m| m + 1);
        let mut set: BTreeSet<Simplex> = self.iter().cloned().collect();
        set.extend(
            other
                .iter()
                .map(|s| Simplex(s.0.iter().map(|&v| v + shift).collect())),
        );
        (Self::from_closed_set(set), shift)
    }

    /// `k` disjoint copies; copy `c` of vertex `v` is `c * (max + 1) + v`.
    pub fn product_with_finite_set(&self, k: u32) -> Result<SimplicialComplex> {
        if k == 0 {
            return Err(Error::InvalidComplex("product with the empty set".into()));
        }
        let stride = self.max_vertex().map_or(0, |m| m + 1);
        let mut set = BTreeSet::new();
        for c in 0..k {
            for s in self.iter() {
                set.insert(Simplex(s.0.iter().map(|&v| c * stride + v).collect()));
            }
        }
        Ok(Self::from_closed_set(set))
    }

    /// The cone with the given apex, which must be a new vertex.
    pub fn cone(&self, apex: Vertex) -> Result<SimplicialComplex> {
        if self.contains(&Simplex::vertex(apex)) {
            return Err(Error::InvalidComplex(format!("apex {apex} already present")));
        }
        let mut maximal: Vec<Vec<Vertex>> = self
            .maximal_simplices()
            .into_iter()
            .map(|s| {
                let mut v = s.0;
                v.push(apex);
                v
            })
            .collect();
        maximal.push(vec![apex]);
        SimplicialComplex::from_maximal(maximal)
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("counts", &self.by_dim.iter().map(Vec::len).collect::<Vec<_>>())
            .field("maximal", &self.maximal_simplices())
            .finish()
    }
}

/// A subcomplex pair `(X, Z)`; relative cochains live on simplices of `X`
/// not in `Z`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct Pair {
    total: SimplicialComplex,
    sub: SimplicialComplex,
    cells: Vec<Vec<Simplex>>,
    cell_index: HashMap<Simplex, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPair {
    total: SimplicialComplex,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sub: Option<Vec<Vec<Vertex>>>,
}

impl TryFrom<RawPair> for Pair {
    type Error = Error;
    fn try_from(raw: RawPair) -> Result<Self> {
        let sub = match raw.sub {
            Some(maximal) => SimplicialComplex::from_maximal(maximal)?,
            None => SimplicialComplex::empty(),
        };
        Pair::new(raw.total, sub)
    }
}

impl From<Pair> for RawPair {
    fn from(p: Pair) -> Self {
        let sub = (!p.sub.is_empty())
            .then(|| p.sub.maximal_simplices().into_iter().map(Vec::from).collect());
        RawPair { total: p.total, sub }
    }
}

impl Pair {
    pub fn new(total: SimplicialComplex, sub: SimplicialComplex) -> Result<Self> {
        if let Some(s) = sub.iter().find(|s| !total.contains(s)) {
            return Err(Error::NotASubcomplex(s.0.clone()));
        }
        let cells: Vec<Vec<Simplex>> = total
            .by_dim
            .iter()
            .map(|layer| layer.iter().filter(|s| !sub.contains(s)).cloned().collect())
            .collect();
        let cell_index = cells
            .iter()
            .flat_map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        Ok(Pair {
            total,
            sub,
            cells,
            cell_index,
        })
    }

    /// `(X, ∅)`.
    pub fn absolute(total: SimplicialComplex) -> Self {
        Pair::new(total, SimplicialComplex::empty()).expect("empty subcomplex")
    }

    /// `Z` given by maximal simplices.
    pub fn with_sub<I, S>(total: SimplicialComplex, sub: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<Vec<Vertex>>,
    {
        Pair::new(total, SimplicialComplex::from_maximal(sub)?)
    }

    pub fn total(&self) -> &SimplicialComplex {
        &self.total
    }

    pub fn sub(&self) -> &SimplicialComplex {
        &self.sub
    }

    pub fn is_absolute(&self) -> bool {
        self.sub.is_empty()
    }

    /// `n`-simplices of `X` not in `Z`, the basis of `C^n(X, Z)`.
    pub fn cells(&self, n: usize) -> &[Simplex] {
        self.cells.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn cell_count(&self, n: usize) -> usize {
        self.cells(n).len()
    }

    pub fn cell_index(&self, s: &Simplex) -> Option<usize> {
        self.cell_index.get(s).copied()
    }

    /// `(Z, ∅)`: the boundary system runs on this with the same machinery.
    pub fn sub_pair(&self) -> Pair {
        Pair::absolute(self.sub.clone())
    }

    /// `k` copies of the pair, labelled as in
    /// [`SimplicialComplex::product_with_finite_set`].
    pub fn product_with_finite_set(&self, k: u32) -> Result<Pair> {
        let stride = self.total.max_vertex().map_or(0, |m| m + 1);
        let total = self.total.product_with_finite_set(k)?;
        let mut set = BTreeSet::new();
        for c in 0..k {
            for s in self.sub.iter() {
                set.insert(Simplex(s.0.iter().map(|&v| c * stride + v).collect()));
            }
        }
        Pair::new(total, SimplicialComplex::from_closed_set(set))
    }

    /// Alternating count of relative cells.
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pair")
            .field("total", &self.total)
            .field("sub", &self.sub.maximal_simplices())
            .finish()
    }
}
