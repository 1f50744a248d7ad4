use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::complex::{Simplex, SimplicialComplex, Vertex};

/// A simplicial map, determined by its action on vertices.
///
/// The source and target complexes are not stored; [`SimplicialMap::new`]
/// validates against them and callers pass them alongside when needed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SimplicialMap {
    vertex_map: BTreeMap<Vertex, Vertex>,
}

impl SimplicialMap {
    /// Checks that every vertex of `source` is mapped and every simplex lands
    /// on a simplex of `target`.
    pub fn new(
        vertex_map: BTreeMap<Vertex, Vertex>,
        source: &SimplicialComplex,
        target: &SimplicialComplex,
    ) -> Result<Self> {
        let f = SimplicialMap { vertex_map };
        f.check(source, target)?;
        Ok(f)
    }

    pub fn from_fn(source: &SimplicialComplex, target: &SimplicialComplex, g: impl Fn(Vertex) -> Vertex) -> Result<Self> {
        let map = source.vertex_ids().into_iter().map(|v| (v, g(v))).collect();
        Self::new(map, source, target)
    }

    pub fn identity(complex: &SimplicialComplex) -> Self {
        SimplicialMap {
            vertex_map: complex.vertex_ids().into_iter().map(|v| (v, v)).collect(),
        }
    }

    pub fn check(&self, source: &SimplicialComplex, target: &SimplicialComplex) -> Result<()> {
        for v in source.vertex_ids() {
            if !self.vertex_map.contains_key(&v) {
                return Err(Error::InvalidMap(format!("vertex {v} is not mapped")));
            }
        }
        for s in source.iter() {
            let img = self.image(s);
            if !target.contains(&img) {
                return Err(Error::InvalidMap(format!(
                    "simplex {s:?} maps to {img:?}, which is not a simplex of the target"
                )));
            }
        }
        Ok(())
    }

    pub fn vertex_map(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.vertex_map
    }

    /// Panics on an unmapped vertex.
    pub fn apply(&self, v: Vertex) -> Vertex {
        self.vertex_map[&v]
    }

    /// Image vertex set.
    pub fn image(&self, s: &Simplex) -> Simplex {
        Simplex::new(s.vertices().iter().map(|&v| self.apply(v)).collect()).expect("nonempty")
    }

    /// Image as an oriented simplex: `None` when two vertices collide,
    /// otherwise the sorted image and the sign of the sorting permutation.
    pub fn oriented_image(&self, s: &Simplex) -> Option<(Simplex, bool)> {
        let img: Vec<Vertex> = s.vertices().iter().map(|&v| self.apply(v)).collect();
        let mut inversions = 0usize;
        for i in 0..img.len() {
            for j in i + 1..img.len() {
                match img[i].cmp(&img[j]) {
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        let mut sorted = img;
        sorted.sort_unstable();
        Some((Simplex::from_sorted(sorted), inversions % 2 == 1))
    }

    /// The map on the vertices of `domain` only; not revalidated.
    pub fn restrict(&self, domain: &SimplicialComplex) -> SimplicialMap {
        SimplicialMap {
            vertex_map: domain
                .vertex_ids()
                .into_iter()
                .filter_map(|v| self.vertex_map.get(&v).map(|&w| (v, w)))
                .collect(),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &SimplicialMap) -> SimplicialMap {
        SimplicialMap {
            vertex_map: first
                .vertex_map
                .iter()
                .map(|(&v, &w)| (v, self.apply(w)))
                .collect(),
        }
    }

    /// Preimages of each vertex of `target`.
    pub fn fibres(&self) -> BTreeMap<Vertex, Vec<Vertex>> {
        let mut out: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for (&v, &w) in &self.vertex_map {
            out.entry(w).or_default().push(v);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> SimplicialComplex {
        SimplicialComplex::from_maximal([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn orientation_signs() {
        let t = SimplicialComplex::from_maximal([vec![0, 1, 2]]).unwrap();
        let swap = SimplicialMap::from_fn(&t, &t, |v| [1, 0, 2][v as usize]).unwrap();
        let (img, neg) = swap.oriented_image(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!(img.vertices(), &[0, 1, 2]);
        assert!(neg);
        let cyc = SimplicialMap::from_fn(&t, &t, |v| (v + 1) % 3).unwrap();
        assert!(!cyc.oriented_image(&Simplex::new(vec![0, 1, 2]).unwrap()).unwrap().1);
        let collapse = SimplicialMap::from_fn(&t, &t, |_| 0).unwrap();
        assert!(collapse.oriented_image(&Simplex::new(vec![0, 1]).unwrap()).is_none());
    }

    #[test]
    fn rejects_non_simplicial_maps() {
        let path = SimplicialComplex::from_maximal([vec![0, 1], vec![1, 2]]).unwrap();
        let t = triangle();
        // 0-1-2 path onto itself sending 1 to 0 and 0 to 2: edge {0,1} -> {0,2} missing.
        let err = SimplicialMap::from_fn(&path, &path, |v| [2, 0, 1][v as usize]).unwrap_err();
        assert!(matches!(err, Error::InvalidMap(_)));
        assert!(SimplicialMap::from_fn(&path, &t, |v| v).is_ok());
        let partial = SimplicialMap::new(BTreeMap::from([(0, 0)]), &path, &path);
        assert!(partial.is_err());
    }

    #[test]
    fn composition() {
        let t = triangle();
        let r = SimplicialMap::from_fn(&t, &t, |v| (v + 1) % 3).unwrap();
        let r3 = r.compose(&r).compose(&r);
        assert_eq!(r3, SimplicialMap::identity(&t));
    }
}
