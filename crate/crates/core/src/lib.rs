//! Simplicial and Čech cohomology over `Z/p^s` for finite simplicial pairs and
//! towers of Galois covering complexes.

pub mod cech;
pub mod cochain;
pub mod document;
pub mod error;
pub mod generators;
pub mod les;
pub mod linalg;
pub mod residue;
pub mod simplicial;
pub mod tower;

pub use cochain::{induced_on_cohomology, CochainComplex, CohomologyPresentation};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, ModuleInvariants, ModuleMap, ResidueMatrix, SnfResult};
pub use residue::{Modulus, ResidueElement, Valuation};
pub use simplicial::{Pair, Simplex, SimplicialComplex, SimplicialMap, Vertex};
pub use tower::Tower;
