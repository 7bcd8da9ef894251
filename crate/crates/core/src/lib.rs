pub mod bitvec;
pub mod circuit;
pub mod complex;
pub mod ed;
pub mod error;
pub mod f2linalg;
pub mod homology;
pub mod model;
pub mod operators;
pub mod phase;
pub mod wavefunction;

pub use bitvec::BitVec;
pub use complex::{CellComplex, Chain, Subcomplex};
pub use error::{Error, Result};
pub use f2linalg::{F2Matrix, Subspace};
pub use model::{Model, SignedFlip};
pub use phase::Phase;
