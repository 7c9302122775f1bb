pub mod decompose;
pub mod doc;
pub mod error;
pub mod flip;
pub mod geometry;
pub mod invariants;
pub mod lattice;
pub mod qfree;
pub mod random;
pub mod recmap;
pub mod scalar;
pub mod selftest;
pub mod svg;

pub use error::{Error, Result};
pub use geometry::{GridPattern, Multirect, Rect, RectPartition};
pub use recmap::{Piece, RecMap, Shuffle, Transposition, Violation};
pub use scalar::{Scalar, Symbol, SymbolKind, SymbolTable};
