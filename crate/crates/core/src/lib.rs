//! Finite-algebra workbench for partial Mal'tsev and partial protomodular
//! conditions on monoids, quandles and semirings.
//!
//! Algebras are operation tables on `{0, .., n-1}`. On top of them the
//! crate builds split points and their pullbacks, internal relations,
//! connectors and centralizers, internal categories, and torsors with
//! their Baer sums. Every predicate is decided by exhaustive computation.

pub mod algebra;
pub mod bitset;
pub mod centrality;
pub mod document;
pub mod error;
pub mod extensions;
pub mod fault;
pub mod maltsev;
pub mod points;
pub mod relations;
pub mod report;

pub use algebra::{Algebra, Catalog, Congruence, Hom, Kind, Obj, RawAlgebra, TupleAlgebra};
pub use bitset::BitSet;
pub use centrality::{Centralizer, Connector};
pub use error::{Error, Result};
pub use extensions::{Direction, Torsor};
pub use points::{SigmaClass, SplitPoint};
pub use relations::{ReflexiveRelation, Relation};
pub use report::AuditReport;
