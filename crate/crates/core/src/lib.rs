//! Formal contexts, concept structures, double Boolean algebras and a
//! two-sorted modal logic over contexts.

pub mod bitset;
pub mod concepts;
pub mod context;
pub mod dba;
pub mod error;
pub mod formula;
pub mod gen;
pub mod io;
pub mod properties;
pub mod semantics;
pub mod transforms;

pub use bitset::BitSet;
pub use context::{ApproxKind, FormalContext, Sort, SortedSet};
pub use error::{Error, Result};
pub use formula::{Formula, Modality};
pub use io::{AnyModel, Workspace};
pub use semantics::{ContextModel, GeneralizedModel, Valuation};
