//! Exact desk-scale laboratory for free-Banach-lattice norms, positively
//! homogeneous piecewise-linear functions, Ramsey-style witness search, chain
//! conditions and finitely supported measures on finite-dimensional spaces.

pub mod chain;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod fan;
pub mod geometry;
pub mod lp;
pub mod measure;
pub mod norm;
pub mod ramsey;
pub mod rat;

pub use error::Error;
pub use expr::LatticeExpr;
pub use fan::{ConeFan, DEFAULT_PIECE_CAP};
pub use geometry::{BallKind, DualBallSet, Functional, NormValue, SpaceSpec};
pub use norm::{Disjointness, NormCertificate, NormMethod};
pub use rat::Rat;
