//! Exact certificates of rigidity and flexibility for real algebraic
//! systems and bar frameworks, built on power-series solutions of
//! quadratic systems.

pub mod certify;
pub mod corpus;
pub mod format;
pub mod quadsys;
pub mod ratlinalg;
pub mod rigidity;
pub mod series;
