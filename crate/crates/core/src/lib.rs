//! 2-factor homology of planar trivalent graphs with perfect matchings.
//!
//! A plane graph is stored as a rotation system. Each matching edge is a
//! coordinate of the hypercube of resolutions; the crate builds the
//! resolution diagrams, the bigraded chain complex and its homology, the
//! chain-level moduli data of the flow category, and closed webs from
//! PD codes.

pub mod census;
mod error;
pub mod invariants;
pub mod moduli;
mod par;
pub mod plane_graph;
pub mod resolution;
pub mod webs;

pub use error::{Error, Result};
pub use invariants::{
    build_complex, euler_check, homology, two_factor_polynomial, BigradedComplex, BigradedGroups,
    LaurentPoly, Ring,
};
pub use plane_graph::{read_graph, write_graph, FlipDisk, HalfEdge, MatchedGraph};
pub use resolution::{in_family_g, resolve, scan_faces, ArcKind, FaceReport, Hypercube, State};
