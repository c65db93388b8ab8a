//! Harmonic morphisms and harmonic group actions on finite multigraphs.
//!
//! The crate provides:
//!
//! - [`multigraph`]: connected loopless multigraphs, genus, neighborhoods,
//!   canonical forms and isomorphism witnesses;
//! - [`morphism`]: graph morphisms with vertical (collapsed) edges,
//!   harmonicity, multiplicities, degree, composition;
//! - [`action`]: automorphism groups, quotient graphs, and both the
//!   subgroup-quantified and the stabilizer-criterion harmonicity tests;
//! - [`ramification`]: exact ramification profiles, the graph
//!   Riemann–Hurwitz identity, branch-locus classification, and the
//!   order-bound predicates;
//! - [`covers`]: abelian voltage assignments, derived covers, automorphism
//!   lifting, and the extremal cover family attaining `6(g-1)`;
//! - [`families`]: named graphs and actions used as golden instances;
//! - [`census`]: exhaustive enumeration of small multigraphs by genus and
//!   batch verification of every bound over all harmonic actions found;
//! - [`io`]: JSON codecs for graphs, morphisms, actions and profiles, plus
//!   DOT export.
//!
//! All arithmetic is exact: group orders and multiplicities are integers,
//! ramification numbers are reduced big rationals.

pub mod action;
mod canon;
pub mod census;
pub mod covers;
pub mod error;
pub mod families;
pub mod io;
pub mod morphism;
pub mod multigraph;
pub mod ramification;

pub use error::{Error, Result};
pub use multigraph::{EdgeId, MultiGraph, VertexId};
