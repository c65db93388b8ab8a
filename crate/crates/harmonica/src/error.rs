//! Error type shared by every module of the crate.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or analyzing graphs,
/// morphisms and group actions.
///
/// `FiberInconsistent`, `ClassificationGap` and `NonconstantPreimageCount`
/// are assertion-style variants: they encode identities that hold for every
/// harmonic action, so seeing one of them means an implementation bug, not
/// bad input. Tests treat them as such.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An edge with equal endpoints was supplied.
    LoopEdge { edge: String },
    /// A vertex or edge token occurs twice.
    DuplicateId { id: String },
    /// A graph needs at least one vertex.
    EmptyGraph,
    /// The operation requires a connected graph.
    Disconnected,
    UnknownVertex { name: String },
    UnknownEdge { name: String },
    /// The edge map sends an edge somewhere incompatible with the vertex map.
    NotAMorphism { edge: String },
    /// A collapsed edge whose endpoints have distinct images.
    EndpointMismatch { edge: String },
    /// Composition of morphisms whose middle graphs differ.
    SourceTargetMismatch,
    /// Degree is undefined for a morphism that collapses everything.
    ConstantMorphism,
    /// The operation requires a harmonic morphism or action.
    NotHarmonic,
    /// The morphism fails the harmonicity count at this vertex.
    NotHarmonicAt { vertex: String },
    /// The whole neighborhood of this vertex is collapsed.
    DegenerateAt { vertex: String },
    /// A harmonic morphism reported different preimage counts for two
    /// target edges; unreachable unless the implementation is wrong.
    NonconstantPreimageCount,
    /// An automorphism's edge permutation disagrees with its vertex permutation.
    IncidenceViolation { edge: String },
    /// A claimed permutation is not a bijection.
    NotBijective,
    /// Group closure outgrew the configured cap.
    ClosureBudgetExceeded { limit: usize },
    /// A search or enumeration outgrew the configured cap.
    BudgetExceeded { what: &'static str, limit: usize },
    /// Two vertices over the same quotient vertex disagree about
    /// ramification data; unreachable for harmonic actions.
    FiberInconsistent { quotient_vertex: String },
    /// A ramification profile fell outside the exhaustive branch-locus case
    /// analysis; unreachable for profiles of harmonic actions.
    ClassificationGap { detail: String },
    /// The check is only meaningful for genus at least two.
    GenusTooSmall,
    /// The inputs do not satisfy the hypotheses of the statement being checked.
    HypothesisUnmet { detail: String },
    /// The supplied edge set is not a spanning tree.
    BadTree { detail: String },
    /// The voltages do not generate the group, so the cover splits.
    DisconnectedCover,
    /// The rooted tree has no edges, which collapses the construction.
    DegenerateTree,
    /// The multiplication table is not a group.
    InvalidGroupTable { detail: String },
    /// Malformed input file.
    Parse { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LoopEdge { edge } => write!(f, "edge '{edge}' has equal endpoints (loops are not allowed)"),
            Error::DuplicateId { id } => write!(f, "duplicate id '{id}'"),
            Error::EmptyGraph => write!(f, "a graph needs at least one vertex"),
            Error::Disconnected => write!(f, "graph is not connected"),
            Error::UnknownVertex { name } => write!(f, "unknown vertex '{name}'"),
            Error::UnknownEdge { name } => write!(f, "unknown edge '{name}'"),
            Error::NotAMorphism { edge } => write!(f, "edge '{edge}' maps to an edge not matching its endpoint images"),
            Error::EndpointMismatch { edge } => write!(f, "edge '{edge}' is collapsed but its endpoints have distinct images"),
            Error::SourceTargetMismatch => write!(f, "morphism composition: target of the first differs from source of the second"),
            Error::ConstantMorphism => write!(f, "operation undefined for a constant morphism"),
            Error::NotHarmonic => write!(f, "morphism or action is not harmonic"),
            Error::NotHarmonicAt { vertex } => write!(f, "morphism is not harmonic at vertex '{vertex}'"),
            Error::DegenerateAt { vertex } => write!(f, "morphism collapses the whole neighborhood of vertex '{vertex}'"),
            Error::NonconstantPreimageCount => write!(f, "harmonic morphism with unequal edge preimage counts (internal error)"),
            Error::IncidenceViolation { edge } => write!(f, "edge permutation breaks incidence at edge '{edge}'"),
            Error::NotBijective => write!(f, "map is not a bijection"),
            Error::ClosureBudgetExceeded { limit } => write!(f, "group closure exceeded the budget of {limit} elements"),
            Error::BudgetExceeded { what, limit } => write!(f, "{what} exceeded the budget of {limit}"),
            Error::FiberInconsistent { quotient_vertex } => write!(f, "inconsistent ramification data over quotient vertex '{quotient_vertex}' (internal error)"),
            Error::ClassificationGap { detail } => write!(f, "branch locus outside the case analysis: {detail} (internal error)"),
            Error::GenusTooSmall => write!(f, "check requires genus at least 2"),
            Error::HypothesisUnmet { detail } => write!(f, "hypotheses not satisfied: {detail}"),
            Error::BadTree { detail } => write!(f, "bad spanning tree: {detail}"),
            Error::DisconnectedCover => write!(f, "voltages do not generate the group: derived cover is disconnected"),
            Error::DegenerateTree => write!(f, "rooted tree must contain at least one edge"),
            Error::InvalidGroupTable { detail } => write!(f, "invalid group table: {detail}"),
            Error::Parse { detail } => write!(f, "parse error: {detail}"),
        }
    }
}

impl std::error::Error for Error {}
