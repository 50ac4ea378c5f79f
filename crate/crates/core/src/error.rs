use thiserror::Error;

use crate::subset::GroundSubset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    // --- diagram input ---
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("ground set size {0} is outside 0..=64")]
    SizeOutOfRange(usize),
    #[error("path has {found} steps but the header declares n = {expected}")]
    PathLengthMismatch { expected: usize, found: usize },
    #[error("path has {found} vertical steps but the header declares r = {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("dot ({s},{h}): {s} is not a sink label")]
    DotRowNotSink { s: usize, h: usize },
    #[error("dot ({s},{h}): {h} is not a source label")]
    DotColumnNotSource { s: usize, h: usize },
    #[error("dot ({s},{h}): no such box, the sink must precede the source")]
    DotOutsideDiagram { s: usize, h: usize },
    #[error("duplicate dot ({s},{h})")]
    DuplicateDot { s: usize, h: usize },
    #[error(
        "Le-property violated at empty box ({},{}) (dot above at ({},{}), dot to the left at ({},{}))",
        .0.empty.0, .0.empty.1, .0.above.0, .0.above.1, .0.left.0, .0.left.1
    )]
    LeViolation(crate::diagram::LeViolation),
    #[error("invalid JSON diagram: {0}")]
    Json(String),

    // --- labels and sets ---
    #[error("label {label} is outside the ground set 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },
    #[error("cannot parse set argument {0:?}; expected comma-separated labels")]
    BadSetArgument(String),
    #[error("label {0} is not a source")]
    NotASource(usize),
    #[error("label {0} is not a sink")]
    NotASink(usize),
    #[error("source and target sets overlap on {0}")]
    OverlappingEnds(GroundSubset),
    #[error("vertex {0} does not belong to the digraph")]
    UnknownVertex(usize),

    // --- matroid kernel ---
    #[error("rank {k} is outside 0..={r}")]
    RankOutOfRange { k: usize, r: usize },
    #[error("{set} is not a coline (a flat of rank {expected})")]
    NotAColine { set: GroundSubset, expected: usize },
    #[error("delete and contract sets overlap on {0}")]
    OverlappingMinor(GroundSubset),
    #[error("the diagram does not generate the given matroid")]
    DiagramMismatch,

    // --- colines ---
    #[error("positroid is not simple (loops {loops}, {parallel} parallel pair(s))")]
    NotSimple {
        loops: GroundSubset,
        parallel: usize,
    },
    #[error("positroid has rank {0}; a positive coline is only guaranteed for rank >= 3")]
    RankTooSmall(usize),
    #[error("the lattice path has no two consecutive sinks")]
    NoConsecutiveSinks,
    #[error("coline {coline} has {found} simple copoint(s); a witness needs two")]
    TooFewSimpleCopoints { coline: GroundSubset, found: usize },
    #[error("coline report and the lifted remainder overlap on {0}")]
    OverlappingLift(GroundSubset),
    #[error("no positive coline among the candidates (counterexample?):\n{0}")]
    TheoremViolation(String),

    // --- enumeration ---
    #[error("cannot enumerate diagrams of size {0}; expected 1..=64")]
    EnumerationSize(usize),
    #[error("unknown suite {0:?}; expected theorem, corollary, lemma, duality, rank-oracle, axioms or all")]
    UnknownSuite(String),
    #[error("cannot start worker pool: {0}")]
    ThreadPool(String),
}

impl Error {
    /// Internal assertion failures (as opposed to bad input).
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}
