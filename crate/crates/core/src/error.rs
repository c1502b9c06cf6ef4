use thiserror::Error;

/// Every failure the library can report. The classifiers use the predicate
/// variants to reject candidates, so these double as rejection reasons.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("blow-up count {0} is outside 0..=8")]
    InvalidBlowupCount(usize),
    #[error("classes live on different lattices ({0} vs {1})")]
    LatticeMismatch(String, String),
    #[error("coefficient vector has length {got}, lattice rank is {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("lattice {0} has no exceptional basis")]
    NoExceptionalBasis(String),
    #[error("could not identify the blown-down lattice: {0}")]
    UnidentifiedLattice(String),
    #[error("invalid fixed component: {0}")]
    InvalidFixedComponent(String),
    #[error("fixed point data violates a localization identity: {0}")]
    InconsistentFixedPointData(String),
    #[error("internal arithmetic error: {0}")]
    InternalArithmeticError(String),
    #[error("component is not a minimum: {0}")]
    NotAMinimum(String),
    #[error("{found} vanishing classes at level {level}, but {expected} index-4 points")]
    VanishingCycleMismatch { level: i64, expected: usize, found: usize },
    #[error("area continuity violated: {0}")]
    AreaContinuityViolation(String),
    #[error("vanishing classes are not pairwise disjoint: {0}")]
    NonDisjointBlowdown(String),
    #[error("level {t} lies outside the interval [{lo}, {hi}]")]
    OutOfInterval { t: String, lo: String, hi: String },
    #[error("slices are not adjacent: {0}")]
    NotAdjacentSlices(String),
    #[error("state is not the top slice below a sphere maximum: {0}")]
    NotASphereMaximum(String),
    #[error("a surviving candidate touches the coefficient box boundary (bound {bound}): {witness}")]
    BoundTooSmall { bound: i64, witness: String },
    #[error("classification does not match the reference table: {0}")]
    ClassificationMismatch(String),
    #[error("capacity formula needs an isolated minimum: {0}")]
    CapacityFormulaInapplicable(String),
    #[error("polytope {0} is not Delzant: {1}")]
    NotDelzant(String, String),
    #[error("circle {1:?} does not act semifreely on polytope {0}")]
    NotSemifree(String, [i64; 3]),
    #[error("no balancing shift for polytope {0}: {1}")]
    NotBalanced(String, String),
    #[error("no classifier row matches polytope {0}: {1}")]
    NoMatchingTfd(String, String),
    #[error("polytope {0} is not reflexive: {1}")]
    NotReflexive(String, String),
    #[error("malformed polytope {0}: {1}")]
    InvalidPolytope(String, String),
    #[error("circle direction {0:?} is not primitive")]
    NonPrimitiveDirection([i64; 3]),
}

pub type Result<T> = std::result::Result<T, Error>;
