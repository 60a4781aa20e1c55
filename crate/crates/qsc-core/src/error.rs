use thiserror::Error;

/// Errors produced by construction, verification and I/O.
///
/// Variants split into two families: malformed input (rejected up front) and
/// mathematical verification failures (a structure that was built but does
/// not satisfy the property it was required to have). [`Error::is_usage`]
/// reports the distinction so callers can map it onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field size q={0}; supported: 2, 4, 8")]
    UnsupportedField(u16),
    #[error("field elements have mismatched extension degrees {0} and {1}")]
    FieldMismatch(u8, u8),
    #[error("inversion of zero in GF({0})")]
    ZeroInverse(u16),
    #[error("unsupported affine dimension n={0}; supported: 2, 3")]
    UnsupportedDimension(usize),
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("maximal-arc verification failed for q={q}: line {line:?} meets the arc in {got} points (expected 0 or {degree})")]
    ArcVerification {
        q: u16,
        line: Vec<u32>,
        got: usize,
        degree: usize,
    },

    #[error("block {block} has {got} points, expected {expected}")]
    BlockSize {
        block: usize,
        expected: usize,
        got: usize,
    },
    #[error("point subset {subset:?} lies in {got} blocks, but {expected} elsewhere; not a {t}-design")]
    NotBalanced {
        t: usize,
        subset: Vec<usize>,
        expected: usize,
        got: usize,
    },
    #[error("design has {0} blocks; at least {1} required")]
    TooFewBlocks(usize, usize),
    #[error("point index {index} out of range for v={v}")]
    PointOutOfRange { index: usize, v: usize },
    #[error("duplicate point {point} in block {block}")]
    DuplicatePoint { block: usize, point: usize },
    #[error("replication identity fails: lambda*(v-1) = {lhs} is not divisible by k-1 = {rhs}")]
    NonIntegralReplication { lhs: u64, rhs: u64 },
    #[error("composition dimension mismatch: v2 = {v2} but v1*k2 = {expected}")]
    ComposeDimension { v2: usize, expected: usize },
    #[error("composition labeling mismatch: {0}")]
    ComposeLabeling(String),
    #[error("design is not quasi-symmetric: intersection numbers {0:?}")]
    NotQuasiSymmetric(Vec<usize>),
    #[error("quasi-symmetry check failed: expected intersection numbers {expected:?}, found {found:?}")]
    QuasiSymmetryMismatch {
        expected: (usize, usize),
        found: Vec<usize>,
    },
    #[error("base design verification failed: {0}")]
    BaseDesign(Box<Error>),

    #[error("unsupported prime p={0}; supported: 2, 3, 5, 7")]
    UnsupportedPrime(u8),
    #[error("code dimension {k} exceeds the enumeration guard {guard}; raise the guard to enumerate 2^{k} codewords")]
    DimensionGuard { k: usize, guard: usize },

    #[error("point permutation is not a design automorphism: image of block {block} is not a block")]
    NotAutomorphism { block: usize },
    #[error("orbit-matrix count depends on the representative chosen in point orbit {orbit}")]
    RepresentativeInconsistency { orbit: usize },
    #[error("non-fixed part of the orbit matrix is empty")]
    EmptyNonfixedPart,
    #[error("orbit lengths are not all equal: found {0:?}")]
    UnequalOrbitLengths(Vec<u32>),
    #[error("divisibility hypothesis fails: {0}")]
    Divisibility(String),
    #[error("not a permutation of [0,{n}): {reason}")]
    BadPermutation { n: usize, reason: String },
    #[error("theorem verification failed: {0}")]
    TheoremCheck(String),
    #[error("arithmetic overflow in exact orbit-matrix verification")]
    Overflow,

    #[error("weights out of order: w1={0} must be smaller than w2={1}")]
    WeightOrder(u32, u32),
    #[error("the two mu expressions disagree: w1*w2*q^(2-k) = {direct:?} but the quadratic form gives {quadratic}")]
    MuMismatch {
        direct: Option<i64>,
        quadratic: i64,
    },
    #[error("code is not projective: {0}")]
    NotProjective(String),
    #[error("code is not two-weight: nonzero weights {0:?}")]
    NotTwoWeight(Vec<u32>),
    #[error("codeword count {0} exceeds the vertex enumeration guard 2^20")]
    VertexBudget(u64),
    #[error("empirical graph parameters {found:?} do not match the formula parameters {expected:?}")]
    SrgMismatch {
        expected: (u64, u64, i64, i64),
        found: (u64, u64, i64, i64),
    },
    #[error("graph is not strongly regular: {0}")]
    NotStronglyRegular(String),
    #[error("lambda = {0} differs from mu = {1}; adjacency matrix is not a symmetric-design incidence matrix")]
    LambdaMuDiffer(i64, i64),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
}

impl Error {
    /// True when the error is a malformed-input / usage problem rather than
    /// a mathematical verification failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedField(_)
                | Error::FieldMismatch(..)
                | Error::UnsupportedDimension(_)
                | Error::ZeroDirection
                | Error::UnsupportedParameter(_)
                | Error::TooFewBlocks(..)
                | Error::PointOutOfRange { .. }
                | Error::DuplicatePoint { .. }
                | Error::UnsupportedPrime(_)
                | Error::DimensionGuard { .. }
                | Error::BadPermutation { .. }
                | Error::Io { .. }
                | Error::Parse { .. }
        )
    }
}
