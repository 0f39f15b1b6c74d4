use thiserror::Error;

/// Unified error type for the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    // --- finite fields ---
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field order {0}^{1} exceeds the 2^31 cap")]
    FieldTooLarge(u64, u32),
    #[error("discrete logarithm of the zero element is undefined")]
    ZeroElement,
    #[error("GF(p^{r}) is not a subfield of GF(p^{m})")]
    NotASubfield { r: u32, m: u32 },
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    // --- rulers ---
    #[error("marks are not strictly increasing within [0, {v})")]
    BadMarks { v: u64 },
    #[error("marks do not form a valid modular Golomb ruler mod {v}")]
    InvalidRuler { v: u64 },
    #[error("multiplier {m} is not coprime to the modulus {v}")]
    NotCoprime { m: u64, v: u64 },
    #[error("deletion set is not a subset of the marks")]
    NotASubset,
    #[error("modulus {v} does not exceed the largest mark {max}")]
    ModulusTooSmall { v: u64, max: u64 },
    #[error("empty modulus range")]
    EmptyRange,
    #[error("modulus {v} is below the Golomb bound 2L+1 = {bound}")]
    ModulusBelowGolombBound { v: u64, bound: u64 },
    #[error("marks do not form a Golomb ruler")]
    NotGolomb,
    #[error("{t} does not divide {v}")]
    NotADivisor { t: u64, v: u64 },
    #[error("no reference data for k = {0}")]
    OutOfTable(u64),

    // --- constructions ---
    #[error("{0} is not a prime power (or exceeds the supported range)")]
    NotPrimePower(u64),
    #[error("{g} is not a primitive root mod {p}")]
    NotPrimitiveRoot { g: u64, p: u64 },
    #[error("parameter s = {s} is out of range for q = {q}")]
    BadS { q: u64, s: u64 },
    #[error("no line meets the point set in exactly {k} points")]
    EmptyLineSet { k: u64 },
    #[error("line degree through the point set is not constant ({0} vs {1})")]
    NotConstant(u64, u64),
    #[error("generator precondition failed: {0}")]
    PreconditionFailed(String),

    // --- matrices ---
    #[error("delta {delta} exceeds the class weight {w}")]
    DeltaTooBig { delta: u64, w: u64 },
    #[error("block count c = {c} is out of range 1..={t}")]
    BadC { c: u64, t: u64 },
    #[error("block order t = {0} must be even")]
    TOdd(u64),
    #[error("f = {f} is out of range 1..={half}")]
    BadF { f: u64, half: u64 },
    #[error("matrix is not {k}-regular: {detail}")]
    NotRegular { k: u64, detail: String },
    #[error("perfect matching failed on a regular bipartite graph (invariant violation)")]
    MatchingFailed,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not a valid configuration: {0}")]
    NotAConfiguration(String),

    // --- extension construction ---
    #[error("aggregate is invalid: {0}")]
    InvalidAggregate(String),
    #[error("extension capacity exceeded: at most {max} extensions are available")]
    CapacityExceeded { max: u64 },
    #[error("block shape (t={t}, d={d}) too small for k={k}")]
    ShapeTooSmall { t: u64, d: u64, k: u64 },
    #[error("weight vector is not 0/1 or does not match a supported pattern")]
    WeightsNotBinary,

    // --- spectrum ---
    #[error("record for k = {k} is populated only up to {scanned}, need {need}")]
    NotPopulated { k: u64, scanned: u64, need: u64 },
    #[error("witness replay mismatch at step {step}: {detail}")]
    ReplayMismatch { step: usize, detail: String },
    #[error("registry conflict: produced witness for ({v},{k}) contradicts fact {fact}")]
    RegistryConflict { v: u64, k: u64, fact: String },

    // --- io ---
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
