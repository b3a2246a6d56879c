use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid ring descriptor or construction parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Two operands live over different rings, precisions or truncation sets.
    #[error("operand mismatch: {0}")]
    Mismatch(String),

    /// The requested tensor product of rings is not in the supported table.
    #[error("tensor product not implemented for this pair: {0} x {1}")]
    UnsupportedTensor(String, String),

    /// Operation requires a property the input does not have (e.g. a
    /// commutative ring, a special unit, chain-compatible shapes).
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Brute-force enumeration would exceed the size guard.
    #[error("resource guard exceeded: {0}")]
    SizeGuard(String),

    /// Malformed JSON input.
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
