use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("matrix is singular")]
    Singular,
    #[error("budget exceeded: {what} has {size} elements, budget is {budget}")]
    Budget { what: String, size: u128, budget: u64 },
    #[error("bound exceeded: {what} = {value} > {bound}")]
    Bound { what: String, value: usize, bound: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("κ degenerate: p | n (p = {p}, n = {n})")]
    DegenerateForm { p: u32, n: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}
