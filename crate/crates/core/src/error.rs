use thiserror::Error;

/// Errors raised by field, polynomial, permutation and design operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{r} exceeds the supported size")]
    FieldTooLarge { p: u32, r: u32 },
    #[error("modulus must be monic of degree {expected} with coefficients below p")]
    InvalidModulus { expected: u32 },
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("element order is not a bijection onto the field")]
    InvalidOrder,
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("table has {got} entries, expected {expected}")]
    IncompleteTable { expected: usize, got: usize },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("permutation sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
    #[error("expected a tuple of {expected} permutations, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("polynomial is not a local permutation polynomial")]
    NotLpp,
    #[error("permutations do not form a permutation polynomial tuple")]
    InvalidTuple,
    #[error("grid is not a Latin square")]
    NotLatin,
    #[error("transposition points must differ")]
    EqualPoints,
    #[error("polynomial does not induce a permutation")]
    NotPermutation,
    #[error("gcd({n}, {p} - 1) != 1 or n out of range")]
    GcdViolation { p: u32, n: usize },
    #[error("construction unsupported for q = {0}")]
    UnsupportedOrder(usize),
    #[error("exponent e = {e} outside 0..={r}")]
    BadExponent { e: u32, r: u32 },
    #[error("invalid e-Klenian generators: {0}")]
    InvalidGenerators(String),
    #[error("construction requires odd characteristic")]
    EvenCharacteristic,
    #[error("polynomials do not form an orthogonal pair")]
    NotCompanions,
    #[error("polynomial is not linear with nonzero x and y coefficients")]
    NotLinearLpp,
    #[error("generated squares are not mutually orthogonal Latin squares")]
    NotMols,
    #[error("squares have different orders")]
    OrderMismatch,
    #[error("q = {q} exceeds the enumeration limit {limit}")]
    TooLarge { q: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
