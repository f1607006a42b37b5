use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} = {value} is outside its allowed range")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    #[error("outcome has vanishing probability ({probability:e}); conditional state undefined")]
    ImpossiblePostselection { probability: f64 },

    #[error("requested Bell branch has identically zero amplitude")]
    DegenerateBranch,

    #[error("truncation window too small: need n_max >= {needed}, got {got}")]
    WindowTooSmall { needed: u32, got: u32 },

    #[error("population {population:e} leaked into the guard Fock row")]
    TruncationOverflow { population: f64 },

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("ket flavor mismatch: expected {expected}")]
    FlavorMismatch { expected: &'static str },
}
