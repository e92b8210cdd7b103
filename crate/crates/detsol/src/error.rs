use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation at a pole of the rational map (w = {w})")]
    PoleEvaluation { w: num_complex::Complex64 },

    #[error("root finder did not converge after {iterations} iterations (degree {degree})")]
    NonConvergence { iterations: usize, degree: usize },

    #[error("{what} is a critical value: the fiber polynomial has a repeated root")]
    CriticalValue { what: String },

    #[error("coincident points in {context}: |{a} - {b}| below tolerance")]
    Coincidence {
        context: &'static str,
        a: num_complex::Complex64,
        b: num_complex::Complex64,
    },

    #[error("constraint violation: {0}")]
    Constraint(String),

    #[error("dark solitons cannot be all-focusing: computed s = (+1,...,+1); the input data is inconsistent")]
    AllFocusing,

    #[error("{0} must be nonzero")]
    ZeroParameter(&'static str),

    #[error("point {index} is not a pair-merge point: |condition| = {magnitude:.3e} exceeds tolerance")]
    NonCriticalPoint { index: usize, magnitude: f64 },

    #[error("N = {n_requested} rational breathers exceed the component bound n = {n_components}")]
    TooManyBreathers {
        n_requested: usize,
        n_components: usize,
    },

    #[error("dromion coefficient {name} = {value:.6e} is not positive; the solution would be singular")]
    Positivity { name: &'static str, value: f64 },

    #[error("singular point: denominator determinant vanished to working precision")]
    SingularPoint,

    #[error("genus {genus} exceeds the limit {limit} for the exponential theta sum")]
    SizeLimit { genus: usize, limit: usize },

    #[error("too many singular grid points: {excluded} of {total} excluded (> 1%)")]
    TooManySingular { excluded: usize, total: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
