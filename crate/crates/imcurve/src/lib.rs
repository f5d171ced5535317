//! Exact construction and certification of imaginary plane curves over Q(i)
//! with the maximal number of real points.
//!
//! The crate is organised bottom-up: exact arithmetic ([`gaussian`], [`poly`]),
//! elimination ([`resultant`]), certified real solving ([`real_solve`]), local
//! singularity analysis ([`local`]), the geometric moves ([`transforms`],
//! [`patchwork`]), stage drivers ([`pipeline`]) and certificates.

pub mod certificate;
pub mod dyadic;
pub mod gaussian;
pub mod linalg;
pub mod local;
pub mod modular;
pub mod patchwork;
pub mod pipeline;
pub mod plot;
pub mod poly;
pub mod real_solve;
pub mod resultant;
pub mod seed;
pub mod topology;
pub mod transforms;
pub mod univariate;

pub use gaussian::GaussianRational;
pub use poly::{Chart, Monomial, PlanePoly, ProjectivePoint};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("chart error: {0}")]
    Chart(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("curve is not imaginary: {0}")]
    NotImaginary(String),
    #[error("real intersection is positive-dimensional: {0}")]
    PositiveDimensional(String),
    #[error("undecided at maximal refinement: {0}")]
    Indeterminate(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("rank deficiency: {0}")]
    RankDeficient(String),
    #[error("jet condition violated: {0}")]
    JetCondition(String),
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn at_stage(self, stage: &str) -> Error {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
