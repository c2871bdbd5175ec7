use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unbounded: {0}")]
    Unbounded(String),
    #[error("malformed: {0}")]
    Malformed(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("missed-breakpoint: sample at t = {t} disagrees with the fit on chamber {chamber}")]
    MissedBreakpoint { chamber: usize, t: String },
    #[error("insufficient-samples: chamber {chamber} has {found} distinct interior samples, needs {needed}")]
    InsufficientSamples {
        chamber: usize,
        found: usize,
        needed: usize,
    },
    #[error("out-of-domain: {0}")]
    OutOfDomain(String),
    #[error("discontinuous: pieces {left} and {right} disagree at t = {t}")]
    Discontinuous { left: usize, right: usize, t: String },
    #[error("lattice-cap: {0}")]
    LatticeCap(String),
    #[error("invalid rational literal `{0}`")]
    RationalLiteral(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("invalid pair: {0}")]
    InvalidPair(String),
    #[error("not-big: -K-Delta has a polytope with empty interior")]
    NotBig,
    #[error("requires-smooth: fan cone {0} is not unimodular")]
    RequiresSmooth(usize),
    #[error("non-simplicial-model: vertex {0} of the anticanonical polytope lies on more than dim facets")]
    NonSimplicialModel(String),
    #[error("model-not-klt: log discrepancy {value} <= 0 on the model at {vector}")]
    ModelNotKlt { vector: String, value: String },
    #[error("not-effective: {0}")]
    NotEffective(String),
    #[error("no-sections: N_m = 0 at m = {0}")]
    NoSections(u64),
    #[error("no-candidates: candidate radius must be at least 1")]
    NoCandidates,
    #[error("requires-stable-model: delta_Z = {0} must exceed 1")]
    RequiresStableModel(String),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("missing-degree: filtration has no data in degree {0}")]
    MissingDegree(u64),
    #[error("internal: {0}")]
    Internal(String),
}
