use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("malformed permutation: {0}")]
    MalformedPermutation(String),

    #[error("element is not a member of the ambient group")]
    ForeignElement,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("element set is not closed under multiplication")]
    NotASubgroup,

    #[error("group is not abelian")]
    NotAbelian,

    #[error("prime {p} does not divide the group order {order}")]
    PrimeNotDividing { p: u64, order: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("subgroup of order {order} is not a {p}-group")]
    NotPGroup { p: u64, order: usize },

    #[error("the Sylow subgroup is not contained in the candidate subgroup")]
    SylowNotContained,

    #[error("the subgroup must be nontrivial")]
    TrivialSubgroup,

    #[error("Sylow subgroup is not split metacyclic")]
    NotSplitMetacyclic,

    #[error("G has a proper strongly p-embedded subgroup (G0 has order {g0_order} < {order})")]
    StronglyEmbeddedProper { g0_order: usize, order: usize },

    #[error("bad metacyclic parameters: {0}")]
    BadParameters(String),

    #[error("the power rule requires a split presentation")]
    NotSplit,

    #[error("closed form disagrees with element scan: {0}")]
    FormulaMismatch(String),

    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),

    #[error("no factorization g = c n found for element {0}")]
    NoFactorization(usize),

    #[error("bad field specification: {0}")]
    BadFieldSpec(String),

    #[error("invariant factors {0:?} do not form a divisibility chain")]
    BadInvariants(Vec<u64>),

    #[error("internal invariant violated: {0}")]
    InvariantViolated(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage { stage, source: Box::new(e) },
        }
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}
