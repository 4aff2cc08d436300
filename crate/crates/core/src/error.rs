use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edges form a directed cycle through {0:?}")]
    Cycle(Vec<String>),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node `{0}` declared more than once")]
    DuplicateNode(String),
    #[error("invalid node name `{0}`: expected a nonempty ASCII identifier")]
    InvalidName(String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("variable sets overlap on `{0}`")]
    Overlap(String),
    #[error("empty variable set: {0}")]
    EmptySet(&'static str),
    #[error("invalid chain depth {0}, expected >= 1")]
    InvalidDepth(usize),
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),

    #[error("CPT row {row} of `{node}` sums to {sum}")]
    Normalization { node: String, row: usize, sum: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("state space of {cells} cells exceeds the cap of {cap}")]
    StateSpaceTooLarge { cells: u128, cap: usize },
    #[error("evidence {0} has zero probability")]
    ZeroProbabilityEvidence(String),
    #[error("value {value} out of range for `{var}` with cardinality {card}")]
    ValueOutOfRange { var: String, value: usize, card: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("{criterion} criterion not met: {reason}{}", witness_suffix(.witness))]
    CriterionNotMet { criterion: String, reason: String, witness: Option<Vec<String>> },
    #[error("adjustment set contains latent node `{0}`")]
    LatentAdjustment(String),
    #[error("`{0}` is not a latent node")]
    NotLatent(String),
    #[error("positivity violated: zero mass at {0}")]
    PositivityViolation(String),

    #[error("negative time-to-accident {0}")]
    NegativeTta(f64),
    #[error("invalid scenario parameter: {0}")]
    Parameter(String),
    #[error("cannot parse effect query `{0}`")]
    QuerySyntax(String),
    #[error("json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

fn witness_suffix(w: &Option<Vec<String>>) -> String {
    match w {
        Some(trail) => format!(" (open trail {})", trail.join(" - ")),
        None => String::new(),
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
