use thiserror::Error;

/// Which precondition of the index computation an input failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    TwoWide,
    ParityGraded,
    DownwardEulerian,
    DiscreteMorse,
}

impl std::fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Hypothesis::TwoWide => "not 2-wide",
            Hypothesis::ParityGraded => "not parity-graded",
            Hypothesis::DownwardEulerian => "not downward Eulerian",
            Hypothesis::DiscreteMorse => "not a discrete Morse function",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("cover relation contains a cycle through `{0}`")]
    CycleDetected(String),
    #[error("edge ({0}, {1}) is implied transitively by other covers")]
    NonCoverEdge(String, String),
    #[error("({0}, {1}) is not a cover pair")]
    NotACover(String, String),
    #[error("no Morse value for element `{0}`")]
    MissingValue(String),
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("invalid discrete Morse function at `{element}`: {count} non-increasing covers {direction}")]
    InvalidMorseFunction {
        element: String,
        direction: &'static str,
        count: usize,
    },
    #[error("poset is not 2-wide: {0} ≺ {1} ≺ {2} has no alternative middle element")]
    NotTwoWide(String, String, String),
    #[error("comparable elements `{0}` and `{1}` share the value {2}")]
    NonGeneralFunction(String, String, String),
    #[error("projection is not general: adjacent vertices `{0}` and `{1}` share first coordinate {2}")]
    NotGeneral(String, String, String),
    #[error("cannot embed an empty poset")]
    EmptyPoset,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(Hypothesis),
    #[error("index mismatch at `{element}`: computed {computed}, predicted {predicted}")]
    Mismatch {
        element: String,
        computed: i64,
        predicted: i64,
    },
    #[error("{identity} failed: {lhs} != {rhs}")]
    IdentityViolated { identity: &'static str, lhs: i64, rhs: i64 },
    #[error("element `{a}` has non-increasing covers both below (`{below}`) and above (`{above}`) on a 2-wide poset")]
    ExclusivityViolated { a: String, below: String, above: String },
    #[error("normalization step {step} left `{element}` {problem}")]
    NormalizationFailed { step: u8, element: String, problem: String },
    #[error("malformed complex description: {0}")]
    MalformedSpec(String),
    #[error("rank conflict at `{0}`: {1}")]
    RankConflict(String, String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
