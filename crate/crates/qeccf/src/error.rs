use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not a projector: {0}")]
    NotProjector(String),

    #[error("trace {0} is not within tolerance of an integer")]
    NonIntegralTrace(f64),

    #[error("generator {0} is not unitary")]
    NonUnitary(usize),

    #[error("group closure exceeded {0} elements")]
    ClosureOverflow(usize),

    #[error(
        "elements {a} and {b} are {dist:.3e} apart: too close to tell apart, too far to identify"
    )]
    NearCollision { a: usize, b: usize, dist: f64 },

    #[error("element index {0} out of range")]
    BadIndex(usize),

    #[error("subset is not closed under multiplication")]
    NotClosed,

    #[error("subgroup not normal")]
    NotNormal,

    #[error("{axiom} axiom violated: {detail}")]
    Axiom { axiom: &'static str, detail: String },

    #[error("invalid stabilizer: {0}")]
    Stabilizer(String),

    #[error("CSS orthogonality violated")]
    CssOrthogonality,

    #[error("number of qubits {0} out of range")]
    QubitRange(usize),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("domain mismatch: {0}")]
    Domain(String),

    #[error("invalid transform assignment: {0}")]
    Assignment(String),

    #[error("ambiguous case classification: {0}")]
    AmbiguousCase(String),

    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            msg: msg.into(),
        }
    }
}
