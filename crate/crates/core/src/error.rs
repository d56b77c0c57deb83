use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported prime {0} (need a prime between 2 and 97)")]
    InvalidPrime(u32),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid presentation: {0}")]
    Presentation(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("degree {degree} outside 0..={max}")]
    DegreeOutOfRange { degree: u32, max: u32 },

    #[error("element is not homogeneous")]
    NotHomogeneous,

    #[error("no operation table entry: {0}")]
    MissingTable(String),

    #[error("Q_{n} requested but n_max is {n_max}")]
    NMaxExceeded { n: u32, n_max: u32 },

    #[error("degree window too large: {requested} exceeds safe maximum {max}")]
    UnsafeWindow { requested: u32, max: u32 },

    #[error("class outside the tabulated span of transfer `{0}`")]
    OutsideTabulatedSpan(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),

    #[error("unknown transfer model `{0}`")]
    UnknownModel(String),

    #[error("entry `{0}` is a metadata stub and carries no ring")]
    StubEntry(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Parse and validation failures, as opposed to computational ones.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::Presentation(_)
                | Error::UnknownGenerator(_)
                | Error::UnknownEntry(_)
                | Error::UnknownModel(_)
                | Error::InvalidPrime(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
