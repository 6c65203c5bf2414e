use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,
    #[error("cone apex is not on the curve (distance {0:.3e})")]
    ApexOffCurve(f64),
    #[error("empty curve")]
    EmptyCurve,
    #[error("curve is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("root not flat: shrink input or raise eps (beta {beta:.4} >= eps {eps})")]
    RootNotFlat { beta: f64, eps: f64 },
    #[error("ball is outside the root cube")]
    OutOfDomain,
    #[error("cube {0} is not Flat-Bad")]
    NotFlatBad(usize),
    #[error("straightening diverged after {0} repairs")]
    StraighteningDiverged(usize),
    #[error("bridge interior meets the curve at distance {0:.3e}")]
    BridgeMeetsCurve(f64),
    #[error("network is disconnected")]
    NetworkDisconnected,
    #[error("point is not on the network (distance {0:.3e})")]
    OffNetwork(f64),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn at(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// True for errors caused by bad input files or configuration.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Input(_)
            | Error::Config(_)
            | Error::EmptyCurve
            | Error::Disconnected(_)
            | Error::Dimension { .. }
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Io(_)
            | Error::RootNotFlat { .. } => true,
            Error::Stage { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}
