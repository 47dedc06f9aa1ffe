use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("point is outside the image of branch {branch}")]
    OutOfImage { branch: u8 },
    #[error("point is outside the tangency window")]
    OutsideWindow,
    #[error("degenerate interval: a must be < b")]
    DegenerateInterval,
    #[error("perturbation supports overlap (entries {0} and {1})")]
    SupportsOverlap(usize, usize),
    #[error("orbit left the strips at step {tick}")]
    EscapedOrbit { tick: usize },
    #[error("bridges live on different carriers")]
    CarrierMismatch,
    #[error("no initial linked pair found: {0}")]
    SearchFailed(String),
    #[error("budget too large for the linking inequalities: {0}")]
    BudgetTooLarge(String),
    #[error("no bridge fits the length window: {0}")]
    NoFundamentalBridge(String),
    #[error("precision exhausted after {achieved} steps")]
    PrecisionExhausted { achieved: usize },
    #[error("chain window empty at generation {k}: {detail}")]
    WindowEmpty { k: usize, detail: String },
    #[error("tangency intersection not bracketed at generation {k}")]
    IntersectionNotBracketed { k: usize },
    #[error("rectangle inclusion failed at generation {k}: {detail}")]
    InclusionFailed { k: usize, detail: String },
    #[error("orbit too short: has {have}, need {need}")]
    OrbitTooShort { have: usize, need: usize },
    #[error("orbit escaped at tick {tick}")]
    OrbitEscaped { tick: usize },
    #[error("sample {sample} escaped at tick {tick}")]
    SampleEscaped { sample: usize, tick: usize },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("era condition violated at s = {s}")]
    EraConditionViolated { s: usize },
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
