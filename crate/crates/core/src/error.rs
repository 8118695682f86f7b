use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("level index {0} out of range 0..=7")]
    LevelOutOfRange(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("tones overlap on level {0}; simultaneous tones must address disjoint level pairs")]
    OverlappingTones(usize),

    #[error("tone addresses the same level {0} twice")]
    DegenerateTone(usize),

    #[error("forbidden transition: matrix element is zero, duration would be infinite")]
    ZeroElement,

    #[error("forbidden transition ({upper},{lower}): matrix element is zero, duration would be infinite")]
    ForbiddenTransition { upper: usize, lower: usize },

    #[error("ambiguous eigenstate labelling for M={label}: best overlap {best:.4} vs runner-up {second:.4}")]
    AmbiguousLabeling { label: usize, best: f64, second: f64 },

    #[error("malformed gate: {0}")]
    MalformedGate(String),

    #[error("cannot parse gate `{input}`: {reason} (expected KIND:CONTROLS->TARGET, e.g. CCNOT:QR->S, NOT:S, CUT:R->Q(1.2,0.4))")]
    GateParse { input: String, reason: String },

    #[error("propagator column {0} is not a basis vector")]
    NotPermutation(usize),

    #[error("integration under-resolved: {steps} steps per shortest period, at least {min} required")]
    UnderResolved { steps: u32, min: u32 },

    #[error("integration needs {required} steps, budget is {budget}")]
    StepBudgetExceeded { required: u64, budget: u64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("schedule format: {0}")]
    ScheduleFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
