use alloc::string::String;

pub type Result<T> = core::result::Result<T, ModelError>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    /// An input violates its documented invariant. `field` is the dotted
    /// path of the offending value, e.g. `finance.discount_rate`.
    #[error("invalid input `{field}`: {reason}")]
    InvalidInput { field: String, reason: String },

    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),

    #[error("discounted traffic is zero; price per Mbyte is undefined")]
    DegenerateDemand,

    #[error("total cost NPV is zero; cost shares are undefined")]
    DegenerateScenario,

    /// Floor minus ceiling has the same sign at both ends of the range.
    #[error("no break-even in demand multiplier range [{lo}, {hi}] (floor - ceiling: {gap_lo:.6} .. {gap_hi:.6})")]
    NoBreakEven {
        lo: f64,
        hi: f64,
        gap_lo: f64,
        gap_hi: f64,
    },
}

impl ModelError {
    pub(crate) fn invalid(field: &str, reason: impl Into<String>) -> Self {
        ModelError::InvalidInput {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors raised by the model on otherwise valid input
    /// (degenerate demand or cost, no break-even), false for validation
    /// failures.
    pub fn is_model_error(&self) -> bool {
        matches!(
            self,
            ModelError::DegenerateDemand
                | ModelError::DegenerateScenario
                | ModelError::NoBreakEven { .. }
        )
    }
}
