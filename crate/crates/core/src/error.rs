//! Error type shared by the whole crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its documented range.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Sample count does not match the stated dimensions.
    #[error("expected {}x{} = {} samples, got {got}", width, height, width * height)]
    BadSampleCount {
        width: usize,
        height: usize,
        got: usize,
    },

    /// A sample is NaN or infinite.
    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),

    /// An operation requiring 8-bit quantized input received a plane with
    /// non-integer or out-of-range samples.
    #[error("plane is not quantized to 8-bit levels: sample {value} at index {index}")]
    NotQuantized { value: f64, index: usize },

    /// Operand dimensions disagree.
    #[error("dimension mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    /// The image is too small for the operation.
    #[error("image too small: need at least {min_width}x{min_height}, got {width}x{height}")]
    TooSmall {
        min_width: usize,
        min_height: usize,
        width: usize,
        height: usize,
    },

    /// CEF is undefined when the reference image has zero colourfulness.
    #[error("contrast enhancement factor is undefined for a grayscale reference")]
    GrayscaleReference,

    /// A fusion score went negative, which the scoring scheme cannot produce.
    #[error("internal logic error: negative fusion score {0}")]
    NegativeScore(f64),

    /// A batch run was requested with no inputs.
    #[error("batch contains no inputs")]
    EmptyBatch,
}
