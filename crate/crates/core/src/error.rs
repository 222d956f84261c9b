use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("buffer length {actual} does not match {width}x{height}x{channels}")]
    BufferLength {
        width: usize,
        height: usize,
        channels: usize,
        actual: usize,
    },

    #[error("value {value} at index {index} is outside [0, 1] or not finite")]
    ValueOutOfRange { index: usize, value: f64 },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("trimap has no unknown pixels")]
    EmptyUnknownRegion,

    #[error("target pool is empty{}", if *.after_exclusion { " after excluding the source image" } else { "" })]
    EmptyTargetPool { after_exclusion: bool },

    #[error("inpainting mask covers the entire image")]
    MaskCoversImage,

    #[error("invalid trimap value {value} at index {index}; expected 0, 128 or 255")]
    TrimapEncoding { index: usize, value: u8 },

    #[error("empty score list")]
    EmptyScores,

    #[error("score {score} outside 1..=5")]
    ScoreOutOfRange { score: i64 },

    #[error(transparent)]
    Image(#[from] image::ImageError),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_dims(left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
