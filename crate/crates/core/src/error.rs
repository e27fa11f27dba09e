use thiserror::Error;

/// Errors raised by the estimation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample `{sample}` has {len} observation(s); at least 2 are required")]
    Length { sample: &'static str, len: usize },

    #[error("sample `{sample}` has zero empirical variance")]
    DegenerateVariance { sample: &'static str },

    #[error("leading coefficient is zero; not a cubic")]
    NotCubic,

    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
