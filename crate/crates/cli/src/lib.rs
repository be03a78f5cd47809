//! Figure pipelines, resumable sweeps and the self-test behind the
//! `fockvortex` binary.

pub mod config;
pub mod error;
pub mod figures;
pub mod manifest;
pub mod output;
pub mod pipeline;
pub mod selftest;

pub use error::{CliError, Result};

/// Sizes the global rayon pool from `FOCKVORTEX_THREADS` when set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("FOCKVORTEX_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        CliError::usage(
            "FOCKVORTEX_THREADS",
            format!("`{v}` is not a positive integer"),
        )
    })?;
    // a pool built earlier in the process wins
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_variable_must_be_positive() {
        std::env::set_var("FOCKVORTEX_THREADS", "zero");
        let bad = configure_threads();
        std::env::set_var("FOCKVORTEX_THREADS", "0");
        let zero = configure_threads();
        std::env::remove_var("FOCKVORTEX_THREADS");
        assert_eq!(bad.unwrap_err().exit_code(), error::EXIT_USAGE);
        assert_eq!(zero.unwrap_err().exit_code(), error::EXIT_USAGE);
        assert!(configure_threads().is_ok());
    }
}
