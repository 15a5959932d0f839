//! Command-line front end for `fluxbound`: seeded samplers, scenario
//! runners, table output and the verification harness.

#![forbid(unsafe_code)]

pub mod error;
pub mod output;
pub mod runners;
pub mod sampler;
pub mod verify;

pub use error::{CliError, CliResult};

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `None`. Results never depend on the choice.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
    }
}
