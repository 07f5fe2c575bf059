//! Thread-pool plumbing. `CTQW_THREADS` caps the worker count.

use ctqw_core::analysis::{self, EnsembleConfig, EnsembleResult};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const THREADS_ENV: &str = "CTQW_THREADS";

/// Parses a `CTQW_THREADS` value; `None` leaves the choice to rayon.
pub fn thread_cap(value: Option<&str>) -> Result<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
    }
}

pub fn pool_from_env() -> Result<rayon::ThreadPool> {
    let cap = thread_cap(std::env::var(THREADS_ENV).ok().as_deref())?;
    build_pool(cap)
}

pub fn build_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))
}

/// Runs realizations concurrently; the reduction is still in index order,
/// so the result is bitwise identical to [`analysis::ensemble_average`].
pub fn ensemble_average(
    pool: &rayon::ThreadPool,
    config: &EnsembleConfig,
) -> Result<EnsembleResult> {
    config.validate()?;
    let members = pool.install(|| {
        (0..config.realizations)
            .into_par_iter()
            .map(|r| analysis::realization(config, r))
            .collect::<ctqw_core::Result<Vec<_>>>()
    })?;
    Ok(analysis::reduce_ensemble(config, members)?)
}
