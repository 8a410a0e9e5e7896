//! Trial-parallel preservation checks.
//!
//! Every trial owns the substream `(seed, index)`, and outcomes are collected
//! in index order before folding, so reports do not depend on the number of
//! workers.

use commrange_core::maps::{fold_outcomes, run_trial, validate_mode, MapSpec, Mode, PreservationReport};
use commrange_core::{Error, Result};
use rayon::prelude::*;

/// Runs `f` on a pool of `workers` threads; `0` picks rayon's default.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool construction").install(f)
}

/// Parallel counterpart of `commrange_core::maps::check_preservation`, with an
/// identical report.
pub fn check_preservation(m: &MapSpec, mode: Mode, trials: u64, seed: u64, tol: f64) -> Result<PreservationReport> {
    validate_mode(m, mode)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1"));
    }
    let outcomes = (0..trials).into_par_iter().map(|k| run_trial(m, mode, seed, k)).collect::<Result<Vec<_>>>()?;
    Ok(fold_outcomes(mode, seed, tol, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use commrange_core::maps::{self, Dagger};

    #[test]
    fn matches_sequential_for_any_worker_count() {
        let mut m = MapSpec::identity(3);
        m.dagger = Dagger::Transpose;
        let reference = maps::check_preservation(&m, Mode::Range, 64, 3, 1e-9).unwrap();
        for workers in [1, 3, 8] {
            let r = with_workers(workers, || check_preservation(&m, Mode::Range, 64, 3, 1e-9).unwrap());
            assert_eq!(r, reference, "workers={workers}");
        }
    }
}
