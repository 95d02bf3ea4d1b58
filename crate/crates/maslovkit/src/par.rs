//! Data-parallel grid evaluation with a sequential fallback. Results are
//! collected in index order, so output is deterministic in both modes.

use crate::ExecMode;

#[cfg(feature = "parallel")]
pub(crate) fn map_grid<T, F>(len: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Auto if len >= 64 => (0..len).into_par_iter().map(f).collect(),
        _ => (0..len).map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_grid<T, F>(len: usize, _mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    (0..len).map(f).collect()
}
