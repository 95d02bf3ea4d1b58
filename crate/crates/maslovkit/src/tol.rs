//! Numerical tolerances. Frame/phase tolerances are process-global and may be
//! overridden once at startup (CLI `--tol`); the remaining constants are fixed.

use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_FRAME_TOL: f64 = 1e-9;
pub const DEFAULT_PHASE_TOL: f64 = 1e-7;

/// Threshold on singular values of the comparison matrix for intersection
/// detection.
pub const KERNEL_TOL: f64 = 1e-7;

/// Bisection/refinement accuracy in the path parameter.
pub const BISECT_EPS: f64 = 1e-10;

static FRAME_TOL: AtomicU64 = AtomicU64::new(0);
static PHASE_TOL: AtomicU64 = AtomicU64::new(0);

fn load(cell: &AtomicU64, default: f64) -> f64 {
    let bits = cell.load(Ordering::Relaxed);
    if bits == 0 {
        default
    } else {
        f64::from_bits(bits)
    }
}

pub fn frame_tol() -> f64 {
    load(&FRAME_TOL, DEFAULT_FRAME_TOL)
}

pub fn phase_tol() -> f64 {
    load(&PHASE_TOL, DEFAULT_PHASE_TOL)
}

/// Override both adjustable tolerances (frame and phase). Intended to be called
/// at most once, before any computation.
pub fn set_tols(frame: f64, phase: f64) {
    assert!(frame > 0.0 && phase > 0.0, "tolerances must be positive");
    FRAME_TOL.store(frame.to_bits(), Ordering::Relaxed);
    PHASE_TOL.store(phase.to_bits(), Ordering::Relaxed);
}
