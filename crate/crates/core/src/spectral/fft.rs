//! Per-thread cache of FFT plans.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANNER: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        cache
            .entry((len, inverse))
            .or_insert_with(|| {
                if inverse {
                    planner.plan_fft_inverse(len)
                } else {
                    planner.plan_fft_forward(len)
                }
            })
            .clone()
    })
}

/// Unnormalized forward DFT, `X_k = sum_j x_j e^{-2 pi i jk/n}`.
pub(crate) fn forward_in_place(buf: &mut [Complex64]) {
    if buf.len() > 1 {
        plan(buf.len(), false).process(buf);
    }
}

/// Unnormalized inverse DFT, `x_j = sum_k X_k e^{+2 pi i jk/n}`.
pub(crate) fn inverse_in_place(buf: &mut [Complex64]) {
    if buf.len() > 1 {
        plan(buf.len(), true).process(buf);
    }
}

/// Signed lattice index of centered position `i` for an axis of length `n`.
#[inline]
pub(crate) fn signed_index(i: usize, n: usize) -> i64 {
    i as i64 - (n / 2) as i64
}

/// Storage position in FFT order of the centered position `i`.
#[inline]
pub(crate) fn fft_slot(i: usize, n: usize) -> usize {
    let k = signed_index(i, n);
    k.rem_euclid(n as i64) as usize
}
