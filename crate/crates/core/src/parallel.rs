//! Deterministic reductions over quadrature nodes.
//!
//! Work is split into fixed-size chunks independent of the thread count;
//! each chunk is reduced sequentially and chunk partials are combined in
//! index order. Parallel and sequential runs are therefore bit-identical.

use num_complex::Complex64;
use num_traits::Zero;
use std::ops::AddAssign;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Number of items reduced sequentially inside one chunk.
pub const CHUNK: usize = 512;

/// Execution policy for node loops. `parallel` is ignored when the crate is
/// built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Execution {
    pub parallel: bool,
}

impl Default for Execution {
    fn default() -> Self {
        Self {
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl Execution {
    pub const SEQUENTIAL: Execution = Execution { parallel: false };

    /// Σ_{i<len} f(i) with a fixed reduction order.
    pub fn sum<T, F>(self, len: usize, f: F) -> T
    where
        T: Copy + Zero + AddAssign + Send,
        F: Fn(usize) -> T + Sync,
    {
        let chunk_sum = |c: usize| {
            let mut acc = T::zero();
            for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                acc += f(i);
            }
            acc
        };
        let partials = self.map_chunks(len.div_ceil(CHUNK), chunk_sum);
        let mut total = T::zero();
        for p in partials {
            total += p;
        }
        total
    }

    /// Vector-valued reduction: `f(i, acc)` adds item `i`'s contribution
    /// into an accumulator of length `width`.
    pub fn sum_vec<F>(self, len: usize, width: usize, f: F) -> Vec<Complex64>
    where
        F: Fn(usize, &mut [Complex64]) + Sync,
    {
        let chunk_sum = |c: usize| {
            let mut acc = vec![Complex64::zero(); width];
            for i in c * CHUNK..((c + 1) * CHUNK).min(len) {
                f(i, &mut acc);
            }
            acc
        };
        let partials = self.map_chunks(len.div_ceil(CHUNK), chunk_sum);
        let mut total = vec![Complex64::zero(); width];
        for p in partials {
            for (t, v) in total.iter_mut().zip(p) {
                *t += v;
            }
        }
        total
    }

    /// Order-preserving map over `0..len`.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        self.map_chunks(len, f)
    }

    fn map_chunks<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        #[cfg(feature = "parallel")]
        if self.parallel {
            return (0..count).into_par_iter().map(&f).collect();
        }
        (0..count).map(f).collect()
    }
}
