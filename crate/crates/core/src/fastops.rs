//! FFT-based application of the structured kernels.
//!
//! `I_γ` has the Toeplitz kernel `k(j - i) = |j - i|^{γ-1}` (zero at lag 0)
//! and `H` the Hankel kernel `(1/π)/(j + i + 1/2)`. Substituting `i → -i`
//! turns the Hankel sum into a convolution with the reflected input, so both
//! reduce to one zero-padded linear convolution evaluated with a
//! power-of-two FFT.
//!
//! `T_{α,β}` has the product kernel `|i-j|^{-α}|i+j|^{-β}`, which is neither
//! Toeplitz nor Hankel; it is evaluated directly by
//! [`crate::operators::fractional_apply_window`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::FRAC_1_PI;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::numeric::log_log_slope;
use crate::operators::hilbert_apply_window;
use crate::report::{row, ExperimentReport};
use crate::seq::Sequence;

/// Output window, input support and transform length of one fast application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPlan {
    pub j_lo: i64,
    pub j_hi: i64,
    pub i_lo: i64,
    pub i_hi: i64,
    pub padded: usize,
}

impl WindowPlan {
    /// Plan with the smallest power-of-two length that avoids wrap-around.
    pub fn new(j_lo: i64, j_hi: i64, i_lo: i64, i_hi: i64) -> Result<Self> {
        if j_lo > j_hi || i_lo > i_hi {
            return Err(Error::Precondition(format!(
                "empty window in plan: output [{j_lo}, {j_hi}], input [{i_lo}, {i_hi}]"
            )));
        }
        let mut plan = Self {
            j_lo,
            j_hi,
            i_lo,
            i_hi,
            padded: 0,
        };
        plan.padded = plan.required_len().next_power_of_two();
        Ok(plan)
    }

    /// Plan covering the support of `b` and the output window.
    pub fn for_sequence(b: &Sequence, j_lo: i64, j_hi: i64) -> Result<Self> {
        let (lo, hi) = b.support().unwrap_or((0, 0));
        Self::new(j_lo, j_hi, lo, hi)
    }

    /// Plan with an explicit transform length; fails if it would alias.
    pub fn with_padded(j_lo: i64, j_hi: i64, i_lo: i64, i_hi: i64, padded: usize) -> Result<Self> {
        let mut plan = Self::new(j_lo, j_hi, i_lo, i_hi)?;
        plan.padded = padded;
        plan.check_no_alias()?;
        Ok(plan)
    }

    pub fn output_len(&self) -> usize {
        (self.j_hi - self.j_lo + 1) as usize
    }

    pub fn input_len(&self) -> usize {
        (self.i_hi - self.i_lo + 1) as usize
    }

    /// Length at which circular and linear convolution agree on the output
    /// window: kernel lags span `output + input - 1` values, and aliased
    /// products land at least `padded` indices away from the window.
    pub fn required_len(&self) -> usize {
        self.output_len() + self.input_len()
    }

    pub fn check_no_alias(&self) -> Result<()> {
        if self.padded < self.required_len() {
            return Err(Error::PlanTooSmall {
                padded: self.padded,
                required: self.required_len(),
            });
        }
        Ok(())
    }

    fn check_covers(&self, b: &Sequence) -> Result<()> {
        if let Some((lo, hi)) = b.support() {
            if lo < self.i_lo || hi > self.i_hi {
                return Err(Error::PlanDoesNotCover { lo, hi });
            }
        }
        Ok(())
    }
}

/// `out[j] = Σ_t x[t] k(j - (x_lo + t))` for `j` in the plan's output window.
fn toeplitz_convolve(
    x_lo: i64,
    x: &[f64],
    plan: &WindowPlan,
    kernel: impl Fn(i64) -> f64,
) -> Vec<f64> {
    let n = plan.padded;
    let w_out = plan.output_len();
    let w_in = x.len();
    let x_hi = x_lo + w_in as i64 - 1;
    let lag_min = plan.j_lo - x_hi;
    let lag_len = w_out + w_in - 1;

    let mut a: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
    for (t, v) in x.iter().enumerate() {
        a[t] = Complex64::new(*v, 0.0);
    }
    let mut k: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); n];
    for (s, slot) in k.iter_mut().enumerate().take(lag_len) {
        *slot = Complex64::new(kernel(lag_min + s as i64), 0.0);
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    fwd.process(&mut a);
    fwd.process(&mut k);
    for (ai, ki) in a.iter_mut().zip(&k) {
        *ai *= *ki;
    }
    inv.process(&mut a);

    let scale = 1.0 / n as f64;
    (0..w_out).map(|r| a[r + w_in - 1].re * scale).collect()
}

fn window_to_sequence(j_lo: i64, values: Vec<f64>) -> Sequence {
    Sequence::new(j_lo, values).expect("nonempty finite FFT output")
}

/// `(I_γ b)(j)` for `j` in the plan's output window.
pub fn riesz_apply_fast(b: &Sequence, gamma: f64, plan: &WindowPlan) -> Result<Sequence> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidGamma {
            gamma,
            range: "(0, 1)",
        });
    }
    plan.check_no_alias()?;
    plan.check_covers(b)?;
    if b.is_zero() {
        return Ok(Sequence::zero());
    }
    let x: Vec<f64> = (plan.i_lo..=plan.i_hi).map(|i| b.get(i)).collect();
    let e = 1.0 - gamma;
    let out = toeplitz_convolve(plan.i_lo, &x, plan, |d| {
        if d == 0 {
            0.0
        } else {
            (d.unsigned_abs() as f64).powf(-e)
        }
    });
    Ok(window_to_sequence(plan.j_lo, out))
}

/// `(Hb)(j)` for `j` in the plan's output window.
pub fn hilbert_apply_fast(b: &Sequence, plan: &WindowPlan) -> Result<Sequence> {
    plan.check_no_alias()?;
    plan.check_covers(b)?;
    if b.is_zero() {
        return Ok(Sequence::zero());
    }
    // c(i') = b(-i') on [-i_hi, -i_lo]; (Hb)(j) = Σ c(i') k(j - i')
    let x: Vec<f64> = (plan.i_lo..=plan.i_hi).rev().map(|i| b.get(i)).collect();
    let out = toeplitz_convolve(-plan.i_hi, &x, plan, |d| FRAC_1_PI / (d as f64 + 0.5));
    Ok(window_to_sequence(plan.j_lo, out))
}

/// Times the direct and FFT paths of the Hilbert transform on random inputs
/// of each size (support and output window both of that size) and fits the
/// log-log scaling exponent of each path.
///
/// Each timing is the minimum over `repeats` runs.
pub fn throughput_benchmark(sizes: &[usize], repeats: usize) -> Result<ExperimentReport> {
    if repeats == 0 || sizes.is_empty() {
        return Ok(ExperimentReport::empty("fastops_throughput"));
    }
    if let Some(&s) = sizes.iter().find(|&&s| s < 256) {
        return Err(Error::Precondition(format!(
            "benchmark sizes must be >= 256, got {s}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rows = Vec::new();
    let mut direct = Vec::new();
    let mut fast = Vec::new();
    for &n in sizes {
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let b = Sequence::new(0, values)?;
        let plan = WindowPlan::for_sequence(&b, 0, n as i64 - 1)?;
        let mut best_direct = u128::MAX;
        let mut best_fast = u128::MAX;
        for _ in 0..repeats {
            let t = Instant::now();
            let d = hilbert_apply_window(&b, plan.j_lo, plan.j_hi);
            best_direct = best_direct.min(t.elapsed().as_nanos());
            std::hint::black_box(&d);

            let t = Instant::now();
            let f = hilbert_apply_fast(&b, &plan)?;
            best_fast = best_fast.min(t.elapsed().as_nanos());
            std::hint::black_box(&f);
        }
        direct.push(best_direct as f64);
        fast.push(best_fast as f64);
        rows.push(row([
            ("size", json!(n)),
            ("direct_ns", json!(best_direct as u64)),
            ("fast_ns", json!(best_fast as u64)),
        ]));
    }
    let xs: Vec<f64> = sizes.iter().map(|&s| s as f64).collect();
    let direct_exp = log_log_slope(&xs, &direct);
    let fast_exp = log_log_slope(&xs, &fast);
    let last = sizes.len() - 1;
    let ratio = fast[last] / direct[last];
    Ok(ExperimentReport::new(
        "fastops_throughput",
        sizes.len() as u64,
        ratio,
        -f64::EPSILON,
    )
    .with_param("repeats", repeats)
    .with_param("direct_exponent", json!(direct_exp))
    .with_param("fast_exponent", json!(fast_exp))
    .with_rows(rows))
}
