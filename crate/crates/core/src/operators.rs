//! Pointwise application of the discrete Hilbert transform `H`, the discrete
//! Riesz potential `I_γ` and the fractional series operator `T_{α,β}` to
//! finitely supported sequences, together with certified tail bounds for
//! their images.
//!
//! ```text
//! (Hb)(j)       = (1/π) Σ_i b(i) / (j + i + 1/2)
//! (I_γ b)(j)    = Σ_{i≠j} b(i) / |i-j|^{1-γ}
//! (T_{α,β} b)(j) = Σ_{i≠±j} b(i) / (|i-j|^α |i+j|^β),   α + β = 1 - γ
//! ```

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_PI;

use crate::enclosure::{Enclosure, LIBM_ULPS};
use crate::error::{Error, Result};
use crate::numeric::{factorial, gamma_n, rising_factorial, NeumaierSum, UNIT_ROUNDOFF};
use crate::seq::Sequence;

/// Tolerance on `α + β = 1 - γ` at construction.
pub const PARAM_SUM_TOL: f64 = 1e-12;

/// Absolute tolerance for a moment to count as vanishing.
pub const MOMENT_TOL: f64 = 1e-10;

/// Parameters `(γ, α, β)` of `T_{α,β}` with `α + β = 1 - γ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorParams {
    gamma: f64,
    alpha: f64,
    beta: f64,
}

impl OperatorParams {
    pub fn new(gamma: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&gamma) {
            return Err(Error::InvalidGamma {
                gamma,
                range: "[0, 1)",
            });
        }
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "alpha and beta must be positive, got alpha = {alpha}, beta = {beta}"
            )));
        }
        if (alpha + beta - (1.0 - gamma)).abs() > PARAM_SUM_TOL {
            return Err(Error::InvalidParams(format!(
                "alpha + beta = {} but 1 - gamma = {}",
                alpha + beta,
                1.0 - gamma
            )));
        }
        Ok(Self { gamma, alpha, beta })
    }

    /// `α = β = (1 - γ)/2`, the operator `U_γ`.
    pub fn symmetric(gamma: f64) -> Result<Self> {
        let s = (1.0 - gamma) / 2.0;
        Self::new(gamma, s, s)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `α + β` as stored (equal to `1 - γ` within [`PARAM_SUM_TOL`]).
    pub fn order(&self) -> f64 {
        self.alpha + self.beta
    }
}

/// Data for the Taylor-remainder tail estimate of an operator image.
///
/// `order` is `N`: moments `0..N-1` of the sequence vanish, and the kernel is
/// expanded to degree `N - 1` around `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorTailSpec {
    pub order: u32,
    pub center: i64,
    pub half_width: u64,
    pub l1_mass: f64,
}

impl TaylorTailSpec {
    pub fn new(order: u32, center: i64, half_width: u64, l1_mass: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::Precondition("Taylor order N must be >= 1".into()));
        }
        if half_width < 1 {
            return Err(Error::Precondition("half width m must be >= 1".into()));
        }
        if !(l1_mass >= 0.0 && l1_mass.is_finite()) {
            return Err(Error::Precondition(format!(
                "l1 mass must be finite and nonnegative, got {l1_mass}"
            )));
        }
        Ok(Self {
            order,
            center,
            half_width,
            l1_mass,
        })
    }

    pub fn for_sequence(b: &Sequence, order: u32, center: i64, half_width: u64) -> Result<Self> {
        Self::new(order, center, half_width, b.l1())
    }

    /// Center and half-width of the smallest symmetric window around the
    /// support (half-width at least 1), with `order` as given.
    pub fn enclosing(b: &Sequence, order: u32) -> Result<Self> {
        let (center, half_width) = match b.support() {
            None => (0, 1),
            Some((lo, hi)) => {
                let center = lo + (hi - lo) / 2;
                let half = (center - lo).max(hi - center).max(1) as u64;
                (center, half)
            }
        };
        Self::for_sequence(b, order, center, half_width)
    }

    fn check_support(&self, b: &Sequence) -> Result<()> {
        let lo = self.center - self.half_width as i64;
        let hi = self.center + self.half_width as i64;
        if let Some((a, z)) = b.support() {
            if a < lo || z > hi {
                return Err(Error::SupportOutsideWindow { lo, hi });
            }
        }
        Ok(())
    }

    fn check_moments(&self, b: &Sequence) -> Result<()> {
        for k in 0..self.order {
            let r = b.moment(k);
            if r.abs() > MOMENT_TOL {
                return Err(Error::MomentCondition {
                    order: k,
                    residual: r,
                });
            }
        }
        Ok(())
    }
}

/// `(Hb)(j)`.
pub fn hilbert_apply(b: &Sequence, j: i64) -> f64 {
    let mut s = NeumaierSum::new();
    for (i, v) in b.iter() {
        s.add(v / ((j + i) as f64 + 0.5));
    }
    FRAC_1_PI * s.value()
}

/// Enclosure of `(Hb)(j)` from a recursive sum and its a-priori error bound.
pub fn hilbert_apply_enclosed(b: &Sequence, j: i64) -> Enclosure {
    let mut s = 0.0;
    let mut abs = 0.0;
    for (i, v) in b.iter() {
        let t = v / ((j + i) as f64 + 0.5);
        s += t;
        abs += t.abs();
    }
    // one rounding per term, n-1 additions, the 1/π constant and the product
    let err = gamma_n(b.len() + 3) * abs * FRAC_1_PI * (1.0 + 4.0 * UNIT_ROUNDOFF);
    Enclosure::around(FRAC_1_PI * s, err)
}

/// `(I_γ b)(j)`; the `i = j` term is excluded.
pub fn riesz_apply(b: &Sequence, gamma: f64, j: i64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidGamma {
            gamma,
            range: "(0, 1)",
        });
    }
    let e = 1.0 - gamma;
    let mut s = NeumaierSum::new();
    for (i, v) in b.iter() {
        if i != j {
            s.add(v / ((i - j).abs() as f64).powf(e));
        }
    }
    Ok(s.value())
}

/// `(T_{α,β} b)(j)`; both `i = j` and `i = -j` are excluded.
pub fn fractional_apply(b: &Sequence, params: &OperatorParams, j: i64) -> f64 {
    let mut s = NeumaierSum::new();
    for (i, v) in b.iter() {
        if i == j || i == -j {
            continue;
        }
        let d = (i - j).abs() as f64;
        let e = (i + j).abs() as f64;
        s.add(v * d.powf(-params.alpha) * e.powf(-params.beta));
    }
    s.value()
}

/// Enclosure of `(T_{α,β} b)(j)` from the pointwise sum and an a-priori bound
/// on its rounding error.
pub fn fractional_apply_enclosed(b: &Sequence, params: &OperatorParams, j: i64) -> Enclosure {
    let mut s = 0.0;
    let mut abs = 0.0;
    let mut n = 0usize;
    for (i, v) in b.iter() {
        if i == j || i == -j || v == 0.0 {
            continue;
        }
        let d = (i - j).abs() as f64;
        let e = (i + j).abs() as f64;
        let t = v * d.powf(-params.alpha) * e.powf(-params.beta);
        s += t;
        abs += t.abs();
        n += 1;
    }
    // two libm calls and two products per term, then n-1 additions
    let per_term = 2.0 * (LIBM_ULPS as f64) * f64::EPSILON + 2.0 * UNIT_ROUNDOFF;
    let err = (per_term + gamma_n(n.max(1))) * abs * (1.0 + per_term);
    Enclosure::around(s, err)
}

/// `K(x, y) = |x - y|^{-α} |x + y|^{-β}`.
pub fn kernel_eval(params: &OperatorParams, x: f64, y: f64) -> Result<f64> {
    let d = (x - y).abs();
    let e = (x + y).abs();
    if d == 0.0 || e == 0.0 {
        return Err(Error::Singular { x, y });
    }
    Ok(d.powf(-params.alpha) * e.powf(-params.beta))
}

/// Upper bound for `|∂_x^N K(x,y)| + |∂_y^N K(x,y)|`.
///
/// By Leibniz, `|∂_x^N K| ≤ K Σ_k C(N,k) (α)_k (β)_{N-k} |x-y|^{-k} |x+y|^{-(N-k)}`;
/// each power product is at most `(|x-y|^{-1} + |x+y|^{-1})^N` and the
/// Vandermonde identity collapses the coefficient sum to `(α+β)_N`. The same
/// holds for `∂_y`, hence the constant `2 (α+β)_N`.
pub fn kernel_derivative_bound(params: &OperatorParams, n: u32, x: f64, y: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Precondition(
            "derivative order N must be >= 1".into(),
        ));
    }
    let k = kernel_eval(params, x, y)?;
    let c = 2.0 * rising_factorial(params.order(), n);
    let w = 1.0 / (x - y).abs() + 1.0 / (x + y).abs();
    Ok(c * k * w.powi(n as i32))
}

/// Enclosure of `Σ_{|j|>J} |(T_{α,β} b)(j)|^q`.
///
/// For `|j| > J ≥ 3m + 3|n₀|` the moment condition lets the kernel be replaced
/// by its Taylor remainder of order `N` around `n₀`:
///
/// ```text
/// |(T b)(j)| ≤ ‖b‖₁ m^N (α+β)_N / N! · ρ^{-(α+β+N)} · K(n₀, j) (|j-n₀|^{-1} + |j+n₀|^{-1})^N
/// ```
///
/// where `ρ = 1 - m/(J + 1 - |n₀|)` accounts for moving the evaluation point
/// from the intermediate `ξ ∈ [n₀-m, n₀+m]` to `n₀`. The right-hand side is at
/// most `C 2^N (|j| - |n₀|)^{-(1-γ+N)}`, decreasing in `|j|`, so the tail is
/// bounded by the integral `2 (C 2^N)^q (J - |n₀|)^{1-σ} / (σ - 1)` with
/// `σ = q (1 - γ + N)`.
pub fn image_tail_bound(
    b: &Sequence,
    params: &OperatorParams,
    spec: &TaylorTailSpec,
    cutoff: u64,
    q: f64,
) -> Result<Enclosure> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(Error::InvalidExponent(q));
    }
    spec.check_support(b)?;
    spec.check_moments(b)?;
    let m = spec.half_width;
    let n0 = spec.center.unsigned_abs();
    let need = 3 * m + 3 * n0;
    if cutoff < need {
        return Err(Error::CutoffTooSmall { got: cutoff, need });
    }
    let n = spec.order;
    let sigma = q * (1.0 - params.gamma() + n as f64);
    if sigma <= 1.0 {
        return Err(Error::NotSummable { exponent: sigma });
    }
    let l1 = spec.l1_mass.max(b.l1());
    if l1 == 0.0 {
        return Ok(Enclosure::zero());
    }

    let p = Enclosure::point;
    let order = p(params.alpha) + p(params.beta);
    let rho = p(1.0) - p(m as f64).checked_div(p((cutoff + 1 - n0) as f64))?;
    let rho_pow = rho.pow(-(order + p(n as f64)))?;
    let rising = (0..n).fold(p(1.0), |acc, k| acc * (order + p(k as f64)));
    let c = p(l1) * p(m as f64).pow(p(n as f64))? * rising.scale(1.0 / factorial(n)) * rho_pow;
    // 1/N! is exact for N ≤ 18 only up to rounding of the reciprocal; widen
    let c = c * Enclosure::around(1.0, 2.0 * f64::EPSILON);
    let per_point = c * p(2f64.powi(n as i32));
    let sigma_e = p(q) * (p(1.0) - p(params.gamma()) + p(n as f64));
    let base = p((cutoff - n0) as f64);
    let integral = base.pow(p(1.0) - sigma_e)?.checked_div(sigma_e - p(1.0))?;
    let total = per_point.powf_nonneg(q)?.scale(2.0) * integral;
    Enclosure::new(0.0, total.hi)
}

/// Enclosure of `Σ_{|j|>J} |(Hb)(j)|^p`.
///
/// The `N`-th derivative of `x ↦ 1/(j + x + 1/2)` is `(-1)^N N!/(j + x + 1/2)^{N+1}`,
/// so the Taylor remainder gives
/// `|(Hb)(j)| ≤ (1/π) ‖b‖₁ m^N / (|j + n₀ + 1/2| - m)^{N+1}`, and
/// `|j + n₀ + 1/2| - m ≥ |j| - d` with `d = |n₀| + m + 1/2`. Summing the
/// decreasing majorant by integral comparison gives
/// `2 c^p (J - d)^{1-σ} / (σ - 1)` with `σ = (N+1) p`.
pub fn hilbert_tail_bound(
    b: &Sequence,
    spec: &TaylorTailSpec,
    cutoff: u64,
    p_exp: f64,
) -> Result<Enclosure> {
    if !(p_exp > 0.0 && p_exp.is_finite()) {
        return Err(Error::InvalidExponent(p_exp));
    }
    spec.check_support(b)?;
    spec.check_moments(b)?;
    let m = spec.half_width;
    let n0 = spec.center.unsigned_abs();
    let need = n0 + m + 1;
    if cutoff < need {
        return Err(Error::CutoffTooSmall { got: cutoff, need });
    }
    let n = spec.order;
    let sigma = (n as f64 + 1.0) * p_exp;
    if sigma <= 1.0 {
        return Err(Error::NotSummable { exponent: sigma });
    }
    let l1 = spec.l1_mass.max(b.l1());
    if l1 == 0.0 {
        return Ok(Enclosure::zero());
    }

    let p = Enclosure::point;
    let inv_pi = Enclosure::around(FRAC_1_PI, f64::EPSILON);
    let c = inv_pi * p(l1) * p(m as f64).pow(p(n as f64))?;
    let sigma_e = p(n as f64 + 1.0) * p(p_exp);
    let base = p(cutoff as f64) - p((n0 + m) as f64) - p(0.5);
    let integral = base.pow(p(1.0) - sigma_e)?.checked_div(sigma_e - p(1.0))?;
    let total = c.powf_nonneg(p_exp)?.scale(2.0) * integral;
    Enclosure::new(0.0, total.hi)
}

/// Table of `k^{-e}` for `k = 0..=max_k`, with the `k = 0` entry set to zero.
///
/// The zero entry makes excluded diagonal terms (`i = j`, `i = ±j`) vanish
/// without a branch.
#[derive(Debug, Clone)]
pub struct PowerTable {
    exponent: f64,
    values: Vec<f64>,
}

impl PowerTable {
    pub fn new(exponent: f64, max_k: usize) -> Self {
        let mut values = Vec::with_capacity(max_k + 1);
        values.push(0.0);
        values.extend((1..=max_k).map(|k| (k as f64).powf(-exponent)));
        Self { exponent, values }
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn max_k(&self) -> usize {
        self.values.len() - 1
    }

    #[inline]
    pub fn get(&self, k: u64) -> f64 {
        self.values[k as usize]
    }
}

/// `(T_{α,β} b)(j)` for every `j ∈ [j_lo, j_hi]`, in `O(N·M)` with cached
/// kernel powers. The product kernel is neither Toeplitz nor Hankel, so this
/// is the only window evaluator for `T`.
pub fn fractional_apply_window(
    b: &Sequence,
    params: &OperatorParams,
    j_lo: i64,
    j_hi: i64,
) -> Vec<f64> {
    let width = (j_hi - j_lo + 1).max(0) as usize;
    let Some((lo, hi)) = b.support() else {
        return vec![0.0; width];
    };
    let reach = [lo, hi, j_lo, j_hi]
        .iter()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap();
    let max_k = (2 * reach) as usize;
    let ta = PowerTable::new(params.alpha, max_k);
    let tb_owned;
    let tb = if params.alpha == params.beta {
        &ta
    } else {
        tb_owned = PowerTable::new(params.beta, max_k);
        &tb_owned
    };
    (j_lo..=j_hi)
        .map(|j| {
            let mut s = NeumaierSum::new();
            for (i, v) in b.iter() {
                s.add(v * ta.get((i - j).unsigned_abs()) * tb.get((i + j).unsigned_abs()));
            }
            s.value()
        })
        .collect()
}

/// `(Hb)(j)` for every `j ∈ [j_lo, j_hi]` by direct summation in `O(N·M)`.
///
/// Plain recursive summation; [`hilbert_apply`] is the compensated pointwise
/// form.
pub fn hilbert_apply_window(b: &Sequence, j_lo: i64, j_hi: i64) -> Vec<f64> {
    let offset = b.offset() as f64 + 0.5;
    let values = b.values();
    (j_lo..=j_hi)
        .map(|j| {
            let base = j as f64 + offset;
            let s: f64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v / (base + k as f64))
                .sum();
            s * FRAC_1_PI
        })
        .collect()
}

/// `(I_γ b)(j)` for every `j ∈ [j_lo, j_hi]` by direct summation.
pub fn riesz_apply_window(b: &Sequence, gamma: f64, j_lo: i64, j_hi: i64) -> Result<Vec<f64>> {
    (j_lo..=j_hi).map(|j| riesz_apply(b, gamma, j)).collect()
}
