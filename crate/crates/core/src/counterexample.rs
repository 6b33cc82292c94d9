//! Certified analysis of `U_γ = T_{s,s}`, `s = (1-γ)/2`, applied to the
//! second difference `b = δ₋₁ - 2δ₀ + δ₁`.
//!
//! `b` has vanishing moments of order 0 and 1, so it lies in `H^p(ℤ)` for
//! every `p > 1/3`. Its image has the closed form
//!
//! ```text
//! (U_γ b)(0) = 2,  (U_γ b)(±1) = -2,
//! (U_γ b)(j) = 2 (j²-1)^{-s} - 2 |j|^{-2s}   (|j| ≥ 2)
//! ```
//!
//! and total sum `S(γ) = -2 + 4 Σ_{j≥2} [(j²-1)^{-s} - j^{-2s}]`. A sequence in
//! `H^q(ℤ)`, `q ≤ 1`, sums to zero, so `S(γ) ≠ 0` shows `U_γ b ∉ H^q`.
//!
//! `S(γ) < 0` is reduced to `g(γ) < h(γ)` with
//! `g(γ) = 3^{-s} - 2^{-2s}` and `h(γ) = 1/2 - 8^{-s}`.

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::atoms::{first_nonvanishing_moment, nearest_moment_free};
use crate::enclosure::{Enclosure, EnclosureSum};
use crate::error::{Error, Result};
use crate::operators::{
    fractional_apply_enclosed, image_tail_bound, OperatorParams, TaylorTailSpec,
};
use crate::report::{json_f64, row, ExperimentReport};
use crate::seq::Sequence;

/// Default summation cutoff for `S(γ)`.
pub const DEFAULT_CUTOFF: u64 = 1_000_000;

/// Smallest cutoff accepted by [`total_sum_enclosure`].
pub const MIN_CUTOFF: u64 = 10;

/// Slack on `1/q = 1/p - γ` when deciding `q ≤ 1`.
const EXPONENT_TOL: f64 = 1e-12;

/// Subintervals narrower than this are not split further when certifying
/// that `g - h` has no root left of the bisection bracket.
const MIN_CERT_WIDTH: f64 = 1e-15;

/// The sequence `(1, -2, 1)` on `{-1, 0, 1}`.
pub fn second_difference() -> Sequence {
    Sequence::new(-1, vec![1.0, -2.0, 1.0]).expect("finite literal")
}

fn check_gamma(gamma: f64, upper: f64, range: &'static str) -> Result<()> {
    if (0.0..upper).contains(&gamma) {
        Ok(())
    } else {
        Err(Error::InvalidGamma { gamma, range })
    }
}

/// Enclosure of `s = (1 - γ)/2` for `γ` in the enclosure `gamma`.
fn half_order(gamma: Enclosure) -> Enclosure {
    (Enclosure::point(1.0) - gamma).scale(0.5)
}

/// `(U_γ b)(j)` by the closed form.
pub fn u_apply_closed(gamma: f64, j: i64) -> f64 {
    let s = (1.0 - gamma) / 2.0;
    match j.unsigned_abs() {
        0 => 2.0,
        1 => -2.0,
        a => {
            let a = a as f64;
            2.0 / (a * a - 1.0).powf(s) - 2.0 / a.powf(2.0 * s)
        }
    }
}

/// Partial sums `(term₂, Σ_{j=3}^{J} term_j)` with
/// `term_j = (j²-1)^{-s} - (j²)^{-s}`.
fn term_sums(s: Enclosure, cutoff: u64) -> Result<(Enclosure, Enclosure)> {
    let neg = -s;
    let term = |j: u64| -> Result<Enclosure> {
        let sq = (j * j) as f64;
        Ok(Enclosure::point(sq - 1.0).pow(neg)? - Enclosure::point(sq).pow(neg)?)
    };
    let first = term(2)?;
    let mut rest = EnclosureSum::new();
    for j in 3..=cutoff {
        rest.push(term(j)?);
    }
    Ok((first, rest.value()))
}

/// Upper bound `T(J)` on `Σ_{j>J} term_j`.
///
/// By the mean value theorem `term_j ≤ s (j²-1)^{-s-1}
/// ≤ s (1 - 1/J²)^{-s-1} j^{-2s-2}`, and `Σ_{j>J} j^{-2s-2} ≤ J^{-2s-1}/(2s+1)`.
fn tail_bound(s: Enclosure, cutoff: u64) -> Result<Enclosure> {
    let p = Enclosure::point;
    let jf = p(cutoff as f64);
    let one = p(1.0);
    let shrink = one - one.checked_div(jf * jf)?;
    let t = s * shrink.pow(-(s + one))? * jf.pow(-(s.scale(2.0) + one))?;
    let t = t.checked_div(s.scale(2.0) + one)?;
    Enclosure::new(0.0, t.hi)
}

/// Enclosure of `S(γ) = Σ_j (U_γ b)(j)`: the exact sum of the terms up to
/// `J` plus the interval `[0, T(J)]` for the remainder.
pub fn total_sum_enclosure(gamma: f64, cutoff: u64) -> Result<Enclosure> {
    check_gamma(gamma, 1.0, "[0, 1)")?;
    if cutoff < MIN_CUTOFF {
        return Err(Error::CutoffTooSmall {
            got: cutoff,
            need: MIN_CUTOFF,
        });
    }
    let s = half_order(Enclosure::point(gamma));
    let (first, rest) = term_sums(s, cutoff)?;
    let series = first + rest + tail_bound(s, cutoff)?;
    Ok(Enclosure::point(-2.0) + series.scale(4.0))
}

pub fn g_eval(gamma: f64) -> Result<f64> {
    check_gamma(gamma, 1.0, "[0, 1)")?;
    let s = (1.0 - gamma) / 2.0;
    Ok(3f64.powf(-s) - 2f64.powf(-2.0 * s))
}

pub fn h_eval(gamma: f64) -> Result<f64> {
    check_gamma(gamma, 1.0 / 3.0, "[0, 1/3)")?;
    let s = (1.0 - gamma) / 2.0;
    Ok(0.5 - 8f64.powf(-s))
}

/// Enclosure of `(g - h)(γ) = 3^{-s} + 8^{-s} - 4^{-s} - 1/2` over an
/// interval of `γ`.
///
/// Each power is monotone in `s`, so evaluating them separately at the
/// interval endpoints gives a valid (if not tight) range.
pub fn g_minus_h_enclosed(gamma: Enclosure) -> Result<Enclosure> {
    let p = Enclosure::point;
    let neg = -half_order(gamma);
    Ok(p(3.0).pow(neg)? + p(8.0).pow(neg)? - p(4.0).pow(neg)? - p(0.5))
}

/// Enclosure of the first root `ε` of `g - h` in `(0, 1/3)`, of width at most
/// `tolerance`.
///
/// The signs at both ends are checked first. After bisection, `g - h < 0` is
/// certified on all of `[0, lo]` by adaptive subdivision, so the bracket holds
/// the smallest root and `g < h` on `[0, ε)`.
pub fn epsilon_root(tolerance: f64) -> Result<Enclosure> {
    if !(tolerance > 0.0) {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let third = 1.0 / 3.0;
    let at0 = g_minus_h_enclosed(Enclosure::point(0.0))?;
    if !at0.is_negative() {
        return Err(Error::SignCheck(format!(
            "g - h at 0 is not certified negative: {at0}"
        )));
    }
    let at_third = g_minus_h_enclosed(Enclosure::point(third))?;
    if !at_third.is_positive() {
        return Err(Error::SignCheck(format!(
            "g - h at 1/3 is not certified positive: {at_third}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, third);
    while hi - lo > tolerance {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = g_minus_h_enclosed(Enclosure::point(mid))?;
        if f.is_negative() {
            lo = mid;
        } else if f.is_positive() {
            hi = mid;
        } else {
            return Err(Error::Inconclusive { lo, hi });
        }
    }
    certify_negative_on(0.0, lo)?;
    Enclosure::new(lo, hi)
}

/// Certifies `g - h < 0` on `[a, b]`.
fn certify_negative_on(a: f64, b: f64) -> Result<()> {
    let mut stack = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        let f = g_minus_h_enclosed(Enclosure::new(x, y)?)?;
        if f.is_negative() {
            continue;
        }
        if y - x < MIN_CERT_WIDTH {
            return Err(Error::SignCheck(format!(
                "could not certify g < h on [{x}, {y}]: g - h in {f}"
            )));
        }
        let mid = x + 0.5 * (y - x);
        stack.push((mid, y));
        stack.push((x, mid));
    }
    Ok(())
}

/// Checks each inequality of the chain leading to `S(γ) < 0`:
///
/// 1. `Σ_{j≥3} term_j ≤ 8^{-s}`,
/// 2. `Σ_{j≥2} term_j ≤ 8^{-s} + g(γ)`,
/// 3. `8^{-s} + g(γ) < 1/2`,
/// 4. `S(γ) < 0`.
///
/// Sums are enclosed with cutoff [`DEFAULT_CUTOFF`]. Each step is decided on
/// enclosures, so a true verdict is certified.
pub fn inequality_chain_check(gamma: f64) -> Result<ExperimentReport> {
    check_gamma(gamma, 1.0 / 3.0, "[0, 1/3)")?;
    let p = Enclosure::point;
    let s = half_order(p(gamma));
    let (first, rest) = term_sums(s, DEFAULT_CUTOFF)?;
    let tail = rest + tail_bound(s, DEFAULT_CUTOFF)?;
    let full = first + tail;
    let eight = p(8.0).pow(-s)?;
    let bound = eight + first;
    let total = p(-2.0) + full.scale(4.0);

    let steps = [
        ("tail_le_eighth_power", tail.hi, eight.lo),
        ("sum_le_eighth_power_plus_g", full.hi, bound.lo),
        ("eighth_power_plus_g_lt_half", bound.hi, 0.5),
        ("total_sum_negative", (total + p(2.0)).hi, 2.0),
    ];
    let rows: Vec<_> = steps
        .iter()
        .map(|&(step, lhs, rhs)| {
            row([
                ("step", json!(step)),
                ("lhs_upper", json_f64(lhs)),
                ("rhs_lower", json_f64(rhs)),
                ("holds", json!(lhs < rhs)),
            ])
        })
        .collect();
    let worst = steps
        .iter()
        .map(|&(_, lhs, rhs)| lhs / rhs)
        .fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = total.to_decimal_strings();
    Ok(ExperimentReport::new(
        "inequality_chain_check",
        steps.len() as u64,
        worst,
        -f64::EPSILON,
    )
    .with_param("gamma", gamma)
    .with_param("cutoff", DEFAULT_CUTOFF)
    .with_param("total_sum_lo", lo)
    .with_param("total_sum_hi", hi)
    .with_rows(rows))
}

/// Evidence that `b ∈ H^p`: the first nonvanishing moment `d*` and the
/// summability exponent `(d* + 1) p > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HpWitness {
    pub vanishing_through: Option<u32>,
    pub first_nonvanishing: u32,
    pub exponent: f64,
    pub holds: bool,
}

/// Certificate that `U_γ` does not map `H^p(ℤ)` boundedly into `H^q(ℤ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleCertificate {
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
    pub cutoff: u64,
    pub sum_enclosure: Enclosure,
    pub b_in_hp: HpWitness,
    pub conclusion: bool,
}

impl CounterexampleCertificate {
    /// Recomputes the conclusion from the other fields.
    pub fn is_consistent(&self) -> bool {
        self.conclusion == (self.sum_enclosure.excludes_zero() && self.b_in_hp.holds)
    }
}

impl Serialize for CounterexampleCertificate {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let (lo, hi) = self.sum_enclosure.to_decimal_strings();
        json!({
            "gamma": self.gamma,
            "p": self.p,
            "q": self.q,
            "cutoff": self.cutoff,
            "sum_enclosure": { "lo": lo, "hi": hi, "significant_digits": 17 },
            "b_in_Hp": self.b_in_hp,
            "conclusion": self.conclusion,
        })
        .serialize(ser)
    }
}

/// Builds the non-boundedness certificate for `U_γ : H^p → H^q`,
/// `1/q = 1/p - γ`, which needs `p ∈ (1/2, 1]` and `q ≤ 1`.
pub fn certify_unbounded(gamma: f64, p: f64, cutoff: u64) -> Result<CounterexampleCertificate> {
    check_gamma(gamma, 1.0, "[0, 1)")?;
    if !(p > 0.5 && p <= 1.0) {
        return Err(Error::Precondition(format!(
            "p must lie in (1/2, 1], got {p}"
        )));
    }
    let inv_q = 1.0 / p - gamma;
    if inv_q < 1.0 - EXPONENT_TOL {
        return Err(Error::Precondition(format!(
            "1/q = 1/p - gamma = {inv_q} gives q > 1; need p <= 1/(1 + gamma)"
        )));
    }
    let q = if (inv_q - 1.0).abs() <= EXPONENT_TOL {
        1.0
    } else {
        1.0 / inv_q
    };

    let b = second_difference();
    let d_star = first_nonvanishing_moment(&b).expect("b has a nonzero second moment");
    let exponent = (d_star as f64 + 1.0) * p;
    let witness = HpWitness {
        vanishing_through: d_star.checked_sub(1),
        first_nonvanishing: d_star,
        exponent,
        holds: d_star >= 2 && exponent > 1.0,
    };

    let sum = total_sum_enclosure(gamma, cutoff)?;
    if !sum.excludes_zero() {
        return Err(Error::Inconclusive {
            lo: sum.lo,
            hi: sum.hi,
        });
    }
    Ok(CounterexampleCertificate {
        gamma,
        p,
        q,
        cutoff,
        sum_enclosure: sum,
        b_in_hp: witness,
        conclusion: witness.holds,
    })
}

/// Sign of `S(γ)` on a grid of `γ`, from enclosures.
pub fn sign_scan(grid: &[f64], cutoff: u64) -> Result<ExperimentReport> {
    if grid.is_empty() {
        return Ok(ExperimentReport::empty("sign_scan"));
    }
    for &g in grid {
        check_gamma(g, 1.0, "[0, 1)")?;
    }
    let sums: Vec<Enclosure> = grid
        .par_iter()
        .map(|&g| total_sum_enclosure(g, cutoff))
        .collect::<Result<_>>()?;
    let sign = |e: &Enclosure| {
        if e.is_negative() {
            "negative"
        } else if e.is_positive() {
            "positive"
        } else {
            "inconclusive"
        }
    };
    let rows = grid
        .iter()
        .zip(&sums)
        .map(|(&g, e)| {
            let (lo, hi) = e.to_decimal_strings();
            row([
                ("gamma", json!(g)),
                ("lo", json!(lo)),
                ("hi", json!(hi)),
                ("sign", json!(sign(e))),
            ])
        })
        .collect();
    let count = |label: &str| sums.iter().filter(|e| sign(e) == label).count();
    // S < 0 exactly when (S + 2)/2 < 1
    let worst = sums
        .iter()
        .map(|e| (e.hi + 2.0) / 2.0)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(
        ExperimentReport::new("sign_scan", grid.len() as u64, worst, -f64::EPSILON)
            .with_param("cutoff", cutoff)
            .with_param("negative", count("negative"))
            .with_param("positive", count("positive"))
            .with_param("inconclusive", count("inconclusive"))
            .with_rows(rows),
    )
}

/// Projects `b` onto sequences on `[-W, W]` with vanishing moments through
/// `degree` and encloses `Σ_j (U_γ c)(j)` for each half-width `W`.
///
/// Exploration only: it reports how far the projection moves `b` and where
/// the image sum of the projection lies.
pub fn density_probe(
    gamma: f64,
    half_widths: &[u64],
    degree: u32,
    cutoff: u64,
) -> Result<ExperimentReport> {
    check_gamma(gamma, 1.0, "[0, 1)")?;
    if degree < 2 {
        return Err(Error::Precondition(format!(
            "degree must be at least 2 for a summable image, got {degree}"
        )));
    }
    let params = OperatorParams::symmetric(gamma)?;
    let b = second_difference();
    let rows = half_widths
        .par_iter()
        .map(|&w| -> Result<_> {
            let wi = w as i64;
            let c = nearest_moment_free(&b, degree, (-wi, wi))?;
            let dist = (&b - &c).lp_norm(2.0)?;
            let spec = TaylorTailSpec::for_sequence(&c, degree + 1, 0, w)?;
            let tail = image_tail_bound(&c, &params, &spec, cutoff, 1.0)?;
            let mut sum = EnclosureSum::new();
            let j_max = cutoff as i64;
            for j in -j_max..=j_max {
                sum.push(fractional_apply_enclosed(&c, &params, j));
            }
            let total = sum.value() + Enclosure::new(-tail.hi, tail.hi)?;
            let (lo, hi) = total.to_decimal_strings();
            Ok(row([
                ("half_width", json!(w)),
                ("l2_distance", json_f64(dist)),
                ("image_sum_lo", json!(lo)),
                ("image_sum_hi", json!(hi)),
                ("excludes_zero", json!(total.excludes_zero())),
            ]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(
        ExperimentReport::new("density_probe", rows.len() as u64, 0.0, 0.0)
            .with_param("gamma", gamma)
            .with_param("degree", degree)
            .with_param("cutoff", cutoff)
            .with_rows(rows),
    )
}
