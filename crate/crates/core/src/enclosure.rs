//! Closed real intervals with outward rounding.
//!
//! Every basic operation (`+`, `-`, `*`, `/`) is computed in round-to-nearest
//! and then widened by one ulp on each side. IEEE 754 guarantees the exact
//! result lies within half an ulp of the rounded one, so the widened interval
//! contains it. Elementary functions (`powf`, `ln`, `exp`) are not correctly
//! rounded by the platform libm; their results are widened by
//! [`LIBM_ULPS`] ulps, which dominates the documented error of glibc and the
//! other mainstream implementations (all below 1 ulp).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Widening applied to results of libm elementary functions.
pub const LIBM_ULPS: u32 = 4;

fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = down(x);
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = up(x);
    }
    x
}

/// A real number known to lie in `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Precondition(format!(
                "enclosure endpoints must satisfy lo <= hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate enclosure of a value that is exactly representable.
    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub const fn zero() -> Self {
        Self::point(0.0)
    }

    /// Enclosure of a value computed by a libm call (widened by [`LIBM_ULPS`]).
    pub fn from_libm(x: f64) -> Self {
        Self {
            lo: down_n(x, LIBM_ULPS),
            hi: up_n(x, LIBM_ULPS),
        }
    }

    /// Enclosure of a computed value with an absolute error bound.
    pub fn around(x: f64, abs_err: f64) -> Self {
        let e = abs_err.abs();
        Self {
            lo: down(x - e),
            hi: up(x + e),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_enclosure(&self, other: &Enclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        self.hi < 0.0 || self.lo > 0.0
    }

    pub fn is_negative(&self) -> bool {
        self.hi < 0.0
    }

    pub fn is_positive(&self) -> bool {
        self.lo > 0.0
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn abs(self) -> Enclosure {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Enclosure {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    pub fn scale(self, k: f64) -> Enclosure {
        self * Enclosure::point(k)
    }

    pub fn recip(self) -> Result<Enclosure> {
        if self.lo <= 0.0 && self.hi >= 0.0 {
            return Err(Error::Precondition(format!(
                "reciprocal of an enclosure containing zero [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(Enclosure {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        })
    }

    pub fn checked_div(self, rhs: Enclosure) -> Result<Enclosure> {
        Ok(self * rhs.recip()?)
    }

    /// `self^e` for a strictly positive base.
    ///
    /// `x^e` is monotone in `x` for fixed `e` and monotone in `e` for fixed
    /// `x`, so its range over the box is attained at a corner.
    pub fn pow(self, e: Enclosure) -> Result<Enclosure> {
        if self.lo <= 0.0 {
            return Err(Error::Precondition(format!(
                "pow requires a positive base, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.lo == self.hi && e.lo == e.hi {
            return Ok(Enclosure::from_libm(self.lo.powf(e.lo)).clamp_nonneg());
        }
        let corners = [
            self.lo.powf(e.lo),
            self.lo.powf(e.hi),
            self.hi.powf(e.lo),
            self.hi.powf(e.hi),
        ];
        let lo = corners.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = corners.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Enclosure {
            lo: down_n(lo, LIBM_ULPS).max(0.0),
            hi: up_n(hi, LIBM_ULPS),
        })
    }

    fn clamp_nonneg(self) -> Enclosure {
        Enclosure {
            lo: self.lo.max(0.0),
            hi: self.hi,
        }
    }

    /// `self^e` for a nonnegative base and a point exponent `e > 0`.
    pub fn powf_nonneg(self, e: f64) -> Result<Enclosure> {
        if self.lo < 0.0 || e <= 0.0 {
            return Err(Error::Precondition(format!(
                "powf_nonneg requires base >= 0 and e > 0, got [{}, {}]^{e}",
                self.lo, self.hi
            )));
        }
        let lo = if self.lo == 0.0 {
            0.0
        } else {
            down_n(self.lo.powf(e), LIBM_ULPS).max(0.0)
        };
        let hi = if self.hi == 0.0 {
            0.0
        } else {
            up_n(self.hi.powf(e), LIBM_ULPS)
        };
        Ok(Enclosure { lo, hi })
    }

    /// Decimal rendering of both endpoints with 17 significant digits, which
    /// round-trips every `f64` exactly.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (format!("{:.16e}", self.lo), format!("{:.16e}", self.hi))
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.16e}, {:.16e}]", self.lo, self.hi)
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        Enclosure {
            lo: down(self.lo + rhs.lo),
            hi: up(self.hi + rhs.hi),
        }
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        Enclosure {
            lo: down(self.lo - rhs.hi),
            hi: up(self.hi - rhs.lo),
        }
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: Enclosure) -> Enclosure {
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // exact zero products need no widening
        Enclosure {
            lo: if lo == 0.0 { 0.0 } else { down(lo) },
            hi: if hi == 0.0 { 0.0 } else { up(hi) },
        }
    }
}

/// Outward-rounded running sum of enclosures.
#[derive(Debug, Clone, Copy)]
pub struct EnclosureSum {
    acc: Enclosure,
}

impl Default for EnclosureSum {
    fn default() -> Self {
        Self {
            acc: Enclosure::zero(),
        }
    }
}

impl EnclosureSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, e: Enclosure) {
        self.acc = self.acc + e;
    }

    pub fn value(&self) -> Enclosure {
        self.acc
    }
}

impl std::iter::Sum for Enclosure {
    fn sum<I: Iterator<Item = Enclosure>>(iter: I) -> Enclosure {
        let mut s = EnclosureSum::new();
        for e in iter {
            s.push(e);
        }
        s.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_endpoints() {
        assert!(Enclosure::new(1.0, 0.0).is_err());
        assert!(Enclosure::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn addition_contains_exact_sum() {
        // 0.1 + 0.2 is not exactly 0.3 in binary; the enclosure must contain
        // both the rounded sum and its neighbours.
        let s = Enclosure::point(0.1) + Enclosure::point(0.2);
        assert!(s.contains(0.1 + 0.2));
        assert!(s.lo < 0.1 + 0.2 && s.hi > 0.1 + 0.2);
    }

    #[test]
    fn pow_corners() {
        let base = Enclosure::new(2.0, 3.0).unwrap();
        let e = Enclosure::new(-1.0, -0.5).unwrap();
        let r = base.pow(e).unwrap();
        assert!(r.contains(1.0 / 3.0));
        assert!(r.contains(1.0 / 2f64.sqrt()));
        assert!(r.contains(0.5));
    }

    #[test]
    fn abs_straddling() {
        let r = Enclosure::new(-2.0, 1.0).unwrap().abs();
        assert_eq!(r, Enclosure { lo: 0.0, hi: 2.0 });
    }

    #[test]
    fn mul_sign_cases() {
        let a = Enclosure::new(-1.0, 2.0).unwrap();
        let b = Enclosure::new(-3.0, 0.5).unwrap();
        let r = a * b;
        assert!(r.contains(-6.0) && r.contains(3.0));
    }

    #[test]
    fn decimal_strings_round_trip() {
        let e = Enclosure::new(-1.5272306019547377, -1.5272306019547375).unwrap();
        let (lo, hi) = e.to_decimal_strings();
        assert_eq!(lo.parse::<f64>().unwrap(), e.lo);
        assert_eq!(hi.parse::<f64>().unwrap(), e.hi);
    }
}
