//! Finitely supported real sequences on ℤ.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numeric::NeumaierSum;

/// A finitely supported sequence `b : ℤ → ℝ`, stored densely over its
/// support in canonical trimmed form.
///
/// For a nonzero sequence the first and last stored values are nonzero. The
/// zero sequence is the distinguished value with an empty block and offset 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SequenceLiteral", into = "SequenceLiteral")]
pub struct Sequence {
    offset: i64,
    values: Vec<f64>,
}

/// On-disk and command-line literal: `{"offset": int, "values": [num, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SequenceLiteral {
    pub offset: i64,
    pub values: Vec<f64>,
}

impl TryFrom<SequenceLiteral> for Sequence {
    type Error = Error;
    fn try_from(lit: SequenceLiteral) -> Result<Self> {
        Sequence::new(lit.offset, lit.values)
    }
}

impl From<Sequence> for SequenceLiteral {
    fn from(s: Sequence) -> Self {
        if s.is_zero() {
            SequenceLiteral {
                offset: 0,
                values: vec![0.0],
            }
        } else {
            SequenceLiteral {
                offset: s.offset,
                values: s.values,
            }
        }
    }
}

impl Sequence {
    /// Builds the canonical form of the sequence whose entry at
    /// `offset + k` is `values[k]`.
    ///
    /// An all-zero block yields [`Sequence::zero`].
    pub fn new(offset: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyValues);
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                index: offset + k as i64,
            });
        }
        let first = values.iter().position(|&v| v != 0.0);
        let Some(first) = first else {
            return Ok(Self::zero());
        };
        let last = values.iter().rposition(|&v| v != 0.0).unwrap();
        Ok(Self {
            offset: offset + first as i64,
            values: values[first..=last].to_vec(),
        })
    }

    pub fn zero() -> Self {
        Self {
            offset: 0,
            values: Vec::new(),
        }
    }

    pub fn delta(at: i64) -> Self {
        Self {
            offset: at,
            values: vec![1.0],
        }
    }

    /// Builds a sequence from `(index, value)` pairs; repeated indices add.
    pub fn from_pairs<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Result<Self> {
        let pairs: Vec<(i64, f64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(Error::EmptyValues);
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap();
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut values = vec![0.0; (hi - lo + 1) as usize];
        for (i, v) in pairs {
            values[(i - lo) as usize] += v;
        }
        Self::new(lo, values)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest interval `[lo, hi]` containing the support, `None` for zero.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.offset, self.offset + self.values.len() as i64 - 1))
        }
    }

    pub fn get(&self, i: i64) -> f64 {
        let k = i - self.offset;
        if k < 0 || k >= self.values.len() as i64 {
            0.0
        } else {
            self.values[k as usize]
        }
    }

    /// `(index, value)` over the stored block, including interior zeros.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.offset + k as i64, v))
    }

    pub fn abs(&self) -> Sequence {
        Sequence {
            offset: self.offset,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn shift(&self, by: i64) -> Sequence {
        Sequence {
            offset: if self.is_zero() { 0 } else { self.offset + by },
            values: self.values.clone(),
        }
    }

    /// `i ↦ b(-i)`.
    pub fn reflect(&self) -> Sequence {
        match self.support() {
            None => Sequence::zero(),
            Some((_, hi)) => Sequence {
                offset: -hi,
                values: self.values.iter().rev().copied().collect(),
            },
        }
    }

    pub fn scale(&self, k: f64) -> Sequence {
        if k == 0.0 || self.is_zero() {
            return Sequence::zero();
        }
        Sequence::new(self.offset, self.values.iter().map(|v| v * k).collect())
            .expect("scaling a finite nonzero block stays finite unless it overflows")
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().copied().collect::<NeumaierSum>().value()
    }

    pub fn l1(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs())
            .collect::<NeumaierSum>()
            .value()
    }

    /// `‖b‖_{ℓ^p}` for `p ∈ (0, ∞]`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(&self.values, p)
    }

    /// `Σ i^k b(i)` with `0^0 = 1`.
    pub fn moment(&self, k: u32) -> f64 {
        let mut s = NeumaierSum::new();
        for (i, v) in self.iter() {
            s.add((i as f64).powi(k as i32) * v);
        }
        s.value()
    }

    /// Centered maximal sequence `(Mb)(j) = sup_N (2N+1)^{-1} Σ_{|i-j|≤N} |b(i)|`.
    ///
    /// Windows reaching past the far end of the support only lower the
    /// average, so the supremum is a maximum over `N ≤ N*`, the distance from
    /// `j` to the farthest support endpoint.
    pub fn maximal_apply(&self, j: i64) -> f64 {
        let Some((lo, hi)) = self.support() else {
            return 0.0;
        };
        let n_star = (j - lo).abs().max((hi - j).abs());
        let mut best = 0.0f64;
        let mut acc = self.get(j).abs();
        best = best.max(acc);
        for n in 1..=n_star {
            acc += self.get(j - n).abs() + self.get(j + n).abs();
            best = best.max(acc / (2 * n + 1) as f64);
        }
        best
    }

    /// `(Mb)(j)` for every `j` in `[j_lo, j_hi]`, via prefix sums.
    pub fn maximal_window(&self, j_lo: i64, j_hi: i64) -> Vec<f64> {
        let Some((lo, hi)) = self.support() else {
            return vec![0.0; (j_hi - j_lo + 1).max(0) as usize];
        };
        let mut prefix = Vec::with_capacity(self.values.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in &self.values {
            acc += v.abs();
            prefix.push(acc);
        }
        // mass on [a, b] ∩ support
        let mass = |a: i64, b: i64| -> f64 {
            let a = a.max(lo);
            let b = b.min(hi);
            if a > b {
                0.0
            } else {
                prefix[(b - lo + 1) as usize] - prefix[(a - lo) as usize]
            }
        };
        (j_lo..=j_hi)
            .map(|j| {
                let n_star = (j - lo).abs().max((hi - j).abs());
                // windows with N below the distance to the support are empty
                let n_min = if j < lo {
                    lo - j
                } else if j > hi {
                    j - hi
                } else {
                    0
                };
                (n_min..=n_star)
                    .map(|n| mass(j - n, j + n) / (2 * n + 1) as f64)
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

/// `‖v‖_p` of a finite slice for `p ∈ (0, ∞]`, scaled against overflow.
pub fn lp_norm(values: &[f64], p: f64) -> Result<f64> {
    if p.is_nan() || p <= 0.0 {
        return Err(Error::InvalidExponent(p));
    }
    let max = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p.is_infinite() || max == 0.0 {
        return Ok(max);
    }
    let s: NeumaierSum = values.iter().map(|v| (v.abs() / max).powf(p)).collect();
    Ok(max * s.value().powf(1.0 / p))
}

/// Free-function form of [`Sequence::new`].
pub fn make_sequence(offset: i64, values: Vec<f64>) -> Result<Sequence> {
    Sequence::new(offset, values)
}

/// Free-function form of [`Sequence::moment`].
pub fn moment(b: &Sequence, k: u32) -> f64 {
    b.moment(k)
}

/// Free-function form of [`Sequence::maximal_apply`].
pub fn maximal_apply(b: &Sequence, j: i64) -> f64 {
    b.maximal_apply(j)
}

impl Add for &Sequence {
    type Output = Sequence;
    fn add(self, rhs: &Sequence) -> Sequence {
        match (self.support(), rhs.support()) {
            (None, _) => rhs.clone(),
            (_, None) => self.clone(),
            (Some((a, b)), Some((c, d))) => {
                let lo = a.min(c);
                let hi = b.max(d);
                let values = (lo..=hi).map(|i| self.get(i) + rhs.get(i)).collect();
                Sequence::new(lo, values).expect("sum of finite sequences")
            }
        }
    }
}

impl Sub for &Sequence {
    type Output = Sequence;
    fn sub(self, rhs: &Sequence) -> Sequence {
        self + &(-rhs)
    }
}

impl Neg for &Sequence {
    type Output = Sequence;
    fn neg(self) -> Sequence {
        Sequence {
            offset: self.offset,
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

impl Mul<f64> for &Sequence {
    type Output = Sequence;
    fn mul(self, k: f64) -> Sequence {
        self.scale(k)
    }
}
