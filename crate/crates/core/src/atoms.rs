//! Discrete `(p, q, d)`-atoms, projection onto sequences with vanishing
//! moments, and enclosures of the `H^p(ℤ)` quasi-norm.
//!
//! A `(p, q, d)`-atom centered at `n₀` with half-width `m ≥ 1` is a sequence
//! `a` with
//!
//! 1. `supp(a) ⊆ {n₀ - m, ..., n₀ + m}`,
//! 2. `‖a‖_q ≤ (2m + 1)^{1/q - 1/p}`,
//! 3. `Σ_i i^k a(i) = 0` for `k = 0, ..., d`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enclosure::{Enclosure, EnclosureSum};
use crate::error::{Error, Result};
use crate::operators::{hilbert_apply_enclosed, hilbert_tail_bound, TaylorTailSpec, MOMENT_TOL};
use crate::seq::{lp_norm, Sequence};

const MAX_DRAWS: u32 = 32;

/// A Gram-Schmidt residual below this fraction of the original vector norm
/// marks the constraint system as numerically rank deficient.
const RANK_TOL: f64 = 1e-10;

/// `f64` fields that may be `+∞` serialize as the string `"inf"`.
mod extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_infinite() && *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*x)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Str(s) if matches!(s.as_str(), "inf" | "infinity" | "Infinity") => {
                Ok(f64::INFINITY)
            }
            Raw::Str(s) => Err(de::Error::custom(format!(
                "expected a number or \"inf\", got {s}"
            ))),
        }
    }
}

/// Parameters of a discrete atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub p: f64,
    #[serde(with = "extended_f64")]
    pub q: f64,
    pub d: u32,
    pub center: i64,
    pub half_width: u64,
}

impl AtomSpec {
    pub fn new(p: f64, q: f64, d: u32, center: i64, half_width: u64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidAtomSpec(format!(
                "p must lie in (0, 1], got {p}"
            )));
        }
        if !(q >= 1.0) || q.is_nan() {
            return Err(Error::InvalidAtomSpec(format!(
                "q must lie in [1, inf], got {q}"
            )));
        }
        if !(p < q) {
            return Err(Error::InvalidAtomSpec(format!(
                "need p < q, got p = {p}, q = {q}"
            )));
        }
        if half_width < 1 {
            return Err(Error::InvalidAtomSpec("half width m must be >= 1".into()));
        }
        Ok(Self {
            p,
            q,
            d,
            center,
            half_width,
        })
    }

    /// `d_p = ⌊1/p - 1⌋`, the number of moments an `H^p` atom must cancel
    /// beyond the zeroth.
    pub fn critical_degree(p: f64) -> u32 {
        // guard against 1/p landing a hair below an integer
        let x = 1.0 / p - 1.0;
        let r = x.round();
        if (x - r).abs() < 1e-12 {
            r.max(0.0) as u32
        } else {
            x.floor().max(0.0) as u32
        }
    }

    pub fn window(&self) -> (i64, i64) {
        let m = self.half_width as i64;
        (self.center - m, self.center + m)
    }

    pub fn size_bound(&self) -> f64 {
        let n = (2 * self.half_width + 1) as f64;
        n.powf(1.0 / self.q - 1.0 / self.p)
    }
}

/// Outcome of checking the three atom conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub support_ok: bool,
    pub size_ok: bool,
    pub moments_ok: bool,
    pub max_moment_residual: f64,
}

impl AtomReport {
    pub fn verdict(&self) -> bool {
        self.support_ok && self.size_ok && self.moments_ok
    }
}

pub fn validate_atom(a: &Sequence, spec: &AtomSpec, tol: f64) -> Result<AtomReport> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (lo, hi) = spec.window();
    let support_ok = match a.support() {
        None => true,
        Some((s, e)) => s >= lo && e <= hi,
    };
    let size_ok = a.lp_norm(spec.q)? <= spec.size_bound() + tol;
    let max_moment_residual = (0..=spec.d).map(|k| a.moment(k).abs()).fold(0.0, f64::max);
    Ok(AtomReport {
        support_ok,
        size_ok,
        moments_ok: max_moment_residual <= tol,
        max_moment_residual,
    })
}

/// Orthonormal basis (as rows) of `span{ i^k : k = 0..=degree }` restricted
/// to `[lo, hi]`, built by twice-iterated modified Gram-Schmidt on monomials
/// in the centered, scaled variable `t = (i - c)/h`. Returns the basis and the
/// worst norm-loss ratio as a condition estimate.
fn moment_basis(lo: i64, hi: i64, degree: u32) -> Result<(Vec<Vec<f64>>, f64)> {
    let n = (hi - lo + 1) as usize;
    let c = 0.5 * (lo as f64 + hi as f64);
    let h = (0.5 * (hi - lo) as f64).max(1.0);
    let ts: Vec<f64> = (lo..=hi).map(|i| (i as f64 - c) / h).collect();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(degree as usize + 1);
    let mut condition = 1.0f64;
    for k in 0..=degree {
        let mut v: Vec<f64> = ts.iter().map(|t| t.powi(k as i32)).collect();
        let before = norm2(&v);
        for _ in 0..2 {
            for e in &basis {
                let d = dot(&v, e);
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= d * y;
                }
            }
        }
        let after = norm2(&v);
        if before == 0.0 || after <= RANK_TOL * before {
            let cond = if after == 0.0 {
                f64::INFINITY
            } else {
                before / after
            };
            return Err(Error::IllConditioned { condition: cond });
        }
        condition = condition.max(before / after);
        v.iter_mut().for_each(|x| *x /= after);
        basis.push(v);
    }
    debug_assert_eq!(basis[0].len(), n);
    Ok((basis, condition))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `x - Q Qᵀ x`, applied twice.
fn project_out(x: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for e in basis {
            let d = dot(x, e);
            for (xi, ei) in x.iter_mut().zip(e) {
                *xi -= d * ei;
            }
        }
    }
}

/// The `ℓ²`-nearest sequence supported in `window` whose moments `0..=L`
/// vanish.
///
/// The constraint set is the orthogonal complement of the polynomial vectors
/// `(i^k)_{i ∈ window}`, `k ≤ L`, so the nearest point is the orthogonal
/// projection onto that complement.
pub fn nearest_moment_free(b: &Sequence, degree: u32, window: (i64, i64)) -> Result<Sequence> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Precondition(format!("empty window [{lo}, {hi}]")));
    }
    if let Some((s, e)) = b.support() {
        if s < lo || e > hi {
            return Err(Error::SupportOutsideWindow { lo, hi });
        }
    }
    let size = (hi - lo + 1) as u64;
    if size <= degree as u64 + 1 {
        return Err(Error::Precondition(format!(
            "window of size {size} leaves no room for {} moment constraints",
            degree + 1
        )));
    }
    if b.is_zero() {
        return Ok(Sequence::zero());
    }
    let (basis, condition) = moment_basis(lo, hi, degree)?;
    let mut x: Vec<f64> = (lo..=hi).map(|i| b.get(i)).collect();
    project_out(&mut x, &basis);
    let c = Sequence::new(lo, x)?;
    for k in 0..=degree {
        if c.moment(k).abs() > MOMENT_TOL {
            return Err(Error::IllConditioned { condition });
        }
    }
    Ok(c)
}

/// A random `(p, q, d)`-atom, deterministic in `seed`.
///
/// Draws `2m + 1` values uniformly from `[-1, 1]`, projects them onto the
/// moment-free subspace and rescales to the size bound. A degenerate draw is
/// retried on the next ChaCha stream.
pub fn random_atom(spec: &AtomSpec, seed: u64) -> Result<Sequence> {
    let (lo, hi) = spec.window();
    let n = (2 * spec.half_width + 1) as usize;
    if n as u64 <= spec.d as u64 + 1 {
        return Err(Error::InvalidAtomSpec(format!(
            "window of size {n} cannot carry {} vanishing moments",
            spec.d + 1
        )));
    }
    let (basis, _) = moment_basis(lo, hi, spec.d)?;
    let target = spec.size_bound();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_DRAWS {
        rng.set_stream(attempt as u64);
        let draw: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let mut x = draw.clone();
        project_out(&mut x, &basis);
        let size = lp_norm(&x, spec.q)?;
        if !(size > 1e-8 * lp_norm(&draw, spec.q)?) {
            continue;
        }
        let k = target / size;
        x.iter_mut().for_each(|v| *v *= k);
        // rounding may leave the size or ‖a‖_p a few ulps above the bound
        for _ in 0..8 {
            if lp_norm(&x, spec.q)? <= target && lp_norm(&x, spec.p)? <= 1.0 {
                break;
            }
            x.iter_mut().for_each(|v| *v *= 1.0 - 4.0 * f64::EPSILON);
        }
        return Sequence::new(lo, x);
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_DRAWS,
    })
}

/// Value of the `H^p` quasi-norm `‖b‖_p + ‖Hb‖_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HardyNorm {
    Finite {
        enclosure: Enclosure,
    },
    /// `Σ|Hb(j)|^p = ∞`: moment `moment_index` is the first nonvanishing one
    /// and `(moment_index + 1) p ≤ 1`.
    Diverged {
        moment_index: u32,
    },
}

impl HardyNorm {
    pub fn enclosure(&self) -> Option<Enclosure> {
        match self {
            HardyNorm::Finite { enclosure } => Some(*enclosure),
            HardyNorm::Diverged { .. } => None,
        }
    }
}

/// Index of the first moment above [`MOMENT_TOL`], or `None` if every moment
/// up to the support length vanishes.
pub fn first_nonvanishing_moment(b: &Sequence) -> Option<u32> {
    (0..=b.len() as u32).find(|&k| b.moment(k).abs() > MOMENT_TOL)
}

/// Enclosure of `‖b‖_{H^p} = ‖b‖_p + ‖Hb‖_p` for `p ∈ (0, 1]`, using the
/// exact sum over `|j| ≤ J` and [`hilbert_tail_bound`] beyond.
pub fn hardy_quasinorm(b: &Sequence, p: f64, cutoff: u64) -> Result<HardyNorm> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if b.is_zero() {
        return Ok(HardyNorm::Finite {
            enclosure: Enclosure::zero(),
        });
    }
    let order = match first_nonvanishing_moment(b) {
        Some(k) if (k as f64 + 1.0) * p <= 1.0 => {
            return Ok(HardyNorm::Diverged { moment_index: k })
        }
        Some(k) => k,
        None => b.len() as u32 + 1,
    };
    let spec = TaylorTailSpec::enclosing(b, order)?;
    let tail = hilbert_tail_bound(b, &spec, cutoff, p)?;

    let j_max = cutoff as i64;
    let mut hb = EnclosureSum::new();
    for j in -j_max..=j_max {
        hb.push(hilbert_apply_enclosed(b, j).abs().powf_nonneg(p)?);
    }
    let hb_norm = (hb.value() + tail).powf_nonneg(1.0 / p)?;

    let b_norm = b
        .values()
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| Enclosure::point(v.abs()).powf_nonneg(p))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<Enclosure>()
        .powf_nonneg(1.0 / p)?;

    Ok(HardyNorm::Finite {
        enclosure: b_norm + hb_norm,
    })
}
