//! Acceptance gate. Runs the ten acceptance criteria in order, prints one
//! PASS/FAIL line for each, and exits nonzero if any fails.
//!
//! Criteria run sequentially so that the wall-clock budgets are measured
//! without competing test threads.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use discrete_hardy::atoms::{random_atom, validate_atom, AtomSpec};
use discrete_hardy::counterexample::{
    epsilon_root, g_eval, h_eval, inequality_chain_check, second_difference, total_sum_enclosure,
};
use discrete_hardy::fastops::{
    hilbert_apply_fast, riesz_apply_fast, throughput_benchmark, WindowPlan,
};
use discrete_hardy::lab::{
    atom_image_sweep, hilbert_inequality_check, involution_check, pointwise_domination_sweep,
};
use discrete_hardy::operators::{
    fractional_apply, hilbert_apply, hilbert_tail_bound, image_tail_bound, riesz_apply,
};
use discrete_hardy::{OperatorParams, Sequence, TaylorTailSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_517;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() < budget_s
}

/// Closed form of `U_γ (1,-2,1)`, written out independently of the library.
fn closed_form(gamma: f64, j: i64) -> f64 {
    let s = (1.0 - gamma) / 2.0;
    let a = j.abs() as f64;
    2.0 / (a * a - 1.0).abs().powf(s) - 2.0 / a.powf(1.0 - gamma)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let b = second_difference();
    let mut exact = true;
    let mut worst = 0.0f64;
    for gamma in [0.0, 0.1, 0.2, 0.3] {
        let params = OperatorParams::symmetric(gamma).unwrap();
        exact &= fractional_apply(&b, &params, -1) == -2.0;
        exact &= fractional_apply(&b, &params, 0) == 2.0;
        exact &= fractional_apply(&b, &params, 1) == -2.0;
        for a in 2..=1000i64 {
            for j in [-a, a] {
                worst = worst.max((fractional_apply(&b, &params, j) - closed_form(gamma, j)).abs());
            }
        }
    }
    let el = t.elapsed();
    Outcome::new(
        exact && worst <= 1e-12 && within(el, 1.0),
        format!(
            "golden values exact: {exact}, max |diff| = {worst:.2e}, {:.3} s",
            el.as_secs_f64()
        ),
    )
}

/// `S(0)` by compensated direct summation of `j^{-1} (1/sqrt(1 - 1/j²) - 1)`
/// to `10⁸`, with a binomial series for large `j` and an integral tail.
fn oracle_s0() -> f64 {
    const N: u64 = 100_000_000;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut add = |x: f64| {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    };
    for j in 2..=N {
        let jf = j as f64;
        let x = 1.0 / (jf * jf);
        let term = if j < 1000 {
            (-0.5 * (-x).ln_1p()).exp_m1() / jf
        } else {
            // (1 - x)^{-1/2} - 1 = x/2 + 3x²/8 + 5x³/16 + 35x⁴/128 + ...
            x * (0.5 + x * (0.375 + x * (0.3125 + x * 0.2734375))) / jf
        };
        add(term);
    }
    // Σ_{j>N} (x/2)/j ≈ 1/(4N²)
    add(0.25 / (N as f64 * N as f64));
    -2.0 + 4.0 * (sum + comp)
}

/// `S(0)` rounded from a 30-digit arbitrary-precision value.
const S0_REFERENCE: f64 = -1.527_230_601_954_737_7;

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let gammas = [0.0, 0.05, 0.1, 0.15];
    let encl: Vec<_> = gammas
        .iter()
        .map(|&g| total_sum_enclosure(g, 1_000_000).unwrap())
        .collect();
    let el = t.elapsed();
    let all_ok = encl.iter().all(|e| e.width() < 1e-6 && e.hi < 0.0);
    let oracle = oracle_s0();
    let contains = encl[0].contains(oracle) && encl[0].contains(S0_REFERENCE);
    let widths: Vec<String> = encl.iter().map(|e| format!("{:.1e}", e.width())).collect();
    Outcome::new(
        all_ok && contains && within(el, 10.0),
        format!(
            "S(0) in [{:.15}, {:.15}], oracle {oracle:.15} inside: {contains}, widths {widths:?}, all negative: {all_ok}, {:.2} s",
            encl[0].lo,
            encl[0].hi,
            el.as_secs_f64()
        ),
    )
}

fn criterion_3() -> Outcome {
    let eps = epsilon_root(1e-10).unwrap();
    let inside = eps.lo > 0.0 && eps.hi < 1.0 / 3.0 && eps.width() <= 1e-10;
    let g0 = (g_eval(0.0).unwrap() - (1.0 / 3f64.sqrt() - 0.5)).abs();
    let h0 = (h_eval(0.0).unwrap() - (0.5 - 1.0 / 8f64.sqrt())).abs();
    let chains: Vec<bool> = [0.0, 0.1, 0.15]
        .iter()
        .map(|&g| {
            let r = inequality_chain_check(g).unwrap();
            r.verdict && r.artifacts.len() == 4 && r.artifacts.iter().all(|a| a["holds"] == true)
        })
        .collect();
    Outcome::new(
        inside && g0 <= 1e-12 && h0 <= 1e-12 && chains.iter().all(|&c| c),
        format!(
            "epsilon in [{:.12}, {:.12}], |g(0) err| = {g0:.1e}, |h(0) err| = {h0:.1e}, chain at 0/0.1/0.15: {chains:?}",
            eps.lo, eps.hi
        ),
    )
}

fn criterion_4() -> Outcome {
    let t = Instant::now();
    let r = hilbert_inequality_check(1000, 64, SEED).unwrap();
    let el = t.elapsed();
    let violations = r
        .artifacts
        .iter()
        .filter(|a| a["lhs"].as_f64().unwrap() > a["rhs"].as_f64().unwrap())
        .count();
    Outcome::new(
        violations == 0 && r.samples == 1000 && within(el, 5.0),
        format!(
            "{violations} violations in {} trials, worst ratio {:.4}, {:.3} s",
            r.samples,
            r.worst_ratio,
            el.as_secs_f64()
        ),
    )
}

fn criterion_5() -> Outcome {
    let params = OperatorParams::new(0.0, 0.5, 0.5).unwrap();
    let r = pointwise_domination_sweep(1000, 64, &params, 2.0, SEED).unwrap();
    let mut violations = 0;
    for row in &r.artifacts {
        for region in ["I1", "I2", "I3"] {
            if row[region].as_f64().unwrap() > 1.0 {
                violations += 1;
            }
        }
    }
    Outcome::new(
        violations == 0 && r.samples == 1000,
        format!(
            "{violations} regional violations in {} samples, worst ratio {:.4}",
            r.samples, r.worst_ratio
        ),
    )
}

fn criterion_6() -> Outcome {
    let ps = [1.0, 2.0 / 3.0, 0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    let mut worst_residual = 0.0f64;
    let mut worst_p_norm = 0.0f64;
    for k in 0..1000usize {
        let p = ps[k % 3];
        let m: u64 = rng.gen_range(1..=256);
        let center = rng.gen_range(-4 * m as i64..=4 * m as i64);
        let spec =
            AtomSpec::new(p, f64::INFINITY, AtomSpec::critical_degree(p), center, m).unwrap();
        let a = random_atom(&spec, rng.gen()).unwrap();
        let r = validate_atom(&a, &spec, 1e-10).unwrap();
        let pn = a.lp_norm(p).unwrap();
        worst_residual = worst_residual.max(r.max_moment_residual);
        worst_p_norm = worst_p_norm.max(pn);
        if !r.verdict() || pn > 1.0 {
            failures += 1;
        }
    }
    let scaled = second_difference().scale(1.0 / 6.0);
    let spec = AtomSpec::new(1.0, f64::INFINITY, 0, 0, 1).unwrap();
    let scaled_ok = validate_atom(&scaled, &spec, 1e-10).unwrap().verdict();
    Outcome::new(
        failures == 0 && scaled_ok,
        format!(
            "{failures} failing atoms of 1000, max moment residual {worst_residual:.1e}, max ||a||_p {worst_p_norm:.15}, b/6 valid: {scaled_ok}"
        ),
    )
}

fn criterion_7() -> Outcome {
    let ms = [1, 4, 16, 64, 256];
    let mut pass = true;
    let mut detail = Vec::new();
    for gamma in [0.0, 0.3] {
        let r = atom_image_sweep(1.0, gamma, &ms, 50, SEED).unwrap();
        let sups: Vec<String> = r
            .artifacts
            .iter()
            .map(|a| format!("{:.3}", a["sup_norm"].as_f64().unwrap()))
            .collect();
        pass &= r.verdict;
        detail.push(format!(
            "gamma {gamma}: sups {sups:?} growth {:.3}",
            r.param_f64("sup_growth").unwrap()
        ));
    }
    Outcome::new(pass, detail.join("; "))
}

fn criterion_8() -> Outcome {
    let b = second_difference();
    let r1 = involution_check(&b, 10_000).unwrap();
    let r2 = involution_check(&b, 20_000).unwrap();
    let e1 = r1.param_f64("error").unwrap();
    let e2 = r2.param_f64("error").unwrap();
    Outcome::new(
        e1 < 1e-3 && e2 < e1 && r1.verdict && r2.verdict,
        format!(
            "error {e1:.3e} at J=1e4 (bound {:.3e}), {e2:.3e} at J=2e4",
            r1.param_f64("bound").unwrap()
        ),
    )
}

/// `x^e` for `x ≥ 0`, with the exponents that occur most often evaluated by
/// `sqrt` and `cbrt`, which are several times cheaper than `powf`.
fn pow_abs(x: f64, e: f64) -> f64 {
    if e == 1.0 {
        x
    } else if e == 0.5 {
        x.sqrt()
    } else if e == 2.0 / 3.0 {
        (x * x).cbrt()
    } else {
        x.powf(e)
    }
}

/// Terms of each brute-force tail (`5·10⁶` indices on each side).
const BRUTE_HALF: u64 = 5_000_000;

/// `Σ_{J<|j|≤J+L} |(T a)(j)|^q` for `α = β`, using `T a(-j) = T a(j)`.
fn brute_image_tail(a: &Sequence, table: &[f64], cutoff: u64, q: f64) -> f64 {
    let off = a.offset();
    let vals = a.values();
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for j in cutoff as i64 + 1..=(cutoff + BRUTE_HALF) as i64 {
        let mut t = 0.0;
        for (k, v) in vals.iter().enumerate() {
            let i = off + k as i64;
            t += v * table[(j - i) as usize] * table[(j + i) as usize];
        }
        let x = pow_abs(t.abs(), q);
        let s = sum + x;
        comp += (sum - s) + x;
        sum = s;
    }
    2.0 * (sum + comp)
}

/// `Σ_{J<|j|≤J+L} |(H a)(j)|^p`.
fn brute_hilbert_tail(a: &Sequence, cutoff: u64, p: f64) -> f64 {
    let off = a.offset();
    let vals = a.values();
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let lo = cutoff as i64 + 1;
    let hi = (cutoff + BRUTE_HALF) as i64;
    for j in (-hi..=-lo).chain(lo..=hi) {
        let mut t = 0.0;
        for (k, v) in vals.iter().enumerate() {
            t += v / ((j + off + k as i64) as f64 + 0.5);
        }
        let t = t / std::f64::consts::PI;
        let x = pow_abs(t.abs(), p);
        let s = sum + x;
        comp += (sum - s) + x;
        sum = s;
    }
    sum + comp
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let ps = [1.0, 2.0 / 3.0, 0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for gamma in [0.0, 0.3] {
        let alpha = (1.0 - gamma) / 2.0;
        let params = OperatorParams::symmetric(gamma).unwrap();
        let max_k = (BRUTE_HALF + 64) as usize;
        let table: Vec<f64> = std::iter::once(0.0)
            .chain((1..=max_k).map(|k| (k as f64).powf(-alpha)))
            .collect();
        for k in 0..50 {
            let p = ps[k % 3];
            let d = AtomSpec::critical_degree(p);
            let m: u64 = rng.gen_range(1..=2);
            let n0: i64 = rng.gen_range(-5..=5);
            let spec = AtomSpec::new(p, f64::INFINITY, d, n0, m).unwrap();
            let a = random_atom(&spec, rng.gen()).unwrap();
            let tail = TaylorTailSpec::for_sequence(&a, d + 1, n0, m).unwrap();
            let q = 1.0 / (1.0 / p - gamma);

            let j_img = 3 * m + 3 * n0.unsigned_abs();
            let enc = image_tail_bound(&a, &params, &tail, j_img, q).unwrap();
            let brute = brute_image_tail(&a, &table, j_img, q);
            worst = worst.max(brute / enc.hi);
            if !(enc.lo <= brute && brute <= enc.hi) {
                failures.push(format!(
                    "T gamma={gamma} p={p:.3} m={m} n0={n0}: {brute:e} vs {enc}"
                ));
            }

            let j_h = n0.unsigned_abs() + m + 1;
            let enc = hilbert_tail_bound(&a, &tail, j_h, p).unwrap();
            let brute = brute_hilbert_tail(&a, j_h, p);
            worst = worst.max(brute / enc.hi);
            if !(enc.lo <= brute && brute <= enc.hi) {
                failures.push(format!("H p={p:.3} m={m} n0={n0}: {brute:e} vs {enc}"));
            }
            checked += 1;
        }
    }
    let el = t.elapsed();
    Outcome::new(
        failures.is_empty() && checked == 100 && within(el, 60.0),
        format!(
            "{checked} atoms, {} escapes, max brute/bound {worst:.3}, {:.1} s{}",
            failures.len(),
            el.as_secs_f64(),
            failures
                .first()
                .map(|f| format!(", first: {f}"))
                .unwrap_or_default()
        ),
    )
}

fn log_uniform(rng: &mut ChaCha8Rng, lo_exp: u32, hi_exp: u32) -> usize {
    let e: f64 = rng.gen_range(lo_exp as f64..=hi_exp as f64);
    2f64.powf(e).round() as usize
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let mut worst = 0.0f64;
    let mut bad = 0;
    for _ in 0..1000 {
        let n = log_uniform(&mut rng, 4, 14);
        let w = log_uniform(&mut rng, 4, 14);
        let offset = rng.gen_range(-(n as i64)..=n as i64);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let b = Sequence::new(offset, values).unwrap();
        let j_lo = rng.gen_range(-2 * n as i64..=n as i64);
        let j_hi = j_lo + w as i64 - 1;
        let gamma: f64 = rng.gen_range(0.01..0.99);
        let plan = WindowPlan::for_sequence(&b, j_lo, j_hi).unwrap();
        let fh = hilbert_apply_fast(&b, &plan).unwrap();
        let fr = riesz_apply_fast(&b, gamma, &plan).unwrap();
        let tol = 1e-9 * (1.0 + b.l1());
        let points: Vec<i64> = if n * w <= 1 << 18 {
            (j_lo..=j_hi).collect()
        } else {
            let mut pts: Vec<i64> = (0..128).map(|_| rng.gen_range(j_lo..=j_hi)).collect();
            pts.extend([j_lo, j_lo + 1, j_hi - 1, j_hi]);
            pts
        };
        for j in points {
            let eh = (fh.get(j) - hilbert_apply(&b, j)).abs();
            let er = (fr.get(j) - riesz_apply(&b, gamma, j).unwrap()).abs();
            worst = worst.max(eh.max(er) / tol);
            if eh > tol || er > tol {
                bad += 1;
            }
        }
    }
    let sizes: Vec<usize> = (10..=16).map(|e| 1usize << e).collect();
    let bench = throughput_benchmark(&sizes, 1).unwrap();
    let de = bench.param_f64("direct_exponent").unwrap();
    let fe = bench.param_f64("fast_exponent").unwrap();
    Outcome::new(
        bad == 0 && fe <= 1.4 && de >= 1.8,
        format!(
            "{bad} disagreements, max err/tol {worst:.2e}; exponents direct {de:.3}, fast {fe:.3}"
        ),
    )
}

type Criterion = (u8, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "closed-form golden values", criterion_1),
        (2, "sign certification of the total sum", criterion_2),
        (3, "epsilon root and g/h chain", criterion_3),
        (4, "Hilbert inequality", criterion_4),
        (5, "pointwise domination", criterion_5),
        (6, "random atoms", criterion_6),
        (7, "uniform atom-image bound", criterion_7),
        (8, "involution", criterion_8),
        (9, "tail-bound soundness", criterion_9),
        (10, "fast path agreement and scaling", criterion_10),
    ];
    let mut failed = 0;
    for (n, name, run) in criteria {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {tag}  {name}: {}", o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {}/10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
