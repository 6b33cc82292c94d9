use discrete_hardy::atoms::{nearest_moment_free, random_atom, validate_atom, AtomSpec};
use discrete_hardy::counterexample::{
    certify_unbounded, second_difference, u_apply_closed, CounterexampleCertificate,
};
use discrete_hardy::fastops::{hilbert_apply_fast, riesz_apply_fast, WindowPlan};
use discrete_hardy::lab::{hilbert_inequality_check, pointwise_domination_sweep, weak_type_check};
use discrete_hardy::operators::{
    fractional_apply, hilbert_tail_bound, image_tail_bound, kernel_derivative_bound, kernel_eval,
    riesz_apply,
};
use discrete_hardy::{OperatorParams, Sequence, TaylorTailSpec};
use proptest::prelude::*;

fn sequence(max_len: usize, reach: i64) -> impl Strategy<Value = Sequence> {
    (
        -reach..=reach,
        prop::collection::vec(-1.0f64..1.0, 1..=max_len),
    )
        .prop_map(|(off, vals)| Sequence::new(off, vals).unwrap())
}

/// `(γ, α, β)` with `α + β = 1 - γ`, both bounded away from zero.
fn operator_params() -> impl Strategy<Value = OperatorParams> {
    (0.0f64..0.9, 0.05f64..0.95).prop_map(|(g, t)| {
        let total = 1.0 - g;
        OperatorParams::new(g, t * total, (1.0 - t) * total).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lp_norms_decrease_in_p(b in sequence(40, 20), p1 in 0.2f64..4.0, dp in 0.0f64..4.0) {
        let p2 = p1 + dp;
        let n1 = b.lp_norm(p1).unwrap();
        prop_assert!(b.lp_norm(p2).unwrap() <= n1 * (1.0 + 1e-12));
        prop_assert!(b.lp_norm(f64::INFINITY).unwrap() <= n1 * (1.0 + 1e-12));
    }

    #[test]
    fn maximal_dominates_and_matches_brute_force(b in sequence(24, 10), j in -40i64..40) {
        let mb = b.maximal_apply(j);
        prop_assert!(b.get(j).abs() <= mb);
        let (lo, hi) = b.support().unwrap();
        let n_star = (j - lo).abs().max((hi - j).abs());
        let brute = (0..=10 * n_star)
            .map(|n| (j - n..=j + n).map(|i| b.get(i).abs()).sum::<f64>() / (2 * n + 1) as f64)
            .fold(0.0, f64::max);
        prop_assert!((mb - brute).abs() <= 1e-12 * (1.0 + brute));
        let w = b.maximal_window(j - 3, j + 3);
        prop_assert!((w[3] - mb).abs() <= 1e-12 * (1.0 + mb));
    }

    #[test]
    fn moments_are_linear(b in sequence(16, 8), c in sequence(16, 8), t in -3.0f64..3.0, k in 0u32..5) {
        let lhs = (&b + &c.scale(t)).moment(k);
        let rhs = b.moment(k) + t * c.moment(k);
        let scale = 1.0 + b.abs().moment(k).abs().max(c.abs().moment(k).abs()) * (1.0 + t.abs());
        prop_assert!((lhs - rhs).abs() <= 1e-11 * scale);
    }

    #[test]
    fn fractional_dominated_by_riesz_of_abs(b in sequence(20, 15), j in -30i64..30, g in 0.05f64..0.95, t in 0.05f64..0.95) {
        let params = OperatorParams::new(g, t * (1.0 - g), (1.0 - t) * (1.0 - g)).unwrap();
        let abs = b.abs();
        let lhs = fractional_apply(&b, &params, j).abs();
        let rhs = riesz_apply(&abs, g, j).unwrap() + riesz_apply(&abs, g, -j).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn excluded_indices_never_evaluated(params in operator_params(), j in -20i64..20, g in 0.05f64..0.95) {
        // mass exactly on the excluded points ±j
        let b = Sequence::from_pairs([(j, 1.0), (-j, 1.0)]).unwrap();
        prop_assert_eq!(fractional_apply(&b, &params, j), 0.0);
        let d = Sequence::delta(j);
        prop_assert_eq!(riesz_apply(&d, g, j).unwrap(), 0.0);
    }

    #[test]
    fn derivative_bound_dominates_finite_differences(
        params in operator_params(),
        x in -50.0f64..50.0,
        y in -50.0f64..50.0,
        n in 1u32..=3,
    ) {
        let d = (x - y).abs().min((x + y).abs());
        prop_assume!(d > 0.5);
        let h = 1e-4 * d;
        let k = |a: f64, b: f64| kernel_eval(&params, a, b).unwrap();
        // central difference of order n on the stencil (n/2 - i) h
        let fd = |dir: (f64, f64)| {
            let mut s = 0.0;
            let mut binom = 1.0;
            for i in 0..=n {
                let shift = (n as f64 / 2.0 - i as f64) * h;
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                s += sign * binom * k(x + dir.0 * shift, y + dir.1 * shift);
                binom = binom * (n - i) as f64 / (i + 1) as f64;
            }
            (s / h.powi(n as i32)).abs()
        };
        let estimate = fd((1.0, 0.0)) + fd((0.0, 1.0));
        let bound = kernel_derivative_bound(&params, n, x, y).unwrap();
        prop_assert!(estimate <= bound, "estimate {} bound {}", estimate, bound);
    }

    #[test]
    fn fast_paths_are_deterministic_and_linear(
        b1 in sequence(64, 40),
        b2 in sequence(64, 40),
        g in 0.05f64..0.95,
        j_lo in -80i64..0,
        w in 1i64..120,
    ) {
        let (l1, h1) = b1.support().unwrap();
        let (l2, h2) = b2.support().unwrap();
        let plan = WindowPlan::new(j_lo, j_lo + w, l1.min(l2), h1.max(h2)).unwrap();
        let sum = &b1 + &b2;
        let tol = 1e-9 * (1.0 + b1.l1() + b2.l1());
        let h = |b: &Sequence| hilbert_apply_fast(b, &plan).unwrap();
        let r = |b: &Sequence| riesz_apply_fast(b, g, &plan).unwrap();
        prop_assert_eq!(h(&b1), h(&b1));
        prop_assert_eq!(r(&b1), r(&b1));
        for j in j_lo..=j_lo + w {
            prop_assert!((h(&sum).get(j) - h(&b1).get(j) - h(&b2).get(j)).abs() <= tol);
            prop_assert!((r(&sum).get(j) - r(&b1).get(j) - r(&b2).get(j)).abs() <= tol);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_atoms_are_atoms(
        p_idx in 0usize..3,
        m in 1u64..64,
        center in -200i64..200,
        seed in any::<u64>(),
    ) {
        let p = [1.0, 2.0 / 3.0, 0.5][p_idx];
        let d = AtomSpec::critical_degree(p);
        let spec = AtomSpec::new(p, f64::INFINITY, d, center, m).unwrap();
        let a = random_atom(&spec, seed).unwrap();
        prop_assert!(validate_atom(&a, &spec, 1e-10).unwrap().verdict());
        prop_assert!(a.lp_norm(p).unwrap() <= 1.0);
        // an (p, ∞, d)-atom is a (p, q, d)-atom for finite q > p
        for q in [1.0, 2.0, 4.0] {
            if q > p {
                let finite = AtomSpec::new(p, q, d, center, m).unwrap();
                prop_assert!(validate_atom(&a, &finite, 1e-10).unwrap().verdict());
            }
        }
    }

    #[test]
    fn projection_is_idempotent(b in sequence(12, 4), degree in 0u32..4, pad in 2i64..8) {
        let (lo, hi) = b.support().unwrap();
        let window = (lo - pad, hi + pad);
        let c = nearest_moment_free(&b, degree, window).unwrap();
        let cc = nearest_moment_free(&c, degree, window).unwrap();
        for i in window.0..=window.1 {
            prop_assert!((c.get(i) - cc.get(i)).abs() <= 1e-12);
        }
        // contraction: the projection does not increase the ℓ² norm
        prop_assert!(c.lp_norm(2.0).unwrap() <= b.lp_norm(2.0).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn tail_bounds_contain_partial_tails(
        p_idx in 0usize..3,
        g_idx in 0usize..2,
        m in 1u64..=3,
        center in -6i64..=6,
        seed in any::<u64>(),
    ) {
        let p = [1.0, 2.0 / 3.0, 0.5][p_idx];
        let gamma = [0.0, 0.3][g_idx];
        let d = AtomSpec::critical_degree(p);
        let a = random_atom(&AtomSpec::new(p, f64::INFINITY, d, center, m).unwrap(), seed).unwrap();
        let spec = TaylorTailSpec::for_sequence(&a, d + 1, center, m).unwrap();
        let params = OperatorParams::symmetric(gamma).unwrap();
        let q = 1.0 / (1.0 / p - gamma);
        let cutoff = 3 * m + 3 * center.unsigned_abs();
        let bound = image_tail_bound(&a, &params, &spec, cutoff, q).unwrap();
        let far = cutoff as i64 + 20_000;
        let partial: f64 = (cutoff as i64 + 1..=far)
            .flat_map(|j| [j, -j])
            .map(|j| fractional_apply(&a, &params, j).abs().powf(q))
            .sum();
        prop_assert!(bound.lo <= partial && partial <= bound.hi);

        let cutoff = center.unsigned_abs() + m + 1;
        let bound = hilbert_tail_bound(&a, &spec, cutoff, p).unwrap();
        let far = cutoff as i64 + 20_000;
        let partial: f64 = (cutoff as i64 + 1..=far)
            .flat_map(|j| [j, -j])
            .map(|j| discrete_hardy::operators::hilbert_apply(&a, j).abs().powf(p))
            .sum();
        prop_assert!(bound.lo <= partial && partial <= bound.hi);
    }

    #[test]
    fn weak_type_level_sets_nested(b in sequence(30, 30), a1 in 0.01f64..0.5, da in 0.0f64..0.5) {
        let r = weak_type_check(&b, &[a1, a1 + da], (0, 0)).unwrap();
        prop_assert!(r.verdict);
        let counts: Vec<u64> = r.artifacts.iter().map(|row| row["count"].as_u64().unwrap()).collect();
        prop_assert!(counts[0] >= counts[1]);
    }
}

#[test]
fn closed_form_matches_operator_on_wide_range() {
    let b = second_difference();
    for gamma in [0.0, 0.1, 0.2, 0.3] {
        let params = OperatorParams::symmetric(gamma).unwrap();
        for j in -1000i64..=1000 {
            let d = (u_apply_closed(gamma, j) - fractional_apply(&b, &params, j)).abs();
            assert!(d <= 1e-12, "gamma {gamma}, j {j}: {d:e}");
        }
    }
}

#[test]
fn image_terms_are_positive() {
    for gamma in [0.0, 0.1, 0.2, 0.3] {
        let s = (1.0 - gamma) / 2.0;
        for j in 2..=10_000u64 {
            let jf = j as f64;
            let x = 1.0 / (jf * jf);
            // (j²-1)^{-s} - j^{-2s} = j^{-2s} ((1 - x)^{-s} - 1), with no cancellation
            let term = jf.powf(-2.0 * s) * (-s * (-x).ln_1p()).exp_m1();
            assert!(term > 0.0, "gamma {gamma}, j {j}");
        }
    }
}

#[test]
fn disjoint_union_bound() {
    for gamma in [0.0, 0.1, 0.2, 0.3] {
        let s = (1.0 - gamma) / 2.0;
        let tail: f64 = (3..=1_000_000u64)
            .map(|j| {
                let jf = j as f64;
                jf.powf(-2.0 * s) * (-s * (-1.0 / (jf * jf)).ln_1p()).exp_m1()
            })
            .sum();
        assert!(tail <= 8f64.powf(-s), "gamma {gamma}: {tail}");
    }
}

#[test]
fn certificate_conclusion_follows_from_fields() {
    for (gamma, p) in [(0.0, 1.0), (0.1, 1.0 / 1.1), (0.05, 0.9), (0.0, 0.75)] {
        let c: CounterexampleCertificate = certify_unbounded(gamma, p, 10_000).unwrap();
        assert!(c.is_consistent());
        assert_eq!(
            c.conclusion,
            c.sum_enclosure.excludes_zero() && c.b_in_hp.holds
        );
        assert!(c.conclusion);
        assert!(c.b_in_hp.exponent > 1.0);
        assert!(c.q <= 1.0);
    }
}

#[test]
fn reports_are_deterministic_per_seed() {
    let a = hilbert_inequality_check(40, 32, 5).unwrap();
    let b = hilbert_inequality_check(40, 32, 5).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
    let params = OperatorParams::symmetric(0.0).unwrap();
    let a = pointwise_domination_sweep(30, 16, &params, 2.0, 7).unwrap();
    let b = pointwise_domination_sweep(30, 16, &params, 2.0, 7).unwrap();
    assert_eq!(a, b);
    assert_ne!(
        a,
        pointwise_domination_sweep(30, 16, &params, 2.0, 8).unwrap()
    );
}
