//! Randomized invariants for the exact sequence-space lane and the grid lane.
//!
//! Everything the solver takes for granted is restated here as a property
//! over random instances: signed permutations preserve the norm, cumulative
//! variation telescopes, the best-approximation interval actually minimizes,
//! the distance along a line is convex, dual certificates verify exactly at
//! minimizers and nowhere else, extreme functionals are subunit, enclosures
//! contain the exact values they claim, and the isotonic fit beats every
//! monotone candidate thrown at it.

use dw1::fspace::{maximal_function, pava_isotonic_l1, GridFunction, GridSpace};
use dw1::norms::{lorentz_norm, lorentz_norm_exact, variation_cumulative};
use dw1::projection::{
    dual_certificate, h_exact, project_exact, verify_dual_certificate, CertificateSearch,
};
use dw1::selection::{transport, BijectionRule, SignRule};
use dw1::seq::Seq;
use dw1::weight::{Continuation, Weight};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Short vectors of small rationals; denominators stay tiny so the exact
/// lane never slows down.
fn rationals(len: impl Into<proptest::collection::SizeRange>) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec((-40i64..=40, 1i64..=9), len)
        .prop_map(|ps| ps.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn nonzero_rationals(len: impl Into<proptest::collection::SizeRange>) -> impl Strategy<Value = Vec<BigRational>> {
    rationals(len).prop_filter("direction must be nonzero", |v| v.iter().any(|r| !r.is_zero()))
}

/// Either the harmonic weight or a random strictly decreasing table with
/// harmonic continuation; both have exact values at every index.
fn weights() -> impl Strategy<Value = Weight> {
    prop_oneof![
        Just(Weight::harmonic()),
        proptest::collection::vec((0i64..=24, 1i64..=4), 1..5).prop_map(|ps| {
            let mut vals: Vec<BigRational> =
                ps.into_iter().map(|(n, d)| BigRational::one() + rat(n, d)).collect();
            vals.sort_by(|a, b| b.cmp(a));
            vals.dedup();
            Weight::table(vals, Continuation::Harmonic).expect("entries ≥ 1, strictly decreasing")
        }),
    ]
}

proptest! {
    /// A signed permutation of the coordinates leaves the norm unchanged:
    /// the norm only sees the multiset of absolute values.
    #[test]
    fn transport_is_an_isometry(
        (u, perm) in rationals(1..8).prop_flat_map(|u| {
            let n = u.len() as u64;
            (Just(u), Just((1..=n).collect::<Vec<u64>>()).prop_shuffle())
        }),
        flips in proptest::collection::vec(any::<bool>(), 8),
        w in weights(),
    ) {
        let signs: Vec<i8> = flips.iter().map(|f| if *f { -1 } else { 1 }).collect();
        let seq = Seq::from_rationals(u.clone());
        let moved = transport(&seq, &BijectionRule::Table(perm), &SignRule::Table(signs)).unwrap();
        let lhs = lorentz_norm_exact(&moved.head_exact().unwrap(), &w).unwrap();
        let rhs = lorentz_norm_exact(&u, &w).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Backward variation sums telescope: z(j) − z(j+1) = |Δx(j)|, z is
    /// nonincreasing, and the last entry is the drop to zero.
    #[test]
    fn cumulative_variation_telescopes(u in rationals(2..9)) {
        let seq = Seq::from_rationals(u);
        let n = seq.head_len();
        let c = variation_cumulative(&seq, n, n + 2).unwrap();
        let slack = 2.0 * c.indep_err + 1e-12;
        for j in 1..n {
            let zj = c.value(j);
            let zj1 = c.value(j + 1);
            prop_assert!(zj.value >= zj1.value - slack);
            let d = seq.value_enc(j).sub(seq.value_enc(j + 1)).abs();
            let gap = ((zj.value - zj1.value) - d.value).abs();
            prop_assert!(gap <= slack + d.error, "telescoping off by {gap:.3e} at {j}");
        }
        let last = seq.value_enc(n).abs();
        prop_assert!((c.value(n).value - last.value).abs() <= slack + last.error);
    }

    /// The exact projection interval is where the minimum lives: both
    /// endpoints and the midpoint attain the distance, and stepping off
    /// either end strictly increases it.
    #[test]
    fn projection_interval_attains_the_minimum(
        x in rationals(1..7),
        y in nonzero_rationals(1..7),
        w in weights(),
    ) {
        let p = project_exact(&x, &y, &w).unwrap();
        prop_assert!(p.lo <= p.hi);
        prop_assert!(!p.dist.is_negative());
        let mid = (&p.lo + &p.hi) / rat(2, 1);
        for c in [&p.lo, &p.hi, &mid] {
            prop_assert_eq!(h_exact(&x, &y, c, &w).unwrap(), p.dist.clone());
        }
        prop_assert!(p.contains(&mid));
        for delta in [rat(1, 7), rat(3, 1)] {
            let below = &p.lo - &delta;
            let above = &p.hi + &delta;
            prop_assert!(h_exact(&x, &y, &below, &w).unwrap() > p.dist);
            prop_assert!(h_exact(&x, &y, &above, &w).unwrap() > p.dist);
            prop_assert!(!p.contains(&above));
            prop_assert!(!p.contains(&below));
        }
    }

    /// The distance to the line through `y` is convex in the coefficient;
    /// checked exactly at rational convex combinations.
    #[test]
    fn distance_along_the_line_is_convex(
        x in rationals(1..6),
        y in nonzero_rationals(1..6),
        w in weights(),
        (c1n, c2n, k) in (-30i64..=30, -30i64..=30, 1i64..=7),
    ) {
        let c1 = rat(c1n, 3);
        let c2 = rat(c2n, 3);
        let lam = rat(k, 8);
        let com = BigRational::one() - &lam;
        let cm = &lam * &c1 + &com * &c2;
        let h1 = h_exact(&x, &y, &c1, &w).unwrap();
        let h2 = h_exact(&x, &y, &c2, &w).unwrap();
        let hm = h_exact(&x, &y, &cm, &w).unwrap();
        prop_assert!(hm <= &lam * &h1 + &com * &h2);
    }

    /// When the extreme-functional search succeeds at a minimizer, the
    /// certificate verifies there — and the same certificate must fail at a
    /// coefficient strictly outside the interval, where the norm is larger.
    #[test]
    fn dual_certificate_verifies_only_at_minimizers(
        x in rationals(1..5),
        y in nonzero_rationals(1..5),
    ) {
        let w = Weight::harmonic();
        let p = project_exact(&x, &y, &w).unwrap();
        if let CertificateSearch::Found { certificate } = dual_certificate(&x, &y, &p.lo, &w).unwrap() {
            prop_assert!(verify_dual_certificate(&x, &y, &p.lo, &w, &certificate).unwrap());
            let outside = &p.hi + BigRational::one();
            prop_assert!(!verify_dual_certificate(&x, &y, &outside, &w, &certificate).unwrap());
        }
    }

    /// Any functional that places the weights injectively on distinct
    /// coordinates is subunit: |Σ σ(k)·w(rank k)·u(i_k)| never exceeds ‖u‖.
    #[test]
    fn extreme_dual_functionals_are_subunit(
        (u, support, ranks) in rationals(1..8)
            .prop_flat_map(|u| {
                let idx: Vec<u64> = (1..=u.len() as u64).collect();
                let n = idx.len();
                (Just(u), proptest::sample::subsequence(idx, 1..=n))
            })
            .prop_flat_map(|(u, support)| {
                let m = support.len() as u64;
                (Just(u), Just(support), Just((1..=m).collect::<Vec<u64>>()).prop_shuffle())
            }),
        flips in proptest::collection::vec(any::<bool>(), 8),
        w in weights(),
    ) {
        let mut fu = BigRational::zero();
        for (k, (&i, &r)) in support.iter().zip(&ranks).enumerate() {
            let term = w.value_exact(r).unwrap() * &u[i as usize - 1];
            fu += if flips[k] { -term } else { term };
        }
        prop_assert!(fu.abs() <= lorentz_norm_exact(&u, &w).unwrap());
    }

    /// The running average of a nonincreasing profile dominates it and is
    /// itself nonincreasing; step boundaries advance strictly.
    #[test]
    fn maximal_function_dominates_its_rearrangement(
        (measures, values) in (1usize..=8).prop_flat_map(|n| (
            proptest::collection::vec(0.05f64..2.0, n),
            proptest::collection::vec(-5.0f64..5.0, n),
        )),
    ) {
        let grid = GridSpace::new(measures, None).unwrap();
        let prof = maximal_function(&GridFunction::new(values), &grid).unwrap();
        prop_assert!((prof.double_star[0] - prof.star[0]).abs() <= 1e-10);
        for i in 1..prof.star.len() {
            prop_assert!(prof.star[i] <= prof.star[i - 1] + 1e-12);
            prop_assert!(prof.double_star[i] >= prof.star[i] - 1e-10);
            prop_assert!(prof.double_star[i] <= prof.double_star[i - 1] + 1e-10);
            prop_assert!(prof.times[i] > prof.times[i - 1]);
        }
    }

    /// The floating enclosure route must bracket the exact norm it shadows.
    #[test]
    fn norm_enclosure_contains_the_exact_value(u in rationals(0..9), w in weights()) {
        let exact = lorentz_norm_exact(&u, &w).unwrap();
        let enc = lorentz_norm(&Seq::from_rationals(u), &w, 1e-9).unwrap();
        let val = BigRational::from_float(enc.value).unwrap();
        let err = BigRational::from_float(enc.error).unwrap();
        prop_assert!(
            (val - &exact).abs() <= err,
            "enclosure {}±{:.2e} misses the exact value", enc.value, enc.error
        );
    }

    /// Norm axioms in the exact lane: triangle inequality, absolute
    /// homogeneity, and lattice monotonicity under coordinate shrinking.
    #[test]
    fn exact_norm_axioms_hold(
        u in rationals(1..7),
        v in rationals(1..7),
        (qn, qd) in (-20i64..=20, 1i64..=8),
        w in weights(),
    ) {
        let norm = |s: &[BigRational]| lorentz_norm_exact(s, &w).unwrap();
        let get = |s: &[BigRational], i: usize| s.get(i).cloned().unwrap_or_else(BigRational::zero);
        let n = u.len().max(v.len());
        let sum: Vec<BigRational> = (0..n).map(|i| get(&u, i) + get(&v, i)).collect();
        prop_assert!(norm(&sum) <= norm(&u) + norm(&v));
        let q = rat(qn, qd);
        let scaled: Vec<BigRational> = u.iter().map(|r| &q * r).collect();
        prop_assert_eq!(norm(&scaled), q.abs() * norm(&u));
        let shrunk: Vec<BigRational> = u
            .iter()
            .enumerate()
            .map(|(i, r)| if i % 2 == 0 { r / rat(2, 1) } else { r.clone() })
            .collect();
        prop_assert!(norm(&shrunk) <= norm(&u));
    }

    /// The pooled weighted-median fit is monotone and no monotone candidate
    /// — sorted data, any constant, or a random monotone vector — has a
    /// smaller weighted L¹ cost.
    #[test]
    fn isotonic_fit_is_optimal_among_monotone_candidates(
        (x, wts, cand) in (2usize..=9).prop_flat_map(|n| (
            proptest::collection::vec(-5.0f64..5.0, n),
            proptest::collection::vec(0.1f64..3.0, n),
            proptest::collection::vec(-5.0f64..5.0, n),
        )),
        increasing in any::<bool>(),
    ) {
        let fit = pava_isotonic_l1(&x, &wts, increasing);
        for k in 1..fit.len() {
            if increasing {
                prop_assert!(fit[k] >= fit[k - 1] - 1e-12);
            } else {
                prop_assert!(fit[k] <= fit[k - 1] + 1e-12);
            }
        }
        let cost = |c: &[f64]| -> f64 {
            c.iter().zip(&x).zip(&wts).map(|((ci, xi), wi)| wi * (ci - xi).abs()).sum()
        };
        let fit_cost = cost(&fit);
        let mut sorted = x.clone();
        sorted.sort_by(f64::total_cmp);
        let mut monotone = cand;
        monotone.sort_by(f64::total_cmp);
        if !increasing {
            sorted.reverse();
            monotone.reverse();
        }
        prop_assert!(fit_cost <= cost(&sorted) + 1e-9);
        prop_assert!(fit_cost <= cost(&monotone) + 1e-9);
        for v in &x {
            prop_assert!(fit_cost <= cost(&vec![*v; x.len()]) + 1e-9);
        }
    }
}
