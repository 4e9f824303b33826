//! Invariants over randomly drawn inputs.

use proptest::prelude::*;
use sharp_ineq_core::calculus::{
    ball_integral_of_modulus, holder_lower_estimate, l1_norm, seminorm_local, sup_norm, Window,
};
use sharp_ineq_core::extremals::*;
use sharp_ineq_core::operators::*;
use sharp_ineq_core::oracle::*;
use sharp_ineq_core::*;

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3).prop_flat_map(|d| (Just(d), 0..=d))
}

/// Concave tables: decreasing positive slopes.
fn concave_table() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.1f64..2.0, 0.0f64..1.0), 1..6).prop_map(|segs| {
        let mut knots = vec![(0.0, 0.0)];
        let mut slope = 2.0;
        for (len, shrink) in segs {
            slope *= shrink;
            let (t, w) = *knots.last().unwrap();
            knots.push((t + len, w + slope * len));
        }
        knots
    })
}

fn modulus() -> impl Strategy<Value = Modulus> {
    prop_oneof![
        (0.05f64..=1.0).prop_map(|a| Modulus::power(a).unwrap()),
        concave_table().prop_map(|k| Modulus::table(k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn power_modulus_is_homogeneous(alpha in 0.01f64..=1.0, t in 0.0f64..100.0, lambda in 0.0f64..10.0) {
        let w = Modulus::power(alpha).unwrap();
        let lhs = w.value(lambda * t);
        let rhs = lambda.powf(alpha) * w.value(t);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn moduli_are_monotone_and_pass_validation(w in modulus(), mut ts in prop::collection::vec(0.0f64..10.0, 2..40)) {
        ts.sort_by(f64::total_cmp);
        for p in ts.windows(2) {
            prop_assert!(w.value(p[1]) >= w.value(p[0]));
        }
        let grid: Vec<f64> = (0..=60).map(|k| k as f64 * 0.125).collect();
        prop_assert!(w.validate(&grid).passed());
    }

    #[test]
    fn convex_tables_are_rejected(a in 0.1f64..2.0, b in 0.1f64..2.0, extra in 0.01f64..1.0) {
        let knots = vec![(0.0, 0.0), (a, a), (a + b, a + b * (1.0 + extra))];
        prop_assert!(Modulus::table(knots.clone()).is_err());
        let raw = Modulus::raw_table(knots).unwrap();
        let grid: Vec<f64> = (0..=80).map(|k| k as f64 * (a + b) / 40.0).collect();
        prop_assert!(!raw.validate(&grid).passed());
    }

    #[test]
    fn translation_invariance(
        (d, m) in shape(),
        h in 1.01f64..4.0,
        shift in prop::collection::vec(0i64..5, 3),
        offsets in prop::collection::vec(-5i64..5, 3),
    ) {
        let s = Space::lattice(d, m).unwrap();
        let x: Vec<f64> = (0..d).map(|i| if s.is_half(i) { shift[i] as f64 } else { offsets[i] as f64 }).collect();
        let x = s.point(x).unwrap();
        let ball = s.enumerate_ball(h).unwrap();
        let mut moved: Vec<Vec<i64>> = ball
            .iter()
            .map(|u| s.translate(&x, u).unwrap().coords().iter().map(|c| *c as i64).collect())
            .collect();
        moved.sort();
        moved.dedup();
        prop_assert_eq!(moved.len() as f64, s.ball_measure(h).unwrap());
    }

    #[test]
    fn translation_preserves_distance(
        (d, m) in shape(),
        a in prop::collection::vec(0.0f64..5.0, 3),
        b in prop::collection::vec(0.0f64..5.0, 3),
        sa in prop::collection::vec(any::<bool>(), 3),
    ) {
        let s = Space::continuum(d, m).unwrap();
        let sign = |v: &[f64]| -> Vec<f64> {
            (0..d).map(|i| if s.is_half(i) || !sa[i] { v[i] } else { -v[i] }).collect()
        };
        let x = s.point(sign(&a)).unwrap();
        let y = s.point(sign(&b)).unwrap();
        let xy = s.translate(&x, &y).unwrap();
        let lhs = s.distance(&xy, &x).unwrap();
        let rhs = s.distance(&y, &s.origin()).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn ball_measure_grows((d, m) in shape(), h in 0.01f64..5.0, dh in 0.001f64..1.0) {
        let c = Space::continuum(d, m).unwrap();
        prop_assert!(c.ball_measure(h + dh).unwrap() > c.ball_measure(h).unwrap());
        let l = Space::lattice(d, m).unwrap();
        let h = h + 1.001;
        prop_assert!(l.ball_measure(h + dh).unwrap() >= l.ball_measure(h).unwrap());
    }

    #[test]
    fn radial_reduction_matches_closed_form(d in 1usize..=4, m in 0usize..=4, alpha in 0.05f64..=1.0, h in prop::sample::select(vec![0.5, 1.0, 2.0])) {
        let m = m.min(d);
        let s = Space::continuum(d, m).unwrap();
        let w = Modulus::power(alpha).unwrap();
        let q = QuadratureSpec::auto(&s, &w);
        let a = ball_integral_of_modulus(&s, &w, h, &q.with_method(Method::ClosedForm)).unwrap().value;
        let b = ball_integral_of_modulus(&s, &w, h, &q.with_method(Method::Radial1D)).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-9 * a, "{} vs {}", a, b);
    }

    #[test]
    fn cones_are_holder_on_lattice_pairs(d in 1usize..=2, w in modulus(), seed in any::<u64>()) {
        let s = Space::lattice(d, 0).unwrap();
        let spec = ConeFunctionSpec::random(&s, &w, &mut rng::stream(seed, 0), true);
        let f = spec.build(&s, &w).unwrap();
        let pts = s.lattice_window(5).unwrap();
        let pts: Vec<Point> = pts.into_iter().map(|p| Point::new(p.into_iter().map(|c| c as f64).collect())).collect();
        let mut pairs = Vec::new();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                pairs.push((pts[i].clone(), pts[j].clone()));
            }
        }
        let est = holder_lower_estimate(&f, &s, &w, &pairs).unwrap();
        prop_assert!(est <= spec.slope * (1.0 + 1e-12) + 1e-15, "{} > {}", est, spec.slope);
    }

    #[test]
    fn norms_are_homogeneous(seed in any::<u64>(), lambda in 0.1f64..10.0) {
        let s = Space::lattice(2, 1).unwrap();
        let w = Modulus::identity();
        let spec = ConeFunctionSpec::random(&s, &w, &mut rng::stream(seed, 1), false);
        let f = spec.build(&s, &w).unwrap();
        let g = spec.scaled(lambda).build(&s, &w).unwrap();
        let q = QuadratureSpec::auto(&s, &w);
        let r = spec.support_radius(&w).unwrap() + 4.0;
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
        let win = Window::new(r);
        prop_assert!(close(lambda * seminorm_local(&f, &s, 2.5, &win, &q).unwrap().estimate.value,
                           seminorm_local(&g, &s, 2.5, &win, &q).unwrap().estimate.value));
        prop_assert!(close(lambda * l1_norm(&f, &s, r, &q).unwrap().value, l1_norm(&g, &s, r, &q).unwrap().value));
        prop_assert!(close(lambda * sup_norm(&f, &s, r, 1.0).unwrap().value, sup_norm(&g, &s, r, 1.0).unwrap().value));
    }

    #[test]
    fn seminorm_is_dominated_by_l1(seed in any::<u64>(), h in 1.01f64..4.0) {
        let s = Space::lattice(2, 0).unwrap();
        let w = Modulus::power(0.5).unwrap();
        let spec = ConeFunctionSpec::random(&s, &w, &mut rng::stream(seed, 2), false);
        let f = spec.build(&s, &w).unwrap();
        let q = QuadratureSpec::auto(&s, &w);
        let r = spec.support_radius(&w).unwrap() + h + 1.0;
        let semi = seminorm_local(&f, &s, h, &Window::new(r), &q).unwrap().estimate.value;
        let l1 = l1_norm(&f, &s, r, &q).unwrap().value;
        prop_assert!(semi <= l1 * (1.0 + 1e-12));
    }

    #[test]
    fn lattice_seminorm_of_f_eh_is_certified((d, m) in (1usize..=2).prop_flat_map(|d| (Just(d), 0..=d)), h in 1.01f64..4.0, w in modulus()) {
        let s = Space::lattice(d, m).unwrap();
        let f = make_f_eh(&s, &w, h).unwrap();
        let q = QuadratureSpec::auto(&s, &w);
        let e = seminorm_local(&f, &s, h, &Window::new(2.0 * h + 1.0), &q).unwrap();
        let c = e.certified.unwrap();
        prop_assert!((e.estimate.value - c).abs() <= 1e-12 * c);
    }

    #[test]
    fn suite_trials_are_homogeneous(seed in 1u64..1000, trial in 0usize..1000) {
        let s = Space::lattice(2, 0).unwrap();
        let w = Modulus::power(0.5).unwrap();
        let k = Kernel::power_law(0.25).unwrap();
        for t in [TheoremId::Lemma1, TheoremId::Nagy, TheoremId::NagyL1, TheoremId::Charge] {
            let spec = trial_spec(t, &s, &w, seed, trial);
            let a = run_trial(t, &s, &w, &k, &spec, 1.5).unwrap();
            let b = run_trial(t, &s, &w, &k, &spec.scaled(10.0), 1.5).unwrap();
            let close = |x: f64, y: f64| 10.0 * x == y || (10.0 * x - y).abs() <= 1e-9 * y.abs().max(1.0);
            prop_assert!(close(a.lhs, b.lhs) && close(a.rhs_total(), b.rhs_total()) && close(a.gap, b.gap), "{} {:?} {:?}", t, a, b);
        }
    }

    #[test]
    fn constants_never_violate(c in -50.0f64..50.0, h in 1.01f64..3.0) {
        let s = Space::lattice(2, 1).unwrap();
        let w = Modulus::identity();
        let spec = ConeFunctionSpec { centers: vec![s.origin()], heights: vec![c.abs()], slope: 0.0, sign: if c < 0.0 { -1.0 } else { 1.0 } };
        let k = Kernel::power_law(0.5).unwrap();
        for t in [TheoremId::Lemma1, TheoremId::Nagy, TheoremId::Sobolev, TheoremId::Charge] {
            let r = run_trial(t, &s, &w, &k, &spec, h).unwrap();
            prop_assert!(r.verdict != Verdict::Violated, "{} {:?}", t, r);
        }
    }

    #[test]
    fn optimal_radius_closes_the_gap(
        (d, m) in shape(),
        alpha in 0.05f64..=1.0,
        sup in 1e-3f64..1e3,
        holder in 1e-3f64..1e3,
    ) {
        let s = Space::continuum(d, m).unwrap();
        let w = Modulus::power(alpha).unwrap();
        let h = optimal_h(d, m, alpha, sup, holder).unwrap();
        let add = mixed_nagy_rhs(d, m, &w, h, holder, sup, &QuadratureSpec::auto(&s, &w)).unwrap().total();
        let mul = mixed_multiplicative_rhs(d, m, alpha, sup, holder).unwrap();
        prop_assert!((add - mul).abs() <= 1e-10 * mul, "{} vs {}", add, mul);
        let nearby = mixed_nagy_rhs(d, m, &w, h * 1.01, holder, sup, &QuadratureSpec::auto(&s, &w)).unwrap().total();
        prop_assert!(nearby >= add);
    }

    #[test]
    fn hypersingular_rhs_is_linear(a in 0.0f64..10.0, b in 0.0f64..10.0, c in 0.0f64..10.0, t in 0.0f64..10.0, k in 0.0f64..5.0) {
        let base = hypersingular_rhs(a, b, c, t).total();
        let scaled = hypersingular_rhs(k * a, b, c, t).total();
        prop_assert!((scaled - (base + (k - 1.0) * a * c)).abs() <= 1e-9 * scaled.max(1.0));
        let scaled = hypersingular_rhs(a, k * b, c, t).total();
        prop_assert!((scaled - (base + (k - 1.0) * 2.0 * b * t)).abs() <= 1e-9 * scaled.max(1.0));
    }

    #[test]
    fn mixed_difference_of_g_matches_the_average(alpha in 0.2f64..=1.0, h in 0.3f64..2.0, x in -3.0f64..3.0) {
        let s = Space::continuum(1, 0).unwrap();
        let w = Modulus::power(alpha).unwrap();
        let g = make_g_eh(&w, h, 1).unwrap();
        let avg = steklov_average(&g.derivative, &s, h, &QuadratureSpec::auto(&s, &w)).unwrap();
        let lhs = mixed_difference(&g.function, &s, h, &[x]).unwrap();
        prop_assert!((lhs - avg.try_eval(&[x]).unwrap().value).abs() < 1e-8);
    }
}
