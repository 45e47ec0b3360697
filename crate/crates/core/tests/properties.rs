use std::f64::consts::{FRAC_PI_2, PI};

use pencil_core::elliptic::{
    addition_cn, addition_sn, amplitude, incomplete_f, jacobi, oracle_f_quadrature, quarter_period,
    Modulus,
};
use pencil_core::pencil::power_of_point;
use pencil_core::poncelet::{composite_gamma, trajectory};
use pencil_core::tangent_map::{
    a1_apply, a1_compose, apply, chord_distance, compose, touching_parameter, CirclePoint,
    TangentMap,
};
use pencil_core::{ClosureReport, Pencil, Point, Trajectory};
use proptest::prelude::*;

fn modulus() -> impl Strategy<Value = Modulus> {
    (0.0..0.99f64).prop_map(|k| Modulus::new(k).unwrap())
}

fn interior_modulus() -> impl Strategy<Value = f64> {
    0.05..0.97f64
}

fn theta() -> impl Strategy<Value = f64> {
    -FRAC_PI_2 + 1e-9..FRAC_PI_2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn integral_matches_quadrature(t in -10.0..10.0f64, m in modulus()) {
        let oracle = oracle_f_quadrature(t, &m, 1e-12).unwrap();
        prop_assert!((incomplete_f(t, &m).unwrap() - oracle).abs() <= 1e-10);
    }

    #[test]
    fn amplitude_inverts_integral(t in -10.0..10.0f64, u in -20.0..20.0f64, m in modulus()) {
        prop_assert!((amplitude(incomplete_f(t, &m).unwrap(), &m).unwrap() - t).abs() <= 1e-10);
        prop_assert!((incomplete_f(amplitude(u, &m).unwrap(), &m).unwrap() - u).abs() <= 1e-10);
    }

    #[test]
    fn integral_is_odd_and_increasing(t in 0.0..10.0f64, dt in 1e-6..1.0f64, m in modulus()) {
        let f = incomplete_f(t, &m).unwrap();
        prop_assert_eq!(incomplete_f(-t, &m).unwrap(), -f);
        prop_assert!(incomplete_f(t + dt, &m).unwrap() > f);
    }

    #[test]
    fn quasi_period(t in -4.0..4.0f64, n in -3i32..=3, m in modulus()) {
        let k = quarter_period(&m).unwrap().value();
        let shifted = incomplete_f(t + n as f64 * PI, &m).unwrap();
        prop_assert!((shifted - incomplete_f(t, &m).unwrap() - 2.0 * n as f64 * k).abs() <= 1e-10);
    }

    #[test]
    fn jacobi_identities(u in -30.0..30.0f64, m in modulus()) {
        let t = jacobi(u, &m).unwrap();
        prop_assert!((t.cn * t.cn + t.sn * t.sn - 1.0).abs() <= 1e-12);
        prop_assert!((t.dn * t.dn + m.k_squared() * t.sn * t.sn - 1.0).abs() <= 1e-12);
        prop_assert!(t.dn >= m.k_comp && t.dn <= 1.0);
    }

    #[test]
    fn addition_laws(u in -8.0..8.0f64, v in -8.0..8.0f64, m in modulus()) {
        let direct = jacobi(u + v, &m).unwrap();
        prop_assert!((addition_cn(u, v, &m).unwrap() - direct.cn).abs() <= 1e-9);
        prop_assert!((addition_sn(u, v, &m).unwrap() - direct.sn).abs() <= 1e-9);
    }

    #[test]
    fn zero_modulus_is_trigonometry(u in -30.0..30.0f64) {
        let t = jacobi(u, &Modulus::new(0.0).unwrap()).unwrap();
        prop_assert!((t.cn - u.cos()).abs() <= 1e-12);
        prop_assert!((t.sn - u.sin()).abs() <= 1e-12);
        prop_assert_eq!(t.dn, 1.0);
    }

    #[test]
    fn radical_axis_has_common_power(k in interior_modulus(), s in -1.0..1.0f64) {
        let p = Pencil::from_k(k).unwrap();
        let c = p.circle_at(p.parameter(s * p.quarter_period())).unwrap();
        let axis = Point::new(p.radical_axis_x.unwrap(), 0.0);
        prop_assert!((power_of_point(axis, &c) - p.radical_power().unwrap()).abs() <= 1e-9);
        prop_assert!(c.center.x > p.limit_point - 1e-15 && c.center.x <= 0.0);
        prop_assert!((0.0..=1.0).contains(&c.radius));
    }

    #[test]
    fn member_identity(k in interior_modulus(), s in -1.0..1.0f64) {
        let p = Pencil::from_k(k).unwrap();
        let t = jacobi(s * p.quarter_period(), &p.m).unwrap();
        let l = p.limit_point;
        let lhs = (t.dn - 1.0).powi(2) - (2.0 * t.cn).powi(2)
            - ((l * l + 1.0) / l) * (t.dn * t.dn - 1.0)
            + (t.dn + 1.0).powi(2);
        prop_assert!(lhs.abs() <= 1e-10);
    }

    #[test]
    fn parameter_round_trip(k in 0.0..0.97f64, s in -0.999..1.0f64) {
        let p = Pencil::from_k(k).unwrap();
        let a = p.parameter(s * p.quarter_period());
        let back = p.parameter_of(&p.circle_at(a).unwrap()).unwrap();
        prop_assert!((back.value() - a.value()).abs() <= 1e-9);
    }

    #[test]
    fn group_axioms(k in interior_modulus(), x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let p = Pencil::from_k(k).unwrap();
        let q = p.quarter_period();
        let (a, b, c) = (p.parameter(x * q), p.parameter(y * q), p.parameter(z * q));
        let zero = p.parameter(0.0);
        prop_assert_eq!(p.group_op(a, b), p.group_op(b, a));
        prop_assert_eq!(p.group_op(a, zero), a);
        prop_assert!(p.group_op(a, p.inverse(a)).value().abs() <= 1e-15);
        let left = p.group_op(p.group_op(a, b), c).value();
        let right = p.group_op(a, p.group_op(b, c)).value();
        let gap = (left - right).abs();
        prop_assert!(gap <= 1e-12 || (gap - 2.0 * q).abs() <= 1e-12);
        let sum = p.group_op(a, b).value();
        prop_assert!(sum > -q && sum <= q);
    }

    #[test]
    fn map_is_well_defined(k in interior_modulus(), alpha in -1.5..1.5f64, t in theta()) {
        let p = Pencil::from_k(k).unwrap();
        for conjugated in [false, true] {
            let f = TangentMap { conjugated, ..TangentMap::new(&p, alpha).unwrap() };
            let a = apply(&p, &f, CirclePoint::new(t)).unwrap();
            let b = apply(&p, &f, CirclePoint::new(t + PI)).unwrap();
            prop_assert!(a.chord_length(b) <= 1e-12);
        }
    }

    #[test]
    fn composition_is_isomorphic_to_parameter_sum(
        k in interior_modulus(), alpha in 0.05..1.5f64, beta in 0.05..1.5f64, t in theta()
    ) {
        let p = Pencil::from_k(k).unwrap();
        let f = TangentMap::new(&p, alpha).unwrap();
        let g = TangentMap::new(&p, beta).unwrap();
        let fg = compose(&p, &f, &g).unwrap();
        let expected = p.group_op(f.parameter(&p), g.parameter(&p));
        prop_assert!((fg.parameter(&p).value() - expected.value()).abs() <= 1e-9);

        // The circle actually touched by the composite's chords.
        let z = CirclePoint::new(t);
        let w = apply(&p, &g, z).unwrap();
        let w = apply(&p, &f, w).unwrap();
        prop_assume!(z.chord_length(w) > 1e-6);
        let circle = p.circle_at(expected).unwrap();
        let d = chord_distance(z, w, circle.center.x).unwrap();
        prop_assert!((d - circle.radius).abs() <= 1e-9);
    }

    #[test]
    fn conjugates_are_involutions_and_normalize(
        k in interior_modulus(), alpha in -1.5..1.5f64, beta in -1.5..1.5f64, t in theta()
    ) {
        let p = Pencil::from_k(k).unwrap();
        let z = CirclePoint::new(t);
        let bar = TangentMap::conjugate(&p, beta).unwrap();
        let twice = apply(&p, &bar, apply(&p, &bar, z).unwrap()).unwrap();
        prop_assert!(twice.chord_length(z) <= 1e-10);
        let f = TangentMap::new(&p, alpha).unwrap();
        let lhs = apply(&p, &bar, apply(&p, &f, apply(&p, &bar, z).unwrap()).unwrap()).unwrap();
        let rhs = apply(&p, &TangentMap::new(&p, -alpha).unwrap(), z).unwrap();
        prop_assert!(lhs.chord_length(rhs) <= 1e-9);
    }

    #[test]
    fn tangent_pencil_group(alpha in -1.5..1.5f64, beta in -1.5..1.5f64, gamma in -1.5..1.5f64, t in theta()) {
        let z = CirclePoint::new(t);
        let ab = a1_compose(alpha, beta).unwrap();
        prop_assert!(ab.abs() < FRAC_PI_2);
        let seq = a1_apply(alpha, a1_apply(beta, z).unwrap()).unwrap();
        prop_assert!(a1_apply(ab, z).unwrap().chord_length(seq) <= 1e-10);
        prop_assert!((ab - a1_compose(beta, alpha).unwrap()).abs() <= 1e-12);
        let left = a1_compose(ab, gamma).unwrap();
        let right = a1_compose(alpha, a1_compose(beta, gamma).unwrap()).unwrap();
        prop_assert!((left - right).abs() <= 1e-10);
        prop_assert!(a1_apply(alpha, z).unwrap().theta().cos() >= 0.0);
    }

    #[test]
    fn chain_ends_at_composite_image(
        k in interior_modulus(),
        alphas in prop::collection::vec(-1.5..1.5f64, 0..6),
        t in theta(),
    ) {
        let p = Pencil::from_k(k).unwrap();
        let start = CirclePoint::new(t);
        let chain = trajectory(&p, start, &alphas).unwrap();
        let gamma = composite_gamma(&p, &alphas).unwrap();
        let end = apply(&p, &TangentMap::new(&p, gamma).unwrap(), start).unwrap();
        prop_assert!(chain.last().chord_length(end) <= 1e-9);
        for r in chain.tangency_residuals(&p).unwrap() {
            prop_assert!(r <= 1e-9);
        }
    }

    #[test]
    fn json_round_trips(k in interior_modulus(), alpha in -1.5..1.5f64, t in theta()) {
        let p = Pencil::from_k(k).unwrap();
        let back: Pencil = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let f = TangentMap::new(&p, alpha).unwrap();
        let back: TangentMap = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
        let chain = trajectory(&p, CirclePoint::new(t), &[alpha, 0.3]).unwrap();
        let back: Trajectory = serde_json::from_str(&serde_json::to_string(&chain).unwrap()).unwrap();
        prop_assert_eq!(back, chain);
        let report = ClosureReport {
            closes: false, n: 5, h: None, max_residual: t.abs(), gamma: Some(alpha), parameter_residual: k,
        };
        let back: ClosureReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        prop_assert_eq!(back, report);
    }
}

#[test]
fn porism_start_independence() {
    let p = Pencil::from_k(0.8).unwrap();
    let alphas = [0.4, -1.1, 0.9, 0.25];
    let gamma = composite_gamma(&p, &alphas).unwrap();
    let circle = p
        .circle_at(TangentMap::new(&p, gamma).unwrap().parameter(&p))
        .unwrap();
    let expected = TangentMap::new(&p, gamma).unwrap().parameter(&p);
    for i in 0..50 {
        let start = CirclePoint::new(-1.55 + 0.0621 * i as f64);
        let chain = trajectory(&p, start, &alphas).unwrap();
        let end = chain.last();
        let d_center = chord_distance(start, end, circle.center.x).unwrap();
        assert!((d_center - circle.radius).abs() <= 1e-9);
        // Recover the touched member from the closing chord alone.
        let touched = touching_parameter(&p, start, end).unwrap();
        assert!((touched.value() - expected.value()).abs() <= 1e-9);
    }
}
