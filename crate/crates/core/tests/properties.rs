use leafgauge::charts::{build_chart, ChartConfig};
use leafgauge::fields::{
    annihilation_check, bracket_from_parts, field_eval, involutivity_check, sample_ring,
    select_field, Thresholds, VectorFieldC2,
};
use leafgauge::flows::{leaf_flow_map, FlowConfig};
use leafgauge::gauge::{GaugeConfig, GaugeFunction};
use leafgauge::wirtinger::{
    complex_hessian, levi_determinant, ComplexQ, Monomial, Var, WirtingerPoly,
};
use leafgauge::{Complex64, PointC2};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = ComplexQ> {
    (-5i64..=5, -5i64..=5).prop_map(|(re, im)| ComplexQ::from_int(re, im))
}

fn poly(max_exp: u32, max_terms: usize) -> impl Strategy<Value = WirtingerPoly> {
    prop::collection::vec((prop::array::uniform4(0..=max_exp), coeff()), 0..=max_terms).prop_map(
        |terms| WirtingerPoly::from_terms(terms.into_iter().map(|(e, c)| (Monomial(e), c))),
    )
}

/// Terms of total degree exactly `d`.
fn homogeneous(d: u32, max_terms: usize) -> impl Strategy<Value = WirtingerPoly> {
    prop::collection::vec((prop::array::uniform3(0..=d), coeff()), 1..=max_terms).prop_map(
        move |terms| {
            WirtingerPoly::from_terms(terms.into_iter().filter_map(|([a, b, c], k)| {
                let used = a + b + c;
                (used <= d).then(|| (Monomial([a, b, c, d - used]), k))
            }))
        },
    )
}

fn real_poly(p: WirtingerPoly) -> WirtingerPoly {
    &p + &p.conj_partner()
}

fn point(bound: f64) -> impl Strategy<Value = PointC2> {
    prop::array::uniform4(-bound..bound).prop_map(PointC2::from_real)
}

fn c_approx(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn mono(e: [u32; 4], k: i64) -> WirtingerPoly {
    WirtingerPoly::monomial(e, k)
}

/// Levi-flat fixtures: real functions of a single holomorphic function.
fn levi_flat_fixtures() -> Vec<(WirtingerPoly, PointC2)> {
    let zw = mono([1, 1, 1, 1], 1);
    let z4 = mono([2, 2, 0, 0], 1);
    // (zw + z̄w̄)^2
    let re_zw = &mono([1, 0, 1, 0], 1) + &mono([0, 1, 0, 1], 1);
    let re_zw_sq = &re_zw * &re_zw;
    // |z + w|^4
    let s = &(&mono([1, 0, 0, 0], 1) + &mono([0, 0, 1, 0], 1))
        * &(&mono([0, 1, 0, 0], 1) + &mono([0, 0, 0, 1], 1));
    let s2 = &s * &s;
    // |z^2 + w^2|^2
    let h = &mono([2, 0, 0, 0], 1) + &mono([0, 0, 2, 0], 1);
    let q = &h * &h.conj_partner();
    let x = PointC2::new(Complex64::new(1.0, 0.2), Complex64::new(0.6, -0.3));
    vec![
        (zw, PointC2::real(1.0, 1.0)),
        (z4, PointC2::real(1.0, 0.0)),
        (re_zw_sq, x),
        (s2, x),
        (q, x),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_evaluates_to_product_of_values(p in poly(2, 4), q in poly(2, 4), pt in point(1.5)) {
        let lhs = (&p * &q).eval(pt);
        let rhs = p.eval(pt) * q.eval(pt);
        prop_assert!(c_approx(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn diff_is_linear(p in poly(3, 4), q in poly(3, 4), a in coeff(), b in coeff()) {
        for var in Var::ALL {
            let combined = (&p.scale(&a) + &q.scale(&b)).diff(var);
            let separate = &p.diff(var).scale(&a) + &q.diff(var).scale(&b);
            prop_assert_eq!(combined, separate);
        }
    }

    #[test]
    fn hessian_of_real_poly_is_hermitian(p in poly(3, 5)) {
        let p = real_poly(p);
        prop_assume!(p.is_real());
        let h = complex_hessian(&p).unwrap();
        prop_assert_eq!(h.get(0, 1), &h.get(1, 0).conj_partner());
    }

    #[test]
    fn euler_identity(p in (1u32..=5).prop_flat_map(|d| homogeneous(d, 5))) {
        let Ok(leafgauge::wirtinger::Degree::Homogeneous(deg)) = p.homogeneity_degree() else {
            return Ok(());
        };
        let mut lhs = WirtingerPoly::zero();
        for var in Var::ALL {
            lhs = &lhs + &(&WirtingerPoly::var(var) * &p.diff(var));
        }
        prop_assert_eq!(lhs, p.scale_int(deg as i64));
    }

    #[test]
    fn field_scales_with_degree(
        (m, a, b) in (1u32..=3).prop_flat_map(|m| (Just(m), homogeneous(m, 4), homogeneous(m, 4))),
        pts in prop::collection::vec(point(2.0), 100),
    ) {
        let v = VectorFieldC2::new(a, b, m);
        for q in pts {
            let base = field_eval(&v, q);
            for t in [0.5, 2.0, -1.0] {
                let scaled = field_eval(&v, t * q);
                let expect = libm::pow(t, m as f64) * base;
                let err = (scaled - expect).norm();
                prop_assert!(err <= 1e-12 * expect.norm().max(f64::MIN_POSITIVE), "t = {t}: {err}");
            }
        }
    }

    #[test]
    fn bracket_is_antisymmetric(p in poly(2, 4), q in poly(2, 4), pt in point(1.5)) {
        let v = VectorFieldC2::new(p, q, 0);
        let x1 = v.x1(pt);
        let x2 = v.x2(pt);
        let (j1, j2) = (v.jacobian_x1(pt), v.jacobian_x2(pt));
        let ab = bracket_from_parts(&x1, &j1, &x2, &j2);
        let ba = bracket_from_parts(&x2, &j2, &x1, &j1);
        for i in 0..4 {
            prop_assert!(ab[i] == -ba[i], "{} vs {}", ab[i], ba[i]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn real_poly_has_real_values(p in poly(3, 5), pts in prop::collection::vec(point(1.2), 1000)) {
        let p = real_poly(p);
        for pt in pts {
            let v = p.eval(pt);
            prop_assert!(v.im.abs() <= 1e-12 * (1.0 + v.re.abs()), "{v}");
        }
    }
}

#[test]
fn levi_flat_fixtures_give_involutive_annihilating_fields() {
    let thr = Thresholds::default();
    for (p, x) in levi_flat_fixtures() {
        assert!(p.is_real(), "{p}");
        assert!(levi_determinant(&p).unwrap().is_zero(), "{p}");
        let v = select_field(&p, x, &thr).unwrap();
        assert!(annihilation_check(&p, &v).unwrap(), "{p}");
        let inv = involutivity_check(&v, &sample_ring(x, 0.05, 20), 1e-10, &thr).unwrap();
        assert!(inv.pass, "{p}: {inv:?}");
    }
}

fn oracle_b() -> GaugeFunction {
    let v = VectorFieldC2::new(-&mono([1, 0, 0, 0], 1), mono([0, 0, 1, 0], 1), 1);
    let chart = build_chart(&v, PointC2::real(1.0, 1.0), &ChartConfig::default()).unwrap();
    GaugeFunction::new(
        chart,
        &GaugeConfig {
            degree: 4,
            ..GaugeConfig::default()
        },
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chart_is_constant_on_leaves(
        d in prop::array::uniform4(-0.05f64..0.05),
        s1 in -0.02f64..0.02,
        s2 in -0.02f64..0.02,
    ) {
        let g = oracle_b();
        let chart = g.chart();
        let q = chart.base() + PointC2::from_real(d);
        let q2 = leaf_flow_map(chart.field(), q, s1, s2, &FlowConfig::default()).unwrap();
        let (a, b) = (chart.u_eval(q).unwrap(), chart.u_eval(q2).unwrap());
        prop_assert!(libm::hypot(a[0] - b[0], a[1] - b[1]) <= 1e-7);
    }

    #[test]
    fn gauge_is_homogeneous_and_leaf_constant(
        d in prop::array::uniform4(-0.05f64..0.05),
        t in 0.92f64..1.08,
        s1 in -0.02f64..0.02,
        s2 in -0.02f64..0.02,
    ) {
        let g = oracle_b();
        let q = g.chart().base() + PointC2::from_real(d);
        let gq = g.gauge_eval(q).unwrap();
        prop_assert!(gq > 0.0);
        let gt = g.gauge_eval(t * q).unwrap();
        prop_assert!((gt - libm::pow(t, 4.0) * gq).abs() <= 1e-6 * gq);
        let q2 = leaf_flow_map(g.chart().field(), q, s1, s2, &FlowConfig::default()).unwrap();
        prop_assert!((g.gauge_eval(q2).unwrap() - gq).abs() <= 1e-6 * gq);
        let tt = g.solve_t(t * q).unwrap() * t;
        prop_assert!((tt - g.solve_t(q).unwrap()).abs() <= 1e-8);
    }
}
