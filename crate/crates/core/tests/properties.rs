use proptest::prelude::*;
use randers_core::exec::Execution;
use randers_core::expr::parse;
use randers_core::finsler;
use randers_core::jets::{Jet, JetSpace};
use randers_core::randers::pric_randers;
use randers_core::riemann::BaseGeometry;
use randers_core::sampling::draw_samples;
use randers_core::verify::{self, CField, Options};
use randers_core::zoo;
use randers_core::MetricSpec;

/// Source text of smooth expressions in x1, x2.
fn arb_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x1".to_string()),
        Just("x2".to_string()),
        (-2.0f64..2.0).prop_map(|c| format!("({c:?})")),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("exp(cos({a}))")),
            inner.prop_map(|a| format!("sqrt(2 + sin({a}))")),
        ]
    })
}

fn jet_of(src: &str, x: [f64; 2]) -> Jet {
    let space = JetSpace::new(&[(2, 3)]).unwrap();
    let pt = [space.variable(0, x[0]).unwrap(), space.variable(1, x[1]).unwrap()];
    parse(src).unwrap().eval_jet(&pt).unwrap()
}

fn close(a: &Jet, b: &Jet) -> bool {
    a.coefficients().iter().zip(b.coefficients()).all(|(p, q)| (p - q).abs() <= 1e-11 * (1.0 + p.abs().max(q.abs())))
}

fn random_spec(seed: u64, n: usize) -> MetricSpec {
    zoo::random_randers(seed, n, 2, 0.05).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_chain_and_linearity(f in arb_source(), g in arb_source(), x1 in -1.0f64..1.0, x2 in -1.0f64..1.0) {
        let x = [x1, x2];
        let (jf, jg) = (jet_of(&f, x), jet_of(&g, x));
        let product = format!("({f}) * ({g})");
        let sine = format!("sin({f})");
        let nested = format!("exp(cos({f}))");
        let combo = format!("2.5*({f}) - ({g})");
        prop_assert!(close(&jet_of(&product, x), &(&jf * &jg)));
        prop_assert!(close(&jet_of(&sine, x), &jf.sin()));
        prop_assert!(close(&jet_of(&nested, x), &jf.cos().exp()));
        prop_assert!(close(&jet_of(&combo, x), &(jf.scale(2.5) - jg)));
    }

    #[test]
    fn third_order_extract_matches_differences(f in arb_source(), x1 in -1.0f64..1.0, x2 in -1.0f64..1.0) {
        let e = parse(&f).unwrap();
        let v = |a: f64, b: f64| e.eval(&[a, b]).unwrap();
        let j = jet_of(&f, [x1, x2]);
        let h = 1e-3;
        let fd = (v(x1 + 2.0 * h, x2) - 2.0 * v(x1 + h, x2) + 2.0 * v(x1 - h, x2) - v(x1 - 2.0 * h, x2)) / (2.0 * h * h * h);
        let d3 = j.extract(&[3, 0]).unwrap();
        let scale = 1.0 + d3.abs() + v(x1, x2).abs();
        prop_assert!((d3 - fd).abs() <= 1e-3 * scale, "jet {} fd {}", d3, fd);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn finsler_invariants_on_random_metrics(seed in 1u64..40, n in 2usize..4) {
        let spec = random_spec(seed, n);
        for s in draw_samples(&spec, 5, seed).unwrap().samples {
            let e = finsler::evaluate(&spec, &s.x, &s.y).unwrap();
            let f2 = e.f * e.f;
            let gyy: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| e.g[[i, j]] * s.y[i] * s.y[j]).sum();
            prop_assert!((gyy - f2).abs() <= 1e-10 * f2);
            prop_assert!((e.s - e.s_transport).abs() <= 1e-8 * (e.s.abs() + e.f));
            for lambda in [0.5, 2.0, 3.0] {
                let ly: Vec<f64> = s.y.iter().map(|v| lambda * v).collect();
                let l = finsler::evaluate(&spec, &s.x, &ly).unwrap();
                let rel = |got: f64, q: f64, k: i32| (got - lambda.powi(k) * q).abs() / ((lambda.powi(k) * q).abs() + (lambda * e.f).powi(k));
                prop_assert!(rel(l.f, e.f, 1) < 1e-9);
                prop_assert!(rel(l.s, e.s, 1) < 1e-9);
                prop_assert!(rel(l.ric, e.ric, 2) < 1e-9);
                prop_assert!(rel(l.pric, e.pric, 2) < 1e-9);
            }
            let closed = pric_randers(&spec, &s.x, &s.y).unwrap();
            prop_assert!((closed - e.pric).abs() / (e.pric.abs() + f2) < 1e-7);
        }
    }

    #[test]
    fn riemannian_input_ric_matches_alpha_ricci(seed in 1u64..40) {
        let random = random_spec(seed, 2);
        let a = random.to_file().a;
        let spec = MetricSpec::from_sources("riemannian", &a, &["0".into(), "0".into()], random.domain()).unwrap();
        for s in draw_samples(&spec, 5, seed).unwrap().samples {
            let ric = finsler::ricci(&spec, &s.x, &s.y).unwrap();
            let geo = BaseGeometry::at(&spec, &s.x).unwrap();
            let alpha_ric = geo.riemann.alpha_ricci(&s.y);
            prop_assert!((ric - alpha_ric).abs() <= 1e-9 * (alpha_ric.abs() + 1.0));
        }
    }

    #[test]
    fn random_specs_admissible_across_their_box(seed in any::<u64>(), n in 2usize..4) {
        let spec = random_spec(seed, n);
        let mut rng = randers_core::sampling::rng(seed, 77);
        for _ in 0..200 {
            let x: Vec<f64> = spec.domain().iter().map(|&(lo, hi)| randers_core::sampling::uniform_in(&mut rng, lo, hi)).collect();
            prop_assert!(BaseGeometry::at(&spec, &x).is_ok(), "inadmissible at {:?}", x);
        }
    }
}

#[test]
fn funk_fit_recovers_zero_c() {
    for n in [2, 3] {
        let spec = zoo::funk(n);
        let set = draw_samples(&spec, 40, 4).unwrap();
        let report = verify::verify_isotropic(&spec, &set, &CField::Fit, &Options::default()).unwrap();
        assert!(report.passed);
        assert!(report.max_value("c").abs() < 1e-9 && report.min_value("c").abs() < 1e-9);
    }
}

#[test]
fn reversibility_signals_agree_on_catalogue() {
    for entry in zoo::catalogue() {
        let set = draw_samples(&entry.spec, 30, 2).unwrap();
        let report = verify::verify_reversible(&entry.spec, &set, &Options::default()).unwrap();
        let conditions = report.condition_passed("s-divergence") && report.condition_passed("s0-or-e00");
        assert_eq!(conditions, report.condition_passed("direct"), "{}", entry.name);
    }
}

#[test]
fn catalogue_verdicts_hold_in_both_execution_modes() {
    for exec in [Execution::Sequential, Execution::Parallel] {
        let opts = Options { exec, ..Options::default() };
        for entry in zoo::catalogue() {
            let outcomes = zoo::run_entry(&entry, 15, 3, &opts).unwrap();
            for o in outcomes {
                assert!(o.reproduced, "{} {}: expected {}, observed {}", o.entry, o.target, o.expected, o.observed);
            }
        }
    }
}
