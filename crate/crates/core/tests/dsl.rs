use cmc_core::{eval_jet, parse, Constants, Error};
use proptest::prelude::*;

/// Expressions that are smooth and finite for every real `u`: arguments of
/// `sqrt`, `ln` and denominators are kept away from zero by construction.
fn smooth_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("u".to_string()),
        Just("pi".to_string()),
        Just("k".to_string()),
        (0.1f64..3.0).prop_map(|x| format!("{x:.3}")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})+({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})/(2+sin({b}))")),
            inner.clone().prop_map(|a| format!("-({a})")),
            inner.clone().prop_map(|a| format!("sqrt(1.5+({a})^2)")),
            inner.clone().prop_map(|a| format!("ln(1.5+({a})^2)")),
            inner.clone().prop_map(|a| format!("exp(sin({a}))")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.clone().prop_map(|a| format!("sinh(cos({a}))")),
            inner.clone().prop_map(|a| format!("cosh(sin({a}))")),
            inner.clone().prop_map(|a| format!("abs(2+sin({a}))")),
            inner.clone().prop_map(|a| format!("sin({a})^3")),
            inner.clone().prop_map(|a| format!("(1.5+({a})^2)^-1.5")),
        ]
    })
}

fn constants() -> Constants {
    let mut c = Constants::new();
    c.insert("k".into(), 0.7);
    c
}

/// First and second derivatives by Richardson-extrapolated central differences.
fn central(f: impl Fn(f64) -> f64, u: f64) -> (f64, f64) {
    let d = |h: f64| {
        (
            (f(u + h) - f(u - h)) / (2.0 * h),
            (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h),
        )
    };
    let (a1, a2) = d(1e-3);
    let (b1, b2) = d(5e-4);
    ((4.0 * b1 - a1) / 3.0, (4.0 * b2 - a2) / 3.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn jets_match_central_differences(text in smooth_expr(), u in -2.0f64..2.0) {
        let e = parse(&text, &["k"]).unwrap();
        let k = constants();
        let j = eval_jet(&e, u, &k).unwrap();
        let (d1, d2) = central(|x| eval_jet(&e, x, &k).unwrap().val, u);
        prop_assert!((j.d1 - d1).abs() <= 1e-6 * (1.0 + j.d1.abs()), "{text} at {u}: {} vs {d1}", j.d1);
        prop_assert!((j.d2 - d2).abs() <= 1e-6 * (1.0 + j.d2.abs()), "{text} at {u}: {} vs {d2}", j.d2);
    }

    #[test]
    fn printing_then_parsing_is_idempotent(text in smooth_expr()) {
        let e = parse(&text, &["k"]).unwrap();
        let printed = e.to_string();
        let again = parse(&printed, &["k"]).unwrap();
        prop_assert_eq!(&again, &e);
        prop_assert_eq!(again.to_string(), printed);
    }
}

#[test]
fn precedence() {
    let k = Constants::new();
    let at = |t: &str| eval_jet(&parse(t, &[]).unwrap(), 2.0, &k).unwrap().val;
    assert_eq!(at("-u^2"), -4.0);
    assert_eq!(at("2^-1"), 0.5);
    assert_eq!(at("1-u-1"), -2.0);
    assert_eq!(at("8/u/2"), 2.0);
    assert_eq!(at("2*u^2+1"), 9.0);
    assert_eq!(at("2^3^2"), 512.0);
}

#[test]
fn errors_carry_positions() {
    assert!(matches!(
        parse("2**u", &[]),
        Err(Error::Syntax { offset: 2, .. })
    ));
    assert!(matches!(
        parse("u + q", &[]),
        Err(Error::UnknownIdentifier { offset: 4, .. })
    ));
    assert!(matches!(
        parse("tan(u)", &[]),
        Err(Error::UnknownIdentifier { offset: 0, .. })
    ));
    assert!(matches!(parse("2^u", &[]), Err(Error::Syntax { .. })));
    assert!(matches!(parse("(u", &[]), Err(Error::Syntax { .. })));
}

#[test]
fn domain_errors() {
    let k = Constants::new();
    let ev = |t: &str, u: f64| eval_jet(&parse(t, &[]).unwrap(), u, &k);
    assert!(matches!(ev("sqrt(u)", -1.0), Err(Error::Domain { .. })));
    assert!(matches!(ev("ln(u)", 0.0), Err(Error::Domain { .. })));
    assert!(matches!(ev("1/u", 0.0), Err(Error::Domain { .. })));
    assert!(matches!(ev("exp(u)", 800.0), Err(Error::Domain { .. })));
}

#[test]
fn sqrt_quadratic_example() {
    let j = eval_jet(
        &parse("sqrt(-u^2+2*u)", &[]).unwrap(),
        1.0,
        &Constants::new(),
    )
    .unwrap();
    assert_eq!((j.val, j.d1, j.d2), (1.0, 0.0, -1.0));
}
