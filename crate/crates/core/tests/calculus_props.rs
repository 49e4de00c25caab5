mod common;

use common::*;
use fini_core::calculus::{
    derivative, derivative_with_increment, integral, numeric_shadow, parse_expr, power_sum, riemann_sum_float,
};
use fini_core::shadow::Verdict;
use fini_core::{Error, Expr, Rational, Seq};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn expr(text: &str) -> Expr {
    parse_expr(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn poly(c: &[Rational]) -> Expr {
    expr(&poly_text(c))
}

fn poly_strategy(max_degree: usize) -> impl Strategy<Value = Vec<Rational>> {
    coeffs_strategy(max_degree, 9)
}

/// `lo <= hi`, both in `[-bound, bound]`.
fn interval_strategy(bound: i64) -> impl Strategy<Value = (Rational, Rational)> {
    (rational_strategy(bound), rational_strategy(bound)).prop_map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
}

fn scaled(c: &[Rational], k: &Rational) -> Vec<Rational> {
    c.iter().map(|v| v * k).collect()
}

fn added(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn derivative_matches_power_rule(c in poly_strategy(6), x0 in rational_strategy(5)) {
        let want = poly_eval(&poly_derivative(&c), &x0);
        prop_assert_eq!(derivative(&poly(&c), &x0).unwrap(), want);
    }

    #[test]
    fn derivative_matches_quotient_rule(p in poly_strategy(3), d in poly_strategy(3), x0 in rational_strategy(5)) {
        let den = poly_eval(&d, &x0);
        prop_assume!(den != int(0));
        let f = expr(&format!("({}) / ({})", poly_text(&p), poly_text(&d)));
        let num = poly_eval(&poly_derivative(&p), &x0) * &den - poly_eval(&p, &x0) * poly_eval(&poly_derivative(&d), &x0);
        prop_assert_eq!(derivative(&f, &x0).unwrap(), num / (&den * &den));
    }

    #[test]
    fn derivative_is_linear(
        f in poly_strategy(5),
        g in poly_strategy(5),
        alpha in rational_strategy(5),
        beta in rational_strategy(5),
        x0 in rational_strategy(5),
    ) {
        let combo = poly(&added(&scaled(&f, &alpha), &scaled(&g, &beta)));
        let want = &alpha * derivative(&poly(&f), &x0).unwrap() + &beta * derivative(&poly(&g), &x0).unwrap();
        prop_assert_eq!(derivative(&combo, &x0).unwrap(), want);
    }

    #[test]
    fn product_rule(f in poly_strategy(4), g in poly_strategy(4), x0 in rational_strategy(5)) {
        let product = poly(&poly_mul(&f, &g));
        let df = derivative(&poly(&f), &x0).unwrap();
        let dg = derivative(&poly(&g), &x0).unwrap();
        let want = poly_eval(&f, &x0) * dg + df * poly_eval(&g, &x0);
        prop_assert_eq!(derivative(&product, &x0).unwrap(), want);
    }

    #[test]
    fn any_infinitesimal_increment_gives_the_same_derivative(c in poly_strategy(5), x0 in rational_strategy(5)) {
        let f = poly(&c);
        let inverse_square = Seq::ratfun(vec![int(1)], vec![int(0), int(0), int(1)]).unwrap();
        let d = derivative_with_increment(&f, &x0, &inverse_square).unwrap();
        prop_assert_eq!(d.value, derivative(&f, &x0).unwrap());
    }

    #[test]
    fn integral_matches_antiderivative(c in poly_strategy(6), (a, b) in interval_strategy(5)) {
        let big_f = poly_antiderivative(&c);
        let want = poly_eval(&big_f, &b) - poly_eval(&big_f, &a);
        prop_assert_eq!(integral(&poly(&c), &a, &b).unwrap(), want);
    }

    #[test]
    fn integral_is_linear(
        f in poly_strategy(5),
        g in poly_strategy(5),
        alpha in rational_strategy(5),
        beta in rational_strategy(5),
        (a, b) in interval_strategy(3),
    ) {
        let combo = poly(&added(&scaled(&f, &alpha), &scaled(&g, &beta)));
        let want = &alpha * integral(&poly(&f), &a, &b).unwrap() + &beta * integral(&poly(&g), &a, &b).unwrap();
        prop_assert_eq!(integral(&combo, &a, &b).unwrap(), want);
    }

    #[test]
    fn fundamental_theorem(c in poly_strategy(4), a in rational_strategy(3), x0 in rational_strategy(3)) {
        // G(x) = integral(f, a, x) is a polynomial of degree <= deg f + 1; recover it by interpolation
        let f = poly(&c);
        let xs: Vec<Rational> = (0..=c.len()).map(|k| &a + int(k as i64)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| integral(&f, &a, x).unwrap()).collect();
        let g = interpolate(&xs, &ys);
        let mut trimmed = c.clone();
        while trimmed.last().is_some_and(|v| *v == int(0)) {
            trimmed.pop();
        }
        prop_assert_eq!(poly_derivative(&g), trimmed);
        prop_assert_eq!(derivative(&poly(&g), &x0).unwrap(), poly_eval(&c, &x0));
    }

    #[test]
    fn numeric_enclosure_holds_the_exact_integral(c in poly_strategy(4), (a, b) in interval_strategy(2)) {
        let f = poly(&c);
        let tol = q(1, 100);
        let exact = integral(&f, &a, &b).unwrap();
        let r = numeric_shadow(&f, &a, &b, &tol).unwrap();
        let Verdict::Enclosure { lo, hi } = &r.verdict else { panic!("{r}") };
        prop_assert!(hi - lo <= tol);
        prop_assert!(r.contains(&exact), "{} misses {}", r, exact);
    }
}

#[test]
fn faulhaber_against_brute_force() {
    for k in 0..=8u32 {
        let p = power_sum::<Rational>(k as usize).unwrap();
        assert_eq!(p.degree(), Some(k as usize + 1));
        for n in 0..=100u64 {
            assert_eq!(p.eval(&int(n as i64)), brute_power_sum(k, n), "k = {k}, n = {n}");
        }
    }
}

#[test]
fn worked_examples() {
    assert_eq!(derivative(&expr("x^3"), &int(2)).unwrap(), int(12));
    assert_eq!(derivative(&expr("1/x"), &int(2)).unwrap(), q(-1, 4));
    assert_eq!(derivative(&expr("1/x"), &int(0)), Err(Error::PoleAtPoint("0".into())));
    assert_eq!(integral(&expr("x^2"), &int(0), &int(1)).unwrap(), q(1, 3));
    assert_eq!(integral(&expr("3*x^2 + 2*x"), &int(-1), &int(2)).unwrap(), int(12));
    assert_eq!(integral(&expr("1/(1+x)"), &int(0), &int(1)), Err(Error::NonPolynomialIntegrand));
    assert_eq!(numeric_shadow(&expr("1/x"), &int(0), &int(1), &q(1, 10)), Err(Error::PoleInInterval));
}

#[test]
fn numeric_fallback_for_a_rational_integrand() {
    let f = expr("1/(1+x)");
    let r = numeric_shadow(&f, &int(0), &int(1), &q(1, 1000)).unwrap();
    let Verdict::Enclosure { lo, hi } = &r.verdict else { panic!("{r}") };
    let ln2 = std::f64::consts::LN_2;
    assert!(lo.to_f64().unwrap() <= ln2 && ln2 <= hi.to_f64().unwrap(), "{r}");
    let fine: f64 = riemann_sum_float(&f, &int(0), &int(1), 1 << 20);
    assert!((fine - ln2).abs() < 1e-6);
}
