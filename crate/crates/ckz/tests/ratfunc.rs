use ckz::ratfunc::{linear, mpoly_arith, parse_ratfunc, MPoly, PolyOp, RatFunc, RfSum, Var, VarContext};
use num_rational::BigRational;
use proptest::prelude::*;

fn p(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn poly(s: &str) -> MPoly {
    let r = p(s);
    assert!(r.is_poly());
    r.numer().clone()
}

#[test]
fn polynomial_examples() {
    assert_eq!(poly("(g1 + mu1) + (-g1)"), poly("mu1"));
    assert_eq!(poly("(t1_1 - t2_1)*(t1_1 + t2_1)"), poly("t1_1^2 - t2_1^2"));
    let cube = poly("(mu1 + mu2)^3");
    assert_eq!(cube.len(), 4);
    let coeffs: Vec<i64> = cube.terms().iter().map(|(_, c)| c.to_integer().try_into().unwrap()).collect();
    // binomial coefficients in grlex order mu1^3, mu1^2 mu2, mu1 mu2^2, mu2^3
    assert_eq!(coeffs, vec![1, 3, 3, 1]);
}

#[test]
fn context_mismatch() {
    let ctx = VarContext::ckz(3, 0);
    assert!(mpoly_arith(&ctx, PolyOp::Add, &poly("g1"), &poly("mu2")).is_ok());
    assert!(mpoly_arith(&ctx, PolyOp::Mul, &poly("g1"), &poly("z1")).is_err());
}

#[test]
fn rational_examples() {
    assert_eq!(&p("1/mu1") + &p("1/mu2"), p("(mu1 + mu2)/(mu1*mu2)"));
    let g = &RatFunc::var(Var::Gamma(1)) + &RatFunc::var(Var::Gamma(2));
    let m = &RatFunc::var(Var::Mu(1)) + &RatFunc::var(Var::Mu(2));
    assert_eq!(g.checked_div(&m.pow(2)).unwrap(), p("(g1+g2)/(mu1+mu2)^2"));
    assert!(p("1").checked_div(&p("0")).is_err());
}

#[test]
fn zero_tests() {
    assert!((&(&p("mu1+mu2") - &p("mu1")) - &p("mu2")).is_zero());
    assert!((&p("1/(x1-x2)") + &p("1/(x2-x1)")).is_zero());
    let three = &(&p("1/((x1-x2)*(x2-x3))") + &p("1/((x2-x3)*(x3-x1))")) + &p("1/((x3-x1)*(x1-x2))");
    assert!(three.is_zero());
}

#[test]
fn derivative_examples() {
    let f = p("g1*x1 + mu1*x1^2/2");
    assert_eq!(f.partial_derivative(Var::Gamma(1)), p("x1"));
    assert_eq!(p("1/(x1-x2)").partial_derivative(Var::X(1)), p("-1/(x1-x2)^2"));
}

#[test]
fn evaluate_examples() {
    let f = p("(g1+g2)/(mu1+mu2)^2");
    let at = |v: Var| -> Option<BigRational> {
        Some(BigRational::from_integer(
            match v {
                Var::Gamma(1) => 1,
                Var::Gamma(2) => 2,
                Var::Mu(_) => 1,
                _ => return None,
            }
            .into(),
        ))
    };
    assert_eq!(f.evaluate(&at).unwrap(), BigRational::new(3.into(), 4.into()));
    assert_eq!(p("5").evaluate(&|_| None).unwrap(), BigRational::from_integer(5.into()));
    let pole = p("1/(x1-x2)").evaluate(&|_| Some(BigRational::from_integer(3.into())));
    assert!(matches!(pole, Err(ckz::Error::Pole(_))));
}

#[test]
fn derivative_finite_difference() {
    // (F(x+h) - F(x-h))/2h → F'(x) exactly for quadratic numerators is not
    // available, so compare F' against a symmetric difference quotient's limit
    // via exact evaluation at shrinking h on a rational function of degree 1/1.
    let f = p("(x1^2 + 3*x2)/(x1 - 2*x2)");
    let df = f.partial_derivative(Var::X(1));
    let x2 = BigRational::from_integer(1.into());
    let x1 = BigRational::new(7.into(), 3.into());
    let point = |x: BigRational| {
        let x2 = x2.clone();
        move |v: Var| match v {
            Var::X(1) => Some(x.clone()),
            Var::X(2) => Some(x2.clone()),
            _ => None,
        }
    };
    let exact = df.evaluate(&point(x1.clone())).unwrap();
    let mut prev_err: Option<BigRational> = None;
    for k in 1..6 {
        let h = BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(k));
        let fp = f.evaluate(&point(&x1 + &h)).unwrap();
        let fm = f.evaluate(&point(&x1 - &h)).unwrap();
        let quot = (fp - fm) / (&h + &h);
        let err = num_traits::Signed::abs(&(quot - &exact));
        if let Some(pe) = &prev_err {
            assert!(&err < pe);
        }
        prev_err = Some(err);
    }
}

#[test]
fn accumulator_matches_naive_sum() {
    let items = ["1/mu1", "g1/(mu1+mu2)", "-1/mu1", "x1/(mu1*(mu1+mu2))", "3"];
    let mut acc = RfSum::new();
    let mut naive = RatFunc::zero();
    for s in items {
        acc.add(&p(s));
        naive = &naive + &p(s);
    }
    assert_eq!(acc.finish(), naive);
}

#[test]
fn rename_flips_sign() {
    let f = p("1/(t1_1 - t1_2)");
    let g = f.rename(&|v| match v {
        Var::T(1, 1) => Var::T(1, 2),
        Var::T(1, 2) => Var::T(1, 1),
        v => v,
    });
    assert_eq!(g, -&f);
}

#[test]
fn reduce_cancels() {
    let f = p("(x1^2 - x2^2)/(x1 - x2)");
    let r = f.reduce();
    assert!(r.is_poly());
    assert_eq!(r, p("x1 + x2"));
    assert_eq!(linear(&[(1, Var::X(1)), (1, Var::X(2))]), r.numer().clone());
}

// Random small rational functions in x1..x3.
fn arb_poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2, 0u32..=1), 1..4).prop_map(|ts| {
        ts.into_iter().fold(MPoly::zero(), |acc, (c, a, b, d)| {
            let m = &(&MPoly::var(Var::X(1)).pow(a) * &MPoly::var(Var::X(2)).pow(b)) * &MPoly::var(Var::X(3)).pow(d);
            &acc + &m.scale(&BigRational::from_integer(c.into()))
        })
    })
}

fn arb_nonzero_poly() -> impl Strategy<Value = MPoly> {
    arb_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn arb_rf() -> impl Strategy<Value = RatFunc> {
    (arb_poly(), arb_nonzero_poly()).prop_map(|(n, d)| RatFunc::from_polys(n, &d).unwrap())
}

fn arb_nonzero_rf() -> impl Strategy<Value = RatFunc> {
    (arb_nonzero_poly(), arb_nonzero_poly()).prop_map(|(n, d)| RatFunc::from_polys(n, &d).unwrap())
}

fn at(seed: i64) -> impl Fn(Var) -> Option<BigRational> {
    move |v| match v {
        Var::X(i) => Some(BigRational::new((seed * 7 + 3 * i as i64 + 1).into(), (i as i64 + 5).into())),
        _ => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn self_difference_is_zero(a in arb_rf()) {
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_with_inverse(a in arb_nonzero_rf(), b in arb_nonzero_rf()) {
        let q = &a.checked_div(&b).unwrap() * &b.checked_div(&a).unwrap();
        prop_assert_eq!(q, RatFunc::one());
    }

    #[test]
    fn zero_test_agrees_with_evaluation(a in arb_rf(), b in arb_rf()) {
        let d = &(&a + &b) - &b;
        let diff = &d - &a;
        prop_assert!(diff.is_zero());
        // nonzero candidates evaluate nonzero somewhere among 5 points
        let s = &a + &b;
        if !s.is_zero() {
            let hits = (0..5).filter_map(|k| s.evaluate(&at(k)).ok()).any(|v| !num_traits::Zero::is_zero(&v));
            prop_assert!(hits);
        }
    }

    #[test]
    fn leibniz(a in arb_rf(), b in arb_rf()) {
        let v = Var::X(1);
        let lhs = (&a * &b).partial_derivative(v);
        let rhs = &(&a.partial_derivative(v) * &b) + &(&a * &b.partial_derivative(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_roundtrip(a in arb_rf()) {
        let back = parse_ratfunc(&a.to_string()).unwrap();
        prop_assert!((&back - &a).is_zero());
    }
}
