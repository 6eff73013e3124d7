use ckz::ncalg::{Algebra, Gen, NCPoly};
use ckz::ratfunc::{parse_ratfunc, RatFunc};
use ckz::rootsys::Root;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn el(alg: &Algebra, s: &str) -> NCPoly {
    alg.normal_order(&alg.parse_word(s).unwrap())
}

#[test]
fn infinity_commutators() {
    let alg = Algebra::new(3, 0).unwrap();
    let a1 = Root::simple(1);
    let a2 = Root::simple(2);
    let c = alg.gen_commutator(Gen::InfRaise(a1), Gen::InfLower(a1));
    assert_eq!(c, NCPoly::scalar(rf("mu1")));
    assert!(alg.gen_commutator(Gen::InfRaise(a1), Gen::InfRaise(a2)).is_zero());
    let a12 = Root::new(1, 2);
    assert_eq!(alg.gen_commutator(Gen::InfRaise(a12), Gen::InfLower(a12)), NCPoly::scalar(rf("mu1 + mu2")));
}

#[test]
fn cross_site_generators_commute() {
    let alg = Algebra::new(2, 2).unwrap();
    let a = Root::simple(1);
    assert!(alg.gen_commutator(Gen::SiteRaise(1, a), Gen::SiteLower(2, a)).is_zero());
    assert!(alg.gen_commutator(Gen::SiteRaise(1, a), Gen::InfLower(a)).is_zero());
}

#[test]
fn normal_order_examples() {
    let alg = Algebra::new(3, 1).unwrap();
    let got = el(&alg, "e[inf,a1,1] e[inf,-a1,1]");
    let mut expect = NCPoly::scalar(rf("mu1"));
    expect = &expect + &el(&alg, "e[inf,-a1,1] e[inf,a1,1]");
    assert_eq!(got, expect);
    // the right side of the above is already normal: a single term
    assert_eq!(el(&alg, "e[inf,-a1,1] e[inf,a1,1]").len(), 1);

    let got = el(&alg, "e[1,a1] e[1,-a1]");
    let expect = &el(&alg, "e[1,-a1] e[1,a1]") + &el(&alg, "h[1,1]");
    assert_eq!(got, expect);
}

#[test]
fn product_examples() {
    let alg = Algebra::new(2, 0).unwrap();
    let a = el(&alg, "e[inf,-a1,1] e[inf,a1,1]");
    assert_eq!(alg.mul(&NCPoly::scalar(RatFunc::one()), &a), a);
    let x = el(&alg, "e[inf,a1,1]");
    let got = alg.mul(&x, &a);
    // e_+ e_- e_+ = e_- e_+ e_+ + μ e_+
    let expect = &el(&alg, "e[inf,-a1,1] e[inf,a1,1] e[inf,a1,1]") + &x.scale(&rf("mu1"));
    assert_eq!(got, expect);
    let y = el(&alg, "e[inf,-a1,1]");
    assert_eq!(alg.mul(&alg.mul(&x, &a), &y), alg.mul(&x, &alg.mul(&a, &y)));
}

#[test]
fn commutator_examples() {
    let alg = Algebra::new(2, 0).unwrap();
    let num = el(&alg, "e[inf,-a1,1] e[inf,a1,1]");
    assert!(alg.commutator(&num, &num).is_zero());
    let lower = el(&alg, "e[inf,-a1,1]");
    assert_eq!(alg.commutator(&num, &lower), lower.scale(&rf("mu1")));
}

#[test]
fn display_and_parse_roundtrip() {
    let alg = Algebra::new(4, 2).unwrap();
    for &g in alg.gens() {
        assert_eq!(alg.parse_gen(&g.to_string()).unwrap(), g);
    }
    assert_eq!(Gen::InfLower(Root::new(1, 2)).to_string(), "e[inf,-a(1,2),1]");
    assert!(alg.parse_gen("e[3,a1]").is_err());
    assert!(alg.parse_gen("e[inf,a(1,4),1]").is_err());
}

#[test]
fn jacobi_on_generators() {
    for n in 2..=4 {
        let alg = Algebra::new(n, 1).unwrap();
        let gens: Vec<NCPoly> = alg.gens().iter().map(|&g| alg.gen_poly(g)).collect();
        for x in &gens {
            for y in &gens {
                let xy = alg.commutator(x, y);
                assert_eq!(xy, -&alg.commutator(y, x));
                for z in &gens {
                    let j1 = alg.commutator(&xy, z);
                    let j2 = alg.commutator(&alg.commutator(y, z), x);
                    let j3 = alg.commutator(&alg.commutator(z, x), y);
                    assert!((&(&j1 + &j2) + &j3).is_zero());
                }
            }
        }
    }
}

#[test]
fn casimir_is_invariant() {
    for n in 2..=4 {
        let alg = Algebra::new(n, 2).unwrap();
        let omega = alg.casimir(1, 2);
        assert_eq!(omega, alg.casimir(2, 1), "swap symmetry at N={n}");
        for x in alg.root_system().basis() {
            let diag = &alg.gen_poly(Gen::site_gen(1, x)) + &alg.gen_poly(Gen::site_gen(2, x));
            assert!(alg.commutator(&omega, &diag).is_zero(), "[Ω, {x}] at N={n}");
        }
    }
}

#[test]
fn sl2_casimir_shape() {
    let alg = Algebra::new(2, 2).unwrap();
    let expect = &(&el(&alg, "e[1,a1] e[2,-a1]") + &el(&alg, "e[1,-a1] e[2,a1]")) + &el(&alg, "h[1,1] h[2,1]").scale(&rf("1/2"));
    assert_eq!(alg.casimir(1, 2), expect);
}

fn arb_word(n_gens: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n_gens, 0..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn normal_form_is_canonical(w in arb_word(14), seed in any::<u64>()) {
        let alg = Algebra::new(3, 1).unwrap();
        let word: Vec<Gen> = w.iter().map(|&k| alg.gens()[k]).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = alg.normal_order_randomized(&word, &mut rng);
        let b = alg.normal_order_randomized(&word, &mut rng);
        let c = alg.normal_order(&word);
        prop_assert_eq!(&a, &c);
        prop_assert_eq!(&b, &c);
        // filtration
        prop_assert!(c.max_word_len() <= word.len());
    }

    #[test]
    fn product_is_associative(
        a in arb_word(14), b in arb_word(14), c in arb_word(14),
        ca in -3i64..=3, cb in 1i64..=3,
    ) {
        let alg = Algebra::new(3, 1).unwrap();
        let to = |w: &[usize]| w.iter().take(3).map(|&k| alg.gens()[k]).collect::<Vec<_>>();
        let pa = &alg.normal_order(&to(&a)).scale(&RatFunc::from_i64(ca)) + &alg.gen_poly(alg.gens()[b.len() % 14]);
        let pb = alg.normal_order(&to(&b)).scale(&rf("mu1")).scale(&RatFunc::from_i64(cb));
        let pc = &alg.normal_order(&to(&c)) + &NCPoly::scalar(rf("g1"));
        prop_assert_eq!(alg.mul(&alg.mul(&pa, &pb), &pc), alg.mul(&pa, &alg.mul(&pb, &pc)));
    }
}
