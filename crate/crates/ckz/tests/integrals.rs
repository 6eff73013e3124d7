use ckz::fock::{self, VecV};
use ckz::hamiltonians::{quantize_oneform, Complement};
use ckz::integrals::*;
use ckz::ncalg::{Algebra, Gen, NCPoly};
use ckz::ratfunc::{parse_ratfunc, RatFunc, Var};
use ckz::rootsys::{Root, RootSystem};
use proptest::prelude::*;

fn r(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn lower(alg: &Algebra, root: Root) -> NCPoly {
    alg.gen_poly(Gen::InfLower(root))
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

#[test]
fn log_derivative_examples() {
    let mf = MasterFunction::new(3, 0, &[1, 1]).unwrap();
    let d = mf.log_derivative(Var::T(1, 1)).unwrap();
    assert_eq!(d, r("-1/(t1_1 - t2_1) + g1 + mu1*t1_1"));

    let mf = MasterFunction::new(3, 0, &[2, 1]).unwrap();
    assert_eq!(mf.log_derivative(Var::Gamma(1)).unwrap(), r("t1_1 + t1_2"));
    assert_eq!(mf.log_derivative(Var::Mu(2)).unwrap(), r("t2_1^2/2"));
    let d = mf.log_derivative(Var::T(1, 2)).unwrap();
    assert_eq!(d, r("2/(t1_2 - t1_1) - 1/(t1_2 - t2_1) + g1 + mu1*t1_2"));

    // no integration variables, two sites
    let mf = MasterFunction::new(2, 2, &[0]).unwrap();
    let d = mf.log_derivative(Var::Z(1)).unwrap();
    assert_eq!(d, r("L1_1*L2_1/2/(z1 - z2) - g1*L1_1/2 - mu1*L1_1*z1/2"));

    assert!(mf.log_derivative(Var::T(1, 1)).is_err());
    assert!(MasterFunction::new(3, 0, &[1]).is_err());
}

#[test]
fn log_derivative_mixed_partials_agree() {
    for (n, sites, m) in [(3, 0, vec![1, 1]), (3, 0, vec![2, 2]), (3, 1, vec![1, 1]), (2, 2, vec![2])] {
        let mf = MasterFunction::new(n, sites, &m).unwrap();
        let vars = mf.variables();
        let d: Vec<RatFunc> = vars.iter().map(|&v| mf.log_derivative(v).unwrap()).collect();
        for (i, &u) in vars.iter().enumerate() {
            for (j, &v) in vars.iter().enumerate().skip(i + 1) {
                assert_eq!(d[i].partial_derivative(v), d[j].partial_derivative(u), "{u}, {v} for m = {m:?}");
            }
        }
    }
}

#[test]
fn nabla_sum_matches_nabla() {
    let mf = MasterFunction::new(3, 0, &[2, 2]).unwrap();
    let psi = &r("t1_2") * &phi(1, 2, 2);
    for v in mf.t_vars() {
        assert_eq!(mf.nabla_sum(v, &psi).unwrap().to_ratfunc(), mf.nabla(v, &psi).unwrap());
    }
    assert!(mf.nabla_sum(Var::Gamma(1), &psi).is_err());
}

#[test]
fn s_and_a_enumeration() {
    let rs = RootSystem::new(3).unwrap();
    let k_of = |a: i32, ab: i32, b: i32| {
        let mut k = vec![0u32; 3];
        k[rs.ordinal(Root::new(1, 1))] = a as u32;
        k[rs.ordinal(Root::new(1, 2))] = ab as u32;
        k[rs.ordinal(Root::new(2, 2))] = b as u32;
        k
    };
    let mut s = enumerate_s(&rs, &[1, 1]);
    s.sort();
    let mut want = vec![k_of(1, 0, 1), k_of(0, 1, 0)];
    want.sort();
    assert_eq!(s, want);

    assert_eq!(enumerate_s(&rs, &[2, 1]).len(), 2);
    assert_eq!(enumerate_a(&rs, &[2, 1], &k_of(1, 1, 0)).len(), 2);

    assert_eq!(enumerate_s(&rs, &[0, 0]), vec![vec![0, 0, 0]]);
    assert_eq!(enumerate_a(&rs, &[0, 0], &[0, 0, 0]), vec![Vec::<Slot>::new()]);
}

#[test]
fn omega_sl3_one_one() {
    let alg = Algebra::new(3, 0).unwrap();
    let omega = build_omega_m(&alg, &[1, 1]).unwrap();
    let a1 = lower(&alg, Root::new(1, 1));
    let a2 = lower(&alg, Root::new(2, 2));
    let a12 = lower(&alg, Root::new(1, 2));
    let op = &alg.mul(&a1, &a2) - &a12.scale(&r("1/(t2_1 - t1_1)"));
    let want = fock::vector_from(&alg, &op);
    assert!((&omega - &want).is_zero(), "{}", omega.render(&alg));
}

#[test]
fn omega_sl2_one_site() {
    let alg = Algebra::new(2, 1).unwrap();
    let omega = build_omega_m(&alg, &[1]).unwrap();
    let a = Root::new(1, 1);
    let op = &alg.gen_poly(Gen::SiteLower(1, a)).scale(&r("1/(t1_1 - z1)")) - &lower(&alg, a);
    assert!((&omega - &fock::vector_from(&alg, &op)).is_zero(), "{}", omega.render(&alg));
}

#[test]
fn omega_lies_in_weight_space() {
    for sites in 0..=1 {
        let alg = Algebra::new(3, sites).unwrap();
        for m1 in 0..=2 {
            for m2 in 0..=2 {
                let omega = build_omega_m(&alg, &[m1, m2]).unwrap();
                assert!(!omega.is_zero());
                for (b, _) in omega.terms() {
                    assert!(fock::satisfies_weight(&alg, &[m1, m2], b), "m = ({m1}, {m2}): {}", b.display(&alg));
                }
            }
        }
    }
}

#[test]
fn regular_singular_specialization() {
    // Dropping the currents at infinity and μ leaves the regular-singular data.
    let alg = Algebra::new(3, 1).unwrap();
    let omega = build_omega_m(&alg, &[1, 1]).unwrap();
    let mut finite = VecV::zero();
    for (b, c) in omega.terms() {
        if b.inf.iter().all(|&x| x == 0) {
            finite.add_term(b.clone(), c.clone());
        }
    }
    let x = |root| alg.gen_poly(Gen::SiteLower(1, root));
    let op = &alg.mul(&x(Root::new(1, 1)), &x(Root::new(2, 2))).scale(&r("1/(t1_1 - z1)/(t2_1 - z1)"))
        + &x(Root::new(1, 2)).scale(&r("1/(t2_1 - t1_1)/(t1_1 - z1)"));
    assert!((&finite - &fock::vector_from(&alg, &op)).is_zero(), "{}", finite.render(&alg));
    for (_, c) in finite.terms() {
        assert!(c.vars().iter().all(|v| !matches!(v, Var::Mu(_) | Var::Gamma(_))));
    }

    let mf = MasterFunction::new(3, 1, &[1, 1]).unwrap();
    let no_mu = |v: Var| matches!(v, Var::Mu(_)).then(ckz::ratfunc::MPoly::zero);
    let d = mf.log_derivative(Var::T(1, 1)).unwrap().substitute(&no_mu).unwrap();
    assert_eq!(d, r("-L1_1/(t1_1 - z1) - 1/(t1_1 - t2_1) + g1"));
}

#[test]
fn symmetrize_examples() {
    assert_eq!(symmetrize(&r("t1_1"), &[2, 0]), r("(t1_1 + t1_2)/2"));
    assert_eq!(symmetrize(&r("t1_1*t2_2"), &[2, 2]), r("(t1_1 + t1_2)*(t2_1 + t2_2)/4"));
    let f = &phi(1, 2, 2) + &r("t2_1/(t1_2 - t1_1)");
    let s = symmetrize(&f, &[2, 2]);
    assert_eq!(symmetrize(&s, &[2, 2]), s);
    let g = r("g1*t1_2^2");
    assert_eq!(symmetrize(&(&f + &g), &[2, 2]), &s + &symmetrize(&g, &[2, 2]));
    // antisymmetric parts vanish
    assert!(symmetrize(&r("1/(t1_1 - t1_2)"), &[2, 0]).is_zero());
}

#[test]
fn symmetrized_sums_agree_with_symmetrize() {
    let mut d = DiffSum::new();
    let parts = [phi(2, 2, 2), &r("t1_1") * &phi(1, 2, 2), r("g2/(t1_2 - t2_1)")];
    let mut total = RatFunc::zero();
    for p in &parts {
        d.push(p).unwrap();
        total = &total + p;
    }
    assert_eq!(symmetrize_sum(&d, &[2, 2]).to_ratfunc(), symmetrize(&total, &[2, 2]));
}

#[test]
fn four_sums_cancel() {
    // m = (2, 2), b = 1, k = 1
    let p = phi(1, 2, 2);
    let x1 = &r("2/(t1_1 - t1_2)") * &p;
    let x2 = &r("-1/(t1_1 - t2_2)") * &p;
    let x3 = &r("2/(t2_1 - t2_2)") * &p;
    let x4 = &r("-1/(t2_1 - t1_2)") * &p;
    let total = &(&x1 + &x2) + &(&x3 + &x4);
    assert!(symmetrize(&total, &[2, 2]).is_zero());
    let mut d = DiffSum::new();
    for x in [&x1, &x2, &x3, &x4] {
        d.push(x).unwrap();
    }
    assert!(symmetrize_sum(&d, &[2, 2]).is_zero());
    // the pieces do not cancel individually
    assert!(!symmetrize(&(&x1 + &x2), &[2, 2]).is_zero());
}

#[test]
fn diffsum_identities() {
    let cases = [
        (vec!["1/(t1_1-t1_2)/(t1_2-t1_3)", "1/(t1_2-t1_3)/(t1_3-t1_1)", "1/(t1_3-t1_1)/(t1_1-t1_2)"], true),
        (vec!["1/(t1_1-t1_2)/(t1_2-t1_3)", "1/(t1_2-t1_3)/(t1_3-t1_1)"], false),
        (
            vec![
                "t1_1^3/(t1_1-t1_2)/(t1_1-t1_3)",
                "t1_2^3/(t1_2-t1_1)/(t1_2-t1_3)",
                "t1_3^3/(t1_3-t1_1)/(t1_3-t1_2)",
                "-t1_1-t1_2-t1_3",
            ],
            true,
        ),
        (vec!["t1_1^3/(t1_1-t1_2)/(t1_1-t1_3)", "t1_2^3/(t1_2-t1_1)/(t1_2-t1_3)", "-t1_1-t1_2"], false),
        (vec!["1/(t1_1-t2_1)/(t1_1-t2_1)", "1/(t1_1-t2_1)/(t2_1-t1_1)"], true),
        (vec!["1/(t1_1-t2_1)/(t1_1-t2_1)", "-1/(t1_1-t2_1)/(t2_1-t1_1)"], false),
        (vec!["g1/(mu1+mu2)/(t1_1-t2_1)", "g1/(mu1+mu2)/(t2_1-t1_1)"], true),
    ];
    for (parts, zero) in cases {
        let mut d = DiffSum::new();
        for p in &parts {
            d.push(&r(p)).unwrap();
        }
        assert_eq!(d.is_zero(), zero, "{parts:?}");
        assert_eq!(d.to_ratfunc().is_zero(), zero, "{parts:?}");
    }
    // factors that are not differences of integration variables are rejected
    assert!(DiffSum::new().push(&r("1/(t1_1 + t1_2)")).is_err());
    assert!(DiffSum::new().push(&r("1/(t1_1 - z1)")).is_err());
}

fn arb_fraction() -> impl Strategy<Value = RatFunc> {
    let vars = ["t1_1", "t1_2", "t1_3", "t2_1"];
    let atom = (0..4usize, 0..4usize).prop_filter("distinct", |(a, b)| a != b);
    (-3i64..=3, 0..4usize, 0..3u32, prop::collection::vec(atom, 0..4)).prop_map(move |(c, v, e, den)| {
        let mut f = &RatFunc::from_i64(c) * &r(vars[v]).pow(e);
        for (a, b) in den {
            f = f.checked_div(&r(&format!("{} - {}", vars[a], vars[b]))).unwrap();
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn diffsum_zero_test_agrees_with_common_denominator(parts in prop::collection::vec(arb_fraction(), 1..6)) {
        let mut d = DiffSum::new();
        let mut total = RatFunc::zero();
        for p in &parts {
            d.push(p).unwrap();
            total = &total + p;
        }
        prop_assert_eq!(d.is_zero(), total.is_zero());
        // subtracting the combined fraction always gives zero
        d.push(&-&total).unwrap();
        prop_assert!(d.is_zero());
    }
}

#[test]
fn lemma_examples() {
    let rep = lemma_check(1, 1, Relation::T1Paired, Some(1)).unwrap();
    assert_eq!(rep.len(), 1);
    assert!(rep[0].holds, "{}", rep[0].witness);

    let rep = lemma_check(2, 2, Relation::T1SqFree, Some(1)).unwrap();
    assert_eq!(rep.iter().map(|x| x.b).collect::<Vec<_>>(), vec![2]);
    assert!(rep[0].holds, "{}", rep[0].witness);

    // k = 0: no φ_{-1} term, and the paired relations have no admissible b
    for rel in ALL_RELATIONS {
        let rep = lemma_check(2, 1, rel, Some(0)).unwrap();
        assert_eq!(rep.is_empty(), rel.paired());
        assert!(rep.iter().all(|x| x.holds));
    }
}

#[test]
fn dropping_kappa_breaks_quadratic_relation() {
    let res = lemma_residual(2, 2, Relation::T1SqFree, 1, 2).unwrap();
    assert!(res.is_zero());
    let mut broken = res.clone();
    let mut extra = DiffSum::new();
    // restore the −κ⟨φ_1⟩ that the right-hand side subtracted
    extra.push(&(&r("-kappa") * &phi(1, 2, 2))).unwrap();
    broken.absorb(symmetrize_sum(&extra, &[2, 2]));
    assert!(!broken.is_zero());
}

#[test]
fn lemma_input_errors() {
    assert!(lemma_check(4, 1, Relation::T1Paired, None).is_err());
    assert!(lemma_check(2, 1, Relation::T1Paired, Some(2)).is_err());
    assert!(lemma_residual(2, 2, Relation::T1Free, 1, 1).is_err());
    assert!(lemma_residual(2, 2, Relation::T1Paired, 1, 2).is_err());
    assert!(Relation::parse("t3-free").is_err());
    for rel in ALL_RELATIONS {
        assert_eq!(Relation::parse(rel.name()).unwrap(), rel);
    }
}

#[test]
fn all_relations_up_to_three() {
    for m1 in 0..=3 {
        for m2 in 0..=3 {
            for rel in ALL_RELATIONS {
                for rep in lemma_check(m1, m2, rel, None).unwrap() {
                    assert!(rep.holds, "m = ({m1}, {m2}) {} k = {} b = {}: {}", rel.name(), rep.k, rep.b, rep.witness);
                }
            }
        }
    }
}

#[test]
fn u_coefficients() {
    let alg = Algebra::new(3, 0).unwrap();
    for (m1, m2) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1), (3, 2), (3, 3)] {
        let u = u_in_phi_basis(&alg, m1, m2).unwrap();
        assert_eq!(u.len() as u32, m1.min(m2) + 1);
        for (_, k, c) in u {
            let k = k as u32;
            let sign = if (m1 + m2) % 2 == 0 { 1 } else { -1 };
            let want = sign * factorial(m1) * factorial(m2) / (factorial(m1 - k) * factorial(m2 - k) * factorial(k));
            assert_eq!(c, RatFunc::from_i64(want), "m = ({m1}, {m2}), k = {k}");
        }
    }
}

#[test]
fn theorem_all_flows() {
    for m1 in 0..=2 {
        for m2 in 0..=2 {
            for f in ["g1", "g2", "mu1", "mu2"] {
                let rep = theorem_check(m1, m2, IntFlow::parse(f).unwrap()).unwrap();
                assert!(rep.holds, "m = ({m1}, {m2}) {f}:\n{}", rep.witness);
            }
        }
    }
}

#[test]
fn theorem_detects_wrong_operator() {
    let alg = Algebra::new(3, 0).unwrap();
    let h = quantize_oneform(&alg, 2, 1, Complement::Omit).unwrap();
    let (lhs, rhs) = theorem_sides_with(&alg, 1, 1, IntFlow::Mu(1), &h).unwrap();
    assert!(!lhs.sub(&rhs).is_zero());
    let h = quantize_oneform(&alg, 2, 1, Complement::Half).unwrap();
    let (lhs, rhs) = theorem_sides_with(&alg, 1, 1, IntFlow::Mu(1), &h).unwrap();
    assert!(lhs.sub(&rhs).is_zero());
}

#[test]
fn theorem_input_errors() {
    assert!(theorem_check(4, 0, IntFlow::Gamma(1)).is_err());
    assert!(IntFlow::parse("g3").is_err());
    let alg = Algebra::new(2, 0).unwrap();
    let h = quantize_oneform(&alg, 1, 1, Complement::Half).unwrap();
    assert!(theorem_sides_with(&alg, 1, 1, IntFlow::Gamma(1), &h).is_err());
}
