use ckz::fock::*;
use ckz::hamiltonians::{HamiltonianSet, Construction, H2Reading};
use ckz::ncalg::{Algebra, NCPoly};
use ckz::ratfunc::{parse_ratfunc, RatFunc, Var};
use proptest::prelude::*;

fn rf(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn vec_of(alg: &Algebra, table: &str) -> VecV {
    vector_from(alg, &alg.parse_table(table).unwrap())
}

fn op(alg: &Algebra, w: &str) -> NCPoly {
    alg.normal_order(&alg.parse_word(w).unwrap())
}

#[test]
fn raising_current_hops_twice() {
    let alg = Algebra::new(2, 0).unwrap();
    let v = vec_of(&alg, "1 | e[inf,-a1,1] e[inf,-a1,1]");
    let got = act(&alg, &op(&alg, "e[inf,a1,1]"), &v);
    assert_eq!(got, vec_of(&alg, "2*mu1 | e[inf,-a1,1]"));
}

#[test]
fn vacuum_is_annihilated() {
    let alg = Algebra::new(3, 1).unwrap();
    let v = VecV::vacuum(&alg);
    for w in ["e[inf,a1,1]", "e[inf,a(1,2),1]", "e[1,a2]"] {
        assert!(act(&alg, &op(&alg, w), &v).is_zero(), "{w}");
    }
    assert_eq!(act(&alg, &op(&alg, "h[1,2]"), &v), v.scale(&rf("L1_2")));
}

#[test]
fn verma_lowering_then_raising() {
    let alg = Algebra::new(2, 1).unwrap();
    let v = vec_of(&alg, "1 | e[1,-a1]");
    // e f v = h v = Λ v
    assert_eq!(act(&alg, &op(&alg, "e[1,a1]"), &v), VecV::vacuum(&alg).scale(&rf("L1_1")));
}

#[test]
fn weight_space_examples() {
    let alg = Algebra::new(3, 0).unwrap();
    let b = weight_space_basis(&alg, &[1, 1]).unwrap();
    let words: Vec<String> = b.iter().map(|x| x.display(&alg)).collect();
    assert_eq!(b.len(), 2);
    assert!(words.contains(&"e[inf,-a1,1] e[inf,-a2,1] v".to_string()));
    assert!(words.contains(&"e[inf,-a(1,2),1] v".to_string()));
    assert_eq!(weight_space_basis(&alg, &[0, 0]).unwrap(), vec![BasisVec::vacuum(&alg)]);
    let alg = Algebra::new(2, 1).unwrap();
    assert_eq!(weight_space_basis(&alg, &[2]).unwrap().len(), 3);
    assert!(weight_space_basis(&alg, &[2, 1]).is_err());
}

#[test]
fn weight_spaces_satisfy_weight_equation() {
    for (n, s) in [(2, 0), (2, 2), (3, 0), (3, 1), (4, 0)] {
        let alg = Algebra::new(n, s).unwrap();
        for m in small_weights(n - 1, 3) {
            for b in weight_space_basis(&alg, &m).unwrap() {
                assert_eq!(b.content(&alg), m);
                assert!(satisfies_weight(&alg, &m, &b));
            }
        }
    }
}

fn small_weights(rank: usize, total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|v: Vec<u32>| (0..=total).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|m| m.iter().sum::<u32>() <= total);
    out
}

#[test]
fn mu_derivative_structural_factor() {
    let alg = Algebra::new(3, 0).unwrap();
    for (m1, m2) in [(1u32, 1u32), (2, 1), (2, 2), (3, 2)] {
        for k in 0..=m1.min(m2) {
            let mut word = Vec::new();
            word.extend(std::iter::repeat_n("e[inf,-a1,1]", (m1 - k) as usize));
            word.extend(std::iter::repeat_n("e[inf,-a(1,2),1]", k as usize));
            word.extend(std::iter::repeat_n("e[inf,-a2,1]", (m2 - k) as usize));
            let v = vec_of(&alg, &format!("1 | {}", word.join(" ")));
            assert_eq!(v.len(), 1);
            let c = rf(&format!("1/2*({}/mu1 + {k}/(mu1+mu2))", m1 - k));
            assert_eq!(d_mu(&alg, 1, &v), v.scale(&c), "m=({m1},{m2}) k={k}");
            let c2 = rf(&format!("1/2*({}/mu2 + {k}/(mu1+mu2))", m2 - k));
            assert_eq!(d_mu(&alg, 2, &v), v.scale(&c2));
        }
    }
}

#[test]
fn gamma_derivative_is_coefficientwise() {
    let alg = Algebra::new(2, 0).unwrap();
    let v = VecV::vacuum(&alg);
    assert!(d_gamma(1, &v).is_zero());
    let gv = v.scale(&rf("g1"));
    assert!(d_mu(&alg, 1, &gv).is_zero());
    assert_eq!(d_gamma(1, &gv), v);
}

#[test]
fn hamiltonians_preserve_weight() {
    for (n, s) in [(2, 0), (2, 1), (3, 0), (3, 1)] {
        let alg = Algebra::new(n, s).unwrap();
        let set = HamiltonianSet::build(&alg, Construction::Explicit(H2Reading::Mirrored)).unwrap();
        let ops: Vec<&NCPoly> = set.gaudin.iter().chain(&set.h1).chain(&set.h2).collect();
        for m in small_weights(n - 1, 3) {
            for b in weight_space_basis(&alg, &m).unwrap() {
                for h in &ops {
                    let out = act(&alg, h, &VecV::basis(b.clone()));
                    for (x, _) in out.terms() {
                        assert_eq!(x.content(&alg), m, "N={n} n={s}");
                    }
                }
            }
        }
    }
}

fn arb_word(n_gens: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n_gens, 0..=max)
}

const COEFFS: [&str; 5] = ["1", "mu1", "g1 - 2", "1/mu2", "z1/(mu1 + mu2)"];

fn build(alg: &Algebra, w: &[usize], c: usize) -> NCPoly {
    let gens: Vec<_> = w.iter().map(|&k| alg.gens()[k]).collect();
    alg.word_poly(rf(COEFFS[c % COEFFS.len()]), &gens)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn representation_property(a in arb_word(14, 3), b in arb_word(14, 3), v in arb_word(14, 3), ca in 0usize..5, cb in 0usize..5) {
        let alg = Algebra::new(3, 1).unwrap();
        let (a, b) = (build(&alg, &a, ca), build(&alg, &b, cb));
        let v = vector_from(&alg, &build(&alg, &v, 0));
        let lhs = act(&alg, &alg.mul(&a, &b), &v);
        let rhs = act(&alg, &a, &act(&alg, &b, &v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mu_derivative_is_a_derivation(a in arb_word(14, 3), v in arb_word(14, 3), ca in 0usize..5, cv in 0usize..5, k in 1usize..3) {
        let alg = Algebra::new(3, 1).unwrap();
        let a = build(&alg, &a, ca);
        let v = vector_from(&alg, &build(&alg, &v, cv));
        let lhs = d_mu(&alg, k, &act(&alg, &a, &v));
        let rhs = &act(&alg, &alg.derivative(&a, Var::Mu(k as u8)), &v) + &act(&alg, &a, &d_mu(&alg, k, &v));
        prop_assert_eq!(lhs, rhs);
    }
}
