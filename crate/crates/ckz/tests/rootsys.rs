use ckz::linalg::Mat;
use ckz::rootsys::{build_root_system, epsilon, Elem, Root, RootSystem};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn comb_matrix(rs: &RootSystem, comb: &[(i64, Elem)]) -> Mat<BigRational> {
    let n = rs.n();
    let mut m = Mat::zeros(n, n);
    for &(c, x) in comb {
        m = &m + &rs.matrix_realization(x).scale(&q(c, 1));
    }
    m
}

#[test]
fn sl3_roots_and_subsets() {
    let rs = build_root_system(3).unwrap();
    let a1 = Root::simple(1);
    let a12 = Root::new(1, 2);
    let a2 = Root::simple(2);
    assert_eq!(rs.positive_roots(), &[a1, a12, a2]);
    assert_eq!(rs.j_set(1), &[a1, a12]);
    assert_eq!(rs.r_set(2), &[a2]);
    assert_eq!(rs.c_set(2), &[a12, a2]);
}

#[test]
fn sl2_single_root() {
    let rs = build_root_system(2).unwrap();
    assert_eq!(rs.positive_roots(), &[Root::simple(1)]);
    assert_eq!(rs.j_set(1), &[Root::simple(1)]);
}

#[test]
fn rejects_small_rank() {
    assert!(build_root_system(1).is_err());
}

#[test]
fn root_counts_and_strict_order() {
    for n in 2..=7 {
        let rs = build_root_system(n).unwrap();
        assert_eq!(rs.num_positive(), n * (n - 1) / 2);
        for w in rs.positive_roots().windows(2) {
            assert!(w[0] > w[1]);
        }
        // J_p by explicit set definition: α - α_p ∈ Q_+
        for p in 1..n {
            let expect: Vec<Root> = rs.positive_roots().iter().copied().filter(|r| r.start as usize <= p && p <= r.end as usize).collect();
            assert_eq!(rs.j_set(p), expect.as_slice());
        }
    }
}

#[test]
fn bracket_examples() {
    let rs = build_root_system(3).unwrap();
    let a1 = Root::simple(1);
    let a2 = Root::simple(2);
    assert_eq!(rs.bracket_basis(Elem::E(a1), Elem::E(a2)), vec![(1, Elem::E(Root::new(1, 2)))]);
    assert!(rs.bracket_basis(Elem::E(a1), Elem::E(a1)).is_empty());
    assert_eq!(rs.bracket_basis(Elem::H(1), Elem::E(a2)), vec![(-1, Elem::E(a2))]);
}

#[test]
fn matrix_examples() {
    let rs = build_root_system(3).unwrap();
    let e13 = rs.matrix_realization(Elem::E(Root::new(1, 2)));
    for i in 0..3 {
        for j in 0..3 {
            let expect = if (i, j) == (0, 2) { BigRational::one() } else { BigRational::zero() };
            assert_eq!(e13[(i, j)], expect);
        }
    }
    let w1 = rs.w_matrix(1);
    assert_eq!((w1[(0, 0)].clone(), w1[(1, 1)].clone(), w1[(2, 2)].clone()), (q(2, 3), q(-1, 3), q(-1, 3)));
    let h2 = rs.matrix_realization(Elem::H(2));
    assert_eq!((h2[(0, 0)].clone(), h2[(1, 1)].clone(), h2[(2, 2)].clone()), (q(0, 1), q(1, 1), q(-1, 1)));
}

#[test]
fn positive_bracket_sign_is_epsilon() {
    for n in 2..=6 {
        let rs = build_root_system(n).unwrap();
        for &a in rs.positive_roots() {
            for &b in rs.positive_roots() {
                if let Some(s) = a.add(b) {
                    assert_eq!(rs.bracket_basis(Elem::E(a), Elem::E(b)), vec![(epsilon(a, b).unwrap(), Elem::E(s))]);
                }
            }
        }
    }
}

#[test]
fn homomorphism_antisymmetry_and_h_alpha() {
    for n in 2..=5 {
        let rs = build_root_system(n).unwrap();
        let basis = rs.basis();
        for &x in &basis {
            for &y in &basis {
                let lhs = comb_matrix(&rs, &rs.bracket_basis(x, y));
                let mx = rs.matrix_realization(x);
                let my = rs.matrix_realization(y);
                assert_eq!(lhs, mx.commutator(&my), "[{x}, {y}] at N={n}");
                let back = comb_matrix(&rs, &rs.bracket_basis(y, x));
                assert_eq!(lhs, -&back);
            }
        }
        for p in 1..n {
            let a = Root::simple(p);
            let c = rs.matrix_realization(Elem::E(a)).commutator(&rs.matrix_realization(Elem::F(a)));
            assert_eq!(c, rs.matrix_realization(Elem::H(p)));
        }
        for x in basis {
            assert!(rs.matrix_realization(x).trace().is_zero());
        }
    }
}

#[test]
fn jacobi_identity() {
    for n in 2..=4 {
        let rs = build_root_system(n).unwrap();
        let basis = rs.basis();
        let br = |comb: &[(i64, Elem)], z: Elem| -> Vec<(i64, Elem)> {
            comb.iter().flat_map(|&(c, x)| rs.bracket_basis(x, z).into_iter().map(move |(d, y)| (c * d, y))).collect()
        };
        for &x in &basis {
            for &y in &basis {
                for &z in &basis {
                    let mut total = br(&rs.bracket_basis(x, y), z);
                    total.extend(br(&rs.bracket_basis(y, z), x));
                    total.extend(br(&rs.bracket_basis(z, x), y));
                    assert!(comb_matrix(&rs, &total).is_zero());
                }
            }
        }
    }
}

#[test]
fn duality() {
    for n in 2..=5 {
        let rs = build_root_system(n).unwrap();
        for &a in rs.positive_roots() {
            for &b in rs.positive_roots() {
                let t = (&rs.matrix_realization(Elem::E(a)) * &rs.matrix_realization(Elem::F(b))).trace();
                assert_eq!(t, if a == b { BigRational::one() } else { BigRational::zero() });
            }
        }
        for p in 1..n {
            for r in 1..n {
                let t = (&rs.matrix_realization(Elem::H(p)) * &rs.w_matrix(r)).trace();
                assert_eq!(t, if p == r { BigRational::one() } else { BigRational::zero() });
            }
        }
    }
}

#[test]
fn w_matches_inverse_cartan_combination() {
    for n in 2..=5 {
        let rs = build_root_system(n).unwrap();
        for p in 1..n {
            let mut m = Mat::zeros(n, n);
            for qq in 1..n {
                m = &m + &rs.matrix_realization(Elem::H(qq)).scale(&ckz::rootsys::cartan_inverse(n, p, qq));
            }
            assert_eq!(m, rs.w_matrix(p));
        }
    }
}

#[test]
fn decompose_inverts_realization() {
    let rs = build_root_system(4).unwrap();
    for x in rs.basis() {
        let d = rs.decompose(&rs.matrix_realization(x)).unwrap();
        assert_eq!(d, vec![(BigRational::one(), x)]);
    }
}
