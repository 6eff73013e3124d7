use ckz::classical::*;
use ckz::linalg::Mat;
use ckz::Error;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn instances(count: u64, n: usize, sites: usize) -> Vec<ClassicalInstance<BigRational>> {
    (0..count)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + s);
            random_instance(&mut rng, n, sites, false)
        })
        .collect()
}

#[test]
fn f_is_diagonal_free_and_t2_is_b2() {
    for (n, sites) in [(2, 0), (2, 2), (3, 1), (4, 1)] {
        for inst in instances(5, n, sites) {
            let sol = solve_formal_series(&inst, 5).unwrap();
            assert_eq!(sol.f.coeff(0), &Mat::identity(n));
            for m in 1..=sol.f.order() {
                assert!(sol.f.coeff(m).diag_part().is_zero(), "F_{m} has a diagonal part");
            }
            assert_eq!(sol.t2, inst.b2());
            assert_eq!(sol.d.coeff(0), &Mat::identity(n));
            for m in 0..=sol.d.order() {
                assert!(sol.d.coeff(m).off_diag().is_zero());
            }
            // T_1 is the diagonal of B_1
            assert_eq!(sol.t1, inst.b1.diag_part());
        }
    }
}

#[test]
fn diagonal_system_is_trivial() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut inst = random_instance(&mut rng, 3, 0, true);
    let sol = solve_formal_series(&inst, 6).unwrap();
    for m in 1..=6 {
        assert!(sol.f.coeff(m).is_zero());
        assert!(sol.d.coeff(m).is_zero());
    }
    assert!(sol.t1.is_zero() && sol.t0.is_zero());
    for k in 1..=2 {
        for nu in 1..=3 {
            assert!(omega_residue(&inst, k, nu).unwrap().is_zero());
            assert!(omega_explicit(&inst, k, nu).unwrap().is_zero());
        }
    }
    // a diagonal B_1 still gives a diagonal system
    inst.b1 = Mat::from_fn(3, 3, |i, j| if i == j { q(i as i64 + 2) } else { q(0) });
    let sol = solve_formal_series(&inst, 4).unwrap();
    assert!((1..=4).all(|m| sol.f.coeff(m).is_zero()));
    assert_eq!(sol.t1, inst.b1);
}

#[test]
fn defining_equation_holds() {
    for (n, sites) in [(2, 0), (2, 1), (3, 0), (3, 2)] {
        for inst in instances(4, n, sites) {
            let sol = solve_formal_series(&inst, 6).unwrap();
            assert_eq!(check_defining_equation(&inst, &sol), Ok(()));
        }
    }
}

#[test]
fn defining_equation_detects_corruption() {
    let inst = instances(1, 3, 1).remove(0);
    let mut sol = solve_formal_series(&inst, 6).unwrap();
    let mut f = sol.f.coeffs().to_vec();
    f[2][(0, 1)] = &f[2][(0, 1)] + &q(1);
    sol.f = MatSeries::new(f);
    assert!(check_defining_equation(&inst, &sol).is_err());
}

#[test]
fn residue_is_stable_in_the_truncation() {
    for inst in instances(5, 3, 1) {
        for k in 1..=2u32 {
            for nu in 1..=3 {
                let base = omega_residue_at(&inst, k, nu, k as usize + 2).unwrap();
                for extra in 1..=3 {
                    assert_eq!(omega_residue_at(&inst, k, nu, k as usize + 2 + extra).unwrap(), base);
                }
            }
        }
    }
}

#[test]
fn solution_is_unique_under_relabelling() {
    // Conjugating by a permutation relabels the diagonal; the solution
    // must follow.
    let perm = [2usize, 0, 1];
    let pm = |m: &Mat<BigRational>| Mat::from_fn(3, 3, |i, j| m[(perm[i], perm[j])].clone());
    for inst in instances(4, 3, 1) {
        let moved = ClassicalInstance::new(
            inst.a.iter().map(pm).collect(),
            inst.z.clone(),
            pm(&inst.b1),
            perm.iter().map(|&i| inst.t2[i].clone()).collect(),
        )
        .unwrap();
        let (a, b) = (solve_formal_series(&inst, 5).unwrap(), solve_formal_series(&moved, 5).unwrap());
        let (ya, yb) = (a.y_hat(), b.y_hat());
        for m in 0..=5 {
            assert_eq!(&pm(ya.coeff(m)), yb.coeff(m), "order {m}");
        }
        for k in 1..=2 {
            for nu in 1..=3 {
                assert_eq!(omega_residue(&inst, k, perm[nu - 1] + 1).unwrap(), omega_residue(&moved, k, nu).unwrap());
            }
        }
    }
}

#[test]
fn input_errors() {
    let n = 2;
    let b1 = Mat::zeros(n, n);
    let same = ClassicalInstance::new(vec![], vec![], b1.clone(), vec![q(1), q(1)]);
    assert!(matches!(same, Err(Error::CoincidentDiagonal(1, 2))));
    let bad = ClassicalInstance::new(vec![Mat::zeros(3, 3)], vec![q(0)], b1.clone(), vec![q(1), q(2)]);
    assert!(bad.is_err());
    let inst = ClassicalInstance::new(vec![], vec![], b1, vec![q(1), q(2)]).unwrap();
    assert!(solve_formal_series(&inst, 0).is_err());
    assert!(matches!(omega_residue_at(&inst, 2, 1, 2), Err(Error::Truncation(_))));
    assert!(omega_residue_at(&inst, 3, 1, 6).is_err());
    assert!(omega_residue_at(&inst, 1, 3, 6).is_err());
    assert!(omega_terms(2, 3, 1).is_err());
}

#[test]
fn closed_forms_without_sites_drop_site_entries() {
    for k in 1..=2 {
        for p in 1..=3 {
            let terms = omega_terms(3, k, p).unwrap();
            assert!(terms.iter().any(|t| t.entries.iter().any(|e| matches!(e, Entry::BNeg(..)))));
        }
    }
    // B_{-q} vanishes identically without sites, so only B_1 terms survive
    for inst in instances(3, 3, 0) {
        assert!(inst.b_neg(0).is_zero() && inst.b_neg(2).is_zero());
    }
}

#[test]
fn antidiagonal_instance() {
    // B_1 = antidiag(1, 1), no sites: the residue and the amended closed
    // form give zero; the literal closed form gives 1/(t_1 - t_2)².
    let b1 = Mat::from_fn(2, 2, |i, j| if i != j { q(1) } else { q(0) });
    let inst = ClassicalInstance::new(vec![], vec![], b1, vec![q(3), q(1)]).unwrap();
    assert!(omega_residue(&inst, 1, 1).unwrap().is_zero());
    assert!(omega_explicit(&inst, 1, 1).unwrap().is_zero());
    assert_eq!(omega_explicit_with(&inst, 1, 1, Reading::Literal).unwrap(), BigRational::new(1.into(), 4.into()));
}

#[test]
fn oracle_agrees_on_fifty_instances() {
    for n in 2..=3 {
        for sites in 0..=2 {
            for k in 1..=2 {
                let rep = oracle_compare(50, 7, n, sites, k).unwrap();
                assert_eq!(rep.passed(), 50, "N={n} n={sites} k={k}: {:?}", rep.failures.first());
            }
        }
    }
}

#[test]
fn oracle_is_reproducible() {
    let a = oracle_compare(10, 11, 3, 1, 2).unwrap();
    let b = oracle_compare(10, 11, 3, 1, 2).unwrap();
    assert_eq!(a.passed(), b.passed());
    let x = instances(1, 3, 1).remove(0);
    let y = instances(1, 3, 1).remove(0);
    assert_eq!(x.b1, y.b1);
    assert_eq!(x.t2, y.t2);
}

#[test]
fn literal_reading_fails_the_oracle() {
    let rep = oracle_compare_with(20, 7, 3, 1, 1, Reading::Literal).unwrap();
    assert!(rep.passed() < 20);
    let f = &rep.failures[0];
    assert_ne!(f.explicit, f.residue);
    assert!(f.instance.contains("B1="));
    // the second form is unaffected by the reading
    assert_eq!(oracle_compare_with(10, 7, 3, 1, 2, Reading::Literal).unwrap().passed(), 10);
}
