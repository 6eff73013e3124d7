//! The classical side: formal solutions at infinity of
//! `dY/dz = A(z) Y` with `A(z) = Σ_i A_i/(z - z_i) - B_1 - z B_2`, the
//! residue one-form, and the closed-form one-forms `ω^(1)`, `ω^(2)`.
//!
//! The closed forms are produced by [`omega_terms`] as lists of symbolic
//! monomials in matrix entries; the same lists are evaluated on numeric
//! instances here and quantized into operators in
//! [`crate::hamiltonians`].

use std::time::Instant;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Field, Mat};

/// A matrix entry appearing in the closed-form one-forms. Indices are
/// 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    /// `(B_1)_{ab}`.
    B1(usize, usize),
    /// `(B_{-q})_{ab}` for `q = 0, 1, 2`, where `B_{-q} = Σ_i A_i z_i^q`.
    BNeg(u32, usize, usize),
}

impl Entry {
    pub fn indices(self) -> (usize, usize) {
        match self {
            Entry::B1(a, b) | Entry::BNeg(_, a, b) => (a, b),
        }
    }
}

/// One monomial of a closed-form Hamiltonian:
/// `scale · Π entries · (t^(1)_p)^t1_power / Π (t^(2)_a - t^(2)_b)^e`.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaTerm {
    pub scale: BigRational,
    pub entries: Vec<Entry>,
    /// Denominator factors `(a, b, e)` meaning `(t^(2)_a - t^(2)_b)^e`.
    pub den: Vec<(usize, usize, u32)>,
    /// Power of `t^(1)_p`.
    pub t1_power: u32,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Which reading of the closed form for `ω^(1)` to use.
///
/// The literal display's last sum, `Σ_k (B_1)_{pk}(B_1)_{kp}/(t_p - t_k)²`,
/// disagrees with the residue; the residue produces
/// `-t^(1)_p Σ_k (B_1)_{pk}(B_1)_{kp}/(t_p - t_k)²` there instead.
/// [`Reading::Amended`] uses the latter and is the default everywhere.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Reading {
    Literal,
    #[default]
    Amended,
}

/// Enumerate the monomials of the coefficient `H^(k)_p` of `dt^(k)_p`
/// (`k ∈ {1, 2}`, `1 ≤ p ≤ N`), amended reading.
pub fn omega_terms(n: usize, k: u32, p: usize) -> Result<Vec<OmegaTerm>> {
    omega_terms_with(n, k, p, Reading::Amended)
}

/// [`omega_terms`] with an explicit [`Reading`] (only `k = 1` differs).
pub fn omega_terms_with(n: usize, k: u32, p: usize, reading: Reading) -> Result<Vec<OmegaTerm>> {
    if !(1..=2).contains(&k) {
        return Err(Error::Invalid(format!("k must be 1 or 2, got {k}")));
    }
    if p == 0 || p > n {
        return Err(Error::Invalid(format!("index {p} out of range 1..={n}")));
    }
    use Entry::*;
    let others: Vec<usize> = (1..=n).filter(|&x| x != p).collect();
    let mut out = Vec::new();
    let mut push = |s: i64, entries: Vec<Entry>, den: Vec<(usize, usize, u32)>, t1: u32| {
        let mut merged: Vec<(usize, usize, u32)> = Vec::new();
        for (a, b, e) in den {
            match merged.iter_mut().find(|(x, y, _)| (*x, *y) == (a, b)) {
                Some(m) => m.2 += e,
                None => merged.push((a, b, e)),
            }
        }
        out.push(OmegaTerm { scale: q(s), entries, den: merged, t1_power: t1 });
    };
    if k == 1 {
        for &a in &others {
            for &b in &others {
                push(1, vec![B1(p, a), B1(a, b), B1(b, p)], vec![(p, a, 1), (p, b, 1)], 0);
            }
        }
        push(-1, vec![BNeg(1, p, p)], vec![], 0);
        for &a in &others {
            push(-1, vec![B1(p, a), BNeg(0, a, p)], vec![(p, a, 1)], 0);
            push(-1, vec![BNeg(0, p, a), B1(a, p)], vec![(p, a, 1)], 0);
            match reading {
                Reading::Literal => push(1, vec![B1(p, a), B1(a, p)], vec![(p, a, 2)], 0),
                Reading::Amended => push(-1, vec![B1(p, a), B1(a, p)], vec![(p, a, 2)], 1),
            }
        }
        return Ok(out);
    }
    for &a in &others {
        for &b in &others {
            push(-1, vec![B1(p, a), BNeg(0, a, b), B1(b, p)], vec![(p, b, 1), (p, a, 1)], 0);
            push(-1, vec![BNeg(0, p, a), B1(a, b), B1(b, p)], vec![(p, a, 1), (p, b, 1)], 0);
            push(-1, vec![B1(p, a), B1(a, p), B1(p, b), B1(b, p)], vec![(p, b, 1), (p, a, 2)], 0);
        }
    }
    for &a in &others {
        push(1, vec![B1(p, a), B1(a, p), BNeg(0, p, p)], vec![(p, a, 2)], 0);
    }
    for &a in &others {
        for &b in &others {
            for &c in &others {
                push(1, vec![B1(p, a), B1(a, b), B1(b, c), B1(c, p)], vec![(p, a, 1), (p, b, 1), (p, c, 1)], 0);
            }
        }
    }
    for &a in &others {
        for &b in &others {
            push(-1, vec![B1(p, a), B1(a, b), BNeg(0, b, p)], vec![(p, a, 1), (p, b, 1)], 0);
            push(-1, vec![B1(p, a), B1(a, b), B1(b, p)], vec![(p, a, 1), (p, b, 2)], 1);
            push(-1, vec![B1(p, a), B1(a, b), B1(b, p)], vec![(p, a, 2), (p, b, 1)], 1);
        }
    }
    for &a in &others {
        push(1, vec![B1(p, a), BNeg(0, a, p)], vec![(p, a, 2)], 1);
        push(1, vec![BNeg(0, p, a), B1(a, p)], vec![(p, a, 2)], 1);
        push(1, vec![B1(p, a), B1(a, p)], vec![(p, a, 3)], 2);
        push(1, vec![BNeg(0, p, a), BNeg(0, a, p)], vec![(p, a, 1)], 0);
        push(-1, vec![B1(p, a), BNeg(1, a, p)], vec![(p, a, 1)], 0);
        push(-1, vec![BNeg(1, p, a), B1(a, p)], vec![(p, a, 1)], 0);
    }
    push(-1, vec![BNeg(2, p, p)], vec![], 0);
    // the whole second form carries an overall 1/2
    for t in &mut out {
        t.scale = &t.scale / q(2);
    }
    Ok(out)
}

/// Numeric data of the linear system: residues `A_i` at `z_i`, `B_1`, and
/// the diagonal of `B_2`.
#[derive(Clone, Debug)]
pub struct ClassicalInstance<T> {
    pub a: Vec<Mat<T>>,
    pub z: Vec<T>,
    pub b1: Mat<T>,
    pub t2: Vec<T>,
}

impl<T: Field> ClassicalInstance<T> {
    pub fn new(a: Vec<Mat<T>>, z: Vec<T>, b1: Mat<T>, t2: Vec<T>) -> Result<Self> {
        let n = t2.len();
        if a.len() != z.len() || b1.rows() != n || a.iter().any(|m| m.rows() != n) {
            return Err(Error::Invalid("inconsistent instance dimensions".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if t2[i] == t2[j] {
                    return Err(Error::CoincidentDiagonal(i + 1, j + 1));
                }
            }
        }
        Ok(ClassicalInstance { a, z, b1, t2 })
    }

    pub fn dim(&self) -> usize {
        self.t2.len()
    }

    pub fn sites(&self) -> usize {
        self.a.len()
    }

    /// `B_{-q} = Σ_i A_i z_i^q`.
    pub fn b_neg(&self, q: u32) -> Mat<T> {
        let n = self.dim();
        let mut out = Mat::zeros(n, n);
        for (ai, zi) in self.a.iter().zip(&self.z) {
            let mut w = T::one();
            for _ in 0..q {
                w = w * zi.clone();
            }
            out = &out + &ai.scale(&w);
        }
        out
    }

    pub fn b2(&self) -> Mat<T> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| if i == j { self.t2[i].clone() } else { T::zero() })
    }

    /// Coefficients of `A(z) = Σ_{j ≥ -1} A_j z^{-j}`, for `j = -1 ..= top`.
    fn a_coeff(&self, j: i64) -> Mat<T> {
        match j {
            -1 => -&self.b2(),
            0 => -&self.b1,
            j if j >= 1 => self.b_neg((j - 1) as u32),
            _ => Mat::zeros(self.dim(), self.dim()),
        }
    }
}

/// Evaluation of the closed-form coefficient `H^(k)_ν` (amended reading).
pub fn omega_explicit<T: Field>(inst: &ClassicalInstance<T>, k: u32, nu: usize) -> Result<T> {
    omega_explicit_with(inst, k, nu, Reading::Amended)
}

/// [`omega_explicit`] with an explicit [`Reading`].
pub fn omega_explicit_with<T: Field>(inst: &ClassicalInstance<T>, k: u32, nu: usize, reading: Reading) -> Result<T> {
    let terms = omega_terms_with(inst.dim(), k, nu, reading)?;
    let b_neg: Vec<Mat<T>> = (0..3).map(|q| inst.b_neg(q)).collect();
    let t1 = inst.b1[(nu - 1, nu - 1)].clone();
    let mut total = T::zero();
    for t in &terms {
        let mut v = T::from_q(&t.scale);
        for e in &t.entries {
            let x = match *e {
                Entry::B1(a, b) => inst.b1[(a - 1, b - 1)].clone(),
                Entry::BNeg(q, a, b) => b_neg[q as usize][(a - 1, b - 1)].clone(),
            };
            v = v * x;
        }
        for _ in 0..t.t1_power {
            v = v * t1.clone();
        }
        for &(a, b, e) in &t.den {
            let d = inst.t2[a - 1].clone() - inst.t2[b - 1].clone();
            for _ in 0..e {
                v = v.div(&d);
            }
        }
        total = total + v;
    }
    Ok(total)
}

/// A truncated series `Σ_{m=0}^{M} C_m z^{-m}` with matrix coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MatSeries<T> {
    coeffs: Vec<Mat<T>>,
}

impl<T: Field> MatSeries<T> {
    pub fn new(coeffs: Vec<Mat<T>>) -> Self {
        assert!(!coeffs.is_empty());
        MatSeries { coeffs }
    }

    /// Highest retained order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &Mat<T> {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[Mat<T>] {
        &self.coeffs
    }

    /// Truncated product; orders beyond `min(M, M')` are discarded.
    pub fn mul(&self, o: &Self) -> Self {
        let m = self.order().min(o.order());
        let n = self.coeffs[0].rows();
        let coeffs = (0..=m)
            .map(|k| (0..=k).fold(Mat::zeros(n, n), |acc, i| &acc + &(&self.coeffs[i] * &o.coeffs[k - i])))
            .collect();
        MatSeries { coeffs }
    }

    /// Inverse of a series with identity leading coefficient.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.coeffs[0].rows();
        if self.coeffs[0] != Mat::identity(n) {
            return Err(Error::Invalid("series inverse requires leading identity".into()));
        }
        let mut inv: Vec<Mat<T>> = vec![Mat::identity(n)];
        for k in 1..=self.order() {
            let mut s: Mat<T> = Mat::zeros(n, n);
            for i in 1..=k {
                s = &s + &(&self.coeffs[i] * &inv[k - i]);
            }
            inv.push(-&s);
        }
        Ok(MatSeries { coeffs: inv })
    }

    /// `d/dz` as a list of coefficients of `z^{-m}` for `m = 0 ..= M + 1`.
    pub fn derivative(&self) -> Vec<Mat<T>> {
        let n = self.coeffs[0].rows();
        let mut out = vec![Mat::zeros(n, n)];
        for (m, c) in self.coeffs.iter().enumerate() {
            out.push(c.scale(&T::from_i64(-(m as i64))));
        }
        out
    }
}

/// The formal solution at infinity, `Ŷ = F D`, `T(z) = -T_2 z²/2 - T_1 z - T_0 log z`.
#[derive(Clone, Debug)]
pub struct FormalSolution<T> {
    pub f: MatSeries<T>,
    pub d: MatSeries<T>,
    pub t2: Mat<T>,
    pub t1: Mat<T>,
    pub t0: Mat<T>,
}

impl<T: Field> FormalSolution<T> {
    pub fn y_hat(&self) -> MatSeries<T> {
        self.f.mul(&self.d)
    }
}

/// Solve for `F`, `D`, `T` through order `z^{-M}`.
pub fn solve_formal_series<T: Field>(inst: &ClassicalInstance<T>, order: usize) -> Result<FormalSolution<T>> {
    if order == 0 {
        return Err(Error::Truncation("order must be at least 1".into()));
    }
    let n = inst.dim();
    let zero = || Mat::<T>::zeros(n, n);
    // F_0 .. F_{M+2}; L_j = (Σ_i A_i F_{j-i})_D for j = -1 ..= M + 1
    let top = order + 2;
    let mut f: Vec<Mat<T>> = vec![Mat::identity(n)];
    let mut l: Vec<Mat<T>> = Vec::new(); // l[j + 1] = L_j
    let a: Vec<Mat<T>> = (-1..=top as i64).map(|j| inst.a_coeff(j)).collect(); // a[j + 1] = A_j
    let big_l = |f: &Vec<Mat<T>>, j: usize| -> Mat<T> {
        // L_j with j ≥ 0, using F_0 .. F_j (the F_{j+1} term is off-diagonal)
        let mut s = zero();
        for i in 0..=j {
            s = &s + &(&a[i + 1] * &f[j - i]);
        }
        s.diag_part()
    };
    l.push(-&inst.b2());
    for m in 0..top {
        // L_m needs F up to F_m
        l.push(big_l(&f, m));
        let mut rhs = zero();
        for j in 0..=m {
            rhs = &rhs + &(&(&a[j + 1] * &f[m - j]) - &(&f[m - j] * &l[j + 1]));
        }
        if m >= 1 {
            rhs = &rhs + &f[m - 1].scale(&T::from_i64(m as i64 - 1));
        }
        let next = Mat::from_fn(n, n, |x, y| {
            if x == y {
                T::zero()
            } else {
                let d = inst.t2[x].clone() - inst.t2[y].clone();
                rhs[(x, y)].div(&d)
            }
        });
        f.push(next);
    }
    // log D = Σ_{m≥1} g_m z^{-m}, g_m = -L_{m+1}/m; D = exp(log D), entrywise on the diagonal
    let g: Vec<Mat<T>> = (0..=order)
        .map(|m| if m == 0 { zero() } else { l[m + 2].scale(&T::from_i64(-1).div(&T::from_i64(m as i64))) })
        .collect();
    let mut d: Vec<Mat<T>> = vec![Mat::identity(n)];
    for m in 1..=order {
        let mut s = zero();
        for k in 1..=m {
            s = &s + &(&g[k] * &d[m - k]).scale(&T::from_i64(k as i64));
        }
        d.push(s.scale(&T::one().div(&T::from_i64(m as i64))));
    }
    f.truncate(order + 1);
    Ok(FormalSolution {
        f: MatSeries::new(f),
        d: MatSeries::new(d),
        t2: inst.b2(),
        t1: -&l[1],
        t0: -&l[2],
    })
}

/// `H^(k)_ν` from the residue `ω = -res_{z=∞} tr Ŷ^{-1} ∂_z Ŷ d'T`, computed
/// with truncation order `M`.
pub fn omega_residue_at<T: Field>(inst: &ClassicalInstance<T>, k: u32, nu: usize, order: usize) -> Result<T> {
    if !(1..=2).contains(&k) || nu == 0 || nu > inst.dim() {
        return Err(Error::Invalid(format!("bad component (k={k}, ν={nu})")));
    }
    if order < k as usize + 1 {
        return Err(Error::Truncation(format!("order {order} too small for k={k}")));
    }
    let sol = solve_formal_series(inst, order)?;
    let y = sol.y_hat();
    let yinv = y.inverse()?;
    let dy = MatSeries::new(y.derivative()[..=order].to_vec());
    let prod = yinv.mul(&dy);
    // ∂T/∂t^(k)_ν = -z^k/k E_νν; res_{z=∞} g = -[z^{-1}] g
    let c = prod.coeff(k as usize + 1)[(nu - 1, nu - 1)].clone();
    Ok(c.div(&T::from_i64(-(k as i64))))
}

/// [`omega_residue_at`] checked for stability: three consecutive truncation
/// orders starting at `k + 2` must agree.
pub fn omega_residue<T: Field>(inst: &ClassicalInstance<T>, k: u32, nu: usize) -> Result<T> {
    let m = k as usize + 2;
    let v0 = omega_residue_at(inst, k, nu, m)?;
    for extra in 1..=2 {
        if omega_residue_at(inst, k, nu, m + extra)? != v0 {
            return Err(Error::Truncation(format!("residue unstable at order {}", m + extra)));
        }
    }
    Ok(v0)
}

/// Check `Ŷ' = A Ŷ - Ŷ T'` through order `z^{-(M-1)}`; returns the first
/// failing order.
pub fn check_defining_equation<T: Field>(inst: &ClassicalInstance<T>, sol: &FormalSolution<T>) -> std::result::Result<(), i64> {
    let y = sol.y_hat();
    let m = y.order();
    let n = inst.dim();
    let dy = y.derivative();
    // T'(z) = -T_2 z - T_1 - T_0/z
    let tp = |j: i64| -> Mat<T> {
        match j {
            -1 => -&sol.t2,
            0 => -&sol.t1,
            1 => -&sol.t0,
            _ => Mat::zeros(n, n),
        }
    };
    for power in -1..(m as i64) {
        // coefficient of z^{-power}
        let mut rhs: Mat<T> = Mat::zeros(n, n);
        for j in -1..=power {
            let l = (power - j) as usize;
            if l > m {
                continue;
            }
            let yl = y.coeff(l);
            rhs = &rhs + &(&(&inst.a_coeff(j) * yl) - &(yl * &tp(j)));
        }
        let lhs = if power >= 0 { dy[power as usize].clone() } else { Mat::zeros(n, n) };
        if lhs != rhs {
            return Err(power);
        }
    }
    Ok(())
}

/// Draw a random instance with integer entries in `[-3, 3]`, rejecting
/// coincident `B_2` diagonals. The diagonal of `B_1` is zeroed when
/// `b1_zero` is set.
pub fn random_instance(rng: &mut impl Rng, n: usize, sites: usize, b1_zero: bool) -> ClassicalInstance<BigRational> {
    let mut draw = || q(rng.gen_range(-3..=3));
    let a = (0..sites).map(|_| Mat::from_fn(n, n, |_, _| draw())).collect();
    let z = (0..sites).map(|_| draw()).collect();
    let b1 = if b1_zero { Mat::zeros(n, n) } else { Mat::from_fn(n, n, |_, _| draw()) };
    let t2 = loop {
        let t: Vec<BigRational> = (0..n).map(|_| draw()).collect();
        if (0..n).all(|i| (i + 1..n).all(|j| t[i] != t[j])) {
            break t;
        }
    };
    ClassicalInstance { a, z, b1, t2 }
}

/// A failed oracle comparison.
#[derive(Clone, Debug)]
pub struct OracleFailure {
    pub trial: usize,
    pub component: usize,
    pub explicit: String,
    pub residue: String,
    pub instance: String,
}

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub trials: usize,
    pub failures: Vec<OracleFailure>,
    pub elapsed_ms: u128,
}

impl OracleReport {
    pub fn passed(&self) -> usize {
        self.trials - self.failures.iter().map(|f| f.trial).collect::<std::collections::BTreeSet<_>>().len()
    }
}

fn dump(inst: &ClassicalInstance<BigRational>) -> String {
    let m = |x: &Mat<BigRational>| {
        let rows: Vec<String> = (0..x.rows())
            .map(|i| (0..x.cols()).map(|j| x[(i, j)].to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    };
    let a: Vec<String> = inst.a.iter().map(m).collect();
    let z: Vec<String> = inst.z.iter().map(|x| x.to_string()).collect();
    let t: Vec<String> = inst.t2.iter().map(|x| x.to_string()).collect();
    format!("A=[{}] z=[{}] B1={} t2=[{}]", a.join(", "), z.join(" "), m(&inst.b1), t.join(" "))
}

/// Compare the closed forms against the residue on `trials` random
/// instances. Each trial draws from its own stream derived from `seed`.
pub fn oracle_compare(trials: usize, seed: u64, n: usize, sites: usize, k: u32) -> Result<OracleReport> {
    oracle_compare_with(trials, seed, n, sites, k, Reading::Amended)
}

/// [`oracle_compare`] with an explicit [`Reading`].
pub fn oracle_compare_with(trials: usize, seed: u64, n: usize, sites: usize, k: u32, reading: Reading) -> Result<OracleReport> {
    omega_terms(n, k, 1)?;
    let start = Instant::now();
    let failures: Vec<OracleFailure> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Vec<OracleFailure>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial as u64 + 1);
            let inst = random_instance(&mut rng, n, sites, false);
            let mut out = Vec::new();
            for nu in 1..=n {
                let e = omega_explicit_with(&inst, k, nu, reading)?;
                let r = omega_residue(&inst, k, nu)?;
                if e != r {
                    out.push(OracleFailure {
                        trial,
                        component: nu,
                        explicit: e.to_string(),
                        residue: r.to_string(),
                        instance: dump(&inst),
                    });
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(OracleReport { trials, failures, elapsed_ms: start.elapsed().as_millis() })
}
