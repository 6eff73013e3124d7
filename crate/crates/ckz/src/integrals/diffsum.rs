//! Sums of fractions whose denominators are products of differences of
//! integration variables, with an exact zero test that never forms a global
//! common denominator.
//!
//! The test eliminates one variable `x` at a time: over the field of the
//! remaining variables every summand has a partial fraction expansion
//! `P(x) + Σ c_{y,r} / (x - y)^r`, and because that expansion is unique the
//! sum vanishes iff every coefficient of `P` and every `c_{y,r}` (summed over
//! all summands) vanishes. Those are again sums of the same shape in one
//! variable fewer.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ratfunc::{MPoly, RatFunc, RfSum, Var};

/// `(a, b)` with `a < b`, standing for the factor `a - b`.
type Pair = (Var, Var);
/// Sorted `(pair, exponent)` list.
type PDen = Vec<(Pair, u32)>;

fn is_active(v: Var) -> bool {
    matches!(v, Var::T(..))
}

/// `p = s · (a - b)` with `a < b` active variables.
fn as_difference(p: &MPoly) -> Option<(Pair, i64)> {
    let [(m1, c1), (m2, c2)] = p.terms() else { return None };
    let single = |m: &crate::ratfunc::Mono| {
        let vs: Vec<(Var, u32)> = m.iter().collect();
        match vs[..] {
            [(v, 1)] if is_active(v) => Some(v),
            _ => None,
        }
    };
    let (v1, v2) = (single(m1)?, single(m2)?);
    let one = BigRational::from_integer(1.into());
    if (c1 + c2) != BigRational::from_integer(0.into()) || (c1 != &one && c1 != &-one.clone()) {
        return None;
    }
    let s1 = if c1 == &one { 1 } else { -1 };
    // p = s1·(v1 - v2)
    Some(if v1 < v2 { ((v1, v2), s1) } else { ((v2, v1), -s1) })
}

/// Canonical pair for `a - b`, with the sign relating the two.
fn pair(a: Var, b: Var) -> (Pair, i64) {
    if a < b {
        ((a, b), 1)
    } else {
        ((b, a), -1)
    }
}

fn normalize(mut d: PDen) -> PDen {
    d.sort_unstable();
    let mut out: PDen = Vec::with_capacity(d.len());
    for (p, e) in d {
        match out.last_mut() {
            Some(last) if last.0 == p => last.1 += e,
            _ => out.push((p, e)),
        }
    }
    out
}

fn signed(r: &RatFunc, s: i64) -> RatFunc {
    if s < 0 {
        -r
    } else {
        r.clone()
    }
}

fn int(n: i64) -> RatFunc {
    RatFunc::from_i64(n)
}

fn binom(n: u32, k: u32) -> i64 {
    let b: BigInt = binomial(BigInt::from(n), BigInt::from(k));
    i64::try_from(b).expect("small binomial")
}

/// `Σ num / Π (a - b)^e`, grouped by denominator.
#[derive(Clone, Debug, Default)]
pub struct DiffSum {
    groups: HashMap<PDen, RatFunc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Key {
    /// Coefficient of `x^q` in the polynomial part.
    Poly(u32),
    /// Coefficient of `1/(x - y)^r`.
    Pole(Var, u32),
}

impl DiffSum {
    pub fn new() -> Self {
        Self::default()
    }

    fn insert(&mut self, den: PDen, num: RatFunc) {
        if num.is_zero() {
            return;
        }
        match self.groups.get_mut(&den) {
            Some(n) => *n = &*n + &num,
            None => {
                self.groups.insert(den, num);
            }
        }
    }

    /// Add a rational function whose denominator factors are either
    /// differences of integration variables or free of them.
    pub fn push(&mut self, r: &RatFunc) -> Result<()> {
        if r.is_zero() {
            return Ok(());
        }
        let mut den = PDen::new();
        let mut sign = 1;
        let mut rest = RatFunc::one();
        for (p, e) in r.denom_factors() {
            if let Some((pr, s)) = as_difference(&p) {
                den.push((pr, e));
                if e % 2 == 1 {
                    sign *= s;
                }
            } else if p.vars().into_iter().any(is_active) {
                return Err(Error::Invalid(format!("denominator factor {p} is not a difference of integration variables")));
            } else {
                rest = &rest * &RatFunc::from_poly(p.pow(e));
            }
        }
        let num = RatFunc::from_poly(r.numer().clone()).checked_div(&rest)?;
        self.insert(normalize(den), signed(&num, sign));
        Ok(())
    }

    pub fn absorb(&mut self, other: DiffSum) {
        for (d, n) in other.groups {
            self.insert(d, n);
        }
    }

    pub fn scale(&self, c: &RatFunc) -> DiffSum {
        let mut out = DiffSum::new();
        for (d, n) in &self.groups {
            out.insert(d.clone(), n * c);
        }
        out
    }

    /// Rename integration variables (a permutation of them).
    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> DiffSum {
        let mut out = DiffSum::new();
        for (d, n) in &self.groups {
            let mut sign = 1;
            let den: PDen = d
                .iter()
                .map(|&((a, b), e)| {
                    let (p, s) = pair(f(a), f(b));
                    if e % 2 == 1 {
                        sign *= s;
                    }
                    (p, e)
                })
                .collect();
            out.insert(normalize(den), signed(&n.rename(f), sign));
        }
        out
    }

    /// Number of distinct denominators.
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// The sum as a single rational function (a common denominator; slow for
    /// large sums).
    pub fn to_ratfunc(&self) -> RatFunc {
        let mut s = RfSum::new();
        for (d, n) in &self.groups {
            let den = d.iter().fold(RatFunc::one(), |acc, &((a, b), e)| {
                &acc * &(&RatFunc::var(a) - &RatFunc::var(b)).pow(e)
            });
            s.add(&n.checked_div(&den).expect("nonzero difference"));
        }
        s.finish()
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        let live: Vec<(&PDen, &RatFunc)> = self.groups.iter().filter(|(_, n)| !n.is_zero()).collect();
        if live.is_empty() {
            return true;
        }
        // The most frequent variable tends to split the sum most evenly.
        let mut counts: HashMap<Var, usize> = HashMap::new();
        for (d, _) in &live {
            for &((a, b), _) in d.iter() {
                *counts.entry(a).or_default() += 1;
                *counts.entry(b).or_default() += 1;
            }
        }
        let Some(x) = counts.into_iter().max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0))).map(|(v, _)| v) else {
            // only the pole-free group is left
            return false;
        };
        let mut parts: HashMap<Key, DiffSum> = HashMap::new();
        for (d, n) in live {
            expand(x, d, n, &mut parts);
        }
        parts.into_par_iter().all(|(_, s)| s.is_zero())
    }
}

/// Partial fractions in `x` of `num / den`, accumulated into `out`.
fn expand(x: Var, den: &PDen, num: &RatFunc, out: &mut HashMap<Key, DiffSum>) {
    // x-factors written as s·(x - y)
    let mut poles: Vec<(Var, i64, u32)> = Vec::new();
    let mut rest = PDen::new();
    for &((a, b), e) in den {
        if a == x {
            poles.push((b, 1, e));
        } else if b == x {
            poles.push((a, -1, e));
        } else {
            rest.push(((a, b), e));
        }
    }
    let coeffs = num.coefficients_in(x).expect("numerator denominators are free of integration variables");
    let mut add = |k: Key, d: PDen, n: RatFunc| out.entry(k).or_default().insert(normalize(d), n);
    if poles.is_empty() {
        for (k, c) in coeffs {
            add(Key::Poly(k), rest.clone(), c);
        }
        return;
    }
    let total: u32 = poles.iter().map(|p| p.2).sum();
    let sign: i64 = poles.iter().map(|&(_, s, e)| if e % 2 == 1 { s } else { 1 }).product();
    let deg = coeffs.iter().map(|c| c.0).max().unwrap_or(0);

    // Polynomial part: expand at x = ∞ with u = 1/x,
    // Π (x - y)^{-e} = x^{-E} Π Σ_s C(e+s-1, s) y^s u^s.
    if deg >= total {
        let top = (deg - total) as usize;
        let mut series: Vec<RatFunc> = vec![RatFunc::one()];
        series.resize(top + 1, RatFunc::zero());
        for &(y, _, e) in &poles {
            let mut next = vec![RatFunc::zero(); top + 1];
            for (i, si) in series.iter().enumerate() {
                if si.is_zero() {
                    continue;
                }
                for s in 0..=top - i {
                    let c = &int(binom(e + s as u32 - 1, s as u32)) * &RatFunc::var(y).pow(s as u32);
                    next[i + s] = &next[i + s] + &(si * &c);
                }
            }
            series = next;
        }
        for (k, c) in &coeffs {
            if *k < total {
                continue;
            }
            for q in 0..=(k - total) {
                let s = (k - total - q) as usize;
                add(Key::Poly(q), rest.clone(), signed(&(c * &series[s]), sign));
            }
        }
    }

    // Principal part at each pole x = y, with x = y + h.
    for (j, &(y, sj, ej)) in poles.iter().enumerate() {
        let order = ej as usize;
        // numerator: Σ_s h^s Σ_k C(k, s) y^{k-s} c_k
        let mut series: Vec<Vec<(PDen, RatFunc)>> = vec![Vec::new(); order];
        for (s, slot) in series.iter_mut().enumerate() {
            let mut acc = RatFunc::zero();
            for (k, c) in &coeffs {
                if (*k as usize) >= s {
                    let f = &int(binom(*k, s as u32)) * &RatFunc::var(y).pow(k - s as u32);
                    acc = &acc + &(c * &f);
                }
            }
            if !acc.is_zero() {
                slot.push((PDen::new(), acc));
            }
        }
        // other poles: (s_l (h + y - y_l))^{-e_l}
        //   = s_l^{e_l} Σ_s (-1)^s C(e_l+s-1, s) h^s (y - y_l)^{-e_l-s}
        let mut pre_sign = if ej % 2 == 1 { sj } else { 1 };
        for (l, &(yl, sl, el)) in poles.iter().enumerate() {
            if l == j {
                continue;
            }
            if el % 2 == 1 {
                pre_sign *= sl;
            }
            let (pr, ps) = pair(y, yl);
            let mut next: Vec<Vec<(PDen, RatFunc)>> = vec![Vec::new(); order];
            for (i, terms) in series.iter().enumerate() {
                for s in 0..order - i {
                    let e = el + s as u32;
                    let mut c = int(binom(e - 1, s as u32) * if s % 2 == 1 { -1 } else { 1 });
                    if e % 2 == 1 && ps < 0 {
                        c = -&c;
                    }
                    for (d, n) in terms {
                        let mut d2 = d.clone();
                        d2.push((pr, e));
                        next[i + s].push((d2, n * &c));
                    }
                }
            }
            series = next;
        }
        // c_{y,r} = [h^{e_j - r}]
        for r in 1..=ej {
            for (d, n) in &series[(ej - r) as usize] {
                let mut d2 = rest.clone();
                d2.extend_from_slice(d);
                add(Key::Pole(y, r), d2, signed(n, pre_sign));
            }
        }
    }
}
