use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, LazyLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use parking_lot::RwLock;
use smallvec::SmallVec;

use super::mpoly::{MPoly, Mono};
use super::var::{Var, VarContext};
use crate::error::{Error, Result};


// Denominator factors are interned primitive polynomials ("atoms") with a
// positive leading coefficient and no monomial content; a bare variable is
// its own atom. Denominators are exponent vectors over atom ids, so common
// denominators are lcms of exponent vectors and never need a polynomial gcd.

struct AtomTable {
    polys: Vec<Arc<MPoly>>,
    var_of: Vec<Option<Var>>,
    index: HashMap<MPoly, u32>,
}

static ATOMS: LazyLock<RwLock<AtomTable>> =
    LazyLock::new(|| RwLock::new(AtomTable { polys: Vec::new(), var_of: Vec::new(), index: HashMap::new() }));

fn intern(p: MPoly) -> u32 {
    if let Some(&id) = ATOMS.read().index.get(&p) {
        return id;
    }
    let mut t = ATOMS.write();
    if let Some(&id) = t.index.get(&p) {
        return id;
    }
    let id = t.polys.len() as u32;
    let var = match p.terms() {
        [(m, _)] => m.iter().next().map(|(v, _)| v),
        _ => None,
    };
    t.polys.push(Arc::new(p.clone()));
    t.var_of.push(var);
    t.index.insert(p, id);
    id
}

fn atom(id: u32) -> Arc<MPoly> {
    ATOMS.read().polys[id as usize].clone()
}

fn atom_var(id: u32) -> Option<Var> {
    ATOMS.read().var_of[id as usize]
}

type Den = SmallVec<[(u32, u32); 4]>;

/// Split a nonzero polynomial as `c · Π atom^e`.
fn factor_into_atoms(p: &MPoly) -> (BigRational, Den) {
    let c = p.content();
    let q = p.scale(&(BigRational::one() / &c));
    let m = q.mono_content();
    let q = if m.is_one() { q } else { q.div_mono(&m) };
    let mut den: Den = SmallVec::new();
    for (v, e) in m.iter() {
        den.push((intern(MPoly::var(v)), e));
    }
    if q.as_constant().is_none() {
        den.push((intern(q), 1));
    }
    (c, normalize_den(den))
}

fn normalize_den(mut d: Den) -> Den {
    d.sort_unstable_by_key(|x| x.0);
    let mut out: Den = SmallVec::new();
    for (a, e) in d {
        match out.last_mut() {
            Some(last) if last.0 == a => last.1 += e,
            _ if e > 0 => out.push((a, e)),
            _ => {}
        }
    }
    out
}

fn den_mul(a: &Den, b: &Den) -> Den {
    let mut d: Den = a.clone();
    d.extend_from_slice(b);
    normalize_den(d)
}

fn den_lcm(a: &Den, b: &Den) -> Den {
    let mut out: Den = SmallVec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push(b[j]);
            j += 1;
        } else {
            out.push((a[i].0, a[i].1.max(b[j].1)));
            i += 1;
            j += 1;
        }
    }
    out
}

/// Polynomial `Π atom^(big_e - small_e)`.
fn den_cofactor(big: &Den, small: &Den) -> MPoly {
    let mut out = MPoly::one();
    for &(a, e) in big {
        let f = small.iter().find(|x| x.0 == a).map_or(0, |x| x.1);
        if e > f {
            out = &out * &atom(a).pow(e - f);
        }
    }
    out
}

fn den_expand(d: &Den) -> MPoly {
    den_cofactor(d, &SmallVec::new())
}

/// Exact rational function `num / Π atom^e` over `Q`.
///
/// Zero-testing is exact: a value is zero iff its numerator expands to the
/// zero polynomial. Representatives are not canonical; `PartialEq` compares
/// by subtraction.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: Den,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: MPoly::zero(), den: SmallVec::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { num: p, den: SmallVec::new() }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_poly(MPoly::from_i64(c))
    }

    pub fn from_q(c: BigRational) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_q(BigRational::new(n.into(), d.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(MPoly::var(v))
    }

    /// `n / d` for polynomials; errors on `d = 0`.
    pub fn from_polys(n: MPoly, d: &MPoly) -> Result<Self> {
        Self::from_poly(n).checked_div(&Self::from_poly(d.clone()))
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    /// Expanded denominator polynomial.
    pub fn denom(&self) -> MPoly {
        den_expand(&self.den)
    }

    /// Denominator factors `(polynomial, exponent)`, sorted by rendering.
    pub fn denom_factors(&self) -> Vec<(MPoly, u32)> {
        let mut v: Vec<(MPoly, u32)> = self.den.iter().map(|&(a, e)| ((*atom(a)).clone(), e)).collect();
        v.sort_by_key(|(p, _)| p.to_string());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `self = Σ_k c_k v^k` with `v`-free `c_k`, for a denominator free of `v`.
    pub fn coefficients_in(&self, v: Var) -> Result<Vec<(u32, RatFunc)>> {
        if self.den.iter().any(|&(a, _)| atom(a).degree_in(v) > 0) {
            return Err(Error::Invalid(format!("denominator depends on {v}")));
        }
        let mut by_power: std::collections::BTreeMap<u32, Vec<(Mono, BigRational)>> = Default::default();
        for (m, c) in self.num.terms() {
            let e = m.exponent(v);
            let rest = if e == 0 { m.clone() } else { m.div(&Mono(smallvec::smallvec![(v, e)])).unwrap() };
            by_power.entry(e).or_default().push((rest, c.clone()));
        }
        Ok(by_power.into_iter().map(|(e, ts)| (e, Self::make(MPoly::from_terms(ts), self.den.clone()))).collect())
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    /// The constant value, if this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v = self.num.vars();
        for &(a, _) in &self.den {
            v.extend(atom(a).vars());
        }
        v.sort();
        v.dedup();
        v
    }

    fn make(num: MPoly, den: Den) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let mut r = RatFunc { num, den };
        r.cancel_monomials();
        r
    }

    // Cancel bare-variable atoms against the numerator's monomial content.
    fn cancel_monomials(&mut self) {
        if self.den.is_empty() {
            return;
        }
        let mut content: Option<Mono> = None;
        let mut changed = false;
        for k in 0..self.den.len() {
            let (a, e) = self.den[k];
            let Some(v) = atom_var(a) else { continue };
            let c = content.get_or_insert_with(|| self.num.mono_content());
            let f = c.exponent(v).min(e);
            if f > 0 {
                let m = Mono(smallvec::smallvec![(v, f)]);
                self.num = self.num.div_mono(&m);
                *c = c.div(&m).unwrap();
                self.den[k].1 -= f;
                changed = true;
            }
        }
        if changed {
            self.den.retain(|x| x.1 > 0);
        }
    }

    /// Cancel every denominator atom that divides the numerator.
    pub fn reduce(&self) -> RatFunc {
        let mut num = self.num.clone();
        let mut den: Den = SmallVec::new();
        for &(a, e) in &self.den {
            let p = atom(a);
            let mut left = e;
            while left > 0 {
                match num.div_exact(&p) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.push((a, left));
            }
        }
        Self::make(num, den)
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (c, atoms) = factor_into_atoms(&other.num);
        let num = (&self.num * &den_expand(&other.den)).scale(&(BigRational::one() / c));
        Ok(Self::make(num, den_mul(&self.den, &atoms)))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        let mut out = RatFunc::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        Self::make(self.num.scale(c), self.den.clone())
    }

    pub fn mul_poly(&self, p: &MPoly) -> RatFunc {
        Self::make(&self.num * p, self.den.clone())
    }

    /// Exact partial derivative by the quotient rule.
    pub fn partial_derivative(&self, v: Var) -> RatFunc {
        // d(n / Π A_i^e_i) = (n' Π_S A_i - n Σ_S e_i A_i' Π_{S∖i} A_j) / (Π A^e · Π_S A_i)
        let mut moving: Vec<(u32, u32, Arc<MPoly>, MPoly)> = Vec::new();
        for &(a, e) in &self.den {
            let p = atom(a);
            let dp = p.derivative(v);
            if !dp.is_zero() {
                moving.push((a, e, p, dp));
            }
        }
        let dn = self.num.derivative(v);
        if moving.is_empty() {
            return Self::make(dn, self.den.clone());
        }
        let mut prod_all = MPoly::one();
        for (_, _, p, _) in &moving {
            prod_all = &prod_all * p;
        }
        let mut num = &dn * &prod_all;
        for (k, (_, e, _, dp)) in moving.iter().enumerate() {
            let mut t = dp.scale(&BigRational::from_integer((*e).into()));
            for (l, (_, _, q, _)) in moving.iter().enumerate() {
                if l != k {
                    t = &t * q;
                }
            }
            num = &num - &(&self.num * &t);
        }
        let extra: Den = moving.iter().map(|(a, _, _, _)| (*a, 1)).collect();
        Self::make(num, den_mul(&self.den, &extra))
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, at: &dyn Fn(Var) -> Option<BigRational>) -> Result<BigRational> {
        let missing = || {
            let vs = self.vars();
            let v = vs.into_iter().find(|&v| at(v).is_none());
            Error::Unassigned(v.map(|v| v.to_string()).unwrap_or_default())
        };
        let n = self.num.evaluate(at).ok_or_else(missing)?;
        let mut d = BigRational::one();
        for &(a, e) in &self.den {
            let x = atom(a).evaluate(at).ok_or_else(missing)?;
            if x.is_zero() {
                return Err(Error::Pole(atom(a).to_string()));
            }
            d *= num_traits::pow(x, e as usize);
        }
        Ok(n / d)
    }

    /// Rename variables (e.g. permute integration variables).
    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> RatFunc {
        let mut num = self.num.rename(f);
        let mut den: Den = SmallVec::new();
        let mut c = BigRational::one();
        for &(a, e) in &self.den {
            let p = atom(a).rename(f);
            let (ca, atoms) = factor_into_atoms(&p);
            c *= num_traits::pow(ca, e as usize);
            for (b, g) in atoms {
                den.push((b, g * e));
            }
        }
        if !c.is_one() {
            num = num.scale(&(BigRational::one() / c));
        }
        Self::make(num, normalize_den(den))
    }

    /// Substitute polynomials for variables.
    pub fn substitute(&self, at: &dyn Fn(Var) -> Option<MPoly>) -> Result<RatFunc> {
        let num = RatFunc::from_poly(self.num.substitute(at));
        let d = self.den.iter().fold(MPoly::one(), |acc, &(a, e)| &acc * &atom(a).substitute(at).pow(e));
        num.checked_div(&RatFunc::from_poly(d))
    }

    /// Check that every variable lies in the context.
    pub fn check_context(&self, ctx: &VarContext) -> Result<()> {
        for v in self.vars() {
            ctx.check_var(v)?;
        }
        Ok(())
    }

    fn add_impl(&self, other: &RatFunc, sign: bool) -> RatFunc {
        if other.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return if sign { other.clone() } else { -other };
        }
        if self.den == other.den {
            let num = if sign { &self.num + &other.num } else { &self.num - &other.num };
            return Self::make(num, self.den.clone());
        }
        let l = den_lcm(&self.den, &other.den);
        let a = &self.num * &den_cofactor(&l, &self.den);
        let b = &other.num * &den_cofactor(&l, &other.den);
        Self::make(if sign { &a + &b } else { &a - &b }, l)
    }

    /// Canonical text: numerator over a product of atoms sorted by rendering.
    pub fn render(&self) -> String {
        let r = self.reduce();
        if r.den.is_empty() {
            return r.num.to_string();
        }
        let facs = r.denom_factors();
        let dens: Vec<String> = facs
            .iter()
            .map(|(p, e)| {
                let base = if p.len() > 1 { format!("({p})") } else { p.to_string() };
                if *e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        let num = if r.num.len() > 1 { format!("({})", r.num) } else { r.num.to_string() };
        format!("{num}/({})", dens.join("*"))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        (self - other).is_zero()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o, true)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self.add_impl(o, false)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::make(&self.num * &o.num, den_mul(&self.den, &o.den))
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $f(self, o: RatFunc) -> RatFunc {
                (&self).$f(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl crate::linalg::Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        RatFunc::from_i64(v)
    }
    fn from_q(v: &BigRational) -> Self {
        RatFunc::from_q(v.clone())
    }
    fn div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("division by zero")
    }
}

/// Accumulates many rational functions, grouping numerators by denominator
/// so the lcm combination happens once per distinct denominator.
#[derive(Default, Debug, Clone)]
pub struct RfSum {
    groups: HashMap<Den, MPoly>,
}

impl RfSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, r: &RatFunc) {
        if r.num.is_zero() {
            return;
        }
        match self.groups.get_mut(&r.den) {
            Some(n) => *n = &*n + &r.num,
            None => {
                self.groups.insert(r.den.clone(), r.num.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, r: &RatFunc, p: &MPoly) {
        if r.num.is_zero() || p.is_zero() {
            return;
        }
        let t = &r.num * p;
        match self.groups.get_mut(&r.den) {
            Some(n) => *n = &*n + &t,
            None => {
                self.groups.insert(r.den.clone(), t);
            }
        }
    }

    /// Merge another accumulator into this one.
    pub fn absorb(&mut self, other: RfSum) {
        for (d, n) in other.groups {
            match self.groups.get_mut(&d) {
                Some(m) => *m = &*m + &n,
                None => {
                    self.groups.insert(d, n);
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.values().all(|n| n.is_zero())
    }

    pub fn finish(self) -> RatFunc {
        let mut parts: Vec<(Den, MPoly)> = self.groups.into_iter().filter(|(_, n)| !n.is_zero()).collect();
        if parts.is_empty() {
            return RatFunc::zero();
        }
        if parts.len() == 1 {
            let (d, n) = parts.pop().unwrap();
            return RatFunc::make(n, d);
        }
        let l = parts.iter().fold(Den::new(), |acc, (d, _)| den_lcm(&acc, d));
        let mut num = MPoly::zero();
        for (d, n) in &parts {
            num = &num + &(n * &den_cofactor(&l, d));
        }
        RatFunc::make(num, l)
    }
}

/// Arithmetic operation selector for [`ratfunc_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Mul,
    Div,
    Neg,
}

/// Rational-function arithmetic; `Neg` ignores `b`.
pub fn ratfunc_arith(op: RatOp, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Mul => a * b,
        RatOp::Div => a.checked_div(b)?,
        RatOp::Neg => -a,
    })
}

/// Exact zero test.
pub fn ratfunc_is_zero(a: &RatFunc) -> bool {
    a.is_zero()
}
