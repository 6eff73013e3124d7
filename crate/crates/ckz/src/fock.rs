//! The tensor module `V = V_1 ⊗ ⋯ ⊗ V_n ⊗ V^(∞)`.
//!
//! Each finite site carries a Verma module with symbolic highest weight
//! (`h^(i)_p v_i = Λ^(i)_p v_i`, variable `L{i}_{p}`); the infinity site is
//! the Fock module of the oscillator pairs `e_{±α}[1]`, generated by a vacuum
//! killed by every `e_α[1]`. Basis vectors are lowering monomials in PBW order
//! applied to `𝐯 = v_1 ⊗ ⋯ ⊗ v_n ⊗ v_∞`, and operators act through the normal
//! ordering of [`Algebra`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncalg::{Algebra, Gen, NCPoly, Word};
use crate::ratfunc::{RatFunc, RfSum, Var};
use crate::rootsys::cartan_entry;

/// A lowering monomial applied to `𝐯`: exponents over the positive roots
/// (in root order) for each finite site and for infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisVec {
    pub sites: Vec<Vec<u32>>,
    pub inf: Vec<u32>,
}

impl BasisVec {
    /// The cyclic vector `𝐯`.
    pub fn vacuum(alg: &Algebra) -> Self {
        let k = alg.root_system().num_positive();
        BasisVec { sites: vec![vec![0; k]; alg.sites()], inf: vec![0; k] }
    }

    /// Read a word consisting of lowering generators only; `None` if some
    /// other generator occurs.
    pub fn from_word(alg: &Algebra, w: &[u16]) -> Option<Self> {
        let rs = alg.root_system();
        let mut b = Self::vacuum(alg);
        for &c in w {
            match alg.gen(c) {
                Gen::SiteLower(i, r) => b.sites[i as usize - 1][rs.ordinal(r)] += 1,
                Gen::InfLower(r) => b.inf[rs.ordinal(r)] += 1,
                _ => return None,
            }
        }
        Some(b)
    }

    /// The PBW word creating this vector from `𝐯`.
    pub fn word(&self, alg: &Algebra) -> Word {
        let rs = alg.root_system();
        let mut w = Word::new();
        let mut push = |g: Gen, e: u32| {
            for _ in 0..e {
                w.push(alg.code(g));
            }
        };
        for (i, ex) in self.sites.iter().enumerate() {
            for (k, &e) in ex.iter().enumerate() {
                push(Gen::SiteLower(i as u8 + 1, rs.root(k)), e);
            }
        }
        for (k, &e) in self.inf.iter().enumerate() {
            push(Gen::InfLower(rs.root(k)), e);
        }
        w
    }

    /// Total lowering content `m` with `Σ m_p α_p` the weight drop.
    pub fn content(&self, alg: &Algebra) -> Vec<u32> {
        let rs = alg.root_system();
        let mut m = vec![0u32; rs.rank()];
        for ex in self.sites.iter().chain(std::iter::once(&self.inf)) {
            for (k, &e) in ex.iter().enumerate() {
                let r = rs.root(k);
                for p in r.start..=r.end {
                    m[p as usize - 1] += e;
                }
            }
        }
        m
    }

    pub fn display(&self, alg: &Algebra) -> String {
        let w = self.word(alg);
        if w.is_empty() {
            "v".to_string()
        } else {
            format!("{} v", alg.word_text(&w))
        }
    }
}

/// A vector of `V` with rational-function coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VecV {
    terms: BTreeMap<BasisVec, RatFunc>,
}

impl VecV {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: BasisVec) -> Self {
        let mut v = Self::zero();
        v.add_term(b, RatFunc::one());
        v
    }

    pub fn vacuum(alg: &Algebra) -> Self {
        Self::basis(BasisVec::vacuum(alg))
    }

    pub fn add_term(&mut self, b: BasisVec, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisVec, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &BasisVec) -> RatFunc {
        self.terms.get(b).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &RatFunc) -> VecV {
        let mut out = VecV::zero();
        for (b, x) in &self.terms {
            out.add_term(b.clone(), x * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&BasisVec, &RatFunc) -> RatFunc) -> VecV {
        let mut out = VecV::zero();
        for (b, x) in &self.terms {
            out.add_term(b.clone(), f(b, x));
        }
        out
    }

    pub fn render(&self, alg: &Algebra) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms.iter().map(|(b, c)| format!("({c}) * {}", b.display(alg))).collect::<Vec<_>>().join("\n")
    }
}

impl Add for &VecV {
    type Output = VecV;
    fn add(self, o: &VecV) -> VecV {
        let mut out = self.clone();
        for (b, c) in &o.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }
}

impl Sub for &VecV {
    type Output = VecV;
    fn sub(self, o: &VecV) -> VecV {
        self + &-o
    }
}

impl Neg for &VecV {
    type Output = VecV;
    fn neg(self) -> VecV {
        self.map_coeffs(|_, c| -c)
    }
}

impl fmt::Display for BasisVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}|{:?}", self.sites, self.inf)
    }
}

/// Reduce a normal-ordered word applied to `𝐯`: raising operators kill it,
/// Cartan elements give their highest-weight values.
fn project(alg: &Algebra, w: &[u16]) -> Option<(RatFunc, BasisVec)> {
    let mut c = RatFunc::one();
    let mut lowers = Word::new();
    for &code in w {
        match alg.gen(code) {
            Gen::SiteLower(..) | Gen::InfLower(_) => lowers.push(code),
            Gen::SiteCartan(i, p) => c = &c * &RatFunc::var(Var::Lambda(i, p)),
            Gen::SiteRaise(..) | Gen::InfRaise(_) => return None,
        }
    }
    Some((c, BasisVec::from_word(alg, &lowers)?))
}

/// Action of an element on a vector.
pub fn act(alg: &Algebra, op: &NCPoly, v: &VecV) -> VecV {
    let parts: Vec<VecV> = v
        .terms
        .par_iter()
        .map(|(b, c)| {
            let prod = alg.mul(op, &NCPoly::monomial(b.word(alg), c.clone()));
            let mut out = VecV::zero();
            for (w, x) in prod.terms() {
                if let Some((s, b)) = project(alg, w) {
                    out.add_term(b, x * &s);
                }
            }
            out
        })
        .collect();
    parts.iter().fold(VecV::zero(), |acc, x| &acc + x)
}

/// A vector given as an element applied to `𝐯`, e.g. from
/// [`Algebra::parse_table`].
pub fn vector_from(alg: &Algebra, op: &NCPoly) -> VecV {
    act(alg, op, &VecV::vacuum(alg))
}

/// `h^(∞)_p[0] = -Σ_α (α(h_p)/μ_α) e_{-α}[1] e_α[1]`.
pub fn h_inf_zero(alg: &Algebra, p: usize) -> NCPoly {
    let mut out = NCPoly::zero();
    for &r in alg.root_system().positive_roots() {
        let a = r.eval_h(p);
        if a != 0 {
            let c = RatFunc::from_i64(-a).checked_div(&RatFunc::from_poly(crate::ncalg::mu_of(r))).expect("μ_α ≠ 0");
            out = &out + &alg.word_poly(c, &[Gen::InfLower(r), Gen::InfRaise(r)]);
        }
    }
    out
}

/// `Σ_i h^(i)_p + h^(∞)_p[0]`.
pub fn total_cartan(alg: &Algebra, p: usize) -> NCPoly {
    let mut out = h_inf_zero(alg, p);
    for i in 1..=alg.sites() {
        out = &out + &alg.gen_poly(Gen::SiteCartan(i as u8, p as u8));
    }
    out
}

/// `(Λ - α(m))(h_p)` with `Λ(h_p) = Σ_i Λ^(i)_p`.
pub fn weight_value(alg: &Algebra, m: &[u32], p: usize) -> RatFunc {
    let mut c = RatFunc::zero();
    for i in 1..=alg.sites() {
        c = &c + &RatFunc::var(Var::Lambda(i as u8, p as u8));
    }
    let drop: i64 = m.iter().enumerate().map(|(q, &mq)| mq as i64 * cartan_entry(q + 1, p)).sum();
    &c - &RatFunc::from_i64(drop)
}

/// Whether `b` satisfies the weight equation of `V_m` for every `h_p`.
pub fn satisfies_weight(alg: &Algebra, m: &[u32], b: &BasisVec) -> bool {
    let v = VecV::basis(b.clone());
    (1..alg.n()).all(|p| act(alg, &total_cartan(alg, p), &v) == v.scale(&weight_value(alg, m, p)))
}

/// All basis vectors of the weight space `V_m`, each checked against the
/// weight equation.
pub fn weight_space_basis(alg: &Algebra, m: &[u32]) -> Result<Vec<BasisVec>> {
    let rs = alg.root_system();
    if m.len() != rs.rank() {
        return Err(Error::Invalid(format!("weight {m:?} needs {} entries", rs.rank())));
    }
    // slots: (site or None for infinity, root ordinal)
    let mut slots = Vec::new();
    for i in 0..alg.sites() {
        for k in 0..rs.num_positive() {
            slots.push((Some(i), k));
        }
    }
    for k in 0..rs.num_positive() {
        slots.push((None, k));
    }
    let mut out = Vec::new();
    let mut cur = BasisVec::vacuum(alg);
    let mut rest: Vec<u32> = m.to_vec();
    fill(alg, &slots, 0, &mut rest, &mut cur, &mut out);
    for b in &out {
        if !satisfies_weight(alg, m, b) {
            return Err(Error::Invalid(format!("basis vector {} fails the weight equation", b.display(alg))));
        }
    }
    Ok(out)
}

fn fill(alg: &Algebra, slots: &[(Option<usize>, usize)], at: usize, rest: &mut Vec<u32>, cur: &mut BasisVec, out: &mut Vec<BasisVec>) {
    if at == slots.len() {
        if rest.iter().all(|&x| x == 0) {
            out.push(cur.clone());
        }
        return;
    }
    let (site, k) = slots[at];
    let r = alg.root_system().root(k);
    let span = r.start as usize - 1..r.end as usize;
    let max = rest[span.clone()].iter().copied().min().unwrap_or(0);
    for e in 0..=max {
        for x in &mut rest[span.clone()] {
            *x -= e;
        }
        match site {
            Some(i) => cur.sites[i][k] = e,
            None => cur.inf[k] = e,
        }
        fill(alg, slots, at + 1, rest, cur, out);
        for x in &mut rest[span.clone()] {
            *x += e;
        }
    }
    match site {
        Some(i) => cur.sites[i][k] = 0,
        None => cur.inf[k] = 0,
    }
}

/// `∂/∂γ_k`: coefficients only (`v_∞` and the currents do not depend on `γ`).
pub fn d_gamma(k: usize, v: &VecV) -> VecV {
    v.map_coeffs(|_, c| c.partial_derivative(Var::Gamma(k as u8)))
}

/// `∂/∂μ_k`: coefficient derivative plus `½ Σ_{α ∋ α_k} n_α/μ_α` on a basis
/// vector with infinity exponents `n_α`.
pub fn d_mu(alg: &Algebra, k: usize, v: &VecV) -> VecV {
    let rs = alg.root_system();
    v.map_coeffs(|b, c| {
        let mut d = c.partial_derivative(Var::Mu(k as u8));
        let mut s = RfSum::new();
        for (idx, &e) in b.inf.iter().enumerate() {
            let r = rs.root(idx);
            if e > 0 && r.contains(k) {
                let mu = RatFunc::from_poly(crate::ncalg::mu_of(r));
                s.add(&RatFunc::frac(e as i64, 2).checked_div(&mu).expect("μ_α ≠ 0"));
            }
        }
        if !s.is_empty() {
            d = &d + &(c * &s.finish());
        }
        d
    })
}
