//! Hypergeometric integral solutions: the master function (through its
//! logarithmic derivatives), the `V_m`-valued form `ω_m`, and an exact model
//! of the pairing `⟨φ⟩ = ∫_Γ Φ^{1/κ} φ`.
//!
//! The pairing is never integrated. Two properties of the cycle are assumed:
//! `⟨·⟩` is invariant under permuting integration variables of the same
//! colour, and total derivatives `∂/∂t (Φ^{1/κ} ψ)` integrate to zero. So an
//! identity `⟨D⟩ = 0` is certified by exhibiting `D ≡ Σ λ_i κ∇(ψ_i)` modulo
//! symmetrization, which is a statement about rational functions.
//!
//! [`lemma_check`] and [`theorem_check`] cover `sl_3` without finite sites.

use std::collections::BTreeMap;
use std::time::Instant;

use itertools::Itertools;
use num_rational::BigRational;
use rayon::prelude::*;

pub mod diffsum;

pub use diffsum::DiffSum;

use crate::error::{Error, Result};
use crate::fock::{self, BasisVec, VecV};
use crate::hamiltonians::{h1_explicit, h2_explicit, H2Reading};
use crate::ncalg::{Algebra, Gen, NCPoly};
use crate::ratfunc::{MPoly, RatFunc, RfSum, Var};
use crate::rootsys::{cartan_entry, cartan_inverse, Root, RootSystem};

fn t(p: usize, a: usize) -> Var {
    Var::T(p as u8, a as u8)
}

fn tv(p: usize, a: usize) -> RatFunc {
    RatFunc::var(t(p, a))
}

fn int(n: i64) -> RatFunc {
    RatFunc::from_i64(n)
}

fn r(s: &str) -> RatFunc {
    crate::ratfunc::parse_ratfunc(s).expect("valid literal")
}

/// `log Φ` as `Σ c · log(arg) + P`, with constant (in `t`, `z`, `γ`, `μ`)
/// coefficients `c` and a polynomial exponent `P`.
#[derive(Clone, Debug)]
pub struct MasterFunction {
    n: usize,
    sites: usize,
    m: Vec<u32>,
    logs: Vec<(RatFunc, MPoly)>,
    exponent: MPoly,
}

fn lam(i: usize, p: usize) -> MPoly {
    MPoly::var(Var::Lambda(i as u8, p as u8))
}

impl MasterFunction {
    pub fn new(n: usize, sites: usize, m: &[u32]) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        if m.len() != n - 1 {
            return Err(Error::Invalid(format!("m = {m:?} needs {} entries", n - 1)));
        }
        let z = |i: usize| MPoly::var(Var::Z(i as u8));
        let ainv = |p: usize, q: usize| cartan_inverse(n, p, q);
        // (Λ^(i), X) where (X, α_q) = x(q)
        let pair_with = |i: usize, x: &dyn Fn(usize) -> MPoly| {
            let mut s = MPoly::zero();
            for p in 1..n {
                for q in 1..n {
                    s = &s + &(&lam(i, p) * &x(q)).scale(&ainv(p, q));
                }
            }
            s
        };
        let mut logs = Vec::new();
        let mut exponent = MPoly::zero();
        for i in 1..=sites {
            for j in i + 1..=sites {
                let c = pair_with(i, &|q| lam(j, q));
                logs.push((RatFunc::from_poly(c), &z(i) - &z(j)));
            }
            let g1 = pair_with(i, &|q| MPoly::var(Var::Gamma(q as u8)));
            let g2 = pair_with(i, &|q| MPoly::var(Var::Mu(q as u8)));
            exponent = &exponent - &(&(&g1 * &z(i)) + &(&g2 * &z(i).pow(2)).scale(&BigRational::new(1.into(), 2.into())));
        }
        for p in 1..n {
            for a in 1..=m[p - 1] as usize {
                let tp = MPoly::var(t(p, a));
                for j in 1..=sites {
                    logs.push((-&RatFunc::from_poly(lam(j, p)), &tp - &z(j)));
                }
                for q in p + 1..n {
                    let c = cartan_entry(p, q);
                    if c != 0 {
                        for b in 1..=m[q - 1] as usize {
                            logs.push((int(c), &tp - &MPoly::var(t(q, b))));
                        }
                    }
                }
                for b in a + 1..=m[p - 1] as usize {
                    logs.push((int(2), &tp - &MPoly::var(t(p, b))));
                }
                let e = &(&MPoly::var(Var::Gamma(p as u8)) * &tp)
                    + &(&MPoly::var(Var::Mu(p as u8)) * &tp.pow(2)).scale(&BigRational::new(1.into(), 2.into()));
                exponent = &exponent + &e;
            }
        }
        Ok(MasterFunction { n, sites, m: m.to_vec(), logs, exponent })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    /// All integration variables `t^(p)_a`.
    pub fn t_vars(&self) -> Vec<Var> {
        (1..self.n).flat_map(|p| (1..=self.m[p - 1] as usize).map(move |a| t(p, a))).collect()
    }

    /// Variables along which the log-derivative is available.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = self.t_vars();
        out.extend((1..=self.sites).map(|i| Var::Z(i as u8)));
        out.extend((1..self.n).map(|p| Var::Gamma(p as u8)));
        out.extend((1..self.n).map(|p| Var::Mu(p as u8)));
        out
    }

    /// `∂ log Φ / ∂v` for `v` an integration variable, `z_i`, `γ_p` or `μ_p`.
    pub fn log_derivative(&self, v: Var) -> Result<RatFunc> {
        if !self.variables().contains(&v) {
            return Err(Error::Invalid(format!("no derivative along {v}")));
        }
        let mut s = RfSum::new();
        for (c, arg) in &self.logs {
            let d = arg.derivative(v);
            if !d.is_zero() {
                s.add(&(c * &RatFunc::from_poly(d)).checked_div(&RatFunc::from_poly(arg.clone()))?);
            }
        }
        s.add(&RatFunc::from_poly(self.exponent.derivative(v)));
        Ok(s.finish())
    }

    /// `κ∇_v ψ = κ ∂ψ/∂v + (∂ log Φ/∂v) ψ` for an integration variable `v`.
    pub fn nabla(&self, v: Var, psi: &RatFunc) -> Result<RatFunc> {
        let k = RatFunc::var(Var::Kappa);
        Ok(&(&k * &psi.partial_derivative(v)) + &(&self.log_derivative(v)? * psi))
    }

    /// [`Self::nabla`] as an unsummed [`DiffSum`], one summand per term of
    /// the log-derivative.
    pub fn nabla_sum(&self, v: Var, psi: &RatFunc) -> Result<DiffSum> {
        if !self.t_vars().contains(&v) {
            return Err(Error::Invalid(format!("{v} is not an integration variable")));
        }
        let mut out = DiffSum::new();
        out.push(&(&RatFunc::var(Var::Kappa) * &psi.partial_derivative(v)))?;
        for (c, arg) in &self.logs {
            let d = arg.derivative(v);
            if !d.is_zero() {
                out.push(&(&(c * &RatFunc::from_poly(d)) * psi).checked_div(&RatFunc::from_poly(arg.clone()))?)?;
            }
        }
        out.push(&(&RatFunc::from_poly(self.exponent.derivative(v)) * psi))?;
        Ok(out)
    }
}

/// One permutation per colour: `σ[p-1][a-1]` is the image of `t^(p)_a`.
fn colour_permutations(m: &[u32]) -> Vec<Vec<Vec<usize>>> {
    let groups: Vec<Vec<Vec<usize>>> = m.iter().map(|&mp| (1..=mp as usize).permutations(mp as usize).collect()).collect();
    if groups.is_empty() {
        return vec![vec![]];
    }
    groups.iter().map(|g| g.iter().cloned()).multi_cartesian_product().collect()
}

fn permute(sigma: &[Vec<usize>]) -> impl Fn(Var) -> Var + '_ {
    move |v| match v {
        Var::T(p, a) if (p as usize) <= sigma.len() => Var::T(p, sigma[p as usize - 1][a as usize - 1] as u8),
        other => other,
    }
}

/// Average over the permutations of each colour of integration variables.
pub fn symmetrize(f: &RatFunc, m: &[u32]) -> RatFunc {
    let perms = colour_permutations(m);
    let parts: Vec<RatFunc> = perms.par_iter().map(|sigma| f.rename(&permute(sigma))).collect();
    let mut s = RfSum::new();
    for x in &parts {
        s.add(x);
    }
    s.finish().checked_div(&int(perms.len() as i64)).expect("nonzero group order")
}

/// [`symmetrize`] for an unsummed [`DiffSum`].
pub fn symmetrize_sum(f: &DiffSum, m: &[u32]) -> DiffSum {
    let perms = colour_permutations(m);
    let parts: Vec<DiffSum> = perms.par_iter().map(|sigma| f.rename(&permute(sigma))).collect();
    let mut s = DiffSum::new();
    for x in parts {
        s.absorb(x);
    }
    s.scale(&RatFunc::frac(1, perms.len() as i64))
}

/// `S(m)`: exponent vectors `K` over the positive roots (in root order) with
/// `Σ_{α ∋ α_p} k_α = m_p`.
pub fn enumerate_s(rs: &RootSystem, m: &[u32]) -> Vec<Vec<u32>> {
    fn go(roots: &[Root], at: usize, rest: &mut Vec<u32>, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if at == roots.len() {
            if rest.iter().all(|&x| x == 0) {
                out.push(cur.clone());
            }
            return;
        }
        let r = roots[at];
        let span = r.start as usize - 1..r.end as usize;
        let max = rest[span.clone()].iter().copied().min().unwrap_or(0);
        for e in 0..=max {
            rest[span.clone()].iter_mut().for_each(|x| *x -= e);
            cur.push(e);
            go(roots, at + 1, rest, cur, out);
            cur.pop();
            rest[span.clone()].iter_mut().for_each(|x| *x += e);
        }
    }
    let mut out = Vec::new();
    go(rs.positive_roots(), 0, &mut m.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// One factor `e_{-α}(t^α_a)`: the root and the indices `a_i, …, a_j`.
pub type Slot = (Root, Vec<usize>);

/// `A(K)`: assignments of the integration indices to the factors, one per
/// unordered choice (copies of the same root are labelled by increasing
/// first index). Factors are listed in root order.
pub fn enumerate_a(rs: &RootSystem, m: &[u32], k: &[u32]) -> Vec<Vec<Slot>> {
    let slots: Vec<Root> = rs.positive_roots().iter().zip(k).flat_map(|(&r, &e)| std::iter::repeat_n(r, e as usize)).collect();
    let mut out: Vec<Vec<Slot>> = vec![slots.iter().map(|&r| (r, Vec::new())).collect()];
    for p in 1..=m.len() {
        let users: Vec<usize> = (0..slots.len()).filter(|&s| slots[s].contains(p)).collect();
        if users.len() != m[p - 1] as usize {
            return Vec::new();
        }
        let mut next = Vec::new();
        for partial in &out {
            for perm in (1..=users.len()).permutations(users.len()) {
                let mut x = partial.clone();
                for (u, &s) in users.iter().enumerate() {
                    x[s].1.push(perm[u]);
                }
                next.push(x);
            }
        }
        out = next;
    }
    out.retain(|x| x.windows(2).all(|w| w[0].0 != w[1].0 || w[0].1[0] < w[1].1[0]));
    out
}

/// The operator `e_{-α}(t^α_a)`.
fn slot_operator(alg: &Algebra, (root, a): &Slot) -> Result<NCPoly> {
    let (i, j) = (root.start as usize, root.end as usize);
    let mut pre = RatFunc::one();
    for q in i + 1..=j {
        pre = pre.checked_div(&(&tv(q, a[q - i]) - &tv(q - 1, a[q - 1 - i])))?;
    }
    let mut inner = -&alg.gen_poly(Gen::InfLower(*root));
    for s in 1..=alg.sites() {
        let c = RatFunc::one().checked_div(&(&tv(i, a[0]) - &RatFunc::var(Var::Z(s as u8))))?;
        inner = &inner + &alg.gen_poly(Gen::SiteLower(s as u8, *root)).scale(&c);
    }
    Ok(inner.scale(&pre))
}

/// `ω_m = Σ_{K ∈ S(m)} f_K 𝐯`, expanded on the basis of `V`.
pub fn build_omega_m(alg: &Algebra, m: &[u32]) -> Result<VecV> {
    let rs = alg.root_system();
    if m.len() != rs.rank() {
        return Err(Error::Invalid(format!("m = {m:?} needs {} entries", rs.rank())));
    }
    let mut op = NCPoly::zero();
    for k in enumerate_s(rs, m) {
        for assignment in enumerate_a(rs, m, &k) {
            let mut prod = NCPoly::scalar(RatFunc::one());
            for slot in &assignment {
                prod = alg.mul(&prod, &slot_operator(alg, slot)?);
            }
            op = &op + &prod;
        }
    }
    Ok(fock::vector_from(alg, &op))
}

// ---------------------------------------------------------------------------
// sl_3, no finite sites

/// `φ_k = Π_{a ≤ k} 1/(t^(1)_a - t^(2)_a)`; zero outside `0..=min(m)`.
pub fn phi(k: i64, m1: u32, m2: u32) -> RatFunc {
    if k < 0 || k > m1.min(m2) as i64 {
        return RatFunc::zero();
    }
    (1..=k as usize).fold(RatFunc::one(), |acc, a| acc.checked_div(&(&tv(1, a) - &tv(2, a))).expect("distinct variables"))
}

/// The eight reduction relations for `⟨t φ_k⟩` and `⟨t² φ_k⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    /// `(μ_1+μ_2)⟨t^(1)_b φ_k⟩`, `b ≤ k`.
    T1Paired,
    /// `(μ_1+μ_2)⟨t^(2)_b φ_k⟩`, `b ≤ k`.
    T2Paired,
    /// `μ_1⟨t^(1)_b φ_k⟩`, `b > k`.
    T1Free,
    /// `μ_2⟨t^(2)_b φ_k⟩`, `b > k`.
    T2Free,
    /// `(μ_1+μ_2)⟨(t^(1)_b)² φ_k⟩`, `b ≤ k`.
    T1SqPaired,
    /// `(μ_1+μ_2)⟨(t^(2)_b)² φ_k⟩`, `b ≤ k`.
    T2SqPaired,
    /// `μ_1⟨(t^(1)_b)² φ_k⟩`, `b > k`.
    T1SqFree,
    /// `μ_2⟨(t^(2)_b)² φ_k⟩`, `b > k`.
    T2SqFree,
}

pub const ALL_RELATIONS: [Relation; 8] = [
    Relation::T1Paired,
    Relation::T2Paired,
    Relation::T1Free,
    Relation::T2Free,
    Relation::T1SqPaired,
    Relation::T2SqPaired,
    Relation::T1SqFree,
    Relation::T2SqFree,
];

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::T1Paired => "t1-paired",
            Relation::T2Paired => "t2-paired",
            Relation::T1Free => "t1-free",
            Relation::T2Free => "t2-free",
            Relation::T1SqPaired => "t1sq-paired",
            Relation::T2SqPaired => "t2sq-paired",
            Relation::T1SqFree => "t1sq-free",
            Relation::T2SqFree => "t2sq-free",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ALL_RELATIONS.into_iter().find(|r| r.name() == s).ok_or_else(|| Error::Parse(format!("unknown relation {s:?}")))
    }

    /// Colour `p` of the variable `t^(p)_b` and its power.
    pub fn variable(self) -> (usize, u32) {
        match self {
            Relation::T1Paired | Relation::T1Free => (1, 1),
            Relation::T2Paired | Relation::T2Free => (2, 1),
            Relation::T1SqPaired | Relation::T1SqFree => (1, 2),
            Relation::T2SqPaired | Relation::T2SqFree => (2, 2),
        }
    }

    pub fn paired(self) -> bool {
        matches!(self, Relation::T1Paired | Relation::T2Paired | Relation::T1SqPaired | Relation::T2SqPaired)
    }

    /// Admissible `b` for given `m` and `k`.
    pub fn b_range(self, m1: u32, m2: u32, k: u32) -> std::ops::RangeInclusive<u32> {
        let (p, _) = self.variable();
        if self.paired() {
            1..=k
        } else {
            k + 1..=if p == 1 { m1 } else { m2 }
        }
    }

    fn scale(self) -> RatFunc {
        match self {
            Relation::T1Free | Relation::T1SqFree => r("mu1"),
            Relation::T2Free | Relation::T2SqFree => r("mu2"),
            _ => r("mu1 + mu2"),
        }
    }

    /// Right-hand side `Σ_j c_j ⟨φ_j⟩` as pairs `(j, c_j)`.
    pub fn rhs(self, m1: u32, m2: u32, k: u32) -> Vec<(i64, RatFunc)> {
        let (m1i, m2i, ki) = (m1 as i64, m2 as i64, k as i64);
        let g1 = r("g1/mu1 + (g1+g2)/(mu1+mu2)");
        let g2 = r("g2/mu2 + (g1+g2)/(mu1+mu2)");
        let sq = r("(g1+g2)^2/(mu1+mu2)");
        let kap = RatFunc::var(Var::Kappa);
        match self {
            Relation::T1Paired => vec![(ki, r("-g1 - g2")), (ki - 1, r("mu2"))],
            Relation::T2Paired => vec![(ki, r("-g1 - g2")), (ki - 1, r("-mu1"))],
            Relation::T1Free => vec![(ki + 1, int(m2i - ki)), (ki, r("-g1"))],
            Relation::T2Free => vec![(ki + 1, int(ki - m1i)), (ki, r("-g2"))],
            Relation::T1SqPaired => {
                let c = &(&(&int(1 - m1i) - &kap) + &r(&format!("mu2/mu1*{}", m2i - ki + 1))) + &sq;
                vec![(ki, c), (ki - 1, -&(&r("mu2") * &g1))]
            }
            Relation::T2SqPaired => {
                let c = &(&(&int(1 - m2i) - &kap) + &r(&format!("mu1/mu2*{}", m1i - ki + 1))) + &sq;
                vec![(ki, c), (ki - 1, &r("mu1") * &g2)]
            }
            Relation::T1SqFree => {
                let c = &(&r(&format!("{}*mu2/(mu1+mu2) + g1^2/mu1", m2i - ki)) + &int(1 - m1i)) - &kap;
                vec![(ki + 1, -&(&int(m2i - ki) * &g1)), (ki, c)]
            }
            Relation::T2SqFree => {
                let c = &(&r(&format!("{}*mu1/(mu1+mu2) + g2^2/mu2", m1i - ki)) + &int(1 - m2i)) - &kap;
                vec![(ki + 1, &int(m1i - ki) * &g2), (ki, c)]
            }
        }
    }

    /// `⟨t^(p)_b{}^e φ_k⟩` reduced to `Σ_j c_j ⟨φ_j⟩`.
    pub fn reduce(self, m1: u32, m2: u32, k: u32) -> Vec<(i64, RatFunc)> {
        let s = self.scale();
        self.rhs(m1, m2, k).into_iter().map(|(j, c)| (j, c.checked_div(&s).expect("nonzero"))).collect()
    }

    /// `scale · (t^(p)_b)^e φ_k - Σ_j c_j φ_j` as an integrand.
    fn defect(self, m1: u32, m2: u32, k: u32, b: u32) -> Result<DiffSum> {
        let (p, e) = self.variable();
        let mut d = DiffSum::new();
        d.push(&(&(&self.scale() * &tv(p, b as usize).pow(e)) * &phi(k as i64, m1, m2)))?;
        for (j, c) in self.rhs(m1, m2, k) {
            d.push(&-&(&c * &phi(j, m1, m2)))?;
        }
        Ok(d)
    }

    /// The total-derivative combination `Σ λ_i κ∇(ψ_i)` certifying the
    /// relation at `(k, b)`.
    fn certificate(self, mf: &MasterFunction, k: u32, b: u32) -> Result<DiffSum> {
        let (m1, m2) = (mf.m[0], mf.m[1]);
        let (ki, bu, ku) = (k as i64, b as usize, k as usize);
        let ph = |j: i64| phi(j, m1, m2);
        let nab = |p: usize, c: usize, psi: &RatFunc| mf.nabla_sum(t(p, c), psi);
        // κ(∇^(1)_c + ∇^(2)_c) φ_j
        let c_pair = |j: i64, c: usize| -> Result<DiffSum> {
            let mut x = nab(1, c, &ph(j))?;
            x.absorb(nab(2, c, &ph(j))?);
            Ok(x)
        };
        let tphi = |p: usize| &tv(p, bu) * &ph(ki);
        let mut parts: Vec<(RatFunc, DiffSum)> = Vec::new();
        match self {
            Relation::T1Paired | Relation::T2Paired => parts.push((int(1), c_pair(ki, bu)?)),
            Relation::T1Free => parts.push((int(1), nab(1, bu, &ph(ki))?)),
            Relation::T2Free => parts.push((int(1), nab(2, bu, &ph(ki))?)),
            Relation::T1SqPaired | Relation::T2SqPaired => {
                parts.push((int(1), nab(1, bu, &tphi(1))?));
                parts.push((int(1), nab(2, bu, &tphi(2))?));
                parts.push((r("-(g1+g2)/(mu1+mu2)"), c_pair(ki, bu)?));
                let (c3, c4) = if self == Relation::T1SqPaired { (r("mu2/mu1"), int(1)) } else { (int(-1), r("-mu1/mu2")) };
                parts.push((c3, nab(1, ku, &ph(ki - 1))?));
                parts.push((c4, nab(2, ku, &ph(ki - 1))?));
            }
            Relation::T1SqFree | Relation::T2SqFree => {
                let (p, g, sign, other) = if self == Relation::T1SqFree { (1, "g1/mu1", 1, m2) } else { (2, "g2/mu2", -1, m1) };
                parts.push((int(1), nab(p, bu, &tphi(p))?));
                parts.push((-&r(g), nab(p, bu, &ph(ki))?));
                if k < m1.min(m2) {
                    parts.push((r(&format!("{}/(mu1+mu2)", sign * (other as i64 - ki))), c_pair(ki + 1, ku + 1)?));
                }
            }
        }
        let mut out = DiffSum::new();
        for (c, x) in parts {
            out.absorb(x.scale(&c));
        }
        Ok(out)
    }
}

/// Outcome of one relation at one `(k, b)`.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub relation: Relation,
    pub k: u32,
    pub b: u32,
    pub holds: bool,
    pub elapsed_ms: u128,
    /// Symmetrized remainder when the relation fails.
    pub witness: String,
}

fn check_m(m1: u32, m2: u32) -> Result<()> {
    if m1 > 3 || m2 > 3 {
        Err(Error::Invalid(format!("m = ({m1}, {m2}) exceeds the supported range (≤ 3)")))
    } else {
        Ok(())
    }
}

fn residual(mf: &MasterFunction, relation: Relation, k: u32, b: u32) -> Result<DiffSum> {
    let (m1, m2) = (mf.m[0], mf.m[1]);
    let mut rest = relation.defect(m1, m2, k, b)?;
    rest.absorb(relation.certificate(mf, k, b)?.scale(&int(-1)));
    Ok(symmetrize_sum(&rest, &[m1, m2]))
}

/// The symmetrized integrand `scale·t^e φ_k - rhs - certificate` of one
/// relation at `(k, b)`; the relation holds iff this is zero.
pub fn lemma_residual(m1: u32, m2: u32, relation: Relation, k: u32, b: u32) -> Result<DiffSum> {
    check_m(m1, m2)?;
    if k > m1.min(m2) {
        return Err(Error::Invalid(format!("k = {k} exceeds min(m) = {}", m1.min(m2))));
    }
    if !relation.b_range(m1, m2, k).contains(&b) {
        return Err(Error::Invalid(format!("b = {b} outside {:?} for {}", relation.b_range(m1, m2, k), relation.name())));
    }
    residual(&MasterFunction::new(3, 0, &[m1, m2])?, relation, k, b)
}

/// Verify one relation at every admissible `(k, b)`, or at a given `k`.
pub fn lemma_check(m1: u32, m2: u32, relation: Relation, k: Option<u32>) -> Result<Vec<RelationReport>> {
    check_m(m1, m2)?;
    let mf = MasterFunction::new(3, 0, &[m1, m2])?;
    let ks: Vec<u32> = match k {
        Some(k) if k > m1.min(m2) => return Err(Error::Invalid(format!("k = {k} exceeds min(m) = {}", m1.min(m2)))),
        Some(k) => vec![k],
        None => (0..=m1.min(m2)).collect(),
    };
    let cases: Vec<(u32, u32)> = ks.iter().flat_map(|&k| relation.b_range(m1, m2, k).map(move |b| (k, b))).collect();
    cases
        .par_iter()
        .map(|&(k, b)| {
            let start = Instant::now();
            let s = residual(&mf, relation, k, b)?;
            let holds = s.is_zero();
            Ok(RelationReport {
                relation,
                k,
                b,
                holds,
                elapsed_ms: start.elapsed().as_millis(),
                witness: if holds { String::new() } else { s.to_ratfunc().reduce().to_string() },
            })
        })
        .collect()
}

/// A flow of the theorem check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntFlow {
    Gamma(usize),
    Mu(usize),
}

impl IntFlow {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "g1" => Ok(IntFlow::Gamma(1)),
            "g2" => Ok(IntFlow::Gamma(2)),
            "mu1" => Ok(IntFlow::Mu(1)),
            "mu2" => Ok(IntFlow::Mu(2)),
            _ => Err(Error::Parse(format!("unknown flow {s:?} (g1, g2, mu1, mu2)"))),
        }
    }
}

impl std::fmt::Display for IntFlow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IntFlow::Gamma(p) => write!(f, "g{p}"),
            IntFlow::Mu(p) => write!(f, "mu{p}"),
        }
    }
}

/// Formal combinations `Σ c · ⟨φ_k⟩ w` with `w` a basis vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhiVec {
    terms: BTreeMap<(BasisVec, i64), RatFunc>,
}

impl PhiVec {
    pub fn add(&mut self, w: BasisVec, k: i64, c: RatFunc) {
        let e = self.terms.entry((w, k)).or_insert_with(RatFunc::zero);
        *e = &*e + &c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn sub(&self, other: &PhiVec) -> PhiVec {
        let mut out = self.clone();
        for ((w, k), c) in &other.terms {
            out.add(w.clone(), *k, -c);
        }
        out
    }

    pub fn render(&self, alg: &Algebra) -> String {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((w, k), c)| format!("({}) <phi_{k}> {}", c.reduce(), w.display(alg)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// `u` expressed through `⟨φ_k⟩`: for each basis vector its `k` and
/// constant coefficient `c` with coefficient `c⟨φ_k⟩`.
pub fn u_in_phi_basis(alg: &Algebra, m1: u32, m2: u32) -> Result<Vec<(BasisVec, i64, RatFunc)>> {
    let omega = build_omega_m(alg, &[m1, m2])?;
    let rs = alg.root_system();
    let i12 = rs.ordinal(Root::new(1, 2));
    let mut out = Vec::new();
    for (w, f) in omega.terms() {
        let k = w.inf[i12] as i64;
        let c = symmetrize(f, &[m1, m2]).checked_div(&symmetrize(&phi(k, m1, m2), &[m1, m2]))?.reduce();
        if c.vars().iter().any(|v| matches!(v, Var::T(..))) {
            return Err(Error::Invalid(format!("coefficient of {} is not a multiple of <phi_{k}>", w.display(alg))));
        }
        out.push((w.clone(), k, c));
    }
    Ok(out)
}

/// Outcome of one theorem flow.
#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub flow: IntFlow,
    pub m: (u32, u32),
    pub holds: bool,
    pub elapsed_ms: u128,
    pub witness: String,
}

/// Left side `κ∂u/∂(flow)` and right side `𝓗 u` of the system on the
/// integral solution, both as combinations of `⟨φ_k⟩` symbols.
pub fn theorem_sides(m1: u32, m2: u32, flow: IntFlow) -> Result<(PhiVec, PhiVec)> {
    let alg = Algebra::new(3, 0)?;
    let h = match flow {
        IntFlow::Gamma(p) => h1_explicit(&alg, p)?,
        IntFlow::Mu(p) => h2_explicit(&alg, p, H2Reading::Mirrored)?,
    };
    theorem_sides_with(&alg, m1, m2, flow, &h)
}

/// [`theorem_sides`] with a caller-supplied operator on the right.
pub fn theorem_sides_with(alg: &Algebra, m1: u32, m2: u32, flow: IntFlow, h: &NCPoly) -> Result<(PhiVec, PhiVec)> {
    check_m(m1, m2)?;
    if alg.n() != 3 || alg.sites() != 0 {
        return Err(Error::Invalid("the theorem check needs sl_3 without finite sites".into()));
    }
    let u = u_in_phi_basis(alg, m1, m2)?;
    let (p, power) = match flow {
        IntFlow::Gamma(p) => (p, 1),
        IntFlow::Mu(p) => (p, 2),
    };
    let (paired, free) = match (p, power) {
        (1, 1) => (Relation::T1Paired, Relation::T1Free),
        (2, 1) => (Relation::T2Paired, Relation::T2Free),
        (1, 2) => (Relation::T1SqPaired, Relation::T1SqFree),
        (2, 2) => (Relation::T2SqPaired, Relation::T2SqFree),
        _ => return Err(Error::Invalid(format!("flow {flow}"))),
    };
    let mp = if p == 1 { m1 } else { m2 };
    let half = if power == 2 { RatFunc::frac(1, 2) } else { RatFunc::one() };
    let mut lhs = PhiVec::default();
    for (w, k, c) in &u {
        let ku = *k as u32;
        // Σ_b ⟨(t^(p)_b)^e / e · φ_k⟩
        for (rel, count) in [(paired, ku), (free, mp - ku)] {
            if count == 0 {
                continue;
            }
            for (j, x) in rel.reduce(m1, m2, ku) {
                if (0..=m1.min(m2) as i64).contains(&j) {
                    lhs.add(w.clone(), j, &(&(c * &x) * &half) * &int(count as i64));
                }
            }
        }
        if let IntFlow::Mu(p) = flow {
            let kappa = RatFunc::var(Var::Kappa);
            let d = fock::d_mu(alg, p, &VecV::basis(w.clone()));
            for (w2, x) in d.terms() {
                lhs.add(w2.clone(), *k, &(&kappa * c) * x);
            }
        }
    }
    let mut rhs = PhiVec::default();
    for (w, k, c) in &u {
        let v = fock::act(alg, h, &VecV::basis(w.clone()));
        for (w2, x) in v.terms() {
            rhs.add(w2.clone(), *k, c * x);
        }
    }
    Ok((lhs, rhs))
}

/// Check `κ∂u/∂(flow) = 𝓗 u` for `sl_3` without finite sites.
pub fn theorem_check(m1: u32, m2: u32, flow: IntFlow) -> Result<TheoremReport> {
    let start = Instant::now();
    let (lhs, rhs) = theorem_sides(m1, m2, flow)?;
    let diff = lhs.sub(&rhs);
    let holds = diff.is_zero();
    let alg = Algebra::new(3, 0)?;
    Ok(TheoremReport {
        flow,
        m: (m1, m2),
        holds,
        elapsed_ms: start.elapsed().as_millis(),
        witness: if holds { String::new() } else { diff.render(&alg) },
    })
}
