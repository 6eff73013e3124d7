//! Gaudin operators, the confluent Hamiltonians `𝓗^(1)_p`, `𝓗^(2)_p`, and
//! compatibility brackets.
//!
//! Two independent constructions of `𝓗^(k)_p` are provided: the explicit
//! closed-form displays ([`h1_explicit`], [`h2_explicit`]) and the
//! quantization of the classical one-forms ([`quantize_oneform`]).

use std::time::Instant;

use rayon::prelude::*;

use crate::classical::{omega_terms, Entry, OmegaTerm};
use crate::error::{Error, Result};
use crate::ncalg::{gamma_of, mu_of, Algebra, Gen, NCPoly};
use crate::ratfunc::{RatFunc, Var};
use crate::rootsys::{epsilon, w_diag, Elem, Root, SRoot};

fn rq(n: i64, d: i64) -> RatFunc {
    RatFunc::frac(n, d)
}

fn mu(r: Root) -> RatFunc {
    RatFunc::from_poly(mu_of(r))
}

fn gamma(r: Root) -> RatFunc {
    RatFunc::from_poly(gamma_of(r))
}

fn z(i: usize) -> RatFunc {
    RatFunc::var(Var::Z(i as u8))
}

/// Coefficient vector of a signed combination of roots over the simple roots.
fn coeffs(n: usize, parts: &[(i32, Root)]) -> Vec<i32> {
    let mut v = vec![0i32; n - 1];
    for &(s, r) in parts {
        for p in r.start..=r.end {
            v[p as usize - 1] += s;
        }
    }
    v
}

/// The signed root with the given coefficient vector, if there is one.
fn as_sroot(v: &[i32]) -> Option<SRoot> {
    let nz: Vec<usize> = (0..v.len()).filter(|&k| v[k] != 0).collect();
    let (&a, &b) = (nz.first()?, nz.last()?);
    let s = v[a];
    if s.abs() != 1 || nz.len() != b - a + 1 || nz.iter().any(|&k| v[k] != s) {
        return None;
    }
    let r = Root::new(a + 1, b + 1);
    Some(if s > 0 { SRoot::pos(r) } else { SRoot::neg(r) })
}

/// Operators built from generators of one algebra.
pub struct Builder<'a> {
    alg: &'a Algebra,
}

impl<'a> Builder<'a> {
    pub fn new(alg: &'a Algebra) -> Self {
        Builder { alg }
    }

    fn n(&self) -> usize {
        self.alg.n()
    }

    /// Product of factors, normal-ordered.
    pub fn prod(&self, factors: &[NCPoly]) -> NCPoly {
        let mut it = factors.iter();
        let first = match it.next() {
            Some(f) => f.clone(),
            None => return NCPoly::scalar(RatFunc::one()),
        };
        it.fold(first, |acc, f| self.alg.mul(&acc, f))
    }

    /// `e^(∞)_{±α}[1]`.
    pub fn inf(&self, r: SRoot) -> NCPoly {
        self.alg.gen_poly(Gen::inf_gen(r))
    }

    /// `Σ_i c_i x^(i)` for a site element `x`.
    fn site_sum(&self, x: Elem, weight: impl Fn(usize) -> RatFunc) -> NCPoly {
        let mut out = NCPoly::zero();
        for i in 1..=self.alg.sites() {
            out = &out + &self.alg.gen_poly(Gen::site_gen(i, x)).scale(&weight(i));
        }
        out
    }

    /// `X_{±α} = Σ_i x^(i)_{±α}`.
    pub fn big(&self, r: SRoot) -> NCPoly {
        self.site_sum(r.elem(), |_| RatFunc::one())
    }

    /// `X_{±α}(-1) = Σ_i z_i x^(i)_{±α}`.
    pub fn big_m1(&self, r: SRoot) -> NCPoly {
        self.site_sum(r.elem(), z)
    }

    /// `H_α = Σ_i h^(i)_α`.
    pub fn big_h(&self, r: Root) -> NCPoly {
        let mut out = NCPoly::zero();
        for p in r.start..=r.end {
            out = &out + &self.site_sum(Elem::H(p as usize), |_| RatFunc::one());
        }
        out
    }

    /// `Σ_q (w_q)_{aa} h^(i)_q`, i.e. the `(a, a)` entry of site `i`'s
    /// Cartan part expressed through `h`.
    fn site_diag(&self, i: usize, a: usize) -> NCPoly {
        let n = self.n();
        let mut out = NCPoly::zero();
        for qq in 1..n {
            let c = w_diag(n, qq, a);
            out = &out + &self.alg.gen_poly(Gen::SiteCartan(i as u8, qq as u8)).scale(&RatFunc::from_q(c));
        }
        out
    }

    /// `Σ_q (w_q)_{aa} γ_q`, the diagonal entry `(B_1)_{aa}`.
    pub fn t1(&self, a: usize) -> RatFunc {
        let n = self.n();
        let mut out = RatFunc::zero();
        for qq in 1..n {
            out = &out + &RatFunc::var(Var::Gamma(qq as u8)).scale(&w_diag(n, qq, a));
        }
        out
    }

    /// `t^(2)_a - t^(2)_b` as a sum of `μ`'s.
    pub fn t2_diff(&self, a: usize, b: usize) -> RatFunc {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => mu(Root::new(a, b - 1)),
            std::cmp::Ordering::Greater => -&mu(Root::new(b, a - 1)),
            std::cmp::Ordering::Equal => RatFunc::zero(),
        }
    }

    /// The operator substituted for a classical matrix entry.
    pub fn entry_operator(&self, e: Entry) -> NCPoly {
        let (a, b) = e.indices();
        let sroot = || {
            if a < b {
                SRoot::pos(Root::new(a, b - 1))
            } else {
                SRoot::neg(Root::new(b, a - 1))
            }
        };
        match e {
            Entry::B1(..) => {
                if a == b {
                    NCPoly::scalar(self.t1(a))
                } else {
                    self.inf(sroot())
                }
            }
            Entry::BNeg(power, ..) => {
                let mut out = NCPoly::zero();
                for i in 1..=self.alg.sites() {
                    let x = if a == b { self.site_diag(i, a) } else { self.alg.gen_poly(Gen::site_gen(i, sroot().elem())) };
                    out = &out + &x.scale(&z(i).pow(power));
                }
                out
            }
        }
    }

    /// Quantize one classical monomial: entries `(B)_{ab}` with `a ≤ b` go
    /// to the right, the rest to the left (relative order kept).
    pub fn quantize_term(&self, t: &OmegaTerm, j: usize) -> NCPoly {
        if self.alg.sites() == 0 && t.entries.iter().any(|e| matches!(e, Entry::BNeg(..))) {
            return NCPoly::zero();
        }
        let mut c = RatFunc::from_q(t.scale.clone());
        for &(a, b, e) in &t.den {
            c = c.checked_div(&self.t2_diff(a, b).pow(e)).expect("distinct t2");
        }
        c = &c * &self.t1(j).pow(t.t1_power);
        let (left, right): (Vec<Entry>, Vec<Entry>) = t.entries.iter().partition(|e| {
            let (a, b) = e.indices();
            a > b
        });
        let factors: Vec<NCPoly> = left.into_iter().chain(right).map(|e| self.entry_operator(e)).collect();
        self.prod(&factors).scale(&c)
    }

    /// `H̄^(k)_j`: the quantized coefficient of `dt^(k)_j`.
    pub fn h_bar(&self, k: u32, j: usize) -> Result<NCPoly> {
        let terms = omega_terms(self.n(), k, j)?;
        let parts: Vec<NCPoly> = terms.par_iter().map(|t| self.quantize_term(t, j)).collect();
        Ok(parts.iter().fold(NCPoly::zero(), |acc, x| &acc + x))
    }

    /// `Σ_{α,β∈J_p, α-β∈Δ_+} μ_{α-β}/(μ_α² μ_β) e_{-α}[1] e_α[1]`.
    pub fn complement(&self, p: usize) -> NCPoly {
        let rs = self.alg.root_system();
        let mut out = NCPoly::zero();
        for &a in rs.j_set(p) {
            for &b in rs.j_set(p) {
                if let Some(d) = a.sub(b).filter(|d| d.positive) {
                    let c = mu(d.root).checked_div(&(&mu(a).pow(2) * &mu(b))).unwrap();
                    let t = self.prod(&[self.inf(SRoot::neg(a)), self.inf(SRoot::pos(a))]);
                    out = &out + &t.scale(&c);
                }
            }
        }
        out
    }
}

/// `G^(i)_{-1}`.
pub fn gaudin(alg: &Algebra, i: usize) -> Result<NCPoly> {
    alg.check_site(i)?;
    let b = Builder::new(alg);
    let n = alg.n();
    let mut out = NCPoly::zero();
    for j in 1..=alg.sites() {
        if j != i {
            let c = RatFunc::one().checked_div(&(&z(i) - &z(j)))?;
            out = &out + &alg.casimir(i, j).scale(&c);
        }
    }
    for p in 1..n {
        let c = &RatFunc::var(Var::Gamma(p as u8)) + &(&z(i) * &RatFunc::var(Var::Mu(p as u8)));
        out = &out - &alg.w_site(i, p).scale(&c);
    }
    for &r in alg.root_system().positive_roots() {
        for s in [SRoot::pos(r), SRoot::neg(r)] {
            let t = b.prod(&[b.inf(s), alg.gen_poly(Gen::site_gen(i, s.negate().elem()))]);
            out = &out - &t;
        }
    }
    Ok(out)
}

fn check_p(alg: &Algebra, p: usize) -> Result<()> {
    if p == 0 || p >= alg.n() {
        Err(Error::Invalid(format!("p = {p} out of range 1..{}", alg.n())))
    } else {
        Ok(())
    }
}

/// `𝓗^(1)_p` from the explicit closed-form display.
pub fn h1_explicit(alg: &Algebra, p: usize) -> Result<NCPoly> {
    check_p(alg, p)?;
    let b = Builder::new(alg);
    let rs = alg.root_system();
    let mut out = NCPoly::zero();
    for i in 1..=alg.sites() {
        out = &out - &alg.w_site(i, p).scale(&z(i));
    }
    for &a in rs.j_set(p) {
        let (pa, na) = (SRoot::pos(a), SRoot::neg(a));
        let mixed = &b.prod(&[b.inf(na), b.big(pa)]) + &b.prod(&[b.inf(pa), b.big(na)]);
        out = &out - &mixed.scale(&mu(a).inv()?);
        let num = b.prod(&[b.inf(na), b.inf(pa)]);
        out = &out - &num.scale(&gamma(a).checked_div(&mu(a).pow(2))?);
    }
    for &a in rs.j_set(p) {
        for &beta in rs.positive_roots() {
            let Some(ab) = a.add(beta) else { continue };
            if !ab.contains(p) {
                continue;
            }
            let c = RatFunc::from_i64(epsilon(a, beta)?).checked_div(&(&mu(a) * &mu(ab)))?;
            let t = &b.prod(&[b.inf(SRoot::pos(a)), b.inf(SRoot::pos(beta)), b.inf(SRoot::neg(ab))])
                + &b.prod(&[b.inf(SRoot::neg(a)), b.inf(SRoot::neg(beta)), b.inf(SRoot::pos(ab))]);
            out = &out + &t.scale(&c);
        }
    }
    Ok(out)
}

/// Reading of the `E(-1)` pair in the second line of the `2𝓗^(2)_p` display.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum H2Reading {
    /// `e_{-α}[1] E_{-α}(-1) + e_α[1] E_{-α}(-1)`, as printed.
    Literal,
    /// `e_{-α}[1] E_α(-1) + e_α[1] E_{-α}(-1)`, mirroring `𝓗^(1)_p`.
    #[default]
    Mirrored,
}

/// `𝓗^(2)_p` from the explicit closed-form display (which gives `2𝓗^(2)_p`).
pub fn h2_explicit(alg: &Algebra, p: usize, reading: H2Reading) -> Result<NCPoly> {
    Ok(h2_display(alg, p, reading)?.scale(&rq(1, 2)))
}

/// The `2𝓗^(2)_p` display itself.
pub fn h2_display(alg: &Algebra, p: usize, reading: H2Reading) -> Result<NCPoly> {
    check_p(alg, p)?;
    let b = Builder::new(alg);
    let rs = alg.root_system();
    let n = alg.n();
    let jp = rs.j_set(p);
    let inf = |s: SRoot| b.inf(s);
    let mut out = NCPoly::zero();
    for i in 1..=alg.sites() {
        out = &out - &alg.w_site(i, p).scale(&z(i).pow(2));
    }
    for &a in jp {
        let (pa, na) = (SRoot::pos(a), SRoot::neg(a));
        let ima = mu(a).inv()?;
        let first = match reading {
            H2Reading::Literal => b.big_m1(na),
            H2Reading::Mirrored => b.big_m1(pa),
        };
        let pair = &b.prod(&[inf(na), first]) + &b.prod(&[inf(pa), b.big_m1(na)]);
        out = &out - &pair.scale(&ima);
        out = &out + &b.prod(&[b.big(na), b.big(pa)]).scale(&ima);
        let num = b.prod(&[inf(na), inf(pa)]);
        out = &out + &b.prod(&[num.clone(), b.big_h(a)]).scale(&mu(a).pow(2).inv()?);
        let mixed = &b.prod(&[inf(na), b.big(pa)]) + &b.prod(&[inf(pa), b.big(na)]);
        out = &out + &mixed.scale(&gamma(a).checked_div(&mu(a).pow(2))?);
        out = &out + &num.scale(&gamma(a).pow(2).checked_div(&mu(a).pow(3))?);
    }
    for &a in jp {
        for &bb in jp {
            let Some(diff) = a.sub(bb) else { continue };
            // |α-β| and β-α
            let abs = diff.root;
            let b_minus_a = diff.negate();
            let eps = RatFunc::from_i64(epsilon(a, abs)?);
            let c = eps.checked_div(&(&mu(a) * &mu(bb)))?;
            let t = &(&b.prod(&[b.big(SRoot::pos(a)), inf(b_minus_a), inf(SRoot::neg(bb))])
                + &b.prod(&[inf(SRoot::pos(a)), b.big(b_minus_a), inf(SRoot::neg(bb))]))
                + &b.prod(&[inf(SRoot::pos(a)), inf(b_minus_a), b.big(SRoot::neg(bb))]);
            out = &out - &t.scale(&c);
            let g = &gamma(a).checked_div(&mu(a))? + &gamma(bb).checked_div(&mu(bb))?;
            let t = b.prod(&[inf(SRoot::pos(a)), inf(b_minus_a), inf(SRoot::neg(bb))]);
            out = &out - &t.scale(&(&c * &g));
        }
    }
    for &a in jp {
        for &bb in jp {
            let Some(ab) = a.sub(bb) else { continue };
            for &c in jp {
                let Some(bc) = bb.sub(c) else { continue };
                let g = if a == c || a.sub(c).is_some() { 1 } else { -1 };
                let coef = RatFunc::from_i64(g).checked_div(&(&(&mu(a) * &mu(bb)) * &mu(c)))?;
                let t = b.prod(&[inf(SRoot::neg(a)), inf(ab), inf(bc), inf(SRoot::pos(c))]);
                out = &out + &t.scale(&coef);
            }
        }
    }
    let diff_ok = |x: Root, y: Root| x == y || x.sub(y).is_some();
    for &a in jp {
        for &bb in jp {
            for &c in jp {
                if a < c || !diff_ok(a, bb) || !diff_ok(bb, c) {
                    continue;
                }
                let Some(rest) = as_sroot(&coeffs(n, &[(1, bb), (-1, a), (-1, c)])) else { continue };
                let coef = (&(&mu(a) * &mu(bb)) * &mu(c)).inv()?;
                let t = b.prod(&[inf(SRoot::neg(bb)), inf(rest), inf(SRoot::pos(a)), inf(SRoot::pos(c))]);
                out = &out - &t.scale(&coef);
            }
        }
    }
    Ok(out)
}

/// How much of the complement term [`Builder::complement`] is added to the
/// quantized `𝓗^(2)_p`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Complement {
    Omit,
    /// With the coefficient exactly as written in the definition.
    Full,
    /// Half of it; this is what the explicit display and commutativity need.
    #[default]
    Half,
}

/// `Σ_j (w_p)_{jj} H̄^(k)_j`, plus the complement term for `k = 2`.
pub fn quantize_oneform(alg: &Algebra, k: u32, p: usize, complement: Complement) -> Result<NCPoly> {
    check_p(alg, p)?;
    let b = Builder::new(alg);
    let n = alg.n();
    let mut out = NCPoly::zero();
    for j in 1..=n {
        out = &out + &b.h_bar(k, j)?.scale(&RatFunc::from_q(w_diag(n, p, j)));
    }
    if k == 2 {
        match complement {
            Complement::Omit => {}
            Complement::Full => out = &out + &b.complement(p),
            Complement::Half => out = &out + &b.complement(p).scale(&rq(1, 2)),
        }
    }
    Ok(out)
}

/// A deformation direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flow {
    Z(usize),
    Gamma(usize),
    Mu(usize),
}

impl std::fmt::Display for Flow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Flow::Z(i) => write!(f, "z{i}"),
            Flow::Gamma(p) => write!(f, "g{p}"),
            Flow::Mu(p) => write!(f, "mu{p}"),
        }
    }
}

impl Flow {
    pub fn var(self) -> Var {
        match self {
            Flow::Z(i) => Var::Z(i as u8),
            Flow::Gamma(p) => Var::Gamma(p as u8),
            Flow::Mu(p) => Var::Mu(p as u8),
        }
    }
}

/// Derivative of an operator along a flow: coefficient derivative plus, for
/// `μ_k`, the factor `1/(2μ_α)` for each current `e_{±α}[1]` with `α ∈ J_k`.
pub fn total_derivative(alg: &Algebra, op: &NCPoly, flow: Flow) -> NCPoly {
    alg.derivative(op, flow.var())
}

/// Derivative of the coefficients only, ignoring the `μ`-dependence of the
/// currents `e_{±α}[1]`.
pub fn coefficient_derivative(op: &NCPoly, flow: Flow) -> NCPoly {
    let v = flow.var();
    op.map_coeffs(|_, c| c.partial_derivative(v))
}

/// The two parts of `[κ∂_a - A, κ∂_b - B] = [A, B] - κ(∂_a B - ∂_b A)`.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub commutator: NCPoly,
    pub derivative: NCPoly,
}

impl Bracket {
    pub fn is_zero(&self) -> bool {
        self.commutator.is_zero() && self.derivative.is_zero()
    }
}

pub fn compat_bracket(alg: &Algebra, (fa, a): (Flow, &NCPoly), (fb, b): (Flow, &NCPoly)) -> Bracket {
    let commutator = alg.commutator(a, b);
    let derivative = &total_derivative(alg, b, fa) - &total_derivative(alg, a, fb);
    Bracket { commutator, derivative }
}

/// How the Hamiltonians of a [`HamiltonianSet`] were built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Explicit(H2Reading),
    Quantized(Complement),
}

/// All flows of the system with their operators.
pub struct HamiltonianSet<'a> {
    pub alg: &'a Algebra,
    pub construction: Construction,
    pub gaudin: Vec<NCPoly>,
    pub h1: Vec<NCPoly>,
    pub h2: Vec<NCPoly>,
}

impl<'a> HamiltonianSet<'a> {
    pub fn build(alg: &'a Algebra, construction: Construction) -> Result<Self> {
        let n = alg.n();
        let gaudin = (1..=alg.sites()).map(|i| gaudin(alg, i)).collect::<Result<Vec<_>>>()?;
        let (h1, h2) = match construction {
            Construction::Explicit(r) => (
                (1..n).map(|p| h1_explicit(alg, p)).collect::<Result<Vec<_>>>()?,
                (1..n).map(|p| h2_explicit(alg, p, r)).collect::<Result<Vec<_>>>()?,
            ),
            Construction::Quantized(c) => (
                (1..n).map(|p| quantize_oneform(alg, 1, p, c)).collect::<Result<Vec<_>>>()?,
                (1..n).map(|p| quantize_oneform(alg, 2, p, c)).collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(HamiltonianSet { alg, construction, gaudin, h1, h2 })
    }

    pub fn operator(&self, f: Flow) -> &NCPoly {
        match f {
            Flow::Z(i) => &self.gaudin[i - 1],
            Flow::Gamma(p) => &self.h1[p - 1],
            Flow::Mu(p) => &self.h2[p - 1],
        }
    }

    pub fn flows(&self) -> Vec<Flow> {
        let n = self.alg.n();
        let mut out: Vec<Flow> = (1..=self.alg.sites()).map(Flow::Z).collect();
        out.extend((1..n).map(Flow::Gamma));
        out.extend((1..n).map(Flow::Mu));
        out
    }

    /// All unordered pairs of distinct flows.
    pub fn all_pairs(&self) -> Vec<(Flow, Flow)> {
        let f = self.flows();
        let mut out = Vec::new();
        for i in 0..f.len() {
            for j in i + 1..f.len() {
                out.push((f[i], f[j]));
            }
        }
        out
    }

    /// Pairs among `𝓗^(1)`, `𝓗^(2)` only.
    pub fn hamiltonian_pairs(&self) -> Vec<(Flow, Flow)> {
        self.all_pairs().into_iter().filter(|(a, b)| !matches!(a, Flow::Z(_)) && !matches!(b, Flow::Z(_))).collect()
    }

    /// Pairs involving at least one Gaudin flow.
    pub fn gaudin_pairs(&self) -> Vec<(Flow, Flow)> {
        self.all_pairs().into_iter().filter(|(a, _)| matches!(a, Flow::Z(_))).collect()
    }
}

/// Outcome of one compatibility bracket.
#[derive(Clone, Debug)]
pub struct PairReport {
    pub pair: (Flow, Flow),
    pub bracket_terms_before_cancel: usize,
    pub commutator_terms: usize,
    pub derivative_terms: usize,
    pub is_zero: bool,
    pub elapsed_ms: u128,
    /// Rendered nonzero remainder (empty when zero).
    pub witness: String,
}

/// Evaluate the requested brackets.
pub fn compat_check(set: &HamiltonianSet, pairs: &[(Flow, Flow)]) -> Vec<PairReport> {
    pairs
        .iter()
        .map(|&(fa, fb)| {
            let start = Instant::now();
            let a = set.operator(fa);
            let b = set.operator(fb);
            let br = compat_bracket(set.alg, (fa, a), (fb, b));
            let zero = br.is_zero();
            let witness = if zero {
                String::new()
            } else {
                let mut w = String::new();
                if !br.commutator.is_zero() {
                    w += &format!("[A,B]:\n{}\n", set.alg.render(&br.commutator.reduced()));
                }
                if !br.derivative.is_zero() {
                    w += &format!("dB-dA:\n{}\n", set.alg.render(&br.derivative.reduced()));
                }
                w
            };
            PairReport {
                pair: (fa, fb),
                bracket_terms_before_cancel: 2 * a.len() * b.len(),
                commutator_terms: br.commutator.len(),
                derivative_terms: br.derivative.len(),
                is_zero: zero,
                elapsed_ms: start.elapsed().as_millis(),
                witness,
            }
        })
        .collect()
}
