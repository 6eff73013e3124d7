//! The noncommutative algebra `⊕_{i=1}^n g ⊕ g_(2)` acting on the tensor
//! module, with degree-one currents `e_{±α}[1]` at infinity and the central
//! values `h_α[1] = γ_α`, `h_α[2] = μ_α` folded into the coefficient field.
//!
//! Elements are kept in PBW normal form. Each generator has a rank; a word is
//! normal when ranks are non-decreasing. Ranks run, for each finite site in
//! turn, over lowering operators (root order, `α_1` first), Cartan elements,
//! raising operators; then over lowering and raising currents at infinity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_rational::BigRational;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::ratfunc::{MPoly, RatFunc, RfSum, Var};
use crate::rootsys::{cartan_inverse, Elem, Root, RootSystem, SRoot};

/// A generator of the algebra. Sites are 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Gen {
    /// `e^(i)_{-α}`.
    SiteLower(u8, Root),
    /// `h^(i)_p`.
    SiteCartan(u8, u8),
    /// `e^(i)_α`.
    SiteRaise(u8, Root),
    /// `e^(∞)_{-α}[1]`.
    InfLower(Root),
    /// `e^(∞)_α[1]`.
    InfRaise(Root),
}

impl Gen {
    pub fn site(self) -> Option<usize> {
        match self {
            Gen::SiteLower(i, _) | Gen::SiteCartan(i, _) | Gen::SiteRaise(i, _) => Some(i as usize),
            _ => None,
        }
    }

    /// Root carried by an infinity current, with sign.
    pub fn inf_root(self) -> Option<SRoot> {
        match self {
            Gen::InfLower(r) => Some(SRoot::neg(r)),
            Gen::InfRaise(r) => Some(SRoot::pos(r)),
            _ => None,
        }
    }

    /// The `sl_N` basis element a site generator stands for.
    pub fn site_elem(self) -> Option<Elem> {
        match self {
            Gen::SiteLower(_, r) => Some(Elem::F(r)),
            Gen::SiteCartan(_, p) => Some(Elem::H(p as usize)),
            Gen::SiteRaise(_, r) => Some(Elem::E(r)),
            _ => None,
        }
    }

    pub fn site_gen(site: usize, x: Elem) -> Gen {
        let s = site as u8;
        match x {
            Elem::E(r) => Gen::SiteRaise(s, r),
            Elem::F(r) => Gen::SiteLower(s, r),
            Elem::H(p) => Gen::SiteCartan(s, p as u8),
        }
    }

    pub fn inf_gen(r: SRoot) -> Gen {
        if r.positive {
            Gen::InfRaise(r.root)
        } else {
            Gen::InfLower(r.root)
        }
    }
}

fn root_text(r: Root) -> String {
    if r.start == r.end {
        format!("a{}", r.start)
    } else {
        format!("a({},{})", r.start, r.end)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gen::SiteLower(i, r) => write!(f, "e[{i},-{}]", root_text(r)),
            Gen::SiteCartan(i, p) => write!(f, "h[{i},{p}]"),
            Gen::SiteRaise(i, r) => write!(f, "e[{i},{}]", root_text(r)),
            Gen::InfLower(r) => write!(f, "e[inf,-{},1]", root_text(r)),
            Gen::InfRaise(r) => write!(f, "e[inf,{},1]", root_text(r)),
        }
    }
}

/// A word of generator codes (ranks).
pub type Word = SmallVec<[u16; 8]>;

type Expansion = Arc<Vec<(Word, MPoly)>>;

/// One term of a generator commutator: a generator (or the empty word for a
/// scalar) with a polynomial coefficient in `μ`.
type BracketTerm = (Option<u16>, MPoly);

/// The algebra for given `N` and number of finite sites, with a memoized
/// normal-ordering engine.
pub struct Algebra {
    rs: RootSystem,
    sites: usize,
    gens: Vec<Gen>,
    codes: HashMap<Gen, u16>,
    table: Vec<Vec<BracketTerm>>,
    memo: DashMap<(u16, Word), Expansion>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra").field("N", &self.rs.n()).field("sites", &self.sites).finish()
    }
}

/// `μ_α = μ_p + … + μ_q` as a polynomial.
pub fn mu_of(r: Root) -> MPoly {
    (r.start..=r.end).fold(MPoly::zero(), |acc, p| &acc + &MPoly::var(Var::Mu(p)))
}

/// `γ_α = γ_p + … + γ_q` as a polynomial.
pub fn gamma_of(r: Root) -> MPoly {
    (r.start..=r.end).fold(MPoly::zero(), |acc, p| &acc + &MPoly::var(Var::Gamma(p)))
}

impl Algebra {
    pub fn new(n: usize, sites: usize) -> Result<Self> {
        let rs = RootSystem::new(n)?;
        let mut gens = Vec::new();
        for i in 1..=sites {
            let s = i as u8;
            gens.extend(rs.positive_roots().iter().map(|&r| Gen::SiteLower(s, r)));
            gens.extend((1..n).map(|p| Gen::SiteCartan(s, p as u8)));
            gens.extend(rs.positive_roots().iter().map(|&r| Gen::SiteRaise(s, r)));
        }
        gens.extend(rs.positive_roots().iter().map(|&r| Gen::InfLower(r)));
        gens.extend(rs.positive_roots().iter().map(|&r| Gen::InfRaise(r)));
        let codes: HashMap<Gen, u16> = gens.iter().enumerate().map(|(k, &g)| (g, k as u16)).collect();
        let mut alg = Algebra { rs, sites, gens, codes, table: Vec::new(), memo: DashMap::new() };
        let m = alg.gens.len();
        let mut table = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                table.push(alg.compute_bracket(alg.gens[a], alg.gens[b]));
            }
        }
        alg.table = table;
        Ok(alg)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn n(&self) -> usize {
        self.rs.n()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn code(&self, g: Gen) -> u16 {
        *self.codes.get(&g).unwrap_or_else(|| panic!("generator {g} not in algebra"))
    }

    pub fn gen(&self, code: u16) -> Gen {
        self.gens[code as usize]
    }

    pub fn check_site(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.sites {
            Err(Error::InvalidSite { site: i, n: self.sites })
        } else {
            Ok(())
        }
    }

    fn compute_bracket(&self, g: Gen, h: Gen) -> Vec<BracketTerm> {
        match (g.site(), h.site()) {
            (Some(i), Some(j)) if i == j => {
                let x = g.site_elem().unwrap();
                let y = h.site_elem().unwrap();
                self.rs
                    .bracket_basis(x, y)
                    .into_iter()
                    .map(|(c, z)| (Some(self.code(Gen::site_gen(i, z))), MPoly::from_i64(c)))
                    .collect()
            }
            (None, None) => match (g, h) {
                (Gen::InfRaise(a), Gen::InfLower(b)) if a == b => vec![(None, mu_of(a))],
                (Gen::InfLower(a), Gen::InfRaise(b)) if a == b => vec![(None, -&mu_of(a))],
                _ => vec![],
            },
            _ => vec![],
        }
    }

    /// `[g, h]` for generators, as an element.
    pub fn gen_commutator(&self, g: Gen, h: Gen) -> NCPoly {
        let terms = &self.table[self.code(g) as usize * self.gens.len() + self.code(h) as usize];
        let mut out = NCPoly::zero();
        for (x, c) in terms {
            let w: Word = x.iter().copied().collect();
            out.add_term(w, RatFunc::from_poly(c.clone()));
        }
        out
    }

    fn bracket_codes(&self, a: u16, b: u16) -> &[BracketTerm] {
        &self.table[a as usize * self.gens.len() + b as usize]
    }

    /// Normal form of `g · w` for a normal word `w`.
    fn insert(&self, g: u16, w: &[u16]) -> Expansion {
        if w.is_empty() || g <= w[0] {
            let mut out: Word = SmallVec::with_capacity(w.len() + 1);
            out.push(g);
            out.extend_from_slice(w);
            return Arc::new(vec![(out, MPoly::one())]);
        }
        let key = (g, Word::from_slice(w));
        if let Some(e) = self.memo.get(&key) {
            return e.clone();
        }
        let w0 = w[0];
        let rest = &w[1..];
        let mut acc: HashMap<Word, MPoly> = HashMap::new();
        let mut push = |word: Word, c: MPoly| {
            if c.is_zero() {
                return;
            }
            match acc.get_mut(&word) {
                Some(x) => *x = &*x + &c,
                None => {
                    acc.insert(word, c);
                }
            }
        };
        // g w0 rest = w0 (g rest) + [g, w0] rest
        for (x, c) in self.insert(g, rest).iter() {
            for (y, d) in self.insert(w0, x).iter() {
                push(y.clone(), c * d);
            }
        }
        for (h, c) in self.bracket_codes(g, w0) {
            match h {
                None => push(Word::from_slice(rest), c.clone()),
                Some(h) => {
                    for (y, d) in self.insert(*h, rest).iter() {
                        push(y.clone(), c * d);
                    }
                }
            }
        }
        let mut v: Vec<(Word, MPoly)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let e = Arc::new(v);
        self.memo.insert(key, e.clone());
        e
    }

    /// Normal form of `left · right` where `right` is normal.
    fn mul_words(&self, left: &[u16], right: &[u16]) -> Vec<(Word, MPoly)> {
        let mut cur: Vec<(Word, MPoly)> = vec![(Word::from_slice(right), MPoly::one())];
        for &g in left.iter().rev() {
            let mut acc: HashMap<Word, MPoly> = HashMap::new();
            for (w, c) in &cur {
                for (x, d) in self.insert(g, w).iter() {
                    let t = c * d;
                    match acc.get_mut(x) {
                        Some(y) => *y = &*y + &t,
                        None => {
                            acc.insert(x.clone(), t);
                        }
                    }
                }
            }
            cur = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
        cur
    }

    /// Rewrite an arbitrary word into PBW normal form.
    pub fn normal_order(&self, w: &[Gen]) -> NCPoly {
        let codes: Vec<u16> = w.iter().map(|&g| self.code(g)).collect();
        let mut out = NCPoly::zero();
        for (x, c) in self.mul_words(&codes, &[]) {
            out.add_term(x, RatFunc::from_poly(c));
        }
        out
    }

    /// Normal ordering by adjacent transpositions at randomly chosen descents,
    /// without memoization. Used to check that the normal form does not
    /// depend on the rewriting strategy.
    pub fn normal_order_randomized(&self, w: &[Gen], rng: &mut impl rand::Rng) -> NCPoly {
        let mut pending: Vec<(Word, MPoly)> = vec![(w.iter().map(|&g| self.code(g)).collect(), MPoly::one())];
        let mut done: BTreeMap<Word, MPoly> = BTreeMap::new();
        while let Some((word, c)) = pending.pop() {
            let descents: Vec<usize> = (0..word.len().saturating_sub(1)).filter(|&k| word[k] > word[k + 1]).collect();
            if descents.is_empty() {
                let e = done.entry(word).or_insert_with(MPoly::zero);
                *e = &*e + &c;
                continue;
            }
            let k = descents[rng.gen_range(0..descents.len())];
            let mut swapped = word.clone();
            swapped.swap(k, k + 1);
            pending.push((swapped, c.clone()));
            for (h, d) in self.bracket_codes(word[k], word[k + 1]) {
                let mut nw: Word = SmallVec::new();
                nw.extend_from_slice(&word[..k]);
                if let Some(h) = h {
                    nw.push(*h);
                }
                nw.extend_from_slice(&word[k + 2..]);
                pending.push((nw, &c * d));
            }
        }
        let mut out = NCPoly::zero();
        for (w, c) in done {
            out.add_term(w, RatFunc::from_poly(c));
        }
        out
    }

    /// Product of two elements, fully normal-ordered.
    pub fn mul(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        self.combine(&[(a, b, 1)])
    }

    /// `ab - ba`.
    pub fn commutator(&self, a: &NCPoly, b: &NCPoly) -> NCPoly {
        self.combine(&[(a, b, 1), (b, a, -1)])
    }

    /// `Σ sign · left · right` over the given products, accumulated in one pass.
    pub fn combine(&self, products: &[(&NCPoly, &NCPoly, i64)]) -> NCPoly {
        let jobs: Vec<(&Word, &RatFunc, &NCPoly, i64)> = products
            .iter()
            .flat_map(|&(a, b, s)| a.terms.iter().map(move |(w, c)| (w, c, b, s)))
            .collect();
        let acc = jobs
            .par_iter()
            .fold(Accum::default, |mut acc, &(wa, ca, b, s)| {
                let ca = if s == 1 { ca.clone() } else { ca.scale(&BigRational::from_integer(s.into())) };
                for (wb, cb) in &b.terms {
                    let c = &ca * cb;
                    for (w, p) in self.mul_words(wa, wb) {
                        acc.add(w, &c, &p);
                    }
                }
                acc
            })
            .reduce(Accum::default, Accum::merge);
        acc.finish()
    }

    /// An element consisting of a single generator.
    pub fn gen_poly(&self, g: Gen) -> NCPoly {
        NCPoly::monomial(Word::from_slice(&[self.code(g)]), RatFunc::one())
    }

    /// Normal-ordered product of generators with a coefficient.
    pub fn word_poly(&self, c: RatFunc, w: &[Gen]) -> NCPoly {
        self.normal_order(w).scale(&c)
    }

    /// `w^(i)_p = Σ_q (A⁻¹)_{pq} h^(i)_q`.
    pub fn w_site(&self, i: usize, p: usize) -> NCPoly {
        let n = self.n();
        let mut out = NCPoly::zero();
        for q in 1..n {
            out.add_term(
                Word::from_slice(&[self.code(Gen::SiteCartan(i as u8, q as u8))]),
                RatFunc::from_q(cartan_inverse(n, p, q)),
            );
        }
        out
    }

    /// Casimir `Ω^(i,j)` placed on sites `i ≠ j`.
    pub fn casimir(&self, i: usize, j: usize) -> NCPoly {
        let mut out = NCPoly::zero();
        for (c, x, y) in self.rs.casimir() {
            let t = self.word_poly(RatFunc::from_q(c), &[Gen::site_gen(i, x), Gen::site_gen(j, y)]);
            out = &out + &t;
        }
        out
    }

    /// Render a word.
    pub fn word_text(&self, w: &[u16]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&c| self.gen(c).to_string()).collect::<Vec<_>>().join(" ")
    }

    /// Parse a generator in the canonical syntax, e.g. `e[inf,-a(1,2),1]`,
    /// `e[2,a1]`, `h[1,2]`.
    pub fn parse_gen(&self, s: &str) -> Result<Gen> {
        let bad = || Error::Parse(format!("bad generator `{s}`"));
        let s = s.trim();
        let (kind, body) = if let Some(b) = s.strip_prefix("e[") {
            ('e', b)
        } else if let Some(b) = s.strip_prefix("h[") {
            ('h', b)
        } else {
            return Err(bad());
        };
        let body = body.strip_suffix(']').ok_or_else(bad)?;
        let (site, rest) = body.split_once(',').ok_or_else(bad)?;
        let parse_root = |t: &str| -> Result<(bool, Root)> {
            let (neg, t) = match t.strip_prefix('-') {
                Some(t) => (true, t),
                None => (false, t),
            };
            let t = t.strip_prefix('a').ok_or_else(bad)?;
            let r = if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                let (a, b) = inner.split_once(',').ok_or_else(bad)?;
                Root::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?)
            } else {
                Root::simple(t.parse().map_err(|_| bad())?)
            };
            if !self.rs.is_root(r) {
                return Err(bad());
            }
            Ok((neg, r))
        };
        let g = if site == "inf" {
            let (root, deg) = rest.rsplit_once(',').ok_or_else(bad)?;
            if kind != 'e' || deg != "1" {
                return Err(bad());
            }
            let (neg, r) = parse_root(root)?;
            if neg {
                Gen::InfLower(r)
            } else {
                Gen::InfRaise(r)
            }
        } else {
            let i: usize = site.parse().map_err(|_| bad())?;
            self.check_site(i)?;
            if kind == 'h' {
                let p: usize = rest.parse().map_err(|_| bad())?;
                if p == 0 || p >= self.n() {
                    return Err(bad());
                }
                Gen::SiteCartan(i as u8, p as u8)
            } else {
                let (neg, r) = parse_root(rest)?;
                if neg {
                    Gen::SiteLower(i as u8, r)
                } else {
                    Gen::SiteRaise(i as u8, r)
                }
            }
        };
        Ok(g)
    }

    /// Parse a whitespace-separated product of generators.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Gen>> {
        let mut out = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        for ch in s.chars() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                _ => {}
            }
            if ch.is_whitespace() && depth == 0 {
                if !cur.is_empty() {
                    out.push(self.parse_gen(&cur)?);
                    cur.clear();
                }
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() && cur != "1" {
            out.push(self.parse_gen(&cur)?);
        }
        Ok(out)
    }

    /// Derivative along a parameter. For `μ_k` this includes the structural
    /// rule `∂e_{±α}[1] = e_{±α}[1]/(2μ_α)` for `α ∋ α_k`, under which the
    /// relation `[e_α[1], e_{-α}[1]] = μ_α` is preserved.
    pub fn derivative(&self, p: &NCPoly, v: Var) -> NCPoly {
        p.map_coeffs(|w, c| {
            let mut d = c.partial_derivative(v);
            if let Var::Mu(k) = v {
                let mut s = RfSum::new();
                for &code in w.iter() {
                    if let Some(r) = self.gen(code).inf_root().filter(|r| r.root.contains(k as usize)) {
                        s.add(&RatFunc::from_poly(mu_of(r.root).scale(&BigRational::from_integer(2.into()))).inv().expect("μ_α ≠ 0"));
                    }
                }
                if !s.is_empty() {
                    d = &d + &(c * &s.finish());
                }
            }
            d
        })
    }

    /// Parse a table of `coefficient | word` lines (`#` starts a comment)
    /// into a normal-ordered element.
    pub fn parse_table(&self, text: &str) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (c, w) = line.split_once('|').ok_or_else(|| Error::Parse(format!("missing '|' in {line:?}")))?;
            let c = crate::ratfunc::parse_ratfunc(c.trim())?;
            out = &out + &self.normal_order(&self.parse_word(w.trim())?).scale(&c);
        }
        Ok(out)
    }

    /// Render an element: one `coefficient * word` term per line.
    pub fn render(&self, p: &NCPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        p.terms.iter().map(|(w, c)| format!("({c}) * {}", self.word_text(w))).collect::<Vec<_>>().join("\n")
    }

    /// Number of memoized insertions (diagnostics).
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

#[derive(Default)]
struct Accum {
    map: HashMap<Word, RfSum>,
}

impl Accum {
    fn add(&mut self, w: Word, c: &RatFunc, p: &MPoly) {
        self.map.entry(w).or_default().add_scaled(c, p);
    }

    fn merge(mut self, other: Accum) -> Accum {
        if self.map.len() < other.map.len() {
            return other.merge(self);
        }
        for (w, s) in other.map {
            match self.map.get_mut(&w) {
                Some(t) => t.absorb(s),
                None => {
                    self.map.insert(w, s);
                }
            }
        }
        self
    }

    fn finish(self) -> NCPoly {
        let terms: Vec<(Word, RatFunc)> = self
            .map
            .into_par_iter()
            .map(|(w, s)| (w, s.finish()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        NCPoly { terms: terms.into_iter().collect() }
    }
}

/// A finite combination of normal-form words with rational-function
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NCPoly {
    terms: BTreeMap<Word, RatFunc>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::monomial(Word::new(), c)
    }

    /// A single term; the word must already be normal.
    pub fn monomial(w: Word, c: RatFunc) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn add_term(&mut self, w: Word, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(x) => {
                let s = &*x + &c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &[u16]) -> RatFunc {
        self.terms.get(w).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &RatFunc) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, d) in &self.terms {
            out.add_term(w.clone(), d * c);
        }
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&Word, &RatFunc) -> RatFunc) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(w, c));
        }
        out
    }

    /// Reduce every coefficient (cancel common atoms).
    pub fn reduced(&self) -> NCPoly {
        let terms: Vec<(Word, RatFunc)> = self.terms.par_iter().map(|(w, c)| (w.clone(), c.reduce())).collect();
        NCPoly { terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    /// Terms of `self - other` (for discrepancy dumps).
    pub fn difference(&self, other: &NCPoly) -> NCPoly {
        self - other
    }
}

impl std::ops::Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl std::ops::Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        NCPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

/// Free-function forms of the core operations.
pub fn nc_mul(alg: &Algebra, a: &NCPoly, b: &NCPoly) -> NCPoly {
    alg.mul(a, b)
}

pub fn nc_commutator(alg: &Algebra, a: &NCPoly, b: &NCPoly) -> NCPoly {
    alg.commutator(a, b)
}

pub fn normal_order(alg: &Algebra, w: &[Gen]) -> NCPoly {
    alg.normal_order(w)
}

pub fn gen_commutator(alg: &Algebra, g: Gen, h: Gen) -> NCPoly {
    alg.gen_commutator(g, h)
}
