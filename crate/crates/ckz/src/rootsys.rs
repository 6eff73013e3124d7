//! Type-A root data: positive roots as index intervals, the linear order on
//! them, structure constants of `sl_N` in the Chevalley-type basis, and the
//! defining matrix realization.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;

/// A positive root `α_start + … + α_end` (1-based simple-root indices).
///
/// `Ord` is the linear order on positive roots: `α > α'` iff `α` starts
/// earlier, or both start together and `α` ends earlier. So
/// `α_1 > α_1+α_2 > … > α_1+…+α_{N-1} > α_2 > … > α_{N-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Root {
    pub start: u8,
    pub end: u8,
}

impl Root {
    pub fn new(start: usize, end: usize) -> Self {
        assert!(1 <= start && start <= end, "invalid root [{start}..{end}]");
        Root { start: start as u8, end: end as u8 }
    }

    pub fn simple(p: usize) -> Self {
        Root::new(p, p)
    }

    /// Height: number of simple roots in the sum.
    pub fn height(self) -> usize {
        (self.end - self.start + 1) as usize
    }

    /// Whether `α_p` occurs in this root.
    pub fn contains(self, p: usize) -> bool {
        (self.start as usize) <= p && p <= self.end as usize
    }

    /// `self + other` if that is again a root (the intervals abut).
    pub fn add(self, other: Root) -> Option<Root> {
        if self.end + 1 == other.start {
            Some(Root { start: self.start, end: other.end })
        } else if other.end + 1 == self.start {
            Some(Root { start: other.start, end: self.end })
        } else {
            None
        }
    }

    /// `self - other` as a signed root, if it is a root.
    pub fn sub(self, other: Root) -> Option<SRoot> {
        if self == other {
            return None;
        }
        if self.start == other.start {
            // same left end: difference is the tail of the longer one
            return if self.end > other.end {
                Some(SRoot::pos(Root { start: other.end + 1, end: self.end }))
            } else {
                Some(SRoot::neg(Root { start: self.end + 1, end: other.end }))
            };
        }
        if self.end == other.end {
            return if self.start < other.start {
                Some(SRoot::pos(Root { start: self.start, end: other.start - 1 }))
            } else {
                Some(SRoot::neg(Root { start: other.start, end: self.start - 1 }))
            };
        }
        None
    }

    /// `α(h_p)`, read off the type-A Cartan matrix.
    pub fn eval_h(self, p: usize) -> i64 {
        (self.start as usize..=self.end as usize).map(|q| cartan_entry(q, p)).sum()
    }
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> Ordering {
        (other.start, other.end).cmp(&(self.start, self.end))
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "a{}", self.start)
        } else {
            write!(f, "a({},{})", self.start, self.end)
        }
    }
}

/// A root of either sign.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SRoot {
    pub root: Root,
    pub positive: bool,
}

impl SRoot {
    pub fn pos(root: Root) -> Self {
        SRoot { root, positive: true }
    }
    pub fn neg(root: Root) -> Self {
        SRoot { root, positive: false }
    }
    pub fn negate(self) -> Self {
        SRoot { root: self.root, positive: !self.positive }
    }
    pub fn elem(self) -> Elem {
        if self.positive {
            Elem::E(self.root)
        } else {
            Elem::F(self.root)
        }
    }
}

/// Compare two roots in the linear order.
pub fn root_order_cmp(a: Root, b: Root) -> Ordering {
    a.cmp(&b)
}

/// `ε(α, β)`: `+1` if `α > β`, `-1` if `α < β`.
pub fn epsilon(a: Root, b: Root) -> Result<i64> {
    match a.cmp(&b) {
        Ordering::Greater => Ok(1),
        Ordering::Less => Ok(-1),
        Ordering::Equal => Err(Error::EqualRoots(a.to_string())),
    }
}

/// Entry `(α_p, α_q)` of the type-A Cartan matrix.
pub fn cartan_entry(p: usize, q: usize) -> i64 {
    if p == q {
        2
    } else if p.abs_diff(q) == 1 {
        -1
    } else {
        0
    }
}

/// Entry `(p, q)` of the inverse Cartan matrix of `sl_N`: `min(p,q) - pq/N`.
/// This is also `tr(w_p w_q)`, and `w_p = Σ_q (A⁻¹)_{pq} h_q`.
pub fn cartan_inverse(n: usize, p: usize, q: usize) -> BigRational {
    let p = p as i64;
    let q = q as i64;
    let n = n as i64;
    BigRational::new((p.min(q) * n - p * q).into(), n.into())
}

/// Diagonal entry `(w_p)_{aa}`: `1 - p/N` for `a ≤ p`, else `-p/N`.
pub fn w_diag(n: usize, p: usize, a: usize) -> BigRational {
    let n_ = n as i64;
    let p_ = p as i64;
    if a <= p {
        BigRational::new((n_ - p_).into(), n_.into())
    } else {
        BigRational::new((-p_).into(), n_.into())
    }
}

/// Basis element of `sl_N`: `e_α`, `e_{-α}` or `h_p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Elem {
    E(Root),
    F(Root),
    H(usize),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::E(r) => write!(f, "e[{r}]"),
            Elem::F(r) => write!(f, "e[-{r}]"),
            Elem::H(p) => write!(f, "h{p}"),
        }
    }
}

/// An integer linear combination of basis elements.
pub type LieComb = Vec<(i64, Elem)>;

/// The root system of `sl_N` together with the root subsets `J_p, R_p, C_p`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    n: usize,
    positive_roots: Vec<Root>,
    // ordinal[start][end]
    ordinal: Vec<Vec<usize>>,
    j_sets: Vec<Vec<Root>>,
    r_sets: Vec<Vec<Root>>,
    c_sets: Vec<Vec<Root>>,
}

/// Build the root system of `sl_N`.
pub fn build_root_system(n: usize) -> Result<RootSystem> {
    RootSystem::new(n)
}

impl RootSystem {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        let rank = n - 1;
        let mut positive_roots = Vec::with_capacity(n * rank / 2);
        for i in 1..=rank {
            for j in i..=rank {
                positive_roots.push(Root::new(i, j));
            }
        }
        // largest first
        positive_roots.sort_by(|a, b| b.cmp(a));
        let mut ordinal = vec![vec![usize::MAX; n]; n];
        for (k, r) in positive_roots.iter().enumerate() {
            ordinal[r.start as usize][r.end as usize] = k;
        }
        let subset = |f: &dyn Fn(Root, usize) -> bool| -> Vec<Vec<Root>> {
            (1..=rank)
                .map(|p| positive_roots.iter().copied().filter(|&r| f(r, p)).collect())
                .collect()
        };
        let j_sets = subset(&|r, p| r.contains(p));
        let r_sets = subset(&|r, p| r.start as usize == p);
        let c_sets = subset(&|r, p| r.end as usize == p);
        Ok(RootSystem { n, positive_roots, ordinal, j_sets, r_sets, c_sets })
    }

    /// The `N` of `sl_N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    /// Positive roots, strictly decreasing in the linear order.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive(&self) -> usize {
        self.positive_roots.len()
    }

    /// Position of a root in [`positive_roots`](Self::positive_roots).
    pub fn ordinal(&self, r: Root) -> usize {
        self.ordinal[r.start as usize][r.end as usize]
    }

    pub fn root(&self, ordinal: usize) -> Root {
        self.positive_roots[ordinal]
    }

    /// `J_p`: positive roots containing `α_p`.
    pub fn j_set(&self, p: usize) -> &[Root] {
        &self.j_sets[p - 1]
    }

    /// `R_p = {α_p, α_p+α_{p+1}, …}`.
    pub fn r_set(&self, p: usize) -> &[Root] {
        &self.r_sets[p - 1]
    }

    /// `C_p = {α_1+…+α_p, …, α_p}`.
    pub fn c_set(&self, p: usize) -> &[Root] {
        &self.c_sets[p - 1]
    }

    /// All basis elements: `e_α`, then `e_{-α}`, then `h_p`.
    pub fn basis(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.positive_roots.iter().map(|&r| Elem::E(r)).collect();
        out.extend(self.positive_roots.iter().map(|&r| Elem::F(r)));
        out.extend((1..self.n).map(Elem::H));
        out
    }

    /// Whether a root interval is valid for this rank.
    pub fn is_root(&self, r: Root) -> bool {
        r.start >= 1 && r.start <= r.end && (r.end as usize) < self.n
    }

    /// `[x, y]` in the basis.
    pub fn bracket_basis(&self, x: Elem, y: Elem) -> LieComb {
        use Elem::*;
        match (x, y) {
            (H(_), H(_)) => vec![],
            (H(p), E(a)) => scaled(a.eval_h(p), E(a)),
            (H(p), F(a)) => scaled(-a.eval_h(p), F(a)),
            (E(_) | F(_), H(_)) => negate(self.bracket_basis(y, x)),
            (E(a), F(b)) if a == b => h_alpha(a),
            (F(a), E(b)) if a == b => negate(h_alpha(a)),
            (E(a), E(b)) => match a.add(b) {
                Some(s) => vec![(epsilon(a, b).unwrap(), E(s))],
                None => vec![],
            },
            (F(a), F(b)) => match a.add(b) {
                Some(s) => vec![(-epsilon(a, b).unwrap(), F(s))],
                None => vec![],
            },
            (E(a), F(b)) => mixed_bracket(a, b),
            (F(a), E(b)) => negate(mixed_bracket(b, a)),
        }
    }

    /// Defining `N×N` matrix of a basis element.
    pub fn matrix_realization(&self, x: Elem) -> Mat<BigRational> {
        let mut m = Mat::zeros(self.n, self.n);
        match x {
            Elem::E(r) => m[(r.start as usize - 1, r.end as usize)] = BigRational::one(),
            Elem::F(r) => m[(r.end as usize, r.start as usize - 1)] = BigRational::one(),
            Elem::H(p) => {
                m[(p - 1, p - 1)] = BigRational::one();
                m[(p, p)] = -BigRational::one();
            }
        }
        m
    }

    /// Matrix of the dual Cartan element `w_p`.
    pub fn w_matrix(&self, p: usize) -> Mat<BigRational> {
        let mut m = Mat::zeros(self.n, self.n);
        for a in 1..=self.n {
            m[(a - 1, a - 1)] = w_diag(self.n, p, a);
        }
        m
    }

    /// Expand a realization matrix back into the basis, if it is traceless.
    pub fn decompose(&self, m: &Mat<BigRational>) -> Option<Vec<(BigRational, Elem)>> {
        let n = self.n;
        let mut out = Vec::new();
        let mut tr = BigRational::zero();
        for a in 0..n {
            tr += &m[(a, a)];
        }
        if !tr.is_zero() {
            return None;
        }
        for r in &self.positive_roots {
            let (i, j) = (r.start as usize - 1, r.end as usize);
            if !m[(i, j)].is_zero() {
                out.push((m[(i, j)].clone(), Elem::E(*r)));
            }
            if !m[(j, i)].is_zero() {
                out.push((m[(j, i)].clone(), Elem::F(*r)));
            }
        }
        // diag(d) = Σ c_p h_p with c_p = d_1 + … + d_p
        let mut c = BigRational::zero();
        for p in 1..n {
            c += &m[(p - 1, p - 1)];
            if !c.is_zero() {
                out.push((c.clone(), Elem::H(p)));
            }
        }
        Some(out)
    }

    /// The Casimir element as a list of `coeff · x ⊗ y` with `h_p ⊗ w_p`
    /// expanded through the inverse Cartan matrix.
    pub fn casimir(&self) -> Vec<(BigRational, Elem, Elem)> {
        let mut out = Vec::new();
        for &r in &self.positive_roots {
            out.push((BigRational::one(), Elem::E(r), Elem::F(r)));
            out.push((BigRational::one(), Elem::F(r), Elem::E(r)));
        }
        for p in 1..self.n {
            for q in 1..self.n {
                out.push((cartan_inverse(self.n, p, q), Elem::H(p), Elem::H(q)));
            }
        }
        out
    }
}

fn scaled(c: i64, x: Elem) -> LieComb {
    if c == 0 {
        vec![]
    } else {
        vec![(c, x)]
    }
}

fn negate(v: LieComb) -> LieComb {
    v.into_iter().map(|(c, x)| (-c, x)).collect()
}

/// `h_α = h_p + … + h_q`.
fn h_alpha(a: Root) -> LieComb {
    (a.start as usize..=a.end as usize).map(|p| (1, Elem::H(p))).collect()
}

/// `[e_α, e_{-β}]` for `α ≠ β`. The linear order only fixes signs among
/// positive roots; for mixed pairs the sign is the one carried by the
/// interval endpoints (`e_α ↔ E_{start, end+1}`).
fn mixed_bracket(a: Root, b: Root) -> LieComb {
    // E_{a0,a1} E_{b1,b0} with a = [a0..a1-1], b = [b0..b1-1]
    let (a0, a1) = (a.start, a.end + 1);
    let (b0, b1) = (b.start, b.end + 1);
    if a1 == b1 {
        // δ_{a1,b1} E_{a0,b0}
        let x = if a0 < b0 {
            Elem::E(Root { start: a0, end: b0 - 1 })
        } else {
            Elem::F(Root { start: b0, end: a0 - 1 })
        };
        vec![(1, x)]
    } else if a0 == b0 {
        // -δ_{b0,a0} E_{b1,a1}
        let x = if b1 < a1 {
            Elem::E(Root { start: b1, end: a1 - 1 })
        } else {
            Elem::F(Root { start: a1, end: b1 - 1 })
        };
        vec![(-1, x)]
    } else {
        vec![]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        let a1 = Root::simple(1);
        let a12 = Root::new(1, 2);
        let a2 = Root::simple(2);
        assert_eq!(root_order_cmp(a1, a12), Ordering::Greater);
        assert_eq!(root_order_cmp(a2, a2), Ordering::Equal);
        assert_eq!(root_order_cmp(a12, a2), Ordering::Greater);
        assert_eq!(epsilon(a1, a2).unwrap(), 1);
        assert_eq!(epsilon(a2, a1).unwrap(), -1);
        assert_eq!(epsilon(a12, a2).unwrap(), 1);
        assert!(epsilon(a1, a1).is_err());
    }

    #[test]
    fn sub_roots() {
        let a12 = Root::new(1, 2);
        assert_eq!(a12.sub(Root::simple(1)), Some(SRoot::pos(Root::simple(2))));
        assert_eq!(Root::simple(1).sub(a12), Some(SRoot::neg(Root::simple(2))));
        assert_eq!(a12.sub(Root::simple(2)), Some(SRoot::pos(Root::simple(1))));
        assert_eq!(Root::simple(1).sub(Root::simple(2)), None);
    }
}
