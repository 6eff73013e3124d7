use std::fmt;

use crate::error::{Error, Result};

/// A named variable of the coefficient field.
///
/// The derived order is the context order: `γ < μ < z < Λ < κ < t < T < x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    /// `γ_p`, the pairing of `Λ^(∞)_1` with `α_p`.
    Gamma(u8),
    /// `μ_p`, the pairing of `Λ^(∞)_2` with `α_p`.
    Mu(u8),
    /// Position `z_i` of a regular singular point.
    Z(u8),
    /// `(Λ^(i), α_p)`: highest weight of site `i` evaluated on `α_p`.
    Lambda(u8, u8),
    Kappa,
    /// Integration variable `t^(p)_a`.
    T(u8, u8),
    /// Classical deformation parameter `t^(k)_ν` (diagonal of `T_k`).
    Time(u8, u8),
    /// Anonymous variable for tests and generic input.
    X(u8),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::Gamma(p) => write!(f, "g{p}"),
            Var::Mu(p) => write!(f, "mu{p}"),
            Var::Z(i) => write!(f, "z{i}"),
            Var::Lambda(i, p) => write!(f, "L{i}_{p}"),
            Var::Kappa => write!(f, "kappa"),
            Var::T(p, a) => write!(f, "t{p}_{a}"),
            Var::Time(k, nu) => write!(f, "T{k}_{nu}"),
            Var::X(i) => write!(f, "x{i}"),
        }
    }
}

impl std::str::FromStr for Var {
    type Err = Error;

    fn from_str(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("unknown variable `{s}`"));
        let num = |t: &str| t.parse::<u8>().map_err(|_| bad());
        let pair = |t: &str| -> Result<(u8, u8)> {
            let (a, b) = t.split_once('_').ok_or_else(bad)?;
            Ok((num(a)?, num(b)?))
        };
        if s == "kappa" {
            Ok(Var::Kappa)
        } else if let Some(r) = s.strip_prefix("mu") {
            Ok(Var::Mu(num(r)?))
        } else if let Some(r) = s.strip_prefix('g') {
            Ok(Var::Gamma(num(r)?))
        } else if let Some(r) = s.strip_prefix('z') {
            Ok(Var::Z(num(r)?))
        } else if let Some(r) = s.strip_prefix('L') {
            let (i, p) = pair(r)?;
            Ok(Var::Lambda(i, p))
        } else if let Some(r) = s.strip_prefix('t') {
            let (p, a) = pair(r)?;
            Ok(Var::T(p, a))
        } else if let Some(r) = s.strip_prefix('T') {
            let (k, nu) = pair(r)?;
            Ok(Var::Time(k, nu))
        } else if let Some(r) = s.strip_prefix('x') {
            Ok(Var::X(num(r)?))
        } else {
            Err(bad())
        }
    }
}

/// An ordered set of variables that a computation is allowed to mention.
///
/// Arithmetic itself is context-free; the context exists to reject stray
/// symbols at API boundaries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarContext {
    vars: Vec<Var>,
}

impl VarContext {
    pub fn new(mut vars: Vec<Var>) -> Self {
        vars.sort();
        vars.dedup();
        VarContext { vars }
    }

    /// The alphabet of the confluent KZ system: `γ, μ` for rank `N-1`,
    /// `z_i` and `Λ^(i)` for `n` sites, and `κ`.
    pub fn ckz(n_rank: usize, sites: usize) -> Self {
        let mut v = Vec::new();
        for p in 1..n_rank {
            v.push(Var::Gamma(p as u8));
            v.push(Var::Mu(p as u8));
        }
        for i in 1..=sites {
            v.push(Var::Z(i as u8));
            for p in 1..n_rank {
                v.push(Var::Lambda(i as u8, p as u8));
            }
        }
        v.push(Var::Kappa);
        VarContext::new(v)
    }

    /// Extend with integration variables `t^(p)_a`, `a ≤ m_p`.
    pub fn with_t(mut self, m: &[usize]) -> Self {
        for (p, &mp) in m.iter().enumerate() {
            for a in 1..=mp {
                self.vars.push(Var::T(p as u8 + 1, a as u8));
            }
        }
        VarContext::new(self.vars)
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn contains(&self, v: Var) -> bool {
        self.vars.binary_search(&v).is_ok()
    }

    pub fn check_var(&self, v: Var) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::ContextMismatch(v.to_string()))
        }
    }
}
