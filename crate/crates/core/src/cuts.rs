//! Cuts of a monomial and the per-monomial BCH coefficient.
//!
//! A cut writes `w = τ(τ_1, ..., τ_l)`: a skeleton `τ` whose leaves are
//! replaced, left to right, by the branches. Skeletons are stored as
//! monomials in `x` alone. A BCH-cut is one whose branches all have the
//! form `x^i y^j`, which here means the product `x^i · y^j` of two
//! left-normed powers (one of them may be absent), the shape of the
//! monomials in `exp_l(x) exp_l(y)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::magma::{Generator, Monomial, Style};
use crate::par::{self, Strategy};
use crate::rational::{factorial, Rational};
use crate::series::log_coefficient;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub skeleton: Monomial,
    pub branches: Vec<Monomial>,
    /// `λ(τ_k)` as 1-based inclusive leaf intervals.
    pub positions: Vec<(usize, usize)>,
}

impl Cut {
    fn whole(w: &Monomial, offset: usize) -> Cut {
        Cut {
            skeleton: Monomial::x(),
            branches: vec![w.clone()],
            positions: vec![(offset + 1, offset + w.degree())],
        }
    }

    fn join(l: &Cut, r: &Cut) -> Cut {
        let mut branches = l.branches.clone();
        branches.extend(r.branches.iter().cloned());
        let mut positions = l.positions.clone();
        positions.extend(r.positions.iter().copied());
        Cut {
            skeleton: Monomial::node(&l.skeleton, &r.skeleton),
            branches,
            positions,
        }
    }

    /// Grafts the branches back onto the skeleton.
    pub fn graft(&self) -> Monomial {
        fn walk(t: &Monomial, it: &mut std::slice::Iter<'_, Monomial>) -> Monomial {
            match t.children() {
                None => it.next().expect("one branch per skeleton leaf").clone(),
                Some((l, r)) => {
                    let l = walk(l, it);
                    let r = walk(r, it);
                    Monomial::node(&l, &r)
                }
            }
        }
        walk(&self.skeleton, &mut self.branches.iter())
    }

    /// The `(i, j)` of every branch when this is a BCH-cut.
    pub fn bch_exponents(&self) -> Option<Vec<(usize, usize)>> {
        self.branches.iter().map(bch_branch_shape).collect()
    }
}

impl fmt::Display for Cut {
    /// Branches in brackets grafted onto the skeleton, e.g. `[x]([x][y])`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(t: &Monomial, it: &mut std::slice::Iter<'_, Monomial>, top: bool) -> String {
            match t.children() {
                None => format!("[{}]", it.next().unwrap().format(Style::Latex).replace(['{', '}'], "")),
                Some((l, r)) => {
                    let s = format!("{}{}", walk(l, it, false), walk(r, it, false));
                    if top {
                        s
                    } else {
                        format!("({s})")
                    }
                }
            }
        }
        write!(f, "{}", walk(&self.skeleton, &mut self.branches.iter(), true))
    }
}

/// `Some((i, j))` when `w = x^i · y^j` with left-normed powers; a pure
/// power gives `j = 0` or `i = 0`.
pub fn bch_branch_shape(w: &Monomial) -> Option<(usize, usize)> {
    if let Some((g, k)) = w.as_left_normed_power() {
        return match g {
            Generator::X => Some((k, 0)),
            Generator::Y => Some((0, k)),
            Generator::Z => None,
        };
    }
    let (l, r) = w.children()?;
    match (l.as_left_normed_power()?, r.as_left_normed_power()?) {
        ((Generator::X, i), (Generator::Y, j)) => Some((i, j)),
        _ => None,
    }
}

/// The BCH-cut branch `x^i · y^j`.
pub fn xy_branch(i: usize, j: usize) -> Result<Monomial> {
    match (i, j) {
        (0, 0) => Err(Error::InvalidArgument("a branch needs i + j >= 1".into())),
        (i, 0) => Monomial::left_normed_power(Generator::X, i),
        (0, j) => Monomial::left_normed_power(Generator::Y, j),
        (i, j) => Ok(Monomial::node(
            &Monomial::left_normed_power(Generator::X, i)?,
            &Monomial::left_normed_power(Generator::Y, j)?,
        )),
    }
}

fn cuts_from(w: &Monomial, offset: usize, keep: &dyn Fn(&Monomial) -> bool) -> Vec<Cut> {
    let mut out = Vec::new();
    if keep(w) {
        out.push(Cut::whole(w, offset));
    }
    if let Some((l, r)) = w.children() {
        let ls = cuts_from(l, offset, keep);
        if ls.is_empty() {
            return out;
        }
        let rs = cuts_from(r, offset + l.degree(), keep);
        for a in &ls {
            for b in &rs {
                out.push(Cut::join(a, b));
            }
        }
    }
    out
}

/// Every cut of `w`, from the trivial one (a single branch) downward.
pub fn enumerate_cuts(w: &Monomial) -> Vec<Cut> {
    cuts_from(w, 0, &|_| true)
}

/// Number of cuts, `c(w) = 1 + c(l) c(r)` and `c(leaf) = 1`.
pub fn count_cuts(w: &Monomial) -> BigInt {
    match w.children() {
        None => BigInt::one(),
        Some((l, r)) => BigInt::one() + count_cuts(l) * count_cuts(r),
    }
}

/// The cuts all of whose branches are `x^i y^j`.
pub fn enumerate_bch_cuts(w: &Monomial) -> Vec<Cut> {
    cuts_from(w, 0, &|m| bch_branch_shape(m).is_some())
}

/// The BCH-cut with the smallest skeleton: each maximal `x^i y^j` subtree
/// becomes one branch.
pub fn minimal_bch_cut(w: &Monomial) -> Cut {
    fn walk(w: &Monomial, offset: usize) -> Cut {
        if bch_branch_shape(w).is_some() {
            return Cut::whole(w, offset);
        }
        let (l, r) = w.children().expect("leaves are branches");
        Cut::join(&walk(l, offset), &walk(r, offset + l.degree()))
    }
    walk(w, 0)
}

/// `c_τ`, the coefficient of the skeleton in `log_l(1 + x)`.
pub fn c_tau(skeleton: &Monomial) -> Rational {
    log_coefficient(&skeleton.relabel(Generator::X)).expect("relabelled skeleton has one generator")
}

/// `Σ_{C(w)} c_τ / (Π i_k! Π j_k!)`, the coefficient of `w` in
/// `log_l(exp_l(x) exp_l(y))`.
pub fn coefficient_via_cuts(w: &Monomial) -> Rational {
    let mut acc = Rational::zero();
    for cut in enumerate_bch_cuts(w) {
        let mut den = BigInt::one();
        for (i, j) in cut.bch_exponents().expect("BCH-cut") {
            den *= factorial(i) * factorial(j);
        }
        acc += c_tau(&cut.skeleton) / Rational::from_integer(den);
    }
    acc
}

/// `coefficient_via_cuts` over a batch of monomials.
pub fn coefficients_via_cuts(ws: &[Monomial], strategy: Strategy) -> Vec<Rational> {
    par::map(strategy, ws, coefficient_via_cuts)
}

/// Coefficient of `x^m · y^n` in the BCH series: `1/(m! n!)` for `n >= 2`
/// and `m/(m+1)!` for `n = 1`.
pub fn closed_form_xmyn(m: usize, n: usize) -> Result<Rational> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("closed form needs m, n >= 1".into()));
    }
    Ok(if n >= 2 {
        Rational::new(BigInt::one(), factorial(m) * factorial(n))
    } else {
        Rational::new(BigInt::from(m), factorial(m + 1))
    })
}
