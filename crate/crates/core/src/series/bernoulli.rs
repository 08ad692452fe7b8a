//! Bernoulli numbers and the tree coefficients of the left logarithm.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Series;
use crate::error::{Error, Result};
use crate::magma::{Generator, Monomial};
use crate::rational::{binomial, factorial, Rational};

/// Bernoulli numbers `B_0..=B_n` with the convention `B_1 = -1/2`.
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl BernoulliTable {
    pub fn new(n: usize) -> BernoulliTable {
        let mut t = BernoulliTable {
            values: vec![Rational::one()],
        };
        t.extend_to(n);
        t
    }

    fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            // sum_{k=0}^{m} C(m+1, k) B_k = 0
            let mut acc = Rational::zero();
            for (k, b) in self.values.iter().enumerate() {
                acc += Rational::from_integer(binomial(m + 1, k)) * b;
            }
            self.values.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
        }
    }

    pub fn get(&self, n: usize) -> Option<&Rational> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

fn shared_table() -> &'static Mutex<BernoulliTable> {
    static TABLE: OnceLock<Mutex<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(BernoulliTable::new(16)))
}

pub fn bernoulli(n: usize) -> Rational {
    let mut t = shared_table().lock().unwrap_or_else(|e| e.into_inner());
    t.extend_to(n);
    t.values[n].clone()
}

/// Writes `tau = (...((x t_1) t_2) ...) t_k` and returns `[t_1..t_k]`.
fn left_spine(tau: &Monomial) -> Vec<&Monomial> {
    let mut rights = Vec::new();
    let mut cur = tau;
    while let Some((l, r)) = cur.children() {
        rights.push(r);
        cur = l;
    }
    rights.reverse();
    rights
}

fn tree_numbers(tau: &Monomial) -> (Rational, BigInt) {
    (tree_bernoulli(tau), tree_factorial_only(tau))
}

fn tree_bernoulli(tau: &Monomial) -> Rational {
    let parts = left_spine(tau);
    let mut b = bernoulli(parts.len());
    for p in parts {
        if b.is_zero() {
            break;
        }
        b *= tree_bernoulli(p);
    }
    b
}

fn tree_factorial_only(tau: &Monomial) -> BigInt {
    let parts = left_spine(tau);
    let mut f = factorial(parts.len());
    for p in parts {
        f *= tree_factorial_only(p);
    }
    f
}

fn check_single(tau: &Monomial) -> Result<()> {
    match tau.single_generator() {
        Some(_) => Ok(()),
        None => Err(Error::MixedGenerators(tau.to_string())),
    }
}

/// `B_tau = B_k * prod B_{tau_i}` over the left-spine decomposition.
pub fn b_tau(tau: &Monomial) -> Result<Rational> {
    check_single(tau)?;
    Ok(tree_numbers(tau).0)
}

/// `tau! = k! * prod tau_i!` over the left-spine decomposition.
pub fn tau_factorial(tau: &Monomial) -> Result<BigInt> {
    check_single(tau)?;
    Ok(tree_factorial_only(tau))
}

/// `B_tau / tau!`, the coefficient of `tau` in `log_l(1 + x)`.
pub fn log_coefficient(tau: &Monomial) -> Result<Rational> {
    check_single(tau)?;
    let (b, f) = tree_numbers(tau);
    Ok(b / Rational::from_integer(f))
}

/// `log_l(1 + x)` truncated at `n`, as a series in `x`.
pub fn log_l_one_plus_x(n: usize) -> Series {
    static CACHE: OnceLock<Mutex<Vec<Option<Series>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    if let Some(Some(s)) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(n) {
        return s.clone();
    }
    let mut s = Series::zero(n);
    for d in 1..=n {
        for tau in one_variable_trees(d) {
            let (b, f) = tree_numbers(&tau);
            if !b.is_zero() {
                s.add_term(tau, b / Rational::from_integer(f));
            }
        }
    }
    let mut c = cache.lock().unwrap_or_else(|e| e.into_inner());
    if c.len() <= n {
        c.resize(n + 1, None);
    }
    c[n] = Some(s.clone());
    s
}

fn one_variable_trees(d: usize) -> Vec<Monomial> {
    let mut levels: Vec<Vec<Monomial>> = vec![Vec::new(), vec![Monomial::leaf(Generator::X)]];
    for k in 2..=d {
        let mut level = Vec::new();
        for i in 1..k {
            for l in &levels[i] {
                for r in &levels[k - i] {
                    level.push(Monomial::node(l, r));
                }
            }
        }
        levels.push(level);
    }
    let mut out = levels.swap_remove(d);
    out.sort();
    out
}
