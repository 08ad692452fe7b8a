//! Binary trees whose level sums produce Bernoulli numbers and the `n_J`.
//!
//! Labels are self-contained, so levels are generated directly from the
//! previous level without keeping parent links.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::magnus::{m_coeff, Composition};
use crate::par::{self, Strategy};
use crate::rational::{factorial, Rational};

/// Label `[a_1, ..., a_r]` with `a_1 = ±1` and `a_i >= 2` otherwise.
pub type WoonNode = Vec<i64>;

/// Label `(a_1, ..., a_r)` of positive integers.
pub type PINode = Vec<usize>;

pub fn woon_children(a: &WoonNode) -> [WoonNode; 2] {
    let mut left = a.clone();
    left[0] = -left[0];
    left[1] += 1;
    let mut right = Vec::with_capacity(a.len() + 1);
    right.push(a[0]);
    right.push(2);
    right.extend_from_slice(&a[1..]);
    [left, right]
}

/// Level `k >= 1`; the root `[1,2]` is level 1.
pub fn woon_level(k: usize) -> Vec<WoonNode> {
    let mut level = vec![vec![1, 2]];
    for _ in 1..k {
        level = level.iter().flat_map(woon_children).collect();
    }
    level
}

/// `1 / (a_1 · a_2! ··· a_r!)`.
pub fn woon_value(a: &WoonNode) -> Rational {
    let mut den = BigInt::from(a[0]);
    for &ai in &a[1..] {
        den *= factorial(ai as usize);
    }
    Rational::new(BigInt::one(), den)
}

pub fn woon_level_sum(k: usize) -> Result<Rational> {
    woon_level_sum_with(k, Strategy::Sequential)
}

pub fn woon_level_sum_with(k: usize, strategy: Strategy) -> Result<Rational> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("the Woon tree sums need k >= 2, got {k}")));
    }
    Ok(par::sum(strategy, &woon_level(k), woon_value))
}

pub fn pi_children(a: &PINode) -> [PINode; 2] {
    let mut left = Vec::with_capacity(a.len() + 1);
    left.push(1);
    left.extend_from_slice(a);
    let mut right = a.clone();
    right[0] += 1;
    [left, right]
}

/// Level `k >= 1`; the root `(1)` is level 1.
pub fn pi_level(k: usize) -> Vec<PINode> {
    let mut level = vec![vec![1]];
    for _ in 1..k {
        level = level.iter().flat_map(pi_children).collect();
    }
    level
}

/// Level sum of `Π c_{a_i}` where `c[i]` holds `c_{i+1}`.
pub fn fuchs_level_sum(k: usize, c: &[Rational]) -> Result<Rational> {
    fuchs_level_sum_with(k, c, Strategy::Sequential)
}

pub fn fuchs_level_sum_with(k: usize, c: &[Rational], strategy: Strategy) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidArgument("levels start at 1".into()));
    }
    if c.len() < k {
        return Err(Error::InvalidArgument(format!(
            "level {k} needs c_1..c_{k}, got {} values",
            c.len()
        )));
    }
    Ok(par::sum(strategy, &pi_level(k), |a| a.iter().map(|&ai| c[ai - 1].clone()).product()))
}

/// `c_n = -1/(n+1)!` for `n = 1..=k`.
pub fn bernoulli_weights(k: usize) -> Vec<Rational> {
    (1..=k)
        .map(|n| Rational::new(-BigInt::one(), factorial(n + 1)))
        .collect()
}

/// Level `s` of the word tree: every split of `x_1 ... x_s` into consecutive
/// nonempty blocks, given by block lengths. The node `(w_1, ..., w_r)` has
/// children `(w_1, ..., w_r, x_{s+1})` and `(w_1, ..., w_r x_{s+1})`.
pub fn word_level(s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return Vec::new();
    }
    let mut level = vec![vec![1]];
    for _ in 1..s {
        level = level
            .iter()
            .flat_map(|w| {
                let mut split = w.clone();
                split.push(1);
                let mut joined = w.clone();
                *joined.last_mut().unwrap() += 1;
                [split, joined]
            })
            .collect();
    }
    level
}

/// Sum over level `|J|` of the word tree, with a block `x_i ... x_j`
/// weighted by `-m_{(a_i, ..., a_j)}`.
pub fn nj_tree_sum(j: &Composition) -> Rational {
    nj_tree_sum_with(j, Strategy::Sequential)
}

pub fn nj_tree_sum_with(j: &Composition, strategy: Strategy) -> Rational {
    let parts = j.parts();
    par::sum(strategy, &word_level(parts.len()), |blocks| {
        let mut start = 0;
        let mut v = Rational::one();
        for &len in blocks {
            let block = Composition::new(parts[start..start + len].to_vec()).expect("nonempty block");
            v *= -m_coeff(&block);
            start += len;
            if v.is_zero() {
                break;
            }
        }
        v
    })
}
