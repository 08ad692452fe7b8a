//! Coalgebra derivations and the map `γ_d(u) = Σ u_(1) \ d(u_(2))`.

use std::collections::HashMap;

use num_traits::One;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::hopf::{coproduct_monomial, left_divide_side, Side};
use crate::magma::{Generator, Monomial};
use crate::prim::{PrimCombination, PrimExpr};
use crate::rational::Rational;
use crate::series::Series;
use crate::suops::su_bracket_elem;

#[derive(Clone, Debug, PartialEq)]
pub enum Derivation {
    /// `d(u) = |u| u` on homogeneous `u`.
    Degree,
    /// The derivation sending `target` to `value` and fixing the other
    /// generators' images at zero.
    Substitution { target: Generator, value: Series },
}

impl Derivation {
    /// `y∂_x`: `x ↦ y`, `y ↦ 0`.
    pub fn y_dx(n: usize) -> Derivation {
        Derivation::Substitution {
            target: Generator::X,
            value: Series::y(n),
        }
    }

    fn on_monomial(&self, m: &Monomial, n: usize, memo: &mut FxHashMap<Monomial, Series>) -> Series {
        match self {
            Derivation::Degree => Series::monomial(m.clone(), Rational::from_integer(m.degree().into()), n),
            Derivation::Substitution { target, value } => {
                if let Some(s) = memo.get(m) {
                    return s.clone();
                }
                let out = match m.children() {
                    None => {
                        if m.as_leaf() == Some(*target) {
                            value.with_truncation(n)
                        } else {
                            Series::zero(n)
                        }
                    }
                    Some((l, r)) => {
                        let dl = self.on_monomial(l, n, memo);
                        let dr = self.on_monomial(r, n, memo);
                        let ls = Series::monomial(l.clone(), Rational::one(), n);
                        let rs = Series::monomial(r.clone(), Rational::one(), n);
                        &(&dl * &rs) + &(&ls * &dr)
                    }
                };
                memo.insert(m.clone(), out.clone());
                out
            }
        }
    }

    pub fn apply(&self, s: &Series) -> Series {
        let n = s.truncation();
        let mut memo = FxHashMap::default();
        let mut out = Series::zero(n);
        for (m, c) in s.terms() {
            out.add_scaled(c, &self.on_monomial(m, n, &mut memo));
        }
        out
    }
}

/// `γ_d(S) = Σ S_(1) \ d(S_(2))`.
pub fn gamma(d: &Derivation, s: &Series) -> Series {
    let n = s.truncation();
    let mut memo = FxHashMap::default();
    let mut by_left: FxHashMap<Side, Series> = FxHashMap::default();
    for (m, c) in s.terms() {
        for (a, b, k) in coproduct_monomial(m).iter() {
            let Some(b) = b else { continue };
            let db = d.on_monomial(b, n, &mut memo);
            by_left
                .entry(a.clone())
                .or_insert_with(|| Series::zero(n))
                .add_scaled(&(c * k), &db);
        }
    }
    let mut keys: Vec<Side> = by_left.keys().cloned().collect();
    keys.sort();
    let mut out = Series::zero(n);
    for a in keys {
        out.add_scaled(&Rational::one(), &left_divide_side(&a, &by_left[&a]));
    }
    out
}

fn side_series(s: &Side, n: usize) -> Series {
    match s {
        None => Series::one(n),
        Some(m) => Series::monomial(m.clone(), Rational::one(), n),
    }
}

/// Both sides of `γ_d(ua) = ε(u) d(a) + Σ <u_(1); a, γ_d(u_(2))>`, with
/// `u = None` the unit.
pub fn dsw_identity_sides(u: &Side, a: Generator, d: &Derivation, n: usize) -> (Series, Series) {
    let a_m = Monomial::leaf(a);
    let ua = match u {
        None => a_m.clone(),
        Some(u) => Monomial::node(u, &a_m),
    };
    let lhs = gamma(d, &Series::monomial(ua, Rational::one(), n));
    let a_s = Series::generator(a, n);
    let mut rhs = Series::zero(n);
    if u.is_none() {
        rhs.add_scaled(&Rational::one(), &d.apply(&a_s));
    }
    let comps: Vec<(Side, Side, Rational)> = match u {
        None => vec![(None, None, Rational::one())],
        Some(u) => coproduct_monomial(u).to_vec(),
    };
    for (u1, u2, k) in comps {
        let g = gamma(d, &side_series(&u2, n));
        if g.is_zero() {
            continue;
        }
        rhs.add_scaled(&k, &su_bracket_elem(&side_series(&u1, n), &a_s, &g));
    }
    (lhs, rhs)
}

pub fn dsw_identity_check(u: &Side, a: Generator, d: &Derivation, n: usize) -> bool {
    let (l, r) = dsw_identity_sides(u, a, d, n);
    l == r
}

/// Symbolic `γ_deg(w)` for a left-normed word `w = ((g_1 g_2) ...) g_k`.
pub fn bracketize_word(w: &Monomial) -> Result<PrimCombination> {
    if !w.is_left_normed() {
        return Err(Error::InvalidArgument(format!("{w} is not a left-normed word")));
    }
    let mut memo = HashMap::new();
    Ok(bracketize(&w.word(), &mut memo))
}

fn bracketize(word: &[Generator], memo: &mut HashMap<Vec<Generator>, PrimCombination>) -> PrimCombination {
    if let Some(c) = memo.get(word) {
        return c.clone();
    }
    let (last, head) = word.split_last().expect("nonempty word");
    let a = PrimExpr::Gen(*last);
    let out = if head.is_empty() {
        PrimCombination::from_expr(a)
    } else {
        let mut out = PrimCombination::zero();
        let k = head.len();
        // subsets S of the prefix letters, S ≠ all: <w|_S; a, γ(w|_{S^c})>
        for mask in 0u64..(1u64 << k) - 1 {
            let mut chosen = Vec::new();
            let mut rest = Vec::new();
            for (i, g) in head.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    chosen.push(PrimExpr::Gen(*g));
                } else {
                    rest.push(*g);
                }
            }
            let inner = bracketize(&rest, memo);
            for (e, c) in inner.terms() {
                out.add_term(PrimExpr::bracket(chosen.clone(), a.clone(), e.clone()), c.clone());
            }
        }
        out
    };
    memo.insert(word.to_vec(), out.clone());
    out
}

/// `d(u) = Σ u_(1) γ_d(u_(2))` for a monomial `u`.
pub fn reconstruction_sides(u: &Monomial, d: &Derivation, n: usize) -> (Series, Series) {
    let s = Series::monomial(u.clone(), Rational::one(), n);
    let lhs = d.apply(&s);
    let mut rhs = Series::zero(n);
    for (a, b, k) in coproduct_monomial(u).iter() {
        let g = gamma(d, &side_series(b, n));
        if g.is_zero() {
            continue;
        }
        rhs.add_scaled(k, &(&side_series(a, n) * &g));
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::is_primitive;
    use crate::rational::int;
    use crate::suops::{associator, eval_combination};
    use Generator::{X, Y, Z};

    fn m(s: &str) -> Monomial {
        Monomial::parse_extended(s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let d = Derivation::y_dx(3);
        assert_eq!(d.apply(&Series::x(3)), Series::y(3));
        assert!(d.apply(&Series::y(3)).is_zero());
        let e = Series::from_terms(int(0), [(m("(yx)"), int(1)), (m("(xy)"), int(1))], 3);
        assert_eq!(d.apply(&Series::monomial(m("(xx)"), int(1), 3)), e);
        let s = &Series::monomial(m("(xy)"), int(1), 3) + &Series::x(3);
        let e = &Series::monomial(m("(xy)"), int(2), 3) + &Series::x(3);
        assert_eq!(Derivation::Degree.apply(&s), e);
    }

    #[test]
    fn derivations_preserve_primitives() {
        let n = 4;
        let p = crate::suops::su_bracket(&[&Series::x(n)], &Series::x(n), &Series::y(n));
        assert!(is_primitive(&Derivation::y_dx(n).apply(&p)));
        assert!(is_primitive(&Derivation::Degree.apply(&p)));
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&Derivation::Degree, &Series::monomial(m("(xy)"), int(1), 3));
        let e = crate::suops::su_bracket(&[], &Series::y(3), &Series::x(3));
        assert_eq!(g, e);
        let p = crate::suops::su_bracket(&[&Series::x(4)], &Series::x(4), &Series::y(4));
        assert_eq!(gamma(&Derivation::Degree, &p), p.scale(&int(3)));
    }

    #[test]
    fn reconstruction_identity() {
        for d in [Derivation::Degree, Derivation::y_dx(6)] {
            for u in Monomial::enumerate_up_to(5) {
                let (l, r) = reconstruction_sides(&u, &d, 6);
                assert_eq!(l, r, "{u} {d:?}");
            }
        }
    }

    #[test]
    fn product_rule_identity() {
        let mut us: Vec<Side> = vec![None];
        us.extend(Monomial::enumerate_up_to(3).into_iter().map(Some));
        for d in [Derivation::Degree, Derivation::y_dx(5)] {
            for u in &us {
                for a in [X, Y] {
                    assert!(dsw_identity_check(u, a, &d, 5), "{u:?} {a} {d:?}");
                }
            }
        }
        assert!(dsw_identity_check(&Some(m("(xy)")), X, &Derivation::y_dx(4), 4));
    }

    #[test]
    fn bracketize_examples() {
        let c = bracketize_word(&m("(xy)")).unwrap();
        assert_eq!(c, PrimCombination::parse("<y,x>").unwrap());
        let c = bracketize_word(&m("((xy)z)")).unwrap();
        let e = PrimCombination::parse_extended("<z,<y,x>> + <x;z,y> + <y;z,x>").unwrap();
        assert_eq!(c, e);
        assert!(bracketize_word(&m("(x(xy))")).is_err());
        for w in Monomial::enumerate_up_to(5).into_iter().filter(Monomial::is_left_normed) {
            let n = w.degree();
            let sym = eval_combination(&bracketize_word(&w).unwrap(), n);
            let num = gamma(&Derivation::Degree, &Series::monomial(w.clone(), int(1), n));
            assert_eq!(sym, num, "{w}");
        }
    }

    #[test]
    fn mixed_product_identity() {
        let n = 3;
        let lhs = gamma(&Derivation::Degree, &Series::monomial(m("(x(yz))"), int(1), n));
        let c = PrimCombination::parse_extended("<z,<y,x>> + <x;z,y> + <y;z,x>").unwrap();
        let (a, b, z) = (Series::x(n), Series::y(n), Series::generator(Z, n));
        let mut rhs = eval_combination(&c, n);
        rhs.add_scaled(&int(-3), &associator(&a, &b, &z));
        assert_eq!(lhs, rhs);
    }
}
