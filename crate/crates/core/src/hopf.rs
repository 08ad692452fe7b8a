//! Coproduct, counit and the two divisions on truncated series.
//!
//! Everything is computed on monomials first and cached process-wide; the
//! series-level functions are the linear extensions. A tensor side is an
//! `Option<Monomial>` with `None` standing for the unit.

use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::magma::{Monomial, Style};
use crate::rational::{format_rational, Rational};
use crate::series::{format_combination, json_rational, Series};

pub type Side = Option<Monomial>;

fn side_degree(s: &Side) -> usize {
    s.as_ref().map_or(0, Monomial::degree)
}

/// Product in the magma with the unit adjoined.
pub fn side_mul(a: &Side, b: &Side) -> Side {
    match (a, b) {
        (None, b) => b.clone(),
        (a, None) => a.clone(),
        (Some(a), Some(b)) => Some(Monomial::node(a, b)),
    }
}

fn side_label(s: &Side, style: Style) -> String {
    match s {
        None => "1".into(),
        Some(m) => m.format(style),
    }
}

fn side_json(s: &Side) -> Value {
    match s {
        None => Value::String("1".into()),
        Some(m) => m.to_json(),
    }
}

fn side_from_json(v: &Value) -> Result<Side> {
    if v.as_str() == Some("1") {
        return Ok(None);
    }
    Monomial::from_json(v).map(Some)
}

/// The series `c * s` for a side.
fn side_series(s: &Side, c: Rational, truncation: usize) -> Series {
    match s {
        None => Series::constant_series(c, truncation),
        Some(m) => Series::monomial(m.clone(), c, truncation),
    }
}

fn series_sides(s: &Series) -> impl Iterator<Item = (Side, &Rational)> {
    let constant = (!s.constant().is_zero()).then(|| (None, s.constant()));
    constant
        .into_iter()
        .chain(s.terms().map(|(m, c)| (Some(m.clone()), c)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSeries {
    terms: FxHashMap<(Side, Side), Rational>,
    truncation: usize,
}

impl TensorSeries {
    pub fn zero(truncation: usize) -> TensorSeries {
        TensorSeries {
            terms: FxHashMap::default(),
            truncation,
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn add_term(&mut self, a: Side, b: Side, c: Rational) {
        if c.is_zero() || side_degree(&a) + side_degree(&b) > self.truncation {
            return;
        }
        let key = (a, b);
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &TensorSeries) {
        self.truncation = self.truncation.min(other.truncation);
        let n = self.truncation;
        self.terms
            .retain(|(a, b), _| side_degree(a) + side_degree(b) <= n);
        for ((a, b), v) in &other.terms {
            self.add_term(a.clone(), b.clone(), c * v);
        }
    }

    pub fn coeff(&self, a: &Side, b: &Side) -> Rational {
        self.terms
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Side, Side), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `S ⊗ T`, truncated on total degree.
    pub fn tensor(s: &Series, t: &Series) -> TensorSeries {
        let n = s.truncation().min(t.truncation());
        let mut out = TensorSeries::zero(n);
        for (a, c) in series_sides(s) {
            for (b, d) in series_sides(t) {
                out.add_term(a.clone(), b, c * d);
            }
        }
        out
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn mul(&self, other: &TensorSeries) -> TensorSeries {
        let n = self.truncation.min(other.truncation);
        let mut out = TensorSeries::zero(n);
        for ((a, b), c) in &self.terms {
            let da = side_degree(a) + side_degree(b);
            for ((u, v), d) in &other.terms {
                if da + side_degree(u) + side_degree(v) > n {
                    continue;
                }
                out.add_term(side_mul(a, u), side_mul(b, v), c * d);
            }
        }
        out
    }

    /// The flip `a⊗b ↦ b⊗a`.
    pub fn swap(&self) -> TensorSeries {
        let mut out = TensorSeries::zero(self.truncation);
        for ((a, b), c) in &self.terms {
            out.add_term(b.clone(), a.clone(), c.clone());
        }
        out
    }

    /// `Σ c · ε(a) b`.
    pub fn counit_left(&self) -> Series {
        let mut out = Series::zero(self.truncation);
        for ((a, b), c) in &self.terms {
            if a.is_none() {
                out.add_scaled(&Rational::one(), &side_series(b, c.clone(), self.truncation));
            }
        }
        out
    }

    /// `Σ c · a ε(b)`.
    pub fn counit_right(&self) -> Series {
        self.swap().counit_left()
    }

    /// Terms sorted by (left, right) with the unit first.
    pub fn sorted_terms(&self) -> Vec<((Side, Side), Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn format(&self, style: Style) -> String {
        let sep = match style {
            Style::Compact => " ⊗ ",
            Style::Latex => " \\otimes ",
        };
        let items: Vec<(Rational, String)> = self
            .sorted_terms()
            .into_iter()
            .map(|((a, b), c)| (c, format!("{}{sep}{}", side_label(&a, style), side_label(&b, style))))
            .collect();
        format_combination(&items, style)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|((a, b), c)| {
                json!({"monomial": [side_json(&a), side_json(&b)], "coeff": format_rational(&c)})
            })
            .collect();
        json!({"truncation": self.truncation, "terms": terms})
    }

    pub fn from_json(value: &Value) -> Result<TensorSeries> {
        let truncation = value
            .get("truncation")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing truncation".into()))? as usize;
        let mut out = TensorSeries::zero(truncation);
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing terms".into()))?;
        for t in terms {
            let pair = t
                .get("monomial")
                .and_then(Value::as_array)
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Json("tensor term needs a [left, right] pair".into()))?;
            let a = side_from_json(&pair[0])?;
            let b = side_from_json(&pair[1])?;
            let c = json_rational(
                t.get("coeff")
                    .ok_or_else(|| Error::Json("term without coeff".into()))?,
            )?;
            out.add_term(a, b, c);
        }
        Ok(out)
    }
}

impl fmt::Display for TensorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Style::Compact))
    }
}

type Components = Arc<Vec<(Side, Side, Rational)>>;
type Linear = Arc<Vec<(Monomial, Rational)>>;

fn coproduct_cache() -> &'static RwLock<FxHashMap<Monomial, Components>> {
    static CACHE: OnceLock<RwLock<FxHashMap<Monomial, Components>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `Δ(m)` as a list of `(left, right, multiplicity)`; equivalently the sum
/// over subsets of leaves of `m|_S ⊗ m|_{S^c}`.
pub fn coproduct_monomial(m: &Monomial) -> Components {
    if let Some(c) = coproduct_cache().read().unwrap_or_else(|e| e.into_inner()).get(m) {
        return c.clone();
    }
    let out: Vec<(Side, Side, Rational)> = match m.children() {
        None => vec![
            (Some(m.clone()), None, Rational::one()),
            (None, Some(m.clone()), Rational::one()),
        ],
        Some((l, r)) => {
            let dl = coproduct_monomial(l);
            let dr = coproduct_monomial(r);
            let mut acc: FxHashMap<(Side, Side), Rational> = FxHashMap::default();
            for (a, b, c) in dl.iter() {
                for (u, v, d) in dr.iter() {
                    *acc.entry((side_mul(a, u), side_mul(b, v)))
                        .or_insert_with(Rational::zero) += c * d;
                }
            }
            let mut v: Vec<_> = acc.into_iter().map(|((a, b), c)| (a, b, c)).collect();
            v.sort_by(|x, y| (&x.0, &x.1).cmp(&(&y.0, &y.1)));
            v
        }
    };
    let out = Arc::new(out);
    coproduct_cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(m.clone(), out.clone());
    out
}

/// Components of `Δ(m)` with both sides different from the unit.
fn proper_components(m: &Monomial) -> impl Iterator<Item = (Monomial, Monomial, Rational)> {
    let all = coproduct_monomial(m);
    (0..all.len()).filter_map(move |i| match &all[i] {
        (Some(a), Some(b), c) => Some((a.clone(), b.clone(), c.clone())),
        _ => None,
    })
}

pub fn coproduct(s: &Series) -> TensorSeries {
    let mut out = TensorSeries::zero(s.truncation());
    out.add_term(None, None, s.constant().clone());
    for (m, c) in s.terms() {
        for (a, b, k) in coproduct_monomial(m).iter() {
            out.add_term(a.clone(), b.clone(), c * k);
        }
    }
    out
}

pub fn counit(s: &Series) -> Rational {
    s.constant().clone()
}

type DivisionCache = RwLock<FxHashMap<(Monomial, Side), Linear>>;

fn left_cache() -> &'static DivisionCache {
    static CACHE: OnceLock<DivisionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn right_cache() -> &'static DivisionCache {
    static CACHE: OnceLock<DivisionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn accumulate_linear(acc: &mut FxHashMap<Monomial, Rational>, m: Monomial, c: Rational) {
    let e = acc.entry(m.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&m);
    }
}

fn finish(acc: FxHashMap<Monomial, Rational>) -> Linear {
    let mut v: Vec<_> = acc.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    Arc::new(v)
}

/// `u \ v` for a monomial `u` and a monomial or unit `v`:
/// `u\v = −uv − Σ' u_(1) \ (u_(2) v)`.
pub fn left_divide_monomial(u: &Monomial, v: &Side) -> Linear {
    let key = (u.clone(), v.clone());
    if let Some(r) = left_cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return r.clone();
    }
    let mut acc = FxHashMap::default();
    let uv = side_mul(&Some(u.clone()), v).expect("nonunit product");
    accumulate_linear(&mut acc, uv, -Rational::one());
    for (a, b, k) in proper_components(u) {
        let w = side_mul(&Some(b), v);
        for (m, c) in left_divide_monomial(&a, &w).iter() {
            accumulate_linear(&mut acc, m.clone(), -(&k * c));
        }
    }
    let out = finish(acc);
    left_cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, out.clone());
    out
}

/// `v / u` for a monomial `u` and a monomial or unit `v`:
/// `v/u = −vu − Σ' (v u_(1)) / u_(2)`.
pub fn right_divide_monomial(v: &Side, u: &Monomial) -> Linear {
    let key = (u.clone(), v.clone());
    if let Some(r) = right_cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return r.clone();
    }
    let mut acc = FxHashMap::default();
    let vu = side_mul(v, &Some(u.clone())).expect("nonunit product");
    accumulate_linear(&mut acc, vu, -Rational::one());
    for (a, b, k) in proper_components(u) {
        let w = side_mul(v, &Some(a));
        for (m, c) in right_divide_monomial(&w, &b).iter() {
            accumulate_linear(&mut acc, m.clone(), -(&k * c));
        }
    }
    let out = finish(acc);
    right_cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .insert(key, out.clone());
    out
}

fn divide_sides(out: &mut Series, u: &Side, v: &Side, c: &Rational, left: bool) {
    match u {
        None => out.add_scaled(&Rational::one(), &side_series(v, c.clone(), out.truncation())),
        Some(u) => {
            let r = if left {
                left_divide_monomial(u, v)
            } else {
                right_divide_monomial(v, u)
            };
            for (m, k) in r.iter() {
                out.add_term(m.clone(), c * k);
            }
        }
    }
}

/// `U \ V`, bilinear extension of the monomial division.
pub fn left_divide(u: &Series, v: &Series) -> Series {
    let n = u.truncation().min(v.truncation());
    let mut out = Series::zero(n);
    for (a, c) in series_sides(u) {
        for (b, d) in series_sides(v) {
            if side_degree(&a) + side_degree(&b) <= n {
                divide_sides(&mut out, &a, &b, &(c * d), true);
            }
        }
    }
    out
}

/// `V / U`, bilinear extension of the monomial division.
pub fn right_divide(v: &Series, u: &Series) -> Series {
    let n = u.truncation().min(v.truncation());
    let mut out = Series::zero(n);
    for (a, c) in series_sides(u) {
        for (b, d) in series_sides(v) {
            if side_degree(&a) + side_degree(&b) <= n {
                divide_sides(&mut out, &a, &b, &(c * d), false);
            }
        }
    }
    out
}

/// `a \ S` for a single side `a`.
pub fn left_divide_side(a: &Side, s: &Series) -> Series {
    let n = s.truncation();
    let mut out = Series::zero(n);
    for (b, c) in series_sides(s) {
        if side_degree(a) + side_degree(&b) <= n {
            divide_sides(&mut out, a, &b, c, true);
        }
    }
    out
}

/// `Σ c · (a \ b)` over the terms of a tensor.
pub fn left_divide_tensor(t: &TensorSeries) -> Series {
    let mut out = Series::zero(t.truncation());
    for ((a, b), c) in t.terms() {
        divide_sides(&mut out, a, b, c, true);
    }
    out
}

/// `Σ c · (a / b)` over the terms of a tensor.
pub fn right_divide_tensor(t: &TensorSeries) -> Series {
    let mut out = Series::zero(t.truncation());
    for ((a, b), c) in t.terms() {
        divide_sides(&mut out, b, a, c, false);
    }
    out
}

pub fn is_primitive(s: &Series) -> bool {
    if !s.constant().is_zero() {
        return false;
    }
    // Δ(S) - S⊗1 - 1⊗S vanishes iff every proper component cancels.
    let mut acc: FxHashMap<(Monomial, Monomial), Rational> = FxHashMap::default();
    for (m, c) in s.terms() {
        for (a, b, k) in proper_components(m) {
            let e = acc.entry((a, b)).or_insert_with(Rational::zero);
            *e += c * &k;
        }
    }
    acc.values().all(Zero::is_zero)
}

pub fn is_grouplike(s: &Series) -> bool {
    s.constant().is_one() && coproduct(s) == TensorSeries::tensor(s, s)
}

pub type Triple = FxHashMap<(Side, Side, Side), Rational>;

fn add_triple(t: &mut Triple, key: (Side, Side, Side), c: Rational) {
    let e = t.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

fn side_coproduct(s: &Side) -> Vec<(Side, Side, Rational)> {
    match s {
        None => vec![(None, None, Rational::one())],
        Some(m) => coproduct_monomial(m).to_vec(),
    }
}

/// `(Δ ⊗ Id) Δ(S)`.
pub fn coproduct_left_iterated(s: &Series) -> Triple {
    let mut out = Triple::default();
    for ((a, b), c) in coproduct(s).terms() {
        for (a1, a2, k) in side_coproduct(a) {
            add_triple(&mut out, (a1, a2, b.clone()), c * k);
        }
    }
    out
}

/// `(Id ⊗ Δ) Δ(S)`.
pub fn coproduct_right_iterated(s: &Series) -> Triple {
    let mut out = Triple::default();
    for ((a, b), c) in coproduct(s).terms() {
        for (b1, b2, k) in side_coproduct(b) {
            add_triple(&mut out, (a.clone(), b1, b2), c * k);
        }
    }
    out
}

/// The four division axioms for monomial `u` and side `v`, each returned as
/// (left-hand side, expected `ε(u) v`).
pub fn division_axioms(u: &Monomial, v: &Side, n: usize) -> [(Series, Series); 4] {
    let vs = side_series(v, Rational::one(), n);
    let expected = Series::zero(n);
    let comps = coproduct_monomial(u);
    let mut l1 = Series::zero(n);
    let mut l2 = Series::zero(n);
    let mut l3 = Series::zero(n);
    let mut l4 = Series::zero(n);
    for (a, b, k) in comps.iter() {
        let a_s = side_series(a, Rational::one(), n);
        let b_s = side_series(b, Rational::one(), n);
        // u1 \ (u2 v)
        l1.add_scaled(k, &left_divide(&a_s, &(&b_s * &vs)));
        // u1 (u2 \ v)
        l2.add_scaled(k, &(&a_s * &left_divide(&b_s, &vs)));
        // (v u1) / u2
        l3.add_scaled(k, &right_divide(&(&vs * &a_s), &b_s));
        // (v / u1) u2
        l4.add_scaled(k, &(&right_divide(&vs, &a_s) * &b_s));
    }
    [
        (l1, expected.clone()),
        (l2, expected.clone()),
        (l3, expected.clone()),
        (l4, expected),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magma::Generator;
    use crate::rational::{int, rat};
    use proptest::prelude::{prop_assert, prop_assert_eq, proptest};
    use proptest::strategy::Strategy as _;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }
    fn sm(s: &str) -> Side {
        Some(m(s))
    }

    // Oracle: Δ via explicit subsets of leaves.
    fn restrict(w: &Monomial, mask: u64, offset: &mut usize) -> Side {
        match w.children() {
            None => {
                let keep = mask >> *offset & 1 == 1;
                *offset += 1;
                keep.then(|| w.clone())
            }
            Some((l, r)) => {
                let a = restrict(l, mask, offset);
                let b = restrict(r, mask, offset);
                side_mul(&a, &b)
            }
        }
    }

    fn brute_coproduct(w: &Monomial) -> TensorSeries {
        let d = w.degree();
        let mut out = TensorSeries::zero(d);
        for mask in 0..(1u64 << d) {
            let a = restrict(w, mask, &mut 0);
            let b = restrict(w, !mask, &mut 0);
            out.add_term(a, b, int(1));
        }
        out
    }

    #[test]
    fn coproduct_examples() {
        let d = coproduct(&Series::x(3));
        let mut e = TensorSeries::zero(3);
        e.add_term(sm("x"), None, int(1));
        e.add_term(None, sm("x"), int(1));
        assert_eq!(d, e);

        let d = coproduct(&Series::monomial(m("(xy)"), int(1), 3));
        assert_eq!(d.len(), 4);
        assert_eq!(d.coeff(&sm("x"), &sm("y")), int(1));
        assert_eq!(d.coeff(&sm("y"), &sm("x")), int(1));
        assert_eq!(d.coeff(&sm("(xy)"), &None), int(1));

        assert_eq!(coproduct(&Series::one(2)).coeff(&None, &None), int(1));

        let d = coproduct(&Series::monomial(m("(xx)"), int(1), 3));
        assert_eq!(d.coeff(&sm("x"), &sm("x")), int(2));
    }

    #[test]
    fn coproduct_matches_subset_oracle() {
        for w in Monomial::enumerate_up_to(5) {
            let s = Series::monomial(w.clone(), int(1), 5);
            let mut ours = coproduct(&s);
            ours.truncation = w.degree();
            assert_eq!(ours, brute_coproduct(&w), "{w}");
        }
    }

    #[test]
    fn division_examples() {
        assert_eq!(left_divide(&Series::one(3), &Series::y(3)), Series::y(3));
        assert_eq!(
            left_divide(&Series::x(3), &Series::y(3)),
            Series::monomial(m("(xy)"), int(-1), 3)
        );
        assert_eq!(
            right_divide(&Series::y(3), &Series::x(3)),
            Series::monomial(m("(yx)"), int(-1), 3)
        );
        // (xx)\y = -(xx)y - 2 x\(xy) = -(xx)y + 2 x(xy)
        let r = left_divide(&Series::monomial(m("(xx)"), int(1), 3), &Series::y(3));
        let e = Series::from_terms(int(0), [(m("((xx)y)"), int(-1)), (m("(x(xy))"), int(2))], 3);
        assert_eq!(r, e);
    }

    #[test]
    fn division_axioms_hold() {
        let mut vs: Vec<Side> = vec![None];
        vs.extend(Monomial::enumerate_up_to(2).into_iter().map(Some));
        for u in Monomial::enumerate_up_to(4) {
            for v in &vs {
                let n = u.degree() + side_degree(v);
                for (i, (lhs, rhs)) in division_axioms(&u, v, n).into_iter().enumerate() {
                    assert_eq!(lhs, rhs, "axiom {} for u={u}, v={v:?}", i + 1);
                }
            }
        }
        // with the unit: ε(1) v = v
        let v = Series::monomial(m("(xy)"), int(1), 4);
        assert_eq!(left_divide(&Series::one(4), &(&Series::one(4) * &v)), v);
    }

    #[test]
    fn grouplike_division_reproduces_argument() {
        for n in 1..=5 {
            let u = Series::exp_l(&Series::x(n), n).unwrap();
            let v = &Series::y(n) + &Series::monomial(m("(yx)"), rat(1, 3), n);
            let d = coproduct(&u);
            let mut total = Series::zero(n);
            for ((a, b), c) in d.terms() {
                let a_s = side_series(a, int(1), n);
                let b_s = side_series(b, int(1), n);
                total.add_scaled(c, &left_divide(&a_s, &(&b_s * &v)));
            }
            assert_eq!(total, v, "n = {n}");
        }
    }

    #[test]
    fn primitive_and_grouplike_examples() {
        assert!(is_primitive(&(&Series::x(4) + &Series::y(4))));
        assert!(!is_primitive(&Series::monomial(m("(xy)"), int(1), 4)));
        let comm = &Series::monomial(m("(xy)"), int(1), 4) - &Series::monomial(m("(yx)"), int(1), 4);
        assert!(is_primitive(&comm));
        assert!(!is_primitive(&Series::one(3)));

        let ex = Series::exp_l(&Series::x(5), 5).unwrap();
        let ey = Series::exp_l(&Series::y(5), 5).unwrap();
        assert!(is_grouplike(&ex));
        assert!(is_grouplike(&Series::exp_r(&Series::y(5), 5).unwrap()));
        assert!(is_grouplike(&(&ex * &ey)));
        assert!(!is_grouplike(&(&Series::one(2) + &Series::x(2))));
        assert_eq!(counit(&ex), int(1));
    }

    #[test]
    fn counit_axioms() {
        for w in Monomial::enumerate_up_to(5) {
            let s = Series::monomial(w, int(1), 5);
            let d = coproduct(&s);
            assert_eq!(d.counit_left(), s);
            assert_eq!(d.counit_right(), s);
        }
    }

    #[test]
    fn json_round_trip() {
        let d = coproduct(&Series::monomial(m("(xy)"), rat(1, 2), 3));
        let j = d.to_json();
        assert_eq!(j["terms"][0]["monomial"], json!(["1", ["x", "y"]]));
        assert_eq!(TensorSeries::from_json(&j).unwrap(), d);
        assert_eq!(d.to_string(), "1/2 1 ⊗ (xy) + 1/2 x ⊗ y + 1/2 y ⊗ x + 1/2 (xy) ⊗ 1");
    }

    fn arb_series() -> impl proptest::strategy::Strategy<Value = Series> {
        let monos = Monomial::enumerate_up_to(3);
        let len = monos.len();
        proptest::collection::vec((0..len, -3i64..=3), 0..5).prop_map(move |picks| {
            Series::from_terms(
                int(1),
                picks.into_iter().map(|(i, a)| (monos[i].clone(), int(a))),
                4,
            )
        })
    }

    proptest! {
        #[test]
        fn coassociative_and_cocommutative(s in arb_series()) {
            prop_assert_eq!(coproduct_left_iterated(&s), coproduct_right_iterated(&s));
            let d = coproduct(&s);
            prop_assert_eq!(d.swap(), d);
        }

        #[test]
        fn coproduct_is_multiplicative(s in arb_series(), t in arb_series()) {
            prop_assert_eq!(coproduct(&(&s * &t)), coproduct(&s).mul(&coproduct(&t)));
        }

        #[test]
        fn commutators_are_primitive(s in arb_series(), t in arb_series()) {
            let a = s.positive_part();
            let b = t.positive_part();
            let pa = a.filter(|m| m.is_leaf());
            let pb = b.filter(|m| m.is_leaf());
            let c = &(&pa * &pb) - &(&pb * &pa);
            prop_assert!(is_primitive(&c));
        }
    }

    #[test]
    fn caches_are_thread_safe() {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                std::thread::spawn(|| {
                    let w = Monomial::left_normed_power(Generator::Y, 5).unwrap();
                    left_divide_monomial(&w, &Some(Monomial::x())).len()
                })
            })
            .collect();
        let lens: Vec<usize> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(lens.windows(2).all(|w| w[0] == w[1]));
    }
}
