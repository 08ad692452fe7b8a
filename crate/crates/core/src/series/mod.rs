//! Truncated formal power series in the free non-associative algebra.
//!
//! A [`Series`] is a sparse map from monomials to exact rationals plus a
//! constant term, carrying its truncation degree `N`: everything of degree
//! above `N` is dropped. Binary operations on series of different
//! truncations produce the smaller one and raise [`Series::truncation_clamped`].

mod assoc;
mod bernoulli;

pub use assoc::{dynkin_bch, project_associative, AssocSeries, Word};
pub use bernoulli::{
    b_tau, bernoulli, log_coefficient, log_l_one_plus_x, tau_factorial, BernoulliTable,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::magma::{Generator, Monomial, Style};
use crate::par::Strategy;
use crate::rational::{format_rational, inv_factorial, latex_rational, parse_rational, Rational};

pub type TermMap = FxHashMap<Monomial, Rational>;

#[derive(Clone, Debug)]
pub struct Series {
    constant: Rational,
    terms: TermMap,
    truncation: usize,
    clamped: bool,
}

impl PartialEq for Series {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation
            && self.constant == other.constant
            && self.terms == other.terms
    }
}

impl Eq for Series {}

pub(crate) fn accumulate(map: &mut TermMap, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match map.entry(m) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl Series {
    pub fn zero(truncation: usize) -> Series {
        Series {
            constant: Rational::zero(),
            terms: TermMap::default(),
            truncation,
            clamped: false,
        }
    }

    pub fn one(truncation: usize) -> Series {
        Series::constant_series(Rational::one(), truncation)
    }

    pub fn constant_series(c: Rational, truncation: usize) -> Series {
        Series {
            constant: c,
            ..Series::zero(truncation)
        }
    }

    pub fn generator(g: Generator, truncation: usize) -> Series {
        Series::monomial(Monomial::leaf(g), Rational::one(), truncation)
    }

    pub fn x(truncation: usize) -> Series {
        Series::generator(Generator::X, truncation)
    }

    pub fn y(truncation: usize) -> Series {
        Series::generator(Generator::Y, truncation)
    }

    pub fn monomial(m: Monomial, c: Rational, truncation: usize) -> Series {
        let mut s = Series::zero(truncation);
        s.add_term(m, c);
        s
    }

    /// Builds a series from terms; terms above the truncation and zero
    /// coefficients are dropped, repeated monomials are summed.
    pub fn from_terms<I>(constant: Rational, terms: I, truncation: usize) -> Series
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Series::constant_series(constant, truncation);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Adds `c·m`; silently ignores monomials above the truncation.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if m.degree() <= self.truncation {
            accumulate(&mut self.terms, m, c);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// True when an operation combined series of different truncations.
    pub fn truncation_clamped(&self) -> bool {
        self.clamped
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    /// Terms in canonical monomial order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Coefficient of `m`; querying above the truncation is an error because
    /// the answer would not be reliable.
    pub fn coefficient(&self, m: &Monomial) -> Result<Rational> {
        if m.degree() > self.truncation {
            return Err(Error::AboveTruncation {
                degree: m.degree(),
                truncation: self.truncation,
            });
        }
        Ok(self.coeff(m))
    }

    /// Stored coefficient or zero, without the truncation check.
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest degree carrying a nonzero coefficient (0 for the constant).
    pub fn min_degree(&self) -> Option<usize> {
        if !self.constant.is_zero() {
            return Some(0);
        }
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        let t = self.terms.keys().map(Monomial::degree).max();
        match t {
            Some(d) => Some(d),
            None if !self.constant.is_zero() => Some(0),
            None => None,
        }
    }

    fn combine_truncation(&self, other: &Series) -> (usize, bool) {
        (
            self.truncation.min(other.truncation),
            self.clamped || other.clamped || self.truncation != other.truncation,
        )
    }

    /// The degree-`d` component (same truncation).
    pub fn homogeneous(&self, d: usize) -> Series {
        let mut s = Series::zero(self.truncation);
        if d == 0 {
            s.constant = self.constant.clone();
        }
        for (m, c) in &self.terms {
            if m.degree() == d {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    /// Keeps only the terms of degree `<= m` and lowers the truncation to `m`.
    pub fn restrict(&self, m: usize) -> Series {
        let mut s = self.filter(|mono| mono.degree() <= m);
        s.truncation = m.min(self.truncation);
        s
    }

    /// Re-labels the truncation upward or downward; terms above the new
    /// bound are dropped.
    pub fn with_truncation(&self, n: usize) -> Series {
        let mut s = self.filter(|mono| mono.degree() <= n);
        s.truncation = n;
        s
    }

    /// Keeps the constant and the terms whose monomial satisfies `keep`.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Series {
        Series {
            constant: self.constant.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
            truncation: self.truncation,
            clamped: self.clamped,
        }
    }

    /// Terms of the given `(x, y)` multidegree; no constant.
    pub fn multihomogeneous(&self, dx: usize, dy: usize) -> Series {
        let mut s = self.filter(|m| m.multidegree() == (dx, dy) && m.count(Generator::Z) == 0);
        if dx + dy == 0 {
            s.constant = self.constant.clone();
        } else {
            s.constant = Rational::zero();
        }
        s
    }

    /// The series without its constant term.
    pub fn positive_part(&self) -> Series {
        let mut s = self.clone();
        s.constant = Rational::zero();
        s
    }

    pub fn scale(&self, c: &Rational) -> Series {
        if c.is_zero() {
            return Series::zero(self.truncation);
        }
        Series {
            constant: &self.constant * c,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
            truncation: self.truncation,
            clamped: self.clamped,
        }
    }

    /// `self += c·other` in place.
    pub fn add_scaled(&mut self, c: &Rational, other: &Series) {
        if c.is_zero() {
            return;
        }
        let (n, clamped) = self.combine_truncation(other);
        if n < self.truncation {
            self.terms.retain(|m, _| m.degree() <= n);
        }
        self.truncation = n;
        self.clamped = clamped;
        self.constant += c * &other.constant;
        for (m, v) in &other.terms {
            if m.degree() <= n {
                accumulate(&mut self.terms, m.clone(), c * v);
            }
        }
    }

    pub fn mul_with(&self, other: &Series, strategy: Strategy) -> Series {
        let (n, clamped) = self.combine_truncation(other);
        let mut buckets: Vec<Vec<(&Monomial, &Rational)>> = vec![Vec::new(); n + 1];
        for (m, c) in &other.terms {
            if m.degree() <= n {
                buckets[m.degree()].push((m, c));
            }
        }
        let left: Vec<(&Monomial, &Rational)> =
            self.terms.iter().filter(|(m, _)| m.degree() < n).collect();

        let partial = |chunk: &[(&Monomial, &Rational)]| {
            let mut acc = TermMap::default();
            for (u, a) in chunk {
                for bucket in &buckets[1..=(n - u.degree())] {
                    for (v, b) in bucket {
                        accumulate(&mut acc, Monomial::node(u, v), *a * *b);
                    }
                }
            }
            acc
        };

        let work = left.len() * other.terms.len();
        let mut terms = if strategy.is_parallel() && work > 4096 {
            let chunks: Vec<&[(&Monomial, &Rational)]> = left.chunks(16).collect();
            let maps = crate::par::map(strategy, &chunks, |c| partial(c));
            let mut it = maps.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for m in it {
                for (k, v) in m {
                    accumulate(&mut acc, k, v);
                }
            }
            acc
        } else {
            partial(&left)
        };

        if !self.constant.is_zero() {
            for (m, c) in &other.terms {
                if m.degree() <= n {
                    accumulate(&mut terms, m.clone(), &self.constant * c);
                }
            }
        }
        if !other.constant.is_zero() {
            for (m, c) in &self.terms {
                if m.degree() <= n {
                    accumulate(&mut terms, m.clone(), c * &other.constant);
                }
            }
        }
        Series {
            constant: &self.constant * &other.constant,
            terms,
            truncation: n,
            clamped,
        }
    }

    /// Composition `F(U)`: every leaf of every monomial of `self` (which must
    /// use a single generator) is replaced by `U`, expanded multilinearly.
    pub fn substitute(&self, u: &Series) -> Result<Series> {
        if !u.constant.is_zero() {
            return Err(Error::NonzeroConstant(format_rational(&u.constant)));
        }
        let mut generator = None;
        for m in self.terms.keys() {
            match (m.single_generator(), generator) {
                (None, _) => return Err(Error::MixedGenerators(m.to_string())),
                (Some(g), None) => generator = Some(g),
                (Some(g), Some(h)) if g != h => {
                    return Err(Error::MixedGenerators(format!(
                        "series uses both {g} and {h}"
                    )))
                }
                _ => {}
            }
        }
        let (n, clamped) = self.combine_truncation(u);
        let u = u.restrict(n);
        let mut memo: FxHashMap<(Monomial, usize), Series> = FxHashMap::default();
        let mut out = Series::constant_series(self.constant.clone(), n);
        out.clamped = clamped;
        for (tau, c) in self.sorted_terms() {
            if tau.degree() > n {
                continue;
            }
            let shape = tau.relabel(Generator::X);
            let value = substitute_shape(&shape, n, &u, &mut memo);
            out.add_scaled(&c, &value);
        }
        Ok(out)
    }

    /// `Σ P^n / n!` with left-normed powers `(((PP)P)...)P`.
    pub fn exp_l(p: &Series, n: usize) -> Result<Series> {
        Series::exp_with(p, n, |power, p| power * p)
    }

    /// `Σ P^n / n!` with right-normed powers `P(P(...(PP)))`.
    pub fn exp_r(p: &Series, n: usize) -> Result<Series> {
        Series::exp_with(p, n, |power, p| p * power)
    }

    fn exp_with<F>(p: &Series, n: usize, step: F) -> Result<Series>
    where
        F: Fn(&Series, &Series) -> Series,
    {
        if !p.constant.is_zero() {
            return Err(Error::NonzeroConstant(format_rational(&p.constant)));
        }
        let p = p.with_truncation(n.min(p.truncation));
        let mut out = Series::one(p.truncation);
        let mut power = p.clone();
        for k in 1..=n {
            if power.is_zero() {
                break;
            }
            out.add_scaled(&inv_factorial(k), &power);
            power = step(&power, &p);
        }
        Ok(out)
    }

    /// Left logarithm: substitutes `S - 1` into the tree expansion of
    /// `log_l(1 + x)` truncated at `n`.
    pub fn log_l(s: &Series, n: usize) -> Result<Series> {
        if !s.constant.is_one() {
            return Err(Error::ConstantNotOne(format_rational(&s.constant)));
        }
        let n = n.min(s.truncation);
        let u = s.positive_part().with_truncation(n);
        log_l_one_plus_x(n).substitute(&u)
    }

    pub fn format(&self, style: Style) -> String {
        let mut items: Vec<(Rational, String)> = Vec::new();
        if !self.constant.is_zero() {
            items.push((self.constant.clone(), String::new()));
        }
        for (m, c) in self.sorted_terms() {
            items.push((c, m.format(style)));
        }
        format_combination(&items, style)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(m, c)| json!({"monomial": m.to_json(), "coeff": format_rational(&c)}))
            .collect();
        json!({
            "truncation": self.truncation,
            "constant": format_rational(&self.constant),
            "terms": terms,
        })
    }

    pub fn from_json(value: &Value) -> Result<Series> {
        let truncation = value
            .get("truncation")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Json("missing truncation".into()))? as usize;
        let constant = match value.get("constant") {
            None => Rational::zero(),
            Some(v) => json_rational(v)?,
        };
        let mut s = Series::constant_series(constant, truncation);
        let terms = value
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("missing terms".into()))?;
        for t in terms {
            let m = Monomial::from_json(
                t.get("monomial")
                    .ok_or_else(|| Error::Json("term without monomial".into()))?,
            )?;
            let c = json_rational(
                t.get("coeff")
                    .ok_or_else(|| Error::Json("term without coeff".into()))?,
            )?;
            if m.degree() > truncation {
                return Err(Error::AboveTruncation {
                    degree: m.degree(),
                    truncation,
                });
            }
            s.add_term(m, c);
        }
        Ok(s)
    }
}

pub(crate) fn json_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap().into())),
        other => Err(Error::Json(format!("not a rational: {other}"))),
    }
}

fn substitute_shape(
    shape: &Monomial,
    budget: usize,
    u: &Series,
    memo: &mut FxHashMap<(Monomial, usize), Series>,
) -> Series {
    let key = (shape.clone(), budget);
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let value = match shape.children() {
        None => u.restrict(budget).with_truncation(u.truncation),
        Some((l, r)) => {
            let lv = substitute_shape(l, budget - r.degree(), u, memo);
            let rv = substitute_shape(r, budget - l.degree(), u, memo);
            (&lv * &rv).filter(|m| m.degree() <= budget)
        }
    };
    memo.insert(key, value.clone());
    value
}

/// Joins `c·label` items into `a + b - 1/2 c`, with `label == ""` for
/// scalars.
pub fn format_combination(items: &[(Rational, String)], style: Style) -> String {
    if items.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, label)) in items.iter().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let coeff = match style {
            Style::Compact => format_rational(&mag),
            Style::Latex => latex_rational(&mag),
        };
        if label.is_empty() {
            out.push_str(&coeff);
        } else if mag.is_one() {
            out.push_str(label);
        } else {
            out.push_str(&coeff);
            out.push(' ');
            out.push_str(label);
        }
    }
    out
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Style::Compact))
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let mut s = self.clone();
        s.add_scaled(&Rational::one(), rhs);
        s
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let mut s = self.clone();
        s.add_scaled(&-Rational::one(), rhs);
        s
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_with(rhs, Strategy::Sequential)
    }
}
