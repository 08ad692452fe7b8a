//! Truncated series in the free associative algebra, used as the target of
//! the collapse from trees to words.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{format_combination, Series};
use crate::magma::{Generator, Style};
use crate::rational::{factorial, Rational};

pub type Word = Vec<Generator>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocSeries {
    constant: Rational,
    terms: FxHashMap<Word, Rational>,
    truncation: usize,
}

fn push(map: &mut FxHashMap<Word, Rational>, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(w.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&w);
    }
}

impl AssocSeries {
    pub fn zero(truncation: usize) -> AssocSeries {
        AssocSeries {
            constant: Rational::zero(),
            terms: FxHashMap::default(),
            truncation,
        }
    }

    pub fn word(w: Word, c: Rational, truncation: usize) -> AssocSeries {
        let mut s = AssocSeries::zero(truncation);
        s.add_term(w, c);
        s
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if w.is_empty() {
            self.constant += c;
        } else if w.len() <= self.truncation {
            push(&mut self.terms, w, c);
        }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, w: &[Generator]) -> Rational {
        if w.is_empty() {
            return self.constant.clone();
        }
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    /// Terms ordered by length, then lexicographically with `x < y`.
    pub fn sorted_terms(&self) -> Vec<(Word, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        v
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &AssocSeries) {
        self.truncation = self.truncation.min(other.truncation);
        let n = self.truncation;
        self.terms.retain(|w, _| w.len() <= n);
        self.constant += c * &other.constant;
        for (w, v) in &other.terms {
            if w.len() <= n {
                push(&mut self.terms, w.clone(), c * v);
            }
        }
    }

    pub fn mul(&self, other: &AssocSeries) -> AssocSeries {
        let n = self.truncation.min(other.truncation);
        let mut out = AssocSeries::zero(n);
        out.constant = &self.constant * &other.constant;
        let left: Vec<(Word, &Rational)> = std::iter::once((Vec::new(), &self.constant))
            .chain(self.terms.iter().map(|(w, c)| (w.clone(), c)))
            .collect();
        let right: Vec<(Word, &Rational)> = std::iter::once((Vec::new(), &other.constant))
            .chain(other.terms.iter().map(|(w, c)| (w.clone(), c)))
            .collect();
        for (u, a) in &left {
            for (v, b) in &right {
                if (u.is_empty() && v.is_empty()) || u.len() + v.len() > n {
                    continue;
                }
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, *a * *b);
            }
        }
        out
    }

    pub fn format(&self, style: Style) -> String {
        let mut items = Vec::new();
        if !self.constant.is_zero() {
            items.push((self.constant.clone(), String::new()));
        }
        for (w, c) in self.sorted_terms() {
            items.push((c, word_label(&w, style)));
        }
        format_combination(&items, style)
    }
}

fn word_label(w: &[Generator], style: Style) -> String {
    match style {
        Style::Compact => w.iter().map(|g| g.symbol()).collect(),
        Style::Latex => {
            let mut out = String::new();
            let mut i = 0;
            while i < w.len() {
                let mut j = i;
                while j < w.len() && w[j] == w[i] {
                    j += 1;
                }
                out.push(w[i].symbol());
                match j - i {
                    1 => {}
                    k if k < 10 => out.push_str(&format!("^{k}")),
                    k => out.push_str(&format!("^{{{k}}}")),
                }
                i = j;
            }
            out
        }
    }
}

impl fmt::Display for AssocSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Style::Compact))
    }
}

/// Forgets the bracketing: each tree maps to its leaf word.
pub fn project_associative(s: &Series) -> AssocSeries {
    let mut out = AssocSeries::zero(s.truncation());
    out.constant = s.constant().clone();
    for (m, c) in s.terms() {
        out.add_term(m.word(), c.clone());
    }
    out
}

/// Expansion of the left-normed commutator `[[[w1, w2], w3], ...]`.
fn commutator_word(w: &[Generator], memo: &mut FxHashMap<Word, Vec<(Word, i64)>>) -> Vec<(Word, i64)> {
    if let Some(v) = memo.get(w) {
        return v.clone();
    }
    let out = if w.len() == 1 {
        vec![(w.to_vec(), 1)]
    } else {
        let (head, last) = w.split_at(w.len() - 1);
        let inner = commutator_word(head, memo);
        let mut acc: FxHashMap<Word, i64> = FxHashMap::default();
        for (u, c) in inner {
            let mut a = u.clone();
            a.push(last[0]);
            *acc.entry(a).or_default() += c;
            let mut b = last.to_vec();
            b.extend_from_slice(&u);
            *acc.entry(b).or_default() -= c;
        }
        let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        v.sort();
        v
    };
    memo.insert(w.to_vec(), out.clone());
    out
}

/// The classical Dynkin series for `log(e^x e^y)` truncated at `n`, in the
/// free associative algebra on `x, y`.
pub fn dynkin_bch(n: usize) -> AssocSeries {
    // Collect sum over tuples ((r_1, s_1), ..., (r_k, s_k)) of
    // (-1)^{k-1}/k * 1/(sum r + s) * 1/prod r_i! s_i! attached to the word
    // x^{r_1} y^{s_1} ... ; then apply the left-normed bracketing.
    let mut per_word: FxHashMap<Word, Rational> = FxHashMap::default();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    fn walk(
        budget: usize,
        stack: &mut Vec<(usize, usize)>,
        per_word: &mut FxHashMap<Word, Rational>,
    ) {
        if !stack.is_empty() {
            let k = stack.len();
            let total: usize = stack.iter().map(|(r, s)| r + s).sum();
            let mut denom = BigInt::from(k) * BigInt::from(total);
            let mut word = Vec::with_capacity(total);
            for (r, s) in stack.iter() {
                denom *= factorial(*r) * factorial(*s);
                word.extend(std::iter::repeat_n(Generator::X, *r));
                word.extend(std::iter::repeat_n(Generator::Y, *s));
            }
            let sign = if k % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            let c = Rational::new(sign, denom);
            let e = per_word.entry(word).or_insert_with(Rational::zero);
            *e += c;
        }
        for r in 0..=budget {
            for s in 0..=(budget - r) {
                if r + s == 0 {
                    continue;
                }
                stack.push((r, s));
                walk(budget - r - s, stack, per_word);
                stack.pop();
            }
        }
    }
    walk(n, &mut stack, &mut per_word);

    let mut memo = FxHashMap::default();
    let mut out = AssocSeries::zero(n);
    let mut words: Vec<_> = per_word.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    words.sort_by(|a, b| a.0.cmp(&b.0));
    for (w, c) in words {
        for (u, k) in commutator_word(&w, &mut memo) {
            out.add_term(u, &c * Rational::from_integer(BigInt::from(k)));
        }
    }
    out
}
