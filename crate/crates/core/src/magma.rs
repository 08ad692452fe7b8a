//! Free non-associative monomials: leaf-labelled planar binary trees.
//!
//! A [`Monomial`] is an immutable, reference-counted tree with its degree,
//! per-generator leaf counts and structural hash computed once at
//! construction. Cloning is a pointer copy.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

/// Generator symbols. The public alphabet is `{x, y}`; `Z` is a third
/// symbol used only by the identity suites that quantify over three
/// independent primitives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X,
    Y,
    Z,
}

impl Generator {
    pub const ALPHABET: [Generator; 2] = [Generator::X, Generator::Y];

    pub fn symbol(self) -> char {
        match self {
            Generator::X => 'x',
            Generator::Y => 'y',
            Generator::Z => 'z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Generator> {
        match c {
            'x' => Some(Generator::X),
            'y' => Some(Generator::Y),
            'z' => Some(Generator::Z),
            _ => None,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug)]
pub enum Shape {
    Leaf(Generator),
    Node(Monomial, Monomial),
}

#[derive(Debug)]
struct Inner {
    shape: Shape,
    degree: usize,
    counts: [usize; 3],
    hash: u64,
}

#[derive(Clone)]
pub struct Monomial(Arc<Inner>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Compact,
    Latex,
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Monomial {
    pub fn leaf(g: Generator) -> Monomial {
        let mut counts = [0; 3];
        counts[g.index()] = 1;
        Monomial(Arc::new(Inner {
            shape: Shape::Leaf(g),
            degree: 1,
            counts,
            hash: mix(0x51_7cc1_b727_220a ^ (g.index() as u64 + 1)),
        }))
    }

    pub fn x() -> Monomial {
        Monomial::leaf(Generator::X)
    }

    pub fn y() -> Monomial {
        Monomial::leaf(Generator::Y)
    }

    /// The internal third generator.
    pub fn z() -> Monomial {
        Monomial::leaf(Generator::Z)
    }

    /// The product `(left right)`.
    pub fn node(left: &Monomial, right: &Monomial) -> Monomial {
        let counts = std::array::from_fn(|i| left.0.counts[i] + right.0.counts[i]);
        let hash = mix(left.0.hash.rotate_left(23) ^ right.0.hash.wrapping_mul(0x9e37_79b9_7f4a_7c15));
        Monomial(Arc::new(Inner {
            shape: Shape::Node(left.clone(), right.clone()),
            degree: left.0.degree + right.0.degree,
            counts,
            hash,
        }))
    }

    /// The left-normed power `(((vv)v)...)v` with `n` factors.
    pub fn left_normed_power(v: Generator, n: usize) -> Result<Monomial> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "left-normed power needs at least one factor".into(),
            ));
        }
        let leaf = Monomial::leaf(v);
        let mut acc = leaf.clone();
        for _ in 1..n {
            acc = Monomial::node(&acc, &leaf);
        }
        Ok(acc)
    }

    /// The left-normed product of a nonempty word of generators.
    pub fn left_normed_word(word: &[Generator]) -> Result<Monomial> {
        let (first, rest) = word
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty word".into()))?;
        Ok(rest.iter().fold(Monomial::leaf(*first), |acc, g| {
            Monomial::node(&acc, &Monomial::leaf(*g))
        }))
    }

    pub fn shape(&self) -> &Shape {
        &self.0.shape
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.0.shape, Shape::Leaf(_))
    }

    pub fn as_leaf(&self) -> Option<Generator> {
        match self.0.shape {
            Shape::Leaf(g) => Some(g),
            Shape::Node(..) => None,
        }
    }

    pub fn children(&self) -> Option<(&Monomial, &Monomial)> {
        match &self.0.shape {
            Shape::Leaf(_) => None,
            Shape::Node(l, r) => Some((l, r)),
        }
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    /// `(count of x, count of y)`.
    pub fn multidegree(&self) -> (usize, usize) {
        (self.0.counts[0], self.0.counts[1])
    }

    pub fn count(&self, g: Generator) -> usize {
        self.0.counts[g.index()]
    }

    /// The single generator this monomial is built from, if any.
    pub fn single_generator(&self) -> Option<Generator> {
        let present: Vec<Generator> = [Generator::X, Generator::Y, Generator::Z]
            .into_iter()
            .filter(|g| self.count(*g) > 0)
            .collect();
        match present.as_slice() {
            [g] => Some(*g),
            _ => None,
        }
    }

    /// Leaf labels from left to right.
    pub fn word(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.degree());
        self.collect_word(&mut out);
        out
    }

    fn collect_word(&self, out: &mut Vec<Generator>) {
        match &self.0.shape {
            Shape::Leaf(g) => out.push(*g),
            Shape::Node(l, r) => {
                l.collect_word(out);
                r.collect_word(out);
            }
        }
    }

    /// `Some((v, n))` when this is the left-normed power `v^n`, `n >= 1`.
    pub fn as_left_normed_power(&self) -> Option<(Generator, usize)> {
        match &self.0.shape {
            Shape::Leaf(g) => Some((*g, 1)),
            Shape::Node(l, r) => {
                let g = r.as_leaf()?;
                let (h, n) = l.as_left_normed_power()?;
                (g == h).then_some((g, n + 1))
            }
        }
    }

    /// Whether the tree is a left comb `(((g1 g2) g3) ...) gk`.
    pub fn is_left_normed(&self) -> bool {
        match &self.0.shape {
            Shape::Leaf(_) => true,
            Shape::Node(l, r) => r.is_leaf() && l.is_left_normed(),
        }
    }

    /// Replaces every leaf label by `g`, keeping the shape.
    pub fn relabel(&self, g: Generator) -> Monomial {
        match &self.0.shape {
            Shape::Leaf(_) => Monomial::leaf(g),
            Shape::Node(l, r) => Monomial::node(&l.relabel(g), &r.relabel(g)),
        }
    }

    pub fn parse(text: &str) -> Result<Monomial> {
        Parser::new(text, false).parse_all()
    }

    /// Like [`Monomial::parse`] but also admits the internal generator `z`.
    pub fn parse_extended(text: &str) -> Result<Monomial> {
        Parser::new(text, true).parse_all()
    }

    pub fn format(&self, style: Style) -> String {
        let mut out = String::new();
        match style {
            Style::Compact => self.write_compact(&mut out),
            Style::Latex => self.write_latex(&mut out),
        }
        out
    }

    fn write_compact(&self, out: &mut String) {
        match &self.0.shape {
            Shape::Leaf(g) => out.push(g.symbol()),
            Shape::Node(l, r) => {
                out.push('(');
                l.write_compact(out);
                r.write_compact(out);
                out.push(')');
            }
        }
    }

    fn write_latex(&self, out: &mut String) {
        match (&self.0.shape, self.as_left_normed_power()) {
            (Shape::Leaf(g), _) => out.push(g.symbol()),
            (_, Some((g, n))) => {
                out.push(g.symbol());
                if n < 10 {
                    out.push_str(&format!("^{n}"));
                } else {
                    out.push_str(&format!("^{{{n}}}"));
                }
            }
            (Shape::Node(l, r), None) => {
                for part in [l, r] {
                    let atomic = part.as_left_normed_power().is_some();
                    if !atomic {
                        out.push('(');
                    }
                    part.write_latex(out);
                    if !atomic {
                        out.push(')');
                    }
                }
            }
        }
    }

    /// All monomials of degree `n` over `{x, y}` in canonical order.
    pub fn enumerate(n: usize) -> Vec<Monomial> {
        let mut by_degree: Vec<Vec<Monomial>> = vec![Vec::new()];
        for d in 1..=n {
            let level = if d == 1 {
                Generator::ALPHABET.iter().map(|g| Monomial::leaf(*g)).collect()
            } else {
                let mut level = Vec::new();
                for k in 1..d {
                    for l in &by_degree[k] {
                        for r in &by_degree[d - k] {
                            level.push(Monomial::node(l, r));
                        }
                    }
                }
                level
            };
            by_degree.push(level);
        }
        let mut out = by_degree.pop().unwrap_or_default();
        if n == 0 {
            out.clear();
        }
        out.sort();
        out
    }

    /// All monomials of degree `1..=n`, in canonical order.
    pub fn enumerate_up_to(n: usize) -> Vec<Monomial> {
        (1..=n).flat_map(Monomial::enumerate).collect()
    }

    pub fn to_json(&self) -> Value {
        match &self.0.shape {
            Shape::Leaf(g) => Value::String(g.symbol().to_string()),
            Shape::Node(l, r) => Value::Array(vec![l.to_json(), r.to_json()]),
        }
    }

    pub fn from_json(value: &Value) -> Result<Monomial> {
        match value {
            Value::String(s) => {
                let mut chars = s.chars();
                match (chars.next().and_then(Generator::from_symbol), chars.next()) {
                    (Some(g), None) if g != Generator::Z => Ok(Monomial::leaf(g)),
                    _ => Err(Error::Json(format!("unknown generator {s:?}"))),
                }
            }
            Value::Array(items) if items.len() == 2 => Ok(Monomial::node(
                &Monomial::from_json(&items[0])?,
                &Monomial::from_json(&items[1])?,
            )),
            other => Err(Error::Json(format!("not a monomial: {other}"))),
        }
    }
}

impl PartialEq for Monomial {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        if self.0.hash != other.0.hash || self.0.degree != other.0.degree {
            return false;
        }
        match (&self.0.shape, &other.0.shape) {
            (Shape::Leaf(a), Shape::Leaf(b)) => a == b,
            (Shape::Node(a, b), Shape::Node(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl Eq for Monomial {}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Monomial {
    /// Degree first; then leaves before nodes; leaves by generator; nodes
    /// lexicographically by `(left, right)`.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.degree()
            .cmp(&other.degree())
            .then_with(|| match (&self.0.shape, &other.0.shape) {
                (Shape::Leaf(a), Shape::Leaf(b)) => a.cmp(b),
                (Shape::Leaf(_), Shape::Node(..)) => Ordering::Less,
                (Shape::Node(..), Shape::Leaf(_)) => Ordering::Greater,
                (Shape::Node(a, b), Shape::Node(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Style::Compact))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        Monomial::from_json(&value).map_err(D::Error::custom)
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    allow_z: bool,
    _text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, allow_z: bool) -> Self {
        Parser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            allow_z,
            _text: text,
        }
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|(i, _)| *i)
            .unwrap_or_else(|| self._text.len())
    }

    fn parse_all(mut self) -> Result<Monomial> {
        if self.chars.is_empty() {
            return Err(Error::EmptyInput);
        }
        let m = self.monomial()?;
        if self.pos != self.chars.len() {
            return Err(Error::syntax(self.offset(), "trailing input"));
        }
        Ok(m)
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let at = self.offset();
        let Some(&(_, c)) = self.chars.get(self.pos) else {
            return Err(Error::syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match c {
            '(' => {
                let l = self.monomial()?;
                let r = self.monomial()?;
                match self.chars.get(self.pos) {
                    Some((_, ')')) => {
                        self.pos += 1;
                        Ok(Monomial::node(&l, &r))
                    }
                    _ => Err(Error::syntax(self.offset(), "expected ')'")),
                }
            }
            'x' => Ok(Monomial::x()),
            'y' => Ok(Monomial::y()),
            'z' if self.allow_z => Ok(Monomial::z()),
            other => Err(Error::syntax(at, format!("unexpected character {other:?}"))),
        }
    }
}
