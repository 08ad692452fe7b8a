//! Expressions in the primitive operations: commutators, the bracket
//! `<x1,...,xm; y, z>` and the symmetrized `Phi(x1,...,xm; y1,...,yk)`.
//!
//! [`PrimExpr`] is plain syntax. [`PrimCombination`] is a rational linear
//! combination kept in a canonical form that only uses symmetries holding by
//! definition: antisymmetry of `[a,b]` and of the last two bracket slots,
//! full symmetry of both `Phi` lists, and `<; y, z> = -[y, z]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::magma::{Generator, Style};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::series::format_combination;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimExpr {
    Gen(Generator),
    Commutator(Box<PrimExpr>, Box<PrimExpr>),
    SUBracket {
        prefix: Vec<PrimExpr>,
        y: Box<PrimExpr>,
        z: Box<PrimExpr>,
    },
    Phi {
        xs: Vec<PrimExpr>,
        ys: Vec<PrimExpr>,
    },
}

impl PrimExpr {
    pub fn gen(g: Generator) -> PrimExpr {
        PrimExpr::Gen(g)
    }

    pub fn x() -> PrimExpr {
        PrimExpr::Gen(Generator::X)
    }

    pub fn y() -> PrimExpr {
        PrimExpr::Gen(Generator::Y)
    }

    pub fn commutator(a: PrimExpr, b: PrimExpr) -> PrimExpr {
        PrimExpr::Commutator(Box::new(a), Box::new(b))
    }

    pub fn bracket(prefix: Vec<PrimExpr>, y: PrimExpr, z: PrimExpr) -> PrimExpr {
        PrimExpr::SUBracket {
            prefix,
            y: Box::new(y),
            z: Box::new(z),
        }
    }

    pub fn phi(xs: Vec<PrimExpr>, ys: Vec<PrimExpr>) -> Result<PrimExpr> {
        if xs.is_empty() {
            return Err(Error::InvalidArgument("Phi needs at least one x argument".into()));
        }
        if ys.len() < 2 {
            return Err(Error::InvalidArgument("Phi needs at least two y arguments".into()));
        }
        Ok(PrimExpr::Phi { xs, ys })
    }

    pub fn degree(&self) -> usize {
        match self {
            PrimExpr::Gen(_) => 1,
            PrimExpr::Commutator(a, b) => a.degree() + b.degree(),
            PrimExpr::SUBracket { prefix, y, z } => {
                prefix.iter().map(PrimExpr::degree).sum::<usize>() + y.degree() + z.degree()
            }
            PrimExpr::Phi { xs, ys } => xs.iter().chain(ys).map(PrimExpr::degree).sum(),
        }
    }

    /// Number of occurrences of `g`.
    pub fn count(&self, g: Generator) -> usize {
        match self {
            PrimExpr::Gen(h) => usize::from(*h == g),
            PrimExpr::Commutator(a, b) => a.count(g) + b.count(g),
            PrimExpr::SUBracket { prefix, y, z } => {
                prefix.iter().map(|e| e.count(g)).sum::<usize>() + y.count(g) + z.count(g)
            }
            PrimExpr::Phi { xs, ys } => xs.iter().chain(ys).map(|e| e.count(g)).sum(),
        }
    }

    pub fn multidegree(&self) -> (usize, usize) {
        (self.count(Generator::X), self.count(Generator::Y))
    }

    fn rank(&self) -> u8 {
        match self {
            PrimExpr::Gen(_) => 0,
            PrimExpr::Commutator(..) => 1,
            PrimExpr::SUBracket { .. } => 2,
            PrimExpr::Phi { .. } => 3,
        }
    }

    pub fn parse(text: &str) -> Result<PrimExpr> {
        let mut p = Parser::new(text, false);
        let e = p.expr()?;
        p.end()?;
        Ok(e)
    }

    /// Like [`PrimExpr::parse`] but also admits the internal generator `z`.
    pub fn parse_extended(text: &str) -> Result<PrimExpr> {
        let mut p = Parser::new(text, true);
        let e = p.expr()?;
        p.end()?;
        Ok(e)
    }

    pub fn format(&self, style: Style) -> String {
        let mut out = String::new();
        self.write(&mut out, style);
        out
    }

    fn write(&self, out: &mut String, style: Style) {
        let list = |out: &mut String, items: &[PrimExpr]| {
            for (i, e) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                e.write(out, style);
            }
        };
        match self {
            PrimExpr::Gen(g) => out.push(g.symbol()),
            PrimExpr::Commutator(a, b) => {
                out.push('[');
                a.write(out, style);
                out.push(',');
                b.write(out, style);
                out.push(']');
            }
            PrimExpr::SUBracket { prefix, y, z } => {
                out.push_str(if style == Style::Latex { "\\langle " } else { "<" });
                if !prefix.is_empty() {
                    list(out, prefix);
                    out.push(';');
                }
                y.write(out, style);
                out.push(',');
                z.write(out, style);
                out.push_str(if style == Style::Latex { "\\rangle" } else { ">" });
            }
            PrimExpr::Phi { xs, ys } => {
                out.push_str(if style == Style::Latex { "\\Phi(" } else { "Phi(" });
                list(out, xs);
                out.push(';');
                list(out, ys);
                out.push(')');
            }
        }
    }

    /// Canonical representative up to sign, or `None` when the expression
    /// vanishes by antisymmetry.
    pub fn canonical(&self) -> Option<(bool, PrimExpr)> {
        match self {
            PrimExpr::Gen(_) => Some((false, self.clone())),
            PrimExpr::Commutator(a, b) => {
                let (sa, a) = a.canonical()?;
                let (sb, b) = b.canonical()?;
                oriented(sa ^ sb, a, b).map(|(s, a, b)| (s, PrimExpr::commutator(a, b)))
            }
            PrimExpr::SUBracket { prefix, y, z } => {
                let (sy, y) = y.canonical()?;
                let (sz, z) = z.canonical()?;
                let mut sign = sy ^ sz;
                let mut pre = Vec::with_capacity(prefix.len());
                for e in prefix {
                    let (s, e) = e.canonical()?;
                    sign ^= s;
                    pre.push(e);
                }
                if pre.is_empty() {
                    // <; y, z> = -[y, z]
                    return oriented(!sign, y, z).map(|(s, a, b)| (s, PrimExpr::commutator(a, b)));
                }
                oriented(sign, y, z).map(|(s, a, b)| (s, PrimExpr::bracket(pre, a, b)))
            }
            PrimExpr::Phi { xs, ys } => {
                let mut sign = false;
                let mut canon = |items: &[PrimExpr]| -> Option<Vec<PrimExpr>> {
                    let mut v = Vec::with_capacity(items.len());
                    for e in items {
                        let (s, e) = e.canonical()?;
                        sign ^= s;
                        v.push(e);
                    }
                    v.sort();
                    Some(v)
                };
                let xs = canon(xs)?;
                let ys = canon(ys)?;
                Some((sign, PrimExpr::Phi { xs, ys }))
            }
        }
    }
}

fn oriented(sign: bool, a: PrimExpr, b: PrimExpr) -> Option<(bool, PrimExpr, PrimExpr)> {
    match a.cmp(&b) {
        Ordering::Equal => None,
        Ordering::Less => Some((sign, a, b)),
        Ordering::Greater => Some((!sign, b, a)),
    }
}

impl Ord for PrimExpr {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| match (self, other) {
                (PrimExpr::Gen(a), PrimExpr::Gen(b)) => a.cmp(b),
                (PrimExpr::Commutator(a, b), PrimExpr::Commutator(c, d)) => {
                    a.cmp(c).then_with(|| b.cmp(d))
                }
                (
                    PrimExpr::SUBracket { prefix, y, z },
                    PrimExpr::SUBracket {
                        prefix: p2,
                        y: y2,
                        z: z2,
                    },
                ) => prefix
                    .len()
                    .cmp(&p2.len())
                    .then_with(|| prefix.cmp(p2))
                    .then_with(|| y.cmp(y2))
                    .then_with(|| z.cmp(z2)),
                (PrimExpr::Phi { xs, ys }, PrimExpr::Phi { xs: x2, ys: y2 }) => xs
                    .len()
                    .cmp(&x2.len())
                    .then_with(|| xs.cmp(x2))
                    .then_with(|| ys.cmp(y2)),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for PrimExpr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Style::Compact))
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    extended: bool,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, extended: bool) -> Self {
        Parser {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
            extended,
            text,
        }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.text.len(), |(i, _)| *i)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::syntax(self.offset(), msg))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => self.err(format!("expected '{c}', found '{d}'")),
            None => self.err(format!("expected '{c}', found end of input")),
        }
    }

    fn end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn list_until(&mut self, stops: &[char]) -> Result<Vec<PrimExpr>> {
        let mut items = vec![self.expr()?];
        while self.peek() == Some(',') {
            self.pos += 1;
            items.push(self.expr()?);
        }
        match self.peek() {
            Some(c) if stops.contains(&c) => Ok(items),
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn expr(&mut self) -> Result<PrimExpr> {
        if self.chars.is_empty() {
            return Err(Error::EmptyInput);
        }
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                Ok(PrimExpr::commutator(a, b))
            }
            Some('<') => {
                self.pos += 1;
                let first = self.list_until(&[';', '>'])?;
                if self.peek() == Some(';') {
                    self.pos += 1;
                    let last = self.list_until(&['>'])?;
                    if last.len() != 2 {
                        return self.err("a bracket needs exactly two entries after ';'");
                    }
                    self.pos += 1;
                    let mut it = last.into_iter();
                    let y = it.next().unwrap();
                    let z = it.next().unwrap();
                    Ok(PrimExpr::bracket(first, y, z))
                } else {
                    if first.len() != 2 {
                        return self.err("a bracket without ';' needs exactly two entries");
                    }
                    self.pos += 1;
                    let mut it = first.into_iter();
                    let y = it.next().unwrap();
                    let z = it.next().unwrap();
                    Ok(PrimExpr::bracket(Vec::new(), y, z))
                }
            }
            Some('P') => {
                let start = self.pos;
                for c in "Phi".chars() {
                    if self.peek() != Some(c) {
                        self.pos = start;
                        return self.err("unknown token");
                    }
                    self.pos += 1;
                }
                self.expect('(')?;
                let xs = self.list_until(&[';'])?;
                self.pos += 1;
                let ys = self.list_until(&[')'])?;
                let at = self.offset();
                self.pos += 1;
                PrimExpr::phi(xs, ys).map_err(|e| match e {
                    Error::InvalidArgument(m) => Error::syntax(at, m),
                    other => other,
                })
            }
            Some(c) => match Generator::from_symbol(c) {
                Some(Generator::Z) if !self.extended => self.err("unknown generator 'z'"),
                Some(g) => {
                    self.pos += 1;
                    Ok(PrimExpr::Gen(g))
                }
                None => self.err(format!("unexpected '{c}'")),
            },
        }
    }
}

/// A rational combination of canonical primitive expressions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimCombination {
    terms: BTreeMap<PrimExpr, Rational>,
}

impl PrimCombination {
    pub fn zero() -> PrimCombination {
        PrimCombination::default()
    }

    pub fn from_expr(e: PrimExpr) -> PrimCombination {
        let mut c = PrimCombination::zero();
        c.add_term(e, Rational::one());
        c
    }

    pub fn generator(g: Generator) -> PrimCombination {
        PrimCombination::from_expr(PrimExpr::Gen(g))
    }

    /// Adds `c·e` after canonicalizing `e`.
    pub fn add_term(&mut self, e: PrimExpr, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some((neg, e)) = e.canonical() {
            let c = if neg { -c } else { c };
            self.add_canonical(e, c);
        }
    }

    /// Adds a term already known to be canonical.
    pub(crate) fn add_canonical(&mut self, e: PrimExpr, c: Rational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Rational, other: &PrimCombination) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_canonical(e.clone(), c * v);
        }
    }

    pub fn scale(&self, c: &Rational) -> PrimCombination {
        let mut out = PrimCombination::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PrimExpr, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &PrimExpr) -> Rational {
        match e.canonical() {
            None => Rational::zero(),
            Some((neg, e)) => {
                let c = self.terms.get(&e).cloned().unwrap_or_else(Rational::zero);
                if neg {
                    -c
                } else {
                    c
                }
            }
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(PrimExpr::degree).min()
    }

    pub fn filter<F: Fn(&PrimExpr) -> bool>(&self, keep: F) -> PrimCombination {
        PrimCombination {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous(&self, d: usize) -> PrimCombination {
        self.filter(|e| e.degree() == d)
    }

    pub fn multihomogeneous(&self, dx: usize, dy: usize) -> PrimCombination {
        self.filter(|e| e.multidegree() == (dx, dy))
    }

    pub fn up_to_degree(&self, n: usize) -> PrimCombination {
        self.filter(|e| e.degree() <= n)
    }

    /// Parses `"x + y + 1/2 [x,y] - 1/3 <x;x,y>"`; a coefficient may be
    /// followed by an optional `*`.
    pub fn parse(text: &str) -> Result<PrimCombination> {
        parse_combination(text, false)
    }

    pub fn parse_extended(text: &str) -> Result<PrimCombination> {
        parse_combination(text, true)
    }

    pub fn format(&self, style: Style) -> String {
        let items: Vec<(Rational, String)> = self
            .terms
            .iter()
            .map(|(e, c)| (c.clone(), e.format(style)))
            .collect();
        format_combination(&items, style)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"coeff": format_rational(c), "expr": e.to_string()}))
                .collect(),
        )
    }

    pub fn from_json(value: &Value) -> Result<PrimCombination> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Json("expected a list of {coeff, expr}".into()))?;
        let mut out = PrimCombination::zero();
        for item in items {
            let c = crate::series::json_rational(
                item.get("coeff")
                    .ok_or_else(|| Error::Json("missing coeff".into()))?,
            )?;
            let e = item
                .get("expr")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Json("missing expr".into()))?;
            out.add_term(PrimExpr::parse(e)?, c);
        }
        Ok(out)
    }
}

impl fmt::Display for PrimCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format(Style::Compact))
    }
}

fn parse_combination(text: &str, extended: bool) -> Result<PrimCombination> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut out = PrimCombination::zero();
    if text.trim() == "0" {
        return Ok(out);
    }
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].1.is_whitespace() {
            *i += 1;
        }
    };
    let mut first = true;
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            if first {
                return Err(Error::EmptyInput);
            }
            break;
        }
        let mut negative = false;
        match bytes[i].1 {
            '+' | '-' => {
                negative = bytes[i].1 == '-';
                i += 1;
                skip_ws(&mut i);
            }
            c if !first => {
                return Err(Error::syntax(bytes[i].0, format!("expected '+' or '-', found '{c}'")))
            }
            _ => {}
        }
        first = false;
        // coefficient
        let start = i;
        while i < bytes.len() && (bytes[i].1.is_ascii_digit() || bytes[i].1 == '/') {
            i += 1;
        }
        let mut coeff = Rational::one();
        if i > start {
            let from = bytes[start].0;
            let to = bytes.get(i).map_or(text.len(), |b| b.0);
            coeff = parse_rational(&text[from..to]).map_err(|_| {
                Error::syntax(from, format!("bad coefficient {:?}", &text[from..to]))
            })?;
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i].1 == '*' {
                i += 1;
                skip_ws(&mut i);
            }
        }
        // expression: up to the next top-level sign
        let estart = i;
        let mut depth = 0i32;
        while i < bytes.len() {
            match bytes[i].1 {
                '[' | '<' | '(' => depth += 1,
                ']' | '>' | ')' => depth -= 1,
                '+' | '-' if depth == 0 => break,
                _ => {}
            }
            i += 1;
        }
        let from = bytes.get(estart).map_or(text.len(), |b| b.0);
        let to = bytes.get(i).map_or(text.len(), |b| b.0);
        let chunk = &text[from..to];
        if chunk.trim().is_empty() {
            if i > start {
                // bare scalar terms are not primitive
                return Err(Error::syntax(from, "a term needs an expression"));
            }
            return Err(Error::syntax(from, "expected an expression"));
        }
        let parsed = if extended {
            PrimExpr::parse_extended(chunk)
        } else {
            PrimExpr::parse(chunk)
        };
        let e = parsed.map_err(|e| match e {
            Error::Syntax { position, message } => Error::Syntax {
                position: position + from,
                message,
            },
            other => other,
        })?;
        out.add_term(e, if negative { -coeff } else { coeff });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(s: &str) -> PrimExpr {
        PrimExpr::parse(s).unwrap()
    }

    #[test]
    fn parse_and_print() {
        for s in ["x", "[x,y]", "<x;x,y>", "<x,y>", "<x,x;x,[x,y]>", "Phi(x;y,y)", "Phi(x,x;y,y,y)", "[<x;x,y>,y]"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p(" < x ; x , y > ").to_string(), "<x;x,y>");
        assert_eq!(p("<x;x,y>").format(Style::Latex), "\\langle x;x,y\\rangle");
        assert_eq!(p("Phi(x;y,y)").degree(), 3);
        assert_eq!(p("<y,x;x,y>").multidegree(), (2, 2));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(PrimExpr::parse(""), Err(Error::EmptyInput)));
        assert!(matches!(PrimExpr::parse("[x,y"), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(PrimExpr::parse("<x;y>"), Err(Error::Syntax { .. })));
        assert!(matches!(PrimExpr::parse("Phi(x;y)"), Err(Error::Syntax { .. })));
        assert!(matches!(PrimExpr::parse("z"), Err(Error::Syntax { position: 0, .. })));
        assert!(PrimExpr::parse_extended("[x,z]").is_ok());
        assert!(matches!(PrimExpr::parse("[x,y]]"), Err(Error::Syntax { position: 5, .. })));
    }

    #[test]
    fn canonical_forms() {
        let c = PrimCombination::from_expr(p("<x,y>"));
        assert_eq!(c.to_string(), "-[x,y]");
        assert_eq!(PrimCombination::from_expr(p("[y,x]")).to_string(), "-[x,y]");
        assert!(PrimCombination::from_expr(p("[x,x]")).is_zero());
        assert!(PrimCombination::from_expr(p("<y;x,x>")).is_zero());
        assert_eq!(PrimCombination::from_expr(p("<y;y,x>")).to_string(), "-<y;x,y>");
        assert_eq!(PrimCombination::from_expr(p("Phi(x;y,x)")).to_string(), "Phi(x;x,y)");
        // the prefix keeps its order
        assert_eq!(PrimCombination::from_expr(p("<y,x;x,y>")).to_string(), "<y,x;x,y>");
        // nested signs multiply
        assert_eq!(PrimCombination::from_expr(p("<x,<x,y>>")).to_string(), "[x,[x,y]]");
        let mut s = PrimCombination::from_expr(p("<x;x,y>"));
        s.add_term(p("<x;y,x>"), int(1));
        assert!(s.is_zero());
    }

    #[test]
    fn combination_parsing() {
        let c = PrimCombination::parse("x + y + 1/2 [x,y] - 1/3*<x;x,y> - <y;y,x>").unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.coeff(&p("[x,y]")), rat(1, 2));
        assert_eq!(c.coeff(&p("<y;x,y>")), int(1));
        assert_eq!(c.coeff(&p("<y;y,x>")), int(-1));
        assert_eq!(c.to_string(), "x + y + 1/2 [x,y] - 1/3 <x;x,y> + <y;x,y>");
        assert_eq!(PrimCombination::parse(&c.to_string()).unwrap(), c);
        assert!(PrimCombination::parse("1/2").is_err());
        assert!(PrimCombination::parse("x y").is_err());
        assert!(PrimCombination::parse("0").unwrap().is_zero());
        let j = c.to_json();
        assert_eq!(PrimCombination::from_json(&j).unwrap(), c);
    }

    #[test]
    fn order_is_by_degree_then_kind() {
        let mut v = [p("Phi(x;y,y)"), p("<x;x,y>"), p("[x,[x,y]]"), p("y"), p("[x,y]"), p("x")];
        v.sort();
        let s: Vec<String> = v.iter().map(|e| e.to_string()).collect();
        assert_eq!(s, ["x", "y", "[x,y]", "[x,[x,y]]", "<x;x,y>", "Phi(x;y,y)"]);
    }

    #[test]
    fn printer_round_trips_random_expressions() {
        use proptest::prelude::*;
        use proptest::test_runner::TestRunner;
        let leaf = prop_oneof![Just(PrimExpr::x()), Just(PrimExpr::y())];
        let strategy = leaf.prop_recursive(3, 12, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PrimExpr::commutator(a, b)),
                (proptest::collection::vec(inner.clone(), 0..3), inner.clone(), inner.clone())
                    .prop_map(|(p, a, b)| PrimExpr::bracket(p, a, b)),
                (proptest::collection::vec(inner.clone(), 1..3), proptest::collection::vec(inner, 2..4))
                    .prop_map(|(xs, ys)| PrimExpr::phi(xs, ys).unwrap()),
            ]
        });
        TestRunner::default()
            .run(&strategy, |e| {
                prop_assert_eq!(PrimExpr::parse(&e.to_string()).unwrap(), e.clone());
                let lx = e.format(Style::Latex);
                prop_assert!(!lx.is_empty());
                Ok(())
            })
            .unwrap();
    }
}
