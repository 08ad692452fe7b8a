//! Identity suites: exhaustive checks of the structural identities on all
//! monomials or words up to a degree, with the first counterexample kept.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cuts::{closed_form_xmyn, coefficients_via_cuts, enumerate_bch_cuts, enumerate_cuts, xy_branch};
use crate::dsw::{bracketize_word, dsw_identity_check, gamma, reconstruction_sides, Derivation};
use crate::error::{Error, Result};
use crate::hopf::{
    coproduct, coproduct_left_iterated, coproduct_right_iterated, division_axioms, is_grouplike,
    is_primitive, Side,
};
use crate::magma::{Generator, Monomial};
use crate::magnus::{
    bch_first_order, bch_monomial, bch_ode, n_coeff, p_nested, tau_apply, tau_exp_l, tau_inverse,
    Composition,
};
use crate::par::{self, Strategy};
use crate::prim::PrimCombination;
use crate::rational::{inv_factorial, Rational};
use crate::series::{bernoulli, Series};
use crate::suops::{bracket_identity_sides, eval_combination, left_normed_product, p_series, phi, su_bracket};
use crate::trees::nj_tree_sum;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hopf,
    Suops,
    Dsw,
    Magnus,
    Cuts,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["hopf", "suops", "dsw", "magnus", "cuts", "all"];

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Hopf, Suite::Suops, Suite::Dsw, Suite::Magnus, Suite::Cuts],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Suite::Hopf => "hopf",
            Suite::Suops => "suops",
            Suite::Dsw => "dsw",
            Suite::Magnus => "magnus",
            Suite::Cuts => "cuts",
            Suite::All => "all",
        };
        f.write_str(name)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Ok(match s {
            "hopf" => Suite::Hopf,
            "suops" => Suite::Suops,
            "dsw" => Suite::Dsw,
            "magnus" => Suite::Magnus,
            "cuts" => Suite::Cuts,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub name: &'static str,
    pub cases: usize,
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: Suite,
    pub degree: usize,
    pub outcomes: Vec<CheckOutcome>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .outcomes
            .iter()
            .map(|o| {
                json!({
                    "suite": o.suite.to_string(),
                    "name": o.name,
                    "cases": o.cases,
                    "passed": o.passed(),
                    "counterexample": o.counterexample,
                })
            })
            .collect();
        json!({
            "suite": self.suite.to_string(),
            "degree": self.degree,
            "passed": self.all_passed(),
            "checks": checks,
        })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let status = if o.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {}/{} ({} cases)", o.suite, o.name, o.cases)?;
            if let Some(c) = &o.counterexample {
                writeln!(f, "  counterexample: {c}")?;
            }
        }
        let failed = self.failures().count();
        write!(f, "{} checks, {} failed", self.outcomes.len(), failed)
    }
}

/// Counts cases and keeps the first failure.
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { cases: 0, failure: None }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn eq<T: PartialEq + fmt::Debug>(&mut self, lhs: &T, rhs: &T, what: impl FnOnce() -> String) {
        self.check(lhs == rhs, || format!("{}: {lhs:?} != {rhs:?}", what()));
    }
}

type CheckFn = fn(usize) -> Tally;

fn checks_for(suite: Suite) -> Vec<(&'static str, CheckFn)> {
    match suite {
        Suite::Hopf => vec![
            ("division-identities", hopf_divisions as CheckFn),
            ("coassociativity", hopf_coassociativity),
            ("cocommutativity", hopf_cocommutativity),
            ("counit-laws", hopf_counit),
            ("multiplicativity", hopf_multiplicativity),
            ("bracket-identity", hopf_bracket_identity),
        ],
        Suite::Suops => vec![
            ("p-primitive", suops_p_primitive as CheckFn),
            ("bracket-antisymmetry", suops_antisymmetry),
            ("phi-primitive", suops_phi_primitive),
            ("phi-expansion", suops_phi_expansion),
        ],
        Suite::Dsw => vec![
            ("product-rule", dsw_product_rule as CheckFn),
            ("reconstruction", dsw_reconstruction),
            ("bracketize-word", dsw_bracketize),
            ("gamma-of-exp", dsw_gamma_exp),
        ],
        Suite::Magnus => vec![
            ("nj-tree", magnus_nj_tree as CheckFn),
            ("nj-bernoulli", magnus_nj_bernoulli),
            ("tau-inverse", magnus_tau_inverse),
            ("composition-law", magnus_composition_law),
            ("first-order", magnus_first_order),
            ("ode", magnus_ode),
            ("primitive-bch", magnus_primitive),
            ("grouplike-exponentials", magnus_grouplike),
        ],
        Suite::Cuts => vec![
            ("oracle", cuts_oracle as CheckFn),
            ("closed-form", cuts_closed_form),
            ("bch-cut-counts", cuts_counts),
            ("branch-nesting", cuts_nesting),
        ],
        Suite::All => Vec::new(),
    }
}

/// Runs every check of `suite` on inputs of degree at most `degree`.
pub fn run_suite(suite: Suite, degree: usize, strategy: Strategy) -> Report {
    let jobs: Vec<(Suite, &'static str, CheckFn)> = suite
        .members()
        .into_iter()
        .flat_map(|s| checks_for(s).into_iter().map(move |(name, f)| (s, name, f)))
        .collect();
    let outcomes = par::map(strategy, &jobs, |&(s, name, f)| {
        let t = f(degree);
        CheckOutcome {
            suite: s,
            name,
            cases: t.cases,
            counterexample: t.failure,
        }
    });
    Report { suite, degree, outcomes }
}

fn mono(m: &Monomial, n: usize) -> Series {
    Series::monomial(m.clone(), Rational::from_integer(1.into()), n)
}

fn words(d: usize) -> Vec<Vec<Generator>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|w| {
                [Generator::X, Generator::Y].into_iter().map(move |g| {
                    let mut w = w.clone();
                    w.push(g);
                    w
                })
            })
            .collect();
    }
    out
}

fn word_product(w: &[Generator], n: usize) -> Series {
    let gens: Vec<Series> = w.iter().map(|g| Series::generator(*g, n)).collect();
    left_normed_product(&gens.iter().collect::<Vec<_>>(), n)
}

fn hopf_divisions(d: usize) -> Tally {
    let mut t = Tally::new();
    for u in Monomial::enumerate_up_to(d) {
        let mut vs: Vec<Side> = vec![None];
        vs.extend(Monomial::enumerate_up_to(d.saturating_sub(u.degree()).min(2)).into_iter().map(Some));
        for v in vs {
            let n = u.degree() + v.as_ref().map_or(0, Monomial::degree);
            for (i, (lhs, rhs)) in division_axioms(&u, &v, n).into_iter().enumerate() {
                t.eq(&lhs, &rhs, || format!("identity {} at u = {u}, v = {v:?}", i + 1));
            }
        }
    }
    t
}

fn hopf_coassociativity(d: usize) -> Tally {
    let mut t = Tally::new();
    for w in Monomial::enumerate_up_to(d) {
        let s = mono(&w, d);
        t.check(coproduct_left_iterated(&s) == coproduct_right_iterated(&s), || w.to_string());
    }
    t
}

fn hopf_cocommutativity(d: usize) -> Tally {
    let mut t = Tally::new();
    for w in Monomial::enumerate_up_to(d) {
        let delta = coproduct(&mono(&w, d));
        t.check(delta.swap() == delta, || w.to_string());
    }
    t
}

fn hopf_counit(d: usize) -> Tally {
    let mut t = Tally::new();
    for w in Monomial::enumerate_up_to(d) {
        let s = mono(&w, d);
        let delta = coproduct(&s);
        t.eq(&delta.counit_left(), &s, || format!("(ε⊗id)Δ at {w}"));
        t.eq(&delta.counit_right(), &s, || format!("(id⊗ε)Δ at {w}"));
    }
    t
}

fn hopf_multiplicativity(d: usize) -> Tally {
    let mut t = Tally::new();
    let ms = Monomial::enumerate_up_to(d.saturating_sub(1));
    for u in &ms {
        for v in ms.iter().filter(|v| u.degree() + v.degree() <= d) {
            let (su, sv) = (mono(u, d), mono(v, d));
            let lhs = coproduct(&(&su * &sv));
            let rhs = coproduct(&su).mul(&coproduct(&sv));
            t.check(lhs == rhs, || format!("Δ({u}·{v})"));
        }
    }
    t
}

fn hopf_bracket_identity(d: usize) -> Tally {
    use Generator::{X, Y, Z};
    let mut t = Tally::new();
    for k in 1..=d.saturating_sub(2) {
        for w in words(k) {
            for (y, z) in [(X, Y), (Y, X), (X, X), (Y, Z), (Z, Y)] {
                let (l, r) = bracket_identity_sides(&w, y, z, k + 2);
                t.eq(&l, &r, || format!("word {w:?}, y = {y}, z = {z}"));
            }
        }
    }
    t
}

fn suops_p_primitive(d: usize) -> Tally {
    let mut t = Tally::new();
    for du in 0..d {
        for dv in 1..d.saturating_sub(du) {
            for wu in words(du) {
                for wv in words(dv) {
                    for gz in [Generator::X, Generator::Y] {
                        let n = du + dv + 1;
                        let p = p_series(&word_product(&wu, n), &word_product(&wv, n), &Series::generator(gz, n));
                        t.check(is_primitive(&p), || format!("p({wu:?}; {wv:?}; {gz})"));
                    }
                }
            }
        }
    }
    t
}

fn suops_antisymmetry(d: usize) -> Tally {
    let mut t = Tally::new();
    for k in 0..=d.saturating_sub(2) {
        for w in words(k) {
            let n = k + 2;
            let gens: Vec<Series> = w.iter().map(|g| Series::generator(*g, n)).collect();
            let prefix: Vec<&Series> = gens.iter().collect();
            let (x, y) = (Series::x(n), Series::y(n));
            let s = &su_bracket(&prefix, &x, &y) + &su_bracket(&prefix, &y, &x);
            t.check(s.is_zero(), || format!("<{w:?}; x, y> + <{w:?}; y, x>"));
            t.check(is_primitive(&su_bracket(&prefix, &x, &y)), || format!("<{w:?}; x, y> primitive"));
        }
    }
    t
}

fn suops_phi_primitive(d: usize) -> Tally {
    let mut t = Tally::new();
    for m in 1..d {
        for k in 2..=d - m {
            for xs in words(m) {
                for ys in words(k) {
                    let n = m + k;
                    let a: Vec<Series> = xs.iter().map(|g| Series::generator(*g, n)).collect();
                    let b: Vec<Series> = ys.iter().map(|g| Series::generator(*g, n)).collect();
                    let v = phi(&a.iter().collect::<Vec<_>>(), &b.iter().collect::<Vec<_>>());
                    t.check(v.as_ref().is_ok_and(is_primitive), || format!("Phi({xs:?}; {ys:?})"));
                }
            }
        }
    }
    t
}

fn suops_phi_expansion(d: usize) -> Tally {
    let mut t = Tally::new();
    let n = d.max(3);
    let (x, y) = (Series::x(n), Series::y(n));
    let ex = Series::exp_l(&x, n).expect("no constant term");
    let ey = Series::exp_l(&y, n).expect("no constant term");
    let lhs = p_series(&ex, &ey, &y);
    let mut rhs = Series::zero(n);
    for m in 1..n {
        for k in 1..n - m {
            let xs = vec![&x; m];
            let ys = vec![&y; k + 1];
            let v = phi(&xs, &ys).expect("valid arity");
            rhs.add_scaled(&(inv_factorial(m) * inv_factorial(k)), &v);
        }
    }
    t.eq(&lhs, &rhs, || format!("p(exp_l x; exp_l y; y) at degree {n}"));
    t
}

fn derivations(n: usize) -> [Derivation; 2] {
    [Derivation::Degree, Derivation::y_dx(n)]
}

fn dsw_product_rule(d: usize) -> Tally {
    let mut t = Tally::new();
    let mut us: Vec<Side> = vec![None];
    us.extend(Monomial::enumerate_up_to(d.saturating_sub(1)).into_iter().map(Some));
    for u in &us {
        let n = u.as_ref().map_or(0, Monomial::degree) + 1;
        for dv in derivations(n) {
            for a in [Generator::X, Generator::Y] {
                t.check(dsw_identity_check(u, a, &dv, n), || format!("u = {u:?}, a = {a}, d = {dv:?}"));
            }
        }
    }
    t
}

fn dsw_reconstruction(d: usize) -> Tally {
    let mut t = Tally::new();
    for dv in derivations(d) {
        for u in Monomial::enumerate_up_to(d) {
            let (l, r) = reconstruction_sides(&u, &dv, d);
            t.eq(&l, &r, || format!("u = {u}, d = {dv:?}"));
        }
    }
    t
}

fn dsw_bracketize(d: usize) -> Tally {
    let mut t = Tally::new();
    for w in Monomial::enumerate_up_to(d).into_iter().filter(Monomial::is_left_normed) {
        let n = w.degree();
        let sym = bracketize_word(&w).map(|c| eval_combination(&c, n));
        let num = gamma(&Derivation::Degree, &mono(&w, n));
        t.check(sym.as_ref().is_ok_and(|s| *s == num), || w.to_string());
    }
    t
}

fn dsw_gamma_exp(d: usize) -> Tally {
    let mut t = Tally::new();
    for n in 1..=d {
        let e = Series::exp_l(&Series::x(n), n).expect("no constant term");
        let g = gamma(&Derivation::y_dx(n), &e);
        t.eq(&g, &eval_combination(&tau_exp_l(n - 1), n), || format!("degree {n}"));
    }
    t
}

fn magnus_nj_tree(d: usize) -> Tally {
    let mut t = Tally::new();
    for j in Composition::up_to_weight(d) {
        t.eq(&nj_tree_sum(&j), &n_coeff(&j), || j.to_string());
    }
    t
}

fn magnus_nj_bernoulli(d: usize) -> Tally {
    let mut t = Tally::new();
    for k in 1..=d.max(1) {
        let j = Composition::ones(k).expect("k >= 1");
        t.eq(&n_coeff(&j), &(bernoulli(k) * inv_factorial(k)), || format!("k = {k}"));
    }
    t
}

fn magnus_tau_inverse(d: usize) -> Tally {
    let mut t = Tally::new();
    let n = d + 1;
    let (x, y) = (Series::x(n), Series::y(n));
    t.eq(&tau_inverse(&x, &tau_apply(&x, &y, n), n), &y, || "τ⁻¹∘τ".into());
    t.eq(&tau_apply(&x, &tau_inverse(&x, &y, n), n), &y, || "τ∘τ⁻¹".into());
    t
}

fn magnus_composition_law(d: usize) -> Tally {
    let mut t = Tally::new();
    let n = d.min(4) + 1;
    let (x, y) = (Series::x(n), Series::y(n));
    for j in Composition::up_to_weight(d.min(4)) {
        for f in j.factorizations().into_iter().filter(|f| f.len() == 2) {
            let inner = p_nested(&f[1], &x, &y, n);
            t.eq(&p_nested(&f[0], &x, &inner, n), &p_nested(&j, &x, &y, n), || format!("{} ‖ {}", f[0], f[1]));
        }
    }
    t
}

fn magnus_first_order(d: usize) -> Tally {
    let mut t = Tally::new();
    let sym = eval_combination(&bch_first_order::<PrimCombination>(d), d);
    let y_linear = |s: &Series| s.filter(|m| m.count(Generator::Y) <= 1);
    t.eq(&y_linear(&sym), &y_linear(&bch_monomial(d)), || format!("degree {d}"));
    t
}

fn magnus_ode(d: usize) -> Tally {
    let mut t = Tally::new();
    let n = d.min(5);
    let sym = eval_combination(&bch_ode::<PrimCombination>(n).at_one(n), n);
    t.eq(&sym, &bch_monomial(n), || format!("degree {n}"));
    t
}

fn magnus_primitive(d: usize) -> Tally {
    let mut t = Tally::new();
    t.check(is_primitive(&bch_monomial(d)), || format!("bch_monomial({d})"));
    t
}

fn magnus_grouplike(d: usize) -> Tally {
    let mut t = Tally::new();
    let (x, y) = (Series::x(d), Series::y(d));
    let el = Series::exp_l(&x, d).expect("no constant term");
    let er = Series::exp_r(&x, d).expect("no constant term");
    let ey = Series::exp_l(&y, d).expect("no constant term");
    t.check(is_grouplike(&el), || "exp_l(x)".into());
    t.check(is_grouplike(&er), || "exp_r(x)".into());
    t.check(is_grouplike(&(&el * &ey)), || "exp_l(x) exp_l(y)".into());
    t
}

fn cuts_oracle(d: usize) -> Tally {
    let mut t = Tally::new();
    let bch = bch_monomial(d);
    let ws = Monomial::enumerate_up_to(d);
    let cs = coefficients_via_cuts(&ws, Strategy::default());
    for (w, c) in ws.iter().zip(&cs) {
        t.eq(c, &bch.coeff(w), || w.to_string());
    }
    t
}

fn cuts_closed_form(d: usize) -> Tally {
    let mut t = Tally::new();
    for total in 2..=d {
        for m in 1..total {
            let w = xy_branch(m, total - m).expect("m, n >= 1");
            let cut = crate::cuts::coefficient_via_cuts(&w);
            t.check(closed_form_xmyn(m, total - m).is_ok_and(|c| c == cut), || format!("x^{m} y^{}", total - m));
        }
    }
    t
}

fn cuts_counts(d: usize) -> Tally {
    let mut t = Tally::new();
    for i in 0..=d {
        for j in 0..=d - i {
            if i + j == 0 {
                continue;
            }
            let w = xy_branch(i, j).expect("i + j >= 1");
            let expect = if i > 0 && j > 0 { i * j + 1 } else { i + j };
            t.eq(&enumerate_bch_cuts(&w).len(), &expect, || format!("x^{i} y^{j}"));
        }
    }
    t
}

fn cuts_nesting(d: usize) -> Tally {
    let mut t = Tally::new();
    for w in Monomial::enumerate_up_to(d) {
        let mut sets: Vec<(usize, usize)> = enumerate_cuts(&w).iter().flat_map(|c| c.positions.clone()).collect();
        sets.sort();
        sets.dedup();
        let laminar = sets.iter().all(|&(a, b)| {
            sets.iter()
                .all(|&(c, e)| b < c || e < a || (a <= c && e <= b) || (c <= a && b <= e))
        });
        t.check(laminar, || w.to_string());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn all_suites_pass_at_degree_three() {
        let r = run_suite(Suite::All, 3, Strategy::default());
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.outcomes.len(), 26);
        assert!(r.outcomes.iter().all(|o| o.cases > 0), "{r}");
        assert_eq!(r.to_json()["passed"], true);
    }

    #[test]
    fn strategies_give_the_same_report() {
        let a = run_suite(Suite::Cuts, 4, Strategy::Sequential);
        let b = run_suite(Suite::Cuts, 4, Strategy::Parallel);
        assert_eq!(a.outcomes, b.outcomes);
    }

    #[test]
    fn failures_are_reported() {
        let mut t = Tally::new();
        t.eq(&1, &2, || "one".into());
        t.eq(&3, &4, || "two".into());
        assert_eq!(t.cases, 2);
        assert_eq!(t.failure.as_deref(), Some("one: 1 != 2"));
    }
}
