//! Registry of the identities relating Appell, generalized Bernoulli,
//! generalized Euler and mixed polynomials, each checked as an exact
//! polynomial identity in ℚ[x, y, m, l].
//!
//! A checker produces, for one degree `n`, a list of `(lhs, rhs)` pairs: the
//! displayed identity first, then any intermediate steps of its derivation.
//! The residual reported for `n` is the first nonzero `lhs - rhs`, or zero.
//! Order-decremented objects such as `B^{(m-1)}` are always the symbolic
//! polynomial with its order variable Taylor-shifted by `-1`.

use crate::appell::{convolve, expect_bernoulli_shift, expect_uniform_shift};
use crate::error::{AppellError, Result};
use crate::families::{Catalog, FamilyKey, FamilyKind, Shape};
use crate::poly::{MultiPoly, Var};
use crate::rational::{binomial_row, int, rat, Rational};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    AppellBinomial,
    MeanValueB,
    MeanValueE,
    DerivRecursion,
    OrderZero,
    OrderAdditionB,
    TranslationB,
    DifferenceB,
    OrderAdditionE,
    TranslationE,
    DifferenceE,
    ExpectReduceB,
    ExpectReduceE,
    MixedConv,
    MixedBinomial,
    MixedTwoExpansions,
    MixedDifference,
    MixedAverage,
    LemmaDecomposition,
    MainTheorem,
    Corollary1,
    Corollary2,
    Cheon,
    SpEquivalence,
    PropIdentity,
}

impl IdentityId {
    pub const ALL: [IdentityId; 25] = [
        IdentityId::AppellBinomial,
        IdentityId::MeanValueB,
        IdentityId::MeanValueE,
        IdentityId::DerivRecursion,
        IdentityId::OrderZero,
        IdentityId::OrderAdditionB,
        IdentityId::TranslationB,
        IdentityId::DifferenceB,
        IdentityId::OrderAdditionE,
        IdentityId::TranslationE,
        IdentityId::DifferenceE,
        IdentityId::ExpectReduceB,
        IdentityId::ExpectReduceE,
        IdentityId::MixedConv,
        IdentityId::MixedBinomial,
        IdentityId::MixedTwoExpansions,
        IdentityId::MixedDifference,
        IdentityId::MixedAverage,
        IdentityId::LemmaDecomposition,
        IdentityId::MainTheorem,
        IdentityId::Corollary1,
        IdentityId::Corollary2,
        IdentityId::Cheon,
        IdentityId::SpEquivalence,
        IdentityId::PropIdentity,
    ];

    pub fn name(self) -> &'static str {
        use IdentityId::*;
        match self {
            AppellBinomial => "appell-binomial",
            MeanValueB => "mean-value-B",
            MeanValueE => "mean-value-E",
            DerivRecursion => "deriv-recursion",
            OrderZero => "order-zero",
            OrderAdditionB => "order-addition-B",
            TranslationB => "translation-B",
            DifferenceB => "difference-B",
            OrderAdditionE => "order-addition-E",
            TranslationE => "translation-E",
            DifferenceE => "difference-E",
            ExpectReduceB => "expect-reduce-B",
            ExpectReduceE => "expect-reduce-E",
            MixedConv => "mixed-conv",
            MixedBinomial => "mixed-binomial",
            MixedTwoExpansions => "mixed-two-expansions",
            MixedDifference => "mixed-difference",
            MixedAverage => "mixed-average",
            LemmaDecomposition => "lemma-decomposition",
            MainTheorem => "main-theorem",
            Corollary1 => "corollary-1",
            Corollary2 => "corollary-2",
            Cheon => "cheon",
            SpEquivalence => "sp-equivalence",
            PropIdentity => "prop-identity",
        }
    }

    /// Extra degree beyond `n` that the checker touches.
    pub fn headroom(self) -> usize {
        match self {
            IdentityId::ExpectReduceB | IdentityId::MixedDifference | IdentityId::Corollary2 => 1,
            _ => 0,
        }
    }

    fn supports_shift_count(self) -> bool {
        matches!(
            self,
            IdentityId::MeanValueB | IdentityId::MeanValueE | IdentityId::ExpectReduceB | IdentityId::ExpectReduceE
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = AppellError;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| AppellError::UnknownIdentity(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sides {
    pub lhs: MultiPoly,
    pub rhs: MultiPoly,
}

impl Sides {
    pub fn new(lhs: MultiPoly, rhs: MultiPoly) -> Self {
        Sides { lhs, rhs }
    }

    pub fn residual(&self) -> MultiPoly {
        &self.lhs - &self.rhs
    }
}

pub type Checker = fn(&Ctx<'_>, usize) -> Result<Vec<Sides>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub n: usize,
    pub polynomial: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub identity: IdentityId,
    pub n_range: (usize, usize),
    pub status: Status,
    /// One entry per degree; zero where the identity holds.
    pub residuals: Vec<Residual>,
    pub elapsed: Duration,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.polynomial.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct ResidualJson {
            n: usize,
            polynomial: String,
        }
        #[derive(Serialize)]
        struct ReportJson {
            identity: IdentityId,
            n_range: [usize; 2],
            status: Status,
            residuals: Vec<ResidualJson>,
            elapsed_ms: f64,
        }
        let view = ReportJson {
            identity: self.identity,
            n_range: [self.n_range.0, self.n_range.1],
            status: self.status,
            residuals: self
                .residuals
                .iter()
                .map(|r| ResidualJson { n: r.n, polynomial: r.polynomial.to_string() })
                .collect(),
            elapsed_ms: self.elapsed.as_secs_f64() * 1e3,
        };
        serde_json::to_value(view).expect("report serializes")
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} {} n={}..={} ({:.1} ms)",
            self.identity,
            self.n_range.0,
            self.n_range.1,
            self.elapsed.as_secs_f64() * 1e3
        )?;
        for r in self.failures() {
            write!(f, "\n  n={}: residual {}", r.n, r.polynomial)?;
        }
        Ok(())
    }
}

/// Family lookups used by the checkers.
pub struct Ctx<'a> {
    catalog: &'a Catalog,
}

impl<'a> Ctx<'a> {
    pub fn new(catalog: &'a Catalog) -> Self {
        Ctx { catalog }
    }

    pub fn catalog(&self) -> &Catalog {
        self.catalog
    }

    fn get(&self, shape: Shape, arg: Var, n: usize) -> Result<MultiPoly> {
        self.catalog.member(FamilyKey::new(shape, arg)?, n)
    }

    /// Member `n - 1`, or zero when `n = 0`. Used for the terms `k·B_{k-1}`
    /// whose `k = 0` summand vanishes.
    fn get_prev(&self, shape: Shape, arg: Var, n: usize) -> Result<MultiPoly> {
        match n.checked_sub(1) {
            Some(k) => self.get(shape, arg, k),
            None => Ok(MultiPoly::zero()),
        }
    }

    pub fn b(&self, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::Bernoulli, arg, n)
    }

    pub fn e(&self, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::Euler, arg, n)
    }

    /// `B_n^{(order)}(arg)`.
    pub fn gb(&self, order: Var, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::GenBernoulli(order), arg, n)
    }

    /// `E_n^{(order)}(arg)`.
    pub fn ge(&self, order: Var, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::GenEuler(order), arg, n)
    }

    /// `Q_n^{((m)+(l))}(x)`.
    pub fn q(&self, n: usize) -> Result<MultiPoly> {
        self.get(Shape::Mixed(Var::M, Var::L), Var::X, n)
    }
}

fn dec(p: &MultiPoly, v: Var) -> MultiPoly {
    p.shift_by(v, &int(-1))
}

fn xpow(v: Var, k: usize) -> MultiPoly {
    MultiPoly::var(v).pow(k as u32)
}

fn scaled(p: &MultiPoly, c: &BigInt) -> MultiPoly {
    p.scale_int(c)
}

fn nrat(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn at_zero(p: &MultiPoly, v: Var) -> MultiPoly {
    p.eval(&[(v, int(0))])
}

fn shifted_by_var(p: &MultiPoly, v: Var, by: Var) -> Result<MultiPoly> {
    p.shift(v, &MultiPoly::var(by))
}

/// `Σ_k C(n,k) f(k) g(n-k)`.
fn binomial_sum<F, G>(n: usize, mut f: F, mut g: G) -> Result<MultiPoly>
where
    F: FnMut(usize) -> Result<MultiPoly>,
    G: FnMut(usize) -> Result<MultiPoly>,
{
    let row = binomial_row(n);
    let mut out = MultiPoly::zero();
    for k in 0..=n {
        let a = f(k)?;
        if a.is_zero() {
            continue;
        }
        out += scaled(&(a * &g(n - k)?), &row[k]);
    }
    Ok(out)
}

fn repeat(p: &MultiPoly, times: usize, op: impl Fn(&MultiPoly) -> MultiPoly) -> MultiPoly {
    (0..times).fold(p.clone(), |acc, _| op(&acc))
}

fn all_kinds(ctx: &Ctx<'_>, n: usize) -> Result<Vec<MultiPoly>> {
    FamilyKind::ALL.iter().map(|k| ctx.catalog.member(k.key(), n)).collect()
}

fn check_appell_binomial(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let mut out = Vec::new();
    for kind in FamilyKind::ALL {
        let member = |k: usize| ctx.catalog.member(kind.key(), k);
        let translated = shifted_by_var(&member(n)?, Var::X, Var::Y)?;
        let rhs = binomial_sum(n, member, |j| Ok(xpow(Var::Y, j)))?;
        out.push(Sides::new(translated, rhs));
        // With x = 0: Q_n(y) = Σ C(n,k) Q_k(0) y^{n-k}.
        let at_y = member(n)?.rename(Var::X, Var::Y)?;
        let rhs = binomial_sum(n, |k| Ok(at_zero(&member(k)?, Var::X)), |j| Ok(xpow(Var::Y, j)))?;
        out.push(Sides::new(at_y, rhs));
    }
    Ok(out)
}

fn check_deriv_recursion(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let current = all_kinds(ctx, n)?;
    let previous = match n.checked_sub(1) {
        Some(k) => all_kinds(ctx, k)?,
        None => vec![MultiPoly::zero(); current.len()],
    };
    Ok(current
        .iter()
        .zip(&previous)
        .map(|(q, prev)| Sides::new(q.derivative(Var::X), prev.scale(&nrat(n))))
        .collect())
}

fn check_order_zero(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let xn = xpow(Var::X, n);
    let m0 = [(Var::M, int(0))];
    let trivial = ctx.get(Shape::Trivial, Var::X, n)?;
    let both0 = [(Var::M, int(0)), (Var::L, int(0))];
    Ok(vec![
        Sides::new(trivial, xn.clone()),
        Sides::new(ctx.gb(Var::M, Var::X, n)?.eval(&m0), xn.clone()),
        Sides::new(ctx.ge(Var::M, Var::X, n)?.eval(&m0), xn.clone()),
        Sides::new(ctx.q(n)?.eval(&both0), xn),
    ])
}

fn mean_value_b(ctx: &Ctx<'_>, n: usize, shifts: usize) -> Result<Sides> {
    let lhs = repeat(&ctx.b(Var::X, n)?, shifts, |p| expect_uniform_shift(p, Var::X));
    let order = int(1) - nrat(shifts);
    let rhs = ctx.gb(Var::M, Var::X, n)?.eval(&[(Var::M, order)]);
    Ok(Sides::new(lhs, rhs))
}

fn mean_value_e(ctx: &Ctx<'_>, n: usize, shifts: usize) -> Result<Sides> {
    let lhs = repeat(&ctx.e(Var::X, n)?, shifts, |p| expect_bernoulli_shift(p, Var::X));
    let order = int(1) - nrat(shifts);
    let rhs = ctx.ge(Var::M, Var::X, n)?.eval(&[(Var::M, order)]);
    Ok(Sides::new(lhs, rhs))
}

fn expect_reduce_b(ctx: &Ctx<'_>, n: usize, shifts: usize) -> Result<Sides> {
    let bm = ctx.gb(Var::M, Var::X, n)?;
    let lhs = repeat(&bm, shifts, |p| expect_uniform_shift(p, Var::X));
    Ok(Sides::new(lhs, bm.shift_by(Var::M, &-nrat(shifts))))
}

fn expect_reduce_e(ctx: &Ctx<'_>, n: usize, shifts: usize) -> Result<Sides> {
    let em = ctx.ge(Var::M, Var::X, n)?;
    let lhs = repeat(&em, shifts, |p| expect_bernoulli_shift(p, Var::X));
    Ok(Sides::new(lhs, em.shift_by(Var::M, &-nrat(shifts))))
}

fn check_mean_value_b(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    Ok(vec![mean_value_b(ctx, n, 1)?])
}

fn check_mean_value_e(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    Ok(vec![mean_value_e(ctx, n, 1)?])
}

fn check_expect_reduce_b(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let mut out = (1..=3).map(|s| expect_reduce_b(ctx, n, s)).collect::<Result<Vec<_>>>()?;
    let bm = ctx.gb(Var::M, Var::X, n)?;
    let mean = expect_uniform_shift(&bm, Var::X);
    // Expansion through B^{(m-1)}(0) and the classical mean value property.
    let via_classical = binomial_sum(
        n,
        |i| Ok(at_zero(&dec(&ctx.gb(Var::M, Var::X, i)?, Var::M), Var::X)),
        |j| Ok(expect_uniform_shift(&ctx.b(Var::X, j)?, Var::X)),
    )?;
    out.push(Sides::new(mean.clone(), via_classical));
    // E[(x+θ)^i] = ((x+1)^{i+1} - x^{i+1})/(i+1), summed against B^{(m)}(0).
    let via_moments = binomial_sum(
        n,
        |i| {
            let top = xpow(Var::X, i + 1);
            let diff = top.shift_by(Var::X, &int(1)) - &top;
            Ok(diff.scale(&rat(1, i as i64 + 1)))
        },
        |j| Ok(at_zero(&ctx.gb(Var::M, Var::X, j)?, Var::X)),
    )?;
    out.push(Sides::new(mean.clone(), via_moments));
    let next = ctx.gb(Var::M, Var::X, n + 1)?;
    let difference = (next.shift_by(Var::X, &int(1)) - &next).scale(&rat(1, n as i64 + 1));
    out.push(Sides::new(mean, difference));
    Ok(out)
}

fn check_expect_reduce_e(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    (1..=3).map(|s| expect_reduce_e(ctx, n, s)).collect()
}

fn check_order_addition_b(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = ctx
        .gb(Var::M, Var::X, n)?
        .shift(Var::M, &MultiPoly::var(Var::L))?
        .shift(Var::X, &MultiPoly::var(Var::Y))?;
    let rhs = binomial_sum(n, |i| ctx.gb(Var::M, Var::X, i), |j| ctx.gb(Var::L, Var::Y, j))?;
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_order_addition_e(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = ctx
        .ge(Var::M, Var::X, n)?
        .shift(Var::M, &MultiPoly::var(Var::L))?
        .shift(Var::X, &MultiPoly::var(Var::Y))?;
    let rhs = binomial_sum(n, |i| ctx.ge(Var::M, Var::X, i), |j| ctx.ge(Var::L, Var::Y, j))?;
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_translation_b(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = shifted_by_var(&ctx.gb(Var::M, Var::X, n)?, Var::X, Var::Y)?;
    let rhs = binomial_sum(n, |i| ctx.gb(Var::M, Var::X, i), |j| Ok(xpow(Var::Y, j)))?;
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_translation_e(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = shifted_by_var(&ctx.ge(Var::M, Var::X, n)?, Var::X, Var::Y)?;
    let rhs = binomial_sum(n, |i| ctx.ge(Var::M, Var::X, i), |j| Ok(xpow(Var::Y, j)))?;
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_difference_b(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let bm = ctx.gb(Var::M, Var::X, n)?;
    let lhs = bm.shift_by(Var::X, &int(1)) - &bm;
    let rhs = dec(&ctx.get_prev(Shape::GenBernoulli(Var::M), Var::X, n)?, Var::M).scale(&nrat(n));
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_difference_e(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let em = ctx.ge(Var::M, Var::X, n)?;
    let lhs = em.shift_by(Var::X, &int(1)) + &em;
    let rhs = dec(&em, Var::M).scale(&int(2));
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_mixed_conv(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = shifted_by_var(&ctx.q(n)?, Var::X, Var::Y)?;
    let bx = ctx.catalog.family(FamilyKey::new(Shape::GenBernoulli(Var::M), Var::X)?, n)?;
    let ey = ctx.catalog.family(FamilyKey::new(Shape::GenEuler(Var::L), Var::Y)?, n)?;
    Ok(vec![Sides::new(lhs, convolve(&bx, &ey, n)?)])
}

fn check_mixed_binomial(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let rhs = binomial_sum(n, |k| Ok(at_zero(&ctx.q(k)?, Var::X)), |j| Ok(xpow(Var::X, j)))?;
    Ok(vec![Sides::new(ctx.q(n)?, rhs)])
}

fn check_mixed_two_expansions(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let q = ctx.q(n)?;
    let via_b = binomial_sum(n, |k| Ok(at_zero(&dec(&ctx.q(k)?, Var::M), Var::X)), |j| ctx.b(Var::X, j))?;
    let via_e = binomial_sum(n, |k| Ok(at_zero(&dec(&ctx.q(k)?, Var::L), Var::X)), |j| ctx.e(Var::X, j))?;
    Ok(vec![Sides::new(q.clone(), via_b), Sides::new(q, via_e)])
}

fn check_mixed_difference(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let q = ctx.q(n)?;
    let lhs = q.shift_by(Var::X, &int(1)) - &q;
    let prev = match n.checked_sub(1) {
        Some(k) => dec(&ctx.q(k)?, Var::M),
        None => MultiPoly::zero(),
    };
    let mean = expect_uniform_shift(&q, Var::X);
    let next = ctx.q(n + 1)?;
    let difference = (next.shift_by(Var::X, &int(1)) - &next).scale(&rat(1, n as i64 + 1));
    Ok(vec![
        Sides::new(lhs, prev.scale(&nrat(n))),
        Sides::new(mean.clone(), dec(&q, Var::M)),
        Sides::new(mean, difference),
    ])
}

fn check_mixed_average(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let q = ctx.q(n)?;
    let lhs = q.shift_by(Var::X, &int(1)) + &q;
    let reduced = dec(&q, Var::L);
    let mean = expect_bernoulli_shift(&q, Var::X);
    // E[(x+η)^j] = ((x+1)^j + x^j)/2 against Q_k(0).
    let via_moments = binomial_sum(
        n,
        |k| Ok(at_zero(&ctx.q(k)?, Var::X)),
        |j| {
            let p = xpow(Var::X, j);
            Ok((p.shift_by(Var::X, &int(1)) + &p).scale(&rat(1, 2)))
        },
    )?;
    Ok(vec![
        Sides::new(lhs, reduced.scale(&int(2))),
        Sides::new(mean.clone(), reduced),
        Sides::new(mean, via_moments),
    ])
}

fn check_lemma_decomposition(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let q = ctx.q(n)?;
    let prev = match n.checked_sub(1) {
        Some(k) => dec(&ctx.q(k)?, Var::M),
        None => MultiPoly::zero(),
    };
    let rhs = dec(&q, Var::L) - prev.scale(&rat(n as i64, 2));
    Ok(vec![Sides::new(q, rhs)])
}

/// `B_k^{(m)}(x) + (k/2) B_{k-1}^{(m-1)}(x)`, the bracket in the main theorem.
fn theorem_bracket(ctx: &Ctx<'_>, k: usize) -> Result<MultiPoly> {
    let prev = dec(&ctx.get_prev(Shape::GenBernoulli(Var::M), Var::X, k)?, Var::M);
    Ok(ctx.gb(Var::M, Var::X, k)? + prev.scale(&rat(k as i64, 2)))
}

fn check_main_theorem(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = binomial_sum(n, |k| ctx.gb(Var::M, Var::X, k), |j| Ok(dec(&ctx.ge(Var::L, Var::Y, j)?, Var::L)))?;
    let rhs = binomial_sum(n, |k| theorem_bracket(ctx, k), |j| ctx.ge(Var::L, Var::Y, j))?;
    // Re-indexing step: Σ C(n,k) (k/2) B_{k-1}^{(m-1)} E_{n-k}^{(l)} = (n/2) Σ C(n-1,k) B_k^{(m-1)} E_{n-1-k}^{(l)}.
    let shifted_sum = binomial_sum(
        n,
        |k| Ok(dec(&ctx.get_prev(Shape::GenBernoulli(Var::M), Var::X, k)?, Var::M).scale(&rat(k as i64, 2))),
        |j| ctx.ge(Var::L, Var::Y, j),
    )?;
    let reindexed = match n.checked_sub(1) {
        Some(n1) => binomial_sum(n1, |k| Ok(dec(&ctx.gb(Var::M, Var::X, k)?, Var::M)), |j| ctx.ge(Var::L, Var::Y, j))?
            .scale(&rat(n as i64, 2)),
        None => MultiPoly::zero(),
    };
    Ok(vec![Sides::new(lhs, rhs), Sides::new(shifted_sum, reindexed)])
}

fn check_corollary_1(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = shifted_by_var(&ctx.gb(Var::M, Var::X, n)?, Var::X, Var::Y)?;
    let rhs = binomial_sum(n, |k| theorem_bracket(ctx, k), |j| ctx.e(Var::Y, j))?;
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_corollary_2(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = shifted_by_var(&ctx.ge(Var::L, Var::Y, n)?, Var::Y, Var::X)?;
    let rhs = binomial_sum(
        n,
        |k| {
            let el = ctx.ge(Var::L, Var::Y, k + 1)?;
            Ok((dec(&el, Var::L) - &el).scale(&rat(2, k as i64 + 1)))
        },
        |j| ctx.b(Var::X, j),
    )?;
    Ok(vec![Sides::new(lhs, rhs)])
}

fn check_cheon(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let lhs = ctx.b(Var::Y, n)?;
    let rhs = binomial_sum(
        n,
        |k| if k == 1 { Ok(MultiPoly::zero()) } else { Ok(at_zero(&ctx.b(Var::X, k)?, Var::X)) },
        |j| ctx.e(Var::Y, j),
    )?;
    // Corollary 1 at x = 0, m = 1 yields the same sum, the k = 1 bracket cancelling.
    let at = [(Var::X, int(0)), (Var::M, int(1))];
    let from_corollary = binomial_sum(n, |k| Ok(theorem_bracket(ctx, k)?.eval(&at)), |j| ctx.e(Var::Y, j))?;
    Ok(vec![Sides::new(lhs.clone(), rhs), Sides::new(lhs, from_corollary)])
}

/// `2^n B_n(x/2)` by exact substitution `x → x/2`.
fn doubled_argument_bernoulli(ctx: &Ctx<'_>, n: usize) -> Result<MultiPoly> {
    let halved = ctx.b(Var::X, n)?.scale_var(Var::X, &rat(1, 2));
    Ok(scaled(&halved, &BigInt::from(2).pow(n as u32)))
}

fn check_sp_equivalence(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let rhs = binomial_sum(n, |k| Ok(at_zero(&ctx.b(Var::X, k)?, Var::X)), |j| ctx.e(Var::X, j))?;
    Ok(vec![Sides::new(doubled_argument_bernoulli(ctx, n)?, rhs)])
}

fn check_prop_identity(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
    let prev_e = match n.checked_sub(1) {
        Some(k) => ctx.e(Var::X, k)?,
        None => MultiPoly::zero(),
    };
    let lhs = ctx.b(Var::X, n)? - prev_e.scale(&rat(n as i64, 2));
    let target = doubled_argument_bernoulli(ctx, n)?;
    let q11 = ctx.q(n)?.eval(&[(Var::M, int(1)), (Var::L, int(1))]);
    Ok(vec![
        Sides::new(lhs.clone(), target.clone()),
        Sides::new(q11.clone(), target),
        Sides::new(q11, lhs),
    ])
}

/// Checkers in a fixed order. Entries can be swapped out, which is how the
/// mutation tests confirm that a wrong identity is caught.
#[derive(Clone)]
pub struct Registry {
    entries: Vec<(IdentityId, Checker)>,
}

impl Registry {
    pub fn standard() -> Self {
        use IdentityId::*;
        let checker = |id: IdentityId| -> Checker {
            match id {
                AppellBinomial => check_appell_binomial,
                MeanValueB => check_mean_value_b,
                MeanValueE => check_mean_value_e,
                DerivRecursion => check_deriv_recursion,
                OrderZero => check_order_zero,
                OrderAdditionB => check_order_addition_b,
                TranslationB => check_translation_b,
                DifferenceB => check_difference_b,
                OrderAdditionE => check_order_addition_e,
                TranslationE => check_translation_e,
                DifferenceE => check_difference_e,
                ExpectReduceB => check_expect_reduce_b,
                ExpectReduceE => check_expect_reduce_e,
                MixedConv => check_mixed_conv,
                MixedBinomial => check_mixed_binomial,
                MixedTwoExpansions => check_mixed_two_expansions,
                MixedDifference => check_mixed_difference,
                MixedAverage => check_mixed_average,
                LemmaDecomposition => check_lemma_decomposition,
                MainTheorem => check_main_theorem,
                Corollary1 => check_corollary_1,
                Corollary2 => check_corollary_2,
                Cheon => check_cheon,
                SpEquivalence => check_sp_equivalence,
                PropIdentity => check_prop_identity,
            }
        };
        Registry { entries: IdentityId::ALL.iter().map(|&id| (id, checker(id))).collect() }
    }

    pub fn ids(&self) -> impl Iterator<Item = IdentityId> + '_ {
        self.entries.iter().map(|(id, _)| *id)
    }

    pub fn replace(&mut self, id: IdentityId, checker: Checker) {
        for entry in &mut self.entries {
            if entry.0 == id {
                entry.1 = checker;
            }
        }
    }

    fn checker(&self, id: IdentityId) -> Checker {
        self.entries
            .iter()
            .find(|(e, _)| *e == id)
            .map(|(_, c)| *c)
            .expect("registry covers every identity")
    }

    pub fn sides(&self, catalog: &Catalog, id: IdentityId, n: usize) -> Result<Vec<Sides>> {
        (self.checker(id))(&Ctx::new(catalog), n)
    }

    pub fn verify(&self, catalog: &Catalog, id: IdentityId, n_max: usize) -> Result<IdentityReport> {
        require_degree(catalog, n_max + id.headroom())?;
        let checker = self.checker(id);
        run(id, n_max, |n| checker(&Ctx::new(catalog), n))
    }

    /// Runs every entry (in parallel) and returns reports in registry order.
    pub fn verify_all(&self, catalog: &Catalog, n_max: usize) -> Result<Vec<IdentityReport>> {
        let need = self.ids().map(|id| n_max + id.headroom()).max().unwrap_or(n_max);
        require_degree(catalog, need)?;
        self.entries.par_iter().map(|&(id, _)| self.verify(catalog, id, n_max)).collect()
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::standard()
    }
}

fn require_degree(catalog: &Catalog, need: usize) -> Result<()> {
    match catalog.max_degree() {
        Some(cap) if need > cap => Err(AppellError::OutOfRange { requested: need, available: cap }),
        _ => Ok(()),
    }
}

fn run(id: IdentityId, n_max: usize, mut parts: impl FnMut(usize) -> Result<Vec<Sides>>) -> Result<IdentityReport> {
    let start = Instant::now();
    let mut residuals = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let polynomial = parts(n)?
            .iter()
            .map(Sides::residual)
            .find(|r| !r.is_zero())
            .unwrap_or_default();
        residuals.push(Residual { n, polynomial });
    }
    let status = if residuals.iter().all(|r| r.polynomial.is_zero()) { Status::Pass } else { Status::Fail };
    Ok(IdentityReport { identity: id, n_range: (0, n_max), status, residuals, elapsed: start.elapsed() })
}

/// Shared catalog capped at `APPELL_NMAX`.
pub fn default_catalog() -> Result<&'static Catalog> {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    if let Some(c) = CATALOG.get() {
        return Ok(c);
    }
    let built = Catalog::from_env()?;
    Ok(CATALOG.get_or_init(|| built))
}

pub fn verify(id: IdentityId, n_max: usize) -> Result<IdentityReport> {
    Registry::standard().verify(default_catalog()?, id, n_max)
}

pub fn verify_all(n_max: usize) -> Result<Vec<IdentityReport>> {
    Registry::standard().verify_all(default_catalog()?, n_max)
}

/// Applies the uniform (resp. symmetric-Bernoulli) expectation `shift_count`
/// times and compares with the order lowered by `shift_count`.
pub fn verify_expectation_in(
    catalog: &Catalog,
    id: IdentityId,
    n_max: usize,
    shift_count: usize,
) -> Result<IdentityReport> {
    if !id.supports_shift_count() {
        return Err(AppellError::Precondition(format!("{id} is not an expectation identity")));
    }
    if shift_count == 0 {
        return Err(AppellError::Precondition("shift_count must be at least 1".into()));
    }
    require_degree(catalog, n_max)?;
    let ctx = Ctx::new(catalog);
    run(id, n_max, |n| {
        let sides = match id {
            IdentityId::MeanValueB => mean_value_b(&ctx, n, shift_count)?,
            IdentityId::MeanValueE => mean_value_e(&ctx, n, shift_count)?,
            IdentityId::ExpectReduceB => expect_reduce_b(&ctx, n, shift_count)?,
            IdentityId::ExpectReduceE => expect_reduce_e(&ctx, n, shift_count)?,
            _ => unreachable!("filtered above"),
        };
        Ok(vec![sides])
    })
}

pub fn verify_expectation(id: IdentityId, n_max: usize, shift_count: usize) -> Result<IdentityReport> {
    verify_expectation_in(default_catalog()?, id, n_max, shift_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Catalog {
        Catalog::with_max_degree(13)
    }

    #[test]
    fn names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert_eq!(
            "no-such-name".parse::<IdentityId>().unwrap_err(),
            AppellError::UnknownIdentity("no-such-name".into())
        );
        assert_eq!(Registry::standard().ids().count(), IdentityId::ALL.len());
    }

    #[test]
    fn difference_b_passes() {
        let r = Registry::standard().verify(&catalog(), IdentityId::DifferenceB, 8).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.residuals.len(), 9);
        assert!(r.residuals.iter().all(|res| res.polynomial.is_zero()));
    }

    #[test]
    fn main_theorem_degree_zero() {
        let c = catalog();
        let sides = Registry::standard().sides(&c, IdentityId::MainTheorem, 0).unwrap();
        assert_eq!(sides[0].lhs, MultiPoly::one());
        assert_eq!(sides[0].rhs, MultiPoly::one());
    }

    #[test]
    fn cheon_degree_two() {
        let c = catalog();
        let sides = Registry::standard().sides(&c, IdentityId::Cheon, 2).unwrap();
        assert_eq!(sides[0].rhs, "y^2 - y + 1/6".parse().unwrap());
        assert!(sides[0].residual().is_zero());
    }

    #[test]
    fn degree_zero_suite() {
        let reports = Registry::standard().verify_all(&catalog(), 0).unwrap();
        assert_eq!(reports.len(), IdentityId::ALL.len());
        assert!(reports.iter().all(IdentityReport::passed));
    }

    #[test]
    fn reports_keep_registry_order() {
        let reports = Registry::standard().verify_all(&catalog(), 3).unwrap();
        let order: Vec<_> = reports.iter().map(|r| r.identity).collect();
        assert_eq!(order, IdentityId::ALL.to_vec());
    }

    #[test]
    fn wrong_sign_is_caught() {
        fn tampered(ctx: &Ctx<'_>, n: usize) -> Result<Vec<Sides>> {
            // E(x+1) - E(x) in place of E(x+1) + E(x).
            let em = ctx.ge(Var::M, Var::X, n)?;
            let lhs = em.shift_by(Var::X, &int(1)) - &em;
            Ok(vec![Sides::new(lhs, dec(&em, Var::M).scale(&int(2)))])
        }
        let mut reg = Registry::standard();
        reg.replace(IdentityId::DifferenceE, tampered);
        let reports = reg.verify_all(&catalog(), 4).unwrap();
        for r in &reports {
            assert_eq!(r.passed(), r.identity != IdentityId::DifferenceE, "{r}");
        }
        let bad = reports.iter().find(|r| r.identity == IdentityId::DifferenceE).unwrap();
        assert_eq!(bad.failures().count(), 5);
        // n = 0: (1 - 1) - 2 = -2.
        assert_eq!(bad.residuals[0].polynomial, MultiPoly::constant(int(-2)));
    }

    #[test]
    fn out_of_range_is_an_error() {
        let c = Catalog::with_max_degree(5);
        let reg = Registry::standard();
        assert!(reg.verify(&c, IdentityId::Cheon, 5).is_ok());
        assert_eq!(
            reg.verify(&c, IdentityId::Corollary2, 5).unwrap_err(),
            AppellError::OutOfRange { requested: 6, available: 5 }
        );
        assert!(reg.verify_all(&c, 5).is_err());
    }

    #[test]
    fn expectation_shift_counts() {
        let c = catalog();
        for id in [IdentityId::ExpectReduceB, IdentityId::ExpectReduceE, IdentityId::MeanValueB, IdentityId::MeanValueE] {
            for s in 1..=3 {
                let r = verify_expectation_in(&c, id, 6, s).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
        assert!(verify_expectation_in(&c, IdentityId::ExpectReduceB, 6, 0).is_err());
        assert!(verify_expectation_in(&c, IdentityId::Cheon, 6, 1).is_err());
    }

    #[test]
    fn expectation_at_order_zero_is_a_misuse() {
        // x^n has order 0; averaging it over θ gives E[(x+θ)^n], not x^n.
        let c = catalog();
        let ctx = Ctx::new(&c);
        for n in 1..=6 {
            let xn = ctx.gb(Var::M, Var::X, n).unwrap().eval(&[(Var::M, int(0))]);
            assert!(!(expect_uniform_shift(&xn, Var::X) - &xn).is_zero());
        }
    }

    #[test]
    fn json_shape() {
        let r = Registry::standard().verify(&catalog(), IdentityId::Cheon, 2).unwrap();
        let v = r.to_json();
        assert_eq!(v["identity"], "cheon");
        assert_eq!(v["status"], "pass");
        assert_eq!(v["n_range"], serde_json::json!([0, 2]));
        assert_eq!(v["residuals"][1], serde_json::json!({"n": 1, "polynomial": "0"}));
        assert!(v["elapsed_ms"].as_f64().unwrap() >= 0.0);
    }
}
