//! Sparse multivariate polynomials over ℚ in the fixed indeterminates
//! `x, y, m, l`.
//!
//! The variable order is global and total: `x > y > m > l`. Exponent vectors
//! are compared graded-lexicographically under that order, and the text
//! rendering lists terms from the largest monomial down, so
//! `x^2 - x + 1/6` and `x - 1/2*m - 1/2*l` are canonical.

use crate::error::{AppellError, Result};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

/// One of the four indeterminates. Declaration order is the global order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    M,
    L,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::M, Var::L];

    #[inline]
    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::M => "m",
            Var::L => "l",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = AppellError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Var::X),
            "y" => Ok(Var::Y),
            "m" => Ok(Var::M),
            "l" => Ok(Var::L),
            _ => Err(AppellError::Parse(format!("unknown variable `{s}`"))),
        }
    }
}

/// Exponent vector indexed by [`Var`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial([u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 4]);

    pub fn new(exps: [u32; 4]) -> Self {
        Monomial(exps)
    }

    pub fn var(v: Var, e: u32) -> Self {
        let mut exps = [0; 4];
        exps[v.index()] = e;
        Monomial(exps)
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, e: u32) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0 == [0; 4]
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// A polynomial in ℚ[x, y, m, l]. No stored coefficient is ever zero, so
/// structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Rational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: Rational, mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        MultiPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = MultiPoly::zero();
        for (mono, c) in iter {
            p.add_term(mono, c);
        }
        p
    }

    fn add_term(&mut self, mono: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
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

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &Monomial) -> Rational {
        self.terms.get(mono).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::ONE)
    }

    /// `Some(c)` when the polynomial is the constant `c`.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn contains(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Degree in `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Highest total degree in the listed variables, ignoring the others.
    pub fn degree_in_vars(&self, vars: &[Var]) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| vars.iter().map(|&v| m.exp(v)).sum())
            .max()
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient_in(&self, v: Var, k: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.exp(v) == k)
                .map(|(m, c)| (m.with_exp(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the highest power of `v`.
    pub fn leading_coefficient_in(&self, v: Var) -> MultiPoly {
        match self.degree_in(v) {
            Some(d) => self.coefficient_in(v, d),
            None => MultiPoly::zero(),
        }
    }

    pub fn scale(&self, k: &Rational) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> MultiPoly {
        self.scale(&Rational::from_integer(k.clone()))
    }

    fn mul_term(&self, mono: &Monomial, k: &Rational) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c * k)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `v` by `v + delta` and expands. `delta` must not mention `v`.
    pub fn shift(&self, v: Var, delta: &MultiPoly) -> Result<MultiPoly> {
        if delta.contains(v) {
            return Err(AppellError::SelfReferentialShift(v));
        }
        if delta.is_zero() || !self.contains(v) {
            return Ok(self.clone());
        }
        let top = self.degree_in(v).unwrap_or(0) as usize;
        let base = MultiPoly::var(v) + delta.clone();
        let mut powers = Vec::with_capacity(top + 1);
        powers.push(MultiPoly::one());
        for k in 1..=top {
            let next = &powers[k - 1] * &base;
            powers.push(next);
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            out += powers[e].mul_term(&m.with_exp(v, 0), c);
        }
        Ok(out)
    }

    /// Shift by a rational constant.
    pub fn shift_by(&self, v: Var, delta: &Rational) -> MultiPoly {
        self.shift(v, &MultiPoly::constant(delta.clone()))
            .expect("constant shift never mentions the variable")
    }

    /// Substitutes the bound variables and keeps the rest symbolic.
    pub fn eval(&self, bindings: &[(Var, Rational)]) -> MultiPoly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut mono = *m;
            let mut coeff = c.clone();
            for (v, value) in bindings {
                let e = mono.exp(*v);
                if e > 0 {
                    coeff *= num_traits::pow(value.clone(), e as usize);
                    mono = mono.with_exp(*v, 0);
                }
            }
            out.add_term(mono, coeff);
        }
        out
    }

    /// Full evaluation; fails if any variable of the polynomial is unbound.
    pub fn eval_constant(&self, bindings: &[(Var, Rational)]) -> Result<Rational> {
        let p = self.eval(bindings);
        for v in Var::ALL {
            if p.contains(v) {
                return Err(AppellError::Unbound(v));
            }
        }
        Ok(p.constant_term())
    }

    /// `p(v → k·v)`.
    pub fn scale_var(&self, v: Var, k: &Rational) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            (*m, c * num_traits::pow(k.clone(), m.exp(v) as usize))
        }))
    }

    /// Renames `from` to `to`; `to` must be absent.
    pub fn rename(&self, from: Var, to: Var) -> Result<MultiPoly> {
        if from == to {
            return Ok(self.clone());
        }
        if self.contains(to) {
            return Err(AppellError::SelfReferentialShift(to));
        }
        Ok(MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            (m.with_exp(from, 0).with_exp(to, m.exp(from)), c.clone())
        })))
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter(|(m, _)| m.exp(v) > 0).map(|(m, c)| {
            let e = m.exp(v);
            (m.with_exp(v, e - 1), c * Rational::from_integer(BigInt::from(e)))
        }))
    }

    /// Antiderivative in `v` with zero constant of integration.
    pub fn antiderivative(&self, v: Var) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(v) + 1;
            (m.with_exp(v, e), c / Rational::from_integer(BigInt::from(e)))
        }))
    }

    /// `∫₀¹ p dv`.
    pub fn integrate_unit(&self, v: Var) -> MultiPoly {
        // At v = 1 each term of the antiderivative keeps its coefficient; at v = 0
        // everything with a positive power of v vanishes, and that is every term.
        MultiPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let e = m.exp(v) + 1;
            (m.with_exp(v, 0), c / Rational::from_integer(BigInt::from(e)))
        }))
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl From<Var> for MultiPoly {
    fn from(v: Var) -> Self {
        MultiPoly::var(v)
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign for MultiPoly {
    fn add_assign(&mut self, rhs: MultiPoly) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            *self += &lhs;
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl SubAssign for MultiPoly {
    fn sub_assign(&mut self, rhs: MultiPoly) {
        *self -= &rhs;
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(mut self) -> MultiPoly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(mut self, rhs: MultiPoly) -> MultiPoly {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(mut self, rhs: &MultiPoly) -> MultiPoly {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let (small, big) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = MultiPoly::zero();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &big.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul<MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Mul<&MultiPoly> for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        &self * rhs
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = AppellError;

    /// Accepts the rendered form and, more loosely, any sum of products of
    /// rationals and `var^k` factors.
    fn from_str(s: &str) -> Result<Self> {
        Parser { src: s.as_bytes(), pos: 0 }.parse()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> AppellError {
        AppellError::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("validated digits"))
    }

    fn parse(mut self) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero();
        let mut sign = Rational::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.err("empty input")),
            _ => {}
        }
        loop {
            let (mono, c) = self.term()?;
            out.add_term(mono, c * &sign);
            match self.peek() {
                None => return Ok(out),
                Some(b'+') => sign = Rational::one(),
                Some(b'-') => sign = -Rational::one(),
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut mono = Monomial::ONE;
        let mut c = Rational::one();
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_digit() => {
                    let num = self.digits()?;
                    let den = if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let d = self.digits()?;
                        if d.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        d
                    } else {
                        BigInt::one()
                    };
                    c *= Rational::new(num, den);
                }
                Some(b) if b.is_ascii_alphabetic() => {
                    let name = (b as char).to_string();
                    let v: Var = name.parse()?;
                    self.pos += 1;
                    let e = if self.peek() == Some(b'^') {
                        self.pos += 1;
                        u32::try_from(self.digits()?).map_err(|_| self.err("exponent too large"))?
                    } else {
                        1
                    };
                    mono = mono.mul(&Monomial::var(v, e));
                }
                _ => return Err(self.err("expected a number or variable")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((mono, c));
            }
        }
    }
}
