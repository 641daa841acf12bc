//! Appell families built from a reciprocal-MGF series, and the exact
//! expectation operators for uniform and symmetric-Bernoulli shifts.
//!
//! A family is fixed by its base values `c_k = Q_k(0)`, read off as
//! `k! [u^k]` of `1/E(e^{uξ})`. Members follow from the binomial form
//! `Q_n(t) = Σ C(n,k) c_k t^{n-k}` and are memoized on first request.

use crate::error::{AppellError, Result};
use crate::poly::{Monomial, MultiPoly, Var};
use crate::rational::{binomial_row, Rational};
use crate::series::PowerSeries;
use num_traits::One;
use std::fmt;
use std::sync::OnceLock;

pub struct AppellFamily {
    label: String,
    arg: Var,
    base: Vec<MultiPoly>,
    members: Vec<OnceLock<MultiPoly>>,
}

impl AppellFamily {
    pub fn from_series(recip_mgf: &PowerSeries, arg: Var, label: impl Into<String>) -> Result<Self> {
        if recip_mgf.coeff(0) != &MultiPoly::one() {
            return Err(AppellError::Precondition(format!(
                "reciprocal MGF must start at 1, found {}",
                recip_mgf.coeff(0)
            )));
        }
        let base = (0..=recip_mgf.order()).map(|k| recip_mgf.egf_coeff(k)).collect();
        Self::from_base(base, arg, label)
    }

    /// Builds directly from `c_0, c_1, …`. `c_0` must be 1 and no `c_k` may
    /// mention the argument variable.
    pub fn from_base(base: Vec<MultiPoly>, arg: Var, label: impl Into<String>) -> Result<Self> {
        if !matches!(arg, Var::X | Var::Y) {
            return Err(AppellError::Precondition(format!(
                "argument variable must be x or y, not {arg}"
            )));
        }
        if base.first() != Some(&MultiPoly::one()) {
            return Err(AppellError::Precondition("Q_0(0) must equal 1".into()));
        }
        if base.iter().any(|c| c.contains(arg)) {
            return Err(AppellError::SelfReferentialShift(arg));
        }
        let members = (0..base.len()).map(|_| OnceLock::new()).collect();
        Ok(AppellFamily { label: label.into(), arg, base, members })
    }

    /// `Q_n(t) = t^n`, the family of `ξ ≡ 0`.
    pub fn trivial(arg: Var, max_degree: usize) -> Result<Self> {
        Self::from_series(&PowerSeries::one(max_degree), arg, "trivial")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn arg(&self) -> Var {
        self.arg
    }

    pub fn max_degree(&self) -> usize {
        self.base.len() - 1
    }

    fn check_range(&self, n: usize) -> Result<()> {
        if n > self.max_degree() {
            return Err(AppellError::OutOfRange { requested: n, available: self.max_degree() });
        }
        Ok(())
    }

    /// `Q_k(0)`.
    pub fn base(&self, k: usize) -> Result<&MultiPoly> {
        self.check_range(k)?;
        Ok(&self.base[k])
    }

    pub fn member(&self, n: usize) -> Result<&MultiPoly> {
        self.check_range(n)?;
        Ok(self.members[n].get_or_init(|| self.build_member(n)))
    }

    fn build_member(&self, n: usize) -> MultiPoly {
        let row = binomial_row(n);
        let mut out = MultiPoly::zero();
        for (k, c) in self.base[..=n].iter().enumerate() {
            let power = MultiPoly::term(Rational::one(), Monomial::var(self.arg, (n - k) as u32));
            out += (c * &power).scale_int(&row[k]);
        }
        out
    }
}

impl fmt::Debug for AppellFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AppellFamily")
            .field("label", &self.label)
            .field("arg", &self.arg)
            .field("max_degree", &self.max_degree())
            .finish()
    }
}

/// `E[p(t + θ)]` for `θ ~ U[0,1]`, i.e. `∫₀¹ p(t + s) ds = P(t+1) - P(t)` with
/// `P` an antiderivative in `t`.
pub fn expect_uniform_shift(p: &MultiPoly, arg: Var) -> MultiPoly {
    let anti = p.antiderivative(arg);
    anti.shift_by(arg, &Rational::one()) - &anti
}

/// `E[p(t + η)]` for `η ~ Ber(1/2)`: `(p(t) + p(t+1)) / 2`.
pub fn expect_bernoulli_shift(p: &MultiPoly, arg: Var) -> MultiPoly {
    let half = Rational::new(1.into(), 2.into());
    (p.shift_by(arg, &Rational::one()) + p).scale(&half)
}

/// `Σ C(n,k) f_k(s) g_{n-k}(t)`, the degree-`n` member of the family of
/// `ξ₁ + ξ₂` evaluated at `s + t`.
pub fn convolve(f: &AppellFamily, g: &AppellFamily, n: usize) -> Result<MultiPoly> {
    if f.arg() == g.arg() {
        return Err(AppellError::SharedArgument(f.arg()));
    }
    let row = binomial_row(n);
    let mut out = MultiPoly::zero();
    for k in 0..=n {
        out += (f.member(k)? * g.member(n - k)?).scale_int(&row[k]);
    }
    Ok(out)
}
