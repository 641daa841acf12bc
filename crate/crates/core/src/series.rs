//! Truncated formal power series in a formal variable `u`, with
//! [`MultiPoly`] coefficients.

use crate::error::{AppellError, Result};
use crate::poly::{MultiPoly, Var};
use crate::rational::{factorial, Rational};
use num_bigint::BigInt;
use num_traits::One;
use std::ops::Mul;

/// `coeffs[k]` is the coefficient of `u^k`; there are always `order + 1` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<MultiPoly>,
}

impl PowerSeries {
    /// Pads or truncates `coeffs` to `order + 1` entries.
    pub fn new(mut coeffs: Vec<MultiPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MultiPoly::zero());
        PowerSeries { coeffs }
    }

    pub fn from_rationals<I: IntoIterator<Item = Rational>>(iter: I, order: usize) -> Self {
        Self::new(iter.into_iter().take(order + 1).map(MultiPoly::constant).collect(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![MultiPoly::one()], order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    /// `e^{u·v}`: coefficients `v^k / k!`.
    pub fn exp_linear(v: Var, order: usize) -> Self {
        let coeffs = (0..=order)
            .map(|k| {
                let c = Rational::new(BigInt::one(), factorial(k));
                MultiPoly::var(v).pow(k as u32).scale(&c)
            })
            .collect();
        PowerSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    fn require_unit_constant(&self, op: &str) -> Result<()> {
        if self.coeffs[0] != MultiPoly::one() {
            return Err(AppellError::Precondition(format!(
                "{op} needs constant term 1, found {}",
                self.coeffs[0]
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect();
        PowerSeries { coeffs }
    }

    pub fn scale(&self, by: &MultiPoly) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c * by).collect() }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = MultiPoly::zero();
                for j in 0..=k {
                    if self.coeffs[j].is_zero() || other.coeffs[k - j].is_zero() {
                        continue;
                    }
                    acc += &self.coeffs[j] * &other.coeffs[k - j];
                }
                acc
            })
            .collect();
        PowerSeries { coeffs }
    }

    /// `1/s` for `s(0) = 1`: `r_k = -Σ_{j=1..k} s_j r_{k-j}`.
    pub fn reciprocal(&self) -> Result<Self> {
        self.require_unit_constant("reciprocal")?;
        let n = self.order();
        let mut r: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        r.push(MultiPoly::one());
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc -= &self.coeffs[j] * &r[k - j];
                }
            }
            r.push(acc);
        }
        Ok(PowerSeries { coeffs: r })
    }

    /// `log s` for `s(0) = 1`, from `s·g' = s'`:
    /// `g_k = s_k - (1/k) Σ_{j=1..k-1} j g_j s_{k-j}`.
    pub fn log(&self) -> Result<Self> {
        self.require_unit_constant("log")?;
        let n = self.order();
        let mut g: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        g.push(MultiPoly::zero());
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..k {
                if g[j].is_zero() || self.coeffs[k - j].is_zero() {
                    continue;
                }
                acc += (&g[j] * &self.coeffs[k - j]).scale(&Rational::from_integer(BigInt::from(j)));
            }
            let inv_k = Rational::new(BigInt::one(), BigInt::from(k));
            g.push(&self.coeffs[k] - &acc.scale(&inv_k));
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// `exp g` for `g(0) = 0`, from `f' = g'·f`:
    /// `f_k = (1/k) Σ_{j=1..k} j g_j f_{k-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(AppellError::Precondition(format!(
                "exp needs constant term 0, found {}",
                self.coeffs[0]
            )));
        }
        let n = self.order();
        let mut f: Vec<MultiPoly> = Vec::with_capacity(n + 1);
        f.push(MultiPoly::one());
        for k in 1..=n {
            let mut acc = MultiPoly::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                acc += (&self.coeffs[j] * &f[k - j]).scale(&Rational::from_integer(BigInt::from(j)));
            }
            f.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(k))));
        }
        Ok(PowerSeries { coeffs: f })
    }

    /// `s^v = exp(v · log s)` with `v` left symbolic. The coefficient of
    /// `u^k` has degree at most `k` in `v`.
    pub fn pow_symbolic(&self, exponent: Var) -> Result<Self> {
        self.pow_poly(&MultiPoly::var(exponent))
    }

    /// `s^e = exp(e · log s)` for a polynomial exponent `e`.
    pub fn pow_poly(&self, exponent: &MultiPoly) -> Result<Self> {
        self.log()?.scale(exponent).exp()
    }

    /// `k! · [u^k]`, the EGF coefficient.
    pub fn egf_coeff(&self, k: usize) -> MultiPoly {
        self.coeffs[k].scale(&Rational::from_integer(factorial(k)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(MultiPoly::is_zero)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}

/// MGF of `θ ~ U[0,1]`: `(e^u - 1)/u = Σ u^k/(k+1)!`.
pub fn uniform_mgf(order: usize) -> PowerSeries {
    PowerSeries::from_rationals(
        (0..=order).map(|k| Rational::new(BigInt::one(), factorial(k + 1))),
        order,
    )
}

/// MGF of `η ~ Ber(1/2)`: `(1 + e^u)/2 = 1 + Σ_{k≥1} u^k/(2·k!)`.
pub fn symmetric_bernoulli_mgf(order: usize) -> PowerSeries {
    PowerSeries::from_rationals(
        (0..=order).map(|k| {
            if k == 0 {
                Rational::one()
            } else {
                Rational::new(BigInt::one(), BigInt::from(2) * factorial(k))
            }
        }),
        order,
    )
}

/// `u/(e^u - 1)`.
pub fn bernoulli_prefactor(order: usize) -> PowerSeries {
    uniform_mgf(order).reciprocal().expect("uniform MGF starts at 1")
}

/// `2/(e^u + 1)`.
pub fn euler_prefactor(order: usize) -> PowerSeries {
    symmetric_bernoulli_mgf(order)
        .reciprocal()
        .expect("Bernoulli MGF starts at 1")
}
