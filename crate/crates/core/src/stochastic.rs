//! Monte-Carlo check of the expectation-reduction identities for integer
//! orders.
//!
//! For `θ_i ~ U[0,1]` the sample mean of `B_n^{(m)}(x0 + θ_1 + … + θ_l)`
//! should match the exact `B_n^{(m-l)}(x0)`; likewise with `η_j ~ Ber(1/2)`
//! and the Euler family. The reference value comes from the exact engine
//! and the sample is drawn from ChaCha8 seeded with `seed_from_u64(seed)`,
//! so a configuration always reproduces the same bits.

use crate::error::{AppellError, Result};
use crate::families::{gen_bernoulli, gen_euler};
use crate::poly::{MultiPoly, Var};
use crate::rational::{to_f64, Rational};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use std::fmt;

/// `|z|` above this fails a check.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum McFamily {
    Bernoulli,
    Euler,
}

impl fmt::Display for McFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            McFamily::Bernoulli => "bernoulli",
            McFamily::Euler => "euler",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub n: usize,
    pub m_int: u32,
    /// Number of shifts `l`, at most `m_int`.
    pub shift_count: u32,
    #[serde(serialize_with = "as_text")]
    pub x0: Rational,
}

fn as_text<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(AppellError::Precondition("samples must be positive".into()));
        }
        if self.shift_count > self.m_int {
            return Err(AppellError::Precondition(format!(
                "shift count l = {} exceeds order m = {}",
                self.shift_count, self.m_int
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McResult {
    pub family: McFamily,
    pub config: McConfig,
    pub estimate: f64,
    pub std_error: f64,
    #[serde(serialize_with = "as_text")]
    pub exact: Rational,
    /// Non-finite (serialized as `null`) when the sample is degenerate and
    /// misses the reference.
    pub z_score: f64,
}

impl McResult {
    /// z-score of the same sample against another reference value.
    pub fn z_against(&self, reference: &Rational) -> f64 {
        z_score(self.estimate, self.std_error, to_f64(reference))
    }

    pub fn within_threshold(&self) -> bool {
        self.z_score.abs() <= Z_THRESHOLD
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("result serializes")
    }
}

fn z_score(estimate: f64, std_error: f64, reference: f64) -> f64 {
    let diff = estimate - reference;
    if std_error > 0.0 {
        return diff / std_error;
    }
    // Constant sample: only rounding separates estimate and reference.
    if diff.abs() <= 1e-9 * reference.abs().max(1.0) {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

/// Dense coefficients in one variable, for repeated evaluation.
#[derive(Clone, Debug)]
struct Horner {
    coeffs: Vec<f64>,
}

impl Horner {
    fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

/// Collapses `p` to a dense polynomial in `main` with every other variable
/// taken from `bindings`.
fn horner_in(p: &MultiPoly, main: Var, bindings: &[(Var, f64)]) -> Result<Horner> {
    if let Some(v) = Var::ALL
        .into_iter()
        .find(|&v| v != main && p.contains(v) && !bindings.iter().any(|(b, _)| *b == v))
    {
        return Err(AppellError::Unbound(v));
    }
    let degree = p.degree_in(main).unwrap_or(0) as usize;
    let mut coeffs = vec![0.0; degree + 1];
    for (mono, c) in p.terms() {
        let mut value = to_f64(c);
        for v in Var::ALL {
            let e = mono.exp(v);
            if v == main || e == 0 {
                continue;
            }
            let (_, b) = bindings.iter().find(|(bv, _)| *bv == v).expect("checked above");
            value *= b.powi(e as i32);
        }
        coeffs[mono.exp(main) as usize] += value;
    }
    Ok(Horner { coeffs })
}

/// Floating-point evaluation; every variable of `p` must be bound.
pub fn float_eval(p: &MultiPoly, bindings: &[(Var, f64)]) -> Result<f64> {
    let main = Var::ALL.into_iter().find(|&v| p.contains(v));
    let Some(main) = main else {
        return Ok(to_f64(&p.constant_term()));
    };
    let (_, t) = bindings.iter().find(|(v, _)| *v == main).ok_or(AppellError::Unbound(main))?;
    Ok(horner_in(p, main, bindings)?.eval(*t))
}

const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * TWO_POW_MINUS_53
}

fn fair_bit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 63) as f64
}

fn run(family: McFamily, cfg: &McConfig) -> Result<McResult> {
    cfg.validate()?;
    let symbolic = match family {
        McFamily::Bernoulli => gen_bernoulli(cfg.n),
        McFamily::Euler => gen_euler(cfg.n),
    };
    let m = Rational::from_integer(cfg.m_int.into());
    let reduced = Rational::from_integer((cfg.m_int - cfg.shift_count).into());
    let exact = symbolic.eval_constant(&[(Var::M, reduced), (Var::X, cfg.x0.clone())])?;
    let poly = horner_in(&symbolic.eval(&[(Var::M, m)]), Var::X, &[])?;
    let draw: fn(&mut ChaCha8Rng) -> f64 = match family {
        McFamily::Bernoulli => uniform,
        McFamily::Euler => fair_bit,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let x0 = to_f64(&cfg.x0);
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for i in 0..cfg.samples {
        let shift: f64 = (0..cfg.shift_count).map(|_| draw(&mut rng)).sum();
        let value = poly.eval(x0 + shift);
        let delta = value - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (value - mean);
    }
    let std_error = if cfg.samples >= 2 {
        (m2 / (cfg.samples - 1) as f64 / cfg.samples as f64).sqrt()
    } else {
        0.0
    };
    let z = z_score(mean, std_error, to_f64(&exact));
    Ok(McResult { family, config: cfg.clone(), estimate: mean, std_error, exact, z_score: z })
}

/// Samples `B_n^{(m)}(x0 + Σθ_i)` against `B_n^{(m-l)}(x0)`.
pub fn mc_check_bernoulli(cfg: &McConfig) -> Result<McResult> {
    run(McFamily::Bernoulli, cfg)
}

/// Samples `E_n^{(m)}(x0 + Ση_j)` against `E_n^{(m-l)}(x0)`.
pub fn mc_check_euler(cfg: &McConfig) -> Result<McResult> {
    run(McFamily::Euler, cfg)
}

pub fn mc_check(family: McFamily, cfg: &McConfig) -> Result<McResult> {
    run(family, cfg)
}
