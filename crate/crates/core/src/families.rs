//! The concrete families: classical Bernoulli and Euler polynomials, their
//! order-`m` generalizations with the order kept symbolic, and the mixed
//! family with prefactor `(u/(e^u-1))^m (2/(e^u+1))^l`.

use crate::appell::AppellFamily;
use crate::error::{AppellError, Result};
use crate::poly::{MultiPoly, Var};
use crate::rational::Rational;
use crate::series::{bernoulli_prefactor, euler_prefactor, PowerSeries};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

/// Truncation used when `APPELL_NMAX` is unset.
pub const DEFAULT_NMAX: usize = 24;

/// Prefactor shape, with the indeterminates holding the orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Shape {
    Trivial,
    Bernoulli,
    Euler,
    GenBernoulli(Var),
    GenEuler(Var),
    /// Bernoulli order variable, then Euler order variable.
    Mixed(Var, Var),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilyKey {
    pub shape: Shape,
    pub arg: Var,
}

impl FamilyKey {
    pub fn new(shape: Shape, arg: Var) -> Result<Self> {
        let orders = match shape {
            Shape::GenBernoulli(v) | Shape::GenEuler(v) => vec![v],
            Shape::Mixed(a, b) if a == b => {
                return Err(AppellError::Precondition(format!(
                    "mixed family needs two distinct order variables, got {a} twice"
                )));
            }
            Shape::Mixed(a, b) => vec![a, b],
            _ => vec![],
        };
        if let Some(v) = orders.iter().find(|v| !matches!(v, Var::M | Var::L)) {
            return Err(AppellError::Precondition(format!("order variable must be m or l, not {v}")));
        }
        if !matches!(arg, Var::X | Var::Y) {
            return Err(AppellError::Precondition(format!("argument must be x or y, not {arg}")));
        }
        Ok(FamilyKey { shape, arg })
    }

    /// The reciprocal-MGF series `1/E(e^{uξ})` truncated at `order`.
    pub fn series(&self, order: usize) -> PowerSeries {
        let pow = |s: PowerSeries, v: Var| s.pow_symbolic(v).expect("prefactors start at 1");
        match self.shape {
            Shape::Trivial => PowerSeries::one(order),
            Shape::Bernoulli => bernoulli_prefactor(order),
            Shape::Euler => euler_prefactor(order),
            Shape::GenBernoulli(v) => pow(bernoulli_prefactor(order), v),
            Shape::GenEuler(v) => pow(euler_prefactor(order), v),
            Shape::Mixed(a, b) => &pow(bernoulli_prefactor(order), a) * &pow(euler_prefactor(order), b),
        }
    }

    fn label(&self) -> String {
        match self.shape {
            Shape::Trivial => "trivial".into(),
            Shape::Bernoulli => "B".into(),
            Shape::Euler => "E".into(),
            Shape::GenBernoulli(v) => format!("B^({v})"),
            Shape::GenEuler(v) => format!("E^({v})"),
            Shape::Mixed(a, b) => format!("Q^(({a})+({b}))"),
        }
    }
}

/// Memo table of constructed families. A capped catalog rejects degrees
/// beyond its truncation; a growable one rebuilds a family when asked for
/// more than it holds.
pub struct Catalog {
    cap: Option<usize>,
    families: Mutex<HashMap<FamilyKey, Arc<AppellFamily>>>,
}

impl Catalog {
    pub fn with_max_degree(cap: usize) -> Self {
        Catalog { cap: Some(cap), families: Mutex::default() }
    }

    pub fn growable() -> Self {
        Catalog { cap: None, families: Mutex::default() }
    }

    /// Capped at `APPELL_NMAX` (default 24).
    pub fn from_env() -> Result<Self> {
        Ok(Self::with_max_degree(nmax_from_env()?))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.cap
    }

    pub fn family(&self, key: FamilyKey, need: usize) -> Result<Arc<AppellFamily>> {
        if let Some(cap) = self.cap {
            if need > cap {
                return Err(AppellError::OutOfRange { requested: need, available: cap });
            }
        }
        let existing = self.families.lock().expect("catalog lock").get(&key).cloned();
        let size = match (&existing, self.cap) {
            (Some(f), _) if f.max_degree() >= need => return Ok(f.clone()),
            (_, Some(cap)) => cap,
            (Some(f), None) => need.max(2 * f.max_degree()),
            (None, None) => need.max(DEFAULT_NMAX),
        };
        let built = Arc::new(AppellFamily::from_series(&key.series(size), key.arg, key.label())?);
        let mut table = self.families.lock().expect("catalog lock");
        let slot = table.entry(key).or_insert_with(|| built.clone());
        if slot.max_degree() < built.max_degree() {
            *slot = built;
        }
        Ok(slot.clone())
    }

    pub fn member(&self, key: FamilyKey, n: usize) -> Result<MultiPoly> {
        Ok(self.family(key, n)?.member(n)?.clone())
    }

    fn get(&self, shape: Shape, arg: Var, n: usize) -> Result<MultiPoly> {
        self.member(FamilyKey::new(shape, arg)?, n)
    }

    pub fn bernoulli(&self, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::Bernoulli, arg, n)
    }

    pub fn euler(&self, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::Euler, arg, n)
    }

    pub fn gen_bernoulli(&self, order: Var, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::GenBernoulli(order), arg, n)
    }

    pub fn gen_euler(&self, order: Var, arg: Var, n: usize) -> Result<MultiPoly> {
        self.get(Shape::GenEuler(order), arg, n)
    }

    /// `Q_n^{((m)+(l))}(x)`.
    pub fn mixed(&self, n: usize) -> Result<MultiPoly> {
        self.get(Shape::Mixed(Var::M, Var::L), Var::X, n)
    }
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Catalog").field("cap", &self.cap).finish_non_exhaustive()
    }
}

pub fn nmax_from_env() -> Result<usize> {
    match std::env::var("APPELL_NMAX") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| AppellError::Parse(format!("APPELL_NMAX=`{v}` is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_NMAX),
    }
}

fn global() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(Catalog::growable)
}

fn expect_member(r: Result<MultiPoly>) -> MultiPoly {
    r.expect("growable catalog with valid key")
}

/// `B_n(x)`.
pub fn bernoulli(n: usize) -> MultiPoly {
    expect_member(global().bernoulli(Var::X, n))
}

/// `E_n(x)`.
pub fn euler(n: usize) -> MultiPoly {
    expect_member(global().euler(Var::X, n))
}

/// `B_n^{(m)}(x)` with `m` symbolic.
pub fn gen_bernoulli(n: usize) -> MultiPoly {
    expect_member(global().gen_bernoulli(Var::M, Var::X, n))
}

/// `E_n^{(m)}(x)` with `m` symbolic.
pub fn gen_euler(n: usize) -> MultiPoly {
    gen_euler_in(Var::M, Var::X, n).expect("m and x are valid")
}

/// Generalized Euler polynomial with a chosen order and argument variable,
/// e.g. `E_n^{(l)}(y)`.
pub fn gen_euler_in(order: Var, arg: Var, n: usize) -> Result<MultiPoly> {
    global().gen_euler(order, arg, n)
}

/// `Q_n^{((m)+(l))}(x)`.
pub fn mixed_q(n: usize) -> MultiPoly {
    expect_member(global().mixed(n))
}

/// `B_k(0)`.
pub fn bernoulli_number(k: usize) -> Rational {
    bernoulli(k).constant_term()
}

/// `E_k(0)`.
pub fn euler_member_at_zero(k: usize) -> Rational {
    euler(k).constant_term()
}

/// Binds order variables; binding `x` or `y` here is a caller error.
pub fn specialize_order(p: &MultiPoly, bindings: &[(Var, Rational)]) -> Result<MultiPoly> {
    if let Some((v, _)) = bindings.iter().find(|(v, _)| !matches!(v, Var::M | Var::L)) {
        return Err(AppellError::Precondition(format!("{v} is not an order variable")));
    }
    Ok(p.eval(bindings))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Bernoulli,
    Euler,
    GenBernoulli,
    GenEuler,
    Mixed,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Bernoulli,
        FamilyKind::Euler,
        FamilyKind::GenBernoulli,
        FamilyKind::GenEuler,
        FamilyKind::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Bernoulli => "bernoulli",
            FamilyKind::Euler => "euler",
            FamilyKind::GenBernoulli => "gen-bernoulli",
            FamilyKind::GenEuler => "gen-euler",
            FamilyKind::Mixed => "mixed",
        }
    }

    /// Symbolic-order key with argument `x`.
    pub fn key(self) -> FamilyKey {
        let shape = match self {
            FamilyKind::Bernoulli => Shape::Bernoulli,
            FamilyKind::Euler => Shape::Euler,
            FamilyKind::GenBernoulli => Shape::GenBernoulli(Var::M),
            FamilyKind::GenEuler => Shape::GenEuler(Var::M),
            FamilyKind::Mixed => Shape::Mixed(Var::M, Var::L),
        };
        FamilyKey { shape, arg: Var::X }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = AppellError;

    fn from_str(s: &str) -> Result<Self> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AppellError::Parse(format!("unknown family `{s}`")))
    }
}

/// A family together with optional numeric orders; unbound orders stay symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyId {
    kind: FamilyKind,
    m: Option<Rational>,
    l: Option<Rational>,
}

impl FamilyId {
    pub fn new(kind: FamilyKind, m: Option<Rational>, l: Option<Rational>) -> Result<Self> {
        let allowed = match kind {
            FamilyKind::Bernoulli | FamilyKind::Euler => (false, false),
            FamilyKind::GenBernoulli | FamilyKind::GenEuler => (true, false),
            FamilyKind::Mixed => (true, true),
        };
        if m.is_some() && !allowed.0 {
            return Err(AppellError::Precondition(format!("{kind} takes no order m")));
        }
        if l.is_some() && !allowed.1 {
            return Err(AppellError::Precondition(format!("{kind} takes no order l")));
        }
        Ok(FamilyId { kind, m, l })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn bindings(&self) -> Vec<(Var, Rational)> {
        let mut out = Vec::new();
        if let Some(m) = &self.m {
            out.push((Var::M, m.clone()));
        }
        if let Some(l) = &self.l {
            out.push((Var::L, l.clone()));
        }
        out
    }

    pub fn member_in(&self, catalog: &Catalog, n: usize) -> Result<MultiPoly> {
        let p = catalog.member(self.kind.key(), n)?;
        specialize_order(&p, &self.bindings())
    }

    pub fn member(&self, n: usize) -> MultiPoly {
        expect_member(self.member_in(global(), n))
    }
}
