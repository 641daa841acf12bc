use crate::{Format, Orders};
use appell_core::identities::{IdentityId, IdentityReport, Registry};
use appell_core::stochastic::{mc_check, McConfig, McFamily};
use appell_core::{AppellError, Catalog, FamilyId, FamilyKind, MultiPoly, Rational, Result, Var};
use serde_json::{json, Map, Value};
use std::ops::RangeInclusive;

pub enum Outcome {
    Success,
    Failure,
}

fn only(format: Format, allowed: &[Format], command: &str) -> Result<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(AppellError::Precondition(format!("`{command}` does not support --format {format:?}")))
    }
}

fn family_id(kind: FamilyKind, orders: &Orders) -> Result<FamilyId> {
    FamilyId::new(kind, orders.m.clone(), orders.l.clone())
}

fn orders_json(orders: &Orders) -> Value {
    let mut map = Map::new();
    if let Some(m) = &orders.m {
        map.insert("m".into(), m.to_string().into());
    }
    if let Some(l) = &orders.l {
        map.insert("l".into(), l.to_string().into());
    }
    Value::Object(map)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

pub fn family(
    kind: FamilyKind,
    range: RangeInclusive<usize>,
    single: bool,
    orders: &Orders,
    format: Format,
) -> Result<Outcome> {
    only(format, &[Format::Text, Format::Json], "family")?;
    let catalog = Catalog::from_env()?;
    let id = family_id(kind, orders)?;
    let members: Vec<(usize, MultiPoly)> =
        range.map(|n| id.member_in(&catalog, n).map(|p| (n, p))).collect::<Result<_>>()?;
    match format {
        Format::Json => print_json(&json!({
            "family": kind.name(),
            "orders": orders_json(orders),
            "members": members
                .iter()
                .map(|(n, p)| json!({ "n": n, "polynomial": p.to_string() }))
                .collect::<Vec<_>>(),
        })),
        _ if single => println!("{}", members[0].1),
        _ => {
            for (n, p) in &members {
                println!("{n}: {p}");
            }
        }
    }
    Ok(Outcome::Success)
}

pub fn eval(kind: FamilyKind, n: usize, x: &Rational, orders: &Orders, format: Format) -> Result<Outcome> {
    only(format, &[Format::Text, Format::Json], "eval")?;
    let catalog = Catalog::from_env()?;
    let value = family_id(kind, orders)?.member_in(&catalog, n)?.eval_constant(&[(Var::X, x.clone())])?;
    match format {
        Format::Json => print_json(&json!({
            "family": kind.name(),
            "n": n,
            "x": x.to_string(),
            "orders": orders_json(orders),
            "value": value.to_string(),
        })),
        _ => println!("{value}"),
    }
    Ok(Outcome::Success)
}

pub fn verify(identity: &str, max_n: usize, format: Format) -> Result<Outcome> {
    only(format, &[Format::Text, Format::Json], "verify")?;
    let target = if identity == "all" { None } else { Some(identity.parse::<IdentityId>()?) };
    let catalog = Catalog::from_env()?;
    let registry = Registry::standard();
    let reports: Vec<IdentityReport> = match target {
        None => registry.verify_all(&catalog, max_n)?,
        Some(id) => vec![registry.verify(&catalog, id, max_n)?],
    };
    let passed = reports.iter().filter(|r| r.passed()).count();
    match format {
        Format::Json => print_json(&json!({
            "max_n": max_n,
            "passed": passed,
            "total": reports.len(),
            "reports": reports.iter().map(IdentityReport::to_json).collect::<Vec<_>>(),
        })),
        _ => {
            for r in &reports {
                println!("{r}");
            }
            println!("{passed}/{} identities passed", reports.len());
        }
    }
    Ok(if passed == reports.len() { Outcome::Success } else { Outcome::Failure })
}

pub fn mc(family: McFamily, cfg: McConfig, format: Format) -> Result<Outcome> {
    only(format, &[Format::Text, Format::Json], "mc")?;
    if let Some(cap) = Catalog::from_env()?.max_degree() {
        if cfg.n > cap {
            return Err(AppellError::OutOfRange { requested: cfg.n, available: cap });
        }
    }
    let result = mc_check(family, &cfg)?;
    match format {
        Format::Json => print_json(&result.to_json()),
        _ => {
            println!("{family} n={} m={} l={} x0={} samples={} seed={}", cfg.n, cfg.m_int, cfg.shift_count, cfg.x0, cfg.samples, cfg.seed);
            println!("estimate  {:.12}", result.estimate);
            println!("std_error {:.3e}", result.std_error);
            println!("exact     {}", result.exact);
            println!("z_score   {:.3}", result.z_score);
        }
    }
    Ok(if result.within_threshold() { Outcome::Success } else { Outcome::Failure })
}

fn csv_cell(c: &MultiPoly) -> String {
    if c.as_constant().is_some() {
        c.to_string()
    } else {
        format!("\"{}\"", c.to_string().replace('"', "\"\""))
    }
}

pub fn table(kind: FamilyKind, max_n: usize, orders: &Orders, format: Format) -> Result<Outcome> {
    let catalog = Catalog::from_env()?;
    let id = family_id(kind, orders)?;
    let mut rows = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let p = id.member_in(&catalog, n)?;
        rows.push((0..=n as u32).map(|k| p.coefficient_in(Var::X, k)).collect::<Vec<_>>());
    }
    match format {
        Format::Csv => {
            for (n, row) in rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(csv_cell).collect();
                println!("{n},{}", cells.join(","));
            }
        }
        Format::Json => print_json(&json!({
            "family": kind.name(),
            "orders": orders_json(orders),
            "rows": rows
                .iter()
                .enumerate()
                .map(|(n, row)| json!({
                    "n": n,
                    "coefficients": row.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
        })),
        Format::Text => {
            for (n, row) in rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                println!("{n}: {}", cells.join(" | "));
            }
        }
    }
    Ok(Outcome::Success)
}
