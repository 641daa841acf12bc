use appell_core::identities::{IdentityId, Registry, Sides, Status};
use appell_core::{AppellError, Catalog, MultiPoly, Var};
use std::time::Instant;

#[test]
fn whole_registry_passes_through_degree_twelve() {
    let catalog = Catalog::with_max_degree(24);
    let start = Instant::now();
    let reports = Registry::standard().verify_all(&catalog, 12).unwrap();
    assert!(start.elapsed().as_secs() < 60);
    assert_eq!(reports.len(), IdentityId::ALL.len());
    for (report, id) in reports.iter().zip(IdentityId::ALL) {
        assert_eq!(report.identity, id);
        assert_eq!(report.status, Status::Pass, "{report}");
        assert_eq!(report.residuals.len(), 13);
    }
}

#[test]
fn deep_classical_identities() {
    let catalog = Catalog::with_max_degree(24);
    let registry = Registry::standard();
    for id in [IdentityId::Cheon, IdentityId::PropIdentity, IdentityId::DifferenceB, IdentityId::DifferenceE] {
        let report = registry.verify(&catalog, id, 20).unwrap();
        assert!(report.passed(), "{report}");
    }
}

fn flipped_translation(ctx: &appell_core::identities::Ctx, n: usize) -> appell_core::Result<Vec<Sides>> {
    // B_n(x + 1) against B_n(x) - n x^{n-1}: the wrong sign.
    let b = ctx.b(Var::X, n)?;
    let lhs = b.shift_by(Var::X, &appell_core::Rational::from_integer(1.into()));
    let mut rhs = b.clone();
    if n > 0 {
        rhs -= MultiPoly::var(Var::X).pow(n as u32 - 1).scale_int(&n.into());
    }
    Ok(vec![Sides::new(lhs, rhs)])
}

#[test]
fn mutated_checker_is_reported() {
    let catalog = Catalog::with_max_degree(10);
    let mut registry = Registry::standard();
    registry.replace(IdentityId::DifferenceB, flipped_translation);
    let report = registry.verify(&catalog, IdentityId::DifferenceB, 6).unwrap();
    assert_eq!(report.status, Status::Fail);
    let failing: Vec<usize> = report.failures().map(|r| r.n).collect();
    assert_eq!(failing, vec![1, 2, 3, 4, 5, 6]);
    let json = report.to_json();
    assert_eq!(json["status"], "fail");
    assert_eq!(json["residuals"][1]["polynomial"], "2");
}

#[test]
fn capped_catalog_refuses_deep_runs() {
    let catalog = Catalog::with_max_degree(8);
    let err = Registry::standard().verify_all(&catalog, 8).unwrap_err();
    assert!(matches!(err, AppellError::OutOfRange { available: 8, .. }), "{err}");
    assert!(Registry::standard().verify(&catalog, IdentityId::Cheon, 8).is_ok());
}
