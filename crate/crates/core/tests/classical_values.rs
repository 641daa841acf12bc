use appell_core::families::FamilyKind;
use appell_core::series::{bernoulli_prefactor, euler_prefactor};
use appell_core::{convolve, parse_rational, AppellFamily, Catalog, FamilyKey, MultiPoly, PowerSeries, Rational, Shape, Var};

fn fixture() -> Vec<(usize, Rational, Rational)> {
    include_str!("fixtures/values_at_zero.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].parse().unwrap(), parse_rational(f[1]).unwrap(), parse_rational(f[2]).unwrap())
        })
        .collect()
}

#[test]
fn golden_values_at_zero() {
    let catalog = Catalog::with_max_degree(32);
    let rows = fixture();
    assert_eq!(rows.len(), 33);
    for (k, b, e) in rows {
        assert_eq!(catalog.bernoulli(Var::X, k).unwrap().constant_term(), b, "B_{k}(0)");
        assert_eq!(catalog.euler(Var::X, k).unwrap().constant_term(), e, "E_{k}(0)");
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn power(s: &PowerSeries, j: u32) -> PowerSeries {
    (0..j).fold(PowerSeries::one(s.order()), |acc, _| &acc * s)
}

#[test]
fn integer_orders_match_repeated_products() {
    let catalog = Catalog::with_max_degree(10);
    let prefactors = [(Shape::GenBernoulli(Var::M), bernoulli_prefactor(10)), (Shape::GenEuler(Var::M), euler_prefactor(10))];
    for (shape, base) in prefactors {
        let key = FamilyKey::new(shape, Var::X).unwrap();
        for m in 1..=4u32 {
            let direct = AppellFamily::from_series(&power(&base, m), Var::X, "direct").unwrap();
            for n in 0..=10 {
                let symbolic = catalog.member(key, n).unwrap().eval(&[(Var::M, int(m.into()))]);
                assert_eq!(&symbolic, direct.member(n).unwrap(), "{shape:?} m={m} n={n}");
            }
        }
    }
}

#[test]
fn integer_orders_match_repeated_convolution() {
    let order = 8;
    let single = AppellFamily::from_series(&bernoulli_prefactor(order), Var::Y, "B").unwrap();
    let mut acc = AppellFamily::from_series(&bernoulli_prefactor(order), Var::X, "B").unwrap();
    let catalog = Catalog::with_max_degree(order);
    let key = FamilyKey::new(Shape::GenBernoulli(Var::M), Var::X).unwrap();
    for m in 2..=3i64 {
        let base: Vec<MultiPoly> =
            (0..=order).map(|n| convolve(&acc, &single, n).unwrap().eval(&[(Var::X, int(0)), (Var::Y, int(0))])).collect();
        acc = AppellFamily::from_base(base, Var::X, "B*").unwrap();
        for n in 0..=order {
            let symbolic = catalog.member(key, n).unwrap().eval(&[(Var::M, int(m))]);
            assert_eq!(&symbolic, acc.member(n).unwrap(), "m={m} n={n}");
        }
    }
}

#[test]
fn mixed_family_matches_products_of_powers() {
    let order = 8;
    let catalog = Catalog::with_max_degree(order);
    let (b, e) = (bernoulli_prefactor(order), euler_prefactor(order));
    for m in 0..=2u32 {
        for l in 0..=2u32 {
            let direct = AppellFamily::from_series(&(&power(&b, m) * &power(&e, l)), Var::X, "direct").unwrap();
            for n in 0..=order {
                let q = catalog.mixed(n).unwrap().eval(&[(Var::M, int(m.into())), (Var::L, int(l.into()))]);
                assert_eq!(&q, direct.member(n).unwrap(), "m={m} l={l} n={n}");
            }
        }
    }
}

#[test]
fn structural_properties_of_every_kind() {
    let catalog = Catalog::with_max_degree(12);
    for kind in FamilyKind::ALL {
        let key = kind.key();
        assert_eq!(catalog.member(key, 0).unwrap(), MultiPoly::one(), "{kind}");
        for n in 1..=12 {
            let q = catalog.member(key, n).unwrap();
            assert_eq!(q.degree_in(Var::X), Some(n as u32), "{kind} n={n}");
            assert_eq!(q.leading_coefficient_in(Var::X), MultiPoly::one(), "{kind} n={n}");
            let prev = catalog.member(key, n - 1).unwrap().scale_int(&n.into());
            assert_eq!(q.derivative(Var::X), prev, "{kind} n={n}");
        }
    }
}
