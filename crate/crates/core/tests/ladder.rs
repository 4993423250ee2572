use rosenmorse_core::ladder::{build_ladder, gha_check, Direction};
use rosenmorse_core::suites::{extension_ladder, factorization_error, ladder_suite};
use rosenmorse_core::susy::type3_extension;
use rosenmorse_core::SystemParams;

fn both() -> [SystemParams; 2] {
    [SystemParams::rmii(16.0, 20.0).unwrap(), SystemParams::rmi(20.0, 2.0).unwrap()]
}

#[test]
fn ladder_action_identity() {
    for p in both() {
        for row in ladder_suite(&p, 0..=10).unwrap() {
            let tol = if row.n <= 6 { 1e-6 } else { 1e-3 };
            assert!(row.error < tol, "{p} {row:?}");
        }
    }
}

#[test]
fn raise_after_lower_gives_shifted_energy() {
    for p in both() {
        for n in 1..=6 {
            let c = factorization_error(&p, n).unwrap();
            assert!(c.error < 1e-6, "{p} n = {n}: {c:?}");
        }
    }
}

#[test]
fn chain_order_bookkeeping() {
    for p in both() {
        for n in 0..=10 {
            let down = build_ladder(&p, n, Direction::Lower).unwrap();
            let up = build_ladder(&p, n, Direction::Raise).unwrap();
            assert_eq!(up.order(), 2 * n + 1);
            assert_eq!(down.order(), if n == 0 { 1 } else { 2 * n - 1 });
            assert!(up.scalar.is_finite() && up.scalar > 0.0);
            assert!(down.scalar.is_finite() && down.scalar > 0.0);
        }
    }
}

#[test]
fn heisenberg_algebra_commutators() {
    for p in both() {
        for n in 0..=4 {
            let r = gha_check(&p, n).unwrap();
            assert!(r.worst() < 1e-6, "{p} {r:?}");
        }
    }
}

#[test]
fn extension_ladder_identities() {
    let ext = type3_extension(&SystemParams::rmii(16.0, 20.0).unwrap(), 2).unwrap();
    let r = extension_ladder(&ext).unwrap();
    assert!(r.annihilation < 1e-9, "{r:?}");
    assert!(r.action < 1e-6 * ext.base().k(1).sqrt(), "{r:?}");
}
