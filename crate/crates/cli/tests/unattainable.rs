//! Literal acceptance claims that do not hold for the registered domains. Run with
//! `cargo test -p semistar-cli --test unattainable -- --ignored` to see them fail.

use semistar_core::domain::Domain;
use semistar_core::sample::ideal_pool;
use semistar_core::semistar::SemistarOp;

/// Claimed: P3 witnesses d ≠ t on ℤ[3i]. Every fractional ideal of a quadratic order is
/// divisorial, so P3^t = P3 and no witness exists in any pool.
#[test]
#[ignore = "ℤ[3i] is Gorenstein: d = t, so the claimed witness does not exist"]
fn d_differs_from_t_on_z3i() {
    let d = Domain::quadratic_order(-1, 3).unwrap();
    let t = SemistarOp::t(&d).unwrap();
    let p3 = d.primes_above(3).unwrap()[0].under.clone();
    let mut pool = ideal_pool(&d, 200, 10).unwrap();
    pool.push(p3);
    assert!(pool.iter().any(|e| t.closure(e).unwrap() != *e), "no ideal of Z[3i] has E^t != E");
}

/// What does hold: every pooled ideal of ℤ[3i] is t-closed.
#[test]
fn t_is_trivial_on_z3i() {
    let d = Domain::quadratic_order(-1, 3).unwrap();
    let t = SemistarOp::t(&d).unwrap();
    for e in ideal_pool(&d, 200, 10).unwrap() {
        assert_eq!(t.closure(&e).unwrap(), e);
    }
}
