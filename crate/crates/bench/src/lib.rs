//! Benchmark fixtures.

use kql_core::mckay::GroupSpec;
use kql_core::monad::{random_orbit_points, witness_module};
use kql_core::pi_module::QuiverModule;
use kql_core::Rational;

/// Rank-one witness module for `n` seeded orbits over `A(m)`.
pub fn witness(m: u32, n: usize, seed: u64) -> QuiverModule<Rational> {
    witness_module(GroupSpec::A(m), &random_orbit_points(m as usize, n, seed), 1).expect("generic orbits")
}
