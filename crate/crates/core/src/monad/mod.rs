//! The three-term monad attached to ADHM data, the rank-one correspondence
//! with torus-weighted ideals, support cycles and tangent dimensions.

mod ideal;
mod support;
mod tangent;

pub use ideal::{
    adhm_to_ideal, free_orbit_ideal, ideal_to_adhm, isotypic_decomposition, monomial_weight, orbit_union_ideal,
    random_orbit_points, witness_datum, witness_module, EquivariantIdeal,
};
pub use support::{support_cycle, SupportCycle, SupportPoint};
pub use tangent::tangent_dimension;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Complex, Matrix, Scalar};
use crate::pi_module::AdhmDatum;

/// Homogeneous coordinates `(x, y, z)` on the projective plane.
pub const COORDS: [&str; 3] = ["x", "y", "z"];

/// `V --A--> V ⊕ V ⊕ W --B--> V` with
/// `A = [zB1 - x; zB2 - y; zj]` and `B = [-(zB2 - y), zB1 - x, zi]`.
///
/// `a[k]` and `b[k]` are the coefficient matrices of the coordinate `COORDS[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonadData<S> {
    pub dim_v: usize,
    pub r: usize,
    pub a: [Matrix<S>; 3],
    pub b: [Matrix<S>; 3],
}

impl<S: Scalar> MonadData<S> {
    /// Widths of the three terms.
    pub fn term_dims(&self) -> (usize, usize, usize) {
        (self.dim_v, 2 * self.dim_v + self.r, self.dim_v)
    }

    /// Coefficients of `B·A` as a quadratic form, keyed by the monomials
    /// `xx, xy, xz, yy, yz, zz`.
    pub fn composite(&self) -> Vec<(String, Matrix<S>)> {
        let mut out = Vec::new();
        for p in 0..3 {
            for q in p..3 {
                let mut c = self.b[p].matmul(&self.a[q]);
                if p != q {
                    c = c.add(&self.b[q].matmul(&self.a[p]));
                }
                out.push((format!("{}{}", COORDS[p], COORDS[q]), c));
            }
        }
        out
    }

    /// Whether `B·A = 0` identically.
    pub fn composite_vanishes(&self, tol: f64) -> bool {
        self.composite().iter().all(|(_, c)| if S::EXACT { c.is_zero() } else { c.max_magnitude() <= tol })
    }

    /// `(A(p), B(p))` at a point.
    pub fn evaluate(&self, point: &[Complex; 3]) -> (Matrix<Complex>, Matrix<Complex>) {
        let eval = |coeffs: &[Matrix<S>; 3]| {
            let mut acc = Matrix::<Complex>::zeros(coeffs[0].rows(), coeffs[0].cols());
            for (c, &t) in coeffs.iter().zip(point) {
                acc = acc.add(&c.map(|v| Complex(v.to_c64())).scale(&t));
            }
            acc
        };
        (eval(&self.a), eval(&self.b))
    }
}

pub fn build_monad<S: Scalar>(d: &AdhmDatum<S>) -> Result<MonadData<S>> {
    d.validate()?;
    let n = d.dim_v();
    let r = d.r;
    let id = Matrix::<S>::identity(n);
    let zero_nn = Matrix::<S>::zeros(n, n);
    let zero_rn = Matrix::<S>::zeros(r, n);
    let zero_nr = Matrix::<S>::zeros(n, r);
    let a = [
        id.neg().vstack(&zero_nn).vstack(&zero_rn),
        zero_nn.vstack(&id.neg()).vstack(&zero_rn),
        d.b1.vstack(&d.b2).vstack(&d.j),
    ];
    let b = [
        zero_nn.hstack(&id.neg()).hstack(&zero_nr),
        id.hstack(&zero_nn).hstack(&zero_nr),
        d.b2.neg().hstack(&d.b1).hstack(&d.i),
    ];
    Ok(MonadData { dim_v: n, r, a, b })
}

/// Full column rank of `A(p)` and full row rank of `B(p)` at tolerance `tol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FiberVerdict {
    pub a_injective: bool,
    pub b_surjective: bool,
}

pub fn monad_fiber_check<S: Scalar>(md: &MonadData<S>, point: &[Complex; 3], tol: f64) -> Result<FiberVerdict> {
    if point.iter().all(|c| c.0.norm() == 0.0) {
        return Err(Error::Invalid("(0:0:0) is not a point of the projective plane".into()));
    }
    let (a, b) = md.evaluate(point);
    Ok(FiberVerdict { a_injective: a.rank_tol(tol) == md.dim_v, b_surjective: b.rank_tol(tol) == md.dim_v })
}

/// `count` seeded points with unit-scale complex coordinates, then
/// `on_line` further points on the line `z = 0`.
pub fn sample_points(seed: u64, count: usize, on_line: usize) -> Vec<[Complex; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let mut out = Vec::with_capacity(count + on_line);
    for _ in 0..count {
        out.push([draw(&mut rng), draw(&mut rng), draw(&mut rng)]);
    }
    for _ in 0..on_line {
        out.push([draw(&mut rng), draw(&mut rng), Complex::new(0.0, 0.0)]);
    }
    out
}

/// For data with `W = 0` and no weight-0 part: `rank A(p) + rank B(p)`
/// equals the middle dimension at every point, so the middle cohomology
/// vanishes fiberwise.
pub fn koszul_middle_check<S: Scalar>(d: &AdhmDatum<S>, points: &[[Complex; 3]], tol: f64) -> Result<bool> {
    if d.r != 0 {
        return Err(Error::Precondition("Koszul check needs W = 0".into()));
    }
    if d.weights.contains(&0) {
        return Err(Error::Precondition("Koszul check needs a zero weight-0 component".into()));
    }
    let md = build_monad(d)?;
    let middle = md.term_dims().1;
    Ok(points.iter().all(|p| {
        let (a, b) = md.evaluate(p);
        a.rank_tol(tol) + b.rank_tol(tol) == middle
    }))
}

/// For the vertex simple at a nontrivial weight i, checks degree by degree up
/// to `degree_bound` on the chart `z = 1` that the invariant part of the
/// cokernel of `b(f, g) = y f - x g` vanishes.
///
/// A monomial `x^a y^b` has weight `a - b`; a target section `h·v` is
/// invariant when `wt(h) + i ≡ 0`.
pub fn invariant_sections_check<S: Scalar>(d: &AdhmDatum<S>, degree_bound: usize) -> Result<bool> {
    if d.dim_v() != 1 || d.r != 0 {
        return Err(Error::Precondition("invariant sections check needs a vertex simple".into()));
    }
    let m = d.m as i64;
    let i = d.weights[0] as i64;
    if i == 0 {
        return Err(Error::Precondition("the vertex simple must sit at a nontrivial weight".into()));
    }
    let wt = |a: usize, b: usize| (a as i64 - b as i64).rem_euclid(m);
    let invariant = |w: i64| (w + i).rem_euclid(m) == 0;
    for deg in 0..=degree_bound {
        let targets: Vec<(usize, usize)> =
            (0..=deg).map(|a| (a, deg - a)).filter(|&(a, b)| invariant(wt(a, b))).collect();
        if targets.is_empty() {
            continue;
        }
        if deg == 0 {
            return Ok(false);
        }
        // y·f with f of weight w lands at weight w - 1; x·g at weight w + 1
        let mut columns: Vec<Vec<S>> = Vec::new();
        for a in 0..deg {
            let b = deg - 1 - a;
            let w = wt(a, b);
            if invariant(w - 1) {
                columns.push(unit_at(&targets, (a, b + 1)));
            }
            if invariant(w + 1) {
                columns.push(unit_at::<S>(&targets, (a + 1, b)).into_iter().map(|v| -v).collect());
            }
        }
        let rank = Matrix::from_columns(targets.len(), &columns).rank();
        if rank < targets.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn unit_at<S: Scalar>(targets: &[(usize, usize)], at: (usize, usize)) -> Vec<S> {
    targets.iter().map(|&t| if t == at { S::one() } else { S::zero() }).collect()
}
