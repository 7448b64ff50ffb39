use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational, Scalar, Solution};
use crate::mckay::{framed_mckay_quiver, DimensionVector, GroupSpec};
use crate::pi_module::{adhm_residual, adhm_to_quiver, AdhmDatum, QuiverModule};
use crate::poly::{groebner, staircase, Monomial, Poly, Ring};

/// Largest colength accepted when enumerating a staircase.
const STAIRCASE_LIMIT: usize = 10_000;

/// A Γ-invariant ideal of `C[x, y]` of finite colength, stored by its reduced
/// Gröbner basis (grevlex, `x > y`) and staircase.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantIdeal<S> {
    pub m: usize,
    pub generators: Vec<Poly<S>>,
    pub staircase: Vec<Monomial>,
}

/// Weight of `x^a y^b` under `diag(ζ, ζ⁻¹)`: `a - b mod m`.
pub fn monomial_weight(mono: &[u32], m: usize) -> usize {
    (mono[0] as i64 - mono[1] as i64).rem_euclid(m as i64) as usize
}

impl<S: Scalar> EquivariantIdeal<S> {
    /// Checks weight homogeneity of every generator, then computes the
    /// reduced Gröbner basis and the staircase.
    pub fn new(m: usize, generators: Vec<Poly<S>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGroup("cyclic order must be >= 1".into()));
        }
        let ring = Ring::xy();
        for g in &generators {
            if g.ring().as_ref() != ring.as_ref() {
                return Err(Error::Invalid("ideal generators must be polynomials in x, y".into()));
            }
            if weight_of(g, m).is_err() {
                return Err(Error::Invalid(format!("generator {:?} is not weight-homogeneous", g)));
            }
        }
        let generators = groebner(&generators);
        let staircase = staircase(&ring, &generators, STAIRCASE_LIMIT)?;
        Ok(EquivariantIdeal { m, generators, staircase })
    }

    pub fn unit(m: usize) -> Self {
        EquivariantIdeal::new(m, vec![Poly::constant(&Ring::xy(), S::one())]).expect("unit ideal")
    }

    pub fn ring(&self) -> Arc<Ring> {
        Ring::xy()
    }

    pub fn colength(&self) -> usize {
        self.staircase.len()
    }

    /// Weight of each generator.
    pub fn generator_weights(&self) -> Vec<usize> {
        self.generators.iter().map(|g| weight_of(g, self.m).expect("checked on construction")).collect()
    }

    pub fn contains(&self, p: &Poly<S>) -> bool {
        p.reduce(&self.generators).is_zero()
    }

    /// Normal form coordinates in the staircase basis.
    pub fn coordinates(&self, p: &Poly<S>) -> Vec<S> {
        let nf = p.reduce(&self.generators);
        self.staircase.iter().map(|s| nf.coeff(s)).collect()
    }
}

fn weight_of<S: Scalar>(p: &Poly<S>, m: usize) -> std::result::Result<usize, ()> {
    let mut weights = p.terms().iter().map(|(mono, _)| monomial_weight(mono, m));
    let first = weights.next().unwrap_or(0);
    if weights.all(|w| w == first) {
        Ok(first)
    } else {
        Err(())
    }
}

impl EquivariantIdeal<Rational> {
    /// Generators as text, e.g. `x^2 - 1`.
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(Poly::to_text).collect()
    }
}

/// The ideal of the Γ-orbit of the nonzero point `(a, b)`.
pub fn free_orbit_ideal<S: Scalar>(m: usize, a: &Rational, b: &Rational) -> Result<EquivariantIdeal<S>> {
    if a.0.is_zero() && b.0.is_zero() {
        return Err(Error::Invalid("orbit of the origin is not free".into()));
    }
    let ring = Ring::xy();
    let c = |q: &Rational| S::from_rational(&q.0);
    let pow = |q: &Rational| (0..m).fold(Rational::integer(1), |acc, _| acc * q.clone());
    let x = Poly::monomial(&ring, vec![1, 0], S::one());
    let y = Poly::monomial(&ring, vec![0, 1], S::one());
    let xm = Poly::monomial(&ring, vec![m as u32, 0], S::one());
    let ym = Poly::monomial(&ring, vec![0, m as u32], S::one());
    let gens = if !a.0.is_zero() {
        vec![
            x.mul(&y).sub(&Poly::constant(&ring, c(&(a.clone() * b.clone())))),
            xm.sub(&Poly::constant(&ring, c(&pow(a)))),
        ]
    } else {
        vec![x, ym.sub(&Poly::constant(&ring, c(&pow(b))))]
    };
    EquivariantIdeal::new(m, gens)
}

/// The ideal of a union of pairwise distinct free orbits, one representative
/// each.
pub fn orbit_union_ideal<S: Scalar>(m: usize, points: &[(Rational, Rational)]) -> Result<EquivariantIdeal<S>> {
    // orbits are separated by the invariants x^m, y^m, xy
    let pow = |q: &Rational| (0..m).fold(Rational::integer(1), |acc, _| acc * q.clone());
    let invariants: Vec<(Rational, Rational, Rational)> =
        points.iter().map(|(a, b)| (pow(a), pow(b), a.clone() * b.clone())).collect();
    for i in 0..points.len() {
        for j in 0..i {
            if invariants[i] == invariants[j] {
                return Err(Error::Invalid(format!("points {} and {} lie in the same orbit", j + 1, i + 1)));
            }
        }
    }
    let mut ideals = Vec::with_capacity(points.len());
    for (a, b) in points {
        ideals.push(free_orbit_ideal::<S>(m, a, b)?);
    }
    if ideals.is_empty() {
        return Ok(EquivariantIdeal::unit(m));
    }
    // I_1 ∩ … ∩ I_n is the annihilator of (1, …, 1) in ⊕ C[x,y]/I_k
    let data: Vec<AdhmDatum<S>> = ideals.iter().map(ideal_to_adhm).collect::<Result<_>>()?;
    let mut sum = data[0].clone();
    for d in &data[1..] {
        sum = sum.direct_sum(d)?;
    }
    let cyclic = sum.i.matmul(&Matrix::from_fn(sum.r, 1, |_, _| S::one()));
    let bound = sum.dim_v() + 1;
    annihilator_ideal(m, &sum.b1, &sum.b2, &cyclic.column(0), bound)
}

/// `V = C[x,y]/I` on the staircase basis, `B1`, `B2` multiplication by `x`,
/// `y`, `i = [1]`, `j = 0`.
pub fn ideal_to_adhm<S: Scalar>(ideal: &EquivariantIdeal<S>) -> Result<AdhmDatum<S>> {
    let ring = ideal.ring();
    let n = ideal.colength();
    let weights = ideal.staircase.iter().map(|s| monomial_weight(s, ideal.m)).collect();
    let multiply = |var: usize| {
        let columns: Vec<Vec<S>> = ideal
            .staircase
            .iter()
            .map(|s| {
                let mut shifted = s.clone();
                shifted[var] += 1;
                ideal.coordinates(&Poly::monomial(&ring, shifted, S::one()))
            })
            .collect();
        Matrix::from_columns(n, &columns)
    };
    let one = ideal.coordinates(&Poly::constant(&ring, S::one()));
    AdhmDatum::new(ideal.m, 1, weights, multiply(0), multiply(1), Matrix::from_columns(n, &[one]), Matrix::zeros(1, n))
}

/// `{ f : f(B1, B2) v = 0 }` for commuting `B1`, `B2`, read off degree by
/// degree up to `bound`. A monomial is standard when its image is independent
/// of the images of all smaller monomials; every other monomial yields the
/// basis element `μ - Σ c_s s`.
fn annihilator_ideal<S: Scalar>(
    m: usize,
    b1: &Matrix<S>,
    b2: &Matrix<S>,
    v: &[S],
    bound: usize,
) -> Result<EquivariantIdeal<S>> {
    let ring = Ring::xy();
    let n = v.len();
    let monomials = ring.monomials_up_to(bound as u32);
    let mut standard: Vec<Monomial> = Vec::new();
    let mut images: Vec<Vec<S>> = Vec::new();
    let mut leading: Vec<Monomial> = Vec::new();
    let mut generators = Vec::new();
    for mono in monomials {
        if leading.iter().any(|l| crate::poly::divides(l, &mono)) {
            continue;
        }
        let mut image = v.to_vec();
        for _ in 0..mono[0] {
            image = b1.mul_vec(&image);
        }
        for _ in 0..mono[1] {
            image = b2.mul_vec(&image);
        }
        let span = Matrix::from_columns(n, &images);
        let rhs = Matrix::from_columns(n, std::slice::from_ref(&image));
        let solution = if images.is_empty() {
            if image.iter().all(Scalar::is_zero) {
                Solution::Unique(Matrix::zeros(0, 1))
            } else {
                Solution::Inconsistent
            }
        } else {
            span.solve(&rhs)
        };
        match solution.into_particular() {
            None => {
                standard.push(mono);
                images.push(image);
            }
            Some(coeffs) => {
                let mut terms = vec![(mono.clone(), S::one())];
                for (k, s) in standard.iter().enumerate() {
                    terms.push((s.clone(), -coeffs[(k, 0)].clone()));
                }
                generators.push(Poly::from_terms(&ring, terms));
                leading.push(mono);
            }
        }
    }
    let ideal = EquivariantIdeal::new(m, generators)?;
    if ideal.colength() != standard.len() {
        return Err(Error::InfiniteColength(bound));
    }
    Ok(ideal)
}

/// The ideal `{ f : f(B1, B2) i = 0 }` of rank-one data with `j = 0`.
///
/// `degree_bound` defaults to `dim V + 1`.
pub fn adhm_to_ideal<S: Scalar>(d: &AdhmDatum<S>, degree_bound: Option<usize>) -> Result<EquivariantIdeal<S>> {
    d.validate()?;
    if d.r != 1 {
        return Err(Error::Precondition(format!("rank-one data expected, got r = {}", d.r)));
    }
    if !d.j.is_zero() {
        return Err(Error::Precondition("j must vanish".into()));
    }
    let residual = adhm_residual(d);
    if !(if S::EXACT { residual.is_zero() } else { residual.max_magnitude() <= crate::linalg::DEFAULT_TOL }) {
        return Err(Error::NonzeroResidual("adhm".into()));
    }
    let bound = degree_bound.unwrap_or(d.dim_v() + 1);
    let ideal = annihilator_ideal(d.m, &d.b1, &d.b2, &d.i.column(0), bound)?;
    if ideal.colength() != d.dim_v() {
        return Err(Error::Precondition(format!(
            "data is not stable: i generates a {}-dimensional subspace of V (dim {})",
            ideal.colength(),
            d.dim_v()
        )));
    }
    Ok(ideal)
}

/// Weight multiplicities of `C[x,y]/I`, as a dimension vector with `inf = 0`.
pub fn isotypic_decomposition<S: Scalar>(ideal: &EquivariantIdeal<S>) -> DimensionVector {
    let mut counts = vec![0i64; ideal.m];
    for s in &ideal.staircase {
        counts[monomial_weight(s, ideal.m)] += 1;
    }
    DimensionVector::new(0, counts)
}

/// ADHM data of the witness: the orbit ideal of `points`, framed to rank `r`
/// by adding a summand with `V = 0` and an `(r - 1)`-dimensional framing.
pub fn witness_datum<S: Scalar>(m: usize, points: &[(Rational, Rational)], r: usize) -> Result<AdhmDatum<S>> {
    if r < 1 {
        return Err(Error::InvalidFramingRank);
    }
    if let Some(k) = points.iter().position(|(a, b)| a.0.is_zero() && b.0.is_zero()) {
        return Err(Error::Invalid(format!("point {} is the origin, whose orbit is not free", k + 1)));
    }
    let ideal = orbit_union_ideal::<S>(m, points)?;
    let mut d = ideal_to_adhm(&ideal)?;
    if r > 1 {
        d = d.direct_sum(&AdhmDatum::empty(m, r - 1))?;
    }
    Ok(d)
}

/// `n` points with small integer coordinates in pairwise distinct free
/// orbits, drawn from `seed`. Orbits are told apart by `(a^m, b^m, ab)`.
pub fn random_orbit_points(m: usize, n: usize, seed: u64) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(n);
    let mut seen: Vec<(i64, i64, i64)> = Vec::with_capacity(n);
    while out.len() < n {
        let (a, b): (i64, i64) = (rng.random_range(-4..=4), rng.random_range(-4..=4));
        let key = (a.pow(m as u32), b.pow(m as u32), a * b);
        if (a, b) == (0, 0) || seen.contains(&key) {
            continue;
        }
        seen.push(key);
        out.push((Rational::integer(a), Rational::integer(b)));
    }
    out
}

/// The θ₀-stable module of `n` free orbits over `A(m)` with framing rank `r`.
pub fn witness_module<S: Scalar>(
    group: GroupSpec,
    points: &[(Rational, Rational)],
    r: usize,
) -> Result<QuiverModule<S>> {
    let m = group
        .cyclic_order()
        .ok_or_else(|| Error::Unsupported(format!("witness modules are built for cyclic groups, not {group}")))?;
    let d = witness_datum::<S>(m, points, r)?;
    adhm_to_quiver(&d, &framed_mckay_quiver(group, r)?)
}
