//! Test support: a small prime field, a seeded generator of random
//! preprojective modules, and a brute-force stability oracle that enumerates
//! every subrepresentation over the prime field.

#![allow(dead_code)]

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use kql_core::mckay::{framed_mckay_quiver, DimensionVector, GroupSpec, McKayQuiver, Vertex};
use kql_core::pi_module::QuiverModule;
use kql_core::stability::{c_plus_representative, theta_i, theta_zero_for, StabilityParameter};
use kql_core::{Matrix, Rational, Scalar};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const P: i64 = 5;

/// The field with `P` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp(pub i64);

impl Fp {
    pub fn new(v: i64) -> Self {
        Fp(v.rem_euclid(P))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        Fp::new(self.0 + o.0)
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp::new(self.0 - o.0)
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp::new(self.0 * o.0)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp::new(-self.0)
    }
}

impl Scalar for Fp {
    const EXACT: bool = true;
    const KIND: &'static str = "fp";

    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn from_i64(v: i64) -> Self {
        Fp::new(v)
    }
    fn from_rational(q: &BigRational) -> Self {
        let reduce = |b: &num_bigint::BigInt| (b % P).to_i64().expect("small residue");
        let den = Fp::new(reduce(q.denom()));
        Fp::new(reduce(q.numer())) * den.inv().expect("denominator invertible mod p")
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        (1..P).map(Fp).find(|c| (*c * *self).0 == 1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn magnitude(&self) -> f64 {
        if self.0 == 0 {
            0.0
        } else {
            1.0
        }
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.0 as f64, 0.0)
    }
}

/// Arrows whose maps are drawn freely; the reverse of each is solved for.
fn is_free(m: &QuiverModule<impl Scalar>, k: usize) -> bool {
    m.quiver.arrows[k].epsilon > 0
}

/// A random Π-module over `A(m)` with the given dimension vector.
///
/// Maps on arrows with `ε = +1` are random (each is zero with probability
/// 1/3); the preprojective relations are linear in the remaining maps, which
/// are drawn from the solution space with small integer coefficients.
pub fn random_pi_module<S: Scalar>(
    rng: &mut ChaCha8Rng,
    group: GroupSpec,
    r: usize,
    dim: &DimensionVector,
) -> QuiverModule<S> {
    let quiver = framed_mckay_quiver(group, r).unwrap();
    let mut m = QuiverModule::<S>::zero(&quiver, dim.clone());
    let n_arrows = m.maps.len();
    for k in 0..n_arrows {
        if is_free(&m, k) && rng.random_range(0..3) != 0 {
            let (rows, cols) = m.maps[k].shape();
            m.maps[k] = Matrix::from_fn(rows, cols, |_, _| S::from_i64(rng.random_range(-2..=2)));
        }
    }
    // unknowns: entries of the solved maps
    let mut slots = Vec::new();
    for k in (0..n_arrows).filter(|&k| !is_free(&m, k)) {
        let (rows, cols) = m.maps[k].shape();
        for i in 0..rows {
            for j in 0..cols {
                slots.push((k, i, j));
            }
        }
    }
    let flatten = |res: Vec<Matrix<S>>| res.iter().flat_map(|r| r.entries().to_vec()).collect::<Vec<S>>();
    let eqs = flatten(m.preprojective_residual()).len();
    let mut columns = Vec::with_capacity(slots.len());
    for &(k, i, j) in &slots {
        let mut probe = m.clone();
        probe.maps[k][(i, j)] = S::one();
        columns.push(flatten(probe.preprojective_residual()));
    }
    let kernel = Matrix::from_columns(eqs, &columns).kernel_basis();
    let mut values = vec![S::zero(); slots.len()];
    for basis in kernel {
        let c = S::from_i64(rng.random_range(-2..=2));
        for (v, b) in values.iter_mut().zip(basis) {
            *v = v.clone() + c.clone() * b;
        }
    }
    for (&(k, i, j), v) in slots.iter().zip(values) {
        m.maps[k][(i, j)] = v;
    }
    assert!(m.is_pi_module(0.0));
    m
}

/// Dimension vectors `(1, v)` over `A(2)` with every entry at most 2.
pub fn tiny_dims() -> Vec<DimensionVector> {
    let mut out = Vec::new();
    for a in 0..=2 {
        for b in 0..=2 {
            out.push(DimensionVector::new(1, vec![a, b]));
        }
    }
    out
}

/// The seeded corpus of tiny Π-modules over `A(2)`, `count` of them.
pub fn tiny_corpus<S: Scalar>(seed: u64, count: usize) -> Vec<QuiverModule<S>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = tiny_dims();
    (0..count).map(|k| random_pi_module(&mut rng, GroupSpec::A(2), 1, &dims[k % dims.len()])).collect()
}

/// Parameters exercised by the oracle comparison.
pub fn theta_family<S: Scalar>(m: &QuiverModule<S>) -> Vec<(&'static str, StabilityParameter)> {
    let v = &m.dim.v;
    vec![
        ("cplus", c_plus_representative(v)),
        ("theta0", theta_zero_for(m)),
        ("theta_{0}", theta_i(&[0], v).unwrap()),
        ("theta_{1}", theta_i(&[1], v).unwrap()),
    ]
}

/// All subspaces of `F_p^d` for `d <= 2`, as column-basis matrices.
fn subspaces(d: usize) -> Vec<Matrix<Fp>> {
    let mut out = vec![Matrix::zeros(d, 0)];
    match d {
        0 => {}
        1 => out.push(Matrix::identity(1)),
        2 => {
            for t in 0..P {
                out.push(Matrix::from_fn(2, 1, |i, _| if i == 0 { Fp(1) } else { Fp(t) }));
            }
            out.push(Matrix::from_fn(2, 1, |i, _| Fp(i as i64)));
            out.push(Matrix::identity(2));
        }
        _ => panic!("oracle enumerates dimensions up to 2"),
    }
    out
}

fn contains(big: &Matrix<Fp>, small: &Matrix<Fp>) -> bool {
    big.hstack(small).rank() == big.rank()
}

/// Stability and semistability decided by enumerating every
/// subrepresentation `N` and checking `θ(N) > 0` (resp. `>= 0`).
pub fn brute_force(m: &QuiverModule<Fp>, t: &StabilityParameter) -> (bool, bool) {
    let vertices: Vec<Vertex> = m.quiver.vertices().collect();
    let choices: Vec<Vec<Matrix<Fp>>> = vertices.iter().map(|&v| subspaces(m.dim_at(v))).collect();
    let total: DimensionVector = m.dim.clone();
    let mut stable = true;
    let mut semistable = true;
    let mut index = vec![0usize; vertices.len()];
    loop {
        let pick: Vec<&Matrix<Fp>> = index.iter().zip(&choices).map(|(&i, c)| &c[i]).collect();
        let closed = m.quiver.arrows.iter().enumerate().all(|(k, a)| {
            let image = m.maps[k].matmul(pick[a.tail.position()]);
            contains(pick[a.head.position()], &image)
        });
        if closed {
            let mut d = DimensionVector::zero(m.dim.v.len());
            for (&v, s) in vertices.iter().zip(&pick) {
                *d.at_mut(v) = s.cols() as i64;
            }
            let value: Rational = t.theta_of(&d);
            let proper_nonzero = !d.is_zero() && d != total;
            if value.0 < BigRational::zero() {
                semistable = false;
                stable = false;
            } else if value.0.is_zero() && proper_nonzero {
                stable = false;
            }
        }
        let mut k = 0;
        loop {
            if k == index.len() {
                return (stable, semistable);
            }
            index[k] += 1;
            if index[k] < choices[k].len() {
                break;
            }
            index[k] = 0;
            k += 1;
        }
    }
}

/// Affine Dynkin diagram as an edge list with multiplicities.
pub fn affine_dynkin(g: GroupSpec) -> (usize, Vec<(usize, usize, usize)>) {
    let chain = |n: usize| (0..n - 1).map(|i| (i, i + 1, 1)).collect::<Vec<_>>();
    match g {
        GroupSpec::A(1) => (1, vec![(0, 0, 1)]),
        GroupSpec::A(2) => (2, vec![(0, 1, 2)]),
        GroupSpec::A(m) => {
            let m = m as usize;
            let mut e = chain(m);
            e.push((m - 1, 0, 1));
            (m, e)
        }
        GroupSpec::D(n) => {
            // D̃_n: a chain of n - 3 vertices with two leaves at each end
            let n = n as usize;
            let spine = n - 3;
            let mut e = chain(spine);
            let last = spine - 1;
            e.extend([(spine, 0, 1), (spine + 1, 0, 1), (spine + 2, last, 1), (spine + 3, last, 1)]);
            (n + 1, e)
        }
        GroupSpec::E6 => (7, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (2, 5, 1), (5, 6, 1)]),
        GroupSpec::E7 => (8, vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 6, 1), (3, 7, 1)]),
        GroupSpec::E8 => {
            let mut e = chain(8);
            e.push((5, 8, 1));
            (9, e)
        }
    }
}

/// Undirected edges of the quiver with multiplicities; a pair of loops
/// counts as one undirected loop.
pub fn quiver_edges(q: &McKayQuiver) -> Vec<(usize, usize, usize)> {
    let n = q.num_vertices();
    let mut edges = Vec::new();
    for i in 0..n {
        assert_eq!(q.multiplicity[i][i] % 2, 0, "odd loop count");
        if q.multiplicity[i][i] > 0 {
            edges.push((i, i, q.multiplicity[i][i] / 2));
        }
        for j in i + 1..n {
            assert_eq!(q.multiplicity[i][j], q.multiplicity[j][i], "asymmetric multiplicities");
            if q.multiplicity[i][j] > 0 {
                edges.push((i, j, q.multiplicity[i][j]));
            }
        }
    }
    edges
}

fn graph(n: usize, edges: &[(usize, usize, usize)]) -> UnGraph<(), usize> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for &(a, b, w) in edges {
        g.add_edge(nodes[a], nodes[b], w);
    }
    g
}

pub fn same_graph(a: (usize, &[(usize, usize, usize)]), b: (usize, &[(usize, usize, usize)])) -> bool {
    is_isomorphic_matching(&graph(a.0, a.1), &graph(b.0, b.1), |_, _| true, |x, y| x == y)
}
