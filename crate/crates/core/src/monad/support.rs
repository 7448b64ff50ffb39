use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::ser::{SerializeTuple, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{char_poly, Complex, Matrix, Rational, Scalar};
use crate::pi_module::AdhmDatum;

/// A point of the plane with multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportPoint {
    pub x: Complex,
    pub y: Complex,
    pub multiplicity: usize,
}

impl Serialize for SupportPoint {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&self.y)?;
        t.serialize_element(&self.multiplicity)?;
        t.end()
    }
}

/// Joint spectrum of a commuting pair, sorted by coordinates.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SupportCycle {
    pub points: Vec<SupportPoint>,
}

impl SupportCycle {
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|p| p.multiplicity).sum()
    }
}

/// Mixing coefficients tried for `C = B1 + c·B2` until the generalized
/// eigenspaces of C carry a single joint eigenvalue each.
const MIXERS: [(i64, i64); 6] = [(3, 7), (5, 11), (-13, 17), (19, 23), (29, 3), (-31, 37)];

/// Joint eigenvalues of `(B1, B2)` with multiplicities.
///
/// Over exact fields multiplicities come from the squarefree factorisation
/// of the characteristic polynomial of `C`; over approximate fields the
/// eigenvalues of C are clustered with radius `10 tol`.
pub fn support_cycle<S: Scalar>(d: &AdhmDatum<S>, tol: f64) -> Result<SupportCycle> {
    d.validate()?;
    if d.r != 1 {
        return Err(Error::Precondition(format!("support cycles are computed for r = 1, got r = {}", d.r)));
    }
    if !d.j.is_zero() {
        return Err(Error::Precondition("j must vanish".into()));
    }
    let comm = d.b1.matmul(&d.b2).sub(&d.b2.matmul(&d.b1));
    if if S::EXACT { !comm.is_zero() } else { comm.max_magnitude() > tol } {
        return Err(Error::Precondition("B1 and B2 do not commute".into()));
    }
    let n = d.dim_v();
    if n == 0 {
        return Ok(SupportCycle { points: Vec::new() });
    }
    let b1 = d.b1.map(|v| Complex(v.to_c64()));
    let b2 = d.b2.map(|v| Complex(v.to_c64()));
    for &(p, q) in &MIXERS {
        let c = S::from_ratio(p, q);
        let mixed = d.b1.add(&d.b2.scale(&c));
        let clusters = if S::EXACT { exact_clusters(&mixed) } else { numeric_clusters(&mixed, tol) };
        let cm = mixed.map(|v| Complex(v.to_c64()));
        if let Some(points) = joint_points(&cm, &b1, &b2, &clusters) {
            let mut points = points;
            points.sort_by(|a, b| key(a).partial_cmp(&key(b)).expect("finite coordinates"));
            return Ok(SupportCycle { points });
        }
    }
    Err(Error::Invalid("could not separate the joint spectrum".into()))
}

fn key(p: &SupportPoint) -> [f64; 4] {
    [p.x.0.re, p.x.0.im, p.y.0.re, p.y.0.im]
}

/// For each eigenvalue λ of multiplicity k, restricts B1, B2 to
/// `ker (C - λ)^k` and reads off their single eigenvalue as trace / k.
fn joint_points(
    c: &Matrix<Complex>,
    b1: &Matrix<Complex>,
    b2: &Matrix<Complex>,
    clusters: &[(Complex64, usize)],
) -> Option<Vec<SupportPoint>> {
    let n = c.rows();
    let mut out = Vec::new();
    for &(lambda, k) in clusters {
        let shifted = c.sub(&Matrix::identity(n).scale(&Complex(lambda)));
        let mut power = Matrix::identity(n);
        for _ in 0..k {
            power = power.matmul(&shifted);
        }
        let basis = power.kernel_matrix_tol(1e-8);
        if basis.cols() != k {
            return None;
        }
        let mut coords = Vec::new();
        for b in [b1, b2] {
            let restricted = basis.solve_tol(&b.matmul(&basis), 1e-6).into_particular()?;
            let mean = Complex(restricted.trace().0 / k as f64);
            // a single eigenvalue means restricted - mean is nilpotent
            let nil = restricted.sub(&Matrix::identity(k).scale(&mean));
            let mut p = Matrix::identity(k);
            for _ in 0..k {
                p = p.matmul(&nil);
            }
            if p.max_magnitude() > 1e-6 * (1.0 + restricted.max_magnitude()).powi(k as i32) {
                return None;
            }
            coords.push(snap(mean.0));
        }
        out.push(SupportPoint { x: Complex(coords[0]), y: Complex(coords[1]), multiplicity: k });
    }
    Some(out)
}

fn snap(z: Complex64) -> Complex64 {
    let s = |v: f64| if (v - v.round()).abs() < 1e-9 { v.round() + 0.0 } else { v };
    Complex64::new(s(z.re), s(z.im))
}

/// Distinct eigenvalues with exact algebraic multiplicities.
fn exact_clusters<S: Scalar>(c: &Matrix<S>) -> Vec<(Complex64, usize)> {
    let coeffs: Vec<Rational> = char_poly(c).iter().map(|v| Rational(v.to_rational().expect("exact scalar"))).collect();
    let mut out = Vec::new();
    for (k, factor) in squarefree_decomposition(&coeffs) {
        for root in roots(&factor) {
            out.push((root, k));
        }
    }
    out
}

fn numeric_clusters<S: Scalar>(c: &Matrix<S>, tol: f64) -> Vec<(Complex64, usize)> {
    let n = c.rows();
    let m = DMatrix::from_fn(n, n, |i, j| c[(i, j)].to_c64());
    let eig = m.schur().eigenvalues().expect("complex Schur form is triangular");
    let mut clusters: Vec<(Complex64, Vec<Complex64>)> = Vec::new();
    for &e in eig.iter() {
        match clusters.iter_mut().find(|(centre, _)| (centre - e).norm() <= 10.0 * tol) {
            Some((centre, members)) => {
                members.push(e);
                *centre = members.iter().sum::<Complex64>() / members.len() as f64;
            }
            None => clusters.push((e, vec![e])),
        }
    }
    clusters.into_iter().map(|(centre, members)| (centre, members.len())).collect()
}

type UPoly = Vec<Rational>;

fn trim(mut p: UPoly) -> UPoly {
    while p.len() > 1 && p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn monic(p: UPoly) -> UPoly {
    let p = trim(p);
    let lead = p.last().cloned().expect("nonempty").inv().expect("nonzero polynomial");
    p.into_iter().map(|c| c * lead.clone()).collect()
}

fn derivative(p: &UPoly) -> UPoly {
    if p.len() <= 1 {
        return vec![Rational::zero()];
    }
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c.clone() * Rational::integer(k as i64)).collect())
}

fn is_zero_poly(p: &UPoly) -> bool {
    p.iter().all(Scalar::is_zero)
}

fn divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let db = b.len() - 1;
    let lead = b[db].inv().expect("nonzero divisor");
    if r.len() < b.len() {
        return (vec![Rational::zero()], r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() && !is_zero_poly(&r) {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1].clone() * lead.clone();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] = r[shift + k].clone() - f.clone() * c.clone();
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !is_zero_poly(&b) {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|k| {
                a.get(k).cloned().unwrap_or_else(Rational::zero) - b.get(k).cloned().unwrap_or_else(Rational::zero)
            })
            .collect(),
    )
}

/// Yun's algorithm: `f = Π f_k^k` with squarefree, pairwise coprime `f_k`.
fn squarefree_decomposition(f: &UPoly) -> Vec<(usize, UPoly)> {
    let f = monic(f.clone());
    if f.len() == 1 {
        return Vec::new();
    }
    let df = derivative(&f);
    let a0 = gcd(&f, &df);
    let mut b = divrem(&f, &a0).0;
    let c = divrem(&df, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut k = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        let nb = divrem(&b, &a).0;
        let nc = divrem(&d, &a).0;
        d = sub(&nc, &derivative(&nb));
        if a.len() > 1 {
            out.push((k, a));
        }
        b = nb;
        k += 1;
    }
    out
}

/// Roots of a squarefree polynomial: companion-matrix eigenvalues polished by
/// Newton steps.
fn roots(p: &UPoly) -> Vec<Complex64> {
    let p = monic(p.clone());
    let deg = p.len() - 1;
    if deg == 1 {
        return vec![Complex64::new(-p[0].to_f64(), 0.0)];
    }
    let coeffs: Vec<f64> = p.iter().map(Rational::to_f64).collect();
    let companion = DMatrix::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -coeffs[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let deval = |z: Complex64| {
        coeffs.iter().enumerate().skip(1).rev().fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
    };
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let dz = deval(z);
                if dz.norm() == 0.0 {
                    break;
                }
                z -= eval(z) / dz;
            }
            z
        })
        .collect()
}
