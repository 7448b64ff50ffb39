//! Finite subgroups of SL(2, C) and their character tables.
//!
//! Cyclic groups get a closed-form table indexed by weight. The binary
//! polyhedral groups are generated as unit quaternions; their irreducible
//! characters come from the joint eigenvectors of the class-multiplication
//! matrices (Burnside's method).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex, Matrix};

/// Tolerance for integrality of character data.
pub const CHARACTER_TOL: f64 = 1e-6;

/// An ADE finite subgroup of SL(2, C), named by its Dynkin type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// Cyclic group of order m, acting by `diag(ζ, ζ⁻¹)`.
    A(u32),
    /// Binary dihedral group of order `4(m - 2)`, Dynkin type `D_m`, `m >= 4`.
    D(u32),
    /// Binary tetrahedral group.
    E6,
    /// Binary octahedral group.
    E7,
    /// Binary icosahedral group.
    E8,
}

impl GroupSpec {
    pub fn validate(self) -> Result<Self> {
        match self {
            GroupSpec::A(m) if m < 1 => Err(Error::InvalidGroup(format!("A({m}): order must be >= 1"))),
            GroupSpec::D(m) if m < 4 => Err(Error::InvalidGroup(format!("D({m}): need m >= 4"))),
            g => Ok(g),
        }
    }

    pub fn order(self) -> usize {
        match self {
            GroupSpec::A(m) => m as usize,
            GroupSpec::D(m) => 4 * (m as usize - 2),
            GroupSpec::E6 => 24,
            GroupSpec::E7 => 48,
            GroupSpec::E8 => 120,
        }
    }

    /// Order of the cyclic group, if this is type A.
    pub fn cyclic_order(self) -> Option<usize> {
        match self {
            GroupSpec::A(m) => Some(m as usize),
            _ => None,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::A(m) => write!(f, "A{m}"),
            GroupSpec::D(m) => write!(f, "D{m}"),
            GroupSpec::E6 => write!(f, "E6"),
            GroupSpec::E7 => write!(f, "E7"),
            GroupSpec::E8 => write!(f, "E8"),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Accepts `A3`, `A(3)`, `D4`, `E8`, ...
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidGroup(format!("cannot parse group {s:?}"));
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
        let rest: String = chars.filter(|c| !matches!(c, '(' | ')' | ' ')).collect();
        let m: u32 = rest.parse().map_err(|_| bad())?;
        let g = match (family, m) {
            ('A', m) => GroupSpec::A(m),
            ('D', m) => GroupSpec::D(m),
            ('E', 6) => GroupSpec::E6,
            ('E', 7) => GroupSpec::E7,
            ('E', 8) => GroupSpec::E8,
            _ => return Err(bad()),
        };
        g.validate()
    }
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One irreducible representation: its dimension and its character on each
/// conjugacy class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Irrep {
    pub dim: usize,
    pub character: Vec<Complex>,
}

/// Character data of a finite subgroup of SL(2, C).
///
/// Irreps are ordered with the trivial representation first, then by
/// dimension. For cyclic groups the irrep at position k is `g ↦ ζ^k`, so
/// positions are weights mod m. For the other families ties in dimension are
/// broken by comparing characters class by class, larger real part first and
/// then larger imaginary part, after rounding to 1e-6.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterTable {
    pub group: GroupSpec,
    pub order: usize,
    pub class_sizes: Vec<usize>,
    pub irreps: Vec<Irrep>,
    /// Character of the tautological two-dimensional representation L.
    pub tautological: Vec<Complex>,
}

impl CharacterTable {
    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    pub fn num_irreps(&self) -> usize {
        self.irreps.len()
    }

    /// Class-weighted Hermitian inner product `(1/|Γ|) Σ |C| a(C) conj(b(C))`.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let total: Complex64 =
            self.class_sizes.iter().zip(a.iter().zip(b)).map(|(&size, (x, y))| *x * y.conj() * size as f64).sum();
        total / self.order as f64
    }

    pub fn character(&self, i: usize) -> Vec<Complex64> {
        self.irreps[i].character.iter().map(|z| z.0).collect()
    }

    pub fn tautological_character(&self) -> Vec<Complex64> {
        self.tautological.iter().map(|z| z.0).collect()
    }

    /// Largest deviation from orthonormality over all pairs of irreps.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.irreps.len();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let ip = self.inner(&self.character(a), &self.character(b));
                let expected = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((ip - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }
}

/// Builds the character table of `g`.
pub fn character_table(g: GroupSpec) -> Result<CharacterTable> {
    let g = g.validate()?;
    match g {
        GroupSpec::A(m) => Ok(cyclic_table(m as usize)),
        _ => polyhedral_table(g),
    }
}

fn cyclic_table(m: usize) -> CharacterTable {
    let zeta = |e: usize| Complex64::from_polar(1.0, 2.0 * PI * ((e % m) as f64) / m as f64);
    let irreps =
        (0..m).map(|k| Irrep { dim: 1, character: (0..m).map(|j| Complex(clean(zeta(k * j)))).collect() }).collect();
    let tautological = (0..m).map(|j| Complex(clean(zeta(j) + zeta(m - j % m)))).collect();
    CharacterTable { group: GroupSpec::A(m as u32), order: m, class_sizes: vec![1; m], irreps, tautological }
}

fn clean(z: Complex64) -> Complex64 {
    let snap = |v: f64| if (v - v.round()).abs() < 1e-12 { v.round() + 0.0 } else { v };
    Complex64::new(snap(z.re), snap(z.im))
}

type Quat = [f64; 4];

fn qmul(a: &Quat, b: &Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

fn qinv(a: &Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

fn qkey(a: &Quat) -> [i64; 4] {
    a.map(|v| (v * 1e6).round() as i64)
}

fn generators(g: GroupSpec) -> Vec<Quat> {
    let h = 0.5;
    match g {
        GroupSpec::D(m) => {
            let k = (m - 2) as f64;
            vec![[(PI / k).cos(), (PI / k).sin(), 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]
        }
        GroupSpec::E6 => vec![[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [h, h, h, h]],
        GroupSpec::E7 => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            vec![[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [h, h, h, h], [s, s, 0.0, 0.0]]
        }
        GroupSpec::E8 => {
            let phi = (1.0 + 5f64.sqrt()) / 2.0;
            vec![[h, h, h, h], [phi / 2.0, 1.0 / (2.0 * phi), h, 0.0]]
        }
        GroupSpec::A(_) => unreachable!("cyclic groups use the closed-form table"),
    }
}

/// Group elements in breadth-first order from the identity.
fn generate(gens: &[Quat]) -> Vec<Quat> {
    let id = [1.0, 0.0, 0.0, 0.0];
    let mut elems = vec![id];
    let mut seen: HashMap<[i64; 4], usize> = HashMap::from([(qkey(&id), 0)]);
    let mut frontier = 0;
    while frontier < elems.len() {
        let x = elems[frontier];
        frontier += 1;
        for g in gens {
            let y = qmul(&x, g);
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(qkey(&y)) {
                e.insert(elems.len());
                elems.push(y);
            }
        }
    }
    elems
}

fn polyhedral_table(g: GroupSpec) -> Result<CharacterTable> {
    let elems = generate(&generators(g));
    if elems.len() != g.order() {
        return Err(Error::InvalidGroup(format!("{g}: generated {} elements, expected {}", elems.len(), g.order())));
    }
    let index: HashMap<[i64; 4], usize> = elems.iter().enumerate().map(|(i, q)| (qkey(q), i)).collect();
    let lookup = |q: &Quat| index[&qkey(q)];

    // conjugacy classes in order of first appearance
    let n = elems.len();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in 0..n {
        if class_of[e] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = Vec::new();
        for h in &elems {
            let conj = lookup(&qmul(&qmul(h, &elems[e]), &qinv(h)));
            if class_of[conj] == usize::MAX {
                class_of[conj] = c;
                members.push(conj);
            }
        }
        classes.push(members);
    }
    let k = classes.len();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();

    // coeff[i][j][l] = #{x ∈ C_i : x⁻¹ g_l ∈ C_j}
    let mut coeff = vec![vec![vec![0.0_f64; k]; k]; k];
    for (i, ci) in classes.iter().enumerate() {
        for (l, &gl) in reps.iter().enumerate() {
            for &x in ci {
                let y = lookup(&qmul(&qinv(&elems[x]), &elems[gl]));
                coeff[i][class_of[y]][l] += 1.0;
            }
        }
    }
    let weights: Vec<f64> =
        [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0].iter().map(|p: &f64| p.sqrt()).collect();
    let combo = DMatrix::<f64>::from_fn(k, k, |j, l| (0..k).map(|i| weights[i % weights.len()] * coeff[i][j][l]).sum());
    let eigenvalues = combo.complex_eigenvalues();
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();

    let mut irreps = Vec::with_capacity(k);
    for lambda in eigenvalues.iter() {
        let shifted = Matrix::<Complex>::from_fn(k, k, |j, l| {
            let d = if j == l { *lambda } else { Complex64::new(0.0, 0.0) };
            Complex(Complex64::new(combo[(j, l)], 0.0) - d)
        });
        let kernel = shifted.kernel_basis_tol(1e-8);
        if kernel.len() != 1 {
            return Err(Error::InvalidGroup(format!("{g}: degenerate class-algebra eigenspace")));
        }
        let w0 = kernel[0][0].0;
        let w: Vec<Complex64> = kernel[0].iter().map(|z| z.0 / w0).collect();
        let norm: f64 = w.iter().zip(&sizes).map(|(z, &s)| z.norm_sqr() / s as f64).sum();
        let dim_f = (n as f64 / norm).sqrt();
        let dim = dim_f.round();
        if (dim - dim_f).abs() > CHARACTER_TOL {
            return Err(Error::NonIntegralMultiplicity { value: dim_f, residue: (dim - dim_f).abs() });
        }
        let character = w.iter().zip(&sizes).map(|(z, &s)| Complex(clean(*z * dim / s as f64))).collect();
        irreps.push(Irrep { dim: dim as usize, character });
    }
    irreps.sort_by(|a, b| irrep_order_key(a).cmp(&irrep_order_key(b)));

    let tautological = reps.iter().map(|&r| Complex(clean(Complex64::new(2.0 * elems[r][0], 0.0)))).collect();
    Ok(CharacterTable { group: g, order: n, class_sizes: sizes, irreps, tautological })
}

fn irrep_order_key(r: &Irrep) -> (bool, usize, Vec<(i64, i64)>) {
    let trivial = r.character.iter().all(|z| (z.0 - Complex64::new(1.0, 0.0)).norm() < CHARACTER_TOL);
    let values = r.character.iter().map(|z| (-(z.0.re * 1e6).round() as i64, -(z.0.im * 1e6).round() as i64)).collect();
    (!trivial, r.dim, values)
}
