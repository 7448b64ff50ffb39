use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::group::{CharacterTable, GroupSpec, CHARACTER_TOL};
use crate::error::{Error, Result};

/// A vertex of the framed quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Infinity,
    Node(usize),
}

impl Vertex {
    /// Position in `Q₀ = {∞, 0, …, s}`.
    pub fn position(self) -> usize {
        match self {
            Vertex::Infinity => 0,
            Vertex::Node(i) => i + 1,
        }
    }

    pub fn from_position(p: usize) -> Vertex {
        if p == 0 {
            Vertex::Infinity
        } else {
            Vertex::Node(p - 1)
        }
    }
}

/// An oriented edge. `reverse` indexes the arrow with the opposite orientation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    #[serde(with = "vertex_serde")]
    pub tail: Vertex,
    #[serde(with = "vertex_serde")]
    pub head: Vertex,
    pub reverse: usize,
    pub epsilon: i8,
}

mod vertex_serde {
    use super::Vertex;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Vertex, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Vertex::Infinity => s.serialize_str("inf"),
            Vertex::Node(i) => s.serialize_str(&i.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vertex, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            return Ok(Vertex::Infinity);
        }
        s.parse().map(Vertex::Node).map_err(serde::de::Error::custom)
    }
}

/// The McKay quiver: one vertex per irrep, `a_ij` arrows from i to j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McKayQuiver {
    pub group: GroupSpec,
    pub multiplicity: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    pub arrows: Vec<Arrow>,
}

impl McKayQuiver {
    pub fn num_vertices(&self) -> usize {
        self.multiplicity.len()
    }
}

/// The McKay quiver with a framing vertex ∞ joined to vertex 0 by `r` arrow
/// pairs `b_k: ∞ → 0`, `b̄_k: 0 → ∞`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramedQuiver {
    pub base: McKayQuiver,
    pub r: usize,
    /// McKay arrows first (same order and ids as `base`), then `b_1..b_r`,
    /// then `b̄_1..b̄_r`.
    pub arrows: Vec<Arrow>,
}

impl FramedQuiver {
    pub fn group(&self) -> GroupSpec {
        self.base.group
    }

    /// Number of vertices including ∞.
    pub fn num_vertices(&self) -> usize {
        self.base.num_vertices() + 1
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.num_vertices()).map(Vertex::from_position)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    /// Index of the framing arrow `b_k` (1-based k).
    pub fn framing_in(&self, k: usize) -> usize {
        self.base.arrows.len() + k - 1
    }

    /// Index of the framing arrow `b̄_k` (1-based k).
    pub fn framing_out(&self, k: usize) -> usize {
        self.base.arrows.len() + self.r + k - 1
    }

    pub fn delta(&self) -> DimensionVector {
        DimensionVector::new(0, self.base.dims.iter().map(|&d| d as i64).collect())
    }
}

/// Integer vector indexed by `Q₀ = {∞, 0, …, s}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimensionVector {
    pub inf: i64,
    pub v: Vec<i64>,
}

impl DimensionVector {
    pub fn new(inf: i64, v: Vec<i64>) -> Self {
        DimensionVector { inf, v }
    }

    pub fn zero(nodes: usize) -> Self {
        DimensionVector { inf: 0, v: vec![0; nodes] }
    }

    /// Vertex simple at `vertex`.
    pub fn unit(nodes: usize, vertex: Vertex) -> Self {
        let mut d = Self::zero(nodes);
        *d.at_mut(vertex) = 1;
        d
    }

    pub fn at(&self, vertex: Vertex) -> i64 {
        match vertex {
            Vertex::Infinity => self.inf,
            Vertex::Node(i) => self.v[i],
        }
    }

    pub fn at_mut(&mut self, vertex: Vertex) -> &mut i64 {
        match vertex {
            Vertex::Infinity => &mut self.inf,
            Vertex::Node(i) => &mut self.v[i],
        }
    }

    pub fn add(&self, other: &DimensionVector) -> DimensionVector {
        assert_eq!(self.v.len(), other.v.len(), "dimension vectors index different quivers");
        DimensionVector::new(self.inf + other.inf, self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &DimensionVector) -> DimensionVector {
        assert_eq!(self.v.len(), other.v.len(), "dimension vectors index different quivers");
        DimensionVector::new(self.inf - other.inf, self.v.iter().zip(&other.v).map(|(a, b)| a - b).collect())
    }

    pub fn scaled(&self, n: i64) -> DimensionVector {
        DimensionVector::new(self.inf * n, self.v.iter().map(|a| a * n).collect())
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &DimensionVector) -> bool {
        self.inf <= other.inf && self.v.iter().zip(&other.v).all(|(a, b)| a <= b)
    }

    pub fn is_zero(&self) -> bool {
        self.inf == 0 && self.v.iter().all(|&a| a == 0)
    }

    pub fn entries(&self) -> Vec<i64> {
        std::iter::once(self.inf).chain(self.v.iter().copied()).collect()
    }
}

/// Derives the McKay quiver: `a_ij = <χ_j, χ_i·χ_L>` rounded to an integer.
pub fn mckay_quiver(ct: &CharacterTable) -> Result<McKayQuiver> {
    let n = ct.num_irreps();
    let taut = ct.tautological_character();
    let mut multiplicity = vec![vec![0usize; n]; n];
    for (i, row) in multiplicity.iter_mut().enumerate() {
        let prod: Vec<Complex64> = ct.character(i).iter().zip(&taut).map(|(a, b)| a * b).collect();
        for (j, entry) in row.iter_mut().enumerate() {
            let ip = ct.inner(&prod, &ct.character(j));
            let rounded = ip.re.round();
            let residue = (ip - Complex64::new(rounded, 0.0)).norm();
            if residue > CHARACTER_TOL || rounded < 0.0 {
                return Err(Error::NonIntegralMultiplicity { value: ip.re, residue });
            }
            *entry = rounded as usize;
        }
    }
    for i in 0..n {
        for j in 0..n {
            if multiplicity[i][j] != multiplicity[j][i] {
                return Err(Error::InvalidGroup(format!("McKay multiplicities not symmetric at ({i}, {j})")));
            }
        }
    }
    let arrows = mckay_arrows(&multiplicity);
    Ok(McKayQuiver { group: ct.group, multiplicity, dims: ct.dims(), arrows })
}

/// Arrows ordered by `(tail, head, copy)`. For `i < j` copy k of `i → j` is
/// paired with copy k of `j → i` and carries ε = +1; loops at a vertex are
/// paired as copies `(2k, 2k+1)` with ε = (+1, −1).
fn mckay_arrows(mult: &[Vec<usize>]) -> Vec<Arrow> {
    let n = mult.len();
    let mut arrows = Vec::new();
    let mut index = std::collections::HashMap::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..mult[i][j] {
                index.insert((i, j, k), arrows.len());
                let epsilon = match i.cmp(&j) {
                    std::cmp::Ordering::Less => 1,
                    std::cmp::Ordering::Greater => -1,
                    std::cmp::Ordering::Equal => {
                        if k % 2 == 0 {
                            1
                        } else {
                            -1
                        }
                    }
                };
                arrows.push(Arrow {
                    id: format!("a{i}_{j}_{k}"),
                    tail: Vertex::Node(i),
                    head: Vertex::Node(j),
                    reverse: usize::MAX,
                    epsilon,
                });
            }
        }
    }
    for a in arrows.iter_mut() {
        let (Vertex::Node(i), Vertex::Node(j)) = (a.tail, a.head) else { unreachable!() };
        let k: usize = a.id.rsplit('_').next().unwrap().parse().unwrap();
        a.reverse = if i == j { index[&(i, i, k ^ 1)] } else { index[&(j, i, k)] };
    }
    arrows
}

/// Adds the framing vertex with `r` arrow pairs.
pub fn frame(q: &McKayQuiver, r: usize) -> Result<FramedQuiver> {
    if r < 1 {
        return Err(Error::InvalidFramingRank);
    }
    let base_len = q.arrows.len();
    let mut arrows = q.arrows.clone();
    for k in 1..=r {
        arrows.push(Arrow {
            id: format!("b{k}"),
            tail: Vertex::Infinity,
            head: Vertex::Node(0),
            reverse: base_len + r + k - 1,
            epsilon: 1,
        });
    }
    for k in 1..=r {
        arrows.push(Arrow {
            id: format!("bbar{k}"),
            tail: Vertex::Node(0),
            head: Vertex::Infinity,
            reverse: base_len + k - 1,
            epsilon: -1,
        });
    }
    Ok(FramedQuiver { base: q.clone(), r, arrows })
}

/// Minimal imaginary root `δ = (dim ρ_i)`, zero at ∞.
pub fn delta(ct: &CharacterTable) -> DimensionVector {
    DimensionVector::new(0, ct.dims().iter().map(|&d| d as i64).collect())
}

/// Convenience: character table, McKay quiver and framing in one step.
pub fn framed_mckay_quiver(g: GroupSpec, r: usize) -> Result<FramedQuiver> {
    let ct = super::group::character_table(g)?;
    frame(&mckay_quiver(&ct)?, r)
}
