use std::ops::{Deref, DerefMut};

use super::QuiverModule;
use crate::error::{Error, Result};
use crate::linalg::{subspace_sum, Matrix, Scalar};
use crate::mckay::{DimensionVector, Vertex};

/// One subspace per vertex, each given by a column basis, indexed by vertex
/// position (∞ first).
#[derive(Clone, Debug, PartialEq)]
pub struct Subspaces<S>(pub Vec<Matrix<S>>);

impl<S: Scalar> Subspaces<S> {
    pub fn zero(m: &QuiverModule<S>) -> Self {
        Subspaces(m.quiver.vertices().map(|v| Matrix::zeros(m.dim_at(v), 0)).collect())
    }

    pub fn full(m: &QuiverModule<S>) -> Self {
        Subspaces(m.quiver.vertices().map(|v| Matrix::identity(m.dim_at(v))).collect())
    }

    pub fn at(&self, v: Vertex) -> &Matrix<S> {
        &self.0[v.position()]
    }

    pub fn dimension_vector(&self) -> DimensionVector {
        let dims: Vec<i64> = self.0.iter().map(|b| b.cols() as i64).collect();
        DimensionVector::new(dims[0], dims[1..].to_vec())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| b.cols() == 0)
    }
}

impl<S> Deref for Subspaces<S> {
    type Target = Vec<Matrix<S>>;
    fn deref(&self) -> &Vec<Matrix<S>> {
        &self.0
    }
}

impl<S> DerefMut for Subspaces<S> {
    fn deref_mut(&mut self) -> &mut Vec<Matrix<S>> {
        &mut self.0
    }
}

/// Smallest family of subspaces containing `seeds` and closed under every
/// arrow. `seeds` holds column vectors per vertex position.
pub fn submodule_generated<S: Scalar>(m: &QuiverModule<S>, seeds: &Subspaces<S>) -> Result<Subspaces<S>> {
    if seeds.len() != m.quiver.num_vertices() {
        return Err(Error::Shape("one seed block per vertex expected".into()));
    }
    for (p, s) in seeds.iter().enumerate() {
        if s.rows() != m.dim_at(Vertex::from_position(p)) {
            return Err(Error::Shape(format!("seed at vertex position {p} has the wrong height")));
        }
    }
    let mut current = Subspaces(seeds.iter().map(Matrix::column_basis).collect());
    loop {
        let mut grown = false;
        for (k, a) in m.quiver.arrows.iter().enumerate() {
            let (t, h) = (a.tail.position(), a.head.position());
            let image = m.maps[k].matmul(&current[t]);
            let merged = subspace_sum(&current[h], &image);
            if merged.cols() > current[h].cols() {
                current[h] = merged;
                grown = true;
            }
        }
        if !grown {
            return Ok(current);
        }
    }
}

/// Largest family `U_i ⊆ V_i` supported on `zone` with `B_a(U_tail) ⊆ U_head`
/// for every arrow, where `U_head = 0` off the zone.
pub fn max_submodule_supported<S: Scalar>(m: &QuiverModule<S>, zone: &[Vertex]) -> Result<Subspaces<S>> {
    if zone.contains(&Vertex::Infinity) {
        return Err(Error::Precondition("the framing vertex cannot lie in the support zone".into()));
    }
    let mut current = Subspaces::zero(m);
    for &v in zone {
        if v.position() >= m.quiver.num_vertices() {
            return Err(Error::Shape(format!("vertex {v:?} is not in the quiver")));
        }
        current[v.position()] = Matrix::identity(m.dim_at(v));
    }
    loop {
        let mut shrunk = false;
        for (k, a) in m.quiver.arrows.iter().enumerate() {
            let (t, h) = (a.tail.position(), a.head.position());
            if current[t].cols() == 0 {
                continue;
            }
            // keep the part of U_t that B_a sends into U_h
            let annihilator = current[h].left_annihilator();
            let condition = annihilator.matmul(&m.maps[k]).matmul(&current[t]);
            if condition.rows() == 0 || condition.is_zero() {
                continue;
            }
            let kernel = condition.kernel_matrix();
            if kernel.cols() < current[t].cols() {
                current[t] = current[t].matmul(&kernel).column_basis();
                shrunk = true;
            }
        }
        if !shrunk {
            return Ok(current);
        }
    }
}
