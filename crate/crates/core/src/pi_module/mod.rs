//! Framed preprojective modules in quiver form and in ADHM form.

mod adhm;
mod hom;
mod subspace;

pub use adhm::{adhm_residual, adhm_to_quiver, arrow_roles, quiver_to_adhm, AdhmDatum, ArrowRole};
pub use hom::{hom_space, is_isomorphic, ModuleHom};
pub use subspace::{max_submodule_supported, submodule_generated, Subspaces};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::mckay::{DimensionVector, FramedQuiver, Vertex};

/// A representation of the framed doubled McKay quiver.
///
/// `maps[a]` is the matrix of arrow `quiver.arrows[a]`, of shape
/// `dim(head) x dim(tail)`. The framing vertex has dimension 0 or 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverModule<S> {
    pub quiver: FramedQuiver,
    pub dim: DimensionVector,
    pub maps: Vec<Matrix<S>>,
}

impl<S: Scalar> QuiverModule<S> {
    /// Validates shapes and the framing dimension.
    pub fn new(quiver: FramedQuiver, dim: DimensionVector, maps: Vec<Matrix<S>>) -> Result<Self> {
        let m = QuiverModule { quiver, dim, maps };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let q = &self.quiver;
        if self.dim.v.len() != q.base.num_vertices() {
            return Err(Error::Shape(format!(
                "dimension vector has {} Dynkin entries, quiver has {}",
                self.dim.v.len(),
                q.base.num_vertices()
            )));
        }
        if !(0..=1).contains(&self.dim.inf) || self.dim.v.iter().any(|&d| d < 0) {
            return Err(Error::Shape(format!("invalid dimension vector {:?}", self.dim.entries())));
        }
        if self.maps.len() != q.arrows.len() {
            return Err(Error::Shape(format!("{} arrow matrices for {} arrows", self.maps.len(), q.arrows.len())));
        }
        for (a, m) in q.arrows.iter().zip(&self.maps) {
            let want = (self.dim_at(a.head), self.dim_at(a.tail));
            if m.shape() != want {
                return Err(Error::Shape(format!("arrow {} has shape {:?}, expected {:?}", a.id, m.shape(), want)));
            }
        }
        Ok(())
    }

    /// The zero representation of dimension `dim`.
    pub fn zero(quiver: &FramedQuiver, dim: DimensionVector) -> Self {
        let maps =
            quiver.arrows.iter().map(|a| Matrix::zeros(dim.at(a.head) as usize, dim.at(a.tail) as usize)).collect();
        QuiverModule { quiver: quiver.clone(), dim, maps }
    }

    /// The one-dimensional module supported at a single vertex.
    pub fn vertex_simple(quiver: &FramedQuiver, vertex: Vertex) -> Self {
        QuiverModule::zero(quiver, DimensionVector::unit(quiver.base.num_vertices(), vertex))
    }

    pub fn dim_at(&self, v: Vertex) -> usize {
        self.dim.at(v) as usize
    }

    pub fn total_dim(&self) -> usize {
        self.dim.entries().iter().sum::<i64>() as usize
    }

    pub fn map(&self, id: &str) -> Option<&Matrix<S>> {
        self.quiver.arrow_index(id).map(|k| &self.maps[k])
    }

    /// `Σ_{head(a)=i} ε(a) B_a B_ā` at every vertex, indexed by position.
    pub fn preprojective_residual(&self) -> Vec<Matrix<S>> {
        let mut out: Vec<Matrix<S>> =
            self.quiver.vertices().map(|v| Matrix::zeros(self.dim_at(v), self.dim_at(v))).collect();
        for (k, a) in self.quiver.arrows.iter().enumerate() {
            let term = self.maps[k].matmul(&self.maps[a.reverse]);
            let slot = &mut out[a.head.position()];
            *slot = if a.epsilon > 0 { slot.add(&term) } else { slot.sub(&term) };
        }
        out
    }

    /// Largest residual entry magnitude (exactly 0 for a Π-module over an
    /// exact field).
    pub fn residual_norm(&self) -> f64 {
        self.preprojective_residual().iter().map(Matrix::max_magnitude).fold(0.0, f64::max)
    }

    /// Whether every relation holds: exactly over exact fields, up to `tol`
    /// otherwise.
    pub fn is_pi_module(&self, tol: f64) -> bool {
        self.preprojective_residual().iter().all(|r| if S::EXACT { r.is_zero() } else { r.max_magnitude() <= tol })
    }

    /// Errors with the first vertex whose relation fails.
    pub fn require_pi_module(&self, tol: f64) -> Result<()> {
        for (p, r) in self.preprojective_residual().iter().enumerate() {
            let bad = if S::EXACT { !r.is_zero() } else { r.max_magnitude() > tol };
            if bad {
                let name = match Vertex::from_position(p) {
                    Vertex::Infinity => "inf".to_string(),
                    Vertex::Node(i) => i.to_string(),
                };
                return Err(Error::NonzeroResidual(name));
            }
        }
        Ok(())
    }

    /// Block-diagonal sum. At most one summand may have `dim_∞ = 1`.
    pub fn direct_sum(&self, other: &QuiverModule<S>) -> Result<QuiverModule<S>> {
        if self.quiver != other.quiver {
            return Err(Error::Shape("direct sum of modules over different quivers".into()));
        }
        if self.dim.inf + other.dim.inf > 1 {
            return Err(Error::Precondition("both summands have dim_inf = 1".into()));
        }
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.block_diag(b)).collect();
        Ok(QuiverModule { quiver: self.quiver.clone(), dim: self.dim.add(&other.dim), maps })
    }

    /// The submodule spanned by `sub`, in the coordinates of its bases.
    ///
    /// `sub` must be closed under every arrow; each basis must have full
    /// column rank.
    pub fn restrict(&self, sub: &Subspaces<S>) -> Result<QuiverModule<S>> {
        let dim = sub.dimension_vector();
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, a) in self.quiver.arrows.iter().enumerate() {
            let (h, t) = (&sub[a.head.position()], &sub[a.tail.position()]);
            let image = self.maps[k].matmul(t);
            let coords = h
                .solve(&image)
                .into_particular()
                .ok_or_else(|| Error::Precondition(format!("subspace not closed under arrow {}", a.id)))?;
            maps.push(coords);
        }
        QuiverModule::new(self.quiver.clone(), dim, maps)
    }

    /// The quotient by the submodule spanned by `sub`, in coordinates of a
    /// complement spanned by standard basis vectors.
    pub fn quotient(&self, sub: &Subspaces<S>) -> Result<QuiverModule<S>> {
        let mut complements = Vec::new();
        let mut frames = Vec::new();
        for (p, u) in sub.iter().enumerate() {
            let n = self.dim_at(Vertex::from_position(p));
            let c = complement(u, n);
            frames.push(u.hstack(&c));
            complements.push(c);
        }
        let dims: Vec<i64> = complements.iter().map(|c| c.cols() as i64).collect();
        let dim = DimensionVector::new(dims[0], dims[1..].to_vec());
        let mut maps = Vec::with_capacity(self.maps.len());
        for (k, a) in self.quiver.arrows.iter().enumerate() {
            let (hp, tp) = (a.head.position(), a.tail.position());
            let image = self.maps[k].matmul(&complements[tp]);
            let coords = frames[hp].solve(&image).into_particular().expect("frame is a basis");
            let skip = sub[hp].cols();
            let rows: Vec<usize> = (skip..coords.rows()).collect();
            let cols: Vec<usize> = (0..coords.cols()).collect();
            maps.push(coords.submatrix(&rows, &cols));
        }
        QuiverModule::new(self.quiver.clone(), dim, maps)
    }
}

/// Standard basis vectors completing the columns of `u` to a basis of `S^n`.
fn complement<S: Scalar>(u: &Matrix<S>, n: usize) -> Matrix<S> {
    let mut current = u.clone();
    let mut picked = Vec::new();
    for k in 0..n {
        if current.cols() == n {
            break;
        }
        let e = Matrix::from_fn(n, 1, |i, _| if i == k { S::one() } else { S::zero() });
        let trial = current.hstack(&e);
        if trial.rank() > current.cols() {
            current = trial;
            picked.push(k);
        }
    }
    Matrix::from_fn(n, picked.len(), |i, j| if i == picked[j] { S::one() } else { S::zero() })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::linalg::Rational;
    use crate::mckay::{framed_mckay_quiver, GroupSpec};

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows)
    }

    /// The A(2) module of the orbit {(1,2), (-1,-2)} with r = 1, built by hand.
    pub(crate) fn orbit_module() -> QuiverModule<Rational> {
        let fq = framed_mckay_quiver(GroupSpec::A(2), 1).unwrap();
        // B1 = diag(1,-1), B2 = diag(2,-2) in the evaluation basis; in the
        // weight basis {1, x}: x·1 = x, x·x = 1, y·1 = 2x, y·x = 2.
        let mut m = QuiverModule::zero(&fq, DimensionVector::new(1, vec![1, 1]));
        let set = |m: &mut QuiverModule<Rational>, id: &str, v: Matrix<Rational>| {
            let k = m.quiver.arrow_index(id).unwrap();
            m.maps[k] = v;
        };
        // x-arrows: a0_1_0 (0 -> 1), a1_0_1 (1 -> 0, epsilon -1 so stored negated)
        set(&mut m, "a0_1_0", q(&[&[1]]));
        set(&mut m, "a1_0_1", q(&[&[-1]]));
        // y-arrows: a0_1_1 (0 -> 1), a1_0_0 (1 -> 0)
        set(&mut m, "a0_1_1", q(&[&[2]]));
        set(&mut m, "a1_0_0", q(&[&[2]]));
        set(&mut m, "b1", q(&[&[1]]));
        m
    }

    #[test]
    fn zero_dimensional_residual_is_empty() {
        let fq = framed_mckay_quiver(GroupSpec::A(3), 1).unwrap();
        let m: QuiverModule<Rational> = QuiverModule::zero(&fq, DimensionVector::zero(3));
        assert!(m.preprojective_residual().iter().all(|r| r.shape() == (0, 0)));
    }

    #[test]
    fn orbit_module_is_a_pi_module() {
        let m = orbit_module();
        m.validate().unwrap();
        assert!(m.is_pi_module(0.0));
        let mut bad = m.clone();
        let k = bad.quiver.arrow_index("a0_1_0").unwrap();
        bad.maps[k] = q(&[&[2]]);
        assert!(!bad.is_pi_module(0.0));
        assert!(bad.require_pi_module(0.0).is_err());
    }

    #[test]
    fn direct_sum_adds_dimensions() {
        let m = orbit_module();
        let s = QuiverModule::vertex_simple(&m.quiver, Vertex::Node(1));
        let sum = m.direct_sum(&s).unwrap();
        assert_eq!(sum.dim, DimensionVector::new(1, vec![1, 2]));
        assert!(sum.is_pi_module(0.0));
        assert!(m.direct_sum(&m).is_err());
    }

    #[test]
    fn bad_shapes_rejected() {
        let m = orbit_module();
        let mut maps = m.maps.clone();
        maps[0] = q(&[&[1, 2]]);
        assert!(QuiverModule::new(m.quiver.clone(), m.dim.clone(), maps).is_err());
    }

    #[test]
    fn quotient_by_summand() {
        let m = orbit_module();
        let s = QuiverModule::vertex_simple(&m.quiver, Vertex::Node(1));
        let sum = m.direct_sum(&s).unwrap();
        let sub = max_submodule_supported(&sum, &[Vertex::Node(1)]).unwrap();
        assert_eq!(sub.dimension_vector(), DimensionVector::new(0, vec![0, 1]));
        let quot = sum.quotient(&sub).unwrap();
        assert_eq!(quot, m);
    }
}
