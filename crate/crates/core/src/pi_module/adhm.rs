use super::QuiverModule;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::mckay::{DimensionVector, FramedQuiver, GroupSpec, Vertex};

/// ADHM data `(B1, B2, i, j)` for the cyclic group of order `m`.
///
/// Every basis vector of V carries a weight mod m. `B1` raises weights by 1,
/// `B2` lowers them by 1, `i: W → V` lands in weight 0 and `j: V → W` vanishes
/// off weight 0. W has dimension `r` (possibly 0) and trivial action.
#[derive(Clone, Debug, PartialEq)]
pub struct AdhmDatum<S> {
    pub m: usize,
    pub r: usize,
    pub weights: Vec<usize>,
    pub b1: Matrix<S>,
    pub b2: Matrix<S>,
    pub i: Matrix<S>,
    pub j: Matrix<S>,
}

impl<S: Scalar> AdhmDatum<S> {
    pub fn new(
        m: usize,
        r: usize,
        weights: Vec<usize>,
        b1: Matrix<S>,
        b2: Matrix<S>,
        i: Matrix<S>,
        j: Matrix<S>,
    ) -> Result<Self> {
        let d = AdhmDatum { m, r, weights, b1, b2, i, j };
        d.validate()?;
        Ok(d)
    }

    /// `V = 0` with an `r`-dimensional framing.
    pub fn empty(m: usize, r: usize) -> Self {
        AdhmDatum {
            m,
            r,
            weights: Vec::new(),
            b1: Matrix::zeros(0, 0),
            b2: Matrix::zeros(0, 0),
            i: Matrix::zeros(0, r),
            j: Matrix::zeros(r, 0),
        }
    }

    /// One-dimensional V of weight `k`, everything zero, `W = 0`.
    pub fn vertex_simple(m: usize, k: usize) -> Self {
        AdhmDatum {
            m,
            r: 0,
            weights: vec![k % m],
            b1: Matrix::zeros(1, 1),
            b2: Matrix::zeros(1, 1),
            i: Matrix::zeros(1, 0),
            j: Matrix::zeros(0, 1),
        }
    }

    pub fn dim_v(&self) -> usize {
        self.weights.len()
    }

    pub fn group(&self) -> GroupSpec {
        GroupSpec::A(self.m as u32)
    }

    /// Number of basis vectors of each weight.
    pub fn weight_dims(&self) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for &w in &self.weights {
            out[w] += 1;
        }
        out
    }

    /// Basis positions of each weight, in order.
    pub fn weight_classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for (k, &w) in self.weights.iter().enumerate() {
            out[w].push(k);
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim_v();
        if self.m == 0 {
            return Err(Error::InvalidGroup("cyclic order must be >= 1".into()));
        }
        if let Some(w) = self.weights.iter().find(|&&w| w >= self.m) {
            return Err(Error::Shape(format!("weight {w} is not reduced mod {}", self.m)));
        }
        for (name, mat, shape) in [
            ("B1", &self.b1, (n, n)),
            ("B2", &self.b2, (n, n)),
            ("i", &self.i, (n, self.r)),
            ("j", &self.j, (self.r, n)),
        ] {
            if mat.shape() != shape {
                return Err(Error::Shape(format!("{name} has shape {:?}, expected {shape:?}", mat.shape())));
            }
        }
        let m = self.m;
        let w = &self.weights;
        for a in 0..n {
            for b in 0..n {
                if !self.b1[(a, b)].is_zero() && w[a] != (w[b] + 1) % m {
                    return Err(Error::Shape(format!("B1 entry ({a}, {b}) does not raise the weight by 1")));
                }
                if !self.b2[(a, b)].is_zero() && (w[a] + 1) % m != w[b] {
                    return Err(Error::Shape(format!("B2 entry ({a}, {b}) does not lower the weight by 1")));
                }
            }
            if w[a] != 0 {
                if (0..self.r).any(|k| !self.i[(a, k)].is_zero()) {
                    return Err(Error::Shape(format!("i has a component of weight {} in row {a}", w[a])));
                }
                if (0..self.r).any(|k| !self.j[(k, a)].is_zero()) {
                    return Err(Error::Shape(format!("j is nonzero on column {a} of weight {}", w[a])));
                }
            }
        }
        Ok(())
    }

    /// `V`, `W` concatenate; all maps are block diagonal.
    pub fn direct_sum(&self, other: &AdhmDatum<S>) -> Result<AdhmDatum<S>> {
        if self.m != other.m {
            return Err(Error::Shape("direct sum of data for different groups".into()));
        }
        let mut weights = self.weights.clone();
        weights.extend(&other.weights);
        Ok(AdhmDatum {
            m: self.m,
            r: self.r + other.r,
            weights,
            b1: self.b1.block_diag(&other.b1),
            b2: self.b2.block_diag(&other.b2),
            i: self.i.block_diag(&other.i),
            j: self.j.block_diag(&other.j),
        })
    }
}

/// `[B1, B2] + i j`.
pub fn adhm_residual<S: Scalar>(d: &AdhmDatum<S>) -> Matrix<S> {
    let comm = d.b1.matmul(&d.b2).sub(&d.b2.matmul(&d.b1));
    comm.add(&d.i.matmul(&d.j))
}

/// How a framed McKay arrow of a cyclic group enters the ADHM data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowRole {
    /// A block of `B1`, scaled by the arrow's ε.
    X,
    /// A block of `B2`.
    Y,
    /// Column k (0-based) of `i`.
    FramingIn(usize),
    /// Row k (0-based) of `j`.
    FramingOut(usize),
}

/// Roles of every arrow of the framed quiver of `A(m)`.
///
/// An arrow raising the vertex index by 1 is of x-type. For m = 2 both
/// arrows between the two vertices qualify; copy 0 from vertex 0 and copy 1
/// from vertex 1 are of x-type. For m = 1 loop copy 0 is x and copy 1 is y.
pub fn arrow_roles(q: &FramedQuiver) -> Result<Vec<ArrowRole>> {
    let m = match q.group() {
        GroupSpec::A(m) => m as usize,
        g => return Err(Error::Unsupported(format!("ADHM form is only implemented for cyclic groups, not {g}"))),
    };
    let base = q.base.arrows.len();
    Ok(q.arrows
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if k >= base + q.r {
                return ArrowRole::FramingOut(k - base - q.r);
            }
            if k >= base {
                return ArrowRole::FramingIn(k - base);
            }
            let (Vertex::Node(t), Vertex::Node(h)) = (a.tail, a.head) else { unreachable!() };
            let copy: usize = a.id.rsplit('_').next().and_then(|c| c.parse().ok()).unwrap_or(0);
            let is_x = match m {
                1 => copy == 0,
                2 => (t == 0) == (copy == 0),
                _ => h == (t + 1) % m,
            };
            if is_x {
                ArrowRole::X
            } else {
                ArrowRole::Y
            }
        })
        .collect())
}

/// ADHM form of a cyclic-group module. V is ordered vertex by vertex, so the
/// weights come out sorted; `W` has dimension `r · dim_∞`.
pub fn quiver_to_adhm<S: Scalar>(module: &QuiverModule<S>) -> Result<AdhmDatum<S>> {
    let q = &module.quiver;
    let roles = arrow_roles(q)?;
    let m = q.base.num_vertices();
    let dims: Vec<usize> = module.dim.v.iter().map(|&d| d as usize).collect();
    let mut offset = vec![0; m + 1];
    for k in 0..m {
        offset[k + 1] = offset[k] + dims[k];
    }
    let n = offset[m];
    let r = q.r * module.dim_at(Vertex::Infinity);
    let weights: Vec<usize> = (0..m).flat_map(|k| std::iter::repeat_n(k, dims[k])).collect();
    let mut b1 = Matrix::zeros(n, n);
    let mut b2 = Matrix::zeros(n, n);
    let mut i = Matrix::zeros(n, r);
    let mut j = Matrix::zeros(r, n);
    for (k, (a, role)) in q.arrows.iter().zip(&roles).enumerate() {
        let block = &module.maps[k];
        match *role {
            ArrowRole::X | ArrowRole::Y => {
                let (Vertex::Node(t), Vertex::Node(h)) = (a.tail, a.head) else { unreachable!() };
                let (target, sign) = if *role == ArrowRole::X { (&mut b1, a.epsilon) } else { (&mut b2, 1) };
                for row in 0..dims[h] {
                    for col in 0..dims[t] {
                        let v = block[(row, col)].clone();
                        target[(offset[h] + row, offset[t] + col)] = if sign < 0 { -v } else { v };
                    }
                }
            }
            ArrowRole::FramingIn(c) if r > 0 => {
                for row in 0..dims[0] {
                    i[(offset[0] + row, c)] = block[(row, 0)].clone();
                }
            }
            ArrowRole::FramingOut(c) if r > 0 => {
                for col in 0..dims[0] {
                    j[(c, offset[0] + col)] = block[(0, col)].clone();
                }
            }
            _ => {}
        }
    }
    AdhmDatum::new(m, r, weights, b1, b2, i, j)
}

/// Quiver form of ADHM data over the framed quiver `q`. The framing vertex
/// gets dimension 1 when `d.r == q.r` and 0 when `d.r == 0`.
pub fn adhm_to_quiver<S: Scalar>(d: &AdhmDatum<S>, q: &FramedQuiver) -> Result<QuiverModule<S>> {
    d.validate()?;
    if q.group() != d.group() {
        return Err(Error::Shape(format!("datum is for {} but the quiver is for {}", d.group(), q.group())));
    }
    let inf = if d.r == q.r {
        1
    } else if d.r == 0 {
        0
    } else {
        return Err(Error::Shape(format!("framing rank {} does not match the quiver's r = {}", d.r, q.r)));
    };
    let roles = arrow_roles(q)?;
    let classes = d.weight_classes();
    let dim = DimensionVector::new(inf, classes.iter().map(|c| c.len() as i64).collect());
    let mut maps = Vec::with_capacity(q.arrows.len());
    for (a, role) in q.arrows.iter().zip(&roles) {
        let block = match *role {
            ArrowRole::X | ArrowRole::Y => {
                let (Vertex::Node(t), Vertex::Node(h)) = (a.tail, a.head) else { unreachable!() };
                if *role == ArrowRole::X {
                    let b = d.b1.submatrix(&classes[h], &classes[t]);
                    if a.epsilon < 0 {
                        b.neg()
                    } else {
                        b
                    }
                } else {
                    d.b2.submatrix(&classes[h], &classes[t])
                }
            }
            ArrowRole::FramingIn(c) => {
                if inf == 1 {
                    d.i.submatrix(&classes[0], &[c])
                } else {
                    Matrix::zeros(classes[0].len(), 0)
                }
            }
            ArrowRole::FramingOut(c) => {
                if inf == 1 {
                    d.j.submatrix(&[c], &classes[0])
                } else {
                    Matrix::zeros(0, classes[0].len())
                }
            }
        };
        maps.push(block);
    }
    QuiverModule::new(q.clone(), dim, maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rational;
    use crate::mckay::framed_mckay_quiver;
    use crate::pi_module::is_isomorphic;
    use crate::pi_module::tests::orbit_module;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn residual_examples() {
        let d = AdhmDatum::new(1, 1, vec![0], q(&[&[0]]), q(&[&[0]]), q(&[&[1]]), q(&[&[0]])).unwrap();
        assert!(adhm_residual(&d).is_zero());
        let diag = AdhmDatum::new(
            1,
            1,
            vec![0, 0],
            q(&[&[1, 0], &[0, 2]]),
            q(&[&[3, 0], &[0, 4]]),
            q(&[&[1], &[1]]),
            q(&[&[0, 0]]),
        )
        .unwrap();
        assert!(adhm_residual(&diag).is_zero());
        let nil = AdhmDatum::new(
            1,
            0,
            vec![0, 0],
            q(&[&[0, 1], &[0, 0]]),
            q(&[&[0, 0], &[1, 0]]),
            Matrix::zeros(2, 0),
            Matrix::zeros(0, 2),
        )
        .unwrap();
        assert_eq!(adhm_residual(&nil), q(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn grading_violations_rejected() {
        // B1 must send weight 0 to weight 1
        let bad = AdhmDatum::new(
            3,
            0,
            vec![0, 2],
            q(&[&[0, 0], &[1, 0]]),
            Matrix::zeros(2, 2),
            Matrix::zeros(2, 0),
            Matrix::zeros(0, 2),
        );
        assert!(bad.is_err());
        let bad_i = AdhmDatum::new(2, 1, vec![1], q(&[&[0]]), q(&[&[0]]), q(&[&[1]]), q(&[&[0]]));
        assert!(bad_i.is_err());
    }

    #[test]
    fn roundtrip_a2_orbit() {
        let m = orbit_module();
        let d = quiver_to_adhm(&m).unwrap();
        assert_eq!(d.weights, vec![0, 1]);
        assert_eq!(d.b1, q(&[&[0, 1], &[1, 0]]));
        assert_eq!(d.b2, q(&[&[0, 2], &[2, 0]]));
        assert!(adhm_residual(&d).is_zero());
        let back = adhm_to_quiver(&d, &m.quiver).unwrap();
        assert_eq!(back, m);
        assert!(is_isomorphic(&back, &m, 0));
    }

    #[test]
    fn roundtrip_trivial_group() {
        let fq = framed_mckay_quiver(GroupSpec::A(1), 1).unwrap();
        let d = AdhmDatum::new(
            1,
            1,
            vec![0, 0],
            q(&[&[0, 0], &[1, 0]]),
            q(&[&[0, 0], &[0, 0]]),
            q(&[&[1], &[0]]),
            q(&[&[0, 0]]),
        )
        .unwrap();
        let m = adhm_to_quiver(&d, &fq).unwrap();
        assert!(m.is_pi_module(0.0));
        assert_eq!(quiver_to_adhm(&m).unwrap(), d);
    }

    #[test]
    fn unsorted_weights_and_larger_groups() {
        // A(3), V of weights (1, 0, 2), a cycle x: 0 -> 1 -> 2 -> 0 and y = 0
        let d = AdhmDatum::new(
            3,
            1,
            vec![1, 0, 2],
            q(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
            Matrix::zeros(3, 3),
            q(&[&[0], &[1], &[0]]),
            q(&[&[0, 0, 0]]),
        )
        .unwrap();
        assert!(adhm_residual(&d).is_zero());
        let fq = framed_mckay_quiver(GroupSpec::A(3), 1).unwrap();
        let m = adhm_to_quiver(&d, &fq).unwrap();
        assert!(m.is_pi_module(0.0));
        let back = adhm_to_quiver(&quiver_to_adhm(&m).unwrap(), &fq).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn residuals_agree_between_forms() {
        let fq = framed_mckay_quiver(GroupSpec::A(3), 1).unwrap();
        let d = AdhmDatum::new(
            3,
            1,
            vec![0, 1],
            q(&[&[0, 0], &[1, 0]]),
            q(&[&[0, 1], &[0, 0]]),
            q(&[&[1], &[0]]),
            q(&[&[0, 0]]),
        )
        .unwrap();
        assert!(!adhm_residual(&d).is_zero());
        let m = adhm_to_quiver(&d, &fq).unwrap();
        assert!(!m.is_pi_module(0.0));
    }

    #[test]
    fn non_cyclic_unsupported() {
        let fq = framed_mckay_quiver(GroupSpec::D(4), 1).unwrap();
        assert!(matches!(arrow_roles(&fq), Err(Error::Unsupported(_))));
    }
}
