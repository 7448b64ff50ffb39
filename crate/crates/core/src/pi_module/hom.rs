use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::QuiverModule;
use crate::linalg::{Matrix, Scalar};
use crate::mckay::Vertex;

/// A module homomorphism: one matrix per vertex position, `g_p: M_p → N_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleHom<S> {
    pub maps: Vec<Matrix<S>>,
}

impl<S: Scalar> ModuleHom<S> {
    /// Whether `g_head · B_a = B'_a · g_tail` for every arrow.
    pub fn intertwines(&self, m: &QuiverModule<S>, n: &QuiverModule<S>) -> bool {
        m.quiver.arrows.iter().enumerate().all(|(k, a)| {
            let lhs = self.maps[a.head.position()].matmul(&m.maps[k]);
            let rhs = n.maps[k].matmul(&self.maps[a.tail.position()]);
            let diff = lhs.sub(&rhs);
            if S::EXACT {
                diff.is_zero()
            } else {
                diff.max_magnitude() <= crate::linalg::DEFAULT_TOL
            }
        })
    }

    /// Invertible at every vertex.
    pub fn is_isomorphism(&self) -> bool {
        self.maps.iter().all(|g| g.rows() == g.cols() && g.rank() == g.rows())
    }

    fn combine(basis: &[ModuleHom<S>], coeffs: &[S]) -> ModuleHom<S> {
        let mut maps: Vec<Matrix<S>> = basis[0].maps.iter().map(|g| Matrix::zeros(g.rows(), g.cols())).collect();
        for (h, c) in basis.iter().zip(coeffs) {
            for (acc, g) in maps.iter_mut().zip(&h.maps) {
                *acc = acc.add(&g.scale(c));
            }
        }
        ModuleHom { maps }
    }
}

/// Basis of `Hom(m, n)`, the solution space of the intertwining equations.
pub fn hom_space<S: Scalar>(m: &QuiverModule<S>, n: &QuiverModule<S>) -> Vec<ModuleHom<S>> {
    assert_eq!(m.quiver, n.quiver, "hom_space needs modules over the same quiver");
    let vertices: Vec<Vertex> = m.quiver.vertices().collect();
    // unknown g_p[r][c] sits at offset[p] + r * dim_m(p) + c
    let mut offset = Vec::with_capacity(vertices.len());
    let mut total = 0;
    for &v in &vertices {
        offset.push(total);
        total += n.dim_at(v) * m.dim_at(v);
    }
    let mut rows: Vec<Vec<S>> = Vec::new();
    for (k, a) in m.quiver.arrows.iter().enumerate() {
        let (t, h) = (a.tail, a.head);
        let (mt, mh, nt, nh) = (m.dim_at(t), m.dim_at(h), n.dim_at(t), n.dim_at(h));
        let (bm, bn) = (&m.maps[k], &n.maps[k]);
        // (g_h B_a - B'_a g_t)[r][c] = 0 for r < nh, c < mt
        for r in 0..nh {
            for c in 0..mt {
                let mut eq = vec![S::zero(); total];
                for s in 0..mh {
                    let idx = offset[h.position()] + r * mh + s;
                    eq[idx] = eq[idx].clone() + bm[(s, c)].clone();
                }
                for s in 0..nt {
                    let idx = offset[t.position()] + s * mt + c;
                    eq[idx] = eq[idx].clone() - bn[(r, s)].clone();
                }
                rows.push(eq);
            }
        }
    }
    let system = if rows.is_empty() { Matrix::zeros(0, total) } else { Matrix::from_rows(rows) };
    system
        .kernel_basis()
        .into_iter()
        .map(|vec| {
            let maps = vertices
                .iter()
                .enumerate()
                .map(|(p, &v)| {
                    let (rn, cm) = (n.dim_at(v), m.dim_at(v));
                    Matrix::from_fn(rn, cm, |r, c| vec[offset[p] + r * cm + c].clone())
                })
                .collect();
            ModuleHom { maps }
        })
        .collect()
}

/// Decides `m ≅ n`.
///
/// With a one-dimensional hom space (the case of stable modules) the single
/// generator is tested. Otherwise 32 random combinations of the hom basis,
/// drawn from `seed`, are tested; a `false` answer is then only certain when
/// the dimensions differ or the hom space is empty.
pub fn is_isomorphic<S: Scalar>(m: &QuiverModule<S>, n: &QuiverModule<S>, seed: u64) -> bool {
    if m.quiver != n.quiver || m.dim != n.dim {
        return false;
    }
    let basis = hom_space(m, n);
    match basis.len() {
        0 => m.total_dim() == 0,
        1 => basis[0].is_isomorphism(),
        len => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..32).any(|_| {
                let coeffs: Vec<S> = (0..len).map(|_| S::from_i64(rng.random_range(-50..=50))).collect();
                ModuleHom::combine(&basis, &coeffs).is_isomorphism()
            })
        }
    }
}
