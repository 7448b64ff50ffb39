use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::pi_module::QuiverModule;
use crate::stability::{c_plus_representative, is_stable};

/// `dim ker dμ - (Σ_p v_p² - 1)`, the dimension of the quiver variety at a
/// module with free `G(v)/C^×` action.
///
/// `dμ` is the linearisation of the preprojective relations in all arrow
/// entries: `X ↦ Σ_{head(a)=p} ε(a)(X_a B_ā + B_a X_ā)` at every vertex p.
pub fn tangent_dimension<S: Scalar>(m: &QuiverModule<S>) -> Result<i64> {
    if !is_stable(m, &c_plus_representative(&m.dim.v))? {
        return Err(Error::Precondition("module is not stable for C+".into()));
    }
    let arrows = &m.quiver.arrows;
    let mut offset = Vec::with_capacity(arrows.len());
    let mut unknowns = 0;
    for b in &m.maps {
        offset.push(unknowns);
        unknowns += b.rows() * b.cols();
    }
    let dims: Vec<usize> = m.quiver.vertices().map(|v| m.dim_at(v)).collect();
    let mut row_offset = Vec::with_capacity(dims.len());
    let mut equations = 0;
    for &d in &dims {
        row_offset.push(equations);
        equations += d * d;
    }
    let mut jac = Matrix::<S>::zeros(equations, unknowns);
    for (k, a) in arrows.iter().enumerate() {
        let rev = a.reverse;
        let (ba, bb) = (&m.maps[k], &m.maps[rev]);
        let h = a.head.position();
        let d = dims[h];
        let sign = S::from_i64(a.epsilon as i64);
        let tail_dim = ba.cols();
        for r in 0..d {
            for c in 0..d {
                let row = row_offset[h] + r * d + c;
                // X_a[r][s] B_ā[s][c]
                for s in 0..tail_dim {
                    let col = offset[k] + r * tail_dim + s;
                    jac[(row, col)] = jac[(row, col)].clone() + sign.clone() * bb[(s, c)].clone();
                }
                // B_a[r][s] X_ā[s][c]
                for s in 0..tail_dim {
                    let col = offset[rev] + s * d + c;
                    jac[(row, col)] = jac[(row, col)].clone() + sign.clone() * ba[(r, s)].clone();
                }
            }
        }
    }
    let kernel = unknowns - jac.rank();
    let group: usize = dims.iter().map(|d| d * d).sum::<usize>() - 1;
    Ok(kernel as i64 - group as i64)
}
