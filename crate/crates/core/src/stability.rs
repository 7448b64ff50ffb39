//! Stability for parameters given by a positivity set, concentrated modules
//! and S/R-equivalence at θ₀.
//!
//! For θ with `θ_i >= 0` on the Dynkin vertices and `θ(1, v) = 0`, a
//! submodule U with `U_∞ = 0` has `θ(U) = Σ θ_i u_i >= 0`, with equality
//! exactly when U lives on the zero set Z of θ. A proper submodule with
//! `U_∞ ≠ 0` has `θ(U) = -Σ θ_i (v_i - u_i) <= 0`, strictly negative unless
//! `u_i = v_i` on the positivity set. Hence
//!
//! * M is θ-stable iff ∞ generates M and no nonzero submodule lives on Z;
//! * M is θ-semistable iff the submodule generated by ∞ is full on the
//!   positivity set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational, Scalar, DEFAULT_TOL};
use crate::mckay::{DimensionVector, Vertex};
use crate::pi_module::{is_isomorphic, max_submodule_supported, submodule_generated, QuiverModule, Subspaces};

/// A stability parameter `θ = (θ_∞, θ_0, …, θ_s)` with `θ_i >= 0` on the
/// Dynkin vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityParameter {
    pub theta_inf: Rational,
    pub theta: Vec<Rational>,
    pub positivity_set: Vec<usize>,
}

impl StabilityParameter {
    /// Builds θ from Dynkin values, balancing `θ_∞` against `(1, v)`.
    pub fn balanced(theta: Vec<Rational>, v: &[i64]) -> Result<Self> {
        if theta.len() != v.len() {
            return Err(Error::Shape(format!("{} theta values for {} vertices", theta.len(), v.len())));
        }
        if theta.iter().any(Rational::is_negative) {
            return Err(Error::Unsupported("theta must be nonnegative on Dynkin vertices".into()));
        }
        let total = theta.iter().zip(v).fold(Rational::zero(), |acc, (t, &d)| acc + t.clone() * Rational::integer(d));
        let positivity_set = theta.iter().enumerate().filter(|(_, t)| t.is_positive()).map(|(i, _)| i).collect();
        Ok(StabilityParameter { theta_inf: -total, theta, positivity_set })
    }

    /// Checks sign pattern and the cached positivity set.
    pub fn validate(&self) -> Result<()> {
        if self.theta.iter().any(Rational::is_negative) {
            return Err(Error::Unsupported("theta must be nonnegative on Dynkin vertices".into()));
        }
        let expected: Vec<usize> =
            self.theta.iter().enumerate().filter(|(_, t)| t.is_positive()).map(|(i, _)| i).collect();
        if expected != self.positivity_set {
            return Err(Error::Invalid(format!(
                "positivity_set {:?} does not match theta (expected {expected:?})",
                self.positivity_set
            )));
        }
        Ok(())
    }

    pub fn zero_set(&self) -> Vec<Vertex> {
        (0..self.theta.len()).filter(|i| !self.positivity_set.contains(i)).map(Vertex::Node).collect()
    }

    /// `Σ θ_i d_i`, including the framing vertex.
    pub fn theta_of(&self, d: &DimensionVector) -> Rational {
        self.theta.iter().zip(&d.v).fold(self.theta_inf.clone() * Rational::integer(d.inf), |acc, (t, &x)| {
            acc + t.clone() * Rational::integer(x)
        })
    }

    /// Whether θ is positive on every Dynkin vertex.
    pub fn in_c_plus(&self) -> bool {
        self.theta.iter().all(Rational::is_positive)
    }
}

/// `θ₀ = (-n, 1, 0, …, 0)` on a quiver with `nodes` Dynkin vertices.
pub fn theta_zero(n: i64, nodes: usize) -> StabilityParameter {
    let mut theta = vec![Rational::zero(); nodes];
    theta[0] = Rational::integer(1);
    StabilityParameter { theta_inf: Rational::integer(-n), theta, positivity_set: vec![0] }
}

/// θ with `θ_i = 1` on every Dynkin vertex.
pub fn c_plus_representative(v: &[i64]) -> StabilityParameter {
    StabilityParameter::balanced(vec![Rational::integer(1); v.len()], v).expect("positive theta")
}

/// θ with `θ_i = 1` on `set` and 0 elsewhere.
pub fn theta_i(set: &[usize], v: &[i64]) -> Result<StabilityParameter> {
    if let Some(&bad) = set.iter().find(|&&i| i >= v.len()) {
        return Err(Error::Shape(format!("vertex {bad} is out of range")));
    }
    let theta = (0..v.len()).map(|i| Rational::integer(set.contains(&i) as i64)).collect();
    StabilityParameter::balanced(theta, v)
}

/// The submodule generated by the framing vertex.
pub fn framing_generated<S: Scalar>(m: &QuiverModule<S>) -> Result<Subspaces<S>> {
    let mut seeds = Subspaces::zero(m);
    seeds[0] = Matrix::identity(m.dim_at(Vertex::Infinity));
    submodule_generated(m, &seeds)
}

fn check_inputs<S: Scalar>(m: &QuiverModule<S>, t: &StabilityParameter) -> Result<()> {
    m.validate()?;
    t.validate()?;
    m.require_pi_module(DEFAULT_TOL)?;
    if m.dim.inf != 1 {
        return Err(Error::Precondition("stability is decided for modules with dim_inf = 1".into()));
    }
    if t.theta.len() != m.dim.v.len() {
        return Err(Error::Shape(format!(
            "theta has {} entries, module has {} vertices",
            t.theta.len(),
            m.dim.v.len()
        )));
    }
    let pairing = t.theta_of(&m.dim);
    if !pairing.is_zero() {
        return Err(Error::Precondition(format!("theta(dim M) = {pairing}, expected 0")));
    }
    Ok(())
}

pub fn is_stable<S: Scalar>(m: &QuiverModule<S>, t: &StabilityParameter) -> Result<bool> {
    check_inputs(m, t)?;
    let generated = framing_generated(m)?;
    if generated.dimension_vector() != m.dim {
        return Ok(false);
    }
    Ok(max_submodule_supported(m, &t.zero_set())?.is_zero())
}

pub fn is_semistable<S: Scalar>(m: &QuiverModule<S>, t: &StabilityParameter) -> Result<bool> {
    check_inputs(m, t)?;
    let generated = framing_generated(m)?.dimension_vector();
    Ok(t.positivity_set.iter().all(|&i| generated.v[i] == m.dim.v[i]))
}

/// θ₀ for the module's own dimension vector.
pub fn theta_zero_for<S: Scalar>(m: &QuiverModule<S>) -> StabilityParameter {
    theta_zero(m.dim.v[0], m.dim.v.len())
}

fn require_theta0_semistable<S: Scalar>(m: &QuiverModule<S>) -> Result<()> {
    if !is_semistable(m, &theta_zero_for(m))? {
        return Err(Error::Precondition("module is not theta_0-semistable".into()));
    }
    Ok(())
}

/// The concentrated module: the part generated by ∞, modulo its largest
/// submodule living on the Dynkin vertices other than 0.
pub fn concentrate<S: Scalar>(m: &QuiverModule<S>) -> Result<QuiverModule<S>> {
    require_theta0_semistable(m)?;
    let mut current = m.restrict(&framing_generated(m)?)?;
    let zone: Vec<Vertex> = (1..m.dim.v.len()).map(Vertex::Node).collect();
    loop {
        let k = max_submodule_supported(&current, &zone)?;
        if k.is_zero() {
            return Ok(current);
        }
        current = current.quotient(&k)?;
    }
}

/// `(concentrate(m), dim m - dim concentrate(m))`; the second entry counts
/// the vertex simples in the θ₀-polystable representative.
pub fn polystable_theta0<S: Scalar>(m: &QuiverModule<S>) -> Result<(QuiverModule<S>, DimensionVector)> {
    let con = concentrate(m)?;
    let rest = m.dim.sub(&con.dim);
    Ok((con, rest))
}

pub fn r_equivalent<S: Scalar>(m: &QuiverModule<S>, n: &QuiverModule<S>, seed: u64) -> Result<bool> {
    Ok(is_isomorphic(&concentrate(m)?, &concentrate(n)?, seed))
}

pub fn s_equivalent<S: Scalar>(m: &QuiverModule<S>, n: &QuiverModule<S>, seed: u64) -> Result<bool> {
    Ok(m.dim == n.dim && r_equivalent(m, n, seed)?)
}

/// `dim M <= (1, n δ)` with `n = dim_0 M`.
pub fn dimension_bound_check<S: Scalar>(m: &QuiverModule<S>) -> bool {
    let n = m.dim.v[0];
    let bound = DimensionVector::new(1, m.quiver.delta().v.iter().map(|d| d * n).collect());
    m.dim.le(&bound)
}
