//! Descent of torus-weighted ideals of `C[x, y]` to the invariant ring
//! `C[x, y]^Γ = C[u, v, w]/(uv - w^m)` of a cyclic group, `I ↦ I ∩ C[x, y]^Γ`.
//!
//! Invariant polynomials are written in the ring `C[w, u, v]` with weights
//! `(2, m, m)`, so that the relation has leading term `w^m` and every
//! computation takes place modulo the relation by adding it to the ideal.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rational, Scalar};
use crate::mckay::GroupSpec;
use crate::monad::{adhm_to_ideal, monomial_weight, EquivariantIdeal};
use crate::pi_module::{quiver_to_adhm, QuiverModule};
use crate::poly::{groebner, staircase, Monomial, Poly, Ring};
use crate::stability::{concentrate, is_semistable, r_equivalent, theta_zero_for};

const STAIRCASE_LIMIT: usize = 10_000;

/// `u = x^m`, `v = y^m`, `w = xy` subject to `uv = w^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRingPresentation {
    pub m: usize,
}

impl InvariantRingPresentation {
    /// `C[w, u, v]` with the weights making `w^m` the leading term of the relation.
    pub fn ring(&self) -> Arc<Ring> {
        let m = self.m as u32;
        Ring::new(&["w", "u", "v"], &[2, m, m])
    }

    /// `w^m - uv`.
    pub fn relation<S: Scalar>(&self) -> Poly<S> {
        let ring = self.ring();
        Poly::from_terms(&ring, vec![(vec![self.m as u32, 0, 0], S::one()), (vec![0, 1, 1], -S::one())])
    }

    /// Image of `w^a u^b v^c` in `C[x, y]`.
    pub fn embed_monomial(&self, mono: &[u32]) -> Monomial {
        let m = self.m as u32;
        vec![mono[0] + m * mono[1], mono[0] + m * mono[2]]
    }

    pub fn embed<S: Scalar>(&self, p: &Poly<S>) -> Poly<S> {
        p.substitute_monomials(&Ring::xy(), |mono| self.embed_monomial(mono))
    }

    /// A preimage of the weight-0 monomial `x^a y^b`: `w^k u^(a-k)/m` or
    /// `w^k v^(b-k)/m` with `k = min(a, b)`.
    pub fn lift_monomial(&self, mono: &[u32]) -> Monomial {
        let m = self.m as u32;
        let k = mono[0].min(mono[1]);
        vec![k, (mono[0] - k) / m, (mono[1] - k) / m]
    }

    /// Whether `uv - w^m` vanishes after substitution.
    pub fn relation_holds(&self) -> bool {
        self.embed(&self.relation::<Rational>()).is_zero()
    }
}

pub fn invariant_presentation(m: usize) -> Result<InvariantRingPresentation> {
    if m == 0 {
        return Err(Error::InvalidGroup("cyclic order must be >= 1".into()));
    }
    Ok(InvariantRingPresentation { m })
}

/// An ideal of the invariant ring, stored by the reduced Gröbner basis of its
/// preimage in `C[w, u, v]` (which contains the relation).
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantIdeal<S> {
    pub presentation: InvariantRingPresentation,
    /// Reduced basis elements that are not multiples of the relation.
    pub generators: Vec<Poly<S>>,
    basis: Vec<Poly<S>>,
    pub staircase: Vec<Monomial>,
}

impl<S: Scalar> InvariantIdeal<S> {
    pub fn new(presentation: InvariantRingPresentation, generators: Vec<Poly<S>>) -> Result<Self> {
        let ring = presentation.ring();
        let relation = presentation.relation::<S>();
        let mut all = generators;
        all.push(relation.clone());
        let basis = groebner(&all);
        let staircase = staircase(&ring, &basis, STAIRCASE_LIMIT)?;
        let rel_basis = [relation];
        let generators = basis.iter().filter(|g| !g.reduce(&rel_basis).is_zero()).cloned().collect();
        Ok(InvariantIdeal { presentation, generators, basis, staircase })
    }

    pub fn colength(&self) -> usize {
        self.staircase.len()
    }

    pub fn contains(&self, p: &Poly<S>) -> bool {
        p.reduce(&self.basis).is_zero()
    }

    pub fn is_subset_of(&self, other: &InvariantIdeal<S>) -> bool {
        self.presentation == other.presentation && self.generators.iter().all(|g| other.contains(g))
    }

    /// Every generator embeds into `source` as a weight-0 polynomial.
    pub fn embeds_into(&self, source: &EquivariantIdeal<S>) -> bool {
        self.generators.iter().all(|g| {
            let e = self.presentation.embed(g);
            e.terms().iter().all(|(mono, _)| monomial_weight(mono, self.presentation.m) == 0) && source.contains(&e)
        })
    }
}

impl InvariantIdeal<Rational> {
    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(Poly::to_text).collect()
    }
}

pub fn colength<S: Scalar>(j: &InvariantIdeal<S>) -> usize {
    j.colength()
}

/// `I ∩ C[x, y]^Γ`, computed from the weight-0 part of `I` in degrees
/// `<= colength + m` and confirmed to be unchanged at the next `m` degrees.
pub fn descend_ideal<S: Scalar>(ideal: &EquivariantIdeal<S>) -> Result<InvariantIdeal<S>> {
    let bound = ideal.colength() + ideal.m;
    let j = descend_with_bound(ideal, bound)?;
    let check = descend_with_bound(ideal, bound + ideal.m)?;
    if check.staircase != j.staircase {
        return Err(Error::Precondition(format!("weight-0 intersection did not stabilise at degree {bound}")));
    }
    Ok(j)
}

pub fn descend_with_bound<S: Scalar>(ideal: &EquivariantIdeal<S>, bound: usize) -> Result<InvariantIdeal<S>> {
    let pres = invariant_presentation(ideal.m)?;
    let xy = Ring::xy();
    let monos: Vec<Monomial> =
        xy.monomials_up_to(bound as u32).into_iter().filter(|mono| monomial_weight(mono, ideal.m) == 0).collect();
    let columns: Vec<Vec<S>> =
        monos.iter().map(|mono| ideal.coordinates(&Poly::monomial(&xy, mono.clone(), S::one()))).collect();
    let target = pres.ring();
    if ideal.colength() == 0 {
        return InvariantIdeal::new(pres, vec![Poly::constant(&target, S::one())]);
    }
    let mut candidates: Vec<Poly<S>> = Matrix::from_columns(ideal.colength(), &columns)
        .kernel_basis()
        .into_iter()
        .map(|kernel| {
            let terms = monos.iter().zip(kernel).map(|(mono, c)| (pres.lift_monomial(mono), c)).collect();
            Poly::from_terms(&target, terms)
        })
        .collect();
    candidates.sort_by(|a, b| target.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    // low-degree elements usually generate; skip candidates already in the ideal
    let mut basis = vec![pres.relation::<S>()];
    for c in candidates {
        if !c.reduce(&basis).is_zero() {
            basis.push(c);
            basis = groebner(&basis);
        }
    }
    InvariantIdeal::new(pres, basis)
}

/// Whether two R-equivalent θ₀-semistable rank-one modules over a cyclic
/// group descend to the same ideal of the invariant ring.
pub fn d_invariance_check<S: Scalar>(m1: &QuiverModule<S>, m2: &QuiverModule<S>, seed: u64) -> Result<bool> {
    for m in [m1, m2] {
        if !matches!(m.quiver.group(), GroupSpec::A(_)) {
            return Err(Error::Unsupported("descent needs a cyclic group".into()));
        }
        if m.quiver.r != 1 || m.dim.inf != 1 {
            return Err(Error::Precondition("descent needs rank one and dim at infinity 1".into()));
        }
        if !is_semistable(m, &theta_zero_for(m))? {
            return Err(Error::Precondition("module is not semistable for theta_0".into()));
        }
    }
    if !r_equivalent(m1, m2, seed)? {
        return Err(Error::Precondition("modules are not R-equivalent".into()));
    }
    let descend = |m: &QuiverModule<S>| -> Result<InvariantIdeal<S>> {
        let ideal = adhm_to_ideal(&quiver_to_adhm(&concentrate(m)?)?, None)?;
        descend_ideal(&ideal)
    };
    let (a, b) = (descend(m1)?, descend(m2)?);
    Ok(a.staircase == b.staircase && a.generators == b.generators)
}
