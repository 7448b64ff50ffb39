//! Sparse multivariate polynomials under a weighted graded reverse
//! lexicographic order, with Buchberger's algorithm and staircase
//! enumeration for zero-dimensional ideals.

mod parse;

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Rational, Scalar};

pub use parse::parse_poly;

pub type Monomial = Vec<u32>;

/// Variable names together with the weights of the monomial order.
///
/// Monomials are compared by weighted degree first; ties are broken reverse
/// lexicographically, so a smaller exponent in the last variable wins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    weights: Vec<u32>,
}

impl Ring {
    pub fn new(names: &[&str], weights: &[u32]) -> Arc<Ring> {
        assert_eq!(names.len(), weights.len());
        Arc::new(Ring { names: names.iter().map(|s| s.to_string()).collect(), weights: weights.to_vec() })
    }

    /// `C[x, y]` with the standard grading and `x > y`.
    pub fn xy() -> Arc<Ring> {
        Ring::new(&["x", "y"], &[1, 1])
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, m: &[u32]) -> u32 {
        m.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| {
            for k in (0..a.len()).rev() {
                match a[k].cmp(&b[k]) {
                    Ordering::Equal => continue,
                    other => return other.reverse(),
                }
            }
            Ordering::Equal
        })
    }

    pub fn one(&self) -> Monomial {
        vec![0; self.nvars()]
    }

    pub fn var(&self, i: usize) -> Monomial {
        let mut m = self.one();
        m[i] = 1;
        m
    }

    /// All monomials of weighted degree `<= bound`, ascending in the order.
    pub fn monomials_up_to(&self, bound: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = self.one();
        self.enumerate(0, bound, &mut cur, &mut out);
        out.sort_by(|a, b| self.cmp(a, b));
        out
    }

    fn enumerate(&self, var: usize, budget: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if var == self.nvars() {
            out.push(cur.clone());
            return;
        }
        let w = self.weights[var];
        let mut e = 0;
        while e * w <= budget {
            cur[var] = e;
            self.enumerate(var + 1, budget - e * w, cur, out);
            e += 1;
        }
        cur[var] = 0;
    }
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn mono_div(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A polynomial with terms sorted in decreasing monomial order.
#[derive(Clone)]
pub struct Poly<S> {
    ring: Arc<Ring>,
    terms: Vec<(Monomial, S)>,
}

impl<S: PartialEq> PartialEq for Poly<S> {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl<S: Scalar> Poly<S> {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        Poly { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: S) -> Self {
        Poly::from_terms(ring, vec![(ring.one(), c)])
    }

    pub fn monomial(ring: &Arc<Ring>, m: Monomial, c: S) -> Self {
        Poly::from_terms(ring, vec![(m, c)])
    }

    /// Combines like terms and drops zeros.
    pub fn from_terms(ring: &Arc<Ring>, mut terms: Vec<(Monomial, S)>) -> Self {
        terms.sort_by(|a, b| ring.cmp(&b.0, &a.0));
        let mut out: Vec<(Monomial, S)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    let cur = std::mem::replace(lc, S::zero());
                    *lc = cur + c;
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, S)> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    /// Largest weighted degree of a term.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| self.ring.degree(m)).max()
    }

    pub fn add(&self, other: &Poly<S>) -> Poly<S> {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Poly::from_terms(&self.ring, terms)
    }

    pub fn sub(&self, other: &Poly<S>) -> Poly<S> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly<S> {
        Poly { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, c: &S) -> Poly<S> {
        Poly::from_terms(&self.ring, self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())).collect())
    }

    pub fn mul_term(&self, m: &[u32], c: &S) -> Poly<S> {
        Poly::from_terms(
            &self.ring,
            self.terms.iter().map(|(tm, a)| (mono_mul(tm, m), a.clone() * c.clone())).collect(),
        )
    }

    pub fn mul(&self, other: &Poly<S>) -> Poly<S> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                terms.push((mono_mul(ma, mb), a.clone() * b.clone()));
            }
        }
        Poly::from_terms(&self.ring, terms)
    }

    pub fn monic(&self) -> Poly<S> {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    pub fn coeff(&self, m: &[u32]) -> S {
        self.terms.iter().find(|(tm, _)| tm.as_slice() == m).map_or_else(S::zero, |(_, c)| c.clone())
    }

    pub fn eval(&self, point: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (v, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = t * v.clone();
                }
            }
            acc + t
        })
    }

    /// Full normal form modulo `basis` (every term reduced).
    pub fn reduce(&self, basis: &[Poly<S>]) -> Poly<S> {
        let mut p = self.clone();
        let mut remainder: Vec<(Monomial, S)> = Vec::new();
        while let Some((lm, lc)) = p.terms.first().cloned() {
            match basis.iter().find(|g| g.leading_monomial().is_some_and(|gl| divides(gl, &lm))) {
                Some(g) => {
                    let (gl, gc) = g.leading().expect("nonzero divisor");
                    let factor = lc * gc.inv().expect("nonzero");
                    let shifted = g.mul_term(&mono_div(&lm, gl), &factor);
                    let mut next = p.sub(&shifted);
                    // guard against float residue at the cancelled term
                    next.terms.retain(|(m, _)| *m != lm);
                    p = next;
                }
                None => {
                    remainder.push((lm.clone(), lc));
                    p.terms.remove(0);
                }
            }
        }
        Poly::from_terms(&self.ring, remainder)
    }

    fn s_poly(&self, other: &Poly<S>) -> Poly<S> {
        let (la, ca) = self.leading().expect("nonzero");
        let (lb, cb) = other.leading().expect("nonzero");
        let l = lcm(la, lb);
        let fa = self.mul_term(&mono_div(&l, la), &ca.inv().expect("nonzero"));
        let fb = other.mul_term(&mono_div(&l, lb), &cb.inv().expect("nonzero"));
        let mut s = fa.sub(&fb);
        s.terms.retain(|(m, _)| *m != l);
        s
    }

    /// Maps the polynomial into another ring by substituting a monomial image
    /// for every monomial.
    pub fn substitute_monomials(&self, target: &Arc<Ring>, image: impl Fn(&[u32]) -> Monomial) -> Poly<S> {
        Poly::from_terms(target, self.terms.iter().map(|(m, c)| (image(m), c.clone())).collect())
    }
}

impl<S: fmt::Debug> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.terms)
    }
}

impl Poly<Rational> {
    /// Canonical text form, e.g. `x^2*y - 3/2*x + 1`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c.clone() } else { c.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = &self.ring.names[i];
                    if e == 1 {
                        name.clone()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = if abs.0.is_integer() { abs.0.numer().to_string() } else { abs.0.to_string() };
            if vars.is_empty() {
                out.push_str(&coeff);
            } else {
                if coeff != "1" {
                    out.push_str(&coeff);
                    out.push('*');
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }
}

/// Reduced Gröbner basis, monic, sorted by increasing leading monomial.
pub fn groebner<S: Scalar>(generators: &[Poly<S>]) -> Vec<Poly<S>> {
    let mut basis: Vec<Poly<S>> = generators.iter().filter(|g| !g.is_zero()).map(Poly::monic).collect();
    if basis.is_empty() {
        return basis;
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (li, lj) = (basis[i].leading_monomial().unwrap(), basis[j].leading_monomial().unwrap());
        if li.iter().zip(lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = basis[i].s_poly(&basis[j]).reduce(&basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic());
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimalise
    let mut keep: Vec<Poly<S>> = Vec::new();
    for (idx, g) in basis.iter().enumerate() {
        let lm = g.leading_monomial().unwrap();
        let redundant = basis.iter().enumerate().any(|(o, h)| {
            let hl = h.leading_monomial().unwrap();
            o != idx && divides(hl, lm) && (hl != lm || o < idx)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce
    let reduced: Vec<Poly<S>> = (0..keep.len())
        .map(|i| {
            let others: Vec<Poly<S>> =
                keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            let (lm, lc) = keep[i].leading().unwrap().clone();
            let tail = Poly::from_terms(keep[i].ring(), keep[i].terms[1..].to_vec()).reduce(&others);
            Poly::monomial(keep[i].ring(), lm, lc).add(&tail).monic()
        })
        .collect();
    let mut reduced = reduced;
    let ring = reduced[0].ring().clone();
    reduced.sort_by(|a, b| ring.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    reduced
}

/// Standard monomials of a zero-dimensional Gröbner basis, ascending.
///
/// Fails when some variable has no pure power among the leading monomials,
/// or when more than `limit` monomials are found.
pub fn staircase<S: Scalar>(ring: &Arc<Ring>, basis: &[Poly<S>], limit: usize) -> Result<Vec<Monomial>> {
    let leads: Vec<&Monomial> = basis.iter().filter_map(Poly::leading_monomial).collect();
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return Ok(Vec::new());
    }
    for v in 0..ring.nvars() {
        let pure = leads.iter().any(|l| l[v] > 0 && l.iter().enumerate().all(|(k, &e)| k == v || e == 0));
        if !pure {
            return Err(Error::InfiniteColength(limit));
        }
    }
    let mut out = vec![ring.one()];
    let mut frontier = 0;
    while frontier < out.len() {
        let m = out[frontier].clone();
        frontier += 1;
        for v in 0..ring.nvars() {
            let mut next = m.clone();
            next[v] += 1;
            if leads.iter().any(|l| divides(l, &next)) || out.contains(&next) {
                continue;
            }
            out.push(next);
            if out.len() > limit {
                return Err(Error::InfiniteColength(limit));
            }
        }
    }
    out.sort_by(|a, b| ring.cmp(a, b));
    Ok(out)
}
