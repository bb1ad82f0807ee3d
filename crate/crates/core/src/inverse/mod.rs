//! The (b,c)-inverse and related outer inverses.
//!
//! Everything here is generic over [`InverseBackend`], so the same code runs
//! on finite rings, rational matrices and float matrices. Candidates produced
//! by a backend are never trusted: [`bc_inverse`] always re-checks the
//! defining equations through [`verify_bc_inverse`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;

mod backends;
mod related;
mod split;
mod structure;

pub use backends::kron;
pub use related::{
    annihilator_inverse, bott_duffin_inverse, group_inverse, hybrid_inverse, outer_inverse_pql,
};
pub use split::{bott_duffin_split_inverse, reverse_order_law_check, RolOutcome};
pub use structure::{
    corner_unit_membership, decompose_bc_invertible, inverse_of_inverse, perturb_invariant,
    scale_corner, unit_consistency, CornerUnit, Decomposition, UnitConsistency,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Solve the corner equations `p = z q a p`, `q = q a p z` for `z ∈ bRc`.
    CornerSolve,
    /// `B (C_r a B)^{-1} C_r` from rank factorizations of `b` and `c`.
    Factor,
    /// `v (a v)^#` with `v` from [`InverseBackend::build_v`].
    Group,
    /// Search the whole ring (finite backends only).
    Exhaustive,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::CornerSolve, Method::Factor, Method::Group, Method::Exhaustive];

    pub fn name(self) -> &'static str {
        match self {
            Method::CornerSolve => "corner",
            Method::Factor => "factor",
            Method::Group => "group",
            Method::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s || (s == "corner-solve" && *m == Method::CornerSolve))
            .ok_or_else(|| Error::Parse(format!("unknown method `{s}`")))
    }
}

/// `(b, c)` with chosen inner inverses `g`, `h` and the idempotents
/// `p = b g`, `q = h c`.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerFrame<E> {
    pub b: E,
    pub c: E,
    pub g: E,
    pub h: E,
    pub p: E,
    pub q: E,
}

impl<E: Clone + std::fmt::Display> CornerFrame<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, b: E, c: E, g: E, h: E) -> Result<Self> {
        if !ring.is_inner_inverse(&b, &g) {
            return Err(Error::PreconditionFailed(format!("g = {g} is not an inner inverse of b = {b}")));
        }
        if !ring.is_inner_inverse(&c, &h) {
            return Err(Error::PreconditionFailed(format!("h = {h} is not an inner inverse of c = {c}")));
        }
        let p = ring.mul(&b, &g);
        let q = ring.mul(&h, &c);
        Ok(CornerFrame { b, c, g, h, p, q })
    }

    /// Uses the first inner inverse the ring offers for each of `b`, `c`.
    pub fn canonical<R: Ring<Elem = E>>(ring: &R, b: E, c: E) -> Result<Self> {
        let g = ring.inner_inverses(&b)?.swap_remove(0);
        let h = ring.inner_inverses(&c)?.swap_remove(0);
        Self::new(ring, b, c, g, h)
    }

    /// The frame `(p, q, p, q)` of two idempotents, each its own inner inverse.
    pub fn idempotent<R: Ring<Elem = E>>(ring: &R, p: E, q: E) -> Result<Self> {
        for (name, e) in [("p", &p), ("q", &q)] {
            if !ring.is_idempotent(e) {
                return Err(Error::PreconditionFailed(format!("{name} = {e} is not idempotent")));
            }
        }
        Ok(CornerFrame { b: p.clone(), c: q.clone(), g: p.clone(), h: q.clone(), p, q })
    }

    /// The `(q, p)` frame in which the roles of the idempotents are exchanged.
    pub fn swapped(&self) -> Self {
        let (p, q) = (self.p.clone(), self.q.clone());
        CornerFrame { b: q.clone(), c: p.clone(), g: q.clone(), h: p.clone(), p: q, q: p }
    }

    /// The frame `(c^T, b^T)` with inner inverses `h^T`, `g^T`, when the
    /// ring has a transpose.
    pub fn transposed<R: Ring<Elem = E>>(&self, ring: &R) -> Option<Self> {
        let t = |x: &E| ring.transpose(x);
        Some(CornerFrame {
            b: t(&self.c)?,
            c: t(&self.b)?,
            g: t(&self.h)?,
            h: t(&self.g)?,
            p: t(&self.q)?,
            q: t(&self.p)?,
        })
    }

    pub fn map<F: Fn(&E) -> E>(&self, f: F) -> Self {
        CornerFrame {
            b: f(&self.b),
            c: f(&self.c),
            g: f(&self.g),
            h: f(&self.h),
            p: f(&self.p),
            q: f(&self.q),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub name: &'static str,
    pub norm: f64,
    pub scale: f64,
    pub ok: bool,
}

/// A candidate `y` with the residual of every defining equation.
#[derive(Debug, Clone)]
pub struct BcCertificate<E> {
    pub y: E,
    pub residuals: Vec<Residual>,
    pub verdict: bool,
}

impl<E> BcCertificate<E> {
    pub fn worst(&self) -> Option<&Residual> {
        self.residuals
            .iter()
            .filter(|r| !r.ok)
            .chain(self.residuals.iter())
            .max_by(|a, b| (!a.ok, a.norm).partial_cmp(&(!b.ok, b.norm)).unwrap_or(std::cmp::Ordering::Equal))
    }
}

/// Residual `r` judged against the magnitude `scale`.
pub fn residual<R: Ring>(ring: &R, name: &'static str, r: &R::Elem, scale: f64) -> Residual {
    Residual { name, norm: ring.norm(r), scale, ok: ring.residual_ok(r, scale) }
}

/// Checks `y` against the definition: `p y = y = y q` together with
/// `y = b (g y h) c` for membership in `bRy ∩ yRc`, then `y a b = b`,
/// `c a y = c`, and the outer law `y a y = y`.
pub fn verify_bc_inverse<R: Ring>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
    y: &R::Elem,
) -> BcCertificate<R::Elem> {
    let n = |x: &R::Elem| ring.norm(x);
    let (ny, na) = (n(y), n(a));
    let f = frame;
    let member = ring.product(&[&f.b, &f.g, y, &f.h, &f.c]);
    let residuals = vec![
        residual(ring, "y - p y", &ring.sub(y, &ring.mul(&f.p, y)), ny * (1.0 + n(&f.p))),
        residual(ring, "y - y q", &ring.sub(y, &ring.mul(y, &f.q)), ny * (1.0 + n(&f.q))),
        residual(
            ring,
            "y - b g y h c",
            &ring.sub(y, &member),
            ny * (1.0 + n(&f.b) * n(&f.g) * n(&f.h) * n(&f.c)),
        ),
        residual(
            ring,
            "b - y a b",
            &ring.sub(&f.b, &ring.product(&[y, a, &f.b])),
            n(&f.b) * (1.0 + ny * na),
        ),
        residual(
            ring,
            "c - c a y",
            &ring.sub(&f.c, &ring.product(&[&f.c, a, y])),
            n(&f.c) * (1.0 + ny * na),
        ),
        residual(ring, "y - y a y", &ring.sub(y, &ring.product(&[y, a, y])), ny * (1.0 + ny * na)),
    ];
    let verdict = residuals.iter().all(|r| r.ok);
    BcCertificate { y: y.clone(), residuals, verdict }
}

/// Backend-specific constructions. Results are candidates only; the public
/// functions of this module verify them.
pub trait InverseBackend: Ring {
    fn methods(&self) -> &'static [Method];
    fn default_method(&self) -> Method;
    fn bc_candidate(&self, a: &Self::Elem, frame: &CornerFrame<Self::Elem>, method: Method) -> Result<Self::Elem>;
    /// Some `v` with `vR = bR` and `v^{-1}(0) = c^{-1}(0)`.
    fn build_v(&self, frame: &CornerFrame<Self::Elem>) -> Result<Self::Elem>;
    fn group_candidate(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn hybrid_candidate(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Result<Self::Elem>;
    fn annihilator_candidate(&self, a: &Self::Elem, b: &Self::Elem, c: &Self::Elem) -> Result<Self::Elem>;
}

/// The (b,c)-inverse of `a` with its certificate.
pub fn bc_inverse_certified<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
    method: Method,
) -> Result<BcCertificate<R::Elem>> {
    if !ring.methods().contains(&method) {
        return Err(Error::UnsupportedMethod { method: method.to_string(), ring: ring.descriptor().to_string() });
    }
    let y = ring.bc_candidate(a, frame, method)?;
    let cert = verify_bc_inverse(ring, a, frame, &y);
    if !cert.verdict {
        let w = cert.worst().map(|r| format!("{} = {:.3e}", r.name, r.norm)).unwrap_or_default();
        return Err(Error::InverseAbsent(format!("{method} candidate fails verification ({w})")));
    }
    Ok(cert)
}

pub fn bc_inverse<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
    method: Method,
) -> Result<R::Elem> {
    bc_inverse_certified(ring, a, frame, method).map(|c| c.y)
}

/// [`bc_inverse`] with the backend's default method.
pub fn bc_inverse_default<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
) -> Result<R::Elem> {
    bc_inverse(ring, a, frame, ring.default_method())
}

/// Runs every method the backend supports.
pub fn all_methods<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
) -> Vec<(Method, Result<R::Elem>)> {
    ring.methods().iter().map(|&m| (m, bc_inverse(ring, a, frame, m))).collect()
}

/// Runs every method and fails unless they all agree, either on a common
/// value or on absence.
pub fn bc_inverse_agreed<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
) -> Result<R::Elem> {
    let results = all_methods(ring, a, frame);
    let found: Vec<&R::Elem> = results.iter().filter_map(|(_, r)| r.as_ref().ok()).collect();
    if found.is_empty() {
        return results.into_iter().next().map(|(_, r)| r).unwrap_or_else(|| {
            Err(Error::InverseAbsent("no method available".into()))
        });
    }
    if found.len() != results.len() || found.iter().any(|y| !ring.eq(y, found[0])) {
        let summary: Vec<String> = results
            .iter()
            .map(|(m, r)| match r {
                Ok(y) => format!("{m}: {y}"),
                Err(e) => format!("{m}: {e}"),
            })
            .collect();
        return Err(Error::InvariantViolated(format!("methods disagree: {}", summary.join("; "))));
    }
    Ok(found[0].clone())
}

#[cfg(test)]
mod tests;
