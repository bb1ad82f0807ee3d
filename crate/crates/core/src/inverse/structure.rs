//! Structure of the set of (b,c)-invertible elements: corner units, the
//! decomposition into a corner unit plus a perturbation, and the operations
//! that leave the inverse unchanged or transform it predictably.

use serde::Serialize;

use super::{bc_inverse_default, CornerFrame, InverseBackend};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// `x ∈ qRp` together with `z ∈ bRc` such that `z x = p` and `x z = q`.
#[derive(Debug, Clone, PartialEq)]
pub struct CornerUnit<E> {
    pub x: E,
    pub z: E,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<E> {
    pub unit: CornerUnit<E>,
    /// `a - x`, which lies in `qR(1-p) + (1-q)R`.
    pub m: E,
}

/// Outcome of comparing one-sided invertibility of `b`, `c` with
/// invertibility of `a` and of its (b,c)-inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnitConsistency {
    pub b_right_invertible: bool,
    pub c_left_invertible: bool,
    /// `b` right invertible and `c` left invertible.
    pub condition: bool,
    pub inverse_invertible: bool,
    pub inverse_is_ordinary_inverse: bool,
    pub a_invertible: bool,
    /// Whether `condition` matches plain invertibility of `a`. This can fail
    /// (in `Z_6`, `a = 5`, `b = c = 4`) and is reported rather than asserted.
    pub condition_matches_a_invertible: bool,
}

pub(crate) fn agree<R: Ring>(ring: &R, x: &R::Elem, y: &R::Elem) -> bool {
    ring.residual_ok(&ring.sub(x, y), ring.norm(x) + ring.norm(y))
}

fn in_twisted_complement<R: Ring>(ring: &R, left: &R::Elem, m: &R::Elem, right: &R::Elem) -> bool {
    let lmr = ring.product(&[left, m, right]);
    ring.residual_ok(&lmr, ring.norm(left) * ring.norm(m) * ring.norm(right))
}

fn require<R: InverseBackend>(ring: &R, a: &R::Elem, frame: &CornerFrame<R::Elem>) -> Result<R::Elem> {
    bc_inverse_default(ring, a, frame).map_err(|e| match e {
        Error::InverseAbsent(why) => Error::PreconditionFailed(format!("a is not (b,c)-invertible: {why}")),
        other => other,
    })
}

fn violated(what: &str) -> Error {
    Error::InvariantViolated(what.to_string())
}

/// Checks that `b` right invertible and `c` left invertible holds exactly
/// when the (b,c)-inverse is invertible, which happens exactly when it is
/// the ordinary inverse of `a`.
pub fn unit_consistency<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
) -> Result<UnitConsistency> {
    let y = require(ring, a, frame)?;
    let b_right_invertible = ring.is_right_invertible(&frame.b);
    let c_left_invertible = ring.is_left_invertible(&frame.c);
    let condition = b_right_invertible && c_left_invertible;
    let inverse_invertible = ring.is_unit(&y);
    let a_inv = ring.invert(a).ok();
    let inverse_is_ordinary_inverse = a_inv.as_ref().is_some_and(|ai| agree(ring, ai, &y));
    if condition != inverse_invertible || inverse_invertible != inverse_is_ordinary_inverse {
        return Err(violated(&format!(
            "condition = {condition}, y invertible = {inverse_invertible}, y = a^-1: {inverse_is_ordinary_inverse}"
        )));
    }
    let a_invertible = a_inv.is_some();
    Ok(UnitConsistency {
        b_right_invertible,
        c_left_invertible,
        condition,
        inverse_invertible,
        inverse_is_ordinary_inverse,
        a_invertible,
        condition_matches_a_invertible: condition == a_invertible,
    })
}

/// Returns the witness when `x ∈ qRp` and some `z ∈ bRc` has `z x = p`,
/// `x z = q`; such a `z` is necessarily the (b,c)-inverse of `x`.
pub fn corner_unit_membership<R: InverseBackend>(
    ring: &R,
    x: &R::Elem,
    frame: &CornerFrame<R::Elem>,
) -> Option<CornerUnit<R::Elem>> {
    let f = frame;
    if !agree(ring, &ring.product(&[&f.q, x, &f.p]), x) {
        return None;
    }
    let z = bc_inverse_default(ring, x, f).ok()?;
    (agree(ring, &ring.mul(&z, x), &f.p) && agree(ring, &ring.mul(x, &z), &f.q))
        .then(|| CornerUnit { x: x.clone(), z })
}

/// Splits `a = x + m` with `x = q a p` a corner unit and `q m p = 0`.
pub fn decompose_bc_invertible<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
) -> Result<Decomposition<R::Elem>> {
    let f = frame;
    let y = require(ring, a, f)?;
    let x = ring.product(&[&f.q, a, &f.p]);
    if !(agree(ring, &ring.mul(&y, &x), &f.p) && agree(ring, &ring.mul(&x, &y), &f.q)) {
        return Err(violated("q a p is not a corner unit with witness a^-(b,c)"));
    }
    let m = ring.sub(a, &x);
    let expected = ring.add(
        &ring.product(&[&f.q, a, &ring.one_minus(&f.p)]),
        &ring.mul(&ring.one_minus(&f.q), a),
    );
    if !agree(ring, &m, &expected) || !in_twisted_complement(ring, &f.q, &m, &f.p) {
        return Err(violated("a - q a p is not q a (1-p) + (1-q) a with q m p = 0"));
    }
    Ok(Decomposition { unit: CornerUnit { x, z: y }, m })
}

/// `(a + m)^-(b,c)` for `m ∈ qR(1-p) + (1-q)R`, checked equal to `a^-(b,c)`.
pub fn perturb_invariant<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
    m: &R::Elem,
) -> Result<R::Elem> {
    let f = frame;
    if !in_twisted_complement(ring, &f.q, m, &f.p) {
        return Err(Error::PreconditionFailed("q m p != 0, so m is outside qR(1-p) + (1-q)R".into()));
    }
    let y = require(ring, a, f)?;
    let perturbed = bc_inverse_default(ring, &ring.add(a, m), f)
        .map_err(|e| violated(&format!("a + m lost its inverse: {e}")))?;
    if !agree(ring, &y, &perturbed) {
        return Err(violated("the perturbation changed the (b,c)-inverse"));
    }
    Ok(perturbed)
}

/// Inverse of `u` in the corner ring `eRe`, i.e. its Bott-Duffin `(e,e)`-inverse.
fn corner_inverse<R: InverseBackend>(ring: &R, u: &R::Elem, e: &R::Elem, name: &str) -> Result<R::Elem> {
    let singular = || Error::SingularCorner(format!("{name} = {u} is not a unit of the corner ring at {e}"));
    if !agree(ring, &ring.product(&[e, u, e]), u) {
        return Err(singular());
    }
    let frame = CornerFrame::idempotent(ring, e.clone(), e.clone())?;
    let ui = bc_inverse_default(ring, u, &frame).map_err(|_| singular())?;
    if !(agree(ring, &ring.mul(u, &ui), e) && agree(ring, &ring.mul(&ui, u), e)) {
        return Err(singular());
    }
    Ok(ui)
}

/// The (b,c)-inverse of `v x u + m` for a corner unit `x`, a unit `u` of
/// `pRp`, a unit `v` of `qRq` and `m ∈ qR(1-p) + (1-q)R`. Checked equal to
/// `u^{-1} x^-(b,c) v^{-1}` (inverses taken in the corner rings).
pub fn scale_corner<R: InverseBackend>(
    ring: &R,
    x: &CornerUnit<R::Elem>,
    u: &R::Elem,
    v: &R::Elem,
    frame: &CornerFrame<R::Elem>,
    m: &R::Elem,
) -> Result<R::Elem> {
    let f = frame;
    let ui = corner_inverse(ring, u, &f.p, "u")?;
    let vi = corner_inverse(ring, v, &f.q, "v")?;
    if !in_twisted_complement(ring, &f.q, m, &f.p) {
        return Err(Error::PreconditionFailed("q m p != 0, so m is outside qR(1-p) + (1-q)R".into()));
    }
    let vxu = ring.product(&[v, &x.x, u]);
    let expected = ring.product(&[&ui, &x.z, &vi]);
    let plain = bc_inverse_default(ring, &vxu, f).map_err(|e| violated(&format!("v x u lost its inverse: {e}")))?;
    let perturbed = bc_inverse_default(ring, &ring.add(&vxu, m), f)
        .map_err(|e| violated(&format!("v x u + m lost its inverse: {e}")))?;
    if !agree(ring, &plain, &expected) || !agree(ring, &perturbed, &expected) {
        return Err(violated("(v x u + m)^-(b,c) differs from u^-1 x^-(b,c) v^-1"));
    }
    Ok(perturbed)
}

/// The `(q, p)`-inverse of `a^-(b,c) + m` for `m ∈ pR(1-q) + (1-p)R`,
/// checked equal to `q a p`.
pub fn inverse_of_inverse<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    frame: &CornerFrame<R::Elem>,
    m: &R::Elem,
) -> Result<R::Elem> {
    let f = frame;
    if !in_twisted_complement(ring, &f.p, m, &f.q) {
        return Err(Error::PreconditionFailed("p m q != 0, so m is outside pR(1-q) + (1-p)R".into()));
    }
    let y = require(ring, a, f)?;
    let w = bc_inverse_default(ring, &ring.add(&y, m), &f.swapped())
        .map_err(|e| violated(&format!("a^-(b,c) + m has no (q,p)-inverse: {e}")))?;
    if !agree(ring, &w, &ring.product(&[&f.q, a, &f.p])) {
        return Err(violated("(a^-(b,c) + m)^-(q,p) differs from q a p"));
    }
    Ok(w)
}
