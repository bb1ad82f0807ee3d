//! Bott-Duffin, hybrid, annihilator, group and `(p,q,l)` outer inverses.

use super::{bc_inverse_default, CornerFrame, InverseBackend};
use crate::error::{Error, Result};
use crate::ring::{Ring, Side};

/// The Bott-Duffin `(p, q)`-inverse: the (b,c)-inverse for the idempotent
/// frame `(p, q, p, q)`.
pub fn bott_duffin_inverse<R: InverseBackend>(ring: &R, a: &R::Elem, p: &R::Elem, q: &R::Elem) -> Result<R::Elem> {
    let frame = CornerFrame::idempotent(ring, p.clone(), q.clone())?;
    bc_inverse_default(ring, a, &frame)
}

fn outer_ok<R: Ring>(ring: &R, a: &R::Elem, y: &R::Elem) -> bool {
    let ny = ring.norm(y);
    ring.residual_ok(&ring.sub(y, &ring.product(&[y, a, y])), ny * (1.0 + ny * ring.norm(a)))
}

/// The outer inverse `y` with `yR = bR` and `y^{-1}(0) = c^{-1}(0)`.
pub fn hybrid_inverse<R: InverseBackend>(ring: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<R::Elem> {
    let y = ring.hybrid_candidate(a, b, c)?;
    if outer_ok(ring, a, &y) && ring.ideal_eq(&y, b, Side::ImageRight) && ring.ideal_eq(&y, c, Side::KernelRight) {
        Ok(y)
    } else {
        Err(Error::InverseAbsent("hybrid candidate fails its defining conditions".into()))
    }
}

/// The outer inverse `y` with `y_{-1}(0) = b_{-1}(0)` and `y^{-1}(0) = c^{-1}(0)`.
pub fn annihilator_inverse<R: InverseBackend>(ring: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<R::Elem> {
    let y = ring.annihilator_candidate(a, b, c)?;
    if outer_ok(ring, a, &y) && ring.ideal_eq(&y, b, Side::KernelLeft) && ring.ideal_eq(&y, c, Side::KernelRight) {
        Ok(y)
    } else {
        Err(Error::InverseAbsent("annihilator candidate fails its defining conditions".into()))
    }
}

/// The outer inverse with `yR = pR` and `y^{-1}(0) = qR`, which is the
/// hybrid `(p, 1 - q)`-inverse.
pub fn outer_inverse_pql<R: InverseBackend>(ring: &R, a: &R::Elem, p: &R::Elem, q: &R::Elem) -> Result<R::Elem> {
    for (name, e) in [("p", p), ("q", q)] {
        if !ring.is_idempotent(e) {
            return Err(Error::PreconditionFailed(format!("{name} = {e} is not idempotent")));
        }
    }
    hybrid_inverse(ring, a, p, &ring.one_minus(q))
}

/// The group inverse `x^#`: `x x^# x = x`, `x^# x x^# = x^#`, `x x^# = x^# x`.
pub fn group_inverse<R: InverseBackend>(ring: &R, x: &R::Elem) -> Result<R::Elem> {
    let y = ring.group_candidate(x)?;
    let (nx, ny) = (ring.norm(x), ring.norm(&y));
    let ok = ring.residual_ok(&ring.sub(&ring.product(&[x, &y, x]), x), nx * nx * ny)
        && ring.residual_ok(&ring.sub(&ring.product(&[&y, x, &y]), &y), ny * ny * nx)
        && ring.residual_ok(&ring.sub(&ring.mul(x, &y), &ring.mul(&y, x)), nx * ny);
    if ok {
        Ok(y)
    } else {
        Err(Error::InverseAbsent("group inverse equations not met".into()))
    }
}
