//! Splitting the ordinary inverse into two Bott-Duffin inverses, and the
//! reverse order law for products.

use super::related::bott_duffin_inverse;
use super::structure::agree;
use super::{bc_inverse_default, CornerFrame, InverseBackend};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// The four block equations (plus `z q = p z`) characterizing `z = a^{-1}`
/// when `a p = q a`.
pub fn split_block_equations_hold<R: Ring>(ring: &R, a: &R::Elem, p: &R::Elem, q: &R::Elem, z: &R::Elem) -> bool {
    let (np, nq) = (ring.one_minus(p), ring.one_minus(q));
    agree(ring, &ring.mul(z, q), &ring.mul(p, z))
        && agree(ring, &ring.product(&[p, z, q, a, p]), p)
        && agree(ring, &ring.product(&[&np, z, &nq, a, &np]), &np)
        && agree(ring, &ring.product(&[q, a, p, z, q]), q)
        && agree(ring, &ring.product(&[&nq, a, &np, z, &nq]), &nq)
}

/// For idempotents `p`, `q` with `a p = q a`: returns
/// `a^-(p,q) + a^-(1-p,1-q)`, checked to be the inverse of `a`. When either
/// part is missing, checks that `a` is not invertible and reports absence.
pub fn bott_duffin_split_inverse<R: InverseBackend>(
    ring: &R,
    a: &R::Elem,
    p: &R::Elem,
    q: &R::Elem,
) -> Result<R::Elem> {
    for (name, e) in [("p", p), ("q", q)] {
        if !ring.is_idempotent(e) {
            return Err(Error::PreconditionFailed(format!("{name} = {e} is not idempotent")));
        }
    }
    if !agree(ring, &ring.mul(a, p), &ring.mul(q, a)) {
        return Err(Error::PreconditionFailed("a p != q a".into()));
    }
    let absent_ok = |r: Result<R::Elem>| match r {
        Ok(y) => Ok(Some(y)),
        Err(Error::InverseAbsent(_)) => Ok(None),
        Err(e) => Err(e),
    };
    let first = absent_ok(bott_duffin_inverse(ring, a, p, q))?;
    let second = absent_ok(bott_duffin_inverse(ring, a, &ring.one_minus(p), &ring.one_minus(q)))?;
    let a_inv = ring.invert(a).ok();
    match (first, second) {
        (Some(y1), Some(y2)) => {
            let s = ring.add(&y1, &y2);
            let one = ring.one();
            let two_sided = agree(ring, &ring.mul(a, &s), &one) && agree(ring, &ring.mul(&s, a), &one);
            let matches = a_inv.as_ref().is_some_and(|ai| agree(ring, ai, &s));
            if !two_sided || !matches || !split_block_equations_hold(ring, a, p, q, &s) {
                return Err(Error::InvariantViolated(
                    "the sum of the Bott-Duffin parts is not the inverse of a".into(),
                ));
            }
            Ok(s)
        }
        (y1, y2) => {
            if a_inv.is_some() {
                return Err(Error::InvariantViolated(
                    "a is invertible but a Bott-Duffin part is missing".into(),
                ));
            }
            let missing = match (y1.is_none(), y2.is_none()) {
                (true, true) => "both parts",
                (true, false) => "the (p,q) part",
                _ => "the (1-p,1-q) part",
            };
            Err(Error::InverseAbsent(format!("{missing} missing, and a is not invertible")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct RolOutcome<E> {
    /// `q1 a1 (1-p1) a2 p2 = 0`.
    pub condition: bool,
    pub obstruction: E,
    /// `(a1 a2)^-(b2,c1)` exists and equals `a2^-(b2,c2) a1^-(b1,c1)`.
    pub law_holds: bool,
    pub product_inverse: Option<E>,
    pub reversed_product: E,
}

/// Evaluates the obstruction and the reverse order law for a chained pair of
/// frames (`q2 = p1`), failing if they disagree.
pub fn reverse_order_law_check<R: InverseBackend>(
    ring: &R,
    a1: &R::Elem,
    f1: &CornerFrame<R::Elem>,
    a2: &R::Elem,
    f2: &CornerFrame<R::Elem>,
) -> Result<RolOutcome<R::Elem>> {
    if !agree(ring, &f2.q, &f1.p) {
        return Err(Error::PreconditionFailed("chain condition h2 c2 = b1 g1 fails".into()));
    }
    let need = |a: &R::Elem, f: &CornerFrame<R::Elem>, which: &str| {
        bc_inverse_default(ring, a, f).map_err(|e| match e {
            Error::InverseAbsent(why) => Error::PreconditionFailed(format!("{which} has no inverse: {why}")),
            other => other,
        })
    };
    let y1 = need(a1, f1, "a1")?;
    let y2 = need(a2, f2, "a2")?;
    let not_p1 = ring.one_minus(&f1.p);
    let obstruction = ring.product(&[&f1.q, a1, &not_p1, a2, &f2.p]);
    let scale = [&f1.q, a1, &not_p1, a2, &f2.p].iter().map(|x| ring.norm(x)).product::<f64>();
    let condition = ring.residual_ok(&obstruction, scale);

    let product_frame = CornerFrame::new(ring, f2.b.clone(), f1.c.clone(), f2.g.clone(), f1.h.clone())?;
    let product_inverse = match bc_inverse_default(ring, &ring.mul(a1, a2), &product_frame) {
        Ok(w) => Some(w),
        Err(Error::InverseAbsent(_)) => None,
        Err(e) => return Err(e),
    };
    let reversed_product = ring.mul(&y2, &y1);
    let law_holds = product_inverse.as_ref().is_some_and(|w| agree(ring, w, &reversed_product));
    if condition != law_holds {
        return Err(Error::InvariantViolated(format!(
            "obstruction zero: {condition}, reverse order law: {law_holds}"
        )));
    }
    Ok(RolOutcome { condition, obstruction, law_holds, product_inverse, reversed_product })
}
