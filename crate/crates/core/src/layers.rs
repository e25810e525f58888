//! Layers `L_t = {F - t H = 0}` for `t` in the maximal ideal.
//!
//! `H` here is the Hessian with its unit factor `-8` removed. Since
//! `t -> -8t` permutes `m`, the family of layers is the same either way; the
//! normalization only fixes which `t` labels which layer.

use alloc::vec::Vec;

use crate::elliptic_loop::{EllipticLoop, LoopPoint};
use crate::error::{Error, Result};
use crate::projective::ProjPoint;
use crate::residue::ResiduePoint;
use crate::ring::{RingElem, RingKind};

/// One layer of an elliptic loop.
#[derive(Debug, Clone, Copy)]
pub struct Layer<'a> {
    lp: &'a EllipticLoop,
    t: RingElem,
}

impl<'a> Layer<'a> {
    pub fn new(lp: &'a EllipticLoop, t: RingElem) -> Result<Layer<'a>> {
        if !lp.ring().in_ideal(t) {
            return Err(Error::NotInMaximalIdeal);
        }
        Ok(Layer { lp, t })
    }

    /// Every layer of the loop, in code order of `t`.
    pub fn all(lp: &'a EllipticLoop) -> impl Iterator<Item = Layer<'a>> + 'a {
        lp.ring().ideal_power(1).map(move |t| Layer { lp, t })
    }

    pub fn t(&self) -> RingElem {
        self.t
    }

    pub fn elliptic_loop(&self) -> &'a EllipticLoop {
        self.lp
    }

    /// `(F - t H)(P)` at the canonical representative.
    pub fn eval(&self, pt: &ProjPoint) -> RingElem {
        let r = self.lp.ring();
        r.sub(
            self.lp.eval_f(pt),
            r.mul(self.t, self.lp.eval_hessian_unscaled(pt)),
        )
    }

    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.eval(pt).is_zero()
    }

    fn collect(&self, bases: impl Iterator<Item = ResiduePoint>) -> Vec<LoopPoint> {
        bases
            .flat_map(|b| self.lp.fiber(b))
            .filter(|pt| self.contains(pt.proj()))
            .collect()
    }

    /// All points of the layer, fiber by fiber.
    pub fn points(&self) -> Vec<LoopPoint> {
        self.collect(self.lp.residue_curve().points().iter().copied())
    }

    /// `L_t^inf`, the layer points over the identity.
    pub fn infinity_points(&self) -> Vec<LoopPoint> {
        self.collect(core::iter::once(ResiduePoint::Infinity))
    }

    /// The unique `Z_t` in `m` with `(p : 1 : Z_t)` on the layer.
    ///
    /// Newton iteration on `g(z) = (F - tH)(p, 1, z)`, whose derivative is
    /// `-1` modulo `m`.
    pub fn infinity_z(&self) -> Result<RingElem> {
        let lp = self.lp;
        let r = lp.ring();
        let (a, b, t) = (lp.a(), lp.b(), self.t);
        let mu = r.uniformizer();
        let mut z = r.zero();
        // quadratic convergence: e steps is generous
        for _ in 0..=r.exponent() + 1 {
            let g = self.eval(&ProjPoint::from_canonical(mu, r.one(), z));
            if g.is_zero() {
                return Ok(z);
            }
            let zz = r.mul(z, z);
            let mut dg = r.add(r.scale(2, r.mul(a, r.mul(mu, z))), r.scale(3, r.mul(b, zz)));
            dg = r.sub(dg, r.one());
            let mut dh = r.scale(3, r.mul(a, r.mul(mu, mu)));
            dh = r.add(dh, r.scale(18, r.mul(b, r.mul(mu, z))));
            dh = r.sub(dh, r.scale(3, r.mul(r.mul(a, a), zz)));
            dg = r.sub(dg, r.mul(t, dh));
            z = r.sub(z, r.mul(g, r.inverse(dg)?));
        }
        Err(Error::HenselDiverged)
    }

    /// `(p : 1 : Z_t)`, which generates `L_t^inf` over `Z/p^eZ`.
    pub fn infinity_generator(&self) -> Result<LoopPoint> {
        if self.lp.ring().kind() != RingKind::IntegerQuotient {
            return Err(Error::UnsupportedRing);
        }
        let r = self.lp.ring();
        let z = self.infinity_z()?;
        self.lp.point(ProjPoint::from_canonical(r.uniformizer(), r.one(), z))
    }
}

/// The `t` with `P` on `L_t`, namely `F(P) H(P)^{-1}`.
///
/// Defined for affine points whose Hessian value is a unit, i.e. those with
/// `3 pi(P) != O`.
pub fn stratify(lp: &EllipticLoop, pt: &LoopPoint) -> Result<RingElem> {
    let r = lp.ring();
    if !lp.is_affine(pt) {
        return Err(Error::NotAffine);
    }
    let h = r
        .inverse(lp.eval_hessian_unscaled(pt.proj()))
        .map_err(|_| Error::HessianNotUnit)?;
    Ok(r.mul(lp.eval_f(pt.proj()), h))
}

/// Checks that the zero set of `alpha F + beta H_F` is closed under addition
/// on all pairs drawn from `pts`. Every point of `pts` must lie on that zero
/// set.
pub fn hessian_closure_check(
    lp: &EllipticLoop,
    alpha: RingElem,
    beta: RingElem,
    pts: &[LoopPoint],
) -> Result<bool> {
    let r = lp.ring();
    let g = |pt: &LoopPoint| {
        r.add(
            r.mul(alpha, lp.eval_f(pt.proj())),
            r.mul(beta, lp.eval_hessian(pt.proj())),
        )
    };
    if !pts.iter().all(|pt| g(pt).is_zero()) {
        return Err(Error::PreconditionUnmet("point outside the zero set"));
    }
    for (i, p1) in pts.iter().enumerate() {
        for p2 in &pts[i..] {
            if !g(&lp.add(p1, p2)?).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
