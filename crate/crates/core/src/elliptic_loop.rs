//! The elliptic loop `L_{A,B}(R)`: all points of `P^2(R)` reducing onto the
//! base curve `E_{A,B}(F_p)`, with the `(0:1:0)` addition law.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::projective::ProjPoint;
use crate::residue::{field_inv, ResidueCurve, ResiduePoint};
use crate::ring::{Ring, RingElem};

/// A point known to lie on a particular loop. Always stored in canonical
/// form, which for loop points means `(X : 1 : Z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LoopPoint(ProjPoint);

impl LoopPoint {
    pub fn identity() -> LoopPoint {
        LoopPoint(ProjPoint::identity())
    }

    pub fn proj(&self) -> &ProjPoint {
        &self.0
    }

    #[inline]
    pub fn x(&self) -> RingElem {
        self.0.x()
    }

    #[inline]
    pub fn y(&self) -> RingElem {
        self.0.y()
    }

    #[inline]
    pub fn z(&self) -> RingElem {
        self.0.z()
    }

    pub fn codes(&self) -> [u32; 3] {
        self.0.codes()
    }

    pub fn is_identity(&self) -> bool {
        *self == LoopPoint::identity()
    }
}

impl fmt::Display for LoopPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Validated loop parameters together with the cached base curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticLoop {
    ring: Ring,
    a: RingElem,
    b: RingElem,
    a_sq: RingElem,
    three_b: RingElem,
    curve: ResidueCurve,
}

impl EllipticLoop {
    /// Checks that `-(4A^3 + 27B^2)` is a unit and that the base curve has odd
    /// order.
    pub fn new(ring: Ring, a: RingElem, b: RingElem) -> Result<EllipticLoop> {
        let disc = ring.add(
            ring.scale(4, ring.pow(a, 3)),
            ring.scale(27, ring.mul(b, b)),
        );
        if !ring.is_unit(disc) {
            return Err(Error::SingularCurve);
        }
        let curve = ResidueCurve::new(ring.prime(), ring.residue(a), ring.residue(b));
        let q = curve.order();
        if q.is_multiple_of(2) {
            return Err(Error::EvenOrder { q });
        }
        Ok(EllipticLoop {
            ring,
            a,
            b,
            a_sq: ring.mul(a, a),
            three_b: ring.scale(3, b),
            curve,
        })
    }

    pub fn from_ints(ring: Ring, a: i64, b: i64) -> Result<EllipticLoop> {
        EllipticLoop::new(ring, ring.int(a), ring.int(b))
    }

    /// Shorthand for `L_{A,B}(Z/p^eZ)`.
    pub fn over_integers(p: u32, e: u32, a: i64, b: i64) -> Result<EllipticLoop> {
        EllipticLoop::from_ints(Ring::integers(p, e)?, a, b)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn a(&self) -> RingElem {
        self.a
    }

    pub fn b(&self) -> RingElem {
        self.b
    }

    pub fn residue_curve(&self) -> &ResidueCurve {
        &self.curve
    }

    /// `q = |E_{A,B}(F_p)|`.
    pub fn base_order(&self) -> u64 {
        self.curve.order()
    }

    /// `|L| = q |m|^2`.
    pub fn size(&self) -> u64 {
        self.base_order() * self.ring.ideal_order().pow(2)
    }

    pub fn identity(&self) -> LoopPoint {
        LoopPoint::identity()
    }

    /// `F = x^3 + A x z^2 + B z^3 - y^2 z` at the given representative.
    pub fn eval_f(&self, pt: &ProjPoint) -> RingElem {
        let r = &self.ring;
        let (x, y, z) = (pt.x(), pt.y(), pt.z());
        let zz = r.mul(z, z);
        let mut acc = r.mul(r.mul(x, x), x);
        acc = r.add(acc, r.mul(self.a, r.mul(x, zz)));
        acc = r.add(acc, r.mul(self.b, r.mul(zz, z)));
        r.sub(acc, r.mul(r.mul(y, y), z))
    }

    /// `3A x^2 z + 3 x y^2 + 9B x z^2 - A^2 z^3`, the Hessian without its
    /// unit factor `-8`.
    pub fn eval_hessian_unscaled(&self, pt: &ProjPoint) -> RingElem {
        let r = &self.ring;
        let (x, y, z) = (pt.x(), pt.y(), pt.z());
        let zz = r.mul(z, z);
        let mut acc = r.scale(3, r.mul(self.a, r.mul(r.mul(x, x), z)));
        acc = r.add(acc, r.scale(3, r.mul(x, r.mul(y, y))));
        acc = r.add(acc, r.scale(9, r.mul(self.b, r.mul(x, zz))));
        r.sub(acc, r.mul(self.a_sq, r.mul(zz, z)))
    }

    /// `H_F = -8 (3A x^2 z + 3 x y^2 + 9B x z^2 - A^2 z^3)`.
    pub fn eval_hessian(&self, pt: &ProjPoint) -> RingElem {
        self.ring.scale(-8, self.eval_hessian_unscaled(pt))
    }

    /// Membership: `F(P)` lies in the maximal ideal.
    pub fn contains(&self, pt: &ProjPoint) -> bool {
        self.ring.in_ideal(self.eval_f(pt))
    }

    pub fn point(&self, pt: ProjPoint) -> Result<LoopPoint> {
        if self.contains(&pt) {
            Ok(LoopPoint(pt))
        } else {
            Err(Error::NotOnLoop)
        }
    }

    pub fn point_from_ints(&self, x: i64, y: i64, z: i64) -> Result<LoopPoint> {
        self.point(ProjPoint::from_ints(&self.ring, x, y, z)?)
    }

    pub fn point_from_elems(&self, x: RingElem, y: RingElem, z: RingElem) -> Result<LoopPoint> {
        self.point(ProjPoint::normalize(&self.ring, x, y, z)?)
    }

    /// `(T1 : T2 : T3)` before normalization, through the bilinear forms
    /// `Q1..Q4`.
    pub fn add_raw(&self, p1: &ProjPoint, p2: &ProjPoint) -> [RingElem; 3] {
        let r = &self.ring;
        let (x1, y1, z1) = (p1.x(), p1.y(), p1.z());
        let (x2, y2, z2) = (p2.x(), p2.y(), p2.z());

        let x1z2 = r.mul(x1, z2);
        let x2z1 = r.mul(x2, z1);
        let z1z2 = r.mul(z1, z2);
        let x1x2 = r.mul(x1, x2);
        let y1y2 = r.mul(y1, y2);
        let a_cross = r.mul(self.a, r.add(x1z2, x2z1));
        let b_zz = r.mul(self.three_b, z1z2);

        let q1 = r.sub(y1y2, r.add(a_cross, b_zz));
        let q2 = r.sub(
            r.sub(r.mul(self.a_sq, z1z2), r.mul(self.a, x1x2)),
            r.mul(self.three_b, r.add(x1z2, x2z1)),
        );
        let q3 = r.add(r.mul(self.a, z1z2), r.scale(3, x1x2));
        let q4 = r.add(r.add(a_cross, b_zz), y1y2);

        let sx = r.add(r.mul(x1, y2), r.mul(x2, y1));
        let sz = r.add(r.mul(z1, y2), r.mul(z2, y1));

        let t1 = r.add(r.mul(sx, q1), r.mul(sz, q2));
        let t2 = r.sub(r.mul(q1, q4), r.mul(q2, q3));
        let t3 = r.add(r.mul(sx, q3), r.mul(sz, q4));
        [t1, t2, t3]
    }

    pub fn add(&self, p1: &LoopPoint, p2: &LoopPoint) -> Result<LoopPoint> {
        let [t1, t2, t3] = self.add_raw(&p1.0, &p2.0);
        match ProjPoint::normalize(&self.ring, t1, t2, t3) {
            Ok(pt) => Ok(LoopPoint(pt)),
            Err(Error::NotPrimitive) => Err(Error::DegenerateSum),
            Err(err) => Err(err),
        }
    }

    /// `-(X : Y : Z) = (X : -Y : Z)`.
    pub fn neg(&self, pt: &LoopPoint) -> LoopPoint {
        let r = &self.ring;
        debug_assert_eq!(pt.y(), r.one());
        // (X : -1 : Z) rescaled by -1 is canonical again
        LoopPoint(ProjPoint::from_canonical(r.neg(pt.x()), pt.y(), r.neg(pt.z())))
    }

    /// `P + (-Q)`.
    pub fn sub(&self, p1: &LoopPoint, p2: &LoopPoint) -> Result<LoopPoint> {
        self.add(p1, &self.neg(p2))
    }

    /// `nP` by double-and-add. Agrees with [`EllipticLoop::mul_unary`] since
    /// multiples of a single point associate.
    pub fn mul(&self, n: i64, pt: &LoopPoint) -> Result<LoopPoint> {
        let base = if n < 0 { self.neg(pt) } else { *pt };
        let k = n.unsigned_abs();
        let mut acc = LoopPoint::identity();
        for bit in (0..64 - k.leading_zeros()).rev() {
            acc = self.add(&acc, &acc)?;
            if (k >> bit) & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
        }
        Ok(acc)
    }

    /// `nP` by the defining recursion `0P = O`, `(n+1)P = nP + P`,
    /// `(-n)P = n(-P)`.
    pub fn mul_unary(&self, n: i64, pt: &LoopPoint) -> Result<LoopPoint> {
        let base = if n < 0 { self.neg(pt) } else { *pt };
        let mut acc = LoopPoint::identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &base)?;
        }
        Ok(acc)
    }

    /// `[0P, 1P, ..., nP]` by the defining recursion.
    pub fn multiples(&self, pt: &LoopPoint, n: u64) -> Result<Vec<LoopPoint>> {
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut acc = LoopPoint::identity();
        out.push(acc);
        for _ in 0..n {
            acc = self.add(&acc, pt)?;
            out.push(acc);
        }
        Ok(out)
    }

    /// Least `n >= 1` with `nP = O`.
    pub fn order_of(&self, pt: &LoopPoint) -> Result<u64> {
        let bound = self.size();
        let mut acc = *pt;
        let mut n = 1;
        while !acc.is_identity() {
            if n >= bound {
                return Err(Error::OrderBoundExceeded { bound });
            }
            acc = self.add(&acc, pt)?;
            n += 1;
        }
        Ok(n)
    }

    /// The image of a point on the base curve.
    pub fn project(&self, pt: &LoopPoint) -> ResiduePoint {
        let r = &self.ring;
        let p = r.prime();
        let (x, y, z) = (r.residue(pt.x()), r.residue(pt.y()), r.residue(pt.z()));
        if z == 0 {
            return ResiduePoint::Infinity;
        }
        let zi = field_inv(z, p) as u64;
        ResiduePoint::Affine(
            (x as u64 * zi % p as u64) as u32,
            (y as u64 * zi % p as u64) as u32,
        )
    }

    pub fn is_affine(&self, pt: &LoopPoint) -> bool {
        self.ring.is_unit(pt.z())
    }

    pub fn is_at_infinity(&self, pt: &LoopPoint) -> bool {
        !self.is_affine(pt)
    }

    /// Coordinates `(X/Z, Y/Z)` of an affine point.
    pub fn affine_coords(&self, pt: &LoopPoint) -> Result<(RingElem, RingElem)> {
        let r = &self.ring;
        let zi = r.inverse(pt.z()).map_err(|_| Error::NotAffine)?;
        Ok((r.mul(pt.x(), zi), r.mul(pt.y(), zi)))
    }

    /// For an affine point `(X : Y : 1)` and `alpha` in `m`, the `beta` in `m`
    /// with `P` on `E_{A+alpha, B+beta}(R)`: `beta = Y^2 - X^3 - (A+alpha)X - B`.
    pub fn lift_affine(&self, pt: &LoopPoint, alpha: RingElem) -> Result<RingElem> {
        let r = &self.ring;
        if !r.in_ideal(alpha) {
            return Err(Error::NotInMaximalIdeal);
        }
        let (x, y) = self.affine_coords(pt)?;
        let mut beta = r.sub(r.mul(y, y), r.pow(x, 3));
        beta = r.sub(beta, r.mul(r.add(self.a, alpha), x));
        Ok(r.sub(beta, self.b))
    }

    /// All loop points over one base point, in code order of `(X, Z)`.
    pub fn fiber(&self, base: ResiduePoint) -> Vec<LoopPoint> {
        let r = &self.ring;
        let p = r.prime() as u64;
        let m = r.ideal_order();
        let (x0, z0) = match base {
            ResiduePoint::Infinity => (0u64, 0u64),
            ResiduePoint::Affine(x, y) => {
                // (x : y : 1) = (x/y : 1 : 1/y)
                let yi = field_inv(y, r.prime()) as u64;
                (x as u64 * yi % p, yi)
            }
        };
        let mut out = Vec::with_capacity((m * m) as usize);
        for i in 0..m {
            for j in 0..m {
                let x = RingElem::raw((x0 + p * i) as u32);
                let z = RingElem::raw((z0 + p * j) as u32);
                out.push(LoopPoint(ProjPoint::from_canonical(x, r.one(), z)));
            }
        }
        out
    }

    /// `L^inf = {(X : 1 : Z) : X, Z in m}`.
    pub fn infinity_points(&self) -> Vec<LoopPoint> {
        self.fiber(ResiduePoint::Infinity)
    }

    pub fn affine_points(&self) -> Vec<LoopPoint> {
        self.curve
            .points()
            .iter()
            .filter(|b| !b.is_infinity())
            .flat_map(|&b| self.fiber(b))
            .collect()
    }

    /// Every point of the loop, fiber by fiber (infinity first).
    pub fn points(&self) -> Vec<LoopPoint> {
        self.curve
            .points()
            .iter()
            .flat_map(|&b| self.fiber(b))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::minors_vanish;

    fn l25(a: i64, b: i64) -> EllipticLoop {
        EllipticLoop::over_integers(5, 2, a, b).unwrap()
    }

    /// The expanded T1/T2/T3 addition law, written out term by term.
    fn expanded_sum(l: &EllipticLoop, p: &LoopPoint, q: &LoopPoint) -> [RingElem; 3] {
        let r = l.ring();
        let (a, b) = (l.a(), l.b());
        let (x1, y1, z1) = (p.x(), p.y(), p.z());
        let (x2, y2, z2) = (q.x(), q.y(), q.z());
        let m = |u: RingElem, v: RingElem| r.mul(u, v);
        let s = |u: RingElem, v: RingElem| r.add(u, v);
        let k = |n: i64, u: RingElem| r.scale(n, u);
        let xy = s(m(x1, y2), m(x2, y1));
        let yz = s(m(y1, z2), m(y2, z1));
        let xz = s(m(x1, z2), m(x2, z1));
        let zz = m(z1, z2);
        let a2 = m(a, a);

        let mut t1 = m(m(y1, y2), xy);
        t1 = r.sub(t1, m(m(a, m(x1, x2)), yz));
        t1 = r.sub(t1, m(a, m(xy, xz)));
        t1 = r.sub(t1, k(3, m(b, m(xy, zz))));
        t1 = r.sub(t1, k(3, m(b, m(xz, yz))));
        t1 = s(t1, m(a2, m(yz, zz)));

        let mut t2 = m(m(y1, y1), m(y2, y2));
        t2 = s(t2, k(3, m(a, m(m(x1, x1), m(x2, x2)))));
        t2 = s(t2, k(9, m(b, m(m(x1, x2), xz))));
        t2 = r.sub(t2, m(a2, m(m(x1, z2), s(m(x1, z2), k(2, m(x2, z1))))));
        t2 = r.sub(t2, m(a2, m(m(x2, z1), s(k(2, m(x1, z2)), m(x2, z1)))));
        t2 = r.sub(t2, k(3, m(m(a, b), m(zz, xz))));
        t2 = r.sub(t2, m(s(m(a2, a), k(9, m(b, b))), m(zz, zz)));

        let mut t3 = k(3, m(m(x1, x2), xy));
        t3 = s(t3, m(m(y1, y2), yz));
        t3 = s(t3, m(a, m(xy, zz)));
        t3 = s(t3, m(a, m(xz, yz)));
        t3 = s(t3, k(3, m(b, m(yz, zz))));
        [t1, t2, t3]
    }

    #[test]
    fn validation() {
        assert_eq!(l25(4, 2).base_order(), 3);
        assert_eq!(l25(2, 1).base_order(), 7);
        assert_eq!(
            EllipticLoop::over_integers(5, 2, 0, 0),
            Err(Error::SingularCurve)
        );
        // y^2 = x^3 + 1 over F_5 has (4, 0) of order two
        assert!(matches!(
            EllipticLoop::over_integers(5, 2, 0, 1),
            Err(Error::EvenOrder { .. })
        ));
    }

    #[test]
    fn membership_examples() {
        let l = l25(4, 2);
        let r = *l.ring();
        assert!(l.contains(&ProjPoint::identity()));
        assert!(l.contains(&ProjPoint::from_ints(&r, 3, 1, 1).unwrap()));
        assert!(!l.contains(&ProjPoint::from_ints(&r, 0, 1, 1).unwrap()));
        assert_eq!(l.point_from_ints(0, 1, 1), Err(Error::NotOnLoop));
    }

    #[test]
    fn enumeration_is_the_preimage_of_the_base_curve() {
        for l in [l25(2, 1), l25(4, 2), EllipticLoop::from_ints(Ring::truncated(5, 2).unwrap(), 2, 1).unwrap()] {
            let pts = l.points();
            assert_eq!(pts.len() as u64, l.size());
            let brute: Vec<_> = crate::projective::plane_points(l.ring())
                .into_iter()
                .filter(|p| l.contains(p))
                .collect();
            let mut a: Vec<_> = pts.iter().map(|p| *p.proj()).collect();
            let mut b = brute;
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bilinear_law_matches_expanded_law() {
        for l in [l25(2, 1), l25(4, 2), EllipticLoop::over_integers(7, 2, 0, 2).unwrap()] {
            let pts = l.points();
            for (i, p) in pts.iter().enumerate().step_by(3) {
                for q in pts.iter().skip(i % 5).step_by(7) {
                    let fast = l.add_raw(p.proj(), q.proj());
                    let slow = expanded_sum(&l, p, q);
                    assert!(minors_vanish(l.ring(), &fast, &slow));
                    assert_eq!(
                        ProjPoint::normalize(l.ring(), slow[0], slow[1], slow[2]).unwrap(),
                        *l.add(p, q).unwrap().proj()
                    );
                }
            }
        }
    }

    #[test]
    fn identity_and_inverse() {
        let l = l25(2, 1);
        for p in l.points() {
            assert_eq!(l.add(&p, &LoopPoint::identity()).unwrap(), p);
            assert_eq!(l.add(&p, &l.neg(&p)).unwrap(), LoopPoint::identity());
            assert_eq!(l.neg(&l.neg(&p)), p);
        }
    }

    #[test]
    fn doubling_matches_affine_tangent() {
        // points on the 0-layer, where the classical affine formulas apply
        let l = l25(2, 1);
        let r = *l.ring();
        let on_curve: Vec<_> = l
            .affine_points()
            .into_iter()
            .filter(|p| l.eval_f(p.proj()).is_zero())
            .collect();
        assert!(!on_curve.is_empty());
        for p in on_curve {
            let (x, y) = l.affine_coords(&p).unwrap();
            let lambda = r.mul(
                r.add(r.scale(3, r.mul(x, x)), l.a()),
                r.inverse(r.scale(2, y)).unwrap(),
            );
            let x3 = r.sub(r.mul(lambda, lambda), r.scale(2, x));
            let y3 = r.sub(r.mul(lambda, r.sub(x, x3)), y);
            let expected = l.point_from_elems(x3, y3, r.one()).unwrap();
            assert_eq!(l.add(&p, &p).unwrap(), expected);
        }
        let p = l.point_from_ints(0, 1, 1).unwrap();
        assert_eq!(l.add(&p, &p).unwrap(), l.point_from_ints(1, 23, 1).unwrap());
    }

    #[test]
    fn negation_examples() {
        let l = l25(4, 2);
        assert_eq!(l.neg(&LoopPoint::identity()), LoopPoint::identity());
        let p = l.point_from_ints(3, 1, 1).unwrap();
        assert_eq!(l.neg(&p), l.point_from_ints(3, 24, 1).unwrap());
    }

    #[test]
    fn scalar_examples() {
        let l = EllipticLoop::over_integers(5, 3, 2, 1).unwrap();
        let g = l.point_from_ints(5, 1, 0).unwrap();
        assert_eq!(l.mul(0, &g).unwrap(), LoopPoint::identity());
        assert_eq!(l.mul(25, &g).unwrap(), LoopPoint::identity());
        assert_ne!(l.mul(5, &g).unwrap(), LoopPoint::identity());
        assert_eq!(l.order_of(&g), Ok(25));
        assert_eq!(l.order_of(&l.point_from_ints(0, 1, 5).unwrap()), Ok(25));
        assert_eq!(l.order_of(&LoopPoint::identity()), Ok(1));

        let l = l25(4, 2);
        let p = l.point_from_ints(3, 1, 1).unwrap();
        let three_p = l.mul(3, &p).unwrap();
        assert_eq!(three_p, l.mul_unary(3, &p).unwrap());
        assert!(l.project(&three_p).is_infinity());
        assert!(l.is_at_infinity(&three_p));
    }

    #[test]
    fn double_and_add_matches_recursion() {
        for l in [l25(2, 1), EllipticLoop::over_integers(5, 3, 4, 2).unwrap()] {
            let pts = l.points();
            for p in pts.iter().step_by(11) {
                let mults = l.multiples(p, 80).unwrap();
                for n in 0..=80i64 {
                    assert_eq!(l.mul(n, p).unwrap(), mults[n as usize]);
                    assert_eq!(l.mul(-n, p).unwrap(), l.neg(&mults[n as usize]));
                    assert_eq!(l.mul_unary(-n, p).unwrap(), l.mul(-n, p).unwrap());
                }
            }
        }
    }

    #[test]
    fn f_and_hessian_values() {
        let l = l25(4, 2);
        let o = ProjPoint::identity();
        assert!(l.eval_f(&o).is_zero());
        assert!(l.eval_hessian(&o).is_zero());
        let p = ProjPoint::from_ints(l.ring(), 3, 1, 1).unwrap();
        assert!(l.ring().in_ideal(l.eval_hessian(&p)));

        let l = l25(2, 1);
        let p = ProjPoint::from_ints(l.ring(), 0, 1, 1).unwrap();
        assert_eq!(l.eval_hessian(&p), l.ring().int(7));
    }

    #[test]
    fn lift_affine_examples() {
        let l = l25(4, 2);
        let r = *l.ring();
        let p = l.point_from_ints(3, 1, 1).unwrap();
        assert_eq!(l.lift_affine(&p, r.zero()), Ok(r.int(10)));
        assert_eq!(l.lift_affine(&p, r.int(5)), Ok(r.int(20)));
        assert_eq!(l.lift_affine(&p, r.int(1)), Err(Error::NotInMaximalIdeal));
        assert_eq!(l.lift_affine(&LoopPoint::identity(), r.zero()), Err(Error::NotAffine));

        let l2 = l25(2, 1);
        let q = l2.point_from_ints(0, 1, 1).unwrap();
        assert_eq!(l2.lift_affine(&q, r.zero()), Ok(r.zero()));
    }

    #[test]
    fn lift_affine_lands_on_shifted_curve() {
        let l = EllipticLoop::over_integers(5, 3, 2, 1).unwrap();
        let r = *l.ring();
        for p in l.affine_points().iter().step_by(17) {
            for alpha in r.ideal_power(1).step_by(3) {
                let beta = l.lift_affine(p, alpha).unwrap();
                assert!(r.in_ideal(beta));
                let shifted = EllipticLoop::new(r, r.add(l.a(), alpha), r.add(l.b(), beta)).unwrap();
                assert!(shifted.eval_f(p.proj()).is_zero());
            }
        }
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::ring::RingKind;
    use proptest::prelude::*;

    fn instance() -> impl Strategy<Value = EllipticLoop> {
        (prop::sample::select(alloc::vec![(5u32, 1u32), (5, 2), (5, 3), (5, 4), (7, 2), (7, 3), (11, 2)]), any::<bool>(), 0i64..121, 0i64..121)
            .prop_filter_map("singular or even order", |((p, e), poly, a, b)| {
                let kind = if poly { RingKind::TruncatedPolynomial } else { RingKind::IntegerQuotient };
                let ring = Ring::new(kind, p, e).ok()?;
                EllipticLoop::new(ring, ring.elem(a as u64 % ring.order()).ok()?, ring.elem(b as u64 % ring.order()).ok()?).ok()
            })
    }

    fn pick(l: &EllipticLoop, seed: (usize, usize)) -> LoopPoint {
        let bases = l.residue_curve().points();
        let fiber = l.fiber(bases[seed.0 % bases.len()]);
        fiber[seed.1 % fiber.len()]
    }

    type Seeds = [(usize, usize); 3];

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn loop_invariants(l in instance(), s in any::<Seeds>()) {
            let (p, q, r) = (pick(&l, s[0]), pick(&l, s[1]), pick(&l, s[2]));
            let pq = l.add(&p, &q).unwrap();
            prop_assert!(l.contains(pq.proj()));
            prop_assert_eq!(pq, l.add(&q, &p).unwrap());
            let curve = l.residue_curve();
            prop_assert_eq!(l.project(&pq), curve.add(l.project(&p), l.project(&q)));
            prop_assert_eq!(l.add(&p, &l.add(&l.neg(&p), &q).unwrap()).unwrap(), q);
            prop_assert_eq!(l.neg(&l.neg(&r)), r);
            if pq.is_identity() {
                prop_assert_eq!(q, l.neg(&p));
            }
        }

        #[test]
        fn scalar_multiplication(l in instance(), s in any::<(usize, usize)>(), n in -60i64..60, k in -60i64..60) {
            let p = pick(&l, s);
            let np = l.mul(n, &p).unwrap();
            prop_assert_eq!(np, l.mul_unary(n, &p).unwrap());
            prop_assert_eq!(l.mul(n + k, &p).unwrap(), l.add(&np, &l.mul(k, &p).unwrap()).unwrap());
            prop_assert_eq!(l.mul(n * k, &p).unwrap(), l.mul(k, &np).unwrap());
        }
    }
}
