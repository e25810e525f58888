//! Points of `P^2(R)`: primitive triples modulo unit scaling.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

/// A primitive triple in canonical form.
///
/// The first unit among `Y`, `Z`, `X` (in that priority) is scaled to `1`,
/// so structural equality coincides with projective equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    x: RingElem,
    y: RingElem,
    z: RingElem,
}

impl ProjPoint {
    /// Canonical representative of `(x : y : z)`.
    pub fn normalize(ring: &Ring, x: RingElem, y: RingElem, z: RingElem) -> Result<ProjPoint> {
        let pivot = [y, z, x]
            .into_iter()
            .find(|&c| ring.is_unit(c))
            .ok_or(Error::NotPrimitive)?;
        if pivot == ring.one() {
            return Ok(ProjPoint { x, y, z });
        }
        let s = ring.inverse(pivot)?;
        Ok(ProjPoint {
            x: ring.mul(s, x),
            y: ring.mul(s, y),
            z: ring.mul(s, z),
        })
    }

    /// Wraps coordinates that are already in canonical form.
    pub(crate) fn from_canonical(x: RingElem, y: RingElem, z: RingElem) -> ProjPoint {
        ProjPoint { x, y, z }
    }

    pub fn from_ints(ring: &Ring, x: i64, y: i64, z: i64) -> Result<ProjPoint> {
        ProjPoint::normalize(ring, ring.int(x), ring.int(y), ring.int(z))
    }

    /// Builds a point from canonical residue codes, normalizing on the way.
    pub fn from_codes(ring: &Ring, coords: [u64; 3]) -> Result<ProjPoint> {
        ProjPoint::normalize(
            ring,
            ring.elem(coords[0])?,
            ring.elem(coords[1])?,
            ring.elem(coords[2])?,
        )
    }

    /// `(0 : 1 : 0)`.
    pub fn identity() -> ProjPoint {
        ProjPoint {
            x: RingElem::default(),
            y: RingElem::raw(1),
            z: RingElem::default(),
        }
    }

    #[inline]
    pub fn x(&self) -> RingElem {
        self.x
    }

    #[inline]
    pub fn y(&self) -> RingElem {
        self.y
    }

    #[inline]
    pub fn z(&self) -> RingElem {
        self.z
    }

    pub fn coords(&self) -> [RingElem; 3] {
        [self.x, self.y, self.z]
    }

    pub fn codes(&self) -> [u32; 3] {
        [self.x.value(), self.y.value(), self.z.value()]
    }

    /// Affine means the last coordinate is a unit.
    pub fn is_affine(&self, ring: &Ring) -> bool {
        ring.is_unit(self.z)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.x, self.y, self.z)
    }
}

/// `true` iff all 2-minors of the 2x3 matrix with rows `a`, `b` vanish.
///
/// For primitive rows this is the rank-one criterion for projective equality.
pub fn minors_vanish(ring: &Ring, a: &[RingElem; 3], b: &[RingElem; 3]) -> bool {
    (0..3).all(|i| {
        (i + 1..3).all(|j| ring.mul(a[i], b[j]) == ring.mul(a[j], b[i]))
    })
}

/// Projective equality by the rank of the stacked coordinate matrix.
pub fn proj_equal(ring: &Ring, p: &ProjPoint, q: &ProjPoint) -> bool {
    minors_vanish(ring, &p.coords(), &q.coords())
}

/// `|P^n(R)| = sum_{i=0}^n |R|^(n-i) |m|^i`.
pub fn count_projective(n: u32, ring: &Ring) -> u64 {
    let (r, m) = (ring.order(), ring.ideal_order());
    (0..=n).map(|i| r.pow(n - i) * m.pow(i)).sum()
}

/// Every canonical point of `P^2(R)`.
pub fn plane_points(ring: &Ring) -> Vec<ProjPoint> {
    let one = ring.one();
    let mut out = Vec::with_capacity(count_projective(2, ring) as usize);
    for x in ring.elements() {
        for z in ring.elements() {
            out.push(ProjPoint { x, y: one, z });
        }
    }
    for x in ring.elements() {
        for y in ring.ideal_power(1) {
            out.push(ProjPoint { x, y, z: one });
        }
    }
    for y in ring.ideal_power(1) {
        for z in ring.ideal_power(1) {
            out.push(ProjPoint { x: one, y, z });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z25() -> Ring {
        Ring::integers(5, 2).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let r = z25();
        let pt = ProjPoint::from_ints(&r, 2, 4, 6).unwrap();
        // scale by inverse(4) = 19
        assert_eq!(pt.codes(), [13, 1, 14]);
        assert_eq!(ProjPoint::from_ints(&r, 0, 1, 0).unwrap(), ProjPoint::identity());
        assert_eq!(ProjPoint::from_ints(&r, 5, 10, 15), Err(Error::NotPrimitive));
        // Y in m, Z unit
        assert_eq!(ProjPoint::from_ints(&r, 4, 10, 2).unwrap().codes(), [2, 5, 1]);
        // only X unit
        assert_eq!(ProjPoint::from_ints(&r, 2, 10, 5).unwrap().codes(), [1, 5, 15]);
    }

    #[test]
    fn proj_equal_examples() {
        let r = z25();
        let raw = |x: i64, y: i64, z: i64| [r.int(x), r.int(y), r.int(z)];
        assert!(minors_vanish(&r, &raw(1, 2, 3), &raw(2, 4, 6)));
        assert!(!minors_vanish(&r, &raw(5, 1, 0), &raw(5, 1, 5)));
        assert!(minors_vanish(&r, &raw(5, 1, 0), &raw(10, 2, 0)));
    }

    #[test]
    fn projective_counts() {
        assert_eq!(count_projective(2, &z25()), 775);
        assert_eq!(count_projective(1, &Ring::integers(5, 1).unwrap()), 6);
        assert_eq!(count_projective(2, &Ring::integers(5, 1).unwrap()), 31);
    }

    #[test]
    fn enumeration_matches_count() {
        for r in [
            Ring::integers(5, 1).unwrap(),
            z25(),
            Ring::integers(7, 2).unwrap(),
            Ring::truncated(5, 2).unwrap(),
        ] {
            let pts = plane_points(&r);
            assert_eq!(pts.len() as u64, count_projective(2, &r));
            let mut sorted = pts.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), pts.len());
            for p in &pts {
                assert_eq!(ProjPoint::normalize(&r, p.x, p.y, p.z).unwrap(), *p);
            }
        }
    }

    /// Every primitive triple over Z/25: the minor test agrees with equality
    /// of canonical forms, which makes it an equivalence relation.
    #[test]
    fn proj_equal_agrees_with_canonical_forms() {
        let r = z25();
        let mut triples = Vec::new();
        for x in r.elements() {
            for y in r.elements() {
                for z in r.elements() {
                    if let Ok(c) = ProjPoint::normalize(&r, x, y, z) {
                        triples.push(([x, y, z], c));
                    }
                }
            }
        }
        assert_eq!(triples.len(), 15500);
        for (a, ca) in &triples {
            for (b, cb) in &triples {
                assert_eq!(minors_vanish(&r, a, b), ca == cb);
            }
        }
    }

    #[test]
    fn unit_scaling_invariance() {
        let r = z25();
        for u in r.units() {
            for (x, y, z) in [(2, 4, 6), (5, 1, 0), (3, 10, 1), (1, 5, 5)] {
                let (x, y, z) = (r.int(x), r.int(y), r.int(z));
                assert_eq!(
                    ProjPoint::normalize(&r, r.mul(u, x), r.mul(u, y), r.mul(u, z)),
                    ProjPoint::normalize(&r, x, y, z)
                );
            }
        }
    }
}
