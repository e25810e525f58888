//! Associativity matrices, the infinity part over `Z/p^eZ`, and torsion
//! fibers at nilpotency two.

use alloc::vec::Vec;

use crate::elliptic_loop::{EllipticLoop, LoopPoint};
use crate::error::{Error, Result};
use crate::layers::Layer;
use crate::projective::{proj_equal, ProjPoint};
use crate::ring::{Ring, RingElem, RingKind};

/// The `2 x n` matrix with columns `(F(P_i), H(P_i))` at canonical
/// representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssocMatrix {
    columns: Vec<(RingElem, RingElem)>,
}

impl AssocMatrix {
    pub fn new(lp: &EllipticLoop, pts: &[LoopPoint]) -> AssocMatrix {
        AssocMatrix {
            columns: pts
                .iter()
                .map(|p| (lp.eval_f(p.proj()), lp.eval_hessian(p.proj())))
                .collect(),
        }
    }

    pub fn columns(&self) -> &[(RingElem, RingElem)] {
        &self.columns
    }

    /// Largest `k` whose `k`-minors are not all zero.
    pub fn rank(&self, ring: &Ring) -> u32 {
        let cols = &self.columns;
        for (i, &(f1, h1)) in cols.iter().enumerate() {
            for &(f2, h2) in &cols[i + 1..] {
                if ring.mul(f1, h2) != ring.mul(f2, h1) {
                    return 2;
                }
            }
        }
        if cols.iter().any(|&(f, h)| !f.is_zero() || !h.is_zero()) {
            1
        } else {
            0
        }
    }
}

/// `(P1 + P2) + P3 == P1 + (P2 + P3)`.
pub fn triple_associates(lp: &EllipticLoop, p1: &LoopPoint, p2: &LoopPoint, p3: &LoopPoint) -> Result<bool> {
    let left = lp.add(&lp.add(p1, p2)?, p3)?;
    let right = lp.add(p1, &lp.add(p2, p3)?)?;
    Ok(proj_equal(lp.ring(), left.proj(), right.proj()))
}

/// The rank criterion: `true` when the associativity matrix has rank at most
/// one, in which case the triple associates. A rank-one triple that fails to
/// associate is reported as an internal error.
pub fn assoc_sufficient(lp: &EllipticLoop, p1: &LoopPoint, p2: &LoopPoint, p3: &LoopPoint) -> Result<bool> {
    if AssocMatrix::new(lp, &[*p1, *p2, *p3]).rank(lp.ring()) > 1 {
        return Ok(false);
    }
    if !triple_associates(lp, p1, p2, p3)? {
        return Err(Error::Internal("rank-one triple does not associate"));
    }
    Ok(true)
}

/// Coordinates of a point at infinity in the basis `(p:1:0)`, `(0:1:p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InfDecomposition {
    pub alpha: u64,
    pub beta: u64,
}

/// `(p:1:0)` and `(0:1:p)`.
pub fn infinity_generators(lp: &EllipticLoop) -> Result<(LoopPoint, LoopPoint)> {
    let r = lp.ring();
    let (mu, one, zero) = (r.uniformizer(), r.one(), r.zero());
    Ok((
        lp.point(ProjPoint::from_canonical(mu, one, zero))?,
        lp.point(ProjPoint::from_canonical(zero, one, mu))?,
    ))
}

/// `alpha (p:1:0) + beta (0:1:p)`.
pub fn infinity_compose(lp: &EllipticLoop, d: InfDecomposition) -> Result<LoopPoint> {
    let (g1, g2) = infinity_generators(lp)?;
    lp.add(&lp.mul(d.alpha as i64, &g1)?, &lp.mul(d.beta as i64, &g2)?)
}

fn require_integers(lp: &EllipticLoop) -> Result<()> {
    if lp.ring().kind() != RingKind::IntegerQuotient {
        return Err(Error::UnsupportedRing);
    }
    Ok(())
}

/// The unique `0 <= alpha, beta < p^(e-1)` with
/// `P = alpha (p:1:0) + beta (0:1:p)`, for `P` over the identity.
///
/// Recovers one base-`p` digit of each coefficient per step: if the current
/// partial sum `C` agrees with the target up to the `k`-th digit, then
/// `X_P - X_C` and `Z_P - Z_C` are `p^(k+1)` times the next digits modulo
/// `p^(k+2)`. The answer is checked by recomputation, with an exhaustive
/// search as a fallback.
pub fn infinity_decompose(lp: &EllipticLoop, pt: &LoopPoint) -> Result<InfDecomposition> {
    require_integers(lp)?;
    if lp.is_affine(pt) || !lp.ring().in_ideal(pt.x()) {
        return Err(Error::PreconditionUnmet("point is not at infinity"));
    }
    let d = decompose_digits(lp, pt)?;
    if infinity_compose(lp, d)? == *pt {
        return Ok(d);
    }
    infinity_decompose_exhaustive(lp, pt)
}

/// The digit-by-digit candidate, not yet checked.
fn decompose_digits(lp: &EllipticLoop, pt: &LoopPoint) -> Result<InfDecomposition> {
    let r = lp.ring();
    let p = r.prime() as u64;
    let e = r.exponent();
    let mut d = InfDecomposition { alpha: 0, beta: 0 };
    let mut scale = 1u64;
    for k in 0..e - 1 {
        let c = infinity_compose(lp, d)?;
        let dx = r.sub(pt.x(), c.x());
        let dz = r.sub(pt.z(), c.z());
        if !r.valuation(dx).at_least(k + 1) || !r.valuation(dz).at_least(k + 1) {
            break;
        }
        let shift = p.pow(k + 1);
        d.alpha += (dx.value() as u64 / shift % p) * scale;
        d.beta += (dz.value() as u64 / shift % p) * scale;
        scale *= p;
    }
    Ok(d)
}

/// Reference search over the whole coefficient box.
pub fn infinity_decompose_exhaustive(lp: &EllipticLoop, pt: &LoopPoint) -> Result<InfDecomposition> {
    require_integers(lp)?;
    let n = lp.ring().ideal_order();
    let (g1, g2) = infinity_generators(lp)?;
    let m1 = lp.multiples(&g1, n - 1)?;
    let m2 = lp.multiples(&g2, n - 1)?;
    for (alpha, a) in m1.iter().enumerate() {
        for (beta, b) in m2.iter().enumerate() {
            if lp.add(a, b)? == *pt {
                return Ok(InfDecomposition { alpha: alpha as u64, beta: beta as u64 });
            }
        }
    }
    Err(Error::Internal("point at infinity has no decomposition"))
}

/// No nonzero multiple of `(0:1:p)` lies on any layer.
pub fn forbidden_locus_check(lp: &EllipticLoop) -> Result<bool> {
    require_integers(lp)?;
    let (_, g2) = infinity_generators(lp)?;
    let n = lp.ring().ideal_order();
    let layers: Vec<Layer<'_>> = Layer::all(lp).collect();
    let mut q = g2;
    for _ in 1..n {
        if layers.iter().any(|l| l.contains(q.proj())) {
            return Ok(false);
        }
        q = lp.add(&q, &g2)?;
    }
    Ok(true)
}

/// `L_{q/P}`: points over `pi(P)` killed by `q`.
pub fn torsion_fiber(lp: &EllipticLoop, q: i64, pt: &LoopPoint) -> Result<Vec<LoopPoint>> {
    let mut out = Vec::new();
    for cand in lp.fiber(lp.project(pt)) {
        if lp.mul(q, &cand)?.is_identity() {
            out.push(cand);
        }
    }
    Ok(out)
}

fn require_low_nilpotency(lp: &EllipticLoop) -> Result<()> {
    let e = lp.ring().exponent();
    if e > 2 {
        return Err(Error::NilpotencyTooHigh { e, max: 2 });
    }
    Ok(())
}

/// `D_{q/P}` together with the two structural checks made on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceGroup {
    /// Sorted, without repetition.
    pub elements: Vec<LoopPoint>,
    /// Lies at infinity, contains `O`, and is closed under `+` and `-`.
    pub is_subgroup: bool,
    /// `P + D_{q/P}` equals `L_{q/P}` as a set.
    pub translates_onto_fiber: bool,
}

/// All differences `P1 - P2` of points of `L_{q/P}`; needs `e <= 2` and
/// `qP = O`.
pub fn difference_group(lp: &EllipticLoop, q: i64, pt: &LoopPoint) -> Result<DifferenceGroup> {
    require_low_nilpotency(lp)?;
    if !lp.mul(q, pt)?.is_identity() {
        return Err(Error::PreconditionUnmet("q P is not the identity"));
    }
    let fiber = torsion_fiber(lp, q, pt)?;
    let mut elements = Vec::with_capacity(fiber.len() * fiber.len());
    for a in &fiber {
        for b in &fiber {
            elements.push(lp.sub(a, b)?);
        }
    }
    elements.sort_unstable();
    elements.dedup();

    let mut is_subgroup = elements.binary_search(&LoopPoint::identity()).is_ok();
    for a in &elements {
        is_subgroup &= lp.is_at_infinity(a) && elements.binary_search(&lp.neg(a)).is_ok();
        for b in &elements {
            is_subgroup &= elements.binary_search(&lp.add(a, b)?).is_ok();
        }
    }
    let mut translate = elements
        .iter()
        .map(|d| lp.add(pt, d))
        .collect::<Result<Vec<_>>>()?;
    translate.sort_unstable();
    translate.dedup();
    let mut sorted_fiber = fiber;
    sorted_fiber.sort_unstable();
    Ok(DifferenceGroup {
        elements,
        is_subgroup,
        translates_onto_fiber: translate == sorted_fiber,
    })
}

/// A projective line `a x + b y + c z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Line {
    pub coeffs: [RingElem; 3],
}

impl Line {
    pub fn contains(&self, ring: &Ring, pt: &ProjPoint) -> bool {
        let [a, b, c] = self.coeffs;
        let v = ring.add(
            ring.add(ring.mul(a, pt.x()), ring.mul(b, pt.y())),
            ring.mul(c, pt.z()),
        );
        v.is_zero()
    }
}

/// The line through a torsion fiber, and its reduction by the uniformizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorsionLine {
    pub line: Line,
    /// `-b' x + (b' X - a' Z) y + a' z` with `a = p a'`, `b = p b'`.
    pub reduced: Line,
    /// The generator was `O`; both lines are then just some line through `P`.
    pub degenerate: bool,
}

/// With `P = (X:1:Z)` and a generator `(m_x:1:m_z)` of `D_{q/P}`, the points
/// `P + k (m_x:1:m_z)` are `(X + k a : 1 : Z + k b)` for the `a`, `b` below,
/// so they lie on `-b x + (b X - a Z) y + a z = 0`.
pub fn torsion_line(lp: &EllipticLoop, pt: &LoopPoint, generator: &LoopPoint) -> Result<TorsionLine> {
    require_low_nilpotency(lp)?;
    let r = lp.ring();
    let (x, z) = (pt.x(), pt.z());
    let (mx, mz) = (generator.x(), generator.z());
    let (a, b) = (lp.a(), lp.b());
    if generator.is_identity() {
        // z - Z y = 0 passes through P
        let line = Line { coeffs: [r.zero(), r.neg(z), r.one()] };
        return Ok(TorsionLine { line, reduced: line, degenerate: true });
    }
    let m = |u: RingElem, v: RingElem| r.mul(u, v);
    let (xx, xz, zz) = (m(x, x), m(x, z), m(z, z));

    let mut alpha = m(m(a, a), m(zz, mz));
    alpha = r.sub(alpha, m(a, m(xx, mz)));
    alpha = r.sub(alpha, r.scale(2, m(a, m(xz, mx))));
    alpha = r.sub(alpha, r.scale(6, m(b, m(xz, mz))));
    alpha = r.sub(alpha, r.scale(3, m(b, m(zz, mx))));
    alpha = r.add(alpha, mx);

    let mut beta = r.scale(2, m(a, m(xz, mz)));
    beta = r.add(beta, m(a, m(zz, mx)));
    beta = r.add(beta, r.scale(3, m(b, m(zz, mz))));
    beta = r.add(beta, r.scale(3, m(xx, mx)));
    beta = r.add(beta, mz);

    let through = |al: RingElem, be: RingElem| Line {
        coeffs: [r.neg(be), r.sub(m(be, x), m(al, z)), al],
    };
    Ok(TorsionLine {
        line: through(alpha, beta),
        reduced: through(r.divide_by_uniformizer(alpha)?, r.divide_by_uniformizer(beta)?),
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::CayleyTable;

    fn lp(p: u32, e: u32, a: i64, b: i64) -> EllipticLoop {
        EllipticLoop::over_integers(p, e, a, b).unwrap()
    }

    #[test]
    fn rank_examples() {
        let l = lp(5, 2, 2, 1);
        let o = LoopPoint::identity();
        assert_eq!(AssocMatrix::new(&l, &[o, o, o]).rank(l.ring()), 0);
        for layer in crate::layers::Layer::all(&l) {
            let pts = layer.points();
            let m = AssocMatrix::new(&l, &[pts[3], pts[10], pts[30]]);
            assert!(m.rank(l.ring()) <= 1);
        }
    }

    #[test]
    fn rank_criterion_is_sound_on_small_loop() {
        let l = lp(5, 2, 2, 1);
        let t = CayleyTable::of_loop(&l).unwrap();
        let r = *l.ring();
        let n = t.len() as u32;
        let fh: Vec<_> = t
            .elems()
            .iter()
            .map(|p| (l.eval_f(p.proj()), l.eval_hessian(p.proj())))
            .collect();
        let minor = |i: u32, j: u32| {
            let ((f1, h1), (f2, h2)) = (fh[i as usize], fh[j as usize]);
            r.mul(f1, h2) != r.mul(f2, h1)
        };
        let mut rank_one = 0u64;
        for a in 0..n {
            for b in 0..n {
                if minor(a, b) {
                    continue;
                }
                let ab = t.add(a, b);
                for c in 0..n {
                    if minor(a, c) || minor(b, c) {
                        continue;
                    }
                    rank_one += 1;
                    assert_eq!(t.add(ab, c), t.add(a, t.add(b, c)));
                }
            }
        }
        assert!(rank_one > 0);
    }

    #[test]
    fn multiples_satisfy_rank_criterion() {
        let l = lp(5, 3, 2, 1);
        let p = l.point_from_ints(0, 1, 1).unwrap();
        let q = l.point_from_ints(5, 1, 25).unwrap();
        for pt in [p, q] {
            let m = l.multiples(&pt, 40).unwrap();
            assert_eq!(assoc_sufficient(&l, &m[3], &m[17], &m[40]), Ok(true));
        }
    }

    #[test]
    fn decompose_generators() {
        let l = lp(5, 3, 2, 1);
        let (g1, g2) = infinity_generators(&l).unwrap();
        assert_eq!(infinity_decompose(&l, &g1), Ok(InfDecomposition { alpha: 1, beta: 0 }));
        assert_eq!(infinity_decompose(&l, &g2), Ok(InfDecomposition { alpha: 0, beta: 1 }));
        assert_eq!(infinity_decompose(&l, &LoopPoint::identity()), Ok(InfDecomposition { alpha: 0, beta: 0 }));
        let aff = l.point_from_ints(0, 1, 1).unwrap();
        assert!(infinity_decompose(&l, &aff).is_err());
    }

    #[test]
    fn decomposition_agrees_with_exhaustive_search() {
        for (e, a, b) in [(2, 2, 1), (3, 4, 2), (4, 2, 1)] {
            let l = lp(5, e, a, b);
            for pt in l.infinity_points().iter().step_by(if e == 4 { 97 } else { 7 }) {
                assert_eq!(infinity_decompose(&l, pt), infinity_decompose_exhaustive(&l, pt));
            }
        }
    }

    #[test]
    fn digit_method_needs_no_fallback() {
        for e in [2, 3, 4] {
            let l = lp(5, e, 2, 1);
            for pt in l.infinity_points().iter().step_by(if e == 4 { 31 } else { 1 }) {
                let d = decompose_digits(&l, pt).unwrap();
                assert_eq!(infinity_compose(&l, d).unwrap(), *pt);
            }
        }
    }

    #[test]
    fn forbidden_locus() {
        assert_eq!(forbidden_locus_check(&lp(5, 1, 2, 1)), Ok(true));
        assert_eq!(forbidden_locus_check(&lp(5, 2, 2, 1)), Ok(true));
        assert_eq!(forbidden_locus_check(&lp(5, 3, 4, 2)), Ok(true));
    }

    #[test]
    fn torsion_fibers() {
        let l = lp(5, 2, 2, 1);
        assert_eq!(torsion_fiber(&l, 1, &LoopPoint::identity()), Ok(alloc::vec![LoopPoint::identity()]));
        assert_eq!(torsion_fiber(&l, 7, &LoopPoint::identity()).unwrap().len(), 1);
        let p = l.point_from_ints(0, 1, 1).unwrap();
        let fiber = torsion_fiber(&l, 7, &p).unwrap();
        assert_eq!(fiber.len(), 5);

        let d = difference_group(&l, 7, &fiber[0]).unwrap();
        assert_eq!(d.elements.len(), 5);
        assert!(d.is_subgroup && d.translates_onto_fiber);
        let d0 = difference_group(&l, 7, &LoopPoint::identity()).unwrap();
        assert_eq!(d0.elements, alloc::vec![LoopPoint::identity()]);

        assert_eq!(
            difference_group(&lp(5, 3, 2, 1), 7, &LoopPoint::identity()),
            Err(Error::NilpotencyTooHigh { e: 3, max: 2 })
        );
    }

    #[test]
    fn torsion_lines_contain_fibers() {
        let l = lp(5, 2, 2, 1);
        let r = *l.ring();
        for base in l.residue_curve().points().iter().filter(|b| !b.is_infinity()) {
            let any = l.fiber(*base)[0];
            let fiber = torsion_fiber(&l, 7, &any).unwrap();
            let p = fiber[0];
            let d = difference_group(&l, 7, &p).unwrap();
            let gen = *d.elements.iter().find(|g| !g.is_identity()).unwrap();
            let tl = torsion_line(&l, &p, &gen).unwrap();
            assert!(!tl.degenerate);
            for q in &fiber {
                assert!(tl.line.contains(&r, q.proj()));
            }
            let on_reduced: Vec<_> = l
                .fiber(*base)
                .into_iter()
                .filter(|q| tl.reduced.contains(&r, q.proj()))
                .collect();
            assert_eq!(on_reduced, fiber);
        }
        let p = l.point_from_ints(0, 1, 1).unwrap();
        let tl = torsion_line(&l, &p, &LoopPoint::identity()).unwrap();
        assert!(tl.degenerate && tl.line.contains(&r, p.proj()));
    }
}
