//! Law batteries, non-associativity witnesses, identities that hold at
//! nilpotency two, and the search for loops that are groups.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elliptic_loop::{EllipticLoop, LoopPoint};
use crate::error::{Error, Result};
use crate::group::{certify_abelian_group, CayleyTable, Magma};
use crate::projective::{plane_points, ProjPoint};
use crate::residue::ResiduePoint;
use crate::ring::RingKind;
use crate::structure::AssocMatrix;

/// Loops up to this size get a Cayley table when a sweep is large enough.
pub const TABLE_LIMIT: usize = 2048;

/// Scalars in `[-POWER_RANGE, POWER_RANGE]` are used by the
/// power-associativity law.
pub const POWER_RANGE: i64 = 32;

/// Identities checked by [`law_suite`] and [`low_nilpotency_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    /// `P + O = P`.
    Identity,
    /// `P + Q = Q + P`.
    Commutative,
    /// `P + Q = O` only for `Q = -P`.
    UniqueInverse,
    /// `P + (-P + Q) = Q`.
    WeakAssociative,
    /// `P + X = P + Y` only for `X = Y`.
    LatinSquare,
    /// `P + (P + Q) = (P + P) + Q`.
    Alternative,
    /// `(P + P) + (P + Q) = P + (Q + (P + P))`.
    Jordan,
    /// `(P + (Q + R)) + R = ((P + R) + R) + Q`.
    Moufang,
    /// Triples of words in `P`, `Q` associate.
    Diassociative,
    /// `(n + m) P = nP + mP`.
    PowerAssociative,
    /// `(P + Q) + R = P + (Q + R)`.
    FullAssociative,
    /// `P + (Q + R) = (P + Q) + R` for `Q`, `R` at infinity.
    InfinityAssociative,
    /// `(P + R1) - (Q + R2) = (P - Q) + (R1 - R2)` for `P`, `Q` in one fiber
    /// and `R1`, `R2` at infinity.
    FiberDifference,
    /// `(P + Q) - R = P + (Q - R)` in one fiber.
    FiberTriple,
    /// `(P1 + P2 - P3) + (Q1 + Q2 - Q3) = (P1 + Q1) + (P2 + Q2) - (P3 + Q3)`,
    /// the `P_i` in one fiber and the `Q_i` in one fiber.
    FiberSumExchange,
    /// `m (P1 + P2 - P3) = mP1 + mP2 - mP3` in one fiber.
    FiberMultiples,
}

/// Where each point of a law's tuple is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    All,
    Infinity,
    /// A point of the fiber chosen by the given fiber variable.
    Fiber(usize),
}

/// Scalars drawn for a law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Scalars {
    None,
    /// Two scalars in `[-POWER_RANGE, POWER_RANGE]`.
    PowerPair,
    /// One scalar in `[0, q p^(e-1))`.
    Period,
}

impl Law {
    /// The general loop laws, in report order.
    pub const LOOP_LAWS: [Law; 11] = [
        Law::Identity,
        Law::Commutative,
        Law::UniqueInverse,
        Law::WeakAssociative,
        Law::LatinSquare,
        Law::Alternative,
        Law::Jordan,
        Law::Moufang,
        Law::Diassociative,
        Law::PowerAssociative,
        Law::FullAssociative,
    ];

    /// Identities specific to nilpotency at most two.
    pub const LOW_NILPOTENCY: [Law; 5] = [
        Law::InfinityAssociative,
        Law::FiberDifference,
        Law::FiberTriple,
        Law::FiberSumExchange,
        Law::FiberMultiples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Identity => "identity",
            Law::Commutative => "commutative",
            Law::UniqueInverse => "unique-inverse",
            Law::WeakAssociative => "weak-associative",
            Law::LatinSquare => "latin-square",
            Law::Alternative => "alternative",
            Law::Jordan => "jordan",
            Law::Moufang => "moufang",
            Law::Diassociative => "diassociative",
            Law::PowerAssociative => "power-associative",
            Law::FullAssociative => "full-associative",
            Law::InfinityAssociative => "infinity-associative",
            Law::FiberDifference => "fiber-difference",
            Law::FiberTriple => "fiber-triple",
            Law::FiberSumExchange => "fiber-sum-exchange",
            Law::FiberMultiples => "fiber-multiples",
        }
    }

    pub fn from_name(name: &str) -> Option<Law> {
        Law::LOOP_LAWS
            .iter()
            .chain(Law::LOW_NILPOTENCY.iter())
            .copied()
            .find(|l| l.name() == name)
    }

    fn slots(self) -> &'static [Slot] {
        use Slot::*;
        match self {
            Law::Identity => &[All],
            Law::Commutative
            | Law::UniqueInverse
            | Law::WeakAssociative
            | Law::Alternative
            | Law::Jordan
            | Law::Diassociative => &[All, All],
            Law::LatinSquare | Law::Moufang | Law::FullAssociative => &[All, All, All],
            Law::PowerAssociative => &[All],
            Law::InfinityAssociative => &[All, Infinity, Infinity],
            Law::FiberDifference => &[Fiber(0), Fiber(0), Infinity, Infinity],
            Law::FiberTriple | Law::FiberMultiples => &[Fiber(0), Fiber(0), Fiber(0)],
            Law::FiberSumExchange => &[Fiber(0), Fiber(0), Fiber(0), Fiber(1), Fiber(1), Fiber(1)],
        }
    }

    fn fiber_vars(self) -> usize {
        match self {
            Law::FiberDifference | Law::FiberTriple | Law::FiberMultiples => 1,
            Law::FiberSumExchange => 2,
            _ => 0,
        }
    }

    fn scalars(self) -> Scalars {
        match self {
            Law::PowerAssociative => Scalars::PowerPair,
            Law::FiberMultiples => Scalars::Period,
            _ => Scalars::None,
        }
    }

    /// Evaluates the identity on one tuple.
    fn holds<M: Magma>(self, m: &M, pts: &[M::Elem], ks: &[i64]) -> Result<bool> {
        let z = m.zero();
        Ok(match self {
            Law::Identity => m.op(pts[0], z)? == pts[0] && m.op(z, pts[0])? == pts[0],
            Law::Commutative => m.op(pts[0], pts[1])? == m.op(pts[1], pts[0])?,
            Law::UniqueInverse => m.op(pts[0], pts[1])? != z || pts[1] == m.inv(pts[0]),
            Law::WeakAssociative => {
                let (p, q) = (pts[0], pts[1]);
                m.op(p, m.op(m.inv(p), q)?)? == q
            }
            Law::LatinSquare => {
                let (p, x, y) = (pts[0], pts[1], pts[2]);
                x == y || m.op(p, x)? != m.op(p, y)?
            }
            Law::Alternative => {
                let (p, q) = (pts[0], pts[1]);
                m.op(p, m.op(p, q)?)? == m.op(m.op(p, p)?, q)?
            }
            Law::Jordan => {
                let (p, q) = (pts[0], pts[1]);
                let pp = m.op(p, p)?;
                m.op(pp, m.op(p, q)?)? == m.op(p, m.op(q, pp)?)?
            }
            Law::Moufang => {
                let (p, q, r) = (pts[0], pts[1], pts[2]);
                m.op(m.op(p, m.op(q, r)?)?, r)? == m.op(m.op(m.op(p, r)?, r)?, q)?
            }
            Law::Diassociative => {
                let (p, q) = (pts[0], pts[1]);
                let words = [
                    p,
                    q,
                    m.inv(p),
                    m.inv(q),
                    m.op(p, q)?,
                    m.op(p, p)?,
                    m.op(q, q)?,
                    m.sub(p, q)?,
                ];
                for &a in &words {
                    for &b in &words {
                        let ab = m.op(a, b)?;
                        for &c in &words {
                            if m.op(ab, c)? != m.op(a, m.op(b, c)?)? {
                                return Ok(false);
                            }
                        }
                    }
                }
                true
            }
            Law::PowerAssociative => {
                let (n, k) = (ks[0], ks[1]);
                m.times(n + k, pts[0])? == m.op(m.times(n, pts[0])?, m.times(k, pts[0])?)?
            }
            Law::FullAssociative | Law::InfinityAssociative => {
                let (p, q, r) = (pts[0], pts[1], pts[2]);
                m.op(m.op(p, q)?, r)? == m.op(p, m.op(q, r)?)?
            }
            Law::FiberDifference => {
                let (p, q, r1, r2) = (pts[0], pts[1], pts[2], pts[3]);
                m.sub(m.op(p, r1)?, m.op(q, r2)?)? == m.op(m.sub(p, q)?, m.sub(r1, r2)?)?
            }
            Law::FiberTriple => {
                let (p, q, r) = (pts[0], pts[1], pts[2]);
                m.sub(m.op(p, q)?, r)? == m.op(p, m.sub(q, r)?)?
            }
            Law::FiberSumExchange => {
                let s = m.sub(m.op(pts[0], pts[1])?, pts[2])?;
                let t = m.sub(m.op(pts[3], pts[4])?, pts[5])?;
                let a = m.op(pts[0], pts[3])?;
                let b = m.op(pts[1], pts[4])?;
                let c = m.op(pts[2], pts[5])?;
                m.op(s, t)? == m.sub(m.op(a, b)?, c)?
            }
            Law::FiberMultiples => {
                let k = ks[0];
                let s = m.sub(m.op(pts[0], pts[1])?, pts[2])?;
                let rhs = m.sub(m.op(m.times(k, pts[0])?, m.times(k, pts[1])?)?, m.times(k, pts[2])?)?;
                m.times(k, s)? == rhs
            }
        })
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A tuple on which a law fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub points: Vec<LoopPoint>,
    pub scalars: Vec<i64>,
}

/// Outcome of checking one law on one loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub law: Law,
    pub holds: bool,
    pub exhaustive: bool,
    /// Number of tuples evaluated.
    pub checked: u64,
    /// Seed of the sampler; `None` for exhaustive runs.
    pub seed: Option<u64>,
    pub counterexample: Option<Counterexample>,
}

/// Re-evaluates a law on a recorded tuple with direct loop arithmetic.
/// Fails when the tuple does not satisfy the law's fiber conditions.
pub fn replay(lp: &EllipticLoop, law: Law, cx: &Counterexample) -> Result<bool> {
    let slots = law.slots();
    let want_scalars = match law.scalars() {
        Scalars::None => 0,
        Scalars::PowerPair => 2,
        Scalars::Period => 1,
    };
    if cx.points.len() != slots.len() || cx.scalars.len() != want_scalars {
        return Err(Error::PreconditionUnmet("tuple has the wrong shape"));
    }
    let mut fibers: [Option<ResiduePoint>; 2] = [None, None];
    for (slot, pt) in slots.iter().zip(&cx.points) {
        if !lp.contains(pt.proj()) {
            return Err(Error::NotOnLoop);
        }
        let base = lp.project(pt);
        let ok = match *slot {
            Slot::All => true,
            Slot::Infinity => base.is_infinity(),
            Slot::Fiber(k) => *fibers[k].get_or_insert(base) == base,
        };
        if !ok {
            return Err(Error::PreconditionUnmet("tuple violates the fiber conditions"));
        }
    }
    law.holds(lp, &cx.points, &cx.scalars)
}

/// Point sets a law draws from, in the element type of a magma.
struct Universe<E> {
    all: Vec<E>,
    infinity: Vec<E>,
    fibers: Vec<Vec<E>>,
    period: i64,
}

impl<E: Copy> Universe<E> {
    fn map<F: Copy>(lp: &EllipticLoop, f: impl Fn(&LoopPoint) -> F) -> Universe<F> {
        let fibers: Vec<Vec<F>> = lp
            .residue_curve()
            .points()
            .iter()
            .map(|&b| lp.fiber(b).iter().map(&f).collect())
            .collect();
        let all = fibers.iter().flatten().copied().collect();
        Universe {
            all,
            infinity: fibers[0].clone(),
            fibers,
            period: (lp.base_order() * lp.ring().ideal_order()) as i64,
        }
    }

    fn domain(&self, slot: Slot, fiber_choice: &[usize]) -> &[E] {
        match slot {
            Slot::All => &self.all,
            Slot::Infinity => &self.infinity,
            Slot::Fiber(k) => &self.fibers[fiber_choice[k]],
        }
    }

    fn scalar_ranges(&self, s: Scalars) -> Vec<(i64, i64)> {
        match s {
            Scalars::None => vec![],
            Scalars::PowerPair => vec![(-POWER_RANGE, POWER_RANGE); 2],
            Scalars::Period => vec![(0, self.period - 1)],
        }
    }

    /// Number of tuples in an exhaustive sweep, saturating.
    fn count(&self, law: Law) -> u64 {
        let scalars: u64 = self
            .scalar_ranges(law.scalars())
            .iter()
            .map(|&(lo, hi)| (hi - lo + 1) as u64)
            .product();
        let mut total = 0u64;
        for_each_choice(self.fibers.len(), law.fiber_vars(), |choice| {
            let per = law
                .slots()
                .iter()
                .map(|&s| self.domain(s, choice).len() as u64)
                .fold(scalars, |acc, n| acc.saturating_mul(n));
            total = total.saturating_add(per);
            true
        });
        total
    }
}

/// Calls `f` on every assignment of `vars` fiber variables; stops early when
/// `f` returns `false`.
fn for_each_choice(fibers: usize, vars: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut choice = vec![0usize; vars];
    loop {
        if !f(&choice) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == vars {
                return true;
            }
            choice[i] += 1;
            if choice[i] < fibers {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Points and scalars of one law instance.
type Tuple<E> = (Vec<E>, Vec<i64>);

/// First failing tuple over the full domain, plus the count checked.
fn sweep<M: Magma>(m: &M, u: &Universe<M::Elem>, law: Law) -> Result<(u64, Option<Tuple<M::Elem>>)> {
    let slots = law.slots();
    let ranges = u.scalar_ranges(law.scalars());
    let mut checked = 0u64;
    let mut found = None;
    let mut err = None;
    for_each_choice(u.fibers.len(), law.fiber_vars(), |choice| {
        let doms: Vec<&[M::Elem]> = slots.iter().map(|&s| u.domain(s, choice)).collect();
        let mut idx = vec![0usize; doms.len()];
        let mut ks: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        if doms.iter().any(|d| d.is_empty()) {
            return true;
        }
        loop {
            let pts: Vec<M::Elem> = idx.iter().zip(&doms).map(|(&i, d)| d[i]).collect();
            checked += 1;
            match law.holds(m, &pts, &ks) {
                Ok(true) => {}
                Ok(false) => {
                    found = Some((pts, ks.clone()));
                    return false;
                }
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            // odometer: scalars fastest, then points
            let mut carried = true;
            for (k, r) in ks.iter_mut().zip(&ranges) {
                if *k < r.1 {
                    *k += 1;
                    carried = false;
                    break;
                }
                *k = r.0;
            }
            if !carried {
                continue;
            }
            let mut done = true;
            for (i, d) in idx.iter_mut().zip(&doms).rev() {
                *i += 1;
                if *i < d.len() {
                    done = false;
                    break;
                }
                *i = 0;
            }
            if done {
                return true;
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok((checked, found))
}

fn sample<M: Magma>(
    m: &M,
    u: &Universe<M::Elem>,
    law: Law,
    n: u64,
    seed: u64,
) -> Result<(u64, Option<Tuple<M::Elem>>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ranges = u.scalar_ranges(law.scalars());
    let mut choice = vec![0usize; law.fiber_vars()];
    for i in 0..n {
        for c in choice.iter_mut() {
            *c = rng.random_range(0..u.fibers.len());
        }
        let pts: Vec<M::Elem> = law
            .slots()
            .iter()
            .map(|&s| {
                let d = u.domain(s, &choice);
                d[rng.random_range(0..d.len())]
            })
            .collect();
        let ks: Vec<i64> = ranges.iter().map(|&(lo, hi)| rng.random_range(lo..=hi)).collect();
        if !law.holds(m, &pts, &ks)? {
            return Ok((i + 1, Some((pts, ks))));
        }
    }
    Ok((n, None))
}

/// Checks a law on all tuples when there are at most `budget` of them,
/// otherwise on `budget` tuples sampled with a seeded ChaCha8 generator.
pub fn law_suite(lp: &EllipticLoop, law: Law, budget: u64, seed: u64) -> Result<LawReport> {
    let direct: Universe<LoopPoint> = Universe::<LoopPoint>::map(lp, |p| *p);
    let total = direct.count(law);
    let exhaustive = total <= budget;
    let work = total.min(budget);
    let n = direct.all.len();
    let use_table = n <= TABLE_LIMIT && work >= (n * n / 4) as u64;

    if law == Law::FiberSumExchange && exhaustive && use_table {
        let t = CayleyTable::build(lp, &direct.all)?;
        let u = Universe::<u32>::map(lp, |p| t.index_of(p).unwrap_or(0));
        let (checked, found) = fiber_exchange_exhaustive(&t, &u.fibers);
        return Ok(LawReport {
            law,
            holds: found.is_none(),
            exhaustive: true,
            checked,
            seed: None,
            counterexample: found.map(|pts| Counterexample {
                points: pts.iter().map(|&i| t.point(i)).collect(),
                scalars: vec![],
            }),
        });
    }

    let (checked, found) = if use_table {
        let t = CayleyTable::build(lp, &direct.all)?;
        let u = Universe::<u32>::map(lp, |p| t.index_of(p).unwrap_or(0));
        let (c, f) = if exhaustive { sweep(&t, &u, law)? } else { sample(&t, &u, law, budget, seed)? };
        let f = f.map(|(pts, ks)| (pts.iter().map(|&i| t.point(i)).collect::<Vec<_>>(), ks));
        (c, f)
    } else if exhaustive {
        sweep(lp, &direct, law)?
    } else {
        sample(lp, &direct, law, budget, seed)?
    };
    Ok(LawReport {
        law,
        holds: found.is_none(),
        exhaustive,
        checked,
        seed: if exhaustive { None } else { Some(seed) },
        counterexample: found.map(|(points, scalars)| Counterexample { points, scalars }),
    })
}

/// Exhaustive check of [`Law::FiberSumExchange`] over every pair of fibers,
/// with the left-hand partial sums precomputed per fiber.
fn fiber_exchange_exhaustive(t: &CayleyTable, fibers: &[Vec<u32>]) -> (u64, Option<Vec<u32>>) {
    // triple[f][(i1 * k + i2) * k + i3] = (F[i1] + F[i2]) - F[i3]
    let triple: Vec<Vec<u32>> = fibers
        .iter()
        .map(|f| {
            let mut out = Vec::with_capacity(f.len().pow(3));
            for &a in f {
                for &b in f {
                    let ab = t.add(a, b);
                    for &c in f {
                        out.push(t.add(ab, t.neg(c)));
                    }
                }
            }
            out
        })
        .collect();
    let mut checked = 0u64;
    for (fi, pf) in fibers.iter().enumerate() {
        for (gi, qf) in fibers.iter().enumerate() {
            let (k, l) = (pf.len(), qf.len());
            let (sp, sq) = (&triple[fi], &triple[gi]);
            for (i1, &p1) in pf.iter().enumerate() {
                for (j1, &q1) in qf.iter().enumerate() {
                    let a = t.add(p1, q1);
                    for (i2, &p2) in pf.iter().enumerate() {
                        for (j2, &q2) in qf.iter().enumerate() {
                            let ab = t.add(a, t.add(p2, q2));
                            let srow = &sp[(i1 * k + i2) * k..][..k];
                            let trow = &sq[(j1 * l + j2) * l..][..l];
                            for (i3, &p3) in pf.iter().enumerate() {
                                let s = srow[i3];
                                for (j3, &q3) in qf.iter().enumerate() {
                                    let rhs = t.add(ab, t.neg(t.add(p3, q3)));
                                    if t.add(s, trow[j3]) != rhs {
                                        return (checked + 1, Some(vec![p1, p2, p3, q1, q2, q3]));
                                    }
                                }
                            }
                            checked += (k * l) as u64;
                        }
                    }
                }
            }
        }
    }
    (checked, None)
}

/// Which construction produced a witness triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    /// `(P, (p:1:p), (0:1:p))`, needs `e >= 3`.
    A,
    /// `((X:Y:1), (X:Y+p:1), (0:1:p))`, needs `e >= 2` and `3 pi(P) != O`.
    B,
    /// `((p:1:0), (0:1:p), (0:1:p))`, needs `e >= 6`.
    Infinity,
}

impl WitnessKind {
    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::A => "A",
            WitnessKind::B => "B",
            WitnessKind::Infinity => "inf",
        }
    }

    pub fn from_name(s: &str) -> Option<WitnessKind> {
        match s {
            "A" | "a" => Some(WitnessKind::A),
            "B" | "b" => Some(WitnessKind::B),
            "inf" | "infinity" => Some(WitnessKind::Infinity),
            _ => None,
        }
    }
}

/// A candidate non-associative triple with both association orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub points: [LoopPoint; 3],
    /// `(P1 + P2) + P3`.
    pub left: LoopPoint,
    /// `P1 + (P2 + P3)`.
    pub right: LoopPoint,
    pub associates: bool,
    /// Rank of the associativity matrix of the triple.
    pub rank: u32,
}

fn evaluate(lp: &EllipticLoop, kind: WitnessKind, points: [LoopPoint; 3]) -> Result<Witness> {
    let [a, b, c] = points;
    let left = lp.add(&lp.add(&a, &b)?, &c)?;
    let right = lp.add(&a, &lp.add(&b, &c)?)?;
    Ok(Witness {
        kind,
        points,
        left,
        right,
        associates: left == right,
        rank: AssocMatrix::new(lp, &points).rank(lp.ring()),
    })
}

fn require_exponent(lp: &EllipticLoop, min: u32, what: &'static str) -> Result<()> {
    if lp.ring().exponent() < min {
        return Err(Error::PreconditionUnmet(what));
    }
    Ok(())
}

fn first_affine(lp: &EllipticLoop, pred: impl Fn(ResiduePoint) -> bool) -> Option<LoopPoint> {
    lp.residue_curve()
        .points()
        .iter()
        .find(|&&b| !b.is_infinity() && pred(b))
        .map(|&b| lp.fiber(b)[0])
}

/// The triple `(P, (p:1:p), (0:1:p))`; `P` defaults to the first affine
/// point.
pub fn witness_a(lp: &EllipticLoop, base: Option<&LoopPoint>) -> Result<Witness> {
    require_exponent(lp, 3, "witness A needs nilpotency at least 3")?;
    let p = match base {
        Some(p) if lp.is_affine(p) => *p,
        Some(_) => return Err(Error::NotAffine),
        None => first_affine(lp, |_| true).ok_or(Error::PreconditionUnmet("no affine point"))?,
    };
    let r = lp.ring();
    let mu = r.uniformizer();
    let q1 = lp.point(ProjPoint::from_canonical(mu, r.one(), mu))?;
    let q2 = lp.point(ProjPoint::from_canonical(r.zero(), r.one(), mu))?;
    evaluate(lp, WitnessKind::A, [p, q1, q2])
}

/// The triple `((X:Y:1), (X:Y+p:1), (0:1:p))` for an affine `P` with
/// `3 pi(P) != O`; `P` defaults to the first such point.
pub fn witness_b(lp: &EllipticLoop, base: Option<&LoopPoint>) -> Result<Witness> {
    require_exponent(lp, 2, "witness B needs nilpotency at least 2")?;
    let curve = lp.residue_curve();
    let not_3_torsion = |b: ResiduePoint| !curve.mul(3, b).is_infinity();
    let p = match base {
        Some(p) if !lp.is_affine(p) => return Err(Error::NotAffine),
        Some(p) if !not_3_torsion(lp.project(p)) => {
            return Err(Error::PreconditionUnmet("3 pi(P) is the identity"))
        }
        Some(p) => *p,
        None => first_affine(lp, not_3_torsion)
            .ok_or(Error::PreconditionUnmet("every affine point has 3 pi(P) = O"))?,
    };
    let r = lp.ring();
    let (x, y) = lp.affine_coords(&p)?;
    let shifted = lp.point_from_elems(x, r.add(y, r.uniformizer()), r.one())?;
    let q = lp.point(ProjPoint::from_canonical(r.zero(), r.one(), r.uniformizer()))?;
    evaluate(lp, WitnessKind::B, [p, shifted, q])
}

/// The triple `((p:1:0), (0:1:p), (0:1:p))` at infinity.
pub fn witness_inf(lp: &EllipticLoop) -> Result<Witness> {
    require_exponent(lp, 6, "witness at infinity needs nilpotency at least 6")?;
    let (g1, g2) = crate::structure::infinity_generators(lp)?;
    evaluate(lp, WitnessKind::Infinity, [g1, g2, g2])
}

/// The identities that hold at nilpotency at most two, each through
/// [`law_suite`].
pub fn low_nilpotency_suite(lp: &EllipticLoop, budget: u64, seed: u64) -> Result<Vec<LawReport>> {
    let e = lp.ring().exponent();
    if e > 2 {
        return Err(Error::NilpotencyTooHigh { e, max: 2 });
    }
    Law::LOW_NILPOTENCY
        .iter()
        .map(|&law| law_suite(lp, law, budget, seed))
        .collect()
}

/// How a loop's group status was decided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupStatus {
    /// Verified isomorphism onto `Z/d_1 x ... x Z/d_r`.
    Group { factors: Vec<u64>, generators: Vec<LoopPoint> },
    /// A triple that fails to associate, and where it came from.
    NotGroup { method: &'static str, triple: [LoopPoint; 3] },
}

/// One valid `(p, e, A, B)` in the classification sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationRow {
    pub p: u32,
    pub e: u32,
    pub a: u32,
    pub b: u32,
    pub q: u64,
    pub size: u64,
    pub status: GroupStatus,
}

/// Decides whether `L` is a group: the witness triples first, then a Cayley
/// table with an isomorphism certificate, then an exhaustive triple search.
pub fn group_status(lp: &EllipticLoop) -> Result<GroupStatus> {
    let e = lp.ring().exponent();
    if e >= 3 {
        let w = witness_a(lp, None)?;
        if !w.associates {
            return Ok(GroupStatus::NotGroup { method: "witness-a", triple: w.points });
        }
    }
    if e >= 2 {
        if let Ok(w) = witness_b(lp, None) {
            if !w.associates {
                return Ok(GroupStatus::NotGroup { method: "witness-b", triple: w.points });
            }
        }
    }
    let t = CayleyTable::of_loop(lp)?;
    if let Some(cert) = certify_abelian_group(&t) {
        return Ok(GroupStatus::Group { factors: cert.factors, generators: cert.generators });
    }
    match t.find_nonassociative() {
        Some(tr) => Ok(GroupStatus::NotGroup {
            method: "triple-search",
            triple: [t.point(tr[0]), t.point(tr[1]), t.point(tr[2])],
        }),
        None => Err(Error::Internal("associative loop without a group certificate")),
    }
}

/// Runs [`group_status`] on every valid `L_{A,B}(Z/p^eZ)` with
/// `5 <= p <= max_p`, `e >= 2`, `p^e <= max_order` and `0 <= A, B < p`.
/// Fields are skipped: there the loop is the curve itself.
pub fn classify_group_loops(max_p: u32, max_order: u64) -> Result<Vec<ClassificationRow>> {
    let mut rows = Vec::new();
    for p in 5..=max_p {
        if !crate::ring::is_prime(p) {
            continue;
        }
        let mut e = 2;
        while (p as u64).pow(e) <= max_order {
            for a in 0..p {
                for b in 0..p {
                    let lp = match EllipticLoop::over_integers(p, e, a as i64, b as i64) {
                        Ok(lp) => lp,
                        Err(Error::SingularCurve | Error::EvenOrder { .. }) => continue,
                        Err(err) => return Err(err),
                    };
                    rows.push(ClassificationRow {
                        p,
                        e,
                        a,
                        b,
                        q: lp.base_order(),
                        size: lp.size(),
                        status: group_status(&lp)?,
                    });
                }
            }
            e += 1;
        }
    }
    Ok(rows)
}

/// Enumerated sizes of the two parts of a loop next to the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CardinalityReport {
    pub q: u64,
    pub infinity: u64,
    pub affine: u64,
    pub expected_infinity: u64,
    pub expected_affine: u64,
}

impl CardinalityReport {
    pub fn matches(&self) -> bool {
        self.infinity == self.expected_infinity && self.affine == self.expected_affine
    }
}

/// Counts loop points by scanning all of `P^2(R)`, and compares with
/// `|L^inf| = p^(2(e-1))`, `|L^a| = (q-1) p^(2(e-1))`.
pub fn cardinality_report(lp: &EllipticLoop) -> Result<CardinalityReport> {
    if lp.ring().kind() != RingKind::IntegerQuotient {
        return Err(Error::UnsupportedRing);
    }
    let r = lp.ring();
    let (mut infinity, mut affine) = (0u64, 0u64);
    for pt in plane_points(r) {
        if lp.contains(&pt) {
            if pt.is_affine(r) {
                affine += 1;
            } else {
                infinity += 1;
            }
        }
    }
    let fiber = r.ideal_order().pow(2);
    let q = lp.base_order();
    Ok(CardinalityReport {
        q,
        infinity,
        affine,
        expected_infinity: fiber,
        expected_affine: (q - 1) * fiber,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(p: u32, e: u32, a: i64, b: i64) -> EllipticLoop {
        EllipticLoop::over_integers(p, e, a, b).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for law in Law::LOOP_LAWS.iter().chain(Law::LOW_NILPOTENCY.iter()) {
            assert_eq!(Law::from_name(law.name()), Some(*law));
        }
        assert_eq!(Law::from_name("nope"), None);
    }

    #[test]
    fn group_loop_satisfies_everything() {
        let l = lp(5, 2, 4, 2);
        for law in Law::LOOP_LAWS {
            let rep = law_suite(&l, law, 1 << 24, 1).unwrap();
            assert!(rep.holds, "{law}");
            assert!(rep.exhaustive);
        }
    }

    #[test]
    fn loop_axioms_hold_on_non_group() {
        let l = lp(5, 2, 2, 1);
        for law in [Law::Identity, Law::Commutative, Law::UniqueInverse, Law::WeakAssociative, Law::LatinSquare] {
            assert!(law_suite(&l, law, 1 << 24, 1).unwrap().holds);
        }
        let rep = law_suite(&l, Law::FullAssociative, 1 << 24, 1).unwrap();
        assert!(!rep.holds && rep.exhaustive);
        assert_eq!(replay(&l, rep.law, rep.counterexample.as_ref().unwrap()), Ok(false));
    }

    #[test]
    fn sampled_reports_are_reproducible() {
        let l = lp(5, 3, 2, 1);
        let a = law_suite(&l, Law::FullAssociative, 2000, 7).unwrap();
        let b = law_suite(&l, Law::FullAssociative, 2000, 7).unwrap();
        assert_eq!(a, b);
        assert!(!a.exhaustive && a.seed == Some(7));
        assert!(!a.holds);
        assert_eq!(replay(&l, a.law, a.counterexample.as_ref().unwrap()), Ok(false));

        let pa = law_suite(&l, Law::PowerAssociative, 500, 3).unwrap();
        assert!(pa.holds && !pa.exhaustive && pa.checked == 500);
    }

    #[test]
    fn replay_checks_shape_and_fibers() {
        let l = lp(5, 2, 2, 1);
        let p = l.point_from_ints(0, 1, 1).unwrap();
        let o = LoopPoint::identity();
        let bad = Counterexample { points: vec![p, o, o], scalars: vec![] };
        assert!(replay(&l, Law::FiberTriple, &bad).is_err());
        let short = Counterexample { points: vec![p], scalars: vec![] };
        assert!(replay(&l, Law::Commutative, &short).is_err());
        let ok = Counterexample { points: vec![p, o, o], scalars: vec![] };
        assert_eq!(replay(&l, Law::InfinityAssociative, &ok), Ok(true));
    }

    #[test]
    fn witness_preconditions() {
        assert!(matches!(witness_a(&lp(5, 2, 2, 1), None), Err(Error::PreconditionUnmet(_))));
        assert!(matches!(witness_inf(&lp(5, 5, 2, 1)), Err(Error::PreconditionUnmet(_))));
        let l = lp(5, 2, 4, 2);
        let p = l.point_from_ints(3, 1, 1).unwrap();
        assert!(matches!(witness_b(&l, Some(&p)), Err(Error::PreconditionUnmet(_))));
        assert!(matches!(witness_b(&l, None), Err(Error::PreconditionUnmet(_))));
        assert!(matches!(witness_b(&lp(5, 1, 2, 1), None), Err(Error::PreconditionUnmet(_))));
    }

    #[test]
    fn witnesses_fail_associativity() {
        for (p, e) in [(5, 3), (7, 3)] {
            let w = witness_a(&lp(p, e, 2, 1), None).unwrap();
            assert!(!w.associates);
            assert_eq!(w.rank, 2);
        }
        let l = lp(5, 2, 2, 1);
        for base in l.affine_points().iter().step_by(13) {
            let w = witness_b(&l, Some(base)).unwrap();
            assert!(!w.associates);
        }
        let w = witness_inf(&lp(5, 6, 2, 1)).unwrap();
        assert!(!w.associates);
    }

    #[test]
    fn infinity_part_is_associative_below_six() {
        let l = lp(5, 5, 2, 1);
        let (g1, g2) = crate::structure::infinity_generators(&l).unwrap();
        let w = evaluate(&l, WitnessKind::Infinity, [g1, g2, g2]).unwrap();
        assert!(w.associates);
    }

    #[test]
    fn low_nilpotency_identities_sampled() {
        let l = lp(5, 2, 2, 1);
        for rep in low_nilpotency_suite(&l, 20_000, 11).unwrap() {
            assert!(rep.holds, "{}", rep.law);
        }
        assert_eq!(
            low_nilpotency_suite(&lp(5, 3, 2, 1), 10, 0),
            Err(Error::NilpotencyTooHigh { e: 3, max: 2 })
        );
    }

    #[test]
    fn group_status_of_small_loops() {
        match group_status(&lp(5, 2, 4, 2)).unwrap() {
            GroupStatus::Group { factors, .. } => assert_eq!(factors, vec![5, 15]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            group_status(&lp(5, 2, 2, 1)).unwrap(),
            GroupStatus::NotGroup { method: "witness-b", .. }
        ));
        assert!(matches!(
            group_status(&lp(5, 3, 4, 2)).unwrap(),
            GroupStatus::NotGroup { method: "witness-a", .. }
        ));
    }

    #[test]
    fn cardinalities() {
        let c = cardinality_report(&lp(5, 2, 2, 1)).unwrap();
        assert_eq!((c.infinity, c.affine), (25, 150));
        let c = cardinality_report(&lp(5, 1, 2, 1)).unwrap();
        assert_eq!((c.infinity, c.affine), (1, 6));
        let c = cardinality_report(&lp(7, 2, 0, 2)).unwrap();
        assert_eq!((c.infinity, c.affine), (49, 392));
        assert!(c.matches());
    }
}
