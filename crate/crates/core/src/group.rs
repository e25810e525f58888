//! Finite commutative magmas: Cayley tables, element orders, and explicit
//! isomorphisms onto products of cyclic groups.

use alloc::vec;
use alloc::vec::Vec;

use crate::elliptic_loop::{EllipticLoop, LoopPoint};
use crate::error::{Error, Result};
use crate::residue::ResidueCurve;

/// A commutative magma with identity and two-sided inverses, the common
/// interface of a loop and its Cayley table.
pub trait Magma {
    type Elem: Copy + Eq;

    fn zero(&self) -> Self::Elem;
    fn op(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem>;
    fn inv(&self, a: Self::Elem) -> Self::Elem;

    fn sub(&self, a: Self::Elem, b: Self::Elem) -> Result<Self::Elem> {
        self.op(a, self.inv(b))
    }

    /// `n a` by double-and-add.
    fn times(&self, n: i64, a: Self::Elem) -> Result<Self::Elem> {
        let base = if n < 0 { self.inv(a) } else { a };
        let k = n.unsigned_abs();
        let mut acc = self.zero();
        for bit in (0..64 - k.leading_zeros()).rev() {
            acc = self.op(acc, acc)?;
            if (k >> bit) & 1 == 1 {
                acc = self.op(acc, base)?;
            }
        }
        Ok(acc)
    }
}

impl Magma for EllipticLoop {
    type Elem = LoopPoint;

    fn zero(&self) -> LoopPoint {
        LoopPoint::identity()
    }

    fn op(&self, a: LoopPoint, b: LoopPoint) -> Result<LoopPoint> {
        self.add(&a, &b)
    }

    fn inv(&self, a: LoopPoint) -> LoopPoint {
        self.neg(&a)
    }

    fn times(&self, n: i64, a: LoopPoint) -> Result<LoopPoint> {
        self.mul(n, &a)
    }
}

/// Addition table of a finite set of loop points closed under `+` and `-`.
/// Elements are addressed by their index in the sorted point list.
#[derive(Debug, Clone)]
pub struct CayleyTable {
    elems: Vec<LoopPoint>,
    table: Vec<u32>,
    neg: Vec<u32>,
    zero: u32,
}

impl CayleyTable {
    /// Fails with `PreconditionUnmet` when the set is not closed.
    pub fn build(lp: &EllipticLoop, pts: &[LoopPoint]) -> Result<CayleyTable> {
        let mut elems = pts.to_vec();
        elems.sort_unstable();
        elems.dedup();
        let n = elems.len();
        let find = |pt: &LoopPoint| {
            elems
                .binary_search(pt)
                .map(|i| i as u32)
                .map_err(|_| Error::PreconditionUnmet("set is not closed under the loop law"))
        };
        let zero = find(&LoopPoint::identity())?;
        let neg = elems
            .iter()
            .map(|pt| find(&lp.neg(pt)))
            .collect::<Result<Vec<_>>>()?;
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let s = find(&lp.add(&elems[i], &elems[j])?)?;
                table[i * n + j] = s;
                table[j * n + i] = s;
            }
        }
        Ok(CayleyTable { elems, table, neg, zero })
    }

    /// The table of the whole loop.
    pub fn of_loop(lp: &EllipticLoop) -> Result<CayleyTable> {
        CayleyTable::build(lp, &lp.points())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[LoopPoint] {
        &self.elems
    }

    pub fn point(&self, i: u32) -> LoopPoint {
        self.elems[i as usize]
    }

    pub fn index_of(&self, pt: &LoopPoint) -> Option<u32> {
        self.elems.binary_search(pt).ok().map(|i| i as u32)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.elems.len() + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn zero_index(&self) -> u32 {
        self.zero
    }

    /// `[0a, 1a, ..., (n-1)a]` by repeated addition.
    pub fn multiples(&self, a: u32, n: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(n);
        let mut acc = self.zero;
        for _ in 0..n {
            out.push(acc);
            acc = self.add(acc, a);
        }
        out
    }

    pub fn order_of(&self, a: u32) -> u64 {
        let mut acc = a;
        let mut n = 1;
        while acc != self.zero && n <= self.len() as u64 {
            acc = self.add(acc, a);
            n += 1;
        }
        n
    }

    pub fn orders(&self) -> Vec<u64> {
        (0..self.len() as u32).map(|a| self.order_of(a)).collect()
    }

    /// First triple with `(a + b) + c != a + (b + c)`, scanning exhaustively.
    pub fn find_nonassociative(&self) -> Option<[u32; 3]> {
        let n = self.len() as u32;
        for a in 0..n {
            for b in 0..n {
                let ab = self.add(a, b);
                for c in 0..n {
                    if self.add(ab, c) != self.add(a, self.add(b, c)) {
                        return Some([a, b, c]);
                    }
                }
            }
        }
        None
    }
}

impl Magma for CayleyTable {
    type Elem = u32;

    fn zero(&self) -> u32 {
        self.zero
    }

    #[inline]
    fn op(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.add(a, b))
    }

    #[inline]
    fn inv(&self, a: u32) -> u32 {
        self.neg(a)
    }
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut k = 0;
            while n.is_multiple_of(d) {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors `d_1 | d_2 | ... | d_r` (all `> 1`) of a product of
/// cyclic groups of the given orders.
pub fn invariant_factors(cyclic_orders: &[u64]) -> Vec<u64> {
    // per prime, the exponents of its cyclic components
    let mut parts: Vec<(u64, Vec<u32>)> = Vec::new();
    for &n in cyclic_orders {
        for (l, k) in prime_powers(n) {
            match parts.iter_mut().find(|(q, _)| *q == l) {
                Some((_, ks)) => ks.push(k),
                None => parts.push((l, vec![k])),
            }
        }
    }
    let rank = parts.iter().map(|(_, ks)| ks.len()).max().unwrap_or(0);
    let mut out = vec![1u64; rank];
    for (l, mut ks) in parts {
        ks.sort_unstable();
        // largest exponents go to the last factor
        for (slot, k) in out.iter_mut().rev().zip(ks.iter().rev()) {
            *slot *= l.pow(*k);
        }
    }
    out
}

/// Invariant factors of an abelian group given the order of each element,
/// read off from the sizes of the `l^k`-torsion subgroups.
///
/// Returns `None` when the counts are inconsistent with any abelian group.
pub fn invariant_factors_from_orders(orders: &[u64]) -> Option<Vec<u64>> {
    let n = orders.len() as u64;
    if orders.iter().filter(|&&o| o == 1).count() != 1 {
        return None;
    }
    let mut cyclic = Vec::new();
    for (l, total) in prime_powers(n) {
        // r_k = number of cyclic l-components of exponent >= k
        let mut prev = 1u64;
        let mut ranks = Vec::new();
        for k in 1..=total {
            let lk = l.pow(k);
            let count = orders.iter().filter(|&&o| lk % o == 0).count() as u64;
            if !count.is_multiple_of(prev) {
                return None;
            }
            let mut ratio = count / prev;
            let mut r = 0;
            while ratio > 1 {
                if !ratio.is_multiple_of(l) {
                    return None;
                }
                ratio /= l;
                r += 1;
            }
            ranks.push(r);
            prev = count;
        }
        if prev != l.pow(total) {
            return None;
        }
        for k in 1..=total as usize {
            let next = ranks.get(k).copied().unwrap_or(0);
            if next > ranks[k - 1] {
                return None;
            }
            for _ in next..ranks[k - 1] {
                cyclic.push(l.pow(k as u32));
            }
        }
    }
    Some(invariant_factors(&cyclic))
}

/// Invariant factors of `E(F_p)`.
pub fn curve_invariant_factors(curve: &ResidueCurve) -> Vec<u64> {
    let orders: Vec<u64> = curve.points().iter().map(|&pt| curve.order_of(pt)).collect();
    invariant_factors_from_orders(&orders).unwrap_or_default()
}

/// `Z/d_1 x ... x Z/d_r`, or `0` for the trivial group.
pub fn format_factors(factors: &[u64]) -> alloc::string::String {
    use core::fmt::Write;
    let mut s = alloc::string::String::new();
    if factors.is_empty() {
        s.push('0');
    }
    for (i, d) in factors.iter().enumerate() {
        if i > 0 {
            s.push_str(" x ");
        }
        let _ = write!(s, "Z/{d}");
    }
    s
}

/// A verified isomorphism `Z/d_1 x ... x Z/d_r -> G`,
/// `(a_1, ..., a_r) -> ((a_1 g_1 + a_2 g_2) + ...) + a_r g_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupCertificate {
    pub factors: Vec<u64>,
    pub generators: Vec<LoopPoint>,
}

/// Digits of `i` in the mixed radix `factors`, least significant first.
fn unrank(mut i: usize, factors: &[u64], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(factors) {
        *slot = i % d as usize;
        i /= d as usize;
    }
}

fn rank(digits: &[usize], factors: &[u64]) -> usize {
    digits
        .iter()
        .zip(factors)
        .rev()
        .fold(0, |acc, (&a, &d)| acc * d as usize + a)
}

/// Images of the whole box `prod [0, d_i)` under the fold map.
fn span(t: &CayleyTable, gens: &[u32], factors: &[u64]) -> Vec<u32> {
    let mults: Vec<Vec<u32>> = gens
        .iter()
        .zip(factors)
        .map(|(&g, &d)| t.multiples(g, d as usize))
        .collect();
    let total: usize = factors.iter().map(|&d| d as usize).product();
    let mut digits = vec![0usize; factors.len()];
    let mut out = Vec::with_capacity(total);
    for i in 0..total {
        unrank(i, factors, &mut digits);
        let mut acc = t.zero;
        for (m, &a) in mults.iter().zip(&digits) {
            acc = t.add(acc, m[a]);
        }
        out.push(acc);
    }
    out
}

fn is_injective(images: &[u32], n: usize) -> bool {
    let mut seen = vec![false; n];
    images.iter().all(|&x| !core::mem::replace(&mut seen[x as usize], true))
}

/// Picks generators for the factors from the top down, backtracking when a
/// partial choice stops being injective.
fn choose_generators(
    t: &CayleyTable,
    orders: &[u64],
    factors: &[u64],
    chosen: &mut Vec<u32>,
    budget: &mut u64,
) -> bool {
    let k = factors.len() - chosen.len();
    if k == 0 {
        return true;
    }
    let d = factors[k - 1];
    for g in 0..t.len() as u32 {
        if orders[g as usize] != d {
            continue;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let mut gens: Vec<u32> = vec![g];
        gens.extend(chosen.iter().copied());
        if !is_injective(&span(t, &gens, &factors[k - 1..]), t.len()) {
            continue;
        }
        chosen.insert(0, g);
        if choose_generators(t, orders, factors, chosen, budget) {
            return true;
        }
        chosen.remove(0);
    }
    false
}

/// Tries to exhibit the table as an abelian group: computes invariant
/// factors from element orders, finds generators, and checks that the fold
/// map is a bijective homomorphism on every pair.
///
/// `None` means no certificate was found; for a group that only happens when
/// the generator search budget runs out.
pub fn certify_abelian_group(t: &CayleyTable) -> Option<GroupCertificate> {
    let orders = t.orders();
    let factors = invariant_factors_from_orders(&orders)?;
    let mut gens = Vec::new();
    let mut budget = 64 * t.len() as u64;
    if !choose_generators(t, &orders, &factors, &mut gens, &mut budget) {
        return None;
    }
    let phi = span(t, &gens, &factors);
    if phi.len() != t.len() || !is_injective(&phi, t.len()) {
        return None;
    }
    let r = factors.len();
    let (mut da, mut db, mut dc) = (vec![0usize; r], vec![0usize; r], vec![0usize; r]);
    for a in 0..phi.len() {
        unrank(a, &factors, &mut da);
        for b in a..phi.len() {
            unrank(b, &factors, &mut db);
            for i in 0..r {
                dc[i] = (da[i] + db[i]) % factors[i] as usize;
            }
            if phi[rank(&dc, &factors)] != t.add(phi[a], phi[b]) {
                return None;
            }
        }
    }
    Some(GroupCertificate {
        factors,
        generators: gens.iter().map(|&g| t.point(g)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_normal_form() {
        assert_eq!(invariant_factors(&[3, 5, 5]), vec![5, 15]);
        assert_eq!(invariant_factors(&[7, 3, 21]), vec![21, 21]);
        assert_eq!(invariant_factors(&[2, 4, 3]), vec![2, 12]);
        assert_eq!(invariant_factors(&[1]), Vec::<u64>::new());
        assert_eq!(invariant_factors(&[]), Vec::<u64>::new());
    }

    fn orders_of_product(factors: &[u64]) -> Vec<u64> {
        let total: u64 = factors.iter().product();
        (0..total)
            .map(|mut i| {
                let mut o = 1u64;
                for &d in factors {
                    let a = i % d;
                    i /= d;
                    let oi = d / gcd(a, d);
                    o = o / gcd(o, oi) * oi;
                }
                o
            })
            .collect()
    }

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }

    #[test]
    fn factors_from_orders_of_known_groups() {
        for f in [vec![5, 15], vec![2, 4, 8], vec![9, 27], vec![6], vec![3, 3, 3], vec![]] {
            let got = invariant_factors_from_orders(&orders_of_product(&f)).unwrap();
            assert_eq!(got, invariant_factors(&f));
        }
        // five elements of order 5 and nothing else is not a group of order 5
        assert_eq!(invariant_factors_from_orders(&[5, 5, 5, 5, 5]), None);
    }

    #[test]
    fn residue_curve_structures() {
        assert_eq!(curve_invariant_factors(&ResidueCurve::new(7, 0, 2)), vec![3, 3]);
        assert_eq!(curve_invariant_factors(&ResidueCurve::new(5, 2, 1)), vec![7]);
        assert_eq!(curve_invariant_factors(&ResidueCurve::new(5, 4, 2)), vec![3]);
    }

    #[test]
    fn table_of_small_loop() {
        let l = EllipticLoop::over_integers(5, 2, 2, 1).unwrap();
        let t = CayleyTable::of_loop(&l).unwrap();
        assert_eq!(t.len(), 175);
        for a in 0..t.len() as u32 {
            assert_eq!(t.add(a, t.zero_index()), a);
            assert_eq!(t.add(a, t.neg(a)), t.zero_index());
            let pa = t.point(a);
            assert_eq!(t.order_of(a), l.order_of(&pa).unwrap());
            assert_eq!(t.times(-7, a).unwrap(), t.index_of(&l.mul(-7, &pa).unwrap()).unwrap());
        }
        // a non-group at e = 2 since the base curve has points of order 7
        assert!(t.find_nonassociative().is_some());
        assert_eq!(certify_abelian_group(&t), None);
    }

    #[test]
    fn non_closed_set_is_rejected() {
        let l = EllipticLoop::over_integers(5, 2, 2, 1).unwrap();
        let p = l.point_from_ints(0, 1, 1).unwrap();
        assert!(CayleyTable::build(&l, &[LoopPoint::identity(), p]).is_err());
    }

    #[test]
    fn certificate_for_group_loop() {
        let l = EllipticLoop::over_integers(5, 2, 4, 2).unwrap();
        let t = CayleyTable::of_loop(&l).unwrap();
        assert_eq!(t.find_nonassociative(), None);
        let cert = certify_abelian_group(&t).unwrap();
        assert_eq!(cert.factors, vec![5, 15]);
        assert_eq!(format_factors(&cert.factors), "Z/5 x Z/15");
    }

    #[test]
    fn certificate_for_infinity_part() {
        let l = EllipticLoop::over_integers(5, 3, 2, 1).unwrap();
        let t = CayleyTable::build(&l, &l.infinity_points()).unwrap();
        assert_eq!(certify_abelian_group(&t).unwrap().factors, vec![25, 25]);
    }
}
