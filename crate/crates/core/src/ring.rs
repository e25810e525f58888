//! Finite local rings with a principal maximal ideal.
//!
//! Two instances share one representation. An element is stored as an
//! integer code in `[0, p^e)`:
//!
//! * `Z/p^eZ`: the code is the least non-negative residue.
//! * `F_p[t]/(t^e)`: the code is read in base `p`, digit `i` being the
//!   coefficient of `t^i`.
//!
//! In both cases the maximal ideal is generated by the element with code `p`
//! (the integer `p`, resp. the variable `t`), the residue map is `code mod p`
//! and the valuation is the number of trailing zero base-`p` digits. Only
//! addition and multiplication differ.

use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;

use crate::error::{Error, Result};

const MAX_DIGITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `Z/p^eZ`.
    IntegerQuotient,
    /// `F_p[t]/(t^e)`.
    TruncatedPolynomial,
}

impl RingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RingKind::IntegerQuotient => "integer-quotient",
            RingKind::TruncatedPolynomial => "truncated-polynomial",
        }
    }
}

/// An element of a [`Ring`], stored by its canonical code.
///
/// Elements do not carry their ring; all arithmetic goes through the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RingElem(u32);

impl RingElem {
    /// Wraps a code without range checks; callers guarantee `code < p^e`.
    #[inline]
    pub(crate) const fn raw(code: u32) -> RingElem {
        RingElem(code)
    }

    /// Canonical code of the element (see the module docs).
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Valuation with a distinguished absorbing infinity for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `true` when the element lies in `m^k`.
    pub fn at_least(self, k: u32) -> bool {
        match self {
            Valuation::Finite(v) => v >= k,
            Valuation::Infinite => true,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// A finite local ring `Z/p^eZ` or `F_p[t]/(t^e)` with `p >= 5` prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ring {
    kind: RingKind,
    p: u32,
    e: u32,
    order: u32,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Ring {
    pub fn new(kind: RingKind, p: u32, e: u32) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p < 5 {
            return Err(Error::SmallCharacteristic(p));
        }
        if e == 0 {
            return Err(Error::ZeroExponent);
        }
        let order = (p as u64)
            .checked_pow(e)
            .filter(|&n| n < (1u64 << 31))
            .ok_or(Error::RingTooLarge { p, e })?;
        Ok(Ring {
            kind,
            p,
            e,
            order: order as u32,
        })
    }

    /// `Z/p^eZ`.
    pub fn integers(p: u32, e: u32) -> Result<Ring> {
        Ring::new(RingKind::IntegerQuotient, p, e)
    }

    /// `F_p[t]/(t^e)`.
    pub fn truncated(p: u32, e: u32) -> Result<Ring> {
        Ring::new(RingKind::TruncatedPolynomial, p, e)
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Nilpotency of the maximal ideal: `m^e = 0` and `m^(e-1) != 0`.
    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// `|R| = p^e`.
    pub fn order(&self) -> u64 {
        self.order as u64
    }

    /// `|m| = p^(e-1)`.
    pub fn ideal_order(&self) -> u64 {
        (self.order / self.p) as u64
    }

    pub fn is_field(&self) -> bool {
        self.e == 1
    }

    #[inline]
    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    #[inline]
    pub fn one(&self) -> RingElem {
        RingElem(1 % self.order)
    }

    /// Builds an element from its canonical code.
    pub fn elem(&self, code: u64) -> Result<RingElem> {
        if code < self.order as u64 {
            Ok(RingElem(code as u32))
        } else {
            Err(Error::OutOfRange {
                value: code,
                order: self.order as u64,
            })
        }
    }

    /// The image of the integer `n` under `Z -> R`.
    pub fn int(&self, n: i64) -> RingElem {
        match self.kind {
            RingKind::IntegerQuotient => RingElem(n.rem_euclid(self.order as i64) as u32),
            RingKind::TruncatedPolynomial => RingElem(n.rem_euclid(self.p as i64) as u32),
        }
    }

    /// Generator of the maximal ideal (`p`, resp. `t`).
    pub fn uniformizer(&self) -> RingElem {
        RingElem(self.p % self.order)
    }

    /// `uniformizer^k`, zero once `k >= e`.
    pub fn uniformizer_pow(&self, k: u32) -> RingElem {
        if k >= self.e {
            RingElem(0)
        } else {
            RingElem(self.p.pow(k))
        }
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        match self.kind {
            RingKind::IntegerQuotient => {
                let s = a.0 + b.0;
                RingElem(if s >= self.order { s - self.order } else { s })
            }
            RingKind::TruncatedPolynomial => {
                let (x, y) = (self.digits(a), self.digits(b));
                let mut out = [0u32; MAX_DIGITS];
                for i in 0..self.e as usize {
                    out[i] = (x[i] + y[i]) % self.p;
                }
                self.pack_digits(&out)
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: RingElem) -> RingElem {
        match self.kind {
            RingKind::IntegerQuotient => RingElem(if a.0 == 0 { 0 } else { self.order - a.0 }),
            RingKind::TruncatedPolynomial => {
                let x = self.digits(a);
                let mut out = [0u32; MAX_DIGITS];
                for i in 0..self.e as usize {
                    out[i] = (self.p - x[i]) % self.p;
                }
                self.pack_digits(&out)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        match self.kind {
            RingKind::IntegerQuotient => RingElem(if a.0 >= b.0 {
                a.0 - b.0
            } else {
                a.0 + self.order - b.0
            }),
            RingKind::TruncatedPolynomial => self.add(a, self.neg(b)),
        }
    }

    #[inline]
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        match self.kind {
            RingKind::IntegerQuotient => {
                RingElem(((a.0 as u64 * b.0 as u64) % self.order as u64) as u32)
            }
            RingKind::TruncatedPolynomial => {
                let (x, y) = (self.digits(a), self.digits(b));
                let e = self.e as usize;
                let mut out = [0u64; MAX_DIGITS];
                for i in 0..e {
                    if x[i] == 0 {
                        continue;
                    }
                    for j in 0..e - i {
                        out[i + j] += x[i] as u64 * y[j] as u64;
                    }
                }
                let mut reduced = [0u32; MAX_DIGITS];
                for i in 0..e {
                    reduced[i] = (out[i] % self.p as u64) as u32;
                }
                self.pack_digits(&reduced)
            }
        }
    }

    /// `n * a` for an integer `n`.
    pub fn scale(&self, n: i64, a: RingElem) -> RingElem {
        self.mul(self.int(n), a)
    }

    pub fn pow(&self, a: RingElem, mut k: u64) -> RingElem {
        let mut base = a;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `m`-adic valuation; [`Valuation::Infinite`] for zero.
    pub fn valuation(&self, a: RingElem) -> Valuation {
        if a.0 == 0 {
            return Valuation::Infinite;
        }
        let mut v = 0;
        let mut c = a.0;
        while c.is_multiple_of(self.p) {
            c /= self.p;
            v += 1;
        }
        Valuation::Finite(v)
    }

    #[inline]
    pub fn is_unit(&self, a: RingElem) -> bool {
        !a.0.is_multiple_of(self.p)
    }

    /// Membership in the maximal ideal.
    #[inline]
    pub fn in_ideal(&self, a: RingElem) -> bool {
        a.0.is_multiple_of(self.p)
    }

    /// Reduction modulo `m`, as an element of `F_p` in `[0, p)`.
    #[inline]
    pub fn residue(&self, a: RingElem) -> u32 {
        a.0 % self.p
    }

    /// The element whose code is the residue `r mod p`.
    pub fn lift_residue(&self, r: u32) -> RingElem {
        RingElem(r % self.p)
    }

    /// Multiplicative inverse, lifted from the residue field by Newton
    /// iteration `x <- x (2 - a x)`.
    pub fn inverse(&self, a: RingElem) -> Result<RingElem> {
        let r = self.residue(a);
        if r == 0 {
            return Err(Error::NonUnit);
        }
        let mut x = RingElem(crate::residue::field_inv(r, self.p));
        let two = self.int(2);
        let mut precision = 1;
        while precision < self.e {
            x = self.mul(x, self.sub(two, self.mul(a, x)));
            precision *= 2;
        }
        Ok(x)
    }

    /// `a / uniformizer` for `a` in `m`, as the representative whose code is
    /// `code(a) / p` (so it lies in `[0, p^(e-1))`).
    pub fn divide_by_uniformizer(&self, a: RingElem) -> Result<RingElem> {
        if !self.in_ideal(a) {
            return Err(Error::NotInMaximalIdeal);
        }
        Ok(RingElem(a.0 / self.p))
    }

    /// All elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> + Clone {
        (0..self.order).map(RingElem)
    }

    /// All elements of `m^k`, in code order.
    pub fn ideal_power(&self, k: u32) -> impl Iterator<Item = RingElem> + Clone {
        let step = if k >= self.e { self.order } else { self.p.pow(k) };
        (0..self.order / step).map(move |i| RingElem(i * step))
    }

    /// All units, in code order.
    pub fn units(&self) -> impl Iterator<Item = RingElem> + Clone {
        let p = self.p;
        (0..self.order).filter(move |c| c % p != 0).map(RingElem)
    }

    fn digits(&self, a: RingElem) -> [u32; MAX_DIGITS] {
        let mut out = [0u32; MAX_DIGITS];
        let mut c = a.0;
        for d in out.iter_mut().take(self.e as usize) {
            *d = c % self.p;
            c /= self.p;
        }
        out
    }

    fn pack_digits(&self, digits: &[u32; MAX_DIGITS]) -> RingElem {
        let mut c = 0u32;
        for i in (0..self.e as usize).rev() {
            c = c * self.p + digits[i];
        }
        RingElem(c)
    }

    /// Coefficients of a truncated-polynomial element (or base-`p` digits of
    /// an integer residue), lowest degree first.
    pub fn coefficients(&self, a: RingElem) -> impl Iterator<Item = u32> {
        let d = self.digits(a);
        d.into_iter().take(self.e as usize)
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    /// Inverse modulo `n` by the extended Euclidean algorithm.
    fn euclid_inverse(a: i64, n: i64) -> Option<i64> {
        let (mut r0, mut r1) = (n, a.rem_euclid(n));
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        (r0 == 1).then(|| s0.rem_euclid(n))
    }

    /// Truncated product of base-`p` coefficient vectors.
    fn convolve(p: u32, e: u32, a: u32, b: u32) -> u32 {
        let digits = |mut x: u32| {
            let mut d = alloc::vec::Vec::new();
            for _ in 0..e {
                d.push(x % p);
                x /= p;
            }
            d
        };
        let (da, db) = (digits(a), digits(b));
        let mut out = 0u64;
        for k in (0..e as usize).rev() {
            let c: u64 = (0..=k).map(|i| da[i] as u64 * db[k - i] as u64).sum();
            out = out * p as u64 + c % p as u64;
        }
        out as u32
    }

    fn ring() -> impl Strategy<Value = Ring> {
        (prop::sample::select(alloc::vec![5u32, 7, 11, 13]), 1u32..5, any::<bool>()).prop_map(|(p, e, poly)| {
            if poly {
                Ring::truncated(p, e).unwrap()
            } else {
                Ring::integers(p, e).unwrap()
            }
        })
    }

    fn ring_and_elems() -> impl Strategy<Value = (Ring, u32, u32, u32)> {
        ring().prop_flat_map(|r| {
            let n = r.order() as u32;
            (Just(r), 0..n, 0..n, 0..n)
        })
    }

    proptest! {
        #[test]
        fn commutative_ring_axioms((r, a, b, c) in ring_and_elems()) {
            let (a, b, c) = (RingElem(a), RingElem(b), RingElem(c));
            prop_assert_eq!(r.add(a, b), r.add(b, a));
            prop_assert_eq!(r.mul(a, b), r.mul(b, a));
            prop_assert_eq!(r.add(r.add(a, b), c), r.add(a, r.add(b, c)));
            prop_assert_eq!(r.mul(r.mul(a, b), c), r.mul(a, r.mul(b, c)));
            prop_assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
            prop_assert_eq!(r.add(a, r.neg(a)), r.zero());
            prop_assert_eq!(r.sub(a, b), r.add(a, r.neg(b)));
            prop_assert_eq!(r.mul(a, r.one()), a);
        }

        #[test]
        fn multiplication_matches_reference((r, a, b, _c) in ring_and_elems()) {
            let expected = match r.kind() {
                RingKind::IntegerQuotient => (a as u64 * b as u64 % r.order()) as u32,
                RingKind::TruncatedPolynomial => convolve(r.prime(), r.exponent(), a, b),
            };
            prop_assert_eq!(r.mul(RingElem(a), RingElem(b)).value(), expected);
        }

        #[test]
        fn inverse_matches_euclid((r, a, _b, _c) in ring_and_elems()) {
            let x = RingElem(a);
            match r.inverse(x) {
                Ok(y) => {
                    prop_assert_eq!(r.mul(x, y), r.one());
                    if r.kind() == RingKind::IntegerQuotient {
                        prop_assert_eq!(Some(y.value() as i64), euclid_inverse(a as i64, r.order() as i64));
                    }
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::NonUnit);
                    prop_assert!(r.in_ideal(x));
                }
            }
        }

        #[test]
        fn valuation_is_additive((r, a, b, _c) in ring_and_elems()) {
            let (a, b) = (RingElem(a), RingElem(b));
            let sum = r.valuation(a) + r.valuation(b);
            let prod = r.valuation(r.mul(a, b));
            match sum.finite() {
                Some(k) if k < r.exponent() => prop_assert_eq!(prod, sum),
                _ => prop_assert!(prod.is_infinite()),
            }
            prop_assert!(r.valuation(r.add(a, b)) >= r.valuation(a).min(r.valuation(b)));
        }
    }
}
