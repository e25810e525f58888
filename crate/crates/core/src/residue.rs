//! The base curve `E_{A,B}(F_p)` over the residue field.

use alloc::vec::Vec;
use core::fmt;

pub(crate) fn field_pow(a: u32, mut k: u64, p: u32) -> u32 {
    let p = p as u64;
    let mut base = a as u64 % p;
    let mut acc = 1u64 % p;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        k >>= 1;
    }
    acc as u32
}

/// Inverse in `F_p` by Fermat; `a` must be non-zero mod `p`.
pub(crate) fn field_inv(a: u32, p: u32) -> u32 {
    field_pow(a, p as u64 - 2, p)
}

/// A point of the residue curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResiduePoint {
    Infinity,
    Affine(u32, u32),
}

impl ResiduePoint {
    pub fn is_infinity(self) -> bool {
        matches!(self, ResiduePoint::Infinity)
    }
}

impl fmt::Display for ResiduePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResiduePoint::Infinity => f.write_str("O"),
            ResiduePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// `y^2 = x^3 + a x + b` over `F_p`, with its full point list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCurve {
    p: u32,
    a: u32,
    b: u32,
    points: Vec<ResiduePoint>,
}

impl ResidueCurve {
    /// Enumerates the curve with a square-root table. Does not check
    /// smoothness; see [`ResidueCurve::is_smooth`].
    pub fn new(p: u32, a: u32, b: u32) -> ResidueCurve {
        let (a, b) = (a % p, b % p);
        let mut roots: Vec<Vec<u32>> = alloc::vec![Vec::new(); p as usize];
        for y in 0..p {
            roots[(y as u64 * y as u64 % p as u64) as usize].push(y);
        }
        let mut points = alloc::vec![ResiduePoint::Infinity];
        for x in 0..p {
            let rhs = (field_pow(x, 3, p) as u64 + a as u64 * x as u64 + b as u64) % p as u64;
            for &y in &roots[rhs as usize] {
                points.push(ResiduePoint::Affine(x, y));
            }
        }
        ResidueCurve { p, a, b, points }
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    pub fn coefficients(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    /// `4a^3 + 27b^2 != 0` in `F_p`.
    pub fn is_smooth(&self) -> bool {
        let p = self.p as u64;
        let d = (4 * field_pow(self.a, 3, self.p) as u64 + 27 * (self.b as u64 * self.b as u64 % p)) % p;
        d != 0
    }

    /// All points, the identity first.
    pub fn points(&self) -> &[ResiduePoint] {
        &self.points
    }

    pub fn order(&self) -> u64 {
        self.points.len() as u64
    }

    pub fn contains(&self, pt: ResiduePoint) -> bool {
        match pt {
            ResiduePoint::Infinity => true,
            ResiduePoint::Affine(x, y) => {
                let p = self.p as u64;
                let lhs = y as u64 * y as u64 % p;
                let rhs = (field_pow(x, 3, self.p) as u64 + self.a as u64 * x as u64 + self.b as u64) % p;
                x < self.p && y < self.p && lhs == rhs
            }
        }
    }

    pub fn neg(&self, pt: ResiduePoint) -> ResiduePoint {
        match pt {
            ResiduePoint::Infinity => ResiduePoint::Infinity,
            ResiduePoint::Affine(x, y) => ResiduePoint::Affine(x, (self.p - y) % self.p),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, lhs: ResiduePoint, rhs: ResiduePoint) -> ResiduePoint {
        let p = self.p as u64;
        let (x1, y1, x2, y2) = match (lhs, rhs) {
            (ResiduePoint::Infinity, q) => return q,
            (q, ResiduePoint::Infinity) => return q,
            (ResiduePoint::Affine(x1, y1), ResiduePoint::Affine(x2, y2)) => {
                (x1 as u64, y1 as u64, x2 as u64, y2 as u64)
            }
        };
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return ResiduePoint::Infinity;
            }
            let num = (3 * x1 % p * x1 + self.a as u64) % p;
            num * field_inv((2 * y1 % p) as u32, self.p) as u64 % p
        } else {
            let num = (y2 + p - y1) % p;
            num * field_inv(((x2 + p - x1) % p) as u32, self.p) as u64 % p
        };
        let x3 = (lambda * lambda % p + 2 * p - x1 - x2) % p;
        let y3 = (lambda * ((x1 + p - x3) % p) % p + p - y1) % p;
        ResiduePoint::Affine(x3 as u32, y3 as u32)
    }

    pub fn mul(&self, n: i64, pt: ResiduePoint) -> ResiduePoint {
        let base = if n < 0 { self.neg(pt) } else { pt };
        let mut k = n.unsigned_abs();
        let mut acc = ResiduePoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, pow);
            }
            pow = self.add(pow, pow);
            k >>= 1;
        }
        acc
    }

    pub fn order_of(&self, pt: ResiduePoint) -> u64 {
        let mut acc = pt;
        let mut n = 1;
        while !acc.is_infinity() {
            acc = self.add(acc, pt);
            n += 1;
        }
        n
    }

    /// `true` when some point has order two.
    pub fn has_two_torsion(&self) -> bool {
        self.points
            .iter()
            .any(|pt| matches!(pt, ResiduePoint::Affine(_, 0)))
    }
}
