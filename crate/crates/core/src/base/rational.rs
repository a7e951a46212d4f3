//! Reduced rational functions over a finite field.

use super::field::Elem;
use super::poly::{Poly, PolyRing};

/// `num/den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(ring: &PolyRing, num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = ring.gcd(&num, &den);
        let num = ring.divrem(&num, &g).0;
        let den = ring.divrem(&den, &g).0;
        let inv = ring.field().inv(den.lc());
        RationalFunction { num: ring.scale(inv, &num), den: ring.scale(inv, &den) }
    }

    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::constant(1) }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::constant(1))
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::constant(1) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Valuation at the infinite place, `deg den - deg num`; `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.num.deg().map(|n| self.den.degree_i64() - n as i64)
    }

    pub fn add(&self, ring: &PolyRing, other: &Self) -> Self {
        let num = ring.add(&ring.mul(&self.num, &other.den), &ring.mul(&other.num, &self.den));
        Self::new(ring, num, ring.mul(&self.den, &other.den))
    }

    pub fn neg(&self, ring: &PolyRing) -> Self {
        RationalFunction { num: ring.neg(&self.num), den: self.den.clone() }
    }

    pub fn sub(&self, ring: &PolyRing, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn mul(&self, ring: &PolyRing, other: &Self) -> Self {
        Self::new(ring, ring.mul(&self.num, &other.num), ring.mul(&self.den, &other.den))
    }

    pub fn inv(&self, ring: &PolyRing) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(ring, self.den.clone(), self.num.clone())
    }

    pub fn div(&self, ring: &PolyRing, other: &Self) -> Self {
        self.mul(ring, &other.inv(ring))
    }

    pub fn scale(&self, ring: &PolyRing, c: Elem) -> Self {
        if c == 0 {
            return Self::zero();
        }
        RationalFunction { num: ring.scale(c, &self.num), den: self.den.clone() }
    }

    pub fn format(&self, ring: &PolyRing, var: &str) -> String {
        let n = ring.format(&self.num, var);
        if ring.is_one(&self.den) {
            n
        } else {
            format!("({n})/({})", ring.format(&self.den, var))
        }
    }
}
