//! Elements of `F_q[π][T] ⊂ R[[T]]`, `R = F_q[[π]]`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::base::parse::{bi_mul, format_bivariate, parse_bivariate, Bivariate};
use crate::base::{FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

/// `Σ_k c_k(π) T^k`, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesT {
    coeffs: Bivariate,
}

/// A length that may be infinite (positive `R`-rank).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(n) => Some(n),
            Length::Infinite => None,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(n) => write!(f, "{n}"),
            Length::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Length::Finite(n) => s.serialize_u64(*n as u64),
            Length::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// `ord_π` of a polynomial in `π`; `None` for zero.
pub fn ord_pi(a: &Poly) -> Option<usize> {
    a.low_order()
}

impl SeriesT {
    pub fn from_coeffs(mut coeffs: Bivariate) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        SeriesT { coeffs }
    }

    pub fn parse(ring: &PolyRing, s: &str) -> Result<Self> {
        Ok(Self::from_coeffs(parse_bivariate(ring, s)?))
    }

    pub fn one() -> Self {
        SeriesT { coeffs: vec![Poly::constant(1)] }
    }

    pub fn t_power(k: usize) -> Self {
        let mut c = vec![Poly::zero(); k + 1];
        c[k] = Poly::constant(1);
        SeriesT { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// Coefficient of `T^k`.
    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `ord_T(f)`; `None` for zero.
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `f*` with `f = T^(ord_T f) f*`.
    pub fn star(&self) -> SeriesT {
        match self.ord_t() {
            Some(k) => SeriesT { coeffs: self.coeffs[k..].to_vec() },
            None => self.clone(),
        }
    }

    /// `f(0) ∈ F_q[π]`.
    pub fn at_zero(&self) -> Poly {
        self.coeff(0)
    }

    /// `ord_R(f(0))`, `None` when `f(0) = 0`.
    pub fn ord_r_at_zero(&self) -> Option<usize> {
        ord_pi(&self.at_zero())
    }

    pub fn mul(&self, ring: &PolyRing, other: &Self) -> Self {
        Self::from_coeffs(bi_mul(ring, &self.coeffs, &other.coeffs))
    }

    pub fn format(&self, ring: &PolyRing) -> String {
        format_bivariate(ring, &self.coeffs)
    }
}

/// `length_R(R[[T]]/(f, T^N)) = ord_R(f(0)) N`, infinite when `f(0) = 0`.
pub fn length_quotient(f: &SeriesT, n: usize) -> Result<Length> {
    if f.is_zero() {
        return Err(Error::InvalidInput("f must be nonzero".into()));
    }
    if n == 0 {
        return Ok(Length::Finite(0));
    }
    Ok(match f.ord_r_at_zero() {
        Some(k) => Length::Finite(k * n),
        None => Length::Infinite,
    })
}

/// `length_R((R[[T]]/(f, T^N))_fin) = ord_R(f*(0)) (N - ord_T f)`.
pub fn finite_part_length(f: &SeriesT, n: usize) -> Result<usize> {
    let Some(k) = f.ord_t() else {
        return Err(Error::InvalidInput("f must be nonzero".into()));
    };
    if n < k {
        return Err(Error::InvalidInput(format!("N = {n} is below ord_T(f) = {k}")));
    }
    Ok(f.star().ord_r_at_zero().expect("f*(0) is nonzero") * (n - k))
}

/// `(1+T)^(p^n) - 1 = T^(p^n)` in `F_p[T]`, by repeated `p`-th powers.
pub fn gamma_iso_check(p: u32, n: u32) -> Result<bool> {
    let ring = PolyRing::new(FiniteField::prime(p)?);
    let mut x = Poly(vec![1, 1]);
    for _ in 0..n {
        x = ring.pow(&x, p as u64);
    }
    let lhs = ring.sub(&x, &ring.one());
    Ok(lhs == Poly::monomial(1, (p as usize).pow(n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32) -> PolyRing {
        PolyRing::new(FiniteField::prime(p).unwrap())
    }

    #[test]
    fn closed_forms() {
        let r = ring(2);
        let f = SeriesT::parse(&r, "pi+T").unwrap();
        assert_eq!(length_quotient(&f, 3).unwrap(), Length::Finite(3));
        assert_eq!(finite_part_length(&f, 4).unwrap(), 4);
        let unit = SeriesT::parse(&r, "1+pi*T").unwrap();
        assert_eq!(length_quotient(&unit, 9).unwrap(), Length::Finite(0));
        assert_eq!(length_quotient(&SeriesT::parse(&r, "pi^2").unwrap(), 5).unwrap(), Length::Finite(10));
        let g = SeriesT::parse(&r, "T^2*(pi^2+T)").unwrap();
        assert_eq!(g.ord_t(), Some(2));
        assert_eq!(finite_part_length(&g, 5).unwrap(), 6);
        assert!(finite_part_length(&g, 1).is_err());
        assert_eq!(length_quotient(&g, 5).unwrap(), Length::Infinite);
        assert_eq!(finite_part_length(&SeriesT::t_power(3), 7).unwrap(), 0);
        assert!(length_quotient(&SeriesT::from_coeffs(vec![]), 1).is_err());
    }

    #[test]
    fn gamma_identity() {
        for p in [2, 3, 5] {
            for n in 0..=4 {
                assert!(gamma_iso_check(p, n).unwrap());
            }
        }
    }
}
