//! The twisted polynomial ring `F[θ]{τ}` with `τ a = a^q τ`.

use crate::base::{Poly, PolyRing};
use crate::error::{Error, Result};

/// `Σ c_i τ^i`, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPoly(pub Vec<Poly>);

impl SkewPoly {
    pub fn from_coeffs(mut c: Vec<Poly>) -> Self {
        while c.last().map_or(false, |p| p.is_zero()) {
            c.pop();
        }
        SkewPoly(c)
    }

    pub fn zero() -> Self {
        SkewPoly(Vec::new())
    }

    pub fn constant(c: Poly) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `τ`-degree, `None` for zero.
    pub fn deg_tau(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// The constant term `∂f = c_0`.
    pub fn derivative(&self) -> Poly {
        self.0.first().cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.0
    }
}

#[derive(Clone, Debug)]
pub struct SkewRing {
    ring: PolyRing,
    q: u64,
}

impl SkewRing {
    /// `q` must be a power of the characteristic dividing the field order.
    pub fn new(ring: PolyRing, q: u64) -> Self {
        SkewRing { ring, q }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `τ^i(b) = Σ b_k^(q^i) θ^(k q^i)`.
    pub fn twist(&self, b: &Poly, i: usize) -> Poly {
        if i == 0 || b.is_zero() {
            return b.clone();
        }
        let f = self.ring.field();
        let mut stride = 1usize;
        let mut coeffs = b.0.clone();
        for _ in 0..i {
            stride *= self.q as usize;
            for c in coeffs.iter_mut() {
                *c = f.pow(*c, self.q);
            }
        }
        let mut out = vec![0; (b.0.len() - 1) * stride + 1];
        for (k, c) in coeffs.into_iter().enumerate() {
            out[k * stride] = c;
        }
        Poly::from_coeffs(out)
    }

    pub fn check_same(&self, other: &SkewRing) -> Result<()> {
        if self.q != other.q || self.ring != other.ring {
            return Err(Error::MismatchedField("skew rings differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
        let n = f.0.len().max(g.0.len());
        let z = Poly::zero();
        SkewPoly::from_coeffs(
            (0..n).map(|i| self.ring.add(f.0.get(i).unwrap_or(&z), g.0.get(i).unwrap_or(&z))).collect(),
        )
    }

    /// `(a τ^i)(b τ^j) = a τ^i(b) τ^(i+j)`.
    pub fn mul(&self, f: &SkewPoly, g: &SkewPoly) -> SkewPoly {
        if f.is_zero() || g.is_zero() {
            return SkewPoly::zero();
        }
        let mut out = vec![Poly::zero(); f.0.len() + g.0.len() - 1];
        for (i, a) in f.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in g.0.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = self.ring.mul(a, &self.twist(b, i));
                out[i + j] = self.ring.add(&out[i + j], &term);
            }
        }
        SkewPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Poly, f: &SkewPoly) -> SkewPoly {
        SkewPoly::from_coeffs(f.0.iter().map(|a| self.ring.mul(c, a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::FiniteField;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u32, k: u32) -> SkewRing {
        let f = FiniteField::new(p, k).unwrap();
        let q = f.size() as u64;
        SkewRing::new(PolyRing::new(f), q)
    }

    #[test]
    fn theta_tau_squared() {
        let s = ring(2, 1);
        let theta = Poly(vec![0, 1]);
        let f = SkewPoly(vec![Poly::zero(), theta]);
        let sq = s.mul(&f, &f);
        assert_eq!(sq, SkewPoly(vec![Poly::zero(), Poly::zero(), Poly(vec![0, 0, 0, 1])]));
    }

    #[test]
    fn identity_is_neutral() {
        let s = ring(3, 1);
        let f = SkewPoly(vec![Poly(vec![1, 2]), Poly(vec![0, 0, 1])]);
        let one = SkewPoly::constant(Poly::constant(1));
        assert_eq!(s.mul(&one, &f), f);
        assert_eq!(s.mul(&f, &one), f);
    }

    fn random_skew(s: &SkewRing, rng: &mut ChaCha8Rng) -> SkewPoly {
        SkewPoly::from_coeffs((0..3).map(|_| s.ring().random(2, rng)).collect())
    }

    proptest! {
        #[test]
        fn derivative_is_multiplicative(seed in any::<u64>(), which in 0usize..3) {
            let (p, k) = [(2, 1), (3, 1), (2, 2)][which];
            let s = ring(p, k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_skew(&s, &mut rng);
            let g = random_skew(&s, &mut rng);
            let prod = s.mul(&f, &g);
            prop_assert_eq!(prod.derivative(), s.ring().mul(&f.derivative(), &g.derivative()));
            if !f.is_zero() && !g.is_zero() {
                prop_assert_eq!(prod.deg_tau().unwrap(), f.deg_tau().unwrap() + g.deg_tau().unwrap());
            }
        }

        #[test]
        fn multiplication_is_associative(seed in any::<u64>()) {
            let s = ring(2, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_skew(&s, &mut rng);
            let g = random_skew(&s, &mut rng);
            let h = random_skew(&s, &mut rng);
            prop_assert_eq!(s.mul(&s.mul(&f, &g), &h), s.mul(&f, &s.mul(&g, &h)));
            prop_assert_eq!(s.mul(&f, &s.add(&g, &h)), s.add(&s.mul(&f, &g), &s.mul(&f, &h)));
        }
    }
}
