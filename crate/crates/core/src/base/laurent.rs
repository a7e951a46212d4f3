//! Exact Laurent expansions in `u = 1/θ`.

use super::field::{Elem, FiniteField};
use super::poly::{Poly, PolyRing};
use super::rational::RationalFunction;

/// Coefficients of a Laurent series on the exponent window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSlice {
    lo: i64,
    coeffs: Vec<Elem>,
}

impl LaurentSlice {
    pub fn zero(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty window [{lo}, {hi}]");
        LaurentSlice { lo, coeffs: vec![0; (hi - lo + 1) as usize] }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `u^w`. Panics outside the window.
    pub fn get(&self, w: i64) -> Elem {
        assert!(w >= self.lo && w <= self.hi(), "exponent {w} outside window");
        self.coeffs[(w - self.lo) as usize]
    }

    pub fn set(&mut self, w: i64, c: Elem) {
        assert!(w >= self.lo && w <= self.hi(), "exponent {w} outside window");
        self.coeffs[(w - self.lo) as usize] = c;
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        let mut out = Self::zero(lo, hi);
        for w in lo..=hi {
            out.set(w, self.get(w));
        }
        out
    }

    pub fn add(&self, field: &FiniteField, other: &Self) -> Self {
        assert_eq!((self.lo, self.hi()), (other.lo, other.hi()), "window mismatch");
        LaurentSlice {
            lo: self.lo,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| field.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, field: &FiniteField, c: Elem) -> Self {
        LaurentSlice { lo: self.lo, coeffs: self.coeffs.iter().map(|&a| field.mul(c, a)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Expansion of `x` at `θ = ∞` restricted to `[lo, hi]`.
///
/// Writing `x = N/D`, `x = u^(deg D - deg N) · N_rev(u)/D_rev(u)` where the
/// reversed polynomials are power series in `u` with `D_rev(0) ≠ 0`.
pub fn laurent_expand(ring: &PolyRing, x: &RationalFunction, lo: i64, hi: i64) -> LaurentSlice {
    let mut out = LaurentSlice::zero(lo, hi);
    let Some(v) = x.valuation() else {
        return out;
    };
    if hi < v {
        return out;
    }
    let f = ring.field();
    let n_rev: Vec<Elem> = x.num().coeffs().iter().rev().copied().collect();
    let d_rev: Vec<Elem> = x.den().coeffs().iter().rev().copied().collect();
    let inv0 = f.inv(d_rev[0]);
    let len = (hi - v + 1) as usize;
    let mut s: Vec<Elem> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = n_rev.get(k).copied().unwrap_or(0);
        for j in 1..d_rev.len().min(k + 1) {
            acc = f.sub(acc, f.mul(d_rev[j], s[k - j]));
        }
        s.push(f.mul(acc, inv0));
    }
    for w in lo.max(v)..=hi {
        out.set(w, s[(w - v) as usize]);
    }
    out
}

/// A Laurent series in `u` known modulo `u^prec`. Stored coefficients start
/// at `lo`; everything below `lo` and past the stored range (but below
/// `prec`) vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trunc {
    lo: i64,
    coeffs: Vec<Elem>,
    prec: i64,
}

impl Trunc {
    pub fn zero(prec: i64) -> Self {
        Trunc { lo: prec, coeffs: Vec::new(), prec }
    }

    pub fn from_slice(s: &LaurentSlice, prec: i64) -> Self {
        let prec = prec.min(s.hi() + 1);
        let mut t = Self::zero(prec);
        for w in s.lo()..prec {
            t.set(w, s.get(w));
        }
        t
    }

    /// The θ-polynomial `Σ a_k θ^k` viewed as `Σ a_k u^(-k)`.
    pub fn from_theta_poly(a: &Poly, prec: i64) -> Self {
        let mut t = Self::zero(prec);
        for (k, &c) in a.coeffs().iter().enumerate() {
            if c != 0 && -(k as i64) < prec {
                t.set(-(k as i64), c);
            }
        }
        t
    }

    /// `Σ_w c_w u^w` from explicit terms.
    pub fn from_terms(terms: &[(i64, Elem)], prec: i64) -> Self {
        let mut t = Self::zero(prec);
        for &(w, c) in terms {
            if w < prec {
                t.set(w, c);
            }
        }
        t
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Coefficient of `u^w`. Panics for `w ≥ prec`.
    pub fn get(&self, w: i64) -> Elem {
        assert!(w < self.prec, "coefficient u^{w} beyond precision {}", self.prec);
        if w < self.lo {
            0
        } else {
            self.coeffs.get((w - self.lo) as usize).copied().unwrap_or(0)
        }
    }

    fn set(&mut self, w: i64, c: Elem) {
        assert!(w < self.prec);
        if c == 0 && (w < self.lo || self.coeffs.is_empty()) {
            return;
        }
        if self.coeffs.is_empty() {
            self.lo = w;
        } else if w < self.lo {
            let mut v = vec![0; (self.lo - w) as usize];
            v.extend_from_slice(&self.coeffs);
            self.coeffs = v;
            self.lo = w;
        }
        let need = (w - self.lo + 1) as usize;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        self.coeffs[(w - self.lo) as usize] = c;
    }

    /// Exponent of the first nonzero known coefficient, or `prec` if none.
    pub fn valuation_lb(&self) -> i64 {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(i) => self.lo + i as i64,
            None => self.prec,
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        let mut t = Self::zero(prec);
        for (w, c) in self.terms() {
            if w < prec {
                t.set(w, c);
            }
        }
        t
    }

    /// Known nonzero terms `(w, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Elem)> + '_ {
        let lo = self.lo;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (lo + i as i64, c))
    }

    pub fn add(&self, field: &FiniteField, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut t = self.truncate(prec);
        for (w, c) in other.terms() {
            if w < prec {
                t.set(w, field.add(t.get(w), c));
            }
        }
        t
    }

    pub fn neg(&self, field: &FiniteField) -> Self {
        Trunc {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&c| field.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, field: &FiniteField, other: &Self) -> Self {
        self.add(field, &other.neg(field))
    }

    pub fn scale(&self, field: &FiniteField, c: Elem) -> Self {
        Trunc {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|&x| field.mul(c, x)).collect(),
            prec: self.prec,
        }
    }

    /// Multiply by a θ-polynomial `Σ a_k θ^k`; precision drops by `deg a`.
    pub fn mul_theta_poly(&self, field: &FiniteField, a: &Poly) -> Self {
        let Some(d) = a.deg() else {
            return Self::zero(i64::MAX / 4);
        };
        let prec = self.prec - d as i64;
        let mut t = Self::zero(prec);
        for (w, c) in self.terms() {
            for (k, &ak) in a.coeffs().iter().enumerate() {
                let e = w - k as i64;
                if ak != 0 && e < prec {
                    t.set(e, field.add(t.get(e), field.mul(ak, c)));
                }
            }
        }
        t
    }

    /// Product of two truncated series.
    pub fn mul(&self, field: &FiniteField, other: &Self) -> Self {
        let va = self.valuation_lb();
        let vb = other.valuation_lb();
        let prec = (self.prec.saturating_add(vb)).min(other.prec.saturating_add(va));
        let mut t = Self::zero(prec);
        for (wa, a) in self.terms() {
            for (wb, b) in other.terms() {
                let e = wa + wb;
                if e < prec {
                    t.set(e, field.add(t.get(e), field.mul(a, b)));
                }
            }
        }
        t
    }

    /// Coefficientwise `c ↦ c^qe`, exponents and precision scaled by `qe`.
    pub fn power_frobenius(&self, field: &FiniteField, qe: u64) -> Self {
        let prec = self.prec.saturating_mul(qe as i64);
        let mut t = Self::zero(prec);
        for (w, c) in self.terms() {
            let e = w * qe as i64;
            if e < prec {
                t.set(e, field.pow(c, qe));
            }
        }
        t
    }

    /// Whether all known coefficients in `[lo, hi]` vanish.
    pub fn vanishes_on(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi.min(self.prec - 1)).all(|w| self.get(w) == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f2() -> PolyRing {
        PolyRing::new(FiniteField::prime(2).unwrap())
    }

    #[test]
    fn one_over_theta_plus_one() {
        let r = f2();
        let x = RationalFunction::new(&r, Poly(vec![1]), Poly(vec![1, 1]));
        let s = laurent_expand(&r, &x, 0, 3);
        assert_eq!(s.coeffs(), &[0, 1, 1, 1]);
    }

    #[test]
    fn theta_is_u_inverse() {
        let r = f2();
        let s = laurent_expand(&r, &RationalFunction::from_poly(Poly(vec![0, 1])), -2, 2);
        assert_eq!(s.coeffs(), &[0, 1, 0, 0, 0]);
        let z = laurent_expand(&r, &RationalFunction::zero(), -3, 3);
        assert!(z.is_zero());
    }

    /// Oracle: multiply the slice by the denominator and compare with the
    /// numerator, coefficient by coefficient.
    fn check_by_multiplication(r: &PolyRing, x: &RationalFunction, hi: i64) {
        let f = r.field();
        let dn = x.den().degree_i64();
        let v = x.valuation().unwrap();
        let s = laurent_expand(r, x, v, hi);
        // den(θ) = Σ d_k u^{-k}; product exact for exponents <= hi - dn
        for e in (v - dn)..=(hi - dn) {
            let mut acc = 0;
            for (k, &dk) in x.den().coeffs().iter().enumerate() {
                let w = e + k as i64;
                if w >= v && w <= hi {
                    acc = f.add(acc, f.mul(dk, s.get(w)));
                }
            }
            let expect = if e <= 0 { x.num().coeff((-e) as usize) } else { 0 };
            assert_eq!(acc, expect, "exponent {e}");
        }
    }

    proptest! {
        #[test]
        fn expansion_inverts_denominator(seed in any::<u64>(), which in 0usize..3) {
            let (p, k) = [(2, 1), (3, 1), (2, 2)][which];
            let r = PolyRing::new(FiniteField::new(p, k).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = r.random(5, &mut rng);
            let d = r.random(4, &mut rng);
            prop_assume!(!n.is_zero() && !d.is_zero());
            let x = RationalFunction::new(&r, n, d);
            check_by_multiplication(&r, &x, 12);
        }

        #[test]
        fn nested_windows_agree(seed in any::<u64>(), a in -6i64..0, b in 0i64..6) {
            let r = PolyRing::new(FiniteField::prime(3).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = r.random(4, &mut rng);
            let d = r.random(3, &mut rng);
            prop_assume!(!d.is_zero());
            let x = RationalFunction::new(&r, n, d);
            let wide = laurent_expand(&r, &x, -8, 10);
            prop_assert_eq!(laurent_expand(&r, &x, a, b), wide.restrict(a, b));
        }

        #[test]
        fn expansion_is_additive_and_multiplicative(seed in any::<u64>()) {
            let r = PolyRing::new(FiniteField::prime(5).unwrap());
            let f = r.field().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (dx, dy) = (r.random(3, &mut rng), r.random(2, &mut rng));
            prop_assume!(!dx.is_zero() && !dy.is_zero());
            let x = RationalFunction::new(&r, r.random(3, &mut rng), dx);
            let y = RationalFunction::new(&r, r.random(3, &mut rng), dy);
            let (lo, hi) = (-6, 8);
            let sx = laurent_expand(&r, &x, lo, hi);
            let sy = laurent_expand(&r, &y, lo, hi);
            prop_assert_eq!(laurent_expand(&r, &x.add(&r, &y), lo, hi), sx.add(&f, &sy));
            let tx = Trunc::from_slice(&sx, hi + 1);
            let ty = Trunc::from_slice(&sy, hi + 1);
            let prod = tx.mul(&f, &ty);
            let exact = laurent_expand(&r, &x.mul(&r, &y), lo, hi);
            for w in lo..prod.prec().min(hi + 1) {
                prop_assert_eq!(prod.get(w), exact.get(w));
            }
        }
    }

    #[test]
    fn trunc_precision_rules() {
        let f = FiniteField::prime(2).unwrap();
        let x = Trunc::from_terms(&[(1, 1)], 4);
        let y = x.mul_theta_poly(&f, &Poly(vec![0, 0, 1]));
        assert_eq!(y.prec(), 2);
        assert_eq!(y.get(-1), 1);
        let z = x.power_frobenius(&f, 2);
        assert_eq!(z.prec(), 8);
        assert_eq!(z.get(2), 1);
        assert_eq!(z.get(1), 0);
    }
}
