//! Coefficients of the exponential `exp_E(X) = Σ e_i X^(q^i)` and the
//! certificates bounding their valuations.

use std::collections::HashMap;

use serde::Serialize;

use crate::base::{laurent_expand, ConstantField, LaurentSlice, Poly, RationalFunction, Trunc};
use crate::error::{Error, Result};

use super::module::DrinfeldModule;

/// Upper limit on the number of computed coefficients.
pub const MAX_COEFFS: usize = 64;

/// Upper limit on `deg e_i` (numerator or denominator) before giving up.
pub const MAX_COEFF_DEGREE: usize = 1 << 17;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TailCertificate {
    /// Last index inspected explicitly.
    pub window_end: usize,
    /// `max(0, max_j deg a_j)`.
    pub c: i64,
    /// `v(e_i) ≥ 0` on the last `r` indices up to `window_end`.
    pub window_nonnegative: bool,
    /// `q^(window_end + 1) ≥ c`.
    pub growth_ok: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Threshold {
    pub m: u32,
    pub certificate: TailCertificate,
}

#[derive(Clone, Debug)]
pub struct ExpData {
    module: DrinfeldModule,
    coeffs: Vec<RationalFunction>,
    valuations: Vec<i64>,
    slices: HashMap<usize, LaurentSlice>,
}

fn frobenius_rational(module: &DrinfeldModule, x: &RationalFunction, j: usize) -> RationalFunction {
    let s = module.skew_ring();
    let num = s.twist(x.num(), j);
    let den = s.twist(x.den(), j);
    RationalFunction::new(module.ring(), num, den)
}

impl ExpData {
    /// `e_0, …, e_count` (only `e_0 = 1` in rank zero).
    pub fn new(module: &DrinfeldModule, count: usize) -> Result<Self> {
        let mut e = ExpData {
            module: module.clone(),
            coeffs: vec![RationalFunction::one()],
            valuations: vec![0],
            slices: HashMap::new(),
        };
        e.extend_to(count)?;
        Ok(e)
    }

    pub fn module(&self) -> &DrinfeldModule {
        &self.module
    }

    /// Index of the last computed coefficient.
    pub fn computed(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &RationalFunction {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn valuation(&self, i: usize) -> i64 {
        self.valuations[i]
    }

    pub fn valuations(&self) -> &[i64] {
        &self.valuations
    }

    /// Compute through `e_count` using
    /// `e_i (θ^(q^i) - θ) = Σ_{j=1}^{min(i,r)} a_j e_{i-j}^(q^j)`.
    pub fn extend_to(&mut self, count: usize) -> Result<()> {
        if self.module.rank() == 0 {
            return Ok(());
        }
        let ring = self.module.ring().clone();
        let q = self.module.q();
        let r = self.module.rank();
        while self.coeffs.len() <= count {
            let i = self.coeffs.len();
            if i > MAX_COEFFS {
                return Err(Error::ResourceGuard(format!("exponential coefficient e_{i}")));
            }
            let qi = q
                .checked_pow(i as u32)
                .filter(|&v| v as usize <= MAX_COEFF_DEGREE)
                .ok_or_else(|| Error::ResourceGuard(format!("exponential coefficient e_{i}")))?;
            let mut sum = RationalFunction::zero();
            for j in 1..=r.min(i) {
                let a = &self.module.coeffs()[j];
                if a.is_zero() {
                    continue;
                }
                let term = frobenius_rational(&self.module, &self.coeffs[i - j], j)
                    .mul(&ring, &RationalFunction::from_poly(a.clone()));
                sum = sum.add(&ring, &term);
            }
            let denom = ring.sub(&Poly::monomial(1, qi as usize), &ring.x());
            let e = sum.div(&ring, &RationalFunction::from_poly(denom));
            if e.num().0.len().max(e.den().0.len()) > MAX_COEFF_DEGREE {
                return Err(Error::ResourceGuard(format!("degree of e_{i}")));
            }
            self.valuations.push(e.valuation().unwrap_or(i64::MAX / 4));
            self.coeffs.push(e);
        }
        Ok(())
    }

    fn tail_ok(&self, end: usize, s: i64, target: i64) -> bool {
        let r = self.module.rank();
        let q = self.module.q() as i64;
        let c = self.module.max_coeff_degree();
        let lo = end.saturating_sub(r - 1);
        let window = (lo..=end).all(|i| {
            let Some(qi) = q.checked_pow(i as u32) else { return false };
            self.valuations[i] >= s.saturating_mul(qi).saturating_add(target.max(0))
        });
        let growth = q.checked_pow(end as u32 + 1).map_or(true, |v| v >= c);
        window && growth
    }

    /// Least `I ≥ 1` such that every term `e_i x^(q^i)` with `i > I` and
    /// `v(x) ≥ -s` has valuation at least `max(target, 0)`. Requires
    /// `v(e_i) ≥ s q^i + max(target, 0)` on `r` consecutive indices ending at
    /// `I` and `q^(I+1) ≥ c`; then `v(e_i) ≥ q^i(1+s) - c + max(target,0)`
    /// propagates through the recursion.
    pub fn tail_index(&mut self, s: i64, target: i64) -> Result<usize> {
        let r = self.module.rank();
        if r == 0 {
            return Ok(0);
        }
        let mut end = r.max(1);
        loop {
            self.extend_to(end)?;
            if self.tail_ok(end, s, target) {
                return Ok(end);
            }
            end += 1;
        }
    }

    /// The convergence threshold `M` with its certificate.
    pub fn threshold(&mut self) -> Result<Threshold> {
        let c = self.module.max_coeff_degree();
        if self.module.rank() == 0 {
            return Ok(Threshold {
                m: 1,
                certificate: TailCertificate { window_end: 0, c, window_nonnegative: true, growth_ok: true },
            });
        }
        let end = self.tail_index(0, 0).map_err(|e| match e {
            Error::ResourceGuard(_) => Error::CertificateNotFound { coefficients: self.computed() },
            other => other,
        })?;
        let q = self.module.q() as i64;
        let mut m: i64 = 1;
        for i in 1..=end {
            let v = self.valuations[i];
            if v <= 0 {
                let qi1 = q.pow(i as u32) - 1;
                m = m.max((-v).div_euclid(qi1) + 1);
            }
        }
        Ok(Threshold {
            m: m as u32,
            certificate: TailCertificate { window_end: end, c, window_nonnegative: true, growth_ok: true },
        })
    }

    /// Exact expansion of `e_i` on `[v(e_i), hi]`, cached.
    pub fn expansion(&mut self, i: usize, hi: i64) -> LaurentSlice {
        let v = self.valuations[i];
        let lo = v.min(hi);
        if let Some(s) = self.slices.get(&i) {
            if s.hi() >= hi && s.lo() <= lo {
                return s.restrict(lo, hi);
            }
        }
        let s = laurent_expand(self.module.ring(), &self.coeffs[i], lo, hi.max(lo));
        self.slices.insert(i, s.clone());
        s
    }

    /// `exp(x)` modulo `u^prec` for a Laurent polynomial `x` over `L`,
    /// with every coefficient below `prec` exact.
    pub fn evaluate(&mut self, consts: &ConstantField, x: &Trunc, prec: i64) -> Result<Trunc> {
        let amb = consts.ambient();
        let v = x.valuation_lb();
        if v >= x.prec() {
            return Ok(Trunc::zero(prec));
        }
        let s = -v;
        let end = self.tail_index(s, prec)?;
        let q = self.module.q();
        let mut acc = Trunc::zero(prec);
        let mut xp = x.clone();
        for i in 0..=end {
            if i > 0 {
                xp = xp.power_frobenius(amb, q);
            }
            let qi = q.pow(i as u32) as i64;
            let ve = self.valuations[i];
            if ve - s * qi >= prec || self.coeffs[i].is_zero() {
                continue;
            }
            let hi = prec - 1 + s * qi;
            let slice = self.expansion(i, hi);
            let mut terms = Vec::new();
            for w in slice.lo()..=slice.hi() {
                let c = slice.get(w);
                if c != 0 {
                    terms.push((w, consts.embed(c)));
                }
            }
            let e = Trunc::from_terms(&terms, hi + 1);
            acc = acc.add(amb, &e.mul(amb, &xp).truncate(prec));
        }
        Ok(acc.truncate(prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{FiniteField, PolyRing};
    use crate::drinfeld::module::LaurentAlgebra;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    #[test]
    fn carlitz_first_coefficient() {
        let e = ExpData::new(&DrinfeldModule::carlitz(&f2()), 1).unwrap();
        let ring = PolyRing::new(f2());
        assert_eq!(e.coeff(0), &RationalFunction::one());
        assert_eq!(e.coeff(1), &RationalFunction::new(&ring, Poly(vec![1]), Poly(vec![0, 1, 1])));
    }

    /// `e_i D_i = 1` with `D_i = (θ^(q^i) - θ) D_{i-1}^q` and `deg D_i = i q^i`.
    #[test]
    fn carlitz_product_identity() {
        for q in [2u32, 3, 4] {
            let field = if q == 4 { FiniteField::new(2, 2).unwrap() } else { FiniteField::prime(q).unwrap() };
            let m = DrinfeldModule::carlitz(&field);
            let ring = m.ring().clone();
            let e = ExpData::new(&m, 4).unwrap();
            let mut d = Poly::constant(1);
            for i in 1..=4usize {
                let qi = (q as usize).pow(i as u32);
                let factor = ring.sub(&Poly::monomial(1, qi), &ring.x());
                d = ring.mul(&factor, &ring.pow(&d, q as u64));
                assert_eq!(d.deg().unwrap(), i * qi);
                let prod = e.coeff(i).mul(&ring, &RationalFunction::from_poly(d.clone()));
                assert_eq!(prod, RationalFunction::one(), "q={q} i={i}");
                assert_eq!(e.valuation(i), (i * qi) as i64);
            }
        }
    }

    #[test]
    fn regression_module_coefficients() {
        let ring = PolyRing::new(f2());
        let m = DrinfeldModule::new(&f2(), vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1])]).unwrap();
        let mut e = ExpData::new(&m, 3).unwrap();
        assert_eq!(
            e.coeff(1),
            &RationalFunction::new(&ring, Poly(vec![0, 0, 0, 1]), Poly(vec![0, 1, 1]))
        );
        assert_eq!(&e.valuations()[..4], &[0, -1, -1, 3]);
        let t = e.threshold().unwrap();
        assert_eq!(t.m, 2);
        assert_eq!(t.certificate.window_end, 3);
    }

    #[test]
    fn thresholds_of_simple_modules() {
        for q in [2, 3, 5] {
            let f = FiniteField::prime(q).unwrap();
            let mut e = ExpData::new(&DrinfeldModule::carlitz(&f), 1).unwrap();
            assert_eq!(e.threshold().unwrap().m, 1);
            let mut z = ExpData::new(&DrinfeldModule::trivial(&f), 5).unwrap();
            assert_eq!(z.computed(), 0);
            assert_eq!(z.threshold().unwrap().m, 1);
        }
    }

    #[test]
    fn functional_equation_on_monomials() {
        let f = f2();
        let m = DrinfeldModule::new(&f, vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1])]).unwrap();
        let l = ConstantField::new(&f, 2).unwrap();
        let amb = l.ambient();
        let alg = LaurentAlgebra { consts: &l };
        let mut e = ExpData::new(&m, 3).unwrap();
        for (w, c) in [(1i64, l.basis()[1]), (0, 1), (-1, l.basis()[1]), (2, 1)] {
            let x = Trunc::from_terms(&[(w, c)], i64::MAX / 4);
            let prec = 6;
            // t · exp(x) needs exp(x) to precision prec + max(1, c·q^r): use generous margin
            let ex = e.evaluate(&l, &x, prec + 8).unwrap();
            let lhs = m.apply_t(&alg, &ex);
            let theta_x = x.mul_theta_poly(amb, &Poly(vec![0, 1]));
            let rhs = e.evaluate(&l, &theta_x, prec).unwrap();
            assert!(lhs.prec() >= prec);
            for k in -12..prec {
                assert_eq!(lhs.get(k), rhs.get(k), "w={w} k={k}");
            }
        }
    }
}
