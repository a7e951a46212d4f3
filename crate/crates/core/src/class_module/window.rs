//! The window `V = m / m^M` of `K_∞ = L((1/θ))` and the induced `t`-action.
//!
//! With a modulus `f` the model is `W = V ⊕ L[θ]/f`, the quotient of
//! `K_∞ / f O_K` by `m^M`; without one it is `V` alone.

use crate::base::field::Elem;
use crate::base::linalg::{self, Matrix, Subspace};
use crate::base::{ConstantField, Poly, Trunc};
use crate::drinfeld::{DrinfeldModule, ExpData, LaurentAlgebra, QuotientAlgebra, Threshold};
use crate::error::Result;

const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
pub struct WindowModel {
    consts: ConstantField,
    exp: ExpData,
    threshold: Threshold,
    modulus: Option<Poly>,
}

/// The smallest `T`-stable subspace containing the seeds.
#[derive(Clone, Debug)]
pub struct Closure {
    pub subspace: Subspace,
    pub seeds: usize,
    pub iterations: usize,
}

impl WindowModel {
    pub fn new(consts: &ConstantField, mut exp: ExpData) -> Result<Self> {
        let threshold = exp.threshold()?;
        Ok(WindowModel { consts: consts.clone(), exp, threshold, modulus: None })
    }

    pub fn build(module: &DrinfeldModule, consts: &ConstantField) -> Result<Self> {
        Self::new(consts, ExpData::new(module, module.rank())?)
    }

    /// Attach the modulus `f ∈ L[θ]` (ambient coefficients).
    pub fn with_modulus(mut self, f: &Poly) -> Result<Self> {
        let alg = QuotientAlgebra::new(&self.consts, f)?;
        self.modulus = Some(alg.modulus().clone());
        Ok(self)
    }

    pub fn module(&self) -> &DrinfeldModule {
        self.exp.module()
    }

    pub fn consts(&self) -> &ConstantField {
        &self.consts
    }

    pub fn exp_data(&self) -> &ExpData {
        &self.exp
    }

    pub fn threshold(&self) -> &Threshold {
        &self.threshold
    }

    pub fn m(&self) -> i64 {
        self.threshold.m as i64
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.modulus.as_ref()
    }

    fn d(&self) -> usize {
        self.consts.degree() as usize
    }

    /// `dim_{F_q} V = (M-1)[L:F_q]`.
    pub fn window_dim(&self) -> usize {
        (self.m() as usize - 1) * self.d()
    }

    pub fn local_dim(&self) -> usize {
        self.modulus.as_ref().map_or(0, |f| f.deg().unwrap() * self.d())
    }

    pub fn dim(&self) -> usize {
        self.window_dim() + self.local_dim()
    }

    fn quotient(&self) -> Option<QuotientAlgebra<'_>> {
        self.modulus.as_ref().map(|f| QuotientAlgebra::new(&self.consts, f).expect("validated modulus"))
    }

    /// Canonical lift of the window part: `Σ c_w u^w` with `1 ≤ w ≤ M-1`.
    pub fn lift(&self, v: &[Elem]) -> Trunc {
        let d = self.d();
        let terms: Vec<(i64, Elem)> = (1..self.m())
            .map(|w| {
                let k = (w as usize - 1) * d;
                (w, self.consts.from_coords(&v[k..k + d]))
            })
            .filter(|&(_, c)| c != 0)
            .collect();
        Trunc::from_terms(&terms, EXACT)
    }

    /// Window coordinates of `y`, discarding the θ-polynomial part and
    /// `u^(≥M)`.
    pub fn strip(&self, y: &Trunc) -> Vec<Elem> {
        let mut v = Vec::with_capacity(self.window_dim());
        for w in 1..self.m() {
            v.extend(self.consts.coords(y.get(w)));
        }
        v
    }

    /// The θ-polynomial part `Σ_{w ≤ 0} y_w θ^(-w)`.
    pub fn polynomial_part(y: &Trunc) -> Poly {
        let lo = y.valuation_lb();
        if lo > 0 {
            return Poly::zero();
        }
        Poly::from_coeffs((0..=-lo).map(|k| y.get(-k)).collect())
    }

    /// Coordinates in the model of the class of `y ∈ K_∞` (known below `M`).
    pub fn class_of(&self, y: &Trunc) -> Vec<Elem> {
        let mut v = self.strip(y);
        if let Some(alg) = self.quotient() {
            v.extend(alg.to_vec(&alg.reduce(&Self::polynomial_part(y))));
        }
        v
    }

    /// Class of `a + x` for `a ∈ L[θ]` and `x` a window vector.
    pub fn combine(&self, a: &Poly, x: &[Elem]) -> Vec<Elem> {
        let mut v = x.to_vec();
        if let Some(alg) = self.quotient() {
            v.extend(alg.to_vec(&alg.reduce(a)));
        }
        v
    }

    /// `T(x, y) = (strip φ(t) x̃, φ(t) y + polypart(φ(t) x̃) mod f)`.
    pub fn apply_t(&self, v: &[Elem]) -> Vec<Elem> {
        let n = self.window_dim();
        let la = LaurentAlgebra { consts: &self.consts };
        let img = self.module().apply_t(&la, &self.lift(&v[..n]));
        let mut out = self.strip(&img);
        if let Some(alg) = self.quotient() {
            let y = alg.from_vec(&v[n..]);
            let ty = self.module().apply_t(&alg, &y);
            let total = alg.reduce(&alg.ring().add(&ty, &Self::polynomial_part(&img)));
            out.extend(alg.to_vec(&total));
        }
        out
    }

    /// Matrix of `T` in the standard basis (columns are images).
    pub fn t_matrix(&self) -> Matrix {
        let n = self.dim();
        let cols: Vec<Vec<Elem>> = (0..n)
            .map(|j| {
                let mut e = vec![0; n];
                e[j] = 1;
                self.apply_t(&e)
            })
            .collect();
        linalg::from_columns(&cols, n)
    }

    /// `exp(c u^k)` modulo `u^M`, exact.
    pub fn exp_monomial(&mut self, c: Elem, k: i64) -> Result<Trunc> {
        let x = Trunc::from_terms(&[(k, c)], EXACT);
        let m = self.m();
        self.exp.evaluate(&self.consts, &x, m)
    }

    /// Classes of `exp(c u^k)` for `c` in the basis of `L`, `0 ≤ k ≤ M-1`.
    pub fn seeds(&mut self) -> Result<Vec<Vec<Elem>>> {
        let basis = self.consts.basis().to_vec();
        let mut out = Vec::new();
        for k in 0..self.m() {
            for &c in &basis {
                let y = self.exp_monomial(c, k)?;
                out.push(self.class_of(&y));
            }
        }
        Ok(out)
    }

    /// `U ← U + T(U)` starting from the seeds.
    pub fn closure(&mut self) -> Result<Closure> {
        let seeds = self.seeds()?;
        let t = self.t_matrix();
        Ok(close_under(self.consts.base(), &t, &seeds))
    }
}

/// Smallest subspace containing `seeds` and stable under `t`, with the number
/// of rounds `U ← U + T(U)` needed.
pub fn close_under(field: &crate::base::FiniteField, t: &Matrix, seeds: &[Vec<Elem>]) -> Closure {
    let n = t.len();
    let mut sub = Subspace::new(n);
    let mut frontier: Vec<Vec<Elem>> = seeds.iter().filter(|s| sub.insert(field, s)).cloned().collect();
    let mut iterations = 0usize;
    while !frontier.is_empty() {
        frontier = frontier
            .iter()
            .map(|v| linalg::mat_vec(field, t, v))
            .filter(|w| sub.insert(field, w))
            .collect();
        if !frontier.is_empty() {
            iterations += 1;
        }
    }
    Closure { subspace: sub, seeds: seeds.len(), iterations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{FiniteField, PolyRing, RationalFunction};

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    fn regression() -> DrinfeldModule {
        DrinfeldModule::new(&f2(), vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1])]).unwrap()
    }

    #[test]
    fn window_dimensions() {
        let l1 = ConstantField::new(&f2(), 1).unwrap();
        let l2 = ConstantField::new(&f2(), 2).unwrap();
        assert_eq!(WindowModel::build(&DrinfeldModule::carlitz(&f2()), &l1).unwrap().window_dim(), 0);
        assert_eq!(WindowModel::build(&regression(), &l1).unwrap().window_dim(), 1);
        assert_eq!(WindowModel::build(&regression(), &l2).unwrap().window_dim(), 2);
    }

    /// Independent oracle: expand `exp(x) = Σ e_i x^(2^i)` for `x = u` and
    /// `x = 1` by summing exact rational functions, then read the `u^1`
    /// coefficient by long division to precision 8.
    #[test]
    fn regression_seeds_vanish() {
        let e = regression();
        let ring = PolyRing::new(f2());
        let data = ExpData::new(&e, 6).unwrap();
        let u = RationalFunction::new(&ring, Poly::constant(1), Poly(vec![0, 1]));
        for x in [u, RationalFunction::one()] {
            let mut sum = RationalFunction::zero();
            let mut xp = x.clone();
            for i in 0..=6 {
                if i > 0 {
                    xp = xp.mul(&ring, &xp);
                }
                sum = sum.add(&ring, &data.coeff(i).mul(&ring, &xp));
            }
            let s = crate::base::laurent_expand(&ring, &sum, -8, 8);
            assert_eq!(s.get(1), 0);
        }
        let l1 = ConstantField::new(&f2(), 1).unwrap();
        let mut w = WindowModel::build(&e, &l1).unwrap();
        assert!(w.seeds().unwrap().iter().all(|s| s == &vec![0]));
        assert_eq!(w.t_matrix(), vec![vec![0]]);
        assert_eq!(w.closure().unwrap().subspace.dim(), 0);
    }

    #[test]
    fn strip_is_idempotent() {
        let l2 = ConstantField::new(&f2(), 2).unwrap();
        let w = WindowModel::build(&regression(), &l2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let v = vec![a, b];
                assert_eq!(w.strip(&w.lift(&v)), v);
            }
        }
    }

    #[test]
    fn closure_of_nilpotent_shift() {
        let f = f2();
        let t = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]];
        let c = close_under(&f, &t, &[vec![1, 0, 0]]);
        assert_eq!(c.subspace.dim(), 3);
        assert_eq!(c.iterations, 2);
    }
}
