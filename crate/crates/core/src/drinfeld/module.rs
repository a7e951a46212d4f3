//! Drinfeld `F_q[t]`-modules over `F_q[θ]` and the `E`-functor.

use serde::{Deserialize, Serialize};

use crate::base::parse::{parse_poly, parse_prime_poly, THETA_NAMES};
use crate::base::{ConstantField, Elem, FiniteField, Poly, PolyRing, Trunc};
use crate::error::{Error, Result};

use super::skew::{SkewPoly, SkewRing};

/// `φ(t) = θ + a_1 τ + … + a_r τ^r` with `a_i ∈ F_q[θ]`.
#[derive(Clone, Debug)]
pub struct DrinfeldModule {
    ring: PolyRing,
    coeffs: Vec<Poly>,
    label: Option<String>,
}

/// JSON form: `{"q": 2, "field_modulus": "x+1", "phi_t": ["theta", "theta^3"]}`
/// or `"phi_t": "carlitz"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field_modulus: Option<String>,
    pub phi_t: PhiSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiSpec {
    Named(String),
    Coefficients(Vec<String>),
}


impl DrinfeldModule {
    pub fn new(field: &FiniteField, coeffs: Vec<Poly>) -> Result<Self> {
        let ring = PolyRing::new(field.clone());
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.first() != Some(&ring.x()) {
            return Err(Error::InvalidInput(
                "the constant τ-coefficient of φ(t) must be θ".into(),
            ));
        }
        Ok(DrinfeldModule { ring, coeffs, label: None })
    }

    pub fn carlitz(field: &FiniteField) -> Self {
        let mut m = Self::new(field, vec![Poly(vec![0, 1]), Poly::constant(1)]).unwrap();
        m.label = Some("carlitz".into());
        m
    }

    /// The rank-zero module `φ(t) = θ`.
    pub fn trivial(field: &FiniteField) -> Self {
        Self::new(field, vec![Poly(vec![0, 1])]).unwrap()
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn from_spec(spec: &ModuleSpec) -> Result<Self> {
        let (p, k) = crate::base::field::prime_power(spec.q)
            .ok_or_else(|| Error::InvalidInput(format!("q = {} is not a prime power", spec.q)))?;
        let field = match &spec.field_modulus {
            Some(m) => {
                let f = FiniteField::with_modulus(p, &parse_prime_poly(p, m)?)?;
                if f.degree() != k {
                    return Err(Error::InvalidInput(format!(
                        "field modulus {m} has degree {} but q = {}",
                        f.degree(),
                        spec.q
                    )));
                }
                f
            }
            None => FiniteField::new(p, k)?,
        };
        let mut module = match &spec.phi_t {
            PhiSpec::Named(n) if n.eq_ignore_ascii_case("carlitz") => Self::carlitz(&field),
            PhiSpec::Named(n) => {
                return Err(Error::InvalidInput(format!("unknown module name '{n}'")))
            }
            PhiSpec::Coefficients(cs) => {
                let ring = PolyRing::new(field.clone());
                let coeffs = cs
                    .iter()
                    .map(|c| parse_poly(&ring, c, THETA_NAMES))
                    .collect::<Result<Vec<_>>>()?;
                Self::new(&field, coeffs)?
            }
        };
        if spec.label.is_some() {
            module.label = spec.label.clone();
        }
        Ok(module)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: ModuleSpec = serde_json::from_str(s)?;
        Self::from_spec(&spec)
    }

    pub fn to_spec(&self) -> ModuleSpec {
        ModuleSpec {
            q: self.field().size(),
            field_modulus: (self.field().degree() > 1)
                .then(|| self.prime_ring().format(&Poly(self.field().modulus().to_vec()), "x")),
            phi_t: PhiSpec::Coefficients(self.coeffs.iter().map(|c| self.ring.format(c, "theta")).collect()),
            label: self.label.clone(),
        }
    }

    fn prime_ring(&self) -> PolyRing {
        PolyRing::new(FiniteField::prime(self.field().characteristic()).unwrap())
    }

    pub fn field(&self) -> &FiniteField {
        self.ring.field()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn q(&self) -> u64 {
        self.field().size() as u64
    }

    pub fn p(&self) -> u32 {
        self.field().characteristic()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `a_0 = θ, a_1, …, a_r`.
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_carlitz(&self) -> bool {
        self.coeffs == [Poly(vec![0, 1]), Poly::constant(1)]
    }

    /// `c = max(0, max_j deg a_j)` over `j ≥ 1`.
    pub fn max_coeff_degree(&self) -> i64 {
        self.coeffs[1..].iter().filter_map(|a| a.deg()).max().unwrap_or(0) as i64
    }

    pub fn skew_ring(&self) -> SkewRing {
        SkewRing::new(self.ring.clone(), self.q())
    }

    pub fn phi_t(&self) -> SkewPoly {
        SkewPoly::from_coeffs(self.coeffs.clone())
    }

    /// `φ(a)` for `a ∈ F_q[t]` by Horner's rule.
    pub fn phi(&self, a: &Poly) -> SkewPoly {
        let s = self.skew_ring();
        let pt = self.phi_t();
        a.0.iter().rev().fold(SkewPoly::zero(), |acc, &c| {
            s.add(&s.mul(&acc, &pt), &SkewPoly::constant(Poly::constant(c)))
        })
    }

    /// `a · x = φ(a)(x)`.
    pub fn apply<A: TauAlgebra>(&self, alg: &A, a: &Poly, x: &A::Elem) -> A::Elem {
        apply_skew(alg, &self.phi(a), x)
    }

    /// `t · x = θx + Σ a_i x^(q^i)`.
    pub fn apply_t<A: TauAlgebra>(&self, alg: &A, x: &A::Elem) -> A::Elem {
        let mut acc = alg.zero();
        let mut cur = x.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                cur = alg.frobenius(&cur);
            }
            if !a.is_zero() {
                acc = alg.add(&acc, &alg.mul_coeff(a, &cur));
            }
        }
        acc
    }
}

/// Rings over `F_q[θ]` on which `τ` acts by `x ↦ x^q`.
pub trait TauAlgebra {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplication by an element of `F_q[θ]`.
    fn mul_coeff(&self, c: &Poly, x: &Self::Elem) -> Self::Elem;
    fn frobenius(&self, x: &Self::Elem) -> Self::Elem;
}

pub fn apply_skew<A: TauAlgebra>(alg: &A, f: &SkewPoly, x: &A::Elem) -> A::Elem {
    let mut acc = alg.zero();
    let mut cur = x.clone();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i > 0 {
            cur = alg.frobenius(&cur);
        }
        if !c.is_zero() {
            acc = alg.add(&acc, &alg.mul_coeff(c, &cur));
        }
    }
    acc
}

fn frobenius_poly(field: &FiniteField, q: u64, a: &Poly) -> Poly {
    if a.is_zero() {
        return Poly::zero();
    }
    let stride = q as usize;
    let mut out = vec![0; (a.0.len() - 1) * stride + 1];
    for (k, &c) in a.0.iter().enumerate() {
        out[k * stride] = field.pow(c, q);
    }
    Poly::from_coeffs(out)
}

/// `L[θ]` with coefficients in the ambient field of a [`ConstantField`].
pub struct PolyAlgebra<'a> {
    pub consts: &'a ConstantField,
    ring: PolyRing,
}

impl<'a> PolyAlgebra<'a> {
    pub fn new(consts: &'a ConstantField) -> Self {
        PolyAlgebra { consts, ring: PolyRing::new(consts.ambient().clone()) }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }
}

impl TauAlgebra for PolyAlgebra<'_> {
    type Elem = Poly;
    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.add(a, b)
    }
    fn mul_coeff(&self, c: &Poly, x: &Poly) -> Poly {
        self.ring.mul(&self.consts.embed_poly(c), x)
    }
    fn frobenius(&self, x: &Poly) -> Poly {
        frobenius_poly(self.consts.ambient(), self.consts.q(), x)
    }
}

/// `L[θ]/(f)`, elements reduced modulo the monic `f`.
pub struct QuotientAlgebra<'a> {
    pub consts: &'a ConstantField,
    ring: PolyRing,
    modulus: Poly,
}

impl<'a> QuotientAlgebra<'a> {
    /// `f` has coefficients in the ambient field and must lie in `L[θ]`.
    pub fn new(consts: &'a ConstantField, f: &Poly) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::InvalidInput("the zero ideal is not a modulus".into()));
        }
        if f.0.iter().any(|&c| !consts.contains(c)) {
            return Err(Error::InvalidInput("modulus has coefficients outside L".into()));
        }
        let ring = PolyRing::new(consts.ambient().clone());
        let modulus = ring.monic(f);
        Ok(QuotientAlgebra { consts, ring, modulus })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        self.ring.rem(a, &self.modulus)
    }

    /// `dim_{F_q} L[θ]/f`.
    pub fn dim(&self) -> usize {
        self.modulus.deg().unwrap() * self.consts.degree() as usize
    }

    /// Coordinates indexed by `(θ-degree, L-basis index)`.
    pub fn to_vec(&self, a: &Poly) -> Vec<Elem> {
        let d = self.consts.degree() as usize;
        let n = self.modulus.deg().unwrap();
        let mut v = vec![0; n * d];
        for k in 0..n {
            let c = self.consts.coords(a.coeff(k));
            v[k * d..(k + 1) * d].copy_from_slice(&c);
        }
        v
    }

    pub fn from_vec(&self, v: &[Elem]) -> Poly {
        let d = self.consts.degree() as usize;
        Poly::from_coeffs(v.chunks(d).map(|c| self.consts.from_coords(c)).collect())
    }
}

impl TauAlgebra for QuotientAlgebra<'_> {
    type Elem = Poly;
    fn zero(&self) -> Poly {
        Poly::zero()
    }
    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.ring.add(a, b)
    }
    fn mul_coeff(&self, c: &Poly, x: &Poly) -> Poly {
        self.ring.mulmod(&self.consts.embed_poly(c), x, &self.modulus)
    }
    fn frobenius(&self, x: &Poly) -> Poly {
        let q = self.consts.q();
        self.ring.rem(&frobenius_poly(self.consts.ambient(), q, x), &self.modulus)
    }
}

/// `L((1/θ))` modulo a power of `u = 1/θ`.
pub struct LaurentAlgebra<'a> {
    pub consts: &'a ConstantField,
}

impl TauAlgebra for LaurentAlgebra<'_> {
    type Elem = Trunc;
    fn zero(&self) -> Trunc {
        Trunc::zero(i64::MAX / 4)
    }
    fn add(&self, a: &Trunc, b: &Trunc) -> Trunc {
        a.add(self.consts.ambient(), b)
    }
    fn mul_coeff(&self, c: &Poly, x: &Trunc) -> Trunc {
        x.mul_theta_poly(self.consts.ambient(), &self.consts.embed_poly(c))
    }
    fn frobenius(&self, x: &Trunc) -> Trunc {
        x.power_frobenius(self.consts.ambient(), self.consts.q())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    #[test]
    fn carlitz_on_small_elements() {
        let e = DrinfeldModule::carlitz(&f2());
        let l = ConstantField::new(&f2(), 1).unwrap();
        let alg = PolyAlgebra::new(&l);
        let theta = Poly(vec![0, 1]);
        assert!(e.apply_t(&alg, &theta).is_zero());
        assert_eq!(e.apply_t(&alg, &Poly::constant(1)), Poly(vec![1, 1]));
        assert_eq!(e.apply(&alg, &Poly::constant(1), &theta), theta);
    }

    #[test]
    fn ranks() {
        let f = f2();
        assert_eq!(DrinfeldModule::carlitz(&f).rank(), 1);
        assert_eq!(DrinfeldModule::trivial(&f).rank(), 0);
        let e = DrinfeldModule::new(&f, vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1]), Poly::constant(1)]).unwrap();
        assert_eq!(e.rank(), 2);
        for k in 1..=4 {
            let tk = Poly::monomial(1, k);
            assert_eq!(e.phi(&tk).deg_tau(), Some(2 * k));
        }
    }

    #[test]
    fn constant_term_must_be_theta() {
        let f = f2();
        assert!(DrinfeldModule::new(&f, vec![Poly(vec![1, 1])]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let e = DrinfeldModule::from_json(r#"{"q": 2, "phi_t": ["theta", "theta^3"]}"#).unwrap();
        assert_eq!(e.coeffs()[1], Poly(vec![0, 0, 0, 1]));
        let c = DrinfeldModule::from_json(r#"{"q": 4, "field_modulus": "x^2+x+1", "phi_t": "carlitz"}"#).unwrap();
        assert!(c.is_carlitz());
        assert_eq!(c.q(), 4);
        let s = serde_json::to_string(&e.to_spec()).unwrap();
        let back = DrinfeldModule::from_json(&s).unwrap();
        assert_eq!(back.coeffs(), e.coeffs());
        assert!(DrinfeldModule::from_json(r#"{"q": 6, "phi_t": "carlitz"}"#).is_err());
        assert!(DrinfeldModule::from_json(r#"{"q": 2, "phi_t": ["theta+1"]}"#).is_err());
    }

    #[test]
    fn multiplicative_in_a() {
        let f = FiniteField::prime(3).unwrap();
        let e = DrinfeldModule::new(&f, vec![Poly(vec![0, 1]), Poly(vec![1, 1]), Poly(vec![2])]).unwrap();
        let l = ConstantField::new(&f, 2).unwrap();
        let alg = PolyAlgebra::new(&l);
        let a = Poly(vec![1, 2, 1]);
        let b = Poly(vec![0, 1]);
        let x = Poly(vec![l.basis()[1], 1]);
        let ab = PolyRing::new(f.clone()).mul(&a, &b);
        assert_eq!(e.apply(&alg, &ab, &x), e.apply(&alg, &a, &e.apply(&alg, &b, &x)));
    }
}
