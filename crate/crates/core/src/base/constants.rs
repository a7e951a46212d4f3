//! Constant fields `L ⊇ F_q` realised inside a common ambient field.

use crate::error::{Error, Result};

use super::field::{Elem, FiniteField};
use super::poly::Poly;

/// A finite extension `L/F_q` of degree `d`, viewed as the subfield of order
/// `q^d` of an ambient field containing a fixed copy of `F_q`. Layers of a
/// tower share the ambient field, so their `F_q`-structures are compatible.
#[derive(Clone, Debug)]
pub struct ConstantField {
    base: FiniteField,
    ambient: FiniteField,
    degree: u32,
    embed: Vec<Elem>,
    basis: Vec<Elem>,
    solver: FpSolver,
}

/// Row-reduced `F_p`-basis `{ρ^j β^i}` of `L` with the combinations that
/// produced each row, used to read off `F_q`-coordinates.
#[derive(Clone, Debug)]
struct FpSolver {
    p: u32,
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
}

impl FpSolver {
    fn reduce(&self, mut v: Vec<u32>) -> (Vec<u32>, Vec<u32>) {
        let p = self.p;
        let width = self.rows.first().map_or(0, |r| r.2.len());
        let mut combo = vec![0u32; width];
        for (piv, row, c) in &self.rows {
            let k = v[*piv];
            if k == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                *x = (*x + p * p - k * y % p) % p;
            }
            for (x, &y) in combo.iter_mut().zip(c) {
                *x = (*x + k * y) % p;
            }
        }
        (v, combo)
    }

    fn build(p: u32, vectors: Vec<Vec<u32>>) -> Self {
        let n = vectors.len();
        let mut solver = FpSolver { p, rows: Vec::new() };
        for (idx, v) in vectors.into_iter().enumerate() {
            let mut unit = vec![0u32; n];
            unit[idx] = 1;
            let (mut r, combo) = if solver.rows.is_empty() {
                (v, vec![0u32; n])
            } else {
                solver.reduce(v)
            };
            // r = v - Σ combo·rows, so its combination is unit - combo
            let mut c: Vec<u32> = unit.iter().zip(&combo).map(|(&a, &b)| (a + p - b) % p).collect();
            let piv = r.iter().position(|&x| x != 0).expect("basis vectors are independent");
            let inv = super::field::fp::inv_int(r[piv], p);
            for x in r.iter_mut().chain(c.iter_mut()) {
                *x = *x * inv % p;
            }
            solver.rows.push((piv, r, c));
        }
        solver
    }
}

impl ConstantField {
    /// `L = F_{q^d}` inside its own ambient field.
    pub fn new(base: &FiniteField, d: u32) -> Result<Self> {
        let ambient = FiniteField::new(base.characteristic(), base.degree() * d)?;
        Self::layer(base, &ambient, d)
    }

    /// The subfield of order `q^d` of `ambient`.
    pub fn layer(base: &FiniteField, ambient: &FiniteField, d: u32) -> Result<Self> {
        let p = base.characteristic();
        let k = base.degree();
        if ambient.characteristic() != p || ambient.degree() % (k * d) != 0 || d == 0 {
            return Err(Error::MismatchedField(format!(
                "cannot place an extension of degree {d} of {base:?} inside {ambient:?}"
            )));
        }
        let q = base.size() as u64;
        let order = ambient.order() as u64;
        let m = base.modulus();
        let eval = |x: Elem| {
            m.iter().rev().fold(0, |acc, &c| ambient.add(ambient.mul(acc, x), c))
        };
        let rho = if k == 1 {
            base.x()
        } else {
            let step = order / (q - 1);
            (0..q - 1)
                .map(|n| ambient.exp_of(n * step))
                .find(|&x| eval(x) == 0)
                .expect("ambient field contains F_q")
        };
        let rho_pows: Vec<Elem> = (0..k).map(|j| ambient.pow(rho, j as u64)).collect();
        let embed = (0..base.size())
            .map(|c| {
                base.digits(c)
                    .iter()
                    .zip(&rho_pows)
                    .fold(0, |acc, (&dj, &r)| ambient.add(acc, ambient.mul(dj, r)))
            })
            .collect::<Vec<_>>();
        let lsize = q.pow(d);
        let beta = ambient.exp_of(order / (lsize - 1));
        let basis: Vec<Elem> = (0..d).map(|i| ambient.pow(beta, i as u64)).collect();
        let mut vectors = Vec::new();
        for &b in &basis {
            for &r in &rho_pows {
                vectors.push(ambient.digits(ambient.mul(r, b)));
            }
        }
        let solver = FpSolver::build(p, vectors);
        Ok(ConstantField { base: base.clone(), ambient: ambient.clone(), degree: d, embed, basis, solver })
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }

    pub fn ambient(&self) -> &FiniteField {
        &self.ambient
    }

    /// `[L : F_q]`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        (self.base.size() as u64).pow(self.degree)
    }

    pub fn q(&self) -> u64 {
        self.base.size() as u64
    }

    pub fn embed(&self, c: Elem) -> Elem {
        self.embed[c as usize]
    }

    pub fn embed_poly(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|&c| self.embed(c)).collect())
    }

    /// The `F_q`-basis `β^0, …, β^(d-1)` of `L`.
    pub fn basis(&self) -> &[Elem] {
        &self.basis
    }

    pub fn contains(&self, a: Elem) -> bool {
        self.ambient.in_subfield(a, self.base.degree() * self.degree)
    }

    /// `F_q`-coordinates with respect to [`basis`](Self::basis), or `None`
    /// if `a ∉ L`.
    pub fn try_coords(&self, a: Elem) -> Option<Vec<Elem>> {
        let k = self.base.degree() as usize;
        let p = self.base.characteristic();
        let (res, combo) = self.solver.reduce(self.ambient.digits(a));
        if res.iter().any(|&x| x != 0) {
            return None;
        }
        Some(
            (0..self.degree as usize)
                .map(|i| combo[i * k..(i + 1) * k].iter().rev().fold(0, |acc, &c| acc * p + c))
                .collect(),
        )
    }

    pub fn coords(&self, a: Elem) -> Vec<Elem> {
        self.try_coords(a).unwrap_or_else(|| panic!("element {a} is not in the constant field"))
    }

    pub fn from_coords(&self, v: &[Elem]) -> Elem {
        let f = &self.ambient;
        v.iter()
            .zip(&self.basis)
            .fold(0, |acc, (&c, &b)| f.add(acc, f.mul(self.embed(c), b)))
    }

    /// `x ↦ x^q`.
    pub fn frob_q(&self, a: Elem) -> Elem {
        self.ambient.pow(a, self.q())
    }

    /// Trace from `L` to its subfield of degree `e` over `F_q`.
    pub fn trace_to(&self, a: Elem, e: u32) -> Elem {
        assert!(self.degree % e == 0, "degree {e} does not divide {}", self.degree);
        let qe = self.q().pow(e);
        let mut acc = 0;
        let mut cur = a;
        for _ in 0..self.degree / e {
            acc = self.ambient.add(acc, cur);
            cur = self.ambient.pow(cur, qe);
        }
        acc
    }

    /// All elements of `L` in a fixed order.
    pub fn elements(&self) -> Vec<Elem> {
        let mut out = vec![0];
        let step = self.ambient.order() as u64 / (self.size() - 1);
        out.extend((0..self.size() - 1).map(|n| self.ambient.exp_of(n * step)));
        out
    }
}
