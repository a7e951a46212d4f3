//! Dense univariate polynomials over a [`FiniteField`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, FiniteField};

/// Coefficients low-first with no trailing zeros; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(pub Vec<Elem>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn from_coeffs(mut c: Vec<Elem>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn constant(c: Elem) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Elem, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for zero.
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`.
    pub fn degree_i64(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn lc(&self) -> Elem {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    /// Order of vanishing at zero, `None` for zero.
    pub fn low_order(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FiniteField,
}

impl PolyRing {
    pub fn new(field: FiniteField) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn one(&self) -> Poly {
        Poly::constant(1)
    }

    pub fn x(&self) -> Poly {
        Poly::monomial(1, 1)
    }

    pub fn is_one(&self, a: &Poly) -> bool {
        a.0 == [1]
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let f = &self.field;
        let (long, short) = if a.0.len() >= b.0.len() { (a, b) } else { (b, a) };
        let mut out = long.0.clone();
        for (o, &s) in out.iter_mut().zip(&short.0) {
            *o = f.add(*o, s);
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly(a.0.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: Elem, a: &Poly) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly(a.0.iter().map(|&x| self.field.mul(c, x)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&a.0);
        Poly(v)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let f = &self.field;
        let mut out = vec![0; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                if y != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(x, y));
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// Euclidean division. Panics if `b` is zero.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.deg().expect("division by the zero polynomial");
        let f = &self.field;
        let mut r = a.0.clone();
        if r.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let inv = f.inv(b.lc());
        let mut q = vec![0; r.len() - db];
        for top in (db..r.len()).rev() {
            let c = f.mul(r[top], inv);
            if c == 0 {
                continue;
            }
            q[top - db] = c;
            for (i, &bi) in b.0.iter().enumerate() {
                let idx = top - db + i;
                r[idx] = f.sub(r[idx], f.mul(c, bi));
            }
        }
        r.truncate(db);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        if a.0.len() < b.0.len() {
            return a.clone();
        }
        self.divrem(a, b).1
    }

    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Option<Poly> {
        let (q, r) = self.divrem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> bool {
        if d.is_zero() {
            return a.is_zero();
        }
        self.rem(a, d).is_zero()
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        self.scale(self.field.inv(a.lc()), a)
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `g = s a + t b` monic.
    pub fn ext_gcd(&self, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.divrem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.field.inv(r0.lc());
        (self.scale(inv, &r0), self.scale(inv, &s0), self.scale(inv, &t0))
    }

    pub fn lcm(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(a, b);
        self.monic(&self.mul(&self.divrem(a, &g).0, b))
    }

    pub fn mulmod(&self, a: &Poly, b: &Poly, m: &Poly) -> Poly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut acc = self.rem(&self.one(), m);
        let mut b = self.rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mulmod(&acc, &b, m);
            }
            e >>= 1;
            if e > 0 {
                b = self.mulmod(&b, &b, m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &Poly, x: Elem) -> Elem {
        let f = &self.field;
        a.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Substitute `b` for the variable in `a`.
    pub fn compose(&self, a: &Poly, b: &Poly) -> Poly {
        a.0.iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| self.add(&self.mul(&acc, b), &Poly::constant(c)))
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        let f = &self.field;
        let c = a
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::from_coeffs(c)
    }

    /// Multiplicity of the irreducible `p` in nonzero `a`.
    pub fn multiplicity(&self, p: &Poly, a: &Poly) -> usize {
        let mut a = a.clone();
        let mut k = 0;
        while let Some(q) = self.div_exact(&a, p) {
            a = q;
            k += 1;
        }
        k
    }

    fn q(&self) -> u128 {
        self.field.size() as u128
    }

    /// `x^(q^k) mod m`.
    fn x_frob(&self, k: usize, m: &Poly) -> Poly {
        let mut h = self.rem(&self.x(), m);
        for _ in 0..k {
            h = self.powmod(&h, self.q(), m);
        }
        h
    }

    /// Rabin's test over `F_q`.
    pub fn is_irreducible(&self, a: &Poly) -> bool {
        let n = match a.deg() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let m = self.monic(a);
        if self.x_frob(n, &m) != self.rem(&self.x(), &m) {
            return false;
        }
        super::field::prime_factors(n as u64).into_iter().all(|r| {
            let h = self.sub(&self.x_frob(n / r as usize, &m), &self.x());
            self.is_one(&self.gcd(&m, &h))
        })
    }

    fn pth_root(&self, a: &Poly) -> Poly {
        let p = self.field.characteristic() as usize;
        let k = self.field.degree() - 1;
        let c = a
            .0
            .iter()
            .step_by(p)
            .map(|&c| self.field.frobenius(c, k))
            .collect();
        Poly::from_coeffs(c)
    }

    fn squarefree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut c = self.gcd(f, &self.derivative(f));
        let mut w = self.divrem(f, &c).0;
        let mut i = 1;
        while w.deg().unwrap_or(0) > 0 {
            let y = self.gcd(&w, &c);
            let fac = self.divrem(&w, &y).0;
            if fac.deg().unwrap_or(0) > 0 {
                out.push((self.monic(&fac), i));
            }
            w = y;
            c = self.divrem(&c, &w).0;
            i += 1;
        }
        if c.deg().unwrap_or(0) > 0 {
            let p = self.field.characteristic() as usize;
            let root = self.pth_root(&self.monic(&c));
            for (g, m) in self.squarefree(&root) {
                out.push((g, m * p));
            }
        }
        out
    }

    fn equal_degree(&self, g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
        let n = g.deg().unwrap();
        if n == d {
            out.push(self.monic(g));
            return;
        }
        let q = self.q();
        let size = self.field.size();
        loop {
            let a = Poly::from_coeffs((0..n).map(|_| rng.gen_range(0..size)).collect());
            if a.deg().unwrap_or(0) == 0 {
                continue;
            }
            let b = if self.field.characteristic() == 2 {
                let k = self.field.degree() as usize * d;
                let mut t = Poly::zero();
                let mut cur = a.clone();
                for _ in 0..k {
                    t = self.add(&t, &cur);
                    cur = self.mulmod(&cur, &cur, g);
                }
                t
            } else {
                let e = (q.pow(d as u32) - 1) / 2;
                self.sub(&self.powmod(&a, e, g), &self.one())
            };
            let h = self.gcd(g, &b);
            let dh = h.deg().unwrap_or(0);
            if dh > 0 && dh < n {
                let rest = self.divrem(g, &h).0;
                self.equal_degree(&h, d, rng, out);
                self.equal_degree(&rest, d, rng, out);
                return;
            }
        }
    }

    /// Monic irreducible factors with multiplicities, sorted.
    pub fn factor(&self, a: &Poly) -> Vec<(Poly, usize)> {
        assert!(!a.is_zero(), "factoring the zero polynomial");
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut all: Vec<(Poly, usize)> = Vec::new();
        for (sf, mult) in self.squarefree(&self.monic(a)) {
            let mut f = sf;
            let mut h = self.rem(&self.x(), &f);
            let mut d = 1;
            while f.deg().unwrap_or(0) >= 2 * d {
                h = self.powmod(&h, self.q(), &f);
                let g = self.gcd(&f, &self.sub(&h, &self.x()));
                if g.deg().unwrap_or(0) > 0 {
                    let mut parts = Vec::new();
                    self.equal_degree(&g, d, &mut rng, &mut parts);
                    all.extend(parts.into_iter().map(|p| (p, mult)));
                    f = self.divrem(&f, &g).0;
                    h = self.rem(&h, &f);
                }
                d += 1;
            }
            if f.deg().unwrap_or(0) > 0 {
                all.push((self.monic(&f), mult));
            }
        }
        all.sort();
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (p, m) in all {
            match merged.last_mut() {
                Some((last, lm)) if *last == p => *lm += m,
                _ => merged.push((p, m)),
            }
        }
        merged
    }

    /// All monic polynomials of degree `d` in encoding order.
    pub fn monic_of_degree(&self, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = self.field.size() as u64;
        let count = q.pow(d as u32);
        (0..count).map(move |mut c| {
            let mut v = Vec::with_capacity(d + 1);
            for _ in 0..d {
                v.push((c % q) as Elem);
                c /= q;
            }
            v.push(1);
            Poly(v)
        })
    }

    pub fn monic_irreducibles(&self, d: usize) -> Vec<Poly> {
        self.monic_of_degree(d).filter(|p| self.is_irreducible(p)).collect()
    }

    pub fn random(&self, max_deg: usize, rng: &mut impl Rng) -> Poly {
        let size = self.field.size();
        Poly::from_coeffs((0..=max_deg).map(|_| rng.gen_range(0..size)).collect())
    }

    pub fn format(&self, a: &Poly, var: &str) -> String {
        let f = &self.field;
        let mut terms = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coeff = f.format_elem(c);
            let coeff = if f.degree() > 1 && coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            terms.push(match (i, c) {
                (0, _) => coeff,
                (_, 1) => mono,
                _ => format!("{coeff}*{mono}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u32, k: u32) -> PolyRing {
        PolyRing::new(FiniteField::new(p, k).unwrap())
    }

    #[test]
    fn divrem_small() {
        let r = ring(2, 1);
        // x^3 + 1 = (x + 1)(x^2 + x + 1)
        let a = Poly(vec![1, 0, 0, 1]);
        let b = Poly(vec![1, 1]);
        let (q, rem) = r.divrem(&a, &b);
        assert_eq!(q, Poly(vec![1, 1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn irreducibles_counted_by_necklace_formula() {
        // number of monic irreducibles of degree d over F_q
        let cases = [(2, 1, 1, 2), (2, 1, 3, 2), (2, 1, 4, 3), (3, 1, 2, 3), (2, 2, 2, 6), (5, 1, 2, 10)];
        for (p, k, d, n) in cases {
            assert_eq!(ring(p, k).monic_irreducibles(d).len(), n, "p={p} k={k} d={d}");
        }
    }

    #[test]
    fn format_uses_variable() {
        let r = ring(3, 1);
        assert_eq!(r.format(&Poly(vec![2, 0, 1]), "t"), "t^2+2");
        assert_eq!(r.format(&Poly::zero(), "t"), "0");
        let r4 = ring(2, 2);
        assert_eq!(r4.format(&Poly(vec![3, 2]), "t"), "g*t+(g+1)");
    }

    fn expand(r: &PolyRing, fac: &[(Poly, usize)]) -> Poly {
        fac.iter().fold(r.one(), |acc, (p, m)| r.mul(&acc, &r.pow(p, *m as u64)))
    }

    #[test]
    fn factor_known_examples() {
        let r = ring(2, 1);
        // x^4 + x = x (x+1) (x^2+x+1)
        let f = r.factor(&Poly(vec![0, 1, 0, 0, 1]));
        assert_eq!(
            f,
            vec![(Poly(vec![0, 1]), 1), (Poly(vec![1, 1]), 1), (Poly(vec![1, 1, 1]), 1)]
        );
        // (x+1)^4 x^2 is detected through the p-th root branch
        let a = r.mul(&r.pow(&Poly(vec![1, 1]), 4), &r.pow(&r.x(), 2));
        assert_eq!(r.factor(&a), vec![(Poly(vec![0, 1]), 2), (Poly(vec![1, 1]), 4)]);
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(seed in any::<u64>(), which in 0usize..4) {
            let (p, k) = [(2, 1), (3, 1), (2, 2), (5, 1)][which];
            let r = ring(p, k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = r.random(7, &mut rng);
            prop_assume!(!a.is_zero());
            let fac = r.factor(&a);
            prop_assert_eq!(expand(&r, &fac), r.monic(&a));
            for (q, _) in &fac {
                prop_assert!(r.is_irreducible(q));
            }
        }

        #[test]
        fn ext_gcd_is_bezout(seed in any::<u64>()) {
            let r = ring(3, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = r.random(5, &mut rng);
            let b = r.random(4, &mut rng);
            let (g, s, t) = r.ext_gcd(&a, &b);
            prop_assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g.clone());
            prop_assert!(r.divides(&g, &a) && r.divides(&g, &b));
        }

        #[test]
        fn divrem_identity(seed in any::<u64>()) {
            let r = ring(5, 1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = r.random(8, &mut rng);
            let b = r.random(3, &mut rng);
            prop_assume!(!b.is_zero());
            let (q, rem) = r.divrem(&a, &b);
            prop_assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
            prop_assert!(rem.0.len() < b.0.len());
        }
    }
}
