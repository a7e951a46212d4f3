//! Finite fields `F_{p^k}` backed by discrete log tables.
//!
//! Elements are encoded as integers `Σ c_i p^i` where `Σ c_i x^i` is the
//! reduced representative modulo the defining polynomial. In particular the
//! prime subfield is encoded as `0..p` in every field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = u32;

/// Largest field cardinality for which tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const NONE: u32 = u32::MAX;

#[derive(Clone)]
pub struct FiniteField {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one_log: u32,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.size)?;
        if self.inner.degree > 1 {
            write!(f, "[{}]", fp::format(&self.inner.modulus, "x"))?;
        }
        Ok(())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_size(p: u32, degree: u32) -> Result<u32> {
    if !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    if degree == 0 {
        return Err(Error::InvalidField("degree must be positive".into()));
    }
    let mut size: u64 = 1;
    for _ in 0..degree {
        size *= p as u64;
        if size > MAX_FIELD_SIZE {
            return Err(Error::ResourceGuard(format!(
                "field of order {p}^{degree} exceeds table limit {MAX_FIELD_SIZE}"
            )));
        }
    }
    Ok(size as u32)
}

/// `q = p^k` as `(p, k)`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut n = q;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (n == 1).then_some((p, k))
}

impl FiniteField {
    /// `F_q` with the default modulus.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, k)
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    /// `F_{p^k}` with the default modulus: the least primitive polynomial
    /// by encoding (for `k = 1`, `x - g` with `g` the least primitive root).
    pub fn new(p: u32, degree: u32) -> Result<Self> {
        let size = checked_size(p, degree)?;
        let order = (size - 1) as u64;
        let factors = prime_factors(order);
        let modulus = if degree == 1 {
            let g = (1..p.max(2))
                .find(|&g| {
                    let g = g % p;
                    g != 0
                        && factors
                            .iter()
                            .all(|&r| fp::pow_int(g, order / r, p) != 1)
                })
                .unwrap_or(1)
                % p;
            vec![(p - g) % p, 1]
        } else {
            let x = vec![0, 1];
            let mut found = None;
            for c in 0..size {
                let mut m = fp::digits(c, p, degree as usize);
                if m[0] == 0 {
                    continue;
                }
                m.push(1);
                if fp::has_order(&x, order, &factors, &m, p) {
                    found = Some(m);
                    break;
                }
            }
            found.ok_or_else(|| Error::InvalidField("no primitive polynomial".into()))?
        };
        Ok(Self::build(p, degree, size, modulus))
    }

    /// `F_p[x]/(modulus)` for a user supplied irreducible monic polynomial,
    /// coefficients low-first.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        let mut m: Vec<u32> = modulus.iter().map(|&c| c % p.max(1)).collect();
        fp::trim(&mut m);
        if m.len() < 2 {
            return Err(Error::InvalidField("modulus must have positive degree".into()));
        }
        let degree = (m.len() - 1) as u32;
        let size = checked_size(p, degree)?;
        let lc_inv = fp::inv_int(*m.last().unwrap(), p);
        for c in m.iter_mut() {
            *c = (*c as u64 * lc_inv as u64 % p as u64) as u32;
        }
        if !fp::is_irreducible(&m, p) {
            return Err(Error::Reducible(fp::format(&m, "x")));
        }
        Ok(Self::build(p, degree, size, m))
    }

    fn build(p: u32, degree: u32, size: u32, modulus: Vec<u32>) -> Self {
        let order = size - 1;
        let factors = prime_factors(order as u64);
        let d = degree as usize;
        let gen = (1..size)
            .map(|c| fp::digits(c, p, d))
            .find(|g| fp::has_order(g, order as u64, &factors, &modulus, p))
            .expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![NONE; size as usize];
        let mut cur = vec![1u32];
        for i in 0..order {
            let e = fp::encode(&cur, p);
            exp[i as usize] = e;
            exp[(i + order) as usize] = e;
            log[e as usize] = i;
            cur = fp::mulmod(&cur, &gen, &modulus, p);
        }
        let mut zech = Vec::new();
        if p != 2 {
            zech = vec![NONE; order as usize];
            for n in 0..order {
                let a = exp[n as usize];
                let low = a % p;
                let bumped = a - low + (low + 1) % p;
                zech[n as usize] = if bumped == 0 { NONE } else { log[bumped as usize] };
            }
        }
        let neg_one_log = if p == 2 { 0 } else { order / 2 };
        FiniteField {
            inner: Arc::new(Inner { p, degree, size, modulus, exp, log, zech, neg_one_log }),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.degree
    }

    pub fn size(&self) -> u32 {
        self.inner.size
    }

    /// Order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.inner.size - 1
    }

    /// Defining polynomial over `F_p`, low-first.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    /// The fixed primitive element whose powers index the log tables.
    pub fn primitive(&self) -> Elem {
        self.inner.exp[1 % self.order().max(1) as usize]
    }

    /// The residue class of `x` in `F_p[x]/(modulus)`.
    pub fn x(&self) -> Elem {
        if self.inner.degree == 1 {
            (self.inner.p - self.inner.modulus[0]) % self.inner.p
        } else {
            self.inner.p
        }
    }

    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.inner.p as i64) as Elem
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        let mut poly: Vec<u32> = digits.iter().map(|&c| c % self.inner.p).collect();
        if poly.len() > self.inner.degree as usize {
            poly = fp::rem(&poly, &self.inner.modulus, self.inner.p);
        }
        fp::encode(&poly, self.inner.p)
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        fp::digits(a, self.inner.p, self.inner.degree as usize)
    }

    pub fn exp_of(&self, n: u64) -> Elem {
        self.inner.exp[(n % self.order() as u64) as usize]
    }

    /// Discrete logarithm to base [`primitive`](Self::primitive); `None` at zero.
    pub fn log_of(&self, a: Elem) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.inner.log[a as usize])
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 {
            return a ^ b;
        }
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let order = inner.size - 1;
        let la = inner.log[a as usize];
        let lb = inner.log[b as usize];
        let n = if lb >= la { lb - la } else { lb + order - la };
        let z = inner.zech[n as usize];
        if z == NONE {
            0
        } else {
            inner.exp[(la + z) as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 || a == 0 {
            return a;
        }
        let l = inner.log[a as usize] + inner.neg_one_log;
        inner.exp[l as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero in {:?}", self);
        let inner = &*self.inner;
        let order = inner.size - 1;
        let l = inner.log[a as usize];
        inner.exp[((order - l) % order) as usize]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = self.order() as u64;
        let l = self.inner.log[a as usize] as u64;
        self.inner.exp[((l * (e % order)) % order) as usize]
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        if a == 0 {
            return 0;
        }
        let order = self.order() as u64;
        let pk = fp::pow_int_u64(self.inner.p as u64, k as u64, order);
        let l = self.inner.log[a as usize] as u64;
        self.inner.exp[((l * pk) % order) as usize]
    }

    /// Whether `a` lies in the subfield of order `p^s`.
    pub fn in_subfield(&self, a: Elem, s: u32) -> bool {
        if a == 0 {
            return true;
        }
        if self.inner.degree % s != 0 {
            return false;
        }
        let sub_order = (self.inner.p as u64).pow(s) - 1;
        let step = self.order() as u64 / sub_order;
        self.inner.log[a as usize] as u64 % step == 0
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    /// Human readable element: an integer for prime fields, a polynomial in
    /// `g` (the class of `x`) otherwise.
    pub fn format_elem(&self, a: Elem) -> String {
        if self.inner.degree == 1 {
            a.to_string()
        } else {
            fp::format(&self.digits(a), "g")
        }
    }
}

/// Dense polynomial helpers over the prime field, coefficients low-first.
pub(crate) mod fp {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn digits(mut c: u32, p: u32, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for slot in out.iter_mut() {
            *slot = c % p;
            c /= p;
        }
        out
    }

    pub fn encode(a: &[u32], p: u32) -> u32 {
        a.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn pow_int(base: u32, e: u64, p: u32) -> u32 {
        pow_int_u64(base as u64, e, p as u64) as u32
    }

    pub fn pow_int_u64(base: u64, mut e: u64, m: u64) -> u64 {
        if m == 1 {
            return 0;
        }
        let mut b = base % m;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc as u128 * b as u128 % m as u128) as u64;
            }
            b = (b as u128 * b as u128 % m as u128) as u64;
            e >>= 1;
        }
        acc
    }

    pub fn inv_int(a: u32, p: u32) -> u32 {
        pow_int(a, p as u64 - 2, p)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let n = a.len().max(b.len());
        let mut out: Vec<u32> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Remainder modulo a monic or non-monic nonzero polynomial.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lc_inv = inv_int(m[dm], p) as u64;
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] as u64 * lc_inv % p as u64;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    r[idx] = ((r[idx] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
                }
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut acc = rem(&[1], m, p);
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Whether `g` has multiplicative order exactly `order` modulo `m`.
    pub fn has_order(g: &[u32], order: u64, factors: &[u64], m: &[u32], p: u32) -> bool {
        let one = rem(&[1], m, p);
        let g = rem(g, m, p);
        if g.is_empty() || powmod(&g, order, m, p) != one {
            return false;
        }
        factors.iter().all(|&r| powmod(&g, order / r, m, p) != one)
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let n = m.len() - 1;
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        let pow_x = |k: usize| {
            let mut h = x.clone();
            for _ in 0..k {
                h = powmod(&h, p as u64, m, p);
            }
            h
        };
        if sub(&pow_x(n), &x, p) != Vec::<u32>::new() {
            return false;
        }
        for r in super::prime_factors(n as u64) {
            let h = sub(&pow_x(n / r as usize), &x, p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }

    pub fn format(a: &[u32], var: &str) -> String {
        let mut terms = Vec::new();
        for (i, &c) in a.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
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

    fn naive_mul(f: &FiniteField, a: Elem, b: Elem) -> Elem {
        let p = f.characteristic();
        let prod = fp::mulmod(&f.digits(a), &f.digits(b), f.modulus(), p);
        fp::encode(&prod, p)
    }

    #[test]
    fn prime_field_encodes_residues() {
        let f = FiniteField::prime(7).unwrap();
        for a in 0..7 {
            for b in 0..7 {
                assert_eq!(f.add(a, b), (a + b) % 7);
                assert_eq!(f.mul(a, b), (a * b) % 7);
            }
        }
        assert_eq!(f.neg(3), 4);
        assert_eq!(f.primitive(), 3);
        assert_eq!(f.x(), 3);
    }

    #[test]
    fn default_modulus_is_least_primitive() {
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f8 = FiniteField::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        let f9 = FiniteField::new(3, 2).unwrap();
        // x^2 + 1 is irreducible but not primitive; x^2 + x + 2 is.
        assert_eq!(f9.modulus(), &[2, 1, 1]);
        assert_eq!(f9.primitive(), f9.x());
    }

    #[test]
    fn tables_agree_with_schoolbook_arithmetic() {
        for (p, k) in [(2, 4), (3, 3), (5, 2), (2, 1), (3, 1)] {
            let f = FiniteField::new(p, k).unwrap();
            let n = f.size();
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(f.mul(a, b), naive_mul(&f, a, b));
                    let sum: Vec<u32> = f
                        .digits(a)
                        .iter()
                        .zip(f.digits(b))
                        .map(|(x, y)| (x + y) % p)
                        .collect();
                    assert_eq!(f.add(a, b), fp::encode(&sum, p));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
    }

    #[test]
    fn frobenius_has_exact_order() {
        for (p, k) in [(2, 6), (3, 4), (5, 3), (2, 12), (7, 2)] {
            let f = FiniteField::new(p, k).unwrap();
            for a in 0..f.size() {
                assert_eq!(f.frobenius(a, k), a);
                assert_eq!(f.pow(a, f.size() as u64), a);
            }
            let g = f.primitive();
            for j in 1..k {
                assert_ne!(f.frobenius(g, j), g);
            }
        }
    }

    #[test]
    fn user_modulus_checked_for_irreducibility() {
        assert!(FiniteField::with_modulus(2, &[1, 0, 1]).is_err());
        let f = FiniteField::with_modulus(3, &[1, 0, 1]).unwrap();
        assert_eq!(f.size(), 9);
        let i = f.x();
        assert_eq!(f.mul(i, i), f.from_int(-1));
    }

    #[test]
    fn subfield_membership() {
        let f = FiniteField::new(2, 4).unwrap();
        let in_f4: Vec<_> = (0..16).filter(|&a| f.in_subfield(a, 2)).collect();
        assert_eq!(in_f4.len(), 4);
        for &a in &in_f4 {
            assert_eq!(f.frobenius(a, 2), a);
        }
        assert!(!f.in_subfield(f.primitive(), 3));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(2, 0).is_err());
        assert!(matches!(FiniteField::new(2, 30), Err(Error::ResourceGuard(_))));
    }
}
