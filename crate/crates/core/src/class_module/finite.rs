//! Finite `F_q[t]`-modules given by an endomorphism of an `F_q`-space.

use serde::Serialize;

use crate::base::linalg::{self, Matrix, Subspace};
use crate::base::{smith_normal_form, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct FiniteAModule {
    ring: PolyRing,
    t_matrix: Matrix,
    divisors: Vec<Poly>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PrimeLength {
    pub prime: String,
    pub degree: usize,
    pub length: usize,
}

impl FiniteAModule {
    pub fn zero(field: &FiniteField) -> Self {
        FiniteAModule { ring: PolyRing::new(field.clone()), t_matrix: Vec::new(), divisors: Vec::new() }
    }

    /// The module `F_q^n` with `t` acting by `matrix` (columns are images).
    pub fn from_endomorphism(field: &FiniteField, matrix: Matrix) -> Self {
        let ring = PolyRing::new(field.clone());
        let n = matrix.len();
        let f = ring.field().clone();
        let presentation: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = f.neg(matrix[i][j]);
                        if i == j {
                            Poly::from_coeffs(vec![c, 1])
                        } else {
                            Poly::constant(c)
                        }
                    })
                    .collect()
            })
            .collect();
        let divisors = smith_normal_form(&ring, &presentation).nonunit();
        FiniteAModule { ring, t_matrix: matrix, divisors }
    }

    /// `F_q^n / sub` with the endomorphism induced by `matrix`; `sub` must be
    /// stable under it.
    pub fn from_quotient(field: &FiniteField, matrix: &Matrix, sub: &Subspace) -> Self {
        let free = sub.free_columns();
        let n = sub.ambient_dim();
        let cols: Vec<Vec<_>> = free
            .iter()
            .map(|&j| {
                let image: Vec<_> = (0..n).map(|i| matrix[i][j]).collect();
                sub.quotient_coords(field, &image)
            })
            .collect();
        Self::from_endomorphism(field, linalg::from_columns(&cols, free.len()))
    }

    pub fn field(&self) -> &FiniteField {
        self.ring.field()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.t_matrix.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn t_matrix(&self) -> &Matrix {
        &self.t_matrix
    }

    /// Nonunit elementary divisors `d_1 | d_2 | …`, monic.
    pub fn divisors(&self) -> &[Poly] {
        &self.divisors
    }

    pub fn divisor_strings(&self) -> Vec<String> {
        self.divisors.iter().map(|d| self.ring.format(d, "t")).collect()
    }

    /// Product of the elementary divisors (the characteristic polynomial).
    pub fn char_poly(&self) -> Poly {
        self.divisors.iter().fold(self.ring.one(), |acc, d| self.ring.mul(&acc, d))
    }

    /// `length_{A_𝔭}` of the `𝔭`-part.
    pub fn p_part(&self, prime: &Poly) -> Result<usize> {
        if !self.ring.is_irreducible(prime) {
            return Err(Error::Reducible(self.ring.format(prime, "t")));
        }
        let p = self.ring.monic(prime);
        Ok(self.divisors.iter().map(|d| self.ring.multiplicity(&p, d)).sum())
    }

    /// Primes dividing the characteristic polynomial with their lengths.
    pub fn prime_table(&self) -> Vec<(Poly, usize)> {
        let cp = self.char_poly();
        if self.ring.is_one(&cp) {
            return Vec::new();
        }
        self.ring
            .factor(&cp)
            .into_iter()
            .map(|(p, _)| {
                let len = self.divisors.iter().map(|d| self.ring.multiplicity(&p, d)).sum();
                (p, len)
            })
            .collect()
    }

    pub fn prime_lengths(&self) -> Vec<PrimeLength> {
        self.prime_table()
            .into_iter()
            .map(|(p, length)| PrimeLength {
                prime: self.ring.format(&p, "t"),
                degree: p.deg().unwrap(),
                length,
            })
            .collect()
    }

    /// Isomorphism test via elementary divisors.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.divisors == other.divisors
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2() -> FiniteField {
        FiniteField::prime(2).unwrap()
    }

    #[test]
    fn one_dimensional_modules() {
        let m = FiniteAModule::from_endomorphism(&f2(), vec![vec![0]]);
        assert_eq!(m.divisor_strings(), vec!["t"]);
        assert_eq!(m.p_part(&Poly(vec![0, 1])).unwrap(), 1);
        assert_eq!(m.p_part(&Poly(vec![1, 1])).unwrap(), 0);
        let id = FiniteAModule::from_endomorphism(&f2(), vec![vec![1]]);
        assert_eq!(id.divisor_strings(), vec!["t+1"]);
    }

    #[test]
    fn companion_matrix() {
        // companion of t^2 + t + 1
        let m = FiniteAModule::from_endomorphism(&f2(), vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(m.divisor_strings(), vec!["t^2+t+1"]);
        assert_eq!(m.p_part(&Poly(vec![1, 1, 1])).unwrap(), 1);
        assert!(m.p_part(&Poly(vec![1, 0, 1])).is_err());
    }

    #[test]
    fn nilpotent_block_with_extra_factor() {
        // A/(t^2 (t+1)) via a 3x3 matrix: Jordan block at 0 plus eigenvalue 1
        let m = FiniteAModule::from_endomorphism(&f2(), vec![vec![0, 1, 0], vec![0, 0, 0], vec![0, 0, 1]]);
        assert_eq!(m.divisors().len(), 1);
        assert_eq!(m.p_part(&Poly(vec![0, 1])).unwrap(), 2);
        assert_eq!(m.p_part(&Poly(vec![1, 1])).unwrap(), 1);
    }

    proptest! {
        /// dim = Σ deg(𝔭) · length_𝔭, and the divisor product is the
        /// characteristic polynomial computed by an independent cofactor
        /// expansion of det(tI - T).
        #[test]
        fn mass_formula(seed in any::<u64>(), n in 1usize..6, which in 0usize..3) {
            let f = [FiniteField::prime(2).unwrap(), FiniteField::prime(3).unwrap(), FiniteField::new(2, 2).unwrap()][which].clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mat: Matrix = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..f.size())).collect()).collect();
            let m = FiniteAModule::from_endomorphism(&f, mat.clone());
            let mass: usize = m.prime_table().iter().map(|(p, l)| p.deg().unwrap() * l).sum();
            prop_assert_eq!(mass, n);
            let ring = PolyRing::new(f.clone());
            prop_assert_eq!(m.char_poly(), charpoly_oracle(&ring, &mat));
        }
    }

    fn charpoly_oracle(ring: &PolyRing, mat: &Matrix) -> Poly {
        fn det(ring: &PolyRing, m: &[Vec<Poly>]) -> Poly {
            if m.len() == 1 {
                return m[0][0].clone();
            }
            let mut acc = Poly::zero();
            for j in 0..m.len() {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, e)| e.clone()).collect())
                    .collect();
                let term = ring.mul(&m[0][j], &det(ring, &minor));
                acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
        let f = ring.field();
        let n = mat.len();
        let m: Vec<Vec<Poly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = f.neg(mat[i][j]);
                        if i == j { Poly::from_coeffs(vec![c, 1]) } else { Poly::constant(c) }
                    })
                    .collect()
            })
            .collect();
        det(ring, &m)
    }
}
