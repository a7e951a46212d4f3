//! Dense linear algebra over a [`FiniteField`].

use super::field::{Elem, FiniteField};

/// Row-major dense matrix.
pub type Matrix = Vec<Vec<Elem>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

/// `A v` for a column vector `v`.
pub fn mat_vec(field: &FiniteField, a: &Matrix, v: &[Elem]) -> Vec<Elem> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(0, |acc, (&x, &y)| field.add(acc, field.mul(x, y)))
        })
        .collect()
}

pub fn mat_mul(field: &FiniteField, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0, |acc, (&x, brow)| field.add(acc, field.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Matrix whose `j`-th column is `cols[j]`.
pub fn from_columns(cols: &[Vec<Elem>], rows: usize) -> Matrix {
    (0..rows).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

pub fn axpy(field: &FiniteField, c: Elem, x: &[Elem], y: &mut [Elem]) {
    if c == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = field.add(*yi, field.mul(c, xi));
        }
    }
}

/// A subspace of `F^n` held as a reduced row echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(n: usize) -> Self {
        Subspace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { n, rows: identity(n), pivots: (0..n).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` against the basis; the result vanishes on pivot columns.
    pub fn reduce(&self, field: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                axpy(field, field.neg(c), row, &mut v);
            }
        }
        v
    }

    pub fn contains(&self, field: &FiniteField, v: &[Elem]) -> bool {
        self.reduce(field, v).iter().all(|&c| c == 0)
    }

    /// Insert `v`; returns whether the dimension grew.
    pub fn insert(&mut self, field: &FiniteField, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        let mut r = self.reduce(field, v);
        let Some(p) = r.iter().position(|&c| c != 0) else {
            return false;
        };
        let inv = field.inv(r[p]);
        for c in r.iter_mut() {
            *c = field.mul(*c, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                axpy(field, field.neg(c), &r, row);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    pub fn span(field: &FiniteField, n: usize, vs: &[Vec<Elem>]) -> Self {
        let mut s = Self::new(n);
        for v in vs {
            s.insert(field, v);
        }
        s
    }

    /// Non-pivot columns: the standard basis of a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.n];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.n).filter(|&i| !is_pivot[i]).collect()
    }

    /// Coordinates of the class of `v` in `F^n / self` with respect to the
    /// images of the standard vectors on [`free_columns`](Self::free_columns).
    pub fn quotient_coords(&self, field: &FiniteField, v: &[Elem]) -> Vec<Elem> {
        let r = self.reduce(field, v);
        self.free_columns().into_iter().map(|i| r[i]).collect()
    }

    /// Vectors of `self` that vanish on the first `k` coordinates.
    pub fn tail_part(&self, k: usize) -> Vec<Vec<Elem>> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .filter(|(_, &p)| p >= k)
            .map(|(r, _)| r[k..].to_vec())
            .collect()
    }
}

/// Basis of `{x : A x = 0}` for an `m × n` matrix.
pub fn kernel(field: &FiniteField, a: &Matrix, n: usize) -> Vec<Vec<Elem>> {
    let mut rows = Subspace::new(n);
    for r in a {
        rows.insert(field, r);
    }
    let free = rows.free_columns();
    free.iter()
        .map(|&f| {
            let mut x = vec![0; n];
            x[f] = 1;
            for (row, &p) in rows.rows.iter().zip(&rows.pivots) {
                x[p] = field.neg(row[f]);
            }
            x
        })
        .collect()
}

pub fn rank(field: &FiniteField, a: &Matrix) -> usize {
    let n = a.first().map_or(0, |r| r.len());
    Subspace::span(field, n, a).dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &FiniteField, m: usize, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
        (0..m).map(|_| (0..n).map(|_| rng.gen_range(0..f.size())).collect()).collect()
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(seed in any::<u64>(), m in 1usize..6, n in 1usize..7) {
            let f = FiniteField::new(3, 2).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(&f, m, n, &mut rng);
            let k = kernel(&f, &a, n);
            prop_assert_eq!(k.len() + rank(&f, &a), n);
            for v in &k {
                prop_assert!(mat_vec(&f, &a, v).iter().all(|&c| c == 0));
            }
        }

        #[test]
        fn quotient_coords_are_linear_and_kill_subspace(seed in any::<u64>()) {
            let f = FiniteField::prime(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens = random_matrix(&f, 3, 6, &mut rng);
            let s = Subspace::span(&f, 6, &gens);
            for g in &gens {
                prop_assert!(s.quotient_coords(&f, g).iter().all(|&c| c == 0));
            }
            prop_assert_eq!(s.free_columns().len(), 6 - s.dim());
            let x: Vec<u32> = (0..6).map(|_| rng.gen_range(0..5)).collect();
            let y: Vec<u32> = (0..6).map(|_| rng.gen_range(0..5)).collect();
            let sum: Vec<u32> = x.iter().zip(&y).map(|(&a, &b)| f.add(a, b)).collect();
            let qs: Vec<u32> = s.quotient_coords(&f, &x).iter().zip(s.quotient_coords(&f, &y)).map(|(&a, b)| f.add(a, b)).collect();
            prop_assert_eq!(s.quotient_coords(&f, &sum), qs);
        }
    }

    #[test]
    fn tail_part_extracts_intersection() {
        let f = FiniteField::prime(2).unwrap();
        let s = Subspace::span(&f, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        // span ∩ (0 ⊕ F^2) = {(0,1,1)}
        assert_eq!(s.tail_part(1), vec![vec![1, 1]]);
    }
}
