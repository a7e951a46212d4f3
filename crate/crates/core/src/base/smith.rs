//! Smith normal form over `F_q[x]`.

use super::poly::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | ...`, monic or zero, one per diagonal position.
    pub divisors: Vec<Poly>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    /// Divisors of positive degree.
    pub fn nonunit(&self) -> Vec<Poly> {
        self.divisors.iter().filter(|d| d.deg().map_or(false, |k| k > 0)).cloned().collect()
    }

    /// Free rank of the cokernel: zero divisors plus excess columns.
    pub fn cokernel_rank(&self) -> usize {
        self.divisors.iter().filter(|d| d.is_zero()).count() + (self.cols - self.divisors.len())
    }

    /// `Σ ord_x(d)` over nonzero divisors.
    pub fn torsion_length_at_zero(&self) -> usize {
        self.divisors.iter().filter_map(|d| d.low_order()).sum()
    }
}

fn row_op(ring: &PolyRing, a: &mut [Vec<Poly>], target: usize, src: usize, q: &Poly) {
    let src_row = a[src].clone();
    for (t, s) in a[target].iter_mut().zip(&src_row) {
        if !s.is_zero() {
            *t = ring.sub(t, &ring.mul(q, s));
        }
    }
}

fn col_op(ring: &PolyRing, a: &mut [Vec<Poly>], target: usize, src: usize, q: &Poly) {
    for row in a.iter_mut() {
        if !row[src].is_zero() {
            let v = ring.sub(&row[target], &ring.mul(q, &row[src]));
            row[target] = v;
        }
    }
}

/// Divisors of `mat` (rows × cols). Pivots are entries of least degree, ties
/// broken row-major.
pub fn smith_normal_form(ring: &PolyRing, mat: &[Vec<Poly>]) -> SmithForm {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Poly>> = mat.to_vec();
    let n = rows.min(cols);
    let mut divisors = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, e) in row.iter().enumerate().skip(k) {
                    if let Some(d) = e.deg() {
                        if best.map_or(true, |(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else {
                divisors.extend(std::iter::repeat(Poly::zero()).take(n - k));
                return SmithForm { divisors, rows, cols };
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let pivot = a[k][k].clone();
            let mut clean = true;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let (q, r) = ring.divrem(&a[i][k], &pivot);
                row_op(ring, &mut a, i, k, &q);
                clean &= r.is_zero();
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let (q, r) = ring.divrem(&a[k][j], &pivot);
                col_op(ring, &mut a, j, k, &q);
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (k + 1..rows)
                .find(|&i| (k + 1..cols).any(|j| !ring.divides(&pivot, &a[i][j])));
            match bad_row {
                Some(i) => {
                    let minus_one = Poly::constant(ring.field().neg(1));
                    row_op(ring, &mut a, k, i, &minus_one);
                }
                None => break,
            }
        }
        divisors.push(ring.monic(&a[k][k]));
    }
    SmithForm { divisors, rows, cols }
}
