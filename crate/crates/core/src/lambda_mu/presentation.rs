//! Presentations over `F_q[π][T]` and the brute-force length oracle.

use serde::{Deserialize, Serialize};

use crate::base::{smith_normal_form, FiniteField, Poly, PolyRing};
use crate::error::{Error, Result};

use super::series::{ord_pi, Length, SeriesT};

/// `M = coker(A)`: rows are relations, columns are generators.
#[derive(Clone, Debug)]
pub struct PresentationMatrix {
    ring: PolyRing,
    rows: Vec<Vec<SeriesT>>,
    cols: usize,
}

#[derive(Deserialize, Serialize)]
pub struct MatrixSpec {
    pub q: u32,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Lengths {
    pub rank: usize,
    pub total: Length,
    pub finite: usize,
}

impl PresentationMatrix {
    pub fn new(ring: &PolyRing, rows: Vec<Vec<SeriesT>>, cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged presentation matrix".into()));
        }
        Ok(PresentationMatrix { ring: ring.clone(), rows, cols })
    }

    pub fn from_spec(spec: &MatrixSpec) -> Result<Self> {
        let field = FiniteField::from_order(spec.q)?;
        let ring = PolyRing::new(field);
        let cols = spec.rows.first().map_or(0, |r| r.len());
        let rows = spec
            .rows
            .iter()
            .map(|r| r.iter().map(|s| SeriesT::parse(&ring, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(&ring, rows, cols)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(s)?)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let cols = self.cols + other.cols;
        let z = SeriesT::from_coeffs(vec![]);
        let mut rows = Vec::new();
        for r in &self.rows {
            let mut row = r.clone();
            row.extend(std::iter::repeat(z.clone()).take(other.cols));
            rows.push(row);
        }
        for r in &other.rows {
            let mut row: Vec<SeriesT> = std::iter::repeat(z.clone()).take(self.cols).collect();
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        PresentationMatrix { ring: self.ring.clone(), rows, cols }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rows(&self) -> &[Vec<SeriesT>] {
        &self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `Σ_rows max ord_T(entry)`, bounding where the sequences settle.
    pub fn ord_t_bound(&self) -> usize {
        self.rows.iter().map(|r| r.iter().filter_map(|e| e.ord_t()).max().unwrap_or(0)).sum()
    }

    /// The `R`-presentation of `M / T^N`: generator `j T^k` is column
    /// `j N + k`, relation `T^s ρ` is row `i N + s`.
    pub fn truncation(&self, n: usize) -> Vec<Vec<Poly>> {
        let mut out = vec![vec![Poly::zero(); self.cols * n]; self.rows.len() * n];
        for (i, row) in self.rows.iter().enumerate() {
            for s in 0..n {
                let target = &mut out[i * n + s];
                for (j, e) in row.iter().enumerate() {
                    for k in s..n {
                        target[j * n + k] = e.coeff(k - s);
                    }
                }
            }
        }
        out
    }
}

/// `(rank_R, length, finite-part length)` of `M / T^N` from the Smith form
/// over the PID `F_q[π]`; only `π` survives in `R`.
pub fn presentation_lengths(a: &PresentationMatrix, n: usize) -> Lengths {
    let cols = a.cols * n;
    if a.rows.is_empty() || cols == 0 {
        return Lengths { rank: cols, total: if cols == 0 { Length::Finite(0) } else { Length::Infinite }, finite: 0 };
    }
    let s = smith_normal_form(&a.ring, &a.truncation(n));
    let rank = s.cokernel_rank();
    let finite: usize = s.divisors.iter().filter_map(ord_pi).sum();
    let total = if rank == 0 { Length::Finite(finite) } else { Length::Infinite };
    Lengths { rank, total, finite }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_mu::series::{finite_part_length, length_quotient};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ring(p: u32) -> PolyRing {
        PolyRing::new(FiniteField::prime(p).unwrap())
    }

    fn one_by_one(r: &PolyRing, s: &str) -> PresentationMatrix {
        PresentationMatrix::new(r, vec![vec![SeriesT::parse(r, s).unwrap()]], 1).unwrap()
    }

    #[test]
    fn toeplitz_determinant() {
        let r = ring(3);
        let a = one_by_one(&r, "pi+2*pi*T+T^2");
        let m = a.truncation(4);
        // lower triangular in (relation, generator) order with diagonal f(0)
        for i in 0..4 {
            assert_eq!(m[i][i], Poly(vec![0, 1]));
            for j in 0..i {
                assert!(m[i][j].is_zero());
            }
        }
        assert_eq!(presentation_lengths(&a, 4), Lengths { rank: 0, total: Length::Finite(4), finite: 4 });
    }

    #[test]
    fn small_examples() {
        let r = ring(2);
        assert_eq!(presentation_lengths(&one_by_one(&r, "pi+T"), 3), Lengths { rank: 0, total: Length::Finite(3), finite: 3 });
        let m = PresentationMatrix::from_json(r#"{"q":2,"rows":[["T","pi"],["0","T"]]}"#).unwrap();
        assert_eq!(m.ord_t_bound(), 2);
        assert_eq!(presentation_lengths(&m, 1), Lengths { rank: 1, total: Length::Infinite, finite: 1 });
        assert_eq!(presentation_lengths(&m, 2), Lengths { rank: 2, total: Length::Infinite, finite: 0 });
        let row = PresentationMatrix::from_json(r#"{"q":2,"rows":[["pi","T"]]}"#).unwrap();
        assert_eq!(presentation_lengths(&row, 3), Lengths { rank: 3, total: Length::Infinite, finite: 1 });
    }

    fn random_series(r: &PolyRing, rng: &mut ChaCha8Rng) -> SeriesT {
        loop {
            let coeffs = (0..=rng.gen_range(0..=4)).map(|_| r.random(4, rng)).collect();
            let f = SeriesT::from_coeffs(coeffs);
            if !f.is_zero() {
                return f;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn closed_forms_match_oracle(seed in any::<u64>(), p in prop::sample::select(vec![2u32, 3]), n in 1usize..9) {
            let r = ring(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_series(&r, &mut rng);
            let a = PresentationMatrix::new(&r, vec![vec![f.clone()]], 1).unwrap();
            let o = presentation_lengths(&a, n);
            prop_assert_eq!(o.total, length_quotient(&f, n).unwrap());
            let k = f.ord_t().unwrap();
            if n >= k {
                prop_assert_eq!(o.finite, finite_part_length(&f, n).unwrap());
                prop_assert_eq!(o.rank, k);
            }
        }
    }
}
