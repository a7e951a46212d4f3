//! Elementary modules `R[[T]]^r ⊕ ⊕_i R[[T]]/(f_i)`.

use serde::Serialize;

use crate::base::PolyRing;

use super::presentation::{Lengths, PresentationMatrix};
use super::series::{Length, SeriesT};

#[derive(Clone, Debug)]
pub struct ElementaryModule {
    pub rank: usize,
    pub factors: Vec<SeriesT>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ElementaryInvariants {
    pub rank: usize,
    /// `F = f_1 ⋯ f_s`, formatted.
    pub char_generator: String,
    pub ord_t: usize,
    /// `ord_R(F(0))`, undefined when `T | F`.
    pub mu: Option<usize>,
    pub mu_star: usize,
}

impl ElementaryModule {
    pub fn new(rank: usize, factors: Vec<SeriesT>) -> Self {
        ElementaryModule { rank, factors }
    }

    pub fn char_generator(&self, ring: &PolyRing) -> SeriesT {
        self.factors.iter().fold(SeriesT::one(), |acc, f| acc.mul(ring, f))
    }

    pub fn max_ord_t(&self) -> usize {
        self.factors.iter().filter_map(|f| f.ord_t()).max().unwrap_or(0)
    }

    /// Diagonal presentation with `rank` zero columns appended.
    pub fn presentation(&self, ring: &PolyRing) -> PresentationMatrix {
        let s = self.factors.len();
        let cols = s + self.rank;
        let rows = self
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut row = vec![SeriesT::from_coeffs(vec![]); cols];
                row[i] = f.clone();
                row
            })
            .collect();
        PresentationMatrix::new(ring, rows, cols).expect("square blocks")
    }
}

pub fn elementary_invariants(ring: &PolyRing, e: &ElementaryModule) -> ElementaryInvariants {
    let f = e.char_generator(ring);
    ElementaryInvariants {
        rank: e.rank,
        char_generator: f.format(ring),
        ord_t: f.ord_t().unwrap_or(0),
        mu: f.ord_r_at_zero(),
        mu_star: f.star().ord_r_at_zero().unwrap_or(0),
    }
}

/// Closed forms for `E / T^N`: rank `rN + Σ min(ord_T f_i, N)`, finite part
/// `Σ ord_R(f_i*(0)) max(N - ord_T f_i, 0)`.
pub fn elementary_lengths(e: &ElementaryModule, n: usize) -> Lengths {
    let mut rank = e.rank * n;
    let mut finite = 0;
    for f in &e.factors {
        let k = f.ord_t().expect("nonzero factor");
        rank += k.min(n);
        finite += f.star().ord_r_at_zero().unwrap() * n.saturating_sub(k);
    }
    let total = if rank == 0 { Length::Finite(finite) } else { Length::Infinite };
    Lengths { rank, total, finite }
}
