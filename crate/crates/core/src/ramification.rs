//! Differents and traces in totally ramified `Z_p`-extensions of local
//! fields, from the lower ramification breaks.

use num_rational::Ratio;
use serde::Serialize;

use crate::base::field::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakData {
    p: u64,
    breaks: Vec<u64>,
}

impl BreakData {
    pub fn new(p: u64, breaks: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if breaks.iter().any(|&i| i == 0) {
            return Err(Error::InvalidInput("breaks must be positive".into()));
        }
        Ok(BreakData { p, breaks })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn breaks(&self) -> &[u64] {
        &self.breaks
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.breaks.len() {
            return Err(Error::InvalidInput(format!("layer {n} needs {n} breaks, have {}", self.breaks.len())));
        }
        Ok(())
    }

    /// `#G_i` at level `n`: `p^(n-j)` on `(s_(j-1), s_j]` with
    /// `s_j = i_0 + p i_1 + ⋯ + p^j i_j` and `s_(-1) = -1`; then `1`.
    pub fn filtration(&self, n: usize) -> Result<Vec<u64>> {
        self.check(n)?;
        let mut out = Vec::new();
        let mut end: u64 = 0;
        for j in 0..n {
            let top = if j == 0 { self.breaks[0] } else { end + self.p.pow(j as u32) * self.breaks[j] };
            let order = self.p.pow((n - j) as u32);
            let start = if j == 0 { 0 } else { end + 1 };
            for _ in start..=top {
                out.push(order);
            }
            end = top;
        }
        Ok(out)
    }
}

/// `(p^n-1)(i_0+1) + Σ_(j=1)^(n-1) (p^(n-j)-1) p^j i_j`.
pub fn different_valuation(bd: &BreakData, n: usize) -> Result<u64> {
    bd.check(n)?;
    if n == 0 {
        return Ok(0);
    }
    let p = bd.p;
    let pn = p.pow(n as u32);
    let mut v = (pn - 1) * (bd.breaks[0] + 1);
    for j in 1..n {
        v += (p.pow((n - j) as u32) - 1) * p.pow(j as u32) * bd.breaks[j];
    }
    Ok(v)
}

/// `Σ_i (#G_i - 1)` over the filtration.
pub fn different_oracle(bd: &BreakData, n: usize) -> Result<u64> {
    Ok(bd.filtration(n)?.iter().map(|g| g - 1).sum())
}

/// `v_F(Tr(O_(F_n))) = ⌊v(D_n) / p^n⌋`.
pub fn trace_valuation(bd: &BreakData, n: usize) -> Result<u64> {
    Ok(different_valuation(bd, n)? / bd.p.pow(n as u32))
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceRow {
    pub n: usize,
    pub different: u64,
    pub trace: u64,
    /// `v(D_n) / p^n`.
    pub ratio: String,
    /// `(1 - 1/p)(1 + Σ_(j<n) i_j)`.
    pub bound: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DivergenceReport {
    pub p: u64,
    pub breaks: Vec<u64>,
    pub rows: Vec<DivergenceRow>,
    pub bounds_hold: bool,
    pub trace_monotone: bool,
    /// Layers needed, appending breaks equal to `1`, for the trace to reach
    /// `target`.
    pub target: u64,
    pub layers_to_target: usize,
}

impl DivergenceReport {
    pub fn pass(&self) -> bool {
        self.bounds_hold && self.trace_monotone
    }
}

pub fn divergence_certificate(bd: &BreakData, n_max: usize, target: u64) -> Result<DivergenceReport> {
    if n_max < 1 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    bd.check(n_max)?;
    let p = bd.p as i128;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let d = different_valuation(bd, n)?;
        let ratio = Ratio::new(d as i128, p.pow(n as u32));
        let sum: u64 = bd.breaks[..n].iter().sum();
        let bound = Ratio::new(p - 1, p) * Ratio::from_integer(1 + sum as i128);
        rows.push(DivergenceRow {
            n,
            different: d,
            trace: trace_valuation(bd, n)?,
            ratio: ratio.to_string(),
            bound: bound.to_string(),
            holds: ratio >= bound,
        });
    }
    let bounds_hold = rows.iter().all(|r| r.holds);
    let trace_monotone = rows.windows(2).all(|w| w[0].trace <= w[1].trace);
    let mut ext = bd.clone();
    let mut n = 0;
    while trace_valuation(&ext, n)? < target {
        n += 1;
        if n > ext.breaks.len() {
            ext.breaks.push(1);
        }
        if n > 64 {
            return Err(Error::ResourceGuard("trace target not reached within 64 layers".into()));
        }
    }
    Ok(DivergenceReport {
        p: bd.p,
        breaks: bd.breaks.clone(),
        rows,
        bounds_hold,
        trace_monotone,
        target,
        layers_to_target: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let bd = BreakData::new(2, vec![1, 1]).unwrap();
        assert_eq!(different_valuation(&bd, 2).unwrap(), 8);
        assert_eq!(different_oracle(&bd, 2).unwrap(), 8);
        assert_eq!(trace_valuation(&bd, 2).unwrap(), 2);
        assert_eq!(different_valuation(&bd, 1).unwrap(), 2);
        assert_eq!(trace_valuation(&bd, 1).unwrap(), 1);
        assert_eq!(different_valuation(&bd, 0).unwrap(), 0);
        assert_eq!(trace_valuation(&bd, 0).unwrap(), 0);
        assert!(different_valuation(&bd, 3).is_err());
        assert!(BreakData::new(4, vec![1]).is_err());
        assert!(BreakData::new(2, vec![0]).is_err());
    }

    #[test]
    fn bounds() {
        let r = divergence_certificate(&BreakData::new(2, vec![1, 1, 1, 1]).unwrap(), 4, 5).unwrap();
        let b: Vec<&str> = r.rows.iter().map(|x| x.bound.as_str()).collect();
        assert_eq!(b, vec!["1", "3/2", "2", "5/2"]);
        assert!(r.pass());
        let eq = divergence_certificate(&BreakData::new(2, vec![5]).unwrap(), 1, 0).unwrap();
        assert_eq!((eq.rows[0].ratio.as_str(), eq.rows[0].bound.as_str()), ("3", "3"));
        assert!(eq.rows[0].holds);
    }

    #[test]
    fn filtration_shape() {
        let bd = BreakData::new(3, vec![2, 1]).unwrap();
        let g = bd.filtration(2).unwrap();
        assert_eq!(g, vec![9, 9, 9, 3, 3, 3]);
        assert!(g.windows(2).all(|w| w[0] >= w[1]));
    }
}
