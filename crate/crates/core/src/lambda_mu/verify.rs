//! Eventual affinity of `N ↦ rank_R(M/T^N)`, `length_R(M/T^N)` and
//! `length_R((M/T^N)_fin)`.

use serde::Serialize;

use crate::base::PolyRing;
use crate::error::{Error, Result};

use super::elementary::{elementary_invariants, ElementaryModule};
use super::presentation::{presentation_lengths, PresentationMatrix};
use super::series::SeriesT;

/// Predicted slopes `(rank, μ, μ*)`.
#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
pub struct Expected {
    pub rank: usize,
    pub mu: Option<usize>,
    pub mu_star: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SequenceFit {
    /// `None` marks an infinite length.
    pub values: Vec<Option<usize>>,
    pub slope: Option<i64>,
    pub intercept: Option<i64>,
    /// Least `N` from which the sequence is affine through the end.
    pub stabilization: Option<usize>,
    pub affine: bool,
    /// Infinite throughout the affinity window.
    pub infinite: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgTReport {
    pub n_min: usize,
    pub n_max: usize,
    pub window: usize,
    pub bound: usize,
    pub rank: SequenceFit,
    pub total: SequenceFit,
    pub finite: SequenceFit,
    pub expected: Option<Expected>,
    pub failures: Vec<String>,
    pub pass: bool,
}

fn fit(ns: &[usize], values: Vec<Option<usize>>, window: usize) -> SequenceFit {
    let k = values.len();
    let tail = &values[k - window..];
    if tail.iter().all(|v| v.is_none()) {
        return SequenceFit { values, slope: None, intercept: None, stabilization: None, affine: true, infinite: true };
    }
    if tail.iter().any(|v| v.is_none()) {
        return SequenceFit { values, slope: None, intercept: None, stabilization: None, affine: false, infinite: false };
    }
    let y = |i: usize| values[i].unwrap() as i64;
    let slope = y(k - 1) - y(k - 2);
    let intercept = y(k - 1) - slope * ns[k - 1] as i64;
    let on_line = |i: usize| values[i].map_or(false, |v| v as i64 == slope * ns[i] as i64 + intercept);
    let affine = (k - window..k).all(on_line);
    let first = (0..k).rev().take_while(|&i| on_line(i)).last();
    SequenceFit {
        stabilization: if affine { first.map(|i| ns[i]) } else { None },
        slope: Some(slope),
        intercept: Some(intercept),
        values,
        affine,
        infinite: false,
    }
}

/// Evaluate the three sequences on `n_min..=n_max` through the Smith oracle
/// and check affinity on the last `max(4, bound + 2)` values, the
/// stabilization index against `bound`, and the slopes against `expected`.
pub fn verify_alg_t(
    a: &PresentationMatrix,
    n_min: usize,
    n_max: usize,
    bound: usize,
    expected: Option<Expected>,
) -> Result<AlgTReport> {
    let n_min = n_min.max(1);
    let window = 4.max(bound + 2);
    let settle = bound.max(n_min);
    if n_max < n_min || n_max + 1 < settle + window {
        return Err(Error::InsufficientData(format!(
            "range {n_min}..={n_max} leaves fewer than {window} values past N = {settle}"
        )));
    }
    let ns: Vec<usize> = (n_min..=n_max).collect();
    let data: Vec<_> = ns.iter().map(|&n| presentation_lengths(a, n)).collect();
    let rank = fit(&ns, data.iter().map(|l| Some(l.rank)).collect(), window);
    let total = fit(&ns, data.iter().map(|l| l.total.finite()).collect(), window);
    let finite = fit(&ns, data.iter().map(|l| Some(l.finite)).collect(), window);

    let mut failures = Vec::new();
    for (name, s) in [("rank", &rank), ("length", &total), ("finite part", &finite)] {
        if !s.affine {
            failures.push(format!("{name} is not affine on the last {window} values"));
        } else if let Some(st) = s.stabilization {
            if st > settle {
                failures.push(format!("{name} settles at N = {st}, beyond {settle}"));
            }
        }
    }
    if let Some(e) = expected {
        if rank.slope != Some(e.rank as i64) {
            failures.push(format!("rank slope {:?} differs from {}", rank.slope, e.rank));
        }
        if finite.slope != Some(e.mu_star as i64) {
            failures.push(format!("finite-part slope {:?} differs from mu* = {}", finite.slope, e.mu_star));
        }
        match (e.rank, e.mu) {
            (0, Some(mu)) => {
                if total.slope != Some(mu as i64) {
                    failures.push(format!("length slope {:?} differs from mu = {mu}", total.slope));
                }
            }
            _ => {
                if !total.infinite {
                    failures.push("length should be infinite".into());
                }
            }
        }
    }
    let pass = failures.is_empty();
    Ok(AlgTReport { n_min, n_max, window, bound, rank, total, finite, expected, failures, pass })
}

pub fn expected_of(ring: &PolyRing, e: &ElementaryModule) -> Expected {
    let inv = elementary_invariants(ring, e);
    Expected { rank: inv.rank, mu: inv.mu, mu_star: inv.mu_star }
}

/// A test module: its presentation, the settling bound and the elementary
/// module carrying its invariants.
#[derive(Clone, Debug)]
pub struct BatteryModule {
    pub name: String,
    pub matrix: PresentationMatrix,
    pub bound: usize,
    pub invariants: ElementaryModule,
}

impl BatteryModule {
    pub fn elementary(ring: &PolyRing, rank: usize, factors: &[&str]) -> Self {
        let e = ElementaryModule::new(rank, factors.iter().map(|s| SeriesT::parse(ring, s).unwrap()).collect());
        BatteryModule {
            name: format!("elementary(r={rank}; {})", factors.join(", ")),
            matrix: e.presentation(ring),
            bound: e.max_ord_t(),
            invariants: e,
        }
    }

    /// `R[[T]]/(π^a, T^b)`, of finite length.
    pub fn finite(ring: &PolyRing, a: usize, b: usize) -> Self {
        let rows = vec![
            vec![SeriesT::parse(ring, &format!("pi^{a}")).unwrap()],
            vec![SeriesT::t_power(b)],
        ];
        BatteryModule {
            name: format!("finite(pi^{a}, T^{b})"),
            matrix: PresentationMatrix::new(ring, rows, 1).unwrap(),
            bound: b,
            invariants: ElementaryModule::new(0, Vec::new()),
        }
    }

    /// An explicit matrix with the elementary module it is pseudo-isomorphic
    /// to.
    pub fn explicit(ring: &PolyRing, rows: &[&[&str]], rank: usize, factors: &[&str]) -> Self {
        let cols = rows[0].len();
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| SeriesT::parse(ring, s).unwrap()).collect())
            .collect();
        let matrix = PresentationMatrix::new(ring, entries, cols).unwrap();
        let name = format!(
            "matrix[{}]",
            rows.iter().map(|r| format!("[{}]", r.join(", "))).collect::<Vec<_>>().join(", ")
        );
        BatteryModule {
            name,
            bound: matrix.ord_t_bound(),
            matrix,
            invariants: ElementaryModule::new(rank, factors.iter().map(|s| SeriesT::parse(ring, s).unwrap()).collect()),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut factors = self.invariants.factors.clone();
        factors.extend(other.invariants.factors.iter().cloned());
        BatteryModule {
            name: format!("{} + {}", self.name, other.name),
            matrix: self.matrix.direct_sum(&other.matrix),
            bound: self.bound.max(other.bound),
            invariants: ElementaryModule::new(self.invariants.rank + other.invariants.rank, factors),
        }
    }

    pub fn expected(&self) -> Expected {
        expected_of(self.matrix.ring(), &self.invariants)
    }

    pub fn verify(&self, n_max: usize) -> Result<AlgTReport> {
        verify_alg_t(&self.matrix, 1, n_max, self.bound, Some(self.expected()))
    }
}

/// Elementary blocks, free summands, finite-length perturbations and small
/// explicit matrices over `F_q[π][T]`.
pub fn battery(ring: &PolyRing) -> Vec<BatteryModule> {
    let e = |r, f: &[&str]| BatteryModule::elementary(ring, r, f);
    let fin = |a, b| BatteryModule::finite(ring, a, b);
    vec![
        e(0, &["pi+T"]),
        e(0, &["pi"]),
        e(0, &["pi^2"]),
        e(0, &["T"]),
        e(0, &["T^2*(pi^2+T)"]),
        e(1, &[]),
        e(2, &[]),
        e(0, &["pi+T", "pi"]),
        e(1, &["pi+T^2"]),
        e(0, &["T^3+pi"]),
        e(0, &["pi*T+pi^2"]),
        e(1, &["T", "pi^2"]),
        e(0, &["pi^2+T^2", "T+pi^3"]),
        e(2, &["pi"]),
        e(0, &["pi+T"]).sum(&fin(1, 2)),
        e(1, &[]).sum(&fin(2, 1)),
        e(0, &["T^2*(pi^2+T)"]).sum(&fin(1, 3)),
        fin(2, 3),
        fin(1, 1).sum(&fin(1, 2)),
        BatteryModule::explicit(ring, &[&["T", "pi"], &["0", "T"]], 0, &["T^2"]),
        BatteryModule::explicit(ring, &[&["pi", "T"]], 1, &[]),
        BatteryModule::explicit(ring, &[&["pi+T", "T^2"], &["0", "pi^2"]], 0, &["pi^2*(pi+T)"]),
        BatteryModule::explicit(ring, &[&["T^2", "pi"], &["pi", "T"]], 0, &["T^3-pi^2"]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::FiniteField;

    #[test]
    fn affine_fit() {
        let ns: Vec<usize> = (1..=8).collect();
        let s = fit(&ns, vec![Some(0), Some(1), Some(2), Some(2), Some(2), Some(2), Some(2), Some(2)], 4);
        assert!(s.affine);
        assert_eq!((s.slope, s.intercept, s.stabilization), (Some(0), Some(2), Some(3)));
        let s = fit(&ns, vec![None; 8], 4);
        assert!(s.infinite && s.affine);
        let s = fit(&ns, (1..=8).map(|n| Some(n * n)).collect(), 4);
        assert!(!s.affine);
    }

    #[test]
    fn simple_modules_pass() {
        let r = PolyRing::new(FiniteField::prime(2).unwrap());
        let m = BatteryModule::elementary(&r, 0, &["pi+T"]);
        let rep = m.verify(12).unwrap();
        assert!(rep.pass, "{:?}", rep.failures);
        assert_eq!((rep.rank.slope, rep.total.slope, rep.finite.slope), (Some(0), Some(1), Some(1)));
        assert_eq!((rep.rank.intercept, rep.total.intercept, rep.finite.intercept), (Some(0), Some(0), Some(0)));
        let free = BatteryModule::elementary(&r, 2, &[]).verify(12).unwrap();
        assert!(free.pass);
        assert_eq!(free.rank.slope, Some(2));
        assert!(verify_alg_t(&m.matrix, 1, 3, 0, None).is_err());
    }

    #[test]
    fn wrong_expectation_fails() {
        let r = PolyRing::new(FiniteField::prime(2).unwrap());
        let m = BatteryModule::elementary(&r, 0, &["pi+T"]);
        let rep = verify_alg_t(&m.matrix, 1, 10, 0, Some(Expected { rank: 0, mu: Some(2), mu_star: 1 })).unwrap();
        assert!(!rep.pass);
    }
}
