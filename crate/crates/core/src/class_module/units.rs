//! Search for the unit module `U = E(O_K) ∩ exp_E(K_∞)` in bounded degree.

use serde::Serialize;

use crate::base::field::Elem;
use crate::base::linalg::{self, Subspace};
use crate::base::{ConstantField, Poly, PolyRing, Trunc};
use crate::drinfeld::{carlitz_lattice_rank, DrinfeldModule, PolyAlgebra, QuotientAlgebra};
use crate::error::{Error, Result};

use super::window::WindowModel;

/// Largest degree for which rank growth is sampled.
const RANK_PROBE_DEGREE: usize = 2048;
const RANK_PROBE_STEPS: usize = 6;

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum UnitCertificate {
    /// `φ(t) = θ`: the exponential is the identity and `U = O_K`.
    RankZero,
    /// `U` is torsion, of degree at most the bound; read off exactly from
    /// the window model with modulus `θ^(bound+1)`.
    TorsionWindow { bound: usize },
    /// Carlitz with `q ≥ 3`: the Newton polygon of `exp` bounds the
    /// polynomial part of any preimage, so `U_D` is complete.
    NewtonPolygon,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnitSearchReport {
    pub degree_bound: usize,
    /// Largest `j` with `exp(c θ^j)` in the solve.
    pub exp_degree_bound: usize,
    /// `F_q`-basis of `U_D`, formatted.
    pub generators: Vec<String>,
    #[serde(skip)]
    pub basis: Vec<Poly>,
    pub found_dim: usize,
    pub rank_found: usize,
    pub rank_stable: bool,
    pub expected_rank: Option<usize>,
    /// `rank U' = rank U + r_E` when `r_E` is known.
    pub unit_prime_rank: Option<usize>,
    pub certificate: Option<UnitCertificate>,
    pub certified: bool,
    /// The found elements generate `U` as an `A`-module.
    pub complete: bool,
}

/// `r_E(K)` where known: Carlitz via the lattice criterion, rank zero.
pub fn lattice_rank(module: &DrinfeldModule) -> Option<usize> {
    if module.rank() == 0 {
        Some(0)
    } else if module.is_carlitz() {
        carlitz_lattice_rank(module).ok()
    } else {
        None
    }
}

/// Every torsion point of `E(O_K)` has degree at most the returned bound
/// (`None`: only `0`). Beyond it the top `τ`-term strictly dominates, so the
/// degree of `φ(t)^k a` grows without bound.
pub fn torsion_degree_bound(module: &DrinfeldModule) -> Option<usize> {
    let r = module.rank();
    if r == 0 {
        return None;
    }
    let q = module.q() as i64;
    let degs: Vec<Option<i64>> = module.coeffs().iter().map(|a| a.deg().map(|d| d as i64)).collect();
    let good = |n: i64| {
        let mut cands = vec![n + 1];
        for (j, dj) in degs.iter().enumerate().skip(1) {
            if let Some(dj) = dj {
                cands.push(dj + n * q.pow(j as u32));
            }
        }
        let max = *cands.iter().max().unwrap();
        max > n && cands.iter().filter(|&&c| c == max).count() == 1
    };
    let dr = degs[r].unwrap();
    let qr = q.pow(r as u32);
    // past n0 the top term wins against every other candidate
    let mut n0 = 0i64;
    loop {
        let top = dr + n0 * qr;
        let beats = top > n0 + 1
            && degs[1..r].iter().enumerate().all(|(j, dj)| dj.map_or(true, |dj| top > dj + n0 * q.pow(j as u32 + 1)));
        if beats {
            break;
        }
        n0 += 1;
    }
    (0..n0).rev().find(|&n| !good(n)).map(|n| n as usize)
}

/// `S(D) = max{s ≥ 0 : min_i (i - s) q^i ≥ -D}` for the Carlitz module.
fn carlitz_preimage_degree(q: i64, d: usize) -> usize {
    let newton = |s: i64| {
        let mut best = i64::MAX;
        let mut i = 0u32;
        loop {
            let v = (i as i64 - s) * q.pow(i);
            best = best.min(v);
            if i as i64 > s {
                return best;
            }
            i += 1;
        }
    };
    (0..=d as i64).filter(|&s| newton(s) >= -(d as i64)).max().unwrap_or(0) as usize
}

fn poly_coords(consts: &ConstantField, a: &Poly, len: usize) -> Vec<Elem> {
    let mut v = Vec::with_capacity(len * consts.degree() as usize);
    for k in 0..len {
        v.extend(consts.coords(a.coeff(k)));
    }
    v
}

fn poly_from_coords(consts: &ConstantField, v: &[Elem]) -> Poly {
    let d = consts.degree() as usize;
    Poly::from_coeffs(v.chunks(d).map(|c| consts.from_coords(c)).collect())
}

/// All `a ∈ L[θ]` of degree `≤ D` with `a ≡ exp(P) + exp(x) mod m^M` for
/// `deg P ≤ J` and `x` in the window.
fn solve_units(model: &mut WindowModel, deg: usize, j_max: usize) -> Result<Vec<Poly>> {
    let consts = model.consts().clone();
    let d = consts.degree() as usize;
    let m = model.m();
    let basis = consts.basis().to_vec();
    let mut columns: Vec<Trunc> = Vec::new();
    for k in 0..=deg {
        for &c in &basis {
            columns.push(Trunc::from_terms(&[(-(k as i64), c)], m));
        }
    }
    let amb = consts.ambient();
    for j in 0..=j_max {
        for &c in &basis {
            columns.push(model.exp_monomial(c, -(j as i64))?.neg(amb));
        }
    }
    for w in 1..m {
        for &c in &basis {
            columns.push(model.exp_monomial(c, w)?.neg(amb));
        }
    }
    let lo = columns.iter().map(|t| t.valuation_lb()).min().unwrap_or(0).min(0);
    let n = columns.len();
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    for e in lo..m {
        let coords: Vec<Vec<Elem>> = columns.iter().map(|t| consts.coords(t.get(e))).collect();
        for i in 0..d {
            rows.push((0..n).map(|col| coords[col][i]).collect());
        }
    }
    let field = consts.base();
    let a_len = (deg + 1) * d;
    let projected: Vec<Vec<Elem>> = linalg::kernel(field, &rows, n).into_iter().map(|v| v[..a_len].to_vec()).collect();
    let sub = Subspace::span(field, a_len, &projected);
    Ok(sub.basis().iter().map(|v| poly_from_coords(&consts, v)).collect())
}

/// `U` entirely, for a module whose torsion has degree `≤ bound`.
fn torsion_units(module: &DrinfeldModule, consts: &ConstantField, bound: usize) -> Result<Vec<Poly>> {
    let g = Poly::monomial(1, bound + 1);
    let mut model = WindowModel::build(module, consts)?.with_modulus(&g)?;
    let closure = model.closure()?;
    let kernel = closure.subspace.tail_part(model.window_dim());
    let sub = Subspace::span(consts.base(), model.local_dim(), &kernel);
    Ok(sub.basis().iter().map(|v| poly_from_coords(consts, v)).collect())
}

/// `dim_{F_q}` of the `F_q`-span of polynomials over `L`.
pub fn span_dim(consts: &ConstantField, polys: &[Poly]) -> usize {
    let len = polys.iter().filter_map(|p| p.deg()).max().map_or(0, |d| d + 1);
    let vs: Vec<Vec<Elem>> = polys.iter().map(|p| poly_coords(consts, p, len)).collect();
    Subspace::span(consts.base(), len * consts.degree() as usize, &vs).dim()
}

/// Rank estimate of the `A`-module generated by `gens`: the last growth
/// step of `dim span{φ(t^j) g : j ≤ k}`, with stability over three steps.
fn rank_growth(module: &DrinfeldModule, consts: &ConstantField, gens: &[Poly]) -> (usize, bool) {
    let alg = PolyAlgebra::new(consts);
    let mut all: Vec<Poly> = gens.to_vec();
    let mut layer: Vec<Poly> = gens.to_vec();
    let mut dims = vec![span_dim(consts, &all)];
    for _ in 0..RANK_PROBE_STEPS {
        let next: Vec<Poly> = layer.iter().map(|g| module.apply_t(&alg, g)).collect();
        if next.iter().any(|p| p.deg().unwrap_or(0) > RANK_PROBE_DEGREE) {
            break;
        }
        all.extend(next.iter().cloned());
        layer = next;
        dims.push(span_dim(consts, &all));
    }
    let diffs: Vec<usize> = dims.windows(2).map(|w| w[1] - w[0]).collect();
    match diffs.last() {
        None => (0, false),
        Some(&last) => {
            let stable = diffs.len() >= 3 && diffs[diffs.len() - 3..].iter().all(|&x| x == last);
            (last, stable)
        }
    }
}

/// Find `U_D = {a ∈ U : deg a ≤ D}` and compare its rank with
/// `[K:Q] - r_E(K)` when `r_E` is known.
pub fn unit_group_search(module: &DrinfeldModule, consts: &ConstantField, deg: usize) -> Result<UnitSearchReport> {
    if deg < 1 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let r_e = lattice_rank(module);
    let d = consts.degree() as usize;
    let expected = r_e.map(|r| d.saturating_sub(r));
    let mut model = WindowModel::build(module, consts)?;

    let (j_max, certificate) = if module.rank() == 0 {
        (deg, Some(UnitCertificate::RankZero))
    } else if expected == Some(0) {
        let bound = torsion_degree_bound(module);
        (deg, Some(UnitCertificate::TorsionWindow { bound: bound.unwrap_or(0) }))
    } else if module.is_carlitz() && module.q() >= 3 {
        (carlitz_preimage_degree(module.q() as i64, deg), Some(UnitCertificate::NewtonPolygon))
    } else {
        (deg, None)
    };

    let basis = solve_units(&mut model, deg, j_max)?;
    let mut certified = certificate.is_some();
    let mut complete = matches!(certificate, Some(UnitCertificate::RankZero));
    if let Some(UnitCertificate::TorsionWindow { bound }) = certificate {
        let all = torsion_units(module, consts, bound)?;
        let low: Vec<Poly> = all.iter().filter(|p| p.deg().map_or(true, |k| k <= deg)).cloned().collect();
        // U_D from the window must agree with the solve
        let joint: Vec<Poly> = low.iter().chain(basis.iter()).cloned().collect();
        let agree = span_dim(consts, &low) == basis.len() && span_dim(consts, &joint) == basis.len();
        certified = agree;
        complete = agree && low.len() == all.len();
    }

    let (rank_found, rank_stable) = rank_growth(module, consts, &basis);
    let ring = PolyRing::new(consts.ambient().clone());
    Ok(UnitSearchReport {
        degree_bound: deg,
        exp_degree_bound: j_max,
        generators: basis.iter().map(|p| ring.format(p, "theta")).collect(),
        found_dim: basis.len(),
        basis,
        rank_found,
        rank_stable,
        expected_rank: expected,
        unit_prime_rank: if certified { r_e.map(|r| rank_found + r) } else { None },
        certificate: if certified { certificate } else { None },
        certified,
        complete,
    })
}

/// Image of the `A`-module generated by `gens` in `E(L[θ]/f)`, as an
/// `F_q`-subspace of the coordinates of [`QuotientAlgebra::to_vec`].
pub fn image_mod(module: &DrinfeldModule, alg: &QuotientAlgebra<'_>, gens: &[Poly]) -> Subspace {
    let field = alg.consts.base();
    let mut sub = Subspace::new(alg.dim());
    let mut frontier: Vec<Poly> = gens.iter().map(|g| alg.reduce(g)).filter(|g| sub.insert(field, &alg.to_vec(g))).collect();
    while !frontier.is_empty() {
        frontier = frontier
            .iter()
            .map(|g| module.apply_t(alg, g))
            .filter(|g| sub.insert(field, &alg.to_vec(g)))
            .collect();
    }
    sub
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::FiniteField;

    fn fq(q: u32) -> FiniteField {
        FiniteField::prime(q).unwrap()
    }

    #[test]
    fn torsion_bounds() {
        assert_eq!(torsion_degree_bound(&DrinfeldModule::carlitz(&fq(2))), Some(1));
        assert_eq!(torsion_degree_bound(&DrinfeldModule::carlitz(&fq(3))), None);
        assert_eq!(torsion_degree_bound(&DrinfeldModule::trivial(&fq(2))), None);
    }

    #[test]
    fn preimage_degree_bound() {
        // q = 3: N(1) = -1, N(2) = -3, N(3) = -9
        assert_eq!(carlitz_preimage_degree(3, 1), 1);
        assert_eq!(carlitz_preimage_degree(3, 2), 1);
        assert_eq!(carlitz_preimage_degree(3, 3), 2);
    }

    #[test]
    fn carlitz_two_units_are_the_torsion() {
        let f = fq(2);
        let l = ConstantField::new(&f, 1).unwrap();
        let r = unit_group_search(&DrinfeldModule::carlitz(&f), &l, 3).unwrap();
        assert!(r.certified && r.complete);
        assert_eq!(r.found_dim, 2);
        assert_eq!(span_dim(&l, &r.basis), 2);
        assert!(r.basis.iter().all(|p| p.deg().unwrap() <= 1));
        assert_eq!(r.rank_found, 0);
        assert_eq!(r.expected_rank, Some(0));
        assert_eq!(r.unit_prime_rank, Some(1));
    }

    #[test]
    fn rank_zero_units_are_everything() {
        let f = fq(2);
        let l = ConstantField::new(&f, 2).unwrap();
        let r = unit_group_search(&DrinfeldModule::trivial(&f), &l, 2).unwrap();
        assert!(r.certified && r.complete);
        assert_eq!(r.found_dim, 6);
        assert_eq!(r.rank_found, 2);
        assert_eq!(r.expected_rank, Some(2));
    }

    #[test]
    fn carlitz_three_has_rank_one() {
        let f = fq(3);
        let l = ConstantField::new(&f, 1).unwrap();
        let r = unit_group_search(&DrinfeldModule::carlitz(&f), &l, 3).unwrap();
        assert_eq!(r.expected_rank, Some(1));
        assert_eq!(r.certificate, Some(UnitCertificate::NewtonPolygon));
        assert!(r.rank_found <= 1);
    }
}
