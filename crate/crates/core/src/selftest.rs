//! Seeded property suites over the library.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::base::{ConstantField, FiniteField, Poly, PolyRing, Trunc};
use crate::drinfeld::module::{LaurentAlgebra, QuotientAlgebra};
use crate::drinfeld::{DrinfeldModule, ExpData};
use crate::error::{Error, Result};
use crate::lambda_mu::{
    battery, finite_part_length, gamma_iso_check, length_quotient, presentation_lengths, PresentationMatrix, SeriesT,
};
use crate::ramification::{different_oracle, different_valuation, divergence_certificate, BreakData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lengths,
    Ramification,
    Drinfeld,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "appendix-a" => Ok(Suite::Lengths),
            "ramification" => Ok(Suite::Ramification),
            "drinfeld" => Ok(Suite::Drinfeld),
            "all" => Ok(Suite::All),
            _ => Err(Error::InvalidInput(format!("unknown suite {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.into(), cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

pub fn random_series(ring: &PolyRing, max_deg: usize, rng: &mut impl Rng) -> SeriesT {
    loop {
        let f = SeriesT::from_coeffs((0..=rng.gen_range(0..=max_deg)).map(|_| ring.random(max_deg, rng)).collect());
        if !f.is_zero() {
            return f;
        }
    }
}

/// Closed forms for `R[[T]]/(f, T^N)` against the Smith oracle.
pub fn closed_forms(p: u32, samples: usize, n_max: usize, rng: &mut impl Rng) -> Result<Check> {
    let ring = PolyRing::new(FiniteField::prime(p)?);
    let mut c = Check::new(&format!("closed forms over F_{p}"));
    for _ in 0..samples {
        let f = random_series(&ring, 4, rng);
        let a = PresentationMatrix::new(&ring, vec![vec![f.clone()]], 1)?;
        let k = f.ord_t().unwrap();
        for n in 1..=n_max {
            let o = presentation_lengths(&a, n);
            let total = length_quotient(&f, n)?;
            c.record(o.total == total, || format!("{} N={n}: length {total} vs {}", f.format(&ring), o.total));
            if n >= k {
                let fin = finite_part_length(&f, n)?;
                c.record(o.finite == fin && o.rank == k, || {
                    format!("{} N={n}: finite part {fin} vs {}, rank {} vs {k}", f.format(&ring), o.finite, o.rank)
                });
            }
        }
    }
    Ok(c)
}

pub fn battery_check(p: u32, n_max: usize) -> Result<Check> {
    let ring = PolyRing::new(FiniteField::prime(p)?);
    let mut c = Check::new(&format!("battery over F_{p}"));
    for m in battery(&ring) {
        let r = m.verify(n_max)?;
        c.record(r.pass, || format!("{}: {}", m.name, r.failures.join("; ")));
    }
    Ok(c)
}

pub fn gamma_check(primes: &[u32], n_max: u32) -> Result<Check> {
    let mut c = Check::new("(1+T)^(p^n) - 1 = T^(p^n)");
    for &p in primes {
        for n in 0..=n_max {
            let ok = gamma_iso_check(p, n)?;
            c.record(ok, || format!("p={p} n={n}"));
        }
    }
    Ok(c)
}

/// Every break vector in `{1..=top}^n` for `n ≤ n_max`.
pub fn ramification_check(primes: &[u64], top: u64, n_max: usize) -> Result<Vec<Check>> {
    let mut closed = Check::new("different: closed form vs filtration sum");
    let mut bound = Check::new("trace lower bound and monotonicity");
    let mut diverge = Check::new("trace divergence under break extension");
    for &p in primes {
        for n in 1..=n_max {
            let mut breaks = vec![1u64; n];
            loop {
                let bd = BreakData::new(p, breaks.clone())?;
                for k in 0..=n {
                    let a = different_valuation(&bd, k)?;
                    let b = different_oracle(&bd, k)?;
                    closed.record(a == b, || format!("p={p} {breaks:?} n={k}: {a} vs {b}"));
                }
                let r = divergence_certificate(&bd, n, 3 * n as u64)?;
                bound.record(r.pass(), || format!("p={p} {breaks:?}"));
                let reached = r.layers_to_target;
                let mut ext = breaks.clone();
                ext.resize(reached.max(n), 1);
                let tr = crate::ramification::trace_valuation(&BreakData::new(p, ext)?, reached)?;
                diverge.record(tr >= 3 * n as u64, || format!("p={p} {breaks:?}: trace {tr} at {reached}"));
                let Some(i) = breaks.iter().position(|&b| b < top) else { break };
                breaks[i] += 1;
                breaks[..i].iter_mut().for_each(|b| *b = 1);
            }
        }
    }
    Ok(vec![closed, bound, diverge])
}

/// `φ = θ + θ³τ` over `F_2`.
pub fn regression_module() -> DrinfeldModule {
    let f = FiniteField::prime(2).unwrap();
    DrinfeldModule::new(&f, vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1])]).unwrap().with_label("theta + theta^3 tau")
}

/// Carlitz over `F_2`, Carlitz over `F_3` and the regression module.
pub fn regression_set() -> Vec<DrinfeldModule> {
    vec![
        DrinfeldModule::carlitz(&FiniteField::prime(2).unwrap()),
        DrinfeldModule::carlitz(&FiniteField::prime(3).unwrap()),
        regression_module(),
    ]
}

fn random_elem(consts: &ConstantField, rng: &mut impl Rng) -> u32 {
    let q = consts.q() as u32;
    let v: Vec<u32> = (0..consts.degree()).map(|_| rng.gen_range(0..q)).collect();
    consts.from_coords(&v)
}

fn random_quotient_elem(alg: &QuotientAlgebra, rng: &mut impl Rng) -> Poly {
    let q = alg.consts.q() as u32;
    let v: Vec<u32> = (0..alg.dim()).map(|_| rng.gen_range(0..q)).collect();
    alg.from_vec(&v)
}

/// `E(L[θ]/f)` has the underlying `F_q`-module of `L[θ]/f`: same size, and
/// `φ(c)` for `c ∈ F_q` is multiplication by `c`.
pub fn functor_check(samples: usize, rng: &mut impl Rng) -> Result<Check> {
    let mut c = Check::new("functor E(L[theta]/f)");
    let modules = regression_set();
    for s in 0..samples {
        let m = &modules[s % modules.len()];
        let base = m.field().clone();
        let consts = ConstantField::new(&base, rng.gen_range(1..=2))?;
        let ring = PolyRing::new(consts.ambient().clone());
        let deg = rng.gen_range(1..=3);
        let mut f = Poly::from_coeffs((0..deg).map(|_| random_elem(&consts, rng)).collect());
        f = ring.add(&f, &Poly::monomial(1, deg));
        let alg = QuotientAlgebra::new(&consts, &f)?;
        let size = (consts.size() as u128).pow(deg as u32);
        let q = base.size();
        let elems = (q as u128).pow(alg.dim() as u32);
        let x = random_quotient_elem(&alg, rng);
        let y = random_quotient_elem(&alg, rng);
        let tx = m.apply_t(&alg, &x);
        let reduced = tx.deg().map_or(true, |d| d < deg) && alg.from_vec(&alg.to_vec(&tx)) == tx;
        let mut ok = size == elems && reduced && alg.from_vec(&alg.to_vec(&x)) == x;
        for a in 0..q {
            let ca = Poly::constant(a);
            let lhs = m.apply(&alg, &ca, &x);
            let rhs = ring.scale(consts.embed(a), &x);
            let lin = m.apply_t(&alg, &ring.add(&rhs, &y));
            let lin_rhs = ring.add(&ring.scale(consts.embed(a), &tx), &m.apply_t(&alg, &y));
            ok &= lhs == rhs && lin == lin_rhs;
        }
        c.record(ok, || format!("{:?} f={} over degree {}", m.label(), ring.format(&f, "theta"), consts.degree()));
    }
    Ok(c)
}

/// `φ(t)(exp x) = exp(θx)` coefficientwise below `u^prec` for random
/// Laurent polynomials `x` supported in degrees `-2..=3`.
pub fn functional_equation_check(samples: usize, rng: &mut impl Rng) -> Result<Check> {
    let mut c = Check::new("exp functional equation");
    for m in regression_set() {
        let consts = ConstantField::new(m.field(), 2)?;
        let amb = consts.ambient();
        let alg = LaurentAlgebra { consts: &consts };
        let mut e = ExpData::new(&m, 2)?;
        let prec = 6;
        let margin = m.max_coeff_degree().max(0) + 2;
        for _ in 0..samples {
            let terms: Vec<(i64, u32)> = (-2..=3).map(|w| (w, random_elem(&consts, rng))).collect();
            let x = Trunc::from_terms(&terms, i64::MAX / 4);
            let ex = e.evaluate(&consts, &x, prec + margin)?;
            let lhs = m.apply_t(&alg, &ex);
            let rhs = e.evaluate(&consts, &x.mul_theta_poly(amb, &Poly(vec![0, 1])), prec)?;
            let low = lhs.valuation_lb().min(rhs.valuation_lb());
            let ok = lhs.prec() >= prec && (low..prec).all(|k| lhs.get(k) == rhs.get(k));
            c.record(ok, || format!("{:?} x={terms:?}", m.label()));
        }
    }
    Ok(c)
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    if matches!(suite, Suite::Lengths | Suite::All) {
        checks.push(closed_forms(2, 40, 10, &mut rng)?);
        checks.push(closed_forms(3, 40, 10, &mut rng)?);
        checks.push(battery_check(2, 12)?);
        checks.push(battery_check(3, 12)?);
        checks.push(gamma_check(&[2, 3, 5], 6)?);
    }
    if matches!(suite, Suite::Ramification | Suite::All) {
        checks.extend(ramification_check(&[2, 3, 5], 3, 4)?);
    }
    if matches!(suite, Suite::Drinfeld | Suite::All) {
        checks.push(functor_check(12, &mut rng)?);
        checks.push(functional_equation_check(4, &mut rng)?);
    }
    Ok(SuiteReport { suite, seed, checks })
}
