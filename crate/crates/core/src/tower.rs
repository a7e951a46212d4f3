//! Constant-field `Z_p`-towers `K_n = F_{q^(p^n)}(θ)`.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use serde::Serialize;

use crate::base::{ConstantField, FiniteField, Poly, PolyRing};
use crate::class_module::{compute_with_model, galois_coinvariants, ClassModule, WindowModel};
use crate::drinfeld::{DrinfeldModule, ExpData};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub module: DrinfeldModule,
    pub n_max: u32,
    /// Enumerate all monic irreducibles of `F_q[t]` up to this degree.
    pub prime_degree_bound: usize,
    /// Extra primes to tabulate.
    pub primes: Vec<Poly>,
    pub budget: Option<Duration>,
}

impl TowerSpec {
    pub fn new(module: &DrinfeldModule, n_max: u32) -> Self {
        TowerSpec { module: module.clone(), n_max, prime_degree_bound: 3, primes: Vec::new(), budget: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerRow {
    pub n: u32,
    /// `[L_n : F_q] = p^n`.
    pub constants_degree: u32,
    pub window_dim: usize,
    pub dim: usize,
    pub divisors: Vec<String>,
    /// `ℓ_𝔭(n)`, one entry per tabulated prime.
    pub lengths: Vec<usize>,
    /// `dim H_n - Σ deg 𝔭 · ℓ_𝔭(n)` over tabulated primes.
    pub remainder: usize,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerTable {
    pub p: u32,
    pub threshold: u32,
    pub primes: Vec<String>,
    pub layers: Vec<LayerRow>,
}

/// A computed tower: the table plus the per-layer models for descent.
#[derive(Clone, Debug)]
pub struct Tower {
    pub table: LayerTable,
    pub primes: Vec<Poly>,
    pub layers: Vec<(WindowModel, ClassModule)>,
}

impl Tower {
    /// `ℓ_𝔭(n)` for every layer, for the `i`-th tabulated prime.
    pub fn column(&self, i: usize) -> Vec<i64> {
        self.table.layers.iter().map(|r| r.lengths[i] as i64).collect()
    }

    pub fn dims(&self) -> Vec<i64> {
        self.table.layers.iter().map(|r| r.dim as i64).collect()
    }
}

pub fn run_tower(spec: &TowerSpec) -> Result<Tower> {
    let start = Instant::now();
    let module = &spec.module;
    let base = module.field().clone();
    let p = base.characteristic();
    let top = p.checked_pow(spec.n_max).ok_or_else(|| Error::ResourceGuard("tower too tall".into()))?;
    let ambient = FiniteField::new(p, base.degree() * top)?;
    let mut exp = ExpData::new(module, module.rank())?;
    let threshold = exp.threshold()?;
    let mut layers = Vec::new();
    let mut times = Vec::new();
    for n in 0..=spec.n_max {
        let t0 = Instant::now();
        let consts = ConstantField::layer(&base, &ambient, p.pow(n))?;
        let mut model = WindowModel::new(&consts, exp.clone())?;
        let h = compute_with_model(&mut model)?;
        times.push(t0.elapsed().as_millis());
        layers.push((model, h));
        if let Some(b) = spec.budget {
            if start.elapsed() > b && n < spec.n_max {
                return Err(Error::ResourceGuard(format!("time budget exhausted after layer {n}")));
            }
        }
    }

    let ring = PolyRing::new(base.clone());
    let mut primes: Vec<Poly> = Vec::new();
    for d in 1..=spec.prime_degree_bound {
        primes.extend(ring.monic_irreducibles(d));
    }
    for f in &spec.primes {
        if !ring.is_irreducible(f) {
            return Err(Error::Reducible(ring.format(f, "t")));
        }
        primes.push(ring.monic(f));
    }
    for (_, h) in &layers {
        for (f, _) in h.module.prime_table() {
            primes.push(f);
        }
    }
    primes.sort_by(|a, b| (a.deg(), &a.0).cmp(&(b.deg(), &b.0)));
    primes.dedup();

    let rows = layers
        .iter()
        .zip(times)
        .enumerate()
        .map(|(n, ((model, h), millis))| {
            let lengths: Vec<usize> = primes.iter().map(|f| h.module.p_part(f).expect("irreducible")).collect();
            let mass: usize = primes.iter().zip(&lengths).map(|(f, l)| f.deg().unwrap() * l).sum();
            LayerRow {
                n: n as u32,
                constants_degree: model.consts().degree(),
                window_dim: model.window_dim(),
                dim: h.module.dim(),
                divisors: h.module.divisor_strings(),
                lengths,
                remainder: h.module.dim() - mass,
                millis,
            }
        })
        .collect();
    let table = LayerTable {
        p,
        threshold: threshold.m,
        primes: primes.iter().map(|f| ring.format(f, "t")).collect(),
        layers: rows,
    };
    Ok(Tower { table, primes, layers })
}

/// `H_n` over `Gal(L_n/L_{n-1})` against `H_{n-1}`.
pub fn descent_check(tower: &Tower, n: usize) -> Result<bool> {
    if n == 0 || n >= tower.layers.len() {
        return Err(Error::InvalidInput(format!("descent needs 1 ≤ n ≤ {}", tower.layers.len() - 1)));
    }
    let (model, h) = &tower.layers[n];
    let (below, h_below) = &tower.layers[n - 1];
    let coinv = galois_coinvariants(model, h, below.consts())?;
    Ok(coinv.same_structure(&h_below.module))
}

/// If `ℓ_𝔭(0) = 0` every later layer must have `ℓ_𝔭(n) = 0`.
pub fn nakayama_vanishing_check(lengths: &[i64]) -> bool {
    lengths.first() != Some(&0) || lengths.iter().all(|&l| l == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fit {
    pub mu: Ratio<i64>,
    pub nu: Ratio<i64>,
    /// Least `n₀` with `ℓ(n) = μ p^n + ν` for all `n ≥ n₀`.
    pub n0: usize,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub mu: String,
    pub nu: String,
    pub n0: usize,
    pub consistent: bool,
}

impl Fit {
    pub fn report(&self) -> FitReport {
        FitReport { mu: self.mu.to_string(), nu: self.nu.to_string(), n0: self.n0, consistent: self.consistent }
    }
}

/// Solve `ℓ(n) = μ p^n + ν` from the last two layers.
pub fn asymptotic_fit(lengths: &[i64], p: u32) -> Result<Fit> {
    let k = lengths.len();
    if k < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 layers, got {k}")));
    }
    let pow = |n: usize| (p as i64).pow(n as u32);
    let mu = Ratio::new(lengths[k - 1] - lengths[k - 2], pow(k - 1) - pow(k - 2));
    let nu = Ratio::from_integer(lengths[k - 1]) - mu * pow(k - 1);
    let fits = |n: usize| Ratio::from_integer(lengths[n]) == mu * pow(n) + nu;
    let n0 = (0..k).rev().take_while(|&n| fits(n)).last().unwrap_or(k - 1);
    let consistent = mu.is_integer() && *mu.numer() >= 0 && nu.is_integer() && difference_law(lengths, p, n0);
    Ok(Fit { mu, nu, n0, consistent })
}

/// `Δ(n+1) = p Δ(n)` with `Δ(n) = ℓ(n) - ℓ(n-1)`, for `n > n₀`.
pub fn difference_law(lengths: &[i64], p: u32, n0: usize) -> bool {
    let delta: Vec<i64> = lengths.windows(2).map(|w| w[1] - w[0]).collect();
    // delta[i] = Δ(i+1)
    (n0..delta.len().saturating_sub(1)).all(|i| delta[i + 1] == p as i64 * delta[i])
}
