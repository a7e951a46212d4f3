//! The class module `H(E/O_K) = K_∞ / (O_K + exp_E(K_∞))` for `K = L(θ)`,
//! its variants with a modulus, units and Galois descent.

pub mod finite;
pub mod galois;
pub mod units;
pub mod window;

use serde::Serialize;

use crate::base::linalg::{Matrix, Subspace};
use crate::base::{ConstantField, Poly, PolyRing};
use crate::drinfeld::{DrinfeldModule, QuotientAlgebra, Threshold};
use crate::error::Result;

pub use finite::{FiniteAModule, PrimeLength};
pub use galois::{frobenius_matrix, galois_coinvariants};
pub use units::{lattice_rank, torsion_degree_bound, unit_group_search, UnitCertificate, UnitSearchReport};
pub use window::{close_under, Closure, WindowModel};

#[derive(Clone, Debug)]
pub struct ClassModule {
    pub module: FiniteAModule,
    pub threshold: Threshold,
    pub window_dim: usize,
    /// Image of `O_K + exp(K_∞)` in the model.
    pub closure: Subspace,
    pub iterations: usize,
    pub t_matrix: Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassModuleSummary {
    pub dim: usize,
    pub divisors: Vec<String>,
    pub primes: Vec<PrimeLength>,
    pub threshold: u32,
    pub window_dim: usize,
    pub closure_dim: usize,
    pub closure_iterations: usize,
}

impl ClassModule {
    pub fn summary(&self) -> ClassModuleSummary {
        ClassModuleSummary {
            dim: self.module.dim(),
            divisors: self.module.divisor_strings(),
            primes: self.module.prime_lengths(),
            threshold: self.threshold.m,
            window_dim: self.window_dim,
            closure_dim: self.closure.dim(),
            closure_iterations: self.iterations,
        }
    }
}

/// `H` (or `H_f` if the model carries a modulus) from a built model.
pub fn compute_with_model(model: &mut WindowModel) -> Result<ClassModule> {
    let closure = model.closure()?;
    let t = model.t_matrix();
    let module = FiniteAModule::from_quotient(model.consts().base(), &t, &closure.subspace);
    Ok(ClassModule {
        module,
        threshold: model.threshold().clone(),
        window_dim: model.window_dim(),
        closure: closure.subspace,
        iterations: closure.iterations,
        t_matrix: t,
    })
}

pub fn compute_class_module(module: &DrinfeldModule, consts: &ConstantField) -> Result<ClassModule> {
    compute_with_model(&mut WindowModel::build(module, consts)?)
}

/// `E(L[θ]/f)`: `t` acts by `x ↦ φ(t) x mod f`.
pub fn local_quotient_module(module: &DrinfeldModule, consts: &ConstantField, f: &Poly) -> Result<FiniteAModule> {
    let alg = QuotientAlgebra::new(consts, f)?;
    let n = alg.dim();
    let cols: Vec<Vec<_>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            alg.to_vec(&module.apply_t(&alg, &alg.from_vec(&e)))
        })
        .collect();
    Ok(FiniteAModule::from_endomorphism(consts.base(), crate::base::linalg::from_columns(&cols, n)))
}

/// The terms of `0 → U_f → U → E(O_K/f) → H_f → H → 0`.
#[derive(Clone, Debug, Serialize)]
pub struct EulerCheck {
    pub local_dim: usize,
    pub h_f_dim: usize,
    pub h_dim: usize,
    /// `dim U/U_f` read from the window model.
    pub window_unit_image_dim: usize,
    /// `dim U/U_f` from the unit search, when it determines `U`.
    pub unit_image_dim: Option<usize>,
    /// Alternating sum with the unit-search term; `None` if inconclusive.
    pub alternating_sum: Option<i64>,
    pub conclusive: bool,
}

impl EulerCheck {
    pub fn holds(&self) -> Option<bool> {
        self.alternating_sum.map(|s| s == 0)
    }
}

#[derive(Clone, Debug)]
pub struct ModulusResult {
    pub h_f: ClassModule,
    pub h: ClassModule,
    pub local: FiniteAModule,
    pub units: UnitSearchReport,
    pub euler: EulerCheck,
}

/// `H_f = K_∞ / (f O_K + exp(K_∞))` on the window `V ⊕ L[θ]/f`, checked
/// against the exact sequence through `H`, `E(O_K/f)` and the units.
pub fn class_module_with_modulus(module: &DrinfeldModule, consts: &ConstantField, f: &Poly) -> Result<ModulusResult> {
    let mut model = WindowModel::build(module, consts)?.with_modulus(f)?;
    let h_f = compute_with_model(&mut model)?;
    let h = compute_class_module(module, consts)?;
    let local = local_quotient_module(module, consts, f)?;
    let window_image = h_f.closure.tail_part(model.window_dim()).len();

    let deg_f = model.modulus().and_then(|g| g.deg()).unwrap_or(0);
    let bound = torsion_degree_bound(module).unwrap_or(0);
    let units = unit_group_search(module, consts, deg_f.max(bound).max(1))?;
    let conclusive = units.certified && units.complete;
    let unit_image_dim = if conclusive {
        let alg = QuotientAlgebra::new(consts, f)?;
        Some(units::image_mod(module, &alg, &units.basis).dim())
    } else {
        None
    };
    let alternating_sum = unit_image_dim
        .map(|u| u as i64 - local.dim() as i64 + h_f.module.dim() as i64 - h.module.dim() as i64);
    let euler = EulerCheck {
        local_dim: local.dim(),
        h_f_dim: h_f.module.dim(),
        h_dim: h.module.dim(),
        window_unit_image_dim: window_image,
        unit_image_dim,
        alternating_sum,
        conclusive,
    };
    Ok(ModulusResult { h_f, h, local, units, euler })
}

pub fn format_theta(consts: &ConstantField, a: &Poly) -> String {
    PolyRing::new(consts.ambient().clone()).format(a, "theta")
}
