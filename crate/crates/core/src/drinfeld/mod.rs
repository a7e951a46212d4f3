pub mod exp;
pub mod module;
pub mod skew;

pub use exp::{ExpData, TailCertificate, Threshold};
pub use module::{
    apply_skew, DrinfeldModule, LaurentAlgebra, ModuleSpec, PhiSpec, PolyAlgebra, QuotientAlgebra,
    TauAlgebra,
};
pub use skew::{SkewPoly, SkewRing};

use crate::error::{Error, Result};

/// `r_C(K)` for the Carlitz module and `K = L(θ)`: the number of infinite
/// places (one) at which `(-θ)^(1/(q-1))` is rational. Since `v_∞(-θ) = -1`
/// this happens exactly when `q = 2`.
pub fn carlitz_lattice_rank(module: &DrinfeldModule) -> Result<usize> {
    if !module.is_carlitz() {
        return Err(Error::InvalidInput("lattice rank is only available for the Carlitz module".into()));
    }
    Ok(usize::from(module.q() == 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::FiniteField;

    #[test]
    fn carlitz_lattice_ranks() {
        for (p, k, r) in [(2, 1, 1), (3, 1, 0), (2, 2, 0), (5, 1, 0)] {
            let f = FiniteField::new(p, k).unwrap();
            assert_eq!(carlitz_lattice_rank(&DrinfeldModule::carlitz(&f)).unwrap(), r);
        }
        let f = FiniteField::prime(2).unwrap();
        assert!(carlitz_lattice_rank(&DrinfeldModule::trivial(&f)).is_err());
    }
}
