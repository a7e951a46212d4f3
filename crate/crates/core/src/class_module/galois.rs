//! Coinvariants under `Gal(L'/L)` for constant-field extensions.

use crate::base::field::Elem;
use crate::base::linalg::{self, Matrix, Subspace};
use crate::base::ConstantField;
use crate::error::{Error, Result};

use super::finite::FiniteAModule;
use super::window::WindowModel;
use super::ClassModule;

/// Matrix of the generator `σ: c ↦ c^|L|` of `Gal(L'/L)` on the window of
/// `model` (over `L'`), acting coefficientwise.
pub fn frobenius_matrix(model: &WindowModel, small: &ConstantField) -> Result<Matrix> {
    let big = model.consts();
    if big.ambient() != small.ambient() || big.degree() % small.degree() != 0 {
        return Err(Error::InvalidInput("only constant-field extensions inside one tower are supported".into()));
    }
    if model.modulus().is_some() {
        return Err(Error::InvalidInput("coinvariants are taken on the window without modulus".into()));
    }
    let amb = big.ambient();
    let size = small.size();
    let n = model.window_dim();
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|j| {
            let mut e = vec![0; n];
            e[j] = 1;
            let x = model.lift(&e);
            let terms: Vec<(i64, Elem)> = x.terms().map(|(w, c)| (w, amb.pow(c, size))).collect();
            model.strip(&crate::base::Trunc::from_terms(&terms, model.m()))
        })
        .collect();
    Ok(linalg::from_columns(&cols, n))
}

/// `H'_G = V' / (U' + (σ - 1) V')` with the induced `t`-action.
pub fn galois_coinvariants(model: &WindowModel, h: &ClassModule, small: &ConstantField) -> Result<FiniteAModule> {
    let field = model.consts().base();
    let sigma = frobenius_matrix(model, small)?;
    let n = model.window_dim();
    let mut sub: Subspace = h.closure.clone();
    for j in 0..n {
        let mut col: Vec<Elem> = (0..n).map(|i| sigma[i][j]).collect();
        col[j] = field.sub(col[j], 1);
        sub.insert(field, &col);
    }
    Ok(FiniteAModule::from_quotient(field, &h.t_matrix, &sub))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::{FiniteField, Poly};
    use crate::class_module::compute_with_model;
    use crate::drinfeld::DrinfeldModule;

    #[test]
    fn frobenius_has_order_dividing_degree() {
        let f = FiniteField::prime(2).unwrap();
        let e = DrinfeldModule::new(&f, vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1])]).unwrap();
        let l0 = ConstantField::new(&f, 1).unwrap();
        let amb = FiniteField::new(2, 4).unwrap();
        let small = ConstantField::layer(&f, &amb, 2).unwrap();
        let big = ConstantField::layer(&f, &amb, 4).unwrap();
        let model = WindowModel::build(&e, &big).unwrap();
        let s = frobenius_matrix(&model, &small).unwrap();
        assert_eq!(linalg::mat_mul(&f, &s, &s), linalg::identity(4));
        assert_ne!(s, linalg::identity(4));
        let model0 = WindowModel::build(&e, &l0).unwrap();
        assert!(frobenius_matrix(&model0, &small).is_err());
    }

    #[test]
    fn trivial_group_leaves_module_unchanged() {
        let f = FiniteField::prime(2).unwrap();
        let e = DrinfeldModule::new(&f, vec![Poly(vec![0, 1]), Poly(vec![0, 0, 0, 1])]).unwrap();
        let l = ConstantField::new(&f, 2).unwrap();
        let mut model = WindowModel::build(&e, &l).unwrap();
        let h = compute_with_model(&mut model).unwrap();
        let g = galois_coinvariants(&model, &h, &l).unwrap();
        assert!(g.same_structure(&h.module));
    }
}
