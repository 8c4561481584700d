//! Polynomials in a Lie algebra's basis and their localizations.

mod locelem;
mod parse;
mod poly;

use std::sync::Arc;

pub use locelem::{DenominatorSet, LocElem};
pub use parse::{parse, parse_many};
pub use poly::{Monomial, Poly};

use crate::liealg::{ChevalleyBasis, LieElement};

/// Linear form `Σ c_i x_i` for a Lie algebra element.
pub fn linear_poly(x: &LieElement) -> Poly {
    let mut coeffs = vec![crate::rational::q(0); x.dim()];
    for (i, c) in x.iter() {
        coeffs[i] = c.clone();
    }
    Poly::linear(&coeffs)
}

/// Lie–Poisson structure on S(g): `{x_i, x_j} = [x_i, x_j]`.
#[derive(Clone, Debug)]
pub struct PoissonStructure {
    table: Vec<Vec<Poly>>,
}

impl PoissonStructure {
    pub fn new(basis: &ChevalleyBasis) -> Self {
        let n = basis.dim();
        let table = (0..n)
            .map(|i| (0..n).map(|j| linear_poly(&basis.bracket_basis(i, j))).collect())
            .collect();
        PoissonStructure { table }
    }

    pub fn dim(&self) -> usize {
        self.table.len()
    }

    /// Images of the coordinates under `{x_i, ·}`.
    pub fn hamiltonian_images(&self, i: usize) -> &[Poly] {
        &self.table[i]
    }

    /// Images of the coordinates under `{p, ·}` for a polynomial `p`.
    pub fn images_of(&self, p: &Poly) -> Vec<Poly> {
        let n = self.dim();
        (0..n)
            .map(|j| {
                let mut acc = Poly::zero(n);
                for i in 0..n {
                    let d = p.partial(i);
                    if !d.is_zero() && !self.table[i][j].is_zero() {
                        acc = acc.add(&d.mul(&self.table[i][j]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn bracket(&self, a: &LocElem, b: &LocElem) -> crate::Result<LocElem> {
        let set = DenominatorSet::join(a.set(), b.set())?;
        let mut acc = LocElem::zero(&set);
        for i in 0..self.dim() {
            let da = a.partial(i);
            if da.is_zero() {
                continue;
            }
            let db = b.derive(&self.table[i], None);
            acc = acc.try_add(&da.try_mul(&db)?)?;
        }
        Ok(acc.reduced())
    }
}

/// Universe whose variables are the basis symbols.
pub fn universe(basis: &ChevalleyBasis) -> Arc<DenominatorSet> {
    DenominatorSet::new(basis.symbols())
}
