//! Homogeneous slices `R_k` of the polynomial ring in three variables.

use num_traits::Zero;

use crate::coeff::Coeff;
use crate::error::{AlgebraError, Result};
use crate::linalg::rational_rank;
use crate::mpoly::{Exponents, MPoly};
use crate::rational::Rational;

/// Column order used inside a slice. Rank does not depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MonomialOrder {
    /// `x^k, x^{k-1}y, x^{k-1}z, …, z^k`
    #[default]
    Lex,
    Reversed,
}

pub fn slice_dim(k: u32) -> usize {
    let k = k as usize;
    (k + 2) * (k + 1) / 2
}

/// All degree-`k` monomials in `x, y, z`, lexicographically descending.
pub fn monomials(k: u32) -> Vec<Exponents> {
    let mut out = Vec::with_capacity(slice_dim(k));
    for a in (0..=k).rev() {
        for b in (0..=k - a).rev() {
            out.push([a, b, k - a - b]);
        }
    }
    out
}

/// Position of a degree-`k` monomial in the lexicographic basis.
pub fn lex_index(e: &Exponents) -> usize {
    let k = (e[0] + e[1] + e[2]) as usize;
    let r = k - e[0] as usize;
    r * (r + 1) / 2 + (r - e[1] as usize)
}

#[derive(Clone, Debug)]
pub struct GradedSlice {
    pub degree: u32,
    pub order: MonomialOrder,
    pub vectors: Vec<Vec<Rational>>,
}

impl GradedSlice {
    pub fn new(degree: u32) -> Self {
        Self::with_order(degree, MonomialOrder::Lex)
    }

    pub fn with_order(degree: u32, order: MonomialOrder) -> Self {
        GradedSlice { degree, order, vectors: Vec::new() }
    }

    pub fn basis_size(&self) -> usize {
        slice_dim(self.degree)
    }

    pub fn basis(&self) -> Vec<Exponents> {
        let mut m = monomials(self.degree);
        if self.order == MonomialOrder::Reversed {
            m.reverse();
        }
        m
    }

    pub fn column(&self, e: &Exponents) -> usize {
        let i = lex_index(e);
        match self.order {
            MonomialOrder::Lex => i,
            MonomialOrder::Reversed => self.basis_size() - 1 - i,
        }
    }

    /// Appends the coefficient vector of a homogeneous polynomial of this
    /// slice's degree.
    pub fn push_poly(&mut self, p: &MPoly<Rational>) -> Result<()> {
        if p.nvars() != 3 {
            return Err(AlgebraError::DomainMismatch("graded slices need 3 variables".into()));
        }
        let mut row = vec![Rational::zero(); self.basis_size()];
        for (e, c) in p.terms() {
            if e.iter().sum::<u32>() != self.degree {
                return Err(AlgebraError::DomainMismatch(format!(
                    "term of degree {} in slice of degree {}",
                    e.iter().sum::<u32>(),
                    self.degree
                )));
            }
            row[self.column(e)] = c.clone();
        }
        self.vectors.push(row);
        Ok(())
    }

    pub fn rank(&self) -> usize {
        graded_rank(&self.vectors)
    }
}

/// Exact rank of slice vectors by Bareiss elimination.
pub fn graded_rank(vectors: &[Vec<Rational>]) -> usize {
    rational_rank(vectors)
}

/// Coefficient vector of any polynomial coefficient type, for tests and
/// diagnostics.
pub fn coefficients_in_slice<C: Coeff>(p: &MPoly<C>, k: u32) -> Vec<C> {
    let mut row = vec![C::zero(); slice_dim(k)];
    for (e, c) in p.terms() {
        if e.iter().sum::<u32>() == k {
            row[lex_index(e)] = c.clone();
        }
    }
    row
}
