//! Sparse multivariate polynomials in two or three variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::coeff::{Coeff, FLOAT_SNAP_EPS};
use crate::error::{AlgebraError, Result};

/// Exponent vector. Unused trailing slots stay zero.
pub type Exponents = [u32; 3];

pub const MAX_VARS: usize = 3;

/// Coefficient domains that support division, needed for exact
/// polynomial division.
pub trait FieldCoeff: Coeff {
    fn checked_div(&self, other: &Self) -> Result<Self>;
}

impl FieldCoeff for crate::Rational {
    fn checked_div(&self, other: &Self) -> Result<Self> {
        if num_traits::Zero::is_zero(other) {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self / other)
    }
}

impl FieldCoeff for crate::QSqrt3 {
    fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }
}

impl FieldCoeff for f64 {
    fn checked_div(&self, other: &Self) -> Result<Self> {
        if *other == 0.0 {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self / other)
    }
}

#[derive(Clone, PartialEq)]
pub struct MPoly<C: Coeff> {
    nvars: usize,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coeff> fmt::Debug for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}](", self.nvars)?;
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}*{:?}", c, &e[..self.nvars])?;
        }
        write!(f, ")")
    }
}

impl<C: Coeff> fmt::Display for MPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        const NAMES: [&str; 3] = ["x", "y", "z"];
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:?})", c)?;
            for (v, &p) in e.iter().enumerate().take(self.nvars) {
                match p {
                    0 => {}
                    1 => write!(f, "*{}", NAMES[v])?,
                    _ => write!(f, "*{}^{}", NAMES[v], p)?,
                }
            }
        }
        Ok(())
    }
}

fn total(e: &Exponents) -> u32 {
    e.iter().sum()
}

impl<C: Coeff> MPoly<C> {
    pub fn zero(nvars: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&nvars), "nvars must be 1..=3");
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(nvars, [0; 3], c)
    }

    pub fn monomial(nvars: usize, exps: Exponents, c: C) -> Self {
        let mut p = Self::zero(nvars);
        debug_assert!(exps[nvars..].iter().all(|&e| e == 0));
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_index`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars);
        let mut e = [0; 3];
        e[index] = 1;
        Self::monomial(nvars, e, C::one())
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging
    /// repeated exponents.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, C)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p.normalize();
        p
    }

    fn add_term(&mut self, e: Exponents, c: C) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn normalize(&mut self) {
        if !C::EXACT {
            self.snap(FLOAT_SNAP_EPS);
        }
    }

    /// Drops coefficients whose magnitude is below `eps` times the largest
    /// magnitude. A no-op for the zero polynomial.
    pub fn snap(&mut self, eps: f64) {
        let scale = self.max_abs_coeff();
        if scale > 0.0 {
            self.terms.retain(|_, c| c.magnitude() >= eps * scale);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(total).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.degree();
        self.terms.keys().all(|e| total(e) == d)
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &C)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &Exponents) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::DomainMismatch(format!("{} variables vs {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out.normalize();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out.normalize();
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (e, a) in &self.terms {
            out.add_term(*e, a.clone() * c.clone());
        }
        out.normalize();
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.nvars, C::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(AlgebraError::VariableOutOfRange { index: var, nvars: self.nvars });
        }
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut f = *e;
            f[var] -= 1;
            out.add_term(f, c.clone() * C::from_i64(e[var] as i64));
        }
        Ok(out)
    }

    /// Horner-free direct evaluation in the coefficient domain.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(AlgebraError::PointLength { got: point.len(), expected: self.nvars });
        }
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, x) in point.iter().enumerate() {
                for _ in 0..e[v] {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Floating point evaluation, available for every coefficient domain.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.to_f64();
                for (v, x) in point.iter().enumerate() {
                    t *= x.powi(e[v] as i32);
                }
                t
            })
            .sum()
    }

    pub fn map_coeffs<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> MPoly<D> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn to_float(&self) -> MPoly<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    /// Reinterprets the polynomial in a ring with more variables.
    pub fn embed(&self, nvars: usize) -> Result<Self> {
        if nvars < self.nvars || nvars > MAX_VARS {
            return Err(AlgebraError::VariableOutOfRange { index: nvars, nvars: self.nvars });
        }
        Ok(MPoly { nvars, terms: self.terms.clone() })
    }

    /// Homogenizes a polynomial in `x, y` to total degree `d` in `x, y, z`.
    pub fn homogenize(&self, d: u32) -> Result<Self> {
        if self.nvars != 2 {
            return Err(AlgebraError::DomainMismatch(format!("homogenize expects 2 variables, got {}", self.nvars)));
        }
        let deg = self.degree();
        if deg > d {
            return Err(AlgebraError::DegreeTooSmall { degree: deg, target: d });
        }
        Ok(MPoly::from_terms(3, self.terms.iter().map(|(e, c)| ([e[0], e[1], d - total(e)], c.clone()))))
    }

    /// Sets `z = 1`.
    pub fn dehomogenize(&self) -> Result<Self> {
        if self.nvars != 3 {
            return Err(AlgebraError::DomainMismatch(format!("dehomogenize expects 3 variables, got {}", self.nvars)));
        }
        Ok(MPoly::from_terms(2, self.terms.iter().map(|(e, c)| ([e[0], e[1], 0], c.clone()))))
    }

    fn leading(&self) -> Option<(&Exponents, &C)> {
        self.terms.iter().next_back()
    }
}

impl<C: FieldCoeff> MPoly<C> {
    /// Division with remainder by a single divisor in lexicographic order.
    /// The remainder is zero exactly when `divisor` divides `self`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_same_ring(divisor)?;
        let (lead_e, lead_c) = divisor.leading().ok_or(AlgebraError::DivisionByZero)?;
        let mut quotient = Self::zero(self.nvars);
        let mut remainder = Self::zero(self.nvars);
        let mut rest = self.clone();
        while let Some((e, c)) = rest.leading().map(|(e, c)| (*e, c.clone())) {
            if (0..3).all(|v| e[v] >= lead_e[v]) {
                let q_e = [e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]];
                let q_c = c.checked_div(lead_c)?;
                let step = Self::monomial(self.nvars, q_e, q_c);
                rest = rest.checked_sub(&step.checked_mul(divisor)?)?;
                // In float domains cancellation may leave the leading term
                // behind; drop it so the loop terminates.
                if !C::EXACT {
                    rest.terms.remove(&e);
                }
                quotient = quotient.checked_add(&step)?;
            } else {
                rest.terms.remove(&e);
                remainder.add_term(e, c);
            }
        }
        Ok((quotient, remainder))
    }
}

impl<C: Coeff> Add for &MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: &MPoly<C>) -> MPoly<C> {
        self.checked_add(rhs).expect("polynomial ring mismatch")
    }
}

impl<C: Coeff> Sub for &MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: &MPoly<C>) -> MPoly<C> {
        self.checked_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl<C: Coeff> Mul for &MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: &MPoly<C>) -> MPoly<C> {
        self.checked_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl<C: Coeff> Neg for &MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<C: Coeff> Add for MPoly<C> {
    type Output = MPoly<C>;
    fn add(self, rhs: MPoly<C>) -> MPoly<C> {
        &self + &rhs
    }
}

impl<C: Coeff> Sub for MPoly<C> {
    type Output = MPoly<C>;
    fn sub(self, rhs: MPoly<C>) -> MPoly<C> {
        &self - &rhs
    }
}

impl<C: Coeff> Mul for MPoly<C> {
    type Output = MPoly<C>;
    fn mul(self, rhs: MPoly<C>) -> MPoly<C> {
        &self * &rhs
    }
}

impl<C: Coeff> Neg for MPoly<C> {
    type Output = MPoly<C>;
    fn neg(self) -> MPoly<C> {
        -&self
    }
}
