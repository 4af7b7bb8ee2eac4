//! Graded dimensions of the Milnor (Jacobian) algebra of a projective curve
//! and the invariants read off them: τ, ct, st, freeness, maximising status,
//! exponents, and MK numbers.

use std::fmt;
use std::str::FromStr;

use deltoid_algebra::{
    clear_denominators, int, lex_index, monomials, rat, slice_dim, MPoly, MonomialOrder, Rational, SparseEchelon,
};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CoreError, Result};

/// Consecutive equal values required before `τ` is read off.
pub const PLATEAU: usize = 4;

/// A reduced projective plane curve `f(x, y, z) = 0` of degree `d`.
#[derive(Clone, Debug)]
pub struct HomogeneousCurve {
    pub f: MPoly<Rational>,
    pub d: u32,
}

impl HomogeneousCurve {
    pub fn new(f: MPoly<Rational>) -> Result<Self> {
        let f = if f.nvars() == 3 { f } else { f.embed(3)? };
        if f.is_zero() || !f.is_homogeneous() {
            return Err(CoreError::NotHomogeneous);
        }
        let d = f.degree();
        Ok(HomogeneousCurve { f, d })
    }

    /// Homogenizes an affine curve in `x, y` with `z`.
    pub fn from_affine(f: &MPoly<Rational>) -> Result<Self> {
        Self::new(f.homogenize(f.degree())?)
    }

    pub fn default_kmax(&self) -> u32 {
        3 * self.d.saturating_sub(2) + 3
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedDims {
    pub d: u32,
    pub dims: Vec<usize>,
    pub smooth_dims: Vec<usize>,
}

/// Coefficient of `t^k` in `(1 + t + … + t^{d−2})³`.
pub fn smooth_dims(d: u32, k_max: u32) -> Vec<usize> {
    // the Milnor algebra of a smooth curve; the series is finite
    let n = d.saturating_sub(1) as usize;
    let mut series = vec![0usize; k_max as usize + 1];
    series[0] = 1;
    for _ in 0..3 {
        let mut next = vec![0usize; series.len()];
        for (i, &c) in series.iter().enumerate() {
            for j in 0..n {
                if i + j < next.len() {
                    next[i + j] += c;
                }
            }
        }
        series = next;
    }
    if n == 0 {
        series.iter_mut().for_each(|c| *c = 0);
    }
    series
}

pub fn milnor_dims(curve: &HomogeneousCurve, k_max: u32) -> Result<GradedDims> {
    milnor_dims_with_order(curve, k_max, MonomialOrder::Lex)
}

/// `dims[k] = C(k+2, 2) − rank span{m·∂f : deg m = k − d + 1}`, with the
/// slice columns laid out in `order`.
pub fn milnor_dims_with_order(curve: &HomogeneousCurve, k_max: u32, order: MonomialOrder) -> Result<GradedDims> {
    let partials = (0..3).map(|i| curve.f.diff(i)).collect::<std::result::Result<Vec<_>, _>>()?;
    if partials.iter().all(MPoly::is_zero) {
        return Err(CoreError::ZeroJacobian);
    }
    let partials: Vec<Vec<([u32; 3], BigInt)>> = partials.iter().map(integer_terms).collect();
    let d = curve.d;
    let dims = (0..=k_max)
        .into_par_iter()
        .map(|k| {
            if k + 1 < d {
                return slice_dim(k);
            }
            let width = slice_dim(k);
            let col = |e: &[u32; 3]| match order {
                MonomialOrder::Lex => lex_index(e),
                MonomialOrder::Reversed => width - 1 - lex_index(e),
            };
            let mut ech = SparseEchelon::new();
            for m in monomials(k + 1 - d) {
                for p in &partials {
                    let mut row: Vec<(usize, BigInt)> =
                        p.iter().map(|(e, c)| (col(&[e[0] + m[0], e[1] + m[1], e[2] + m[2]]), c.clone())).collect();
                    row.sort_by_key(|t| t.0);
                    ech.insert(row);
                    if ech.rank() == width {
                        return 0;
                    }
                }
            }
            width - ech.rank()
        })
        .collect();
    Ok(GradedDims { d, dims, smooth_dims: smooth_dims(d, k_max) })
}

fn integer_terms(p: &MPoly<Rational>) -> Vec<([u32; 3], BigInt)> {
    let coeffs: Vec<Rational> = p.terms().map(|(_, c)| c.clone()).collect();
    let ints = clear_denominators(&coeffs);
    p.terms().map(|(e, _)| *e).zip(ints).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdReport {
    pub d: u32,
    pub tau: usize,
    pub ct: u32,
    pub st: u32,
    #[serde(rename = "T")]
    pub t: u32,
    pub free: bool,
    pub maximising: bool,
    pub exponents: Option<(u32, u32)>,
    pub dims: Vec<usize>,
}

/// Upper bound on `τ` for a curve with only simple singularities:
/// `3m(m−1)+1` for `d = 2m`, `3m²+1` for `d = 2m+1`.
pub fn maximising_tau(d: u32) -> usize {
    let m = (d / 2) as usize;
    if d % 2 == 0 {
        3 * m * (m.max(1) - 1) + 1
    } else {
        3 * m * m + 1
    }
}

/// Exponents of a maximising curve.
pub fn maximising_exponents(d: u32) -> (u32, u32) {
    let m = d / 2;
    if d % 2 == 0 {
        (m - 1, m)
    } else {
        (m - 1, m + 1)
    }
}

/// Reads `τ`, `ct`, `st` off the dimensions. Simple singularities are
/// assumed when deciding the maximising flag.
pub fn thresholds(g: &GradedDims) -> Result<ThresholdReport> {
    let n = g.dims.len();
    let k_max = n.saturating_sub(1) as u32;
    if n < PLATEAU {
        return Err(CoreError::NotStabilized { k_max });
    }
    let tau = g.dims[n - 1];
    if g.dims[n - PLATEAU..].iter().any(|&v| v != tau) {
        return Err(CoreError::NotStabilized { k_max });
    }
    let st = (0..n).rev().take_while(|&k| g.dims[k] == tau).last().unwrap_or(n - 1) as u32;
    let ct = match (0..n).find(|&k| g.dims[k] != g.smooth_dims[k]) {
        Some(0) => 0,
        Some(k) => (k - 1) as u32,
        None => k_max,
    };
    let t = 3 * g.d.saturating_sub(2);
    let free = ct + st <= t + 1;
    let maximising = free && tau == maximising_tau(g.d);
    Ok(ThresholdReport {
        d: g.d,
        tau,
        ct,
        st,
        t,
        free,
        maximising,
        exponents: maximising.then(|| maximising_exponents(g.d)),
        dims: g.dims.clone(),
    })
}

pub fn threshold_report(curve: &HomogeneousCurve, k_max: Option<u32>) -> Result<ThresholdReport> {
    thresholds(&milnor_dims(curve, k_max.unwrap_or_else(|| curve.default_kmax()))?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    A,
    D,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SingularitySpec {
    pub kind: SingularityKind,
    pub index: u32,
    pub count: u32,
}

impl SingularitySpec {
    pub fn new(kind: SingularityKind, index: u32, count: u32) -> Result<Self> {
        let ok = match kind {
            SingularityKind::A => index >= 1,
            SingularityKind::D => index >= 4,
            SingularityKind::E => (6..=8).contains(&index),
        };
        if !ok {
            return Err(CoreError::BadSingularity(format!("{kind:?}{index}")));
        }
        Ok(SingularitySpec { kind, index, count })
    }

    /// `ε` of one singularity of this type.
    pub fn epsilon(&self) -> Rational {
        let k = self.index as i64;
        match (self.kind, k) {
            (SingularityKind::A, _) => rat(k, k + 1),
            (SingularityKind::D, _) => rat(4 * k - 9, 4 * k - 8),
            (SingularityKind::E, 6) => rat(23, 24),
            (SingularityKind::E, 7) => rat(47, 48),
            (SingularityKind::E, _) => rat(119, 120),
        }
    }
}

impl fmt::Display for SingularitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count != 1 {
            write!(f, "{}", self.count)?;
        }
        write!(f, "{:?}{}", self.kind, self.index)
    }
}

/// Parses `"3E7+3D6+4D4+6A1"`; `⊕` is accepted as a separator.
pub fn parse_singularities(s: &str) -> Result<Vec<SingularitySpec>> {
    let bad = || CoreError::BadSingularity(s.to_string());
    let cleaned: String = s.replace('⊕', "+").chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(bad());
    }
    cleaned
        .split('+')
        .map(|part| {
            let pos = part.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(bad)?;
            let count = if pos == 0 { 1 } else { part[..pos].parse().map_err(|_| bad())? };
            let kind = match &part[pos..pos + 1] {
                "A" | "a" => SingularityKind::A,
                "D" | "d" => SingularityKind::D,
                "E" | "e" => SingularityKind::E,
                _ => return Err(bad()),
            };
            let index = part[pos + 1..].parse().map_err(|_| bad())?;
            SingularitySpec::new(kind, index, count)
        })
        .collect()
}

impl FromStr for SingularitySpec {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match parse_singularities(s)?.as_slice() {
            [one] => Ok(*one),
            _ => Err(CoreError::BadSingularity(s.to_string())),
        }
    }
}

/// `(Σ count·k, 3·Σ count·(k + ε))`.
pub fn mk_number(specs: &[SingularitySpec]) -> (u64, Rational) {
    let mut tau = 0u64;
    let mut m = Rational::zero();
    for s in specs {
        tau += s.count as u64 * s.index as u64;
        m += (int(s.index as i64) + s.epsilon()) * int(s.count as i64);
    }
    (tau, m * int(3))
}

/// `m(C)` of an MK curve of degree `d`: `(d/2)(5d − 6)`.
pub fn mk_curve_value(d: u32) -> Rational {
    rat(d as i64 * (5 * d as i64 - 6), 2)
}

/// `(3/4)d² − (3/2)d + 1` for even `d`.
pub fn hirzebruch_bound(d: u32) -> Result<u64> {
    if d % 2 == 1 {
        return Err(CoreError::OddDegree(d));
    }
    if d < 2 {
        return Err(CoreError::DegreeTooLow { d, min: 2 });
    }
    let d = d as u64;
    Ok(3 * d * d / 4 - 3 * d / 2 + 1)
}
