//! Truncated arcs through a point and the derivatives of a polynomial along
//! them.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::mpoly::MPoly;
use super::rational::{self, Rational};
use super::PolyError;

/// An arc `c(s) = base + a*s + b*s^2` on the affine chart `x_chart = 1`,
/// optionally followed by terms in `s^3, s^4, …` in `higher`.
///
/// `certified_order` is the highest derivative order for which the caller
/// vouches that the truncated arc agrees with the intended analytic
/// coordinate. It defaults to 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Jet {
    pub chart: usize,
    #[serde(with = "rational::serde_vec")]
    pub base: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    pub linear: Vec<Rational>,
    #[serde(with = "rational::serde_vec")]
    pub quadratic: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "rational::serde_vec_vec")]
    pub higher: Vec<Vec<Rational>>,
    pub certified_order: u32,
}

pub const DEFAULT_CERTIFIED_ORDER: u32 = 2;

impl Jet {
    pub fn new(
        chart: usize,
        base: Vec<Rational>,
        linear: Vec<Rational>,
        quadratic: Vec<Rational>,
    ) -> Result<Self, PolyError> {
        let n = base.len();
        if linear.len() != n || quadratic.len() != n {
            return Err(PolyError::ArityMismatch {
                expected: n,
                found: if linear.len() != n { linear.len() } else { quadratic.len() },
            });
        }
        if chart >= n {
            return Err(PolyError::VarIndex { index: chart, arity: n });
        }
        if !base[chart].is_one() {
            return Err(PolyError::NotInChart { chart });
        }
        if !linear[chart].is_zero() || !quadratic[chart].is_zero() {
            return Err(PolyError::ArcMovesChart { chart });
        }
        if linear.iter().all(Zero::is_zero) {
            return Err(PolyError::ZeroDirection);
        }
        Ok(Jet {
            chart,
            base,
            linear,
            quadratic,
            higher: Vec::new(),
            certified_order: DEFAULT_CERTIFIED_ORDER,
        })
    }

    /// Appends the coefficient vectors of `s^3, s^4, …`. The certified
    /// order is left alone.
    pub fn with_higher_terms(mut self, terms: Vec<Vec<Rational>>) -> Result<Self, PolyError> {
        for t in &terms {
            if t.len() != self.arity() {
                return Err(PolyError::ArityMismatch {
                    expected: self.arity(),
                    found: t.len(),
                });
            }
            if !t[self.chart].is_zero() {
                return Err(PolyError::ArcMovesChart { chart: self.chart });
            }
        }
        self.higher = terms;
        Ok(self)
    }

    pub fn linear(chart: usize, base: Vec<Rational>, direction: Vec<Rational>) -> Result<Self, PolyError> {
        let zeros = vec![Rational::zero(); base.len()];
        Self::new(chart, base, direction, zeros)
    }

    /// Raises (or lowers) the order the caller certifies.
    pub fn with_certified_order(mut self, order: u32) -> Self {
        self.certified_order = order;
        self
    }

    pub fn arity(&self) -> usize {
        self.base.len()
    }

    pub fn is_linear(&self) -> bool {
        self.quadratic.iter().all(Zero::is_zero) && self.higher.iter().flatten().all(Zero::is_zero)
    }

    /// Coordinates of the arc as truncated power series in `s`.
    fn coordinate_series(&self, order: usize) -> Vec<Vec<Rational>> {
        (0..self.arity())
            .map(|i| {
                let mut c = vec![Rational::zero(); order + 1];
                c[0] = self.base[i].clone();
                if order >= 1 {
                    c[1] = self.linear[i].clone();
                }
                if order >= 2 {
                    c[2] = self.quadratic[i].clone();
                }
                for (k, t) in self.higher.iter().enumerate().take(order.saturating_sub(2)) {
                    c[k + 3] = t[i].clone();
                }
                c
            })
            .collect()
    }
}

fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Evaluates monomials along a fixed jet, caching coordinate powers.
pub struct ArcEvaluator<'a> {
    jet: &'a Jet,
    order: usize,
    powers: Vec<Vec<Vec<Rational>>>,
}

impl<'a> ArcEvaluator<'a> {
    pub fn new(jet: &'a Jet, order: u32) -> Self {
        let order = order as usize;
        let coords = jet.coordinate_series(order);
        let mut one = vec![Rational::zero(); order + 1];
        one[0] = Rational::one();
        let powers = coords.into_iter().map(|c| vec![one.clone(), c]).collect();
        ArcEvaluator { jet, order, powers }
    }

    fn power(&mut self, var: usize, e: u32) -> &[Rational] {
        let cache = &mut self.powers[var];
        while cache.len() <= e as usize {
            let next = series_mul(cache.last().unwrap(), &cache[1]);
            cache.push(next);
        }
        &cache[e as usize]
    }

    /// Series coefficients of `m(c(s))` up to `s^order`.
    pub fn monomial_series(&mut self, exps: &[u32]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.order + 1];
        acc[0] = Rational::one();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                let p = self.power(i, e).to_vec();
                acc = series_mul(&acc, &p);
            }
        }
        acc
    }

    /// Series coefficients of `p(c(s))` up to `s^order`.
    pub fn series(&mut self, p: &MPoly) -> Result<Vec<Rational>, PolyError> {
        if p.arity() != self.jet.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.jet.arity(),
                found: p.arity(),
            });
        }
        let mut acc = vec![Rational::zero(); self.order + 1];
        for (m, c) in p.terms() {
            let s = self.monomial_series(m.exponents());
            for (a, b) in acc.iter_mut().zip(s) {
                *a += c * b;
            }
        }
        Ok(acc)
    }
}

/// Derivatives `d^k/ds^k p(c(s))` at `s = 0` for `k = 0..=order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcDerivatives {
    pub values: Vec<Rational>,
    /// Smallest order beyond the jet's certified order, if any was asked for.
    pub uncertified_from: Option<u32>,
}

pub fn arc_derivatives(p: &MPoly, jet: &Jet, order: u32) -> Result<ArcDerivatives, PolyError> {
    let series = ArcEvaluator::new(jet, order).series(p)?;
    let values = series
        .into_iter()
        .enumerate()
        .map(|(k, c)| c * rational::factorial(k as u32))
        .collect();
    let uncertified_from = (order > jet.certified_order).then_some(jet.certified_order + 1);
    Ok(ArcDerivatives {
        values,
        uncertified_from,
    })
}
