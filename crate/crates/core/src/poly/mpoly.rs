//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::Rational;
use super::PolyError;

/// Exponent vector, one entry per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Descending degree-lexicographic order, used for printing and for matrix
/// columns.
pub fn deglex_desc(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.total_degree()
        .cmp(&a.total_degree())
        .then_with(|| b.0.cmp(&a.0))
}

/// All monomials of total degree `degree` in `arity` variables, in
/// descending deglex order (`x0^d` first).
pub fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Monomial> {
    fn rec(arity: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == arity {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(arity, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if arity == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(arity, degree, &mut Vec::with_capacity(arity), &mut out);
    out
}

/// All monomials of weighted degree `degree` for the given weights.
pub fn monomials_of_weighted_degree(weights: &[u32], degree: u64) -> Vec<Monomial> {
    fn rec(weights: &[u32], i: usize, left: u64, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == weights.len() {
            if left == 0 {
                out.push(Monomial(prefix.clone()));
            }
            return;
        }
        let w = weights[i] as u64;
        let max = left / w;
        for e in (0..=max).rev() {
            prefix.push(e as u32);
            rec(weights, i + 1, left - e * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, degree, &mut Vec::with_capacity(weights.len()), &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.arity() == other.arity() && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self::zero_owned(vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn zero_owned(vars: Vec<String>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_like(&self, c: Rational) -> Self {
        let mut p = Self::zero_owned(self.vars.clone());
        p.add_term(Monomial::one(self.arity()), c);
        p
    }

    pub fn var_like(&self, index: usize) -> Self {
        let mut p = Self::zero_owned(self.vars.clone());
        p.add_term(Monomial::var(self.arity(), index), Rational::one());
        p
    }

    pub fn var(vars: &[&str], index: usize) -> Self {
        Self::zero(vars).var_like(index)
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.arity(), "monomial arity mismatch");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Degree in a single variable (0 for the zero polynomial).
    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[index]).max().unwrap_or(0)
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.arity())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// The common weighted degree of all terms, if the polynomial is
    /// weighted-homogeneous. The zero polynomial returns `None`.
    pub fn weighted_homogeneous_degree(&self, weights: &[u32]) -> Option<u64> {
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(weights));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_owned(self.vars.clone());
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = self.constant_like(Rational::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn partial_derivative(&self, index: usize) -> Result<Self, PolyError> {
        if index >= self.arity() {
            return Err(PolyError::VarIndex {
                index,
                arity: self.arity(),
            });
        }
        let mut out = Self::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[index] -= 1;
            out.add_term(dm, c * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.arity(),
                found: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    term *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Substitutes a constant for one variable; the arity is unchanged and
    /// the variable no longer occurs.
    pub fn specialize(&self, index: usize, value: &Rational) -> Self {
        let mut out = Self::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[index];
            let mut nm = m.clone();
            nm.0[index] = 0;
            let factor = if e == 0 {
                Rational::one()
            } else {
                num_traits::pow(value.clone(), e as usize)
            };
            out.add_term(nm, c * factor);
        }
        out
    }

    /// Composes with `images[i]` substituted for variable `i`. All images
    /// must share one variable list, which becomes the result's.
    pub fn compose(&self, images: &[MPoly]) -> Result<MPoly, PolyError> {
        if images.len() != self.arity() {
            return Err(PolyError::ArityMismatch {
                expected: self.arity(),
                found: images.len(),
            });
        }
        let target_vars = match images.first() {
            Some(p) => p.vars.clone(),
            None => Vec::new(),
        };
        let mut power_cache: Vec<Vec<MPoly>> = images
            .iter()
            .map(|p| vec![p.constant_like(Rational::one())])
            .collect();
        let mut out = MPoly::zero_owned(target_vars);
        for (m, c) in &self.terms {
            let mut term = out.constant_like(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while power_cache[i].len() <= e as usize {
                    let next = power_cache[i].last().unwrap() * &images[i];
                    power_cache[i].push(next);
                }
                term = &term * &power_cache[i][e as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Drops variables that are known not to occur, re-indexing to `keep`.
    pub fn project_vars(&self, keep: &[usize]) -> Result<MPoly, PolyError> {
        let vars: Vec<String> = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let mut out = MPoly::zero_owned(vars);
        for (m, c) in &self.terms {
            for i in 0..self.arity() {
                if m.0[i] > 0 && !keep.contains(&i) {
                    return Err(PolyError::UnexpectedVariable(self.vars[i].clone()));
                }
            }
            out.add_term(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        Ok(out)
    }

    /// Re-embeds into a larger variable list; `positions[i]` is the new
    /// index of variable `i`.
    pub fn embed(&self, vars: &[String], positions: &[usize]) -> MPoly {
        let mut out = MPoly::zero_owned(vars.to_vec());
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &p) in positions.iter().enumerate() {
                e[p] = m.0[i];
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Terms in descending deglex order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| deglex_desc(a.0, b.0));
        v
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::parse::print_poly(self))
    }
}

fn check_same_arity(a: &MPoly, b: &MPoly) {
    assert_eq!(a.arity(), b.arity(), "polynomial arity mismatch");
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        check_same_arity(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        check_same_arity(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        check_same_arity(self, rhs);
        let mut out = MPoly::zero_owned(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
