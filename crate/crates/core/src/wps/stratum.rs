//! Singular points of a weighted complete intersection on a coordinate
//! stratum of dimension at most one.
//!
//! The stratum is cut into coordinate tori. On each torus the first
//! nonzero coordinate is set to 1 and the remaining system, in at most two
//! affine variables, is solved exactly: one variable by univariate gcds,
//! two variables by resultants followed by back substitution.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{CoordinateStratum, WeightSystem, WpsError};
use crate::poly::rational::{self, Rational};
use crate::poly::roots::{dense_common_roots, to_dense, trim};
use crate::poly::{MPoly, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumPoints {
    /// Singular points away from the singular locus of the ambient space.
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Vec<Rational>>,
    /// Singular points that are quotient singularities of the ambient space.
    #[serde(serialize_with = "ser_points")]
    pub quotient_points: Vec<Vec<Rational>>,
    pub nonrational_may_remain: bool,
}

fn ser_points<S: serde::Serializer>(pts: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        pts.iter()
            .map(|p| p.iter().map(rational::to_string).collect::<Vec<_>>()),
    )
}

/// Rational points of the stratum where the restricted polynomials and all
/// their partial derivatives in the free coordinates vanish.
pub fn stratum_singular_points(
    fs: &[MPoly],
    weights: &WeightSystem,
    stratum: &CoordinateStratum,
) -> Result<StratumPoints, WpsError> {
    let n = weights.len();
    for f in fs {
        if f.arity() != n {
            return Err(crate::poly::PolyError::ArityMismatch {
                expected: n,
                found: f.arity(),
            }
            .into());
        }
    }
    if stratum.zero.iter().any(|&i| i >= n) || stratum.chart.is_some_and(|c| c >= n) {
        return Err(WpsError::InvalidStratum("coordinate index out of range".into()));
    }
    let free: Vec<usize> = (0..n).filter(|i| !stratum.zero.contains(i)).collect();
    let zero = Rational::zero();
    let restricted: Vec<MPoly> = fs
        .iter()
        .map(|f| stratum.zero.iter().fold(f.clone(), |g, &i| g.specialize(i, &zero)))
        .filter(|g| !g.is_zero())
        .collect();
    let dim = free.len() as i64 - 1 - restricted.len() as i64;
    if dim > 1 {
        return Err(WpsError::StratumTooLarge(dim));
    }
    if free.len() > 3 {
        return Err(WpsError::TooManyFreeCoordinates(free.len()));
    }
    let mut eqs = restricted.clone();
    for g in &restricted {
        for &i in &free {
            let d = g.partial_derivative(i)?;
            if !d.is_zero() {
                eqs.push(d);
            }
        }
    }

    let mut out = StratumPoints {
        points: Vec::new(),
        quotient_points: Vec::new(),
        nonrational_may_remain: false,
    };
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for mask in 1u32..(1 << free.len()) {
        let support: Vec<usize> = free
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &i)| i)
            .collect();
        if let Some(c) = stratum.chart {
            if !support.contains(&c) {
                continue;
            }
        }
        let u = support[0];
        let rest = &support[1..];
        let local: Vec<MPoly> = eqs
            .iter()
            .map(|e| {
                let mut g = e.specialize(u, &Rational::one());
                for &i in &free {
                    if !support.contains(&i) {
                        g = g.specialize(i, &zero);
                    }
                }
                g
            })
            .collect();
        let mut point = vec![Rational::zero(); n];
        point[u] = Rational::one();
        match rest {
            [] => {
                if local.iter().all(MPoly::is_zero) {
                    found.push(point);
                }
            }
            [v] => {
                let (roots, flag) = solve_one(&local, *v)?;
                out.nonrational_may_remain |= flag;
                for r in roots {
                    let mut p = point.clone();
                    p[*v] = r;
                    found.push(p);
                }
            }
            [v, w] => {
                let (roots, flag) = solve_two(&local, *v, *w)?;
                out.nonrational_may_remain |= flag;
                for (a, b) in roots {
                    let mut p = point.clone();
                    p[*v] = a;
                    p[*w] = b;
                    found.push(p);
                }
            }
            _ => unreachable!("at most three free coordinates"),
        }
    }

    for p in found {
        let p = canonical(p, weights);
        let support: Vec<usize> = (0..n).filter(|&i| !p[i].is_zero()).collect();
        let bucket = if weights.is_quotient_support(&support) {
            &mut out.quotient_points
        } else {
            &mut out.points
        };
        if !bucket.contains(&p) {
            bucket.push(p);
        }
    }
    out.points.sort();
    out.quotient_points.sort();
    Ok(out)
}

/// Of a point and its image under the scaling by −1, the smaller one. Only
/// relevant when the normalized coordinate has even weight.
fn canonical(p: Vec<Rational>, weights: &WeightSystem) -> Vec<Rational> {
    let lead = p.iter().position(|c| !c.is_zero()).unwrap();
    if weights.get(lead) % 2 != 0 {
        return p;
    }
    let q: Vec<Rational> = p
        .iter()
        .enumerate()
        .map(|(i, c)| if weights.get(i) % 2 == 0 { c.clone() } else { -c.clone() })
        .collect();
    p.min(q)
}

/// Nonzero common roots in variable `v`.
fn solve_one(eqs: &[MPoly], v: usize) -> Result<(Vec<Rational>, bool), WpsError> {
    let dense: Vec<Vec<Rational>> = eqs.iter().map(|e| to_dense(e, v)).collect::<Result<_, _>>()?;
    let common = dense_common_roots(&dense).ok_or(WpsError::NotFinite)?;
    let roots = common.roots.into_iter().filter(|r| !r.is_zero()).collect();
    Ok((roots, common.nonrational_may_remain))
}

type Bivariate = Vec<Vec<Rational>>;

/// Coefficients in `w` (outer index), each a polynomial in `v`.
fn to_bivariate(p: &MPoly, v: usize, w: usize) -> Bivariate {
    let mut out: Bivariate = vec![Vec::new(); p.degree_in(w) as usize + 1];
    for (m, c) in p.terms() {
        let e = m.exponents();
        let slot = &mut out[e[w] as usize];
        let dv = e[v] as usize;
        if slot.len() <= dv {
            slot.resize(dv + 1, Rational::zero());
        }
        slot[dv] += c;
    }
    out.into_iter().map(trim).collect()
}

fn eval_coeffs(p: &Bivariate, x: &Rational) -> Vec<Rational> {
    p.iter().map(|c| crate::poly::roots::eval(c, x)).collect()
}

fn sylvester_det(p: &[Rational], q: &[Rational]) -> Rational {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut s = RatMatrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in p.iter().rev().enumerate() {
            s.set(r, r + k, c.clone());
        }
    }
    for r in 0..m {
        for (k, c) in q.iter().rev().enumerate() {
            s.set(n + r, r + k, c.clone());
        }
    }
    s.determinant()
}

/// Newton interpolation through `(i, ys[i])`, returned in the monomial basis.
fn interpolate(ys: &[Rational]) -> Vec<Rational> {
    let n = ys.len();
    let xs: Vec<Rational> = (0..n).map(|i| Rational::from_integer((i as i64).into())).collect();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut poly = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let mut next = vec![Rational::zero(); n];
        for k in 0..n {
            if poly[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &poly[k];
            }
            next[k] -= &poly[k] * &xs[i];
        }
        next[0] += &coef[i];
        poly = next;
    }
    trim(poly)
}

/// Resultant with respect to `w`, as a polynomial in `v`.
fn resultant(p: &Bivariate, q: &Bivariate) -> Vec<Rational> {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let deg_v = |b: &Bivariate| b.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0);
    let bound = m * deg_v(q) + n * deg_v(p);
    let ys: Vec<Rational> = (0..=bound)
        .map(|i| {
            let x = Rational::from_integer((i as i64).into());
            sylvester_det(&eval_coeffs(p, &x), &eval_coeffs(q, &x))
        })
        .collect();
    interpolate(&ys)
}

/// Common zeros with both `v` and `w` nonzero.
fn solve_two(eqs: &[MPoly], v: usize, w: usize) -> Result<(Vec<(Rational, Rational)>, bool), WpsError> {
    let live: Vec<&MPoly> = eqs.iter().filter(|e| !e.is_zero()).collect();
    let mut in_v: Vec<Vec<Rational>> = Vec::new();
    let mut with_w: Vec<Bivariate> = Vec::new();
    for e in &live {
        let b = to_bivariate(e, v, w);
        if b.len() == 1 {
            in_v.push(b.into_iter().next().unwrap());
        } else {
            with_w.push(b);
        }
    }
    for i in 0..with_w.len() {
        for j in i + 1..with_w.len() {
            let r = resultant(&with_w[i], &with_w[j]);
            if !r.is_empty() {
                in_v.push(r);
            }
        }
    }
    let common = dense_common_roots(&in_v).ok_or(WpsError::NotFinite)?;
    let mut flag = common.nonrational_may_remain;
    let mut out = Vec::new();
    for a in common.roots.into_iter().filter(|a| !a.is_zero()) {
        let sub: Vec<MPoly> = live.iter().map(|e| e.specialize(v, &a)).collect();
        let (bs, f) = solve_one(&sub, w)?;
        flag |= f;
        out.extend(bs.into_iter().map(|b| (a.clone(), b)));
    }
    Ok((out, flag))
}
