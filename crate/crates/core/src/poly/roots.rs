//! Rational roots of univariate systems.
//!
//! Univariate polynomials are dense coefficient vectors, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::mpoly::MPoly;
use super::rational::Rational;
use super::PolyError;

/// Divisor enumeration is skipped above this magnitude.
const DIVISOR_SEARCH_LIMIT: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonRoots {
    pub roots: Vec<Rational>,
    /// Set when the common factor may have roots that are not rational.
    pub nonrational_may_remain: bool,
}

pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect()
}

fn monic(p: Vec<Rational>) -> Vec<Rational> {
    let p = trim(p);
    match p.last() {
        None => p,
        Some(lead) => {
            let inv = lead.recip();
            p.into_iter().map(|c| c * &inv).collect()
        }
    }
}

/// Quotient and remainder.
pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
    let lead_inv = b[db].recip();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let f = &r[dr] * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            let sub = &f * c;
            r[dr - db + i] -= sub;
        }
        q[dr - db] = f;
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic gcd; the gcd of two zero polynomials is the empty vector.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(a)
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > DIVISOR_SEARCH_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Distinct rational roots of a nonzero polynomial, and whether the search
/// covered everything (`false` when coefficients were too large to search).
pub fn rational_roots(p: &[Rational]) -> (Vec<Rational>, bool) {
    let p = trim(p.to_vec());
    let Some(d) = degree(&p) else {
        return (Vec::new(), true);
    };
    let mut roots = Vec::new();
    let low = p.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let core = &p[low..=d];
    if core.len() == 1 {
        return (roots, true);
    }
    let l = core.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = core.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let ints: Vec<BigInt> = ints.into_iter().map(|c| c / &g).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) else {
        return (roots, false);
    };
    for num in &ps {
        for den in &qs {
            if num.gcd(den) != BigInt::one() {
                continue;
            }
            for sign in [1, -1] {
                let x = Rational::new(num * sign, den.clone());
                if eval(core, &x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    (roots, true)
}

/// Square-free part (monic).
pub fn square_free(p: &[Rational]) -> Vec<Rational> {
    let p = trim(p.to_vec());
    if degree(&p).unwrap_or(0) == 0 {
        return monic(p);
    }
    let g = gcd(&p, &derivative(&p));
    monic(divrem(&p, &g).0)
}

/// Common rational roots of univariate polynomials with the flag for
/// possible nonrational common roots.
pub fn dense_common_roots(ps: &[Vec<Rational>]) -> Option<CommonRoots> {
    let mut g: Vec<Rational> = Vec::new();
    for p in ps {
        g = gcd(&g, p);
    }
    if g.is_empty() {
        return None;
    }
    let sf = square_free(&g);
    let (roots, _complete) = rational_roots(&sf);
    let deg = degree(&sf).unwrap_or(0);
    Some(CommonRoots {
        nonrational_may_remain: deg > roots.len(),
        roots,
    })
}

/// Coefficients of a polynomial in which only variable `var` may occur.
pub fn to_dense(p: &MPoly, var: usize) -> Result<Vec<Rational>, PolyError> {
    let mut out = vec![Rational::zero(); p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        for (i, &e) in m.exponents().iter().enumerate() {
            if i != var && e > 0 {
                return Err(PolyError::UnexpectedVariable(p.vars()[i].clone()));
            }
        }
        out[m.exponents()[var] as usize] += c;
    }
    Ok(trim(out))
}

/// Common rational roots of polynomials that involve at most one variable
/// (the same one for all of them).
pub fn univariate_common_roots(ps: &[MPoly]) -> Result<CommonRoots, PolyError> {
    let mut var: Option<usize> = None;
    for p in ps {
        for v in p.support_vars() {
            match var {
                None => var = Some(v),
                Some(w) if w == v => {}
                Some(_) => return Err(PolyError::NotUnivariate),
            }
        }
    }
    let dense: Vec<Vec<Rational>> = match var {
        Some(v) => ps.iter().map(|p| to_dense(p, v)).collect::<Result<_, _>>()?,
        None => ps
            .iter()
            .map(|p| trim(vec![p.terms().map(|(_, c)| c.clone()).sum()]))
            .collect(),
    };
    dense_common_roots(&dense).ok_or(PolyError::AllZero)
}
