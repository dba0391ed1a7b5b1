use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::IsolatingError;
use crate::poly::MPoly;
use crate::wps::WeightSystem;

pub const MAX_FIELD: u64 = 17;
pub const MAX_ARITY: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    FiniteLikely,
    PositiveDimensional,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub q: u64,
    /// Solutions in the affine cone, origin excluded.
    pub affine_solutions: u64,
    /// Points of the weighted projective space over `F_q`.
    pub projective_points: u64,
    /// Product of the largest equation degrees, one per projective
    /// dimension.
    pub bezout_bound: u64,
}

fn is_prime(q: u64) -> bool {
    q >= 2 && (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

fn reduce(c: &BigInt, q: u64) -> u64 {
    c.mod_floor(&BigInt::from(q)).to_u64().unwrap_or(0)
}

fn inverse(a: u64, q: u64) -> u64 {
    // q is prime, so a^(q-2) is the inverse
    let mut r = 1;
    for _ in 0..q - 2 {
        r = r * a % q;
    }
    r
}

struct Reduced {
    terms: Vec<(u64, Vec<u32>)>,
}

impl Reduced {
    fn new(p: &MPoly, q: u64) -> Result<Self, IsolatingError> {
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let den = reduce(c.denom(), q);
            if den == 0 {
                return Err(IsolatingError::BadReduction(q));
            }
            let v = reduce(c.numer(), q) * inverse(den, q) % q;
            if v != 0 {
                terms.push((v, m.exponents().to_vec()));
            }
        }
        Ok(Reduced { terms })
    }

    fn vanishes(&self, powers: &[Vec<u64>], q: u64) -> bool {
        let mut acc = 0;
        for (c, e) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t * powers[i][k as usize] % q;
                }
            }
            acc = (acc + t) % q;
        }
        acc == 0
    }
}

/// Counts the `F_q`-points of the system and compares them against the
/// number a finite set of points could have.
///
/// `nonzero` lists coordinates that must not vanish (an affine chart). The
/// verdict is exact for the reduction mod `q`; for the system over the
/// rationals it is only a likely answer, since reduction can change the
/// dimension.
pub fn finiteness_oracle(
    system: &[MPoly],
    weights: &WeightSystem,
    q: u64,
    nonzero: &[usize],
) -> Result<OracleReport, IsolatingError> {
    if !is_prime(q) {
        return Err(IsolatingError::NotPrime(q));
    }
    if q > MAX_FIELD {
        return Err(IsolatingError::FieldTooLarge(q));
    }
    let n = weights.len();
    if n > MAX_ARITY {
        return Err(IsolatingError::ArityTooLarge(n));
    }
    if nonzero.iter().any(|&i| i >= n) {
        return Err(IsolatingError::Malformed("chart index out of range".into()));
    }
    let mut degrees = Vec::new();
    let mut reduced = Vec::new();
    for p in system {
        if p.arity() != n {
            return Err(crate::poly::PolyError::ArityMismatch {
                expected: n,
                found: p.arity(),
            }
            .into());
        }
        if p.is_zero() {
            continue;
        }
        let d = p.weighted_homogeneous_degree(weights.as_slice()).ok_or_else(|| {
            IsolatingError::Malformed("equation is not weighted-homogeneous".into())
        })?;
        degrees.push(d);
        reduced.push(Reduced::new(p, q)?);
    }
    let max_exp: Vec<usize> = (0..n)
        .map(|i| system.iter().map(|p| p.degree_in(i) as usize).max().unwrap_or(0))
        .collect();

    let mut x = vec![0u64; n];
    let mut powers: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut affine = 0u64;
    // count of solutions weighted by the stabilizer size, summed over
    // solutions; divided by q - 1 at the end
    let mut weighted = 0u64;
    loop {
        if x.iter().any(|&v| v != 0) && nonzero.iter().all(|&i| x[i] != 0) {
            for i in 0..n {
                powers[i].clear();
                let mut p = 1;
                for _ in 0..=max_exp[i] {
                    powers[i].push(p);
                    p = p * x[i] % q;
                }
            }
            if reduced.iter().all(|r| r.vanishes(&powers, q)) {
                affine += 1;
                let g = (0..n)
                    .filter(|&i| x[i] != 0)
                    .fold(0u64, |g, i| g.gcd(&(weights.get(i) as u64)));
                weighted += g.gcd(&(q - 1));
            }
        }
        let mut i = 0;
        while i < n {
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let projective = weighted / (q - 1);

    let dim = n.saturating_sub(1);
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let bezout: u64 = if degrees.len() >= dim {
        degrees[..dim].iter().product()
    } else {
        0
    };
    let too_few = degrees.len() < dim && nonzero.is_empty();
    let verdict = if too_few || (degrees.len() >= dim && projective > bezout) {
        Verdict::PositiveDimensional
    } else if degrees.len() >= dim && projective < q {
        Verdict::FiniteLikely
    } else {
        Verdict::Inconclusive
    };
    Ok(OracleReport {
        verdict,
        q,
        affine_solutions: affine,
        projective_points: projective,
        bezout_bound: bezout,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isolating::{coordinate_names, isolating_polynomials};
    use crate::poly::rational::{int, Rational};
    use crate::poly::parse_poly_owned;
    use crate::wps::{generic_member, FamilyTable};

    fn p3(texts: &[&str]) -> Vec<MPoly> {
        let vars = coordinate_names(4);
        texts.iter().map(|t| parse_poly_owned(t, &vars).unwrap()).collect()
    }

    #[test]
    fn one_point_in_p3() {
        let w = WeightSystem::new(vec![1; 4]);
        let r = finiteness_oracle(&p3(&["x1 - 2*x0", "x2 - 3*x0", "x3 - 4*x0"]), &w, 7, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::FiniteLikely);
        assert_eq!(r.affine_solutions, 6);
        assert_eq!(r.projective_points, 1);
    }

    #[test]
    fn empty_system_is_positive_dimensional() {
        let w = WeightSystem::new(vec![1; 4]);
        let r = finiteness_oracle(&[], &w, 7, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::PositiveDimensional);
        assert_eq!(r.projective_points, (7u64.pow(4) - 1) / 6);
    }

    #[test]
    fn line_in_p3_is_caught_by_the_count() {
        let w = WeightSystem::new(vec![1; 4]);
        // x2 = x3 = 0 twice over: a line, 8 points over F_7
        let r = finiteness_oracle(&p3(&["x2", "x3", "x2 + x3"]), &w, 7, &[]).unwrap();
        assert_eq!(r.projective_points, 8);
        assert_eq!(r.verdict, Verdict::PositiveDimensional);
    }

    #[test]
    fn weighted_points_are_counted_once() {
        // P(1,2) over F_5: orbits (1:b) for b in F_5, and (0:1), (0:2) since
        // 2 is not a square mod 5
        let w = WeightSystem::new(vec![1, 2]);
        let r = finiteness_oracle(&[], &w, 5, &[]).unwrap();
        assert_eq!(r.projective_points, 7);
    }

    #[test]
    fn errors() {
        let w = WeightSystem::new(vec![1; 4]);
        assert_eq!(finiteness_oracle(&[], &w, 9, &[]), Err(IsolatingError::NotPrime(9)));
        assert_eq!(finiteness_oracle(&[], &w, 19, &[]), Err(IsolatingError::FieldTooLarge(19)));
        let w7 = WeightSystem::new(vec![1; 7]);
        assert_eq!(finiteness_oracle(&[], &w7, 7, &[]), Err(IsolatingError::ArityTooLarge(7)));
        let bad = p3(&["1/7*x0"]);
        assert_eq!(finiteness_oracle(&bad, &w, 7, &[]), Err(IsolatingError::BadReduction(7)));
    }

    #[test]
    fn family_6_member_with_isolating_set() {
        let fam = FamilyTable::embedded().hypersurface(6).unwrap();
        let f = generic_member(fam, 1).remove(0);
        // find an F_7 point of X with x != 0 by brute force over y, z, t, w
        let red = Reduced::new(&f, 7).unwrap();
        let mut point = None;
        'search: for y in 0..7u64 {
            for z in 0..7u64 {
                for t in 0..7u64 {
                    for w in 0..7u64 {
                        let x = [1, y, z, t, w];
                        let powers: Vec<Vec<u64>> = x
                            .iter()
                            .map(|&v| (0..=8).scan(1u64, |p, _| { let r = *p; *p = *p * v % 7; Some(r) }).collect())
                            .collect();
                        if red.vanishes(&powers, 7) {
                            point = Some(x);
                            break 'search;
                        }
                    }
                }
            }
        }
        let point: Vec<Rational> = point.expect("an F_7 point").iter().map(|&v| int(v as i64)).collect();
        let iso = isolating_polynomials(&fam.weights, &point, 0, &[4]).unwrap();
        let mut system = vec![f];
        system.extend(iso.polynomials);
        let r = finiteness_oracle(&system, &fam.weights, 7, &[]).unwrap();
        assert_eq!(r.verdict, Verdict::FiniteLikely, "{r:?}");
        assert!(r.projective_points >= 1);
    }
}
