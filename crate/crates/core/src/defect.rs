//! Defect of a double solid branched along a surface `B ⊂ ℙ³` of degree
//! `2r` with only `A_m` singular points.
//!
//! Each `A_m` point `p` imposes `⌈m/2⌉` linear conditions on forms `H` of
//! degree `3r − 4`: `H(p) = 0` and `∂^j H/∂x_1^j (p) = 0` for
//! `1 ≤ j ≤ ⌈m/2⌉ − 1`, where `x_1` is the analytic coordinate in the
//! normal form `x_1^{m+1} + x_2² + x_3² + …`. The derivatives are taken
//! along the arc `x_2 = x_3 = 0`, given as a [`Jet`]. The defect is the
//! number of these conditions that fail to be independent.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::poly::rational::{self, Rational};
use crate::poly::{monomials_of_degree, parse_poly, parse_poly_owned, ArcEvaluator, Jet, MPoly, Monomial, PolyError, RatMatrix};

pub const VARIABLES: [&str; 4] = ["x", "y", "z", "t"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DefectError {
    #[error("r must be at least 2, got {0}")]
    RTooSmall(u32),
    #[error("the branch surface must be a form of degree {expected}")]
    BranchDegree { expected: u32 },
    #[error("point {0} is not a point of P^3")]
    BadPoint(usize),
    #[error("point {0} does not lie on the branch surface")]
    NotOnBranch(usize),
    #[error("point {0} is not a singular point of the branch surface")]
    NotSingular(usize),
    #[error("point {0} has type A_0; the type index must be at least 1")]
    BadType(usize),
    #[error("point {0} needs a direction for its derivative conditions")]
    MissingDirection(usize),
    #[error("the direction of point {0} does not start at the point")]
    DirectionMismatch(usize),
    #[error(
        "point {point} needs derivatives up to order {needed} but its jet is \
         certified only to order {certified}"
    )]
    JetNotCertified {
        point: usize,
        needed: u32,
        certified: u32,
    },
    #[error("bad config: {0}")]
    Config(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `h⁰(ℙ³, O(3r − 4)) = (3r − 1)(3r − 2)(r − 1)/2`.
pub fn h0_dim(r: u32) -> Result<u64, DefectError> {
    if r < 2 {
        return Err(DefectError::RTooSmall(r));
    }
    let r = r as u64;
    Ok((3 * r - 1) * (3 * r - 2) * (r - 1) / 2)
}

/// Number of conditions an `A_m` point imposes.
pub fn conditions_for(m: u32) -> u32 {
    m.div_ceil(2)
}

pub fn mu<I: IntoIterator<Item = u32>>(types: I) -> u64 {
    types.into_iter().map(|m| conditions_for(m) as u64).sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSingularPoint {
    pub coords: Vec<Rational>,
    /// `m` for an `A_m` point.
    pub m: u32,
    /// The arc `x_2 = x_3 = 0`; needed when `m ≥ 3`.
    pub direction: Option<Jet>,
}

impl BranchSingularPoint {
    pub fn new(coords: Vec<Rational>, m: u32, direction: Option<Jet>) -> Self {
        BranchSingularPoint {
            coords,
            m,
            direction,
        }
    }

    fn chart(&self) -> usize {
        match &self.direction {
            Some(j) => j.chart,
            None => self.coords.iter().position(|c| !c.is_zero()).unwrap_or(0),
        }
    }

    /// Coordinates scaled so that the chart coordinate is 1.
    fn normalized(&self) -> Option<Vec<Rational>> {
        let c = self.coords.get(self.chart())?;
        if c.is_zero() {
            return None;
        }
        Some(self.coords.iter().map(|x| x / c).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchConfig {
    pub r: u32,
    pub branch: MPoly,
    pub points: Vec<BranchSingularPoint>,
}

impl BranchConfig {
    /// Checks the degree of `B` and that every point is a singular point of
    /// it with a direction starting there.
    pub fn new(r: u32, branch: MPoly, points: Vec<BranchSingularPoint>) -> Result<Self, DefectError> {
        if r < 2 {
            return Err(DefectError::RTooSmall(r));
        }
        let expected = 2 * r;
        let homogeneous = branch.arity() == 4
            && !branch.is_zero()
            && branch.terms().all(|(m, _)| m.total_degree() == expected);
        if !homogeneous {
            return Err(DefectError::BranchDegree { expected });
        }
        let partials: Vec<MPoly> = (0..4)
            .map(|i| branch.partial_derivative(i))
            .collect::<Result<_, _>>()?;
        for (i, p) in points.iter().enumerate() {
            if p.m == 0 {
                return Err(DefectError::BadType(i));
            }
            let base = p.normalized().ok_or(DefectError::BadPoint(i))?;
            if base.len() != 4 {
                return Err(DefectError::BadPoint(i));
            }
            if !branch.eval(&base)?.is_zero() {
                return Err(DefectError::NotOnBranch(i));
            }
            for d in &partials {
                if !d.eval(&base)?.is_zero() {
                    return Err(DefectError::NotSingular(i));
                }
            }
            if let Some(j) = &p.direction {
                if j.base != base {
                    return Err(DefectError::DirectionMismatch(i));
                }
            }
        }
        Ok(BranchConfig { r, branch, points })
    }

    pub fn mu(&self) -> u64 {
        mu(self.points.iter().map(|p| p.m))
    }

    pub fn from_json(text: &str) -> Result<Self, DefectError> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| DefectError::Config(e.to_string()))?;
        file.into_config()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    r: u32,
    branch: String,
    points: Vec<PointFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointFile {
    coords: Vec<String>,
    #[serde(rename = "type")]
    m: u32,
    direction: Option<DirectionFile>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectionFile {
    chart: usize,
    /// Coordinate name to a polynomial in `s` without constant term.
    arc: BTreeMap<String, String>,
    certified_order: Option<u32>,
}

impl ConfigFile {
    fn into_config(self) -> Result<BranchConfig, DefectError> {
        let branch = parse_poly(&self.branch, &VARIABLES)?;
        let mut points = Vec::new();
        for (i, p) in self.points.into_iter().enumerate() {
            let coords: Vec<Rational> = p
                .coords
                .iter()
                .map(|c| rational::parse_rational(c).map_err(|e| DefectError::Config(e.to_string())))
                .collect::<Result<_, _>>()?;
            if coords.len() != 4 {
                return Err(DefectError::BadPoint(i));
            }
            let direction = match p.direction {
                None => None,
                Some(d) => Some(d.into_jet(&coords, i)?),
            };
            points.push(BranchSingularPoint::new(coords, p.m, direction));
        }
        BranchConfig::new(self.r, branch, points)
    }
}

impl DirectionFile {
    fn into_jet(self, coords: &[Rational], point: usize) -> Result<Jet, DefectError> {
        let c = coords.get(self.chart).ok_or(DefectError::BadPoint(point))?;
        if c.is_zero() {
            return Err(DefectError::DirectionMismatch(point));
        }
        let base: Vec<Rational> = coords.iter().map(|x| x / c).collect();
        let mut by_power: Vec<Vec<Rational>> = Vec::new();
        for (name, text) in &self.arc {
            let var = VARIABLES
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| DefectError::Config(format!("unknown coordinate {name}")))?;
            let series = parse_poly_owned(text, &["s".to_string()])?;
            for (m, coeff) in series.terms() {
                let k = m.exponents()[0] as usize;
                if k == 0 {
                    return Err(DefectError::Config(format!("arc for {name} has a constant term")));
                }
                while by_power.len() < k {
                    by_power.push(vec![Rational::zero(); 4]);
                }
                by_power[k - 1][var] = coeff.clone();
            }
        }
        while by_power.len() < 2 {
            by_power.push(vec![Rational::zero(); 4]);
        }
        let higher = by_power.split_off(2);
        let quadratic = by_power.pop().expect("two entries");
        let linear = by_power.pop().expect("one entry");
        let mut jet = Jet::new(self.chart, base, linear, quadratic)?.with_higher_terms(higher)?;
        if let Some(k) = self.certified_order {
            jet = jet.with_certified_order(k);
        }
        Ok(jet)
    }
}

/// Degree `3r − 4` monomials in `x, y, z, t`, in the column order used by
/// [`condition_matrix`].
pub fn columns(r: u32) -> Result<Vec<Monomial>, DefectError> {
    h0_dim(r)?;
    Ok(monomials_of_degree(4, 3 * r - 4))
}

fn point_rows(
    index: usize,
    p: &BranchSingularPoint,
    cols: &[Monomial],
) -> Result<Vec<Vec<Rational>>, DefectError> {
    let count = conditions_for(p.m);
    let top = count - 1;
    let base = p.normalized().ok_or(DefectError::BadPoint(index))?;
    if top == 0 {
        let row = cols
            .iter()
            .map(|m| {
                m.exponents()
                    .iter()
                    .zip(&base)
                    .map(|(&e, c)| num_traits::pow(c.clone(), e as usize))
                    .product()
            })
            .collect();
        return Ok(vec![row]);
    }
    let jet = p.direction.as_ref().ok_or(DefectError::MissingDirection(index))?;
    if top > jet.certified_order {
        return Err(DefectError::JetNotCertified {
            point: index,
            needed: top,
            certified: jet.certified_order,
        });
    }
    let mut eval = ArcEvaluator::new(jet, top);
    let series: Vec<Vec<Rational>> = cols.iter().map(|m| eval.monomial_series(m.exponents())).collect();
    Ok((0..=top as usize)
        .map(|j| {
            let f = rational::factorial(j as u32);
            series.iter().map(|s| &s[j] * &f).collect()
        })
        .collect())
}

/// One row per condition, points in order and `C_{p,0}, C_{p,1}, …` within
/// a point; one column per monomial of [`columns`].
pub fn condition_matrix(cfg: &BranchConfig) -> Result<RatMatrix, DefectError> {
    let cols = columns(cfg.r)?;
    let mut rows = Vec::new();
    for (i, p) in cfg.points.iter().enumerate() {
        rows.extend(point_rows(i, p, &cols)?);
    }
    Ok(RatMatrix::from_rows(cols.len(), rows))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub mu: u64,
    pub h0: u64,
    pub rank: u64,
    pub delta: u64,
    pub factorial: bool,
}

/// `δ = μ − rank`, since the forms meeting the conditions have dimension
/// `h⁰ − rank`.
pub fn defect(cfg: &BranchConfig) -> Result<DefectReport, DefectError> {
    let m = condition_matrix(cfg)?;
    let rank = m.rank() as u64;
    let mu = cfg.mu();
    let delta = mu - rank;
    Ok(DefectReport {
        mu,
        h0: h0_dim(cfg.r)?,
        rank,
        delta,
        factorial: delta == 0,
    })
}

/// The counting conditions factoriality forces, checked without the
/// matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScreenReport {
    pub mu: u64,
    pub h0: u64,
    /// `⌈m/2⌉ ≤ 3r − 3` for every point.
    pub orders_ok: bool,
    /// `μ ≤ h⁰`.
    pub count_ok: bool,
    /// `max(0, μ − h⁰)`.
    pub delta_lower_bound: u64,
    /// Whether the conditions alone prove `δ > 0`.
    pub not_factorial: bool,
}

pub fn screen(r: u32, types: &[u32]) -> Result<ScreenReport, DefectError> {
    let h0 = h0_dim(r)?;
    let mu = mu(types.iter().copied());
    let orders_ok = types.iter().all(|&m| conditions_for(m) <= 3 * r - 3);
    let count_ok = mu <= h0;
    Ok(ScreenReport {
        mu,
        h0,
        orders_ok,
        count_ok,
        delta_lower_bound: mu.saturating_sub(h0),
        not_factorial: !orders_ok || !count_ok,
    })
}

/// Necessary test for an `A`-type point: `B` is singular at `p` and the
/// Hessian on the chart of `p` has rank at least 2.
pub fn check_is_a_type(branch: &MPoly, p: &[Rational]) -> Result<bool, DefectError> {
    let chart = p.iter().position(|c| !c.is_zero()).ok_or(DefectError::BadPoint(0))?;
    let base: Vec<Rational> = p.iter().map(|x| x / &p[chart]).collect();
    if !branch.eval(&base)?.is_zero() {
        return Err(DefectError::NotOnBranch(0));
    }
    for i in 0..4 {
        if !branch.partial_derivative(i)?.eval(&base)?.is_zero() {
            return Ok(false);
        }
    }
    let free: Vec<usize> = (0..4).filter(|&i| i != chart).collect();
    let mut rows = Vec::new();
    for &i in &free {
        let di = branch.partial_derivative(i)?;
        let mut row = Vec::new();
        for &j in &free {
            row.push(di.partial_derivative(j)?.eval(&base)?);
        }
        rows.push(row);
    }
    Ok(RatMatrix::from_rows(3, rows).rank() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;
    use proptest::prelude::*;

    fn b(text: &str) -> MPoly {
        parse_poly(text, &VARIABLES).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn along_t(coords: Vec<Rational>, chart: usize) -> Jet {
        let base: Vec<Rational> = coords.iter().map(|x| x / &coords[chart]).collect();
        Jet::linear(chart, base, pt(&[0, 0, 0, 1])).unwrap()
    }

    fn a_point(coords: Vec<Rational>, m: u32) -> BranchSingularPoint {
        let chart = coords.iter().position(|c| !c.is_zero()).unwrap();
        let dir = (conditions_for(m) > 1).then(|| along_t(coords.clone(), chart));
        BranchSingularPoint::new(coords, m, dir)
    }

    #[test]
    fn h0_examples() {
        assert_eq!(h0_dim(2).unwrap(), 10);
        assert_eq!(h0_dim(3).unwrap(), 56);
        assert_eq!(h0_dim(4).unwrap(), 165);
        assert_eq!(h0_dim(1), Err(DefectError::RTooSmall(1)));
        for r in 2..=5 {
            assert_eq!(columns(r).unwrap().len() as u64, h0_dim(r).unwrap());
        }
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu([1]), 1);
        assert_eq!(mu([11, 1]), 7);
        assert_eq!(mu([5; 5]), 15);
    }

    #[test]
    fn one_node_at_a_vertex() {
        let cfg = BranchConfig::new(2, b("x^2*y*z + y^4 + z^4 + t^4 + y^2*t^2"), vec![a_point(pt(&[1, 0, 0, 0]), 1)]);
        // x^2 y z + ... is singular at (1:0:0:0)
        let cfg = cfg.unwrap();
        let m = condition_matrix(&cfg).unwrap();
        assert_eq!((m.rows(), m.cols()), (1, 10));
        assert_eq!(m.get(0, 0), &int(1));
        assert!((1..10).all(|j| m.get(0, j).is_zero()));
    }

    #[test]
    fn no_points() {
        let cfg = BranchConfig::new(3, b("x^6 + y^6 + z^6 + t^6"), vec![]).unwrap();
        let m = condition_matrix(&cfg).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (0, 56, 0));
        assert_eq!(defect(&cfg).unwrap().delta, 0);
    }

    pub(crate) fn fac8() -> BranchConfig {
        let branch = b("t^6 + x*(y*z*(y - z)*(y + z)*(y - 2*z) + x^5)");
        let pts = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 0], [0, 1, -1, 0], [0, 2, 1, 0]];
        BranchConfig::new(3, branch, pts.iter().map(|p| a_point(pt(p), 5)).collect()).unwrap()
    }

    #[test]
    fn fac8_is_not_factorial() {
        let m = condition_matrix(&fac8()).unwrap();
        assert_eq!((m.rows(), m.cols()), (15, 56));
        let d = defect(&fac8()).unwrap();
        assert_eq!((d.rank, d.mu, d.delta, d.factorial), (14, 15, 1, false));
    }

    #[test]
    fn fac8_rank_from_binary_forms() {
        // Independent count: along t the conditions ask that the t^j part
        // H_j(0, y, z) of H vanish at the five points for j = 0, 1, 2.
        // Five distinct points impose min(5, deg + 1) conditions on binary
        // forms of degree 5 - j.
        let roots = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1)];
        let mut total = 0;
        for j in 0..3u32 {
            let deg = 5 - j;
            let rows: Vec<Vec<Rational>> = roots
                .iter()
                .map(|&(y, z)| (0..=deg).map(|a| num_traits::pow(int(y), a as usize) * num_traits::pow(int(z), (deg - a) as usize)).collect())
                .collect();
            total += RatMatrix::from_rows(deg as usize + 1, rows).rank();
        }
        assert_eq!(total, 14);
    }

    fn line_arrangement() -> BranchConfig {
        let branch = b("x*y*(x + y - z)*(x - 2*y + 3*z) + t^3*z");
        let pts = [
            [0, 0, 1, 0],
            [0, 1, 1, 0],
            [0, 3, 2, 0],
            [1, 0, 1, 0],
            [-3, 0, 1, 0],
            [-1, 4, 3, 0],
        ];
        BranchConfig::new(2, branch, pts.iter().map(|p| a_point(pt(p), 2)).collect()).unwrap()
    }

    #[test]
    fn line_arrangement_is_factorial() {
        let d = defect(&line_arrangement()).unwrap();
        assert_eq!((d.rank, d.mu, d.delta, d.factorial), (6, 6, 0, true));
        for p in &line_arrangement().points {
            assert!(check_is_a_type(&line_arrangement().branch, &p.coords).unwrap());
        }
    }

    #[test]
    fn screen_short_circuits() {
        let s = screen(2, &[1; 11]).unwrap();
        assert!(s.not_factorial && s.delta_lower_bound == 1);
        let s = screen(3, &[5; 5]).unwrap();
        assert!(!s.not_factorial);
        // ⌈m/2⌉ > 3r - 3
        assert!(screen(2, &[7]).unwrap().not_factorial);
    }

    #[test]
    fn a_type_screen() {
        let branch = fac8().branch;
        for p in &fac8().points {
            assert!(check_is_a_type(&branch, &p.coords).unwrap());
        }
        assert!(!check_is_a_type(&b("x^3*y + y^4 + z^4 + t^4 - x^4"), &pt(&[1, 0, 0, 1])).unwrap());
        assert!(!check_is_a_type(&b("x^2*y^2 + z^4 + t^4"), &pt(&[1, 0, 0, 0])).unwrap());
        assert_eq!(
            check_is_a_type(&b("x^4 + y^4 + z^4 + t^4"), &pt(&[1, 0, 0, 0])),
            Err(DefectError::NotOnBranch(0))
        );
    }

    #[test]
    fn validation_errors() {
        let branch = b("x^2*y*z + y^4 + z^4 + t^4");
        assert!(matches!(
            BranchConfig::new(2, b("x^3"), vec![]),
            Err(DefectError::BranchDegree { expected: 4 })
        ));
        assert_eq!(
            BranchConfig::new(2, branch.clone(), vec![a_point(pt(&[0, 0, 0, 1]), 1)]),
            Err(DefectError::NotOnBranch(0))
        );
        let smooth = b("x^3*y + y^4 + z^4 + t^4 - x^4");
        assert_eq!(
            BranchConfig::new(2, smooth, vec![a_point(pt(&[1, 0, 0, 1]), 1)]),
            Err(DefectError::NotSingular(0))
        );
        assert_eq!(
            BranchConfig::new(2, branch.clone(), vec![BranchSingularPoint::new(pt(&[1, 0, 0, 0]), 3, None)])
                .and_then(|c| defect(&c)),
            Err(DefectError::MissingDirection(0))
        );
        let wrong = BranchSingularPoint::new(pt(&[1, 0, 0, 0]), 3, Some(along_t(pt(&[1, 1, 0, 0]), 0)));
        assert_eq!(BranchConfig::new(2, branch, vec![wrong]), Err(DefectError::DirectionMismatch(0)));
    }

    fn fac9_branch() -> MPoly {
        b("x^4*y*z + x*y*t^4 + z^2*t^4 + y^6 + z^6")
    }

    #[test]
    fn high_order_conditions_need_certification() {
        let cfg = BranchConfig::new(3, fac9_branch(), vec![a_point(pt(&[1, 0, 0, 0]), 11), a_point(pt(&[0, 0, 0, 1]), 1)]).unwrap();
        assert_eq!(
            defect(&cfg),
            Err(DefectError::JetNotCertified {
                point: 0,
                needed: 5,
                certified: 2
            })
        );
    }

    #[test]
    fn fac9_depends_on_the_arc() {
        // In the chart x = 1 the germ is y'z' + t^12 + (higher weight) with
        // z' = z + t^4 and y' = y + z' t^4 - 2t^8, so x_1 = t on the arc
        // (1, 2s^8, -s^4, s).
        let zero = pt(&[0, 0, 0, 0]);
        let mut higher = vec![zero.clone(); 6];
        higher[1] = pt(&[0, 0, -1, 0]);
        higher[5] = pt(&[0, 2, 0, 0]);
        let arc = along_t(pt(&[1, 0, 0, 0]), 0).with_higher_terms(higher).unwrap().with_certified_order(7);
        // the arc lies on y' = z' = 0 to the orders used
        let mut eval = ArcEvaluator::new(&arc, 7);
        let z_prime = eval.series(&b("z*x^3 + t^4")).unwrap();
        assert!(z_prime.iter().all(Zero::is_zero));

        let a1 = a_point(pt(&[0, 0, 0, 1]), 1);
        let exact = BranchConfig::new(
            3,
            fac9_branch(),
            vec![BranchSingularPoint::new(pt(&[1, 0, 0, 0]), 11, Some(arc)), a1.clone()],
        )
        .unwrap();
        let d = defect(&exact).unwrap();
        assert_eq!((d.mu, d.rank, d.delta), (7, 7, 0));

        // with the straight line t = s the A_1 condition becomes redundant
        let naive = along_t(pt(&[1, 0, 0, 0]), 0).with_certified_order(5);
        let cfg = BranchConfig::new(
            3,
            fac9_branch(),
            vec![BranchSingularPoint::new(pt(&[1, 0, 0, 0]), 11, Some(naive)), a1],
        )
        .unwrap();
        let d = defect(&cfg).unwrap();
        assert_eq!((d.mu, d.rank, d.delta), (7, 6, 1));
    }

    #[test]
    fn json_config() {
        let text = r#"{"r": 3, "branch": "t^6 + x*(y*z*(y - z)*(y + z)*(y - 2*z) + x^5)",
            "points": [
              {"coords": ["0","1","0","0"], "type": 5, "direction": {"chart": 1, "arc": {"t": "s"}}},
              {"coords": ["0","0","1","0"], "type": 5, "direction": {"chart": 2, "arc": {"t": "s"}}},
              {"coords": ["0","1","1","0"], "type": 5, "direction": {"chart": 1, "arc": {"t": "s"}}},
              {"coords": ["0","1","-1","0"], "type": 5, "direction": {"chart": 1, "arc": {"t": "s"}}},
              {"coords": ["0","2","1","0"], "type": 5, "direction": {"chart": 1, "arc": {"t": "s"}}}
            ]}"#;
        let cfg = BranchConfig::from_json(text).unwrap();
        assert_eq!(cfg, fac8());
        let bad = text.replace("\"s\"}}},", "\"1 + s\"}}},");
        assert!(BranchConfig::from_json(&bad).is_err());
        let arc = r#"{"r": 3, "branch": "x^4*y*z + x*y*t^4 + z^2*t^4 + y^6 + z^6", "points": [
            {"coords": ["1","0","0","0"], "type": 11,
             "direction": {"chart": 0, "arc": {"t": "s", "z": "-s^4", "y": "2*s^8"}, "certified_order": 7}},
            {"coords": ["0","0","0","1"], "type": 1}]}"#;
        let d = defect(&BranchConfig::from_json(arc).unwrap()).unwrap();
        assert_eq!(d.delta, 0);
    }

    /// Random points and a branch `F₁ F₂ M` with `F₁, F₂` products of linear
    /// forms through all the points, so every point is singular.
    fn arb_config() -> impl Strategy<Value = BranchConfig> {
        (
            2u32..=3,
            proptest::collection::vec((proptest::collection::vec(-2i64..=2, 4), 1u32..=6), 1..=3),
            proptest::collection::vec(-3i64..=3, 24),
        )
            .prop_filter_map("degenerate point", |(r, pts, coeffs)| {
                let points: Vec<Vec<Rational>> = pts.iter().map(|(c, _)| pt(c)).collect();
                if points.iter().any(|p| p.iter().all(Zero::is_zero)) {
                    return None;
                }
                let mut coeff = coeffs.into_iter().cycle();
                let mut f = [MPoly::constant_like(&b("x"), int(1)), MPoly::constant_like(&b("x"), int(1))];
                for p in &points {
                    for fi in f.iter_mut() {
                        // a linear form vanishing at p from the nullspace of p
                        let ns = RatMatrix::from_rows(4, vec![p.clone()]).nullspace();
                        let mut l = MPoly::zero(&VARIABLES);
                        for v in &ns {
                            let c = int(coeff.next().unwrap());
                            for (k, x) in v.iter().enumerate() {
                                l = &l + &MPoly::var(&VARIABLES, k).scale(&(x * &c));
                            }
                        }
                        if l.is_zero() {
                            return None;
                        }
                        *fi = &*fi * &l;
                    }
                }
                let k = points.len() as u32;
                if 2 * k > 2 * r {
                    return None;
                }
                let rest = MPoly::var(&VARIABLES, 3).pow(2 * r - 2 * k) + MPoly::var(&VARIABLES, 0).pow(2 * r - 2 * k);
                let branch = &(&f[0] * &f[1]) * &rest;
                let bps = pts
                    .iter()
                    .zip(points)
                    .map(|((_, m), p)| {
                        let chart = p.iter().position(|c| !c.is_zero()).unwrap();
                        let mut dir = pt(&[1, 1, 1, 1]);
                        dir[chart] = int(0);
                        let base: Vec<Rational> = p.iter().map(|x| x / &p[chart]).collect();
                        let jet = Jet::linear(chart, base, dir).unwrap();
                        BranchSingularPoint::new(p, *m, Some(jet))
                    })
                    .collect();
                BranchConfig::new(r, branch, bps).ok()
            })
    }

    fn permute(cfg: &BranchConfig, perm: &[usize; 4]) -> BranchConfig {
        // new coordinate perm[i] takes the role of old coordinate i
        let images: Vec<MPoly> = (0..4).map(|i| MPoly::var(&VARIABLES, perm[i])).collect();
        let branch = cfg.branch.compose(&images).unwrap();
        let mv = |v: &[Rational]| {
            let mut out = vec![int(0); 4];
            for i in 0..4 {
                out[perm[i]] = v[i].clone();
            }
            out
        };
        let points = cfg
            .points
            .iter()
            .map(|p| {
                let dir = p.direction.as_ref().map(|j| {
                    Jet::new(perm[j.chart], mv(&j.base), mv(&j.linear), mv(&j.quadratic))
                        .unwrap()
                        .with_certified_order(j.certified_order)
                });
                BranchSingularPoint::new(mv(&p.coords), p.m, dir)
            })
            .collect();
        BranchConfig::new(cfg.r, branch, points).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn rank_bounds(cfg in arb_config()) {
            let d = defect(&cfg).unwrap();
            prop_assert!(d.rank <= d.mu.min(d.h0));
            prop_assert!(d.mu - d.rank >= d.mu.saturating_sub(d.h0));
        }

        #[test]
        fn duplicate_evaluation_row_keeps_rank(cfg in arb_config()) {
            let m = condition_matrix(&cfg).unwrap();
            let mut rows: Vec<Vec<Rational>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
            rows.push(rows[0].clone());
            prop_assert_eq!(RatMatrix::from_rows(m.cols(), rows).rank(), m.rank());
        }

        #[test]
        fn permutation_invariance(cfg in arb_config(), perm in Just([0usize, 1, 2, 3]).prop_shuffle()) {
            let perm: [usize; 4] = perm;
            prop_assert_eq!(defect(&permute(&cfg, &perm)).unwrap(), defect(&cfg).unwrap());
        }

        #[test]
        fn single_coordinate_point_is_triangular(r in 2u32..=4, m in 1u32..=6, v in 0usize..4) {
            prop_assume!(conditions_for(m) <= 3 * r - 3);
            let mut coords = pt(&[0, 0, 0, 0]);
            coords[v] = int(1);
            let other = (v + 1) % 4;
            let mut dir = pt(&[0, 0, 0, 0]);
            dir[other] = int(1);
            let jet = Jet::linear(v, coords.clone(), dir).unwrap();
            // x_v^{2r-2} x_w^2 for w != v is singular at the vertex
            let w = (v + 2) % 4;
            let mut branch = MPoly::var(&VARIABLES, v).pow(2 * r - 2) * MPoly::var(&VARIABLES, w).pow(2);
            branch = &branch + &MPoly::var(&VARIABLES, other).pow(2 * r);
            let cfg = BranchConfig::new(r, branch, vec![BranchSingularPoint::new(coords, m, Some(jet))]).unwrap();
            prop_assert_eq!(defect(&cfg).unwrap().rank, conditions_for(m) as u64);
        }
    }
}
