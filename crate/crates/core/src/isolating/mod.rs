//! Isolating polynomials and the degree bounds they give.
//!
//! A set of weighted-homogeneous polynomials isolates a point `p` of `V` if
//! their common zeros on `V` are finitely many points including `p`. The
//! bounds here are maxima of `lcm(a_i, a_j)` over index sets chosen by the
//! variant of the scenario.

mod oracle;

pub use oracle::{finiteness_oracle, OracleReport, Verdict};

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::rational::{self, Rational};
use crate::poly::roots::{gcd, to_dense};
use crate::poly::{MPoly, PolyError};
use crate::wps::{
    stratum_singular_points, CoordinateStratum, FanoFamily, Kind, Recipe, Variant, WeightSystem,
    WpsError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsolatingError {
    #[error("malformed scenario: {0}")]
    Malformed(String),
    #[error("the chart coordinate of the point is zero")]
    ChartCoordinateZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("q = {0} is larger than 17")]
    FieldTooLarge(u64),
    #[error("arity {0} is larger than 6")]
    ArityTooLarge(usize),
    #[error("a coefficient denominator is divisible by {0}")]
    BadReduction(u64),
    #[error(transparent)]
    Wps(#[from] WpsError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointKind {
    Smooth,
    #[serde(rename = "cA1")]
    CA1,
}

impl PointKind {
    /// Largest admissible `bound · (−K)³`.
    pub fn threshold(self) -> Rational {
        match self {
            PointKind::Smooth => Rational::from_integer(4.into()),
            PointKind::CA1 => Rational::from_integer(2.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationScenario {
    pub weights: WeightSystem,
    pub codim: u8,
    pub variant: Variant,
    pub chart: Option<usize>,
    pub dropped: Vec<usize>,
}

impl IsolationScenario {
    pub fn validate(&self) -> Result<(), IsolatingError> {
        let bad = |m: &str| Err(IsolatingError::Malformed(m.to_string()));
        let n = self.weights.len();
        if !(self.codim == 1 || self.codim == 2) {
            return bad("codimension must be 1 or 2");
        }
        if self.dropped.len() != self.variant.drop_count() {
            return bad("wrong number of dropped indices for the variant");
        }
        if self.variant.drop_count() == 2 && self.codim != 2 {
            return bad("variants (1-c) and (2-c) need codimension 2");
        }
        if self.dropped.iter().any(|&k| k >= n) || self.chart.is_some_and(|c| c >= n) {
            return bad("index out of range");
        }
        if self.dropped.len() == 2 && self.dropped[0] == self.dropped[1] {
            return bad("dropped indices must be distinct");
        }
        match (self.variant.is_chart_based(), self.chart) {
            (true, None) => return bad("chart-based variant without a chart"),
            (false, Some(_)) => return bad("chart given for a variant that takes none"),
            (true, Some(c)) if self.dropped.contains(&c) => {
                return bad("dropped index equals the chart")
            }
            _ => {}
        }
        Ok(())
    }

    fn retained(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|j| !self.dropped.contains(j))
            .collect()
    }
}

/// Largest degree of the isolating polynomials the scenario provides.
pub fn degree_bound(s: &IsolationScenario) -> Result<u64, IsolatingError> {
    s.validate()?;
    let retained = s.retained();
    Ok(match s.chart {
        None => s.weights.max_lcm(&retained),
        Some(i) => {
            let ai = s.weights.get(i) as u64;
            retained
                .iter()
                .map(|&j| ai.lcm(&(s.weights.get(j) as u64)))
                .max()
                .unwrap_or(ai)
        }
    })
}

/// One scenario per chart (a single one for non-chart variants).
pub fn recipe_scenarios(fam: &FanoFamily, recipe: &Recipe) -> Vec<IsolationScenario> {
    let codim = match fam.kind {
        Kind::Hypersurface => 1,
        Kind::Wci2 => 2,
    };
    let make = |chart| IsolationScenario {
        weights: fam.weights.clone(),
        codim,
        variant: recipe.variant,
        chart,
        dropped: recipe.drop.clone(),
    };
    if recipe.variant.is_chart_based() {
        recipe.charts.iter().map(|&c| make(Some(c))).collect()
    } else {
        vec![make(None)]
    }
}

/// Largest bound over the recipe's scenarios.
pub fn recipe_bound(fam: &FanoFamily, recipe: &Recipe) -> Result<u64, IsolatingError> {
    let scenarios = recipe_scenarios(fam, recipe);
    if scenarios.is_empty() {
        return Err(IsolatingError::Malformed("chart-based recipe lists no charts".into()));
    }
    let mut best = 0;
    for s in &scenarios {
        best = best.max(degree_bound(s)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatingSet {
    pub polynomials: Vec<MPoly>,
    pub degree_bound: u64,
}

pub fn coordinate_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// The binomials `α_i^{m_j/a_i} x_j^{m_j/a_j} − α_j^{m_j/a_j} x_i^{m_j/a_i}`
/// with `m_j = lcm(a_i, a_j)`, one for each retained `j ≠ i`.
pub fn isolating_polynomials(
    weights: &WeightSystem,
    point: &[Rational],
    chart: usize,
    dropped: &[usize],
) -> Result<IsolatingSet, IsolatingError> {
    let n = weights.len();
    if point.len() != n {
        return Err(PolyError::ArityMismatch {
            expected: n,
            found: point.len(),
        }
        .into());
    }
    if chart >= n || dropped.iter().any(|&k| k >= n) {
        return Err(IsolatingError::Malformed("index out of range".into()));
    }
    if dropped.contains(&chart) {
        return Err(IsolatingError::Malformed("dropped index equals the chart".into()));
    }
    let alpha_i = &point[chart];
    if alpha_i.is_zero() {
        return Err(IsolatingError::ChartCoordinateZero);
    }
    let vars = coordinate_names(n);
    let ai = weights.get(chart) as u64;
    let mut polynomials = Vec::new();
    let mut bound = ai;
    for j in (0..n).filter(|&j| j != chart && !dropped.contains(&j)) {
        let aj = weights.get(j) as u64;
        let m = ai.lcm(&aj);
        bound = bound.max(m);
        let mut e_j = vec![0u32; n];
        e_j[j] = (m / aj) as u32;
        let mut e_i = vec![0u32; n];
        e_i[chart] = (m / ai) as u32;
        let c_j = num_traits::pow(alpha_i.clone(), (m / ai) as usize);
        let c_i = -num_traits::pow(point[j].clone(), (m / aj) as usize);
        let mut g = MPoly::zero_owned(vars.clone());
        g.add_term(crate::poly::Monomial(e_j), c_j);
        g.add_term(crate::poly::Monomial(e_i), c_i);
        polynomials.push(g);
    }
    Ok(IsolatingSet {
        polynomials,
        degree_bound: bound,
    })
}

/// Whether `bound · (−K)³` is within the threshold for the point kind.
pub fn exclusion_verdict(bound: u64, k3: &Rational, kind: PointKind) -> bool {
    Rational::from_integer(bound.into()) * k3 <= kind.threshold()
}

/// Outcome of an exclusion check for one family and point kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsolationReport {
    pub family: u32,
    pub point_kind: PointKind,
    pub bound: u64,
    #[serde(with = "rational::serde_str")]
    pub threshold: Rational,
    #[serde(with = "rational::serde_str")]
    pub k3: Rational,
    pub excluded: bool,
    /// Coordinates whose common zero locus the bound does not cover.
    pub not_covered: Option<Vec<usize>>,
}

pub fn family_report(fam: &FanoFamily, kind: PointKind) -> Result<IsolationReport, IsolatingError> {
    let recipe = match kind {
        PointKind::Smooth => &fam.smooth_recipe,
        PointKind::CA1 => &fam.ca1_recipe,
    };
    let bound = recipe_bound(fam, recipe)?;
    Ok(IsolationReport {
        family: fam.id,
        point_kind: kind,
        bound,
        threshold: kind.threshold(),
        k3: fam.anticanonical_cube(),
        excluded: exclusion_verdict(bound, &fam.anticanonical_cube(), kind),
        not_covered: recipe.excluded_stratum.clone(),
    })
}

/// Whether a point with the given nonzero coordinates falls on the stratum
/// a recipe leaves to an outside argument.
pub fn point_not_covered(recipe: &Recipe, point: &[Rational]) -> bool {
    recipe
        .excluded_stratum
        .as_ref()
        .is_some_and(|zs| zs.iter().all(|&i| point[i].is_zero()))
}

/// Checks the hypothesis the recipe relies on for the given defining
/// polynomials. `None` when the variant has no hypothesis or the recipe
/// leaves part of the space to an outside argument.
///
/// * dropped index sets: the coordinate stratum where only the dropped
///   coordinates may be nonzero misses `X`;
/// * charts: no singular point of `X`, other than quotient points of the
///   ambient space, lies off the union of the charts.
pub fn recipe_premise(
    fam: &FanoFamily,
    recipe: &Recipe,
    fs: &[MPoly],
) -> Result<Option<bool>, IsolatingError> {
    if recipe.excluded_stratum.is_some() {
        return Ok(None);
    }
    if !recipe.drop.is_empty() {
        return Ok(Some(stratum_misses(fs, &recipe.drop)?));
    }
    if recipe.variant.is_chart_based() {
        let stratum = CoordinateStratum::new(recipe.charts.clone(), None)?;
        let pts = stratum_singular_points(fs, &fam.weights, &stratum)?;
        return Ok(Some(pts.points.is_empty() && !pts.nonrational_may_remain));
    }
    Ok(None)
}

/// Whether the polynomials have no common zero with all coordinates outside
/// `keep` equal to zero (one or two kept coordinates).
fn stratum_misses(fs: &[MPoly], keep: &[usize]) -> Result<bool, IsolatingError> {
    let zero = Rational::zero();
    let n = fs.first().map_or(0, MPoly::arity);
    let restricted: Vec<MPoly> = fs
        .iter()
        .map(|f| {
            (0..n)
                .filter(|i| !keep.contains(i))
                .fold(f.clone(), |g, i| g.specialize(i, &zero))
        })
        .collect();
    match keep {
        [k] => {
            let vertex: Vec<MPoly> = restricted
                .iter()
                .map(|g| g.specialize(*k, &Rational::one()))
                .collect();
            Ok(vertex.iter().any(|g| !g.is_zero()))
        }
        [u, v] => {
            for (a, b) in [(*u, *v), (*v, *u)] {
                // vertex where only `a` is nonzero
                let at: Vec<MPoly> = restricted
                    .iter()
                    .map(|g| g.specialize(a, &Rational::one()).specialize(b, &zero))
                    .collect();
                if at.iter().all(MPoly::is_zero) {
                    return Ok(false);
                }
            }
            // torus u = 1, v ≠ 0: no common factor at all, rational or not
            let dense: Vec<Vec<Rational>> = restricted
                .iter()
                .map(|g| to_dense(&g.specialize(*u, &Rational::one()), *v))
                .collect::<Result<_, _>>()?;
            let mut g: Vec<Rational> = Vec::new();
            for p in &dense {
                g = gcd(&g, p);
            }
            if g.is_empty() {
                return Ok(false);
            }
            // strip the factor v^k, which only gives v = 0
            let low = g.iter().position(|c| !c.is_zero()).unwrap_or(0);
            Ok(g.len() - low <= 1)
        }
        _ => Err(IsolatingError::Malformed("premise check takes one or two coordinates".into())),
    }
}
