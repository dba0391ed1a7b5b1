//! Towers of blow-ups realizing a divisorial valuation over a cA1 point,
//! seen through their oriented graph, and the inequalities read off from
//! path counts.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::poly::rational::{self, Rational};

/// Largest tower handled. Path counts of the complete graph double at each
/// step, so this keeps them inside `u64`.
pub const MAX_BLOWUPS: usize = 60;
pub const MAX_ORACLE_BLOWUPS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error("need 1 <= K <= L <= N, got K = {k}, L = {l}, N = {n}")]
    Markers { n: usize, k: usize, l: usize },
    #[error("edge {0}>{1} does not point downwards")]
    EdgeOrder(usize, usize),
    #[error("edge {0}>{1} refers to a vertex outside 1..=N")]
    DanglingVertex(usize, usize),
    #[error("chain edge {}>{} is missing", .0 + 1, .0)]
    MissingChainEdge(usize),
    #[error("towers with more than {MAX_BLOWUPS} blow-ups are not handled")]
    TooLarge(usize),
    #[error("cannot parse edge list: {0}")]
    Syntax(String),
    #[error("sigma_0 must be positive")]
    ZeroSigma0,
    #[error("s and t must be coprime")]
    NotCoprime,
    #[error("need 0 < s <= t")]
    BadKawakita,
    #[error("the grid oracle takes at most {MAX_ORACLE_BLOWUPS} blow-ups, got {0}")]
    OracleTooLarge(usize),
    #[error("resolution must be positive")]
    ZeroResolution,
    #[error("surface {0}: K_j exceeds L")]
    SurfaceMarker(usize),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
}

/// Vertices are `1..=N`; an edge `(j, i)` means `j → i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    k: usize,
    l: usize,
}

impl TowerGraph {
    /// Graph with all chain edges `i+1 → i` plus the given extra edges.
    pub fn with_chain(
        n: usize,
        extra: &[(usize, usize)],
        k: usize,
        l: usize,
    ) -> Result<Self, TowerError> {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i + 1, i)).collect();
        edges.extend_from_slice(extra);
        Self::from_edges(n, &edges, k, l)
    }

    /// Graph with exactly the given edges; the chain edges must be among
    /// them.
    pub fn from_edges(
        n: usize,
        edges: &[(usize, usize)],
        k: usize,
        l: usize,
    ) -> Result<Self, TowerError> {
        if n > MAX_BLOWUPS {
            return Err(TowerError::TooLarge(n));
        }
        if !(1 <= k && k <= l && l <= n) {
            return Err(TowerError::Markers { n, k, l });
        }
        let mut set = BTreeSet::new();
        for &(j, i) in edges {
            if j <= i {
                return Err(TowerError::EdgeOrder(j, i));
            }
            if i < 1 || j > n {
                return Err(TowerError::DanglingVertex(j, i));
            }
            set.insert((j, i));
        }
        if let Some(i) = (1..n).find(|&i| !set.contains(&(i + 1, i))) {
            return Err(TowerError::MissingChainEdge(i));
        }
        Ok(TowerGraph { n, edges: set, k, l })
    }

    pub fn chain(n: usize, k: usize, l: usize) -> Result<Self, TowerError> {
        Self::with_chain(n, &[], k, l)
    }

    /// Parses `"3>1, 4>2"` (empty text gives no edges).
    pub fn parse_edges(text: &str) -> Result<Vec<(usize, usize)>, TowerError> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                let (j, i) = s
                    .split_once('>')
                    .ok_or_else(|| TowerError::Syntax(s.to_string()))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| TowerError::Syntax(s.to_string()))
                };
                Ok((parse(j)?, parse(i)?))
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Edges other than the chain edges.
    pub fn extra_edges(&self) -> Vec<(usize, usize)> {
        self.edges().filter(|&(j, i)| j != i + 1).collect()
    }

    /// `p_1, …, p_N`: `p_N = 1` and `p_i` is the number of paths from
    /// `E_N` to `E_i`.
    pub fn path_counts(&self) -> Vec<u64> {
        let mut p = vec![0u64; self.n + 1];
        p[self.n] = 1;
        for i in (1..self.n).rev() {
            p[i] = self
                .edges
                .iter()
                .filter(|&&(_, t)| t == i)
                .map(|&(j, _)| p[j])
                .sum();
        }
        p.remove(0);
        p
    }

    pub fn sigmas(&self) -> SigmaTriple {
        let p = self.path_counts();
        let sum = |r: std::ops::Range<usize>| p[r].iter().sum::<u64>();
        SigmaTriple {
            s0: sum(0..self.k),
            s1: sum(self.k..self.l),
            s2: sum(self.l..self.n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SigmaTriple {
    pub s0: u64,
    pub s1: u64,
    pub s2: u64,
}

impl SigmaTriple {
    pub fn new(s0: u64, s1: u64, s2: u64) -> Result<Self, TowerError> {
        if s0 == 0 {
            return Err(TowerError::ZeroSigma0);
        }
        Ok(SigmaTriple { s0, s1, s2 })
    }

    /// Discrepancy `a(E_N, X) = Σ₀ + 2Σ₁ + Σ₂`.
    pub fn discrepancy(&self) -> u64 {
        self.s0 + 2 * self.s1 + self.s2
    }

    pub fn as_array(&self) -> [u64; 3] {
        [self.s0, self.s1, self.s2]
    }
}

fn r(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

/// `(Σ₀+2Σ₁+Σ₂)² / ((Σ₀+Σ₁)(Σ₀+2Σ₁+2Σ₂))`, the factor multiplying `2n²`.
pub fn two_n_squared_factor(s: &SigmaTriple) -> Result<Rational, TowerError> {
    if s.s0 == 0 {
        return Err(TowerError::ZeroSigma0);
    }
    let a = r(s.discrepancy());
    Ok(&a * &a / (r(s.s0 + s.s1) * r(s.s0 + 2 * s.s1 + 2 * s.s2)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadraticMinimum {
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// `ν_1, …, ν_N` at the minimum.
    #[serde(with = "rational::serde_vec")]
    pub minimizer: Vec<Rational>,
}

/// Minimum of `2 Σ_{i≤K} p_i ν_i² + Σ_{i>K} p_i ν_i²` subject to
/// `Σ p_i ν_i = V`, attained at `2ν_1 = … = 2ν_K = ν_{K+1} = … = ν_N`.
pub fn min_quadratic(g: &TowerGraph, v: &Rational) -> QuadraticMinimum {
    let p = g.path_counts();
    let s0: u64 = p[..g.k].iter().sum();
    let rest: u64 = p[g.k..].iter().sum();
    let c = Rational::from_integer(2.into()) * v / r(s0 + 2 * rest);
    let half = &c / Rational::from_integer(2.into());
    let minimizer = (0..g.n)
        .map(|i| if i < g.k { half.clone() } else { c.clone() })
        .collect();
    QuadraticMinimum {
        value: Rational::from_integer(2.into()) * v * v / r(s0 + 2 * rest),
        minimizer,
    }
}

/// The same minimum over the grid `ν_i = V k_i / (R p_i)` with
/// `k_i ≥ 0`, `Σ k_i = R`. The objective is separable and convex in the
/// `k_i`, so handing out the `R` units one at a time to the cheapest slot
/// finds the grid minimum exactly.
pub fn min_quadratic_oracle(
    g: &TowerGraph,
    v: &Rational,
    resolution: u32,
) -> Result<Rational, TowerError> {
    if g.n > MAX_ORACLE_BLOWUPS {
        return Err(TowerError::OracleTooLarge(g.n));
    }
    if resolution == 0 {
        return Err(TowerError::ZeroResolution);
    }
    let p = g.path_counts();
    let res = r(resolution as u64);
    // cost of slot i holding k units: w_i k², w_i = c_i V² / (R² p_i)
    let weights: Vec<Rational> = (0..g.n)
        .map(|i| {
            let c = if i < g.k { 2 } else { 1 };
            r(c) * v * v / (&res * &res * r(p[i]))
        })
        .collect();
    let mut k = vec![0u64; g.n];
    for _ in 0..resolution {
        let (best, _) = (0..g.n)
            .map(|i| (i, &weights[i] * r(2 * k[i] + 1)))
            .min_by(|a, b| a.1.cmp(&b.1))
            .expect("at least one blow-up");
        k[best] += 1;
    }
    Ok((0..g.n).map(|i| &weights[i] * r(k[i] * k[i])).sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KawakitaReport {
    pub s: u64,
    pub t: u64,
    #[serde(with = "rational::serde_str")]
    pub factor: Rational,
    pub sigma: [u64; 3],
    /// Whether `2 ·` the factor read off the chain tower agrees.
    pub cross_check: bool,
}

/// `2t² / (s(2t − s))` for the `(s, 2t−s, t, 1)` blow-up, checked against
/// the chain tower with `N = t`, `K = L = s`. The bound `t ≤ M/2` coming
/// from the germ is the caller's responsibility.
pub fn kawakita_factor(s: u64, t: u64) -> Result<KawakitaReport, TowerError> {
    if s == 0 || s > t {
        return Err(TowerError::BadKawakita);
    }
    if s.gcd(&t) != 1 {
        return Err(TowerError::NotCoprime);
    }
    if t as usize > MAX_BLOWUPS {
        return Err(TowerError::TooLarge(t as usize));
    }
    let factor = r(2 * t * t) / r(s * (2 * t - s));
    let sigma = TowerGraph::chain(t as usize, s as usize, s as usize)?.sigmas();
    let cross = r(2) * two_n_squared_factor(&sigma)?;
    Ok(KawakitaReport {
        s,
        t,
        cross_check: cross == factor,
        factor,
        sigma: sigma.as_array(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surface {
    pub gamma: Rational,
    /// `K_j`; 0 when the point is not on the surface.
    pub k: usize,
    pub nu: Rational,
    pub mult: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CortiInstance {
    pub graph: TowerGraph,
    pub n: Rational,
    pub mult_h: Rational,
    pub surfaces: Vec<Surface>,
    /// `m_{0,1}, …, m_{0,L}` if known.
    pub m0: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CortiCoefficient {
    #[serde(with = "rational::serde_str")]
    pub t: Rational,
    #[serde(with = "rational::serde_str")]
    pub xi: Rational,
    pub on_surface: bool,
}

fn xi(p: &[u64], k: usize) -> Rational {
    r(p[..k].iter().sum())
}

/// `t_j = Ξ_j / (Σ₀ + Σ₁)` with `Ξ_j = Σ_{i≤K_j} p_i`.
pub fn corti_coefficients(inst: &CortiInstance) -> Result<Vec<CortiCoefficient>, TowerError> {
    let g = &inst.graph;
    let p = g.path_counts();
    let s = g.sigmas();
    let denom = r(s.s0 + s.s1);
    inst.surfaces
        .iter()
        .enumerate()
        .map(|(j, f)| {
            if f.k > g.l {
                return Err(TowerError::SurfaceMarker(j + 1));
            }
            let x = xi(&p, f.k);
            Ok(CortiCoefficient {
                t: &x / &denom,
                xi: x,
                on_surface: f.k > 0,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CortiReport {
    pub coefficients: Vec<CortiCoefficient>,
    #[serde(with = "rational::serde_str")]
    pub lhs: Rational,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
    pub holds: bool,
    pub chain: Option<CortiChain>,
}

/// The four quantities compared in the proof, top to bottom, and whether
/// each comparison holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CortiChain {
    #[serde(with = "rational::serde_vec")]
    pub values: Vec<Rational>,
    /// `≥`, `>`, `≥`.
    pub links: [bool; 3],
}

fn check_nonnegative(x: &Rational, what: &str) -> Result<(), TowerError> {
    if x < &Rational::zero() {
        return Err(TowerError::Inconsistent(format!("{what} is negative")));
    }
    Ok(())
}

/// Evaluates `mult Z_h + Σ t_j mult Z_j > 2n² + 4n² Σ γ_j t_j` at the
/// computed `t_j`, and the chain of inequalities behind it when `m_{0,i}`
/// are supplied.
pub fn corti_check(inst: &CortiInstance) -> Result<CortiReport, TowerError> {
    if inst.n <= Rational::zero() {
        return Err(TowerError::Inconsistent("n must be positive".into()));
    }
    check_nonnegative(&inst.mult_h, "mult Z_h")?;
    let g = &inst.graph;
    let p = g.path_counts();
    for (j, f) in inst.surfaces.iter().enumerate() {
        check_nonnegative(&f.gamma, "gamma")?;
        check_nonnegative(&f.mult, "mult Z_j")?;
        if f.k <= g.l && f.nu < xi(&p, f.k) {
            return Err(TowerError::Inconsistent(format!(
                "surface {}: nu(F) is below Xi",
                j + 1
            )));
        }
    }
    let coefficients = corti_coefficients(inst)?;
    let n2 = &inst.n * &inst.n;
    let two = r(2);
    let four = r(4);
    let lhs = &inst.mult_h
        + inst
            .surfaces
            .iter()
            .zip(&coefficients)
            .map(|(f, c)| &c.t * &f.mult)
            .sum::<Rational>();
    let gamma_t: Rational = inst
        .surfaces
        .iter()
        .zip(&coefficients)
        .map(|(f, c)| &f.gamma * &c.t)
        .sum();
    let rhs = &two * &n2 + &four * &n2 * &gamma_t;

    let chain = match &inst.m0 {
        None => None,
        Some(m0) => {
            if m0.len() != g.l {
                return Err(TowerError::Inconsistent(format!(
                    "expected {} values of m_0,i",
                    g.l
                )));
            }
            for m in m0 {
                check_nonnegative(m, "m_0,i")?;
            }
            let s = g.sigmas();
            let (s0, s1, s2) = (r(s.s0), r(s.s1), r(s.s2));
            let top = (&s0 + &s1) * &inst.mult_h
                + inst
                    .surfaces
                    .iter()
                    .zip(&coefficients)
                    .map(|(f, c)| &c.xi * &f.mult)
                    .sum::<Rational>();
            let weighted: Rational = m0.iter().zip(&p).map(|(m, &pi)| m * r(pi)).sum();
            let gnu: Rational = inst.surfaces.iter().map(|f| &f.gamma * &f.nu).sum();
            let gxi: Rational = inst
                .surfaces
                .iter()
                .zip(&coefficients)
                .map(|(f, c)| &f.gamma * &c.xi)
                .sum();
            let a = &s0 + &two * &s1 + &two * &s2;
            let diff = &s2 - &gnu;
            let middle = &two * &n2 * &s0
                + &four * &n2 * &s1
                + &four * &n2 * &gnu
                + &two * &n2 * &diff * &diff / &a;
            let bottom = &two * &n2 * (&s0 + &s1) + &four * &n2 * &gxi;
            let links = [top >= weighted, weighted > middle, middle >= bottom];
            Some(CortiChain {
                values: vec![top, weighted, middle, bottom],
                links,
            })
        }
    };
    Ok(CortiReport {
        coefficients,
        holds: lhs > rhs,
        lhs,
        rhs,
        chain,
    })
}

impl Default for Surface {
    fn default() -> Self {
        Surface {
            gamma: Rational::zero(),
            k: 0,
            nu: Rational::zero(),
            mult: Rational::zero(),
        }
    }
}

impl CortiInstance {
    pub fn new(graph: TowerGraph, n: Rational, mult_h: Rational) -> Self {
        CortiInstance {
            graph,
            n,
            mult_h,
            surfaces: Vec::new(),
            m0: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn path_count_examples() {
        assert_eq!(TowerGraph::chain(3, 1, 1).unwrap().path_counts(), vec![1, 1, 1]);
        let g = TowerGraph::with_chain(3, &[(3, 1)], 1, 1).unwrap();
        assert_eq!(g.path_counts(), vec![2, 1, 1]);
        assert_eq!(TowerGraph::chain(1, 1, 1).unwrap().path_counts(), vec![1]);
    }

    #[test]
    fn graph_errors() {
        assert_eq!(
            TowerGraph::from_edges(3, &[(3, 2)], 1, 1),
            Err(TowerError::MissingChainEdge(1))
        );
        assert_eq!(
            TowerGraph::with_chain(3, &[(1, 2)], 1, 1),
            Err(TowerError::EdgeOrder(1, 2))
        );
        assert_eq!(
            TowerGraph::with_chain(3, &[(5, 1)], 1, 1),
            Err(TowerError::DanglingVertex(5, 1))
        );
        assert!(matches!(TowerGraph::chain(3, 2, 1), Err(TowerError::Markers { .. })));
        assert!(matches!(TowerGraph::chain(3, 0, 1), Err(TowerError::Markers { .. })));
    }

    #[test]
    fn edge_parsing() {
        assert_eq!(TowerGraph::parse_edges("3>1, 4>2").unwrap(), vec![(3, 1), (4, 2)]);
        assert_eq!(TowerGraph::parse_edges("").unwrap(), vec![]);
        assert!(TowerGraph::parse_edges("3-1").is_err());
    }

    #[test]
    fn sigma_examples() {
        let s = TowerGraph::chain(3, 1, 2).unwrap().sigmas();
        assert_eq!((s.as_array(), s.discrepancy()), ([1, 1, 1], 4));
        let s = TowerGraph::chain(3, 2, 2).unwrap().sigmas();
        assert_eq!((s.as_array(), s.discrepancy()), ([2, 0, 1], 3));
        let g = TowerGraph::with_chain(4, &[(4, 1), (3, 1)], 4, 4).unwrap();
        let s = g.sigmas();
        assert_eq!((s.s1, s.s2), (0, 0));
        assert_eq!(s.discrepancy(), s.s0);
    }

    #[test]
    fn min_quadratic_examples() {
        assert_eq!(min_quadratic(&TowerGraph::chain(1, 1, 1).unwrap(), &int(1)).value, int(2));
        let g = TowerGraph::chain(2, 1, 1).unwrap();
        let m = min_quadratic(&g, &int(3));
        assert_eq!(m.value, int(6));
        assert_eq!(m.minimizer, vec![int(1), int(2)]);
        assert!(min_quadratic(&g, &int(0)).value.is_zero());
    }

    #[test]
    fn oracle_examples() {
        let g1 = TowerGraph::chain(1, 1, 1).unwrap();
        for res in [1, 7, 50] {
            assert_eq!(min_quadratic_oracle(&g1, &int(1), res).unwrap(), int(2));
        }
        let g = TowerGraph::chain(2, 1, 1).unwrap();
        let o = min_quadratic_oracle(&g, &int(3), 100).unwrap();
        assert!(o >= int(6) && o - int(6) <= rat(1, 100));
        assert_eq!(
            min_quadratic_oracle(&TowerGraph::chain(7, 1, 1).unwrap(), &int(1), 10),
            Err(TowerError::OracleTooLarge(7))
        );
    }

    #[test]
    fn factor_examples() {
        let f = |a, b, c| two_n_squared_factor(&SigmaTriple::new(a, b, c).unwrap()).unwrap();
        assert_eq!(f(1, 0, 0), int(1));
        assert_eq!(f(2, 0, 1), rat(9, 8));
        assert_eq!(f(1, 1, 0), rat(3, 2));
        assert_eq!(SigmaTriple::new(0, 1, 1), Err(TowerError::ZeroSigma0));
    }

    #[test]
    fn kawakita_examples() {
        for (s, t, v) in [(1, 1, int(2)), (2, 3, rat(9, 4)), (1, 2, rat(8, 3))] {
            let k = kawakita_factor(s, t).unwrap();
            assert_eq!(k.factor, v);
            assert!(k.cross_check);
        }
        assert_eq!(kawakita_factor(2, 4), Err(TowerError::NotCoprime));
        assert_eq!(kawakita_factor(3, 2), Err(TowerError::BadKawakita));
    }

    fn surface(gamma: Rational, k: usize, nu: Rational, mult: Rational) -> Surface {
        Surface { gamma, k, nu, mult }
    }

    #[test]
    fn corti_coefficient_examples() {
        let mut inst = CortiInstance::new(TowerGraph::chain(1, 1, 1).unwrap(), int(1), int(0));
        inst.surfaces.push(surface(int(0), 1, int(1), int(0)));
        assert_eq!(corti_coefficients(&inst).unwrap()[0].t, int(1));

        let mut inst = CortiInstance::new(TowerGraph::chain(3, 1, 2).unwrap(), int(1), int(0));
        inst.surfaces.push(surface(int(0), 1, int(1), int(0)));
        inst.surfaces.push(surface(int(0), 0, int(0), int(0)));
        let c = corti_coefficients(&inst).unwrap();
        assert_eq!(c[0].t, rat(1, 2));
        assert!(c[1].t.is_zero() && !c[1].on_surface);
        inst.surfaces.push(surface(int(0), 3, int(5), int(0)));
        assert_eq!(corti_coefficients(&inst), Err(TowerError::SurfaceMarker(3)));
    }

    #[test]
    fn corti_check_examples() {
        let g = TowerGraph::chain(1, 1, 1).unwrap();
        let r = corti_check(&CortiInstance::new(g.clone(), int(1), int(3))).unwrap();
        assert!(r.holds && r.lhs == int(3) && r.rhs == int(2));

        let mut inst = CortiInstance::new(g.clone(), int(1), int(1));
        inst.surfaces.push(surface(rat(1, 2), 1, int(1), int(4)));
        let r = corti_check(&inst).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (int(5), int(4)));
        assert!(r.holds);

        let mut inst = CortiInstance::new(g, int(1), int(0));
        inst.surfaces.push(surface(rat(1, 2), 1, int(1), int(0)));
        assert!(!corti_check(&inst).unwrap().holds);

        inst.mult_h = int(-1);
        assert!(matches!(corti_check(&inst), Err(TowerError::Inconsistent(_))));
    }

    #[test]
    fn corti_chain_is_evaluated() {
        let g = TowerGraph::chain(3, 1, 2).unwrap();
        let mut inst = CortiInstance::new(g, int(1), int(5));
        inst.surfaces.push(surface(rat(1, 3), 1, int(2), int(3)));
        inst.m0 = Some(vec![int(5), int(4)]);
        let r = corti_check(&inst).unwrap();
        let chain = r.chain.unwrap();
        // top = 2*5 + 1*3, weighted = 5 + 4
        assert_eq!(chain.values[0], int(13));
        assert_eq!(chain.values[1], int(9));
        assert!(chain.links[0]);
        assert!(chain.links[2]);
        inst.m0 = Some(vec![int(5)]);
        assert!(corti_check(&inst).is_err());
    }

    #[test]
    fn nu_below_xi_is_rejected() {
        let g = TowerGraph::chain(2, 2, 2).unwrap();
        let mut inst = CortiInstance::new(g, int(1), int(1));
        inst.surfaces.push(surface(int(1), 2, int(1), int(1)));
        assert!(matches!(corti_check(&inst), Err(TowerError::Inconsistent(_))));
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = TowerGraph> {
        (1..=max_n)
            .prop_flat_map(|n| {
                let pairs: Vec<(usize, usize)> = (1..=n)
                    .flat_map(|j| (1..j).map(move |i| (j, i)))
                    .filter(|&(j, i)| j != i + 1)
                    .collect();
                let m = pairs.len();
                (
                    Just(n),
                    Just(pairs),
                    proptest::collection::vec(any::<bool>(), m),
                    1..=n,
                    1..=n,
                )
            })
            .prop_map(|(n, pairs, pick, a, b)| {
                let extra: Vec<_> = pairs.into_iter().zip(pick).filter(|p| p.1).map(|p| p.0).collect();
                TowerGraph::with_chain(n, &extra, a.min(b), a.max(b)).unwrap()
            })
    }

    proptest! {
        #[test]
        fn factor_at_least_one(s0 in 1u64..=20, s1 in 0u64..=20, s2 in 0u64..=20) {
            let f = two_n_squared_factor(&SigmaTriple::new(s0, s1, s2).unwrap()).unwrap();
            prop_assert!(f >= int(1));
            // numerator minus denominator equals this sum of squares
            let (a, b, c) = (s0 as i64, s1 as i64, s2 as i64);
            let excess = (a + 2 * b + c).pow(2) - (a + b) * (a + 2 * b + 2 * c);
            prop_assert_eq!(excess, 2 * b * b + c * c + a * b + 2 * b * c);
        }

        #[test]
        fn kawakita_at_least_two(s in 1u64..=30, t in 1u64..=30) {
            prop_assume!(s <= t && s.gcd(&t) == 1);
            let k = kawakita_factor(s, t).unwrap();
            prop_assert!(k.cross_check);
            prop_assert!(k.factor >= int(2));
            prop_assert_eq!(k.factor == int(2), s == 1 && t == 1);
        }

        #[test]
        fn path_counts_satisfy_the_recursion(g in arb_graph(8)) {
            let p = g.path_counts();
            prop_assert_eq!(p[g.n() - 1], 1);
            for i in 1..g.n() {
                let incoming: u64 = g.edges().filter(|e| e.1 == i).map(|e| p[e.0 - 1]).sum();
                prop_assert_eq!(p[i - 1], incoming);
                let below_l: u64 = g.edges().filter(|e| e.1 == i && e.0 <= g.l()).map(|e| p[e.0 - 1]).sum();
                prop_assert!(p[i - 1] >= below_l && p[i - 1] >= 1);
            }
            let s = g.sigmas();
            prop_assert_eq!(s.s0 + s.s1 + s.s2, p.iter().sum::<u64>());
        }

        #[test]
        fn oracle_bounds_closed_form(g in arb_graph(6), v in 0i64..=9) {
            let v = int(v);
            let closed = min_quadratic(&g, &v).value;
            let mut prev: Option<Rational> = None;
            for res in [8u32, 16, 32, 64] {
                let o = min_quadratic_oracle(&g, &v, res).unwrap();
                prop_assert!(o >= closed);
                if let Some(p) = &prev {
                    prop_assert!(&o <= p);
                }
                prev = Some(o);
            }
        }
    }
}
