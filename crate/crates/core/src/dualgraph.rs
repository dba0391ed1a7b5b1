//! Extended dual graphs `A_{n,k}` of a curve through a Du Val point of a
//! surface, for lines through cA1 and cA2 points of a sextic double solid.
//!
//! The germ is `−w² + x⁴f₂ + x³f₃ + x²f₄ + xf₅ + f₆` at `(1:0:0:0:0)` with
//! `f_i ∈ ℚ[y, z, t]`, the line is `z = t = w − (λx²y + μxy² + νy³) = 0`
//! and the surface is a general member `t = θz` of the pencil spanned by
//! `z` and `t`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::poly::rational::{self, Rational};
use crate::poly::{MPoly, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualGraphError {
    #[error("A_{{{n},{k}}} needs 1 <= k <= n")]
    BadType { n: u32, k: u32 },
    #[error("contact order must be 1, 2 or 3, got {0}")]
    BadContact(u8),
    #[error("alpha2 is needed to decide this germ")]
    MissingAlpha2,
    #[error("alpha2 is not consulted for this germ")]
    UnexpectedAlpha2,
    #[error("a cA2 germ has no y*l(z,t) term")]
    EllOnCA2,
    #[error("all contact coefficients are zero")]
    NoContact,
    #[error("the line does not lie on the solid: f{0}(y,0,0) is wrong")]
    NotOnSolid(usize),
    #[error("f{0} must be a form of degree {0} in y, z, t")]
    NotAForm(usize),
    #[error("the germ is not of type cA1 or cA2")]
    NotCA1OrCA2,
    #[error("every trial value of theta is special for this germ")]
    NoGeneralTheta,
    #[error("contact orders add up to {0}, more than 3")]
    TooMuchContact(u32),
    #[error("{graph} does not occur for a {sing} point with contact {m}")]
    NotAllowed {
        sing: Singularity,
        m: u8,
        graph: GraphType,
    },
    #[error("cannot parse point '{0}'")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Singularity {
    #[serde(rename = "cA1")]
    CA1,
    #[serde(rename = "cA2")]
    CA2,
}

impl fmt::Display for Singularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Singularity::CA1 => "cA1",
            Singularity::CA2 => "cA2",
        })
    }
}

impl std::str::FromStr for Singularity {
    type Err = DualGraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "cA1" | "ca1" => Ok(Singularity::CA1),
            "cA2" | "ca2" => Ok(Singularity::CA2),
            _ => Err(DualGraphError::Syntax(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphType {
    n: u32,
    k: u32,
}

impl GraphType {
    pub fn new(n: u32, k: u32) -> Result<Self, DualGraphError> {
        if k == 0 || k > n {
            return Err(DualGraphError::BadType { n, k });
        }
        Ok(GraphType { n, k })
    }

    pub const A11: GraphType = GraphType { n: 1, k: 1 };
    pub const A21: GraphType = GraphType { n: 2, k: 1 };
    pub const A32: GraphType = GraphType { n: 3, k: 2 };
    pub const A53: GraphType = GraphType { n: 5, k: 3 };

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `k(n − k + 1)/(n + 1)`.
    pub fn correction_term(&self) -> Rational {
        Rational::new(
            (self.k * (self.n - self.k + 1)).into(),
            (self.n + 1).into(),
        )
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{{{},{}}}", self.n, self.k)
    }
}

impl Serialize for GraphType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn correction_term(n: u32, k: u32) -> Result<Rational, DualGraphError> {
    Ok(GraphType::new(n, k)?.correction_term())
}

/// Types that can occur for a point of the given kind and contact order.
pub fn allowed_types(sing: Singularity, m: u8) -> Result<&'static [GraphType], DualGraphError> {
    use GraphType as G;
    Ok(match (sing, m) {
        (Singularity::CA1, 1) => &[G::A11],
        (Singularity::CA1, 2) => &[G::A11, G::A32],
        (Singularity::CA1, 3) => &[G::A11, G::A32, G::A53],
        (Singularity::CA2, 1) => &[G::A21],
        (Singularity::CA2, 2) => &[G::A32],
        (Singularity::CA2, 3) => &[G::A32, G::A53],
        (_, m) => return Err(DualGraphError::BadContact(m)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GermFlags {
    pub singularity: Singularity,
    /// `mult_p Γ ∩ Δ`.
    pub m: u8,
    pub ell_nonzero: bool,
    pub alpha2_nonzero: Option<bool>,
}

impl GermFlags {
    fn needs_alpha2(&self) -> bool {
        self.m == 3 && (self.singularity == Singularity::CA2 || !self.ell_nonzero)
    }

    pub fn validate(&self) -> Result<(), DualGraphError> {
        if !(1..=3).contains(&self.m) {
            return Err(DualGraphError::BadContact(self.m));
        }
        if self.singularity == Singularity::CA2 && self.ell_nonzero {
            return Err(DualGraphError::EllOnCA2);
        }
        match (self.needs_alpha2(), self.alpha2_nonzero) {
            (true, None) => Err(DualGraphError::MissingAlpha2),
            (false, Some(_)) => Err(DualGraphError::UnexpectedAlpha2),
            _ => Ok(()),
        }
    }
}

pub fn classify_germ(f: &GermFlags) -> Result<GraphType, DualGraphError> {
    f.validate()?;
    use GraphType as G;
    let alpha2 = f.alpha2_nonzero.unwrap_or(false);
    Ok(match (f.singularity, f.m) {
        (Singularity::CA1, 1) => G::A11,
        (Singularity::CA1, 2) if f.ell_nonzero => G::A11,
        (Singularity::CA1, 2) => G::A32,
        (Singularity::CA1, 3) if f.ell_nonzero => G::A11,
        (Singularity::CA2, 1) => G::A21,
        (Singularity::CA2, 2) => G::A32,
        (_, _) if alpha2 => G::A32,
        (_, _) => G::A53,
    })
}

/// Trial values for `θ`, tried in order until none of the coefficients
/// read off degenerates.
pub const THETAS: [(i64, i64); 6] = [(7, 3), (11, 5), (-13, 7), (17, 4), (-19, 11), (23, 6)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub flags: GermFlags,
    #[serde(with = "rational::serde_str")]
    pub theta: Rational,
}

const Y: usize = 0;

fn check_form(f: &MPoly, degree: usize) -> Result<(), DualGraphError> {
    let ok = f.arity() == 3 && f.terms().all(|(m, _)| m.total_degree() as usize == degree);
    if ok {
        Ok(())
    } else {
        Err(DualGraphError::NotAForm(degree))
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Reads the flags of the germ off its equation. `fs` holds `f₂, …, f₆`
/// as polynomials in `y, z, t`.
pub fn flags_from_equation(
    fs: &[MPoly; 5],
    lambda: &Rational,
    mu: &Rational,
    nu: &Rational,
) -> Result<Extraction, DualGraphError> {
    for (i, f) in fs.iter().enumerate() {
        check_form(f, i + 2)?;
    }
    // f_i(y, 0, 0) against (λx²y + μxy² + νy³)²
    let expected = [
        lambda * lambda,
        int(2) * lambda * mu,
        mu * mu + int(2) * lambda * nu,
        int(2) * mu * nu,
        nu * nu,
    ];
    for (i, (f, e)) in fs.iter().zip(&expected).enumerate() {
        let mut exps = [0u32; 3];
        exps[Y] = (i + 2) as u32;
        if &f.coefficient(&exps) != e {
            return Err(DualGraphError::NotOnSolid(i + 2));
        }
    }
    let m = if !lambda.is_zero() {
        1
    } else if !mu.is_zero() {
        2
    } else if !nu.is_zero() {
        3
    } else {
        return Err(DualGraphError::NoContact);
    };

    let f2 = &fs[0];
    let singularity = quadric_type(f2, &fs[1])?;
    // f₂ = λ²y² + y ℓ(z,t) + q(z,t)
    let ell = [f2.coefficient(&[1, 1, 0]), f2.coefficient(&[1, 0, 1])];
    let q = [
        f2.coefficient(&[0, 2, 0]),
        f2.coefficient(&[0, 1, 1]),
        f2.coefficient(&[0, 0, 2]),
    ];
    let ell_poly_nonzero = ell.iter().any(|c| !c.is_zero());
    let q_poly_nonzero = q.iter().any(|c| !c.is_zero());
    // α₂: the y²z coefficient once t = θz
    let a2 = [fs[1].coefficient(&[2, 1, 0]), fs[1].coefficient(&[2, 0, 1])];
    let a2_poly_nonzero = a2.iter().any(|c| !c.is_zero());

    for &(num, den) in &THETAS {
        let theta = Rational::new(num.into(), den.into());
        let zeta = &ell[0] + &theta * &ell[1];
        let eta = &q[0] + &theta * &q[1] + &theta * &theta * &q[2];
        let alpha2 = &a2[0] + &theta * &a2[1];
        let degenerate = (ell_poly_nonzero && zeta.is_zero())
            || (q_poly_nonzero && eta.is_zero())
            || (a2_poly_nonzero && alpha2.is_zero());
        if degenerate {
            continue;
        }
        let mut flags = GermFlags {
            singularity,
            m,
            ell_nonzero: singularity == Singularity::CA1 && !zeta.is_zero(),
            alpha2_nonzero: None,
        };
        if flags.needs_alpha2() {
            flags.alpha2_nonzero = Some(!alpha2.is_zero());
        }
        flags.validate()?;
        return Ok(Extraction { flags, theta });
    }
    Err(DualGraphError::NoGeneralTheta)
}

/// cA1 when the quadric `−w² + f₂` has rank at least 3; cA2 when `f₂ = L²`
/// and `L` does not divide `f₃`.
fn quadric_type(f2: &MPoly, f3: &MPoly) -> Result<Singularity, DualGraphError> {
    let half = Rational::new(1.into(), 2.into());
    let mut rows = vec![vec![Rational::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut e = [0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = f2.coefficient(&e);
            rows[i][j] = if i == j { c } else { c * &half };
        }
    }
    let gram = RatMatrix::from_rows(3, rows.clone());
    match gram.rank() {
        0 => Err(DualGraphError::NotCA1OrCA2),
        1 => {
            // L is proportional to any nonzero row of the Gram matrix
            let l = rows
                .iter()
                .find(|r| r.iter().any(|c| !c.is_zero()))
                .expect("rank one");
            let pivot = (0..3).find(|&i| !l[i].is_zero()).expect("nonzero row");
            // solve L = 0 for the pivot variable
            let mut images: Vec<MPoly> = (0..3).map(|i| f3.var_like(i)).collect();
            let mut sub = MPoly::zero_owned(f3.vars().to_vec());
            for i in (0..3).filter(|&i| i != pivot) {
                sub = &sub - &f3.var_like(i).scale(&(&l[i] / &l[pivot]));
            }
            images[pivot] = sub;
            let restricted = f3.compose(&images).map_err(|_| DualGraphError::NotCA1OrCA2)?;
            if restricted.is_zero() {
                Err(DualGraphError::NotCA1OrCA2)
            } else {
                Ok(Singularity::CA2)
            }
        }
        _ => Ok(Singularity::CA1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurvePoint {
    pub singularity: Singularity,
    pub m: u8,
    pub graph: GraphType,
}

impl CurvePoint {
    pub fn new(singularity: Singularity, m: u8, graph: GraphType) -> Result<Self, DualGraphError> {
        if !allowed_types(singularity, m)?.contains(&graph) {
            return Err(DualGraphError::NotAllowed {
                sing: singularity,
                m,
                graph,
            });
        }
        Ok(CurvePoint {
            singularity,
            m,
            graph,
        })
    }

    /// The allowed type with the largest correction term.
    pub fn worst(singularity: Singularity, m: u8) -> Result<Self, DualGraphError> {
        let graph = *allowed_types(singularity, m)?
            .iter()
            .max_by_key(|g| g.correction_term())
            .expect("nonempty row");
        Ok(CurvePoint {
            singularity,
            m,
            graph,
        })
    }

    /// `sing:m` or `sing:m@n.k`, e.g. `cA1:3@5.3`. Without a type the
    /// worst allowed one is taken.
    pub fn parse(text: &str) -> Result<Self, DualGraphError> {
        let bad = || DualGraphError::Syntax(text.to_string());
        let (head, graph) = match text.split_once('@') {
            Some((h, g)) => {
                let (n, k) = g.split_once('.').ok_or_else(bad)?;
                let n = n.trim().parse().map_err(|_| bad())?;
                let k = k.trim().parse().map_err(|_| bad())?;
                (h, Some(GraphType::new(n, k)?))
            }
            None => (text, None),
        };
        let (sing, m) = head.split_once(':').ok_or_else(bad)?;
        let sing: Singularity = sing.parse()?;
        let m: u8 = m.trim().parse().map_err(|_| bad())?;
        match graph {
            Some(g) => CurvePoint::new(sing, m, g),
            None => CurvePoint::worst(sing, m),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveConfig {
    pub points: Vec<CurvePoint>,
    /// `K_S · Γ`.
    #[serde(with = "rational::serde_str")]
    pub ks_gamma: Rational,
}

impl CurveConfig {
    pub fn new(points: Vec<CurvePoint>, ks_gamma: Rational) -> Result<Self, DualGraphError> {
        let total: u32 = points.iter().map(|p| p.m as u32).sum();
        if total > 3 {
            return Err(DualGraphError::TooMuchContact(total));
        }
        for p in &points {
            CurvePoint::new(p.singularity, p.m, p.graph)?;
        }
        Ok(CurveConfig { points, ks_gamma })
    }

    pub fn anticanonical(points: Vec<CurvePoint>) -> Result<Self, DualGraphError> {
        Self::new(points, Rational::zero())
    }

    pub fn correction_sum(&self) -> Rational {
        self.points.iter().map(|p| p.graph.correction_term()).sum()
    }
}

/// `(Γ²) = −2 − K_S·Γ + Σ k(n−k+1)/(n+1)` for a smooth rational `Γ`.
pub fn self_intersection(c: &CurveConfig) -> Rational {
    int(-2) - &c.ks_gamma + c.correction_sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveVerdict {
    #[serde(with = "rational::serde_str")]
    pub self_intersection: Rational,
    #[serde(with = "rational::serde_str")]
    pub gamma_delta: Rational,
    pub excluded: bool,
}

/// `(Γ·Δ) = (T|_S·Γ) − (Γ²)` with `(T|_S·Γ) = 1` for a line; the curve is
/// excluded when this is at least `(−K_X·Δ) = 1`.
pub fn exclusion_verdict(c: &CurveConfig) -> CurveVerdict {
    let s = self_intersection(c);
    let gd = Rational::one() - &s;
    CurveVerdict {
        excluded: gd >= Rational::one(),
        self_intersection: s,
        gamma_delta: gd,
    }
}

/// Every configuration of points on a line through cA1/cA2 points of the
/// given kinds: multisets of (kind, contact, allowed type) with contact
/// orders adding up to at most 3.
pub fn admissible_configs(kinds: &[Singularity]) -> Vec<CurveConfig> {
    let mut atoms = Vec::new();
    for &s in kinds {
        for m in 1..=3u8 {
            for &g in allowed_types(s, m).expect("m in range") {
                atoms.push(CurvePoint {
                    singularity: s,
                    m,
                    graph: g,
                });
            }
        }
    }
    let mut out = Vec::new();
    fn extend(
        atoms: &[CurvePoint],
        from: usize,
        budget: u8,
        cur: &mut Vec<CurvePoint>,
        out: &mut Vec<CurveConfig>,
    ) {
        out.push(CurveConfig {
            points: cur.clone(),
            ks_gamma: Rational::zero(),
        });
        for i in from..atoms.len() {
            if atoms[i].m <= budget {
                cur.push(atoms[i]);
                extend(atoms, i, budget - atoms[i].m, cur, out);
                cur.pop();
            }
        }
    }
    extend(&atoms, 0, 3, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WorstCase {
    #[serde(with = "rational::serde_str")]
    pub max_correction: Rational,
    pub attained_by: CurveConfig,
    pub configs_checked: usize,
}

pub fn worst_case_of(configs: &[CurveConfig]) -> Option<WorstCase> {
    let best = configs.iter().max_by_key(|c| c.correction_sum())?;
    Some(WorstCase {
        max_correction: best.correction_sum(),
        attained_by: best.clone(),
        configs_checked: configs.len(),
    })
}

pub fn enumerate_worst_case(kinds: &[Singularity]) -> WorstCase {
    worst_case_of(&admissible_configs(kinds)).expect("the empty configuration is always there")
}
