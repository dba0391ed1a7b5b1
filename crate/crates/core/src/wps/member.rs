use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{FanoFamily, Kind, WpsError};
use crate::poly::rational::{self, Rational};
use crate::poly::{monomials_of_weighted_degree, MPoly};

pub fn variable_names(kind: Kind) -> &'static [&'static str] {
    match kind {
        Kind::Hypersurface => &["x", "y", "z", "t", "w"],
        Kind::Wci2 => &["x", "y", "z", "t", "v", "w"],
    }
}

/// Defining polynomial(s) with a coefficient in `1..=97` on every monomial
/// of the right weighted degree. The same seed gives the same output.
pub fn generic_member(fam: &FanoFamily, seed: u64) -> Vec<MPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = variable_names(fam.kind);
    fam.degrees
        .iter()
        .map(|&d| {
            let monos = monomials_of_weighted_degree(fam.weights.as_slice(), d as u64);
            MPoly::from_terms(
                vars,
                monos
                    .into_iter()
                    .map(|m| (m.0, Rational::from_integer(rng.gen_range(1..=97).into()))),
            )
        })
        .collect()
}

/// Families whose restriction to `x = y = 0` is tabulated.
pub const DESCR_FAMILIES: [u32; 7] = [16, 17, 25, 31, 36, 46, 47];

struct DescrRow {
    id: u32,
    /// Exponents over `(z, t, w)`.
    shape: &'static [[u32; 3]],
    /// Each condition asks that at least one of the listed monomials has a
    /// nonzero coefficient.
    conditions: &'static [&'static [[u32; 3]]],
}

const W2Z: [u32; 3] = [1, 0, 2];
const T3: [u32; 3] = [0, 3, 0];

const ROWS: [DescrRow; 7] = [
    DescrRow {
        id: 16,
        shape: &[W2Z, T3, [2, 2, 0], [4, 1, 0], [6, 0, 0]],
        conditions: &[&[W2Z], &[T3]],
    },
    DescrRow {
        id: 17,
        shape: &[[4, 0, 0], T3, [0, 2, 1], [0, 0, 3]],
        conditions: &[&[[4, 0, 0]]],
    },
    DescrRow {
        id: 25,
        shape: &[[0, 2, 1], [1, 3, 0], [5, 0, 0]],
        conditions: &[&[[0, 2, 1], [1, 3, 0]], &[[5, 0, 0]]],
    },
    DescrRow {
        id: 31,
        shape: &[W2Z, [0, 2, 1], [4, 0, 0]],
        conditions: &[&[W2Z], &[[4, 0, 0]]],
    },
    DescrRow {
        id: 36,
        shape: &[W2Z, T3, [3, 1, 0]],
        conditions: &[&[W2Z], &[T3], &[[3, 1, 0]]],
    },
    DescrRow {
        id: 46,
        shape: &[T3, [7, 0, 0]],
        conditions: &[&[T3], &[[7, 0, 0]]],
    },
    DescrRow {
        id: 47,
        shape: &[W2Z, T3],
        conditions: &[&[W2Z], &[T3]],
    },
];

fn monomial_label(e: &[u32; 3]) -> String {
    let names = ["z", "t", "w"];
    let mut parts = Vec::new();
    // print w, t, z in that order to follow the usual way of writing them
    for i in [2, 1, 0] {
        match e[i] {
            0 => {}
            1 => parts.push(names[i].to_string()),
            k => parts.push(format!("{}^{k}", names[i])),
        }
    }
    parts.join("")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub label: String,
    pub holds: bool,
}

/// `f(0, 0, z, t, w)` together with the coefficient conditions it has to
/// meet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descr {
    pub family: u32,
    #[serde(serialize_with = "ser_poly")]
    pub restricted: MPoly,
    /// The substitution applied before reading coefficients, if any.
    pub normalization: Option<String>,
    pub shape_ok: bool,
    pub conditions: Vec<Condition>,
    pub conditions_hold: bool,
    #[serde(with = "rational::serde_str")]
    pub two_over_k3: Rational,
}

fn ser_poly<S: serde::Serializer>(p: &MPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Restriction of a member of one of the tabulated families to `x = y = 0`,
/// checked against the expected shape and coefficient conditions.
///
/// For family 17 a member generally also contains `t w^2`; when the `w^3`
/// coefficient `δ` is nonzero it is removed by `w ↦ w − (c/3δ) t`, which
/// preserves `x = y = 0` and the other coefficient conditions.
pub fn restrict_descrf(fam: &FanoFamily, f: &MPoly) -> Result<Descr, WpsError> {
    let row = ROWS
        .iter()
        .find(|r| r.id == fam.id && fam.kind == Kind::Hypersurface)
        .ok_or(WpsError::NoDescription(fam.id))?;
    let d = fam.degrees[0] as u64;
    if f.arity() != 5 || f.weighted_homogeneous_degree(fam.weights.as_slice()) != Some(d) {
        return Err(WpsError::DegreeMismatch { expected: d });
    }
    let zero = Rational::zero();
    let mut g = f.specialize(0, &zero).specialize(1, &zero).project_vars(&[2, 3, 4])?;
    let mut normalization = None;
    if fam.id == 17 {
        let c = g.coefficient(&[0, 1, 2]);
        let delta = g.coefficient(&[0, 0, 3]);
        if !c.is_zero() && !delta.is_zero() {
            let shift = &c / (Rational::from_integer(3.into()) * &delta);
            let images = [
                g.var_like(0),
                g.var_like(1),
                &g.var_like(2) - &g.var_like(1).scale(&shift),
            ];
            g = g.compose(&images)?;
            normalization = Some(format!("w -> w - {}*t", rational::to_string(&shift)));
        }
    }
    let shape_ok = g
        .terms()
        .all(|(m, _)| row.shape.iter().any(|e| e.as_slice() == m.exponents()));
    let conditions: Vec<Condition> = row
        .conditions
        .iter()
        .map(|alts| {
            let holds = alts.iter().any(|e| !g.coefficient(e).is_zero());
            let label = if alts.len() == 1 {
                format!("coeff({}) != 0", monomial_label(&alts[0]))
            } else {
                let names: Vec<String> = alts.iter().map(monomial_label).collect();
                format!("coeffs({}) not all zero", names.join(", "))
            };
            Condition { label, holds }
        })
        .collect();
    let conditions_hold = conditions.iter().all(|c| c.holds);
    Ok(Descr {
        family: fam.id,
        restricted: g,
        normalization,
        shape_ok,
        conditions,
        conditions_hold,
        two_over_k3: Rational::from_integer(2.into()) / fam.anticanonical_cube(),
    })
}
