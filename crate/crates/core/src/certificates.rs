//! Exclusion verdicts assembled from the other modules, and the arithmetic
//! behind superrigidity of degree 1 del Pezzo fibrations.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dualgraph::{enumerate_worst_case, self_intersection, Singularity, WorstCase};
use crate::isolating::{family_report, IsolatingError, PointKind};
use crate::poly::rational::{self, int, Rational};
use crate::wps::{variable_names, CaseMark, FanoFamily, Kind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("the cone generators are linearly dependent")]
    DegenerateCone,
    #[error("n must be positive")]
    NonPositiveN,
    #[error("m must be nonnegative")]
    NegativeM,
    #[error("at least one fiber is needed")]
    NoFibers,
    #[error("every lambda must be positive")]
    NonPositiveLambda,
    #[error(transparent)]
    Isolating(#[from] IsolatingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Excluded,
    NotExcluded,
    /// Excluded away from a stratum left to another argument.
    Deferred,
    /// Not handled here; a link to another Mori fiber space exists.
    External,
    NotCovered,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterVerdict {
    pub center: String,
    pub status: Status,
    /// The quantity compared with the threshold.
    #[serde(with = "rational::serde_opt", skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
    #[serde(with = "rational::serde_opt", skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Rational>,
    pub detail: String,
}

impl CenterVerdict {
    fn new(center: &str, status: Status, detail: impl Into<String>) -> Self {
        CenterVerdict {
            center: center.into(),
            status,
            value: None,
            threshold: None,
            detail: detail.into(),
        }
    }

    fn compared(mut self, value: Rational, threshold: Rational) -> Self {
        self.value = Some(value);
        self.threshold = Some(threshold);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyVerdict {
    pub family: u32,
    pub kind: Kind,
    pub label: String,
    #[serde(with = "rational::serde_str")]
    pub k3: Rational,
    pub case: Option<CaseMark>,
    pub centers: Vec<CenterVerdict>,
    /// Curves, smooth points and cA1 points all excluded outright.
    pub curves_and_points_excluded: bool,
}

impl FamilyVerdict {
    pub fn center(&self, name: &str) -> Option<&CenterVerdict> {
        self.centers.iter().find(|c| c.center == name)
    }
}

fn stratum_text(kind: Kind, zeros: &[usize]) -> String {
    let names = variable_names(kind);
    let lhs: Vec<&str> = zeros.iter().map(|&i| names[i]).collect();
    format!("{}=0", lhs.join("="))
}

/// Verdicts for curves, smooth points, cA1 points and quotient points of a
/// general member of the family.
pub fn family_verdict(fam: &FanoFamily) -> Result<FamilyVerdict, CertificateError> {
    let k3 = fam.anticanonical_cube();
    let mut centers = Vec::new();

    let curve = if k3 <= Rational::one() {
        Status::Excluded
    } else {
        Status::NotExcluded
    };
    centers.push(
        CenterVerdict::new("curve", curve, "(-K)^3 <= 1 and every curve has (-K.C) >= 1")
            .compared(k3.clone(), Rational::one()),
    );

    for (name, kind) in [("smooth", PointKind::Smooth), ("cA1", PointKind::CA1)] {
        let r = family_report(fam, kind)?;
        let value = Rational::from_integer(r.bound.into()) * &k3;
        let (status, detail) = match (&r.not_covered, r.excluded) {
            (_, false) => (Status::NotExcluded, format!("isolating bound {} is too large", r.bound)),
            (Some(z), true) => (
                Status::Deferred,
                format!("deferred on stratum {}", stratum_text(fam.kind, z)),
            ),
            (None, true) => (Status::Excluded, format!("isolating divisors of degree <= {}", r.bound)),
        };
        centers.push(CenterVerdict::new(name, status, detail).compared(value, r.threshold));
    }

    centers.push(CenterVerdict::new(
        "quotient",
        Status::External,
        "link exists; handled by an explicit birational involution outside this crate",
    ));

    let done = centers[..3].iter().all(|c| c.status == Status::Excluded);
    Ok(FamilyVerdict {
        family: fam.id,
        kind: fam.kind,
        label: fam.label(),
        k3,
        case: fam.case,
        centers,
        curves_and_points_excluded: done,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdsVerdict {
    pub singularities: Vec<Singularity>,
    pub centers: Vec<CenterVerdict>,
    pub worst_case: WorstCase,
    /// `(Γ²)` on the surface for the worst configuration.
    #[serde(with = "rational::serde_str")]
    pub worst_self_intersection: Rational,
    pub superrigid: bool,
}

/// Verdict for sextic double solids whose singular points are of the
/// given kinds.
pub fn sds_verdict(kinds: &[Singularity]) -> SdsVerdict {
    let mut kinds = kinds.to_vec();
    kinds.sort();
    kinds.dedup();
    let mut centers = vec![CenterVerdict::new(
        "smooth",
        Status::Excluded,
        "excluded by the classical argument for smooth points",
    )];

    let worst = enumerate_worst_case(&kinds);
    let gamma_sq = self_intersection(&worst.attained_by);
    let curve = if gamma_sq <= Rational::zero() {
        Status::Excluded
    } else {
        Status::NotExcluded
    };
    centers.push(
        CenterVerdict::new(
            "curve",
            curve,
            format!("worst correction {} over {} configurations", rational::to_string(&worst.max_correction), worst.configs_checked),
        )
        .compared(gamma_sq.clone(), Rational::zero()),
    );

    for &s in &kinds {
        let v = match s {
            Singularity::CA1 => CenterVerdict::new(
                "cA1",
                Status::Excluded,
                "mult_p(D1.D2) > 2n^2 against (S.D1.D2) = 2n^2",
            )
            .compared(int(2), int(2)),
            Singularity::CA2 => CenterVerdict::new(
                "cA2",
                Status::NotCovered,
                "the multiplicity bound is proved for cA1 points only",
            ),
        };
        centers.push(v);
    }

    let superrigid = centers.iter().all(|c| c.status == Status::Excluded);
    SdsVerdict {
        singularities: kinds,
        centers,
        worst_case: worst,
        worst_self_intersection: gamma_sq,
        superrigid,
    }
}

/// A two-dimensional slice of `N_1` with basis `((−K)², ℓ)` and the two
/// extremal rays of `NE`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeData {
    pub generators: [(Rational, Rational); 2],
}

impl ConeData {
    pub fn new(g1: (Rational, Rational), g2: (Rational, Rational)) -> Result<Self, CertificateError> {
        let c = ConeData { generators: [g1, g2] };
        if c.det().is_zero() {
            return Err(CertificateError::DegenerateCone);
        }
        Ok(c)
    }

    fn det(&self) -> Rational {
        let [(a, b), (c, d)] = &self.generators;
        a * d - b * c
    }
}

/// Whether `(−K)² = (1, 0)` avoids the interior of the cone.
pub fn k2_condition(c: &ConeData) -> Result<bool, CertificateError> {
    let det = c.det();
    if det.is_zero() {
        return Err(CertificateError::DegenerateCone);
    }
    let [(_, g1y), (_, g2y)] = &c.generators;
    let a = g2y / &det;
    let b = -(g1y / &det);
    Ok(!(a > Rational::zero() && b > Rational::zero()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpInstance {
    pub n: Rational,
    pub m: Rational,
    pub lambdas: Vec<Rational>,
}

impl DpInstance {
    pub fn new(n: Rational, m: Rational, lambdas: Vec<Rational>) -> Result<Self, CertificateError> {
        if n <= Rational::zero() {
            return Err(CertificateError::NonPositiveN);
        }
        if m < Rational::zero() {
            return Err(CertificateError::NegativeM);
        }
        if lambdas.is_empty() {
            return Err(CertificateError::NoFibers);
        }
        if lambdas.iter().any(|l| *l <= Rational::zero()) {
            return Err(CertificateError::NonPositiveLambda);
        }
        Ok(DpInstance { n, m, lambdas })
    }

    pub fn k(&self) -> usize {
        self.lambdas.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpReport {
    #[serde(with = "rational::serde_str")]
    pub lb: Rational,
    #[serde(with = "rational::serde_str")]
    pub ub: Rational,
    #[serde(with = "rational::serde_str")]
    pub sum_lambda: Rational,
    /// `Σλ > m/n`.
    pub premise: bool,
    pub contradiction: bool,
    pub verdict: String,
}

pub const NO_CONTRADICTION: &str = "no contradiction forced";

/// The bounds `(−K·Z) > (k/2)n² + 2n²Σλ` and `(−K·Z) ≤ 2mn` on the
/// vertical part of `D₁·D₂`. When `Σλ > m/n` they are incompatible.
pub fn dp_contradiction(inst: &DpInstance) -> DpReport {
    let n = &inst.n;
    let n2 = n * n;
    let sum: Rational = inst.lambdas.iter().sum();
    let lb = Rational::new((inst.k() as i64).into(), 2.into()) * &n2 + int(2) * &n2 * &sum;
    let ub = int(2) * &inst.m * n;
    let premise = sum > &inst.m / n;
    let contradiction = premise && lb > ub;
    DpReport {
        verdict: if contradiction {
            "contradiction".into()
        } else {
            NO_CONTRADICTION.into()
        },
        lb,
        ub,
        sum_lambda: sum,
        premise,
        contradiction,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DpSweep {
    pub instances: usize,
    pub premise_holds: usize,
    pub contradictions: usize,
    /// Premise-violating instances reported as `no contradiction forced`.
    pub premise_fails_reported: usize,
    pub all_contradictory: bool,
}

/// `n ∈ 1..=5`, `m ∈ 0..=5`, `k ∈ 1..=3`, `λ_i ∈ {1/4, 2/4, …, 4}`, with
/// the `λ_i` taken as multisets.
pub fn dp_grid() -> Vec<DpInstance> {
    let lambdas: Vec<Rational> = (1..=16).map(|i| Rational::new(i.into(), 4.into())).collect();
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    for k in 1..=3 {
        let mut cur = vec![0usize; k];
        loop {
            tuples.push(cur.clone());
            // next nondecreasing tuple
            let mut i = k;
            while i > 0 && cur[i - 1] == lambdas.len() - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cur[i - 1] += 1;
            for j in i..k {
                cur[j] = cur[i - 1];
            }
        }
    }
    let mut out = Vec::new();
    for n in 1..=5 {
        for m in 0..=5 {
            for t in &tuples {
                let ls = t.iter().map(|&i| lambdas[i].clone()).collect();
                out.push(DpInstance::new(int(n), int(m), ls).expect("grid values are valid"));
            }
        }
    }
    out
}

pub fn dp_sweep() -> DpSweep {
    let grid = dp_grid();
    let mut s = DpSweep {
        instances: grid.len(),
        premise_holds: 0,
        contradictions: 0,
        premise_fails_reported: 0,
        all_contradictory: true,
    };
    for inst in &grid {
        let r = dp_contradiction(inst);
        if r.premise {
            s.premise_holds += 1;
            if r.contradiction {
                s.contradictions += 1;
            } else {
                s.all_contradictory = false;
            }
        } else if r.verdict == NO_CONTRADICTION {
            s.premise_fails_reported += 1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;
    use crate::wps::FamilyTable;
    use proptest::prelude::*;

    fn status(v: &FamilyVerdict, c: &str) -> Status {
        v.center(c).unwrap().status
    }

    #[test]
    fn family_6() {
        let fam = FamilyTable::embedded().hypersurface(6).unwrap();
        let v = family_verdict(fam).unwrap();
        assert!(v.curves_and_points_excluded);
        assert_eq!(status(&v, "quotient"), Status::External);
    }

    #[test]
    fn family_25_is_deferred() {
        let fam = FamilyTable::embedded().hypersurface(25).unwrap();
        let v = family_verdict(fam).unwrap();
        let s = v.center("smooth").unwrap();
        assert_eq!(s.status, Status::Deferred);
        assert_eq!(s.detail, "deferred on stratum x=y=z=0");
        assert_eq!(status(&v, "cA1"), Status::Excluded);
        assert!(!v.curves_and_points_excluded);
    }

    #[test]
    fn family_38_ca1() {
        let fam = FamilyTable::embedded().hypersurface(38).unwrap();
        let v = family_verdict(fam).unwrap();
        let c = v.center("cA1").unwrap();
        assert_eq!(c.status, Status::Excluded);
        // 24 (-K)^3 <= 2, i.e. 24 <= 2/(-K)^3 = 80/3
        assert_eq!(c.value, Some(int(24) * fam.anticanonical_cube()));
        assert_eq!(int(2) / fam.anticanonical_cube(), rat(80, 3));
    }

    #[test]
    fn every_family() {
        for fam in FamilyTable::embedded().families() {
            let v = family_verdict(fam).unwrap();
            assert_eq!(status(&v, "curve"), Status::Excluded, "{}", fam.id);
            assert_eq!(status(&v, "cA1"), Status::Excluded, "{}", fam.id);
            let smooth = status(&v, "smooth");
            if fam.kind == Kind::Hypersurface && fam.id == 25 {
                assert_eq!(smooth, Status::Deferred);
            } else {
                assert_eq!(smooth, Status::Excluded, "{}", fam.id);
                assert!(v.curves_and_points_excluded);
            }
        }
    }

    #[test]
    fn sds() {
        let v = sds_verdict(&[Singularity::CA1]);
        assert!(v.superrigid);
        assert_eq!(v.worst_self_intersection, rat(-1, 2));
        let v = sds_verdict(&[Singularity::CA1, Singularity::CA2]);
        assert!(!v.superrigid);
        assert_eq!(v.worst_case.max_correction, int(2));
        assert_eq!(v.worst_self_intersection, int(0));
        assert_eq!(v.centers.iter().find(|c| c.center == "curve").unwrap().status, Status::Excluded);
        assert_eq!(v.centers.iter().find(|c| c.center == "cA2").unwrap().status, Status::NotCovered);
    }

    fn g(a: i64, b: i64) -> (Rational, Rational) {
        (int(a), int(b))
    }

    #[test]
    fn k2_examples() {
        assert!(k2_condition(&ConeData::new(g(1, 0), g(0, 1)).unwrap()).unwrap());
        assert!(!k2_condition(&ConeData::new(g(1, -1), g(1, 1)).unwrap()).unwrap());
        assert!(k2_condition(&ConeData::new(g(1, 0), g(1, 5)).unwrap()).unwrap());
        assert!(k2_condition(&ConeData::new(g(0, 1), g(-1, 1)).unwrap()).unwrap());
        assert_eq!(ConeData::new(g(1, 2), g(2, 4)), Err(CertificateError::DegenerateCone));
    }

    #[test]
    fn dp_examples() {
        let r = dp_contradiction(&DpInstance::new(int(1), int(0), vec![int(1)]).unwrap());
        assert_eq!((r.lb.clone(), r.ub.clone(), r.contradiction), (rat(5, 2), int(0), true));
        let r = dp_contradiction(&DpInstance::new(int(2), int(1), vec![int(1)]).unwrap());
        assert_eq!((r.lb.clone(), r.ub.clone(), r.contradiction), (int(10), int(4), true));
        let r = dp_contradiction(&DpInstance::new(int(1), int(3), vec![int(1)]).unwrap());
        assert!(!r.premise && !r.contradiction);
        assert_eq!(r.verdict, NO_CONTRADICTION);
        assert_eq!(DpInstance::new(int(0), int(0), vec![int(1)]), Err(CertificateError::NonPositiveN));
        assert_eq!(DpInstance::new(int(1), int(0), vec![]), Err(CertificateError::NoFibers));
    }

    #[test]
    fn dp_grid_sweep() {
        let s = dp_sweep();
        // 16 + 136 + 816 multisets of lambdas, 30 pairs (n, m)
        assert_eq!(s.instances, 30 * (16 + 136 + 816));
        assert!(s.all_contradictory);
        assert_eq!(s.contradictions, s.premise_holds);
        assert_eq!(s.premise_holds + s.premise_fails_reported, s.instances);
        assert!(s.premise_fails_reported > 0);
    }

    proptest! {
        #[test]
        fn k2_scaling(a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6, s in 1i64..=9, t in 1i64..=9) {
            prop_assume!(a * d != b * c);
            let base = k2_condition(&ConeData::new(g(a, b), g(c, d)).unwrap()).unwrap();
            let scaled = ConeData::new((int(a * s), int(b * s)), (rat(c, t), rat(d, t))).unwrap();
            prop_assert_eq!(k2_condition(&scaled).unwrap(), base);
            let swapped = ConeData::new(g(c, d), g(a, b)).unwrap();
            prop_assert_eq!(k2_condition(&swapped).unwrap(), base);
        }

        #[test]
        fn dp_premise_forces_contradiction(n in 1i64..=20, m in 0i64..=20, ls in proptest::collection::vec(1i64..=40, 1..5)) {
            let lambdas: Vec<Rational> = ls.iter().map(|&l| rat(l, 8)).collect();
            let r = dp_contradiction(&DpInstance::new(int(n), int(m), lambdas).unwrap());
            if r.premise {
                prop_assert!(r.lb > r.ub);
            }
        }
    }
}
