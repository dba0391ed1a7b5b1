use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{WeightSystem, WpsError};
use crate::poly::rational::{self, Rational};

pub const EMBEDDED_DATA: &str = include_str!("../../data/families.json");
const MANIFEST: &str = include_str!("../../data/families.manifest");

fn manifest_field(key: &str) -> &'static str {
    MANIFEST
        .lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .expect("manifest field")
}

fn manifest_sha256() -> &'static str {
    manifest_field("sha256")
}

fn manifest_version() -> &'static str {
    manifest_field("version")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    #[serde(rename = "hyp")]
    Hypersurface,
    #[serde(rename = "wci2")]
    Wci2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseMark {
    Heart,
    Diamond,
    Club,
    Blank,
}

impl CaseMark {
    pub fn symbol(self) -> &'static str {
        match self {
            CaseMark::Heart => "♥",
            CaseMark::Diamond => "♦",
            CaseMark::Club => "♣",
            CaseMark::Blank => "",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseMark::Heart => "heart",
            CaseMark::Diamond => "diamond",
            CaseMark::Club => "club",
            CaseMark::Blank => "blank",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "1-a")]
    OneA,
    #[serde(rename = "1-b")]
    OneB,
    #[serde(rename = "1-c")]
    OneC,
    #[serde(rename = "2-a")]
    TwoA,
    #[serde(rename = "2-b")]
    TwoB,
    #[serde(rename = "2-c")]
    TwoC,
}

impl Variant {
    pub fn is_chart_based(self) -> bool {
        matches!(self, Variant::TwoA | Variant::TwoB | Variant::TwoC)
    }

    /// Number of dropped indices the variant takes.
    pub fn drop_count(self) -> usize {
        match self {
            Variant::OneA | Variant::TwoA => 0,
            Variant::OneB | Variant::TwoB => 1,
            Variant::OneC | Variant::TwoC => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Variant::OneA => "1-a",
            Variant::OneB => "1-b",
            Variant::OneC => "1-c",
            Variant::TwoA => "2-a",
            Variant::TwoB => "2-b",
            Variant::TwoC => "2-c",
        }
    }
}

/// Which isolating-divisor bound the exclusion argument uses for a family.
///
/// Chart-based variants list the charts that cover the relevant points;
/// `excluded_stratum` names coordinates whose common zero locus is left to
/// an argument outside this crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub drop: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub charts: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub excluded_stratum: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanoFamily {
    pub id: u32,
    pub kind: Kind,
    pub weights: WeightSystem,
    pub degrees: Vec<u32>,
    #[serde(with = "rational::serde_str")]
    pub k3: Rational,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseMark>,
    pub smooth_recipe: Recipe,
    pub ca1_recipe: Recipe,
}

impl FanoFamily {
    /// Label used in the tables, e.g. `X_8 ⊂ P(1,1,1,2,4)`.
    pub fn label(&self) -> String {
        let ds: Vec<String> = self.degrees.iter().map(u32::to_string).collect();
        let ws: Vec<String> = self.weights.as_slice().iter().map(u32::to_string).collect();
        format!("X_{{{}}} ⊂ P({})", ds.join(","), ws.join(","))
    }

    /// `d/∏a_i` for a hypersurface, `d_1 d_2/∏a_i` for a codimension-2
    /// complete intersection.
    pub fn anticanonical_cube(&self) -> Rational {
        let num: u64 = self.degrees.iter().map(|&d| d as u64).product();
        Rational::new(num.into(), self.weights.product().into())
    }

    /// Index one: the degrees sum to `Σa_i − 1`.
    pub fn index_one(&self) -> bool {
        let d: u64 = self.degrees.iter().map(|&d| d as u64).sum();
        d + 1 == self.weights.sum()
    }

    fn shape_ok(&self) -> bool {
        match self.kind {
            Kind::Hypersurface => self.weights.len() == 5 && self.degrees.len() == 1,
            Kind::Wci2 => {
                self.weights.len() == 6 && self.degrees.len() == 2 && self.degrees[0] <= self.degrees[1]
            }
        }
    }

    pub fn verify(&self) -> RowReport {
        let computed = self.anticanonical_cube();
        let case_computed = classify_case(self).ok();
        let k3_ok = computed == self.k3;
        let index_ok = self.index_one();
        let case_ok = match self.kind {
            Kind::Hypersurface => case_computed.is_some() && case_computed == self.case,
            Kind::Wci2 => self.case.is_none(),
        };
        let k3_at_most_one = computed <= Rational::from_integer(1.into());
        RowReport {
            id: self.id,
            label: self.label(),
            k3_stored: rational::to_string(&self.k3),
            k3_computed: rational::to_string(&computed),
            case_stored: self.case.map(|c| c.name().to_string()),
            case_computed: case_computed.map(|c| c.name().to_string()),
            index_ok,
            k3_ok,
            case_ok,
            k3_at_most_one,
            pass: self.shape_ok() && index_ok && k3_ok && case_ok && k3_at_most_one,
        }
    }
}

/// Outcome of checking one table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowReport {
    pub id: u32,
    pub label: String,
    pub k3_stored: String,
    pub k3_computed: String,
    pub case_stored: Option<String>,
    pub case_computed: Option<String>,
    pub index_ok: bool,
    pub k3_ok: bool,
    pub case_ok: bool,
    pub k3_at_most_one: bool,
    pub pass: bool,
}

fn pair_max_lcm(w: &[u32], indices: &[usize]) -> u64 {
    let mut best = 0u64;
    for &i in indices {
        for &j in indices {
            best = best.max((w[i] as u64).lcm(&(w[j] as u64)));
        }
    }
    best
}

/// Case mark of a hypersurface family, tested in the order ♥, ♦, ♣.
pub fn classify_case(fam: &FanoFamily) -> Result<CaseMark, WpsError> {
    if fam.kind != Kind::Hypersurface {
        return Err(WpsError::NotHypersurface(fam.id));
    }
    let a = fam.weights.sorted();
    let d = fam.degrees[0] as u64;
    let two_over = Rational::from_integer(2.into()) / fam.anticanonical_cube();
    let fits = |indices: &[usize]| Rational::from_integer(pair_max_lcm(a, indices).into()) <= two_over;
    if fits(&[0, 1, 2, 3, 4]) {
        return Ok(CaseMark::Heart);
    }
    if a[3] < a[4] && d % a[4] as u64 == 0 && fits(&[0, 1, 2, 3]) {
        return Ok(CaseMark::Diamond);
    }
    if a[2] < a[3] && a[3] < a[4] && d % a[3] as u64 == 0 && fits(&[0, 1, 2, 4]) {
        return Ok(CaseMark::Club);
    }
    Ok(CaseMark::Blank)
}

#[derive(Debug, Clone)]
pub struct FamilyTable {
    families: Vec<FanoFamily>,
    sha256: String,
}

impl FamilyTable {
    /// The table compiled into the crate.
    pub fn embedded() -> &'static FamilyTable {
        static TABLE: OnceLock<FamilyTable> = OnceLock::new();
        TABLE.get_or_init(|| FamilyTable::from_json(EMBEDDED_DATA).expect("embedded family data"))
    }

    pub fn from_json(text: &str) -> Result<Self, WpsError> {
        let families: Vec<FanoFamily> =
            serde_json::from_str(text).map_err(|e| WpsError::Data(e.to_string()))?;
        Ok(FamilyTable {
            families,
            sha256: sha256_hex(text.as_bytes()),
        })
    }

    pub fn families(&self) -> &[FanoFamily] {
        &self.families
    }

    pub fn get(&self, id: u32, kind: Kind) -> Result<&FanoFamily, WpsError> {
        self.families
            .iter()
            .find(|f| f.id == id && f.kind == kind)
            .ok_or(WpsError::UnknownFamily(id))
    }

    pub fn hypersurface(&self, id: u32) -> Result<&FanoFamily, WpsError> {
        self.get(id, Kind::Hypersurface)
    }

    pub fn sha256(&self) -> &str {
        &self.sha256
    }

    pub fn matches_manifest(&self) -> bool {
        self.sha256 == manifest_sha256()
    }

    pub fn manifest_version() -> &'static str {
        manifest_version()
    }

    pub fn manifest_sha256() -> &'static str {
        manifest_sha256()
    }

    pub fn verify(&self) -> Vec<RowReport> {
        self.families.iter().map(FanoFamily::verify).collect()
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::rat;

    fn table() -> &'static FamilyTable {
        FamilyTable::embedded()
    }

    #[test]
    fn embedded_data_matches_manifest() {
        assert!(table().matches_manifest());
        assert_eq!(FamilyTable::manifest_version(), "1");
    }

    #[test]
    fn counts() {
        let fs = table().families();
        assert_eq!(fs.iter().filter(|f| f.kind == Kind::Hypersurface).count(), 78);
        assert_eq!(fs.iter().filter(|f| f.kind == Kind::Wci2).count(), 18);
    }

    #[test]
    fn cube_examples() {
        assert_eq!(table().hypersurface(6).unwrap().anticanonical_cube(), rat(1, 1));
        assert_eq!(table().hypersurface(95).unwrap().anticanonical_cube(), rat(1, 330));
        assert_eq!(table().get(85, Kind::Wci2).unwrap().anticanonical_cube(), rat(1, 180));
    }

    #[test]
    fn case_examples() {
        let t = table();
        assert_eq!(classify_case(t.hypersurface(15).unwrap()).unwrap(), CaseMark::Heart);
        assert_eq!(classify_case(t.hypersurface(11).unwrap()).unwrap(), CaseMark::Diamond);
        assert_eq!(classify_case(t.hypersurface(74).unwrap()).unwrap(), CaseMark::Club);
        assert_eq!(classify_case(t.hypersurface(41).unwrap()).unwrap(), CaseMark::Heart);
        assert_eq!(
            classify_case(t.get(85, Kind::Wci2).unwrap()),
            Err(WpsError::NotHypersurface(85))
        );
    }

    #[test]
    fn family_41_meets_both_heart_and_diamond() {
        let f = table().hypersurface(41).unwrap();
        let a = f.weights.sorted();
        let two_over = rat(2, 1) / &f.k3;
        let d = f.degrees[0] as u64;
        assert!(a[3] < a[4] && d % a[4] as u64 == 0);
        assert!(Rational::from_integer(pair_max_lcm(a, &[0, 1, 2, 3]).into()) <= two_over);
    }

    #[test]
    fn every_row_verifies() {
        for r in table().verify() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn corrupted_row_is_caught() {
        let text = EMBEDDED_DATA.replacen("\"k3\": \"1\"", "\"k3\": \"2\"", 1);
        let t = FamilyTable::from_json(&text).unwrap();
        assert!(!t.matches_manifest());
        let bad: Vec<u32> = t.verify().iter().filter(|r| !r.pass).map(|r| r.id).collect();
        assert_eq!(bad, vec![6]);
    }
}
