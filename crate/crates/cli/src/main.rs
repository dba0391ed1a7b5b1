use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use fanocert_core::certificates::{dp_contradiction, dp_sweep, family_verdict, sds_verdict, DpInstance};
use fanocert_core::defect::{self, BranchConfig};
use fanocert_core::dualgraph::{
    classify_germ, enumerate_worst_case, exclusion_verdict, CurveConfig, CurvePoint, GermFlags,
    Singularity,
};
use fanocert_core::isolating::{family_report, recipe_premise, PointKind};
use fanocert_core::poly::rational::{self, parse_rational};
use fanocert_core::poly::{parse_poly_owned, print_poly, Rational};
use fanocert_core::tower::{
    corti_check, kawakita_factor, min_quadratic, min_quadratic_oracle, two_n_squared_factor,
    CortiInstance, Surface, TowerGraph,
};
use fanocert_core::wps::{classify_case, generic_member, restrict_descrf, Kind, DESCR_FAMILIES};
use fanocert_core::{FamilyTable, FanoFamily, WeightSystem};

#[derive(Parser)]
#[command(name = "fanocert", version, about = "Exact certificates for maximal-center exclusion on Fano 3-folds")]
struct Cli {
    /// Print machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Family data file to use instead of the built-in table.
    #[arg(long, global = true, value_name = "PATH")]
    data: Option<PathBuf>,
    /// Seed for generic members.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check or list the family tables.
    #[command(subcommand)]
    Tables(TablesCmd),
    /// (-K)^3 of a family or of given weights and degrees.
    K3(K3Args),
    /// Heart/diamond/club/blank mark of a hypersurface family.
    ClassifyCase(FamilyArgs),
    /// Isolating-divisor bound and verdict for a family and point kind.
    Isolate(IsolateArgs),
    /// Blow-up towers and the 2n^2 inequality.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Dual graphs of a line through cA points on a surface.
    #[command(subcommand)]
    Dualgraph(DualgraphCmd),
    /// Defect of a double solid.
    #[command(subcommand)]
    Defect(DefectCmd),
    /// Exclusion verdicts.
    #[command(subcommand)]
    Exclude(ExcludeCmd),
    /// Parse a polynomial and print it in canonical form.
    Parse(ParseArgs),
}

#[derive(Subcommand)]
enum TablesCmd {
    /// Recompute every row of the tables.
    Verify,
    /// List the families.
    List,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    id: u32,
    /// Look the id up among the codimension-2 families.
    #[arg(long)]
    wci2: bool,
}

#[derive(Args)]
struct K3Args {
    #[arg(long, conflicts_with_all = ["weights", "degrees"])]
    id: Option<u32>,
    #[arg(long, requires = "id")]
    wci2: bool,
    /// Comma-separated weights.
    #[arg(long, value_delimiter = ',', requires = "degrees")]
    weights: Option<Vec<u32>>,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',', requires = "weights")]
    degrees: Option<Vec<u32>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PointArg {
    Smooth,
    #[value(name = "cA1")]
    Ca1,
}

impl PointArg {
    fn kind(self) -> PointKind {
        match self {
            PointArg::Smooth => PointKind::Smooth,
            PointArg::Ca1 => PointKind::CA1,
        }
    }
}

#[derive(Args)]
struct IsolateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum)]
    point: PointArg,
}

#[derive(Subcommand)]
enum TowerCmd {
    /// Path counts, Σ triple and the 2n^2 factor of a tower.
    Analyze(AnalyzeArgs),
    /// Factor of the Kawakita blow-up with weights (s, 2t-s, t, 1).
    Kawakita {
        #[arg(long)]
        s: u64,
        #[arg(long)]
        t: u64,
    },
    /// Corti's inequality for a tower and surfaces given in a JSON file.
    Corti {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Number of blow-ups.
    #[arg(long)]
    n: usize,
    /// Edges besides the chain, e.g. "3>1, 4>2".
    #[arg(long, default_value = "")]
    edges: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: usize,
    /// Also minimize the quadratic form for Σ p_i ν_i = V.
    #[arg(long, value_parser = rational_arg)]
    v: Option<Rational>,
    /// Grid resolution for the brute-force minimum (needs --v).
    #[arg(long, requires = "v")]
    resolution: Option<u32>,
}

#[derive(Subcommand)]
enum DualgraphCmd {
    /// Graph type of a germ from its coefficient flags.
    Classify {
        #[arg(long, value_parser = sing_arg)]
        sing: Singularity,
        #[arg(long)]
        m: u8,
        /// Whether the linear form ℓ is nonzero (0 or 1).
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        ell: u8,
        /// Whether α₂ is nonzero (0 or 1), when it matters.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        alpha2: Option<u8>,
    },
    /// Verdict for a line through the given points, e.g. "cA2:1,cA1:2@3.2".
    Exclude {
        #[arg(long)]
        points: String,
        /// K_S·Γ (0 for an anticanonical surface).
        #[arg(long, default_value = "0", value_parser = rational_arg)]
        ks_gamma: Rational,
    },
    /// Largest correction over all admissible configurations.
    WorstCase {
        #[arg(long, default_value = "cA1,cA2")]
        kinds: String,
    },
}

#[derive(Subcommand)]
enum DefectCmd {
    /// Condition matrix rank and defect from a branch config file.
    Compute {
        #[arg(long)]
        config: PathBuf,
    },
    /// Counting conditions only.
    Screen {
        #[arg(long)]
        r: u32,
        /// Comma-separated A_m indices m.
        #[arg(long, value_delimiter = ',')]
        types: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum ExcludeCmd {
    /// Verdicts for every center kind of a family.
    Family {
        #[arg(long, required_unless_present = "all")]
        id: Option<u32>,
        #[arg(long)]
        wci2: bool,
        /// Every family in the tables.
        #[arg(long, conflicts_with_all = ["id", "wci2"])]
        all: bool,
    },
    /// Superrigidity certificate for sextic double solids.
    Sds {
        #[arg(long, default_value = "cA1")]
        kinds: String,
    },
    /// Incompatible bounds for a degree 1 del Pezzo fibration.
    Dp {
        #[arg(long, value_parser = rational_arg, required_unless_present = "sweep")]
        n: Option<Rational>,
        #[arg(long, value_parser = rational_arg, required_unless_present = "sweep")]
        m: Option<Rational>,
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required_unless_present = "sweep")]
        lambdas: Vec<Rational>,
        /// Run the whole rational grid instead.
        #[arg(long, conflicts_with_all = ["n", "m", "lambdas"])]
        sweep: bool,
    },
}

#[derive(Args)]
struct ParseArgs {
    /// Comma-separated variable names.
    #[arg(long, default_value = "x,y,z,t,w")]
    vars: String,
    expr: String,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn sing_arg(s: &str) -> Result<Singularity, String> {
    s.parse().map_err(|_| format!("expected cA1 or cA2, got {s:?}"))
}

/// How a command can fail.
enum Failure {
    /// Bad input: exit 2 with the synopsis of the command.
    Usage(String),
    /// Something checked did not hold: exit 1.
    Verification(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    json: Value,
    /// Replaces the generic rendering of `json` in human mode.
    human: Option<String>,
    /// A verification failure to report after printing.
    failed: Option<String>,
}

impl Output {
    fn new(json: Value) -> Self {
        Output {
            json,
            human: None,
            failed: None,
        }
    }
}

fn q(x: &Rational) -> Value {
    Value::String(rational::to_string(x))
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn load_table(cli: &Cli) -> Result<FamilyTable, Failure> {
    match &cli.data {
        None => Ok(FamilyTable::embedded().clone()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            Ok(FamilyTable::from_json(&text)?)
        }
    }
}

/// The table for commands other than `tables verify`, which refuse data
/// that does not match the manifest.
fn checked_table(cli: &Cli) -> Result<FamilyTable, Failure> {
    let t = load_table(cli)?;
    if !t.matches_manifest() {
        return Err(Failure::Verification(format!(
            "family data hash {} does not match the manifest ({}); run `tables verify`",
            t.sha256(),
            FamilyTable::manifest_sha256()
        )));
    }
    Ok(t)
}

fn kind_of(wci2: bool) -> Kind {
    if wci2 {
        Kind::Wci2
    } else {
        Kind::Hypersurface
    }
}

fn family(t: &FamilyTable, id: u32, wci2: bool) -> Result<&FanoFamily, Failure> {
    Ok(t.get(id, kind_of(wci2))?)
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Hypersurface => "hyp",
        Kind::Wci2 => "wci2",
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Tables(TablesCmd::Verify) => tables_verify(cli),
        Cmd::Tables(TablesCmd::List) => {
            let t = checked_table(cli)?;
            let rows: Vec<Value> = t
                .families()
                .iter()
                .map(|f| {
                    let note = f.smooth_recipe.note.as_ref().or(f.ca1_recipe.note.as_ref());
                    json!({"id": f.id, "kind": f.kind, "label": f.label(), "k3": q(&f.k3),
                           "case": f.case.map(|c| c.name()), "note": note})
                })
                .collect();
            let human = t
                .families()
                .iter()
                .map(|f| {
                    let note = f.smooth_recipe.note.as_ref().or(f.ca1_recipe.note.as_ref());
                    format!(
                        "{:>4} {:<4} {:<32} {:>8} {} {}",
                        f.id,
                        kind_name(f.kind),
                        f.label(),
                        rational::to_string(&f.k3),
                        f.case.map_or("", |c| c.symbol()),
                        note.map_or("", |n| n.as_str())
                    )
                    .trim_end()
                    .to_string()
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Output {
                human: Some(human),
                ..Output::new(Value::Array(rows))
            })
        }
        Cmd::K3(a) => {
            let (label, k3) = match (&a.id, &a.weights, &a.degrees) {
                (Some(id), _, _) => {
                    let t = checked_table(cli)?;
                    let f = family(&t, *id, a.wci2)?;
                    (f.label(), f.anticanonical_cube())
                }
                (None, Some(w), Some(d)) => {
                    if w.contains(&0) || d.is_empty() {
                        return Err(Failure::Usage("weights must be positive and degrees nonempty".into()));
                    }
                    let num: u64 = d.iter().map(|&x| x as u64).product();
                    let ws = WeightSystem::new(w.clone());
                    let label = format!("X_{:?} ⊂ P{:?}", d, w);
                    (label, Rational::new(num.into(), ws.product().into()))
                }
                _ => return Err(Failure::Usage("give --id or both --weights and --degrees".into())),
            };
            Ok(Output::new(json!({"label": label, "k3": q(&k3)})))
        }
        Cmd::ClassifyCase(a) => {
            let t = checked_table(cli)?;
            let f = family(&t, a.id, a.wci2)?;
            let computed = classify_case(f)?;
            let mut out = json!({
                "family": f.id,
                "label": f.label(),
                "case": computed.name(),
                "stored": f.case.map(|c| c.name()),
                "agrees": Some(computed) == f.case,
            });
            if f.kind == Kind::Hypersurface && DESCR_FAMILIES.contains(&f.id) {
                let member = generic_member(f, cli.seed).remove(0);
                out["descr"] = to_json(&restrict_descrf(f, &member)?);
            }
            Ok(Output::new(out))
        }
        Cmd::Isolate(a) => {
            let t = checked_table(cli)?;
            let f = family(&t, a.family.id, a.family.wci2)?;
            let kind = a.point.kind();
            let report = family_report(f, kind)?;
            let recipe = match kind {
                PointKind::Smooth => &f.smooth_recipe,
                PointKind::CA1 => &f.ca1_recipe,
            };
            let member = generic_member(f, cli.seed);
            let mut out = to_json(&report);
            out["recipe"] = Value::String(recipe.variant.label().to_string());
            out["premise"] = match recipe_premise(f, recipe, &member)? {
                Some(b) => Value::Bool(b),
                None => Value::Null,
            };
            Ok(Output::new(out))
        }
        Cmd::Tower(c) => tower(c),
        Cmd::Dualgraph(c) => dualgraph(c),
        Cmd::Defect(c) => defect_cmd(c),
        Cmd::Exclude(c) => exclude(cli, c),
        Cmd::Parse(a) => {
            let vars: Vec<String> = a.vars.split(',').map(|s| s.trim().to_string()).collect();
            let p = parse_poly_owned(&a.expr, &vars)?;
            let terms: Vec<Value> = p
                .sorted_terms()
                .into_iter()
                .map(|(m, c)| json!({"exponents": m.exponents(), "coeff": q(c)}))
                .collect();
            Ok(Output::new(json!({"vars": vars, "canonical": print_poly(&p), "terms": terms})))
        }
    }
}

fn tables_verify(cli: &Cli) -> Result<Output, Failure> {
    let t = load_table(cli)?;
    let manifest_ok = t.matches_manifest();
    let rows = t.verify();
    let failed: Vec<String> = rows
        .iter()
        .zip(t.families())
        .filter(|(r, _)| !r.pass)
        .map(|(r, f)| format!("family {} ({})", r.id, kind_name(f.kind)))
        .collect();
    let mut lines = Vec::new();
    if !manifest_ok {
        lines.push(format!(
            "FAIL manifest: data hash {} differs from {}",
            t.sha256(),
            FamilyTable::manifest_sha256()
        ));
    }
    for (r, f) in rows.iter().zip(t.families()) {
        let mut line = format!(
            "{} {:>2} {:<4} {:<32} k3={} case={}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            kind_name(f.kind),
            r.label,
            r.k3_computed,
            r.case_computed.as_deref().unwrap_or("-")
        );
        if !r.k3_ok {
            line += &format!(" (table k3={})", r.k3_stored);
        }
        if !r.case_ok {
            line += &format!(" (table case={})", r.case_stored.as_deref().unwrap_or("-"));
        }
        lines.push(line);
    }
    let pass = manifest_ok && failed.is_empty();
    let mut failure = None;
    if !pass {
        let mut what = failed.clone();
        if !manifest_ok {
            what.insert(0, "manifest hash".into());
        }
        failure = Some(format!("verification failed: {}", what.join(", ")));
    }
    Ok(Output {
        json: json!({
            "manifest_ok": manifest_ok,
            "sha256": t.sha256(),
            "rows": to_json(&rows),
            "failed": failed,
            "pass": pass,
        }),
        human: Some(lines.join("\n")),
        failed: failure,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CortiFile {
    n_blowups: usize,
    #[serde(default)]
    edges: String,
    k: usize,
    l: usize,
    n: String,
    mult_h: String,
    #[serde(default)]
    surfaces: Vec<SurfaceFile>,
    m0: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    gamma: String,
    k: usize,
    nu: String,
    mult: String,
}

fn tower(c: &TowerCmd) -> Result<Output, Failure> {
    match c {
        TowerCmd::Analyze(a) => {
            let edges = TowerGraph::parse_edges(&a.edges)?;
            let g = TowerGraph::with_chain(a.n, &edges, a.k, a.l)?;
            let s = g.sigmas();
            let mut out = json!({
                "p": g.path_counts(),
                "sigma": s.as_array(),
                "discrepancy": s.discrepancy(),
                "factor": q(&two_n_squared_factor(&s)?),
            });
            if let Some(v) = &a.v {
                out["minimum"] = to_json(&min_quadratic(&g, v));
                if let Some(res) = a.resolution {
                    out["oracle_minimum"] = q(&min_quadratic_oracle(&g, v, res)?);
                }
            }
            Ok(Output::new(out))
        }
        TowerCmd::Kawakita { s, t } => {
            let r = kawakita_factor(*s, *t)?;
            let out = json!({
                "s": r.s,
                "t": r.t,
                "factor": q(&r.factor),
                "sigma": r.sigma,
                "crosscheck": if r.cross_check { "ok" } else { "mismatch" },
            });
            Ok(Output {
                failed: (!r.cross_check).then(|| "chain tower disagrees with the closed form".to_string()),
                ..Output::new(out)
            })
        }
        TowerCmd::Corti { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let f: CortiFile = serde_json::from_str(&text)?;
            let rat = |s: &str| parse_rational(s).map_err(Failure::from);
            let g = TowerGraph::with_chain(f.n_blowups, &TowerGraph::parse_edges(&f.edges)?, f.k, f.l)?;
            let mut inst = CortiInstance::new(g, rat(&f.n)?, rat(&f.mult_h)?);
            for s in &f.surfaces {
                inst.surfaces.push(Surface {
                    gamma: rat(&s.gamma)?,
                    k: s.k,
                    nu: rat(&s.nu)?,
                    mult: rat(&s.mult)?,
                });
            }
            if let Some(m0) = &f.m0 {
                inst.m0 = Some(m0.iter().map(|s| rat(s)).collect::<Result<_, _>>()?);
            }
            Ok(Output::new(to_json(&corti_check(&inst)?)))
        }
    }
}

fn singularities(text: &str) -> Result<Vec<Singularity>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<Singularity>().map_err(Failure::from))
        .collect()
}

fn dualgraph(c: &DualgraphCmd) -> Result<Output, Failure> {
    match c {
        DualgraphCmd::Classify { sing, m, ell, alpha2 } => {
            let flags = GermFlags {
                singularity: *sing,
                m: *m,
                ell_nonzero: *ell == 1,
                alpha2_nonzero: alpha2.map(|a| a == 1),
            };
            let g = classify_germ(&flags)?;
            Ok(Output::new(json!({
                "type": g.to_string(),
                "correction": q(&g.correction_term()),
            })))
        }
        DualgraphCmd::Exclude { points, ks_gamma } => {
            let pts = points
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| CurvePoint::parse(s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            let cfg = CurveConfig::new(pts, ks_gamma.clone())?;
            let v = exclusion_verdict(&cfg);
            Ok(Output::new(json!({
                "points": to_json(&cfg.points),
                "correction_sum": q(&cfg.correction_sum()),
                "self_intersection": q(&v.self_intersection),
                "gamma_delta": q(&v.gamma_delta),
                "excluded": v.excluded,
            })))
        }
        DualgraphCmd::WorstCase { kinds } => {
            let kinds = singularities(kinds)?;
            Ok(Output::new(to_json(&enumerate_worst_case(&kinds))))
        }
    }
}

fn defect_cmd(c: &DefectCmd) -> Result<Output, Failure> {
    match c {
        DefectCmd::Compute { config } => {
            let text = std::fs::read_to_string(config).map_err(|e| Failure::Usage(format!("{}: {e}", config.display())))?;
            let cfg = BranchConfig::from_json(&text)?;
            Ok(Output::new(to_json(&defect::defect(&cfg)?)))
        }
        DefectCmd::Screen { r, types } => Ok(Output::new(to_json(&defect::screen(*r, types)?))),
    }
}

fn exclude(cli: &Cli, c: &ExcludeCmd) -> Result<Output, Failure> {
    match c {
        ExcludeCmd::Family { id, wci2, all } => {
            let t = checked_table(cli)?;
            if *all {
                let vs = t
                    .families()
                    .iter()
                    .map(family_verdict)
                    .collect::<Result<Vec<_>, _>>()?;
                return Ok(Output::new(to_json(&vs)));
            }
            let f = family(&t, id.expect("clap requires --id"), *wci2)?;
            Ok(Output::new(to_json(&family_verdict(f)?)))
        }
        ExcludeCmd::Sds { kinds } => {
            let kinds = singularities(kinds)?;
            if kinds.is_empty() {
                return Err(Failure::Usage("no singularity kinds given".into()));
            }
            Ok(Output::new(to_json(&sds_verdict(&kinds))))
        }
        ExcludeCmd::Dp { n, m, lambdas, sweep } => {
            if *sweep {
                let s = dp_sweep();
                return Ok(Output {
                    failed: (!s.all_contradictory).then(|| "an instance escaped the contradiction".to_string()),
                    ..Output::new(to_json(&s))
                });
            }
            let inst = DpInstance::new(n.clone().expect("required"), m.clone().expect("required"), lambdas.clone())?;
            Ok(Output::new(to_json(&dp_contradiction(&inst))))
        }
    }
}

/// `key: value` lines for every leaf of the report.
fn render(v: &Value, path: &str, out: &mut Vec<String>) {
    let leaf = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                render(x, &p, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(leaf).collect();
            out.push(format!("{path}: [{}]", items.join(", ")));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                render(x, &format!("{path}[{i}]"), out);
            }
        }
        other => out.push(format!("{path}: {}", leaf(other))),
    }
}

/// Names of the subcommands on the command line, for the synopsis.
fn command_path(cli: &Cli) -> Vec<&'static str> {
    match &cli.cmd {
        Cmd::Tables(TablesCmd::Verify) => vec!["tables", "verify"],
        Cmd::Tables(TablesCmd::List) => vec!["tables", "list"],
        Cmd::K3(_) => vec!["k3"],
        Cmd::ClassifyCase(_) => vec!["classify-case"],
        Cmd::Isolate(_) => vec!["isolate"],
        Cmd::Tower(TowerCmd::Analyze(_)) => vec!["tower", "analyze"],
        Cmd::Tower(TowerCmd::Kawakita { .. }) => vec!["tower", "kawakita"],
        Cmd::Tower(TowerCmd::Corti { .. }) => vec!["tower", "corti"],
        Cmd::Dualgraph(DualgraphCmd::Classify { .. }) => vec!["dualgraph", "classify"],
        Cmd::Dualgraph(DualgraphCmd::Exclude { .. }) => vec!["dualgraph", "exclude"],
        Cmd::Dualgraph(DualgraphCmd::WorstCase { .. }) => vec!["dualgraph", "worst-case"],
        Cmd::Defect(DefectCmd::Compute { .. }) => vec!["defect", "compute"],
        Cmd::Defect(DefectCmd::Screen { .. }) => vec!["defect", "screen"],
        Cmd::Exclude(ExcludeCmd::Family { .. }) => vec!["exclude", "family"],
        Cmd::Exclude(ExcludeCmd::Sds { .. }) => vec!["exclude", "sds"],
        Cmd::Exclude(ExcludeCmd::Dp { .. }) => vec!["exclude", "dp"],
        Cmd::Parse(_) => vec!["parse"],
    }
}

fn usage_error(path: &[&str], msg: &str) -> ! {
    let mut cmd = Cli::command();
    cmd.build();
    let mut sub = &mut cmd;
    for name in path {
        sub = sub.find_subcommand_mut(name).expect("known subcommand");
    }
    sub.error(ErrorKind::InvalidValue, msg).exit()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let text = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json")
            } else if let Some(h) = out.human {
                h
            } else {
                let mut lines = Vec::new();
                render(&out.json, "", &mut lines);
                lines.join("\n")
            };
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            match out.failed {
                Some(msg) => {
                    eprintln!("{msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => usage_error(&command_path(&cli), &msg),
    }
}
