//! Fixture corpus: TOML case files whose expected values carry provenance
//! tags, replayed against fresh computations.
//!
//! A case names its input (`variety = "scroll:1,1,4"` or `ideal = "file.id"`
//! relative to the fixture directory), a `kind` selecting the computation,
//! and a list of `expect` entries `{ key, value, provenance, citation }`.
//! Measurements are computed lazily: only keys some expectation asks for.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use syzproj::constructions::{build_ideal, Stratum, VarietySpec};
use syzproj::field::{Field, PrimeField};
use syzproj::groebner::{Ideal, DEFAULT_DEGREE_CAP};
use syzproj::io::AnyIdeal;
use syzproj::koszul::{betti_numbers, betti_table, verify_les, BettiTable, BettiWindow};
use syzproj::pei::{compare_with_oracle, verify_pei_sequence, BasisSource, DegreewisePei, PeiFiltration};
use syzproj::projection::{check_prop41, check_thm39_hf, make_projection, Disjointness};
use syzproj::syzygy::{check_cor23, check_ndp, check_remark42, pd_depth, regularity, Status};
use syzproj::{Error, Result};

use crate::commands::{generator_counts, CorpusArgs, Failure, Format, Outcome};
use crate::experiments::{draw_center, random_fibers, random_sections, ProjectionRun};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    Paper,
    Trivial,
    Derived,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Text(String),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        self.to_string() == other.to_string()
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub key: String,
    pub value: Value,
    pub provenance: Provenance,
    pub citation: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    /// Betti table of the input over `S_t`, with derived invariants.
    Betti,
    /// Image of a projection from a stratum center.
    Projection,
    /// Random fibers of generic projections.
    Fibers,
    /// Random linear sections spanned by points of `X`.
    Sections,
    /// Gröbner rule against the degreewise oracle.
    Pei,
    /// Mapping-cone long exact sequence.
    Les,
    /// Betti numbers over `S_1` after a one-point outer projection.
    Cor23,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusCase {
    pub name: String,
    #[serde(default)]
    pub groups: Vec<String>,
    pub kind: CaseKind,
    pub variety: Option<String>,
    pub ideal: Option<PathBuf>,
    pub stratum: Option<String>,
    pub seed: Option<u64>,
    pub t: Option<usize>,
    #[serde(default)]
    pub dims: Vec<usize>,
    pub max_i: Option<u32>,
    pub max_d: Option<u32>,
    /// Generation degree for fiber bounds and linearity checks.
    pub d: Option<u32>,
    /// Step count for linearity checks.
    pub p: Option<u32>,
    pub count: Option<usize>,
    #[serde(default)]
    pub long: bool,
    /// Where the case's claims come from.
    pub citation: Option<String>,
    pub budget_secs: Option<u64>,
    pub expect: Vec<Expectation>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    #[serde(rename = "case", default)]
    cases: Vec<CorpusCase>,
}

impl CorpusCase {
    pub fn matches(&self, case: Option<&str>, filter: Option<&str>) -> bool {
        let exact = case.is_none_or(|c| self.name == c || self.groups.iter().any(|g| g == c));
        let sub = filter.is_none_or(|f| self.name.contains(f) || self.groups.iter().any(|g| g.contains(f)));
        exact && sub
    }

    /// Fixture-level problems: unknown provenance is rejected by the parser,
    /// a PAPER value without a citation here.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.variety.is_some() == self.ideal.is_some() {
            return Err("exactly one of `variety` and `ideal` is required".into());
        }
        for e in &self.expect {
            if e.provenance == Provenance::Paper && e.citation.as_deref().is_none_or(|c| c.trim().is_empty()) {
                return Err(format!("PAPER value for `{}` has no citation", e.key));
            }
        }
        if self.expect.is_empty() {
            return Err("no expectations".into());
        }
        Ok(())
    }
}

/// Load every `*.toml` under `dir`, in file-name order.
pub fn load_cases(dir: &Path) -> std::result::Result<Vec<(PathBuf, CorpusCase)>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("cannot read fixture directory {}: {e}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f).map_err(|e| format!("{}: {e}", f.display()))?;
        let parsed: FixtureFile = toml::from_str(&text).map_err(|e| format!("{}: {e}", f.display()))?;
        out.extend(parsed.cases.into_iter().map(|c| (f.clone(), c)));
    }
    Ok(out)
}

pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// A measured quantity: known, or not determined by the computed window.
#[derive(Clone, Debug, PartialEq)]
pub enum Measured {
    Known(Value),
    Unknown,
}

/// Measured values of one case, plus Betti tables queried as
/// `<prefix>beta_<i>_<d>` with `i`, `d` the homological and internal degree.
#[derive(Default)]
pub struct Measurements {
    values: BTreeMap<String, Measured>,
    tables: Vec<(String, BettiTable)>,
}

impl Measurements {
    fn int(&mut self, k: &str, v: i64) {
        self.values.insert(k.into(), Measured::Known(Value::Int(v)));
    }
    fn text(&mut self, k: &str, v: impl ToString) {
        self.values.insert(k.into(), Measured::Known(Value::Text(v.to_string())));
    }
    fn unknown(&mut self, k: &str) {
        self.values.insert(k.into(), Measured::Unknown);
    }
    fn table(&mut self, prefix: &str, t: BettiTable) {
        self.tables.push((prefix.to_string(), t));
    }

    pub fn get(&self, key: &str) -> Option<Measured> {
        if let Some(v) = self.values.get(key) {
            return Some(v.clone());
        }
        for (prefix, t) in &self.tables {
            let Some(rest) = key.strip_prefix(prefix.as_str()).and_then(|r| r.strip_prefix("beta_")) else { continue };
            let (i, d) = rest.split_once('_')?;
            let (i, d) = (i.parse().ok()?, d.parse().ok()?);
            return Some(match t.get(i, d) {
                Some(v) => Measured::Known(Value::Int(v as i64)),
                None => Measured::Unknown,
            });
        }
        None
    }
}

/// Top degree compared in the Hilbert function identity for the image.
const HF_CHECK_DEGREE: u32 = 12;

fn status_text(s: Status) -> String {
    s.to_string()
}

fn wants(keys: &BTreeSet<String>, pred: impl Fn(&str) -> bool) -> bool {
    keys.iter().any(|k| pred(k))
}

fn put_table_invariants(m: &mut Measurements, prefix: &str, table: &BettiTable, nvars: usize) {
    let reg = regularity(table);
    match (reg.certified, reg.value) {
        (true, Some(v)) => m.int(&format!("{prefix}reg"), i64::from(v)),
        _ => m.unknown(&format!("{prefix}reg")),
    }
    let pd = pd_depth(table, nvars);
    if pd.certified {
        m.int(&format!("{prefix}pd"), i64::from(pd.pd));
        m.int(&format!("{prefix}depth"), pd.depth);
    } else {
        m.unknown(&format!("{prefix}pd"));
        m.unknown(&format!("{prefix}depth"));
    }
}

fn put_ndp(m: &mut Measurements, prefix: &str, table: &BettiTable, keys: &BTreeSet<String>) {
    for k in keys {
        let Some(rest) = k.strip_prefix(prefix).and_then(|r| r.strip_prefix("ndp_")) else { continue };
        if let Some((d, p)) = rest.split_once('_').and_then(|(d, p)| Some((d.parse::<u32>().ok()?, p.parse::<u32>().ok()?))) {
            m.text(k, status_text(check_ndp(table, d, p).status));
        }
    }
}

fn put_generators<F: Field>(m: &mut Measurements, prefix: &str, ideal: &Ideal<F>, keys: &BTreeSet<String>) {
    let counts = generator_counts(ideal);
    for k in keys {
        if let Some(d) = k.strip_prefix(prefix).and_then(|r| r.strip_prefix("gens_")).and_then(|d| d.parse::<u32>().ok()) {
            m.int(k, counts.get(&d).copied().unwrap_or(0) as i64);
        }
        if let Some(bound) = k.strip_prefix(prefix).and_then(|r| r.strip_prefix("gens_le_")).and_then(|d| d.parse::<u32>().ok()) {
            let ok = counts.keys().all(|&d| d <= bound);
            m.text(k, if ok { Status::Pass } else { Status::Fail });
        }
    }
    m.int(&format!("{prefix}gen_max_degree"), counts.keys().next_back().copied().map_or(-1, i64::from));
}

/// Largest `i` for which a `<prefix>beta_i_d` or `<prefix>ndp_d_p` key needs a table.
fn needed_columns(keys: &BTreeSet<String>, prefix: &str) -> Option<u32> {
    let mut need: Option<u32> = None;
    for k in keys {
        let Some(rest) = k.strip_prefix(prefix) else { continue };
        let i = if let Some(r) = rest.strip_prefix("beta_") {
            r.split('_').next().and_then(|i| i.parse().ok())
        } else if let Some(r) = rest.strip_prefix("ndp_") {
            r.split('_').nth(1).and_then(|p| p.parse().ok())
        } else if ["pd", "depth", "reg"].contains(&rest) {
            Some(u32::MAX)
        } else {
            None
        };
        if let Some(i) = i {
            need = Some(need.map_or(i, |n: u32| n.max(i)));
        }
    }
    need
}

struct Input<F: Field> {
    spec: Option<VarietySpec>,
    ideal: Ideal<F>,
}

fn case_rng(case: &CorpusCase, seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case.seed.unwrap_or(seed))
}

fn need_spec<F: Field>(input: &Input<F>, what: &str) -> Result<VarietySpec> {
    input.spec.clone().ok_or_else(|| Error::Range(format!("{what} needs a `variety` input to sample points")))
}

fn measure<F: Field>(case: &CorpusCase, input: &Input<F>, seed: u64) -> Result<Measurements> {
    let keys: BTreeSet<String> = case.expect.iter().map(|e| e.key.clone()).collect();
    let ideal = &input.ideal;
    let n = ideal.ring().nvars();
    let mut m = Measurements::default();
    match case.kind {
        CaseKind::Betti => {
            let t = case.t.unwrap_or(0);
            let max_i = case.max_i.or(needed_columns(&keys, "").map(|i| i.min((n - t) as u32))).unwrap_or((n - t) as u32);
            let table = match case.max_d {
                Some(d) => betti_numbers(ideal, t, BettiWindow::new(max_i, d), None)?,
                None => betti_table(ideal, t, max_i)?,
            };
            put_table_invariants(&mut m, "", &table, n - t);
            put_ndp(&mut m, "", &table, &keys);
            put_generators(&mut m, "", ideal, &keys);
            if keys.contains("degree") {
                match ideal.degree_of(DEFAULT_DEGREE_CAP) {
                    Ok(d) => m.int("degree", d as i64),
                    Err(_) => m.unknown("degree"),
                }
            }
            m.int("krull_dim", i64::from(ideal.krull_dim()));
            m.table("", table);
        }
        CaseKind::Projection => {
            let spec = need_spec(input, "a projection case")?;
            let stratum: Stratum = case.stratum.as_deref().unwrap_or("generic").parse()?;
            let t = case.t.unwrap_or(1);
            let mut rng = case_rng(case, seed);
            let center = draw_center(&spec, ideal, &stratum, t, &mut rng)?;
            let run = ProjectionRun::new(ideal, &center)?;
            let ny = run.image.ring().nvars();
            m.text("disjointness", run.setup.disjointness);
            put_generators(&mut m, "", &run.image, &keys);
            let y_table = match needed_columns(&keys, "") {
                Some(i) => Some(run.image_table(i.min(ny as u32))?),
                None => None,
            };
            if let Some(locus) = &run.locus {
                m.int("s", locus.s);
                m.text("k1_linear", locus.k1_linear);
                if let Some(l) = locus.sigma_length {
                    m.int("sigma_length", l as i64);
                }
                if keys.contains("z1_linear") {
                    let linear = locus.z1.is_unit() || generator_counts(&locus.z1).keys().all(|&d| d <= 1);
                    m.text("z1_linear", linear);
                }
                if keys.contains("hf_identity") {
                    m.text("hf_identity", check_thm39_hf(ideal, &run.image, &locus.k1, HF_CHECK_DEGREE).status);
                }
                if wants(&keys, |k| k.starts_with("prop41") || k.starts_with("remark42")) {
                    let x_table = betti_table(ideal, 0, n as u32)?;
                    let y_full = match &y_table {
                        Some(t) if t.window.max_i as usize >= ny => t.clone(),
                        _ => run.image_table(ny as u32)?,
                    };
                    let report = check_prop41(ideal, &run.setup, &run.image, locus.s, &x_table, &y_full)?;
                    m.text("prop41_quadrics", report.quadrics);
                    m.text("prop41_depth", report.depth);
                    let p = case.p.unwrap_or(2);
                    let rows = check_remark42(&y_full, &x_table, (n - 1) as u32, locus.s, 1..=p.saturating_sub(1).max(1));
                    let st = Status::all(rows.iter().map(|r| match r.residual() {
                        Some(0) => Status::Pass,
                        Some(_) => Status::Fail,
                        None => Status::Inconclusive,
                    }));
                    m.text("remark42", st);
                }
            }
            if let Some(table) = y_table {
                put_table_invariants(&mut m, "", &table, ny);
                put_ndp(&mut m, "", &table, &keys);
                m.table("", table);
            }
        }
        CaseKind::Fibers => {
            let spec = need_spec(input, "a fiber case")?;
            let d = case.d.unwrap_or(2);
            let count = case.count.unwrap_or(25);
            let mut rng = case_rng(case, seed);
            let ts: Vec<usize> = if case.dims.is_empty() { vec![case.t.unwrap_or(1)] } else { case.dims.clone() };
            let mut all_ok = true;
            for t in ts {
                let fibers = random_fibers(&spec, ideal, t, d, count, &mut rng)?;
                let max = fibers.iter().map(|f| f.length).max().unwrap_or(0);
                all_ok &= fibers.iter().all(|f| f.within_bound() != Some(false));
                m.int(&format!("max_length_t{t}"), max as i64);
                m.int(&format!("bound_t{t}"), fibers.first().and_then(|f| f.bound).unwrap_or(0) as i64);
            }
            m.text("within_bound", if all_ok { Status::Pass } else { Status::Fail });
        }
        CaseKind::Sections => {
            let spec = need_spec(input, "a section case")?;
            let dims = if case.dims.is_empty() { vec![1, 2, 3] } else { case.dims.clone() };
            let mut rng = case_rng(case, seed);
            let sections = random_sections(&spec, ideal, &dims, case.count.unwrap_or(25), &mut rng)?;
            let excess = sections.iter().map(|(k, r)| r.length as i64 - (*k as i64 + 1)).max().unwrap_or(0);
            m.int("max_excess", excess);
            m.int("max_reg", sections.iter().map(|(_, r)| i64::from(r.regularity)).max().unwrap_or(0));
            m.int("min_length_excess", sections.iter().map(|(k, r)| r.length as i64 - (*k as i64 + 1)).min().unwrap_or(0));
        }
        CaseKind::Pei => {
            let max_d = case.max_d.unwrap_or(8);
            let levels = case.max_i.unwrap_or(2);
            let oracle = DegreewisePei::compute(ideal, max_d, BasisSource::NormalForms)?;
            let rows = compare_with_oracle(ideal, levels, &oracle)?;
            m.text("oracle", if rows.iter().all(|r| r.agree) { Status::Pass } else { Status::Fail });
            let mut residual = 0;
            for i in 1..=levels {
                residual += verify_pei_sequence(ideal, i, max_d)?.iter().map(|r| r.residual().abs()).sum::<i64>();
            }
            m.int("sequence_residual", residual);
            m.text("increasing", PeiFiltration::compute(ideal, levels)?.is_increasing());
        }
        CaseKind::Les => {
            let t = case.t.unwrap_or(0);
            let r = verify_les(ideal, t, case.max_i.unwrap_or(3), case.max_d.unwrap_or(5))?;
            m.text("exact", if r.exact { Status::Pass } else { Status::Fail });
            m.int("nodes", r.nodes.len() as i64);
        }
        CaseKind::Cor23 => {
            let spec = need_spec(input, "a one-point projection case")?;
            let d = case.d.unwrap_or(2);
            let p = case.p.ok_or_else(|| Error::Range("cor23 cases need `p`".into()))?;
            let mut rng = case_rng(case, seed);
            let q = draw_center(&spec, ideal, &Stratum::GenericOuter, 1, &mut rng)?;
            let setup = make_projection(ideal, &q)?;
            if setup.disjointness != Disjointness::Disjoint {
                return Err(Error::Genericity { what: "outer center".into(), attempts: 1 });
            }
            let b_r = betti_table(ideal, 0, p)?;
            let b_s1 = betti_table(&setup.transformed, 1, p)?;
            let report = check_cor23(&b_r, &b_s1, d, p)?;
            m.text("cor23", report.status);
            m.table("r_", b_r);
            m.table("s1_", b_s1);
        }
    }
    Ok(m)
}

/// Result of comparing one expectation.
#[derive(Clone, Debug)]
pub struct CheckRow {
    pub key: String,
    pub measured: String,
    pub expected: String,
    pub provenance: Provenance,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct CaseResult {
    pub name: String,
    pub rows: Vec<CheckRow>,
    pub error: Option<String>,
    pub status: Status,
    pub seconds: f64,
}

fn load_input(case: &CorpusCase, dir: &Path) -> std::result::Result<AnyIdeal, String> {
    if let Some(v) = &case.variety {
        let spec: VarietySpec = v.parse().map_err(|e: Error| e.to_string())?;
        return build_ideal(PrimeField::default_field(), &spec).map(AnyIdeal::Prime).map_err(|e| e.to_string());
    }
    let path = dir.join(case.ideal.as_ref().expect("validated"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("missing fixture {}: {e}", path.display()))?;
    syzproj::io::parse_ideal_file(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn compare(case: &CorpusCase, m: &Measurements) -> Vec<CheckRow> {
    case.expect
        .iter()
        .map(|e| {
            let (measured, status) = match m.get(&e.key) {
                Some(Measured::Known(v)) => {
                    let st = if v == e.value { Status::Pass } else { Status::Fail };
                    (v.to_string(), st)
                }
                Some(Measured::Unknown) => ("?".to_string(), Status::Inconclusive),
                None => ("missing".to_string(), Status::Fail),
            };
            CheckRow { key: e.key.clone(), measured, expected: e.value.to_string(), provenance: e.provenance, status }
        })
        .collect()
}

/// Run one case; failures of any kind become a result, never a panic.
pub fn run_case(case: &CorpusCase, dir: &Path, seed: u64) -> CaseResult {
    let start = Instant::now();
    let finish = |rows: Vec<CheckRow>, error: Option<String>| {
        let status = if error.is_some() { Status::Fail } else { Status::all(rows.iter().map(|r| r.status)) };
        CaseResult { name: case.name.clone(), rows, error, status, seconds: start.elapsed().as_secs_f64() }
    };
    if let Err(e) = case.validate() {
        return finish(Vec::new(), Some(format!("bad fixture: {e}")));
    }
    let any = match load_input(case, dir) {
        Ok(i) => i,
        Err(e) => return finish(Vec::new(), Some(e)),
    };
    let measured = match any {
        AnyIdeal::Prime(ideal) => {
            let spec = case.variety.as_ref().and_then(|v| v.parse().ok());
            measure(case, &Input { spec, ideal }, seed)
        }
        AnyIdeal::Rational(ideal) => measure(case, &Input { spec: None, ideal }, seed),
    };
    match measured {
        Ok(m) => finish(compare(case, &m), None),
        Err(e) => finish(Vec::new(), Some(e.to_string())),
    }
}

fn provenance_label(p: Provenance) -> &'static str {
    match p {
        Provenance::Paper => "PAPER",
        Provenance::Trivial => "TRIVIAL",
        Provenance::Derived => "DERIVED",
    }
}

/// Summary with one line per check; wall times go to the second string so
/// that the first is reproducible byte for byte.
pub fn render(results: &[CaseResult], format: Format) -> (String, String) {
    let mut out = String::new();
    let mut times = String::new();
    if format == Format::Tsv {
        out.push_str("case\tkey\tmeasured\texpected\tprovenance\tstatus\n");
    }
    for r in results {
        times.push_str(&format!("{}\t{:.2}s\n", r.name, r.seconds));
        match format {
            Format::Tsv => {
                for c in &r.rows {
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\n",
                        r.name,
                        c.key,
                        c.measured,
                        c.expected,
                        provenance_label(c.provenance),
                        c.status
                    ));
                }
                if let Some(e) = &r.error {
                    out.push_str(&format!("{}\t-\t-\t-\t-\terror: {e}\n", r.name));
                }
                out.push_str(&format!("{}\t*\t-\t-\t-\t{}\n", r.name, r.status));
            }
            Format::Pretty => {
                let label = if r.error.is_some() { "ERROR".to_string() } else { r.status.to_string().to_uppercase() };
                out.push_str(&format!("{label:<12} {} ({} checks)\n", r.name, r.rows.len()));
                if let Some(e) = &r.error {
                    out.push_str(&format!("    {e}\n"));
                }
                for c in r.rows.iter().filter(|c| c.status != Status::Pass) {
                    out.push_str(&format!(
                        "    {}: measured {} expected {} [{}] {}\n",
                        c.key,
                        c.measured,
                        c.expected,
                        provenance_label(c.provenance),
                        c.status
                    ));
                }
            }
        }
    }
    (out, times)
}

pub fn command(a: &CorpusArgs, seed: u64, format: Format) -> std::result::Result<Outcome, Failure> {
    let dir = a.fixtures.clone().unwrap_or_else(default_fixture_dir);
    let cases = load_cases(&dir).map_err(Failure::Usage)?;
    let selected: Vec<&(PathBuf, CorpusCase)> =
        cases.iter().filter(|(_, c)| c.matches(a.case.as_deref(), a.filter.as_deref()) && (a.long || !c.long)).collect();
    if selected.is_empty() {
        return Err(Failure::Usage("no corpus case matches the selection".into()));
    }
    let results: Vec<CaseResult> = selected.iter().map(|(file, c)| run_case(c, file.parent().unwrap_or(&dir), seed)).collect();
    let (stdout, mut stderr) = render(&results, format);
    for (r, (_, c)) in results.iter().zip(&selected) {
        if let Some(b) = c.budget_secs.filter(|&b| r.seconds > b as f64) {
            stderr.push_str(&format!("{}: over its {b}s budget\n", r.name));
        }
    }
    let mut outcome = Outcome::new(Status::all(results.iter().map(|r| r.status)), stdout);
    outcome.stderr = stderr;
    // a case that could not run is a computation error, not a failed check
    if results.iter().any(|r| r.error.is_some()) {
        outcome.exit_override = Some(4);
    }
    Ok(outcome)
}
