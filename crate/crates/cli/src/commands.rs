//! Argument definitions and the per-subcommand drivers.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use syzproj::constructions::{build_ideal, random_center, Stratum, VarietySpec};
use syzproj::field::{Field, PrimeField, RationalField, DEFAULT_PRIME};
use syzproj::groebner::eliminate;
use syzproj::groebner::Ideal;
use syzproj::io::{parse_ideal_file, parse_point_arg, parse_points, write_ideal, write_points, AnyIdeal};
use syzproj::koszul::{betti_numbers, betti_table, verify_les, BettiTable, BettiWindow};
use syzproj::pei::{compare_with_oracle, max_generator_degree, partial_elim_ideal, verify_pei_sequence, BasisSource, DegreewisePei};
use syzproj::projection::{fiber_report, linear_section, make_projection, project_ideal, secant_locus, secant_locus_unchecked};
use syzproj::syzygy::{check_ndp, pd_depth, regularity, Status};
use syzproj::Error;

use crate::corpus;

/// Seed used when neither `--seed` nor `SEED` is given.
pub const DEFAULT_SEED: u64 = 17;

#[derive(Parser, Debug)]
#[command(name = "syzproj", version, about = "Exact Betti tables, partial elimination ideals and linear projections")]
pub struct Cli {
    /// Output layout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Seed for every random choice; overrides the SEED environment variable.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Tsv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graded Betti numbers of R/I over S_t.
    Betti(BettiArgs),
    /// Test property N_{d,p}.
    Ndp(NdpArgs),
    /// Regularity, projective dimension and depth.
    Reg(RegArgs),
    /// A partial elimination ideal K_i, optionally checked against the degreewise oracle.
    Pei(PeiArgs),
    /// Image of a linear projection.
    Project(ProjectArgs),
    /// Fiber of a projection over a point.
    Fiber(FiberArgs),
    /// Linear section of X by the span of given points.
    Section(SectionArgs),
    /// Secant locus of a one-point projection.
    SecantLocus(SecantArgs),
    /// Exactness of the mapping-cone long exact sequence.
    LesCheck(LesArgs),
    /// Write ideals of standard varieties and projection centers.
    #[command(subcommand)]
    Make(MakeCommand),
    /// Replay the fixture corpus.
    Corpus(CorpusArgs),
}

#[derive(Args, Debug)]
pub struct BettiArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    /// Number of leading variables to drop: Betti numbers over S_t = k[x_t..x_n].
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    #[arg(long)]
    pub max_i: Option<u32>,
    /// Internal degree bound; without it the window follows the proven row bound.
    #[arg(long)]
    pub max_d: Option<u32>,
}

#[derive(Args, Debug)]
pub struct NdpArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 0)]
    pub t: usize,
}

#[derive(Args, Debug)]
pub struct RegArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub t: usize,
}

#[derive(Args, Debug)]
pub struct PeiArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    #[arg(long)]
    pub level: u32,
    /// Compare levels 0..=level with the degreewise oracle up to this degree.
    #[arg(long, value_name = "D")]
    pub oracle_check: Option<u32>,
}

#[derive(Args, Debug)]
pub struct ProjectArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    /// Point file spanning the center.
    #[arg(long)]
    pub center: PathBuf,
    /// Saturate the elimination ideal (the default).
    #[arg(long, overrides_with = "no_saturate")]
    pub saturate: bool,
    /// Report the elimination ideal itself.
    #[arg(long)]
    pub no_saturate: bool,
    /// Compute the image's Betti table and test N_{d,p}.
    #[arg(long, num_args = 2, value_names = ["P", "D"])]
    pub betti: Option<Vec<u32>>,
    /// Write the image ideal to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FiberArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    #[arg(long)]
    pub center: PathBuf,
    /// Point of the target space (n - t + 1 coordinates) or of P^n (n + 1 coordinates).
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Generation degree for the length bound; defaults to the largest minimal generator degree.
    #[arg(long)]
    pub d: Option<u32>,
}

#[derive(Args, Debug)]
pub struct SectionArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    /// Point file spanning L.
    #[arg(long)]
    pub span: PathBuf,
}

#[derive(Args, Debug)]
pub struct SecantArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    /// Point file holding the single center point.
    #[arg(long)]
    pub center: PathBuf,
    /// Skip the N_{2,2} hypothesis check.
    #[arg(long)]
    pub unchecked: bool,
}

#[derive(Args, Debug)]
pub struct LesArgs {
    #[arg(long)]
    pub ideal: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub t: usize,
    #[arg(long, default_value_t = 3)]
    pub max_i: u32,
    #[arg(long, default_value_t = 5)]
    pub max_d: u32,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Work over Q instead of F_p.
    #[arg(long, conflicts_with = "prime")]
    pub rational: bool,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    pub prime: u32,
}

#[derive(Subcommand, Debug)]
pub enum MakeCommand {
    /// Rational normal curve of degree d.
    Rnc {
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// d-uple Veronese embedding of P^n.
    Veronese {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Rational normal scroll of the given type, e.g. 1,1,4.
    Scroll {
        #[arg(long = "type", value_delimiter = ',')]
        kind: Vec<u32>,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// l-secant variety of the rational normal curve of degree n.
    Secant {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        l: u32,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// A one-point center from a stratum: generic, secant, on-x or span:PART,...
    Center {
        #[arg(long, default_value = "scroll:1,1,4")]
        variety: String,
        #[arg(long, default_value = "generic")]
        stratum: String,
        /// Generic centers only: number of points.
        #[arg(long, default_value_t = 1)]
        points: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// Run the case with this name or group.
    #[arg(long)]
    pub case: Option<String>,
    /// Substring of a case name or group.
    pub filter: Option<String>,
    /// Include long-running cases.
    #[arg(long)]
    pub long: bool,
    /// Fixture directory.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

/// Why a command could not produce a verdict.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments or unreadable input: exit 3.
    Usage(String),
    /// The computation itself failed: exit 4.
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Format { .. } | Error::Range(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 3,
            Failure::Compute(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Compute(e) => write!(f, "computation error: {e}"),
        }
    }
}

/// Text written to stdout and the verdict behind the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub stdout: String,
    /// Diagnostics that may vary between runs (timings).
    pub stderr: String,
    /// Exit code replacing the status code, for partial failures.
    pub exit_override: Option<i32>,
}

impl Outcome {
    pub fn new(status: Status, stdout: String) -> Self {
        Outcome { status, stdout, stderr: String::new(), exit_override: None }
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_override.unwrap_or_else(|| self.status.exit_code())
    }
}

/// Key/value report rendered either as `key: value` or `key<TAB>value`.
#[derive(Default)]
struct Report {
    rows: Vec<(String, String)>,
    blocks: Vec<String>,
}

impl Report {
    fn kv(&mut self, k: &str, v: impl ToString) {
        self.rows.push((k.to_string(), v.to_string()));
    }
    fn block(&mut self, text: String) {
        self.blocks.push(text);
    }
    fn render(&self, format: Format) -> String {
        let mut s = String::new();
        for (k, v) in &self.rows {
            match format {
                Format::Pretty => s.push_str(&format!("{k}: {v}\n")),
                Format::Tsv => s.push_str(&format!("{k}\t{v}\n")),
            }
        }
        for b in &self.blocks {
            s.push_str(b);
        }
        s
    }
}

macro_rules! with_ideal {
    ($any:expr, $i:ident => $body:expr) => {
        match $any {
            AnyIdeal::Rational($i) => $body,
            AnyIdeal::Prime($i) => $body,
        }
    };
}

pub fn effective_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("SEED").ok().and_then(|s| s.trim().parse().ok())).unwrap_or(DEFAULT_SEED)
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

pub fn read_ideal(path: &Path) -> Result<AnyIdeal, Failure> {
    parse_ideal_file(&read_text(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_points<F: Field>(field: &F, path: &Path, nvars: usize) -> Result<Vec<Vec<F::Elem>>, Failure> {
    let pts = parse_points(field, &read_text(path)?, nvars).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if pts.is_empty() {
        return Err(Failure::Usage(format!("{}: no points", path.display())));
    }
    Ok(pts)
}

fn degrees_summary<F: Field>(ideal: &Ideal<F>) -> String {
    if ideal.is_unit() {
        return "unit".into();
    }
    let parts: Vec<String> = ideal.generator_degrees().iter().map(|(d, c)| format!("{d}:{c}")).collect();
    if parts.is_empty() {
        "zero".into()
    } else {
        parts.join(" ")
    }
}

fn table_block(table: &BettiTable, format: Format) -> String {
    match format {
        Format::Pretty => table.to_pretty(),
        Format::Tsv => format!("i\td\tbeta\n{}", table.to_tsv()),
    }
}

fn pass(stdout: String) -> Outcome {
    Outcome::new(Status::Pass, stdout)
}

pub fn execute(cli: Cli) -> Result<Outcome, Failure> {
    let format = cli.format;
    let seed = effective_seed(cli.seed);
    match cli.command {
        Command::Betti(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_betti(&i, &a, format)),
        Command::Ndp(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_ndp(&i, &a, format)),
        Command::Reg(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_reg(&i, &a, format)),
        Command::Pei(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_pei(&i, &a, format)),
        Command::Project(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_project(&i, &a, format)),
        Command::Fiber(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_fiber(&i, &a, format)),
        Command::Section(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_section(&i, &a, format)),
        Command::SecantLocus(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_secant(&i, &a, format)),
        Command::LesCheck(a) => with_ideal!(read_ideal(&a.ideal)?, i => cmd_les(&i, &a, format)),
        Command::Make(m) => cmd_make(m, seed),
        Command::Corpus(a) => corpus::command(&a, seed, format),
    }
}

fn cmd_betti<F: Field>(ideal: &Ideal<F>, a: &BettiArgs, format: Format) -> Result<Outcome, Failure> {
    let n = ideal.ring().nvars();
    if a.t >= n {
        return Err(Failure::Usage(format!("--t {} leaves no variables of {n}", a.t)));
    }
    let max_i = a.max_i.unwrap_or((n - a.t) as u32);
    let table = match a.max_d {
        Some(d) => betti_numbers(ideal, a.t, BettiWindow::new(max_i, d), None)?,
        None => betti_table(ideal, a.t, max_i)?,
    };
    let mut r = Report::default();
    r.kv("ring", &table.ring_label);
    r.kv("complete", table.is_complete());
    r.block(table_block(&table, format));
    Ok(pass(r.render(format)))
}

fn cmd_ndp<F: Field>(ideal: &Ideal<F>, a: &NdpArgs, format: Format) -> Result<Outcome, Failure> {
    if a.d == 0 {
        return Err(Failure::Usage("--d must be positive".into()));
    }
    let table = betti_table(ideal, a.t, a.p)?;
    let report = check_ndp(&table, a.d, a.p);
    let stdout = match format {
        Format::Pretty => format!("{report}\n"),
        Format::Tsv => report.to_tsv(),
    };
    Ok(Outcome::new(report.status, stdout))
}

fn cmd_reg<F: Field>(ideal: &Ideal<F>, a: &RegArgs, format: Format) -> Result<Outcome, Failure> {
    let n = ideal.ring().nvars();
    if a.t >= n {
        return Err(Failure::Usage(format!("--t {} leaves no variables of {n}", a.t)));
    }
    let table = betti_table(ideal, a.t, (n - a.t) as u32)?;
    let reg = regularity(&table);
    let pd = pd_depth(&table, n - a.t);
    let mut r = Report::default();
    r.kv("regularity", reg);
    r.kv("pd", if pd.certified { pd.pd.to_string() } else { format!(">= {}", pd.pd) });
    r.kv("depth", if pd.certified { pd.depth.to_string() } else { format!("<= {}", pd.depth) });
    let status = if reg.certified && pd.certified { Status::Pass } else { Status::Inconclusive };
    r.kv("certified", status == Status::Pass);
    Ok(Outcome::new(status, r.render(format)))
}

fn cmd_pei<F: Field>(ideal: &Ideal<F>, a: &PeiArgs, format: Format) -> Result<Outcome, Failure> {
    let level = partial_elim_ideal(ideal, a.level)?;
    let mut r = Report::default();
    r.kv("level", a.level);
    r.kv("generators", degrees_summary(&level.ideal));
    let mut status = Status::Pass;
    if let Some(d) = a.oracle_check {
        let oracle = DegreewisePei::compute(ideal, d, BasisSource::NormalForms)?;
        let rows = compare_with_oracle(ideal, a.level, &oracle)?;
        for c in &rows {
            let dims: Vec<String> = c.dims.iter().map(|(e, x, y)| format!("{e}:{x}/{y}")).collect();
            r.kv(
                &format!("oracle K_{}", c.level),
                format!("{} dims(rule/oracle) {}", if c.agree { "agree" } else { "DISAGREE" }, dims.join(" ")),
            );
        }
        let mut ok = rows.iter().all(|c| c.agree);
        for i in 1..=a.level {
            let residual: i64 = verify_pei_sequence(ideal, i, d)?.iter().map(|row| row.residual().abs()).sum();
            r.kv(&format!("sequence residual K_{i}"), residual);
            ok &= residual == 0;
        }
        status = if ok { Status::Pass } else { Status::Fail };
        r.kv("oracle", status);
    }
    r.block(write_ideal(&level.ideal.minimalized()));
    Ok(Outcome::new(status, r.render(format)))
}

fn cmd_project<F: Field>(ideal: &Ideal<F>, a: &ProjectArgs, format: Format) -> Result<Outcome, Failure> {
    let ring = ideal.ring();
    let center = read_points(ring.field(), &a.center, ring.nvars())?;
    let setup = make_projection(ideal, &center)?;
    let elim = eliminate(&setup.transformed, setup.t)?.minimalized();
    let mut r = Report::default();
    r.kv("center points", setup.t);
    r.kv("center vs X", setup.disjointness);
    r.kv("elimination generators", degrees_summary(&elim));
    let saturate = a.saturate || !a.no_saturate;
    let image = if saturate {
        let sat = project_ideal(&setup)?;
        r.kv("saturated generators", degrees_summary(&sat));
        sat
    } else {
        elim
    };
    let columns: Vec<Vec<F::Elem>> = setup.basis.transpose().to_dense();
    let mut status = Status::Pass;
    if let Some(pd) = &a.betti {
        let (p, d) = (pd[0], pd[1]);
        if d == 0 {
            return Err(Failure::Usage("--betti needs a positive degree".into()));
        }
        let table = betti_table(&image, 0, p)?;
        let report = check_ndp(&table, d, p);
        r.kv("image ndp", &report);
        status = report.status;
        r.block(table_block(&table, format));
    }
    let mut text = String::from("# image in coordinates y with x = P y; columns of P:\n");
    for line in write_points(ring.field(), &columns).lines() {
        text.push_str(&format!("# {line}\n"));
    }
    text.push_str(&write_ideal(&image));
    match &a.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => r.block(text),
    }
    Ok(Outcome::new(status, r.render(format)))
}

fn cmd_fiber<F: Field>(ideal: &Ideal<F>, a: &FiberArgs, format: Format) -> Result<Outcome, Failure> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let center = read_points(ring.field(), &a.center, n)?;
    let setup = make_projection(ideal, &center)?;
    let at = parse_point_arg(ring.field(), &a.at)?;
    let y = if at.len() == n { setup.image_of(&at)? } else { at };
    let d = match a.d {
        Some(d) => d,
        None => max_generator_degree(ideal).ok_or_else(|| Failure::Usage("the zero ideal has no generation degree".into()))?,
    };
    let report = fiber_report(&setup, &y, d)?;
    let mut r = Report::default();
    r.kv("fiber", &report);
    let status = match report.within_bound() {
        Some(false) => Status::Fail,
        _ => Status::Pass,
    };
    r.kv("within bound", status);
    Ok(Outcome::new(status, r.render(format)))
}

fn cmd_section<F: Field>(ideal: &Ideal<F>, a: &SectionArgs, format: Format) -> Result<Outcome, Failure> {
    let ring = ideal.ring();
    let points = read_points(ring.field(), &a.span, ring.nvars())?;
    let report = linear_section(ideal, &points)?;
    let mut r = Report::default();
    r.kv("section", &report);
    r.kv("length <= dim L + 1", report.length <= report.span_dim as u64 + 1);
    r.block(write_ideal(&report.ideal));
    Ok(pass(r.render(format)))
}

fn cmd_secant<F: Field>(ideal: &Ideal<F>, a: &SecantArgs, format: Format) -> Result<Outcome, Failure> {
    let ring = ideal.ring();
    let points = read_points(ring.field(), &a.center, ring.nvars())?;
    if points.len() != 1 {
        return Err(Failure::Usage(format!("the center must be one point, got {}", points.len())));
    }
    let locus = if a.unchecked { secant_locus_unchecked(ideal, &points[0])? } else { secant_locus(ideal, &points[0])? };
    let mut r = Report::default();
    r.kv("s", locus.s);
    r.kv("K_1 generators", degrees_summary(&locus.k1));
    r.kv("K_1 linear", locus.k1_linear);
    if let Some(l) = locus.sigma_length {
        r.kv("sigma length", l);
    }
    r.block(format!("# secant locus in the original coordinates\n{}", write_ideal(&locus.sigma)));
    Ok(pass(r.render(format)))
}

fn cmd_les<F: Field>(ideal: &Ideal<F>, a: &LesArgs, format: Format) -> Result<Outcome, Failure> {
    let report = verify_les(ideal, a.t, a.max_i, a.max_d)?;
    let mut r = Report::default();
    r.kv("t", a.t);
    r.kv("nodes", report.nodes.len());
    r.kv("exact nodes", report.nodes.iter().filter(|n| n.exact).count());
    for n in report.nodes.iter().filter(|n| !n.exact) {
        r.kv("not exact", format!("{:?} i={} d={} dim={} in={} out={}", n.spot, n.i, n.d, n.dim, n.rank_in, n.rank_out));
    }
    let status = if report.exact { Status::Pass } else { Status::Fail };
    r.kv("exact", status);
    Ok(Outcome::new(status, r.render(format)))
}

fn make_variety(spec: VarietySpec, field: &FieldArgs) -> Result<Outcome, Failure> {
    spec.validate()?;
    let text = if field.rational {
        write_ideal(&build_ideal(RationalField, &spec)?)
    } else {
        write_ideal(&build_ideal(PrimeField::new(u64::from(field.prime)).map_err(|e| Failure::Usage(e.to_string()))?, &spec)?)
    };
    Ok(pass(format!("# {spec}\n{text}")))
}

fn make_center<F: Field>(fld: F, spec: &VarietySpec, stratum: &Stratum, points: usize, seed: u64) -> Result<Outcome, Failure> {
    let ideal = build_ideal(fld.clone(), spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = if points == 1 {
        vec![random_center(spec, &ideal, stratum, &mut rng)?]
    } else {
        crate::experiments::draw_center(spec, &ideal, stratum, points, &mut rng)?
    };
    Ok(pass(format!("# {spec} stratum {stratum} seed {seed}\n{}", write_points(&fld, &center))))
}

fn cmd_make(m: MakeCommand, seed: u64) -> Result<Outcome, Failure> {
    match m {
        MakeCommand::Rnc { d, field } => make_variety(VarietySpec::rnc(d), &field),
        MakeCommand::Veronese { n, d, field } => make_variety(VarietySpec::veronese(n, d), &field),
        MakeCommand::Scroll { kind, field } => make_variety(VarietySpec::scroll(&kind), &field),
        MakeCommand::Secant { n, l, field } => make_variety(VarietySpec::catalecticant_secant(n, l), &field),
        MakeCommand::Center { variety, stratum, points, field } => {
            let spec: VarietySpec = variety.parse()?;
            let stratum: Stratum = stratum.parse()?;
            if points == 0 {
                return Err(Failure::Usage("--points must be positive".into()));
            }
            if field.rational {
                make_center(RationalField, &spec, &stratum, points, seed)
            } else {
                let fld = PrimeField::new(u64::from(field.prime)).map_err(|e| Failure::Usage(e.to_string()))?;
                make_center(fld, &spec, &stratum, points, seed)
            }
        }
    }
}

/// Minimal generator counts by degree, as `gens_<d>` keys.
pub fn generator_counts<F: Field>(ideal: &Ideal<F>) -> BTreeMap<u32, usize> {
    if ideal.is_unit() {
        return BTreeMap::from([(0, 1)]);
    }
    ideal.generator_degrees()
}
