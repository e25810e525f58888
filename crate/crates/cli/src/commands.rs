use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eloop_core::diagnostics::{classify_group_loops, replay, witness_a, witness_b, witness_inf, GroupStatus, WitnessKind};
use eloop_core::group::{certify_abelian_group, format_factors, CayleyTable};
use eloop_core::layers::{stratify, Layer};
use eloop_core::structure::infinity_decompose;
use eloop_core::{EllipticLoop, Ring, RingKind};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dto::{self, Instance, LawReportDto, Point};
use crate::suites::{self, Check, Status, TorsionReport};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "eloop", version, about = "Exact arithmetic and verification for elliptic loops over finite local rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Output format; csv is available for classify and enumerate.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Residue characteristic, a prime at least 5.
    #[arg(short = 'p', global = true)]
    pub p: Option<u32>,
    /// Nilpotency exponent.
    #[arg(short = 'e', global = true)]
    pub e: Option<u32>,
    /// Curve coefficient A.
    #[arg(short = 'A', global = true, allow_negative_numbers = true)]
    pub a: Option<i64>,
    /// Curve coefficient B.
    #[arg(short = 'B', global = true, allow_negative_numbers = true)]
    pub b: Option<i64>,
    /// Ring family: Z/p^e or F_p[t]/(t^e).
    #[arg(long, global = true, value_enum, default_value_t = RingArg::Integers)]
    pub ring: RingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Integers,
    Polynomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Part {
    All,
    Infinity,
    Affine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sum of two points.
    Add {
        #[arg(long = "point", value_parser = parse_point, allow_hyphen_values = true, num_args = 1, required = true)]
        points: Vec<[i64; 3]>,
    },
    /// Scalar multiple nP.
    Mul {
        #[arg(short = 'n', long = "n", allow_negative_numbers = true)]
        n: i64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [i64; 3],
    },
    /// Order of a point.
    Order {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [i64; 3],
    },
    /// Whether a projective point lies on the loop.
    Membership {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [i64; 3],
    },
    /// The layer parameter t of an affine point.
    Stratify {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [i64; 3],
    },
    /// Coordinates of a point over the identity in the two infinity generators.
    Decompose {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [i64; 3],
    },
    /// Summary of every layer, or of the layer with parameter t.
    Layers {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: Option<i64>,
    },
    /// q-torsion in the fiber of a point, its difference group and line.
    Torsion {
        #[arg(long = "q")]
        q: i64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: [i64; 3],
    },
    /// Run a verification suite, or a single law by name.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest number of tuples checked per law before sampling.
        #[arg(long, default_value_t = 200_000)]
        budget: u64,
    },
    /// Decide which loops in a search range are groups.
    Classify {
        #[arg(long, default_value_t = 17)]
        max_p: u32,
        #[arg(long, default_value_t = 300)]
        max_order: u64,
    },
    /// A non-associative triple from one of the explicit constructions.
    Witness {
        #[arg(long = "type", value_parser = parse_witness_kind)]
        kind: WitnessKind,
        /// Base point for the A and B constructions.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Option<[i64; 3]>,
    },
    /// List the points of the loop or of one layer.
    Enumerate {
        #[arg(long = "t", allow_negative_numbers = true)]
        t: Option<i64>,
        #[arg(long, value_enum, default_value_t = Part::All)]
        part: Part,
    },
    /// Re-evaluate every recorded counterexample in a JSON report ("-" for stdin).
    Replay { file: PathBuf },
}

fn parse_point(s: &str) -> Result<[i64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(format!("expected X,Y,Z, got {s:?}"));
    };
    let num = |v: &str| v.parse::<i64>().map_err(|e| format!("{v:?}: {e}"));
    Ok([num(x)?, num(y)?, num(z)?])
}

fn parse_witness_kind(s: &str) -> Result<WitnessKind, String> {
    WitnessKind::from_name(s).ok_or_else(|| format!("unknown witness type {s:?}; expected A, B or inf"))
}

/// What the binary prints and the exit code it returns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: u8,
    pub body: String,
}

fn emit<T: Serialize>(format: Format, code: u8, value: &T, text: impl FnOnce() -> String) -> Result<Output, CliError> {
    let body = match format {
        Format::Text => text(),
        Format::Json => serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?,
        Format::Csv => return Err(CliError::Usage("csv output is only available for classify and enumerate".into())),
    };
    Ok(Output { code, body })
}

fn build_loop(args: &InstanceArgs) -> Result<EllipticLoop, CliError> {
    let missing = |flag: &str| CliError::Usage(format!("missing {flag}"));
    let p = args.p.ok_or_else(|| missing("-p"))?;
    let e = args.e.ok_or_else(|| missing("-e"))?;
    let a = args.a.ok_or_else(|| missing("-A"))?;
    let b = args.b.ok_or_else(|| missing("-B"))?;
    let kind = match args.ring {
        RingArg::Integers => RingKind::IntegerQuotient,
        RingArg::Polynomial => RingKind::TruncatedPolynomial,
    };
    let ring = Ring::new(kind, p, e)?;
    Ok(EllipticLoop::new(ring, dto::elem(&ring, a)?, dto::elem(&ring, b)?)?)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Classify { max_p, max_order } => return classify(fmt, *max_p, *max_order),
        Command::Replay { file } => return replay_file(fmt, file),
        _ => {}
    }
    let lp = build_loop(&cli.instance)?;
    let instance = Instance::of(&lp);
    match &cli.command {
        Command::Add { points } => {
            let [p1, p2] = points.as_slice() else {
                return Err(CliError::Usage("add takes exactly two --point values".into()));
            };
            let (p1, p2) = (dto::loop_point(&lp, *p1)?, dto::loop_point(&lp, *p2)?);
            let sum = dto::point(&lp.add(&p1, &p2)?);
            let out = AddOut { instance, points: [dto::point(&p1), dto::point(&p2)], sum };
            emit(fmt, 0, &out, || dto::show(&sum))
        }
        Command::Mul { n, point } => {
            let pt = dto::loop_point(&lp, *point)?;
            let result = dto::point(&lp.mul(*n, &pt)?);
            let out = MulOut { instance, n: *n, point: dto::point(&pt), result };
            emit(fmt, 0, &out, || dto::show(&result))
        }
        Command::Order { point } => {
            let pt = dto::loop_point(&lp, *point)?;
            let order = lp.order_of(&pt)?;
            let out = OrderOut { instance, point: dto::point(&pt), order };
            emit(fmt, 0, &out, || order.to_string())
        }
        Command::Membership { point } => {
            let pt = dto::proj(lp.ring(), *point)?;
            let member = lp.contains(&pt);
            let part = member.then(|| if pt.is_affine(lp.ring()) { "affine" } else { "infinity" });
            let out = MembershipOut { instance, point: pt.codes(), member, part: part.map(str::to_string) };
            let text = || match part {
                Some(part) => format!("{pt} is on the loop ({part})"),
                None => format!("{pt} is not on the loop"),
            };
            emit(fmt, if member { 0 } else { 1 }, &out, text)
        }
        Command::Stratify { point } => {
            let pt = dto::loop_point(&lp, *point)?;
            let t = stratify(&lp, &pt)?.value();
            let out = StratifyOut { instance, point: dto::point(&pt), t };
            emit(fmt, 0, &out, || format!("t = {t}"))
        }
        Command::Decompose { point } => {
            let pt = dto::loop_point(&lp, *point)?;
            let d = infinity_decompose(&lp, &pt)?;
            let out = DecomposeOut { instance, point: dto::point(&pt), alpha: d.alpha, beta: d.beta };
            emit(fmt, 0, &out, || format!("{pt} = {} (p:1:0) + {} (0:1:p)", d.alpha, d.beta))
        }
        Command::Layers { t } => layers(fmt, &lp, *t),
        Command::Torsion { q, point } => {
            let pt = dto::loop_point(&lp, *point)?;
            let rep = suites::torsion_report(&lp, *q, &pt)?;
            let code = if rep.holds() { 0 } else { 1 };
            let out = TorsionOut { instance, report: rep.clone() };
            emit(fmt, code, &out, || torsion_text(&rep))
        }
        Command::Verify { suite, seed, budget } => {
            let checks = suites::run(&lp, suite, *budget, *seed)?;
            let passed = checks.iter().all(|c| c.status != Status::Fail);
            let out = VerifyOut { instance, suite: suite.clone(), seed: *seed, budget: *budget, passed, checks };
            emit(fmt, if passed { 0 } else { 1 }, &out, || verify_text(&out))
        }
        Command::Witness { kind, point } => {
            let base = point.map(|c| dto::loop_point(&lp, c)).transpose()?;
            let w = match kind {
                WitnessKind::A => witness_a(&lp, base.as_ref())?,
                WitnessKind::B => witness_b(&lp, base.as_ref())?,
                WitnessKind::Infinity => witness_inf(&lp)?,
            };
            let out = WitnessOut {
                instance,
                kind: kind.name().to_string(),
                points: w.points.map(|p| dto::point(&p)),
                left: dto::point(&w.left),
                right: dto::point(&w.right),
                associates: w.associates,
                rank: w.rank,
                report: LawReportDto::new(&lp, &suites::witness_report(&w)),
            };
            emit(fmt, if w.associates { 0 } else { 1 }, &out, || witness_text(&out))
        }
        Command::Enumerate { t, part } => enumerate(fmt, &lp, *t, *part),
        Command::Classify { .. } | Command::Replay { .. } => unreachable!("handled above"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddOut {
    pub instance: Instance,
    pub points: [Point; 2],
    pub sum: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulOut {
    pub instance: Instance,
    pub n: i64,
    pub point: Point,
    pub result: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderOut {
    pub instance: Instance,
    pub point: Point,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipOut {
    pub instance: Instance,
    pub point: Point,
    pub member: bool,
    pub part: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifyOut {
    pub instance: Instance,
    pub point: Point,
    pub t: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeOut {
    pub instance: Instance,
    pub point: Point,
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerOut {
    pub t: u32,
    #[serde(rename = "Z_t")]
    pub z_t: u32,
    pub cardinality: u64,
    /// Order of `(p:1:Z_t)`; integer rings only.
    pub infinity_order: Option<u64>,
    /// Invariant factors when the layer's Cayley table was certified.
    pub group_structure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayersOut {
    pub instance: Instance,
    pub layers: Vec<LayerOut>,
}

/// Cayley tables for layer certificates are built while the total number of
/// table entries stays below this.
const LAYER_TABLE_WORK: u64 = 50_000_000;

fn layers(fmt: Format, lp: &EllipticLoop, t: Option<i64>) -> Result<Output, CliError> {
    let chosen: Vec<Layer> = match t {
        Some(t) => vec![Layer::new(lp, dto::elem(lp.ring(), t)?)?],
        None => Layer::all(lp).collect(),
    };
    let mut rows = Vec::with_capacity(chosen.len());
    for layer in &chosen {
        let pts = layer.points();
        let n = pts.len() as u64;
        let infinity_order = match layer.infinity_generator() {
            Ok(g) => Some(lp.order_of(&g)?),
            Err(eloop_core::Error::UnsupportedRing) => None,
            Err(e) => return Err(e.into()),
        };
        let group_structure = if n * n * chosen.len() as u64 <= LAYER_TABLE_WORK {
            let table = CayleyTable::build(lp, &pts)?;
            certify_abelian_group(&table).map(|c| format_factors(&c.factors))
        } else {
            None
        };
        rows.push(LayerOut {
            t: layer.t().value(),
            z_t: layer.infinity_z()?.value(),
            cardinality: n,
            infinity_order,
            group_structure,
        });
    }
    let out = LayersOut { instance: Instance::of(lp), layers: rows };
    emit(fmt, 0, &out, || {
        let mut s = format!("{} layers of {}", out.layers.len(), out.instance);
        for l in &out.layers {
            s.push_str(&format!(
                "\nt = {:<6} Z_t = {:<6} |L_t| = {:<6} inf order = {:<6} structure = {}",
                l.t,
                l.z_t,
                l.cardinality,
                l.infinity_order.map_or("-".into(), |o| o.to_string()),
                l.group_structure.as_deref().unwrap_or("-"),
            ));
        }
        s
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionOut {
    pub instance: Instance,
    #[serde(flatten)]
    pub report: TorsionReport,
}

fn torsion_text(r: &TorsionReport) -> String {
    let yes = |b: bool| if b { "yes" } else { "no" };
    let line = |c: [u32; 3]| format!("{} x + {} y + {} z = 0", c[0], c[1], c[2]);
    [
        format!("point {}, q = {}", dto::show(&r.point), r.q),
        format!("torsion fiber: {} points", r.fiber.len()),
        format!(
            "difference group: {} elements, generator {}, subgroup {}, cyclic {}, translates onto fiber {}",
            r.difference_group.len(),
            dto::show(&r.generator),
            yes(r.is_subgroup),
            yes(r.cyclic),
            yes(r.translates_onto_fiber)
        ),
        format!("line {}{}", line(r.line), if r.degenerate_line { " (degenerate)" } else { "" }),
        format!("reduced line {}", line(r.reduced_line)),
        format!("fiber on line: {}", yes(r.fiber_on_line)),
        format!("reduced line meets fiber exactly: {}", yes(r.reduced_line_meets_fiber_exactly)),
    ]
    .join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub instance: Instance,
    pub suite: String,
    pub seed: u64,
    pub budget: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn verify_text(out: &VerifyOut) -> String {
    let mut lines = vec![format!("{} suite {} (seed {}, budget {})", out.instance, out.suite, out.seed, out.budget)];
    for c in &out.checks {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let detail = c.detail.replace('\n', "\n       ");
        lines.push(format!("[{tag}] {}/{}: {detail}", c.suite, c.name));
    }
    let count = |s: Status| out.checks.iter().filter(|c| c.status == s).count();
    lines.push(format!(
        "{} passed, {} failed, {} skipped",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped)
    ));
    lines.join("\n")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub instance: Instance,
    pub kind: String,
    pub points: [Point; 3],
    /// `(P1 + P2) + P3`.
    pub left: Point,
    /// `P1 + (P2 + P3)`.
    pub right: Point,
    pub associates: bool,
    pub rank: u32,
    pub report: LawReportDto,
}

fn witness_text(w: &WitnessOut) -> String {
    let [a, b, c] = w.points.each_ref().map(dto::show);
    format!(
        "witness {} on {}\ntriple {a} {b} {c}\n(P1 + P2) + P3 = {}\nP1 + (P2 + P3) = {}\n{} (matrix rank {})",
        w.kind,
        w.instance,
        dto::show(&w.left),
        dto::show(&w.right),
        if w.associates { "associates" } else { "does not associate" },
        w.rank
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOut {
    pub instance: Instance,
    pub t: Option<u32>,
    pub count: usize,
    pub points: Vec<Point>,
}

fn enumerate(fmt: Format, lp: &EllipticLoop, t: Option<i64>, part: Part) -> Result<Output, CliError> {
    let (t, mut pts) = match t {
        Some(t) => {
            let layer = Layer::new(lp, dto::elem(lp.ring(), t)?)?;
            (Some(layer.t().value()), layer.points())
        }
        None => (None, lp.points()),
    };
    pts.retain(|p| match part {
        Part::All => true,
        Part::Infinity => lp.is_at_infinity(p),
        Part::Affine => lp.is_affine(p),
    });
    pts.sort();
    let out = EnumerateOut { instance: Instance::of(lp), t, count: pts.len(), points: dto::points(&pts) };
    if fmt == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["X", "Y", "Z"]).map_err(csv_err)?;
        for p in &out.points {
            w.serialize(p).map_err(csv_err)?;
        }
        return Ok(Output { code: 0, body: csv_body(w)? });
    }
    emit(fmt, 0, &out, || {
        let mut s = format!("{} points", out.count);
        for p in &out.points {
            s.push('\n');
            s.push_str(&dto::show(p));
        }
        s
    })
}

/// One CSV row of the classification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRow {
    pub p: u32,
    pub e: u32,
    #[serde(rename = "A")]
    pub a: u32,
    #[serde(rename = "B")]
    pub b: u32,
    pub q: u64,
    pub size: u64,
    pub group: bool,
    /// Invariant factors for groups, empty otherwise.
    pub structure: String,
    /// `certificate` for groups; for the others, how the failing triple was
    /// found.
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    #[serde(flatten)]
    pub row: ClassRow,
    /// Generators of the cyclic factors, for groups.
    pub generators: Option<Vec<Point>>,
    /// A triple that does not associate, for the others.
    pub triple: Option<[Point; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOut {
    pub max_p: u32,
    pub max_order: u64,
    pub loops: usize,
    pub groups: usize,
    pub rows: Vec<ClassEntry>,
}

fn classify(fmt: Format, max_p: u32, max_order: u64) -> Result<Output, CliError> {
    let rows: Vec<ClassEntry> = classify_group_loops(max_p, max_order)?
        .into_iter()
        .map(|r| {
            let (group, structure, method, generators, triple) = match r.status {
                GroupStatus::Group { factors, generators } => {
                    (true, format_factors(&factors), "certificate".to_string(), Some(dto::points(&generators)), None)
                }
                GroupStatus::NotGroup { method, triple } => {
                    (false, String::new(), method.to_string(), None, Some(triple.map(|p| dto::point(&p))))
                }
            };
            let row = ClassRow { p: r.p, e: r.e, a: r.a, b: r.b, q: r.q, size: r.size, group, structure, method };
            ClassEntry { row, generators, triple }
        })
        .collect();
    let groups = rows.iter().filter(|r| r.row.group).count();
    let out = ClassifyOut { max_p, max_order, loops: rows.len(), groups, rows };
    if fmt == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &out.rows {
            w.serialize(&r.row).map_err(csv_err)?;
        }
        return Ok(Output { code: 0, body: csv_body(w)? });
    }
    emit(fmt, 0, &out, || {
        let mut s = format!(
            "{} loops with p <= {max_p}, p^e <= {max_order}, e >= 2: {} groups",
            out.loops, out.groups
        );
        for r in out.rows.iter().filter(|r| r.row.group) {
            let r = &r.row;
            s.push_str(&format!("\nL_{{{},{}}}(Z/{}^{}) ~ {}", r.a, r.b, r.p, r.e, r.structure));
        }
        s
    })
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn csv_body(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    let mut s = String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))?;
    if s.ends_with('\n') {
        s.pop();
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replayed {
    pub instance: Instance,
    pub law: String,
    pub recorded_holds: bool,
    /// Whether the recorded tuple satisfies the law under fresh arithmetic.
    pub tuple_holds: bool,
    pub reproduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayOut {
    pub replayed: Vec<Replayed>,
    pub reproduced: bool,
}

/// Every object in the document that parses as a law report.
fn find_reports(v: &Value, out: &mut Vec<LawReportDto>) {
    match v {
        Value::Object(map) => {
            if map.contains_key("law") {
                if let Ok(rep) = serde_json::from_value::<LawReportDto>(v.clone()) {
                    out.push(rep);
                    return;
                }
            }
            map.values().for_each(|x| find_reports(x, out));
        }
        Value::Array(xs) => xs.iter().for_each(|x| find_reports(x, out)),
        _ => {}
    }
}

fn replay_file(fmt: Format, file: &PathBuf) -> Result<Output, CliError> {
    let mut text = String::new();
    if file.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(e.to_string()))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
    }
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("invalid JSON: {e}")))?;
    let mut reports = Vec::new();
    find_reports(&doc, &mut reports);
    let mut replayed = Vec::new();
    for dto in reports.iter().filter(|r| r.counterexample.is_some()) {
        let lp = dto.instance.build()?;
        let rep = dto.to_report(&lp)?;
        let cx = rep.counterexample.as_ref().expect("filtered on counterexample");
        let tuple_holds = replay(&lp, rep.law, cx)?;
        replayed.push(Replayed {
            instance: dto.instance,
            law: dto.law.clone(),
            recorded_holds: dto.holds,
            tuple_holds,
            reproduced: tuple_holds == dto.holds,
        });
    }
    if replayed.is_empty() {
        return Err(CliError::Usage("no law report with a counterexample in the input".into()));
    }
    let reproduced = replayed.iter().all(|r| r.reproduced);
    let out = ReplayOut { replayed, reproduced };
    emit(fmt, if reproduced { 0 } else { 1 }, &out, || {
        out.replayed
            .iter()
            .map(|r| {
                let verdict = if r.reproduced { "reproduced" } else { "NOT reproduced" };
                format!("{} on {}: tuple {} ({verdict})", r.law, r.instance, if r.tuple_holds { "holds" } else { "fails" })
            })
            .collect::<Vec<_>>()
            .join("\n")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_syntax() {
        assert_eq!(parse_point("1, -2,3"), Ok([1, -2, 3]));
        assert!(parse_point("1,2").is_err());
        assert!(parse_point("1,2,x").is_err());
    }

    #[test]
    fn csv_only_where_supported() {
        let cli = Cli::parse_from(["eloop", "order", "-p", "5", "-e", "2", "-A", "2", "-B", "1", "--point", "0,1,1"]);
        assert_eq!(run(&cli).unwrap(), Output { code: 0, body: "35".into() });
        let cli = Cli::parse_from(["eloop", "--format", "csv", "order", "-p", "5", "-e", "2", "-A", "2", "-B", "1", "--point", "0,1,1"]);
        assert!(matches!(run(&cli), Err(CliError::Usage(_))));
    }
}
