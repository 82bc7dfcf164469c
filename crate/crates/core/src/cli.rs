//! Command-line surface. Every command prints a JSON (or flattened text)
//! report and returns an exit code: 0 when all checks pass, 1 for a
//! certified negative answer, 2 for usage and input errors, 3 when the
//! question was left open.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::codec;
use crate::error::{Error, Result};
use crate::gallery;
use crate::interpcirc::{x_point, CircRep};
use crate::interplin::{pt, seg_formula_lin, seg_formula_mn, LinRep, SegVerdict};
use crate::locmove;
use crate::plgroup::{commutator, Homeo, PLCircle, PLMap};
use crate::reconstruct::{self, IsoSpec, TauOutcome};
use crate::roalg::{seg_circ, seg_lin, RoCirc, RoLin, RoSet};
use crate::scenario::{load_scenario, GalleryTag, Grid, Scenario, Space};
use crate::transit::{self, OrderType, Property};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OPEN: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ordrecon", version, about = "Exact checks for locally moving PL groups")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Built-in scenario name or path to a scenario JSON file.
    #[arg(long, default_value = "thompson-f")]
    scenario: String,
    /// Override the scenario grid (`gN` or a comma separated list).
    #[arg(long)]
    grid: Option<String>,
    /// Falls back to ORDRECON_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    fragment_radius: Option<u32>,
    /// Also write the report to this file.
    #[arg(long)]
    report: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum WitnessKind {
    Dot,
    Alloff,
    Commutator1,
    Commutator2,
    Commutator3,
    AlmostForward,
    DoublyDense,
}

#[derive(Subcommand, Debug)]
enum TransitCmd {
    /// Decide a transitivity property over the scenario grid.
    Check {
        #[arg(long)]
        property: String,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Replay the witnesses of a saved report.
    Replay {
        file: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum GalleryCmd {
    /// Sample an example group and check its order relations and homomorphisms
    Certify {
        #[arg(long)]
        example: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Support of a map.
    Var {
        #[arg(long)]
        map: String,
        #[command(flatten)]
        common: Common,
    },
    /// Segregation of two sets, with the crossing element when it fails.
    Seg {
        #[arg(long = "set", num_args = 1)]
        sets: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a witness construction and check its postcondition.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[arg(long = "map")]
        maps: Vec<String>,
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// The point named by a representative (two sets on the line, three on
    /// the circle).
    Interp {
        #[arg(long = "set")]
        sets: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Transitivity properties and their witnesses
    Transit {
        #[command(subcommand)]
        cmd: TransitCmd,
    },
    /// Rebuild the point map behind an isomorphism.
    Reconstruct {
        #[arg(long)]
        iso: String,
        #[arg(long, default_value_t = 12)]
        points: usize,
        /// Also run this many single-generator mutations.
        #[arg(long, default_value_t = 0)]
        mutations: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decide the order type of the scenario's action.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Examples outside the PL families
    Gallery {
        #[command(subcommand)]
        cmd: GalleryCmd,
    },
}

/// Deterministic rendering: JSON with sorted keys, or one
/// `path = value` line per leaf.
pub fn emit_report(v: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(v).unwrap_or_default() + "\n",
        Format::Text => {
            let mut out = String::new();
            flatten(v, "", &mut out);
            out
        }
    }
}

fn flatten(v: &Value, path: &str, out: &mut String) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(x, &format!("{path}/{k}"), out)),
        Value::Array(a) if !a.is_empty() => a.iter().enumerate().for_each(|(i, x)| flatten(x, &format!("{path}/{i}"), out)),
        _ => out.push_str(&format!("{} = {}\n", if path.is_empty() { "/" } else { path }, v)),
    }
}

/// Seed from the flag, then the environment.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| std::env::var("ORDRECON_SEED").ok().and_then(|s| s.parse().ok())).unwrap_or(0)
}

fn scenario_of(c: &Common) -> Result<Scenario> {
    let mut s = load_scenario(&c.scenario)?;
    if let Some(g) = &c.grid {
        s.grid = Grid::parse(g, s.space)?;
    }
    if let Some(r) = c.fragment_radius {
        s.fragment_radius = r;
    }
    Ok(s)
}

/// A file path, or the JSON text itself.
fn read_json(arg: &str) -> Result<Value> {
    let text = match std::fs::read_to_string(arg) {
        Ok(t) => t,
        Err(_) if arg.trim_start().starts_with(['{', '[']) => arg.to_string(),
        Err(e) => return Err(Error::Invalid(format!("{arg}: {e}"))),
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")))
}

fn set_space(v: &Value) -> Space {
    if v.get("kind").and_then(Value::as_str) == Some("circ") {
        Space::Circle
    } else {
        Space::Line
    }
}

/// Reading and writing maps and sets of one space.
trait Io: Homeo + Sized {
    fn map_from(v: &Value) -> Result<Self>;
    fn map_json(&self) -> Value;
    fn set_from(v: &Value) -> Result<Self::Set>;
    fn set_json(u: &Self::Set) -> Value;
}

impl Io for PLMap {
    fn map_from(v: &Value) -> Result<Self> {
        codec::plmap_from(v, "")
    }
    fn map_json(&self) -> Value {
        codec::plmap_json(self)
    }
    fn set_from(v: &Value) -> Result<RoLin> {
        codec::rolin_from(v, "")
    }
    fn set_json(u: &RoLin) -> Value {
        codec::rolin_json(u)
    }
}

impl Io for PLCircle {
    fn map_from(v: &Value) -> Result<Self> {
        codec::plcircle_from(v, "")
    }
    fn map_json(&self) -> Value {
        codec::plcircle_json(self)
    }
    fn set_from(v: &Value) -> Result<RoCirc> {
        codec::rocirc_from(v, "")
    }
    fn set_json(u: &RoCirc) -> Value {
        codec::rocirc_json(u)
    }
}

/// A report and the exit code it stands for.
type Outcome = (Value, i32);

fn cmd_var(map: &str) -> Result<Outcome> {
    let v = read_json(map)?;
    let set = match codec::elem_from(&v, "")? {
        crate::plgroup::Elem::Line(g) => codec::rolin_json(&g.var()),
        crate::plgroup::Elem::Circle(g) => codec::rocirc_json(&g.var()),
    };
    Ok((set, EXIT_PASS))
}

fn cmd_seg(sets: &[String], c: &Common) -> Result<Outcome> {
    if sets.len() != 2 {
        return Err(Error::Parse("seg takes exactly two --set arguments".into()));
    }
    let (a, b) = (read_json(&sets[0])?, read_json(&sets[1])?);
    if set_space(&a) == Space::Circle {
        let (u, w) = (codec::rocirc_from(&a, "/u1")?, codec::rocirc_from(&b, "/u2")?);
        let s = seg_circ(&u, &w);
        return Ok((json!({"report": "seg", "space": "circle", "segregated": s}), if s { EXIT_PASS } else { EXIT_NEGATIVE }));
    }
    let (u, w) = (codec::rolin_from(&a, "/u1")?, codec::rolin_from(&b, "/u2")?);
    let s = seg_lin(&u, &w);
    let mut rep = json!({"report": "seg", "space": "line", "segregated": s});
    let sc = scenario_of(c)?;
    if let (Some(g), Space::Line) = (sc.pl(), sc.space) {
        let v = if g.allow_reversing { seg_formula_mn(&u, &w, g) } else { seg_formula_lin(&u, &w, g) };
        rep["formula"] = match v {
            Ok(SegVerdict::Segregated) => json!({"holds": true}),
            Ok(SegVerdict::Crossed(h)) => json!({"holds": false, "crossing": codec::plmap_json(&h)}),
            Err(e) => json!({"open": e.to_string()}),
        };
        rep["scenario"] = json!(sc.name);
    }
    Ok((rep, if s { EXIT_PASS } else { EXIT_NEGATIVE }))
}

fn need<T: Clone>(xs: &[T], k: usize, what: &str) -> Result<Vec<T>> {
    if xs.len() < k {
        return Err(Error::Parse(format!("need {k} --{what} argument(s), got {}", xs.len())));
    }
    Ok(xs[..k].to_vec())
}

fn witness_in<H: Io>(kind: WitnessKind, maps: &[Value], sets: &[Value], n: usize) -> Result<Value> {
    let ms = maps.iter().map(H::map_from).collect::<Result<Vec<H>>>()?;
    let ss = sets.iter().map(H::set_from).collect::<Result<Vec<H::Set>>>()?;
    let nonid = |h: &H| !h.is_identity();
    Ok(match kind {
        WitnessKind::Dot => {
            let (g, a) = (&need(&ms, 1, "map")?[0], &need(&ss, 1, "set")?[0]);
            let b = locmove::dot_witness(g, a)?;
            let ok = !b.is_zero() && b.leq(a) && g.image(&b).disjoint(&b);
            json!({"b": H::set_json(&b), "verified": ok})
        }
        WitnessKind::Alloff => {
            let a = &need(&ss, 1, "set")?[0];
            let b = locmove::alloff_witness(&ms, a)?;
            let ok = !b.is_zero() && b.leq(a) && ms.iter().all(|g| g.image(&b).disjoint(&b));
            json!({"b": H::set_json(&b), "verified": ok})
        }
        WitnessKind::Commutator1 => {
            let (f, a) = (&need(&ms, 1, "map")?[0], &need(&ss, 1, "set")?[0]);
            let g = locmove::commutator_witness_1(f, a)?;
            let ok = g.var().leq(a) && nonid(&commutator(&g, f));
            json!({"g": g.map_json(), "verified": ok})
        }
        WitnessKind::Commutator2 => {
            let a = &need(&ss, 1, "set")?[0];
            let (h, b) = locmove::commutator_witness_2::<H>(a, n)?;
            let ok = h.var().leq(a) && b.leq(a) && locmove::translates_disjoint(&h, &b, n) && nonid(&h.pow(n as i64));
            json!({"h": h.map_json(), "b": H::set_json(&b), "n": n, "verified": ok})
        }
        WitnessKind::Commutator3 => {
            let fg = need(&ms, 2, "map")?;
            let a = &need(&ss, 1, "set")?[0];
            let h = locmove::commutator_witness_3(&fg[0], &fg[1], a)?;
            let ok = h.var().leq(a) && nonid(&commutator(&fg[0].conj(&h), &fg[1]));
            json!({"h": h.map_json(), "verified": ok})
        }
        WitnessKind::AlmostForward => {
            let m = need(&ms, 3, "map")?;
            let (h1, h2) = locmove::almost_forward_witness(&m[0], &m[1], &m[2])?;
            let c = commutator(&commutator(&m[2], &h1), &h2);
            let ok = commutator(&h1, &m[1]).is_identity()
                && commutator(&h2, &m[1]).is_identity()
                && nonid(&c)
                && commutator(&c, &m[1]).is_identity();
            json!({"h1": h1.map_json(), "h2": h2.map_json(), "verified": ok})
        }
        WitnessKind::DoublyDense => {
            let s = need(&ss, 2, "set")?;
            let g = locmove::doubly_dense_witness::<H>(&s[0], &s[1])?;
            let v = g.var();
            let ok = v.leq(&s[0].sum(&s[1])) && !v.meet(&s[0]).is_zero() && !v.meet(&s[1]).is_zero();
            json!({"g": g.map_json(), "verified": ok})
        }
    })
}

fn cmd_witness(kind: WitnessKind, maps: &[String], sets: &[String], n: usize) -> Result<Outcome> {
    let maps = maps.iter().map(|m| read_json(m)).collect::<Result<Vec<_>>>()?;
    let sets = sets.iter().map(|s| read_json(s)).collect::<Result<Vec<_>>>()?;
    let circle = maps.iter().any(|m| m.get("deg").is_some()) || sets.first().is_some_and(|s| set_space(s) == Space::Circle);
    let mut rep = if circle {
        witness_in::<PLCircle>(kind, &maps, &sets, n)?
    } else {
        witness_in::<PLMap>(kind, &maps, &sets, n)?
    };
    let ok = rep["verified"] == json!(true);
    rep["report"] = json!("witness");
    rep["kind"] = json!(format!("{kind:?}").to_lowercase());
    Ok((rep, if ok { EXIT_PASS } else { EXIT_NEGATIVE }))
}

fn cmd_interp(sets: &[String]) -> Result<Outcome> {
    let vs = sets.iter().map(|s| read_json(s)).collect::<Result<Vec<_>>>()?;
    let p = match vs.len() {
        2 => {
            let rep = LinRep::new(codec::rolin_from(&vs[0], "/u1")?, codec::rolin_from(&vs[1], "/u2")?)?;
            codec::ext_json(&pt(&rep))
        }
        3 => {
            let f = |i: usize| codec::rocirc_from(&vs[i], &format!("/u{}", i + 1));
            let rep = CircRep::new(f(0)?, f(1)?, f(2)?)?;
            json!({"point": codec::point_json(&x_point(&rep)?), "positive": rep.is_positive()})
        }
        k => return Err(Error::Parse(format!("a representative has 2 or 3 sets, got {k}"))),
    };
    Ok((json!({"report": "interp", "point": p}), EXIT_PASS))
}

fn cmd_transit_check(property: &str, n: Option<usize>, c: &Common) -> Result<Outcome> {
    let p = Property::parse(property)?;
    let sc = scenario_of(c)?;
    let r = transit::check_property(p, n, &sc);
    let code = match r.verdict {
        transit::Verdict::Holds(_) => EXIT_PASS,
        transit::Verdict::FailsWith(_) => EXIT_NEGATIVE,
        transit::Verdict::FragmentSound(_) => EXIT_OPEN,
    };
    Ok((r.to_json(), code))
}

fn cmd_transit_replay(file: &str) -> Result<Outcome> {
    let v = read_json(file)?;
    let n = transit::replay_report(&v)?;
    Ok((json!({"report": "replay", "witnesses": n, "replayed": true}), EXIT_PASS))
}

fn cmd_reconstruct(iso: &str, points: usize, mutations: usize, c: &Common) -> Result<Outcome> {
    let sc = scenario_of(c)?;
    let source = sc.pl().ok_or_else(|| Error::Unsupported("reconstruct needs a PL scenario".into()))?;
    let iso = IsoSpec::from_json(&read_json(iso)?, source)?;
    let r = reconstruct::reconstruct(&iso, sc.space, points)?;
    let mut v = r.to_json();
    v["report"] = json!("reconstruct");
    v["scenario"] = json!(sc.name);
    if mutations > 0 {
        let kills = reconstruct::mutation_kills(&iso, sc.space, mutations, points)?;
        let killed = kills.iter().filter(|(_, k)| *k).count();
        v["mutations"] = json!({
            "total": kills.len(),
            "killed": killed,
            "survivors": kills.iter().filter(|(_, k)| !*k).map(|(n, _)| n.clone()).collect::<Vec<_>>(),
        });
        if killed < kills.len() {
            return Ok((v, EXIT_OPEN));
        }
    }
    let code = match (&r.outcome, r.passed()) {
        (_, true) => EXIT_PASS,
        (TauOutcome::NotInduced(_), _) => EXIT_NEGATIVE,
        (TauOutcome::Induced(_), false) => EXIT_NEGATIVE,
    };
    Ok((v, code))
}

fn cmd_classify(c: &Common) -> Result<Outcome> {
    let r = transit::classify_type(&scenario_of(c)?);
    let code = if r.result == OrderType::Inconclusive { EXIT_OPEN } else { EXIT_PASS };
    Ok((r.to_json(), code))
}

fn cmd_certify(example: &str, c: &Common) -> Result<Outcome> {
    let tag = GalleryTag::parse(example)?;
    let cert = gallery::certify(tag, c.samples.unwrap_or(100), resolve_seed(c.seed))?;
    let code = if cert.passed { EXIT_PASS } else { EXIT_OPEN };
    Ok((cert.to_json(), code))
}

fn run(cmd: Cmd) -> (Result<Outcome>, Common) {
    match cmd {
        Cmd::Var { map, common } => (cmd_var(&map), common),
        Cmd::Seg { sets, common } => (cmd_seg(&sets, &common), common),
        Cmd::Witness { kind, maps, sets, n, common } => (cmd_witness(kind, &maps, &sets, n), common),
        Cmd::Interp { sets, common } => (cmd_interp(&sets), common),
        Cmd::Transit { cmd: TransitCmd::Check { property, n, common } } => {
            (cmd_transit_check(&property, n, &common), common)
        }
        Cmd::Transit { cmd: TransitCmd::Replay { file, common } } => (cmd_transit_replay(&file), common),
        Cmd::Reconstruct { iso, points, mutations, common } => {
            (cmd_reconstruct(&iso, points, mutations, &common), common)
        }
        Cmd::Classify { common } => (cmd_classify(&common), common),
        Cmd::Gallery { cmd: GalleryCmd::Certify { example, common } } => (cmd_certify(&example, &common), common),
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Inconclusive(_) => EXIT_OPEN,
        _ => EXIT_USAGE,
    }
}

/// Parse arguments, run the command, write the report to `out` (and to
/// `--report` when given) and return the exit code.
pub fn dispatch<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let (res, common) = run(cli.cmd);
    match res {
        Ok((v, code)) => {
            let text = emit_report(&v, common.format);
            if let Some(path) = &common.report {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "ordrecon: {path}: {e}");
                    return EXIT_USAGE;
                }
            }
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "ordrecon: {e}");
            error_code(&e)
        }
    }
}
