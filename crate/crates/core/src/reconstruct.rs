//! Recovering the point map behind an isomorphism of PL groups.
//!
//! An isomorphism is given on generators as words in the target
//! generators. Points of the source are named by representatives built
//! from supports of short words; pushing the words through the
//! isomorphism names a target point, and the resulting table is checked
//! for well-definedness, monotonicity (or cyclic orientation) and the
//! conjugation identity. All of this only sees finitely many samples.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::codec::{self, field};
use crate::dyadic::dyadic_point;
use crate::error::{pre, Error, Result};
use crate::gallery;
use crate::interpcirc::{cw_ccw, x_point, CircRep};
use crate::interplin::{pt, LinRep};
use crate::ordcore::{cr, is_dyadic, CirclePoint, ExtPoint, Q};
use crate::plgroup::{Elem, GroupSpec, Homeo, PLCircle, PLMap};
use crate::roalg::{RoCirc, RoLin, RoSet};
use crate::scenario::{GalleryTag, Space};

pub const CAVEAT: &str = "sampled-only: checks cover the sampled points and generators, not the whole group";

// ------------------------------------------------------------------ words

/// A word in the generators, as `(index, exponent)` letters with adjacent
/// letters on the same generator merged. Read left to right as a
/// composition, so `g0*g1` applies `g1` first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<(usize, i64)>);

impl Word {
    pub fn id() -> Self {
        Word(vec![])
    }

    pub fn gen(i: usize) -> Self {
        Word(vec![(i, 1)])
    }

    pub fn from_letters(letters: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for (i, e) in letters {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((j, f)) if *j == i => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((i, e)),
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_gen(&self) -> Option<usize> {
        self.0.iter().map(|&(i, _)| i).max()
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word::from_letters(self.0.iter().rev().map(|&(i, e)| (i, -e)))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::id(), |acc, _| acc.mul(&base))
    }

    /// Replace each generator by a word.
    pub fn substitute(&self, images: &[Word]) -> Word {
        self.0.iter().fold(Word::id(), |acc, &(i, e)| acc.mul(&images[i].pow(e)))
    }

    pub fn eval<H: Homeo>(&self, gens: &[H]) -> H {
        self.0.iter().fold(H::identity(), |acc, &(i, e)| acc.compose(&gens[i].pow(e)))
    }

    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "id" || s == "1" {
            return Ok(Word::id());
        }
        let mut letters = Vec::new();
        for tok in s.split('*') {
            let tok = tok.trim();
            let (g, e) = match tok.split_once('^') {
                Some((g, e)) => (g, e.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?),
                None => (tok, 1),
            };
            let i = g
                .strip_prefix('g')
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("bad generator {g:?} in word {s:?}")))?;
            letters.push((i, e));
        }
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> =
            self.0.iter().map(|&(i, e)| if e == 1 { format!("g{i}") } else { format!("g{i}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Reduced words of length `1..=max_len`, shortest first.
pub fn reduced_words(ngens: usize, max_len: usize) -> Vec<Word> {
    let letters: Vec<(usize, i64)> = (0..ngens).flat_map(|i| [(i, 1), (i, -1)]).collect();
    let mut layer: Vec<Vec<(usize, i64)>> = vec![vec![]];
    let mut out = Vec::new();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                if w.last() == Some(&(l.0, -l.1)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().map(|w| Word::from_letters(w.iter().copied())));
        layer = next;
    }
    out
}

// ------------------------------------------------------ the acting groups

/// The parts of the line and circle groups that reconstruction needs.
pub trait Acting: Homeo + Clone + PartialEq + fmt::Debug {
    type P: Clone + Ord + fmt::Debug + fmt::Display;
    /// Number of sets in a representative.
    const ARITY: usize;
    const SPACE: Space;

    fn from_elem(e: &Elem) -> Option<Self>;
    fn to_elem(&self) -> Elem;
    fn eval_pt(&self, p: &Self::P) -> Self::P;
    /// The point named by a representative.
    fn rep_point(sets: &[Self::Set]) -> Option<Self::P>;
    /// `Some(true)` for order preserving, `Some(false)` for reversing, `None`
    /// when the pairs (sorted by source) respect neither.
    fn direction(pairs: &[(Self::P, Self::P)]) -> Option<bool>;
    /// A bump of the target group moving `a` and fixing `b`, with its support.
    fn separating_bump(a: &Self::P, b: &Self::P) -> Option<(String, Self)>;
    fn orbit_tag(p: &Self::P) -> &'static str;
    /// Index tuples into `sets` forming representatives, up to `per_point`
    /// for each point named.
    fn find_reps(sets: &[Self::Set], per_point: usize) -> BTreeMap<Self::P, Vec<Vec<usize>>>;
    fn point_json(p: &Self::P) -> Value {
        Value::String(p.to_string())
    }
}

impl Acting for PLMap {
    type P = ExtPoint;
    const ARITY: usize = 2;
    const SPACE: Space = Space::Line;

    fn from_elem(e: &Elem) -> Option<Self> {
        match e {
            Elem::Line(g) => Some(g.clone()),
            Elem::Circle(_) => None,
        }
    }
    fn to_elem(&self) -> Elem {
        Elem::Line(self.clone())
    }
    fn eval_pt(&self, p: &ExtPoint) -> ExtPoint {
        self.eval_ext(p)
    }
    fn rep_point(sets: &[RoLin]) -> Option<ExtPoint> {
        LinRep::new(sets[0].clone(), sets[1].clone()).ok().map(|r| pt(&r))
    }
    fn direction(pairs: &[(ExtPoint, ExtPoint)]) -> Option<bool> {
        let up = pairs.windows(2).all(|w| w[0].1 < w[1].1);
        let down = pairs.windows(2).all(|w| w[0].1 > w[1].1);
        match (up, down) {
            (true, _) => Some(true),
            (false, true) => Some(false),
            _ => None,
        }
    }
    fn separating_bump(a: &ExtPoint, b: &ExtPoint) -> Option<(String, Self)> {
        let ExtPoint::Fin(_) = a else { return None };
        let (lo, hi) = if b < a {
            (dyadic_point(b, a), dyadic_point(a, &ExtPoint::PosInf))
        } else {
            (dyadic_point(&ExtPoint::NegInf, a), dyadic_point(a, b))
        };
        let (lo, hi) = (ExtPoint::Fin(lo), ExtPoint::Fin(hi));
        let g = PLMap::bump_on(&lo, &hi, true).ok()?;
        Some((format!("({lo},{hi})"), g))
    }
    fn find_reps(sets: &[RoLin], per_point: usize) -> BTreeMap<ExtPoint, Vec<Vec<usize>>> {
        let mut out: BTreeMap<ExtPoint, Vec<Vec<usize>>> = BTreeMap::new();
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                if i == j {
                    continue;
                }
                if let Some(p) = Self::rep_point(&[sets[i].clone(), sets[j].clone()]) {
                    let e = out.entry(p).or_default();
                    if e.len() < per_point {
                        e.push(vec![i, j]);
                    }
                }
            }
        }
        out
    }
    fn orbit_tag(p: &ExtPoint) -> &'static str {
        match p {
            ExtPoint::Fin(x) if is_dyadic(x) => "dyadic",
            ExtPoint::Fin(_) => "rational",
            _ => "end",
        }
    }
}

impl Acting for PLCircle {
    type P = CirclePoint;
    const ARITY: usize = 3;
    const SPACE: Space = Space::Circle;

    fn from_elem(e: &Elem) -> Option<Self> {
        match e {
            Elem::Circle(g) => Some(g.clone()),
            Elem::Line(_) => None,
        }
    }
    fn to_elem(&self) -> Elem {
        Elem::Circle(self.clone())
    }
    fn eval_pt(&self, p: &CirclePoint) -> CirclePoint {
        self.eval(p)
    }
    fn rep_point(sets: &[RoCirc]) -> Option<CirclePoint> {
        let r = CircRep::new(sets[0].clone(), sets[1].clone(), sets[2].clone()).ok()?;
        x_point(&r).ok()
    }
    fn direction(pairs: &[(CirclePoint, CirclePoint)]) -> Option<bool> {
        if pairs.len() < 3 {
            return Some(true);
        }
        let t0 = &pairs[0].1;
        let ccw = cr(t0, &pairs[1].1, &pairs[2].1);
        let ok = pairs[1..].windows(2).all(|w| {
            let (a, b) = if ccw { (&w[0].1, &w[1].1) } else { (&w[1].1, &w[0].1) };
            cr(t0, a, b)
        });
        ok.then_some(ccw)
    }
    fn separating_bump(a: &CirclePoint, b: &CirclePoint) -> Option<(String, Self)> {
        let (av, bv) = (a.value().clone(), b.value().clone());
        let one = Q::from_integer(1.into());
        let up = |x: &Q, y: &Q| if y > x { y.clone() } else { y + &one };
        // s in the arc (b,a), e in the arc (a,b).
        let s = dyadic_point(&ExtPoint::Fin(bv.clone()), &ExtPoint::Fin(up(&bv, &av)));
        let e = dyadic_point(&ExtPoint::Fin(av.clone()), &ExtPoint::Fin(up(&av, &bv)));
        let (s, e) = (CirclePoint::new(s), CirclePoint::new(e));
        let g = PLCircle::bump_arc(s.value(), e.value(), true);
        Some((format!("({s},{e})"), g))
    }
    fn find_reps(sets: &[RoCirc], per_point: usize) -> BTreeMap<CirclePoint, Vec<Vec<usize>>> {
        let mut out: BTreeMap<CirclePoint, Vec<Vec<usize>>> = BTreeMap::new();
        let full = |out: &BTreeMap<CirclePoint, Vec<Vec<usize>>>, p: &CirclePoint| out.get(p).is_some_and(|v| v.len() >= per_point);
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                // The point is one of the two ends of the gap of u1 holding u2.
                let Ok(ends) = (if i == j { continue } else { cw_ccw(&sets[i], &sets[j]) }) else { continue };
                for k in 0..sets.len() {
                    if full(&out, &ends.cw) && full(&out, &ends.ccw) {
                        break;
                    }
                    if k == i || k == j {
                        continue;
                    }
                    if let Some(p) = Self::rep_point(&[sets[i].clone(), sets[j].clone(), sets[k].clone()]) {
                        if !full(&out, &p) {
                            out.entry(p).or_default().push(vec![i, j, k]);
                        }
                    }
                }
            }
        }
        out
    }
    fn orbit_tag(p: &CirclePoint) -> &'static str {
        if is_dyadic(p.value()) {
            "dyadic"
        } else {
            "rational"
        }
    }
}

pub fn generators<H: Acting>(g: &GroupSpec) -> Result<Vec<H>> {
    g.generators
        .iter()
        .enumerate()
        .map(|(i, e)| H::from_elem(e).ok_or_else(|| Error::Invalid(format!("{}: generator {i} acts on the wrong space", g.name))))
        .collect()
}

// -------------------------------------------------------------- iso specs

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeclaredKind {
    /// Conjugation by an order preserving `t0`.
    Inner(Elem),
    /// Conjugation by an order reversing `t0`.
    Reversal(Elem),
    Abstract,
}

impl DeclaredKind {
    pub fn name(&self) -> &'static str {
        match self {
            DeclaredKind::Inner(_) => "inner",
            DeclaredKind::Reversal(_) => "reversal",
            DeclaredKind::Abstract => "abstract",
        }
    }

    pub fn t0(&self) -> Option<&Elem> {
        match self {
            DeclaredKind::Inner(t) | DeclaredKind::Reversal(t) => Some(t),
            DeclaredKind::Abstract => None,
        }
    }
}

/// An isomorphism given by the images of the source generators, each a
/// word in the target generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoSpec {
    pub name: String,
    pub source: GroupSpec,
    pub target: GroupSpec,
    pub gen_images: Vec<Word>,
    pub declared: DeclaredKind,
}

fn elem_preserving(e: &Elem) -> bool {
    match e {
        Elem::Line(g) => g.preserving(),
        Elem::Circle(g) => g.preserving(),
    }
}

impl IsoSpec {
    /// Conjugation `g ↦ t0 g t0⁻¹`, with the conjugated generators as the
    /// target's generators.
    pub fn conjugation(name: &str, source: &GroupSpec, t0: Elem) -> Result<IsoSpec> {
        let gens = source
            .generators
            .iter()
            .map(|g| match (g, &t0) {
                (Elem::Line(g), Elem::Line(t)) => Ok(Elem::Line(g.conj(t))),
                (Elem::Circle(g), Elem::Circle(t)) => Ok(Elem::Circle(g.conj(t))),
                _ => pre("conjugator acts on a different space"),
            })
            .collect::<Result<Vec<_>>>()?;
        let target = GroupSpec { name: format!("{}^{name}", source.name), generators: gens, ..source.clone() };
        let declared = if elem_preserving(&t0) { DeclaredKind::Inner(t0) } else { DeclaredKind::Reversal(t0) };
        Ok(IsoSpec {
            name: name.to_string(),
            source: source.clone(),
            target,
            gen_images: (0..source.generators.len()).map(Word::gen).collect(),
            declared,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.gen_images.len() != self.source.generators.len() {
            return Err(Error::MalformedIso(format!(
                "{} generator images for {} source generators",
                self.gen_images.len(),
                self.source.generators.len()
            )));
        }
        let n = self.target.generators.len();
        for (i, w) in self.gen_images.iter().enumerate() {
            if w.max_gen().is_some_and(|m| m >= n) {
                return Err(Error::MalformedIso(format!("image of g{i} ({w}) uses a missing target generator")));
            }
        }
        for (i, g) in self.target.generators.iter().enumerate() {
            if !self.target.contains(g) {
                return Err(Error::MalformedIso(format!("target generator {i} is not in {}", self.target.name)));
            }
        }
        Ok(())
    }

    /// Same isomorphism with `gen_images[i]` multiplied on the right by `w`.
    pub fn mutate(&self, i: usize, w: &Word) -> IsoSpec {
        let mut m = self.clone();
        m.gen_images[i] = m.gen_images[i].mul(w);
        m.name = format!("{}[g{i}*={w}]", self.name);
        m.declared = DeclaredKind::Abstract;
        m
    }

    pub fn to_json(&self) -> Value {
        let mut kind = json!({"kind": self.declared.name()});
        if let Some(t) = self.declared.t0() {
            kind["t0"] = codec::elem_json(t);
        }
        json!({
            "name": self.name,
            "target": codec::group_json(&self.target),
            "gen_images": self.gen_images.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "declared_kind": kind,
        })
    }

    /// Parse against a source group (normally the scenario's).
    pub fn from_json(v: &Value, source: &GroupSpec) -> Result<IsoSpec> {
        let name = v.get("name").and_then(Value::as_str).unwrap_or("iso").to_string();
        let target = codec::group_from(field(v, "target", "")?, "/target")?;
        let imgs = field(v, "gen_images", "")?
            .as_array()
            .ok_or_else(|| Error::Parse("/gen_images: expected an array".into()))?
            .iter()
            .enumerate()
            .map(|(i, w)| {
                w.as_str()
                    .ok_or_else(|| Error::Parse(format!("/gen_images/{i}: expected a word")))
                    .and_then(Word::parse)
            })
            .collect::<Result<Vec<_>>>()?;
        let dk = field(v, "declared_kind", "")?;
        let declared = match field(dk, "kind", "/declared_kind")?.as_str() {
            Some("inner") => DeclaredKind::Inner(codec::elem_from(field(dk, "t0", "/declared_kind")?, "/declared_kind/t0")?),
            Some("reversal") => {
                DeclaredKind::Reversal(codec::elem_from(field(dk, "t0", "/declared_kind")?, "/declared_kind/t0")?)
            }
            Some("abstract") => DeclaredKind::Abstract,
            _ => return Err(Error::Parse("/declared_kind/kind: expected inner, reversal or abstract".into())),
        };
        let iso = IsoSpec { name, source: source.clone(), target, gen_images: imgs, declared };
        iso.validate()?;
        Ok(iso)
    }
}

/// The images `α(g_i)` as target elements.
pub fn alpha_images<H: Acting>(iso: &IsoSpec) -> Result<Vec<H>> {
    let tg = generators::<H>(&iso.target)?;
    Ok(iso.gen_images.iter().map(|w| w.eval(&tg)).collect())
}

// ------------------------------------------------------------ sample reps

/// Source words whose supports form a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleRep {
    pub words: Vec<Word>,
}

impl fmt::Display for SampleRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.words.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", w.join(", "))
    }
}

fn supports<H: Acting>(words: &[Word], gens: &[H]) -> Vec<H::Set> {
    words.iter().map(|w| w.eval(gens).var()).collect()
}

/// Representatives for at least `points` distinct source points, up to
/// `per_point` of them per point. Candidate supports come from words of
/// length at most `base_len`, closed `depth` times under conjugation by
/// the generators; only the first `pool` distinct proper supports are
/// combined.
pub fn sample_reps<H: Acting>(
    source: &GroupSpec,
    points: usize,
    per_point: usize,
    base_len: usize,
    depth: usize,
    pool: usize,
) -> Result<Vec<SampleRep>> {
    let gens = generators::<H>(source)?;
    let mut cands: Vec<(Word, H::Set)> = Vec::new();
    let add = |w: Word, v: H::Set, cands: &mut Vec<(Word, H::Set)>| {
        if cands.len() < pool && !v.is_zero() && v != H::Set::one() && !cands.iter().any(|(_, u)| *u == v) {
            cands.push((w, v));
        }
    };
    for w in reduced_words(gens.len(), base_len) {
        let v = w.eval(&gens).var();
        add(w, v, &mut cands);
    }
    // var(h g h⁻¹) = h(var g)
    let mut frontier = 0;
    for _ in 0..depth {
        let end = cands.len();
        for c in frontier..end {
            for (i, g) in gens.iter().enumerate() {
                for e in [1, -1] {
                    let h = Word::from_letters([(i, e)]);
                    let w = h.mul(&cands[c].0).mul(&h.inverse());
                    let v = g.pow(e).image(&cands[c].1);
                    add(w, v, &mut cands);
                }
            }
        }
        frontier = end;
    }
    let sets: Vec<H::Set> = cands.iter().map(|(_, v)| v.clone()).collect();
    let by_point = H::find_reps(&sets, per_point);
    if by_point.len() < points {
        return pre(format!("only {} distinct points from {} sampled supports", by_point.len(), sets.len()));
    }
    Ok(by_point
        .into_values()
        .flatten()
        .map(|idx| SampleRep { words: idx.iter().map(|&i| cands[i].0.clone()).collect() })
        .collect())
}

// --------------------------------------------------------------------- τ

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Preserving,
    Reversing,
}

impl Direction {
    pub fn name(&self) -> &'static str {
        match self {
            Direction::Preserving => "preserving",
            Direction::Reversing => "reversing",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauSample<P> {
    /// Sorted by source point.
    pub pairs: Vec<(P, P)>,
    pub direction: Direction,
}

impl<P: Ord + Clone> TauSample<P> {
    pub fn get(&self, p: &P) -> Option<&P> {
        self.pairs.binary_search_by(|(a, _)| a.cmp(p)).ok().map(|i| &self.pairs[i].1)
    }

    pub fn domain(&self) -> Vec<P> {
        self.pairs.iter().map(|(p, _)| p.clone()).collect()
    }
}

/// Why no point map induces the isomorphism.
#[derive(Clone, Debug, PartialEq)]
pub enum Evidence {
    /// The images of a representative's words do not form a representative.
    ImageNotRep { rep: String },
    /// Two representatives of one point have different images.
    TwoImages { point: String, images: (String, String), reps: (String, String) },
    /// The sampled map is neither monotone nor antitone (or, on the
    /// circle, keeps no cyclic orientation).
    Order { sources: Vec<String>, targets: Vec<String> },
    /// A gallery certificate.
    Gallery(Value),
}

impl Evidence {
    pub fn to_json(&self) -> Value {
        match self {
            Evidence::ImageNotRep { rep } => json!({"kind": "image_not_representative", "rep": rep}),
            Evidence::TwoImages { point, images, reps } => json!({
                "kind": "two_images", "point": point,
                "images": [images.0, images.1], "reps": [reps.0, reps.1],
            }),
            Evidence::Order { sources, targets } => json!({"kind": "order", "sources": sources, "targets": targets}),
            Evidence::Gallery(v) => json!({"kind": "gallery", "certificate": v}),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TauOutcome<P> {
    Induced(TauSample<P>),
    NotInduced(Evidence),
}

impl<P> TauOutcome<P> {
    pub fn induced(&self) -> Option<&TauSample<P>> {
        match self {
            TauOutcome::Induced(t) => Some(t),
            TauOutcome::NotInduced(_) => None,
        }
    }
}

pub fn source_point<H: Acting>(rep: &SampleRep, source: &[H]) -> Result<H::P> {
    H::rep_point(&supports(&rep.words, source)).ok_or_else(|| Error::Precondition(format!("{rep} is not a representative")))
}

/// The image point: the point named by the supports of the `α`-images.
pub fn tau_on_point<H: Acting>(rep: &SampleRep, iso: &IsoSpec) -> Result<H::P> {
    let tg = generators::<H>(&iso.target)?;
    let imgs: Vec<Word> = rep.words.iter().map(|w| w.substitute(&iso.gen_images)).collect();
    H::rep_point(&supports(&imgs, &tg))
        .ok_or_else(|| Error::MalformedIso(format!("image of {rep} is not a representative")))
}

pub fn build_tau<H: Acting>(iso: &IsoSpec, reps: &[SampleRep]) -> Result<TauOutcome<H::P>> {
    iso.validate()?;
    let sg = generators::<H>(&iso.source)?;
    let mut table: BTreeMap<H::P, (H::P, usize)> = BTreeMap::new();
    for (k, rep) in reps.iter().enumerate() {
        let p = source_point(rep, &sg)?;
        let q = match tau_on_point::<H>(rep, iso) {
            Ok(q) => q,
            Err(Error::MalformedIso(_)) => return Ok(TauOutcome::NotInduced(Evidence::ImageNotRep { rep: rep.to_string() })),
            Err(e) => return Err(e),
        };
        match table.get(&p) {
            Some((q0, k0)) if *q0 != q => {
                return Ok(TauOutcome::NotInduced(Evidence::TwoImages {
                    point: p.to_string(),
                    images: (q0.to_string(), q.to_string()),
                    reps: (reps[*k0].to_string(), rep.to_string()),
                }));
            }
            Some(_) => {}
            None => {
                table.insert(p, (q, k));
            }
        }
    }
    let pairs: Vec<(H::P, H::P)> = table.into_iter().map(|(p, (q, _))| (p, q)).collect();
    // A target hit twice is caught by the order check.
    match H::direction(&pairs) {
        Some(up) => Ok(TauOutcome::Induced(TauSample {
            pairs,
            direction: if up { Direction::Preserving } else { Direction::Reversing },
        })),
        None => Ok(TauOutcome::NotInduced(Evidence::Order {
            sources: pairs.iter().map(|(p, _)| p.to_string()).collect(),
            targets: pairs.iter().map(|(_, q)| q.to_string()).collect(),
        })),
    }
}

/// The gallery examples: isomorphisms not induced by any point map, with
/// the certificate as evidence.
pub fn gallery_not_induced(tag: GalleryTag, samples: usize, seed: u64) -> Result<TauOutcome<String>> {
    let cert = gallery::certify(tag, samples, seed)?;
    if !cert.passed {
        return Err(Error::Inconclusive(format!("{} certificate did not pass", tag.name())));
    }
    Ok(TauOutcome::NotInduced(Evidence::Gallery(cert.to_json())))
}

// ----------------------------------------------------------- conjugation

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjFailure {
    pub generator: usize,
    pub point: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjReport {
    pub checks: usize,
    pub per_generator: Vec<usize>,
    pub failures: Vec<ConjFailure>,
}

impl ConjReport {
    /// No check applied; a pass would be vacuous.
    pub fn weak(&self) -> bool {
        self.checks == 0
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && !self.weak()
    }

    pub fn failing_generators(&self) -> BTreeSet<usize> {
        self.failures.iter().map(|f| f.generator).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checks": self.checks,
            "per_generator": self.per_generator,
            "weak": self.weak(),
            "failures": self.failures.iter().map(|f| json!({
                "generator": f.generator, "point": f.point, "expected": f.expected, "got": f.got,
            })).collect::<Vec<_>>(),
        })
    }
}

/// `α(g)(τ(p)) = τ(g(p))` for every sampled `p` and listed generator `g`
/// with `g(p)` also sampled.
pub fn verify_conjugation<H: Acting>(tau: &TauSample<H::P>, iso: &IsoSpec, test_gens: &[usize]) -> Result<ConjReport> {
    let sg = generators::<H>(&iso.source)?;
    let alpha = alpha_images::<H>(iso)?;
    let mut rep = ConjReport { checks: 0, per_generator: vec![0; sg.len()], failures: vec![] };
    for &i in test_gens {
        let (g, ag) = match (sg.get(i), alpha.get(i)) {
            (Some(g), Some(a)) => (g, a),
            _ => return pre(format!("no generator g{i}")),
        };
        for (p, q) in &tau.pairs {
            let gp = g.eval_pt(p);
            let Some(want) = tau.get(&gp) else { continue };
            rep.checks += 1;
            rep.per_generator[i] += 1;
            let got = ag.eval_pt(q);
            if &got != want {
                rep.failures.push(ConjFailure {
                    generator: i,
                    point: p.to_string(),
                    expected: want.to_string(),
                    got: got.to_string(),
                });
            }
        }
    }
    Ok(rep)
}

// ------------------------------------------------------------- uniqueness

#[derive(Clone, Debug, PartialEq)]
pub enum Uniqueness {
    Same { common: usize },
    /// The samples disagree at `point`; `bump` is supported in `interval`,
    /// moves the first image and fixes the second, so the two maps give
    /// different conjugates of it.
    Differ { point: String, images: (String, String), interval: Option<String>, bump: Option<Elem> },
    Incomparable,
}

impl Uniqueness {
    pub fn to_json(&self) -> Value {
        match self {
            Uniqueness::Same { common } => json!({"result": "same", "common": common}),
            Uniqueness::Differ { point, images, interval, bump } => json!({
                "result": "differ", "point": point, "images": [images.0, images.1],
                "interval": interval, "bump": bump.as_ref().map(codec::elem_json),
            }),
            Uniqueness::Incomparable => json!({"result": "incomparable"}),
        }
    }
}

pub fn uniqueness_probe<H: Acting>(t1: &TauSample<H::P>, t2: &TauSample<H::P>) -> Uniqueness {
    let mut common = 0;
    for (p, a) in &t1.pairs {
        let Some(b) = t2.get(p) else { continue };
        common += 1;
        if a != b {
            let cert = H::separating_bump(a, b).filter(|(_, g)| g.eval_pt(a) != *a && g.eval_pt(b) == *b);
            let (interval, bump) = match cert {
                Some((i, g)) => (Some(i), Some(g.to_elem())),
                None => (None, None),
            };
            return Uniqueness::Differ { point: p.to_string(), images: (a.to_string(), b.to_string()), interval, bump };
        }
    }
    if common == 0 {
        Uniqueness::Incomparable
    } else {
        Uniqueness::Same { common }
    }
}

// ----------------------------------------------------------------- orbits

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    /// Source orbit tag to the tags of its images.
    pub map: BTreeMap<String, BTreeSet<String>>,
    /// Directions seen inside each source orbit.
    pub directions: BTreeMap<String, Option<Direction>>,
    pub consistent: bool,
}

impl OrbitReport {
    pub fn to_json(&self) -> Value {
        json!({
            "map": self.map.iter().map(|(k, v)| (k.clone(), json!(v))).collect::<serde_json::Map<_, _>>(),
            "directions": self.directions.iter()
                .map(|(k, d)| (k.clone(), json!(d.map(|d| d.name()))))
                .collect::<serde_json::Map<_, _>>(),
            "consistent": self.consistent,
        })
    }
}

/// Each source orbit (by tag) must land in a single target orbit, and the
/// sample restricted to each orbit must keep the overall direction.
pub fn orbit_map_sample<H: Acting>(tau: &TauSample<H::P>) -> OrbitReport {
    let mut map: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut by_orbit: BTreeMap<String, Vec<(H::P, H::P)>> = BTreeMap::new();
    for (p, q) in &tau.pairs {
        let t = H::orbit_tag(p).to_string();
        map.entry(t.clone()).or_default().insert(H::orbit_tag(q).to_string());
        by_orbit.entry(t).or_default().push((p.clone(), q.clone()));
    }
    let mut directions = BTreeMap::new();
    let mut consistent = map.values().all(|s| s.len() == 1);
    for (t, pairs) in by_orbit {
        let d = H::direction(&pairs).map(|up| if up { Direction::Preserving } else { Direction::Reversing });
        // Fewer points than an orientation needs say nothing.
        let informative = pairs.len() >= H::ARITY;
        if informative && d != Some(tau.direction) {
            consistent = false;
        }
        directions.insert(t, d);
    }
    OrbitReport { map, directions, consistent }
}

// --------------------------------------------------------------- reports

/// Pointwise agreement with the declared conjugator.
pub fn declared_mismatches<H: Acting>(tau: &TauSample<H::P>, iso: &IsoSpec) -> Option<Vec<String>> {
    let t0 = H::from_elem(iso.declared.t0()?)?;
    let mut bad: Vec<String> =
        tau.pairs.iter().filter(|(p, q)| t0.eval_pt(p) != *q).map(|(p, q)| format!("{p} -> {q}")).collect();
    let want = if t0.preserving() { Direction::Preserving } else { Direction::Reversing };
    if tau.direction != want {
        bad.push(format!("direction {} but t0 is {}", tau.direction.name(), want.name()));
    }
    Some(bad)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructReport {
    pub iso: String,
    pub declared_kind: String,
    pub reps: usize,
    pub outcome: TauOutcome<String>,
    pub conjugation: Option<ConjReport>,
    pub uniqueness: Option<Uniqueness>,
    pub orbits: Option<OrbitReport>,
    pub declared_mismatches: Option<Vec<String>>,
}

impl ReconstructReport {
    pub fn passed(&self) -> bool {
        self.outcome.induced().is_some()
            && self.conjugation.as_ref().is_some_and(ConjReport::passed)
            && matches!(self.uniqueness, Some(Uniqueness::Same { .. }))
            && self.orbits.as_ref().is_some_and(|o| o.consistent)
            && self.declared_mismatches.as_ref().map_or(true, Vec::is_empty)
    }

    pub fn to_json(&self) -> Value {
        let outcome = match &self.outcome {
            TauOutcome::Induced(t) => json!({
                "result": "induced",
                "direction": t.direction.name(),
                "pairs": t.pairs.iter().map(|(p, q)| json!([p, q])).collect::<Vec<_>>(),
            }),
            TauOutcome::NotInduced(e) => json!({"result": "not_induced", "evidence": e.to_json()}),
        };
        json!({
            "iso": self.iso,
            "declared_kind": self.declared_kind,
            "representatives": self.reps,
            "outcome": outcome,
            "conjugation": self.conjugation.as_ref().map(ConjReport::to_json),
            "uniqueness": self.uniqueness.as_ref().map(Uniqueness::to_json),
            "orbits": self.orbits.as_ref().map(OrbitReport::to_json),
            "declared_mismatches": self.declared_mismatches,
            "passed": self.passed(),
            "caveat": CAVEAT,
        })
    }
}

fn stringify<P: fmt::Display>(t: &TauSample<P>) -> TauSample<String> {
    TauSample { pairs: t.pairs.iter().map(|(p, q)| (p.to_string(), q.to_string())).collect(), direction: t.direction }
}

/// Sample settings: short words conjugated a few times, a pool of 48
/// supports (32 on the circle), two reps per point.
pub fn default_reps(space: Space, source: &GroupSpec, points: usize) -> Result<Vec<SampleRep>> {
    match space {
        Space::Line => sample_reps::<PLMap>(source, points, 2, 3, 5, 48),
        Space::Circle => sample_reps::<PLCircle>(source, points, 2, 2, 4, 32),
    }
}

/// Every check on one isomorphism.
pub fn reconstruct_with<H: Acting>(iso: &IsoSpec, reps: &[SampleRep]) -> Result<ReconstructReport> {
    let mut report = ReconstructReport {
        iso: iso.name.clone(),
        declared_kind: iso.declared.name().to_string(),
        reps: reps.len(),
        outcome: TauOutcome::NotInduced(Evidence::Order { sources: vec![], targets: vec![] }),
        conjugation: None,
        uniqueness: None,
        orbits: None,
        declared_mismatches: None,
    };
    let tau = match build_tau::<H>(iso, reps)? {
        TauOutcome::Induced(t) => t,
        TauOutcome::NotInduced(e) => {
            report.outcome = TauOutcome::NotInduced(e);
            return Ok(report);
        }
    };
    let all: Vec<usize> = (0..iso.source.generators.len()).collect();
    report.conjugation = Some(verify_conjugation::<H>(&tau, iso, &all)?);
    // A second run from the reps in reverse order.
    let rev: Vec<SampleRep> = reps.iter().rev().cloned().collect();
    report.uniqueness = Some(match build_tau::<H>(iso, &rev)? {
        TauOutcome::Induced(t2) => uniqueness_probe::<H>(&tau, &t2),
        TauOutcome::NotInduced(_) => Uniqueness::Incomparable,
    });
    report.orbits = Some(orbit_map_sample::<H>(&tau));
    report.declared_mismatches = declared_mismatches::<H>(&tau, iso);
    report.outcome = TauOutcome::Induced(stringify(&tau));
    Ok(report)
}

pub fn reconstruct(iso: &IsoSpec, space: Space, points: usize) -> Result<ReconstructReport> {
    let reps = default_reps(space, &iso.source, points)?;
    match space {
        Space::Line => reconstruct_with::<PLMap>(iso, &reps),
        Space::Circle => reconstruct_with::<PLCircle>(iso, &reps),
    }
}

/// Words used to corrupt a generator image, cycling over the target
/// generators and their inverses and short products.
pub fn mutation_words(ngens: usize) -> Vec<Word> {
    reduced_words(ngens, 2)
}

/// Mutate the image of one generator at a time; each mutation is caught
/// when reconstruction fails or disagrees with the unmutated map.
pub fn mutation_kills(iso: &IsoSpec, space: Space, count: usize, points: usize) -> Result<Vec<(String, bool)>> {
    let reps = default_reps(space, &iso.source, points)?;
    let base = match space {
        Space::Line => reconstruct_with::<PLMap>(iso, &reps)?,
        Space::Circle => reconstruct_with::<PLCircle>(iso, &reps)?,
    };
    let words = mutation_words(iso.target.generators.len());
    let n = iso.source.generators.len();
    let mut out = Vec::new();
    for k in 0..count {
        let m = iso.mutate(k % n, &words[(k / n) % words.len()]);
        let r = match space {
            Space::Line => reconstruct_with::<PLMap>(&m, &reps)?,
            Space::Circle => reconstruct_with::<PLCircle>(&m, &reps)?,
        };
        let killed = !r.passed() || r.outcome != base.outcome;
        out.push((m.name, killed));
    }
    Ok(out)
}

/// Conjugators used for the shipped isomorphisms: three order preserving
/// and one reversing, per space.
pub fn shipped_isos(source: &GroupSpec, space: Space) -> Result<Vec<IsoSpec>> {
    use crate::ordcore::{q, qi};
    let t0s: Vec<(&str, Elem)> = match space {
        Space::Line => vec![
            ("shift", Elem::Line(PLMap::translation(q(1, 4)))),
            ("squeeze", Elem::Line(PLMap::dyadic_through(&[(qi(0), qi(0)), (qi(1), q(1, 4)), (qi(2), qi(2))])?)),
            ("stretch", Elem::Line(PLMap::dyadic_through(&[(qi(-1), qi(-1)), (q(1, 2), qi(1)), (qi(3), q(7, 2))])?)),
            ("negate", Elem::Line(PLMap::negation().compose(&PLMap::translation(q(1, 2))))),
        ],
        Space::Circle => vec![
            ("rotate", Elem::Circle(PLCircle::rotation(&q(1, 8)))),
            ("bump", Elem::Circle(PLCircle::bump_arc(&qi(0), &q(1, 2), true))),
            ("push", Elem::Circle(PLCircle::dyadic_through(&[(qi(0), q(1, 8)), (q(1, 2), q(1, 4))])?)),
            ("reflect", Elem::Circle(PLCircle::reflection())),
        ],
    };
    t0s.into_iter().map(|(n, t)| IsoSpec::conjugation(n, source, t)).collect()
}
