//! Scenarios: a group, the space it acts on, an instance grid and the
//! properties it declares. Loaded from JSON or taken from the built-ins.

use std::fmt;
use std::path::Path;

use num_traits::One;
use serde_json::{json, Value};

use crate::codec;
use crate::error::{Error, Result};
use crate::ordcore::{fmt_q, parse_q, qi, ExtPoint, Q};
use crate::plgroup::{Elem, GroupSpec, PLCircle, PLMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Line,
    Circle,
}

/// The wreath-power and lexicographic examples, which are not PL groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalleryTag {
    Wr1,
    Wrsn,
    Wrs2,
    Autrz,
    Circle1,
}

impl GalleryTag {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "wr1" | "wr1q" => GalleryTag::Wr1,
            "wrsn" => GalleryTag::Wrsn,
            "wrs2" => GalleryTag::Wrs2,
            "autrz" => GalleryTag::Autrz,
            "circle1" => GalleryTag::Circle1,
            _ => return Err(Error::Parse(format!("unknown gallery example {s:?}"))),
        })
    }
    pub fn name(&self) -> &'static str {
        match self {
            GalleryTag::Wr1 => "wr1",
            GalleryTag::Wrsn => "wrsn",
            GalleryTag::Wrs2 => "wrs2",
            GalleryTag::Autrz => "autrz",
            GalleryTag::Circle1 => "circle1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScenarioGroup {
    Pl(GroupSpec),
    Gallery(GalleryTag),
}

/// Sorted grid points. `gN` is `0,1,…,N-1` on the line and `k/N` on the
/// circle; otherwise a comma separated list of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub spec: String,
    pub points: Vec<Q>,
}

impl Grid {
    pub fn parse(spec: &str, space: Space) -> Result<Grid> {
        let spec = spec.trim();
        let mut points = if let Some(n) = spec.strip_prefix('g').and_then(|n| n.parse::<i64>().ok()) {
            if !(2..=64).contains(&n) {
                return Err(Error::Parse(format!("grid size {n} outside 2..=64")));
            }
            match space {
                Space::Line => (0..n).map(qi).collect(),
                Space::Circle => (0..n).map(|k| Q::new(k.into(), n.into())).collect(),
            }
        } else {
            spec.split(',').map(parse_q).collect::<Result<Vec<Q>>>()?
        };
        points.sort();
        points.dedup();
        if points.len() < 2 {
            return Err(Error::Parse(format!("grid {spec:?} needs two points")));
        }
        if space == Space::Circle && points.iter().any(|x| x < &Q::from_integer(0.into()) || x >= &Q::one()) {
            return Err(Error::Parse("circle grid points must lie in [0,1)".into()));
        }
        Ok(Grid { spec: spec.to_string(), points })
    }

    /// Bounded cells between consecutive points (arcs, cyclically, on the
    /// circle).
    pub fn cells(&self, space: Space) -> Vec<(Q, Q)> {
        let p = &self.points;
        let mut out: Vec<(Q, Q)> = p.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        if space == Space::Circle {
            out.push((p[p.len() - 1].clone(), &p[0] + Q::one()));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub space: Space,
    pub group: ScenarioGroup,
    pub grid: Grid,
    pub declared: Vec<String>,
    pub fragment_radius: u32,
}

impl Scenario {
    pub fn pl(&self) -> Option<&GroupSpec> {
        match &self.group {
            ScenarioGroup::Pl(g) => Some(g),
            ScenarioGroup::Gallery(_) => None,
        }
    }

    pub fn declares(&self, prop: &str) -> bool {
        self.declared.iter().any(|d| d == prop)
    }

    /// Spot checks: generators lie in the group and a bump on the first
    /// grid cell does.
    pub fn validate(&self) -> Result<()> {
        let g = match &self.group {
            ScenarioGroup::Pl(g) => g,
            ScenarioGroup::Gallery(_) => return Ok(()),
        };
        for (i, e) in g.generators.iter().enumerate() {
            let kind_ok = matches!((e, self.space), (Elem::Line(_), Space::Line) | (Elem::Circle(_), Space::Circle));
            if !kind_ok || !g.contains(e) {
                return Err(Error::Invalid(format!("/group/generators/{i}: generator not in {}", g.name)));
            }
        }
        let (a, b) = self.grid.cells(self.space)[0].clone();
        let bump = match self.space {
            Space::Line => Elem::Line(PLMap::bump_on(&ExtPoint::Fin(a), &ExtPoint::Fin(b), true)?),
            Space::Circle => Elem::Circle(PLCircle::bump_arc(&a, &b, true)),
        };
        if !g.contains(&bump) {
            return Err(Error::Invalid(format!("{}: no bump on the first grid cell", self.name)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "space": match self.space { Space::Line => "line", Space::Circle => "circle" },
            "grid": self.grid.spec,
            "declared_properties": self.declared,
            "fragment_radius": self.fragment_radius,
        });
        match &self.group {
            ScenarioGroup::Pl(g) => v["group"] = codec::group_json(g),
            ScenarioGroup::Gallery(t) => v["gallery"] = json!(t.name()),
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Scenario> {
        let name = codec::field(v, "name", "")?.as_str().ok_or_else(|| Error::Parse("/name: expected a string".into()))?;
        let space = match codec::field(v, "space", "")?.as_str() {
            Some("line") => Space::Line,
            Some("circle") => Space::Circle,
            _ => return Err(Error::Parse("/space: expected \"line\" or \"circle\"".into())),
        };
        let group = match (v.get("group"), v.get("gallery")) {
            (Some(g), None) => ScenarioGroup::Pl(codec::group_from(g, "/group")?),
            (None, Some(t)) => ScenarioGroup::Gallery(GalleryTag::parse(t.as_str().unwrap_or(""))?),
            _ => return Err(Error::Parse("/group: exactly one of group or gallery is required".into())),
        };
        let grid = Grid::parse(codec::field(v, "grid", "")?.as_str().unwrap_or(""), space)?;
        let declared = match v.get("declared_properties") {
            None => vec![],
            Some(Value::Array(a)) => a.iter().filter_map(|x| x.as_str().map(String::from)).collect(),
            Some(_) => return Err(Error::Parse("/declared_properties: expected an array".into())),
        };
        let fragment_radius = v.get("fragment_radius").and_then(Value::as_u64).unwrap_or(2) as u32;
        let s = Scenario { name: name.to_string(), space, group, grid, declared, fragment_radius };
        s.validate()?;
        Ok(s)
    }

    /// A built-in scenario by name.
    pub fn builtin(name: &str) -> Result<Scenario> {
        let mk = |name: &str, space, group, grid: &str, declared: &[&str]| -> Result<Scenario> {
            Ok(Scenario {
                name: name.to_string(),
                space,
                group,
                grid: Grid::parse(grid, space)?,
                declared: declared.iter().map(|s| s.to_string()).collect(),
                fragment_radius: 2,
            })
        };
        let line_gens = vec![
            Elem::Line(PLMap::translation(qi(1))),
            Elem::Line(PLMap::dyadic_through(&[(qi(0), qi(0)), (qi(1), Q::new(1.into(), 2.into())), (qi(2), qi(2))])?),
        ];
        let circ_gens = vec![
            Elem::Circle(PLCircle::rotation(&Q::new(1.into(), 4.into()))),
            Elem::Circle(PLCircle::bump_arc(&qi(0), &Q::new(1.into(), 2.into()), true)),
            Elem::Circle(PLCircle::bump_arc(&qi(0), &Q::new(1.into(), 4.into()), true)),
        ];
        let line_props = ["interval_high", "orbits:dyadic", "lattice:false"];
        let s = match name {
            "thompson-f" => {
                let g = GroupSpec { generators: line_gens, ..GroupSpec::dyadic("thompson-f", None) };
                mk(name, Space::Line, ScenarioGroup::Pl(g), "g6", &line_props)?
            }
            "neg-extended" => {
                let mut gens = line_gens;
                gens.push(Elem::Line(PLMap::negation()));
                let g = GroupSpec { generators: gens, allow_reversing: true, ..GroupSpec::dyadic("neg-extended", None) };
                mk(name, Space::Line, ScenarioGroup::Pl(g), "g6", &line_props)?
            }
            "rational-pl" => {
                let g = GroupSpec { generators: line_gens, ..GroupSpec::rational_pl("rational-pl") };
                mk(name, Space::Line, ScenarioGroup::Pl(g), "g6", &["interval_high", "lattice:true"])?
            }
            "thompson-t" => {
                let g = GroupSpec { generators: circ_gens, ..GroupSpec::dyadic("thompson-t", None) };
                mk(name, Space::Circle, ScenarioGroup::Pl(g), CIRCLE_GRID, &["interval_high", "orbits:dyadic"])?
            }
            "reversing-circle" => {
                let mut gens = circ_gens;
                gens.push(Elem::Circle(PLCircle::reflection()));
                let g = GroupSpec { generators: gens, allow_reversing: true, ..GroupSpec::dyadic("reversing-circle", None) };
                mk(name, Space::Circle, ScenarioGroup::Pl(g), CIRCLE_GRID, &["interval_high", "orbits:dyadic"])?
            }
            other => {
                let tag = GalleryTag::parse(other)
                    .map_err(|_| Error::Parse(format!("unknown scenario {other:?}")))?;
                let space = if tag == GalleryTag::Circle1 { Space::Circle } else { Space::Line };
                let props: &[&str] = match tag {
                    GalleryTag::Wr1 | GalleryTag::Wrsn => &["o_transitive_2", "semi_blocks:C_gamma"],
                    GalleryTag::Wrs2 => &["inclusion", "semi_blocks:C_gamma"],
                    _ => &["transitive"],
                };
                mk(tag.name(), space, ScenarioGroup::Gallery(tag), "g4", props)?
            }
        };
        s.validate()?;
        Ok(s)
    }

    pub const BUILTINS: [&'static str; 10] =
        ["thompson-f", "neg-extended", "rational-pl", "thompson-t", "reversing-circle", "wr1", "wrsn", "wrs2", "autrz", "circle1"];
}

/// Six dyadic points, unevenly spaced.
const CIRCLE_GRID: &str = "0,1/8,1/4,1/2,5/8,3/4";

/// A built-in name, or a path to a scenario JSON file.
pub fn load_scenario(name_or_path: &str) -> Result<Scenario> {
    if Scenario::BUILTINS.contains(&name_or_path) {
        return Scenario::builtin(name_or_path);
    }
    let path = Path::new(name_or_path);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{name_or_path}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{name_or_path}: {e}")))?;
    Scenario::from_json(&v)
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.grid.points.iter().map(fmt_q).collect();
        write!(f, "{} ({:?}, grid {})", self.name, self.space, pts.join(","))
    }
}
