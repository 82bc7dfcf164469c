//! JSON encoding of exact data. Rationals are strings like `"-3/8"`, so
//! every value round-trips without loss.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::ordcore::{fmt_q, parse_q, CircInterval, CirclePoint, ExtPoint, LinInterval, Q};
use crate::plgroup::{Elem, GroupSpec, PLCircle, PLMap};
use crate::roalg::{RoCirc, RoLin};

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

pub fn q_json(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn qs_json(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(q_json).collect())
}

pub fn ext_json(p: &ExtPoint) -> Value {
    Value::String(p.to_string())
}

/// Field lookup with a JSON-pointer style location in errors.
pub fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(&format!("{path}/{key}"), "missing field"))
}

pub fn q_from(v: &Value, path: &str) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| perr(path, e)),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().unwrap_or(0).into())),
        _ => Err(perr(path, "expected a rational string")),
    }
}

pub fn qs_from(v: &Value, path: &str) -> Result<Vec<Q>> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected an array"))?;
    arr.iter().enumerate().map(|(i, x)| q_from(x, &format!("{path}/{i}"))).collect()
}

pub fn ext_from(v: &Value, path: &str) -> Result<ExtPoint> {
    match v {
        Value::String(s) => ExtPoint::parse(s).map_err(|e| perr(path, e)),
        _ => q_from(v, path).map(ExtPoint::Fin),
    }
}

pub fn lin_interval_json(i: &LinInterval) -> Value {
    json!([ext_json(&i.lo), ext_json(&i.hi)])
}

pub fn lin_interval_from(v: &Value, path: &str) -> Result<LinInterval> {
    let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr(path, "expected [lo, hi]"))?;
    LinInterval::new(ext_from(&a[0], &format!("{path}/0"))?, ext_from(&a[1], &format!("{path}/1"))?)
        .map_err(|e| perr(path, e))
}

pub fn circ_interval_json(i: &CircInterval) -> Value {
    if i.whole {
        return Value::String("whole".into());
    }
    json!([q_json(i.start.value()), q_json(i.end.value())])
}

pub fn circ_interval_from(v: &Value, path: &str) -> Result<CircInterval> {
    if v.as_str() == Some("whole") {
        return Ok(CircInterval::whole());
    }
    let a = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr(path, "expected [start, end]"))?;
    Ok(CircInterval::arc(q_from(&a[0], &format!("{path}/0"))?, q_from(&a[1], &format!("{path}/1"))?))
}

pub fn rolin_json(u: &RoLin) -> Value {
    let comps: Vec<Value> = u.components().iter().map(|(a, b)| json!([ext_json(a), ext_json(b)])).collect();
    json!({"kind": "lin", "components": comps})
}

fn components<'a>(v: &'a Value, kind: &str, path: &str) -> Result<&'a Vec<Value>> {
    match v.get("kind").and_then(Value::as_str) {
        Some(k) if k == kind => {}
        _ => return Err(perr(&format!("{path}/kind"), format!("expected \"{kind}\""))),
    }
    field(v, "components", path)?
        .as_array()
        .ok_or_else(|| perr(&format!("{path}/components"), "expected a list of intervals"))
}

pub fn rolin_from(v: &Value, path: &str) -> Result<RoLin> {
    let mut raw = Vec::new();
    for (i, c) in components(v, "lin", path)?.iter().enumerate() {
        let iv = lin_interval_from(c, &format!("{path}/components/{i}"))?;
        raw.push((iv.lo, iv.hi));
    }
    Ok(RoLin::from_raw(raw))
}

pub fn rocirc_json(u: &RoCirc) -> Value {
    if u.is_whole() {
        return json!({"kind": "circ", "components": [], "whole": true});
    }
    let comps: Vec<Value> = u.arcs().iter().map(|(a, b)| json!([q_json(a), q_json(b)])).collect();
    json!({"kind": "circ", "components": comps})
}

pub fn rocirc_from(v: &Value, path: &str) -> Result<RoCirc> {
    let comps = components(v, "circ", path)?;
    if v.get("whole").and_then(Value::as_bool) == Some(true) {
        return Ok(RoCirc::whole());
    }
    let mut arcs = Vec::new();
    for (i, c) in comps.iter().enumerate() {
        let at = format!("{path}/components/{i}");
        let a = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| perr(&at, "expected [start, end]"))?;
        arcs.push((q_from(&a[0], &format!("{at}/0"))?, q_from(&a[1], &format!("{at}/1"))?));
    }
    Ok(RoCirc::from_arcs(&arcs))
}

/// `{"breaks", "vals", "ltail": {"slope"}, "rtail": {"slope"}, "orient"}`;
/// an order reversing map lists its values in decreasing order.
pub fn plmap_json(g: &PLMap) -> Value {
    json!({
        "breaks": qs_json(g.breaks()),
        "vals": qs_json(g.vals()),
        "ltail": {"slope": q_json(g.lslope())},
        "rtail": {"slope": q_json(g.rslope())},
        "orient": if g.is_reversing() { "-" } else { "+" },
    })
}

fn slope_from(v: &Value, tail: &str, path: &str) -> Result<Q> {
    let t = field(v, tail, path)?;
    q_from(field(t, "slope", &format!("{path}/{tail}"))?, &format!("{path}/{tail}/slope"))
}

pub fn plmap_from(v: &Value, path: &str) -> Result<PLMap> {
    let breaks = qs_from(field(v, "breaks", path)?, &format!("{path}/breaks"))?;
    let vals = qs_from(field(v, "vals", path)?, &format!("{path}/vals"))?;
    let ls = slope_from(v, "ltail", path)?;
    let rs = slope_from(v, "rtail", path)?;
    let rev = match v.get("orient").and_then(Value::as_str) {
        None | Some("+") => false,
        Some("-") => true,
        Some(_) => return Err(perr(&format!("{path}/orient"), "expected \"+\" or \"-\"")),
    };
    PLMap::from_parts(breaks, vals, ls, rs, rev).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

/// Nodes of the lift on `[0,1)` plus the degree.
pub fn plcircle_json(g: &PLCircle) -> Value {
    json!({
        "breaks": qs_json(g.breaks()),
        "vals": qs_json(g.vals()),
        "deg": g.deg(),
    })
}

pub fn plcircle_from(v: &Value, path: &str) -> Result<PLCircle> {
    let breaks = qs_from(field(v, "breaks", path)?, &format!("{path}/breaks"))?;
    let vals = qs_from(field(v, "vals", path)?, &format!("{path}/vals"))?;
    let deg = field(v, "deg", path)?.as_i64().ok_or_else(|| perr(&format!("{path}/deg"), "expected ±1"))?;
    PLCircle::from_parts(breaks, vals, deg as i8).map_err(|e| Error::Invalid(format!("{path}: {e}")))
}

pub fn elem_json(e: &Elem) -> Value {
    match e {
        Elem::Line(g) => plmap_json(g),
        Elem::Circle(g) => plcircle_json(g),
    }
}

/// Circle maps are the ones carrying a degree.
pub fn elem_from(v: &Value, path: &str) -> Result<Elem> {
    if !v.is_object() {
        return Err(perr(path, "expected a map object"));
    }
    if v.get("deg").is_some() {
        plcircle_from(v, path).map(Elem::Circle)
    } else {
        plmap_from(v, path).map(Elem::Line)
    }
}

pub fn point_json(p: &CirclePoint) -> Value {
    q_json(p.value())
}

pub fn group_json(g: &GroupSpec) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(g.name));
    m.insert("interval".into(), g.interval.as_ref().map(lin_interval_json).unwrap_or(Value::Null));
    m.insert("break_primes".into(), json!(g.break_primes));
    m.insert("slope_primes".into(), json!(g.slope_primes));
    m.insert("allow_reversing".into(), json!(g.allow_reversing));
    m.insert("rational".into(), json!(g.rational));
    m.insert("generators".into(), Value::Array(g.generators.iter().map(elem_json).collect()));
    Value::Object(m)
}

fn primes_from(v: &Value, path: &str) -> Result<Vec<u64>> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected a list of primes"))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| p.as_u64().filter(|&p| p >= 2).ok_or_else(|| perr(&format!("{path}/{i}"), "expected a prime")))
        .collect()
}

pub fn group_from(v: &Value, path: &str) -> Result<GroupSpec> {
    let name = field(v, "name", path)?.as_str().ok_or_else(|| perr(&format!("{path}/name"), "expected a string"))?;
    let interval = match v.get("interval") {
        None | Some(Value::Null) => None,
        Some(i) => Some(lin_interval_from(i, &format!("{path}/interval"))?),
    };
    let rational = v.get("rational").and_then(Value::as_bool).unwrap_or(false);
    let (bp, sp) = if rational {
        (vec![], vec![])
    } else {
        (
            primes_from(field(v, "break_primes", path)?, &format!("{path}/break_primes"))?,
            primes_from(field(v, "slope_primes", path)?, &format!("{path}/slope_primes"))?,
        )
    };
    let gens = match v.get("generators") {
        None => vec![],
        Some(Value::Array(a)) => a
            .iter()
            .enumerate()
            .map(|(i, e)| elem_from(e, &format!("{path}/generators/{i}")))
            .collect::<Result<_>>()?,
        Some(_) => return Err(perr(&format!("{path}/generators"), "expected an array")),
    };
    Ok(GroupSpec {
        name: name.to_string(),
        interval,
        break_primes: bp,
        slope_primes: sp,
        allow_reversing: v.get("allow_reversing").and_then(Value::as_bool).unwrap_or(false),
        rational,
        generators: gens,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordcore::{q, qi};

    #[test]
    fn elements_round_trip() {
        let g = PLMap::dyadic_through(&[(qi(0), qi(0)), (qi(1), q(1, 4)), (qi(2), qi(2))]).unwrap();
        assert_eq!(plmap_from(&plmap_json(&g), "").unwrap(), g);
        assert_eq!(plmap_from(&plmap_json(&PLMap::negation()), "").unwrap(), PLMap::negation());
        let c = PLCircle::bump_arc(&q(1, 4), &q(3, 4), true);
        assert_eq!(plcircle_from(&plcircle_json(&c), "").unwrap(), c);
        let r = PLCircle::reflection();
        assert_eq!(elem_from(&elem_json(&Elem::Circle(r.clone())), "").unwrap(), Elem::Circle(r));
    }

    #[test]
    fn sets_round_trip() {
        let u = RoLin::interval(ExtPoint::NegInf, ExtPoint::Fin(qi(0))).sum(&RoLin::fin(q(1, 3), qi(2)));
        assert_eq!(rolin_from(&rolin_json(&u), "").unwrap(), u);
        let c = RoCirc::from_arcs(&[(q(7, 8), q(1, 8)), (q(1, 2), q(5, 8))]);
        assert_eq!(rocirc_from(&rocirc_json(&c), "").unwrap(), c);
    }

    #[test]
    fn errors_carry_location() {
        let v = json!({"breaks": ["0"], "vals": ["1"], "ltail": {"slope": "1"}});
        let e = elem_from(&v, "/generators/0").unwrap_err();
        assert!(e.to_string().contains("/generators/0/rtail"), "{e}");
    }

    use crate::roalg::RoSet;
}
