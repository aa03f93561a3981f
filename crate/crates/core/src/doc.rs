//! Structured-text documents for carriers, sets, orders, spaces, maps,
//! pairs, rings, lattices and set families. All top-level documents carry a
//! `format: 1` field. Parsing reports the offending location in the error
//! message; every value the engine emits as a witness round-trips through
//! these encodings.
//!
//! Set documents are block-name keyed: each declared block maps to either
//! `{"finite": [..]}` or `{"cofinite_except": [..]}`, and the reserved key
//! `"points"` lists named members. Finite carriers use `{"members": [..]}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::compactify::CompactificationPair;
use crate::dlat::FinDLat;
use crate::duality::{BlockMap, BlockTarget, MapGraph, SpaceMap};
use crate::rings::UpsetRing;
use crate::setalg::{BlockSpec, Carrier, CarrierKind, Point, RSet, Trace};
use crate::space::SpacePresentation;
use crate::{Error, Result};

pub const FORMAT: u64 = 1;

fn bad(path: &str, what: &str) -> Error {
    Error::InvalidInput(format!("{path}: {what}"))
}

fn as_obj<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(path, "expected an object"))
}

fn as_str<'v>(v: &'v Value, path: &str) -> Result<&'v str> {
    v.as_str().ok_or_else(|| bad(path, "expected a string"))
}

fn as_arr<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| bad(path, "expected a nonnegative integer"))
}

fn field<'v>(m: &'v Map<String, Value>, key: &str, path: &str) -> Result<&'v Value> {
    m.get(key).ok_or_else(|| bad(path, &format!("missing field `{key}`")))
}

/// Every top-level document must declare `format: 1`.
pub fn check_format(v: &Value) -> Result<()> {
    let m = as_obj(v, "document")?;
    match m.get("format") {
        Some(f) if f.as_u64() == Some(FORMAT) => Ok(()),
        Some(_) => Err(bad("format", "unsupported format version")),
        None => Err(bad("document", "missing field `format`")),
    }
}

// ----- carriers -----

pub fn parse_carrier(v: &Value, path: &str) -> Result<Arc<Carrier>> {
    let m = as_obj(v, path)?;
    match as_str(field(m, "kind", path)?, &format!("{path}.kind"))? {
        "finite" => {
            let size = as_u64(field(m, "size", path)?, &format!("{path}.size"))?;
            Ok(Carrier::finite(size as u32))
        }
        "tail" => {
            let mut blocks = Vec::new();
            for (i, b) in
                as_arr(field(m, "blocks", path)?, &format!("{path}.blocks"))?.iter().enumerate()
            {
                let bp = format!("{path}.blocks[{i}]");
                let bm = as_obj(b, &bp)?;
                let name = as_str(field(bm, "name", &bp)?, &format!("{bp}.name"))?.to_string();
                if name == "points" {
                    return Err(bad(&bp, "`points` is a reserved name"));
                }
                let limit = match bm.get("limit") {
                    Some(Value::Null) | None => None,
                    Some(l) => Some(as_str(l, &format!("{bp}.limit"))?.to_string()),
                };
                blocks.push(BlockSpec { name, limit });
            }
            let isolated = match m.get("isolated") {
                None => Vec::new(),
                Some(a) => as_arr(a, &format!("{path}.isolated"))?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        as_str(s, &format!("{path}.isolated[{i}]")).map(String::from)
                    })
                    .collect::<Result<_>>()?,
            };
            Carrier::tail(blocks, isolated).map_err(|e| bad(path, &e.to_string()))
        }
        other => Err(bad(&format!("{path}.kind"), &format!("unknown kind `{other}`"))),
    }
}

pub fn carrier_to_value(c: &Carrier) -> Value {
    match c.kind() {
        CarrierKind::Finite { size } => json!({"kind": "finite", "size": size}),
        CarrierKind::Tail { blocks, isolated } => json!({
            "kind": "tail",
            "blocks": blocks
                .iter()
                .map(|b| match &b.limit {
                    Some(l) => json!({"name": b.name, "limit": l}),
                    None => json!({"name": b.name}),
                })
                .collect::<Vec<_>>(),
            "isolated": isolated,
        }),
    }
}

// ----- sets -----

pub fn parse_rset(carrier: &Arc<Carrier>, v: &Value, path: &str) -> Result<RSet> {
    let m = as_obj(v, path)?;
    if carrier.is_finite() {
        let mut pts = Vec::new();
        for (i, p) in
            as_arr(field(m, "members", path)?, &format!("{path}.members"))?.iter().enumerate()
        {
            pts.push(Point::Idx(as_u64(p, &format!("{path}.members[{i}]"))? as u32));
        }
        return RSet::from_points(carrier, pts).map_err(|e| bad(path, &e.to_string()));
    }
    let mut set = RSet::empty(carrier);
    for (key, val) in m {
        if key == "points" {
            let arr = as_arr(val, &format!("{path}.points"))?;
            let mut names = Vec::new();
            for (i, s) in arr.iter().enumerate() {
                names.push(as_str(s, &format!("{path}.points[{i}]"))?);
            }
            if !names.is_empty() {
                let with = RSet::build(carrier).named(names);
                set = set.union(&with.finish());
            }
            continue;
        }
        if carrier.block(key).is_none() {
            return Err(bad(path, &format!("unknown block `{key}`")));
        }
        let tp = format!("{path}.{key}");
        let tm = as_obj(val, &tp)?;
        let idxs = |k: &str| -> Result<Vec<u64>> {
            as_arr(&tm[k], &format!("{tp}.{k}"))?
                .iter()
                .enumerate()
                .map(|(i, n)| as_u64(n, &format!("{tp}.{k}[{i}]")))
                .collect()
        };
        let part = if tm.contains_key("finite") {
            RSet::build(carrier).block_fin(key, idxs("finite")?).finish()
        } else if tm.contains_key("cofinite_except") {
            RSet::build(carrier).block_cof(key, idxs("cofinite_except")?).finish()
        } else {
            return Err(bad(&tp, "expected `finite` or `cofinite_except`"));
        };
        set = set.union(&part);
    }
    Ok(set)
}

pub fn rset_to_value(s: &RSet) -> Value {
    if let Some(members) = s.finite_members() {
        return json!({"members": members.iter().collect::<Vec<_>>()});
    }
    let mut m = Map::new();
    for b in s.carrier().blocks() {
        match s.trace(&b.name).unwrap() {
            Trace::Fin(idx) if idx.is_empty() => {}
            Trace::Fin(idx) => {
                m.insert(b.name.clone(), json!({"finite": idx.iter().collect::<Vec<_>>()}));
            }
            Trace::Cof(idx) => {
                m.insert(
                    b.name.clone(),
                    json!({"cofinite_except": idx.iter().collect::<Vec<_>>()}),
                );
            }
        }
    }
    let named = s.named_members().unwrap();
    if !named.is_empty() {
        m.insert("points".into(), json!(named.iter().collect::<Vec<_>>()));
    }
    Value::Object(m)
}

// ----- points -----

pub fn parse_point(carrier: &Arc<Carrier>, v: &Value, path: &str) -> Result<Point> {
    let p = match v {
        Value::Number(_) => Point::Idx(as_u64(v, path)? as u32),
        Value::String(s) => Point::Named(s.clone()),
        Value::Object(m) => {
            let b = as_str(field(m, "block", path)?, &format!("{path}.block"))?;
            let n = as_u64(field(m, "n", path)?, &format!("{path}.n"))?;
            Point::Elem(b.to_string(), n)
        }
        _ => return Err(bad(path, "expected a point (integer, string, or block element)")),
    };
    if !carrier.contains(&p) {
        return Err(bad(path, &format!("point {p} is not in the carrier")));
    }
    Ok(p)
}

pub fn point_to_value(p: &Point) -> Value {
    match p {
        Point::Idx(i) => json!(i),
        Point::Named(n) => json!(n),
        Point::Elem(b, n) => json!({"block": b, "n": n}),
    }
}

// ----- orders and spaces -----

pub fn parse_space(v: &Value, path: &str) -> Result<SpacePresentation> {
    let m = as_obj(v, path)?;
    let carrier = parse_carrier(field(m, "carrier", path)?, &format!("{path}.carrier"))?;
    let mut rects = Vec::new();
    if let Some(order) = m.get("order") {
        let om = as_obj(order, &format!("{path}.order"))?;
        if let Some(rs) = om.get("rectangles") {
            for (i, r) in as_arr(rs, &format!("{path}.order.rectangles"))?.iter().enumerate() {
                let rp = format!("{path}.order.rectangles[{i}]");
                let rm = as_obj(r, &rp)?;
                let a = parse_rset(&carrier, field(rm, "A", &rp)?, &format!("{rp}.A"))?;
                let b = parse_rset(&carrier, field(rm, "B", &rp)?, &format!("{rp}.B"))?;
                rects.push((a, b));
            }
        }
    }
    SpacePresentation::new(&carrier, rects)
}

pub fn space_to_value(x: &SpacePresentation) -> Value {
    json!({
        "carrier": carrier_to_value(x.carrier()),
        "order": {
            "rectangles": x
                .order()
                .rectangles()
                .iter()
                .map(|r| json!({"A": rset_to_value(&r.lower), "B": rset_to_value(&r.upper)}))
                .collect::<Vec<_>>(),
        },
    })
}

// ----- maps -----

pub fn parse_map(
    source: &SpacePresentation,
    target: &SpacePresentation,
    v: &Value,
    path: &str,
) -> Result<SpaceMap> {
    let m = as_obj(v, path)?;
    if let Some(g) = m.get("graph") {
        let mut graph = BTreeMap::new();
        for (i, edge) in as_arr(g, &format!("{path}.graph"))?.iter().enumerate() {
            let ep = format!("{path}.graph[{i}]");
            let pair = as_arr(edge, &ep)?;
            if pair.len() != 2 {
                return Err(bad(&ep, "expected [source-point, target-point]"));
            }
            let from = parse_point(source.carrier(), &pair[0], &format!("{ep}[0]"))?;
            let to = parse_point(target.carrier(), &pair[1], &format!("{ep}[1]"))?;
            graph.insert(from, to);
        }
        return SpaceMap::pointwise(source.clone(), target.clone(), graph);
    }
    let rule = field(m, "rule", path)?;
    let rp = format!("{path}.rule");
    let rm = as_obj(rule, &rp)?;
    let mut blocks = BTreeMap::new();
    if let Some(bs) = rm.get("blocks") {
        for (name, spec) in as_obj(bs, &format!("{rp}.blocks"))? {
            let bp = format!("{rp}.blocks.{name}");
            let sm = as_obj(spec, &bp)?;
            let target_rule = if let Some(b) = sm.get("block") {
                BlockTarget::Elementwise {
                    block: as_str(b, &format!("{bp}.block"))?.to_string(),
                }
            } else if let Some(p) = sm.get("point") {
                BlockTarget::Constant(parse_point(
                    target.carrier(),
                    p,
                    &format!("{bp}.point"),
                )?)
            } else {
                return Err(bad(&bp, "expected `block` or `point`"));
            };
            let mut exceptions = BTreeMap::new();
            if let Some(ex) = sm.get("exceptions") {
                for (k, pv) in as_obj(ex, &format!("{bp}.exceptions"))? {
                    let n: u64 = k
                        .parse()
                        .map_err(|_| bad(&format!("{bp}.exceptions"), "keys must be indices"))?;
                    exceptions.insert(
                        n,
                        parse_point(target.carrier(), pv, &format!("{bp}.exceptions.{k}"))?,
                    );
                }
            }
            blocks.insert(name.clone(), BlockMap { target: target_rule, exceptions });
        }
    }
    let mut named = BTreeMap::new();
    if let Some(ps) = rm.get("points") {
        for (k, pv) in as_obj(ps, &format!("{rp}.points"))? {
            named.insert(
                k.clone(),
                parse_point(target.carrier(), pv, &format!("{rp}.points.{k}"))?,
            );
        }
    }
    SpaceMap::block_rule(source.clone(), target.clone(), blocks, named)
}

pub fn map_to_value(f: &SpaceMap) -> Value {
    match f.graph() {
        MapGraph::Pointwise(g) => json!({
            "graph": g
                .iter()
                .map(|(a, b)| json!([point_to_value(a), point_to_value(b)]))
                .collect::<Vec<_>>(),
        }),
        MapGraph::BlockRule { blocks, named } => {
            let mut bm = Map::new();
            for (name, rule) in blocks {
                let mut sm = Map::new();
                match &rule.target {
                    BlockTarget::Elementwise { block } => {
                        sm.insert("block".into(), json!(block));
                    }
                    BlockTarget::Constant(p) => {
                        sm.insert("point".into(), point_to_value(p));
                    }
                }
                if !rule.exceptions.is_empty() {
                    let ex: Map<String, Value> = rule
                        .exceptions
                        .iter()
                        .map(|(n, p)| (n.to_string(), point_to_value(p)))
                        .collect();
                    sm.insert("exceptions".into(), Value::Object(ex));
                }
                bm.insert(name.clone(), Value::Object(sm));
            }
            let pm: Map<String, Value> =
                named.iter().map(|(n, p)| (n.clone(), point_to_value(p))).collect();
            json!({"rule": {"blocks": Value::Object(bm), "points": Value::Object(pm)}})
        }
    }
}

// ----- pairs -----

pub fn parse_pair(v: &Value) -> Result<CompactificationPair> {
    check_format(v)?;
    let m = as_obj(v, "pair")?;
    let x = parse_space(field(m, "X", "pair")?, "X")?;
    let y = parse_space(field(m, "Y", "pair")?, "Y")?;
    let e = parse_map(&x, &y, field(m, "e", "pair")?, "e")?;
    CompactificationPair::new(e)
}

pub fn pair_to_value(p: &CompactificationPair) -> Value {
    json!({
        "format": FORMAT,
        "X": space_to_value(p.x()),
        "Y": space_to_value(p.y()),
        "e": map_to_value(p.e()),
    })
}

// ----- rings -----

pub fn parse_ring(v: &Value) -> Result<UpsetRing> {
    check_format(v)?;
    let m = as_obj(v, "ring")?;
    if let Some(ex) = m.get("explicit") {
        let em = as_obj(ex, "explicit")?;
        let space = parse_space(field(em, "space", "explicit")?, "explicit.space")?;
        let mut members = Vec::new();
        for (i, s) in as_arr(field(em, "members", "explicit")?, "explicit.members")?
            .iter()
            .enumerate()
        {
            members.push(parse_rset(
                space.carrier(),
                s,
                &format!("explicit.members[{i}]"),
            )?);
        }
        return UpsetRing::explicit(space, members);
    }
    if let Some(pv) = m.get("pullback") {
        let pair = parse_pair(pv)?;
        return Ok(UpsetRing::pullback(pair));
    }
    Err(bad("ring", "expected `explicit` or `pullback`"))
}

// ----- lattices -----

pub fn parse_lattice(v: &Value) -> Result<FinDLat> {
    check_format(v)?;
    let m = as_obj(v, "lattice")?;
    let mut ids = Vec::new();
    for (i, s) in as_arr(field(m, "elements", "lattice")?, "lattice.elements")?
        .iter()
        .enumerate()
    {
        ids.push(as_str(s, &format!("lattice.elements[{i}]"))?.to_string());
    }
    let index =
        |id: &str| ids.iter().position(|x| x == id).ok_or_else(|| bad("lattice.leq", id));
    let mut pairs = std::collections::BTreeSet::new();
    for i in 0..ids.len() {
        pairs.insert((i, i));
    }
    for (i, pv) in as_arr(field(m, "leq", "lattice")?, "lattice.leq")?.iter().enumerate() {
        let pp = format!("lattice.leq[{i}]");
        let pa = as_arr(pv, &pp)?;
        if pa.len() != 2 {
            return Err(bad(&pp, "expected [a, b]"));
        }
        let a = index(as_str(&pa[0], &format!("{pp}[0]"))?)?;
        let b = index(as_str(&pa[1], &format!("{pp}[1]"))?)?;
        pairs.insert((a, b));
    }
    // Close transitively so documents may list only generators.
    loop {
        let mut add = Vec::new();
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                if b == c && !pairs.contains(&(a, d)) {
                    add.push((a, d));
                }
            }
        }
        if add.is_empty() {
            break;
        }
        pairs.extend(add);
    }
    crate::dlat::validate_dlat(ids, &pairs).map_err(|e| bad("lattice", &e.to_string()))
}

// ----- families -----

pub fn parse_family(v: &Value) -> Result<(SpacePresentation, Vec<RSet>)> {
    check_format(v)?;
    let m = as_obj(v, "family")?;
    let space = parse_space(field(m, "space", "family")?, "space")?;
    let mut family = Vec::new();
    for (i, s) in as_arr(field(m, "family", "family")?, "family")?.iter().enumerate() {
        family.push(parse_rset(space.carrier(), s, &format!("family[{i}]"))?);
    }
    Ok((space, family))
}

/// A standalone map document with its own spaces.
pub fn parse_map_file(v: &Value) -> Result<SpaceMap> {
    check_format(v)?;
    let m = as_obj(v, "map")?;
    let source = parse_space(field(m, "source", "map")?, "source")?;
    let target = parse_space(field(m, "target", "map")?, "target")?;
    parse_map(&source, &target, field(m, "map", "map")?, "map")
}

pub fn space_doc(x: &SpacePresentation) -> Value {
    let mut v = space_to_value(x);
    v.as_object_mut().unwrap().insert("format".into(), json!(FORMAT));
    v
}
