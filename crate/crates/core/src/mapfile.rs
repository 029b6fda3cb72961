//! JSON map files.
//!
//! A file holds a PL map, an affine quotient, or both, plus named curves.
//! Keys are sorted on output and every number is an integer; rationals are
//! written as reduced `[num, den]` pairs.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::cover::{CoverError, PLThurstonMap};
use crate::curves::{curve_from_coordinates, Curve, MappingClassWord};
use crate::parabolic::{AffineQuotient, Pt, M2};
use crate::surface::{build_triangulation, MarkedSphere, Triangulation};

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapFileError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{pointer}: {message}")]
    Validation { pointer: String, message: String },
}

fn invalid<T>(pointer: impl Into<String>, message: impl Into<String>) -> Result<T, MapFileError> {
    Err(MapFileError::Validation {
        pointer: pointer.into(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Default)]
pub struct MapDocument {
    pub map: Option<PLThurstonMap>,
    pub affine: Option<AffineQuotient>,
    pub curves: BTreeMap<String, Curve>,
}

struct Reader<'a> {
    root: &'a Map<String, Value>,
}

fn get<'v>(obj: &'v Map<String, Value>, ptr: &str, key: &str) -> Result<&'v Value, MapFileError> {
    obj.get(key)
        .map_or_else(|| invalid(format!("{ptr}/{key}"), "missing"), Ok)
}

fn uint(v: &Value, ptr: &str) -> Result<usize, MapFileError> {
    v.as_u64()
        .map(|x| x as usize)
        .map_or_else(|| invalid(ptr, "expected a nonnegative integer"), Ok)
}

fn int(v: &Value, ptr: &str) -> Result<i64, MapFileError> {
    v.as_i64().map_or_else(|| invalid(ptr, "expected an integer"), Ok)
}

fn array<'v>(v: &'v Value, ptr: &str) -> Result<&'v Vec<Value>, MapFileError> {
    v.as_array().map_or_else(|| invalid(ptr, "expected an array"), Ok)
}

fn uints(v: &Value, ptr: &str, bound: Option<usize>) -> Result<Vec<usize>, MapFileError> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let p = format!("{ptr}/{i}");
            let n = uint(x, &p)?;
            match bound {
                Some(b) if n >= b => invalid(p, format!("{n} is out of range (< {b})")),
                _ => Ok(n),
            }
        })
        .collect()
}

fn triples(v: &Value, ptr: &str, nv: usize) -> Result<Vec<[usize; 3]>, MapFileError> {
    array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let p = format!("{ptr}/{i}");
            let xs = uints(t, &p, Some(nv))?;
            match xs[..] {
                [a, b, c] => Ok([a, b, c]),
                _ => invalid(p, "expected three vertices"),
            }
        })
        .collect()
}

fn rational(v: &Value, ptr: &str) -> Result<crate::obstruction::Rat, MapFileError> {
    let xs = array(v, ptr)?;
    if xs.len() != 2 {
        return invalid(ptr, "expected [num, den]");
    }
    let (n, d) = (int(&xs[0], &format!("{ptr}/0"))?, int(&xs[1], &format!("{ptr}/1"))?);
    if d <= 0 {
        return invalid(format!("{ptr}/1"), "denominator must be positive");
    }
    if n.gcd(&d) != 1 {
        return invalid(ptr, format!("{n}/{d} is not reduced"));
    }
    Ok(crate::obstruction::Rat::new(n, d))
}

fn point(v: &Value, ptr: &str) -> Result<Pt, MapFileError> {
    let xs = array(v, ptr)?;
    if xs.len() != 2 {
        return invalid(ptr, "expected two coordinates");
    }
    Ok((rational(&xs[0], &format!("{ptr}/0"))?, rational(&xs[1], &format!("{ptr}/1"))?))
}

fn triangulation(ts: Vec<[usize; 3]>, nv: usize, ptr: &str) -> Result<Triangulation, MapFileError> {
    let t = build_triangulation(&ts).or_else(|e| invalid(ptr, e.to_string()))?;
    if t.vertex_count() != nv {
        return invalid(ptr, format!("uses {} of {nv} vertices", t.vertex_count()));
    }
    Ok(t)
}

impl Reader<'_> {
    fn map(&self) -> Result<PLThurstonMap, MapFileError> {
        let root = self.root;
        let nv = uint(get(root, "", "vertices")?, "/vertices")?;
        let t0 = triangulation(triples(get(root, "", "triangles")?, "/triangles", nv)?, nv, "/triangles")?;
        let marked = uints(get(root, "", "marked")?, "/marked", Some(nv))?;
        let sphere = MarkedSphere::new(t0, marked).or_else(|e| invalid("/marked", e.to_string()))?;
        let dom = get(root, "", "domain")?
            .as_object()
            .map_or_else(|| invalid("/domain", "expected an object"), Ok)?;
        let n1 = uint(get(dom, "/domain", "vertices")?, "/domain/vertices")?;
        let t1 = triangulation(
            triples(get(dom, "/domain", "triangles")?, "/domain/triangles", n1)?,
            n1,
            "/domain/triangles",
        )?;
        let parent = uints(
            get(dom, "/domain", "parent")?,
            "/domain/parent",
            Some(sphere.tri.triangle_count()),
        )?;
        let embed = uints(get(dom, "/domain", "embed")?, "/domain/embed", Some(n1))?;
        let vertex_image = uints(get(root, "", "vertex_image")?, "/vertex_image", Some(nv))?;
        let nt = t1.triangle_count();
        let f = PLThurstonMap::new(sphere, t1, vertex_image, parent, embed).or_else(|e| {
            let ptr = match &e {
                CoverError::OrientationReversed(t) => format!("/domain/triangles/{t}"),
                CoverError::BadSubdivision(_) => "/domain/parent".into(),
                CoverError::MarkedSetNotInvariant(_) | CoverError::PostcriticalNotMarked(_) => "/marked".into(),
                _ => "/vertex_image".into(),
            };
            invalid(ptr, e.to_string())
        })?;
        if let Some(ti) = root.get("triangle_image") {
            let ti = uints(ti, "/triangle_image", None)?;
            if ti.len() != nt {
                return invalid("/triangle_image", "wrong length");
            }
            if let Some(t) = (0..nt).find(|&t| ti[t] != f.triangle_image()[t]) {
                return invalid(format!("/triangle_image/{t}"), "disagrees with vertex_image");
            }
        }
        let post = self.word(&f, "post")?;
        let pre = self.word(&f, "pre")?;
        Ok(if post.is_empty() && pre.is_empty() {
            f
        } else {
            f.with_words(post, pre)
        })
    }

    fn word(&self, f: &PLThurstonMap, key: &str) -> Result<MappingClassWord, MapFileError> {
        let Some(v) = self.root.get(key) else {
            return Ok(MappingClassWord::identity());
        };
        let ptr = format!("/{key}");
        let mut word = Vec::new();
        for (i, s) in array(v, &ptr)?.iter().enumerate() {
            let p = format!("{ptr}/{i}");
            let obj = s.as_object().map_or_else(|| invalid(&p, "expected an object"), Ok)?;
            let c = curve(f, get(obj, &p, "curve")?, &format!("{p}/curve"))?;
            if !c.is_essential() {
                return invalid(format!("{p}/curve"), "twist curve must be essential");
            }
            word.push((c, int(get(obj, &p, "power")?, &format!("{p}/power"))?));
        }
        Ok(MappingClassWord { word })
    }

    fn affine(&self, v: &Value) -> Result<AffineQuotient, MapFileError> {
        let obj = v.as_object().map_or_else(|| invalid("/affine", "expected an object"), Ok)?;
        let rows = array(get(obj, "/affine", "A")?, "/affine/A")?;
        if rows.len() != 2 {
            return invalid("/affine/A", "expected a 2x2 matrix");
        }
        let mut a: M2 = [[0; 2]; 2];
        for (i, row) in rows.iter().enumerate() {
            let p = format!("/affine/A/{i}");
            let xs = array(row, &p)?;
            if xs.len() != 2 {
                return invalid(p, "expected two entries");
            }
            for j in 0..2 {
                a[i][j] = int(&xs[j], &format!("{p}/{j}"))?;
            }
        }
        let b = point(get(obj, "/affine", "b")?, "/affine/b")?;
        let lifts: Vec<Pt> = array(get(obj, "/affine", "lifts")?, "/affine/lifts")?
            .iter()
            .enumerate()
            .map(|(i, x)| point(x, &format!("/affine/lifts/{i}")))
            .collect::<Result<_, _>>()?;
        let dynamics = uints(get(obj, "/affine", "dynamics")?, "/affine/dynamics", Some(lifts.len()))?;
        let q = int(get(obj, "/affine", "q")?, "/affine/q")?;
        let m = AffineQuotient::new(a, b, lifts, dynamics).or_else(|e| invalid("/affine", e.to_string()))?;
        if m.q != q {
            return invalid("/affine/q", format!("expected {}", m.q));
        }
        Ok(m)
    }
}

fn curve(f: &PLThurstonMap, v: &Value, ptr: &str) -> Result<Curve, MapFileError> {
    let x: Vec<u32> = uints(v, ptr, None)?.into_iter().map(|n| n as u32).collect();
    if x.len() != f.spine().edge_count() {
        return invalid(ptr, format!("expected {} coordinates", f.spine().edge_count()));
    }
    curve_from_coordinates(f.spine(), &x).or_else(|e| invalid(ptr, e.to_string()))
}

pub fn parse_map_file(bytes: &[u8]) -> Result<MapDocument, MapFileError> {
    let v: Value = serde_json::from_slice(bytes).map_err(|e| MapFileError::Parse(e.to_string()))?;
    let root = v.as_object().map_or_else(|| invalid("", "expected an object"), Ok)?;
    let version = int(get(root, "", "format_version")?, "/format_version")?;
    if version != FORMAT_VERSION {
        return invalid("/format_version", format!("unsupported version {version}"));
    }
    let r = Reader { root };
    let mut doc = MapDocument::default();
    if root.contains_key("triangles") {
        doc.map = Some(r.map()?);
    }
    if let Some(a) = root.get("affine") {
        doc.affine = Some(r.affine(a)?);
    }
    if doc.map.is_none() && doc.affine.is_none() {
        return invalid("", "neither a map nor an affine quotient");
    }
    if let Some(cs) = root.get("curves") {
        let Some(f) = &doc.map else {
            return invalid("/curves", "curves need a map");
        };
        let obj = cs.as_object().map_or_else(|| invalid("/curves", "expected an object"), Ok)?;
        for (name, x) in obj {
            doc.curves.insert(name.clone(), curve(f, x, &format!("/curves/{name}"))?);
        }
    }
    Ok(doc)
}

fn rat_json(x: crate::obstruction::Rat) -> Value {
    json!([x.numer(), x.denom()])
}

fn point_json(p: Pt) -> Value {
    json!([rat_json(p.0), rat_json(p.1)])
}

fn word_json(w: &MappingClassWord) -> Value {
    Value::Array(
        w.word
            .iter()
            .map(|(c, k)| json!({"curve": c.coordinates(), "power": k}))
            .collect(),
    )
}

pub fn affine_json(m: &AffineQuotient) -> Value {
    json!({
        "A": m.a,
        "b": point_json(m.b),
        "lifts": m.lifts.iter().map(|&p| point_json(p)).collect::<Vec<_>>(),
        "dynamics": m.dynamics,
        "q": m.q,
    })
}

pub fn to_json(doc: &MapDocument) -> Value {
    let mut root = Map::new();
    root.insert("format_version".into(), json!(FORMAT_VERSION));
    if let Some(f) = &doc.map {
        let t0 = f.codomain();
        root.insert("vertices".into(), json!(t0.vertex_count()));
        root.insert("triangles".into(), json!(t0.triangles()));
        root.insert("marked".into(), json!(f.marked()));
        root.insert(
            "domain".into(),
            json!({
                "vertices": f.domain().vertex_count(),
                "triangles": f.domain().triangles(),
                "parent": f.parent(),
                "embed": f.embed(),
            }),
        );
        root.insert("vertex_image".into(), json!(f.vertex_image()));
        root.insert("triangle_image".into(), json!(f.triangle_image()));
        if !f.post().is_empty() {
            root.insert("post".into(), word_json(f.post()));
        }
        if !f.pre().is_empty() {
            root.insert("pre".into(), word_json(f.pre()));
        }
    }
    if let Some(m) = &doc.affine {
        root.insert("affine".into(), affine_json(m));
    }
    if !doc.curves.is_empty() {
        let cs: Map<String, Value> = doc
            .curves
            .iter()
            .map(|(k, c)| (k.clone(), json!(c.coordinates())))
            .collect();
        root.insert("curves".into(), Value::Object(cs));
    }
    Value::Object(root)
}

/// Canonical text: sorted keys, two-space indentation, arrays without
/// nested objects on one line, trailing newline.
pub fn canonical_text(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn flat(v: &Value) -> bool {
    match v {
        Value::Object(_) => false,
        Value::Array(xs) => xs.iter().all(flat),
        _ => true,
    }
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth + 1);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push('}');
        }
        Value::Array(xs) if !flat(v) => {
            out.push_str("[\n");
            for (i, x) in xs.iter().enumerate() {
                out.push_str(&pad);
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < xs.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(depth));
            out.push(']');
        }
        Value::Array(xs) => {
            out.push('[');
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(x, depth, out);
            }
            out.push(']');
        }
        _ => out.push_str(&v.to_string()),
    }
}

pub fn serialize(doc: &MapDocument) -> String {
    canonical_text(&to_json(doc))
}
