//! The JSON file format shared by frameworks, surfaces, suspensions and
//! decompositions, analysis reports, CSV tables and a small OFF reader.

mod report;
mod table;

pub use report::{analyze, instance_hash, AnalysisVerdicts, Report};
pub use table::{fmt_f64, parse_off, CsvTable};

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geometry::{Point3, PolyhedralSurface};
use crate::hessian::Decomposition;
use crate::rigidity::{EdgeKind, Framework};
use crate::suspension::{build_suspension, Suspension};
use crate::tol::Tolerance;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub i: usize,
    pub j: usize,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poles {
    #[serde(rename = "N")]
    pub north: usize,
    #[serde(rename = "S")]
    pub south: usize,
}

/// Version 1 document. Every section past `edges` is optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkFile {
    pub version: u64,
    pub vertices: Vec<[f64; 3]>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<[usize; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Poles>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equator: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tetrahedra: Option<Vec<[usize; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Value>,
}

fn schema(pointer: String, message: impl Into<String>) -> Error {
    Error::Schema { pointer, message: message.into() }
}

fn array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(ptr.to_string(), "expected an array"))
}

fn index(v: &Value, ptr: String, n: usize) -> Result<usize> {
    let k = v.as_u64().ok_or_else(|| schema(ptr.clone(), "expected a non-negative integer"))?;
    if k as usize >= n {
        return Err(schema(ptr, format!("index {k} out of range (0..{n})")));
    }
    Ok(k as usize)
}

fn index_tuple(v: &Value, ptr: &str, len: usize, n: usize) -> Result<Vec<usize>> {
    let a = array(v, ptr)?;
    if a.len() != len {
        return Err(schema(ptr.to_string(), format!("expected {len} indices")));
    }
    let out: Vec<usize> =
        a.iter().enumerate().map(|(q, x)| index(x, format!("{ptr}/{q}"), n)).collect::<Result<_>>()?;
    for a in 0..len {
        for b in a + 1..len {
            if out[a] == out[b] {
                return Err(schema(format!("{ptr}/{b}"), "repeated index"));
            }
        }
    }
    Ok(out)
}

/// Structural checks with a JSON pointer to the first offending field.
fn validate(doc: &Value) -> Result<()> {
    let obj = doc.as_object().ok_or_else(|| schema(String::new(), "expected an object"))?;
    const KNOWN: [&str; 8] = ["version", "vertices", "edges", "faces", "poles", "equator", "tetrahedra", "metadata"];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(schema(format!("/{k}"), "unknown field"));
    }
    match obj.get("version").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(schema("/version".into(), format!("unsupported version {v}"))),
        None => return Err(schema("/version".into(), "missing or not an integer")),
    }
    let verts = array(obj.get("vertices").unwrap_or(&Value::Null), "/vertices")?;
    for (k, p) in verts.iter().enumerate() {
        let ptr = format!("/vertices/{k}");
        let c = array(p, &ptr)?;
        if c.len() != 3 {
            return Err(schema(ptr, "expected 3 coordinates"));
        }
        for (q, x) in c.iter().enumerate() {
            if !x.as_f64().is_some_and(f64::is_finite) {
                return Err(schema(format!("{ptr}/{q}"), "expected a finite number"));
            }
        }
    }
    let n = verts.len();
    let edges = array(obj.get("edges").unwrap_or(&Value::Null), "/edges")?;
    let mut seen = std::collections::BTreeSet::new();
    for (k, e) in edges.iter().enumerate() {
        let ptr = format!("/edges/{k}");
        let eo = e.as_object().ok_or_else(|| schema(ptr.clone(), "expected an object"))?;
        for key in eo.keys() {
            if !["i", "j", "kind"].contains(&key.as_str()) {
                return Err(schema(format!("{ptr}/{key}"), "unknown field"));
            }
        }
        let i = index(eo.get("i").unwrap_or(&Value::Null), format!("{ptr}/i"), n)?;
        let j = index(eo.get("j").unwrap_or(&Value::Null), format!("{ptr}/j"), n)?;
        if i == j {
            return Err(schema(format!("{ptr}/j"), "loop edge"));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(schema(ptr, "duplicate edge"));
        }
        match eo.get("kind").and_then(Value::as_str) {
            Some("bar" | "cable" | "strut") => {}
            _ => return Err(schema(format!("{ptr}/kind"), "expected \"bar\", \"cable\" or \"strut\"")),
        }
    }
    if let Some(f) = obj.get("faces") {
        for (k, t) in array(f, "/faces")?.iter().enumerate() {
            index_tuple(t, &format!("/faces/{k}"), 3, n)?;
        }
    }
    if let Some(t) = obj.get("tetrahedra") {
        for (k, q) in array(t, "/tetrahedra")?.iter().enumerate() {
            index_tuple(q, &format!("/tetrahedra/{k}"), 4, n)?;
        }
    }
    let poles = match obj.get("poles") {
        Some(p) => {
            let po = p.as_object().ok_or_else(|| schema("/poles".into(), "expected an object"))?;
            let north = index(po.get("N").unwrap_or(&Value::Null), "/poles/N".into(), n)?;
            let south = index(po.get("S").unwrap_or(&Value::Null), "/poles/S".into(), n)?;
            if north == south {
                return Err(schema("/poles/S".into(), "poles coincide"));
            }
            Some((north, south))
        }
        None => None,
    };
    if let Some(eq) = obj.get("equator") {
        let eq = array(eq, "/equator")?;
        if eq.len() < 3 {
            return Err(schema("/equator".into(), "need at least 3 vertices"));
        }
        let mut used = std::collections::BTreeSet::new();
        for (k, v) in eq.iter().enumerate() {
            let ptr = format!("/equator/{k}");
            let v = index(v, ptr.clone(), n)?;
            if !used.insert(v) || poles.is_some_and(|(a, b)| v == a || v == b) {
                return Err(schema(ptr, "repeated vertex or pole on the equator"));
            }
        }
        if poles.is_none() {
            return Err(schema("/poles".into(), "an equator needs poles"));
        }
    }
    Ok(())
}

impl FrameworkFile {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(|e| schema(String::new(), format!("invalid JSON: {e}")))?;
        Self::from_value(doc)
    }

    pub fn from_value(doc: Value) -> Result<Self> {
        validate(&doc)?;
        serde_json::from_value(doc).map_err(|e| schema(String::new(), e.to_string()))
    }

    /// Pretty JSON; floats are written in shortest round-trip form.
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string() + "\n")?;
        Ok(())
    }

    pub fn points(&self) -> Vec<Point3> {
        self.vertices.iter().map(|p| Point3::new(p[0], p[1], p[2])).collect()
    }

    /// Edges as listed; when there are none, the surface edges as bars.
    pub fn framework(&self, tol: &Tolerance) -> Result<Framework> {
        if self.edges.is_empty() && self.faces.is_some() {
            return Ok(Framework::from_surface(&self.surface(tol)?));
        }
        Framework::with_tolerance(self.points(), self.edges.iter().map(|e| (e.i, e.j, e.kind)).collect(), tol)
    }

    pub fn surface(&self, tol: &Tolerance) -> Result<PolyhedralSurface> {
        let faces = self.faces.clone().ok_or_else(|| schema("/faces".into(), "missing"))?;
        PolyhedralSurface::with_tolerance(self.points(), faces, tol)
    }

    pub fn suspension(&self, tol: &Tolerance) -> Result<Suspension> {
        let poles = self.poles.ok_or_else(|| schema("/poles".into(), "missing"))?;
        let eq = self.equator.as_ref().ok_or_else(|| schema("/equator".into(), "missing"))?;
        let p = self.points();
        if eq.len() + 2 != p.len() {
            return Err(schema("/equator".into(), "every vertex other than the poles must be on the equator"));
        }
        build_suspension(p[poles.north], p[poles.south], eq.iter().map(|&i| p[i]).collect(), tol)
    }

    pub fn decomposition(&self, tol: &Tolerance) -> Result<Decomposition> {
        let t = self.tetrahedra.clone().ok_or_else(|| schema("/tetrahedra".into(), "missing"))?;
        Decomposition::from_tetrahedra(self.points(), t, tol)
    }

    fn bare(points: &[Point3]) -> Self {
        FrameworkFile {
            version: FORMAT_VERSION,
            vertices: points.iter().map(|p| [p.x, p.y, p.z]).collect(),
            edges: Vec::new(),
            faces: None,
            poles: None,
            equator: None,
            tetrahedra: None,
            metadata: None,
        }
    }

    pub fn from_framework(fw: &Framework) -> Self {
        let mut f = Self::bare(fw.vertices());
        f.edges = fw.edges().iter().map(|&(i, j, kind)| EdgeRecord { i, j, kind }).collect();
        f
    }

    pub fn from_surface(s: &PolyhedralSurface) -> Self {
        let mut f = Self::bare(s.vertices());
        f.edges = s.edges().iter().map(|&(i, j)| EdgeRecord { i, j, kind: EdgeKind::Bar }).collect();
        f.faces = Some(s.faces().to_vec());
        f
    }

    /// Vertex order `N, S, p_1, ..., p_n`.
    pub fn from_suspension(s: &Suspension) -> Self {
        let mut f = Self::from_surface(s.surface());
        f.poles = Some(Poles { north: 0, south: 1 });
        f.equator = Some((2..2 + s.n()).collect());
        f
    }

    pub fn from_decomposition(d: &Decomposition) -> Self {
        let mut f = Self::from_surface(d.boundary());
        f.tetrahedra = Some(d.tetrahedra().to_vec());
        f
    }

    pub fn with_metadata(mut self, metadata: Value) -> Self {
        self.metadata = Some(metadata);
        self
    }
}
