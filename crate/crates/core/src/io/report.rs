use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::FrameworkFile;
use crate::error::Result;
use crate::geometry::{classify_convexity, ConvexityClass};
use crate::rigidity::{bar_flex_space, equilibrium_stress_space, rigidity_rank, EdgeKind};
use crate::tol::Tolerance;

/// Hex sha256 of the compact JSON encoding of the instance.
pub fn instance_hash(file: &FrameworkFile) -> String {
    let bytes = serde_json::to_vec(file).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

/// Output of every command. Contains no timings, so the same input, seed
/// and tolerances give byte-identical output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub instance_hash: Option<String>,
    pub seed: Option<u64>,
    pub tolerances: Tolerance,
    pub verdicts: Value,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Report {
    pub fn new(command: &str, instance: Option<&FrameworkFile>, tol: &Tolerance, verdicts: impl Serialize) -> Self {
        Report {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            instance_hash: instance.map(instance_hash),
            seed: None,
            tolerances: *tol,
            verdicts: serde_json::to_value(verdicts).expect("serializable"),
            details: Value::Null,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).expect("serializable");
        self
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisVerdicts {
    pub vertices: usize,
    pub edges: usize,
    pub cables: usize,
    pub struts: usize,
    pub affine_dimension: usize,
    pub rank: usize,
    /// Dimension of all infinitesimal flexes of the bar framework.
    pub flex_dimension: usize,
    pub trivial_dimension: usize,
    pub nontrivial_flex_dimension: usize,
    pub stress_dimension: usize,
    /// Bar framework rigidity; absent for configurations not spanning 3-space.
    pub rigid: Option<bool>,
    pub convexity: Option<ConvexityClass>,
    pub nonconvex_edges: Option<usize>,
}

pub fn analyze(file: &FrameworkFile, tol: &Tolerance) -> Result<AnalysisVerdicts> {
    let fw = file.framework(tol)?;
    let flex = bar_flex_space(&fw, tol);
    let dim = fw.affine_dimension(tol);
    let count = |k: EdgeKind| fw.edges().iter().filter(|e| e.2 == k).count();
    let convexity = match file.faces {
        Some(_) => Some(classify_convexity(&file.surface(tol)?, tol)),
        None => None,
    };
    Ok(AnalysisVerdicts {
        vertices: fw.num_vertices(),
        edges: fw.num_edges(),
        cables: count(EdgeKind::Cable),
        struts: count(EdgeKind::Strut),
        affine_dimension: dim,
        rank: rigidity_rank(&fw, tol),
        flex_dimension: flex.dimension,
        trivial_dimension: flex.trivial_dimension,
        nontrivial_flex_dimension: flex.dimension.saturating_sub(flex.trivial_dimension),
        stress_dimension: equilibrium_stress_space(&fw, tol).len(),
        rigid: (dim == 3).then(|| flex.is_rigid()),
        convexity: convexity.as_ref().map(|c| c.class),
        nonconvex_edges: convexity.as_ref().map(|c| c.nonconvex_count()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::surface::fixtures::octahedron;
    use crate::geometry::{Point3, ProjectiveMap};
    use nalgebra::{Rotation3, Vector3};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn octahedron_analysis() {
        let f = FrameworkFile::from_surface(&octahedron());
        let v = analyze(&f, &tol()).unwrap();
        assert_eq!((v.rank, v.flex_dimension, v.trivial_dimension, v.stress_dimension), (12, 6, 6, 0));
        assert_eq!(v.rigid, Some(true));
        assert_eq!(v.convexity, Some(ConvexityClass::StronglyStrictlyConvex));
    }

    #[test]
    fn verdicts_invariant_under_rigid_motion() {
        let f = FrameworkFile::from_surface(&octahedron());
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let m = ProjectiveMap::affine(rot.matrix(), &Vector3::new(4.0, -2.0, 0.5)).unwrap();
        let moved: Vec<Point3> = m.apply_points(&f.points(), &tol()).unwrap();
        let mut g = f.clone();
        g.vertices = moved.iter().map(|p| [p.x, p.y, p.z]).collect();
        assert_eq!(analyze(&f, &tol()).unwrap(), analyze(&g, &tol()).unwrap());
        assert_ne!(instance_hash(&f), instance_hash(&g));
    }

    #[test]
    fn hash_is_stable() {
        let f = FrameworkFile::from_surface(&octahedron());
        let h = instance_hash(&f);
        assert_eq!(h.len(), 64);
        assert_eq!(h, instance_hash(&FrameworkFile::from_json_str(&f.to_json_string()).unwrap()));
        let r = Report::new("analyze", Some(&f), &tol(), analyze(&f, &tol()).unwrap());
        let back: Report = serde_json::from_str(&r.to_json_string()).unwrap();
        assert_eq!(back, r);
    }
}
